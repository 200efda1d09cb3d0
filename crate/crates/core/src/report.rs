//! Machine-readable run reports.

use crate::SetId;
use serde::{Deserialize, Serialize};

/// JSON report of one solver run. `opt` and `ratio` are present only when
/// an oracle result is available; `ratio = sol_size / opt` for opt > 0.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SolveReport {
    pub n: u64,
    pub m: u64,
    pub alg: String,
    pub p: u32,
    pub passes: u64,
    pub peak_aux_words: u64,
    pub sol_size: u64,
    pub sol_ids: Vec<SetId>,
    pub covered: u64,
    pub opt: Option<u64>,
    pub ratio: Option<f64>,
    pub seed: Option<u64>,
}

impl SolveReport {
    pub fn with_opt(mut self, opt: u64) -> SolveReport {
        self.opt = Some(opt);
        self.ratio = (opt > 0).then(|| self.sol_size as f64 / opt as f64);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_round_trips_and_ratio_rule() {
        let r = SolveReport {
            n: 8,
            m: 5,
            alg: "naive".into(),
            p: 2,
            passes: 2,
            peak_aux_words: 12,
            sol_size: 4,
            sol_ids: vec![1, 2, 3, 4],
            covered: 8,
            opt: None,
            ratio: None,
            seed: Some(7),
        }
        .with_opt(1);
        assert_eq!(r.ratio, Some(4.0));
        let json = serde_json::to_string(&r).unwrap();
        let back: SolveReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
