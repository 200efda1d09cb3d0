//! Multi-pass progressive greedy solvers with exact threshold arithmetic.
//!
//! A pass with threshold tau accepts any arriving set whose contribution
//! (number of currently uncovered elements it contains) is at least tau.
//! Thresholds are of the form n^{num/den} and are compared exactly in
//! unbounded integers, never in floating point: the adversarial instances
//! in [`crate::generators`] sit right at the threshold boundaries.

use crate::cert::Certificate;
use crate::instance::{MeteredStream, SetRecord, SpaceMeter};
use crate::SetId;
use num_bigint::BigUint;

/// Decides `c >= n^{num/den}` by comparing `c^den >= n^num` exactly.
pub fn threshold_ge(c: u64, n: u64, num: u32, den: u32) -> bool {
    debug_assert!(den >= 1);
    BigUint::from(c).pow(den) >= BigUint::from(n).pow(num)
}

/// A pass threshold tau = n^{num/den}.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct PassConfig {
    pub n: u64,
    pub num: u32,
    pub den: u32,
}

impl PassConfig {
    /// Pass j of the p-pass naive schedule: tau_j = n^{1-j/p}.
    pub fn naive(n: u64, p: u32, j: u32) -> PassConfig {
        assert!(1 <= j && j <= p);
        PassConfig {
            n,
            num: p - j,
            den: p,
        }
    }

    /// Pass j of the folded schedule: tau_j = n^{1-j/(p+1)}.
    pub fn folded(n: u64, p: u32, j: u32) -> PassConfig {
        assert!(1 <= j && j <= p);
        PassConfig {
            n,
            num: p + 1 - j,
            den: p + 1,
        }
    }

    /// tau = 1: accepts any nonzero contribution.
    pub fn unit(n: u64) -> PassConfig {
        PassConfig { n, num: 0, den: 1 }
    }

    pub fn accepts(&self, contribution: u64) -> bool {
        threshold_ge(contribution, self.n, self.num, self.den)
    }

    /// Smallest integer contribution the pass accepts.
    pub fn tau_floor(&self) -> u64 {
        let (mut lo, mut hi) = (0u64, self.n.max(1));
        // accepts is monotone in the contribution; tau <= n since num <= den.
        debug_assert!(self.num <= self.den);
        debug_assert!(self.accepts(hi));
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.accepts(mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        lo
    }
}

/// Exact integer check of the solver's approximation guarantee against an
/// oracle optimum: |Sol|^{p+1} <= n (1 + p opt)^{p+1} for the folded
/// schedule, |Sol|^p <= n (1 + (p-1) opt)^p for the naive one.
pub fn approx_bound_holds(sol_size: u64, n: u64, p: u32, opt: u64, folded: bool) -> bool {
    let (exp, factor) = if folded {
        (p + 1, p as u64)
    } else {
        (p, p as u64 - 1)
    };
    BigUint::from(sol_size).pow(exp) <= BigUint::from(n) * BigUint::from(1 + factor * opt).pow(exp)
}

/// Statistics of one greedy pass, enough to check the per-pass counting
/// bound `added * tau_floor <= uncovered_at_start`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct PassStats {
    pub added: u64,
    pub max_contrib: u64,
    pub uncovered_at_start: u64,
    pub tau_floor: u64,
}

/// Solver output: the certificate plus per-pass statistics.
#[derive(Clone, Debug)]
pub struct GreedyRun {
    pub cert: Certificate,
    pub passes: Vec<PassStats>,
}

/// Processes one token: measures the contribution against the current
/// coverage and, if accepted, adds the set and covers its new elements.
fn apply_token(
    cfg: &PassConfig,
    rec: &SetRecord,
    cert: &mut Certificate,
    meter: &mut SpaceMeter,
) -> (bool, u64) {
    let contrib = rec
        .elements()
        .iter()
        .filter(|&&x| !cert.is_covered(x))
        .count() as u64;
    if !cfg.accepts(contrib) {
        return (false, contrib);
    }
    if cert.add_sol(rec.id()) {
        meter.charge(1);
    }
    for &x in rec.elements() {
        if !cert.is_covered(x) {
            cert.set_coverer(x, rec.id());
        }
    }
    (true, contrib)
}

/// One thresholded pass over the stream, mutating (sol, coverer) in place.
pub fn greedy_pass(
    stream: &mut MeteredStream,
    cfg: PassConfig,
    cert: &mut Certificate,
    meter: &mut SpaceMeter,
) -> PassStats {
    let uncovered_at_start = stream.n() - cert.covered_count();
    let mut added = 0u64;
    let mut max_contrib = 0u64;
    stream.run_pass(|rec| {
        let (accepted, contrib) = apply_token(&cfg, rec, cert, meter);
        max_contrib = max_contrib.max(contrib);
        if accepted {
            added += 1;
        }
    });
    PassStats {
        added,
        max_contrib,
        uncovered_at_start,
        tau_floor: cfg.tau_floor(),
    }
}

/// The p-pass naive schedule: pass j runs at tau_j = n^{1-j/p}; the final
/// pass has tau = 1 and completes the cover. On total-cover instances the
/// output satisfies |Sol| <= n^{1/p} (1 + (p-1)|Opt|).
pub fn prog_greedy_naive(stream: &mut MeteredStream, p: u32, meter: &mut SpaceMeter) -> GreedyRun {
    assert!(p >= 1);
    let n = stream.n();
    let mut cert = Certificate::empty(n);
    meter.charge(n); // Coverer
    let mut passes = Vec::with_capacity(p as usize);
    for j in 1..=p {
        passes.push(greedy_pass(
            stream,
            PassConfig::naive(n, p, j),
            &mut cert,
            meter,
        ));
    }
    GreedyRun { cert, passes }
}

/// The p-pass folded schedule: passes 1..p-1 run at tau_j = n^{1-j/(p+1)};
/// the final traversal performs two updates per token, the tau_p update on
/// (Sol, Coverer) and a tau = 1 update on (Alt, Backup); leftover elements
/// are then covered from Backup. Output is identical to
/// `prog_greedy_naive` with p+1 passes, so |Sol| <= n^{1/(p+1)} (1 + p|Opt|).
pub fn prog_greedy(stream: &mut MeteredStream, p: u32, meter: &mut SpaceMeter) -> GreedyRun {
    assert!(p >= 1);
    let n = stream.n();
    let mut cert = Certificate::empty(n);
    meter.charge(n); // Coverer
    let mut backup: Vec<SetId> = vec![0; n as usize + 1];
    meter.charge(n); // Backup
    let mut alt: std::collections::BTreeSet<SetId> = std::collections::BTreeSet::new();

    let mut passes = Vec::with_capacity(p as usize);
    for j in 1..=p - 1 {
        passes.push(greedy_pass(
            stream,
            PassConfig::folded(n, p, j),
            &mut cert,
            meter,
        ));
    }

    // Final pass: both updates share one cursor traversal, costing one pass.
    let main_cfg = PassConfig::folded(n, p, p);
    let uncovered_at_start = n - cert.covered_count();
    let mut added = 0u64;
    let mut max_contrib = 0u64;
    stream.run_pass(|rec| {
        let (accepted, contrib) = apply_token(&main_cfg, rec, &mut cert, meter);
        max_contrib = max_contrib.max(contrib);
        if accepted {
            added += 1;
        }
        let mut any_new = false;
        for &x in rec.elements() {
            if backup[x as usize] == 0 {
                backup[x as usize] = rec.id();
                any_new = true;
            }
        }
        if any_new && alt.insert(rec.id()) {
            meter.charge(1); // Alt
        }
    });
    passes.push(PassStats {
        added,
        max_contrib,
        uncovered_at_start,
        tau_floor: main_cfg.tau_floor(),
    });

    // Post-processing: elements Sol missed are covered by their Backup set.
    for x in 1..=n {
        if !cert.is_covered(x) && backup[x as usize] != 0 {
            if cert.add_sol(backup[x as usize]) {
                meter.charge(1);
            }
            cert.set_coverer(x, backup[x as usize]);
        }
    }
    GreedyRun { cert, passes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cert::verify_certificate;
    use crate::exact::Frac;
    use crate::generators::random_instance;
    use crate::instance::{Instance, SetRecord};
    use proptest::prelude::*;

    fn mk(n: u64, sets: &[(u64, &[u64])]) -> Instance {
        let records = sets
            .iter()
            .map(|&(id, els)| SetRecord::new(id, els.to_vec()))
            .collect();
        Instance::new(n, records, Some(Frac::ONE)).unwrap()
    }

    #[test]
    fn threshold_examples() {
        // tau = sqrt(8): 2^2 = 4 < 8, 3^2 = 9 >= 8
        assert!(!threshold_ge(2, 8, 1, 2));
        assert!(threshold_ge(3, 8, 1, 2));
        // tau = 1 accepts any c >= 1 and rejects 0
        assert!(threshold_ge(1, 8, 0, 2));
        assert!(threshold_ge(7, 8, 0, 1));
        assert!(!threshold_ge(0, 8, 0, 1));
    }

    #[test]
    fn tau_floor_examples() {
        assert_eq!(
            PassConfig {
                n: 8,
                num: 1,
                den: 2
            }
            .tau_floor(),
            3
        );
        assert_eq!(
            PassConfig {
                n: 4,
                num: 1,
                den: 2
            }
            .tau_floor(),
            2
        );
        assert_eq!(PassConfig::unit(8).tau_floor(), 1);
        assert_eq!(
            PassConfig {
                n: 9,
                num: 2,
                den: 2
            }
            .tau_floor(),
            9
        );
    }

    #[test]
    fn greedy_pass_hand_trace() {
        // Contributions are measured against the coverage at token arrival:
        // set 1 covers {1,2,3}; set 2 then contributes only {4}, below tau=2.
        let i = mk(4, &[(1, &[1, 2, 3]), (2, &[3, 4])]);
        let mut stream = MeteredStream::new(&i);
        let mut cert = Certificate::empty(4);
        let mut meter = SpaceMeter::new();
        let cfg = PassConfig {
            n: 4,
            num: 1,
            den: 2,
        }; // tau = 2
        let stats = greedy_pass(&mut stream, cfg, &mut cert, &mut meter);
        assert_eq!(cert.sol().iter().copied().collect::<Vec<_>>(), vec![1]);
        assert_eq!(
            (1..=4).map(|x| cert.coverer(x)).collect::<Vec<_>>(),
            vec![1, 1, 1, 0]
        );
        assert_eq!(stats.added, 1);
        assert_eq!(stats.max_contrib, 3);
        assert_eq!(stats.uncovered_at_start, 4);

        // tau = 4: no contribution reaches it.
        let mut stream = MeteredStream::new(&i);
        let mut cert = Certificate::empty(4);
        let stats = greedy_pass(
            &mut stream,
            PassConfig {
                n: 4,
                num: 2,
                den: 2,
            },
            &mut cert,
            &mut meter,
        );
        assert!(cert.sol().is_empty());
        assert_eq!(stats.added, 0);

        // Re-running the tau=2 pass on the resulting state adds nothing new.
        let mut stream = MeteredStream::new(&i);
        let mut cert = Certificate::empty(4);
        greedy_pass(&mut stream, cfg, &mut cert, &mut meter);
        let stats = greedy_pass(&mut stream, cfg, &mut cert, &mut meter);
        assert_eq!(stats.added, 0);
    }

    #[test]
    fn single_full_set_needs_one_pick() {
        let i = mk(6, &[(9, &[1, 2, 3, 4, 5, 6])]);
        let mut meter = SpaceMeter::new();
        let run = prog_greedy_naive(&mut MeteredStream::new(&i), 1, &mut meter);
        assert_eq!(run.cert.sol_size(), 1);
        let mut meter = SpaceMeter::new();
        let run = prog_greedy(&mut MeteredStream::new(&i), 1, &mut meter);
        assert_eq!(run.cert.sol_size(), 1);
        assert_eq!(run.cert.covered_count(), 6);
    }

    #[test]
    fn singleton_stream_takes_everything() {
        let records: Vec<(u64, Vec<u64>)> = (1..=5).map(|x| (x, vec![x])).collect();
        let sets: Vec<(u64, &[u64])> = records.iter().map(|(id, v)| (*id, v.as_slice())).collect();
        let i = mk(5, &sets);
        let mut meter = SpaceMeter::new();
        let run = prog_greedy_naive(&mut MeteredStream::new(&i), 1, &mut meter);
        assert_eq!(run.cert.sol_size(), 5);
    }

    #[test]
    fn pass_counter_matches_declared_p() {
        let i = mk(4, &[(1, &[1, 2]), (2, &[3, 4])]);
        for p in 1..=4 {
            let mut stream = MeteredStream::new(&i);
            prog_greedy_naive(&mut stream, p, &mut SpaceMeter::new());
            assert_eq!(stream.passes_used(), p as u64);
            let mut stream = MeteredStream::new(&i);
            prog_greedy(&mut stream, p, &mut SpaceMeter::new());
            assert_eq!(stream.passes_used(), p as u64);
        }
    }

    proptest! {
        #[test]
        fn prop_folding_equivalence(seed in 0u64..500, p in 1u32..=3) {
            let i = random_instance(seed, 20, 15);
            let mut m1 = SpaceMeter::new();
            let run_folded = prog_greedy(&mut MeteredStream::new(&i), p, &mut m1);
            let mut m2 = SpaceMeter::new();
            let run_naive = prog_greedy_naive(&mut MeteredStream::new(&i), p + 1, &mut m2);
            prop_assert_eq!(run_folded.cert, run_naive.cert);
        }

        #[test]
        fn prop_certificates_verify_and_meter_bounded(seed in 0u64..500, p in 1u32..=3) {
            let i = random_instance(seed, 24, 18);
            let n = i.n();
            let mut meter = SpaceMeter::new();
            let run = prog_greedy(&mut MeteredStream::new(&i), p, &mut meter);
            let report = verify_certificate(&i, &run.cert, Frac::ZERO);
            prop_assert!(report.valid, "{:?}", report.failures);
            prop_assert!(meter.peak_words() <= 4 * n + 64);

            let mut meter = SpaceMeter::new();
            let run = prog_greedy_naive(&mut MeteredStream::new(&i), p, &mut meter);
            let report = verify_certificate(&i, &run.cert, Frac::ZERO);
            prop_assert!(report.valid, "{:?}", report.failures);
            prop_assert!(meter.peak_words() <= 2 * n + 64);
        }

        #[test]
        fn prop_per_pass_counting_bound(seed in 0u64..500, p in 1u32..=4) {
            let i = random_instance(seed, 30, 20);
            let mut meter = SpaceMeter::new();
            let run = prog_greedy_naive(&mut MeteredStream::new(&i), p, &mut meter);
            for stats in &run.passes {
                prop_assert!(stats.added * stats.tau_floor <= stats.uncovered_at_start);
            }
        }

        #[test]
        fn prop_naive_bound_against_oracle(seed in 0u64..200, p in 1u32..=3) {
            // |Sol|^p <= n (1 + (p-1) opt)^p in exact integers.
            let i = random_instance(seed, 24, 16);
            let run = prog_greedy_naive(&mut MeteredStream::new(&i), p, &mut SpaceMeter::new());
            let oracle = crate::baselines::exact_cover(&i, i.n(), 1 << 22);
            prop_assert!(approx_bound_holds(run.cert.sol_size(), i.n(), p, oracle.opt_size, false));
        }

        #[test]
        fn prop_coverage_monotone_across_passes(seed in 0u64..200, p in 2u32..=3) {
            let i = random_instance(seed, 20, 12);
            let n = i.n();
            let mut stream = MeteredStream::new(&i);
            let mut cert = Certificate::empty(n);
            let mut meter = SpaceMeter::new();
            let mut last = 0u64;
            for j in 1..=p {
                greedy_pass(&mut stream, PassConfig::naive(n, p, j), &mut cert, &mut meter);
                let now = cert.covered_count();
                prop_assert!(now >= last);
                last = now;
            }
            prop_assert_eq!(last, n);
        }
    }
}
