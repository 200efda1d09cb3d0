//! Set-cover instances, the replayable pass-counting stream cursor, the
//! auxiliary-space meter, and the `coverstream v1` text format.

use crate::exact::Frac;
use crate::{Element, SetId};
use std::collections::BTreeSet;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("element {element} out of range [1, {n}]")]
    ElementOutOfRange { element: Element, n: u64 },
    #[error("duplicate set id {0}")]
    DuplicateId(SetId),
    #[error("set ids must be positive")]
    ZeroId,
    #[error("universe size must be at least 1")]
    EmptyUniverse,
    #[error("universe size {0} exceeds the supported maximum {MAX_UNIVERSE}")]
    UniverseTooLarge(u64),
    #[error("eps must lie in [0, 1]")]
    BadEps,
    #[error("records do not cover the universe (element {0} is uncovered) and no eps is declared")]
    NotACover(Element),
}

/// Cap on n; validators and solvers hold O(n) words per run.
pub const MAX_UNIVERSE: u64 = 1 << 26;

/// One stream token: a set id together with its sorted element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetRecord {
    id: SetId,
    elements: Vec<Element>,
}

impl SetRecord {
    /// Sorts and deduplicates; ids must be positive.
    pub fn new(id: SetId, mut elements: Vec<Element>) -> SetRecord {
        assert!(id > 0, "set ids must be positive");
        elements.sort_unstable();
        elements.dedup();
        SetRecord { id, elements }
    }

    pub fn id(&self) -> SetId {
        self.id
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: Element) -> bool {
        self.elements.binary_search(&x).is_ok()
    }
}

/// An ordered multiset of records over the universe `{1..n}`. The stream is
/// exactly the record order. When `epsilon` is absent the records must
/// jointly cover the universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    n: u64,
    records: Vec<SetRecord>,
    epsilon: Option<Frac>,
}

impl Instance {
    pub fn new(
        n: u64,
        records: Vec<SetRecord>,
        epsilon: Option<Frac>,
    ) -> Result<Instance, InstanceError> {
        if n == 0 {
            return Err(InstanceError::EmptyUniverse);
        }
        if n > MAX_UNIVERSE {
            return Err(InstanceError::UniverseTooLarge(n));
        }
        if let Some(eps) = epsilon {
            if !eps.is_proper() {
                return Err(InstanceError::BadEps);
            }
        }
        let mut seen = BTreeSet::new();
        for rec in &records {
            if rec.id == 0 {
                return Err(InstanceError::ZeroId);
            }
            if !seen.insert(rec.id) {
                return Err(InstanceError::DuplicateId(rec.id));
            }
            for &x in &rec.elements {
                if x == 0 || x > n {
                    return Err(InstanceError::ElementOutOfRange { element: x, n });
                }
            }
        }
        if epsilon.is_none() {
            let mut covered = vec![false; n as usize + 1];
            for rec in &records {
                for &x in &rec.elements {
                    covered[x as usize] = true;
                }
            }
            if let Some(x) = (1..=n).find(|&x| !covered[x as usize]) {
                return Err(InstanceError::NotACover(x));
            }
        }
        Ok(Instance {
            n,
            records,
            epsilon,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.records.len() as u64
    }

    pub fn records(&self) -> &[SetRecord] {
        &self.records
    }

    pub fn epsilon(&self) -> Option<Frac> {
        self.epsilon
    }

    pub fn record_by_id(&self, id: SetId) -> Option<&SetRecord> {
        self.records.iter().find(|r| r.id == id)
    }
}

/// Replayable read cursor over an instance. A pass is one full traversal in
/// record order; the pass counter increments exactly when the cursor wraps
/// from the last record back to the first.
pub struct MeteredStream<'a> {
    source: &'a Instance,
    cursor: usize,
    passes_used: u64,
}

impl<'a> MeteredStream<'a> {
    pub fn new(source: &'a Instance) -> MeteredStream<'a> {
        MeteredStream {
            source,
            cursor: 0,
            passes_used: 0,
        }
    }

    pub fn source(&self) -> &'a Instance {
        self.source
    }

    pub fn n(&self) -> u64 {
        self.source.n
    }

    pub fn passes_used(&self) -> u64 {
        self.passes_used
    }

    /// Runs one full pass, feeding every record to `f` in stream order.
    pub fn run_pass(&mut self, mut f: impl FnMut(&'a SetRecord)) {
        debug_assert_eq!(self.cursor, 0, "pass started mid-stream");
        let m = self.source.records.len();
        for _ in 0..m {
            f(&self.source.records[self.cursor]);
            self.cursor += 1;
        }
        self.cursor = 0;
        self.passes_used += 1;
    }
}

/// Counts machine words of auxiliary solver state. Charged for certificate
/// arrays, solution id-sets, and per-element partial-cover state; never for
/// the instance itself.
#[derive(Clone, Debug, Default)]
pub struct SpaceMeter {
    current_words: u64,
    peak_words: u64,
}

impl SpaceMeter {
    pub fn new() -> SpaceMeter {
        SpaceMeter::default()
    }

    pub fn charge(&mut self, words: u64) {
        self.current_words += words;
        self.peak_words = self.peak_words.max(self.current_words);
    }

    pub fn release(&mut self, words: u64) {
        assert!(self.current_words >= words, "space meter underflow");
        self.current_words -= words;
    }

    pub fn current_words(&self) -> u64 {
        self.current_words
    }

    pub fn peak_words(&self) -> u64 {
        self.peak_words
    }
}

/// Parses the `coverstream v1` text format.
///
/// ```text
/// coverstream v1
/// n <n> m <m> [eps <decimal>]
/// <id> <count> <e1> ... <ec>     (m lines, elements strictly ascending)
/// ```
///
/// Lines prefixed with `#` are comments; blank lines are ignored.
pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
    let syntax = |line: usize, msg: &str| InstanceError::Syntax {
        line,
        msg: msg.to_string(),
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));

    let (ln, header) = lines.next().ok_or_else(|| syntax(1, "missing header"))?;
    if header.trim() != "coverstream v1" {
        return Err(syntax(ln, "expected `coverstream v1` header"));
    }

    let (ln, counts) = lines
        .next()
        .ok_or_else(|| syntax(ln + 1, "missing counts line"))?;
    let tokens: Vec<&str> = counts.split_whitespace().collect();
    let (n, m, epsilon) = match tokens.as_slice() {
        ["n", n, "m", m] => (n, m, None),
        ["n", n, "m", m, "eps", e] => {
            let eps = Frac::parse(e).map_err(|_| syntax(ln, "invalid eps"))?;
            if !eps.is_proper() {
                return Err(InstanceError::BadEps);
            }
            (n, m, Some(eps))
        }
        _ => return Err(syntax(ln, "expected `n <n> m <m> [eps <decimal>]`")),
    };
    let n: u64 = n.parse().map_err(|_| syntax(ln, "invalid n"))?;
    let m: u64 = m.parse().map_err(|_| syntax(ln, "invalid m"))?;

    let mut records = Vec::with_capacity(m.min(1 << 20) as usize);
    for _ in 0..m {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| syntax(ln, "fewer records than m"))?;
        let mut it = line.split_whitespace();
        let id: SetId = it
            .next()
            .ok_or_else(|| syntax(ln, "empty record line"))?
            .parse()
            .map_err(|_| syntax(ln, "invalid set id"))?;
        if id == 0 {
            return Err(InstanceError::ZeroId);
        }
        let count: usize = it
            .next()
            .ok_or_else(|| syntax(ln, "missing element count"))?
            .parse()
            .map_err(|_| syntax(ln, "invalid element count"))?;
        let mut elements = Vec::with_capacity(count.min(1 << 20));
        for tok in it {
            let x: Element = tok.parse().map_err(|_| syntax(ln, "invalid element"))?;
            if let Some(&prev) = elements.last() {
                if x <= prev {
                    return Err(syntax(ln, "elements must be strictly ascending"));
                }
            }
            elements.push(x);
        }
        if elements.len() != count {
            return Err(syntax(ln, "element count does not match list length"));
        }
        records.push(SetRecord { id, elements });
    }
    if let Some((ln, _)) = lines.next() {
        return Err(syntax(ln, "trailing content after last record"));
    }
    Instance::new(n, records, epsilon)
}

/// Canonical text for an instance; `parse_instance(write_instance(i)) == i`.
pub fn write_instance(instance: &Instance) -> String {
    let mut out = String::from("coverstream v1\n");
    match instance.epsilon {
        Some(eps) => {
            let _ = writeln!(out, "n {} m {} eps {}", instance.n, instance.m(), eps);
        }
        None => {
            let _ = writeln!(out, "n {} m {}", instance.n, instance.m());
        }
    }
    for rec in &instance.records {
        let _ = write!(out, "{} {}", rec.id, rec.len());
        for &x in &rec.elements {
            let _ = write!(out, " {x}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn inst(text: &str) -> Result<Instance, InstanceError> {
        parse_instance(text)
    }

    #[test]
    fn parses_a_small_cover() {
        let i = inst("coverstream v1\nn 3 m 2\n7 2 1 2\n9 2 2 3\n").unwrap();
        assert_eq!(i.n(), 3);
        assert_eq!(i.m(), 2);
        assert_eq!(i.records()[0].id(), 7);
        assert_eq!(i.records()[0].elements(), &[1, 2]);
        assert_eq!(i.records()[1].elements(), &[2, 3]);
        assert_eq!(i.epsilon(), None);
    }

    #[test]
    fn element_out_of_range() {
        let err = inst("coverstream v1\nn 3 m 1\n1 3 1 2 4\n").unwrap_err();
        assert_eq!(err, InstanceError::ElementOutOfRange { element: 4, n: 3 });
    }

    #[test]
    fn not_a_cover_without_eps() {
        let err = inst("coverstream v1\nn 2 m 1\n1 1 1\n").unwrap_err();
        assert_eq!(err, InstanceError::NotACover(2));
        // The same records with an eps header parse fine.
        let i = inst("coverstream v1\nn 2 m 1 eps 0.5\n1 1 1\n").unwrap();
        assert_eq!(i.epsilon(), Some(Frac::new(1, 2).unwrap()));
    }

    #[test]
    fn duplicate_id_rejected() {
        let err = inst("coverstream v1\nn 2 m 2\n1 1 1\n1 1 2\n").unwrap_err();
        assert_eq!(err, InstanceError::DuplicateId(1));
    }

    #[test]
    fn unsorted_or_duplicate_elements_rejected() {
        assert!(matches!(
            inst("coverstream v1\nn 3 m 1\n1 3 2 1 3\n").unwrap_err(),
            InstanceError::Syntax { line: 3, .. }
        ));
        assert!(matches!(
            inst("coverstream v1\nn 3 m 1\n1 3 1 1 3\n").unwrap_err(),
            InstanceError::Syntax { .. }
        ));
    }

    #[test]
    fn comments_and_blank_lines_skipped() {
        let i = inst("# generated\ncoverstream v1\n\nn 1 m 1\n# the only set\n5 1 1\n").unwrap();
        assert_eq!(i.records()[0].id(), 5);
    }

    #[test]
    fn oversized_universe_rejected() {
        let err = inst("coverstream v1\nn 99999999999 m 1 eps 1\n1 1 1\n").unwrap_err();
        assert_eq!(err, InstanceError::UniverseTooLarge(99999999999));
    }

    #[test]
    fn bad_header_and_counts() {
        assert!(matches!(
            inst("coverstream v2\n"),
            Err(InstanceError::Syntax { .. })
        ));
        assert!(matches!(
            inst("coverstream v1\nn 2\n"),
            Err(InstanceError::Syntax { .. })
        ));
        assert!(matches!(
            inst("coverstream v1\nn 1 m 1\n1 1 1\nextra\n"),
            Err(InstanceError::Syntax { .. })
        ));
    }

    #[test]
    fn empty_sets_are_accepted_by_the_parser() {
        let i = inst("coverstream v1\nn 1 m 2\n1 0\n2 1 1\n").unwrap();
        assert!(i.records()[0].is_empty());
    }

    #[test]
    fn round_trip_preserves_stream_order() {
        let text = "coverstream v1\nn 3 m 2\n9 2 2 3\n7 2 1 2\n";
        let i = inst(text).unwrap();
        assert_eq!(write_instance(&i), text);
        assert_eq!(parse_instance(&write_instance(&i)).unwrap(), i);
    }

    #[test]
    fn meter_counts_passes_and_replays_identically() {
        let i = inst("coverstream v1\nn 3 m 2\n7 2 1 2\n9 2 2 3\n").unwrap();
        let mut stream = MeteredStream::new(&i);
        let mut first = Vec::new();
        stream.run_pass(|r| first.push(r.id()));
        assert_eq!(stream.passes_used(), 1);
        let mut second = Vec::new();
        stream.run_pass(|r| second.push(r.id()));
        assert_eq!(stream.passes_used(), 2);
        assert_eq!(first, second);
        assert_eq!(first, vec![7, 9]);
    }

    #[test]
    fn space_meter_tracks_peak() {
        let mut meter = SpaceMeter::new();
        meter.charge(10);
        meter.charge(5);
        meter.release(12);
        meter.charge(4);
        assert_eq!(meter.current_words(), 7);
        assert_eq!(meter.peak_words(), 15);
    }

    prop_compose! {
        fn arb_instance()(n in 1u64..12)(
            n in Just(n),
            sets in prop::collection::vec(
                prop::collection::btree_set(1u64..=n, 0..6),
                1..8,
            ),
            eps_num in 0u64..=4,
        ) -> Instance {
            let mut records: Vec<SetRecord> = sets
                .into_iter()
                .enumerate()
                .map(|(i, s)| SetRecord::new(i as u64 + 1, s.into_iter().collect()))
                .collect();
            // Top up with singletons so the cover guarantee holds.
            let covered: BTreeSet<u64> =
                records.iter().flat_map(|r| r.elements().iter().copied()).collect();
            let mut next_id = records.len() as u64 + 1;
            for x in 1..=n {
                if !covered.contains(&x) {
                    records.push(SetRecord::new(next_id, vec![x]));
                    next_id += 1;
                }
            }
            let eps = (eps_num > 0).then(|| Frac::new(eps_num, 4).unwrap());
            Instance::new(n, records, eps).unwrap()
        }
    }

    proptest! {
        #[test]
        fn prop_round_trip_identity(i in arb_instance()) {
            let text = write_instance(&i);
            prop_assert_eq!(parse_instance(&text).unwrap(), i);
        }
    }
}
