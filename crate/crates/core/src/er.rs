//! One-pass level-bucketed partial cover with post-stream threshold
//! selection, and the two-scheme p-pass partial solver built on it.
//!
//! During a pass, each arriving set may be deemed to cover a subset T of
//! its elements at level i, where 2^i <= |T| < 2^{i+1}: T collects the
//! elements currently unowned or owned at a level below i. In parallel the
//! pass records, for every element, the first stream set containing it
//! (its backup). Once the stream ends, a threshold tau = 2^i is chosen and
//! elements owned at level >= i are covered by their owners; a shortfall
//! against the quota is made up from backups.

use crate::cert::Certificate;
use crate::exact::{ceil_div_root, ceil_root_scale, floor_div_root, floor_root_scale, Frac};
use crate::instance::{MeteredStream, SetRecord, SpaceMeter};
use crate::{Element, SetId};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartialCoverError {
    #[error("cannot reach the coverage quota even using every backup set")]
    InfeasibleSlack,
}

/// Per-element pass state over an optionally restricted universe.
#[derive(Clone, Debug)]
pub struct ErState {
    n: u64,
    active: Vec<bool>,
    active_count: u64,
    level: Vec<Option<u32>>,
    owner: Vec<SetId>,
    backup: Vec<SetId>,
    tset_sizes: BTreeMap<SetId, u64>,
}

impl ErState {
    pub fn new_full(n: u64) -> ErState {
        let mut active = vec![true; n as usize + 1];
        active[0] = false;
        ErState::with_active(n, active)
    }

    /// Restricts the pass to the elements marked active (1-based mask).
    pub fn new_restricted(n: u64, active: &[bool]) -> ErState {
        assert_eq!(active.len(), n as usize + 1);
        let mut mask = active.to_vec();
        mask[0] = false;
        ErState::with_active(n, mask)
    }

    fn with_active(n: u64, active: Vec<bool>) -> ErState {
        let active_count = active.iter().filter(|&&a| a).count() as u64;
        ErState {
            n,
            active,
            active_count,
            level: vec![None; n as usize + 1],
            owner: vec![0; n as usize + 1],
            backup: vec![0; n as usize + 1],
            tset_sizes: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn active_count(&self) -> u64 {
        self.active_count
    }

    pub fn is_active(&self, x: Element) -> bool {
        self.active[x as usize]
    }

    pub fn level(&self, x: Element) -> Option<u32> {
        self.level[x as usize]
    }

    pub fn owner(&self, x: Element) -> SetId {
        self.owner[x as usize]
    }

    pub fn backup(&self, x: Element) -> SetId {
        self.backup[x as usize]
    }

    /// |T| recorded when the set adopted its elements, if it ever did.
    pub fn tset_size(&self, id: SetId) -> Option<u64> {
        self.tset_sizes.get(&id).copied()
    }

    /// Words of auxiliary state currently held.
    fn words(&self) -> u64 {
        3 * self.active_count + 2 * self.tset_sizes.len() as u64
    }

    /// Processes one arriving set: finds the largest level i (scanning down
    /// from floor(log2 |S|)) whose candidate subset T reaches 2^i, steals
    /// those elements, and independently records first-set backups.
    pub fn observe(&mut self, rec: &SetRecord, meter: &mut SpaceMeter) {
        let candidates: Vec<Element> = rec
            .elements()
            .iter()
            .copied()
            .filter(|&x| self.active[x as usize])
            .collect();
        if candidates.is_empty() {
            return;
        }
        for &x in &candidates {
            if self.backup[x as usize] == 0 {
                self.backup[x as usize] = rec.id();
            }
        }
        let cap = 63 - (candidates.len() as u64).leading_zeros();
        for i in (0..=cap).rev() {
            let tset: Vec<Element> = candidates
                .iter()
                .copied()
                .filter(|&x| self.level[x as usize].map_or(true, |l| l < i))
                .collect();
            if (tset.len() as u64) >= (1 << i) {
                for &x in &tset {
                    self.level[x as usize] = Some(i);
                    self.owner[x as usize] = rec.id();
                }
                if self
                    .tset_sizes
                    .insert(rec.id(), tset.len() as u64)
                    .is_none()
                {
                    meter.charge(2);
                }
                return;
            }
        }
    }
}

/// One full level-bucketing pass over the whole universe.
pub fn er_pass(stream: &mut MeteredStream, meter: &mut SpaceMeter) -> ErState {
    let mut state = ErState::new_full(stream.n());
    meter.charge(3 * state.active_count());
    stream.run_pass(|rec| state.observe(rec, meter));
    state
}

/// Post-stream threshold selection with the slack taken from epsilon:
/// quota = ceil((1-eps) A) covered elements over the A active ones, with at
/// most ceil(eps A) of them via backups.
pub fn partial_select(state: &ErState, eps: Frac) -> Result<Certificate, PartialCoverError> {
    let a = state.active_count();
    partial_select_with(state, eps.quota(a), eps.ceil_mul(a))
}

/// Chooses the largest tau = 2^i whose backup shortfall
/// s(i) = max(0, quota - owner-covered(i)) fits the budget, covers the
/// level >= i elements by their owners and s(i) more (ascending element
/// order) by their backups. Falls back to tau = 1 and ignores the budget if
/// no threshold fits; errors only when even all backups cannot reach the
/// quota.
pub fn partial_select_with(
    state: &ErState,
    quota: u64,
    backup_budget: u64,
) -> Result<Certificate, PartialCoverError> {
    let a = state.active_count();
    debug_assert!(quota <= a);

    // below[i] = #active elements with no level or level < i.
    let mut below = [0u64; 66];
    for x in 1..=state.n {
        if !state.is_active(x) {
            continue;
        }
        match state.level(x) {
            None => {
                for slot in below.iter_mut() {
                    *slot += 1;
                }
            }
            Some(l) => {
                for slot in below.iter_mut().skip(l as usize + 1) {
                    *slot += 1;
                }
            }
        }
    }
    let shortfall = |i: usize| quota.saturating_sub(a - below[i]);
    let chosen = (0..=65)
        .rev()
        .find(|&i| shortfall(i) <= backup_budget)
        .unwrap_or(0);

    let mut cert = Certificate::empty(state.n);
    for x in 1..=state.n {
        if state.is_active(x) && state.level(x).is_some_and(|l| l as usize >= chosen) {
            cert.set_coverer(x, state.owner(x));
            cert.add_sol(state.owner(x));
        }
    }
    let mut covered = a - below[chosen];
    debug_assert_eq!(covered, cert.covered_count());
    if covered < quota {
        for x in 1..=state.n {
            if covered >= quota {
                break;
            }
            if state.is_active(x) && !cert.is_covered(x) && state.backup(x) != 0 {
                cert.set_coverer(x, state.backup(x));
                cert.add_sol(state.backup(x));
                covered += 1;
            }
        }
        if covered < quota {
            return Err(PartialCoverError::InfeasibleSlack);
        }
    }
    Ok(cert)
}

/// p-pass partial cover: two schemes share each stream traversal, one
/// shrinking the uncovered remainder by eps^{1/p} per pass and one by
/// n^{-1/(p+1)} per pass with a final backup completion; the smaller
/// solution wins. Coverage of ceil((1-eps) n) is guaranteed on total-cover
/// instances.
pub fn partial_cover_solve(
    stream: &mut MeteredStream,
    p: u32,
    eps: Frac,
    meter: &mut SpaceMeter,
) -> Result<Certificate, PartialCoverError> {
    assert!(p >= 1);
    assert!(eps.is_proper());
    let n = stream.n();
    let mut cert_a = Certificate::empty(n);
    let mut cert_b = Certificate::empty(n);
    meter.charge(2 * n);
    let mut completion_backup: Vec<SetId> = vec![0; n as usize + 1];

    for j in 1..=p {
        let active_a: Vec<bool> = (0..=n).map(|x| x >= 1 && !cert_a.is_covered(x)).collect();
        let active_b: Vec<bool> = (0..=n).map(|x| x >= 1 && !cert_b.is_covered(x)).collect();
        let mut st_a = ErState::new_restricted(n, &active_a);
        let mut st_b = ErState::new_restricted(n, &active_b);
        meter.charge(3 * (st_a.active_count() + st_b.active_count()));
        stream.run_pass(|rec| {
            st_a.observe(rec, meter);
            st_b.observe(rec, meter);
        });

        // A scheme whose pass quota is unreachable (possible only off the
        // total-cover contract) stops growing; the other one still runs.
        let count_a = st_a.active_count();
        let residual_a = floor_root_scale(eps, count_a, p);
        match partial_select_with(
            &st_a,
            count_a - residual_a,
            ceil_root_scale(eps, count_a, p),
        ) {
            Ok(sel) => merge_selection(&mut cert_a, &sel, meter),
            Err(PartialCoverError::InfeasibleSlack) => {}
        }

        let count_b = st_b.active_count();
        let residual_b = floor_div_root(count_b, n, p + 1);
        match partial_select_with(
            &st_b,
            count_b - residual_b,
            ceil_div_root(count_b, n, p + 1),
        ) {
            Ok(sel) => merge_selection(&mut cert_b, &sel, meter),
            Err(PartialCoverError::InfeasibleSlack) => {}
        }

        if j == p {
            completion_backup.copy_from_slice(&st_b.backup);
        }
        meter.release(st_a.words() + st_b.words());
    }

    // Scheme (b) completion: whatever is still uncovered takes its backup.
    for x in 1..=n {
        if !cert_b.is_covered(x) && completion_backup[x as usize] != 0 {
            if cert_b.add_sol(completion_backup[x as usize]) {
                meter.charge(1);
            }
            cert_b.set_coverer(x, completion_backup[x as usize]);
        }
    }

    let quota = eps.quota(n);
    let ok_a = cert_a.covered_count() >= quota;
    let ok_b = cert_b.covered_count() >= quota;
    match (ok_a, ok_b) {
        (true, true) => Ok(if cert_a.sol_size() <= cert_b.sol_size() {
            cert_a
        } else {
            cert_b
        }),
        (true, false) => Ok(cert_a),
        (false, true) => Ok(cert_b),
        (false, false) => Err(PartialCoverError::InfeasibleSlack),
    }
}

fn merge_selection(cert: &mut Certificate, sel: &Certificate, meter: &mut SpaceMeter) {
    for x in 1..=cert.n() {
        let id = sel.coverer(x);
        if id != 0 {
            debug_assert!(!cert.is_covered(x));
            cert.set_coverer(x, id);
            if cert.add_sol(id) {
                meter.charge(1);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cert::verify_certificate;
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

    fn er_example_state() -> (Instance, ErState) {
        let i = mk(4, &[(1, &[1]), (2, &[2]), (3, &[1, 2, 3, 4])]);
        let mut meter = SpaceMeter::new();
        let st = er_pass(&mut MeteredStream::new(&i), &mut meter);
        (i, st)
    }

    #[test]
    fn er_pass_levels_hand_trace() {
        let (_, st) = er_example_state();
        // sets 1 and 2 adopt their singletons at level 0; set 3 then steals
        // all four elements at level 2 (the level-0 owners sit below 2).
        for x in 1..=4 {
            assert_eq!(st.level(x), Some(2));
            assert_eq!(st.owner(x), 3);
        }
        assert_eq!(st.tset_size(1), Some(1));
        assert_eq!(st.tset_size(2), Some(1));
        assert_eq!(st.tset_size(3), Some(4));
        // backups are first-containing-set regardless of levels
        assert_eq!(
            (1..=4).map(|x| st.backup(x)).collect::<Vec<_>>(),
            vec![1, 2, 3, 3]
        );
    }

    #[test]
    fn er_single_set_takes_everything_at_log_level() {
        let i = mk(5, &[(7, &[1, 2, 3, 4, 5])]);
        let mut meter = SpaceMeter::new();
        let st = er_pass(&mut MeteredStream::new(&i), &mut meter);
        for x in 1..=5 {
            assert_eq!(st.level(x), Some(2), "floor(log2 5) = 2");
            assert_eq!(st.owner(x), 7);
        }
    }

    #[test]
    fn select_prefers_owners_within_slack() {
        let (i, st) = er_example_state();
        let cert = partial_select(&st, Frac::new(1, 4).unwrap()).unwrap();
        assert_eq!(cert.sol().iter().copied().collect::<Vec<_>>(), vec![3]);
        assert_eq!(cert.covered_count(), 4);
        assert!(verify_certificate(&i, &cert, Frac::new(1, 4).unwrap()).valid);
    }

    #[test]
    fn select_extremes() {
        let (i, st) = er_example_state();
        // eps = 1: maximal threshold, nothing needs covering.
        let cert = partial_select(&st, Frac::ONE).unwrap();
        assert!(cert.sol().is_empty());
        // eps = 0: everything covered.
        let cert = partial_select(&st, Frac::ZERO).unwrap();
        assert_eq!(cert.covered_count(), 4);
        assert!(verify_certificate(&i, &cert, Frac::ZERO).valid);
    }

    #[test]
    fn select_uses_backups_when_owners_are_too_small() {
        // Eight singletons, eps = 1/2: every owner T-set has size 1, so the
        // chosen threshold sits above them all and four backups do the job.
        let records: Vec<(u64, Vec<u64>)> = (1..=8).map(|x| (x, vec![x])).collect();
        let sets: Vec<(u64, &[u64])> = records.iter().map(|(id, v)| (*id, v.as_slice())).collect();
        let i = mk(8, &sets);
        let mut meter = SpaceMeter::new();
        let st = er_pass(&mut MeteredStream::new(&i), &mut meter);
        let cert = partial_select(&st, Frac::new(1, 2).unwrap()).unwrap();
        assert_eq!(cert.sol_size(), 4);
        assert_eq!(cert.covered_count(), 4);
    }

    #[test]
    fn partial_solver_examples() {
        // eps = 0, single full set: one pick.
        let i = mk(6, &[(9, &[1, 2, 3, 4, 5, 6])]);
        let mut meter = SpaceMeter::new();
        let cert =
            partial_cover_solve(&mut MeteredStream::new(&i), 1, Frac::ZERO, &mut meter).unwrap();
        assert_eq!(cert.sol_size(), 1);
        assert_eq!(cert.covered_count(), 6);

        // eps = 1/2 over eight singletons: four of them.
        let records: Vec<(u64, Vec<u64>)> = (1..=8).map(|x| (x, vec![x])).collect();
        let sets: Vec<(u64, &[u64])> = records.iter().map(|(id, v)| (*id, v.as_slice())).collect();
        let i = mk(8, &sets);
        let cert = partial_cover_solve(
            &mut MeteredStream::new(&i),
            1,
            Frac::new(1, 2).unwrap(),
            &mut SpaceMeter::new(),
        )
        .unwrap();
        assert_eq!(cert.sol_size(), 4);
    }

    #[test]
    fn infeasible_slack_surfaces_on_uncoverable_universes() {
        // Elements 3 and 4 appear in no set, so a quota of 3 is hopeless.
        let i = mk(4, &[(1, &[1]), (2, &[2])]);
        let mut meter = SpaceMeter::new();
        let st = er_pass(&mut MeteredStream::new(&i), &mut meter);
        let eps = Frac::new(1, 4).unwrap();
        assert_eq!(
            partial_select(&st, eps),
            Err(PartialCoverError::InfeasibleSlack)
        );
        assert_eq!(
            partial_cover_solve(&mut MeteredStream::new(&i), 1, eps, &mut SpaceMeter::new()),
            Err(PartialCoverError::InfeasibleSlack)
        );
        // A quota the coverable part can satisfy still succeeds.
        let eps = Frac::new(1, 2).unwrap();
        let cert = partial_cover_solve(&mut MeteredStream::new(&i), 1, eps, &mut SpaceMeter::new())
            .unwrap();
        assert!(cert.covered_count() >= 2);
    }

    #[test]
    fn partial_solver_survives_partial_coverability_over_passes() {
        let i = mk(6, &[(1, &[1]), (2, &[2]), (3, &[3]), (4, &[4])]);
        let eps = Frac::new(1, 3).unwrap(); // quota 4, exactly the coverable part
        let cert = partial_cover_solve(&mut MeteredStream::new(&i), 2, eps, &mut SpaceMeter::new())
            .unwrap();
        assert!(cert.covered_count() >= 4);
        assert!(verify_certificate(&i, &cert, eps).valid);
    }

    #[test]
    fn partial_solver_uses_exactly_p_passes() {
        let i = random_instance(3, 20, 12);
        for p in 1..=3 {
            let mut stream = MeteredStream::new(&i);
            partial_cover_solve(
                &mut stream,
                p,
                Frac::new(1, 4).unwrap(),
                &mut SpaceMeter::new(),
            )
            .unwrap();
            assert_eq!(stream.passes_used(), p as u64);
        }
    }

    proptest! {
        #[test]
        fn prop_partial_coverage_meets_quota(
            seed in 0u64..300,
            p in 1u32..=2,
            eps_num in 0u64..=2,
        ) {
            let eps = Frac::new(eps_num, 4).unwrap();
            let i = random_instance(seed, 30, 20);
            let mut meter = SpaceMeter::new();
            let cert =
                partial_cover_solve(&mut MeteredStream::new(&i), p, eps, &mut meter).unwrap();
            let report = verify_certificate(&i, &cert, eps);
            prop_assert!(report.valid, "{:?}", report.failures);
        }

        #[test]
        fn prop_levels_nondecreasing_within_pass(seed in 0u64..200) {
            let i = random_instance(seed, 25, 15);
            let mut st = ErState::new_full(i.n());
            let mut meter = SpaceMeter::new();
            let mut stream = MeteredStream::new(&i);
            let mut floor: Vec<Option<u32>> = vec![None; i.n() as usize + 1];
            stream.run_pass(|rec| {
                st.observe(rec, &mut meter);
                for x in 1..=i.n() {
                    let now = st.level(x);
                    let before = floor[x as usize];
                    assert!(now >= before, "level of {x} regressed");
                    floor[x as usize] = now;
                }
            });
        }

        #[test]
        fn prop_backup_is_first_containing_set(seed in 0u64..200) {
            let i = random_instance(seed, 25, 15);
            let mut meter = SpaceMeter::new();
            let st = er_pass(&mut MeteredStream::new(&i), &mut meter);
            for x in 1..=i.n() {
                let first = i.records().iter().find(|r| r.contains(x)).map_or(0, |r| r.id());
                prop_assert_eq!(st.backup(x), first);
            }
        }
    }
}
