//! Coverage certificates and their verifier.

use crate::exact::Frac;
use crate::instance::Instance;
use crate::{Element, SetId};
use std::collections::{BTreeMap, BTreeSet};

/// The verifiable output of a solver: for each element, the id of the chosen
/// set covering it (0 = uncovered), together with the solution id-set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    n: u64,
    /// Indexed by element, slot 0 unused.
    coverer: Vec<SetId>,
    sol: BTreeSet<SetId>,
}

impl Certificate {
    pub fn empty(n: u64) -> Certificate {
        Certificate {
            n,
            coverer: vec![0; n as usize + 1],
            sol: BTreeSet::new(),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn coverer(&self, x: Element) -> SetId {
        self.coverer[x as usize]
    }

    pub fn is_covered(&self, x: Element) -> bool {
        self.coverer[x as usize] != 0
    }

    pub fn set_coverer(&mut self, x: Element, id: SetId) {
        self.coverer[x as usize] = id;
    }

    /// Returns true if the id was not already in the solution.
    pub fn add_sol(&mut self, id: SetId) -> bool {
        self.sol.insert(id)
    }

    pub fn sol(&self) -> &BTreeSet<SetId> {
        &self.sol
    }

    pub fn sol_size(&self) -> u64 {
        self.sol.len() as u64
    }

    pub fn covered_count(&self) -> u64 {
        self.coverer[1..].iter().filter(|&&id| id != 0).count() as u64
    }

    pub fn uncovered(&self) -> impl Iterator<Item = Element> + '_ {
        (1..=self.n).filter(move |&x| self.coverer[x as usize] == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertFailure {
    /// `coverer[x]` names a set id absent from the solution.
    DanglingCoverer { element: Element, id: SetId },
    /// `coverer[x]` names a set that does not contain x.
    NotMember { element: Element, id: SetId },
    /// `coverer[x]` names an id that does not occur in the instance.
    UnknownId { element: Element, id: SetId },
    /// A solution id never occurs as a coverer.
    UnusedSolId { id: SetId },
    /// Fewer elements covered than the quota requires.
    CoverageShortfall { covered: u64, quota: u64 },
    /// Certificate sized for a different universe.
    DimensionMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertReport {
    pub valid: bool,
    pub covered_count: u64,
    pub quota: u64,
    pub failures: Vec<CertFailure>,
}

/// Checks certificate well-formedness and that coverage meets
/// `ceil((1 - eps) * n)`. Returns structured failure reasons rather than
/// erroring.
pub fn verify_certificate(instance: &Instance, cert: &Certificate, eps: Frac) -> CertReport {
    let n = instance.n();
    let quota = eps.quota(n);
    let mut failures = Vec::new();
    if cert.n != n {
        return CertReport {
            valid: false,
            covered_count: 0,
            quota,
            failures: vec![CertFailure::DimensionMismatch],
        };
    }
    let by_id: BTreeMap<SetId, usize> = instance
        .records()
        .iter()
        .enumerate()
        .map(|(i, r)| (r.id(), i))
        .collect();
    let mut used: BTreeSet<SetId> = BTreeSet::new();
    let mut covered = 0u64;
    for x in 1..=n {
        let id = cert.coverer(x);
        if id == 0 {
            continue;
        }
        covered += 1;
        if !cert.sol.contains(&id) {
            failures.push(CertFailure::DanglingCoverer { element: x, id });
        }
        match by_id.get(&id) {
            None => failures.push(CertFailure::UnknownId { element: x, id }),
            Some(&i) => {
                if !instance.records()[i].contains(x) {
                    failures.push(CertFailure::NotMember { element: x, id });
                }
            }
        }
        used.insert(id);
    }
    for &id in &cert.sol {
        if !used.contains(&id) {
            failures.push(CertFailure::UnusedSolId { id });
        }
    }
    if covered < quota {
        failures.push(CertFailure::CoverageShortfall { covered, quota });
    }
    CertReport {
        valid: failures.is_empty(),
        covered_count: covered,
        quota,
        failures,
    }
}
