//! Multi-pass semi-streaming set cover.
//!
//! This crate implements the full pipeline around progressive greedy
//! thresholding for set cover in the set-streaming model:
//!
//! * [`instance`] — the instance data model, a replayable pass-counting
//!   stream cursor, a word-level space meter, and the `coverstream v1`
//!   text format.
//! * [`cert`] — coverage certificates and their verifier.
//! * [`solvers`] — the p-pass progressive greedy solver, its naive
//!   (p+1)-pass form, and exact big-integer threshold comparisons.
//! * [`er`] — a one-pass level-bucketed partial-cover mechanism with
//!   post-stream threshold selection, and the two-scheme p-pass partial
//!   solver built on it.
//! * [`baselines`] — offline Johnson greedy and an exact branch-and-bound
//!   oracle for full and partial cover.
//! * [`field`] — GF(q) arithmetic for prime powers q.
//! * [`edifice`] — path-addressed variety trees over GF(q)^k, axiom
//!   verification, similarity classes, widening, and rainbow merging.
//! * [`generators`] — adversarial instance factories: the greedy-tightness
//!   family and pointer-jumping reductions (total and partial), with
//!   oracle-backed dichotomy checks.

pub mod baselines;
pub mod cert;
pub mod edifice;
pub mod er;
pub mod exact;
pub mod field;
pub mod generators;
pub mod instance;
pub mod report;
pub mod solvers;

pub use cert::{CertFailure, CertReport, Certificate};
pub use edifice::{Edifice, EdificeParams, EdificialEq, MergedEdifice, VarietyTree, WideEdifice};
pub use exact::Frac;
pub use field::{Field, FieldElem, Poly};
pub use instance::{Instance, MeteredStream, SetRecord, SpaceMeter};
pub use solvers::{prog_greedy, prog_greedy_naive};

/// Universe element, 1-based as in the instance format.
pub type Element = u64;
/// Stream set identifier; 0 is reserved as the "uncovered" sentinel.
pub type SetId = u64;
