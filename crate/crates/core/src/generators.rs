//! Adversarial instance factories.
//!
//! Three families: the tightness family on which the naive progressive
//! greedy provably picks p(q-1) sets while one set suffices; pointer-jumping
//! reductions that encode a pointer chain over a variety tree into a cover
//! instance whose optimum is small or large depending on one leaf bit; and
//! seeded random total-cover instances for differential testing.

use crate::baselines::{exact_cover, OracleStatus};
use crate::edifice::{
    make_wide, rainbow_merge, subsample, Edifice, EdificeDescriptor, EdificeError, VarietyTree,
};
use crate::exact::{big_pow, ceil_div_u128, ceil_root_scale, Frac};
use crate::instance::{Instance, InstanceError, SetRecord};
use crate::{Element, SetId};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("tightness family requires p >= 2 and q >= 2 (got p={p}, q={q})")]
    TightnessParams { p: u32, q: u64 },
    #[error("instance would not fit in memory: {0}")]
    TooLarge(String),
    #[error("epsilon must lie in [0, 1/2] for the partial reduction")]
    BadEpsilon,
    #[error("oracle budget exceeded")]
    OracleBudgetExceeded,
    #[error(transparent)]
    Edifice(#[from] EdificeError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// The stream on which the p-pass naive schedule returns p(q-1) sets while
/// the optimum is a single set: in pass j exactly the q-1 sets of the j-th
/// layer clear the threshold, while the full universe set at the end of the
/// stream always contributes just below it.
///
/// Universe: tuples [1..q]^p minus the corner (q, ..., q), ranked with the
/// first coordinate most significant; n = q^p - 1, m = p(q-1) + 1.
pub fn tightness_instance(p: u32, q: u64) -> Result<Instance, GeneratorError> {
    if p < 2 || q < 2 {
        return Err(GeneratorError::TightnessParams { p, q });
    }
    let n = q
        .checked_pow(p)
        .filter(|&v| v <= 1 << 24)
        .ok_or_else(|| GeneratorError::TooLarge(format!("q^p with q={q}, p={p}")))?
        - 1;

    // rank of a tuple, first coordinate most significant
    let rank = |tuple: &[u64]| tuple.iter().fold(0u64, |acc, &x| acc * q + (x - 1));

    let mut records = Vec::with_capacity((p as u64 * (q - 1) + 1) as usize);
    let mut next_id: SetId = 1;
    for j in (1..=p).rev() {
        for y in 1..q {
            // S^y_j = { x : x_1 = ... = x_{j-1} = q, x_j = y }
            let free = p - j;
            let mut elements = Vec::with_capacity(q.pow(free) as usize);
            for c in 0..q.pow(free) {
                let mut tuple = vec![q; p as usize];
                tuple[j as usize - 1] = y;
                let mut v = c;
                for slot in (j as usize..p as usize).rev() {
                    tuple[slot] = v % q + 1;
                    v /= q;
                }
                elements.push(rank(&tuple) + 1);
            }
            records.push(SetRecord::new(next_id, elements));
            next_id += 1;
        }
    }
    records.push(SetRecord::new(next_id, (1..=n).collect()));
    Ok(Instance::new(n, records, None)?)
}

/// Exact check that every pass threshold of the p-pass naive schedule on
/// the tightness instance falls strictly between consecutive block sizes:
/// q^{p-j} - 1 < n^{(p-j)/p} <= q^{p-j} for all j, with n = q^p - 1.
/// When true, the p(q-1) behaviour is guaranteed.
pub fn sandwich_check(p: u32, q: u64) -> bool {
    assert!(p >= 2 && q >= 2);
    let n = BigUint::from(q).pow(p) - 1u32;
    for j in 1..=p {
        let e = p - j;
        let block = big_pow(q, e);
        let lower = (&block - 1u32).pow(p);
        let upper = block.pow(p);
        let mid = n.pow(e);
        if !(lower < mid && mid <= upper) {
            return false;
        }
    }
    true
}

/// A pointer-jumping input over a capped-arity complete tree: one pointer
/// per internal vertex, one bit per leaf, and the bit at the end of the
/// pointer chain equal to `target_value`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MpjInput {
    pub k: u32,
    pub arity: u64,
    pub pointers: BTreeMap<Vec<u64>, u64>,
    pub leaf_bits: BTreeMap<Vec<u64>, u8>,
    pub target_value: u8,
}

impl MpjInput {
    /// The unique root-to-leaf path selected by the pointers.
    pub fn pointer_chain(&self) -> Vec<Vec<u64>> {
        let mut chain = vec![Vec::new()];
        let mut cur: Vec<u64> = Vec::new();
        for _ in 1..self.k {
            let ptr = self.pointers[&cur];
            cur.push(ptr);
            chain.push(cur.clone());
        }
        chain
    }

    /// Follows the pointers and reads the leaf bit; independent of the
    /// stored target_value.
    pub fn evaluate(&self) -> u8 {
        let leaf = self.pointer_chain().pop().unwrap();
        self.leaf_bits[&leaf]
    }
}

/// Seeded pointers and leaf bits over the t_sub-ary capped tree (edge r at
/// any vertex stands for equation index r); the bit at the pointed leaf is
/// forced to `target_value`, every other bit is random.
pub fn mpj_generate(
    k: u32,
    tree_arity: u64,
    t_sub: u64,
    seed: u64,
    target_value: u8,
) -> Result<MpjInput, GeneratorError> {
    assert!(k >= 2);
    assert!(target_value <= 1);
    if t_sub == 0 || t_sub > tree_arity {
        return Err(EdificeError::ArityTooLarge {
            t_sub,
            t: tree_arity,
        }
        .into());
    }
    let leaf_count = checked_tree_size(t_sub, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Internal vertices by level (root first), lexicographic within a level.
    let mut pointers = BTreeMap::new();
    let mut level_paths: Vec<Vec<u64>> = vec![Vec::new()];
    for _ in 0..k - 1 {
        let mut next = Vec::new();
        for path in &level_paths {
            pointers.insert(path.clone(), rng.gen_range(0..t_sub));
            for i in 0..t_sub {
                let mut ext = path.clone();
                ext.push(i);
                next.push(ext);
            }
        }
        level_paths = next;
    }
    debug_assert_eq!(level_paths.len() as u64, leaf_count);

    let mut leaf_bits = BTreeMap::new();
    for leaf in &level_paths {
        leaf_bits.insert(leaf.clone(), rng.gen_range(0..=1u8));
    }
    let mut input = MpjInput {
        k,
        arity: t_sub,
        pointers,
        leaf_bits,
        target_value,
    };
    let pointed = input.pointer_chain().pop().unwrap();
    input.leaf_bits.insert(pointed, target_value);
    debug_assert_eq!(input.evaluate(), target_value);
    Ok(input)
}

fn checked_tree_size(t_sub: u64, k: u32) -> Result<u64, GeneratorError> {
    let leaves = (0..k - 1)
        .try_fold(1u64, |acc, _| acc.checked_mul(t_sub))
        .filter(|&v| v <= 1 << 20);
    leaves.ok_or_else(|| GeneratorError::TooLarge(format!("t_sub^{} leaves", k - 1)))
}

/// Encodes a pointer-jumping input into a cover instance over the tree's
/// universe: one set X_u \ X_v per internal pointer (owned by the player of
/// u's layer), one set X_z per 1-bit leaf, and all n singletons (both owned
/// by player 1). The stream is player 1's sets first, then player 2's, and
/// so on; empty difference sets are dropped.
pub fn encode_mpj<T: VarietyTree>(
    tree: &T,
    mpj: &MpjInput,
    eps: Option<Frac>,
) -> Result<(Instance, BTreeMap<SetId, u32>), GeneratorError> {
    let k = tree.levels();
    assert_eq!(mpj.k, k);
    assert!(mpj.arity <= tree.arity());
    let n = tree.universe_size();
    if n > 1 << 22 {
        return Err(GeneratorError::TooLarge(format!(
            "universe of {n} elements"
        )));
    }

    let mut records: Vec<SetRecord> = Vec::new();
    let mut player_of: BTreeMap<SetId, u32> = BTreeMap::new();
    let mut next_id: SetId = 1;
    let mut push = |rec_elements: Vec<Element>,
                    player: u32,
                    records: &mut Vec<SetRecord>,
                    player_of: &mut BTreeMap<SetId, u32>| {
        if rec_elements.is_empty() {
            return;
        }
        records.push(SetRecord::new(next_id, rec_elements));
        player_of.insert(next_id, player);
        next_id += 1;
    };

    // Player 1: varieties of 1-bit leaves (lexicographic), then singletons.
    for (leaf, &bit) in &mpj.leaf_bits {
        if bit == 1 {
            push(tree.variety(leaf), 1, &mut records, &mut player_of);
        }
    }
    for x in 1..=n {
        push(vec![x], 1, &mut records, &mut player_of);
    }

    // Players 2..=k: pointer encodings X_u \ X_{child}, by layer from 2 up.
    for layer in 2..=k {
        let len = (k - layer) as usize;
        for (path, &ptr) in mpj.pointers.iter().filter(|(p, _)| p.len() == len) {
            let parent = tree.variety(path);
            let mut child_path = path.clone();
            child_path.push(ptr);
            let child = tree.variety(&child_path);
            push(
                sorted_difference(&parent, &child),
                layer,
                &mut records,
                &mut player_of,
            );
        }
    }

    let instance = Instance::new(n, records, eps)?;
    Ok((instance, player_of))
}

fn sorted_difference(a: &[Element], b: &[Element]) -> Vec<Element> {
    let mut out = Vec::with_capacity(a.len());
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j < b.len() && b[j] == x {
            continue;
        }
        out.push(x);
    }
    out
}

/// Fully assembled reduction: the instance, the owner of every set, and the
/// reproducibility metadata including the dichotomy thresholds.
#[derive(Clone, Debug)]
pub struct ReductionInstance {
    pub instance: Instance,
    pub player_of: BTreeMap<SetId, u32>,
    pub meta: ReductionMeta,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReductionMeta {
    pub edifice: EdificeDescriptor,
    pub k: u32,
    pub seed: u64,
    pub t_sub: u64,
    pub target_value: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub eps_clamped: bool,
    /// Optimum upper bound when the pointed bit is 1: p + 1.
    pub q1: u64,
    /// Optimum lower bound (ceiled) when the pointed bit is 0.
    pub q0_ceil: u64,
}

/// The total-cover reduction over a (possibly arity-capped) edifice.
/// When the pointed bit is 1 the instance has a cover of size p+1; when it
/// is 0 every cover needs at least ceil(q / (d+p)) sets.
pub fn mpj_reduction(
    edifice: &Edifice,
    t_sub: u64,
    seed: u64,
    target_value: u8,
) -> Result<ReductionInstance, GeneratorError> {
    let params = edifice.params();
    let p = params.k - 1;
    let capped = subsample(edifice, t_sub)?;
    let mpj = mpj_generate(params.k, t_sub, t_sub, seed, target_value)?;
    let (instance, player_of) = encode_mpj(&capped, &mpj, None)?;
    let q0_ceil = ceil_div_u128(params.q as u128, (params.d + p) as u128);
    Ok(ReductionInstance {
        instance,
        player_of,
        meta: ReductionMeta {
            edifice: EdificeDescriptor::of(edifice),
            k: params.k,
            seed,
            t_sub,
            target_value,
            eps: None,
            eps_clamped: false,
            q1: (p + 1) as u64,
            q0_ceil,
        },
    })
}

/// The partial-cover reduction: widen the edifice with delta derived from
/// epsilon (delta = ceil(delta_tilde * q)/q, delta_tilde = (2 eps)^{1/p}),
/// merge, and encode over the merged tree. The instance carries epsilon;
/// with the partial quota ceil((1-eps) n), a 0 bit forces at least
/// ceil((|X_1| - eps n) / (b^{p+1} (d+p))) sets while a 1 bit still admits a
/// total cover of size p+1.
///
/// Epsilon below n^{-p/(p+1)} is clamped up to 1/floor(n^{p/(p+1)}) (noted
/// in the metadata); epsilon = 0 skips the merge entirely and degenerates to
/// the total-cover reduction with a full quota.
pub fn partial_reduction(
    base: &Edifice,
    eps: Frac,
    t_sub: Option<u64>,
    seed: u64,
    target_value: u8,
) -> Result<ReductionInstance, GeneratorError> {
    let params = base.params();
    let p = params.k - 1;
    let n = params.universe_size();
    if eps > Frac::new(1, 2).unwrap() {
        return Err(GeneratorError::BadEpsilon);
    }

    if eps.is_zero() {
        let t_sub = t_sub.unwrap_or(params.t);
        let mut red = mpj_reduction(base, t_sub, seed, target_value)?;
        red.meta.eps = Some(Frac::ZERO.to_string());
        red.instance = Instance::new(
            red.instance.n(),
            red.instance.records().to_vec(),
            Some(Frac::ZERO),
        )?;
        return Ok(red);
    }

    // Clamp: the analysis assumes eps^{-1/p} <= n^{1/(p+1)}; below that we
    // solve the weaker problem at eps' = 1/floor(n^{p/(p+1)}).
    let mut eps = eps;
    let mut clamped = false;
    let eps_pow = BigUint::from(eps.numer()).pow(p + 1) * big_pow(n, p);
    if eps_pow < BigUint::from(eps.denom()).pow(p + 1) {
        let root = largest_u_with(|u| big_pow(u, p + 1) <= big_pow(n, p));
        eps = Frac::new(1, root).unwrap();
        clamped = true;
    }

    let b = ceil_root_scale(eps.double(), params.q, p);
    let delta = Frac::new(b, params.q).unwrap();
    let wide = make_wide(base, delta)?;
    let merged = rainbow_merge(wide);
    let t_prime = merged.wide().group_count();
    let t_sub = t_sub.unwrap_or(t_prime);
    let capped = subsample(&merged, t_sub)?;
    let mpj = mpj_generate(params.k, t_prime, t_sub, seed, target_value)?;
    let (instance, player_of) = encode_mpj(&capped, &mpj, Some(eps))?;

    // q0 = ceil((b^p q - eps n) / (b^{p+1} (d + p))), exactly in integers.
    let leaf_size = b.pow(p) * params.q;
    let numer = (leaf_size as u128) * (eps.denom() as u128) - (eps.numer() as u128) * (n as u128);
    let denom = (eps.denom() as u128) * (b.pow(p + 1) as u128) * ((params.d + p) as u128);
    let q0_ceil = ceil_div_u128(numer, denom);

    Ok(ReductionInstance {
        instance,
        player_of,
        meta: ReductionMeta {
            edifice: EdificeDescriptor::of_merged(&merged),
            k: params.k,
            seed,
            t_sub,
            target_value,
            eps: Some(eps.to_string()),
            eps_clamped: clamped,
            q1: (p + 1) as u64,
            q0_ceil,
        },
    })
}

fn largest_u_with(pred: impl Fn(u64) -> bool) -> u64 {
    let (mut lo, mut hi) = (1u64, 1u64 << 32);
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DichotomyReport {
    pub mpj_value: u8,
    pub opt: u64,
    pub q1: u64,
    pub q0: u64,
    pub consistent: bool,
}

/// Runs the exact oracle on a reduction instance (with its partial quota if
/// epsilon is carried) and checks the predicted dichotomy: opt <= q1 when
/// the pointed bit is 1, opt >= q0 when it is 0.
pub fn dichotomy_check(
    reduction: &ReductionInstance,
    oracle_budget: u64,
) -> Result<DichotomyReport, GeneratorError> {
    let instance = &reduction.instance;
    let quota = match instance.epsilon() {
        Some(eps) => eps.quota(instance.n()),
        None => instance.n(),
    };
    let oracle = exact_cover(instance, quota, oracle_budget);
    if oracle.status != OracleStatus::Exact {
        return Err(GeneratorError::OracleBudgetExceeded);
    }
    let mpj_value = reduction.meta.target_value;
    let (q1, q0) = (reduction.meta.q1, reduction.meta.q0_ceil);
    let consistent = if mpj_value == 1 {
        oracle.opt_size <= q1
    } else {
        oracle.opt_size >= q0
    };
    Ok(DichotomyReport {
        mpj_value,
        opt: oracle.opt_size,
        q1,
        q0,
        consistent,
    })
}

/// Configuration for seeded random total-cover instances.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RandomCfg {
    pub n_range: (u64, u64),
    pub m_range: (u64, u64),
    pub density_range: (f64, f64),
    pub full_universe_prob: f64,
}

impl Default for RandomCfg {
    fn default() -> RandomCfg {
        RandomCfg {
            n_range: (4, 50),
            m_range: (3, 40),
            density_range: (0.05, 0.4),
            full_universe_prob: 0.5,
        }
    }
}

/// Seeded random total-cover instance: m density-random sets, each forced
/// nonempty, a full-universe set with the configured probability, and every
/// uncovered element patched into a random set so the cover guarantee
/// holds.
pub fn random_instance_with(cfg: &RandomCfg, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(cfg.n_range.0..=cfg.n_range.1);
    let m = rng.gen_range(cfg.m_range.0..=cfg.m_range.1);
    let density = rng.gen_range(cfg.density_range.0..=cfg.density_range.1);

    let mut sets: Vec<Vec<Element>> = (0..m)
        .map(|_| {
            let mut s: Vec<Element> = (1..=n).filter(|_| rng.gen_bool(density)).collect();
            if s.is_empty() {
                s.push(rng.gen_range(1..=n));
            }
            s
        })
        .collect();
    if rng.gen_bool(cfg.full_universe_prob) {
        let at = rng.gen_range(0..sets.len());
        sets[at] = (1..=n).collect();
    }
    let mut covered = vec![false; n as usize + 1];
    for s in &sets {
        for &x in s {
            covered[x as usize] = true;
        }
    }
    for x in 1..=n {
        if !covered[x as usize] {
            let at = rng.gen_range(0..sets.len());
            sets[at].push(x);
        }
    }
    let records = sets
        .into_iter()
        .enumerate()
        .map(|(i, s)| SetRecord::new(i as u64 + 1, s))
        .collect();
    Instance::new(n, records, None).expect("generated instance is a valid cover")
}

/// Convenience wrapper with a bounded size, used throughout the tests.
pub fn random_instance(seed: u64, n_max: u64, m_max: u64) -> Instance {
    let cfg = RandomCfg {
        n_range: (2.min(n_max), n_max),
        m_range: (1, m_max),
        ..RandomCfg::default()
    };
    random_instance_with(&cfg, seed)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TightParams {
    pub p: u32,
    pub q: u64,
    pub n: u64,
    pub m: u64,
}

/// Sidecar metadata for generated instance files.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "lowercase")]
pub enum GenMeta {
    Tight {
        params: TightParams,
        /// Whether the threshold sandwich certifies the p(q-1) behaviour.
        guaranteed: bool,
    },
    Mpj {
        #[serde(flatten)]
        meta: ReductionMeta,
        player_of: BTreeMap<SetId, u32>,
    },
    Partial {
        #[serde(flatten)]
        meta: ReductionMeta,
        player_of: BTreeMap<SetId, u32>,
    },
}
