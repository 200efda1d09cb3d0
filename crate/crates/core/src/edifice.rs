//! Path-addressed variety trees over GF(q)^k.
//!
//! An edifice is a complete t-ary tree of k levels whose vertices carry
//! nested point sets ("varieties") with large leaves and small
//! leaf/non-ancestor intersections. Here the varieties are solution sets of
//! systems of equations of the form
//!
//! ```text
//!   y_i = l_i(y_1, ..., y_{i-1}, f_{k-i}(x)),     1 <= i <= k-1,
//! ```
//!
//! where `l_i` is a homogeneous linear form with nonzero last coefficient
//! and `f_j` is monic of degree exactly d+j. The tree is never
//! materialized: every operation is addressed by the path of equation
//! indices from the root.

use crate::exact::Frac;
use crate::field::{Field, FieldElem, Poly};
use crate::Element;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

/// Default vertex cap for exhaustive verification.
pub const DEFAULT_VERTEX_CAP: u64 = 100_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EdificeError {
    #[error("parameters require k >= 1 and q >= d + k (got k={k}, d={d}, q={q})")]
    ParamViolation { k: u32, d: u32, q: u64 },
    #[error("tree parameters overflow a machine word")]
    Overflow,
    #[error("equation index {idx} out of range [0, {t})")]
    IndexOutOfRange { idx: u64, t: u64 },
    #[error("exhaustive verification needs {vertices} vertices, above the cap {cap}")]
    CapExceeded { vertices: u64, cap: u64 },
    #[error("group width floor(delta * q) is zero")]
    DegenerateWidth,
    #[error("requested arity {t_sub} exceeds the tree arity {t}")]
    ArityTooLarge { t_sub: u64, t: u64 },
}

/// The `(k, d, q, t)` parameter tuple; `t = q^{d+k-1}(q-1)` is the number
/// of distinct equations of each rank, hence the tree arity.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdificeParams {
    pub k: u32,
    pub d: u32,
    pub q: u64,
    pub t: u64,
}

impl EdificeParams {
    pub fn new(k: u32, d: u32, q: u64) -> Result<EdificeParams, EdificeError> {
        if k < 1 || q < (d + k) as u64 {
            return Err(EdificeError::ParamViolation { k, d, q });
        }
        let t = checked_pow(q, d + k - 1)
            .and_then(|v| v.checked_mul(q - 1))
            .ok_or(EdificeError::Overflow)?;
        // Also require the universe size q^k to be representable.
        checked_pow(q, k).ok_or(EdificeError::Overflow)?;
        Ok(EdificeParams { k, d, q, t })
    }

    pub fn universe_size(&self) -> u64 {
        self.q.pow(self.k)
    }
}

/// Number of distinct rank-i equations: q^{d+k-1}(q-1).
pub fn eq_count(k: u32, d: u32, q: u64) -> Result<u64, EdificeError> {
    EdificeParams::new(k, d, q).map(|p| p.t)
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// A rank-i equation `y_i = l_i(y_1, ..., y_{i-1}, f_{k-i}(x))`, stored as
/// the i coefficients of `l_i` (last one nonzero) and the d+k-i non-leading
/// coefficients of the monic `f_{k-i}`; d+k coefficients in total.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdificialEq {
    pub(crate) rank: u32,
    /// a_1 ... a_rank, with a_rank != 0.
    pub(crate) ell: Vec<FieldElem>,
    /// c_0 ... c_{d+k-rank-1}, constant term first.
    pub(crate) f_tail: Vec<FieldElem>,
}

impl EdificialEq {
    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn ell_coeffs(&self) -> &[FieldElem] {
        &self.ell
    }

    /// The monic polynomial f of degree d+k-rank.
    pub fn f_poly(&self) -> Poly {
        let mut coeffs = self.f_tail.clone();
        coeffs.push(FieldElem(1));
        Poly::new(coeffs)
    }

    /// Evaluates the right-hand side given y_1..y_{rank-1} and x.
    fn apply(&self, field: &Field, ys: &[FieldElem], x: FieldElem) -> FieldElem {
        debug_assert_eq!(ys.len() + 1, self.ell.len());
        let mut acc = field.zero();
        for (a, &y) in self.ell.iter().zip(ys) {
            acc = field.add(acc, field.mul(*a, y));
        }
        let fx = self.f_poly().eval(field, x);
        field.add(acc, field.mul(*self.ell.last().unwrap(), fx))
    }
}

/// The lazy tree: parameters plus the field. Vertices are addressed by
/// paths of equation indices; entry r of a path selects the
/// rank-(k-1-r) equation on the edge leaving level k-r.
#[derive(Clone, Debug)]
pub struct Edifice {
    params: EdificeParams,
    field: Field,
}

impl Edifice {
    pub fn new(k: u32, d: u32, field: Field) -> Result<Edifice, EdificeError> {
        let params = EdificeParams::new(k, d, field.order())?;
        Ok(Edifice { params, field })
    }

    pub fn params(&self) -> EdificeParams {
        self.params
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Level of the vertex addressed by `path` (root = k, leaves = 1).
    pub fn level_of(&self, path: &[u64]) -> u32 {
        assert!(path.len() < self.params.k as usize);
        self.params.k - path.len() as u32
    }

    /// The bijection [0, t) -> rank-i equations. Digit order, most
    /// significant first: a_rank in [1, q-1], then a_{rank-1}..a_1, then
    /// the f coefficients from high to constant term.
    pub fn index_to_eq(&self, rank: u32, idx: u64) -> Result<EdificialEq, EdificeError> {
        let EdificeParams { k, d, q, t } = self.params;
        assert!(1 <= rank && rank < k);
        if idx >= t {
            return Err(EdificeError::IndexOutOfRange { idx, t });
        }
        let fdeg = (d + k - rank) as usize;
        let mut v = idx;
        let mut f_tail = Vec::with_capacity(fdeg);
        for _ in 0..fdeg {
            f_tail.push(self.field.elem(v % q));
            v /= q;
        }
        let mut ell = Vec::with_capacity(rank as usize);
        for _ in 0..rank - 1 {
            ell.push(self.field.elem(v % q));
            v /= q;
        }
        ell.push(self.field.elem(v % (q - 1) + 1));
        Ok(EdificialEq { rank, ell, f_tail })
    }

    pub fn eq_to_index(&self, eq: &EdificialEq) -> u64 {
        let q = self.params.q;
        let mut idx = eq.ell.last().unwrap().0 - 1;
        for a in eq.ell[..eq.ell.len() - 1].iter().rev() {
            idx = idx * q + a.0;
        }
        for c in eq.f_tail.iter().rev() {
            idx = idx * q + c.0;
        }
        idx
    }

    /// Maps a point (x, y_1, ..., y_{k-1}) to an element id in [1, q^k].
    pub fn point_encode(&self, coords: &[FieldElem]) -> Element {
        debug_assert_eq!(coords.len(), self.params.k as usize);
        let q = self.params.q;
        let mut id = 0u64;
        for c in coords.iter().rev() {
            id = id * q + c.0;
        }
        id + 1
    }

    pub fn point_decode(&self, id: Element) -> Vec<FieldElem> {
        let q = self.params.q;
        let mut v = id - 1;
        (0..self.params.k)
            .map(|_| {
                let c = FieldElem(v % q);
                v /= q;
                c
            })
            .collect()
    }

    /// Sorted element ids of the variety at `path`; the root (empty path)
    /// is the whole universe and a level-j vertex has exactly q^j points.
    pub fn variety(&self, path: &[u64]) -> Vec<Element> {
        let k = self.params.k;
        assert!(path.len() < k as usize, "path too long for {} levels", k);
        // Entry r selects the rank-(k-1-r) equation.
        let eqs: Vec<EdificialEq> = path
            .iter()
            .enumerate()
            .map(|(r, &idx)| {
                self.index_to_eq(k - 1 - r as u32, idx)
                    .expect("path index in range")
            })
            .collect();
        variety_from_eqs(&self.field, k, &eqs)
    }

    /// Partitions the child equation indices of a non-leaf vertex into
    /// similarity classes: equations with the same linear form and the same
    /// f up to the constant term. These are blocks of q consecutive
    /// indices; within a class the child varieties are pairwise disjoint.
    pub fn similarity_classes(&self, path: &[u64]) -> Vec<Vec<u64>> {
        assert!(
            self.level_of(path) >= 2,
            "leaves have no children to partition"
        );
        let q = self.params.q;
        (0..self.params.t / q)
            .map(|c| (c * q..(c + 1) * q).collect())
            .collect()
    }
}

/// Computes a variety directly from explicit equations; `eqs` must carry
/// distinct ranks forming the top of the rank range (k-1 down to some j).
/// Free coordinates are enumerated and the constrained y's are computed in
/// ascending rank order.
pub(crate) fn variety_from_eqs(field: &Field, k: u32, eqs: &[EdificialEq]) -> Vec<Element> {
    let q = field.order();
    let j = k - eqs.len() as u32; // level of the addressed vertex
    for (i, eq) in eqs.iter().enumerate() {
        debug_assert_eq!(eq.rank, k - 1 - i as u32, "ranks must descend from k-1");
    }
    let mut points = Vec::with_capacity(checked_pow(q, j).unwrap() as usize);
    let free = j as usize; // x plus y_1..y_{j-1}
    let mut coords = vec![FieldElem(0); k as usize];
    let total = checked_pow(q, j).unwrap();
    for c in 0..total {
        let mut v = c;
        for slot in coords.iter_mut().take(free) {
            *slot = FieldElem(v % q);
            v /= q;
        }
        let x = coords[0];
        // eqs are stored rank-descending; apply in ascending rank order.
        for eq in eqs.iter().rev() {
            let rank = eq.rank as usize;
            let y = eq.apply(field, &coords[1..rank], x);
            coords[rank] = y;
        }
        points.push(encode_with(q, &coords));
    }
    points.sort_unstable();
    points
}

fn encode_with(q: u64, coords: &[FieldElem]) -> Element {
    let mut id = 0u64;
    for c in coords.iter().rev() {
        id = id * q + c.0;
    }
    id + 1
}

/// Anything that behaves like a complete t-ary tree of nested varieties.
/// Implemented by [`Edifice`], arity-capped views, and merged structures,
/// so verification and instance encoding are shared.
pub trait VarietyTree {
    /// Number of levels k.
    fn levels(&self) -> u32;
    /// Children per non-leaf vertex.
    fn arity(&self) -> u64;
    /// Size of the root variety.
    fn universe_size(&self) -> u64;
    /// Required minimum leaf variety size (the parameter q).
    fn leaf_bound(&self) -> u64;
    /// Required bound d + k - 1 on |leaf variety ∩ non-ancestor variety|.
    fn intersection_bound(&self) -> u64;
    /// Sorted element ids of the variety at `path`.
    fn variety(&self, path: &[u64]) -> Vec<Element>;
}

impl VarietyTree for Edifice {
    fn levels(&self) -> u32 {
        self.params.k
    }
    fn arity(&self) -> u64 {
        self.params.t
    }
    fn universe_size(&self) -> u64 {
        self.params.universe_size()
    }
    fn leaf_bound(&self) -> u64 {
        self.params.q
    }
    fn intersection_bound(&self) -> u64 {
        (self.params.d + self.params.k - 1) as u64
    }
    fn variety(&self, path: &[u64]) -> Vec<Element> {
        Edifice::variety(self, path)
    }
}

/// A prefix-arity view: edge r uses equation index r of the base tree.
/// Any subtree of an edifice is an edifice with the same (k, d, q).
pub struct SubsampledTree<'a, T: VarietyTree> {
    base: &'a T,
    t_sub: u64,
}

pub fn subsample<T: VarietyTree>(
    base: &T,
    t_sub: u64,
) -> Result<SubsampledTree<'_, T>, EdificeError> {
    if t_sub > base.arity() || t_sub == 0 {
        return Err(EdificeError::ArityTooLarge {
            t_sub,
            t: base.arity(),
        });
    }
    Ok(SubsampledTree { base, t_sub })
}

impl<T: VarietyTree> VarietyTree for SubsampledTree<'_, T> {
    fn levels(&self) -> u32 {
        self.base.levels()
    }
    fn arity(&self) -> u64 {
        self.t_sub
    }
    fn universe_size(&self) -> u64 {
        self.base.universe_size()
    }
    fn leaf_bound(&self) -> u64 {
        self.base.leaf_bound()
    }
    fn intersection_bound(&self) -> u64 {
        self.base.intersection_bound()
    }
    fn variety(&self, path: &[u64]) -> Vec<Element> {
        debug_assert!(path.iter().all(|&i| i < self.t_sub));
        self.base.variety(path)
    }
}

/// A widened edifice: each similarity class (size q) is split into
/// floor(1/delta) groups of b = floor(delta*q) children in ascending
/// equation-index order, leftovers dropped from the top. The groups are
/// pairwise disjoint, all of size b, and the varieties within a group are
/// pairwise disjoint.
#[derive(Clone, Debug)]
pub struct WideEdifice {
    base: Edifice,
    delta: Frac,
    b: u64,
    groups_per_class: u64,
    t_prime: u64,
}

pub fn make_wide(base: &Edifice, delta: Frac) -> Result<WideEdifice, EdificeError> {
    assert!(
        !delta.is_zero() && delta.is_proper(),
        "delta must lie in (0, 1]"
    );
    let q = base.params().q;
    let b = delta.floor_mul(q);
    if b == 0 {
        return Err(EdificeError::DegenerateWidth);
    }
    let groups_per_class = delta.denom() / delta.numer(); // floor(1/delta)
    let t_prime = groups_per_class * (base.params().t / q);
    Ok(WideEdifice {
        base: base.clone(),
        delta,
        b,
        groups_per_class,
        t_prime,
    })
}

impl WideEdifice {
    pub fn base(&self) -> &Edifice {
        &self.base
    }

    pub fn delta(&self) -> Frac {
        self.delta
    }

    /// Group width b = floor(delta * q).
    pub fn width(&self) -> u64 {
        self.b
    }

    /// Number of groups t' = floor(1/delta) * t / q.
    pub fn group_count(&self) -> u64 {
        self.t_prime
    }

    /// Base equation indices forming group g, ascending.
    pub fn group(&self, g: u64) -> Vec<u64> {
        assert!(g < self.t_prime);
        let q = self.base.params().q;
        let class = g / self.groups_per_class;
        let slot = g % self.groups_per_class;
        let start = class * q + slot * self.b;
        (start..start + self.b).collect()
    }
}

/// The merged structure: vertices of the widened tree sharing a colour
/// sequence (one colour per retained group) are fused, and a merged vertex
/// carries the disjoint union of its b^{k-level} constituent varieties.
/// The result is a (k, b^k(d+k-1), b^{k-1} q, t') tree over the same
/// universe.
#[derive(Clone, Debug)]
pub struct MergedEdifice {
    wide: WideEdifice,
}

pub fn rainbow_merge(wide: WideEdifice) -> MergedEdifice {
    MergedEdifice { wide }
}

impl MergedEdifice {
    pub fn wide(&self) -> &WideEdifice {
        &self.wide
    }

    /// Merged parameter tuple (k, d', q', t').
    pub fn params(&self) -> EdificeParams {
        let base = self.wide.base.params();
        let b = self.wide.b;
        let d_merged = b.pow(base.k) * (base.d + base.k - 1) as u64;
        let q_merged = b.pow(base.k - 1) * base.q;
        assert!(d_merged <= u32::MAX as u64);
        EdificeParams {
            k: base.k,
            d: d_merged as u32,
            q: q_merged,
            t: self.wide.t_prime,
        }
    }

    /// All base-tree paths merged into the vertex at `rainbow`.
    fn constituents(&self, rainbow: &[u64]) -> Vec<Vec<u64>> {
        let mut paths: Vec<Vec<u64>> = vec![Vec::new()];
        for &colour in rainbow {
            let members = self.wide.group(colour);
            let mut next = Vec::with_capacity(paths.len() * members.len());
            for p in &paths {
                for &idx in &members {
                    let mut ext = p.clone();
                    ext.push(idx);
                    next.push(ext);
                }
            }
            paths = next;
        }
        paths
    }
}

impl VarietyTree for MergedEdifice {
    fn levels(&self) -> u32 {
        self.wide.base.params().k
    }
    fn arity(&self) -> u64 {
        self.wide.t_prime
    }
    fn universe_size(&self) -> u64 {
        self.wide.base.params().universe_size()
    }
    fn leaf_bound(&self) -> u64 {
        let base = self.wide.base.params();
        self.wide.b.pow(base.k - 1) * base.q
    }
    fn intersection_bound(&self) -> u64 {
        let base = self.wide.base.params();
        self.wide.b.pow(base.k) * (base.d + base.k - 1) as u64 + (base.k - 1) as u64
    }
    fn variety(&self, path: &[u64]) -> Vec<Element> {
        let mut union = BTreeSet::new();
        for constituent in self.constituents(path) {
            let pts = self.wide.base.variety(&constituent);
            for x in pts {
                let fresh = union.insert(x);
                debug_assert!(fresh, "constituent varieties must be disjoint");
            }
        }
        union.into_iter().collect()
    }
}

#[derive(Copy, Clone, Debug)]
pub enum VerifyMode {
    Exhaustive,
    Sampled { seed: u64, trials: u64 },
}

/// Verification report, serialized as-is for the CLI.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub mode: String,
    pub vertices_checked: u64,
    pub pairs_checked: u64,
    pub max_intersection: u64,
    pub bound: u64,
    pub pass: bool,
}

/// Checks the defining axioms of a variety tree: root equals the universe,
/// child varieties nest into parents, leaves reach the required size, and
/// every (leaf, non-ancestor) intersection stays within the bound.
/// Exhaustive mode enumerates every vertex (subject to the cap); sampled
/// mode draws seeded random path pairs.
pub fn verify_edifice<T: VarietyTree>(
    tree: &T,
    mode: VerifyMode,
    cap: u64,
) -> Result<VerifyReport, EdificeError> {
    match mode {
        VerifyMode::Exhaustive => verify_exhaustive(tree, cap),
        VerifyMode::Sampled { seed, trials } => Ok(verify_sampled(tree, seed, trials)),
    }
}

fn count_vertices(arity: u64, levels: u32) -> u64 {
    let mut total = 0u64;
    let mut layer = 1u64;
    for _ in 0..levels {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(arity);
    }
    total
}

fn verify_exhaustive<T: VarietyTree>(tree: &T, cap: u64) -> Result<VerifyReport, EdificeError> {
    let k = tree.levels();
    let t = tree.arity();
    let vertices = count_vertices(t, k);
    if vertices > cap {
        return Err(EdificeError::CapExceeded { vertices, cap });
    }

    // Enumerate all paths level by level, computing each variety once.
    let mut by_level: Vec<Vec<(Vec<u64>, Vec<Element>)>> = Vec::with_capacity(k as usize);
    let mut frontier: Vec<Vec<u64>> = vec![Vec::new()];
    for _ in 0..k {
        let layer: Vec<(Vec<u64>, Vec<Element>)> = frontier
            .iter()
            .map(|p| (p.clone(), tree.variety(p)))
            .collect();
        let mut next = Vec::with_capacity(layer.len() * t as usize);
        for (p, _) in &layer {
            if p.len() + 1 < k as usize {
                for i in 0..t {
                    let mut ext = p.clone();
                    ext.push(i);
                    next.push(ext);
                }
            }
        }
        by_level.push(layer);
        frontier = next;
    }

    let mut pass = true;

    // Root is the whole universe.
    let root = &by_level[0][0].1;
    pass &= root.len() as u64 == tree.universe_size()
        && root.first() == Some(&1)
        && root.last() == Some(&tree.universe_size());

    // Nesting: every variety is a subset of its parent's.
    for lvl in 1..k as usize {
        for (path, var) in &by_level[lvl] {
            let parent_idx = parent_index(path, t);
            let parent = &by_level[lvl - 1][parent_idx].1;
            pass &= is_sorted_subset(var, parent);
        }
    }

    // Leaf sizes.
    let leaves = &by_level[k as usize - 1];
    for (_, var) in leaves {
        pass &= var.len() as u64 >= tree.leaf_bound();
    }

    // Intersections of each leaf with every non-ancestor vertex.
    let bound = tree.intersection_bound();
    let mut max_intersection = 0u64;
    let mut pairs = 0u64;
    for (leaf_path, leaf_var) in leaves {
        for level in by_level.iter() {
            for (path, var) in level {
                if leaf_path.starts_with(path) {
                    continue; // ancestor (or the leaf itself)
                }
                pairs += 1;
                let inter = sorted_intersection_count(leaf_var, var);
                max_intersection = max_intersection.max(inter);
            }
        }
    }
    pass &= max_intersection <= bound;

    Ok(VerifyReport {
        mode: "exhaustive".into(),
        vertices_checked: vertices,
        pairs_checked: pairs,
        max_intersection,
        bound,
        pass,
    })
}

fn verify_sampled<T: VarietyTree>(tree: &T, seed: u64, trials: u64) -> VerifyReport {
    let k = tree.levels();
    let t = tree.arity();
    let bound = tree.intersection_bound();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pass = true;
    let mut max_intersection = 0u64;
    let mut pairs = 0u64;
    let mut vertices = 0u64;
    for _ in 0..trials {
        let leaf_path: Vec<u64> = (0..k - 1).map(|_| rng.gen_range(0..t)).collect();
        let len = rng.gen_range(0..k) as usize;
        let other_path: Vec<u64> = (0..len).map(|_| rng.gen_range(0..t)).collect();
        if leaf_path.starts_with(&other_path) {
            continue;
        }
        let leaf_var = tree.variety(&leaf_path);
        pass &= leaf_var.len() as u64 >= tree.leaf_bound();
        let other_var = tree.variety(&other_path);
        vertices += 2;
        pairs += 1;
        let inter = sorted_intersection_count(&leaf_var, &other_var);
        max_intersection = max_intersection.max(inter);
    }
    pass &= max_intersection <= bound;
    VerifyReport {
        mode: "sampled".into(),
        vertices_checked: vertices,
        pairs_checked: pairs,
        max_intersection,
        bound,
        pass,
    }
}

fn parent_index(path: &[u64], t: u64) -> usize {
    // Paths at a level are enumerated in lexicographic order; the parent's
    // position is the path prefix read as a base-t number.
    let mut idx = 0u64;
    for &d in &path[..path.len() - 1] {
        idx = idx * t + d;
    }
    idx as usize
}

fn is_sorted_subset(sub: &[Element], sup: &[Element]) -> bool {
    let mut it = sup.iter();
    'outer: for x in sub {
        for y in it.by_ref() {
            if y == x {
                continue 'outer;
            }
            if y > x {
                return false;
            }
        }
        return false;
    }
    true
}

fn sorted_intersection_count(a: &[Element], b: &[Element]) -> u64 {
    let (mut i, mut j, mut count) = (0, 0, 0u64);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Descriptor for sidecar metadata and CLI reports.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdificeDescriptor {
    pub k: u32,
    pub d: u32,
    pub q: u64,
    pub p_char: u64,
    pub ext_degree: u32,
    pub reduction_poly: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_prime: Option<u64>,
}

impl EdificeDescriptor {
    pub fn of(edifice: &Edifice) -> EdificeDescriptor {
        let p = edifice.params();
        EdificeDescriptor {
            k: p.k,
            d: p.d,
            q: p.q,
            p_char: edifice.field().characteristic(),
            ext_degree: edifice.field().extension_degree(),
            reduction_poly: edifice.field().reduction_poly().to_vec(),
            delta: None,
            b: None,
            t_prime: None,
        }
    }

    pub fn of_merged(merged: &MergedEdifice) -> EdificeDescriptor {
        let mut desc = EdificeDescriptor::of(merged.wide().base());
        desc.delta = Some(merged.wide().delta().to_string());
        desc.b = Some(merged.wide().width());
        desc.t_prime = Some(merged.wide().group_count());
        desc
    }
}
