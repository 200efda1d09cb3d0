//! Arithmetic in GF(q) for prime-power q, plus univariate polynomial
//! evaluation.
//!
//! Elements are encoded by a canonical index in `[0, q)`: the residue for
//! prime fields, and the base-p digit string of the polynomial coefficients
//! (constant term least significant) for extension fields. Index 0 is the
//! additive identity and index 1 the multiplicative identity, so traces are
//! byte-for-byte reproducible across implementations.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    DegreeZero,
    #[error("p^e does not fit in a machine word")]
    Overflow,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
}

/// An element of GF(q), identified by its canonical index in `[0, q)`.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(pub u64);

/// A finite field GF(p^e) with deterministic element encoding.
///
/// For e > 1 the reduction polynomial is the lexicographically smallest
/// monic irreducible of degree e over GF(p), comparing coefficient tuples
/// from the constant term upward. Two `Field` values with equal `(p, e)`
/// therefore behave identically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Field {
    p: u64,
    e: u32,
    q: u64,
    /// Monic reduction polynomial over GF(p), constant term first,
    /// length e + 1; empty for prime fields.
    reduction: Vec<u64>,
}

impl Field {
    pub fn new(p: u64, e: u32) -> Result<Field, FieldError> {
        if e == 0 {
            return Err(FieldError::DegreeZero);
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let mut q: u64 = 1;
        for _ in 0..e {
            q = q.checked_mul(p).ok_or(FieldError::Overflow)?;
        }
        let reduction = if e == 1 {
            Vec::new()
        } else {
            smallest_irreducible(p, e)
        };
        Ok(Field { p, e, q, reduction })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn extension_degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// Reduction polynomial coefficients, constant term first (empty for
    /// prime fields).
    pub fn reduction_poly(&self) -> &[u64] {
        &self.reduction
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem(1)
    }

    pub fn elem(&self, index: u64) -> FieldElem {
        assert!(
            index < self.q,
            "element index {index} out of range for GF({})",
            self.q
        );
        FieldElem(index)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(FieldElem)
    }

    fn digits(&self, a: FieldElem) -> Vec<u64> {
        let mut v = a.0;
        let mut d = Vec::with_capacity(self.e as usize);
        for _ in 0..self.e {
            d.push(v % self.p);
            v /= self.p;
        }
        d
    }

    fn from_digits(&self, d: &[u64]) -> FieldElem {
        let mut idx = 0u64;
        for &c in d.iter().rev() {
            idx = idx * self.p + c;
        }
        FieldElem(idx)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.check(a);
        self.check(b);
        if self.e == 1 {
            return FieldElem((a.0 + b.0) % self.p);
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.from_digits(&sum)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        self.check(a);
        if self.e == 1 {
            return FieldElem((self.p - a.0) % self.p);
        }
        let d: Vec<u64> = self
            .digits(a)
            .iter()
            .map(|&x| (self.p - x) % self.p)
            .collect();
        self.from_digits(&d)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.check(a);
        self.check(b);
        if self.e == 1 {
            return FieldElem(mulmod(a.0, b.0, self.p));
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let e = self.e as usize;
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mulmod(x, y, self.p)) % self.p;
            }
        }
        // Reduce modulo the monic reduction polynomial.
        for i in (e..prod.len()).rev() {
            let lead = prod[i];
            if lead == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..e {
                let sub = mulmod(lead, self.reduction[j], self.p);
                prod[i - e + j] = (prod[i - e + j] + self.p - sub % self.p) % self.p;
            }
        }
        self.from_digits(&prod[..e])
    }

    pub fn pow(&self, a: FieldElem, mut k: u64) -> FieldElem {
        let mut base = a;
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem, FieldError> {
        self.check(a);
        if a.0 == 0 {
            return Err(FieldError::ZeroInverse);
        }
        // a^(q-2) = a^(-1) since the multiplicative group has order q-1.
        Ok(self.pow(a, self.q - 2))
    }

    fn check(&self, a: FieldElem) {
        assert!(
            a.0 < self.q,
            "element index {} out of range for GF({})",
            a.0,
            self.q
        );
    }
}

/// Univariate polynomial over a field, constant term first, no stored
/// trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<FieldElem>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<FieldElem>) -> Poly {
        while coeffs.last() == Some(&FieldElem(0)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or(FieldElem(0))
    }

    pub fn is_monic_of_degree(&self, d: usize) -> bool {
        self.degree() == Some(d) && self.coeffs[d] == FieldElem(1)
    }

    /// Horner evaluation; the zero polynomial evaluates to 0.
    pub fn eval(&self, field: &Field, x: FieldElem) -> FieldElem {
        let mut acc = field.zero();
        for &c in self.coeffs.iter().rev() {
            acc = field.add(field.mul(acc, x), c);
        }
        acc
    }
}

/// Deterministic Miller-Rabin, exact for all u64.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Remainder of `a` divided by monic `b`, both over GF(p), constant first.
fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let mut r: Vec<u64> = a.to_vec();
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for j in 0..=db {
                let sub = mulmod(lead, b[j], p);
                r[shift + j] = (r[shift + j] + p - sub) % p;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

/// Smallest monic irreducible of degree e over GF(p), comparing the
/// coefficient tuple (c_0, ..., c_{e-1}) lexicographically. Found by
/// exhaustive ascending search with trial division.
fn smallest_irreducible(p: u64, e: u32) -> Vec<u64> {
    let e = e as usize;
    let total = p.pow(e as u32);
    for idx in 0..total {
        // Decode so that c_0 is the most significant search digit.
        let mut cand = vec![0u64; e + 1];
        cand[e] = 1;
        let mut v = idx;
        for i in (0..e).rev() {
            cand[i] = v % p;
            v /= p;
        }
        if is_irreducible(&cand, p) {
            return cand;
        }
    }
    unreachable!("a monic irreducible of every degree exists over GF(p)")
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    // Trial division by every monic polynomial of degree 1..=deg/2.
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut div = vec![0u64; d + 1];
            div[d] = 1;
            let mut v = idx;
            for c in div.iter_mut().take(d) {
                *c = v % p;
                v /= p;
            }
            if poly_rem(f, &div, p).is_empty() {
                return false;
            }
        }
    }
    true
}
