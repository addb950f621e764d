//! Graded coefficient rings `ℤ[g₁,…,gₖ]` with generators of negative degree,
//! truncated below degree `-D`.
//!
//! Every coefficient ring the engine uses is of this shape: plain integers (no
//! generators), `ℤ[β]`, the log-coefficient ring `ℤ[m₁,…,m_D]` that hosts the
//! Lazard ring, or the ring named in a user FGL file.  Dropping monomials of
//! degree `< -D` is a ring quotient, so it commutes with every operation.

use std::fmt;

use num_bigint::BigInt;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Packed exponent vector: eight 8-bit slots.
pub type Mono = u64;

pub const MAX_GENS: usize = 8;
const HIGH_BITS: u64 = 0x8080_8080_8080_8080;

#[inline]
pub fn slot(m: Mono, i: usize) -> u32 {
    ((m >> (8 * i)) & 0xff) as u32
}

#[inline]
pub fn unit(i: usize) -> Mono {
    1u64 << (8 * i)
}

/// Product of monomials; refuses to let an exponent reach 128.
#[inline]
pub fn mono_mul(a: Mono, b: Mono) -> Result<Mono> {
    if (a | b) & HIGH_BITS != 0 {
        return Err(Error::Overflow("monomial exponent"));
    }
    Ok(a + b)
}

#[inline]
pub(crate) fn add_i(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow("coefficient addition"))
}

#[inline]
pub(crate) fn mul_i(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow("coefficient multiplication"))
}

/// Sparse integer polynomial in the generators of some [`CoeffRing`].
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coeff {
    #[serde(with = "crate::decimal::terms")]
    terms: Vec<(Mono, i128)>,
}

impl fmt::Debug for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coeff{:?}", self.terms)
    }
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn int(c: i128) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            Coeff { terms: vec![(0, c)] }
        }
    }

    pub fn monomial(m: Mono, c: i128) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            Coeff { terms: vec![(m, c)] }
        }
    }

    /// Builds from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms(mut terms: Vec<(Mono, i128)>) -> Result<Self> {
        terms.sort_unstable_by_key(|t| t.0);
        let mut out: Vec<(Mono, i128)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = add_i(last.1, c)?,
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        Ok(Coeff { terms: out })
    }

    fn from_map(map: FxHashMap<Mono, i128>) -> Self {
        let mut terms: Vec<(Mono, i128)> = map.into_iter().filter(|t| t.1 != 0).collect();
        terms.sort_unstable_by_key(|t| t.0);
        Coeff { terms }
    }

    pub fn terms(&self) -> &[(Mono, i128)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> i128 {
        match self.terms.first() {
            Some(&(0, c)) => c,
            _ => 0,
        }
    }

    /// The integer value if this is a constant.
    pub fn as_int(&self) -> Option<i128> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    pub fn coefficient_of(&self, m: Mono) -> i128 {
        self.terms.binary_search_by_key(&m, |t| t.0).map_or(0, |i| self.terms[i].1)
    }

    pub fn neg(&self) -> Coeff {
        Coeff { terms: self.terms.iter().map(|&(m, c)| (m, -c)).collect() }
    }

    pub fn scale(&self, k: i128) -> Result<Coeff> {
        if k == 0 {
            return Ok(Coeff::zero());
        }
        let terms = self.terms.iter().map(|&(m, c)| Ok((m, mul_i(c, k)?))).collect::<Result<_>>()?;
        Ok(Coeff { terms })
    }

    /// Exact division of every coefficient by `k`.
    pub fn div_exact(&self, k: i128) -> Result<Coeff> {
        if k == 0 {
            return Err(Error::NotDivisible("division by zero".into()));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for &(m, c) in &self.terms {
            if c % k != 0 {
                return Err(Error::NotDivisible(format!("coefficient {c} by {k}")));
            }
            terms.push((m, c / k));
        }
        Ok(Coeff { terms })
    }

    pub fn add(&self, other: &Coeff) -> Result<Coeff> {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = add_i(a[i].1, b[j].1)?;
                    if c != 0 {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(Coeff { terms: out })
    }

    pub fn sub(&self, other: &Coeff) -> Result<Coeff> {
        self.add(&other.neg())
    }

    /// Reduces coefficients into `[0, n)`.
    pub fn reduce_mod(&self, n: i128) -> Coeff {
        let terms = self.terms.iter().map(|&(m, c)| (m, c.rem_euclid(n))).filter(|t| t.1 != 0).collect();
        Coeff { terms }
    }

    pub fn max_abs(&self) -> i128 {
        self.terms.iter().map(|t| t.1.abs()).max().unwrap_or(0)
    }
}

/// Coefficient ring description: generator names and (negative) degrees plus
/// the truncation bound `D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoeffRing {
    names: Vec<String>,
    degrees: Vec<i32>,
    trunc: u32,
}

impl CoeffRing {
    pub fn integers(trunc: u32) -> Self {
        CoeffRing { names: Vec::new(), degrees: Vec::new(), trunc }
    }

    pub fn new(names: Vec<String>, degrees: Vec<i32>, trunc: u32) -> Result<Self> {
        if names.len() != degrees.len() {
            return Err(Error::DimensionMismatch("generator names vs degrees".into()));
        }
        if names.len() > MAX_GENS {
            return Err(Error::Unsupported(format!("at most {MAX_GENS} coefficient generators")));
        }
        if let Some(d) = degrees.iter().find(|&&d| d >= 0) {
            return Err(Error::Unsupported(format!("generator degree {d} must be negative")));
        }
        Ok(CoeffRing { names, degrees, trunc })
    }

    pub fn ngens(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn gen(&self, i: usize) -> Coeff {
        Coeff::monomial(unit(i), 1)
    }

    #[inline]
    pub fn mono_degree(&self, m: Mono) -> i32 {
        let mut d = 0;
        for (i, &g) in self.degrees.iter().enumerate() {
            d += slot(m, i) as i32 * g;
        }
        d
    }

    #[inline]
    pub fn keeps(&self, m: Mono) -> bool {
        self.mono_degree(m) >= -(self.trunc as i32)
    }

    /// Degree of a homogeneous coefficient; `None` for zero or inhomogeneous input.
    pub fn degree(&self, c: &Coeff) -> Option<i32> {
        let mut it = c.terms.iter().map(|t| self.mono_degree(t.0));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn truncate(&self, c: &Coeff) -> Coeff {
        Coeff { terms: c.terms.iter().copied().filter(|t| self.keeps(t.0)).collect() }
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Result<Coeff> {
        if a.is_zero() || b.is_zero() {
            return Ok(Coeff::zero());
        }
        if a.terms.len() == 1 && a.terms[0].0 == 0 {
            return b.scale(a.terms[0].1);
        }
        if b.terms.len() == 1 && b.terms[0].0 == 0 {
            return a.scale(b.terms[0].1);
        }
        let mut acc: FxHashMap<Mono, i128> = FxHashMap::default();
        for &(ma, ca) in &a.terms {
            let da = self.mono_degree(ma);
            for &(mb, cb) in &b.terms {
                if da + self.mono_degree(mb) < -(self.trunc as i32) {
                    continue;
                }
                let m = mono_mul(ma, mb)?;
                let e = acc.entry(m).or_insert(0);
                *e = add_i(*e, mul_i(ca, cb)?)?;
            }
        }
        Ok(Coeff::from_map(acc))
    }

    pub fn pow(&self, a: &Coeff, e: u32) -> Result<Coeff> {
        let mut out = Coeff::one();
        for _ in 0..e {
            out = self.mul(&out, a)?;
        }
        Ok(out)
    }

    /// All monomials of weighted degree exactly `-d`, sorted.
    pub fn monomials_of_degree(&self, d: u32) -> Vec<Mono> {
        fn rec(degs: &[i32], i: usize, left: i32, cur: Mono, out: &mut Vec<Mono>) {
            if left == 0 {
                out.push(cur);
                return;
            }
            if i == degs.len() {
                return;
            }
            let g = -degs[i];
            let mut e = 0;
            while e * g <= left {
                rec(degs, i + 1, left - e * g, cur + (e as u64) * unit(i), out);
                e += 1;
            }
        }
        let mut out = Vec::new();
        rec(&self.degrees, 0, d as i32, 0, &mut out);
        out.sort_unstable();
        out
    }

    pub fn format_mono(&self, m: Mono) -> String {
        let mut parts = Vec::new();
        for i in 0..self.ngens() {
            match slot(m, i) {
                0 => {}
                1 => parts.push(self.names[i].clone()),
                e => parts.push(format!("{}^{}", self.names[i], e)),
            }
        }
        parts.join("*")
    }

    pub fn format(&self, c: &Coeff) -> String {
        if c.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, &(m, v)) in c.terms.iter().enumerate() {
            let neg = v < 0;
            let a = v.unsigned_abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m == 0 {
                s.push_str(&a.to_string());
            } else {
                if a != 1 {
                    s.push_str(&a.to_string());
                    s.push('*');
                }
                s.push_str(&self.format_mono(m));
            }
        }
        s
    }

    /// Coordinates of a homogeneous coefficient of degree `-d` on the monomial basis.
    pub fn monomial_coords(&self, c: &Coeff, d: u32) -> Result<Vec<BigInt>> {
        let basis = self.monomials_of_degree(d);
        let mut v = vec![BigInt::from(0); basis.len()];
        for &(m, x) in c.terms() {
            let Ok(i) = basis.binary_search(&m) else {
                return Err(Error::DimensionMismatch(format!(
                    "term {} is not of degree {}",
                    self.format_mono(m),
                    -(d as i32)
                )));
            };
            v[i] = BigInt::from(x);
        }
        Ok(v)
    }
}

/// Dense-ish matrix of coefficients, used for Gram matrices and correspondences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffMatrix {
    pub n: usize,
    pub m: usize,
    pub entries: Vec<Coeff>,
}

impl CoeffMatrix {
    pub fn zeros(n: usize, m: usize) -> Self {
        CoeffMatrix { n, m, entries: vec![Coeff::zero(); n * m] }
    }

    pub fn identity(n: usize) -> Self {
        let mut a = Self::zeros(n, n);
        for i in 0..n {
            a.entries[i * n + i] = Coeff::one();
        }
        a
    }

    pub fn get(&self, i: usize, j: usize) -> &Coeff {
        &self.entries[i * self.m + j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: Coeff) {
        self.entries[i * self.m + j] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Coeff::is_zero)
    }

    pub fn add(&self, o: &CoeffMatrix) -> Result<CoeffMatrix> {
        self.check_same(o)?;
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| a.add(b)).collect::<Result<_>>()?;
        Ok(CoeffMatrix { n: self.n, m: self.m, entries })
    }

    pub fn sub(&self, o: &CoeffMatrix) -> Result<CoeffMatrix> {
        self.check_same(o)?;
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| a.sub(b)).collect::<Result<_>>()?;
        Ok(CoeffMatrix { n: self.n, m: self.m, entries })
    }

    pub fn scale(&self, k: i128) -> Result<CoeffMatrix> {
        let entries = self.entries.iter().map(|a| a.scale(k)).collect::<Result<_>>()?;
        Ok(CoeffMatrix { n: self.n, m: self.m, entries })
    }

    pub fn mul(&self, ring: &CoeffRing, o: &CoeffMatrix) -> Result<CoeffMatrix> {
        if self.m != o.n {
            return Err(Error::DimensionMismatch(format!("{}x{} times {}x{}", self.n, self.m, o.n, o.m)));
        }
        let mut out = CoeffMatrix::zeros(self.n, o.m);
        for i in 0..self.n {
            for k in 0..self.m {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.m {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let p = ring.mul(a, b)?;
                    let idx = i * o.m + j;
                    out.entries[idx] = out.entries[idx].add(&p)?;
                }
            }
        }
        Ok(out)
    }

    /// Integer matrix of constant terms.
    pub fn augmentation(&self) -> Vec<Vec<i128>> {
        (0..self.n).map(|i| (0..self.m).map(|j| self.get(i, j).constant_term()).collect()).collect()
    }

    fn check_same(&self, o: &CoeffMatrix) -> Result<()> {
        if self.n != o.n || self.m != o.m {
            return Err(Error::DimensionMismatch(format!("{}x{} against {}x{}", self.n, self.m, o.n, o.m)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> CoeffRing {
        CoeffRing::new(vec!["m1".into(), "m2".into()], vec![-1, -2], 3).unwrap()
    }

    #[test]
    fn truncation_drops_low_degrees() {
        let r = ring();
        let m1 = r.gen(0);
        let m2 = r.gen(1);
        assert_eq!(r.degree(&m2), Some(-2));
        let p = r.mul(&m1, &m2).unwrap();
        assert_eq!(r.degree(&p), Some(-3));
        assert!(r.mul(&p, &m1).unwrap().is_zero());
    }

    #[test]
    fn monomial_enumeration_counts_partitions() {
        let r = CoeffRing::new((1..=6).map(|i| format!("m{i}")).collect(), (1..=6).map(|i| -i).collect(), 6).unwrap();
        let counts: Vec<usize> = (0..=6).map(|d| r.monomials_of_degree(d).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11]);
    }

    #[test]
    fn format_roundtrip_shape() {
        let r = ring();
        let c = Coeff::from_terms(vec![(unit(0), -3), (unit(1), 1)]).unwrap();
        assert_eq!(r.format(&c), "-3*m1 + m2");
    }

    #[test]
    fn add_cancels() {
        let r = ring();
        let a = r.gen(0);
        assert!(a.sub(&a).unwrap().is_zero());
    }
}
