//! Multivariate truncated power series with coefficients in a [`CoeffRing`].
//!
//! A term is stored flat as a packed key plus an `i128` coefficient: the high
//! 64 bits hold the exponents of the series variables, the low 64 bits the
//! exponents of the coefficient generators.  Sorting by key therefore groups
//! all coefficient monomials of one series monomial together.
//!
//! Each series carries the series degree up to which it is known (`prec`).
//! Products keep the smaller guarantee and exact division by an order-one
//! series loses one degree.

use std::collections::hash_map::Entry;
use std::fmt;

use rustc_hash::FxHashMap;

use crate::coeff::{add_i, mono_mul, mul_i, slot, Coeff, CoeffRing, Mono};
use crate::error::{Error, Result};

pub type Key = u128;

/// Precision value meaning "known exactly".
pub const EXACT: u32 = u32::MAX / 4;

pub const MAX_VARS: usize = 8;

#[inline]
pub fn xpart(k: Key) -> Mono {
    (k >> 64) as u64
}

#[inline]
pub fn gpart(k: Key) -> Mono {
    k as u64
}

#[inline]
pub fn key(x: Mono, g: Mono) -> Key {
    ((x as u128) << 64) | g as u128
}

/// Total degree of a packed monomial.
#[inline]
pub fn total(m: Mono) -> u32 {
    (m.wrapping_mul(0x0101_0101_0101_0101) >> 56) as u32
}

#[inline]
pub fn xdeg(k: Key) -> u32 {
    total(xpart(k))
}

/// Componentwise `a ≤ b` for packed exponent vectors.
#[inline]
pub fn mono_le(a: Mono, b: Mono) -> bool {
    (0..8).all(|i| slot(a, i) <= slot(b, i))
}

#[inline]
fn key_mul(a: Key, b: Key) -> Result<Key> {
    Ok(key(mono_mul(xpart(a), xpart(b))?, mono_mul(gpart(a), gpart(b))?))
}

/// Series variables plus the coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesRing {
    nvars: usize,
    coeff: CoeffRing,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    terms: Vec<(Key, i128)>,
    prec: u32,
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series(prec {}, {} terms)", self.prec, self.terms.len())
    }
}

fn finish(map: FxHashMap<Key, i128>, prec: u32) -> Series {
    let mut terms: Vec<(Key, i128)> = map.into_iter().filter(|t| t.1 != 0).collect();
    terms.sort_unstable_by_key(|t| t.0);
    Series { terms, prec }
}

impl Series {
    pub fn zero(prec: u32) -> Self {
        Series { terms: Vec::new(), prec }
    }

    pub fn constant(c: &Coeff) -> Self {
        Series { terms: c.terms().iter().map(|&(g, v)| (key(0, g), v)).collect(), prec: EXACT }
    }

    pub fn one() -> Self {
        Self::constant(&Coeff::one())
    }

    pub fn terms(&self) -> &[(Key, i128)] {
        &self.terms
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec;
        self.terms.retain(|t| xdeg(t.0) <= prec);
        self
    }

    /// Lowest series degree present; `prec + 1` for a (truncated) zero.
    pub fn ord(&self) -> u32 {
        self.terms.iter().map(|t| xdeg(t.0)).min().unwrap_or(self.prec.saturating_add(1))
    }

    pub fn max_xdeg(&self) -> u32 {
        self.terms.iter().map(|t| xdeg(t.0)).max().unwrap_or(0)
    }

    pub fn constant_term(&self) -> Coeff {
        let terms: Vec<(Mono, i128)> =
            self.terms.iter().filter(|t| xpart(t.0) == 0).map(|t| (gpart(t.0), t.1)).collect();
        Coeff::from_terms(terms).expect("distinct keys")
    }

    /// Coefficient of the series monomial `x`.
    pub fn coefficient(&self, x: Mono) -> Coeff {
        let lo = self.terms.partition_point(|t| t.0 < key(x, 0));
        let terms: Vec<(Mono, i128)> =
            self.terms[lo..].iter().take_while(|t| xpart(t.0) == x).map(|t| (gpart(t.0), t.1)).collect();
        Coeff::from_terms(terms).expect("distinct keys")
    }

    /// Terms whose series part equals `x`, as a slice.
    pub fn slice_at(&self, x: Mono) -> &[(Key, i128)] {
        let lo = self.terms.partition_point(|t| t.0 < key(x, 0));
        let hi = lo + self.terms[lo..].partition_point(|t| xpart(t.0) == x);
        &self.terms[lo..hi]
    }

    pub fn neg(&self) -> Series {
        Series { terms: self.terms.iter().map(|&(k, c)| (k, -c)).collect(), prec: self.prec }
    }

    pub fn scale(&self, k: i128) -> Result<Series> {
        if k == 0 {
            return Ok(Series::zero(self.prec));
        }
        let terms = self.terms.iter().map(|&(key, c)| Ok((key, mul_i(c, k)?))).collect::<Result<_>>()?;
        Ok(Series { terms, prec: self.prec })
    }

    pub fn add(&self, o: &Series) -> Result<Series> {
        let prec = self.prec.min(o.prec);
        let (a, b) = (&self.terms, &o.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
            let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
            let (k, c) = if take_a {
                i += 1;
                a[i - 1]
            } else if take_b {
                j += 1;
                b[j - 1]
            } else {
                i += 1;
                j += 1;
                (a[i - 1].0, add_i(a[i - 1].1, b[j - 1].1)?)
            };
            if c != 0 && xdeg(k) <= prec {
                out.push((k, c));
            }
        }
        Ok(Series { terms: out, prec })
    }

    pub fn sub(&self, o: &Series) -> Result<Series> {
        self.add(&o.neg())
    }

    /// Keeps only terms whose series exponents lie in the box `≤ mu`.
    pub fn truncate_box(&self, mu: Mono) -> Series {
        Series { terms: self.terms.iter().copied().filter(|t| mono_le(xpart(t.0), mu)).collect(), prec: self.prec }
    }

    /// Homogeneous degree (series degree plus coefficient degree) if any.
    pub fn degree(&self, ring: &SeriesRing) -> Option<i32> {
        let mut it = self.terms.iter().map(|t| xdeg(t.0) as i32 + ring.coeff.mono_degree(gpart(t.0)));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Degree-`j` homogeneous part in the series variables.
    pub fn xdeg_part(&self, j: u32) -> Series {
        Series { terms: self.terms.iter().copied().filter(|t| xdeg(t.0) == j).collect(), prec: EXACT }
    }
}

impl SeriesRing {
    pub fn new(nvars: usize, coeff: CoeffRing) -> Result<Self> {
        if nvars > MAX_VARS {
            return Err(Error::Unsupported(format!("at most {MAX_VARS} series variables")));
        }
        Ok(SeriesRing { nvars, coeff })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn coeff(&self) -> &CoeffRing {
        &self.coeff
    }

    #[inline]
    fn gdeg(&self, k: Key) -> i32 {
        self.coeff.mono_degree(gpart(k))
    }

    #[inline]
    fn min_gdeg(&self) -> i32 {
        -(self.coeff.trunc() as i32)
    }

    /// The variable `x_i` (exact).
    pub fn var(&self, i: usize) -> Series {
        assert!(i < self.nvars);
        Series { terms: vec![(key(1u64 << (8 * i), 0), 1)], prec: EXACT }
    }

    /// Linear form `Σ cᵢ xᵢ` (exact).
    pub fn linear(&self, c: &[i64]) -> Series {
        let mut terms: Vec<(Key, i128)> =
            c.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, &v)| (key(1u64 << (8 * i), 0), v as i128)).collect();
        terms.sort_unstable_by_key(|t| t.0);
        Series { terms, prec: EXACT }
    }

    pub fn from_terms(&self, terms: Vec<(Key, i128)>, prec: u32) -> Result<Series> {
        let mut map: FxHashMap<Key, i128> = FxHashMap::default();
        for (k, c) in terms {
            if xdeg(k) <= prec && self.gdeg(k) >= self.min_gdeg() {
                let e = map.entry(k).or_insert(0);
                *e = add_i(*e, c)?;
            }
        }
        Ok(finish(map, prec))
    }

    pub fn mul_coeff(&self, s: &Series, c: &Coeff) -> Result<Series> {
        let mut map: FxHashMap<Key, i128> = FxHashMap::default();
        for &(k, v) in s.terms() {
            let dk = self.gdeg(k);
            for &(g, w) in c.terms() {
                if dk + self.coeff.mono_degree(g) < self.min_gdeg() {
                    continue;
                }
                let nk = key(xpart(k), mono_mul(gpart(k), g)?);
                let e = map.entry(nk).or_insert(0);
                *e = add_i(*e, mul_i(v, w)?)?;
            }
        }
        Ok(finish(map, s.prec))
    }

    fn mul_inner(&self, a: &Series, b: &Series, prec: u32, mu: Option<Mono>) -> Result<Series> {
        if a.is_zero() || b.is_zero() {
            return Ok(Series::zero(prec));
        }
        let bi: Vec<(Key, i128, u32, i32)> = b.terms.iter().map(|&(k, c)| (k, c, xdeg(k), self.gdeg(k))).collect();
        let floor = self.min_gdeg();
        let mut map: FxHashMap<Key, i128> = FxHashMap::default();
        map.reserve(a.terms.len() + b.terms.len());
        for &(ka, ca) in &a.terms {
            let xa = xdeg(ka);
            if xa > prec {
                continue;
            }
            let ga = self.gdeg(ka);
            for &(kb, cb, xb, gb) in &bi {
                if xa + xb > prec || ga + gb < floor {
                    continue;
                }
                let k = key_mul(ka, kb)?;
                if let Some(m) = mu {
                    if !mono_le(xpart(k), m) {
                        continue;
                    }
                }
                let e = map.entry(k).or_insert(0);
                *e = add_i(*e, mul_i(ca, cb)?)?;
            }
        }
        Ok(finish(map, prec))
    }

    /// Guaranteed precision of a product.
    pub fn product_prec(a: &Series, b: &Series) -> u32 {
        let pa = a.prec.saturating_add(b.ord());
        let pb = b.prec.saturating_add(a.ord());
        pa.min(pb).min(EXACT)
    }

    pub fn mul(&self, a: &Series, b: &Series) -> Result<Series> {
        self.mul_inner(a, b, Self::product_prec(a, b), None)
    }

    /// Product truncated at an explicit precision.
    pub fn mul_trunc(&self, a: &Series, b: &Series, prec: u32) -> Result<Series> {
        self.mul_inner(a, b, Self::product_prec(a, b).min(prec), None)
    }

    /// Product restricted to series exponents `≤ mu`.
    ///
    /// Consistent for products because a box is closed under taking smaller
    /// exponents; not usable inside divisions.
    pub fn mul_box(&self, a: &Series, b: &Series, mu: Mono) -> Result<Series> {
        self.mul_inner(a, b, Self::product_prec(a, b), Some(mu))
    }

    pub fn pow(&self, a: &Series, e: u32) -> Result<Series> {
        let mut out = Series::one();
        for _ in 0..e {
            out = self.mul(&out, a)?;
        }
        Ok(out)
    }

    /// Truncates to series degree `prec`.
    pub fn truncate(&self, a: &Series, prec: u32) -> Series {
        a.clone().with_prec(a.prec.min(prec))
    }

    /// Substitutes `images[i]` for `x_i`; images must have zero constant term.
    pub fn substitute(&self, u: &Series, images: &[Series], prec: u32) -> Result<Series> {
        if images.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!("{} images for {} variables", images.len(), self.nvars)));
        }
        if let Some(i) = images.iter().position(|s| s.ord() == 0) {
            return Err(Error::NonzeroConstantTerm(format!("image of x{}", i + 1)));
        }
        let mut prec = images.iter().map(Series::prec).fold(prec.min(u.prec), u32::min);
        prec = prec.min(EXACT);
        let maxe: Vec<u32> =
            (0..self.nvars).map(|i| u.terms.iter().map(|t| slot(xpart(t.0), i)).max().unwrap_or(0)).collect();
        let mut powers: Vec<Vec<Series>> = Vec::with_capacity(self.nvars);
        for i in 0..self.nvars {
            let mut p = vec![Series::one()];
            for e in 1..=maxe[i] {
                let next = self.mul_trunc(&p[e as usize - 1], &images[i], prec)?;
                p.push(next);
            }
            powers.push(p);
        }
        let mut acc = Series::zero(prec);
        let mut cache: FxHashMap<Mono, Series> = FxHashMap::default();
        for &(k, c) in &u.terms {
            let x = xpart(k);
            let mono = match cache.entry(x) {
                Entry::Occupied(o) => o.into_mut(),
                Entry::Vacant(v) => {
                    let mut m = Series::one();
                    for (i, pw) in powers.iter().enumerate() {
                        let e = slot(x, i) as usize;
                        if e > 0 {
                            m = self.mul_trunc(&m, &pw[e], prec)?;
                        }
                    }
                    v.insert(m)
                }
            };
            let term = self.mul_coeff(mono, &Coeff::monomial(gpart(k), c))?;
            acc = acc.add(&term)?;
        }
        Ok(acc.with_prec(prec))
    }

    /// `u(image)` for a univariate `u` (only `x₁` may occur in `u`).
    pub fn compose_univariate(&self, u: &Series, image: &Series, prec: u32) -> Result<Series> {
        if image.ord() == 0 {
            return Err(Error::NonzeroConstantTerm("image of a univariate substitution".into()));
        }
        let prec = prec.min(u.prec).min(image.prec).min(EXACT);
        let top = u.terms.iter().map(|t| slot(xpart(t.0), 0)).max().unwrap_or(0);
        let mut acc = Series::zero(prec);
        let mut pw = Series::one();
        for e in 0..=top {
            if e > 0 {
                pw = self.mul_trunc(&pw, image, prec)?;
            }
            let c = u.coefficient(e as Mono);
            if !c.is_zero() {
                acc = acc.add(&self.mul_coeff(&pw, &c)?)?;
            }
        }
        Ok(acc.with_prec(prec))
    }

    /// The linear part of a series as integer coefficients (coefficient-degree zero terms).
    pub fn linear_part(&self, s: &Series) -> Vec<i128> {
        let mut out = vec![0i128; self.nvars];
        for &(k, c) in s.terms() {
            if xdeg(k) == 1 && gpart(k) == 0 {
                let x = xpart(k);
                let i = (0..self.nvars).find(|&i| slot(x, i) == 1).expect("degree one");
                out[i] = c;
            }
        }
        out
    }

    /// Exact quotient `u / d` where `d` has zero constant term and a nonzero
    /// integral linear part.
    ///
    /// The quotient is computed degree by degree; each step divides the lowest
    /// remaining homogeneous slice by the linear form of `d` using ordinary
    /// polynomial long division in the variable whose coefficient has the
    /// smallest absolute value.
    pub fn exact_divide(&self, u: &Series, d: &Series) -> Result<Series> {
        if d.ord() != 1 {
            return Err(Error::NotDivisible("divisor must have order one".into()));
        }
        let lin = self.linear_part(d);
        let (p, lp) = lin
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .min_by_key(|(i, &c)| (c.abs(), *i))
            .map(|(i, &c)| (i, c))
            .ok_or_else(|| Error::NotDivisible("divisor has no integral linear term".into()))?;
        let mut limit = u.prec.min(d.prec);
        if limit >= EXACT {
            // both exact: the quotient is bounded by homogeneity
            limit = match u.degree(self) {
                Some(k) => (k + self.coeff.trunc() as i32).max(0) as u32,
                None if u.is_zero() => 0,
                None => {
                    return Err(Error::PrecisionExhausted("exact inhomogeneous dividend has no degree bound".into()))
                }
            };
        }
        if limit == 0 {
            if u.terms.iter().any(|t| xdeg(t.0) == 0) {
                return Err(Error::NotDivisible("nonzero constant term in dividend".into()));
            }
            return Ok(Series::zero(0));
        }
        if d.terms.iter().any(|t| xdeg(t.0) == 1 && gpart(t.0) != 0) {
            return Err(Error::NotDivisible("divisor has a non-integral linear term".into()));
        }
        let qprec = limit - 1;
        let floor = self.min_gdeg();
        let rest: Vec<(Key, i128, u32, i32)> =
            d.terms.iter().filter(|t| xdeg(t.0) >= 2).map(|&(k, c)| (k, c, xdeg(k), self.gdeg(k))).collect();
        let mut rem: Vec<FxHashMap<Key, i128>> = vec![FxHashMap::default(); limit as usize + 1];
        for &(k, c) in &u.terms {
            let j = xdeg(k);
            if j <= limit {
                rem[j as usize].insert(k, c);
            }
        }
        if rem[0].values().any(|&c| c != 0) {
            return Err(Error::NotDivisible("nonzero constant term in dividend".into()));
        }
        let xunit = |i: usize| -> Key { 1u128 << (64 + 8 * i) };
        let mut q: Vec<(Key, i128)> = Vec::new();
        for j in 1..=limit as usize {
            let slice = std::mem::take(&mut rem[j]);
            if slice.values().all(|&c| c == 0) {
                continue;
            }
            // bucket by exponent of the pivot variable
            let mut buckets: Vec<FxHashMap<Key, i128>> = Vec::new();
            for (k, c) in slice {
                if c == 0 {
                    continue;
                }
                let e = slot(xpart(k), p) as usize;
                if buckets.len() <= e {
                    buckets.resize_with(e + 1, FxHashMap::default);
                }
                let v = buckets[e].entry(k).or_insert(0);
                *v = add_i(*v, c)?;
            }
            let mut qslice: Vec<(Key, i128)> = Vec::new();
            for e in (1..buckets.len()).rev() {
                let cur = std::mem::take(&mut buckets[e]);
                for (k, c) in cur {
                    if c == 0 {
                        continue;
                    }
                    if c % lp != 0 {
                        return Err(Error::NotDivisible(format!("coefficient {c} not divisible by pivot {lp}")));
                    }
                    let qc = c / lp;
                    let qk = k - xunit(p);
                    qslice.push((qk, qc));
                    for (i, &li) in lin.iter().enumerate() {
                        if i == p || li == 0 {
                            continue;
                        }
                        let nk = qk + xunit(i);
                        let slot_e = &mut buckets[e - 1];
                        let v = slot_e.entry(nk).or_insert(0);
                        *v = add_i(*v, -mul_i(qc, li)?)?;
                    }
                }
            }
            if buckets.first().is_some_and(|b| b.values().any(|&c| c != 0)) {
                return Err(Error::NotDivisible(format!("remainder in series degree {j}")));
            }
            // propagate the higher-order part of the divisor
            for &(qk, qc) in &qslice {
                let gq = self.gdeg(qk);
                let xq = (j - 1) as u32;
                for &(dk, dc, xd, gd) in &rest {
                    if xq + xd > limit || gq + gd < floor {
                        continue;
                    }
                    let nk = key_mul(qk, dk)?;
                    let v = rem[(xq + xd) as usize].entry(nk).or_insert(0);
                    *v = add_i(*v, -mul_i(qc, dc)?)?;
                }
            }
            q.extend(qslice);
        }
        let mut map: FxHashMap<Key, i128> = FxHashMap::default();
        for (k, c) in q {
            if xdeg(k) <= qprec {
                let v = map.entry(k).or_insert(0);
                *v = add_i(*v, c)?;
            }
        }
        let out_prec = if u.prec >= EXACT && d.prec >= EXACT { EXACT } else { qprec };
        Ok(finish(map, out_prec))
    }

    pub fn format(&self, s: &Series) -> String {
        if s.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < s.terms.len() {
            let x = xpart(s.terms[i].0);
            let c = s.coefficient(x);
            i += s.slice_at(x).len();
            let mut mono = Vec::new();
            for v in 0..self.nvars {
                match slot(x, v) {
                    0 => {}
                    1 => mono.push(format!("x{}", v + 1)),
                    e => mono.push(format!("x{}^{}", v + 1, e)),
                }
            }
            let cs = self.coeff.format(&c);
            if mono.is_empty() {
                parts.push(cs);
            } else if cs == "1" {
                parts.push(mono.join("*"));
            } else {
                parts.push(format!("({cs})*{}", mono.join("*")));
            }
        }
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring2() -> SeriesRing {
        SeriesRing::new(2, CoeffRing::integers(4)).unwrap()
    }

    #[test]
    fn multiply_and_divide_back() {
        let r = ring2();
        let x1 = r.var(0);
        let x2 = r.var(1);
        let d = r.linear(&[2, -1]);
        let v = r.add_all(&[r.mul(&x1, &x1).unwrap(), r.mul(&x1, &x2).unwrap().scale(3).unwrap()]);
        let u = r.mul(&v, &d).unwrap();
        let q = r.exact_divide(&u, &d).unwrap();
        assert_eq!(q.terms(), v.terms());
    }

    #[test]
    fn division_refuses_non_multiples() {
        let r = ring2();
        assert!(matches!(r.exact_divide(&r.var(0), &r.var(1)), Err(Error::NotDivisible(_))));
    }

    #[test]
    fn division_with_higher_order_divisor() {
        let r = ring2();
        let x1 = r.var(0);
        // d = x1 + x1^2 truncated at 6
        let d = x1.add(&r.mul(&x1, &x1).unwrap()).unwrap().with_prec(6);
        let v = r.var(1).add(&Series::one()).unwrap();
        let u = r.mul(&v, &d).unwrap();
        let q = r.exact_divide(&u, &d).unwrap();
        assert_eq!(q.prec(), 5);
        assert_eq!(q.terms(), v.with_prec(5).terms());
    }

    #[test]
    fn box_product_is_consistent() {
        let r = ring2();
        let a = r.linear(&[1, 1]);
        let full = r.pow(&a, 4).unwrap();
        let mu = (2u64) | (2u64 << 8);
        let cube = r.pow(&a, 3).unwrap();
        let boxed = r.mul_box(&cube.truncate_box(mu), &a, mu).unwrap();
        assert_eq!(boxed.terms(), full.truncate_box(mu).terms());
        assert_eq!(boxed.coefficient(mu).as_int(), Some(6));
    }

    impl SeriesRing {
        fn add_all(&self, xs: &[Series]) -> Series {
            xs.iter().fold(Series::zero(EXACT), |a, b| a.add(b).unwrap())
        }
    }
}
