//! Formal group laws: additive, multiplicative, universal (over the Lazard
//! ring, through log coefficients) and user-supplied tables.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coeff::{Coeff, CoeffRing};
use crate::error::{Error, Result};
use crate::expr::{self, Evaluator};
use crate::lazard::LazardBasis;
use crate::series::{Series, SeriesRing};

/// Which family a law belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LawKind {
    Additive,
    /// `F(x,y) = x + y − βxy`, `deg β = −1`.
    Multiplicative,
    /// Universal law over the Lazard ring, truncated at degree `−D`.
    Universal,
    Custom(String),
}

impl fmt::Display for LawKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawKind::Additive => write!(f, "additive"),
            LawKind::Multiplicative => write!(f, "multiplicative"),
            LawKind::Universal => write!(f, "universal"),
            LawKind::Custom(n) => write!(f, "custom:{n}"),
        }
    }
}

/// Coefficient table `a_ij` for `2 ≤ i+j ≤ D+1` together with its coefficient ring.
#[derive(Clone, Debug)]
pub struct Fgl {
    kind: LawKind,
    ring: CoeffRing,
    /// `table[i][j]` for `i, j ≥ 1`, `i + j ≤ D + 1`.
    table: Vec<Vec<Coeff>>,
    lazard: Option<Arc<LazardBasis>>,
}

fn empty_table(d: u32) -> Vec<Vec<Coeff>> {
    let n = d as usize + 2;
    vec![vec![Coeff::zero(); n]; n]
}

impl Fgl {
    pub fn additive(d: u32) -> Self {
        Fgl { kind: LawKind::Additive, ring: CoeffRing::integers(d), table: empty_table(d), lazard: None }
    }

    pub fn multiplicative(d: u32) -> Self {
        let ring = CoeffRing::new(vec!["beta".into()], vec![-1], d).expect("valid ring");
        let mut table = empty_table(d);
        if d >= 1 {
            table[1][1] = ring.gen(0).neg();
        }
        Fgl { kind: LawKind::Multiplicative, ring, table, lazard: None }
    }

    /// Universal law `exp(log x + log y)` with `log x = x + Σ mᵢ x^{i+1}`.
    pub fn universal(d: u32) -> Result<Self> {
        if d as usize > crate::coeff::MAX_GENS {
            return Err(Error::Unsupported(format!(
                "universal truncation {d} exceeds {} log coefficients",
                crate::coeff::MAX_GENS
            )));
        }
        let names: Vec<String> = (1..=d).map(|i| format!("m{i}")).collect();
        let degrees: Vec<i32> = (1..=d as i32).map(|i| -i).collect();
        let ring = CoeffRing::new(names, degrees, d)?;
        let prec = d + 1;
        // exp = compositional inverse of log, by fixed-point iteration
        let r1 = SeriesRing::new(1, ring.clone())?;
        let y = r1.var(0).with_prec(prec);
        let mut e = y.clone();
        for _ in 0..=d {
            let mut corr = Series::zero(prec);
            let mut pw = e.clone();
            for i in 1..=d as usize {
                pw = r1.mul_trunc(&pw, &e, prec)?;
                corr = corr.add(&r1.mul_coeff(&pw, &ring.gen(i - 1))?)?;
            }
            e = y.sub(&corr)?;
        }
        let exp_coeffs: Vec<Coeff> = (0..=prec).map(|k| e.coefficient(k as u64)).collect();
        let r2 = SeriesRing::new(2, ring.clone())?;
        let log_of = |v: usize| -> Result<Series> {
            let x = r2.var(v).with_prec(prec);
            let mut acc = x.clone();
            let mut pw = x.clone();
            for i in 1..=d as usize {
                pw = r2.mul_trunc(&pw, &x, prec)?;
                acc = acc.add(&r2.mul_coeff(&pw, &ring.gen(i - 1))?)?;
            }
            Ok(acc)
        };
        let l = log_of(0)?.add(&log_of(1)?)?;
        let mut f = Series::zero(prec);
        let mut pw = Series::one();
        for k in 1..=prec as usize {
            pw = r2.mul_trunc(&pw, &l, prec)?;
            f = f.add(&r2.mul_coeff(&pw, &exp_coeffs[k])?)?;
        }
        let mut table = empty_table(d);
        for i in 1..=d as usize {
            for j in 1..=(d as usize + 1 - i) {
                table[i][j] = f.coefficient((i as u64) | ((j as u64) << 8));
            }
        }
        let mut law = Fgl { kind: LawKind::Universal, ring, table, lazard: None };
        law.lazard = Some(Arc::new(LazardBasis::new(&law)?));
        Ok(law)
    }

    /// Parses a user law file (see the crate README for the format).
    pub fn from_file_text(text: &str, d: u32) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(Error::Parse { line: 0, msg: "empty file".into() })?;
        let mut words = header.split_whitespace();
        if words.next() != Some("fgl") {
            return Err(Error::Parse { line: hline, msg: "header must start with 'fgl'".into() });
        }
        let name = words.next().ok_or(Error::Parse { line: hline, msg: "missing law name".into() })?;
        if words.next() != Some("generators") {
            return Err(Error::Parse { line: hline, msg: "expected 'generators'".into() });
        }
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        for w in words {
            let (n, deg) = w
                .split_once(':')
                .ok_or(Error::Parse { line: hline, msg: format!("generator '{w}' needs name:degree") })?;
            let deg: i32 =
                deg.parse().map_err(|_| Error::Parse { line: hline, msg: format!("bad degree in '{w}'") })?;
            if deg >= 0 {
                return Err(Error::Parse { line: hline, msg: format!("generator {n} must have negative degree") });
            }
            names.push(n.to_string());
            degrees.push(deg);
        }
        let ring = CoeffRing::new(names, degrees, d).map_err(|e| Error::Parse { line: hline, msg: e.to_string() })?;
        let mut table = empty_table(d);
        let mut given = vec![vec![false; d as usize + 2]; d as usize + 2];
        for (ln, line) in lines {
            let (lhs, rhs) =
                line.split_once('=').ok_or(Error::Parse { line: ln, msg: "expected 'a i j = ...'".into() })?;
            let parts: Vec<&str> = lhs.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "a" {
                return Err(Error::Parse { line: ln, msg: "expected 'a i j'".into() });
            }
            let i: usize = parts[1].parse().map_err(|_| Error::Parse { line: ln, msg: "bad index".into() })?;
            let j: usize = parts[2].parse().map_err(|_| Error::Parse { line: ln, msg: "bad index".into() })?;
            if i == 0 || j == 0 {
                return Err(Error::Parse { line: ln, msg: "indices must be positive".into() });
            }
            let value = expr::parse_eval(rhs, ln, &RingEval(&ring))?;
            let want = 1 - (i + j) as i32;
            if let Some(deg) = ring.degree(&value) {
                if deg != want {
                    return Err(Error::Parse { line: ln, msg: format!("a {i} {j} has degree {deg}, expected {want}") });
                }
            }
            if i + j > d as usize + 1 {
                continue;
            }
            let value = ring.truncate(&value);
            for (a, b) in [(i, j), (j, i)] {
                if given[a][b] && table[a][b] != value {
                    return Err(Error::Parse { line: ln, msg: format!("conflicting values for a {a} {b}") });
                }
                table[a][b] = value.clone();
                given[a][b] = true;
            }
        }
        Ok(Fgl { kind: LawKind::Custom(name.to_string()), ring, table, lazard: None })
    }

    pub fn kind(&self) -> &LawKind {
        &self.kind
    }

    pub fn ring(&self) -> &CoeffRing {
        &self.ring
    }

    pub fn trunc(&self) -> u32 {
        self.ring.trunc()
    }

    pub fn lazard(&self) -> Option<&LazardBasis> {
        self.lazard.as_deref()
    }

    /// `a_ij`, zero outside the stored range.
    pub fn a(&self, i: usize, j: usize) -> Coeff {
        if i == 0 || j == 0 {
            return if i + j == 1 { Coeff::one() } else { Coeff::zero() };
        }
        self.table.get(i).and_then(|r| r.get(j)).cloned().unwrap_or_default()
    }

    /// Resolves a coefficient name: a generator, `aIJ` / `a_I_J`, or `beta`.
    pub fn named_coefficient(&self, name: &str) -> Option<Coeff> {
        if let Some(i) = self.ring.gen_index(name) {
            return Some(self.ring.gen(i));
        }
        let rest = name.strip_prefix('a')?;
        let (i, j) = if let Some(r) = rest.strip_prefix('_') {
            let (a, b) = r.split_once('_')?;
            (a.parse().ok()?, b.parse().ok()?)
        } else if rest.len() == 2 {
            let b = rest.as_bytes();
            ((b[0] as char).to_digit(10)? as usize, (b[1] as char).to_digit(10)? as usize)
        } else {
            return None;
        };
        Some(self.a(i, j))
    }

    /// Parses an integer polynomial in the law's named coefficients.
    pub fn parse_coefficient(&self, s: &str) -> Result<Coeff> {
        let ev = LawEval(self);
        let c = expr::parse_eval(s, 1, &ev)?;
        Ok(self.ring.truncate(&c))
    }

    /// `F(u, v)` for series with zero constant term.
    pub fn sum(&self, ring: &SeriesRing, u: &Series, v: &Series) -> Result<Series> {
        if u.ord() == 0 || v.ord() == 0 {
            return Err(Error::NonzeroConstantTerm("formal sum arguments".into()));
        }
        if ring.coeff() != &self.ring {
            return Err(Error::RingMismatch("series ring does not match the law".into()));
        }
        let prec = SeriesRing::product_prec(u, v).min(u.prec()).min(v.prec());
        let mut acc = u.add(v)?;
        let top = self.trunc() as usize + 1;
        let mut upow = vec![Series::one()];
        let mut vpow = vec![Series::one()];
        for k in 1..top {
            upow.push(ring.mul_trunc(&upow[k - 1], u, prec)?);
            vpow.push(ring.mul_trunc(&vpow[k - 1], v, prec)?);
        }
        for i in 1..top {
            for j in 1..=(top - i) {
                let a = self.a(i, j);
                if a.is_zero() {
                    continue;
                }
                let t = ring.mul_trunc(&upow[i], &vpow[j], prec)?;
                acc = acc.add(&ring.mul_coeff(&t, &a)?)?;
            }
        }
        Ok(acc.with_prec(prec))
    }

    /// Univariate formal inverse `ι(x)` with `F(x, ι(x)) = 0` up to degree `prec`.
    pub fn formal_inverse(&self, prec: u32) -> Result<Series> {
        let r1 = SeriesRing::new(1, self.ring.clone())?;
        let x = r1.var(0).with_prec(prec);
        let mut y = x.neg();
        for _ in 0..prec {
            // y = −x − Σ a_ij x^i y^j
            let s = self.sum(&r1, &x, &y)?;
            y = y.sub(&s)?;
        }
        Ok(y)
    }

    /// Univariate `n ·_F x` by left-folding formal sums.
    pub fn n_series(&self, n: i64, prec: u32) -> Result<Series> {
        let r1 = SeriesRing::new(1, self.ring.clone())?;
        let base = if n < 0 { self.formal_inverse(prec)? } else { r1.var(0).with_prec(prec) };
        let mut acc = Series::zero(prec);
        for k in 0..n.unsigned_abs() {
            acc = if k == 0 { base.clone() } else { self.sum(&r1, &acc, &base)? };
        }
        Ok(acc)
    }

    /// Checks `F(x,0) = x`, commutativity and associativity up to degree `D+1`.
    pub fn check(&self) -> Result<FglReport> {
        let prec = self.trunc() + 1;
        let r3 = SeriesRing::new(3, self.ring.clone())?;
        let x = r3.var(0).with_prec(prec);
        let y = r3.var(1).with_prec(prec);
        let z = r3.var(2).with_prec(prec);
        let zero = Series::zero(prec);
        let identity = self.sum_allow_zero(&r3, &x, &zero)? == x;
        let commutative = self.sum(&r3, &x, &y)? == self.sum(&r3, &y, &x)?;
        let left = self.sum(&r3, &self.sum(&r3, &x, &y)?, &z)?;
        let right = self.sum(&r3, &x, &self.sum(&r3, &y, &z)?)?;
        let diff = left.sub(&right)?;
        let homogeneous = (1..=self.trunc() as usize).all(|i| {
            (1..=(self.trunc() as usize + 1 - i)).all(|j| {
                let a = self.a(i, j);
                a.is_zero() || self.ring.degree(&a) == Some(1 - (i + j) as i32)
            })
        });
        Ok(FglReport {
            law: self.kind.to_string(),
            precision: prec,
            identity,
            commutative,
            associative: diff.is_zero(),
            homogeneous,
            associativity_defect: r3.format(&diff),
        })
    }

    fn sum_allow_zero(&self, ring: &SeriesRing, u: &Series, v: &Series) -> Result<Series> {
        if v.is_zero() {
            return Ok(u.clone());
        }
        self.sum(ring, u, v)
    }

    /// Basis of the degree `−d` part of the coefficient ring.
    pub fn degree_basis(&self, d: u32) -> Result<Vec<Coeff>> {
        if d > self.trunc() {
            return Err(Error::TruncationTooSmall { bound: self.trunc(), degree: -(d as i32) });
        }
        match &self.lazard {
            Some(l) => Ok(l.basis(d).to_vec()),
            None => Ok(self.ring.monomials_of_degree(d).into_iter().map(|m| Coeff::monomial(m, 1)).collect()),
        }
    }

    /// Integer coordinates of a homogeneous degree `−d` coefficient on [`Fgl::degree_basis`].
    pub fn degree_coords(&self, c: &Coeff, d: u32) -> Result<Vec<num_bigint::BigInt>> {
        match &self.lazard {
            Some(l) => l.coords(c, d),
            None => self.ring.monomial_coords(c, d),
        }
    }

    /// Human-readable coefficient; universal coefficients are written in the `a_ij`.
    pub fn format_coeff(&self, c: &Coeff) -> String {
        match &self.lazard {
            Some(l) => l.format_in_a(self, c).unwrap_or_else(|_| self.ring.format(c)),
            None => self.ring.format(c),
        }
    }

    /// Coefficient as a list of monomials `({generator: exponent}, integer)`.
    pub fn coeff_monomials(&self, c: &Coeff) -> Vec<(Vec<(String, u32)>, i128)> {
        match &self.lazard {
            Some(l) => match l.in_a_monomials(c) {
                Ok(v) => v,
                Err(_) => self.raw_monomials(c),
            },
            None => self.raw_monomials(c),
        }
    }

    fn raw_monomials(&self, c: &Coeff) -> Vec<(Vec<(String, u32)>, i128)> {
        c.terms()
            .iter()
            .map(|&(m, v)| {
                let exps = (0..self.ring.ngens())
                    .filter(|&i| crate::coeff::slot(m, i) > 0)
                    .map(|i| (self.ring.names()[i].clone(), crate::coeff::slot(m, i)))
                    .collect();
                (exps, v)
            })
            .collect()
    }

    /// Specializes a universal coefficient along the classifying map to `target`.
    pub fn specialize(&self, c: &Coeff, target: &Fgl) -> Result<Coeff> {
        let Some(l) = &self.lazard else {
            return Err(Error::Unsupported("specialization starts from the universal law".into()));
        };
        if c.is_zero() {
            return Ok(Coeff::zero());
        }
        let d = self.ring.degree(c).ok_or_else(|| Error::NotIntegral("inhomogeneous coefficient".into()))?;
        let d = (-d) as u32;
        if d > target.trunc() {
            return Err(Error::TruncationTooSmall { bound: target.trunc(), degree: -(d as i32) });
        }
        l.specialize(c, d, target)
    }
}

/// Result of [`Fgl::check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FglReport {
    pub law: String,
    pub precision: u32,
    pub identity: bool,
    pub commutative: bool,
    pub associative: bool,
    pub homogeneous: bool,
    pub associativity_defect: String,
}

impl FglReport {
    pub fn passed(&self) -> bool {
        self.identity && self.commutative && self.associative && self.homogeneous
    }
}

struct RingEval<'a>(&'a CoeffRing);

impl Evaluator for RingEval<'_> {
    type Value = Coeff;
    fn int(&self, v: i128) -> Result<Coeff> {
        Ok(Coeff::int(v))
    }
    fn var(&self, name: &str) -> Result<Coeff> {
        self.0
            .gen_index(name)
            .map(|i| self.0.gen(i))
            .ok_or(Error::Parse { line: 0, msg: format!("unknown generator {name}") })
    }
    fn add(&self, a: &Coeff, b: &Coeff) -> Result<Coeff> {
        a.add(b)
    }
    fn neg(&self, a: &Coeff) -> Result<Coeff> {
        Ok(a.neg())
    }
    fn mul(&self, a: &Coeff, b: &Coeff) -> Result<Coeff> {
        self.0.mul(a, b)
    }
}

pub(crate) struct LawEval<'a>(pub &'a Fgl);

impl Evaluator for LawEval<'_> {
    type Value = Coeff;
    fn int(&self, v: i128) -> Result<Coeff> {
        Ok(Coeff::int(v))
    }
    fn var(&self, name: &str) -> Result<Coeff> {
        self.0.named_coefficient(name).ok_or(Error::Parse { line: 0, msg: format!("unknown coefficient {name}") })
    }
    fn add(&self, a: &Coeff, b: &Coeff) -> Result<Coeff> {
        a.add(b)
    }
    fn neg(&self, a: &Coeff) -> Result<Coeff> {
        Ok(a.neg())
    }
    fn mul(&self, a: &Coeff, b: &Coeff) -> Result<Coeff> {
        self.0.ring.mul(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn universal_a11_is_minus_two_m1() {
        let f = Fgl::universal(3).unwrap();
        let m1 = f.ring().gen(0);
        assert_eq!(f.a(1, 1), m1.scale(-2).unwrap());
        assert_eq!(f.a(1, 2), f.a(2, 1));
    }

    #[test]
    fn multiplicative_inverse_is_geometric() {
        let f = Fgl::multiplicative(4);
        let inv = f.formal_inverse(4).unwrap();
        let beta = f.ring().gen(0);
        for k in 1..=4u64 {
            let want = f.ring().pow(&beta, (k - 1) as u32).unwrap().neg();
            assert_eq!(inv.coefficient(k), want, "degree {k}");
        }
    }

    #[test]
    fn n_series_small_cases() {
        let f = Fgl::multiplicative(3);
        let two = f.n_series(2, 3).unwrap();
        assert_eq!(two.coefficient(1).as_int(), Some(2));
        assert_eq!(two.coefficient(2), f.ring().gen(0).neg());
        assert!(two.coefficient(3).is_zero());
        assert!(f.n_series(0, 3).unwrap().is_zero());
        let add = Fgl::additive(3);
        assert_eq!(add.n_series(-3, 3).unwrap().coefficient(1).as_int(), Some(-3));
    }

    #[test]
    fn custom_file_roundtrip() {
        let text = "fgl k1 generators v:-1\n# multiplicative in disguise\na 1 1 = -v\n";
        let f = Fgl::from_file_text(text, 3).unwrap();
        assert!(f.check().unwrap().passed());
        assert_eq!(f.a(1, 1), f.ring().gen(0).neg());
        let bad = "fgl k1 generators v:-1\na 1 2 = v\n";
        assert!(Fgl::from_file_text(bad, 3).is_err());
        let conflict = "fgl k generators v:-1 w:-2\na 1 2 = w\na 2 1 = -w\n";
        assert!(Fgl::from_file_text(conflict, 3).is_err());
        assert!(Fgl::from_file_text("fgl k generators v:1\n", 3).is_err());
    }

    #[test]
    fn laws_are_associative() {
        for law in [Fgl::additive(4), Fgl::multiplicative(4), Fgl::universal(4).unwrap()] {
            let r = law.check().unwrap();
            assert!(r.passed(), "{}: {}", r.law, r.associativity_defect);
        }
    }

    #[test]
    fn multiplicative_p_series_mod_p() {
        // [p](x) = (1 - (1 - βx)^p)/β, which is β^{p-1} x^p mod p
        for p in [2i128, 3, 5] {
            let f = Fgl::multiplicative(p as u32);
            let s = f.n_series(p as i64, p as u32 + 1).unwrap();
            let beta = f.ring().gen(0);
            for k in 1..=p as u64 {
                let c = s.coefficient(k).reduce_mod(p);
                let want = if k == p as u64 { f.ring().pow(&beta, (p - 1) as u32).unwrap() } else { Coeff::zero() };
                assert_eq!(c, want.reduce_mod(p), "p = {p}, degree {k}");
            }
        }
    }

    #[test]
    fn universal_inverse_cancels() {
        let f = Fgl::universal(4).unwrap();
        let r1 = SeriesRing::new(1, f.ring().clone()).unwrap();
        let x = r1.var(0).with_prec(5);
        let inv = f.formal_inverse(5).unwrap();
        assert!(f.sum(&r1, &x, &inv).unwrap().is_zero());
    }
}
