//! Oriented cohomology of `G/B` in the fixed-point model.
//!
//! A class is a tuple of truncated series indexed by the Weyl group (its
//! restrictions to the torus-fixed points). Series variables are the
//! fundamental weights, so `x_λ` for any weight is the formal sum of
//! `λᵢ ·_F xᵢ` folded from the left.
//!
//! Coefficients on the basis `ζ_w` are read off through the pushforward to a
//! point, evaluated on a single monomial `x^μ` of the common denominator
//! `∏_{α∈Σ} x_α`; see [`Theory::expand`].

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::coeff::{mono_mul, mul_i, Coeff, CoeffMatrix, Mono};
use crate::error::{Error, Result};
use crate::fgl::Fgl;
use crate::lattice::{hermite_normal_form, IntMatrix};
use crate::lazard::to_i128;
use crate::par::{map_range, try_map_range, Exec};
use crate::roots::{RootDatum, Weight, WeylGroup, WordOrder};
use crate::series::{gpart, key, mono_le, xdeg, xpart, Series, SeriesRing, EXACT};

/// Which Weyl-group side the characteristic map uses:
/// `c(x_λ)(w) = x_{−w(λ)}` or `x_{−w⁻¹(λ)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CharSide {
    Left,
    Inverse,
}

/// Operator conventions recorded alongside cached tables.
pub const PUSH_PULL_VARIANT: &str = "A_i f(w) = (f(w) x_{w a_i} + f(w s_i) x_{-w a_i}) / (x_{w a_i} x_{-w a_i})";

#[derive(Clone, Debug)]
pub struct TheoryOptions {
    /// Working series precision; defaults to `3N`.
    pub precision: Option<u32>,
    pub exec: Exec,
    pub word_order: WordOrder,
}

impl Default for TheoryOptions {
    fn default() -> Self {
        TheoryOptions { precision: None, exec: Exec::Parallel, word_order: WordOrder::LexMin }
    }
}

/// A class on `G/B`, one series per Weyl element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GKMClass {
    values: Vec<Series>,
}

impl GKMClass {
    pub fn new(values: Vec<Series>) -> Self {
        GKMClass { values }
    }

    pub fn zero(len: usize, prec: u32) -> Self {
        GKMClass { values: vec![Series::zero(prec); len] }
    }

    pub fn at(&self, w: usize) -> &Series {
        &self.values[w]
    }

    pub fn values(&self) -> &[Series] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Series::is_zero)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&w| !self.values[w].is_zero()).collect()
    }

    pub fn min_prec(&self) -> u32 {
        self.values.iter().map(Series::prec).min().unwrap_or(EXACT)
    }

    pub fn add(&self, o: &GKMClass) -> Result<GKMClass> {
        Ok(GKMClass { values: self.values.iter().zip(&o.values).map(|(a, b)| a.add(b)).collect::<Result<_>>()? })
    }

    pub fn sub(&self, o: &GKMClass) -> Result<GKMClass> {
        Ok(GKMClass { values: self.values.iter().zip(&o.values).map(|(a, b)| a.sub(b)).collect::<Result<_>>()? })
    }
}

/// Data for reading coefficients off through a single monomial.
#[derive(Debug)]
struct Pairing {
    mu: Mono,
    l: i128,
    /// `Q_v = ∏_{β>0} x_{v(β)}` restricted to exponents `≤ μ`.
    q: Vec<Series>,
    /// Inverse Gram matrix.
    t: CoeffMatrix,
    /// `K[w][v] = τ_w(v)·Q_v`, box-truncated.
    k: Vec<Vec<Series>>,
}

/// Root datum, Weyl group, formal group law and working precision.
pub struct Theory {
    rd: Arc<RootDatum>,
    weyl: Arc<WeylGroup>,
    law: Arc<Fgl>,
    ring: SeriesRing,
    prec: u32,
    exec: Exec,
    side: CharSide,
    /// `n ·_F x` for `|n| ≤ NSER`.
    nser: Vec<Series>,
    pos: Vec<Series>,
    neg: Vec<Series>,
    /// `x_{−β}/x_β` and `x_β/x_{−β}`.
    ratio_pos: Vec<Series>,
    ratio_neg: Vec<Series>,
    /// `wroot[w][i]` = (k, sign) with `w(αᵢ) = sign·β_k`.
    wroot: Vec<Vec<(usize, i64)>>,
    basis: OnceLock<Vec<GKMClass>>,
    pairing: OnceLock<Pairing>,
}

const NSER: i64 = 12;

impl std::fmt::Debug for Theory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Theory({}, {}, P={})", self.rd.label(), self.law.kind(), self.prec)
    }
}

impl Theory {
    pub fn new(rd: Arc<RootDatum>, law: Arc<Fgl>, opts: &TheoryOptions) -> Result<Self> {
        let weyl = Arc::new(WeylGroup::new(&rd, opts.word_order));
        Self::with_weyl(rd, weyl, law, opts)
    }

    pub fn with_weyl(rd: Arc<RootDatum>, weyl: Arc<WeylGroup>, law: Arc<Fgl>, opts: &TheoryOptions) -> Result<Self> {
        let n = rd.n() as u32;
        if law.trunc() < n {
            return Err(Error::TruncationTooSmall { bound: law.trunc(), degree: -(n as i32) });
        }
        let prec = opts.precision.unwrap_or(3 * n);
        if prec < 3 * n {
            return Err(Error::Precondition(format!("precision {prec} is below 3N = {}", 3 * n)));
        }
        let ring = SeriesRing::new(rd.rank(), law.ring().clone())?;
        let nser = (-NSER..=NSER).map(|k| law.n_series(k, prec)).collect::<Result<Vec<_>>>()?;
        let mut th = Theory {
            rd: rd.clone(),
            weyl: weyl.clone(),
            law,
            ring,
            prec,
            exec: opts.exec,
            side: CharSide::Left,
            nser,
            pos: Vec::new(),
            neg: Vec::new(),
            ratio_pos: Vec::new(),
            ratio_neg: Vec::new(),
            wroot: Vec::new(),
            basis: OnceLock::new(),
            pairing: OnceLock::new(),
        };
        for beta in rd.positive_roots() {
            let minus: Weight = beta.iter().map(|x| -x).collect();
            th.pos.push(th.x_of_weight(beta)?);
            th.neg.push(th.x_of_weight(&minus)?);
        }
        for k in 0..rd.n() {
            th.ratio_pos.push(th.ring.exact_divide(&th.neg[k], &th.pos[k])?);
            th.ratio_neg.push(th.ring.exact_divide(&th.pos[k], &th.neg[k])?);
        }
        th.wroot = (0..weyl.len())
            .map(|w| {
                (0..rd.rank())
                    .map(|i| {
                        let img = weyl.act(w, rd.simple_root(i));
                        rd.root_index(&img).expect("Weyl group permutes roots")
                    })
                    .collect()
            })
            .collect();
        Ok(th)
    }

    /// Same root datum and Weyl group, different law.
    pub fn with_law(&self, law: Arc<Fgl>) -> Result<Theory> {
        let opts = TheoryOptions { precision: Some(self.prec), exec: self.exec, word_order: self.weyl.word_order() };
        let mut t = Theory::with_weyl(self.rd.clone(), self.weyl.clone(), law, &opts)?;
        t.side = self.side;
        Ok(t)
    }

    /// Same data at a different working precision.
    pub fn with_precision(&self, prec: u32) -> Result<Theory> {
        let opts = TheoryOptions { precision: Some(prec), exec: self.exec, word_order: self.weyl.word_order() };
        Theory::with_weyl(self.rd.clone(), self.weyl.clone(), self.law.clone(), &opts)
    }

    pub fn root_datum(&self) -> &RootDatum {
        &self.rd
    }

    pub fn root_datum_arc(&self) -> Arc<RootDatum> {
        self.rd.clone()
    }

    pub fn weyl(&self) -> &WeylGroup {
        &self.weyl
    }

    pub fn weyl_arc(&self) -> Arc<WeylGroup> {
        self.weyl.clone()
    }

    pub fn law(&self) -> &Fgl {
        &self.law
    }

    pub fn law_arc(&self) -> Arc<Fgl> {
        self.law.clone()
    }

    pub fn ring(&self) -> &SeriesRing {
        &self.ring
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn exec(&self) -> Exec {
        self.exec
    }

    pub fn set_exec(&mut self, exec: Exec) {
        self.exec = exec;
    }

    pub fn n(&self) -> usize {
        self.rd.n()
    }

    pub fn char_side(&self) -> CharSide {
        self.side
    }

    /// Switches the characteristic-map side; only meant for convention tests.
    pub fn set_char_side(&mut self, side: CharSide) {
        self.side = side;
    }

    /// Codimension of `ζ_w`.
    pub fn codim(&self, w: usize) -> usize {
        self.n() - self.weyl.length(w)
    }

    fn nseries(&self, n: i64) -> Result<Series> {
        if n.abs() <= NSER {
            Ok(self.nser[(n + NSER) as usize].clone())
        } else {
            self.law.n_series(n, self.prec)
        }
    }

    /// `x_λ` as the left fold `λ₁·_F x₁ +_F … +_F λ_r·_F x_r`.
    pub fn x_of_weight(&self, lambda: &[i64]) -> Result<Series> {
        if lambda.len() != self.rd.rank() {
            return Err(Error::DimensionMismatch(format!("weight of length {}", lambda.len())));
        }
        let mut acc: Option<Series> = None;
        for (i, &c) in lambda.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let t = self.ring.compose_univariate(&self.nseries(c)?, &self.ring.var(i), self.prec)?;
            acc = Some(match acc {
                None => t,
                Some(a) => self.law.sum(&self.ring, &a, &t)?,
            });
        }
        Ok(acc.unwrap_or_else(|| Series::zero(self.prec)))
    }

    /// `x_λ` for a weight in the character lattice.
    pub fn x_of_character(&self, lambda: &[i64]) -> Result<Series> {
        if !self.rd.in_lattice(lambda)? {
            return Err(Error::OutsideLattice(format!("{lambda:?}")));
        }
        self.x_of_weight(lambda)
    }

    pub fn fgl_sum(&self, u: &Series, v: &Series) -> Result<Series> {
        self.law.sum(&self.ring, u, v)
    }

    fn substitute_weights(&self, u: &Series, images: &[Weight]) -> Result<Series> {
        let xs = images.iter().map(|l| self.x_of_weight(l)).collect::<Result<Vec<_>>>()?;
        self.ring.substitute(u, &xs, self.prec)
    }

    /// Ring endomorphism `x_{ωᵢ} ↦ x_{w(ωᵢ)}`.
    pub fn weyl_substitute(&self, w: usize, u: &Series) -> Result<Series> {
        let r = self.rd.rank();
        let images: Vec<Weight> =
            (0..r).map(|i| self.weyl.act(w, &(0..r).map(|j| i64::from(i == j)).collect::<Vec<_>>())).collect();
        self.substitute_weights(u, &images)
    }

    fn root_series(&self, k: usize, sign: i64) -> &Series {
        if sign > 0 {
            &self.pos[k]
        } else {
            &self.neg[k]
        }
    }

    /// `x_{−γ}/x_γ` for `γ = sign·β_k`.
    fn ratio(&self, k: usize, sign: i64) -> &Series {
        if sign > 0 {
            &self.ratio_pos[k]
        } else {
            &self.ratio_neg[k]
        }
    }

    /// Class of a point: `∏_{α∈Σ⁻} x_α` at the identity, zero elsewhere.
    pub fn point_class(&self) -> Result<GKMClass> {
        let mut e = Series::one();
        for s in &self.neg {
            e = self.ring.mul_trunc(&e, s, self.prec)?;
        }
        let mut c = GKMClass::zero(self.weyl.len(), self.prec);
        c.values[0] = e;
        Ok(c)
    }

    pub fn one(&self) -> GKMClass {
        GKMClass { values: vec![Series::one(); self.weyl.len()] }
    }

    /// Push-pull operator along the simple root `αᵢ`.
    pub fn push_pull(&self, i: usize, f: &GKMClass) -> Result<GKMClass> {
        if i >= self.rd.rank() {
            return Err(Error::DimensionMismatch(format!("simple index {}", i + 1)));
        }
        let values = try_map_range(self.exec, self.weyl.len(), |w| {
            let ws = self.weyl.mul_simple_right(w, i);
            let (k, sign) = self.wroot[w][i];
            let fw = &f.values[w];
            let fws = &f.values[ws];
            if fw.is_zero() && fws.is_zero() {
                return Ok(Series::zero(fw.prec().min(fws.prec())));
            }
            // (f(w) + f(w s_i)·x_{−γ}/x_γ) / x_{−γ}, γ = w(αᵢ)
            let num = fw.add(&self.ring.mul(fws, self.ratio(k, sign))?)?;
            self.ring.exact_divide(&num, self.root_series(k, -sign)).map_err(|e| match e {
                Error::NotDivisible(m) => {
                    Error::NotDivisible(format!("push-pull {} at {}: {m}", i + 1, self.weyl.word_string(w)))
                }
                other => other,
            })
        })?;
        Ok(GKMClass { values })
    }

    /// `A_{i_m}(⋯A_{i_1}(pt))` for the word `(i_1,…,i_m)` (0-based letters).
    pub fn bott_samelson_class(&self, word: &[usize]) -> Result<GKMClass> {
        let mut c = self.point_class()?;
        for &i in word {
            c = self.push_pull(i, &c)?;
        }
        Ok(c)
    }

    /// The basis `ζ_w` for the fixed reduced words, indexed like the Weyl group.
    pub fn basis(&self) -> Result<&[GKMClass]> {
        if let Some(b) = self.basis.get() {
            return Ok(b);
        }
        let nw = self.weyl.len();
        let mut out: Vec<Option<GKMClass>> = vec![None; nw];
        out[0] = Some(self.point_class()?);
        for l in 1..=self.n() {
            let layer: Vec<usize> = self.weyl.of_length(l).collect();
            let done = &out;
            let computed = try_map_range(self.exec, layer.len(), |k| {
                let w = layer[k];
                let word = self.weyl.word(w);
                let last = *word.last().expect("non-identity");
                let prefix = self.weyl.from_word(&word[..word.len() - 1]);
                let prev = done[prefix].as_ref().expect("shorter words come first");
                self.push_pull(last, prev)
            })?;
            for (k, c) in computed.into_iter().enumerate() {
                out[layer[k]] = Some(c);
            }
        }
        let b: Vec<GKMClass> = out.into_iter().map(|c| c.expect("every element reached")).collect();
        let _ = self.basis.set(b);
        Ok(self.basis.get().expect("just set"))
    }

    pub fn zeta(&self, w: usize) -> Result<&GKMClass> {
        Ok(&self.basis()?[w])
    }

    /// Pointwise product.
    pub fn mul(&self, a: &GKMClass, b: &GKMClass) -> Result<GKMClass> {
        let values = try_map_range(self.exec, a.values.len(), |w| self.ring.mul(&a.values[w], &b.values[w]))?;
        Ok(GKMClass { values })
    }

    pub fn scale(&self, a: &GKMClass, c: &Coeff) -> Result<GKMClass> {
        Ok(GKMClass { values: a.values.iter().map(|s| self.ring.mul_coeff(s, c)).collect::<Result<_>>()? })
    }

    /// `Σ c_w ζ_w`.
    pub fn combination(&self, coeffs: &[Coeff]) -> Result<GKMClass> {
        let basis = self.basis()?;
        let mut acc = GKMClass::zero(self.weyl.len(), self.prec);
        for (w, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&self.scale(&basis[w], c)?)?;
            }
        }
        Ok(acc)
    }

    fn char_images(&self, w: usize, lambda: &[i64]) -> Weight {
        let v = match self.side {
            CharSide::Left => w,
            CharSide::Inverse => self.weyl.inverse(w),
        };
        self.weyl.act(v, lambda).into_iter().map(|x| -x).collect()
    }

    /// `c(x_λ)`.
    pub fn characteristic_class_of_weight(&self, lambda: &[i64]) -> Result<GKMClass> {
        let values = try_map_range(self.exec, self.weyl.len(), |w| self.x_of_weight(&self.char_images(w, lambda)))?;
        Ok(GKMClass { values })
    }

    /// `c(u)` for a series in the fundamental-weight variables.
    pub fn characteristic_class(&self, u: &Series) -> Result<GKMClass> {
        let r = self.rd.rank();
        let values = try_map_range(self.exec, self.weyl.len(), |w| {
            let images: Vec<Weight> =
                (0..r).map(|i| self.char_images(w, &(0..r).map(|j| i64::from(i == j)).collect::<Vec<_>>())).collect();
            self.substitute_weights(u, &images)
        })?;
        Ok(GKMClass { values })
    }

    /// Whether `f(w) − f(w s_β)` is divisible by `x_{w(β)}` for all `w` and `β > 0`.
    pub fn is_gkm_compatible(&self, f: &GKMClass) -> Result<bool> {
        for w in 0..self.weyl.len() {
            for k in 0..self.n() {
                let s = self.weyl.reflection(&self.rd, k);
                let ws = self.weyl.mul(w, s);
                if ws < w {
                    continue;
                }
                let diff = f.values[w].sub(&f.values[ws])?;
                if diff.is_zero() {
                    continue;
                }
                let img = self.weyl.act(w, &self.rd.positive_roots()[k]);
                let d = self.x_of_weight(&img)?;
                match self.ring.exact_divide(&diff, &d) {
                    Ok(_) => {}
                    Err(Error::NotDivisible(_)) => return Ok(false),
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(true)
    }

    /// `π(f) = Σ_w f(w)/e_w` by one division through `∏_{α∈Σ} x_α`.
    pub fn pushforward_to_point(&self, f: &GKMClass) -> Result<Coeff> {
        let need = 2 * self.n() as u32 + 1;
        let mut num = Series::zero(EXACT);
        for w in 0..self.weyl.len() {
            if f.values[w].is_zero() {
                continue;
            }
            let mut q = f.values[w].clone();
            for k in 0..self.n() {
                let (kk, sign) =
                    self.rd.root_index(&self.weyl.act(w, &self.rd.positive_roots()[k])).expect("roots are permuted");
                q = self.ring.mul(&q, self.root_series(kk, sign))?;
            }
            num = num.add(&q)?;
        }
        if num.prec() < need {
            return Err(Error::PrecisionExhausted(format!(
                "pushforward needs precision {need}, numerator has {}",
                num.prec()
            )));
        }
        for k in 0..self.n() {
            num = self.ring.exact_divide(&num, &self.pos[k])?;
            num = self.ring.exact_divide(&num, &self.neg[k])?;
        }
        Ok(num.constant_term())
    }

    fn pairing(&self) -> Result<&Pairing> {
        if let Some(p) = self.pairing.get() {
            return Ok(p);
        }
        let p = self.build_pairing()?;
        let _ = self.pairing.set(p);
        Ok(self.pairing.get().expect("just set"))
    }

    fn build_pairing(&self) -> Result<Pairing> {
        let r = self.rd.rank();
        let int_ring = SeriesRing::new(r, crate::coeff::CoeffRing::integers(0))?;
        let mut pi0 = Series::one();
        for beta in self.rd.positive_roots() {
            let minus: Vec<i64> = beta.iter().map(|x| -x).collect();
            pi0 = int_ring.mul(&pi0, &int_ring.linear(beta))?;
            pi0 = int_ring.mul(&pi0, &int_ring.linear(&minus))?;
        }
        let box_size = |m: Mono| -> u64 { (0..r).map(|i| crate::coeff::slot(m, i) as u64 + 1).product() };
        let (mu, l) = pi0
            .terms()
            .iter()
            .map(|&(k, c)| (xpart(k), c))
            .min_by_key(|&(m, c)| (box_size(m), c.unsigned_abs(), m))
            .ok_or_else(|| Error::Precondition("empty root system".into()))?;
        let nw = self.weyl.len();
        let q = try_map_range(self.exec, nw, |v| {
            let mut s = Series::one();
            for beta in self.rd.positive_roots() {
                let img = self.weyl.act(v, beta);
                let (k, sign) = self.rd.root_index(&img).expect("roots are permuted");
                s = self.ring.mul_box(&s, self.root_series(k, sign), mu)?;
            }
            Ok(s)
        })?;
        let partial = Pairing { mu, l, q, t: CoeffMatrix::zeros(0, 0), k: Vec::new() };
        let basis = self.basis()?;
        // Gram matrix G_uv = ε π(ζ_u ζ_v)
        let gram_rows = try_map_range(self.exec, nw, |u| {
            (0..nw)
                .map(|v| {
                    let mut acc = Coeff::zero();
                    for x in 0..nw {
                        let (a, b) = (&basis[u].values[x], &basis[v].values[x]);
                        if a.is_zero() || b.is_zero() {
                            continue;
                        }
                        let prod = self.ring.mul_box(a, b, mu)?;
                        acc = acc.add(&self.coeff_at(&prod, &partial.q[x], mu)?)?;
                    }
                    acc.div_exact(l)
                })
                .collect::<Result<Vec<Coeff>>>()
        })?;
        let mut gram = CoeffMatrix::zeros(nw, nw);
        for (u, row) in gram_rows.into_iter().enumerate() {
            for (v, c) in row.into_iter().enumerate() {
                gram.set(u, v, c);
            }
        }
        let t = invert_unipotent_gram(&gram, self.law.ring())?;
        let k = try_map_range(self.exec, nw, |w| {
            (0..nw)
                .map(|v| {
                    let mut tau = Series::zero(self.prec);
                    for u in 0..nw {
                        let c = t.get(w, u);
                        if !c.is_zero() && !basis[u].values[v].is_zero() {
                            tau = tau.add(&self.ring.mul_coeff(&basis[u].values[v], c)?)?;
                        }
                    }
                    self.ring.mul_box(&tau, &partial.q[v], mu)
                })
                .collect::<Result<Vec<Series>>>()
        })?;
        Ok(Pairing { t, k, ..partial })
    }

    /// `[x^μ](a·b)` as a coefficient.
    fn coeff_at(&self, a: &Series, b: &Series, mu: Mono) -> Result<Coeff> {
        let cr = self.law.ring();
        let mut terms: Vec<(Mono, i128)> = Vec::new();
        for &(ka, ca) in a.terms() {
            let xa = xpart(ka);
            if !mono_le(xa, mu) {
                continue;
            }
            let need = mu - xa;
            for &(kb, cb) in b.slice_at(need) {
                let g = mono_mul(gpart(ka), gpart(kb))?;
                if cr.keeps(g) {
                    terms.push((g, mul_i(ca, cb)?));
                }
            }
        }
        Coeff::from_terms(terms)
    }

    /// The dual basis `τ_w = Σ_u T_wu ζ_u`, with `ε π(τ_v ζ_w) = δ_vw`.
    pub fn dual_basis(&self) -> Result<Vec<GKMClass>> {
        let p = self.pairing()?;
        let nw = self.weyl.len();
        (0..nw)
            .map(|w| {
                let coeffs: Vec<Coeff> = (0..nw).map(|u| p.t.get(w, u).clone()).collect();
                self.combination(&coeffs)
            })
            .collect()
    }

    pub fn inverse_gram(&self) -> Result<&CoeffMatrix> {
        Ok(&self.pairing()?.t)
    }

    /// `ε π(f)` read off at the monomial `x^μ`.
    pub fn pushforward_augmented(&self, f: &GKMClass) -> Result<Coeff> {
        let p = self.pairing()?;
        let mut acc = Coeff::zero();
        for (v, s) in f.values.iter().enumerate() {
            if !s.is_zero() {
                acc = acc.add(&self.coeff_at(s, &p.q[v], p.mu)?)?;
            }
        }
        acc.div_exact(p.l)
    }

    /// Coordinates of a class on `{ζ_w}` (augmented: equivariant parameters are set to zero).
    pub fn expand(&self, f: &GKMClass) -> Result<Vec<Coeff>> {
        let p = self.pairing()?;
        let nw = self.weyl.len();
        try_map_range(self.exec, nw, |w| {
            let mut acc = Coeff::zero();
            for v in 0..nw {
                if !f.values[v].is_zero() {
                    acc = acc.add(&self.coeff_at(&f.values[v], &p.k[w][v], p.mu)?)?;
                }
            }
            acc.div_exact(p.l).map_err(|_| {
                Error::NotDivisible(format!("expansion coefficient at {} is not integral", self.weyl.word_string(w)))
            })
        })
    }

    /// Coordinates of `ζ_u ζ_v`.
    pub fn product_coords(&self, u: usize, v: usize) -> Result<Vec<Coeff>> {
        let p = self.pairing()?;
        let basis = self.basis()?;
        let nw = self.weyl.len();
        let prods: Vec<Series> = (0..nw)
            .map(|x| self.ring.mul_box(&basis[u].values[x], &basis[v].values[x], p.mu))
            .collect::<Result<_>>()?;
        (0..nw)
            .map(|w| {
                let mut acc = Coeff::zero();
                for x in 0..nw {
                    if !prods[x].is_zero() {
                        acc = acc.add(&self.coeff_at(&prods[x], &p.k[w][x], p.mu)?)?;
                    }
                }
                acc.div_exact(p.l)
            })
            .collect()
    }

    /// `table[u][v][w]`: coefficient of `ζ_w` in `ζ_u ζ_v`.
    pub fn structure_constants(&self) -> Result<Vec<Vec<Vec<Coeff>>>> {
        self.pairing()?;
        let nw = self.weyl.len();
        let pairs: Vec<(usize, usize)> = (0..nw).flat_map(|u| (u..nw).map(move |v| (u, v))).collect();
        let flat = try_map_range(self.exec, pairs.len(), |k| self.product_coords(pairs[k].0, pairs[k].1))?;
        let mut table = vec![vec![Vec::new(); nw]; nw];
        for ((u, v), c) in pairs.into_iter().zip(flat) {
            table[v][u] = c.clone();
            table[u][v] = c;
        }
        Ok(table)
    }

    /// Coefficient-wise image under the classifying map of `target`'s law.
    pub fn specialize_class(&self, f: &GKMClass, target: &Theory) -> Result<GKMClass> {
        if target.weyl.len() != self.weyl.len() || target.rd.rank() != self.rd.rank() {
            return Err(Error::RingMismatch("specialization between different root data".into()));
        }
        if self.law.kind() == target.law.kind() && self.law.trunc() == target.law.trunc() {
            return Ok(f.clone());
        }
        let values = try_map_range(self.exec, f.values.len(), |w| {
            let s = &f.values[w];
            let mut out: Vec<(u128, i128)> = Vec::new();
            let mut i = 0;
            let terms = s.terms();
            while i < terms.len() {
                let x = xpart(terms[i].0);
                let slice = s.slice_at(x);
                let c = Coeff::from_terms(slice.iter().map(|&(k, v)| (gpart(k), v)).collect())?;
                i += slice.len();
                let img = self.law.specialize(&c, &target.law)?;
                out.extend(img.terms().iter().map(|&(g, v)| (key(x, g), v)));
            }
            target.ring.from_terms(out, s.prec().min(target.prec))
        })?;
        Ok(GKMClass { values })
    }

    /// Specializes a single coefficient of this theory to `target`.
    pub fn specialize_coeff(&self, c: &Coeff, target: &Theory) -> Result<Coeff> {
        if self.law.kind() == target.law.kind() && self.law.trunc() == target.law.trunc() {
            return Ok(c.clone());
        }
        let mut acc = Coeff::zero();
        let mut by_deg: std::collections::BTreeMap<i32, Vec<(Mono, i128)>> = Default::default();
        for &(m, v) in c.terms() {
            by_deg.entry(self.law.ring().mono_degree(m)).or_default().push((m, v));
        }
        for (_, t) in by_deg {
            acc = acc.add(&self.law.specialize(&Coeff::from_terms(t)?, &target.law)?)?;
        }
        Ok(acc)
    }

    /// Degree of a coefficient of `ζ_w` in a homogeneous class of codimension `k`.
    pub fn coefficient_degree(&self, k: usize, w: usize) -> i32 {
        k as i32 - self.codim(w) as i32
    }

    /// Description of the conventions in force, for cache metadata.
    pub fn variant(&self) -> String {
        let side = match self.side {
            CharSide::Left => "c(x_l)(w) = x_{-w(l)}",
            CharSide::Inverse => "c(x_l)(w) = x_{-w^{-1}(l)}",
        };
        format!("{PUSH_PULL_VARIANT}; {side}")
    }

    /// Words of all elements, for metadata.
    pub fn word_table(&self) -> Vec<String> {
        (0..self.weyl.len()).map(|w| self.weyl.word_string(w)).collect()
    }

    /// Box monomial and its coefficient in the common denominator.
    pub fn pairing_monomial(&self) -> Result<(Mono, i128)> {
        let p = self.pairing()?;
        Ok((p.mu, p.l))
    }

    /// Sum of |terms| over all restrictions, a rough size measure.
    pub fn class_size(f: &GKMClass) -> usize {
        f.values.iter().map(Series::len).sum()
    }

    /// Highest series degree appearing in any restriction.
    pub fn class_max_degree(f: &GKMClass) -> u32 {
        f.values.iter().flat_map(|s| s.terms().iter().map(|t| xdeg(t.0))).max().unwrap_or(0)
    }

    /// Runs `f` for every element with the theory's executor.
    pub fn map_elements<R: Send>(&self, f: impl Fn(usize) -> R + Sync + Send) -> Vec<R> {
        map_range(self.exec, self.weyl.len(), f)
    }
}

/// Inverts `G = G₀ + L′` with `G₀` integral unimodular and `L′` of negative degree.
fn invert_unipotent_gram(g: &CoeffMatrix, ring: &crate::coeff::CoeffRing) -> Result<CoeffMatrix> {
    let n = g.n;
    let g0 = g.augmentation();
    let big = IntMatrix::from_rows(n, g0.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())?;
    let (h, u) = hermite_normal_form(&big);
    if h != IntMatrix::identity(n) {
        return Err(Error::GramNotUnimodular(format!("degree-zero Gram determinant {}", big.det()?)));
    }
    let mut g0inv = CoeffMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let x = to_i128(&u[(i, j)])?;
            if x != 0 {
                g0inv.set(i, j, Coeff::int(x));
            }
        }
    }
    let mut lp = g.clone();
    for i in 0..n {
        for j in 0..n {
            let c = g.get(i, j);
            let c0 = c.constant_term();
            if c0 != 0 {
                lp.set(i, j, c.sub(&Coeff::int(c0))?);
            }
        }
    }
    // T = Σ_k (−G₀⁻¹L′)^k G₀⁻¹
    let step = g0inv.mul(ring, &lp)?.scale(-1)?;
    let mut term = g0inv.clone();
    let mut t = g0inv;
    for _ in 0..=ring.trunc() + 1 {
        term = step.mul(ring, &term)?;
        if term.is_zero() {
            break;
        }
        t = t.add(&term)?;
    }
    if !term.is_zero() {
        return Err(Error::GramNotUnimodular("correction series did not terminate".into()));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::ChowOracle;
    use crate::roots::{CartanType, LatticeChoice};

    fn theory(ty: CartanType, law: Fgl) -> Theory {
        let rd = Arc::new(RootDatum::new(ty, LatticeChoice::SimplyConnected).unwrap());
        Theory::new(rd, Arc::new(law), &TheoryOptions::default()).unwrap()
    }

    #[test]
    fn a1_push_pull_of_point_is_one() {
        let th = theory(CartanType::A1, Fgl::multiplicative(1));
        let pt = th.point_class().unwrap();
        let z = th.push_pull(0, &pt).unwrap();
        for w in 0..2 {
            assert_eq!(z.at(w).terms(), Series::one().terms());
        }
        assert_eq!(th.pushforward_to_point(&pt).unwrap(), Coeff::one());
        assert_eq!(th.pushforward_augmented(&pt).unwrap(), Coeff::one());
        // π(1) = β on P¹ for x + y − βxy
        let beta = th.law().ring().gen(0);
        assert_eq!(th.pushforward_to_point(&th.one()).unwrap(), beta);
        assert_eq!(th.pushforward_augmented(&th.one()).unwrap(), beta);
    }

    #[test]
    fn duality_and_triangularity() {
        for law in [Fgl::additive(3), Fgl::multiplicative(3), Fgl::universal(3).unwrap()] {
            let th = theory(CartanType::A2, law);
            let basis = th.basis().unwrap().to_vec();
            let dual = th.dual_basis().unwrap();
            let w = th.weyl();
            for v in 0..w.len() {
                for u in 0..w.len() {
                    let p = th.pushforward_augmented(&th.mul(&dual[v], &basis[u]).unwrap()).unwrap();
                    assert_eq!(p, if u == v { Coeff::one() } else { Coeff::zero() });
                    let nz = !basis[u].at(v).is_zero();
                    if nz {
                        assert!(w.bruhat_leq(v, u));
                    }
                }
                assert_eq!(
                    th.expand(&basis[v]).unwrap(),
                    (0..w.len()).map(|x| if x == v { Coeff::one() } else { Coeff::zero() }).collect::<Vec<_>>()
                );
                assert!(th.is_gkm_compatible(&basis[v]).unwrap());
            }
        }
    }

    #[test]
    fn additive_tables_match_chevalley() {
        for ty in [CartanType::A1, CartanType::A1xA1, CartanType::A2, CartanType::B2, CartanType::G2] {
            let th = theory(ty, Fgl::additive(ty_n(ty)));
            let oracle = ChowOracle::new(th.root_datum(), th.weyl());
            let want = oracle.structure_constants().unwrap();
            let got = th.structure_constants().unwrap();
            for u in 0..want.len() {
                for v in 0..want.len() {
                    let g: Vec<i64> = got[u][v].iter().map(|c| c.as_int().unwrap() as i64).collect();
                    assert_eq!(g, want[u][v], "{ty} {u} {v}");
                }
            }
        }
    }

    fn ty_n(ty: CartanType) -> u32 {
        RootDatum::new(ty, LatticeChoice::SimplyConnected).unwrap().n() as u32
    }

    #[test]
    fn characteristic_side_matches_chevalley() {
        for ty in [CartanType::A2, CartanType::B2, CartanType::G2] {
            let th = theory(ty, Fgl::additive(ty_n(ty)));
            let oracle = ChowOracle::new(th.root_datum(), th.weyl());
            for lambda in [vec![1, 0], vec![0, 1], vec![2, -1]] {
                let c = th.characteristic_class_of_weight(&lambda).unwrap();
                assert!(th.is_gkm_compatible(&c).unwrap());
                let got: Vec<i64> = th.expand(&c).unwrap().iter().map(|c| c.as_int().unwrap() as i64).collect();
                assert_eq!(got, oracle.divisor_action(&lambda, &oracle.one()), "{ty} {lambda:?}");
            }
        }
    }

    #[test]
    fn inverse_side_is_not_an_equivariant_class() {
        let mut th = theory(CartanType::A2, Fgl::additive(3));
        th.set_char_side(CharSide::Inverse);
        let c = th.characteristic_class_of_weight(&[1, 0]).unwrap();
        assert!(!th.is_gkm_compatible(&c).unwrap());
    }
}
