//! Correspondences on a split flag variety written in the Künneth basis
//! `ζ_m ⊗ τ_n`, where composition follows the δ-rule and is therefore a
//! matrix product over `Λ`.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::coeff::{Coeff, CoeffMatrix};
use crate::error::{Error, Result};
use crate::fgl::Fgl;
use crate::schubert::Theory;

/// The Künneth frame of `X̄ × X̄` for `X = G/B`.
#[derive(Clone)]
pub struct Kunneth {
    label: String,
    law: Arc<Fgl>,
    lengths: Vec<usize>,
    words: Vec<String>,
    n: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCorrespondence {
    pub space: String,
    /// `a ∈ Corr_twist`; the class has cohomological degree `N + twist`.
    pub twist: i32,
    pub matrix: CoeffMatrix,
}

impl Kunneth {
    pub fn new(th: &Theory) -> Self {
        let w = th.weyl();
        Kunneth {
            label: format!("{}:{}", th.root_datum().label(), th.law().kind()),
            law: th.law_arc(),
            lengths: (0..w.len()).map(|x| w.length(x)).collect(),
            words: th.word_table(),
            n: th.n(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.lengths.len()
    }

    pub fn law(&self) -> &Fgl {
        &self.law
    }

    pub fn word(&self, i: usize) -> &str {
        &self.words[i]
    }

    /// Filtration level of the basis class `ζ_m ⊗ τ_n`.
    pub fn entry_level(&self, m: usize, n: usize) -> usize {
        self.n - self.lengths[m] + self.lengths[n]
    }

    /// Degree of the coefficient of `ζ_m ⊗ τ_n` in a homogeneous correspondence of the given twist.
    pub fn entry_degree(&self, twist: i32, m: usize, n: usize) -> i32 {
        twist + self.lengths[m] as i32 - self.lengths[n] as i32
    }

    pub fn zero(&self, twist: i32) -> SplitCorrespondence {
        SplitCorrespondence { space: self.label.clone(), twist, matrix: CoeffMatrix::zeros(self.size(), self.size()) }
    }

    /// `Δ = Σ_w ζ_w ⊗ τ_w`.
    pub fn diagonal(&self) -> SplitCorrespondence {
        SplitCorrespondence { space: self.label.clone(), twist: 0, matrix: CoeffMatrix::identity(self.size()) }
    }

    /// `c · ζ_m ⊗ τ_n`, with the twist read off from the degree of `c`.
    pub fn basis_element(&self, m: usize, n: usize, c: Coeff) -> Result<SplitCorrespondence> {
        let deg = self.law.ring().degree(&c).ok_or_else(|| Error::Precondition("inhomogeneous coefficient".into()))?;
        let twist = deg - self.lengths[m] as i32 + self.lengths[n] as i32;
        let mut a = self.zero(twist);
        a.matrix.set(m, n, c);
        Ok(a)
    }

    pub fn from_matrix(&self, twist: i32, matrix: CoeffMatrix) -> Result<SplitCorrespondence> {
        let a = SplitCorrespondence { space: self.label.clone(), twist, matrix };
        self.check_homogeneous(&a)?;
        Ok(a)
    }

    fn check(&self, a: &SplitCorrespondence) -> Result<()> {
        if a.space != self.label || a.matrix.n != self.size() || a.matrix.m != self.size() {
            return Err(Error::RingMismatch(format!("correspondence on {} used with {}", a.space, self.label)));
        }
        Ok(())
    }

    pub fn check_homogeneous(&self, a: &SplitCorrespondence) -> Result<()> {
        self.check(a)?;
        for m in 0..self.size() {
            for n in 0..self.size() {
                let c = a.matrix.get(m, n);
                if c.is_zero() {
                    continue;
                }
                if self.law.ring().degree(c) != Some(self.entry_degree(a.twist, m, n)) {
                    return Err(Error::Precondition(format!(
                        "entry ({}, {}) has the wrong degree for twist {}",
                        self.words[m], self.words[n], a.twist
                    )));
                }
            }
        }
        Ok(())
    }

    /// `a ∘ b`.
    pub fn compose(&self, a: &SplitCorrespondence, b: &SplitCorrespondence) -> Result<SplitCorrespondence> {
        self.check(a)?;
        self.check(b)?;
        Ok(SplitCorrespondence {
            space: self.label.clone(),
            twist: a.twist + b.twist,
            matrix: a.matrix.mul(self.law.ring(), &b.matrix)?,
        })
    }

    pub fn add(&self, a: &SplitCorrespondence, b: &SplitCorrespondence) -> Result<SplitCorrespondence> {
        self.check(a)?;
        self.check(b)?;
        if a.twist != b.twist && !a.matrix.is_zero() && !b.matrix.is_zero() {
            return Err(Error::Precondition(format!("adding twists {} and {}", a.twist, b.twist)));
        }
        let twist = if a.matrix.is_zero() { b.twist } else { a.twist };
        Ok(SplitCorrespondence { space: self.label.clone(), twist, matrix: a.matrix.add(&b.matrix)? })
    }

    pub fn sub(&self, a: &SplitCorrespondence, b: &SplitCorrespondence) -> Result<SplitCorrespondence> {
        self.add(a, &self.scale(b, -1)?)
    }

    pub fn scale(&self, a: &SplitCorrespondence, k: i128) -> Result<SplitCorrespondence> {
        Ok(SplitCorrespondence { space: a.space.clone(), twist: a.twist, matrix: a.matrix.scale(k)? })
    }

    /// Minimal level over nonzero entries; `None` for the zero correspondence.
    pub fn level(&self, a: &SplitCorrespondence) -> Option<usize> {
        let k = self.size();
        (0..k * k).filter(|&i| !a.matrix.entries[i].is_zero()).map(|i| self.entry_level(i / k, i % k)).min()
    }

    fn level_at_least(&self, a: &SplitCorrespondence, l: usize) -> bool {
        self.level(a).is_none_or(|x| x >= l)
    }

    /// Image under `pr_N`: the integer entries at level exactly `N`.
    pub fn chow_part(&self, a: &SplitCorrespondence) -> Vec<Vec<i128>> {
        let k = self.size();
        (0..k)
            .map(|m| {
                (0..k)
                    .map(|n| if self.entry_level(m, n) == self.n { a.matrix.get(m, n).constant_term() } else { 0 })
                    .collect()
            })
            .collect()
    }

    /// Iterates `r ← 3r² − 2r³` until `r² = r`.
    pub fn lift_idempotent(&self, r: &SplitCorrespondence) -> Result<(SplitCorrespondence, usize)> {
        self.check(r)?;
        if r.twist != 0 {
            return Err(Error::Precondition("idempotents live in twist 0".into()));
        }
        let defect = self.sub(&self.compose(r, r)?, r)?;
        if !self.level_at_least(&defect, self.n + 1) {
            return Err(Error::Precondition("r∘r − r is not in the nilpotent ideal".into()));
        }
        let max_iter = (usize::BITS - self.n.leading_zeros()) as usize + 1;
        let mut r = r.clone();
        for it in 0..=max_iter {
            let r2 = self.compose(&r, &r)?;
            if r2 == r {
                return Ok((r, it));
            }
            let r3 = self.compose(&r2, &r)?;
            r = self.sub(&self.scale(&r2, 3)?, &self.scale(&r3, 2)?)?;
        }
        Err(Error::Precondition("idempotent lifting did not converge".into()))
    }

    /// Corrects `f` to an exact inverse of `g` relative to the identities `p_target`, `p_source`:
    /// `f₁ = Σ_{m=0}^{N} Σ_{i=0}^{m} (−1)^i C(m,i) (f∘g)^i ∘ f`, with powers taken in
    /// the corner ring of `p_target`.
    pub fn complete_inverse_relative(
        &self,
        f: &SplitCorrespondence,
        g: &SplitCorrespondence,
        p_target: &SplitCorrespondence,
        p_source: &SplitCorrespondence,
    ) -> Result<SplitCorrespondence> {
        let fg = self.compose(f, g)?;
        let gf = self.compose(g, f)?;
        let d1 = self.sub(&fg, p_target)?;
        let d2 = self.sub(&gf, p_source)?;
        if !self.level_at_least(&d1, self.n + 1) || !self.level_at_least(&d2, self.n + 1) {
            return Err(Error::Precondition(
                "f∘g and g∘f differ from the identities outside the nilpotent ideal".into(),
            ));
        }
        // (fg)^i for i = 0..=N, with (fg)^0 the identity of the corner
        let mut powers = vec![p_target.clone()];
        for i in 1..=self.n {
            powers.push(self.compose(&powers[i - 1], &fg)?);
        }
        let mut sum = self.zero(0);
        for m in 0..=self.n {
            for (i, pw) in powers.iter().enumerate().take(m + 1) {
                let c = binomial(m, i) as i128 * if i % 2 == 0 { 1 } else { -1 };
                sum = self.add(&sum, &self.scale(pw, c)?)?;
            }
        }
        self.compose(&sum, f)
    }

    pub fn complete_inverse(&self, f: &SplitCorrespondence, g: &SplitCorrespondence) -> Result<SplitCorrespondence> {
        let d = self.diagonal();
        self.complete_inverse_relative(f, g, &d, &d)
    }

    /// Lifts a Chow-side pattern of orthogonal rank-one idempotents summing to the
    /// diagonal to exact orthogonal idempotents.
    ///
    /// Idempotents are processed in increasing twist; each is cut down to the
    /// corner `(Δ − E)·(Δ − E)` of the ones already fixed and lifted there, so
    /// orthogonality holds exactly.
    pub fn tate_decomposition(&self, pattern: &[SplitCorrespondence]) -> Result<TateDecomposition> {
        let k = self.size();
        let mut chow: Vec<Vec<Vec<i128>>> = Vec::new();
        for p in pattern {
            self.check(p)?;
            chow.push(self.chow_part(p));
        }
        let mut total = vec![vec![0i128; k]; k];
        for (a, pa) in chow.iter().enumerate() {
            if int_mul(pa, pa) != *pa {
                return Err(Error::NotADecomposition(format!("pattern element {a} is not idempotent")));
            }
            if int_rank(pa) != 1 {
                return Err(Error::NotADecomposition(format!("pattern element {a} does not have rank one")));
            }
            for (b, pb) in chow.iter().enumerate() {
                if a != b && int_mul(pa, pb).iter().flatten().any(|&x| x != 0) {
                    return Err(Error::NotADecomposition(format!("pattern elements {a} and {b} are not orthogonal")));
                }
            }
            for (i, row) in pa.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    total[i][j] += x;
                }
            }
        }
        let ident: Vec<Vec<i128>> = (0..k).map(|i| (0..k).map(|j| i128::from(i == j)).collect()).collect();
        if total != ident {
            return Err(Error::NotADecomposition("pattern does not sum to the diagonal".into()));
        }

        let twist_of = |p: &[Vec<i128>]| -> usize {
            let (m, _) = (0..k * k).map(|i| (i / k, i % k)).find(|&(m, n)| p[m][n] != 0).expect("rank one");
            self.n - self.lengths[m]
        };
        let mut order: Vec<usize> = (0..pattern.len()).collect();
        order.sort_by_key(|&i| (twist_of(&chow[i]), i));

        let diag = self.diagonal();
        let mut fixed = self.zero(0);
        let mut out = vec![None; pattern.len()];
        let mut iterations = 0;
        for &i in &order {
            let corner = self.sub(&diag, &fixed)?;
            let cut = self.compose(&self.compose(&corner, &pattern[i])?, &corner)?;
            let (p, it) = self.lift_idempotent(&cut)?;
            iterations = iterations.max(it);
            fixed = self.add(&fixed, &p)?;
            out[i] = Some(p);
        }
        let idempotents: Vec<SplitCorrespondence> = out.into_iter().map(|p| p.expect("lifted")).collect();
        let twists: Vec<usize> = chow.iter().map(|p| twist_of(p)).collect();
        let mut generating_function = vec![0u64; self.n + 1];
        for &t in &twists {
            generating_function[t] += 1;
        }
        let sums_to_diagonal = fixed == diag;
        let mut orthogonal = true;
        for a in 0..idempotents.len() {
            for b in 0..idempotents.len() {
                if a != b && !self.compose(&idempotents[a], &idempotents[b])?.matrix.is_zero() {
                    orthogonal = false;
                }
            }
        }
        Ok(TateDecomposition { twists, generating_function, idempotents, orthogonal, sums_to_diagonal, iterations })
    }

    /// The pattern `{ζ_w ⊗ τ_w}`.
    pub fn singleton_pattern(&self) -> Vec<SplitCorrespondence> {
        (0..self.size())
            .map(|w| {
                let mut a = self.zero(0);
                a.matrix.set(w, w, Coeff::one());
                a
            })
            .collect()
    }

    /// Poincaré polynomial of `W` by codimension.
    pub fn poincare(&self) -> Vec<u64> {
        let mut p = vec![0; self.n + 1];
        for &l in &self.lengths {
            p[self.n - l] += 1;
        }
        p
    }

    fn random_coeff<R: Rng>(&self, rng: &mut R, deg: i32, bound: i64) -> Result<Coeff> {
        if deg > 0 || -deg > self.law.trunc() as i32 {
            return Ok(Coeff::zero());
        }
        let mut c = Coeff::zero();
        for b in self.law.degree_basis((-deg) as u32)? {
            let k = rng.gen_range(-bound..=bound);
            if k != 0 {
                c = c.add(&b.scale(i128::from(k))?)?;
            }
        }
        Ok(c)
    }

    /// Random homogeneous correspondence of the given twist supported at level `≥ min_level`.
    pub fn random<R: Rng>(
        &self,
        rng: &mut R,
        twist: i32,
        min_level: usize,
        density: f64,
        bound: i64,
    ) -> Result<SplitCorrespondence> {
        let mut a = self.zero(twist);
        for m in 0..self.size() {
            for n in 0..self.size() {
                if self.entry_level(m, n) < min_level || !rng.gen_bool(density) {
                    continue;
                }
                let c = self.random_coeff(rng, self.entry_degree(twist, m, n), bound)?;
                a.matrix.set(m, n, c);
            }
        }
        Ok(a)
    }

    /// A random rank-one integer idempotent `e_w + Σ c_u e_{w,u}` over elements `u`
    /// of the same length as `w`.
    pub fn random_chow_idempotent<R: Rng>(&self, rng: &mut R, w: usize) -> SplitCorrespondence {
        let mut a = self.zero(0);
        a.matrix.set(w, w, Coeff::one());
        for u in 0..self.size() {
            if u != w && self.lengths[u] == self.lengths[w] {
                a.matrix.set(w, u, Coeff::int(i128::from(rng.gen_range(-3i64..=3))));
            }
        }
        a
    }

    /// The singleton pattern conjugated by a random integer matrix `S = I + U`, with
    /// `U` strictly upper triangular inside each length layer.
    pub fn random_chow_pattern<R: Rng>(&self, rng: &mut R) -> Result<Vec<SplitCorrespondence>> {
        let k = self.size();
        let mut u = CoeffMatrix::zeros(k, k);
        for i in 0..k {
            for j in i + 1..k {
                if self.lengths[i] == self.lengths[j] {
                    u.set(i, j, Coeff::int(i128::from(rng.gen_range(-2i64..=2))));
                }
            }
        }
        let ring = self.law.ring();
        let s = CoeffMatrix::identity(k).add(&u)?;
        // S⁻¹ = Σ (−U)^i, finite since U is nilpotent
        let neg = u.scale(-1)?;
        let mut inv = CoeffMatrix::identity(k);
        let mut pw = CoeffMatrix::identity(k);
        for _ in 0..k {
            pw = pw.mul(ring, &neg)?;
            if pw.is_zero() {
                break;
            }
            inv = inv.add(&pw)?;
        }
        (0..k)
            .map(|w| {
                let mut e = CoeffMatrix::zeros(k, k);
                e.set(w, w, Coeff::one());
                let m = s.mul(ring, &e)?.mul(ring, &inv)?;
                Ok(SplitCorrespondence { space: self.label.clone(), twist: 0, matrix: m })
            })
            .collect()
    }

    /// Reports which idempotents of a decomposition lie in a caller-supplied
    /// "rational" part. No geometric meaning is attached to the answer.
    pub fn rational_idempotents(&self, d: &TateDecomposition, part: &dyn RationalPart) -> Vec<bool> {
        d.idempotents.iter().map(|p| part.contains(self, p)).collect()
    }
}

/// A sublattice of correspondences standing in for the classes defined over the base field.
pub trait RationalPart {
    fn contains(&self, frame: &Kunneth, a: &SplitCorrespondence) -> bool;
}

impl<F: Fn(&Kunneth, &SplitCorrespondence) -> bool> RationalPart for F {
    fn contains(&self, frame: &Kunneth, a: &SplitCorrespondence) -> bool {
        self(frame, a)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TateDecomposition {
    pub twists: Vec<usize>,
    /// Coefficient of `t^i` at index `i`.
    pub generating_function: Vec<u64>,
    pub idempotents: Vec<SplitCorrespondence>,
    pub orthogonal: bool,
    pub sums_to_diagonal: bool,
    pub iterations: usize,
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

fn int_mul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let k = a.len();
    (0..k).map(|i| (0..k).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect()).collect()
}

fn int_rank(a: &[Vec<i128>]) -> usize {
    let rows: Vec<Vec<i64>> = a.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
    crate::lattice::IntMatrix::from_i64_rows(&rows).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{CartanType, LatticeChoice, RootDatum};
    use crate::schubert::TheoryOptions;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn frame(ty: CartanType, law: Fgl) -> Kunneth {
        let rd = Arc::new(RootDatum::new(ty, LatticeChoice::SimplyConnected).unwrap());
        Kunneth::new(&Theory::new(rd, Arc::new(law), &TheoryOptions::default()).unwrap())
    }

    #[test]
    fn delta_rule_and_levels() {
        let k = frame(CartanType::A2, Fgl::universal(3).unwrap());
        let top = k.size() - 1;
        let a = k.basis_element(0, top, Coeff::one()).unwrap();
        assert_eq!(k.level(&a), Some(6));
        assert!(k.compose(&a, &a).unwrap().matrix.is_zero());
        let b = k.basis_element(top, 1, Coeff::one()).unwrap();
        let ab = k.compose(&a, &b).unwrap();
        assert_eq!(ab, k.basis_element(0, 1, Coeff::one()).unwrap());
        assert_eq!(k.level(&k.diagonal()), Some(3));
        let d = k.diagonal();
        assert_eq!(k.compose(&d, &d).unwrap(), d);
    }

    #[test]
    fn lift_collapses_orthogonal_perturbation() {
        let k = frame(CartanType::A2, Fgl::universal(3).unwrap());
        // p = ζ_e ⊗ τ_e, n supported away from row and column e
        let p = k.singleton_pattern()[0].clone();
        let law = k.law().clone();
        let n = k.basis_element(1, 4, law.a(1, 1)).unwrap();
        assert!(k.compose(&p, &n).unwrap().matrix.is_zero() && k.compose(&n, &p).unwrap().matrix.is_zero());
        let (q, _) = k.lift_idempotent(&k.add(&p, &n).unwrap()).unwrap();
        assert_eq!(q, p);
    }

    #[test]
    fn lift_rejects_non_nilpotent_defect() {
        let k = frame(CartanType::A2, Fgl::multiplicative(3));
        let r = k.scale(&k.diagonal(), 2).unwrap();
        assert!(k.lift_idempotent(&r).is_err());
    }

    #[test]
    fn random_lifts_and_inverses() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let k = frame(CartanType::A2, Fgl::multiplicative(3));
        for _ in 0..20 {
            let w = rng.gen_range(0..k.size());
            let p = k.random_chow_idempotent(&mut rng, w);
            let n = k.random(&mut rng, 0, k.dim() + 1, 0.5, 3).unwrap();
            let (q, _) = k.lift_idempotent(&k.add(&p, &n).unwrap()).unwrap();
            assert_eq!(k.compose(&q, &q).unwrap(), q);
            assert!(k.level(&k.sub(&q, &p).unwrap()).is_none_or(|l| l > k.dim()));
            let f = k.add(&k.diagonal(), &k.random(&mut rng, 0, k.dim() + 1, 0.5, 3).unwrap()).unwrap();
            let g = k.add(&k.diagonal(), &k.random(&mut rng, 0, k.dim() + 1, 0.5, 3).unwrap()).unwrap();
            let f1 = k.complete_inverse(&f, &g).unwrap();
            assert_eq!(k.compose(&g, &f1).unwrap(), k.diagonal());
            assert_eq!(k.compose(&f1, &g).unwrap(), k.diagonal());
        }
    }

    #[test]
    fn tate_generating_functions() {
        let k = frame(CartanType::G2, Fgl::universal(6).unwrap());
        let d = k.tate_decomposition(&k.singleton_pattern()).unwrap();
        assert!(d.orthogonal && d.sums_to_diagonal);
        // (1 + t)(1 + t + … + t^5)
        assert_eq!(d.generating_function, vec![1, 2, 2, 2, 2, 2, 1]);
        assert_eq!(d.generating_function, k.poincare());
    }

    #[test]
    fn bad_patterns_are_rejected() {
        let k = frame(CartanType::A2, Fgl::multiplicative(3));
        let mut pat = k.singleton_pattern();
        pat.pop();
        assert!(matches!(k.tate_decomposition(&pat), Err(Error::NotADecomposition(_))));
        let mut pat = k.singleton_pattern();
        pat[1].matrix.set(1, 2, Coeff::one());
        assert!(matches!(k.tate_decomposition(&pat), Err(Error::NotADecomposition(_))));
    }

    #[test]
    fn rational_part_hook() {
        let k = frame(CartanType::A2, Fgl::multiplicative(3));
        let d = k.tate_decomposition(&k.singleton_pattern()).unwrap();
        let diag_only = |_: &Kunneth, a: &SplitCorrespondence| {
            let n = a.matrix.n;
            (0..n).all(|i| (0..n).all(|j| i == j || a.matrix.get(i, j).is_zero()))
        };
        assert!(k.rational_idempotents(&d, &diag_only).iter().all(|&b| b));
    }
}
