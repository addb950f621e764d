//! The filtration `h^(l)` spanned by basis classes of codimension at least
//! `l`, materialized as integer lattices degree by degree.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::chevalley::ChowOracle;
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::lattice::IntMatrix;
use crate::par::try_map_range;
use crate::schubert::Theory;

/// Integer coordinates of the degree-`k` part of `h(G/B)`: pairs `(w, b)`
/// with `b` running over a basis of `Λ^{k − codim w}`.
#[derive(Clone, Debug)]
pub struct Coordinates {
    pub k: i32,
    /// `(w, d, basis index)` where the coefficient of `ζ_w` has degree `−d`.
    pub entries: Vec<(usize, u32, usize)>,
    start: Vec<usize>,
}

impl Coordinates {
    pub fn new(th: &Theory, k: i32) -> Result<Self> {
        let mut entries = Vec::new();
        let mut start = Vec::new();
        for w in 0..th.weyl().len() {
            start.push(entries.len());
            let d = th.codim(w) as i32 - k;
            if d < 0 || d > th.law().trunc() as i32 {
                continue;
            }
            let n = th.law().degree_basis(d as u32)?.len();
            entries.extend((0..n).map(|b| (w, d as u32, b)));
        }
        start.push(entries.len());
        Ok(Coordinates { k, entries, start })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Coordinate vector of a homogeneous class of degree `k` given by its expansion.
    pub fn vector(&self, th: &Theory, coeffs: &[Coeff]) -> Result<Vec<BigInt>> {
        let mut v = vec![BigInt::zero(); self.len()];
        for (w, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (s, e) = (self.start[w], self.start[w + 1]);
            if s == e {
                return Err(Error::DimensionMismatch(format!(
                    "coefficient of {} is nonzero outside degree {}",
                    th.weyl().word_string(w),
                    self.k
                )));
            }
            let d = self.entries[s].1;
            let coords = th.law().degree_coords(c, d)?;
            for (i, x) in coords.into_iter().enumerate() {
                v[s + i] = x;
            }
        }
        Ok(v)
    }

    /// Expansion back from a coordinate vector.
    pub fn coefficients(&self, th: &Theory, v: &[BigInt]) -> Result<Vec<Coeff>> {
        let mut out = vec![Coeff::zero(); th.weyl().len()];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let (w, d, b) = self.entries[i];
            let basis = th.law().degree_basis(d)?;
            let term = basis[b].scale(crate::lazard::to_i128(x)?)?;
            out[w] = out[w].add(&term)?;
        }
        Ok(out)
    }

    /// Indices of coordinates lying in `h^(l)`.
    pub fn level_indices(&self, th: &Theory, l: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| th.codim(self.entries[i].0) >= l).collect()
    }

    /// Indices of coordinates at exactly filtration level `l`.
    pub fn exact_level_indices(&self, th: &Theory, l: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| th.codim(self.entries[i].0) == l).collect()
    }

    pub fn describe(&self, th: &Theory, i: usize) -> String {
        let (w, d, b) = self.entries[i];
        let basis = th.law().degree_basis(d).map(|v| v[b].clone()).unwrap_or_default();
        format!("({})*z{}", th.law().format_coeff(&basis), th.weyl().word_string(w))
    }
}

/// `h^(l) ∩ h^k` as a lattice in the coordinates of [`Coordinates::new`].
pub fn filtration_slice(th: &Theory, l: usize, k: i32) -> Result<IntMatrix> {
    let c = Coordinates::new(th, k)?;
    let rows: Vec<Vec<BigInt>> = c
        .level_indices(th, l)
        .into_iter()
        .map(|i| (0..c.len()).map(|j| BigInt::from(i64::from(i == j))).collect())
        .collect();
    IntMatrix::from_rows(c.len(), rows)
}

/// Ranks over `Λ` of `h^(l)/h^(l+1)`, one per level.
pub fn graded_ranks(th: &Theory) -> Vec<usize> {
    let mut r = vec![0; th.n() + 1];
    for w in 0..th.weyl().len() {
        r[th.codim(w)] += 1;
    }
    r
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Violation {
    pub u: String,
    pub v: String,
    pub w: String,
    pub coefficient: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProductFiltrationReport {
    pub pairs_checked: usize,
    pub violations: Vec<Violation>,
    pub top_level_zero: bool,
}

impl ProductFiltrationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.top_level_zero
    }
}

/// Checks `h^(l₁)·h^(l₂) ⊆ h^(l₁+l₂)` on every pair of basis classes of a table.
pub fn check_product_filtration(th: &Theory, table: &[Vec<Vec<Coeff>>]) -> ProductFiltrationReport {
    let w = th.weyl();
    let mut violations = Vec::new();
    let mut pairs = 0;
    for u in 0..w.len() {
        for v in 0..w.len() {
            pairs += 1;
            let need = th.codim(u) + th.codim(v);
            for (x, c) in table[u][v].iter().enumerate() {
                if !c.is_zero() && th.codim(x) < need {
                    violations.push(Violation {
                        u: w.word_string(u),
                        v: w.word_string(v),
                        w: w.word_string(x),
                        coefficient: th.law().format_coeff(c),
                    });
                }
            }
        }
    }
    // h^(N+1) has no coordinates in any degree
    let top_level_zero = (0..=th.n() as i32)
        .all(|k| Coordinates::new(th, k).map(|c| c.level_indices(th, th.n() + 1).is_empty()).unwrap_or(false));
    ProductFiltrationReport { pairs_checked: pairs, violations, top_level_zero }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PsiReport {
    pub pairs_checked: usize,
    pub non_integral: Vec<Violation>,
    pub mismatches: Vec<Violation>,
    pub positive_degree: Vec<Violation>,
}

impl PsiReport {
    pub fn passed(&self) -> bool {
        self.non_integral.is_empty() && self.mismatches.is_empty() && self.positive_degree.is_empty()
    }
}

/// Compares the top-degree structure constants with the Chow ring.
///
/// `Ψ` sends `ζ_w + h^(codim w + 1)` to the Schubert class; it is a ring map
/// exactly when the coefficients at `codim w = codim u + codim v` are the
/// Chow structure constants.
pub fn graded_iso_psi(th: &Theory, table: &[Vec<Vec<Coeff>>]) -> Result<PsiReport> {
    let oracle = ChowOracle::new(th.root_datum(), th.weyl());
    let chow = oracle.structure_constants()?;
    let w = th.weyl();
    let mut rep =
        PsiReport { pairs_checked: 0, non_integral: Vec::new(), mismatches: Vec::new(), positive_degree: Vec::new() };
    for u in 0..w.len() {
        for v in 0..w.len() {
            rep.pairs_checked += 1;
            for x in 0..w.len() {
                let c = &table[u][v][x];
                let viol = || Violation {
                    u: w.word_string(u),
                    v: w.word_string(v),
                    w: w.word_string(x),
                    coefficient: th.law().format_coeff(c),
                };
                let deg = th.codim(u) as i32 + th.codim(v) as i32 - th.codim(x) as i32;
                if deg > 0 && !c.is_zero() {
                    rep.positive_degree.push(viol());
                    continue;
                }
                if deg != 0 {
                    continue;
                }
                match c.as_int() {
                    None => rep.non_integral.push(viol()),
                    Some(n) if n != i128::from(chow[u][v][x]) => rep.mismatches.push(viol()),
                    _ => {}
                }
            }
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharMapEntry {
    pub weight: Vec<i64>,
    pub level_one: Vec<String>,
    pub chow: Vec<i64>,
    pub in_level_one: bool,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharMapReport {
    pub entries: Vec<CharMapEntry>,
}

impl CharMapReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.matches && e.in_level_one)
    }
}

/// `Ψ(pr₁ c(x_λ)) = c₁^{CH}(L_λ)` for every character-lattice basis weight.
pub fn graded_char_map_check(th: &Theory) -> Result<CharMapReport> {
    let oracle = ChowOracle::new(th.root_datum(), th.weyl());
    let basis: Vec<Vec<i64>> = th.root_datum().lattice_basis().to_vec();
    let entries = try_map_range(th.exec(), basis.len(), |b| {
        let lambda = &basis[b];
        let c = th.characteristic_class_of_weight(lambda)?;
        let e = th.expand(&c)?;
        let in_level_one = (0..e.len()).all(|x| e[x].is_zero() || th.codim(x) >= 1);
        let level_one: Vec<Coeff> =
            (0..e.len()).map(|x| if th.codim(x) == 1 { e[x].clone() } else { Coeff::zero() }).collect();
        let chow = oracle.divisor_action(lambda, &oracle.one());
        let matches =
            level_one.iter().zip(&chow).all(|(c, &n)| c.as_int() == Some(i128::from(n)) || (c.is_zero() && n == 0));
        Ok(CharMapEntry {
            weight: lambda.clone(),
            level_one: level_one.iter().map(|c| th.law().format_coeff(c)).collect(),
            chow,
            in_level_one,
            matches,
        })
    })?;
    Ok(CharMapReport { entries })
}

/// Codimension of every class `ζ_I` for all words of length `≤ N` is respected by
/// its expansion: all coefficients sit at level `≥ N − |I|`.
pub fn check_word_classes_in_filtration(th: &Theory, max_words: usize) -> Result<(usize, Vec<String>)> {
    let r = th.root_datum().rank();
    let mut bad = Vec::new();
    let mut count = 0;
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut all = vec![Vec::new()];
    for _ in 0..th.n() {
        let mut next = Vec::new();
        for w in &words {
            for i in 0..r {
                let mut x = w.clone();
                x.push(i);
                next.push(x);
            }
        }
        all.extend(next.iter().cloned());
        words = next;
        if all.len() > max_words {
            break;
        }
    }
    all.truncate(max_words);
    for word in &all {
        let c = th.bott_samelson_class(word)?;
        let e = th.expand(&c)?;
        let level = th.n() - word.len();
        count += 1;
        if (0..e.len()).any(|x| !e[x].is_zero() && th.codim(x) < level) {
            bad.push(word.iter().map(|i| (i + 1).to_string()).collect());
        }
    }
    Ok((count, bad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgl::Fgl;
    use crate::roots::{CartanType, LatticeChoice, RootDatum};
    use crate::schubert::TheoryOptions;
    use std::sync::Arc;

    fn theory(ty: CartanType, law: Fgl) -> Theory {
        let rd = Arc::new(RootDatum::new(ty, LatticeChoice::SimplyConnected).unwrap());
        Theory::new(rd, Arc::new(law), &TheoryOptions::default()).unwrap()
    }

    #[test]
    fn slices_and_ranks() {
        let th = theory(CartanType::A2, Fgl::universal(3).unwrap());
        assert_eq!(graded_ranks(&th), vec![1, 2, 2, 1]);
        // degree 0: ζ_w carries Λ^{-codim w}, of ranks 1, 1, 2, 3
        let c = Coordinates::new(&th, 0).unwrap();
        assert_eq!(c.len(), 1 + 2 + 2 * 2 + 3);
        assert_eq!(filtration_slice(&th, 0, 0).unwrap().rows(), 10);
        assert_eq!(filtration_slice(&th, 3, 0).unwrap().rows(), 3);
        assert_eq!(filtration_slice(&th, 4, 0).unwrap().rows(), 0);
    }

    #[test]
    fn coordinates_roundtrip() {
        let th = theory(CartanType::A2, Fgl::universal(3).unwrap());
        let w = th.weyl();
        let u = w.from_word_string("21").unwrap();
        let prod = th.product_coords(u, u).unwrap();
        let c = Coordinates::new(&th, 2).unwrap();
        let v = c.vector(&th, &prod).unwrap();
        assert_eq!(c.coefficients(&th, &v).unwrap(), prod);
    }

    #[test]
    fn corrupted_table_is_reported() {
        let th = theory(CartanType::A2, Fgl::multiplicative(3));
        let mut table = th.structure_constants().unwrap();
        assert!(check_product_filtration(&th, &table).passed());
        let top = th.weyl().longest();
        table[0][0][top] = Coeff::one();
        let rep = check_product_filtration(&th, &table);
        assert_eq!(rep.violations.len(), 1);
    }

    #[test]
    fn psi_and_char_map() {
        for law in [Fgl::additive(3), Fgl::multiplicative(3), Fgl::universal(3).unwrap()] {
            let th = theory(CartanType::A2, law);
            let table = th.structure_constants().unwrap();
            assert!(graded_iso_psi(&th, &table).unwrap().passed());
            assert!(graded_char_map_check(&th).unwrap().passed());
        }
    }

    #[test]
    fn all_words_respect_codimension() {
        let th = theory(CartanType::A2, Fgl::universal(3).unwrap());
        let (n, bad) = check_word_classes_in_filtration(&th, 100).unwrap();
        assert_eq!(n, 1 + 2 + 4 + 8);
        assert!(bad.is_empty(), "{bad:?}");
    }
}
