//! `h(G)` as the quotient of `h(G/B)` by the characteristic ideal, computed
//! degree by degree as finitely generated abelian groups.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::chevalley::ChowOracle;
use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::expr::{parse_eval, Evaluator};
use crate::fgl::{Fgl, LawKind};
use crate::filtration::Coordinates;
use crate::lattice::{
    intersect_coordinate_subspace, lattice_eq, lattice_member, project_columns, row_lattice_basis, stack, AbelianGroup,
    IntMatrix,
};
use crate::par::try_map_range;
use crate::roots::{CartanType, RootDatum, WeylGroup};
use crate::schubert::{GKMClass, Theory};

fn unit_rows(n: usize, idx: &[usize], scale: i64) -> Vec<Vec<BigInt>> {
    idx.iter().map(|&i| (0..n).map(|j| if i == j { BigInt::from(scale) } else { BigInt::zero() }).collect()).collect()
}

fn scaled(th: &Theory, e: &[Coeff], lambda: &Coeff) -> Result<Vec<Coeff>> {
    e.iter().map(|c| th.law().ring().mul(lambda, c)).collect()
}

/// The characteristic ideal `c(I_F)·h(G/B)` together with the quotient data.
pub struct GroupQuotient<'a> {
    th: &'a Theory,
    modulus: Option<u32>,
    /// `(w, expansion of c(x_b)·ζ_w)` over lattice basis weights `b` and all `w`.
    generators: Vec<(usize, Vec<Coeff>)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Slice {
    pub degree: i32,
    pub ambient_rank: usize,
    pub ideal_basis: IntMatrix,
    pub contained: bool,
    pub quotient: AbelianGroup,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SlicePresentation {
    pub group: String,
    pub law: String,
    pub precision: u32,
    pub modulus: Option<u32>,
    pub slices: Vec<Slice>,
}

impl<'a> GroupQuotient<'a> {
    pub fn new(th: &'a Theory, modulus: Option<u32>) -> Result<Self> {
        if modulus == Some(0) {
            return Err(Error::Precondition("modulus must be positive".into()));
        }
        let basis = th.root_datum().lattice_basis().to_vec();
        let nw = th.weyl().len();
        let chern: Vec<GKMClass> = basis.iter().map(|l| th.characteristic_class_of_weight(l)).collect::<Result<_>>()?;
        let generators = try_map_range(th.exec(), basis.len() * nw, |i| {
            let (b, w) = (i / nw, i % nw);
            let prod = th.mul(&chern[b], th.zeta(w)?)?;
            Ok((w, th.expand(&prod)?))
        })?;
        Ok(GroupQuotient { th, modulus, generators })
    }

    pub fn theory(&self) -> &Theory {
        self.th
    }

    pub fn modulus(&self) -> Option<u32> {
        self.modulus
    }

    /// Degree-`k` rows `λ·c(x_b)ζ_w` with `codim w ≥ min_level`.
    fn ideal_rows(&self, coords: &Coordinates, min_level: usize) -> Result<Vec<Vec<BigInt>>> {
        let th = self.th;
        let k = coords.k;
        let mut rows = Vec::new();
        for (w, e) in &self.generators {
            if th.codim(*w) < min_level {
                continue;
            }
            let j = th.codim(*w) as i32 + 1 - k;
            if j < 0 || j > th.law().trunc() as i32 {
                continue;
            }
            for lambda in th.law().degree_basis(j as u32)? {
                let v = coords.vector(th, &scaled(th, e, &lambda)?)?;
                if v.iter().any(|x| !x.is_zero()) {
                    rows.push(v);
                }
            }
        }
        Ok(rows)
    }

    /// The ideal slice in degree `k`, including `n·h^k` for coefficients mod `n`.
    pub fn ideal_slice(&self, k: i32) -> Result<(Coordinates, IntMatrix)> {
        let coords = Coordinates::new(self.th, k)?;
        let mut rows = self.ideal_rows(&coords, 0)?;
        if let Some(n) = self.modulus {
            rows.extend(unit_rows(coords.len(), &(0..coords.len()).collect::<Vec<_>>(), i64::from(n)));
        }
        let m = IntMatrix::from_rows(coords.len(), rows)?;
        Ok((coords, row_lattice_basis(&m)))
    }

    pub fn slice(&self, k: i32) -> Result<Slice> {
        let (coords, ideal) = self.ideal_slice(k)?;
        let contained = ideal.cols() == coords.len();
        Ok(Slice {
            degree: k,
            ambient_rank: coords.len(),
            quotient: AbelianGroup::cokernel(coords.len(), &ideal),
            ideal_basis: ideal,
            contained,
        })
    }

    /// Quotient slices of `h(G)` in degrees `0..=N`.
    pub fn slices(&self) -> Result<SlicePresentation> {
        let n = self.th.n() as i32;
        let slices = try_map_range(self.th.exec(), (n + 1) as usize, |k| self.slice(k as i32))?;
        Ok(SlicePresentation {
            group: self.th.root_datum().label(),
            law: self.th.law().kind().to_string(),
            precision: self.th.precision(),
            modulus: self.modulus,
            slices,
        })
    }

    /// The four-term sequence at filtration level `i`, one report per degree.
    pub fn comparison_sequence(&self, i: usize) -> Result<ComparisonReport> {
        let th = self.th;
        if self.modulus.is_some() {
            return Err(Error::Unsupported("comparison sequence with reduced coefficients".into()));
        }
        if i > th.n() {
            return Err(Error::Precondition(format!("level {i} exceeds dimension {}", th.n())));
        }
        let chow = chow_group_slices(th.root_datum(), th.weyl())?;
        let lo = (i as i32 - th.law().trunc() as i32).max(0);
        let mut degrees = Vec::new();
        for k in lo..=i as i32 {
            let coords = Coordinates::new(th, k)?;
            let level = coords.exact_level_indices(th, i);
            if level.is_empty() {
                continue;
            }
            let n = coords.len();
            let lower = if i == 0 { 0 } else { i - 1 };
            let t1_full = IntMatrix::from_rows(n, self.ideal_rows(&coords, lower)?)?;
            let t1 = row_lattice_basis(&project_columns(&t1_full, &level));
            let all = IntMatrix::from_rows(n, self.ideal_rows(&coords, 0)?)?;
            let at_level = intersect_coordinate_subspace(&all, &coords.level_indices(th, i));
            let t2 = row_lattice_basis(&project_columns(&at_level, &level));

            let a = level.len();
            let chow_term = AbelianGroup::cokernel(a, &t1);
            let graded = AbelianGroup::cokernel(a, &t2);
            let t1_in_t2 = crate::lattice::lattice_contains(&t2, &t1)?;
            let kernel = relative_quotient(&t2, &t1)?;
            let lam_rank = th.law().degree_basis((i as i32 - k) as u32)?.len();
            let mut expected = AbelianGroup::trivial();
            for _ in 0..lam_rank {
                expected = expected.direct_sum(&chow[i]);
            }
            let free_ok = chow_term.free_rank == kernel.free_rank + graded.free_rank;
            let order_ok = match (chow_term.order(), kernel.order(), graded.order()) {
                (Some(x), Some(y), Some(z)) => x == y * z,
                _ => chow_term.free_rank > 0,
            };
            degrees.push(ComparisonDegree {
                degree: k,
                level_rank: a,
                first: t1.clone(),
                second: t2.clone(),
                chow_term: chow_term.clone(),
                chow_expected: expected.clone(),
                chow_matches: chow_term == expected,
                kernel,
                graded_quotient: graded,
                exact: t1_in_t2 && free_ok && order_ok,
                labels: level.iter().map(|&c| coords.describe(th, c)).collect(),
            });
        }
        Ok(ComparisonReport { group: th.root_datum().label(), level: i, chow_group: chow[i].clone(), degrees })
    }

    /// Whether the kernel of `CH^i(G;Λ) → h^(i/i+1)(G)` in degree `k` is
    /// generated by `c·ζ_w`.
    pub fn kernel_generated_by(&self, i: usize, k: i32, c: &Coeff, w: usize) -> Result<bool> {
        let th = self.th;
        let rep = self.comparison_sequence(i)?;
        let d = rep
            .degrees
            .iter()
            .find(|d| d.degree == k)
            .ok_or_else(|| Error::Precondition(format!("no level-{i} coordinates in degree {k}")))?;
        let coords = Coordinates::new(th, k)?;
        let level = coords.exact_level_indices(th, i);
        let mut e = vec![Coeff::zero(); th.weyl().len()];
        e[w] = c.clone();
        let v = coords.vector(th, &e)?;
        let v: Vec<BigInt> = level.iter().map(|&j| v[j].clone()).collect();
        let with = stack(level.len(), &[&d.first, &IntMatrix::from_rows(level.len(), vec![v])?]);
        Ok(lattice_eq(&with, &d.second) && !lattice_eq(&d.first, &d.second))
    }
}

/// `sup / sub` for lattices `sub ⊆ sup`.
fn relative_quotient(sup: &IntMatrix, sub: &IntMatrix) -> Result<AbelianGroup> {
    let b = row_lattice_basis(sup);
    let mut rows = Vec::new();
    for r in 0..sub.rows() {
        let m = lattice_member(sub.row(r), &b)?;
        match m.certificate {
            Some(c) => rows.push(c),
            None => return Err(Error::InvalidLattice("sublattice not contained".into())),
        }
    }
    Ok(AbelianGroup::cokernel(b.rows(), &IntMatrix::from_rows(b.rows(), rows)?))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComparisonDegree {
    pub degree: i32,
    pub level_rank: usize,
    /// Image of `c(I)·h^(i−1)` in `h^(i)/h^(i+1)`.
    pub first: IntMatrix,
    /// Image of `c(I)·h ∩ h^(i)` in `h^(i)/h^(i+1)`.
    pub second: IntMatrix,
    pub chow_term: AbelianGroup,
    pub chow_expected: AbelianGroup,
    pub chow_matches: bool,
    pub kernel: AbelianGroup,
    pub graded_quotient: AbelianGroup,
    pub exact: bool,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub group: String,
    pub level: usize,
    pub chow_group: AbelianGroup,
    pub degrees: Vec<ComparisonDegree>,
}

impl ComparisonReport {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(|d| d.exact && d.chow_matches)
    }
}

/// `CH^i(G)` for `i = 0..=N` from the Chevalley oracle alone.
pub fn chow_group_slices(rd: &RootDatum, w: &WeylGroup) -> Result<Vec<AbelianGroup>> {
    let oracle = ChowOracle::new(rd, w);
    let n = rd.n();
    let codim = |x: usize| n - w.length(x);
    let mut out = Vec::new();
    for i in 0..=n {
        let cols: Vec<usize> = (0..w.len()).filter(|&x| codim(x) == i).collect();
        let mut rows = Vec::new();
        if i > 0 {
            for u in (0..w.len()).filter(|&x| codim(x) == i - 1) {
                let mut e = vec![0; w.len()];
                e[u] = 1;
                for l in rd.lattice_basis() {
                    let img = oracle.divisor_action(l, &e);
                    rows.push(cols.iter().map(|&c| BigInt::from(img[c])).collect());
                }
            }
        }
        out.push(AbelianGroup::cokernel(cols.len(), &IntMatrix::from_rows(cols.len(), rows)?));
    }
    Ok(out)
}

/// Codimension-`i` Schubert classes whose image in `CH^i(G)` is nonzero.
pub fn chow_nonzero_classes(rd: &RootDatum, w: &WeylGroup, i: usize) -> Result<Vec<usize>> {
    let oracle = ChowOracle::new(rd, w);
    let n = rd.n();
    let cols: Vec<usize> = (0..w.len()).filter(|&x| n - w.length(x) == i).collect();
    let mut rows = Vec::new();
    if i > 0 {
        for u in (0..w.len()).filter(|&x| n - w.length(x) + 1 == i) {
            let mut e = vec![0; w.len()];
            e[u] = 1;
            for l in rd.lattice_basis() {
                let img = oracle.divisor_action(l, &e);
                rows.push(cols.iter().map(|&c| BigInt::from(img[c])).collect());
            }
        }
    }
    let lat = row_lattice_basis(&IntMatrix::from_rows(cols.len(), rows)?);
    let mut out = Vec::new();
    for (j, &x) in cols.iter().enumerate() {
        let e: Vec<BigInt> = (0..cols.len()).map(|c| BigInt::from(i64::from(c == j))).collect();
        if !lattice_member(&e, &lat)?.member {
            out.push(x);
        }
    }
    Ok(out)
}

/// Polynomial in presentation generators with coefficients in `Λ`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    pub terms: BTreeMap<Vec<u32>, Coeff>,
}

impl Poly {
    pub fn constant(c: Coeff, ngens: usize) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; ngens], c);
        }
        Poly { terms }
    }

    pub fn generator(i: usize, ngens: usize) -> Poly {
        let mut e = vec![0; ngens];
        e[i] = 1;
        Poly { terms: BTreeMap::from([(e, Coeff::one())]) }
    }

    pub fn add(&self, o: &Poly) -> Result<Poly> {
        let mut terms = self.terms.clone();
        for (e, c) in &o.terms {
            let s = match terms.get(e) {
                Some(x) => x.add(c)?,
                None => c.clone(),
            };
            if s.is_zero() {
                terms.remove(e);
            } else {
                terms.insert(e.clone(), s);
            }
        }
        Ok(Poly { terms })
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect() }
    }

    pub fn mul(&self, law: &Fgl, o: &Poly) -> Result<Poly> {
        let mut out = Poly::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let c = law.ring().mul(c1, c2)?;
                if c.is_zero() {
                    continue;
                }
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out = out.add(&Poly { terms: BTreeMap::from([(e, c)]) })?;
            }
        }
        Ok(out)
    }

    /// Common degree of all terms, if homogeneous.
    pub fn degree(&self, law: &Fgl, codims: &[usize]) -> Option<i32> {
        let mut deg = None;
        for (e, c) in &self.terms {
            let d = law.ring().degree(c)? + e.iter().zip(codims).map(|(&a, &b)| a as i32 * b as i32).sum::<i32>();
            match deg {
                None => deg = Some(d),
                Some(x) if x != d => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn format(&self, law: &Fgl, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{k}", names[i]) })
                    .collect();
                let coef = law.format_coeff(c);
                if mono.is_empty() {
                    format!("({coef})")
                } else {
                    format!("({coef})*{}", mono.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

struct PolyEval<'a> {
    law: &'a Fgl,
    names: &'a [String],
}

impl Evaluator for PolyEval<'_> {
    type Value = Poly;

    fn int(&self, v: i128) -> Result<Poly> {
        Ok(Poly::constant(Coeff::int(v), self.names.len()))
    }

    fn var(&self, name: &str) -> Result<Poly> {
        if let Some(i) = self.names.iter().position(|n| n == name) {
            return Ok(Poly::generator(i, self.names.len()));
        }
        match self.law.named_coefficient(name) {
            Some(c) => Ok(Poly::constant(c, self.names.len())),
            None => Err(Error::Parse { line: 0, msg: format!("unknown symbol {name}") }),
        }
    }

    fn add(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        a.add(b)
    }

    fn neg(&self, a: &Poly) -> Result<Poly> {
        Ok(a.neg())
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        a.mul(self.law, b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    /// Schubert class `ζ_w` for a reduced word of `w`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    /// Characteristic class `c(x_λ)` of a weight in fundamental-weight coordinates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<Vec<i64>>,
    pub codim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationSpec {
    pub name: String,
    pub polynomial: String,
}

/// Generators and relations claimed to present `h(G)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingPresentation {
    pub generators: Vec<GeneratorSpec>,
    pub relations: Vec<RelationSpec>,
}

impl RingPresentation {
    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn parse_relations(&self, law: &Fgl) -> Result<Vec<(String, Poly)>> {
        let names = self.names();
        let ev = PolyEval { law, names: &names };
        self.relations
            .iter()
            .enumerate()
            .map(|(i, r)| Ok((r.name.clone(), parse_eval(&r.polynomial, i + 1, &ev)?)))
            .collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelationCheck {
    pub name: String,
    pub degree: Option<i32>,
    pub in_ideal: bool,
    pub certificate: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SliceCheck {
    pub degree: i32,
    pub engine: AbelianGroup,
    pub presented: AbelianGroup,
    pub generated: bool,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresentationReport {
    pub group: String,
    pub law: String,
    pub relations: Vec<RelationCheck>,
    pub slices: Vec<SliceCheck>,
    pub verified_through_degree: usize,
}

impl PresentationReport {
    pub fn relations_ok(&self) -> bool {
        self.relations.iter().all(|r| r.in_ideal)
    }

    pub fn generation_ok(&self) -> bool {
        self.slices.iter().all(|s| s.generated)
    }

    pub fn slices_ok(&self) -> bool {
        self.slices.iter().all(|s| s.matches)
    }

    pub fn passed(&self) -> bool {
        self.relations_ok() && self.generation_ok() && self.slices_ok()
    }
}

/// Monomials in generators of the given codimensions with total codimension in `lo..=hi`.
fn monomials(codims: &[usize], lo: usize, hi: usize) -> Vec<(Vec<u32>, usize)> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; codims.len()];
    fn rec(
        i: usize,
        c: usize,
        codims: &[usize],
        lo: usize,
        hi: usize,
        cur: &mut Vec<u32>,
        out: &mut Vec<(Vec<u32>, usize)>,
    ) {
        if i == codims.len() {
            if c >= lo {
                out.push((cur.clone(), c));
            }
            return;
        }
        let mut e = 0;
        loop {
            let cc = c + e * codims[i];
            if cc > hi {
                break;
            }
            cur[i] = e as u32;
            rec(i + 1, cc, codims, lo, hi, cur, out);
            e += 1;
        }
        cur[i] = 0;
    }
    rec(0, 0, codims, lo, hi, &mut cur, &mut out);
    out
}

impl GroupQuotient<'_> {
    fn generator_classes(&self, p: &RingPresentation) -> Result<Vec<GKMClass>> {
        let th = self.th;
        p.generators
            .iter()
            .map(|g| {
                let (class, codim) = match (&g.word, &g.weight) {
                    (Some(word), None) => {
                        let w = th.weyl().from_word_string(word)?;
                        (th.zeta(w)?.clone(), th.codim(w))
                    }
                    (None, Some(l)) => (th.characteristic_class_of_weight(l)?, 1),
                    _ => {
                        return Err(Error::Precondition(format!(
                            "generator {} needs exactly one of word and weight",
                            g.name
                        )))
                    }
                };
                if codim != g.codim || codim == 0 {
                    return Err(Error::Precondition(format!(
                        "generator {} has codimension {codim}, declared {}",
                        g.name, g.codim
                    )));
                }
                Ok(class)
            })
            .collect()
    }

    fn evaluate(&self, gens: &[GKMClass], p: &Poly) -> Result<GKMClass> {
        let th = self.th;
        let mut acc = GKMClass::zero(th.weyl().len(), th.precision());
        for (e, c) in &p.terms {
            let mut m = th.one();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    m = th.mul(&m, &gens[i])?;
                }
            }
            acc = acc.add(&th.scale(&m, c)?)?;
        }
        Ok(acc)
    }

    /// Slice of the abstract ring `Λ[gens]/(relations)` in degree `k`.
    fn presented_slice(&self, codims: &[usize], rels: &[(Poly, i32)], k: i32) -> Result<AbelianGroup> {
        let law = self.th.law();
        let d = law.trunc() as i32;
        let lo = k.max(0) as usize;
        let hi = k + d;
        if hi < 0 {
            return Ok(AbelianGroup::trivial());
        }
        let monos = monomials(codims, lo, hi as usize);
        let mut index = BTreeMap::new();
        let mut n = 0;
        for (e, c) in &monos {
            index.insert(e.clone(), n);
            n += law.degree_basis((*c as i32 - k) as u32)?.len();
        }
        let mut rows = Vec::new();
        for (r, deg) in rels {
            let mlo = (k - deg).max(0) as usize;
            let mhi = k + d - deg;
            if mhi < 0 {
                continue;
            }
            for (m, c) in monomials(codims, mlo, mhi as usize) {
                let j = (deg + c as i32 - k) as u32;
                for lambda in law.degree_basis(j)? {
                    let mut row = vec![BigInt::zero(); n];
                    let mut nonzero = false;
                    for (e, coef) in &r.terms {
                        let prod: Vec<u32> = e.iter().zip(&m).map(|(a, b)| a + b).collect();
                        let pc: usize = prod.iter().zip(codims).map(|(&a, &b)| a as usize * b).sum();
                        let dd = pc as i32 - k;
                        if dd > d {
                            continue;
                        }
                        let x = law.ring().mul(&lambda, coef)?;
                        if x.is_zero() {
                            continue;
                        }
                        let start = index[&prod];
                        for (t, v) in law.degree_coords(&x, dd as u32)?.into_iter().enumerate() {
                            if !v.is_zero() {
                                nonzero = true;
                            }
                            row[start + t] += v;
                        }
                    }
                    if nonzero {
                        rows.push(row);
                    }
                }
            }
        }
        if let Some(p) = self.modulus {
            rows.extend(unit_rows(n, &(0..n).collect::<Vec<_>>(), i64::from(p)));
        }
        Ok(AbelianGroup::cokernel(n, &IntMatrix::from_rows(n, rows)?))
    }

    /// Certifies a presentation: relations lie in the ideal, monomials in the
    /// generators span every quotient slice, and the presented ring has the
    /// same slices in degrees `0..=N`.
    pub fn verify_presentation(&self, p: &RingPresentation) -> Result<PresentationReport> {
        let rels = p.parse_relations(self.th.law())?;
        self.verify_parsed(p, &rels)
    }

    pub fn verify_parsed(&self, p: &RingPresentation, rels: &[(String, Poly)]) -> Result<PresentationReport> {
        let th = self.th;
        let law = th.law();
        let codims: Vec<usize> = p.generators.iter().map(|g| g.codim).collect();
        let gens = self.generator_classes(p)?;
        let n = th.n();

        let mut relations = Vec::new();
        let mut graded = Vec::new();
        for (name, poly) in rels {
            let deg = poly.degree(law, &codims);
            let mut check = RelationCheck { name: name.clone(), degree: deg, in_ideal: false, certificate: None };
            if let Some(d) = deg {
                graded.push((poly.clone(), d));
                let e = th.expand(&self.evaluate(&gens, poly)?)?;
                if d > n as i32 {
                    check.in_ideal = e.iter().all(Coeff::is_zero);
                } else {
                    let (coords, ideal) = self.ideal_slice(d)?;
                    let m = lattice_member(&coords.vector(th, &e)?, &ideal)?;
                    check.in_ideal = m.member;
                    check.certificate = m.certificate.map(|c| c.iter().map(ToString::to_string).collect());
                }
            }
            relations.push(check);
        }

        let mono_classes: Vec<(Vec<u32>, usize, Vec<Coeff>)> = monomials(&codims, 0, n)
            .into_iter()
            .map(|(e, c)| {
                let poly = Poly { terms: BTreeMap::from([(e.clone(), Coeff::one())]) };
                Ok((e, c, th.expand(&self.evaluate(&gens, &poly)?)?))
            })
            .collect::<Result<_>>()?;

        let slices = try_map_range(th.exec(), n + 1, |k| {
            let k = k as i32;
            let (coords, ideal) = self.ideal_slice(k)?;
            let engine = AbelianGroup::cokernel(coords.len(), &ideal);
            let mut rows = ideal.row_vecs();
            for (_, c, e) in &mono_classes {
                let j = *c as i32 - k;
                if j < 0 || j > law.trunc() as i32 {
                    continue;
                }
                for lambda in law.degree_basis(j as u32)? {
                    rows.push(coords.vector(th, &scaled(th, e, &lambda)?)?);
                }
            }
            let span = IntMatrix::from_rows(coords.len(), rows)?;
            let generated = lattice_eq(&span, &IntMatrix::identity(coords.len()));
            let presented = self.presented_slice(&codims, &graded, k)?;
            Ok(SliceCheck { degree: k, matches: engine == presented, engine, presented, generated })
        })?;

        Ok(PresentationReport {
            group: th.root_datum().label(),
            law: law.kind().to_string(),
            relations,
            slices,
            verified_through_degree: n,
        })
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of degree-`d` monomials in `v` variables, by enumeration.
pub fn count_monomials(v: usize, d: usize) -> usize {
    monomials(&vec![1; v], d, d).len()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PglReport {
    pub n: usize,
    pub presentation: RingPresentation,
    pub report: PresentationReport,
    /// `(d, monomial count in n−d+1 variables, binomial(n, d))`.
    pub counting: Vec<(usize, usize, u64)>,
}

impl PglReport {
    pub fn passed(&self) -> bool {
        self.report.passed() && self.counting.iter().all(|&(_, a, b)| a as u64 == b)
    }
}

/// Closed-form presentation `Λ[x]/(x^n, C(n,d)x^d, n·_F x)` for a type `A_{n−1}` datum,
/// with `x = c(x_{ω₁})`. For prime `n = p` with coefficients mod `p` the
/// reduced form `(px, x^p)` is used instead.
pub fn pgl_closed_form(q: &GroupQuotient<'_>) -> Result<PglReport> {
    let th = q.theory();
    let rd = th.root_datum();
    let n = match rd.ty {
        CartanType::A1 => 2,
        CartanType::A2 => 3,
        CartanType::A3 => 4,
        t => return Err(Error::Unsupported(format!("{t} is not of type A"))),
    };
    let law = th.law();
    let names = vec!["x".to_string()];
    let x = Poly::generator(0, 1);
    let xpow = |k: u32| -> Poly { Poly { terms: BTreeMap::from([(vec![k], Coeff::one())]) } };
    let mut rels: Vec<(String, Poly)> = Vec::new();
    let reduced = q.modulus() == Some(n as u32) && is_prime(n);
    if reduced {
        rels.push((format!("{n}x"), x.mul(law, &Poly::constant(Coeff::int(n as i128), 1))?));
        rels.push((format!("x^{n}"), xpow(n as u32)));
    } else {
        rels.push((format!("x^{n}"), xpow(n as u32)));
        for d in (1..n).rev() {
            let c = binomial(n as u64, d as u64) as i128;
            rels.push((format!("C({n},{d})x^{d}"), xpow(d as u32).mul(law, &Poly::constant(Coeff::int(c), 1))?));
        }
        let s = law.n_series(n as i64, law.trunc() + 2)?;
        let mut p = Poly::default();
        for k in 1..=law.trunc() + 1 {
            let c = s.coefficient(k as u64);
            if !c.is_zero() {
                p = p.add(&Poly { terms: BTreeMap::from([(vec![k], c)]) })?;
            }
        }
        rels.push((format!("{n}._F x"), p));
    }
    let mut omega = vec![0; rd.rank()];
    omega[0] = 1;
    let presentation = RingPresentation {
        generators: vec![GeneratorSpec { name: "x".into(), word: None, weight: Some(omega), codim: 1 }],
        relations: rels
            .iter()
            .map(|(name, p)| RelationSpec { name: name.clone(), polynomial: p.format(law, &names) })
            .collect(),
    };
    let report = q.verify_parsed(&presentation, &rels)?;
    let counting = (1..n).map(|d| (d, count_monomials(n - d + 1, d), binomial(n as u64, d as u64))).collect();
    Ok(PglReport { n, presentation, report, counting })
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).all(|d| !n.is_multiple_of(d))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GammaWitness {
    pub word: String,
    pub in_tau: bool,
    pub outside_gamma_plus_tau: bool,
    /// Order of the class in `τ^n/(γ^n + τ^{n+1})`, when finite.
    #[serde(with = "crate::decimal::big_opt")]
    pub order: Option<BigInt>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GammaReport {
    pub group: String,
    pub n: usize,
    pub chow_groups: Vec<AbelianGroup>,
    pub gamma_one_is_tau_one: bool,
    /// `γ^i + τ^{i+1} = τ^i` for `1 ≤ i < n`.
    pub levels_agree: Vec<(usize, bool)>,
    pub quotient: AbelianGroup,
    pub witnesses: Vec<GammaWitness>,
}

impl GammaReport {
    pub fn passed(&self) -> bool {
        self.gamma_one_is_tau_one
            && self.levels_agree.iter().all(|x| x.1)
            && !self.witnesses.is_empty()
            && self.witnesses.iter().all(|w| w.in_tau && w.outside_gamma_plus_tau)
    }
}

/// Compares the `γ`-filtration with the topological filtration on `K₀(G/B)`.
///
/// `th` must carry the multiplicative law; coefficients are evaluated at `β = 1`.
/// `n` is the least positive degree with `CH^n(G) ≠ 0`.
pub fn gamma_vs_topological(th: &Theory) -> Result<GammaReport> {
    if *th.law().kind() != LawKind::Multiplicative {
        return Err(Error::Precondition("the gamma filtration needs the multiplicative law".into()));
    }
    let rd = th.root_datum();
    let wg = th.weyl();
    let chow = chow_group_slices(rd, wg)?;
    let n = (1..chow.len())
        .find(|&i| !chow[i].is_trivial())
        .ok_or_else(|| Error::HypothesisFailed(format!("CH^i({}) vanishes in every positive degree", rd.label())))?;
    let nw = wg.len();
    let at_one = |e: Vec<Coeff>| -> Vec<BigInt> {
        e.iter().map(|c| c.terms().iter().map(|t| BigInt::from(t.1)).sum()).collect()
    };
    let chern: Vec<GKMClass> =
        rd.lattice_basis().iter().map(|l| th.characteristic_class_of_weight(l)).collect::<Result<_>>()?;
    let r = chern.len();
    let monos = monomials(&vec![1; r], 1, th.n());
    let products = try_map_range(th.exec(), monos.len(), |i| {
        let (e, len) = &monos[i];
        let mut m = th.one();
        for (b, &k) in e.iter().enumerate() {
            for _ in 0..k {
                m = th.mul(&m, &chern[b])?;
            }
        }
        Ok((*len, at_one(th.expand(&m)?)))
    })?;
    let gamma = |i: usize| -> Result<IntMatrix> {
        IntMatrix::from_rows(nw, products.iter().filter(|p| p.0 >= i).map(|p| p.1.clone()).collect())
    };
    let tau = |i: usize| -> Result<IntMatrix> {
        let idx: Vec<usize> = (0..nw).filter(|&w| th.codim(w) >= i).collect();
        IntMatrix::from_rows(nw, unit_rows(nw, &idx, 1))
    };
    let gamma_one_is_tau_one = lattice_eq(&gamma(1)?, &tau(1)?);
    let mut levels_agree = Vec::new();
    for i in 1..n {
        let lhs = stack(nw, &[&gamma(i)?, &tau(i + 1)?]);
        levels_agree.push((i, lattice_eq(&lhs, &tau(i)?)));
    }
    let lower = row_lattice_basis(&stack(nw, &[&gamma(n)?, &tau(n + 1)?]));
    let keep: Vec<usize> = (0..nw).filter(|&w| th.codim(w) >= n).collect();
    let quotient = AbelianGroup::cokernel(keep.len(), &project_columns(&lower, &keep));
    let bound = quotient.order();
    let mut witnesses = Vec::new();
    for w in chow_nonzero_classes(rd, wg, n)? {
        let v: Vec<BigInt> = (0..nw).map(|x| BigInt::from(i64::from(x == w))).collect();
        let outside = !lattice_member(&v, &lower)?.member;
        let mut order = None;
        if let Some(b) = &bound {
            let mut m = BigInt::one();
            while &m <= b {
                let mv: Vec<BigInt> = v.iter().map(|x| x * &m).collect();
                if lattice_member(&mv, &lower)?.member {
                    order = Some(m);
                    break;
                }
                m += 1;
            }
        }
        witnesses.push(GammaWitness {
            word: wg.word_string(w),
            in_tau: th.codim(w) >= n,
            outside_gamma_plus_tau: outside,
            order,
        });
    }
    Ok(GammaReport { group: rd.label(), n, chow_groups: chow, gamma_one_is_tau_one, levels_agree, quotient, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::LatticeChoice;
    use crate::schubert::TheoryOptions;
    use std::sync::Arc;

    fn theory(ty: CartanType, lat: LatticeChoice, law: Fgl) -> Theory {
        let rd = Arc::new(RootDatum::new(ty, lat).unwrap());
        Theory::new(rd, Arc::new(law), &TheoryOptions::default()).unwrap()
    }

    fn group(s: &str) -> AbelianGroup {
        let mut g = AbelianGroup::trivial();
        for part in s.split('+').map(str::trim).filter(|p| *p != "0") {
            let piece = match part.strip_prefix("Z/") {
                Some(t) => AbelianGroup { torsion: vec![t.parse().unwrap()], free_rank: 0 },
                None => AbelianGroup { torsion: vec![], free_rank: 1 },
            };
            g = g.direct_sum(&piece);
        }
        g
    }

    #[test]
    fn a1_additive_ideal_fills_degree_one() {
        let th = theory(CartanType::A1, LatticeChoice::SimplyConnected, Fgl::additive(1));
        let q = GroupQuotient::new(&th, None).unwrap();
        let s = q.slices().unwrap();
        assert_eq!(s.slices[0].quotient, group("Z"));
        assert!(s.slices[0].ideal_basis.rows() == 0);
        assert!(s.slices[1].quotient.is_trivial());
    }

    #[test]
    fn chow_groups_of_small_groups() {
        let so3 = RootDatum::named("SO3").unwrap();
        let w = WeylGroup::new(&so3, crate::roots::WordOrder::LexMin);
        let ch = chow_group_slices(&so3, &w).unwrap();
        assert_eq!(ch, vec![group("Z"), group("Z/2")]);
        let g2 = RootDatum::named("G2").unwrap();
        let w = WeylGroup::new(&g2, crate::roots::WordOrder::LexMin);
        let ch = chow_group_slices(&g2, &w).unwrap();
        assert_eq!(ch, vec![group("Z"), group("0"), group("0"), group("Z/2"), group("0"), group("0"), group("0")]);
    }

    #[test]
    fn additive_ideal_matches_chow_ideal() {
        for ty in [CartanType::A2, CartanType::B2, CartanType::G2] {
            let th = theory(ty, LatticeChoice::SimplyConnected, Fgl::additive(ty_n(ty)));
            let q = GroupQuotient::new(&th, None).unwrap();
            let oracle = ChowOracle::new(th.root_datum(), th.weyl());
            for i in 1..=th.n() {
                let (coords, ideal) = q.ideal_slice(i as i32).unwrap();
                let cols: Vec<usize> = coords.entries.iter().map(|e| e.0).collect();
                let mut rows = Vec::new();
                for u in (0..th.weyl().len()).filter(|&u| th.codim(u) + 1 == i) {
                    let mut e = vec![0; th.weyl().len()];
                    e[u] = 1;
                    for l in th.root_datum().lattice_basis() {
                        let img = oracle.divisor_action(l, &e);
                        rows.push(cols.iter().map(|&c| BigInt::from(img[c])).collect());
                    }
                }
                let chow = IntMatrix::from_rows(cols.len(), rows).unwrap();
                assert!(lattice_eq(&ideal, &chow), "{ty} degree {i}");
            }
        }
    }

    fn ty_n(ty: CartanType) -> u32 {
        RootDatum::new(ty, LatticeChoice::SimplyConnected).unwrap().n() as u32
    }

    #[test]
    fn so3_universal() {
        let th = theory(CartanType::A1, LatticeChoice::Adjoint, Fgl::universal(1).unwrap());
        let q = GroupQuotient::new(&th, None).unwrap();
        let s = q.slices().unwrap();
        let got: Vec<_> = s.slices.iter().map(|x| x.quotient.clone()).collect();
        assert_eq!(got, vec![group("Z + Z/2"), group("Z/2")]);
        let p = RingPresentation {
            generators: vec![GeneratorSpec { name: "y1".into(), word: Some("e".into()), weight: None, codim: 1 }],
            relations: vec![
                RelationSpec { name: "2y1".into(), polynomial: "2*y1".into() },
                RelationSpec { name: "y1^2".into(), polynomial: "y1^2".into() },
            ],
        };
        let rep = q.verify_presentation(&p).unwrap();
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn missing_relation_is_detected() {
        let th = theory(CartanType::A1, LatticeChoice::Adjoint, Fgl::universal(1).unwrap());
        let q = GroupQuotient::new(&th, None).unwrap();
        let p = RingPresentation {
            generators: vec![GeneratorSpec { name: "y1".into(), word: Some("e".into()), weight: None, codim: 1 }],
            relations: vec![RelationSpec { name: "y1^2".into(), polynomial: "y1^2".into() }],
        };
        let rep = q.verify_presentation(&p).unwrap();
        assert!(rep.relations_ok() && rep.generation_ok());
        assert!(!rep.slices_ok());
    }

    #[test]
    fn comparison_sequence_for_so3() {
        let th = theory(CartanType::A1, LatticeChoice::Adjoint, Fgl::universal(1).unwrap());
        let q = GroupQuotient::new(&th, None).unwrap();
        for i in 0..=1 {
            let rep = q.comparison_sequence(i).unwrap();
            assert!(rep.passed(), "{rep:?}");
        }
    }

    #[test]
    fn pgl2_additive_and_mod2() {
        let th = theory(CartanType::A1, LatticeChoice::Adjoint, Fgl::additive(1));
        let q = GroupQuotient::new(&th, None).unwrap();
        let rep = pgl_closed_form(&q).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let th = theory(CartanType::A1, LatticeChoice::Adjoint, Fgl::multiplicative(1));
        let q = GroupQuotient::new(&th, Some(2)).unwrap();
        let rep = pgl_closed_form(&q).unwrap();
        assert_eq!(rep.presentation.relations.len(), 2);
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn monomial_counts_are_binomials() {
        for n in 2..8 {
            for d in 1..n {
                assert_eq!(count_monomials(n - d + 1, d) as u64, binomial(n as u64, d as u64));
            }
        }
    }

    #[test]
    fn poly_roundtrip_through_text() {
        let law = Fgl::universal(3).unwrap();
        let names = vec!["x".to_string(), "y".to_string()];
        let ev = PolyEval { law: &law, names: &names };
        let p = parse_eval("2*x*y + a11*x^2 - 3*a11^2*y", 1, &ev).unwrap();
        let q = parse_eval(&p.format(&law, &names), 1, &ev).unwrap();
        assert_eq!(p, q);
        assert_eq!(p.degree(&law, &[1, 1]), None);
        assert_eq!(parse_eval("a11*x", 1, &ev).unwrap().degree(&law, &[3, 1]), Some(2));
    }

    #[test]
    fn gamma_requires_nonzero_chow() {
        let th = theory(CartanType::A2, LatticeChoice::SimplyConnected, Fgl::multiplicative(3));
        assert!(matches!(gamma_vs_topological(&th), Err(Error::HypothesisFailed(_))));
    }
}
