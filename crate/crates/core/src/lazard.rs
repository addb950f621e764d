//! Integral basis of the Lazard ring inside `ℤ[m₁, m₂, …]`, degree by degree.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::coeff::{Coeff, CoeffRing};
use crate::error::{Error, Result};
use crate::fgl::Fgl;
use crate::lattice::{hermite_normal_form, lattice_member, row_lattice_basis, IntMatrix};

/// A product `∏ a_{ij}` with `i ≤ j`, stored as a sorted list of index pairs.
pub type AMono = Vec<(usize, usize)>;

#[derive(Clone, Debug)]
struct Degree {
    basis: Vec<Coeff>,
    /// Basis rows as integer vectors on the `m`-monomials.
    matrix: IntMatrix,
    amonos: Vec<AMono>,
    /// `in_a[k]` writes basis element `k` as a combination of `amonos`.
    in_a: Vec<Vec<BigInt>>,
    /// Integer relations among `amonos`, used to shorten `in_a` output.
    relations: Vec<Vec<BigInt>>,
    mons: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct LazardBasis {
    degrees: Vec<Degree>,
}

fn amonos_of_weight(d: usize) -> Vec<AMono> {
    let mut pairs = Vec::new();
    for w in 1..=d {
        for i in 1..=w.div_ceil(2) {
            let j = w + 1 - i;
            if i <= j {
                pairs.push((i, j));
            }
        }
    }
    let mut out = Vec::new();
    fn rec(pairs: &[(usize, usize)], start: usize, left: usize, cur: &mut AMono, out: &mut Vec<AMono>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for k in start..pairs.len() {
            let w = pairs[k].0 + pairs[k].1 - 1;
            if w <= left {
                cur.push(pairs[k]);
                rec(pairs, k, left - w, cur, out);
                cur.pop();
            }
        }
    }
    rec(&pairs, 0, d, &mut Vec::new(), &mut out);
    out
}

fn eval_amono(law: &Fgl, ring: &CoeffRing, m: &AMono) -> Result<Coeff> {
    let mut acc = Coeff::one();
    for &(i, j) in m {
        acc = ring.mul(&acc, &law.a(i, j))?;
    }
    Ok(acc)
}

pub(crate) fn to_i128(x: &BigInt) -> Result<i128> {
    x.to_i128().ok_or(Error::Overflow("integer conversion"))
}

fn format_amono(m: &AMono) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut k = 0;
    while k < m.len() {
        let mut e = 1;
        while k + e < m.len() && m[k + e] == m[k] {
            e += 1;
        }
        let name = a_name(m[k].0, m[k].1);
        parts.push(if e == 1 { name } else { format!("{name}^{e}") });
        k += e;
    }
    parts.join("*")
}

pub fn a_name(i: usize, j: usize) -> String {
    if i < 10 && j < 10 {
        format!("a{i}{j}")
    } else {
        format!("a_{i}_{j}")
    }
}

impl LazardBasis {
    pub fn new(law: &Fgl) -> Result<Self> {
        let ring = law.ring();
        let mut degrees = vec![Degree {
            basis: vec![Coeff::one()],
            matrix: IntMatrix::identity(1),
            amonos: vec![Vec::new()],
            in_a: vec![vec![BigInt::from(1)]],
            relations: Vec::new(),
            mons: vec![0],
        }];
        for d in 1..=ring.trunc() {
            let amonos = amonos_of_weight(d as usize);
            let rows: Vec<Vec<BigInt>> =
                amonos.iter().map(|m| ring.monomial_coords(&eval_amono(law, ring, m)?, d)).collect::<Result<_>>()?;
            let cols = ring.monomials_of_degree(d).len();
            let m = IntMatrix::from_rows(cols, rows)?;
            let (h, u) = hermite_normal_form(&m);
            let keep: Vec<usize> = (0..h.rows()).filter(|&r| h.row(r).iter().any(|x| !x.is_zero())).collect();
            if keep.len() != cols {
                return Err(Error::Precondition(format!(
                    "Lazard ring in degree {d} has rank {} instead of {cols}",
                    keep.len()
                )));
            }
            let mons = ring.monomials_of_degree(d);
            let mut basis = Vec::new();
            for &r in &keep {
                let terms: Vec<_> = h
                    .row(r)
                    .iter()
                    .zip(&mons)
                    .filter(|(x, _)| !x.is_zero())
                    .map(|(x, &mo)| Ok((mo, to_i128(x)?)))
                    .collect::<Result<_>>()?;
                basis.push(Coeff::from_terms(terms)?);
            }
            let matrix = IntMatrix::from_rows(cols, keep.iter().map(|&r| h.row(r).to_vec()).collect())?;
            let in_a = keep.iter().map(|&r| u.row(r).to_vec()).collect();
            let rel_rows: Vec<Vec<BigInt>> = (keep.len()..h.rows()).map(|r| u.row(r).to_vec()).collect();
            let relations = if rel_rows.is_empty() {
                Vec::new()
            } else {
                lll(row_lattice_basis(&IntMatrix::from_rows(amonos.len(), rel_rows)?).row_vecs())
            };
            degrees.push(Degree { basis, matrix, amonos, in_a, relations, mons });
        }
        Ok(LazardBasis { degrees })
    }

    pub fn max_degree(&self) -> u32 {
        (self.degrees.len() - 1) as u32
    }

    pub fn basis(&self, d: u32) -> &[Coeff] {
        &self.degrees[d as usize].basis
    }

    /// Coordinates on [`LazardBasis::basis`]; `NotIntegral` when `c` lies outside the Lazard ring.
    pub fn coords(&self, c: &Coeff, d: u32) -> Result<Vec<BigInt>> {
        let deg = self
            .degrees
            .get(d as usize)
            .ok_or(Error::TruncationTooSmall { bound: self.max_degree(), degree: -(d as i32) })?;
        let v = coords_on_monomials(c, &deg.mons)?;
        let mem = lattice_member(&v, &deg.matrix)?;
        mem.certificate.ok_or_else(|| Error::NotIntegral(format!("degree {} element", -(d as i32))))
    }

    /// `c` rewritten as an integer combination of `a`-monomials.
    pub fn in_a(&self, c: &Coeff) -> Result<Vec<(AMono, BigInt)>> {
        let mut out = Vec::new();
        let mut by_degree: std::collections::BTreeMap<u32, Vec<(u64, i128)>> = Default::default();
        for &(m, v) in c.terms() {
            let d = self.degree_of_mono(m);
            by_degree.entry(d).or_default().push((m, v));
        }
        for (d, terms) in by_degree {
            let part = Coeff::from_terms(terms)?;
            let coords = self.coords(&part, d)?;
            let deg = &self.degrees[d as usize];
            let mut acc = vec![BigInt::zero(); deg.amonos.len()];
            for (k, ck) in coords.iter().enumerate() {
                if ck.is_zero() {
                    continue;
                }
                for (r, x) in deg.in_a[k].iter().enumerate() {
                    acc[r] += ck * x;
                }
            }
            shorten(&mut acc, &deg.relations);
            for (r, x) in acc.into_iter().enumerate() {
                if !x.is_zero() {
                    out.push((deg.amonos[r].clone(), x));
                }
            }
        }
        Ok(out)
    }

    fn degree_of_mono(&self, m: u64) -> u32 {
        // generator m_i has degree −i and sits in slot i−1
        (0..crate::coeff::MAX_GENS).map(|i| crate::coeff::slot(m, i) * (i as u32 + 1)).sum()
    }

    pub(crate) fn format_in_a(&self, _law: &Fgl, c: &Coeff) -> Result<String> {
        let terms = self.in_a(c)?;
        if terms.is_empty() {
            return Ok("0".into());
        }
        let mut s = String::new();
        for (k, (m, x)) in terms.iter().enumerate() {
            let neg = x < &BigInt::zero();
            let abs = if neg { -x.clone() } else { x.clone() };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let body = format_amono(m);
            if body.is_empty() {
                s.push_str(&abs.to_string());
            } else if abs == BigInt::from(1) {
                s.push_str(&body);
            } else {
                s.push_str(&format!("{abs}*{body}"));
            }
        }
        Ok(s)
    }

    pub(crate) fn in_a_monomials(&self, c: &Coeff) -> Result<Vec<(Vec<(String, u32)>, i128)>> {
        self.in_a(c)?
            .into_iter()
            .map(|(m, x)| {
                let mut exps: Vec<(String, u32)> = Vec::new();
                for &(i, j) in &m {
                    let n = a_name(i, j);
                    match exps.last_mut() {
                        Some(last) if last.0 == n => last.1 += 1,
                        _ => exps.push((n, 1)),
                    }
                }
                Ok((exps, to_i128(&x)?))
            })
            .collect()
    }

    /// Image of a degree `−d` element under the map classifying `target`.
    pub(crate) fn specialize(&self, c: &Coeff, d: u32, target: &Fgl) -> Result<Coeff> {
        let coords = self.coords(c, d)?;
        let deg = &self.degrees[d as usize];
        let tr = target.ring();
        let mut out = Coeff::zero();
        for (r, m) in deg.amonos.iter().enumerate() {
            let mut w = BigInt::zero();
            for (k, ck) in coords.iter().enumerate() {
                w += ck * &deg.in_a[k][r];
            }
            if w.is_zero() {
                continue;
            }
            let v = eval_amono(target, tr, m)?.scale(to_i128(&w)?)?;
            out = out.add(&v)?;
        }
        Ok(out)
    }
}

fn l1(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).sum()
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Nearest integer to `a / b` for `b > 0`.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (a * &two + b).div_floor(&(b * &two))
}

fn sub_multiple(v: &[BigInt], r: &[BigInt], q: &BigInt) -> Vec<BigInt> {
    v.iter().zip(r).map(|(a, b)| a - b * q).collect()
}

fn gram_schmidt(b: &[Vec<BigInt>]) -> (Vec<Vec<BigRational>>, Vec<BigRational>, Vec<Vec<BigRational>>) {
    let n = b.len();
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut norms: Vec<BigRational> = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let mut v: Vec<BigRational> = b[i].iter().map(|x| BigRational::from_integer(x.clone())).collect();
        for j in 0..i {
            let num: BigRational = b[i].iter().zip(&star[j]).map(|(x, y)| y * x).sum();
            mu[i][j] = num / &norms[j];
            for (vk, sk) in v.iter_mut().zip(&star[j]) {
                *vk -= &mu[i][j] * sk;
            }
        }
        norms.push(v.iter().map(|x| x * x).sum());
        star.push(v);
    }
    (star, norms, mu)
}

/// Exact LLL reduction (delta = 3/4) of linearly independent integer rows.
fn lll(mut b: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = b.len();
    let delta = BigRational::new(3.into(), 4.into());
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let (_, _, mu) = gram_schmidt(&b[..=k]);
            let q = mu[k][j].round().to_integer();
            if !q.is_zero() {
                b[k] = sub_multiple(&b[k], &b[j], &q);
            }
        }
        let (_, norms, mu) = gram_schmidt(&b[..=k]);
        let m = &mu[k][k - 1];
        if norms[k] >= (&delta - m * m) * &norms[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    b
}

/// Subtracts relation multiples while the L1 norm drops, so that e.g. `a13`
/// is written as itself rather than through a relation among `a`-monomials.
fn shorten(v: &mut Vec<BigInt>, relations: &[Vec<BigInt>]) {
    if relations.is_empty() {
        return;
    }
    // Babai rounding against the reduced basis, then greedy L1 steps.
    let (star, norms, _) = gram_schmidt(relations);
    for i in (0..relations.len()).rev() {
        let num: BigRational = v.iter().zip(&star[i]).map(|(x, y)| y * x).sum();
        let q = (num / &norms[i]).round().to_integer();
        if !q.is_zero() {
            *v = sub_multiple(v, &relations[i], &q);
        }
    }
    let mut best = l1(v);
    loop {
        let mut improved = false;
        for r in relations {
            let q = round_div(&dot(v, r), &dot(r, r));
            for k in [q.clone() - 1, q.clone(), q + 1] {
                if k.is_zero() {
                    continue;
                }
                let cand = sub_multiple(v, r, &k);
                let n = l1(&cand);
                if n < best {
                    *v = cand;
                    best = n;
                    improved = true;
                }
            }
        }
        if !improved {
            return;
        }
    }
}

fn coords_on_monomials(c: &Coeff, mons: &[u64]) -> Result<Vec<BigInt>> {
    let mut v = vec![BigInt::zero(); mons.len()];
    for &(m, x) in c.terms() {
        let i = mons
            .binary_search(&m)
            .map_err(|_| Error::DimensionMismatch("coefficient is not homogeneous of the requested degree".into()))?;
        v[i] = BigInt::from(x);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn partitions(n: usize) -> usize {
        let mut p = vec![0usize; n + 1];
        p[0] = 1;
        for k in 1..=n {
            for m in k..=n {
                p[m] += p[m - k];
            }
        }
        p[n]
    }

    #[test]
    fn ranks_are_partition_numbers() {
        let law = Fgl::universal(5).unwrap();
        let l = law.lazard().unwrap();
        for d in 0..=5 {
            assert_eq!(l.basis(d).len(), partitions(d as usize));
        }
    }

    #[test]
    fn m1_is_not_integral() {
        let law = Fgl::universal(3).unwrap();
        let l = law.lazard().unwrap();
        let m1 = law.ring().gen(0);
        assert!(matches!(l.coords(&m1, 1), Err(Error::NotIntegral(_))));
        assert!(l.coords(&m1.scale(2).unwrap(), 1).is_ok());
    }

    #[test]
    fn a11_formats_as_itself() {
        let law = Fgl::universal(3).unwrap();
        let s = law.format_coeff(&law.a(1, 1));
        assert_eq!(s, "a11");
        let sq = law.ring().mul(&law.a(1, 1), &law.a(1, 1)).unwrap();
        assert_eq!(law.format_coeff(&sq.scale(3).unwrap()), "3*a11^2");
    }

    #[test]
    fn every_a_ij_formats_as_itself() {
        let law = Fgl::universal(6).unwrap();
        for i in 1..=6 {
            for j in i..=(7 - i) {
                assert_eq!(law.format_coeff(&law.a(i, j)), format!("a{i}{j}"));
            }
        }
    }

    #[test]
    fn lll_keeps_the_lattice_and_shortens() {
        let rows = [[1, 0, 0, 1345], [0, 1, 0, 35], [0, 0, 1, 154]];
        let b: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let r = lll(b.clone());
        let m = |v: &[Vec<BigInt>]| IntMatrix::from_rows(4, v.to_vec()).unwrap();
        assert!(crate::lattice::lattice_eq(&m(&b), &m(&r)));
        let longest = |v: &[Vec<BigInt>]| v.iter().map(|x| dot(x, x)).max().unwrap();
        assert!(longest(&r) < longest(&b));
    }

    #[test]
    fn every_a_ij_specializes_to_target_a_ij() {
        let law = Fgl::universal(4).unwrap();
        for target in [Fgl::multiplicative(4), Fgl::additive(4)] {
            for i in 1..=4 {
                for j in 1..=(5 - i) {
                    let img = law.specialize(&law.a(i, j), &target).unwrap();
                    assert_eq!(img, target.a(i, j), "a{i}{j} -> {}", target.kind());
                }
            }
        }
    }

    #[test]
    fn specialize_needs_enough_truncation() {
        let law = Fgl::universal(3).unwrap();
        let c = law.a(1, 3);
        let r = law.specialize(&c, &Fgl::multiplicative(2));
        assert!(matches!(r, Err(Error::TruncationTooSmall { .. })));
    }
}
