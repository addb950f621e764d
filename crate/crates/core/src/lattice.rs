//! Exact integer matrix algebra.
//!
//! Every graded slice the engine looks at (a filtration step, an ideal, a
//! quotient of `h(G/B)`) is a finitely generated abelian group handed over as a
//! list of integer row vectors.  This module supplies the handful of routines
//! needed to reason about such lattices: row-style Hermite normal form with its
//! unimodular transform, Smith invariant factors, membership with a
//! certificate and integer linear solving.
//!
//! All arithmetic is arbitrary precision.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense integer matrix stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    #[serde(with = "crate::decimal::vec")]
    entries: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.entries[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.entries[r * self.cols + c]
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {}x{} matrix", entries.len(), rows, cols)));
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            entries.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix { rows: rows.len(), cols, entries }
    }

    /// Builds a matrix from big-integer rows; all rows must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a matrix with {} columns",
                    row.len(),
                    cols
                )));
            }
            entries.extend(row);
        }
        Ok(IntMatrix { rows: n, cols, entries })
    }

    pub fn diagonal(values: &[i64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = BigInt::from(v);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!("vector of length {} against {} rows", v.len(), self.rows)));
        }
        let mut out = vec![BigInt::zero(); self.cols];
        for (r, coef) in v.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                let e = &self[(r, c)];
                if !e.is_zero() {
                    *o += coef * e;
                }
            }
        }
        Ok(out)
    }

    /// Determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * a[(n - 1, n - 1)].clone())
    }

    pub fn rank(&self) -> usize {
        let h = hermite_normal_form_only(self);
        (0..h.rows).filter(|&r| h.row(r).iter().any(|x| !x.is_zero())).count()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// `row[dst] = x*row[a] + y*row[b]`, `row[b] = z*row[a] + w*row[b]`
    /// applied simultaneously; `dst` is `a`.
    fn combine_rows(&mut self, a: usize, b: usize, x: &BigInt, y: &BigInt, z: &BigInt, w: &BigInt) {
        for c in 0..self.cols {
            let ra = &self.entries[a * self.cols + c];
            let rb = &self.entries[b * self.cols + c];
            if ra.is_zero() && rb.is_zero() {
                continue;
            }
            let na = x * ra + y * rb;
            let nb = z * ra + w * rb;
            self.entries[a * self.cols + c] = na;
            self.entries[b * self.cols + c] = nb;
        }
    }

    /// `row[dst] -= q * row[src]`.
    fn sub_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let s = &self.entries[src * self.cols + c];
            if !s.is_zero() {
                let v = q * s;
                self.entries[dst * self.cols + c] -= v;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let e = &mut self.entries[r * self.cols + c];
            *e = -std::mem::take(e);
        }
    }
}

fn hnf_core(m: &IntMatrix, mut u: Option<&mut IntMatrix>) -> IntMatrix {
    let mut a = m.clone();
    let rows = a.rows;
    let mut p = 0;
    for col in 0..a.cols {
        if p == rows {
            break;
        }
        let Some(first) = (p..rows).find(|&i| !a[(i, col)].is_zero()) else {
            continue;
        };
        a.swap_rows(p, first);
        if let Some(u) = u.as_deref_mut() {
            u.swap_rows(p, first);
        }
        for i in p + 1..rows {
            if a[(i, col)].is_zero() {
                continue;
            }
            let ap = a[(p, col)].clone();
            let ai = a[(i, col)].clone();
            let eg = ap.extended_gcd(&ai);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let pa = &ap / &g;
            let ia = &ai / &g;
            let z = -ia;
            a.combine_rows(p, i, &x, &y, &z, &pa);
            if let Some(u) = u.as_deref_mut() {
                u.combine_rows(p, i, &x, &y, &z, &pa);
            }
        }
        if a[(p, col)].is_negative() {
            a.negate_row(p);
            if let Some(u) = u.as_deref_mut() {
                u.negate_row(p);
            }
        }
        let piv = a[(p, col)].clone();
        for k in 0..p {
            let q = a[(k, col)].div_floor(&piv);
            if !q.is_zero() {
                a.sub_row_multiple(k, p, &q);
                if let Some(u) = u.as_deref_mut() {
                    u.sub_row_multiple(k, p, &q);
                }
            }
        }
        p += 1;
    }
    a
}

/// Row-style Hermite normal form `h = u·m` with `u` unimodular.
///
/// Pivots are positive, entries above a pivot lie in `[0, pivot)` and zero
/// rows are collected at the bottom.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut u = IntMatrix::identity(m.rows);
    let h = hnf_core(m, Some(&mut u));
    (h, u)
}

/// Hermite normal form without tracking the transform.
pub fn hermite_normal_form_only(m: &IntMatrix) -> IntMatrix {
    hnf_core(m, None)
}

/// Nonzero rows of the Hermite normal form: a canonical basis of the row lattice.
pub fn row_lattice_basis(m: &IntMatrix) -> IntMatrix {
    let h = hermite_normal_form_only(m);
    let keep: Vec<Vec<BigInt>> =
        (0..h.rows).filter(|&r| h.row(r).iter().any(|x| !x.is_zero())).map(|r| h.row(r).to_vec()).collect();
    IntMatrix::from_rows(m.cols, keep).expect("row lengths agree")
}

fn is_diagonal(a: &IntMatrix) -> bool {
    for r in 0..a.rows {
        for c in 0..a.cols {
            if r != c && !a[(r, c)].is_zero() {
                return false;
            }
        }
    }
    true
}

/// Invariant factors `d₁ | d₂ | …` of the Smith normal form, all positive.
///
/// The cokernel `ℤ^cols / rowspan(m)` is `⊕ ℤ/dᵢ ⊕ ℤ^(cols − len)`.
pub fn smith_invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = row_lattice_basis(m);
    while !is_diagonal(&a) {
        a = row_lattice_basis(&a.transpose());
    }
    let mut d: Vec<BigInt> = (0..a.rows.min(a.cols)).map(|i| a[(i, i)].abs()).filter(|x| !x.is_zero()).collect();
    // gcd/lcm sweep turns any diagonal into a divisibility chain.
    let n = d.len();
    for i in 0..n {
        for j in i + 1..n {
            let g = d[i].gcd(&d[j]);
            if g != d[i] {
                let l = &d[i] / &g * &d[j];
                d[i] = g;
                d[j] = l;
            }
        }
    }
    d
}

/// Isomorphism type of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    /// Torsion coefficients greater than one, in divisibility order.
    #[serde(with = "crate::decimal::vec")]
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup { torsion: Vec::new(), free_rank: 0 }
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }

    /// The group `ℤ^ambient / rowspan(relations)`.
    pub fn cokernel(ambient: usize, relations: &IntMatrix) -> Self {
        let d = smith_invariant_factors(relations);
        AbelianGroup { free_rank: ambient - d.len(), torsion: d.into_iter().filter(|x| !x.is_one()).collect() }
    }

    /// Direct sum, renormalised to invariant-factor form.
    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut all: Vec<i64> = Vec::new();
        let mut big = Vec::new();
        for t in self.torsion.iter().chain(&other.torsion) {
            match i64::try_from(t) {
                Ok(v) => all.push(v),
                Err(_) => big.push(t.clone()),
            }
        }
        let mut diag = IntMatrix::diagonal(&all);
        if !big.is_empty() {
            let n = all.len() + big.len();
            let mut m = IntMatrix::zeros(n, n);
            for (i, v) in all.iter().enumerate() {
                m[(i, i)] = BigInt::from(*v);
            }
            for (k, v) in big.into_iter().enumerate() {
                m[(all.len() + k, all.len() + k)] = v;
            }
            diag = m;
        }
        AbelianGroup {
            torsion: smith_invariant_factors(&diag).into_iter().filter(|x| !x.is_one()).collect(),
            free_rank: self.free_rank + other.free_rank,
        }
    }

    /// Order of the group when finite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.torsion.iter().map(|t| format!("Z/{t}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Outcome of a membership test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    /// Coefficients on the basis rows when `member` holds.
    pub certificate: Option<Vec<BigInt>>,
}

/// Decides whether `v` is an integer combination of the rows of `basis`.
pub fn lattice_member(v: &[BigInt], basis: &IntMatrix) -> Result<Membership> {
    if v.len() != basis.cols {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} against lattice in Z^{}",
            v.len(),
            basis.cols
        )));
    }
    let (h, u) = hermite_normal_form(basis);
    let mut rest = v.to_vec();
    let mut coeffs = vec![BigInt::zero(); h.rows];
    let mut r = 0;
    for col in 0..h.cols {
        if r == h.rows || rest.iter().all(Zero::is_zero) {
            break;
        }
        if h[(r, col)].is_zero() {
            if !rest[col].is_zero() {
                return Ok(Membership { member: false, certificate: None });
            }
            continue;
        }
        let (q, rem) = rest[col].div_rem(&h[(r, col)]);
        if !rem.is_zero() {
            return Ok(Membership { member: false, certificate: None });
        }
        if !q.is_zero() {
            for (c, x) in rest.iter_mut().enumerate().skip(col) {
                let e = &h[(r, c)];
                if !e.is_zero() {
                    *x -= &q * e;
                }
            }
            coeffs[r] = q;
        }
        r += 1;
    }
    if rest.iter().any(|x| !x.is_zero()) {
        return Ok(Membership { member: false, certificate: None });
    }
    // v = coeffs·h = coeffs·u·basis
    let cert = u.left_apply(&coeffs)?;
    Ok(Membership { member: true, certificate: Some(cert) })
}

/// Integer solution of `a·x = b`, if one exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {} equations",
            b.len(),
            a.rows
        )));
    }
    Ok(lattice_member(b, &a.transpose())?.certificate)
}

/// True when every row of `sub` lies in the row lattice of `sup`.
pub fn lattice_contains(sup: &IntMatrix, sub: &IntMatrix) -> Result<bool> {
    let h = row_lattice_basis(sup);
    for r in 0..sub.rows {
        if !lattice_member(sub.row(r), &h)?.member {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Equality of row lattices.
pub fn lattice_eq(a: &IntMatrix, b: &IntMatrix) -> bool {
    a.cols == b.cols && row_lattice_basis(a) == row_lattice_basis(b)
}

/// Stacks the rows of several matrices with equal column count.
pub fn stack(cols: usize, parts: &[&IntMatrix]) -> IntMatrix {
    let mut rows = Vec::new();
    for p in parts {
        assert_eq!(p.cols, cols, "column mismatch when stacking");
        rows.extend(p.row_vecs());
    }
    IntMatrix::from_rows(cols, rows).expect("consistent rows")
}

/// Keeps only the listed columns (in order).
pub fn project_columns(m: &IntMatrix, keep: &[usize]) -> IntMatrix {
    let rows = (0..m.rows).map(|r| keep.iter().map(|&c| m[(r, c)].clone()).collect()).collect();
    IntMatrix::from_rows(keep.len(), rows).expect("consistent rows")
}

/// Intersection of a row lattice with the coordinate subspace spanned by `keep`.
///
/// Computed by eliminating the complementary columns first: HNF with the
/// dropped columns ordered first leaves the rows that vanish on them.
pub fn intersect_coordinate_subspace(m: &IntMatrix, keep: &[usize]) -> IntMatrix {
    let dropped: Vec<usize> = (0..m.cols).filter(|c| !keep.contains(c)).collect();
    let order: Vec<usize> = dropped.iter().chain(keep.iter()).copied().collect();
    let permuted = project_columns(m, &order);
    let h = row_lattice_basis(&permuted);
    let rows = (0..h.rows)
        .filter(|&r| (0..dropped.len()).all(|c| h[(r, c)].is_zero()))
        .map(|r| {
            let mut full = vec![BigInt::zero(); m.cols];
            for (pos, &c) in order.iter().enumerate() {
                full[c] = h[(r, pos)].clone();
            }
            full
        })
        .collect();
    IntMatrix::from_rows(m.cols, rows).expect("consistent rows")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// gcd of all k×k minors, by brute force.
    fn determinantal_divisor(m: &IntMatrix, k: usize) -> BigInt {
        fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for last in (k - 1)..n {
                for mut c in combos(last, k - 1) {
                    c.push(last);
                    out.push(c);
                }
            }
            out
        }
        let mut g = BigInt::zero();
        for rs in combos(m.rows(), k) {
            for cs in combos(m.cols(), k) {
                let sub = IntMatrix::from_rows(
                    k,
                    rs.iter().map(|&r| cs.iter().map(|&c| m[(r, c)].clone()).collect()).collect(),
                )
                .unwrap();
                g = g.gcd(&sub.det().unwrap());
            }
        }
        g
    }

    fn smith_by_minors(m: &IntMatrix) -> Vec<BigInt> {
        let mut out = Vec::new();
        let mut prev = BigInt::one();
        for k in 1..=m.rows().min(m.cols()) {
            let d = determinantal_divisor(m, k);
            if d.is_zero() {
                break;
            }
            out.push(&d / &prev);
            prev = d;
        }
        out
    }

    #[test]
    fn hnf_identity() {
        let (h, u) = hermite_normal_form(&IntMatrix::identity(3));
        assert_eq!(h, IntMatrix::identity(3));
        assert_eq!(u, IntMatrix::identity(3));
    }

    #[test]
    fn hnf_preserves_determinant() {
        let m = IntMatrix::from_i64_rows(&[vec![2, 4], vec![6, 8]]);
        let (h, u) = hermite_normal_form(&m);
        assert_eq!(h.det().unwrap().abs(), BigInt::from(8));
        assert_eq!(u.mul(&m).unwrap(), h);
        assert_eq!(u.det().unwrap().abs(), BigInt::one());
    }

    #[test]
    fn hnf_zero_row_sinks() {
        let m = IntMatrix::from_i64_rows(&[vec![0, 0, 0], vec![1, 2, 3]]);
        let (h, _) = hermite_normal_form(&m);
        assert_eq!(h.row(0), &big(&[1, 2, 3])[..]);
        assert!(h.row(1).iter().all(Zero::is_zero));
    }

    #[test]
    fn smith_examples() {
        assert_eq!(smith_invariant_factors(&IntMatrix::diagonal(&[2, 6])), big(&[2, 6]));
        assert_eq!(smith_invariant_factors(&IntMatrix::diagonal(&[4, 6])), big(&[2, 12]));
        assert!(smith_invariant_factors(&IntMatrix::zeros(3, 2)).is_empty());
    }

    #[test]
    fn smith_matches_minor_oracle() {
        let cases = [
            vec![vec![4, 0], vec![0, 6]],
            vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]],
            vec![vec![3, 9, 6], vec![0, 3, 3]],
            vec![vec![1, 2], vec![3, 4], vec![5, 6]],
        ];
        for c in cases {
            let m = IntMatrix::from_i64_rows(&c);
            assert_eq!(smith_invariant_factors(&m), smith_by_minors(&m), "{m:?}");
        }
    }

    #[test]
    fn membership_examples() {
        let basis = IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 1]]);
        let zero = lattice_member(&big(&[0, 0]), &basis).unwrap();
        assert!(zero.member);
        assert!(zero.certificate.unwrap().iter().all(Zero::is_zero));
        assert!(lattice_member(&big(&[2, 0]), &basis).unwrap().member);
        assert!(!lattice_member(&big(&[1, 0]), &basis).unwrap().member);
        assert!(lattice_member(&big(&[1]), &basis).is_err());
    }

    #[test]
    fn membership_certificate_reconstructs() {
        let basis = IntMatrix::from_i64_rows(&[vec![3, 1, 4], vec![1, 5, 9], vec![2, 6, 5]]);
        // 7·r0 − 2·r1 + r2
        let v = big(&[21, 3, 15]);
        let m = lattice_member(&v, &basis).unwrap();
        assert!(m.member);
        assert_eq!(basis.left_apply(&m.certificate.unwrap()).unwrap(), v);
    }

    #[test]
    fn solve_examples() {
        let b = big(&[5, -7, 11]);
        assert_eq!(solve_integer(&IntMatrix::identity(3), &b).unwrap(), Some(b.clone()));
        let two = IntMatrix::from_i64_rows(&[vec![2]]);
        assert_eq!(solve_integer(&two, &big(&[3])).unwrap(), None);
        let a = IntMatrix::from_i64_rows(&[vec![2, 1], vec![1, 1]]);
        let x = solve_integer(&a, &big(&[3, 4])).unwrap().unwrap();
        let back = a.mul(&IntMatrix::from_rows(1, x.iter().map(|v| vec![v.clone()]).collect()).unwrap()).unwrap();
        assert_eq!(back.transpose().row(0), &big(&[3, 4])[..]);
        assert!(solve_integer(&a, &big(&[1])).is_err());
    }

    #[test]
    fn coordinate_intersection() {
        // lattice spanned by (1,1) and (0,2): the part with first coordinate 0 is (0,2)
        let m = IntMatrix::from_i64_rows(&[vec![1, 1], vec![0, 2]]);
        let i = intersect_coordinate_subspace(&m, &[1]);
        assert!(lattice_eq(&i, &IntMatrix::from_i64_rows(&[vec![0, 2]])));
    }

    #[test]
    fn abelian_group_display() {
        let g = AbelianGroup::cokernel(3, &IntMatrix::from_i64_rows(&[vec![2, 0, 0], vec![0, 1, 0]]));
        assert_eq!(g.to_string(), "Z/2 + Z");
    }
}
