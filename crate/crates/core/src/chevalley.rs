//! Independent Chow-ring oracle for `G/B` built from the Chevalley formula.
//!
//! Classes are integer vectors on Schubert classes `[X_w]`, indexed by
//! dimension `l(w)`. Divisors act by
//! `c₁(L_λ)·[X_w] = Σ ⟨λ, β∨⟩ [X_{w s_β}]` over positive roots `β` with
//! `l(w s_β) = l(w) − 1`. Products come from writing each Schubert class as a
//! rational polynomial in divisors applied to the fundamental class.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::roots::{RootDatum, WeylGroup};

pub struct ChowOracle<'a> {
    rd: &'a RootDatum,
    w: &'a WeylGroup,
    /// `terms[w]` lists `(k, w s_βk)` for the length-dropping reflections.
    terms: Vec<Vec<(usize, usize)>>,
}

impl<'a> ChowOracle<'a> {
    pub fn new(rd: &'a RootDatum, w: &'a WeylGroup) -> Self {
        let refl: Vec<usize> = (0..rd.n()).map(|k| w.reflection(rd, k)).collect();
        let terms = (0..w.len())
            .map(|x| {
                (0..rd.n())
                    .filter_map(|k| {
                        let y = w.mul(x, refl[k]);
                        (w.length(y) + 1 == w.length(x)).then_some((k, y))
                    })
                    .collect()
            })
            .collect();
        ChowOracle { rd, w, terms }
    }

    /// `c₁(L_λ) · f`.
    pub fn divisor_action(&self, lambda: &[i64], f: &[i64]) -> Vec<i64> {
        let mut out = vec![0; f.len()];
        for (x, &c) in f.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &(k, y) in &self.terms[x] {
                out[y] += c * self.rd.coroot_pairing(lambda, k);
            }
        }
        out
    }

    fn fundamental(&self, i: usize) -> Vec<i64> {
        (0..self.rd.rank()).map(|j| i64::from(i == j)).collect()
    }

    /// Fundamental class `[X_{w₀}]`.
    pub fn one(&self) -> Vec<i64> {
        let mut v = vec![0; self.w.len()];
        v[self.w.longest()] = 1;
        v
    }

    /// Each `[X_u]` written as `p_u(D₁,…,D_r)·1` with rational coefficients,
    /// returned as `(monomial exponents, coefficient)` lists.
    fn polynomial_representatives(&self) -> Result<Vec<Vec<(Vec<u32>, BigRational)>>> {
        let r = self.rd.rank();
        let n = self.rd.n();
        let mut reps = vec![Vec::new(); self.w.len()];
        for codim in 0..=n {
            let monos = monomials(r, codim as u32);
            let images: Vec<Vec<i64>> = monos
                .iter()
                .map(|m| {
                    let mut v = self.one();
                    for (i, &e) in m.iter().enumerate() {
                        for _ in 0..e {
                            v = self.divisor_action(&self.fundamental(i), &v);
                        }
                    }
                    v
                })
                .collect();
            let targets: Vec<usize> = self.w.of_length(n - codim).collect();
            for &u in &targets {
                // solve Σ y_m image_m = e_u on the coordinates of this length
                let a: Vec<Vec<BigRational>> = targets
                    .iter()
                    .map(|&t| images.iter().map(|img| BigRational::from_integer(BigInt::from(img[t]))).collect())
                    .collect();
                let b: Vec<BigRational> =
                    targets.iter().map(|&t| if t == u { BigRational::one() } else { BigRational::zero() }).collect();
                let y = solve_rational(a, b)
                    .ok_or_else(|| Error::Precondition(format!("divisors do not generate codimension {codim}")))?;
                reps[u] = monos.iter().cloned().zip(y).filter(|(_, c)| !c.is_zero()).collect();
            }
        }
        Ok(reps)
    }

    /// Full table: `table[u][v]` is the vector of `[X_u]·[X_v]` on Schubert classes.
    pub fn structure_constants(&self) -> Result<Vec<Vec<Vec<i64>>>> {
        let reps = self.polynomial_representatives()?;
        let nw = self.w.len();
        let mut table = vec![vec![Vec::new(); nw]; nw];
        for u in 0..nw {
            for v in 0..nw {
                let mut acc = vec![BigRational::zero(); nw];
                for (m, c) in &reps[u] {
                    let mut img = vec![0i64; nw];
                    img[v] = 1;
                    for (i, &e) in m.iter().enumerate() {
                        for _ in 0..e {
                            img = self.divisor_action(&self.fundamental(i), &img);
                        }
                    }
                    for (x, &val) in img.iter().enumerate() {
                        if val != 0 {
                            acc[x] += c * BigRational::from_integer(BigInt::from(val));
                        }
                    }
                }
                table[u][v] = acc
                    .into_iter()
                    .map(|q| {
                        if !q.is_integer() {
                            return Err(Error::NotIntegral(format!("Chow product coefficient {q}")));
                        }
                        q.to_integer().to_i64().ok_or(Error::Overflow("Chow structure constant"))
                    })
                    .collect::<Result<_>>()?;
            }
        }
        Ok(table)
    }
}

fn monomials(r: usize, d: u32) -> Vec<Vec<u32>> {
    if r == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for e in 0..=d {
        for mut rest in monomials(r - 1, d - e) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

/// Some solution of a consistent rational system, by Gaussian elimination.
fn solve_rational(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        b.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        b[r] *= &inv;
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
                let t = &f * &b[r];
                b[i] -= t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if b[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = b[i].clone();
    }
    debug_assert!(x.iter().all(|q| q.denom().is_positive()));
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{CartanType, LatticeChoice, WordOrder};

    #[test]
    fn p1_and_p1xp1() {
        let rd = RootDatum::new(CartanType::A1, LatticeChoice::SimplyConnected).unwrap();
        let w = WeylGroup::new(&rd, WordOrder::LexMin);
        let o = ChowOracle::new(&rd, &w);
        assert_eq!(o.divisor_action(&[1], &o.one()), vec![1, 0]);
        let t = o.structure_constants().unwrap();
        assert_eq!(t[1][1], vec![0, 1]);
        assert_eq!(t[0][1], vec![1, 0]);
        assert_eq!(t[0][0], vec![0, 0]);
    }

    #[test]
    fn a2_divisors_square_to_a_point_line() {
        // on SL3/B, D1² = [X_{s2 s1}]-type class of dimension 1 with coefficient 1
        let rd = RootDatum::new(CartanType::A2, LatticeChoice::SimplyConnected).unwrap();
        let w = WeylGroup::new(&rd, WordOrder::LexMin);
        let o = ChowOracle::new(&rd, &w);
        let t = o.structure_constants().unwrap();
        let d1 = w.from_word_string("21").unwrap();
        let d2 = w.from_word_string("12").unwrap();
        let s1 = w.from_word_string("1").unwrap();
        let s2 = w.from_word_string("2").unwrap();
        let mut want = vec![0; 6];
        want[s1] = 1;
        want[s2] = 1;
        assert_eq!(t[d1][d2], want);
        // triple intersection numbers of the flag variety: D1²D2 = D1D2² = 1, D1³ = 0
        let pt = |v: &Vec<i64>| v[0];
        let d1d1 = &t[d1][d1];
        let mut deg = 0;
        for (x, &c) in d1d1.iter().enumerate() {
            deg += c * pt(&t[x][d2]);
        }
        assert_eq!(deg, 1);
    }

    #[test]
    fn commutative_with_unit() {
        for ty in CartanType::ALL {
            let rd = RootDatum::new(ty, LatticeChoice::SimplyConnected).unwrap();
            let w = WeylGroup::new(&rd, WordOrder::LexMin);
            let o = ChowOracle::new(&rd, &w);
            let t = o.structure_constants().unwrap();
            let top = w.longest();
            for u in 0..w.len() {
                let mut e = vec![0; w.len()];
                e[u] = 1;
                assert_eq!(t[u][top], e);
                for v in 0..w.len() {
                    assert_eq!(t[u][v], t[v][u]);
                }
            }
        }
    }
}
