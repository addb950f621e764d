//! Root data of rank at most three, Weyl groups, reduced words and Bruhat order.
//!
//! Weights are integer vectors in fundamental-weight coordinates. Row `i` of
//! the Cartan matrix is the simple root `αᵢ` in those coordinates, so
//! `sᵢ(λ) = λ − λᵢ·αᵢ`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{lattice_member, IntMatrix};

pub type Weight = Vec<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CartanType {
    A1,
    A1xA1,
    A2,
    B2,
    G2,
    A3,
}

impl CartanType {
    pub const ALL: [CartanType; 6] =
        [CartanType::A1, CartanType::A1xA1, CartanType::A2, CartanType::B2, CartanType::G2, CartanType::A3];

    pub fn cartan(self) -> Vec<Vec<i64>> {
        match self {
            CartanType::A1 => vec![vec![2]],
            CartanType::A1xA1 => vec![vec![2, 0], vec![0, 2]],
            CartanType::A2 => vec![vec![2, -1], vec![-1, 2]],
            // α₁ long, α₂ short
            CartanType::B2 => vec![vec![2, -1], vec![-2, 2]],
            // α₁ short, α₂ long
            CartanType::G2 => vec![vec![2, -1], vec![-3, 2]],
            CartanType::A3 => vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
        }
    }

    /// Degrees of the basic invariants.
    pub fn degrees(self) -> Vec<u32> {
        match self {
            CartanType::A1 => vec![2],
            CartanType::A1xA1 => vec![2, 2],
            CartanType::A2 => vec![2, 3],
            CartanType::B2 => vec![2, 4],
            CartanType::G2 => vec![2, 6],
            CartanType::A3 => vec![2, 3, 4],
        }
    }

    pub fn rank(self) -> usize {
        self.cartan().len()
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CartanType::A1 => "A1",
            CartanType::A1xA1 => "A1xA1",
            CartanType::A2 => "A2",
            CartanType::B2 => "B2",
            CartanType::G2 => "G2",
            CartanType::A3 => "A3",
        };
        f.write_str(s)
    }
}

impl FromStr for CartanType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A1" => Ok(CartanType::A1),
            "A1XA1" | "A1A1" | "D2" => Ok(CartanType::A1xA1),
            "A2" => Ok(CartanType::A2),
            "B2" | "C2" => Ok(CartanType::B2),
            "G2" => Ok(CartanType::G2),
            "A3" | "D3" => Ok(CartanType::A3),
            _ => Err(Error::Unsupported(format!("root system type {s}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LatticeChoice {
    SimplyConnected,
    Adjoint,
    /// The index-two lattice of `A1×A1` spanned by `ω₁+ω₂` and `2ω₂`.
    So4,
    /// Rows are basis vectors in fundamental-weight coordinates.
    Custom(Vec<Vec<i64>>),
}

impl fmt::Display for LatticeChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeChoice::SimplyConnected => write!(f, "sc"),
            LatticeChoice::Adjoint => write!(f, "adjoint"),
            LatticeChoice::So4 => write!(f, "so4"),
            LatticeChoice::Custom(rows) => {
                let parts: Vec<String> =
                    rows.iter().map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(",")).collect();
                write!(f, "custom[{}]", parts.join(";"))
            }
        }
    }
}

impl FromStr for LatticeChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sc" | "simply-connected" | "simply_connected" => Ok(LatticeChoice::SimplyConnected),
            "ad" | "adjoint" => Ok(LatticeChoice::Adjoint),
            "so4" => Ok(LatticeChoice::So4),
            other => Ok(LatticeChoice::Custom(parse_matrix(other)?)),
        }
    }
}

/// Parses `"1,1;0,2"` into rows.
pub fn parse_matrix(s: &str) -> Result<Vec<Vec<i64>>> {
    s.trim_matches(|c| c == '[' || c == ']')
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Unsupported(format!("lattice basis '{s}'"))))
                .collect()
        })
        .collect()
}

/// Named groups from the examples: `SO3`, `SO4`, `Spin3..6`, `PGL2..4`, `G2`.
pub fn named_group(name: &str) -> Result<(CartanType, LatticeChoice)> {
    let n = name.to_ascii_uppercase();
    let r = match n.as_str() {
        "G2" => (CartanType::G2, LatticeChoice::SimplyConnected),
        "SO3" => (CartanType::A1, LatticeChoice::Adjoint),
        "SO4" => (CartanType::A1xA1, LatticeChoice::So4),
        "SPIN3" | "SL2" => (CartanType::A1, LatticeChoice::SimplyConnected),
        "SPIN4" => (CartanType::A1xA1, LatticeChoice::SimplyConnected),
        "SPIN5" | "SP4" => (CartanType::B2, LatticeChoice::SimplyConnected),
        "SPIN6" | "SL4" => (CartanType::A3, LatticeChoice::SimplyConnected),
        "SL3" => (CartanType::A2, LatticeChoice::SimplyConnected),
        "PGL2" => (CartanType::A1, LatticeChoice::Adjoint),
        "PGL3" => (CartanType::A2, LatticeChoice::Adjoint),
        "PGL4" => (CartanType::A3, LatticeChoice::Adjoint),
        _ => return Err(Error::Unsupported(format!("group {name}"))),
    };
    Ok(r)
}

/// Root system plus character lattice.
#[derive(Clone, Debug)]
pub struct RootDatum {
    pub ty: CartanType,
    pub lattice_choice: LatticeChoice,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    lattice: Vec<Weight>,
    /// Positive roots in weight coordinates, simple roots first.
    positive: Vec<Weight>,
    /// Coefficients of each positive root on the simple roots.
    positive_simple: Vec<Vec<i64>>,
    /// `⟨λ, β∨⟩ = coroots[k] · λ`.
    coroots: Vec<Vec<i64>>,
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

impl RootDatum {
    pub fn new(ty: CartanType, lattice_choice: LatticeChoice) -> Result<Self> {
        let cartan = ty.cartan();
        let rank = cartan.len();
        let lattice: Vec<Weight> = match &lattice_choice {
            LatticeChoice::SimplyConnected => {
                (0..rank).map(|i| (0..rank).map(|j| i64::from(i == j)).collect()).collect()
            }
            LatticeChoice::Adjoint => cartan.clone(),
            LatticeChoice::So4 => {
                if ty != CartanType::A1xA1 {
                    return Err(Error::InvalidLattice("so4 lattice needs type A1xA1".into()));
                }
                vec![vec![1, 1], vec![0, 2]]
            }
            LatticeChoice::Custom(rows) => rows.clone(),
        };
        if lattice.len() != rank || lattice.iter().any(|r| r.len() != rank) {
            return Err(Error::InvalidLattice(format!("lattice basis must be {rank}x{rank}")));
        }
        let lm = IntMatrix::from_i64_rows(&lattice);
        if lm.rank() != rank {
            return Err(Error::InvalidLattice("lattice basis is degenerate".into()));
        }
        for (i, a) in cartan.iter().enumerate() {
            if !lattice_member(&to_big(a), &lm)?.member {
                return Err(Error::InvalidLattice(format!("simple root α{} is not in the lattice", i + 1)));
            }
        }
        for b in &lattice {
            for (i, a) in cartan.iter().enumerate() {
                let img: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - b[i] * y).collect();
                if !lattice_member(&to_big(&img), &lm)?.member {
                    return Err(Error::InvalidLattice(format!("lattice is not stable under s{}", i + 1)));
                }
            }
        }
        // positive roots by reflecting in simple-root coordinates
        let mut positive_simple: Vec<Vec<i64>> =
            (0..rank).map(|i| (0..rank).map(|j| i64::from(i == j)).collect()).collect();
        let mut k = 0;
        while k < positive_simple.len() {
            let c = positive_simple[k].clone();
            for i in 0..rank {
                let pair: i64 = (0..rank).map(|j| c[j] * cartan[j][i]).sum();
                let mut r = c.clone();
                r[i] -= pair;
                if r.iter().all(|&x| x >= 0) && r.iter().any(|&x| x > 0) && !positive_simple.contains(&r) {
                    positive_simple.push(r);
                }
            }
            k += 1;
        }
        let positive: Vec<Weight> = positive_simple
            .iter()
            .map(|c| (0..rank).map(|j| (0..rank).map(|i| c[i] * cartan[i][j]).sum()).collect())
            .collect();
        let mut rd =
            RootDatum { ty, lattice_choice, rank, cartan, lattice, positive, positive_simple, coroots: Vec::new() };
        rd.coroots = rd.compute_coroots();
        Ok(rd)
    }

    pub fn named(name: &str) -> Result<Self> {
        let (t, l) = named_group(name)?;
        Self::new(t, l)
    }

    /// Coroots found by carrying simple coroots along the reflections that produced each root.
    fn compute_coroots(&self) -> Vec<Vec<i64>> {
        let r = self.rank;
        // coroot of αᵢ is the i-th coordinate functional
        let mut out: Vec<Option<Vec<i64>>> = vec![None; self.positive.len()];
        let mut frontier: Vec<(Weight, Vec<i64>)> = Vec::new();
        for i in 0..r {
            let e: Vec<i64> = (0..r).map(|j| i64::from(i == j)).collect();
            out[i] = Some(e.clone());
            frontier.push((self.positive[i].clone(), e));
        }
        while let Some((root, co)) = frontier.pop() {
            for i in 0..r {
                let img = self.reflect(i, &root);
                // coroot of sᵢ(β) is sᵢ∨(β∨): f ↦ f − f(αᵢ)·eᵢ
                let f_ai = dot(&co, &self.cartan[i]);
                let mut nco = co.clone();
                nco[i] -= f_ai;
                for (k, p) in self.positive.iter().enumerate() {
                    let neg: Weight = p.iter().map(|x| -x).collect();
                    let (hit, sign) = if *p == img {
                        (true, 1)
                    } else if neg == img {
                        (true, -1)
                    } else {
                        (false, 0)
                    };
                    if hit && out[k].is_none() {
                        let c: Vec<i64> = nco.iter().map(|x| sign * x).collect();
                        out[k] = Some(c.clone());
                        frontier.push((p.clone(), c));
                    }
                }
            }
        }
        out.into_iter().map(|c| c.expect("every positive root is reached")).collect()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn simple_root(&self, i: usize) -> &Weight {
        &self.cartan[i]
    }

    pub fn positive_roots(&self) -> &[Weight] {
        &self.positive
    }

    pub fn positive_roots_simple_coords(&self) -> &[Vec<i64>] {
        &self.positive_simple
    }

    /// Number of positive roots.
    pub fn n(&self) -> usize {
        self.positive.len()
    }

    pub fn lattice_basis(&self) -> &[Weight] {
        &self.lattice
    }

    /// `⟨λ, β∨⟩` for the `k`-th positive root.
    pub fn coroot_pairing(&self, lambda: &[i64], k: usize) -> i64 {
        dot(&self.coroots[k], lambda)
    }

    pub fn coroot(&self, k: usize) -> &[i64] {
        &self.coroots[k]
    }

    pub fn reflect(&self, i: usize, lambda: &[i64]) -> Weight {
        lambda.iter().zip(&self.cartan[i]).map(|(x, a)| x - lambda[i] * a).collect()
    }

    /// Index of a root among the positive roots and its sign.
    pub fn root_index(&self, beta: &[i64]) -> Option<(usize, i64)> {
        for (k, p) in self.positive.iter().enumerate() {
            if p.as_slice() == beta {
                return Some((k, 1));
            }
            if p.iter().zip(beta).all(|(a, b)| *a == -b) {
                return Some((k, -1));
            }
        }
        None
    }

    pub fn in_lattice(&self, lambda: &[i64]) -> Result<bool> {
        Ok(lattice_member(&to_big(lambda), &IntMatrix::from_i64_rows(&self.lattice))?.member)
    }

    /// Index of the lattice in the weight lattice.
    pub fn lattice_index(&self) -> Result<BigInt> {
        use num_traits::Signed;
        Ok(IntMatrix::from_i64_rows(&self.lattice).det()?.abs())
    }

    pub fn label(&self) -> String {
        format!("{}/{}", self.ty, self.lattice_choice)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WordOrder {
    /// Lexicographically least shortest word.
    LexMin,
    /// Lexicographically greatest shortest word.
    LexMax,
}

impl FromStr for WordOrder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lexmin" | "min" => Ok(WordOrder::LexMin),
            "lexmax" | "max" => Ok(WordOrder::LexMax),
            _ => Err(Error::Unsupported(format!("word order {s}"))),
        }
    }
}

impl fmt::Display for WordOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WordOrder::LexMin => "lexmin",
            WordOrder::LexMax => "lexmax",
        })
    }
}

/// Weyl group elements are indexed `0..|W|` in order of length, identity first.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    rank: usize,
    order: WordOrder,
    /// Action on weight coordinates, row-major `rank × rank`.
    mats: Vec<Vec<i64>>,
    words: Vec<Vec<usize>>,
    lengths: Vec<usize>,
    /// `right[w][i]` = index of `w·sᵢ`.
    right: Vec<Vec<usize>>,
    left: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    /// Bit `v` of `below[w]` is set when `v ≤ w` in Bruhat order.
    below: Vec<Vec<u64>>,
    index: HashMap<Vec<i64>, usize>,
}

fn mat_mul(a: &[i64], b: &[i64], r: usize) -> Vec<i64> {
    let mut c = vec![0; r * r];
    for i in 0..r {
        for k in 0..r {
            let x = a[i * r + k];
            if x != 0 {
                for j in 0..r {
                    c[i * r + j] += x * b[k * r + j];
                }
            }
        }
    }
    c
}

impl WeylGroup {
    pub fn new(rd: &RootDatum, order: WordOrder) -> Self {
        let r = rd.rank();
        let refl: Vec<Vec<i64>> = (0..r)
            .map(|i| {
                let mut m = vec![0; r * r];
                for row in 0..r {
                    for col in 0..r {
                        // column `col` of sᵢ is sᵢ(ω_col)
                        let e: Vec<i64> = (0..r).map(|j| i64::from(j == col)).collect();
                        m[row * r + col] = rd.reflect(i, &e)[row];
                    }
                }
                m
            })
            .collect();
        let id: Vec<i64> = (0..r * r).map(|k| i64::from(k / r == k % r)).collect();
        let mut mats = vec![id.clone()];
        let mut words: Vec<Vec<usize>> = vec![Vec::new()];
        let mut lengths = vec![0];
        let mut index = HashMap::new();
        index.insert(id, 0usize);
        let letters: Vec<usize> = match order {
            WordOrder::LexMin => (0..r).collect(),
            WordOrder::LexMax => (0..r).rev().collect(),
        };
        let mut layer = vec![0usize];
        let mut len = 0;
        while !layer.is_empty() {
            len += 1;
            let mut next = Vec::new();
            for &w in &layer {
                for &i in &letters {
                    let m = mat_mul(&mats[w], &refl[i], r);
                    if index.contains_key(&m) {
                        continue;
                    }
                    let mut word = words[w].clone();
                    word.push(i);
                    index.insert(m.clone(), mats.len());
                    next.push(mats.len());
                    mats.push(m);
                    words.push(word);
                    lengths.push(len);
                }
            }
            layer = next;
        }
        let nw = mats.len();
        let right: Vec<Vec<usize>> =
            (0..nw).map(|w| (0..r).map(|i| index[&mat_mul(&mats[w], &refl[i], r)]).collect()).collect();
        let left: Vec<Vec<usize>> =
            (0..nw).map(|w| (0..r).map(|i| index[&mat_mul(&refl[i], &mats[w], r)]).collect()).collect();
        let inverse: Vec<usize> = (0..nw)
            .map(|w| {
                let mut v = 0;
                for &i in words[w].iter().rev() {
                    v = right[v][i];
                }
                v
            })
            .collect();
        let blocks = nw.div_ceil(64);
        let below: Vec<Vec<u64>> = (0..nw)
            .map(|w| {
                let mut set = vec![0u64; blocks];
                set[0] |= 1;
                for &i in &words[w] {
                    let mut add = set.clone();
                    for v in 0..nw {
                        if set[v / 64] >> (v % 64) & 1 == 1 {
                            let u = right[v][i];
                            add[u / 64] |= 1 << (u % 64);
                        }
                    }
                    set = add;
                }
                set
            })
            .collect();
        WeylGroup { rank: r, order, mats, words, lengths, right, left, inverse, below, index }
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn word_order(&self) -> WordOrder {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn longest(&self) -> usize {
        self.mats.len() - 1
    }

    pub fn length(&self, w: usize) -> usize {
        self.lengths[w]
    }

    pub fn word(&self, w: usize) -> &[usize] {
        &self.words[w]
    }

    /// Word with 1-based letters joined, e.g. `"212"`; the identity is `"e"`.
    pub fn word_string(&self, w: usize) -> String {
        if self.words[w].is_empty() {
            return "e".into();
        }
        self.words[w].iter().map(|i| (i + 1).to_string()).collect()
    }

    /// Element whose product of 1-based letters is `s`; any word, not necessarily reduced.
    pub fn from_word_string(&self, s: &str) -> Result<usize> {
        if s == "e" || s.is_empty() {
            return Ok(0);
        }
        let letters = parse_word(s, self.rank)?;
        Ok(self.from_word(&letters))
    }

    pub fn from_word(&self, word: &[usize]) -> usize {
        let mut w = 0;
        for &i in word {
            w = self.right[w][i];
        }
        w
    }

    pub fn mul_simple_right(&self, w: usize, i: usize) -> usize {
        self.right[w][i]
    }

    pub fn mul_simple_left(&self, i: usize, w: usize) -> usize {
        self.left[w][i]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let mut w = a;
        for &i in &self.words[b] {
            w = self.right[w][i];
        }
        w
    }

    pub fn inverse(&self, w: usize) -> usize {
        self.inverse[w]
    }

    pub fn matrix(&self, w: usize) -> &[i64] {
        &self.mats[w]
    }

    pub fn element_of_matrix(&self, m: &[i64]) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn act(&self, w: usize, lambda: &[i64]) -> Weight {
        let r = self.rank;
        let m = &self.mats[w];
        (0..r).map(|i| (0..r).map(|j| m[i * r + j] * lambda[j]).sum()).collect()
    }

    pub fn bruhat_leq(&self, v: usize, w: usize) -> bool {
        self.below[w][v / 64] >> (v % 64) & 1 == 1
    }

    /// Reflection `s_β` for the `k`-th positive root, as a group element.
    pub fn reflection(&self, rd: &RootDatum, k: usize) -> usize {
        let r = self.rank;
        let beta = &rd.positive_roots()[k];
        let mut m = vec![0; r * r];
        for col in 0..r {
            let e: Vec<i64> = (0..r).map(|j| i64::from(j == col)).collect();
            let p = rd.coroot_pairing(&e, k);
            for row in 0..r {
                m[row * r + col] = e[row] - p * beta[row];
            }
        }
        self.index[&m]
    }

    /// Number of positive roots sent to negative roots.
    pub fn inversions(&self, rd: &RootDatum, w: usize) -> usize {
        rd.positive_roots()
            .iter()
            .filter(|b| {
                let img = self.act(w, b);
                matches!(rd.root_index(&img), Some((_, -1)))
            })
            .count()
    }

    /// Elements of a given length.
    pub fn of_length(&self, l: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&w| self.lengths[w] == l)
    }
}

pub fn parse_word(s: &str, rank: usize) -> Result<Vec<usize>> {
    let parts: Vec<&str> = if s.contains(',') || s.contains(' ') {
        s.split([',', ' ']).filter(|p| !p.is_empty()).collect()
    } else {
        s.split("").filter(|p| !p.is_empty()).collect()
    };
    parts
        .iter()
        .map(|p| match p.parse::<usize>() {
            Ok(i) if (1..=rank).contains(&i) => Ok(i - 1),
            _ => Err(Error::Unsupported(format!("letter '{p}' in word '{s}'"))),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poincare_from_degrees(deg: &[u32]) -> Vec<u64> {
        let mut p = vec![1u64];
        for &d in deg {
            let mut q = vec![0u64; p.len() + d as usize - 1];
            for (i, &c) in p.iter().enumerate() {
                for j in 0..d as usize {
                    q[i + j] += c;
                }
            }
            p = q;
        }
        p
    }

    #[test]
    fn poincare_polynomials() {
        for ty in CartanType::ALL {
            let rd = RootDatum::new(ty, LatticeChoice::SimplyConnected).unwrap();
            let w = WeylGroup::new(&rd, WordOrder::LexMin);
            let mut counts = vec![0u64; rd.n() + 1];
            for x in 0..w.len() {
                counts[w.length(x)] += 1;
            }
            assert_eq!(counts, poincare_from_degrees(&ty.degrees()), "{ty}");
            assert_eq!(w.length(w.longest()), rd.n());
        }
    }

    #[test]
    fn g2_basics() {
        let rd = RootDatum::new(CartanType::G2, LatticeChoice::SimplyConnected).unwrap();
        assert_eq!(rd.n(), 6);
        let w = WeylGroup::new(&rd, WordOrder::LexMin);
        assert_eq!(w.len(), 12);
        let s1s2 = w.from_word(&[0, 1]);
        let mut p = 0;
        for _ in 0..6 {
            p = w.mul(p, s1s2);
        }
        assert_eq!(p, 0);
        let a = w.from_word_string("1").unwrap();
        let b = w.from_word_string("212").unwrap();
        let c = w.from_word_string("121").unwrap();
        assert!(w.bruhat_leq(a, b));
        assert!(!w.bruhat_leq(c, b));
    }

    #[test]
    fn words_multiply_back_and_lengths_are_inversions() {
        for ty in CartanType::ALL {
            let rd = RootDatum::new(ty, LatticeChoice::SimplyConnected).unwrap();
            for order in [WordOrder::LexMin, WordOrder::LexMax] {
                let w = WeylGroup::new(&rd, order);
                for x in 0..w.len() {
                    assert_eq!(w.from_word(w.word(x)), x);
                    assert_eq!(w.inversions(&rd, x), w.length(x));
                    assert_eq!(w.mul(x, w.inverse(x)), 0);
                }
            }
        }
    }

    #[test]
    fn lexmin_words_are_lexicographically_least() {
        // brute force: all words of length l(w) over the alphabet
        let rd = RootDatum::new(CartanType::A3, LatticeChoice::SimplyConnected).unwrap();
        let w = WeylGroup::new(&rd, WordOrder::LexMin);
        for x in 0..w.len() {
            let l = w.length(x);
            let mut best: Option<Vec<usize>> = None;
            let total = 3usize.pow(l as u32);
            for code in 0..total {
                let mut word = Vec::new();
                let mut c = code;
                for _ in 0..l {
                    word.push(c % 3);
                    c /= 3;
                }
                word.reverse();
                if w.from_word(&word) == x && best.as_ref().is_none_or(|b| word < *b) {
                    best = Some(word);
                }
            }
            assert_eq!(best.unwrap(), w.word(x));
        }
    }

    #[test]
    fn bruhat_matches_exhaustive_subwords() {
        let rd = RootDatum::new(CartanType::G2, LatticeChoice::SimplyConnected).unwrap();
        let w = WeylGroup::new(&rd, WordOrder::LexMin);
        for x in 0..w.len() {
            let word = w.word(x);
            let mut reach = vec![false; w.len()];
            for mask in 0..(1u32 << word.len()) {
                let sub: Vec<usize> =
                    word.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &i)| i).collect();
                reach[w.from_word(&sub)] = true;
            }
            for (v, &r) in reach.iter().enumerate() {
                assert_eq!(w.bruhat_leq(v, x), r);
            }
        }
    }

    #[test]
    fn lattices() {
        let a2 = RootDatum::new(CartanType::A2, LatticeChoice::Adjoint).unwrap();
        assert_eq!(a2.lattice_index().unwrap(), BigInt::from(3));
        let so4 = RootDatum::new(CartanType::A1xA1, LatticeChoice::So4).unwrap();
        assert_eq!(so4.lattice_index().unwrap(), BigInt::from(2));
        assert!(so4.in_lattice(&[1, 1]).unwrap());
        assert!(!so4.in_lattice(&[1, 0]).unwrap());
        let bad = RootDatum::new(CartanType::A1, LatticeChoice::Custom(vec![vec![4]]));
        assert!(matches!(bad, Err(Error::InvalidLattice(_))));
        let a1 = RootDatum::new(CartanType::A1, LatticeChoice::SimplyConnected).unwrap();
        assert_eq!(a1.positive_roots(), &[vec![2]]);
    }

    #[test]
    fn coroot_pairings_are_cartan_integers() {
        for ty in CartanType::ALL {
            let rd = RootDatum::new(ty, LatticeChoice::SimplyConnected).unwrap();
            let w = WeylGroup::new(&rd, WordOrder::LexMin);
            for k in 0..rd.n() {
                let beta = rd.positive_roots()[k].clone();
                assert_eq!(rd.coroot_pairing(&beta, k), 2);
                let s = w.reflection(&rd, k);
                let img = w.act(s, &beta);
                assert_eq!(img, beta.iter().map(|x| -x).collect::<Vec<_>>());
                assert_eq!(w.act(w.mul(s, s), &beta), beta);
            }
        }
    }
}
