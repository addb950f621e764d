use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cobordia::coeff::Coeff;
use cobordia::correspondence::Kunneth;
use cobordia::fgl::Fgl;
use cobordia::lattice::{hermite_normal_form, smith_invariant_factors, IntMatrix};
use cobordia::roots::RootDatum;
use cobordia::schubert::{Theory, TheoryOptions};
use cobordia::series::Series;

fn a2() -> &'static Theory {
    static T: OnceLock<Theory> = OnceLock::new();
    T.get_or_init(|| {
        let rd = Arc::new(RootDatum::named("SL3").unwrap());
        Theory::new(rd, Arc::new(Fgl::universal(3).unwrap()), &TheoryOptions::default()).unwrap()
    })
}

fn b2_mult() -> &'static Theory {
    static T: OnceLock<Theory> = OnceLock::new();
    T.get_or_init(|| {
        let rd = Arc::new(RootDatum::named("SP4").unwrap());
        Theory::new(rd, Arc::new(Fgl::multiplicative(4)), &TheoryOptions::default()).unwrap()
    })
}

fn same_to(th: &Theory, a: &Series, b: &Series) -> bool {
    let p = a.prec().min(b.prec());
    th.ring().truncate(a, p) == th.ring().truncate(b, p)
}

fn weight() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, 2).prop_filter("nonzero", |v| v.iter().any(|&c| c != 0))
}

/// A random polynomial in the two weight variables with small integer coefficients.
fn poly(th: &Theory, coeffs: &[i64]) -> Series {
    let r = th.ring();
    let mut acc = Series::zero(th.precision());
    let mut idx = 0;
    for total in 0..=3u32 {
        for i in 0..=total {
            let c = coeffs[idx % coeffs.len()];
            idx += 1;
            if c == 0 {
                continue;
            }
            let m = r.mul(&r.pow(&r.var(0), i).unwrap(), &r.pow(&r.var(1), total - i).unwrap()).unwrap();
            acc = acc.add(&m.scale(c as i128).unwrap()).unwrap();
        }
    }
    r.truncate(&acc, th.precision())
}

fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    for &(i, j, k) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        let mut e = IntMatrix::identity(n);
        e[(i, j)] = BigInt::from(k);
        u = e.mul(&u).unwrap();
    }
    u
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn x_of_sum_is_formal_sum(l in weight(), m in weight()) {
        let th = a2();
        let s: Vec<i64> = l.iter().zip(&m).map(|(a, b)| a + b).collect();
        prop_assume!(s.iter().any(|&c| c != 0));
        let lhs = th.x_of_weight(&s).unwrap();
        let rhs = th.fgl_sum(&th.x_of_weight(&l).unwrap(), &th.x_of_weight(&m).unwrap()).unwrap();
        prop_assert!(same_to(th, &lhs, &rhs));
    }

    #[test]
    fn weyl_substitution_is_an_action(v in 0usize..6, w in 0usize..6, l in weight()) {
        let th = a2();
        let u = th.x_of_weight(&l).unwrap();
        let twice = th.weyl_substitute(w, &th.weyl_substitute(v, &u).unwrap()).unwrap();
        let once = th.weyl_substitute(th.weyl().mul(w, v), &u).unwrap();
        prop_assert!(same_to(th, &twice, &once));
        let direct = th.x_of_weight(&th.weyl().act(th.weyl().mul(w, v), &l)).unwrap();
        prop_assert!(same_to(th, &once, &direct));
    }

    #[test]
    fn exact_divide_inverts_multiplication(coeffs in prop::collection::vec(-4i64..=4, 10), l in weight()) {
        let th = b2_mult();
        let q = poly(th, &coeffs);
        let d = th.x_of_weight(&l).unwrap();
        prop_assume!(d.ord() == 1);
        let u = th.ring().mul(&q, &d).unwrap();
        let back = th.ring().exact_divide(&u, &d).unwrap();
        prop_assert!(same_to(th, &back, &q));
        let again = th.ring().mul(&back, &d).unwrap();
        prop_assert!(same_to(th, &again, &u));
    }

    #[test]
    fn hermite_form_is_a_unimodular_transform(rows in 1usize..5, cols in 1usize..5, seed in prop::collection::vec(-9i64..=9, 16)) {
        let data: Vec<Vec<i64>> = (0..rows).map(|r| (0..cols).map(|c| seed[(r * cols + c) % 16]).collect()).collect();
        let m = IntMatrix::from_i64_rows(&data);
        let (h, u) = hermite_normal_form(&m);
        prop_assert_eq!(u.mul(&m).unwrap(), h.clone());
        prop_assert!(u.det().unwrap().abs().is_one());
        // pivots positive, entries above a pivot reduced
        let mut last = None;
        for r in 0..h.rows() {
            let Some(p) = (0..h.cols()).find(|&c| h[(r, c)] != BigInt::from(0)) else { continue };
            prop_assert!(last.is_none_or(|q| p > q));
            prop_assert!(h[(r, p)].is_positive());
            for above in 0..r {
                prop_assert!(!h[(above, p)].is_negative() && h[(above, p)] < h[(r, p)]);
            }
            last = Some(p);
        }
    }

    #[test]
    fn smith_factors_are_invariant(n in 1usize..5, seed in prop::collection::vec(-6i64..=6, 16),
                                   left in prop::collection::vec((0usize..5, 0usize..5, -3i64..=3), 6),
                                   right in prop::collection::vec((0usize..5, 0usize..5, -3i64..=3), 6)) {
        let data: Vec<Vec<i64>> = (0..n).map(|r| (0..n).map(|c| seed[(r * n + c) % 16]).collect()).collect();
        let m = IntMatrix::from_i64_rows(&data);
        let d = smith_invariant_factors(&m);
        let pmq = unimodular(n, &left).mul(&m).unwrap().mul(&unimodular(n, &right)).unwrap();
        prop_assert_eq!(&smith_invariant_factors(&pmq), &d);
        prop_assert_eq!(&smith_invariant_factors(&m.transpose()), &d);
        for w in d.windows(2) {
            prop_assert!((&w[1] % &w[0]) == BigInt::from(0));
        }
        if d.len() == n {
            let prod: BigInt = d.iter().product();
            prop_assert_eq!(prod, m.det().unwrap().abs());
        }
    }

    #[test]
    fn specialization_is_a_ring_map(d1 in 1u32..=2, d2 in 1u32..=2, a in prop::collection::vec(-5i128..=5, 3), b in prop::collection::vec(-5i128..=5, 3)) {
        let univ = Fgl::universal(4).unwrap();
        let combo = |d: u32, c: &[i128]| -> Coeff {
            univ.degree_basis(d).unwrap().iter().zip(c).fold(Coeff::zero(), |acc, (g, &k)| acc.add(&g.scale(k).unwrap()).unwrap())
        };
        let (x, y) = (combo(d1, &a), combo(d2, &b));
        for target in [Fgl::multiplicative(4), Fgl::additive(4)] {
            let sx = univ.specialize(&x, &target).unwrap();
            let sy = univ.specialize(&y, &target).unwrap();
            let xy = univ.ring().mul(&x, &y).unwrap();
            prop_assert_eq!(univ.specialize(&xy, &target).unwrap(), target.ring().mul(&sx, &sy).unwrap());
            if d1 == d2 {
                let s = x.add(&y).unwrap();
                prop_assert_eq!(univ.specialize(&s, &target).unwrap(), sx.add(&sy).unwrap());
            }
        }
    }

    #[test]
    fn composition_is_associative(seed in any::<u64>(), t1 in -1i32..=1, t2 in -1i32..=1, t3 in -1i32..=1) {
        let th = a2();
        let k = Kunneth::new(th);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = k.random(&mut rng, t1, 0, 0.3, 3).unwrap();
        let b = k.random(&mut rng, t2, 0, 0.3, 3).unwrap();
        let c = k.random(&mut rng, t3, 0, 0.3, 3).unwrap();
        let left = k.compose(&k.compose(&a, &b).unwrap(), &c).unwrap();
        let right = k.compose(&a, &k.compose(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left.twist, t1 + t2 + t3);
        prop_assert!(left == right);
    }
}
