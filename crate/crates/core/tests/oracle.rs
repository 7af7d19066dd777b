//! Groebner-based ideal operations against brute-force graded linear
//! algebra, and order/canonicality properties of the engine.

mod common;

use common::{agree_intersection, agree_membership, agree_quotient, agree_saturation, monomials};
use p4surf::groebner::groebner_ideal;
use p4surf::monomial::compare_grevlex;
use p4surf::{Monomial, Polynomial, Ring};
use proptest::prelude::*;
use std::cmp::Ordering;

const P: u32 = 7919;

/// A homogeneous polynomial of degree `d` with up to `t` terms.
fn poly(n: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = (u32, Vec<(usize, u32)>)> {
    (1..=max_deg).prop_flat_map(move |d| {
        let count = monomials(n, d).len();
        (Just(d), prop::collection::vec((0..count, 1..P), 1..=max_terms))
    })
}

fn build(ring: &Ring, form: &(u32, Vec<(usize, u32)>)) -> Polynomial {
    let mons = monomials(ring.nvars, form.0);
    let terms = form.1.iter().map(|&(i, c)| (Monomial::from_exponents(&mons[i]), c)).collect();
    ring.from_terms(terms).unwrap()
}

type Form = (u32, Vec<(usize, u32)>);

fn instance() -> impl Strategy<Value = (usize, Vec<Form>, Vec<Form>)> {
    (2usize..=3).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec(poly(n, 3, 4), 1..=3),
            prop::collection::vec(poly(n, 3, 3), 1..=2),
        )
    })
}

fn setup(inst: &(usize, Vec<Form>, Vec<Form>)) -> (Ring, Vec<Polynomial>, Vec<Polynomial>) {
    let ring = Ring::new(P, inst.0).unwrap();
    let i: Vec<_> = inst.1.iter().map(|s| build(&ring, s)).filter(|f| !f.is_zero()).collect();
    let j: Vec<_> = inst.2.iter().map(|s| build(&ring, s)).filter(|f| !f.is_zero()).collect();
    (ring, i, j)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn membership_matches_linear_algebra(inst in instance(), probe in poly(3, 5, 6), pick in 0usize..4) {
        let (ring, i, j) = setup(&inst);
        prop_assume!(!i.is_empty());
        // Either a random form, or a multiple of a generator.
        let n = monomials(ring.nvars, probe.0).len();
        let mut f = build(&ring, &(probe.0, probe.1.iter().map(|&(k, c)| (k % n, c)).collect()));
        if pick > 0 {
            if let Some(h) = j.first() {
                f = ring.mul(&i[pick % i.len()], h);
            }
        }
        prop_assert!(agree_membership(&ring, &i, &f));
    }

    #[test]
    fn intersection_matches_linear_algebra(inst in instance()) {
        let (ring, i, j) = setup(&inst);
        prop_assume!(!i.is_empty() && !j.is_empty());
        prop_assert!(agree_intersection(&ring, &i, &j));
    }

    #[test]
    fn quotient_matches_linear_algebra(inst in instance()) {
        let (ring, i, j) = setup(&inst);
        prop_assume!(!i.is_empty() && !j.is_empty());
        prop_assert!(agree_quotient(&ring, &i, &j));
    }

    #[test]
    fn saturation_matches_linear_algebra(inst in instance()) {
        let (ring, i, _) = setup(&inst);
        prop_assume!(!i.is_empty());
        prop_assert!(agree_saturation(&ring, &i));
    }
}

fn exps(n: usize, max: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..=max, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn grevlex_is_a_monomial_order(a in exps(5, 6), b in exps(5, 6), c in exps(5, 6)) {
        let ab = compare_grevlex(&a, &b).unwrap();
        let prod = |x: &[u32]| x.iter().zip(&c).map(|(u, v)| u + v).collect::<Vec<_>>();
        prop_assert_eq!(compare_grevlex(&prod(&a), &prod(&b)).unwrap(), ab);
        prop_assert_eq!(compare_grevlex(&b, &a).unwrap(), ab.reverse());
        let (ma, mb) = (Monomial::from_exponents(&a), Monomial::from_exponents(&b));
        prop_assert_eq!(ma.cmp_grevlex(mb), ab);
        prop_assert_eq!(ma.mul(Monomial::from_exponents(&c)).cmp_grevlex(mb.mul(Monomial::from_exponents(&c))), ab);
        prop_assert_ne!(compare_grevlex(&prod(&a), &a).unwrap(), Ordering::Less);
        // Degree first, then the smallest last-variable exponent wins.
        let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
        if da != db {
            prop_assert_eq!(ab, da.cmp(&db));
        } else if a != b {
            let k = (0..5).rev().find(|&k| a[k] != b[k]).unwrap();
            prop_assert_eq!(ab, b[k].cmp(&a[k]));
        }
    }

    #[test]
    fn reduced_basis_is_canonical(
        gens in prop::collection::vec(poly(3, 3, 3), 1..=3),
        perm in any::<prop::sample::Index>(),
        coefs in prop::collection::vec(1..P, 3),
    ) {
        let ring = Ring::new(P, 3).unwrap();
        let fs: Vec<_> = gens.iter().map(|s| build(&ring, s)).filter(|f| !f.is_zero()).collect();
        prop_assume!(!fs.is_empty());
        let base = groebner_ideal(&ring, &fs).unwrap().polynomials();
        // Rotate, rescale and add a redundant multiple of another generator.
        let mut other = fs.clone();
        other.rotate_left(perm.index(fs.len()));
        for (f, &c) in other.iter_mut().zip(&coefs) {
            *f = ring.scale(c, f);
        }
        if other.len() > 1 && other[0].degree() <= other[1].degree() {
            let shift = other[1].degree().unwrap() - other[0].degree().unwrap();
            let m = ring.monomial(Monomial::from_exponents(&[shift, 0, 0]), coefs[2]);
            other[1] = ring.add(&other[1], &ring.mul(&m, &other[0])).unwrap();
            prop_assume!(!other[1].is_zero());
        }
        prop_assert_eq!(groebner_ideal(&ring, &other).unwrap().polynomials(), base);
    }
}
