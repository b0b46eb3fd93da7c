use std::cmp::Ordering;

use proptest::prelude::*;
use weilkit::poly::{Monomial, Polynomial, ReductionBasis};
use weilkit::Q;

const N: usize = 2;
const K: u32 = 5;

fn rat() -> impl Strategy<Value = Q> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| Q::new(n.into(), d.into()))
}

fn monomial(n: usize, max_exp: u32) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0..=max_exp, n).prop_map(Monomial::new)
}

fn poly(n: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((monomial(n, 3), rat()), 0..6).prop_map(move |t| Polynomial::from_terms(n, t))
}

/// Generators without constant term, so the ideal stays proper.
fn generators() -> impl Strategy<Value = Vec<Polynomial>> {
    prop::collection::vec(poly(N), 0..3).prop_map(|gs| {
        gs.into_iter()
            .map(|g| g.sub(&Polynomial::constant(N, g.constant_term())).unwrap())
            .filter(|g| !g.is_zero())
            .collect()
    })
}

proptest! {
    #[test]
    fn zero_coefficients_are_never_stored(p in poly(N)) {
        for (m, c) in p.terms() {
            prop_assert!(*c != Q::from_integer(0.into()));
            prop_assert_eq!(m.nvars(), N);
        }
    }

    #[test]
    fn degree_is_exponent_sum(m in monomial(3, 6)) {
        prop_assert_eq!(m.degree(), m.exponents().iter().sum::<u32>());
    }

    #[test]
    fn graded_lex_is_a_total_order(a in monomial(3, 3), b in monomial(3, 3), c in monomial(3, 3)) {
        prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
        if a.cmp(&b) == Ordering::Equal {
            prop_assert_eq!(&a, &b);
        }
        if a <= b && b <= c {
            prop_assert!(a <= c);
        }
        if a.degree() < b.degree() {
            prop_assert!(a < b);
        }
    }

    #[test]
    fn truncated_product_is_a_commutative_ring(p in poly(N), q in poly(N), r in poly(N)) {
        let pq = p.mul_trunc(&q, K).unwrap();
        prop_assert_eq!(&pq, &q.mul_trunc(&p, K).unwrap());
        prop_assert_eq!(pq.mul_trunc(&r, K).unwrap(), p.mul_trunc(&q.mul_trunc(&r, K).unwrap(), K).unwrap());
        prop_assert_eq!(
            p.mul_trunc(&q.add(&r).unwrap(), K).unwrap(),
            pq.add(&p.mul_trunc(&r, K).unwrap()).unwrap()
        );
        prop_assert_eq!(pq, p.mul(&q).unwrap().truncate(K));
    }

    #[test]
    fn normal_form_is_idempotent_and_linear(
        gens in generators(),
        p in poly(N),
        q in poly(N),
        a in rat(),
        b in rat(),
    ) {
        let basis = ReductionBasis::build(N, &gens, K);
        let np = basis.normal_form(&p);
        prop_assert_eq!(basis.normal_form(&np), np.clone());
        let combo = p.scale(&a).add(&q.scale(&b)).unwrap();
        let split = np.scale(&a).add(&basis.normal_form(&q).scale(&b)).unwrap();
        prop_assert_eq!(basis.normal_form(&combo), split);
    }

    #[test]
    fn generator_multiples_reduce_to_zero(gens in generators(), mono in monomial(N, 3)) {
        let basis = ReductionBasis::build(N, &gens, K);
        for g in &gens {
            let gm = g.mul_monomial(&mono).truncate(K);
            prop_assert!(basis.normal_form(&gm).is_zero());
            prop_assert!(basis.contains(&gm));
        }
    }

    #[test]
    fn reduction_rows_are_echelon(gens in generators()) {
        let basis = ReductionBasis::build(N, &gens, K);
        let pivots = basis.pivot_set();
        for (pivot, row) in basis.rows() {
            prop_assert_eq!(row.coeff(pivot), Q::from_integer(1.into()));
            for (m, _) in row.terms() {
                prop_assert!(m.degree() < K);
                prop_assert!(m == pivot || !pivots.contains(m));
            }
        }
    }
}
