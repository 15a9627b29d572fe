//! Randomized property tests for the exact-arithmetic core and the
//! expression language: field axioms of the scalar field, q-combinatorial
//! identities, sparse-matrix algebra laws, and print/parse stability.

use oweb::matrix::SpMat;
use oweb::qcombinat::{qbinom, qfac, qint};
use oweb::weblang::{self, WebExpr};
use oweb::RatFun;
use proptest::prelude::*;

/// A Laurent polynomial in q with small support, as a [`RatFun`].
fn laurent() -> impl Strategy<Value = RatFun> {
    prop::collection::vec((-3i64..=3, -3i64..=3), 1..4).prop_map(|terms| {
        terms.iter().fold(RatFun::zero(), |acc, &(c, k)| {
            &acc + &(&RatFun::from_int(c) * &RatFun::q_pow(k))
        })
    })
}

/// A genuine rational function: quotient of two Laurent polynomials.
fn ratfun() -> impl Strategy<Value = RatFun> {
    (laurent(), laurent().prop_filter("nonzero denominator", |d| !d.is_zero()))
        .prop_map(|(n, d)| &n / &d)
}

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = SpMat<RatFun>> {
    prop::collection::vec(laurent(), rows * cols).prop_map(move |vals| {
        let dense: Vec<Vec<RatFun>> = vals.chunks(cols).map(|r| r.to_vec()).collect();
        SpMat::from_dense(&dense)
    })
}

fn expr() -> impl Strategy<Value = WebExpr> {
    let leaf = prop_oneof![
        (0usize..4).prop_map(weblang::id),
        ((1usize..4), (1usize..4)).prop_map(|(i, j)| weblang::merge(i, j)),
        ((1usize..4), (1usize..4)).prop_map(|(i, j)| weblang::split(i, j)),
        (1usize..4).prop_map(weblang::cup),
        (1usize..4).prop_map(weblang::cap),
        Just(weblang::cross_pos()),
        Just(weblang::cross_neg()),
    ];
    leaf.prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(weblang::tensor),
            prop::collection::vec(inner.clone(), 2..4).prop_map(weblang::compose),
            prop::collection::vec(inner.clone(), 2..4).prop_map(weblang::sum),
            (laurent().prop_filter("nonzero", |c| !c.is_zero()), inner)
                .prop_map(|(c, e)| weblang::scale(c, e)),
        ]
    })
}

proptest! {
    #[test]
    fn ratfun_display_parse_roundtrip(x in ratfun()) {
        let text = x.to_string();
        let back: RatFun = text.parse().unwrap();
        prop_assert_eq!(x, back);
    }

    #[test]
    fn ratfun_field_axioms(a in ratfun(), b in ratfun(), c in ratfun()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            prop_assert!((&a * &a.inv()).is_one());
        }
    }

    #[test]
    fn ratfun_bar_involution(a in ratfun(), b in ratfun()) {
        prop_assert_eq!(a.bar().bar(), a.clone());
        prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
    }

    #[test]
    fn qbinom_times_factorials_is_factorial(n in 0i64..9, k in 0i64..9) {
        if k <= n {
            let lhs = &qbinom(n, k, 1).unwrap() * &(&qfac(k as u64, 1) * &qfac((n - k) as u64, 1));
            prop_assert_eq!(lhs, qfac(n as u64, 1));
            prop_assert_eq!(qbinom(n, k, 1).unwrap(), qbinom(n, n - k, 1).unwrap());
        }
    }

    #[test]
    fn qint_at_one_is_n(n in -9i64..9) {
        use num_rational::BigRational;
        prop_assert_eq!(
            qint(n, 1).eval_at_one().unwrap(),
            BigRational::from_integer(n.into())
        );
    }

    #[test]
    fn matmul_transpose_contravariant(a in small_matrix(3, 2), b in small_matrix(2, 3)) {
        prop_assert_eq!(
            a.matmul(&b).transpose().to_dense(),
            b.transpose().matmul(&a.transpose()).to_dense()
        );
    }

    #[test]
    fn kron_mixed_product(
        a in small_matrix(2, 2),
        b in small_matrix(2, 3),
        c in small_matrix(2, 2),
        d in small_matrix(3, 2),
    ) {
        let lhs = a.kron(&b).matmul(&c.kron(&d));
        let rhs = a.matmul(&c).kron(&b.matmul(&d));
        prop_assert_eq!(lhs.to_dense(), rhs.to_dense());
    }

    #[test]
    fn webexpr_print_parse_roundtrip(e in expr()) {
        let text = weblang::print(&e);
        let back = weblang::parse(&text).unwrap();
        prop_assert_eq!(e, back);
    }
}
