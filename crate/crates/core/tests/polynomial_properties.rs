use proptest::prelude::*;
use regquot::{parse_poly, BigInt, BigRational, Monomial, Polynomial, Scalar, F2, F3, F5};

const N: usize = 3;

fn poly_strategy<C: Scalar>() -> impl Strategy<Value = Polynomial<C>> {
    prop::collection::vec((prop::collection::vec(0u32..3, N), -6i64..=6), 0..6).prop_map(|terms| {
        Polynomial::from_terms(N, terms.into_iter().map(|(e, c)| (Monomial::new(e), C::from_i64(c))))
    })
}

fn check_ring_axioms<C: Scalar>(a: &Polynomial<C>, b: &Polynomial<C>, c: &Polynomial<C>) -> Result<(), TestCaseError> {
    let zero = Polynomial::zero(N);
    let one = Polynomial::one(N);
    prop_assert_eq!(&(a + b), &(b + a));
    prop_assert_eq!(&(a * b), &(b * a));
    prop_assert_eq!(&(&(a + b) + c), &(a + &(b + c)));
    prop_assert_eq!(&(&(a * b) * c), &(a * &(b * c)));
    prop_assert_eq!(&(a * &(b + c)), &(&(a * b) + &(a * c)));
    prop_assert_eq!(&(a + &zero), a);
    prop_assert_eq!(&(a * &one), a);
    prop_assert!((a + &(-a)).is_zero());
    prop_assert!((a * &zero).is_zero());
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn ring_axioms_integers(a in poly_strategy::<BigInt>(), b in poly_strategy::<BigInt>(), c in poly_strategy::<BigInt>()) {
        check_ring_axioms(&a, &b, &c)?;
    }

    #[test]
    fn ring_axioms_rationals(a in poly_strategy::<BigRational>(), b in poly_strategy::<BigRational>(), c in poly_strategy::<BigRational>()) {
        check_ring_axioms(&a, &b, &c)?;
    }

    #[test]
    fn ring_axioms_f2(a in poly_strategy::<F2>(), b in poly_strategy::<F2>(), c in poly_strategy::<F2>()) {
        check_ring_axioms(&a, &b, &c)?;
    }

    #[test]
    fn ring_axioms_f3(a in poly_strategy::<F3>(), b in poly_strategy::<F3>(), c in poly_strategy::<F3>()) {
        check_ring_axioms(&a, &b, &c)?;
    }

    #[test]
    fn ring_axioms_f5(a in poly_strategy::<F5>(), b in poly_strategy::<F5>(), c in poly_strategy::<F5>()) {
        check_ring_axioms(&a, &b, &c)?;
    }

    #[test]
    fn print_then_parse_is_identity(a in poly_strategy::<BigInt>(), p in poly_strategy::<F5>()) {
        prop_assert_eq!(parse_poly::<BigInt>(&a.to_string(), N).unwrap(), a);
        prop_assert_eq!(parse_poly::<F5>(&p.to_string(), N).unwrap(), p);
    }

    #[test]
    fn degree_is_additive(a in poly_strategy::<BigInt>(), b in poly_strategy::<BigInt>()) {
        let prod = &a * &b;
        match (a.total_degree(), b.total_degree()) {
            (Some(x), Some(y)) => prop_assert_eq!(prod.total_degree(), Some(x + y)),
            _ => prop_assert!(prod.is_zero()),
        }
    }

    #[test]
    fn reduction_to_prime_field_is_a_ring_map(a in poly_strategy::<BigInt>(), b in poly_strategy::<BigInt>()) {
        let down = |p: &Polynomial<BigInt>| p.map_coeffs(F3::from_bigint);
        prop_assert_eq!(down(&(&a * &b)), &down(&a) * &down(&b));
        prop_assert_eq!(down(&(&a + &b)), &down(&a) + &down(&b));
    }
}

#[test]
fn parser_precedence() {
    let p: Polynomial<BigInt> = parse_poly("x1 + 2*x2^2*x1 - (x1 - x3)^2", 3).unwrap();
    assert_eq!(p.to_string(), "2*x1*x2^2 - x1^2 + 2*x1*x3 - x3^2 + x1");
}

#[test]
fn parser_rejects_bad_input() {
    assert!(parse_poly::<BigInt>("x4", 3).is_err());
    assert!(parse_poly::<BigInt>("x1 +", 3).is_err());
    assert!(parse_poly::<BigInt>("x1 $ x2", 3).is_err());
}
