use proptest::prelude::*;
use regquot::koszul::verify_identities;
use regquot::resolution::{build_k_ris, Element, KRIsComplex};
use regquot::{BigInt, Monomial, Polynomial, Scalar, ZSequence};

const N: usize = 3;

fn coefficient() -> impl Strategy<Value = Polynomial<BigInt>> {
    prop::collection::vec((prop::collection::vec(0u32..2, N), -3i64..=3), 0..3)
        .prop_map(|t| Polynomial::from_terms(N, t.into_iter().map(|(e, c)| (Monomial::new(e), BigInt::from_i64(c)))))
}

/// A random element of a fixed homological degree, as (label index, coefficient) picks.
fn element(k: &KRIsComplex<BigInt>, degree: usize, picks: &[(usize, Polynomial<BigInt>)]) -> Element<BigInt> {
    let module = k.complex.module(degree);
    let mut x = Element::zero(degree);
    if module.rank() == 0 {
        return x;
    }
    for (i, c) in picks {
        x.add_term(module.generator(i % module.rank()).clone(), c);
    }
    x
}

fn picks() -> impl Strategy<Value = Vec<(usize, Polynomial<BigInt>)>> {
    prop::collection::vec((0usize..64, coefficient()), 1..4)
}

fn leibniz_defect(k: &KRIsComplex<BigInt>, a: &Element<BigInt>, b: &Element<BigInt>) -> Element<BigInt> {
    let lhs = k.differential_of(&k.dga_multiply(a, b));
    let first = k.dga_multiply(&k.differential_of(a), b);
    let second = k.dga_multiply(a, &k.differential_of(b));
    let rhs = first.add(&if a.degree % 2 == 0 { second } else { second.neg() });
    lhs.add(&rhs.neg())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn leibniz_rule(s in 1usize..=3, da in 0usize..=N, db in 0usize..=N, pa in picks(), pb in picks()) {
        let k = build_k_ris(&ZSequence::variables(N).unwrap(), s).unwrap();
        let (a, b) = (element(&k, da, &pa), element(&k, db, &pb));
        let defect = leibniz_defect(&k, &a, &b);
        prop_assert!(defect.is_zero(), "a = {a}, b = {b}, defect = {defect}");
    }

    #[test]
    fn product_is_associative(s in 1usize..=3, d in prop::collection::vec(0usize..=N, 3), p in prop::collection::vec(picks(), 3)) {
        let k = build_k_ris(&ZSequence::variables(N).unwrap(), s).unwrap();
        let x: Vec<_> = (0..3).map(|i| element(&k, d[i], &p[i])).collect();
        let left = k.dga_multiply(&k.dga_multiply(&x[0], &x[1]), &x[2]);
        let right = k.dga_multiply(&x[0], &k.dga_multiply(&x[1], &x[2]));
        prop_assert_eq!(left.terms, right.terms);
    }

    #[test]
    fn product_is_graded_commutative(s in 1usize..=3, da in 0usize..=N, db in 0usize..=N, pa in picks(), pb in picks()) {
        let k = build_k_ris(&ZSequence::variables(N).unwrap(), s).unwrap();
        let (a, b) = (element(&k, da, &pa), element(&k, db, &pb));
        let ab = k.dga_multiply(&a, &b);
        let ba = k.dga_multiply(&b, &a);
        let expected = if da * db % 2 == 0 { ba } else { ba.neg() };
        prop_assert_eq!(ab.terms, expected.terms);
    }

    #[test]
    fn differential_squares_to_zero_on_elements(s in 1usize..=4, d in 0usize..=N, p in picks()) {
        let k = build_k_ris(&ZSequence::variables(N).unwrap(), s).unwrap();
        let x = element(&k, d, &p);
        prop_assert!(k.differential_of(&k.differential_of(&x)).is_zero());
    }

    #[test]
    fn augmentation_kills_boundaries(s in 1usize..=3, p in picks()) {
        let k = build_k_ris(&ZSequence::variables(N).unwrap(), s).unwrap();
        let x = element(&k, 1, &p);
        prop_assert!(k.augment(&k.differential_of(&x)).unwrap().is_zero());
    }
}

#[test]
fn identities_hold_for_small_tags() {
    for n in 1..=4 {
        let report = verify_identities(&ZSequence::variables(n).unwrap(), 4);
        assert!(report.all_ok(), "{:?}", report.first_failure());
        assert!(!report.checks.is_empty() || n == 1);
    }
    let report = verify_identities(&ZSequence::powers(&[2, 1, 3]).unwrap(), 4);
    assert!(report.all_ok());
}

#[test]
fn differential_squares_to_zero_symbolically() {
    for n in 1..=4 {
        for s in 1..=4 {
            let k = build_k_ris(&ZSequence::variables(n).unwrap(), s).unwrap();
            assert!(k.complex.verify().ok, "n = {n}, s = {s}");
        }
    }
    let seq = ZSequence::parse_explicit(3, &["x1^2 + x2*x3", "x2^2", "x3^3 - x1*x2^2"]).unwrap();
    for s in 1..=3 {
        assert!(build_k_ris(&seq, s).unwrap().complex.verify().ok);
    }
}
