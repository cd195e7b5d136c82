mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::*;
use lambda_taylor::corpus::term;
use lambda_taylor::lambda::{parse_lambda, size};
use lambda_taylor::resource::{nf_term, parse_resource, RTerm, Rig};
use lambda_taylor::taylor::{coeff, support_enum, SupportQuery};

fn agrees_with_expansion(m: &lambda_taylor::lambda::LambdaSum, k: usize) {
    let series = brute_expansion(m, k);
    let support = support_enum(m, SupportQuery::bags(k));
    let brute_support: BTreeSet<RTerm> = series.keys().cloned().collect();
    assert_eq!(support, brute_support, "support of {m} at bags ≤ {k}");
    for (t, c) in &series {
        assert_eq!(&coeff(m, t), c, "coefficient of {t} in {m}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn coefficients_match_brute_expansion(m in lambda_strategy(4)) {
        prop_assume!(size(&m) <= 8);
        agrees_with_expansion(&m, 3);
    }
}

#[test]
fn delta_identity_coefficients() {
    let m = term("DeltaI");
    let t = parse_resource("(\\x. x [x, x]) [\\x. x, \\x. x]").unwrap();
    // 1/2! for the inner bag, 1/2! for the outer one.
    assert_eq!(coeff(&m, &t).to_string(), "1/4");
    assert_eq!(brute_coeff(&m, &t).to_string(), "1/4");
}

#[test]
fn sum_arguments_count_orderings() {
    let m = parse_lambda("f (x + y)").unwrap();
    let t = parse_resource("f [x, y]").unwrap();
    // Sequences (x, y) and (y, x), over 2!.
    assert_eq!(coeff(&m, &t).to_string(), "1");
    let t = parse_resource("f [x, x, y]").unwrap();
    assert_eq!(coeff(&m, &t).to_string(), "1/2");
}

#[test]
fn nf_of_delta_identity_support() {
    let m = term("DeltaI");
    // Two occurrences of x against one argument: the term vanishes.
    let t = parse_resource("(\\x. x [x]) [\\x. x]").unwrap();
    assert_eq!(coeff(&m, &t).to_string(), "1");
    assert!(nf_term(&t, Rig::Rat).is_zero());
}
