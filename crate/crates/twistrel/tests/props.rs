//! Property tests: parser round-trips over random ASTs, crash-freedom on
//! fuzzed byte input, and the structural invariants of the word engine.
//!
//! Case counts follow the acceptance thresholds (1000 AST round-trips,
//! 10^4 fuzz inputs); seeds are fixed so runs are reproducible, and can be
//! varied with the standard PROPTEST_* environment knobs.

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use twistrel::dsl::{format_expr, parse_expr, TwistExpr};
use twistrel::milnor::{parse_poly, Poly};
use twistrel::surfaces::builtin;
use twistrel::words::Word;

// ---------------------------------------------------------------------------
// strategies
// ---------------------------------------------------------------------------

fn name_strategy() -> impl Strategy<Value = String> {
    "[A-Za-z][A-Za-z0-9_]{0,6}"
}

/// Normalized twist ASTs: flattened compositions, no unit powers.
fn expr_strategy() -> impl Strategy<Value = TwistExpr> {
    let leaf = name_strategy().prop_map(|n| TwistExpr::twist(&n));
    leaf.prop_recursive(3, 24, 5, |inner| {
        prop_oneof![
            (inner.clone(), -4i64..=4)
                .prop_filter("unit power is not normalized", |(_, n)| *n != 1)
                .prop_map(|(b, n)| TwistExpr::power(b, n)),
            prop::collection::vec(inner, 2..4).prop_map(TwistExpr::compose),
        ]
    })
}

fn poly_strategy() -> impl Strategy<Value = Poly> {
    // random monomial sets over up to 4 variables; rebuilt through the
    // parser so the canonical collected form is the reference
    prop::collection::vec(
        (
            prop::collection::vec(0u32..5, 1..4),
            prop_oneof![1i64..50, -50i64..-1],
        ),
        1..5,
    )
    .prop_filter_map("degenerate", |terms| {
        let mut text = String::new();
        for (i, (exps, coeff)) in terms.iter().enumerate() {
            if i > 0 {
                text.push_str(if *coeff >= 0 { " + " } else { " - " });
            } else if *coeff < 0 {
                text.push('-');
            }
            text.push_str(&coeff.abs().to_string());
            for (v, e) in exps.iter().enumerate() {
                if *e > 0 {
                    text.push_str(&format!("*z{v}^{e}"));
                }
            }
        }
        parse_poly(&text).ok().filter(|p| !p.monomials.is_empty())
    })
}

// ---------------------------------------------------------------------------
// dsl round-trip and fuzz
// ---------------------------------------------------------------------------

#[test]
fn expr_roundtrip_1000_random_asts() {
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases: 1000,
            ..Config::default()
        },
        TestRng::from_seed(RngAlgorithm::ChaCha, &[7; 32]),
    );
    runner
        .run(&expr_strategy(), |e| {
            let printed = format_expr(&e);
            let reparsed = parse_expr(&printed).map_err(|err| {
                TestCaseError::fail(format!("`{printed}` failed to reparse: {err}"))
            })?;
            prop_assert_eq!(&reparsed, &e, "round trip changed `{}`", printed);
            Ok(())
        })
        .unwrap();
}

#[test]
fn poly_roundtrip_random() {
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases: 1000,
            ..Config::default()
        },
        TestRng::from_seed(RngAlgorithm::ChaCha, &[11; 32]),
    );
    runner
        .run(&poly_strategy(), |p| {
            let printed = p.to_string();
            let reparsed = parse_poly(&printed).map_err(|err| {
                TestCaseError::fail(format!("`{printed}` failed to reparse: {err}"))
            })?;
            prop_assert_eq!(&reparsed, &p, "round trip changed `{}`", printed);
            Ok(())
        })
        .unwrap();
}

/// Neither parser may panic on arbitrary byte input.
#[test]
fn parsers_survive_fuzzed_input() {
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases: 10_000,
            max_shrink_iters: 0,
            ..Config::default()
        },
        TestRng::from_seed(RngAlgorithm::ChaCha, &[13; 32]),
    );
    runner
        .run(&prop::collection::vec(any::<u8>(), 0..64), |bytes| {
            let text = String::from_utf8_lossy(&bytes);
            let _ = parse_expr(&text);
            let _ = parse_poly(&text);
            let _ = twistrel::dsl::parse_script(&text);
            Ok(())
        })
        .unwrap();
}

/// Printable fuzz hits the parsers' deeper paths more often.
#[test]
fn parsers_survive_printable_fuzz() {
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases: 10_000,
            max_shrink_iters: 0,
            ..Config::default()
        },
        TestRng::from_seed(RngAlgorithm::ChaCha, &[17; 32]),
    );
    let alphabet = "ab1z2^*()' =#\n+-surfacletn";
    runner
        .run(
            &prop::collection::vec(0usize..alphabet.len(), 0..48),
            |idx| {
                let text: String = idx
                    .iter()
                    .map(|&i| alphabet.as_bytes()[i] as char)
                    .collect();
                let _ = parse_expr(&text);
                let _ = parse_poly(&text);
                let _ = twistrel::dsl::parse_script(&text);
                let _ = twistrel::derivation::parse_derivation(&text);
                Ok(())
            },
        )
        .unwrap();
}

// ---------------------------------------------------------------------------
// word engine invariants
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(Config { cases: 200, ..Config::default() })]

    /// reduce(uv) = reduce(reduce(u) reduce(v)) and endpoints survive
    /// every builtin twist.
    #[test]
    fn word_reduction_and_twists(seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let model = builtin("S_1_3").unwrap();
        let graph = model.graph().unwrap();
        // random composable word via a walk
        let mut w = Word::identity(0);
        for _ in 0..10 {
            let e = rng.gen_range(0..graph.edges().len());
            for inv in [false, true] {
                let letter = Word::generator(graph, e, inv);
                if w.target() == letter.source() {
                    w = w.compose(graph, &letter).unwrap();
                    break;
                }
            }
        }
        prop_assert_eq!(w.reduced(), w.clone());
        for c in &model.curves {
            let twist = &c.tables.as_ref().unwrap().twist;
            let image = twist.apply(graph, &w).unwrap();
            prop_assert_eq!(image.source(), w.source());
            prop_assert_eq!(image.target(), w.target());
            // functoriality against a split of w
            let inv = twist.inverted().apply(graph, &image).unwrap();
            prop_assert_eq!(inv, w.clone());
        }
    }
}
