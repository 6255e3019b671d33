//! Step-by-step checker for twist-word rewriting proofs.
//!
//! A derivation script states an initial equation and a sequence of steps,
//! each justified by a declared rule. Purely syntactic rules (`expand_power`,
//! `free_cancel`) are checked by formal-word reduction in the free group on
//! twist symbols. `substitute` requires its cited lemma to pass the exact
//! engine and the result to be the previous equation with one occurrence
//! rewritten. `conjugate_both_sides` replaces `L = R` by `w' L w = w' R w`;
//! when the right side is left unchanged the checker verifies, with the
//! exact engine, that `R` commutes with the conjugator — centrality is never
//! assumed. On top of the per-step checks, `check_derivation` verifies the
//! initial and final equations themselves with the exact engine.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::dsl::{format_expr, parse_expr, Engine, ParseError, RelationStatement, TwistExpr};
use crate::relations::{expr_factors, verify_on, RelationError};
use crate::surfaces::{surface_by_name, SurfaceError, SurfaceModel};

#[derive(Debug, Error)]
pub enum DerivationError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Relation(#[from] RelationError),
}

/// Why a conjugation leaves the right-hand side unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Justification {
    /// The right side is (claimed) central; the checker verifies the one
    /// commutation instance it needs.
    CentralRhs,
    /// A commutation of the conjugator with the right side, verified here.
    VerifiedCommutation,
}

impl Justification {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "central_rhs" => Some(Justification::CentralRhs),
            "verified_commutation" => Some(Justification::VerifiedCommutation),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Rule {
    Substitute {
        lemma: Equation,
    },
    ExpandPower,
    FreeCancel,
    ConjugateBothSides {
        by: TwistExpr,
        justification: Justification,
    },
    RewriteRhsCentral {
        by: TwistExpr,
    },
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Substitute { lemma } => write!(f, "substitute({lemma})"),
            Rule::ExpandPower => write!(f, "expand_power"),
            Rule::FreeCancel => write!(f, "free_cancel"),
            Rule::ConjugateBothSides { by, justification } => write!(
                f,
                "conjugate_both_sides({}, {})",
                format_expr(by),
                match justification {
                    Justification::CentralRhs => "central_rhs",
                    Justification::VerifiedCommutation => "verified_commutation",
                }
            ),
            Rule::RewriteRhsCentral { by } => {
                write!(f, "rewrite_rhs_central({})", format_expr(by))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub lhs: TwistExpr,
    pub rhs: TwistExpr,
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} == {}",
            format_expr(&self.lhs),
            format_expr(&self.rhs)
        )
    }
}

#[derive(Debug, Clone)]
pub struct Step {
    pub rule: Rule,
    pub result: Equation,
    pub line: usize,
}

#[derive(Debug, Clone)]
pub struct DerivationScript {
    pub surface: String,
    pub initial: Equation,
    pub steps: Vec<Step>,
}

/// Verdict for one step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum StepOutcome {
    Ok,
    Violation { reason: String },
}

impl StepOutcome {
    pub fn is_ok(&self) -> bool {
        matches!(self, StepOutcome::Ok)
    }
}

#[derive(Debug, Clone)]
pub struct DerivationReport {
    pub surface: String,
    /// exact-engine verdicts for the initial and final equations
    pub initial_verified: bool,
    pub final_verified: bool,
    pub steps: Vec<(String, StepOutcome)>,
}

impl DerivationReport {
    pub fn all_ok(&self) -> bool {
        self.initial_verified && self.final_verified && self.steps.iter().all(|(_, o)| o.is_ok())
    }

    pub fn first_violation(&self) -> Option<usize> {
        self.steps.iter().position(|(_, o)| !o.is_ok())
    }
}

// ---------------------------------------------------------------------------
// formal words over twist symbols
// ---------------------------------------------------------------------------

/// Reduced word in the free group on twist names.
fn formal_word(e: &TwistExpr) -> Vec<(String, i64)> {
    reduce_formal(expr_factors(e))
}

fn reduce_formal(letters: Vec<(String, i64)>) -> Vec<(String, i64)> {
    let mut stack: Vec<(String, i64)> = Vec::new();
    for l in letters {
        match stack.last() {
            Some(top) if top.0 == l.0 && top.1 == -l.1 => {
                stack.pop();
            }
            _ => stack.push(l),
        }
    }
    stack
}

fn invert_formal(w: &[(String, i64)]) -> Vec<(String, i64)> {
    w.iter().rev().map(|(n, s)| (n.clone(), -s)).collect()
}

fn conjugated_formal(w: &[(String, i64)], by: &TwistExpr) -> Vec<(String, i64)> {
    let c = formal_word(by);
    let mut out = invert_formal(&c);
    out.extend_from_slice(w);
    out.extend(c);
    reduce_formal(out)
}

fn formal_equal(a: &Equation, b: &Equation) -> bool {
    formal_word(&a.lhs) == formal_word(&b.lhs) && formal_word(&a.rhs) == formal_word(&b.rhs)
}

// ---------------------------------------------------------------------------
// step checking
// ---------------------------------------------------------------------------

fn exact_holds(
    model: &SurfaceModel,
    lhs: &TwistExpr,
    rhs: &TwistExpr,
) -> Result<bool, RelationError> {
    let stmt = RelationStatement {
        surface: model.name.clone(),
        lhs: lhs.clone(),
        rhs: rhs.clone(),
        engine: Engine::Exact,
    };
    Ok(verify_on(&stmt, model)?.exact.passed())
}

/// All single-subtree replacements of `from` by `to` within `e`.
fn single_replacements(e: &TwistExpr, from: &TwistExpr, to: &TwistExpr) -> Vec<TwistExpr> {
    let mut out = Vec::new();
    if e == from {
        out.push(to.clone());
    }
    match e {
        TwistExpr::Twist(..) => {}
        TwistExpr::Compose(parts) => {
            for (i, p) in parts.iter().enumerate() {
                for r in single_replacements(p, from, to) {
                    let mut new_parts = parts.clone();
                    new_parts[i] = r;
                    out.push(TwistExpr::compose(new_parts));
                }
            }
        }
        TwistExpr::Power(base, n) => {
            for r in single_replacements(base, from, to) {
                out.push(TwistExpr::power(r, *n));
            }
        }
    }
    out
}

/// Check one step against the previous equation. Each check is local.
pub fn check_step(
    model: &SurfaceModel,
    prev: &Equation,
    step: &Step,
) -> Result<StepOutcome, RelationError> {
    let violation = |reason: String| Ok(StepOutcome::Violation { reason });
    match &step.rule {
        Rule::Substitute { lemma } => {
            if !exact_holds(model, &lemma.lhs, &lemma.rhs)? {
                return violation(format!("cited lemma {lemma} fails the exact engine"));
            }
            // the result must be prev with one occurrence rewritten, in
            // either direction, on either side
            for (from, to) in [(&lemma.lhs, &lemma.rhs), (&lemma.rhs, &lemma.lhs)] {
                for lhs_candidate in single_replacements(&prev.lhs, from, to) {
                    let cand = Equation {
                        lhs: lhs_candidate,
                        rhs: prev.rhs.clone(),
                    };
                    if formal_equal(&cand, &step.result) {
                        return Ok(StepOutcome::Ok);
                    }
                }
                for rhs_candidate in single_replacements(&prev.rhs, from, to) {
                    let cand = Equation {
                        lhs: prev.lhs.clone(),
                        rhs: rhs_candidate,
                    };
                    if formal_equal(&cand, &step.result) {
                        return Ok(StepOutcome::Ok);
                    }
                }
            }
            violation(format!(
                "result is not {prev} with one occurrence of the lemma rewritten"
            ))
        }
        Rule::ExpandPower | Rule::FreeCancel => {
            if formal_equal(prev, &step.result) {
                Ok(StepOutcome::Ok)
            } else {
                violation(format!(
                    "formal words differ: lhs {} vs {}, rhs {} vs {}",
                    render_formal(&formal_word(&prev.lhs)),
                    render_formal(&formal_word(&step.result.lhs)),
                    render_formal(&formal_word(&prev.rhs)),
                    render_formal(&formal_word(&step.result.rhs)),
                ))
            }
        }
        Rule::ConjugateBothSides {
            by,
            justification: _,
        } => {
            let want_lhs = conjugated_formal(&formal_word(&prev.lhs), by);
            if formal_word(&step.result.lhs) != want_lhs {
                return violation(format!(
                    "left side is not the conjugate: expected {}",
                    render_formal(&want_lhs)
                ));
            }
            let conj_rhs = conjugated_formal(&formal_word(&prev.rhs), by);
            let result_rhs = formal_word(&step.result.rhs);
            if result_rhs == conj_rhs {
                return Ok(StepOutcome::Ok);
            }
            if result_rhs == formal_word(&prev.rhs) {
                // unchanged right side: verify the commutation it relies on
                let comm_lhs = TwistExpr::compose(vec![prev.rhs.clone(), by.clone()]);
                let comm_rhs = TwistExpr::compose(vec![by.clone(), prev.rhs.clone()]);
                if exact_holds(model, &comm_lhs, &comm_rhs)? {
                    return Ok(StepOutcome::Ok);
                }
                return violation(format!(
                    "right side {} does not commute with the conjugator {}",
                    format_expr(&prev.rhs),
                    format_expr(by)
                ));
            }
            violation("right side is neither conjugated nor fixed".to_string())
        }
        Rule::RewriteRhsCentral { by } => {
            if formal_word(&step.result.lhs) != formal_word(&prev.lhs) {
                return violation("left side must be unchanged".to_string());
            }
            let back = conjugated_formal(&formal_word(&step.result.rhs), by);
            if back != formal_word(&prev.rhs) {
                return violation(
                    "previous right side is not the conjugate of the new one".to_string(),
                );
            }
            let comm_lhs = TwistExpr::compose(vec![step.result.rhs.clone(), by.clone()]);
            let comm_rhs = TwistExpr::compose(vec![by.clone(), step.result.rhs.clone()]);
            if exact_holds(model, &comm_lhs, &comm_rhs)? {
                Ok(StepOutcome::Ok)
            } else {
                violation(format!(
                    "new right side does not commute with {}",
                    format_expr(by)
                ))
            }
        }
    }
}

fn render_formal(w: &[(String, i64)]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|(n, s)| if *s > 0 { n.clone() } else { format!("{n}'") })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Check a whole derivation: every step in order, and the initial and final
/// equations themselves against the exact engine.
pub fn check_derivation(script: &DerivationScript) -> Result<DerivationReport, DerivationError> {
    let model = surface_by_name(&script.surface)?;
    let initial_verified = exact_holds(&model, &script.initial.lhs, &script.initial.rhs)?;
    let last = script
        .steps
        .last()
        .map(|s| &s.result)
        .unwrap_or(&script.initial);
    let final_verified = exact_holds(&model, &last.lhs, &last.rhs)?;

    let mut steps = Vec::new();
    let mut prev = &script.initial;
    for step in &script.steps {
        let outcome = check_step(&model, prev, step)?;
        steps.push((format!("{}: {}", step.rule, step.result), outcome));
        prev = &step.result;
    }
    Ok(DerivationReport {
        surface: script.surface.clone(),
        initial_verified,
        final_verified,
        steps,
    })
}

// ---------------------------------------------------------------------------
// script format
// ---------------------------------------------------------------------------

/// Parse a derivation script: `surface`, `initial <eq>`, then
/// `step <rule>(<args>): <eq>` lines; `#` comments.
pub fn parse_derivation(text: &str) -> Result<DerivationScript, DerivationError> {
    let mut surface: Option<String> = None;
    let mut initial: Option<Equation> = None;
    let mut steps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw.find('#') {
            Some(h) => &raw[..h],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let malformed = |msg: &str| DerivationError::Malformed {
            line: line_no,
            msg: msg.to_string(),
        };
        if let Some(rest) = line.strip_prefix("surface ") {
            surface = Some(rest.trim().to_string());
        } else if let Some(rest) = line.strip_prefix("initial ") {
            initial = Some(parse_equation(rest, line_no)?);
        } else if let Some(rest) = line.strip_prefix("step ") {
            let (head, eq_text) = rest
                .split_once(':')
                .ok_or_else(|| malformed("expected `step <rule>(<args>): <equation>`"))?;
            let head = head.trim();
            let rule = parse_rule(head, line_no)?;
            let result = parse_equation(eq_text, line_no)?;
            steps.push(Step {
                rule,
                result,
                line: line_no,
            });
        } else {
            return Err(malformed("unknown directive"));
        }
    }
    let surface = surface.ok_or(DerivationError::Malformed {
        line: 0,
        msg: "missing surface directive".into(),
    })?;
    let initial = initial.ok_or(DerivationError::Malformed {
        line: 0,
        msg: "missing initial equation".into(),
    })?;
    Ok(DerivationScript {
        surface,
        initial,
        steps,
    })
}

fn parse_equation(text: &str, line: usize) -> Result<Equation, DerivationError> {
    let (l, r) = text.split_once("==").ok_or(DerivationError::Malformed {
        line,
        msg: "expected `<expr> == <expr>`".into(),
    })?;
    Ok(Equation {
        lhs: parse_expr(l)?,
        rhs: parse_expr(r)?,
    })
}

fn parse_rule(head: &str, line: usize) -> Result<Rule, DerivationError> {
    let malformed = |msg: String| DerivationError::Malformed { line, msg };
    let (name, args) = match head.find('(') {
        Some(idx) => {
            let name = &head[..idx];
            let rest = &head[idx + 1..];
            let close = rest
                .rfind(')')
                .ok_or_else(|| malformed("missing `)` in rule arguments".into()))?;
            (name.trim(), Some(rest[..close].trim()))
        }
        None => (head, None),
    };
    match name {
        "expand_power" => Ok(Rule::ExpandPower),
        "free_cancel" => Ok(Rule::FreeCancel),
        "substitute" => {
            let args = args.ok_or_else(|| malformed("substitute needs a lemma equation".into()))?;
            let lemma = parse_equation(args, line)?;
            Ok(Rule::Substitute { lemma })
        }
        "conjugate_both_sides" => {
            let args =
                args.ok_or_else(|| malformed("conjugate_both_sides needs arguments".into()))?;
            let (by_text, just_text) = args
                .rsplit_once(',')
                .ok_or_else(|| malformed("expected `(expr, justification)`".into()))?;
            let by = parse_expr(by_text)?;
            let justification = Justification::parse(just_text.trim()).ok_or_else(|| {
                malformed(format!("unknown justification `{}`", just_text.trim()))
            })?;
            Ok(Rule::ConjugateBothSides { by, justification })
        }
        "rewrite_rhs_central" => {
            let args =
                args.ok_or_else(|| malformed("rewrite_rhs_central needs the conjugator".into()))?;
            Ok(Rule::RewriteRhsCentral {
                by: parse_expr(args)?,
            })
        }
        other => Err(malformed(format!("unknown rule `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(l: &str, r: &str) -> Equation {
        Equation {
            lhs: parse_expr(l).unwrap(),
            rhs: parse_expr(r).unwrap(),
        }
    }

    fn step(rule: Rule, l: &str, r: &str) -> Step {
        Step {
            rule,
            result: eq(l, r),
            line: 0,
        }
    }

    #[test]
    fn free_cancel_accepts_formal_cancellation() {
        let model = surface_by_name("S_1_3").unwrap();
        let prev = eq("Dag' * Day * Dag * Dag' * Day * Dag", "Db1");
        let s = step(Rule::FreeCancel, "Dag' * Day * Day * Dag", "Db1");
        assert!(check_step(&model, &prev, &s).unwrap().is_ok());
        // a forged cancellation is rejected with both words printed
        let bad = step(Rule::FreeCancel, "Dag' * Day * Dag", "Db1");
        match check_step(&model, &prev, &bad).unwrap() {
            StepOutcome::Violation { reason } => assert!(reason.contains("formal words")),
            _ => panic!("forged cancellation accepted"),
        }
    }

    #[test]
    fn expand_power_is_formal() {
        let model = surface_by_name("S_1_1").unwrap();
        let prev = eq("(Da * Db)^2", "Dd");
        let s = step(Rule::ExpandPower, "Da * Db * Da * Db", "Dd");
        assert!(check_step(&model, &prev, &s).unwrap().is_ok());
        // contraction direction is the same formal check
        let back = step(Rule::ExpandPower, "(Da * Db)^2", "Dd");
        assert!(check_step(&model, &s.result, &back).unwrap().is_ok());
    }

    #[test]
    fn substitute_requires_true_lemma() {
        let model = surface_by_name("S_1_3").unwrap();
        let prev = eq("(Dar * Dap * Dab * Dag)^3", "Db1 * Db2 * Db3");
        let good = Rule::Substitute {
            lemma: eq("Dar", "Dag' * Day * Dag"),
        };
        let s = step(
            good,
            "((Dag' * Day * Dag) * Dap * Dab * Dag)^3",
            "Db1 * Db2 * Db3",
        );
        assert!(check_step(&model, &prev, &s).unwrap().is_ok());

        let false_lemma = Rule::Substitute {
            lemma: eq("Dar", "Day"),
        };
        let s2 = step(false_lemma, "(Day * Dap * Dab * Dag)^3", "Db1 * Db2 * Db3");
        match check_step(&model, &prev, &s2).unwrap() {
            StepOutcome::Violation { reason } => assert!(reason.contains("lemma")),
            _ => panic!("false lemma accepted"),
        }
    }

    #[test]
    fn conjugation_with_central_rhs() {
        let model = surface_by_name("S_1_3").unwrap();
        let prev = eq("Day * Dag * Dap * Dab", "Db1 * Db2 * Db3");
        let s = step(
            Rule::ConjugateBothSides {
                by: parse_expr("Day").unwrap(),
                justification: Justification::CentralRhs,
            },
            "Dag * Dap * Dab * Day",
            "Db1 * Db2 * Db3",
        );
        assert!(check_step(&model, &prev, &s).unwrap().is_ok());
        // conjugating by a non-commuting word is rejected
        let prev2 = eq("Dag", "Day");
        let bad = step(
            Rule::ConjugateBothSides {
                by: parse_expr("Dag").unwrap(),
                justification: Justification::CentralRhs,
            },
            "Dag",
            "Day",
        );
        match check_step(&model, &prev2, &bad).unwrap() {
            StepOutcome::Violation { reason } => assert!(reason.contains("commute")),
            _ => panic!("non-central conjugation accepted"),
        }
    }

    #[test]
    fn empty_step_list_checks_endpoints() {
        let script = DerivationScript {
            surface: "S_1_1".into(),
            initial: eq("(Da * Db)^6", "Dd"),
            steps: vec![],
        };
        let report = check_derivation(&script).unwrap();
        assert!(report.all_ok());
        let bad = DerivationScript {
            surface: "S_1_1".into(),
            initial: eq("(Da * Db)^5", "Dd"),
            steps: vec![],
        };
        assert!(!check_derivation(&bad).unwrap().all_ok());
    }

    #[test]
    fn independent_steps_commute() {
        // permuting two steps that touch disjoint subwords does not change
        // the verdict
        let model = surface_by_name("S_1_1").unwrap();
        let initial = eq("Da * Da' * Db", "Db * Dd * Dd'");
        let cancel_lhs = |rhs: &str| step(Rule::FreeCancel, "Db", rhs);
        let cancel_rhs_first = step(Rule::FreeCancel, "Da * Da' * Db", "Db");
        // order 1: reduce the left side, then the right
        let mid = cancel_lhs("Db * Dd * Dd'");
        assert!(check_step(&model, &initial, &mid).unwrap().is_ok());
        let last = step(Rule::FreeCancel, "Db", "Db");
        assert!(check_step(&model, &mid.result, &last).unwrap().is_ok());
        // order 2: reduce the right side, then the left
        assert!(check_step(&model, &initial, &cancel_rhs_first)
            .unwrap()
            .is_ok());
        let last2 = step(Rule::FreeCancel, "Db", "Db");
        assert!(check_step(&model, &cancel_rhs_first.result, &last2)
            .unwrap()
            .is_ok());
    }

    #[test]
    fn parse_derivation_roundtrip() {
        let text = "\
# demo
surface S_1_1
initial (Da * Db)^6 == Dd
step expand_power: Da * Db * (Da * Db)^5 == Dd
";
        let script = parse_derivation(text).unwrap();
        assert_eq!(script.surface, "S_1_1");
        assert_eq!(script.steps.len(), 1);
        let report = check_derivation(&script).unwrap();
        assert!(report.all_ok(), "{:?}", report.steps);
    }
}
