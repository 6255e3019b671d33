//! The relation catalogue and the two-engine verification pipeline.
//!
//! `verify` runs a [`RelationStatement`] through the homology engine (fast,
//! necessary condition) and the exact groupoid engine. With engine `both`
//! (the default everywhere) the homology screen runs first and a failure
//! short-circuits: exact is not run, the statement is refuted. An exact pass
//! is conclusive by the Alexander-method representation.
//!
//! The catalogue generators produce the chain relations in both variants,
//! the star relation, the colored-curve relation on `S_1_3`, and the fiber
//! monodromy relation on `F_{k,k}`. The fiber product is displayed in the
//! source ordering `(D_{1,k-1} .. D_{k-1,k-1}) .. (D_{1,1} .. D_{k-1,1})`
//! with the leftmost twist applied first; under this engine's
//! rightmost-first convention the emitted word is therefore the reversed
//! letter sequence. The opposite reading fails on every fiber model with
//! the shipped intersection data, so this one is treated as the intended
//! composition order.

use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::dsl::{format_expr, Engine, RelationStatement, TwistExpr};
use crate::homology::{twist_product, HomologyError, TwistMatrix};
use crate::surfaces::{surface_by_name, ModelLevel, SurfaceError, SurfaceModel};
use crate::words::{GroupoidMorphism, WordError};

fn position_suffix(pos: &Option<crate::dsl::Pos>) -> String {
    match pos {
        Some(p) => format!(" at {}:{}", p.line, p.col),
        None => String::new(),
    }
}

#[derive(Debug, Error)]
pub enum RelationError {
    #[error("chain relation requires m >= 1, got {0}")]
    BadChainLength(i64),
    #[error("fiber relation requires k >= 2, got {0}")]
    BadFiberIndex(i64),
    #[error("unknown twist name `{name}`{} on surface `{surface}`", position_suffix(.pos))]
    UnknownTwist {
        surface: String,
        name: String,
        pos: Option<crate::dsl::Pos>,
    },
    #[error("exact engine requested but `{0}` is a homology-level model")]
    ExactUnsupported(String),
    #[error("curves `{a}` and `{b}` have no declared intersection number")]
    UndeclaredPair { a: String, b: String },
    #[error("braid check handles declared intersections 0 and 1 only; i({a},{b}) = {i}")]
    UnsupportedIntersection { a: String, b: String, i: u64 },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Outcome of one engine run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum EngineOutcome {
    Pass,
    Fail { witness: String },
    NotRun,
    Unsupported { reason: String },
}

impl EngineOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, EngineOutcome::Pass)
    }
    pub fn failed(&self) -> bool {
        matches!(self, EngineOutcome::Fail { .. })
    }
}

impl fmt::Display for EngineOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineOutcome::Pass => write!(f, "pass"),
            EngineOutcome::Fail { .. } => write!(f, "fail"),
            EngineOutcome::NotRun => write!(f, "not-run"),
            EngineOutcome::Unsupported { .. } => write!(f, "unsupported"),
        }
    }
}

/// Result of verifying one statement.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub statement: RelationStatement,
    pub homology: EngineOutcome,
    pub exact: EngineOutcome,
    pub wall_time: Duration,
}

impl VerificationReport {
    /// Verified means no engine refuted it and at least one passed.
    pub fn verified(&self) -> bool {
        !self.refuted() && (self.homology.passed() || self.exact.passed())
    }

    pub fn refuted(&self) -> bool {
        self.homology.failed() || self.exact.failed()
    }

    pub fn witness(&self) -> Option<&str> {
        for o in [&self.exact, &self.homology] {
            if let EngineOutcome::Fail { witness } = o {
                return Some(witness);
            }
        }
        None
    }
}

/// Expand an expression into twist factors `(curve name, +-1)`, leftmost
/// factor outermost (applied last).
pub fn expr_factors(e: &TwistExpr) -> Vec<(String, i64)> {
    fn walk(e: &TwistExpr, sign: i64, out: &mut Vec<(String, i64)>) {
        match e {
            TwistExpr::Twist(name, _) => out.push((name.clone(), sign)),
            TwistExpr::Compose(parts) => {
                if sign > 0 {
                    parts.iter().for_each(|p| walk(p, 1, out));
                } else {
                    parts.iter().rev().for_each(|p| walk(p, -1, out));
                }
            }
            TwistExpr::Power(base, n) => {
                let reps = n.unsigned_abs();
                let inner = sign * n.signum();
                for _ in 0..reps {
                    walk(base, inner, out);
                }
            }
        }
    }
    let mut out = Vec::new();
    walk(e, 1, &mut out);
    out
}

/// The exact morphism of an expression over a model's twist tables.
pub fn expr_morphism(
    e: &TwistExpr,
    model: &SurfaceModel,
) -> Result<GroupoidMorphism, RelationError> {
    let graph = model
        .graph()
        .ok_or_else(|| RelationError::ExactUnsupported(model.name.clone()))?;
    let mut out = graph.identity_morphism();
    for (name, sign) in expr_factors(e).into_iter().rev() {
        let t = resolve_twist(model, &name)?;
        let factor = if sign > 0 { t.clone() } else { t.inverted() };
        out = factor.compose(graph, &out)?;
    }
    Ok(out)
}

fn resolve_twist<'m>(
    model: &'m SurfaceModel,
    name: &str,
) -> Result<&'m GroupoidMorphism, RelationError> {
    let curve = resolve_curve_name(model, name)?;
    model
        .twist(&curve)
        .map_err(|_| RelationError::ExactUnsupported(model.name.clone()))
}

/// A twist name binds to a curve either directly or through a leading `D`.
pub fn resolve_curve_name(model: &SurfaceModel, name: &str) -> Result<String, RelationError> {
    if model.curve(name).is_ok() {
        return Ok(name.to_string());
    }
    if let Some(stripped) = name.strip_prefix('D') {
        if model.curve(stripped).is_ok() {
            return Ok(stripped.to_string());
        }
    }
    Err(RelationError::UnknownTwist {
        surface: model.name.clone(),
        name: name.to_string(),
        pos: None,
    })
}

/// Resolve every name in a statement against the surface's curve table, or
/// report the first unknown name with its source position.
pub fn bind_statement(stmt: &RelationStatement, model: &SurfaceModel) -> Result<(), RelationError> {
    for side in [&stmt.lhs, &stmt.rhs] {
        for (name, pos) in side.names() {
            if resolve_curve_name(model, name).is_err() {
                return Err(RelationError::UnknownTwist {
                    surface: model.name.clone(),
                    name: name.to_string(),
                    pos,
                });
            }
        }
    }
    Ok(())
}

/// The homology-engine product matrix of an expression.
pub fn expr_matrix(e: &TwistExpr, model: &SurfaceModel) -> Result<TwistMatrix, RelationError> {
    let mut factors = Vec::new();
    for (name, sign) in expr_factors(e) {
        let curve = resolve_curve_name(model, &name)?;
        factors.push((model.curve(&curve)?.homology.clone(), sign));
    }
    Ok(twist_product(&factors, &model.form)?)
}

fn homology_outcome(
    stmt: &RelationStatement,
    model: &SurfaceModel,
) -> Result<EngineOutcome, RelationError> {
    let lhs = expr_matrix(&stmt.lhs, model)?;
    let rhs = expr_matrix(&stmt.rhs, model)?;
    if lhs == rhs {
        return Ok(EngineOutcome::Pass);
    }
    // witness: first basis vector whose images differ
    let n = lhs.dim();
    let mut witness = String::new();
    'outer: for j in 0..n {
        for i in 0..n {
            if lhs.at(i, j) != rhs.at(i, j) {
                let label = model
                    .basis_labels
                    .get(j)
                    .cloned()
                    .unwrap_or_else(|| format!("e{j}"));
                let col = |m: &TwistMatrix| -> String {
                    let v: Vec<String> = (0..n).map(|i| m.at(i, j).to_string()).collect();
                    format!("({})", v.join(", "))
                };
                witness = format!(
                    "basis vector {label} images differ\n  lhs column: {}\n  rhs column: {}",
                    col(&lhs),
                    col(&rhs)
                );
                break 'outer;
            }
        }
    }
    Ok(EngineOutcome::Fail { witness })
}

fn exact_outcome(
    stmt: &RelationStatement,
    model: &SurfaceModel,
) -> Result<EngineOutcome, RelationError> {
    let graph = model.graph().expect("exact level checked by caller");
    let lhs = expr_morphism(&stmt.lhs, model)?;
    let rhs = expr_morphism(&stmt.rhs, model)?;
    match lhs.first_disagreement(graph, &rhs) {
        None => Ok(EngineOutcome::Pass),
        Some((edge, l, r)) => Ok(EngineOutcome::Fail {
            witness: format!(
                "edge {edge} images differ\n  lhs: {}\n  rhs: {}",
                graph.format_word(&l),
                graph.format_word(&r)
            ),
        }),
    }
}

/// Verify a statement with the engine it requests. `both` runs homology
/// first and short-circuits to refuted on failure.
pub fn verify(stmt: &RelationStatement) -> Result<VerificationReport, RelationError> {
    let model = surface_by_name(&stmt.surface)?;
    verify_on(stmt, &model)
}

/// As [`verify`], against an already-loaded model.
pub fn verify_on(
    stmt: &RelationStatement,
    model: &SurfaceModel,
) -> Result<VerificationReport, RelationError> {
    bind_statement(stmt, model)?;
    let start = Instant::now();
    let mut homology = EngineOutcome::NotRun;
    let mut exact = EngineOutcome::NotRun;
    match stmt.engine {
        Engine::Homology => {
            homology = homology_outcome(stmt, model)?;
        }
        Engine::Exact => {
            if model.level() != ModelLevel::Exact {
                return Err(RelationError::ExactUnsupported(model.name.clone()));
            }
            exact = exact_outcome(stmt, model)?;
        }
        Engine::Both => {
            homology = homology_outcome(stmt, model)?;
            if homology.passed() {
                if model.level() == ModelLevel::Exact {
                    exact = exact_outcome(stmt, model)?;
                } else {
                    exact = EngineOutcome::Unsupported {
                        reason: format!("{} is a homology-level model", model.name),
                    };
                }
            }
        }
    }
    Ok(VerificationReport {
        statement: stmt.clone(),
        homology,
        exact,
        wall_time: start.elapsed(),
    })
}

// ---------------------------------------------------------------------------
// catalogue
// ---------------------------------------------------------------------------

/// Chain relation variant: the standard form or the squared-first form in
/// which the first twist is doubled and the exponent drops.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainVariant {
    Standard,
    SquaredFirst,
}

/// The m-chain relation. Even m: `(D1 .. Dm)^{2m+2} = D_b`; odd m:
/// `(D1 .. Dm)^{m+1} = D_{b1} D_{b2}`. The squared-first variant replaces
/// the exponents by `2m` and `m` and doubles the first twist. Bindings:
/// m = 1 on the annulus, m = 2 on `S_1_1`, m = 3 on `S_1_2`, larger m on
/// the generated homology-level chain neighborhoods.
pub fn chain_relation(m: i64, variant: ChainVariant) -> Result<RelationStatement, RelationError> {
    if m < 1 {
        return Err(RelationError::BadChainLength(m));
    }
    let (surface, twists, boundary): (&str, Vec<String>, Vec<&str>) = match m {
        1 => ("annulus", vec!["Dcore".into()], vec!["Db1", "Db2"]),
        2 => ("S_1_1", vec!["Da".into(), "Db".into()], vec!["Dd"]),
        3 => (
            "S_1_2",
            vec!["Da1".into(), "Da2".into(), "Da3".into()],
            vec!["Db1", "Db2"],
        ),
        _ => {
            let names: Vec<String> = (1..=m).map(|i| format!("Da{i}")).collect();
            let b: Vec<&str> = if m % 2 == 0 {
                vec!["Db"]
            } else {
                vec!["Db1", "Db2"]
            };
            // leak the surface name into a static-friendly string below
            return Ok(assemble_chain(
                &format!("chain_nbhd_{m}"),
                m,
                variant,
                names,
                b,
            ));
        }
    };
    Ok(assemble_chain(surface, m, variant, twists, boundary))
}

fn assemble_chain(
    surface: &str,
    m: i64,
    variant: ChainVariant,
    twists: Vec<String>,
    boundary: Vec<&str>,
) -> RelationStatement {
    let exponent = match (m % 2 == 0, variant) {
        (true, ChainVariant::Standard) => 2 * m + 2,
        (false, ChainVariant::Standard) => m + 1,
        (true, ChainVariant::SquaredFirst) => 2 * m,
        (false, ChainVariant::SquaredFirst) => m,
    };
    let mut parts: Vec<TwistExpr> = Vec::new();
    for (i, name) in twists.iter().enumerate() {
        let t = TwistExpr::twist(name);
        if i == 0 && variant == ChainVariant::SquaredFirst {
            parts.push(TwistExpr::power(t, 2));
        } else {
            parts.push(t);
        }
    }
    let lhs = TwistExpr::power(TwistExpr::compose(parts), exponent);
    let rhs = TwistExpr::compose(boundary.iter().map(|b| TwistExpr::twist(b)).collect());
    RelationStatement {
        surface: surface.to_string(),
        lhs,
        rhs,
        engine: Engine::Both,
    }
}

/// The star relation `(Dag Dap Dab Day)^3 = Db1 Db2 Db3` on `S_1_3`: the
/// central curve `ag` meets each of `ap`, `ab`, `ay` once and those are
/// pairwise disjoint.
pub fn star_relation() -> RelationStatement {
    RelationStatement {
        surface: "S_1_3".into(),
        lhs: TwistExpr::power(
            TwistExpr::compose(vec![
                TwistExpr::twist("Dag"),
                TwistExpr::twist("Dap"),
                TwistExpr::twist("Dab"),
                TwistExpr::twist("Day"),
            ]),
            3,
        ),
        rhs: boundary_product(&["Db1", "Db2", "Db3"]),
        engine: Engine::Both,
    }
}

/// The cube of the four colored twists equals the product of the three
/// boundary twists on `S_1_3`: `(Dar Dap Dab Dag)^3 = Db1 Db2 Db3`.
pub fn colored_relation() -> RelationStatement {
    RelationStatement {
        surface: "S_1_3".into(),
        lhs: TwistExpr::power(
            TwistExpr::compose(vec![
                TwistExpr::twist("Dar"),
                TwistExpr::twist("Dap"),
                TwistExpr::twist("Dab"),
                TwistExpr::twist("Dag"),
            ]),
            3,
        ),
        rhs: boundary_product(&["Db1", "Db2", "Db3"]),
        engine: Engine::Both,
    }
}

fn boundary_product(names: &[&str]) -> TwistExpr {
    TwistExpr::compose(names.iter().map(|n| TwistExpr::twist(n)).collect())
}

/// The fiber monodromy relation on `F_{k,k}`: the k-th power of the product
/// of all grid twists equals the product of the k boundary twists. The
/// factors are emitted with the leftmost-applied-first reading of the
/// source product (see the module docs): column j ascending, row i
/// descending within each column.
pub fn fiber_relation(k: i64) -> Result<RelationStatement, RelationError> {
    if k < 2 {
        return Err(RelationError::BadFiberIndex(k));
    }
    let mut parts = Vec::new();
    for j in 1..k {
        for i in (1..k).rev() {
            parts.push(TwistExpr::twist(&format!("Da_{i}_{j}")));
        }
    }
    let boundary: Vec<String> = (1..=k).map(|c| format!("Db{c}")).collect();
    Ok(RelationStatement {
        surface: format!("F_{k}_{k}"),
        lhs: TwistExpr::power(TwistExpr::compose(parts), k),
        rhs: TwistExpr::compose(boundary.iter().map(|b| TwistExpr::twist(b)).collect()),
        engine: Engine::Both,
    })
}

/// Verify the intersection-driven identity for a declared pair: the braid
/// relation for i = 1, commutation for i = 0, with the exact engine.
pub fn braid_check(surface: &str, c1: &str, c2: &str) -> Result<VerificationReport, RelationError> {
    let model = surface_by_name(surface)?;
    let a = resolve_curve_name(&model, c1)?;
    let b = resolve_curve_name(&model, c2)?;
    let i = model
        .intersection(&a, &b)?
        .ok_or_else(|| RelationError::UndeclaredPair {
            a: a.clone(),
            b: b.clone(),
        })?;
    let ta = TwistExpr::twist(&format!("D{a}"));
    let tb = TwistExpr::twist(&format!("D{b}"));
    let (lhs, rhs) = match i {
        0 => (
            TwistExpr::compose(vec![ta.clone(), tb.clone()]),
            TwistExpr::compose(vec![tb, ta]),
        ),
        1 => (
            TwistExpr::compose(vec![ta.clone(), tb.clone(), ta.clone()]),
            TwistExpr::compose(vec![tb.clone(), ta, tb]),
        ),
        other => {
            return Err(RelationError::UnsupportedIntersection { a, b, i: other });
        }
    };
    let stmt = RelationStatement {
        surface: surface.to_string(),
        lhs,
        rhs,
        engine: Engine::Exact,
    };
    verify_on(&stmt, &model)
}

/// Systematic mutations of a statement, each of which a correct relation
/// must refute: exponent bumped, one factor dropped, one factor inverted.
pub fn mutations(stmt: &RelationStatement) -> Vec<RelationStatement> {
    let mut out = Vec::new();
    if let TwistExpr::Power(base, n) = &stmt.lhs {
        out.push(RelationStatement {
            lhs: TwistExpr::power((**base).clone(), n + 1),
            ..stmt.clone()
        });
        if *n > 1 {
            out.push(RelationStatement {
                lhs: TwistExpr::power((**base).clone(), n - 1),
                ..stmt.clone()
            });
        }
        if let TwistExpr::Compose(parts) = base.as_ref() {
            let mut dropped = parts.clone();
            dropped.remove(0);
            out.push(RelationStatement {
                lhs: TwistExpr::power(TwistExpr::compose(dropped), *n),
                ..stmt.clone()
            });
            let mut inverted = parts.clone();
            inverted[0] = TwistExpr::power(inverted[0].clone(), -1);
            out.push(RelationStatement {
                lhs: TwistExpr::power(TwistExpr::compose(inverted), *n),
                ..stmt.clone()
            });
        } else {
            out.push(RelationStatement {
                lhs: TwistExpr::power(TwistExpr::power((**base).clone(), -1), *n),
                ..stmt.clone()
            });
        }
    } else if let TwistExpr::Compose(parts) = &stmt.lhs {
        out.push(RelationStatement {
            lhs: TwistExpr::power(stmt.lhs.clone(), 2),
            ..stmt.clone()
        });
        let mut dropped = parts.clone();
        dropped.remove(0);
        out.push(RelationStatement {
            lhs: TwistExpr::compose(dropped),
            ..stmt.clone()
        });
        let mut inverted = parts.clone();
        inverted[0] = TwistExpr::power(inverted[0].clone(), -1);
        out.push(RelationStatement {
            lhs: TwistExpr::compose(inverted),
            ..stmt.clone()
        });
    }
    out
}

/// Render a statement as a standalone relation script.
pub fn statement_script(stmt: &RelationStatement, header: &str) -> String {
    let mut out = String::new();
    for line in header.lines() {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&format!("surface {}\n", stmt.surface));
    out.push_str(&format!(
        "assert {} == {} engine={}\n",
        format_expr(&stmt.lhs),
        format_expr(&stmt.rhs),
        stmt.engine.as_str()
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_relation_shapes() {
        let m2 = chain_relation(2, ChainVariant::Standard).unwrap();
        assert_eq!(m2.surface, "S_1_1");
        assert_eq!(format_expr(&m2.lhs), "(Da * Db)^6");
        assert_eq!(format_expr(&m2.rhs), "Dd");
        let m3 = chain_relation(3, ChainVariant::Standard).unwrap();
        assert_eq!(format_expr(&m3.lhs), "(Da1 * Da2 * Da3)^4");
        assert_eq!(format_expr(&m3.rhs), "Db1 * Db2");
        let m3s = chain_relation(3, ChainVariant::SquaredFirst).unwrap();
        assert_eq!(format_expr(&m3s.lhs), "(Da1^2 * Da2 * Da3)^3");
        let m1 = chain_relation(1, ChainVariant::Standard).unwrap();
        assert_eq!(m1.surface, "annulus");
        assert_eq!(format_expr(&m1.lhs), "Dcore^2");
        assert!(chain_relation(0, ChainVariant::Standard).is_err());
        let m5 = chain_relation(5, ChainVariant::Standard).unwrap();
        assert_eq!(m5.surface, "chain_nbhd_5");
        assert_eq!(format_expr(&m5.lhs), "(Da1 * Da2 * Da3 * Da4 * Da5)^6");
    }

    #[test]
    fn fiber_relation_shapes() {
        let k2 = fiber_relation(2).unwrap();
        assert_eq!(format_expr(&k2.lhs), "Da_1_1^2");
        assert_eq!(format_expr(&k2.rhs), "Db1 * Db2");
        let k3 = fiber_relation(3).unwrap();
        assert_eq!(
            format_expr(&k3.lhs),
            "(Da_2_1 * Da_1_1 * Da_2_2 * Da_1_2)^3"
        );
        assert!(fiber_relation(1).is_err());
    }

    #[test]
    fn factor_expansion() {
        let e = crate::dsl::parse_expr("(Da * Db')^2").unwrap();
        let f = expr_factors(&e);
        assert_eq!(
            f,
            vec![
                ("Da".to_string(), 1),
                ("Db".to_string(), -1),
                ("Da".to_string(), 1),
                ("Db".to_string(), -1)
            ]
        );
        let inv = crate::dsl::parse_expr("(Da * Db)^-1").unwrap();
        assert_eq!(
            expr_factors(&inv),
            vec![("Db".to_string(), -1), ("Da".to_string(), -1)]
        );
    }

    #[test]
    fn trivial_statement_verifies_on_both_engines() {
        let stmt = RelationStatement {
            surface: "S_1_1".into(),
            lhs: TwistExpr::twist("Da"),
            rhs: TwistExpr::twist("Da"),
            engine: Engine::Both,
        };
        let report = verify(&stmt).unwrap();
        assert!(report.homology.passed());
        assert!(report.exact.passed());
        assert!(report.verified());
    }

    #[test]
    fn short_circuit_on_homology_failure() {
        // (Da)^2 == Da fails already on homology; exact must not run
        let stmt = RelationStatement {
            surface: "S_1_1".into(),
            lhs: TwistExpr::power(TwistExpr::twist("Da"), 2),
            rhs: TwistExpr::twist("Da"),
            engine: Engine::Both,
        };
        let report = verify(&stmt).unwrap();
        assert!(report.homology.failed());
        assert_eq!(report.exact, EngineOutcome::NotRun);
        assert!(report.refuted());
        assert!(report.witness().unwrap().contains("basis vector"));
    }

    #[test]
    fn exact_engine_on_homology_model_errors() {
        let stmt = RelationStatement {
            surface: "F_6_6".into(),
            lhs: TwistExpr::twist("Da_1_1"),
            rhs: TwistExpr::twist("Da_1_1"),
            engine: Engine::Exact,
        };
        assert!(matches!(
            verify(&stmt),
            Err(RelationError::ExactUnsupported(_))
        ));
        // engine=both degrades gracefully
        let both = RelationStatement {
            engine: Engine::Both,
            ..stmt
        };
        let report = verify(&both).unwrap();
        assert!(report.homology.passed());
        assert!(matches!(report.exact, EngineOutcome::Unsupported { .. }));
    }

    #[test]
    fn unknown_twist_reports_name() {
        let stmt = RelationStatement {
            surface: "S_1_1".into(),
            lhs: TwistExpr::twist("Dnope"),
            rhs: TwistExpr::twist("Da"),
            engine: Engine::Both,
        };
        match verify(&stmt) {
            Err(RelationError::UnknownTwist { name, .. }) => assert_eq!(name, "Dnope"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mutation_shapes() {
        let stmt = star_relation();
        let muts = mutations(&stmt);
        assert!(muts.len() >= 3);
        assert_eq!(format_expr(&muts[0].lhs), "(Dag * Dap * Dab * Day)^4");
    }
}
