//! Benchmarks for the two verification engines and the parsers: the exact
//! groupoid verification of the flagship relations, the rank-25 homology
//! product for the k = 6 fiber, and expression parse/format round-trips.

use criterion::{criterion_group, criterion_main, Criterion};

use twistrel::dsl::{format_expr, parse_expr, Engine, RelationStatement};
use twistrel::relations::{colored_relation, fiber_relation, star_relation, verify_on};
use twistrel::surfaces::{builtin, chain_surface, ModelLevel};

fn exact_star(c: &mut Criterion) {
    let model = builtin("S_1_3").unwrap();
    let star = star_relation();
    let cor = colored_relation();
    c.bench_function("exact_star_relation", |b| {
        b.iter(|| verify_on(&star, &model).unwrap())
    });
    c.bench_function("exact_colored_relation", |b| {
        b.iter(|| verify_on(&cor, &model).unwrap())
    });
}

fn homology_fiber_k6(c: &mut Criterion) {
    let model = chain_surface(6, ModelLevel::Homology).unwrap();
    let stmt = RelationStatement {
        engine: Engine::Homology,
        ..fiber_relation(6).unwrap()
    };
    c.bench_function("homology_fiber_k6", |b| {
        b.iter(|| verify_on(&stmt, &model).unwrap())
    });
}

fn parser_roundtrip(c: &mut Criterion) {
    let text = "(Dar * Dap * Dab * Dag)^3";
    c.bench_function("parse_format_roundtrip", |b| {
        b.iter(|| {
            let e = parse_expr(text).unwrap();
            format_expr(&e)
        })
    });
}

fn model_load(c: &mut Criterion) {
    c.bench_function("builtin_s13_load_and_validate", |b| {
        b.iter(|| builtin("S_1_3").unwrap())
    });
}

criterion_group!(
    benches,
    exact_star,
    homology_fiber_k6,
    parser_roundtrip,
    model_load
);
criterion_main!(benches);
