use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use paperband::catalog::get_model;
use paperband::knot::{analyze, bracket, GaussCode};
use paperband::smooth::{assemble_mesh, check_embedded, MeshParams};
use paperband::{InflationParams, Tolerance};
use paperband_bench::folded;

fn pipeline(c: &mut Criterion) {
    let tol = Tolerance::default();
    let model = get_model("crisscross").unwrap();
    c.bench_function("fold crisscross", |b| b.iter(|| model.fold(&tol).unwrap()));

    let st = folded("crisscross");
    c.bench_function("analyze crisscross", |b| {
        b.iter(|| analyze(black_box(&st), &InflationParams::new(0.02), 0, &tol).unwrap())
    });

    let code = GaussCode::parse("O1- U2+ O3+ U1- O4- U3+ O2+ U4-").unwrap();
    c.bench_function("bracket figure eight", |b| b.iter(|| bracket(black_box(&code)).unwrap()));

    let cup = folded("cup");
    let params = MeshParams::new(0.02);
    c.bench_function("assemble cup mesh", |b| b.iter(|| assemble_mesh(black_box(&cup), &params, &tol).unwrap()));
    let mesh = assemble_mesh(&cup, &params, &tol).unwrap();
    c.bench_function("embedding check cup", |b| b.iter(|| check_embedded(black_box(&mesh), tol.eps_point)));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = pipeline
}
criterion_main!(benches);
