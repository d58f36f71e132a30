use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use etaforge_core::circle::{CircleOperator, CircleSymbol};
use etaforge_core::eta::{heat_sum, SpectrumModel};
use etaforge_core::index::{analytic_index, IndexConfig, SubspaceOperator};
use etaforge_core::numeric::ToleranceConfig;
use etaforge_core::subspaces::PdoSubspace;
use etaforge_core::suite;
use etaforge_core::torus::{t3_spectrum, TwistCharacter};
use etaforge_core::Execution;

const POLICIES: [Execution; 2] = [Execution::Sequential, Execution::Parallel];

fn lattice_heat(c: &mut Criterion) {
    let mut group = c.benchmark_group("lattice_heat_sum");
    let model = SpectrumModel::lattice([0.3, 0.1, 0.7], 40.0).unwrap();
    let levels = model.signed_levels(1600.0, Execution::Sequential);
    for exec in POLICIES {
        group.bench_with_input(BenchmarkId::new(format!("{exec:?}"), levels.len()), &levels, |b, lv| {
            b.iter(|| heat_sum(black_box(lv), 1e-3, exec))
        });
    }
    group.finish();
}

fn lattice_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("t3_spectrum");
    group.sample_size(10);
    for exec in POLICIES {
        group.bench_function(format!("{exec:?}"), |b| {
            b.iter(|| t3_spectrum(black_box(40.0), TwistCharacter::trivial(), exec).unwrap())
        });
    }
    group.finish();
}

fn three_scale_index(c: &mut Criterion) {
    let mut group = c.benchmark_group("three_scale_index");
    group.sample_size(10);
    let tol = ToleranceConfig::default();
    let mut g = suite::rng(1, 900);
    let d = suite::modn_operator(&mut g, 3, tol).unwrap();
    let hardy = Arc::new(PdoSubspace::hardy(tol));
    let shift = CircleOperator::pdo(CircleSymbol::even(0, suite::exponential(2)));
    let toeplitz = SubspaceOperator::new(shift, hardy.clone(), hardy).unwrap();
    for exec in POLICIES {
        let cfg = IndexConfig { execution: exec, ..IndexConfig::default() };
        group.bench_function(BenchmarkId::new("modn", format!("{exec:?}")), |b| {
            b.iter(|| analytic_index(black_box(d.operator()), &cfg).unwrap())
        });
        group.bench_function(BenchmarkId::new("toeplitz", format!("{exec:?}")), |b| {
            b.iter(|| analytic_index(black_box(&toeplitz), &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, lattice_heat, lattice_enumeration, three_scale_index);
criterion_main!(benches);
