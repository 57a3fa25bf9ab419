use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use krss_core::coeffring::{ring_soundness, verify_against_bredon_with, Window};
use krss_core::exactalg::FGAbelianGroup;
use krss_core::exec::Strategy;
use krss_core::krtower::{build_with, default_window, Mode, Space, Variant};
use krss_core::mackey::MackeyZ2;

const STRATEGIES: [(&str, Strategy); 2] = [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)];

fn bredon_table(c: &mut Criterion) {
    let m = MackeyZ2::constant(&FGAbelianGroup::z());
    let mut g = c.benchmark_group("bredon_table");
    g.sample_size(10);
    for (name, s) in STRATEGIES {
        g.bench_with_input(BenchmarkId::new(name, 6), &s, |b, s| b.iter(|| verify_against_bredon_with(Window::square(6), &m, *s)));
    }
    g.finish();
}

fn ring_laws(c: &mut Criterion) {
    let mut g = c.benchmark_group("ring_soundness");
    g.sample_size(10);
    for (name, s) in STRATEGIES {
        g.bench_with_input(BenchmarkId::new(name, 8), &s, |b, s| b.iter(|| ring_soundness(Window::square(8), *s)));
    }
    g.finish();
}

fn towers(c: &mut Criterion) {
    let mut g = c.benchmark_group("kr_tower");
    g.sample_size(10);
    for (name, s) in STRATEGIES {
        g.bench_with_input(BenchmarkId::new(name, "pt"), &s, |b, s| {
            b.iter(|| build_with(Space::Pt, Variant::Kr, Mode::Stable, default_window(), *s).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bredon_table, ring_laws, towers);
criterion_main!(benches);
