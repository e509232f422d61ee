use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use defring_core::cohomology::{h1_dim, h1_via_inflation, ActionModule};
use defring_core::groups::{ExtensionGroup, MetacyclicGroup};
use defring_core::hypothesis::{search, ParameterTuple};
use defring_core::report::{verify, VerifyOptions};
use defring_core::repn::{build_m, descend_rep, flatten_matrix};
use defring_core::ring::{howell_form, CommRing, GaloisRing, Matrix};

fn instance(p: u64, n: u32, ell: u64, q: u64, u: u64, a: u64) -> (ExtensionGroup, ActionModule) {
    let g = MetacyclicGroup::new(ell, q, u).unwrap();
    let ring = GaloisRing::new(p, n, 1).unwrap();
    let rho_a = descend_rep(&g, a, &ring).unwrap();
    let ext = ExtensionGroup::new(&g, p, n, &flatten_matrix(&ring, rho_a.image(g.tau())), &flatten_matrix(&ring, rho_a.image(g.sigma())))
        .unwrap();
    let rho_bar = descend_rep(&g, 1, &ring.residue_field()).unwrap();
    let module = ActionModule::from_linear(&build_m(&rho_bar), 1).unwrap().inflate(&ext);
    (ext, module)
}

fn howell(c: &mut Criterion) {
    let ring = GaloisRing::new(3, 3, 2).unwrap();
    let a = Matrix::from_fn(12, 12, |i, j| ring.from_int(((i * 7 + j * j * 5 + i * j) % 27) as i64 * 3_i64.pow(((i + j) % 3) as u32)));
    c.bench_function("howell_form 12x12 over GR(27, 2)", |b| b.iter(|| howell_form(&ring, black_box(&a))));
}

fn cohomology(c: &mut Criterion) {
    let mut group = c.benchmark_group("h1");
    group.sample_size(10);
    for (label, args) in [("S4", (2, 1, 3, 2, 2, 1)), ("p3 n1", (3, 1, 8, 2, 3, 2)), ("p3 n2", (3, 2, 8, 2, 3, 2))] {
        let (p, n, ell, q, u, a) = args;
        let (ext, module) = instance(p, n, ell, q, u, a);
        group.bench_function(format!("propagation {label}"), |b| b.iter(|| h1_dim(ext.group(), &module).unwrap()));
        group.bench_function(format!("inflation {label}"), |b| b.iter(|| h1_via_inflation(&ext, &module).unwrap()));
    }
    group.finish();
}

fn pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);
    let opts = VerifyOptions {
        tuple: ParameterTuple { p: 2, n: 1, ell: 3, q: 2, u: 2, a: 1 },
        precision: None,
        bruteforce: false,
        skip_h1_bruteforce: false,
    };
    group.bench_function("verify S4", |b| b.iter(|| verify(black_box(&opts)).unwrap()));
    group.bench_function("search p=3 ell<=20", |b| b.iter(|| search(3, 1, 20, 8).unwrap()));
    group.finish();
}

criterion_group!(benches, howell, cohomology, pipeline);
criterion_main!(benches);
