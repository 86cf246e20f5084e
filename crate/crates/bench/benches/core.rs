use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use weyldl::classes::{enumerate_delta_classes, shift_closure, CLOSURE_BUDGET};
use weyldl::criterion::{build_system_1_13a, certify_class, check_certificate, feasible};
use weyldl::{reduce_pipeline, Direction, GroupDesc, Verifier, VerifyOptions, WeylGroup};

fn group(name: &str) -> GroupDesc {
    name.parse().expect("group name")
}

fn bench_classes(c: &mut Criterion) {
    for name in ["B3", "D4", "F4", "2F4"] {
        let d = group(name);
        c.bench_function(&format!("enumerate_classes/{name}"), |b| {
            b.iter(|| enumerate_delta_classes(black_box(&d), Direction::Delta).unwrap())
        });
    }
    let e6 = group("E6");
    let g = WeylGroup::new(e6.root_system().unwrap());
    let w = g.from_word(&[1, 2, 3, 4, 5, 6]).unwrap();
    let delta = e6.twist().unwrap();
    c.bench_function("shift_closure/E6_coxeter", |b| {
        b.iter(|| shift_closure(&g, black_box(&w), &delta, CLOSURE_BUDGET, false).unwrap())
    });
}

fn bench_certify(c: &mut Criterion) {
    let f4 = group("F4");
    let q = f4.min_q();
    let classes = enumerate_delta_classes(&f4, Direction::Delta).unwrap();
    c.bench_function("certify_lp/F4_all_classes", |b| {
        b.iter(|| {
            for class in &classes {
                let cert = certify_class(&f4, class, &q).unwrap();
                assert!(check_certificate(&cert).unwrap().is_accept());
            }
        })
    });
    c.bench_function("certify_reduce/F4_all_classes", |b| b.iter(|| reduce_pipeline(black_box(&f4), &q).unwrap()));
    let g = WeylGroup::new(f4.root_system().unwrap());
    let w = g.from_word(&[1, 2, 3, 4]).unwrap();
    let sys = build_system_1_13a(&g, &w, &f4.twist().unwrap(), &q);
    c.bench_function("exact_lp/F4_coxeter_1_13a", |b| b.iter(|| feasible(black_box(&sys)).unwrap()));
}

fn bench_tables(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_paper");
    group.sample_size(10);
    for filter in ["F4", "2F4", "E6"] {
        group.bench_function(filter, |b| {
            b.iter(|| {
                let report = Verifier::new(VerifyOptions::default()).verify_all(filter).unwrap();
                assert!(report.all_passed());
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_classes, bench_certify, bench_tables);
criterion_main!(benches);
