use affine_hall::context::Context;
use affine_hall::cyclic::{diamond, Multisegment};
use affine_hall::hall::{FitOptions, TypeAlgebra};
use affine_hall::laurent::{rat, LaurentPoly};
use affine_hall::modrep::{CatalogOptions, Oracle};
use affine_hall::pbwbasis::PbwAlgebra;
use criterion::{criterion_group, criterion_main, Criterion};

fn quantum_product(n: i64) -> LaurentPoly {
    let mut p = LaurentPoly::one();
    for k in 1..=n {
        let mut f = LaurentPoly::v_pow(k);
        f.add_term(-k, rat(-1));
        p = &p * &f;
    }
    p
}

pub fn laurent(c: &mut Criterion) {
    let a = quantum_product(8);
    let b = quantum_product(6);
    c.bench_function("laurent product (degree 72 x 42)", |bch| bch.iter(|| &a * &b));
    let prod = &a * &b;
    c.bench_function("laurent exact division", |bch| bch.iter(|| prod.div_exact(&b)));
}

pub fn catalog(c: &mut Criterion) {
    let ctx: Context = "kronecker".parse().unwrap();
    c.bench_function("kronecker catalog over F_3 up to (2,2)", |b| {
        b.iter(|| Oracle::build(ctx.species(3).unwrap(), &[2, 2], &CatalogOptions::default()).unwrap())
    });
}

pub fn bases(c: &mut Criterion) {
    let mut group = c.benchmark_group("bases");
    group.sample_size(10);
    let ctx: Context = "kronecker".parse().unwrap();
    group.bench_function("kronecker type algebra (1,1)", |b| {
        b.iter(|| TypeAlgebra::build(&ctx, &[1, 1], FitOptions::default()).unwrap())
    });
    let h = TypeAlgebra::build(&ctx, &[1, 2], FitOptions::default()).unwrap();
    group.bench_function("kronecker canonical basis (1,2)", |b| {
        b.iter(|| {
            let pa = PbwAlgebra::new(&h).unwrap();
            pa.basis(&[1, 2]).unwrap()
        })
    });
    group.finish();
}

pub fn multisegments(c: &mut Criterion) {
    let all = Multisegment::all_up_to(3, 4);
    c.bench_function("generic extension, rank 3, size <= 4", |b| {
        b.iter(|| {
            let mut n = 0;
            for x in &all {
                for y in &all {
                    n += diamond(x, y).size();
                }
            }
            n
        })
    });
}

criterion_group!(benches, laurent, catalog, bases, multisegments);
criterion_main!(benches);
