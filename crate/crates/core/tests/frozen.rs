//! Regression values for the top slices at cap (2,2). Their defining properties
//! are asserted in `acceptance`; these pin the actual coefficients.

use affine_hall::context::Context;
use affine_hall::cyclic::canonical_cyclic;
use affine_hall::hall::{FitOptions, TypeAlgebra};
use affine_hall::pbwbasis::PbwAlgebra;

type Table = Vec<(&'static str, Vec<(&'static str, &'static str)>)>;

fn assert_table(got: Vec<(String, Vec<(String, String)>)>, want: Table) {
    assert_eq!(got.len(), want.len());
    for ((gk, gc), (wk, wc)) in got.iter().zip(&want) {
        assert_eq!(gk, wk);
        let wc: Vec<(String, String)> = wc.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        assert_eq!(gc, &wc, "coordinates of {gk}");
    }
}

#[test]
fn kronecker_canonical_at_2_2() {
    let h = TypeAlgebra::build(&"kronecker".parse().unwrap(), &[2, 2], FitOptions::default()).unwrap();
    let pa = PbwAlgebra::new(&h).unwrap();
    let s = pa.slice(&[2, 2]).unwrap();
    let got = s
        .aperiodic
        .iter()
        .zip(&s.canonical)
        .map(|(&k, c)| {
            let coords = c.iter().enumerate().filter(|(_, p)| !p.is_zero()).map(|(j, p)| (s.indices[j].to_string(), p.to_string())).collect();
            (s.indices[k].to_string(), coords)
        })
        .collect();
    let base = "[0^2 | 0 | 1^2 | ()]";
    let one = "[0^1 | 0 | 1^1 | (1)]";
    let left = "[-1^1 | 0 | 1^1 | ()]";
    let right = "[0^1 | 0 | 2^1 | ()]";
    assert_table(
        got,
        vec![
            (base, vec![(base, "1*v^0")]),
            (one, vec![(base, "2*v^-2 + 1*v^-4"), (one, "1*v^0")]),
            (left, vec![(base, "1*v^-3 + 1*v^-5"), (one, "1*v^-1"), (left, "1*v^0")]),
            (right, vec![(base, "1*v^-3 + 1*v^-5"), (one, "1*v^-1"), (right, "1*v^0")]),
            (
                "[0 | 0 | 0 | (2)]",
                vec![(base, "1*v^-8"), (one, "1*v^-4"), (left, "1*v^-3"), (right, "1*v^-3"), ("[0 | 0 | 0 | (2)]", "1*v^0")],
            ),
            (
                "[0 | 0 | 0 | (1,1)]",
                vec![(base, "1*v^-4 + 2*v^-6"), (one, "2*v^-2"), (left, "1*v^-1"), (right, "1*v^-1"), ("[0 | 0 | 0 | (1,1)]", "1*v^0")],
            ),
        ],
    );
}

#[test]
fn cyclic_canonical_at_2_2() {
    let h = TypeAlgebra::build(&Context::Cyclic(2), &[2, 2], FitOptions::default()).unwrap();
    let (slices, _) = canonical_cyclic(&h, &[2, 2]).unwrap();
    let s = slices.iter().find(|s| s.dims == [2, 2]).unwrap();
    let got = s
        .aperiodic
        .iter()
        .zip(&s.canonical)
        .map(|(&k, c)| {
            let coords = c.iter().enumerate().filter(|(_, p)| !p.is_zero()).map(|(j, p)| (s.all[j].to_string(), p.to_string())).collect();
            (s.all[k].to_string(), coords)
        })
        .collect();
    let ss = "r=2; 1:1 x2; 2:1 x2";
    let a = "r=2; 1:1 x1; 1:2 x1; 2:1 x1";
    let b = "r=2; 1:1 x1; 2:1 x1; 2:2 x1";
    let d = "r=2; 1:2 x1; 2:2 x1";
    let p = "r=2; 1:1 x1; 2:3 x1";
    let q = "r=2; 1:3 x1; 2:1 x1";
    assert_table(
        got,
        vec![
            ("r=2; 1:2 x2", vec![(ss, "1*v^-4"), (a, "1*v^-1"), ("r=2; 1:2 x2", "1*v^0")]),
            ("r=2; 2:2 x2", vec![(ss, "1*v^-4"), (b, "1*v^-1"), ("r=2; 2:2 x2", "1*v^0")]),
            (p, vec![(ss, "1*v^-3 + 1*v^-5"), (a, "1*v^-2"), (b, "1*v^-2"), (d, "1*v^-1"), (p, "1*v^0")]),
            (q, vec![(ss, "1*v^-3 + 1*v^-5"), (a, "1*v^-2"), (b, "1*v^-2"), (d, "1*v^-1"), (q, "1*v^0")]),
            (
                "r=2; 1:4 x1",
                vec![
                    (ss, "1*v^-2 + 1*v^-4 + 1*v^-6"),
                    (a, "1*v^-1 + 1*v^-3"),
                    (b, "1*v^-3"),
                    (d, "1*v^-2"),
                    ("r=2; 1:2 x2", "1*v^-2"),
                    (p, "1*v^-1"),
                    (q, "1*v^-1"),
                    ("r=2; 1:4 x1", "1*v^0"),
                ],
            ),
            (
                "r=2; 2:4 x1",
                vec![
                    (ss, "1*v^-2 + 1*v^-4 + 1*v^-6"),
                    (a, "1*v^-3"),
                    (b, "1*v^-1 + 1*v^-3"),
                    (d, "1*v^-2"),
                    ("r=2; 2:2 x2", "1*v^-2"),
                    (p, "1*v^-1"),
                    (q, "1*v^-1"),
                    ("r=2; 2:4 x1", "1*v^0"),
                ],
            ),
        ],
    );
}
