use affine_hall::cartan::{cartan_of, reflect, sym_form};
use affine_hall::context::Context;
use affine_hall::cyclic::{diamond, eta_fold, leq_g, Multisegment};
use affine_hall::gf::Gf;
use affine_hall::laurent::{expand_at_infinity, gauss_binom, geometric_inverse, rat, LaurentPoly};
use affine_hall::symfun::{dominance_leq, kostka, Partition};
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-6i64..=6, -4i64..=4), 0..5).prop_map(|terms| {
        let mut p = LaurentPoly::zero();
        for (e, c) in terms {
            p.add_term(e, rat(c));
        }
        p
    })
}

fn multisegment(r: usize) -> impl Strategy<Value = Multisegment> {
    prop::collection::vec((0..r, 1usize..=3, 1usize..=2), 0..3).prop_map(move |parts| {
        let mut m = Multisegment::zero(r);
        for (i, l, k) in parts {
            m.add(i, l, k);
        }
        m
    })
}

fn partition() -> impl Strategy<Value = Partition> {
    prop::collection::vec(1usize..=3, 0..4).prop_map(Partition::new)
}

proptest! {
    #[test]
    fn laurent_ring_laws(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
    }

    #[test]
    fn bar_is_an_involutive_ring_map(a in laurent(), b in laurent()) {
        prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
        prop_assert_eq!((&a + &b).bar(), &a.bar() + &b.bar());
        prop_assert_eq!(a.bar().bar(), a);
    }

    #[test]
    fn text_round_trip(a in laurent()) {
        let back: LaurentPoly = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn exact_division_undoes_products(a in laurent(), b in laurent()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
    }

    #[test]
    fn gaussian_binomials(n in 0i64..=7, k in 0i64..=7, d in 1i64..=2) {
        prop_assume!(k <= n);
        let g = gauss_binom(n, k, d).unwrap();
        prop_assert!(g.is_bar_invariant());
        prop_assert_eq!(&g, &gauss_binom(n, n - k, d).unwrap());
        let ordinary = (0..k).fold(1i64, |acc, j| acc * (n - j) / (j + 1));
        prop_assert_eq!(g.eval(&BigRational::one()), rat(ordinary));
    }

    #[test]
    fn geometric_series(d in 1i64..=3, order in 1i64..=12) {
        let tail = expand_at_infinity(&geometric_inverse(d), order);
        for e in -order..=0 {
            let want = if e % (2 * d) == 0 { rat(1) } else { rat(0) };
            prop_assert_eq!(tail.coeff(e), want);
        }
    }

    #[test]
    fn generic_extension_adds_dimensions(a in multisegment(3), b in multisegment(3)) {
        let ab = diamond(&a, &b);
        let sum: Vec<usize> = a.dims().iter().zip(b.dims()).map(|(x, y)| x + y).collect();
        prop_assert_eq!(ab.dims(), sum);
        prop_assert_eq!(diamond(&a, &Multisegment::zero(3)), a.clone());
        prop_assert_eq!(diamond(&Multisegment::zero(3), &b), b.clone());
    }

    #[test]
    fn generic_extension_is_associative(a in multisegment(2), b in multisegment(2), c in multisegment(2)) {
        prop_assert_eq!(diamond(&diamond(&a, &b), &c), diamond(&a, &diamond(&b, &c)));
    }

    #[test]
    fn direct_sum_degenerates_the_extension(a in multisegment(2), b in multisegment(3)) {
        let b2 = Multisegment::zero(2).plus(&a);
        prop_assert!(leq_g(&a.plus(&b2), &diamond(&a, &b2)).unwrap());
        let a3 = {
            let mut m = Multisegment::zero(3);
            m.add(0, 2, 1);
            m
        };
        prop_assert!(leq_g(&a3.plus(&b), &diamond(&a3, &b)).unwrap());
    }

    #[test]
    fn eta_respects_generic_extension(a in multisegment(2), b in multisegment(2)) {
        prop_assume!(a.is_aperiodic() && b.is_aperiodic());
        prop_assert_eq!(eta_fold(&diamond(&a, &b)), diamond(&eta_fold(&a), &eta_fold(&b)));
    }

    #[test]
    fn multisegment_text_round_trip(a in multisegment(3)) {
        let back: Multisegment = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn kostka_support_is_dominance((l, m) in partition().prop_flat_map(|l| {
        let all = Partition::all(l.size());
        (Just(l), prop::sample::select(all))
    })) {
        prop_assert_eq!(kostka(&l, &l), 1);
        prop_assert_eq!(kostka(&l, &m) > 0, dominance_leq(&m, &l));
    }

    #[test]
    fn reflections_are_isometric_involutions(x in prop::collection::vec(-4i64..=4, 3), i in 0usize..3, ctx in 0usize..2) {
        let name = ["a2tilde", "c2tilde-folded"][ctx];
        let Context::Quiver { quiver, .. } = name.parse::<Context>().unwrap() else { unreachable!() };
        let datum = cartan_of(&quiver);
        let y = reflect(&datum, i, &x);
        prop_assert_eq!(reflect(&datum, i, &y), x.clone());
        prop_assert_eq!(sym_form(&quiver, &y, &y), sym_form(&quiver, &x, &x));
    }

    #[test]
    fn finite_field_axioms(k in 0usize..6, a in any::<u8>(), b in any::<u8>(), c in any::<u8>()) {
        let q = [2u32, 3, 4, 5, 8, 9][k];
        let f = Gf::new(q).unwrap();
        let (a, b, c) = (a % q as u8, b % q as u8, c % q as u8);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }
}
