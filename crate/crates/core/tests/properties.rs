mod common;

use std::collections::BTreeMap;

use common::*;
use fibtilt::charge::Slope;
use fibtilt::chern::{
    contract, dual_class, euler_char, fiber_restriction_class, lift, line_bundle, pushforward_fiber_class, shift_class,
    tensor_by_divisor, twist, ContractedClass,
};
use fibtilt::geometry::{hodge_sides_1, hodge_sides_2, DivisorClass};
use fibtilt::pbundle::{self, ConjectureCoefficients};
use fibtilt::slopes::{hn_filtration, mu_hf, z_base, z_base_torsion, SlopeFunction, SubobjectLattice};
use fibtilt::tilt::{
    delta_bar, delta_tilde, delta_tilde_t, heart_membership_necessary, nu_mixed, nu_relative, z_mixed, z_relative,
    z_relative_torsion, TiltParams,
};
use fibtilt::walls::{self, EnumerationBounds, SearchDirection, WallSolution};
use fibtilt::{Rational, Scalar};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = TiltParams<Rational>> {
    (positive_rational(), rational(), nonnegative_rational()).prop_map(|(a, b, t)| TiltParams::new(a, b, t).unwrap())
}

/// Whether `s` lies weakly between `a` and `b`.
fn between(s: &Slope<Rational>, a: &Slope<Rational>, b: &Slope<Rational>) -> bool {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    lo <= s && s <= hi
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hodge_inequalities(g in any_geometry(), d in divisor()) {
        let one = hodge_sides_1(&g, &d);
        prop_assert_eq!(&one.lhs, &one.rhs);
        if !g.h3().is_negative() {
            let two = hodge_sides_2(&g, &d);
            prop_assert!(two.holds());
            prop_assert_eq!(two.gap(), d.x.clone() * d.x.clone() * g.h3().clone() * g.h2f().clone());
        }
    }

    #[test]
    fn twist_matches_tensor(g in pb_geometry(), v in chow(), beta in rational()) {
        let lhs = twist(&contract(&v, &g).unwrap(), &beta, &g).as_class();
        let rhs = contract(&tensor_by_divisor(&v, &DivisorClass::new(-beta, z(0)), &g).unwrap(), &g).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn twist_composes(g in pb_geometry(), v in chow(), b1 in rational(), b2 in rational()) {
        let shifted = tensor_by_divisor(&v, &DivisorClass::new(-b1.clone(), z(0)), &g).unwrap();
        let lhs = twist(&contract(&shifted, &g).unwrap(), &b2, &g).as_class();
        let rhs = twist(&contract(&v, &g).unwrap(), &(b1 + b2), &g).as_class();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lift_inverts_contract(g in pb_geometry(), v in class()) {
        prop_assert_eq!(contract(&lift(&v, &g).unwrap(), &g).unwrap(), v);
    }

    #[test]
    fn dual_shift_and_additivity(g in pb_geometry(), v in class(), w in class()) {
        prop_assert_eq!(dual_class(&dual_class(&v)), v.clone());
        prop_assert_eq!(shift_class(&v, 1), -v.clone());
        prop_assert_eq!(shift_class(&v, -2), v.clone());
        let sum = euler_char(&(&v + &w), &g).unwrap();
        prop_assert_eq!(sum, euler_char(&v, &g).unwrap() + euler_char(&w, &g).unwrap());
    }

    /// `χ(E) = -χ(E^∨ ⊗ ω_X)`; `dual_class` is `E^∨[1]`, which absorbs the sign.
    #[test]
    fn serre_duality(g in pb_geometry(), v in integral_class()) {
        let k = pbundle::canonical_class(&g).unwrap();
        let twisted = tensor_by_divisor(&lift(&dual_class(&v), &g).unwrap(), &k, &g).unwrap();
        let rhs = euler_char(&contract(&twisted, &g).unwrap(), &g).unwrap();
        prop_assert_eq!(euler_char(&v, &g).unwrap(), rhs);
    }

    #[test]
    fn z_bridge(g in any_geometry(), v in class(), alpha_sq in positive_rational(), beta in rational()) {
        let restricted = fiber_restriction_class(&v, &g);
        prop_assert_eq!(z_base(&v, &g), z_base_torsion(&restricted));
        prop_assert_eq!(
            z_relative(&v, &alpha_sq, &beta, &g),
            z_relative_torsion(&restricted, &alpha_sq, &beta, &g)
        );
    }

    #[test]
    fn fiber_classes_are_invisible(
        g in any_geometry(), r in rational(), d in rational(), l in rational(),
        alpha_sq in positive_rational(), beta in rational(),
    ) {
        let v = pushforward_fiber_class(&g, &r, &d, &l);
        prop_assert!(z_relative(&v, &alpha_sq, &beta, &g).is_zero());
    }

    #[test]
    fn see_saw(g in any_geometry(), a in class(), b in class()) {
        let (za, zb) = (z_base(&a, &g), z_base(&b, &g));
        if za.im.is_positive() && zb.im.is_positive() {
            prop_assert!(between(&z_base(&(&a + &b), &g).slope(), &za.slope(), &zb.slope()));
        }
        let (ta, tb) = (z_base_torsion(&a), z_base_torsion(&b));
        if ta.im.is_positive() && tb.im.is_positive() {
            prop_assert!(between(&z_base_torsion(&(&a + &b)).slope(), &ta.slope(), &tb.slope()));
        }
    }

    #[test]
    fn slope_is_minus_re_over_im(g in any_geometry(), v in class(), p in params()) {
        for z in [z_base(&v, &g), z_relative(&v, &p.alpha_sq, &p.beta, &g), z_mixed(&v, &p, &g)] {
            if !z.im.is_zero() {
                prop_assert_eq!(z.slope(), Slope::Finite(-z.re.clone() / z.im.clone()));
            } else {
                prop_assert_eq!(z.slope(), Slope::PlusInfinity);
            }
        }
        prop_assert_eq!(mu_hf(&v, &g), z_base(&v, &g).slope());
    }

    #[test]
    fn f_twist_invariance(g in pb_geometry(), v in chow(), m in -6i64..=6, beta in rational()) {
        let base = contract(&v, &g).unwrap();
        let moved = contract(&tensor_by_divisor(&v, &DivisorClass::new(z(0), z(m)), &g).unwrap(), &g).unwrap();
        prop_assert_eq!(delta_tilde(&moved, &beta, &g), delta_tilde(&base, &beta, &g));
        if !v.ch0.is_zero() {
            prop_assert_eq!(mu_hf(&moved, &g), mu_hf(&base, &g));
        }
        let tb = twist(&base, &beta, &g);
        if tb.hf_ch1b.is_positive() {
            prop_assert_eq!(
                heart_membership_necessary(&moved, &beta, &g),
                heart_membership_necessary(&base, &beta, &g)
            );
        }
    }

    #[test]
    fn delta_bar_beta_independent(g in any_geometry(), v in class(), b1 in rational(), b2 in rational()) {
        prop_assert_eq!(delta_bar(&v, &b1, &g), delta_bar(&v, &b2, &g));
    }

    #[test]
    fn delta_tilde_t_expansion(g in any_geometry(), v in class(), beta in rational(), t in nonnegative_rational()) {
        let hf = twist(&v, &beta, &g).hf_ch1b;
        let half_t = t.clone() / z(2);
        let rhs = delta_tilde(&v, &beta, &g) + half_t.clone() * delta_bar(&v, &beta, &g) + half_t * hf.clone() * hf;
        prop_assert_eq!(delta_tilde_t(&v, &beta, &t, &g), rhs);
    }

    #[test]
    fn mixed_slope_decomposition(g in any_geometry(), v in class(), p in params()) {
        let p0 = TiltParams::new(p.alpha_sq.clone(), p.beta.clone(), z(0)).unwrap();
        let full = nu_mixed(&v, &p, &g);
        match (nu_mixed(&v, &p0, &g), nu_relative(&v, &p.alpha_sq, &p.beta, &g)) {
            (Slope::Finite(a), Slope::Finite(b)) => prop_assert_eq!(full, Slope::Finite(a + p.t.clone() * b)),
            (a, b) => {
                prop_assert!(a.is_infinite() && b.is_infinite());
                prop_assert!(full.is_infinite());
            }
        }
    }

    #[test]
    fn wall_residue_symmetry_and_scale(
        g in any_geometry(), v in class(), w in class(), beta in rational(), t in nonnegative_rational(),
        k in positive_rational(),
    ) {
        let sol = walls::wall_alpha_sq(&v, &w, &beta, &t, &g);
        prop_assert_eq!(&sol, &walls::wall_alpha_sq(&w, &v, &beta, &t, &g));
        prop_assert_eq!(&sol, &walls::wall_alpha_sq(&v, &w.scaled(&k), &beta, &t, &g));
        if let WallSolution::AtAlphaSq(a) = sol {
            prop_assert!(walls::alignment_residue(&v, &w, &a, &beta, &t, &g).is_zero());
        }
    }

    #[test]
    fn first_wall_ignores_candidate_order(
        g in any_geometry(), v in class(), cands in proptest::collection::vec(class(), 1..8),
        beta in rational(), start in positive_rational(), seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut shuffled = cands.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        for dir in [SearchDirection::Below, SearchDirection::Above] {
            prop_assert_eq!(
                walls::first_wall(&v, &cands, &beta, &z(0), &start, dir, &g),
                walls::first_wall(&v, &shuffled, &beta, &z(0), &start, dir, &g)
            );
        }
    }

    #[test]
    fn margin_is_additive(g in pb_geometry(), v in class(), w in class(), p in params(), a1 in positive_rational(),
                          rest in proptest::array::uniform4(rational())) {
        let [b1, a2, b2, c] = rest;
        let coeffs = ConjectureCoefficients::new(a1, b1, a2, b2, c).unwrap();
        let m = |x: &ContractedClass<Rational>| pbundle::conjecture_margin(x, &p, &coeffs, &g).unwrap();
        prop_assert_eq!(m(&v) + m(&w), m(&(&v + &w)));
    }

    #[test]
    fn zl_imaginary_part(g in pb_geometry(), v in class(), p in params(), l in rational(), a1 in positive_rational()) {
        let coeffs = ConjectureCoefficients::new(a1, z(1), z(0), z(0), z(0)).unwrap();
        let zl = pbundle::z_l(&v, &p, &l, &coeffs, &g);
        prop_assert_eq!(zl.value.im.clone(), -z_mixed(&v, &p, &g).re);
        let padded = pbundle::z_l(&(&v + &ContractedClass::zero()), &p, &l, &coeffs, &g);
        prop_assert_eq!(padded.value.re, zl.value.re);
    }

    #[test]
    fn closed_forms_match_nu_mixed(g in pb_geometry(), p in params()) {
        let oh = pbundle::oh_class(&g).unwrap();
        if let Ok(s) = pbundle::slope_of_oh(&p, &g) {
            prop_assert_eq!(Slope::Finite(s), nu_mixed(&oh, &p, &g));
        }
        let k = pbundle::shifted_canonical_twist_class(&g).unwrap();
        if let Ok(s) = pbundle::slope_of_shifted_canonical_twist(&p, &g) {
            prop_assert_eq!(Slope::Finite(s), nu_mixed(&k, &p, &g));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Every listed class `w` with `v - w` inside the box has `v - w` listed too.
    #[test]
    fn enumeration_complement_closure(
        g in (0i64..=1, 0i64..=2).prop_map(|(g, e)| pb(g, e)),
        ch0 in -1i64..=2, hf in 1i64..=2, rest in proptest::array::uniform4(-2i64..=2),
        beta in prop_oneof![Just(q(-1, 2)), Just(z(0)), Just(q(-3, 2))],
    ) {
        let v = ContractedClass::new(z(ch0), z(rest[0]), z(hf), q(rest[1], 2), q(rest[2], 2), q(rest[3], 6));
        let bounds = EnumerationBounds::integer_grid(std::array::from_fn(|i| z([2, 2, 2, 1, 1, 1][i])));
        let Ok(found) = walls::enumerate_destabilizer_classes(&v, &beta, &z(0), &g, &bounds) else {
            return Ok(());
        };
        for w in &found {
            let c = &v - w;
            if bounds.contains(&c) {
                prop_assert!(found.contains(&c), "missing complement {:?}", c);
            }
        }
    }

    /// Oracle: on the boolean lattice of subsets of pieces of positive rank,
    /// the filtration slopes are the distinct piece slopes in
    /// decreasing order.
    #[test]
    fn hn_matches_sorted_piece_slopes(
        g in any_geometry(),
        pieces in proptest::collection::vec(
            (1i64..=6, rational(), rational(), rational(), rational(), rational()), 1..=4),
    ) {
        let pieces: Vec<ContractedClass<Rational>> = pieces
            .into_iter()
            .map(|(r, a, b, c, d, e)| ContractedClass::new(z(r), a, b, c, d, e))
            .collect();
        let n = pieces.len();
        let mut nodes = BTreeMap::new();
        let mut edges = Vec::new();
        let name = |m: usize| format!("s{m:02}");
        for mask in 1usize..(1 << n) {
            let sum = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .fold(ContractedClass::zero(), |acc, i| &acc + &pieces[i]);
            nodes.insert(name(mask), sum);
            for i in 0..n {
                let sub = mask & !(1 << i);
                if sub != mask && sub != 0 {
                    edges.push((name(sub), name(mask)));
                }
            }
        }
        let lat = SubobjectLattice::new(nodes, &edges, name((1 << n) - 1)).unwrap();
        let hn = hn_filtration(&lat, &SlopeFunction::MuHf, &g).unwrap();

        let mut expected: Vec<Slope<Rational>> = pieces.iter().map(|p| mu_hf(p, &g)).collect();
        expected.sort_by(|a, b| b.partial_cmp(a).unwrap());
        expected.dedup();
        let got: Vec<Slope<Rational>> = hn.factors.iter().map(|f| f.slope.clone()).collect();
        prop_assert_eq!(got, expected);

        let total = hn.factors.iter().fold(ContractedClass::zero(), |acc, f| &acc + &f.class);
        prop_assert_eq!(&total, lat.class(lat.root()).unwrap());
    }
}

#[test]
fn grr_matches_kunneth() {
    let g = pb(0, 0);
    for a in -5i64..=5 {
        for b in -5i64..=5 {
            let v = contract(&line_bundle(&DivisorClass::new(z(a), z(b)), &g).unwrap(), &g).unwrap();
            assert_eq!(euler_char(&v, &g).unwrap(), z((a + 1) * (a + 2) / 2 * (b + 1)));
        }
    }
}

#[test]
fn bmt_identity_on_grid() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for beta in [q(-3, 2), z(-1), q(-1, 2), z(0), q(1, 2)] {
        for gg in 0..=2 {
            for e in [-1, 0, 1, 3] {
                let g = pb(gg, e);
                let c = pbundle::bmt_coefficients(&beta, &g).unwrap();
                for _ in 0..200 {
                    let v = rand_integral_class(&mut rng);
                    let chi = pbundle::euler_char_twisted_down(&v, &g).unwrap();
                    assert_eq!(chi, c.identity_rhs(&v, &g));
                }
            }
        }
    }
}

#[test]
fn scalar_genericity_f64() {
    use fibtilt::geometry::FibredGeometry;
    let g = FibredGeometry::<f64>::projective_bundle(0, 0).unwrap();
    let oh = contract(&line_bundle(&DivisorClass::h(), &g).unwrap(), &g).unwrap();
    assert_eq!(euler_char(&oh, &g).unwrap(), 3.0);
    let p = TiltParams::new(1.0f64, 0.0, 2.0).unwrap();
    assert_eq!(nu_mixed(&oh, &p, &g), Slope::Finite(-0.5));
    let exact = nu_mixed(
        &contract(&line_bundle(&DivisorClass::h(), &pb(0, 0)).unwrap(), &pb(0, 0)).unwrap(),
        &TiltParams::new(z(1), z(0), z(2)).unwrap(),
        &pb(0, 0),
    );
    assert_eq!(exact.finite().unwrap().to_f64_approx(), -0.5);
}
