#![allow(dead_code)]

use fibtilt::chern::{ChowClass, ContractedClass};
use fibtilt::geometry::{DivisorClass, FibredGeometry};
use fibtilt::{Rational, Scalar};
use proptest::prelude::*;
use rand::Rng;

pub type Geom = FibredGeometry<Rational>;
pub type Cls = ContractedClass<Rational>;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::ratio(n, d)
}

pub fn z(n: i64) -> Rational {
    q(n, 1)
}

pub fn pb(g: i64, e: i64) -> Geom {
    FibredGeometry::projective_bundle(g, e).unwrap()
}

pub fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=9).prop_map(|(n, d)| q(n, d))
}

pub fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..=40, 1i64..=9).prop_map(|(n, d)| q(n, d))
}

pub fn nonnegative_rational() -> impl Strategy<Value = Rational> {
    (0i64..=40, 1i64..=9).prop_map(|(n, d)| q(n, d))
}

pub fn class() -> impl Strategy<Value = Cls> {
    proptest::array::uniform6(rational()).prop_map(ContractedClass::from_components)
}

/// Classes in the integral lattice `Z^3 ⊕ (½Z)^2 ⊕ ⅙Z`.
pub fn integral_class() -> impl Strategy<Value = Cls> {
    proptest::array::uniform6(-12i64..=12).prop_map(|c| {
        ContractedClass::new(z(c[0]), z(c[1]), z(c[2]), q(c[3], 2), q(c[4], 2), q(c[5], 6))
    })
}

pub fn chow() -> impl Strategy<Value = ChowClass<Rational>> {
    proptest::array::uniform6(rational())
        .prop_map(|c| ChowClass::new(c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone(), c[4].clone(), c[5].clone()))
}

pub fn pb_geometry() -> impl Strategy<Value = Geom> {
    (0i64..=4, -3i64..=5).prop_map(|(g, e)| pb(g, e))
}

pub fn any_geometry() -> impl Strategy<Value = Geom> {
    prop_oneof![
        pb_geometry(),
        (0i64..=3, rational(), positive_rational()).prop_map(|(g, h3, h2f)| FibredGeometry::generic(g, h3, h2f).unwrap()),
    ]
}

pub fn divisor() -> impl Strategy<Value = DivisorClass<Rational>> {
    (rational(), rational()).prop_map(|(x, y)| DivisorClass::new(x, y))
}

/// Random rational from a seeded generator, for fixed-count loops.
pub fn rand_q(rng: &mut impl Rng, span: i64, max_den: i64) -> Rational {
    q(rng.gen_range(-span..=span), rng.gen_range(1..=max_den))
}

pub fn rand_class(rng: &mut impl Rng) -> Cls {
    ContractedClass::from_components(std::array::from_fn(|_| rand_q(rng, 30, 8)))
}

pub fn rand_integral_class(rng: &mut impl Rng) -> Cls {
    let mut n = || rng.gen_range(-10i64..=10);
    ContractedClass::new(z(n()), z(n()), z(n()), q(n(), 2), q(n(), 2), q(n(), 6))
}

pub fn rand_pb(rng: &mut impl Rng) -> Geom {
    pb(rng.gen_range(0..=4), rng.gen_range(-3..=5))
}

pub fn rand_geometry(rng: &mut impl Rng) -> Geom {
    if rng.gen_bool(0.5) {
        rand_pb(rng)
    } else {
        let h2f = q(rng.gen_range(1..=12), rng.gen_range(1..=4));
        FibredGeometry::generic(rng.gen_range(0..=3), rand_q(rng, 12, 4), h2f).unwrap()
    }
}
