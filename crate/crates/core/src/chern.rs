//! Numerical classes of objects and the arithmetic on them.
//!
//! Two representations are used. [`ContractedClass`] is the six-number
//! shadow `(ch0, H^2·ch1, HF·ch1, H·ch2, F·ch2, ch3)` that every charge and
//! slope consumes; it makes sense on any fibred threefold. [`ChowClass`] is
//! the full numerical Chow class on `P(E)` in the basis `{1; H, F; H^2, HF; pt}`,
//! where products are computable; the two are related by [`contract`] and
//! [`lift`].

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::Result;
use crate::geometry::{DivisorClass, FibredGeometry};
use crate::pbundle::chern_contractions;
use crate::scalar::{sq, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContractedClass<S> {
    pub ch0: S,
    pub h2_ch1: S,
    pub hf_ch1: S,
    pub h_ch2: S,
    pub f_ch2: S,
    pub ch3: S,
}

impl<S: Scalar> ContractedClass<S> {
    pub fn new(ch0: S, h2_ch1: S, hf_ch1: S, h_ch2: S, f_ch2: S, ch3: S) -> Self {
        Self {
            ch0,
            h2_ch1,
            hf_ch1,
            h_ch2,
            f_ch2,
            ch3,
        }
    }

    pub fn zero() -> Self {
        Self::from_components([S::zero(), S::zero(), S::zero(), S::zero(), S::zero(), S::zero()])
    }

    /// Class of `O_X`.
    pub fn structure_sheaf() -> Self {
        let mut v = Self::zero();
        v.ch0 = S::one();
        v
    }

    /// Components in storage order `(ch0, H^2ch1, HFch1, Hch2, Fch2, ch3)`.
    pub fn components(&self) -> [S; 6] {
        [
            self.ch0.clone(),
            self.h2_ch1.clone(),
            self.hf_ch1.clone(),
            self.h_ch2.clone(),
            self.f_ch2.clone(),
            self.ch3.clone(),
        ]
    }

    pub fn from_components(c: [S; 6]) -> Self {
        let [ch0, h2_ch1, hf_ch1, h_ch2, f_ch2, ch3] = c;
        Self::new(ch0, h2_ch1, hf_ch1, h_ch2, f_ch2, ch3)
    }

    pub fn is_zero(&self) -> bool {
        self.components().iter().all(|c| c.is_zero())
    }

    pub fn scaled(&self, k: &S) -> Self {
        Self::from_components(self.components().map(|c| c * k.clone()))
    }
}

impl<S: Scalar> Add for ContractedClass<S> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let [a0, a1, a2, a3, a4, a5] = self.components();
        let [b0, b1, b2, b3, b4, b5] = rhs.components();
        Self::new(a0 + b0, a1 + b1, a2 + b2, a3 + b3, a4 + b4, a5 + b5)
    }
}

impl<S: Scalar> Neg for ContractedClass<S> {
    type Output = Self;

    fn neg(self) -> Self {
        Self::from_components(self.components().map(|c| -c))
    }
}

impl<S: Scalar> Sub for ContractedClass<S> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<'a, S: Scalar> Add<&'a ContractedClass<S>> for &'a ContractedClass<S> {
    type Output = ContractedClass<S>;

    fn add(self, rhs: Self) -> ContractedClass<S> {
        self.clone() + rhs.clone()
    }
}

impl<'a, S: Scalar> Sub<&'a ContractedClass<S>> for &'a ContractedClass<S> {
    type Output = ContractedClass<S>;

    fn sub(self, rhs: Self) -> ContractedClass<S> {
        self.clone() - rhs.clone()
    }
}

/// Full numerical Chow class on `P(E)`:
/// `ch1 = c1_h·H + c1_f·F`, `ch2 = c2_h2·H^2 + c2_hf·HF`, `ch3 = ch3·pt`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChowClass<S> {
    pub ch0: S,
    pub c1_h: S,
    pub c1_f: S,
    pub c2_h2: S,
    pub c2_hf: S,
    pub ch3: S,
}

impl<S: Scalar> ChowClass<S> {
    pub fn new(ch0: S, c1_h: S, c1_f: S, c2_h2: S, c2_hf: S, ch3: S) -> Self {
        Self {
            ch0,
            c1_h,
            c1_f,
            c2_h2,
            c2_hf,
            ch3,
        }
    }

    pub fn zero() -> Self {
        Self::new(S::zero(), S::zero(), S::zero(), S::zero(), S::zero(), S::zero())
    }

    pub fn structure_sheaf() -> Self {
        let mut v = Self::zero();
        v.ch0 = S::one();
        v
    }

    pub fn ch1(&self) -> DivisorClass<S> {
        DivisorClass::new(self.c1_h.clone(), self.c1_f.clone())
    }

    /// Class of the derived dual `RHom(-, O)`: signs `(+, -, +, -)` by degree.
    pub fn derived_dual(&self) -> Self {
        Self::new(
            self.ch0.clone(),
            -self.c1_h.clone(),
            -self.c1_f.clone(),
            self.c2_h2.clone(),
            self.c2_hf.clone(),
            -self.ch3.clone(),
        )
    }
}

impl<S: Scalar> Add for ChowClass<S> {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self::new(
            self.ch0 + o.ch0,
            self.c1_h + o.c1_h,
            self.c1_f + o.c1_f,
            self.c2_h2 + o.c2_h2,
            self.c2_hf + o.c2_hf,
            self.ch3 + o.ch3,
        )
    }
}

impl<S: Scalar> Neg for ChowClass<S> {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.ch0, -self.c1_h, -self.c1_f, -self.c2_h2, -self.c2_hf, -self.ch3)
    }
}

impl<S: Scalar> Mul<S> for ChowClass<S> {
    type Output = Self;

    fn mul(self, k: S) -> Self {
        Self::new(
            self.ch0 * k.clone(),
            self.c1_h * k.clone(),
            self.c1_f * k.clone(),
            self.c2_h2 * k.clone(),
            self.c2_hf * k.clone(),
            self.ch3 * k,
        )
    }
}

/// Contractions of `ch^{βH} = e^{-βH}·ch` against `1, H^2, HF, H, F, pt`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwistedComponents<S> {
    pub beta: S,
    pub ch0: S,
    pub h2_ch1b: S,
    pub hf_ch1b: S,
    pub h_ch2b: S,
    pub f_ch2b: S,
    pub ch3b: S,
}

impl<S: Scalar> TwistedComponents<S> {
    /// The twisted numbers repackaged as a contracted class.
    pub fn as_class(&self) -> ContractedClass<S> {
        ContractedClass::new(
            self.ch0.clone(),
            self.h2_ch1b.clone(),
            self.hf_ch1b.clone(),
            self.h_ch2b.clone(),
            self.f_ch2b.clone(),
            self.ch3b.clone(),
        )
    }
}

pub fn twist<S: Scalar>(v: &ContractedClass<S>, beta: &S, geom: &FibredGeometry<S>) -> TwistedComponents<S> {
    let b = beta.clone();
    let b2_half = sq(&b).half();
    let b3_sixth = sq(&b) * b.clone() / S::from_int(6);
    let (h3, h2f) = (geom.h3().clone(), geom.h2f().clone());
    TwistedComponents {
        beta: b.clone(),
        ch0: v.ch0.clone(),
        h2_ch1b: v.h2_ch1.clone() - b.clone() * h3.clone() * v.ch0.clone(),
        hf_ch1b: v.hf_ch1.clone() - b.clone() * h2f.clone() * v.ch0.clone(),
        h_ch2b: v.h_ch2.clone() - b.clone() * v.h2_ch1.clone()
            + b2_half.clone() * h3.clone() * v.ch0.clone(),
        f_ch2b: v.f_ch2.clone() - b.clone() * v.hf_ch1.clone() + b2_half.clone() * h2f * v.ch0.clone(),
        ch3b: v.ch3.clone() - b * v.h_ch2.clone() + b2_half * v.h2_ch1.clone() - b3_sixth * h3 * v.ch0.clone(),
    }
}

/// `D1 · D2` in the basis `{H^2, HF}`.
fn divisor_product<S: Scalar>(a: &DivisorClass<S>, b: &DivisorClass<S>) -> (S, S) {
    (
        a.x.clone() * b.x.clone(),
        a.x.clone() * b.y.clone() + a.y.clone() * b.x.clone(),
    )
}

/// Degree of `D · (c·H^2 + d·HF)` with `H^3 = e`, `H^2F = 1`.
fn divisor_curve_degree<S: Scalar>(d: &DivisorClass<S>, curve: (&S, &S), e: &S) -> S {
    let (c, hf) = curve;
    d.x.clone() * c.clone() * e.clone() + d.x.clone() * hf.clone() + d.y.clone() * c.clone()
}

/// `ch(V ⊗ O(D))` on `P(E)`.
pub fn tensor_by_divisor<S: Scalar>(
    v: &ChowClass<S>,
    d: &DivisorClass<S>,
    geom: &FibredGeometry<S>,
) -> Result<ChowClass<S>> {
    let e = S::from_int(geom.require_projective_bundle("tensor_by_divisor")?);
    let ch1 = v.ch1();
    let (dd_h2, dd_hf) = divisor_product(d, d);
    let (dc1_h2, dc1_hf) = divisor_product(d, &ch1);
    let d_ch2 = divisor_curve_degree(d, (&v.c2_h2, &v.c2_hf), &e);
    let dd_ch1 = divisor_curve_degree(&ch1, (&dd_h2, &dd_hf), &e);
    let d_cubed = divisor_curve_degree(d, (&dd_h2, &dd_hf), &e);
    Ok(ChowClass {
        ch0: v.ch0.clone(),
        c1_h: v.c1_h.clone() + d.x.clone() * v.ch0.clone(),
        c1_f: v.c1_f.clone() + d.y.clone() * v.ch0.clone(),
        c2_h2: v.c2_h2.clone() + dc1_h2 + dd_h2.half() * v.ch0.clone(),
        c2_hf: v.c2_hf.clone() + dc1_hf + dd_hf.half() * v.ch0.clone(),
        ch3: v.ch3.clone() + d_ch2 + dd_ch1.half() + d_cubed * v.ch0.clone() / S::from_int(6),
    })
}

/// `ch(O(D))` on `P(E)`.
pub fn line_bundle<S: Scalar>(d: &DivisorClass<S>, geom: &FibredGeometry<S>) -> Result<ChowClass<S>> {
    tensor_by_divisor(&ChowClass::structure_sheaf(), d, geom)
}

pub fn contract<S: Scalar>(v: &ChowClass<S>, geom: &FibredGeometry<S>) -> Result<ContractedClass<S>> {
    let e = S::from_int(geom.require_projective_bundle("contract")?);
    Ok(ContractedClass {
        ch0: v.ch0.clone(),
        h2_ch1: v.c1_h.clone() * e.clone() + v.c1_f.clone(),
        hf_ch1: v.c1_h.clone(),
        h_ch2: v.c2_h2.clone() * e + v.c2_hf.clone(),
        f_ch2: v.c2_h2.clone(),
        ch3: v.ch3.clone(),
    })
}

/// Inverse of [`contract`]; the pairing `[[e, 1], [1, 0]]` is unimodular.
pub fn lift<S: Scalar>(v: &ContractedClass<S>, geom: &FibredGeometry<S>) -> Result<ChowClass<S>> {
    let e = S::from_int(geom.require_projective_bundle("lift")?);
    Ok(ChowClass {
        ch0: v.ch0.clone(),
        c1_h: v.hf_ch1.clone(),
        c1_f: v.h2_ch1.clone() - e.clone() * v.hf_ch1.clone(),
        c2_h2: v.f_ch2.clone(),
        c2_hf: v.h_ch2.clone() - e * v.f_ch2.clone(),
        ch3: v.ch3.clone(),
    })
}

/// Class of `RHom(-, O)[1]`.
pub fn dual_class<S: Scalar>(v: &ContractedClass<S>) -> ContractedClass<S> {
    ContractedClass::new(
        -v.ch0.clone(),
        v.h2_ch1.clone(),
        v.hf_ch1.clone(),
        -v.h_ch2.clone(),
        -v.f_ch2.clone(),
        v.ch3.clone(),
    )
}

/// Class of `E[k]`.
pub fn shift_class<S: Scalar>(v: &ContractedClass<S>, k: i64) -> ContractedClass<S> {
    if k.rem_euclid(2) == 0 {
        v.clone()
    } else {
        -v.clone()
    }
}

/// Pushforward of a class of rank `r`, `H`-degree `d` and `ch2`-length `l`
/// living on a single fiber.
pub fn pushforward_fiber_class<S: Scalar>(geom: &FibredGeometry<S>, r: &S, d: &S, l: &S) -> ContractedClass<S> {
    ContractedClass::new(
        S::zero(),
        r.clone() * geom.h2f().clone(),
        S::zero(),
        d.clone(),
        S::zero(),
        l.clone(),
    )
}

/// Class of the restriction to one fiber pushed back to `X`, i.e. `F·ch`.
pub fn fiber_restriction_class<S: Scalar>(v: &ContractedClass<S>, geom: &FibredGeometry<S>) -> ContractedClass<S> {
    ContractedClass::new(
        S::zero(),
        geom.h2f().clone() * v.ch0.clone(),
        S::zero(),
        v.hf_ch1.clone(),
        S::zero(),
        v.f_ch2.clone(),
    )
}

/// `χ(E)` on `P(E)` by Hirzebruch–Riemann–Roch with
/// `td(X) = 1 + c1/2 + (c1^2 + c2)/12 + χ(O_X)·pt`.
pub fn euler_char<S: Scalar>(v: &ContractedClass<S>, geom: &FibredGeometry<S>) -> Result<S> {
    let cc = chern_contractions(geom)?;
    Ok(v.ch3.clone()
        + cc.c1_with_curve(&v.h_ch2, &v.f_ch2).half()
        + cc.c1sq_plus_c2_with_divisor(&v.h2_ch1, &v.hf_ch1) / S::from_int(12)
        + cc.chi_o.clone() * v.ch0.clone())
}

/// Membership in `Z ⊕ Z ⊕ Z ⊕ ½Z ⊕ ½Z ⊕ ⅙Z`.
pub fn validate_integrality<S: Scalar>(v: &ContractedClass<S>) -> bool {
    LATTICE_DENOMINATORS
        .iter()
        .zip(v.components())
        .all(|(&den, c)| (c * S::from_int(den)).is_integral())
}

/// Denominators of the integral lattice, per component in storage order.
pub const LATTICE_DENOMINATORS: [i64; 6] = [1, 1, 1, 2, 2, 6];

/// Classical discriminants `(F·Δ, H·Δ)` with `Δ = ch1^2 - 2 ch0 ch2`.
pub fn classical_discriminants<S: Scalar>(v: &ChowClass<S>, geom: &FibredGeometry<S>) -> Result<(S, S)> {
    let e = S::from_int(geom.require_projective_bundle("classical_discriminants")?);
    let ch1 = v.ch1();
    let (sq_h2, sq_hf) = divisor_product(&ch1, &ch1);
    let two_r = S::from_int(2) * v.ch0.clone();
    let delta_h2 = sq_h2 - two_r.clone() * v.c2_h2.clone();
    let delta_hf = sq_hf - two_r * v.c2_hf.clone();
    let f_delta = delta_h2.clone();
    let h_delta = delta_h2 * e + delta_hf;
    Ok((f_delta, h_delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn z(n: i64) -> Rational {
        q(n, 1)
    }

    fn pb(g: i64, e: i64) -> FibredGeometry<Rational> {
        FibredGeometry::projective_bundle(g, e).unwrap()
    }

    fn cc(c: [(i64, i64); 6]) -> ContractedClass<Rational> {
        ContractedClass::from_components(c.map(|(n, d)| q(n, d)))
    }

    fn o_h(geom: &FibredGeometry<Rational>) -> ContractedClass<Rational> {
        contract(&line_bundle(&DivisorClass::h(), geom).unwrap(), geom).unwrap()
    }

    #[test]
    fn twist_of_structure_sheaf() {
        let t = twist(&ContractedClass::structure_sheaf(), &z(-1), &pb(0, 0));
        assert_eq!(t.hf_ch1b, z(1));
        assert_eq!(t.f_ch2b, q(1, 2));
        assert_eq!(t.h2_ch1b, z(0));
        assert_eq!(t.h_ch2b, z(0));
        assert_eq!(t.ch3b, z(0));
    }

    #[test]
    fn twist_by_zero_is_identity() {
        let v = cc([(3, 1), (-2, 1), (5, 1), (1, 2), (-7, 2), (5, 6)]);
        assert_eq!(twist(&v, &z(0), &pb(1, 2)).as_class(), v);
    }

    #[test]
    fn twisting_o_h_by_h_gives_structure_sheaf() {
        let geom = pb(0, 1);
        let v = o_h(&geom);
        assert_eq!(v, cc([(1, 1), (1, 1), (1, 1), (1, 2), (1, 2), (1, 6)]));
        let t = twist(&v, &z(1), &geom);
        assert_eq!(t.as_class(), ContractedClass::structure_sheaf());
    }

    #[test]
    fn tensor_examples() {
        let geom = pb(0, 1);
        let oh = line_bundle(&DivisorClass::h(), &geom).unwrap();
        assert_eq!(oh, ChowClass::new(z(1), z(1), z(0), q(1, 2), z(0), q(1, 6)));
        let v = ChowClass::new(z(2), q(1, 3), z(-1), z(4), q(1, 2), z(7));
        let same = tensor_by_divisor(&v, &DivisorClass::new(z(0), z(0)), &geom).unwrap();
        assert_eq!(same, v);
        for m in -4..=4 {
            let l = line_bundle(&DivisorClass::new(z(0), z(m)), &geom).unwrap();
            assert_eq!(l, ChowClass::new(z(1), z(0), z(m), z(0), z(0), z(0)));
        }
    }

    #[test]
    fn generic_geometry_is_unsupported_for_ring_operations() {
        let g = FibredGeometry::generic(1, q(5, 2), z(1)).unwrap();
        let v = ChowClass::structure_sheaf();
        assert!(tensor_by_divisor(&v, &DivisorClass::h(), &g).is_err());
        assert!(contract(&v, &g).is_err());
        assert!(lift(&ContractedClass::structure_sheaf(), &g).is_err());
        assert!(euler_char(&ContractedClass::structure_sheaf(), &g).is_err());
    }

    #[test]
    fn contract_examples() {
        let geom = pb(0, 0);
        let oh = ChowClass::new(z(1), z(1), z(0), q(1, 2), z(0), z(0));
        assert_eq!(contract(&oh, &geom).unwrap(), cc([(1, 1), (0, 1), (1, 1), (0, 1), (1, 2), (0, 1)]));
        assert_eq!(
            contract(&ChowClass::structure_sheaf(), &geom).unwrap(),
            ContractedClass::structure_sheaf()
        );
        assert_eq!(o_h(&pb(0, 1)), cc([(1, 1), (1, 1), (1, 1), (1, 2), (1, 2), (1, 6)]));
    }

    #[test]
    fn lift_examples() {
        let geom = pb(0, 0);
        let v = cc([(1, 1), (0, 1), (1, 1), (0, 1), (1, 2), (0, 1)]);
        assert_eq!(lift(&v, &geom).unwrap(), ChowClass::new(z(1), z(1), z(0), q(1, 2), z(0), z(0)));
        assert_eq!(lift(&ContractedClass::zero(), &geom).unwrap(), ChowClass::zero());
    }

    #[test]
    fn dual_and_shift() {
        assert_eq!(
            dual_class(&ContractedClass::<Rational>::structure_sheaf()),
            cc([(-1, 1), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1)])
        );
        assert_eq!(
            dual_class(&o_h(&pb(0, 0))),
            cc([(-1, 1), (0, 1), (1, 1), (0, 1), (-1, 2), (0, 1)])
        );
        let of = cc([(0, 1), (1, 1), (0, 1), (0, 1), (0, 1), (0, 1)]);
        assert_eq!(shift_class(&of, 0), of);
        assert_eq!(shift_class(&of, 1), cc([(0, 1), (-1, 1), (0, 1), (0, 1), (0, 1), (0, 1)]));
        assert_eq!(shift_class(&of, 2), of);
        assert_eq!(shift_class(&of, -1), -of.clone());
    }

    #[test]
    fn fiber_classes() {
        let g0 = pb(0, 0);
        assert_eq!(
            pushforward_fiber_class(&g0, &z(1), &z(0), &z(0)),
            cc([(0, 1), (1, 1), (0, 1), (0, 1), (0, 1), (0, 1)])
        );
        let g1 = pb(0, 1);
        let of1 = pushforward_fiber_class(&g1, &z(1), &z(1), &q(1, 2));
        assert_eq!(of1, cc([(0, 1), (1, 1), (0, 1), (1, 1), (0, 1), (1, 2)]));
        assert!(pushforward_fiber_class(&g1, &z(0), &z(0), &z(0)).is_zero());

        assert_eq!(fiber_restriction_class(&o_h(&g1), &g1), of1);
        let gen = FibredGeometry::generic(0, z(2), z(3)).unwrap();
        assert_eq!(
            fiber_restriction_class(&ContractedClass::structure_sheaf(), &gen),
            cc([(0, 1), (3, 1), (0, 1), (0, 1), (0, 1), (0, 1)])
        );
        let vertical = cc([(0, 1), (4, 1), (0, 1), (2, 1), (0, 1), (9, 1)]);
        assert!(fiber_restriction_class(&vertical, &g1).is_zero());
    }

    #[test]
    fn euler_characteristic_examples() {
        for g in 0..=3 {
            for e in [-2, 0, 1, 5] {
                let chi = euler_char(&ContractedClass::structure_sheaf(), &pb(g, e)).unwrap();
                assert_eq!(chi, z(1 - g));
            }
        }
        // Künneth: χ(P^2, O(1)) · χ(P^1, O) = 3.
        assert_eq!(euler_char(&o_h(&pb(0, 0)), &pb(0, 0)).unwrap(), z(3));
        // Riemann–Roch on the base: χ(C, E) = deg E + 3(1 - g).
        assert_eq!(euler_char(&o_h(&pb(0, 1)), &pb(0, 1)).unwrap(), z(4));
    }

    #[test]
    fn lattice_membership() {
        assert!(validate_integrality(&cc([(1, 1), (0, 1), (0, 1), (0, 1), (0, 1), (1, 6)])));
        assert!(!validate_integrality(&cc([(1, 1), (0, 1), (0, 1), (1, 3), (0, 1), (0, 1)])));
        assert!(validate_integrality(&cc([(0, 1), (1, 1), (0, 1), (1, 2), (-1, 2), (0, 1)])));
        assert!(!validate_integrality(&cc([(1, 2), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1)])));
    }

    #[test]
    fn classical_discriminant_of_line_bundles_vanishes() {
        let geom = pb(1, 3);
        for (a, b) in [(1, 0), (2, -3), (-1, 5)] {
            let l = line_bundle(&DivisorClass::new(z(a), z(b)), &geom).unwrap();
            assert_eq!(classical_discriminants(&l, &geom).unwrap(), (z(0), z(0)));
        }
        // Ideal sheaf of a line in a fiber: ch = (1, 0, -[line], ...), Δ = 2[line].
        let ideal = ChowClass::new(z(1), z(0), z(0), z(0), z(-1), z(0));
        assert_eq!(classical_discriminants(&ideal, &geom).unwrap(), (z(0), z(2)));
    }
}
