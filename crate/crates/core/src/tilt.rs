//! Relative and mixed tilt charges, their slopes, the heart sign pattern and
//! the Bogomolov-type discriminants.
//!
//! Every charge here is computed from [`twist`], so the binomial expansion of
//! `e^{-βH}·ch` lives in exactly one place.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::charge::{ChargeValue, Slope};
use crate::chern::{twist, ContractedClass, TwistedComponents};
use crate::error::{Error, Result};
use crate::geometry::{DivisorClass, FibredGeometry};
use crate::scalar::{sq, Scalar};
use crate::slopes::resolve_torsion;

/// `(α², β, t)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TiltParams<S> {
    pub alpha_sq: S,
    pub beta: S,
    pub t: S,
}

impl<S: Scalar> TiltParams<S> {
    /// Requires `α² > 0` and `t >= 0`.
    pub fn new(alpha_sq: S, beta: S, t: S) -> Result<Self> {
        if alpha_sq <= S::zero() {
            return Err(Error::InvalidParams(format!("alpha^2 must be positive, got {alpha_sq}")));
        }
        Self::with_degenerate_alpha(alpha_sq, beta, t)
    }

    /// Like [`TiltParams::new`] but admits `α² = 0`, the limit used when
    /// locating walls. Check [`TiltParams::is_degenerate`] before treating
    /// the result as a stability parameter.
    pub fn with_degenerate_alpha(alpha_sq: S, beta: S, t: S) -> Result<Self> {
        if alpha_sq < S::zero() {
            return Err(Error::InvalidParams(format!("alpha^2 must be non-negative, got {alpha_sq}")));
        }
        if t < S::zero() {
            return Err(Error::InvalidParams(format!("t must be non-negative, got {t}")));
        }
        Ok(Self { alpha_sq, beta, t })
    }

    pub fn is_degenerate(&self) -> bool {
        self.alpha_sq.is_zero()
    }
}

/// `z^{α,β}_{H,F} = (α²/2)·H^2F·ch0 - F·ch2^β + i·HF·ch1^β`.
pub fn z_relative<S: Scalar>(v: &ContractedClass<S>, alpha_sq: &S, beta: &S, geom: &FibredGeometry<S>) -> ChargeValue<S> {
    let tw = twist(v, beta, geom);
    ChargeValue::new(
        alpha_sq.half() * geom.h2f().clone() * tw.ch0 - tw.f_ch2b,
        tw.hf_ch1b,
    )
}

/// `Z^{α,β}_{C-tor} = (α²/2)·H^2·ch1^β - ch3^β + i·H·ch2^β`.
pub fn z_relative_torsion<S: Scalar>(
    v: &ContractedClass<S>,
    alpha_sq: &S,
    beta: &S,
    geom: &FibredGeometry<S>,
) -> ChargeValue<S> {
    let tw = twist(v, beta, geom);
    ChargeValue::new(alpha_sq.half() * tw.h2_ch1b - tw.ch3b, tw.h_ch2b)
}

pub fn nu_relative<S: Scalar>(v: &ContractedClass<S>, alpha_sq: &S, beta: &S, geom: &FibredGeometry<S>) -> Slope<S> {
    z_relative(v, alpha_sq, beta, geom).slope()
}

/// `z_{α,β,t} = ((t+1)α²/2)·H^2F·ch0 - (H + tF)·ch2^β + i·HF·ch1^β`.
pub fn z_mixed<S: Scalar>(v: &ContractedClass<S>, p: &TiltParams<S>, geom: &FibredGeometry<S>) -> ChargeValue<S> {
    let tw = twist(v, &p.beta, geom);
    z_mixed_from_twisted(&tw, &p.alpha_sq, &p.t, geom)
}

pub(crate) fn z_mixed_from_twisted<S: Scalar>(
    tw: &TwistedComponents<S>,
    alpha_sq: &S,
    t: &S,
    geom: &FibredGeometry<S>,
) -> ChargeValue<S> {
    let t1 = t.clone() + S::one();
    ChargeValue::new(
        (t1 * alpha_sq.clone()).half() * geom.h2f().clone() * tw.ch0.clone()
            - (tw.h_ch2b.clone() + t.clone() * tw.f_ch2b.clone()),
        tw.hf_ch1b.clone(),
    )
}

pub fn nu_mixed<S: Scalar>(v: &ContractedClass<S>, p: &TiltParams<S>, geom: &FibredGeometry<S>) -> Slope<S> {
    z_mixed(v, p, geom).slope()
}

/// The charge `Z^{α,β}_C`: the relative charge off C-torsion classes, the
/// torsion charge on them.
pub fn z_c_alpha_beta<S: Scalar>(
    v: &ContractedClass<S>,
    alpha_sq: &S,
    beta: &S,
    geom: &FibredGeometry<S>,
    hint: Option<bool>,
) -> Result<ChargeValue<S>> {
    if resolve_torsion(&v.ch0, &v.hf_ch1, hint)? {
        Ok(z_relative_torsion(v, alpha_sq, beta, geom))
    } else {
        Ok(z_relative(v, alpha_sq, beta, geom))
    }
}

/// `ν^{α,β}_C`.
pub fn nu_c_alpha_beta<S: Scalar>(
    v: &ContractedClass<S>,
    alpha_sq: &S,
    beta: &S,
    geom: &FibredGeometry<S>,
    hint: Option<bool>,
) -> Result<Slope<S>> {
    let torsion = resolve_torsion(&v.ch0, &v.hf_ch1, hint)?;
    let tw = twist(v, beta, geom);
    if !tw.hf_ch1b.is_zero() {
        return Ok(nu_relative(v, alpha_sq, beta, geom));
    }
    if torsion && !tw.h_ch2b.is_zero() {
        return Ok(Slope::Finite(
            (tw.ch3b - alpha_sq.half() * tw.h2_ch1b) / tw.h_ch2b,
        ));
    }
    Ok(Slope::PlusInfinity)
}

/// Which clause of the heart sign pattern a class fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeartClause {
    /// `HF·ch1^β >= 0`
    PositiveFiberDegree,
    /// `HF·ch1^β = 0 ⟹ H·ch2^β >= 0`
    HCh2NonNegative,
    /// `HF·ch1^β = 0 ⟹ F·ch2^β >= 0`
    FCh2NonNegative,
    /// `HF·ch1^β = 0 ⟹ ch0 <= 0`
    RankNonPositive,
    /// `HF·ch1^β = ch0 = H·ch2^β = 0 ⟹ ch3^β >= 0`
    Ch3NonNegative,
}

impl HeartClause {
    pub fn name(self) -> &'static str {
        match self {
            HeartClause::PositiveFiberDegree => "hf_ch1b_nonnegative",
            HeartClause::HCh2NonNegative => "h_ch2b_nonnegative",
            HeartClause::FCh2NonNegative => "f_ch2b_nonnegative",
            HeartClause::RankNonPositive => "ch0_nonpositive",
            HeartClause::Ch3NonNegative => "ch3b_nonnegative",
        }
    }
}

/// Which equalities hold for a class with `HF·ch1^β = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct DegenerateFlags {
    pub rank_zero: bool,
    pub h_ch2b_zero: bool,
    pub f_ch2b_zero: bool,
    pub ch3b_zero: bool,
}

/// Outcome of the necessary-condition test for membership in the tilted
/// heart. `Consistent` only means "not numerically excluded".
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MembershipReport {
    ViolatesHeartConditions(HeartClause),
    Consistent,
    ConsistentDegenerate(DegenerateFlags),
}

impl MembershipReport {
    pub fn is_violation(&self) -> bool {
        matches!(self, MembershipReport::ViolatesHeartConditions(_))
    }
}

pub fn heart_membership_necessary<S: Scalar>(v: &ContractedClass<S>, beta: &S, geom: &FibredGeometry<S>) -> MembershipReport {
    use MembershipReport::*;
    let tw = twist(v, beta, geom);
    if tw.hf_ch1b.is_negative() {
        return ViolatesHeartConditions(HeartClause::PositiveFiberDegree);
    }
    if tw.hf_ch1b.is_positive() {
        return Consistent;
    }
    if tw.h_ch2b.is_negative() {
        return ViolatesHeartConditions(HeartClause::HCh2NonNegative);
    }
    if tw.f_ch2b.is_negative() {
        return ViolatesHeartConditions(HeartClause::FCh2NonNegative);
    }
    if tw.ch0.is_positive() {
        return ViolatesHeartConditions(HeartClause::RankNonPositive);
    }
    let flags = DegenerateFlags {
        rank_zero: tw.ch0.is_zero(),
        h_ch2b_zero: tw.h_ch2b.is_zero(),
        f_ch2b_zero: tw.f_ch2b.is_zero(),
        ch3b_zero: tw.ch3b.is_zero(),
    };
    if flags.rank_zero && flags.h_ch2b_zero && tw.ch3b.is_negative() {
        return ViolatesHeartConditions(HeartClause::Ch3NonNegative);
    }
    ConsistentDegenerate(flags)
}

/// `Δ̄ = (HF·ch1^β)² - 2·H^2F·ch0·F·ch2^β`; independent of β.
pub fn delta_bar<S: Scalar>(v: &ContractedClass<S>, beta: &S, geom: &FibredGeometry<S>) -> S {
    let tw = twist(v, beta, geom);
    delta_bar_twisted(&tw, geom)
}

fn delta_bar_twisted<S: Scalar>(tw: &TwistedComponents<S>, geom: &FibredGeometry<S>) -> S {
    sq(&tw.hf_ch1b) - S::from_int(2) * geom.h2f().clone() * tw.ch0.clone() * tw.f_ch2b.clone()
}

/// The support-property form `Q`; the same quadratic expression as [`delta_bar`].
pub fn support_q_form<S: Scalar>(v: &ContractedClass<S>, beta: &S, geom: &FibredGeometry<S>) -> S {
    delta_bar(v, beta, geom)
}

/// `Δ̃ = (HF·ch1^β)(H^2·ch1^β) - H^2F·ch0·H·ch2^β`.
pub fn delta_tilde<S: Scalar>(v: &ContractedClass<S>, beta: &S, geom: &FibredGeometry<S>) -> S {
    delta_tilde_t(v, beta, &S::zero(), geom)
}

/// `Δ̃_t`: [`delta_tilde`] with `H` replaced by `H_t = H + tF`.
pub fn delta_tilde_t<S: Scalar>(v: &ContractedClass<S>, beta: &S, t: &S, geom: &FibredGeometry<S>) -> S {
    let tw = twist(v, beta, geom);
    delta_tilde_t_twisted(&tw, t, geom)
}

pub(crate) fn delta_tilde_t_twisted<S: Scalar>(tw: &TwistedComponents<S>, t: &S, geom: &FibredGeometry<S>) -> S {
    tw.hf_ch1b.clone() * (tw.h2_ch1b.clone() + t.clone() * tw.hf_ch1b.clone())
        - geom.h2f().clone() * tw.ch0.clone() * (tw.h_ch2b.clone() + t.clone() * tw.f_ch2b.clone())
}

/// `q_t(r, c, d) = (H_t·H·c)(F·H·c) - r·d` for `c` in the span of `H, F`.
pub fn q_form<S: Scalar>(r: &S, c: &DivisorClass<S>, d: &S, t: &S, geom: &FibredGeometry<S>) -> S {
    let ht_h_c = geom.h2_dot(c) + t.clone() * geom.hf_dot(c);
    ht_h_c * geom.hf_dot(c) - r.clone() * d.clone()
}

/// The point `(r, c, d)` with `c = y·F` and `d = ((t+1)/2)·α²·r`, which lies
/// in the kernel of `Z(r, c, d) = ((t+1)/2)α²r - d + i·FH·c`.
pub fn kernel_point<S: Scalar>(alpha_sq: &S, t: &S, r: &S, y: &S) -> (S, DivisorClass<S>, S) {
    let d = ((t.clone() + S::one()) * alpha_sq.clone()).half() * r.clone();
    (r.clone(), DivisorClass::new(S::zero(), y.clone()), d)
}

/// Value of the kernel-restricted charge at `(r, c, d)`.
pub fn kernel_charge<S: Scalar>(alpha_sq: &S, t: &S, r: &S, c: &DivisorClass<S>, d: &S, geom: &FibredGeometry<S>) -> ChargeValue<S> {
    ChargeValue::new(
        ((t.clone() + S::one()) * alpha_sq.clone()).half() * r.clone() - d.clone(),
        geom.hf_dot(c),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelCheck<S> {
    pub passed: bool,
    pub samples: usize,
    /// Largest `q` value seen on the kernel.
    pub max_q: S,
}

/// Sample `samples` kernel points with a seeded generator and check
/// `q_t <= 0` on each, exactly.
pub fn kernel_seminegativity_check<S: Scalar>(
    alpha_sq: &S,
    t: &S,
    geom: &FibredGeometry<S>,
    samples: usize,
    seed: u64,
) -> KernelCheck<S> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = true;
    let mut max_q: Option<S> = None;
    for _ in 0..samples {
        let r = S::ratio(rng.gen_range(-200..=200), rng.gen_range(1..=12));
        let y = S::ratio(rng.gen_range(-200..=200), rng.gen_range(1..=12));
        let (r, c, d) = kernel_point(alpha_sq, t, &r, &y);
        debug_assert!(kernel_charge(alpha_sq, t, &r, &c, &d, geom).is_zero());
        let q = q_form(&r, &c, &d, t, geom);
        passed &= q <= S::zero();
        if max_q.as_ref().is_none_or(|m| q > *m) {
            max_q = Some(q);
        }
    }
    KernelCheck {
        passed,
        samples,
        max_q: max_q.unwrap_or_else(S::zero),
    }
}

/// The mixed-stability threshold: with `ν1` the maximal `ν_{α,β,0}`-slope of
/// subobjects, `ν2` the maximal relative slope among subobjects of smaller
/// fiber degree, every `t` strictly above the returned value makes `E`
/// dominate. `None` when `ν^{α,β}_{H,F}(E) <= ν2` (no threshold exists).
pub fn t_stability_threshold<S: Scalar>(nu1: &S, nu0_e: &S, nu_rel_e: &S, nu2: &S) -> Option<S> {
    let gap = nu_rel_e.clone() - nu2.clone();
    if gap <= S::zero() {
        return None;
    }
    Some((nu1.clone() - nu0_e.clone()) / gap)
}
