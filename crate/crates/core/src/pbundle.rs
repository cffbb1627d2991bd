//! Computations specific to `X = P(E)` for a rank-3 bundle `E` on a curve of
//! genus `g`: tangent-bundle contractions, Riemann–Roch coefficients, the
//! parameter region in which `O(H)` and `O(K_X+H)[1]` bound `ch3^β`, and the
//! charge `z_l`.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::RwLock;

use crate::charge::ChargeValue;
use crate::chern::{contract, euler_char, line_bundle, shift_class, twist, ContractedClass, TwistedComponents};
use crate::error::{Error, Result};
use crate::geometry::{DivisorClass, FibredGeometry, GeometryKind};
use crate::linalg::{solve_exact, SolveError};
use crate::scalar::{sq, Scalar};
use crate::tilt::TiltParams;

/// `K_X = -3H + (2g - 2 + deg E)F`.
pub fn canonical_class<S: Scalar>(geom: &FibredGeometry<S>) -> Result<DivisorClass<S>> {
    let e = geom.require_projective_bundle("canonical_class")?;
    Ok(DivisorClass::new(
        S::from_int(-3),
        S::from_int(2 * i64::from(geom.base_genus()) - 2 + e),
    ))
}

/// Contractions of `c1(T_X)`, `c1^2 + c2` and `χ(O_X)` on `P(E)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChernContractions<S> {
    /// `2g - 2 + deg E`
    pub k_fiber: S,
    /// `18g - 18 + 8 deg E`
    pub todd_fiber: S,
    pub chi_o: S,
}

impl<S: Scalar> ChernContractions<S> {
    /// `c1 · γ` for the curve class `γ` with `H·γ = h`, `F·γ = f`.
    pub fn c1_with_curve(&self, h: &S, f: &S) -> S {
        S::from_int(3) * h.clone() - self.k_fiber.clone() * f.clone()
    }

    /// `D·H·c1`, given `D·H^2` and `D·HF`.
    pub fn dh_c1(&self, dh2: &S, dhf: &S) -> S {
        self.c1_with_curve(dh2, dhf)
    }

    /// `D·F·c1 = 3 D·HF`.
    pub fn df_c1(&self, dhf: &S) -> S {
        S::from_int(3) * dhf.clone()
    }

    /// `D·(c1^2 + c2)`, given `D·H^2` and `D·HF`.
    pub fn c1sq_plus_c2_with_divisor(&self, dh2: &S, dhf: &S) -> S {
        S::from_int(12) * dh2.clone() - self.todd_fiber.clone() * dhf.clone()
    }
}

pub fn chern_contractions<S: Scalar>(geom: &FibredGeometry<S>) -> Result<ChernContractions<S>> {
    let e = geom.require_projective_bundle("chern_contractions")?;
    let g = i64::from(geom.base_genus());
    Ok(ChernContractions {
        k_fiber: S::from_int(2 * g - 2 + e),
        todd_fiber: S::from_int(18 * g - 18 + 8 * e),
        chi_o: S::from_int(1 - g),
    })
}

/// Tangent Chern classes as cycles: `c1(T_X) = 3H - (2g-2+e)F` and
/// `c2(T_X) = 3H^2 - (6g-6+2e)HF` (the latter in the `{H^2, HF}` basis).
pub fn tangent_chern_classes<S: Scalar>(geom: &FibredGeometry<S>) -> Result<(DivisorClass<S>, (S, S))> {
    let e = geom.require_projective_bundle("tangent_chern_classes")?;
    let g = i64::from(geom.base_genus());
    let c1 = DivisorClass::new(S::from_int(3), S::from_int(-(2 * g - 2 + e)));
    let c2 = (S::from_int(3), S::from_int(-(6 * g - 6 + 2 * e)));
    Ok((c1, c2))
}

/// Constants `a0, a1, a2` with, for every class `v`,
/// `χ(v ⊗ O(-H)) = ch3^β + (β+½)H·ch2^β + (β(β+1)/2)H^2·ch1^β
///                 - a2·F·ch2^β - a1·HF·ch1^β - a0·ch0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BmtCoefficients<S> {
    pub beta: S,
    pub a0: S,
    pub a1: S,
    pub a2: S,
}

impl<S: Scalar> BmtCoefficients<S> {
    fn known_part(&self, tw: &TwistedComponents<S>) -> S {
        let b = self.beta.clone();
        tw.ch3b.clone()
            + (b.clone() + S::ratio(1, 2)) * tw.h_ch2b.clone()
            + (b.clone() * (b + S::one())).half() * tw.h2_ch1b.clone()
    }

    /// Right-hand side of the defining identity.
    pub fn identity_rhs(&self, v: &ContractedClass<S>, geom: &FibredGeometry<S>) -> S {
        let tw = twist(v, &self.beta, geom);
        self.known_part(&tw)
            - self.a2.clone() * tw.f_ch2b
            - self.a1.clone() * tw.hf_ch1b
            - self.a0.clone() * tw.ch0
    }

    /// Margin of the `ch3^β` bound: right side minus `ch3^β`. Equals
    /// `-χ(v ⊗ O(-H))`.
    pub fn margin(&self, v: &ContractedClass<S>, geom: &FibredGeometry<S>) -> S {
        -self.identity_rhs(v, geom)
    }
}

/// `χ(v ⊗ O(-H))`.
pub fn euler_char_twisted_down<S: Scalar>(v: &ContractedClass<S>, geom: &FibredGeometry<S>) -> Result<S> {
    euler_char(&twist(v, &S::one(), geom).as_class(), geom)
}

/// Solve for `a0, a1, a2` from the defining identity on the six basis
/// classes. The system has six rows and three unknowns; all six must agree.
pub fn bmt_coefficients<S: Scalar>(beta: &S, geom: &FibredGeometry<S>) -> Result<BmtCoefficients<S>> {
    geom.require_projective_bundle("bmt_coefficients")?;
    let probe = BmtCoefficients {
        beta: beta.clone(),
        a0: S::zero(),
        a1: S::zero(),
        a2: S::zero(),
    };
    let mut rows = Vec::with_capacity(6);
    let mut rhs = Vec::with_capacity(6);
    for i in 0..6 {
        let mut comps: [S; 6] = std::array::from_fn(|_| S::zero());
        comps[i] = S::one();
        let basis = ContractedClass::from_components(comps);
        let tw = twist(&basis, beta, geom);
        let chi = euler_char_twisted_down(&basis, geom)?;
        // a0·ch0 + a1·HFch1^β + a2·Fch2^β = known - χ
        rows.push(vec![tw.ch0.clone(), tw.hf_ch1b.clone(), tw.f_ch2b.clone()]);
        rhs.push(probe.known_part(&tw) - chi);
    }
    match solve_exact(&rows, &rhs) {
        Ok(x) => {
            let [a0, a1, a2]: [S; 3] = x.try_into().expect("three unknowns");
            Ok(BmtCoefficients {
                beta: beta.clone(),
                a0,
                a1,
                a2,
            })
        }
        Err(SolveError::Inconsistent) => Err(Error::InconsistentIdentity(format!(
            "no exact (a0, a1, a2) at beta = {beta}"
        ))),
        Err(e) => Err(Error::InconsistentIdentity(format!("{e:?} at beta = {beta}"))),
    }
}

/// Memo of [`bmt_coefficients`] keyed by `(β, g, deg E)`.
#[derive(Debug, Default)]
pub struct BmtCache<S: Eq + Hash> {
    memo: RwLock<HashMap<(S, u32, i64), BmtCoefficients<S>>>,
}

impl<S: Scalar + Eq + Hash> BmtCache<S> {
    pub fn new() -> Self {
        Self {
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn get(&self, beta: &S, geom: &FibredGeometry<S>) -> Result<BmtCoefficients<S>> {
        let e = geom.require_projective_bundle("bmt_coefficients")?;
        let key = (beta.clone(), geom.base_genus(), e);
        if let Some(hit) = self.memo.read().expect("poisoned").get(&key) {
            return Ok(hit.clone());
        }
        let fresh = bmt_coefficients(beta, geom)?;
        self.memo.write().expect("poisoned").insert(key, fresh.clone());
        Ok(fresh)
    }

    pub fn len(&self) -> usize {
        self.memo.read().expect("poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Constants of the conjectural bound
/// `ch3^β <= (a1·H^2 + b1·HF)ch1^β + (a2·H + b2·F)ch2^β + c·ch0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConjectureCoefficients<S> {
    pub a1: S,
    pub b1: S,
    pub a2: S,
    pub b2: S,
    pub c: S,
}

impl<S: Scalar> ConjectureCoefficients<S> {
    pub fn new(a1: S, b1: S, a2: S, b2: S, c: S) -> Result<Self> {
        let out = Self { a1, b1, a2, b2, c };
        out.validate()?;
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        if self.a1.is_positive() {
            Ok(())
        } else {
            Err(Error::InvalidCoefficients(format!("a1 must be positive, got {}", self.a1)))
        }
    }

    /// The bound derived on `P(E)`, term for term:
    /// `(a1, b1, a2, b2, c) = (-β(β+1)/2, a1, -(β+½), a2, a0)`.
    /// Fails outside `-1 < β < 0`, where the `H^2` coefficient is not positive.
    pub fn from_main2(bmt: &BmtCoefficients<S>) -> Result<Self> {
        Self::new(
            main2_h2_coefficient(&bmt.beta),
            bmt.a1.clone(),
            -(bmt.beta.clone() + S::ratio(1, 2)),
            bmt.a2.clone(),
            bmt.a0.clone(),
        )
    }

    fn rhs_minus_lhs(&self, tw: &TwistedComponents<S>, hf_coeff: &S) -> S {
        self.a1.clone() * tw.h2_ch1b.clone()
            + hf_coeff.clone() * tw.hf_ch1b.clone()
            + self.a2.clone() * tw.h_ch2b.clone()
            + self.b2.clone() * tw.f_ch2b.clone()
            + self.c.clone() * tw.ch0.clone()
            - tw.ch3b.clone()
    }
}

/// `-β(β+1)/2`.
pub fn main2_h2_coefficient<S: Scalar>(beta: &S) -> S {
    -(beta.clone() * (beta.clone() + S::one())).half()
}

/// Right side minus left side of the conjectural bound; `>= 0` means the
/// inequality holds for this class.
pub fn conjecture_margin<S: Scalar>(
    v: &ContractedClass<S>,
    params: &TiltParams<S>,
    coeffs: &ConjectureCoefficients<S>,
    geom: &FibredGeometry<S>,
) -> Result<S> {
    coeffs.validate()?;
    let tw = twist(v, &params.beta, geom);
    Ok(coeffs.rhs_minus_lhs(&tw, &coeffs.b1))
}

/// Margin of the `P(E)` bound at any `β` (no positivity requirement on the
/// `H^2` coefficient).
pub fn main2_margin<S: Scalar>(v: &ContractedClass<S>, bmt: &BmtCoefficients<S>, geom: &FibredGeometry<S>) -> S {
    bmt.margin(v, geom)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionReport<S> {
    pub holds: bool,
    /// `α - 2 < β < 1 - α`
    pub condition1: bool,
    /// `t > max(threshold, t0)`
    pub condition2: bool,
    pub t_nonnegative: bool,
    /// `(-β(β+2)H^3 + 4(β+2)(g-1) + α²) / ((β+2)² - α²)` when the
    /// denominator is positive.
    pub threshold: Option<S>,
    pub t0: S,
    pub diagnostics: Vec<String>,
}

/// Check the two parameter conditions under which `O(H)` and
/// `O(K_X+H)[1]` have slopes of opposite sign.
///
/// `α - 2 < β < 1 - α` is tested as `α² < min(β+2, 1-β)²` with both bounds
/// positive, so no square roots are taken. Without `t0` the value `0` is
/// used, which is optimistic.
pub fn region_check<S: Scalar>(alpha_sq: &S, beta: &S, t: &S, t0: Option<&S>, geom: &FibredGeometry<S>) -> RegionReport<S> {
    let mut diagnostics = Vec::new();
    if geom.kind() == GeometryKind::Generic {
        diagnostics.push("generic geometry: region conditions are stated for P(E)".to_string());
    }
    let t0 = match t0 {
        Some(v) => v.clone(),
        None => {
            diagnostics.push("t0 not supplied; using 0, which is optimistic".to_string());
            S::zero()
        }
    };
    if t0.is_negative() {
        diagnostics.push("t0 must be non-negative".to_string());
    }
    let alpha_positive = alpha_sq.is_positive();
    if !alpha_positive {
        diagnostics.push("alpha^2 must be positive".to_string());
    }
    let t_nonnegative = !t.is_negative();
    if !t_nonnegative {
        diagnostics.push("t must be non-negative".to_string());
    }

    let lower = beta.clone() + S::from_int(2);
    let upper = S::one() - beta.clone();
    let condition1 = alpha_positive
        && lower.is_positive()
        && upper.is_positive()
        && *alpha_sq < sq(&lower)
        && *alpha_sq < sq(&upper);
    if !condition1 {
        diagnostics.push("condition (1) alpha - 2 < beta < 1 - alpha fails".to_string());
    }

    let denom = sq(&lower) - alpha_sq.clone();
    let threshold = if denom.is_positive() {
        let g = S::from_int(i64::from(geom.base_genus()));
        let num = -(beta.clone() * lower.clone() * geom.h3().clone())
            + S::from_int(4) * lower * (g - S::one())
            + alpha_sq.clone();
        Some(num / denom)
    } else {
        diagnostics.push("(beta+2)^2 - alpha^2 <= 0: threshold undefined".to_string());
        None
    };
    let condition2 = match &threshold {
        Some(th) => *t > *th && *t > t0 && !t0.is_negative(),
        None => false,
    };
    if !condition2 {
        diagnostics.push("condition (2) t > max(threshold, t0) fails".to_string());
    }
    RegionReport {
        holds: condition1 && condition2 && t_nonnegative,
        condition1,
        condition2,
        t_nonnegative,
        threshold,
        t0,
        diagnostics,
    }
}

/// `ν_{α,β,t}(O(H))` in closed form.
pub fn slope_of_oh<S: Scalar>(params: &TiltParams<S>, geom: &FibredGeometry<S>) -> Result<S> {
    geom.require_projective_bundle("slope_of_oh")?;
    let m = S::one() - params.beta.clone();
    if m.is_zero() {
        return Err(Error::PoleAtBeta("1".into()));
    }
    let m2 = sq(&m);
    let den = S::from_int(2) * m;
    Ok((geom.h3().clone() * m2.clone() - params.alpha_sq.clone()) / den.clone()
        + params.t.clone() * (m2 - params.alpha_sq.clone()) / den)
}

/// `ν_{α,β,t}(O(K_X+H)[1])` in closed form.
pub fn slope_of_shifted_canonical_twist<S: Scalar>(params: &TiltParams<S>, geom: &FibredGeometry<S>) -> Result<S> {
    let k = canonical_class(geom)?;
    let p = params.beta.clone() + S::from_int(2);
    if p.is_zero() {
        return Err(Error::PoleAtBeta("-2".into()));
    }
    let p2 = sq(&p);
    let den = -(S::from_int(2) * p.clone());
    let e = geom.h3().clone();
    Ok((e * p2.clone() - S::from_int(2) * p * k.y - params.alpha_sq.clone()) / den.clone()
        + params.t.clone() * (p2 - params.alpha_sq.clone()) / den)
}

/// Class of `O(H)`.
pub fn oh_class<S: Scalar>(geom: &FibredGeometry<S>) -> Result<ContractedClass<S>> {
    contract(&line_bundle(&DivisorClass::h(), geom)?, geom)
}

/// Class of `O(K_X + H)[1]`.
pub fn shifted_canonical_twist_class<S: Scalar>(geom: &FibredGeometry<S>) -> Result<ContractedClass<S>> {
    let d = canonical_class(geom)? + DivisorClass::h();
    Ok(shift_class(&contract(&line_bundle(&d, geom)?, geom)?, 1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZlValue<S> {
    pub value: ChargeValue<S>,
    /// Whether `l > max(b1, 0)`; not required for evaluation.
    pub l_above_bound: bool,
}

/// `z_l = (a1·H^2 + l·HF)ch1^β + (a2·H + b2·F)ch2^β + c·ch0 - ch3^β
///        + i((H + tF)ch2^β - ((t+1)/2)α²·FH^2·ch0)`.
pub fn z_l<S: Scalar>(
    v: &ContractedClass<S>,
    params: &TiltParams<S>,
    l: &S,
    coeffs: &ConjectureCoefficients<S>,
    geom: &FibredGeometry<S>,
) -> ZlValue<S> {
    let tw = twist(v, &params.beta, geom);
    let re = coeffs.rhs_minus_lhs(&tw, l);
    let im = tw.h_ch2b.clone() + params.t.clone() * tw.f_ch2b.clone()
        - ((params.t.clone() + S::one()) * params.alpha_sq.clone()).half() * geom.h2f().clone() * tw.ch0;
    let bound = if coeffs.b1.is_positive() { coeffs.b1.clone() } else { S::zero() };
    ZlValue {
        value: ChargeValue::new(re, im),
        l_above_bound: *l > bound,
    }
}

/// Whether the `H^2·ch1^β` coefficient `-β(β+1)/2` is positive.
pub fn corollary_window_check<S: Scalar>(beta: &S) -> bool {
    main2_h2_coefficient(beta).is_positive()
}
