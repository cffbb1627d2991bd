//! Walls for the mixed tilt slope `ν_{α,β,t}` at fixed `(β, t)`.
//!
//! For fixed `β` and `t` the real part of `z_{α,β,t}` is affine in `α²` and
//! the imaginary part does not depend on `α` at all, so "equal slope" is a
//! linear equation in `α²`.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::chern::{twist, ContractedClass, LATTICE_DENOMINATORS};
use crate::error::{Error, Result};
use crate::geometry::FibredGeometry;
use crate::scalar::Scalar;
use crate::tilt::{delta_tilde_t_twisted, heart_membership_necessary, z_mixed_from_twisted};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WallSolution<S> {
    /// The two charges are aligned for every `α²`.
    AllAlpha,
    NoWall,
    AtAlphaSq(S),
}

/// `Re z = slope·α² + intercept`, `Im z = im`.
struct AffineCharge<S> {
    slope: S,
    intercept: S,
    im: S,
}

fn affine_charge<S: Scalar>(v: &ContractedClass<S>, beta: &S, t: &S, geom: &FibredGeometry<S>) -> AffineCharge<S> {
    let tw = twist(v, beta, geom);
    let at_zero = z_mixed_from_twisted(&tw, &S::zero(), t, geom);
    AffineCharge {
        slope: (t.clone() + S::one()).half() * geom.h2f().clone() * tw.ch0,
        intercept: at_zero.re,
        im: at_zero.im,
    }
}

/// `Re z(v)·Im z(w) - Re z(w)·Im z(v)` for the mixed charge at `(α², β, t)`.
pub fn alignment_residue<S: Scalar>(
    v: &ContractedClass<S>,
    w: &ContractedClass<S>,
    alpha_sq: &S,
    beta: &S,
    t: &S,
    geom: &FibredGeometry<S>,
) -> S {
    let (zv, zw) = (affine_charge(v, beta, t, geom), affine_charge(w, beta, t, geom));
    let re_v = zv.slope * alpha_sq.clone() + zv.intercept;
    let re_w = zw.slope * alpha_sq.clone() + zw.intercept;
    re_v * zw.im - re_w * zv.im
}

/// Solve `ν_{α,β,t}(v) = ν_{α,β,t}(w)` for `α²`.
pub fn wall_alpha_sq<S: Scalar>(
    v: &ContractedClass<S>,
    w: &ContractedClass<S>,
    beta: &S,
    t: &S,
    geom: &FibredGeometry<S>,
) -> WallSolution<S> {
    let (zv, zw) = (affine_charge(v, beta, t, geom), affine_charge(w, beta, t, geom));
    if zv.im.is_zero() && zw.im.is_zero() {
        // both real: aligned for all α² iff Re parts are proportional as affine functions
        let det = zv.slope * zw.intercept - zw.slope * zv.intercept;
        return if det.is_zero() {
            WallSolution::AllAlpha
        } else {
            WallSolution::NoWall
        };
    }
    let coeff = zv.slope * zw.im.clone() - zw.slope * zv.im.clone();
    let rhs = zw.intercept * zv.im - zv.intercept * zw.im;
    if coeff.is_zero() {
        return if rhs.is_zero() {
            WallSolution::AllAlpha
        } else {
            WallSolution::NoWall
        };
    }
    let alpha_sq = rhs / coeff;
    if alpha_sq.is_positive() {
        WallSolution::AtAlphaSq(alpha_sq)
    } else {
        WallSolution::NoWall
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchDirection {
    /// Decrease `α` from the start: the largest wall below it.
    #[default]
    Below,
    /// Increase `α` from the start: the smallest wall above it.
    Above,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FirstWall<S> {
    pub alpha_sq: S,
    /// Every candidate with a wall at `alpha_sq`, in canonical order.
    pub witnesses: Vec<ContractedClass<S>>,
}

pub fn first_wall<S: Scalar>(
    v: &ContractedClass<S>,
    candidates: &[ContractedClass<S>],
    beta: &S,
    t: &S,
    alpha_sq_start: &S,
    direction: SearchDirection,
    geom: &FibredGeometry<S>,
) -> Option<FirstWall<S>> {
    let mut best: Option<FirstWall<S>> = None;
    for w in candidates {
        let WallSolution::AtAlphaSq(a) = wall_alpha_sq(v, w, beta, t, geom) else {
            continue;
        };
        let admissible = match direction {
            SearchDirection::Below => a < *alpha_sq_start,
            SearchDirection::Above => a > *alpha_sq_start,
        };
        if !admissible {
            continue;
        }
        match &mut best {
            Some(fw) if fw.alpha_sq == a => fw.witnesses.push(w.clone()),
            Some(fw) => {
                let closer = match direction {
                    SearchDirection::Below => a > fw.alpha_sq,
                    SearchDirection::Above => a < fw.alpha_sq,
                };
                if closer {
                    *fw = FirstWall {
                        alpha_sq: a,
                        witnesses: vec![w.clone()],
                    };
                }
            }
            None => {
                best = Some(FirstWall {
                    alpha_sq: a,
                    witnesses: vec![w.clone()],
                })
            }
        }
    }
    if let Some(fw) = &mut best {
        fw.witnesses.sort_by(canonical_cmp);
    }
    best
}

/// Lexicographic order on components.
pub fn canonical_cmp<S: Scalar>(a: &ContractedClass<S>, b: &ContractedClass<S>) -> Ordering {
    a.components()
        .iter()
        .zip(b.components().iter())
        .map(|(x, y)| x.partial_cmp(y).unwrap_or(Ordering::Equal))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// A finite box of classes: component `i` ranges over multiples of
/// `1/denominators[i]` with absolute value at most `max_abs[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationBounds<S> {
    pub max_abs: [S; 6],
    pub denominators: [i64; 6],
}

impl<S: Scalar> EnumerationBounds<S> {
    /// Grid of the integral lattice `Z^3 ⊕ (½Z)^2 ⊕ ⅙Z`.
    pub fn lattice(max_abs: [S; 6]) -> Self {
        Self {
            max_abs,
            denominators: LATTICE_DENOMINATORS,
        }
    }

    pub fn integer_grid(max_abs: [S; 6]) -> Self {
        Self {
            max_abs,
            denominators: [1; 6],
        }
    }

    /// Same bound on every component.
    pub fn uniform_lattice(max_abs: S) -> Self {
        Self::lattice(std::array::from_fn(|_| max_abs.clone()))
    }

    fn axis(&self, i: usize) -> Result<Vec<S>> {
        let den = self.denominators[i];
        if den <= 0 {
            return Err(Error::InvalidParams(format!("denominator {den} must be positive")));
        }
        if self.max_abs[i].is_negative() {
            return Err(Error::InvalidParams(format!("bound {} must be non-negative", self.max_abs[i])));
        }
        let k = (self.max_abs[i].clone() * S::from_int(den))
            .floor_i64()
            .ok_or_else(|| Error::InvalidParams("bound too large".into()))?;
        Ok((-k..=k).map(|n| S::ratio(n, den)).collect())
    }

    /// Whether `v` is a grid point inside the box.
    pub fn contains(&self, v: &ContractedClass<S>) -> bool {
        v.components().iter().enumerate().all(|(i, c)| {
            c.abs() <= self.max_abs[i] && (c.clone() * S::from_int(self.denominators[i])).is_integral()
        })
    }
}

/// All grid classes `w` in `bounds` that pass the numerical filters for a
/// destabilizing subobject of `v` in the mixed tilt heart:
/// `0 <= HF·ch1^β(w) <= HF·ch1^β(v)`, `Δ̃_t >= 0` on both `w` and `v - w`,
/// neither violates the heart sign pattern, and `w ∉ {0, v}`.
///
/// Output is sorted by [`canonical_cmp`].
pub fn enumerate_destabilizer_classes<S: Scalar>(
    v: &ContractedClass<S>,
    beta: &S,
    t: &S,
    geom: &FibredGeometry<S>,
    bounds: &EnumerationBounds<S>,
) -> Result<Vec<ContractedClass<S>>> {
    let tv = twist(v, beta, geom);
    if !tv.hf_ch1b.is_positive() {
        return Err(Error::EmptyAmbient(format!(
            "HF·ch1^β(v) = {} is not positive",
            tv.hf_ch1b
        )));
    }
    let axes: Vec<Vec<S>> = (0..6).map(|i| bounds.axis(i)).collect::<Result<_>>()?;

    // (ch0, HF·ch1) fixes HF·ch1^β, so prune on it before the inner loops.
    let outer: Vec<(S, S)> = axes[0]
        .iter()
        .flat_map(|r| axes[2].iter().map(move |d| (r.clone(), d.clone())))
        .filter(|(r, d)| {
            let hf_b = d.clone() - beta.clone() * geom.h2f().clone() * r.clone();
            !hf_b.is_negative() && hf_b <= tv.hf_ch1b
        })
        .collect();

    let mut found: Vec<ContractedClass<S>> = outer
        .par_iter()
        .flat_map_iter(|(ch0, hf_ch1)| {
            let mut local = Vec::new();
            for h2_ch1 in &axes[1] {
                for h_ch2 in &axes[3] {
                    for f_ch2 in &axes[4] {
                        for ch3 in &axes[5] {
                            let w = ContractedClass::new(
                                ch0.clone(),
                                h2_ch1.clone(),
                                hf_ch1.clone(),
                                h_ch2.clone(),
                                f_ch2.clone(),
                                ch3.clone(),
                            );
                            if passes_filters(v, &w, beta, t, geom) {
                                local.push(w);
                            }
                        }
                    }
                }
            }
            local
        })
        .collect();
    found.sort_by(canonical_cmp);
    Ok(found)
}

fn passes_filters<S: Scalar>(
    v: &ContractedClass<S>,
    w: &ContractedClass<S>,
    beta: &S,
    t: &S,
    geom: &FibredGeometry<S>,
) -> bool {
    if w.is_zero() || w == v {
        return false;
    }
    let quotient = v - w;
    let admissible = |part: &ContractedClass<S>| {
        let tw = twist(part, beta, geom);
        !delta_tilde_t_twisted(&tw, t, geom).is_negative()
            && !heart_membership_necessary(part, beta, geom).is_violation()
    };
    admissible(w) && admissible(&quotient)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WallCurve<S> {
    /// `(β, α²)` at every grid point with a genuine wall.
    pub points: Vec<(S, S)>,
    /// Grid values of `β` where the charges are aligned for every `α²`.
    pub all_alpha: Vec<S>,
}

/// Trace the wall between `v` and `w` along the grid
/// `β_i = lo + i·(hi - lo)/steps`, `i = 0..steps`.
pub fn wall_curve_sample<S: Scalar>(
    v: &ContractedClass<S>,
    w: &ContractedClass<S>,
    t: &S,
    beta_lo: &S,
    beta_hi: &S,
    steps: usize,
    geom: &FibredGeometry<S>,
) -> Result<WallCurve<S>> {
    if steps == 0 {
        return Err(Error::InvalidParams("steps must be at least 1".into()));
    }
    if beta_lo > beta_hi {
        return Err(Error::InvalidParams("beta range is reversed".into()));
    }
    let step = (beta_hi.clone() - beta_lo.clone()) / S::from_int(steps as i64);
    let solved: Vec<(S, WallSolution<S>)> = (0..steps)
        .into_par_iter()
        .map(|i| {
            let beta = beta_lo.clone() + step.clone() * S::from_int(i as i64);
            let sol = wall_alpha_sq(v, w, &beta, t, geom);
            (beta, sol)
        })
        .collect();
    let mut curve = WallCurve {
        points: Vec::new(),
        all_alpha: Vec::new(),
    };
    for (beta, sol) in solved {
        match sol {
            WallSolution::AtAlphaSq(a) => curve.points.push((beta, a)),
            WallSolution::AllAlpha => curve.all_alpha.push(beta),
            WallSolution::NoWall => {}
        }
    }
    Ok(curve)
}
