//! Numerical intersection data of a threefold fibred over a curve.
//!
//! Divisors live in the span of the relatively ample class `H` and the
//! fiber class `F`; `F·F = 0` is built into every product below.

use crate::error::{Error, Result};
use crate::scalar::{sq, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeometryKind {
    /// `P(E)` for a rank-3 bundle `E` on the base curve, `deg_e = deg E`.
    ProjectiveBundle { deg_e: i64 },
    /// Only `(g, H^3, H^2F)` are known.
    Generic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FibredGeometry<S> {
    base_genus: u32,
    h3: S,
    h2f: S,
    kind: GeometryKind,
}

impl<S: Scalar> FibredGeometry<S> {
    /// `P(E)` over a genus-`g` curve: `H^3 = deg E`, `H^2F = 1`.
    pub fn projective_bundle(genus: i64, deg_e: i64) -> Result<Self> {
        let base_genus = u32::try_from(genus).map_err(|_| Error::NegativeGenus(genus))?;
        let geom = Self {
            base_genus,
            h3: S::from_int(deg_e),
            h2f: S::one(),
            kind: GeometryKind::ProjectiveBundle { deg_e },
        };
        for w in geom.warnings() {
            log::warn!("{w}");
        }
        Ok(geom)
    }

    pub fn generic(genus: i64, h3: S, h2f: S) -> Result<Self> {
        let base_genus = u32::try_from(genus).map_err(|_| Error::NegativeGenus(genus))?;
        if h2f <= S::zero() {
            return Err(Error::InvalidGeometry(format!(
                "H^2F must be positive, got {h2f:?}"
            )));
        }
        Ok(Self {
            base_genus,
            h3,
            h2f,
            kind: GeometryKind::Generic,
        })
    }

    pub fn base_genus(&self) -> u32 {
        self.base_genus
    }

    pub fn h3(&self) -> &S {
        &self.h3
    }

    pub fn h2f(&self) -> &S {
        &self.h2f
    }

    pub fn kind(&self) -> GeometryKind {
        self.kind
    }

    /// `deg E` if this is a projective bundle, otherwise an
    /// `UnsupportedGeometry` error naming `op`.
    pub fn require_projective_bundle(&self, op: &'static str) -> Result<i64> {
        match self.kind {
            GeometryKind::ProjectiveBundle { deg_e } => Ok(deg_e),
            GeometryKind::Generic => Err(Error::UnsupportedGeometry(op)),
        }
    }

    /// Non-fatal remarks about the data (e.g. `H` cannot be ample).
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let GeometryKind::ProjectiveBundle { deg_e } = self.kind {
            if deg_e <= 0 {
                out.push(format!(
                    "H^3 = deg E = {deg_e} <= 0: H is not ample on this P(E)"
                ));
            }
        }
        out
    }

    /// `H^2 · D`.
    pub fn h2_dot(&self, d: &DivisorClass<S>) -> S {
        d.x.clone() * self.h3.clone() + d.y.clone() * self.h2f.clone()
    }

    /// `HF · D`.
    pub fn hf_dot(&self, d: &DivisorClass<S>) -> S {
        d.x.clone() * self.h2f.clone()
    }

    /// `F · D^2`.
    pub fn f_dot_sq(&self, d: &DivisorClass<S>) -> S {
        sq(&d.x) * self.h2f.clone()
    }

    /// `H · D^2`.
    pub fn h_dot_sq(&self, d: &DivisorClass<S>) -> S {
        sq(&d.x) * self.h3.clone() + S::from_int(2) * d.x.clone() * d.y.clone() * self.h2f.clone()
    }

    /// `D^3`.
    pub fn cube(&self, d: &DivisorClass<S>) -> S {
        let x2 = sq(&d.x);
        x2.clone() * d.x.clone() * self.h3.clone()
            + S::from_int(3) * x2 * d.y.clone() * self.h2f.clone()
    }
}

/// The divisor `x·H + y·F`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> DivisorClass<S> {
    pub fn new(x: S, y: S) -> Self {
        Self { x, y }
    }

    pub fn h() -> Self {
        Self::new(S::one(), S::zero())
    }

    pub fn f() -> Self {
        Self::new(S::zero(), S::one())
    }

    pub fn scaled(&self, k: &S) -> Self {
        Self::new(self.x.clone() * k.clone(), self.y.clone() * k.clone())
    }
}

impl<S: Scalar> std::ops::Add for DivisorClass<S> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<S: Scalar> std::ops::Neg for DivisorClass<S> {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

/// The two sides of one Hodge-index inequality `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalitySides<S> {
    pub lhs: S,
    pub rhs: S,
}

impl<S: Scalar> InequalitySides<S> {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }

    pub fn gap(&self) -> S {
        self.rhs.clone() - self.lhs.clone()
    }
}

/// `(H^2F)(F·D^2) <= (HF·D)^2`.
pub fn hodge_sides_1<S: Scalar>(geom: &FibredGeometry<S>, d: &DivisorClass<S>) -> InequalitySides<S> {
    InequalitySides {
        lhs: geom.h2f().clone() * geom.f_dot_sq(d),
        rhs: sq(&geom.hf_dot(d)),
    }
}

/// `(H^2F)(H·D^2) <= 2(H^2·D)(HF·D)`.
pub fn hodge_sides_2<S: Scalar>(geom: &FibredGeometry<S>, d: &DivisorClass<S>) -> InequalitySides<S> {
    InequalitySides {
        lhs: geom.h2f().clone() * geom.h_dot_sq(d),
        rhs: S::from_int(2) * geom.h2_dot(d) * geom.hf_dot(d),
    }
}

pub fn hodge_check_1<S: Scalar>(geom: &FibredGeometry<S>, d: &DivisorClass<S>) -> bool {
    hodge_sides_1(geom, d).holds()
}

pub fn hodge_check_2<S: Scalar>(geom: &FibredGeometry<S>, d: &DivisorClass<S>) -> bool {
    hodge_sides_2(geom, d).holds()
}
