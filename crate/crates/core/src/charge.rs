//! Central-charge values and the slopes read off them.

use std::cmp::Ordering;
use std::fmt;

use crate::scalar::Scalar;

/// An exact complex number `re + i·im`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChargeValue<S> {
    pub re: S,
    pub im: S,
}

impl<S: Scalar> ChargeValue<S> {
    pub fn new(re: S, im: S) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::new(S::zero(), S::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// `-re / im`, or `+∞` when `im = 0`.
    pub fn slope(&self) -> Slope<S> {
        if self.im.is_zero() {
            Slope::PlusInfinity
        } else {
            Slope::Finite(-self.re.clone() / self.im.clone())
        }
    }

    /// `re(self)·im(other) - re(other)·im(self)`; zero iff the two values
    /// are real-proportional.
    pub fn alignment_residue(&self, other: &Self) -> S {
        self.re.clone() * other.im.clone() - other.re.clone() * self.im.clone()
    }

    /// Compare the slopes of two charges in the closed upper half plane by
    /// cross-multiplication. Values on the real axis have slope `+∞`.
    pub fn slope_cmp(&self, other: &Self) -> Ordering {
        match (self.im.is_zero(), other.im.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => {
                // -a/b vs -c/d  <=>  -a·d·sgn vs -c·b·sgn with sgn = sign(b·d)
                let lhs = -self.re.clone() * other.im.clone();
                let rhs = -other.re.clone() * self.im.clone();
                let ord = lhs.partial_cmp(&rhs).unwrap_or(Ordering::Equal);
                if (self.im.clone() * other.im.clone()).is_negative() {
                    ord.reverse()
                } else {
                    ord
                }
            }
        }
    }
}

impl<S: Scalar> std::ops::Add for ChargeValue<S> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<S: Scalar> std::ops::Neg for ChargeValue<S> {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

/// A slope value; `PlusInfinity` sits above every finite value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Slope<S> {
    Finite(S),
    PlusInfinity,
}

impl<S: Scalar> Slope<S> {
    pub fn finite(&self) -> Option<&S> {
        match self {
            Slope::Finite(v) => Some(v),
            Slope::PlusInfinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Slope::PlusInfinity)
    }
}

impl<S: Scalar> PartialOrd for Slope<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Slope::PlusInfinity, Slope::PlusInfinity) => Some(Ordering::Equal),
            (Slope::PlusInfinity, Slope::Finite(_)) => Some(Ordering::Greater),
            (Slope::Finite(_), Slope::PlusInfinity) => Some(Ordering::Less),
            (Slope::Finite(a), Slope::Finite(b)) => a.partial_cmp(b),
        }
    }
}

impl<S: Scalar + Ord> Ord for Slope<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).expect("totally ordered scalar")
    }
}

impl<S: Scalar> fmt::Display for Slope<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(v) => write!(f, "{v}"),
            Slope::PlusInfinity => write!(f, "+inf"),
        }
    }
}
