use serde::Serialize;

use super::FuzzyError;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeKind {
    Triangle,
    Trapezoid,
}

impl ShapeKind {
    pub fn arity(self) -> usize {
        match self {
            ShapeKind::Triangle => 3,
            ShapeKind::Trapezoid => 4,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            ShapeKind::Triangle => "triangle",
            ShapeKind::Trapezoid => "trapezoid",
        }
    }
}

/// Piecewise-linear membership function.
///
/// A triangle `(a, b, c)` is stored as the trapezoid `(a, b, b, c)`, so both
/// shapes share one evaluation path. Coinciding breakpoints (`a == b` or
/// `c == d`) produce vertical edges, which is how shoulder terms saturate at
/// the universe boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipFunction<F> {
    kind: ShapeKind,
    a: F,
    b: F,
    c: F,
    d: F,
}

impl<F: Scalar> MembershipFunction<F> {
    pub fn triangle(a: F, b: F, c: F) -> Result<Self, FuzzyError> {
        Self::checked(ShapeKind::Triangle, [a, b, b, c], &[a, b, c])
    }

    pub fn trapezoid(a: F, b: F, c: F, d: F) -> Result<Self, FuzzyError> {
        Self::checked(ShapeKind::Trapezoid, [a, b, c, d], &[a, b, c, d])
    }

    /// Builds a shape from its keyword arity: three points for a triangle,
    /// four for a trapezoid.
    pub fn from_points(kind: ShapeKind, points: &[F]) -> Result<Self, FuzzyError> {
        match (kind, points) {
            (ShapeKind::Triangle, &[a, b, c]) => Self::triangle(a, b, c),
            (ShapeKind::Trapezoid, &[a, b, c, d]) => Self::trapezoid(a, b, c, d),
            _ => Err(FuzzyError::NonMonotoneBreakpoints(
                points.iter().map(|p| p.as_f64()).collect(),
            )),
        }
    }

    fn checked(kind: ShapeKind, [a, b, c, d]: [F; 4], given: &[F]) -> Result<Self, FuzzyError> {
        let as_f64 = || given.iter().map(|p| p.as_f64()).collect::<Vec<_>>();
        if given.iter().any(|p| !p.is_finite()) {
            return Err(FuzzyError::NonFiniteBreakpoint(as_f64()));
        }
        if !(a <= b && b <= c && c <= d) {
            return Err(FuzzyError::NonMonotoneBreakpoints(as_f64()));
        }
        Ok(Self { kind, a, b, c, d })
    }

    pub fn kind(&self) -> ShapeKind {
        self.kind
    }

    /// Breakpoints as declared: three for a triangle, four for a trapezoid.
    pub fn points(&self) -> Vec<F> {
        match self.kind {
            ShapeKind::Triangle => vec![self.a, self.b, self.d],
            ShapeKind::Trapezoid => vec![self.a, self.b, self.c, self.d],
        }
    }

    /// Closed interval outside of which the degree is zero.
    pub fn support(&self) -> (F, F) {
        (self.a, self.d)
    }

    /// Interval on which the degree is one.
    pub fn core(&self) -> (F, F) {
        (self.b, self.c)
    }

    /// Midpoint of the core.
    pub fn core_center(&self) -> F {
        (self.b + self.c) / F::lit(2.0)
    }

    pub fn degree(&self, x: F) -> F {
        if x.is_nan() || x < self.a || x > self.d {
            F::zero()
        } else if x >= self.b && x <= self.c {
            F::one()
        } else if x < self.b {
            (x - self.a) / (self.b - self.a)
        } else {
            (self.d - x) / (self.d - self.c)
        }
    }
}
