//! Second-order forward-mode differentiation over two parameters.
//!
//! [`Dual2`] carries a value together with its gradient and Hessian with
//! respect to two seed variables. Geometry kernels evaluate metric fields on
//! lifted points to obtain `g`, `∂g` and `∂∂g` in one pass; the finite
//! difference helpers at the bottom of the module are the independent oracle
//! used to cross-check that path.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{GeoError, Result};
use crate::models::ParamPoint;

/// Value, gradient and Hessian of a scalar function of two variables.
///
/// The Hessian is stored as its three independent entries so it is symmetric
/// by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual2 {
    pub value: f64,
    pub grad: [f64; 2],
    // (h11, h12, h22)
    hess: [f64; 3],
}

impl Dual2 {
    pub const fn constant(value: f64) -> Self {
        Self {
            value,
            grad: [0.0, 0.0],
            hess: [0.0; 3],
        }
    }

    /// Seed variable `index` (0 or 1) at `value`.
    pub fn variable(value: f64, index: usize) -> Self {
        assert!(index < 2, "Dual2 has two seed directions");
        let mut grad = [0.0, 0.0];
        grad[index] = 1.0;
        Self {
            value,
            grad,
            hess: [0.0; 3],
        }
    }

    pub fn new(value: f64, grad: [f64; 2], hess: [[f64; 2]; 2]) -> Self {
        Self {
            value,
            grad,
            hess: [hess[0][0], 0.5 * (hess[0][1] + hess[1][0]), hess[1][1]],
        }
    }

    pub fn hess(&self) -> [[f64; 2]; 2] {
        [[self.hess[0], self.hess[1]], [self.hess[1], self.hess[2]]]
    }

    pub fn hess_entry(&self, i: usize, j: usize) -> f64 {
        match (i, j) {
            (0, 0) => self.hess[0],
            (1, 1) => self.hess[2],
            (0, 1) | (1, 0) => self.hess[1],
            _ => panic!("Hessian index ({i}, {j}) out of range"),
        }
    }

    /// Apply a univariate function given its value and first two derivatives
    /// at `self.value`.
    fn compose(self, f0: f64, f1: f64, f2: f64) -> Self {
        let g = self.grad;
        Self {
            value: f0,
            grad: [f1 * g[0], f1 * g[1]],
            hess: [
                f2 * g[0] * g[0] + f1 * self.hess[0],
                f2 * g[0] * g[1] + f1 * self.hess[1],
                f2 * g[1] * g[1] + f1 * self.hess[2],
            ],
        }
    }

    pub fn recip(self) -> Self {
        let inv = 1.0 / self.value;
        self.compose(inv, -inv * inv, 2.0 * inv * inv * inv)
    }

    pub fn sqrt(self) -> Self {
        let r = self.value.sqrt();
        self.compose(r, 0.5 / r, -0.25 / (r * self.value))
    }

    pub fn ln(self) -> Self {
        let inv = 1.0 / self.value;
        self.compose(self.value.ln(), inv, -inv * inv)
    }

    pub fn exp(self) -> Self {
        let e = self.value.exp();
        self.compose(e, e, e)
    }

    pub fn sin(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.compose(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.compose(c, -s, -c)
    }

    pub fn powi(self, n: i32) -> Self {
        match n {
            0 => Self::constant(1.0),
            1 => self,
            _ => {
                let nf = f64::from(n);
                let v = self.value;
                self.compose(
                    v.powi(n),
                    nf * v.powi(n - 1),
                    nf * (nf - 1.0) * v.powi(n - 2),
                )
            }
        }
    }
}

impl From<f64> for Dual2 {
    fn from(v: f64) -> Self {
        Self::constant(v)
    }
}

impl Add for Dual2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            value: self.value + rhs.value,
            grad: [self.grad[0] + rhs.grad[0], self.grad[1] + rhs.grad[1]],
            hess: [
                self.hess[0] + rhs.hess[0],
                self.hess[1] + rhs.hess[1],
                self.hess[2] + rhs.hess[2],
            ],
        }
    }
}

impl Sub for Dual2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            value: self.value - rhs.value,
            grad: [self.grad[0] - rhs.grad[0], self.grad[1] - rhs.grad[1]],
            hess: [
                self.hess[0] - rhs.hess[0],
                self.hess[1] - rhs.hess[1],
                self.hess[2] - rhs.hess[2],
            ],
        }
    }
}

impl Mul for Dual2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (self, rhs);
        Self {
            value: a.value * b.value,
            grad: [
                a.grad[0] * b.value + a.value * b.grad[0],
                a.grad[1] * b.value + a.value * b.grad[1],
            ],
            hess: [
                a.hess[0] * b.value + 2.0 * a.grad[0] * b.grad[0] + a.value * b.hess[0],
                a.hess[1] * b.value
                    + a.grad[0] * b.grad[1]
                    + a.grad[1] * b.grad[0]
                    + a.value * b.hess[1],
                a.hess[2] * b.value + 2.0 * a.grad[1] * b.grad[1] + a.value * b.hess[2],
            ],
        }
    }
}

impl Div for Dual2 {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }
}

impl Neg for Dual2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            value: -self.value,
            grad: [-self.grad[0], -self.grad[1]],
            hess: [-self.hess[0], -self.hess[1], -self.hess[2]],
        }
    }
}

impl Add<f64> for Dual2 {
    type Output = Self;
    fn add(mut self, rhs: f64) -> Self {
        self.value += rhs;
        self
    }
}

impl Sub<f64> for Dual2 {
    type Output = Self;
    fn sub(mut self, rhs: f64) -> Self {
        self.value -= rhs;
        self
    }
}

impl Mul<f64> for Dual2 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        Self {
            value: self.value * rhs,
            grad: [self.grad[0] * rhs, self.grad[1] * rhs],
            hess: [self.hess[0] * rhs, self.hess[1] * rhs, self.hess[2] * rhs],
        }
    }
}

impl Div<f64> for Dual2 {
    type Output = Self;
    fn div(self, rhs: f64) -> Self {
        self * (1.0 / rhs)
    }
}

impl Add<Dual2> for f64 {
    type Output = Dual2;
    fn add(self, rhs: Dual2) -> Dual2 {
        rhs + self
    }
}

impl Sub<Dual2> for f64 {
    type Output = Dual2;
    fn sub(self, rhs: Dual2) -> Dual2 {
        -rhs + self
    }
}

impl Mul<Dual2> for f64 {
    type Output = Dual2;
    fn mul(self, rhs: Dual2) -> Dual2 {
        rhs * self
    }
}

impl Div<Dual2> for f64 {
    type Output = Dual2;
    fn div(self, rhs: Dual2) -> Dual2 {
        Dual2::constant(self) / rhs
    }
}

/// Number type the closed-form fields are written against, so one formula
/// serves both plain evaluation and differentiation.
pub trait Scalar:
    Copy
    + From<f64>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn value(&self) -> f64;
    fn recip(self) -> Self;
    fn sqrt(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn powi(self, n: i32) -> Self;
}

impl Scalar for f64 {
    fn value(&self) -> f64 {
        *self
    }
    fn recip(self) -> Self {
        f64::recip(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
}

impl Scalar for Dual2 {
    fn value(&self) -> f64 {
        self.value
    }
    fn recip(self) -> Self {
        Dual2::recip(self)
    }
    fn sqrt(self) -> Self {
        Dual2::sqrt(self)
    }
    fn ln(self) -> Self {
        Dual2::ln(self)
    }
    fn sin(self) -> Self {
        Dual2::sin(self)
    }
    fn cos(self) -> Self {
        Dual2::cos(self)
    }
    fn powi(self, n: i32) -> Self {
        Dual2::powi(self, n)
    }
}

/// Seed both coordinates of `point`: seed `i` has gradient `e_i` and zero
/// Hessian.
pub fn lift(point: &ParamPoint) -> [Dual2; 2] {
    lift_coords(point.coords())
}

pub fn lift_coords(c: [f64; 2]) -> [Dual2; 2] {
    [Dual2::variable(c[0], 0), Dual2::variable(c[1], 1)]
}

/// Step for first-order central differences: `cbrt(eps) * max(1, |x|)`.
pub fn first_order_step(x: f64) -> f64 {
    f64::EPSILON.cbrt() * x.abs().max(1.0)
}

/// Step for second-order central differences: `eps^(1/4) * max(1, |x|)`.
pub fn second_order_step(x: f64) -> f64 {
    f64::EPSILON.powf(0.25) * x.abs().max(1.0)
}

fn shifted(point: &ParamPoint, index: usize, delta: f64) -> Result<ParamPoint> {
    let mut c = point.coords();
    c[index] += delta;
    ParamPoint::new(point.chart(), c[0], c[1]).map_err(|e| match e {
        GeoError::Domain(msg) => {
            GeoError::Domain(format!("finite-difference stencil left the domain: {msg}"))
        }
        other => other,
    })
}

/// Central-difference gradient `(f(x + h e_i) - f(x - h e_i)) / 2h`.
///
/// Every stencil point is validated against the chart, so a step that
/// crosses `σ = 0` (or `ξ₂ = ξ₁²`) is a [`GeoError::Domain`].
pub fn fd_gradient<F>(f: F, point: &ParamPoint, step: f64) -> Result<[f64; 2]>
where
    F: Fn(&ParamPoint) -> f64,
{
    let mut out = [0.0; 2];
    for (i, slot) in out.iter_mut().enumerate() {
        let plus = shifted(point, i, step)?;
        let minus = shifted(point, i, -step)?;
        *slot = (f(&plus) - f(&minus)) / (2.0 * step);
    }
    Ok(out)
}

/// Central-difference Hessian with the same domain checks as
/// [`fd_gradient`].
pub fn fd_hessian<F>(f: F, point: &ParamPoint, step: f64) -> Result<[[f64; 2]; 2]>
where
    F: Fn(&ParamPoint) -> f64,
{
    let f0 = f(point);
    let mut h = [[0.0; 2]; 2];
    for i in 0..2 {
        let fp = f(&shifted(point, i, step)?);
        let fm = f(&shifted(point, i, -step)?);
        h[i][i] = (fp - 2.0 * f0 + fm) / (step * step);
    }
    let at = |di: f64, dj: f64| -> Result<f64> {
        let p = shifted(&shifted(point, 0, di)?, 1, dj)?;
        Ok(f(&p))
    };
    let mixed = (at(step, step)? - at(step, -step)? - at(-step, step)? + at(-step, -step)?)
        / (4.0 * step * step);
    h[0][1] = mixed;
    h[1][0] = mixed;
    Ok(h)
}
