//! The Gaussian family `N(μ, σ²)`, its two charts and expectation engines.
//!
//! Two charts are used throughout:
//!
//! * θ = (μ, σ), with σ > 0;
//! * ξ = (μ, μ² + σ²), with ξ₂ − ξ₁² = σ² > 0.
//!
//! The ξ chart is never assumed to coincide with any other coordinate
//! system; everything about it is derived from the chart map below.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::autodiff::{lift_coords, Dual2, Scalar};
use crate::error::{GeoError, Result};
use crate::geometry::{ConnAt, Mat2, MetricAt, Tensor3};
use crate::quadrature::GaussHermite;

/// Coordinate chart a [`ParamPoint`] is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chart {
    /// (μ, σ)
    Theta,
    /// (μ, μ² + σ²)
    Xi,
    /// Unconstrained coordinates, for reference fixtures (flat plane, sphere).
    Plain,
}

impl Chart {
    pub fn name(self) -> &'static str {
        match self {
            Chart::Theta => "theta",
            Chart::Xi => "xi",
            Chart::Plain => "plain",
        }
    }

    pub fn expect(self, expected: Chart) -> Result<()> {
        if self == expected {
            Ok(())
        } else {
            Err(GeoError::ChartMismatch {
                expected: expected.name(),
                got: self.name(),
            })
        }
    }

    /// Checks the chart's domain invariant.
    pub fn validate(self, c1: f64, c2: f64) -> Result<()> {
        if !c1.is_finite() || !c2.is_finite() {
            return Err(GeoError::Domain(format!(
                "coordinates ({c1}, {c2}) are not finite"
            )));
        }
        match self {
            Chart::Theta if c2 <= 0.0 => Err(GeoError::Domain(format!(
                "theta chart requires sigma > 0, got sigma = {c2}"
            ))),
            Chart::Xi if c2 - c1 * c1 <= 0.0 => Err(GeoError::Domain(format!(
                "xi chart requires xi2 - xi1^2 > 0, got xi2 - xi1^2 = {}",
                c2 - c1 * c1
            ))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A point on the manifold in a named chart. Construction enforces the
/// chart's domain invariant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamPoint {
    chart: Chart,
    c1: f64,
    c2: f64,
}

impl ParamPoint {
    pub fn new(chart: Chart, c1: f64, c2: f64) -> Result<Self> {
        chart.validate(c1, c2)?;
        Ok(Self { chart, c1, c2 })
    }

    pub fn theta(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(Chart::Theta, mu, sigma)
    }

    pub fn xi(xi1: f64, xi2: f64) -> Result<Self> {
        Self::new(Chart::Xi, xi1, xi2)
    }

    pub fn plain(c1: f64, c2: f64) -> Result<Self> {
        Self::new(Chart::Plain, c1, c2)
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn coords(&self) -> [f64; 2] {
        [self.c1, self.c2]
    }

    /// (μ, σ) of a θ-chart point.
    pub fn mu_sigma(&self) -> Result<(f64, f64)> {
        self.chart.expect(Chart::Theta)?;
        Ok((self.c1, self.c2))
    }
}

// ---------------------------------------------------------------------------
// charts

/// ξ(θ) = (μ, μ² + σ²)
pub fn forward_coords<S: Scalar>(mu: S, sigma: S) -> [S; 2] {
    [mu, mu * mu + sigma * sigma]
}

/// θ(ξ) = (ξ₁, √(ξ₂ − ξ₁²)), positive root.
pub fn backward_coords<S: Scalar>(xi1: S, xi2: S) -> [S; 2] {
    [xi1, (xi2 - xi1 * xi1).sqrt()]
}

pub fn chart_forward(p: &ParamPoint) -> Result<ParamPoint> {
    let (mu, sigma) = p.mu_sigma()?;
    let [a, b] = forward_coords(mu, sigma);
    ParamPoint::xi(a, b)
}

pub fn chart_backward(q: &ParamPoint) -> Result<ParamPoint> {
    q.chart().expect(Chart::Xi)?;
    let [mu, sigma] = backward_coords(q.c1(), q.c2());
    ParamPoint::theta(mu, sigma)
}

/// `∂θ_i/∂ξ_α` as a function of (μ, σ), laid out `[i][α]`.
pub fn inverse_jacobian_coords<S: Scalar>(mu: S, sigma: S) -> [[S; 2]; 2] {
    let zero = S::from(0.0);
    let one = S::from(1.0);
    [[one, zero], [-mu / sigma, (sigma * 2.0).recip()]]
}

/// Jacobian of the θ → ξ map and its inverse at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jacobian {
    /// `∂ξ_r/∂θ_c` laid out `[r][c]`: `[[1, 0], [2μ, 2σ]]`.
    pub forward: Mat2,
    /// `∂θ_i/∂ξ_α` laid out `[i][α]`: `[[1, 0], [-μ/σ, 1/(2σ)]]`.
    pub inverse: Mat2,
    pub det: f64,
}

pub fn jacobian(p: &ParamPoint) -> Result<Jacobian> {
    let (mu, sigma) = p.mu_sigma()?;
    Ok(Jacobian {
        forward: [[1.0, 0.0], [2.0 * mu, 2.0 * sigma]],
        inverse: inverse_jacobian_coords(mu, sigma),
        det: 2.0 * sigma,
    })
}

/// `∂²θ_k/∂ξ_α∂ξ_β` at the ξ image of `p`, laid out `[k][α][β]`.
pub fn inverse_chart_hessian(p: &ParamPoint) -> Result<Tensor3> {
    let q = chart_forward(p)?;
    let [x1, x2] = lift_coords(q.coords());
    let theta: [Dual2; 2] = backward_coords(x1, x2);
    Ok([theta[0].hess(), theta[1].hess()])
}

// ---------------------------------------------------------------------------
// the Gaussian family

/// `l(x; μ, σ) = −log(√(2π) σ) − (x − μ)² / (2σ²)`
pub fn log_likelihood_coords<S: Scalar>(x: f64, mu: S, sigma: S) -> S {
    let r = -mu + x;
    -(sigma * (2.0 * PI).sqrt()).ln() - r * r / (sigma * sigma * 2.0)
}

/// The same log-likelihood written directly in ξ coordinates.
pub fn log_likelihood_xi_coords<S: Scalar>(x: f64, xi1: S, xi2: S) -> S {
    let var = xi2 - xi1 * xi1;
    let r = -xi1 + x;
    -var.ln() * 0.5 - 0.5 * (2.0 * PI).ln() - r * r / (var * 2.0)
}

/// Stateless descriptor of the family `N(μ, σ²)`; every method takes a
/// θ-chart point.
#[derive(Debug, Clone, Copy, Default)]
pub struct GaussianModel;

impl GaussianModel {
    pub fn log_likelihood(&self, x: f64, p: &ParamPoint) -> Result<f64> {
        let (mu, sigma) = p.mu_sigma()?;
        Ok(log_likelihood_coords(x, mu, sigma))
    }

    pub fn density(&self, x: f64, p: &ParamPoint) -> Result<f64> {
        self.log_likelihood(x, p).map(f64::exp)
    }

    /// `(∂_μ l, ∂_σ l) = ((x−μ)/σ², −1/σ + (x−μ)²/σ³)`
    pub fn score_theta(&self, x: f64, p: &ParamPoint) -> Result<[f64; 2]> {
        let (mu, sigma) = p.mu_sigma()?;
        let r = x - mu;
        let s2 = sigma * sigma;
        Ok([r / s2, -1.0 / sigma + r * r / (s2 * sigma)])
    }

    /// The score basis attached to the ξ chart in its published form:
    /// `((x−μ)/σ², (x−μ)²/(2σ⁴) − μ(x−μ)/σ³ − 1/(2σ²))`.
    ///
    /// This is the combination `J⁻¹ · s_θ` of the θ scores, i.e. the second
    /// entry is `(−μ/σ) ∂_μ l + (1/(2σ)) ∂_σ l`. It is not the chain-rule
    /// derivative of `l` along ξ; see [`GaussianModel::score_xi_chain_rule`].
    pub fn score_xi(&self, x: f64, p: &ParamPoint) -> Result<[f64; 2]> {
        let (mu, sigma) = p.mu_sigma()?;
        let r = x - mu;
        let s2 = sigma * sigma;
        Ok([
            r / s2,
            r * r / (2.0 * s2 * s2) - mu * r / (s2 * sigma) - 1.0 / (2.0 * s2),
        ])
    }

    /// `(∂l/∂ξ₁, ∂l/∂ξ₂)`, i.e. `J⁻ᵀ · s_θ`.
    pub fn score_xi_chain_rule(&self, x: f64, p: &ParamPoint) -> Result<[f64; 2]> {
        let q = chart_forward(p)?;
        let [x1, x2] = lift_coords(q.coords());
        Ok(log_likelihood_xi_coords(x, x1, x2).grad)
    }

    /// `∂_i∂_j l` in θ.
    pub fn hessian_theta(&self, x: f64, p: &ParamPoint) -> Result<Mat2> {
        let (mu, sigma) = p.mu_sigma()?;
        let r = x - mu;
        let s2 = sigma * sigma;
        let off = -2.0 * r / (s2 * sigma);
        Ok([[-1.0 / s2, off], [off, 1.0 / s2 - 3.0 * r * r / (s2 * s2)]])
    }

    /// `∂_α∂_β l` in ξ.
    pub fn hessian_xi(&self, x: f64, p: &ParamPoint) -> Result<Mat2> {
        let q = chart_forward(p)?;
        let [x1, x2] = lift_coords(q.coords());
        Ok(log_likelihood_xi_coords(x, x1, x2).hess())
    }

    pub fn mean(&self, p: &ParamPoint) -> Result<f64> {
        Ok(p.mu_sigma()?.0)
    }

    /// `E[x²] = σ² + μ²`
    pub fn second_moment(&self, p: &ParamPoint) -> Result<f64> {
        let (mu, sigma) = p.mu_sigma()?;
        Ok(sigma * sigma + mu * mu)
    }
}

// ---------------------------------------------------------------------------
// expectation engines

pub const DEFAULT_HERMITE_NODES: usize = 64;
pub const DEFAULT_MC_SEED: u64 = 0x5EED_1DE0;
pub const MIN_MC_SAMPLES: usize = 100;

/// How `E[·]` under `N(μ, σ²)` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ExpectationEngine {
    /// Analytic moments; only the named closed-form quantities support it.
    #[default]
    ClosedForm,
    /// `x = μ + √2 σ t` over an `nodes`-point Gauss–Hermite rule.
    GaussHermite { nodes: usize },
    /// Stratified inverse-CDF sampling from a ChaCha8 stream seeded with
    /// `seed`: one draw per stratum `((i + u) / n)`.
    MonteCarlo { samples: usize, seed: u64 },
}

impl ExpectationEngine {
    pub fn gauss_hermite() -> Self {
        Self::GaussHermite {
            nodes: DEFAULT_HERMITE_NODES,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::ClosedForm => "closed_form".into(),
            Self::GaussHermite { nodes } => format!("gauss_hermite:{nodes}"),
            Self::MonteCarlo { samples, seed } => format!("monte_carlo:{samples}:{seed}"),
        }
    }

    /// `E[f(x)]` for `x ~ N(μ, σ²)`, componentwise.
    pub fn expect<const N: usize, F>(&self, p: &ParamPoint, f: F) -> Result<[f64; N]>
    where
        F: Fn(f64) -> [f64; N],
    {
        let (mu, sigma) = p.mu_sigma()?;
        match *self {
            Self::ClosedForm => Err(GeoError::Engine(
                "the closed-form engine has no generic integrator".into(),
            )),
            Self::GaussHermite { nodes } => {
                let rule = GaussHermite::new(nodes)?;
                let mut acc = [0.0; N];
                for (t, w) in rule.iter() {
                    let v = f(mu + SQRT_2 * sigma * t);
                    for (a, vi) in acc.iter_mut().zip(v) {
                        *a += w * vi;
                    }
                }
                let norm = PI.sqrt().recip();
                Ok(acc.map(|a| a * norm))
            }
            Self::MonteCarlo { samples, seed } => {
                if samples < MIN_MC_SAMPLES {
                    return Err(GeoError::Engine(format!(
                        "Monte Carlo needs at least {MIN_MC_SAMPLES} samples, got {samples}"
                    )));
                }
                let normal = Normal::standard();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let n = samples as f64;
                let mut acc = [0.0; N];
                for i in 0..samples {
                    let u: f64 = rng.sample(rand::distr::Open01);
                    let z = normal.inverse_cdf((i as f64 + u) / n);
                    let v = f(mu + sigma * z);
                    for (a, vi) in acc.iter_mut().zip(v) {
                        *a += vi;
                    }
                }
                Ok(acc.map(|a| a / n))
            }
        }
    }
}

fn closed_form_metric_theta(sigma: f64) -> Mat2 {
    let s2 = sigma * sigma;
    [[1.0 / s2, 0.0], [0.0, 2.0 / s2]]
}

/// Fisher metric in θ. Closed form `diag(1/σ², 2/σ²)`; other engines
/// integrate `−E[∂_i∂_j l]`.
pub fn fisher_metric_theta(p: &ParamPoint, engine: &ExpectationEngine) -> Result<MetricAt> {
    let (_, sigma) = p.mu_sigma()?;
    let g = match engine {
        ExpectationEngine::ClosedForm => closed_form_metric_theta(sigma),
        _ => {
            let model = GaussianModel;
            let [g11, g12, g22] = engine.expect(p, |x| {
                let h = model
                    .hessian_theta(x, p)
                    .expect("θ-chart point validated above");
                [-h[0][0], -h[0][1], -h[1][1]]
            })?;
            [[g11, g12], [g12, g22]]
        }
    };
    MetricAt::new(*p, g)
}

/// `E[∂_i l ∂_j l]` in θ; the other side of the information identity.
pub fn score_outer_theta(p: &ParamPoint, engine: &ExpectationEngine) -> Result<Mat2> {
    let model = GaussianModel;
    let [a, b, c] = engine.expect(p, |x| {
        let s = model.score_theta(x, p).expect("validated θ point");
        [s[0] * s[0], s[0] * s[1], s[1] * s[1]]
    })?;
    Ok([[a, b], [b, c]])
}

/// Fisher metric natively in ξ, `−E[∂_α∂_β l]` with ξ-chart derivatives of
/// the log-likelihood. `p` is the θ-chart location of the distribution.
pub fn fisher_metric_xi_expectation(
    p: &ParamPoint,
    engine: &ExpectationEngine,
) -> Result<MetricAt> {
    let q = chart_forward(p)?;
    let model = GaussianModel;
    let [g11, g12, g22] = engine.expect(p, |x| {
        let h = model.hessian_xi(x, p).expect("validated θ point");
        [-h[0][0], -h[0][1], -h[1][1]]
    })?;
    MetricAt::new(q, [[g11, g12], [g12, g22]])
}

/// `E[∂_α l ∂_β l]` with ξ-chart derivatives.
pub fn score_outer_xi(p: &ParamPoint, engine: &ExpectationEngine) -> Result<Mat2> {
    let model = GaussianModel;
    let [a, b, c] = engine.expect(p, |x| {
        let s = model.score_xi_chain_rule(x, p).expect("validated θ point");
        [s[0] * s[0], s[0] * s[1], s[1] * s[1]]
    })?;
    Ok([[a, b], [b, c]])
}

/// Expectation-form connection `Γ_ijk = E[∂_i∂_j l · ∂_k l]` in θ.
///
/// Closed form: `Γ_121 = Γ_211 = −2/σ³`, `Γ_222 = −6/σ³`, all others zero.
pub fn conn_expectation_theta(p: &ParamPoint, engine: &ExpectationEngine) -> Result<ConnAt> {
    let (_, sigma) = p.mu_sigma()?;
    let lower = match engine {
        ExpectationEngine::ClosedForm => {
            let s3 = sigma * sigma * sigma;
            let mut t = [[[0.0; 2]; 2]; 2];
            t[0][1][0] = -2.0 / s3;
            t[1][0][0] = -2.0 / s3;
            t[1][1][1] = -6.0 / s3;
            t
        }
        _ => {
            let model = GaussianModel;
            expect_connection(engine, p, |x| {
                (
                    model.hessian_theta(x, p).expect("validated θ point"),
                    model.score_theta(x, p).expect("validated θ point"),
                )
            })?
        }
    };
    let metric = fisher_metric_theta(p, &ExpectationEngine::ClosedForm)?;
    ConnAt::from_lower(lower, &metric)
}

/// The same expectation-form connection computed natively in ξ, using
/// ξ-chart derivatives of the log-likelihood under the integral.
pub fn conn_expectation_xi(p: &ParamPoint, engine: &ExpectationEngine) -> Result<ConnAt> {
    if matches!(engine, ExpectationEngine::ClosedForm) {
        return Err(GeoError::Engine(
            "the ξ-chart expectation connection is only available by integration".into(),
        ));
    }
    let model = GaussianModel;
    let lower = expect_connection(engine, p, |x| {
        (
            model.hessian_xi(x, p).expect("validated θ point"),
            model.score_xi_chain_rule(x, p).expect("validated θ point"),
        )
    })?;
    let metric = fisher_metric_xi_expectation(p, engine)?;
    ConnAt::from_lower(lower, &metric)
}

fn expect_connection<F>(engine: &ExpectationEngine, p: &ParamPoint, parts: F) -> Result<Tensor3>
where
    F: Fn(f64) -> (Mat2, [f64; 2]),
{
    let flat = engine.expect(p, |x| {
        let (h, s) = parts(x);
        let mut out = [0.0; 8];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    out[4 * i + 2 * j + k] = h[i][j] * s[k];
                }
            }
        }
        out
    })?;
    let mut t = [[[0.0; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                t[i][j][k] = flat[4 * i + 2 * j + k];
            }
        }
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn theta(mu: f64, sigma: f64) -> ParamPoint {
        ParamPoint::theta(mu, sigma).unwrap()
    }

    const LOG_ROOT_TWO_PI: f64 = 0.918_938_533_204_672_7;

    #[test]
    fn chart_invariants() {
        assert!(ParamPoint::theta(0.0, 0.0).is_err());
        assert!(ParamPoint::theta(0.0, -1.0).is_err());
        assert!(ParamPoint::xi(1.0, 1.0).is_err());
        assert!(ParamPoint::xi(1.0, 0.5).is_err());
        assert!(ParamPoint::xi(1.0, 1.5).is_ok());
        assert!(ParamPoint::theta(f64::NAN, 1.0).is_err());
        assert!(ParamPoint::plain(-3.0, -3.0).is_ok());
    }

    #[test]
    fn log_likelihood_values() {
        let m = GaussianModel;
        assert_relative_eq!(
            m.log_likelihood(0.0, &theta(0.0, 1.0)).unwrap(),
            -LOG_ROOT_TWO_PI
        );
        assert_relative_eq!(
            m.log_likelihood(1.0, &theta(0.0, 1.0)).unwrap(),
            -LOG_ROOT_TWO_PI - 0.5
        );
        let l = m.log_likelihood(2.0, &theta(1.0, 2.0)).unwrap();
        assert_relative_eq!(
            l,
            -(2.0 * (2.0 * PI).sqrt()).ln() - 0.125,
            max_relative = 1e-15
        );
        // the log of the density written out independently
        let dens = (-(0.125f64)).exp() / (2.0 * (2.0 * PI).sqrt());
        assert_relative_eq!(l, dens.ln(), max_relative = 1e-14);
    }

    #[test]
    fn log_likelihood_needs_theta_chart() {
        let q = ParamPoint::xi(0.0, 1.0).unwrap();
        assert!(matches!(
            GaussianModel.log_likelihood(0.0, &q),
            Err(GeoError::ChartMismatch { .. })
        ));
    }

    #[test]
    fn theta_scores() {
        let m = GaussianModel;
        assert_eq!(m.score_theta(1.0, &theta(0.0, 1.0)).unwrap(), [1.0, 0.0]);
        let s = m.score_theta(0.7, &theta(0.7, 2.5)).unwrap();
        assert_eq!(s, [0.0, -1.0 / 2.5]);
    }

    #[test]
    fn xi_scores() {
        let m = GaussianModel;
        let s = m.score_xi(1.3, &theta(1.3, 0.8)).unwrap();
        assert_eq!(s[0], 0.0);
        assert_relative_eq!(s[1], -1.0 / (2.0 * 0.64));
        assert_eq!(m.score_xi(1.0, &theta(0.0, 1.0)).unwrap(), [1.0, 0.0]);
    }

    #[test]
    fn xi_scores_are_row_combination_of_theta_scores() {
        let m = GaussianModel;
        for &(x, mu, sigma) in &[(0.3, -1.0, 0.7), (4.0, 2.0, 1.5), (-2.0, 0.5, 3.0)] {
            let p = theta(mu, sigma);
            let st = m.score_theta(x, &p).unwrap();
            let jinv = jacobian(&p).unwrap().inverse;
            let row = [
                jinv[0][0] * st[0] + jinv[0][1] * st[1],
                jinv[1][0] * st[0] + jinv[1][1] * st[1],
            ];
            let sx = m.score_xi(x, &p).unwrap();
            assert_relative_eq!(sx[0], row[0], max_relative = 1e-13);
            assert_relative_eq!(sx[1], row[1], max_relative = 1e-13, epsilon = 1e-14);

            // the chain-rule scores use the columns instead
            let col = [
                jinv[0][0] * st[0] + jinv[1][0] * st[1],
                jinv[0][1] * st[0] + jinv[1][1] * st[1],
            ];
            let sc = m.score_xi_chain_rule(x, &p).unwrap();
            assert_relative_eq!(sc[0], col[0], max_relative = 1e-12, epsilon = 1e-13);
            assert_relative_eq!(sc[1], col[1], max_relative = 1e-12, epsilon = 1e-13);
        }
    }

    #[test]
    fn hessian_matches_autodiff() {
        let m = GaussianModel;
        let p = theta(0.4, 1.3);
        let [a, b] = lift_coords(p.coords());
        let l = log_likelihood_coords(2.1, a, b);
        let h = m.hessian_theta(2.1, &p).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_relative_eq!(h[i][j], l.hess_entry(i, j), max_relative = 1e-13);
            }
        }
        assert_relative_eq!(
            l.grad[1],
            m.score_theta(2.1, &p).unwrap()[1],
            max_relative = 1e-13
        );
    }

    #[test]
    fn xi_log_likelihood_agrees_with_theta_form() {
        let p = theta(-0.6, 1.9);
        let q = chart_forward(&p).unwrap();
        let a = log_likelihood_coords(0.25, -0.6, 1.9);
        let b = log_likelihood_xi_coords(0.25, q.c1(), q.c2());
        assert_relative_eq!(a, b, max_relative = 1e-14);
    }

    #[test]
    fn chart_maps() {
        assert_eq!(
            chart_forward(&theta(0.0, 1.0)).unwrap().coords(),
            [0.0, 1.0]
        );
        assert_eq!(
            chart_forward(&theta(1.0, 2.0)).unwrap().coords(),
            [1.0, 5.0]
        );
        let back = chart_backward(&ParamPoint::xi(1.0, 5.0).unwrap()).unwrap();
        assert_eq!(back.chart(), Chart::Theta);
        assert_eq!(back.coords(), [1.0, 2.0]);
        assert!(chart_forward(&ParamPoint::xi(1.0, 5.0).unwrap()).is_err());
    }

    #[test]
    fn jacobian_values() {
        let j = jacobian(&theta(1.0, 2.0)).unwrap();
        assert_eq!(j.forward, [[1.0, 0.0], [2.0, 4.0]]);
        assert_eq!(j.det, 4.0);
        let j = jacobian(&theta(0.0, 0.5)).unwrap();
        assert_eq!(j.inverse[0], [1.0, 0.0]);
        assert_eq!(j.inverse[1][0], 0.0);
        assert_eq!(j.inverse[1][1], 1.0);
    }

    #[test]
    fn jacobian_times_inverse_is_identity() {
        for &(mu, sigma) in &[(0.3, 0.2), (-7.0, 3.3), (9.5, 0.11)] {
            let j = jacobian(&theta(mu, sigma)).unwrap();
            for r in 0..2 {
                for c in 0..2 {
                    let v: f64 = (0..2).map(|k| j.forward[r][k] * j.inverse[k][c]).sum();
                    let id = if r == c { 1.0 } else { 0.0 };
                    assert!((v - id).abs() < 1e-14, "{v} at ({r},{c})");
                }
            }
        }
    }

    #[test]
    fn inverse_chart_hessian_at_origin() {
        // θ₂ = √(ξ₂ − ξ₁²): ∂₁₁ = −(σ² + μ²)/σ³, ∂₁₂ = μ/(2σ³), ∂₂₂ = −1/(4σ³)
        let h = inverse_chart_hessian(&theta(0.0, 1.0)).unwrap();
        assert_eq!(h[0], [[0.0; 2]; 2]);
        assert_relative_eq!(h[1][0][0], -1.0);
        assert_eq!(h[1][0][1], 0.0);
        assert_relative_eq!(h[1][1][1], -0.25);
        let h = inverse_chart_hessian(&theta(1.5, 0.5)).unwrap();
        assert_relative_eq!(h[1][0][0], -(0.25 + 2.25) / 0.125, max_relative = 1e-13);
        assert_relative_eq!(h[1][0][1], 1.5 / 0.25, max_relative = 1e-13);
        assert_relative_eq!(h[1][1][1], -1.0 / 0.5, max_relative = 1e-13);
    }

    #[test]
    fn closed_form_metric_values() {
        let g = fisher_metric_theta(&theta(0.0, 1.0), &ExpectationEngine::ClosedForm).unwrap();
        assert_eq!(g.g, [[1.0, 0.0], [0.0, 2.0]]);
        let g = fisher_metric_theta(&theta(3.0, 2.0), &ExpectationEngine::ClosedForm).unwrap();
        assert_eq!(g.g, [[0.25, 0.0], [0.0, 0.5]]);
    }

    #[test]
    fn quadrature_metric_matches_closed_form() {
        let p = theta(1.0, 1.5);
        let g = fisher_metric_theta(&p, &ExpectationEngine::gauss_hermite()).unwrap();
        let c = fisher_metric_theta(&p, &ExpectationEngine::ClosedForm).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((g.g[i][j] - c.g[i][j]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn expectation_connection_values() {
        let c = conn_expectation_theta(&theta(0.0, 1.0), &ExpectationEngine::ClosedForm).unwrap();
        assert_eq!(c.lower[0][1][0], -2.0);
        assert_eq!(c.lower[1][0][0], -2.0);
        assert_eq!(c.lower[1][1][1], -6.0);
        for (i, j, k) in [(0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 0)] {
            assert_eq!(c.lower[i][j][k], 0.0);
        }
        let c = conn_expectation_theta(&theta(0.0, 2.0), &ExpectationEngine::ClosedForm).unwrap();
        assert_eq!(c.lower[1][1][1], -0.75);

        let p = theta(1.0, 1.0);
        let q = conn_expectation_theta(&p, &ExpectationEngine::gauss_hermite()).unwrap();
        let e = conn_expectation_theta(&p, &ExpectationEngine::ClosedForm).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    assert!((q.lower[i][j][k] - e.lower[i][j][k]).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn closed_form_engine_has_no_integrator() {
        let e = ExpectationEngine::ClosedForm.expect(&theta(0.0, 1.0), |x| [x]);
        assert!(matches!(e, Err(GeoError::Engine(_))));
    }

    #[test]
    fn monte_carlo_sample_floor() {
        let engine = ExpectationEngine::MonteCarlo {
            samples: 99,
            seed: 1,
        };
        let e = fisher_metric_theta(&theta(0.0, 1.0), &engine);
        assert!(matches!(e, Err(GeoError::Engine(_))));
        let engine = ExpectationEngine::MonteCarlo {
            samples: 100,
            seed: 1,
        };
        assert!(fisher_metric_theta(&theta(0.0, 1.0), &engine).is_ok());
    }

    #[test]
    fn monte_carlo_is_deterministic_per_seed() {
        let p = theta(0.2, 1.1);
        let run = |seed| {
            ExpectationEngine::MonteCarlo {
                samples: 5_000,
                seed,
            }
            .expect(&p, |x| [x, x * x])
            .unwrap()
        };
        assert_eq!(run(7), run(7));
        assert_ne!(run(7), run(8));
        let m = run(7);
        assert!((m[0] - 0.2).abs() < 5e-3);
        assert!((m[1] - (1.21 + 0.04)).abs() < 5e-3);
    }

    #[test]
    fn moments() {
        let m = GaussianModel;
        let p = theta(-1.5, 0.5);
        assert_eq!(m.mean(&p).unwrap(), -1.5);
        assert_eq!(m.second_moment(&p).unwrap(), 2.5);
        let e = ExpectationEngine::gauss_hermite()
            .expect(&p, |x| [x, x * x])
            .unwrap();
        assert_relative_eq!(e[0], -1.5, max_relative = 1e-13);
        assert_relative_eq!(e[1], 2.5, max_relative = 1e-13);
    }
}
