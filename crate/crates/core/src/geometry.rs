//! Chart-generic tensor kernels on a two-dimensional manifold.
//!
//! Index conventions used everywhere in this module:
//!
//! * `ConnAt::lower[i][j][m] = Γ_ijm = Σ_s Γ^s_ij g_sm`
//! * `ConnAt::mixed[k][i][j] = Γ^k_ij`
//! * `RiemannAt::r[i][j][k][m] = R_ijkm = ⟨R(∂_i, ∂_j) ∂_k, ∂_m⟩`, with
//!
//! ```text
//! R_ijkm = (∂_i Γ^s_jk − ∂_j Γ^s_ik) g_sm + (Γ_irm Γ^r_jk − Γ_jrm Γ^r_ik)
//! ```
//!
//! so the first two slots are the antisymmetric pair and the scalar
//! curvature is `½ R_ijkm g^im g^jk`. In two dimensions the sectional
//! curvature is `R_1221 / det g` and equals the scalar curvature.
//!
//! Jacobians passed to the transformation laws use the chart-machinery
//! layout: `jac[r][c] = ∂ξ_r/∂θ_c` and `jac_inv[i][α] = ∂θ_i/∂ξ_α`.

use crate::autodiff::{lift, Scalar};
use crate::error::{GeoError, Result};
use crate::models::{
    backward_coords, chart_backward, chart_forward, conn_expectation_theta, inverse_chart_hessian,
    inverse_jacobian_coords, jacobian, Chart, ExpectationEngine, ParamPoint,
};

pub type Mat2 = [[f64; 2]; 2];
pub type Tensor3 = [[[f64; 2]; 2]; 2];
pub type Tensor4 = [[[[f64; 2]; 2]; 2]; 2];

const SYMMETRY_TOL: f64 = 1e-12;

pub fn det2(m: &Mat2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn symmetric_inverse(g: &Mat2) -> Result<Mat2> {
    let det = det2(g);
    let scale = g[0][0].abs().max(g[1][1].abs()).max(g[0][1].abs());
    if !det.is_finite() || det.abs() <= f64::EPSILON * scale * scale {
        return Err(GeoError::SingularMetric(format!(
            "metric {g:?} has determinant {det}"
        )));
    }
    let off = -g[0][1] / det;
    Ok([[g[1][1] / det, off], [off, g[0][0] / det]])
}

/// Metric matrix and its inverse at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricAt {
    pub point: ParamPoint,
    pub g: Mat2,
    pub g_inv: Mat2,
}

impl MetricAt {
    /// Validates symmetry and positive definiteness; the stored `g` has its
    /// off-diagonal entries made bit-identical.
    pub fn new(point: ParamPoint, g: Mat2) -> Result<Self> {
        let off = g[0][1];
        if (g[0][1] - g[1][0]).abs() > SYMMETRY_TOL * off.abs().max(1.0) {
            return Err(GeoError::SingularMetric(format!(
                "metric {g:?} is not symmetric"
            )));
        }
        let g = [[g[0][0], off], [off, g[1][1]]];
        if !(g[0][0] > 0.0 && det2(&g) > 0.0) {
            return Err(GeoError::SingularMetric(format!(
                "metric {g:?} is not positive definite"
            )));
        }
        let g_inv = symmetric_inverse(&g)?;
        Ok(Self { point, g, g_inv })
    }

    pub fn det(&self) -> f64 {
        det2(&self.g)
    }
}

/// Connection coefficients at one point, in both index placements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnAt {
    pub point: ParamPoint,
    pub lower: Tensor3,
    pub mixed: Tensor3,
}

impl ConnAt {
    /// Raise the last index of `lower` with `metric`.
    pub fn from_lower(lower: Tensor3, metric: &MetricAt) -> Result<Self> {
        Ok(Self {
            point: metric.point,
            lower,
            mixed: raise_last(&lower, &metric.g_inv),
        })
    }

    /// Lower the upper index of `mixed` with `metric`.
    pub fn from_mixed(mixed: Tensor3, metric: &MetricAt) -> Result<Self> {
        Ok(Self {
            point: metric.point,
            lower: lower_upper(&mixed, &metric.g),
            mixed,
        })
    }
}

// mixed[k][i][j] = Σ_m g_inv[k][m] lower[i][j][m]
fn raise_last(lower: &Tensor3, g_inv: &Mat2) -> Tensor3 {
    let mut mixed = [[[0.0; 2]; 2]; 2];
    for k in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                mixed[k][i][j] = (0..2).map(|m| g_inv[k][m] * lower[i][j][m]).sum();
            }
        }
    }
    mixed
}

// lower[i][j][m] = Σ_s mixed[s][i][j] g[s][m]
fn lower_upper(mixed: &Tensor3, g: &Mat2) -> Tensor3 {
    let mut lower = [[[0.0; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for m in 0..2 {
                lower[i][j][m] = (0..2).map(|s| mixed[s][i][j] * g[s][m]).sum();
            }
        }
    }
    lower
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorsionAt {
    pub point: ParamPoint,
    pub t: Tensor3,
}

impl TorsionAt {
    pub fn max_abs(&self) -> f64 {
        self.t
            .iter()
            .flatten()
            .flatten()
            .fold(0.0f64, |a, &v| a.max(v.abs()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannAt {
    pub point: ParamPoint,
    pub r: Tensor4,
    pub scalar: f64,
}

// ---------------------------------------------------------------------------
// fields

/// A metric written once against [`Scalar`], so it can be evaluated plainly
/// or on [`Dual2`](crate::autodiff::Dual2)-lifted coordinates.
pub trait MetricField {
    fn chart(&self) -> Chart;

    /// `g_ij` at coordinates `c`.
    fn components<S: Scalar>(&self, c: [S; 2]) -> Result<[[S; 2]; 2]>;

    fn metric_at(&self, p: &ParamPoint) -> Result<MetricAt> {
        p.chart().expect(self.chart())?;
        let g = self.components(p.coords())?;
        MetricAt::new(*p, g)
    }
}

/// A metric together with its first and second coordinate derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricJet {
    pub metric: MetricAt,
    /// `d[l][i][j] = ∂_l g_ij`
    pub d: [Mat2; 2],
    /// `dd[l][n][i][j] = ∂_l ∂_n g_ij`
    pub dd: [[Mat2; 2]; 2],
}

pub fn metric_jet<M: MetricField>(field: &M, p: &ParamPoint) -> Result<MetricJet> {
    p.chart().expect(field.chart())?;
    let comps = field.components(lift(p))?;
    let g = [
        [comps[0][0].value, comps[0][1].value],
        [comps[0][1].value, comps[1][1].value],
    ];
    let metric = MetricAt::new(*p, g)?;
    let mut d = [[[0.0; 2]; 2]; 2];
    let mut dd = [[[[0.0; 2]; 2]; 2]; 2];
    for (i, j) in [(0, 0), (0, 1), (1, 1)] {
        let c = comps[i][j];
        for l in 0..2 {
            d[l][i][j] = c.grad[l];
            d[l][j][i] = c.grad[l];
            for n in 0..2 {
                let h = c.hess_entry(l, n);
                dd[l][n][i][j] = h;
                dd[l][n][j][i] = h;
            }
        }
    }
    Ok(MetricJet { metric, d, dd })
}

/// Levi-Civita connection and `∂_l Γ^k_ij` from a metric jet.
fn levi_civita_from_jet(jet: &MetricJet) -> (ConnAt, [Tensor3; 2]) {
    let MetricJet { metric, d, dd } = jet;
    let g_inv = &metric.g_inv;

    // Christoffel symbols of the first kind, L_ijm, and ∂_l L_ijm; filled for
    // i ≤ j and mirrored so the symmetry in (i, j) is exact.
    let mut first = [[[0.0; 2]; 2]; 2];
    let mut dfirst = [[[[0.0; 2]; 2]; 2]; 2];
    for (i, j) in [(0, 0), (0, 1), (1, 1)] {
        for m in 0..2 {
            let v = 0.5 * (d[i][j][m] + d[j][i][m] - d[m][i][j]);
            first[i][j][m] = v;
            first[j][i][m] = v;
            for l in 0..2 {
                let dv = 0.5 * (dd[l][i][j][m] + dd[l][j][i][m] - dd[l][m][i][j]);
                dfirst[l][i][j][m] = dv;
                dfirst[l][j][i][m] = dv;
            }
        }
    }
    let mixed = raise_last(&first, g_inv);

    // ∂_l g^km = −g^ka ∂_l g_ab g^bm
    let mut dg_inv = [[[0.0; 2]; 2]; 2];
    for l in 0..2 {
        for k in 0..2 {
            for m in 0..2 {
                let mut acc = 0.0;
                for a in 0..2 {
                    for b in 0..2 {
                        acc += g_inv[k][a] * d[l][a][b] * g_inv[b][m];
                    }
                }
                dg_inv[l][k][m] = -acc;
            }
        }
    }
    let mut dmixed = [[[[0.0; 2]; 2]; 2]; 2];
    for l in 0..2 {
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    dmixed[l][k][i][j] = (0..2)
                        .map(|m| {
                            dg_inv[l][k][m] * first[i][j][m] + g_inv[k][m] * dfirst[l][i][j][m]
                        })
                        .sum();
                }
            }
        }
    }
    (
        ConnAt {
            point: metric.point,
            lower: first,
            mixed,
        },
        dmixed,
    )
}

/// `Γ^k_ij = ½ g^km (∂_i g_jm + ∂_j g_im − ∂_m g_ij)` with metric derivatives
/// from forward-mode differentiation.
pub fn levi_civita<M: MetricField>(field: &M, p: &ParamPoint) -> Result<ConnAt> {
    Ok(levi_civita_from_jet(&metric_jet(field, p)?).0)
}

/// A connection that can be evaluated, and differentiated, along a chart.
pub trait ConnectionField {
    fn chart(&self) -> Chart;

    fn connection(&self, p: &ParamPoint) -> Result<ConnAt>;

    /// The connection at `p` and `∂_l Γ^k_ij` laid out `[l][k][i][j]`.
    /// Defaults to a five-point central stencil on
    /// [`ConnectionField::connection`] with step `eps^(1/5) · max(1, |c_l|)`.
    fn connection_jet(&self, p: &ParamPoint) -> Result<(ConnAt, [Tensor3; 2])> {
        let c = p.coords();
        let steps = c.map(|x| JET_STEP * x.abs().max(1.0));
        let dmixed = stencil_jet(
            |c| {
                Ok(self
                    .connection(&ParamPoint::new(p.chart(), c[0], c[1])?)?
                    .mixed)
            },
            c,
            steps,
        )?;
        Ok((self.connection(p)?, dmixed))
    }
}

const JET_STEP: f64 = 7.4e-4; // ≈ eps^(1/5)

/// `∂_l f` by five-point central differences, laid out `[l][k][i][j]`.
fn stencil_jet<F>(f: F, c: [f64; 2], steps: [f64; 2]) -> Result<[Tensor3; 2]>
where
    F: Fn([f64; 2]) -> Result<Tensor3>,
{
    let mut out = [[[[0.0; 2]; 2]; 2]; 2];
    for (l, slot) in out.iter_mut().enumerate() {
        let h = steps[l];
        let at = |offset: f64| {
            let mut c = c;
            c[l] += offset * h;
            f(c)
        };
        let v = [at(-2.0)?, at(-1.0)?, at(1.0)?, at(2.0)?];
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    let [a, b, d, e] = v.map(|t| t[k][i][j]);
                    slot[k][i][j] = (a - 8.0 * b + 8.0 * d - e) / (12.0 * h);
                }
            }
        }
    }
    Ok(out)
}

/// The Levi-Civita connection of a metric field; its derivative is exact
/// (one extra differentiation layer of the metric).
#[derive(Debug, Clone, Copy, Default)]
pub struct LeviCivita<M>(pub M);

impl<M: MetricField> ConnectionField for LeviCivita<M> {
    fn chart(&self) -> Chart {
        self.0.chart()
    }

    fn connection(&self, p: &ParamPoint) -> Result<ConnAt> {
        levi_civita(&self.0, p)
    }

    fn connection_jet(&self, p: &ParamPoint) -> Result<(ConnAt, [Tensor3; 2])> {
        Ok(levi_civita_from_jet(&metric_jet(&self.0, p)?))
    }
}

/// The expectation-form connection `E[∂_i∂_j l ∂_k l]` in θ.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExpectationConnection {
    pub engine: ExpectationEngine,
}

impl ConnectionField for ExpectationConnection {
    fn chart(&self) -> Chart {
        Chart::Theta
    }

    fn connection(&self, p: &ParamPoint) -> Result<ConnAt> {
        conn_expectation_theta(p, &self.engine)
    }
}

/// A θ-chart connection carried to ξ with the full (inhomogeneous)
/// connection law; lowered with the transformed θ metric.
#[derive(Debug, Clone, Copy, Default)]
pub struct PushedConnection<C, M> {
    pub connection: C,
    pub metric: M,
}

impl<C: ConnectionField, M: MetricField> ConnectionField for PushedConnection<C, M> {
    fn chart(&self) -> Chart {
        Chart::Xi
    }

    fn connection(&self, q: &ParamPoint) -> Result<ConnAt> {
        q.chart().expect(Chart::Xi)?;
        let p = chart_backward(q)?;
        let conn = self.connection.connection(&p)?;
        let jac = jacobian(&p)?;
        let second = inverse_chart_hessian(&p)?;
        let target = transform_metric(&self.metric.metric_at(&p)?, &jac.inverse, *q)?;
        transform_connection(&conn, &jac.forward, &jac.inverse, &second, &target)
    }

    /// Differentiates along θ, where the natural step is a fraction of σ,
    /// and chains through `∂θ_i/∂ξ_α`; steps in ξ would have to shrink with
    /// the distance `ξ₂ − ξ₁²` to the chart boundary.
    fn connection_jet(&self, q: &ParamPoint) -> Result<(ConnAt, [Tensor3; 2])> {
        let p = chart_backward(q)?;
        let (_, sigma) = p.mu_sigma()?;
        let by_theta = stencil_jet(
            |c| {
                let xi = chart_forward(&ParamPoint::theta(c[0], c[1])?)?;
                Ok(self.connection(&xi)?.mixed)
            },
            p.coords(),
            [JET_STEP * sigma; 2],
        )?;
        let b = jacobian(&p)?.inverse;
        let mut dmixed = [[[[0.0; 2]; 2]; 2]; 2];
        for (a, slot) in dmixed.iter_mut().enumerate() {
            for k in 0..2 {
                for i in 0..2 {
                    for j in 0..2 {
                        slot[k][i][j] = (0..2).map(|t| by_theta[t][k][i][j] * b[t][a]).sum();
                    }
                }
            }
        }
        Ok((self.connection(q)?, dmixed))
    }
}

// ---------------------------------------------------------------------------
// concrete metric fields

/// Fisher metric of `N(μ, σ²)` in θ: `diag(1/σ², 2/σ²)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct GaussianThetaMetric;

impl MetricField for GaussianThetaMetric {
    fn chart(&self) -> Chart {
        Chart::Theta
    }

    fn components<S: Scalar>(&self, c: [S; 2]) -> Result<[[S; 2]; 2]> {
        Chart::Theta.validate(c[0].value(), c[1].value())?;
        let inv_s2 = (c[1] * c[1]).recip();
        Ok([[inv_s2, S::from(0.0)], [S::from(0.0), inv_s2 * 2.0]])
    }
}

/// Fisher metric in ξ, obtained by pulling the θ metric back through the
/// chart: `g_αβ(ξ) = Σ ∂θ_i/∂ξ_α ∂θ_j/∂ξ_β g_ij(θ(ξ))`.
#[derive(Debug, Clone, Copy, Default)]
pub struct GaussianXiMetric;

impl MetricField for GaussianXiMetric {
    fn chart(&self) -> Chart {
        Chart::Xi
    }

    fn components<S: Scalar>(&self, c: [S; 2]) -> Result<[[S; 2]; 2]> {
        Chart::Xi.validate(c[0].value(), c[1].value())?;
        let [mu, sigma] = backward_coords(c[0], c[1]);
        let g = GaussianThetaMetric.components([mu, sigma])?;
        let b = inverse_jacobian_coords(mu, sigma);
        let entry = |a: usize, c: usize| {
            let mut acc = S::from(0.0);
            for i in 0..2 {
                for j in 0..2 {
                    acc = acc + b[i][a] * b[j][c] * g[i][j];
                }
            }
            acc
        };
        let off = entry(0, 1);
        Ok([[entry(0, 0), off], [off, entry(1, 1)]])
    }
}

/// A constant metric.
#[derive(Debug, Clone, Copy)]
pub struct FlatMetric {
    pub chart: Chart,
    pub g: Mat2,
}

impl FlatMetric {
    pub fn euclidean() -> Self {
        Self {
            chart: Chart::Plain,
            g: [[1.0, 0.0], [0.0, 1.0]],
        }
    }
}

impl MetricField for FlatMetric {
    fn chart(&self) -> Chart {
        self.chart
    }

    fn components<S: Scalar>(&self, _c: [S; 2]) -> Result<[[S; 2]; 2]> {
        Ok(self.g.map(|row| row.map(S::from)))
    }
}

/// Round sphere of the given radius in (polar, azimuth) coordinates:
/// `diag(r², r² sin² c₁)`.
#[derive(Debug, Clone, Copy)]
pub struct SphereMetric {
    pub radius: f64,
}

impl Default for SphereMetric {
    fn default() -> Self {
        Self { radius: 1.0 }
    }
}

impl MetricField for SphereMetric {
    fn chart(&self) -> Chart {
        Chart::Plain
    }

    fn components<S: Scalar>(&self, c: [S; 2]) -> Result<[[S; 2]; 2]> {
        let r2 = self.radius * self.radius;
        let s = c[0].sin();
        Ok([[S::from(r2), S::from(0.0)], [S::from(0.0), s * s * r2]])
    }
}

// ---------------------------------------------------------------------------
// kernels

/// `T_ijk = Γ_ijk − Γ_jik`
pub fn torsion(conn: &ConnAt) -> TorsionAt {
    TorsionAt {
        point: conn.point,
        t: torsion_lower(&conn.lower),
    }
}

pub fn torsion_lower(lower: &Tensor3) -> Tensor3 {
    let mut t = [[[0.0; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                t[i][j][k] = lower[i][j][k] - lower[j][i][k];
            }
        }
    }
    t
}

/// All sixteen `R_ijkm` of `conn_field` at `p`, lowered with `metric_field`,
/// plus the scalar curvature.
pub fn riemann<C, M>(conn_field: &C, metric_field: &M, p: &ParamPoint) -> Result<RiemannAt>
where
    C: ConnectionField,
    M: MetricField,
{
    p.chart().expect(conn_field.chart())?;
    let metric = metric_field.metric_at(p)?;
    let (conn, dmixed) = conn_field.connection_jet(p)?;
    let r = riemann_from_parts(&conn.mixed, &dmixed, &metric.g);
    Ok(RiemannAt {
        point: *p,
        r,
        scalar: contract_scalar(&r, &metric.g_inv),
    })
}

/// Assemble `R_ijkm` from `Γ^k_ij`, `∂_l Γ^k_ij` (`[l][k][i][j]`) and `g`.
pub fn riemann_from_parts(mixed: &Tensor3, dmixed: &[Tensor3; 2], g: &Mat2) -> Tensor4 {
    let lower = lower_upper(mixed, g);
    let mut r = [[[[0.0; 2]; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for m in 0..2 {
                    let derivative: f64 = (0..2)
                        .map(|s| (dmixed[i][s][j][k] - dmixed[j][s][i][k]) * g[s][m])
                        .sum();
                    let quadratic: f64 = (0..2)
                        .map(|q| lower[i][q][m] * mixed[q][j][k] - lower[j][q][m] * mixed[q][i][k])
                        .sum();
                    r[i][j][k][m] = derivative + quadratic;
                }
            }
        }
    }
    r
}

/// `𝒦 = 1/(n(n−1)) R_ijkm g^im g^jk` with n = 2.
pub fn scalar_curvature(r: &Tensor4, metric: &MetricAt) -> f64 {
    contract_scalar(r, &metric.g_inv)
}

pub fn contract_scalar(r: &Tensor4, g_inv: &Mat2) -> f64 {
    let mut acc = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for m in 0..2 {
                    acc += r[i][j][k][m] * g_inv[i][m] * g_inv[j][k];
                }
            }
        }
    }
    0.5 * acc
}

/// `R_1221 / det g`
pub fn sectional_curvature(r: &Tensor4, metric: &MetricAt) -> f64 {
    r[0][1][1][0] / metric.det()
}

/// `g'_αβ = Σ jac_inv[i][α] jac_inv[j][β] g_ij`, including off-diagonal
/// terms.
pub fn transform_metric(m: &MetricAt, jac_inv: &Mat2, target: ParamPoint) -> Result<MetricAt> {
    let entry = |a: usize, b: usize| -> f64 {
        let mut acc = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                acc += jac_inv[i][a] * jac_inv[j][b] * m.g[i][j];
            }
        }
        acc
    };
    let off = entry(0, 1);
    MetricAt::new(target, [[entry(0, 0), off], [off, entry(1, 1)]])
}

/// The (0,3)-tensor law `t'_αβγ = Σ B_α^i B_β^j B_γ^k t_ijk` with
/// `B_α^i = jac_inv[i][α]`.
pub fn transform_lower_tensor3(t: &Tensor3, jac_inv: &Mat2) -> Tensor3 {
    let mut out = [[[0.0; 2]; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                let mut acc = 0.0;
                for i in 0..2 {
                    for j in 0..2 {
                        for k in 0..2 {
                            acc += jac_inv[i][a] * jac_inv[j][b] * jac_inv[k][c] * t[i][j][k];
                        }
                    }
                }
                out[a][b][c] = acc;
            }
        }
    }
    out
}

/// The (0,4)-tensor law with four inverse-Jacobian factors.
pub fn transform_lower_tensor4(r: &Tensor4, jac_inv: &Mat2) -> Tensor4 {
    let mut out = [[[[0.0; 2]; 2]; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    let mut acc = 0.0;
                    for i in 0..2 {
                        for j in 0..2 {
                            for k in 0..2 {
                                for m in 0..2 {
                                    acc += jac_inv[i][a]
                                        * jac_inv[j][b]
                                        * jac_inv[k][c]
                                        * jac_inv[m][d]
                                        * r[i][j][k][m];
                                }
                            }
                        }
                    }
                    out[a][b][c][d] = acc;
                }
            }
        }
    }
    out
}

/// Connection law
///
/// ```text
/// Γ'^γ_αβ = ∂ξ_γ/∂θ_k (B_α^i B_β^j Γ^k_ij + ∂²θ_k/∂ξ_α∂ξ_β)
/// ```
///
/// `second_derivs` is laid out `[k][α][β]`; the result is lowered with
/// `target_metric`.
pub fn transform_connection(
    conn: &ConnAt,
    jac: &Mat2,
    jac_inv: &Mat2,
    second_derivs: &Tensor3,
    target_metric: &MetricAt,
) -> Result<ConnAt> {
    let mut mixed = [[[0.0; 2]; 2]; 2];
    for g in 0..2 {
        for a in 0..2 {
            for b in 0..2 {
                let mut acc = 0.0;
                for k in 0..2 {
                    let mut inner = second_derivs[k][a][b];
                    for i in 0..2 {
                        for j in 0..2 {
                            inner += jac_inv[i][a] * jac_inv[j][b] * conn.mixed[k][i][j];
                        }
                    }
                    acc += jac[g][k] * inner;
                }
                mixed[g][a][b] = acc;
            }
        }
    }
    ConnAt::from_mixed(mixed, target_metric)
}

// ---------------------------------------------------------------------------
// Gaussian conveniences

/// θ metric at `p` (closed form) carried to ξ by [`transform_metric`].
pub fn fisher_metric_xi(p: &ParamPoint) -> Result<MetricAt> {
    let m = GaussianThetaMetric.metric_at(p)?;
    transform_metric(&m, &jacobian(p)?.inverse, chart_forward(p)?)
}
