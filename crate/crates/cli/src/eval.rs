//! One list of records per evaluation point.

use std::f64::consts::PI;

use igeo_core::audit::{audit, AuditRecord};
use igeo_core::geometry::{
    levi_civita, riemann, scalar_curvature, sectional_curvature, torsion, torsion_lower,
    transform_metric, ConnAt, ExpectationConnection, GaussianThetaMetric, GaussianXiMetric,
    LeviCivita, Mat2, MetricAt, MetricField, PushedConnection, RiemannAt, SphereMetric, Tensor3,
};
use igeo_core::models::{
    chart_backward, chart_forward, conn_expectation_theta, conn_expectation_xi,
    fisher_metric_theta, fisher_metric_xi_expectation, jacobian, GaussianModel,
};
use igeo_core::published::{
    published_lower_gamma_xi, published_metric_xi, published_mixed_gamma_xi, published_riemann_xi,
    published_scalar_xi,
};
use igeo_core::{Chart, ExpectationEngine, ParamPoint, Result};

use crate::config::{Command, ConnectionArg, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Paper,
    Oracle,
    Audit,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Paper => "paper",
            Provenance::Oracle => "oracle",
            Provenance::Audit => "audit",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub expected: f64,
    pub actual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number(f64),
    Pair([f64; 2]),
    Matrix(Mat2),
    Audit(AuditRecord),
    Check(Check),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub point: [f64; 2],
    pub quantity: String,
    pub value: Value,
    pub provenance: Provenance,
}

struct Sink {
    point: [f64; 2],
    provenance: Provenance,
    records: Vec<Record>,
}

impl Sink {
    fn new(p: &ParamPoint, provenance: Provenance) -> Self {
        Self {
            point: p.coords(),
            provenance,
            records: Vec::new(),
        }
    }

    fn push(&mut self, quantity: impl Into<String>, value: Value) {
        self.records.push(Record {
            point: self.point,
            quantity: quantity.into(),
            value,
            provenance: self.provenance,
        });
    }

    fn metric(&mut self, m: &MetricAt) {
        self.push("g", Value::Matrix(m.g));
        self.push("g_inv", Value::Matrix(m.g_inv));
        self.push("det_g", Value::Number(m.det()));
    }

    fn tensor3(&mut self, prefix: &str, t: &Tensor3) {
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    self.push(
                        format!("{prefix}.{}{}{}", i + 1, j + 1, k + 1),
                        Value::Number(t[i][j][k]),
                    );
                }
            }
        }
    }
}

fn suffix(chart: Chart) -> &'static str {
    chart.name()
}

pub fn evaluate(cfg: &RunConfig, p: &ParamPoint) -> Result<Vec<Record>> {
    if cfg.published {
        return evaluate_published(cfg.command, p);
    }
    let mut out = Sink::new(p, Provenance::Oracle);
    let chart = suffix(p.chart());
    match cfg.command {
        Command::Metric => out.metric(&metric(p, &cfg.engine)?),
        Command::Christoffel => {
            let c = connection(cfg, p)?;
            out.tensor3(&format!("Gamma_{chart}"), &c.lower);
            out.tensor3(&format!("Gamma_up_{chart}"), &c.mixed);
        }
        Command::Torsion => {
            let t = torsion(&connection(cfg, p)?);
            out.tensor3(&format!("T_{chart}"), &t.t);
        }
        Command::Curvature => {
            let r = curvature(cfg, p)?;
            for (i, j, k, m) in quads() {
                out.push(
                    format!("R_{chart}.{}{}{}{}", i + 1, j + 1, k + 1, m + 1),
                    Value::Number(r.r[i][j][k][m]),
                );
            }
        }
        Command::Scalar => {
            let r = curvature(cfg, p)?;
            let m = closed_metric(p)?;
            out.push("K", Value::Number(scalar_curvature(&r.r, &m)));
            out.push("sectional", Value::Number(sectional_curvature(&r.r, &m)));
        }
        Command::Transform => transform(&mut out, p)?,
        Command::Audit => {
            let mut sink = Sink::new(p, Provenance::Audit);
            for rec in audit(p, &cfg.tolerances)?.records {
                sink.push(rec.quantity.clone(), Value::Audit(rec));
            }
            return Ok(sink.records);
        }
        Command::Selftest => unreachable!("selftest has no evaluation point"),
    }
    Ok(out.records)
}

fn evaluate_published(command: Command, q: &ParamPoint) -> Result<Vec<Record>> {
    q.chart().expect(Chart::Xi)?;
    let p = chart_backward(q)?;
    let mut out = Sink::new(q, Provenance::Paper);
    match command {
        Command::Metric => {
            let m = published_metric_xi(&p)?;
            out.push("G_d", Value::Matrix(m.g));
            out.push("G_d_inv", Value::Matrix(m.g_inv));
            out.push("det_G_d", Value::Number(m.det));
        }
        Command::Christoffel => {
            out.tensor3("Gamma_xi", &published_lower_gamma_xi(&p)?);
            out.tensor3("Gamma_up_xi", &published_mixed_gamma_xi(&p)?);
        }
        Command::Torsion => out.tensor3("T_xi", &torsion_lower(&published_lower_gamma_xi(&p)?)),
        Command::Curvature => {
            let r = published_riemann_xi(&p)?;
            for (i, j, k, m) in quads() {
                out.push(
                    format!("R_xi.{}{}{}{}", i + 1, j + 1, k + 1, m + 1),
                    Value::Number(r[i][j][k][m]),
                );
            }
        }
        Command::Scalar => out.push("K", Value::Number(published_scalar_xi(&p)?)),
        Command::Transform | Command::Audit | Command::Selftest => {
            unreachable!("rejected while building the run configuration")
        }
    }
    Ok(out.records)
}

/// Fisher metric in the point's own chart.
fn metric(p: &ParamPoint, engine: &ExpectationEngine) -> Result<MetricAt> {
    match (p.chart(), engine) {
        (Chart::Xi, ExpectationEngine::ClosedForm) => GaussianXiMetric.metric_at(p),
        (Chart::Xi, _) => fisher_metric_xi_expectation(&chart_backward(p)?, engine),
        _ => fisher_metric_theta(p, engine),
    }
}

fn closed_metric(p: &ParamPoint) -> Result<MetricAt> {
    match p.chart() {
        Chart::Xi => GaussianXiMetric.metric_at(p),
        _ => GaussianThetaMetric.metric_at(p),
    }
}

fn connection(cfg: &RunConfig, p: &ParamPoint) -> Result<ConnAt> {
    let engine = cfg.engine;
    match (cfg.connection, p.chart()) {
        (ConnectionArg::LeviCivita, Chart::Xi) => levi_civita(&GaussianXiMetric, p),
        (ConnectionArg::LeviCivita, _) => levi_civita(&GaussianThetaMetric, p),
        (ConnectionArg::Expectation, Chart::Xi) => match engine {
            ExpectationEngine::ClosedForm => {
                use igeo_core::geometry::ConnectionField;
                pushed_expectation(engine).connection(p)
            }
            _ => conn_expectation_xi(&chart_backward(p)?, &engine),
        },
        (ConnectionArg::Expectation, _) => conn_expectation_theta(p, &engine),
    }
}

fn pushed_expectation(
    engine: ExpectationEngine,
) -> PushedConnection<ExpectationConnection, GaussianThetaMetric> {
    PushedConnection {
        connection: ExpectationConnection { engine },
        metric: GaussianThetaMetric,
    }
}

fn curvature(cfg: &RunConfig, p: &ParamPoint) -> Result<RiemannAt> {
    let engine = cfg.engine;
    match (cfg.connection, p.chart()) {
        (ConnectionArg::LeviCivita, Chart::Xi) => {
            riemann(&LeviCivita(GaussianXiMetric), &GaussianXiMetric, p)
        }
        (ConnectionArg::LeviCivita, _) => {
            riemann(&LeviCivita(GaussianThetaMetric), &GaussianThetaMetric, p)
        }
        (ConnectionArg::Expectation, Chart::Xi) => {
            riemann(&pushed_expectation(engine), &GaussianXiMetric, p)
        }
        (ConnectionArg::Expectation, _) => {
            riemann(&ExpectationConnection { engine }, &GaussianThetaMetric, p)
        }
    }
}

/// The image of the point in the other chart, the Jacobians at the
/// underlying θ point, and the Fisher metric there.
fn transform(out: &mut Sink, p: &ParamPoint) -> Result<()> {
    match p.chart() {
        Chart::Xi => {
            let theta = chart_backward(p)?;
            let jac = jacobian(&theta)?;
            out.push("theta", Value::Pair(theta.coords()));
            out.push("J", Value::Matrix(jac.forward));
            out.push("J_inv", Value::Matrix(jac.inverse));
            out.push(
                "g_theta",
                Value::Matrix(GaussianThetaMetric.metric_at(&theta)?.g),
            );
        }
        _ => {
            let xi = chart_forward(p)?;
            let jac = jacobian(p)?;
            let g = transform_metric(&GaussianThetaMetric.metric_at(p)?, &jac.inverse, xi)?;
            out.push("xi", Value::Pair(xi.coords()));
            out.push("J", Value::Matrix(jac.forward));
            out.push("J_inv", Value::Matrix(jac.inverse));
            out.push("g_xi", Value::Matrix(g.g));
        }
    }
    Ok(())
}

fn quads() -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..16).map(|n| (n >> 3 & 1, n >> 2 & 1, n >> 1 & 1, n & 1))
}

/// Fixed spot checks against values known in closed form.
pub fn selftest(cfg: &RunConfig) -> Result<Vec<Record>> {
    let closed = cfg.tolerances.closed_form;
    let diff = cfg.tolerances.differentiated;
    let theta = |mu, s| ParamPoint::theta(mu, s);
    let gh = ExpectationEngine::gauss_hermite();
    let mut records = Vec::new();
    let mut check = |p: &ParamPoint, name: &str, expected: f64, actual: f64, tol: f64| {
        let passed = (expected - actual).abs() <= tol && actual.is_finite();
        records.push(Record {
            point: p.coords(),
            quantity: format!("selftest.{name}"),
            value: Value::Check(Check {
                expected,
                actual,
                tolerance: tol,
                passed,
            }),
            provenance: Provenance::Oracle,
        });
    };

    let p = theta(0.0, 1.0)?;
    let g = fisher_metric_theta(&p, &ExpectationEngine::ClosedForm)?;
    check(&p, "metric_theta.22", 2.0, g.g[1][1], closed.abs);
    let p = theta(3.0, 2.0)?;
    check(
        &p,
        "metric_theta.22",
        0.5,
        fisher_metric_theta(&p, &ExpectationEngine::ClosedForm)?.g[1][1],
        closed.abs,
    );
    let p = theta(1.0, 1.5)?;
    let a = fisher_metric_theta(&p, &gh)?.g[1][1];
    check(&p, "metric_theta_quadrature.22", 2.0 / 2.25, a, closed.abs);
    let p = theta(0.3, 1.7)?;
    let model = GaussianModel;
    let s = gh.expect(&p, |x| model.score_theta(x, &p).expect("valid θ point"))?;
    check(
        &p,
        "score_identity_theta",
        0.0,
        s[0].abs().max(s[1].abs()),
        1e-9,
    );
    let s = gh.expect(&p, |x| model.score_xi(x, &p).expect("valid θ point"))?;
    check(
        &p,
        "score_identity_xi",
        0.0,
        s[0].abs().max(s[1].abs()),
        1e-9,
    );
    let p = theta(0.0, 1.0)?;
    let e = conn_expectation_theta(&p, &ExpectationEngine::ClosedForm)?;
    check(
        &p,
        "expectation_connection.222",
        -6.0,
        e.lower[1][1][1],
        closed.abs,
    );
    let p = theta(1.0, 2.0)?;
    let j = jacobian(&p)?;
    check(&p, "jacobian_det", 4.0, j.det, closed.abs);
    let p = theta(1.0, 1.0)?;
    let gx = transform_metric(
        &GaussianThetaMetric.metric_at(&p)?,
        &jacobian(&p)?.inverse,
        chart_forward(&p)?,
    )?;
    check(&p, "metric_xi.11", 3.0, gx.g[0][0], closed.abs);
    check(&p, "metric_xi.12", -1.0, gx.g[0][1], closed.abs);
    let p = theta(0.0, 1.0)?;
    check(
        &p,
        "levi_civita_theta.112",
        -1.0,
        levi_civita(&GaussianThetaMetric, &p)?.mixed[0][0][1],
        diff.abs,
    );
    let r = riemann(&LeviCivita(GaussianThetaMetric), &GaussianThetaMetric, &p)?;
    check(&p, "scalar_theta", -0.5, r.scalar, diff.abs);
    let q = ParamPoint::xi(1.0, 2.0)?;
    let r = riemann(&LeviCivita(GaussianXiMetric), &GaussianXiMetric, &q)?;
    check(&q, "scalar_xi", -0.5, r.scalar, diff.abs);
    let s = ParamPoint::plain(PI / 3.0, 0.0)?;
    let r = riemann(
        &LeviCivita(SphereMetric::default()),
        &SphereMetric::default(),
        &s,
    )?;
    check(&s, "scalar_sphere", 1.0, r.scalar, diff.abs);
    let p = theta(0.0, 1.0)?;
    check(&p, "published_K", 1.5, published_scalar_xi(&p)?, closed.abs);
    Ok(records)
}

pub fn selftest_passed(records: &[Record]) -> bool {
    records
        .iter()
        .all(|r| matches!(&r.value, Value::Check(c) if c.passed))
}
