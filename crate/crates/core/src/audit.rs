//! Row-by-row comparison of the published table against oracle values.
//!
//! Each record names the route that produced its oracle value:
//!
//! * `tensor_law`: the θ quantity carried to ξ by the tensor transformation
//!   law (metric, all-lower connection coefficients).
//! * `connection_law`: the θ expectation connection carried to ξ by the full
//!   connection law (with the second-derivative term), lowered with g(ξ).
//! * `levi_civita`: computed natively in ξ from the pulled-back metric field.
//! * `published_contraction`: `½ R_ijkm g^im g^jk` over the published `R`
//!   and `G_d⁻¹`.
//! * `published_coefficients`: torsion of the published lower coefficients
//!   compared against the torsion of the tensor-law oracle.

use crate::error::Result;
use crate::geometry::{
    levi_civita, riemann, torsion_lower, transform_connection, transform_lower_tensor3,
    transform_metric, GaussianThetaMetric, GaussianXiMetric, LeviCivita, MetricField,
};
use crate::models::{
    chart_forward, conn_expectation_theta, inverse_chart_hessian, jacobian, ExpectationEngine,
    ParamPoint,
};
use crate::published::{
    pairs, published_contracted_scalar, quads, triples, PublishedTable, UNPRINTED_R_1222,
};
use crate::tolerances::{Tol, Tolerances, Verdict};

pub const NOTE_DET: &str = "oracle is det g(θ) / (det J)^2 of the transformed metric";
pub const NOTE_TORSION: &str =
    "documented discrepancy: the published statement says the torsion is not free, \
     but the published coefficients give zero torsion";

#[derive(Debug, Clone, PartialEq)]
pub struct AuditRecord {
    pub quantity: String,
    pub route: &'static str,
    pub published: f64,
    pub oracle: f64,
    pub abs_gap: f64,
    pub rel_gap: f64,
    pub verdict: Verdict,
    pub note: Option<&'static str>,
}

impl AuditRecord {
    fn new(
        quantity: impl Into<String>,
        route: &'static str,
        published: f64,
        oracle: f64,
        tol: &Tol,
        note: Option<&'static str>,
    ) -> Self {
        let abs_gap = (published - oracle).abs();
        let scale = published.abs().max(oracle.abs());
        let rel_gap = if scale == 0.0 { 0.0 } else { abs_gap / scale };
        Self {
            quantity: quantity.into(),
            route,
            published,
            oracle,
            abs_gap,
            rel_gap,
            verdict: Verdict::from_gap(tol, published, oracle),
            note,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    /// θ point the report was computed at.
    pub point: ParamPoint,
    pub tolerances: Tolerances,
    pub records: Vec<AuditRecord>,
}

impl AuditReport {
    pub fn find(&self, quantity: &str, route: &str) -> Option<&AuditRecord> {
        self.records
            .iter()
            .find(|r| r.quantity == quantity && r.route == route)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &AuditRecord> {
        self.records
            .iter()
            .filter(|r| r.verdict == Verdict::Mismatch)
    }

    pub fn has_mismatch(&self) -> bool {
        self.mismatches().next().is_some()
    }
}

/// Compare every published entry at θ point `p` against its oracles.
pub fn audit(p: &ParamPoint, tolerances: &Tolerances) -> Result<AuditReport> {
    let closed = &tolerances.closed_form;
    let diff = &tolerances.differentiated;
    let table = PublishedTable::at(p)?;
    let published = |id: &str| table.get(id).expect("canonical id");

    let q = chart_forward(p)?;
    let jac = jacobian(p)?;
    let g_theta = GaussianThetaMetric.metric_at(p)?;
    let g_xi = transform_metric(&g_theta, &jac.inverse, q)?;
    let e_theta = conn_expectation_theta(p, &ExpectationEngine::ClosedForm)?;
    let tensor_law = transform_lower_tensor3(&e_theta.lower, &jac.inverse);
    let connection_law = transform_connection(
        &e_theta,
        &jac.forward,
        &jac.inverse,
        &inverse_chart_hessian(p)?,
        &g_xi,
    )?;
    let lc_xi = levi_civita(&GaussianXiMetric, &q)?;
    let r_xi = riemann(&LeviCivita(GaussianXiMetric), &GaussianXiMetric, &q)?;

    let mut records = Vec::new();
    for (i, j) in pairs() {
        let id = format!("G_d.{}{}", i + 1, j + 1);
        records.push(AuditRecord::new(
            &id,
            "tensor_law",
            published(&id),
            g_xi.g[i][j],
            closed,
            None,
        ));
    }
    records.push(AuditRecord::new(
        "det_G_d",
        "tensor_law",
        published("det_G_d"),
        g_xi.det(),
        closed,
        Some(NOTE_DET),
    ));
    for (i, j) in pairs() {
        let id = format!("G_d_inv.{}{}", i + 1, j + 1);
        records.push(AuditRecord::new(
            &id,
            "tensor_law",
            published(&id),
            g_xi.g_inv[i][j],
            closed,
            None,
        ));
    }
    for (i, j, k) in triples() {
        let id = format!("Gamma_xi.{}{}{}", i + 1, j + 1, k + 1);
        let v = published(&id);
        records.push(AuditRecord::new(
            &id,
            "tensor_law",
            v,
            tensor_law[i][j][k],
            closed,
            None,
        ));
        records.push(AuditRecord::new(
            &id,
            "connection_law",
            v,
            connection_law.lower[i][j][k],
            closed,
            None,
        ));
    }
    for (k, i, j) in triples() {
        let id = format!("Gamma_up_xi.{}{}{}", k + 1, i + 1, j + 1);
        records.push(AuditRecord::new(
            &id,
            "levi_civita",
            published(&id),
            lc_xi.mixed[k][i][j],
            diff,
            None,
        ));
    }
    for (i, j, k, m) in quads() {
        let id = format!("R_xi.{}{}{}{}", i + 1, j + 1, k + 1, m + 1);
        let note = ((i, j, k, m) == (0, 1, 1, 1)).then_some(UNPRINTED_R_1222);
        records.push(AuditRecord::new(
            &id,
            "levi_civita",
            published(&id),
            r_xi.r[i][j][k][m],
            diff,
            note,
        ));
    }
    let k = published("K");
    records.push(AuditRecord::new(
        "K",
        "levi_civita",
        k,
        r_xi.scalar,
        diff,
        None,
    ));
    records.push(AuditRecord::new(
        "K",
        "published_contraction",
        k,
        published_contracted_scalar(p)?,
        closed,
        None,
    ));

    let lower = crate::published::published_lower_gamma_xi(p)?;
    let t_published = torsion_lower(&lower);
    let t_oracle = torsion_lower(&tensor_law);
    for (i, j, k) in [(0, 1, 0), (0, 1, 1)] {
        records.push(AuditRecord::new(
            format!("T_xi.{}{}{}", i + 1, j + 1, k + 1),
            "published_coefficients",
            t_published[i][j][k],
            t_oracle[i][j][k],
            closed,
            Some(NOTE_TORSION),
        ));
    }

    Ok(AuditReport {
        point: *p,
        tolerances: *tolerances,
        records,
    })
}
