//! Published closed forms for the Gaussian family in the ξ chart, transcribed
//! term by term and evaluated as plain rational functions of (μ, σ).
//!
//! Nothing here is corrected. Entries that were never printed are filled
//! with zero and carry a note; see [`PublishedEntry::note`].

use crate::error::Result;
use crate::geometry::{contract_scalar, Mat2, Tensor3, Tensor4};
use crate::models::ParamPoint;

/// Published `G_d`, `det G_d` and `G_d⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedMetric {
    pub g: Mat2,
    pub det: f64,
    pub g_inv: Mat2,
}

pub fn published_metric_xi(p: &ParamPoint) -> Result<PublishedMetric> {
    let (mu, s) = p.mu_sigma()?;
    let s2 = s * s;
    let s4 = s2 * s2;
    let g = [[(s2 + 2.0 * mu * mu) / s4, -mu / s4], [-mu / s4, 0.5 / s4]];
    let det = 1.0 / (2.0 * s2);
    let off = 2.0 * mu * s2;
    let g_inv = [[s2, off], [off, 2.0 * s4 + 4.0 * mu * mu * s2]];
    Ok(PublishedMetric { g, det, g_inv })
}

/// Published all-lower coefficients `Γ_ijk(ξ)`, stored `[i][j][k]`.
pub fn published_lower_gamma_xi(p: &ParamPoint) -> Result<Tensor3> {
    let (mu, s) = p.mu_sigma()?;
    let s4 = s.powi(4);
    let s6 = s.powi(6);
    let mut t = [[[0.0; 2]; 2]; 2];
    t[0][0][0] = (4.0 * mu * s * s + 6.0 * mu.powi(3)) / s6;
    t[0][0][1] = -3.0 * mu * mu / s6;
    let mixed_pair = 3.0 * mu / (2.0 * s6);
    t[1][1][0] = mixed_pair;
    t[1][0][1] = mixed_pair;
    t[0][1][1] = mixed_pair;
    let cross = -1.0 / s4 - 3.0 * mu * mu / s6;
    t[0][1][0] = cross;
    t[1][0][0] = cross;
    t[1][1][1] = -3.0 / (4.0 * s6);
    Ok(t)
}

/// Published Levi-Civita coefficients `Γ^k_ij(ξ)`, stored `[k][i][j]`.
pub fn published_mixed_gamma_xi(p: &ParamPoint) -> Result<Tensor3> {
    let (mu, s) = p.mu_sigma()?;
    let s2 = s * s;
    let s4 = s2 * s2;
    let s6 = s4 * s2;
    let s8 = s4 * s4;
    let mut t = [[[0.0; 2]; 2]; 2];
    t[0][0][0] = mu / s2;
    t[1][1][1] = 0.0;
    t[1][0][1] = -mu / s2;
    t[1][1][0] = mu / s2;
    t[1][0][0] = (-2.0 * mu * mu + mu - 3.0 * s8 - 6.0 * mu * mu * s6) / s8;
    t[0][1][0] = 1.0 / (2.0 * s2);
    t[0][1][1] = 0.0;
    t[0][0][1] = 8.0 * mu * mu * s4 + (4.0 * mu + 1.0) / (2.0 * s2);
    Ok(t)
}

/// Published `R_ijkm(ξ)`, stored `[i][j][k][m]`. `R_1222` was never printed
/// and is stored as zero.
pub fn published_riemann_xi(p: &ParamPoint) -> Result<Tensor4> {
    let (mu, s) = p.mu_sigma()?;
    let s2 = s * s;
    let s6 = s.powi(6);
    let s8 = s.powi(8);
    let s10 = s.powi(10);
    let s14 = s.powi(14);
    let (mu2, mu3, mu4) = (mu * mu, mu.powi(3), mu.powi(4));
    let mut r = [[[[0.0; 2]; 2]; 2]; 2];
    r[0][1][1][0] = mu / s6;
    r[1][0][0][1] = (6.0 * s8 + 3.0 * mu * s6 + 6.0 * mu2 * s6 + 6.0 * mu2) / (4.0 * s14);
    r[0][1][0][1] = 1.0 / (2.0 * s6);
    r[1][0][0][0] =
        (-2.0 * s8 + 2.0 * mu2 * s6 + 46.0 * mu2 * s8 + 24.0 * mu4 * s6 + 12.0 * mu2 * s2
            - 4.0 * mu * s2
            + 6.0 * s10
            + 12.0 * mu4
            - 3.0 * mu2
            + 9.0 * mu * s8
            + 18.0 * mu3 * s6)
            / (2.0 * s14);
    Ok(r)
}

/// Published scalar curvature `𝒦`.
pub fn published_scalar_xi(p: &ParamPoint) -> Result<f64> {
    let (mu, s) = p.mu_sigma()?;
    let s2 = s * s;
    let s6 = s.powi(6);
    let s8 = s.powi(8);
    let s10 = s.powi(10);
    let (mu2, mu3, mu4, mu5) = (mu * mu, mu.powi(3), mu.powi(4), mu.powi(5));
    let first = 16.0 * mu2 * s8 + 12.0 * mu4 + 6.0 * s10 - mu * s8 - 2.0 * mu2 * s2
        + 10.0 * mu3 * s6
        + 92.0 * mu3 * s8
        + 48.0 * mu5 * s6;
    let second = 12.0 * mu * s10 + 24.0 * mu5 - 6.0 * mu3;
    Ok(first / (4.0 * s10) + second / (4.0 * s10))
}

/// `½ R_ijkm g^im g^jk` over the published `R` and `G_d⁻¹`.
pub fn published_contracted_scalar(p: &ParamPoint) -> Result<f64> {
    let r = published_riemann_xi(p)?;
    let m = published_metric_xi(p)?;
    Ok(contract_scalar(&r, &m.g_inv))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PublishedEntry {
    pub id: String,
    pub value: f64,
    /// Set when the value is not a printed formula.
    pub note: Option<&'static str>,
}

/// Every published quantity at one θ point, in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct PublishedTable {
    pub point: ParamPoint,
    pub entries: Vec<PublishedEntry>,
}

pub const UNPRINTED_R_1222: &str = "R_1222 is not printed; stored as 0";

impl PublishedTable {
    pub fn at(p: &ParamPoint) -> Result<Self> {
        let metric = published_metric_xi(p)?;
        let lower = published_lower_gamma_xi(p)?;
        let mixed = published_mixed_gamma_xi(p)?;
        let r = published_riemann_xi(p)?;
        let k = published_scalar_xi(p)?;

        let mut entries = Vec::with_capacity(42);
        let mut push = |id: String, value: f64, note: Option<&'static str>| {
            entries.push(PublishedEntry { id, value, note })
        };
        for (i, j) in pairs() {
            push(format!("G_d.{}{}", i + 1, j + 1), metric.g[i][j], None);
        }
        push("det_G_d".into(), metric.det, None);
        for (i, j) in pairs() {
            push(
                format!("G_d_inv.{}{}", i + 1, j + 1),
                metric.g_inv[i][j],
                None,
            );
        }
        for (i, j, k) in triples() {
            push(
                format!("Gamma_xi.{}{}{}", i + 1, j + 1, k + 1),
                lower[i][j][k],
                None,
            );
        }
        for (k, i, j) in triples() {
            push(
                format!("Gamma_up_xi.{}{}{}", k + 1, i + 1, j + 1),
                mixed[k][i][j],
                None,
            );
        }
        for (i, j, k, m) in quads() {
            let note = ((i, j, k, m) == (0, 1, 1, 1)).then_some(UNPRINTED_R_1222);
            push(
                format!("R_xi.{}{}{}{}", i + 1, j + 1, k + 1, m + 1),
                r[i][j][k][m],
                note,
            );
        }
        push("K".into(), k, None);
        Ok(Self { point: *p, entries })
    }

    pub fn get(&self, id: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.id == id).map(|e| e.value)
    }
}

pub(crate) fn pairs() -> impl Iterator<Item = (usize, usize)> {
    (0..2).flat_map(|i| (0..2).map(move |j| (i, j)))
}

pub(crate) fn triples() -> impl Iterator<Item = (usize, usize, usize)> {
    pairs().flat_map(|(i, j)| (0..2).map(move |k| (i, j, k)))
}

pub(crate) fn quads() -> impl Iterator<Item = (usize, usize, usize, usize)> {
    triples().flat_map(|(i, j, k)| (0..2).map(move |m| (i, j, k, m)))
}
