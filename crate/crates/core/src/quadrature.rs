//! Gauss–Hermite nodes and weights for `∫ e^{-t²} f(t) dt`.

use std::f64::consts::PI;

use crate::error::{GeoError, Result};

const NEWTON_TOL: f64 = 1e-15;
const MAX_NEWTON: usize = 100;

/// An `n`-point Gauss–Hermite rule (physicists' weight `e^{-t²}`).
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    /// Nodes by Newton iteration on the orthonormal Hermite recurrence,
    /// started from the usual asymptotic guesses for the largest roots.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(GeoError::Engine(
                "Gauss-Hermite rule needs at least one node".into(),
            ));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        let pim4 = PI.powf(-0.25);
        let mut z = 0.0;
        for i in 0..n.div_ceil(2) {
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * nodes[0],
                3 => 1.91 * z - 0.91 * nodes[1],
                _ => 2.0 * z - nodes[i - 2],
            };
            let mut derivative = 0.0;
            let mut converged = false;
            for _ in 0..MAX_NEWTON {
                let (p_n, p_prev) = orthonormal_hermite(n, z, pim4);
                derivative = (2.0 * nf).sqrt() * p_prev;
                let step = p_n / derivative;
                z -= step;
                if step.abs() <= NEWTON_TOL * z.abs().max(1.0) {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(GeoError::Engine(format!(
                    "Gauss-Hermite root {i} of {n} did not converge"
                )));
            }
            // refresh the derivative at the converged root
            let (_, p_prev) = orthonormal_hermite(n, z, pim4);
            if p_prev != 0.0 {
                derivative = (2.0 * nf).sqrt() * p_prev;
            }
            nodes[i] = z;
            nodes[n - 1 - i] = -z;
            let w = 2.0 / (derivative * derivative);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `∫ e^{-t²} f(t) dt`
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.iter().map(|(t, w)| w * f(t)).sum()
    }
}

// (p_n(z), p_{n-1}(z)) of the orthonormal Hermite family
fn orthonormal_hermite(n: usize, z: f64, pim4: f64) -> (f64, f64) {
    let mut p1 = pim4;
    let mut p2 = 0.0;
    for j in 1..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, p2)
}
