//! Finite-difference reference geometry, written without the library's dual
//! numbers or tensor kernels. Every derivative is a five-point central
//! stencil with steps proportional to a caller-supplied length scale (the
//! distance over which the metric changes appreciably), so the nested
//! differences for curvature stay accurate. Curvature uses the mixed-index
//! convention `R^a_bcd = ∂_c Γ^a_db − ∂_d Γ^a_cb + Γ^a_ce Γ^e_db − Γ^a_de Γ^e_cb`.

#![allow(dead_code)]

pub type M2 = [[f64; 2]; 2];
pub type T3 = [[[f64; 2]; 2]; 2];
pub type T4 = [[[[f64; 2]; 2]; 2]; 2];

pub const H_JACOBIAN: f64 = 1e-3;
pub const H_METRIC: f64 = 3e-3;
pub const H_CONNECTION: f64 = 1e-2;

/// Length scale of the ξ chart at `c`: σ² shrinks by `2|ξ₁| dξ₁`.
pub fn xi_scale(c: [f64; 2]) -> f64 {
    (c[1] - c[0] * c[0]) / (1.0 + 2.0 * c[0].abs())
}

/// `[f(x−2h), f(x−h), f(x+h), f(x+2h)] ↦ f'(x)`
fn stencil(v: [f64; 4], h: f64) -> f64 {
    (v[0] - 8.0 * v[1] + 8.0 * v[2] - v[3]) / (12.0 * h)
}

const OFFSETS: [f64; 4] = [-2.0, -1.0, 1.0, 2.0];

pub fn inv(m: &M2) -> M2 {
    let d = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    [[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]]
}

pub fn det(m: &M2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub fn theta_metric(c: [f64; 2]) -> M2 {
    let s = c[1];
    [[1.0 / (s * s), 0.0], [0.0, 2.0 / (s * s)]]
}

pub fn inverse_chart(c: [f64; 2]) -> [f64; 2] {
    [c[0], (c[1] - c[0] * c[0]).sqrt()]
}

/// `B[i][a] = ∂θ_i/∂ξ_a` by finite differences.
pub fn inverse_chart_jacobian(c: [f64; 2]) -> M2 {
    let mut b = [[0.0; 2]; 2];
    for a in 0..2 {
        let h = H_JACOBIAN * xi_scale(c);
        let t = OFFSETS.map(|o| inverse_chart(shifted(c, a, o * h)));
        for i in 0..2 {
            b[i][a] = stencil(t.map(|v| v[i]), h);
        }
    }
    b
}

/// Fisher metric in ξ as `Bᵀ g(θ) B` with a finite-difference `B`.
pub fn xi_metric(c: [f64; 2]) -> M2 {
    let b = inverse_chart_jacobian(c);
    let g = theta_metric(inverse_chart(c));
    let mut out = [[0.0; 2]; 2];
    for a in 0..2 {
        for d in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    out[a][d] += b[i][a] * b[j][d] * g[i][j];
                }
            }
        }
    }
    out
}

pub fn sphere_metric(c: [f64; 2]) -> M2 {
    let s = c[0].sin();
    [[1.0, 0.0], [0.0, s * s]]
}

fn shifted(c: [f64; 2], axis: usize, by: f64) -> [f64; 2] {
    let mut c = c;
    c[axis] += by;
    c
}

/// `Γ^a_bc` (`[a][b][c]`) from finite differences of `metric`.
pub fn christoffel(metric: &dyn Fn([f64; 2]) -> M2, c: [f64; 2], scale: f64) -> T3 {
    let mut dg = [[[0.0; 2]; 2]; 2];
    for (l, slot) in dg.iter_mut().enumerate() {
        let hl = H_METRIC * scale;
        let g = OFFSETS.map(|o| metric(shifted(c, l, o * hl)));
        for i in 0..2 {
            for j in 0..2 {
                slot[i][j] = stencil(g.map(|m| m[i][j]), hl);
            }
        }
    }
    let gi = inv(&metric(c));
    let mut gam = [[[0.0; 2]; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            for cc in 0..2 {
                let mut acc = 0.0;
                for d in 0..2 {
                    acc += 0.5 * gi[a][d] * (dg[b][d][cc] + dg[cc][d][b] - dg[d][b][cc]);
                }
                gam[a][b][cc] = acc;
            }
        }
    }
    gam
}

/// `R^a_bcd`, `[a][b][c][d]`, with nested finite differences.
pub fn riemann_mixed(metric: &dyn Fn([f64; 2]) -> M2, c: [f64; 2], scale: f64) -> T4 {
    let gam = christoffel(metric, c, scale);
    let mut dgam = [[[[0.0; 2]; 2]; 2]; 2];
    for (l, slot) in dgam.iter_mut().enumerate() {
        let hl = H_CONNECTION * scale;
        let g = OFFSETS.map(|o| christoffel(metric, shifted(c, l, o * hl), scale));
        for a in 0..2 {
            for b in 0..2 {
                for cc in 0..2 {
                    slot[a][b][cc] = stencil(g.map(|t| t[a][b][cc]), hl);
                }
            }
        }
    }
    let mut r = [[[[0.0; 2]; 2]; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            for cc in 0..2 {
                for d in 0..2 {
                    let mut v = dgam[cc][a][d][b] - dgam[d][a][cc][b];
                    for e in 0..2 {
                        v += gam[a][cc][e] * gam[e][d][b] - gam[a][d][e] * gam[e][cc][b];
                    }
                    r[a][b][cc][d] = v;
                }
            }
        }
    }
    r
}

/// Gaussian curvature `g_1a R^a_212 / det g`.
pub fn gaussian_curvature(metric: &dyn Fn([f64; 2]) -> M2, c: [f64; 2], scale: f64) -> f64 {
    let r = riemann_mixed(metric, c, scale);
    let g = metric(c);
    let r1212: f64 = (0..2).map(|a| g[0][a] * r[a][1][0][1]).sum();
    r1212 / det(&g)
}

/// The library's all-lower layout `⟨R(∂_i, ∂_j)∂_k, ∂_m⟩ = g_mn R^n_kij`.
pub fn riemann_library_layout(metric: &dyn Fn([f64; 2]) -> M2, c: [f64; 2], scale: f64) -> T4 {
    let r = riemann_mixed(metric, c, scale);
    let g = metric(c);
    let mut out = [[[[0.0; 2]; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for m in 0..2 {
                    out[i][j][k][m] = (0..2).map(|n| g[m][n] * r[n][k][i][j]).sum();
                }
            }
        }
    }
    out
}
