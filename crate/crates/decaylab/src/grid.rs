//! Radial exterior-domain discretization: uniform grid on [r_inner, r_outer]
//! with Dirichlet ends, trapezoidal quadrature against the volume measure
//! r^{N-1} dr and the damping measure r^{N-1-alpha} dr (both carrying the
//! sphere-area factor omega_{N-1}), and the radial Laplacian in divergence
//! form so the degenerate heat operator r^alpha Lap is exactly symmetric in
//! the discrete L^2_{dmu} inner product.

use crate::error::{Error, Result};
use crate::special::gamma;
use std::f64::consts::PI;

/// Physical configuration: damping a(x) = |x|^{-alpha} on the radial
/// exterior domain r > r_inner in dimension N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub alpha: f64,
    pub dim: u32,
    pub r_inner: f64,
}

impl ModelParams {
    pub fn new(alpha: f64, dim: u32, r_inner: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::DomainError {
                what: "alpha (must be in [0,1))",
                value: alpha,
            });
        }
        if dim < 2 {
            return Err(Error::DomainError {
                what: "dim (must be >= 2)",
                value: dim as f64,
            });
        }
        if !(r_inner > 0.0) {
            return Err(Error::DomainError {
                what: "r_inner (must be > 0)",
                value: r_inner,
            });
        }
        Ok(ModelParams {
            alpha,
            dim,
            r_inner,
        })
    }

    /// Damping coefficient a(r) = r^{-alpha}; bounded since r >= r_inner > 0.
    pub fn damping(&self, r: f64) -> f64 {
        r.powf(-self.alpha)
    }

    /// omega_{N-1} = 2 pi^{N/2} / Gamma(N/2).
    pub fn sphere_area(&self) -> f64 {
        let half = self.dim as f64 / 2.0;
        2.0 * PI.powf(half) / gamma(half).expect("N/2 > 0")
    }

    pub fn cexp(&self) -> f64 {
        (self.dim as f64 - self.alpha) / (2.0 - self.alpha)
    }
}

/// Uniform radial grid. Nodes r[0] = r_inner and r[n+1] = r_outer are the
/// Dirichlet boundary; r[1..=n] are interior.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    pub r_inner: f64,
    pub r_outer: f64,
    /// interior node count
    pub n: usize,
    pub dr: f64,
    /// all n+2 node positions
    pub r: Vec<f64>,
    /// trapezoid weights against omega r^{N-1} dr
    pub w_vol: Vec<f64>,
    /// trapezoid weights against omega r^{N-1-alpha} dr
    pub w_dmu: Vec<f64>,
    /// midpoint powers ((r_i + r_{i+1})/2)^{N-1}, one per cell
    m_half: Vec<f64>,
    /// r_i^{N-1} at every node
    r_pow: Vec<f64>,
}

impl RadialGrid {
    pub fn new(params: &ModelParams, r_outer: f64, n: usize) -> Result<Self> {
        if !(r_outer > params.r_inner) || n == 0 {
            return Err(Error::InvalidConfig(format!(
                "grid needs r_outer > r_inner and n > 0, got r_outer={r_outer}, n={n}"
            )));
        }
        let dr = (r_outer - params.r_inner) / (n + 1) as f64;
        if dr > 0.25 {
            return Err(Error::ResolutionTooCoarse { dr });
        }
        let nm1 = (params.dim - 1) as f64;
        let omega = params.sphere_area();
        let r: Vec<f64> = (0..n + 2).map(|i| params.r_inner + dr * i as f64).collect();
        let r_pow: Vec<f64> = r.iter().map(|&ri| ri.powf(nm1)).collect();
        let mut w_vol = Vec::with_capacity(n + 2);
        let mut w_dmu = Vec::with_capacity(n + 2);
        for i in 0..n + 2 {
            let trap = if i == 0 || i == n + 1 { 0.5 } else { 1.0 };
            w_vol.push(omega * trap * dr * r_pow[i]);
            w_dmu.push(omega * trap * dr * r[i].powf(nm1 - params.alpha));
        }
        let m_half: Vec<f64> = (0..n + 1)
            .map(|i| (0.5 * (r[i] + r[i + 1])).powf(nm1))
            .collect();
        Ok(RadialGrid {
            r_inner: params.r_inner,
            r_outer,
            n,
            dr,
            r,
            w_vol,
            w_dmu,
            m_half,
            r_pow,
        })
    }

    pub fn len(&self) -> usize {
        self.n + 2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Exact annulus volume omega (r_outer^N - r_inner^N)/N.
    pub fn exact_volume(&self, params: &ModelParams) -> f64 {
        let nf = params.dim as f64;
        params.sphere_area() * (self.r_outer.powf(nf) - self.r_inner.powf(nf)) / nf
    }

    /// Quadrature of f against the volume measure.
    pub fn integrate_vol(&self, f: impl Fn(usize, f64) -> f64) -> f64 {
        self.w_vol
            .iter()
            .enumerate()
            .map(|(i, &w)| w * f(i, self.r[i]))
            .sum()
    }

    /// Quadrature of f against dmu = a(x) dx.
    pub fn integrate_dmu(&self, f: impl Fn(usize, f64) -> f64) -> f64 {
        self.w_dmu
            .iter()
            .enumerate()
            .map(|(i, &w)| w * f(i, self.r[i]))
            .sum()
    }

    /// Radial Laplacian u'' + (N-1)/r u' in divergence form,
    ///   (Lap u)_i = [m_{i+1/2}(u_{i+1}-u_i) - m_{i-1/2}(u_i-u_{i-1})] / (r_i^{N-1} dr^2),
    /// on interior nodes; boundary entries are left zero.
    pub fn laplacian(&self, u: &[f64], out: &mut [f64]) {
        debug_assert_eq!(u.len(), self.len());
        debug_assert_eq!(out.len(), self.len());
        let inv_dr2 = 1.0 / (self.dr * self.dr);
        out[0] = 0.0;
        out[self.n + 1] = 0.0;
        for i in 1..=self.n {
            let flux = self.m_half[i] * (u[i + 1] - u[i]) - self.m_half[i - 1] * (u[i] - u[i - 1]);
            out[i] = flux * inv_dr2 / self.r_pow[i];
        }
    }

    /// Tridiagonal coefficients (sub, diag, sup) of the divergence-form
    /// Laplacian restricted to interior nodes (row i of n).
    pub fn laplacian_coeffs(&self, i: usize) -> (f64, f64, f64) {
        debug_assert!((1..=self.n).contains(&i));
        let inv = 1.0 / (self.r_pow[i] * self.dr * self.dr);
        let sub = self.m_half[i - 1] * inv;
        let sup = self.m_half[i] * inv;
        (sub, -(sub + sup), sup)
    }

    /// Centered first derivative (one-sided at the boundary nodes).
    pub fn gradient(&self, u: &[f64], out: &mut [f64]) {
        debug_assert_eq!(u.len(), self.len());
        let inv2 = 1.0 / (2.0 * self.dr);
        let last = self.n + 1;
        out[0] = (u[1] - u[0]) / self.dr;
        out[last] = (u[last] - u[last - 1]) / self.dr;
        for i in 1..=self.n {
            out[i] = (u[i + 1] - u[i - 1]) * inv2;
        }
    }

    /// Energy form sum_cells m_{i+1/2} (u_{i+1}-u_i)(v_{i+1}-v_i)/dr * omega,
    /// the exact negative of <Lap u, v> in the volume inner product for
    /// boundary-clean fields.
    pub fn dirichlet_form(&self, params: &ModelParams, u: &[f64], v: &[f64]) -> f64 {
        let omega = params.sphere_area();
        let mut acc = 0.0;
        for i in 0..=self.n {
            acc += self.m_half[i] * (u[i + 1] - u[i]) * (v[i + 1] - v[i]);
        }
        omega * acc / self.dr
    }
}

/// Scalar field sampled on every node of a RadialGrid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialField {
    pub values: Vec<f64>,
}

impl RadialField {
    pub fn zeros(grid: &RadialGrid) -> Self {
        RadialField {
            values: vec![0.0; grid.len()],
        }
    }

    pub fn from_fn(grid: &RadialGrid, mut f: impl FnMut(f64) -> f64) -> Self {
        RadialField {
            values: grid.r.iter().map(|&r| f(r)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    /// Largest radius of a node where |u| exceeds `threshold`; None for a
    /// field below threshold everywhere.
    pub fn support_radius(&self, grid: &RadialGrid, threshold: f64) -> Option<f64> {
        self.values
            .iter()
            .enumerate()
            .rev()
            .find(|(_, v)| v.abs() > threshold)
            .map(|(i, _)| grid.r[i])
    }

    /// Zero the two boundary nodes.
    pub fn clamp_boundary(&mut self) {
        let last = self.values.len() - 1;
        self.values[0] = 0.0;
        self.values[last] = 0.0;
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Outer radius and node count for a run: the finite propagation property
/// keeps the support inside r_inner + R_supp + t, so taking
/// r_outer = r_inner + R_supp + t_final + 2 dr makes the outer truncation
/// exact for all simulated times.
pub fn build_grid(params: &ModelParams, r_supp: f64, t_final: f64, dr: f64) -> Result<RadialGrid> {
    if !(dr > 0.0) {
        return Err(Error::DomainError {
            what: "dr",
            value: dr,
        });
    }
    if dr > 0.25 {
        return Err(Error::ResolutionTooCoarse { dr });
    }
    if t_final < 0.0 {
        return Err(Error::DomainError {
            what: "t_final",
            value: t_final,
        });
    }
    let r_outer = params.r_inner + r_supp + t_final + 2.0 * dr;
    let n = ((r_outer - params.r_inner) / dr).ceil() as usize;
    let n = n.max(2) - 1;
    RadialGrid::new(params, r_outer, n)
}
