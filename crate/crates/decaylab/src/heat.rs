//! Crank-Nicolson solver for the degenerate heat flow
//!   v_t = r^alpha Lap v
//! with Dirichlet ends, realizing the semigroup orbit e^{tL*}f discretely.
//! The generator B = r^alpha Lap (divergence-form Laplacian) is exactly
//! symmetric and nonpositive in the discrete L^2_{dmu} inner product, which
//! makes the contraction property and the monotone weighted functional
//! testable to rounding. Each step is a tridiagonal (Thomas) solve; the
//! scheme is unconditionally stable and second order in dt.

use crate::error::{Error, Result};
use crate::grid::{ModelParams, RadialField, RadialGrid};
use crate::initial_data::InitialData;

/// Scalar heat state at a time t.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatState {
    pub v: RadialField,
    pub t: f64,
}

/// ||f||_{L^2_dmu} = (int |f|^2 a(x) dx)^{1/2} by the grid's dmu quadrature.
pub fn l2_dmu_norm(f: &RadialField, grid: &RadialGrid) -> f64 {
    grid.integrate_dmu(|i, _| f.values[i] * f.values[i]).sqrt()
}

/// Pointwise diffusion-limit profile u0 + r^alpha u1 (the datum whose heat
/// orbit the damped wave approaches).
pub fn asymptotic_profile(
    data: &InitialData,
    params: &ModelParams,
    grid: &RadialGrid,
) -> RadialField {
    let values = (0..grid.len())
        .map(|i| data.u0.values[i] + grid.r[i].powf(params.alpha) * data.u1.values[i])
        .collect();
    RadialField { values }
}

/// Apply the generator B = r^alpha Lap (zero on the boundary rows).
pub fn apply_generator(f: &RadialField, grid: &RadialGrid, params: &ModelParams) -> RadialField {
    let mut lap = vec![0.0; grid.len()];
    grid.laplacian(&f.values, &mut lap);
    for (i, l) in lap.iter_mut().enumerate() {
        *l *= grid.r[i].powf(params.alpha);
    }
    RadialField { values: lap }
}

/// Crank-Nicolson stepper with the tridiagonal factorization cached for a
/// fixed dt.
#[derive(Debug)]
pub struct HeatStepper<'a> {
    grid: &'a RadialGrid,
    dt: f64,
    /// interior rows of (dt/2) B
    half_sub: Vec<f64>,
    half_diag: Vec<f64>,
    half_sup: Vec<f64>,
    v: Vec<f64>,
    step_count: u64,
    scratch: Vec<f64>,
}

impl<'a> HeatStepper<'a> {
    pub fn new(
        grid: &'a RadialGrid,
        params: &ModelParams,
        v0: &RadialField,
        dt: f64,
    ) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::DomainError {
                what: "dt",
                value: dt,
            });
        }
        if v0.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        let n = grid.n;
        let mut half_sub = Vec::with_capacity(n);
        let mut half_diag = Vec::with_capacity(n);
        let mut half_sup = Vec::with_capacity(n);
        for i in 1..=n {
            let coeff = grid.r[i].powf(params.alpha) * 0.5 * dt;
            let (sub, diag, sup) = grid.laplacian_coeffs(i);
            half_sub.push(coeff * sub);
            half_diag.push(coeff * diag);
            half_sup.push(coeff * sup);
        }
        Ok(HeatStepper {
            grid,
            dt,
            half_sub,
            half_diag,
            half_sup,
            v: v0.values.clone(),
            step_count: 0,
            scratch: vec![0.0; n],
        })
    }

    pub fn time(&self) -> f64 {
        self.step_count as f64 * self.dt
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn state(&self) -> HeatState {
        HeatState {
            v: RadialField {
                values: self.v.clone(),
            },
            t: self.time(),
        }
    }

    /// One Crank-Nicolson step: (I - dt/2 B) v+ = (I + dt/2 B) v.
    pub fn step(&mut self) -> Result<()> {
        let n = self.grid.n;
        let v = &self.v;
        // rhs on interior nodes
        let mut rhs = std::mem::take(&mut self.scratch);
        for i in 1..=n {
            let k = i - 1;
            let mut acc = (1.0 + self.half_diag[k]) * v[i];
            acc += self.half_sub[k] * v[i - 1];
            acc += self.half_sup[k] * v[i + 1];
            rhs[k] = acc;
        }
        // Thomas sweep on (I - dt/2 B); the matrix is strictly diagonally
        // dominant (diag >= 1 + |sub| + |sup|), so no pivoting is needed
        let mut cp = vec![0.0; n];
        let mut denom = 1.0 - self.half_diag[0];
        assert!(denom != 0.0, "singular tridiagonal system");
        cp[0] = -self.half_sup[0] / denom;
        rhs[0] /= denom;
        for k in 1..n {
            let sub = -self.half_sub[k];
            denom = (1.0 - self.half_diag[k]) - sub * cp[k - 1];
            assert!(denom != 0.0, "singular tridiagonal system");
            if k < n - 1 {
                cp[k] = -self.half_sup[k] / denom;
            }
            rhs[k] = (rhs[k] - sub * rhs[k - 1]) / denom;
        }
        for k in (0..n - 1).rev() {
            let x = rhs[k] - cp[k] * rhs[k + 1];
            rhs[k] = x;
        }
        for i in 1..=n {
            self.v[i] = rhs[i - 1];
        }
        rhs.iter().for_each(|x| debug_assert!(x.is_finite()));
        self.scratch = rhs;
        self.step_count += 1;
        Ok(())
    }
}

/// One Crank-Nicolson step of a free-standing state.
pub fn step_heat(
    state: &HeatState,
    grid: &RadialGrid,
    params: &ModelParams,
    dt: f64,
) -> Result<HeatState> {
    let mut stepper = HeatStepper::new(grid, params, &state.v, dt)?;
    stepper.step()?;
    Ok(HeatState {
        v: RadialField {
            values: stepper.v.clone(),
        },
        t: state.t + dt,
    })
}

/// Deterministic heat trajectory sampled at the steps nearest the requested
/// times. dt is an accuracy choice only (unconditional stability).
pub fn run_heat(
    f: &RadialField,
    grid: &RadialGrid,
    params: &ModelParams,
    t_final: f64,
    dt: f64,
    sample_times: &[f64],
) -> Result<Vec<HeatState>> {
    let mut stepper = HeatStepper::new(grid, params, f, dt)?;
    let total_steps = (t_final / dt).round() as u64;
    let mut targets: Vec<u64> = sample_times
        .iter()
        .map(|&t| ((t / dt).round() as u64).min(total_steps))
        .collect();
    targets.sort_unstable();
    targets.dedup();
    let mut out = Vec::with_capacity(targets.len());
    let mut next_target = targets.iter().copied().peekable();
    for k in 0..=total_steps {
        if next_target.peek() == Some(&k) {
            out.push(stepper.state());
            next_target.next();
        }
        if k < total_steps {
            stepper.step()?;
        }
    }
    Ok(out)
}
