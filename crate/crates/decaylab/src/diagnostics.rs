//! Weighted energy functionals, Hardy inequalities, decay-rate fits and the
//! wave/heat diffusion gap.
//!
//! All functionals evaluate the weight at the shifted time t0 + t:
//!   E_dx^beta  = int |grad w|^2 Psi^beta dx
//!   E_dt^beta  = int |w_t|^2 Psi^beta dx
//!   E_a^beta   = int |w|^2 a(x) Psi^beta dx
//!   E_Phi^lam  = int (2 u u_t + a |u|^2) Phi_{lam*}^{-1+2 eps*} dx
//!   E_*^lam    = 2 int w w_t Psi^lam dx

use crate::error::{Error, Result};
use crate::grid::{ModelParams, RadialField, RadialGrid};
use crate::heat::{l2_dmu_norm, HeatState};
use crate::initial_data::InitialData;
use crate::wave::{second_time_data, WaveState};
use crate::weights::WeightSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Time series row of every functional tracked along a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyRecord {
    pub t: f64,
    pub e_dx: f64,
    pub e_dt: f64,
    pub e_a: f64,
    pub e_phi: f64,
    pub e_star: f64,
    /// cumulative int_0^t E_a^beta[t0, u_t](s) ds
    pub dissip: f64,
}

/// Weighted data quantities controlling the energy decay bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DataNorms {
    /// int (|grad u0|^2 + u1^2) r^gamma dx
    pub e0: f64,
    /// int (|grad u1|^2 + u2^2) r^{gamma+2} dx
    pub e1: f64,
    /// int u0^2 r^{-alpha} dx (enters the budget when gamma < 2 - alpha)
    pub low: f64,
}

fn psi_at(spec: &WeightSpec, r: f64, t: f64) -> f64 {
    spec.psi(r, t)
}

/// int |grad w|^2 Psi^beta(r, t0+t) dx with the centered node gradient.
pub fn energy_dx(
    beta: f64,
    t0: f64,
    state: &WaveState,
    grid: &RadialGrid,
    params: &ModelParams,
) -> f64 {
    let spec = WeightSpec {
        beta,
        t0,
        params: profile(params, beta),
    };
    let mut grad = vec![0.0; grid.len()];
    grid.gradient(&state.u.values, &mut grad);
    grid.integrate_vol(|i, r| grad[i] * grad[i] * psi_at(&spec, r, state.t))
}

/// int |w_t|^2 Psi^beta dx.
pub fn energy_dt(
    beta: f64,
    t0: f64,
    state: &WaveState,
    grid: &RadialGrid,
    params: &ModelParams,
) -> f64 {
    let spec = WeightSpec {
        beta,
        t0,
        params: profile(params, beta),
    };
    grid.integrate_vol(|i, r| {
        let v = state.ut.values[i];
        v * v * psi_at(&spec, r, state.t)
    })
}

/// int |w|^2 a(x) Psi^beta dx for a field sampled at time t.
pub fn energy_a(
    beta: f64,
    t0: f64,
    field: &RadialField,
    t: f64,
    grid: &RadialGrid,
    params: &ModelParams,
) -> f64 {
    let spec = WeightSpec {
        beta,
        t0,
        params: profile(params, beta),
    };
    grid.integrate_dmu(|i, r| {
        let v = field.values[i];
        v * v * psi_at(&spec, r, t)
    })
}

fn profile(params: &ModelParams, beta: f64) -> crate::special::ProfileParams {
    crate::special::ProfileParams {
        alpha: params.alpha,
        dim: params.dim,
        beta,
    }
}

/// The Phi-weighted functional of the decay mechanism; requires
/// lambda in [0, (N-alpha)/(2-alpha)).
pub fn energy_phi(
    lambda: f64,
    t0: f64,
    state: &WaveState,
    grid: &RadialGrid,
    params: &ModelParams,
) -> Result<f64> {
    let c = params.cexp();
    if !(0.0..c).contains(&lambda) {
        return Err(Error::RegimeError {
            what: "energy_phi lambda must lie in [0, (N-alpha)/(2-alpha))",
            value: lambda,
            bound: c,
        });
    }
    let spec = WeightSpec {
        beta: lambda,
        t0,
        params: profile(params, lambda),
    };
    let eps = spec.epsilon_star();
    let lam_star = spec.lambda_star();
    let phi_spec = spec.with_beta(lam_star);
    let expo = -1.0 + 2.0 * eps;
    let mut acc = 0.0;
    for i in 0..grid.len() {
        let u = state.u.values[i];
        let ut = state.ut.values[i];
        if u == 0.0 && ut == 0.0 {
            continue;
        }
        let r = grid.r[i];
        let a = params.damping(r);
        let w = phi_spec.phi(r, state.t)?.powf(expo);
        acc += grid.w_vol[i] * (2.0 * u * ut + a * u * u) * w;
    }
    Ok(acc)
}

/// E_*^lambda = 2 int w w_t Psi^lambda dx (signed).
pub fn energy_star(
    lambda: f64,
    t0: f64,
    state: &WaveState,
    grid: &RadialGrid,
    params: &ModelParams,
) -> f64 {
    let spec = WeightSpec {
        beta: lambda,
        t0,
        params: profile(params, lambda),
    };
    2.0 * grid
        .integrate_vol(|i, r| state.u.values[i] * state.ut.values[i] * psi_at(&spec, r, state.t))
}

/// u_tt recovered from the equation: Lap u - a(x) u_t. Used for the
/// order-1 derivative energies (the state of d/dt u is (u_t, u_tt)).
pub fn second_derivative_field(
    state: &WaveState,
    grid: &RadialGrid,
    params: &ModelParams,
) -> RadialField {
    let mut lap = vec![0.0; grid.len()];
    grid.laplacian(&state.u.values, &mut lap);
    let values = (0..grid.len())
        .map(|i| lap[i] - params.damping(grid.r[i]) * state.ut.values[i])
        .collect();
    RadialField { values }
}

/// The state of d/dt u, with u_tt from the equation.
pub fn derivative_state(state: &WaveState, grid: &RadialGrid, params: &ModelParams) -> WaveState {
    WaveState {
        u: state.ut.clone(),
        ut: second_derivative_field(state, grid, params),
        t: state.t,
    }
}

/// Weighted Hardy inequality (both sides, the constant folded into rhs):
///   int |w|^2 |x|^{-alpha} Psi^{lambda-1} dx
///     <= 4 min{(N-a)/(2-a), (N-2)/(2-a)+lambda}^{-2} int |grad w|^2 Psi^lambda dx
/// evaluated at time 0 (weight Psi(., t0)).
pub fn hardy_check(
    w: &RadialField,
    lambda: f64,
    t0: f64,
    grid: &RadialGrid,
    params: &ModelParams,
) -> Result<(f64, f64)> {
    let nf = params.dim as f64;
    let low = -(nf - 2.0) / (2.0 - params.alpha);
    if lambda <= low {
        return Err(Error::RegimeError {
            what: "hardy_check lambda must exceed -(N-2)/(2-alpha)",
            value: lambda,
            bound: low,
        });
    }
    let spec_m1 = WeightSpec {
        beta: lambda - 1.0,
        t0,
        params: profile(params, lambda - 1.0),
    };
    let spec = WeightSpec {
        beta: lambda,
        t0,
        params: profile(params, lambda),
    };
    let lhs = grid.integrate_dmu(|i, r| {
        let v = w.values[i];
        v * v * psi_at(&spec_m1, r, 0.0)
    });
    let mut grad = vec![0.0; grid.len()];
    grid.gradient(&w.values, &mut grad);
    let raw_rhs = grid.integrate_vol(|i, r| grad[i] * grad[i] * psi_at(&spec, r, 0.0));
    let konst = params
        .cexp()
        .min((nf - 2.0) / (2.0 - params.alpha) + lambda);
    Ok((lhs, 4.0 / (konst * konst) * raw_rhs))
}

/// Classical weighted Hardy inequality (the constant on the lhs):
///   ((N-alpha)/2)^2 int |w|^2 |x|^{-alpha} dx <= int |grad w|^2 |x|^{2-alpha} dx.
pub fn hardy_classical_check(
    w: &RadialField,
    grid: &RadialGrid,
    params: &ModelParams,
) -> (f64, f64) {
    let nf = params.dim as f64;
    let konst = ((nf - params.alpha) / 2.0).powi(2);
    let lhs = konst * grid.integrate_dmu(|i, _| w.values[i] * w.values[i]);
    let mut grad = vec![0.0; grid.len()];
    grid.gradient(&w.values, &mut grad);
    let rhs = grid.integrate_vol(|i, r| grad[i] * grad[i] * r.powf(2.0 - params.alpha));
    (lhs, rhs)
}

/// Gap D(t) = ||u(t) - v(t)||_{L^2_dmu} between a wave and a heat trajectory
/// on the same grid and sample times, plus the normalized series
/// D(t) (1+t)^{(gamma-alpha)/(2(2-alpha))}.
pub fn diffusion_gap(
    wave: &[WaveState],
    heat: &[HeatState],
    grid: &RadialGrid,
    params: &ModelParams,
    gamma: f64,
) -> Result<Vec<(f64, f64, f64)>> {
    if wave.len() != heat.len() {
        return Err(Error::GridMismatch);
    }
    let expo = (gamma - params.alpha) / (2.0 * (2.0 - params.alpha));
    wave.iter()
        .zip(heat.iter())
        .map(|(ws, hs)| {
            if ws.u.len() != grid.len()
                || hs.v.len() != grid.len()
                || (ws.t - hs.t).abs() > 1e-9 * (1.0 + ws.t.abs())
            {
                return Err(Error::GridMismatch);
            }
            let diff = RadialField {
                values: ws
                    .u
                    .values
                    .iter()
                    .zip(hs.v.values.iter())
                    .map(|(a, b)| a - b)
                    .collect(),
            };
            let d = l2_dmu_norm(&diff, grid);
            Ok((ws.t, d, d * (1.0 + ws.t).powf(expo)))
        })
        .collect()
}

/// Log-log least-squares fit over a time window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    /// rms of the log residuals
    pub residual: f64,
    pub points: usize,
}

pub fn fit_decay_rate(series: &[(f64, f64)], window: (f64, f64)) -> Result<DecayFit> {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|(t, _)| *t >= window.0 && *t <= window.1 && *t > 0.0)
        .map(|&(t, v)| (t, v))
        .collect();
    if pts.len() < 2 {
        return Err(Error::InvalidConfig(format!(
            "decay fit needs >= 2 points in [{}, {}], found {}",
            window.0,
            window.1,
            pts.len()
        )));
    }
    for &(t, v) in &pts {
        if !(v > 0.0) {
            return Err(Error::DomainError {
                what: "decay fit value (must be > 0)",
                value: t,
            });
        }
    }
    let n = pts.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(t, v) in &pts {
        let (x, y) = (t.ln(), v.ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let denom = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let mut ss = 0.0;
    for &(t, v) in &pts {
        let e = v.ln() - (slope * t.ln() + intercept);
        ss += e * e;
    }
    Ok(DecayFit {
        slope,
        intercept,
        residual: (ss / n).sqrt(),
        points: pts.len(),
    })
}

/// max over the last quarter of the time window [t_min, t_end] divided by
/// max over the first quarter; the finite-horizon boundedness proxy.
pub fn windowed_growth_ratio(series: &[(f64, f64)], t_min: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|(t, _)| *t >= t_min)
        .copied()
        .collect();
    let (lo, hi) = (pts.first()?.0, pts.last()?.0);
    if hi <= lo {
        return None;
    }
    let quarter = (hi - lo) / 4.0;
    let first = pts
        .iter()
        .filter(|(t, _)| *t <= lo + quarter)
        .map(|(_, v)| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    let last = pts
        .iter()
        .filter(|(t, _)| *t >= hi - quarter)
        .map(|(_, v)| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    if first <= 0.0 {
        return None;
    }
    Some(last / first)
}

/// Weighted data quantities of the decay bounds. u2 = -Lap u0 + a u1 is formed by
/// `second_time_data`. gamma outside [alpha, N+2-2alpha) is the caller's
/// problem to warn about; values are still computed.
pub fn data_norms(
    data: &InitialData,
    params: &ModelParams,
    grid: &RadialGrid,
    gamma: f64,
) -> DataNorms {
    let mut grad0 = vec![0.0; grid.len()];
    grid.gradient(&data.u0.values, &mut grad0);
    let e0 = grid.integrate_vol(|i, r| {
        (grad0[i] * grad0[i] + data.u1.values[i] * data.u1.values[i]) * r.powf(gamma)
    });
    let u2 = second_time_data(data, params, grid);
    let mut grad1 = vec![0.0; grid.len()];
    grid.gradient(&data.u1.values, &mut grad1);
    let e1 = grid.integrate_vol(|i, r| {
        (grad1[i] * grad1[i] + u2.values[i] * u2.values[i]) * r.powf(gamma + 2.0)
    });
    let low = grid.integrate_dmu(|i, _| data.u0.values[i] * data.u0.values[i]);
    DataNorms { e0, e1, low }
}

/// Hypothesis range gamma in [alpha, N+2-2alpha) of the weighted energy bound.
pub fn gamma_in_hypothesis(params: &ModelParams, gamma: f64) -> bool {
    let nf = params.dim as f64;
    gamma >= params.alpha && gamma < nf + 2.0 - 2.0 * params.alpha
}

/// Deterministic corpus of smooth compactly supported fields (sums of three
/// mollifier bumps), boundary-clean on the given grid.
pub fn random_smooth_fields(grid: &RadialGrid, count: usize, seed: u64) -> Vec<RadialField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r_lo = grid.r_inner + 0.6;
    let r_hi = (grid.r_outer - 1.0).min(grid.r_inner + 30.0);
    (0..count)
        .map(|_| {
            let bumps: Vec<(f64, f64, f64)> = (0..3)
                .map(|_| {
                    let center = rng.gen_range(r_lo..r_hi);
                    let width = rng.gen_range(0.3..2.0);
                    let amp = rng.gen_range(-2.0..2.0f64);
                    (center, width, amp)
                })
                .collect();
            let mut f = RadialField::from_fn(grid, |r| {
                bumps
                    .iter()
                    .map(|&(c, w, a)| crate::initial_data::bump_profile(c, w, a, r))
                    .sum()
            });
            f.clamp_boundary();
            f
        })
        .collect()
}
