//! Gamma, Kummer's confluent hypergeometric functions M and U, and the
//! self-similar profile phi_beta(s) = e^{-s} M(c - beta, c; s) with
//! c = (N - alpha)/(2 - alpha).
//!
//! M is evaluated by the defining series for s <= 40 and by the large-s
//! expansion M ~ Gamma(c)/Gamma(b) s^{b-c} e^s (times an inverse-power
//! correction series, truncated at its smallest term) beyond. The products
//! e^{-s} * M appearing in phi_beta are simplified analytically in the
//! large-s channel so no overflow occurs at any s.

use crate::error::{Error, Result};
use crate::quad;
use std::f64::consts::PI;

/// Switch point between the direct series and the large-s expansion.
/// Chosen so both channels overlap with relative agreement ~1e-10 on
/// s in [35, 45] (tested); the direct series stays well-conditioned here
/// while the expansion already truncates near machine precision.
pub const S_SWITCH: f64 = 40.0;

const SERIES_REL_TOL: f64 = 1e-16;
const SERIES_MAX_TERMS: usize = 100_000;
const MAX_LN: f64 = 709.0; // ln(f64::MAX) ~ 709.78

fn is_nonpositive_integer(x: f64) -> Option<i64> {
    let r = x.round();
    if r <= 0.0 && (x - r).abs() <= 1e-12 * (1.0 + x.abs()) {
        Some(r as i64)
    } else {
        None
    }
}

// Lanczos coefficients (g = 607/128, 15 terms), accurate to ~1e-15 in ln Gamma.
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEF: [f64; 15] = [
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
];

/// ln Gamma(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut ser = LANCZOS_COEF[0];
    for (j, &coef) in LANCZOS_COEF.iter().enumerate().skip(1) {
        ser += coef / (x + j as f64);
    }
    let tmp = x + LANCZOS_G + 0.5;
    const SQRT_TWO_PI: f64 = 2.5066282746310005;
    (x + 0.5) * tmp.ln() - tmp + (SQRT_TWO_PI * ser / x).ln()
}

/// Gamma function; reflection formula for x < 0.5, pole error at
/// non-positive integers.
pub fn gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x).is_some() {
        return Err(Error::GammaPole { x });
    }
    if x < 0.5 {
        // Gamma(x) Gamma(1-x) = pi / sin(pi x)
        let g = gamma(1.0 - x)?;
        return Ok(PI / ((PI * x).sin() * g));
    }
    Ok(ln_gamma(x).exp())
}

/// Parameter pair (b, c) for Kummer's functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerArgs {
    pub b: f64,
    pub c: f64,
}

impl KummerArgs {
    /// `c` must not be zero or a negative integer (series denominators).
    pub fn new(b: f64, c: f64) -> Result<Self> {
        if is_nonpositive_integer(c).is_some() {
            return Err(Error::InvalidKummerC { c });
        }
        Ok(KummerArgs { b, c })
    }
}

/// Defining series sum_n (b)_n/(c)_n s^n/n!, stopped once three consecutive
/// terms fall below 1e-16 of the partial sum.
fn m_series(b: f64, c: f64, s: f64) -> Result<f64> {
    let mut sum = 1.0f64;
    let mut term = 1.0f64;
    let mut small_run = 0u32;
    for n in 0..SERIES_MAX_TERMS {
        let nf = n as f64;
        term *= (b + nf) / (c + nf) * s / (nf + 1.0);
        sum += term;
        if term.abs() <= SERIES_REL_TOL * sum.abs() {
            small_run += 1;
            if small_run >= 3 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::SeriesNonConvergence {
        terms: SERIES_MAX_TERMS,
    })
}

/// Terminating case: b a non-positive integer, exact polynomial of degree -b.
fn m_polynomial(b_int: i64, c: f64, s: f64) -> f64 {
    let degree = (-b_int) as usize;
    let b = b_int as f64;
    let mut sum = 1.0f64;
    let mut term = 1.0f64;
    for n in 0..degree {
        let nf = n as f64;
        term *= (b + nf) / (c + nf) * s / (nf + 1.0);
        sum += term;
    }
    sum
}

/// Inverse-power correction sums for the large-s channel:
///   S0 = sum_k t_k,  S1 = sum_k k t_k,  S2 = sum_k k(k+1) t_k,
/// with t_k = (c-b)_k (1-b)_k / (k! s^k), truncated at the smallest term.
fn asymptotic_sums(b: f64, c: f64, s: f64) -> Result<(f64, f64, f64)> {
    let mut t = 1.0f64;
    let (mut s0, mut s1, mut s2) = (1.0f64, 0.0f64, 0.0f64);
    let mut prev_abs = f64::INFINITY;
    for k in 0..500usize {
        let kf = k as f64;
        let next = t * (c - b + kf) * (1.0 - b + kf) / ((kf + 1.0) * s);
        if next.abs() >= prev_abs {
            // divergent tail reached; truncation error is ~ the first
            // omitted term, which must already be negligible
            if next.abs() > 1e-8 * s0.abs().max(1e-300) {
                return Err(Error::SeriesNonConvergence { terms: k });
            }
            break;
        }
        prev_abs = next.abs();
        t = next;
        let k1 = kf + 1.0;
        s0 += t;
        s1 += k1 * t;
        s2 += k1 * (k1 + 1.0) * t;
        if t.abs() <= 1e-17 * s0.abs() {
            break;
        }
    }
    Ok((s0, s1, s2))
}

/// Kummer's M(b, c; s) for s >= 0.
///
/// Exact polynomial when b is a non-positive integer; defining series for
/// s <= 40; large-s expansion otherwise. When the result would exceed the
/// f64 range an explicit overflow error is returned instead of infinity.
pub fn kummer_m(args: &KummerArgs, s: f64) -> Result<f64> {
    let KummerArgs { b, c } = *args;
    if s < 0.0 {
        return Err(Error::DomainError {
            what: "kummer_m argument s",
            value: s,
        });
    }
    if let Some(b_int) = is_nonpositive_integer(b) {
        return Ok(m_polynomial(b_int, c, s));
    }
    if s <= S_SWITCH {
        return m_series(b, c, s);
    }
    // ln M = s + (b - c) ln s + ln|Gamma(c)/Gamma(b)| + ln|S0|
    let (s0, _, _) = asymptotic_sums(b, c, s)?;
    let gc = gamma(c)?;
    let gb = gamma(b)?;
    let ratio = gc / gb;
    let ln_m = s + (b - c) * s.ln() + ratio.abs().ln() + s0.abs().ln();
    if ln_m > MAX_LN {
        return Err(Error::Overflow { log_value: ln_m });
    }
    Ok(ratio.signum() * s0.signum() * ln_m.exp())
}

/// Kummer's U(b, c; s) for b > 0, s > 0, via the integral representation
/// after the substitution sigma = tau/s:
///   U = s^{-b}/Gamma(b) * int_0^inf e^{-tau} tau^{b-1} (1 + tau/s)^{c-b-1} dtau
/// split at tau = 1 with the tail mapped to a finite interval.
pub fn kummer_u(args: &KummerArgs, s: f64) -> Result<f64> {
    let KummerArgs { b, c } = *args;
    if b <= 0.0 {
        return Err(Error::NonPositiveB { b });
    }
    if s <= 0.0 {
        return Err(Error::DomainError {
            what: "kummer_u argument s",
            value: s,
        });
    }
    let expo = c - b - 1.0;
    let head = quad::integrate(
        |tau| (-tau).exp() * tau.powf(b - 1.0) * (1.0 + tau / s).powf(expo),
        0.0,
        1.0,
        1e-11,
        0.0,
        6000,
    )?;
    // tau = 1/u maps [1, inf) to (0, 1]
    let tail = quad::integrate(
        |u| {
            let inv = 1.0 / u;
            if inv > 700.0 {
                return 0.0;
            }
            (-inv).exp() * inv.powf(b + 1.0) * (1.0 + inv / s).powf(expo)
        },
        0.0,
        1.0,
        1e-11,
        0.0,
        6000,
    )?;
    Ok(s.powf(-b) / gamma(b)? * (head + tail))
}

/// Parameters of the profile phi_beta: damping exponent alpha in [0,1),
/// dimension N >= 2, and the weight exponent beta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileParams {
    pub alpha: f64,
    pub dim: u32,
    pub beta: f64,
}

impl ProfileParams {
    pub fn new(alpha: f64, dim: u32, beta: f64) -> Result<Self> {
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
        if !beta.is_finite() {
            return Err(Error::DomainError {
                what: "beta",
                value: beta,
            });
        }
        Ok(ProfileParams { alpha, dim, beta })
    }

    /// c = (N - alpha)/(2 - alpha), the Kummer second parameter.
    pub fn cexp(&self) -> f64 {
        (self.dim as f64 - self.alpha) / (2.0 - self.alpha)
    }

    /// First Kummer parameter b = c - beta.
    pub fn kummer_b(&self) -> f64 {
        self.cexp() - self.beta
    }

    /// True iff beta < (N - alpha)/(2 - alpha), where phi_beta > 0 everywhere.
    pub fn positivity_regime(&self) -> bool {
        self.beta < self.cexp()
    }

    pub fn with_beta(&self, beta: f64) -> ProfileParams {
        ProfileParams { beta, ..*self }
    }
}

enum PhiChannel {
    Polynomial(i64),
    Series,
    Asymptotic,
}

fn phi_channel(p: &ProfileParams, s: f64) -> PhiChannel {
    if let Some(b_int) = is_nonpositive_integer(p.kummer_b()) {
        PhiChannel::Polynomial(b_int)
    } else if s <= S_SWITCH {
        PhiChannel::Series
    } else {
        PhiChannel::Asymptotic
    }
}

/// phi_beta(s) = e^{-s} M(c - beta, c; s). Positive for all s when
/// beta < c; |phi_beta| <= C_beta (1+s)^{-beta}. The e^{-s} e^{+s} pair of
/// the large-s channel cancels analytically, so no overflow occurs.
pub fn varphi(p: &ProfileParams, s: f64) -> Result<f64> {
    if s < 0.0 {
        return Err(Error::DomainError {
            what: "varphi argument s",
            value: s,
        });
    }
    let c = p.cexp();
    let b = p.kummer_b();
    match phi_channel(p, s) {
        PhiChannel::Polynomial(b_int) => Ok((-s).exp() * m_polynomial(b_int, c, s)),
        PhiChannel::Series => Ok((-s).exp() * m_series(b, c, s)?),
        PhiChannel::Asymptotic => {
            let (s0, _, _) = asymptotic_sums(b, c, s)?;
            Ok(gamma(c)? / gamma(b)? * s.powf(-p.beta) * s0)
        }
    }
}

/// phi_beta'(s) from the term-wise differentiated series
/// (M' = (b/c) M(b+1, c+1; s)), or the differentiated large-s expansion.
pub fn varphi_derivative(p: &ProfileParams, s: f64) -> Result<f64> {
    if s < 0.0 {
        return Err(Error::DomainError {
            what: "varphi argument s",
            value: s,
        });
    }
    let c = p.cexp();
    let b = p.kummer_b();
    match phi_channel(p, s) {
        PhiChannel::Polynomial(b_int) => {
            let m = m_polynomial(b_int, c, s);
            let mp = if b_int == 0 {
                0.0
            } else {
                b / c * m_polynomial(b_int + 1, c + 1.0, s)
            };
            Ok((-s).exp() * (mp - m))
        }
        PhiChannel::Series => {
            let m = m_series(b, c, s)?;
            let mp = b / c * m_series(b + 1.0, c + 1.0, s)?;
            Ok((-s).exp() * (mp - m))
        }
        PhiChannel::Asymptotic => {
            let (s0, s1, _) = asymptotic_sums(b, c, s)?;
            let beta = p.beta;
            Ok(-(gamma(c)? / gamma(b)?) * s.powf(-beta - 1.0) * (beta * s0 + s1))
        }
    }
}

/// phi_beta''(s) from the twice-differentiated series
/// (M'' = b(b+1)/(c(c+1)) M(b+2, c+2; s)); used by the ODE residual checks.
pub fn varphi_second_derivative(p: &ProfileParams, s: f64) -> Result<f64> {
    if s < 0.0 {
        return Err(Error::DomainError {
            what: "varphi argument s",
            value: s,
        });
    }
    let c = p.cexp();
    let b = p.kummer_b();
    match phi_channel(p, s) {
        PhiChannel::Polynomial(b_int) => {
            let m = m_polynomial(b_int, c, s);
            let mp = if b_int == 0 {
                0.0
            } else {
                b / c * m_polynomial(b_int + 1, c + 1.0, s)
            };
            let mpp = if b_int >= -1 {
                0.0
            } else {
                b * (b + 1.0) / (c * (c + 1.0)) * m_polynomial(b_int + 2, c + 2.0, s)
            };
            Ok((-s).exp() * (mpp - 2.0 * mp + m))
        }
        PhiChannel::Series => {
            let m = m_series(b, c, s)?;
            let mp = b / c * m_series(b + 1.0, c + 1.0, s)?;
            let mpp = b * (b + 1.0) / (c * (c + 1.0)) * m_series(b + 2.0, c + 2.0, s)?;
            Ok((-s).exp() * (mpp - 2.0 * mp + m))
        }
        PhiChannel::Asymptotic => {
            let (s0, s1, s2) = asymptotic_sums(b, c, s)?;
            let beta = p.beta;
            Ok(gamma(c)? / gamma(b)?
                * s.powf(-beta - 2.0)
                * (beta * (beta + 1.0) * s0 + 2.0 * beta * s1 + s2))
        }
    }
}

/// Direct-series value of phi_beta regardless of s (channel-agreement tests).
pub fn varphi_series_channel(p: &ProfileParams, s: f64) -> Result<f64> {
    let c = p.cexp();
    let b = p.kummer_b();
    if let Some(b_int) = is_nonpositive_integer(b) {
        return Ok((-s).exp() * m_polynomial(b_int, c, s));
    }
    Ok((-s).exp() * m_series(b, c, s)?)
}

/// Large-s channel value of phi_beta regardless of s (channel-agreement tests).
pub fn varphi_asymptotic_channel(p: &ProfileParams, s: f64) -> Result<f64> {
    let c = p.cexp();
    let b = p.kummer_b();
    let (s0, _, _) = asymptotic_sums(b, c, s)?;
    Ok(gamma(c)? / gamma(b)? * s.powf(-p.beta) * s0)
}
