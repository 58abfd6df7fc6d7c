//! Space-time weight functions built from the self-similar profile:
//!
//!   Psi^beta(x, t) = (t + |x|^{2-alpha}/(2-alpha)^2)^beta
//!   Phi_beta(x, t) = t^{-beta} phi_beta(|x|^{2-alpha} / ((2-alpha)^2 t))
//!
//! Both take the shifted time t0 + t internally so energy diagnostics never
//! re-shift. Exact identities (time derivative, scaling, heat equation,
//! envelope equivalence) are exposed for the verification suites.

use crate::error::{Error, Result};
use crate::special::{gamma, varphi, ProfileParams};

/// Weight exponent beta (or lambda) together with the time shift t0 and the
/// underlying (alpha, N) profile. epsilon_star / lambda_star of the
/// Phi-weighted functional are derived from beta interpreted as lambda.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSpec {
    pub beta: f64,
    pub t0: f64,
    pub params: ProfileParams,
}

impl WeightSpec {
    /// Standard constructor; the decay propositions assume t0 >= 1.
    pub fn new(beta: f64, t0: f64, alpha: f64, dim: u32) -> Result<Self> {
        if !(t0 >= 1.0) {
            return Err(Error::DomainError {
                what: "t0 (must be >= 1)",
                value: t0,
            });
        }
        Ok(WeightSpec {
            beta,
            t0,
            params: ProfileParams::new(alpha, dim, beta)?,
        })
    }

    /// t0 = 0 variant for algebraic identity tests (raw, unshifted time).
    pub fn unshifted(beta: f64, alpha: f64, dim: u32) -> Result<Self> {
        Ok(WeightSpec {
            beta,
            t0: 0.0,
            params: ProfileParams::new(alpha, dim, beta)?,
        })
    }

    pub fn with_beta(&self, beta: f64) -> WeightSpec {
        WeightSpec {
            beta,
            t0: self.t0,
            params: self.params.with_beta(beta),
        }
    }

    /// c = (N - alpha)/(2 - alpha).
    pub fn cexp(&self) -> f64 {
        self.params.cexp()
    }

    /// epsilon_star from lambda = (1 - 3 eps) c, clamped into (0, 1/3]
    /// (lambda <= 0 maps to 1/3). Non-positive for lambda >= c, which is
    /// outside the Phi-functional regime and rejected by callers.
    pub fn epsilon_star(&self) -> f64 {
        let eps = (1.0 - self.beta / self.cexp()) / 3.0;
        eps.min(1.0 / 3.0)
    }

    /// lambda_star = lambda (1 - 2 epsilon_star)^{-1}.
    pub fn lambda_star(&self) -> f64 {
        self.beta / (1.0 - 2.0 * self.epsilon_star())
    }

    /// Similarity variable s = r^{2-alpha} / ((2-alpha)^2 tau).
    fn similarity(&self, r: f64, tau: f64) -> f64 {
        let two_alpha = 2.0 - self.params.alpha;
        r.powf(two_alpha) / (two_alpha * two_alpha * tau)
    }

    /// Psi^beta(r, t0 + t) = (t0 + t + r^{2-alpha}/(2-alpha)^2)^beta.
    pub fn psi(&self, r: f64, t: f64) -> f64 {
        let two_alpha = 2.0 - self.params.alpha;
        (self.t0 + t + r.powf(two_alpha) / (two_alpha * two_alpha)).powf(self.beta)
    }

    /// Phi_beta(r, t0 + t); positive when beta < (N-alpha)/(2-alpha).
    pub fn phi(&self, r: f64, t: f64) -> Result<f64> {
        let tau = self.t0 + t;
        if tau <= 0.0 {
            return Err(Error::DomainError {
                what: "phi_weight time t0 + t",
                value: tau,
            });
        }
        let s = self.similarity(r, tau);
        Ok(tau.powf(-self.beta) * varphi(&self.params, s)?)
    }

    /// d/dt Phi_beta = -beta Phi_{beta+1} (exact identity).
    pub fn phi_time_derivative(&self, r: f64, t: f64) -> Result<f64> {
        if self.beta == 0.0 {
            return Ok(0.0);
        }
        Ok(-self.beta * self.with_beta(self.beta + 1.0).phi(r, t)?)
    }

    /// Numerically estimated envelope extrema of g(s) = phi_beta(s)(1+s)^beta
    /// on a fixed deterministic log grid, so that
    ///   c_beta Psi^{-beta} <= Phi_beta <= C_beta Psi^{-beta}.
    /// Returns (c_beta, C_beta); the lower constant requires beta < c.
    pub fn envelope_constants(&self) -> Result<(f64, f64)> {
        let c = self.cexp();
        if self.beta >= c {
            return Err(Error::RegimeError {
                what: "lower envelope requires beta < (N-alpha)/(2-alpha)",
                value: self.beta,
                bound: c,
            });
        }
        let (lo, hi) = self.envelope_extrema(1024)?;
        Ok((lo, hi))
    }

    /// Upper envelope constant C_beta alone (defined for every beta).
    pub fn envelope_upper(&self) -> Result<f64> {
        Ok(self.envelope_extrema(1024)?.1)
    }

    /// min/max of phi_beta(s)(1+s)^beta over {0} and a log grid in
    /// [1e-4, 1e6] with `n` points total.
    pub fn envelope_extrema(&self, n: usize) -> Result<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for k in 0..n {
            let s = if k == 0 {
                0.0
            } else {
                let frac = (k - 1) as f64 / (n - 2) as f64;
                1e-4 * (1e10f64).powf(frac)
            };
            let g = varphi(&self.params, s)? * (1.0 + s).powf(self.beta);
            lo = lo.min(g);
            hi = hi.max(g);
        }
        Ok((lo, hi))
    }

    /// Closed-form t -> 0 limit of Phi_beta:
    ///   Gamma(c)/Gamma(c - beta) * (r^{2-alpha}/(2-alpha)^2)^{-beta},
    /// i.e. the constant times Psi^{-beta}(r, 0). Requires beta < c for the
    /// limit to be a locally bounded profile; errors when c - beta is a
    /// non-positive integer (gamma pole).
    pub fn initial_trace(&self, r: f64) -> Result<f64> {
        let c = self.cexp();
        let two_alpha = 2.0 - self.params.alpha;
        let konst = gamma(c)? / gamma(c - self.beta)?;
        Ok(konst * (r.powf(two_alpha) / (two_alpha * two_alpha)).powf(-self.beta))
    }
}

/// Write a (s, phi_beta(s)) table as CSV.
pub fn write_profile_table<W: std::io::Write>(
    out: &mut W,
    params: &ProfileParams,
    s_values: &[f64],
) -> Result<()> {
    writeln!(out, "s,phi")?;
    for &s in s_values {
        writeln!(out, "{:.12e},{:.12e}", s, varphi(params, s)?)?;
    }
    Ok(())
}

/// Write a (r, t, Phi_beta(r, t0+t)) table as CSV.
pub fn write_phi_table<W: std::io::Write>(
    out: &mut W,
    spec: &WeightSpec,
    r_values: &[f64],
    t_values: &[f64],
) -> Result<()> {
    writeln!(out, "r,t,phi_weight")?;
    for &t in t_values {
        for &r in r_values {
            writeln!(out, "{:.12e},{:.12e},{:.12e}", r, t, spec.phi(r, t)?)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn psi_arithmetic() {
        let w = WeightSpec::unshifted(2.0, 0.0, 3).unwrap();
        assert_relative_eq!(w.psi(2.0, 1.0), 4.0, max_relative = 1e-15);
        let w = WeightSpec::unshifted(0.0, 0.0, 3).unwrap();
        assert_eq!(w.psi(7.3, 11.0), 1.0);
        let w = WeightSpec::new(1.0, 1.0, 0.5, 3).unwrap();
        assert_relative_eq!(w.psi(1.0, 3.0), 4.0 + 1.0 / 2.25, max_relative = 1e-15);
    }

    #[test]
    fn psi_monotone_in_time() {
        let up = WeightSpec::new(1.3, 1.0, 0.5, 3).unwrap();
        let down = WeightSpec::new(-1.3, 1.0, 0.5, 3).unwrap();
        let mut prev_up = 0.0;
        let mut prev_down = f64::INFINITY;
        for k in 0..50 {
            let t = 0.5 * k as f64;
            let (a, b) = (up.psi(2.0, t), down.psi(2.0, t));
            assert!(a >= prev_up && b <= prev_down);
            prev_up = a;
            prev_down = b;
        }
    }

    #[test]
    fn phi_trivial_cases() {
        let w = WeightSpec::unshifted(0.0, 0.0, 3).unwrap();
        assert_eq!(w.phi(3.0, 5.0).unwrap(), 1.0);
        // beta = c = 1.5 (N=3, alpha=0): phi reduces to the Gaussian-type
        // t^{-3/2} e^{-r^2/(4t)}
        let w = WeightSpec::unshifted(1.5, 0.0, 3).unwrap();
        assert_relative_eq!(
            w.phi(2.0, 1.0).unwrap(),
            (-1.0f64).exp(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn phi_composes_from_varphi() {
        let w = WeightSpec::unshifted(0.5, 0.0, 3).unwrap();
        let direct = w.phi(1.0, 4.0).unwrap();
        let composed = 4.0f64.powf(-0.5) * varphi(&w.params, 1.0 / 16.0).unwrap();
        assert_relative_eq!(direct, composed, max_relative = 1e-14);
    }

    #[test]
    fn phi_rejects_nonpositive_time() {
        let w = WeightSpec::unshifted(0.5, 0.0, 3).unwrap();
        assert!(matches!(w.phi(1.0, 0.0), Err(Error::DomainError { .. })));
        assert!(matches!(w.phi(1.0, -2.0), Err(Error::DomainError { .. })));
    }

    #[test]
    fn time_derivative_identity_and_fd_oracle() {
        let w = WeightSpec::unshifted(0.0, 0.0, 3).unwrap();
        assert_eq!(w.phi_time_derivative(1.0, 1.0).unwrap(), 0.0);

        // -1.5 * Phi_{2.5}(1,1); Phi_{2.5}(1,1) = e^{-1/4} M(-1, 1.5, 1/4)
        let w = WeightSpec::unshifted(1.5, 0.0, 3).unwrap();
        let expected = -1.5 * (-0.25f64).exp() * (1.0 - 0.25 / 1.5);
        let got = w.phi_time_derivative(1.0, 1.0).unwrap();
        assert_relative_eq!(got, expected, max_relative = 1e-13);
        assert_relative_eq!(got, -1.5 * 0.6490006525595041, max_relative = 1e-12);

        // 6th-order central difference in t, step 1e-3
        let h = 1e-3;
        let f = |t: f64| w.phi(1.0, t).unwrap();
        let fd = (f(1.0 + 3.0 * h) - 9.0 * f(1.0 + 2.0 * h) + 45.0 * f(1.0 + h)
            - 45.0 * f(1.0 - h)
            + 9.0 * f(1.0 - 2.0 * h)
            - f(1.0 - 3.0 * h))
            / (60.0 * h);
        assert_relative_eq!(got, fd, max_relative = 1e-8);
    }

    #[test]
    fn scaling_identity_random_sample() {
        // Phi_beta(r, t) = lam^{(2-alpha) beta} Phi_beta(lam r, lam^{2-alpha} t)
        let mut rng = ChaCha8Rng::seed_from_u64(0xDECA);
        for _ in 0..100 {
            let alpha: f64 = if rng.gen_bool(0.5) { 0.0 } else { 0.5 };
            let beta = rng.gen_range(-1.0..2.5);
            let r = rng.gen_range(0.5..20.0);
            let t = rng.gen_range(0.1..50.0);
            let lam: f64 = rng.gen_range(0.3..3.0);
            let w = WeightSpec::unshifted(beta, alpha, 3).unwrap();
            let lhs = w.phi(r, t).unwrap();
            let rhs =
                lam.powf((2.0 - alpha) * beta) * w.phi(lam * r, lam.powf(2.0 - alpha) * t).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
        }
        // a fixed point-pair
        let w = WeightSpec::unshifted(0.7, 0.5, 3).unwrap();
        let lhs = w.phi(1.0, 1.0).unwrap();
        let rhs = 2.0f64.powf(1.5 * 0.7) * w.phi(2.0, 2.0f64.powf(1.5)).unwrap();
        assert_relative_eq!(lhs, rhs, max_relative = 1e-13);
    }

    #[test]
    fn envelope_beta_zero_is_unit() {
        let w = WeightSpec::unshifted(0.0, 0.0, 3).unwrap();
        let (lo, hi) = w.envelope_constants().unwrap();
        assert_relative_eq!(lo, 1.0, max_relative = 1e-12);
        assert_relative_eq!(hi, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn envelope_regular_case() {
        // beta = c - 1 = 0.5 at N=3, alpha=0; max 1.0562950 at s ~ 0.937,
        // min approaches Gamma(1.5)/Gamma(1.0) = 0.8862269 as s -> inf
        let w = WeightSpec::unshifted(0.5, 0.0, 3).unwrap();
        let (lo, hi) = w.envelope_constants().unwrap();
        assert!(lo > 0.0 && hi >= lo);
        assert_relative_eq!(hi, 1.0562950312637131, max_relative = 1e-4);
        assert_relative_eq!(lo, 0.8862269254527580, max_relative = 1e-4);
        // stable under grid refinement
        let (lo2, hi2) = w.envelope_extrema(2048).unwrap();
        assert_relative_eq!(lo, lo2, max_relative = 1e-3);
        assert_relative_eq!(hi, hi2, max_relative = 1e-3);
    }

    #[test]
    fn envelope_regime_error_and_upper_only() {
        // beta = c: lower constant does not exist; upper is the 1-d maximum
        // of e^{-s}(1+s)^{3/2}, attained at s = 1/2
        let w = WeightSpec::unshifted(1.5, 0.0, 3).unwrap();
        assert!(matches!(
            w.envelope_constants(),
            Err(Error::RegimeError { .. })
        ));
        let hi = w.envelope_upper().unwrap();
        assert_relative_eq!(hi, 1.1142679722372073, max_relative = 1e-4);
    }

    #[test]
    fn envelope_equivalence_pointwise() {
        // C^{-1} Psi^beta <= Phi^{-1} <= c^{-1} Psi^beta on a random sample
        let w = WeightSpec::unshifted(0.5, 0.0, 3).unwrap();
        let (c_lo, c_hi) = w.envelope_constants().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let r = rng.gen_range(0.5..100.0);
            let t = rng.gen_range(0.05..1e4);
            let phi_inv = 1.0 / w.phi(r, t).unwrap();
            let psi = w.psi(r, t);
            assert!(phi_inv <= psi / c_lo * (1.0 + 1e-3));
            assert!(phi_inv >= psi / c_hi * (1.0 - 1e-3));
        }
    }

    #[test]
    fn initial_trace_values() {
        let w = WeightSpec::unshifted(0.0, 0.0, 3).unwrap();
        assert_eq!(w.initial_trace(5.0).unwrap(), 1.0);
        // N=3, alpha=0, beta=1/2, r=2: s-weight (r^2/4)^{-1/2} = 1, so the
        // trace equals Gamma(1.5)/Gamma(1.0)
        let w = WeightSpec::unshifted(0.5, 0.0, 3).unwrap();
        assert_relative_eq!(
            w.initial_trace(2.0).unwrap(),
            0.8862269254527580,
            max_relative = 1e-13
        );
        // N=2, alpha=0.5, beta=0.4: Gamma(1.0)/Gamma(0.6) (1.5^{1.5}/2.25)^{-0.4}
        let w = WeightSpec::unshifted(0.4, 0.5, 2).unwrap();
        let expect =
            (gamma(1.0).unwrap() / gamma(0.6).unwrap()) * (1.5f64.powf(1.5) / 2.25).powf(-0.4);
        assert_relative_eq!(w.initial_trace(1.5).unwrap(), expect, max_relative = 1e-13);
    }

    #[test]
    fn initial_trace_pole() {
        // c - beta = 0: gamma pole
        let w = WeightSpec::unshifted(1.5, 0.0, 3).unwrap();
        assert!(matches!(w.initial_trace(1.0), Err(Error::GammaPole { .. })));
    }

    #[test]
    fn phi_converges_to_trace() {
        for (alpha, beta) in [(0.0, 0.5), (0.0, 0.7), (0.5, 0.5)] {
            let w = WeightSpec::unshifted(beta, alpha, 3).unwrap();
            for r in [1.0, 2.0, 5.0] {
                let trace = w.initial_trace(r).unwrap();
                let gap = |t: f64| (w.phi(r, t).unwrap() / trace - 1.0).abs();
                // shrinks toward the trace (up to the rounding floor when the
                // correction series terminates, e.g. b = 1)
                assert!(gap(1e-4) <= gap(1e-2) + 1e-12);
                assert!(gap(1e-4) <= 5e-3, "trace gap {:.2e} at r={r}", gap(1e-4));
            }
        }
    }

    #[test]
    fn epsilon_lambda_star_relations() {
        let c = 1.5; // N=3, alpha=0
        let w = WeightSpec::new(0.0, 16.0, 0.0, 3).unwrap();
        assert_relative_eq!(w.epsilon_star(), 1.0 / 3.0, max_relative = 1e-15);
        assert_eq!(w.lambda_star(), 0.0);
        let lam = 0.9;
        let w = WeightSpec::new(lam, 16.0, 0.0, 3).unwrap();
        let eps = w.epsilon_star();
        assert_relative_eq!(lam, (1.0 - 3.0 * eps) * c, max_relative = 1e-14);
        assert!(w.lambda_star() < c);
        // lambda <= 0 clamps to eps = 1/3, lambda_star = 3 lambda
        let w = WeightSpec::new(-0.4, 16.0, 0.0, 3).unwrap();
        assert_eq!(w.epsilon_star(), 1.0 / 3.0);
        assert_relative_eq!(w.lambda_star(), -1.2, max_relative = 1e-14);
    }
}
