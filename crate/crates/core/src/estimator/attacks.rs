//! BKZ block-size estimates for LWE (primal and dual) and SIS.
//!
//! Every search is a linear scan upward from `mu_min`; each inequality is
//! monotone in `mu` over the scanned range, so the first hit is the minimum.
//! The `*_holds` predicates are public so callers can check minimality.

use std::f64::consts::{E, LN_2, PI};

use super::{AttackModel, EstimatorError, XiMode};

/// Root-Hermite factor `((mu*pi)^(1/mu) * mu / (2*pi*e))^(1/(2(mu-1)))`.
pub fn delta(mu: u64) -> Result<f64, EstimatorError> {
    if mu < 2 {
        return Err(EstimatorError::DomainError(format!("delta needs mu >= 2, got {mu}")));
    }
    let m = mu as f64;
    Ok(((m * PI).powf(1.0 / m) * m / (2.0 * PI * E)).powf(1.0 / (2.0 * (m - 1.0))))
}

fn ln_delta(mu: u64) -> f64 {
    delta(mu).expect("mu >= 2").ln()
}

/// The value standing in for `xi` in the primal inequality.
pub fn primal_xi(eps: f64, mode: XiMode) -> f64 {
    match mode {
        XiMode::Bound => eps,
        XiMode::StdDev => (eps * (eps + 1.0) / 3.0).sqrt(),
    }
}

/// `xi * sqrt(mu) <= delta(mu)^(2mu - c) * q^(na/c)` with `c = na + nb + 1`, in logs.
pub fn primal_holds(na: usize, nb: usize, xi: f64, q: u64, mu: u64) -> bool {
    let c = (na + nb + 1) as f64;
    let lhs = xi.ln() + 0.5 * (mu as f64).ln();
    let rhs = (2.0 * mu as f64 - c) * ln_delta(mu) + na as f64 / c * (q as f64).ln();
    lhs <= rhs
}

/// `-2 pi^2 tau(mu)^2 >= ln(2^(-0.2075 mu / 2))` with
/// `tau(mu) = delta(mu)^(c-1) * q^(nb/c) * eps / q` and `c = na + nb`.
pub fn dual_holds(na: usize, nb: usize, eps: f64, q: u64, mu: u64) -> bool {
    let c = (na + nb) as f64;
    let ln_q = (q as f64).ln();
    let ln_tau = (c - 1.0) * ln_delta(mu) + nb as f64 / c * ln_q + eps.ln() - ln_q;
    -2.0 * PI * PI * (2.0 * ln_tau).exp() >= -0.2075 * mu as f64 / 2.0 * LN_2
}

/// `2^(2 sqrt(na log2(q) log2(delta(mu)))) / sqrt(na + nb) <= xi`.
pub fn sis_holds(na: usize, nb: usize, xi: f64, q: u64, mu: u64) -> bool {
    let log2_delta = ln_delta(mu) / LN_2;
    let log2_len = 2.0 * (na as f64 * (q as f64).log2() * log2_delta).sqrt();
    log2_len - 0.5 * ((na + nb) as f64).log2() <= xi.log2()
}

impl AttackModel {
    fn first_hit(&self, holds: impl Fn(u64) -> bool) -> Result<u64, EstimatorError> {
        (self.mu_min..=self.mu_max)
            .find(|&mu| holds(mu))
            .ok_or(EstimatorError::InfeasibleAtCap { cap: self.mu_max })
    }

    pub fn lwe_primal_blocksize(
        &self,
        na: usize,
        nb: usize,
        eps: f64,
        q: u64,
        mode: XiMode,
    ) -> Result<u64, EstimatorError> {
        let xi = primal_xi(eps, mode);
        self.first_hit(|mu| primal_holds(na, nb, xi, q, mu))
    }

    pub fn lwe_dual_blocksize(
        &self,
        na: usize,
        nb: usize,
        eps: f64,
        q: u64,
    ) -> Result<u64, EstimatorError> {
        self.first_hit(|mu| dual_holds(na, nb, eps, q, mu))
    }

    /// `min(primal, dual)`; infeasible only if both are.
    pub fn lwe_blocksize(
        &self,
        na: usize,
        nb: usize,
        eps: f64,
        q: u64,
        mode: XiMode,
    ) -> Result<u64, EstimatorError> {
        let primal = self.lwe_primal_blocksize(na, nb, eps, q, mode);
        let dual = self.lwe_dual_blocksize(na, nb, eps, q);
        match (primal, dual) {
            (Ok(p), Ok(d)) => Ok(p.min(d)),
            (Ok(m), Err(_)) | (Err(_), Ok(m)) => Ok(m),
            (Err(e), Err(_)) => Err(e),
        }
    }

    pub fn sis_blocksize(
        &self,
        na: usize,
        nb: usize,
        xi: f64,
        q: u64,
    ) -> Result<u64, EstimatorError> {
        if xi >= q as f64 {
            return Err(EstimatorError::XiTooLarge { xi, q });
        }
        self.first_hit(|mu| sis_holds(na, nb, xi, q, mu))
    }

    /// `floor(0.265 * mu)`.
    pub fn coresvp(&self, mu: u64) -> u64 {
        (self.core_svp_exponent * mu as f64).floor() as u64
    }
}
