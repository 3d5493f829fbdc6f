use std::cmp::Ordering;
use std::ops::RangeInclusive;

use rayon::prelude::*;

use super::{
    alpha_lower_bound, dual_holds, expected_repeats, max_eta_prime, primal_holds, primal_xi,
    report_with, sis_holds, sizes, zeta_bounds, AttackModel, EstimatorError, SecurityReport,
    XiMode,
};
use crate::arith::{bits_for, prime_factors};
use crate::scheme::params::Q0;
use crate::scheme::ParameterSet;

/// Minimum Core-SVP values a candidate must reach.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Targets {
    pub lwe: u64,
    pub stmsis: i64,
    pub sis: u64,
}

impl Targets {
    /// Every Core-SVP value at least `log2 B_level`.
    pub fn nist(model: &AttackModel, level: u8) -> Result<Self, EstimatorError> {
        let b = model.log2_query_bound(level)?;
        Ok(Targets {
            lwe: b as u64,
            stmsis: b as i64,
            sis: b as u64,
        })
    }

    /// The LWE and SIS Core-SVP of the original Dilithium set at this level;
    /// the SelfTargetMSIS target is the SIS value. Levels 2, 3 and 5 only.
    pub fn dilithium_match(level: u8) -> Result<Self, EstimatorError> {
        let (lwe, sis) = match level {
            2 => (118, 96),
            3 => (177, 141),
            5 => (241, 204),
            _ => return Err(EstimatorError::UnknownLevel(level)),
        };
        Ok(Targets {
            lwe,
            stmsis: sis as i64,
            sis,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchSpace {
    pub q: u64,
    pub n: usize,
    pub d: u32,
    pub tau: usize,
    pub k_range: RangeInclusive<usize>,
    pub l_range: RangeInclusive<usize>,
    /// `gamma2` ranges over divisors of `(q - 1) / 2` inside this interval.
    pub gamma2_range: RangeInclusive<u64>,
    pub etas: Vec<u64>,
    pub level: u8,
    pub targets: Targets,
    /// eta' is the largest value with `divisor * 2 zeta eta' n (k+l+1) < floor(q/32)`.
    pub eta_prime_divisor: u64,
    pub xi_mode: XiMode,
}

impl SearchSpace {
    /// `q0`, `n = 512`, `d = 15`, `tau = 40`, `k, l <= 16`,
    /// `gamma2 in [2^17, 2^21]`, `eta in {2, 4}`.
    pub fn standard(level: u8, targets: Targets) -> Self {
        SearchSpace {
            q: Q0,
            n: 512,
            d: 15,
            tau: 40,
            k_range: 1..=16,
            l_range: 1..=16,
            gamma2_range: (1 << 17)..=(1 << 21),
            etas: vec![2, 4],
            level,
            targets,
            eta_prime_divisor: 1,
            xi_mode: XiMode::Bound,
        }
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for p in prime_factors(n) {
        let mut e = 0;
        let mut m = n;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        let prev = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            out.extend(prev.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

/// `ceil(gamma2 / 2)` and the largest `gamma1` with the same encoded width
/// whose `alpha` bound still reaches 257.
fn gamma1_candidates(base: &ParameterSet) -> Vec<u64> {
    let low = base.gamma2.div_ceil(2);
    let width = bits_for(2 * low);
    let alpha_ok = |g1: u64| {
        let p = ParameterSet {
            gamma1: g1,
            ..base.clone()
        };
        alpha_lower_bound(&p) >= 257.0
    };
    if !alpha_ok(low) {
        return Vec::new();
    }
    // alpha decreases in gamma1, so bisect between a passing and a failing value.
    let cap = 1u64 << (width - 1);
    let hi = if alpha_ok(cap) {
        cap
    } else {
        let (mut ok, mut bad) = (low, cap);
        while bad - ok > 1 {
            let mid = ok + (bad - ok) / 2;
            if alpha_ok(mid) {
                ok = mid;
            } else {
                bad = mid;
            }
        }
        ok
    };
    if hi > low {
        vec![low, hi]
    } else {
        vec![low]
    }
}

/// Smallest block size whose score reaches `target`.
fn threshold(model: &AttackModel, score: impl Fn(u64) -> i64, target: i64) -> u64 {
    (model.mu_min..=model.mu_max)
        .find(|&mu| score(mu) >= target)
        .unwrap_or(model.mu_max + 1)
}

/// With monotone inequalities, the estimated block size is at least
/// `mu_t` iff the attack does not yet succeed at `mu_t - 1`.
fn lwe_at_least(na: usize, nb: usize, eps: f64, q: u64, mode: XiMode, mu_t: u64, model: &AttackModel) -> bool {
    if mu_t <= model.mu_min {
        return true;
    }
    let mu = mu_t - 1;
    !primal_holds(na, nb, primal_xi(eps, mode), q, mu) && !dual_holds(na, nb, eps, q, mu)
}

struct Thresholds {
    lwe: u64,
    stmsis: u64,
    sis: u64,
}

fn quick_feasible(p: &ParameterSet, space: &SearchSpace, model: &AttackModel, t: &Thresholds) -> bool {
    let mode = space.xi_mode;
    let eta_prime = p.eta_prime.expect("candidates carry eta'");
    let (_, zeta_prime) = zeta_bounds(p);
    if zeta_prime >= p.q {
        return false;
    }
    lwe_at_least(p.n * p.k, p.n * p.l, p.eta as f64, p.q, mode, t.lwe, model)
        && (t.sis <= model.mu_min || !sis_holds(p.n * p.k, p.n * p.l, zeta_prime as f64, p.q, t.sis - 1))
        && lwe_at_least(p.n * (p.k + p.l + 1), p.n * p.k, eta_prime as f64, p.q, mode, t.stmsis, model)
}

fn meets(r: &SecurityReport, t: &Targets) -> bool {
    r.lwe_coresvp >= t.lwe
        && r.stmsis_coresvp.is_some_and(|c| c >= t.stmsis)
        && r.sis_coresvp.is_some_and(|c| c >= t.sis)
        && r.is_valid()
}

fn candidates(space: &SearchSpace) -> Vec<ParameterSet> {
    let q = space.q;
    let gamma2s: Vec<u64> = divisors((q - 1) / 2)
        .into_iter()
        .filter(|g| space.gamma2_range.contains(g) && q > 4 * g)
        .collect();
    let mut out = Vec::new();
    for k in space.k_range.clone() {
        for l in space.l_range.clone() {
            for &gamma2 in &gamma2s {
                for &eta in &space.etas {
                    let beta = space.tau as u64 * eta;
                    if gamma2 <= beta {
                        continue;
                    }
                    let base = ParameterSet {
                        name: format!("search-sl{}", space.level),
                        level: Some(space.level),
                        q,
                        n: space.n,
                        k,
                        l,
                        d: space.d,
                        tau: space.tau,
                        gamma1: gamma2.div_ceil(2),
                        gamma2,
                        eta,
                        eta_prime: None,
                        beta,
                    };
                    for gamma1 in gamma1_candidates(&base) {
                        if gamma1 <= beta {
                            continue;
                        }
                        let mut p = ParameterSet { gamma1, ..base.clone() };
                        let Some(ep) = max_eta_prime(&p, space.eta_prime_divisor) else {
                            continue;
                        };
                        p.eta_prime = Some(ep);
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn order(a: &(ParameterSet, u64, u64, f64), b: &(ParameterSet, u64, u64, f64)) -> Ordering {
    (a.1, a.2)
        .cmp(&(b.1, b.2))
        .then(a.3.total_cmp(&b.3))
        .then_with(|| {
            let key = |p: &ParameterSet| (p.k, p.l, p.gamma2, p.gamma1, p.eta);
            key(&a.0).cmp(&key(&b.0))
        })
}

/// Lexicographically smallest `(pk_bytes, sig_bytes, repeats)` among
/// candidates meeting every target. Candidates are screened in parallel;
/// the winner does not depend on the worker count.
pub fn search(
    space: &SearchSpace,
    model: &AttackModel,
) -> Result<(ParameterSet, SecurityReport), EstimatorError> {
    if space.n == 0 || !space.n.is_power_of_two() || space.q < 3 || space.eta_prime_divisor == 0 {
        return Err(EstimatorError::DomainError("need n a power of two, q >= 3, divisor >= 1".into()));
    }
    let log2_b = model.log2_query_bound(space.level)?;
    let t = &space.targets;
    let th = Thresholds {
        lwe: threshold(model, |mu| model.coresvp(mu) as i64, t.lwe as i64),
        stmsis: threshold(model, |mu| model.stmsis_coresvp_from_blocksize(mu, log2_b), t.stmsis),
        sis: threshold(model, |mu| model.coresvp(mu) as i64, t.sis as i64),
    };

    let mut screened: Vec<(ParameterSet, u64, u64, f64)> = candidates(space)
        .into_par_iter()
        .filter(|p| quick_feasible(p, space, model, &th))
        .map(|p| {
            let (pk, sig) = sizes(&p);
            let rep = expected_repeats(&p);
            (p, pk, sig, rep)
        })
        .collect();
    screened.sort_by(order);

    for (p, ..) in screened {
        let r = report_with(&p, model, space.xi_mode)?;
        if meets(&r, t) {
            return Ok((p, r));
        }
    }
    Err(EstimatorError::NoFeasiblePoint)
}
