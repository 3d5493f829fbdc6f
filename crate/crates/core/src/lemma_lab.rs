//! Brute-force checks of the classical lemmas behind the security reduction,
//! at toy moduli.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{is_prime, pow_mod, Modulus};
use crate::estimator::Constraint;
use crate::ring::{schoolbook_mul, RingContext, RingError, RingVector};

/// Uniformity sweeps above this many basic operations fall back to sampling.
pub const SWEEP_OP_THRESHOLD: u128 = 1 << 33;
/// Largest `q^(n l)` the uniformity enumeration accepts.
pub const ENUMERATION_CAP: u128 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LemmaError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("enumeration of {size} elements exceeds the cap of {cap}")]
    TooLarge { size: u128, cap: u128 },
    #[error("delta must be nonzero")]
    ZeroDelta,
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// The hypotheses `q >= 16` and `2 gamma eta n (m + k) < floor(q/32)`.
pub fn theorem_hypotheses(q: u64, n: usize, m: usize, k: usize, gamma: u64, eta: u64) -> Vec<Constraint> {
    let lhs = 2 * gamma as u128 * eta as u128 * n as u128 * (m + k) as u128;
    let rhs = (q / 32) as u128;
    vec![
        Constraint::check("q_ge_16", q >= 16, format!("q = {q}")),
        Constraint::check(
            "eta_prime_bound",
            lhs < rhs,
            format!("2*gamma*eta*n*(m+k) = {lhs}, floor(q/32) = {rhs}"),
        ),
    ]
}

/// Partition of `Z_q` into `t` consecutive buckets of `floor(q/t)`
/// elements, the last one absorbing the remainder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundingSpec {
    pub q: u64,
    pub t: u64,
    /// Inclusive `(first, last)` of each bucket.
    pub bucket_edges: Vec<(u64, u64)>,
}

impl RoundingSpec {
    pub fn new(q: u64, t: u64) -> Result<Self, LemmaError> {
        if q < 3 || q % 2 == 0 || !is_prime(q) {
            return Err(LemmaError::PreconditionViolated(format!("q = {q} is not an odd prime")));
        }
        if t == 0 || t > q {
            return Err(LemmaError::PreconditionViolated(format!("need 1 <= t <= q, got t = {t}")));
        }
        let w = q / t;
        let bucket_edges = (0..t)
            .map(|j| (j * w, if j + 1 == t { q - 1 } else { (j + 1) * w - 1 }))
            .collect();
        Ok(RoundingSpec { q, t, bucket_edges })
    }

    pub fn bucket_len(&self, j: usize) -> u64 {
        let (a, b) = self.bucket_edges[j];
        b - a + 1
    }

    /// The bucket index of `a mod q`.
    pub fn round(&self, a: u64) -> u64 {
        ((a % self.q) / (self.q / self.t)).min(self.t - 1)
    }

    fn require_lemma_hypothesis(&self) -> Result<(), LemmaError> {
        if self.t * self.t > self.q {
            return Err(LemmaError::PreconditionViolated(format!(
                "t^2 = {} exceeds q = {}",
                self.t * self.t,
                self.q
            )));
        }
        Ok(())
    }
}

fn ratio(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `1 - ((t-1) w/q (q-w)/q + L/q (q-L)/q)` with `w = floor(q/t)`, `L = |I_(t-1)|`.
pub fn p_t_exact(spec: &RoundingSpec) -> Result<BigRational, LemmaError> {
    spec.require_lemma_hypothesis()?;
    let (q, t) = (spec.q, spec.t);
    let w = q / t;
    let last = spec.bucket_len(t as usize - 1);
    let inner = ratio((t - 1) * w * (q - w), q * q) + ratio(last * (q - last), q * q);
    Ok(BigRational::one() - inner)
}

/// Fraction of `(u, v) in Z_q^2` with `round(u) = round(u + v)`.
pub fn p_t_bruteforce(spec: &RoundingSpec) -> Result<BigRational, LemmaError> {
    spec.require_lemma_hypothesis()?;
    let q = spec.q;
    let mut hits = 0u64;
    for u in 0..q {
        let ru = spec.round(u);
        for v in 0..q {
            if spec.round((u + v) % q) == ru {
                hits += 1;
            }
        }
    }
    Ok(ratio(hits, q * q))
}

/// Coefficient vector `c` with `(b . delta)_alpha = sum_(j,i) b_(j,i) c_(j,i)`,
/// read off from products with monomials.
fn coefficient_functional(ctx: &RingContext, delta: &RingVector, alpha: usize) -> Vec<u64> {
    let q = ctx.q();
    let n = ctx.n();
    let mut out = Vec::with_capacity(n * delta.len());
    for d in delta.iter() {
        for i in 0..n {
            let mut x_i = vec![0u64; n];
            x_i[i] = 1;
            out.push(schoolbook_mul(&x_i, d.coeffs(), q)[alpha]);
        }
    }
    out
}

/// Tally of `(b . delta)_alpha` over every `b in R_q^l`, indexed by value.
fn tally(q: u64, c: &[u64]) -> Vec<u64> {
    let q_us = q as usize;
    let mut counts = vec![0u64; q_us];
    let (inner, outer) = c.split_first().expect("nonempty functional");
    let step: Vec<usize> = (0..q).map(|v| (v * inner % q) as usize).collect();
    let outer_count = (q as u128).pow(outer.len() as u32) as u64;
    let mut digits = vec![0u64; outer.len()];
    let mut base = 0usize;
    for _ in 0..outer_count {
        for &s in &step {
            let v = base + s;
            counts[if v >= q_us { v - q_us } else { v }] += 1;
        }
        // Odometer increment over the outer digits, keeping `base` in sync.
        for (d, &cj) in digits.iter_mut().zip(outer) {
            *d += 1;
            base = (base + cj as usize) % q_us;
            if *d < q {
                break;
            }
            *d = 0;
        }
    }
    counts
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniformityResult {
    pub passed: bool,
    pub expected_count: u64,
    pub min_count: u64,
    pub max_count: u64,
}

/// Enumerates every `b in R_q^l` and checks that `(b . delta)_alpha` hits
/// each residue exactly `q^(n l - 1)` times.
pub fn uniformity_check(
    ctx: &RingContext,
    l: usize,
    delta: &RingVector,
    alpha: usize,
) -> Result<UniformityResult, LemmaError> {
    let (q, n) = (ctx.q(), ctx.n());
    if delta.len() != l {
        return Err(LemmaError::PreconditionViolated(format!(
            "delta has {} entries, expected {l}",
            delta.len()
        )));
    }
    if alpha >= n {
        return Err(LemmaError::PreconditionViolated(format!("alpha = {alpha} >= n = {n}")));
    }
    if let Some(d) = delta.iter().find(|d| d.len() != n) {
        return Err(RingError::DimensionMismatch { expected: n, got: d.len() }.into());
    }
    if delta.is_zero() {
        return Err(LemmaError::ZeroDelta);
    }
    let size = (q as u128).checked_pow((n * l) as u32).unwrap_or(u128::MAX);
    if size > ENUMERATION_CAP {
        return Err(LemmaError::TooLarge {
            size,
            cap: ENUMERATION_CAP,
        });
    }
    let c = coefficient_functional(ctx, delta, alpha);
    let counts = tally(q, &c);
    let expected = (size / q as u128) as u64;
    let min_count = *counts.iter().min().expect("q > 0");
    let max_count = *counts.iter().max().expect("q > 0");
    Ok(UniformityResult {
        passed: min_count == expected && max_count == expected,
        expected_count: expected,
        min_count,
        max_count,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMode {
    /// Every nonzero `delta` in `R_q^l`.
    Full,
    /// `count` nonzero `delta` drawn from a seeded RNG.
    Sampled { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepResult {
    pub mode: SweepMode,
    pub estimated_ops: u128,
    pub deltas_checked: u64,
    pub failures: u64,
    pub alpha: usize,
}

impl SweepResult {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.deltas_checked > 0
    }
}

/// `(number of nonzero deltas) * q^(n l)`.
pub fn full_sweep_ops(q: u64, n: usize, l: usize) -> u128 {
    let size = (q as u128).saturating_pow((n * l) as u32);
    (size - 1).saturating_mul(size)
}

/// Full sweep when it fits under [`SWEEP_OP_THRESHOLD`], otherwise 100 sampled deltas.
pub fn default_sweep_mode(q: u64, n: usize, l: usize, seed: u64) -> SweepMode {
    if full_sweep_ops(q, n, l) <= SWEEP_OP_THRESHOLD {
        SweepMode::Full
    } else {
        SweepMode::Sampled { count: 100, seed }
    }
}

fn delta_from_index(ctx: &RingContext, l: usize, mut idx: u64) -> RingVector {
    let (q, n) = (ctx.q(), ctx.n());
    (0..l)
        .map(|_| {
            let coeffs = (0..n)
                .map(|_| {
                    let c = idx % q;
                    idx /= q;
                    c
                })
                .collect();
            ctx.element(coeffs).expect("digits are reduced")
        })
        .collect()
}

/// Runs [`uniformity_check`] over many deltas at coefficient `alpha`.
pub fn uniformity_sweep(
    ctx: &RingContext,
    l: usize,
    alpha: usize,
    mode: SweepMode,
) -> Result<SweepResult, LemmaError> {
    let (q, n) = (ctx.q(), ctx.n());
    let size = (q as u128).checked_pow((n * l) as u32).unwrap_or(u128::MAX);
    if size > ENUMERATION_CAP {
        return Err(LemmaError::TooLarge {
            size,
            cap: ENUMERATION_CAP,
        });
    }
    let size = size as u64;
    let indices: Vec<u64> = match mode {
        SweepMode::Full => (1..size).collect(),
        SweepMode::Sampled { count, seed } => {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            (0..count).map(|_| rng.gen_range(1..size)).collect()
        }
    };
    let failures = indices
        .par_iter()
        .map(|&idx| {
            let delta = delta_from_index(ctx, l, idx);
            uniformity_check(ctx, l, &delta, alpha).map(|r| u64::from(!r.passed))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(SweepResult {
        mode,
        estimated_ops: indices.len() as u128 * size as u128,
        deltas_checked: indices.len() as u64,
        failures,
        alpha,
    })
}

/// `phi(a)_i = sum_j a_j w^((2i+1) j)` as an explicit matrix.
fn phi_matrix(m: &Modulus, n: usize, w: u64) -> Vec<Vec<u64>> {
    (0..n)
        .map(|i| (0..n).map(|j| m.pow(w, ((2 * i + 1) * j) as u64)).collect())
        .collect()
}

/// `phi'(x)_j = n^-1 sum_i x_i w^(-(2i+1) j)`.
fn phi_inv_matrix(m: &Modulus, n: usize, w: u64) -> Vec<Vec<u64>> {
    let n_inv = m.inv(n as u64);
    let w_inv = m.inv(w);
    (0..n)
        .map(|j| (0..n).map(|i| m.mul(n_inv, m.pow(w_inv, ((2 * i + 1) * j) as u64))).collect())
        .collect()
}

fn apply(m: &Modulus, mat: &[Vec<u64>], v: &[u64]) -> Vec<u64> {
    mat.iter()
        .map(|row| row.iter().zip(v).fold(0, |acc, (&a, &b)| m.add(acc, m.mul(a, b))))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Every primitive `2n`-th root of unity mod `q`.
pub fn primitive_roots_of_unity(q: u64, n: usize) -> Vec<u64> {
    let two_n = 2 * n as u64;
    (1..q)
        .filter(|&w| pow_mod(w, two_n, q) == 1 && pow_mod(w, two_n / 2, q) == q - 1)
        .collect()
}

/// `sum_(j<n) w^(2mj) = 0` for every primitive `2n`-th root `w` and `0 < |m| < n`.
pub fn primitive_sum_check(q: u64, n: usize) -> Check {
    let roots = primitive_roots_of_unity(q, n);
    let mut bad = Vec::new();
    for &w in &roots {
        let w_inv = pow_mod(w, q - 2, q);
        for m in 1..n as u64 {
            for base in [w, w_inv] {
                let s = (0..n as u64).fold(0u64, |acc, j| (acc + pow_mod(base, 2 * m * j, q)) % q);
                if s != 0 {
                    bad.push((w, m));
                }
            }
        }
    }
    Check::new(
        "primitive_root_sums_vanish",
        bad.is_empty() && !roots.is_empty(),
        format!("{} roots, |m| in 1..{n}, failures {bad:?}", roots.len()),
    )
}

/// Exhaustive `phi'(phi(a)) = a`, `phi(phi'(x)) = x` and `phi = NTT` over all
/// of `R_q`, plus multiplicativity on `pairs` random products.
pub fn isomorphism_exhaustive(ctx: &RingContext, pairs: usize, seed: u64) -> Result<Vec<Check>, LemmaError> {
    let (q, n) = (ctx.q(), ctx.n());
    let size = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > ENUMERATION_CAP {
        return Err(LemmaError::TooLarge {
            size,
            cap: ENUMERATION_CAP,
        });
    }
    let m = ctx.modulus();
    let w = ctx.root();
    let phi = phi_matrix(m, n, w);
    let phi_inv = phi_inv_matrix(m, n, w);
    let digits = |mut idx: u64| -> Vec<u64> {
        (0..n)
            .map(|_| {
                let d = idx % q;
                idx /= q;
                d
            })
            .collect()
    };

    let (mut left, mut right, mut ntt) = (0u64, 0u64, 0u64);
    for idx in 0..size as u64 {
        let a = digits(idx);
        let fa = apply(m, &phi, &a);
        left += u64::from(apply(m, &phi_inv, &fa) != a);
        right += u64::from(apply(m, &phi, &apply(m, &phi_inv, &a)) != a);
        let hat = ctx.ntt_forward(&ctx.element(a)?)?;
        ntt += u64::from(hat.coeffs() != fa.as_slice());
    }

    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut mult = 0u64;
    for _ in 0..pairs {
        let a: Vec<u64> = (0..n).map(|_| rng.gen_range(0..q)).collect();
        let b: Vec<u64> = (0..n).map(|_| rng.gen_range(0..q)).collect();
        let lhs = apply(m, &phi, &schoolbook_mul(&a, &b, q));
        let (fa, fb) = (apply(m, &phi, &a), apply(m, &phi, &b));
        let rhs: Vec<u64> = fa.iter().zip(&fb).map(|(&x, &y)| m.mul(x, y)).collect();
        mult += u64::from(lhs != rhs);
    }

    let zero = vec![0u64; n];
    Ok(vec![
        Check::new("phi_inv_after_phi", left == 0, format!("{size} elements, {left} failures")),
        Check::new("phi_after_phi_inv", right == 0, format!("{size} elements, {right} failures")),
        Check::new("ntt_equals_phi", ntt == 0, format!("{size} elements, {ntt} failures")),
        Check::new(
            "phi_multiplicative",
            mult == 0,
            format!("{pairs} random pairs, {mult} failures"),
        ),
        Check::new("phi_of_zero", apply(m, &phi, &zero) == zero, "phi(0) = 0"),
        primitive_sum_check(q, n),
    ])
}

/// Odd primes in `[lo, hi]`.
pub fn odd_primes(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(3)..=hi).filter(|&p| p % 2 == 1 && is_prime(p)).collect()
}

/// For every odd prime `q` in `qs` and every `t` with `t^2 <= q`: closed form
/// equals brute force, `p_t <= 2/t` and `p_t <= 1/t + t/q`.
pub fn rounding_suite(qs: &[u64]) -> Result<Vec<Check>, LemmaError> {
    let mut out = Vec::new();
    for &q in qs {
        for t in (1..).take_while(|t| t * t <= q) {
            let spec = RoundingSpec::new(q, t)?;
            let exact = p_t_exact(&spec)?;
            let brute = p_t_bruteforce(&spec)?;
            let two_over_t = ratio(2, t);
            let proof_bound = ratio(1, t) + ratio(t, q);
            let ok = exact == brute && exact <= two_over_t && exact <= proof_bound && !exact.is_zero();
            out.push(Check::new(
                format!("p_t q={q} t={t}"),
                ok,
                format!("p_t = {exact} ({:.5})", exact.to_f64().unwrap_or(f64::NAN)),
            ));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Rounding,
    Uniformity,
    Ntt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uniformity: Option<SweepResult>,
}

/// Runs one suite (or all of them) at the standard toy sizes:
/// primes in `[17, 97]` for rounding, `(q, n, l) = (17, 4, 1)` elsewhere.
/// The uniformity suite sweeps coefficient 0 in `uniformity_mode` (by
/// default chosen from [`SWEEP_OP_THRESHOLD`]) and checks 100 random deltas
/// at every coefficient.
pub fn run_suite(suite: Suite, uniformity_mode: Option<SweepMode>) -> Result<Vec<SuiteReport>, LemmaError> {
    let mut out = Vec::new();
    let wrap = |name: &str, checks: Vec<Check>, uniformity| SuiteReport {
        suite: name.to_string(),
        passed: checks.iter().all(|c| c.passed),
        checks,
        uniformity,
    };
    if matches!(suite, Suite::All | Suite::Rounding) {
        out.push(wrap("rounding", rounding_suite(&odd_primes(17, 97))?, None));
    }
    if matches!(suite, Suite::All | Suite::Uniformity) {
        let ctx = RingContext::new(17, 4)?;
        let mode = uniformity_mode.unwrap_or_else(|| default_sweep_mode(17, 4, 1, 1));
        let sweep = uniformity_sweep(&ctx, 1, 0, mode)?;
        let mut checks = vec![Check::new(
            "uniform alpha=0",
            sweep.passed(),
            format!("{:?}: {} deltas, {} failures", sweep.mode, sweep.deltas_checked, sweep.failures),
        )];
        for alpha in 0..4 {
            let r = uniformity_sweep(&ctx, 1, alpha, SweepMode::Sampled { count: 100, seed: alpha as u64 })?;
            checks.push(Check::new(
                format!("uniform alpha={alpha} sampled"),
                r.passed(),
                format!("{} random deltas, {} failures", r.deltas_checked, r.failures),
            ));
        }
        let report = wrap("uniformity", checks, Some(sweep));
        out.push(report);
    }
    if matches!(suite, Suite::All | Suite::Ntt) {
        let ctx = RingContext::new(17, 4)?;
        out.push(wrap("ntt", isomorphism_exhaustive(&ctx, 10_000, 7)?, None));
    }
    Ok(out)
}
