//! `Z_q` operation counts for ring multiplication and for key generation,
//! signing and verification.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::estimator::expected_repeats;
use crate::scheme::ParameterSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OpCountError {
    #[error("H-NTT cost at n = {n}, (alpha, beta) = ({a}, {b}) is not an integer")]
    NonIntegralCost { n: usize, a: u32, b: u32 },
    #[error("n = {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("no valid (alpha, beta) for n = {n}, q = {q}")]
    NoHnttSplit { n: usize, q: u64 },
}

/// `Z_q` multiplications and additions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CostPair {
    pub mults: u64,
    pub adds: u64,
}

fn log2_exact(n: usize) -> Result<u64, OpCountError> {
    if n == 0 || !n.is_power_of_two() {
        return Err(OpCountError::NotPowerOfTwo(n));
    }
    Ok(n.trailing_zeros() as u64)
}

/// `(3/2 n log n + 2n, 3 n log n)`.
pub fn ntt_mul_cost(n: usize) -> Result<CostPair, OpCountError> {
    let log_n = log2_exact(n)?;
    let n = n as u64;
    Ok(CostPair {
        mults: 3 * n * log_n / 2 + 2 * n,
        adds: 3 * n * log_n,
    })
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pow2(e: i64) -> BigRational {
    let p = BigRational::from_integer(BigInt::one() << e.unsigned_abs());
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

/// Per-`n` coefficients of the H-NTT cost beyond the NTT-like `n log n` terms:
///
/// ```text
/// mults: 3 2^(a+b-3) + 2^(a-2) + 3 2^(b-3) + 2^(a-b-2) - 3/2 (a+b) + 5/4
/// adds:  5 2^(a+b-2) + 5 2^(b-2) + 5 2^(a-2) - 3 (a+b) - 15/4
/// ```
pub fn hntt_coefficients(a: u32, b: u32) -> (BigRational, BigRational) {
    let (a, b) = (a as i64, b as i64);
    let three = rat(3, 1);
    let five = rat(5, 1);
    let mults = &three * pow2(a + b - 3) + pow2(a - 2) + &three * pow2(b - 3) + pow2(a - b - 2)
        - rat(3 * (a + b), 2)
        + rat(5, 4);
    let adds = &five * pow2(a + b - 2) + &five * pow2(b - 2) + &five * pow2(a - 2)
        - rat(3 * (a + b), 1)
        - rat(15, 4);
    (mults, adds)
}

fn to_u64_exact(x: &BigRational) -> Option<u64> {
    (x.is_integer() && !x.is_negative()).then(|| x.to_integer().to_u64()).flatten()
}

/// `3/2 n log n + c_mul n` multiplications and `3 n log n + c_add n` additions.
pub fn hntt_mul_cost(n: usize, a: u32, b: u32) -> Result<CostPair, OpCountError> {
    let log_n = log2_exact(n)? as i64;
    let n_i = n as i64;
    let (cm, ca) = hntt_coefficients(a, b);
    let nn = rat(n_i, 1);
    let mults = rat(3 * n_i * log_n, 2) + cm * &nn;
    let adds = rat(3 * n_i * log_n, 1) + ca * &nn;
    match (to_u64_exact(&mults), to_u64_exact(&adds)) {
        (Some(mults), Some(adds)) => Ok(CostPair { mults, adds }),
        _ => Err(OpCountError::NonIntegralCost { n, a, b }),
    }
}

/// Values of `a + b` for which `q = 1 mod (n / 2^(a+b-1))` with the modulus a positive integer.
pub fn hntt_valid_sums(n: usize, q: u64) -> Result<Vec<u32>, OpCountError> {
    let log_n = log2_exact(n)? as u32;
    Ok((1..=log_n + 1)
        .filter(|&s| {
            let m = (n >> (s - 1)) as u64;
            q % m == 1 % m
        })
        .collect())
}

/// The `(a, b)` over all valid sums minimising `(mults, adds)`, first in
/// `(a, b)` order on ties. Non-integral splits are skipped.
pub fn hntt_best(n: usize, q: u64) -> Result<((u32, u32), CostPair), OpCountError> {
    let mut best: Option<((u32, u32), CostPair)> = None;
    for s in hntt_valid_sums(n, q)? {
        for a in 0..=s {
            let Ok(cost) = hntt_mul_cost(n, a, s - a) else {
                continue;
            };
            if best.is_none_or(|(_, c)| (cost.mults, cost.adds) < (c.mults, c.adds)) {
                best = Some(((a, s - a), cost));
            }
        }
    }
    best.ok_or(OpCountError::NoHnttSplit { n, q })
}

/// Per-phase values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Phases<T> {
    pub gen: T,
    pub sign: T,
    pub verify: T,
}

/// Repeats rounded to two decimals, as an exact fraction.
pub fn repeats_hundredths(r: f64) -> BigRational {
    rat((r * 100.0).round() as i64, 100)
}

/// Ring multiplications `{kl, (kl+k+l) r, kl+k}` and ring additions
/// `{kl, (kl+l) r, kl}`; `r` is rounded to two decimals.
pub fn scheme_ring_op_counts(k: usize, l: usize, r: f64) -> (Phases<BigRational>, Phases<BigRational>) {
    let (k, l) = (k as i64, l as i64);
    let r = repeats_hundredths(r);
    let int = |x: i64| rat(x, 1);
    let mults = Phases {
        gen: int(k * l),
        sign: int(k * l + k + l) * &r,
        verify: int(k * l + k),
    };
    let adds = Phases {
        gen: int(k * l),
        sign: int(k * l + l) * &r,
        verify: int(k * l),
    };
    (mults, adds)
}

/// Nearest integer, halves rounded up.
fn round_nearest(x: &BigRational) -> u64 {
    let two = BigInt::from(2);
    let num = x.numer() * &two + x.denom();
    let den = x.denom() * two;
    num.div_floor(&den).to_u64().expect("nonnegative count fits in u64")
}

/// `Z_q` totals per phase: ring multiplications times `cost`, plus `n`
/// additions per ring addition.
pub fn zq_op_table(p: &ParameterSet, cost: CostPair, r: f64) -> Phases<CostPair> {
    let (rm, ra) = scheme_ring_op_counts(p.k, p.l, r);
    let cm = rat(cost.mults as i64, 1);
    let ca = rat(cost.adds as i64, 1);
    let n = rat(p.n as i64, 1);
    let total = |m: &BigRational, a: &BigRational| CostPair {
        mults: round_nearest(&(m * &cm)),
        adds: round_nearest(&(m * &ca + a * &n)),
    };
    Phases {
        gen: total(&rm.gen, &ra.gen),
        sign: total(&rm.sign, &ra.sign),
        verify: total(&rm.verify, &ra.verify),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MulMethod {
    Ntt,
    /// H-NTT with the cheapest `(alpha, beta)` for the set's modulus.
    Hntt,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OpTableColumn {
    pub name: String,
    pub method: MulMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<(u32, u32)>,
    pub ring_mul_cost: CostPair,
    pub repeats: f64,
    pub phases: Phases<CostPair>,
}

/// One column of the op-count table, with repeats from the expected-repeat formula.
pub fn op_table_column(p: &ParameterSet, method: MulMethod) -> Result<OpTableColumn, OpCountError> {
    let (split, cost) = match method {
        MulMethod::Ntt => (None, ntt_mul_cost(p.n)?),
        MulMethod::Hntt => {
            let (split, cost) = hntt_best(p.n, p.q)?;
            (Some(split), cost)
        }
    };
    let repeats = (expected_repeats(p) * 100.0).round() / 100.0;
    Ok(OpTableColumn {
        name: p.name.clone(),
        method,
        split,
        ring_mul_cost: cost,
        repeats,
        phases: zq_op_table(p, cost, repeats),
    })
}

/// `kind,phase,<column names...>` with one row per (kind, phase).
pub fn op_table_csv(cols: &[OpTableColumn]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["kind".to_string(), "phase".to_string()];
    header.extend(cols.iter().map(|c| c.name.clone()));
    w.write_record(&header).expect("in-memory csv write");
    type Pick = fn(&CostPair) -> u64;
    let kinds: [(&str, Pick); 2] = [("mults", |c| c.mults), ("adds", |c| c.adds)];
    for (kind, pick) in kinds {
        for phase in ["gen", "sign", "verify"] {
            let mut row = vec![kind.to_string(), phase.to_string()];
            for c in cols {
                let v = match phase {
                    "gen" => &c.phases.gen,
                    "sign" => &c.phases.sign,
                    _ => &c.phases.verify,
                };
                row.push(pick(v).to_string());
            }
            w.write_record(&row).expect("in-memory csv write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("csv is utf-8")
}

pub fn op_table_json(cols: &[OpTableColumn]) -> String {
    serde_json::to_string_pretty(cols).expect("op tables always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::scheme::builtin;

    #[test]
    fn ntt_costs() {
        assert_eq!(ntt_mul_cost(512).unwrap(), CostPair { mults: 7936, adds: 13824 });
        assert_eq!(ntt_mul_cost(2).unwrap(), CostPair { mults: 7, adds: 6 });
        assert_eq!(ntt_mul_cost(1024).unwrap(), CostPair { mults: 17408, adds: 30720 });
        assert!(ntt_mul_cost(12).is_err());
    }

    #[test]
    fn hntt_anchor() {
        assert_eq!(hntt_mul_cost(512, 4, 4).unwrap(), CostPair { mults: 55808, adds: 183936 });
        let (m, a) = hntt_coefficients(4, 4);
        assert_eq!(m, rat(191, 2));
        assert_eq!(a, rat(1329, 4));
    }

    #[test]
    fn hntt_non_integral() {
        // 2^(a-b-2) = 2^-12 leaves a fraction at n = 512.
        assert_eq!(
            hntt_mul_cost(512, 0, 10),
            Err(OpCountError::NonIntegralCost { n: 512, a: 0, b: 10 })
        );
    }

    #[test]
    fn hntt_minimiser_for_qrom_modulus() {
        let q = (1u64 << 45) - 21283;
        assert_eq!(hntt_valid_sums(512, q).unwrap(), vec![8, 9, 10]);
        let (split, cost) = hntt_best(512, q).unwrap();
        assert_eq!(split, (4, 4));
        assert_eq!(cost, CostPair { mults: 55808, adds: 183936 });
        // (4, 4) also minimises additions on its own.
        for s in [8u32, 9, 10] {
            for a in 0..=s {
                if let Ok(c) = hntt_mul_cost(512, a, s - a) {
                    assert!(c.adds >= cost.adds && c.mults >= cost.mults, "({a}, {})", s - a);
                }
            }
        }
    }

    #[test]
    fn ring_counts() {
        let (m, _) = scheme_ring_op_counts(12, 5, 5.03);
        assert_eq!(m.gen, rat(60, 1));
        let (m, _) = scheme_ring_op_counts(4, 4, 4.29);
        assert_eq!(m.sign, rat(10296, 100));
        let (m, a) = scheme_ring_op_counts(4, 4, 0.0);
        assert!(m.sign.is_zero() && a.sign.is_zero());
    }

    #[test]
    fn table_cells() {
        let qrec = builtin("qrom-rec").unwrap().params;
        let col = op_table_column(&qrec, MulMethod::Hntt).unwrap();
        assert_eq!(col.phases.gen, CostPair { mults: 892928, adds: 2951168 });
        let orec = builtin("ours-rec").unwrap().params;
        let col = op_table_column(&orec, MulMethod::Ntt).unwrap();
        assert_eq!(col.phases.sign, CostPair { mults: 3073692, adds: 5521572 });
        assert_eq!(col.phases.verify, CostPair { mults: 571392, adds: 1026048 });
    }

    #[test]
    fn rounding_is_half_up() {
        assert_eq!(round_nearest(&rat(5, 2)), 3);
        assert_eq!(round_nearest(&rat(249, 100)), 2);
        assert_eq!(round_nearest(&rat(3073692_16, 100)), 3073692);
    }

    #[test]
    fn csv_layout() {
        let cols: Vec<_> = ["qrom-rec", "ours-rec"]
            .iter()
            .zip([MulMethod::Hntt, MulMethod::Ntt])
            .map(|(id, m)| op_table_column(&builtin(id).unwrap().params, m).unwrap())
            .collect();
        let csv = op_table_csv(&cols);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "kind,phase,qrom-rec,ours-rec");
        assert_eq!(lines[1], "mults,gen,892928,476160");
        assert_eq!(lines.len(), 7);
    }
}
