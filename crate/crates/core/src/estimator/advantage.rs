use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::EstimatorError;
use crate::scheme::ball_size;

/// Exact lower bound on the MLWE advantage obtained from a SelfTargetMSIS
/// adversary with advantage `eps` making `queries` hash queries:
///
/// ```text
/// A = eps - n q^-k,  S = (2Q + 1)^2
/// A / (4S) * (A/S - 1/|B_tau|) - 3^-w / 4
/// ```
///
/// The result may be negative.
pub fn advantage_lower_bound(
    eps: &BigRational,
    queries: &BigUint,
    n: usize,
    q: u64,
    k: u32,
    tau: usize,
    w: u32,
) -> Result<BigRational, EstimatorError> {
    if eps < &BigRational::zero() || eps > &BigRational::one() {
        return Err(EstimatorError::DomainError("eps must lie in [0, 1]".into()));
    }
    if queries.is_zero() || w == 0 {
        return Err(EstimatorError::DomainError("need Q >= 1 and w >= 1".into()));
    }
    if tau > n {
        return Err(EstimatorError::DomainError(format!("tau = {tau} exceeds n = {n}")));
    }
    let int = |x: BigUint| BigRational::from_integer(BigInt::from(x));
    let a = eps - BigRational::new(BigInt::from(n), BigInt::from(q).pow(k));
    let s = int((queries * 2u32 + 1u32).pow(2));
    let inv_ball = int(ball_size(n, tau)).recip();
    let tail = int(BigUint::from(3u32).pow(w)).recip() / BigRational::from_integer(4.into());
    let four = BigRational::from_integer(4.into());
    Ok(&a / (four * &s) * (&a / &s - inv_ball) - tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    const Q0: u64 = 12439554041857;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn zero_first_factor() {
        let eps = BigRational::new(512.into(), BigInt::from(Q0).pow(10));
        let got = advantage_lower_bound(&eps, &1u32.into(), 512, Q0, 10, 40, 7).unwrap();
        let want = -BigRational::new(1.into(), (4 * 3i64.pow(7)).into());
        assert_eq!(got, want);
    }

    #[test]
    fn anchor_at_eps_one() {
        let got = advantage_lower_bound(&rat(1, 1), &1u32.into(), 512, Q0, 10, 40, 200).unwrap();
        let v = got.to_f64().unwrap();
        assert!((v - 1.0 / 324.0).abs() < 1e-12, "{v}");
        assert!((v - 3.086e-3).abs() < 1e-6);
    }

    #[test]
    fn domain_errors() {
        let q: BigUint = 1u32.into();
        assert!(advantage_lower_bound(&rat(3, 2), &q, 512, Q0, 10, 40, 1).is_err());
        assert!(advantage_lower_bound(&rat(1, 2), &0u32.into(), 512, Q0, 10, 40, 1).is_err());
        assert!(advantage_lower_bound(&rat(1, 2), &q, 512, Q0, 10, 40, 0).is_err());
    }
}
