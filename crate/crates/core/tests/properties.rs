use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use ntt_dilithium::estimator::AttackModel;
use ntt_dilithium::estimator::XiMode;
use ntt_dilithium::lemma_lab::{odd_primes, p_t_bruteforce, p_t_exact, RoundingSpec};
use ntt_dilithium::opcounts::{ntt_mul_cost, zq_op_table};
use ntt_dilithium::ring::{schoolbook_mul, RingContext};
use ntt_dilithium::scheme::params::Q0;
use ntt_dilithium::scheme::{builtin, sample_in_ball, Decomposer};

fn coeffs(n: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0..Q0, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ntt_product_matches_schoolbook(log_n in 1u32..=6, seed in any::<u64>()) {
        let n = 1usize << log_n;
        let ctx = RingContext::new(Q0, n).unwrap();
        let mut x = seed;
        let mut next = || { x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); (x >> 20) % Q0 };
        let a = ctx.element((0..n).map(|_| next()).collect()).unwrap();
        let b = ctx.element((0..n).map(|_| next()).collect()).unwrap();
        let ab = ctx.mul(&a, &b).unwrap();
        prop_assert_eq!(ab.coeffs(), &schoolbook_mul(a.coeffs(), b.coeffs(), Q0)[..]);
        prop_assert_eq!(ctx.mul(&b, &a).unwrap(), ab);
    }

    #[test]
    fn multiplication_distributes(a in coeffs(32), b in coeffs(32), c in coeffs(32)) {
        let ctx = RingContext::new(Q0, 32).unwrap();
        let (a, b, c) = (ctx.element(a).unwrap(), ctx.element(b).unwrap(), ctx.element(c).unwrap());
        let lhs = ctx.mul(&a, &ctx.add(&b, &c).unwrap()).unwrap();
        let rhs = ctx.add(&ctx.mul(&a, &b).unwrap(), &ctx.mul(&a, &c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ntt_roundtrip(a in coeffs(512)) {
        let ctx = RingContext::new(Q0, 512).unwrap();
        let a = ctx.element(a).unwrap();
        prop_assert_eq!(ctx.ntt_inverse(&ctx.ntt_forward(&a).unwrap()).unwrap(), a);
    }

    #[test]
    fn decomposition_recombines(r in 0..Q0, which in 0usize..5) {
        let id = ["ours-sl2", "ours-sl3", "ours-sl5", "ours-rec", "nist-sl2"][which];
        let gamma2 = builtin(id).unwrap().params.gamma2;
        let d = Decomposer::new(Q0, gamma2).unwrap();
        let (high, low) = d.decompose(r);
        prop_assert!(high < d.buckets());
        prop_assert!(low.unsigned_abs() <= gamma2);
        let back = (high as i128 * 2 * gamma2 as i128 + low as i128).rem_euclid(Q0 as i128);
        prop_assert_eq!(back as u64, r);
    }

    #[test]
    fn challenge_has_weight_tau(seed in prop::collection::vec(any::<u8>(), 32), tau in 1usize..=64) {
        let c = sample_in_ball(&seed, 512, tau);
        prop_assert_eq!(c.weight(), tau);
        prop_assert!(c.coeffs().iter().all(|&x| (-1..=1).contains(&x)));
    }

    #[test]
    fn p_t_closed_form(qi in 0usize..21, ti in 0u64..10) {
        let primes = odd_primes(17, 97);
        let q = primes[qi % primes.len()];
        let t_max = (q as f64).sqrt() as u64;
        let t = 1 + ti % t_max;
        let spec = RoundingSpec::new(q, t).unwrap();
        let exact = p_t_exact(&spec).unwrap();
        prop_assert_eq!(&exact, &p_t_bruteforce(&spec).unwrap());
        prop_assert!(exact <= BigRational::new(BigInt::from(2), BigInt::from(t)));
    }

    #[test]
    fn sign_cost_grows_with_repeats(r1 in 1.0f64..10.0, dr in 0.0f64..5.0) {
        let p = builtin("ours-rec").unwrap().params;
        let cost = ntt_mul_cost(512).unwrap();
        let a = zq_op_table(&p, cost, r1);
        let b = zq_op_table(&p, cost, r1 + dr);
        prop_assert!(a.sign.mults <= b.sign.mults && a.sign.adds <= b.sign.adds);
        prop_assert_eq!(a.gen, b.gen);
        prop_assert_eq!(a.verify, b.verify);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn lwe_hardness_grows_with_noise(k in 2usize..8, l in 2usize..8) {
        let model = AttackModel::default();
        let (mu2, _) = model.mlwe_coresvp(k, l, 2, Q0, 512, XiMode::Bound).unwrap();
        let (mu4, _) = model.mlwe_coresvp(k, l, 4, Q0, 512, XiMode::Bound).unwrap();
        let (mu_more, _) = model.mlwe_coresvp(k + 1, l + 1, 2, Q0, 512, XiMode::Bound).unwrap();
        prop_assert!(mu4 >= mu2);
        prop_assert!(mu_more >= mu2);
    }
}
