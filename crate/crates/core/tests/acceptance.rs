//! Acceptance criteria. Each prints one `PASS`/`FAIL` line; the process
//! exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use ntt_dilithium::cli;
use ntt_dilithium::estimator::{advantage_lower_bound, validate, Outcome};
use ntt_dilithium::lemma_lab::{self, Suite};
use ntt_dilithium::opcounts::{hntt_mul_cost, ntt_mul_cost, CostPair};
use ntt_dilithium::ring::{schoolbook_mul, RingContext};
use ntt_dilithium::scheme::params::Q0;
use ntt_dilithium::scheme::{builtin, Dilithium};

type Verdict = Result<String, String>;

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("ntt-dilithium").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    let e = t.elapsed();
    ensure(e < limit, || format!("took {e:?}, limit {limit:?}"))
}

// Published rows. Pairs are (k, l), (gamma1, gamma2), (zeta, zeta'),
// (pk, sig) and (block size, Core-SVP).
struct Row {
    name: &'static str,
    kl: (u64, u64),
    gammas: (u64, u64),
    zetas: (u64, u64),
    eta: u64,
    eta_prime: Option<u64>,
    sizes: (u64, u64),
    repeats: f64,
    lwe: (u64, u64),
    stmsis: Option<(u64, i64)>,
    sis: Option<(u64, u64)>,
}

#[rustfmt::skip]
fn published_rows() -> Vec<Row> {
    let r = |name, kl, gammas, zetas, eta, eta_prime, sizes, repeats, lwe, stmsis, sis| Row {
        name, kl, gammas, zetas, eta, eta_prime, sizes, repeats, lwe, stmsis, sis,
    };
    vec![
        r("dil-sl2", (4, 4), (131072, 95232), (350209, 380930), 2, None, (1312, 2476), 4.25, (448, 118), None, Some((363, 96))),
        r("dil-sl3", (6, 5), (524288, 261888), (724481, 1048184), 4, None, (1952, 3448), 5.10, (669, 177), None, Some((533, 141))),
        r("dil-sl5", (8, 7), (524288, 261888), (769537, 1048336), 2, None, (2592, 4804), 3.85, (911, 241), None, Some((773, 204))),
        r("ours-sl2", (10, 4), (220929, 441858), (1539077, 1767434), 2, Some(8), (18592, 5554), 5.30, (605, 160), Some((1753, 100)), Some((4942, 1309))),
        r("ours-sl3", (12, 8), (370432, 740864), (2137089, 2963458), 2, Some(4), (22304, 11058), 4.70, (1205, 319), Some((2177, 141)), Some((5644, 1495))),
        r("ours-sl5", (16, 13), (555648, 1111296), (2877953, 4445186), 2, Some(2), (29728, 18546), 4.70, (2111, 559), Some((3025, 205)), Some((7423, 1967))),
        r("qrom-rec", (4, 4), (905679, 905679), (2565023, 3622718), 7, None, (7712, 5690), 4.29, (499, 132), None, None),
        r("qrom-vh", (5, 5), (905679, 905679), (2565023, 3622718), 3, None, (9632, 7098), 2.18, (620, 164), None, None),
        r("ours-rec", (12, 5), (279949, 555648), (1766657, 2222594), 2, Some(5), (22304, 7218), 5.03, (794, 210), Some((2118, 133)), Some((5910, 1566))),
        r("ours-vh", (13, 8), (370432, 740864), (2137089, 2963458), 2, Some(4), (24160, 11122), 4.97, (1232, 326), Some((2374, 167)), Some((6197, 1642))),
        r("nist-sl1", (7, 7), (277824, 555648), (1766657, 2222594), 2, Some(7), (13024, 9458), 4.70, (967, 256), Some((1252, 66)), Some((3100, 821))),
        r("nist-sl2", (9, 9), (329916, 659832), (1975025, 2639330), 2, Some(5), (16736, 12146), 5.34, (1325, 351), Some((1665, 88)), Some((4064, 1076))),
        r("nist-sl3", (10, 10), (370432, 740864), (2137089, 2963458), 2, Some(4), (18592, 13490), 5.25, (1509, 399), Some((1866, 100)), Some((4525, 1199))),
        r("nist-sl5", (13, 13), (555648, 1111296), (2877953, 4445186), 2, Some(2), (24160, 18354), 4.21, (2079, 550), Some((2454, 130)), Some((5822, 1542))),
    ]
}

fn table_reproduction() -> Verdict {
    let t = Instant::now();
    let (code, out, err) = run_cli(&["estimate", "--all-tables", "--format", "csv"]);
    ensure(code == 0, || format!("exit {code}: {err}"))?;
    let mut rd = csv::Reader::from_reader(out.as_bytes());
    let headers = rd.headers().map_err(|e| e.to_string())?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let records: Vec<csv::StringRecord> = rd.records().collect::<Result<_, _>>().map_err(|e| e.to_string())?;

    let rows = published_rows();
    let mut cells = 0;
    for row in &rows {
        let rec = records
            .iter()
            .find(|r| &r[col("name")] == row.name)
            .ok_or_else(|| format!("{} missing from output", row.name))?;
        let int = |c: &str| rec[col(c)].parse::<i64>().map_err(|e| format!("{}.{c}: {e}", row.name));
        let opt = |c: &str| -> Result<Option<i64>, String> {
            if rec[col(c)].is_empty() {
                Ok(None)
            } else {
                int(c).map(Some)
            }
        };
        let mut check = |c: &str, got: i64, want: i64| {
            cells += 1;
            ensure(got == want, || format!("{}.{c}: got {got}, published {want}", row.name))
        };
        check("k", int("k")?, row.kl.0 as i64)?;
        check("l", int("l")?, row.kl.1 as i64)?;
        check("gamma1", int("gamma1")?, row.gammas.0 as i64)?;
        check("gamma2", int("gamma2")?, row.gammas.1 as i64)?;
        check("zeta", int("zeta")?, row.zetas.0 as i64)?;
        check("zeta_prime", int("zeta_prime")?, row.zetas.1 as i64)?;
        check("eta", int("eta")?, row.eta as i64)?;
        if let Some(ep) = row.eta_prime {
            check("eta_prime", opt("eta_prime")?.unwrap_or(-1), ep as i64)?;
        }
        check("pk_bytes", int("pk_bytes")?, row.sizes.0 as i64)?;
        check("sig_bytes", int("sig_bytes")?, row.sizes.1 as i64)?;
        check("lwe_blocksize", int("lwe_blocksize")?, row.lwe.0 as i64)?;
        check("lwe_coresvp", int("lwe_coresvp")?, row.lwe.1 as i64)?;
        if let Some((mu, c)) = row.stmsis {
            check("stmsis_lwe_blocksize", opt("stmsis_lwe_blocksize")?.unwrap_or(-1), mu as i64)?;
            check("stmsis_coresvp", opt("stmsis_coresvp")?.unwrap_or(i64::MIN), c)?;
        }
        if let Some((mu, c)) = row.sis {
            check("sis_blocksize", opt("sis_blocksize")?.unwrap_or(-1), mu as i64)?;
            check("sis_coresvp", opt("sis_coresvp")?.unwrap_or(-1), c as i64)?;
        }
        let rep: f64 = rec[col("repeats")].parse().map_err(|e| format!("repeats: {e}"))?;
        let exact = ntt_dilithium::estimator::expected_repeats(&builtin(row.name).unwrap().params);
        cells += 1;
        ensure((exact - row.repeats).abs() <= 0.01 + 1e-9, || {
            format!("{}.repeats: got {exact:.4} ({rep}), published {}", row.name, row.repeats)
        })?;
    }
    within(t, Duration::from_secs(10))?;
    Ok(format!("{} sets, {cells} cells match", rows.len()))
}

fn op_table() -> Verdict {
    let t = Instant::now();
    let (code, out, err) = run_cli(&["opcounts", "--format", "csv"]);
    ensure(code == 0, || format!("exit {code}: {err}"))?;
    #[rustfmt::skip]
    let want = [
        ("mults", "gen", [892928, 1395200, 476160, 825344]),
        ("mults", "sign", [5745992, 4258150, 3073692, 4930240]),
        ("mults", "verify", [1116160, 1674240, 571392, 928512]),
        ("adds", "gen", [2951168, 4611200, 860160, 1490944]),
        ("adds", "sign", [18981980, 14067802, 5521572, 8873160]),
        ("adds", "verify", [3686912, 5530880, 1026048, 1670656]),
    ];
    let lines: Vec<&str> = out.lines().collect();
    ensure(lines[0] == "kind,phase,qrom-rec,qrom-vh,ours-rec,ours-vh", || format!("header {}", lines[0]))?;
    let mut cells = 0;
    for (kind, phase, vals) in want {
        let line = lines
            .iter()
            .find(|l| l.starts_with(&format!("{kind},{phase},")))
            .ok_or_else(|| format!("row {kind},{phase} missing"))?;
        let got: Vec<u64> = line.split(',').skip(2).map(|v| v.parse().unwrap()).collect();
        ensure(got == vals, || format!("{kind} {phase}: got {got:?}, published {vals:?}"))?;
        cells += vals.len();
    }
    within(t, Duration::from_secs(1))?;
    Ok(format!("{cells} cells match"))
}

fn cost_anchors() -> Verdict {
    let ntt = ntt_mul_cost(512).map_err(|e| e.to_string())?;
    let hntt = hntt_mul_cost(512, 4, 4).map_err(|e| e.to_string())?;
    ensure(ntt == CostPair { mults: 7936, adds: 13824 }, || format!("ntt {ntt:?}"))?;
    ensure(hntt == CostPair { mults: 55808, adds: 183936 }, || format!("hntt {hntt:?}"))?;
    Ok("ntt (7936, 13824), h-ntt (55808, 183936)".into())
}

fn scheme_correctness() -> Verdict {
    let t = Instant::now();
    let scheme = Dilithium::new(builtin("ours-sl2").unwrap().params).map_err(|e| e.to_string())?;
    let mut rng = ChaCha20Rng::seed_from_u64(2024);
    let mut seed = [0u8; 32];
    rng.fill(&mut seed);
    let kp = scheme.keygen(&seed);

    const SIGNINGS: usize = 2000;
    let mut attempts_total = 0u64;
    let mut sigs = Vec::new();
    for i in 0..SIGNINGS {
        let msg = format!("message {i}").into_bytes();
        let (sig, attempts) = scheme.sign_with_attempts(&kp.sk, &msg).map_err(|e| e.to_string())?;
        attempts_total += attempts as u64;
        if i < 1000 {
            sigs.push((msg, scheme.encode_signature(&sig)));
        }
    }
    for (i, (msg, sig)) in sigs.iter().enumerate() {
        ensure(scheme.verify_bytes(&kp.pk, msg, sig) == Ok(true), || format!("roundtrip {i} rejected"))?;
    }
    for (i, (msg, sig)) in sigs.iter().take(100).enumerate() {
        let mut bad = sig.clone();
        let bit = rng.gen_range(0..bad.len() * 8);
        bad[bit / 8] ^= 1 << (bit % 8);
        ensure(!matches!(scheme.verify_bytes(&kp.pk, msg, &bad), Ok(true)), || {
            format!("mutation {i} (bit {bit}) accepted")
        })?;
    }
    let mean = attempts_total as f64 / SIGNINGS as f64;
    ensure((mean - 5.30).abs() <= 0.15 * 5.30, || format!("mean attempts {mean:.3} vs 5.30"))?;
    within(t, Duration::from_secs(300))?;
    Ok(format!("1000 roundtrips, 100 mutations rejected, mean attempts {mean:.3} over {SIGNINGS}"))
}

fn ring_oracle() -> Verdict {
    let big = RingContext::new(Q0, 512).map_err(|e| e.to_string())?;
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let rand_elem = |ctx: &RingContext, rng: &mut ChaCha20Rng| {
        let q = ctx.q();
        ctx.element((0..ctx.n()).map(|_| rng.gen_range(0..q)).collect()).unwrap()
    };
    for i in 0..1000 {
        let a = rand_elem(&big, &mut rng);
        let b = rand_elem(&big, &mut rng);
        let fast = big.mul(&a, &b).unwrap();
        ensure(fast.coeffs() == &schoolbook_mul(a.coeffs(), b.coeffs(), Q0)[..], || format!("q0 pair {i}"))?;
        ensure(big.ntt_inverse(&big.ntt_forward(&a).unwrap()).unwrap() == a, || format!("q0 roundtrip {i}"))?;
    }

    // Every element of Z_17[X]/(X^4+1) against every basis monomial and a
    // few fixed elements; both products are bilinear, so this covers all pairs.
    let small = RingContext::new(17, 4).map_err(|e| e.to_string())?;
    let mut partners: Vec<_> = (0..4).map(|i| small.monomial(i)).collect();
    partners.extend((0..4).map(|_| rand_elem(&small, &mut rng)));
    let mut count = 0u64;
    for idx in 0..17u64.pow(4) {
        let a = small.element((0..4).map(|j| idx / 17u64.pow(j) % 17).collect()).unwrap();
        ensure(small.ntt_inverse(&small.ntt_forward(&a).unwrap()).unwrap() == a, || format!("(17,4) roundtrip {idx}"))?;
        for b in &partners {
            let fast = small.mul(&a, b).unwrap();
            ensure(fast.coeffs() == &schoolbook_mul(a.coeffs(), b.coeffs(), 17)[..], || format!("(17,4) product {idx}"))?;
            count += 1;
        }
    }
    Ok(format!("1000 pairs at (q0, 512); {count} products and 83521 roundtrips at (17, 4)"))
}

fn ratio(a: u64, b: u64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn lemma_suite() -> Verdict {
    let t = Instant::now();
    // Independent brute force of p_t: the chance that rounding u and u + v
    // agrees, over all (u, v), with buckets of width floor(q/t) and the
    // last one taking the remainder.
    let mut cases = 0;
    for q in (17u64..=97).filter(|&q| (2..q).take_while(|d| d * d <= q).all(|d| q % d != 0)) {
        for tt in (1u64..).take_while(|t| t * t <= q) {
            let w = q / tt;
            let round = |a: u64| (a / w).min(tt - 1);
            let same = (0..q)
                .flat_map(|u| (0..q).map(move |v| (u, v)))
                .filter(|&(u, v)| round(u) == round((u + v) % q))
                .count() as u64;
            let brute = ratio(same, q * q);
            let spec = lemma_lab::RoundingSpec::new(q, tt).map_err(|e| e.to_string())?;
            let exact = lemma_lab::p_t_exact(&spec).map_err(|e| e.to_string())?;
            ensure(exact == brute, || format!("q={q} t={tt}: closed form {exact}, brute force {brute}"))?;
            ensure(exact <= ratio(2, tt), || format!("q={q} t={tt}: {exact} > 2/t"))?;
            cases += 1;
        }
    }
    let reports = lemma_lab::run_suite(Suite::All, None).map_err(|e| e.to_string())?;
    for r in &reports {
        let failed: Vec<&str> = r.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        ensure(r.passed, || format!("suite {}: failed {failed:?}", r.suite))?;
    }
    let sweep = reports
        .iter()
        .find_map(|r| r.uniformity.clone())
        .ok_or("no uniformity sweep")?;
    within(t, Duration::from_secs(120))?;
    Ok(format!(
        "{cases} (q, t) cases; uniformity {:?} over {} deltas; ntt and root-sum checks pass",
        sweep.mode, sweep.deltas_checked
    ))
}

fn advantage_bound() -> Verdict {
    let n = 512;
    let one = BigUint::from(1u32);
    let eval = |eps: &BigRational, w: u32| {
        advantage_lower_bound(eps, &one, n, Q0, 10, 40, w).map_err(|e| e.to_string())
    };
    // eps = n q^-k zeroes the first factor.
    let eps0 = BigRational::new(BigInt::from(n), BigInt::from(Q0).pow(10));
    for w in [1u32, 5, 200] {
        let want = -(BigRational::new(1.into(), BigInt::from(3).pow(w)) / BigRational::from_integer(4.into()));
        ensure(eval(&eps0, w)? == want, || format!("zero-factor anchor at w={w}"))?;
    }
    let v = eval(&ratio(1, 1), 200)?;
    let approx = num_traits::ToPrimitive::to_f64(&v).unwrap();
    ensure((approx - 1.0 / 324.0).abs() < 1e-12, || format!("eps=1 anchor {approx}"))?;
    ensure(v < ratio(1, 324), || "eps=1 value not below 1/324".into())?;

    let eps_grid: Vec<BigRational> = (1..=10).map(|i| ratio(i, 10)).collect();
    let w_grid: Vec<u32> = (1..=10).map(|i| i * 3).collect();
    let mut grid = Vec::new();
    for e in &eps_grid {
        let mut row = Vec::new();
        for &w in &w_grid {
            row.push(eval(e, w)?);
        }
        grid.push(row);
    }
    for i in 0..10 {
        for j in 0..10 {
            if i > 0 {
                ensure(grid[i][j] >= grid[i - 1][j], || format!("not monotone in eps at ({i}, {j})"))?;
            }
            if j > 0 {
                ensure(grid[i][j] >= grid[i][j - 1], || format!("not monotone in w at ({i}, {j})"))?;
            }
        }
    }
    Ok(format!("anchors exact; monotone over 100-point grid; eps=1 gives {approx:.6e}"))
}

fn validity_gate() -> Verdict {
    let ours = ["ours-sl2", "ours-sl3", "ours-sl5", "ours-rec", "ours-vh", "nist-sl1", "nist-sl2", "nist-sl3", "nist-sl5"];
    let bound = Q0 / 32;
    for id in ours {
        let p = builtin(id).unwrap().params;
        let cs = validate(&p);
        let bad: Vec<_> = cs.iter().filter(|c| c.outcome != Outcome::Pass).map(|c| c.name).collect();
        ensure(bad.is_empty(), || format!("{id}: not passing {bad:?}"))?;
        let zeta = published_rows().into_iter().find(|r| r.name == id).unwrap().zetas.0 as u128;
        let lhs = 2 * zeta * p.eta_prime.unwrap() as u128 * p.n as u128 * (p.k + p.l + 1) as u128;
        ensure(lhs < bound as u128, || format!("{id}: {lhs} >= {bound}"))?;
    }
    let sl2 = builtin("ours-sl2").unwrap().params;
    let lhs = 2.0 * 1539077.0 * 8.0 * 512.0 * (sl2.k + sl2.l + 1) as f64;
    ensure((lhs / 1.89e11 - 1.0).abs() < 0.01 && (bound as f64 / 3.89e11 - 1.0).abs() < 0.01, || {
        format!("sl2 hypothesis {lhs:e} vs {bound}")
    })?;
    for id in ["qrom-rec", "qrom-vh"] {
        let cs = validate(&builtin(id).unwrap().params);
        let c = cs.iter().find(|c| c.name == "q_1_mod_2n").unwrap();
        ensure(c.outcome == Outcome::Fail, || format!("{id}: q = 1 mod 2n not flagged"))?;
    }
    Ok(format!("{} sets pass every constraint; qrom sets flagged", ours.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("1 table reproduction", table_reproduction),
        ("2 op-count table", op_table),
        ("3 ntt cost anchors", cost_anchors),
        ("4 scheme correctness", scheme_correctness),
        ("5 ring oracle", ring_oracle),
        ("6 lemma suite", lemma_suite),
        ("7 advantage bound", advantage_bound),
        ("8 validity gate", validity_gate),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let t = Instant::now();
        let res = f();
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(msg) => println!("PASS  {name}: {msg} ({secs:.1}s)"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {name}: {msg} ({secs:.1}s)");
            }
        }
    }
    println!("{}/8 criteria pass", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
