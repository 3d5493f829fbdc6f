use serde::Serialize;

use super::{
    alpha_lower_bound, expected_repeats, sizes, zeta_bounds, AttackModel,
    EstimatorError, XiMode,
};
use crate::arith::is_prime;
use crate::lemma_lab::theorem_hypotheses;
use crate::scheme::ParameterSet;

pub const LOG_CONVENTION: &str = "log base 2; natural log only inside the dual-attack bound";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Constraint {
    pub name: &'static str,
    pub outcome: Outcome,
    pub detail: String,
}

impl Constraint {
    pub fn check(name: &'static str, ok: bool, detail: impl Into<String>) -> Self {
        Constraint {
            name,
            outcome: if ok { Outcome::Pass } else { Outcome::Fail },
            detail: detail.into(),
        }
    }

    pub fn not_applicable(name: &'static str, detail: impl Into<String>) -> Self {
        Constraint {
            name,
            outcome: Outcome::NotApplicable,
            detail: detail.into(),
        }
    }

    pub fn failed(&self) -> bool {
        self.outcome == Outcome::Fail
    }
}

/// Structural and hypothesis checks on a parameter set.
pub fn validate(p: &ParameterSet) -> Vec<Constraint> {
    let mut out = vec![
        Constraint::check("q_prime", is_prime(p.q), format!("q = {}", p.q)),
        Constraint::check(
            "q_1_mod_2n",
            p.q % (2 * p.n as u64) == 1,
            format!("q mod 2n = {}", p.q % (2 * p.n as u64)),
        ),
        Constraint::check(
            "q_1_mod_2gamma2",
            p.gamma2 > 0 && p.q % (2 * p.gamma2) == 1,
            format!("q mod 2*gamma2 = {}", p.q % (2 * p.gamma2).max(1)),
        ),
        Constraint::check(
            "q_gt_4gamma2",
            p.q > 4 * p.gamma2,
            format!("4*gamma2 = {}", 4 * p.gamma2),
        ),
        Constraint::check(
            "beta_eq_tau_eta",
            p.beta == p.tau as u64 * p.eta,
            format!("beta = {}, tau*eta = {}", p.beta, p.tau as u64 * p.eta),
        ),
    ];
    match p.eta_prime {
        Some(eta_prime) => {
            let (zeta, _) = zeta_bounds(p);
            out.extend(theorem_hypotheses(p.q, p.n, p.l + 1, p.k, zeta, eta_prime));
        }
        None => {
            out.push(Constraint::not_applicable("q_ge_16", "no eta' given"));
            out.push(Constraint::not_applicable("eta_prime_bound", "no eta' given"));
        }
    }
    out
}

/// Everything the estimator knows about one parameter set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SecurityReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<&'static str>,
    #[serde(flatten)]
    pub params: ParameterSet,
    pub zeta: u64,
    pub zeta_prime: u64,
    pub alpha_lb: f64,
    pub pk_bytes: u64,
    pub sig_bytes: u64,
    pub repeats: f64,
    pub lwe_blocksize: u64,
    pub lwe_coresvp: u64,
    pub stmsis_lwe_blocksize: Option<u64>,
    pub stmsis_coresvp: Option<i64>,
    pub sis_blocksize: Option<u64>,
    pub sis_coresvp: Option<u64>,
    pub validity: Vec<Constraint>,
    pub xi_mode: XiMode,
    pub log_convention: &'static str,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl SecurityReport {
    pub fn is_valid(&self) -> bool {
        !self.validity.iter().any(Constraint::failed)
    }
}

/// [`report_with`] under the default model and `xi = eps`.
pub fn report(p: &ParameterSet) -> Result<SecurityReport, EstimatorError> {
    report_with(p, &AttackModel::default(), XiMode::Bound)
}

/// Builds the full report. The SelfTargetMSIS row needs both `eta'` and a
/// level; without them it is left empty. SIS failures are recorded as notes.
pub fn report_with(
    p: &ParameterSet,
    model: &AttackModel,
    mode: XiMode,
) -> Result<SecurityReport, EstimatorError> {
    let (zeta, zeta_prime) = zeta_bounds(p);
    let (pk_bytes, sig_bytes) = sizes(p);
    let (lwe_blocksize, lwe_coresvp) = model.mlwe_coresvp(p.k, p.l, p.eta, p.q, p.n, mode)?;
    let mut notes = Vec::new();

    let (stmsis_lwe_blocksize, stmsis_coresvp) = match (p.eta_prime, p.level) {
        (Some(eta_prime), Some(level)) => match model.stmsis_coresvp(p, eta_prime, level, mode) {
            Ok((mu, c)) => (Some(mu), Some(c)),
            Err(e @ EstimatorError::EtaPrimeInvalid { .. }) => {
                notes.push(format!("selftargetmsis: {e}"));
                (None, None)
            }
            Err(e) => return Err(e),
        },
        _ => (None, None),
    };

    let (sis_blocksize, sis_coresvp) = match model.msis_coresvp(p) {
        Ok((mu, c)) => (Some(mu), Some(c)),
        Err(e) => {
            notes.push(format!("sis: {e}"));
            (None, None)
        }
    };

    Ok(SecurityReport {
        table: None,
        params: p.clone(),
        zeta,
        zeta_prime,
        alpha_lb: alpha_lower_bound(p),
        pk_bytes,
        sig_bytes,
        repeats: expected_repeats(p),
        lwe_blocksize,
        lwe_coresvp,
        stmsis_lwe_blocksize,
        stmsis_coresvp,
        sis_blocksize,
        sis_coresvp,
        validity: validate(p),
        xi_mode: mode,
        log_convention: LOG_CONVENTION,
        notes,
    })
}

pub fn reports_to_json(reports: &[SecurityReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports always serialize")
}

#[derive(Serialize)]
struct CsvRow<'a> {
    table: &'a str,
    name: &'a str,
    q: u64,
    n: usize,
    k: usize,
    l: usize,
    d: u32,
    tau: usize,
    gamma1: u64,
    gamma2: u64,
    zeta: u64,
    zeta_prime: u64,
    eta: u64,
    eta_prime: Option<u64>,
    pk_bytes: u64,
    sig_bytes: u64,
    repeats: String,
    lwe_blocksize: u64,
    lwe_coresvp: u64,
    stmsis_lwe_blocksize: Option<u64>,
    stmsis_coresvp: Option<i64>,
    sis_blocksize: Option<u64>,
    sis_coresvp: Option<u64>,
    alpha_lb: String,
    valid: bool,
}

/// One row per report; missing values are empty cells, repeats and alpha
/// are printed to two decimals.
pub fn reports_to_csv(reports: &[SecurityReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        let p = &r.params;
        w.serialize(CsvRow {
            table: r.table.unwrap_or(""),
            name: &p.name,
            q: p.q,
            n: p.n,
            k: p.k,
            l: p.l,
            d: p.d,
            tau: p.tau,
            gamma1: p.gamma1,
            gamma2: p.gamma2,
            zeta: r.zeta,
            zeta_prime: r.zeta_prime,
            eta: p.eta,
            eta_prime: p.eta_prime,
            pk_bytes: r.pk_bytes,
            sig_bytes: r.sig_bytes,
            repeats: format!("{:.2}", r.repeats),
            lwe_blocksize: r.lwe_blocksize,
            lwe_coresvp: r.lwe_coresvp,
            stmsis_lwe_blocksize: r.stmsis_lwe_blocksize,
            stmsis_coresvp: r.stmsis_coresvp,
            sis_blocksize: r.sis_blocksize,
            sis_coresvp: r.sis_coresvp,
            alpha_lb: format!("{:.2}", r.alpha_lb),
            valid: r.is_valid(),
        })
        .expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("csv is utf-8")
}
