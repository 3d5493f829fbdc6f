//! Command-line front end. [`run`] parses arguments, dispatches, and returns
//! the process exit code.
//!
//! Exit codes: 0 success or accept, 1 verify reject (or a failed lemma
//! check), 2 invalid parameters or input, 3 I/O failure, 4 infeasible search.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::RngCore;
use sha3::{Digest, Sha3_256};

use crate::estimator::{
    self, reports_to_csv, AttackModel, EstimatorError, SearchSpace, SecurityReport, Targets,
    XiMode,
};
use crate::lemma_lab::{self, Suite, SweepMode};
use crate::opcounts::{self, MulMethod};
use crate::scheme::params::{builtin_by_params_id, CUSTOM_PARAMS_ID};
use crate::scheme::{builtin, builtin_sets, Dilithium, ParameterSet, SchemeError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECT: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_INFEASIBLE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "ntt-dilithium", version, about = "Dilithium over an NTT-friendly ring, with security and cost estimates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a key pair from a 32-byte seed.
    Keygen {
        /// Built-in set id or path to a params JSON file.
        #[arg(long)]
        params: String,
        /// 64 hex characters.
        #[arg(long, conflicts_with = "random_seed", required_unless_present = "random_seed")]
        seed: Option<String>,
        /// Draw the seed from OS entropy and print it.
        #[arg(long)]
        random_seed: bool,
        #[arg(long)]
        out_pk: PathBuf,
        #[arg(long)]
        out_sk: PathBuf,
    },
    /// Sign a message file.
    Sign {
        /// Needed only for keys made from a params file.
        #[arg(long)]
        params: Option<String>,
        #[arg(long)]
        sk: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out_sig: PathBuf,
        #[arg(long, default_value_t = crate::scheme::DEFAULT_MAX_ATTEMPTS)]
        max_attempts: u32,
    },
    /// Verify a signature; exit 0 on accept, 1 on reject.
    Verify {
        #[arg(long)]
        params: Option<String>,
        #[arg(long)]
        pk: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        sig: PathBuf,
    },
    /// Security report for one set or every built-in set.
    Estimate {
        #[arg(long, conflicts_with = "all_tables", required_unless_present = "all_tables")]
        set: Option<String>,
        #[arg(long)]
        all_tables: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, value_enum, default_value_t = Xi::Bound)]
        xi: Xi,
    },
    /// Z_q operation counts for Gen, Sign and Verify.
    Opcounts {
        /// Built-in ids; defaults to qrom-rec, qrom-vh, ours-rec, ours-vh.
        #[arg(long)]
        set: Vec<String>,
        /// Ring multiplication method; defaults to NTT when q = 1 mod 2n, H-NTT otherwise.
        #[arg(long, value_enum)]
        mul: Option<Mul>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Search for the smallest parameter set meeting a level's targets.
    Search {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        level: u8,
        #[arg(long, value_enum, default_value_t = TargetPreset::Nist)]
        targets: TargetPreset,
        #[arg(long, default_value_t = 1)]
        k_min: usize,
        #[arg(long, default_value_t = 16)]
        k_max: usize,
        #[arg(long, default_value_t = 1)]
        l_min: usize,
        #[arg(long, default_value_t = 16)]
        l_max: usize,
        #[arg(long, default_value_t = 1 << 17)]
        gamma2_min: u64,
        #[arg(long, default_value_t = 1 << 21)]
        gamma2_max: u64,
        #[arg(long, value_delimiter = ',', default_values_t = [2u64, 4])]
        eta: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        eta_prime_divisor: u64,
        #[arg(long, value_enum, default_value_t = Xi::Bound)]
        xi: Xi,
    },
    /// Brute-force lemma checks at toy sizes; prints JSON.
    Lemmas {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Check this many random deltas instead of the default uniformity sweep.
        #[arg(long)]
        sampled: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Xi {
    Bound,
    Stddev,
}

impl From<Xi> for XiMode {
    fn from(x: Xi) -> Self {
        match x {
            Xi::Bound => XiMode::Bound,
            Xi::Stddev => XiMode::StdDev,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mul {
    Ntt,
    Hntt,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TargetPreset {
    Nist,
    Dilithium,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    All,
    Rounding,
    Uniformity,
    Ntt,
}

/// A failure carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        CliError {
            code: EXIT_IO,
            message: format!("{}: {e}", path.display()),
        }
    }
}

type CliResult = Result<i32, CliError>;

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    writeln!(out, "{text}").map_err(|e| CliError {
        code: EXIT_IO,
        message: format!("stdout: {e}"),
    })
}

/// Resolves a built-in id or loads a params file. Files must pass
/// `estimator::validate`; the first failing constraint is reported.
pub fn load_params(arg: &str) -> Result<ParameterSet, CliError> {
    if let Some(b) = builtin(arg) {
        return Ok(b.params);
    }
    let path = Path::new(arg);
    if !path.exists() {
        let ids: Vec<&str> = builtin_sets().iter().map(|b| b.id).collect();
        return Err(CliError::invalid(format!(
            "unknown parameter set '{arg}' (built-in ids: {})",
            ids.join(", ")
        )));
    }
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let params = ParameterSet::from_json(&text)
        .map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
    if let Some(c) = estimator::validate(&params).into_iter().find(|c| c.failed()) {
        return Err(CliError::invalid(format!(
            "parameter constraint {} failed: {}",
            c.name, c.detail
        )));
    }
    Ok(params)
}

fn scheme_for(params: ParameterSet) -> Result<Dilithium, CliError> {
    Dilithium::new(params).map_err(|e| CliError::invalid(e.to_string()))
}

/// Parameters for an encoded key or signature: `--params` if given,
/// otherwise the built-in set named by the file's params-id byte.
fn params_for_file(explicit: Option<&str>, bytes: &[u8]) -> Result<ParameterSet, CliError> {
    if let Some(arg) = explicit {
        return load_params(arg);
    }
    let id = *bytes
        .get(5)
        .ok_or_else(|| CliError::invalid("file too short to carry a header"))?;
    if id == CUSTOM_PARAMS_ID {
        return Err(CliError::invalid("key was made from a params file; pass --params"));
    }
    builtin_by_params_id(id)
        .map(|b| b.params)
        .ok_or_else(|| CliError::invalid(format!("unknown params id {id}")))
}

fn parse_seed(hex_seed: &str) -> Result<[u8; 32], CliError> {
    let bytes = hex::decode(hex_seed.trim()).map_err(|e| CliError::invalid(format!("seed: {e}")))?;
    bytes
        .try_into()
        .map_err(|b: Vec<u8>| CliError::invalid(format!("seed must be 32 bytes, got {}", b.len())))
}

fn decode_err(what: &str, e: SchemeError) -> CliError {
    CliError::invalid(format!("{what}: {e}"))
}

fn cmd_keygen(
    out: &mut dyn Write,
    params: &str,
    seed: Option<&str>,
    out_pk: &Path,
    out_sk: &Path,
) -> CliResult {
    let scheme = scheme_for(load_params(params)?)?;
    let seed = match seed {
        Some(s) => parse_seed(s)?,
        None => {
            let mut s = [0u8; 32];
            rand::rngs::OsRng.fill_bytes(&mut s);
            emit(out, &format!("seed: {}", hex::encode(s)))?;
            s
        }
    };
    let kp = scheme.keygen(&seed);
    let pk = scheme.encode_public_key(&kp.pk);
    let sk = scheme.encode_secret_key(&kp.sk);
    write_file(out_pk, &pk)?;
    write_file(out_sk, &sk)?;
    emit(out, &format!("pk_bytes: {}", pk.len()))?;
    emit(out, &format!("sk_bytes: {}", sk.len()))?;
    emit(out, &format!("pk_sha3_256: {}", hex::encode(Sha3_256::digest(&pk))))?;
    Ok(EXIT_OK)
}

fn cmd_sign(
    out: &mut dyn Write,
    params: Option<&str>,
    sk_path: &Path,
    input: &Path,
    out_sig: &Path,
    max_attempts: u32,
) -> CliResult {
    let sk_bytes = read(sk_path)?;
    let scheme = scheme_for(params_for_file(params, &sk_bytes)?)?.with_max_attempts(max_attempts);
    let sk = scheme
        .decode_secret_key(&sk_bytes)
        .map_err(|e| decode_err("secret key", e))?;
    let msg = read(input)?;
    let (sig, attempts) = scheme
        .sign_with_attempts(&sk, &msg)
        .map_err(|e| CliError::invalid(e.to_string()))?;
    let bytes = scheme.encode_signature(&sig);
    write_file(out_sig, &bytes)?;
    emit(out, &format!("attempts: {attempts}"))?;
    emit(out, &format!("sig_bytes: {}", bytes.len()))?;
    Ok(EXIT_OK)
}

fn cmd_verify(
    out: &mut dyn Write,
    params: Option<&str>,
    pk_path: &Path,
    input: &Path,
    sig_path: &Path,
) -> CliResult {
    let pk_bytes = read(pk_path)?;
    let scheme = scheme_for(params_for_file(params, &pk_bytes)?)?;
    let pk = scheme
        .decode_public_key(&pk_bytes)
        .map_err(|e| decode_err("public key", e))?;
    let msg = read(input)?;
    let sig = read(sig_path)?;
    match scheme.verify_bytes(&pk, &msg, &sig) {
        Ok(true) => {
            emit(out, "accept")?;
            Ok(EXIT_OK)
        }
        Ok(false) => {
            emit(out, "reject")?;
            Ok(EXIT_REJECT)
        }
        Err(e) => {
            emit(out, &format!("reject: {e}"))?;
            Ok(EXIT_REJECT)
        }
    }
}

fn report_or_invalid(p: &ParameterSet, xi: XiMode) -> Result<SecurityReport, CliError> {
    estimator::report_with(p, &AttackModel::default(), xi).map_err(|e| CliError::invalid(e.to_string()))
}

fn cmd_estimate(out: &mut dyn Write, set: Option<&str>, all_tables: bool, format: Format, xi: XiMode) -> CliResult {
    if all_tables {
        let mut reports = Vec::new();
        for b in builtin_sets() {
            let mut r = report_or_invalid(&b.params, xi)?;
            r.table = Some(b.table.label());
            reports.push(r);
        }
        let text = match format {
            Format::Csv => reports_to_csv(&reports),
            Format::Json => {
                let mut grouped = serde_json::Map::new();
                for r in &reports {
                    let key = r.table.expect("set above").to_string();
                    let entry = grouped.entry(key).or_insert_with(|| serde_json::Value::Array(Vec::new()));
                    entry
                        .as_array_mut()
                        .expect("inserted as array")
                        .push(serde_json::to_value(r).expect("reports serialize"));
                }
                serde_json::to_string_pretty(&grouped).expect("json map serializes")
            }
        };
        emit(out, text.trim_end())?;
        return Ok(EXIT_OK);
    }
    let arg = set.expect("clap requires --set without --all-tables");
    let params = load_params(arg)?;
    let mut r = report_or_invalid(&params, xi)?;
    r.table = builtin(arg).map(|b| b.table.label());
    let text = match format {
        Format::Csv => reports_to_csv(std::slice::from_ref(&r)),
        Format::Json => serde_json::to_string_pretty(&r).expect("reports serialize"),
    };
    emit(out, text.trim_end())?;
    Ok(EXIT_OK)
}

fn cmd_opcounts(out: &mut dyn Write, sets: &[String], mul: Option<Mul>, format: Format) -> CliResult {
    let ids: Vec<String> = if sets.is_empty() {
        ["qrom-rec", "qrom-vh", "ours-rec", "ours-vh"].map(String::from).to_vec()
    } else {
        sets.to_vec()
    };
    let mut cols = Vec::new();
    for id in &ids {
        let p = load_params(id)?;
        let native = p.q % (2 * p.n as u64) == 1;
        let method = match mul {
            Some(Mul::Ntt) if !native => {
                return Err(CliError::invalid(format!("{id}: q is not 1 mod 2n, NTT unavailable")))
            }
            Some(Mul::Ntt) => MulMethod::Ntt,
            Some(Mul::Hntt) => MulMethod::Hntt,
            None if native => MulMethod::Ntt,
            None => MulMethod::Hntt,
        };
        cols.push(opcounts::op_table_column(&p, method).map_err(|e| CliError::invalid(e.to_string()))?);
    }
    let text = match format {
        Format::Csv => opcounts::op_table_csv(&cols),
        Format::Json => opcounts::op_table_json(&cols),
    };
    emit(out, text.trim_end())?;
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    out: &mut dyn Write,
    err: &mut dyn Write,
    level: u8,
    preset: TargetPreset,
    k: (usize, usize),
    l: (usize, usize),
    gamma2: (u64, u64),
    etas: Vec<u64>,
    eta_prime_divisor: u64,
    xi: XiMode,
) -> CliResult {
    let model = AttackModel::default();
    let targets = match preset {
        TargetPreset::Nist => Targets::nist(&model, level),
        TargetPreset::Dilithium => Targets::dilithium_match(level),
    }
    .map_err(|e| CliError::invalid(e.to_string()))?;
    let mut space = SearchSpace::standard(level, targets);
    space.k_range = k.0..=k.1;
    space.l_range = l.0..=l.1;
    space.gamma2_range = gamma2.0..=gamma2.1;
    space.etas = etas;
    space.eta_prime_divisor = eta_prime_divisor;
    space.xi_mode = xi;
    match estimator::search(&space, &model) {
        Ok((params, r)) => {
            let _ = writeln!(
                err,
                "pk {} B, sig {} B, repeats {:.2}, core-svp lwe {} / stmsis {} / sis {}",
                r.pk_bytes,
                r.sig_bytes,
                r.repeats,
                r.lwe_coresvp,
                r.stmsis_coresvp.unwrap_or_default(),
                r.sis_coresvp.unwrap_or_default()
            );
            emit(out, &params.to_json())?;
            Ok(EXIT_OK)
        }
        Err(EstimatorError::NoFeasiblePoint) => Err(CliError {
            code: EXIT_INFEASIBLE,
            message: EstimatorError::NoFeasiblePoint.to_string(),
        }),
        Err(e) => Err(CliError::invalid(e.to_string())),
    }
}

fn cmd_lemmas(out: &mut dyn Write, suite: SuiteArg, sampled: Option<usize>) -> CliResult {
    let suite = match suite {
        SuiteArg::All => Suite::All,
        SuiteArg::Rounding => Suite::Rounding,
        SuiteArg::Uniformity => Suite::Uniformity,
        SuiteArg::Ntt => Suite::Ntt,
    };
    let mode = sampled.map(|count| SweepMode::Sampled { count, seed: 1 });
    let reports = lemma_lab::run_suite(suite, mode).map_err(|e| CliError::invalid(e.to_string()))?;
    emit(out, &serde_json::to_string_pretty(&reports).expect("suite reports serialize"))?;
    Ok(if reports.iter().all(|r| r.passed) { EXIT_OK } else { EXIT_REJECT })
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    match cli.command {
        Command::Keygen {
            params,
            seed,
            random_seed: _,
            out_pk,
            out_sk,
        } => cmd_keygen(out, &params, seed.as_deref(), &out_pk, &out_sk),
        Command::Sign {
            params,
            sk,
            input,
            out_sig,
            max_attempts,
        } => cmd_sign(out, params.as_deref(), &sk, &input, &out_sig, max_attempts),
        Command::Verify { params, pk, input, sig } => cmd_verify(out, params.as_deref(), &pk, &input, &sig),
        Command::Estimate {
            set,
            all_tables,
            format,
            xi,
        } => cmd_estimate(out, set.as_deref(), all_tables, format, xi.into()),
        Command::Opcounts { set, mul, format } => cmd_opcounts(out, &set, mul, format),
        Command::Search {
            level,
            targets,
            k_min,
            k_max,
            l_min,
            l_max,
            gamma2_min,
            gamma2_max,
            eta,
            eta_prime_divisor,
            xi,
        } => cmd_search(
            out,
            err,
            level,
            targets,
            (k_min, k_max),
            (l_min, l_max),
            (gamma2_min, gamma2_max),
            eta,
            eta_prime_divisor,
            xi.into(),
        ),
        Command::Lemmas { suite, sampled } => cmd_lemmas(out, suite, sampled),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}
