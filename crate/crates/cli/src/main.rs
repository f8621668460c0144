mod record;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use modeq::crt::{build_crt, CrtPlan, Target};
use modeq::double_eta::{self, derive_params, ParamSet};
use modeq::format::to_text;
use modeq::forms::{FormKind, Forms};
use modeq::numeric::{check_equation, TOLERANCE};
use modeq::{kiepert, Error, ModEqPoly};
use num_bigint::BigInt;

use record::{Engine, EquationRecord, Function};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Modular equations of Weber and double eta-quotient functions in J, G2, G3.
#[derive(Parser, Debug)]
#[command(name = "modeq", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,

    /// Reconstruct coefficients from word-sized primes.
    #[arg(long, global = true)]
    crt: bool,

    /// Most primes to try with --crt.
    #[arg(long, default_value_t = 64, global = true)]
    primes: usize,

    /// Bit size of the --crt primes (at most 62).
    #[arg(long, default_value_t = 62, value_parser = clap::value_parser!(u32).range(8..=62), global = true)]
    prime_bits: u32,

    /// Extra q-series coefficients beyond the required precision.
    #[arg(long, default_value_t = kiepert::GUARD, global = true)]
    terms_guard: usize,

    /// Number of sample points for the numeric check (0 skips it).
    #[arg(long, default_value_t = 10, global = true)]
    verify: usize,

    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,

    #[arg(long, env = "MODEQ_CACHE", default_value = "modeq-cache", global = true)]
    cache: PathBuf,

    /// Do not read or write the cache.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Recompute even when a cached record exists.
    #[arg(long, global = true)]
    refresh: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Equation of (-1)^((p-1)/2) w_p^2 for a prime p > 3.
    Kiepert {
        #[arg(short)]
        p: u64,
    },
    /// Equation of a double eta-quotient.
    DoubleEta {
        #[arg(long)]
        p1: u64,
        #[arg(long)]
        p2: u64,
        #[arg(long)]
        e: Option<u32>,
    },
    /// Print the parameters attached to a pair of primes.
    Params {
        #[arg(long)]
        p1: u64,
        #[arg(long)]
        p2: u64,
        #[arg(long)]
        e: Option<u32>,
    },
    /// Print a q-expansion: eta, e4, e6, delta, j, gamma2 or gamma3.
    Series {
        kind: String,
        #[arg(long, default_value_t = 10)]
        terms: usize,
    },
    /// Check a stored equation record numerically.
    Verify { file: PathBuf },
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnsupportedPair(..) | Error::UnsupportedPrime(_) | Error::ExponentMismatch { .. } => {
                Failure::Input(e.to_string())
            }
            _ => Failure::Internal(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Kiepert { p } => {
            if !kiepert::is_prime(*p) || *p <= 3 {
                return Err(Error::UnsupportedPrime(*p).into());
            }
            equation(cli, Function::Kiepert { p: *p })
        }
        Command::DoubleEta { p1, p2, e } => {
            let params = derive_params(*p1, *p2, *e)?;
            equation(cli, Function::DoubleEta { params })
        }
        Command::Params { p1, p2, e } => {
            let params = derive_params(*p1, *p2, *e)?;
            match cli.format {
                Format::Text => out(&describe(&params)),
                Format::Json => out(&json(&params)?),
            }
            Ok(())
        }
        Command::Series { kind, terms } => {
            let kind = FormKind::parse(kind).ok_or_else(|| Failure::Input(format!("unknown series {kind:?}")))?;
            let s = Forms::<BigInt>::new(()).by_kind(kind, *terms);
            match cli.format {
                Format::Text => out(&s.to_string()),
                Format::Json => out(&json(&s)?),
            }
            Ok(())
        }
        Command::Verify { file } => verify(cli, file),
    }
}

/// Writes a line to stdout; a closed pipe is not an error.
fn out(line: &str) {
    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout, "{line}");
}

fn describe(p: &ParamSet) -> String {
    format!(
        "p1={} p2={} s={} e={} delta={} r={} t={} sign={} degree={}",
        p.p1, p.p2, p.s, p.e, p.delta, p.r, p.t, p.sign, p.degree
    )
}

fn json<T: serde::Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(v).map_err(|e| Failure::Internal(e.to_string()))
}

fn equation(cli: &Cli, function: Function) -> Result<(), Failure> {
    let engine = if cli.crt { Engine::Crt } else { Engine::Direct };
    let path = EquationRecord::cache_path(&cli.cache, &function, engine);
    let cached = if cli.no_cache || cli.refresh || !path.exists() {
        None
    } else {
        Some(EquationRecord::load(&path).map_err(Failure::Internal)?)
    };
    let (rec, eq) = match cached {
        Some(rec) => {
            let eq = rec.equation()?;
            eprintln!("using cached {}", path.display());
            (rec, eq)
        }
        None => {
            let (rec, eq) = compute(cli, function, engine)?;
            if !cli.no_cache {
                rec.store(&path).map_err(Failure::Internal)?;
            }
            (rec, eq)
        }
    };
    match cli.format {
        Format::Text => {
            out(&to_text(&eq, &rec.variable));
            eprintln!("{}", summary(&rec));
        }
        Format::Json => out(&json(&rec)?),
    }
    Ok(())
}

fn summary(rec: &EquationRecord) -> String {
    let engine = match rec.engine {
        Engine::Direct => "direct",
        Engine::Crt => "crt",
    };
    let mut out = format!("Phi[{}]: engine {engine}", rec.label);
    if !rec.primes_used.is_empty() {
        out += &format!(", {} primes", rec.primes_used.len());
    }
    match &rec.verification {
        Some(r) => out += &format!(", residuals +{:.1e} / -{:.1e}", r.residual_plus, r.residual_minus),
        None => out += ", not verified",
    }
    out
}

fn compute(cli: &Cli, function: Function, engine: Engine) -> Result<(EquationRecord, ModEqPoly<BigInt>), Failure> {
    let target = match &function {
        Function::Kiepert { p } => Target::Kiepert(*p),
        Function::DoubleEta { params } => Target::DoubleEta(params.clone()),
    };
    let mut primes = Vec::new();
    let mut eq = match engine {
        Engine::Direct => match &function {
            Function::Kiepert { p } => kiepert::build_with::<BigInt>((), *p, cli.terms_guard)?,
            Function::DoubleEta { params } => double_eta::exact_equation(params, cli.terms_guard)?,
        },
        Engine::Crt => {
            let plan = CrtPlan {
                max_primes: cli.primes,
                bits: cli.prime_bits,
                guard: cli.terms_guard,
                ..CrtPlan::default()
            };
            let (eq, stats) = build_crt(&target, &plan)?;
            if let Function::DoubleEta { params } = &function {
                double_eta::check_properties(params, &eq)?;
            }
            primes = stats.primes;
            eq
        }
    };
    let theorem_sign = match &function {
        Function::Kiepert { p } => kiepert::sign(*p),
        Function::DoubleEta { params } => params.sign,
    };
    let mut sign = theorem_sign;
    let mut report = None;
    if cli.verify > 0 {
        let r = check_equation(&eq, function.quotient(), cli.verify, cli.seed, TOLERANCE)?;
        if r.chosen_sign != 0 {
            sign = r.chosen_sign;
            if let Function::DoubleEta { params } = &function {
                eq.label = params.label(sign);
            } else if sign != theorem_sign {
                return Err(Failure::Internal(format!(
                    "equation vanishes at sign {sign}, expected {theorem_sign}"
                )));
            }
        }
        report = Some(r);
    }
    let mut rec = EquationRecord::new(function, &eq, sign, theorem_sign, engine);
    rec.verification = report;
    rec.primes_used = primes;
    Ok((rec, eq))
}

fn verify(cli: &Cli, file: &Path) -> Result<(), Failure> {
    let rec = EquationRecord::load(file).map_err(Failure::Input)?;
    let eq = rec.equation()?;
    let report = check_equation(&eq, rec.function.quotient(), cli.verify.max(1), cli.seed, TOLERANCE)?;
    out(&json(&report)?);
    if report.chosen_sign != 0 && report.chosen_sign != rec.sign {
        return Err(Failure::Internal(format!(
            "record claims sign {} but the equation vanishes at sign {}",
            rec.sign, report.chosen_sign
        )));
    }
    Ok(())
}
