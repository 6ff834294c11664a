//! Argument parsing and the subcommands.
//!
//! Exit statuses: 0 success, 1 a check failed or a counterexample was found,
//! 2 invalid parameters or input, 3 file system errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use polar_grassmann::code::{PolarCode, DEFAULT_BUDGET};
use polar_grassmann::counting::empirical_census;
use polar_grassmann::forms::{AlternatingForm, CanonicalParams, Case, FormOptions, QuadraticSpace};
use polar_grassmann::geometry::PolarGeometry;
use polar_grassmann::{Error, FieldCtx, Matrix};
use serde::Serialize;

use crate::error::{CliError, CliResult, Exit};
use crate::io::{self, Descriptor, Format};
use crate::parallel::{self, with_workers};
use crate::report::{Report, Status};
use crate::verify::{CheckName, Verifier};

/// Environment variable that takes precedence over `--budget`.
pub const BUDGET_ENV: &str = "POLAR_BUDGET";

#[derive(Debug, Parser)]
#[command(
    name = "polarcode",
    version,
    about = "Line polar Grassmann codes of parabolic quadrics over odd fields"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    /// Field order; the characteristic when --e is given
    #[arg(long)]
    pub q: u32,
    /// Extension degree, q^e elements
    #[arg(long)]
    pub e: Option<u32>,
    /// Rank of the quadric Q(2n, q)
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Worker threads; 0 uses every core. Never changes the output
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Largest exhaustive scan, in messages (overridden by POLAR_BUDGET)
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the code and export its generator matrix
    Build {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Generator file; a parameter summary goes to PATH.params.json
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Canonical pair (M, S) for a case and radical shape
    Canonical {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        d: usize,
        #[arg(long = "case")]
        case: u8,
        /// Case 4 entry of the last symplectic pair
        #[arg(long, default_value_t = 1)]
        alpha: u64,
        /// Case 4 identity minor in the last two columns of U
        #[arg(long)]
        u_minor: bool,
        /// Directory receiving descriptor.json, M.txt and S.txt
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Weight of the codeword of an alternating form
    Weight {
        #[command(flatten)]
        field: FieldArgs,
        /// Alternating form in matrix text format
        #[arg(required_unless_present = "descriptor")]
        form: Option<PathBuf>,
        /// Gram matrix of the quadric; the canonical one by default
        #[arg(long)]
        gram: Option<PathBuf>,
        /// Canonical pair descriptor instead of FORM and --gram
        #[arg(long, conflicts_with_all = ["form", "gram"])]
        descriptor: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Sample random forms against the claimed minimum distance
    Search {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Also scan every message when the budget allows
        #[arg(long)]
        exact: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Where a counterexample form is written
        #[arg(short = 'o', long = "output", default_value = "witness.txt")]
        output: PathBuf,
    },
    /// Check closed forms and theorems against brute force
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = CheckName::All)]
        check: CheckName,
        /// Random forms for the sampled identities
        #[arg(long, default_value_t = 100)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Also write the report here
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// List the totally singular lines in Plücker order
    Lines {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

fn field(args: &FieldArgs) -> CliResult<FieldCtx> {
    if args.n < 2 {
        return Err(Error::InadmissibleParams(format!("n >= 2 required, got {}", args.n)).into());
    }
    Ok(crate::field_from_args(args.q, args.e)?)
}

fn budget(run: &RunArgs) -> CliResult<u128> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{BUDGET_ENV}={v} is not a count"))),
        Err(_) => Ok(run.budget),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))
}

/// Runs a parsed command; returns the exit status.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    match dispatch(cli, out) {
        Ok(code) => code as u8,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit() as u8
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> CliResult<Exit> {
    match cli.command {
        Command::Build {
            field: fa,
            format,
            output,
        } => build(&fa, format, output, out),
        Command::Canonical {
            field: fa,
            r,
            d,
            case,
            alpha,
            u_minor,
            output,
        } => canonical(&fa, r, d, case, alpha, u_minor, output, out),
        Command::Weight {
            field: fa,
            form,
            gram,
            descriptor,
            format,
        } => weight(&fa, form, gram, descriptor, format, out),
        Command::Search {
            field: fa,
            run,
            samples,
            seed,
            exact,
            format,
            output,
        } => search(&fa, &run, samples, seed, exact, format, output, out),
        Command::Verify {
            field: fa,
            run,
            check,
            samples,
            seed,
            format,
            output,
        } => {
            let f = field(&fa)?;
            let budget = budget(&run)?;
            let mut v = Verifier::new(f.clone(), fa.n, samples, seed, budget)?;
            let checks = with_workers(run.workers, || v.run(check))?;
            let report = Report::new("verify", f.q(), fa.n, checks);
            let text = match format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            if let Some(path) = output {
                io::write(&path, &text)?;
            }
            emit(out, &text)?;
            Ok(if report.status == Status::Mismatch {
                Exit::Mismatch
            } else {
                Exit::Ok
            })
        }
        Command::Lines {
            field: fa,
            format,
            output,
        } => {
            let f = field(&fa)?;
            let geom = PolarGeometry::new(&QuadraticSpace::standard(&f, fa.n)?);
            let text = io::line_list(&geom, format);
            match output {
                Some(path) => io::write(&path, &text)?,
                None => emit(out, &text)?,
            }
            Ok(Exit::Ok)
        }
    }
}

#[derive(Serialize)]
struct BuildSummary {
    #[serde(rename = "N")]
    length: usize,
    #[serde(rename = "K")]
    dimension: usize,
    q: u32,
    n: usize,
    d_claimed: u64,
}

fn build(
    fa: &FieldArgs,
    format: Format,
    output: Option<PathBuf>,
    out: &mut dyn Write,
) -> CliResult<Exit> {
    let f = field(fa)?;
    let code = PolarCode::standard(&f, fa.n)?;
    let p = code.params();
    if let Some(path) = output {
        io::write(&path, &io::export_code(&code, format))?;
        let summary = BuildSummary {
            length: p.length,
            dimension: p.dimension,
            q: p.q,
            n: p.n,
            d_claimed: p.d_claimed,
        };
        let mut json = serde_json::to_string_pretty(&summary)?;
        json.push('\n');
        let mut summary_path = path.into_os_string();
        summary_path.push(".params.json");
        io::write(&PathBuf::from(summary_path), &json)?;
    }
    emit(
        out,
        &format!("{} {} {}\n", p.length, p.dimension, p.d_claimed),
    )?;
    Ok(Exit::Ok)
}

#[allow(clippy::too_many_arguments)]
fn canonical(
    fa: &FieldArgs,
    r: usize,
    d: usize,
    case: u8,
    alpha: u64,
    u_minor: bool,
    output: Option<PathBuf>,
    out: &mut dyn Write,
) -> CliResult<Exit> {
    let f = field(fa)?;
    let params = CanonicalParams::new(fa.n, r, d, Case::from_number(case)?)?;
    let opts = FormOptions {
        s11: None,
        alpha: f.element(alpha)?,
        u_minor,
    };
    let qs = QuadraticSpace::canonical(&f, params)?;
    let af = AlternatingForm::canonical(&f, params, &opts)?;
    let mut desc = serde_json::to_string_pretty(&Descriptor::new(&f, params, &opts, &af))?;
    desc.push('\n');
    match output {
        Some(dir) => {
            std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
            io::write(&dir.join("descriptor.json"), &desc)?;
            io::write(&dir.join("M.txt"), &qs.gram().to_text(&f))?;
            io::write(&dir.join("S.txt"), &af.matrix().to_text(&f))?;
        }
        None => emit(out, &desc)?,
    }
    Ok(Exit::Ok)
}

#[derive(Serialize)]
struct WeightReport {
    weight: usize,
    r: usize,
    a_r: i64,
    a_v: i64,
    n0: i64,
    n_plus: i64,
    n_minus: i64,
    f: i64,
}

fn weight(
    fa: &FieldArgs,
    form: Option<PathBuf>,
    gram: Option<PathBuf>,
    descriptor: Option<PathBuf>,
    format: Format,
    out: &mut dyn Write,
) -> CliResult<Exit> {
    let f = field(fa)?;
    let (qs, af) = match descriptor {
        Some(path) => {
            let desc: Descriptor = serde_json::from_str(&io::read_to_string(&path)?)?;
            let (df, qs, af) = desc.build()?;
            if df.q() != f.q() || desc.n != fa.n {
                return Err(Error::Malformed(format!(
                    "descriptor is for q = {}, n = {}",
                    df.q(),
                    desc.n
                ))
                .into());
            }
            (qs, af)
        }
        None => {
            let path = form.expect("clap requires FORM without --descriptor");
            let s = Matrix::from_text(&f, &io::read_to_string(&path)?)?;
            let qs = match gram {
                Some(g) => {
                    QuadraticSpace::new(&f, fa.n, Matrix::from_text(&f, &io::read_to_string(&g)?)?)?
                }
                None => QuadraticSpace::standard(&f, fa.n)?,
            };
            if s.rows() != qs.dim() || s.cols() != qs.dim() {
                return Err(Error::DimensionMismatch {
                    expected: qs.dim(),
                    found: s.rows(),
                }
                .into());
            }
            (qs, AlternatingForm::new(&f, s)?)
        }
    };
    let code = PolarCode::build(&qs)?;
    let w = code.codeword_from_form(&af)?.weight;
    let c = empirical_census(code.geometry(), &af)?;
    let report = WeightReport {
        weight: w,
        r: af.r(),
        a_r: c.a_r as i64,
        a_v: c.a_v as i64,
        n0: c.n0 as i64,
        n_plus: c.n_plus as i64,
        n_minus: c.n_minus as i64,
        f: c.f as i64,
    };
    let text = match format {
        Format::Text => format!(
            "weight {} r {}\ncensus a_r {} a_v {} n0 {} n_plus {} n_minus {} f {}\n",
            report.weight,
            report.r,
            report.a_r,
            report.a_v,
            report.n0,
            report.n_plus,
            report.n_minus,
            report.f
        ),
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
    };
    emit(out, &text)?;
    Ok(Exit::Ok)
}

#[derive(Serialize)]
struct SearchReport {
    command: &'static str,
    q: u32,
    n: usize,
    samples: u64,
    seed: u64,
    upper_bound: u64,
    claimed: u64,
    samples_checked: u64,
    min_sampled: Option<u64>,
    exact_d_min: Option<u64>,
    witness: Option<String>,
    status: Status,
}

#[allow(clippy::too_many_arguments)]
fn search(
    fa: &FieldArgs,
    run: &RunArgs,
    samples: u64,
    seed: u64,
    exact: bool,
    format: Format,
    output: PathBuf,
    out: &mut dyn Write,
) -> CliResult<Exit> {
    let f = field(fa)?;
    let budget = budget(run)?;
    let code = PolarCode::standard(&f, fa.n)?;
    let p = code.params();
    let mut report = SearchReport {
        command: "search",
        q: p.q,
        n: p.n,
        samples,
        seed,
        upper_bound: 0,
        claimed: p.d_claimed,
        samples_checked: 0,
        min_sampled: None,
        exact_d_min: None,
        witness: None,
        status: Status::Ok,
    };
    let result = with_workers(run.workers, || {
        let certified = parallel::min_distance_certified(&code, samples, seed)?;
        let exact = match exact {
            true => Some(parallel::min_distance_exact(&code, budget)?.d_min),
            false => None,
        };
        Ok::<_, Error>((certified, exact))
    });
    match result {
        Ok((c, exact_d_min)) => {
            report.upper_bound = c.upper_bound;
            report.samples_checked = c.samples_checked;
            report.min_sampled = c.min_sampled;
            report.exact_d_min = exact_d_min;
            if c.upper_bound != p.d_claimed || exact_d_min.is_some_and(|d| d != p.d_claimed) {
                report.status = Status::Mismatch;
            }
        }
        Err(Error::CounterexampleFound { weight, form, .. }) => {
            io::write(&output, &form.to_text(&f))?;
            report.min_sampled = Some(weight as u64);
            report.witness = Some(output.display().to_string());
            report.status = Status::Mismatch;
        }
        Err(e) => return Err(e.into()),
    }
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Text => {
            let opt = |x: Option<u64>| x.map_or("none".to_string(), |v| v.to_string());
            format!(
                "upper_bound {} min_sampled {} samples {} claimed {} exact {}\n",
                report.upper_bound,
                opt(report.min_sampled),
                report.samples_checked,
                report.claimed,
                opt(report.exact_d_min)
            )
        }
    };
    emit(out, &text)?;
    Ok(if report.status == Status::Ok {
        Exit::Ok
    } else {
        Exit::Mismatch
    })
}
