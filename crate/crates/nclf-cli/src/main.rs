//! `nclf` — job-file execution and machine-readable reports for exact
//! L-function computations over finite fields.
//!
//! Exit codes: 0 on success, 1 on input/usage errors, 2 when a verification
//! verdict is Distinguished (a disproof; should never happen).

use clap::{Args, Parser, Subcommand};
use nclf::codec;
use nclf::error::Error;
use nclf::ff::FqField;
use nclf::k1::K1Class;
use nclf::lfun;
use nclf::variety::Scheme;
use std::fs;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "nclf",
    version,
    about = "exact L-functions of sheaves over finite fields"
)]
struct Cli {
    /// Cap the number of worker threads (default: NCLF_THREADS or all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write the report to a file instead of stdout
    #[arg(long, global = true)]
    output: Option<std::path::PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, clap::ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Point counts and rational zeta reconstruction for a scheme
    Zeta(ZetaArgs),
    /// Euler-product L-function of a job file
    Lfun(JobArgs),
    /// Trace-formula verification of a job file
    Verify(JobArgs),
    /// Reduce a matrix over a coefficient ring to its K1 class
    K1(K1Args),
    /// Closed points of a scheme by degree
    Points(PointsArgs),
}

#[derive(Args)]
struct ZetaArgs {
    /// builtin:NAME (A1, Gm, P1, point(d)) or a path to a scheme JSON
    #[arg(long)]
    scheme: String,
    /// Base field size q = p^nu (required with builtin:)
    #[arg(long)]
    q: Option<u64>,
    /// Compute N_1..N_upto
    #[arg(long, default_value_t = 6)]
    upto: usize,
    /// Numerator degree bound (default: smallest bounds that fit)
    #[arg(long)]
    num_deg: Option<usize>,
    /// Denominator degree bound
    #[arg(long)]
    den_deg: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct JobArgs {
    /// Path to the job JSON
    #[arg(long)]
    job: String,
    /// Override the truncation order of the job
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct K1Args {
    /// Path to a ring JSON
    #[arg(long)]
    ring: String,
    /// Path to a matrix JSON (nested arrays of ring elements)
    #[arg(long)]
    matrix: String,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct PointsArgs {
    /// builtin:NAME or a path to a scheme JSON
    #[arg(long)]
    scheme: String,
    /// Base field size q = p^nu (required with builtin:)
    #[arg(long)]
    q: Option<u64>,
    #[arg(long, default_value_t = 5)]
    maxdeg: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("NCLF_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = threads {
        nclf::configure_threads(n);
    }
    match run(cli.command) {
        Ok((code, report)) => {
            let written = match &cli.output {
                Some(path) => fs::write(path, report).map_err(|e| format!("{e}")),
                None => {
                    print!("{report}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => code,
                Err(e) => {
                    eprintln!("error: cannot write output: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command) -> Result<(ExitCode, String), Error> {
    match cmd {
        Command::Zeta(args) => cmd_zeta(args),
        Command::Lfun(args) => cmd_job(args, false),
        Command::Verify(args) => cmd_job(args, true),
        Command::K1(args) => cmd_k1(args),
        Command::Points(args) => cmd_points(args),
    }
}

/// Parse q = p^nu by trial factoring.
fn field_from_q(q: u64) -> Result<FqField, Error> {
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut nu = 0;
            let mut v = q;
            while v.is_multiple_of(p) {
                v /= p;
                nu += 1;
            }
            if v != 1 {
                return Err(Error::Invalid(format!("{q} is not a prime power")));
            }
            return FqField::new(p, nu);
        }
        p += 1;
    }
    FqField::new(q, 1)
}

fn load_scheme(source: &str, q: Option<u64>) -> Result<Scheme, Error> {
    if let Some(name) = source.strip_prefix("builtin:") {
        let q = q.ok_or_else(|| Error::Invalid("builtin schemes need --q".into()))?;
        Scheme::builtin(name, &field_from_q(q)?)
    } else {
        let text = fs::read_to_string(source)
            .map_err(|e| Error::Invalid(format!("cannot read {source}: {e}")))?;
        let dto: codec::SchemeDto = serde_json::from_str(&text)?;
        codec::scheme_from_dto(&dto)
    }
}

fn cmd_zeta(args: ZetaArgs) -> Result<(ExitCode, String), Error> {
    use std::fmt::Write;
    let mut out = String::new();
    let scheme = load_scheme(&args.scheme, args.q)?;
    let counts = scheme.point_counts_upto(args.upto)?;
    let zeta = match (args.num_deg, args.den_deg) {
        (Some(a), Some(b)) => lfun::zeta_reconstruct(&counts, a, b)?,
        _ => {
            // smallest bounds that admit a consistent reconstruction
            let mut found = None;
            'outer: for total in 1..args.upto {
                for b in (0..=total).rev() {
                    let a = total - b;
                    if a + b + 1 > args.upto {
                        continue;
                    }
                    if let Ok(z) = lfun::zeta_reconstruct(&counts, a, b) {
                        found = Some(z);
                        break 'outer;
                    }
                }
            }
            found.ok_or(Error::NoSolutionWithinBounds)?
        }
    };
    match args.format {
        Format::Text => {
            let shown: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
            writeln!(
                out,
                "N_1..N_{} of {}: {}",
                args.upto,
                scheme.name().unwrap_or("scheme"),
                shown.join(",")
            )
            .unwrap();
            writeln!(out, "Z(T) = {zeta}").unwrap();
        }
        Format::Json => {
            let v = serde_json::json!({
                "scheme": scheme.name().unwrap_or("scheme"),
                "counts": counts,
                "zeta": zeta.to_string(),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&v)?).unwrap();
        }
    }
    Ok((ExitCode::SUCCESS, out))
}

fn cmd_job(args: JobArgs, verify: bool) -> Result<(ExitCode, String), Error> {
    use std::fmt::Write;
    let mut out = String::new();
    let text = fs::read_to_string(&args.job)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", args.job)))?;
    let job = codec::job_from_str(&text)?;
    if let Some(cmd) = &job.command {
        // the declared command is advisory: running `lfun` on a verify job
        // computes the Euler-product part, but an unknown command is an
        // input error
        if cmd != "lfun" && cmd != "verify" {
            return Err(Error::Invalid(format!(
                "job file declares unknown command {cmd:?}"
            )));
        }
        if verify && cmd == "lfun" {
            return Err(Error::Invalid(
                "job file declares command \"lfun\" but was run under \"verify\"".into(),
            ));
        }
    }
    let scheme = codec::scheme_from_dto(&job.scheme)?;
    let sheaf = codec::sheaf_from_dto(&scheme, &job.sheaf)?;
    let m = args.m.or(job.m).unwrap_or(8);
    let report = if verify {
        let methods = codec::job_methods(&job)?;
        lfun::verify_trace_formula(&sheaf, &scheme, m, &methods)?
    } else {
        lfun::l_report(&sheaf, &scheme, m)?
    };
    let dto = codec::report_to_dto(&report);
    match args.format {
        Format::Text => {
            writeln!(out, "scheme: {}   m = {}", dto.scheme, dto.m).unwrap();
            writeln!(
                out,
                "closed points by degree: {}",
                dto.closed_point_counts
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )
            .unwrap();
            writeln!(out, "L(T) = {}", report.euler_product.rep()).unwrap();
            if let Some(s) = &report.series_form {
                writeln!(out, "det series = {s}").unwrap();
            }
            for side in &report.global_sides {
                writeln!(out, "method {}: {}", side.method.name(), side.verdict).unwrap();
                for note in &side.notes {
                    writeln!(out, "  note: {note}").unwrap();
                }
            }
            for (method, why) in &report.skipped {
                writeln!(out, "method {} skipped: {why}", method.name()).unwrap();
            }
        }
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&dto)?).unwrap(),
    }
    if verify && !report.all_equal() {
        return Ok((ExitCode::from(2), out));
    }
    Ok((ExitCode::SUCCESS, out))
}

fn cmd_k1(args: K1Args) -> Result<(ExitCode, String), Error> {
    use std::fmt::Write;
    let mut out = String::new();
    let ring_text = fs::read_to_string(&args.ring)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", args.ring)))?;
    let ring = codec::ring_from_dto(&serde_json::from_str(&ring_text)?)?;
    let mat_text = fs::read_to_string(&args.matrix)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", args.matrix)))?;
    let rows: Vec<Vec<codec::ElemDto>> = serde_json::from_str(&mat_text)?;
    let mat = codec::matrix_from_dto(&ring, &rows)?;
    let class = K1Class::of_matrix(&mat)?;
    let dto = codec::k1_class_to_dto(&class);
    match args.format {
        Format::Text => {
            writeln!(out, "K1 class representative: {}", class.rep()).unwrap();
            if let Ok(d) = class.det() {
                writeln!(out, "determinant: {d}").unwrap();
            }
            if let Some(c) = class.certificate() {
                writeln!(out, "certificate: {} moves", c.moves.len()).unwrap();
            }
        }
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&dto)?).unwrap(),
    }
    Ok((ExitCode::SUCCESS, out))
}

fn cmd_points(args: PointsArgs) -> Result<(ExitCode, String), Error> {
    use std::fmt::Write;
    let mut out = String::new();
    let scheme = load_scheme(&args.scheme, args.q)?;
    let pts = scheme.closed_points(args.maxdeg)?;
    match args.format {
        Format::Text => {
            for d in 1..=args.maxdeg {
                let of_deg: Vec<String> = pts
                    .iter()
                    .filter(|p| p.degree() == d)
                    .map(|p| {
                        let coords: Vec<String> =
                            p.representative().iter().map(|c| format!("{c}")).collect();
                        format!("({})", coords.join(", "))
                    })
                    .collect();
                writeln!(out, "degree {d}: {} closed points", of_deg.len()).unwrap();
                if !of_deg.is_empty() {
                    writeln!(out, "  {}", of_deg.join("  ")).unwrap();
                }
            }
        }
        Format::Json => {
            let v: Vec<serde_json::Value> = pts
                .iter()
                .map(|p| {
                    serde_json::json!({
                        "chart": p.chart(),
                        "degree": p.degree(),
                        "rep": p.representative().iter().map(|c| c.coeffs().to_vec()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&v)?).unwrap();
        }
    }
    Ok((ExitCode::SUCCESS, out))
}
