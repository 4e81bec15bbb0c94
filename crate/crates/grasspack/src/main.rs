//! Command-line front end over the library: construct, optimize, evaluate,
//! audit, embed, match, tour, and convert packings stored as plain text.
//!
//! Exit status is 0 on success, 2 on any usage or validation error, and 3
//! when a matching threshold is infeasible. `-` stands for stdin or stdout
//! in every file position.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use grasspack::constructions::{
    diplo_simplex_lines, hamming10_code, lines_from_code, lines_from_conference_matrix,
    nordstrom_robinson_code, paley_conference_matrix, planes18_g42, planes28_g73, planes70_g84,
    BinaryCode,
};
use grasspack::io::{parse_int_matrix, parse_packing, parse_points, serialize_packing};
use grasspack::{
    audit, best_matching, embed_points, embedding_dimension, matching_to_packing, min_distance,
    min_interplane_angle, optimize, plane_to_lr, principal_angles, solve_matching, tour,
    BoundReport, Metric, OptimConfig, Packing,
};

// ─── argument surface ──────────────────────────────────────────────────────

#[derive(Parser)]
#[command(
    name = "grasspack",
    version,
    about = "Packings of n-dimensional subspaces of R^m: construct, optimize, audit",
    after_help = "Set GRASSPACK_THREADS to cap the number of parallel restart workers."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a packing of N n-planes in R^m from random starts
    Optimize(OptimizeArgs),
    /// Summarize the minimal distance and angle of a packing file
    Eval(EvalArgs),
    /// Score a packing against the simplex and orthoplex bounds
    Audit(AuditArgs),
    /// Emit a built-in packing
    Construct(ConstructArgs),
    /// Embed a packing on its chordal sphere and report the spanned dimension
    Embed(EmbedArgs),
    /// Match an antipodal spherical code with itself into a G(4, 2) packing
    #[command(name = "match")]
    Match(MatchArgs),
    /// Order the planes of a packing into a short closed tour
    Tour(TourArgs),
    /// Rewrite a G(4, 2) packing as point pairs on two 2-spheres
    ConvertBinocular(ConvertBinocularArgs),
}

#[derive(Args)]
struct OptimizeArgs {
    /// Ambient dimension m
    m: usize,
    /// Subspace dimension n
    n: usize,
    /// Number of planes N
    count: usize,
    /// Distance to optimize: chordal or geodesic
    #[arg(long, default_value = "chordal", value_parser = parse_metric)]
    metric: Metric,
    /// Independent random restarts
    #[arg(long, default_value_t = 50)]
    restarts: usize,
    /// Base RNG seed; restart k draws from stream k
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Packing file to resume from (only restart 0 starts there)
    #[arg(long)]
    init: Option<String>,
    /// Write the best packing here; '-' sends it to stdout (report moves to stderr)
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct EvalArgs {
    /// Packing file; '-' for stdin
    file: String,
    /// Metric to evaluate under; defaults to the file's tag
    #[arg(long, value_parser = parse_metric)]
    metric: Option<Metric>,
}

#[derive(Args)]
struct AuditArgs {
    /// Packing file; '-' for stdin
    file: String,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(subcommand)]
    name: ConstructName,
}

#[derive(Args)]
struct OutArg {
    /// Where to write the packing file; '-' for stdout
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Subcommand)]
enum ConstructName {
    /// 70 planes in G(8, 4) meeting the orthoplex bound
    #[command(name = "planes70-g84")]
    Planes70G84(OutArg),
    /// 28 planes in G(7, 3) meeting the simplex bound
    #[command(name = "planes28-g73")]
    Planes28G73(OutArg),
    /// 18 planes in G(4, 2) with minimal squared chordal distance 1
    #[command(name = "planes18-g42")]
    Planes18G42(OutArg),
    /// Equiangular lines from a conference matrix
    Conference {
        /// Build the Paley conference matrix of order q + 1 (q a prime, q = 1 mod 4)
        #[arg(long)]
        q: Option<usize>,
        /// Read the conference matrix from a file of integer rows
        #[arg(long)]
        file: Option<String>,
        #[command(flatten)]
        out: OutArg,
    },
    /// n + 1 equiangular lines in R^n from the diplo-simplex
    Diplo {
        /// Ambient dimension n
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// 16 lines in G(10, 1) from the shortened Hamming code
    Hamming10(OutArg),
    /// 128 lines in G(16, 1) from the Nordstrom-Robinson code
    NordstromRobinson(OutArg),
    /// Lines from a complement-closed binary code given as rows of 0/1 digits
    Code {
        /// Code file: one codeword per row, whitespace-separated bits
        #[arg(long)]
        file: String,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Args)]
struct EmbedArgs {
    /// Packing file; '-' for stdin
    file: String,
    /// Relative eigenvalue tolerance for the rank count
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Args)]
struct MatchArgs {
    /// Point file: one x y z per line, set closed under negation
    points: String,
    /// Require every pair to reach this squared chordal distance
    /// instead of maximizing; infeasible thresholds exit with status 3
    #[arg(long)]
    threshold: Option<f64>,
    /// Where to write the induced packing; '-' for stdout
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct TourArgs {
    /// Packing file; '-' for stdin
    file: String,
    /// Where to write the visiting order; '-' for stdout
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct ConvertBinocularArgs {
    /// Packing file of 2-planes in R^4; '-' for stdin
    file: String,
    /// Where to write the point pairs; '-' for stdout
    #[arg(long, default_value = "-")]
    out: String,
}

fn parse_metric(s: &str) -> Result<Metric, String> {
    s.parse::<Metric>().map_err(|e| e.to_string())
}

// ─── failure plumbing ──────────────────────────────────────────────────────

/// A validation failure: message for stderr, exit status 2.
struct Invalid(String);

impl From<grasspack::Error> for Invalid {
    fn from(e: grasspack::Error) -> Self {
        Invalid(e.to_string())
    }
}

fn read_input(path: &str) -> Result<String, Invalid> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Invalid(format!("cannot read stdin: {e}")))?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| Invalid(format!("cannot read {path}: {e}")))
    }
}

fn write_output(path: &str, content: &str) -> Result<(), Invalid> {
    if path == "-" {
        print!("{content}");
        Ok(())
    } else {
        fs::write(path, content).map_err(|e| Invalid(format!("cannot write {path}: {e}")))
    }
}

fn read_packing(path: &str) -> Result<Packing, Invalid> {
    Ok(parse_packing(&read_input(path)?)?)
}

// ─── report formatting ─────────────────────────────────────────────────────

fn header_line(packing: &Packing, metric: Metric) -> String {
    format!(
        "m {} n {} N {} metric {}\n",
        packing.m(),
        packing.n(),
        packing.len(),
        metric
    )
}

/// Minimal distance, its square, the minimal interplane angle, and the
/// principal angles of the closest pair.
fn distance_summary(packing: &Packing, metric: Metric) -> Result<String, Invalid> {
    let (dist, (i, j)) = min_distance(packing, metric)?;
    let angle = min_interplane_angle(packing)?.to_degrees();
    let pair = principal_angles(&packing.planes()[i], &packing.planes()[j])?;
    let pair_degrees: Vec<String> = pair
        .angles()
        .iter()
        .map(|t| format!("{:.4}", t.to_degrees()))
        .collect();
    let mut out = String::new();
    out.push_str(&format!("min distance {dist:.14}\n"));
    out.push_str(&format!("min distance^2 {:.14}\n", dist * dist));
    out.push_str(&format!("min angle {angle:.4} deg\n"));
    out.push_str(&format!("closest pair {i} {j}\n"));
    out.push_str(&format!(
        "closest pair angles {} deg\n",
        pair_degrees.join(" ")
    ));
    Ok(out)
}

fn bound_summary(report: &BoundReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("m {} n {} N {}\n", report.m, report.n, report.count));
    out.push_str(&format!("embedding dimension {}\n", report.embedding_dim));
    out.push_str(&format!("min d_c^2 {:.14}\n", report.achieved_sq));
    out.push_str(&format!("simplex bound {:.14}\n", report.simplex_bound));
    if let Some(bound) = report.orthoplex_bound {
        out.push_str(&format!("orthoplex bound {bound:.14}\n"));
    }
    out.push_str(&format!("ratio {:.14}\n", report.ratio));
    out.push_str(&format!(
        "meets bound {}\n",
        if report.meets { "yes" } else { "no" }
    ));
    out
}

// ─── subcommands ───────────────────────────────────────────────────────────

fn run_optimize(args: OptimizeArgs) -> Result<ExitCode, Invalid> {
    let mut config = OptimConfig::new(args.metric);
    config.restarts = args.restarts;
    config.seed = args.seed;
    if let Some(path) = &args.init {
        config.initial_packing = Some(read_packing(path)?);
    }
    let result = optimize(args.m, args.n, args.count, &config)?;
    let mut report = header_line(&result.packing, args.metric);
    report.push_str(&format!(
        "restarts {} seed {} best restart {}\n",
        args.restarts, args.seed, result.restart_index
    ));
    report.push_str(&distance_summary(&result.packing, args.metric)?);
    match args.out.as_deref() {
        None => print!("{report}"),
        Some("-") => {
            // Keep stdout a clean packing file for pipelines.
            eprint!("{report}");
            print!("{}", serialize_packing(&result.packing));
        }
        Some(path) => {
            print!("{report}");
            write_output(path, &serialize_packing(&result.packing))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_eval(args: EvalArgs) -> Result<ExitCode, Invalid> {
    let packing = read_packing(&args.file)?;
    let metric = args.metric.unwrap_or_else(|| packing.metric());
    let mut report = header_line(&packing, metric);
    report.push_str(&distance_summary(&packing, metric)?);
    print!("{report}");
    Ok(ExitCode::SUCCESS)
}

fn run_audit(args: AuditArgs) -> Result<ExitCode, Invalid> {
    let packing = read_packing(&args.file)?;
    let report = audit(&packing)?;
    print!("{}", bound_summary(&report));
    Ok(ExitCode::SUCCESS)
}

fn conference_packing(q: Option<usize>, file: Option<String>) -> Result<Packing, Invalid> {
    let matrix = match (q, file) {
        (Some(q), None) => paley_conference_matrix(q)?,
        (None, Some(path)) => parse_int_matrix(&read_input(&path)?)?,
        _ => return Err(Invalid("give exactly one of --q or --file".into())),
    };
    Ok(lines_from_conference_matrix(&matrix)?)
}

fn code_packing(path: &str) -> Result<Packing, Invalid> {
    let rows = parse_int_matrix(&read_input(path)?)?;
    let length = rows[0].len();
    if length > 64 {
        return Err(Invalid(format!(
            "binary code length is capped at 64, got {length}"
        )));
    }
    let mut words = Vec::with_capacity(rows.len());
    for row in &rows {
        let mut word = 0u64;
        for (i, &bit) in row.iter().enumerate() {
            match bit {
                0 => {}
                1 => word |= 1 << i,
                other => {
                    return Err(Invalid(format!(
                        "code file entries must be 0 or 1, got {other}"
                    )))
                }
            }
        }
        words.push(word);
    }
    let code = BinaryCode::new(length, words)?;
    Ok(lines_from_code(&code)?)
}

fn run_construct(args: ConstructArgs) -> Result<ExitCode, Invalid> {
    let (packing, out) = match args.name {
        ConstructName::Planes70G84(out) => (planes70_g84(), out),
        ConstructName::Planes28G73(out) => (planes28_g73(), out),
        ConstructName::Planes18G42(out) => (planes18_g42(), out),
        ConstructName::Conference { q, file, out } => (conference_packing(q, file)?, out),
        ConstructName::Diplo { n, out } => (diplo_simplex_lines(n)?, out),
        ConstructName::Hamming10(out) => (lines_from_code(&hamming10_code())?, out),
        ConstructName::NordstromRobinson(out) => {
            (lines_from_code(&nordstrom_robinson_code())?, out)
        }
        ConstructName::Code { file, out } => (code_packing(&file)?, out),
    };
    write_output(&out.out, &serialize_packing(&packing))?;
    Ok(ExitCode::SUCCESS)
}

fn run_embed(args: EmbedArgs) -> Result<ExitCode, Invalid> {
    let packing = read_packing(&args.file)?;
    let report = embedding_dimension(&packing, args.tol)?;
    let mut out = format!(
        "# {} planes in G({}, {}), metric {}\n",
        packing.len(),
        packing.m(),
        packing.n(),
        packing.metric()
    );
    out.push_str(&format!(
        "# D_found {} D_theory {} radius {:.14} tol {:e}\n",
        report.d_found, report.d_theory, report.radius, report.tol
    ));
    let eigs: Vec<String> = report
        .gram_eigenvalues
        .iter()
        .map(|l| format!("{l:.6e}"))
        .collect();
    out.push_str(&format!("# gram eigenvalues {}\n", eigs.join(" ")));
    if report.negative_eigenvalue() {
        out.push_str("# negative eigenvalues present: no exact Euclidean embedding\n");
    }
    out.push_str("# coordinates below realize the chordal distances; one plane per row\n");
    for point in embed_points(&packing) {
        let row: Vec<String> = point.iter().map(|x| format!("{x:.16e}")).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

fn run_match(args: MatchArgs) -> Result<ExitCode, Invalid> {
    let points = parse_points(&read_input(&args.points)?)?;
    let matching = match args.threshold {
        Some(threshold) => match solve_matching(&points, threshold)? {
            Some(matching) => matching,
            None => {
                eprintln!(
                    "no antipode-respecting matching reaches squared chordal distance {threshold}"
                );
                return Ok(ExitCode::from(3));
            }
        },
        None => best_matching(&points)?,
    };
    let packing = matching_to_packing(&matching)?;
    let perm: Vec<String> = matching.perm().iter().map(|k| k.to_string()).collect();
    let mut out = format!(
        "# matching of {} antipodal classes, objective min d_c^2 = {:.14}\n",
        packing.len(),
        matching.objective()
    );
    out.push_str(&format!("# permutation {}\n", perm.join(" ")));
    out.push_str(&serialize_packing(&packing));
    write_output(&args.out, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn run_tour(args: TourArgs) -> Result<ExitCode, Invalid> {
    let packing = read_packing(&args.file)?;
    let tour = tour(&packing)?;
    let mut out = format!(
        "# tour of {} planes: total length {:.14}, min edge {:.14}, max edge {:.14}\n",
        packing.len(),
        tour.total_length,
        tour.min_edge,
        tour.max_edge
    );
    for index in &tour.order {
        out.push_str(&format!("{index}\n"));
    }
    write_output(&args.out, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn run_convert_binocular(args: ConvertBinocularArgs) -> Result<ExitCode, Invalid> {
    let packing = read_packing(&args.file)?;
    let mut out = format!(
        "# binocular code of {} planes in G(4, 2)\n# columns: lx ly lz rx ry rz\n",
        packing.len()
    );
    for plane in packing.planes() {
        let pair = plane_to_lr(plane)?;
        let (l, r) = (pair.l(), pair.r());
        out.push_str(&format!(
            "{:.16e} {:.16e} {:.16e} {:.16e} {:.16e} {:.16e}\n",
            l.x, l.y, l.z, r.x, r.y, r.z
        ));
    }
    write_output(&args.out, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn run(command: Command) -> Result<ExitCode, Invalid> {
    match command {
        Command::Optimize(args) => run_optimize(args),
        Command::Eval(args) => run_eval(args),
        Command::Audit(args) => run_audit(args),
        Command::Construct(args) => run_construct(args),
        Command::Embed(args) => run_embed(args),
        Command::Match(args) => run_match(args),
        Command::Tour(args) => run_tour(args),
        Command::ConvertBinocular(args) => run_convert_binocular(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
