use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use tvrt::identities::IdentityReport;
use tvrt::rt::{rt_invariant_with, RtOptions};
use tvrt::selftest::{selftest, SelftestOptions};
use tvrt::triangulation::census_names;
use tvrt::verification::{verify_pairs, VerificationReport, VerifyOptions};
use tvrt::{
    bundled_pairs, census, parse_link, parse_triangulation, tv_state_sum, CycNumber, Error, Level,
    ManifoldPair, Method, ModularData, TvOptions,
};

const OK: u8 = 0;
const FAILED: u8 = 1;
const USAGE: u8 = 2;
const CEILING: u8 = 3;

#[derive(Parser)]
#[command(name = "tvrt", version, about = "Turaev-Viro and Reshetikhin-Turaev invariants of closed 3-manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Quantum dimensions, twists and global constants at one level.
    Data(Output),
    /// Turaev-Viro state sum of a triangulation.
    Tv(TvArgs),
    /// Reshetikhin-Turaev invariant of a framed surgery link.
    Rt(RtArgs),
    /// Compare Z_TV(M) with |τ(M)|².
    Verify(VerifyArgs),
    /// Run the algebraic and move-invariance property suites.
    Selftest(SelftestArgs),
    /// Bundled triangulations and surgery links.
    Census {
        #[command(subcommand)]
        command: CensusCommand,
    },
}

#[derive(Subcommand)]
enum CensusCommand {
    /// Write every census triangulation and bundled link to a directory.
    Export {
        #[arg(long)]
        dir: PathBuf,
    },
}

#[derive(Args)]
struct Output {
    /// Level r ≥ 3; the quantum parameter is A = exp(iπ/2r).
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(3..))]
    level: u32,
    /// Emit JSON on standard output.
    #[arg(long)]
    json: bool,
    /// Print only the numeric embedding of exact values.
    #[arg(long)]
    float: bool,
}

#[derive(Args)]
struct Engine {
    /// Worker threads.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    /// Refuse inputs whose work estimate exceeds this many colorings.
    #[arg(long, default_value_t = tvrt::tv::DEFAULT_CEILING, value_parser = clap::value_parser!(u64).range(1..))]
    ceiling: u64,
}

#[derive(Args)]
struct TvArgs {
    #[command(flatten)]
    out: Output,
    #[command(flatten)]
    engine: Engine,
    /// Triangulation in tri-v1 format.
    #[arg(long)]
    tri: PathBuf,
    /// brute, pruned or contract.
    #[arg(long, default_value = "pruned", value_parser = parse_method)]
    method: Method,
}

#[derive(Args)]
struct RtArgs {
    #[command(flatten)]
    out: Output,
    #[command(flatten)]
    engine: Engine,
    /// Framed link in lnk-v1 format.
    #[arg(long)]
    link: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    out: Output,
    #[command(flatten)]
    engine: Engine,
    /// Run every bundled manifold.
    #[arg(long, conflicts_with_all = ["tri", "link"])]
    suite: bool,
    #[arg(long, requires = "link", required_unless_present = "suite")]
    tri: Option<PathBuf>,
    #[arg(long, requires = "tri", required_unless_present = "suite")]
    link: Option<PathBuf>,
    #[arg(long, default_value = "pruned", value_parser = parse_method)]
    method: Method,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(3..=60))]
    max_level: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A failure carrying its exit code.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = if matches!(e, Error::ResourceLimit { .. }) { CEILING } else { USAGE };
        Failure(code, e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Data(out) => data(&out),
        Command::Tv(args) => tv(&args),
        Command::Rt(args) => rt(&args),
        Command::Verify(args) => verify(&args),
        Command::Selftest(args) => run_selftest(&args),
        Command::Census { command: CensusCommand::Export { dir } } => export(&dir),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("tvrt: {msg}");
            ExitCode::from(code)
        }
    }
}

fn level(r: u32) -> Result<ModularData, Failure> {
    Ok(ModularData::new(Level::new(r)?))
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure(USAGE, format!("cannot read {}: {e}", path.display())))
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

fn numeric(z: &CycNumber) -> String {
    let c = z.to_complex();
    let (re, im) = (tvrt::report::clean(c.re), tvrt::report::clean(c.im));
    if im == 0.0 {
        format!("{re}")
    } else {
        format!("{re} {} {}i", if im < 0.0 { "-" } else { "+" }, im.abs())
    }
}

/// Exact expression and numeric embedding, or the embedding alone.
fn show(z: &CycNumber, float: bool) -> String {
    if float {
        numeric(z)
    } else {
        format!("{z}  ≈ {}", numeric(z))
    }
}

fn threads(e: &Engine) -> Option<usize> {
    e.threads.map(|t| t as usize)
}

fn data(out: &Output) -> Outcome {
    let md = level(out.level)?;
    let r = out.level;
    let colors: Vec<_> = md
        .colors()
        .map(|c| json!({ "color": c, "quantum_dimension": md.qdim(c), "twist": md.twist(c) }))
        .collect();
    let k = md.num_colors() as u8;
    let triples = (0..k)
        .flat_map(|a| (0..k).flat_map(move |b| (0..k).map(move |c| (a, b, c))))
        .filter(|&(a, b, c)| md.admissible(a, b, c))
        .count();
    if out.json {
        print_json(&json!({
            "level": r,
            "zeta_order": md.order(),
            "colors": colors,
            "global_dimension": md.global_dim(),
            "delta_l": md.delta_l(),
            "delta_r": md.delta_r(),
            "admissible_triples": triples,
            "admissible_sixj": md.admissible_sixj_count(),
        }));
        return Ok(OK);
    }
    println!("level r = {r}, ζ = exp(2πi/{})", md.order());
    for c in md.colors() {
        println!("color {c}: dim = {}, twist = {}", show(md.qdim(c), out.float), show(md.twist(c), out.float));
    }
    println!("ω² = {}", show(md.global_dim(), out.float));
    println!("Δ_L = {}", show(md.delta_l(), out.float));
    println!("Δ_R = {}", show(md.delta_r(), out.float));
    println!("admissible triples: {triples}");
    println!("admissible 6j-symbols: {}", md.admissible_sixj_count());
    Ok(OK)
}

fn tv(args: &TvArgs) -> Outcome {
    let md = level(args.out.level)?;
    let t = parse_triangulation(&read(&args.tri)?)?;
    let opts = TvOptions { method: args.method, threads: threads(&args.engine), ceiling: args.engine.ceiling };
    let res = tv_state_sum(&t, &md, &opts)?;
    if args.out.json {
        print_json(&res);
        return Ok(OK);
    }
    println!("Z = {}", if args.out.float { numeric(&res.value) } else { res.value.to_string() });
    if !args.out.float {
        println!("numeric = {}", numeric(&res.value));
    }
    println!(
        "level {}, method {}, {} tetrahedra, {} edges, {} vertices",
        res.level, res.method, res.tetrahedra, res.edges, res.vertices
    );
    println!(
        "colorings: {} admissible of {} ({:.3}s)",
        res.colorings_admissible,
        res.colorings_total,
        res.wall_time.as_secs_f64()
    );
    Ok(OK)
}

fn rt(args: &RtArgs) -> Outcome {
    let md = level(args.out.level)?;
    let link = parse_link(&read(&args.link)?)?;
    let opts = RtOptions { threads: threads(&args.engine), ceiling: args.engine.ceiling, ..RtOptions::default() };
    let v = rt_invariant_with(&link, &md, opts)?;
    let modsq = v.modulus_squared(&md);
    let ld = link.linking_data();
    if args.out.json {
        print_json(&json!({
            "invariant": v,
            "modulus_squared": modsq,
            "linking_matrix": ld.linking_matrix,
            "signature": ld.signature,
            "h1": link.homology_h1().to_string(),
        }));
        return Ok(OK);
    }
    println!(
        "τ = ({}) · ω^{} · (Δ_L/ω)^{}",
        if args.out.float { numeric(&v.reduced) } else { v.reduced.to_string() },
        v.omega_power,
        v.anomaly_power
    );
    let (re, im) = (tvrt::report::clean(v.numeric.re), tvrt::report::clean(v.numeric.im));
    println!("numeric = {re} {} {}i", if im < 0.0 { "-" } else { "+" }, im.abs());
    println!("|τ|² = {}", show(&modsq, args.out.float));
    println!("components {}, signature {}, H1 = {}", link.component_count(), ld.signature, link.homology_h1());
    Ok(OK)
}

fn verify(args: &VerifyArgs) -> Outcome {
    let level_r = Level::new(args.out.level)?;
    let pairs = if args.suite {
        bundled_pairs()
    } else {
        let (tri, lnk) = (args.tri.as_ref().expect("clap"), args.link.as_ref().expect("clap"));
        let t = parse_triangulation(&read(tri)?)?;
        let l = parse_link(&read(lnk)?)?;
        let name = tri.file_stem().map_or("input".into(), |s| s.to_string_lossy().into_owned());
        vec![ManifoldPair::from_presentations(name, t, l)?]
    };
    let opts = VerifyOptions {
        tv: TvOptions { method: args.method, threads: threads(&args.engine), ceiling: args.engine.ceiling },
        rt: RtOptions { threads: threads(&args.engine), ceiling: args.engine.ceiling, ..RtOptions::default() },
    };
    let reports = verify_pairs(&pairs, &[level_r], &opts)?;
    let all = reports.iter().all(|r| r.equal);
    if args.out.json {
        print_json(&reports);
    } else {
        for r in &reports {
            print_report(r, args.out.float);
        }
    }
    Ok(if all { OK } else { FAILED })
}

fn print_report(r: &VerificationReport, float: bool) {
    let value = |z: &CycNumber| if float { numeric(z) } else { z.to_string() };
    println!(
        "{} {} r={}: Z_TV = {}, |τ|² = {}, residual {:e}",
        if r.equal { "PASS" } else { "FAIL" },
        r.name,
        r.level,
        value(&r.tv_value),
        value(&r.rt_modsq),
        r.numeric_residual
    );
}

fn run_selftest(args: &SelftestArgs) -> Outcome {
    let reports = selftest(SelftestOptions { max_level: args.max_level, seed: args.seed });
    let all = reports.iter().all(IdentityReport::passed);
    if args.json {
        let rows: Vec<_> = reports
            .iter()
            .map(|r| json!({ "name": r.name, "level": r.level, "cases": r.cases, "failures": r.failures, "passed": r.passed() }))
            .collect();
        print_json(&rows);
    } else {
        for r in &reports {
            println!(
                "{} {} r={}: {} cases, {} failures",
                if r.passed() { "PASS" } else { "FAIL" },
                r.name,
                r.level,
                r.cases,
                r.failures
            );
        }
    }
    Ok(if all { OK } else { FAILED })
}

fn export(dir: &Path) -> Outcome {
    let io = |e: std::io::Error| Failure(USAGE, format!("cannot write to {}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    for name in census_names() {
        let path = dir.join(format!("{name}.tri"));
        fs::write(&path, census()[name].to_tri_json()).map_err(io)?;
        println!("{}", path.display());
    }
    let mut links: Vec<(String, tvrt::FramedLink)> =
        bundled_pairs().into_iter().map(|p| (p.name, p.surgery)).collect();
    links.push(("L4_1_hopf".into(), tvrt::FramedLink::hopf(5, 1)));
    for (name, link) in links {
        let path = dir.join(format!("{name}.lnk"));
        fs::write(&path, link.to_lnk_json()).map_err(io)?;
        println!("{}", path.display());
    }
    Ok(OK)
}
