//! Command-line front end: realize point configurations, run rule checks,
//! search for sublattice embeddings, run the built-in regression gallery,
//! and export Hasse diagrams.
//!
//! Exit codes: 0 when the queried property holds or an embedding is found,
//! 1 when it fails or no embedding exists, 2 on usage or input errors.

use std::fmt::Write as _;
use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cvxgeo::closure::{format_family, is_convex_geometry, parse_family, ClosedFamily};
use cvxgeo::gallery;
use cvxgeo::geometry::{build_geometry, parse_points};
use cvxgeo::lattice::{
    build_lattice, count_subgeometry_embeddings, find_subgeometry_embedding, to_dot,
};
use cvxgeo::rules::{
    check_caratheodory, check_carousel, check_sharp_carousel_2, check_sharp_theorem_elementwise,
};

#[derive(Parser)]
#[command(
    name = "cvxgeo",
    version,
    about = "exact toolkit for finite convex geometries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the closed sets of a rational point configuration.
    Realize {
        /// Point-configuration file (`dim` line, then `p <label> <coords>`).
        points_file: String,
        /// Print the closed sets in the family format (the default).
        #[arg(long, conflicts_with = "check")]
        closed_sets: bool,
        /// Check the convex-geometry axioms instead of listing.
        #[arg(long)]
        check: bool,
    },
    /// Run a rule check on a family file or a point configuration.
    Rule {
        /// Family file (`ground`/`closed` lines) or points file (`dim`/`p`).
        input_file: String,
        #[arg(long, value_enum)]
        rule: RuleName,
        /// Parameter for the caratheodory and carousel rules.
        #[arg(short)]
        n: Option<usize>,
    },
    /// Search for a meet- and join-preserving lattice embedding.
    Embed {
        g_file: String,
        h_file: String,
        /// Also count all embeddings (micro scale only).
        #[arg(long)]
        count_all: bool,
    },
    /// Run the built-in construction gallery as a regression suite.
    Paper {
        /// Run every item (the default).
        #[arg(long, conflicts_with = "item")]
        all: bool,
        /// Run a single item by name.
        #[arg(long)]
        item: Option<String>,
    },
    /// Enumerate small convex geometries passing the carousel and sharp
    /// rules and try to realize each in the plane.
    Search {
        #[arg(long, default_value_t = 3)]
        max_ground: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        budget: u32,
    },
    /// Export the Hasse diagram of a family's lattice as DOT text.
    ExportDot { family_file: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleName {
    Caratheodory,
    Carousel,
    Sharp2,
    SharpElem,
}

fn read_file(path: &str) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
}

/// Loads a closed family from either file format, distinguished by the
/// first directive.
fn load_family(path: &str) -> Result<ClosedFamily, String> {
    let text = read_file(path)?;
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    if first.starts_with("dim") {
        let config = parse_points(&text).map_err(|e| format!("{path}: {e}"))?;
        build_geometry(&config).map_err(|e| format!("{path}: {e}"))
    } else {
        parse_family(&text).map_err(|e| format!("{path}: {e}"))
    }
}

fn cmd_realize(path: &str, check: bool) -> Result<u8, String> {
    let text = read_file(path)?;
    let config = parse_points(&text).map_err(|e| format!("{path}: {e}"))?;
    let family = build_geometry(&config).map_err(|e| format!("{path}: {e}"))?;
    if check {
        let report = is_convex_geometry(&family);
        println!("convex geometry: {report}");
        Ok(if report.holds { 0 } else { 1 })
    } else {
        print!("{}", format_family(&family));
        Ok(0)
    }
}

fn cmd_rule(path: &str, rule: RuleName, n: Option<usize>) -> Result<u8, String> {
    let family = load_family(path)?;
    let verdict = match rule {
        RuleName::Caratheodory => {
            let n = n.ok_or("--rule caratheodory requires -n")?;
            check_caratheodory(&family, n).map_err(|e| e.to_string())?
        }
        RuleName::Carousel => {
            let n = n.ok_or("--rule carousel requires -n")?;
            check_carousel(&family, n).map_err(|e| e.to_string())?
        }
        RuleName::Sharp2 => check_sharp_carousel_2(&family).map_err(|e| e.to_string())?,
        RuleName::SharpElem => {
            check_sharp_theorem_elementwise(&family).map_err(|e| e.to_string())?
        }
    };
    println!("{verdict}");
    Ok(if verdict.holds { 0 } else { 1 })
}

fn cmd_embed(g_path: &str, h_path: &str, count_all: bool) -> Result<u8, String> {
    let g = build_lattice(&load_family(g_path)?).map_err(|e| e.to_string())?;
    let h = build_lattice(&load_family(h_path)?).map_err(|e| e.to_string())?;
    let found = find_subgeometry_embedding(&g, &h).map_err(|e| e.to_string())?;
    if count_all {
        let count = count_subgeometry_embeddings(&g, &h).map_err(|e| e.to_string())?;
        println!("embeddings: {count}");
    }
    match found {
        Some(emb) => {
            print!("{emb}");
            Ok(0)
        }
        None => {
            println!("none");
            Ok(1)
        }
    }
}

fn cmd_paper(item: Option<String>) -> Result<u8, String> {
    let runs = match &item {
        Some(name) => gallery::run_item(name).map_err(|e| e.to_string())?,
        None => gallery::run_all().map_err(|e| e.to_string())?,
    };
    let mut failed = 0usize;
    let mut out = String::new();
    for run in &runs {
        let status = if run.pass() { "PASS" } else { "FAIL" };
        if !run.pass() {
            failed += 1;
        }
        writeln!(
            out,
            "{status}  {:9} {} [expected: {} | actual: {}]",
            run.item, run.claim, run.expected, run.actual
        )
        .expect("string write");
    }
    write!(
        out,
        "claims: {}, passed: {}, failed: {failed}",
        runs.len(),
        runs.len() - failed
    )
    .expect("string write");
    println!("{out}");
    Ok(if failed == 0 { 0 } else { 1 })
}

fn cmd_search(max_ground: usize, seed: u64, budget: u32) -> Result<u8, String> {
    let report = gallery::conjecture_search(max_ground, seed, budget).map_err(|e| e.to_string())?;
    print!("{report}");
    Ok(if report.inconclusive().is_empty() {
        0
    } else {
        1
    })
}

fn cmd_export_dot(path: &str) -> Result<u8, String> {
    let family = load_family(path)?;
    let lattice = build_lattice(&family).map_err(|e| e.to_string())?;
    print!("{}", to_dot(&lattice));
    Ok(0)
}

fn configure_threads() -> Result<(), String> {
    match std::env::var("CVXGEO_THREADS") {
        Err(_) => Ok(()),
        Ok(v) => {
            let threads: usize =
                v.parse().ok().filter(|&t| t >= 1).ok_or_else(|| {
                    format!("CVXGEO_THREADS must be a positive integer, got `{v}`")
                })?;
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global()
                .map_err(|e| e.to_string())
        }
    }
}

fn main() -> ExitCode {
    // die quietly when the consumer of a pipe goes away (realize and
    // export-dot listings are routinely piped to head)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Realize {
            points_file, check, ..
        } => cmd_realize(&points_file, check),
        Command::Rule {
            input_file,
            rule,
            n,
        } => cmd_rule(&input_file, rule, n),
        Command::Embed {
            g_file,
            h_file,
            count_all,
        } => cmd_embed(&g_file, &h_file, count_all),
        Command::Paper { item, .. } => cmd_paper(item),
        Command::Search {
            max_ground,
            seed,
            budget,
        } => cmd_search(max_ground, seed, budget),
        Command::ExportDot { family_file } => cmd_export_dot(&family_file),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
