mod plot;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use denjoy::certified::{parse_rational, rational_to_string};
use denjoy::circle::{build_map, trajectory_csv, BlowupSchedule, DenjoyMap, GapIndex};
use denjoy::sphere::{end_count, end_count_json, induced_end_map, relation_json};
use denjoy::topology::{
    euler_and_rank, glue_eval, mapping_torus_complex, parse_expression, spine_complex,
};
use denjoy::{gl2z_equivalent, gl2z_matrix_search, ContinuedFraction, Gl2zVerdict};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::path::PathBuf;
use std::process::ExitCode;

/// Denjoy circle maps, their mapping tori, and rotation-number
/// classification.
#[derive(Parser)]
#[command(name = "denjoy", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide GL(2,Z)-equivalence of two rotation numbers.
    ///
    /// Exit code 0: equivalent, 1: not equivalent, 2: unknown at this
    /// depth, 3: usage error.
    Classify {
        /// First rotation number, e.g. "[0;(2)]"
        alpha: String,
        /// Second rotation number, e.g. "[0;1,(2)]"
        alpha2: String,
        /// Prefix-deletion depth for stream comparisons
        #[arg(long, default_value_t = 64)]
        depth: usize,
        /// Entry bound for the brute-force matrix search
        #[arg(long = "matrix-bound", default_value_t = 1)]
        matrix_bound: u64,
        /// Tolerance for the certified matrix-search check
        #[arg(long, default_value = "1e-6")]
        tol: String,
    },
    /// Run the semi-conjugacy, wandering-interval, and orbit-density
    /// verification suite; exit 0 iff every check passes.
    Verify {
        /// Rotation number
        #[arg(long)]
        alpha: String,
        /// Truncation depth N of the blown-up circle
        #[arg(long, default_value_t = 30)]
        depth: i64,
        /// Number of base-point samples
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Iterations per sample
        #[arg(long, default_value_t = 100)]
        iters: u64,
        /// Sampling seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Arc resolution for the density check
        #[arg(long, default_value_t = 5)]
        resolution: i64,
        /// Iteration budget for the density check
        #[arg(long = "max-iter", default_value_t = 100_000)]
        max_iter: u64,
    },
    /// Evaluate a gluing expression to handlebody genus and orientability.
    Genus {
        /// Expression, e.g. "glue(denjoy(m=1), shift_or(g=1, n=0))"
        expression: String,
    },
    /// Count ends of the mapping torus at a finite arc resolution.
    Ends {
        /// Rotation number
        #[arg(long)]
        alpha: String,
        /// Arc resolution
        #[arg(long, default_value_t = 4)]
        resolution: i64,
        /// Optional path for the arc-transition relation JSON
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export a trajectory of the Denjoy map as CSV.
    Orbit {
        /// Rotation number
        #[arg(long)]
        alpha: String,
        /// Truncation depth N
        #[arg(long, default_value_t = 10)]
        depth: i64,
        /// Number of steps
        #[arg(long, default_value_t = 10)]
        steps: u64,
        /// Start from a base point at this exact angle (default: the
        /// midpoint of gap (0, 0))
        #[arg(long)]
        base: Option<String>,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export the resolution-N Cantor arcs as CSV.
    Cantor {
        /// Rotation number
        #[arg(long)]
        alpha: String,
        /// Truncation depth N
        #[arg(long, default_value_t = 10)]
        depth: i64,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Euler characteristic and free rank of the spine or mapping-torus
    /// complex.
    Complex {
        /// Complex kind: "spine" or "torus"
        #[arg(long, default_value = "torus")]
        kind: String,
        /// Number of blown-up orbits m
        #[arg(long, default_value_t = 1)]
        orbits: u64,
        /// Truncation k
        #[arg(long, default_value_t = 1)]
        truncation: u64,
    },
    /// Draw the blown circle and the devil's-staircase graph of the
    /// collapse map as SVG, with CSV exports alongside.
    Plot {
        /// Rotation number
        #[arg(long)]
        alpha: String,
        /// Truncation depth N
        #[arg(long, default_value_t = 6)]
        depth: i64,
        /// SVG output path; CSVs land next to it
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{}", e);
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{}", e);
                    ExitCode::from(3)
                }
            };
        }
    };
    let code = match cli.command {
        Command::Classify {
            alpha,
            alpha2,
            depth,
            matrix_bound,
            tol,
        } => cmd_classify(&alpha, &alpha2, depth, matrix_bound, &tol),
        Command::Verify {
            alpha,
            depth,
            samples,
            iters,
            seed,
            resolution,
            max_iter,
        } => cmd_verify(&alpha, depth, samples, iters, seed, resolution, max_iter),
        Command::Genus { expression } => cmd_genus(&expression),
        Command::Ends {
            alpha,
            resolution,
            out,
        } => cmd_ends(&alpha, resolution, out.as_deref()),
        Command::Orbit {
            alpha,
            depth,
            steps,
            base,
            out,
        } => cmd_orbit(&alpha, depth, steps, base.as_deref(), out.as_deref()),
        Command::Cantor { alpha, depth, out } => cmd_cantor(&alpha, depth, out.as_deref()),
        Command::Complex {
            kind,
            orbits,
            truncation,
        } => cmd_complex(&kind, orbits, truncation),
        Command::Plot { alpha, depth, out } => cmd_plot(&alpha, depth, &out),
    };
    ExitCode::from(code)
}

fn parse_alpha(text: &str) -> Result<ContinuedFraction, u8> {
    text.parse().map_err(|e| {
        eprintln!("error: {}", e);
        3u8
    })
}

fn build(alpha: &str, depth: i64) -> Result<DenjoyMap, u8> {
    let cf = parse_alpha(alpha)?;
    build_map(BlowupSchedule::single(cf), depth).map_err(|e| {
        eprintln!("error: {}", e);
        3u8
    })
}

fn write_or_print(out: Option<&std::path::Path>, content: &str) -> u8 {
    match out {
        Some(path) => match std::fs::write(path, content) {
            Ok(()) => {
                println!("wrote {}", path.display());
                0
            }
            Err(e) => {
                eprintln!("error: cannot write {}: {}", path.display(), e);
                3
            }
        },
        None => {
            print!("{}", content);
            0
        }
    }
}

fn cmd_classify(alpha: &str, alpha2: &str, depth: usize, bound: u64, tol: &str) -> u8 {
    let a = match parse_alpha(alpha) {
        Ok(a) => a,
        Err(c) => return c,
    };
    let b = match parse_alpha(alpha2) {
        Ok(b) => b,
        Err(c) => return c,
    };
    let tol = match parse_rational(tol).filter(|t| t > &BigRational::from(BigInt::from(0))) {
        Some(t) => t,
        None => {
            eprintln!("error: tolerance must be a positive rational");
            return 3;
        }
    };
    let verdict = gl2z_equivalent(&a, &b, depth);
    match &verdict {
        Gl2zVerdict::Equivalent { tail_witness } => {
            println!("verdict: Equivalent");
            let items: Vec<String> = tail_witness.iter().map(u64::to_string).collect();
            println!("tail witness: ({})", items.join(", "));
        }
        Gl2zVerdict::NotEquivalent => println!("verdict: NotEquivalent"),
        Gl2zVerdict::UnknownUpToDepth => println!("verdict: UnknownUpToDepth (depth {})", depth),
    }
    match gl2z_matrix_search(&a, &b, bound, &tol) {
        Ok(Some(m)) => println!("matrix witness: {}", m),
        Ok(None) => println!("matrix witness: none with |entries| <= {}", bound),
        Err(e) => println!("matrix search skipped: {}", e),
    }
    match verdict {
        Gl2zVerdict::Equivalent { .. } => 0,
        Gl2zVerdict::NotEquivalent => 1,
        Gl2zVerdict::UnknownUpToDepth => 2,
    }
}

fn cmd_verify(
    alpha: &str,
    depth: i64,
    samples: usize,
    iters: u64,
    seed: u64,
    resolution: i64,
    max_iter: u64,
) -> u8 {
    let map = match build(alpha, depth) {
        Ok(m) => m,
        Err(c) => return c,
    };
    let mut all_pass = true;
    let mut lines: Vec<(String, bool, String)> = Vec::new();

    match map.semiconjugacy_check(samples, iters, seed) {
        Ok(report) => {
            let ok = report.gap_residual == BigRational::from(BigInt::from(0));
            all_pass &= ok;
            lines.push(("semiconjugacy".into(), ok, report.to_string()));
        }
        Err(e) => {
            all_pass = false;
            lines.push(("semiconjugacy".into(), false, e.to_string()));
        }
    }

    let wander_k = (iters as i64).min(depth);
    match map.wandering_images(wander_k) {
        Ok(report) => {
            all_pass &= report.pass;
            let detail = match &report.first_violation {
                Some(v) => v.clone(),
                None => format!(
                    "f^j(I_0) = I_j for |j| <= {}; {} gaps certified disjoint",
                    wander_k, report.gaps_checked
                ),
            };
            lines.push(("wandering".into(), report.pass, detail));
        }
        Err(e) => {
            all_pass = false;
            lines.push(("wandering".into(), false, e.to_string()));
        }
    }

    let start = map.gap_point(
        GapIndex { orbit: 0, n: 0 },
        BigRational::from(BigInt::from(0)),
    );
    match start.and_then(|s| map.orbit_density(&s, resolution, max_iter)) {
        Ok(report) => {
            all_pass &= report.dense_at_resolution;
            lines.push((
                "density".into(),
                report.dense_at_resolution,
                format!(
                    "resolution {}: {} arcs unvisited after {} iterations",
                    resolution,
                    report.unvisited.len(),
                    report.iterations_used
                ),
            ));
        }
        Err(e) => {
            all_pass = false;
            lines.push(("density".into(), false, e.to_string()));
        }
    }

    {
        let approx = map.cantor_approx();
        let total = &approx.resolved_gap_total + &approx.total_arc_length;
        let ok = total == map.circumference();
        all_pass &= ok;
        lines.push((
            "bookkeeping".into(),
            ok,
            format!(
                "resolved gaps {} + arcs {} = {}",
                rational_to_string(&approx.resolved_gap_total),
                rational_to_string(&approx.total_arc_length),
                rational_to_string(&total)
            ),
        ));
    }

    println!("{:<15} {:<6} detail", "check", "result");
    for (name, ok, detail) in &lines {
        println!(
            "{:<15} {:<6} {}",
            name,
            if *ok { "pass" } else { "FAIL" },
            detail
        );
    }
    println!("overall: {}", if all_pass { "pass" } else { "FAIL" });
    u8::from(!all_pass)
}

fn cmd_genus(expression: &str) -> u8 {
    let expr = match parse_expression(expression) {
        Ok(e) => e,
        Err(e) => {
            eprintln!("error: {}", e);
            return 3;
        }
    };
    match glue_eval(&expr) {
        Ok(descriptor) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&descriptor).expect("descriptor serializes")
            );
            0
        }
        Err(e) => {
            eprintln!("error: {}", e);
            3
        }
    }
}

fn cmd_ends(alpha: &str, resolution: i64, out: Option<&std::path::Path>) -> u8 {
    if resolution < 0 {
        eprintln!("error: resolution must be >= 0");
        return 3;
    }
    let map = match build(alpha, resolution + 1) {
        Ok(m) => m,
        Err(c) => return c,
    };
    let model = match induced_end_map(&map, resolution) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {}", e);
            return 3;
        }
    };
    println!("{}", end_count_json(&model));
    let _ = end_count(&model);
    if let Some(path) = out {
        let json = match relation_json(&model) {
            Ok(j) => j,
            Err(e) => {
                eprintln!("error: {}", e);
                return 3;
            }
        };
        if let Err(e) = std::fs::write(path, json) {
            eprintln!("error: cannot write {}: {}", path.display(), e);
            return 3;
        }
    }
    0
}

fn cmd_orbit(
    alpha: &str,
    depth: i64,
    steps: u64,
    base: Option<&str>,
    out: Option<&std::path::Path>,
) -> u8 {
    let map = match build(alpha, depth) {
        Ok(m) => m,
        Err(c) => return c,
    };
    let start = match base {
        Some(text) => {
            let angle = match parse_rational(text) {
                Some(a) => a,
                None => {
                    eprintln!("error: bad base angle `{}`", text);
                    return 3;
                }
            };
            match map.section(&denjoy::CertifiedValue::exact(angle)) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("error: {}", e);
                    return 3;
                }
            }
        }
        None => map
            .gap_point(
                GapIndex { orbit: 0, n: 0 },
                BigRational::new(BigInt::from(1), BigInt::from(2)),
            )
            .expect("gap (0,0) is always resolved"),
    };
    match trajectory_csv(&map, &start, steps) {
        Ok(csv) => write_or_print(out, &csv),
        Err(e) => {
            eprintln!("error: {}", e);
            1
        }
    }
}

fn cmd_cantor(alpha: &str, depth: i64, out: Option<&std::path::Path>) -> u8 {
    let map = match build(alpha, depth) {
        Ok(m) => m,
        Err(c) => return c,
    };
    let approx = map.cantor_approx();
    write_or_print(out, &denjoy::circle::cantor_csv(&approx))
}

fn cmd_complex(kind: &str, orbits: u64, truncation: u64) -> u8 {
    let complex = match kind {
        "spine" => spine_complex(orbits, truncation),
        "torus" => mapping_torus_complex(orbits, truncation),
        other => {
            eprintln!("error: unknown complex kind `{}` (use spine|torus)", other);
            return 3;
        }
    };
    let complex = match complex {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}", e);
            return 3;
        }
    };
    match euler_and_rank(&complex) {
        Ok((chi, rank)) => {
            println!(
                "{{\"kind\": \"{}\", \"vertices\": {}, \"edges\": {}, \"faces\": {}, \"chi\": {}, \"free_rank\": {}}}",
                kind,
                complex.vertex_count(),
                complex.edge_count(),
                complex.face_count(),
                chi,
                rank
            );
            0
        }
        Err(e) => {
            eprintln!("error: {}", e);
            1
        }
    }
}

fn cmd_plot(alpha: &str, depth: i64, out: &std::path::Path) -> u8 {
    let map = match build(alpha, depth) {
        Ok(m) => m,
        Err(c) => return c,
    };
    let svg = match plot::render_svg(&map) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}", e);
            return 1;
        }
    };
    if let Err(e) = std::fs::write(out, svg) {
        eprintln!("error: cannot write {}: {}", out.display(), e);
        return 3;
    }
    println!("wrote {}", out.display());

    let cantor_path = out.with_extension("cantor.csv");
    let approx = map.cantor_approx();
    if let Err(e) = std::fs::write(&cantor_path, denjoy::circle::cantor_csv(&approx)) {
        eprintln!("error: cannot write {}: {}", cantor_path.display(), e);
        return 3;
    }
    println!("wrote {}", cantor_path.display());

    let orbit_path = out.with_extension("orbit.csv");
    let start = map
        .gap_point(
            GapIndex { orbit: 0, n: 0 },
            BigRational::new(BigInt::from(1), BigInt::from(2)),
        )
        .expect("gap (0,0) is always resolved");
    let steps = depth.max(0) as u64;
    match trajectory_csv(&map, &start, steps) {
        Ok(csv) => {
            if let Err(e) = std::fs::write(&orbit_path, csv) {
                eprintln!("error: cannot write {}: {}", orbit_path.display(), e);
                return 3;
            }
            println!("wrote {}", orbit_path.display());
            0
        }
        Err(e) => {
            eprintln!("error: {}", e);
            1
        }
    }
}
