use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use copgraph::calibration::{solve, verify_by_sampling, CalibrationProblem, CalibrationStatus};
use copgraph::density::{default_order, density_report, DensityReport};
use copgraph::edgelist::{read_edge_list, write_edge_list};
use copgraph::sweep::{run_sweep, sweep_csv, SweepConfig};
use copgraph::{Graphon, GraphonTemplate, MetricsReport, Motif};

#[derive(Parser, Debug)]
#[command(name = "copgraph", version)]
#[command(about = "Copula graphon random graphs: generation, analysis, densities, calibration")]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand, Debug)]
enum Commands {
    /// Sample a W-random graph and write it as an edge list
    Generate {
        /// Graphon descriptor, e.g. gumbel:3:cdf or joe:2:density*gumbel:5:density
        graphon: String,
        n_pos: Option<usize>,
        seed_pos: Option<u64>,
        out_pos: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Motif counts, clustering and assortativity of an edge-list file
    Analyze {
        path: PathBuf,
        /// Print a CSV header and row instead of key=value lines
        #[arg(long)]
        csv: bool,
    },
    /// Homomorphism densities and r_W of a graphon, as one CSV row
    Densities {
        graphon: String,
        grid_order_pos: Option<usize>,
        n_pos: Option<usize>,
        #[arg(long)]
        grid_order: Option<usize>,
        /// Node count used for r_W (default 1000)
        #[arg(long)]
        n: Option<usize>,
    },
    /// Solve for the free parameter '?' of a template
    Calibrate {
        /// Template with exactly one '?', e.g. gumbel:?:cdf
        template: String,
        /// Target degree assortativity r_W
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["target", "motif"])]
        r: Option<f64>,
        /// Target motif density; needs --motif
        #[arg(long, requires = "motif")]
        target: Option<f64>,
        /// Motif for --target: P1, P2, P3, C3 or S3
        #[arg(long)]
        motif: Option<String>,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 1e-4)]
        tolerance: f64,
        #[arg(long, default_value_t = 200)]
        max_iters: usize,
        #[arg(long, allow_hyphen_values = true)]
        theta_min: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        theta_max: Option<f64>,
        #[arg(long)]
        grid_order: Option<usize>,
        /// Sample REPS graphs at the solution, seeds derived from SEED
        #[arg(long, num_args = 2, value_names = ["REPS", "SEED"])]
        verify: Option<Vec<u64>>,
        /// Write the scanned objective curve as CSV
        #[arg(long)]
        curve: Option<PathBuf>,
    },
    /// Sampled assortativity and clustering across a parameter grid
    Sweep {
        /// Template with one or two '?' slots
        template: String,
        /// start:stop:step (inclusive) or a comma-separated list
        #[arg(long, allow_hyphen_values = true)]
        thetas: String,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Second slot takes theta - lag (two-slot templates; default 0)
        #[arg(long, allow_hyphen_values = true)]
        lag: Option<f64>,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Positional and flag forms of one argument; both may be given if equal.
fn pick<T: PartialEq + std::fmt::Display + Copy>(
    name: &str,
    positional: Option<T>,
    flag: Option<T>,
) -> anyhow::Result<Option<T>> {
    match (positional, flag) {
        (Some(a), Some(b)) if a != b => bail!(copgraph::Error::Usage(format!(
            "{name} given twice with different values ({a} and --{name} {b})"
        ))),
        (a, b) => Ok(a.or(b)),
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    copgraph::Error::Usage(msg.into()).into()
}

fn parse_thetas(spec: &str) -> anyhow::Result<Vec<f64>> {
    let num = |s: &str| -> anyhow::Result<f64> {
        s.trim()
            .parse()
            .map_err(|_| usage(format!("bad theta value '{s}' in '{spec}'")))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if step.is_nan() || step <= 0.0 || stop < start {
                return Err(usage(format!(
                    "range '{spec}' needs start <= stop and a positive step"
                )));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|i| start + step * i as f64).collect())
        }
        [_] => spec.split(',').map(num).collect(),
        _ => Err(usage(format!("bad theta grid '{spec}'"))),
    }
}

fn write_output(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Commands::Generate {
            graphon,
            n_pos,
            seed_pos,
            out_pos,
            n,
            seed,
            out,
        } => {
            let graphon: Graphon = graphon.parse()?;
            let n = pick("n", n_pos, n)?.ok_or_else(|| usage("missing node count (n)"))?;
            let seed = pick("seed", seed_pos, seed)?.unwrap_or(0);
            let out = match (out_pos, out) {
                (Some(a), Some(b)) if a != b => return Err(usage("output path given twice")),
                (a, b) => a.or(b),
            };
            let g = copgraph::sample(&graphon, n, seed);
            let summary = format!(
                "n={} m={} mean_degree={}\n",
                g.n(),
                g.edges().len(),
                copgraph::report::fmt_num(g.mean_degree())
            );
            match out {
                Some(path) => {
                    let file = fs::File::create(&path)
                        .with_context(|| format!("creating {}", path.display()))?;
                    let mut w = io::BufWriter::new(file);
                    write_edge_list(&g, &mut w)?;
                    w.flush()?;
                    print!("{summary}");
                }
                None => {
                    let mut w = io::BufWriter::new(io::stdout().lock());
                    write_edge_list(&g, &mut w)?;
                    w.flush()?;
                    eprint!("{summary}");
                }
            }
        }
        Commands::Analyze { path, csv } => {
            let file =
                fs::File::open(&path).with_context(|| format!("opening {}", path.display()))?;
            let parsed = read_edge_list(BufReader::new(file))
                .with_context(|| format!("reading {}", path.display()))?;
            let report = MetricsReport::compute(&parsed.graph);
            if csv {
                println!("{}", MetricsReport::CSV_HEADER);
                println!("{}", report.csv_row());
            } else {
                print!("{}", report.key_value());
            }
        }
        Commands::Densities {
            graphon,
            grid_order_pos,
            n_pos,
            grid_order,
            n,
        } => {
            let graphon: Graphon = graphon.parse()?;
            let order = pick("grid-order", grid_order_pos, grid_order)?
                .unwrap_or_else(|| default_order(&graphon));
            let n = pick("n", n_pos, n)?.unwrap_or(1000);
            let report = density_report(&graphon, order)?;
            println!("{}", DensityReport::CSV_HEADER);
            println!("{}", report.csv_row(n));
        }
        Commands::Calibrate {
            template,
            r,
            target,
            motif,
            n,
            tolerance,
            max_iters,
            theta_min,
            theta_max,
            grid_order,
            verify,
            curve,
        } => {
            let template: GraphonTemplate = template.parse()?;
            let mut problem = match (r, target, motif) {
                (Some(r), None, None) => CalibrationProblem::assortativity(template, r, n)?,
                (None, Some(p), Some(m)) => {
                    let motif: Motif = m.parse()?;
                    CalibrationProblem::motif_density(template, motif, p)?
                }
                _ => return Err(usage("give either --r, or --target with --motif")),
            };
            if theta_min.is_some() || theta_max.is_some() {
                let (lo, hi) = problem.bounds();
                problem = problem.with_bounds(theta_min.unwrap_or(lo), theta_max.unwrap_or(hi))?;
            }
            if let Some(order) = grid_order {
                problem = problem.with_grid_order(order)?;
            }
            let result = solve(&problem, tolerance, max_iters)?;
            let mut text = result.key_value(&problem);
            if let Some(v) = verify {
                let (reps, seed) = (v[0] as usize, v[1]);
                if result.status == CalibrationStatus::Unreachable {
                    text.push_str("verify=skipped (unreachable)\n");
                } else {
                    let check = verify_by_sampling(&result, &problem, reps, seed)?;
                    text.push_str(&check.key_value());
                }
            }
            print!("{text}");
            if let Some(path) = curve {
                write_output(Some(&path), &result.objective_curve.to_csv())?;
            }
        }
        Commands::Sweep {
            template,
            thetas,
            n,
            reps,
            seed,
            lag,
            out,
        } => {
            let template: GraphonTemplate = template.parse()?;
            let config = SweepConfig::new(template, parse_thetas(&thetas)?, n, reps, seed, lag)?;
            let rows = run_sweep(&config)?;
            write_output(out.as_deref(), &sweep_csv(&rows))?;
        }
    }
    Ok(())
}

/// 1 for usage, parse, domain and input-format problems; 2 for numerical
/// failures.
fn exit_code(err: &anyhow::Error) -> u8 {
    use copgraph::Error as E;
    let core = err.chain().find_map(|e| e.downcast_ref::<E>());
    match core {
        Some(E::Numerical(_)) | Some(E::Undefined(_)) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
