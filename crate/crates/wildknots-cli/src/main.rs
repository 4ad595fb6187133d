//! Command-line driver: configuration ingestion, dispatch to the library
//! modules, deterministic file outputs and a one-line run summary.
//!
//! Exit codes: 0 success, 2 configuration or input parse error,
//! 3 validation failure, 4 numeric fault.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use wildknots::algebra::{amalgamated_sum, summand_census, Presentation};
use wildknots::config::{ConfigError, NecklaceConfig};
use wildknots::conformal::GeomError;
use wildknots::covers::{CoverConfig, CoverError};
use wildknots::fibration::{fiber_sample, FiberSampleSpec, FibrationError, TrivialModel};
use wildknots::formats;
use wildknots::necklace::{knot_approx, polyline_is_simple, LimitPoint, Necklace, NecklaceError};

#[derive(Parser)]
#[command(name = "wildknots", version, about = "Beaded-necklace wild knot toolkit")]
struct Cli {
    /// Directory for output files
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Worker lanes for bead enumeration (single lane is the reference
    /// order; more lanes produce byte-identical output)
    #[arg(long, global = true, default_value_t = 1, env = "WILDKNOTS_LANES")]
    lanes: usize,
    /// Hard cap on any requested depth (bead counts grow as k(k-1)^m)
    #[arg(long, global = true, default_value_t = 12)]
    max_depth: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// Ambient dimension d (thread is the unit (d-2)-sphere)
    #[arg(long, default_value_t = 3)]
    dim: usize,
    /// Number of generator beads
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Radius of the orthogonal generator beads
    #[arg(long, default_value_t = 0.5)]
    bead_radius: f64,
}

impl ModelArgs {
    fn build(&self) -> Result<TrivialModel, CliError> {
        if self.k == 0 {
            TrivialModel::pencil_only(self.dim).map_err(CliError::from)
        } else {
            TrivialModel::symmetric(self.dim, self.k, self.bead_radius).map_err(CliError::from)
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the stage-0 necklace conditions and report each check
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Per-stage statistics (count, max radius, min gap) up to a depth
    Stage {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Depth-L bead centers with radii and addresses (limit-set cloud)
    LimitSet {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Stage-m knot approximation as a closed polyline
    KnotMesh {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Partition-function dimension estimate over several depths
    Dimension {
        #[arg(long)]
        config: PathBuf,
        /// comma-separated depth list, e.g. 4,5,6
        #[arg(long, value_delimiter = ',')]
        depths: Vec<usize>,
    },
    /// Emit a knot-group presentation, amalgamated over the meridian
    Presentation {
        /// builtin group: trefoil | figure-eight
        #[arg(long, conflicts_with = "file")]
        knot: Option<String>,
        /// presentation file to read instead of a builtin
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        copies: usize,
    },
    /// Summand census of the stage knots
    Census {
        #[arg(long, default_value_t = 3)]
        k: u64,
        #[arg(long, default_value_t = 6)]
        depth: u32,
    },
    /// Sample one fiber of the trivial-model fibration
    Fiber {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 1.0)]
        theta0: f64,
        #[arg(long, default_value_t = 0)]
        depth: usize,
        #[arg(long, default_value_t = 40)]
        per_axis: usize,
        /// page slab half-width (2*pi / angular bins)
        #[arg(long, default_value_t = 1e-2)]
        delta: f64,
        /// bounding box half-width, centered at the origin
        #[arg(long, default_value_t = 2.5)]
        extent: f64,
    },
    /// Lift a polyline path to the q-fold cyclic cover
    Lift {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        path: PathBuf,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 0)]
        start_sheet: u32,
        #[arg(long, default_value_t = 0.0)]
        theta_cut: f64,
        #[arg(long, default_value_t = 0)]
        depth: usize,
    },
    /// Verify the branch index with a small meridian loop
    BranchCheck {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        q: u32,
        /// thread angle (radians) of the tame point; defaults to the gap
        /// midpoint between the first two beads
        #[arg(long)]
        angle: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        theta_cut: f64,
        #[arg(long, default_value_t = 0)]
        depth: usize,
    },
    /// Components of the cover over each stage bead
    Ends {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 0.0)]
        theta_cut: f64,
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
}

#[derive(Debug)]
enum CliError {
    Config(String),
    Validation(String),
    Numeric(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration: {m}"),
            CliError::Validation(m) => write!(f, "validation: {m}"),
            CliError::Numeric(m) => write!(f, "numeric fault: {m}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Necklace(n) => n.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<NecklaceError> for CliError {
    fn from(e: NecklaceError) -> Self {
        match e {
            NecklaceError::TooFewBeads(_)
            | NecklaceError::OverlappingBeads { .. }
            | NecklaceError::DimensionMismatch(..)
            | NecklaceError::InvalidThread(_)
            | NecklaceError::ThreadRequired
            | NecklaceError::CrossingCount { .. }
            | NecklaceError::NotEnoughDepths
            | NecklaceError::BadBijection(_)
            | NecklaceError::BeadCountMismatch(..) => CliError::Validation(e.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<FibrationError> for CliError {
    fn from(e: FibrationError) -> Self {
        match e {
            FibrationError::BadDimension(_)
            | FibrationError::NotOrthogonal { .. }
            | FibrationError::OffHyperplane { .. }
            | FibrationError::GeneratorsOverlap(..)
            | FibrationError::NoGeometricThread => CliError::Config(e.to_string()),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<CoverError> for CliError {
    fn from(e: CoverError) -> Self {
        match e {
            CoverError::BadQ | CoverError::EmptyPath => CliError::Config(e.to_string()),
            CoverError::Fibration(f) => f.into(),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

impl From<GeomError> for CliError {
    fn from(e: GeomError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<wildknots::algebra::AlgebraError> for CliError {
    fn from(e: wildknots::algebra::AlgebraError) -> Self {
        use wildknots::algebra::AlgebraError::*;
        match e {
            Overflow | CensusOverflow(_) => CliError::Numeric(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<formats::FormatError> for CliError {
    fn from(e: formats::FormatError) -> Self {
        CliError::Config(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(&cli) {
        Ok(summary) => {
            println!(
                "{summary} ({} ms)",
                started.elapsed().as_secs_f64() * 1e3
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn check_depth(depth: usize, cap: usize) -> Result<usize, CliError> {
    if depth > cap {
        return Err(CliError::Config(format!(
            "depth {depth} exceeds the hard cap {cap} (raise --max-depth deliberately)"
        )));
    }
    Ok(depth)
}

fn out_file(dir: &Path, name: &str) -> Result<(BufWriter<File>, PathBuf), CliError> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    Ok((BufWriter::new(File::create(&path)?), path))
}

/// Depth-L bead cloud split over worker lanes by first letter; subtree
/// streams concatenate in letter order, so any lane count yields the same
/// bytes.
fn limit_points_laned(
    neck: &Necklace,
    depth: usize,
    lanes: usize,
) -> Result<Vec<LimitPoint>, CliError> {
    let k = neck.k() as u32;
    let letters: Vec<u32> = (1..=k).collect();
    let to_points = |letter: u32| -> Result<Vec<LimitPoint>, NecklaceError> {
        neck.enumerate_subtree(depth, letter)
            .filter(|b| {
                b.as_ref()
                    .map(|bead| bead.address.len() == depth + 1)
                    .unwrap_or(true)
            })
            .map(|b| {
                b.map(|bead| LimitPoint {
                    center: bead.ball.center().to_vec(),
                    radius: bead.ball.radius(),
                    address: bead.address,
                })
            })
            .collect()
    };

    let mut per_letter: Vec<Vec<LimitPoint>> = Vec::with_capacity(letters.len());
    if lanes <= 1 {
        for &l in &letters {
            per_letter.push(to_points(l).map_err(CliError::from)?);
        }
    } else {
        let chunk = letters.len().div_ceil(lanes);
        let results: Vec<Vec<Result<Vec<LimitPoint>, NecklaceError>>> =
            std::thread::scope(|scope| {
                let handles: Vec<_> = letters
                    .chunks(chunk)
                    .map(|ls| scope.spawn(move || ls.iter().map(|&l| to_points(l)).collect()))
                    .collect();
                handles.into_iter().map(|h| h.join().unwrap()).collect()
            });
        for lane in results {
            for r in lane {
                per_letter.push(r.map_err(CliError::from)?);
            }
        }
    }
    Ok(per_letter.into_iter().flatten().collect())
}

fn load_presentation(
    knot: &Option<String>,
    file: &Option<PathBuf>,
) -> Result<Presentation, CliError> {
    match (knot, file) {
        (Some(name), None) => match name.as_str() {
            "trefoil" => Ok(Presentation::trefoil()),
            "figure-eight" | "figure8" => Ok(Presentation::figure_eight()),
            other => Err(CliError::Config(format!(
                "unknown builtin knot {other:?} (expected trefoil or figure-eight)"
            ))),
        },
        (None, Some(path)) => {
            let text = fs::read_to_string(path)?;
            Ok(Presentation::from_text(&text)?)
        }
        (None, None) => Err(CliError::Config(
            "need --knot or --file for the base presentation".into(),
        )),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    }
}

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Validate { config } => {
            let cfg = NecklaceConfig::from_path(config)?;
            let (thread, balls) = cfg.build_parts()?;
            let report =
                wildknots::necklace::validate_balls(Some(&thread), &balls, cfg.tolerance);
            let (mut w, path) = out_file(&cli.out_dir, "validate.txt")?;
            let mut failed = Vec::new();
            for check in &report.checks {
                let line = format!("{:<26} {:?}: {}", check.name, check.outcome, check.detail);
                writeln!(w, "{line}")?;
                println!("{line}");
                if check.outcome == wildknots::necklace::CheckOutcome::Fail {
                    failed.push(check.name);
                }
            }
            w.flush()?;
            if !failed.is_empty() {
                return Err(CliError::Validation(format!(
                    "checks failed: {}",
                    failed.join(", ")
                )));
            }
            Ok(format!(
                "validate: k={} checks={} all passed -> {}",
                balls.len(),
                report.checks.len(),
                path.display()
            ))
        }

        Command::Stage { config, depth } => {
            let cfg = NecklaceConfig::from_path(config)?;
            let depth = check_depth(depth.unwrap_or(cfg.depth), cli.max_depth)?;
            let neck = cfg.build()?;
            let stats = neck.stage_stats(depth)?;
            let (mut w, path) = out_file(&cli.out_dir, "stage.csv")?;
            formats::write_csv(
                &mut w,
                &["stage", "count", "max_radius", "min_gap"],
                stats.iter().map(|s| {
                    vec![
                        s.stage.to_string(),
                        s.count.to_string(),
                        s.max_radius.to_string(),
                        s.min_gap.to_string(),
                    ]
                }),
            )?;
            w.flush()?;
            let total: u64 = stats.iter().map(|s| s.count).sum();
            Ok(format!(
                "stage: k={} depth={} beads_total={} -> {}",
                neck.k(),
                depth,
                total,
                path.display()
            ))
        }

        Command::LimitSet { config, depth } => {
            let cfg = NecklaceConfig::from_path(config)?;
            let depth = check_depth(depth.unwrap_or(cfg.depth), cli.max_depth)?;
            let neck = cfg.build()?;
            let points = limit_points_laned(&neck, depth, cli.lanes)?;
            let (mut w, path) = out_file(&cli.out_dir, "limit_set.txt")?;
            formats::write_limit_points(&mut w, cfg.ambient_dim, &points)?;
            w.flush()?;
            let max_r = points.iter().map(|p| p.radius).fold(0.0f64, f64::max);
            Ok(format!(
                "limit-set: depth={} points={} max_radius={:.3e} lanes={} -> {}",
                depth,
                points.len(),
                max_r,
                cli.lanes,
                path.display()
            ))
        }

        Command::KnotMesh { config, depth } => {
            let cfg = NecklaceConfig::from_path(config)?;
            let depth = check_depth(depth.unwrap_or(cfg.depth), cli.max_depth)?;
            let neck = cfg.build()?;
            let knot = knot_approx(&neck, depth, cfg.tolerance)?;
            let (mut w, path) = out_file(&cli.out_dir, "knot_mesh.txt")?;
            formats::write_polyline(&mut w, &knot.vertices, knot.closed)?;
            w.flush()?;
            let simple = polyline_is_simple(&knot.vertices, knot.closed, 1e-9);
            Ok(format!(
                "knot-mesh: depth={} vertices={} pieces={} stitch_gap={:.3e} simple={} -> {}",
                depth,
                knot.vertices.len(),
                knot.pieces.len(),
                knot.max_stitch_gap,
                simple,
                path.display()
            ))
        }

        Command::Dimension { config, depths } => {
            let cfg = NecklaceConfig::from_path(config)?;
            let depths: Vec<usize> = if depths.is_empty() {
                vec![cfg.depth.saturating_sub(1).max(1), cfg.depth.max(2)]
            } else {
                depths.clone()
            };
            for &d in &depths {
                check_depth(d, cli.max_depth)?;
            }
            let neck = cfg.build()?;
            let est = wildknots::necklace::dimension_estimate(&neck, &depths, 1e-2)?;
            let (mut w, path) = out_file(&cli.out_dir, "dimension.csv")?;
            formats::write_csv(
                &mut w,
                &["depth", "s_estimate"],
                est.per_depth
                    .iter()
                    .map(|(d, s)| vec![d.to_string(), s.to_string()]),
            )?;
            w.flush()?;
            Ok(format!(
                "dimension: s_hat={:.6} converged={} depths={:?} -> {}",
                est.s_hat,
                est.converged,
                depths,
                path.display()
            ))
        }

        Command::Presentation { knot, file, copies } => {
            let base = load_presentation(knot, file)?;
            let sum = amalgamated_sum(&base, *copies)?;
            let (mut w, path) = out_file(&cli.out_dir, "presentation.txt")?;
            w.write_all(sum.to_text().as_bytes())?;
            w.flush()?;
            Ok(format!(
                "presentation: copies={} generators={} relators={} -> {}",
                copies,
                sum.generator_count(),
                sum.relators().len(),
                path.display()
            ))
        }

        Command::Census { k, depth } => {
            check_depth(*depth as usize, cli.max_depth)?;
            let mut rows = Vec::new();
            for m in 0..=*depth {
                let c = summand_census(*k, m)?;
                rows.push(vec![
                    m.to_string(),
                    c.bead_count.to_string(),
                    c.summand_total.to_string(),
                    c.oriented.to_string(),
                    c.mirrored.to_string(),
                    c.alternative_power_count()
                        .map(|v| v.to_string())
                        .unwrap_or_default(),
                ]);
            }
            let (mut w, path) = out_file(&cli.out_dir, "census.csv")?;
            formats::write_csv(
                &mut w,
                &[
                    "stage",
                    "beads",
                    "summands",
                    "oriented",
                    "mirrored",
                    "alt_closed_form",
                ],
                rows,
            )?;
            w.flush()?;
            Ok(format!(
                "census: k={} stages=0..={} -> {}",
                k,
                depth,
                path.display()
            ))
        }

        Command::Fiber {
            model,
            theta0,
            depth,
            per_axis,
            delta,
            extent,
        } => {
            let depth = check_depth(*depth, cli.max_depth)?;
            let m = model.build()?;
            let mut spec = FiberSampleSpec::new(model.dim, *theta0, depth);
            spec.per_axis = *per_axis;
            spec.delta = *delta;
            spec.lo = vec![-extent.abs(); model.dim];
            spec.hi = vec![extent.abs(); model.dim];
            let cloud = fiber_sample(&m, &spec)?;
            let (mut w, path) = out_file(&cli.out_dir, "fiber.txt")?;
            formats::write_point_cloud(&mut w, model.dim, &cloud)?;
            w.flush()?;
            Ok(format!(
                "fiber: theta0={} depth={} grid={}^{} points={} -> {}",
                theta0,
                depth,
                per_axis,
                model.dim,
                cloud.len(),
                path.display()
            ))
        }

        Command::Lift {
            model,
            path,
            q,
            start_sheet,
            theta_cut,
            depth,
        } => {
            let depth = check_depth(*depth, cli.max_depth)?;
            let m = model.build()?;
            let cover = CoverConfig::new(*q, m, depth, *theta_cut)?;
            let (mut vertices, closed) = formats::read_polyline(BufReader::new(File::open(path)?))?;
            if closed {
                if let Some(first) = vertices.first().cloned() {
                    if vertices.last() != Some(&first) {
                        vertices.push(first);
                    }
                }
            }
            let lift = cover.lift_path(&vertices, *start_sheet)?;
            let (mut w, out_path) = out_file(&cli.out_dir, "lift.csv")?;
            let mut header: Vec<String> =
                (1..=model.dim).map(|i| format!("x{i}")).collect();
            header.push("sheet".into());
            let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
            formats::write_csv(
                &mut w,
                &header_refs,
                lift.vertices.iter().map(|sp| {
                    let mut row: Vec<String> = sp
                        .base
                        .as_finite()
                        .expect("lifted vertices are finite")
                        .iter()
                        .map(|x| x.to_string())
                        .collect();
                    row.push(sp.sheet.to_string());
                    row
                }),
            )?;
            w.flush()?;
            Ok(format!(
                "lift: q={} vertices={} crossings={} net={} end_sheet={} -> {}",
                q,
                lift.vertices.len(),
                lift.crossings.len(),
                lift.net_crossings(),
                lift.end_sheet(),
                out_path.display()
            ))
        }

        Command::BranchCheck {
            model,
            q,
            angle,
            theta_cut,
            depth,
        } => {
            let depth = check_depth(*depth, cli.max_depth)?;
            let m = model.build()?;
            let cover = CoverConfig::new(*q, m, depth, *theta_cut)?;
            let a = angle.unwrap_or(std::f64::consts::PI / model.k.max(1) as f64);
            let mut point = vec![0.0; model.dim];
            point[0] = a.cos();
            point[1] = a.sin();
            let report = cover.verify_branch(&point)?;
            let (mut w, path) = out_file(&cli.out_dir, "branch.txt")?;
            let mut text = String::new();
            writeln!(text, "point: {:?}", report.point).unwrap();
            writeln!(text, "q: {q}").unwrap();
            writeln!(text, "meridian_radius: {}", report.rho).unwrap();
            writeln!(text, "attempts: {}", report.attempts).unwrap();
            writeln!(text, "segments: {}", report.segments).unwrap();
            writeln!(text, "winding: {}", report.winding).unwrap();
            writeln!(text, "sheet_shift: {}", report.sheet_shift).unwrap();
            writeln!(text, "closes_after: {}", report.closes_after).unwrap();
            w.write_all(text.as_bytes())?;
            w.flush()?;
            print!("{text}");
            Ok(format!(
                "branch-check: q={} closes_after={} winding={} -> {}",
                q,
                report.closes_after,
                report.winding,
                path.display()
            ))
        }

        Command::Ends {
            model,
            q,
            theta_cut,
            depth,
        } => {
            let depth = check_depth(*depth, cli.max_depth)?;
            let m = model.build()?;
            let cover = CoverConfig::new(*q, m, depth, *theta_cut)?;
            let rows = cover.ends_census()?;
            let (mut w, path) = out_file(&cli.out_dir, "ends.csv")?;
            formats::write_csv(
                &mut w,
                &["address", "components", "decided"],
                rows.iter().map(|r| {
                    vec![
                        r.address.to_string(),
                        r.components.to_string(),
                        r.decided.to_string(),
                    ]
                }),
            )?;
            w.flush()?;
            let undecided = rows.iter().filter(|r| !r.decided).count();
            Ok(format!(
                "ends: q={} depth={} beads={} undecided={} -> {}",
                q,
                depth,
                rows.len(),
                undecided,
                path.display()
            ))
        }
    }
}
