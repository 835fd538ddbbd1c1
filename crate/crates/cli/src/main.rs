use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use omega_spectra::covering::{
    folner_balls, spectral_inclusion_report, verify_covering, BinaryTreeOracle, CayleyOracle,
    FolnerReport, HulanickiMode, UpsilonRayOracle,
};
use omega_spectra::formats::{
    export_csv, export_dot, parse_covering, parse_graph, serialize_document, serialize_graph,
    Conventions, DotOptions, GraphDocument, Metadata,
};
use omega_spectra::graph::{laplace_type_operator, markov_operator, Multigraph, WeightedGraph};
use omega_spectra::omega::{
    abelianization_class, ball_sizes, relators_u, verify_trivial, GeneratorWord, OmegaWord,
};
use omega_spectra::schreier::{cayley_ball, schreier_graph_with, upsilon_graph, UpsilonSpec};
use omega_spectra::spectra::{
    dihedral_reduction_check, dihedral_weighted_spectrum, eigen_moments, eigenvalues_selfadjoint,
    hankel_min_eigenvalue, kesten_check, level_spectrum, spectral_moments, spectrum_sweep,
    IntervalUnion, SpectrumReport,
};
use omega_spectra::{Error, Limits};

const EXIT_VERIFICATION: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "omega-spectra",
    version,
    about = "Schreier graphs of G_ω, coverings and spectral checks"
)]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct ConfigArgs {
    /// Largest graph any command may materialize.
    #[arg(long, global = true, env = "OMEGA_SPECTRA_MAX_VERTICES", default_value_t = Limits::default().max_vertices)]
    max_vertices: usize,
    /// Deepest tree level used to separate group elements.
    #[arg(long, global = true, env = "OMEGA_SPECTRA_MAX_DEPTH", default_value_t = Limits::default().max_depth)]
    max_depth: u32,
    /// Largest dimension handed to the dense eigensolver.
    #[arg(long, global = true, default_value_t = Limits::default().dense_cap)]
    dense_cap: usize,
    /// Membership tolerance for target sets.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tolerance: f64,
    /// Run single-threaded so that artifacts are byte-identical across runs.
    #[arg(long, global = true)]
    reproducible: bool,
    /// Write the artifact here instead of stdout.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct RunConfig<'a> {
    command: &'a str,
    max_vertices: usize,
    max_depth: u32,
    dense_cap: usize,
    tolerance: f64,
    reproducible: bool,
    out: Option<&'a Path>,
    conventions: Conventions,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum GraphFormat {
    Json,
    Dot,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    /// Finite target: truncation on B_{k+N+1}.
    Finite,
    /// Subexponential growth: truncation on B_k.
    Subexponential,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Level Schreier graph Γ_n.
    Schreier {
        #[arg(long)]
        omega: String,
        #[arg(long)]
        level: u32,
        #[arg(long, value_enum, default_value_t = GraphFormat::Json)]
        format: GraphFormat,
        /// Drop generator labels.
        #[arg(long)]
        unlabeled: bool,
    },
    /// Model path graph Υ_n, or a segment of the one-ended ray.
    Upsilon {
        #[arg(long, conflicts_with = "ray", required_unless_present = "ray")]
        level: Option<u32>,
        #[arg(long)]
        ray: Option<usize>,
        /// Drop the double edge in the middle of Υ_n.
        #[arg(long)]
        middle_exception: bool,
        #[arg(long, value_enum, default_value_t = GraphFormat::Json)]
        format: GraphFormat,
    },
    /// Spectrum of the Markov operator on Γ_n, or of H_α for a graph document.
    Spectrum {
        #[arg(long, required_unless_present = "graph")]
        omega: Option<String>,
        #[arg(long, requires = "omega")]
        level: Option<u32>,
        #[arg(long, conflicts_with = "omega")]
        graph: Option<PathBuf>,
        #[arg(long)]
        target: Option<String>,
    },
    /// Spectra of Γ_1..Γ_n against a target set, as CSV.
    Sweep {
        #[arg(long)]
        omega: String,
        #[arg(long)]
        max_level: u32,
        #[arg(long, default_value = "[-0.5,0]u[0.5,1]")]
        target: String,
        /// Also write the full JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check a covering document against the covering axioms.
    CoverVerify {
        #[arg(long)]
        map: PathBuf,
    },
    /// Approximate eigenfunctions pulled back along a covering.
    Hulanicki {
        /// Cayley ball of G_ω over Γ_level.
        #[arg(long, required_unless_present = "map")]
        omega: Option<String>,
        #[arg(long, default_value_t = 2)]
        level: u32,
        #[arg(long, default_value_t = 8)]
        radius: usize,
        #[arg(long, conflicts_with = "omega")]
        map: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Mode::Subexponential)]
        mode: Mode,
        /// Truncation radii, comma separated; defaults to every admissible k.
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<usize>>,
    },
    /// Ball sizes γ(0..r) and Følner data.
    Growth {
        #[arg(long)]
        omega: Option<String>,
        #[arg(long)]
        radius: usize,
        /// Lazy source for boundary ratios: cayley:OMEGA, upsilon-ray or binary-tree.
        #[arg(long)]
        source: Option<String>,
    },
    /// Relator words U_k and their triviality on the tree.
    Relators {
        #[arg(long)]
        omega: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 12)]
        depth: u32,
        /// Check this word instead of the relator family.
        #[arg(long)]
        word: Option<String>,
    },
    /// Spectrum of x·s + y·t on the infinite dihedral group, or the reduction identities.
    Dihedral {
        #[arg(long, default_value_t = 0.25)]
        x: f64,
        #[arg(long, default_value_t = 0.5)]
        y: f64,
        #[arg(long, default_value_t = 256)]
        length: usize,
        /// Check T² = I and 4M = A + 2T + I for this ω instead.
        #[arg(long)]
        omega: Option<String>,
        #[arg(long, default_value_t = 8)]
        depth: u32,
    },
    /// Return-probability moments at a vertex.
    Moments {
        #[arg(long, required_unless_present = "graph")]
        omega: Option<String>,
        #[arg(long, requires = "omega")]
        level: Option<u32>,
        #[arg(long, conflicts_with = "omega")]
        graph: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        vertex: usize,
        #[arg(long, default_value_t = 20)]
        p: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Schreier { .. } => "schreier",
            Command::Upsilon { .. } => "upsilon",
            Command::Spectrum { .. } => "spectrum",
            Command::Sweep { .. } => "sweep",
            Command::CoverVerify { .. } => "cover-verify",
            Command::Hulanicki { .. } => "hulanicki",
            Command::Growth { .. } => "growth",
            Command::Relators { .. } => "relators",
            Command::Dihedral { .. } => "dihedral",
            Command::Moments { .. } => "moments",
        }
    }
}

#[derive(Debug)]
enum Failure {
    /// Bad input: exit 2.
    Usage(String),
    /// The run completed and a check failed: exit 1.
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

struct Context {
    limits: Limits,
    tolerance: f64,
    out: Option<PathBuf>,
}

impl Context {
    fn emit(&self, text: &str) -> Outcome {
        match &self.out {
            Some(path) => fs::write(path, text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(text.as_bytes())
                    .map_err(|e| Failure::Usage(format!("stdout: {e}")))
            }
        }
    }

    fn emit_json<T: Serialize>(&self, value: &T) -> Outcome {
        let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
        text.push('\n');
        self.emit(&text)
    }
}

fn omega_arg(text: &str) -> Result<OmegaWord, Failure> {
    Ok(OmegaWord::parse(text)?)
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn check(ok: bool, message: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification(message()))
    }
}

fn metadata(omega: Option<&OmegaWord>, level: Option<u32>, middle_exception: bool) -> Metadata {
    Metadata {
        omega: omega.map(ToString::to_string),
        level,
        conventions: Conventions {
            upsilon_middle_exception: middle_exception,
            ..Conventions::default()
        },
    }
}

fn emit_graph(
    ctx: &Context,
    g: &Multigraph,
    ids: Vec<String>,
    meta: Metadata,
    format: GraphFormat,
) -> Outcome {
    match format {
        GraphFormat::Json => ctx.emit(&serialize_graph(
            &WeightedGraph::markov(g)?,
            Some(ids),
            meta,
        )?),
        GraphFormat::Dot => {
            let mut text = format!(
                "// loop_degree={} upsilon_middle_exception={}\n",
                meta.conventions.loop_degree, meta.conventions.upsilon_middle_exception
            );
            text.push_str(&export_dot(g, Some(&ids), &DotOptions::default()));
            ctx.emit(&text)
        }
    }
}

fn run(ctx: &Context, command: Command) -> Outcome {
    match command {
        Command::Schreier {
            omega,
            level,
            format,
            unlabeled,
        } => {
            let omega = omega_arg(&omega)?;
            let g = schreier_graph_with(&omega, level, &ctx.limits)?;
            let ids = (0..g.graph().vertex_count())
                .map(|v| g.vertex_name(v))
                .collect();
            let graph = if unlabeled {
                g.unlabeled()
            } else {
                g.graph().clone()
            };
            if format == GraphFormat::Json && !unlabeled {
                return ctx.emit(&serialize_document(&GraphDocument::from_schreier(&g)?));
            }
            emit_graph(
                ctx,
                &graph,
                ids,
                metadata(Some(&omega), Some(level), false),
                format,
            )
        }
        Command::Upsilon {
            level,
            ray,
            middle_exception,
            format,
        } => {
            let mut spec = match (level, ray) {
                (Some(n), _) => UpsilonSpec::finite(n),
                (None, Some(length)) => UpsilonSpec::ray(length),
                (None, None) => return Err(Failure::Usage("give --level or --ray".into())),
            };
            if middle_exception {
                spec = spec.with_middle_exception();
            }
            ctx.limits
                .max_vertices
                .checked_sub(spec.vertex_count())
                .ok_or_else(|| {
                    Failure::Usage(format!(
                        "{} vertices exceed --max-vertices",
                        spec.vertex_count()
                    ))
                })?;
            let g = upsilon_graph(&spec);
            let ids = (0..g.vertex_count()).map(|v| v.to_string()).collect();
            emit_graph(
                ctx,
                &g,
                ids,
                metadata(None, level, middle_exception),
                format,
            )
        }
        Command::Spectrum {
            omega,
            level,
            graph,
            target,
        } => {
            let target = target.map(|t| IntervalUnion::parse(&t)).transpose()?;
            let (eigs, kesten) = match (omega, graph) {
                (Some(omega), _) => {
                    let level =
                        level.ok_or_else(|| Failure::Usage("--omega needs --level".into()))?;
                    let eigs = level_spectrum(&omega_arg(&omega)?, level, &ctx.limits)?;
                    let report = SpectrumReport::new(eigs.clone(), None, ctx.tolerance);
                    (eigs, Some(kesten_check(&report, 2, true)))
                }
                (None, Some(path)) => {
                    let parsed = parse_graph(&read(&path)?)?;
                    let op = laplace_type_operator(&parsed.graph);
                    (eigenvalues_selfadjoint(&op, &ctx.limits)?, None)
                }
                (None, None) => {
                    return Err(Failure::Usage("give --omega/--level or --graph".into()))
                }
            };
            let report = SpectrumReport::new(eigs, target.as_ref(), ctx.tolerance);
            ctx.emit_json(&json!({
                "report": &report,
                "kesten": kesten,
                "conventions": Conventions::default(),
            }))?;
            check(report.contained, || {
                format!("eigenvalue outside the target, excess {:e}", report.excess)
            })?;
            check(kesten.is_none_or(|k| k.holds()), || {
                "Kesten bounds violated".into()
            })
        }
        Command::Sweep {
            omega,
            max_level,
            target,
            report,
        } => {
            let omega = omega_arg(&omega)?;
            let target = IntervalUnion::parse(&target)?;
            let sweep = spectrum_sweep(&omega, max_level, &target, ctx.tolerance, &ctx.limits)?;
            ctx.emit(&export_csv(
                sweep.levels.iter().map(|l| (l.level, &l.report)),
            ))?;
            if let Some(path) = report {
                let text = serde_json::to_string_pretty(&json!({
                    "sweep": &sweep,
                    "conventions": Conventions::default(),
                }))
                .expect("reports serialize");
                fs::write(&path, text + "\n")
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            }
            for level in &sweep.levels {
                eprintln!(
                    "level {:>2}: {:>6} eigenvalues, contained {}, cumulative Hausdorff {:.3}",
                    level.level,
                    level.report.values().len(),
                    level.report.contained,
                    level.cumulative_hausdorff
                );
            }
            check(sweep.all_contained(), || {
                "an eigenvalue lies outside the target".into()
            })
        }
        Command::CoverVerify { map } => {
            let covering = parse_covering(&read(&map)?)?;
            let verdict = verify_covering(&covering)?;
            ctx.emit_json(&json!({ "verdict": &verdict, "conventions": Conventions::default() }))?;
            check(verdict.passed(), || {
                format!("not a covering: {:?}", verdict.violation)
            })
        }
        Command::Hulanicki {
            omega,
            level,
            radius,
            map,
            mode,
            schedule,
        } => {
            let mode = match mode {
                Mode::Finite => HulanickiMode::FiniteTarget,
                Mode::Subexponential => HulanickiMode::Subexponential,
            };
            let covering = match (omega, map) {
                (Some(omega), _) => {
                    cayley_ball(&omega_arg(&omega)?, radius, level, &ctx.limits)?.covering
                }
                (None, Some(path)) => parse_covering(&read(&path)?)?,
                (None, None) => return Err(Failure::Usage("give --omega or --map".into())),
            };
            let schedule = match schedule {
                Some(s) => s,
                None => {
                    let window = covering
                        .window
                        .as_ref()
                        .map_or(covering.source.vertex_count(), |w| w.radius);
                    let target = covering.target.vertex_count();
                    // largest k whose construction fits the window
                    let top = match mode {
                        HulanickiMode::FiniteTarget => window.saturating_sub(target + 2),
                        HulanickiMode::Subexponential => {
                            window.saturating_sub(target.saturating_sub(1).max(1))
                        }
                    };
                    (1..=top.min(64)).collect()
                }
            };
            let report = spectral_inclusion_report(&covering, &schedule, mode, &ctx.limits)?;
            ctx.emit_json(&report)?;
            for entry in &report.entries {
                eprintln!(
                    "λ = {:+.6}: best residual {:.4} at k = {}, sound {}",
                    entry.lambda, entry.best_residual, entry.best_k, entry.sound
                );
            }
            check(report.all_sound(), || {
                "a residual exceeded its bound".into()
            })
        }
        Command::Growth {
            omega,
            radius,
            source,
        } => {
            let growth = omega.as_deref().map(omega_arg).transpose()?;
            let growth = growth
                .map(|w| ball_sizes(&w, radius, &ctx.limits))
                .transpose()?;
            let folner: Option<FolnerReport> = match source.as_deref() {
                None => None,
                Some("upsilon-ray") => Some(folner_balls(&UpsilonRayOracle, radius, &ctx.limits)?),
                Some("binary-tree") => Some(folner_balls(&BinaryTreeOracle, radius, &ctx.limits)?),
                Some(other) => match other.strip_prefix("cayley:") {
                    Some(text) => {
                        let omega = omega_arg(text)?;
                        let depth = ball_sizes(&omega, radius + 1, &ctx.limits)?.depth;
                        let oracle = CayleyOracle::new(omega, depth)?;
                        Some(folner_balls(&oracle, radius, &ctx.limits)?)
                    }
                    None => return Err(Failure::Usage(format!("unknown source {other:?}"))),
                },
            };
            if growth.is_none() && folner.is_none() {
                return Err(Failure::Usage("give --omega or --source".into()));
            }
            ctx.emit_json(&json!({ "growth": growth, "folner": folner }))
        }
        Command::Relators {
            omega,
            k,
            depth,
            word,
        } => {
            let omega = omega_arg(&omega)?;
            let words = match word {
                Some(w) => vec![GeneratorWord::parse(&w)?],
                None => relators_u(&omega, k)?,
            };
            let mut rows = Vec::new();
            let mut failures = Vec::new();
            for w in &words {
                let triviality = verify_trivial(w, &omega, depth)?;
                let class = abelianization_class(w);
                if !triviality.holds() {
                    failures.push(format!("{w}: {}", triviality.label()));
                }
                rows.push(json!({
                    "word": w.to_string(),
                    "length": w.len(),
                    "trivial": triviality.holds(),
                    "witness": triviality.witness,
                    "abelian_class": class,
                }));
            }
            ctx.emit_json(
                &json!({ "omega": omega.to_string(), "k": k, "depth": depth, "words": rows }),
            )?;
            check(failures.is_empty(), || failures.join("; "))
        }
        Command::Dihedral {
            x,
            y,
            length,
            omega,
            depth,
        } => match omega {
            Some(omega) => {
                let report = dihedral_reduction_check(&omega_arg(&omega)?, depth)?;
                ctx.emit_json(&report)?;
                check(report.holds(), || "reduction identities fail".into())
            }
            None => {
                let spectrum = dihedral_weighted_spectrum(x, y, length)?;
                ctx.emit_json(&spectrum)?;
                check(spectrum.truncation.within, || {
                    "a truncated eigenvalue lies outside the fattened exact set".into()
                })
            }
        },
        Command::Moments {
            omega,
            level,
            graph,
            vertex,
            p,
        } => {
            let g = match (omega, graph) {
                (Some(omega), _) => {
                    let level =
                        level.ok_or_else(|| Failure::Usage("--omega needs --level".into()))?;
                    schreier_graph_with(&omega_arg(&omega)?, level, &ctx.limits)?.into_graph()
                }
                (None, Some(path)) => parse_graph(&read(&path)?)?.graph.graph,
                (None, None) => {
                    return Err(Failure::Usage("give --omega/--level or --graph".into()))
                }
            };
            markov_operator(&g)?;
            let power = spectral_moments(&g, vertex, p, &ctx.limits)?;
            let eigen = (g.vertex_count() <= ctx.limits.dense_cap)
                .then(|| eigen_moments(&g, vertex, p, &ctx.limits))
                .transpose()?;
            let deviation = eigen.as_ref().map(|e| power.max_deviation(e));
            let hankel = hankel_min_eigenvalue(&power);
            ctx.emit_json(&json!({
                "moments": &power,
                "eigen_route_deviation": deviation,
                "hankel_min_eigenvalue": hankel,
            }))?;
            check(hankel >= -1e-9, || {
                format!("Hankel matrix not positive: {hankel:e}")
            })?;
            check(deviation.is_none_or(|d| d <= 1e-10), || {
                format!(
                    "power and eigen moments differ by {:e}",
                    deviation.unwrap_or_default()
                )
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let cfg = &cli.config;
    let config = RunConfig {
        command: cli.command.name(),
        max_vertices: cfg.max_vertices,
        max_depth: cfg.max_depth,
        dense_cap: cfg.dense_cap,
        tolerance: cfg.tolerance,
        reproducible: cfg.reproducible,
        out: cfg.out.as_deref(),
        conventions: Conventions::default(),
    };
    eprintln!(
        "run config: {}",
        serde_json::to_string(&config).expect("config serializes")
    );
    if cfg.max_vertices == 0 || cfg.max_depth == 0 || cfg.dense_cap == 0 {
        eprintln!("error: resource caps must be positive");
        return ExitCode::from(EXIT_USAGE);
    }
    if !(cfg.tolerance > 0.0 && cfg.tolerance < 1.0) {
        eprintln!("error: --tolerance must lie in (0, 1)");
        return ExitCode::from(EXIT_USAGE);
    }
    if cfg.reproducible {
        // a second initialization only fails if the pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build_global();
    }
    let ctx = Context {
        limits: Limits {
            max_vertices: cfg.max_vertices,
            max_depth: cfg.max_depth,
            dense_cap: cfg.dense_cap,
        },
        tolerance: cfg.tolerance,
        out: cfg.out.clone(),
    };
    match run(&ctx, cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(message)) => {
            eprintln!("verification failed: {message}");
            ExitCode::from(EXIT_VERIFICATION)
        }
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
