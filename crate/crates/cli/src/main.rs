use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mck_core::assoc::{truncated_polynomial_algebra_with_cap, DEFAULT_SIZE_CAP};
use mck_core::ce::{ce_h2, pair_index, symmetric_invariant_forms};
use mck_core::cyclic::hc1;
use mck_core::format::{parse_algebra, parse_generators, parse_lie};
use mck_core::lie::{semidirect, sl2, witt_with_cap};
use mck_core::verify::{
    default_pairs, default_prop2_configs, run_kunneth, run_verify_all, run_verify_erratum,
    run_verify_lemma, run_verify_prop1, run_verify_prop2, CaseConfig, DerivationSpec, Grid,
    NamedAlgebra, Report, SimpleSpec, DEFAULT_GRID_CAP,
};
use mck_core::{AssocAlgebra, LieAlgebra, Prime};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "mck", version, about = "Exact cyclic and Lie cohomology over prime fields")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Print an explicit basis after the dimension.
    #[arg(long, global = true)]
    show_basis: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// dim HC¹ of O_n or of an algebra file.
    Hc1(AlgebraArgs),
    /// dim Der of O_n or of an algebra file.
    Der(AlgebraArgs),
    /// dim H² of a Lie algebra, or of (S ⊗ O_n) ⋊ 𝒟 when --d is given.
    H2(LieArgs),
    /// dim of symmetric invariant bilinear forms on a Lie algebra.
    Bforms(LieArgs),
    /// dim of the 𝒟-invariant functionals on O_n.
    DualInvariants(DualArgs),
    /// HC¹(A ⊗ B) against the factor decomposition.
    KunnethCheck(PairArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct AlgebraArgs {
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    n: Option<usize>,
    /// o1, o2, k, kk or a path to an algebra file.
    #[arg(long)]
    a: Option<String>,
}

#[derive(Args)]
struct LieArgs {
    /// sl2, witt or a path to a Lie algebra file.
    #[arg(long, visible_alias = "lie", default_value = "sl2")]
    s: String,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    n: Option<usize>,
    /// zero, witt or a path to a derivation-generator file.
    #[arg(long)]
    d: Option<String>,
}

#[derive(Args)]
struct DualArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value = "witt")]
    d: String,
}

#[derive(Args)]
struct PairArgs {
    /// First factor: o1, o2, k, kk or an algebra file
    #[arg(long)]
    a: Option<String>,
    /// Second factor, same choices as --a
    #[arg(long)]
    b: Option<String>,
    /// Prime for built-in factors and prop2 cases
    #[arg(long)]
    p: Option<u64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    target: Target,
    /// Largest prime in the grid [default: 7]
    #[arg(long)]
    max_p: Option<u64>,
    /// Largest number of variables in the grid [default: 3]
    #[arg(long)]
    max_n: Option<usize>,
    #[command(flatten)]
    pair: PairArgs,
    /// Simple Lie algebra for prop2: sl2, witt or a file
    #[arg(long, visible_alias = "lie")]
    s: Option<String>,
    /// Number of variables for prop2
    #[arg(long)]
    n: Option<usize>,
    /// Derivation subalgebra for prop2: zero, witt or a generator file
    #[arg(long)]
    d: Option<String>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Target {
    Erratum,
    Prop1,
    Lemma,
    Prop2,
    All,
}

/// An input problem; always exit code 2.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type CliResult<T> = Result<T, InputError>;

fn size_cap(default: usize) -> CliResult<usize> {
    match std::env::var("MCK_SIZE_CAP") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| InputError(format!("MCK_SIZE_CAP must be a positive integer, got {v:?}"))),
        Err(_) => Ok(default),
    }
}

fn prime(p: Option<u64>) -> CliResult<Prime> {
    let p = p.ok_or_else(|| InputError("--p is required".into()))?;
    Ok(Prime::new(p)?)
}

fn read(path: &str) -> CliResult<String> {
    std::fs::read_to_string(Path::new(path)).map_err(|e| InputError(format!("{path}: {e}")))
}

fn check_modulus(given: Option<u64>, actual: Prime, what: &str) -> CliResult<()> {
    match given {
        Some(p) if p != actual.get() as u64 => Err(InputError(format!(
            "--p {p} disagrees with {what} modulus {}",
            actual.get()
        ))),
        _ => Ok(()),
    }
}

fn load_algebra(spec: &str, p: Option<u64>) -> CliResult<NamedAlgebra> {
    match spec {
        "o1" | "o2" | "k" | "kk" => Ok(NamedAlgebra::builtin(spec, prime(p)?)?),
        path => {
            let alg = parse_algebra(&read(path)?)?;
            check_modulus(p, alg.modulus(), path)?;
            Ok(NamedAlgebra::new(path, alg))
        }
    }
}

fn algebra_from(args: &AlgebraArgs, cap: usize) -> CliResult<AssocAlgebra> {
    match &args.a {
        Some(spec) => Ok(load_algebra(spec, args.p)?.algebra),
        None => Ok(truncated_polynomial_algebra_with_cap(
            prime(args.p)?,
            args.n.unwrap_or(1),
            cap,
        )?),
    }
}

fn simple_spec(spec: &str, p: Option<u64>) -> CliResult<SimpleSpec> {
    match spec {
        "sl2" => Ok(SimpleSpec::Sl2),
        path => {
            let lie = parse_lie(&read(path)?)?;
            check_modulus(p, lie.modulus(), path)?;
            Ok(SimpleSpec::Given {
                name: path.to_string(),
                lie,
            })
        }
    }
}

fn derivation_spec(spec: &str, cap: usize) -> CliResult<DerivationSpec> {
    match spec {
        "zero" => Ok(DerivationSpec::Zero),
        "witt" => Ok(DerivationSpec::Witt),
        path => Ok(DerivationSpec::Generators {
            name: path.to_string(),
            set: parse_generators(&read(path)?, cap)?,
        }),
    }
}

fn lie_from(spec: &str, p: Option<u64>, n: usize, cap: usize) -> CliResult<LieAlgebra> {
    match spec {
        "sl2" => Ok(sl2(prime(p)?)?),
        "witt" => Ok(witt_with_cap(prime(p)?, n, cap)?.lie),
        path => {
            let lie = parse_lie(&read(path)?)?;
            check_modulus(p, lie.modulus(), path)?;
            Ok(lie)
        }
    }
}

/// A computed dimension with an optional basis of sparse entries.
struct Output {
    command: &'static str,
    params: Value,
    dim: usize,
    basis: Vec<Vec<(String, String, u8)>>,
}

impl Output {
    fn render(&self, format: Format, show_basis: bool) -> String {
        match format {
            Format::Text => {
                let mut out = format!("{}\n", self.dim);
                if show_basis {
                    for (i, entries) in self.basis.iter().enumerate() {
                        let cells: Vec<String> = entries
                            .iter()
                            .map(|(r, c, v)| format!("({r}, {c}, {v})"))
                            .collect();
                        out.push_str(&format!("basis[{i}]: {}\n", cells.join(" ")));
                    }
                }
                out
            }
            Format::Json => {
                let mut v = json!({
                    "command": self.command,
                    "params": self.params,
                    "dim": self.dim,
                });
                if show_basis {
                    v["basis"] = self
                        .basis
                        .iter()
                        .map(|e| e.iter().map(|(r, c, x)| json!([r, c, x])).collect())
                        .collect::<Vec<Value>>()
                        .into();
                }
                format!("{}\n", serde_json::to_string_pretty(&v).expect("output serializes"))
            }
        }
    }
}

fn square_entries(labels: &[String], flat: &[u8]) -> Vec<(String, String, u8)> {
    let d = labels.len();
    flat.iter()
        .enumerate()
        .filter(|&(_, &v)| v != 0)
        .map(|(e, &v)| (labels[e / d].clone(), labels[e % d].clone(), v))
        .collect()
}

fn pair_entries(labels: &[String], pairs: &[u8]) -> Vec<(String, String, u8)> {
    let d = labels.len();
    let mut out = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let v = pairs[pair_index(d, i, j)];
            if v != 0 {
                out.push((labels[i].clone(), labels[j].clone(), v));
            }
        }
    }
    out
}

fn hc1_cmd(args: &AlgebraArgs, cap: usize) -> CliResult<Output> {
    let alg = algebra_from(args, cap)?;
    let space = hc1(&alg)?;
    let basis = space
        .cocycles
        .quotient_representatives(&space.coboundaries)?
        .iter()
        .map(|v| square_entries(alg.labels(), v))
        .collect();
    Ok(Output {
        command: "hc1",
        params: json!({ "p": alg.modulus().get(), "dim_a": alg.dim() }),
        dim: space.hc1_dim,
        basis,
    })
}

fn der_cmd(args: &AlgebraArgs, cap: usize) -> CliResult<Output> {
    let alg = algebra_from(args, cap)?;
    let der = alg.derivations();
    let basis = der
        .vectors()
        .map(|v| square_entries(alg.labels(), v))
        .collect();
    Ok(Output {
        command: "der",
        params: json!({ "p": alg.modulus().get(), "dim_a": alg.dim() }),
        dim: der.dim(),
        basis,
    })
}

fn h2_cmd(args: &LieArgs, cap: usize) -> CliResult<Output> {
    let n = args.n.unwrap_or(1);
    let lie = match &args.d {
        None => lie_from(&args.s, args.p, n, cap)?,
        Some(d) => {
            let s = lie_from(&args.s, args.p, n, cap)?;
            let config = CaseConfig {
                p: s.modulus(),
                n,
                s: SimpleSpec::Given {
                    name: args.s.clone(),
                    lie: s,
                },
                d: derivation_spec(d, cap)?,
            };
            let (s, a, der) = config.build(cap)?;
            semidirect(&s, &a, &der)?.lie
        }
    };
    let h = ce_h2(&lie)?;
    let basis = h
        .class_representatives()?
        .iter()
        .map(|v| pair_entries(lie.labels(), v))
        .collect();
    Ok(Output {
        command: "h2",
        params: json!({ "p": lie.modulus().get(), "dim_l": lie.dim() }),
        dim: h.h2_dim,
        basis,
    })
}

fn bforms_cmd(args: &LieArgs, cap: usize) -> CliResult<Output> {
    let lie = lie_from(&args.s, args.p, args.n.unwrap_or(1), cap)?;
    let b = symmetric_invariant_forms(&lie);
    let basis = b.vectors().map(|v| square_entries(lie.labels(), v)).collect();
    Ok(Output {
        command: "bforms",
        params: json!({ "p": lie.modulus().get(), "dim_l": lie.dim() }),
        dim: b.dim(),
        basis,
    })
}

fn dual_cmd(args: &DualArgs, cap: usize) -> CliResult<Output> {
    let config = CaseConfig {
        p: Prime::new(args.p)?,
        n: args.n,
        s: SimpleSpec::Sl2,
        d: derivation_spec(&args.d, cap)?,
    };
    let a = truncated_polynomial_algebra_with_cap(config.p, config.n, cap)?;
    let der = match &config.d {
        DerivationSpec::Zero => Vec::new(),
        _ => config.build(cap)?.2.action,
    };
    let inv = a.dual_invariants(&der)?;
    let basis = inv
        .vectors()
        .map(|v| {
            v.iter()
                .enumerate()
                .filter(|&(_, &c)| c != 0)
                .map(|(k, &c)| (a.labels()[k].clone(), "*".to_string(), c))
                .collect()
        })
        .collect();
    Ok(Output {
        command: "dual-invariants",
        params: json!({ "p": args.p, "n": args.n, "d": args.d }),
        dim: inv.dim(),
        basis,
    })
}

fn pairs_from(args: &PairArgs) -> CliResult<Vec<(NamedAlgebra, NamedAlgebra)>> {
    match (&args.a, &args.b) {
        (None, None) => Ok(default_pairs()?),
        (Some(a), Some(b)) => Ok(vec![(load_algebra(a, args.p)?, load_algebra(b, args.p)?)]),
        _ => Err(InputError("--a and --b must be given together".into())),
    }
}

enum Outcome {
    Single(Report),
    All(mck_core::verify::Aggregate),
}

fn verify_cmd(args: &VerifyArgs) -> CliResult<Outcome> {
    let defaults = Grid::default();
    let grid = Grid {
        max_p: args.max_p.unwrap_or(defaults.max_p),
        max_n: args.max_n.unwrap_or(defaults.max_n),
        cap: size_cap(DEFAULT_GRID_CAP)?,
    };
    Ok(match args.target {
        Target::Erratum => Outcome::Single(run_verify_erratum(&grid)),
        Target::Prop1 => Outcome::Single(run_verify_prop1(&grid)),
        Target::Lemma => Outcome::Single(run_verify_lemma(&pairs_from(&args.pair)?)?),
        Target::Prop2 => {
            let configs = if args.s.is_none() && args.d.is_none() && args.pair.p.is_none() {
                default_prop2_configs()
            } else {
                let s = simple_spec(args.s.as_deref().unwrap_or("sl2"), args.pair.p)?;
                let p = match &s {
                    SimpleSpec::Given { lie, .. } => lie.modulus(),
                    SimpleSpec::Sl2 => prime(args.pair.p)?,
                };
                let ds = match &args.d {
                    Some(d) => vec![derivation_spec(d, grid.cap)?],
                    None => vec![DerivationSpec::Zero, DerivationSpec::Witt],
                };
                ds.into_iter()
                    .map(|d| CaseConfig {
                        p,
                        n: args.n.unwrap_or(1),
                        s: s.clone(),
                        d,
                    })
                    .collect()
            };
            Outcome::Single(run_verify_prop2(&configs, grid.cap))
        }
        Target::All => Outcome::All(run_verify_all(&grid)?),
    })
}

fn run(cli: &Cli) -> CliResult<(String, u8)> {
    let cap = size_cap(DEFAULT_SIZE_CAP)?;
    let output = match &cli.command {
        Command::Hc1(a) => hc1_cmd(a, cap)?,
        Command::Der(a) => der_cmd(a, cap)?,
        Command::H2(a) => h2_cmd(a, cap)?,
        Command::Bforms(a) => bforms_cmd(a, cap)?,
        Command::DualInvariants(a) => dual_cmd(a, cap)?,
        Command::KunnethCheck(a) => {
            let report = run_kunneth(&pairs_from(a)?)?;
            return Ok(render_report(&report, cli.format));
        }
        Command::Verify(v) => {
            return Ok(match verify_cmd(v)? {
                Outcome::Single(r) => render_report(&r, cli.format),
                Outcome::All(agg) => {
                    let text = match cli.format {
                        Format::Text => agg.to_text(),
                        Format::Json => format!("{}\n", agg.to_json()),
                    };
                    (text, agg.exit_code as u8)
                }
            });
        }
    };
    Ok((output.render(cli.format, cli.show_basis), 0))
}

fn render_report(report: &Report, format: Format) -> (String, u8) {
    let text = match format {
        Format::Text => report.to_text(),
        Format::Json => format!("{}\n", report.to_json()),
    };
    (text, report.exit_code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, code)) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
