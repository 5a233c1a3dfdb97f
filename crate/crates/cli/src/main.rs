use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use tpcsa_core::catalog::{self, Params};
use tpcsa_core::classify::{search_compatible, SearchConfig};
use tpcsa_core::constructions;
use tpcsa_core::parse::parse_poly;
use tpcsa_core::{
    check_axiom, check_compat_equivalence, check_derived_identities, check_suite, load_algebra,
    load_aux, save_algebra, save_aux, validate_table, AlgebraDef, Aux, AxiomId, CheckReport, Scalar,
    SuiteId,
};

/// Exact checker for conformal superalgebra tables.
#[derive(Parser)]
#[command(name = "tpcsa", version)]
struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check an algebra file against a suite, an axiom, or a derived check.
    Check(CheckArgs),
    /// Run a construction and write the resulting algebra file.
    Construct(ConstructArgs),
    /// Exhaustive search for compatible products on a rank-(1+1) type.
    Classify(ClassifyArgs),
    /// Rewrite an algebra file in canonical form.
    Fmt {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List or emit catalog algebras.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
}

#[derive(Args)]
struct Output {
    /// Print the machine-readable JSON report instead of text.
    #[arg(long)]
    json: bool,
    /// Also write the JSON report (or algebra file) here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct CheckWhat {
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    axiom: Option<String>,
    /// The seven identities that hold in every TPCSA.
    #[arg(long)]
    derived: bool,
    /// The Leibniz / transposed Leibniz / vanishing biconditional.
    #[arg(long)]
    compat: bool,
    /// Table well-formedness only (parity closure, variables).
    #[arg(long)]
    validate: bool,
}

#[derive(Args)]
struct CheckArgs {
    file: PathBuf,
    #[command(flatten)]
    what: CheckWhat,
    /// Auxiliary JSON with a module map (`hom_jacobi`, `derivation`).
    #[arg(long)]
    aux: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Commutator,
    DerivationStar,
    HModify,
    HomMap,
    DirectSum,
    Tensor,
    TensorPrelie,
    Current,
}

impl Kind {
    fn inputs(self) -> usize {
        match self {
            Kind::DirectSum | Kind::Tensor | Kind::TensorPrelie => 2,
            _ => 1,
        }
    }
}

#[derive(Args)]
struct ConstructArgs {
    kind: Kind,
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Auxiliary JSON: `map` for derivation-star, `element` for h-modify and hom-map.
    #[arg(long)]
    aux: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Lie type: r1 .. r5.
    #[arg(long = "type")]
    rtype: String,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    q: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    /// Total degree bound of the ansatz polynomials.
    #[arg(long, default_value_t = 1)]
    deg: u32,
    /// Comma-separated rational coefficient grid.
    #[arg(long, default_value = "-1,0,1", allow_hyphen_values = true)]
    grid: String,
    /// Odd prime for the prefilter; survivors are re-verified over Q.
    #[arg(long = "mod")]
    prime: Option<u32>,
    #[arg(long, default_value_t = tpcsa_core::classify::DEFAULT_CEILING)]
    ceiling: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Subcommand)]
enum CatalogCmd {
    List,
    Emit {
        name: String,
        /// Parameter as `key=value`; repeatable.
        #[arg(long = "param", value_parser = parse_kv)]
        params: Vec<(String, String)>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_kv(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.to_string()))
        .ok_or_else(|| format!("expected key=value, got `{s}`"))
}

/// Outcome that maps to exit code 1 without being an error.
struct Violations;

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn load(path: &Path) -> Result<AlgebraDef> {
    load_algebra(&read(path)?).with_context(|| format!("loading {}", path.display()))
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_out(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit(output: &Output, text: &str, json: &str) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(if output.json { json } else { text }.as_bytes())?;
    if let Some(p) = &output.out {
        write_out(p, json)?;
    }
    Ok(())
}

fn emit_report(output: &Output, report: &CheckReport) -> Result<bool> {
    emit(output, &report.to_string(), &report.to_json())?;
    Ok(report.pass())
}

fn run_check(a: &CheckArgs) -> Result<bool> {
    let def = load(&a.file)?;
    let aux = match &a.aux {
        Some(p) => load_aux(&read(p)?, def.basis()).with_context(|| format!("loading {}", p.display()))?,
        None => Aux::default(),
    };
    let s = &def.structure;
    let w = &a.what;
    let report = if let Some(name) = &w.suite {
        let suite = SuiteId::from_name(name).ok_or_else(|| {
            anyhow!(
                "unknown suite `{name}`; known: {}",
                SuiteId::ALL.map(|s| s.name()).join(", ")
            )
        })?;
        check_suite(s, suite, aux.map.as_ref())?
    } else if let Some(name) = &w.axiom {
        let id = AxiomId::from_name(name).ok_or_else(|| {
            anyhow!(
                "unknown axiom `{name}`; known: {}",
                AxiomId::ALL.map(|s| s.name()).join(", ")
            )
        })?;
        check_axiom(s, id, aux.map.as_ref())?
    } else if w.derived {
        check_derived_identities(s)?
    } else if w.compat {
        check_compat_equivalence(s)?.report
    } else {
        validate_table(s)
    };
    emit_report(&a.output, &report)
}

fn run_construct(a: &ConstructArgs) -> Result<()> {
    if a.inputs.len() != a.kind.inputs() {
        bail!("this construction takes {} input file(s)", a.kind.inputs());
    }
    let defs = a.inputs.iter().map(|p| load(p)).collect::<Result<Vec<_>>>()?;
    let aux = || -> Result<Aux> {
        let p = a.aux.as_ref().ok_or_else(|| anyhow!("this construction needs --aux"))?;
        Ok(load_aux(&read(p)?, defs[0].basis())?)
    };
    let element = || aux()?.element.ok_or_else(|| anyhow!("aux file has no `element`"));
    let text = match a.kind {
        Kind::Commutator => save_algebra(&constructions::commutator(&defs[0])?),
        Kind::DerivationStar => {
            let map = aux()?.map.ok_or_else(|| anyhow!("aux file has no `map`"))?;
            save_algebra(&constructions::derivation_star(&defs[0], &map)?)
        }
        Kind::HModify => save_algebra(&constructions::h_modified_bracket(&defs[0], &element()?)?),
        Kind::HomMap => {
            let map = constructions::hom_map_from_element(&defs[0], &element()?)?;
            let out = Aux {
                map: Some(map),
                element: None,
            };
            save_aux(&out, defs[0].basis())
        }
        Kind::DirectSum => save_algebra(&constructions::direct_sum(&defs[0], &defs[1])?),
        Kind::Tensor => save_algebra(&constructions::tensor_tpcsa(&defs[0], &defs[1])?),
        Kind::TensorPrelie => save_algebra(&constructions::tensor_prelie_poisson(&defs[0], &defs[1])?),
        Kind::Current => save_algebra(&constructions::current_bracket(&defs[0])?),
    };
    write_or_print(a.out.as_deref(), &text)
}

fn parse_grid(text: &str) -> Result<Vec<Scalar>> {
    text.split(',')
        .map(|t| {
            let p = parse_poly(t.trim()).with_context(|| format!("grid value `{t}`"))?;
            if !p.is_constant() {
                bail!("grid value `{t}` is not a rational constant");
            }
            Ok(p.constant_term())
        })
        .collect()
}

fn run_classify(a: &ClassifyArgs) -> Result<bool> {
    let rtype = match a.rtype.trim_start_matches(['r', 'R']).parse::<u8>() {
        Ok(t @ 1..=5) => t,
        _ => bail!("--type must be one of r1 .. r5"),
    };
    let mut lie: Params = BTreeMap::new();
    for (k, v) in [("p", &a.p), ("q", &a.q), ("beta", &a.beta), ("gamma", &a.gamma), ("alpha", &a.alpha)] {
        if let Some(v) = v {
            lie.insert(k.to_string(), v.clone());
        }
    }
    let cfg = SearchConfig::new(rtype, &lie, a.deg)?
        .with_grid(parse_grid(&a.grid)?)
        .with_prime(a.prime)
        .with_ceiling(a.ceiling);
    eprintln!("searching {} candidates", cfg.candidate_count());
    let report = search_compatible(&cfg)?;
    emit(&a.output, &report.to_string(), &report.to_json())?;
    Ok(report.findings.is_empty())
}

fn run_catalog(cmd: &CatalogCmd) -> Result<()> {
    match cmd {
        CatalogCmd::List => {
            for e in catalog::ENTRIES {
                let params: Vec<String> = e
                    .params
                    .iter()
                    .map(|(k, d)| if d.is_empty() { format!("{k}?") } else { format!("{k}={d}") })
                    .collect();
                println!("{:<16} {:<28} {}", e.name, params.join(" "), e.summary);
            }
            Ok(())
        }
        CatalogCmd::Emit { name, params, out } => {
            let p: Params = params.iter().cloned().collect();
            let text = save_algebra(&catalog::build(name, &p)?);
            write_or_print(out.as_deref(), &text)
        }
    }
}

fn run(cli: &Cli) -> Result<Result<(), Violations>> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .context("configuring worker pool")?;
    }
    let ok = match &cli.cmd {
        Cmd::Check(a) => run_check(a)?,
        Cmd::Construct(a) => {
            run_construct(a)?;
            true
        }
        Cmd::Classify(a) => run_classify(a)?,
        Cmd::Fmt { file, out } => {
            let text = save_algebra(&load(file)?);
            write_or_print(out.as_deref(), &text)?;
            true
        }
        Cmd::Catalog { cmd } => {
            run_catalog(cmd)?;
            true
        }
    };
    Ok(if ok { Ok(()) } else { Err(Violations) })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Violations)) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
