//! The `forest-pi` command line.
//!
//! Exit codes: 0 on success, 2 when an input file cannot be read or parsed,
//! 3 when a capacity limit is hit, 1 for any other error and for failed
//! verification.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value as Json};

use crate::boolfn::{BddConfig, DEFAULT_CACHE_LIMIT, DEFAULT_NODE_BUDGET};
use crate::encode::{build_constraints, encode_expression, encode_literal, registry, VarMap};
use crate::error::{Error, Result};
use crate::ingest::{describe_space, lift_instance, parse_model, tree_paths, tree_to_expression, FeatureSpace, Forest, RawPoint};
use crate::mvl::{MvLiteral, DEFAULT_CAP};
use crate::oracle::{verify_all, Limits};
use crate::pi::{explain_forest, explanations_json, guard_with_constraints, CompiledForest};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "forest-pi", version, about = "Exact prime-implicant explanations for tree ensembles")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format [default: text]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Maximum number of BDD nodes [default: 10000000]
    #[arg(long, global = true)]
    pub node_budget: Option<usize>,
    /// Maximum instances or terms an exhaustive check may visit [default: 1048576]
    #[arg(long, global = true)]
    pub cap: Option<u64>,
    /// TOML file with `node_budget`, `cache_limit`, `cap`, `format`, `seed`, `trials`
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the decision and every PI-explanation of an instance
    Explain { model: PathBuf, instance: PathBuf },
    /// Print the predicted class of an instance
    Eval { model: PathBuf, instance: PathBuf },
    /// Dump the variable map, constraints and encoded class expressions
    Encode {
        model: PathBuf,
        #[arg(long, default_value = "one_hot")]
        scheme: String,
        /// Class whose function is exported by --dimacs or --dot
        #[arg(long, default_value_t = 1)]
        class: usize,
        /// Print the CNF of `Ψ ⇒ Δ_b` for --class instead of the dump
        #[arg(long, conflicts_with = "dot")]
        dimacs: bool,
        /// Print the diagram of the class function for --class instead of the dump
        #[arg(long)]
        dot: bool,
    },
    /// Run every property check and the encoding demonstrations
    Verify {
        /// Randomized trials per property [default: 1000]
        #[arg(long)]
        trials: Option<u64>,
        /// Seed of the trial streams [default: 7]
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Settings read from `--config`; every field is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub node_budget: Option<usize>,
    pub cache_limit: Option<usize>,
    pub cap: Option<u64>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
}

/// Effective settings: flags override the config file, which overrides defaults.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    pub bdd: BddConfig,
    pub cap: u64,
    pub format: Format,
    pub seed: u64,
    pub trials: u64,
}

impl Config {
    pub fn resolve(global: &GlobalArgs, trials: Option<u64>, seed: Option<u64>) -> Result<Self> {
        let file = match &global.config {
            Some(path) => {
                let text = read(path)?;
                toml::from_str::<FileConfig>(&text).map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?
            }
            None => FileConfig::default(),
        };
        let config = Config {
            bdd: BddConfig {
                node_budget: global.node_budget.or(file.node_budget).unwrap_or(DEFAULT_NODE_BUDGET),
                cache_limit: file.cache_limit.unwrap_or(DEFAULT_CACHE_LIMIT),
            },
            cap: global.cap.or(file.cap).unwrap_or(DEFAULT_CAP),
            format: global.format.or(file.format).unwrap_or(Format::Text),
            seed: seed.or(file.seed).unwrap_or(7),
            trials: trials.or(file.trials).unwrap_or(1000),
        };
        if config.bdd.node_budget == 0 || config.bdd.cache_limit == 0 || config.cap == 0 || config.trials == 0 {
            return Err(Error::invalid("configuration", "budgets, cap and trials must be positive"));
        }
        Ok(config)
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::parse(path.display().to_string(), e.to_string()))
}

fn load_model(path: &Path) -> Result<(Forest, FeatureSpace)> {
    parse_model(&read(path)?).map_err(|e| with_file(e, path))
}

fn load_instance(path: &Path, space: &FeatureSpace) -> Result<RawPoint> {
    RawPoint::from_json(&read(path)?, space).map_err(|e| with_file(e, path))
}

/// Prefixes a parse error's JSON path with the file it came from.
fn with_file(e: Error, file: &Path) -> Error {
    match e {
        Error::Parse { path, message } => Error::Parse {
            path: format!("{}: {path}", file.display()),
            message,
        },
        other => other,
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::UnknownScheme(_) => EXIT_PARSE,
        Error::Capacity { .. } => EXIT_CAPACITY,
        _ => EXIT_FAILURE,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run(args: impl IntoIterator<Item = OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests are not errors
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_PARSE;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let (trials, seed) = match &cli.command {
        Command::Verify { trials, seed } => (*trials, *seed),
        _ => (None, None),
    };
    let config = Config::resolve(&cli.global, trials, seed)?;
    let text = match &cli.command {
        Command::Explain { model, instance } => explain(model, instance, &config)?,
        Command::Eval { model, instance } => eval(model, instance, &config)?,
        Command::Encode {
            model,
            scheme,
            class,
            dimacs,
            dot,
        } => encode(model, scheme, *class, *dimacs, *dot, &config)?,
        Command::Verify { .. } => {
            let (text, passed) = verify(&config)?;
            emit(out, &text)?;
            return Ok(if passed { EXIT_OK } else { EXIT_FAILURE });
        }
    };
    emit(out, &text)?;
    Ok(EXIT_OK)
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| Error::invalid("output", e.to_string()))
}

fn pretty(j: &Json) -> String {
    let mut s = serde_json::to_string_pretty(j).expect("serializable");
    s.push('\n');
    s
}

fn explain(model: &Path, instance: &Path, config: &Config) -> Result<String> {
    let (forest, space) = load_model(model)?;
    let raw = load_instance(instance, &space)?;
    let inst = lift_instance(&raw, &space)?;
    let decision = forest.classify(&inst, &space)?;
    let explanations = explain_forest(&forest, &space, &inst, config.bdd)?;
    Ok(match config.format {
        Format::Json => pretty(&explanations_json(decision, raw.to_json(&space), &explanations)),
        Format::Text => {
            let mut s = format!("decision: {decision}\nexplanations: {}\n", explanations.len());
            for e in &explanations {
                s.push_str(&format!("  {}\n", e.text()));
            }
            s
        }
    })
}

fn eval(model: &Path, instance: &Path, config: &Config) -> Result<String> {
    let (forest, space) = load_model(model)?;
    let raw = load_instance(instance, &space)?;
    let decision = forest.predict(&raw, &space)?;
    Ok(match config.format {
        Format::Json => pretty(&json!({ "decision": decision })),
        Format::Text => format!("{decision}\n"),
    })
}

fn encode(model: &Path, scheme: &str, class: usize, dimacs: bool, dot: bool, config: &Config) -> Result<String> {
    let (forest, space) = load_model(model)?;
    let encoding = registry()
        .get(scheme)
        .ok_or_else(|| Error::UnknownScheme(scheme.to_string()))?;
    let map = VarMap::new(space.mv_space(), encoding);
    if dimacs || dot {
        if class >= forest.n_classes() {
            return Err(Error::invalid(
                "class",
                format!("class {class} is not below n_classes = {}", forest.n_classes()),
            ));
        }
        let mut compiled = CompiledForest::with_map(&forest, &space, map.clone(), config.bdd)?;
        let f = compiled.class_fns[class];
        return Ok(if dimacs {
            let gamma = guard_with_constraints(&mut compiled.manager, f, &map)?;
            compiled.manager.to_dimacs(gamma, map.len() as u32, map.names())
        } else {
            compiled.manager.to_dot(f, map.names())
        });
    }

    let mut literals: Vec<MvLiteral> = Vec::new();
    for tree in forest.trees() {
        for (term, _) in tree_paths(tree, &space)? {
            literals.extend(term.literals().cloned());
        }
    }
    literals.sort_by(|a, b| (a.var(), a.values()).cmp(&(b.var(), b.values())));
    literals.dedup();
    let mv = space.mv_space();
    let constraints = build_constraints(&map);
    let mut classes = Vec::new();
    for (t, tree) in forest.trees().iter().enumerate() {
        for c in 0..forest.n_classes() {
            let expr = tree_to_expression(tree, c, forest.n_classes(), &space)?;
            let enc = encode_expression(&expr, &map);
            classes.push((t, c, expr.display(mv).to_string(), enc.display(&map).to_string()));
        }
    }
    let variables: Vec<(String, Vec<(String, String)>)> = mv
        .vars()
        .iter()
        .map(|v| {
            let labels = v.values().map(|x| v.label(x).to_string());
            (v.name().to_string(), labels.zip(indicator_names(&map, v.id(), v.domain_size())).collect())
        })
        .collect();
    let lit_rows: Vec<(String, String)> = literals
        .iter()
        .map(|l| {
            let term = crate::mvl::MvTerm::from_literals([l.clone()]).expect("single literal");
            (term.display(mv).to_string(), encode_literal(l, &map).display(&map).to_string())
        })
        .collect();
    let psi: Vec<String> = constraints.per_variable.iter().map(|e| e.display(&map).to_string()).collect();

    Ok(match config.format {
        Format::Json => pretty(&json!({
            "scheme": map.scheme(),
            "indicators": map.names(),
            "variables": variables.iter().map(|(name, vals)| json!({
                "name": name,
                "values": vals.iter().map(|(label, ind)| json!({"label": label, "indicator": ind})).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "constraints": psi,
            "literals": lit_rows.iter().map(|(l, e)| json!({"literal": l, "encoding": e})).collect::<Vec<_>>(),
            "classes": classes.iter().map(|(t, c, d, e)| json!({"tree": t, "class": c, "expression": d, "encoding": e})).collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut s = format!("scheme: {}\nindicators: {}\n", map.scheme(), map.names().join(" "));
            s.push_str("intervals:\n");
            for line in describe_space(&space).lines() {
                s.push_str(&format!("  {line}\n"));
            }
            s.push_str("constraints:\n");
            for (v, p) in mv.vars().iter().zip(&psi) {
                s.push_str(&format!("  Ψ_{} = {p}\n", v.name()));
            }
            s.push_str("literals:\n");
            for (l, e) in &lit_rows {
                s.push_str(&format!("  {l} ↦ {e}\n"));
            }
            s.push_str("classes:\n");
            for (t, c, d, e) in &classes {
                s.push_str(&format!("  tree {t} class {c}: {d}\n    Δ_b = {e}\n"));
            }
            s
        }
    })
}

/// The indicator owning each value, or `-` for a value without one.
fn indicator_names(map: &VarMap, var: usize, n: u32) -> Vec<String> {
    (1..=n)
        .map(|v| map.indicator(var, v).map_or_else(|| "-".to_string(), |bv| map.name(bv).to_string()))
        .collect()
}

fn verify(config: &Config) -> Result<(String, bool)> {
    let limits = Limits {
        cap: config.cap,
        bdd: config.bdd,
    };
    let reports = verify_all(config.trials, config.seed, &limits)?;
    let passed = reports.iter().all(|r| r.passed());
    let text = match config.format {
        Format::Json => pretty(&json!({ "passed": passed, "reports": reports })),
        Format::Text => {
            let mut s = String::new();
            for r in &reports {
                if r.notes.is_empty() && r.passed() {
                    s.push_str(&r.status_line());
                    s.push('\n');
                } else {
                    s.push_str(&r.text());
                }
            }
            s.push_str(if passed { "all checks passed\n" } else { "some checks failed\n" });
            s
        }
    };
    Ok((text, passed))
}
