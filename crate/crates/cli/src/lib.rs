//! The `polyhom` command line.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use polyhom::algebra::{homology, FinAbelianGroup, GroupHom, IntMatrix};
use polyhom::binding::{extract, verify_action};
use polyhom::hurewicz::verdict;
use polyhom::polygroupoid::{check_associativity_all, check_axioms, scramble, standard, Polygroupoid, PolygroupoidJson};
use polyhom::report::AxiomReport;
use polyhom::selftest::{run_selftest, Fault, SelftestOptions};
use polyhom::tower::{
    check_group_tower, check_poly_tower, induced_group_tower, inverse_limit, standard_tower, GroupTower, GroupTowerJson,
    PolyTower, PolyTowerJson,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "polyhom", version, about = "Finite polygroupoids, binding groups and homology")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a standard polygroupoid, or a standard tower with --chain.
    Gen {
        #[arg(long)]
        arity: usize,
        /// Invariant factors or cyclic orders, comma separated.
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        vertices: usize,
        /// Scramble the fibers with this seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Groups of a tower from the top down, separated by ':', e.g. 8:4:2.
        #[arg(long, conflicts_with_all = ["group", "seed"])]
        chain: Option<String>,
    },
    /// Relabel every top fiber by a seeded permutation.
    Scramble {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        seed: u64,
    },
    /// Coherence, Q-compatibility, horn uniqueness and local finiteness.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Every associativity grid.
    Associativity {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Recover the binding group and its action from Q.
    Extract {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// The staged Hurewicz verdict.
    Verdict {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// H_n from a pair of boundary matrices.
    Homology {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Check a group tower or a polygroupoid tower.
    TowerCheck {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Inverse limit of a group tower, or of the binding groups of a polygroupoid tower.
    TowerLimit {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Run the acceptance criteria.
    Selftest {
        #[arg(long)]
        quick: bool,
        /// Corrupt some instances on purpose.
        #[arg(long, hide = true)]
        fault: Option<Fault>,
    },
}

/// A usage, I/O or parse error; maps to exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

/// Result of a command: the payload to emit and whether it passed.
struct Output {
    json: serde_json::Value,
    text: Option<String>,
    passed: bool,
}

impl Output {
    fn data<T: Serialize>(v: &T) -> Result<Self, UsageError> {
        Ok(Self { json: serde_json::to_value(v)?, text: None, passed: true })
    }

    fn checked<T: Serialize>(v: &T, text: String, passed: bool) -> Result<Self, UsageError> {
        Ok(Self { json: serde_json::to_value(v)?, text: Some(text), passed })
    }
}

/// `{"d_n": M, "d_np1": M}` with `M = {"rows", "cols", "entries"}` row-major.
#[derive(Deserialize)]
struct HomologyInput {
    d_n: MatrixInput,
    d_np1: MatrixInput,
}

#[derive(Deserialize)]
struct MatrixInput {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

#[derive(Serialize)]
struct LimitOutput {
    limit: FinAbelianGroup,
    tower: GroupTowerJson,
    projections: BTreeMap<String, GroupHom>,
}

#[derive(Serialize)]
struct ExtractOutput {
    base: String,
    #[serde(flatten)]
    action: polyhom::binding::ActionJson,
    checks: AxiomReport,
}

/// Runs the CLI on `argv` (including the program name), writing to the
/// process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(&cli).and_then(|o| emit(&cli, &o, out).map(|()| o.passed)) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn emit(cli: &Cli, o: &Output, out: &mut dyn Write) -> Result<(), UsageError> {
    let body = match (cli.format, &o.text) {
        (Format::Text, Some(t)) => t.clone(),
        (Format::Text, None) => {
            return Err(UsageError("this command only produces JSON; use --format json".into()));
        }
        (Format::Json, _) => serde_json::to_string_pretty(&o.json)? + "\n",
    };
    match &cli.out {
        Some(p) => fs::write(p, body).map_err(|e| UsageError(format!("{}: {e}", p.display()))),
        None => out.write_all(body.as_bytes()).map_err(Into::into),
    }
}

fn read_json<T: DeserializeOwned>(path: &PathBuf) -> Result<T, UsageError> {
    let s = fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&s).map_err(|e| {
        UsageError(format!("{}: malformed JSON at line {}, column {}: {e}", path.display(), e.line(), e.column()))
    })
}

fn read_structure(path: &PathBuf) -> Result<Polygroupoid, UsageError> {
    let j: PolygroupoidJson = read_json(path)?;
    Polygroupoid::from_json(&j).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn vertex_list(k: usize) -> Vec<u32> {
    (0..k as u32).collect()
}

fn execute(cli: &Cli) -> Result<Output, UsageError> {
    match &cli.command {
        Command::Gen { arity, group, vertices, seed, chain } => match chain {
            Some(spec) => {
                let groups = spec.split(':').map(str::parse::<FinAbelianGroup>).collect::<Result<Vec<_>, _>>()?;
                let maps = groups.windows(2).map(|w| GroupHom::reduction(&w[0], &w[1])).collect::<Result<Vec<_>, _>>()?;
                let (t, _) = standard_tower(&groups, &maps, &vertex_list(*vertices), *arity)?;
                Output::data(&t.to_json())
            }
            None => {
                let g: FinAbelianGroup =
                    group.as_deref().ok_or_else(|| UsageError("gen needs --group or --chain".into()))?.parse()?;
                let h = standard(&g, &vertex_list(*vertices), *arity)?.structure;
                let h = match seed {
                    Some(s) => scramble(&h, *s),
                    None => h,
                };
                Output::data(&h.to_json())
            }
        },
        Command::Scramble { input, seed } => Output::data(&scramble(&read_structure(input)?, *seed).to_json()),
        Command::Check { input } => {
            let r = check_axioms(&read_structure(input)?);
            Output::checked(&r, r.to_text(), r.passed())
        }
        Command::Associativity { input } => {
            let r = check_associativity_all(&read_structure(input)?)?;
            Output::checked(&r, r.to_text(), r.passed())
        }
        Command::Extract { input } => {
            let h = read_structure(input)?;
            let z = h.top_configs().into_iter().next().ok_or_else(|| UsageError("structure has no top fibers".into()))?;
            match extract(&h, &z) {
                Ok((g, act)) => {
                    let checks = verify_action(&h, &act);
                    let passed = checks.passed();
                    let text = format!("base {z}\ngroup ≅ {g}\n{}", checks.to_text());
                    let o = ExtractOutput { base: z.key(), action: act.to_json(&h), checks };
                    Output::checked(&o, text, passed)
                }
                Err(e) => {
                    let msg = e.to_string();
                    Output::checked(&serde_json::json!({ "base": z.key(), "error": msg }), format!("FAIL extract: {msg}\n"), false)
                }
            }
        }
        Command::Verdict { input } => {
            let r = verdict(&read_structure(input)?);
            Output::checked(&r, r.to_text(), r.passed())
        }
        Command::Homology { input } => {
            let j: HomologyInput = read_json(input)?;
            let m = |x: &MatrixInput| IntMatrix::from_i64(x.rows, x.cols, &x.entries);
            let g = homology(&m(&j.d_n)?, &m(&j.d_np1)?)?;
            let text = format!("H ≅ {g}\n");
            Output::checked(&g, text, true)
        }
        Command::TowerCheck { input } => {
            let v: serde_json::Value = read_json(input)?;
            let r = if v.get("nodes").is_some_and(|n| n.is_object()) {
                check_poly_tower(&PolyTower::from_json(&serde_json::from_value::<PolyTowerJson>(v)?)?)
            } else {
                check_group_tower(&GroupTower::from_json(&serde_json::from_value::<GroupTowerJson>(v)?)?)
            };
            Output::checked(&r, r.to_text(), r.passed())
        }
        Command::TowerLimit { input } => {
            let v: serde_json::Value = read_json(input)?;
            let gt = if v.get("nodes").is_some_and(|n| n.is_object()) {
                let pt = PolyTower::from_json(&serde_json::from_value::<PolyTowerJson>(v)?)?;
                let r = check_poly_tower(&pt);
                if !r.passed() {
                    return Output::checked(&r, r.to_text(), false);
                }
                let mut acts = BTreeMap::new();
                for (name, h) in &pt.nodes {
                    let z = h.top_configs().into_iter().next().ok_or_else(|| UsageError(format!("node {name} is empty")))?;
                    let (_, act) = extract(h, &z).map_err(|e| UsageError(format!("node {name}: {e}")))?;
                    acts.insert(name.clone(), act);
                }
                induced_group_tower(&pt, &acts)?
            } else {
                GroupTower::from_json(&serde_json::from_value::<GroupTowerJson>(v)?)?
            };
            let r = check_group_tower(&gt);
            if !r.passed() {
                return Output::checked(&r, r.to_text(), false);
            }
            let (limit, projections) = inverse_limit(&gt)?;
            let text = format!("lim ≅ {limit}\n");
            Output::checked(&LimitOutput { limit, tower: gt.to_json(), projections }, text, true)
        }
        Command::Selftest { quick, fault } => {
            let r = run_selftest(&SelftestOptions { quick: *quick, fault: *fault });
            Output::checked(&r, r.to_text(), r.passed())
        }
    }
}
