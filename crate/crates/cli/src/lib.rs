//! The `latclone` command line. [`run`] does all the work and returns what `main` prints,
//! so the whole surface can be tested in-process.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use latclone::eqsol::{equations_of, is_solution_set, solve, EquationSystem, SolutionSetVerdict};
use latclone::finlat::Kind;
use latclone::funclone::{centralizer_slice, clone_slice, RelationRepr};
use latclone::ppqe::{eliminate, eval_formula, parse_formula_with, ParseOptions};
use latclone::sdc::{decide_sdc, SdcError, SdcOptions};
use latclone::{
    Algebra, CloneError, LatticeError, LatticeSpec, Limits, Mode, OpTable, PpError, PpFormula,
    Relation, Structure,
};

#[derive(Debug, Parser)]
#[command(
    name = "latclone",
    version,
    about = "Equations, clones and quantifier elimination over finite lattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Pretty-print the JSON and add a human summary on stderr.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Debug, Args)]
struct Input {
    /// Lattice or semilattice description (JSON).
    lattice: PathBuf,
    /// Signature: `lattice` ({∧, ∨}) or `semilattice` ({∧}). Defaults to the file's kind.
    #[arg(long)]
    mode: Option<Mode>,
}

#[derive(Debug, Args)]
struct FormulaArgs {
    /// Formula text, or the path of a file holding it.
    #[arg(short = 'f', long = "formula")]
    formula: Option<String>,
    #[arg(long = "formula-file")]
    formula_file: Option<PathBuf>,
    /// Comma-separated free variables, fixing the column order of the relation.
    #[arg(long, value_delimiter = ',')]
    vars: Option<Vec<String>>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a lattice file and report its main properties.
    Check { lattice: PathBuf },
    /// Structural data: join-irreducibles, Birkhoff embedding, complements, covers.
    Props { lattice: PathBuf },
    /// The n-ary part of the clone generated by the basic operations.
    Clone {
        #[command(flatten)]
        input: Input,
        #[arg(short = 'n', default_value_t = 2)]
        n: usize,
    },
    /// The k-ary operations commuting with the basic operations.
    Centralizer {
        #[command(flatten)]
        input: Input,
        #[arg(short = 'k', default_value_t = 1)]
        k: usize,
    },
    /// Solution set of a system of equations.
    Solve {
        #[command(flatten)]
        input: Input,
        /// An equation such as `x /\ y = x`; may be repeated.
        #[arg(short = 'e', long = "equation")]
        equations: Vec<String>,
        /// JSON file `{"arity": n, "pairs": [[lhs, rhs], …]}` of operation tables.
        #[arg(long)]
        tables: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        vars: Option<Vec<String>>,
    },
    /// The equations holding on every tuple of a relation.
    Eq {
        #[command(flatten)]
        input: Input,
        #[arg(short = 'T')]
        relation: PathBuf,
    },
    /// Sol(Eq(T)) and whether T is a solution set.
    Galois {
        #[command(flatten)]
        input: Input,
        #[arg(short = 'T')]
        relation: PathBuf,
    },
    /// The relation defined by a primitive positive formula.
    Eval {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        formula: FormulaArgs,
    },
    /// An equivalent quantifier-free formula.
    Qe {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        formula: FormulaArgs,
    },
    /// Decide whether solution sets are exactly the relations closed under the centralizer.
    Sdc {
        #[command(flatten)]
        input: Input,
        /// Random formulas used to spot-check a positive answer.
        #[arg(long, default_value_t = 25)]
        verify: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Refusal(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Refusal(_) => 2,
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<CloneError> for CliError {
    fn from(e: CloneError) -> Self {
        match e {
            CloneError::LimitExceeded { .. } => CliError::Refusal(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<PpError> for CliError {
    fn from(e: PpError) -> Self {
        match e {
            PpError::NotBoolean | PpError::NotDistributive(_) => CliError::Refusal(e.to_string()),
            PpError::Clone(c) => c.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<SdcError> for CliError {
    fn from(e: SdcError) -> Self {
        match e {
            SdcError::Formula(p) => p.into(),
            SdcError::Clone(c) => c.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

/// What a run produced: the exit status and the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line `argv` (program name first) with limits from the environment.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 1,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let result = Limits::from_env()
        .map_err(CliError::Input)
        .and_then(|limits| dispatch(&cli.command, &limits));
    match result {
        Ok((value, summary)) => {
            let mut stdout = if cli.pretty {
                serde_json::to_string_pretty(&value)
            } else {
                serde_json::to_string(&value)
            }
            .expect("JSON values serialize");
            stdout.push('\n');
            let stderr = if cli.pretty {
                summary + "\n"
            } else {
                String::new()
            };
            Outcome {
                code: 0,
                stdout,
                stderr,
            }
        }
        Err(e) => Outcome {
            code: e.code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

type Reply = Result<(Value, String), CliError>;

fn dispatch(command: &Command, limits: &Limits) -> Reply {
    match command {
        Command::Check { lattice } => check(&load(lattice, limits)?),
        Command::Props { lattice } => props(&load(lattice, limits)?),
        Command::Clone { input, n } => {
            let (_, algebra) = open(input, limits)?;
            let slice = clone_slice(&algebra.generators(), *n, limits.clone_slice)?;
            let vars = var_names(*n);
            let ops: Vec<Value> = slice
                .iter()
                .map(|op| {
                    let term = op.provenance().map(|t| t.render(algebra.symbols(), &vars));
                    json!({ "values": op.values(), "term": term })
                })
                .collect();
            let summary = format!("{} operations of arity {n}", ops.len());
            Ok((
                json!({ "arity": n, "count": ops.len(), "operations": ops }),
                summary,
            ))
        }
        Command::Centralizer { input, k } => {
            let (_, algebra) = open(input, limits)?;
            let slice = centralizer_slice(&algebra.generators(), *k, limits.centralizer)?;
            let summary = format!("{} operations of arity {k}", slice.len());
            Ok((
                json!({ "arity": k, "count": slice.len(), "operations": slice }),
                summary,
            ))
        }
        Command::Solve {
            input,
            equations,
            tables,
            vars,
        } => {
            let (_, algebra) = open(input, limits)?;
            let system = match (equations.is_empty(), tables) {
                (false, None) => {
                    let text = equations.join(" & ");
                    let phi = parse_formula_with(&text, &parse_options(vars, algebra.mode()))?;
                    if !phi.is_quantifier_free() {
                        return Err(CliError::Input("equations must not be quantified".into()));
                    }
                    phi.to_equation_system(&algebra)?
                }
                (true, Some(path)) => read_tables(path, algebra.carrier())?,
                (false, Some(_)) => {
                    return Err(CliError::Input(
                        "give either -e or --tables, not both".into(),
                    ))
                }
                (true, None) => return Err(CliError::Input("no equations given".into())),
            };
            let sol = solve(&system);
            let summary = format!("{} solutions of arity {}", sol.len(), sol.arity());
            Ok((json!(sol), summary))
        }
        Command::Eq { input, relation } => {
            let (_, algebra) = open(input, limits)?;
            let t = read_relation(relation, algebra.carrier())?;
            let theory = equations_of(&t, &algebra.generators(), limits.clone_slice)?;
            let vars = var_names(t.arity());
            let render = |op: &OpTable| {
                op.provenance()
                    .map(|term| term.render(algebra.symbols(), &vars))
                    .unwrap_or_else(|| format!("{:?}", op.values()))
            };
            let equations: Vec<String> = theory
                .generating_pairs()
                .map(|(f, g)| format!("{} = {}", render(f), render(g)))
                .collect();
            let summary = format!(
                "{} classes, {} generating equations",
                theory.blocks().len(),
                equations.len()
            );
            Ok((
                json!({
                    "arity": t.arity(),
                    "classes": theory.blocks().len(),
                    "trivial": theory.is_trivial(),
                    "equations": equations,
                }),
                summary,
            ))
        }
        Command::Galois { input, relation } => {
            let (_, algebra) = open(input, limits)?;
            let t = read_relation(relation, algebra.carrier())?;
            match is_solution_set(&t, &algebra.generators(), limits.clone_slice)? {
                SolutionSetVerdict::SolutionSet(_) => Ok((
                    json!({ "closure": t, "isSolutionSet": true }),
                    "T is a solution set".into(),
                )),
                SolutionSetVerdict::NotSolutionSet { gap, closure } => {
                    let summary = format!("not a solution set; {gap:?} is in the closure");
                    Ok((
                        json!({ "closure": closure, "isSolutionSet": false, "gap": gap }),
                        summary,
                    ))
                }
                SolutionSetVerdict::Unknown(e) => Err(e.into()),
            }
        }
        Command::Eval { input, formula } => {
            let (_, algebra) = open(input, limits)?;
            let phi = read_formula(formula, algebra.mode())?;
            let rel = eval_formula(&phi, &algebra)?;
            let summary = format!("{} tuples satisfy {phi}", rel.len());
            Ok((json!({ "vars": phi.free_vars(), "relation": rel }), summary))
        }
        Command::Qe { input, formula } => {
            let (s, algebra) = open(input, limits)?;
            let phi = read_formula(formula, algebra.mode())?;
            let psi = eliminate(&phi, &s, algebra.mode())?;
            let summary = format!("{phi}\n  <=> {psi}");
            Ok((
                json!({ "vars": psi.free_vars(), "formula": psi.to_string() }),
                summary,
            ))
        }
        Command::Sdc {
            input,
            verify,
            seed,
        } => {
            let (s, algebra) = open(input, limits)?;
            let options = SdcOptions {
                verify: *verify,
                seed: *seed,
                limits: *limits,
            };
            let v = decide_sdc(&s, algebra.mode(), &options)?;
            let summary = format!(
                "{} ({:?}){}",
                if v.holds { "holds" } else { "fails" },
                v.route,
                v.gap_tuple
                    .as_ref()
                    .map(|g| format!(", gap {g:?}"))
                    .unwrap_or_default()
            );
            Ok((to_value(&v), summary))
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("output types serialize")
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path, limits: &Limits) -> Result<Structure, CliError> {
    let spec = LatticeSpec::from_json(&read_text(path)?)?;
    Ok(spec.build_with(limits)?)
}

fn open(input: &Input, limits: &Limits) -> Result<(Structure, Algebra), CliError> {
    let s = load(&input.lattice, limits)?;
    let mode = input.mode.unwrap_or(match s.kind() {
        Kind::Lattice => Mode::Lattice,
        Kind::Semilattice => Mode::Semilattice,
    });
    let algebra = match mode {
        Mode::Lattice => Algebra::lattice(&s.to_lattice()?),
        Mode::Semilattice => Algebra::semilattice(&s.to_semilattice()),
    };
    Ok((s, algebra))
}

fn var_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

fn parse_options(vars: &Option<Vec<String>>, mode: Mode) -> ParseOptions {
    ParseOptions {
        free: vars.clone(),
        mode: Some(mode),
    }
}

fn read_formula(args: &FormulaArgs, mode: Mode) -> Result<PpFormula, CliError> {
    let text = match (&args.formula, &args.formula_file) {
        (Some(_), Some(_)) => {
            return Err(CliError::Input(
                "give the formula inline or by --formula-file, not both".into(),
            ))
        }
        // A value naming an existing file is read; anything else is formula text.
        (Some(f), None) if Path::new(f).is_file() => read_text(Path::new(f))?,
        (Some(f), None) => f.clone(),
        (None, Some(path)) => read_text(path)?,
        (None, None) => return Err(CliError::Input("no formula given".into())),
    };
    Ok(parse_formula_with(&text, &parse_options(&args.vars, mode))?)
}

fn read_relation(path: &Path, carrier: usize) -> Result<Relation, CliError> {
    let repr: RelationRepr = serde_json::from_str(&read_text(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(repr.into_relation(carrier)?)
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct TablesFile {
    arity: usize,
    pairs: Vec<(OpTable, OpTable)>,
}

fn read_tables(path: &Path, carrier: usize) -> Result<EquationSystem, CliError> {
    let file: TablesFile = serde_json::from_str(&read_text(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(EquationSystem::new(file.arity, carrier, file.pairs)?)
}

fn check(s: &Structure) -> Reply {
    let m = s.to_semilattice();
    let mut report = json!({
        "valid": true,
        "kind": s.kind(),
        "size": s.size(),
        "elements": s.names(),
        "hasTop": m.top().is_some(),
        "distributiveSemilattice": m.top().is_some() && m.is_distributive(),
    });
    let summary = match s.to_lattice() {
        Ok(l) => {
            let forbidden = l.forbidden_sublattice();
            let violation = l.distributive_law_violation();
            report["lattice"] = json!(true);
            report["distributive"] = json!(violation.is_none());
            report["boolean"] = json!(l.is_boolean().is_some());
            report["forbidden"] = json!(forbidden.as_ref().map(|f| f.kind));
            report["forbiddenElements"] = json!(forbidden.as_ref().map(|f| f.elements));
            report["violation"] = json!(violation);
            format!(
                "lattice of size {}: distributive={}, boolean={}",
                l.size(),
                violation.is_none(),
                l.is_boolean().is_some()
            )
        }
        Err(_) => {
            report["lattice"] = json!(false);
            format!("semilattice of size {} without top", s.size())
        }
    };
    Ok((report, summary))
}

fn props(s: &Structure) -> Reply {
    let m = s.to_semilattice();
    let mut report = json!({
        "bottom": m.bottom(),
        "top": m.top(),
        "maximal": m.maximal_elements(),
    });
    if let Ok(l) = s.to_lattice() {
        let covers: Vec<(usize, usize)> = (0..l.size())
            .flat_map(|x| l.lower_covers(x).into_iter().map(move |y| (y, x)))
            .collect();
        report["covers"] = json!(covers);
        report["joinIrreducibles"] = json!(l.join_irreducibles());
        if let Ok(e) = l.birkhoff_embed() {
            let image: Vec<u64> = (0..l.size()).map(|x| e.image(x)).collect();
            report["embedding"] = json!({ "atoms": e.atoms(), "image": image });
        }
        if let Some(b) = l.is_boolean() {
            report["complements"] = json!(b.complement_map());
        }
    }
    let summary = format!("{} elements, maximal {:?}", s.size(), m.maximal_elements());
    Ok((report, summary))
}
