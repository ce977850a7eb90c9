//! Command-line interface: validate models, evaluate formulas, query knowing
//! under the single/von Neumann/either-or schemes, compute common knowledge,
//! and cross-check classical documents against their diagonal embedding.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use epistemic::classical::{meet_partition, subset_of, subspace_of, StateSet};
use epistemic::formula;
use epistemic::knowledge::probability;
use epistemic::model_io;
use epistemic::multi_question::{knows_either_or, knows_von_neumann};
use epistemic::scalar::{format_rational, format_scalar};
use epistemic::{Model, Subspace, Vector};

#[derive(Parser)]
#[command(name = "epistemic", version, about = "Exact knowledge and common knowledge over subspace models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model document and print the validation report.
    Validate { model: PathBuf },
    /// Evaluate a formula to a subspace; with --state also report membership
    /// and exact probability.
    Eval {
        model: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        state: Option<String>,
    },
    /// Does the agent know the event at the given state?
    Knows {
        model: PathBuf,
        #[arg(long)]
        agent: usize,
        #[arg(long)]
        state: String,
        #[arg(long)]
        event: String,
        #[arg(long, value_enum, default_value_t = Scheme::Single)]
        scheme: Scheme,
    },
    /// Common knowledge of the evaluated event.
    Common {
        model: PathBuf,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        trace: bool,
    },
    /// For classical documents: compare the classical operators against the
    /// embedded subspace model.
    CompareClassical { model: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Scheme {
    Single,
    VonNeumann,
    EitherOr,
}

/// exit 1: validation failure; exit 2: query error.
struct Failure {
    code: u8,
    message: String,
}

fn validation(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

fn query(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(f) => {
            println!("{}", f.message.trim_end());
            ExitCode::from(f.code)
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| query(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &PathBuf) -> Result<Model, Failure> {
    model_io::load_model(&read_file(path)?).map_err(|e| validation(e.to_string()))
}

fn print_subspace(s: &Subspace) {
    println!("rank: {}", s.rank());
    for b in s.basis() {
        println!("[{}]", row(b));
    }
}

fn row(v: &Vector) -> String {
    v.entries().iter().map(format_scalar).collect::<Vec<_>>().join(", ")
}

fn lookup_state<'m>(m: &'m Model, name: &str) -> Result<&'m Vector, Failure> {
    m.states.get(name).ok_or_else(|| query(format!("unknown state {name:?}")))
}

fn parse_formula(text: &str) -> Result<formula::Formula, Failure> {
    formula::parse(text).map_err(|e| query(e.to_string()))
}

fn eval(m: &Model, f: &formula::Formula) -> Result<Subspace, Failure> {
    formula::evaluate(m, f).map_err(|e| query(e.to_string()))
}

fn run(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Validate { model } => {
            let doc = model_io::parse_document(&read_file(&model)?)
                .map_err(|e| validation(e.to_string()))?;
            let report = model_io::validate(&doc);
            if report.is_empty() {
                println!("OK");
                Ok(ExitCode::SUCCESS)
            } else {
                print!("{report}");
                Ok(ExitCode::from(1))
            }
        }
        Command::Eval { model, formula: text, state } => {
            let m = load(&model)?;
            let result = eval(&m, &parse_formula(&text)?)?;
            print_subspace(&result);
            if let Some(name) = state {
                let psi = lookup_state(&m, &name)?;
                let member = result.contains(psi).map_err(|e| query(e.to_string()))?;
                println!("contains({name}): {member}");
                let p = probability(psi, &result).map_err(|e| query(e.to_string()))?;
                println!("probability({name}): {}", format_rational(&p));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Knows { model, agent, state, event, scheme } => {
            let m = load(&model)?;
            let a = agent
                .checked_sub(1)
                .and_then(|i| m.agents.get(i))
                .ok_or_else(|| query(format!("unknown agent index {agent} (model has {} agents)", m.agents.len())))?;
            let psi = lookup_state(&m, &state)?;
            let e = m
                .events
                .get(&event)
                .ok_or_else(|| query(format!("unknown event {event:?}")))?;
            let known = match scheme {
                Scheme::Single => a
                    .single_question()
                    .map_err(|e| query(e.to_string()))?
                    .knows(psi, e)
                    .map_err(|e| query(e.to_string()))?,
                Scheme::VonNeumann | Scheme::EitherOr => {
                    if a.questions.len() < 2 {
                        return Err(query(format!(
                            "agent {:?} declares {} question family; multi-question schemes need at least 2",
                            a.id,
                            a.questions.len()
                        )));
                    }
                    if scheme == Scheme::VonNeumann {
                        knows_von_neumann(&a.questions, psi, e).map_err(|e| query(e.to_string()))?
                    } else {
                        knows_either_or(&a.questions, psi, e).map_err(|e| query(e.to_string()))?
                    }
                }
            };
            println!("{known}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Common { model, formula: text, trace } => {
            let m = load(&model)?;
            if let Some(a) = m.agents.iter().find(|a| a.questions.len() != 1) {
                return Err(query(format!(
                    "agent {:?} declares {} question families; common knowledge is defined for single-question agents only",
                    a.id,
                    a.questions.len()
                )));
            }
            let e = eval(&m, &parse_formula(&text)?)?;
            let (fixed, steps) = m.common_knowledge(&e).map_err(|e| query(e.to_string()))?;
            if trace {
                for (n, s) in steps.iter().enumerate() {
                    println!("M_{n}:");
                    print_subspace(s);
                }
                println!("kappa:");
            }
            print_subspace(&fixed);
            Ok(ExitCode::SUCCESS)
        }
        Command::CompareClassical { model } => compare_classical(&model),
    }
}

fn compare_classical(path: &PathBuf) -> Result<ExitCode, Failure> {
    let doc = model_io::parse_document(&read_file(path)?).map_err(|e| validation(e.to_string()))?;
    let Some(classical_doc) = &doc.classical else {
        return Err(query("compare-classical requires a document with a classical block"));
    };
    let cm = model_io::classical_model(classical_doc).map_err(|e| validation(e.to_string()))?;
    let qm = model_io::load_model(&read_file(path)?).map_err(|e| validation(e.to_string()))?;
    let n = cm.omega_size;

    // named events, plus every block and singleton when Ω is small
    let mut events: Vec<(String, StateSet)> =
        cm.events.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    if n <= 5 {
        for (i, p) in cm.partitions.iter().enumerate() {
            for (j, block) in p.blocks().iter().enumerate() {
                events.push((format!("block[{i}][{j}]"), block.clone()));
            }
        }
        for w in 0..n {
            events.push((format!("singleton[{w}]"), BTreeSet::from([w])));
        }
    }

    let mut all_pass = true;
    let mut check = |name: String, ok: bool| {
        println!("{}  {name}", if ok { "PASS" } else { "FAIL" });
        all_pass &= ok;
    };

    for (name, e) in &events {
        let e_sub = subspace_of(e, n).map_err(|err| query(err.to_string()))?;
        for (i, p) in cm.partitions.iter().enumerate() {
            let classical_k = p.knowledge_operator(e).map_err(|err| query(err.to_string()))?;
            let quantum_k = qm.agents[i]
                .single_question()
                .and_then(|f| f.knowledge_operator(&e_sub))
                .map_err(|err| query(err.to_string()))?;
            check(format!("K[{}] {name}", i + 1), subset_of(&quantum_k) == Some(classical_k.clone()));

            let mut knows_agree = true;
            for w in 0..n {
                let cl = p.knows(w, e).map_err(|err| query(err.to_string()))?;
                let qu = qm.agents[i]
                    .single_question()
                    .and_then(|f| f.knows(&Vector::basis(n, w), &e_sub))
                    .map_err(|err| query(err.to_string()))?;
                knows_agree &= cl == qu;
            }
            check(format!("knows[{}] {name}", i + 1), knows_agree);
        }
        let classical_ck = cm.common_knowledge(e).map_err(|err| query(err.to_string()))?;
        let meet = meet_partition(&cm.partitions).map_err(|err| query(err.to_string()))?;
        let via_meet = meet.knowledge_operator(e).map_err(|err| query(err.to_string()))?;
        check(format!("kappa-vs-meet {name}"), classical_ck == via_meet);
        let (quantum_ck, _) = qm.common_knowledge(&e_sub).map_err(|err| query(err.to_string()))?;
        check(format!("kappa {name}"), subset_of(&quantum_ck) == Some(classical_ck));
    }

    if all_pass {
        println!("all comparisons passed");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("comparisons FAILED");
        Ok(ExitCode::from(1))
    }
}
