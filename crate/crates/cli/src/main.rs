use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use ibig::IBig;
use serde_json::{json, Value};

use relmod::cayley::{build_ball, BallOptions, DEFAULT_VERTEX_BUDGET};
use relmod::complexes::{double_presentation, trefoil_ki, TwoComplex};
use relmod::fox::{fox_derive, fox_vector};
use relmod::groupring::GroupRingElt;
use relmod::presentations::Presentation;
use relmod::scenarios::{self, ScenarioOptions, CATALOG};
use relmod::{Error, Gen, Oracle, Parallelism, Word};

#[derive(Parser)]
#[command(
    name = "relmod",
    version,
    about = "Relation modules, Fox calculus and Cayley balls"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario or the whole catalogue.
    Verify {
        id: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        json: bool,
        /// List scenario ids and exit.
        #[arg(long)]
        list: bool,
        /// Replace BS(2,3) by BS(2,5) everywhere (negative control).
        #[arg(long, hide = true)]
        corrupt_oracle: bool,
    },
    /// Normal form of a word.
    Nf {
        #[arg(long)]
        group: String,
        word: String,
    },
    /// Fox derivatives of a word, projected into the group ring.
    Fox {
        #[arg(long)]
        group: String,
        #[arg(long)]
        word: String,
        /// Differentiate with respect to this generator only.
        #[arg(long)]
        wrt: Option<String>,
        /// Generators to differentiate by (default: those in the word).
        #[arg(long)]
        gens: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Build a Cayley ball.
    Ball {
        #[arg(long)]
        group: String,
        #[arg(long)]
        gens: String,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        stats: bool,
        #[arg(long)]
        dot: bool,
        #[arg(long, default_value_t = DEFAULT_VERTEX_BUDGET)]
        budget: usize,
        #[arg(long)]
        sequential: bool,
    },
    /// Euler characteristic of a presentation file.
    Chi { file: PathBuf },
    /// Double a presentation along identification words.
    Double {
        file: PathBuf,
        /// Words separated by `;`.
        #[arg(long)]
        ids: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The doubled trefoil presentation glued along x^{2i+1}, y^{3i+1}.
    TrefoilKi {
        #[arg(long = "i")]
        i: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Error(Error),
    Io(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn split_words(s: &str) -> Result<Vec<Word>, Error> {
    let parts: Vec<&str> = if s.contains(';') || s.contains(',') {
        s.split([';', ',']).collect()
    } else {
        s.split_whitespace().collect()
    };
    parts
        .into_iter()
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(str::parse)
        .collect()
}

fn coef_json(c: &IBig) -> Value {
    match i64::try_from(c) {
        Ok(v) => json!(v),
        Err(_) => json!(c.to_string()),
    }
}

fn elt_json(e: &GroupRingElt) -> Value {
    Value::Array(
        e.terms()
            .map(|(w, c)| json!([coef_json(c), w.to_string()]))
            .collect(),
    )
}

fn read_presentation(path: &Path) -> Result<Presentation, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    Ok(Presentation::parse(&text)?)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Verify {
            id,
            all,
            json,
            list,
            corrupt_oracle,
        } => {
            if list {
                for id in CATALOG {
                    println!("{id}");
                }
                return Ok(());
            }
            let opts = ScenarioOptions {
                corrupt: corrupt_oracle,
            };
            let reports = match (id, all) {
                (Some(id), false) => vec![scenarios::run_scenario_with(&id, opts)?],
                (None, _) | (Some(_), true) => {
                    scenarios::run_all_with(opts, Parallelism::default())
                }
            };
            if json {
                println!("{}", scenarios::to_json(&reports));
            } else {
                for r in &reports {
                    print!("{}", r.render());
                }
                let passed = reports.iter().filter(|r| r.passed()).count();
                println!("{passed}/{} scenarios passed", reports.len());
            }
            if reports.iter().all(|r| r.passed()) {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Nf { group, word } => {
            let oracle = Oracle::from_descriptor(&group)?;
            let w: Word = word.parse()?;
            println!("{}", oracle.nf_word(&w)?);
            Ok(())
        }
        Command::Fox {
            group,
            word,
            wrt,
            gens,
            json,
        } => {
            let oracle = Arc::new(Oracle::from_descriptor(&group)?);
            let w: Word = word.parse()?;
            let gens: Vec<Gen> = match (&wrt, gens) {
                (Some(g), _) => vec![g.parse()?],
                (None, Some(list)) => list
                    .split([',', ' '])
                    .filter(|s| !s.is_empty())
                    .map(str::parse)
                    .collect::<Result<_, _>>()?,
                (None, None) => w.gens().into_iter().collect(),
            };
            let components: Vec<(Gen, GroupRingElt)> = if wrt.is_some() {
                gens.iter()
                    .map(|g| Ok((g.clone(), fox_derive(&w, g, &oracle)?)))
                    .collect::<Result<_, Error>>()?
            } else if gens.is_empty() {
                Vec::new()
            } else {
                fox_vector(&w, &gens, &oracle)?
                    .components()
                    .iter()
                    .map(|(g, e)| (g.clone(), e.clone()))
                    .collect()
            };
            if json {
                let map: serde_json::Map<String, Value> = components
                    .iter()
                    .map(|(g, e)| (g.to_string(), elt_json(e)))
                    .collect();
                println!("{}", Value::Object(map));
            } else {
                for (g, e) in &components {
                    println!("d/d{g}: {e}");
                }
            }
            Ok(())
        }
        Command::Ball {
            group,
            gens,
            radius,
            stats,
            dot,
            budget,
            sequential,
        } => {
            let oracle = Arc::new(Oracle::from_descriptor(&group)?);
            let gens = split_words(&gens)?;
            let opts = BallOptions {
                radius,
                vertex_budget: budget,
                mode: if sequential {
                    Parallelism::Sequential
                } else {
                    Parallelism::Parallel
                },
            };
            let ball = build_ball(&oracle, &gens, opts)?;
            if dot {
                print!("{}", ball.dot());
            }
            if stats || !dot {
                print!("{}", ball.stats());
            }
            Ok(())
        }
        Command::Chi { file } => {
            let p = read_presentation(&file)?;
            let k = TwoComplex::new(&p);
            println!("vertices: {}", k.vertices);
            println!("edges: {}", k.edges);
            println!("faces: {}", k.faces);
            println!("chi: {}", k.chi);
            Ok(())
        }
        Command::Double { file, ids, out } => {
            let p = read_presentation(&file)?;
            let ids: Vec<Word> = ids
                .split(';')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::parse)
                .collect::<Result<_, _>>()?;
            let d = double_presentation(&p, &ids)?;
            emit(&d.to_string(), out.as_deref())
        }
        Command::TrefoilKi { i, out } => emit(&trefoil_ki(i).to_string(), out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
