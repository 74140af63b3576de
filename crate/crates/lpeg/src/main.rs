//! Command-line front end.
//!
//! Exit codes: 0 for a positive verdict (match, equal, is an LPEG),
//! 1 for a negative verdict, 2 for usage or parse errors, 3 when a
//! resource budget is exceeded. Reports go to stdout, diagnostics to
//! stderr.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lpeg::conversion::{lpeg_to_bfa, lpeg_to_dfa};
use lpeg::desugar::desugar_keep_stars;
use lpeg::interp::{consume, lang_member, strings_over, MatchMode, MatchResult};
use lpeg::judge::is_lpeg;
use lpeg::{dfa_to_lpeg, parse_grammar, parse_regex, regex_to_lpeg, Dfa, Error, Grammar};

const EXIT_NO: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "lpeg", version, about = "Linear PEG toolkit: judge, interpret, convert")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Prefix,
}

impl From<Mode> for MatchMode {
    fn from(m: Mode) -> MatchMode {
        match m {
            Mode::Exact => MatchMode::Exact,
            Mode::Prefix => MatchMode::Prefix,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Via {
    Dfa,
    Interp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DotKind {
    Grammar,
    Dfa,
}

#[derive(Subcommand)]
enum Cmd {
    /// Judge whether a grammar file is a linear PEG.
    Check { file: PathBuf },

    /// Convert a grammar to a DFA and write it as JSON.
    Compile {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        /// Output path for the DFA JSON.
        #[arg(short, long)]
        output: PathBuf,
        /// Also write the intermediate BFA as DOT.
        #[arg(long)]
        emit_bfa: Option<PathBuf>,
        /// Keep the raw determinization output instead of minimizing.
        #[arg(long)]
        no_minimize: bool,
        #[arg(long, default_value_t = 1_000_000)]
        state_budget: usize,
    },

    /// Test membership of a string, against a compiled DFA or a grammar.
    Match {
        #[arg(long, conflicts_with = "grammar")]
        dfa: Option<PathBuf>,
        #[arg(long)]
        grammar: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        #[arg(long, default_value_t = 1_000_000)]
        state_budget: usize,
        input: String,
    },

    /// Run the interpreter on a string and report what was consumed.
    Run { file: PathBuf, input: String },

    /// Convert a regular expression to an equivalent LPEG.
    Regex2lpeg {
        pattern: String,
        /// Terminals of the target grammar (default: the pattern's own).
        #[arg(long)]
        alphabet: Option<String>,
    },

    /// Convert a DFA (JSON) to an equivalent LPEG.
    Dfa2lpeg { file: PathBuf },

    /// Compare the languages of two grammar files.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        /// Bound for the interpreter-based comparison.
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long, value_enum, default_value = "dfa")]
        via: Via,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        #[arg(long, default_value_t = 1_000_000)]
        state_budget: usize,
    },

    /// Print an automaton as Graphviz DOT.
    ExportDot {
        kind: DotKind,
        file: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        #[arg(long, default_value_t = 1_000_000)]
        state_budget: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version print and succeed
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(EXIT_USAGE);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::StateBudgetExceeded(_) => EXIT_BUDGET,
        Error::NotLpeg(_) | Error::NotWellFormed(_) | Error::RecursionGuard(_) => EXIT_NO,
        _ => EXIT_USAGE,
    }
}

fn load_grammar(path: &Path) -> Result<Grammar, Error> {
    parse_grammar(&fs::read_to_string(path)?)
}

fn load_dfa(path: &Path) -> Result<Dfa, Error> {
    Dfa::from_json(&fs::read_to_string(path)?)
}

fn run(cmd: Cmd) -> Result<u8, Error> {
    match cmd {
        Cmd::Check { file } => {
            let g = load_grammar(&file)?;
            let judgement = is_lpeg(&desugar_keep_stars(&g));
            if judgement.is_lpeg {
                println!("LPEG: yes");
                Ok(0)
            } else {
                println!("LPEG: no");
                for v in &judgement.violations {
                    println!("violation: {v}");
                }
                Ok(EXIT_NO)
            }
        }

        Cmd::Compile {
            file,
            mode,
            output,
            emit_bfa,
            no_minimize,
            state_budget,
        } => {
            let g = load_grammar(&file)?;
            let bfa = lpeg_to_bfa(&g, mode.into())?;
            if let Some(path) = emit_bfa {
                fs::write(path, bfa.to_dot())?;
            }
            let mut dfa = bfa.to_dfa(state_budget)?;
            if !no_minimize {
                dfa = dfa.minimize();
            }
            fs::write(&output, dfa.to_json())?;
            println!("{} states -> {}", dfa.state_count(), output.display());
            Ok(0)
        }

        Cmd::Match {
            dfa,
            grammar,
            mode,
            state_budget,
            input,
        } => {
            let d = match (dfa, grammar) {
                (Some(path), None) => load_dfa(&path)?,
                (None, Some(path)) => {
                    lpeg_to_dfa(&load_grammar(&path)?, mode.into(), state_budget)?
                }
                _ => {
                    eprintln!("error: exactly one of --dfa and --grammar is required");
                    return Ok(EXIT_USAGE);
                }
            };
            if d.matches(&input) {
                println!("match");
                Ok(0)
            } else {
                println!("no match");
                Ok(EXIT_NO)
            }
        }

        Cmd::Run { file, input } => {
            let g = load_grammar(&file)?;
            g.validate()?;
            match consume(&g, &g.start.clone(), &input)? {
                MatchResult::Consumed(n) => {
                    println!("Consumed({n})");
                    Ok(0)
                }
                MatchResult::Fail => {
                    println!("Fail");
                    Ok(EXIT_NO)
                }
            }
        }

        Cmd::Regex2lpeg { pattern, alphabet } => {
            let r = parse_regex(&pattern)?;
            let alphabet: BTreeSet<char> = match alphabet {
                Some(s) => s.chars().collect(),
                None => {
                    let mut set = BTreeSet::new();
                    r.literal_terminals(&mut set);
                    set
                }
            };
            print!("{}", regex_to_lpeg(&r, &alphabet));
            Ok(0)
        }

        Cmd::Dfa2lpeg { file } => {
            print!("{}", dfa_to_lpeg(&load_dfa(&file)?));
            Ok(0)
        }

        Cmd::Equiv {
            a,
            b,
            max_len,
            via,
            mode,
            state_budget,
        } => {
            let ga = load_grammar(&a)?;
            let gb = load_grammar(&b)?;
            let counterexample = match via {
                Via::Dfa => {
                    let da = lpeg_to_dfa(&ga, mode.into(), state_budget)?;
                    let db = lpeg_to_dfa(&gb, mode.into(), state_budget)?;
                    da.equivalent(&db)?
                }
                Via::Interp => {
                    if ga.alphabet != gb.alphabet {
                        return Err(Error::AlphabetMismatch);
                    }
                    ga.validate()?;
                    gb.validate()?;
                    let mut found = None;
                    for w in strings_over(&ga.alphabet, max_len) {
                        if lang_member(&ga, &w, mode.into())?
                            != lang_member(&gb, &w, mode.into())?
                        {
                            found = Some(w);
                            break;
                        }
                    }
                    found
                }
            };
            match counterexample {
                None => {
                    match via {
                        Via::Dfa => println!("equal"),
                        Via::Interp => println!("equal up to length {max_len}"),
                    }
                    Ok(0)
                }
                Some(w) => {
                    println!("counterexample: {w:?}");
                    Ok(EXIT_NO)
                }
            }
        }

        Cmd::ExportDot {
            kind,
            file,
            mode,
            state_budget,
        } => {
            let dot = match kind {
                DotKind::Dfa => load_dfa(&file)?.to_dot(),
                DotKind::Grammar => {
                    lpeg_to_dfa(&load_grammar(&file)?, mode.into(), state_budget)?.to_dot()
                }
            };
            print!("{dot}");
            Ok(0)
        }
    }
}
