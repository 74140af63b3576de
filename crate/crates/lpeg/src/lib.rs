//! Linear parsing expression grammars and their automata.
//!
//! The crate centers on one pipeline: parse a PEG, decide whether it is
//! linear (`judge`), interpret it directly (`interp`), or convert it —
//! choice rewriting, predicate copying, a boolean-automaton
//! construction, determinization and minimization (`conversion`, `bfa`,
//! `dfa`). Regular expressions convert in (`pi`) and out (`state_elim`)
//! of the same class.

pub mod bdd;
pub mod bfa;
pub mod boolfn;
pub mod conversion;
pub mod desugar;
pub mod dfa;
pub mod error;
pub mod expr;
pub mod grammar;
pub mod interp;
pub mod judge;
pub mod parse;
pub mod pi;
pub mod regex;
pub mod state_elim;
pub mod wellformed;

pub use bfa::Bfa;
pub use boolfn::{BoolExpr, Var};
pub use conversion::{lpeg_to_bfa, lpeg_to_dfa};
pub use dfa::Dfa;
pub use error::{Error, Result};
pub use expr::Expr;
pub use grammar::Grammar;
pub use interp::{consume, lang_member, MatchMode, MatchResult};
pub use judge::{is_lpeg, LpegJudgement};
pub use parse::parse_grammar;
pub use pi::regex_to_lpeg;
pub use regex::{parse_regex, Regex};
pub use state_elim::{dfa_to_lpeg, dfa_to_regex};
pub use wellformed::check_wellformed;
