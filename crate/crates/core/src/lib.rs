//! Free-group words, word-problem oracles, Fox calculus and Cayley-graph
//! tools for computing with relation modules of one-relator groups.

pub mod cayley;
pub mod complexes;
pub mod error;
pub mod fox;
pub mod groupring;
pub mod oracles;
pub mod par;
pub mod presentations;
pub mod scenarios;
pub mod words;

pub use error::{Error, Result};
pub use oracles::{Certificate, Family, NormalForm, Oracle, OracleKind};
pub use par::Parallelism;
pub use words::{Gen, Syllable, Word};
