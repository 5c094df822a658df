//! Craig-Lyndon interpolation for first-order logic via clausal tableaux.
//!
//! The pipeline: clausify both inputs, find a closed clausal tableau with the
//! built-in connection prover, ground it, label each clause with the side it came
//! from, read the ground interpolant off the tableau, and lift it back to a
//! quantified formula. Resolution proofs can be imported and translated into
//! tableaux that reproduce the classic propositional interpolation systems.

pub mod config;
pub mod extract;
pub mod lift;
pub mod normalize;
pub mod prover;
pub mod ressim;
pub mod syntax;
pub mod tableau;
pub mod verify;

pub use config::{InterpolationConfig, InterpolationReport};
pub use extract::cti_ground;
pub use lift::ctif;
pub use syntax::{Atom, Clause, Formula, Literal, Polarity, Substitution, Symbol, Term};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Syntax(#[from] syntax::SyntaxError),
    #[error(transparent)]
    Normalize(#[from] normalize::NormalizeError),
    #[error(transparent)]
    Tableau(#[from] tableau::TableauError),
    #[error(transparent)]
    NotProved(#[from] prover::NotProved),
    #[error(transparent)]
    Extract(#[from] extract::ExtractError),
    #[error(transparent)]
    Exchange(#[from] tableau::ExchangeError),
    #[error(transparent)]
    Verify(#[from] verify::VerifyError),
    #[error(transparent)]
    DeductionTree(#[from] ressim::TreeError),
    #[error("ground interpolation requires ground inputs")]
    NotGround,
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code: 1 when no proof was found, 2 for everything else.
    /// Verification failures (3) are reported separately.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotProved(_) => 1,
            _ => 2,
        }
    }
}
