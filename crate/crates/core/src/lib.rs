//! Focused proof search for classical and intuitionistic subexponential
//! logic, together with the encodings between the two and a checker for
//! focal adequacy of those encodings on concrete sequents.

pub mod adequacy;
pub mod calculus;
pub mod classical;
pub mod context;
pub mod corpus;
pub mod encoding;
pub mod error;
pub mod intuitionistic;
pub mod search;
pub mod signature;
pub mod syntax;
pub mod trace;

pub use calculus::{calculus, Calculus, Sequent, SyntheticRule};
pub use context::{Bag, Context, ZonedFormula};
pub use error::{Error, ParseError, Result};
pub use signature::{builtin, Signature, SignatureSpec};
pub use syntax::{Atom, Formula, Node, ParseMode, Polarity, Zone};
