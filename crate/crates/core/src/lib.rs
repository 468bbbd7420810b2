//! Finite-model workbench for dyadic deontic logic and its preferential
//! reading.
//!
//! The crate bundles:
//!
//! * [`formula`]: a shared AST, parser and renderer for the deontic language
//!   and the bimodal minimality language;
//! * [`cjmodel`]: finite models with actual/potential accessibility and an
//!   explicit "morally good sets" map, their frame conditions and axioms;
//! * [`choice`]: abstract choice functions and the algebraic laws relating
//!   them;
//! * [`consequence`]: nonmonotonic consequence over a finite propositional
//!   language and its correspondence with the algebraic laws;
//! * [`prefstruct`] and [`represent`]: preferential structures with copies,
//!   rankedness, and the constructive ranked representation;
//! * [`modal`]: Kripke models with separate accessibility and minimality
//!   relations, and the modal encoding of conditionals.
//!
//! Exhaustive sweeps over small universes are in [`sweeps`] and run through
//! [`par`], which uses rayon when the `parallel` feature is enabled.

pub mod choice;
pub mod cjmodel;
pub mod consequence;
pub mod formula;
pub mod gen;
pub mod json;
pub mod modal;
pub mod par;
pub mod prefstruct;
pub mod represent;
pub mod set;
pub mod sweeps;

pub use formula::{parse, Formula};
pub use set::{Family, Set};
