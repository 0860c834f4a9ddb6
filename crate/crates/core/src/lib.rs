//! An educational proof assistant for classical first-order logic with ZF
//! set theory: sorted expressions, a Unicode parser and printer, a
//! normalising simplifier, a trie-based lemma index, the built-in theories
//! and a natural-deduction kernel driven by proof by pointing.

pub mod demos;
pub mod index;
pub mod kernel;
pub mod simplify;
pub mod syntax;
pub mod task;
pub mod terms;
pub mod theory;

pub use index::{compile_lemma, LemmaIndex, MatchResult, Orientation, Pattern};
pub use kernel::{Action, KernelError, ProofScript, ProofState, Step, StepDescriptor, StepRecord};
pub use simplify::{simplify, SimplifierConfig};
pub use syntax::{parse, parse_formula, print, read_formula, Context, SyntaxError};
pub use task::{TaskDef, TaskError};
pub use terms::{Expr, Path, Signature, Sort, Substitution, Var};
