pub mod ast;
pub mod cli;
pub mod corpus;
pub mod diff;
pub mod eval;
pub mod features;
pub mod learner;
