//! Front end for the motivic bivariant engine: variety expressions,
//! scenario files and the commands behind the `motbiv` binary.

pub mod commands;
pub mod expr;
pub mod scenario;
