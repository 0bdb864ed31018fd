//! Program transformations between language fragments.

mod desugar;
mod goto;
mod loops;
mod normal;
mod recursive;

pub use desugar::desugar;
pub use goto::{from_goto, run_goto, to_goto, GotoProgram, Instr};
pub use loops::for_to_while;
pub use normal::normalize_single_while;
pub use recursive::{compile_recursive, parse_schema, RecSchema, SchemaError};



#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("program contains sugar; desugar it first")]
    NotKernel,
    #[error("program contains `loop`; apply for_to_while first")]
    ContainsLoop,
    #[error("instruction {at} jumps to label {target}, past the end of the program")]
    InvalidLabel { at: usize, target: usize },
}
