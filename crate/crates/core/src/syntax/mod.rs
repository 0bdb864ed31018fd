//! Abstract syntax, concrete grammar and structural queries for LOOP and
//! WHILE programs.

mod ast;
mod parser;
mod pretty;

pub use ast::{count_loop, count_while, is_for, is_kernel, is_while_free, max_var, x, Program, Var};
pub use parser::{parse, SyntaxError};
pub use pretty::{head, pretty};
