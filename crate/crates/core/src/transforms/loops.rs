use crate::syntax::{is_kernel, Program};
use crate::transforms::desugar::Fresh;
use crate::transforms::TransformError;

/// Replaces every `loop` by a `while` over a fresh countdown variable.
///
/// `loop g do P end` becomes `c := g + 0; while c /= 0 do c := c - 1; P end`
/// where `c` is fresh (allocated in pre-order above `max_var(p)`).
pub fn for_to_while(p: &Program) -> Result<Program, TransformError> {
    if !is_kernel(p) {
        return Err(TransformError::NotKernel);
    }
    let mut fresh = Fresh::above(p);
    Ok(rewrite(p, &mut fresh))
}

fn rewrite(p: &Program, fresh: &mut Fresh) -> Program {
    match p {
        Program::Seq(..) => {
            let (lefts, last) = p.spine();
            let lefts: Vec<Program> = lefts.into_iter().map(|s| rewrite(s, fresh)).collect();
            let last = rewrite(last, fresh);
            Program::from_spine(lefts, last)
        }
        Program::Loop { guard, body } => {
            let counter = fresh.take();
            let body = rewrite(body, fresh);
            Program::seq(
                Program::add(counter.clone(), guard.clone(), 0u64),
                Program::while_nonzero(
                    counter.clone(),
                    Program::seq(Program::sub(counter.clone(), counter, 1u64), body),
                ),
            )
        }
        Program::While { guard, body } => Program::while_nonzero(guard.clone(), rewrite(body, fresh)),
        other => other.clone(),
    }
}
