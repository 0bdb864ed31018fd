use std::fmt::Write;

use crate::syntax::ast::Program;

const INDENT: &str = "  ";

/// Canonical text of `p`. Statements of a sequence are separated by `;` and
/// a newline; a sequence nested in the left operand of another is wrapped in
/// parentheses so that the tree shape survives a round trip through
/// [`parse`](crate::syntax::parse).
pub fn pretty(p: &Program) -> String {
    let mut out = String::new();
    write_program(&mut out, p, 0);
    out
}

impl std::fmt::Display for Program {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&pretty(self))
    }
}

/// One-line rendering of a statement head, used in traces.
pub fn head(p: &Program) -> String {
    match p {
        Program::Loop { guard, .. } => format!("loop {guard}"),
        Program::While { guard, .. } => format!("while {guard} /= 0"),
        Program::If { guard, .. } => format!("if {guard} = 0"),
        Program::Seq(..) => "seq".to_string(),
        simple => {
            let mut s = String::new();
            write_program(&mut s, simple, 0);
            s
        }
    }
}

fn pad(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str(INDENT);
    }
}

fn write_program(out: &mut String, p: &Program, depth: usize) {
    // Walk the right spine of the sequence so long statement lists do not
    // recurse once per statement.
    let mut cur = p;
    let mut first = true;
    loop {
        let (stmt, rest) = match cur {
            Program::Seq(a, b) => (a.as_ref(), Some(b.as_ref())),
            other => (other, None),
        };
        if !first {
            out.push_str(";\n");
        }
        first = false;
        if let Program::Seq(..) = stmt {
            pad(out, depth);
            out.push_str("(\n");
            write_program(out, stmt, depth + 1);
            out.push('\n');
            pad(out, depth);
            out.push(')');
        } else {
            write_statement(out, stmt, depth);
        }
        match rest {
            Some(r) => cur = r,
            None => break,
        }
    }
}

fn write_statement(out: &mut String, p: &Program, depth: usize) {
    pad(out, depth);
    match p {
        Program::AddAssign { target, source, c } => {
            let _ = write!(out, "{target} := {source} + {c}");
        }
        Program::SubAssign { target, source, c } => {
            let _ = write!(out, "{target} := {source} - {c}");
        }
        Program::ConstAssign { target, c } => {
            let _ = write!(out, "{target} := {c}");
        }
        Program::CopyAssign { target, source } => {
            let _ = write!(out, "{target} := {source}");
        }
        Program::Skip => out.push_str("skip"),
        Program::Loop { guard, body } => {
            let _ = writeln!(out, "loop {guard} do");
            write_program(out, body, depth + 1);
            out.push('\n');
            pad(out, depth);
            out.push_str("end");
        }
        Program::While { guard, body } => {
            let _ = writeln!(out, "while {guard} /= 0 do");
            write_program(out, body, depth + 1);
            out.push('\n');
            pad(out, depth);
            out.push_str("end");
        }
        Program::If { guard, then_branch, else_branch } => {
            let _ = writeln!(out, "if {guard} = 0 then");
            write_program(out, then_branch, depth + 1);
            out.push('\n');
            pad(out, depth);
            out.push_str("else\n");
            write_program(out, else_branch, depth + 1);
            out.push('\n');
            pad(out, depth);
            out.push_str("end");
        }
        Program::Seq(..) => unreachable!("sequences are handled by write_program"),
    }
}
