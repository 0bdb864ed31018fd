//! Hand-written LL(1) parser for the concrete program syntax.
//!
//! ```text
//! program   := statement (";" statement)* [";"]
//! statement := "skip"
//!            | var ":=" var [("+" | "-") number]
//!            | var ":=" number
//!            | "loop" var "do" program "end"
//!            | "while" var ("/=" | "!=") "0" "do" program "end"
//!            | "if" var "=" "0" "then" program ["else" program] "end"
//!            | "(" program ")"
//! var       := "x" digits
//! ```
//!
//! `#` starts a comment that runs to the end of the line. Sequences are
//! right-associated; parentheses group a sub-sequence explicitly.

use std::fmt;

use crate::nat::Nat;
use crate::syntax::ast::{Program, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at {}:{}: expected ", self.line, self.column)?;
        match self.expected.as_slice() {
            [] => write!(f, "nothing")?,
            [one] => write!(f, "{one}")?,
            many => write!(f, "one of {}", many.join(", "))?,
        }
        write!(f, ", found {}", self.found)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Var(Nat),
    Num(Nat),
    Kw(&'static str),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Var(i) => write!(f, "`x{i}`"),
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::Kw(k) | Tok::Sym(k) => write!(f, "`{k}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

const KEYWORDS: [&str; 9] = ["loop", "while", "do", "end", "if", "then", "else", "skip", "x"];

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, column, found: String, expected: &[&str]| SyntaxError {
        line,
        column,
        expected: expected.iter().map(|s| s.to_string()).collect(),
        found,
    };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Spanned { tok: Tok::Num(s.parse().expect("digits")), line: l0, column: c0 });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            let tok = if let Some(digits) = word.strip_prefix('x').filter(|d| {
                !d.is_empty() && d.chars().all(|ch| ch.is_ascii_digit())
            }) {
                Tok::Var(digits.parse().expect("digits"))
            } else if let Some(kw) = KEYWORDS.iter().find(|k| **k == word && **k != "x") {
                Tok::Kw(kw)
            } else {
                return Err(err(l0, c0, format!("`{word}`"), &["statement"]));
            };
            out.push(Spanned { tok, line: l0, column: c0 });
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let sym = match two.as_str() {
            ":=" => Some(":="),
            "/=" | "!=" => Some("/="),
            _ => None,
        };
        if let Some(sym) = sym {
            i += 2;
            col += 2;
            out.push(Spanned { tok: Tok::Sym(sym), line: l0, column: c0 });
            continue;
        }
        let sym = match c {
            ';' => ";",
            '+' => "+",
            '-' => "-",
            '=' => "=",
            '(' => "(",
            ')' => ")",
            other => return Err(err(l0, c0, format!("`{other}`"), &["statement"])),
        };
        i += 1;
        col += 1;
        out.push(Spanned { tok: Tok::Sym(sym), line: l0, column: c0 });
    }
    out.push(Spanned { tok: Tok::Eof, line, column: col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

const STATEMENT_START: [&str; 6] = ["variable", "`skip`", "`loop`", "`while`", "`if`", "`(`"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> SyntaxError {
        let here = &self.toks[self.pos];
        SyntaxError {
            line: here.line,
            column: here.column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: here.tok.to_string(),
        }
    }

    fn expect_kw(&mut self, kw: &'static str) -> Result<(), SyntaxError> {
        if *self.peek() == Tok::Kw(kw) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[&format!("`{kw}`")]))
        }
    }

    fn expect_sym(&mut self, sym: &'static str) -> Result<(), SyntaxError> {
        if *self.peek() == Tok::Sym(sym) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[&format!("`{sym}`")]))
        }
    }

    fn var(&mut self) -> Result<Var, SyntaxError> {
        match self.peek().clone() {
            Tok::Var(i) => {
                self.bump();
                Ok(Var::from_nat(i))
            }
            _ => Err(self.error(&["variable"])),
        }
    }

    fn number(&mut self) -> Result<Nat, SyntaxError> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(n)
            }
            _ => Err(self.error(&["number"])),
        }
    }

    fn starts_statement(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Var(_) | Tok::Kw("skip" | "loop" | "while" | "if") | Tok::Sym("(")
        )
    }

    fn program(&mut self) -> Result<Program, SyntaxError> {
        let mut stmts = vec![self.statement()?];
        while *self.peek() == Tok::Sym(";") {
            self.bump();
            if !self.starts_statement() {
                // trailing separator
                break;
            }
            stmts.push(self.statement()?);
        }
        Ok(Program::seq_all(stmts))
    }

    fn statement(&mut self) -> Result<Program, SyntaxError> {
        match self.peek().clone() {
            Tok::Kw("skip") => {
                self.bump();
                Ok(Program::Skip)
            }
            Tok::Kw("loop") => {
                self.bump();
                let guard = self.var()?;
                self.expect_kw("do")?;
                let body = self.program()?;
                self.expect_kw("end")?;
                Ok(Program::looping(guard, body))
            }
            Tok::Kw("while") => {
                self.bump();
                let guard = self.var()?;
                self.expect_sym("/=")?;
                self.zero_literal()?;
                self.expect_kw("do")?;
                let body = self.program()?;
                self.expect_kw("end")?;
                Ok(Program::while_nonzero(guard, body))
            }
            Tok::Kw("if") => {
                self.bump();
                let guard = self.var()?;
                self.expect_sym("=")?;
                self.zero_literal()?;
                self.expect_kw("then")?;
                let then_branch = self.program()?;
                let else_branch = if *self.peek() == Tok::Kw("else") {
                    self.bump();
                    self.program()?
                } else {
                    Program::Skip
                };
                self.expect_kw("end")?;
                Ok(Program::if_zero(guard, then_branch, else_branch))
            }
            Tok::Sym("(") => {
                self.bump();
                let inner = self.program()?;
                self.expect_sym(")")?;
                Ok(inner)
            }
            Tok::Var(_) => {
                let target = self.var()?;
                self.expect_sym(":=")?;
                match self.peek().clone() {
                    Tok::Num(c) => {
                        self.bump();
                        Ok(Program::ConstAssign { target, c })
                    }
                    Tok::Var(_) => {
                        let source = self.var()?;
                        match self.peek() {
                            Tok::Sym("+") => {
                                self.bump();
                                let c = self.number()?;
                                Ok(Program::AddAssign { target, source, c })
                            }
                            Tok::Sym("-") => {
                                self.bump();
                                let c = self.number()?;
                                Ok(Program::SubAssign { target, source, c })
                            }
                            _ => Ok(Program::CopyAssign { target, source }),
                        }
                    }
                    _ => Err(self.error(&["variable", "number"])),
                }
            }
            _ => Err(self.error(&STATEMENT_START)),
        }
    }

    fn zero_literal(&mut self) -> Result<(), SyntaxError> {
        match self.peek() {
            Tok::Num(n) if n.is_zero() => {
                self.bump();
                Ok(())
            }
            _ => Err(self.error(&["`0`"])),
        }
    }
}

/// Parses program text.
pub fn parse(text: &str) -> Result<Program, SyntaxError> {
    let mut parser = Parser { toks: lex(text)?, pos: 0 };
    let program = parser.program()?;
    if *parser.peek() != Tok::Eof {
        let mut expected = vec!["`;`"];
        if parser.starts_statement() {
            expected.clear();
        }
        expected.push("end of input");
        return Err(parser.error(&expected));
    }
    Ok(program)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::ast::x;

    #[test]
    fn single_statements() {
        assert_eq!(parse("x0 := x1 + 0").unwrap(), Program::add(x(0), x(1), 0u64));
        assert_eq!(parse("skip").unwrap(), Program::Skip);
        assert_eq!(parse("x4 := 9").unwrap(), Program::constant(x(4), 9u64));
        assert_eq!(parse("x4 := x2").unwrap(), Program::copy(x(4), x(2)));
        assert_eq!(parse("x1 := x1 - 3").unwrap(), Program::sub(x(1), x(1), 3u64));
    }

    #[test]
    fn loop_statement() {
        assert_eq!(
            parse("loop x1 do x0 := x0 + 1 end").unwrap(),
            Program::looping(x(1), Program::add(x(0), x(0), 1u64))
        );
    }

    #[test]
    fn sequences_associate_right() {
        let p = parse("skip; skip; skip").unwrap();
        assert_eq!(
            p,
            Program::seq(Program::Skip, Program::seq(Program::Skip, Program::Skip))
        );
        let grouped = parse("(skip; skip); skip").unwrap();
        assert_eq!(
            grouped,
            Program::seq(Program::seq(Program::Skip, Program::Skip), Program::Skip)
        );
    }

    #[test]
    fn while_and_if() {
        let p = parse("while x1 /= 0 do x1 := x1 - 1 end").unwrap();
        assert_eq!(p, Program::while_nonzero(x(1), Program::sub(x(1), x(1), 1u64)));
        let q = parse("if x2 = 0 then x0 := 1 else skip end").unwrap();
        assert_eq!(
            q,
            Program::if_zero(x(2), Program::constant(x(0), 1u64), Program::Skip)
        );
        assert_eq!(parse("if x2 = 0 then skip end").unwrap(), Program::if_zero(x(2), Program::Skip, Program::Skip));
    }

    #[test]
    fn comments_and_newlines() {
        let p = parse("# add\nx0 := x1 + 0; # copy\n\n x0 := x0 + 1;\n").unwrap();
        assert_eq!(
            p,
            Program::seq(Program::add(x(0), x(1), 0u64), Program::add(x(0), x(0), 1u64))
        );
    }

    #[test]
    fn errors_carry_position_and_expectations() {
        let e = parse("x0 := x1 +").unwrap_err();
        assert_eq!((e.line, e.column), (1, 11));
        assert_eq!(e.expected, vec!["number"]);
        let e = parse("loop x1 do\n  x0 := x0 + 1\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.expected.contains(&"`end`".to_string()));
        let e = parse("while x1 /= 1 do skip end").unwrap_err();
        assert_eq!(e.expected, vec!["`0`"]);
        let e = parse("").unwrap_err();
        assert!(e.expected.contains(&"`skip`".to_string()));
        let e = parse("y := 3").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        let e = parse("skip skip").unwrap_err();
        assert_eq!(e.column, 6);
    }
}
