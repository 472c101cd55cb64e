//! Reader for the plain-text program syntax.
//!
//! ```text
//! program := { rule }
//! rule    := head "." | head ":-" body "." | ":-" body "."
//! head    := atom { "|" atom }
//! body    := lit { "," lit }
//! lit     := atom | "not" atom
//! atom    := [a-z][A-Za-z0-9_]*
//! ```
//!
//! `%` starts a comment running to the end of the line.

use crate::error::{Error, Result};
use crate::program::{Program, ProgramBuilder};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Bar,
    Comma,
    Dot,
    If,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(s) => format!("`{s}`"),
            Token::Bar => "`|`".into(),
            Token::Comma => "`,`".into(),
            Token::Dot => "`.`".into(),
            Token::If => "`:-`".into(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

fn syntax(pos: Pos, message: impl Into<String>) -> Error {
    Error::Syntax {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Token, Pos)>> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                column = 1;
                continue;
            }
            c if c.is_whitespace() => {
                chars.next();
                column += 1;
                continue;
            }
            '%' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
                continue;
            }
            '|' | ',' | '.' => {
                chars.next();
                column += 1;
                tokens.push((
                    match c {
                        '|' => Token::Bar,
                        ',' => Token::Comma,
                        _ => Token::Dot,
                    },
                    pos,
                ));
            }
            ':' => {
                chars.next();
                column += 1;
                if chars.peek() == Some(&'-') {
                    chars.next();
                    column += 1;
                    tokens.push((Token::If, pos));
                } else {
                    return Err(syntax(pos, "expected `:-`"));
                }
            }
            c if c.is_ascii_lowercase() => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(c);
                        chars.next();
                        column += 1;
                    } else {
                        break;
                    }
                }
                tokens.push((Token::Ident(name), pos));
            }
            other => return Err(syntax(pos, format!("unexpected character `{other}`"))),
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(Token, Pos)>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.tokens
            .get(self.at)
            .map(|&(_, p)| p)
            .unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<(Token, Pos)> {
        let tok = self.tokens.get(self.at).cloned();
        self.at += 1;
        tok
    }

    fn unexpected(&self, wanted: &str) -> Error {
        match self.peek() {
            Some(t) => syntax(
                self.pos(),
                format!("expected {wanted}, found {}", t.describe()),
            ),
            None => syntax(self.pos(), format!("expected {wanted}, found end of input")),
        }
    }

    fn atom(&mut self) -> Result<String> {
        match self.peek() {
            Some(Token::Ident(_)) => match self.next() {
                Some((Token::Ident(name), _)) => Ok(name),
                _ => unreachable!(),
            },
            _ => Err(self.unexpected("an atom")),
        }
    }

    /// body := lit { "," lit }, returning (positive, negative) atoms.
    fn body(&mut self) -> Result<(Vec<String>, Vec<String>)> {
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        loop {
            let first = self.atom()?;
            // `not` followed by an atom is a negative literal; bare `not` is an atom.
            if first == "not" && matches!(self.peek(), Some(Token::Ident(_))) {
                neg.push(self.atom()?);
            } else {
                pos.push(first);
            }
            match self.peek() {
                Some(Token::Comma) => {
                    self.next();
                }
                _ => return Ok((pos, neg)),
            }
        }
    }

    fn expect_dot(&mut self) -> Result<()> {
        match self.peek() {
            Some(Token::Dot) => {
                self.next();
                Ok(())
            }
            _ => Err(self.unexpected("`.`")),
        }
    }
}

/// Parses a program; tautological rules are removed and counted.
pub fn parse_program(text: &str) -> Result<Program> {
    let tokens = tokenize(text)?;
    let end = {
        let lines = text.split('\n').collect::<Vec<_>>();
        Pos {
            line: lines.len(),
            column: lines.last().map_or(0, |l| l.chars().count()) + 1,
        }
    };
    let mut parser = Parser { tokens, at: 0, end };
    let mut builder = ProgramBuilder::new();
    while parser.peek().is_some() {
        let start = parser.pos();
        let mut head = Vec::new();
        if parser.peek() != Some(&Token::If) {
            head.push(parser.atom()?);
            while parser.peek() == Some(&Token::Bar) {
                parser.next();
                head.push(parser.atom()?);
            }
        }
        let (pos, neg) = match parser.peek() {
            Some(Token::If) => {
                parser.next();
                if parser.peek() == Some(&Token::Dot) {
                    if head.is_empty() {
                        return Err(Error::EmptyRule {
                            line: start.line,
                            column: start.column,
                        });
                    }
                    return Err(parser.unexpected("a body literal"));
                }
                parser.body()?
            }
            Some(Token::Dot) => (Vec::new(), Vec::new()),
            _ => return Err(parser.unexpected("`.`, `|` or `:-`")),
        };
        parser.expect_dot()?;
        let ids = |b: &mut ProgramBuilder, names: &[String]| -> Result<Vec<_>> {
            names.iter().map(|n| b.atom(n)).collect()
        };
        let h = ids(&mut builder, &head)?;
        let p = ids(&mut builder, &pos)?;
        let n = ids(&mut builder, &neg)?;
        builder.push_rule(h, p, n);
    }
    Ok(builder.build())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_disjunctive_rule() {
        let p = parse_program("a | c :- b.").unwrap();
        assert_eq!(p.len(), 1);
        let r = &p.rules()[0];
        let t = p.table();
        let names =
            |xs: &[crate::Atom]| xs.iter().map(|&a| t.name(a).to_owned()).collect::<Vec<_>>();
        assert_eq!(names(r.head()), ["a", "c"]);
        assert_eq!(names(r.pos_body()), ["b"]);
        assert!(r.neg_body().is_empty());
    }

    #[test]
    fn tautology_removed_on_ingest() {
        let p = parse_program("a :- a, not b.").unwrap();
        assert_eq!(p.len(), 0);
        assert_eq!(p.atoms_used().len(), 0);
        assert_eq!(p.table().len(), 0);
        assert_eq!(p.ingest_report().tautologies_removed, 1);
    }

    #[test]
    fn comments_and_constraints() {
        let p = parse_program("% header\n:- a, not b. % trailing\nb.\n").unwrap();
        assert_eq!(p.to_string(), ":- a, not b.\nb.\n");
    }

    #[test]
    fn duplicate_head_atoms_are_merged() {
        let p = parse_program("a | a :- b.").unwrap();
        assert_eq!(p.rules()[0].head().len(), 1);
        assert_eq!(p.ingest_report().duplicate_atoms, 1);
    }

    #[test]
    fn empty_rule_is_rejected() {
        assert_eq!(
            parse_program("a.\n  :- .").unwrap_err(),
            Error::EmptyRule { line: 2, column: 3 }
        );
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_program("a :- b\nc.") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 1)),
            other => panic!("unexpected {other:?}"),
        }
        match parse_program("a :- B.") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (1, 6)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_program("a :- ."), Err(Error::Syntax { .. })));
        assert!(matches!(parse_program("a"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_program("a : b."), Err(Error::Syntax { .. })));
    }
}
