use std::fmt;

use thiserror::Error;

use super::Formula;

/// Parse failure with the byte offset where it was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: found {found}, expected one of {}", .expected.join(", "))]
    Syntax {
        offset: usize,
        found: String,
        expected: Vec<&'static str>,
    },
    #[error("unknown operator `{operator}` at byte {offset}")]
    UnknownOperator { offset: usize, operator: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownOperator { offset, .. } => {
                *offset
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prefix {
    Not,
    BoxA,
    DiaA,
    BoxP,
    DiaP,
    Box,
    Dia,
    BoxMin,
    DiaMin,
    BoxComp,
    DiaComp,
    DiaConv,
}

impl Prefix {
    fn apply(self, f: Formula) -> Formula {
        match self {
            Prefix::Not => Formula::not(f),
            Prefix::BoxA => Formula::box_a(f),
            Prefix::DiaA => Formula::dia_a(f),
            Prefix::BoxP => Formula::box_p(f),
            Prefix::DiaP => Formula::dia_p(f),
            Prefix::Box => Formula::boxed(f),
            Prefix::Dia => Formula::dia(f),
            Prefix::BoxMin => Formula::box_min(f),
            Prefix::DiaMin => Formula::dia_min(f),
            Prefix::BoxComp => Formula::box_comp(f),
            Prefix::DiaComp => Formula::dia_comp(f),
            Prefix::DiaConv => Formula::dia_conv(f),
        }
    }
}

/// Lexical tokens of the concrete syntax.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Token {
    Prefix(Prefix),
    And,
    Or,
    Imp,
    Iff,
    LParen,
    RParen,
    Slash,
    True,
    False,
    O,
    Oa,
    Op,
    Ident(String),
    Eof,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Ident(name) => write!(f, "identifier `{name}`"),
            Token::Eof => f.write_str("end of input"),
            other => write!(f, "`{}`", token_text(other)),
        }
    }
}

fn token_text(tok: &Token) -> &'static str {
    match tok {
        Token::Prefix(p) => match p {
            Prefix::Not => "~",
            Prefix::BoxA => "[a]",
            Prefix::DiaA => "<a>",
            Prefix::BoxP => "[p]",
            Prefix::DiaP => "<p>",
            Prefix::Box => "[]",
            Prefix::Dia => "<>",
            Prefix::BoxMin => "[m]",
            Prefix::DiaMin => "<m>",
            Prefix::BoxComp => "[c]",
            Prefix::DiaComp => "<c>",
            Prefix::DiaConv => "<inv>",
        },
        Token::And => "&",
        Token::Or => "|",
        Token::Imp => "->",
        Token::Iff => "<->",
        Token::LParen => "(",
        Token::RParen => ")",
        Token::Slash => "/",
        Token::True => "true",
        Token::False => "false",
        Token::O => "O",
        Token::Oa => "Oa",
        Token::Op => "Op",
        Token::Ident(_) => "identifier",
        Token::Eof => "end of input",
    }
}

const UNARY_START: &[&str] = &[
    "~",
    "[a]",
    "<a>",
    "[p]",
    "<p>",
    "[]",
    "<>",
    "[m]",
    "<m>",
    "[c]",
    "<c>",
    "<inv>",
    "true",
    "false",
    "identifier",
    "O",
    "Oa",
    "Op",
    "(",
];

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokenize(src: &'a str) -> Result<Vec<(usize, Token)>, ParseError> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let (at, tok) = lx.next_token()?;
            let done = tok == Token::Eof;
            out.push((at, tok));
            if done {
                return Ok(out);
            }
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn next_token(&mut self) -> Result<(usize, Token), ParseError> {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
        let start = self.pos;
        let Some(c) = trimmed.chars().next() else {
            return Ok((start, Token::Eof));
        };
        let simple = |len: usize, tok: Token| (len, tok);
        let (len, tok) = match c {
            '~' => simple(1, Token::Prefix(Prefix::Not)),
            '&' => simple(1, Token::And),
            '|' => simple(1, Token::Or),
            '(' => simple(1, Token::LParen),
            ')' => simple(1, Token::RParen),
            '/' => simple(1, Token::Slash),
            '-' if trimmed.starts_with("->") => simple(2, Token::Imp),
            '<' if trimmed.starts_with("<->") => simple(3, Token::Iff),
            '<' if trimmed.starts_with("<>") => simple(2, Token::Prefix(Prefix::Dia)),
            '[' if trimmed.starts_with("[]") => simple(2, Token::Prefix(Prefix::Box)),
            '<' | '[' => self.bracketed(c, trimmed)?,
            c if c.is_ascii_alphabetic() || c == '_' => {
                let len = trimmed
                    .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                    .unwrap_or(trimmed.len());
                let word = &trimmed[..len];
                let tok = match word {
                    "true" => Token::True,
                    "false" => Token::False,
                    "O" => Token::O,
                    "Oa" => Token::Oa,
                    "Op" => Token::Op,
                    _ => Token::Ident(word.to_string()),
                };
                (len, tok)
            }
            other => {
                return Err(ParseError::Syntax {
                    offset: start,
                    found: format!("character `{other}`"),
                    expected: UNARY_START.to_vec(),
                })
            }
        };
        self.pos += len;
        Ok((start, tok))
    }

    /// `[x]` / `<x>` modal prefixes.
    fn bracketed(&self, open: char, text: &str) -> Result<(usize, Token), ParseError> {
        let close = if open == '<' { '>' } else { ']' };
        let body_len = text[1..]
            .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
            .unwrap_or(text.len() - 1);
        let body = &text[1..1 + body_len];
        let closed = text[1 + body_len..].starts_with(close);
        if !closed || body.is_empty() {
            return Err(ParseError::Syntax {
                offset: self.pos,
                found: format!("`{}`", &text[..(1 + body_len).min(text.len())]),
                expected: UNARY_START.to_vec(),
            });
        }
        let prefix = match (open, body) {
            ('[', "a") => Prefix::BoxA,
            ('<', "a") => Prefix::DiaA,
            ('[', "p") => Prefix::BoxP,
            ('<', "p") => Prefix::DiaP,
            ('[', "m") => Prefix::BoxMin,
            ('<', "m") => Prefix::DiaMin,
            ('[', "c") => Prefix::BoxComp,
            ('<', "c") => Prefix::DiaComp,
            ('<', "inv") => Prefix::DiaConv,
            _ => {
                return Err(ParseError::UnknownOperator {
                    offset: self.pos,
                    operator: text[..body_len + 2].to_string(),
                })
            }
        };
        Ok((body_len + 2, Token::Prefix(prefix)))
    }
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.at].1
    }

    fn offset(&self) -> usize {
        self.tokens[self.at].0
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.at].1.clone();
        if tok != Token::Eof {
            self.at += 1;
        }
        tok
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            found: self.peek().to_string(),
            expected: expected.to_vec(),
        }
    }

    fn expect(&mut self, tok: Token) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[token_text(&tok)]))
        }
    }

    fn form(&mut self) -> Result<Formula, ParseError> {
        self.iff()
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let first = self.imp()?;
        let mut rest = Vec::new();
        while *self.peek() == Token::Iff {
            self.bump();
            rest.push(self.imp()?);
        }
        Ok(fold_right(first, rest, Formula::iff))
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Token::Imp {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let first = self.and()?;
        let mut rest = Vec::new();
        while *self.peek() == Token::Or {
            self.bump();
            rest.push(self.and()?);
        }
        Ok(fold_right(first, rest, Formula::or))
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let first = self.unary()?;
        let mut rest = Vec::new();
        while *self.peek() == Token::And {
            self.bump();
            rest.push(self.unary()?);
        }
        Ok(fold_right(first, rest, Formula::and))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if let Token::Prefix(p) = *self.peek() {
            self.bump();
            let inner = self.unary()?;
            return Ok(p.apply(inner));
        }
        self.prim()
    }

    fn prim(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Token::True => {
                self.bump();
                Ok(Formula::Top)
            }
            Token::False => {
                self.bump();
                Ok(Formula::Bot)
            }
            Token::Ident(name) => {
                self.bump();
                Ok(Formula::Atom(name))
            }
            Token::O => {
                self.bump();
                self.expect(Token::LParen)?;
                let consequent = self.form()?;
                self.expect(Token::Slash)?;
                let antecedent = self.form()?;
                self.expect(Token::RParen)?;
                Ok(Formula::ocond(consequent, antecedent))
            }
            Token::Oa | Token::Op => {
                let actual = self.bump() == Token::Oa;
                self.expect(Token::LParen)?;
                let inner = self.form()?;
                self.expect(Token::RParen)?;
                Ok(if actual {
                    Formula::oa(inner)
                } else {
                    Formula::op(inner)
                })
            }
            Token::LParen => {
                self.bump();
                let inner = self.form()?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            _ => Err(self.error(UNARY_START)),
        }
    }
}

fn fold_right(first: Formula, rest: Vec<Formula>, op: fn(Formula, Formula) -> Formula) -> Formula {
    let mut items = rest;
    let Some(mut acc) = items.pop() else {
        return first;
    };
    while let Some(f) = items.pop() {
        acc = op(f, acc);
    }
    op(first, acc)
}

/// Parse a formula in the ASCII concrete syntax.
///
/// Precedence from tightest: prefixes (`~` and the modal boxes/diamonds),
/// `&`, `|`, `->`, `<->`. All binary connectives nest to the right.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let tokens = Lexer::tokenize(text)?;
    let mut parser = Parser { tokens, at: 0 };
    let f = parser.form()?;
    if *parser.peek() != Token::Eof {
        return Err(parser.error(&["&", "|", "->", "<->", "end of input"]));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::atom;

    #[test]
    fn conjunction() {
        assert_eq!(parse("p & q").unwrap(), Formula::and(atom("p"), atom("q")));
    }

    #[test]
    fn dyadic_obligation() {
        assert_eq!(
            parse("O(q / p)").unwrap(),
            Formula::ocond(atom("q"), atom("p"))
        );
    }

    #[test]
    fn prefixes_bind_tighter_than_implication() {
        assert_eq!(
            parse("<a> ~p -> [p] p").unwrap(),
            Formula::imp(
                Formula::dia_a(Formula::not(atom("p"))),
                Formula::box_p(atom("p"))
            )
        );
    }

    #[test]
    fn precedence_ladder() {
        let f = parse("a | b & c -> d <-> e").unwrap();
        let expected = Formula::iff(
            Formula::imp(
                Formula::or(atom("a"), Formula::and(atom("b"), atom("c"))),
                atom("d"),
            ),
            atom("e"),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn right_associative() {
        assert_eq!(
            parse("a -> b -> c").unwrap(),
            Formula::imp(atom("a"), Formula::imp(atom("b"), atom("c")))
        );
        assert_eq!(
            parse("a <-> b <-> c").unwrap(),
            Formula::iff(atom("a"), Formula::iff(atom("b"), atom("c")))
        );
        assert_eq!(
            parse("a & b & c").unwrap(),
            Formula::and(atom("a"), Formula::and(atom("b"), atom("c")))
        );
    }

    #[test]
    fn all_prefixes() {
        let f = parse("[a][p][]<>[m]<m>[c]<c><inv><a><p>~Oa(x) & Op(y)").unwrap();
        assert!(matches!(f, Formula::And(..)));
    }

    #[test]
    fn whitespace_is_insignificant() {
        assert_eq!(parse("  O ( q/p )  ").unwrap(), parse("O(q/p)").unwrap());
    }

    #[test]
    fn unbalanced_parentheses_rejected() {
        for bad in ["(p", "p)", "((p & q)", "O(p / q", "Oa(p"] {
            assert!(parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn unknown_operator() {
        let err = parse("p & [x] q").unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownOperator {
                offset: 4,
                operator: "[x]".into()
            }
        );
        assert!(matches!(
            parse("<foo> p"),
            Err(ParseError::UnknownOperator { .. })
        ));
    }

    #[test]
    fn syntax_error_reports_offset_and_expectations() {
        let err = parse("p & & q").unwrap_err();
        match err {
            ParseError::Syntax {
                offset, expected, ..
            } => {
                assert_eq!(offset, 4);
                assert!(expected.contains(&"identifier"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(parse("p q").unwrap_err().offset(), 2);
        assert!(parse("").is_err());
        assert!(parse("O p").is_err());
    }
}
