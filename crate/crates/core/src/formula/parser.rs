//! Recursive-descent parser for the ASCII formula syntax.
//!
//! ```text
//! formula := imp
//! imp     := or ("->" imp)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | atom
//! atom    := ident | "true" | "top" | "false" | "bot" | "(" formula ")"
//! ```
//!
//! Chains of `&` and `|` are built right-nested, the same shape `->` gets.

use std::sync::Arc;

use thiserror::Error;

use super::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty formula")]
    Empty,
    #[error("unexpected character {found:?} at position {position}")]
    UnexpectedChar { position: usize, found: char },
    #[error("expected {expected} at position {position}, found {found}")]
    UnexpectedToken {
        position: usize,
        expected: &'static str,
        found: String,
    },
}

impl ParseError {
    /// Byte offset of the error in the input, if any.
    pub fn position(&self) -> Option<usize> {
        match self {
            ParseError::Empty => None,
            ParseError::UnexpectedChar { position, .. }
            | ParseError::UnexpectedToken { position, .. } => Some(*position),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Top,
    Bot,
    And,
    Or,
    Imp,
    Not,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(name) => format!("identifier {name:?}"),
            Tok::Top => "'true'".into(),
            Tok::Bot => "'false'".into(),
            Tok::And => "'&'".into(),
            Tok::Or => "'|'".into(),
            Tok::Imp => "'->'".into(),
            Tok::Not => "'~'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut toks = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let tok = match c {
            '&' => Tok::And,
            '|' => Tok::Or,
            '~' => Tok::Not,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '-' => {
                chars.next();
                match chars.peek() {
                    Some(&(_, '>')) => Tok::Imp,
                    Some(&(p, found)) => return Err(ParseError::UnexpectedChar { position: p, found }),
                    None => {
                        return Err(ParseError::UnexpectedToken {
                            position: text.len(),
                            expected: "'>'",
                            found: "end of input".into(),
                        })
                    }
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut ident = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        ident.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let tok = match ident.as_str() {
                    "true" | "top" => Tok::Top,
                    "false" | "bot" => Tok::Bot,
                    _ => Tok::Ident(ident),
                };
                toks.push((pos, tok));
                continue;
            }
            found => return Err(ParseError::UnexpectedChar { position: pos, found }),
        };
        chars.next();
        toks.push((pos, tok));
    }
    toks.push((text.len(), Tok::End));
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let tok = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        tok
    }

    fn error(&self, expected: &'static str) -> ParseError {
        let (position, tok) = &self.toks[self.at];
        ParseError::UnexpectedToken {
            position: *position,
            expected,
            found: tok.describe(),
        }
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let left = self.or()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let right = self.imp()?;
            return Ok(Formula::imp(left, right));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut operands = vec![self.and()?];
        while *self.peek() == Tok::Or {
            self.bump();
            operands.push(self.and()?);
        }
        Ok(fold_right(operands, Formula::Or))
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut operands = vec![self.unary()?];
        while *self.peek() == Tok::And {
            self.bump();
            operands.push(self.unary()?);
        }
        Ok(fold_right(operands, Formula::And))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if *self.peek() == Tok::Not {
            self.bump();
            return Ok(Formula::negation(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Ident(_) | Tok::Top | Tok::Bot | Tok::LParen => {}
            _ => return Err(self.error("a formula")),
        }
        match self.bump() {
            Tok::Ident(name) => Ok(Formula::var(name)),
            Tok::Top => Ok(Formula::Top),
            Tok::Bot => Ok(Formula::Bot),
            _ => {
                let inner = self.imp()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error("')'"));
                }
                self.bump();
                Ok(inner)
            }
        }
    }
}

fn fold_right(
    mut operands: Vec<Formula>,
    make: fn(Arc<Formula>, Arc<Formula>) -> Formula,
) -> Formula {
    let mut acc = operands.pop().expect("at least one operand");
    while let Some(left) = operands.pop() {
        acc = make(Arc::new(left), Arc::new(acc));
    }
    acc
}

/// Parses a formula, reporting the byte offset of the first syntax error.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let toks = tokenize(text)?;
    if toks.len() == 1 {
        return Err(ParseError::Empty);
    }
    let mut parser = Parser { toks, at: 0 };
    let f = parser.imp()?;
    if *parser.peek() != Tok::End {
        return Err(parser.error("an operator or end of input"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(name: &str) -> Formula {
        Formula::var(name)
    }

    #[test]
    fn precedence_and_associativity() {
        // `->` binds loosest, so the LC axiom needs its parentheses.
        assert_eq!(
            parse("p -> q | q -> p").unwrap(),
            Formula::imp(v("p"), Formula::imp(Formula::or(v("q"), v("q")), v("p")))
        );
        assert_eq!(
            parse("(p -> q) | (q -> p)").unwrap(),
            Formula::or(Formula::imp(v("p"), v("q")), Formula::imp(v("q"), v("p")))
        );
        assert_eq!(
            parse("p & q & r").unwrap(),
            Formula::and(v("p"), Formula::and(v("q"), v("r")))
        );
        assert_eq!(
            parse("p -> q -> r").unwrap(),
            Formula::imp(v("p"), Formula::imp(v("q"), v("r")))
        );
        assert_eq!(
            parse("p | q & r").unwrap(),
            Formula::or(v("p"), Formula::and(v("q"), v("r")))
        );
    }

    #[test]
    fn negation_and_constants() {
        assert_eq!(parse("~p").unwrap(), Formula::imp(v("p"), Formula::Bot));
        assert_eq!(parse("~~p").unwrap(), Formula::negation(Formula::negation(v("p"))));
        assert_eq!(parse("top").unwrap(), Formula::Top);
        assert_eq!(parse("true").unwrap(), Formula::Top);
        assert_eq!(parse("bot").unwrap(), Formula::Bot);
        assert_eq!(parse("false").unwrap(), Formula::Bot);
        assert_eq!(parse("top_1").unwrap(), v("top_1"));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse(""), Err(ParseError::Empty));
        assert_eq!(parse("   "), Err(ParseError::Empty));
        assert_eq!(parse("(p &").unwrap_err().position(), Some(4));
        assert_eq!(parse("p q").unwrap_err().position(), Some(2));
        assert_eq!(parse("p $ q").unwrap_err().position(), Some(2));
        assert_eq!(parse("p - q").unwrap_err().position(), Some(3));
        assert_eq!(parse("(p").unwrap_err().position(), Some(2));
        assert_eq!(parse(")").unwrap_err().position(), Some(0));
    }
}
