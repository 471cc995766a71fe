//! Recursive-descent parser for the ASCII formula grammar.
//!
//! Precedence, tightest first: unary (`~`, `neg`, `tri`, modalities), `&`,
//! `|`, then `->` / `-<`. `->` is right-associative, `-<` left-associative,
//! and mixing the two at the same level requires parentheses.
//!
//! UTF-8 aliases are accepted on input: `□ ◇ ■ ◆ △ ∼ ¬ → ⤙`.

use super::{Formula, ModalOp, ModalShape, RelIndex, Var};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unknown token at position {0}")]
    UnknownToken(usize),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected {found} at position {pos}")]
    Unexpected { found: String, pos: usize },
    #[error("`->` and `-<` mixed at the same level at position {0}; parenthesize")]
    MixedArrows(usize),
    #[error("trailing input at position {0}")]
    TrailingInput(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    And,
    Or,
    Arrow,
    Coarrow,
    Tilde,
    Neg,
    Tri,
    Zero,
    One,
    BConst,
    Ident(String),
    Modal(ModalOp),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Coarrow => "`-<`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Neg => "`neg`".into(),
            Tok::Tri => "`tri`".into(),
            Tok::Zero => "`0`".into(),
            Tok::One => "`1`".into(),
            Tok::BConst => "`B`".into(),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Modal(_) => "modality".into(),
        }
    }
}

fn lex(input: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i;
        match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => toks.push((Tok::LParen, pos)),
            ')' => toks.push((Tok::RParen, pos)),
            '&' | '∧' => toks.push((Tok::And, pos)),
            '|' | '∨' => toks.push((Tok::Or, pos)),
            '~' | '∼' => toks.push((Tok::Tilde, pos)),
            '¬' => toks.push((Tok::Neg, pos)),
            '△' => toks.push((Tok::Tri, pos)),
            '→' => toks.push((Tok::Arrow, pos)),
            '⤙' => toks.push((Tok::Coarrow, pos)),
            '□' => toks.push((Tok::Modal(ModalOp::BOX), pos)),
            '◇' => toks.push((Tok::Modal(ModalOp::DIAMOND), pos)),
            '■' => toks.push((Tok::Modal(ModalOp::informational(ModalShape::Box)), pos)),
            '◆' => toks.push((Tok::Modal(ModalOp::informational(ModalShape::Diamond)), pos)),
            '0' => toks.push((Tok::Zero, pos)),
            '1' => toks.push((Tok::One, pos)),
            '-' => {
                match chars.get(i + 1) {
                    Some('>') => toks.push((Tok::Arrow, pos)),
                    Some('<') => toks.push((Tok::Coarrow, pos)),
                    _ => return Err(ParseError::UnknownToken(pos)),
                }
                i += 1;
            }
            '[' | '<' => {
                let shape = if c == '[' { ModalShape::Box } else { ModalShape::Diamond };
                let close = if c == '[' { ']' } else { '>' };
                let op = match (chars.get(i + 1), chars.get(i + 2), chars.get(i + 3)) {
                    (Some(&x), _, _) if x == close => {
                        i += 1;
                        // plain `[]`, optionally followed by a relation index
                        match chars.get(i + 1) {
                            Some('1') => {
                                i += 1;
                                ModalOp::indexed(shape, RelIndex::One)
                            }
                            Some('2') => {
                                i += 1;
                                ModalOp::indexed(shape, RelIndex::Two)
                            }
                            _ => ModalOp::standard(shape),
                        }
                    }
                    (Some('^'), Some(&x), _) if x == close => {
                        i += 2;
                        ModalOp::overline(shape)
                    }
                    (Some('#'), Some(&x), _) if x == close => {
                        i += 2;
                        ModalOp::informational(shape)
                    }
                    (Some('#'), Some('^'), Some(&x)) if x == close => {
                        i += 3;
                        ModalOp::informational_overline(shape)
                    }
                    _ => return Err(ParseError::UnknownToken(pos)),
                };
                toks.push((Tok::Modal(op), pos));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                i -= 1;
                let tok = match word.as_str() {
                    "neg" => Tok::Neg,
                    "tri" => Tok::Tri,
                    "B" => Tok::BConst,
                    _ => Tok::Ident(word),
                };
                toks.push((tok, pos));
            }
            _ => return Err(ParseError::UnknownToken(pos)),
        }
        i += 1;
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|&(_, p)| p).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        match self.next() {
            Some(t) if t == tok => Ok(()),
            Some(t) => Err(ParseError::Unexpected { found: t.describe(), pos: self.toks[self.at - 1].1 }),
            None => Err(ParseError::UnexpectedEnd),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let first = self.or_level()?;
        let mut arrow_kind: Option<Tok> = None;
        let mut rest = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Arrow) | Some(Tok::Coarrow) => {
                    let pos = self.pos();
                    let op = self.next().unwrap();
                    match &arrow_kind {
                        None => arrow_kind = Some(op.clone()),
                        Some(k) if *k != op => return Err(ParseError::MixedArrows(pos)),
                        _ => {}
                    }
                    rest.push(self.or_level()?);
                }
                _ => break,
            }
        }
        Ok(match arrow_kind {
            None => first,
            Some(Tok::Arrow) => {
                // right-associative
                let mut out = rest.pop().unwrap();
                for lhs in rest.into_iter().rev() {
                    out = Formula::impl_(lhs, out);
                }
                Formula::impl_(first, out)
            }
            Some(Tok::Coarrow) => {
                // left-associative
                let mut out = first;
                for rhs in rest {
                    out = Formula::coimpl(out, rhs);
                }
                out
            }
            _ => unreachable!(),
        })
    }

    fn or_level(&mut self) -> Result<Formula, ParseError> {
        let mut out = self.and_level()?;
        while self.peek() == Some(&Tok::Or) {
            self.next();
            out = Formula::or(out, self.and_level()?);
        }
        Ok(out)
    }

    fn and_level(&mut self) -> Result<Formula, ParseError> {
        let mut out = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.next();
            out = Formula::and(out, self.unary()?);
        }
        Ok(out)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Tilde) => {
                self.next();
                Ok(Formula::strong_neg(self.unary()?))
            }
            Some(Tok::Neg) => {
                self.next();
                Ok(Formula::de_morgan_neg(self.unary()?))
            }
            Some(Tok::Tri) => {
                self.next();
                Ok(Formula::delta(self.unary()?))
            }
            Some(Tok::Modal(_)) => {
                let Some(Tok::Modal(op)) = self.next() else { unreachable!() };
                Ok(Formula::modal(op, self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let pos = self.pos();
        match self.next() {
            Some(Tok::LParen) => {
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::Zero) => Ok(Formula::Zero),
            Some(Tok::One) => Ok(Formula::One),
            Some(Tok::BConst) => Ok(Formula::BConst),
            Some(Tok::Ident(name)) => Ok(Formula::Var(ident_to_var(name))),
            Some(t) => Err(ParseError::Unexpected { found: t.describe(), pos }),
            None => Err(ParseError::UnexpectedEnd),
        }
    }
}

fn ident_to_var(name: String) -> Var {
    match name.strip_suffix("_star") {
        Some(base) if !base.is_empty() => Var::starred(base),
        _ => Var::plain(name),
    }
}

/// Parses a formula from its concrete syntax.
pub fn parse(input: &str) -> Result<Formula, ParseError> {
    let toks = lex(input)?;
    let mut p = Parser { toks, at: 0, end: input.chars().count() };
    let f = p.formula()?;
    if p.at != p.toks.len() {
        return Err(ParseError::TrailingInput(p.pos()));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::super::*;

    fn roundtrip(s: &str) -> Formula {
        let f: Formula = s.parse().unwrap();
        let printed = f.to_string();
        let again: Formula = printed.parse().unwrap_or_else(|e| {
            panic!("reparse of `{printed}` failed: {e}");
        });
        assert_eq!(again, f, "printed as `{printed}`");
        f
    }

    #[test]
    fn associativity() {
        let f = roundtrip("p -> q -> r");
        assert_eq!(
            f,
            Formula::impl_(
                Formula::var("p"),
                Formula::impl_(Formula::var("q"), Formula::var("r"))
            )
        );
        let g = roundtrip("p -< q -< r");
        assert_eq!(
            g,
            Formula::coimpl(
                Formula::coimpl(Formula::var("p"), Formula::var("q")),
                Formula::var("r")
            )
        );
        assert_eq!(
            "p -> q -< r".parse::<Formula>(),
            Err(ParseError::MixedArrows(7))
        );
    }

    #[test]
    fn precedence() {
        let f = roundtrip("~p & q | r -> s");
        assert_eq!(
            f,
            Formula::impl_(
                Formula::or(
                    Formula::and(Formula::strong_neg(Formula::var("p")), Formula::var("q")),
                    Formula::var("r")
                ),
                Formula::var("s")
            )
        );
    }

    #[test]
    fn modalities() {
        roundtrip("[]p & <>q");
        roundtrip("[^]p | <^>q");
        roundtrip("[#]p -> <#>q");
        roundtrip("[#^]p & <#^>q");
        let f: Formula = "[]1 p & []2 q & <>1 r & <>2 s".parse().unwrap();
        assert_eq!(f.to_string(), "[]1 p & []2 q & <>1 r & <>2 s");
    }

    #[test]
    fn utf8_aliases() {
        let a: Formula = "□p → ◇∼△(p → q)".parse().unwrap();
        let b: Formula = "[]p -> <>~tri(p -> q)".parse().unwrap();
        assert_eq!(a, b);
        let c: Formula = "■s ∧ ◆d".parse().unwrap();
        let d: Formula = "[#]s & <#>d".parse().unwrap();
        assert_eq!(c, d);
        let e: Formula = "1 ⤙ ¬p".parse().unwrap();
        assert_eq!(e, Formula::coimpl(Formula::One, Formula::de_morgan_neg(Formula::var("p"))));
    }

    #[test]
    fn starred_variables() {
        let f: Formula = "p_star & p".parse().unwrap();
        assert_eq!(
            f,
            Formula::and(Formula::star_var("p"), Formula::var("p"))
        );
        assert_eq!(f.to_string(), "p_star & p");
    }

    #[test]
    fn errors() {
        assert_eq!("p @ q".parse::<Formula>(), Err(ParseError::UnknownToken(2)));
        assert_eq!("p &".parse::<Formula>(), Err(ParseError::UnexpectedEnd));
        assert_eq!("(p".parse::<Formula>(), Err(ParseError::UnexpectedEnd));
        assert!(matches!("p q".parse::<Formula>(), Err(ParseError::TrailingInput(_))));
        assert!(matches!(")p".parse::<Formula>(), Err(ParseError::Unexpected { .. })));
        assert!("[?]p".parse::<Formula>().is_err());
    }

    #[test]
    fn keywords_are_reserved() {
        // `B` is the constant, never a variable; longer words are ordinary.
        assert_eq!("B".parse::<Formula>().unwrap(), Formula::BConst);
        assert_eq!("B1".parse::<Formula>().unwrap(), Formula::var("B1"));
        assert_eq!("negx".parse::<Formula>().unwrap(), Formula::var("negx"));
        assert_eq!("trip".parse::<Formula>().unwrap(), Formula::var("trip"));
    }
}
