//! Slice-literal text syntax for fibre elements.
//!
//! ```text
//! lit ::= '_' | '^' | '()' | '(' lit (',' lit)+ ')' | '(' lit ')'
//!       | 'up' '(' lit ')' | '[' num ',' num ']' | ident
//! num ::= ['-'] digits ['/' digits]
//! ```
//! `⊥`, `⊤` and `·` are accepted as synonyms of `_`, `^` and `()`.

use std::fmt;

use super::{bottom, top, FibreDesc, Interval, LatticeElem, LatticeError};
use crate::rational::{self, Rational};

/// An unresolved literal; its meaning depends on the fibre it is read against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SliceLit {
    Bot,
    Top,
    Unit,
    Tuple(Vec<SliceLit>),
    Up(Box<SliceLit>),
    Interval(Rational, Rational),
    Name(String),
}

impl fmt::Display for SliceLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SliceLit::Bot => write!(f, "_"),
            SliceLit::Top => write!(f, "^"),
            SliceLit::Unit => write!(f, "()"),
            SliceLit::Tuple(ls) => {
                write!(f, "(")?;
                for (i, l) in ls.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{l}")?;
                }
                write!(f, ")")
            }
            SliceLit::Up(l) => write!(f, "up({l})"),
            SliceLit::Interval(lo, hi) => {
                write!(f, "[{},{}]", rational::format(lo), rational::format(hi))
            }
            SliceLit::Name(n) => write!(f, "{n}"),
        }
    }
}

fn err(msg: impl Into<String>) -> LatticeError {
    LatticeError::Literal(msg.into())
}

struct Reader<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl<'a> Reader<'a> {
    fn new(src: &'a str) -> Self {
        Self { chars: src.chars().collect(), pos: 0, src }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), LatticeError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(err(format!("expected '{c}' at offset {} in {:?}", self.pos, self.src)))
        }
    }

    fn number(&mut self) -> Result<Rational, LatticeError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_ascii_digit() || "-/".contains(self.chars[self.pos]))
        {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        rational::parse(&text).ok_or_else(|| err(format!("bad number {text:?}")))
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.chars.len()
            && (self.chars[self.pos].is_alphanumeric() || "_'".contains(self.chars[self.pos]))
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn lit(&mut self) -> Result<SliceLit, LatticeError> {
        match self.peek() {
            Some('_') | Some('⊥') => {
                // `_` alone is bottom; `_foo` would be an identifier
                if self.chars.get(self.pos + 1).is_some_and(|c| c.is_alphanumeric()) {
                    return Ok(SliceLit::Name(self.ident()));
                }
                self.pos += 1;
                Ok(SliceLit::Bot)
            }
            Some('^') | Some('⊤') => {
                self.pos += 1;
                Ok(SliceLit::Top)
            }
            Some('·') => {
                self.pos += 1;
                Ok(SliceLit::Unit)
            }
            Some('(') => {
                self.pos += 1;
                if self.peek() == Some(')') {
                    self.pos += 1;
                    return Ok(SliceLit::Unit);
                }
                let mut items = vec![self.lit()?];
                while self.peek() == Some(',') {
                    self.pos += 1;
                    items.push(self.lit()?);
                }
                self.expect(')')?;
                Ok(if items.len() == 1 { items.pop().unwrap() } else { SliceLit::Tuple(items) })
            }
            Some('[') => {
                self.pos += 1;
                let lo = self.number()?;
                self.expect(',')?;
                let hi = self.number()?;
                self.expect(']')?;
                if lo > hi {
                    return Err(err(format!(
                        "empty interval [{},{}]",
                        rational::format(&lo),
                        rational::format(&hi)
                    )));
                }
                Ok(SliceLit::Interval(lo, hi))
            }
            Some(c) if c.is_alphabetic() => {
                let name = self.ident();
                if name == "up" && self.peek() == Some('(') {
                    self.pos += 1;
                    let inner = self.lit()?;
                    self.expect(')')?;
                    Ok(SliceLit::Up(Box::new(inner)))
                } else {
                    Ok(SliceLit::Name(name))
                }
            }
            Some(c) => Err(err(format!("unexpected '{c}' at offset {} in {:?}", self.pos, self.src))),
            None => Err(err(format!("unexpected end of input in {:?}", self.src))),
        }
    }
}

/// Parses slice-literal text into an unresolved literal.
pub fn parse(text: &str) -> Result<SliceLit, LatticeError> {
    let mut r = Reader::new(text);
    let lit = r.lit()?;
    if r.peek().is_some() {
        return Err(err(format!("trailing input at offset {} in {text:?}", r.pos)));
    }
    Ok(lit)
}

/// Reads a literal as an element of `d`. `_` and `^` denote the fibre's
/// bottom and top at any shape.
pub fn resolve(d: &FibreDesc, lit: &SliceLit) -> Result<LatticeElem, LatticeError> {
    let mismatch = || err(format!("literal {lit} does not denote an element of fibre {d}"));
    match (d, lit) {
        (_, SliceLit::Bot) => Ok(bottom(d)),
        (_, SliceLit::Top) => Ok(top(d)),
        (d, SliceLit::Unit) if d.is_one() => Ok(LatticeElem::Unit),
        (FibreDesc::Prod(ds), SliceLit::Tuple(ls)) if ds.len() == ls.len() => Ok(LatticeElem::Tuple(
            ds.iter().zip(ls).map(|(d, l)| resolve(d, l)).collect::<Result<_, _>>()?,
        )),
        (FibreDesc::Prod(ds), l) if ds.len() == 1 => Ok(LatticeElem::Tuple(vec![resolve(&ds[0], l)?])),
        (FibreDesc::Lifted(inner), SliceLit::Up(l)) => Ok(LatticeElem::up(resolve(inner, l)?)),
        (FibreDesc::Lifted(inner), l) => Ok(LatticeElem::up(resolve(inner, l)?)),
        (FibreDesc::IntervalAt(x), SliceLit::Interval(lo, hi)) => {
            let iv = Interval::new(lo.clone(), hi.clone());
            if iv.contains(x) {
                Ok(LatticeElem::Interval(iv))
            } else {
                Err(LatticeError::Nonconforming { fibre: d.to_string(), elem: lit.to_string() })
            }
        }
        (FibreDesc::Fin(l), SliceLit::Name(n)) => l.id_of(n).map(LatticeElem::Fin).ok_or_else(mismatch),
        _ => Err(mismatch()),
    }
}

/// Renders an element of `d` so that `resolve(d, parse(render))` gives it back.
pub fn render(d: &FibreDesc, e: &LatticeElem) -> SliceLit {
    match (d, e) {
        (_, LatticeElem::Unit) => SliceLit::Unit,
        (_, LatticeElem::Bot) => SliceLit::Bot,
        (_, LatticeElem::Top) => SliceLit::Top,
        (FibreDesc::Lifted(inner), LatticeElem::Up(a)) if inner.is_one() => {
            debug_assert_eq!(**a, LatticeElem::Unit);
            SliceLit::Top
        }
        (FibreDesc::Lifted(inner), LatticeElem::Up(a)) => SliceLit::Up(Box::new(render(inner, a))),
        (FibreDesc::Prod(ds), LatticeElem::Tuple(es)) => {
            SliceLit::Tuple(ds.iter().zip(es).map(|(d, e)| render(d, e)).collect())
        }
        (_, LatticeElem::Interval(iv)) => SliceLit::Interval(iv.lo.clone(), iv.hi.clone()),
        (FibreDesc::Fin(l), LatticeElem::Fin(id)) => SliceLit::Name(l.name(*id).to_string()),
        _ => panic!("render: element {e} does not conform to {d}"),
    }
}

/// Parses and resolves in one step.
pub fn read(d: &FibreDesc, text: &str) -> Result<LatticeElem, LatticeError> {
    resolve(d, &parse(text)?)
}

/// Renders to text.
pub fn show(d: &FibreDesc, e: &LatticeElem) -> String {
    render(d, e).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::enumerate;
    use crate::rational::{int, ratio};

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse("_").unwrap(), SliceLit::Bot);
        assert_eq!(parse(" ^ ").unwrap(), SliceLit::Top);
        assert_eq!(parse("()").unwrap(), SliceLit::Unit);
        assert_eq!(parse("(_, ^)").unwrap(), SliceLit::Tuple(vec![SliceLit::Bot, SliceLit::Top]));
        assert_eq!(parse("up(^)").unwrap(), SliceLit::Up(Box::new(SliceLit::Top)));
        assert_eq!(parse("[-1/10, 1/10]").unwrap(), SliceLit::Interval(ratio(-1, 10), ratio(1, 10)));
        assert_eq!(parse("(⊥, ⊤, ·)").unwrap().to_string(), "(_, ^, ())");
        assert!(parse("(_,").is_err());
        assert!(parse("[2,1]").is_err());
        assert!(parse("^ ^").is_err());
    }

    #[test]
    fn resolves_against_fibres() {
        let d = FibreDesc::Prod(vec![FibreDesc::One, FibreDesc::lifted(FibreDesc::One)]);
        assert_eq!(read(&d, "((), ^)").unwrap(), LatticeElem::pair(LatticeElem::Unit, LatticeElem::up(LatticeElem::Unit)));
        assert_eq!(read(&d, "^").unwrap(), top(&d));
        let iv = FibreDesc::IntervalAt(int(1));
        assert!(matches!(read(&iv, "[2,3]"), Err(LatticeError::Nonconforming { .. })));
        assert!(read(&FibreDesc::Two, "()").is_err());
    }

    #[test]
    fn render_roundtrip_on_enumerations() {
        let fibres = vec![
            FibreDesc::Two,
            FibreDesc::lifted(FibreDesc::Prod(vec![FibreDesc::Two, FibreDesc::Two])),
            FibreDesc::lifted(FibreDesc::lifted(FibreDesc::One)),
            FibreDesc::Prod(vec![FibreDesc::One, FibreDesc::lifted(FibreDesc::One), FibreDesc::One]),
            FibreDesc::Prod(vec![FibreDesc::Two]),
        ];
        for d in fibres {
            for e in enumerate(&d).unwrap() {
                assert_eq!(read(&d, &show(&d, &e)).unwrap(), e, "fibre {d}");
            }
        }
    }
}
