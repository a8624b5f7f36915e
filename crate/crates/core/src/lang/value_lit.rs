//! Type-directed literals for program inputs.
//!
//! ```text
//! v ::= '()' | ['-'] digits ['/' digits] | 'tt' | 'ff' | '*'
//!     | 'inl' v | 'inr' v | '(' v (',' v)* ')' | '[' [v (',' v)*] ']'
//! ```
//! Tuples nest to the right, as in terms.

use super::lexer::{lex, Tok};
use super::{Span, Ty};
use crate::fam::Value;
use crate::prims::approx_point;
use crate::rational;
use crate::Error;

#[derive(Debug, Clone, PartialEq)]
enum Lit {
    Unit,
    Num(rational::Rational),
    Bool(bool),
    Star,
    Inl(Box<Lit>),
    Inr(Box<Lit>),
    Tuple(Vec<Lit>),
    List(Vec<Lit>),
}

fn bad(span: Span, msg: impl Into<String>) -> Error {
    Error::Input(format!("{span}: {}", msg.into()))
}

struct Reader {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Reader {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(t) if *t == s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), Error> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(bad(self.span(), format!("expected `{s}`, found {}", self.peek())))
        }
    }

    fn seq(&mut self, close: &str) -> Result<Vec<Lit>, Error> {
        let mut items = Vec::new();
        if self.eat(close) {
            return Ok(items);
        }
        items.push(self.lit()?);
        while self.eat(",") {
            items.push(self.lit()?);
        }
        self.expect(close)?;
        Ok(items)
    }

    fn number(&mut self, negative: bool) -> Result<Lit, Error> {
        let span = self.span();
        let Tok::Num(p) = self.bump() else { return Err(bad(span, "expected a number")) };
        let mut text = if negative { format!("-{p}") } else { p };
        if self.eat("/") {
            let Tok::Num(q) = self.bump() else { return Err(bad(span, "expected a denominator")) };
            text = format!("{text}/{q}");
        }
        rational::parse(&text).map(Lit::Num).ok_or_else(|| bad(span, format!("bad number {text}")))
    }

    fn lit(&mut self) -> Result<Lit, Error> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Num(_) => self.number(false),
            Tok::Sym("-") => {
                self.bump();
                self.number(true)
            }
            Tok::Sym("*") => {
                self.bump();
                Ok(Lit::Star)
            }
            Tok::Sym("(") => {
                self.bump();
                let mut items = self.seq(")")?;
                Ok(match items.len() {
                    0 => Lit::Unit,
                    1 => items.pop().unwrap(),
                    _ => Lit::Tuple(items),
                })
            }
            Tok::Sym("[") => {
                self.bump();
                Ok(Lit::List(self.seq("]")?))
            }
            Tok::Ident(k) => {
                self.bump();
                match k.as_str() {
                    "tt" => Ok(Lit::Bool(true)),
                    "ff" => Ok(Lit::Bool(false)),
                    "inl" => Ok(Lit::Inl(Box::new(self.lit()?))),
                    "inr" => Ok(Lit::Inr(Box::new(self.lit()?))),
                    _ => Err(bad(span, format!("unexpected `{k}` in value literal"))),
                }
            }
            t => Err(bad(span, format!("unexpected {t} in value literal"))),
        }
    }
}

fn resolve(lit: &Lit, ty: &Ty) -> Result<Value, Error> {
    let mismatch = || Error::Input(format!("value literal does not have type {ty}"));
    Ok(match (lit, ty) {
        (Lit::Unit, Ty::Unit) => Value::Unit,
        (Lit::Num(r), Ty::Prim(p)) if &**p == "num" => Value::num(r.clone()),
        (Lit::Bool(b), Ty::Prim(p)) if &**p == "bool" => Value::boolean(*b),
        (Lit::Star, Ty::Prim(p)) if &**p == "approx" => approx_point(),
        (Lit::Inl(v), Ty::Sum(a, _)) => Value::inl(resolve(v, a)?),
        (Lit::Inr(v), Ty::Sum(_, b)) => Value::inr(resolve(v, b)?),
        (Lit::Tuple(items), Ty::Prod(a, b)) => {
            let first = resolve(&items[0], a)?;
            let rest = match &items[1..] {
                [one] => resolve(one, b)?,
                more => resolve(&Lit::Tuple(more.to_vec()), b)?,
            };
            Value::pair(first, rest)
        }
        (Lit::List(items), Ty::List(a)) => Value::List(items.iter().map(|v| resolve(v, a)).collect::<Result<_, _>>()?),
        _ => return Err(mismatch()),
    })
}

/// Reads a value of type `ty`.
pub fn parse_value(src: &str, ty: &Ty) -> Result<Value, Error> {
    let toks = lex(src).map_err(|e| bad(e.span, e.msg))?;
    let mut r = Reader { toks, pos: 0 };
    let lit = r.lit()?;
    if *r.peek() != Tok::Eof {
        return Err(bad(r.span(), format!("trailing {}", r.peek())));
    }
    resolve(&lit, ty)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn label() -> Ty {
        Ty::sum(Ty::Unit, Ty::Unit)
    }

    #[test]
    fn query_input() {
        let ty = Ty::prod(label(), Ty::list(Ty::prod(label(), Ty::prim("num"))));
        let v = parse_value("(inl (), [(inl (),0),(inr (),1),(inl (),-1/2)])", &ty).unwrap();
        let a = Value::inl(Value::Unit);
        let b = Value::inr(Value::Unit);
        let expect = Value::pair(
            a.clone(),
            Value::list(vec![
                Value::pair(a.clone(), Value::int(0)),
                Value::pair(b, Value::int(1)),
                Value::pair(a, Value::num(ratio(-1, 2))),
            ]),
        );
        assert_eq!(v, expect);
        assert_eq!(parse_value(&v.to_string(), &ty).unwrap(), v);
    }

    #[test]
    fn tuples_nest_right_and_mismatches_fail() {
        let n = Ty::prim("num");
        let ty = Ty::prod(n.clone(), Ty::prod(n.clone(), n.clone()));
        assert_eq!(parse_value("(1, 2, 3)", &ty).unwrap(), parse_value("(1, (2, 3))", &ty).unwrap());
        assert!(parse_value("(1, 2)", &Ty::prod(n.clone(), Ty::Unit)).is_err());
        assert!(parse_value("inl 1", &n).is_err());
        assert_eq!(parse_value("*", &Ty::prim("approx")).unwrap(), approx_point());
    }
}
