//! Concrete syntax.
//!
//! ```text
//! program ::= item* 'main' ('(' x ':' ty ')')* ':' ty '=' term
//! item    ::= 'type' X '=' ty ';' | 'let' x '=' term ';'
//! term    ::= ('\' | 'λ') binder+ '.' term
//!           | 'case' term 'of' 'inl' x '->' term '|' 'inr' y '->' term
//!           | app ['::' term]
//! binder  ::= x | '(' x ':' ty ')'
//! app     ::= head atom*
//! head    ::= ('fst' | 'snd' | 'inl' | 'inr') head | 'fold' atom '(' x y '.' term ')' atom | atom
//! atom    ::= x | 'nil' | op '(' [term (',' term)*] ')' | '(' ')' | '(' term ':' ty ')'
//!           | '(' term (',' term)* ')'
//! ty      ::= sum ['->' ty]      sum ::= prod ['+' sum]      prod ::= lty ['*' prod]
//! lty     ::= 'list' lty | '1' | X | '(' ty ')'
//! ```
//! Tuples nest to the right. `let` definitions are closed and are inlined
//! where used; `type` definitions are aliases.

use std::collections::HashMap;

use super::lexer::{lex, Tok};
use super::{Program, Signature, Span, Term, TermKind, Ty};
use crate::Error;

const KEYWORDS: [&str; 12] = ["case", "of", "inl", "inr", "fst", "snd", "fold", "nil", "list", "type", "let", "main"];

fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

struct Parser<'a> {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    sig: &'a Signature,
    aliases: HashMap<String, Ty>,
    macros: HashMap<String, Term>,
    scope: Vec<String>,
}

type PResult<T> = Result<T, Error>;

/// Parameters, result type and body of `main`.
type Definition = (Vec<(String, Ty)>, Ty, Term);

impl<'a> Parser<'a> {
    fn new(src: &str, sig: &'a Signature) -> PResult<Self> {
        let toks = lex(src).map_err(|e| Error::Syntax { span: e.span, msg: e.msg })?;
        Ok(Parser { toks, pos: 0, sig, aliases: HashMap::new(), macros: HashMap::new(), scope: Vec::new() })
    }

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

    fn error<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(Error::Syntax { span: self.span(), msg: msg.into() })
    }

    fn unexpected<T>(&self, wanted: &str) -> PResult<T> {
        self.error(format!("expected {wanted}, found {}", self.peek()))
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Ident(t) if t == k)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.unexpected(&format!("`{s}`"))
        }
    }

    fn expect_kw(&mut self, k: &str) -> PResult<()> {
        if self.is_kw(k) {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&format!("`{k}`"))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                Ok(s)
            }
            _ => self.unexpected("an identifier"),
        }
    }

    /// A name about to be bound by a lambda, case branch or fold step.
    fn binder_name(&mut self) -> PResult<String> {
        let span = self.span();
        let name = self.ident()?;
        if self.sig.ops.contains_key(&name) {
            return Err(Error::Syntax { span, msg: format!("`{name}` is a primitive operation and cannot be bound") });
        }
        Ok(name)
    }

    fn with_bound<T>(&mut self, names: &[String], f: impl FnOnce(&mut Self) -> PResult<T>) -> PResult<T> {
        let n = self.scope.len();
        self.scope.extend(names.iter().cloned());
        let r = f(self);
        self.scope.truncate(n);
        r
    }

    // types

    fn ty(&mut self) -> PResult<Ty> {
        let a = self.sum_ty()?;
        if self.eat_sym("->") {
            Ok(Ty::arrow(a, self.ty()?))
        } else {
            Ok(a)
        }
    }

    fn sum_ty(&mut self) -> PResult<Ty> {
        let a = self.prod_ty()?;
        if self.eat_sym("+") {
            Ok(Ty::sum(a, self.sum_ty()?))
        } else {
            Ok(a)
        }
    }

    fn prod_ty(&mut self) -> PResult<Ty> {
        let a = self.list_ty()?;
        if self.eat_sym("*") {
            Ok(Ty::prod(a, self.prod_ty()?))
        } else {
            Ok(a)
        }
    }

    fn list_ty(&mut self) -> PResult<Ty> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Ident(k) if k == "list" => {
                self.bump();
                Ok(Ty::list(self.list_ty()?))
            }
            Tok::Num(n) if n == "1" => {
                self.bump();
                Ok(Ty::Unit)
            }
            Tok::Ident(name) if !is_keyword(&name) => {
                self.bump();
                if let Some(t) = self.aliases.get(&name) {
                    Ok(t.clone())
                } else if self.sig.has_prim(&name) {
                    Ok(Ty::prim(&name))
                } else {
                    Err(Error::Syntax { span, msg: format!("unknown type `{name}`") })
                }
            }
            Tok::Sym("(") => {
                self.bump();
                let t = self.ty()?;
                self.expect_sym(")")?;
                Ok(t)
            }
            _ => self.unexpected("a type"),
        }
    }

    // terms

    fn term(&mut self) -> PResult<Term> {
        let span = self.span();
        if self.eat_sym("\\") || self.eat_sym("λ") {
            return self.lambda(span);
        }
        if self.is_kw("case") {
            return self.case(span);
        }
        let head = self.app()?;
        if self.eat_sym("::") {
            let tail = self.term()?;
            return Ok(Term::at(TermKind::Cons(Box::new(head), Box::new(tail)), span));
        }
        Ok(head)
    }

    fn lambda(&mut self, span: Span) -> PResult<Term> {
        let mut binders = Vec::new();
        loop {
            if self.eat_sym("(") {
                let x = self.binder_name()?;
                self.expect_sym(":")?;
                let t = self.ty()?;
                self.expect_sym(")")?;
                binders.push((x, Some(t)));
            } else if matches!(self.peek(), Tok::Ident(_)) {
                binders.push((self.binder_name()?, None));
            } else {
                break;
            }
        }
        if binders.is_empty() {
            return self.unexpected("a parameter");
        }
        self.expect_sym(".")?;
        let names: Vec<String> = binders.iter().map(|(x, _)| x.clone()).collect();
        let body = self.with_bound(&names, |p| p.term())?;
        Ok(binders.into_iter().rev().fold(body, |body, (param, ann)| {
            Term::at(TermKind::Fun { param, ann, body: Box::new(body) }, span)
        }))
    }

    fn case(&mut self, span: Span) -> PResult<Term> {
        self.expect_kw("case")?;
        let scrut = self.term()?;
        self.expect_kw("of")?;
        self.expect_kw("inl")?;
        let x = self.binder_name()?;
        self.expect_sym("->")?;
        let left = self.with_bound(std::slice::from_ref(&x), |p| p.term())?;
        self.expect_sym("|")?;
        self.expect_kw("inr")?;
        let y = self.binder_name()?;
        self.expect_sym("->")?;
        let right = self.with_bound(std::slice::from_ref(&y), |p| p.term())?;
        Ok(Term::at(
            TermKind::Case { scrut: Box::new(scrut), x, left: Box::new(left), y, right: Box::new(right) },
            span,
        ))
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !is_keyword(s) || s == "nil",
            Tok::Sym("(") => true,
            _ => false,
        }
    }

    fn app(&mut self) -> PResult<Term> {
        let mut f = self.head()?;
        while self.starts_atom() {
            let span = self.span();
            let a = self.atom()?;
            f = Term::at(TermKind::App(Box::new(f), Box::new(a)), span);
        }
        Ok(f)
    }

    fn head(&mut self) -> PResult<Term> {
        let span = self.span();
        let Tok::Ident(k) = self.peek().clone() else { return self.atom() };
        let wrap = |t: Term, k: &str| -> TermKind {
            let b = Box::new(t);
            match k {
                "fst" => TermKind::Fst(b),
                "snd" => TermKind::Snd(b),
                "inl" => TermKind::Inl(b),
                _ => TermKind::Inr(b),
            }
        };
        match k.as_str() {
            "fst" | "snd" | "inl" | "inr" => {
                self.bump();
                let arg = self.head()?;
                Ok(Term::at(wrap(arg, &k), span))
            }
            "fold" => {
                self.bump();
                let nil = self.atom()?;
                self.expect_sym("(")?;
                let x = self.binder_name()?;
                let y = self.binder_name()?;
                self.expect_sym(".")?;
                let step = self.with_bound(&[x.clone(), y.clone()], |p| p.term())?;
                self.expect_sym(")")?;
                let target = self.atom()?;
                Ok(Term::at(
                    TermKind::Fold { nil: Box::new(nil), x, y, step: Box::new(step), target: Box::new(target) },
                    span,
                ))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> PResult<Term> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Ident(k) if k == "nil" => {
                self.bump();
                Ok(Term::at(TermKind::Nil, span))
            }
            Tok::Ident(name) if !is_keyword(&name) => {
                self.bump();
                if self.sig.ops.contains_key(&name) {
                    self.expect_sym("(")?;
                    let mut args = Vec::new();
                    if !self.eat_sym(")") {
                        args.push(self.term()?);
                        while self.eat_sym(",") {
                            args.push(self.term()?);
                        }
                        self.expect_sym(")")?;
                    }
                    return Ok(Term::at(TermKind::PrimApp(name, args), span));
                }
                if self.scope.contains(&name) {
                    Ok(Term::at(TermKind::Var(name), span))
                } else if let Some(t) = self.macros.get(&name) {
                    Ok(t.clone())
                } else {
                    Err(Error::Syntax { span, msg: format!("unbound variable `{name}`") })
                }
            }
            Tok::Sym("(") => {
                self.bump();
                if self.eat_sym(")") {
                    return Ok(Term::at(TermKind::Unit, span));
                }
                let first = self.term()?;
                if self.eat_sym(":") {
                    let t = self.ty()?;
                    self.expect_sym(")")?;
                    return Ok(Term::at(TermKind::Ann(Box::new(first), t), span));
                }
                let mut items = vec![first];
                while self.eat_sym(",") {
                    items.push(self.term()?);
                }
                self.expect_sym(")")?;
                let last = items.pop().unwrap();
                Ok(items
                    .into_iter()
                    .rev()
                    .fold(last, |acc, t| Term::at(TermKind::Pair(Box::new(t), Box::new(acc)), span)))
            }
            _ => self.unexpected("a term"),
        }
    }

    fn eof(&mut self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.unexpected("end of input")
        }
    }

    fn program(&mut self) -> PResult<Definition> {
        loop {
            if self.is_kw("type") {
                self.bump();
                let span = self.span();
                let name = self.ident()?;
                if self.sig.has_prim(&name) {
                    return Err(Error::Syntax { span, msg: format!("`{name}` is already a primitive type") });
                }
                self.expect_sym("=")?;
                let t = self.ty()?;
                self.expect_sym(";")?;
                self.aliases.insert(name, t);
            } else if self.is_kw("let") {
                self.bump();
                let name = self.binder_name()?;
                self.expect_sym("=")?;
                let t = self.term()?;
                self.expect_sym(";")?;
                self.macros.insert(name, t);
            } else {
                break;
            }
        }
        self.expect_kw("main")?;
        let mut params = Vec::new();
        while self.eat_sym("(") {
            let x = self.binder_name()?;
            self.expect_sym(":")?;
            let t = self.ty()?;
            self.expect_sym(")")?;
            params.push((x, t));
        }
        self.expect_sym(":")?;
        let result = self.ty()?;
        self.expect_sym("=")?;
        let names: Vec<String> = params.iter().map(|(x, _)| x.clone()).collect();
        let body = self.with_bound(&names, |p| p.term())?;
        self.eof()?;
        Ok((params, result, body))
    }
}

/// Reads `-- key: value` pragma lines.
fn pragmas<'s>(src: &'s str, key: &str) -> Vec<&'s str> {
    src.lines()
        .filter_map(|l| l.trim().strip_prefix("--").map(str::trim))
        .filter_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(':')).map(str::trim))
        .collect()
}

/// The signature named by the file's `-- sig:` pragma, without parsing the rest.
pub fn sig_pragma(src: &str) -> Option<String> {
    pragmas(src, "sig").first().map(|s| s.to_string())
}

/// Parses a whole program file against `sig`.
pub fn parse_program(src: &str, sig: &Signature) -> Result<Program, Error> {
    let mut p = Parser::new(src, sig)?;
    let (params, result, body) = p.program()?;
    Ok(Program {
        sig: sig_pragma(src),
        inputs: pragmas(src, "input").into_iter().map(str::to_string).collect(),
        params,
        result,
        body,
    })
}

/// Parses a term whose free variables are `scope`.
pub fn parse_term(src: &str, sig: &Signature, scope: &[&str]) -> Result<Term, Error> {
    let mut p = Parser::new(src, sig)?;
    p.scope = scope.iter().map(|s| s.to_string()).collect();
    let t = p.term()?;
    p.eof()?;
    Ok(t)
}

/// Parses a type, with no aliases in scope.
pub fn parse_type(src: &str, sig: &Signature) -> Result<Ty, Error> {
    let mut p = Parser::new(src, sig)?;
    let t = p.ty()?;
    p.eof()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    pub(crate) fn num_sig() -> Signature {
        let num = Ty::prim("num");
        let mut ops = BTreeMap::new();
        ops.insert("zero".to_string(), (vec![], num.clone()));
        ops.insert("add".to_string(), (vec![num.clone(), num.clone()], num));
        Signature { prim_types: vec!["num".into()], ops }
    }

    #[test]
    fn fst_of_pair() {
        let t = parse_term("fst (inl (), ())", &num_sig(), &[]).unwrap();
        assert_eq!(t, Term::fst(Term::pair(Term::inl(Term::unit()), Term::unit())));
    }

    #[test]
    fn lambda_without_body_is_error() {
        let e = parse_term("\\x.", &num_sig(), &[]).unwrap_err();
        assert!(matches!(e, Error::Syntax { .. }), "{e}");
    }

    #[test]
    fn unbound_variable_is_rejected() {
        let e = parse_term("\\x. y", &num_sig(), &[]).unwrap_err();
        assert!(e.to_string().contains("unbound variable `y`"), "{e}");
    }

    #[test]
    fn application_and_cons_precedence() {
        let t = parse_term("f x :: g (y, z) :: nil", &num_sig(), &["f", "g", "x", "y", "z"]).unwrap();
        let v = Term::var;
        let expect = Term::cons(
            Term::app(v("f"), v("x")),
            Term::cons(Term::app(v("g"), Term::pair(v("y"), v("z"))), Term::nil()),
        );
        assert_eq!(t, expect);
    }

    #[test]
    fn types_nest_right() {
        let sig = num_sig();
        let t = parse_type("num * num * num -> list (1 + num)", &sig).unwrap();
        let n = Ty::prim("num");
        let expect = Ty::arrow(
            Ty::prod(n.clone(), Ty::prod(n.clone(), n.clone())),
            Ty::list(Ty::sum(Ty::Unit, n)),
        );
        assert_eq!(t, expect);
        assert!(parse_type("real", &sig).is_err());
    }

    #[test]
    fn macros_and_aliases_inline() {
        let src = "-- sig: lift-num\n-- input: ()\ntype L = 1 + 1;\nlet a = inl ();\nmain (l : L) : L = a";
        let p = parse_program(src, &num_sig()).unwrap();
        assert_eq!(p.sig.as_deref(), Some("lift-num"));
        assert_eq!(p.inputs, vec!["()".to_string()]);
        assert_eq!(p.params[0].1, Ty::sum(Ty::Unit, Ty::Unit));
        assert_eq!(p.body, Term::inl(Term::unit()));
    }

    #[test]
    fn primitive_names_cannot_be_bound() {
        assert!(parse_term("\\add. add", &num_sig(), &[]).is_err());
        let t = parse_term("add(zero(), x)", &num_sig(), &["x"]).unwrap();
        assert_eq!(t, Term::prim("add", vec![Term::prim("zero", vec![]), Term::var("x")]));
    }
}
