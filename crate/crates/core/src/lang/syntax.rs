use std::fmt;

use super::Ty;

/// A source position, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, PartialOrd, Ord)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A term with its source position. Equality ignores positions.
#[derive(Debug, Clone)]
pub struct Term {
    pub kind: TermKind,
    pub span: Span,
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        self.kind == other.kind
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TermKind {
    Var(String),
    PrimApp(String, Vec<Term>),
    Inl(Box<Term>),
    Inr(Box<Term>),
    Case { scrut: Box<Term>, x: String, left: Box<Term>, y: String, right: Box<Term> },
    Unit,
    Pair(Box<Term>, Box<Term>),
    Fst(Box<Term>),
    Snd(Box<Term>),
    Fun { param: String, ann: Option<Ty>, body: Box<Term> },
    App(Box<Term>, Box<Term>),
    Nil,
    Cons(Box<Term>, Box<Term>),
    Fold { nil: Box<Term>, x: String, y: String, step: Box<Term>, target: Box<Term> },
    Ann(Box<Term>, Ty),
}

impl Term {
    pub fn new(kind: TermKind) -> Term {
        Term { kind, span: Span::default() }
    }

    pub fn at(kind: TermKind, span: Span) -> Term {
        Term { kind, span }
    }

    pub fn var(name: &str) -> Term {
        Term::new(TermKind::Var(name.to_string()))
    }

    pub fn prim(op: &str, args: Vec<Term>) -> Term {
        Term::new(TermKind::PrimApp(op.to_string(), args))
    }

    pub fn inl(t: Term) -> Term {
        Term::new(TermKind::Inl(Box::new(t)))
    }

    pub fn inr(t: Term) -> Term {
        Term::new(TermKind::Inr(Box::new(t)))
    }

    pub fn case(scrut: Term, x: &str, left: Term, y: &str, right: Term) -> Term {
        Term::new(TermKind::Case {
            scrut: Box::new(scrut),
            x: x.to_string(),
            left: Box::new(left),
            y: y.to_string(),
            right: Box::new(right),
        })
    }

    pub fn unit() -> Term {
        Term::new(TermKind::Unit)
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::new(TermKind::Pair(Box::new(a), Box::new(b)))
    }

    pub fn fst(t: Term) -> Term {
        Term::new(TermKind::Fst(Box::new(t)))
    }

    pub fn snd(t: Term) -> Term {
        Term::new(TermKind::Snd(Box::new(t)))
    }

    pub fn fun(param: &str, ann: Option<Ty>, body: Term) -> Term {
        Term::new(TermKind::Fun { param: param.to_string(), ann, body: Box::new(body) })
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::new(TermKind::App(Box::new(f), Box::new(a)))
    }

    pub fn nil() -> Term {
        Term::new(TermKind::Nil)
    }

    pub fn cons(h: Term, t: Term) -> Term {
        Term::new(TermKind::Cons(Box::new(h), Box::new(t)))
    }

    pub fn fold(nil: Term, x: &str, y: &str, step: Term, target: Term) -> Term {
        Term::new(TermKind::Fold {
            nil: Box::new(nil),
            x: x.to_string(),
            y: y.to_string(),
            step: Box::new(step),
            target: Box::new(target),
        })
    }

    pub fn ann(t: Term, ty: Ty) -> Term {
        Term::new(TermKind::Ann(Box::new(t), ty))
    }
}

/// A parsed program: typed parameters, result type and body.
#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    /// Signature named by a `-- sig:` pragma, if any.
    pub sig: Option<String>,
    /// Input literals from `-- input:` pragmas, in order.
    pub inputs: Vec<String>,
    pub params: Vec<(String, Ty)>,
    pub result: Ty,
    pub body: Term,
}
