//! Call-by-name translation through the tagging monad `T(X) = approx × X`.
//!
//! Every type former gets a tag under it, so a backward slice of the
//! translated program says which substructures of the input were used.
//! Unit is `η(v) = (top(), v)` and binding multiplies tags with `and`.

use std::collections::BTreeSet;

use crate::fam::Value;
use crate::interp::Compiled;
use crate::lang::{typecheck, typecheck_program, Program, Term, Ty, Typed, TypedKind};
use crate::lattice::literal::{render, SliceLit};
use crate::lattice::{FibreDesc, LatticeElem};
use crate::prims::{approx_point, builtin_signature};
use crate::Error;

/// `approx × ty`.
pub fn t_of(ty: Ty) -> Ty {
    Ty::prod(Ty::prim("approx"), ty)
}

pub fn cbn_type(ty: &Ty) -> Ty {
    let tt = |t: &Ty| t_of(cbn_type(t));
    match ty {
        Ty::Prim(_) | Ty::Unit => ty.clone(),
        Ty::Sum(a, b) => Ty::sum(tt(a), tt(b)),
        Ty::Prod(a, b) => Ty::prod(tt(a), tt(b)),
        Ty::Arrow(a, b) => Ty::arrow(tt(a), tt(b)),
        Ty::List(a) => Ty::list(tt(a)),
    }
}

/// The type a variable of type `ty` has after translation.
fn var_type(ty: &Ty) -> Ty {
    t_of(cbn_type(ty))
}

fn collect_names(t: &Typed, out: &mut BTreeSet<String>) {
    out.extend(t.ctx.iter().map(|(x, _)| x.clone()));
    let mut add = |s: &String| {
        out.insert(s.clone());
    };
    match &t.kind {
        TypedKind::Var { name, .. } => add(name),
        TypedKind::Case { x, y, .. } | TypedKind::Fold { x, y, .. } => {
            add(x);
            add(y);
        }
        TypedKind::Fun { param, .. } => add(param),
        _ => {}
    }
    for c in children(t) {
        collect_names(c, out);
    }
}

fn children(t: &Typed) -> Vec<&Typed> {
    match &t.kind {
        TypedKind::Var { .. } | TypedKind::Unit | TypedKind::Nil => vec![],
        TypedKind::PrimApp(_, args) => args.iter().collect(),
        TypedKind::Inl(a) | TypedKind::Inr(a) | TypedKind::Fst(a) | TypedKind::Snd(a) => vec![a],
        TypedKind::Fun { body, .. } => vec![body],
        TypedKind::Case { scrut, left, right, .. } => vec![scrut, left, right],
        TypedKind::Pair(a, b) | TypedKind::App(a, b) | TypedKind::Cons(a, b) => vec![a, b],
        TypedKind::Fold { nil, step, target, .. } => vec![nil, step, target],
    }
}

struct Translator {
    used: BTreeSet<String>,
    next: usize,
}

impl Translator {
    fn fresh(&mut self) -> String {
        loop {
            let name = format!("_t{}", self.next);
            self.next += 1;
            if self.used.insert(name.clone()) {
                return name;
            }
        }
    }

    fn eta(&self, t: Term) -> Term {
        Term::pair(Term::prim("top", vec![]), t)
    }

    /// `m : T(a)` is bound once; `body` receives its payload and must build a
    /// term of type `T(b)`. The payload is passed as `snd p` rather than
    /// through a second lambda, so each bind adds one closure level.
    fn bind_fresh(&mut self, m: Term, a: &Ty, b: &Ty, body: impl FnOnce(&mut Self, Term) -> Term) -> Term {
        let p = self.fresh();
        let q = self.fresh();
        let inner = body(self, Term::snd(Term::var(&p)));
        let combine = Term::fun(
            &q,
            Some(t_of(b.clone())),
            Term::pair(
                Term::prim("and", vec![Term::fst(Term::var(&p)), Term::fst(Term::var(&q))]),
                Term::snd(Term::var(&q)),
            ),
        );
        Term::app(Term::fun(&p, Some(t_of(a.clone())), Term::app(combine, inner)), m)
    }

    /// `t : τ` becomes a term of type `T(cbn τ)`.
    fn term(&mut self, t: &Typed) -> Term {
        let out = cbn_type(&t.ty);
        match &t.kind {
            TypedKind::Var { name, .. } => Term::var(name),
            TypedKind::PrimApp(op, args) => self.prim_args(op, args, Vec::new(), &out),
            TypedKind::Inl(a) | TypedKind::Inr(a) => {
                let inner = self.term(a);
                let inj = if matches!(t.kind, TypedKind::Inl(_)) { Term::inl(inner) } else { Term::inr(inner) };
                self.eta(Term::ann(inj, out))
            }
            TypedKind::Case { scrut, x, left, y, right } => {
                let s = self.term(scrut);
                let (l, r) = (self.term(left), self.term(right));
                let (x, y) = (x.clone(), y.clone());
                self.bind_fresh(s, &cbn_type(&scrut.ty), &out, |_, v| Term::case(v, &x, l, &y, r))
            }
            TypedKind::Unit => self.eta(Term::unit()),
            TypedKind::Pair(a, b) => {
                let pair = Term::pair(self.term(a), self.term(b));
                self.eta(pair)
            }
            TypedKind::Fst(p) | TypedKind::Snd(p) => {
                let m = self.term(p);
                let first = matches!(t.kind, TypedKind::Fst(_));
                self.bind_fresh(m, &cbn_type(&p.ty), &out, |_, v| if first { Term::fst(v) } else { Term::snd(v) })
            }
            TypedKind::Fun { param, param_ty, body } => {
                let f = Term::fun(param, Some(var_type(param_ty)), self.term(body));
                self.eta(f)
            }
            TypedKind::App(f, a) => {
                let (mf, ma) = (self.term(f), self.term(a));
                self.bind_fresh(mf, &cbn_type(&f.ty), &out, |_, v| Term::app(v, ma))
            }
            TypedKind::Nil => self.eta(Term::ann(Term::nil(), out)),
            TypedKind::Cons(h, tl) => {
                let (mh, mt) = (self.term(h), self.term(tl));
                let eta_cons = |me: &mut Self, v: Term| me.eta(Term::cons(mh, v));
                self.bind_fresh(mt, &out, &out, eta_cons)
            }
            TypedKind::Fold { nil, x, y, step, target } => {
                let (mn, ms, mt) = (self.term(nil), self.term(step), self.term(target));
                let (x, y) = (x.clone(), y.clone());
                self.bind_fresh(mt, &cbn_type(&target.ty), &out, |_, v| Term::fold(mn, &x, &y, ms, v))
            }
        }
    }

    /// Binds the arguments left to right, then applies the operation.
    fn prim_args(&mut self, op: &str, rest: &[Typed], mut done: Vec<Term>, out: &Ty) -> Term {
        match rest.split_first() {
            None => self.eta(Term::prim(op, done)),
            Some((a, more)) => {
                let m = self.term(a);
                self.bind_fresh(m, &cbn_type(&a.ty), out, |me, v| {
                    done.push(v);
                    me.prim_args(op, more, done, out)
                })
            }
        }
    }
}

/// Translates a typechecked term. The result has type `T(cbn τ)` in the
/// context where each `x : σ` becomes `x : T(cbn σ)`.
pub fn cbn_term(t: &Typed) -> Term {
    let mut used = BTreeSet::new();
    collect_names(t, &mut used);
    Translator { used, next: 0 }.term(t)
}

/// Embeds a value of type `ty` with every tag present.
pub fn cbn_value(ty: &Ty, v: &Value) -> Value {
    Value::pair(approx_point(), cbn_payload(ty, v))
}

fn cbn_payload(ty: &Ty, v: &Value) -> Value {
    match (ty, v) {
        (Ty::Sum(a, _), Value::Inl(x)) => Value::inl(cbn_value(a, x)),
        (Ty::Sum(_, b), Value::Inr(y)) => Value::inr(cbn_value(b, y)),
        (Ty::Prod(a, b), Value::Pair(x, y)) => Value::pair(cbn_value(a, x), cbn_value(b, y)),
        (Ty::List(a), Value::List(vs)) => Value::List(vs.iter().map(|x| cbn_value(a, x)).collect()),
        (Ty::Arrow(..), _) => panic!("cbn_value: function values cannot be embedded"),
        _ => v.clone(),
    }
}

/// Removes every tag from a value of type `T(cbn ty)`.
pub fn erase(ty: &Ty, v: &Value) -> Value {
    erase_payload(ty, v.as_pair().1)
}

fn erase_payload(ty: &Ty, v: &Value) -> Value {
    match (ty, v) {
        (Ty::Sum(a, _), Value::Inl(x)) => Value::inl(erase(a, x)),
        (Ty::Sum(_, b), Value::Inr(y)) => Value::inr(erase(b, y)),
        (Ty::Prod(a, b), Value::Pair(x, y)) => Value::pair(erase(a, x), erase(b, y)),
        (Ty::List(a), Value::List(vs)) => Value::List(vs.iter().map(|x| erase(a, x)).collect()),
        _ => v.clone(),
    }
}

/// A program translated and compiled under `cbn-num`.
#[derive(Clone)]
pub struct CbnProgram {
    pub params: Vec<(String, Ty)>,
    pub original: Typed,
    pub compiled: Compiled,
}

impl CbnProgram {
    pub fn new(program: &Program) -> Result<Self, Error> {
        let sig = builtin_signature("cbn-num")?;
        let original = typecheck_program(program, &sig.sig)?;
        let params: Vec<(String, Ty)> = program.params.clone();
        let ctx: Vec<(String, Ty)> = params.iter().map(|(x, t)| (x.clone(), var_type(t))).collect();
        let term = cbn_term(&original);
        let typed = typecheck(&term, &sig.sig, &ctx, Some(&var_type(&original.ty)))?;
        let compiled = Compiled::from_typed(ctx, typed, sig)?;
        Ok(CbnProgram { params, original, compiled })
    }

    pub fn input_ty(&self) -> Ty {
        Ty::tuple(&self.params.iter().map(|(_, t)| t.clone()).collect::<Vec<_>>())
    }

    /// Translates an argument tuple of the original program.
    pub fn translate_input(&self, args: &Value) -> Value {
        let n = self.params.len();
        let mut items = split_args(n, args);
        for (item, (_, ty)) in items.iter_mut().zip(&self.params) {
            *item = cbn_value(ty, item);
        }
        join_args(items)
    }

    /// Strips the tags from a translated output.
    pub fn erase_output(&self, v: &Value) -> Value {
        erase(&self.original.ty, v)
    }

    /// The usage summary of a slice of the translated input; see [`usage_summary`].
    pub fn usage_summary(&self, args: &Value, d: &FibreDesc, e: &LatticeElem) -> String {
        usage_summary(&self.params, &self.translate_input(args), d, e)
    }
}

fn split_args(n: usize, args: &Value) -> Vec<Value> {
    let mut items = Vec::with_capacity(n);
    let mut rest = args.clone();
    for _ in 1..n {
        let (a, b) = rest.as_pair();
        items.push(a.clone());
        rest = b.clone();
    }
    if n > 0 {
        items.push(rest);
    }
    items
}

fn join_args(mut items: Vec<Value>) -> Value {
    match items.pop() {
        None => Value::Unit,
        Some(last) => items.into_iter().rev().fold(last, |acc, x| Value::pair(x, acc)),
    }
}

fn tuple_lit(l: SliceLit, n: usize) -> Vec<SliceLit> {
    match l {
        SliceLit::Tuple(ls) if ls.len() == n => ls,
        other => panic!("usage summary: expected a {n}-tuple, found {other}"),
    }
}

/// Shows one tag per position of the original type: a product shows its
/// components, a list shows its own tag followed by its elements, and every
/// other type shows just its tag.
fn summary(ty: &Ty, v: &Value, lit: SliceLit) -> String {
    let mut parts = tuple_lit(lit, 2);
    let payload = parts.pop().unwrap();
    let tag = parts.pop().unwrap();
    let pv = v.as_pair().1;
    match (ty, pv) {
        (Ty::Prod(a, b), Value::Pair(x, y)) => {
            let mut ps = tuple_lit(payload, 2);
            let second = ps.pop().unwrap();
            let first = ps.pop().unwrap();
            format!("({}, {})", summary(a, x, first), summary(b, y, second))
        }
        (Ty::List(a), Value::List(vs)) => {
            let mut items = vec![tag.to_string()];
            let mut rest = payload;
            for x in vs.iter() {
                let mut ps = tuple_lit(rest, 2);
                rest = ps.pop().unwrap();
                items.push(summary(a, x, ps.pop().unwrap()));
            }
            format!("({})", items.join(", "))
        }
        _ => tag.to_string(),
    }
}

/// Summarizes a slice `e` of the translated argument tuple `args` (a point
/// of the fibre `d`) as tags laid out along the original parameter types.
pub fn usage_summary(params: &[(String, Ty)], args: &Value, d: &FibreDesc, e: &LatticeElem) -> String {
    let n = params.len();
    let lit = render(d, e);
    let vals = split_args(n, args);
    let mut lits = Vec::with_capacity(n);
    let mut rest = lit;
    for _ in 1..n {
        let mut ps = tuple_lit(rest, 2);
        rest = ps.pop().unwrap();
        lits.push(ps.pop().unwrap());
    }
    if n > 0 {
        lits.push(rest);
    }
    let mut shown: Vec<String> =
        params.iter().zip(&vals).zip(lits).map(|(((_, ty), v), l)| summary(ty, v, l)).collect();
    match shown.len() {
        0 => "()".into(),
        _ => {
            let last = shown.pop().unwrap();
            shown.into_iter().rev().fold(last, |acc, s| format!("({s}, {acc})"))
        }
    }
}

/// Presence of each primitive-typed position of a first-order value, in
/// left-to-right order, read off an element of its fibre.
pub fn prim_presence(ty: &Ty, v: &Value, d: &FibreDesc, e: &LatticeElem) -> Vec<bool> {
    let mut out = Vec::new();
    presence(ty, v, d, e, &mut out);
    out
}

fn presence(ty: &Ty, v: &Value, d: &FibreDesc, e: &LatticeElem, out: &mut Vec<bool>) {
    match (ty, v, d, e) {
        (Ty::Prim(_), ..) => out.push(*e != crate::lattice::bottom(d)),
        (Ty::Sum(a, _), Value::Inl(x), ..) => presence(a, x, d, e, out),
        (Ty::Sum(_, b), Value::Inr(y), ..) => presence(b, y, d, e, out),
        (Ty::Prod(a, b), Value::Pair(x, y), FibreDesc::Prod(ds), LatticeElem::Tuple(es)) => {
            presence(a, x, &ds[0], &es[0], out);
            presence(b, y, &ds[1], &es[1], out);
        }
        (Ty::List(a), Value::List(vs), ..) => {
            let (mut d, mut e) = (d.clone(), e.clone());
            for x in vs.iter() {
                let (FibreDesc::Prod(ds), LatticeElem::Tuple(es)) = (&d, &e) else {
                    panic!("internal error: list fibre is not a right-nested pair")
                };
                presence(a, x, &ds[0], &es[0], out);
                let next = (ds[1].clone(), es[1].clone());
                (d, e) = next;
            }
        }
        _ => {}
    }
}

/// The tag guarding each primitive-typed position of a translated argument
/// tuple, read off a slice of it. Positions are in the order of
/// [`prim_presence`] on the untranslated arguments.
pub fn prim_tags(params: &[(String, Ty)], args: &Value, d: &FibreDesc, e: &LatticeElem) -> Vec<bool> {
    let mut out = Vec::new();
    let (mut v, mut d, mut e) = (args.clone(), d.clone(), e.clone());
    for (i, (_, ty)) in params.iter().enumerate() {
        if i + 1 == params.len() {
            tags(ty, &v, &d, &e, &mut out);
            break;
        }
        let (FibreDesc::Prod(ds), LatticeElem::Tuple(es)) = (&d, &e) else {
            panic!("internal error: argument fibre is not a right-nested tuple")
        };
        let (first, rest) = v.as_pair();
        tags(ty, first, &ds[0], &es[0], &mut out);
        let next = (rest.clone(), ds[1].clone(), es[1].clone());
        (v, d, e) = next;
    }
    out
}

fn tags(ty: &Ty, v: &Value, d: &FibreDesc, e: &LatticeElem, out: &mut Vec<bool>) {
    let (FibreDesc::Prod(ds), LatticeElem::Tuple(es)) = (d, e) else {
        panic!("internal error: tagged value without a tag fibre")
    };
    let tag = es[0] == LatticeElem::Top;
    let (pd, pe, pv) = (&ds[1], &es[1], v.as_pair().1);
    match (ty, pv) {
        (Ty::Prim(_), _) => out.push(tag),
        (Ty::Sum(a, _), Value::Inl(x)) => tags(a, x, pd, pe, out),
        (Ty::Sum(_, b), Value::Inr(y)) => tags(b, y, pd, pe, out),
        (Ty::Prod(a, b), Value::Pair(x, y)) => {
            let (FibreDesc::Prod(ds), LatticeElem::Tuple(es)) = (pd, pe) else { unreachable!() };
            tags(a, x, &ds[0], &es[0], out);
            tags(b, y, &ds[1], &es[1], out);
        }
        (Ty::List(a), Value::List(vs)) => {
            let (mut d, mut e) = (pd.clone(), pe.clone());
            for x in vs.iter() {
                let (FibreDesc::Prod(ds), LatticeElem::Tuple(es)) = (&d, &e) else { unreachable!() };
                tags(a, x, &ds[0], &es[0], out);
                let next = (ds[1].clone(), es[1].clone());
                (d, e) = next;
            }
        }
        _ => {}
    }
}
