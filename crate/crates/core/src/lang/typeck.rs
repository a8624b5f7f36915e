//! Bidirectional typechecking. Lambdas without annotations, injections and
//! `nil` are only checked against a known type; everything else synthesizes.

use std::sync::Arc;

use super::{Program, Signature, Span, Term, TermKind, Ty};
use crate::Error;

/// Typing context, outermost binding first.
pub type Ctx = Arc<Vec<(String, Ty)>>;

/// A term annotated at every node with its type and context.
#[derive(Debug, Clone)]
pub struct Typed {
    pub kind: TypedKind,
    pub ty: Ty,
    pub ctx: Ctx,
    pub span: Span,
}

/// Compares structure and types, ignoring positions.
impl PartialEq for Typed {
    fn eq(&self, other: &Typed) -> bool {
        self.kind == other.kind && self.ty == other.ty
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TypedKind {
    /// `index` counts bindings from the innermost, starting at 0.
    Var { name: String, index: usize },
    PrimApp(String, Vec<Typed>),
    Inl(Box<Typed>),
    Inr(Box<Typed>),
    Case { scrut: Box<Typed>, x: String, left: Box<Typed>, y: String, right: Box<Typed> },
    Unit,
    Pair(Box<Typed>, Box<Typed>),
    Fst(Box<Typed>),
    Snd(Box<Typed>),
    Fun { param: String, param_ty: Ty, body: Box<Typed> },
    App(Box<Typed>, Box<Typed>),
    Nil,
    Cons(Box<Typed>, Box<Typed>),
    Fold { nil: Box<Typed>, x: String, y: String, step: Box<Typed>, target: Box<Typed> },
}

fn err<T>(span: Span, msg: impl Into<String>) -> Result<T, Error> {
    Err(Error::Type { span, msg: msg.into() })
}

fn extend(ctx: &Ctx, binds: &[(&str, &Ty)]) -> Ctx {
    let mut v = (**ctx).clone();
    v.extend(binds.iter().map(|(x, t)| (x.to_string(), (*t).clone())));
    Arc::new(v)
}

struct Checker<'a> {
    sig: &'a Signature,
}

impl Checker<'_> {
    fn node(&self, kind: TypedKind, ty: Ty, ctx: &Ctx, span: Span) -> Typed {
        Typed { kind, ty, ctx: ctx.clone(), span }
    }

    fn check(&self, t: &Term, ctx: &Ctx, want: &Ty) -> Result<Typed, Error> {
        let span = t.span;
        let node = |kind| Ok(self.node(kind, want.clone(), ctx, span));
        match (&t.kind, want) {
            (TermKind::Inl(a), Ty::Sum(l, _)) => node(TypedKind::Inl(Box::new(self.check(a, ctx, l)?))),
            (TermKind::Inr(b), Ty::Sum(_, r)) => node(TypedKind::Inr(Box::new(self.check(b, ctx, r)?))),
            (TermKind::Inl(_) | TermKind::Inr(_), _) => {
                err(span, format!("type mismatch: expected {want}, found an injection into a sum"))
            }
            (TermKind::Pair(a, b), Ty::Prod(l, r)) => {
                node(TypedKind::Pair(Box::new(self.check(a, ctx, l)?), Box::new(self.check(b, ctx, r)?)))
            }
            (TermKind::Fun { param, ann, body }, Ty::Arrow(a, b)) => {
                if let Some(ann) = ann {
                    if ann != &**a {
                        return err(span, format!("type mismatch: expected parameter type {a}, found {ann}"));
                    }
                }
                let inner = extend(ctx, &[(param, a)]);
                let body = self.check(body, &inner, b)?;
                node(TypedKind::Fun { param: param.clone(), param_ty: (**a).clone(), body: Box::new(body) })
            }
            (TermKind::Fun { .. }, _) => err(span, format!("type mismatch: expected {want}, found a function")),
            (TermKind::Nil, Ty::List(_)) => node(TypedKind::Nil),
            (TermKind::Nil, _) => err(span, format!("type mismatch: expected {want}, found a list")),
            (TermKind::Cons(h, tl), Ty::List(a)) => {
                node(TypedKind::Cons(Box::new(self.check(h, ctx, a)?), Box::new(self.check(tl, ctx, want)?)))
            }
            (TermKind::Case { scrut, x, left, y, right }, _) => {
                let scrut = self.synth(scrut, ctx)?;
                let Ty::Sum(a, b) = scrut.ty.clone() else {
                    return err(scrut.span, format!("expected sum, found {}", scrut.ty));
                };
                let left = self.check(left, &extend(ctx, &[(x, &a)]), want)?;
                let right = self.check(right, &extend(ctx, &[(y, &b)]), want)?;
                node(TypedKind::Case {
                    scrut: Box::new(scrut),
                    x: x.clone(),
                    left: Box::new(left),
                    y: y.clone(),
                    right: Box::new(right),
                })
            }
            (TermKind::Fold { nil, x, y, step, target }, _) => self.fold(nil, x, y, step, target, ctx, span, Some(want)),
            (TermKind::Ann(inner, ann), _) => {
                let inner = self.check(inner, ctx, ann)?;
                if ann != want {
                    return err(span, format!("type mismatch: expected {want}, found {ann}"));
                }
                Ok(inner)
            }
            _ => {
                let got = self.synth(t, ctx)?;
                if &got.ty != want {
                    return err(span, format!("type mismatch: expected {want}, found {}", got.ty));
                }
                Ok(got)
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn fold(
        &self,
        nil: &Term,
        x: &str,
        y: &str,
        step: &Term,
        target: &Term,
        ctx: &Ctx,
        span: Span,
        want: Option<&Ty>,
    ) -> Result<Typed, Error> {
        let target = self.synth(target, ctx)?;
        let Ty::List(elem) = target.ty.clone() else {
            return err(target.span, format!("expected list, found {}", target.ty));
        };
        let nil = match want {
            Some(w) => self.check(nil, ctx, w)?,
            None => self.synth(nil, ctx)?,
        };
        let acc = nil.ty.clone();
        let step = self.check(step, &extend(ctx, &[(x, &elem), (y, &acc)]), &acc)?;
        Ok(self.node(
            TypedKind::Fold {
                nil: Box::new(nil),
                x: x.to_string(),
                y: y.to_string(),
                step: Box::new(step),
                target: Box::new(target),
            },
            acc,
            ctx,
            span,
        ))
    }

    fn synth(&self, t: &Term, ctx: &Ctx) -> Result<Typed, Error> {
        let span = t.span;
        let node = |kind, ty| Ok(self.node(kind, ty, ctx, span));
        match &t.kind {
            TermKind::Var(name) => match ctx.iter().rev().position(|(x, _)| x == name) {
                Some(index) => {
                    let ty = ctx[ctx.len() - 1 - index].1.clone();
                    node(TypedKind::Var { name: name.clone(), index }, ty)
                }
                None => err(span, format!("unbound variable `{name}`")),
            },
            TermKind::PrimApp(op, args) => {
                let Some((arg_tys, res)) = self.sig.ops.get(op) else {
                    return err(span, format!("unknown primitive `{op}`"));
                };
                if arg_tys.len() != args.len() {
                    return err(
                        span,
                        format!("arity error: `{op}` takes {} argument(s), given {}", arg_tys.len(), args.len()),
                    );
                }
                let args = args.iter().zip(arg_tys).map(|(a, t)| self.check(a, ctx, t)).collect::<Result<_, _>>()?;
                node(TypedKind::PrimApp(op.clone(), args), res.clone())
            }
            TermKind::Unit => node(TypedKind::Unit, Ty::Unit),
            TermKind::Pair(a, b) => {
                let (a, b) = (self.synth(a, ctx)?, self.synth(b, ctx)?);
                let ty = Ty::prod(a.ty.clone(), b.ty.clone());
                node(TypedKind::Pair(Box::new(a), Box::new(b)), ty)
            }
            TermKind::Fst(p) | TermKind::Snd(p) => {
                let p = self.synth(p, ctx)?;
                let Ty::Prod(a, b) = p.ty.clone() else {
                    return err(span, format!("expected product, found {}", p.ty));
                };
                match &t.kind {
                    TermKind::Fst(_) => node(TypedKind::Fst(Box::new(p)), *a),
                    _ => node(TypedKind::Snd(Box::new(p)), *b),
                }
            }
            TermKind::Fun { param, ann: Some(a), body } => {
                let body = self.synth(body, &extend(ctx, &[(param, a)]))?;
                let ty = Ty::arrow(a.clone(), body.ty.clone());
                node(TypedKind::Fun { param: param.clone(), param_ty: a.clone(), body: Box::new(body) }, ty)
            }
            TermKind::Fun { ann: None, .. } => {
                err(span, "cannot infer the type of an unannotated lambda; write `\\(x : T). t` or annotate")
            }
            TermKind::App(f, a) => {
                let f = self.synth(f, ctx)?;
                let Ty::Arrow(dom, cod) = f.ty.clone() else {
                    return err(span, format!("expected function, found {}", f.ty));
                };
                let a = self.check(a, ctx, &dom)?;
                node(TypedKind::App(Box::new(f), Box::new(a)), *cod)
            }
            TermKind::Cons(h, tl) => {
                let h = self.synth(h, ctx)?;
                let ty = Ty::list(h.ty.clone());
                let tl = self.check(tl, ctx, &ty)?;
                node(TypedKind::Cons(Box::new(h), Box::new(tl)), ty)
            }
            TermKind::Nil | TermKind::Inl(_) | TermKind::Inr(_) => {
                err(span, "cannot infer the type of this term; add an annotation `(t : T)`")
            }
            TermKind::Case { scrut, x, left, y, right } => {
                let s = self.synth(scrut, ctx)?;
                let Ty::Sum(a, b) = s.ty.clone() else {
                    return err(s.span, format!("expected sum, found {}", s.ty));
                };
                let (lctx, rctx) = (extend(ctx, &[(x, &a)]), extend(ctx, &[(y, &b)]));
                let (l, r) = match self.synth(left, &lctx) {
                    Ok(l) => {
                        let r = self.check(right, &rctx, &l.ty)?;
                        (l, r)
                    }
                    Err(e) => {
                        let r = self.synth(right, &rctx).map_err(|_| e)?;
                        (self.check(left, &lctx, &r.ty)?, r)
                    }
                };
                let ty = l.ty.clone();
                node(
                    TypedKind::Case { scrut: Box::new(s), x: x.clone(), left: Box::new(l), y: y.clone(), right: Box::new(r) },
                    ty,
                )
            }
            TermKind::Fold { nil, x, y, step, target } => self.fold(nil, x, y, step, target, ctx, span, None),
            TermKind::Ann(inner, ann) => self.check(inner, ctx, ann),
        }
    }
}

/// Typechecks `t` in `ctx`, against `expected` when given.
pub fn typecheck(t: &Term, sig: &Signature, ctx: &[(String, Ty)], expected: Option<&Ty>) -> Result<Typed, Error> {
    let c = Checker { sig };
    let ctx = Arc::new(ctx.to_vec());
    match expected {
        Some(ty) => c.check(t, &ctx, ty),
        None => c.synth(t, &ctx),
    }
}

/// Checks a program body against its declared result type.
pub fn typecheck_program(p: &Program, sig: &Signature) -> Result<Typed, Error> {
    typecheck(&p.body, sig, &p.params, Some(&p.result))
}
