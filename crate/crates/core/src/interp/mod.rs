//! Interpretation of typed terms as morphisms, a plain evaluator to compare
//! against, and slice sessions at a single input.

pub mod display;
mod plain;
mod session;

use crate::fam::{self, Morphism, Obj};
use crate::lang::{Ty, Typed, TypedKind};
use crate::prims::SignatureInterp;
use crate::Error;

pub use plain::eval_plain;
pub use session::{args_to_ctx, ctx_to_args, Compiled, SliceSession};

/// The object interpreting a type.
pub fn interp_ty(sig: &SignatureInterp, ty: &Ty) -> Result<Obj, Error> {
    Ok(match ty {
        Ty::Prim(p) => sig.prim_obj(p).cloned().ok_or_else(|| Error::UnknownPrimType(p.to_string()))?,
        Ty::Unit => Obj::Unit,
        Ty::Sum(a, b) => Obj::sum(interp_ty(sig, a)?, interp_ty(sig, b)?),
        Ty::Prod(a, b) => Obj::prod(interp_ty(sig, a)?, interp_ty(sig, b)?),
        Ty::Arrow(a, b) => Obj::arrow(interp_ty(sig, a)?, interp_ty(sig, b)?),
        Ty::List(a) => Obj::list(interp_ty(sig, a)?),
    })
}

/// A context interprets as a left-nested product starting from `1`.
pub fn interp_ctx(sig: &SignatureInterp, ctx: &[(String, Ty)]) -> Result<Obj, Error> {
    ctx.iter().try_fold(Obj::Unit, |acc, (_, ty)| Ok(Obj::prod(acc, interp_ty(sig, ty)?)))
}

struct Interp<'a> {
    sig: &'a SignatureInterp,
}

impl Interp<'_> {
    /// Types in a typechecked term are all known to the signature.
    fn obj(&self, ty: &Ty) -> Obj {
        interp_ty(self.sig, ty).expect("typechecked term mentions an unknown primitive type")
    }

    fn ctx(&self, ctx: &[(String, Ty)]) -> Obj {
        interp_ctx(self.sig, ctx).expect("typechecked context mentions an unknown primitive type")
    }

    fn var(&self, ctx: &[(String, Ty)], index: usize) -> Morphism {
        let n = ctx.len();
        let mut m = fam::identity();
        for k in 0..index {
            m = fam::compose(&fam::proj1(&self.obj(&ctx[n - 1 - k].1)), &m);
        }
        fam::compose(&fam::proj2(&self.ctx(&ctx[..n - 1 - index])), &m)
    }

    fn term(&self, t: &Typed) -> Morphism {
        let gamma = self.ctx(&t.ctx);
        let with_id = |s: &Typed| fam::pair(&fam::identity(), &self.term(s), &gamma);
        match &t.kind {
            TypedKind::Var { index, .. } => self.var(&t.ctx, *index),
            TypedKind::PrimApp(op, args) => {
                let op = self.sig.op(op).expect("typechecked term mentions an unknown primitive");
                let args = match args.as_slice() {
                    [] => fam::terminal(&gamma),
                    [a] => self.term(a),
                    more => {
                        let mut ms: Vec<Morphism> = more.iter().map(|a| self.term(a)).collect();
                        let last = ms.pop().unwrap();
                        ms.into_iter().rev().fold(last, |acc, m| fam::pair(&m, &acc, &gamma))
                    }
                };
                fam::compose(op, &args)
            }
            TypedKind::Inl(a) => fam::compose(&fam::inj1(), &self.term(a)),
            TypedKind::Inr(b) => fam::compose(&fam::inj2(), &self.term(b)),
            TypedKind::Case { scrut, left, right, .. } => {
                fam::compose(&fam::case(&self.term(left), &self.term(right)), &with_id(scrut))
            }
            TypedKind::Unit => fam::terminal(&gamma),
            TypedKind::Pair(a, b) => fam::pair(&self.term(a), &self.term(b), &gamma),
            TypedKind::Fst(p) | TypedKind::Snd(p) => {
                let Ty::Prod(a, b) = &p.ty else { panic!("internal type error: projection from {}", p.ty) };
                let proj = match &t.kind {
                    TypedKind::Fst(_) => fam::proj1(&self.obj(b)),
                    _ => fam::proj2(&self.obj(a)),
                };
                fam::compose(&proj, &self.term(p))
            }
            TypedKind::Fun { param_ty, body, .. } => fam::curry(&self.term(body), &gamma, &self.obj(param_ty)),
            // A redex binds its argument directly: the same morphism as
            // evaluating the closure, without running the body twice.
            TypedKind::App(f, a) if matches!(f.kind, TypedKind::Fun { .. }) => {
                let TypedKind::Fun { body, .. } = &f.kind else { unreachable!() };
                fam::compose(&self.term(body), &with_id(a))
            }
            TypedKind::App(f, a) => {
                fam::compose(&fam::eval(&self.obj(&t.ty)), &fam::pair(&self.term(f), &self.term(a), &gamma))
            }
            TypedKind::Nil => fam::nil(&gamma),
            TypedKind::Cons(h, tl) => fam::compose(&fam::cons(), &fam::pair(&self.term(h), &self.term(tl), &gamma)),
            TypedKind::Fold { nil, step, target, .. } => {
                let Ty::List(elem) = &target.ty else { panic!("internal type error: fold over {}", target.ty) };
                let f = fam::fold(&self.term(nil), &self.term(step), &gamma, &self.obj(elem));
                fam::compose(&f, &with_id(target))
            }
        }
    }
}

/// The morphism `⟦Γ⟧ → ⟦τ⟧` of a typechecked term `Γ ⊢ t : τ`.
pub fn interp_term(t: &Typed, sig: &SignatureInterp) -> Morphism {
    Interp { sig }.term(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fam::Value;
    use crate::lang::{parse_term, typecheck};
    use crate::lattice::FibreDesc;
    use crate::prims::builtin_signature;

    #[test]
    fn lift_num_fibres() {
        let sig = builtin_signature("lift-num").unwrap();
        let num = interp_ty(&sig, &Ty::prim("num")).unwrap();
        assert_eq!(num.fibre_at(&Value::int(7)), Some(FibreDesc::lifted(FibreDesc::One)));
        let disc = builtin_signature("disc-num").unwrap();
        let pair = interp_ty(&disc, &Ty::prod(Ty::prim("num"), Ty::prim("num"))).unwrap();
        assert_eq!(
            pair.fibre_at(&Value::pair(Value::int(1), Value::int(2))),
            Some(FibreDesc::Prod(vec![FibreDesc::One, FibreDesc::One]))
        );
        assert!(matches!(interp_ty(&disc, &Ty::prim("real")), Err(Error::UnknownPrimType(_))));
    }

    #[test]
    fn identity_lambda_is_a_closure() {
        let sig = builtin_signature("lift-num").unwrap();
        let num = Ty::prim("num");
        let t = parse_term("\\x. x", &sig.sig, &[]).unwrap();
        let tt = typecheck(&t, &sig.sig, &[], Some(&Ty::arrow(num.clone(), num))).unwrap();
        let m = interp_term(&tt, &sig);
        let f = m.apply(&Value::Unit);
        assert_eq!(f.as_closure().apply(&Value::int(5)), Value::int(5));
    }

    #[test]
    fn variables_project_from_nested_context() {
        let sig = builtin_signature("disc-num").unwrap();
        let num = Ty::prim("num");
        let ctx = vec![("a".to_string(), num.clone()), ("b".to_string(), Ty::Unit), ("c".to_string(), num.clone())];
        let t = parse_term("(a, c)", &sig.sig, &["a", "b", "c"]).unwrap();
        let tt = typecheck(&t, &sig.sig, &ctx, None).unwrap();
        let env = Value::pair(Value::pair(Value::pair(Value::Unit, Value::int(1)), Value::Unit), Value::int(3));
        assert_eq!(interp_term(&tt, &sig).apply(&env), Value::pair(Value::int(1), Value::int(3)));
    }
}
