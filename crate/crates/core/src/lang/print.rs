//! Pretty-printing of typed terms back to concrete syntax.
//!
//! Lambdas, injections and `nil` carry their types, so printed output
//! typechecks on its own and parses back to the same typed tree.

use std::fmt::Write;

use super::{Ty, Typed, TypedKind};

const EXPR: u8 = 0;
const APP: u8 = 1;
const ATOM: u8 = 2;

fn level(t: &Typed) -> u8 {
    match &t.kind {
        TypedKind::Case { .. } | TypedKind::Fun { .. } | TypedKind::Cons(..) => EXPR,
        TypedKind::Fst(_) | TypedKind::Snd(_) | TypedKind::App(..) | TypedKind::Fold { .. } => APP,
        _ => ATOM,
    }
}

fn at(out: &mut String, t: &Typed, need: u8) {
    if level(t) < need {
        out.push('(');
        go(out, t);
        out.push(')');
    } else {
        go(out, t);
    }
}

fn go(out: &mut String, t: &Typed) {
    match &t.kind {
        TypedKind::Var { name, .. } => out.push_str(name),
        TypedKind::PrimApp(op, args) => {
            out.push_str(op);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                go(out, a);
            }
            out.push(')');
        }
        TypedKind::Inl(a) | TypedKind::Inr(a) => {
            let kw = if matches!(t.kind, TypedKind::Inl(_)) { "inl" } else { "inr" };
            write!(out, "({kw} ").unwrap();
            at(out, a, ATOM);
            write!(out, " : {})", t.ty).unwrap();
        }
        TypedKind::Case { scrut, x, left, y, right } => {
            out.push_str("case ");
            at(out, scrut, APP);
            write!(out, " of inl {x} -> ").unwrap();
            at(out, left, APP);
            write!(out, " | inr {y} -> ").unwrap();
            go(out, right);
        }
        TypedKind::Unit => out.push_str("()"),
        TypedKind::Pair(a, b) => {
            out.push('(');
            go(out, a);
            out.push_str(", ");
            go(out, b);
            out.push(')');
        }
        TypedKind::Fst(a) | TypedKind::Snd(a) => {
            out.push_str(if matches!(t.kind, TypedKind::Fst(_)) { "fst " } else { "snd " });
            at(out, a, ATOM);
        }
        TypedKind::Fun { param, param_ty, body } => {
            write!(out, "\\({param} : {param_ty}). ").unwrap();
            go(out, body);
        }
        TypedKind::App(f, a) => {
            at(out, f, APP);
            out.push(' ');
            at(out, a, ATOM);
        }
        TypedKind::Nil => write!(out, "(nil : {})", t.ty).unwrap(),
        TypedKind::Cons(h, tl) => {
            at(out, h, APP);
            out.push_str(" :: ");
            go(out, tl);
        }
        TypedKind::Fold { nil, x, y, step, target } => {
            out.push_str("fold ");
            at(out, nil, ATOM);
            write!(out, " ({x} {y}. ").unwrap();
            go(out, step);
            out.push_str(") ");
            at(out, target, ATOM);
        }
    }
}

/// Concrete syntax for a typed term.
pub fn print_term(t: &Typed) -> String {
    let mut out = String::new();
    go(&mut out, t);
    out
}

/// Concrete syntax for a whole program with the given parameters and body.
pub fn print_program(params: &[(String, Ty)], body: &Typed) -> String {
    let mut out = String::from("main");
    for (x, ty) in params {
        write!(out, " ({x} : {ty})").unwrap();
    }
    writeln!(out, " : {} =", body.ty).unwrap();
    writeln!(out, "  {}", print_term(body)).unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parser::{parse_program, parse_term};
    use crate::lang::typeck::{typecheck, typecheck_program};
    use crate::lang::Signature;
    use std::collections::BTreeMap;

    fn sig() -> Signature {
        let num = Ty::prim("num");
        let mut ops = BTreeMap::new();
        ops.insert("zero".to_string(), (vec![], num.clone()));
        ops.insert("add".to_string(), (vec![num.clone(), num.clone()], num));
        Signature { prim_types: vec!["num".into()], ops }
    }

    fn roundtrip(src: &str, ctx: &[(&str, Ty)], want: Option<&Ty>) {
        let names: Vec<&str> = ctx.iter().map(|(x, _)| *x).collect();
        let ctx: Vec<(String, Ty)> = ctx.iter().map(|(x, t)| (x.to_string(), t.clone())).collect();
        let t1 = typecheck(&parse_term(src, &sig(), &names).unwrap(), &sig(), &ctx, want).unwrap();
        let printed = print_term(&t1);
        let t2 = typecheck(&parse_term(&printed, &sig(), &names).unwrap(), &sig(), &ctx, None)
            .unwrap_or_else(|e| panic!("{printed}: {e}"));
        assert_eq!(t1, t2, "{printed}");
        assert_eq!(print_term(&t2), printed);
    }

    #[test]
    fn nested_cases_and_lambdas_roundtrip() {
        let l = Ty::sum(Ty::Unit, Ty::Unit);
        let num = Ty::prim("num");
        roundtrip(
            "case s of inl u -> (case s of inl v -> zero() | inr v -> zero()) | inr u -> (\\(x : num). x) zero()",
            &[("s", l.clone())],
            Some(&num),
        );
        roundtrip("fst (fst p) :: snd p :: nil", &[("p", Ty::prod(Ty::prod(num.clone(), l), num.clone()))], None);
        roundtrip(
            "(fold (\\(y : num). y) (x k. \\y. k (add(x, y))) xs) zero()",
            &[("xs", Ty::list(num.clone()))],
            None,
        );
        roundtrip("(inl (), (nil, inr zero()))", &[], Some(&Ty::prod(
            Ty::sum(Ty::Unit, Ty::Unit),
            Ty::prod(Ty::list(num.clone()), Ty::sum(Ty::Unit, num)),
        )));
    }

    #[test]
    fn programs_roundtrip() {
        let src = "type L = 1 + 1;\nmain (l : L) (xs : list (L * num)) : num =\n  fold zero() (r acc. add(snd r, acc)) xs";
        let p = parse_program(src, &sig()).unwrap();
        let t = typecheck_program(&p, &sig()).unwrap();
        let printed = print_program(&p.params, &t);
        assert!(printed.starts_with("main (l : 1 + 1) (xs : list ((1 + 1) * num)) : num ="), "{printed}");
        let p2 = parse_program(&printed, &sig()).unwrap();
        assert_eq!(typecheck_program(&p2, &sig()).unwrap(), t);
    }
}
