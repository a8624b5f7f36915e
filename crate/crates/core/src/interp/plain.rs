//! Ordinary set-theoretic evaluation, written independently of the morphism
//! algebra so that the two can be compared.

use std::rc::Rc;

use crate::fam::{Prim, Value};
use crate::lang::{Typed, TypedKind};
use crate::prims::APPROX_POINT;
use crate::rational::Rational;
use crate::Error;

#[derive(Clone)]
enum V {
    Unit,
    Num(Rational),
    Sym(Rc<str>),
    Bool(bool),
    Pair(Rc<V>, Rc<V>),
    Inl(Rc<V>),
    Inr(Rc<V>),
    List(Rc<Vec<V>>),
    Fun(Rc<Env>, Rc<Typed>),
}

/// Innermost binding last.
type Env = Vec<V>;

fn from_value(v: &Value) -> V {
    match v {
        Value::Unit => V::Unit,
        Value::Prim(Prim::Num(r)) => V::Num(r.clone()),
        Value::Prim(Prim::Bool(b)) => V::Bool(*b),
        Value::Prim(Prim::Sym(s)) => V::Sym(Rc::from(&**s)),
        Value::Pair(a, b) => V::Pair(Rc::new(from_value(a)), Rc::new(from_value(b))),
        Value::Inl(a) => V::Inl(Rc::new(from_value(a))),
        Value::Inr(b) => V::Inr(Rc::new(from_value(b))),
        Value::List(vs) => V::List(Rc::new(vs.iter().map(from_value).collect())),
        Value::Closure(_) => panic!("plain evaluation takes first-order inputs only"),
    }
}

fn to_value(v: &V) -> Option<Value> {
    Some(match v {
        V::Unit => Value::Unit,
        V::Num(r) => Value::num(r.clone()),
        V::Bool(b) => Value::boolean(*b),
        V::Sym(s) => Value::sym(s),
        V::Pair(a, b) => Value::pair(to_value(a)?, to_value(b)?),
        V::Inl(a) => Value::inl(to_value(a)?),
        V::Inr(b) => Value::inr(to_value(b)?),
        V::List(vs) => Value::List(vs.iter().map(to_value).collect::<Option<_>>()?),
        V::Fun(..) => return None,
    })
}

fn num(v: &V) -> &Rational {
    match v {
        V::Num(r) => r,
        _ => panic!("internal type error: expected a number"),
    }
}

fn prim(op: &str, args: &[V]) -> V {
    match (op, args) {
        ("zero", []) => V::Num(Rational::from_integer(0.into())),
        ("add", [a, b]) => V::Num(num(a) + num(b)),
        ("neg", [a]) => V::Num(-num(a)),
        ("top", []) | ("and", [_, _]) => V::Sym(Rc::from(APPROX_POINT)),
        _ => panic!("no plain semantics for primitive `{op}` with {} argument(s)", args.len()),
    }
}

fn eval(t: &Typed, env: &mut Env) -> V {
    match &t.kind {
        TypedKind::Var { index, .. } => env[env.len() - 1 - index].clone(),
        TypedKind::PrimApp(op, args) => {
            let args: Vec<V> = args.iter().map(|a| eval(a, env)).collect();
            prim(op, &args)
        }
        TypedKind::Inl(a) => V::Inl(Rc::new(eval(a, env))),
        TypedKind::Inr(b) => V::Inr(Rc::new(eval(b, env))),
        TypedKind::Case { scrut, left, right, .. } => {
            let (branch, v) = match eval(scrut, env) {
                V::Inl(v) => (left, v),
                V::Inr(v) => (right, v),
                _ => panic!("internal type error: case on a non-sum"),
            };
            env.push((*v).clone());
            let r = eval(branch, env);
            env.pop();
            r
        }
        TypedKind::Unit => V::Unit,
        TypedKind::Pair(a, b) => V::Pair(Rc::new(eval(a, env)), Rc::new(eval(b, env))),
        TypedKind::Fst(p) | TypedKind::Snd(p) => match eval(p, env) {
            V::Pair(a, b) => {
                if matches!(t.kind, TypedKind::Fst(_)) {
                    (*a).clone()
                } else {
                    (*b).clone()
                }
            }
            _ => panic!("internal type error: projection from a non-pair"),
        },
        TypedKind::Fun { body, .. } => V::Fun(Rc::new(env.clone()), Rc::new((**body).clone())),
        TypedKind::App(f, a) => {
            let f = eval(f, env);
            let a = eval(a, env);
            call(&f, a)
        }
        TypedKind::Nil => V::List(Rc::new(Vec::new())),
        TypedKind::Cons(h, tl) => {
            let h = eval(h, env);
            let V::List(vs) = eval(tl, env) else { panic!("internal type error: cons onto a non-list") };
            let mut out = Vec::with_capacity(vs.len() + 1);
            out.push(h);
            out.extend(vs.iter().cloned());
            V::List(Rc::new(out))
        }
        TypedKind::Fold { nil, step, target, .. } => {
            let V::List(vs) = eval(target, env) else { panic!("internal type error: fold over a non-list") };
            let mut acc = eval(nil, env);
            for v in vs.iter().rev() {
                env.push(v.clone());
                env.push(acc);
                acc = eval(step, env);
                env.pop();
                env.pop();
            }
            acc
        }
    }
}

fn call(f: &V, a: V) -> V {
    match f {
        V::Fun(closure_env, body) => {
            let mut env = (**closure_env).clone();
            env.push(a);
            eval(body, &mut env)
        }
        _ => panic!("internal type error: applying a non-function"),
    }
}

/// Evaluates `t` in the environment `env`, given as the left-nested pairs
/// `((((), x1), x2), …)` of its context. Fails when the result contains a
/// function.
pub fn eval_plain(t: &Typed, env: &Value) -> Result<Value, Error> {
    let mut vals = Vec::with_capacity(t.ctx.len());
    let mut cur = env;
    for _ in 0..t.ctx.len() {
        let (rest, v) = cur.as_pair();
        vals.push(from_value(v));
        cur = rest;
    }
    vals.reverse();
    let v = eval(t, &mut vals);
    to_value(&v).ok_or_else(|| Error::HigherOrder("plain results", t.ty.to_string()))
}
