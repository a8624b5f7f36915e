use std::fmt;
use std::sync::Arc;

use super::{FunJoin, FunMeet, JoinTangent, MeetTangent, Tangent, Value};
use crate::lattice::{self, FibreDesc};

/// Primitive objects: a set of values with a first-order fibre at each.
#[derive(Clone, Debug, PartialEq)]
pub enum PrimObj {
    /// The same fibre at every value (`Fixed(One)` is the discrete object).
    Fixed { name: Arc<str>, fibre: FibreDesc },
    /// Rationals approximated by intervals around each point.
    Interval,
}

impl PrimObj {
    pub fn fibre_at(&self, v: &Value) -> FibreDesc {
        match self {
            PrimObj::Fixed { fibre, .. } => fibre.clone(),
            PrimObj::Interval => FibreDesc::IntervalAt(v.as_num().clone()),
        }
    }
}

/// Objects of the family category: a set of values and, at each value, a
/// pair of meet/join fibres. Meet and join sides coincide at first-order
/// objects; they diverge only under `Arrow`.
#[derive(Clone, Debug, PartialEq)]
pub enum Obj {
    Unit,
    Prim(PrimObj),
    Sum(Arc<Obj>, Arc<Obj>),
    Prod(Arc<Obj>, Arc<Obj>),
    Arrow(Arc<Obj>, Arc<Obj>),
    List(Arc<Obj>),
    /// Same points as the inner object, each fibre with a new bottom.
    Lift(Arc<Obj>),
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obj::Unit => write!(f, "1"),
            Obj::Prim(PrimObj::Fixed { name, .. }) => write!(f, "{name}"),
            Obj::Prim(PrimObj::Interval) => write!(f, "R_intv"),
            Obj::Sum(a, b) => write!(f, "({a} + {b})"),
            Obj::Prod(a, b) => write!(f, "({a} * {b})"),
            Obj::Arrow(a, b) => write!(f, "({a} => {b})"),
            Obj::List(a) => write!(f, "List({a})"),
            Obj::Lift(a) => write!(f, "Lift({a})"),
        }
    }
}

fn list_tail(v: &Value) -> &[Value] {
    match v {
        Value::List(vs) => vs,
        other => panic!("internal type error: expected a list, found {other}"),
    }
}

impl Obj {
    pub fn prod(a: Obj, b: Obj) -> Obj {
        Obj::Prod(Arc::new(a), Arc::new(b))
    }

    pub fn sum(a: Obj, b: Obj) -> Obj {
        Obj::Sum(Arc::new(a), Arc::new(b))
    }

    pub fn arrow(a: Obj, b: Obj) -> Obj {
        Obj::Arrow(Arc::new(a), Arc::new(b))
    }

    pub fn list(a: Obj) -> Obj {
        Obj::List(Arc::new(a))
    }

    pub fn lift(a: Obj) -> Obj {
        Obj::Lift(Arc::new(a))
    }

    /// True when no `Arrow` occurs inside.
    pub fn is_first_order(&self) -> bool {
        match self {
            Obj::Unit | Obj::Prim(_) => true,
            Obj::Sum(a, b) | Obj::Prod(a, b) => a.is_first_order() && b.is_first_order(),
            Obj::Arrow(..) => false,
            Obj::List(a) | Obj::Lift(a) => a.is_first_order(),
        }
    }

    /// The first-order fibre at `v`; `None` when a function value is reached.
    pub fn fibre_at(&self, v: &Value) -> Option<FibreDesc> {
        Some(match (self, v) {
            (Obj::Unit, _) => FibreDesc::One,
            (Obj::Prim(p), v) => p.fibre_at(v),
            (Obj::Sum(a, _), Value::Inl(x)) => a.fibre_at(x)?,
            (Obj::Sum(_, b), Value::Inr(y)) => b.fibre_at(y)?,
            (Obj::Prod(a, b), Value::Pair(x, y)) => FibreDesc::Prod(vec![a.fibre_at(x)?, b.fibre_at(y)?]),
            (Obj::List(e), Value::List(vs)) => {
                let mut acc = FibreDesc::One;
                for v in vs.iter().rev() {
                    acc = FibreDesc::Prod(vec![e.fibre_at(v)?, acc]);
                }
                acc
            }
            (Obj::Lift(a), v) => FibreDesc::lifted(a.fibre_at(v)?),
            (Obj::Arrow(..), _) => return None,
            (o, v) => panic!("internal type error: value {v} is not a point of {o}"),
        })
    }

    fn prim_fibre(p: &PrimObj, v: &Value) -> FibreDesc {
        p.fibre_at(v)
    }

    /// Greatest meet-side tangent at `v`.
    pub fn top(&self, v: &Value) -> MeetTangent {
        match (self, v) {
            (Obj::Unit, _) => Tangent::Unit,
            (Obj::Prim(p), v) => Tangent::from_elem(&lattice::top(&Self::prim_fibre(p, v))),
            (Obj::Sum(a, _), Value::Inl(x)) => a.top(x),
            (Obj::Sum(_, b), Value::Inr(y)) => b.top(y),
            (Obj::Prod(a, b), Value::Pair(x, y)) => Tangent::pair(a.top(x), b.top(y)),
            (Obj::List(e), v) => list_build(list_tail(v), &mut |x| e.top(x)),
            (Obj::Lift(a), v) => Tangent::up(a.top(v)),
            (Obj::Arrow(_, cod), Value::Closure(cl)) => {
                let (cod, cl) = (cod.clone(), cl.clone());
                Tangent::Fun(FunMeet::new(move |x| cod.top(&cl.apply(x))))
            }
            (o, v) => panic!("internal type error: value {v} is not a point of {o}"),
        }
    }

    /// Least join-side tangent at `v`.
    pub fn bottom(&self, v: &Value) -> JoinTangent {
        match (self, v) {
            (Obj::Unit, _) => Tangent::Unit,
            (Obj::Prim(p), v) => Tangent::from_elem(&lattice::bottom(&Self::prim_fibre(p, v))),
            (Obj::Sum(a, _), Value::Inl(x)) => a.bottom(x),
            (Obj::Sum(_, b), Value::Inr(y)) => b.bottom(y),
            (Obj::Prod(a, b), Value::Pair(x, y)) => Tangent::pair(a.bottom(x), b.bottom(y)),
            (Obj::List(e), v) => list_build(list_tail(v), &mut |x| e.bottom(x)),
            (Obj::Lift(_), _) => Tangent::Bot,
            (Obj::Arrow(..), _) => Tangent::Fun(FunJoin::default()),
            (o, v) => panic!("internal type error: value {v} is not a point of {o}"),
        }
    }

    /// Meet of two meet-side tangents at `v`. Function tangents meet pointwise.
    pub fn meet(&self, v: &Value, a: &MeetTangent, b: &MeetTangent) -> MeetTangent {
        match (self, v) {
            (Obj::Unit, _) => Tangent::Unit,
            (Obj::Prim(p), v) => {
                Tangent::from_elem(&lattice::meet_unchecked(&Self::prim_fibre(p, v), &a.elem(), &b.elem()))
            }
            (Obj::Sum(l, _), Value::Inl(x)) => l.meet(x, a, b),
            (Obj::Sum(_, r), Value::Inr(y)) => r.meet(y, a, b),
            (Obj::Prod(l, r), Value::Pair(x, y)) => {
                let ((a1, a2), (b1, b2)) = (a.as_pair(), b.as_pair());
                Tangent::pair(l.meet(x, a1, b1), r.meet(y, a2, b2))
            }
            (Obj::List(e), v) => list_zip(list_tail(v), a, b, &mut |x, s, t| e.meet(x, s, t)),
            (Obj::Lift(inner), v) => match (a, b) {
                (Tangent::Up(s), Tangent::Up(t)) => Tangent::up(inner.meet(v, s, t)),
                _ => Tangent::Bot,
            },
            (Obj::Arrow(_, cod), Value::Closure(cl)) => match (a, b) {
                (Tangent::Fun(f), Tangent::Fun(g)) => {
                    let (cod, cl, f, g) = (cod.clone(), cl.clone(), f.clone(), g.clone());
                    Tangent::Fun(FunMeet::new(move |x| cod.meet(&cl.apply(x), &f.at(x), &g.at(x))))
                }
                _ => panic!("internal error: non-function tangent at function type"),
            },
            (o, v) => panic!("internal type error: value {v} is not a point of {o}"),
        }
    }

    /// Join of two join-side tangents at `v`. Function tangents concatenate;
    /// see [`Obj::normalize`].
    pub fn join(&self, v: &Value, a: &JoinTangent, b: &JoinTangent) -> JoinTangent {
        match (self, v) {
            (Obj::Unit, _) => Tangent::Unit,
            (Obj::Prim(p), v) => {
                Tangent::from_elem(&lattice::join_unchecked(&Self::prim_fibre(p, v), &a.elem(), &b.elem()))
            }
            (Obj::Sum(l, _), Value::Inl(x)) => l.join(x, a, b),
            (Obj::Sum(_, r), Value::Inr(y)) => r.join(y, a, b),
            (Obj::Prod(l, r), Value::Pair(x, y)) => {
                let ((a1, a2), (b1, b2)) = (a.as_pair(), b.as_pair());
                Tangent::pair(l.join(x, a1, b1), r.join(y, a2, b2))
            }
            (Obj::List(e), v) => list_zip(list_tail(v), a, b, &mut |x, s, t| e.join(x, s, t)),
            (Obj::Lift(inner), v) => match (a, b) {
                (Tangent::Up(s), Tangent::Up(t)) => Tangent::up(inner.join(v, s, t)),
                (Tangent::Bot, t) | (t, Tangent::Bot) => t.clone(),
                _ => panic!("internal error: malformed lifted tangent"),
            },
            (Obj::Arrow(..), _) => match (a, b) {
                (Tangent::Fun(f), Tangent::Fun(g)) => {
                    let mut entries = f.0.clone();
                    entries.extend(g.0.iter().cloned());
                    Tangent::Fun(FunJoin(entries))
                }
                _ => panic!("internal error: non-function tangent at function type"),
            },
            (o, v) => panic!("internal type error: value {v} is not a point of {o}"),
        }
    }

    /// Normal form of a join-side tangent: in every formal join, entries at
    /// equal first-order arguments are merged by joining their tangents.
    /// Entries at higher-order arguments are left as they are.
    pub fn normalize(&self, v: &Value, t: &JoinTangent) -> JoinTangent {
        match (self, v) {
            (Obj::Unit | Obj::Prim(_), _) => t.clone(),
            (Obj::Sum(l, _), Value::Inl(x)) => l.normalize(x, t),
            (Obj::Sum(_, r), Value::Inr(y)) => r.normalize(y, t),
            (Obj::Prod(l, r), Value::Pair(x, y)) => {
                let (a, b) = t.as_pair();
                Tangent::pair(l.normalize(x, a), r.normalize(y, b))
            }
            (Obj::List(e), v) => list_map(list_tail(v), t, &mut |x, s| e.normalize(x, s)),
            (Obj::Lift(inner), v) => match t {
                Tangent::Up(s) => Tangent::up(inner.normalize(v, s)),
                other => other.clone(),
            },
            (Obj::Arrow(_, cod), Value::Closure(cl)) => {
                let Tangent::Fun(FunJoin(entries)) = t else {
                    panic!("internal error: non-function tangent at function type")
                };
                let mut merged: Vec<(Value, JoinTangent)> = Vec::new();
                for (x, dy) in entries {
                    let slot = merged.iter_mut().find(|(y, _)| x.first_order_eq(y) == Some(true));
                    match slot {
                        Some((_, acc)) => *acc = cod.join(&cl.apply(x), acc, dy),
                        None => merged.push((x.clone(), dy.clone())),
                    }
                }
                let mut out: Vec<(Value, JoinTangent)> = merged
                    .into_iter()
                    .map(|(x, dy)| {
                        let y = cl.apply(&x);
                        let dy = cod.normalize(&y, &dy);
                        (x, dy)
                    })
                    .collect();
                // canonical order for first-order arguments
                if out.iter().all(|(x, _)| x.is_first_order()) {
                    out.sort_by_key(|(x, _)| x.to_string());
                }
                Tangent::Fun(FunJoin(out))
            }
            (o, v) => panic!("internal type error: value {v} is not a point of {o}"),
        }
    }
}

fn list_build<F: Clone>(vs: &[Value], f: &mut dyn FnMut(&Value) -> Tangent<F>) -> Tangent<F> {
    let mut acc = Tangent::Unit;
    for v in vs.iter().rev() {
        acc = Tangent::pair(f(v), acc);
    }
    acc
}

type ZipItem<'a, F> = dyn FnMut(&Value, &Tangent<F>, &Tangent<F>) -> Tangent<F> + 'a;

fn list_zip<F: Clone>(
    vs: &[Value],
    a: &Tangent<F>,
    b: &Tangent<F>,
    f: &mut ZipItem<'_, F>,
) -> Tangent<F> {
    match vs.split_first() {
        None => Tangent::Unit,
        Some((v, rest)) => {
            let ((a1, a2), (b1, b2)) = (a.as_pair(), b.as_pair());
            Tangent::pair(f(v, a1, b1), list_zip(rest, a2, b2, f))
        }
    }
}

fn list_map<F: Clone>(vs: &[Value], t: &Tangent<F>, f: &mut dyn FnMut(&Value, &Tangent<F>) -> Tangent<F>) -> Tangent<F> {
    match vs.split_first() {
        None => Tangent::Unit,
        Some((v, rest)) => {
            let (h, tl) = t.as_pair();
            Tangent::pair(f(v, h), list_map(rest, tl, f))
        }
    }
}
