use std::fmt;
use std::sync::Arc;

use super::{Morphism, Obj};
use crate::rational::{self, Rational};

/// Primitive payloads.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Prim {
    Num(Rational),
    Bool(bool),
    Sym(Arc<str>),
}

/// Points of objects: the set component of the Fam construction.
#[derive(Clone)]
pub enum Value {
    Unit,
    Prim(Prim),
    Pair(Arc<Value>, Arc<Value>),
    Inl(Arc<Value>),
    Inr(Arc<Value>),
    List(Arc<[Value]>),
    Closure(Closure),
}

/// A function value: a morphism `Γ × X → Y` together with its captured `γ`.
///
/// Applying it, and pushing or pulling tangents at an argument, all run the
/// body at the point `(γ, x)`.
#[derive(Clone)]
pub struct Closure(Arc<ClosureData>);

struct ClosureData {
    env: Value,
    env_obj: Obj,
    body: Morphism,
}

impl Closure {
    pub(crate) fn new(env: Value, env_obj: Obj, body: Morphism) -> Self {
        Closure(Arc::new(ClosureData { env, env_obj, body }))
    }

    fn at(&self, x: &Value) -> Value {
        Value::pair(self.0.env.clone(), x.clone())
    }

    pub fn apply(&self, x: &Value) -> Value {
        self.0.body.apply(&self.at(x))
    }

    /// Pushes an argument tangent with the environment held at ⊤.
    pub fn fwd_at(&self, x: &Value, dx: &super::MeetTangent) -> super::MeetTangent {
        let env_top = self.0.env_obj.top(&self.0.env);
        self.0.body.fwd(&self.at(x), &super::Tangent::pair(env_top, dx.clone()))
    }

    /// [`Closure::apply`] and [`Closure::fwd_at`] in one pass.
    pub fn push_at(&self, x: &Value, dx: &super::MeetTangent) -> (Value, super::MeetTangent) {
        let env_top = self.0.env_obj.top(&self.0.env);
        self.0.body.push(&self.at(x), &super::Tangent::pair(env_top, dx.clone()))
    }

    /// Pulls an output tangent back to the argument, discarding the environment part.
    pub fn bwd_at(&self, x: &Value, dy: &super::JoinTangent) -> super::JoinTangent {
        self.0.body.bwd(&self.at(x), dy).into_pair().1
    }

    pub fn ptr_eq(&self, other: &Closure) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Value {
    pub fn num(r: Rational) -> Self {
        Value::Prim(Prim::Num(r))
    }

    pub fn int(n: i64) -> Self {
        Value::num(rational::int(n))
    }

    pub fn boolean(b: bool) -> Self {
        Value::Prim(Prim::Bool(b))
    }

    pub fn sym(s: &str) -> Self {
        Value::Prim(Prim::Sym(Arc::from(s)))
    }

    pub fn pair(a: Value, b: Value) -> Self {
        Value::Pair(Arc::new(a), Arc::new(b))
    }

    pub fn inl(a: Value) -> Self {
        Value::Inl(Arc::new(a))
    }

    pub fn inr(a: Value) -> Self {
        Value::Inr(Arc::new(a))
    }

    pub fn list(items: Vec<Value>) -> Self {
        Value::List(items.into())
    }

    /// # Panics
    /// When the value is not a pair.
    pub fn as_pair(&self) -> (&Value, &Value) {
        match self {
            Value::Pair(a, b) => (a, b),
            other => panic!("internal type error: expected a pair, found {other}"),
        }
    }

    pub fn as_num(&self) -> &Rational {
        match self {
            Value::Prim(Prim::Num(r)) => r,
            other => panic!("internal type error: expected a number, found {other}"),
        }
    }

    pub fn as_closure(&self) -> &Closure {
        match self {
            Value::Closure(c) => c,
            other => panic!("internal type error: applying a non-closure {other}"),
        }
    }

    pub fn is_first_order(&self) -> bool {
        match self {
            Value::Unit | Value::Prim(_) => true,
            Value::Pair(a, b) => a.is_first_order() && b.is_first_order(),
            Value::Inl(a) | Value::Inr(a) => a.is_first_order(),
            Value::List(vs) => vs.iter().all(Value::is_first_order),
            Value::Closure(_) => false,
        }
    }

    /// Structural equality; `None` when a closure is reached on both sides
    /// of the comparison.
    pub fn first_order_eq(&self, other: &Value) -> Option<bool> {
        match (self, other) {
            (Value::Unit, Value::Unit) => Some(true),
            (Value::Prim(a), Value::Prim(b)) => Some(a == b),
            (Value::Pair(a1, b1), Value::Pair(a2, b2)) => match a1.first_order_eq(a2)? {
                false => Some(false),
                true => b1.first_order_eq(b2),
            },
            (Value::Inl(a), Value::Inl(b)) | (Value::Inr(a), Value::Inr(b)) => a.first_order_eq(b),
            (Value::List(xs), Value::List(ys)) => {
                if xs.len() != ys.len() {
                    return Some(false);
                }
                for (x, y) in xs.iter().zip(ys.iter()) {
                    if !x.first_order_eq(y)? {
                        return Some(false);
                    }
                }
                Some(true)
            }
            (Value::Closure(_), Value::Closure(_)) => None,
            _ => Some(false),
        }
    }
}

/// Closures compare by identity; everything else structurally.
impl PartialEq for Value {
    fn eq(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Closure(a), Value::Closure(b)) => a.ptr_eq(b),
            (Value::Unit, Value::Unit) => true,
            (Value::Prim(a), Value::Prim(b)) => a == b,
            (Value::Pair(a1, b1), Value::Pair(a2, b2)) => a1 == a2 && b1 == b2,
            (Value::Inl(a), Value::Inl(b)) | (Value::Inr(a), Value::Inr(b)) => a == b,
            (Value::List(xs), Value::List(ys)) => xs == ys,
            _ => false,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Unit => write!(f, "()"),
            Value::Prim(Prim::Num(r)) => write!(f, "{}", rational::format(r)),
            Value::Prim(Prim::Bool(true)) => write!(f, "tt"),
            Value::Prim(Prim::Bool(false)) => write!(f, "ff"),
            Value::Prim(Prim::Sym(s)) => write!(f, "{s}"),
            Value::Pair(a, b) => write!(f, "({a}, {b})"),
            Value::Inl(a) => write!(f, "inl {}", Paren(a)),
            Value::Inr(a) => write!(f, "inr {}", Paren(a)),
            Value::List(vs) => {
                write!(f, "[")?;
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "]")
            }
            Value::Closure(_) => write!(f, "<closure>"),
        }
    }
}

struct Paren<'a>(&'a Value);

impl fmt::Display for Paren<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Value::Inl(_) | Value::Inr(_) => write!(f, "({})", self.0),
            Value::Prim(Prim::Num(r)) if rational::is_negative(r) => write!(f, "({})", self.0),
            v => write!(f, "{v}"),
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
