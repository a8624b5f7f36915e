use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Types of the object language.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ty {
    Prim(Arc<str>),
    Unit,
    Sum(Box<Ty>, Box<Ty>),
    Prod(Box<Ty>, Box<Ty>),
    Arrow(Box<Ty>, Box<Ty>),
    List(Box<Ty>),
}

impl Ty {
    pub fn prim(name: &str) -> Ty {
        Ty::Prim(Arc::from(name))
    }

    pub fn sum(a: Ty, b: Ty) -> Ty {
        Ty::Sum(Box::new(a), Box::new(b))
    }

    pub fn prod(a: Ty, b: Ty) -> Ty {
        Ty::Prod(Box::new(a), Box::new(b))
    }

    pub fn arrow(a: Ty, b: Ty) -> Ty {
        Ty::Arrow(Box::new(a), Box::new(b))
    }

    pub fn list(a: Ty) -> Ty {
        Ty::List(Box::new(a))
    }

    /// Built from primitives, unit, sums, products and lists of such.
    pub fn is_first_order(&self) -> bool {
        match self {
            Ty::Prim(_) | Ty::Unit => true,
            Ty::Sum(a, b) | Ty::Prod(a, b) => a.is_first_order() && b.is_first_order(),
            Ty::Arrow(..) => false,
            Ty::List(a) => a.is_first_order(),
        }
    }

    /// Right-nested product of `tys`, ending in the last component; unit when empty.
    pub fn tuple(tys: &[Ty]) -> Ty {
        match tys {
            [] => Ty::Unit,
            [t] => t.clone(),
            [t, rest @ ..] => Ty::prod(t.clone(), Ty::tuple(rest)),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Ty::Arrow(..) => 0,
            Ty::Sum(..) => 1,
            Ty::Prod(..) => 2,
            Ty::List(_) => 3,
            Ty::Prim(_) | Ty::Unit => 4,
        }
    }
}

struct At<'a>(&'a Ty, u8);

impl fmt::Display for At<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.prec() < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// All binary type formers associate to the right, like tuples.
impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Prim(n) => write!(f, "{n}"),
            Ty::Unit => write!(f, "1"),
            Ty::Sum(a, b) => write!(f, "{} + {}", At(a, 2), At(b, 1)),
            Ty::Prod(a, b) => write!(f, "{} * {}", At(a, 3), At(b, 2)),
            Ty::Arrow(a, b) => write!(f, "{} -> {}", At(a, 1), At(b, 0)),
            Ty::List(a) => write!(f, "list {}", At(a, 4)),
        }
    }
}

/// Primitive types and operation arities of a signature.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub prim_types: Vec<String>,
    pub ops: BTreeMap<String, (Vec<Ty>, Ty)>,
}

impl Signature {
    pub fn has_prim(&self, name: &str) -> bool {
        self.prim_types.iter().any(|p| p == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_order_examples() {
        let num = Ty::prim("num");
        assert!(Ty::sum(num.clone(), Ty::Unit).is_first_order());
        assert!(!Ty::arrow(Ty::Unit, Ty::Unit).is_first_order());
        let label = Ty::sum(Ty::Unit, Ty::Unit);
        assert!(Ty::list(Ty::prod(label, num.clone())).is_first_order());
        assert!(!Ty::list(Ty::arrow(num.clone(), num)).is_first_order());
    }

    #[test]
    fn display_parenthesises_by_precedence() {
        let num = Ty::prim("num");
        let t = Ty::arrow(Ty::arrow(num.clone(), num.clone()), Ty::list(Ty::prod(Ty::sum(Ty::Unit, Ty::Unit), num.clone())));
        assert_eq!(t.to_string(), "(num -> num) -> list ((1 + 1) * num)");
        assert_eq!(Ty::prod(Ty::prod(num.clone(), num.clone()), num.clone()).to_string(), "(num * num) * num");
        assert_eq!(Ty::prod(num.clone(), Ty::prod(num.clone(), num)).to_string(), "num * num * num");
    }
}
