use std::fmt;
use std::sync::Arc;

use super::Value;
use crate::lattice::{Interval, LatticeElem};

/// Tangents on either side of the fibre pair. First-order structure is shared;
/// the two sides differ only in how a function tangent is represented.
#[derive(Clone, Debug)]
pub enum Tangent<F> {
    Unit,
    Bot,
    Top,
    Up(Arc<Tangent<F>>),
    Tuple(Arc<[Tangent<F>]>),
    Interval(Interval),
    Fin(usize),
    Fun(F),
}

/// Meet-semilattice side: tangents pushed forward.
pub type MeetTangent = Tangent<FunMeet>;

/// Join-semilattice side: tangents pulled backward.
pub type JoinTangent = Tangent<FunJoin>;

/// A function tangent on the meet side: an element of the pointwise product
/// over all arguments, kept as a closure.
#[derive(Clone)]
pub struct FunMeet(Arc<dyn Fn(&Value) -> MeetTangent + Send + Sync>);

impl FunMeet {
    pub fn new(f: impl Fn(&Value) -> MeetTangent + Send + Sync + 'static) -> Self {
        FunMeet(Arc::new(f))
    }

    pub fn at(&self, x: &Value) -> MeetTangent {
        (self.0)(x)
    }
}

impl fmt::Debug for FunMeet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<fun-meet>")
    }
}

/// A function tangent on the join side: a finite formal join of
/// (argument, output tangent) entries. The empty list is bottom.
#[derive(Clone, Debug, Default)]
pub struct FunJoin(pub Vec<(Value, JoinTangent)>);

impl<F: Clone> Tangent<F> {
    pub fn tuple(items: Vec<Tangent<F>>) -> Self {
        Tangent::Tuple(items.into())
    }

    pub fn pair(a: Tangent<F>, b: Tangent<F>) -> Self {
        Tangent::Tuple(Arc::new([a, b]))
    }

    pub fn up(a: Tangent<F>) -> Self {
        Tangent::Up(Arc::new(a))
    }

    /// # Panics
    /// When the tangent is not a binary tuple.
    pub fn into_pair(self) -> (Tangent<F>, Tangent<F>) {
        match self {
            Tangent::Tuple(v) if v.len() == 2 => (v[0].clone(), v[1].clone()),
            other => panic!("internal error: expected a pair tangent, found {}", other.describe()),
        }
    }

    /// # Panics
    /// When the tangent is not a binary tuple.
    pub fn as_pair(&self) -> (&Tangent<F>, &Tangent<F>) {
        match self {
            Tangent::Tuple(v) if v.len() == 2 => (&v[0], &v[1]),
            other => panic!("internal error: expected a pair tangent, found {}", other.describe()),
        }
    }

    fn describe(&self) -> &'static str {
        match self {
            Tangent::Unit => "unit",
            Tangent::Bot => "bottom",
            Tangent::Top => "top",
            Tangent::Up(_) => "up",
            Tangent::Tuple(_) => "tuple",
            Tangent::Interval(_) => "interval",
            Tangent::Fin(_) => "fin",
            Tangent::Fun(_) => "function tangent",
        }
    }

    pub fn from_elem(e: &LatticeElem) -> Self {
        match e {
            LatticeElem::Unit => Tangent::Unit,
            LatticeElem::Bot => Tangent::Bot,
            LatticeElem::Top => Tangent::Top,
            LatticeElem::Up(a) => Tangent::up(Self::from_elem(a)),
            LatticeElem::Tuple(es) => Tangent::Tuple(es.iter().map(Self::from_elem).collect()),
            LatticeElem::Interval(iv) => Tangent::Interval(iv.clone()),
            LatticeElem::Fin(id) => Tangent::Fin(*id),
        }
    }

    /// The first-order element, or `None` if a function tangent occurs inside.
    pub fn to_elem(&self) -> Option<LatticeElem> {
        Some(match self {
            Tangent::Unit => LatticeElem::Unit,
            Tangent::Bot => LatticeElem::Bot,
            Tangent::Top => LatticeElem::Top,
            Tangent::Up(a) => LatticeElem::up(a.to_elem()?),
            Tangent::Tuple(ts) => LatticeElem::Tuple(ts.iter().map(Tangent::to_elem).collect::<Option<_>>()?),
            Tangent::Interval(iv) => LatticeElem::Interval(iv.clone()),
            Tangent::Fin(id) => LatticeElem::Fin(*id),
            Tangent::Fun(_) => return None,
        })
    }

    /// Like [`Tangent::to_elem`] but panics on function tangents.
    pub fn elem(&self) -> LatticeElem {
        self.to_elem()
            .unwrap_or_else(|| panic!("internal error: function tangent where a first-order one was expected"))
    }
}
