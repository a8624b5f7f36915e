//! First-order fibres: the bounded lattice of approximations attached to a
//! single value, its elements, and the lattice operations on them.

mod fin;
pub mod literal;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::rational::{self, Rational};

pub use fin::FinLattice;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("element {elem} does not conform to fibre {fibre}")]
    Nonconforming { fibre: String, elem: String },
    #[error("fibre not enumerable: {0}")]
    NotEnumerable(String),
    #[error("invalid finite lattice: {0}")]
    InvalidFin(String),
    #[error("slice literal: {0}")]
    Literal(String),
}

/// Description of a bounded lattice of approximations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FibreDesc {
    /// The one-element lattice.
    One,
    /// `{⊥ ⊑ ⊤}`.
    Two,
    /// The inner lattice with a fresh bottom adjoined.
    Lifted(Box<FibreDesc>),
    /// Pointwise product. `Prod([])` is identified with `One`.
    Prod(Vec<FibreDesc>),
    /// Intervals `[l,u]` with `l ≤ point ≤ u` ordered by reverse inclusion, plus a bottom.
    IntervalAt(Rational),
    /// An explicit finite lattice.
    Fin(Arc<FinLattice>),
}

/// A closed interval with exact endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        Self { lo, hi }
    }

    pub fn point(x: &Rational) -> Self {
        Self { lo: x.clone(), hi: x.clone() }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::new(rational::min(&self.lo, &other.lo), rational::max(&self.hi, &other.hi))
    }

    /// Intersection; callers guarantee a common point.
    pub fn intersect(&self, other: &Interval) -> Interval {
        Interval::new(rational::max(&self.lo, &other.lo), rational::min(&self.hi, &other.hi))
    }

    /// Reverse inclusion: `self ⊑ other` iff `other ⊆ self`.
    pub fn below(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", rational::format(&self.lo), rational::format(&self.hi))
    }
}

/// An element of some fibre.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LatticeElem {
    Unit,
    Bot,
    Top,
    Up(Box<LatticeElem>),
    Tuple(Vec<LatticeElem>),
    Interval(Interval),
    Fin(usize),
}

impl LatticeElem {
    pub fn up(inner: LatticeElem) -> Self {
        LatticeElem::Up(Box::new(inner))
    }

    pub fn pair(a: LatticeElem, b: LatticeElem) -> Self {
        LatticeElem::Tuple(vec![a, b])
    }

    pub fn interval(lo: Rational, hi: Rational) -> Self {
        LatticeElem::Interval(Interval::new(lo, hi))
    }
}

impl fmt::Display for LatticeElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeElem::Unit => write!(f, "()"),
            LatticeElem::Bot => write!(f, "_"),
            LatticeElem::Top => write!(f, "^"),
            LatticeElem::Up(a) => write!(f, "up({a})"),
            LatticeElem::Tuple(es) => {
                write!(f, "(")?;
                for (i, e) in es.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, ")")
            }
            LatticeElem::Interval(iv) => write!(f, "{iv}"),
            LatticeElem::Fin(id) => write!(f, "#{id}"),
        }
    }
}

impl fmt::Display for FibreDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FibreDesc::One => write!(f, "1"),
            FibreDesc::Two => write!(f, "2"),
            FibreDesc::Lifted(d) => write!(f, "L({d})"),
            FibreDesc::Prod(ds) if ds.is_empty() => write!(f, "1"),
            FibreDesc::Prod(ds) => {
                write!(f, "(")?;
                for (i, d) in ds.iter().enumerate() {
                    if i > 0 {
                        write!(f, " * ")?;
                    }
                    write!(f, "{d}")?;
                }
                write!(f, ")")
            }
            FibreDesc::IntervalAt(x) => write!(f, "I({})", rational::format(x)),
            FibreDesc::Fin(l) => write!(f, "Fin({})", l.len()),
        }
    }
}

impl FibreDesc {
    pub fn lifted(inner: FibreDesc) -> Self {
        FibreDesc::Lifted(Box::new(inner))
    }

    /// Product constructor; the empty product is `One`.
    pub fn prod(components: Vec<FibreDesc>) -> Self {
        if components.is_empty() {
            FibreDesc::One
        } else {
            FibreDesc::Prod(components)
        }
    }

    fn is_one(&self) -> bool {
        matches!(self, FibreDesc::One) || matches!(self, FibreDesc::Prod(ds) if ds.is_empty())
    }

    /// Number of elements, or `None` when an interval fibre occurs inside.
    pub fn size(&self) -> Option<u128> {
        match self {
            FibreDesc::One => Some(1),
            FibreDesc::Two => Some(2),
            FibreDesc::Lifted(d) => d.size().map(|n| n + 1),
            FibreDesc::Prod(ds) => ds
                .iter()
                .try_fold(1u128, |acc, d| d.size().and_then(|n| acc.checked_mul(n))),
            FibreDesc::IntervalAt(_) => None,
            FibreDesc::Fin(l) => Some(l.len() as u128),
        }
    }

    pub fn is_enumerable(&self) -> bool {
        match self {
            FibreDesc::IntervalAt(_) => false,
            FibreDesc::Lifted(d) => d.is_enumerable(),
            FibreDesc::Prod(ds) => ds.iter().all(FibreDesc::is_enumerable),
            _ => true,
        }
    }
}

fn nonconforming(d: &FibreDesc, e: &LatticeElem) -> LatticeError {
    LatticeError::Nonconforming { fibre: d.to_string(), elem: e.to_string() }
}

/// Checks that `e` is an element of `d`.
pub fn conforms(d: &FibreDesc, e: &LatticeElem) -> Result<(), LatticeError> {
    let ok = match (d, e) {
        (d, LatticeElem::Unit) if d.is_one() => true,
        (FibreDesc::Prod(ds), LatticeElem::Tuple(es)) if ds.len() == es.len() => {
            for (d, e) in ds.iter().zip(es) {
                conforms(d, e)?;
            }
            true
        }
        (FibreDesc::Two, LatticeElem::Bot | LatticeElem::Top) => true,
        (FibreDesc::Lifted(_), LatticeElem::Bot) => true,
        (FibreDesc::Lifted(inner), LatticeElem::Up(a)) => {
            conforms(inner, a)?;
            true
        }
        (FibreDesc::IntervalAt(_), LatticeElem::Bot) => true,
        (FibreDesc::IntervalAt(x), LatticeElem::Interval(iv)) => iv.contains(x),
        (FibreDesc::Fin(l), LatticeElem::Fin(id)) => *id < l.len(),
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(nonconforming(d, e))
    }
}

pub fn top(d: &FibreDesc) -> LatticeElem {
    match d {
        FibreDesc::One => LatticeElem::Unit,
        FibreDesc::Two => LatticeElem::Top,
        FibreDesc::Lifted(inner) => LatticeElem::up(top(inner)),
        FibreDesc::Prod(ds) if ds.is_empty() => LatticeElem::Unit,
        FibreDesc::Prod(ds) => LatticeElem::Tuple(ds.iter().map(top).collect()),
        FibreDesc::IntervalAt(x) => LatticeElem::Interval(Interval::point(x)),
        FibreDesc::Fin(l) => LatticeElem::Fin(l.top()),
    }
}

pub fn bottom(d: &FibreDesc) -> LatticeElem {
    match d {
        FibreDesc::One => LatticeElem::Unit,
        FibreDesc::Two | FibreDesc::Lifted(_) | FibreDesc::IntervalAt(_) => LatticeElem::Bot,
        FibreDesc::Prod(ds) if ds.is_empty() => LatticeElem::Unit,
        FibreDesc::Prod(ds) => LatticeElem::Tuple(ds.iter().map(bottom).collect()),
        FibreDesc::Fin(l) => LatticeElem::Fin(l.bottom()),
    }
}

pub fn meet(d: &FibreDesc, a: &LatticeElem, b: &LatticeElem) -> Result<LatticeElem, LatticeError> {
    conforms(d, a)?;
    conforms(d, b)?;
    Ok(meet_unchecked(d, a, b))
}

pub fn join(d: &FibreDesc, a: &LatticeElem, b: &LatticeElem) -> Result<LatticeElem, LatticeError> {
    conforms(d, a)?;
    conforms(d, b)?;
    Ok(join_unchecked(d, a, b))
}

pub fn leq(d: &FibreDesc, a: &LatticeElem, b: &LatticeElem) -> Result<bool, LatticeError> {
    conforms(d, a)?;
    conforms(d, b)?;
    Ok(leq_unchecked(d, a, b))
}

fn shape_panic(d: &FibreDesc, a: &LatticeElem, b: &LatticeElem) -> ! {
    panic!("lattice operation on nonconforming elements {a}, {b} in fibre {d}")
}

/// Meet of elements already known to conform.
///
/// # Panics
/// On a shape mismatch.
pub fn meet_unchecked(d: &FibreDesc, a: &LatticeElem, b: &LatticeElem) -> LatticeElem {
    use LatticeElem as E;
    match (d, a, b) {
        (_, E::Unit, E::Unit) => E::Unit,
        (FibreDesc::Two, E::Top, E::Top) => E::Top,
        (FibreDesc::Two, _, _) => E::Bot,
        (FibreDesc::Lifted(inner), E::Up(x), E::Up(y)) => E::up(meet_unchecked(inner, x, y)),
        (FibreDesc::Lifted(_), _, _) => E::Bot,
        (FibreDesc::Prod(ds), E::Tuple(xs), E::Tuple(ys)) if ds.len() == xs.len() && ds.len() == ys.len() => {
            E::Tuple(ds.iter().zip(xs).zip(ys).map(|((d, x), y)| meet_unchecked(d, x, y)).collect())
        }
        (FibreDesc::IntervalAt(_), E::Interval(x), E::Interval(y)) => E::Interval(x.hull(y)),
        (FibreDesc::IntervalAt(_), _, _) => E::Bot,
        (FibreDesc::Fin(l), E::Fin(x), E::Fin(y)) => E::Fin(l.meet(*x, *y)),
        _ => shape_panic(d, a, b),
    }
}

/// Join of elements already known to conform.
///
/// # Panics
/// On a shape mismatch.
pub fn join_unchecked(d: &FibreDesc, a: &LatticeElem, b: &LatticeElem) -> LatticeElem {
    use LatticeElem as E;
    match (d, a, b) {
        (_, E::Unit, E::Unit) => E::Unit,
        (FibreDesc::Two, E::Bot, E::Bot) => E::Bot,
        (FibreDesc::Two, _, _) => E::Top,
        (FibreDesc::Lifted(inner), E::Up(x), E::Up(y)) => E::up(join_unchecked(inner, x, y)),
        (FibreDesc::Lifted(_) | FibreDesc::IntervalAt(_), E::Bot, other)
        | (FibreDesc::Lifted(_) | FibreDesc::IntervalAt(_), other, E::Bot) => other.clone(),
        (FibreDesc::Prod(ds), E::Tuple(xs), E::Tuple(ys)) if ds.len() == xs.len() && ds.len() == ys.len() => {
            E::Tuple(ds.iter().zip(xs).zip(ys).map(|((d, x), y)| join_unchecked(d, x, y)).collect())
        }
        (FibreDesc::IntervalAt(_), E::Interval(x), E::Interval(y)) => E::Interval(x.intersect(y)),
        (FibreDesc::Fin(l), E::Fin(x), E::Fin(y)) => E::Fin(l.join(*x, *y)),
        _ => shape_panic(d, a, b),
    }
}

/// Order test on elements already known to conform.
///
/// # Panics
/// On a shape mismatch.
pub fn leq_unchecked(d: &FibreDesc, a: &LatticeElem, b: &LatticeElem) -> bool {
    use LatticeElem as E;
    match (d, a, b) {
        (_, E::Unit, E::Unit) => true,
        (FibreDesc::Two, E::Bot, _) | (FibreDesc::Two, _, E::Top) => true,
        (FibreDesc::Two, _, _) => false,
        (FibreDesc::Lifted(_) | FibreDesc::IntervalAt(_), E::Bot, _) => true,
        (FibreDesc::Lifted(_) | FibreDesc::IntervalAt(_), _, E::Bot) => false,
        (FibreDesc::Lifted(inner), E::Up(x), E::Up(y)) => leq_unchecked(inner, x, y),
        (FibreDesc::Prod(ds), E::Tuple(xs), E::Tuple(ys)) if ds.len() == xs.len() && ds.len() == ys.len() => {
            ds.iter().zip(xs).zip(ys).all(|((d, x), y)| leq_unchecked(d, x, y))
        }
        (FibreDesc::IntervalAt(_), E::Interval(x), E::Interval(y)) => x.below(y),
        (FibreDesc::Fin(l), E::Fin(x), E::Fin(y)) => l.leq(*x, *y),
        _ => shape_panic(d, a, b),
    }
}

/// All elements of an enumerable fibre, each exactly once, bottom first.
pub fn enumerate(d: &FibreDesc) -> Result<Vec<LatticeElem>, LatticeError> {
    match d {
        FibreDesc::One => Ok(vec![LatticeElem::Unit]),
        FibreDesc::Two => Ok(vec![LatticeElem::Bot, LatticeElem::Top]),
        FibreDesc::Lifted(inner) => {
            let mut out = vec![LatticeElem::Bot];
            out.extend(enumerate(inner)?.into_iter().map(LatticeElem::up));
            Ok(out)
        }
        FibreDesc::Prod(ds) if ds.is_empty() => Ok(vec![LatticeElem::Unit]),
        FibreDesc::Prod(ds) => {
            let mut acc: Vec<Vec<LatticeElem>> = vec![Vec::new()];
            for d in ds {
                let elems = enumerate(d)?;
                acc = acc
                    .into_iter()
                    .flat_map(|prefix| {
                        elems.iter().map(move |e| {
                            let mut next = prefix.clone();
                            next.push(e.clone());
                            next
                        })
                    })
                    .collect();
            }
            Ok(acc.into_iter().map(LatticeElem::Tuple).collect())
        }
        FibreDesc::IntervalAt(_) => Err(LatticeError::NotEnumerable(d.to_string())),
        FibreDesc::Fin(l) => Ok((0..l.len()).map(LatticeElem::Fin).collect()),
    }
}

/// Upper covers of `e` in an enumerable fibre: the elements directly above it.
pub fn upper_covers(d: &FibreDesc, e: &LatticeElem) -> Result<Vec<LatticeElem>, LatticeError> {
    use LatticeElem as E;
    conforms(d, e)?;
    Ok(match (d, e) {
        (FibreDesc::Two, E::Bot) => vec![E::Top],
        (FibreDesc::Lifted(inner), E::Bot) => vec![E::up(bottom(inner))],
        (FibreDesc::Lifted(inner), E::Up(a)) => {
            upper_covers(inner, a)?.into_iter().map(E::up).collect()
        }
        (FibreDesc::Prod(ds), E::Tuple(es)) => {
            let mut out = Vec::new();
            for (i, (d, e)) in ds.iter().zip(es).enumerate() {
                for c in upper_covers(d, e)? {
                    let mut next = es.clone();
                    next[i] = c;
                    out.push(E::Tuple(next));
                }
            }
            out
        }
        (FibreDesc::IntervalAt(_), _) => return Err(LatticeError::NotEnumerable(d.to_string())),
        (FibreDesc::Fin(l), E::Fin(id)) => l.upper_covers(*id).into_iter().map(E::Fin).collect(),
        _ => Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use LatticeElem as E;

    fn two2() -> FibreDesc {
        FibreDesc::Prod(vec![FibreDesc::Two, FibreDesc::Two])
    }

    #[test]
    fn top_examples() {
        assert_eq!(top(&FibreDesc::Two), E::Top);
        assert_eq!(top(&FibreDesc::IntervalAt(int(1))), E::interval(int(1), int(1)));
        assert_eq!(top(&two2()), E::Tuple(vec![E::Top, E::Top]));
    }

    #[test]
    fn bottom_examples() {
        assert_eq!(bottom(&FibreDesc::Two), E::Bot);
        assert_eq!(bottom(&FibreDesc::lifted(two2())), E::Bot);
        assert_eq!(bottom(&FibreDesc::IntervalAt(int(1))), E::Bot);
    }

    #[test]
    fn meet_examples() {
        let m = meet(&two2(), &E::pair(E::Top, E::Bot), &E::pair(E::Bot, E::Top)).unwrap();
        assert_eq!(m, E::pair(E::Bot, E::Bot));
        let d = FibreDesc::IntervalAt(int(1));
        let m = meet(&d, &E::interval(int(0), int(1)), &E::interval(int(1), int(2))).unwrap();
        assert_eq!(m, E::interval(int(0), int(2)));
        for x in enumerate(&FibreDesc::lifted(two2())).unwrap() {
            let d = FibreDesc::lifted(two2());
            assert_eq!(meet(&d, &top(&d), &x).unwrap(), x);
        }
    }

    #[test]
    fn join_examples() {
        assert_eq!(join(&FibreDesc::Two, &E::Bot, &E::Top).unwrap(), E::Top);
        let d = FibreDesc::IntervalAt(int(1));
        let j = join(&d, &E::interval(int(0), int(2)), &E::interval(int(1), int(3))).unwrap();
        assert_eq!(j, E::interval(int(1), int(2)));
        assert_eq!(join(&d, &E::Bot, &E::interval(int(0), int(2))).unwrap(), E::interval(int(0), int(2)));
    }

    #[test]
    fn leq_examples() {
        assert!(leq(&FibreDesc::Two, &E::Bot, &E::Top).unwrap());
        let d = FibreDesc::IntervalAt(int(1));
        assert!(leq(&d, &E::interval(int(0), int(2)), &E::interval(int(1), int(1))).unwrap());
        assert!(!leq(&two2(), &E::pair(E::Top, E::Bot), &E::pair(E::Bot, E::Top)).unwrap());
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate(&FibreDesc::Two).unwrap(), vec![E::Bot, E::Top]);
        assert_eq!(enumerate(&FibreDesc::lifted(FibreDesc::Two)).unwrap().len(), 3);
        let d3 = FibreDesc::Prod(vec![FibreDesc::Two; 3]);
        assert_eq!(enumerate(&d3).unwrap().len(), 8);
        let with_interval = FibreDesc::Prod(vec![FibreDesc::Two, FibreDesc::IntervalAt(int(0))]);
        assert!(matches!(enumerate(&with_interval), Err(LatticeError::NotEnumerable(_))));
    }

    #[test]
    fn nested_lifting_keeps_both_bottoms() {
        let d = FibreDesc::lifted(FibreDesc::lifted(FibreDesc::One));
        let elems = enumerate(&d).unwrap();
        assert_eq!(elems, vec![E::Bot, E::up(E::Bot), E::up(E::up(E::Unit))]);
    }

    #[test]
    fn conformance_errors() {
        let d = FibreDesc::IntervalAt(int(1));
        assert!(conforms(&d, &E::interval(int(2), int(3))).is_err());
        assert!(meet(&FibreDesc::Two, &E::Unit, &E::Top).is_err());
        assert!(conforms(&FibreDesc::Prod(vec![]), &E::Unit).is_ok());
        assert!(conforms(&two2(), &E::Tuple(vec![E::Top])).is_err());
        assert!(conforms(&d, &E::interval(ratio(1, 2), ratio(3, 2))).is_ok());
    }

    #[test]
    fn covers_generate_order() {
        let d = FibreDesc::Prod(vec![FibreDesc::lifted(FibreDesc::Two), FibreDesc::Two]);
        let elems = enumerate(&d).unwrap();
        // reflexive-transitive closure of covers equals leq
        for a in &elems {
            let mut reach = vec![a.clone()];
            let mut i = 0;
            while i < reach.len() {
                for c in upper_covers(&d, &reach[i].clone()).unwrap() {
                    if !reach.contains(&c) {
                        reach.push(c);
                    }
                }
                i += 1;
            }
            for b in &elems {
                assert_eq!(reach.contains(b), leq_unchecked(&d, a, b), "{a} {b}");
            }
        }
    }
}
