//! Primitive objects and operations: discrete sets, the lifting monad, the
//! approximation object with its monoid, and interval-approximated numbers.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::fam::{self, JoinTangent, MeetTangent, Morphism, Obj, PrimObj, Tangent, Value};
use crate::lang::{Signature, Ty};
use crate::lattice::{FibreDesc, Interval};
use crate::rational::{self, Rational};
use crate::Error;

/// Names accepted by [`builtin_signature`].
pub const SIGNATURES: [&str; 4] = ["disc-num", "lift-num", "interval-num", "cbn-num"];

/// The value carried by the approximation object.
pub const APPROX_POINT: &str = "*";

/// A set with the trivial fibre everywhere.
pub fn disc_obj(name: &str) -> Obj {
    Obj::Prim(PrimObj::Fixed { name: name.into(), fibre: FibreDesc::One })
}

/// A plain function between discrete objects. Only the domain's trivial
/// tangent needs describing; the codomain fibre is `𝟙`.
pub fn disc_op(dom: &Obj, f: impl Fn(&Value) -> Value + Send + Sync + 'static) -> Morphism {
    let dom = dom.clone();
    Morphism::new(f, |_, _| Tangent::Unit, move |x, _| dom.bottom(x))
}

pub fn lift_obj(o: &Obj) -> Obj {
    Obj::lift(o.clone())
}

/// Unit of the lifting monad, `X → L X`.
pub fn eta_lift(inner: &Obj) -> Morphism {
    let inner = inner.clone();
    Morphism::new(
        |x| x.clone(),
        |_, t| Tangent::up(t.clone()),
        move |x, t| match t {
            Tangent::Up(a) => (**a).clone(),
            _ => inner.bottom(x),
        },
    )
}

/// Kleisli extension with a context: from `f : Γ × X → L Y` builds
/// `Γ × L X → L Y`. An absent scrutinee forces an absent result, and any
/// demand on the result demands the scrutinee.
pub fn bind_lift(f: &Morphism, gamma: &Obj) -> Morphism {
    let (f1, f2, f3) = (f.clone(), f.clone(), f.clone());
    let gamma = gamma.clone();
    Morphism::new(
        move |x| f1.apply(x),
        move |x, t| {
            let (dg, dx) = t.as_pair();
            match dx {
                Tangent::Up(dx) => f2.fwd(x, &Tangent::pair(dg.clone(), (**dx).clone())),
                _ => Tangent::Bot,
            }
        },
        move |x, t| match t {
            Tangent::Bot => Tangent::pair(gamma.bottom(x.as_pair().0), Tangent::Bot),
            dy => {
                let (dg, dx) = f3.bwd(x, dy).into_pair();
                Tangent::pair(dg, Tangent::up(dx))
            }
        },
    )
}

/// `A × B → B × A`.
pub fn swap(a: &Obj, b: &Obj) -> Morphism {
    fam::pair(&fam::proj2(a), &fam::proj1(b), &Obj::prod(a.clone(), b.clone()))
}

/// `Γ × Disc(bool) → Y`, running `then` or `otherwise` at `γ`. The discrete
/// condition carries no approximation.
pub fn if_bool(then: &Morphism, otherwise: &Morphism) -> Morphism {
    fn pick(x: &Value) -> (bool, &Value) {
        let (g, c) = x.as_pair();
        match c {
            Value::Prim(fam::Prim::Bool(b)) => (*b, g),
            other => panic!("internal type error: condition {other} is not a boolean"),
        }
    }
    let (t1, e1) = (then.clone(), otherwise.clone());
    let (t2, e2) = (then.clone(), otherwise.clone());
    let (t3, e3) = (then.clone(), otherwise.clone());
    Morphism::new(
        move |x| match pick(x) {
            (true, g) => t1.apply(g),
            (false, g) => e1.apply(g),
        },
        move |x, t| {
            let dg = t.as_pair().0;
            match pick(x) {
                (true, g) => t2.fwd(g, dg),
                (false, g) => e2.fwd(g, dg),
            }
        },
        move |x, t| {
            let dg = match pick(x) {
                (true, g) => t3.bwd(g, t),
                (false, g) => e3.bwd(g, t),
            };
            Tangent::pair(dg, Tangent::Unit)
        },
    )
}

/// A strict binary operation on lifted discrete values, through two binds:
/// `let a ⇐ x in let b ⇐ y in η(op(a, b))`.
pub fn lift_binary(carrier: &Obj, op: impl Fn(&Value, &Value) -> Value + Send + Sync + 'static) -> Morphism {
    let disc_pair = Obj::prod(carrier.clone(), carrier.clone());
    let lifted = lift_obj(carrier);
    let k = fam::compose(
        &eta_lift(carrier),
        &disc_op(&disc_pair, move |p| {
            let (a, b) = p.as_pair();
            op(a, b)
        }),
    );
    // inner: carrier × L carrier → L carrier, binding the second argument
    let inner = bind_lift(&k, carrier);
    // outer: L carrier × carrier → L carrier, with the first argument bound last
    let outer = bind_lift(&fam::compose(&inner, &swap(&lifted, carrier)), &lifted);
    fam::compose(&outer, &swap(&lifted, &lifted))
}

/// A unary operation on a lifted discrete value.
pub fn lift_unary(carrier: &Obj, op: impl Fn(&Value) -> Value + Send + Sync + 'static) -> Morphism {
    let k = fam::compose(&eta_lift(carrier), &fam::compose(&disc_op(carrier, op), &fam::proj2(&Obj::Unit)));
    let lifted = lift_obj(carrier);
    fam::compose(&bind_lift(&k, &Obj::Unit), &fam::pair(&fam::terminal(&lifted), &fam::identity(), &lifted))
}

/// A constant of a lifted discrete object, `1 → L X`.
pub fn lift_const(carrier: &Obj, v: Value) -> Morphism {
    fam::compose(&eta_lift(carrier), &disc_op(&Obj::Unit, move |_| v.clone()))
}

pub fn bool_obj() -> Obj {
    disc_obj("bool")
}

/// Or on lifted booleans, strict in both arguments.
pub fn strict_or() -> Morphism {
    lift_binary(&bool_obj(), |a, b| Value::boolean(as_bool(a) || as_bool(b)))
}

/// `let b ⇐ x in if b then η(tt) else y`: the second argument is only
/// demanded when the first is false.
pub fn short_circuit_or() -> Morphism {
    let lb = lift_obj(&bool_obj());
    let yes = fam::compose(&lift_const(&bool_obj(), Value::boolean(true)), &fam::terminal(&lb));
    let body = if_bool(&yes, &fam::identity());
    fam::compose(&bind_lift(&body, &lb), &swap(&lb, &lb))
}

fn as_bool(v: &Value) -> bool {
    match v {
        Value::Prim(fam::Prim::Bool(b)) => *b,
        other => panic!("internal type error: expected a boolean, found {other}"),
    }
}

/// The object with a single point and fibre `𝟚`.
pub fn approx_obj() -> Obj {
    Obj::Prim(PrimObj::Fixed { name: "approx".into(), fibre: FibreDesc::Two })
}

pub fn approx_point() -> Value {
    Value::sym(APPROX_POINT)
}

/// Monoid multiplication `𝔸 × 𝔸 → 𝔸`: meet forward, duplicate backward.
pub fn and_op() -> Morphism {
    Morphism::new(
        |_| approx_point(),
        |_, t| {
            let (a, b) = t.as_pair();
            match (a, b) {
                (Tangent::Top, Tangent::Top) => Tangent::Top,
                _ => Tangent::Bot,
            }
        },
        |_, t| Tangent::pair(t.clone(), t.clone()),
    )
}

/// Monoid unit `1 → 𝔸`.
pub fn top_op() -> Morphism {
    Morphism::new(|_| approx_point(), |_, _| Tangent::Top, |_, _| Tangent::Unit)
}

pub fn interval_obj() -> Obj {
    Obj::Prim(PrimObj::Interval)
}

fn iv<F>(t: &Tangent<F>) -> Option<&Interval> {
    match t {
        Tangent::Interval(i) => Some(i),
        Tangent::Bot => None,
        _ => panic!("internal error: expected an interval tangent"),
    }
}

fn interval<F>(lo: Rational, hi: Rational) -> Tangent<F> {
    Tangent::Interval(Interval::new(lo, hi))
}

/// Interval addition at `(x1, x2)`.
pub fn add_i() -> Morphism {
    Morphism::new(
        |p| {
            let (a, b) = p.as_pair();
            Value::num(a.as_num() + b.as_num())
        },
        |p, t| {
            let (x1, x2) = p.as_pair();
            let (x1, x2) = (x1.as_num(), x2.as_num());
            let (d1, d2) = t.as_pair();
            match (iv(d1), iv(d2)) {
                (Some(a), Some(b)) => interval(
                    rational::min(&(&a.lo + x2), &(&b.lo + x1)),
                    rational::max(&(&a.hi + x2), &(&b.hi + x1)),
                ),
                _ => Tangent::Bot,
            }
        },
        |p, t| {
            let (x1, x2) = p.as_pair();
            let (x1, x2) = (x1.as_num(), x2.as_num());
            match iv(t) {
                Some(c) => Tangent::pair(interval(&c.lo - x2, &c.hi - x2), interval(&c.lo - x1, &c.hi - x1)),
                None => Tangent::pair(Tangent::Bot, Tangent::Bot),
            }
        },
    )
}

fn neg_tangent<F>(t: &Tangent<F>) -> Tangent<F> {
    match iv(t) {
        Some(c) => interval(-&c.hi, -&c.lo),
        None => Tangent::Bot,
    }
}

/// Interval negation; its own adjoint.
pub fn neg_i() -> Morphism {
    Morphism::new(|x| Value::num(-x.as_num()), |_, t| neg_tangent(t), |_, t| neg_tangent(t))
}

/// Multiplication by a constant `r`. Negative `r` swaps bounds; `r = 0`
/// sends everything forward to `[0,0]` and backward to `⊥`.
pub fn scale_i(r: Rational) -> Morphism {
    let (r1, r2, r3) = (r.clone(), r.clone(), r);
    Morphism::new(
        move |x| Value::num(&r1 * x.as_num()),
        move |_, t: &MeetTangent| {
            if r2.is_zero() {
                return interval(Rational::zero(), Rational::zero());
            }
            match iv(t) {
                Some(c) if r2.is_negative() => interval(&r2 * &c.hi, &r2 * &c.lo),
                Some(c) => interval(&r2 * &c.lo, &r2 * &c.hi),
                None => Tangent::Bot,
            }
        },
        move |_, t: &JoinTangent| match iv(t) {
            _ if r3.is_zero() => Tangent::Bot,
            Some(c) if r3.is_negative() => interval(&c.hi / &r3, &c.lo / &r3),
            Some(c) => interval(&c.lo / &r3, &c.hi / &r3),
            None => Tangent::Bot,
        },
    )
}

/// `1 → R` picking `0`, exact forward.
fn zero_i() -> Morphism {
    Morphism::new(
        |_| Value::int(0),
        |_, _| interval(Rational::zero(), Rational::zero()),
        |_, _| Tangent::Unit,
    )
}

/// An interpretation of a signature: objects for its primitive types and
/// morphisms for its operations. An operation with arguments `ρ1 … ρn` has
/// domain `1` when `n = 0`, `⟦ρ1⟧` when `n = 1`, and the right-nested
/// product `⟦ρ1⟧ × (⟦ρ2⟧ × …)` otherwise.
#[derive(Debug, Clone)]
pub struct SignatureInterp {
    pub name: String,
    pub sig: Signature,
    pub prim_objs: BTreeMap<String, Obj>,
    pub ops: BTreeMap<String, Morphism>,
}

impl SignatureInterp {
    pub fn prim_obj(&self, name: &str) -> Option<&Obj> {
        self.prim_objs.get(name)
    }

    pub fn op(&self, name: &str) -> Option<&Morphism> {
        self.ops.get(name)
    }

    fn insert_op(&mut self, name: &str, args: Vec<Ty>, result: Ty, m: Morphism) {
        self.sig.ops.insert(name.to_string(), (args, result));
        self.ops.insert(name.to_string(), m);
    }

    fn with_num(name: &str, num: Obj) -> Self {
        let mut s = SignatureInterp {
            name: name.to_string(),
            sig: Signature { prim_types: vec!["num".into()], ops: BTreeMap::new() },
            prim_objs: BTreeMap::new(),
            ops: BTreeMap::new(),
        };
        s.prim_objs.insert("num".into(), num);
        s
    }
}

fn num_ty() -> Ty {
    Ty::prim("num")
}

fn add_values(a: &Value, b: &Value) -> Value {
    Value::num(a.as_num() + b.as_num())
}

fn num_ops(s: &mut SignatureInterp, zero: Morphism, add: Morphism, neg: Morphism) {
    let n = num_ty();
    s.insert_op("zero", vec![], n.clone(), zero);
    s.insert_op("add", vec![n.clone(), n.clone()], n.clone(), add);
    s.insert_op("neg", vec![n.clone()], n, neg);
}

fn disc_num() -> SignatureInterp {
    let num = disc_obj("num");
    let mut s = SignatureInterp::with_num("disc-num", num.clone());
    let pair = Obj::prod(num.clone(), num.clone());
    num_ops(
        &mut s,
        disc_op(&Obj::Unit, |_| Value::int(0)),
        disc_op(&pair, |p| {
            let (a, b) = p.as_pair();
            add_values(a, b)
        }),
        disc_op(&num, |x| Value::num(-x.as_num())),
    );
    s
}

fn lift_num_named(name: &str) -> SignatureInterp {
    let carrier = disc_obj("num");
    let mut s = SignatureInterp::with_num(name, lift_obj(&carrier));
    num_ops(
        &mut s,
        lift_const(&carrier, Value::int(0)),
        lift_binary(&carrier, add_values),
        lift_unary(&carrier, |x| Value::num(-x.as_num())),
    );
    s
}

fn interval_num() -> SignatureInterp {
    let mut s = SignatureInterp::with_num("interval-num", interval_obj());
    num_ops(&mut s, zero_i(), add_i(), neg_i());
    s
}

fn cbn_num() -> SignatureInterp {
    let mut s = lift_num_named("cbn-num");
    let a = Ty::prim("approx");
    s.sig.prim_types.push("approx".into());
    s.prim_objs.insert("approx".into(), approx_obj());
    s.insert_op("top", vec![], a.clone(), top_op());
    s.insert_op("and", vec![a.clone(), a.clone()], a, and_op());
    s
}

/// Looks up one of the built-in interpretations by name.
pub fn builtin_signature(name: &str) -> Result<SignatureInterp, Error> {
    match name {
        "disc-num" => Ok(disc_num()),
        "lift-num" => Ok(lift_num_named("lift-num")),
        "interval-num" => Ok(interval_num()),
        "cbn-num" => Ok(cbn_num()),
        other => Err(Error::UnknownSignature(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{self, LatticeElem};
    use crate::rational::{int, ratio};

    fn tt() -> Value {
        Value::boolean(true)
    }

    fn ff() -> Value {
        Value::boolean(false)
    }

    /// Lifted discrete tangent: `⊤` is `up(())`.
    fn present<F: Clone>() -> Tangent<F> {
        Tangent::up(Tangent::Unit)
    }

    fn elem(t: &JoinTangent) -> LatticeElem {
        t.elem()
    }

    fn melem(t: &MeetTangent) -> LatticeElem {
        t.elem()
    }

    fn top2() -> LatticeElem {
        LatticeElem::up(LatticeElem::Unit)
    }

    #[test]
    fn strict_or_demands_both() {
        let t = strict_or().bwd(&Value::pair(tt(), tt()), &present());
        assert_eq!(elem(&t), LatticeElem::pair(top2(), top2()));
    }

    #[test]
    fn short_circuit_or_demands_first_only() {
        let f = short_circuit_or();
        let x = Value::pair(tt(), tt());
        assert_eq!(f.apply(&x), tt());
        let t = f.bwd(&x, &present());
        assert_eq!(elem(&t), LatticeElem::pair(top2(), LatticeElem::Bot));
        let t = f.bwd(&Value::pair(ff(), tt()), &present());
        assert_eq!(elem(&t), LatticeElem::pair(top2(), top2()));
    }

    #[test]
    fn bind_with_absent_scrutinee_is_absent() {
        let f = strict_or();
        for dg in [Tangent::Bot, present()] {
            let t = f.fwd(&Value::pair(tt(), ff()), &Tangent::pair(dg, Tangent::Bot));
            assert_eq!(melem(&t), LatticeElem::Bot);
        }
    }

    /// Every tangent of `o` at `v`, via the first-order fibre.
    fn tangents(o: &Obj, v: &Value) -> Vec<LatticeElem> {
        lattice::enumerate(&o.fibre_at(v).unwrap()).unwrap()
    }

    /// Compares two morphisms on every tangent at `x` and at `f(x)`.
    fn same_on(f: &Morphism, g: &Morphism, dom: &Obj, cod: &Obj, x: &Value) {
        assert_eq!(f.apply(x), g.apply(x));
        let y = f.apply(x);
        for e in tangents(dom, x) {
            let t = Tangent::from_elem(&e);
            assert_eq!(melem(&f.fwd(x, &t)), melem(&g.fwd(x, &t)), "fwd at {e}");
        }
        for e in tangents(cod, &y) {
            let t = Tangent::from_elem(&e);
            assert_eq!(elem(&f.bwd(x, &t)), elem(&g.bwd(x, &t)), "bwd at {e}");
        }
    }

    fn lb() -> Obj {
        lift_obj(&bool_obj())
    }

    #[test]
    fn monad_laws_on_enumerated_fibres() {
        let b = bool_obj();
        let gamma = lb();
        // f : Γ × bool → L bool, an or with the context
        let f = lift_binary(&b, |a, c| Value::boolean(as_bool(a) || as_bool(c)));
        let f = fam::compose(&f, &fam::pair(&fam::proj1(&b), &fam::compose(&eta_lift(&b), &fam::proj2(&gamma)), &Obj::prod(gamma.clone(), b.clone())));
        let not = disc_op(&b, |a| Value::boolean(!as_bool(a)));
        let g = fam::compose(&eta_lift(&b), &fam::compose(&not, &fam::proj2(&gamma)));
        let dom_disc = Obj::prod(gamma.clone(), b.clone());
        let dom_lift = Obj::prod(gamma.clone(), lb());
        let id_eta = fam::pair(&fam::proj1(&b), &fam::compose(&eta_lift(&b), &fam::proj2(&gamma)), &dom_disc);

        for x in [Value::pair(tt(), ff()), Value::pair(ff(), ff()), Value::pair(ff(), tt())] {
            // left unit: bind f ∘ (id × η) = f
            same_on(&fam::compose(&bind_lift(&f, &gamma), &id_eta), &f, &dom_disc, &lb(), &x);
            // right unit: bind (η ∘ π2) = π2
            let r = bind_lift(&fam::compose(&eta_lift(&b), &fam::proj2(&gamma)), &gamma);
            same_on(&r, &fam::proj2(&gamma), &dom_lift, &lb(), &x);
            // associativity: bind g ∘ ⟨π1, bind f⟩ = bind (bind g ∘ ⟨π1, f⟩)
            let lhs = fam::compose(&bind_lift(&g, &gamma), &fam::pair(&fam::proj1(&lb()), &bind_lift(&f, &gamma), &dom_lift));
            let rhs = bind_lift(&fam::compose(&bind_lift(&g, &gamma), &fam::pair(&fam::proj1(&b), &f, &dom_disc)), &gamma);
            same_on(&lhs, &rhs, &dom_lift, &lb(), &x);
        }
    }

    #[test]
    fn tagging_agrees_with_lifting_on_discrete_payloads() {
        let tagged = lattice::enumerate(&FibreDesc::Prod(vec![FibreDesc::Two, FibreDesc::One])).unwrap();
        let lifted = lattice::enumerate(&FibreDesc::lifted(FibreDesc::One)).unwrap();
        assert_eq!(tagged.len(), lifted.len());
        let iso = |e: &LatticeElem| match e {
            LatticeElem::Tuple(es) if es[0] == LatticeElem::Top => top2(),
            _ => LatticeElem::Bot,
        };
        let td = FibreDesc::Prod(vec![FibreDesc::Two, FibreDesc::One]);
        let ld = FibreDesc::lifted(FibreDesc::One);
        for a in &tagged {
            for b in &tagged {
                assert_eq!(lattice::leq(&td, a, b).unwrap(), lattice::leq(&ld, &iso(a), &iso(b)).unwrap());
            }
        }
        let mut images: Vec<_> = tagged.iter().map(iso).collect();
        images.dedup();
        assert_eq!(images.len(), lifted.len());
    }

    #[test]
    fn and_duplicates_backward() {
        let x = Value::pair(approx_point(), approx_point());
        assert_eq!(elem(&and_op().bwd(&x, &Tangent::Top)), LatticeElem::pair(LatticeElem::Top, LatticeElem::Top));
        assert_eq!(melem(&and_op().fwd(&x, &Tangent::pair(Tangent::Top, Tangent::Bot))), LatticeElem::Bot);
        assert_eq!(melem(&top_op().fwd(&Value::Unit, &Tangent::Unit)), LatticeElem::Top);
    }

    fn ivl<F>(lo: Rational, hi: Rational) -> Tangent<F> {
        interval(lo, hi)
    }

    #[test]
    fn interval_add_backward_follows_formula() {
        let x = Value::pair(Value::int(0), Value::int(1));
        let t = add_i().bwd(&x, &ivl(ratio(9, 10), ratio(11, 10)));
        let expect = LatticeElem::pair(
            LatticeElem::interval(ratio(-1, 10), ratio(1, 10)),
            LatticeElem::interval(ratio(9, 10), ratio(11, 10)),
        );
        assert_eq!(elem(&t), expect);
        let f = add_i().fwd(&x, &Tangent::pair(ivl(int(0), int(0)), ivl(int(1), int(1))));
        assert_eq!(melem(&f), LatticeElem::interval(int(1), int(1)));
        let f = add_i().fwd(&x, &Tangent::pair(Tangent::Bot, ivl(int(1), int(1))));
        assert_eq!(melem(&f), LatticeElem::Bot);
    }

    #[test]
    fn interval_neg_and_scale() {
        let one = Value::int(1);
        assert_eq!(melem(&neg_i().fwd(&one, &ivl(int(0), int(2)))), LatticeElem::interval(int(-2), int(0)));
        assert_eq!(elem(&scale_i(int(0)).bwd(&one, &ivl(int(-5), int(5)))), LatticeElem::Bot);
        assert_eq!(melem(&scale_i(int(0)).fwd(&one, &Tangent::Bot)), LatticeElem::interval(int(0), int(0)));
        assert_eq!(melem(&scale_i(int(-3)).fwd(&one, &ivl(int(0), int(2)))), LatticeElem::interval(int(-6), int(0)));
        assert_eq!(elem(&scale_i(int(-3)).bwd(&one, &ivl(int(-6), int(0)))), LatticeElem::interval(int(0), int(2)));
        assert_eq!(scale_i(ratio(1, 2)).apply(&one), Value::num(ratio(1, 2)));
    }

    #[test]
    fn builtin_signatures() {
        let disc = builtin_signature("disc-num").unwrap();
        let num = disc.prim_obj("num").unwrap();
        assert_eq!(num.fibre_at(&Value::int(3)), Some(FibreDesc::One));

        let lift = builtin_signature("lift-num").unwrap();
        let add = lift.op("add").unwrap();
        let x = Value::pair(Value::int(1), Value::int(2));
        assert_eq!(add.apply(&x), Value::int(3));
        for (a, b) in [(true, false), (false, true)] {
            let pick = |p: bool| if p { present() } else { Tangent::Bot };
            assert_eq!(melem(&add.fwd(&x, &Tangent::pair(pick(a), pick(b)))), LatticeElem::Bot);
        }
        assert_eq!(elem(&add.bwd(&x, &present())), LatticeElem::pair(top2(), top2()));

        let cbn = builtin_signature("cbn-num").unwrap();
        assert!(cbn.sig.has_prim("approx"));
        assert!(cbn.op("and").is_some());
        assert!(matches!(builtin_signature("real"), Err(Error::UnknownSignature(_))));
    }
}
