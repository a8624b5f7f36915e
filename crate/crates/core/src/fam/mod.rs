//! Morphisms of the family category over meet- and join-semilattices, and the
//! cartesian closed structure used to interpret terms.
//!
//! A morphism carries its underlying function together with, at each point,
//! a forward map on meet-side tangents and a backward map on join-side
//! tangents. Composition follows the chain rule.

mod obj;
mod tangent;
mod value;

use std::fmt;
use std::sync::Arc;

pub use obj::{Obj, PrimObj};
pub use tangent::{FunJoin, FunMeet, JoinTangent, MeetTangent, Tangent};
pub use value::{Closure, Prim, Value};

type ApplyFn = dyn Fn(&Value) -> Value + Send + Sync;
type FwdFn = dyn Fn(&Value, &MeetTangent) -> MeetTangent + Send + Sync;
type BwdFn = dyn Fn(&Value, &JoinTangent) -> JoinTangent + Send + Sync;
type PushFn = dyn Fn(&Value, &MeetTangent) -> (Value, MeetTangent) + Send + Sync;
type PullFn = dyn Fn(&Value) -> (Value, Pullback) + Send + Sync;

/// The backward map of a morphism at a point fixed by [`Morphism::pull`].
pub type Pullback = Box<dyn Fn(&JoinTangent) -> JoinTangent + Send + Sync>;

enum Parts {
    /// Separate maps, each recomputing whatever it needs from the point.
    Plain { apply: Box<ApplyFn>, fwd: Box<FwdFn>, bwd: Box<BwdFn> },
    /// Maps that compute the output value alongside the tangent, so that
    /// composites evaluate each stage once per query.
    Fused { apply: Box<ApplyFn>, push: Box<PushFn>, pull: Box<PullFn> },
}

/// A triple `(f, fwd, bwd)`: `fwd(x)` maps tangents at `x` to tangents at
/// `f(x)`, and `bwd(x)` maps them back.
#[derive(Clone)]
pub struct Morphism(Arc<Parts>);

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<morphism>")
    }
}

impl Morphism {
    pub fn new(
        apply: impl Fn(&Value) -> Value + Send + Sync + 'static,
        fwd: impl Fn(&Value, &MeetTangent) -> MeetTangent + Send + Sync + 'static,
        bwd: impl Fn(&Value, &JoinTangent) -> JoinTangent + Send + Sync + 'static,
    ) -> Self {
        Morphism(Arc::new(Parts::Plain { apply: Box::new(apply), fwd: Box::new(fwd), bwd: Box::new(bwd) }))
    }

    fn fused(
        apply: impl Fn(&Value) -> Value + Send + Sync + 'static,
        push: impl Fn(&Value, &MeetTangent) -> (Value, MeetTangent) + Send + Sync + 'static,
        pull: impl Fn(&Value) -> (Value, Pullback) + Send + Sync + 'static,
    ) -> Self {
        Morphism(Arc::new(Parts::Fused { apply: Box::new(apply), push: Box::new(push), pull: Box::new(pull) }))
    }

    pub fn apply(&self, x: &Value) -> Value {
        match &*self.0 {
            Parts::Plain { apply, .. } | Parts::Fused { apply, .. } => apply(x),
        }
    }

    pub fn fwd(&self, x: &Value, dx: &MeetTangent) -> MeetTangent {
        match &*self.0 {
            Parts::Plain { fwd, .. } => fwd(x, dx),
            Parts::Fused { push, .. } => push(x, dx).1,
        }
    }

    pub fn bwd(&self, x: &Value, dy: &JoinTangent) -> JoinTangent {
        match &*self.0 {
            Parts::Plain { bwd, .. } => bwd(x, dy),
            Parts::Fused { pull, .. } => pull(x).1(dy),
        }
    }

    /// The output at `x` together with the forward image of `dx`.
    pub fn push(&self, x: &Value, dx: &MeetTangent) -> (Value, MeetTangent) {
        match &*self.0 {
            Parts::Plain { apply, fwd, .. } => (apply(x), fwd(x, dx)),
            Parts::Fused { push, .. } => push(x, dx),
        }
    }

    /// The output at `x` together with the backward map at `x`.
    pub fn pull(&self, x: &Value) -> (Value, Pullback) {
        match &*self.0 {
            Parts::Plain { apply, .. } => {
                let (m, x) = (self.clone(), x.clone());
                (apply(&x), Box::new(move |dy| m.bwd(&x, dy)))
            }
            Parts::Fused { pull, .. } => pull(x),
        }
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &Morphism) -> Morphism {
        compose(self, f)
    }
}

pub fn identity() -> Morphism {
    Morphism::new(|x| x.clone(), |_, t| t.clone(), |_, t| t.clone())
}

/// `g ∘ f`. Backward runs `g`'s map first.
pub fn compose(g: &Morphism, f: &Morphism) -> Morphism {
    let (g1, f1) = (g.clone(), f.clone());
    let (g2, f2) = (g.clone(), f.clone());
    let (g3, f3) = (g.clone(), f.clone());
    Morphism::fused(
        move |x| g1.apply(&f1.apply(x)),
        move |x, t| {
            let (y, dy) = f2.push(x, t);
            g2.push(&y, &dy)
        },
        move |x| {
            let (y, pf) = f3.pull(x);
            let (z, pg) = g3.pull(&y);
            (z, Box::new(move |dz| pf(&pg(dz))))
        },
    )
}

/// `⟨f, g⟩`; the two pullbacks are joined in the shared domain `dom`.
pub fn pair(f: &Morphism, g: &Morphism, dom: &Obj) -> Morphism {
    let (f1, g1) = (f.clone(), g.clone());
    let (f2, g2) = (f.clone(), g.clone());
    let (f3, g3, dom) = (f.clone(), g.clone(), dom.clone());
    Morphism::fused(
        move |x| Value::pair(f1.apply(x), g1.apply(x)),
        move |x, t| {
            let (a, da) = f2.push(x, t);
            let (b, db) = g2.push(x, t);
            (Value::pair(a, b), Tangent::pair(da, db))
        },
        move |x| {
            let (a, pa) = f3.pull(x);
            let (b, pb) = g3.pull(x);
            let (x, dom) = (x.clone(), dom.clone());
            let back: Pullback = Box::new(move |t| {
                let (ta, tb) = t.as_pair();
                dom.join(&x, &pa(ta), &pb(tb))
            });
            (Value::pair(a, b), back)
        },
    )
}

/// First projection out of `A × snd`; the discarded side gets the zero tangent.
pub fn proj1(snd: &Obj) -> Morphism {
    let snd = snd.clone();
    Morphism::new(
        |x| x.as_pair().0.clone(),
        |_, t| t.as_pair().0.clone(),
        move |x, t| Tangent::pair(t.clone(), snd.bottom(x.as_pair().1)),
    )
}

/// Second projection out of `fst × B`.
pub fn proj2(fst: &Obj) -> Morphism {
    let fst = fst.clone();
    Morphism::new(
        |x| x.as_pair().1.clone(),
        |_, t| t.as_pair().1.clone(),
        move |x, t| Tangent::pair(fst.bottom(x.as_pair().0), t.clone()),
    )
}

/// The unique map to the terminal object.
pub fn terminal(dom: &Obj) -> Morphism {
    let dom = dom.clone();
    Morphism::new(|_| Value::Unit, |_, _| Tangent::Unit, move |x, _| dom.bottom(x))
}

/// Injections leave tangents untouched: the fibre at `inl a` is the fibre at `a`.
pub fn inj1() -> Morphism {
    Morphism::new(|x| Value::inl(x.clone()), |_, t| t.clone(), |_, t| t.clone())
}

pub fn inj2() -> Morphism {
    Morphism::new(|x| Value::inr(x.clone()), |_, t| t.clone(), |_, t| t.clone())
}

/// Splits `(γ, inl a)` into `(γ, a)` and reports which side was taken.
fn split_case(x: &Value) -> (bool, Value) {
    let (g, s) = x.as_pair();
    match s {
        Value::Inl(a) => (true, Value::pair(g.clone(), (**a).clone())),
        Value::Inr(b) => (false, Value::pair(g.clone(), (**b).clone())),
        other => panic!("internal type error: case on non-sum {other}"),
    }
}

/// `[f, g]` parameterised by a context: `Γ × (A + B) → C` from
/// `f : Γ × A → C` and `g : Γ × B → C`.
pub fn case(f: &Morphism, g: &Morphism) -> Morphism {
    let (f1, g1) = (f.clone(), g.clone());
    let (f2, g2) = (f.clone(), g.clone());
    let (f3, g3) = (f.clone(), g.clone());
    Morphism::fused(
        move |x| match split_case(x) {
            (true, y) => f1.apply(&y),
            (false, y) => g1.apply(&y),
        },
        move |x, t| match split_case(x) {
            (true, y) => f2.push(&y, t),
            (false, y) => g2.push(&y, t),
        },
        move |x| match split_case(x) {
            (true, y) => f3.pull(&y),
            (false, y) => g3.pull(&y),
        },
    )
}

/// `λh : Γ → (X ⇒ Y)` for `h : Γ × X → Y`.
pub fn curry(h: &Morphism, gamma: &Obj, arg: &Obj) -> Morphism {
    let (h1, gamma1) = (h.clone(), gamma.clone());
    let (h2, arg) = (h.clone(), arg.clone());
    let (h3, gamma3) = (h.clone(), gamma.clone());
    Morphism::new(
        move |g| Value::Closure(Closure::new(g.clone(), gamma1.clone(), h1.clone())),
        move |g, dg| {
            let (g, dg, h, arg) = (g.clone(), dg.clone(), h2.clone(), arg.clone());
            Tangent::Fun(FunMeet::new(move |x| {
                h.fwd(&Value::pair(g.clone(), x.clone()), &Tangent::pair(dg.clone(), arg.top(x)))
            }))
        },
        move |g, t| {
            let Tangent::Fun(FunJoin(entries)) = t else {
                panic!("internal error: non-function tangent at function type")
            };
            entries.iter().fold(gamma3.bottom(g), |acc, (x, dy)| {
                let dg = h3.bwd(&Value::pair(g.clone(), x.clone()), dy).into_pair().0;
                gamma3.join(g, &acc, &dg)
            })
        },
    )
}

/// Evaluation `(X ⇒ Y) × X → Y`.
pub fn eval(cod: &Obj) -> Morphism {
    let cod = cod.clone();
    Morphism::new(
        |p| {
            let (f, x) = p.as_pair();
            f.as_closure().apply(x)
        },
        move |p, t| {
            let (f, x) = p.as_pair();
            let cl = f.as_closure();
            let (df, dx) = t.as_pair();
            let Tangent::Fun(df) = df else {
                panic!("internal error: non-function tangent at function type")
            };
            let (y, dy) = cl.push_at(x, dx);
            cod.meet(&y, &df.at(x), &dy)
        },
        |p, dy| {
            let (f, x) = p.as_pair();
            let df = Tangent::Fun(FunJoin(vec![(x.clone(), dy.clone())]));
            Tangent::pair(df, f.as_closure().bwd_at(x, dy))
        },
    )
}

/// The empty list, as a map out of `dom`.
pub fn nil(dom: &Obj) -> Morphism {
    let dom = dom.clone();
    Morphism::new(|_| Value::list(Vec::new()), |_, _| Tangent::Unit, move |x, _| dom.bottom(x))
}

/// `σ × List σ → List σ`. The fibre at `v :: vs` is literally `∂σ(v) × ∂(vs)`,
/// so tangents pass through unchanged.
pub fn cons() -> Morphism {
    Morphism::new(
        |p| {
            let (h, t) = p.as_pair();
            let Value::List(vs) = t else { panic!("internal type error: cons onto non-list {t}") };
            let mut out = Vec::with_capacity(vs.len() + 1);
            out.push(h.clone());
            out.extend(vs.iter().cloned());
            Value::list(out)
        },
        |_, t| t.clone(),
        |_, t| t.clone(),
    )
}

/// `List σ → 1 + σ × List σ`, the inverse of `[nil, cons]`.
pub fn uncons() -> Morphism {
    Morphism::new(
        |l| match l {
            Value::List(vs) if vs.is_empty() => Value::inl(Value::Unit),
            Value::List(vs) => Value::inr(Value::pair(vs[0].clone(), Value::List(vs[1..].into()))),
            other => panic!("internal type error: uncons of non-list {other}"),
        },
        |_, t| t.clone(),
        |_, t| t.clone(),
    )
}

/// Structural recursion `Γ × List σ → τ` with `s1 : Γ → τ` and
/// `s2 : (Γ × σ) × τ → τ`:
///
/// ```text
/// fold = case(s1 ∘ π1, s2 ∘ ⟨⟨π1, π1 ∘ π2⟩, fold ∘ ⟨π1, π2 ∘ π2⟩⟩) ∘ ⟨π1, uncons ∘ π2⟩
/// ```
///
/// The recursive occurrence is rebuilt on demand, one list cell at a time.
pub fn fold(s1: &Morphism, s2: &Morphism, gamma: &Obj, elem: &Obj) -> Morphism {
    let list = Obj::list(elem.clone());
    let cell = Obj::prod(elem.clone(), list.clone());
    let dom = Obj::prod(gamma.clone(), list.clone());
    let dom_cell = Obj::prod(gamma.clone(), cell.clone());

    let rec = {
        let (s1, s2, gamma, elem) = (s1.clone(), s2.clone(), gamma.clone(), elem.clone());
        let build = move || fold(&s1, &s2, &gamma, &elem);
        let (b1, b2, b3) = (build.clone(), build.clone(), build);
        Morphism::fused(move |x| b1().apply(x), move |x, t| b2().push(x, t), move |x| b3().pull(x))
    };

    let p1 = proj1(&cell);
    let p2 = proj2(gamma);
    let head = compose(&proj1(&list), &p2);
    let tail = compose(&proj2(elem), &p2);
    let step_args = pair(&pair(&p1, &head, &dom_cell), &compose(&rec, &pair(&p1, &tail, &dom_cell)), &dom_cell);
    let body = case(&compose(s1, &proj1(&Obj::Unit)), &compose(s2, &step_args));
    let scrutinise = pair(&proj1(&list), &compose(&uncons(), &proj2(gamma)), &dom);
    compose(&body, &scrutinise)
}
