use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{least_preimage, FinFun};
use crate::fam::{Morphism, Obj, Tangent, Value};
use crate::lattice::literal::show;
use crate::lattice::{
    bottom, conforms, enumerate, join_unchecked, leq_unchecked, meet_unchecked, top, upper_covers, FibreDesc,
    FinLattice, Interval, LatticeElem, LatticeError,
};
use crate::rational::{self, Rational};
use crate::Error;

/// Seed used for sampled checks when `GSLICE_SEED` is unset.
pub const DEFAULT_SEED: u64 = 0x6a09_e667;

/// `GSLICE_SEED` if set and numeric, else [`DEFAULT_SEED`].
pub fn seed_from_env() -> u64 {
    std::env::var("GSLICE_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
}

/// Outcome of a batch of checks. Only the first few witnesses are kept.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: u64,
    pub failures: u64,
    pub witnesses: Vec<String>,
}

const KEPT_WITNESSES: usize = 20;

impl Report {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub(crate) fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.witnesses.len() < KEPT_WITNESSES {
                self.witnesses.push(witness());
            }
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.checks += other.checks;
        self.failures += other.failures;
        let room = KEPT_WITNESSES.saturating_sub(self.witnesses.len());
        self.witnesses.extend(other.witnesses.into_iter().take(room));
    }
}

/// One `VIOLATION` line per kept witness, then a count.
impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for w in &self.witnesses {
            writeln!(f, "VIOLATION {w}")?;
        }
        write!(f, "{} checks, {} violations", self.checks, self.failures)
    }
}

/// Exhaustively checks that `bwd ⊣ fwd` between the fibres `dx` (inputs)
/// and `dy` (outputs): both maps land in their fibres and are monotone, and
/// `y ⊑ fwd(x) ⟺ bwd(y) ⊑ x` for every pair.
pub fn check_galois(
    dx: &FibreDesc,
    dy: &FibreDesc,
    fwd: impl Fn(&LatticeElem) -> LatticeElem,
    bwd: impl Fn(&LatticeElem) -> LatticeElem,
) -> Result<Report, LatticeError> {
    let xs = enumerate(dx)?;
    let ys = enumerate(dy)?;
    let mut r = Report::default();
    let fx: Vec<LatticeElem> = xs.iter().map(&fwd).collect();
    let by: Vec<LatticeElem> = ys.iter().map(&bwd).collect();
    for (x, y) in xs.iter().zip(&fx) {
        r.check(conforms(dy, y).is_ok(), || format!("fwd({}) = {y} is not in fibre {dy}", show(dx, x)));
    }
    for (y, x) in ys.iter().zip(&by) {
        r.check(conforms(dx, x).is_ok(), || format!("bwd({}) = {x} is not in fibre {dx}", show(dy, y)));
    }
    if !r.passed() {
        return Ok(r);
    }
    monotone_on_covers(&mut r, "fwd", dx, dy, &xs, &fx)?;
    monotone_on_covers(&mut r, "bwd", dy, dx, &ys, &by)?;
    for (x, fxv) in xs.iter().zip(&fx) {
        for (y, byv) in ys.iter().zip(&by) {
            let left = leq_unchecked(dy, y, fxv);
            let right = leq_unchecked(dx, byv, x);
            r.check(left == right, || {
                format!(
                    "adjunction: x = {}, y = {}: y <= fwd(x) = {} is {left}, bwd(y) = {} <= x is {right}",
                    show(dx, x),
                    show(dy, y),
                    show(dy, fxv),
                    show(dx, byv)
                )
            });
        }
    }
    Ok(r)
}

/// In a finite lattice a map is monotone iff it is monotone along covers.
/// Images are looked up rather than recomputed.
fn monotone_on_covers(
    r: &mut Report,
    what: &str,
    d: &FibreDesc,
    cod: &FibreDesc,
    elems: &[LatticeElem],
    images: &[LatticeElem],
) -> Result<(), LatticeError> {
    let index: HashMap<&LatticeElem, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
    for (a, fa) in elems.iter().zip(images) {
        for b in upper_covers(d, a)? {
            let fb = &images[index[&b]];
            r.check(leq_unchecked(cod, fa, fb), || {
                format!(
                    "monotonicity of {what}: {} <= {} but {what} gives {} and {}",
                    show(d, a),
                    show(d, &b),
                    show(cod, fa),
                    show(cod, fb)
                )
            });
        }
    }
    Ok(())
}

/// `fwd` preserves `⊤` and binary meets; `bwd` preserves `⊥` and binary
/// joins. Quadratic in the fibre sizes.
pub fn check_preservation(
    dx: &FibreDesc,
    dy: &FibreDesc,
    fwd: impl Fn(&LatticeElem) -> LatticeElem,
    bwd: impl Fn(&LatticeElem) -> LatticeElem,
) -> Result<Report, LatticeError> {
    let mut r = Report::default();
    r.check(fwd(&top(dx)) == top(dy), || "fwd does not preserve top".into());
    r.check(bwd(&bottom(dy)) == bottom(dx), || "bwd does not preserve bottom".into());
    let xs = enumerate(dx)?;
    for a in &xs {
        for b in &xs {
            let lhs = fwd(&meet_unchecked(dx, a, b));
            let rhs = meet_unchecked(dy, &fwd(a), &fwd(b));
            r.check(lhs == rhs, || format!("fwd does not preserve the meet of {} and {}", show(dx, a), show(dx, b)));
        }
    }
    let ys = enumerate(dy)?;
    for a in &ys {
        for b in &ys {
            let lhs = bwd(&join_unchecked(dy, a, b));
            let rhs = join_unchecked(dx, &bwd(a), &bwd(b));
            r.check(lhs == rhs, || format!("bwd does not preserve the join of {} and {}", show(dy, a), show(dy, b)));
        }
    }
    Ok(r)
}

fn fibre(o: &Obj, v: &Value) -> Result<FibreDesc, Error> {
    o.fibre_at(v).ok_or_else(|| Error::HigherOrder("exhaustive checks", o.to_string()))
}

fn maps<'a>(m: &'a Morphism, x: &Value) -> (impl Fn(&LatticeElem) -> LatticeElem + 'a, impl Fn(&LatticeElem) -> LatticeElem + 'a) {
    let x1 = x.clone();
    let x2 = x.clone();
    (
        move |t: &LatticeElem| m.fwd(&x1, &Tangent::from_elem(t)).elem(),
        move |t: &LatticeElem| m.bwd(&x2, &Tangent::from_elem(t)).elem(),
    )
}

/// [`check_galois`] for a morphism `dom → cod` at the point `x`.
pub fn check_morphism(m: &Morphism, dom: &Obj, cod: &Obj, x: &Value) -> Result<Report, Error> {
    let dx = fibre(dom, x)?;
    let dy = fibre(cod, &m.apply(x))?;
    let (fwd, bwd) = maps(m, x);
    Ok(check_galois(&dx, &dy, fwd, bwd)?)
}

/// Compares `g ∘ f` against the chained maps of `f` and `g` at each sample,
/// over every tangent of the relevant fibres. `cod` is the codomain of `g`.
pub fn check_chain_rule(f: &Morphism, g: &Morphism, dom: &Obj, cod: &Obj, samples: &[Value]) -> Result<Report, Error> {
    let gf = crate::fam::compose(g, f);
    let mut r = Report::default();
    for x in samples {
        let fx = f.apply(x);
        let gfx = g.apply(&fx);
        r.check(gf.apply(x) == gfx, || format!("chain rule: apply differs at {x}"));
        let dx = fibre(dom, x)?;
        for t in enumerate(&dx)? {
            let t = Tangent::from_elem(&t);
            let direct = gf.fwd(x, &t).elem();
            let chained = g.fwd(&fx, &f.fwd(x, &t)).elem();
            r.check(direct == chained, || format!("chain rule: fwd at {x} of {}: {direct} vs {chained}", t.elem()));
        }
        let dz = fibre(cod, &gfx)?;
        for s in enumerate(&dz)? {
            let s = Tangent::from_elem(&s);
            let direct = gf.bwd(x, &s).elem();
            let chained = f.bwd(x, &g.bwd(&fx, &s)).elem();
            r.check(direct == chained, || format!("chain rule: bwd at {x} of {}: {direct} vs {chained}", s.elem()));
        }
    }
    Ok(r)
}

fn small_rational(rng: &mut impl Rng, max_num: i64) -> Rational {
    let q = rng.gen_range(1..=8);
    rational::ratio(rng.gen_range(0..=max_num), q)
}

/// A random element of `d`. Intervals are drawn around their point with
/// small rational radii, sometimes tight, sometimes bottom.
pub fn random_elem(d: &FibreDesc, rng: &mut impl Rng) -> LatticeElem {
    match d {
        FibreDesc::One => LatticeElem::Unit,
        FibreDesc::Two => {
            if rng.gen_bool(0.5) {
                LatticeElem::Top
            } else {
                LatticeElem::Bot
            }
        }
        FibreDesc::Lifted(inner) => {
            if rng.gen_ratio(1, 4) {
                LatticeElem::Bot
            } else {
                LatticeElem::up(random_elem(inner, rng))
            }
        }
        FibreDesc::Prod(ds) if ds.is_empty() => LatticeElem::Unit,
        FibreDesc::Prod(ds) => LatticeElem::Tuple(ds.iter().map(|d| random_elem(d, rng)).collect()),
        FibreDesc::IntervalAt(x) => match rng.gen_range(0..10) {
            0 => LatticeElem::Bot,
            1 => LatticeElem::Interval(Interval::point(x)),
            _ => {
                let lo = x - small_rational(rng, 16);
                let hi = x + small_rational(rng, 16);
                LatticeElem::interval(lo, hi)
            }
        },
        FibreDesc::Fin(l) => LatticeElem::Fin(rng.gen_range(0..l.len())),
    }
}

/// The adjunction on `pairs` random pairs, plus the unit and counit
/// inequalities `bwd(fwd(x)) ⊑ x` and `y ⊑ fwd(bwd(y))` at each.
pub fn sampled_galois(
    dx: &FibreDesc,
    dy: &FibreDesc,
    fwd: impl Fn(&LatticeElem) -> LatticeElem,
    bwd: impl Fn(&LatticeElem) -> LatticeElem,
    rng: &mut impl Rng,
    pairs: usize,
) -> Report {
    let mut r = Report::default();
    for _ in 0..pairs {
        let x = random_elem(dx, rng);
        let y = random_elem(dy, rng);
        let (fx, by) = (fwd(&x), bwd(&y));
        let left = leq_unchecked(dy, &y, &fx);
        let right = leq_unchecked(dx, &by, &x);
        r.check(left == right, || {
            format!(
                "adjunction: x = {}, y = {}: fwd(x) = {}, bwd(y) = {}",
                show(dx, &x),
                show(dy, &y),
                show(dy, &fx),
                show(dx, &by)
            )
        });
        let bfx = bwd(&fx);
        r.check(leq_unchecked(dx, &bfx, &x), || format!("unit: bwd(fwd({})) = {} is not below it", show(dx, &x), show(dx, &bfx)));
        let fby = fwd(&by);
        r.check(leq_unchecked(dy, &y, &fby), || format!("counit: fwd(bwd({})) = {} is not above it", show(dy, &y), show(dy, &fby)));
    }
    r
}

/// [`sampled_galois`] for a morphism at the point `x`.
pub fn check_morphism_sampled(
    m: &Morphism,
    dom: &Obj,
    cod: &Obj,
    x: &Value,
    rng: &mut impl Rng,
    pairs: usize,
) -> Result<Report, Error> {
    let dx = fibre(dom, x)?;
    let dy = fibre(cod, &m.apply(x))?;
    let (fwd, bwd) = maps(m, x);
    Ok(sampled_galois(&dx, &dy, fwd, bwd, rng, pairs))
}

/// A seeded generator for sampled checks.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The restriction of `f` to `↓x` together with least preimages, as a
/// forward and backward map between finite lattices. When a set of
/// candidate preimages has no least element the backward map picks its
/// first minimal element, so the adjunction fails exactly where `f` is not
/// stable. `None` if either downset is not a lattice.
#[allow(clippy::type_complexity)]
pub fn embed_at(
    f: &FinFun,
    x: usize,
) -> Option<(FibreDesc, FibreDesc, Arc<dyn Fn(&LatticeElem) -> LatticeElem>, Arc<dyn Fn(&LatticeElem) -> LatticeElem>)> {
    let down_x = f.dom.downset(x);
    let down_y = f.cod.downset(f.apply(x));
    let lattice = |p: &super::FinPoset, ids: &[usize]| {
        let sub = p.restrict(ids);
        let names = ids.iter().map(|&i| p.name(i).to_string()).collect();
        let leq = (0..ids.len()).map(|a| (0..ids.len()).map(|b| sub.leq(a, b)).collect()).collect();
        FinLattice::from_relation(names, leq).ok()
    };
    let lx = lattice(&f.dom, &down_x)?;
    let ly = lattice(&f.cod, &down_y)?;
    let pos = |ids: &[usize], v: usize| ids.iter().position(|&i| i == v).expect("value lies in the downset");
    let fwd_table: Vec<usize> = down_x.iter().map(|&a| pos(&down_y, f.apply(a))).collect();
    let bwd_table: Vec<usize> = down_y
        .iter()
        .map(|&y| {
            let least = least_preimage(f, x, y).expect("y is below f(x)");
            let chosen = least.unwrap_or_else(|| {
                let pre: Vec<usize> = down_x.iter().copied().filter(|&a| f.cod.leq(y, f.apply(a))).collect();
                f.dom.minimal(&pre)[0]
            });
            pos(&down_x, chosen)
        })
        .collect();
    let fin = |e: &LatticeElem| match e {
        LatticeElem::Fin(i) => *i,
        other => panic!("expected a finite-lattice element, found {other}"),
    };
    let fwd = Arc::new(move |e: &LatticeElem| LatticeElem::Fin(fwd_table[fin(e)]));
    let bwd = Arc::new(move |e: &LatticeElem| LatticeElem::Fin(bwd_table[fin(e)]));
    Some((FibreDesc::Fin(Arc::new(lx)), FibreDesc::Fin(Arc::new(ly)), fwd, bwd))
}
