//! Finite posets and functions between them, classified as monotone,
//! conditionally multiplicative (cm) and stable by exhaustive search.

use std::fmt;
use std::sync::Arc;

use super::OracleError;

/// A finite partial order. Elements are identified by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinPoset {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    /// For product posets, the component indices of each element.
    coords: Vec<Vec<usize>>,
}

impl FinPoset {
    /// Checks reflexivity, antisymmetry and transitivity.
    pub fn new(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self, OracleError> {
        let n = names.len();
        if leq.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(OracleError::NotPartialOrder("relation has the wrong shape".into()));
        }
        for a in 0..n {
            if !leq[a][a] {
                return Err(OracleError::NotPartialOrder(format!("{} is not below itself", names[a])));
            }
            for b in 0..n {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(OracleError::NotPartialOrder(format!(
                        "{} and {} are below each other",
                        names[a], names[b]
                    )));
                }
                for c in 0..n {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return Err(OracleError::NotPartialOrder(format!(
                            "{} <= {} <= {} but not {} <= {}",
                            names[a], names[b], names[c], names[a], names[c]
                        )));
                    }
                }
            }
        }
        Ok(FinPoset { names, leq, coords: Vec::new() })
    }

    /// The reflexive-transitive closure of `covers`, where `(a, b)` means `a <= b`.
    pub fn from_covers(names: &[&str], covers: &[(&str, &str)]) -> Result<Self, OracleError> {
        let n = names.len();
        let idx = |s: &str| {
            names
                .iter()
                .position(|x| *x == s)
                .ok_or_else(|| OracleError::NotPartialOrder(format!("unknown element {s}")))
        };
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in covers {
            leq[idx(a)?][idx(b)?] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i][k] && leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        FinPoset::new(names.iter().map(|s| s.to_string()).collect(), leq)
    }

    /// A chain listed from the bottom up.
    pub fn chain(names: &[&str]) -> Self {
        let covers: Vec<(&str, &str)> = names.windows(2).map(|w| (w[0], w[1])).collect();
        FinPoset::from_covers(names, &covers).expect("a chain is a partial order")
    }

    /// Componentwise order on tuples; element names are `(a,b,…)`.
    pub fn product(factors: &[&FinPoset]) -> Self {
        let mut coords: Vec<Vec<usize>> = vec![Vec::new()];
        for f in factors {
            coords = coords
                .into_iter()
                .flat_map(|c| {
                    (0..f.len()).map(move |i| {
                        let mut c = c.clone();
                        c.push(i);
                        c
                    })
                })
                .collect();
        }
        let names = coords
            .iter()
            .map(|c| {
                let parts: Vec<&str> = c.iter().zip(factors).map(|(i, f)| f.name(*i)).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let leq = coords
            .iter()
            .map(|a| {
                coords
                    .iter()
                    .map(|b| a.iter().zip(b).zip(factors).all(|((x, y), f)| f.leq(*x, *y)))
                    .collect()
            })
            .collect();
        FinPoset { names, leq, coords }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn id_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Component indices of a product element.
    pub fn coords(&self, id: usize) -> &[usize] {
        &self.coords[id]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn downset(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.leq(a, x)).collect()
    }

    /// The least element of `set`, if it has one.
    pub fn least(&self, set: &[usize]) -> Option<usize> {
        set.iter().copied().find(|&a| set.iter().all(|&b| self.leq(a, b)))
    }

    /// The greatest element of `set`, if it has one.
    pub fn greatest(&self, set: &[usize]) -> Option<usize> {
        set.iter().copied().find(|&a| set.iter().all(|&b| self.leq(b, a)))
    }

    /// Minimal elements of `set`.
    pub fn minimal(&self, set: &[usize]) -> Vec<usize> {
        set.iter().copied().filter(|&a| set.iter().all(|&b| b == a || !self.leq(b, a))).collect()
    }

    /// Greatest lower bound, if it exists.
    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        let lower: Vec<usize> = (0..self.len()).filter(|&c| self.leq(c, a) && self.leq(c, b)).collect();
        self.greatest(&lower)
    }

    /// Least upper bound, if it exists.
    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        let upper: Vec<usize> = (0..self.len()).filter(|&c| self.leq(a, c) && self.leq(b, c)).collect();
        self.least(&upper)
    }

    /// The sub-order on `ids`, keeping names.
    pub fn restrict(&self, ids: &[usize]) -> FinPoset {
        FinPoset {
            names: ids.iter().map(|&i| self.names[i].clone()).collect(),
            leq: ids.iter().map(|&a| ids.iter().map(|&b| self.leq(a, b)).collect()).collect(),
            coords: Vec::new(),
        }
    }
}

/// A total function between finite posets, given by its table.
#[derive(Debug, Clone)]
pub struct FinFun {
    pub name: String,
    pub dom: Arc<FinPoset>,
    pub cod: Arc<FinPoset>,
    table: Vec<usize>,
}

impl FinFun {
    pub fn new(name: &str, dom: Arc<FinPoset>, cod: Arc<FinPoset>, table: Vec<usize>) -> Result<Self, OracleError> {
        if table.len() != dom.len() || table.iter().any(|&y| y >= cod.len()) {
            return Err(OracleError::BadTable(name.to_string()));
        }
        Ok(FinFun { name: name.to_string(), dom, cod, table })
    }

    pub fn from_fn(name: &str, dom: Arc<FinPoset>, cod: Arc<FinPoset>, f: impl Fn(usize) -> usize) -> Self {
        let table = (0..dom.len()).map(f).collect();
        FinFun::new(name, dom, cod, table).expect("function table out of range")
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }
}

/// `f(a ⊓ b) ≠ f(a) ⊓ f(b)` for `a, b ⊑ at`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CmWitness {
    pub at: usize,
    pub a: usize,
    pub b: usize,
}

/// The inputs below `at` producing at least `output` have no least element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableWitness {
    pub at: usize,
    pub output: usize,
    pub minimal: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub monotone: bool,
    pub cm: bool,
    pub stable: bool,
    pub monotone_witness: Option<(usize, usize)>,
    pub cm_witness: Option<CmWitness>,
    pub stable_witness: Option<StableWitness>,
}

fn monotone_witness(f: &FinFun) -> Option<(usize, usize)> {
    let n = f.dom.len();
    (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .find(|&(a, b)| f.dom.leq(a, b) && !f.cod.leq(f.apply(a), f.apply(b)))
}

fn cm_witness(f: &FinFun) -> Option<CmWitness> {
    for x in 0..f.dom.len() {
        let down = f.dom.downset(x);
        for (i, &a) in down.iter().enumerate() {
            for &b in &down[i + 1..] {
                let Some(m) = f.dom.meet(a, b) else { continue };
                if f.cod.meet(f.apply(a), f.apply(b)) != Some(f.apply(m)) {
                    return Some(CmWitness { at: x, a, b });
                }
            }
        }
    }
    None
}

/// `{x0 ⊑ x | y ⊑ f(x0)}`.
fn preimages_below(f: &FinFun, x: usize, y: usize) -> Vec<usize> {
    f.dom.downset(x).into_iter().filter(|&x0| f.cod.leq(y, f.apply(x0))).collect()
}

/// Checks existence and minimality at one point; `None` when they hold.
pub fn stable_witness_at(f: &FinFun, x: usize) -> Option<StableWitness> {
    for y in f.cod.downset(f.apply(x)) {
        let pre = preimages_below(f, x, y);
        if f.dom.least(&pre).is_none() {
            return Some(StableWitness { at: x, output: y, minimal: f.dom.minimal(&pre) });
        }
    }
    None
}

pub fn stable_at(f: &FinFun, x: usize) -> bool {
    stable_witness_at(f, x).is_none()
}

pub fn classify(f: &FinFun) -> Classification {
    let monotone_witness = monotone_witness(f);
    let monotone = monotone_witness.is_none();
    let cm_witness = cm_witness(f);
    let stable_witness = (0..f.dom.len()).find_map(|x| stable_witness_at(f, x));
    Classification {
        monotone,
        cm: monotone && cm_witness.is_none(),
        stable: monotone && stable_witness.is_none(),
        monotone_witness,
        cm_witness,
        stable_witness,
    }
}

/// The least `x0 ⊑ x` with `y ⊑ f(x0)`, or `None` when the candidates have
/// no least element.
pub fn least_preimage(f: &FinFun, x: usize, y: usize) -> Result<Option<usize>, OracleError> {
    if !f.cod.leq(y, f.apply(x)) {
        return Err(OracleError::Precondition(format!(
            "{} is not below {}({}) = {}",
            f.cod.name(y),
            f.name,
            f.dom.name(x),
            f.cod.name(f.apply(x))
        )));
    }
    Ok(f.dom.least(&preimages_below(f, x, y)))
}

/// A readable account of a classification.
pub struct Verdict<'a>(pub &'a FinFun, pub &'a Classification);

impl fmt::Display for Verdict<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (f, c) = (self.0, self.1);
        writeln!(out, "{}: monotone={} cm={} stable={}", f.name, c.monotone, c.cm, c.stable)?;
        let (d, r) = (&f.dom, &f.cod);
        if let Some((a, b)) = c.monotone_witness {
            writeln!(out, "  not monotone: {} <= {} but {} > {}", d.name(a), d.name(b), r.name(f.apply(a)), r.name(f.apply(b)))?;
        }
        if let Some(w) = c.cm_witness {
            let m = d.meet(w.a, w.b).expect("witness pairs have a meet");
            writeln!(
                out,
                "  meets not preserved below {}: f({} /\\ {}) = f({}) = {}, but f({}) /\\ f({}) = {} /\\ {}",
                d.name(w.at),
                d.name(w.a),
                d.name(w.b),
                d.name(m),
                r.name(f.apply(m)),
                d.name(w.a),
                d.name(w.b),
                r.name(f.apply(w.a)),
                r.name(f.apply(w.b))
            )?;
        }
        if let Some(w) = &c.stable_witness {
            let mins: Vec<&str> = w.minimal.iter().map(|&m| d.name(m)).collect();
            writeln!(
                out,
                "  no least input below {} giving {}: minimal inputs {}",
                d.name(w.at),
                r.name(w.output),
                mins.join(", ")
            )?;
        }
        Ok(())
    }
}

/// The functions of the classification examples, over lifted booleans.
pub mod examples {
    use super::*;

    /// `⊥ ⊑ tt`, `⊥ ⊑ ff`.
    pub fn bool_bot() -> Arc<FinPoset> {
        Arc::new(FinPoset::from_covers(&["⊥", "tt", "ff"], &[("⊥", "tt"), ("⊥", "ff")]).unwrap())
    }

    /// `⊥ ⊑ ⊤`.
    pub fn two() -> Arc<FinPoset> {
        Arc::new(FinPoset::chain(&["⊥", "⊤"]))
    }

    #[derive(Clone, Copy, PartialEq, Eq)]
    enum B {
        Bot,
        T,
        F,
    }

    fn decode(id: usize) -> B {
        [B::Bot, B::T, B::F][id]
    }

    fn encode(b: B) -> usize {
        match b {
            B::Bot => 0,
            B::T => 1,
            B::F => 2,
        }
    }

    fn binary(name: &str, f: impl Fn(B, B) -> B) -> FinFun {
        let b = bool_bot();
        let dom = Arc::new(FinPoset::product(&[&b, &b]));
        let d = dom.clone();
        FinFun::from_fn(name, dom, b, move |x| {
            let c = d.coords(x);
            encode(f(decode(c[0]), decode(c[1])))
        })
    }

    pub fn strict_or() -> FinFun {
        binary("strictOr", |x, y| match (x, y) {
            (B::Bot, _) | (_, B::Bot) => B::Bot,
            (B::F, B::F) => B::F,
            _ => B::T,
        })
    }

    pub fn short_circuit_or() -> FinFun {
        binary("shortCircuitOr", |x, y| match x {
            B::T => B::T,
            B::F => y,
            B::Bot => B::Bot,
        })
    }

    pub fn parallel_or() -> FinFun {
        binary("parallelOR", |x, y| match (x, y) {
            (B::T, _) | (_, B::T) => B::T,
            (B::F, B::F) => B::F,
            _ => B::Bot,
        })
    }

    pub fn gustave() -> FinFun {
        let b = bool_bot();
        let dom = Arc::new(FinPoset::product(&[&b, &b, &b]));
        let d = dom.clone();
        FinFun::from_fn("gustave", dom, two(), move |x| {
            let c: Vec<B> = d.coords(x).iter().map(|&i| decode(i)).collect();
            let hit = matches!(
                (c[0], c[1], c[2]),
                (B::T, B::F, _) | (B::F, _, B::T) | (_, B::T, B::F)
            );
            usize::from(hit)
        })
    }

    /// The chain `⊥ ⊑ k ⊑ … ⊑ 1 ⊑ 0` cut off at `k`, mapped to `⊥` at the
    /// bottom and `⊤` everywhere else. The full chain is infinite; every
    /// truncation has a least element above `⊥`, so it is stable.
    pub fn unstable_truncated(k: usize) -> FinFun {
        let mut names = vec!["⊥".to_string()];
        names.extend((0..=k).rev().map(|n| n.to_string()));
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let dom = Arc::new(FinPoset::chain(&refs));
        FinFun::from_fn(&format!("unstable_{k}"), dom, two(), |x| usize::from(x != 0))
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;

    #[test]
    fn invalid_orders_are_rejected() {
        assert!(FinPoset::from_covers(&["a", "b"], &[("a", "b"), ("b", "a")]).is_err());
        let bad = vec![vec![true, false], vec![false, false]];
        assert!(FinPoset::new(vec!["a".into(), "b".into()], bad).is_err());
    }

    #[test]
    fn products_order_componentwise() {
        let b = bool_bot();
        let p = FinPoset::product(&[&b, &b]);
        assert_eq!(p.len(), 9);
        let (tb, bt) = (p.id_of("(tt,⊥)").unwrap(), p.id_of("(⊥,tt)").unwrap());
        assert_eq!(p.meet(tb, bt), p.id_of("(⊥,⊥)"));
        assert_eq!(p.join(tb, bt), p.id_of("(tt,tt)"));
        assert_eq!(p.join(p.id_of("(tt,⊥)").unwrap(), p.id_of("(ff,⊥)").unwrap()), None);
    }

    #[test]
    fn parallel_or_is_not_cm() {
        let f = parallel_or();
        let c = classify(&f);
        assert!(c.monotone && !c.cm && !c.stable);
        let w = c.cm_witness.unwrap();
        let mut pair = [f.dom.name(w.a), f.dom.name(w.b)];
        pair.sort();
        assert_eq!(pair, ["(tt,⊥)", "(⊥,tt)"]);
        assert_eq!(f.dom.name(w.at), "(tt,tt)");
        let text = Verdict(&f, &c).to_string();
        assert!(text.contains("meets not preserved"), "{text}");
    }

    #[test]
    fn gustave_and_ors() {
        let g = classify(&gustave());
        assert!(g.monotone && g.cm && g.stable);
        for f in [strict_or(), short_circuit_or()] {
            let c = classify(&f);
            assert!(c.monotone && c.cm && c.stable, "{}", f.name);
        }
    }

    #[test]
    fn least_preimages() {
        let f = short_circuit_or();
        let (x, tt) = (f.dom.id_of("(tt,ff)").unwrap(), f.cod.id_of("tt").unwrap());
        assert_eq!(least_preimage(&f, x, tt).unwrap(), f.dom.id_of("(tt,⊥)"));
        let s = strict_or();
        assert_eq!(least_preimage(&s, x, tt).unwrap(), Some(x));
        let p = parallel_or();
        let tt2 = p.dom.id_of("(tt,tt)").unwrap();
        assert_eq!(least_preimage(&p, tt2, tt).unwrap(), None);
        assert!(least_preimage(&f, f.dom.id_of("(ff,ff)").unwrap(), tt).is_err());
    }

    #[test]
    fn bottom_output_needs_bottom_input() {
        for f in [strict_or(), short_circuit_or(), parallel_or(), gustave(), unstable_truncated(4)] {
            let bot_out = f.cod.least(&(0..f.cod.len()).collect::<Vec<_>>()).unwrap();
            for x in 0..f.dom.len() {
                let down = f.dom.downset(x);
                assert_eq!(least_preimage(&f, x, bot_out).unwrap(), f.dom.least(&down), "{}", f.name);
            }
        }
    }

    #[test]
    fn truncated_unstable_is_stable() {
        for k in [0, 3, 10] {
            let c = classify(&unstable_truncated(k));
            assert!(c.monotone && c.cm && c.stable);
        }
    }
}
