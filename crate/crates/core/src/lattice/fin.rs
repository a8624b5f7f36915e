//! Explicit finite bounded lattices, validated on construction.

use super::LatticeError;

/// A finite bounded lattice given by named elements and an order relation.
///
/// Meets and joins are precomputed, so every operation after construction
/// is a table lookup.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinLattice {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
    top: usize,
    bottom: usize,
}

impl FinLattice {
    /// Builds a lattice from a full order relation: `leq[i][j]` is `i ⊑ j`.
    pub fn from_relation(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self, LatticeError> {
        let n = names.len();
        if n == 0 {
            return Err(LatticeError::InvalidFin("empty carrier".into()));
        }
        if leq.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(LatticeError::InvalidFin("relation is not square".into()));
        }
        for i in 0..n {
            if !leq[i][i] {
                return Err(LatticeError::InvalidFin(format!("not reflexive at {}", names[i])));
            }
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(LatticeError::InvalidFin(format!(
                        "not antisymmetric: {} and {}",
                        names[i], names[j]
                    )));
                }
                for k in 0..n {
                    if leq[i][j] && leq[j][k] && !leq[i][k] {
                        return Err(LatticeError::InvalidFin(format!(
                            "not transitive: {} ⊑ {} ⊑ {}",
                            names[i], names[j], names[k]
                        )));
                    }
                }
            }
        }
        let top = (0..n)
            .find(|&t| (0..n).all(|i| leq[i][t]))
            .ok_or_else(|| LatticeError::InvalidFin("no greatest element".into()))?;
        let bottom = (0..n)
            .find(|&b| (0..n).all(|i| leq[b][i]))
            .ok_or_else(|| LatticeError::InvalidFin("no least element".into()))?;

        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<usize> = (0..n).filter(|&c| leq[c][a] && leq[c][b]).collect();
                let glb = lower.iter().copied().find(|&c| lower.iter().all(|&d| leq[d][c]));
                meet[a][b] = glb.ok_or_else(|| {
                    LatticeError::InvalidFin(format!("no meet of {} and {}", names[a], names[b]))
                })?;
                let upper: Vec<usize> = (0..n).filter(|&c| leq[a][c] && leq[b][c]).collect();
                let lub = upper.iter().copied().find(|&c| upper.iter().all(|&d| leq[c][d]));
                join[a][b] = lub.ok_or_else(|| {
                    LatticeError::InvalidFin(format!("no join of {} and {}", names[a], names[b]))
                })?;
            }
        }
        Ok(Self { names, leq, meet, join, top, bottom })
    }

    /// Builds a lattice from generating pairs `(lower, upper)`; the order is
    /// their reflexive-transitive closure.
    pub fn from_covers(names: &[&str], covers: &[(&str, &str)]) -> Result<Self, LatticeError> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let n = names.len();
        let index = |s: &str| {
            names
                .iter()
                .position(|m| m == s)
                .ok_or_else(|| LatticeError::InvalidFin(format!("unknown element {s}")))
        };
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (lo, hi) in covers {
            leq[index(lo)?][index(hi)?] = true;
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
        Self::from_relation(names, leq)
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

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    /// Elements strictly above `a` with nothing strictly in between.
    pub fn upper_covers(&self, a: usize) -> Vec<usize> {
        let n = self.len();
        (0..n)
            .filter(|&b| b != a && self.leq[a][b])
            .filter(|&b| !(0..n).any(|c| c != a && c != b && self.leq[a][c] && self.leq[c][b]))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> FinLattice {
        FinLattice::from_covers(
            &["bot", "l", "r", "top"],
            &[("bot", "l"), ("bot", "r"), ("l", "top"), ("r", "top")],
        )
        .unwrap()
    }

    #[test]
    fn diamond_tables() {
        let d = diamond();
        let (l, r) = (d.id_of("l").unwrap(), d.id_of("r").unwrap());
        assert_eq!(d.name(d.meet(l, r)), "bot");
        assert_eq!(d.name(d.join(l, r)), "top");
        assert_eq!(d.upper_covers(d.bottom()).len(), 2);
    }

    #[test]
    fn rejects_missing_join() {
        // two maximal elements, no top
        let err = FinLattice::from_covers(&["bot", "a", "b"], &[("bot", "a"), ("bot", "b")]);
        assert!(matches!(err, Err(LatticeError::InvalidFin(_))));
    }

    #[test]
    fn rejects_non_lattice_with_bounds() {
        // bounded poset where a, b have two incomparable upper bounds c, d
        let err = FinLattice::from_covers(
            &["bot", "a", "b", "c", "d", "top"],
            &[
                ("bot", "a"),
                ("bot", "b"),
                ("a", "c"),
                ("a", "d"),
                ("b", "c"),
                ("b", "d"),
                ("c", "top"),
                ("d", "top"),
            ],
        );
        assert!(matches!(err, Err(LatticeError::InvalidFin(m)) if m.contains("join")));
    }

    #[test]
    fn rejects_cycle() {
        let names = vec!["a".to_string(), "b".to_string()];
        let leq = vec![vec![true, true], vec![true, true]];
        assert!(FinLattice::from_relation(names, leq).is_err());
    }
}
