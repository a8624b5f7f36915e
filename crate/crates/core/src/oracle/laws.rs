use super::Report;
use crate::lattice::literal::show;
use crate::lattice::{bottom, enumerate, join_unchecked, leq_unchecked, meet_unchecked, top, FibreDesc, LatticeElem, LatticeError};

/// Up to `limit` elements of `d`: all of them if there are few enough,
/// otherwise an evenly spaced selection that keeps both bounds.
pub fn spread(d: &FibreDesc, limit: usize) -> Result<Vec<LatticeElem>, LatticeError> {
    let all = enumerate(d)?;
    if all.len() <= limit {
        return Ok(all);
    }
    let step = all.len() as f64 / (limit - 1) as f64;
    let mut picked: Vec<LatticeElem> = (0..limit - 1).map(|i| all[(i as f64 * step) as usize].clone()).collect();
    picked.push(top(d));
    if !picked.contains(&bottom(d)) {
        picked.push(bottom(d));
    }
    Ok(picked)
}

/// Bounded-lattice laws on `d`: idempotence, commutativity, absorption,
/// the unit laws and agreement of the order with meets and joins on pairs,
/// associativity on triples. Fibres larger than `limit` are checked on a
/// [`spread`] of `limit` elements.
pub fn check_lattice_laws(d: &FibreDesc, limit: usize) -> Result<Report, LatticeError> {
    let es = spread(d, limit)?;
    let (t, b) = (top(d), bottom(d));
    let mut r = Report::default();
    let meet = |x: &LatticeElem, y: &LatticeElem| meet_unchecked(d, x, y);
    let join = |x: &LatticeElem, y: &LatticeElem| join_unchecked(d, x, y);
    for x in &es {
        r.check(meet(x, x) == *x && join(x, x) == *x, || format!("idempotence fails at {}", show(d, x)));
        r.check(meet(x, &t) == *x && join(x, &b) == *x, || format!("unit laws fail at {}", show(d, x)));
        r.check(leq_unchecked(d, &b, x) && leq_unchecked(d, x, &t), || format!("{} is not between the bounds", show(d, x)));
        for y in &es {
            let (m, j) = (meet(x, y), join(x, y));
            r.check(m == meet(y, x) && j == join(y, x), || format!("commutativity fails at {}, {}", show(d, x), show(d, y)));
            r.check(meet(x, &j) == *x && join(x, &m) == *x, || format!("absorption fails at {}, {}", show(d, x), show(d, y)));
            r.check(leq_unchecked(d, x, y) == (m == *x), || format!("order disagrees with meet at {}, {}", show(d, x), show(d, y)));
            for z in &es {
                r.check(meet(&m, z) == meet(x, &meet(y, z)) && join(&j, z) == join(x, &join(y, z)), || {
                    format!("associativity fails at {}, {}, {}", show(d, x), show(d, y), show(d, z))
                });
            }
        }
    }
    Ok(r)
}
