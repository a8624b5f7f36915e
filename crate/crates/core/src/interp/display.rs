//! Type-directed display of fibres and tangents.
//!
//! A list fibre is a right-nested product ending in `1`. For display it is
//! flattened to one tuple per list, and the terminating unit is dropped.
//! Reading accepts the same flattened form.

use std::fmt;

use serde_json::{json, Value as Json};

use crate::fam::Value;
use crate::lang::Ty;
use crate::lattice::literal::{self, SliceLit};
use crate::lattice::{FibreDesc, LatticeElem};
use crate::rational;
use crate::Error;

enum Node {
    Leaf(String),
    Tuple(Vec<Node>),
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Leaf(s) => write!(f, "{s}"),
            Node::Tuple(ns) => {
                write!(f, "(")?;
                for (i, n) in ns.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{n}")?;
                }
                write!(f, ")")
            }
        }
    }
}

fn lit_node(lit: SliceLit) -> Node {
    match lit {
        SliceLit::Tuple(ls) => Node::Tuple(ls.into_iter().map(lit_node).collect()),
        other => Node::Leaf(other.to_string()),
    }
}

/// Compact shape of a fibre: `()` for the one-point lattice, `2`, `L(d)`,
/// `I(x)` and tuples.
fn shape(d: &FibreDesc) -> String {
    fibre_node(d).to_string()
}

fn fibre_node(d: &FibreDesc) -> Node {
    match d {
        FibreDesc::One => Node::Leaf("()".into()),
        FibreDesc::Prod(ds) if ds.is_empty() => Node::Leaf("()".into()),
        FibreDesc::Prod(ds) => Node::Tuple(ds.iter().map(fibre_node).collect()),
        FibreDesc::Two => Node::Leaf("2".into()),
        FibreDesc::Lifted(inner) => Node::Leaf(format!("L({})", shape(inner))),
        FibreDesc::IntervalAt(x) => Node::Leaf(format!("I({})", rational::format(x))),
        FibreDesc::Fin(_) => Node::Leaf(d.to_string()),
    }
}

fn flatten(ty: &Ty, v: &Value, node: Node) -> Node {
    match (ty, v, node) {
        (Ty::List(a), Value::List(vs), Node::Tuple(mut parts)) if !vs.is_empty() => {
            let mut items = Vec::with_capacity(vs.len());
            for x in vs.iter() {
                if parts.len() != 2 {
                    panic!("internal error: list fibre is not a right-nested pair");
                }
                let rest = parts.pop().unwrap();
                items.push(flatten(a, x, parts.pop().unwrap()));
                parts = match rest {
                    Node::Tuple(p) => p,
                    leaf => vec![leaf],
                };
            }
            Node::Tuple(items)
        }
        (Ty::Prod(a, b), Value::Pair(x, y), Node::Tuple(mut parts)) if parts.len() == 2 => {
            let second = parts.pop().unwrap();
            let first = parts.pop().unwrap();
            Node::Tuple(vec![flatten(a, x, first), flatten(b, y, second)])
        }
        (Ty::Sum(a, _), Value::Inl(x), n) => flatten(a, x, n),
        (Ty::Sum(_, b), Value::Inr(y), n) => flatten(b, y, n),
        (_, _, n) => n,
    }
}

fn unflatten(ty: &Ty, v: &Value, lit: SliceLit) -> Result<SliceLit, Error> {
    if matches!(lit, SliceLit::Bot | SliceLit::Top) {
        return Ok(lit);
    }
    Ok(match (ty, v, lit) {
        (Ty::List(a), Value::List(vs), lit) if !vs.is_empty() => {
            let mut items = match lit {
                SliceLit::Tuple(ls) if vs.len() > 1 => ls,
                single => vec![single],
            };
            if items.len() == vs.len() + 1 && items.last() == Some(&SliceLit::Unit) {
                items.pop();
            }
            if items.len() != vs.len() {
                return Err(Error::Input(format!(
                    "a slice of this list needs {} components, found {}",
                    vs.len(),
                    items.len()
                )));
            }
            let mut acc = SliceLit::Unit;
            for (x, item) in vs.iter().zip(items).rev() {
                acc = SliceLit::Tuple(vec![unflatten(a, x, item)?, acc]);
            }
            acc
        }
        (Ty::Prod(a, b), Value::Pair(x, y), SliceLit::Tuple(mut ls)) if ls.len() == 2 => {
            let second = ls.pop().unwrap();
            let first = ls.pop().unwrap();
            SliceLit::Tuple(vec![unflatten(a, x, first)?, unflatten(b, y, second)?])
        }
        (Ty::Sum(a, _), Value::Inl(x), lit) => unflatten(a, x, lit)?,
        (Ty::Sum(_, b), Value::Inr(y), lit) => unflatten(b, y, lit)?,
        (_, _, lit) => lit,
    })
}

/// Displays an element of the fibre `d` over the value `v : ty`.
pub fn show_tangent(ty: &Ty, v: &Value, d: &FibreDesc, e: &LatticeElem) -> String {
    flatten(ty, v, lit_node(literal::render(d, e))).to_string()
}

/// Reads the display form back into an element of `d`.
pub fn read_tangent(ty: &Ty, v: &Value, d: &FibreDesc, text: &str) -> Result<LatticeElem, Error> {
    let lit = unflatten(ty, v, literal::parse(text)?)?;
    literal::resolve(d, &lit).map_err(|e| match e {
        crate::lattice::LatticeError::Literal(msg) => {
            Error::Input(format!("{msg}; expected an element of fibre {}", show_fibre(ty, v, d)))
        }
        other => other.into(),
    })
}

/// Displays the shape of the fibre `d` over the value `v : ty`.
pub fn show_fibre(ty: &Ty, v: &Value, d: &FibreDesc) -> String {
    flatten(ty, v, fibre_node(d)).to_string()
}

/// Exact nested structure of a tangent: units are `[]`, tuples arrays,
/// `"bot"`/`"top"`, `{"up": …}`, intervals `{"lo", "hi"}` with `p/q`
/// strings and finite-lattice elements `{"fin": name}`.
pub fn tangent_json(d: &FibreDesc, e: &LatticeElem) -> Json {
    match (d, e) {
        (_, LatticeElem::Unit) => json!([]),
        (_, LatticeElem::Bot) => json!("bot"),
        (_, LatticeElem::Top) => json!("top"),
        (FibreDesc::Lifted(inner), LatticeElem::Up(a)) => json!({ "up": tangent_json(inner, a) }),
        (FibreDesc::Prod(ds), LatticeElem::Tuple(es)) => {
            Json::Array(ds.iter().zip(es).map(|(d, e)| tangent_json(d, e)).collect())
        }
        (_, LatticeElem::Interval(iv)) => {
            json!({ "lo": rational::format_pq(&iv.lo), "hi": rational::format_pq(&iv.hi) })
        }
        (FibreDesc::Fin(l), LatticeElem::Fin(id)) => json!({ "fin": l.name(*id) }),
        _ => panic!("tangent_json: element {e} does not conform to {d}"),
    }
}

/// Exact structure of a fibre: `"one"`, `"two"`, `{"lifted": …}`, arrays
/// for products, `{"interval_at": "p/q"}` and `{"fin": [names]}`.
pub fn fibre_json(d: &FibreDesc) -> Json {
    match d {
        FibreDesc::One => json!("one"),
        FibreDesc::Two => json!("two"),
        FibreDesc::Lifted(inner) => json!({ "lifted": fibre_json(inner) }),
        FibreDesc::Prod(ds) => Json::Array(ds.iter().map(fibre_json).collect()),
        FibreDesc::IntervalAt(x) => json!({ "interval_at": rational::format_pq(x) }),
        FibreDesc::Fin(l) => json!({ "fin": (0..l.len()).map(|i| l.name(i)).collect::<Vec<_>>() }),
    }
}

/// A first-order value as JSON: `[]` for unit, arrays for pairs and lists,
/// `{"inl": …}`/`{"inr": …}`, numbers as `p/q` strings.
pub fn value_json(v: &Value) -> Json {
    use crate::fam::Prim;
    match v {
        Value::Unit => json!([]),
        Value::Prim(Prim::Num(x)) => json!(rational::format_pq(x)),
        Value::Prim(Prim::Bool(b)) => json!(b),
        Value::Prim(Prim::Sym(s)) => json!(s.as_ref()),
        Value::Pair(a, b) => json!([value_json(a), value_json(b)]),
        Value::Inl(a) => json!({ "inl": value_json(a) }),
        Value::Inr(b) => json!({ "inr": value_json(b) }),
        Value::List(vs) => Json::Array(vs.iter().map(value_json).collect()),
        Value::Closure(_) => json!("<closure>"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_value;
    use crate::lattice::{enumerate, literal::read};
    use crate::rational::int;

    fn label() -> Ty {
        Ty::sum(Ty::Unit, Ty::Unit)
    }

    fn db_ty() -> Ty {
        Ty::prod(label(), Ty::list(Ty::prod(label(), Ty::prim("num"))))
    }

    fn fibre(n: usize) -> FibreDesc {
        let row = FibreDesc::Prod(vec![FibreDesc::One, FibreDesc::lifted(FibreDesc::One)]);
        let list = (0..n).fold(FibreDesc::One, |acc, _| FibreDesc::Prod(vec![row.clone(), acc]));
        FibreDesc::Prod(vec![FibreDesc::One, list])
    }

    #[test]
    fn lists_flatten_without_terminator() {
        let v = parse_value("(inl (), [(inl (), 0), (inr (), 1), (inl (), 1)])", &db_ty()).unwrap();
        let d = fibre(3);
        let e = read(&d, "((), (((), ^), (((), _), (((), ^), ()))))").unwrap();
        let text = show_tangent(&db_ty(), &v, &d, &e);
        assert_eq!(text, "((), (((), ^), ((), _), ((), ^)))");
        assert_eq!(read_tangent(&db_ty(), &v, &d, &text).unwrap(), e);
        assert_eq!(show_fibre(&db_ty(), &v, &d), "((), (((), L(())), ((), L(())), ((), L(()))))");
    }

    #[test]
    fn display_roundtrips_on_short_lists() {
        for n in 0..3 {
            let rows: Vec<String> = (0..n).map(|i| format!("(inr (), {i})")).collect();
            let v = parse_value(&format!("(inl (), [{}])", rows.join(", ")), &db_ty()).unwrap();
            let d = fibre(n);
            for e in enumerate(&d).unwrap() {
                let text = show_tangent(&db_ty(), &v, &d, &e);
                assert_eq!(read_tangent(&db_ty(), &v, &d, &text).unwrap(), e, "{text}");
            }
        }
    }

    #[test]
    fn json_is_exact() {
        let d = FibreDesc::Prod(vec![FibreDesc::IntervalAt(int(0)), FibreDesc::lifted(FibreDesc::Two)]);
        let e = read(&d, "([-1/10, 1/10], up(_))").unwrap();
        assert_eq!(
            tangent_json(&d, &e).to_string(),
            r#"[{"hi":"1/10","lo":"-1/10"},{"up":"bot"}]"#
        );
        assert_eq!(fibre_json(&d).to_string(), r#"[{"interval_at":"0/1"},{"lifted":"two"}]"#);
        let v = parse_value("(inl (), [(inr (), 1/2)])", &db_ty()).unwrap();
        assert_eq!(value_json(&v).to_string(), r#"[{"inl":[]},[[{"inr":[]},"1/2"]]]"#);
    }
}
