//! The acceptance suite: one PASS/FAIL line per criterion. Exits non-zero
//! if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::fmt::Display;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use gslice::fam::{self, Obj, Tangent, Value};
use gslice::interp::display::{read_tangent, show_tangent};
use gslice::interp::{eval_plain, interp_ctx};
use gslice::lattice::literal::{read, show};
use gslice::lattice::{bottom, top, LatticeElem};
use gslice::oracle::{
    check_chain_rule, check_galois, check_lattice_laws, check_morphism_sampled, classify, examples, least_preimage,
    rng, seed_from_env, Report,
};
use gslice::prims;
use gslice::program::Loaded;
use gslice::rational::{int, ratio, Rational};
use rand::Rng;

const QUERY_A: &str = "(inl (), [(inl (), 0), (inr (), 1), (inl (), 1)])";
const QUERY_B: &str = "(inr (), [(inl (), 0), (inr (), 1), (inl (), 1)])";

const QUICK: Duration = Duration::from_secs(1);
const CORPUS_BUDGET: Duration = Duration::from_secs(60);
const FIBRE_CAP: u128 = 1 << 16;
const MIN_PROGRAMS: usize = 20;
const MIN_INPUTS: usize = 3;
const MIN_CHAINS: usize = 10;
const LAW_SAMPLE: usize = 24;
const SAMPLE_POINTS: usize = 100;
const SAMPLE_PAIRS: usize = 20;

type Outcome = Result<String, String>;

fn ok<T, E: Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn passed(what: &str, r: &Report) -> Result<(), String> {
    require(r.passed(), || format!("{what}: {r}"))
}

/// `key = value` lines of the committed golden file.
fn golden() -> Result<BTreeMap<String, String>, String> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/query.slices");
    let text = ok(std::fs::read_to_string(path))?;
    Ok(text
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect())
}

/// Recomputes the slice named by a golden key `sig label op [arg]` and
/// compares it with the golden value, both as text and as a lattice element.
fn check_golden(key: &str, want: &str) -> Result<(), String> {
    let mut parts = key.splitn(4, ' ');
    let (sig, label, op) = (parts.next().unwrap_or(""), parts.next().unwrap_or(""), parts.next().unwrap_or(""));
    let arg = parts.next().unwrap_or("");
    let (loaded, _) = ok(Loaded::load(&common::read("query.gs"), Some(sig), false))?;
    let args = ok(loaded.parse_input(if label == "a" { QUERY_A } else { QUERY_B }))?;
    let x = loaded.slice_input(&args);
    let c = loaded.compiled();
    let s = ok(c.session(&x))?;
    let (ity, dx) = (c.input_ty(), s.input_fibre());
    let (oty, dy) = (c.output_ty(), s.output_fibre());
    let (got, elem, expect) = match op {
        "bwd" => {
            let e = ok(s.bwd(&ok(read(dy, arg))?))?;
            (show_tangent(ity, &x, dx, &e), Some(e), Some(ok(read_tangent(ity, &x, dx, want))?))
        }
        "fwd" => {
            let e = ok(s.fwd(&ok(read_tangent(ity, &x, dx, arg))?))?;
            (show_tangent(oty, s.output(), dy, &e), Some(e), Some(ok(read_tangent(oty, s.output(), dy, want))?))
        }
        "usage" => {
            let Loaded::Cbn(p) = &loaded else { return Err(format!("{key}: usage needs the cbn translation")) };
            let e = ok(s.bwd(&top(dy)))?;
            (p.usage_summary(&args, dx, &e), None, None)
        }
        other => return Err(format!("unknown golden operation {other:?}")),
    };
    require(got == want, || format!("{key}: got {got}, golden {want}"))?;
    require(elem == expect, || format!("{key}: element differs from the golden one"))
}

fn golden_group(prefix: &str) -> Result<usize, String> {
    let g = golden()?;
    let keys: Vec<(&String, &String)> = g.iter().filter(|(k, _)| k.starts_with(prefix)).collect();
    require(!keys.is_empty(), || format!("no golden slices for {prefix}"))?;
    for (k, v) in &keys {
        check_golden(k, v)?;
    }
    Ok(keys.len())
}

fn criterion_1() -> Outcome {
    let n = golden_group("lift-num ")?;
    let (loaded, _) = ok(Loaded::load(&common::read("query.gs"), Some("lift-num"), false))?;
    for input in [QUERY_A, QUERY_B] {
        let s = ok(loaded.compiled().session(&ok(loaded.parse_input(input))?))?;
        let back = ok(s.bwd(&bottom(s.output_fibre())))?;
        require(back == bottom(s.input_fibre()), || format!("bwd(_) at {input} is not bottom"))?;
        require(ok(s.fwd(&top(s.input_fibre())))? == top(s.output_fibre()), || "fwd(^) is not top".into())?;
    }
    Ok(format!("{n} golden slices match"))
}

fn criterion_2() -> Outcome {
    let n = golden_group("interval-num ")?;
    Ok(format!("{n} golden slice matches with exact rationals"))
}

fn criterion_3() -> Outcome {
    let n = golden_group("cbn-num ")?;
    Ok(format!("{n} golden slices match"))
}

fn criterion_4() -> Outcome {
    let b = prims::lift_obj(&prims::bool_obj());
    let x = Value::pair(Value::boolean(true), Value::boolean(true));
    let dx = Obj::prod(b.clone(), b.clone()).fibre_at(&x).ok_or("no fibre")?;
    let dy = b.fibre_at(&Value::boolean(true)).ok_or("no fibre")?;
    let mut shown = Vec::new();
    for (name, m, want) in [("strictOr", prims::strict_or(), "(^, ^)"), ("shortCircuitOr", prims::short_circuit_or(), "(^, _)")] {
        let got = m.bwd(&x, &Tangent::from_elem(&top(&dy))).elem();
        require(got == ok(read(&dx, want))?, || format!("{name} bwd(^) at (tt, tt) = {}", show(&dx, &got)))?;
        shown.push(format!("{name} {}", show(&dx, &got)));
    }
    Ok(shown.join(", "))
}

fn criterion_5() -> Outcome {
    let por = examples::parallel_or();
    let c = classify(&por);
    require(!c.cm && !c.stable, || "parallelOR classified as cm or stable".into())?;
    let w = c.cm_witness.ok_or("parallelOR has no meet-preservation witness")?;
    let mut pair = [por.dom.name(w.a).to_string(), por.dom.name(w.b).to_string()];
    pair.sort();
    require(pair == ["(tt,⊥)", "(⊥,tt)"], || format!("parallelOR witness is {pair:?}"))?;
    let g = classify(&examples::gustave());
    require(g.cm && g.stable, || "gustave is not reported cm and stable".into())?;
    for f in [examples::strict_or(), examples::short_circuit_or()] {
        let c = classify(&f);
        require(c.monotone && c.stable, || format!("{} is not reported stable", f.name))?;
    }
    let sc = examples::short_circuit_or();
    let id = |n: &str| sc.dom.id_of(n).ok_or_else(|| format!("no element {n}"));
    let tt = sc.cod.id_of("tt").ok_or("no tt")?;
    let least = ok(least_preimage(&sc, id("(tt,ff)")?, tt))?;
    require(least == Some(id("(tt,⊥)")?), || format!("leastPreimage gave {:?}", least.map(|i| sc.dom.name(i))))?;
    Ok(format!("parallelOR witness at {}: {} and {}", por.dom.name(w.at), pair[0], pair[1]))
}

fn criterion_6() -> Outcome {
    let corpus = common::corpus();
    require(corpus.len() >= MIN_PROGRAMS, || format!("only {} corpus programs", corpus.len()))?;
    for (feature, needle) in [("lambda", "\\("), ("case", "case "), ("fold", "fold ")] {
        require(corpus.iter().any(|e| e.src.contains(needle)), || format!("no corpus program uses {feature}"))?;
    }
    require(corpus.iter().any(|e| e.loaded.is_cbn()), || "no translated corpus program".into())?;
    let (mut inputs, mut checks) = (0, 0);
    for e in &corpus {
        require(e.inputs.len() >= MIN_INPUTS, || format!("{} has {} inputs", e.name, e.inputs.len()))?;
        let sig = e.loaded.sig_name();
        require(sig == "lift-num" || sig == "cbn-num", || format!("{} runs under {sig}", e.name))?;
        for a in &e.inputs {
            let s = ok(e.loaded.compiled().session(&e.loaded.slice_input(a)))?;
            let (dx, dy) = (s.input_fibre(), s.output_fibre());
            for d in [dx, dy] {
                let size = d.size().unwrap_or(u128::MAX);
                require(size <= FIBRE_CAP, || format!("{} at {a}: fibre of {size} elements", e.name))?;
            }
            let r = ok(check_galois(dx, dy, |t| s.fwd_unchecked(t), |t| s.bwd_unchecked(t)))?;
            passed(&format!("{} at {a}", e.name), &r)?;
            inputs += 1;
            checks += r.checks;
        }
    }
    Ok(format!("{} programs, {inputs} inputs, {checks} checks", corpus.len()))
}

fn criterion_7() -> Outcome {
    let mut runs = 0;
    for e in common::corpus() {
        for a in &e.inputs {
            let (got, want) = (e.loaded.run(a), ok(e.loaded.run_plain(a))?);
            require(got == want, || format!("{} at {a}: interpreted {got}, plain {want}", e.name))?;
            let c = e.loaded.compiled();
            let x = e.loaded.slice_input(a);
            let (got, want) = (c.run(&x), ok(eval_plain(&c.typed, &c.to_ctx(&x)))?);
            require(got == want, || format!("{} at {a}: compiled {got}, plain {want}", e.name))?;
            runs += 1;
        }
    }
    Ok(format!("{runs} runs agree"))
}

/// Pairs of corpus programs where the first one's result type is the
/// second one's only parameter type.
const CHAINS: [(&str, &str); 12] = [
    ("map_neg.gs", "sum.gs"),
    ("reverse.gs", "sum.gs"),
    ("map_neg.gs", "reverse.gs"),
    ("reverse.gs", "map_neg.gs"),
    ("filter.gs", "sum.gs"),
    ("filter.gs", "cps_sum.gs"),
    ("append.gs", "reverse.gs"),
    ("map_neg.gs", "map_neg.gs"),
    ("double.gs", "double.gs"),
    ("swap.gs", "swap.gs"),
    ("select.gs", "double.gs"),
    ("head.gs", "mirror.gs"),
];

fn criterion_8() -> Outcome {
    let corpus = common::corpus();
    let find = |n: &str| corpus.iter().find(|e| e.name == n).ok_or_else(|| format!("no corpus program {n}"));
    let mut chains = 0;
    for (first, second) in CHAINS {
        let (p, q) = (find(first)?, find(second)?);
        let (cp, cq) = (p.loaded.compiled(), q.loaded.compiled());
        require(cq.params.len() == 1 && cq.params[0].1 == *cp.output_ty(), || format!("{first} does not feed {second}"))?;
        let dom = ok(interp_ctx(&cp.sig, &cp.params))?;
        let f = fam::pair(&fam::terminal(&dom), &cp.morphism, &dom);
        let samples: Vec<Value> = p.inputs.iter().map(|a| cp.to_ctx(a)).collect();
        let r = ok(check_chain_rule(&f, &cq.morphism, &dom, cq.output_obj(), &samples))?;
        passed(&format!("{second} after {first}"), &r)?;
        chains += 1;
    }
    require(chains >= MIN_CHAINS, || format!("only {chains} composites"))?;
    let mut fibres = 0;
    for e in &corpus {
        for a in &e.inputs {
            let s = ok(e.loaded.compiled().session(&e.loaded.slice_input(a)))?;
            for d in [s.input_fibre(), s.output_fibre()] {
                passed(&format!("lattice laws for {} at {a}", e.name), &ok(check_lattice_laws(d, LAW_SAMPLE))?)?;
                fibres += 1;
            }
        }
    }
    Ok(format!("{chains} composites, lattice laws on {fibres} fibres"))
}

fn random_rational(g: &mut impl Rng) -> Rational {
    ratio(g.gen_range(-40..=40), g.gen_range(1..=12))
}

fn criterion_9() -> Outcome {
    let seed = seed_from_env();
    let mut g = rng(seed);
    let i = prims::interval_obj();
    let ii = Obj::prod(i.clone(), i.clone());
    let mut ops: Vec<(String, fam::Morphism, Obj, bool)> =
        vec![("addI".into(), prims::add_i(), ii, true), ("negI".into(), prims::neg_i(), i.clone(), false)];
    for r in [int(2), int(-3), int(0), ratio(1, 2)] {
        ops.push((format!("scaleI({r})"), prims::scale_i(r), i.clone(), false));
    }
    let mut checks = 0;
    for (name, m, dom, binary) in &ops {
        for _ in 0..SAMPLE_POINTS {
            let x = if *binary {
                Value::pair(Value::num(random_rational(&mut g)), Value::num(random_rational(&mut g)))
            } else {
                Value::num(random_rational(&mut g))
            };
            let r = ok(check_morphism_sampled(m, dom, &i, &x, &mut g, SAMPLE_PAIRS))?;
            passed(&format!("{name} at {x}"), &r)?;
            checks += r.checks;
            if name == "scaleI(0)" {
                let dy = i.fibre_at(&m.apply(&x)).ok_or("no fibre")?;
                for _ in 0..SAMPLE_PAIRS {
                    let y = gslice::oracle::random_elem(&dy, &mut g);
                    let back = m.bwd(&x, &Tangent::from_elem(&y)).elem();
                    require(back == LatticeElem::Bot, || format!("scaleI(0) bwd at {x} is not bottom"))?;
                }
            }
        }
    }
    Ok(format!("{} maps, {checks} checks, seed {seed}", ops.len()))
}

type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("query regression under lift-num", Some(QUICK), criterion_1),
        ("interval query regression", Some(QUICK), criterion_2),
        ("call-by-name query regression", None, criterion_3),
        ("strict and short-circuit or", None, criterion_4),
        ("classification of finite functions", Some(QUICK), criterion_5),
        ("Galois adjunction over the corpus", Some(CORPUS_BUDGET), criterion_6),
        ("agreement with the plain evaluator", None, criterion_7),
        ("chain rule and lattice laws", None, criterion_8),
        ("sampled interval adjunction", None, criterion_9),
    ];
    let mut failures = 0;
    for (n, (title, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(limit)) if took > limit => Err(format!("took {took:.2?}, limit {limit:?}")),
            (o, _) => o,
        };
        let budget = limit.map(|l| format!(", limit {l:?}")).unwrap_or_default();
        match outcome {
            Ok(detail) => println!("criterion {} PASS  {title} ({took:.2?}{budget}): {detail}", n + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {} FAIL  {title} ({took:.2?}{budget}): {why}", n + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
