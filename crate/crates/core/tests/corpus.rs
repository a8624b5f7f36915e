mod common;

use gslice::cbn::{cbn_term, cbn_type, prim_presence, prim_tags, t_of};
use gslice::interp::interp_ty;
use gslice::lang::{parse_program, print_program, typecheck, typecheck_program};
use gslice::lattice::{bottom, conforms, top};
use gslice::oracle::{examples, least_preimage};
use gslice::prims::builtin_signature;
use gslice::program::Loaded;

#[test]
fn printed_programs_parse_back() {
    for e in common::corpus() {
        let (params, typed) = e.loaded.source();
        let sig = builtin_signature(if e.loaded.is_cbn() { "cbn-num" } else { e.loaded.sig_name() }).unwrap();
        let printed = print_program(params, typed);
        let reparsed = parse_program(&printed, &sig.sig).unwrap_or_else(|err| panic!("{}: {err}\n{printed}", e.name));
        let retyped = typecheck_program(&reparsed, &sig.sig).unwrap();
        assert_eq!(&retyped, typed, "{}", e.name);
    }
}

#[test]
fn translation_preserves_types() {
    let sig = builtin_signature("cbn-num").unwrap();
    for e in common::corpus() {
        let (params, typed) = e.loaded.source();
        let ctx: Vec<_> = params.iter().map(|(x, t)| (x.clone(), t_of(cbn_type(t)))).collect();
        let want = t_of(cbn_type(&typed.ty));
        let translated = typecheck(&cbn_term(typed), &sig.sig, &ctx, None)
            .unwrap_or_else(|err| panic!("{}: translation does not typecheck: {err}", e.name));
        assert_eq!(translated.ty, want, "{}", e.name);
    }
}

#[test]
fn erased_translation_agrees_with_source() {
    for e in common::corpus() {
        let (cbn, _) = Loaded::load(&e.src, None, true).unwrap();
        for a in &e.inputs {
            assert_eq!(cbn.run(a), e.loaded.run_plain(a).unwrap(), "{} at {a}", e.name);
        }
    }
}

#[test]
fn call_by_name_demands_at_least_the_direct_slice() {
    let src = common::read("query.gs");
    let (direct, program) = Loaded::load(&src, Some("lift-num"), false).unwrap();
    let (cbn, _) = Loaded::load(&src, None, true).unwrap();
    let mut inputs = program.inputs.clone();
    inputs.push("(inl (), [(inl (), 0), (inr (), 1), (inl (), 1)])".to_string());
    for input in inputs {
        let args = direct.parse_input(&input).unwrap();
        let s = direct.compiled().session(&args).unwrap();
        let present = prim_presence(&direct.input_ty(), &args, s.input_fibre(), &s.bwd_unchecked(&top(s.output_fibre())));
        let x = cbn.slice_input(&args);
        let t = cbn.compiled().session(&x).unwrap();
        let tagged = prim_tags(&program.params, &x, t.input_fibre(), &t.bwd_unchecked(&top(t.output_fibre())));
        assert_eq!(present.len(), tagged.len());
        for (i, (p, q)) in present.iter().zip(&tagged).enumerate() {
            assert!(!p || *q, "{input}: position {i} is needed directly but not tagged");
        }
    }
}

#[test]
fn fibre_sides_agree_at_first_order_types() {
    for e in common::corpus() {
        let c = e.loaded.compiled();
        for a in &e.inputs {
            let x = e.loaded.slice_input(a);
            for (ty, v) in [(c.input_ty().clone(), x.clone()), (c.output_ty().clone(), c.run(&x))] {
                let o = interp_ty(&c.sig, &ty).unwrap();
                let d = o.fibre_at(&v).expect("first-order fibre");
                let (t, b) = (o.top(&v).elem(), o.bottom(&v).elem());
                assert!(conforms(&d, &t).is_ok() && conforms(&d, &b).is_ok(), "{} at {a}", e.name);
                assert_eq!((t, b), (top(&d), bottom(&d)), "{} at {a}", e.name);
            }
        }
    }
}

#[test]
fn least_preimage_of_bottom_is_bottom() {
    for f in [examples::strict_or(), examples::short_circuit_or(), examples::parallel_or(), examples::gustave()] {
        let bot_out = f.cod.least(&(0..f.cod.len()).collect::<Vec<_>>()).unwrap();
        for x in 0..f.dom.len() {
            let down = f.dom.downset(x);
            let least = least_preimage(&f, x, bot_out).unwrap();
            assert_eq!(least, f.dom.least(&down), "{} at {}", f.name, f.dom.name(x));
        }
    }
}
