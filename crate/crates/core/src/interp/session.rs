use crate::fam::{Morphism, Obj, Tangent, Value};
use crate::lang::{typecheck_program, Program, Ty, Typed, parse_value};
use crate::lattice::{conforms, FibreDesc, LatticeElem};
use crate::prims::SignatureInterp;
use crate::Error;

use super::{interp_ctx, interp_term, interp_ty};

/// Things that nest as pairs: values and tangents.
trait Nest: Sized + Clone {
    fn unit() -> Self;
    fn pair(a: Self, b: Self) -> Self;
    fn split(&self) -> (Self, Self);
}

impl Nest for Value {
    fn unit() -> Self {
        Value::Unit
    }

    fn pair(a: Self, b: Self) -> Self {
        Value::pair(a, b)
    }

    fn split(&self) -> (Self, Self) {
        let (a, b) = self.as_pair();
        (a.clone(), b.clone())
    }
}

impl<F: Clone> Nest for Tangent<F> {
    fn unit() -> Self {
        Tangent::Unit
    }

    fn pair(a: Self, b: Self) -> Self {
        Tangent::pair(a, b)
    }

    fn split(&self) -> (Self, Self) {
        let (a, b) = self.as_pair();
        (a.clone(), b.clone())
    }
}

fn args_to_ctx_gen<T: Nest>(n: usize, args: &T) -> T {
    let mut items = Vec::with_capacity(n);
    let mut rest = args.clone();
    for _ in 1..n {
        let (a, b) = rest.split();
        items.push(a);
        rest = b;
    }
    if n > 0 {
        items.push(rest);
    }
    items.into_iter().fold(T::unit(), T::pair)
}

fn ctx_to_args_gen<T: Nest>(n: usize, ctx: &T) -> T {
    let mut items = Vec::with_capacity(n);
    let mut rest = ctx.clone();
    for _ in 0..n {
        let (a, b) = rest.split();
        items.push(b);
        rest = a;
    }
    // items are innermost first, which is the last argument first
    let mut it = items.into_iter();
    match it.next() {
        None => T::unit(),
        Some(last) => it.fold(last, |acc, x| T::pair(x, acc)),
    }
}

/// Converts the argument tuple `(x1, (x2, …))` of an `n`-parameter program
/// into its context value `((((), x1), x2), …)`.
pub fn args_to_ctx(n: usize, args: &Value) -> Value {
    args_to_ctx_gen(n, args)
}

/// Inverse of [`args_to_ctx`].
pub fn ctx_to_args(n: usize, ctx: &Value) -> Value {
    ctx_to_args_gen(n, ctx)
}

/// A typechecked program together with its interpretation.
#[derive(Clone)]
pub struct Compiled {
    pub params: Vec<(String, Ty)>,
    pub typed: Typed,
    pub sig: SignatureInterp,
    pub morphism: Morphism,
    input_ty: Ty,
    input_obj: Obj,
    output_obj: Obj,
}

impl Compiled {
    pub fn new(program: &Program, sig: SignatureInterp) -> Result<Self, Error> {
        let typed = typecheck_program(program, &sig.sig)?;
        Self::from_typed(program.params.clone(), typed, sig)
    }

    /// `typed` must have been checked in the context given by `params`.
    pub fn from_typed(params: Vec<(String, Ty)>, typed: Typed, sig: SignatureInterp) -> Result<Self, Error> {
        let tys: Vec<Ty> = params.iter().map(|(_, t)| t.clone()).collect();
        let input_ty = Ty::tuple(&tys);
        let input_obj = interp_ty(&sig, &input_ty)?;
        let output_obj = interp_ty(&sig, &typed.ty)?;
        interp_ctx(&sig, &params)?;
        let morphism = interp_term(&typed, &sig);
        Ok(Compiled { params, typed, sig, morphism, input_ty, input_obj, output_obj })
    }

    /// The type of the argument tuple.
    pub fn input_ty(&self) -> &Ty {
        &self.input_ty
    }

    pub fn output_ty(&self) -> &Ty {
        &self.typed.ty
    }

    pub fn input_obj(&self) -> &Obj {
        &self.input_obj
    }

    pub fn output_obj(&self) -> &Obj {
        &self.output_obj
    }

    pub fn is_first_order(&self) -> bool {
        self.input_ty.is_first_order() && self.typed.ty.is_first_order()
    }

    /// Reads an argument tuple literal.
    pub fn parse_input(&self, src: &str) -> Result<Value, Error> {
        parse_value(src, &self.input_ty)
    }

    pub fn to_ctx(&self, args: &Value) -> Value {
        args_to_ctx(self.params.len(), args)
    }

    pub fn run(&self, args: &Value) -> Value {
        self.morphism.apply(&self.to_ctx(args))
    }

    /// Fixes the input for slice queries.
    pub fn session(&self, args: &Value) -> Result<SliceSession, Error> {
        if !self.is_first_order() {
            let ty = Ty::arrow(self.input_ty.clone(), self.typed.ty.clone());
            return Err(Error::HigherOrder("slice queries", ty.to_string()));
        }
        let ctx = self.to_ctx(args);
        let output = self.morphism.apply(&ctx);
        let fibre = |o: &Obj, v: &Value| o.fibre_at(v).expect("first-order object has a first-order fibre");
        Ok(SliceSession {
            n: self.params.len(),
            morphism: self.morphism.clone(),
            input_fibre: fibre(&self.input_obj, args),
            output_fibre: fibre(&self.output_obj, &output),
            input: args.clone(),
            ctx,
            output,
        })
    }
}

/// One run of a first-order program at a fixed input, with its forward and
/// backward maps on that input's and output's fibres.
#[derive(Clone)]
pub struct SliceSession {
    n: usize,
    morphism: Morphism,
    input: Value,
    ctx: Value,
    output: Value,
    input_fibre: FibreDesc,
    output_fibre: FibreDesc,
}

impl SliceSession {
    pub fn input(&self) -> &Value {
        &self.input
    }

    pub fn output(&self) -> &Value {
        &self.output
    }

    pub fn input_fibre(&self) -> &FibreDesc {
        &self.input_fibre
    }

    pub fn output_fibre(&self) -> &FibreDesc {
        &self.output_fibre
    }

    /// Pushes an input approximation forward.
    pub fn fwd(&self, dx: &LatticeElem) -> Result<LatticeElem, Error> {
        conforms(&self.input_fibre, dx)?;
        Ok(self.fwd_unchecked(dx))
    }

    /// Pulls an output approximation back.
    pub fn bwd(&self, dy: &LatticeElem) -> Result<LatticeElem, Error> {
        conforms(&self.output_fibre, dy)?;
        Ok(self.bwd_unchecked(dy))
    }

    pub fn fwd_unchecked(&self, dx: &LatticeElem) -> LatticeElem {
        let t = args_to_ctx_gen(self.n, &Tangent::from_elem(dx));
        self.morphism.fwd(&self.ctx, &t).elem()
    }

    pub fn bwd_unchecked(&self, dy: &LatticeElem) -> LatticeElem {
        let t = self.morphism.bwd(&self.ctx, &Tangent::from_elem(dy));
        ctx_to_args_gen::<crate::fam::JoinTangent>(self.n, &t).elem()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_program;
    use crate::lattice::literal::read;
    use crate::prims::builtin_signature;

    const QUERY: &str = "type Label = 1 + 1;
main (l : Label) (db : list (Label * num)) : num =
  fold zero() (r acc. case l of
      inl u -> (case fst r of inl v -> add(snd r, acc) | inr v -> acc)
    | inr u -> (case fst r of inl v -> acc | inr v -> add(snd r, acc))) db";

    fn compiled(sig: &str) -> Compiled {
        let sig = builtin_signature(sig).unwrap();
        Compiled::new(&parse_program(QUERY, &sig.sig).unwrap(), sig).unwrap()
    }

    #[test]
    fn ctx_conversion_roundtrips() {
        for n in 0..4 {
            let args = match n {
                0 => Value::Unit,
                1 => Value::int(1),
                2 => Value::pair(Value::int(1), Value::int(2)),
                _ => Value::pair(Value::int(1), Value::pair(Value::int(2), Value::int(3))),
            };
            assert_eq!(ctx_to_args(n, &args_to_ctx(n, &args)), args);
        }
        let ctx = args_to_ctx(3, &Value::pair(Value::int(1), Value::pair(Value::int(2), Value::int(3))));
        assert_eq!(ctx.to_string(), "((((), 1), 2), 3)");
    }

    #[test]
    fn query_runs_and_slices() {
        let c = compiled("lift-num");
        let input = c.parse_input("(inl (), [(inl (), 0), (inr (), 1), (inl (), 1)])").unwrap();
        assert_eq!(c.run(&input), Value::int(1));
        let s = c.session(&input).unwrap();
        let top = read(s.output_fibre(), "^").unwrap();
        let want = read(s.input_fibre(), "((), (((), ^), (((), _), (((), ^), ()))))").unwrap();
        assert_eq!(s.bwd(&top).unwrap(), want);
        assert!(s.bwd(&LatticeElem::Unit).is_err());
    }

    #[test]
    fn higher_order_sessions_are_refused() {
        let sig = builtin_signature("lift-num").unwrap();
        let p = parse_program("main (x : num) : num -> num = \\y. add(x, y)", &sig.sig).unwrap();
        let c = Compiled::new(&p, sig).unwrap();
        let err = c.session(&Value::int(1)).err().unwrap();
        assert!(err.to_string().contains("slice queries require first-order type"), "{err}");
    }
}
