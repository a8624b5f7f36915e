//! Loading program files, with or without the call-by-name translation.

use crate::cbn::CbnProgram;
use crate::fam::Value;
use crate::interp::{eval_plain, Compiled};
use crate::lang::{parse_program, parse_value, sig_pragma, Program, Ty, Typed};
use crate::prims::builtin_signature;
use crate::Error;

/// Signature used when neither the caller nor the file names one.
pub const DEFAULT_SIG: &str = "lift-num";

/// A loaded program. `Cbn` programs take inputs of the original type and
/// are sliced over the translated input.
#[derive(Clone)]
pub enum Loaded {
    Direct(Compiled),
    Cbn(CbnProgram),
}

impl Loaded {
    /// `sig` overrides the file's pragma. Naming `cbn-num` either way, or
    /// passing `cbn`, selects the translation.
    pub fn load(src: &str, sig: Option<&str>, cbn: bool) -> Result<(Loaded, Program), Error> {
        let name = match (sig, cbn) {
            (Some(s), _) => s.to_string(),
            (None, true) => "cbn-num".to_string(),
            (None, false) => sig_pragma(src).unwrap_or_else(|| DEFAULT_SIG.to_string()),
        };
        let interp = builtin_signature(&name)?;
        if cbn && name != "cbn-num" {
            return Err(Error::Input(format!("the call-by-name translation runs under cbn-num, not {name}")));
        }
        let program = parse_program(src, &interp.sig)?;
        let loaded = if name == "cbn-num" {
            Loaded::Cbn(CbnProgram::new(&program)?)
        } else {
            Loaded::Direct(Compiled::new(&program, interp)?)
        };
        Ok((loaded, program))
    }

    /// The program that is actually interpreted and sliced.
    pub fn compiled(&self) -> &Compiled {
        match self {
            Loaded::Direct(c) => c,
            Loaded::Cbn(p) => &p.compiled,
        }
    }

    pub fn is_cbn(&self) -> bool {
        matches!(self, Loaded::Cbn(_))
    }

    pub fn sig_name(&self) -> &str {
        &self.compiled().sig.name
    }

    /// The source program's typed body and parameters, before translation.
    pub fn source(&self) -> (&[(String, Ty)], &Typed) {
        match self {
            Loaded::Direct(c) => (&c.params, &c.typed),
            Loaded::Cbn(p) => (&p.params, &p.original),
        }
    }

    /// The argument tuple type of the source program.
    pub fn input_ty(&self) -> Ty {
        match self {
            Loaded::Direct(c) => c.input_ty().clone(),
            Loaded::Cbn(p) => p.input_ty(),
        }
    }

    pub fn parse_input(&self, src: &str) -> Result<Value, Error> {
        parse_value(src, &self.input_ty())
    }

    /// The input the compiled program runs on.
    pub fn slice_input(&self, args: &Value) -> Value {
        match self {
            Loaded::Direct(_) => args.clone(),
            Loaded::Cbn(p) => p.translate_input(args),
        }
    }

    /// The result as a value of the source program's type.
    pub fn run(&self, args: &Value) -> Value {
        let out = self.compiled().run(&self.slice_input(args));
        match self {
            Loaded::Direct(_) => out,
            Loaded::Cbn(p) => p.erase_output(&out),
        }
    }

    /// The source program under the independent evaluator.
    pub fn run_plain(&self, args: &Value) -> Result<Value, Error> {
        let (params, typed) = self.source();
        eval_plain(typed, &crate::interp::args_to_ctx(params.len(), args))
    }
}
