#![allow(dead_code)]

use std::fs;
use std::path::PathBuf;

use gslice::fam::Value;
use gslice::lang::Program;
use gslice::program::Loaded;

pub struct Entry {
    pub name: String,
    pub src: String,
    pub loaded: Loaded,
    pub program: Program,
    pub inputs: Vec<Value>,
}

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn read(name: &str) -> String {
    fs::read_to_string(corpus_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Every corpus program, loaded under its own signature, with its inputs.
pub fn corpus() -> Vec<Entry> {
    let mut names: Vec<String> = fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".gs"))
        .collect();
    names.sort();
    names
        .into_iter()
        .map(|name| {
            let src = read(&name);
            let (loaded, program) = Loaded::load(&src, None, false).unwrap_or_else(|e| panic!("{name}: {e}"));
            let inputs = program
                .inputs
                .iter()
                .map(|i| loaded.parse_input(i).unwrap_or_else(|e| panic!("{name}: input {i}: {e}")))
                .collect();
            Entry { name, src, loaded, program, inputs }
        })
        .collect()
}
