//! Replays the fuzz corpus seeds through the parsers, so the seeds stay meaningful without
//! a fuzzing toolchain.

use std::fs;
use std::path::PathBuf;

use latclone::funclone::RelationRepr;
use latclone::ppqe::{parse_formula, parse_formula_with, ParseOptions};
use latclone::{LatticeSpec, OpTable};

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let path = e.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, fs::read(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn formula_seeds_parse_and_reprint() {
    for (name, data) in seeds("parse_formula") {
        let f = parse_formula(std::str::from_utf8(&data).unwrap())
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        let opts = ParseOptions {
            free: Some(f.free_vars().to_vec()),
            mode: None,
        };
        assert_eq!(
            parse_formula_with(&f.to_string(), &opts).unwrap(),
            f,
            "{name}"
        );
    }
}

#[test]
fn lattice_seeds() {
    let mut built = 0;
    for (_, data) in seeds("lattice_json") {
        let spec = LatticeSpec::from_json(std::str::from_utf8(&data).unwrap()).unwrap();
        built += spec.build().is_ok() as usize;
    }
    assert!(built >= 6);
}

#[test]
fn relation_seeds_round_trip() {
    for (name, data) in seeds("relation_json") {
        let repr: RelationRepr = serde_json::from_slice(&data[1..]).unwrap();
        let rel = repr.into_relation(data[0] as usize).unwrap();
        let again: RelationRepr =
            serde_json::from_str(&serde_json::to_string(&rel).unwrap()).unwrap();
        assert_eq!(again.into_relation(rel.carrier()).unwrap(), rel, "{name}");
    }
}

#[test]
fn optable_seeds() {
    let ok: Vec<bool> = seeds("optable_json")
        .iter()
        .map(|(_, d)| serde_json::from_slice::<OpTable>(d).is_ok())
        .collect();
    assert_eq!(ok, [false, true, true]);
}
