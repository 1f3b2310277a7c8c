#![no_main]

use latclone::finlat::fixtures;
use latclone::ppqe::{eliminate_boolean, parse_formula, parse_formula_with, ParseOptions};
use latclone::Mode;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(f) = parse_formula(text) else {
        return;
    };
    // Printing must give back the same formula.
    let opts = ParseOptions {
        free: Some(f.free_vars().to_vec()),
        mode: None,
    };
    let back = parse_formula_with(&f.to_string(), &opts).expect("printed formula parses");
    assert_eq!(back, f);
    if f.vars().len() <= 4 && f.check_mode(Mode::Lattice).is_ok() {
        let _ = eliminate_boolean(&f, &fixtures::boolean(1));
    }
});
