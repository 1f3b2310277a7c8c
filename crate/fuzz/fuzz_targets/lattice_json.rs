#![no_main]

use latclone::finlat::Structure;
use latclone::LatticeSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = LatticeSpec::from_json(text) else {
        return;
    };
    // Whatever builds must satisfy the semilattice laws it was checked against.
    if let Ok(s) = spec.build() {
        let m = s.to_semilattice();
        for x in 0..m.size() {
            assert_eq!(m.meet(x, x), x);
            assert!(m.leq(m.bottom(), x));
        }
        if let Structure::Lattice(l) = s {
            assert_eq!(l.distributive(), l.forbidden_sublattice().is_none());
        }
    }
});
