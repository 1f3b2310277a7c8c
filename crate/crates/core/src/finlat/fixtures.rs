//! Small named lattices used throughout the tests, built from their Hasse diagrams.

use super::{FiniteLattice, FiniteSemilattice, Kind, LatticeSpec, Structure};

fn build_lattice(spec: LatticeSpec) -> FiniteLattice {
    match spec.build().expect("fixture is a valid lattice") {
        Structure::Lattice(l) => l,
        Structure::Semilattice(_) => unreachable!(),
    }
}

/// The chain `0 < … < 1` with `n` elements. C3 is labelled `0, m, 1`.
pub fn chain(n: usize) -> FiniteLattice {
    assert!(n >= 1);
    let names: Vec<String> = match n {
        1 => vec!["0".into()],
        2 => vec!["0".into(), "1".into()],
        3 => vec!["0".into(), "m".into(), "1".into()],
        _ => std::iter::once("0".to_owned())
            .chain((1..n - 1).map(|i| format!("c{i}")))
            .chain(std::iter::once("1".to_owned()))
            .collect(),
    };
    let covers: Vec<(&str, &str)> = names
        .windows(2)
        .map(|w| (w[0].as_str(), w[1].as_str()))
        .collect();
    build_lattice(LatticeSpec::from_covers(
        names.clone(),
        &covers,
        Kind::Lattice,
    ))
}

/// The powerset of a `k`-element set. Element `i` is the subset with bitmask `i`;
/// labels are `0`, atoms `a, b, c, …`, their unions, and `1`.
pub fn boolean(k: usize) -> FiniteLattice {
    assert!(k <= 4);
    let size = 1usize << k;
    let names: Vec<String> = (0..size)
        .map(|mask| {
            if mask == 0 {
                "0".to_owned()
            } else if mask == size - 1 && k > 1 {
                "1".to_owned()
            } else {
                (0..k)
                    .filter(|b| mask & (1 << b) != 0)
                    .map(|b| (b'a' + b as u8) as char)
                    .collect()
            }
        })
        .collect();
    let mut covers = Vec::new();
    for mask in 0..size {
        for b in 0..k {
            if mask & (1 << b) == 0 {
                covers.push((names[mask].as_str(), names[mask | (1 << b)].as_str()));
            }
        }
    }
    build_lattice(LatticeSpec::from_covers(
        names.clone(),
        &covers,
        Kind::Lattice,
    ))
}

/// The pentagon `0 < p < q < 1`, `0 < r < 1`.
pub fn n5() -> FiniteLattice {
    build_lattice(LatticeSpec::from_covers(
        ["0", "p", "q", "r", "1"],
        &[("0", "p"), ("p", "q"), ("q", "1"), ("0", "r"), ("r", "1")],
        Kind::Lattice,
    ))
}

/// The diamond with atoms `a, b, c`.
pub fn m3() -> FiniteLattice {
    build_lattice(LatticeSpec::from_covers(
        ["0", "a", "b", "c", "1"],
        &[
            ("0", "a"),
            ("0", "b"),
            ("0", "c"),
            ("a", "1"),
            ("b", "1"),
            ("c", "1"),
        ],
        Kind::Lattice,
    ))
}

/// N5 with a new top `t` above `1`.
pub fn pentagon_with_new_top() -> FiniteLattice {
    build_lattice(LatticeSpec::from_covers(
        ["0", "p", "q", "r", "1", "t"],
        &[
            ("0", "p"),
            ("p", "q"),
            ("q", "1"),
            ("0", "r"),
            ("r", "1"),
            ("1", "t"),
        ],
        Kind::Lattice,
    ))
}

/// The four-element fence `a > 0 < b < c`: a meet-semilattice with two maximal elements.
pub fn fence() -> FiniteSemilattice {
    match LatticeSpec::from_covers(
        ["0", "a", "b", "c"],
        &[("0", "a"), ("0", "b"), ("b", "c")],
        Kind::Semilattice,
    )
    .build()
    .expect("fence is a valid semilattice")
    {
        Structure::Semilattice(m) => m,
        Structure::Lattice(_) => unreachable!(),
    }
}

/// Every lattice fixture with a short name.
pub fn lattices() -> Vec<(&'static str, FiniteLattice)> {
    vec![
        ("C1", chain(1)),
        ("C2", chain(2)),
        ("C3", chain(3)),
        ("C4", chain(4)),
        ("B2", boolean(2)),
        ("B3", boolean(3)),
        ("N5", n5()),
        ("M3", m3()),
        ("N5+1", pentagon_with_new_top()),
    ]
}
