//! Coordinate systems for the classified algebras.
//!
//! Naming: `u{i}` for bosonic coordinates, `th{..}` for fermions, `t` / `tau`
//! for the extra contact coordinate (bosonic / fermionic), `vth{a}` for the
//! weight-3 fermions of mb(3|8). Index pairs are flattened into the name,
//! e.g. `th21` is the fermion with indices i=2, a=1.

use crate::coords::{CoordSystem, Coords, VarSpec};

/// `vect(n|m)`: u1..un, th1..thm, unit weights.
pub fn vect(n: usize, m: usize) -> Coords {
    let mut vars = Vec::new();
    for i in 1..=n {
        vars.push(VarSpec::even(&format!("u{i}"), 1));
    }
    for a in 1..=m {
        vars.push(VarSpec::odd(&format!("th{a}"), 1));
    }
    CoordSystem::new(vars).expect("unique names")
}

/// Contact system for `k(n|m)` with n odd: t of weight 2, u1..u_{n-1} and
/// th1..thm of weight 1.
pub fn contact(n: usize, m: usize) -> Coords {
    assert!(n % 2 == 1, "contact algebras need an odd number of even coordinates");
    let mut vars = vec![VarSpec::even("t", 2)];
    for i in 1..n {
        vars.push(VarSpec::even(&format!("u{i}"), 1));
    }
    for a in 1..=m {
        vars.push(VarSpec::odd(&format!("th{a}"), 1));
    }
    CoordSystem::new(vars).expect("unique names")
}

/// Odd-contact system for `m(n)` and `sm_beta(n)`: tau (odd, weight 2),
/// u1..un, th1..thn of weight 1.
pub fn odd_contact(n: usize) -> Coords {
    let mut vars = vec![VarSpec::odd("tau", 2)];
    for i in 1..=n {
        vars.push(VarSpec::even(&format!("u{i}"), 1));
    }
    for i in 1..=n {
        vars.push(VarSpec::odd(&format!("th{i}"), 1));
    }
    CoordSystem::new(vars).expect("unique names")
}

/// System for `le(n)`, `sle(n)`: u1..un, th1..thn, unit weights.
pub fn periplectic(n: usize) -> Coords {
    let mut vars = Vec::new();
    for i in 1..=n {
        vars.push(VarSpec::even(&format!("u{i}"), 1));
    }
    for i in 1..=n {
        vars.push(VarSpec::odd(&format!("th{i}"), 1));
    }
    CoordSystem::new(vars).expect("unique names")
}

/// System for `vle(3|6)`: th{ia} (weight 1, i=1..3, a=1..2), u1..u3 (weight 2).
pub fn vle36() -> Coords {
    let mut vars = Vec::new();
    for i in 1..=3 {
        for a in 1..=2 {
            vars.push(VarSpec::odd(&format!("th{i}{a}"), 1));
        }
    }
    for i in 1..=3 {
        vars.push(VarSpec::even(&format!("u{i}"), 2));
    }
    CoordSystem::new(vars).expect("unique names")
}

/// System for `ksle(5|10)`: th{jk} = -th{kj} for j<k (weight 1), u1..u5 (weight 2).
pub fn ksle510() -> Coords {
    let mut vars = Vec::new();
    for j in 1..=5 {
        for k in (j + 1)..=5 {
            vars.push(VarSpec::odd(&format!("th{j}{k}"), 1));
        }
    }
    for i in 1..=5 {
        vars.push(VarSpec::even(&format!("u{i}"), 2));
    }
    CoordSystem::new(vars).expect("unique names")
}

/// System for `mb(3|8)`: th{ia} (weight 1), u1..u3 (weight 2), vth1..vth2 (weight 3).
pub fn mb38() -> Coords {
    let mut vars = Vec::new();
    for i in 1..=3 {
        for a in 1..=2 {
            vars.push(VarSpec::odd(&format!("th{i}{a}"), 1));
        }
    }
    for i in 1..=3 {
        vars.push(VarSpec::even(&format!("u{i}"), 2));
    }
    for a in 1..=2 {
        vars.push(VarSpec::odd(&format!("vth{a}"), 3));
    }
    CoordSystem::new(vars).expect("unique names")
}

/// Jet base space: q1..qN, even, unit weights.
pub fn jet_base(n: usize) -> Coords {
    let vars = (1..=n).map(|i| VarSpec::even(&format!("q{i}"), 1)).collect();
    CoordSystem::new(vars).expect("unique names")
}
