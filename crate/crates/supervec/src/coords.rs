//! Coordinate systems on superspace.
//!
//! A coordinate system is an ordered list of named variables, each carrying a
//! Grassmann parity and a positive integer weight. The weights induce the
//! grading: a variable of weight `w` has degree `w` and its derivative has
//! degree `-w`. Declaration order is the canonical order used everywhere for
//! deterministic storage, printing and basis enumeration.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Grassmann parity of a variable or expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn of_degree(k: i64) -> Parity {
        if k.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// +1 for even, -1 for odd.
    pub fn sign(self) -> i64 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }

    pub fn combine(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => write!(f, "even"),
            Parity::Odd => write!(f, "odd"),
        }
    }
}

/// A single coordinate: name, parity, Weisfeiler weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarSpec {
    pub name: String,
    pub parity: Parity,
    pub weight: u32,
}

impl VarSpec {
    pub fn even(name: &str, weight: u32) -> VarSpec {
        VarSpec { name: name.into(), parity: Parity::Even, weight }
    }

    pub fn odd(name: &str, weight: u32) -> VarSpec {
        VarSpec { name: name.into(), parity: Parity::Odd, weight }
    }
}

/// An ordered coordinate system; shared behind an `Arc` by all values built
/// over it. Two systems are compatible iff their variable lists are equal.
#[derive(Debug, PartialEq, Eq)]
pub struct CoordSystem {
    vars: Vec<VarSpec>,
    by_name: BTreeMap<String, usize>,
}

pub type Coords = Arc<CoordSystem>;

impl CoordSystem {
    pub fn new(vars: Vec<VarSpec>) -> Result<Coords> {
        let mut by_name = BTreeMap::new();
        for (i, v) in vars.iter().enumerate() {
            if v.weight == 0 {
                return Err(Error::BadCoordSystem(format!("variable {} has weight 0", v.name)));
            }
            if by_name.insert(v.name.clone(), i).is_some() {
                return Err(Error::BadCoordSystem(format!("duplicate variable name {}", v.name)));
            }
        }
        Ok(Arc::new(CoordSystem { vars, by_name }))
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn var(&self, i: usize) -> &VarSpec {
        &self.vars[i]
    }

    pub fn vars(&self) -> &[VarSpec] {
        &self.vars
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.vars[i].parity
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.vars[i].weight
    }

    /// Maximal variable weight; equals the depth of the induced grading.
    pub fn depth(&self) -> u32 {
        self.vars.iter().map(|v| v.weight).max().unwrap_or(0)
    }

    pub fn even_count(&self) -> usize {
        self.vars.iter().filter(|v| v.parity == Parity::Even).count()
    }

    pub fn odd_count(&self) -> usize {
        self.vars.iter().filter(|v| v.parity == Parity::Odd).count()
    }
}

/// `n` even coordinates `x1..xn` and `m` odd coordinates `th1..thm`, unit weights.
pub fn superspace(n: usize, m: usize) -> Coords {
    let mut vars = Vec::new();
    for i in 1..=n {
        vars.push(VarSpec::even(&format!("x{i}"), 1));
    }
    for a in 1..=m {
        vars.push(VarSpec::odd(&format!("th{a}"), 1));
    }
    CoordSystem::new(vars).expect("generated names are unique")
}

pub fn same_coords(a: &Coords, b: &Coords) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_zero_weight() {
        assert!(CoordSystem::new(vec![VarSpec::even("x", 1), VarSpec::odd("x", 1)]).is_err());
        assert!(CoordSystem::new(vec![VarSpec::even("x", 0)]).is_err());
    }

    #[test]
    fn superspace_layout() {
        let c = superspace(2, 3);
        assert_eq!(c.len(), 5);
        assert_eq!(c.even_count(), 2);
        assert_eq!(c.odd_count(), 3);
        assert_eq!(c.index_of("th2"), Some(3));
        assert_eq!(c.depth(), 1);
    }
}
