//! Coefficient rings: the integers or a quotient `Z/m` with `m ≥ 2`.

use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use crate::int::Int;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Integers,
    /// Invariant: modulus ≥ 2.
    Mod(Int),
}

impl RingSpec {
    pub fn modulo(m: i64) -> RingSpec {
        assert!(m >= 2, "modulus must be at least 2");
        RingSpec::Mod(Int::from(m))
    }

    /// The characteristic: 0 for `Z`, `m` for `Z/m`.
    pub fn characteristic(&self) -> Int {
        match self {
            RingSpec::Integers => Int::ZERO,
            RingSpec::Mod(m) => m.clone(),
        }
    }

    pub fn is_integers(&self) -> bool {
        matches!(self, RingSpec::Integers)
    }

    pub fn reduce(&self, x: &Int) -> Int {
        match self {
            RingSpec::Integers => x.clone(),
            RingSpec::Mod(m) => x.mod_floor(m),
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::Mod(m) => write!(f, "Zmod:{}", m),
        }
    }
}

impl FromStr for RingSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "Z" {
            return Ok(RingSpec::Integers);
        }
        if let Some(m) = t.strip_prefix("Zmod:") {
            let m: Int = m.parse().map_err(|e: crate::int::ParseIntError| e.to_string())?;
            if m < Int::from(2) {
                return Err(alloc::format!("modulus must be at least 2, got {}", m));
            }
            return Ok(RingSpec::Mod(m));
        }
        Err(alloc::format!("unknown ring {:?} (expected Z or Zmod:<m>)", s))
    }
}
