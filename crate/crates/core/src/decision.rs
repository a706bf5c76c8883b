//! Three-valued answers of the membership solvers.

use alloc::string::String;

/// What kind of obstruction a `No` rests on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Obstruction {
    /// An Artin–Schreier type equation over the residue field has no root.
    ResidueEquation,
    /// No valuation profile can satisfy the equation.
    Valuation,
    /// A `q`-th root does not exist in the coefficient field.
    QthRoot,
    /// A degree or pole-order count rules out every candidate.
    Degree,
    /// Finite linear algebra over `F_p` on a window of digits is inconsistent.
    Linear,
    /// Every candidate in an exhaustive search failed.
    Exhausted,
}

/// Why the answer is `No`, and where it was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub kind: Obstruction,
    pub detail: String,
    /// Level `n` of the `ℓⁿ` reduction, when the test runs per level.
    pub level: Option<u32>,
}

impl Certificate {
    pub fn new(kind: Obstruction, detail: impl Into<String>) -> Self {
        Certificate {
            kind,
            detail: detail.into(),
            level: None,
        }
    }

    pub fn at_level(mut self, n: u32) -> Self {
        self.level = Some(n);
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Decision<W> {
    Yes(W),
    No(Certificate),
    /// The solver ran out of precision or budget; the string says which.
    Unknown(String),
}

impl<W> Decision<W> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Decision::No(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Decision::Unknown(_))
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Decision::Yes(w) => Some(w),
            _ => None,
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Decision<V> {
        match self {
            Decision::Yes(w) => Decision::Yes(f(w)),
            Decision::No(c) => Decision::No(c),
            Decision::Unknown(s) => Decision::Unknown(s),
        }
    }

    pub fn verdict(&self) -> &'static str {
        match self {
            Decision::Yes(_) => "yes",
            Decision::No(_) => "no",
            Decision::Unknown(_) => "unknown",
        }
    }
}
