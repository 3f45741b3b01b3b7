//! Presentation invariants: abelianization and homomorphism counts, and the
//! cover-consistency checks built on them.

pub mod groups;
pub mod homs;
pub mod smith;
pub mod verify;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::matrix::IntegerMatrix;
use crate::presentations::Presentation;

pub use groups::{FiniteGroup, GroupError, BUILTIN_NAMES};
pub use homs::{
    hom_count, hom_count_brute_force, hom_count_with, HomCountError, HomSearch, DEFAULT_NODE_BUDGET,
};
pub use smith::{smith_normal_form, SmithForm};

/// Abelianization `Z^free_rank ⊕ Z/d₁ ⊕ Z/d₂ ⊕ ...` with `d₁ | d₂ | ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianInvariants {
    /// Normalizes any list of cyclic orders into a divisibility chain;
    /// orders of 1 vanish, orders of 0 count as free summands.
    pub fn new<T: Into<BigInt>>(free_rank: usize, orders: impl IntoIterator<Item = T>) -> Self {
        let orders: Vec<BigInt> = orders.into_iter().map(Into::into).collect();
        let zeros = orders.iter().filter(|d| d.is_zero()).count();
        let nonzero: Vec<BigInt> = orders.into_iter().filter(|d| !d.is_zero()).collect();
        let snf = smith_normal_form(&IntegerMatrix::diagonal(&nonzero));
        let torsion = snf
            .factors
            .into_iter()
            .filter(|d| *d > BigInt::one())
            .collect();
        AbelianInvariants {
            free_rank: free_rank + zeros,
            torsion,
        }
    }

    /// Invariants of the direct sum, e.g. of the abelianized free product.
    pub fn direct_sum(&self, other: &AbelianInvariants) -> AbelianInvariants {
        AbelianInvariants::new(
            self.free_rank + other.free_rank,
            self.torsion.iter().chain(&other.torsion).cloned(),
        )
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

/// `Z^2 + Z/3 + Z/6`, or `0` for the trivial group.
impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

pub fn abelian_invariants(p: &Presentation) -> AbelianInvariants {
    let snf = smith_normal_form(&p.relator_matrix());
    let rank = snf.rank();
    AbelianInvariants {
        free_rank: p.generator_count() - rank,
        torsion: snf
            .factors
            .into_iter()
            .filter(|d| *d > BigInt::one())
            .collect(),
    }
}
