//! Linear MDS symbol-pair codes over finite fields.
//!
//! Three construction families, each checked by a verifier that only looks at
//! the emitted matrix:
//!
//! * [`d5`]: 3-row parity checks with pair-distance 5 for `5 <= n <= q^2+q+1`;
//! * [`d6`]: 4-row parity checks with pair-distance 6 for `6 <= n <= q^2+1`,
//!   from an ordered elliptic quadric in PG(3, q);
//! * [`ecmds`]: evaluation codes on maximal elliptic curves with any
//!   pair-distance `d + 2 >= 7` up to `n <= N(q) - 3`.
//!
//! [`pairmetric`] holds the symbol-pair metric and the certificate checks,
//! [`linalg`] the matrix machinery and a Reed-Solomon construction for short
//! lengths.

pub mod d5;
pub mod d6;
pub mod ecmds;
pub mod error;
pub mod gf;
pub mod linalg;
pub mod matching;
pub mod pairmetric;

pub use error::{Error, Result};
pub use gf::{FieldElem, FieldSpec};
pub use linalg::{CodeMatrix, LinearCode};
pub use pairmetric::{PairCertificate, Route};

/// Caps on the exhaustive searches used by constructions and oracles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of codewords a brute-force oracle may enumerate.
    pub codeword_cap: u128,
    /// Maximum number of states for the ovoid ordering search.
    pub max_states: usize,
    /// Maximum number of swaps tried when repairing an evaluation order.
    pub rearrange_attempts: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            codeword_cap: 1 << 22,
            max_states: 100_000,
            rearrange_attempts: 10_000,
        }
    }
}
