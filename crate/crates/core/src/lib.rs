//! Exact Schubert calculus at desk scale.
//!
//! * [`permutation`]: one-line permutations in `S_∞`, Lehmer codes.
//! * [`polyring`]: sparse big-integer polynomials and divided differences.
//! * [`schubert`]: Schubert polynomials, basis expansion, structure
//!   constants, and the pipe-dream, Monk and Littlewood–Richardson oracles.
//! * [`witness`]: mod-p certificates for integer polynomial systems.

pub mod permutation;
pub mod polyring;
pub mod schubert;
pub mod witness;

pub use permutation::{LehmerCode, Permutation, PermutationError, RankBound, DEFAULT_RANK_BOUND};
pub use polyring::{DecimalInt, Monomial, PolyError, SparsePolynomial};
pub use schubert::{
    grassmannian_permutation, lr_coefficient, DescentPolicy, Partition, PipeDream,
    PositivityCertificate, SchubertEngine, SchubertError, SchubertExpansion,
};
pub use witness::{
    count_solutions_mod_p, is_prime, search_witness, verify_witness, ModPWitness, PolySystem,
    Scanner, WitnessError, DEFAULT_BUDGET,
};
