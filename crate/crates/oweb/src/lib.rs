//! Exact symbolic construction of the quantum orthogonal web category and
//! its representation-theoretic realization, with machine verification of
//! every defining and derived relation as identities of matrices over ℚ(q).
//!
//! Module layout (bottom-up):
//! - [`poly`], [`ratfun`]: exact arithmetic in ℚ(q) (no floating point).
//! - [`qcombinat`]: quantum integers/binomials and the named coefficients
//!   appearing in the web relations, with the `two(a) = q^a + q^-a`
//!   regularization convention.
//! - [`matrix`]: sparse exact matrices and fraction-free elimination.
//! - [`extalg`]: the quantum exterior algebra as a confluent rewriting
//!   system with a diamond-lemma ambiguity checker.
//! - [`qrep`]: the quantum orthogonal algebra acting on the vector
//!   representation, tensor words, and exterior powers; equivariance and
//!   hom-dimension computations.
//! - [`intertwiners`]: explicit matrices for merges, splits, cups, caps,
//!   duality maps, the braiding, and the quadrivalent vertex.
//! - [`weblang`]: a typed expression language for web morphisms (parser,
//!   typechecker, evaluator) and the machine-run relation suite.
//! - [`classical`]: q = 1 specialization, antisymmetrizers, clasps, and the
//!   classical (Brauer-side) checks.

pub mod poly;
pub mod ratfun;
pub mod qcombinat;
pub mod matrix;
pub mod extalg;
pub mod qrep;
pub mod intertwiners;
pub mod weblang;
pub mod classical;
pub mod report;

pub use ratfun::RatFun;
