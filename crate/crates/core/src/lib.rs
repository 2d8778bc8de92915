//! Counting solutions of `a ± b = λc` over finite sets of rationals, the
//! closed-form bounds for those counts, sharp constructions, exhaustive
//! extremal search, and certified bounds for the analytic inequalities
//! behind them.

pub mod constructions;
pub mod counting;
pub mod error;
pub mod numset;
pub mod rational;
pub mod search;
pub mod verifier;

pub use counting::{
    bound_antisymmetric, bound_leqfis, bound_main, bound_principal, count_diff, count_triples, g_exact,
    recast_bound, CountReport, EquationKind, EquationSpec,
};
pub use error::{Error, Result};
pub use numset::{affine_image, negate, parse_set, AffineMap, NumSet};
pub use rational::Rational;
pub use verifier::{Certificate, IntervalValue};
