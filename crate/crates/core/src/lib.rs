//! Exact construction and verification of the polynomial Lie algebra of
//! vector fields `L_{2k}`, the Schrödinger operators `Q_{2k} = L_{2k} − H_{2k}`
//! of the heat system for hyperelliptic sigma functions of genus `g`, and the
//! derivations `𝓛_{2k}` with their Burgers-type right-hand sides `w_{2k,j}`.
//!
//! Everything is exact rational arithmetic; there is no floating point.

pub mod construct;
pub mod derivations;
pub mod error;
pub mod fixtures;
pub mod json;
pub mod lambda;
pub mod linsolve;
pub mod psi;
pub mod rational;
pub mod schrodinger;
pub mod suite;
pub mod text;
pub mod vector_field;
pub mod weyl;
pub mod verify;
pub mod xpoly;

pub use construct::{
    alpha_delta, build_all_q, build_h_t, build_l, build_q, h_closed_form, h_from_generating, h_generating,
    q_recurrence, r_poly, v_entry, AlphaDelta, GenusContext, HFamily, Provenance, QuadraticParts,
};
pub use error::{AlgebraError, ParseError};
pub use json::JsonForm;
pub use lambda::{LambdaMonomial, LambdaPoly};
pub use rational::Rational;
pub use schrodinger::SchrodingerOperator;
pub use vector_field::LambdaVectorField;
pub use weyl::{WeylOperator, ZMonomial};
pub use xpoly::{curve_poly, Coefficient, XPoly};
