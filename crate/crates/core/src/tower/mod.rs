//! Exact base arithmetic: finite fields, `F_q(θ)`, Laurent series in `π`,
//! polynomials in `t` and `j`-adic expansions.

pub mod field;
pub mod gf;
pub mod local;
pub mod poly;
pub mod ratfunc;
pub mod series;
pub mod tpoly;

pub use field::Field;
pub use gf::Gf;
pub use local::{LocalField, Series, DEFAULT_PRECISION};
pub use ratfunc::{RatFunc, RatFuncField};
pub use series::{LaurentSeries, TwistStyle};
pub use tpoly::{
    jadic_collapse, jadic_expand, jadic_expand_fraction, taylor_shift, JLaurentPoly, TPoly,
};
