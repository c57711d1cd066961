//! Exact arithmetic: rationals, polynomials in `t1`, `t2` and `q`, rational
//! functions, truncated power and Laurent series, dense matrices.

pub mod frac;
pub mod laurent;
pub mod matrix;
pub mod mode;
pub mod poly;
pub mod rat;
pub mod ring;
pub mod series;
pub mod tpoly;

pub use frac::{Frac, QFunc, RatFunc, TFunc};
pub use laurent::ULaurent;
pub use matrix::Matrix;
pub use mode::{Mode, ModeTag, SeriesAt, Specialized, Symbolic};
pub use poly::Poly;
pub use rat::{rat, Rat};
pub use ring::{Field, GcdDomain, Ring};
pub use series::{SeriesError, TruncSeries, Var};
pub use tpoly::TPoly;
