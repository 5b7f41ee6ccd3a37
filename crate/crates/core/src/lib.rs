//! Matrix factorizations of F = x(x − y²)(x − λy²) attached to the
//! first-level Cohen–Macaulay modules over the T₃₆ curve singularity.

pub mod poly;
pub mod curve;
pub mod field;
pub mod pencil;
pub mod words;
pub mod canon;
pub mod present;
pub mod factor;
pub mod verify;
pub mod io;
