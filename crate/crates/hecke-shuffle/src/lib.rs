//! Numerics for Hecke L-functions of class-number-1 number fields, the
//! kernel Φ_K, the associated shuffle algebra, principal-series intertwiner
//! local factors, and Fourier analysis on unit-lattice tori.

pub mod cli;
pub mod error;
pub mod harmonic;
pub mod hexfloat;
pub mod intertwiner;
pub mod lfunction;
pub mod numberfield;
pub mod quadrature;
pub mod shuffle;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
