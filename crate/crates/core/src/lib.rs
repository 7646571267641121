//! Exact-arithmetic toolkit for p-ary and vectorial plateaued functions:
//! finite field tables, cyclotomic integers, Walsh spectra, partial
//! geometric difference set verification, the matrix characterization,
//! and m-sequence cross-correlation — all over Z and Z[zeta_p], with no
//! floating point on any verification path.

pub mod cyclotomic;
pub mod error;
pub mod field;
pub mod functions;
pub mod matrixchar;
pub mod pgds;
pub mod sequences;
pub mod walsh;

pub use cyclotomic::CycInt;
pub use error::{Error, Result};
pub use field::{Elem, Field, FieldSpec};
pub use functions::{PAryFunction, VectorialFunction};
pub use pgds::{AbelianGroup, PgdsParams, PgdsVerdict};
pub use walsh::{SpectrumClass, SpectrumKind, VectorialVerdict, WalshSpectrum};
