//! Exact computations in the truncated de Rham-Witt groups `W_n Omega^q`
//! (`q <= 1`) over the one-variable Laurent ring `F_p[t, 1/t]`: Witt-vector
//! arithmetic certified by the ghost map, canonical normal forms with the
//! full operator calculus (`F`, `V`, `R`, `d`, `p`-underline, Cartier),
//! pole and zero filtrations with their conductor, and residue-pairing
//! duality checks on finite window modules over `Z/p^n`.

pub mod error;
pub mod scalar;
mod intpoly;
pub mod witt;
pub mod forms;
pub mod linalg;
pub mod filtration;
pub mod modulus;
pub mod duality;
pub mod report;
pub mod sample;

pub use error::{Error, Result};
pub use scalar::PrimeContext;
pub use witt::{FpLaurentRing, IntLaurentRing, Laurent, Ring, WittOps, WittVector};
pub use forms::{Form, NormalForm0, NormalForm1, SupportProfile};
pub use linalg::{Ambient, Coord, Mat, Snf, WindowModule, WindowSpec};
pub use filtration::{FilKind, FiltrationId, GeneratorFamily};
pub use modulus::{ModulusDivisor, PDivDecomposition};
pub use duality::{AnnihilatorSide, AnnihilatorSpec, PairingReport};
pub use report::{CheckReport, SuiteReport};
