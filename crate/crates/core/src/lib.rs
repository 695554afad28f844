//! Binary MDS array codes built from circulant blocks over `F2[x]/(x^m + 1)`.
//!
//! The crate is layered bottom-up:
//!
//! * [`gf2poly`]: dense polynomials over GF(2) and the `lambda` parameter.
//! * [`ring`]: the cyclic ring `R = F2[x]/(x^m+1)`, its quotient `R_{p,tau}`
//!   and circulant matrices.
//! * [`binmat`]: packed binary matrices, elimination and the block `tmap`.
//! * [`constructions`]: the code families and their MDS checks.
//! * [`codec`]: naive and fast syndrome computation, encode and decode with
//!   bit-level XOR accounting.
//!
//! With the default `parallel` feature the data-parallel loops run on rayon;
//! without it every [`Exec`] collapses to a plain sequential loop.

pub mod binmat;
pub mod bits;
pub mod codec;
pub mod constructions;
mod error;
pub mod gf2poly;
pub mod par;
pub mod ring;

pub use binmat::{tmap, BitMatrix, LeftSolver};
pub use bits::BitVec;
pub use codec::{
    Codec, CodewordArray, ErasurePattern, Phase, Syndrome, SyndromeMode, XorLedger, XorReport,
};
pub use constructions::{CodeSpec, Family, Layout, MdsConditionReport};
pub use error::{Error, Result};
pub use gf2poly::{lambda_of, Poly};
pub use par::Exec;
pub use ring::{RingElem, RingMatrix, RingParams};
