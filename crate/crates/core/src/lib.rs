//! Exact construction and verification of Parseval frame wavelet sets,
//! super-wavelets and related bounds over local fields of positive
//! characteristic.

pub mod cli;
pub mod clopen;
pub mod construct;
pub mod cyclo;
pub mod error;
pub mod framesim;
pub mod gfq;
pub mod lfield;
pub mod stepfn;
pub mod verify;

pub use error::{LfwError, Result};
