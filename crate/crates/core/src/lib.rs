//! Exact computations with Vietoris-polynomial coalgebras over finite
//! topological spaces, and a bouncing-ball hybrid system on top.

pub mod coalg;
pub mod enumerate;
pub mod error;
pub mod finspace;
pub mod functorlang;
pub mod hybrid;
pub mod json;
pub mod vietoris;

pub use error::{Error, Result};
