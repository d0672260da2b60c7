//! Cohomology of double bar complexes of semidirect products `K ⋊ G`, multiplicative
//! structures on twisted equivariant K-theory, and fusion rings of the resulting
//! tensor categories of twisted equivariant bundles.

pub mod abelian;
pub mod cli;
pub mod circle;
pub mod cohomology;
pub mod complexes;
pub mod error;
pub mod exactalg;
pub mod fusion;
pub mod groups;
pub mod shuffle;
pub mod structures;

pub use circle::CircleValue;
pub use error::{Error, Limits, Result};
