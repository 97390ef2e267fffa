//! Bounded theories: closure under the rules, the Galois connection with
//! the pure sublogic, and the relative completeness sweeps.

pub mod audit;
pub mod closure;
pub mod galois;
pub mod sweep;
pub mod universe;

pub use closure::Theory;
pub use universe::Universe;
