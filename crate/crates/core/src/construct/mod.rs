//! The two constructions of the surface and the link between them.

pub mod data;
pub mod random;
pub mod report;

pub use report::ConstructionReport;
pub mod monad;
pub mod bridge;
pub mod liaison;
