//! Exact construction and certification of rigid systems of indecomposable
//! torsion-free modules over Ore domains.

pub mod ring;
pub mod fractions;
pub mod modules;
pub mod construction;
pub mod certification;
pub mod pipeline;
