//! Crossed simplicial field theories over exact fields.

pub mod csg;
pub mod oracle;
pub mod tensor;
pub mod graph;
pub mod operad;
pub mod frobenius;
pub mod evaluator;
pub mod io;
