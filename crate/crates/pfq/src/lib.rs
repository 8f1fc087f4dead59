//! Planarity of quadrinomials over F_{q^2}.

pub mod census;
pub mod charsum;
pub mod classify;
pub mod field;
pub mod geometry;
pub mod oracle;
pub mod poly;
pub mod quad;
pub mod suite;
