//! Dubrovnik Kauffman polynomial of knots from based Gauss diagrams, computed by
//! a skein recursion and by a state sum, and the Gauss diagram formulas for the
//! Vassiliev coefficients of its exponential expansion.

pub mod diagram;
pub mod link;
pub mod par;
pub mod poly;
pub mod skein;
pub mod state;
pub mod gdf;
pub mod corpus;
pub mod verify;
