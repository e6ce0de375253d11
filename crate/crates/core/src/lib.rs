//! Exact certification of Hessian matrix factorizations of homogeneous
//! forms, multiplicative Legendre transforms, quadro-quadric Cremona maps
//! and the cubic Jordan algebras attached to them.

pub mod catalog;
pub mod certify;
pub mod expr_io;
pub mod field;
pub mod grading;
pub mod jordan;
pub mod legendre;
pub mod linalg;
pub mod modp;
pub mod pipeline;
pub mod poly;
pub mod polymat;
pub mod sampling;
pub mod univariate;

pub use field::{Field, FieldElem};
pub use poly::{Monomial, Poly};
pub use polymat::PolyMatrix;
