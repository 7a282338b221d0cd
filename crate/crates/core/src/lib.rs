//! Weil algebras over the rationals: presentations, normal forms,
//! homomorphisms, tensor products, finite limits in the category of Weil
//! algebras, fibered tensors, and jet arithmetic on `R^n`-models.

#![no_std]

extern crate alloc;

pub mod algebra;
pub mod bundle;
pub mod category;
pub mod error;
pub mod expr;
pub mod hom;
pub mod jet;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod presentation;
pub mod rational;
pub mod scalar;
pub mod tensor;

pub use algebra::{Element, WeilAlgebra};
pub use category::{
    equalizer, fibered_tensor, finite_limit, product_many, product_w, terminal, Cone, Diagram, FiberedTensor,
    LimitResult, Subalgebra,
};
pub use error::{AlgebraError, JetError};
pub use expr::{Elementary, Expr};
pub use hom::AlgebraHom;
pub use jet::{
    eval_jet, prolong_map, prolongation_space, taylor_coefficients, w_point, ProlongationSpace, Prolonged, WPoint,
};
pub use linalg::{Echelon, Matrix};
pub use parse::{ParseError, ParseErrorKind, Pos};
pub use poly::{Monomial, Polynomial};
pub use presentation::Presentation;
pub use rational::Rational;
pub use scalar::Scalar;
pub use tensor::{tensor_infinity, TensorProduct};
