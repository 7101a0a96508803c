//! Symbolic curvature of pseudo-Riemannian metrics and detection of
//! curvature-restricted geometric structures.

pub mod catalog;
pub mod classify;
pub mod curvature;
pub mod linalg;
pub mod metric;
pub mod operators;
pub mod report;
pub mod scalar;
pub mod symmetry;
pub mod tensor;
pub mod verify;

pub use curvlab_expr as expr;
pub use curvlab_expr::{Expr, SymbolTable, ZeroCertificate, ZeroTestConfig};
pub use curvature::{CurvatureBundle, CurvatureKind, Form, Operator, Product, Target};
pub use metric::{build_metric, MetricError, MetricField, MetricSpec};
pub use scalar::Scalar;
pub use symmetry::{Orbit, Symmetry};
pub use tensor::{subscript, Tensor, TensorError};

/// Components are canonical symbolic expressions.
pub type SymbolicTensor = Tensor<Expr>;
/// Components are exact rationals, e.g. a symbolic tensor at a point.
pub type ExactTensor = Tensor<num_rational::BigRational>;
pub type Tensor64 = Tensor<f64>;
pub type Tensor32 = Tensor<f32>;
