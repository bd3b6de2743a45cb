pub mod algebroid;
pub mod battery;
pub mod catalog;
pub mod error;
pub mod expr;
pub mod graded;
pub mod jacobi;
pub mod modular;
pub mod nijenhuis;
pub mod poisson;
pub mod random;
pub mod sampling;

pub use algebroid::Algebroid;
pub use error::{Error, ExprError, Result};
pub use expr::{parse_expr, simplify_basic, Expr, Point, VarSpace};
pub use graded::{AForm, Multivector};
pub use jacobi::{JacobiAlgebroid, Triangular};
pub use modular::ModularData;
pub use nijenhuis::{Endo, JnAlgebroid};
pub use poisson::{extend, Extended};
pub use sampling::{Report, Residual, Sampling};
