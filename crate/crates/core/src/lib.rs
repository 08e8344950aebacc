//! Chain dynamics on finite approximations of dynamical systems.

pub mod chaingraph;
pub mod dc1;
pub mod error;
pub mod pairlab;
pub mod pstar;
pub mod relation;
pub mod scalar;
pub mod shadowing;
pub mod symbolic;
pub mod systems;

pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};
pub use chaingraph::{ChainGraph, CyclicDecomposition};
pub use symbolic::SymbolSeq;
pub use systems::{Point, SystemSpec};

pub type ExactSystem = SystemSpec<Rational>;
pub type FloatSystem = SystemSpec<f64>;
pub type ExactGraph = ChainGraph<Rational>;
pub type FloatGraph = ChainGraph<f64>;
pub type ExactPoint = Point<Rational>;
pub type FloatPoint = Point<f64>;
