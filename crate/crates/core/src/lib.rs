//! Two-qubit entanglement and mixedness measures, maximally entangled mixed
//! state families, their frontiers in six entanglement/mixedness planes, and
//! Monte Carlo checks of frontier maximality.

pub mod error;
pub mod frontier;
pub mod matrixcore;
pub mod mcverify;
pub mod measures;
pub mod roots;
pub mod states;

pub use error::{Error, Result};
pub use matrixcore::{ComplexMatrix4, Spectrum, C64};
pub use states::{DensityMatrix, XStateParams};
