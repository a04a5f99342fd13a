//! Catalan numbers computed exactly and through their integral
//! representations, with every floating-point route cross-checked against
//! exact integer arithmetic.
//!
//! - [`exact`]: big-integer Catalan values and combinatorial counters.
//! - [`quadrature`]: adaptive Gauss-Kronrod integration with half-line transforms.
//! - [`gamma`]: Malmstén and Binet log-Gamma integrands, Stirling reference.
//! - [`representations`]: `ln C_n` by five independent routes.
//! - [`series`]: Catalan sum rules and the Glaisher-Kinkelin integral.

pub mod error;
pub mod exact;
pub mod gamma;
pub mod quadrature;
pub mod representations;
pub mod series;

pub use error::{Error, Result};
pub use exact::{BigCount, CatalanTable};
pub use quadrature::{Integrand, QuadConfig, QuadResult, Transform};
pub use representations::{Method, RepresentationResult};
pub use series::{GlaisherResult, SeriesResult, SumRule};
