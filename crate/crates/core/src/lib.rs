//! Dimensions and speciality of plane linear systems `L(d, m0, n, m)`: one
//! point of multiplicity `m0` and `n` general points of multiplicity `m`.

pub mod classifier;
pub mod cremona;
pub mod degeneration;
pub mod dimension;
pub mod error;
pub mod minus_one;
pub mod oracle;
pub mod system;
pub mod tables;
pub mod verify;

pub use classifier::{classify, dimension, lookup_special_table};
pub use cremona::MultiplicitySequence;
pub use degeneration::{Certificate, Certifier, CertifierConfig, Outcome};
pub use dimension::{DimensionResult, Evidence, Rule, Status};
pub use error::{Error, Result};
pub use oracle::{measure_dim, measure_speciality, OracleConfig};
pub use system::{qh, QhClass, QuasiHomogeneousSystem, SystemInvariants};
