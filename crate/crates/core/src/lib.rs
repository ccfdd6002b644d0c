//! Exact computations with regular (a,b)-modules and frescos.

pub mod ahat;
pub mod chgvar;
pub mod classify3;
pub mod cli;
pub mod error;
pub mod fresco;
pub mod linalg;
pub mod series;

pub use ahat::{AhatElement, ChangeOfVariable, MonicAnnihilator};
pub use chgvar::{quasi_invariance_probe, rank1_adapt, theta_push, Param, ProbeReport};
pub use classify3::{alpha2, gamma3, normal_form_rank3, pi_ij, CaseTag, ParamName, Rank3NormalForm};
pub use error::{FrescoError, Result};
pub use fresco::{AbModule, Fresco, FrescoPresentation, IsoOutcome, Submodule};
pub use linalg::{Poly, SMat, SVec};
pub use series::{Scalar, TruncSeries};
