//! Homogeneous Ricci flow on the two exceptional five-dimensional spaces
//! `SO(3)⋉R³/SO(2)` and `SL(2,C)/U(1)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`algebra`]: structure constants, brackets, Killing forms and the two
//!   built-in homogeneous models.
//! * [`metric`]: the five-parameter family of isotropy-invariant metrics,
//!   their orthonormal eigenframe and the gauge reductions that remove one
//!   parameter.
//! * [`ricci`]: the Ricci tensor, both from the general unimodular formula
//!   evaluated on structure constants and from closed forms.
//! * [`flow`]: the Ricci-flow ODE systems, an adaptive Dormand-Prince
//!   integrator with extinction detection, and monitors for the quantities
//!   that drive the extinction arguments.

pub mod algebra;
pub mod error;
pub mod flow;
pub mod metric;
pub mod ricci;

pub use algebra::{HomogeneousModel, ModelReport, StructureConstants};
pub use error::{Error, Result};
pub use flow::{
    flow_rhs, identity_residuals, integrate, monitors, time_to_scal, FlowState, IdentityResidual,
    IntegratorOptions, MonitorReport, MonitorSample, Termination, Trajectory, Trend, Verdict,
};
pub use metric::{adjoint_matrix, Frame, MetricParams};
pub use ricci::{ricci_closed, ricci_oracle, scalar_curvature, RicciComponents};

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// 5×5 matrix over the isotropy complement `p`.
pub type Mat5 = nalgebra::Matrix5<f64>;
/// Coordinate vector over the isotropy complement `p`.
pub type Vec5 = nalgebra::Vector5<f64>;

/// Which of the two homogeneous spaces a metric lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    /// `SO(3)⋉R³/SO(2)`, complement basis `(c3, c1, c2, F, G)`.
    #[serde(rename = "so3r3")]
    So3R3,
    /// `SL(2,C)/U(1)`, complement basis `(A, B, C, D, E)`.
    #[serde(rename = "sl2c")]
    Sl2C,
}

impl Case {
    pub const ALL: [Case; 2] = [Case::So3R3, Case::Sl2C];

    /// The homogeneous model (Lie algebra plus isotropy split) for this case.
    pub fn model(self) -> HomogeneousModel {
        match self {
            Case::So3R3 => algebra::build_so3_r3(),
            Case::Sl2C => algebra::build_sl2c(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Case::So3R3 => "so3r3",
            Case::Sl2C => "sl2c",
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "so3r3" | "1" => Ok(Case::So3R3),
            "sl2c" | "2" => Ok(Case::Sl2C),
            other => Err(Error::UnknownCase(other.to_string())),
        }
    }
}
