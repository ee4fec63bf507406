//! Fixed inputs shared by the benchmarks.

use homflow_core::{Case, MetricParams};

/// A generic metric with non-zero off-diagonal terms for `case`.
pub fn generic_metric(case: Case) -> MetricParams {
    match case {
        Case::So3R3 => MetricParams::new(case, 1.3, 0.8, 2.1, 0.25, 0.4),
        Case::Sl2C => MetricParams::new(case, 0.9, 1.4, 0.7, 0.3, -0.2),
    }
    .expect("fixture metric is valid")
}

/// An initial condition on the invariant slice that reaches extinction.
pub fn flow_start(case: Case) -> MetricParams {
    match case {
        Case::So3R3 => MetricParams::new(case, 1.0, 2.0, 3.0, 0.0, 0.5),
        Case::Sl2C => MetricParams::new(case, 1.0, 1.0, 1.0, 0.2, 0.2),
    }
    .expect("fixture metric is valid")
}
