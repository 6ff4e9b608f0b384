//! Threshold constants for the ten validation tests.
//!
//! Every tolerance in the suite lives here with its default value; a JSON
//! config file mirroring the field names overrides any subset.

use serde::{Deserialize, Serialize};

use crate::contact::ContactParams;

/// All validation thresholds. Lengths in meters unless noted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ValidationParams {
    /// Span tolerance ratio for T2 (`L <= (1+tau) * L*`).
    pub span_tolerance_tau: f64,
    /// Standard on-centre spacings for T3.
    pub spacing_standards: Vec<f64>,
    /// Maximum deviation from a standard spacing (T3).
    pub spacing_tolerance: f64,
    /// Spacings at or below this are exempt as doubled members (T3).
    pub spacing_exempt_below: f64,
    /// Standard nominal cross-sections in millimeters, small side first (T4).
    pub lumber_set_lambda: Vec<(u32, u32)>,
    /// Width tolerance in millimeters (T4).
    pub lumber_tol_w: f64,
    /// Depth tolerance in millimeters (T4).
    pub lumber_tol_d: f64,
    /// Uniform design load in N/m (T5).
    pub deflection_load_w: f64,
    /// Elastic modulus in Pa (T5).
    pub elastic_modulus_e: f64,
    /// Deflection tolerance ratio (T5).
    pub deflection_tolerance_tau_delta: f64,
    /// Footprint grid cell size (T6/T7).
    pub grid_cell: f64,
    /// Rafter projection inflation margin (T6/T7).
    pub rafter_margin_mu: f64,
    /// Minimum roof coverage ratio (T6).
    pub coverage_min_rho: f64,
    /// Maximum gap ratio (T7).
    pub gap_max_gamma: f64,
    /// Lateral reach of a support and short-sill distance limit (T8).
    pub cantilever_max_c: f64,
    /// Maximum gap between consecutive supports, and the long-sill
    /// threshold (T8).
    pub cantilever_spacing_c_sp: f64,
    /// Sills starting above this height are "elevated" (T8).
    pub elevated_sill_z: f64,
    /// Connection zone depth as a fraction of member height (T10).
    pub zone_fraction_alpha: f64,
    /// Zone connection tolerance (T10).
    pub zone_tolerance_eps_c: f64,
    /// Members shorter than this are exempt from dual-end checks (T10).
    pub min_dualend_height: f64,
    /// Contact tolerance and ground threshold (T1/T8/T9).
    pub contact: ContactParams,
}

impl Default for ValidationParams {
    fn default() -> Self {
        Self {
            span_tolerance_tau: 0.03,
            spacing_standards: vec![0.406, 0.610],
            spacing_tolerance: 0.05,
            spacing_exempt_below: 0.1,
            lumber_set_lambda: vec![
                (38, 89),
                (38, 140),
                (38, 184),
                (38, 235),
                (38, 286),
                (89, 89),
                (140, 140),
            ],
            lumber_tol_w: 10.0,
            lumber_tol_d: 20.0,
            deflection_load_w: 1900.0,
            elastic_modulus_e: 12e9,
            deflection_tolerance_tau_delta: 0.08,
            grid_cell: 1.0,
            rafter_margin_mu: 0.3,
            coverage_min_rho: 0.70,
            gap_max_gamma: 0.20,
            cantilever_max_c: 1.5,
            cantilever_spacing_c_sp: 3.0,
            elevated_sill_z: 1.0,
            zone_fraction_alpha: 0.20,
            zone_tolerance_eps_c: 0.10,
            min_dualend_height: 0.3,
            contact: ContactParams::default(),
        }
    }
}

impl ValidationParams {
    /// Loads params from a JSON config; absent fields keep their defaults.
    pub fn from_json(bytes: &[u8]) -> Result<Self, serde_json::Error> {
        serde_json::from_slice(bytes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_config_overrides_only_named_fields() {
        let p = ValidationParams::from_json(
            br#"{"grid_cell": 0.5, "contact": {"ground_height": 0.2}}"#,
        )
        .unwrap();
        assert_eq!(p.grid_cell, 0.5);
        assert_eq!(p.contact.ground_height, 0.2);
        // Nested default still applies to the unnamed field.
        assert_eq!(p.contact.contact_tolerance_eps, 0.05);
        assert_eq!(p.span_tolerance_tau, 0.03);
    }
}
