//! Grid-parallel cycle scans. Output is identical to the sequential scan.

use lievf_core::cycles::{
    analyze_scan, check_range, grid_sample, scan_radii, CycleError, CycleScan, Section,
};
use lievf_core::flow::IntegratorConfig;
use lievf_core::VectorField2;
use rayon::prelude::*;

pub fn par_find_cycles(
    x: &VectorField2,
    r_min: f64,
    r_max: f64,
    section: &Section,
    cfg: &IntegratorConfig,
) -> Result<CycleScan, CycleError> {
    check_range(r_min, r_max)?;
    cfg.validate()?;
    let samples = scan_radii(r_min, r_max)
        .into_par_iter()
        .map(|r| grid_sample(x, r, section, cfg))
        .collect();
    Ok(analyze_scan(x, section, samples, cfg))
}
