//! File formats: JSON inputs and dumps, the convergence CSV, OBJ meshes and
//! SVG rendering of diagrams in the Poincaré disk.

mod files;
mod obj;
mod svg;

use std::fmt::Write;

pub use files::{
    read_json, write_json, Dump, DumpCell, DumpSite, MetricSidecar, SiteRecord, SitesFile, TargetFile,
};
pub use obj::{parse_obj, write_obj, ObjMesh};
pub use svg::{geodesic_arc, render_svg, Arc, RenderOptions};

use crate::solver::IterationRecord;

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

pub const CSV_HEADER: &str = "iter,lambda,residual_inf,residual_l2,energy,millis";

pub fn convergence_csv(log: &[IterationRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in log {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.iter,
            fmt_f64(r.lambda),
            fmt_f64(r.residual_inf),
            fmt_f64(r.residual_l2),
            fmt_f64(r.energy.unwrap_or(f64::NAN)),
            fmt_f64(r.millis)
        );
    }
    out
}
