//! Serialization of solver results to the CLI's JSON and CSV formats.

use cmc_tubes::*;

/// Compact JSON record for a solved tube: scalar summary plus the full
/// multiplicity report (the sampled curve is exported separately via `mesh`
/// or `family`).
pub fn tube_json(space: &AmbientSpace, sol: &TubeSolution) -> String {
    let report: Vec<serde_json::Value> = sol
        .multiplicity_report
        .iter()
        .map(|b| {
            serde_json::json!({
                "j_lo": b.j_lo, "j_hi": b.j_hi, "j_root": b.j_root, "residual": b.residual,
            })
        })
        .collect();
    serde_json::json!({
        "schema": "cmc-tubes/1",
        "space": space,
        "pitch": sol.pitch.value(),
        "H": sol.point.h(),
        "J_tube": sol.point.j(),
        "residual": sol.residual,
        "bracket": [sol.bracket.0, sol.bracket.1],
        "roots_found": sol.multiplicity_report.len(),
        "multiplicity_report": report,
        "r_minus": sol.curve.r_minus(),
        "r_plus": sol.curve.r_plus(),
        "h_max": sol.curve.h_max(),
        "class": "tube",
    })
    .to_string()
}

/// CSV for the boundary-curvature sweep: a,H0,roots_found,status.
/// The fully symmetric pitches report H0 = 0 exactly.
pub fn h0_csv(
    space: &AmbientSpace,
    a_grid: &[f64],
    roots: &RootFindSettings,
    quad: &QuadratureSettings,
) -> String {
    let mut out = String::from("a,H0,roots_found,status\n");
    for &a in a_grid {
        let line = match Pitch::new(a).and_then(|p| boundary_h0(space, p, roots, quad)) {
            Ok(found) => format!("{a:.16e},{:.16e},{},ok\n", found[0], found.len()),
            Err(Error::NotApplicable(_)) => format!("{a:.16e},{:.16e},0,ok\n", 0.0),
            Err(e) => {
                let status = if e.is_numeric() { "error" } else { "no_tube" };
                format!("{a:.16e},,0,{status}\n")
            }
        };
        out.push_str(&line);
    }
    out
}

/// Family CSV via the library writer.
pub fn family_csv(report: &FamilyReport) -> String {
    let mut buf = Vec::new();
    report.write_csv(&mut buf).expect("in-memory write");
    String::from_utf8(buf).expect("ascii csv")
}
