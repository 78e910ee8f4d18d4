//! The example-check table behind `verify-paper-examples`.

use lievf_core::cycles::{find_cycles, invariance_defect, CycleError};
use lievf_core::field::presets::*;
use lievf_core::field::{lie_bracket, make_homogeneous_center, scale_field};
use lievf_core::flow::IntegratorConfig;
use lievf_core::linops::{centralizer_basis, compare_centralizers, dimension_profile};
use lievf_core::symplectic::remark_defect;
use lievf_core::VectorField2;

use crate::exprio::format_float;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub claim: &'static str,
    pub location: &'static str,
    pub computed: String,
    pub passed: bool,
}

fn check(claim: &'static str, location: &'static str, computed: String, passed: bool) -> Check {
    Check {
        claim,
        location,
        computed,
        passed,
    }
}

fn shown<T: std::fmt::Debug, E: std::fmt::Display>(r: &Result<T, E>) -> String {
    match r {
        Ok(v) => format!("{v:?}"),
        Err(e) => e.to_string(),
    }
}

fn field_text(f: &VectorField2) -> String {
    format!("({}, {})", f.p, f.q)
}

fn presets() -> Vec<VectorField2> {
    let mut v = vec![
        example1_x(),
        example1_y(),
        example1_mirrored(),
        van_der_pol(),
        rotation(),
        dilation(),
        saddle(),
        scale_field(&rescaling_factor(), &rotation()),
    ];
    v.extend([0, 2, 4].map(|n| make_homogeneous_center(n).expect("even")));
    v
}

fn cycle_check(
    claim: &'static str,
    x: &VectorField2,
    cfg: &IntegratorConfig,
) -> Result<Check, CycleError> {
    let scan = find_cycles(x, 0.2, 2.0, cfg)?;
    let computed = scan
        .cycles
        .iter()
        .map(|c| {
            format!(
                "r* = {}, m = {}",
                format_float(c.radius),
                format_float(c.multiplier)
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    let passed = scan.cycles.len() == 1
        && (scan.cycles[0].radius - 1.0).abs() <= 1e-6
        && (scan.cycles[0].multiplier - 1.0).abs() > 1e-6;
    Ok(check(claim, "Example 1", computed, passed))
}

/// Runs every check. Numerical failures surface as failed rows.
pub fn example_checks() -> Vec<Check> {
    let cfg = IntegratorConfig::default();
    let mut out = Vec::new();

    let b = lie_bracket(&example1_x(), &example1_y());
    out.push(check(
        "[X, Y] = 0 for the two fields of Example 1",
        "Example 1",
        field_text(&b),
        b.is_zero(),
    ));

    let brackets: Vec<bool> = [0, 2, 4]
        .iter()
        .map(|&n| lie_bracket(&make_homogeneous_center(n).expect("even"), &rotation()).is_zero())
        .collect();
    out.push(check(
        "homogeneous centers y(x^2+y^2)^(n/2) commute with the linear center, n = 0, 2, 4",
        "question 2)",
        format!("commute = {brackets:?}"),
        brackets.iter().all(|b| *b),
    ));

    let dims = [(dilation(), 4, "Example 2"), (example1_x(), 2, "Example 2")];
    for (x, want, loc) in dims {
        let computed = centralizer_basis(&x, 3).map(|r| r.dimension);
        out.push(check(
            if want == 4 {
                "centralizer of (x, y) is 4-dimensional (degree <= 3)"
            } else {
                "centralizer of Example 1's X is 2-dimensional (degree <= 3)"
            },
            loc,
            shown(&computed),
            computed == Ok(want),
        ));
    }

    let vdp = dimension_profile(&van_der_pol(), 5);
    out.push(check(
        "centralizer of the van der Pol field has at most two dimensions (degree <= 5)",
        "Example 2",
        shown(
            &vdp.as_ref()
                .map(|p| p.iter().map(|(_, d)| *d).collect::<Vec<_>>()),
        ),
        vdp.as_ref().is_ok_and(|p| p.iter().all(|(_, d)| *d <= 2)),
    ));

    let cmp = compare_centralizers(&rotation(), &rescaling_factor(), 3);
    out.push(match cmp {
        Ok(c) => check(
            "bracket vanishes on C(fX) but not on C(X), X = (y, -x), f = x^2+y^2+1",
            "question 1)",
            format!(
                "abelian C(X) = {}, abelian C(fX) = {}",
                c.original.abelian, c.rescaled.abelian
            ),
            !c.original.abelian && c.rescaled.abelian && !c.necessary_conditions_hold(),
        ),
        Err(e) => check("C(X) and C(fX) differ", "question 1)", e.to_string(), false),
    });

    let ps = presets();
    let mut nonzero = 0;
    for x in &ps {
        for y in &ps {
            if !remark_defect(x, y).is_zero() {
                nonzero += 1;
            }
        }
    }
    out.push(check(
        "{zP+wQ, zR+wS} = -(z, w)·[X, Y] for every preset pair",
        "Remark",
        format!("{} pairs, {nonzero} nonzero defects", ps.len() * ps.len()),
        nonzero == 0,
    ));

    for (claim, x) in [
        (
            "the unit circle is a hyperbolic limit cycle of X",
            example1_x(),
        ),
        (
            "the unit circle is a hyperbolic limit cycle of Y",
            example1_y(),
        ),
    ] {
        out.push(
            cycle_check(claim, &x, &cfg)
                .unwrap_or_else(|e| check(claim, "Example 1", e.to_string(), false)),
        );
    }

    let inv = find_cycles(&example1_x(), 0.2, 2.0, &cfg).and_then(|scan| {
        scan.cycles
            .iter()
            .map(|c| invariance_defect(&example1_x(), &example1_y(), c))
            .collect::<Result<Vec<_>, _>>()
    });
    out.push(match inv {
        Ok(d) if !d.is_empty() => check(
            "a limit cycle of X is invariant under a commuting Y",
            "question 1)",
            format!(
                "defect = {}",
                format_float(d.iter().copied().fold(0.0, f64::max))
            ),
            d.iter().all(|v| *v <= 1e-8),
        ),
        Ok(_) => check(
            "a limit cycle of X is invariant under a commuting Y",
            "question 1)",
            "no cycle found".into(),
            false,
        ),
        Err(e) => check(
            "a limit cycle of X is invariant under a commuting Y",
            "question 1)",
            e.to_string(),
            false,
        ),
    });

    let h2 = make_homogeneous_center(2).expect("even");
    let c = centralizer_basis(&h2, 3);
    out.push(check(
        "the homogeneous center has a commuting partner besides itself (degree <= 3)",
        "question 2)",
        shown(&c.as_ref().map(|r| r.dimension)),
        c.is_ok_and(|r| r.dimension >= 2 && r.contains(&rotation())),
    ));

    out
}
