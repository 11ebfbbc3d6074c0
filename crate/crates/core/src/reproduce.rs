//! The two worked examples: a square with a triangle attached, and the thin
//! product `(0, a) x S^2`.

use std::f64::consts::PI;

use serde::Serialize;
use serde_json::{json, Value};

use crate::constants::{c_d, threshold_a0, ThresholdCase, ThresholdRequest};
use crate::counting::{
    estimate_seeley_constant, two_term_bound, weyl_onset, CountingFunction, Side,
};
use crate::error::Result;
use crate::exact::{Length, PiRational};
use crate::polya::{
    polya_exact_constant, verify_counting_bound, verify_dirichlet, verify_exact, verify_neumann,
    Location,
};
use crate::spectra::{
    box_spectrum, build_with_count, interval_spectrum, product_spectrum, sphere2_spectrum,
    triangle_neumann_spectrum, BoundaryCondition, DomainMeta, EigenvalueStream,
};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct Bundle {
    pub example: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Bundle {
    fn new(example: &str) -> Self {
        Self {
            example: example.into(),
            passed: true,
            checks: Vec::new(),
        }
    }

    fn push(&mut self, name: &str, passed: bool, detail: Value) {
        self.passed &= passed;
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail,
        });
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Lower end of the counting window: below it the Dirichlet count of the composite domain
/// is zero by Faber-Krahn.
pub const SQUARE_TRIANGLE_LO: f64 = 0.1;

/// Square of side 10 and unit equilateral triangle: Neumann counting bounds at every jump in
/// `[0.1, cutoff]`, the composite constant `C = 50`, and the threshold `1/(4 pi)`.
pub fn square_triangle(cutoff: f64) -> Result<Bundle> {
    let mut b = Bundle::new("square-triangle");
    let window = (SQUARE_TRIANGLE_LO, cutoff);
    // Stream cutoffs sit just above the window so jumps at `cutoff` itself are included.
    let stream_cutoff = cutoff * (1.0 + 1e-9) + 1e-9;

    let side: Length = "10".parse()?;
    let sides = [side.clone(), side];
    let square_meta = DomainMeta::boxed(&sides, BoundaryCondition::Neumann)?;
    let square = box_spectrum(&sides, BoundaryCondition::Neumann, stream_cutoff)?;
    let square_cf = CountingFunction::from_stream(square.clone(), square_meta.clone());
    let (r, _) = verify_counting_bound(
        &square_cf,
        &|l| two_term_bound(&square_meta, 20.0, l, Side::Upper),
        window,
        Side::Upper,
    )?;
    b.push("square_bound_c20", r.holds(), serde_json::to_value(&r)?);

    let tri_cf = CountingFunction::triangle_neumann();
    let tri_meta = tri_cf.meta.clone();
    let (r, _) = verify_counting_bound(
        &tri_cf,
        &|l| two_term_bound(&tri_meta, 30.0, l, Side::Upper),
        window,
        Side::Upper,
    )?;
    b.push("triangle_bound_c30", r.holds(), serde_json::to_value(&r)?);

    // Neumann bracketing: N_Omega <= N_S + N_T, the count of the disjoint union.
    let triangle = triangle_neumann_spectrum(stream_cutoff)?;
    let union = square.disjoint_union(&triangle)?;
    let volume = 100.0 + 3f64.sqrt() / 4.0;
    let union_meta = DomainMeta::new(2, volume, BoundaryCondition::Neumann)?;
    let union_cf = CountingFunction::from_stream(union, union_meta.clone());
    let c_omega = 20.0 + 30.0;
    let (r, _) = verify_counting_bound(
        &union_cf,
        &|l| two_term_bound(&union_meta, c_omega, l, Side::Upper),
        window,
        Side::Upper,
    )?;
    let leading_ok = (c_d(2) * volume - (100.0 + 3f64.sqrt() / 4.0) / (4.0 * PI)).abs() < 1e-12;
    b.push(
        "composite_bound_c50",
        r.holds() && leading_ok,
        json!({ "c_omega": c_omega, "volume": volume, "report": r }),
    );

    let t = threshold_a0(&ThresholdRequest {
        case: ThresholdCase::DirichletThinD2,
        volume: Some(volume),
        remainder: Some(c_omega),
        onset: None,
        dimension: Some(2),
    })?;
    let target = 1.0 / (4.0 * PI);
    b.push(
        "threshold_covers_1_over_4pi",
        target <= t.value,
        json!({ "a0": t.value, "target": target, "threshold": t }),
    );
    Ok(b)
}

fn thin_sphere(
    a: &Length,
    bc: BoundaryCondition,
    need: u64,
) -> Result<(EigenvalueStream, DomainMeta)> {
    let meta = DomainMeta::product(&DomainMeta::interval(a, bc)?, &DomainMeta::sphere2())?;
    // Weyl guess for the cutoff holding `need` eigenvalues, plus the first interval level.
    let start =
        (need as f64 / (c_d(3) * meta.volume)).powf(2.0 / 3.0) + PI * PI / (a.value * a.value);
    let s = build_with_count(
        |cut| {
            let i = interval_spectrum(a.clone(), bc, cut)?;
            product_spectrum(&i, &sphere2_spectrum(cut)?, cut)
        },
        need,
        start,
    )?;
    Ok((s, meta))
}

fn first_failure_at_one(r: &crate::polya::VerificationReport, witness: f64) -> bool {
    match r.failures.first() {
        Some(f) => f.location == Location::Index(1) && ((f.lhs - witness) / witness).abs() < 1e-12,
        None => false,
    }
}

/// `(0, a) x S^2`: exact Dirichlet and Neumann verification for `a = pi/24` up to `k_max`,
/// the float path agreeing with it, the two large-`a` failures, and the threshold.
pub fn sphere_thin(k_max: u64) -> Result<Bundle> {
    let mut b = Bundle::new("sphere-thin");
    let a: Length = "pi/24".parse()?;

    let (sd, md) = thin_sphere(&a, BoundaryCondition::Dirichlet, k_max)?;
    let k = polya_exact_constant(&md)?;
    b.push(
        "constant_1296",
        k == PiRational::integer(1296),
        json!({ "constant": k.to_string() }),
    );
    let exact = verify_exact(&sd, 3, BoundaryCondition::Dirichlet, &k, k_max)?;
    let float = verify_dirichlet(&sd, &md, k_max)?;
    b.push(
        "dirichlet_exact",
        exact.holds() && exact.checked == k_max,
        serde_json::to_value(&exact)?,
    );
    b.push(
        "dirichlet_float_agrees",
        float.verdict == exact.verdict && float.checked == exact.checked,
        serde_json::to_value(&float)?,
    );

    let (sn, mn) = thin_sphere(&a, BoundaryCondition::Neumann, k_max + 1)?;
    let exact = verify_exact(&sn, 3, BoundaryCondition::Neumann, &k, k_max)?;
    let float = verify_neumann(&sn, &mn, k_max)?;
    b.push(
        "neumann_exact",
        exact.holds() && exact.checked == k_max,
        serde_json::to_value(&exact)?,
    );
    b.push(
        "neumann_float_agrees",
        float.verdict == exact.verdict && float.checked == exact.checked,
        serde_json::to_value(&float)?,
    );

    // a = pi: lambda_1 = pi^2/a^2 = 1 lies below the Polya bound.
    let big: Length = "pi".parse()?;
    let (s, m) = thin_sphere(&big, BoundaryCondition::Dirichlet, 10)?;
    let r = verify_dirichlet(&s, &m, 10)?;
    b.push(
        "dirichlet_fails_at_a_pi",
        first_failure_at_one(&r, 1.0),
        serde_json::to_value(&r)?,
    );

    // pi/sqrt(2) <= a < sqrt(2/3) pi: mu_1 = pi^2/a^2 lies above the bound.
    let a_n = 0.99 * (2.0f64 / 3.0).sqrt() * PI;
    let in_range = a_n >= PI / 2f64.sqrt() && a_n < (2.0f64 / 3.0).sqrt() * PI;
    let (s, m) = thin_sphere(&Length::from(a_n), BoundaryCondition::Neumann, 10)?;
    let r = verify_neumann(&s, &m, 10)?;
    b.push(
        "neumann_fails_below_sqrt_two_thirds_pi",
        in_range && first_failure_at_one(&r, PI * PI / (a_n * a_n)),
        json!({ "a": a_n, "report": r }),
    );

    // Remainder constants of S^2: N(lambda) >= lambda - sqrt(lambda), so C = 1; the
    // onset of N(lambda) > C_3 pi |S^2| lambda is scanned.
    let sphere_cf = CountingFunction::from_stream(sphere2_spectrum(1e4)?, DomainMeta::sphere2());
    let seeley = estimate_seeley_constant(&sphere_cf, (0.0, 1e4), Side::Lower)?;
    let slope = c_d(3) * PI * 4.0 * PI;
    let onset = weyl_onset(&sphere_cf, slope, (0.0, 1e4))?.unwrap_or(0.0);
    let c1 = onset.max(1.0);
    let volume = 4.0 * PI;
    let neumann = threshold_a0(&ThresholdRequest {
        case: ThresholdCase::NeumannThinD2,
        volume: Some(volume),
        remainder: Some(1.0),
        onset: Some(c1),
        dimension: Some(2),
    })?;
    let dirichlet = threshold_a0(&ThresholdRequest {
        case: ThresholdCase::ManifoldDirichletD2,
        volume: Some(volume),
        remainder: Some(1.0),
        onset: None,
        dimension: Some(2),
    })?;
    let a0 = neumann.value.min(dirichlet.value);
    b.push(
        "threshold_pi_over_24",
        seeley.value <= 1.0 && (a0 - PI / 24.0).abs() < 1e-15,
        json!({
            "a0": a0,
            "seeley_lower": seeley,
            "neumann_onset": onset,
            "neumann": neumann,
            "dirichlet": dirichlet,
        }),
    );
    Ok(b)
}
