//! Verification report assembly: one structure that serializes to JSON and
//! renders as a text table, built deterministically from (manifold, box,
//! seed, flags).

use serde::Serialize;

use aeconn::connection::{
    chern, chern_torsion_residual, covariant_g, covariant_j, first_canonical, levi_civita,
    mixed_torsion_residual, solve_adapted, torsion, verify_trace_condition, well_adapted,
    well_adapted_torsion_residual, TorsionCondition, SOLVE_TOL,
};
use aeconn::manifold::{validate_structure, Manifold, Sign, DEFAULT_STRUCTURE_TOL};
use aeconn::sampling::{halton_points, AxisRange};
use aeconn::{GeomError, Point};

#[derive(Debug, Serialize)]
pub struct ValidationSection {
    pub j_square: f64,
    pub trace_j: f64,
    pub compatibility: f64,
    pub metric_symmetry: f64,
    pub nondegeneracy: f64,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct AdaptedSection {
    pub solver_residual: f64,
    pub solver_nullspace_dim: usize,
    pub nabla_j: f64,
    pub nabla_g: f64,
    pub torsion_identity: f64,
    pub trace_condition: f64,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct KaehlerSection {
    pub kaehler_type: bool,
    pub max_w_vs_levi_civita: f64,
    pub biconditional: bool,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct ChernSection {
    pub torsion_identity: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mixed_torsion: Option<f64>,
    pub solver_nullspace_dim: usize,
    pub max_w_vs_chern: f64,
    pub max_w_vs_canonical: f64,
    pub biconditional: bool,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct ProbeSection {
    pub min_nullspace_dim: usize,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct PointRow {
    pub index: usize,
    pub coords: Vec<f64>,
    pub nabla_j_levi_civita: f64,
    pub w_vs_levi_civita: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w_vs_chern: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w_vs_canonical: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub geometry: String,
    pub alpha: i64,
    pub epsilon: i64,
    pub dim2n: usize,
    pub points: usize,
    pub seed: u64,
    pub tol: f64,
    pub validation: ValidationSection,
    pub adapted: AdaptedSection,
    pub kaehler: KaehlerSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chern: Option<ChernSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub underdeterminacy_probe: Option<ProbeSection>,
    pub per_point: Vec<PointRow>,
    pub passed: bool,
}

/// Run the full verification suite at `count` seeded sample points.
pub fn run_verify(
    m: &Manifold,
    sample_box: &[AxisRange],
    seed: u64,
    count: usize,
    tol: f64,
) -> Result<VerifyReport, GeomError> {
    let points: Vec<Point> = halton_points(sample_box, seed, count);
    let chern_case = m.alpha() != m.epsilon();
    let probe_case = m.alpha() == Sign::Plus && m.epsilon() == Sign::Plus;

    let v = validate_structure(m, &points, DEFAULT_STRUCTURE_TOL)?;
    let validation = ValidationSection {
        j_square: v.j_square,
        trace_j: v.trace_j,
        compatibility: v.compatibility,
        metric_symmetry: v.metric_symmetry,
        nondegeneracy: v.nondegeneracy,
        passed: v.passed,
    };

    let mut adapted = AdaptedSection {
        solver_residual: 0.0,
        solver_nullspace_dim: 0,
        nabla_j: 0.0,
        nabla_g: 0.0,
        torsion_identity: 0.0,
        trace_condition: 0.0,
        passed: true,
    };
    let mut kaehler = KaehlerSection {
        kaehler_type: true,
        max_w_vs_levi_civita: 0.0,
        biconditional: true,
        passed: true,
    };
    let mut chern_section = ChernSection {
        torsion_identity: 0.0,
        mixed_torsion: if m.alpha() == Sign::Plus { Some(0.0) } else { None },
        solver_nullspace_dim: 0,
        max_w_vs_chern: 0.0,
        max_w_vs_canonical: 0.0,
        biconditional: true,
        passed: true,
    };
    let mut probe = ProbeSection {
        min_nullspace_dim: usize::MAX,
        passed: true,
    };
    let mut per_point = Vec::with_capacity(points.len());

    for (index, p) in points.iter().enumerate() {
        let lc = levi_civita(m, p)?;
        let nabla_j_lc = covariant_j(m, &lc)?.amax();
        let wa = well_adapted(m, p)?;
        let diag = wa.diagnostics.as_ref().unwrap();
        adapted.solver_residual = adapted.solver_residual.max(diag.residual);
        adapted.solver_nullspace_dim = adapted.solver_nullspace_dim.max(diag.nullspace_dim);
        adapted.nabla_j = adapted.nabla_j.max(covariant_j(m, &wa)?.amax());
        adapted.nabla_g = adapted.nabla_g.max(covariant_g(m, &wa)?.amax());
        adapted.torsion_identity = adapted
            .torsion_identity
            .max(well_adapted_torsion_residual(m, &wa)?);
        adapted.trace_condition = adapted
            .trace_condition
            .max(verify_trace_condition(m, p, &wa)?);

        let w_vs_lc = wa.gamma.max_abs_diff(&lc.gamma);
        kaehler.max_w_vs_levi_civita = kaehler.max_w_vs_levi_civita.max(w_vs_lc);
        kaehler.kaehler_type &= nabla_j_lc <= tol;
        kaehler.biconditional &= (nabla_j_lc <= tol) == (w_vs_lc <= tol);

        let (w_vs_chern, w_vs_canonical) = if chern_case {
            let ch = chern(m, p)?;
            let fc = first_canonical(m, p)?;
            chern_section.torsion_identity = chern_section
                .torsion_identity
                .max(chern_torsion_residual(m, &ch)?);
            if let Some(mixed) = chern_section.mixed_torsion.as_mut() {
                *mixed = mixed.max(mixed_torsion_residual(m, &ch)?);
            }
            chern_section.solver_nullspace_dim = chern_section
                .solver_nullspace_dim
                .max(ch.diagnostics.as_ref().unwrap().nullspace_dim);
            let dc = wa.gamma.max_abs_diff(&ch.gamma);
            let d0 = wa.gamma.max_abs_diff(&fc.gamma);
            chern_section.max_w_vs_chern = chern_section.max_w_vs_chern.max(dc);
            chern_section.max_w_vs_canonical = chern_section.max_w_vs_canonical.max(d0);
            chern_section.biconditional &= (dc <= tol) == (d0 <= tol);
            // the first canonical connection must be adapted everywhere
            let _ = torsion(&fc);
            (Some(dc), Some(d0))
        } else {
            (None, None)
        };

        if probe_case {
            let probe_solve = solve_adapted(m, p, TorsionCondition::Chern)?;
            probe.min_nullspace_dim = probe.min_nullspace_dim.min(probe_solve.nullspace_dim);
        }

        per_point.push(PointRow {
            index,
            coords: p.coords().to_vec(),
            nabla_j_levi_civita: nabla_j_lc,
            w_vs_levi_civita: w_vs_lc,
            w_vs_chern,
            w_vs_canonical,
        });
    }

    adapted.passed = adapted.solver_residual < SOLVE_TOL
        && adapted.solver_nullspace_dim == 0
        && adapted.nabla_j < SOLVE_TOL
        && adapted.nabla_g < SOLVE_TOL
        && adapted.torsion_identity < SOLVE_TOL
        && adapted.trace_condition < SOLVE_TOL;
    kaehler.passed = kaehler.biconditional;
    chern_section.passed = chern_section.torsion_identity < SOLVE_TOL
        && chern_section.mixed_torsion.map_or(true, |v| v < SOLVE_TOL)
        && chern_section.solver_nullspace_dim == 0
        && chern_section.biconditional;
    probe.passed = probe.min_nullspace_dim > 0;

    let chern_out = chern_case.then_some(chern_section);
    let probe_out = probe_case.then_some(probe);
    let passed = validation.passed
        && adapted.passed
        && kaehler.passed
        && chern_out.as_ref().map_or(true, |c| c.passed)
        && probe_out.as_ref().map_or(true, |p| p.passed);

    Ok(VerifyReport {
        geometry: m.geometry_name().to_string(),
        alpha: m.alpha().value() as i64,
        epsilon: m.epsilon().value() as i64,
        dim2n: m.dim(),
        points: count,
        seed,
        tol,
        validation,
        adapted,
        kaehler,
        chern: chern_out,
        underdeterminacy_probe: probe_out,
        per_point,
        passed,
    })
}

fn flag(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

impl VerifyReport {
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(format!(
            "geometry: {} (alpha = {}, epsilon = {}), dim {}",
            self.geometry, self.alpha, self.epsilon, self.dim2n
        ));
        line(format!(
            "sampled {} points from seed {} | tolerance {:.1e}",
            self.points, self.seed, self.tol
        ));
        line(String::new());
        let v = &self.validation;
        line(format!("structure axioms [{}]", flag(v.passed)));
        line(format!("  |J^2 - aI|        {:.6e}", v.j_square));
        line(format!("  |trace J|         {:.6e}", v.trace_j));
        line(format!("  |J^t g J - eg|    {:.6e}", v.compatibility));
        line(format!("  |g - g^t|         {:.6e}", v.metric_symmetry));
        line(format!("  nondegeneracy     {:.6e}", v.nondegeneracy));
        let a = &self.adapted;
        line(format!("well-adapted connection [{}]", flag(a.passed)));
        line(format!("  solver residual   {:.6e}", a.solver_residual));
        line(format!("  solver nullspace  {}", a.solver_nullspace_dim));
        line(format!("  |nabla J|         {:.6e}", a.nabla_j));
        line(format!("  |nabla g|         {:.6e}", a.nabla_g));
        line(format!("  torsion identity  {:.6e}", a.torsion_identity));
        line(format!("  torsion traces    {:.6e}", a.trace_condition));
        let k = &self.kaehler;
        line(format!("Levi-Civita coincidence [{}]", flag(k.passed)));
        line(format!("  Kaehler type      {}", k.kaehler_type));
        line(format!(
            "  max |G^w - G^g|   {:.6e}",
            k.max_w_vs_levi_civita
        ));
        line(format!("  biconditional     {}", k.biconditional));
        if let Some(c) = &self.chern {
            line(format!("Chern connection [{}]", flag(c.passed)));
            line(format!("  torsion identity  {:.6e}", c.torsion_identity));
            if let Some(mixed) = c.mixed_torsion {
                line(format!("  mixed torsion     {:.6e}", mixed));
            }
            line(format!("  solver nullspace  {}", c.solver_nullspace_dim));
            line(format!("  max |G^w - G^c|   {:.6e}", c.max_w_vs_chern));
            line(format!("  max |G^w - G^0|   {:.6e}", c.max_w_vs_canonical));
            line(format!("  biconditional     {}", c.biconditional));
        }
        if let Some(p) = &self.underdeterminacy_probe {
            line(format!("under-determinacy probe [{}]", flag(p.passed)));
            line(format!(
                "  chern-condition nullspace dim >= {} at every point",
                p.min_nullspace_dim
            ));
        }
        line(String::new());
        line("per point: idx | |nabla J| | |G^w - G^g| | |G^w - G^c| | |G^w - G^0|".to_string());
        for row in &self.per_point {
            let c = row
                .w_vs_chern
                .map_or("      -".to_string(), |v| format!("{v:.1e}"));
            let z = row
                .w_vs_canonical
                .map_or("      -".to_string(), |v| format!("{v:.1e}"));
            line(format!(
                "  {:>3} | {:.3e} | {:.3e} | {} | {}",
                row.index, row.nabla_j_levi_civita, row.w_vs_levi_civita, c, z
            ));
        }
        line(String::new());
        line(format!("overall: {}", flag(self.passed)));
        out
    }
}
