//! Built-in catalog of example manifolds, one flat (Kähler-type) and one
//! curved (non-Kähler) per geometry, plus a witness where the well-adapted
//! and Chern connections visibly differ.
//!
//! All entries live on `ℝ⁴` (`n = 2`) with sample box `[−1, 1]⁴`; the
//! library itself supports any even dimension. Curved metrics come from the
//! averaging construction, so structure compatibility holds identically and
//! validation residuals sit at machine precision; perturbation sizes stay
//! ≤ 0.3 to keep every metric nondegenerate on the box (checked by the
//! catalog tests, not assumed).
//!
//! Bump placement is deliberate: with the standard complex pairing
//! `x1 ↔ x3, x2 ↔ x4`, a diagonal bump driven by `x1` leaves the
//! fundamental 2-form closed (still Kähler-type), so the curved entries
//! drive their bumps with `x2`. Likewise the product example rotates its
//! eigenbundles in the `(x1, x3)` plane by an angle depending on `x2`: an
//! `x1`-dependent angle keeps both eigendistributions involutive.

use crate::error::GeomError;
use crate::expr::{parse_expression, Expr, MatrixField, Point};
use crate::manifold::{
    averaged_metric, standard_complex_structure, standard_product_structure, Manifold, Sign,
};
use crate::sampling::{halton_points, symmetric_unit_box, AxisRange};

/// Properties an entry is expected to exhibit, for report cross-checks.
#[derive(Debug, Clone)]
pub struct ExpectedFlags {
    pub kaehler_type: bool,
    pub alpha: Sign,
    pub epsilon: Sign,
    pub notes: &'static str,
}

/// A named example manifold with its sampling contract.
#[derive(Debug, Clone)]
pub struct ExampleEntry {
    pub name: &'static str,
    pub manifold: Manifold,
    pub expected: ExpectedFlags,
    pub sample_box: Vec<AxisRange>,
    pub seed: u64,
    /// Declared point where the well-adapted and Chern connections differ
    /// (witness entry only).
    pub witness_point: Option<Point>,
}

impl ExampleEntry {
    /// The entry's deterministic sample points.
    pub fn sample_points(&self, count: usize) -> Vec<Point> {
        halton_points(&self.sample_box, self.seed, count)
    }
}

const NAMES: [&str; 7] = [
    "flat_hermitian",
    "flat_norden",
    "curved_para_hermitian",
    "curved_hermitian",
    "curved_norden",
    "curved_product",
    "chern_witness",
];

/// Names of all built-in examples.
pub fn catalog() -> Vec<&'static str> {
    NAMES.to_vec()
}

/// Build a catalog entry by name.
pub fn load_example(name: &str) -> Result<ExampleEntry, GeomError> {
    match name {
        "flat_hermitian" => Ok(flat_hermitian()),
        "flat_norden" => Ok(flat_norden()),
        "curved_para_hermitian" => Ok(curved_para_hermitian()),
        "curved_hermitian" => Ok(curved_hermitian()),
        "curved_norden" => Ok(curved_norden()),
        "curved_product" => Ok(curved_product()),
        "chern_witness" => Ok(chern_witness()),
        other => Err(GeomError::UnknownExample(other.to_string())),
    }
}

/// Load every catalog entry in order.
pub fn load_all() -> Vec<ExampleEntry> {
    NAMES.iter().map(|n| load_example(n).unwrap()).collect()
}

fn expr(text: &str) -> Expr {
    parse_expression(text, 4).unwrap()
}

// h = I plus symmetric bumps at the listed (row, col) entries
fn identity_plus(bumps: &[(usize, usize, &str)]) -> MatrixField {
    let mut entries: Vec<Expr> = (0..16)
        .map(|idx| Expr::constant(if idx % 5 == 0 { 1.0 } else { 0.0 }))
        .collect();
    for &(i, k, text) in bumps {
        entries[i * 4 + k] = entries[i * 4 + k].clone().add(expr(text));
        if i != k {
            entries[k * 4 + i] = entries[k * 4 + i].clone().add(expr(text));
        }
    }
    MatrixField::from_entries(4, entries)
}

// rotation of the (axis_a, axis_b) coordinate plane by the given angle field
fn plane_rotation(axis_a: usize, axis_b: usize, angle: &str) -> MatrixField {
    let c = expr(&format!("cos({angle})"));
    let s = expr(&format!("sin({angle})"));
    MatrixField::from_fn(4, |i, j| {
        if (i, j) == (axis_a, axis_a) || (i, j) == (axis_b, axis_b) {
            c.clone()
        } else if (i, j) == (axis_a, axis_b) {
            s.clone().neg()
        } else if (i, j) == (axis_b, axis_a) {
            s.clone()
        } else {
            Expr::constant(if i == j { 1.0 } else { 0.0 })
        }
    })
}

fn conjugated(j0: &MatrixField, r: &MatrixField) -> MatrixField {
    r.field_mul(j0).field_mul(&r.field_transpose())
}

fn flat_hermitian() -> ExampleEntry {
    let manifold = Manifold::new(
        4,
        Sign::Minus,
        Sign::Plus,
        MatrixField::identity(4),
        standard_complex_structure(4),
    )
    .unwrap();
    ExampleEntry {
        name: "flat_hermitian",
        manifold,
        expected: ExpectedFlags {
            kaehler_type: true,
            alpha: Sign::Minus,
            epsilon: Sign::Plus,
            notes: "Euclidean metric with the standard complex structure; every connection \
                    coincides with Levi-Civita and vanishes in these coordinates",
        },
        sample_box: symmetric_unit_box(4),
        seed: 101,
        witness_point: None,
    }
}

fn neutral_diag() -> MatrixField {
    MatrixField::from_fn(4, |i, j| {
        Expr::constant(if i == j {
            if i < 2 {
                1.0
            } else {
                -1.0
            }
        } else {
            0.0
        })
    })
}

fn flat_norden() -> ExampleEntry {
    let manifold = Manifold::new(
        4,
        Sign::Minus,
        Sign::Minus,
        neutral_diag(),
        standard_complex_structure(4),
    )
    .unwrap();
    ExampleEntry {
        name: "flat_norden",
        manifold,
        expected: ExpectedFlags {
            kaehler_type: true,
            alpha: Sign::Minus,
            epsilon: Sign::Minus,
            notes: "constant neutral metric anti-compatible with the standard complex \
                    structure",
        },
        sample_box: symmetric_unit_box(4),
        seed: 102,
        witness_point: None,
    }
}

fn curved_para_hermitian() -> ExampleEntry {
    let j = standard_product_structure(4);
    // hyperbolic pairing in the mixed block plus an x2-driven bump; the
    // averaging keeps only mixed-block entries, so g(0) = [[0, I], [I, 0]]
    let h = identity_plus(&[(0, 2, "1"), (1, 3, "1"), (0, 2, "0.1*x2")]);
    let g = averaged_metric(&j, &h, Sign::Minus);
    let manifold = Manifold::new(4, Sign::Plus, Sign::Minus, g, j).unwrap();
    ExampleEntry {
        name: "curved_para_hermitian",
        manifold,
        expected: ExpectedFlags {
            kaehler_type: false,
            alpha: Sign::Plus,
            epsilon: Sign::Minus,
            notes: "split structure with hyperbolic metric bumped by 0.1*x2 at the mixed \
                    entry (1,3); det g = (1 + 0.1*x2)^2 stays positive on the box",
        },
        sample_box: symmetric_unit_box(4),
        seed: 103,
        witness_point: None,
    }
}

fn curved_hermitian() -> ExampleEntry {
    let j = standard_complex_structure(4);
    let h = identity_plus(&[(0, 0, "0.2*x2^2")]);
    let g = averaged_metric(&j, &h, Sign::Plus);
    let manifold = Manifold::new(4, Sign::Minus, Sign::Plus, g, j).unwrap();
    ExampleEntry {
        name: "curved_hermitian",
        manifold,
        expected: ExpectedFlags {
            kaehler_type: false,
            alpha: Sign::Minus,
            epsilon: Sign::Plus,
            notes: "averaged metric over I + 0.2*x2^2 at entry (1,1); the x2 dependence \
                    breaks closedness of the fundamental 2-form",
        },
        sample_box: symmetric_unit_box(4),
        seed: 104,
        witness_point: None,
    }
}

fn curved_norden() -> ExampleEntry {
    // position-dependent complex structure: conjugate the standard one by a
    // rotation of the (x1, x2) plane (which is not J-invariant) and average
    // the neutral metric against it
    let r = plane_rotation(0, 1, "0.3*x1");
    let j = conjugated(&standard_complex_structure(4), &r);
    let g = averaged_metric(&j, &neutral_diag(), Sign::Minus);
    let manifold = Manifold::new(4, Sign::Minus, Sign::Minus, g, j).unwrap();
    ExampleEntry {
        name: "curved_norden",
        manifold,
        expected: ExpectedFlags {
            kaehler_type: false,
            alpha: Sign::Minus,
            epsilon: Sign::Minus,
            notes: "complex structure rotated in the (x1,x2) plane by 0.3*x1, metric \
                    averaged from diag(1,1,-1,-1); nonintegrable (nonzero structure \
                    torsion) and nowhere Kähler-type on the sampled box",
        },
        sample_box: symmetric_unit_box(4),
        seed: 105,
        witness_point: None,
    }
}

fn curved_product() -> ExampleEntry {
    let r = plane_rotation(0, 2, "0.3*x2");
    let j = conjugated(&standard_product_structure(4), &r);
    let h = identity_plus(&[(1, 1, "0.2*x2^2")]);
    let g = averaged_metric(&j, &h, Sign::Plus);
    let manifold = Manifold::new(4, Sign::Plus, Sign::Plus, g, j).unwrap();
    ExampleEntry {
        name: "curved_product",
        manifold,
        expected: ExpectedFlags {
            kaehler_type: false,
            alpha: Sign::Plus,
            epsilon: Sign::Plus,
            notes: "eigenbundles rotated in the (x1,x3) plane by 0.3*x2; positive \
                    definite averaged metric; the torsion normalization that defines a \
                    Chern-type connection is under-determined here",
        },
        sample_box: symmetric_unit_box(4),
        seed: 106,
        witness_point: None,
    }
}

fn chern_witness() -> ExampleEntry {
    // Found by scanning symmetric bump placements over the Hermitian
    // averaging family and measuring the connection gaps at a fixed probe
    // point: h = I + 0.2*x2 at entry (1,4) gives
    //   |Γ^w − Γ^c| ≈ 3.3e-2,  |Γ^w − Γ⁰| ≈ 1.7e-2
    // at (0.3, 0.4, −0.2, 0.5), far above the 1e-4 witness threshold.
    let j = standard_complex_structure(4);
    let h = identity_plus(&[(0, 3, "0.2*x2")]);
    let g = averaged_metric(&j, &h, Sign::Plus);
    let manifold = Manifold::new(4, Sign::Minus, Sign::Plus, g, j).unwrap();
    ExampleEntry {
        name: "chern_witness",
        manifold,
        expected: ExpectedFlags {
            kaehler_type: false,
            alpha: Sign::Minus,
            epsilon: Sign::Plus,
            notes: "averaged Hermitian metric over I + 0.2*x2 at entry (1,4); at the \
                    declared witness point the well-adapted, Chern, and first canonical \
                    connections are pairwise distinct",
        },
        sample_box: symmetric_unit_box(4),
        seed: 107,
        witness_point: Some(Point::new(vec![0.3, 0.4, -0.2, 0.5])),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::{
        chern, first_canonical, is_kaehler_type, levi_civita, nijenhuis, well_adapted,
    };
    use crate::manifold::validate_structure;

    #[test]
    fn catalog_lists_seven_entries_and_loads_each() {
        let names = catalog();
        assert_eq!(names.len(), 7);
        for name in names {
            let entry = load_example(name).unwrap();
            assert_eq!(entry.name, name);
            assert_eq!(entry.manifold.alpha(), entry.expected.alpha);
            assert_eq!(entry.manifold.epsilon(), entry.expected.epsilon);
        }
    }

    #[test]
    fn unknown_example_name_is_an_error() {
        assert!(matches!(
            load_example("no_such_entry"),
            Err(GeomError::UnknownExample(_))
        ));
    }

    #[test]
    fn every_entry_validates_on_fifty_seeded_points() {
        for entry in load_all() {
            let pts = entry.sample_points(50);
            let report = validate_structure(&entry.manifold, &pts, 1e-9).unwrap();
            assert!(
                report.passed && report.worst_residual() < 1e-9,
                "{}: worst residual {:.3e}, nondegeneracy {:.3e}",
                entry.name,
                report.worst_residual(),
                report.nondegeneracy
            );
        }
    }

    #[test]
    fn kaehler_flags_match_catalog_expectations() {
        for entry in load_all() {
            let pts = entry.sample_points(10);
            let flag = is_kaehler_type(&entry.manifold, &pts, 1e-9).unwrap();
            assert_eq!(flag, entry.expected.kaehler_type, "{}", entry.name);
        }
    }

    #[test]
    fn flat_entries_have_vanishing_connections_everywhere() {
        for name in ["flat_hermitian", "flat_norden"] {
            let entry = load_example(name).unwrap();
            let m = &entry.manifold;
            for p in entry.sample_points(10) {
                assert_eq!(levi_civita(m, &p).unwrap().gamma.amax(), 0.0);
                assert!(well_adapted(m, &p).unwrap().gamma.amax() < 1e-12);
                assert!(first_canonical(m, &p).unwrap().gamma.amax() < 1e-12);
                if m.alpha() != m.epsilon() {
                    assert!(chern(m, &p).unwrap().gamma.amax() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn para_entry_frame_at_origin_is_standard_split() {
        let entry = load_example("curved_para_hermitian").unwrap();
        let origin = Point::new(vec![0.0; 4]);
        let g0 = entry.manifold.metric_at(&origin).unwrap();
        // hyperbolic pairing at the origin
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(g0[(i, j)], 0.0);
                assert_eq!(g0[(i + 2, j + 2)], 0.0);
                assert_eq!(g0[(i, j + 2)], if i == j { 1.0 } else { 0.0 });
            }
        }
        let f = crate::frame::adapted_frame(&entry.manifold, &origin).unwrap();
        assert_eq!(f.matrix(), &nalgebra::DMatrix::<f64>::identity(4, 4));
    }

    #[test]
    fn norden_entry_has_nonzero_structure_torsion() {
        let entry = load_example("curved_norden").unwrap();
        let p = Point::new(vec![0.4, 0.3, -0.2, 0.6]);
        assert!(nijenhuis(&entry.manifold, &p).unwrap().amax() > 1e-3);
    }

    #[test]
    fn witness_entry_separates_the_three_connections() {
        let entry = load_example("chern_witness").unwrap();
        let p = entry.witness_point.clone().unwrap();
        let m = &entry.manifold;
        let wa = well_adapted(m, &p).unwrap();
        let ch = chern(m, &p).unwrap();
        let fc = first_canonical(m, &p).unwrap();
        assert!(wa.gamma.max_abs_diff(&ch.gamma) > 1e-4);
        assert!(wa.gamma.max_abs_diff(&fc.gamma) > 1e-4);
    }
}
