//! Chart-level description of a metric manifold carrying a structure tensor
//! `J` with `J² = αI` that is an isometry (`ε = 1`) or anti-isometry
//! (`ε = −1`) of the metric, together with numerical validation of those
//! axioms at sample points.
//!
//! The four sign choices `(α, ε)` correspond to almost Hermitian `(−1, 1)`,
//! almost Norden `(−1, −1)`, almost product Riemannian `(1, 1)` and almost
//! para-Hermitian `(1, −1)` geometry. Everything downstream (frames, adjoint
//! sections, connections) keys off these two signs.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::GeomError;
use crate::expr::{Expr, MatrixField, Point};

/// One of the two unit signs; used for both `α` and `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn from_int(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+1"),
            Sign::Minus => write!(f, "-1"),
        }
    }
}

/// Nondegeneracy floor for `|det g|` (and for the smallest eigenvalue of a
/// Riemannian metric). Exact derivatives keep honest examples far above it.
pub const NONDEGENERACY_TOL: f64 = 1e-10;

/// Default residual tolerance for the structure axioms.
pub const DEFAULT_STRUCTURE_TOL: f64 = 1e-9;

/// A coordinate chart of even dimension `2n` with expression-valued metric
/// `g` and structure tensor `J`, plus the two signs.
#[derive(Debug, Clone)]
pub struct Manifold {
    dim: usize,
    alpha: Sign,
    epsilon: Sign,
    g: MatrixField,
    j: MatrixField,
}

impl Manifold {
    pub fn new(
        dim: usize,
        alpha: Sign,
        epsilon: Sign,
        g: MatrixField,
        j: MatrixField,
    ) -> Result<Self, GeomError> {
        if dim < 2 || dim % 2 != 0 {
            return Err(GeomError::InvalidManifold(format!(
                "chart dimension must be even and >= 2, got {dim}"
            )));
        }
        if g.dim() != dim || j.dim() != dim {
            return Err(GeomError::InvalidManifold(format!(
                "field dimensions {}x{} and {}x{} do not match chart dimension {dim}",
                g.dim(),
                g.dim(),
                j.dim(),
                j.dim()
            )));
        }
        Ok(Manifold {
            dim,
            alpha,
            epsilon,
            g,
            j,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Half the chart dimension.
    pub fn half_dim(&self) -> usize {
        self.dim / 2
    }

    pub fn alpha(&self) -> Sign {
        self.alpha
    }

    pub fn epsilon(&self) -> Sign {
        self.epsilon
    }

    pub fn metric_field(&self) -> &MatrixField {
        &self.g
    }

    pub fn structure_field(&self) -> &MatrixField {
        &self.j
    }

    pub fn check_point(&self, p: &Point) -> Result<(), GeomError> {
        if p.dim() != self.dim {
            return Err(GeomError::PointDimension {
                expected: self.dim,
                got: p.dim(),
            });
        }
        Ok(())
    }

    pub fn metric_at(&self, p: &Point) -> Result<DMatrix<f64>, GeomError> {
        self.check_point(p)?;
        Ok(self.g.eval(p)?)
    }

    pub fn structure_at(&self, p: &Point) -> Result<DMatrix<f64>, GeomError> {
        self.check_point(p)?;
        Ok(self.j.eval(p)?)
    }

    /// Human-readable name of the geometry selected by `(α, ε)`.
    pub fn geometry_name(&self) -> &'static str {
        match (self.alpha, self.epsilon) {
            (Sign::Minus, Sign::Plus) => "almost Hermitian",
            (Sign::Minus, Sign::Minus) => "almost Norden",
            (Sign::Plus, Sign::Plus) => "almost product Riemannian",
            (Sign::Plus, Sign::Minus) => "almost para-Hermitian",
        }
    }
}

/// Worst-case axiom residuals over a batch of sample points.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub points_checked: usize,
    /// max over points of ‖J² − αI‖∞
    pub j_square: f64,
    /// max over points of |trace J|
    pub trace_j: f64,
    /// max over points of ‖JᵗgJ − εg‖∞
    pub compatibility: f64,
    /// max over points of ‖g − gᵗ‖∞
    pub metric_symmetry: f64,
    /// min over points of: smallest eigenvalue of g (ε = 1) or |det g| (ε = −1)
    pub nondegeneracy: f64,
    pub tol: f64,
    pub passed: bool,
}

impl ValidationReport {
    pub fn worst_residual(&self) -> f64 {
        self.j_square
            .max(self.trace_j)
            .max(self.compatibility)
            .max(self.metric_symmetry)
    }
}

/// Check the structure axioms at each point and aggregate the residuals.
pub fn validate_structure(
    m: &Manifold,
    points: &[Point],
    tol: f64,
) -> Result<ValidationReport, GeomError> {
    if points.is_empty() {
        return Err(GeomError::EmptyPointList);
    }
    let dim = m.dim();
    let alpha = m.alpha().value();
    let eps = m.epsilon().value();
    let identity = DMatrix::<f64>::identity(dim, dim);

    let mut report = ValidationReport {
        points_checked: points.len(),
        j_square: 0.0,
        trace_j: 0.0,
        compatibility: 0.0,
        metric_symmetry: 0.0,
        nondegeneracy: f64::INFINITY,
        tol,
        passed: false,
    };

    for p in points {
        let g = m.metric_at(p)?;
        let j = m.structure_at(p)?;

        let jj = &j * &j - &identity * alpha;
        report.j_square = report.j_square.max(jj.amax());
        report.trace_j = report.trace_j.max(j.trace().abs());
        let compat = j.transpose() * &g * &j - &g * eps;
        report.compatibility = report.compatibility.max(compat.amax());
        let sym = &g - g.transpose();
        report.metric_symmetry = report.metric_symmetry.max(sym.amax());

        let nd = match m.epsilon() {
            Sign::Plus => {
                let eigs = g.clone().symmetric_eigenvalues();
                eigs.iter().cloned().fold(f64::INFINITY, f64::min)
            }
            Sign::Minus => g.determinant().abs(),
        };
        report.nondegeneracy = report.nondegeneracy.min(nd);
    }

    report.passed = report.worst_residual() <= tol && report.nondegeneracy > NONDEGENERACY_TOL;
    Ok(report)
}

/// Polarize a symmetric seed `h` into a structure-compatible metric:
/// `g = ½(h + ε·JᵗhJ)` at expression level. Whenever `J² = αI` holds, the
/// output satisfies `JᵗgJ = εg` identically; degeneracy of the result is
/// deferred to [`validate_structure`].
pub fn averaged_metric(j: &MatrixField, h: &MatrixField, eps: Sign) -> MatrixField {
    let jt = j.field_transpose();
    let twisted = jt.field_mul(h).field_mul(j).field_scale(eps.value());
    h.field_add(&twisted).field_scale(0.5)
}

/// The twin bilinear form `g̃(X, Y) = g(JX, Y)` as a matrix at `p`,
/// together with its symmetry defect. It is a (neutral) metric exactly when
/// `αε = 1`; for `αε = −1` it is the fundamental 2-form instead and the
/// symmetry residual equals twice its largest entry.
#[derive(Debug, Clone)]
pub struct TwinMetric {
    pub matrix: DMatrix<f64>,
    pub symmetry_residual: f64,
}

pub fn twin_metric(m: &Manifold, p: &Point) -> Result<TwinMetric, GeomError> {
    let g = m.metric_at(p)?;
    let j = m.structure_at(p)?;
    let twin = j.transpose() * &g;
    let symmetry_residual = (&twin - twin.transpose()).amax();
    Ok(TwinMetric {
        matrix: twin,
        symmetry_residual,
    })
}

/// Projectors onto the ±1 eigenbundles of `J`; defined only for `α = +1`.
pub fn eigenprojectors(m: &Manifold, p: &Point) -> Result<(DMatrix<f64>, DMatrix<f64>), GeomError> {
    if m.alpha() != Sign::Plus {
        return Err(GeomError::UnsupportedCase {
            requirement: "eigenprojectors need J² = +I (real eigenvalues ±1)".to_string(),
        });
    }
    let j = m.structure_at(p)?;
    let identity = DMatrix::<f64>::identity(m.dim(), m.dim());
    let plus = (&identity + &j) * 0.5;
    let minus = (&identity - &j) * 0.5;
    Ok((plus, minus))
}

/// Convenience: a constant matrix field holding the block structure tensor
/// with `J e_i = e_{n+i}`, `J e_{n+i} = −e_i` (the `α = −1` model).
pub fn standard_complex_structure(dim: usize) -> MatrixField {
    assert!(dim >= 2 && dim % 2 == 0);
    let n = dim / 2;
    let mut m = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..n {
        m[(n + i, i)] = 1.0;
        m[(i, n + i)] = -1.0;
    }
    MatrixField::from_matrix(&m)
}

/// Constant block structure tensor `diag(I_n, −I_n)` (the `α = +1` model).
pub fn standard_product_structure(dim: usize) -> MatrixField {
    assert!(dim >= 2 && dim % 2 == 0);
    let n = dim / 2;
    MatrixField::from_fn(dim, |i, j| {
        if i == j {
            Expr::constant(if i < n { 1.0 } else { -1.0 })
        } else {
            Expr::constant(0.0)
        }
    })
}
