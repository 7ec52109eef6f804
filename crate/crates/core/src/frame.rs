//! Pointwise adapted frames, their dual coframes, and bases of sections of
//! the adjoint bundle.
//!
//! An adapted frame at `p` is an ordered basis `(X_1..X_n, Y_1..Y_n)` that
//! puts `(J, g)` into the case normal form: the frame Gram matrix is the
//! identity (`ε = 1`) or the hyperbolic pairing `H = [[0, I], [I, 0]]`
//! (`ε = −1`), and `J` acts by `Y_i = J X_i` (`α = −1`) or by `J X_i = X_i`,
//! `J Y_i = −Y_i` (`α = 1`).
//!
//! Construction is Gram–Schmidt-flavored in every case, with pivoting: at
//! each step the candidate with the largest available norm or pairing wins,
//! ties broken by lowest index, and a pivot magnitude below
//! [`PIVOT_TOL`] aborts with the failing step.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::GeomError;
use crate::expr::Point;
use crate::manifold::{eigenprojectors, Manifold, Sign};

/// Smallest pivot magnitude accepted during frame construction.
pub const PIVOT_TOL: f64 = 1e-10;

/// Ordered pointwise basis `(X_1..X_n, Y_1..Y_n)`, stored as matrix columns.
#[derive(Debug, Clone)]
pub struct Frame {
    point: Point,
    columns: DMatrix<f64>,
}

impl Frame {
    /// Wrap raw columns as a frame without any adaptation check; used by
    /// tests and diagnostics. [`adapted_frame`] is the validated builder.
    pub fn new(point: Point, columns: DMatrix<f64>) -> Self {
        assert_eq!(point.dim(), columns.nrows());
        assert_eq!(columns.nrows(), columns.ncols());
        Frame { point, columns }
    }

    pub fn point(&self) -> &Point {
        &self.point
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.columns
    }

    pub fn half_dim(&self) -> usize {
        self.columns.nrows() / 2
    }

    pub fn x(&self, i: usize) -> DVector<f64> {
        self.columns.column(i).into_owned()
    }

    pub fn y(&self, i: usize) -> DVector<f64> {
        self.columns.column(self.half_dim() + i).into_owned()
    }
}

/// Dual covectors `(η_1..η_n, ω_1..ω_n)` as matrix rows, with the measured
/// defect of the duality identities `rows · frame = I`.
#[derive(Debug, Clone)]
pub struct Coframe {
    pub rows: DMatrix<f64>,
    pub duality_residual: f64,
}

impl Coframe {
    pub fn eta(&self, i: usize) -> DVector<f64> {
        self.rows.row(i).transpose()
    }

    pub fn omega(&self, i: usize) -> DVector<f64> {
        let n = self.rows.nrows() / 2;
        self.rows.row(n + i).transpose()
    }
}

fn g_pair(g: &DMatrix<f64>, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
    (u.transpose() * g * v)[(0, 0)]
}

/// Build the adapted frame at `p` by the case-specific pivoted scheme.
pub fn adapted_frame(m: &Manifold, p: &Point) -> Result<Frame, GeomError> {
    m.check_point(p)?;
    let g = m.metric_at(p)?;
    let j = m.structure_at(p)?;
    let n = m.half_dim();
    let dim = m.dim();

    let (xs, ys) = match (m.alpha(), m.epsilon()) {
        (Sign::Minus, Sign::Plus) => hermitian_frame(&g, &j, n)?,
        (Sign::Plus, Sign::Plus) => {
            let (p_plus, p_minus) = eigenprojectors(m, p)?;
            let xs = riemannian_span_basis(&g, &p_plus, n, 0)?;
            let ys = riemannian_span_basis(&g, &p_minus, n, n)?;
            (xs, ys)
        }
        (Sign::Plus, Sign::Minus) => {
            let (p_plus, p_minus) = eigenprojectors(m, p)?;
            para_frame(&g, &p_plus, &p_minus, n)?
        }
        (Sign::Minus, Sign::Minus) => norden_frame(&g, &j, n)?,
    };

    let mut columns = DMatrix::zeros(dim, dim);
    for (i, x) in xs.iter().enumerate() {
        columns.set_column(i, x);
    }
    for (i, y) in ys.iter().enumerate() {
        columns.set_column(n + i, y);
    }
    Ok(Frame {
        point: p.clone(),
        columns,
    })
}

// (−1, 1): pick a g-unit X, set Y = JX, recurse on the g-orthogonal
// complement of span{X, JX} (which is J-invariant, so JX stays orthogonal
// to everything already chosen).
fn hermitian_frame(
    g: &DMatrix<f64>,
    j: &DMatrix<f64>,
    n: usize,
) -> Result<(Vec<DVector<f64>>, Vec<DVector<f64>>), GeomError> {
    let dim = 2 * n;
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    let mut chosen: Vec<DVector<f64>> = Vec::new();
    let mut pool: Vec<usize> = (0..dim).collect();

    for step in 0..n {
        let mut best: Option<(usize, DVector<f64>, f64)> = None;
        for (slot, &ci) in pool.iter().enumerate() {
            let mut c = DVector::zeros(dim);
            c[ci] = 1.0;
            for v in &chosen {
                let coef = g_pair(g, v, &c);
                c -= v * coef;
            }
            let norm2 = g_pair(g, &c, &c);
            if best.as_ref().map_or(true, |(_, _, b)| norm2 > *b) {
                best = Some((slot, c, norm2));
            }
        }
        let (slot, c, norm2) = best.expect("pool nonempty");
        if norm2 < PIVOT_TOL {
            return Err(GeomError::FrameBreakdown {
                step,
                detail: format!("largest available squared length {norm2:.3e}"),
            });
        }
        pool.remove(slot);
        let x = &c / norm2.sqrt();
        let y = j * &x;
        chosen.push(x.clone());
        chosen.push(y.clone());
        xs.push(x);
        ys.push(y);
    }
    Ok((xs, ys))
}

// (1, 1) building block: g-orthonormal basis of the range of a projector,
// candidates being the projected coordinate vectors. `step_offset` only
// labels breakdown reports.
fn riemannian_span_basis(
    g: &DMatrix<f64>,
    projector: &DMatrix<f64>,
    n: usize,
    step_offset: usize,
) -> Result<Vec<DVector<f64>>, GeomError> {
    let dim = projector.nrows();
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(n);
    let mut pool: Vec<usize> = (0..dim).collect();

    for step in 0..n {
        let mut best: Option<(usize, DVector<f64>, f64)> = None;
        for (slot, &ci) in pool.iter().enumerate() {
            let mut c = projector.column(ci).into_owned();
            for v in &out {
                let coef = g_pair(g, v, &c);
                c -= v * coef;
            }
            let norm2 = g_pair(g, &c, &c);
            if best.as_ref().map_or(true, |(_, _, b)| norm2 > *b) {
                best = Some((slot, c, norm2));
            }
        }
        let (slot, c, norm2) = best.expect("pool nonempty");
        if norm2 < PIVOT_TOL {
            return Err(GeomError::FrameBreakdown {
                step: step_offset + step,
                detail: format!("largest available squared length {norm2:.3e}"),
            });
        }
        pool.remove(slot);
        out.push(&c / norm2.sqrt());
    }
    Ok(out)
}

// (1, −1): both eigenbundles are g-null, so extract Euclidean-orthonormal
// bases of each and biorthogonalize the cross pairing g(X_a, Y_b) to δ_ab
// by replacing Y with Y·C⁻¹.
fn para_frame(
    g: &DMatrix<f64>,
    p_plus: &DMatrix<f64>,
    p_minus: &DMatrix<f64>,
    n: usize,
) -> Result<(Vec<DVector<f64>>, Vec<DVector<f64>>), GeomError> {
    let us = euclidean_span_basis(p_plus, n, 0)?;
    let vs = euclidean_span_basis(p_minus, n, n)?;
    let mut cross = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            cross[(a, b)] = g_pair(g, &us[a], &vs[b]);
        }
    }
    let svd = cross.clone().svd(false, false);
    let sigma_min = svd
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if sigma_min < PIVOT_TOL {
        return Err(GeomError::FrameBreakdown {
            step: 2 * n,
            detail: format!("cross pairing nearly singular (sigma_min {sigma_min:.3e})"),
        });
    }
    let cross_inv = cross
        .try_inverse()
        .ok_or(GeomError::SingularFrame)?;
    let mut ys = Vec::with_capacity(n);
    for b in 0..n {
        let mut y = DVector::zeros(p_plus.nrows());
        for c in 0..n {
            y += &vs[c] * cross_inv[(c, b)];
        }
        ys.push(y);
    }
    Ok((us, ys))
}

fn euclidean_span_basis(
    projector: &DMatrix<f64>,
    n: usize,
    step_offset: usize,
) -> Result<Vec<DVector<f64>>, GeomError> {
    let dim = projector.nrows();
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(n);
    let mut pool: Vec<usize> = (0..dim).collect();

    for step in 0..n {
        let mut best: Option<(usize, DVector<f64>, f64)> = None;
        for (slot, &ci) in pool.iter().enumerate() {
            let mut c = projector.column(ci).into_owned();
            for v in &out {
                let coef = v.dot(&c);
                c -= v * coef;
            }
            let norm2 = c.dot(&c);
            if best.as_ref().map_or(true, |(_, _, b)| norm2 > *b) {
                best = Some((slot, c, norm2));
            }
        }
        let (slot, c, norm2) = best.expect("pool nonempty");
        if norm2 < PIVOT_TOL {
            return Err(GeomError::FrameBreakdown {
                step: step_offset + step,
                detail: format!("largest available squared length {norm2:.3e}"),
            });
        }
        pool.remove(slot);
        out.push(&c / norm2.sqrt());
    }
    Ok(out)
}

// (−1, −1): Gram–Schmidt over the complex bilinear form G = g̃ − i·g on the
// complex structure (T_p, J), where the imaginary unit acts as −J. A
// G-orthonormal complex basis Z_a yields X_a = Z_a, Y_a = J Z_a with
// g(X_a, X_b) = g(Y_a, Y_b) = 0 and g(X_a, Y_b) = δ_ab. Complex square
// roots take the principal branch.
fn norden_frame(
    g: &DMatrix<f64>,
    j: &DMatrix<f64>,
    n: usize,
) -> Result<(Vec<DVector<f64>>, Vec<DVector<f64>>), GeomError> {
    let dim = 2 * n;
    let twin = j.transpose() * g; // g̃ = Jᵗ g
    let form = |u: &DVector<f64>, v: &DVector<f64>| -> Complex64 {
        let re = (u.transpose() * &twin * v)[(0, 0)];
        let im = -(u.transpose() * g * v)[(0, 0)];
        Complex64::new(re, im)
    };
    // (x + iy)·z = x z − y (J z), matching i·z = −Jz
    let scale = |s: Complex64, z: &DVector<f64>| -> DVector<f64> { z * s.re - (j * z) * s.im };

    let mut zs: Vec<DVector<f64>> = Vec::with_capacity(n);
    let mut pool: Vec<usize> = (0..dim).collect();

    for step in 0..n {
        let mut best: Option<(usize, DVector<f64>, f64)> = None;
        for (slot, &ci) in pool.iter().enumerate() {
            let mut c = DVector::zeros(dim);
            c[ci] = 1.0;
            for z in &zs {
                let coef = form(z, &c);
                c -= scale(coef, z);
            }
            let pivot = form(&c, &c).norm();
            if best.as_ref().map_or(true, |(_, _, b)| pivot > *b) {
                best = Some((slot, c, pivot));
            }
        }
        let (slot, c, pivot) = best.expect("pool nonempty");
        if pivot < PIVOT_TOL {
            return Err(GeomError::FrameBreakdown {
                step,
                detail: format!("largest available pairing modulus {pivot:.3e}"),
            });
        }
        pool.remove(slot);
        let s = form(&c, &c).sqrt();
        let z = scale(s.inv(), &c);
        zs.push(z);
    }

    let xs = zs.clone();
    let ys = zs.iter().map(|z| j * z).collect();
    Ok((xs, ys))
}

/// Dual coframe of an adapted frame, built from the metric pairings
/// (`η_i = g(X_i, ·)`, `ω_i = g(Y_i, ·)` for `ε = 1`; the roles of `X` and
/// `Y` swap for `ε = −1`) rather than by inverting the frame matrix. The
/// measured duality defect is attached; a non-adapted input frame shows up
/// as a large residual rather than an error.
pub fn dual_frame(m: &Manifold, frame: &Frame) -> Result<Coframe, GeomError> {
    let g = m.metric_at(frame.point())?;
    let n = m.half_dim();
    let dim = m.dim();
    // reject degenerate frames outright; the residual handles the rest
    if frame.matrix().clone().lu().determinant().abs() < 1e-300 {
        return Err(GeomError::SingularFrame);
    }

    let mut rows = DMatrix::zeros(dim, dim);
    for i in 0..n {
        let (eta_src, omega_src) = match m.epsilon() {
            Sign::Plus => (frame.x(i), frame.y(i)),
            Sign::Minus => (frame.y(i), frame.x(i)),
        };
        let eta = (eta_src.transpose() * &g).transpose();
        let omega = (omega_src.transpose() * &g).transpose();
        rows.set_row(i, &eta.transpose());
        rows.set_row(n + i, &omega.transpose());
    }
    let duality_residual = (&rows * frame.matrix() - DMatrix::<f64>::identity(dim, dim)).amax();
    Ok(Coframe {
        rows,
        duality_residual,
    })
}

/// Max deviation of a frame from the case normal form: Gram matrix against
/// `I` or `H`, plus the action of `J` on the frame vectors.
pub fn adapted_residual(m: &Manifold, frame: &Frame) -> Result<f64, GeomError> {
    let g = m.metric_at(frame.point())?;
    let j = m.structure_at(frame.point())?;
    let n = m.half_dim();
    let dim = m.dim();
    let f = frame.matrix();

    let mut expected = DMatrix::<f64>::zeros(dim, dim);
    match m.epsilon() {
        Sign::Plus => expected.fill_with_identity(),
        Sign::Minus => {
            for i in 0..n {
                expected[(i, n + i)] = 1.0;
                expected[(n + i, i)] = 1.0;
            }
        }
    }
    let gram_residual = (f.transpose() * &g * f - expected).amax();

    let mut structure_residual = 0.0_f64;
    for i in 0..n {
        let jx = &j * frame.x(i);
        let jy = &j * frame.y(i);
        match m.alpha() {
            Sign::Minus => {
                structure_residual = structure_residual.max((jx - frame.y(i)).amax());
                structure_residual = structure_residual.max((jy + frame.x(i)).amax());
            }
            Sign::Plus => {
                structure_residual = structure_residual.max((jx - frame.x(i)).amax());
                structure_residual = structure_residual.max((jy + frame.y(i)).amax());
            }
        }
    }
    Ok(gram_residual.max(structure_residual))
}

/// True iff `s` commutes with `J` and is `g`-skew-adjoint at `p`, i.e. is
/// the value of an adjoint-bundle section.
pub fn is_adjoint_section(
    m: &Manifold,
    p: &Point,
    s: &DMatrix<f64>,
    tol: f64,
) -> Result<bool, GeomError> {
    if s.nrows() != m.dim() || s.ncols() != m.dim() {
        return Err(GeomError::SizeMismatch {
            expected: m.dim(),
            got: s.nrows(),
        });
    }
    let g = m.metric_at(p)?;
    let j = m.structure_at(p)?;
    let commute = (&j * s - s * &j).amax();
    let skew = (&g * s + s.transpose() * &g).amax();
    Ok(commute <= tol && skew <= tol)
}

fn outer(v: &DVector<f64>, row: &DVector<f64>) -> DMatrix<f64> {
    v * row.transpose()
}

/// Case-specific basis of adjoint-bundle sections at the frame's point,
/// each returned as its chart-coordinate matrix.
///
/// Counts: `(−1,1)` n², `(−1,−1)` n(n−1), `(1,1)` n(n−1), `(1,−1)` n².
/// In the `(−1,1)` case the symmetric family runs over `a ≤ b` (including
/// the diagonal, whose members act like `J` on one frame plane); restricting
/// it to `a < b` would span only n(n−1) directions.
pub fn adjoint_basis(m: &Manifold, frame: &Frame) -> Result<Vec<DMatrix<f64>>, GeomError> {
    let coframe = dual_frame(m, frame)?;
    let n = m.half_dim();
    let x = |i: usize| frame.x(i);
    let y = |i: usize| frame.y(i);
    let eta = |i: usize| coframe.eta(i);
    let omega = |i: usize| coframe.omega(i);

    let mut out = Vec::new();
    match (m.alpha(), m.epsilon()) {
        (Sign::Minus, Sign::Plus) => {
            for a in 0..n {
                for b in (a + 1)..n {
                    out.push(
                        outer(&x(a), &eta(b)) - outer(&x(b), &eta(a)) + outer(&y(a), &omega(b))
                            - outer(&y(b), &omega(a)),
                    );
                }
            }
            for a in 0..n {
                for b in a..n {
                    out.push(
                        outer(&y(a), &eta(b)) + outer(&y(b), &eta(a))
                            - outer(&x(a), &omega(b))
                            - outer(&x(b), &omega(a)),
                    );
                }
            }
        }
        (Sign::Minus, Sign::Minus) => {
            for a in 0..n {
                for b in (a + 1)..n {
                    out.push(
                        outer(&x(a), &eta(b)) - outer(&x(b), &eta(a)) + outer(&y(a), &omega(b))
                            - outer(&y(b), &omega(a)),
                    );
                }
            }
            for a in 0..n {
                for b in (a + 1)..n {
                    out.push(
                        outer(&y(a), &eta(b)) - outer(&y(b), &eta(a)) - outer(&x(a), &omega(b))
                            + outer(&x(b), &omega(a)),
                    );
                }
            }
        }
        (Sign::Plus, Sign::Plus) => {
            for a in 0..n {
                for b in (a + 1)..n {
                    out.push(outer(&x(a), &eta(b)) - outer(&x(b), &eta(a)));
                }
            }
            for a in 0..n {
                for b in (a + 1)..n {
                    out.push(outer(&y(a), &omega(b)) - outer(&y(b), &omega(a)));
                }
            }
        }
        (Sign::Plus, Sign::Minus) => {
            for a in 0..n {
                for b in 0..n {
                    out.push(outer(&x(a), &eta(b)) - outer(&y(b), &omega(a)));
                }
            }
        }
    }
    Ok(out)
}

/// Expected number of adjoint-basis elements for the geometry of `m`.
pub fn adjoint_basis_count(m: &Manifold) -> usize {
    let n = m.half_dim();
    match (m.alpha(), m.epsilon()) {
        (Sign::Minus, Sign::Plus) => n * n,
        (Sign::Minus, Sign::Minus) => n * (n - 1),
        (Sign::Plus, Sign::Plus) => n * (n - 1),
        (Sign::Plus, Sign::Minus) => n * n,
    }
}
