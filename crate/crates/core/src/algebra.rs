//! Matrix Lie algebras of the four structure groups, their first
//! prolongations, and the transpose-invariance / containment certificates
//! that guarantee a distinguished adapted connection exists.
//!
//! All bases are integer matrices, so membership residuals of basis
//! elements are exactly zero and rank decisions are far from marginal.
//!
//! Block conventions (matrix size `m = 2n`, blocks `n×n`):
//!
//! - `u`       `[[A, B], [−B, A]]`, `A` skew, `B` symmetric — unitary model
//! - `norden`  `[[A, B], [−B, A]]`, `A` skew, `B` skew
//! - `product` `[[A, 0], [0, B]]`, `A` skew, `B` skew
//! - `para`    `[[A, 0], [0, −Aᵗ]]`, `A` arbitrary
//! - `o2n`     `N + Nᵗ = 0`
//! - `onn`     `[[A, B], [C, D]]`, `A + Dᵗ = 0`, `B + Bᵗ = 0`, `C + Cᵗ = 0`
//! - `glc`     `[[A, B], [−B, A]]`, `A`, `B` arbitrary (complex matrices)
//! - `glrr`    `[[A, 0], [0, B]]`, `A`, `B` arbitrary (split pairs)
//!
//! The neutral family uses the hyperbolic pairing `H = [[0, I], [I, 0]]`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::GeomError;
use crate::linalg;
use crate::manifold::Sign;

/// Tag of a supported matrix-algebra family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyTag {
    /// Structure algebra for `(α, ε) = (−1, 1)`.
    U,
    /// Structure algebra for `(α, ε) = (−1, −1)`.
    Norden,
    /// Structure algebra for `(α, ε) = (1, 1)`.
    Product,
    /// Structure algebra for `(α, ε) = (1, −1)`.
    Para,
    /// Skew matrices of size `2n`.
    O2n,
    /// Neutral-signature orthogonal algebra.
    Onn,
    /// Complex general linear algebra as real matrices.
    Glc,
    /// Pairs of real general linear algebras, block diagonal.
    Glrr,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 8] = [
        FamilyTag::U,
        FamilyTag::Norden,
        FamilyTag::Product,
        FamilyTag::Para,
        FamilyTag::O2n,
        FamilyTag::Onn,
        FamilyTag::Glc,
        FamilyTag::Glrr,
    ];

    /// Tag of the structure algebra attached to a sign pair.
    pub fn for_signs(alpha: Sign, epsilon: Sign) -> FamilyTag {
        match (alpha, epsilon) {
            (Sign::Minus, Sign::Plus) => FamilyTag::U,
            (Sign::Minus, Sign::Minus) => FamilyTag::Norden,
            (Sign::Plus, Sign::Plus) => FamilyTag::Product,
            (Sign::Plus, Sign::Minus) => FamilyTag::Para,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::U => "u",
            FamilyTag::Norden => "norden",
            FamilyTag::Product => "product",
            FamilyTag::Para => "para",
            FamilyTag::O2n => "o2n",
            FamilyTag::Onn => "onn",
            FamilyTag::Glc => "glc",
            FamilyTag::Glrr => "glrr",
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "u" => Ok(FamilyTag::U),
            "norden" => Ok(FamilyTag::Norden),
            "product" => Ok(FamilyTag::Product),
            "para" => Ok(FamilyTag::Para),
            "o2n" => Ok(FamilyTag::O2n),
            "onn" => Ok(FamilyTag::Onn),
            "glc" => Ok(FamilyTag::Glc),
            "glrr" => Ok(FamilyTag::Glrr),
            other => Err(format!("unknown algebra family '{other}'")),
        }
    }
}

/// A family tag with its half-size parameter `n` (matrices are `2n × 2n`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlgebraFamily {
    pub tag: FamilyTag,
    pub n: usize,
}

impl AlgebraFamily {
    pub fn new(tag: FamilyTag, n: usize) -> Self {
        assert!(n >= 1);
        AlgebraFamily { tag, n }
    }

    pub fn matrix_size(&self) -> usize {
        2 * self.n
    }

    /// Closed-form dimension of the family.
    pub fn dimension(&self) -> usize {
        let n = self.n;
        match self.tag {
            FamilyTag::U => n * n,
            FamilyTag::Norden => n * (n - 1),
            FamilyTag::Product => n * (n - 1),
            FamilyTag::Para => n * n,
            FamilyTag::O2n => n * (2 * n - 1),
            FamilyTag::Onn => n * (2 * n - 1),
            FamilyTag::Glc => 2 * n * n,
            FamilyTag::Glrr => 2 * n * n,
        }
    }
}

/// Basis of a matrix Lie algebra: `mats` are linearly independent `m×m`
/// matrices.
#[derive(Debug, Clone)]
pub struct AlgebraBasis {
    pub m: usize,
    pub mats: Vec<DMatrix<f64>>,
}

impl AlgebraBasis {
    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }
}

fn unit(n: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut e = DMatrix::zeros(n, n);
    e[(i, j)] = 1.0;
    e
}

fn embed(m: usize, f: impl Fn(&mut DMatrix<f64>)) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(m, m);
    f(&mut out);
    out
}

fn place(out: &mut DMatrix<f64>, row0: usize, col0: usize, block: &DMatrix<f64>, scale: f64) {
    for i in 0..block.nrows() {
        for j in 0..block.ncols() {
            out[(row0 + i, col0 + j)] += scale * block[(i, j)];
        }
    }
}

/// Enumerate an (exactly integer) basis of the family.
pub fn algebra_basis(family: AlgebraFamily) -> AlgebraBasis {
    let n = family.n;
    let m = family.matrix_size();
    let mut mats: Vec<DMatrix<f64>> = Vec::with_capacity(family.dimension());

    let skew_blocks = || -> Vec<DMatrix<f64>> {
        let mut v = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                v.push(unit(n, a, b) - unit(n, b, a));
            }
        }
        v
    };
    let sym_blocks = || -> Vec<DMatrix<f64>> {
        let mut v = Vec::new();
        for a in 0..n {
            v.push(unit(n, a, a));
            for b in (a + 1)..n {
                v.push(unit(n, a, b) + unit(n, b, a));
            }
        }
        v
    };
    let full_blocks = || -> Vec<DMatrix<f64>> {
        let mut v = Vec::new();
        for a in 0..n {
            for b in 0..n {
                v.push(unit(n, a, b));
            }
        }
        v
    };

    match family.tag {
        FamilyTag::U => {
            for a in skew_blocks() {
                mats.push(embed(m, |out| {
                    place(out, 0, 0, &a, 1.0);
                    place(out, n, n, &a, 1.0);
                }));
            }
            for b in sym_blocks() {
                mats.push(embed(m, |out| {
                    place(out, 0, n, &b, 1.0);
                    place(out, n, 0, &b, -1.0);
                }));
            }
        }
        FamilyTag::Norden => {
            for a in skew_blocks() {
                mats.push(embed(m, |out| {
                    place(out, 0, 0, &a, 1.0);
                    place(out, n, n, &a, 1.0);
                }));
            }
            for b in skew_blocks() {
                mats.push(embed(m, |out| {
                    place(out, 0, n, &b, 1.0);
                    place(out, n, 0, &b, -1.0);
                }));
            }
        }
        FamilyTag::Product => {
            for a in skew_blocks() {
                mats.push(embed(m, |out| place(out, 0, 0, &a, 1.0)));
            }
            for b in skew_blocks() {
                mats.push(embed(m, |out| place(out, n, n, &b, 1.0)));
            }
        }
        FamilyTag::Para => {
            for a in full_blocks() {
                mats.push(embed(m, |out| {
                    place(out, 0, 0, &a, 1.0);
                    place(out, n, n, &a.transpose(), -1.0);
                }));
            }
        }
        FamilyTag::O2n => {
            for a in 0..m {
                for b in (a + 1)..m {
                    mats.push(unit(m, a, b) - unit(m, b, a));
                }
            }
        }
        FamilyTag::Onn => {
            for a in full_blocks() {
                mats.push(embed(m, |out| {
                    place(out, 0, 0, &a, 1.0);
                    place(out, n, n, &a.transpose(), -1.0);
                }));
            }
            for b in skew_blocks() {
                mats.push(embed(m, |out| place(out, 0, n, &b, 1.0)));
            }
            for c in skew_blocks() {
                mats.push(embed(m, |out| place(out, n, 0, &c, 1.0)));
            }
        }
        FamilyTag::Glc => {
            for a in full_blocks() {
                mats.push(embed(m, |out| {
                    place(out, 0, 0, &a, 1.0);
                    place(out, n, n, &a, 1.0);
                }));
            }
            for b in full_blocks() {
                mats.push(embed(m, |out| {
                    place(out, 0, n, &b, 1.0);
                    place(out, n, 0, &b, -1.0);
                }));
            }
        }
        FamilyTag::Glrr => {
            for a in full_blocks() {
                mats.push(embed(m, |out| place(out, 0, 0, &a, 1.0)));
            }
            for b in full_blocks() {
                mats.push(embed(m, |out| place(out, n, n, &b, 1.0)));
            }
        }
    }

    debug_assert_eq!(mats.len(), family.dimension());
    AlgebraBasis { m, mats }
}

/// Whether membership is tested against the Lie algebra's linear equations
/// or the Lie group's quadratic ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MembershipLevel {
    Algebra,
    Group,
}

/// Residual of the family's defining equations on `x` (max-abs over all
/// equation blocks). Zero means exact membership.
pub fn membership_residual(
    x: &DMatrix<f64>,
    family: AlgebraFamily,
    level: MembershipLevel,
) -> Result<f64, GeomError> {
    let n = family.n;
    let m = family.matrix_size();
    if x.nrows() != m || x.ncols() != m {
        return Err(GeomError::SizeMismatch {
            expected: m,
            got: x.nrows(),
        });
    }
    let block =
        |bi: usize, bj: usize| -> DMatrix<f64> { x.view((bi * n, bj * n), (n, n)).into_owned() };
    let a = block(0, 0);
    let b = block(0, 1);
    let c = block(1, 0);
    let d = block(1, 1);
    let identity = DMatrix::<f64>::identity(n, n);

    let r = match (family.tag, level) {
        (FamilyTag::U, MembershipLevel::Algebra) => [
            (&d - &a).amax(),
            (&c + &b).amax(),
            (&a + a.transpose()).amax(),
            (&b - b.transpose()).amax(),
        ]
        .into_iter()
        .fold(0.0, f64::max),
        (FamilyTag::U, MembershipLevel::Group) => [
            (&d - &a).amax(),
            (&c + &b).amax(),
            (a.transpose() * &a + b.transpose() * &b - &identity).amax(),
            (b.transpose() * &a - a.transpose() * &b).amax(),
        ]
        .into_iter()
        .fold(0.0, f64::max),
        (FamilyTag::Norden, MembershipLevel::Algebra) => [
            (&d - &a).amax(),
            (&c + &b).amax(),
            (&a + a.transpose()).amax(),
            (&b + b.transpose()).amax(),
        ]
        .into_iter()
        .fold(0.0, f64::max),
        (FamilyTag::Norden, MembershipLevel::Group) => [
            (&d - &a).amax(),
            (&c + &b).amax(),
            (a.transpose() * &a - b.transpose() * &b - &identity).amax(),
            (a.transpose() * &b + b.transpose() * &a).amax(),
        ]
        .into_iter()
        .fold(0.0, f64::max),
        (FamilyTag::Product, MembershipLevel::Algebra) => [
            b.amax(),
            c.amax(),
            (&a + a.transpose()).amax(),
            (&d + d.transpose()).amax(),
        ]
        .into_iter()
        .fold(0.0, f64::max),
        (FamilyTag::Product, MembershipLevel::Group) => [
            b.amax(),
            c.amax(),
            (a.transpose() * &a - &identity).amax(),
            (d.transpose() * &d - &identity).amax(),
        ]
        .into_iter()
        .fold(0.0, f64::max),
        (FamilyTag::Para, MembershipLevel::Algebra) => {
            [b.amax(), c.amax(), (&d + a.transpose()).amax()]
                .into_iter()
                .fold(0.0, f64::max)
        }
        (FamilyTag::Para, MembershipLevel::Group) => {
            [b.amax(), c.amax(), (a.transpose() * &d - &identity).amax()]
                .into_iter()
                .fold(0.0, f64::max)
        }
        (FamilyTag::O2n, MembershipLevel::Algebra) => (x + x.transpose()).amax(),
        (FamilyTag::O2n, MembershipLevel::Group) => {
            (x.transpose() * x - DMatrix::<f64>::identity(m, m)).amax()
        }
        (FamilyTag::Onn, MembershipLevel::Algebra) => {
            let h = hyperbolic_pairing(n);
            (x.transpose() * &h + &h * x).amax()
        }
        (FamilyTag::Onn, MembershipLevel::Group) => {
            let h = hyperbolic_pairing(n);
            (x.transpose() * &h * x - &h).amax()
        }
        (FamilyTag::Glc, _) => [(&d - &a).amax(), (&c + &b).amax()]
            .into_iter()
            .fold(0.0, f64::max),
        (FamilyTag::Glrr, _) => [b.amax(), c.amax()].into_iter().fold(0.0, f64::max),
    };
    Ok(r)
}

/// True iff `x` satisfies the family's defining equations within `tol`.
pub fn membership(
    x: &DMatrix<f64>,
    family: AlgebraFamily,
    level: MembershipLevel,
    tol: f64,
) -> Result<bool, GeomError> {
    Ok(membership_residual(x, family, level)? <= tol)
}

fn hyperbolic_pairing(n: usize) -> DMatrix<f64> {
    let m = 2 * n;
    let mut h = DMatrix::zeros(m, m);
    for i in 0..n {
        h[(i, n + i)] = 1.0;
        h[(n + i, i)] = 1.0;
    }
    h
}

/// Dimension of the space of maps `S: ℝ^m → 𝔤` (coefficients against the
/// basis) whose antisymmetrization `S(e_i)e_j − S(e_j)e_i` vanishes, i.e. of
/// the first prolongation of the algebra spanned by `basis`.
pub fn first_prolongation_dim(basis: &AlgebraBasis) -> usize {
    let m = basis.m;
    let r = basis.mats.len();
    if r == 0 {
        return 0;
    }
    let unknowns = m * r; // c[i][alpha]: S(e_i) = Σ_α c[i][α] B_α
    let pairs = m * (m - 1) / 2;
    let mut a = DMatrix::<f64>::zeros(pairs * m, unknowns);
    let col = |i: usize, alpha: usize| i * r + alpha;

    let mut row0 = 0;
    for i in 0..m {
        for j in (i + 1)..m {
            for (alpha, bmat) in basis.mats.iter().enumerate() {
                for k in 0..m {
                    // k-th component of S(e_i)e_j − S(e_j)e_i
                    a[(row0 + k, col(i, alpha))] += bmat[(k, j)];
                    a[(row0 + k, col(j, alpha))] -= bmat[(k, i)];
                }
            }
            row0 += m;
        }
    }
    unknowns - linalg::rank(&a)
}

/// True iff the transpose of every basis element stays inside the span.
pub fn is_transpose_invariant(basis: &AlgebraBasis, tol: f64) -> bool {
    basis
        .mats
        .iter()
        .all(|b| linalg::span_residual(&basis.mats, &b.transpose()) <= tol)
}

/// Which ambient orthogonal algebra a structure algebra embeds into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmbientAlgebra {
    O2n,
    Onn,
}

impl fmt::Display for AmbientAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AmbientAlgebra::O2n => write!(f, "o2n"),
            AmbientAlgebra::Onn => write!(f, "onn"),
        }
    }
}

/// Numerical certificate of the premises under which the torsion trace
/// condition determines a unique adapted connection: vanishing first
/// prolongation, transpose invariance, and containment in the orthogonal
/// algebra of the metric's signature class.
#[derive(Debug, Clone)]
pub struct ExistenceCertificate {
    pub family: AlgebraFamily,
    pub prolongation_dim: usize,
    pub transpose_invariant: bool,
    pub contained_in: AmbientAlgebra,
    /// Worst span-membership residual of the containment check.
    pub containment_residual: f64,
}

impl ExistenceCertificate {
    pub fn holds(&self) -> bool {
        self.prolongation_dim == 0 && self.transpose_invariant && self.containment_residual <= 1e-9
    }
}

/// Certify the existence premises for the structure algebra of `(α, ε)` at
/// parameter `n`.
pub fn existence_certificate(alpha: Sign, epsilon: Sign, n: usize) -> ExistenceCertificate {
    let family = AlgebraFamily::new(FamilyTag::for_signs(alpha, epsilon), n);
    let basis = algebra_basis(family);
    let ambient_tag = match epsilon {
        Sign::Plus => AmbientAlgebra::O2n,
        Sign::Minus => AmbientAlgebra::Onn,
    };
    let ambient = algebra_basis(AlgebraFamily::new(
        match ambient_tag {
            AmbientAlgebra::O2n => FamilyTag::O2n,
            AmbientAlgebra::Onn => FamilyTag::Onn,
        },
        n,
    ));
    let containment_residual = basis
        .mats
        .iter()
        .map(|b| linalg::span_residual(&ambient.mats, b))
        .fold(0.0, f64::max);
    ExistenceCertificate {
        family,
        prolongation_dim: first_prolongation_dim(&basis),
        transpose_invariant: is_transpose_invariant(&basis, 1e-9),
        contained_in: ambient_tag,
        containment_residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_dimensions_match_closed_forms() {
        for tag in FamilyTag::ALL {
            for n in 1..=3 {
                let family = AlgebraFamily::new(tag, n);
                let basis = algebra_basis(family);
                assert_eq!(basis.len(), family.dimension(), "{tag} n={n}");
                // linear independence: vectorized stack has full column rank
                if !basis.is_empty() {
                    assert_eq!(
                        linalg::span_dimension(&basis.mats),
                        basis.len(),
                        "{tag} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn para_n1_basis_is_diag_1_minus1() {
        let basis = algebra_basis(AlgebraFamily::new(FamilyTag::Para, 1));
        assert_eq!(basis.len(), 1);
        let expected = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert_eq!(basis.mats[0], expected);
    }

    #[test]
    fn norden_n1_is_zero_dimensional() {
        let basis = algebra_basis(AlgebraFamily::new(FamilyTag::Norden, 1));
        assert_eq!(basis.len(), 0);
    }

    #[test]
    fn u_n2_has_dimension_four() {
        assert_eq!(algebra_basis(AlgebraFamily::new(FamilyTag::U, 2)).len(), 4);
    }

    #[test]
    fn basis_elements_pass_algebra_membership_exactly() {
        for tag in FamilyTag::ALL {
            for n in 1..=3 {
                let family = AlgebraFamily::new(tag, n);
                for b in &algebra_basis(family).mats {
                    let r = membership_residual(b, family, MembershipLevel::Algebra).unwrap();
                    assert!(r < 1e-12, "{tag} n={n}: residual {r}");
                }
            }
        }
    }

    #[test]
    fn identity_is_in_product_group() {
        let family = AlgebraFamily::new(FamilyTag::Product, 2);
        let id = DMatrix::<f64>::identity(4, 4);
        assert!(membership(&id, family, MembershipLevel::Group, 1e-12).unwrap());
    }

    #[test]
    fn standard_complex_structure_lies_in_u_algebra() {
        // block form [[0, −I], [I, 0]]: A = 0 skew, B = −I symmetric
        let mut j = DMatrix::<f64>::zeros(4, 4);
        for i in 0..2 {
            j[(2 + i, i)] = 1.0;
            j[(i, 2 + i)] = -1.0;
        }
        let family = AlgebraFamily::new(FamilyTag::U, 2);
        assert_eq!(
            membership_residual(&j, family, MembershipLevel::Algebra).unwrap(),
            0.0
        );
    }

    #[test]
    fn scaled_identity_is_not_skew() {
        let family = AlgebraFamily::new(FamilyTag::O2n, 1);
        let x = DMatrix::<f64>::identity(2, 2) * 2.0;
        assert!(!membership(&x, family, MembershipLevel::Algebra, 1e-9).unwrap());
    }

    #[test]
    fn membership_rejects_wrong_size() {
        let family = AlgebraFamily::new(FamilyTag::U, 2);
        let x = DMatrix::<f64>::identity(3, 3);
        assert!(matches!(
            membership(&x, family, MembershipLevel::Algebra, 1e-9),
            Err(GeomError::SizeMismatch { .. })
        ));
    }

    #[test]
    fn skew_algebra_has_zero_prolongation() {
        let basis = algebra_basis(AlgebraFamily::new(FamilyTag::O2n, 1));
        assert_eq!(first_prolongation_dim(&basis), 0);
    }

    #[test]
    fn complex_gl1_has_prolongation_dim_two() {
        // brute-force oracle for m = 2, basis {I, Jstd}: with
        // S(e1) = a1·I + b1·J and S(e2) = a2·I + b2·J, the single vector
        // equation S(e1)e2 = S(e2)e1 reads (−b1, a1) = (a2, b2), pinning
        // a2 = −b1 and b2 = a1 and leaving exactly two free parameters.
        let basis = algebra_basis(AlgebraFamily::new(FamilyTag::Glc, 1));
        assert_eq!(first_prolongation_dim(&basis), 2);
    }

    #[test]
    fn para_n1_has_zero_prolongation() {
        // hand oracle: S(e_i) = a_i·diag(1, −1); S(e1)e2 = (0, −a1) and
        // S(e2)e1 = (a2, 0) must agree, forcing a1 = a2 = 0.
        let basis = algebra_basis(AlgebraFamily::new(FamilyTag::Para, 1));
        assert_eq!(first_prolongation_dim(&basis), 0);
    }

    #[test]
    fn structure_algebras_have_zero_prolongation_up_to_n3() {
        for tag in [
            FamilyTag::U,
            FamilyTag::Norden,
            FamilyTag::Product,
            FamilyTag::Para,
            FamilyTag::O2n,
            FamilyTag::Onn,
        ] {
            for n in 1..=3 {
                let basis = algebra_basis(AlgebraFamily::new(tag, n));
                assert_eq!(first_prolongation_dim(&basis), 0, "{tag} n={n}");
            }
        }
    }

    #[test]
    fn full_linear_families_have_positive_prolongation() {
        for tag in [FamilyTag::Glc, FamilyTag::Glrr] {
            for n in 1..=2 {
                let basis = algebra_basis(AlgebraFamily::new(tag, n));
                assert!(first_prolongation_dim(&basis) > 0, "{tag} n={n}");
            }
        }
    }

    #[test]
    fn structure_algebras_are_transpose_invariant() {
        for tag in [
            FamilyTag::U,
            FamilyTag::Norden,
            FamilyTag::Product,
            FamilyTag::Para,
            FamilyTag::Onn,
        ] {
            for n in 1..=3 {
                let basis = algebra_basis(AlgebraFamily::new(tag, n));
                if basis.is_empty() {
                    continue;
                }
                assert!(is_transpose_invariant(&basis, 1e-9), "{tag} n={n}");
            }
        }
    }

    #[test]
    fn strictly_upper_triangular_span_is_not_transpose_invariant() {
        let basis = AlgebraBasis {
            m: 2,
            mats: vec![DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0])],
        };
        assert!(!is_transpose_invariant(&basis, 1e-9));
    }

    #[test]
    fn certificates_hold_for_all_four_geometries() {
        let cases = [
            (Sign::Minus, Sign::Plus, 2, AmbientAlgebra::O2n),
            (Sign::Plus, Sign::Minus, 2, AmbientAlgebra::Onn),
            (Sign::Plus, Sign::Plus, 3, AmbientAlgebra::O2n),
            (Sign::Minus, Sign::Minus, 2, AmbientAlgebra::Onn),
        ];
        for (alpha, eps, n, ambient) in cases {
            let cert = existence_certificate(alpha, eps, n);
            assert_eq!(cert.prolongation_dim, 0);
            assert!(cert.transpose_invariant);
            assert_eq!(cert.contained_in, ambient);
            assert!(cert.containment_residual < 1e-9);
            assert!(cert.holds());
        }
    }
}
