//! Dense complex Hermitian linear algebra.
//!
//! Everything here works on small-to-moderate dense matrices (a few thousand
//! rows at most). Subsystems are indexed from 1, so for a register
//! `A_1 ⊗ A_2 ⊗ … ⊗ A_N` the first factor is subsystem `1` and is the most
//! significant digit of the row-major basis index.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Entrywise tolerance on `|M - M†|` for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance on `|Tr ρ - 1|` for density matrices.
pub const TRACE_TOL: f64 = 1e-12;
/// Most negative eigenvalue tolerated as numerical noise in a PSD matrix.
pub const PSD_TOL: f64 = 1e-10;
/// Eigenvalues within this distance are reported as one degenerate level.
pub const MERGE_TOL: f64 = 1e-10;
/// Eigenvalues at or below this are treated as outside the support.
pub const SUPPORT_TOL: f64 = 1e-12;

/// Dense square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self(DMatrix::from_fn(dim, dim, f))
    }

    /// Diagonal matrix with real entries.
    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim || dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(Self(DMatrix::from_row_slice(dim, dim, entries)))
    }

    /// Wraps an nalgebra matrix, rejecting non-square or empty input.
    pub fn from_nalgebra(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        Ok(Self(m))
    }

    /// Projector `|v⟩⟨v|`.
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        Self::from_fn(n, |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn as_nalgebra(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_nalgebra(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self(self.0.map(|z| z * factor))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    pub fn matmul(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// `max |M - M†|` over entries.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut defect = 0.0f64;
        for i in 0..n {
            for j in i..n {
                defect = defect.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        defect
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()).map(|z| z * 0.5))
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect() <= HERMITIAN_TOL * self.max_abs().max(1.0)
    }
}

/// Kronecker (tensor) product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix(a.0.kronecker(&b.0))
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V diag(f(w)) V†`.
    pub fn reconstruct_with(&self, mut f: impl FnMut(f64) -> f64) -> ComplexMatrix {
        let v = &self.vectors.0;
        let weights: Vec<f64> = self.values.iter().map(|&w| f(w)).collect();
        let mut scaled = v.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col.iter_mut().for_each(|z| *z *= weights[k]);
        }
        ComplexMatrix(scaled * v.adjoint())
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|w| w)
    }
}

/// Hermitian eigendecomposition with eigenvalues in ascending order.
///
/// Fails with [`Error::NotHermitian`] when the input is not Hermitian within
/// [`HERMITIAN_TOL`] (scaled by the largest entry when that exceeds one),
/// and with [`Error::NoConvergence`] after `100 · dim` implicit QR iterations.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL * m.max_abs().max(1.0) {
        return Err(Error::NotHermitian { defect });
    }
    let n = m.dim();
    let max_iterations = 100 * n;
    let eig = SymmetricEigen::try_new(m.hermitian_part().0, f64::EPSILON, max_iterations)
        .ok_or(Error::NoConvergence { max_iterations })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(HermitianEigen {
        values,
        vectors: ComplexMatrix(vectors),
    })
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(eig_hermitian(m)?.values)
}

/// How eigenvalues at or below [`SUPPORT_TOL`] are treated by [`frac_power`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PowerMode {
    /// Negative powers of a zero eigenvalue are an error.
    #[default]
    Strict,
    /// Pseudo-power on the support: zero eigenvalues map to zero.
    SupportRestricted,
}

/// `m^p = V diag(w^p) V†` for Hermitian positive-semidefinite `m`.
pub fn frac_power(m: &ComplexMatrix, p: f64, mode: PowerMode) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(m)?;
    if let Some(&w) = eig.values.first() {
        if w < -PSD_TOL {
            return Err(Error::NotDensityMatrix(format!("matrix has negative eigenvalue {w:e}")));
        }
    }
    for &w in &eig.values {
        if p < 0.0 && w <= SUPPORT_TOL && mode == PowerMode::Strict {
            return Err(Error::SingularNegativePower { eigenvalue: w });
        }
    }
    Ok(eig.reconstruct_with(|w| scalar_power(w, p, mode)))
}

fn scalar_power(w: f64, p: f64, mode: PowerMode) -> f64 {
    if w <= SUPPORT_TOL {
        match mode {
            PowerMode::SupportRestricted => 0.0,
            // Only reachable with p >= 0 (negative powers were rejected).
            PowerMode::Strict if p == 0.0 => 1.0,
            PowerMode::Strict => w.max(0.0).powf(p),
        }
    } else {
        w.powf(p)
    }
}

/// `outer^p · inner · outer^p`, Hermitian-symmetrized.
pub fn sandwich(inner: &ComplexMatrix, outer: &ComplexMatrix, p: f64, mode: PowerMode) -> Result<ComplexMatrix> {
    if inner.dim() != outer.dim() {
        return Err(Error::DimensionMismatch {
            expected: outer.dim(),
            found: inner.dim(),
        });
    }
    let s = frac_power(outer, p, mode)?;
    Ok(s.matmul(inner).matmul(&s).hermitian_part())
}

/// Multiset of eigenvalues as sorted `(value, multiplicity)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pairs: Vec<(f64, usize)>,
}

impl Spectrum {
    /// Coalesces raw eigenvalues with [`MERGE_TOL`].
    pub fn from_values(values: &[f64]) -> Self {
        Self::from_pairs(values.iter().map(|&v| (v, 1)))
    }

    /// Sorts, drops zero multiplicities and merges values within [`MERGE_TOL`].
    pub fn from_pairs(pairs: impl IntoIterator<Item = (f64, usize)>) -> Self {
        Self::from_pairs_with_tol(pairs, MERGE_TOL)
    }

    pub fn from_pairs_with_tol(pairs: impl IntoIterator<Item = (f64, usize)>, tol: f64) -> Self {
        let mut raw: Vec<(f64, usize)> = pairs.into_iter().filter(|&(_, m)| m > 0).collect();
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut merged: Vec<(f64, usize)> = Vec::new();
        // Anchor is the first value of the current cluster.
        let mut anchor = f64::NAN;
        let mut weighted_sum = 0.0;
        for (v, m) in raw {
            match merged.last_mut() {
                Some(last) if v - anchor <= tol => {
                    weighted_sum += v * m as f64;
                    last.1 += m;
                    last.0 = weighted_sum / last.1 as f64;
                }
                _ => {
                    anchor = v;
                    weighted_sum = v * m as f64;
                    merged.push((v, m));
                }
            }
        }
        Self { pairs: merged }
    }

    pub fn pairs(&self) -> &[(f64, usize)] {
        &self.pairs
    }

    /// Sum of multiplicities.
    pub fn dimension(&self) -> usize {
        self.pairs.iter().map(|&(_, m)| m).sum()
    }

    /// `Σ m·v`.
    pub fn weighted_sum(&self) -> f64 {
        self.pairs.iter().map(|&(v, m)| v * m as f64).sum()
    }

    /// True when both spectra have the same multiplicity structure and every
    /// level agrees within `tol`.
    pub fn approx_eq(&self, other: &Spectrum, tol: f64) -> bool {
        self.pairs.len() == other.pairs.len()
            && self
                .pairs
                .iter()
                .zip(&other.pairs)
                .all(|(a, b)| a.1 == b.1 && (a.0 - b.0).abs() <= tol)
    }
}

/// Hermitian, unit-trace, positive-semidefinite matrix on a tensor product
/// of subsystems with the given dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    /// Validates Hermiticity, trace and positivity.
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        check_dims(matrix.dim(), &dims)?;
        let defect = matrix.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian { defect });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::NotDensityMatrix(format!("trace is {tr}, expected 1")));
        }
        let min = eigvalsh(&matrix)?[0];
        if min < -PSD_TOL {
            return Err(Error::NotDensityMatrix(format!(
                "minimum eigenvalue {min:e} is negative"
            )));
        }
        Ok(Self { matrix, dims })
    }

    /// Skips the spectral checks; for matrices positive by construction.
    pub(crate) fn from_parts_unchecked(matrix: ComplexMatrix, dims: Vec<usize>) -> Self {
        debug_assert_eq!(matrix.dim(), dims.iter().product::<usize>());
        Self { matrix, dims }
    }

    /// Maximally mixed state `I/D` on the given register.
    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let n: usize = dims.iter().product();
        check_dims(n, &dims)?;
        Ok(Self::from_parts_unchecked(
            ComplexMatrix::identity(n).scale(1.0 / n as f64),
            dims,
        ))
    }

    /// `a ⊗ b` with concatenated subsystem lists.
    pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> Self {
        let dims = a.dims.iter().chain(&b.dims).copied().collect();
        Self::from_parts_unchecked(kron(&a.matrix, &b.matrix), dims)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        eigvalsh(&self.matrix)
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        Ok(Spectrum::from_values(&self.eigenvalues()?))
    }
}

fn check_dims(matrix_dim: usize, dims: &[usize]) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidParams(format!(
            "subsystem dimensions {dims:?} must be nonempty and positive"
        )));
    }
    let product: usize = dims.iter().product();
    if product != matrix_dim {
        return Err(Error::DimensionMismatch {
            expected: product,
            found: matrix_dim,
        });
    }
    Ok(())
}

/// Validates a set of 1-based subsystem indices and returns a membership mask.
fn subsystem_mask(indices: &[usize], parties: usize) -> Result<Vec<bool>> {
    let mut mask = vec![false; parties];
    for &index in indices {
        if index == 0 || index > parties || mask[index - 1] {
            return Err(Error::BadSubsystemIndex { index, parties });
        }
        mask[index - 1] = true;
    }
    Ok(mask)
}

/// Row-major strides: subsystem 1 is the most significant digit.
fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Offsets into the full basis for every multi-index over the selected
/// subsystems, enumerated in row-major order of the selection.
fn offsets(dims: &[usize], strides: &[usize], selected: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut out = vec![0usize];
    for k in selected {
        out = out
            .iter()
            .flat_map(|&base| (0..dims[k]).map(move |digit| base + digit * strides[k]))
            .collect();
    }
    out
}

/// Reduced state on the subsystems in `keep` (1-based), tracing out the rest.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let parties = rho.dims.len();
    if keep.is_empty() {
        return Err(Error::InvalidParams("keep set must be nonempty".into()));
    }
    let mask = subsystem_mask(keep, parties)?;
    let st = strides(&rho.dims);
    let kept_offsets = offsets(&rho.dims, &st, (0..parties).filter(|&k| mask[k]));
    let traced_offsets = offsets(&rho.dims, &st, (0..parties).filter(|&k| !mask[k]));

    let m = rho.matrix.as_nalgebra();
    let reduced = ComplexMatrix::from_fn(kept_offsets.len(), |i, j| {
        let (ri, cj) = (kept_offsets[i], kept_offsets[j]);
        traced_offsets.iter().map(|&t| m[(ri + t, cj + t)]).sum::<Complex64>()
    });
    let dims = (0..parties).filter(|&k| mask[k]).map(|k| rho.dims[k]).collect();
    Ok(DensityMatrix::from_parts_unchecked(reduced, dims))
}

/// Transposes the tensor factors listed in `part` (1-based).
pub fn partial_transpose(rho: &DensityMatrix, part: &[usize]) -> Result<ComplexMatrix> {
    partial_transpose_matrix(&rho.matrix, &rho.dims, part)
}

/// [`partial_transpose`] on a bare matrix over the register `dims`.
///
/// The result of a partial transpose need not be positive, so this form is
/// what allows it to be applied twice.
pub fn partial_transpose_matrix(m: &ComplexMatrix, dims: &[usize], part: &[usize]) -> Result<ComplexMatrix> {
    check_dims(m.dim(), dims)?;
    let parties = dims.len();
    let mask = subsystem_mask(part, parties)?;
    let st = strides(dims);
    let n = m.dim();

    // Split each basis index into its transposed and untouched components.
    let split: Vec<(usize, usize)> = (0..n)
        .map(|i| {
            let mut moved = 0;
            for k in 0..parties {
                if mask[k] {
                    moved += (i / st[k]) % dims[k] * st[k];
                }
            }
            (moved, i - moved)
        })
        .collect();

    let m = m.as_nalgebra();
    Ok(ComplexMatrix::from_fn(n, |i, j| {
        let (ti, ki) = split[i];
        let (tj, kj) = split[j];
        m[(ki + tj, kj + ti)]
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn assert_close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) {
        let diff = a.sub(b).max_abs();
        assert!(diff <= tol, "matrices differ by {diff:e}");
    }

    #[test]
    fn identity_eigenvalues() {
        let eig = eig_hermitian(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(eig.values.len(), 3);
        for w in &eig.values {
            assert!((w - 1.0).abs() < 1e-14);
        }
        let v = &eig.vectors;
        assert_close(&v.adjoint().matmul(v), &ComplexMatrix::identity(3), 1e-12);
    }

    #[test]
    fn diagonal_eigenvalues_ascending() {
        let m = ComplexMatrix::from_real_diagonal(&[0.75, 0.25]);
        let w = eigvalsh(&m).unwrap();
        assert!((w[0] - 0.25).abs() < 1e-15);
        assert!((w[1] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_row_major(2, &[c(1.0), c(1.0), c(0.0), c(1.0)]).unwrap();
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn complex_hermitian_reconstruction() {
        let i = Complex64::new(0.0, 1.0);
        let m = ComplexMatrix::from_row_major(
            3,
            &[
                c(2.0),
                c(1.0) + i,
                -i * 0.5,
                c(1.0) - i,
                c(3.0),
                c(0.2),
                i * 0.5,
                c(0.2),
                c(-1.0),
            ],
        )
        .unwrap();
        let eig = eig_hermitian(&m).unwrap();
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        assert_close(&eig.reconstruct(), &m, 1e-12);
    }

    #[test]
    fn frac_power_examples() {
        let id4 = ComplexMatrix::identity(4);
        assert_close(&frac_power(&id4, -0.5, PowerMode::Strict).unwrap(), &id4, 1e-14);

        let m = ComplexMatrix::from_real_diagonal(&[4.0, 9.0]);
        let r = frac_power(&m, 0.5, PowerMode::Strict).unwrap();
        assert_close(&r, &ComplexMatrix::from_real_diagonal(&[2.0, 3.0]), 1e-14);

        // (1/9)^{(1-q)/(2q)} at q = 2 is 9^{1/4} = sqrt(3).
        let q = 2.0;
        let m = ComplexMatrix::identity(9).scale(1.0 / 9.0);
        let r = frac_power(&m, (1.0 - q) / (2.0 * q), PowerMode::Strict).unwrap();
        assert_close(&r, &ComplexMatrix::identity(9).scale(1.7320508075688772), 1e-13);
    }

    #[test]
    fn frac_power_singular_modes() {
        let m = ComplexMatrix::from_real_diagonal(&[0.0, 0.5]);
        assert!(matches!(
            frac_power(&m, -0.5, PowerMode::Strict),
            Err(Error::SingularNegativePower { .. })
        ));
        let r = frac_power(&m, -1.0, PowerMode::SupportRestricted).unwrap();
        assert_close(&r, &ComplexMatrix::from_real_diagonal(&[0.0, 2.0]), 1e-14);
        // Positive powers are fine either way.
        let r = frac_power(&m, 2.0, PowerMode::Strict).unwrap();
        assert_close(&r, &ComplexMatrix::from_real_diagonal(&[0.0, 0.25]), 1e-14);
    }

    #[test]
    fn kron_examples() {
        assert_eq!(
            kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(3)),
            ComplexMatrix::identity(6)
        );
        let k = kron(
            &ComplexMatrix::from_real_diagonal(&[1.0, 2.0]),
            &ComplexMatrix::from_real_diagonal(&[3.0, 4.0]),
        );
        assert_eq!(k, ComplexMatrix::from_real_diagonal(&[3.0, 4.0, 6.0, 8.0]));

        let rho = ComplexMatrix::from_row_major(2, &[c(0.6), c(0.1), c(0.1), c(0.4)]).unwrap();
        let proj = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        let k = kron(&proj, &rho);
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i < 2 && j < 2 { rho.get(i, j) } else { c(0.0) };
                assert_eq!(k.get(i, j), expected);
            }
        }
    }

    fn qubit(p: f64, coherence: f64) -> DensityMatrix {
        let m = ComplexMatrix::from_row_major(
            2,
            &[
                c(p),
                Complex64::new(coherence, 0.05),
                Complex64::new(coherence, -0.05),
                c(1.0 - p),
            ],
        )
        .unwrap();
        DensityMatrix::new(m, vec![2]).unwrap()
    }

    #[test]
    fn partial_trace_of_product() {
        let a = qubit(0.7, 0.1);
        let b = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.2, 0.3, 0.5]), vec![3]).unwrap();
        let ab = DensityMatrix::tensor(&a, &b);
        let ra = partial_trace(&ab, &[1]).unwrap();
        let rb = partial_trace(&ab, &[2]).unwrap();
        assert_close(ra.matrix(), a.matrix(), 1e-15);
        assert_close(rb.matrix(), b.matrix(), 1e-15);
        assert_eq!(rb.dims(), &[3]);
    }

    #[test]
    fn partial_trace_middle_subsystem() {
        let a = qubit(0.7, 0.1);
        let b = qubit(0.4, -0.2);
        let c3 = DensityMatrix::maximally_mixed(vec![3]).unwrap();
        let abc = DensityMatrix::tensor(&DensityMatrix::tensor(&a, &c3), &b);
        let ac = partial_trace(&abc, &[1, 3]).unwrap();
        assert_close(ac.matrix(), DensityMatrix::tensor(&a, &b).matrix(), 1e-15);
    }

    #[test]
    fn partial_trace_bad_index() {
        let rho = DensityMatrix::maximally_mixed(vec![2, 2]).unwrap();
        assert!(matches!(
            partial_trace(&rho, &[3]),
            Err(Error::BadSubsystemIndex { index: 3, .. })
        ));
        assert!(matches!(
            partial_trace(&rho, &[0]),
            Err(Error::BadSubsystemIndex { .. })
        ));
        assert!(partial_trace(&rho, &[]).is_err());
        assert!(matches!(
            partial_transpose(&rho, &[5]),
            Err(Error::BadSubsystemIndex { .. })
        ));
    }

    #[test]
    fn partial_transpose_of_product_keeps_spectrum() {
        let ab = DensityMatrix::tensor(&qubit(0.7, 0.1), &qubit(0.4, -0.2));
        let before = eigvalsh(ab.matrix()).unwrap();
        let after = eigvalsh(&partial_transpose(&ab, &[1]).unwrap()).unwrap();
        for (x, y) in before.iter().zip(&after) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn partial_transpose_two_qubit_werner() {
        // (1-x) I/4 + x |Φ+⟩⟨Φ+| at x = 0.5: the partial transpose has
        // the eigenvalue (1 - 3x)/4 on the singlet direction.
        let x = 0.5;
        let s = 1.0 / 2f64.sqrt();
        let phi = [c(s), c(0.0), c(0.0), c(s)];
        let m = ComplexMatrix::identity(4)
            .scale((1.0 - x) / 4.0)
            .add(&ComplexMatrix::outer(&phi).scale(x));
        let rho = DensityMatrix::new(m, vec![2, 2]).unwrap();
        let w = eigvalsh(&partial_transpose(&rho, &[1]).unwrap()).unwrap();
        assert!((w[0] + 0.125).abs() < 1e-14);
        let tr = partial_transpose(&rho, &[2]).unwrap().trace();
        assert!((tr.re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn spectrum_coalesces() {
        let s = Spectrum::from_values(&[0.3, 0.1, 0.1 + 1e-12, 0.3 - 5e-11, 0.6]);
        assert_eq!(s.pairs().len(), 3);
        assert_eq!(s.pairs()[0].1, 2);
        assert_eq!(s.pairs()[1].1, 2);
        assert_eq!(s.dimension(), 5);
        let t = Spectrum::from_pairs([(0.6, 1), (0.3, 2), (0.1, 2), (0.9, 0)]);
        assert!(s.approx_eq(&t, 1e-10));
    }

    #[test]
    fn density_matrix_validation() {
        let bad_trace = ComplexMatrix::from_real_diagonal(&[0.5, 0.6]);
        assert!(DensityMatrix::new(bad_trace, vec![2]).is_err());
        let negative = ComplexMatrix::from_real_diagonal(&[1.5, -0.5]);
        assert!(DensityMatrix::new(negative, vec![2]).is_err());
        let ok = ComplexMatrix::from_real_diagonal(&[0.5, 0.5]);
        assert!(DensityMatrix::new(ok.clone(), vec![3]).is_err());
        assert!(DensityMatrix::new(ok, vec![2]).is_ok());
    }
}
