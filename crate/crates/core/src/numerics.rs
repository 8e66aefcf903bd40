//! Minimal dense complex linear algebra: products, adjoints, norms,
//! Hermitian/unitary eigendecomposition, and seeded random unitaries.
//!
//! Everything here is sized for control synthesis on systems of a few dozen
//! levels; matrices are dense, row-major, and immutable in the public API.

use std::ops::{Mul, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, C};

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

/// Dense complex vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector<T> {
    data: Vec<C<T>>,
}

impl<T: Scalar> ComplexVector<T> {
    pub fn new(data: Vec<C<T>>) -> Self {
        assert!(!data.is_empty(), "vector must have at least one entry");
        Self { data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![C::new(T::zero(), T::zero()); dim])
    }

    /// The computational basis state `|index⟩` (1-based).
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index >= 1 && index <= dim, "basis index out of range");
        let mut v = Self::zeros(dim);
        v.data[index - 1] = C::new(T::one(), T::zero());
        v
    }

    /// The uniform superposition over all levels.
    pub fn uniform(dim: usize) -> Self {
        let amp = T::one() / T::real(dim as f64).sqrt();
        Self::new(vec![C::new(amp, T::zero()); dim])
    }

    pub fn from_reals(entries: &[f64]) -> Self {
        Self::new(
            entries
                .iter()
                .map(|&r| C::new(T::real(r), T::zero()))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn entries(&self) -> &[C<T>] {
        &self.data
    }

    pub fn entries_mut(&mut self) -> &mut [C<T>] {
        &mut self.data
    }

    pub fn norm(&self) -> T {
        self.data
            .iter()
            .map(|c| c.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    /// `⟨self|other⟩` with the conjugate on `self`.
    pub fn inner(&self, other: &Self) -> C<T> {
        assert_eq!(self.dim(), other.dim(), "inner product dim mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self::new(self.data.iter().map(|c| c / n).collect())
    }

    pub fn scale(&self, factor: C<T>) -> Self {
        Self::new(self.data.iter().map(|c| c * factor).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Self::new(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    /// Largest entry-wise deviation from `other`.
    pub fn max_entry_distance(&self, other: &Self) -> T {
        assert_eq!(self.dim(), other.dim());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    /// Checks `| ‖v‖ - 1 | ≤ tol`.
    pub fn check_unit(&self, tol: T) -> Result<()> {
        let dev = (self.norm() - T::one()).abs();
        if dev > tol {
            return Err(Error::NotUnit {
                deviation: dev.as_f64(),
            });
        }
        Ok(())
    }
}

impl<T: Scalar> ComplexMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix must be at least 1x1");
        Self {
            rows,
            cols,
            data: vec![C::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C::new(T::one(), T::zero()));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C<T>>>) -> Self {
        let r = rows.len();
        assert!(r >= 1);
        let c = rows[0].len();
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn diagonal(entries: &[C<T>]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C<T> {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C<T>) {
        self.data[i * self.cols + j] = v;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sqr() == T::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &ComplexVector<T>) -> ComplexVector<T> {
        assert_eq!(self.cols, v.dim(), "matvec shape mismatch");
        let mut out = ComplexVector::zeros(self.rows);
        for i in 0..self.rows {
            let mut acc = C::new(T::zero(), T::zero());
            for j in 0..self.cols {
                acc += self.get(i, j) * v.entries()[j];
            }
            out.entries_mut()[i] = acc;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, factor: C<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .map(|c| c.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    pub fn column(&self, j: usize) -> ComplexVector<T> {
        ComplexVector::new((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    pub fn set_column(&mut self, j: usize, v: &ComplexVector<T>) {
        assert_eq!(v.dim(), self.rows);
        for i in 0..self.rows {
            self.set(i, j, v.entries()[i]);
        }
    }

    pub fn max_entry_distance(&self, other: &Self) -> T {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch {
                left: format!("{}x{}", self.rows, self.cols),
                right: format!("{}x{}", other.rows, other.cols),
            });
        }
        Ok(())
    }

    /// Deviation from unitarity, `‖U†U - I‖` in spectral norm.
    pub fn unitarity_deviation(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let gram = self.adjoint().matmul(self);
        let id = Self::identity(self.rows);
        spectral_norm(&gram.sub(&id).expect("same shape"))
    }

    /// Errors with `NotUnitary` if `‖U†U - I‖ > tol`.
    pub fn check_unitary(&self, tol: T) -> Result<()> {
        let dev = self.unitarity_deviation();
        if dev > tol {
            return Err(Error::NotUnitary {
                deviation: dev.as_f64(),
                tol: tol.as_f64(),
            });
        }
        Ok(())
    }
}

impl<T: Scalar> Mul<&ComplexMatrix<T>> for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        self.matmul(rhs)
    }
}

impl<T: Scalar> Mul<&ComplexVector<T>> for &ComplexMatrix<T> {
    type Output = ComplexVector<T>;
    fn mul(self, rhs: &ComplexVector<T>) -> ComplexVector<T> {
        self.matvec(rhs)
    }
}

impl<T: Scalar> Sub<&ComplexMatrix<T>> for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        ComplexMatrix::sub(self, rhs).expect("shape mismatch in subtraction")
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Returns eigenvalues in ascending order with the matching
/// orthonormal eigenvector columns.
///
/// The caller is responsible for `a` actually being Hermitian; only the
/// Hermitian part of the input participates in the rotations.
pub fn eig_hermitian<T: Scalar>(a: &ComplexMatrix<T>) -> (Vec<T>, ComplexMatrix<T>) {
    assert!(a.is_square(), "eig_hermitian needs a square matrix");
    let n = a.rows();
    let mut m = a.clone();
    let mut v = ComplexMatrix::identity(n);
    if n == 1 {
        return (vec![m.get(0, 0).re], v);
    }

    let frob = m.frobenius_norm();
    if frob == T::zero() {
        return (vec![T::zero(); n], v);
    }
    let target = frob * T::epsilon();
    let skip = target * T::real(1e-2);

    for _sweep in 0..60 {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += m.get(p, q).norm_sqr();
            }
        }
        if (off + off).sqrt() <= target {
            break;
        }
        for p in 0..(n - 1) {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                let mag = apq.norm();
                if mag <= skip {
                    continue;
                }
                let phase = apq / mag;
                let app = m.get(p, p).re;
                let aqq = m.get(q, q).re;
                let sigma = (app - aqq) / (mag + mag);
                let t = if sigma == T::zero() {
                    T::one()
                } else {
                    sigma.signum() / (sigma.abs() + (sigma * sigma + T::one()).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                let cs = C::new(c, T::zero());
                let s_ph = phase * s;
                let s_ph_conj = phase.conj() * s;

                // columns p, q of both m and the accumulated eigenvectors
                for k in 0..n {
                    let mp = m.get(k, p);
                    let mq = m.get(k, q);
                    m.set(k, p, mp * cs + mq * s_ph_conj);
                    m.set(k, q, mq * cs - mp * s_ph);

                    let vp = v.get(k, p);
                    let vq = v.get(k, q);
                    v.set(k, p, vp * cs + vq * s_ph_conj);
                    v.set(k, q, vq * cs - vp * s_ph);
                }
                // rows p, q
                for k in 0..n {
                    let mp = m.get(p, k);
                    let mq = m.get(q, k);
                    m.set(p, k, mp * cs + mq * s_ph);
                    m.set(q, k, mq * cs - mp * s_ph_conj);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let vals: Vec<T> = (0..n).map(|i| m.get(i, i).re).collect();
    order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).expect("NaN eigenvalue"));
    let sorted_vals = order.iter().map(|&i| vals[i]).collect();
    let sorted_vecs = ComplexMatrix::from_fn(n, n, |i, j| v.get(i, order[j]));
    (sorted_vals, sorted_vecs)
}

/// Largest singular value of `m`, computed from the Hermitian
/// eigendecomposition of `m† m`.
pub fn spectral_norm<T: Scalar>(m: &ComplexMatrix<T>) -> T {
    let gram = m.adjoint().matmul(m);
    let (vals, _) = eig_hermitian(&gram);
    vals.last()
        .copied()
        .unwrap_or(T::zero())
        .max(T::zero())
        .sqrt()
}

/// Spectral-norm distance between two equal-shape matrices.
pub fn operator_distance<T: Scalar>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<T> {
    let diff = a.sub(b)?;
    Ok(spectral_norm(&diff))
}

/// Default eigenphase clustering tolerance for [`eig_unitary`].
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

/// Eigendecomposition of a unitary matrix: eigenphases in `(-pi, pi]`
/// (ascending) and the matching orthonormal eigenvector columns.
///
/// Computed by jointly diagonalizing the commuting Hermitian parts
/// `(U + U†)/2` and `(U - U†)/(2i)`. Eigenvectors within a phase cluster
/// (spacing at most `cluster_tol`) are re-orthonormalized, and each
/// eigenvector's global phase is fixed so its first component of magnitude
/// above 1e-12 is real and positive.
pub fn eig_unitary<T: Scalar>(
    u: &ComplexMatrix<T>,
    cluster_tol: T,
) -> Result<(Vec<T>, ComplexMatrix<T>)> {
    u.check_unitary(T::real(1e-10))?;
    let n = u.rows();
    let half = T::real(0.5);

    // Hermitian part H = (U + U†)/2: eigenvalue cos(phi) for eigenphase phi.
    let h = ComplexMatrix::from_fn(n, n, |i, j| (u.get(i, j) + u.get(j, i).conj()) * half);
    // Skew part over i: K = (U - U†)/(2i), eigenvalue sin(phi).
    let k = ComplexMatrix::from_fn(n, n, |i, j| {
        let d = (u.get(i, j) - u.get(j, i).conj()) * half;
        C::new(d.im, -d.re)
    });

    let (hvals, mut vecs) = eig_hermitian(&h);

    // Split cos-degenerate groups using K so that phases +phi and -phi
    // (equal cosine, opposite sine) get distinct eigenvectors.
    let h_group_tol = T::real(1e-7);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (hvals[end] - hvals[end - 1]).abs() <= h_group_tol {
            end += 1;
        }
        if end - start > 1 {
            let cols: Vec<usize> = (start..end).collect();
            let block = project_block(&k, &vecs, &cols);
            let (_, rot) = eig_hermitian(&block);
            rotate_columns(&mut vecs, &cols, &rot);
        }
        start = end;
    }

    // One first-order refinement sweep against U itself. The cos/sin gaps
    // both go quadratically small for phases symmetric about +-pi/2 while
    // the eigenvalue gap stays linear, so correcting with U's own residuals
    // makes the accuracy independent of how the spectrum projects onto the
    // two Hermitian parts. The per-vector corrections are independent, so
    // a Gram-Schmidt pass must restore pairwise orthogonality: only then
    // do the residual mixings cancel in the spectral sum.
    refine_eigenvectors(u, &mut vecs, cluster_tol);
    let all: Vec<usize> = (0..n).collect();
    orthonormalize_columns(&mut vecs, &all);

    // Phases from the Rayleigh quotient against U itself.
    let mut phases: Vec<T> = Vec::with_capacity(n);
    for j in 0..n {
        let col = vecs.column(j);
        let lambda = col.inner(&u.matvec(&col));
        let mut phi = lambda.im.atan2(lambda.re);
        // keep the representation in the half-open (-pi, pi]
        if phi <= -T::PI() + T::real(1e-12) {
            phi += T::TAU();
        }
        phases.push(phi);
    }

    // Ascending phase order.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| phases[i].partial_cmp(&phases[j]).expect("NaN phase"));
    let phases_sorted: Vec<T> = order.iter().map(|&i| phases[i]).collect();
    let mut sorted = ComplexMatrix::from_fn(n, n, |i, j| vecs.get(i, order[j]));

    // Re-orthonormalize within phase clusters (including across the
    // -pi/pi wrap) so degeneracies cannot leak non-orthogonality.
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for j in 0..n {
        let adjacent = j > 0 && (phases_sorted[j] - phases_sorted[j - 1]).abs() <= cluster_tol;
        if adjacent {
            clusters.last_mut().expect("nonempty").push(j);
        } else {
            clusters.push(vec![j]);
        }
    }
    if clusters.len() > 1 {
        let wrap =
            (phases_sorted[0] + T::TAU() - phases_sorted[n - 1]).abs() <= cluster_tol;
        if wrap {
            let first = clusters.remove(0);
            clusters.last_mut().expect("nonempty").extend(first);
        }
    }
    for cluster in &clusters {
        if cluster.len() > 1 {
            orthonormalize_columns(&mut sorted, cluster);
        }
    }

    // Canonical global phase per eigenvector.
    for j in 0..n {
        let mut col = sorted.column(j);
        fix_global_phase(&mut col, T::real(1e-12));
        sorted.set_column(j, &col);
    }

    Ok((phases_sorted, sorted))
}

/// Rotate the whole vector so the first component with magnitude above
/// `threshold` becomes real and positive.
pub fn fix_global_phase<T: Scalar>(v: &mut ComplexVector<T>, threshold: T) {
    let lead = v.entries().iter().find(|c| c.norm() > threshold);
    if let Some(&c) = lead {
        let phase = C::from_polar(T::one(), -c.arg());
        for e in v.entries_mut() {
            *e *= phase;
        }
    }
}

/// First-order eigenvector correction for a normal matrix: with
/// `m_ij = <v_i|U|v_j>`, each vector picks up `sum_i v_i m_ij / (l_j - l_i)`
/// over partners at eigenvalue distance above `cluster_tol` (closer pairs
/// belong to a degenerate cluster and keep their arbitrary basis).
fn refine_eigenvectors<T: Scalar>(
    u: &ComplexMatrix<T>,
    vecs: &mut ComplexMatrix<T>,
    cluster_tol: T,
) {
    let n = u.rows();
    let images: Vec<ComplexVector<T>> = (0..n).map(|j| u.matvec(&vecs.column(j))).collect();
    let m = ComplexMatrix::from_fn(n, n, |i, j| vecs.column(i).inner(&images[j]));
    let originals: Vec<ComplexVector<T>> = (0..n).map(|j| vecs.column(j)).collect();
    let cap = T::real(0.1);
    for j in 0..n {
        let mut corrected = originals[j].clone();
        let mut touched = false;
        for (i, partner) in originals.iter().enumerate() {
            if i == j {
                continue;
            }
            let gap = m.get(j, j) - m.get(i, i);
            if gap.norm() <= cluster_tol {
                continue;
            }
            let coef = m.get(i, j) / gap;
            if coef.norm() > cap {
                continue;
            }
            for (dst, &src) in corrected.entries_mut().iter_mut().zip(partner.entries()) {
                *dst += src * coef;
            }
            touched = true;
        }
        if touched {
            vecs.set_column(j, &corrected.normalized());
        }
    }
}

fn project_block<T: Scalar>(
    k: &ComplexMatrix<T>,
    vecs: &ComplexMatrix<T>,
    cols: &[usize],
) -> ComplexMatrix<T> {
    let m = cols.len();
    let kv: Vec<ComplexVector<T>> = cols.iter().map(|&j| k.matvec(&vecs.column(j))).collect();
    ComplexMatrix::from_fn(m, m, |i, j| vecs.column(cols[i]).inner(&kv[j]))
}

fn rotate_columns<T: Scalar>(vecs: &mut ComplexMatrix<T>, cols: &[usize], rot: &ComplexMatrix<T>) {
    let originals: Vec<ComplexVector<T>> = cols.iter().map(|&j| vecs.column(j)).collect();
    for (jj, &col) in cols.iter().enumerate() {
        let mut new = ComplexVector::zeros(vecs.rows());
        for (ii, orig) in originals.iter().enumerate() {
            let w = rot.get(ii, jj);
            for (dst, &src) in new.entries_mut().iter_mut().zip(orig.entries()) {
                *dst += src * w;
            }
        }
        vecs.set_column(col, &new);
    }
}

/// Modified Gram-Schmidt over the selected columns, in place.
fn orthonormalize_columns<T: Scalar>(m: &mut ComplexMatrix<T>, cols: &[usize]) {
    for (idx, &j) in cols.iter().enumerate() {
        let mut col = m.column(j);
        for &i in &cols[..idx] {
            let prev = m.column(i);
            let proj = prev.inner(&col);
            for (c, &p) in col.entries_mut().iter_mut().zip(prev.entries()) {
                *c -= p * proj;
            }
        }
        let col = col.normalized();
        m.set_column(j, &col);
    }
}

/// Deterministic Haar-style random unitary: orthonormalization of a
/// ChaCha-seeded complex Gaussian matrix. Pure function of `(n, seed)`.
pub fn random_unitary<T: Scalar>(n: usize, seed: u64) -> ComplexMatrix<T> {
    assert!(n >= 1, "dimension must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m: ComplexMatrix<T> =
        ComplexMatrix::from_fn(n, n, |_, _| gaussian_complex(&mut rng));
    // Two MGS passes keep the Gram residual at machine level.
    for _ in 0..2 {
        let cols: Vec<usize> = (0..n).collect();
        orthonormalize_columns(&mut m, &cols);
    }
    m
}

fn gaussian_complex<T: Scalar>(rng: &mut ChaCha8Rng) -> C<T> {
    // Box-Muller on uniform draws; u1 is kept strictly positive.
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let angle = std::f64::consts::TAU * u2;
    C::new(T::real(r * angle.cos()), T::real(r * angle.sin()))
}

/// Random unit vector from the same generator family, used by tests and the
/// verification battery.
pub fn random_unit_vector<T: Scalar>(dim: usize, seed: u64) -> ComplexVector<T> {
    assert!(dim >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let v: ComplexVector<T> =
            ComplexVector::new((0..dim).map(|_| gaussian_complex(&mut rng)).collect());
        if v.norm() > T::real(1e-6) {
            return v.normalized();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = ComplexMatrix<f64>;
    type C64 = num_complex::Complex64;

    fn reconstruct_from_eig(phases: &[f64], vecs: &M) -> M {
        // independent oracle: sum of e^{i phi_j} |v_j><v_j|
        let n = vecs.rows();
        let mut out = M::zeros(n, n);
        for (j, &phase) in phases.iter().enumerate() {
            let col = vecs.column(j);
            let factor = C64::from_polar(1.0, phase);
            for r in 0..n {
                for c in 0..n {
                    let v = out.get(r, c) + factor * col.entries()[r] * col.entries()[c].conj();
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    #[test]
    fn eig_unitary_identity() {
        let (phases, vecs) = eig_unitary(&M::identity(3), 1e-8).unwrap();
        assert!(phases.iter().all(|p| p.abs() < 1e-12));
        let rec = reconstruct_from_eig(&phases, &vecs);
        assert!(rec.max_entry_distance(&M::identity(3)) < 1e-12);
    }

    #[test]
    fn eig_unitary_diagonal_pm_one() {
        let u = M::diagonal(&[C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]);
        let (phases, vecs) = eig_unitary(&u, 1e-8).unwrap();
        assert!((phases[0] - 0.0).abs() < 1e-12);
        assert!((phases[1] - std::f64::consts::PI).abs() < 1e-12);
        // standard basis up to order, with positive-real leading entries
        for j in 0..2 {
            let col = vecs.column(j);
            let mags: Vec<f64> = col.entries().iter().map(|c| c.norm()).collect();
            assert!((mags[j] - 1.0).abs() < 1e-12);
            assert!(mags[1 - j] < 1e-12);
            assert!(col.entries()[j].re > 0.0);
        }
    }

    #[test]
    fn eig_unitary_reconstructs_random() {
        let u: M = random_unitary(4, 7);
        let (phases, vecs) = eig_unitary(&u, 1e-8).unwrap();
        let rec = reconstruct_from_eig(&phases, &vecs);
        assert!(operator_distance(&rec, &u).unwrap() <= 1e-10);
        // phases ascending in (-pi, pi]
        for w in phases.windows(2) {
            assert!(w[0] <= w[1]);
        }
        for &p in &phases {
            assert!(p > -std::f64::consts::PI && p <= std::f64::consts::PI);
        }
    }

    #[test]
    fn eig_unitary_orthonormal_vectors() {
        let u: M = random_unitary(6, 11);
        let (_, vecs) = eig_unitary(&u, 1e-8).unwrap();
        let gram = vecs.adjoint().matmul(&vecs);
        assert!(gram.max_entry_distance(&M::identity(6)) <= 1e-10);
    }

    #[test]
    fn eig_unitary_handles_opposite_phase_pairs() {
        // cos-degenerate, sin-split spectrum: phases +a and -a
        let a = 0.3;
        let d = M::diagonal(&[C64::from_polar(1.0, a), C64::from_polar(1.0, -a)]);
        let w: M = random_unitary(2, 5);
        let u = w.matmul(&d).matmul(&w.adjoint());
        let (phases, vecs) = eig_unitary(&u, 1e-8).unwrap();
        assert!((phases[0] + a).abs() < 1e-10);
        assert!((phases[1] - a).abs() < 1e-10);
        let rec = reconstruct_from_eig(&phases, &vecs);
        assert!(operator_distance(&rec, &u).unwrap() <= 1e-10);
    }

    #[test]
    fn eig_unitary_near_degenerate_pairs() {
        // pairs symmetric about 0 stress the cosine split, about pi/2 both
        // splits at once (cos and sin gaps quadratic, eigenvalue gap
        // linear), and a generic center stresses neither
        let half_pi = std::f64::consts::FRAC_PI_2;
        for center in [0.0, half_pi, -half_pi, 2.2] {
            for gap in [1e-5, 3e-6, 3e-7] {
                let d = M::diagonal(&[
                    C64::from_polar(1.0, center - gap),
                    C64::from_polar(1.0, center + gap),
                    C64::from_polar(1.0, center + 2.0),
                ]);
                let w: M = random_unitary(3, 23);
                let u = w.matmul(&d).matmul(&w.adjoint());
                let (phases, vecs) = eig_unitary(&u, 1e-8).unwrap();
                let rec = reconstruct_from_eig(&phases, &vecs);
                let err = operator_distance(&rec, &u).unwrap();
                assert!(err <= 1e-10, "center {center} gap {gap}: residual {err}");
            }
        }
    }

    #[test]
    fn eig_unitary_rejects_non_unitary() {
        let m = M::from_rows(vec![
            vec![C64::new(1.0, 0.0), C64::new(0.5, 0.0)],
            vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        ]);
        assert!(matches!(
            eig_unitary(&m, 1e-8),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn operator_distance_basics() {
        let i2 = M::identity(2);
        assert_eq!(operator_distance(&i2, &i2).unwrap(), 0.0);
        let a = M::diagonal(&[C64::new(1.0, 0.0), C64::new(1.0, 0.0)]);
        let b = M::diagonal(&[C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]);
        assert!((operator_distance(&a, &b).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn operator_distance_perturbed_unitary() {
        let u: M = random_unitary(4, 3);
        let eps = 1e-6;
        let perturbed = M::from_fn(4, 4, |i, j| {
            u.get(i, j)
                + if i == j {
                    C64::new(eps, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
        });
        let d = operator_distance(&u, &perturbed).unwrap();
        assert!((d - eps).abs() <= 1e-12);
    }

    #[test]
    fn operator_distance_shape_mismatch() {
        let a = M::identity(2);
        let b = M::identity(3);
        assert!(matches!(
            operator_distance(&a, &b),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn random_unitary_is_deterministic_and_unitary() {
        let a: M = random_unitary(4, 7);
        let b: M = random_unitary(4, 7);
        assert_eq!(a, b);
        let c: M = random_unitary(6, 11);
        // explicit Gram oracle
        let gram = c.adjoint().matmul(&c);
        let frob_dev = gram.sub(&M::identity(6)).unwrap().frobenius_norm();
        assert!(frob_dev <= 1e-12);
        assert!(c.unitarity_deviation() <= 1e-12);
    }

    #[test]
    fn random_unitary_scalar_case() {
        let u: M = random_unitary(1, 42);
        assert!((u.get(0, 0).norm() - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn jacobi_matches_known_hermitian() {
        // [[2, i],[-i, 2]] has eigenvalues 1 and 3
        let h = M::from_rows(vec![
            vec![C64::new(2.0, 0.0), C64::new(0.0, 1.0)],
            vec![C64::new(0.0, -1.0), C64::new(2.0, 0.0)],
        ]);
        let (vals, vecs) = eig_hermitian(&h);
        assert!((vals[0] - 1.0).abs() < 1e-13);
        assert!((vals[1] - 3.0).abs() < 1e-13);
        for (j, &val) in vals.iter().enumerate() {
            let col = vecs.column(j);
            let hv = h.matvec(&col);
            let scaled = col.scale(C64::new(val, 0.0));
            assert!(hv.max_entry_distance(&scaled) < 1e-13);
        }
    }
}
