//! Bang-bang realization of arbitrary unitary operators.
//!
//! An `N x N` unitary `U = sum_j e^{i phi_j} |u_j><u_j|` is implemented as
//! `T† D T`, where `D` is a single concurrent block of phase rotations and
//! `T` is a ladder of stage operators built from the hyperspherical
//! coordinates of the eigenvectors: stage `k` (for `k = N` down to `2`)
//! maps the image of one eigenvector onto a basis state, acting only on the
//! trailing `k` levels. Each stage is one concurrent Z block followed by
//! `k - 1` population rotations, for `N(N+1) - 1` steps overall; the
//! conventional Euler-per-Givens route would need `3N(N+1)/2`.

use crate::controls::{ControlChannel, Rotation};
use crate::error::{Error, Result};
use crate::hypersphere::{from_hyperspherical, to_hyperspherical, HypersphericalCoords};
use crate::numerics::{eig_unitary, fix_global_phase, ComplexMatrix, ComplexVector};
use crate::scalar::{Scalar, C};
use crate::schedule::{AmplitudeRule, Family, Schedule, ScheduleMeta};
use crate::transfer::lower_steps_to_schedule;

/// Grouped rotation steps: inner vectors execute concurrently.
pub type RotationSteps<T> = Vec<Vec<Rotation<T>>>;

/// Hyperspherical data of one deflation stage acting on the trailing `k`
/// levels; `theta` and `phi` both have length `k - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct StageCoords<T> {
    coords: HypersphericalCoords<T>,
}

impl<T: Scalar> StageCoords<T> {
    pub fn new(theta: Vec<T>, phi: Vec<T>) -> Result<Self> {
        Ok(Self {
            coords: HypersphericalCoords::new(theta, phi)?,
        })
    }

    pub fn from_coords(coords: HypersphericalCoords<T>) -> Self {
        Self { coords }
    }

    /// Stage size `k`: the number of trailing levels the stage acts on.
    pub fn size(&self) -> usize {
        self.coords.dim()
    }

    pub fn theta(&self) -> &[T] {
        self.coords.theta()
    }

    pub fn phi(&self) -> &[T] {
        self.coords.phi()
    }
}

/// Eigenphases plus per-stage coordinates; `reconstruct` rebuilds the
/// original operator from this data alone.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryFactorization<T> {
    dim: usize,
    eigenphases: Vec<T>,
    stages: Vec<StageCoords<T>>,
}

impl<T: Scalar> UnitaryFactorization<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eigenphases(&self) -> &[T] {
        &self.eigenphases
    }

    /// Stages in application order: sizes `N, N-1, ..., 2`.
    pub fn stages(&self) -> &[StageCoords<T>] {
        &self.stages
    }
}

/// The `k` orthonormal rows generated by one stage's coordinates.
///
/// Row 1 is the hyperspherical vector itself; row `i >= 2` starts with
/// `i - 2` zeros, carries `e^{i phi_(i-2)} sin(theta_(i-1))` (with
/// `phi_0 = 0`), and continues with `-cos(theta_(i-1))` times the truncated
/// sine chain.
pub fn stage_rows<T: Scalar>(sc: &StageCoords<T>) -> Vec<ComplexVector<T>> {
    let k = sc.size();
    let theta = sc.theta();
    let phi = sc.phi();
    let mut rows = Vec::with_capacity(k);
    rows.push(from_hyperspherical(&sc.coords));
    for i in 2..=k {
        let mut entries = vec![C::new(T::zero(), T::zero()); k];
        let lead_phase = if i == 2 {
            T::zero()
        } else {
            phi[i - 3] // phi_(i-2), 1-based
        };
        entries[i - 2] = C::from_polar(theta[i - 2].sin(), lead_phase);
        for p in i..=k {
            let mut radial = theta[i - 2].cos();
            for l in i..p.min(k) {
                radial *= theta[l - 1].sin();
            }
            if p < k {
                radial *= theta[p - 1].cos();
            }
            entries[p - 1] = C::from_polar(radial, phi[p - 2]).scale(-T::one());
        }
        rows.push(ComplexVector::new(entries));
    }
    rows
}

/// The stage operator at full dimension `N`: one concurrent Z block with
/// angles `phi_j` on channels `Z_(N-k+j+1)`, then population rotations
/// `Y_(N-k+j)(-theta_j)` for `j = k-1` down to `1`. Returned both as the
/// grouped rotation steps and as the assembled matrix. It maps the embedded
/// stage rows onto basis states (`row_1 -> |N-k+1>`, `row_j -> -|N-k+j>`)
/// and is the identity on the leading `N - k` levels.
pub fn stage_operator<T: Scalar>(
    sc: &StageCoords<T>,
    n: usize,
) -> Result<(RotationSteps<T>, ComplexMatrix<T>)> {
    let k = sc.size();
    if k > n {
        return Err(Error::DimMismatch { left: k, right: n });
    }
    let steps = stage_steps(sc, n, false)?;
    let mut u = ComplexMatrix::identity(n);
    for step in &steps {
        for r in step {
            u = crate::controls::rotation_unitary(r).matmul(&u);
        }
    }
    Ok((steps, u))
}

/// The grouped rotation steps of one stage; `inverted` emits the adjoint
/// (reversed order, negated angles).
fn stage_steps<T: Scalar>(
    sc: &StageCoords<T>,
    n: usize,
    inverted: bool,
) -> Result<RotationSteps<T>> {
    let k = sc.size();
    let base = n - k;
    let z_block: Vec<Rotation<T>> = (1..k)
        .map(|j| {
            Ok(Rotation::new(
                ControlChannel::z(base + j + 1, n)?,
                if inverted { -sc.phi()[j - 1] } else { sc.phi()[j - 1] },
            ))
        })
        .collect::<Result<_>>()?;
    let ys: Vec<Rotation<T>> = (1..k)
        .rev()
        .map(|j| {
            Ok(Rotation::new(
                ControlChannel::y(base + j, n)?,
                if inverted { sc.theta()[j - 1] } else { -sc.theta()[j - 1] },
            ))
        })
        .collect::<Result<_>>()?;

    let mut steps: Vec<Vec<Rotation<T>>> = Vec::with_capacity(k);
    if inverted {
        for r in ys.into_iter().rev() {
            steps.push(vec![r]);
        }
        steps.push(z_block);
    } else {
        steps.push(z_block);
        for r in ys {
            steps.push(vec![r]);
        }
    }
    Ok(steps)
}

/// Factors a unitary by hyperspherical deflation of its eigenbasis.
///
/// For `k = N` down to `2`, the current image of eigenvector `N - k + 1` is
/// restricted to the trailing `k` coordinates, its coordinates extracted,
/// and the resulting stage operator applied to all remaining images. A
/// post-stage image that fails to land on its basis state signals a
/// convention bug, not an input problem.
pub fn factorize_unitary<T: Scalar>(u: &ComplexMatrix<T>) -> Result<UnitaryFactorization<T>> {
    u.check_unitary(T::real(1e-10))?;
    let n = u.rows();
    if n < 2 {
        return Err(Error::DimensionTooSmall { dim: n, min: 2 });
    }
    let (eigenphases, vecs) = eig_unitary(u, T::real(crate::numerics::DEFAULT_CLUSTER_TOL))?;
    let mut images: Vec<ComplexVector<T>> = (0..n).map(|j| vecs.column(j)).collect();
    let residual_tol = T::real(1e-8);

    let mut stages = Vec::with_capacity(n - 1);
    for k in (2..=n).rev() {
        let idx = n - k;
        let leading: T = images[idx].entries()[..idx]
            .iter()
            .map(|e| e.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt();
        if leading > residual_tol {
            return Err(Error::DeflationFailure {
                stage: k,
                residual: leading.as_f64(),
            });
        }
        let mut sub = ComplexVector::new(images[idx].entries()[idx..].to_vec());
        fix_global_phase(&mut sub, T::real(1e-12));
        let stage = StageCoords::from_coords(to_hyperspherical(&sub.normalized())?);
        let (_, op) = stage_operator(&stage, n)?;
        for image in images.iter_mut().skip(idx) {
            *image = op.matvec(image);
        }
        let residual = basis_residual(&images[idx], idx);
        if residual > residual_tol {
            return Err(Error::DeflationFailure {
                stage: k,
                residual: residual.as_f64(),
            });
        }
        stages.push(stage);
    }
    // the last image must have been carried onto |N> by the earlier stages
    let residual = basis_residual(&images[n - 1], n - 1);
    if residual > residual_tol {
        return Err(Error::DeflationFailure {
            stage: 1,
            residual: residual.as_f64(),
        });
    }

    Ok(UnitaryFactorization {
        dim: n,
        eigenphases,
        stages,
    })
}

/// How far `v` is from the basis state at `index`, ignoring phases.
fn basis_residual<T: Scalar>(v: &ComplexVector<T>, index: usize) -> T {
    v.entries()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            if i == index {
                (e.norm() - T::one()).abs()
            } else {
                e.norm()
            }
        })
        .fold(T::zero(), T::max)
}

/// Rebuilds the operator from its factorization: `T† D T` with
/// `T = U_2 U_3 ... U_N` (stage `N` applied first) and the central diagonal
/// `D = diag(e^{i phi_n})`, realized by Z rotations with angles `-phi_n`.
pub fn reconstruct<T: Scalar>(f: &UnitaryFactorization<T>) -> ComplexMatrix<T> {
    let n = f.dim;
    let mut t = ComplexMatrix::identity(n);
    for stage in &f.stages {
        let (_, op) = stage_operator(stage, n).expect("valid stage");
        t = op.matmul(&t);
    }
    let phases: Vec<C<T>> = f
        .eigenphases
        .iter()
        .map(|&p| C::from_polar(T::one(), p))
        .collect();
    let central = ComplexMatrix::diagonal(&phases);
    t.adjoint().matmul(&central).matmul(&t)
}

/// Lowers a factorization to an executable schedule: per stage one
/// concurrent Z step plus its population steps, the central block as one
/// concurrent step, and the mirrored, angle-negated stages for `T†`.
/// Unpruned, the step count is exactly `N(N+1) - 1`; with `prune`,
/// zero-angle rotations and empty steps are dropped.
pub fn factorization_to_schedule<T: Scalar>(
    f: &UnitaryFactorization<T>,
    rule: AmplitudeRule<T>,
    prune: bool,
) -> Result<Schedule<T>> {
    let n = f.dim;
    let mut steps: RotationSteps<T> = Vec::with_capacity(n * (n + 1) - 1);
    for stage in &f.stages {
        steps.extend(stage_steps(stage, n, false)?);
    }
    let central: Vec<Rotation<T>> = (1..=n)
        .map(|level| {
            Ok(Rotation::new(
                ControlChannel::z(level, n)?,
                -f.eigenphases[level - 1],
            ))
        })
        .collect::<Result<_>>()?;
    steps.push(central);
    for stage in f.stages.iter().rev() {
        steps.extend(stage_steps(stage, n, true)?);
    }

    if prune {
        let eps = T::real(crate::transfer::PRUNE_EPS);
        steps = steps
            .into_iter()
            .map(|step| {
                step.into_iter()
                    .filter(|r| r.angle().abs() >= eps)
                    .collect::<Vec<_>>()
            })
            .filter(|step: &Vec<Rotation<T>>| !step.is_empty())
            .collect();
    }

    let meta = ScheduleMeta {
        family: Some(Family::YZ),
        lambda: rule.lambda().map(|l| l.as_f64()),
        amplitude_rule: rule.rule_name().into(),
    };
    lower_steps_to_schedule(n, &steps, rule, false, meta)
}

/// Step count of this construction: `N(N+1) - 1`.
pub fn bang_bang_step_count(n: usize) -> usize {
    n * (n + 1) - 1
}

/// Step count of the conventional route (Euler decomposition of each of
/// the `N(N+1)/2` two-level rotations): `3N(N+1)/2`, with no concurrent
/// execution possible since the rotation axes alternate.
pub fn euler_givens_step_count(n: usize) -> usize {
    3 * n * (n + 1) / 2
}
