//! Piecewise-constant propagation: the independent verification engine.
//!
//! Schedules have exact step propagators (single-channel rotations in
//! closed form, all-Z concurrent steps as diagonal phase factors), so
//! propagation multiplies exact unitaries instead of integrating an ODE.

use crate::controls::{generator, rotation_unitary, ChannelKind, Rotation};
use crate::error::{Error, Result};
use crate::numerics::{eig_hermitian, ComplexMatrix, ComplexVector};
use crate::scalar::{Scalar, C};
use crate::schedule::{Schedule, Step};

/// The states visited by a schedule, one per step boundary, with the
/// cumulative times (`times[0] = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    states: Vec<ComplexVector<T>>,
    times: Vec<T>,
}

impl<T: Scalar> Trajectory<T> {
    pub fn states(&self) -> &[ComplexVector<T>] {
        &self.states
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn final_state(&self) -> &ComplexVector<T> {
        self.states.last().expect("at least the initial state")
    }
}

/// The exact unitary of one schedule step, `exp(-i t H_step)` with
/// `H_step = sum_pulses L * generator(channel)`.
///
/// Closed form for single pulses and all-Z steps; concurrent non-Z pulses
/// are rejected because the synthesis never commits to them.
pub fn step_unitary<T: Scalar>(step: &Step<T>, dim: usize) -> Result<ComplexMatrix<T>> {
    let pulses = step.pulses();
    match pulses.len() {
        0 => Ok(ComplexMatrix::identity(dim)),
        1 => {
            let p = &pulses[0];
            if p.channel.dim() != dim {
                return Err(Error::DimMismatch {
                    left: p.channel.dim(),
                    right: dim,
                });
            }
            Ok(rotation_unitary(&Rotation::new(p.channel, p.angle())))
        }
        _ => {
            let mut u = ComplexMatrix::identity(dim);
            for p in pulses {
                if p.channel.kind() != ChannelKind::Z {
                    return Err(Error::NonCommutingStep);
                }
                if p.channel.dim() != dim {
                    return Err(Error::DimMismatch {
                        left: p.channel.dim(),
                        right: dim,
                    });
                }
                let i = p.channel.index() - 1;
                let prev = u.get(i, i);
                u.set(i, i, prev * C::from_polar(T::one(), -p.angle()));
            }
            Ok(u)
        }
    }
}

/// Reference propagator for one step via eigendecomposition of the step
/// Hamiltonian; the dual route for validating [`step_unitary`].
pub fn step_unitary_eig<T: Scalar>(step: &Step<T>, dim: usize) -> Result<ComplexMatrix<T>> {
    let pulses = step.pulses();
    if pulses.len() > 1 && pulses.iter().any(|p| p.channel.kind() != ChannelKind::Z) {
        return Err(Error::NonCommutingStep);
    }
    let mut h: ComplexMatrix<T> = ComplexMatrix::zeros(dim, dim);
    for p in pulses {
        let g = generator::<T>(p.channel);
        for r in 0..dim {
            for c in 0..dim {
                let v = h.get(r, c) + g.get(r, c) * p.amplitude;
                h.set(r, c, v);
            }
        }
    }
    let t = step.duration();
    let (vals, vecs) = eig_hermitian(&h);
    let mut u = ComplexMatrix::zeros(dim, dim);
    for (j, &val) in vals.iter().enumerate() {
        let col = vecs.column(j);
        let factor = C::from_polar(T::one(), -val * t);
        for r in 0..dim {
            for c in 0..dim {
                let v = u.get(r, c) + factor * col.entries()[r] * col.entries()[c].conj();
                u.set(r, c, v);
            }
        }
    }
    Ok(u)
}

/// Propagates an initial state through a schedule, recording every
/// intermediate state.
pub fn propagate<T: Scalar>(s: &Schedule<T>, psi0: &ComplexVector<T>) -> Result<Trajectory<T>> {
    if psi0.dim() != s.dim() {
        return Err(Error::DimMismatch {
            left: psi0.dim(),
            right: s.dim(),
        });
    }
    let mut states = Vec::with_capacity(s.step_count() + 1);
    let mut times = Vec::with_capacity(s.step_count() + 1);
    states.push(psi0.clone());
    times.push(T::zero());
    let mut current = psi0.clone();
    let mut t = T::zero();
    for step in s.steps() {
        let u = step_unitary(step, s.dim())?;
        current = u.matvec(&current);
        t += step.duration();
        states.push(current.clone());
        times.push(t);
    }
    Ok(Trajectory { states, times })
}

/// The total unitary a schedule implements (later steps on the left).
pub fn propagate_operator<T: Scalar>(s: &Schedule<T>) -> Result<ComplexMatrix<T>> {
    let mut u = ComplexMatrix::identity(s.dim());
    for step in s.steps() {
        u = step_unitary(step, s.dim())?.matmul(&u);
    }
    Ok(u)
}

/// Global-phase-insensitive overlap `|<a|b>|^2`.
pub fn fidelity<T: Scalar>(a: &ComplexVector<T>, b: &ComplexVector<T>) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(a.inner(b).norm_sqr())
}
