//! Time-energy performance accounting for schedules.
//!
//! The index `J = lambda * t_f + E` trades terminal time against control
//! energy `E = integral of sum |u_m|^2`, with `lambda > 0` the cost ratio.
//! For a fixed rotation program executed at constant amplitude `L`, the
//! index `J(L) = (lambda / L + L) * sum|gamma|` is minimized at
//! `L = sqrt(lambda)`, where `J = 2 lambda t_f` and `E = lambda t_f`; the
//! product `t_f * E = (sum|gamma|)^2` is independent of `lambda`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::schedule::{AmplitudeRule, Schedule};
use crate::transfer::{compress_concurrent, to_schedule, GroupedSequence, RotationSequence};

/// Cost report for one schedule at one `lambda`, together with the
/// dimension-only worst-case bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeEnergyReport<T> {
    /// Time/energy cost ratio used for the evaluation.
    pub lambda: T,
    /// Total schedule duration.
    pub t_f: T,
    /// Control energy.
    pub energy: T,
    /// Performance index, exactly `lambda * t_f + energy`.
    pub index: T,
    /// Worst-case duration bound for the execution mode of the schedule.
    pub t_f_bound: T,
    /// Worst-case optimal index bound `sqrt(lambda) (6N - 7) pi`.
    pub index_bound: T,
    /// Worst-case optimal energy bound, half the index bound.
    pub energy_bound: T,
    /// Time-energy product `t_f * energy`.
    pub product: T,
    /// Worst-case product bound `(6N - 7)^2 pi^2 / 4`.
    pub product_bound: T,
}

fn six_n_minus_7<T: Scalar>(n: usize) -> T {
    T::real(6.0 * n as f64 - 7.0)
}

/// Worst-case sequential duration `(6N - 7) pi / (2L)`.
pub fn sequential_time_bound<T: Scalar>(n: usize, l: T) -> T {
    six_n_minus_7::<T>(n) * T::PI() / (T::real(2.0) * l)
}

/// Worst-case concurrent duration `(2N + 3) pi / (2L)`.
pub fn concurrent_time_bound<T: Scalar>(n: usize, l: T) -> T {
    T::real(2.0 * n as f64 + 3.0) * T::PI() / (T::real(2.0) * l)
}

/// Evaluates duration, energy, and index of a schedule at `lambda`, filling
/// the dimension-only bounds alongside.
pub fn evaluate_cost<T: Scalar>(s: &Schedule<T>, lambda: T) -> Result<TimeEnergyReport<T>> {
    check_lambda(lambda)?;
    let t_f = s.total_duration();
    let mut energy = T::zero();
    for step in s.steps() {
        let power: T = step
            .pulses()
            .iter()
            .map(|p| p.amplitude * p.amplitude)
            .fold(T::zero(), |a, b| a + b);
        energy += power * step.duration();
    }
    let index = lambda * t_f + energy;
    let l_ref = s.max_amplitude().unwrap_or_else(|| lambda.sqrt());
    let l_ref = if l_ref > T::zero() {
        l_ref
    } else {
        lambda.sqrt()
    };
    let root = lambda.sqrt();
    let pi = T::PI();
    Ok(TimeEnergyReport {
        lambda,
        t_f,
        energy,
        index,
        t_f_bound: sequential_time_bound(s.dim(), l_ref),
        index_bound: root * six_n_minus_7::<T>(s.dim()) * pi,
        energy_bound: root * six_n_minus_7::<T>(s.dim()) * pi / T::real(2.0),
        product: t_f * energy,
        product_bound: product_bound::<T>(s.dim()),
    })
}

/// The amplitude minimizing the index: `sqrt(lambda)`.
pub fn optimal_amplitude<T: Scalar>(lambda: T) -> Result<T> {
    check_lambda(lambda)?;
    Ok(lambda.sqrt())
}

/// Duration of strictly sequential execution at amplitude `L`:
/// `sum |gamma_k| / L` over the rotation program.
pub fn sequential_time<T: Scalar>(seq: &RotationSequence<T>, l: T) -> T {
    assert!(l > T::zero(), "amplitude must be positive");
    seq.total_angle() / l
}

/// Duration with the leading and trailing phase blocks run concurrently:
/// the two blocks contribute their largest angle each, everything else adds
/// up as in sequential execution.
pub fn concurrent_time<T: Scalar>(seq: &RotationSequence<T>, l: T) -> T {
    assert!(l > T::zero(), "amplitude must be positive");
    let grouped = compress_concurrent(seq);
    grouped
        .steps()
        .iter()
        .map(|step| {
            step.iter()
                .map(|r| r.angle().abs())
                .fold(T::zero(), T::max)
        })
        .fold(T::zero(), |a, b| a + b)
        / l
}

/// The lambda-independent product `t_f * E = (sum |gamma_k|)^2` reached at
/// the optimal amplitude under sequential execution.
pub fn time_energy_product<T: Scalar>(seq: &RotationSequence<T>) -> T {
    let total = seq.total_angle();
    total * total
}

/// Worst-case product bound `(6N - 7)^2 pi^2 / 4`.
pub fn product_bound<T: Scalar>(n: usize) -> T {
    let b = six_n_minus_7::<T>(n) * T::PI() / T::real(2.0);
    b * b
}

/// Cost of the concurrent execution at `lambda`: phase blocks share the
/// duration `max|phi| / sqrt(lambda)` with amplitudes scaled down to
/// `phi_n / t`, population pulses run at `sqrt(lambda)`. Never worse than
/// the sequential index at the same `lambda`.
pub fn concurrent_cost<T: Scalar>(
    seq: &RotationSequence<T>,
    lambda: T,
) -> Result<TimeEnergyReport<T>> {
    check_lambda(lambda)?;
    let grouped = compress_concurrent(seq);
    let schedule = to_schedule(&grouped, AmplitudeRule::TimeEnergyOptimal(lambda), false)?;
    let mut report = evaluate_cost(&schedule, lambda)?;
    report.t_f_bound = concurrent_time_bound(seq.dim(), lambda.sqrt());
    Ok(report)
}

/// Sequential-execution cost at the optimal amplitude, for comparisons.
pub fn sequential_cost<T: Scalar>(
    seq: &RotationSequence<T>,
    lambda: T,
) -> Result<TimeEnergyReport<T>> {
    check_lambda(lambda)?;
    let grouped = GroupedSequence::sequential(seq);
    let schedule = to_schedule(&grouped, AmplitudeRule::TimeEnergyOptimal(lambda), false)?;
    evaluate_cost(&schedule, lambda)
}

fn check_lambda<T: Scalar>(lambda: T) -> Result<()> {
    if lambda <= T::zero() {
        Err(Error::NonpositiveLambda(lambda.as_f64()))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::controls::ControlChannel;
    use crate::numerics::{random_unit_vector, ComplexVector};
    use crate::schedule::{Family, Pulse, ScheduleMeta, Step};
    use crate::transfer::synthesize_transfer;
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_PI_2, PI};

    type V = ComplexVector<f64>;

    #[test]
    fn single_pulse_arithmetic() {
        let s = Schedule::new(
            2,
            vec![Step::single(Pulse {
                channel: ControlChannel::y(1, 2).unwrap(),
                amplitude: 2.0,
                duration: PI / 4.0,
            })],
            ScheduleMeta::default(),
        )
        .unwrap();
        let r = evaluate_cost(&s, 4.0).unwrap();
        assert!((r.t_f - PI / 4.0).abs() < 1e-15);
        assert!((r.energy - PI).abs() < 1e-15);
        assert!((r.index - 2.0 * PI).abs() < 1e-15);
        assert!((r.product - r.t_f * r.energy).abs() < 1e-15);
    }

    #[test]
    fn empty_schedule_is_free() {
        let s = Schedule::<f64>::empty(4);
        let r = evaluate_cost(&s, 0.7).unwrap();
        assert_eq!(r.t_f, 0.0);
        assert_eq!(r.energy, 0.0);
        assert_eq!(r.index, 0.0);
    }

    #[test]
    fn two_level_transfer_at_optimum() {
        let seq =
            synthesize_transfer(&V::basis(2, 1), &V::basis(2, 2), Family::YZ, true).unwrap();
        let r = sequential_cost(&seq, 1.0).unwrap();
        assert!((r.t_f - FRAC_PI_2).abs() < 1e-14);
        assert!((r.index - PI).abs() < 1e-14);
        assert!((r.index - 2.0 * r.lambda * r.t_f).abs() < 1e-14);
    }

    #[test]
    fn optimal_amplitude_closed_form() {
        assert_eq!(optimal_amplitude(4.0).unwrap(), 2.0);
        assert_eq!(optimal_amplitude(1.0).unwrap(), 1.0);
        assert_eq!(optimal_amplitude(0.25).unwrap(), 0.5);
        assert!(matches!(
            optimal_amplitude(0.0),
            Err(Error::NonpositiveLambda(_))
        ));
        assert!(matches!(
            optimal_amplitude(-1.0),
            Err(Error::NonpositiveLambda(_))
        ));
    }

    #[test]
    fn sequential_time_examples() {
        let seq =
            synthesize_transfer(&V::basis(2, 1), &V::basis(2, 2), Family::YZ, false).unwrap();
        assert!((sequential_time(&seq, 1.0) - FRAC_PI_2).abs() < 1e-14);

        let cs = V::new(vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.5),
            Complex64::new(0.5, 0.5),
        ]);
        let seq3 = synthesize_transfer(&V::basis(3, 1), &cs, Family::YZ, false).unwrap();
        let direct: f64 = seq3.rotations().iter().map(|r| r.angle().abs()).sum();
        assert!((sequential_time(&seq3, 1.0) - direct).abs() < 1e-14);
        assert!(sequential_time(&seq3, 1.0) <= 11.0 * PI / 2.0);
        assert!((sequential_time_bound::<f64>(3, 1.0) - 11.0 * PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn concurrent_time_formula() {
        // phases (pi, 0) initial and (pi/2, 0) target, zero theta budget
        let a = 0.7f64;
        let c0 = V::new(vec![
            Complex64::new(a.cos(), 0.0),
            Complex64::new(-a.sin(), 0.0),
            Complex64::new(0.0, 0.0),
        ]);
        let cs = V::new(vec![
            Complex64::new(a.cos(), 0.0),
            Complex64::new(0.0, a.sin()),
            Complex64::new(0.0, 0.0),
        ]);
        let seq = synthesize_transfer(&c0, &cs, Family::YZ, false).unwrap();
        let expected = (PI + FRAC_PI_2) / 2.0;
        assert!((concurrent_time(&seq, 2.0) - expected).abs() < 1e-12);
        // matches the duration of the concurrent schedule
        let grouped = compress_concurrent(&seq);
        let sched = to_schedule(&grouped, AmplitudeRule::UniformL(2.0), false).unwrap();
        assert!((sched.total_duration() - expected).abs() < 1e-12);
    }

    #[test]
    fn concurrent_never_slower_sequential_never_faster() {
        for seed in 0..8u64 {
            let c0: V = random_unit_vector(6, 500 + seed);
            let cs: V = random_unit_vector(6, 550 + seed);
            let seq = synthesize_transfer(&c0, &cs, Family::YZ, false).unwrap();
            let l = 1.3;
            assert!(concurrent_time(&seq, l) <= sequential_time(&seq, l) + 1e-14);
            assert!(concurrent_time(&seq, l) <= concurrent_time_bound(6, l));
            assert!(sequential_time(&seq, l) <= sequential_time_bound(6, l));
        }
    }

    #[test]
    fn product_is_lambda_free_and_bounded() {
        let seq =
            synthesize_transfer(&V::basis(2, 1), &V::basis(2, 2), Family::YZ, true).unwrap();
        let product = time_energy_product(&seq);
        assert!((product - PI * PI / 4.0).abs() < 1e-13);
        for lambda in [0.1, 1.0, 10.0] {
            let r = sequential_cost(&seq, lambda).unwrap();
            assert!((r.t_f * r.energy - product).abs() / product < 1e-12);
        }
        assert!(product <= product_bound::<f64>(2));

        let c: V = random_unit_vector(4, 3);
        let idseq = synthesize_transfer(&c, &c, Family::YZ, true).unwrap();
        assert_eq!(time_energy_product(&idseq), 0.0);
    }

    #[test]
    fn concurrent_head_block_report() {
        // phases (pi, pi/2) on the head; at lambda = 1 the block runs for
        // pi with amplitudes (1, 0.5), contributing (1 + 0.25) pi of energy
        let c0 = V::new(vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.0, 1.0 / 2.0f64.sqrt()),
        ]);
        let seq = synthesize_transfer(&c0, &V::basis(3, 1), Family::YZ, false).unwrap();
        // head block carries phi^(0) = (pi, pi/2)
        let grouped = compress_concurrent(&seq);
        let head = &grouped.steps()[0];
        let mut mags: Vec<f64> = head.iter().map(|r| r.angle().abs()).collect();
        mags.sort_by(|x, y| y.partial_cmp(x).unwrap());
        assert!((mags[0] - PI).abs() < 1e-12);
        assert!((mags[1] - FRAC_PI_2).abs() < 1e-12);

        let sched = to_schedule(&grouped, AmplitudeRule::TimeEnergyOptimal(1.0), false).unwrap();
        let head_pulses = sched.steps()[0].pulses();
        assert!((head_pulses[0].duration - PI).abs() < 1e-12);
        let mut amps: Vec<f64> = head_pulses.iter().map(|p| p.amplitude.abs()).collect();
        amps.sort_by(|x, y| y.partial_cmp(x).unwrap());
        assert!((amps[0] - 1.0).abs() < 1e-12);
        assert!((amps[1] - 0.5).abs() < 1e-12);
        let head_energy: f64 = head_pulses
            .iter()
            .map(|p| p.amplitude * p.amplitude * p.duration)
            .sum();
        assert!((head_energy - 1.25 * PI).abs() < 1e-12);
    }

    #[test]
    fn concurrent_index_beats_sequential() {
        for seed in 0..8u64 {
            let c0: V = random_unit_vector(5, 700 + seed);
            let cs: V = random_unit_vector(5, 750 + seed);
            let seq = synthesize_transfer(&c0, &cs, Family::YZ, false).unwrap();
            let conc = concurrent_cost(&seq, 1.0).unwrap();
            let seqc = sequential_cost(&seq, 1.0).unwrap();
            assert!(conc.index <= seqc.index + 1e-12);
        }
    }

    #[test]
    fn zero_phase_sequence_concurrent_equals_sequential() {
        let seq = crate::transfer::w_state_sequence::<f64>(6, Family::YZ).unwrap();
        let conc = concurrent_cost(&seq, 2.0).unwrap();
        let seqc = sequential_cost(&seq, 2.0).unwrap();
        assert!((conc.index - seqc.index).abs() < 1e-12);
        assert!((conc.t_f - seqc.t_f).abs() < 1e-12);
    }

    #[test]
    fn grid_optimality() {
        for seed in 0..4u64 {
            let c0: V = random_unit_vector(4, 800 + seed);
            let cs: V = random_unit_vector(4, 850 + seed);
            let seq = synthesize_transfer(&c0, &cs, Family::YZ, false).unwrap();
            let grouped = GroupedSequence::sequential(&seq);
            for lambda in [0.25f64, 1.0, 4.0] {
                let opt = lambda.sqrt();
                let j_opt = evaluate_cost(
                    &to_schedule(&grouped, AmplitudeRule::UniformL(opt), false).unwrap(),
                    lambda,
                )
                .unwrap()
                .index;
                for k in 0..=20 {
                    let l = opt * (0.5 + 0.05 * k as f64);
                    let j = evaluate_cost(
                        &to_schedule(&grouped, AmplitudeRule::UniformL(l), false).unwrap(),
                        lambda,
                    )
                    .unwrap()
                    .index;
                    if k == 10 {
                        assert!((j - j_opt).abs() < 1e-12);
                    } else {
                        assert!(j_opt < j, "lambda {lambda} k {k}: {j_opt} !< {j}");
                    }
                }
                // identities at the optimum
                let r = sequential_cost(&seq, lambda).unwrap();
                assert!((r.index - 2.0 * lambda * r.t_f).abs() <= 1e-12 * r.index.abs());
                assert!((r.energy - lambda * r.t_f).abs() <= 1e-12 * r.energy.abs());
            }
        }
    }

    #[test]
    fn rejects_nonpositive_lambda() {
        let s = Schedule::<f64>::empty(3);
        assert!(matches!(
            evaluate_cost(&s, 0.0),
            Err(Error::NonpositiveLambda(_))
        ));
        let seq = crate::transfer::w_state_sequence::<f64>(3, Family::YZ).unwrap();
        assert!(matches!(
            concurrent_cost(&seq, -2.0),
            Err(Error::NonpositiveLambda(_))
        ));
    }
}
