//! Property tests over randomly generated states, coordinates, and pulse
//! programs.

use bangbang::controls::{rotation_unitary, ControlChannel, Rotation};
use bangbang::hypersphere::{from_hyperspherical, to_hyperspherical, HypersphericalCoords};
use bangbang::num_complex::Complex64;
use bangbang::numerics::ComplexVector;
use bangbang::schedule::{AmplitudeRule, Family, Schedule};
use bangbang::simulator::{fidelity, propagate};
use bangbang::transfer::{compress_concurrent, synthesize_transfer, to_schedule};
use bangbang::{Matrix64, Vector64};

use proptest::prelude::*;

fn unit_vector_strategy(dim: usize) -> impl Strategy<Value = Vector64> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim).prop_filter_map(
        "nonzero vector",
        |parts| {
            let v = ComplexVector::new(
                parts
                    .into_iter()
                    .map(|(re, im)| Complex64::new(re, im))
                    .collect(),
            );
            if v.norm() < 1e-3 {
                None
            } else {
                Some(v.normalized())
            }
        },
    )
}

fn coords_strategy(dim: usize) -> impl Strategy<Value = HypersphericalCoords<f64>> {
    (
        prop::collection::vec(0.0f64..std::f64::consts::FRAC_PI_2, dim - 1),
        prop::collection::vec(-std::f64::consts::PI..std::f64::consts::PI, dim - 1),
    )
        .prop_map(|(theta, phi)| HypersphericalCoords::new(theta, phi).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coords_round_trip(dim in 2usize..10, v in unit_vector_strategy(8)) {
        let v = ComplexVector::new(v.entries()[..dim.min(8)].to_vec());
        prop_assume!(v.norm() > 1e-3);
        let v = v.normalized();
        let lead = v.entries()[0];
        let arg = if lead.norm() == 0.0 { 0.0 } else { lead.arg() };
        let v = v.scale(Complex64::from_polar(1.0, -arg));
        if v.dim() < 2 { return Ok(()); }
        let h = to_hyperspherical(&v).unwrap();
        let back = from_hyperspherical(&h);
        prop_assert!(back.max_entry_distance(&v) <= 1e-10);
    }

    #[test]
    fn from_hyperspherical_always_unit(h in coords_strategy(6)) {
        let v = from_hyperspherical(&h);
        prop_assert!((v.norm() - 1.0).abs() <= 1e-12);
        prop_assert!(v.entries()[0].im == 0.0);
        prop_assert!(v.entries()[0].re >= 0.0);
    }

    #[test]
    fn rotations_compose_to_identity(
        kind in 0usize..3,
        index in 1usize..5,
        gamma in -6.0f64..6.0,
    ) {
        let dim = 6;
        let ch = match kind {
            0 => ControlChannel::z(index, dim).unwrap(),
            1 => ControlChannel::x(index, dim).unwrap(),
            _ => ControlChannel::y(index, dim).unwrap(),
        };
        let r = Rotation::new(ch, gamma);
        let prod = rotation_unitary(&r).matmul(&rotation_unitary(&r.inverse()));
        prop_assert!(prod.max_entry_distance(&Matrix64::identity(dim)) <= 1e-13);
    }

    #[test]
    fn transfer_reaches_target(
        seed_a in 0u64..5000,
        seed_b in 5000u64..10000,
        dim in 2usize..9,
        xz in any::<bool>(),
    ) {
        let c0: Vector64 = bangbang::numerics::random_unit_vector(dim, seed_a);
        let cs: Vector64 = bangbang::numerics::random_unit_vector(dim, seed_b);
        let family = if xz { Family::XZ } else { Family::YZ };
        let seq = synthesize_transfer(&c0, &cs, family, false).unwrap();
        prop_assert_eq!(seq.len(), 4 * dim - 5);
        let f = fidelity(&seq.apply_to(&c0), &cs).unwrap();
        prop_assert!(f >= 1.0 - 1e-10);
    }

    #[test]
    fn schedules_round_trip_through_json(
        seed_a in 0u64..5000,
        seed_b in 5000u64..10000,
        dim in 2usize..7,
        lambda in 0.1f64..10.0,
        nonneg in any::<bool>(),
    ) {
        let c0: Vector64 = bangbang::numerics::random_unit_vector(dim, seed_a);
        let cs: Vector64 = bangbang::numerics::random_unit_vector(dim, seed_b);
        let seq = synthesize_transfer(&c0, &cs, Family::YZ, true).unwrap();
        let sched = to_schedule(
            &compress_concurrent(&seq),
            AmplitudeRule::TimeEnergyOptimal(lambda),
            nonneg,
        )
        .unwrap();
        let reread: Schedule<f64> = Schedule::from_json(&sched.to_json()).unwrap();
        prop_assert_eq!(&sched, &reread);
        // propagation through the reread schedule still hits the target
        let traj = propagate(&reread, &c0).unwrap();
        prop_assert!(fidelity(traj.final_state(), &cs).unwrap() >= 1.0 - 1e-10);
        // nonnegative-time mode must not emit negative amplitudes
        if nonneg {
            for step in reread.steps() {
                for p in step.pulses() {
                    prop_assert!(p.amplitude >= 0.0);
                }
            }
        }
    }
}
