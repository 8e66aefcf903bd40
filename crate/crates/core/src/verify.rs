//! Seeded self-verification battery.
//!
//! Runs the library's mathematical contracts (round trips, transfer
//! fidelities, cost identities, bounds, factorization reconstruction,
//! simulator cross-checks) with deterministic seeding and reports the
//! worst observed metric per property. The CLI `verify` command wraps this.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::controls::{rotation_unitary, ControlChannel, Rotation};
use crate::hypersphere::{from_hyperspherical, to_hyperspherical, HypersphericalCoords};
use crate::numerics::{
    eig_unitary, operator_distance, random_unit_vector, random_unitary, ComplexMatrix,
    ComplexVector,
};
use crate::schedule::{AmplitudeRule, Family, Pulse, Step};
use crate::simulator::{fidelity, propagate, propagate_operator, step_unitary, step_unitary_eig};
use crate::timeenergy::{
    concurrent_cost, concurrent_time, concurrent_time_bound, product_bound, sequential_cost,
    sequential_time, sequential_time_bound, time_energy_product,
};
use crate::transfer::{
    compress_concurrent, synthesize_transfer, to_schedule, GroupedSequence, RotationSequence,
};
use crate::unitary::{
    bang_bang_step_count, euler_givens_step_count, factorization_to_schedule, factorize_unitary,
    reconstruct, stage_operator, stage_rows, StageCoords,
};

type V = ComplexVector<f64>;
type M = ComplexMatrix<f64>;

/// Outcome of one verified property.
#[derive(Debug, Clone)]
pub struct PropertyResult {
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed metric across all cases (smaller is better).
    pub worst: f64,
    /// The bound the metric was held against, after scaling.
    pub threshold: f64,
    pub cases: usize,
}

/// Battery configuration; `tolerance_scale` is a test hook that tightens
/// (`< 1`) or loosens (`> 1`) every threshold, `cases_per_dim` sizes the
/// per-dimension sample sets.
#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub seed: u64,
    pub tolerance_scale: f64,
    pub cases_per_dim: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            tolerance_scale: 1.0,
            cases_per_dim: 8,
        }
    }
}

struct Battery {
    seed: u64,
    scale: f64,
    cases_per_dim: usize,
    results: Vec<PropertyResult>,
}

impl Battery {
    fn record(&mut self, name: &'static str, worst: f64, threshold: f64, cases: usize) {
        let threshold = threshold * self.scale;
        self.results.push(PropertyResult {
            name,
            passed: worst <= threshold,
            worst,
            threshold,
            cases,
        });
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e3779b97f4a7c15))
    }

    /// Scales a baseline case count by the configured `cases_per_dim`.
    fn scaled(&self, base: usize) -> usize {
        (base * self.cases_per_dim / 8).max(1)
    }
}

/// Runs the full battery and returns one result per property.
pub fn run_battery(config: VerifyConfig) -> Vec<PropertyResult> {
    let mut b = Battery {
        seed: config.seed,
        scale: config.tolerance_scale,
        cases_per_dim: config.cases_per_dim.max(1),
        results: Vec::new(),
    };
    hypersphere_round_trip(&mut b);
    hypersphere_reverse_round_trip(&mut b);
    rotation_inverse(&mut b);
    rotation_vs_exponential(&mut b);
    transfer_fidelity(&mut b);
    transfer_counts(&mut b);
    pruning_invariance(&mut b);
    grid_optimality(&mut b);
    optimal_identities(&mut b);
    lambda_invariance(&mut b);
    bound_suite(&mut b);
    stage_identities(&mut b);
    unitary_reconstruction(&mut b);
    eig_reconstruction(&mut b);
    simulator_dual_path(&mut b);
    pulse_area_invariance(&mut b);
    norm_preservation(&mut b);
    step_count_comparison(&mut b);
    b.results
}

/// Renders the deterministic textual report (identical bytes for identical
/// seeds).
pub fn render_report(results: &[PropertyResult]) -> String {
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in results {
        out.push_str(&format!(
            "{} {:width$}  worst {:>12.5e}  threshold {:>10.3e}  cases {}\n",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.worst,
            r.threshold,
            r.cases,
            width = width
        ));
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    out.push_str(&format!(
        "{} of {} properties passed\n",
        results.len() - failed,
        results.len()
    ));
    out
}

pub fn all_passed(results: &[PropertyResult]) -> bool {
    results.iter().all(|r| r.passed)
}

fn strip_lead_phase(v: &V) -> V {
    let arg = v.entries()[0].arg();
    v.scale(Complex::from_polar(1.0, -arg))
}

fn hypersphere_round_trip(b: &mut Battery) {
    let mut worst = 0.0f64;
    let mut cases = 0;
    let per_dim = b.scaled(40) as u64;
    for dim in 2..=16usize {
        for k in 0..per_dim {
            let v = strip_lead_phase(&random_unit_vector(dim, b.seed ^ (dim as u64 * 977 + k)));
            let h = to_hyperspherical(&v).expect("valid input");
            let back = from_hyperspherical(&h);
            worst = worst.max(back.max_entry_distance(&v));
            cases += 1;
        }
    }
    b.record("hypersphere-round-trip", worst, 1e-10, cases);
}

fn hypersphere_reverse_round_trip(b: &mut Battery) {
    let mut rng = b.rng(2);
    let mut worst = 0.0f64;
    let mut cases = 0;
    let per_dim = b.scaled(20);
    for dim in 2..=16usize {
        for _ in 0..per_dim {
            let theta: Vec<f64> = (0..dim - 1)
                .map(|_| rng.random_range(0.05..(std::f64::consts::FRAC_PI_2 - 0.05)))
                .collect();
            let phi: Vec<f64> = (0..dim - 1)
                .map(|_| rng.random_range(-3.1..3.1))
                .collect();
            let h = HypersphericalCoords::new(theta, phi).expect("valid");
            let h2 = to_hyperspherical(&from_hyperspherical(&h)).expect("unit");
            worst = worst.max(h.max_angle_distance(&h2));
            cases += 1;
        }
    }
    b.record("hypersphere-reverse-round-trip", worst, 1e-10, cases);
}

fn random_channel(rng: &mut ChaCha8Rng, dim: usize) -> ControlChannel {
    match rng.random_range(0..3) {
        0 => ControlChannel::z(rng.random_range(1..=dim), dim).expect("valid"),
        1 => ControlChannel::x(rng.random_range(1..dim), dim).expect("valid"),
        _ => ControlChannel::y(rng.random_range(1..dim), dim).expect("valid"),
    }
}

fn rotation_inverse(b: &mut Battery) {
    let mut rng = b.rng(3);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let dim = rng.random_range(2..=8);
        let r = Rotation::new(random_channel(&mut rng, dim), rng.random_range(-6.0..6.0));
        let prod = rotation_unitary(&r).matmul(&rotation_unitary(&r.inverse()));
        worst = worst.max(prod.max_entry_distance(&M::identity(dim)));
    }
    b.record("rotation-inverse", worst, 1e-14, 100);
}

fn rotation_vs_exponential(b: &mut Battery) {
    let mut rng = b.rng(4);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let dim = rng.random_range(2..=8);
        let ch = random_channel(&mut rng, dim);
        let amp: f64 = rng.random_range(0.2..3.0);
        let dur: f64 = rng.random_range(0.0..3.0);
        let step = Step::single(Pulse {
            channel: ch,
            amplitude: amp,
            duration: dur,
        });
        let a = step_unitary(&step, dim).expect("valid");
        let e = step_unitary_eig(&step, dim).expect("valid");
        worst = worst.max(a.max_entry_distance(&e));
    }
    b.record("rotation-vs-exponential", worst, 1e-12, 100);
}

fn transfer_cases(b: &Battery, weight: usize) -> Vec<(V, V)> {
    let mut out = Vec::new();
    let per_dim = b.scaled(weight) as u64;
    for dim in 2..=10usize {
        for k in 0..per_dim {
            let c0 = random_unit_vector(dim, b.seed ^ (dim as u64 * 7919 + 2 * k));
            let cs = random_unit_vector(dim, b.seed ^ (dim as u64 * 7919 + 2 * k + 1));
            out.push((c0, cs));
        }
    }
    out
}

fn transfer_fidelity(b: &mut Battery) {
    let cases = transfer_cases(b, 8);
    let mut worst = 0.0f64;
    let mut count = 0;
    for (c0, cs) in &cases {
        for family in [Family::YZ, Family::XZ] {
            let seq = synthesize_transfer(c0, cs, family, false).expect("valid");
            let f_seq = fidelity(&seq.apply_to(c0), cs).expect("dims");
            worst = worst.max(1.0 - f_seq);
            // concurrent execution through the propagator
            let sched = to_schedule(
                &compress_concurrent(&seq),
                AmplitudeRule::TimeEnergyOptimal(1.0),
                false,
            )
            .expect("schedulable");
            let traj = propagate(&sched, c0).expect("propagates");
            let f_conc = fidelity(traj.final_state(), cs).expect("dims");
            worst = worst.max(1.0 - f_conc);
            count += 2;
        }
    }
    b.record("transfer-fidelity", worst, 1e-10, count);
}

fn transfer_counts(b: &mut Battery) {
    let cases = transfer_cases(b, 3);
    let mut mismatches = 0usize;
    let mut count = 0;
    for (c0, cs) in &cases {
        let n = c0.dim();
        let seq = synthesize_transfer(c0, cs, Family::YZ, false).expect("valid");
        if seq.len() != 4 * n - 5 {
            mismatches += 1;
        }
        if compress_concurrent(&seq).step_count() != 2 * n - 1 {
            mismatches += 1;
        }
        count += 2;
    }
    b.record("transfer-counts", mismatches as f64, 0.0, count);
}

fn pruning_invariance(b: &mut Battery) {
    let cases = transfer_cases(b, 3);
    let mut worst = 0.0f64;
    for (c0, cs) in &cases {
        let full = synthesize_transfer(c0, cs, Family::YZ, false).expect("valid");
        let pruned = full.pruned();
        let f_full = fidelity(&full.apply_to(c0), cs).expect("dims");
        let f_pruned = fidelity(&pruned.apply_to(c0), cs).expect("dims");
        worst = worst.max((f_full - f_pruned).abs());
    }
    b.record("pruning-invariance", worst, 1e-12, cases.len());
}

fn grid_optimality(b: &mut Battery) {
    let cases = transfer_cases(b, 2);
    let mut worst = 0.0f64; // positive iff some grid point beats sqrt(lambda)
    let mut count = 0;
    for (c0, cs) in cases.iter().take(12) {
        let seq = synthesize_transfer(c0, cs, Family::YZ, false).expect("valid");
        let grouped = GroupedSequence::sequential(&seq);
        for lambda in [0.25, 1.0, 4.0] {
            let j_at = |l: f64| {
                let sched = to_schedule(&grouped, AmplitudeRule::UniformL(l), false)
                    .expect("schedulable");
                crate::timeenergy::evaluate_cost(&sched, lambda)
                    .expect("valid lambda")
                    .index
            };
            let opt = lambda.sqrt();
            let j_opt = j_at(opt);
            for k in 0..=20 {
                if k == 10 {
                    continue;
                }
                let j = j_at(opt * (0.5 + 0.05 * k as f64));
                worst = worst.max(j_opt - j);
                count += 1;
            }
        }
    }
    b.record("grid-optimality", worst, 0.0, count);
}

fn optimal_identities(b: &mut Battery) {
    let cases = transfer_cases(b, 2);
    let mut worst = 0.0f64;
    let mut count = 0;
    for (c0, cs) in &cases {
        let seq = synthesize_transfer(c0, cs, Family::YZ, false).expect("valid");
        for lambda in [0.25, 1.0, 4.0] {
            let r = sequential_cost(&seq, lambda).expect("valid lambda");
            if r.index > 0.0 {
                worst = worst.max((r.index - 2.0 * lambda * r.t_f).abs() / r.index);
                worst = worst.max((r.energy - lambda * r.t_f).abs() / r.energy.max(1e-300));
            }
            count += 1;
        }
    }
    b.record("optimal-identities", worst, 1e-12, count);
}

fn lambda_invariance(b: &mut Battery) {
    let cases = transfer_cases(b, 2);
    let mut worst = 0.0f64;
    for (c0, cs) in &cases {
        let seq = synthesize_transfer(c0, cs, Family::YZ, false).expect("valid");
        let reference = time_energy_product(&seq);
        if reference == 0.0 {
            continue;
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for lambda in [1e-4, 0.1, 1.0, 10.0, 100.0] {
            let r = sequential_cost(&seq, lambda).expect("valid lambda");
            let p = r.t_f * r.energy;
            lo = lo.min(p);
            hi = hi.max(p);
            worst = worst.max((p - reference).abs() / reference);
        }
        worst = worst.max((hi - lo) / reference);
    }
    b.record("lambda-invariance", worst, 1e-9, cases.len());
}

fn bound_suite(b: &mut Battery) {
    let cases = transfer_cases(b, 3);
    let mut worst = f64::NEG_INFINITY; // positive slack means a violated bound
    let mut count = 0;
    for (c0, cs) in &cases {
        let n = c0.dim();
        let seq = synthesize_transfer(c0, cs, Family::YZ, false).expect("valid");
        let l = 1.0;
        worst = worst.max(sequential_time(&seq, l) - sequential_time_bound(n, l));
        worst = worst.max(concurrent_time(&seq, l) - concurrent_time_bound(n, l));
        worst = worst.max(concurrent_time(&seq, l) - sequential_time(&seq, l));
        worst = worst.max(time_energy_product(&seq) - product_bound::<f64>(n));
        let conc = concurrent_cost(&seq, 1.0).expect("valid");
        let seqc = sequential_cost(&seq, 1.0).expect("valid");
        worst = worst.max(conc.index - seqc.index);
        count += 5;
    }
    b.record("bound-suite", worst, 0.0, count);
}

fn stage_identities(b: &mut Battery) {
    let mut rng = b.rng(7);
    let mut worst = 0.0f64;
    let mut count = 0;
    for _ in 0..b.scaled(60) {
        let k = rng.random_range(2..=8usize);
        let n = k + rng.random_range(0..=2usize);
        let theta: Vec<f64> = (0..k - 1)
            .map(|_| rng.random_range(0.0..std::f64::consts::FRAC_PI_2))
            .collect();
        let phi: Vec<f64> = (0..k - 1)
            .map(|_| rng.random_range(-3.1..3.1))
            .collect();
        let sc = StageCoords::new(theta, phi).expect("valid");
        let rows = stage_rows(&sc);
        let (_, op) = stage_operator(&sc, n).expect("valid");
        for (j, row) in rows.iter().enumerate() {
            let mut embedded = V::zeros(n);
            for (i, &e) in row.entries().iter().enumerate() {
                embedded.entries_mut()[n - k + i] = e;
            }
            let image = op.matvec(&embedded);
            worst = worst.max((image.entries()[n - k + j].norm() - 1.0).abs());
            count += 1;
        }
        for lead in 0..n - k {
            let e = V::basis(n, lead + 1);
            worst = worst.max(op.matvec(&e).max_entry_distance(&e));
            count += 1;
        }
    }
    b.record("stage-identities", worst, 1e-10, count);
}

fn unitary_reconstruction(b: &mut Battery) {
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut count_mismatch = 0usize;
    let per_dim = b.scaled(6) as u64;
    for dim in 2..=6usize {
        for k in 0..per_dim {
            let u: M = random_unitary(dim, b.seed ^ (dim as u64 * 104729 + k));
            let f = factorize_unitary(&u).expect("unitary input");
            worst = worst.max(operator_distance(&reconstruct(&f), &u).expect("shapes"));
            let sched = factorization_to_schedule(&f, AmplitudeRule::UniformL(1.0), false)
                .expect("schedulable");
            if sched.step_count() != bang_bang_step_count(dim) {
                count_mismatch += 1;
            }
            let propagated = propagate_operator(&sched).expect("propagates");
            worst = worst.max(operator_distance(&propagated, &u).expect("shapes"));
            count += 1;
        }
    }
    worst = worst.max(count_mismatch as f64);
    b.record("unitary-reconstruction", worst, 1e-8, count);
}

fn eig_reconstruction(b: &mut Battery) {
    let mut worst = 0.0f64;
    let mut count = 0;
    let per_dim = b.scaled(5) as u64;
    for dim in 2..=8usize {
        for k in 0..per_dim {
            let u: M = random_unitary(dim, b.seed ^ (dim as u64 * 15485863 + k));
            let (phases, vecs) = eig_unitary(&u, 1e-8).expect("unitary");
            let mut rec = M::zeros(dim, dim);
            for (j, &phase) in phases.iter().enumerate() {
                let col = vecs.column(j);
                let factor = Complex::from_polar(1.0, phase);
                for r in 0..dim {
                    for c in 0..dim {
                        let v = rec.get(r, c)
                            + factor * col.entries()[r] * col.entries()[c].conj();
                        rec.set(r, c, v);
                    }
                }
            }
            worst = worst.max(operator_distance(&rec, &u).expect("shapes"));
            let gram = vecs.adjoint().matmul(&vecs);
            worst = worst.max(gram.max_entry_distance(&M::identity(dim)));
            count += 1;
        }
    }
    b.record("eig-unitary-reconstruction", worst, 1e-10, count);
}

fn simulator_dual_path(b: &mut Battery) {
    let mut rng = b.rng(8);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let dim = rng.random_range(2..=6);
        let step = Step::single(Pulse {
            channel: random_channel(&mut rng, dim),
            amplitude: rng.random_range(0.2..3.0),
            duration: rng.random_range(0.0..3.0),
        });
        let a = step_unitary(&step, dim).expect("valid");
        let e = step_unitary_eig(&step, dim).expect("valid");
        worst = worst.max(a.max_entry_distance(&e));
    }
    b.record("simulator-dual-path", worst, 1e-12, 100);
}

fn pulse_area_invariance(b: &mut Battery) {
    let mut rng = b.rng(9);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let dim = rng.random_range(2..=6);
        let ch = random_channel(&mut rng, dim);
        let amp: f64 = rng.random_range(0.2..3.0);
        let dur: f64 = rng.random_range(0.1..2.0);
        let scale: f64 = rng.random_range(0.25..4.0);
        let a = step_unitary(
            &Step::single(Pulse {
                channel: ch,
                amplitude: amp,
                duration: dur,
            }),
            dim,
        )
        .expect("valid");
        let c = step_unitary(
            &Step::single(Pulse {
                channel: ch,
                amplitude: amp * scale,
                duration: dur / scale,
            }),
            dim,
        )
        .expect("valid");
        worst = worst.max(a.max_entry_distance(&c));
    }
    b.record("pulse-area-invariance", worst, 1e-12, 100);
}

fn norm_preservation(b: &mut Battery) {
    let cases = transfer_cases(b, 2);
    let mut worst = 0.0f64;
    let mut count = 0;
    for (c0, cs) in &cases {
        let seq = synthesize_transfer(c0, cs, Family::YZ, false).expect("valid");
        let sched = to_schedule(
            &GroupedSequence::sequential(&seq),
            AmplitudeRule::UniformL(1.0),
            false,
        )
        .expect("schedulable");
        let traj = propagate(&sched, c0).expect("propagates");
        for state in traj.states() {
            worst = worst.max((state.norm() - 1.0).abs());
            count += 1;
        }
    }
    b.record("norm-preservation", worst, 1e-10, count);
}

fn step_count_comparison(b: &mut Battery) {
    let mut violations = 0usize;
    for n in 2..=64 {
        if euler_givens_step_count(n) <= bang_bang_step_count(n) {
            violations += 1;
        }
    }
    b.record("step-count-advantage", violations as f64, 0.0, 63);
}

/// Synthesizes one deterministic transfer sequence, exposed for CLI reuse.
pub fn sample_sequence(dim: usize, seed: u64) -> RotationSequence<f64> {
    let c0 = random_unit_vector(dim, seed);
    let cs = random_unit_vector(dim, seed.wrapping_add(1));
    synthesize_transfer(&c0, &cs, Family::YZ, false).expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_passes_at_default_tolerances() {
        let results = run_battery(VerifyConfig::default());
        let report = render_report(&results);
        assert!(all_passed(&results), "battery failed:\n{report}");
    }

    #[test]
    fn battery_is_deterministic() {
        let a = render_report(&run_battery(VerifyConfig {
            seed: 1,
            ..VerifyConfig::default()
        }));
        let b = render_report(&run_battery(VerifyConfig {
            seed: 1,
            ..VerifyConfig::default()
        }));
        assert_eq!(a, b);
    }

    #[test]
    fn corrupted_tolerance_fails() {
        let results = run_battery(VerifyConfig {
            seed: 1,
            tolerance_scale: 0.0,
            ..VerifyConfig::default()
        });
        assert!(!all_passed(&results));
    }
}
