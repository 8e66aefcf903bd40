//! Timed piecewise-constant control programs and their JSON wire format.
//!
//! A [`Schedule`] is an ordered list of steps; each step is a set of
//! concurrent pulses `(channel, amplitude, duration)` sharing one duration.
//! Concurrent pulses are restricted to Z rotations on distinct levels, the
//! only concurrency the synthesis exploits (diagonal generators commute).

use serde::{Deserialize, Serialize};

use crate::controls::{ChannelKind, ControlChannel};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Which population-rotation channel family a sequence uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Y plus Z controls (real Givens population rotations).
    YZ,
    /// X plus Z controls (imaginary-coupling population rotations).
    XZ,
}

impl Family {
    pub fn population_kind(self) -> ChannelKind {
        match self {
            Family::YZ => ChannelKind::Y,
            Family::XZ => ChannelKind::X,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Family::YZ => "yz",
            Family::XZ => "xz",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "yz" => Ok(Family::YZ),
            "xz" => Ok(Family::XZ),
            other => Err(Error::Parse {
                path: "<family>".into(),
                detail: format!("unknown family {other:?}"),
            }),
        }
    }
}

/// How pulse amplitudes are chosen when a rotation sequence is lowered to a
/// schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AmplitudeRule<T> {
    /// Every pulse runs at the fixed amplitude `L > 0`.
    UniformL(T),
    /// Time-energy optimal amplitude `sqrt(lambda)` for `lambda > 0`;
    /// concurrent phase blocks shrink their per-channel amplitudes to
    /// `phi_n / t_block` instead.
    TimeEnergyOptimal(T),
}

impl<T: Scalar> AmplitudeRule<T> {
    /// The base amplitude, after validating positivity.
    pub fn base_amplitude(&self) -> Result<T> {
        match *self {
            AmplitudeRule::UniformL(l) => {
                if l <= T::zero() {
                    Err(Error::NonpositiveAmplitude(l.as_f64()))
                } else {
                    Ok(l)
                }
            }
            AmplitudeRule::TimeEnergyOptimal(lambda) => {
                if lambda <= T::zero() {
                    Err(Error::NonpositiveLambda(lambda.as_f64()))
                } else {
                    Ok(lambda.sqrt())
                }
            }
        }
    }

    pub fn is_optimal(&self) -> bool {
        matches!(self, AmplitudeRule::TimeEnergyOptimal(_))
    }

    pub fn lambda(&self) -> Option<T> {
        match *self {
            AmplitudeRule::TimeEnergyOptimal(lambda) => Some(lambda),
            AmplitudeRule::UniformL(_) => None,
        }
    }

    pub fn rule_name(&self) -> &'static str {
        match self {
            AmplitudeRule::UniformL(_) => "uniform",
            AmplitudeRule::TimeEnergyOptimal(_) => "time-energy-optimal",
        }
    }
}

/// One constant pulse: a channel held at a fixed amplitude for a duration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse<T> {
    pub channel: ControlChannel,
    /// Field amplitude in rad/time (hbar = 1); sign carries rotation sense.
    pub amplitude: T,
    /// Nonnegative, finite duration in inverse amplitude units.
    pub duration: T,
}

impl<T: Scalar> Pulse<T> {
    /// The rotation angle this pulse effects, `amplitude * duration`.
    pub fn angle(&self) -> T {
        self.amplitude * self.duration
    }
}

/// A set of concurrent pulses sharing one duration.
#[derive(Debug, Clone, PartialEq)]
pub struct Step<T> {
    pulses: Vec<Pulse<T>>,
}

impl<T: Scalar> Step<T> {
    pub fn new(pulses: Vec<Pulse<T>>) -> Result<Self> {
        let step = Self { pulses };
        step.validate()?;
        Ok(step)
    }

    pub fn single(pulse: Pulse<T>) -> Self {
        Self {
            pulses: vec![pulse],
        }
    }

    pub fn pulses(&self) -> &[Pulse<T>] {
        &self.pulses
    }

    /// The common duration (zero for an empty step).
    pub fn duration(&self) -> T {
        self.pulses.first().map_or(T::zero(), |p| p.duration)
    }

    fn validate(&self) -> Result<()> {
        for p in &self.pulses {
            if p.duration < T::zero() || !p.duration.is_finite() {
                return Err(Error::InvalidSchedule(format!(
                    "pulse on {} has invalid duration {}",
                    p.channel.name(),
                    p.duration
                )));
            }
            if !p.amplitude.is_finite() {
                return Err(Error::InvalidSchedule(format!(
                    "pulse on {} has non-finite amplitude",
                    p.channel.name()
                )));
            }
        }
        if let Some(first) = self.pulses.first() {
            let d = first.duration;
            if self
                .pulses
                .iter()
                .any(|p| (p.duration - d).abs() > T::real(1e-14))
            {
                return Err(Error::InvalidSchedule(
                    "pulses within one step must share a duration".into(),
                ));
            }
        }
        if self.pulses.len() > 1 {
            let mut seen = std::collections::BTreeSet::new();
            for p in &self.pulses {
                if p.channel.kind() != ChannelKind::Z || !seen.insert(p.channel.index()) {
                    return Err(Error::NonCommutingStep);
                }
            }
        }
        Ok(())
    }
}

/// Metadata carried alongside a schedule file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScheduleMeta {
    pub family: Option<Family>,
    pub lambda: Option<f64>,
    pub amplitude_rule: String,
}

/// An executable piecewise-constant control program.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule<T> {
    dim: usize,
    steps: Vec<Step<T>>,
    meta: ScheduleMeta,
}

impl<T: Scalar> Schedule<T> {
    pub fn new(dim: usize, steps: Vec<Step<T>>, meta: ScheduleMeta) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall { dim, min: 2 });
        }
        for step in &steps {
            step.validate()?;
            for p in step.pulses() {
                if p.channel.dim() != dim {
                    return Err(Error::DimMismatch {
                        left: p.channel.dim(),
                        right: dim,
                    });
                }
            }
        }
        Ok(Self { dim, steps, meta })
    }

    pub fn empty(dim: usize) -> Self {
        assert!(dim >= 2, "schedules act on at least two levels");
        Self {
            dim,
            steps: Vec::new(),
            meta: ScheduleMeta::default(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn steps(&self) -> &[Step<T>] {
        &self.steps
    }

    pub fn meta(&self) -> &ScheduleMeta {
        &self.meta
    }

    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    pub fn total_duration(&self) -> T {
        self.steps
            .iter()
            .map(|s| s.duration())
            .fold(T::zero(), |a, b| a + b)
    }

    /// Largest pulse amplitude magnitude, if any pulse exists.
    pub fn max_amplitude(&self) -> Option<T> {
        self.steps
            .iter()
            .flat_map(|s| s.pulses())
            .map(|p| p.amplitude.abs())
            .fold(None, |acc, x| Some(acc.map_or(x, |a: T| a.max(x))))
    }

    /// Concatenation, for composition checks.
    pub fn concat(&self, other: &Schedule<T>) -> Result<Schedule<T>> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().cloned());
        Schedule::new(self.dim, steps, self.meta.clone())
    }

    /// The same schedule with every amplitude negated and step order
    /// reversed; propagating it undoes this schedule.
    pub fn reversed_inverse(&self) -> Schedule<T> {
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|s| Step {
                pulses: s
                    .pulses()
                    .iter()
                    .map(|p| Pulse {
                        channel: p.channel,
                        amplitude: -p.amplitude,
                        duration: p.duration,
                    })
                    .collect(),
            })
            .collect();
        Schedule {
            dim: self.dim,
            steps,
            meta: self.meta.clone(),
        }
    }

    /// Serializes to the schedule JSON format (fixed field order, trailing
    /// newline; byte-deterministic for identical inputs).
    pub fn to_json(&self) -> String {
        let file = ScheduleFile {
            dim: self.dim,
            steps: self
                .steps
                .iter()
                .map(|s| {
                    s.pulses()
                        .iter()
                        .map(|p| PulseRepr {
                            channel: p.channel.name(),
                            amplitude: p.amplitude.as_f64(),
                            duration: p.duration.as_f64(),
                        })
                        .collect()
                })
                .collect(),
            meta: MetaRepr {
                family: self.meta.family.map(|f| f.as_str().to_string()),
                lambda: self.meta.lambda,
                amplitude_rule: self.meta.amplitude_rule.clone(),
            },
        };
        let mut s = serde_json::to_string_pretty(&file).expect("schedule serializes");
        s.push('\n');
        s
    }

    /// Parses and validates the schedule JSON format.
    pub fn from_json(text: &str) -> Result<Schedule<T>> {
        let file: ScheduleFile = serde_json::from_str(text)?;
        let mut steps = Vec::with_capacity(file.steps.len());
        for step in file.steps {
            let pulses = step
                .into_iter()
                .map(|p| {
                    Ok(Pulse {
                        channel: ControlChannel::parse(&p.channel, file.dim)?,
                        amplitude: T::real(p.amplitude),
                        duration: T::real(p.duration),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            steps.push(Step::new(pulses)?);
        }
        let meta = ScheduleMeta {
            family: match file.meta.family {
                Some(ref s) => Some(Family::parse(s)?),
                None => None,
            },
            lambda: file.meta.lambda,
            amplitude_rule: file.meta.amplitude_rule,
        };
        Schedule::new(file.dim, steps, meta)
    }
}

#[derive(Serialize, Deserialize)]
struct ScheduleFile {
    dim: usize,
    steps: Vec<Vec<PulseRepr>>,
    meta: MetaRepr,
}

#[derive(Serialize, Deserialize)]
struct PulseRepr {
    channel: String,
    amplitude: f64,
    duration: f64,
}

#[derive(Serialize, Deserialize)]
struct MetaRepr {
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    amplitude_rule: String,
}
