//! Control channels and their closed-form rotation unitaries.
//!
//! Three channel kinds act on an `N`-level system (levels are 1-based):
//!
//! - `Z_n = |n><n|` introduces a local phase shift, `1 ≤ n ≤ N`. State
//!   transfer only ever uses `Z_2..Z_N`; unitary synthesis also uses `Z_1`.
//! - `X_n = |n+1><n| + |n><n+1|` and `Y_n = i(|n+1><n| - |n><n+1|)` drive
//!   population transfer between adjacent levels, `1 ≤ n ≤ N-1`.
//!
//! A rotation by angle `gamma` on channel `G` is `exp(-i gamma G)`, realized
//! physically by holding a constant field of amplitude `L` for time
//! `gamma / L`.

use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;
use crate::scalar::{Scalar, C};

/// The three control channel kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelKind {
    Z,
    X,
    Y,
}

impl ChannelKind {
    pub fn letter(self) -> char {
        match self {
            ChannelKind::Z => 'Z',
            ChannelKind::X => 'X',
            ChannelKind::Y => 'Y',
        }
    }
}

/// A control channel on an `N`-level system: kind plus 1-based level index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ControlChannel {
    kind: ChannelKind,
    index: usize,
    dim: usize,
}

impl ControlChannel {
    pub fn new(kind: ChannelKind, index: usize, dim: usize) -> Result<Self> {
        let valid = match kind {
            ChannelKind::Z => index >= 1 && index <= dim,
            ChannelKind::X | ChannelKind::Y => index >= 1 && index < dim,
        };
        if !valid || dim < 2 {
            return Err(Error::BadIndex {
                kind: match kind {
                    ChannelKind::Z => "Z",
                    ChannelKind::X => "X",
                    ChannelKind::Y => "Y",
                },
                index,
                dim,
            });
        }
        Ok(Self { kind, index, dim })
    }

    pub fn z(index: usize, dim: usize) -> Result<Self> {
        Self::new(ChannelKind::Z, index, dim)
    }

    pub fn x(index: usize, dim: usize) -> Result<Self> {
        Self::new(ChannelKind::X, index, dim)
    }

    pub fn y(index: usize, dim: usize) -> Result<Self> {
        Self::new(ChannelKind::Y, index, dim)
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Channel name as used in files and CLI output, e.g. `"Z2"`, `"Y1"`.
    pub fn name(&self) -> String {
        format!("{}{}", self.kind.letter(), self.index)
    }

    /// Parses `"Z2"`-style names; the dimension comes from context.
    pub fn parse(name: &str, dim: usize) -> Result<Self> {
        let bad = || Error::Parse {
            path: "<channel>".into(),
            detail: format!("invalid channel name {name:?}"),
        };
        let mut chars = name.chars();
        let kind = match chars.next() {
            Some('Z') | Some('z') => ChannelKind::Z,
            Some('X') | Some('x') => ChannelKind::X,
            Some('Y') | Some('y') => ChannelKind::Y,
            _ => return Err(bad()),
        };
        let index: usize = chars.as_str().parse().map_err(|_| bad())?;
        Self::new(kind, index, dim)
    }
}

/// A rotation `exp(-i gamma G)` on one channel. Angles are normalized into
/// `(-2 pi, 2 pi)` preserving sign, so the nonnegative-time rule
/// (`gamma + 2 pi` at positive amplitude) stays applicable downstream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation<T> {
    channel: ControlChannel,
    angle: T,
}

impl<T: Scalar> Rotation<T> {
    pub fn new(channel: ControlChannel, angle: T) -> Self {
        Self {
            channel,
            angle: angle % T::TAU(),
        }
    }

    pub fn channel(&self) -> ControlChannel {
        self.channel
    }

    pub fn angle(&self) -> T {
        self.angle
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.channel, -self.angle)
    }
}

/// The Hermitian generator matrix of a channel at its full dimension.
pub fn generator<T: Scalar>(ch: ControlChannel) -> ComplexMatrix<T> {
    let n = ch.dim();
    let i = ch.index() - 1; // 0-based level
    let mut g = ComplexMatrix::zeros(n, n);
    let one = T::one();
    match ch.kind() {
        ChannelKind::Z => {
            g.set(i, i, C::new(one, T::zero()));
        }
        ChannelKind::X => {
            g.set(i + 1, i, C::new(one, T::zero()));
            g.set(i, i + 1, C::new(one, T::zero()));
        }
        ChannelKind::Y => {
            g.set(i + 1, i, C::new(T::zero(), one));
            g.set(i, i + 1, C::new(T::zero(), -one));
        }
    }
    g
}

/// Closed-form `exp(-i gamma G)` for a single-channel rotation.
///
/// - `Z_n`: identity with entry `(n, n) = e^{-i gamma}`.
/// - `Y_n`: real Givens block `((cos, -sin), (sin, cos))` on `(n, n+1)`.
/// - `X_n`: block `((cos, -i sin), (-i sin, cos))` on `(n, n+1)`.
pub fn rotation_unitary<T: Scalar>(r: &Rotation<T>) -> ComplexMatrix<T> {
    let ch = r.channel();
    let n = ch.dim();
    let i = ch.index() - 1;
    let gamma = r.angle();
    let mut u = ComplexMatrix::identity(n);
    match ch.kind() {
        ChannelKind::Z => {
            u.set(i, i, C::from_polar(T::one(), -gamma));
        }
        ChannelKind::Y => {
            let (s, c) = gamma.sin_cos();
            u.set(i, i, C::new(c, T::zero()));
            u.set(i, i + 1, C::new(-s, T::zero()));
            u.set(i + 1, i, C::new(s, T::zero()));
            u.set(i + 1, i + 1, C::new(c, T::zero()));
        }
        ChannelKind::X => {
            let (s, c) = gamma.sin_cos();
            u.set(i, i, C::new(c, T::zero()));
            u.set(i, i + 1, C::new(T::zero(), -s));
            u.set(i + 1, i, C::new(T::zero(), -s));
            u.set(i + 1, i + 1, C::new(c, T::zero()));
        }
    }
    u
}

/// Applies a rotation to a state vector in place, touching only the one or
/// two affected components.
pub fn apply_rotation<T: Scalar>(r: &Rotation<T>, state: &mut crate::numerics::ComplexVector<T>) {
    let ch = r.channel();
    assert_eq!(ch.dim(), state.dim(), "rotation dim mismatch");
    let i = ch.index() - 1;
    let gamma = r.angle();
    let entries = state.entries_mut();
    match ch.kind() {
        ChannelKind::Z => {
            entries[i] *= C::from_polar(T::one(), -gamma);
        }
        ChannelKind::Y => {
            let (s, c) = gamma.sin_cos();
            let a = entries[i];
            let b = entries[i + 1];
            entries[i] = a * c - b * s;
            entries[i + 1] = a * s + b * c;
        }
        ChannelKind::X => {
            let (s, c) = gamma.sin_cos();
            let ms = C::new(T::zero(), -s);
            let a = entries[i];
            let b = entries[i + 1];
            entries[i] = a * c + b * ms;
            entries[i + 1] = a * ms + b * c;
        }
    }
}
