//! Gate kinds, their unitary matrices and the ZYZ normal form.
//!
//! Rotation conventions are full-angle throughout:
//!
//! * `Rz(τ) = diag(1, e^{iτ})`
//! * `Ry(τ) = [[cos τ, -sin τ], [sin τ, cos τ]]`
//! * `F(θ)` applies `Ry(θ)` to the target when the control is `|1⟩`.
//!
//! The fixed gate `G` is simply `F(φ)` for the configured `φ`.
//! `Rx` and the Clifford+T kinds use their usual textbook matrices.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::fmt;

use num_complex::Complex64;

use crate::angle::Angle;

type C = Complex64;

const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);
const I: C = C::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    Rx,
    Ry,
    Rz,
    Cx,
    Cz,
    F,
    GPhase,
}

impl GateKind {
    pub const ALL: [GateKind; 15] = [
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::H,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::Cx,
        GateKind::Cz,
        GateKind::F,
        GateKind::GPhase,
    ];

    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::H => "h",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::Cx => "cx",
            GateKind::Cz => "cz",
            GateKind::F => "f",
            GateKind::GPhase => "gphase",
        }
    }

    pub fn from_mnemonic(s: &str) -> Option<GateKind> {
        GateKind::ALL.into_iter().find(|k| k.mnemonic() == s)
    }

    pub fn num_operands(self) -> usize {
        match self {
            GateKind::GPhase => 0,
            GateKind::Cx | GateKind::Cz | GateKind::F => 2,
            _ => 1,
        }
    }

    pub fn takes_angle(self) -> bool {
        matches!(
            self,
            GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::F | GateKind::GPhase
        )
    }

    pub fn is_single_qubit(self) -> bool {
        self.num_operands() == 1
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

/// Qubits a gate acts on. Two-qubit kinds list the control first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Operands {
    None,
    One(usize),
    Two { control: usize, target: usize },
}

impl Operands {
    pub fn len(&self) -> usize {
        match self {
            Operands::None => 0,
            Operands::One(_) => 1,
            Operands::Two { .. } => 2,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        let (a, b) = match *self {
            Operands::None => (None, None),
            Operands::One(q) => (Some(q), None),
            Operands::Two { control, target } => (Some(control), Some(target)),
        };
        a.into_iter().chain(b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub operands: Operands,
    pub param: Option<Angle>,
}

macro_rules! fixed_single {
    ($($name:ident => $kind:ident),* $(,)?) => {
        $(
            pub fn $name(q: usize) -> Gate {
                Gate { kind: GateKind::$kind, operands: Operands::One(q), param: None }
            }
        )*
    };
}

macro_rules! rotation {
    ($($name:ident => $kind:ident),* $(,)?) => {
        $(
            pub fn $name(q: usize, angle: impl Into<Angle>) -> Gate {
                Gate { kind: GateKind::$kind, operands: Operands::One(q), param: Some(angle.into()) }
            }
        )*
    };
}

impl Gate {
    fixed_single!(x => X, y => Y, z => Z, h => H, s => S, sdg => Sdg, t => T, tdg => Tdg);
    rotation!(rx => Rx, ry => Ry, rz => Rz);

    pub fn cx(control: usize, target: usize) -> Gate {
        Gate { kind: GateKind::Cx, operands: Operands::Two { control, target }, param: None }
    }

    pub fn cz(control: usize, target: usize) -> Gate {
        Gate { kind: GateKind::Cz, operands: Operands::Two { control, target }, param: None }
    }

    pub fn f(control: usize, target: usize, theta: impl Into<Angle>) -> Gate {
        Gate {
            kind: GateKind::F,
            operands: Operands::Two { control, target },
            param: Some(theta.into()),
        }
    }

    pub fn gphase(alpha: impl Into<Angle>) -> Gate {
        Gate { kind: GateKind::GPhase, operands: Operands::None, param: Some(alpha.into()) }
    }

    /// The angle parameter, or zero for fixed kinds.
    pub fn angle(&self) -> Angle {
        self.param.unwrap_or(Angle::ZERO)
    }

    /// Single operand of a one-qubit gate.
    pub fn qubit(&self) -> Option<usize> {
        match self.operands {
            Operands::One(q) => Some(q),
            _ => None,
        }
    }

    /// `(control, target)` of a two-qubit gate.
    pub fn control_target(&self) -> Option<(usize, usize)> {
        match self.operands {
            Operands::Two { control, target } => Some((control, target)),
            _ => None,
        }
    }

    /// Whether every matrix entry is real.
    ///
    /// Classification is by kind, with the angle consulted for `Rz`, `Rx` and
    /// `GPhase`. It agrees exactly with [`gate_matrix`], which returns exact
    /// `±1` for those kinds at the angles classified as real.
    pub fn is_real(&self) -> bool {
        match self.kind {
            GateKind::X
            | GateKind::Z
            | GateKind::H
            | GateKind::Ry
            | GateKind::Cx
            | GateKind::Cz
            | GateKind::F => true,
            GateKind::Y | GateKind::S | GateKind::Sdg | GateKind::T | GateKind::Tdg => false,
            GateKind::Rx => self.angle().is_multiple_of_two_pi(),
            GateKind::Rz | GateKind::GPhase => self.angle().is_multiple_of_pi(),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.mnemonic())?;
        for q in self.operands.iter() {
            write!(f, " {q}")?;
        }
        if let Some(a) = self.param {
            write!(f, " {a}")?;
        }
        Ok(())
    }
}

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<C>,
}

impl Matrix {
    pub fn identity(dim: usize) -> Matrix {
        let mut m = Matrix { dim, data: vec![ZERO; dim * dim] };
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_rows<const N: usize>(rows: [[C; N]; N]) -> Matrix {
        Matrix { dim: N, data: rows.iter().flatten().copied().collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> C {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: C) {
        self.data[row * self.dim + col] = v;
    }

    pub fn entries(&self) -> &[C] {
        &self.data
    }

    pub fn scale(&self, s: C) -> Matrix {
        Matrix { dim: self.dim, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn adjoint(&self) -> Matrix {
        let n = self.dim;
        let mut out = Matrix { dim: n, data: vec![ZERO; n * n] };
        for r in 0..n {
            for c in 0..n {
                out.data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl std::ops::Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        Matrix { dim: n, data: out }
    }
}

/// Compact description of a gate's action, consumed by the simulator kernels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Action<T> {
    /// Multiply the whole state by a scalar.
    Phase(T),
    /// 2×2 matrix on one qubit.
    Single { qubit: usize, m: [[T; 2]; 2] },
    /// 2×2 matrix on the target, applied where the control bit is 1.
    Controlled { control: usize, target: usize, m: [[T; 2]; 2] },
}

/// `e^{iτ}`, exact at integer multiples of π.
fn phase(tau: Angle) -> C {
    if tau.is_multiple_of_pi() {
        if tau.is_multiple_of_two_pi() {
            ONE
        } else {
            -ONE
        }
    } else {
        C::from_polar(1.0, tau.radians())
    }
}

pub(crate) fn ry_block(theta: f64) -> [[f64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    [[c, -s], [s, c]]
}

fn lift(m: [[f64; 2]; 2]) -> [[C; 2]; 2] {
    m.map(|row| row.map(|v| C::new(v, 0.0)))
}

/// 2×2 matrix of a single-qubit kind (ignoring operands).
fn single_matrix(kind: GateKind, angle: Angle) -> [[C; 2]; 2] {
    let h = C::new(FRAC_1_SQRT_2, 0.0);
    let t = C::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2);
    match kind {
        GateKind::X => [[ZERO, ONE], [ONE, ZERO]],
        GateKind::Y => [[ZERO, -I], [I, ZERO]],
        GateKind::Z => [[ONE, ZERO], [ZERO, -ONE]],
        GateKind::H => [[h, h], [h, -h]],
        GateKind::S => [[ONE, ZERO], [ZERO, I]],
        GateKind::Sdg => [[ONE, ZERO], [ZERO, -I]],
        GateKind::T => [[ONE, ZERO], [ZERO, t]],
        GateKind::Tdg => [[ONE, ZERO], [ZERO, t.conj()]],
        GateKind::Rx => {
            let half = angle.radians() / 2.0;
            let (s, c) = if angle.is_multiple_of_two_pi() {
                (0.0, if Angle::new(half).is_multiple_of_two_pi() { 1.0 } else { -1.0 })
            } else {
                half.sin_cos()
            };
            [[C::new(c, 0.0), C::new(0.0, -s)], [C::new(0.0, -s), C::new(c, 0.0)]]
        }
        GateKind::Ry => lift(ry_block(angle.radians())),
        GateKind::Rz => [[ONE, ZERO], [ZERO, phase(angle)]],
        _ => unreachable!("{kind} is not a single-qubit kind"),
    }
}

/// Target block of a controlled kind.
fn controlled_block(kind: GateKind, angle: Angle) -> [[C; 2]; 2] {
    match kind {
        GateKind::Cx => single_matrix(GateKind::X, angle),
        GateKind::Cz => single_matrix(GateKind::Z, angle),
        GateKind::F => lift(ry_block(angle.radians())),
        _ => unreachable!("{kind} is not a controlled kind"),
    }
}

/// The complex action of a gate. Panics if operands do not match the kind.
pub fn action(g: &Gate) -> Action<C> {
    match (g.kind, g.operands) {
        (GateKind::GPhase, Operands::None) => Action::Phase(phase(g.angle())),
        (k, Operands::One(qubit)) if k.is_single_qubit() => {
            Action::Single { qubit, m: single_matrix(k, g.angle()) }
        }
        (k, Operands::Two { control, target }) if k.num_operands() == 2 => {
            Action::Controlled { control, target, m: controlled_block(k, g.angle()) }
        }
        _ => panic!("operands {:?} do not fit gate kind {}", g.operands, g.kind),
    }
}

/// The real action of a gate, or `None` when the gate is not real.
pub fn real_action(g: &Gate) -> Option<Action<f64>> {
    if !g.is_real() {
        return None;
    }
    let re = |m: [[C; 2]; 2]| m.map(|row| row.map(|v| v.re));
    Some(match action(g) {
        Action::Phase(p) => Action::Phase(p.re),
        Action::Single { qubit, m } => Action::Single { qubit, m: re(m) },
        Action::Controlled { control, target, m } => Action::Controlled { control, target, m: re(m) },
    })
}

/// The unitary of `g` as a dense matrix: 1×1 for `GPhase`, 2×2 for
/// single-qubit kinds and 4×4 for two-qubit kinds. For two-qubit kinds the
/// basis index is `2·control + target`, i.e. `|control target⟩`.
pub fn gate_matrix(g: &Gate) -> Matrix {
    match action(g) {
        Action::Phase(p) => Matrix::from_rows([[p]]),
        Action::Single { m, .. } => Matrix::from_rows(m),
        Action::Controlled { m, .. } => Matrix::from_rows([
            [ONE, ZERO, ZERO, ZERO],
            [ZERO, ONE, ZERO, ZERO],
            [ZERO, ZERO, m[0][0], m[0][1]],
            [ZERO, ZERO, m[1][0], m[1][1]],
        ]),
    }
}

/// `U = e^{iα} · Rz(a) · Ry(b) · Rz(c)`, with `Rz(c)` applied first.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Zyz {
    pub alpha: Angle,
    pub a: Angle,
    pub b: Angle,
    pub c: Angle,
}

impl Zyz {
    pub fn matrix(&self) -> Matrix {
        let rz = |t: Angle| Matrix::from_rows(single_matrix(GateKind::Rz, t));
        let ry = Matrix::from_rows(single_matrix(GateKind::Ry, self.b));
        let m = &(&rz(self.a) * &ry) * &rz(self.c);
        m.scale(phase(self.alpha))
    }
}

/// Wrap into `(-π, π]`.
fn principal(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Argument in `(-π, π]`; a negative-zero imaginary part counts as zero.
fn arg(z: C) -> f64 {
    (z.im + 0.0).atan2(z.re)
}

const DEGENERATE: f64 = 1e-14;

/// Decompose a 2×2 unitary into ZYZ form. `b` lands in `[0, π/2]`.
pub fn zyz_of_matrix(u: [[C; 2]; 2]) -> Zyz {
    let diag = u[0][0].norm();
    let off = u[1][0].norm();
    let b = off.atan2(diag);
    let (alpha, a, b, c) = if off < DEGENERATE {
        let alpha = arg(u[0][0]);
        (alpha, principal(arg(u[1][1]) - alpha), 0.0, 0.0)
    } else if diag < DEGENERATE {
        // U = [[0, -e^{ic}], [e^{ia}, 0]] with α = 0.
        (0.0, arg(u[1][0]), PI / 2.0, arg(-u[0][1]))
    } else {
        let alpha = arg(u[0][0]);
        (alpha, principal(arg(u[1][0]) - alpha), b, principal(arg(-u[0][1]) - alpha))
    };
    Zyz { alpha: Angle::new(alpha), a: Angle::new(a), b: Angle::new(b), c: Angle::new(c) }
}

/// ZYZ normal form of a single-qubit gate. `Ry` and `Rz` map to themselves.
pub fn zyz_normalize(g: &Gate) -> Zyz {
    assert!(g.kind.is_single_qubit(), "zyz_normalize needs a single-qubit gate, got {}", g.kind);
    let zero = Angle::ZERO;
    match g.kind {
        GateKind::Ry => Zyz { alpha: zero, a: zero, b: g.angle(), c: zero },
        GateKind::Rz => Zyz { alpha: zero, a: g.angle(), b: zero, c: zero },
        k => zyz_of_matrix(single_matrix(k, g.angle())),
    }
}
