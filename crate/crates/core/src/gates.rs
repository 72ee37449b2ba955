//! Constant and parameterized gate matrices, plus Hamiltonian extraction.
//!
//! Gate names double as the stable identifiers of the circuit text format.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_8};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::unitary::{c, principal_arg, Matrix, Unitary};

/// Every gate identifier understood by [`gate`] and the text format.
pub const GATE_NAMES: &[&str] = &[
    "XOR",
    "TOFFOLI",
    "ENDOR_XOR",
    "PHASE_XOR",
    "DEUTSCH",
    "CONTROLLED_V",
    "F",
    "G",
    "Hgate",
    "J",
    "HADAMARD",
    "R",
    "RPRIME",
    "X",
    "Y",
    "Z",
    "RY",
    "RZ",
    "PHASE",
    "U",
];

#[derive(Clone, Debug, PartialEq)]
pub enum GateKind {
    Xor,
    Toffoli,
    EndorXor,
    PhaseXor,
    /// Doubly-controlled `u`.
    Deutsch(Unitary),
    /// Singly-controlled `v`.
    ControlledV(Unitary),
    F,
    G,
    /// The one-bit `H` of the Toffoli construction, renamed to avoid the
    /// clash with Hadamard.
    Hgate,
    J,
    Hadamard,
    R,
    RPrime,
    X,
    Y,
    Z,
    Ry(f64),
    Rz(f64),
    /// diag(1, e^{iα})
    Phase(f64),
    /// Arbitrary one-bit unitary.
    U(Unitary),
}

/// Parameters accepted by parameterized gates.
#[derive(Clone, Debug, PartialEq)]
pub enum GateParams {
    Angle(f64),
    Matrix(Unitary),
}

/// A gate reference: a kind plus an adjoint flag. Only kinds whose adjoint is
/// not itself expressible as a library gate ever carry `dagger = true`.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    kind: GateKind,
    dagger: bool,
}

fn one_bit(u: &Unitary, gate: &str) -> Result<()> {
    if u.num_qubits() != 1 {
        return Err(Error::InvalidParams {
            gate: gate.into(),
            reason: "expected a 2x2 unitary".into(),
        });
    }
    Ok(())
}

impl Gate {
    pub fn new(kind: GateKind) -> Result<Self> {
        match &kind {
            GateKind::Deutsch(u) => one_bit(u, "DEUTSCH")?,
            GateKind::ControlledV(u) => one_bit(u, "CONTROLLED_V")?,
            GateKind::U(u) => one_bit(u, "U")?,
            GateKind::Ry(t) | GateKind::Rz(t) | GateKind::Phase(t) if !t.is_finite() => {
                return Err(Error::InvalidParams {
                    gate: format!("{kind:?}"),
                    reason: "angle must be finite".into(),
                })
            }
            _ => {}
        }
        Ok(Self {
            kind,
            dagger: false,
        })
    }

    pub(crate) const fn fixed(kind: GateKind) -> Self {
        Self {
            kind,
            dagger: false,
        }
    }

    pub fn xor() -> Self {
        Self::fixed(GateKind::Xor)
    }
    pub fn toffoli() -> Self {
        Self::fixed(GateKind::Toffoli)
    }
    pub fn hadamard() -> Self {
        Self::fixed(GateKind::Hadamard)
    }
    pub fn r() -> Self {
        Self::fixed(GateKind::R)
    }
    pub fn r_prime() -> Self {
        Self::fixed(GateKind::RPrime)
    }
    pub fn x() -> Self {
        Self::fixed(GateKind::X)
    }
    pub fn y() -> Self {
        Self::fixed(GateKind::Y)
    }
    pub fn z() -> Self {
        Self::fixed(GateKind::Z)
    }
    pub fn ry(theta: f64) -> Self {
        Self::fixed(GateKind::Ry(theta))
    }
    pub fn rz(theta: f64) -> Self {
        Self::fixed(GateKind::Rz(theta))
    }
    pub fn phase(alpha: f64) -> Self {
        Self::fixed(GateKind::Phase(alpha))
    }
    pub fn controlled_v(v: Unitary) -> Result<Self> {
        Self::new(GateKind::ControlledV(v))
    }
    pub fn deutsch(u: Unitary) -> Result<Self> {
        Self::new(GateKind::Deutsch(u))
    }
    pub fn u(m: Unitary) -> Result<Self> {
        Self::new(GateKind::U(m))
    }

    /// Builds a gate from its text-format identifier, numeric parameters and
    /// adjoint flag. Matrix parameters are 8 reals: (re, im) pairs row-major.
    pub fn from_spec(name: &str, params: &[f64], dagger: bool) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidParams {
            gate: name.into(),
            reason: reason.into(),
        };
        let angle = || -> Result<f64> {
            match params {
                [t] => Ok(*t),
                _ => Err(bad("expected exactly one angle")),
            }
        };
        let mat = || -> Result<Unitary> {
            if params.len() != 8 {
                return Err(bad("expected 8 reals (row-major re,im pairs)"));
            }
            let entries: Vec<Complex64> = params.chunks(2).map(|p| c(p[0], p[1])).collect();
            Unitary::from_rows(2, &entries).map_err(|e| bad(&e.to_string()))
        };
        let none = |kind: GateKind| -> Result<GateKind> {
            if params.is_empty() {
                Ok(kind)
            } else {
                Err(bad("gate takes no parameters"))
            }
        };
        let kind = match name {
            "XOR" => none(GateKind::Xor)?,
            "TOFFOLI" => none(GateKind::Toffoli)?,
            "ENDOR_XOR" => none(GateKind::EndorXor)?,
            "PHASE_XOR" => none(GateKind::PhaseXor)?,
            "DEUTSCH" => GateKind::Deutsch(mat()?),
            "CONTROLLED_V" => GateKind::ControlledV(mat()?),
            "F" => none(GateKind::F)?,
            "G" => none(GateKind::G)?,
            "Hgate" => none(GateKind::Hgate)?,
            "J" => none(GateKind::J)?,
            "HADAMARD" => none(GateKind::Hadamard)?,
            "R" => none(GateKind::R)?,
            "RPRIME" => none(GateKind::RPrime)?,
            "X" => none(GateKind::X)?,
            "Y" => none(GateKind::Y)?,
            "Z" => none(GateKind::Z)?,
            "RY" => GateKind::Ry(angle()?),
            "RZ" => GateKind::Rz(angle()?),
            "PHASE" => GateKind::Phase(angle()?),
            "U" => GateKind::U(mat()?),
            other => return Err(Error::UnknownGate(other.into())),
        };
        let gate = Self::new(kind)?;
        Ok(if dagger { gate.adjoint() } else { gate })
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn is_dagger(&self) -> bool {
        self.dagger
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            GateKind::Xor => "XOR",
            GateKind::Toffoli => "TOFFOLI",
            GateKind::EndorXor => "ENDOR_XOR",
            GateKind::PhaseXor => "PHASE_XOR",
            GateKind::Deutsch(_) => "DEUTSCH",
            GateKind::ControlledV(_) => "CONTROLLED_V",
            GateKind::F => "F",
            GateKind::G => "G",
            GateKind::Hgate => "Hgate",
            GateKind::J => "J",
            GateKind::Hadamard => "HADAMARD",
            GateKind::R => "R",
            GateKind::RPrime => "RPRIME",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::Ry(_) => "RY",
            GateKind::Rz(_) => "RZ",
            GateKind::Phase(_) => "PHASE",
            GateKind::U(_) => "U",
        }
    }

    pub fn params(&self) -> Option<GateParams> {
        match &self.kind {
            GateKind::Deutsch(u) | GateKind::ControlledV(u) | GateKind::U(u) => {
                Some(GateParams::Matrix(u.clone()))
            }
            GateKind::Ry(t) | GateKind::Rz(t) | GateKind::Phase(t) => Some(GateParams::Angle(*t)),
            _ => None,
        }
    }

    pub fn arity(&self) -> usize {
        match self.kind {
            GateKind::Toffoli | GateKind::Deutsch(_) => 3,
            GateKind::Xor | GateKind::EndorXor | GateKind::PhaseXor | GateKind::ControlledV(_) => 2,
            _ => 1,
        }
    }

    pub fn is_xor(&self) -> bool {
        self.kind == GateKind::Xor
    }

    /// Conjugate transpose, normalized so that self-inverse gates and
    /// parameter families stay flag-free.
    pub fn adjoint(&self) -> Gate {
        let kind = match &self.kind {
            GateKind::Xor
            | GateKind::Toffoli
            | GateKind::PhaseXor
            | GateKind::Hadamard
            | GateKind::R
            | GateKind::X
            | GateKind::Y
            | GateKind::Z => return self.clone(),
            GateKind::Deutsch(u) => GateKind::Deutsch(u.adjoint()),
            GateKind::ControlledV(u) => GateKind::ControlledV(u.adjoint()),
            GateKind::U(u) => GateKind::U(u.adjoint()),
            GateKind::Ry(t) => GateKind::Ry(-t),
            GateKind::Rz(t) => GateKind::Rz(-t),
            GateKind::Phase(t) => GateKind::Phase(-t),
            _ => {
                return Gate {
                    kind: self.kind.clone(),
                    dagger: !self.dagger,
                }
            }
        };
        Gate {
            kind,
            dagger: false,
        }
    }

    pub fn matrix(&self) -> Unitary {
        let base = base_matrix(&self.kind);
        if self.dagger {
            base.adjoint()
        } else {
            base
        }
    }
}

fn fmt_params(f: &mut fmt::Formatter<'_>, params: &[f64]) -> fmt::Result {
    write!(f, "(")?;
    for (i, p) in params.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{p}")?;
    }
    write!(f, ")")
}

pub(crate) fn matrix_params(u: &Unitary) -> Vec<f64> {
    let mut out = Vec::with_capacity(8);
    for r in 0..2 {
        for col in 0..2 {
            let z = u.entry(r, col);
            out.push(z.re);
            out.push(z.im);
        }
    }
    out
}

impl fmt::Display for Gate {
    /// `NAME`, `NAME(p,...)`, with a `^-1` suffix for flagged adjoints.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        match self.params() {
            Some(GateParams::Angle(t)) => fmt_params(f, &[t])?,
            Some(GateParams::Matrix(u)) => fmt_params(f, &matrix_params(&u))?,
            None => {}
        }
        if self.dagger {
            write!(f, "^-1")?;
        }
        Ok(())
    }
}

fn real(dim: usize, rows: &[f64]) -> Unitary {
    Unitary::from_matrix_unchecked(Matrix::from_row_slice(
        dim,
        dim,
        &rows.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>(),
    ))
}

fn complex2(a: Complex64, b: Complex64, cc: Complex64, d: Complex64) -> Unitary {
    Unitary::from_matrix_unchecked(Matrix::from_row_slice(2, 2, &[a, b, cc, d]))
}

fn controlled_block(dim: usize, u: &Unitary) -> Unitary {
    let mut m = Matrix::identity(dim, dim);
    for r in 0..2 {
        for col in 0..2 {
            m[(dim - 2 + r, dim - 2 + col)] = u.entry(r, col);
        }
    }
    Unitary::from_matrix_unchecked(m)
}

fn base_matrix(kind: &GateKind) -> Unitary {
    let e = |theta: f64| Complex64::from_polar(1.0, theta);
    let (cos8, sin8) = (FRAC_PI_8.cos(), FRAC_PI_8.sin());
    let s = FRAC_1_SQRT_2;
    match kind {
        GateKind::Xor => real(
            4,
            &[
                1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0.,
            ],
        ),
        GateKind::Toffoli => {
            let mut rows = [0.0; 64];
            for i in 0..6 {
                rows[i * 8 + i] = 1.0;
            }
            rows[6 * 8 + 7] = 1.0;
            rows[7 * 8 + 6] = 1.0;
            real(8, &rows)
        }
        GateKind::EndorXor => real(
            4,
            &[
                1., 0., 0., 0., 0., 0., 0., 1., 0., -1., 0., 0., 0., 0., -1., 0.,
            ],
        ),
        GateKind::PhaseXor => real(
            4,
            &[
                1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 1., 0., 0., 0., 0., -1.,
            ],
        ),
        GateKind::Deutsch(u) => controlled_block(8, u),
        GateKind::ControlledV(v) => controlled_block(4, v),
        GateKind::F => complex2(
            e(FRAC_PI_4) * cos8,
            e(FRAC_PI_4) * sin8,
            -e(-FRAC_PI_4) * sin8,
            e(-FRAC_PI_4) * cos8,
        ),
        GateKind::G => real(2, &[cos8, -sin8, sin8, cos8]),
        GateKind::Hgate => complex2(e(-FRAC_PI_4), c(0., 0.), c(0., 0.), e(FRAC_PI_4)),
        GateKind::J => complex2(c(1., 0.), c(0., 0.), c(0., 0.), e(-FRAC_PI_4)),
        GateKind::Hadamard | GateKind::R => real(2, &[s, s, s, -s]),
        GateKind::RPrime => complex2(c(s, 0.), c(0., s), c(0., s), c(s, 0.)),
        GateKind::X => real(2, &[0., 1., 1., 0.]),
        GateKind::Y => complex2(c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)),
        GateKind::Z => real(2, &[1., 0., 0., -1.]),
        GateKind::Ry(t) => real(
            2,
            &[
                (t / 2.).cos(),
                -(t / 2.).sin(),
                (t / 2.).sin(),
                (t / 2.).cos(),
            ],
        ),
        GateKind::Rz(t) => complex2(e(-t / 2.), c(0., 0.), c(0., 0.), e(t / 2.)),
        GateKind::Phase(a) => complex2(c(1., 0.), c(0., 0.), c(0., 0.), e(*a)),
        GateKind::U(m) => m.clone(),
    }
}

/// A resolved gate definition with its matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct GateDef {
    pub gate: Gate,
    pub name: &'static str,
    pub arity: usize,
    pub params: Option<GateParams>,
    pub matrix: Unitary,
}

/// Looks up a library gate by identifier. Parameterized gates require
/// `params`; constant gates reject them.
pub fn gate(name: &str, params: Option<GateParams>) -> Result<GateDef> {
    let numeric: Vec<f64> = match &params {
        None => Vec::new(),
        Some(GateParams::Angle(t)) => vec![*t],
        Some(GateParams::Matrix(u)) => {
            if u.num_qubits() != 1 {
                return Err(Error::InvalidParams {
                    gate: name.into(),
                    reason: "expected a 2x2 unitary".into(),
                });
            }
            matrix_params(u)
        }
    };
    let gate = Gate::from_spec(name, &numeric, false)?;
    Ok(GateDef {
        name: gate.name(),
        arity: gate.arity(),
        params: gate.params(),
        matrix: gate.matrix(),
        gate,
    })
}

/// Hermitian `H` with `exp(iH) = u`, using principal eigenphases in (−π, π].
/// Any other branch choice gives another valid `H`; this one is canonical.
pub fn gate_to_hamiltonian(u: &Unitary) -> Result<Matrix> {
    if u.unitarity_deviation() > crate::unitary::UNITARITY_TOL {
        return Err(Error::NotUnitary {
            deviation: u.unitarity_deviation(),
        });
    }
    let h = u.map_spectrum(|z| c(principal_arg(z), 0.0))?;
    Ok((&h + h.adjoint()) * c(0.5, 0.0))
}
