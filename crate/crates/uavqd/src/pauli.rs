//! Pauli strings, their statevector action, and operator pools.
//!
//! Conventions used throughout the crate:
//! * qubit 0 is the leftmost Kronecker factor (most significant bit of a
//!   basis index);
//! * a rotation generated by a Pauli string `P` is `exp(-i * theta * P / 2)`.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

type CMat = DMatrix<Complex64>;

/// One letter of a Pauli word. The derived ordering (`I < X < Y < Z`) fixes
/// the deterministic pool order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn matrix(self) -> CMat {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Letter::I => CMat::from_row_slice(2, 2, &[one, z, z, one]),
            Letter::X => CMat::from_row_slice(2, 2, &[z, one, one, z]),
            Letter::Y => CMat::from_row_slice(2, 2, &[z, -i, i, z]),
            Letter::Z => CMat::from_row_slice(2, 2, &[one, z, z, -one]),
        }
    }

    fn from_char(c: char) -> Result<Self> {
        match c {
            'I' => Ok(Letter::I),
            'X' => Ok(Letter::X),
            'Y' => Ok(Letter::Y),
            'Z' => Ok(Letter::Z),
            other => Err(Error::InvalidArgument(format!(
                "invalid Pauli letter '{other}'"
            ))),
        }
    }

    fn to_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

/// A word over {I, X, Y, Z} on `n` qubits with at least one non-identity
/// letter.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<Letter>,
}

impl PauliString {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidArgument("empty Pauli string".into()));
        }
        if letters.iter().all(|&l| l == Letter::I) {
            return Err(Error::InvalidArgument(
                "all-identity Pauli string is not allowed".into(),
            ));
        }
        Ok(Self { letters })
    }

    /// Parse a letter word such as `"IXZIYI"`.
    pub fn parse(word: &str) -> Result<Self> {
        let letters = word
            .chars()
            .map(Letter::from_char)
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&l| l != Letter::I).count()
    }

    /// Indices of the non-identity letters, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, &l)| l != Letter::I)
            .map(|(q, _)| q)
            .collect()
    }

    /// Dense 2^n x 2^n matrix, qubit 0 as the leftmost Kronecker factor.
    pub fn matrix(&self) -> CMat {
        let mut m = self.letters[0].matrix();
        for l in &self.letters[1..] {
            m = m.kronecker(&l.matrix());
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

/// Dense complex statevector on `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    amps: Vec<Complex64>,
}

impl State {
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() || !amps.len().is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "state length {} is not a power of two",
                amps.len()
            )));
        }
        Ok(Self { amps })
    }

    /// Computational basis state |idx> on `n_qubits` qubits.
    pub fn basis(n_qubits: usize, idx: usize) -> Self {
        let mut amps = vec![Complex64::default(); 1 << n_qubits];
        amps[idx] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn n_qubits(&self) -> usize {
        self.amps.len().trailing_zeros() as usize
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// <self|other>.
    pub fn inner(&self, other: &State) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&mut self, c: Complex64) {
        for a in &mut self.amps {
            *a *= c;
        }
    }
}

/// Dense matrix of `p`; same as [`PauliString::matrix`], kept as a free
/// function mirroring the operation set.
pub fn pauli_matrix(p: &PauliString) -> CMat {
    p.matrix()
}

/// Apply `p` to `s` by bit-mask traversal, without forming the dense matrix.
pub fn apply_pauli(p: &PauliString, s: &State) -> Result<State> {
    let n = p.n_qubits();
    if n != s.n_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "Pauli string on {n} qubits applied to state on {} qubits",
            s.n_qubits()
        )));
    }
    let mut flip = 0usize;
    let mut phase_mask = 0usize; // bits contributing (-1)^bit: Y and Z letters
    let mut n_y = 0usize;
    for (q, &l) in p.letters.iter().enumerate() {
        let bit = 1usize << (n - 1 - q);
        match l {
            Letter::I => {}
            Letter::X => flip |= bit,
            Letter::Y => {
                flip |= bit;
                phase_mask |= bit;
                n_y += 1;
            }
            Letter::Z => phase_mask |= bit,
        }
    }
    // Y|b> = i (-1)^b |1-b>, so the string carries a global i^{#Y}.
    let i_pow = match n_y % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    let mut out = vec![Complex64::default(); s.amps.len()];
    for (b, &amp) in s.amps.iter().enumerate() {
        let sign = if (b & phase_mask).count_ones() % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        out[b ^ flip] = i_pow * sign * amp;
    }
    Ok(State { amps: out })
}

/// Apply the rotation `exp(-i * theta * P / 2)` to `s`:
/// `cos(theta/2) s - i sin(theta/2) P s`.
pub fn apply_rotation(p: &PauliString, theta: f64, s: &State) -> Result<State> {
    let ps = apply_pauli(p, s)?;
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let ms = Complex64::new(0.0, -(theta / 2.0).sin());
    let amps = s
        .amps
        .iter()
        .zip(&ps.amps)
        .map(|(a, b)| c * a + ms * b)
        .collect();
    Ok(State { amps })
}

/// Ordered set of distinct Pauli strings with weight at most `max_weight`.
#[derive(Clone, Debug)]
pub struct OperatorPool {
    pub n_qubits: usize,
    pub max_weight: usize,
    pub members: Vec<PauliString>,
}

impl OperatorPool {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// All Pauli strings of weight 1..=max_weight on `n_qubits` qubits, ordered
/// by ascending weight, then lexicographic support, then letters X < Y < Z.
pub fn build_pool(n_qubits: usize, max_weight: usize) -> Result<OperatorPool> {
    if n_qubits == 0 || n_qubits > 12 {
        return Err(Error::InvalidArgument(format!(
            "n_qubits {n_qubits} outside 1..=12"
        )));
    }
    if max_weight == 0 || max_weight > n_qubits {
        return Err(Error::InvalidArgument(format!(
            "max_weight {max_weight} outside 1..={n_qubits}"
        )));
    }
    use itertools::Itertools;
    let paulis = [Letter::X, Letter::Y, Letter::Z];
    let mut members = Vec::new();
    for w in 1..=max_weight {
        for support in (0..n_qubits).combinations(w) {
            for assignment in (0..w).map(|_| paulis).multi_cartesian_product() {
                let mut letters = vec![Letter::I; n_qubits];
                for (&q, &l) in support.iter().zip(assignment.iter()) {
                    letters[q] = l;
                }
                members.push(PauliString { letters });
            }
        }
    }
    Ok(OperatorPool {
        n_qubits,
        max_weight,
        members,
    })
}
