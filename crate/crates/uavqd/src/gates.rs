//! Decomposition of multi-qubit Pauli rotations into CNOT + Rz +
//! single-qubit basis-change gates.
//!
//! A weight-k rotation `exp(-i theta P / 2)` becomes: one basis conjugator
//! per X/Y letter (H for X, H S^dag for Y, so that V Z V^dag recovers the
//! letter), a CNOT ladder chaining the support onto its last qubit, a single
//! Rz(theta) there, the reversed ladder, and the inverse conjugators. The
//! identity is exact, with no global phase.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{Letter, PauliString};

type CMat = DMatrix<Complex64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    ToZFromX,
    ToZFromY,
    FromZToX,
    FromZToY,
}

impl BasisKind {
    pub fn name(self) -> &'static str {
        match self {
            BasisKind::ToZFromX => "to_z_from_x",
            BasisKind::ToZFromY => "to_z_from_y",
            BasisKind::FromZToX => "from_z_to_x",
            BasisKind::FromZToY => "from_z_to_y",
        }
    }

    /// The explicit 2x2 matrix of the basis change.
    pub fn matrix(self) -> Matrix2<Complex64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let c = |re: f64, im: f64| Complex64::new(re * s, im * s);
        match self {
            // Hadamard: H Z H = X
            BasisKind::FromZToX | BasisKind::ToZFromX => {
                Matrix2::new(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0))
            }
            // V = S H: V Z V^dag = Y
            BasisKind::FromZToY => {
                Matrix2::new(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0))
            }
            // V^dag = H S^dag
            BasisKind::ToZFromY => {
                Matrix2::new(c(1.0, 0.0), c(0.0, -1.0), c(1.0, 0.0), c(0.0, 1.0))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    Cnot { control: usize, target: usize },
    Rz { qubit: usize, angle: f64 },
    Basis { qubit: usize, kind: BasisKind },
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
            Gate::Rz { qubit, angle } => write!(f, "RZ {qubit} {angle}"),
            Gate::Basis { qubit, kind } => write!(f, "BASIS {qubit} {}", kind.name()),
        }
    }
}

/// Ordered primitive gates; earlier gates act on the state first.
#[derive(Clone, Debug)]
pub struct GateSequence {
    pub gates: Vec<Gate>,
    pub n_qubits: usize,
}

impl fmt::Display for GateSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Decompose `exp(-i theta P / 2)` into the CNOT-ladder form.
pub fn decompose_rotation(p: &PauliString, theta: f64) -> Result<GateSequence> {
    let support = p.support();
    if support.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot decompose an all-identity rotation".into(),
        ));
    }
    let mut gates = Vec::new();
    for &q in &support {
        match p.letters()[q] {
            Letter::X => gates.push(Gate::Basis {
                qubit: q,
                kind: BasisKind::ToZFromX,
            }),
            Letter::Y => gates.push(Gate::Basis {
                qubit: q,
                kind: BasisKind::ToZFromY,
            }),
            _ => {}
        }
    }
    for w in support.windows(2) {
        gates.push(Gate::Cnot {
            control: w[0],
            target: w[1],
        });
    }
    gates.push(Gate::Rz {
        qubit: *support.last().unwrap(),
        angle: theta,
    });
    for w in support.windows(2).rev() {
        gates.push(Gate::Cnot {
            control: w[0],
            target: w[1],
        });
    }
    for &q in &support {
        match p.letters()[q] {
            Letter::X => gates.push(Gate::Basis {
                qubit: q,
                kind: BasisKind::FromZToX,
            }),
            Letter::Y => gates.push(Gate::Basis {
                qubit: q,
                kind: BasisKind::FromZToY,
            }),
            _ => {}
        }
    }
    Ok(GateSequence {
        gates,
        n_qubits: p.n_qubits(),
    })
}

fn single_qubit_unitary(n: usize, qubit: usize, u: &Matrix2<Complex64>) -> CMat {
    let d = 1usize << n;
    let bit = 1usize << (n - 1 - qubit);
    let mut m = CMat::zeros(d, d);
    for col in 0..d {
        let cb = usize::from(col & bit != 0);
        for rb in 0..2 {
            let row = (col & !bit) | if rb == 1 { bit } else { 0 };
            m[(row, col)] = u[(rb, cb)];
        }
    }
    m
}

fn gate_matrix(g: &Gate, n: usize) -> CMat {
    let d = 1usize << n;
    match g {
        Gate::Cnot { control, target } => {
            let cbit = 1usize << (n - 1 - control);
            let tbit = 1usize << (n - 1 - target);
            let mut m = CMat::zeros(d, d);
            for col in 0..d {
                let row = if col & cbit != 0 { col ^ tbit } else { col };
                m[(row, col)] = Complex64::new(1.0, 0.0);
            }
            m
        }
        Gate::Rz { qubit, angle } => {
            let u = Matrix2::new(
                Complex64::new(0.0, -angle / 2.0).exp(),
                Complex64::default(),
                Complex64::default(),
                Complex64::new(0.0, angle / 2.0).exp(),
            );
            single_qubit_unitary(n, *qubit, &u)
        }
        Gate::Basis { qubit, kind } => single_qubit_unitary(n, *qubit, &kind.matrix()),
    }
}

/// Dense unitary of the sequence: later gates multiply from the left.
pub fn sequence_unitary(seq: &GateSequence) -> Result<CMat> {
    if seq.n_qubits > 6 {
        return Err(Error::InvalidArgument(format!(
            "sequence_unitary limited to 6 qubits, got {}",
            seq.n_qubits
        )));
    }
    for g in &seq.gates {
        let bad = match g {
            Gate::Cnot { control, target } => {
                control == target || *control >= seq.n_qubits || *target >= seq.n_qubits
            }
            Gate::Rz { qubit, .. } | Gate::Basis { qubit, .. } => *qubit >= seq.n_qubits,
        };
        if bad {
            return Err(Error::InvalidArgument(format!("invalid gate '{g}'")));
        }
    }
    let d = 1usize << seq.n_qubits;
    let mut u = CMat::identity(d, d);
    for g in &seq.gates {
        u = gate_matrix(g, seq.n_qubits) * u;
    }
    Ok(u)
}

/// Tallies per gate kind.
pub fn gate_count(seq: &GateSequence) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::from([
        ("CNOT".to_string(), 0),
        ("RZ".to_string(), 0),
        ("BASIS".to_string(), 0),
    ]);
    for g in &seq.gates {
        let key = match g {
            Gate::Cnot { .. } => "CNOT",
            Gate::Rz { .. } => "RZ",
            Gate::Basis { .. } => "BASIS",
        };
        *counts.get_mut(key).unwrap() += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_z_is_one_rz() {
        let p = PauliString::parse("Z").unwrap();
        let seq = decompose_rotation(&p, 0.4).unwrap();
        assert_eq!(seq.gates.len(), 1);
        assert!(matches!(seq.gates[0], Gate::Rz { qubit: 0, .. }));
    }

    #[test]
    fn zz_ladder_structure() {
        let p = PauliString::parse("ZZ").unwrap();
        let seq = decompose_rotation(&p, 0.4).unwrap();
        let counts = gate_count(&seq);
        assert_eq!(counts["CNOT"], 2);
        assert_eq!(counts["RZ"], 1);
        assert_eq!(counts["BASIS"], 0);
        assert!(matches!(seq.gates[0], Gate::Cnot { control: 0, target: 1 }));
        assert!(matches!(seq.gates[1], Gate::Rz { qubit: 1, .. }));
    }

    #[test]
    fn xyzi_counts() {
        let p = PauliString::parse("XYZI").unwrap();
        let seq = decompose_rotation(&p, 0.7).unwrap();
        let counts = gate_count(&seq);
        assert_eq!(counts["CNOT"], 4);
        assert_eq!(counts["RZ"], 1);
        assert_eq!(counts["BASIS"], 4);
    }

    #[test]
    fn weight4_all_x_counts() {
        let p = PauliString::parse("XXXX").unwrap();
        let seq = decompose_rotation(&p, 1.1).unwrap();
        let counts = gate_count(&seq);
        assert_eq!(counts["CNOT"], 6);
        assert_eq!(counts["RZ"], 1);
        assert_eq!(counts["BASIS"], 8);
    }

    #[test]
    fn total_count_is_affine_in_weight() {
        // all-Z strings: total = 2(k-1) + 1 = 2k - 1
        for k in 1..=6 {
            let word: String = "Z".repeat(k);
            let p = PauliString::parse(&word).unwrap();
            let seq = decompose_rotation(&p, 0.3).unwrap();
            assert_eq!(seq.gates.len(), 2 * k - 1);
        }
    }

    #[test]
    fn empty_sequence_is_identity() {
        let seq = GateSequence {
            gates: vec![],
            n_qubits: 2,
        };
        let u = sequence_unitary(&seq).unwrap();
        assert!((u - CMat::identity(4, 4)).iter().map(|x| x.norm()).fold(0.0, f64::max) < 1e-15);
    }

    #[test]
    fn cnot_permutation_matrix() {
        let seq = GateSequence {
            gates: vec![Gate::Cnot { control: 0, target: 1 }],
            n_qubits: 2,
        };
        let u = sequence_unitary(&seq).unwrap();
        // |10> -> |11>, |11> -> |10>
        assert_eq!(u[(0, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(u[(1, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(u[(3, 2)], Complex64::new(1.0, 0.0));
        assert_eq!(u[(2, 3)], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn basis_gates_conjugate_z_correctly() {
        let z = PauliString::parse("Z").unwrap().matrix();
        for (kind, letter) in [
            (BasisKind::FromZToX, "X"),
            (BasisKind::FromZToY, "Y"),
        ] {
            let v = kind.matrix();
            let vd = v.adjoint();
            let vzvd = CMat::from_fn(2, 2, |i, j| {
                (0..2)
                    .flat_map(|k| (0..2).map(move |l| (k, l)))
                    .map(|(k, l)| v[(i, k)] * z[(k, l)] * vd[(l, j)])
                    .sum()
            });
            let expect = PauliString::parse(letter).unwrap().matrix();
            assert!(
                (vzvd - expect).iter().map(|x| x.norm()).fold(0.0, f64::max) < 1e-14,
                "conjugation for {letter}"
            );
        }
    }

    #[test]
    fn all_identity_rejected() {
        assert!(PauliString::parse("III").is_err());
    }

    #[test]
    fn cnot_self_loop_rejected() {
        let seq = GateSequence {
            gates: vec![Gate::Cnot { control: 1, target: 1 }],
            n_qubits: 2,
        };
        assert!(sequence_unitary(&seq).is_err());
    }
}
