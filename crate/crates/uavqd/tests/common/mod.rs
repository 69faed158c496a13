//! Shared oracles for the integration tests: a matrix exponential built from
//! scaling-and-squaring plus a Taylor series (independent of everything in
//! the crate under test), the Lindblad right-hand side written directly in
//! superoperator-free form, and seeded random fixtures.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use uavqd::lindblad::LindbladModel;
use uavqd::pauli::State;
use uavqd::variational::{Ansatz, Layer};
use uavqd::PauliString;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn max_abs_vec(v: &CVec) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// exp(A) by scaling-and-squaring with a plain Taylor series.
pub fn expm(a: &CMat) -> CMat {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    let norm = a.iter().map(|x| x.norm()).sum::<f64>().max(1e-300);
    let s = norm.log2().ceil().max(0.0) as u32 + 1;
    let scaled = a / c(2f64.powi(s as i32), 0.0);
    let mut result = CMat::identity(n, n);
    let mut term = CMat::identity(n, n);
    for k in 1..200 {
        term = (&term * &scaled) / c(k as f64, 0.0);
        result += &term;
        if max_abs(&term) < 1e-19 {
            break;
        }
    }
    for _ in 0..s {
        result = &result * &result;
    }
    result
}

/// d rho / dt written straight from the master equation:
/// -i[H, rho] + sum_k gamma_k (L rho L^dag - {L^dag L, rho}/2).
pub fn lindblad_rhs(h: &CMat, jumps: &[(f64, CMat)], rho: &CMat) -> CMat {
    let i = c(0.0, 1.0);
    let mut out = -(h * rho - rho * h) * i;
    for (rate, l) in jumps {
        let ld = l.adjoint();
        let ldl = &ld * l;
        out += (l * rho * &ld - (&ldl * rho + rho * &ldl) * c(0.5, 0.0)) * c(*rate, 0.0);
    }
    out
}

/// Same, on the padded operators of a model.
pub fn model_rhs(model: &LindbladModel, rho: &CMat) -> CMat {
    lindblad_rhs(&model.padded_hamiltonian(), &model.padded_jumps(), rho)
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    CMat::from_fn(n, n, |_, _| random_complex(rng))
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    let m = random_matrix(rng, n);
    (&m + m.adjoint()) * c(0.5, 0.0)
}

/// Random density matrix via G G^dag / Tr.
pub fn random_density(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    let g = random_matrix(rng, n);
    let p = &g * g.adjoint();
    let tr = p.trace();
    p / tr
}

pub fn random_unit_state(rng: &mut ChaCha8Rng, n_qubits: usize) -> State {
    let amps: Vec<Complex64> = (0..(1usize << n_qubits))
        .map(|_| random_complex(rng))
        .collect();
    let mut s = State::new(amps).unwrap();
    let n = s.norm();
    s.scale(c(1.0 / n, 0.0));
    s
}

pub fn random_pauli(rng: &mut ChaCha8Rng, n_qubits: usize) -> PauliString {
    loop {
        let word: String = (0..n_qubits)
            .map(|_| ['I', 'X', 'Y', 'Z'][rng.gen_range(0..4)])
            .collect();
        if let Ok(p) = PauliString::parse(&word) {
            return p;
        }
    }
}

pub fn random_ansatz(rng: &mut ChaCha8Rng, n_qubits: usize, n_layers: usize) -> Ansatz {
    let mut a = Ansatz::new(random_unit_state(rng, n_qubits), 0.0);
    for _ in 0..n_layers {
        a.layers.push(Layer {
            generator: random_pauli(rng, n_qubits),
            theta: rng.gen_range(-2.0..2.0),
        });
    }
    a
}

/// Dense state of the ansatz via explicit matrix products — no shared code
/// with the bit-twiddling implementation under test.
pub fn dense_ansatz_state(a: &Ansatz) -> CVec {
    let d = 1usize << a.n_qubits();
    let mut v = CVec::from_iterator(d, a.reference.amplitudes().iter().copied());
    for layer in &a.layers {
        let p = layer.generator.matrix();
        let gen = &p * c(0.0, -layer.theta / 2.0);
        v = expm(&gen) * v;
    }
    v
}
