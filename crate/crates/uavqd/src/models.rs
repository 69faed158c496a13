//! The built-in benchmark models: amplitude damping, the 3-chromophore FMO
//! network, and the Dicke emitter array with its Green's-function coupling
//! pipeline.
//!
//! Dicke units: hbar = c = 1, Gamma_0 = 1, lambda_0 = 1, so k_0 = 2 pi and
//! omega_0 = 2 pi; time is reported in units of 1/Gamma_0. The dipole
//! prefactor is eliminated by normalizing the self-term to
//! Gamma^{ii} = Gamma_0 via the analytic limit Im g -> k_0 / (6 pi).

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lindblad::{CMat, LindbladModel};

/// hbar in eV * fs; converts the FMO Hamiltonian from eV to fs^-1.
pub const HBAR_EV_FS: f64 = 0.6582119569;

fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn ketbra(dim: usize, i: usize, j: usize) -> CMat {
    let mut m = CMat::zeros(dim, dim);
    m[(i, j)] = cr(1.0);
    m
}

/// Two-level spontaneous emission: H = 0, single jump (gamma, |0><1|).
pub fn amplitude_damping_model(gamma: f64) -> Result<LindbladModel> {
    if gamma <= 0.0 {
        return Err(Error::InvalidArgument("gamma must be positive".into()));
    }
    LindbladModel::new(
        CMat::zeros(2, 2),
        vec![(gamma, ketbra(2, 0, 1))],
        vec![
            ("pop0".into(), ketbra(2, 0, 0)),
            ("pop1".into(), ketbra(2, 1, 1)),
        ],
        "ps",
    )
}

/// The pure initial state (1/2, sqrt(3)/2) as a density matrix.
pub fn amplitude_damping_initial() -> CMat {
    let a = 0.5;
    let b = 3.0_f64.sqrt() / 2.0;
    CMat::from_row_slice(2, 2, &[cr(a * a), cr(a * b), cr(a * b), cr(b * b)])
}

/// 3-chromophore FMO network: dim 5 (ground, sites 1-3, sink), energies in
/// eV converted to fs^-1, with dephasing, dissipation, and sink channels.
pub fn fmo_model(alpha: f64, beta: f64, gamma_sink: f64) -> Result<LindbladModel> {
    if alpha < 0.0 || beta < 0.0 || gamma_sink < 0.0 {
        return Err(Error::InvalidArgument("FMO rates must be nonnegative".into()));
    }
    let ev = [
        [0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0267, -0.0129, 0.000632, 0.0],
        [0.0, -0.0129, 0.0273, 0.00404, 0.0],
        [0.0, 0.000632, 0.00404, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0],
    ];
    let mut h = CMat::zeros(5, 5);
    for i in 0..5 {
        for j in 0..5 {
            h[(i, j)] = cr(ev[i][j] / HBAR_EV_FS);
        }
    }
    let mut jumps = Vec::new();
    for i in 1..=3 {
        jumps.push((alpha, ketbra(5, i, i))); // dephasing
    }
    for i in 1..=3 {
        jumps.push((beta, ketbra(5, 0, i))); // dissipation to ground
    }
    jumps.push((gamma_sink, ketbra(5, 4, 3))); // irreversible sink transfer
    let observables = vec![
        ("ground".into(), ketbra(5, 0, 0)),
        ("site1".into(), ketbra(5, 1, 1)),
        ("site2".into(), ketbra(5, 2, 2)),
        ("site3".into(), ketbra(5, 3, 3)),
        ("sink".into(), ketbra(5, 4, 4)),
    ];
    LindbladModel::new(h, jumps, observables, "fs")
}

/// |1><1|: only the first chromophore excited.
pub fn fmo_initial() -> CMat {
    ketbra(5, 1, 1)
}

/// Emitter positions (units of lambda_0) with a common dipole orientation.
#[derive(Clone, Debug)]
pub struct EmitterGeometry {
    pub positions: Vec<Vector3<f64>>,
    pub polarization: Vector3<f64>,
    pub omega0: f64,
    pub gamma0: f64,
}

impl EmitterGeometry {
    pub fn new(positions: Vec<Vector3<f64>>, polarization: Vector3<f64>) -> Result<Self> {
        if positions.len() < 2 {
            return Err(Error::InvalidArgument("need at least 2 emitters".into()));
        }
        for i in 0..positions.len() {
            for j in 0..i {
                if (positions[i] - positions[j]).norm() < 1e-12 {
                    return Err(Error::InvalidArgument(format!(
                        "emitters {j} and {i} coincide"
                    )));
                }
            }
        }
        let norm = polarization.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "polarization norm {norm} != 1"
            )));
        }
        Ok(Self {
            positions,
            polarization,
            omega0: 2.0 * std::f64::consts::PI,
            gamma0: 1.0,
        })
    }

    /// Linear chain along x with transverse (z) dipoles.
    pub fn chain(n: usize, spacing_over_lambda: f64) -> Result<Self> {
        let positions = (0..n)
            .map(|i| Vector3::new(i as f64 * spacing_over_lambda, 0.0, 0.0))
            .collect();
        Self::new(positions, Vector3::new(0.0, 0.0, 1.0))
    }

    /// Near-square grid in the xy plane with z dipoles.
    pub fn grid(n: usize, spacing_over_lambda: f64) -> Result<Self> {
        let cols = (n as f64).sqrt().ceil() as usize;
        let positions = (0..n)
            .map(|i| {
                Vector3::new(
                    (i % cols) as f64 * spacing_over_lambda,
                    (i / cols) as f64 * spacing_over_lambda,
                    0.0,
                )
            })
            .collect();
        Self::new(positions, Vector3::new(0.0, 0.0, 1.0))
    }

    pub fn n_atoms(&self) -> usize {
        self.positions.len()
    }

    pub fn k0(&self) -> f64 {
        self.omega0 // lambda_0 = 1, so k_0 = 2 pi = omega_0
    }
}

/// Free-space dyadic Green's tensor at separation `r` (nonzero).
pub fn dicke_green(r: &Vector3<f64>, k0: f64) -> Result<Matrix3<Complex64>> {
    let rn = r.norm();
    if rn <= 0.0 {
        return Err(Error::InvalidArgument(
            "Green's function needs nonzero separation".into(),
        ));
    }
    let xi = k0 * rn;
    let pref = Complex64::new(0.0, xi).exp() / cr(4.0 * std::f64::consts::PI * k0 * k0 * rn.powi(3));
    let iso = Complex64::new(xi * xi - 1.0, xi);
    let dyad = Complex64::new(-xi * xi + 3.0, -3.0 * xi);
    let rhat = r / rn;
    let mut g = Matrix3::<Complex64>::zeros();
    for a in 0..3 {
        for b in 0..3 {
            let delta = if a == b { 1.0 } else { 0.0 };
            g[(a, b)] = pref * (iso * cr(delta) + dyad * cr(rhat[a] * rhat[b]));
        }
    }
    Ok(g)
}

/// Coherent (J) and dissipative (Gamma) coupling matrices, normalized so
/// that the self-term is Gamma^{ii} = Gamma_0 and J^{ii} = 0.
pub fn dicke_couplings(g: &EmitterGeometry) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let n = g.n_atoms();
    let k0 = g.k0();
    // mu_0 omega_0^2 |P|^2 / hbar fixed by Im g(r -> 0) = k_0 / (6 pi)
    let pref = 3.0 * std::f64::consts::PI * g.gamma0 / k0;
    let mut j = DMatrix::<f64>::zeros(n, n);
    let mut gamma = DMatrix::<f64>::zeros(n, n);
    for a in 0..n {
        gamma[(a, a)] = g.gamma0;
        for b in 0..a {
            let r = g.positions[a] - g.positions[b];
            let tensor = dicke_green(&r, k0)?;
            let p = g.polarization;
            let mut proj = Complex64::default();
            for x in 0..3 {
                for y in 0..3 {
                    proj += cr(p[x]) * tensor[(x, y)] * cr(p[y]);
                }
            }
            let jv = -pref * proj.re;
            let gv = 2.0 * pref * proj.im;
            j[(a, b)] = jv;
            j[(b, a)] = jv;
            gamma[(a, b)] = gv;
            gamma[(b, a)] = gv;
        }
    }
    Ok((j, gamma))
}

/// Eigenmodes of the dissipation matrix with their collective jump operators.
#[derive(Clone, Debug)]
pub struct CollectiveChannels {
    pub gamma_matrix: DMatrix<f64>,
    /// Descending decay rates.
    pub decay_rates: Vec<f64>,
    /// Orthonormal eigenvector columns, same order as `decay_rates`.
    pub eigenvectors: DMatrix<f64>,
    /// Unit-rate jump operators on the 2^{n_atoms} space.
    pub jump_operators: Vec<CMat>,
}

impl CollectiveChannels {
    pub fn n_atoms(&self) -> usize {
        self.gamma_matrix.nrows()
    }

    /// sum_nu Gamma_nu L_nu^dag L_nu.
    pub fn rate_operator(&self) -> CMat {
        let d = 1 << self.n_atoms();
        let mut op = CMat::zeros(d, d);
        for (rate, l) in self.decay_rates.iter().zip(&self.jump_operators) {
            op += l.adjoint() * l * cr(*rate);
        }
        op
    }
}

/// sigma_ge = |g><e| at `site`, excited = bit 1, qubit 0 leftmost.
fn sigma_ge(n_atoms: usize, site: usize) -> CMat {
    let d = 1 << n_atoms;
    let bit = 1usize << (n_atoms - 1 - site);
    let mut m = CMat::zeros(d, d);
    for b in 0..d {
        if b & bit != 0 {
            m[(b & !bit, b)] = cr(1.0);
        }
    }
    m
}

/// Diagonalize the dissipation matrix into collective decay channels,
/// ordered by descending rate with the largest-magnitude eigenvector entry
/// made positive.
pub fn collective_jump_ops(gamma_matrix: &DMatrix<f64>) -> Result<CollectiveChannels> {
    let n = gamma_matrix.nrows();
    if gamma_matrix.ncols() != n {
        return Err(Error::DimensionMismatch("Gamma matrix must be square".into()));
    }
    let sym_dev = (gamma_matrix - gamma_matrix.transpose())
        .iter()
        .map(|x| x.abs())
        .fold(0.0, f64::max);
    if sym_dev > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "Gamma matrix not symmetric (deviation {sym_dev:.3e})"
        )));
    }
    let eig = gamma_matrix.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let mut decay_rates = Vec::with_capacity(n);
    let mut eigenvectors = DMatrix::<f64>::zeros(n, n);
    for (col, &idx) in order.iter().enumerate() {
        let rate = eig.eigenvalues[idx];
        if rate < -1e-8 {
            return Err(Error::InvalidArgument(format!(
                "negative collective decay rate {rate:.3e}"
            )));
        }
        let mut v: DVector<f64> = eig.eigenvectors.column(idx).into();
        let mut max_abs = 0.0;
        let mut max_i = 0;
        for (i, x) in v.iter().enumerate() {
            if x.abs() > max_abs {
                max_abs = x.abs();
                max_i = i;
            }
        }
        if v[max_i] < 0.0 {
            v.neg_mut();
        }
        decay_rates.push(rate.max(0.0));
        eigenvectors.set_column(col, &v);
    }
    let jump_operators = (0..n)
        .map(|nu| {
            let mut l = CMat::zeros(1 << n, 1 << n);
            for i in 0..n {
                l += sigma_ge(n, i) * cr(eigenvectors[(i, nu)]);
            }
            l
        })
        .collect();
    Ok(CollectiveChannels {
        gamma_matrix: gamma_matrix.clone(),
        decay_rates,
        eigenvectors,
        jump_operators,
    })
}

/// Channels for a geometry: couplings, then diagonalization.
pub fn dicke_channels(g: &EmitterGeometry) -> Result<(DMatrix<f64>, CollectiveChannels)> {
    let (j, gamma) = dicke_couplings(g)?;
    Ok((j, collective_jump_ops(&gamma)?))
}

/// Full Dicke Lindblad model in the frame rotating at omega_0 (J terms
/// only; set `include_omega0` to retain the bare-energy diagonal).
pub fn dicke_model_with_options(g: &EmitterGeometry, include_omega0: bool) -> Result<LindbladModel> {
    let n = g.n_atoms();
    if n > 4 {
        return Err(Error::InvalidArgument(format!(
            "at most 4 emitters supported, got {n}"
        )));
    }
    let (j, channels) = dicke_channels(g)?;
    let d = 1 << n;
    let mut h = CMat::zeros(d, d);
    for a in 0..n {
        for b in 0..n {
            if a != b {
                h += sigma_ge(n, a).adjoint() * sigma_ge(n, b) * cr(j[(a, b)]);
            }
        }
    }
    if include_omega0 {
        for a in 0..n {
            let s = sigma_ge(n, a);
            h += s.adjoint() * s * cr(g.omega0);
        }
    }
    let jumps = channels
        .decay_rates
        .iter()
        .zip(&channels.jump_operators)
        .map(|(r, l)| (*r, l.clone()))
        .collect();
    let mut observables = vec![("n_exc".into(), {
        let mut tot = CMat::zeros(d, d);
        for a in 0..n {
            let s = sigma_ge(n, a);
            tot += s.adjoint() * s;
        }
        tot
    })];
    for a in 0..n {
        let s = sigma_ge(n, a);
        observables.push((format!("exc{}", a + 1), s.adjoint() * s));
    }
    observables.push(("emission".into(), channels.rate_operator()));
    LindbladModel::new(h, jumps, observables, "1/Gamma0")
}

/// Dicke model with the default rotating frame.
pub fn dicke_model(g: &EmitterGeometry) -> Result<LindbladModel> {
    dicke_model_with_options(g, false)
}

/// Fully inverted initial state |e...e><e...e|.
pub fn dicke_initial(n_atoms: usize) -> CMat {
    let d = 1 << n_atoms;
    ketbra(d, d - 1, d - 1)
}

/// eta = Re Tr(rho * sum_nu Gamma_nu L_nu^dag L_nu).
pub fn emission_rate(rho: &CMat, channels: &CollectiveChannels) -> Result<f64> {
    crate::lindblad::expectation(rho, &channels.rate_operator())
}
