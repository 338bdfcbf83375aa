//! Three-qubit pure states, product states and two-qubit pair reductions.
//!
//! Amplitudes are stored against the computational basis with index
//! `i = 4*q1 + 2*q2 + q3`, so qubit 1 owns the most significant bit.
//! The pair reduction of a state packages everything the overlap
//! optimization needs once the third qubit has been eliminated: the two
//! single-qubit Bloch vectors `r1`, `r2` and the 3x3 correlation matrix
//! `g` of the kept pair.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::linalg::{self, Mat3, Vec3};
use crate::{tol, Error, Result};

/// Which two qubits a [`PairReduction`] keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum QubitPair {
    Ab,
    Ac,
    Bc,
}

impl QubitPair {
    pub const ALL: [QubitPair; 3] = [QubitPair::Ab, QubitPair::Ac, QubitPair::Bc];

    /// Bit positions (first kept, second kept, traced) in the amplitude
    /// index.
    fn bits(self) -> (usize, usize, usize) {
        match self {
            QubitPair::Ab => (2, 1, 0),
            QubitPair::Ac => (2, 0, 1),
            QubitPair::Bc => (1, 0, 2),
        }
    }
}

/// A single-qubit pure state; always unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleQubitState {
    amps: [Complex64; 2],
}

impl SingleQubitState {
    /// Builds a state from two amplitudes, normalizing them.
    pub fn normalized(amps: [Complex64; 2]) -> Result<Self> {
        let n = (amps[0].norm_sqr() + amps[1].norm_sqr()).sqrt();
        if n == 0.0 {
            return Err(Error::NullState);
        }
        Ok(Self { amps: [amps[0] / n, amps[1] / n] })
    }

    /// The state `|0>` or `|1>`.
    pub fn basis(b: usize) -> Self {
        let mut amps = [Complex64::new(0.0, 0.0); 2];
        amps[b & 1] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    /// Builds the state whose Bloch vector is `s` (unit within 1e-10).
    ///
    /// Phase convention: the `|0>` amplitude is real and non-negative;
    /// on the south pole the `|1>` amplitude is exactly 1 with zero
    /// phase.
    pub fn from_bloch(s: Vec3) -> Result<Self> {
        let dev = (linalg::norm(s) - 1.0).abs();
        if dev > tol::BLOCH_NORM {
            return Err(Error::NotUnitBloch(dev));
        }
        let a0 = (0.5 * (1.0 + s[2])).max(0.0).sqrt();
        let r1 = (0.5 * (1.0 - s[2])).max(0.0).sqrt();
        // atan2(0, 0) = 0, so the south pole gets phase 0 for free
        let phi = s[1].atan2(s[0]);
        Ok(Self {
            amps: [
                Complex64::new(a0, 0.0),
                Complex64::new(r1 * phi.cos(), r1 * phi.sin()),
            ],
        })
    }

    /// Bloch vector of the state.
    pub fn bloch(&self) -> Vec3 {
        let rho01 = self.amps[0] * self.amps[1].conj();
        [
            2.0 * rho01.re,
            -2.0 * rho01.im,
            self.amps[0].norm_sqr() - self.amps[1].norm_sqr(),
        ]
    }

    pub fn amps(&self) -> &[Complex64; 2] {
        &self.amps
    }

    /// `<self|other>`
    pub fn inner(&self, other: &SingleQubitState) -> Complex64 {
        self.amps[0].conj() * other.amps[0] + self.amps[1].conj() * other.amps[1]
    }
}

impl Serialize for SingleQubitState {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.amps.iter().map(|a| [a.re, a.im]).collect();
        let mut st = ser.serialize_struct("SingleQubitState", 1)?;
        st.serialize_field("amps", &pairs)?;
        st.end()
    }
}

/// A product state `|q1>|q2>|q3>`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductState {
    pub q1: SingleQubitState,
    pub q2: SingleQubitState,
    pub q3: SingleQubitState,
}

impl ProductState {
    pub fn new(q1: SingleQubitState, q2: SingleQubitState, q3: SingleQubitState) -> Self {
        Self { q1, q2, q3 }
    }
}

/// A three-qubit pure state, unit norm within 1e-12.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState3 {
    amps: [Complex64; 8],
}

impl PureState3 {
    /// Accepts amplitudes that are already normalized (within 1e-12).
    pub fn new(amps: [Complex64; 8]) -> Result<Self> {
        let n: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let dev = (n - 1.0).abs();
        if dev > tol::STATE_NORM {
            return Err(Error::NotNormalized(dev));
        }
        Ok(Self { amps })
    }

    /// Normalizes arbitrary amplitudes; a zero vector is a null state.
    pub fn normalized(amps: [Complex64; 8]) -> Result<Self> {
        let n: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if n == 0.0 {
            return Err(Error::NullState);
        }
        let mut out = amps;
        for a in &mut out {
            *a /= n;
        }
        Ok(Self { amps: out })
    }

    pub fn amps(&self) -> &[Complex64; 8] {
        &self.amps
    }

    /// `(|100> + |010> + |001>) / sqrt(3)`
    pub fn w() -> Self {
        Self::wtype(1.0, 1.0, 1.0).unwrap()
    }

    /// `(|011> + |101> + |110>) / sqrt(3)`, the bit-flipped W state.
    pub fn w_tilde() -> Self {
        let k = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
        let mut amps = [Complex64::new(0.0, 0.0); 8];
        amps[0b011] = k;
        amps[0b101] = k;
        amps[0b110] = k;
        Self { amps }
    }

    /// `(|000> + |111>) / sqrt(2)`
    pub fn ghz() -> Self {
        Self::symmetric(1.0, 1.0, 0.0, 0.0).unwrap()
    }

    /// `a|100> + b|010> + c|001>` with `a, b, c >= 0`, normalized.
    pub fn wtype(a: f64, b: f64, c: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("c", c)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParam(format!(
                    "wtype coefficient {name} = {v} must be finite and non-negative"
                )));
            }
        }
        let mut amps = [Complex64::new(0.0, 0.0); 8];
        amps[0b100] = Complex64::new(a, 0.0);
        amps[0b010] = Complex64::new(b, 0.0);
        amps[0b001] = Complex64::new(c, 0.0);
        Self::normalized(amps)
    }

    /// `a|000> + b|111> + c|001> + d|110>` with real coefficients,
    /// normalized.
    pub fn symmetric(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("c", c), ("d", d)] {
            if !v.is_finite() {
                return Err(Error::InvalidParam(format!(
                    "symmetric coefficient {name} = {v} must be finite"
                )));
            }
        }
        let mut amps = [Complex64::new(0.0, 0.0); 8];
        amps[0b000] = Complex64::new(a, 0.0);
        amps[0b111] = Complex64::new(b, 0.0);
        amps[0b001] = Complex64::new(c, 0.0);
        amps[0b110] = Complex64::new(d, 0.0);
        Self::normalized(amps)
    }

    /// `cos(theta) W + sin(theta) W-tilde` for `theta` in `[0, pi/2]`.
    pub fn ww(theta: f64) -> Result<Self> {
        if !theta.is_finite() || !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidParam(format!(
                "ww angle theta = {theta} must lie in [0, pi/2]"
            )));
        }
        let w = Complex64::new(theta.cos() / 3f64.sqrt(), 0.0);
        let wt = Complex64::new(theta.sin() / 3f64.sqrt(), 0.0);
        let mut amps = [Complex64::new(0.0, 0.0); 8];
        amps[0b100] = w;
        amps[0b010] = w;
        amps[0b001] = w;
        amps[0b011] = wt;
        amps[0b101] = wt;
        amps[0b110] = wt;
        Ok(Self { amps })
    }

    /// Haar-like random state: i.i.d. complex Gaussian amplitudes,
    /// normalized.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut amps = [Complex64::new(0.0, 0.0); 8];
        for a in &mut amps {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            *a = Complex64::new(re, im);
        }
        Self::normalized(amps).expect("gaussian amplitudes cannot all vanish")
    }

    /// `|<prod|self>|^2`
    pub fn overlap_sq(&self, prod: &ProductState) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, amp) in self.amps.iter().enumerate() {
            let f = prod.q1.amps[(i >> 2) & 1] * prod.q2.amps[(i >> 1) & 1] * prod.q3.amps[i & 1];
            acc += f.conj() * amp;
        }
        acc.norm_sqr()
    }

    /// Contracts two fixed single-qubit factors out of the state,
    /// leaving the unnormalized 2-vector over the remaining qubit.
    ///
    /// `keep` is the remaining qubit (0, 1 or 2); `qa` and `qb` are the
    /// factors for the other two qubits in ascending qubit order.
    pub(crate) fn contract_leaving(
        &self,
        keep: usize,
        qa: &SingleQubitState,
        qb: &SingleQubitState,
    ) -> [Complex64; 2] {
        let (ba, bb, bk) = match keep {
            0 => (1, 0, 2), // contract qubits 2, 3
            1 => (2, 0, 1), // contract qubits 1, 3
            _ => (2, 1, 0), // contract qubits 1, 2
        };
        let mut out = [Complex64::new(0.0, 0.0); 2];
        for u in 0..2usize {
            for v in 0..2usize {
                let f = (qa.amps[u] * qb.amps[v]).conj();
                for (w, slot) in out.iter_mut().enumerate() {
                    *slot += f * self.amps[(u << ba) | (v << bb) | (w << bk)];
                }
            }
        }
        out
    }

    /// The value the overlap takes at `(q1, q2)` after the third qubit
    /// has been eliminated: the nonzero eigenvalue of
    /// `tr_12(rho |q1><q1| x |q2><q2| x 1)`.
    pub(crate) fn eliminated_value(&self, q1: &SingleQubitState, q2: &SingleQubitState) -> f64 {
        let v = self.contract_leaving(2, q1, q2);
        v[0].norm_sqr() + v[1].norm_sqr()
    }

    /// Reduces the state to the Bloch data of one qubit pair.
    pub fn pair_reduction(&self, pair: QubitPair) -> PairReduction {
        let (hi, lo, tr) = pair.bits();
        let idx = |u: usize, v: usize, w: usize| (u << hi) | (v << lo) | (w << tr);
        let mut rho = [[Complex64::new(0.0, 0.0); 4]; 4];
        for u in 0..2usize {
            for v in 0..2usize {
                for u2 in 0..2usize {
                    for v2 in 0..2usize {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for w in 0..2usize {
                            acc += self.amps[idx(u, v, w)] * self.amps[idx(u2, v2, w)].conj();
                        }
                        rho[2 * u + v][2 * u2 + v2] = acc;
                    }
                }
            }
        }

        // single-qubit reductions of the kept pair
        let mut rho1 = [[Complex64::new(0.0, 0.0); 2]; 2];
        let mut rho2 = [[Complex64::new(0.0, 0.0); 2]; 2];
        for u in 0..2usize {
            for u2 in 0..2usize {
                for v in 0..2usize {
                    rho1[u][u2] += rho[2 * u + v][2 * u2 + v];
                    rho2[u][u2] += rho[2 * v + u][2 * v + u2];
                }
            }
        }

        let mut residue: f64 = 0.0;
        let mut real = |z: Complex64| {
            residue = residue.max(z.im.abs());
            z.re
        };

        let pauli = |k: usize| -> [[Complex64; 2]; 2] {
            match k {
                0 => [
                    [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
                    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                ],
                1 => [
                    [Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
                    [Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
                ],
                _ => [
                    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
                    [Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)],
                ],
            }
        };

        let trace1 = |rho_q: &[[Complex64; 2]; 2], k: usize| {
            let s = pauli(k);
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..2 {
                for b in 0..2 {
                    acc += rho_q[a][b] * s[b][a];
                }
            }
            acc
        };

        let mut r1 = [0.0; 3];
        let mut r2 = [0.0; 3];
        for k in 0..3 {
            r1[k] = real(trace1(&rho1, k));
            r2[k] = real(trace1(&rho2, k));
        }

        let mut g = [[0.0; 3]; 3];
        for (i, row) in g.iter_mut().enumerate() {
            let si = pauli(i);
            for (j, entry) in row.iter_mut().enumerate() {
                let sj = pauli(j);
                let mut acc = Complex64::new(0.0, 0.0);
                for a in 0..2 {
                    for b in 0..2 {
                        for c in 0..2 {
                            for d in 0..2 {
                                // tr(rho (si x sj)): (si x sj)[2c+d][2a+b]
                                acc += rho[2 * a + b][2 * c + d] * si[c][a] * sj[d][b];
                            }
                        }
                    }
                }
                *entry = real(acc);
            }
        }

        assert!(
            residue < tol::IMAG_RESIDUE,
            "pair reduction produced imaginary residue {residue:e}; \
             the density matrix is corrupt (internal error)"
        );

        PairReduction { pair, r1, r2, g }
    }
}

impl Serialize for PureState3 {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.amps.iter().map(|a| [a.re, a.im]).collect();
        let mut st = ser.serialize_struct("PureState3", 1)?;
        st.serialize_field("amps", &pairs)?;
        st.end()
    }
}

/// On-disk state representation: `{"amps": [[re, im], ... x8]}` with raw
/// (possibly unnormalized) amplitudes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub amps: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn from_state(state: &PureState3) -> Self {
        Self { amps: state.amps.iter().map(|a| [a.re, a.im]).collect() }
    }

    pub fn raw_amps(&self) -> Result<[Complex64; 8]> {
        if self.amps.len() != 8 {
            return Err(Error::Parse(format!(
                "state file must carry exactly 8 amplitudes, got {}",
                self.amps.len()
            )));
        }
        let mut amps = [Complex64::new(0.0, 0.0); 8];
        for (slot, pair) in amps.iter_mut().zip(&self.amps) {
            if !pair[0].is_finite() || !pair[1].is_finite() {
                return Err(Error::Parse("non-finite amplitude in state file".into()));
            }
            *slot = Complex64::new(pair[0], pair[1]);
        }
        Ok(amps)
    }

    /// Norm of the raw amplitudes, for strict-mode checks.
    pub fn raw_norm(&self) -> f64 {
        self.amps.iter().map(|p| p[0] * p[0] + p[1] * p[1]).sum::<f64>().sqrt()
    }
}

/// Bloch data of a kept qubit pair: `Lambda^2` restricted to product
/// states is `overlap_form` maximized over the two unit vectors.
#[derive(Debug, Clone, Serialize)]
pub struct PairReduction {
    pub pair: QubitPair,
    pub r1: Vec3,
    pub r2: Vec3,
    pub g: Mat3,
}

impl PairReduction {
    /// `(1/4) (1 + s1.r1 + s2.r2 + s1^T g s2)` for unit Bloch vectors.
    pub fn overlap_form(&self, s1: Vec3, s2: Vec3) -> Result<f64> {
        for s in [s1, s2] {
            let dev = (linalg::norm(s) - 1.0).abs();
            if dev > tol::BLOCH_NORM {
                return Err(Error::NotUnitBloch(dev));
            }
        }
        Ok(0.25
            * (1.0
                + linalg::dot(s1, self.r1)
                + linalg::dot(s2, self.r2)
                + linalg::dot(s1, linalg::matvec(&self.g, s2))))
    }

    /// Cheap upper bound `(1/4)(1 + |r1| + |r2| + sigma_max(g))` on the
    /// overlap form.
    pub fn value_bound(&self) -> f64 {
        0.25 * (1.0 + linalg::norm(self.r1) + linalg::norm(self.r2) + linalg::sigma_max(&self.g))
    }
}
