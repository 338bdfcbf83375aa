//! Brute-force maximizer of the product overlap, independent of every
//! closed form in the crate.
//!
//! The search space is only four-dimensional, not six: for any fixed
//! factors on the first two qubits the optimal third factor is the
//! normalized partial contraction of the state, and the overlap it
//! achieves is the contraction's squared norm (the nonzero eigenvalue of
//! the projected 2x2 matrix — the other eigenvalue is always zero). The
//! oracle therefore grids the two Bloch spheres, eliminates the third
//! qubit exactly at every cell, and polishes the best cells plus seeded
//! random restarts with alternating single-qubit updates, each of which
//! is monotonically non-decreasing.
//!
//! Everything is deterministic: fixed sweep order A, B, C, fixed
//! tie-break (lowest cell index wins), and a seeded PRNG for restarts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::families::{lambda_symmetric, lambda_wtype, lambda_ww, SymmetricParams, WTypeParams};
use crate::linalg::{self, Vec3};
use crate::state::{ProductState, PureState3, SingleQubitState};
use crate::{tol, Result};

/// Search budget for the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleConfig {
    /// Grid points per angle on each Bloch sphere (the coarse scan
    /// visits `coarse_grid^4` cell pairs).
    pub coarse_grid: usize,
    /// Maximum alternating-update sweeps per polish.
    pub refine_iters: usize,
    /// Random restarts on top of the best coarse cells.
    pub restarts: usize,
    /// Stop refining once a full sweep improves the overlap by less
    /// than this.
    pub tol: f64,
    /// PRNG seed for restart points.
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            coarse_grid: 24,
            refine_iters: 200,
            restarts: 32,
            tol: 1e-12,
            seed: 0x5EED,
        }
    }
}

impl OracleConfig {
    /// A lighter budget for bulk scans; still converges to full
    /// precision on the smooth landscapes of this problem, with fewer
    /// coarse cells and restarts to hedge against local optima.
    pub fn quick() -> Self {
        Self {
            coarse_grid: 12,
            restarts: 8,
            ..Self::default()
        }
    }

    fn sanitized(&self) -> Self {
        Self {
            coarse_grid: self.coarse_grid.max(2),
            refine_iters: self.refine_iters.max(1),
            restarts: self.restarts.max(1),
            tol: if self.tol > 0.0 { self.tol } else { 1e-12 },
            seed: self.seed,
        }
    }
}

/// Outcome of an oracle run, with the restart-stability diagnostic.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub lambda_sq: f64,
    pub product: ProductState,
    /// Spread between the best and worst values the random restarts
    /// converged to.
    pub restart_spread: f64,
    /// True when the restart spread exceeds 1e-9, i.e. when restarts
    /// settled in distinct local optima.
    pub multimodal: bool,
}

/// Maximizes the squared product overlap; returns the value and the
/// maximizing product state.
pub fn oracle_maximize(state: &PureState3, cfg: &OracleConfig) -> (f64, ProductState) {
    let report = oracle_maximize_report(state, cfg);
    (report.lambda_sq, report.product)
}

/// As [`oracle_maximize`], also reporting restart stability.
pub fn oracle_maximize_report(state: &PureState3, cfg: &OracleConfig) -> OracleReport {
    let cfg = cfg.sanitized();
    let table = grid_qubits(cfg.coarse_grid);

    // coarse scan with exact third-qubit elimination; keep the best
    // cells, lowest linear index winning ties
    const TOP: usize = 8;
    let mut top: Vec<(f64, usize)> = Vec::with_capacity(TOP + 1);
    for (i, qi) in table.iter().enumerate() {
        for (j, qj) in table.iter().enumerate() {
            let v = state.eliminated_value(qi, qj);
            if top.len() == TOP && v <= top[TOP - 1].0 {
                continue;
            }
            let idx = i * table.len() + j;
            let pos = top.partition_point(|e| e.0 >= v);
            top.insert(pos, (v, idx));
            top.truncate(TOP);
        }
    }

    let mut best: Option<(f64, ProductState)> = None;
    let mut consider = |value: f64, prod: ProductState| {
        if best.as_ref().map_or(true, |(bv, _)| value > *bv) {
            best = Some((value, prod));
        }
    };

    for &(_, idx) in &top {
        let (i, j) = (idx / table.len(), idx % table.len());
        let prod = assemble(state, table[i].clone(), table[j].clone());
        let (v, p) = refine(state, prod, cfg.refine_iters, cfg.tol);
        consider(v, p);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut restart_lo = f64::INFINITY;
    let mut restart_hi = f64::NEG_INFINITY;
    for _ in 0..cfg.restarts {
        let q1 = random_qubit(&mut rng);
        let q2 = random_qubit(&mut rng);
        let prod = assemble(state, q1, q2);
        let (v, p) = refine(state, prod, cfg.refine_iters, cfg.tol);
        restart_lo = restart_lo.min(v);
        restart_hi = restart_hi.max(v);
        consider(v, p);
    }

    let (lambda_sq, product) = best.expect("at least one start");
    let restart_spread = if restart_hi >= restart_lo {
        restart_hi - restart_lo
    } else {
        0.0
    };
    OracleReport {
        lambda_sq,
        product,
        restart_spread,
        multimodal: restart_spread > 1e-9,
    }
}

/// A family point scanned by the oracle.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub family: String,
    pub params: Vec<f64>,
    pub lambda_sq: f64,
}

/// One family member to scan.
#[derive(Debug, Clone)]
pub enum FamilySample {
    WType(WTypeParams),
    Symmetric(SymmetricParams),
    Ww(f64),
}

impl FamilySample {
    pub fn state(&self) -> Result<PureState3> {
        match self {
            FamilySample::WType(p) => Ok(p.state()),
            FamilySample::Symmetric(p) => Ok(p.state()),
            FamilySample::Ww(theta) => PureState3::ww(*theta),
        }
    }

    /// The family's closed-form value, for cross-checks.
    pub fn analytic_value(&self) -> f64 {
        match self {
            FamilySample::WType(p) => lambda_wtype(p).0,
            FamilySample::Symmetric(p) => lambda_symmetric(p),
            FamilySample::Ww(theta) => lambda_ww(*theta).0,
        }
    }
}

/// Runs the oracle over a sequence of family members, producing one row
/// per sample in input order.
pub fn oracle_scan_family<I>(samples: I, cfg: &OracleConfig) -> Result<Vec<ScanRow>>
where
    I: IntoIterator<Item = FamilySample>,
{
    let mut rows = Vec::new();
    for sample in samples {
        let state = sample.state()?;
        let (lambda_sq, _) = oracle_maximize(&state, cfg);
        let (family, params) = match &sample {
            FamilySample::WType(p) => ("wtype", vec![p.a(), p.b(), p.c()]),
            FamilySample::Symmetric(p) => ("symmetric", vec![p.a(), p.b(), p.c(), p.d()]),
            FamilySample::Ww(theta) => ("ww", vec![*theta]),
        };
        rows.push(ScanRow {
            family: family.to_string(),
            params,
            lambda_sq,
        });
    }
    Ok(rows)
}

fn grid_qubits(n: usize) -> Vec<SingleQubitState> {
    let mut out = Vec::with_capacity(n * n);
    for j in 0..n {
        // half-step offset keeps the azimuth meaningful at every row;
        // the poles are reachable through refinement
        let theta = std::f64::consts::PI * (j as f64 + 0.5) / n as f64;
        let (st, ct) = theta.sin_cos();
        for k in 0..n {
            let phi = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            let s = [st * phi.cos(), st * phi.sin(), ct];
            out.push(SingleQubitState::from_bloch(s).expect("unit Bloch vector"));
        }
    }
    out
}

fn random_qubit(rng: &mut ChaCha8Rng) -> SingleQubitState {
    let z: f64 = 1.0 - 2.0 * rng.random::<f64>();
    let phi = 2.0 * std::f64::consts::PI * rng.random::<f64>();
    let rxy = (1.0 - z * z).max(0.0).sqrt();
    SingleQubitState::from_bloch([rxy * phi.cos(), rxy * phi.sin(), z]).expect("unit Bloch vector")
}

fn normalized_contraction(
    state: &PureState3,
    keep: usize,
    qa: &SingleQubitState,
    qb: &SingleQubitState,
) -> Option<SingleQubitState> {
    let v = state.contract_leaving(keep, qa, qb);
    let n2 = v[0].norm_sqr() + v[1].norm_sqr();
    if n2 <= tol::CONTRACTION_MIN {
        return None;
    }
    let n = n2.sqrt();
    Some(SingleQubitState::normalized([v[0] / n, v[1] / n]).expect("normalized"))
}

/// Completes a `(q1, q2)` cell into a product state with the optimal
/// third factor (an arbitrary one if the contraction vanishes).
fn assemble(state: &PureState3, q1: SingleQubitState, q2: SingleQubitState) -> ProductState {
    let q3 = normalized_contraction(state, 2, &q1, &q2).unwrap_or_else(|| SingleQubitState::basis(0));
    ProductState::new(q1, q2, q3)
}

/// Alternating single-qubit updates in fixed order A, B, C, followed by
/// a curvature-aware polish. Each update replaces one factor with the
/// normalized contraction of the other two, the unique maximizer given
/// the rest, so the overlap never decreases; a drop beyond the slack is
/// an internal invariant violation.
fn refine(
    state: &PureState3,
    mut prod: ProductState,
    iters: usize,
    stop_tol: f64,
) -> (f64, ProductState) {
    let mut value = state.overlap_sq(&prod);
    for _ in 0..iters {
        let before = value;
        if let Some(q) = normalized_contraction(state, 0, &prod.q2, &prod.q3) {
            prod.q1 = q;
        }
        if let Some(q) = normalized_contraction(state, 1, &prod.q1, &prod.q3) {
            prod.q2 = q;
        }
        let v3 = state.contract_leaving(2, &prod.q1, &prod.q2);
        let n2 = v3[0].norm_sqr() + v3[1].norm_sqr();
        if n2 > tol::CONTRACTION_MIN {
            let n = n2.sqrt();
            prod.q3 = SingleQubitState::normalized([v3[0] / n, v3[1] / n]).expect("normalized");
            value = n2;
        } else {
            value = state.overlap_sq(&prod);
        }
        assert!(
            value >= before - tol::MONOTONE_SLACK,
            "alternating sweep decreased the overlap: {before} -> {value}"
        );
        if value - before < stop_tol {
            break;
        }
    }
    newton_polish(state, prod, value)
}

/// Two unit vectors spanning the tangent plane of the sphere at `b`.
fn tangent_frame(b: Vec3) -> (Vec3, Vec3) {
    let seed = if b[0].abs() <= b[1].abs() && b[0].abs() <= b[2].abs() {
        [1.0, 0.0, 0.0]
    } else if b[1].abs() <= b[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let t1 = linalg::cross(b, seed);
    let t1 = linalg::scale(t1, linalg::norm(t1).recip());
    (t1, linalg::cross(b, t1))
}

/// Geodesic step on the sphere: from `b`, move along the tangent vector
/// `u t1 + v t2` by its own length.
fn sphere_step(b: Vec3, t1: Vec3, t2: Vec3, u: f64, v: f64) -> Vec3 {
    let r = (u * u + v * v).sqrt();
    if r < 1e-18 {
        return b;
    }
    let (s, c) = r.sin_cos();
    let dir = linalg::scale(linalg::add(linalg::scale(t1, u), linalg::scale(t2, v)), r.recip());
    linalg::add(linalg::scale(b, c), linalg::scale(dir, s))
}

/// Gaussian elimination with partial pivoting on a 4x4 system.
fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for col in 0..4 {
        let piv = (col..4).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..4 {
            let f = a[row][col] / a[col][col];
            for k in col..4 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 4];
    for row in (0..4).rev() {
        let mut acc = b[row];
        for k in row + 1..4 {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

/// Second-order local maximization of the eliminated overlap over the
/// first two Bloch vectors, with finite-difference derivatives in
/// tangent coordinates.
///
/// The alternating sweeps converge only linearly, and painfully so in
/// the nearly flat valleys that develop when two stationary branches
/// meet (for example W-type states close to a right triangle). A damped
/// Newton step on the four tangent angles restores the remaining digits
/// without touching any closed-form knowledge.
fn newton_polish(state: &PureState3, prod: ProductState, value: f64) -> (f64, ProductState) {
    const H: f64 = 1e-4;
    const MAX_ITERS: usize = 16;
    let mut b1 = prod.q1.bloch();
    let mut b2 = prod.q2.bloch();
    let mut f0 = state.eliminated_value(&prod.q1, &prod.q2);

    for _ in 0..MAX_ITERS {
        let (t1a, t2a) = tangent_frame(b1);
        let (t1b, t2b) = tangent_frame(b2);
        let eval = |u: [f64; 4]| -> f64 {
            let p1 = sphere_step(b1, t1a, t2a, u[0], u[1]);
            let p2 = sphere_step(b2, t1b, t2b, u[2], u[3]);
            let q1 = SingleQubitState::from_bloch(p1).expect("unit Bloch vector");
            let q2 = SingleQubitState::from_bloch(p2).expect("unit Bloch vector");
            state.eliminated_value(&q1, &q2)
        };

        let unit = |i: usize, s: f64| {
            let mut u = [0.0; 4];
            u[i] = s;
            u
        };
        let mut plus = [0.0; 4];
        let mut minus = [0.0; 4];
        let mut grad = [0.0; 4];
        for i in 0..4 {
            plus[i] = eval(unit(i, H));
            minus[i] = eval(unit(i, -H));
            grad[i] = (plus[i] - minus[i]) / (2.0 * H);
        }
        let mut hess = [[0.0; 4]; 4];
        for i in 0..4 {
            hess[i][i] = (plus[i] - 2.0 * f0 + minus[i]) / (H * H);
            for j in i + 1..4 {
                let mut pp = [0.0; 4];
                pp[i] = H;
                pp[j] = H;
                let mut pm = pp;
                pm[j] = -H;
                let mut mp = pp;
                mp[i] = -H;
                let mut mm = pm;
                mm[i] = -H;
                let hij = (eval(pp) - eval(pm) - eval(mp) + eval(mm)) / (4.0 * H * H);
                hess[i][j] = hij;
                hess[j][i] = hij;
            }
        }

        // shift the Hessian to stay negative definite even along the
        // flat directions of a degenerate optimum family
        let scale = hess
            .iter()
            .flatten()
            .fold(0.0f64, |m, &x| m.max(x.abs()))
            .max(1.0);
        let mut shifted = hess;
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] -= 1e-8 * scale;
        }
        let mut neg_grad = grad;
        for g in &mut neg_grad {
            *g = -*g;
        }
        let Some(mut step) = solve4(shifted, neg_grad) else {
            break;
        };
        let step_norm = (step.iter().map(|s| s * s).sum::<f64>()).sqrt();
        if step_norm > 0.5 {
            for s in &mut step {
                *s *= 0.5 / step_norm;
            }
        }

        let mut accepted = false;
        let mut damp = 1.0;
        for _ in 0..8 {
            let trial = [
                step[0] * damp,
                step[1] * damp,
                step[2] * damp,
                step[3] * damp,
            ];
            let f_trial = eval(trial);
            if f_trial > f0 {
                b1 = sphere_step(b1, t1a, t2a, trial[0], trial[1]);
                b2 = sphere_step(b2, t1b, t2b, trial[2], trial[3]);
                accepted = f_trial - f0 > 1e-16;
                f0 = f_trial;
                break;
            }
            damp *= 0.5;
        }
        if !accepted {
            break;
        }
    }

    if f0 <= value {
        return (value, prod);
    }
    let q1 = SingleQubitState::from_bloch(b1).expect("unit Bloch vector");
    let q2 = SingleQubitState::from_bloch(b2).expect("unit Bloch vector");
    let q3 = normalized_contraction(state, 2, &q1, &q2)
        .unwrap_or_else(|| prod.q3.clone());
    (f0, ProductState::new(q1, q2, q3))
}
