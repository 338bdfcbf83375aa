//! Solver for the stationarity conditions of the overlap form.
//!
//! On the two Bloch spheres that remain after the third qubit is
//! eliminated, stationary points of the overlap satisfy
//!
//! ```text
//! r1 + g s2 = lambda1 s1        r2 + g^T s1 = lambda2 s2
//! ```
//!
//! with unit `s1`, `s2`. For fixed multipliers the vectors follow in
//! closed form ([`closed_form_s`]); reinserting them turns the two unit-norm
//! constraints into a pair of degree-six equations in `(lambda1, lambda2)`
//! that [`solve_stationary`] attacks with damped multi-start Newton.
//!
//! The closed form breaks down exactly when `lambda1 lambda2` hits an
//! eigenvalue of `g g^T`. That is not a corner case: the optima of highly
//! symmetric states (W, GHZ) live on that set, surrounded by whole
//! families of equally good vectors. The solver therefore walks the
//! degenerate manifold explicitly, parameterizing the null-space freedom
//! and root-finding the leftover norm constraint.

use serde::Serialize;

use crate::linalg::{self, Mat3, Vec3};
use crate::state::PairReduction;
use crate::{tol, Error, Result};

/// The two Lagrange multipliers enforcing unit Bloch vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LagrangePair {
    pub lambda1: f64,
    pub lambda2: f64,
}

impl LagrangePair {
    pub fn new(lambda1: f64, lambda2: f64) -> Self {
        Self { lambda1, lambda2 }
    }
}

/// A converged solution of the stationarity system.
///
/// `value` is the overlap form at the point; candidate maxima are ranked
/// by it rather than by multiplier signs. `degenerate` marks points on
/// the singular set of the closed form, where the point is one member of
/// a continuous family.
#[derive(Debug, Clone, Serialize)]
pub struct StationaryPoint {
    pub s1: Vec3,
    pub s2: Vec3,
    pub lagrange: LagrangePair,
    pub value: f64,
    pub degenerate: bool,
}

fn degenerate_threshold(g: &Mat3) -> f64 {
    tol::DEGENERATE_DET * linalg::frob_sq(g).max(1.0)
}

/// Closed-form candidate vectors for fixed multipliers:
///
/// ```text
/// s1 = (l1 l2 I - g g^T)^-1 (l2 r1 + g r2)
/// s2 = (l1 l2 I - g^T g)^-1 (l1 r2 + g^T r1)
/// ```
///
/// The candidates are generally not unit vectors; the unit-norm residual
/// is what the outer solver drives to zero. Returns `None` when the
/// matrix is singular at the [`detect_degenerate`] threshold, which
/// routes the caller to the degenerate-family handling.
pub fn closed_form_s(red: &PairReduction, lag: &LagrangePair) -> Option<(Vec3, Vec3)> {
    let ll = lag.lambda1 * lag.lambda2;
    let ggt = linalg::matmul(&red.g, &linalg::transpose(&red.g));
    let mut m1 = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m1[i][j] = if i == j { ll - ggt[i][j] } else { -ggt[i][j] };
        }
    }
    let det = linalg::det3(&m1);
    if det.abs() < degenerate_threshold(&red.g) {
        return None;
    }
    let rhs1 = linalg::add(linalg::scale(red.r1, lag.lambda2), linalg::matvec(&red.g, red.r2));
    let s1 = linalg::scale(linalg::matvec(&linalg::adjugate(&m1), rhs1), 1.0 / det);
    // the second vector follows from the first through the coupling
    // equation; this keeps the pair exactly consistent
    let s2 = second_from_first(red, lag, s1);
    Some((s1, s2))
}

/// `s2 = (r2 + g^T s1) / lambda2`, or the mirrored closed form when
/// `lambda2` is too small to divide by.
fn second_from_first(red: &PairReduction, lag: &LagrangePair, s1: Vec3) -> Vec3 {
    if lag.lambda2.abs() > 1e-8 {
        return linalg::scale(
            linalg::add(red.r2, linalg::tmatvec(&red.g, s1)),
            1.0 / lag.lambda2,
        );
    }
    let ll = lag.lambda1 * lag.lambda2;
    let gtg = linalg::matmul(&linalg::transpose(&red.g), &red.g);
    let mut m2 = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m2[i][j] = if i == j { ll - gtg[i][j] } else { -gtg[i][j] };
        }
    }
    let det = linalg::det3(&m2);
    let rhs2 = linalg::add(linalg::scale(red.r2, lag.lambda1), linalg::tmatvec(&red.g, red.r1));
    linalg::scale(linalg::matvec(&linalg::adjugate(&m2), rhs2), 1.0 / det)
}

/// True when `det(l1 l2 I - g g^T)` is below `1e-9 * max(1, |g|_F^2)`,
/// i.e. when the closed form cannot be trusted and the stationary
/// solutions form continuous families.
pub fn detect_degenerate(red: &PairReduction, lag: &LagrangePair) -> bool {
    let ll = lag.lambda1 * lag.lambda2;
    let ggt = linalg::matmul(&red.g, &linalg::transpose(&red.g));
    let mut m1 = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m1[i][j] = if i == j { ll - ggt[i][j] } else { -ggt[i][j] };
        }
    }
    linalg::det3(&m1).abs() < degenerate_threshold(&red.g)
}

/// Sum of the stationarity residual norms at a candidate point.
pub fn stationarity_residual(red: &PairReduction, s1: Vec3, s2: Vec3, lag: &LagrangePair) -> f64 {
    let e1 = linalg::sub(
        linalg::add(red.r1, linalg::matvec(&red.g, s2)),
        linalg::scale(s1, lag.lambda1),
    );
    let e2 = linalg::sub(
        linalg::add(red.r2, linalg::tmatvec(&red.g, s1)),
        linalg::scale(s2, lag.lambda2),
    );
    linalg::norm(e1) + linalg::norm(e2)
}

/// Finds stationary points of the overlap form for one pair reduction.
///
/// `starts` is the side length of the multiplier grid over
/// `[-2, 2] x [-2, 2]` (8 by default from callers); the grid is doubled
/// once if nothing converges. Heuristic starts near `lambda1 lambda2 =
/// mu` for each eigenvalue `mu` of `g g^T` are always added, and the
/// degenerate manifold itself is searched separately.
///
/// The returned list is deduplicated (Bloch vectors within 1e-7) and
/// sorted by value, best first. Disagreement between starts is visible
/// directly in the list; the head is the claimed maximum.
pub fn solve_stationary(red: &PairReduction, starts: usize) -> Result<Vec<StationaryPoint>> {
    let starts = starts.max(2);
    let mut points = run_starts(red, starts);
    points.extend(degenerate_candidates(red));
    points.extend(ascent_candidates(red));
    if points.is_empty() {
        points = run_starts(red, starts * 2);
        points.extend(degenerate_candidates(red));
    }
    if points.is_empty() {
        return Err(Error::NoStationaryPoint);
    }
    dedup_points(&mut points);
    points.sort_by(|a, b| b.value.partial_cmp(&a.value).unwrap());
    Ok(points)
}

/// Monotone best-response ascent on the overlap form: each half-step
/// replaces one vector with its normalized linear response
/// `s1 <- (r1 + g s2)/|..|`, `s2 <- (r2 + g^T s1)/|..|`, which can only
/// increase the form. Fixed points are exactly the stationary pairs
/// with non-negative multipliers — a set that always contains the
/// global maximum, whose basin the multiplier-space Newton grid can
/// miss on strongly multimodal landscapes.
fn ascent_candidates(red: &PairReduction) -> Vec<StationaryPoint> {
    // deterministic spread of initial `s2` directions: axes, cube
    // corners, and the linear term's own axis
    let mut starts: Vec<Vec3> = vec![
        [1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
    ];
    let k = 3f64.sqrt().recip();
    for sx in [-1.0, 1.0] {
        for sy in [-1.0, 1.0] {
            for sz in [-1.0, 1.0] {
                starts.push([k * sx, k * sy, k * sz]);
            }
        }
    }
    let r2n = linalg::norm(red.r2);
    if r2n > 1e-9 {
        starts.push(linalg::scale(red.r2, 1.0 / r2n));
        starts.push(linalg::scale(red.r2, -1.0 / r2n));
    }

    let mut out = Vec::new();
    for d in starts {
        let mut s1 = [0.0, 0.0, 1.0];
        let mut s2 = d;
        for _ in 0..2000 {
            let t1 = linalg::add(red.r1, linalg::matvec(&red.g, s2));
            let n1 = linalg::norm(t1);
            let new1 = if n1 > 1e-12 { linalg::scale(t1, 1.0 / n1) } else { s1 };
            let t2 = linalg::add(red.r2, linalg::tmatvec(&red.g, new1));
            let n2 = linalg::norm(t2);
            let new2 = if n2 > 1e-12 { linalg::scale(t2, 1.0 / n2) } else { s2 };
            let delta = linalg::norm(linalg::sub(new1, s1))
                .max(linalg::norm(linalg::sub(new2, s2)));
            s1 = new1;
            s2 = new2;
            if delta < 1e-15 {
                break;
            }
        }
        // at a fixed point the multipliers are the response norms; the
        // full-system polish inside finish_point tightens the rest
        let lag = LagrangePair::new(
            linalg::norm(linalg::add(red.r1, linalg::matvec(&red.g, s2))),
            linalg::norm(linalg::add(red.r2, linalg::tmatvec(&red.g, s1))),
        );
        if let Some(pt) = finish_point(red, s1, s2, lag) {
            out.push(pt);
        }
    }
    out
}

fn run_starts(red: &PairReduction, grid: usize) -> Vec<StationaryPoint> {
    let mut seeds: Vec<[f64; 2]> = Vec::new();
    for i in 0..grid {
        for j in 0..grid {
            let l1 = -2.0 + 4.0 * i as f64 / (grid - 1) as f64;
            let l2 = -2.0 + 4.0 * j as f64 / (grid - 1) as f64;
            seeds.push([l1, l2]);
        }
    }
    // products near eigenvalues of g g^T are where solutions of
    // symmetric states concentrate; approach them from both sides
    let ggt = linalg::matmul(&red.g, &linalg::transpose(&red.g));
    let (vals, _) = linalg::sym_eigen(&ggt);
    for mu in vals {
        if mu > 1e-10 {
            let s = mu.sqrt();
            for f in [0.85, 1.15] {
                seeds.push([s * f, s * f]);
                seeds.push([-s * f, -s * f]);
            }
        }
    }

    let mut out = Vec::new();
    for seed in seeds {
        if let Some(p) = newton_from(red, seed) {
            out.push(p);
        }
    }
    out
}

fn norms_residual(red: &PairReduction, lag: &LagrangePair) -> Option<[f64; 2]> {
    let (s1, s2) = closed_form_s(red, lag)?;
    Some([linalg::norm_sq(s1) - 1.0, linalg::norm_sq(s2) - 1.0])
}

fn newton_from(red: &PairReduction, seed: [f64; 2]) -> Option<StationaryPoint> {
    const FD_STEP: f64 = 1e-6;
    let mut l = seed;
    let mut f = norms_residual(red, &LagrangePair::new(l[0], l[1]))?;
    let mut fnorm = f[0].hypot(f[1]);
    for _ in 0..70 {
        if fnorm < 1e-13 {
            break;
        }
        let mut jac = [[0.0f64; 2]; 2];
        for k in 0..2 {
            let mut lp = l;
            let mut lm = l;
            lp[k] += FD_STEP;
            lm[k] -= FD_STEP;
            let fp = norms_residual(red, &LagrangePair::new(lp[0], lp[1]))?;
            let fm = norms_residual(red, &LagrangePair::new(lm[0], lm[1]))?;
            jac[0][k] = (fp[0] - fm[0]) / (2.0 * FD_STEP);
            jac[1][k] = (fp[1] - fm[1]) / (2.0 * FD_STEP);
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det.abs() < 1e-300 {
            return None;
        }
        let dx = [
            (f[0] * jac[1][1] - f[1] * jac[0][1]) / det,
            (f[1] * jac[0][0] - f[0] * jac[1][0]) / det,
        ];
        // damped update: halve the step until the residual shrinks
        let mut accepted = false;
        let mut t = 1.0;
        for _ in 0..10 {
            let cand = [l[0] - t * dx[0], l[1] - t * dx[1]];
            if let Some(fc) = norms_residual(red, &LagrangePair::new(cand[0], cand[1])) {
                let cn = fc[0].hypot(fc[1]);
                if cn < fnorm {
                    l = cand;
                    f = fc;
                    fnorm = cn;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            return None;
        }
    }
    if fnorm > 1e-10 {
        return None;
    }
    let lag = LagrangePair::new(l[0], l[1]);
    let (s1, s2) = closed_form_s(red, &lag)?;
    finish_point(red, s1, s2, lag)
}

/// Newton polish on the full system (both stationarity equations plus
/// both norms) in the eight unknowns `(s1, s2, lambda1, lambda2)`.
/// Removes the rounding amplification a near-singular closed form can
/// leave behind.
fn polish_full(
    red: &PairReduction,
    s1: &mut Vec3,
    s2: &mut Vec3,
    lag: &mut LagrangePair,
) -> bool {
    for _ in 0..4 {
        let e1 = linalg::sub(
            linalg::add(red.r1, linalg::matvec(&red.g, *s2)),
            linalg::scale(*s1, lag.lambda1),
        );
        let e2 = linalg::sub(
            linalg::add(red.r2, linalg::tmatvec(&red.g, *s1)),
            linalg::scale(*s2, lag.lambda2),
        );
        let e3 = linalg::norm_sq(*s1) - 1.0;
        let e4 = linalg::norm_sq(*s2) - 1.0;
        let res: [f64; 8] = [e1[0], e1[1], e1[2], e2[0], e2[1], e2[2], e3, e4];
        if res.iter().map(|x| x * x).sum::<f64>().sqrt() < 1e-15 {
            return true;
        }
        let mut a = [[0.0f64; 8]; 8];
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] = if i == j { -lag.lambda1 } else { 0.0 };
                a[i][3 + j] = red.g[i][j];
                a[3 + i][j] = red.g[j][i];
                a[3 + i][3 + j] = if i == j { -lag.lambda2 } else { 0.0 };
            }
            a[i][6] = -s1[i];
            a[3 + i][7] = -s2[i];
            a[6][i] = 2.0 * s1[i];
            a[7][3 + i] = 2.0 * s2[i];
        }
        let Some(dx) = solve8(a, res) else { return true };
        for i in 0..3 {
            s1[i] -= dx[i];
            s2[i] -= dx[3 + i];
        }
        lag.lambda1 -= dx[6];
        lag.lambda2 -= dx[7];
    }
    true
}

/// Gaussian elimination with partial pivoting for the polish step.
fn solve8(mut a: [[f64; 8]; 8], mut b: [f64; 8]) -> Option<[f64; 8]> {
    for col in 0..8 {
        let mut piv = col;
        for r in (col + 1)..8 {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in (col + 1)..8 {
            let f = a[r][col] / a[col][col];
            for c in col..8 {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = [0.0f64; 8];
    for row in (0..8).rev() {
        let mut acc = b[row];
        for c in (row + 1)..8 {
            acc -= a[row][c] * x[c];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

fn finish_point(
    red: &PairReduction,
    mut s1: Vec3,
    mut s2: Vec3,
    mut lag: LagrangePair,
) -> Option<StationaryPoint> {
    polish_full(red, &mut s1, &mut s2, &mut lag);
    if (linalg::norm(s1) - 1.0).abs() > tol::STATIONARY_RESIDUAL
        || (linalg::norm(s2) - 1.0).abs() > tol::STATIONARY_RESIDUAL
        || stationarity_residual(red, s1, s2, &lag) > tol::STATIONARY_RESIDUAL
    {
        return None;
    }
    let value = red.overlap_form(s1, s2).ok()?;
    Some(StationaryPoint {
        s1,
        s2,
        value,
        degenerate: detect_degenerate(red, &lag),
        lagrange: lag,
    })
}

/// Walks the degenerate manifold `lambda1 lambda2 = mu` for each
/// eigenvalue `mu > 0` of `g g^T`.
///
/// There `s1` splits into a particular part from the range of
/// `(mu I - g g^T)` plus free null-space weight; the unit norm of `s1`
/// fixes the weight's magnitude, and the unit norm of `s2` becomes a
/// one-dimensional root-finding problem in the multiplier ratio. Null
/// spaces of dimension two carry a free azimuth, which is exactly how
/// the one-parameter nearest-state families of acute W-type states
/// appear; a few azimuth samples of each family are returned so the
/// degeneracy is visible in the point list.
fn degenerate_candidates(red: &PairReduction) -> Vec<StationaryPoint> {
    const H_GRID: usize = 64;
    const AZIMUTHS: usize = 8;

    let m = linalg::matmul(&red.g, &linalg::transpose(&red.g));
    let (vals, vecs) = linalg::sym_eigen(&m);
    let col = |k: usize| -> Vec3 { [vecs[0][k], vecs[1][k], vecs[2][k]] };

    // cluster equal eigenvalues so repeated ones share a null space
    let mut clusters: Vec<(f64, Vec<usize>)> = Vec::new();
    for (i, &v) in vals.iter().enumerate() {
        match clusters.last_mut() {
            Some((mu, idx)) if (v - *mu).abs() < 1e-9 * (1.0 + v.abs()) => idx.push(i),
            _ => clusters.push((v, vec![i])),
        }
    }

    let mut out = Vec::new();
    for (mu, cluster) in clusters {
        if mu < 1e-10 {
            continue;
        }
        let sq = mu.sqrt();
        let h_max = (2.0 / sq).ln().max(0.1);
        let null_dim = cluster.len();
        let directions: Vec<Vec3> = match null_dim {
            1 => {
                let n = col(cluster[0]);
                vec![n, linalg::scale(n, -1.0)]
            }
            2 => {
                let (n1, n2) = (col(cluster[0]), col(cluster[1]));
                (0..AZIMUTHS)
                    .map(|k| {
                        let phi = 2.0 * std::f64::consts::PI * k as f64 / AZIMUTHS as f64;
                        linalg::add(linalg::scale(n1, phi.cos()), linalg::scale(n2, phi.sin()))
                    })
                    .collect()
            }
            _ => (0..3)
                .flat_map(|k| {
                    let n = col(cluster[k]);
                    [n, linalg::scale(n, -1.0)]
                })
                .collect(),
        };

        for sigma in [1.0f64, -1.0] {
            for dir in &directions {
                // residual of |s2| = 1 along the manifold, None where the
                // branch does not exist
                let eval = |h: f64| -> Option<(f64, Vec3, Vec3, LagrangePair)> {
                    let l1 = sigma * sq * h.exp();
                    let l2 = sigma * sq * (-h).exp();
                    let rhs1 =
                        linalg::add(linalg::scale(red.r1, l2), linalg::matvec(&red.g, red.r2));
                    let mut p1 = [0.0f64; 3];
                    for i in 0..3 {
                        let v = col(i);
                        let coeff = linalg::dot(v, rhs1);
                        if cluster.contains(&i) {
                            if coeff.abs() > 1e-9 * (1.0 + linalg::norm(rhs1)) {
                                return None; // inconsistent: no solution on this manifold
                            }
                        } else {
                            p1 = linalg::add(p1, linalg::scale(v, coeff / (mu - vals[i])));
                        }
                    }
                    let wn2 = 1.0 - linalg::norm_sq(p1);
                    if wn2 < -1e-12 {
                        return None;
                    }
                    let s1 = linalg::add(p1, linalg::scale(*dir, wn2.max(0.0).sqrt()));
                    let s2 = linalg::scale(
                        linalg::add(red.r2, linalg::tmatvec(&red.g, s1)),
                        1.0 / l2,
                    );
                    Some((
                        linalg::norm_sq(s2) - 1.0,
                        s1,
                        s2,
                        LagrangePair::new(l1, l2),
                    ))
                };

                let mut prev: Option<(f64, f64)> = None;
                for k in 0..=H_GRID {
                    let h = -h_max + 2.0 * h_max * k as f64 / H_GRID as f64;
                    let Some((fh, ..)) = eval(h) else {
                        prev = None;
                        continue;
                    };
                    if let Some((hp, fp)) = prev {
                        if fp == 0.0 || fp.signum() != fh.signum() {
                            if let Some(root) = bisect(&eval, hp, fp, h, fh) {
                                if let Some((_, s1, s2, lag)) = eval(root) {
                                    if let Some(p) = finish_degenerate(red, s1, s2, lag) {
                                        out.push(p);
                                    }
                                }
                            }
                        }
                    }
                    prev = Some((h, fh));
                }
            }
        }
    }
    out
}

fn bisect<F>(eval: &F, mut a: f64, mut fa: f64, mut b: f64, fb: f64) -> Option<f64>
where
    F: Fn(f64) -> Option<(f64, Vec3, Vec3, LagrangePair)>,
{
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    for _ in 0..90 {
        let mid = 0.5 * (a + b);
        let (fm, ..) = eval(mid)?;
        if fm == 0.0 || (b - a).abs() < 1e-16 {
            return Some(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Some(0.5 * (a + b))
}

/// Degenerate points keep their manifold coordinates; only the residual
/// gate is applied (a full polish would push them off the family).
fn finish_degenerate(
    red: &PairReduction,
    s1: Vec3,
    s2: Vec3,
    lag: LagrangePair,
) -> Option<StationaryPoint> {
    if (linalg::norm(s1) - 1.0).abs() > tol::STATIONARY_RESIDUAL
        || (linalg::norm(s2) - 1.0).abs() > tol::STATIONARY_RESIDUAL
        || stationarity_residual(red, s1, s2, &lag) > tol::STATIONARY_RESIDUAL
    {
        return None;
    }
    let value = red.overlap_form(s1, s2).ok()?;
    Some(StationaryPoint {
        s1,
        s2,
        value,
        degenerate: true,
        lagrange: lag,
    })
}

fn dedup_points(points: &mut Vec<StationaryPoint>) {
    let mut kept: Vec<StationaryPoint> = Vec::new();
    for p in points.drain(..) {
        let dup = kept.iter().any(|q| {
            let d1 = linalg::sub(p.s1, q.s1);
            let d2 = linalg::sub(p.s2, q.s2);
            d1.iter().chain(d2.iter()).all(|x| x.abs() < tol::BLOCH_DEDUP)
        });
        if !dup {
            kept.push(p);
        }
    }
    *points = std::mem::take(&mut kept);
}
