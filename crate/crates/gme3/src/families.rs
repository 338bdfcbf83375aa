//! Closed forms for the state families with exactly solvable geometry.
//!
//! Three families admit analytic maximal product overlaps:
//!
//! * **W-type** states `a|100> + b|010> + c|001>`: the coefficients form a
//!   triangle. For acute triangles the squared overlap is the squared
//!   circumdiameter `4R^2`; when one squared coefficient exceeds 1/2 the
//!   triangle is obtuse and the overlap is simply that coefficient
//!   squared, with the nearest product state a basis state.
//! * **Symmetric** states `a|000> + b|111> + c|001> + d|110>`, invariant
//!   under swapping the first two qubits: the overlap is `(1 + |r|)/2`
//!   for the common Bloch-z expectation `r` of those qubits.
//! * **W/W-tilde superpositions** `cos(theta) |W> + sin(theta) |Wt>`: the
//!   optimal common Bloch vector lies in the xz-plane and its half-angle
//!   tangent solves a cubic.

use num_complex::Complex64;
use serde::Serialize;

use crate::linalg::Vec3;
use crate::state::{PairReduction, PureState3, QubitPair};
use crate::stationarity::LagrangePair;
use crate::{Error, Result};

/// Non-negative coefficients `(a, b, c)` of a W-type state
/// `a|100> + b|010> + c|001>`, stored normalized to `a^2+b^2+c^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WTypeParams {
    a: f64,
    b: f64,
    c: f64,
}

/// Which coefficient is the largest, in an obtuse or flat triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    A,
    B,
    C,
}

/// Shape class of the coefficient triangle. The branch boundary is
/// `max(a^2, b^2, c^2) = 1/2`: the right triangle, where both closed
/// forms agree. Flat triangles (a zero coefficient) belong to the
/// obtuse/max branch, matching the bipartite Schmidt limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TriangleClass {
    AcuteOrRight,
    ObtuseOrFlat(Side),
}

impl WTypeParams {
    /// Builds parameters from non-negative coefficients, normalizing
    /// their Euclidean norm to one.
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("c", c)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParam(format!(
                    "W-type coefficient {name} must be finite and non-negative, got {v}"
                )));
            }
        }
        // summing the squares in sorted order makes the normalization,
        // and with it the whole closed form, exactly permutation
        // invariant
        let mut sq = [a * a, b * b, c * c];
        sq.sort_by(f64::total_cmp);
        let n = (sq[0] + sq[1] + sq[2]).sqrt();
        if n <= 0.0 {
            return Err(Error::NullState);
        }
        Ok(Self {
            a: a / n,
            b: b / n,
            c: c / n,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Classifies the coefficient triangle; see [`TriangleClass`].
    pub fn class(&self) -> TriangleClass {
        let m = self.a.max(self.b).max(self.c);
        let side = if m == self.c {
            Side::C
        } else if m == self.b {
            Side::B
        } else {
            Side::A
        };
        if m * m > 0.5 || self.a.min(self.b).min(self.c) == 0.0 {
            TriangleClass::ObtuseOrFlat(side)
        } else {
            TriangleClass::AcuteOrRight
        }
    }

    pub fn state(&self) -> PureState3 {
        PureState3::wtype(self.a, self.b, self.c).expect("normalized by construction")
    }
}

/// Squared circumdiameter `4R^2 = 4 a^2 b^2 c^2 / (16 S^2)` with the
/// squared area in Heron's cancellation-free product form. The inputs
/// are multiplied in sorted order so the result is exactly permutation
/// invariant.
pub fn circumdiameter_sq(a: f64, b: f64, c: f64) -> f64 {
    let mut s = [a, b, c];
    s.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let [x, y, z] = s;
    let heron16 = (x + y + z) * (-x + y + z) * (x - y + z) * (x + y - z);
    4.0 * (x * x) * (y * y) * (z * z) / heron16
}

/// Maximal squared product overlap of a W-type state, with the triangle
/// class that selected the branch.
///
/// Acute/right triangles give the squared circumdiameter, which lands in
/// `[4/9, 1/2]` with the minimum exactly at the regular triangle (the W
/// state). Obtuse and flat triangles give `max(a^2, b^2, c^2)`, in
/// `(1/2, 1]`.
pub fn lambda_wtype(p: &WTypeParams) -> (f64, TriangleClass) {
    let class = p.class();
    let value = match class {
        TriangleClass::AcuteOrRight => circumdiameter_sq(p.a, p.b, p.c),
        TriangleClass::ObtuseOrFlat(_) => {
            let m = p.a.max(p.b).max(p.c);
            m * m
        }
    };
    (value, class)
}

/// Optimal Bloch vectors of the first two qubits for a W-type state,
/// with their Lagrange multipliers.
///
/// In the acute class the optimum is a one-parameter family: both
/// vectors share the azimuthal unit vector `m(phi) = (cos phi, sin phi, 0)`
/// and tilt toward the z-axis by fixed polar angles,
/// `s1 = cos(alpha) n + sin(alpha) m`, `s2 = cos(beta) n + sin(beta) m`,
/// where `phi` is free. In the obtuse class the optimum is the isolated
/// pair of poles pointing at the dominant basis state (`phi` is
/// ignored): the z-signs of `s1`, `s2` are `(-,+)`, `(+,-)`, `(+,+)`
/// when `a`, `b`, `c` dominates respectively.
pub fn wtype_bloch(p: &WTypeParams, phi: f64) -> Result<(Vec3, Vec3, LagrangePair)> {
    let (aa, bb, cc) = (p.a * p.a, p.b * p.b, p.c * p.c);
    let r1 = bb + cc - aa;
    let r2 = aa + cc - bb;
    let r3 = aa + bb - cc;
    let omega = 2.0 * p.a * p.b;
    match p.class() {
        TriangleClass::ObtuseOrFlat(side) => {
            let n = [0.0, 0.0, 1.0];
            let mn = [0.0, 0.0, -1.0];
            let (s1, s2, lag) = match side {
                Side::A => (mn, n, LagrangePair::new(r3 - r1, r2 + r3)),
                Side::B => (n, mn, LagrangePair::new(r1 + r3, r3 - r2)),
                Side::C => (n, n, LagrangePair::new(r1 - r3, r2 - r3)),
            };
            Ok((s1, s2, lag))
        }
        TriangleClass::AcuteOrRight => {
            let denom = omega * omega - r3 * r3;
            let lambda1 =
                omega * ((omega * omega + r1 * r1 - r3 * r3) / (omega * omega + r2 * r2 - r3 * r3))
                    .sqrt();
            let lambda2 = omega * omega / lambda1;
            let cos_a = (lambda2 * r1 - r2 * r3) / denom;
            let cos_b = (lambda1 * r2 - r1 * r3) / denom;
            if cos_a.abs() > 1.0 + 1e-12 || cos_b.abs() > 1.0 + 1e-12 {
                return Err(Error::AcuteBranch(cos_a.abs().max(cos_b.abs())));
            }
            let cos_a = cos_a.clamp(-1.0, 1.0);
            let cos_b = cos_b.clamp(-1.0, 1.0);
            let (sin_a, sin_b) = ((1.0 - cos_a * cos_a).sqrt(), (1.0 - cos_b * cos_b).sqrt());
            let m = [phi.cos(), phi.sin(), 0.0];
            let s1 = [sin_a * m[0], sin_a * m[1], cos_a];
            let s2 = [sin_b * m[0], sin_b * m[1], cos_b];
            Ok((s1, s2, LagrangePair::new(lambda1, lambda2)))
        }
    }
}

/// Real coefficients `(a, b, c, d)` of a first-two-qubit-symmetric state
/// `a|000> + b|111> + c|001> + d|110>`, stored normalized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetricParams {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl SymmetricParams {
    /// Builds parameters from real coefficients (signs allowed),
    /// normalizing their Euclidean norm to one.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("c", c), ("d", d)] {
            if !v.is_finite() {
                return Err(Error::InvalidParam(format!(
                    "symmetric coefficient {name} must be finite, got {v}"
                )));
            }
        }
        let n = (a * a + b * b + c * c + d * d).sqrt();
        if n <= 0.0 {
            return Err(Error::NullState);
        }
        Ok(Self {
            a: a / n,
            b: b / n,
            c: c / n,
            d: d / n,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// The common Bloch-z expectation `r = a^2 + c^2 - b^2 - d^2` of the
    /// single-qubit reductions.
    pub fn r(&self) -> f64 {
        self.a * self.a + self.c * self.c - self.b * self.b - self.d * self.d
    }

    pub fn state(&self) -> PureState3 {
        PureState3::symmetric(self.a, self.b, self.c, self.d).expect("normalized by construction")
    }
}

/// Maximal squared product overlap of a symmetric-family state:
/// `(1 + |r|)/2`, equivalently `max(a^2 + c^2, b^2 + d^2)`.
///
/// The optimal Bloch vectors are `s1 = s2 = sign(r) n`, with the sign of
/// zero resolved to `+1` (both poles are optimal when `r = 0`, as for
/// GHZ).
pub fn lambda_symmetric(p: &SymmetricParams) -> f64 {
    0.5 * (1.0 + p.r().abs())
}

/// Maximal squared product overlap of `cos(theta)|W> + sin(theta)|Wt>`,
/// together with the optimizing root `t = tan(phi)` of the stationarity
/// cubic
///
/// ```text
/// sin(theta) t^3 + 2 cos(theta) t^2 - 2 sin(theta) t - cos(theta) = 0
/// ```
///
/// (the irrelevant root `t = -tan(theta)` is already separated from the
/// raw quartic and is excluded if a cubic root drifts onto it). The
/// shared optimal Bloch vector is
/// `s = (2t/(1+t^2), 0, (1-t^2)/(1+t^2))`; each surviving root is scored
/// through the overlap form and the best is returned, preferring the
/// larger root on ties.
///
/// `theta` is meaningful on `[0, pi/2]`; any finite value is accepted
/// since the superposition is well defined for all angles.
pub fn lambda_ww(theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    let mut roots = if s.abs() <= 1e-12 {
        // degenerate cubic: 2 cos(theta) (t^2 - 1/2) = 0
        vec![std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2]
    } else {
        solve_cubic_real(s, 2.0 * c, -2.0 * s, -c)
    };
    let tan_theta = s / c;
    if tan_theta.is_finite() {
        roots.retain(|t| (t + tan_theta).abs() >= 1e-9);
    }
    // larger root wins ties, so scan in descending order with strict >
    roots.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let red = ww_reduction(theta);
    let mut best = (f64::NEG_INFINITY, f64::NAN);
    for t in roots {
        let d = 1.0 + t * t;
        let bloch = [2.0 * t / d, 0.0, (1.0 - t * t) / d];
        let value = red
            .overlap_form(bloch, bloch)
            .expect("unit vector by construction");
        if value > best.0 {
            best = (value, t);
        }
    }
    best
}

/// Pair reduction of `cos(theta)|W> + sin(theta)|Wt>` for any angle.
fn ww_reduction(theta: f64) -> PairReduction {
    let (s, c) = theta.sin_cos();
    let k = 3f64.sqrt().recip();
    let mut amps = [Complex64::new(0.0, 0.0); 8];
    for i in [1usize, 2, 4] {
        amps[i] = Complex64::new(c * k, 0.0);
    }
    for i in [3usize, 5, 6] {
        amps[i] = Complex64::new(s * k, 0.0);
    }
    PureState3::new(amps)
        .expect("unit norm by construction")
        .pair_reduction(QubitPair::Ab)
}

/// All real roots of `a t^3 + b t^2 + c t + d` (leading coefficient
/// non-zero), by the closed-form trigonometric/Cardano method with a
/// short Newton polish per root.
fn solve_cubic_real(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    let (bn, cn, dn) = (b / a, c / a, d / a);
    let p = cn - bn * bn / 3.0;
    let q = 2.0 * bn * bn * bn / 27.0 - bn * cn / 3.0 + dn;
    let shift = -bn / 3.0;
    let disc = (q / 2.0) * (q / 2.0) + (p / 3.0) * (p / 3.0) * (p / 3.0);
    let mut roots: Vec<f64> = if disc > 0.0 {
        let sd = disc.sqrt();
        let u = (-q / 2.0 + sd).cbrt();
        let v = (-q / 2.0 - sd).cbrt();
        vec![u + v + shift]
    } else if p == 0.0 {
        vec![shift]
    } else {
        // three real roots (p < 0 when disc <= 0 and p != 0)
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let base = arg.acos() / 3.0;
        (0..3)
            .map(|k| m * (base - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() + shift)
            .collect()
    };
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let f = ((a * *r + b) * *r + c) * *r + d;
            let df = (3.0 * a * *r + 2.0 * b) * *r + c;
            if df.abs() > 1e-300 {
                *r -= f / df;
            }
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;
    use crate::stationarity::solve_stationary;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_params(rng: &mut ChaCha8Rng) -> WTypeParams {
        WTypeParams::new(rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>()).unwrap()
    }

    #[test]
    fn regular_triangle_gives_four_ninths() {
        let s = 3f64.sqrt().recip();
        let p = WTypeParams::new(s, s, s).unwrap();
        let (v, class) = lambda_wtype(&p);
        assert!((v - 4.0 / 9.0).abs() < 1e-14);
        assert_eq!(class, TriangleClass::AcuteOrRight);
    }

    #[test]
    fn right_triangle_gives_one_half_from_both_branches() {
        // Rounding decides which side of the acute/obtuse boundary the
        // classifier lands on, but both branch formulas must evaluate to
        // exactly the boundary value 1/2 there.
        let p = WTypeParams::new(0.5, 0.5, 0.5f64.sqrt()).unwrap();
        let (v, _class) = lambda_wtype(&p);
        assert!((v - 0.5).abs() < 1e-12, "got {v}");
        let acute_branch = circumdiameter_sq(p.a(), p.b(), p.c());
        let obtuse_branch = p.a().max(p.b()).max(p.c()).powi(2);
        assert!((acute_branch - 0.5).abs() < 1e-10, "acute {acute_branch}");
        assert!((obtuse_branch - 0.5).abs() < 1e-10, "obtuse {obtuse_branch}");
    }

    #[test]
    fn obtuse_triangle_gives_max_coefficient() {
        let p = WTypeParams::new(0.18f64.sqrt(), 0.18f64.sqrt(), 0.8).unwrap();
        let (v, class) = lambda_wtype(&p);
        assert!((v - 0.64).abs() < 1e-12, "got {v}");
        assert_eq!(class, TriangleClass::ObtuseOrFlat(Side::C));
        let (s1, s2, _) = wtype_bloch(&p, 0.3).unwrap();
        assert_eq!(s1, [0.0, 0.0, 1.0]);
        assert_eq!(s2, [0.0, 0.0, 1.0]);
    }

    #[test]
    fn flat_triangle_is_bipartite_limit() {
        let p = WTypeParams::new(0.8, 0.6, 0.0).unwrap();
        let (v, class) = lambda_wtype(&p);
        assert!((v - 0.64).abs() < 1e-14);
        assert_eq!(class, TriangleClass::ObtuseOrFlat(Side::A));
    }

    #[test]
    fn frozen_reference_values() {
        // independently derived by numerical maximization over product states
        let cases = [
            (0.50, 0.55, 0.60, 0.449596066034422),
            (0.45, 0.62, 0.59, 0.455773008603915),
            (0.30, 0.30, 0.80, 0.780487804878049),
            (0.25, 0.60, 0.90, 0.657200811359027),
        ];
        for (a, b, c, want) in cases {
            let p = WTypeParams::new(a, b, c).unwrap();
            let (v, _) = lambda_wtype(&p);
            assert!((v - want).abs() < 1e-12, "({a},{b},{c}): {v} vs {want}");
        }
    }

    #[test]
    fn branch_continuity_at_right_triangles() {
        // at max^2 = 1/2 exactly, the circumdiameter formula must agree
        // with the max-coefficient formula
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let frac = 0.05 + 0.9 * rng.random::<f64>();
            let aa = 0.5 * frac;
            let bb = 0.5 - aa;
            let (a, b, c) = (aa.sqrt(), bb.sqrt(), 0.5f64.sqrt());
            let acute = circumdiameter_sq(a, b, c);
            assert!((acute - 0.5).abs() < 1e-8, "split {frac}: {acute}");
        }
    }

    #[test]
    fn heron_identity() {
        // (2ab)^2 - (a^2+b^2-c^2)^2 equals 16 S^2 in product form
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let p = random_params(&mut rng);
            let (a, b, c) = (p.a(), p.b(), p.c());
            let omega = 2.0 * a * b;
            let r3 = a * a + b * b - c * c;
            let heron16 = (a + b + c) * (-a + b + c) * (a - b + c) * (a + b - c);
            assert!((omega * omega - r3 * r3 - heron16).abs() < 1e-12);
        }
    }

    #[test]
    fn minimal_overlap_at_regular_triangle() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..10_000 {
            let p = random_params(&mut rng);
            let (v, _) = lambda_wtype(&p);
            assert!(v >= 4.0 / 9.0 - 1e-12, "{v} below the W minimum");
            if v < 4.0 / 9.0 + 1e-13 {
                let spread = (p.a() - p.b())
                    .abs()
                    .max((p.b() - p.c()).abs())
                    .max((p.a() - p.c()).abs());
                assert!(spread < 1e-5, "overlap at minimum away from regular: {spread}");
            }
        }
        // tiny symmetric perturbations stay strictly above the minimum
        let s = 3f64.sqrt().recip();
        let p = WTypeParams::new(s + 1e-3, s - 1e-3, s).unwrap();
        let (v, _) = lambda_wtype(&p);
        assert!(v > 4.0 / 9.0 + 1e-8, "{v}");
    }

    #[test]
    fn permutation_symmetry_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..1000 {
            let p = random_params(&mut rng);
            let (a, b, c) = (p.a(), p.b(), p.c());
            let base = lambda_wtype(&p).0;
            for (x, y, z) in [
                (a, c, b),
                (b, a, c),
                (b, c, a),
                (c, a, b),
                (c, b, a),
            ] {
                let q = WTypeParams::new(x, y, z).unwrap();
                assert!((lambda_wtype(&q).0 - base).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn acute_bloch_vectors_reproduce_overlap_for_any_azimuth() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut checked = 0;
        while checked < 1000 {
            let p = random_params(&mut rng);
            if p.class() != TriangleClass::AcuteOrRight {
                continue;
            }
            checked += 1;
            let (want, _) = lambda_wtype(&p);
            let red = p.state().pair_reduction(QubitPair::Ab);
            for k in 0..12 {
                let phi = 2.0 * std::f64::consts::PI * k as f64 / 12.0;
                let (s1, s2, lag) = wtype_bloch(&p, phi).unwrap();
                let got = red.overlap_form(s1, s2).unwrap();
                assert!((got - want).abs() < 1e-10, "phi {phi}: {got} vs {want}");
                let resid = crate::stationarity::stationarity_residual(&red, s1, s2, &lag);
                assert!(resid < 1e-9, "stationarity residual {resid}");
            }
        }
    }

    #[test]
    fn azimuth_independence_fine_grid() {
        let p = WTypeParams::new(0.50, 0.55, 0.60).unwrap();
        let red = p.state().pair_reduction(QubitPair::Ab);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for k in 0..36 {
            let phi = 2.0 * std::f64::consts::PI * k as f64 / 36.0;
            let (s1, s2, _) = wtype_bloch(&p, phi).unwrap();
            let v = red.overlap_form(s1, s2).unwrap();
            lo = lo.min(v);
            hi = hi.max(v);
        }
        assert!(hi - lo < 1e-10, "azimuth dependence {}", hi - lo);
    }

    #[test]
    fn obtuse_bloch_vectors_are_stationary_per_side() {
        // dominant a, b, c pull the pole pattern to (-,+), (+,-), (+,+)
        let cases = [
            (0.9, 0.3, 0.2, [-1.0, 1.0]),
            (0.3, 0.9, 0.2, [1.0, -1.0]),
            (0.2, 0.3, 0.9, [1.0, 1.0]),
        ];
        for (a, b, c, signs) in cases {
            let p = WTypeParams::new(a, b, c).unwrap();
            let (want, _) = lambda_wtype(&p);
            let (s1, s2, lag) = wtype_bloch(&p, 0.0).unwrap();
            assert_eq!(s1[2], signs[0]);
            assert_eq!(s2[2], signs[1]);
            assert!(lag.lambda1 > 0.0 && lag.lambda2 > 0.0);
            let red = p.state().pair_reduction(QubitPair::Ab);
            let resid = crate::stationarity::stationarity_residual(&red, s1, s2, &lag);
            assert!(resid < 1e-12, "residual {resid}");
            let got = red.overlap_form(s1, s2).unwrap();
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn w_state_bloch_matches_known_angles() {
        let s = 3f64.sqrt().recip();
        let p = WTypeParams::new(s, s, s).unwrap();
        let (s1, s2, lag) = wtype_bloch(&p, 0.0).unwrap();
        assert!((s1[2] - 1.0 / 3.0).abs() < 1e-14);
        assert!((s2[2] - 1.0 / 3.0).abs() < 1e-14);
        assert!((lag.lambda1 - 2.0 / 3.0).abs() < 1e-14);
        assert!((lag.lambda2 - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn symmetric_examples() {
        let ghz = SymmetricParams::new(1.0, 1.0, 0.0, 0.0).unwrap();
        assert!((lambda_symmetric(&ghz) - 0.5).abs() < 1e-15);

        let gen_ghz = SymmetricParams::new(0.8, 0.6, 0.0, 0.0).unwrap();
        assert!((lambda_symmetric(&gen_ghz) - 0.64).abs() < 1e-15);

        let product = SymmetricParams::new(1.0, 0.0, 0.0, 0.0).unwrap();
        assert!((lambda_symmetric(&product) - 1.0).abs() < 1e-15);

        // independently derived reference value
        let p = SymmetricParams::new(0.8, 0.4, 0.3, 0.2).unwrap();
        assert!((lambda_symmetric(&p) - 0.784946236559140).abs() < 1e-12);
    }

    #[test]
    fn symmetric_consistency_with_max_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..10_000 {
            let p = SymmetricParams::new(
                2.0 * rng.random::<f64>() - 1.0,
                2.0 * rng.random::<f64>() - 1.0,
                2.0 * rng.random::<f64>() - 1.0,
                2.0 * rng.random::<f64>() - 1.0,
            )
            .unwrap();
            let k1 = p.a() * p.a() + p.c() * p.c();
            let k2 = p.b() * p.b() + p.d() * p.d();
            assert!((lambda_symmetric(&p) - k1.max(k2)).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_bloch_reproduces_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..200 {
            let p = SymmetricParams::new(
                2.0 * rng.random::<f64>() - 1.0,
                2.0 * rng.random::<f64>() - 1.0,
                2.0 * rng.random::<f64>() - 1.0,
                2.0 * rng.random::<f64>() - 1.0,
            )
            .unwrap();
            let sign = if p.r() < 0.0 { -1.0 } else { 1.0 };
            let n = [0.0, 0.0, sign];
            let red = p.state().pair_reduction(QubitPair::Ab);
            let got = red.overlap_form(n, n).unwrap();
            assert!((got - lambda_symmetric(&p)).abs() < 1e-12);
        }
    }

    #[test]
    fn ww_endpoints_recover_w_value() {
        let (v0, t0) = lambda_ww(0.0);
        assert!((v0 - 4.0 / 9.0).abs() < 1e-14);
        assert!((t0 - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);

        let (v1, _) = lambda_ww(std::f64::consts::FRAC_PI_2);
        assert!((v1 - 4.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn ww_frozen_reference_values() {
        // independently derived by numerical maximization over product states
        let cases = [
            (0.3, 0.618589845507002),
            (std::f64::consts::PI / 8.0, 0.661788642878891),
            (1.2, 0.652212153130038),
        ];
        for (theta, want) in cases {
            let (v, _) = lambda_ww(theta);
            assert!((v - want).abs() < 1e-10, "theta {theta}: {v} vs {want}");
        }
    }

    #[test]
    fn ww_matches_stationarity_solver() {
        for k in 0..7 {
            let theta = std::f64::consts::FRAC_PI_2 * k as f64 / 6.0;
            let (v, _) = lambda_ww(theta);
            let red = ww_reduction(theta);
            let best = solve_stationary(&red, 8).unwrap()[0].value;
            assert!((v - best).abs() < 1e-8, "theta {theta}: {v} vs {best}");
        }
    }

    #[test]
    fn ww_root_is_stationary_for_cubic() {
        for theta in [0.1, 0.4, 0.9, 1.3] {
            let (_, t) = lambda_ww(theta);
            let (s, c) = theta.sin_cos();
            let f = ((s * t + 2.0 * c) * t - 2.0 * s) * t - c;
            assert!(f.abs() < 1e-12, "cubic residual {f} at theta {theta}");
            assert!((t + s / c).abs() > 1e-9, "picked the separated root");
        }
    }

    #[test]
    fn cubic_solver_recovers_known_roots() {
        // (t-1)(t-2)(t-3) = t^3 - 6t^2 + 11t - 6
        let mut roots = solve_cubic_real(1.0, -6.0, 11.0, -6.0);
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(roots.len(), 3);
        for (r, want) in roots.iter().zip([1.0, 2.0, 3.0]) {
            assert!((r - want).abs() < 1e-12);
        }
        // single real root
        let roots = solve_cubic_real(1.0, 0.0, 1.0, -2.0);
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - 1.0).abs() < 1e-12);
        // triple root (t-2)^3
        let roots = solve_cubic_real(1.0, -6.0, 12.0, -8.0);
        for r in roots {
            assert!((r - 2.0).abs() < 1e-5);
        }
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(WTypeParams::new(-0.1, 0.5, 0.5).is_err());
        assert!(WTypeParams::new(f64::NAN, 0.5, 0.5).is_err());
        assert!(WTypeParams::new(0.0, 0.0, 0.0).is_err());
        assert!(SymmetricParams::new(0.0, 0.0, 0.0, 0.0).is_err());
        assert!(SymmetricParams::new(f64::INFINITY, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn params_are_normalized() {
        let p = WTypeParams::new(3.0, 4.0, 5.0).unwrap();
        assert!((linalg::norm([p.a(), p.b(), p.c()]) - 1.0).abs() < 1e-15);
        let q = SymmetricParams::new(1.0, -2.0, 3.0, -4.0).unwrap();
        let n = (q.a().powi(2) + q.b().powi(2) + q.c().powi(2) + q.d().powi(2)).sqrt();
        assert!((n - 1.0).abs() < 1e-15);
    }
}
