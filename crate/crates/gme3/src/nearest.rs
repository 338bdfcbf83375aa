//! Measurement front end: dispatches a state to the best method,
//! assembles full nearest product states, and reports the geometric
//! measure `E_g = 1 - lambda_sq`.
//!
//! The nearest-state set is reported faithfully: a single product state
//! when the optimum is isolated, both poles when two signs tie (GHZ-like
//! states), and a sampled one-parameter azimuth family for acute W-type
//! states, where every product state on a whole circle is equally close.

use serde::Serialize;

use crate::families::{
    lambda_symmetric, lambda_wtype, lambda_ww, SymmetricParams, TriangleClass, WTypeParams,
};
use crate::linalg::{self, Vec3};
use crate::oracle::{oracle_maximize_report, OracleConfig};
use crate::state::{PairReduction, ProductState, PureState3, QubitPair, SingleQubitState};
use crate::stationarity::{detect_degenerate, solve_stationary, LagrangePair};
use crate::{tol, Error, Result};

/// How to compute the measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Policy {
    /// Closed form when the state matches a solvable family, otherwise
    /// the stationarity solver cross-checked against the oracle.
    #[default]
    Auto,
    /// Closed forms only; errors on states outside the known families.
    AnalyticOnly,
    /// Stationarity solver, with an oracle fallback only if it finds
    /// nothing.
    Stationary,
    /// Brute-force oracle only.
    Oracle,
}

/// Which route produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    AnalyticWtype,
    AnalyticSymmetric,
    AnalyticWw,
    Stationary,
    Oracle,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::AnalyticWtype => "analytic_wtype",
            Method::AnalyticSymmetric => "analytic_symmetric",
            Method::AnalyticWw => "analytic_ww",
            Method::Stationary => "stationary",
            Method::Oracle => "oracle",
        }
    }
}

/// Descriptor of a one-parameter nearest-state family: both Bloch
/// vectors tilt about `axis` with a shared free azimuth.
#[derive(Debug, Clone, Serialize)]
pub struct DegenerateFamily {
    pub axis: Vec3,
    pub azimuth_min: f64,
    pub azimuth_max: f64,
}

/// Full outcome of a measurement.
#[derive(Debug, Clone, Serialize)]
pub struct MeasureResult {
    /// Maximal squared overlap with a product state.
    pub lambda_sq: f64,
    /// Geometric measure of entanglement, exactly `1 - lambda_sq`.
    pub e_g: f64,
    /// Nearest product states: one, a tied pair, or a sampled family.
    pub nearest: Vec<ProductState>,
    /// Set when the nearest states form a continuous azimuth family.
    pub family_param: Option<DegenerateFamily>,
    pub method: Method,
    /// True when the optimum sits on the singular set of the
    /// stationarity closed form (continuous or sign-tied families).
    pub degenerate: bool,
    /// Human-readable note on method disagreement or fallbacks.
    pub warning: Option<String>,
}

/// Knobs for [`measure`].
#[derive(Debug, Clone)]
pub struct MeasureOptions {
    pub policy: Policy,
    /// Azimuth samples when reporting a degenerate family.
    pub samples: usize,
    pub oracle: OracleConfig,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        Self {
            policy: Policy::Auto,
            samples: 12,
            oracle: OracleConfig::default(),
        }
    }
}

/// Recovers the optimal third factor for fixed first two factors: the
/// normalized partial contraction of the state, re-phased to the
/// canonical Bloch convention (first amplitude real non-negative).
///
/// Errors with [`Error::OrthogonalPair`] when the contraction vanishes,
/// i.e. the overlap is zero for every third factor.
pub fn third_qubit(
    state: &PureState3,
    q1: &SingleQubitState,
    q2: &SingleQubitState,
) -> Result<SingleQubitState> {
    let v = state.contract_leaving(2, q1, q2);
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    if n < 1e-14 {
        return Err(Error::OrthogonalPair(n));
    }
    let raw = SingleQubitState::normalized([v[0] / n, v[1] / n])?;
    SingleQubitState::from_bloch(raw.bloch())
}

/// Computes the measure of a normalized three-qubit state under the
/// given policy. See [`Policy`] for the dispatch rules.
pub fn measure(state: &PureState3, opts: &MeasureOptions) -> Result<MeasureResult> {
    match opts.policy {
        Policy::AnalyticOnly => analytic_measure(state, opts)?.ok_or(Error::NotFamily),
        Policy::Auto => match analytic_measure(state, opts)? {
            Some(res) => Ok(res),
            None => generic_measure(state, opts, true),
        },
        Policy::Stationary => generic_measure(state, opts, false),
        Policy::Oracle => oracle_measure(state, opts, None),
    }
}

/// A state recognized as a member of an exactly solvable family.
#[derive(Debug, Clone)]
pub enum DetectedFamily {
    WType(WTypeParams),
    Symmetric(SymmetricParams),
    /// Angle of a `cos(theta) W + sin(theta) W-tilde` superposition.
    Ww(f64),
}

/// Matches the state against the solvable families: W-type support
/// `{|100>, |010>, |001>}` with non-negative reals after removing the
/// global phase; symmetric support `{|000>, |111>, |001>, |110>}` with
/// reals of any sign; equal-amplitude W and W-tilde blocks. Off-pattern
/// amplitudes must vanish to 1e-12. W-type wins when patterns overlap.
pub fn detect_family(state: &PureState3) -> Option<DetectedFamily> {
    let amps = state.amps();
    // rotate the largest amplitude to the positive real axis
    let largest = amps
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm_sqr().partial_cmp(&b.1.norm_sqr()).unwrap())
        .map(|(i, _)| i)?;
    let phase = amps[largest] / amps[largest].norm();
    let deph: Vec<_> = amps.iter().map(|a| a * phase.conj()).collect();

    let off_pattern_clear = |support: &[usize]| {
        deph.iter()
            .enumerate()
            .all(|(i, a)| support.contains(&i) || a.norm() < tol::FAMILY_DETECT)
    };
    let real_on = |support: &[usize]| {
        support.iter().all(|&i| deph[i].im.abs() < tol::FAMILY_DETECT)
    };

    const W_SUPPORT: [usize; 3] = [0b100, 0b010, 0b001];
    const SYM_SUPPORT: [usize; 4] = [0b000, 0b111, 0b001, 0b110];
    const WT_SUPPORT: [usize; 3] = [0b011, 0b101, 0b110];

    if off_pattern_clear(&W_SUPPORT)
        && real_on(&W_SUPPORT)
        && W_SUPPORT.iter().all(|&i| deph[i].re > -tol::FAMILY_DETECT)
    {
        let p = WTypeParams::new(
            deph[0b100].re.max(0.0),
            deph[0b010].re.max(0.0),
            deph[0b001].re.max(0.0),
        )
        .ok()?;
        return Some(DetectedFamily::WType(p));
    }

    if off_pattern_clear(&SYM_SUPPORT) && real_on(&SYM_SUPPORT) {
        let p = SymmetricParams::new(
            deph[0b000].re,
            deph[0b111].re,
            deph[0b001].re,
            deph[0b110].re,
        )
        .ok()?;
        return Some(DetectedFamily::Symmetric(p));
    }

    let ww_support: Vec<usize> = W_SUPPORT.iter().chain(WT_SUPPORT.iter()).copied().collect();
    if off_pattern_clear(&ww_support) && real_on(&ww_support) {
        let w_equal = W_SUPPORT
            .windows(2)
            .all(|w| (deph[w[0]].re - deph[w[1]].re).abs() < tol::FAMILY_DETECT);
        let wt_equal = WT_SUPPORT
            .windows(2)
            .all(|w| (deph[w[0]].re - deph[w[1]].re).abs() < tol::FAMILY_DETECT);
        if w_equal && wt_equal {
            let c = deph[0b100].re * 3f64.sqrt();
            let s = deph[0b011].re * 3f64.sqrt();
            if (c * c + s * s - 1.0).abs() < 1e-9 {
                return Some(DetectedFamily::Ww(s.atan2(c)));
            }
        }
    }

    None
}

fn assemble_product(state: &PureState3, s1: Vec3, s2: Vec3) -> Result<ProductState> {
    let q1 = SingleQubitState::from_bloch(s1)?;
    let q2 = SingleQubitState::from_bloch(s2)?;
    let q3 = third_qubit(state, &q1, &q2)?;
    Ok(ProductState::new(q1, q2, q3))
}

fn analytic_measure(state: &PureState3, opts: &MeasureOptions) -> Result<Option<MeasureResult>> {
    let Some(family) = detect_family(state) else {
        return Ok(None);
    };
    let result = match family {
        DetectedFamily::WType(p) => {
            let (lambda_sq, class) = lambda_wtype(&p);
            match class {
                TriangleClass::AcuteOrRight => {
                    let samples = opts.samples.max(1);
                    let mut nearest = Vec::with_capacity(samples);
                    for k in 0..samples {
                        let phi = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
                        let (s1, s2, _) = crate::families::wtype_bloch(&p, phi)?;
                        nearest.push(assemble_product(state, s1, s2)?);
                    }
                    MeasureResult {
                        lambda_sq,
                        e_g: 1.0 - lambda_sq,
                        nearest,
                        family_param: Some(DegenerateFamily {
                            axis: [0.0, 0.0, 1.0],
                            azimuth_min: 0.0,
                            azimuth_max: 2.0 * std::f64::consts::PI,
                        }),
                        method: Method::AnalyticWtype,
                        degenerate: true,
                        warning: None,
                    }
                }
                TriangleClass::ObtuseOrFlat(_) => {
                    let (s1, s2, _) = crate::families::wtype_bloch(&p, 0.0)?;
                    MeasureResult {
                        lambda_sq,
                        e_g: 1.0 - lambda_sq,
                        nearest: vec![assemble_product(state, s1, s2)?],
                        family_param: None,
                        method: Method::AnalyticWtype,
                        degenerate: false,
                        warning: None,
                    }
                }
            }
        }
        DetectedFamily::Symmetric(p) => {
            let lambda_sq = lambda_symmetric(&p);
            let r = p.r();
            let sign = if r < 0.0 { -1.0 } else { 1.0 };
            let mut nearest = vec![assemble_product(state, [0.0, 0.0, sign], [0.0, 0.0, sign])?];
            let degenerate = r.abs() < 1e-12;
            if degenerate {
                // both poles are optimal when the reductions are unbiased
                nearest.push(assemble_product(state, [0.0, 0.0, -sign], [0.0, 0.0, -sign])?);
            }
            MeasureResult {
                lambda_sq,
                e_g: 1.0 - lambda_sq,
                nearest,
                family_param: None,
                method: Method::AnalyticSymmetric,
                degenerate,
                warning: None,
            }
        }
        DetectedFamily::Ww(theta) => {
            let (lambda_sq, t) = lambda_ww(theta);
            let d = 1.0 + t * t;
            let (rho, z) = (2.0 * t / d, (1.0 - t * t) / d);
            let s = [rho, 0.0, z];
            let red = state.pair_reduction(QubitPair::Ab);
            let lam = multiplier_at(&red, s, s);
            let degenerate = detect_degenerate(&red, &lam);
            // the pure W-tilde endpoint is invariant under joint
            // z-rotations, so its optimum is a whole azimuth circle,
            // mirroring the W state (the theta = 0 endpoint routes to
            // the W-type branch instead)
            if degenerate && (theta - std::f64::consts::FRAC_PI_2).abs() < 1e-9 {
                let samples = opts.samples.max(1);
                let mut nearest = Vec::with_capacity(samples);
                for k in 0..samples {
                    let phi = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
                    let sk = [rho * phi.cos(), rho * phi.sin(), z];
                    nearest.push(assemble_product(state, sk, sk)?);
                }
                MeasureResult {
                    lambda_sq,
                    e_g: 1.0 - lambda_sq,
                    nearest,
                    family_param: Some(DegenerateFamily {
                        axis: [0.0, 0.0, 1.0],
                        azimuth_min: 0.0,
                        azimuth_max: 2.0 * std::f64::consts::PI,
                    }),
                    method: Method::AnalyticWw,
                    degenerate: true,
                    warning: None,
                }
            } else {
                MeasureResult {
                    lambda_sq,
                    e_g: 1.0 - lambda_sq,
                    nearest: vec![assemble_product(state, s, s)?],
                    family_param: None,
                    method: Method::AnalyticWw,
                    degenerate,
                    warning: None,
                }
            }
        }
    };
    Ok(Some(result))
}

/// Multipliers implied by a stationary Bloch pair, by projecting the
/// stationarity relations onto the vectors.
fn multiplier_at(red: &PairReduction, s1: Vec3, s2: Vec3) -> LagrangePair {
    let l1 = linalg::dot(s1, linalg::add(red.r1, linalg::matvec(&red.g, s2)));
    let l2 = linalg::dot(s2, linalg::add(red.r2, linalg::tmatvec(&red.g, s1)));
    LagrangePair::new(l1, l2)
}

fn generic_measure(
    state: &PureState3,
    opts: &MeasureOptions,
    oracle_crosscheck: bool,
) -> Result<MeasureResult> {
    let red = state.pair_reduction(QubitPair::Ab);
    let points = match solve_stationary(&red, 8) {
        Ok(points) => points,
        Err(e) => {
            return oracle_measure(
                state,
                opts,
                Some(format!("stationarity solver failed ({e}); oracle fallback")),
            );
        }
    };
    let best = &points[0];
    let mut nearest = Vec::new();
    for p in &points {
        if p.value > best.value - 1e-9 {
            nearest.push(assemble_product(state, p.s1, p.s2)?);
        }
    }
    let result = MeasureResult {
        lambda_sq: best.value,
        e_g: 1.0 - best.value,
        nearest,
        family_param: None,
        method: Method::Stationary,
        degenerate: best.degenerate,
        warning: None,
    };
    if oracle_crosscheck {
        let report = oracle_maximize_report(state, &opts.oracle);
        if (report.lambda_sq - result.lambda_sq).abs() > tol::METHOD_AGREEMENT {
            let warning = format!(
                "stationary value {} disagrees with oracle value {} beyond {}; oracle result kept",
                result.lambda_sq,
                report.lambda_sq,
                tol::METHOD_AGREEMENT
            );
            return oracle_measure(state, opts, Some(warning));
        }
    }
    Ok(result)
}

fn oracle_measure(
    state: &PureState3,
    opts: &MeasureOptions,
    warning: Option<String>,
) -> Result<MeasureResult> {
    let report = oracle_maximize_report(state, &opts.oracle);
    let red = state.pair_reduction(QubitPair::Ab);
    let (s1, s2) = (report.product.q1.bloch(), report.product.q2.bloch());
    let lam = multiplier_at(&red, s1, s2);
    Ok(MeasureResult {
        lambda_sq: report.lambda_sq,
        e_g: 1.0 - report.lambda_sq,
        nearest: vec![report.product],
        family_param: None,
        method: Method::Oracle,
        degenerate: detect_degenerate(&red, &lam),
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn default_opts() -> MeasureOptions {
        MeasureOptions::default()
    }

    fn policy_opts(policy: Policy) -> MeasureOptions {
        MeasureOptions {
            policy,
            ..MeasureOptions::default()
        }
    }

    #[test]
    fn w_state_full_result() {
        let out = measure(&PureState3::w(), &default_opts()).unwrap();
        assert!((out.lambda_sq - 4.0 / 9.0).abs() < 1e-12);
        assert!((out.e_g - 5.0 / 9.0).abs() < 1e-12);
        assert_eq!(out.method, Method::AnalyticWtype);
        assert!(out.degenerate);
        assert!(out.family_param.is_some());
        assert_eq!(out.nearest.len(), 12);
        let w = PureState3::w();
        for prod in &out.nearest {
            assert!((w.overlap_sq(prod) - out.lambda_sq).abs() < 1e-9);
        }
        // distinct members of the circle, not one repeated point
        let b0 = out.nearest[0].q1.bloch();
        let b6 = out.nearest[6].q1.bloch();
        assert!(linalg::norm(linalg::sub(b0, b6)) > 0.5);
    }

    #[test]
    fn ghz_lists_both_poles() {
        let out = measure(&PureState3::ghz(), &default_opts()).unwrap();
        assert!((out.lambda_sq - 0.5).abs() < 1e-12);
        assert_eq!(out.method, Method::AnalyticSymmetric);
        assert!(out.degenerate);
        assert_eq!(out.nearest.len(), 2);
        let zeros = &out.nearest[0];
        let ones = &out.nearest[1];
        assert!(zeros.q1.amps()[0].norm() > 1.0 - 1e-12);
        assert!(zeros.q2.amps()[0].norm() > 1.0 - 1e-12);
        assert!(zeros.q3.amps()[0].norm() > 1.0 - 1e-12);
        assert!(ones.q1.amps()[1].norm() > 1.0 - 1e-12);
        assert!(ones.q3.amps()[1].norm() > 1.0 - 1e-12);
    }

    #[test]
    fn product_state_measures_one() {
        let basis = PureState3::symmetric(1.0, 0.0, 0.0, 0.0).unwrap();
        let out = measure(&basis, &default_opts()).unwrap();
        assert_eq!(out.lambda_sq, 1.0);
        assert_eq!(out.e_g, 0.0);
        assert_eq!(out.nearest.len(), 1);
        assert!((basis.overlap_sq(&out.nearest[0]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn third_qubit_examples() {
        // GHZ with |0>|0> in front leaves |0>
        let q0 = SingleQubitState::basis(0);
        let third = third_qubit(&PureState3::ghz(), &q0, &q0).unwrap();
        assert!((third.amps()[0].re - 1.0).abs() < 1e-12);

        // the W state's optimal factors are all equal by symmetry
        let s = [2.0 * 2f64.sqrt() / 3.0, 0.0, 1.0 / 3.0];
        let q = SingleQubitState::from_bloch(s).unwrap();
        let third = third_qubit(&PureState3::w(), &q, &q).unwrap();
        for k in 0..2 {
            assert!((third.amps()[k] - q.amps()[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn third_qubit_orthogonal_pair_errors() {
        let q0 = SingleQubitState::basis(0);
        let q1 = SingleQubitState::basis(1);
        // <01| GHZ = 0 for every third factor
        match third_qubit(&PureState3::ghz(), &q0, &q1) {
            Err(Error::OrthogonalPair(_)) => {}
            other => panic!("expected orthogonal-pair error, got {other:?}"),
        }
    }

    #[test]
    fn third_qubit_matches_eliminated_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..50 {
            let state = PureState3::random(&mut rng);
            let q1 = random_qubit(&mut rng);
            let q2 = random_qubit(&mut rng);
            let q3 = third_qubit(&state, &q1, &q2).unwrap();
            let prod = ProductState::new(q1.clone(), q2.clone(), q3);
            let got = state.overlap_sq(&prod);
            let want = state.eliminated_value(&q1, &q2);
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn family_detection_with_global_phase() {
        // a global phase must not hide family membership
        let base = PureState3::wtype(0.5, 0.55, 0.6).unwrap();
        let phase = Complex64::from_polar(1.0, 1.234);
        let mut amps = *base.amps();
        for a in &mut amps {
            *a *= phase;
        }
        let rotated = PureState3::new(amps).unwrap();
        match detect_family(&rotated) {
            Some(DetectedFamily::WType(p)) => {
                assert!((p.a() - base.amps()[0b100].re).abs() < 1e-12);
            }
            other => panic!("expected W-type detection, got {other:?}"),
        }

        let sym = PureState3::symmetric(0.6, -0.5, 0.4, 0.3).unwrap();
        assert!(matches!(detect_family(&sym), Some(DetectedFamily::Symmetric(_))));

        let ww = PureState3::ww(0.7).unwrap();
        match detect_family(&ww) {
            Some(DetectedFamily::Ww(theta)) => assert!((theta - 0.7).abs() < 1e-12),
            other => panic!("expected ww detection, got {other:?}"),
        }

        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let generic = PureState3::random(&mut rng);
        assert!(detect_family(&generic).is_none());
    }

    #[test]
    fn wtype_priority_over_ww_for_pure_w() {
        // the W state matches both patterns; W-type wins
        assert!(matches!(
            detect_family(&PureState3::w()),
            Some(DetectedFamily::WType(_))
        ));
        // pure W-tilde only matches the ww pattern
        match detect_family(&PureState3::w_tilde()) {
            Some(DetectedFamily::Ww(theta)) => {
                assert!((theta - std::f64::consts::FRAC_PI_2).abs() < 1e-12)
            }
            other => panic!("expected ww detection, got {other:?}"),
        }
    }

    #[test]
    fn policies_agree_on_family_states() {
        let states = [
            PureState3::w(),
            PureState3::ghz(),
            PureState3::wtype(0.5, 0.55, 0.6).unwrap(),
            PureState3::symmetric(0.8, 0.4, 0.3, 0.2).unwrap(),
            PureState3::ww(0.6).unwrap(),
        ];
        for state in &states {
            let auto = measure(state, &policy_opts(Policy::Auto)).unwrap();
            let analytic = measure(state, &policy_opts(Policy::AnalyticOnly)).unwrap();
            let stationary = measure(state, &policy_opts(Policy::Stationary)).unwrap();
            let oracle = measure(state, &policy_opts(Policy::Oracle)).unwrap();
            for other in [&analytic, &stationary, &oracle] {
                assert!(
                    (auto.lambda_sq - other.lambda_sq).abs() < 1e-6,
                    "{:?} vs {:?}",
                    auto.lambda_sq,
                    other.lambda_sq
                );
            }
        }
    }

    #[test]
    fn analytic_only_rejects_generic_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let state = PureState3::random(&mut rng);
        match measure(&state, &policy_opts(Policy::AnalyticOnly)) {
            Err(Error::NotFamily) => {}
            other => panic!("expected family error, got {other:?}"),
        }
    }

    #[test]
    fn nearest_states_reproduce_value_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..10 {
            let state = PureState3::random(&mut rng);
            let out = measure(&state, &default_opts()).unwrap();
            assert!(!out.nearest.is_empty());
            for prod in &out.nearest {
                let got = state.overlap_sq(prod);
                assert!(
                    (got - out.lambda_sq).abs() < 1e-9,
                    "nearest reproduces {got} vs {}",
                    out.lambda_sq
                );
            }
            assert!(out.lambda_sq >= 0.25 - 1e-12 && out.lambda_sq <= 1.0 + 1e-12);
            assert_eq!(out.e_g, 1.0 - out.lambda_sq);
        }
    }

    #[test]
    fn obtuse_and_biased_symmetric_optima_are_isolated() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        // obtuse W-type states
        let mut done = 0;
        while done < 10 {
            let p = match WTypeParams::new(
                rng.random::<f64>(),
                rng.random::<f64>(),
                rng.random::<f64>(),
            ) {
                Ok(p) => p,
                Err(_) => continue,
            };
            let m = p.a().max(p.b()).max(p.c());
            if m * m <= 0.55 {
                continue;
            }
            done += 1;
            let state = p.state();
            let out = measure(&state, &default_opts()).unwrap();
            assert!(!out.degenerate);
            assert_isolated(&state, &out, &mut rng);
        }
        // symmetric states with a clear bias
        let mut done = 0;
        while done < 10 {
            let p = match SymmetricParams::new(
                rng.random::<f64>() - 0.5,
                rng.random::<f64>() - 0.5,
                rng.random::<f64>() - 0.5,
                rng.random::<f64>() - 0.5,
            ) {
                Ok(p) => p,
                Err(_) => continue,
            };
            if p.r().abs() < 0.05 {
                continue;
            }
            done += 1;
            let state = p.state();
            let out = measure(&state, &default_opts()).unwrap();
            assert!(!out.degenerate);
            assert_isolated(&state, &out, &mut rng);
        }
    }

    fn assert_isolated(state: &PureState3, out: &MeasureResult, rng: &mut ChaCha8Rng) {
        let red = state.pair_reduction(QubitPair::Ab);
        let s1 = out.nearest[0].q1.bloch();
        let s2 = out.nearest[0].q2.bloch();
        let base = red.overlap_form(s1, s2).unwrap();
        for _ in 0..8 {
            let t1 = random_tangent(s1, rng);
            let t2 = random_tangent(s2, rng);
            let p1 = renorm(linalg::add(s1, linalg::scale(t1, 1e-4)));
            let p2 = renorm(linalg::add(s2, linalg::scale(t2, 1e-4)));
            let perturbed = red.overlap_form(p1, p2).unwrap();
            assert!(
                base - perturbed > 0.0,
                "tangent perturbation did not decrease the overlap: {base} -> {perturbed}"
            );
        }
    }

    fn renorm(v: Vec3) -> Vec3 {
        linalg::scale(v, 1.0 / linalg::norm(v))
    }

    fn random_tangent(s: Vec3, rng: &mut ChaCha8Rng) -> Vec3 {
        loop {
            let raw = [
                rng.random::<f64>() - 0.5,
                rng.random::<f64>() - 0.5,
                rng.random::<f64>() - 0.5,
            ];
            let t = linalg::sub(raw, linalg::scale(s, linalg::dot(raw, s)));
            let n = linalg::norm(t);
            if n > 1e-3 {
                return linalg::scale(t, 1.0 / n);
            }
        }
    }

    fn random_qubit(rng: &mut ChaCha8Rng) -> SingleQubitState {
        let z: f64 = 1.0 - 2.0 * rng.random::<f64>();
        let phi = 2.0 * std::f64::consts::PI * rng.random::<f64>();
        let rxy = (1.0 - z * z).max(0.0).sqrt();
        SingleQubitState::from_bloch([rxy * phi.cos(), rxy * phi.sin(), z]).unwrap()
    }

    #[test]
    fn acute_family_constant_over_azimuths() {
        let opts = MeasureOptions {
            samples: 36,
            ..MeasureOptions::default()
        };
        let state = PureState3::wtype(0.5, 0.55, 0.6).unwrap();
        let out = measure(&state, &opts).unwrap();
        assert_eq!(out.nearest.len(), 36);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for prod in &out.nearest {
            let v = state.overlap_sq(prod);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        assert!(hi - lo < 1e-10, "azimuth spread {}", hi - lo);
    }

    #[test]
    fn stationary_policy_handles_degenerate_families() {
        // the W and GHZ optima sit exactly on the singular set of the
        // closed form; the solver must still find them
        let w = measure(&PureState3::w(), &policy_opts(Policy::Stationary)).unwrap();
        assert!((w.lambda_sq - 4.0 / 9.0).abs() < 1e-10);
        assert!(w.degenerate);
        assert!(w.nearest.len() >= 2);

        let ghz = measure(&PureState3::ghz(), &policy_opts(Policy::Stationary)).unwrap();
        assert!((ghz.lambda_sq - 0.5).abs() < 1e-10);
        let has_zero = ghz.nearest.iter().any(|p| p.q1.amps()[0].norm() > 0.99);
        let has_one = ghz.nearest.iter().any(|p| p.q1.amps()[1].norm() > 0.99);
        assert!(has_zero && has_one);
    }

    #[test]
    fn phased_wtype_routes_to_numeric_methods_with_correct_value() {
        // relative phases leave the family pattern, but local unitaries
        // preserve the measure; the numeric routes must agree with the
        // closed form of the unphased parameters
        let base = PureState3::wtype(0.52, 0.5, 0.55).unwrap();
        let (want, _) = lambda_wtype(&WTypeParams::new(0.52, 0.5, 0.55).unwrap());
        let mut amps = *base.amps();
        amps[0b100] *= Complex64::from_polar(1.0, 0.9);
        amps[0b001] *= Complex64::from_polar(1.0, -1.7);
        let state = PureState3::new(amps).unwrap();
        assert!(detect_family(&state).is_none());
        let out = measure(&state, &default_opts()).unwrap();
        assert!(
            (out.lambda_sq - want).abs() < 1e-8,
            "{} vs {want}",
            out.lambda_sq
        );
    }
}
