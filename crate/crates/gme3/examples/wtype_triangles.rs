// The W-type closed form as triangle geometry: the three coefficients
// are side lengths, acute triangles give the squared circumdiameter,
// obtuse ones the squared longest side — continuously glued at right
// triangles.
//
// Run with: cargo run --example wtype_triangles

use gme3::families::{lambda_wtype, wtype_bloch, TriangleClass, WTypeParams};
use gme3::state::QubitPair;

pub fn run() -> gme3::Result<()> {
    // walk a path from the regular triangle (the W state, global
    // minimum 4/9) through a right triangle into the obtuse region
    println!("{:>6}  {:>18}  {:>14}", "c", "lambda_sq", "class");
    for k in 0..=10 {
        let c = 0.4 + 0.4 * k as f64 / 10.0;
        let p = WTypeParams::new(0.4, 0.4, c)?;
        let (v, class) = lambda_wtype(&p);
        let label = match class {
            TriangleClass::AcuteOrRight => "acute/right".to_string(),
            TriangleClass::ObtuseOrFlat(side) => format!("obtuse ({side:?} max)"),
        };
        println!("{c:>6.2}  {v:>18.15}  {label:>14}");
    }

    // the branch values agree where the classes meet: a right triangle
    let right = WTypeParams::new(0.5, 0.5, 0.5f64.sqrt())?;
    let (v, _) = lambda_wtype(&right);
    println!("\nright triangle (0.5, 0.5, sqrt(0.5)): lambda_sq = {v:.15} (exact 0.5)");
    assert!((v - 0.5).abs() < 1e-12);

    // the closed-form Bloch vectors are exact stationary points of the
    // overlap form, and in the acute class the azimuth is free
    let acute = WTypeParams::new(0.5, 0.55, 0.6)?;
    let red = acute.state().pair_reduction(QubitPair::Ab);
    let (value, _) = lambda_wtype(&acute);
    println!("\nacute (0.5, 0.55, 0.6): lambda_sq = {value:.15}");
    for phi in [0.0, 1.0, 2.5, 4.0] {
        let (s1, s2, lag) = wtype_bloch(&acute, phi)?;
        let overlap = red.overlap_form(s1, s2)?;
        println!(
            "  phi = {phi:>3.1}: overlap = {overlap:.15}, multipliers = ({:.6}, {:.6})",
            lag.lambda1, lag.lambda2
        );
        assert!((overlap - value).abs() < 1e-12);
    }
    println!("every azimuth reaches the same maximum: a degenerate circle of optima");

    // permutation symmetry is exact, not approximate
    let (v1, _) = lambda_wtype(&WTypeParams::new(0.3, 0.5, 0.7)?);
    let (v2, _) = lambda_wtype(&WTypeParams::new(0.7, 0.3, 0.5)?);
    assert_eq!(v1, v2);
    println!("\npermuting (a, b, c) leaves lambda_sq bit-for-bit unchanged: {v1:.15}");
    Ok(())
}

fn main() {
    run().expect("example failed");
}
