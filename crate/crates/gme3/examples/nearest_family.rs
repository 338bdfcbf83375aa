// Nearest-separable-state recovery, including the degenerate case: for
// acute W-type states the closest product states form a whole circle
// (free shared azimuth), while obtuse ones have a single isolated
// optimum.
//
// Run with: cargo run --example nearest_family

use gme3::nearest::{measure, MeasureOptions};
use gme3::state::PureState3;

pub fn run() -> gme3::Result<()> {
    // W state: a full circle of equally-close product states
    let w = PureState3::w();
    let opts = MeasureOptions {
        samples: 8,
        ..MeasureOptions::default()
    };
    let r = measure(&w, &opts)?;
    println!("W state: lambda_sq = {:.15}", r.lambda_sq);
    let fam = r.family_param.as_ref().expect("degenerate family descriptor");
    println!(
        "nearest-state family about axis ({:+.3}, {:+.3}, {:+.3}), azimuth in [{:.3}, {:.3}):",
        fam.axis[0], fam.axis[1], fam.axis[2], fam.azimuth_min, fam.azimuth_max
    );
    for (k, prod) in r.nearest.iter().enumerate() {
        let b = prod.q1.bloch();
        let overlap = w.overlap_sq(prod);
        println!(
            "  sample {k}: s1 = ({:+.6}, {:+.6}, {:+.6})  overlap = {:.15}",
            b[0], b[1], b[2], overlap
        );
        assert!((overlap - 4.0 / 9.0).abs() < 1e-12);
        // all samples share the polar angle z = 1/3
        assert!((b[2] - 1.0 / 3.0).abs() < 1e-9);
    }
    assert_eq!(r.nearest.len(), 8);

    // an obtuse W-type state: one isolated nearest product state at the
    // dominant pole
    let obtuse = PureState3::wtype(0.3, 0.3, 0.8)?;
    let r = measure(&obtuse, &MeasureOptions::default())?;
    println!("\nobtuse wtype(0.3, 0.3, 0.8): lambda_sq = {:.15}", r.lambda_sq);
    assert_eq!(r.nearest.len(), 1);
    assert!(r.family_param.is_none());
    let prod = &r.nearest[0];
    let (b1, b2, b3) = (prod.q1.bloch(), prod.q2.bloch(), prod.q3.bloch());
    println!("  s1 = ({:+.3}, {:+.3}, {:+.3})", b1[0], b1[1], b1[2]);
    println!("  s2 = ({:+.3}, {:+.3}, {:+.3})", b2[0], b2[1], b2[2]);
    println!("  s3 = ({:+.3}, {:+.3}, {:+.3})", b3[0], b3[1], b3[2]);
    println!("  (the c-dominant optimum points both first factors at +z,");
    println!("   and the third factor is their exact best response)");
    assert!((obtuse.overlap_sq(prod) - r.lambda_sq).abs() < 1e-12);
    Ok(())
}

fn main() {
    run().expect("example failed");
}
