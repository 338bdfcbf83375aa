// The symmetric family a|000> + b|111> + c|001> + d|110>: its maximal
// squared overlap is (1 + |r|)/2 with the imbalance
// r = a^2 + c^2 - b^2 - d^2, i.e. max(a^2 + c^2, b^2 + d^2).
//
// Run with: cargo run --example symmetric_states

use gme3::families::{lambda_symmetric, SymmetricParams};
use gme3::nearest::{measure, MeasureOptions};

pub fn run() -> gme3::Result<()> {
    let opts = MeasureOptions::default();

    println!(
        "{:>24}  {:>9}  {:>18}  {:>18}",
        "(a, b, c, d)", "r", "(1+|r|)/2", "measured"
    );
    let cases = [
        (0.8, 0.4, 0.3, 0.2),
        (0.5, 0.5, 0.5, 0.5),
        (0.9, -0.1, 0.2, 0.1),
        (-0.3, 0.6, 0.4, -0.5),
    ];
    for (a, b, c, d) in cases {
        let p = SymmetricParams::new(a, b, c, d)?;
        let closed = lambda_symmetric(&p);
        let r = measure(&p.state(), &opts)?;
        println!(
            "({:+.2}, {:+.2}, {:+.2}, {:+.2})  {:>+9.4}  {:>18.15}  {:>18.15}",
            p.a(),
            p.b(),
            p.c(),
            p.d(),
            p.r(),
            (1.0 + p.r().abs()) / 2.0,
            r.lambda_sq
        );
        assert!((closed - r.lambda_sq).abs() < 1e-12);
        assert!((closed - (1.0 + p.r().abs()) / 2.0).abs() < 1e-12);
    }

    // GHZ is the balanced corner c = d = 0, a = b: r = 0, value 1/2,
    // and BOTH poles are nearest product states
    let ghz = SymmetricParams::new(1.0, 1.0, 0.0, 0.0)?;
    let r = measure(&ghz.state(), &opts)?;
    println!("\nGHZ as symmetric(1, 1, 0, 0):");
    println!("  lambda_sq = {:.15}", r.lambda_sq);
    println!("  nearest   = {} product states (both poles)", r.nearest.len());
    assert_eq!(r.nearest.len(), 2);
    assert!(r.degenerate, "tied poles are flagged as degenerate");
    let z0 = r.nearest[0].q1.bloch()[2];
    let z1 = r.nearest[1].q1.bloch()[2];
    println!("  pole z-components: {z0:+.3}, {z1:+.3}");
    assert!((z0 - 1.0).abs() < 1e-9 && (z1 + 1.0).abs() < 1e-9);

    // any imbalance snaps the optimum to a single pole
    let biased = SymmetricParams::new(1.0, 0.9, 0.2, 0.0)?;
    let r = measure(&biased.state(), &opts)?;
    println!("\nbiased symmetric(1, 0.9, 0.2, 0) has r = {:+.4}:", biased.r());
    println!("  nearest   = {} product state (isolated)", r.nearest.len());
    assert_eq!(r.nearest.len(), 1);
    assert!(!r.degenerate);
    Ok(())
}

fn main() {
    run().expect("example failed");
}
