// Measures the three named benchmark states — W, GHZ and W-tilde —
// and prints their exact reference values next to the computed ones.
//
// Run with: cargo run --example named_states

use gme3::nearest::{measure, MeasureOptions};
use gme3::state::PureState3;

pub fn run() -> gme3::Result<()> {
    let cases = [
        ("W", PureState3::w(), 4.0 / 9.0, 12),
        ("GHZ", PureState3::ghz(), 0.5, 2),
        ("W-tilde", PureState3::w_tilde(), 4.0 / 9.0, 12),
    ];
    let opts = MeasureOptions::default();

    for (name, state, exact, expect_nearest) in cases {
        let r = measure(&state, &opts)?;
        println!("{name}");
        println!("  lambda_sq  = {:.15}  (exact {exact:.15})", r.lambda_sq);
        println!("  E_g        = {:.15}", r.e_g);
        println!("  method     = {}", r.method.as_str());
        println!("  degenerate = {}", r.degenerate);
        assert!((r.lambda_sq - exact).abs() < 1e-10);

        // every reported nearest product state reproduces the overlap
        for prod in &r.nearest {
            let overlap = state.overlap_sq(prod);
            assert!((overlap - r.lambda_sq).abs() < 1e-9);
        }
        assert_eq!(r.nearest.len(), expect_nearest);
        println!(
            "  nearest    = {} product state(s), all reproducing the overlap",
            r.nearest.len()
        );
        let b = r.nearest[0].q1.bloch();
        println!(
            "  first s1   = ({:+.6}, {:+.6}, {:+.6})\n",
            b[0], b[1], b[2]
        );
    }

    println!("The W and W-tilde optima are whole circles of product states");
    println!("(degenerate = true); GHZ has exactly two, one per pole.");
    Ok(())
}

fn main() {
    run().expect("example failed");
}
