// Sweeps the interpolation cos(theta)|W> + sin(theta)|W-tilde> from
// theta = 0 to pi/2. The optimal shared Bloch vector comes from a real
// cubic in the half-angle tangent t; both endpoints sit at the W value
// 4/9.
//
// Run with: cargo run --example ww_sweep

use gme3::cli::{render_sweep, run_sweep, Format, SweepGrid, SweepSpec};
use gme3::families::lambda_ww;
use gme3::nearest::{MeasureOptions, Policy};

pub fn run() -> gme3::Result<()> {
    println!("{:>8}  {:>18}  {:>12}", "theta", "lambda_sq", "root t");
    let n = 13;
    for k in 0..n {
        let theta = std::f64::consts::FRAC_PI_2 * k as f64 / (n - 1) as f64;
        let (value, t) = lambda_ww(theta);
        println!("{theta:>8.4}  {value:>18.15}  {t:>12.6}");
    }
    let (v0, t0) = lambda_ww(0.0);
    let (v1, t1) = lambda_ww(std::f64::consts::FRAC_PI_2);
    assert!((v0 - 4.0 / 9.0).abs() < 1e-14);
    assert!((v1 - 4.0 / 9.0).abs() < 1e-14);
    // at theta = 0 the cubic degenerates to the quadratic 2t^2 - 1 with
    // roots +/- 1/sqrt(2); at pi/2 it is t^3 - 2t with best root sqrt(2)
    assert!((t0 - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    assert!((t1 - 2f64.sqrt()).abs() < 1e-12);
    println!("\nendpoints are the W and W-tilde states, both at 4/9 = {:.15}", 4.0 / 9.0);

    // same sweep through the batch API, rendered as CSV
    let spec = SweepSpec {
        family: SweepGrid::Ww {
            theta: (0..5)
                .map(|k| std::f64::consts::FRAC_PI_2 * k as f64 / 4.0)
                .collect(),
        },
        policy: Policy::Auto,
    };
    let rows = run_sweep(&spec, &MeasureOptions::default())?;
    println!("\nbatch sweep as CSV (what `gme3 sweep ww --theta 0:1.5708:5 --format csv` emits):");
    print!("{}", render_sweep(&rows, Format::Csv));
    Ok(())
}

fn main() {
    run().expect("example failed");
}
