// Round-trips a state through the JSON file format used by the CLI
// ({"amps": [[re, im] x 8]}), measures it, and recovers the optimal
// third factor from the first two.
//
// Run with: cargo run --example state_from_json

use gme3::cli::parse_input;
use gme3::nearest::{measure, third_qubit, MeasureOptions};
use gme3::state::{PureState3, StateFile};
use num_complex::Complex64;
use std::io::Write;

pub fn run() -> gme3::Result<()> {
    // an arbitrary unnormalized amplitude vector
    let raw = [
        (0.31, 0.22),
        (-0.14, 0.08),
        (0.45, -0.19),
        (0.05, 0.33),
        (-0.27, 0.41),
        (0.18, -0.06),
        (-0.09, -0.25),
        (0.12, 0.30),
    ];
    let amps = raw.map(|(re, im)| Complex64::new(re, im));
    let state = PureState3::normalized(amps)?;

    // serialize to the published state schema and write it out
    let file = StateFile::from_state(&state);
    let json = serde_json::to_string_pretty(&file)?;
    let mut tmp = tempfile::NamedTempFile::new()?;
    tmp.write_all(json.as_bytes())?;
    let path = tmp.path().to_string_lossy().into_owned();
    println!("wrote state file:\n{json}\n");

    // the CLI input resolver accepts the path (here without --strict,
    // so near-normalized amplitudes would also be accepted)
    let loaded = parse_input(&path, false)?;
    for (x, y) in loaded.amps().iter().zip(state.amps()) {
        assert!((x - y).norm() < 1e-15);
    }

    let r = measure(&loaded, &MeasureOptions::default())?;
    println!("lambda_sq = {:.15}", r.lambda_sq);
    println!("E_g       = {:.15}", r.e_g);
    println!("method    = {}", r.method.as_str());

    // given the optimal first two factors, the optimal third factor is
    // determined: the normalized partial contraction
    let best = &r.nearest[0];
    let q3 = third_qubit(&loaded, &best.q1, &best.q2)?;
    let b_reported = best.q3.bloch();
    let b_recovered = q3.bloch();
    println!(
        "reported third factor  = ({:+.9}, {:+.9}, {:+.9})",
        b_reported[0], b_reported[1], b_reported[2]
    );
    println!(
        "recovered third factor = ({:+.9}, {:+.9}, {:+.9})",
        b_recovered[0], b_recovered[1], b_recovered[2]
    );
    for k in 0..3 {
        assert!((b_reported[k] - b_recovered[k]).abs() < 1e-9);
    }

    // strict mode rejects a file whose norm is not already 1
    let unnormalized = serde_json::to_string(&StateFile {
        amps: vec![[2.0, 0.0]; 8],
    })?;
    let mut tmp2 = tempfile::NamedTempFile::new()?;
    tmp2.write_all(unnormalized.as_bytes())?;
    let strict = parse_input(&tmp2.path().to_string_lossy(), true);
    println!("\nstrict load of an unnormalized file: {strict:?}");
    assert!(strict.is_err());
    Ok(())
}

fn main() {
    run().expect("example failed");
}
