//! Regenerates the files under `fixtures/` from the scenario builders.
//!
//! cargo run -p ebm-cli --example write_fixtures

use std::fs;
use std::path::Path;

use ebm_cli::{write_measure, write_state};
use ebm_core::scenarios::{SPIN_DOWN, SPIN_UP};
use ebm_core::{momentum_projector, plane_wave, position_windows, tensor_state, SpaceSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    fs::create_dir_all(&dir)?;

    let space = SpaceSpec::spin_half(8)?;
    let reference = tensor_state(&plane_wave(1, SPIN_UP, space)?, &plane_wave(7, SPIN_DOWN, space)?)?;
    let header = "reference state |k_1 up> (x) |k_7 down> on an 8-site ring, k_m = 2 pi m / 8";

    fs::write(dir.join("momentum_state.txt"), write_state(&reference, Some(header)))?;
    fs::write(
        dir.join("momentum_measure.txt"),
        write_measure(
            &momentum_projector(1, 7, space)?,
            Some("A = |k_1><k_1| (x) 1_spin, B = |k_7><k_7| (x) 1_spin"),
        ),
    )?;
    fs::write(dir.join("position_state.txt"), write_state(&reference, Some(header)))?;
    fs::write(
        dir.join("position_measure.txt"),
        write_measure(
            &position_windows(2, 5, 1, space)?,
            Some("A = |x=2><x=2| (x) 1_spin, B = |x=5><x=5| (x) 1_spin"),
        ),
    )?;
    Ok(())
}
