//! Positive linear maps: Schur multipliers, compressions and block sums,
//! checked for positivity and against Ando's inequality.

use spdlab::maps::{check_ando, check_positivity, PosMap};
use spdlab::random::{random_isometry, random_psd, random_spd_with, rng_from_seed};

fn main() -> spdlab::Result<()> {
    let mut rng = rng_from_seed(21);
    let n = 3;
    let maps = [
        PosMap::identity(n)?,
        PosMap::trace(n)?,
        PosMap::schur(random_psd(n, n, &mut rng))?,
        PosMap::compression(random_isometry(n, 2, &mut rng))?,
        PosMap::block_sum(PosMap::trace(n)?, 2)?,
    ];
    let a = random_spd_with(n, 30.0, &mut rng)?;
    let b = random_spd_with(n, 30.0, &mut rng)?;
    for map in &maps {
        let pos = check_positivity(map, 50, 9)?;
        let line = if map.input_dim() == n {
            let ando = check_ando(map, &a, &b, 1e-10)?;
            format!("Ando slack {:+.3e}", ando.slack)
        } else {
            "block input".to_string()
        };
        println!("{:<16} {}→{}  positive {:<5}  {line}", map.kind(), map.input_dim(), map.output_dim(), pos.passed);
    }
    Ok(())
}
