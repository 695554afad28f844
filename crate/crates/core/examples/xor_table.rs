//! Prints XORs per data bit of the fast syndrome for a grid of Vandermonde codes.

use varray_core::codec::{measure_xors, theoretical_xors_per_bit};
use varray_core::constructions::{build_vand_vesip_r4_relaxed, build_vand_vetbr};
use varray_core::{Codec, Exec, SyndromeMode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for &(p, n0) in &[
        (11, 8),
        (11, 9),
        (11, 10),
        (13, 8),
        (13, 9),
        (13, 10),
        (17, 8),
    ] {
        let mut line = format!("p={p:2} n0={n0:2}:");
        for r in 3..=8 {
            let codec = Codec::new(build_vand_vetbr(p, 1, r, n0)?);
            let rep = measure_xors(&codec, SyndromeMode::Fast, 2, 1, Exec::default())?;
            line.push_str(&format!(" r{r}={:.3}", rep.per_data_bit()));
        }
        let codec = Codec::new(build_vand_vesip_r4_relaxed(p, 1, n0)?);
        let rep = measure_xors(&codec, SyndromeMode::Fast, 2, 1, Exec::default())?;
        line.push_str(&format!(
            " esip4={:.3} (lg bound r=4: {})",
            rep.per_data_bit(),
            theoretical_xors_per_bit(4)
        ));
        println!("{line}");
    }
    Ok(())
}
