//! Jordan-Hoelder factors of reduced types, one row per admissible shape.

use bmweights::jh::jh_factors;
use bmweights::{FieldDatum, TameType};

fn main() -> bmweights::Result<()> {
    let fd = FieldDatum::new(5, 2, 1)?;
    for spec in ["ps:0,7", "ps:0,1", "cusp:7", "ps:4,4"] {
        let tau = TameType::parse(&fd, spec)?;
        let factors = jh_factors(&tau)?;
        let dim: u64 = factors.iter().map(|x| x.weight.dim()).sum();
        println!("{tau}: {} factors, total dimension {dim} (expected {})", factors.len(), tau.expected_dim());
        for x in &factors {
            println!("    J={:<6} {}  dim {}", x.shape.to_string(), x.weight, x.weight.dim());
        }
    }
    Ok(())
}
