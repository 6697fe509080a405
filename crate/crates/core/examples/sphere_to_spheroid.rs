//! Straightens the path from the unit sphere to a prolate spheroid and prints
//! the energy after every accepted step.

use flagmetric::metrics::FlagWeights;
use flagmetric::shapedist::{distance, StraightenOptions};
use flagmetric::shapes;

fn main() -> flagmetric::Result<()> {
    let a = shapes::sphere::<f64>(1.0, 64, 33)?;
    let b = shapes::ellipsoid::<f64>(1.0, 1.0, 1.3, 64, 33)?;
    let result = distance(&a, &b, 8, &FlagWeights::ones(), &StraightenOptions::default())?;
    for (k, e) in result.history.iter().enumerate() {
        println!("{k:3} {e:.10}");
    }
    println!("distance {:.8} ({:?})", result.distance(), result.status);
    Ok(())
}
