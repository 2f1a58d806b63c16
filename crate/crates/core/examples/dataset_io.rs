//! Generate a noisy dataset, write it in the binary and CSV formats, read the
//! binary file back and check the round trip.
//!
//! Usage: cargo run --release --example dataset_io [out_dir]

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use l1margin::datagen::{generate, make_ground_truth, write_dataset_csv, Dataset, NoiseModel, TruthShape};
use l1margin::numerics::Rng;

fn main() -> l1margin::Result<()> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(std::env::temp_dir);
    std::fs::create_dir_all(&dir)?;

    let mut rng = Rng::new(42, 0);
    let truth = make_ground_truth(50, 4, TruthShape::RandomSigns, &mut rng)?;
    let ds = generate(30, &truth, &NoiseModel::logistic(1.5)?, &mut rng)?;
    println!("n={} d={} support={:?} corrupted={:.3}", ds.n, ds.d, truth.support, ds.corruption_rate());

    let bin = dir.join("l1margin_example.bin");
    let csv = dir.join("l1margin_example.csv");
    ds.save(&bin)?;
    write_dataset_csv(&ds, BufWriter::new(File::create(&csv)?))?;
    println!("wrote {} ({} bytes)", bin.display(), std::fs::metadata(&bin)?.len());
    println!("wrote {} ({} bytes)", csv.display(), std::fs::metadata(&csv)?.len());

    let back = Dataset::load(&bin)?;
    back.check_invariants()?;
    println!("round trip identical: {}", back == ds);
    Ok(())
}
