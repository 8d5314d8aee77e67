use std::path::PathBuf;

use clap::Parser;
use osmvc_core::synth::BlobSpec;

/// Writes a synthetic multi-view Gaussian blob dataset with a manifest.
#[derive(Debug, Parser)]
#[command(name = "osmvc-blobs", version)]
struct Args {
    /// Target directory.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 300)]
    samples: usize,
    #[arg(long, default_value_t = 3)]
    clusters: usize,
    #[arg(long, default_value_t = 3)]
    views: usize,
    /// Features per view.
    #[arg(long, default_value_t = 10)]
    dim: usize,
    /// Distance between cluster centres in noise standard deviations.
    #[arg(long, default_value_t = 6.0)]
    separation: f64,
    /// Fraction of samples per view moved halfway towards another centre.
    #[arg(long, default_value_t = 0.0)]
    bridge: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> anyhow::Result<()> {
    let a = Args::parse();
    anyhow::ensure!(a.clusters >= 1 && a.dim >= a.clusters, "need 1 <= clusters <= dim");
    anyhow::ensure!((0.0..=1.0).contains(&a.bridge), "bridge must lie in [0, 1]");
    let spec = BlobSpec {
        samples: a.samples,
        clusters: a.clusters,
        views: a.views,
        dim: a.dim,
        separation: a.separation,
        bridge_fraction: a.bridge,
        seed: a.seed,
    };
    let manifest = osmvc_cli::write_blob_dataset(&a.out, &spec)?;
    println!("{}", manifest.display());
    Ok(())
}
