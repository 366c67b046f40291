//! Chunk-parallel execution of the simulator.
//!
//! Chunks are independent random substreams, so a run is the ordered merge
//! of per-chunk tallies and the result does not depend on the thread count.

use ctxprob_core::epr::ChshSettings;
use ctxprob_core::sim::{chsh_protocols, ChshEstimate, Protocol, SimConfig, SimReport, Tally};
use ctxprob_core::{BinaryDistribution, Result};
use rayon::prelude::*;

/// Worker threads; `None` uses rayon's global pool.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Parallelism(pub Option<usize>);

impl Parallelism {
    /// Single worker.
    pub const SERIAL: Parallelism = Parallelism(Some(1));

    fn install<R: Send>(self, job: impl FnOnce() -> R + Send) -> R {
        match self.0 {
            None => job(),
            Some(threads) => {
                rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build().expect("thread pool").install(job)
            }
        }
    }
}

fn merge_in_order(tallies: &[Tally]) -> Tally {
    tallies.iter().fold(Tally::new(), |mut acc, t| {
        acc.merge(t);
        acc
    })
}

/// Tally of a protocol with chunks spread over the worker pool.
pub fn tally(protocol: &Protocol, parallelism: Parallelism) -> Result<Tally> {
    if protocol.n_pairs == 0 {
        return Err(ctxprob_core::Error::InvalidCount);
    }
    let chunks: Vec<Tally> =
        parallelism.install(|| (0..protocol.chunk_count()).into_par_iter().map(|k| protocol.run_chunk(k)).collect());
    Ok(merge_in_order(&chunks))
}

/// Parallel [`ctxprob_core::sim::run_simulation`]; identical output.
pub fn run_simulation(config: &SimConfig, parallelism: Parallelism) -> Result<SimReport> {
    config.validate()?;
    Ok(SimReport::from_tally(*config, &tally(&config.protocol(), parallelism)?))
}

/// Parallel [`ctxprob_core::sim::simulate_chsh`]; identical output.
pub fn simulate_chsh(
    settings: &ChshSettings,
    marginal_c: &BinaryDistribution,
    n_per_setting: u64,
    seed: u64,
    parallelism: Parallelism,
) -> Result<ChshEstimate> {
    let protocols = chsh_protocols(settings, marginal_c, n_per_setting, seed)?;
    let per_chunk: Vec<(usize, Tally)> = parallelism.install(|| {
        protocols
            .iter()
            .enumerate()
            .flat_map(|(k, p)| (0..p.chunk_count()).map(move |c| (k, c)))
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|(k, c)| (k, protocols[k].run_chunk(c)))
            .collect()
    });
    let mut tallies = [Tally::new(); 4];
    for (k, t) in &per_chunk {
        tallies[*k].merge(t);
    }
    Ok(ChshEstimate::from_tallies(&tallies))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ctxprob_core::epr::AnglePair;
    use ctxprob_core::sim::{self, TimeDistribution};

    #[test]
    fn parallel_matches_serial() {
        let config = SimConfig::new(
            AnglePair::new(1.0, 0.2).unwrap(),
            BinaryDistribution::UNIFORM,
            300_001,
            17,
            TimeDistribution::UniformSquare,
        )
        .unwrap();
        let serial = sim::run_simulation(&config).unwrap();
        for threads in [1, 2, 3, 8] {
            assert_eq!(run_simulation(&config, Parallelism(Some(threads))).unwrap(), serial);
        }
        assert_eq!(run_simulation(&config, Parallelism::default()).unwrap(), serial);
    }

    #[test]
    fn parallel_chsh_matches_serial() {
        let s = ChshSettings::optimal();
        let u = BinaryDistribution::UNIFORM;
        let serial = sim::simulate_chsh(&s, &u, 70_000, 3).unwrap();
        for threads in [1, 4] {
            assert_eq!(simulate_chsh(&s, &u, 70_000, 3, Parallelism(Some(threads))).unwrap(), serial);
        }
    }
}
