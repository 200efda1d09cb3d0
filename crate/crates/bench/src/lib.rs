//! Shared fixtures for the criterion benchmarks.

use coverstream_core::generators::{random_instance_with, RandomCfg};
use coverstream_core::Instance;

/// A reproducible mid-sized instance: the solvers spend real time here
/// without the oracle becoming the bottleneck.
pub fn medium_instance(seed: u64) -> Instance {
    let cfg = RandomCfg {
        n_range: (400, 400),
        m_range: (300, 300),
        density_range: (0.02, 0.08),
        full_universe_prob: 0.0,
    };
    random_instance_with(&cfg, seed)
}

pub fn small_instance(seed: u64) -> Instance {
    let cfg = RandomCfg {
        n_range: (30, 30),
        m_range: (24, 24),
        density_range: (0.1, 0.3),
        full_universe_prob: 0.5,
    };
    random_instance_with(&cfg, seed)
}
