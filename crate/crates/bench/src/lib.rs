//! Shared fixtures for the criterion benchmarks.

use specshare::sim::{generate_topology, Topology, TopologySpec};
use specshare::PathlossExponent;

/// The 400/200-link two-network topology used by the greedy experiments.
pub fn default_topology(alpha: f64, seed: u64) -> Topology {
    let spec = TopologySpec::two_network_default(PathlossExponent::new(alpha).unwrap());
    generate_topology(&spec, seed).unwrap()
}
