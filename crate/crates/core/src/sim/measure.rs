use super::channel::Channel;
use super::schedule::{csma_into, random_access_into, slot_rng, CsmaScratch, GammaRule};
use super::topology::{NetworkId, Topology};
use super::{ProtocolStrategy, SirModel};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureConfig {
    pub sir: SirModel,
    pub slots: usize,
    pub gamma_rule: GammaRule,
}

/// Throughput of each network averaged over slots and interior links.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThroughputEstimate {
    /// Mean nats per slot per interior link, scheduled or not.
    pub per_network_rate: [f64; 2],
    /// Standard error of each mean across interior links (0 with fewer
    /// than two links).
    pub std_error: [f64; 2],
    pub slots_used: usize,
    pub interior_counts: [usize; 2],
    /// Mean fraction of each network's links (interior or not) active per
    /// slot.
    pub scheduled_fraction: [f64; 2],
}

/// Reusable buffers plus the channel of one topology.
#[derive(Debug, Clone)]
pub(crate) struct Engine {
    pub(crate) channel: Channel,
    mask: Vec<f32>,
    active: Vec<usize>,
    csma: CsmaScratch,
    measured: Vec<(usize, NetworkId)>,
    link_sum: Vec<f64>,
}

impl Engine {
    pub(crate) fn new(topology: &Topology) -> Self {
        Self {
            channel: Channel::new(topology),
            mask: vec![0.0; topology.len()],
            active: Vec::new(),
            csma: CsmaScratch::default(),
            measured: Vec::new(),
            link_sum: Vec::new(),
        }
    }

    /// Measure the networks flagged in `networks`; the other network's
    /// rate is reported as 0 but its scheduled fraction is still counted.
    pub(crate) fn measure(
        &mut self,
        topology: &Topology,
        strategy: ProtocolStrategy,
        cfg: &MeasureConfig,
        seed: u64,
        networks: [bool; 2],
    ) -> Result<ThroughputEstimate> {
        strategy.validate()?;
        if cfg.slots == 0 {
            return Err(Error::invalid("measurement needs at least one slot"));
        }
        let links = topology.links();
        self.measured.clear();
        self.measured.extend(
            (0..links.len())
                .filter(|&i| networks[links[i].network.index()] && topology.is_interior(i))
                .map(|i| (i, links[i].network)),
        );
        if self.measured.is_empty() {
            return Err(Error::NoInteriorLinks(topology.margin()));
        }
        self.link_sum.clear();
        self.link_sum.resize(self.measured.len(), 0.0);
        let mut admitted = [0u64; 2];

        for slot in 0..cfg.slots as u64 {
            let mut rng = slot_rng(seed, slot);
            match strategy {
                ProtocolStrategy::RandomAccess { p1, p2 } => {
                    random_access_into(topology, [p1, p2], &mut rng, &mut self.active)
                }
                ProtocolStrategy::Csma {
                    gamma1_db,
                    gamma2_db,
                } => csma_into(
                    topology,
                    &self.channel,
                    [gamma1_db, gamma2_db],
                    cfg.gamma_rule,
                    &mut rng,
                    &mut self.csma,
                    &mut self.active,
                ),
            }
            for &k in &self.active {
                self.mask[k] = 1.0;
                admitted[links[k].network.index()] += 1;
            }
            for (pos, &(j, net)) in self.measured.iter().enumerate() {
                if self.mask[j] == 0.0 {
                    continue;
                }
                let i = self
                    .channel
                    .interference(j, &self.mask, &self.active, cfg.sir.mode);
                self.link_sum[pos] += cfg.sir.credit(self.channel.signal(j), i, net);
            }
            for &k in &self.active {
                self.mask[k] = 0.0;
            }
        }

        let slots = cfg.slots as f64;
        let mut sum = [0.0; 2];
        let mut sum_sq = [0.0; 2];
        let mut n = [0usize; 2];
        for (pos, &(_, net)) in self.measured.iter().enumerate() {
            let mean = self.link_sum[pos] / slots;
            let i = net.index();
            sum[i] += mean;
            sum_sq[i] += mean * mean;
            n[i] += 1;
        }
        let counts = topology.counts();
        let mut est = ThroughputEstimate {
            per_network_rate: [0.0; 2],
            std_error: [0.0; 2],
            slots_used: cfg.slots,
            interior_counts: n,
            scheduled_fraction: [0.0; 2],
        };
        for i in 0..2 {
            if n[i] > 0 {
                let m = sum[i] / n[i] as f64;
                est.per_network_rate[i] = m;
                if n[i] > 1 {
                    let var = ((sum_sq[i] - n[i] as f64 * m * m) / (n[i] - 1) as f64).max(0.0);
                    est.std_error[i] = (var / n[i] as f64).sqrt();
                }
            }
            if counts[i] > 0 {
                est.scheduled_fraction[i] = admitted[i] as f64 / (slots * counts[i] as f64);
            }
        }
        Ok(est)
    }
}

/// Estimate both networks' throughput over `cfg.slots` slots.
///
/// Slot `t` draws its schedule from the stream derived from `(seed, t)`,
/// so two strategies measured with the same seed see coupled schedules.
pub fn measure_throughput(
    topology: &Topology,
    strategy: ProtocolStrategy,
    cfg: &MeasureConfig,
    seed: u64,
) -> Result<ThroughputEstimate> {
    Engine::new(topology).measure(topology, strategy, cfg, seed, [true, true])
}
