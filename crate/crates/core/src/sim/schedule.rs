use super::channel::Channel;
use super::rng::{stream, Purpose};
use super::topology::Topology;
use super::{GAMMA_MAX_DB, GAMMA_MIN_DB};
use crate::error::{Error, Result};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Links transmitting in one slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlotSchedule {
    /// Sorted link indices.
    pub active: Vec<usize>,
    pub slot_index: u64,
}

impl SlotSchedule {
    pub fn is_active(&self, idx: usize) -> bool {
        self.active.binary_search(&idx).is_ok()
    }
}

/// Whose silencing threshold applies when a candidate transmitter is
/// checked against an already admitted receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaRule {
    /// The candidate's own network's threshold.
    #[default]
    Candidate,
    /// The protected receiver's network's threshold.
    Protected,
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "access probability must lie in [0, 1], got {p}"
        )))
    }
}

pub(crate) fn check_gamma(db: f64) -> Result<()> {
    if (GAMMA_MIN_DB..=GAMMA_MAX_DB).contains(&db) {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "silencing threshold must lie in [{GAMMA_MIN_DB}, {GAMMA_MAX_DB}] dB, got {db}"
        )))
    }
}

/// Slot stream for `(seed, slot)`.
pub(crate) fn slot_rng(seed: u64, slot: u64) -> ChaCha8Rng {
    stream(seed, Purpose::Schedule, slot, 0)
}

/// Each link draws one uniform; it transmits iff the draw is below its
/// network's probability. Sharing the stream between strategies couples
/// their schedules (a higher `p` activates a superset).
pub(crate) fn random_access_into(
    topology: &Topology,
    p: [f64; 2],
    rng: &mut ChaCha8Rng,
    active: &mut Vec<usize>,
) {
    active.clear();
    for (i, l) in topology.links().iter().enumerate() {
        let u: f64 = rng.random();
        if u < p[l.network.index()] {
            active.push(i);
        }
    }
}

/// Scratch space for token-priority admission.
#[derive(Debug, Clone, Default)]
pub(crate) struct CsmaScratch {
    /// Priority permutation of the last slot.
    pub(crate) order: Vec<usize>,
    /// `worst[i][k]`: largest interference-to-signal ratio transmitter `k`
    /// would cause at an admitted receiver of network `i`.
    worst: [Vec<f32>; 2],
}

/// Token-priority admission; `active` receives the admitted links in
/// priority order.
pub(crate) fn csma_into(
    topology: &Topology,
    channel: &Channel,
    gamma_db: [f64; 2],
    rule: GammaRule,
    rng: &mut ChaCha8Rng,
    scratch: &mut CsmaScratch,
    active: &mut Vec<usize>,
) {
    let links = topology.links();
    let n = links.len();
    let t = gamma_db.map(|g| 10f64.powf(g / 10.0));
    scratch.order.clear();
    scratch.order.extend(0..n);
    scratch.order.shuffle(rng);
    for w in &mut scratch.worst {
        w.clear();
        w.resize(n, 0.0);
    }
    active.clear();
    for &k in &scratch.order {
        let w = [scratch.worst[0][k] as f64, scratch.worst[1][k] as f64];
        let admitted = match rule {
            GammaRule::Candidate => w[0].max(w[1]) * t[links[k].network.index()] <= 1.0,
            GammaRule::Protected => w[0] * t[0] <= 1.0 && w[1] * t[1] <= 1.0,
        };
        if admitted {
            active.push(k);
            let inv = (1.0 / channel.signal(k)) as f32;
            let worst = &mut scratch.worst[links[k].network.index()];
            for (wk, &g) in worst.iter_mut().zip(channel.row(k)) {
                let r = g * inv;
                *wk = if r > *wk { r } else { *wk };
            }
        }
    }
}

/// Random-access schedule for slot `slot`: link `k` of network `i` is
/// active independently with probability `p_i`.
pub fn schedule_random_access(
    topology: &Topology,
    p1: f64,
    p2: f64,
    seed: u64,
    slot: u64,
) -> Result<SlotSchedule> {
    check_probability(p1)?;
    check_probability(p2)?;
    let mut active = Vec::new();
    random_access_into(topology, [p1, p2], &mut slot_rng(seed, slot), &mut active);
    Ok(SlotSchedule {
        active,
        slot_index: slot,
    })
}

/// Token-priority CSMA schedule for slot `slot`.
///
/// Links are visited in a fresh uniformly random priority order. A link is
/// admitted iff, at every receiver already admitted, the desired signal
/// exceeds the candidate's interference by at least the applicable
/// silencing threshold (in dB).
pub fn schedule_csma(
    topology: &Topology,
    channel: &Channel,
    gamma1_db: f64,
    gamma2_db: f64,
    rule: GammaRule,
    seed: u64,
    slot: u64,
) -> Result<SlotSchedule> {
    check_gamma(gamma1_db)?;
    check_gamma(gamma2_db)?;
    if channel.len() != topology.len() {
        return Err(Error::invalid("channel was built for a different topology"));
    }
    let (mut scratch, mut active) = (CsmaScratch::default(), Vec::new());
    csma_into(
        topology,
        channel,
        [gamma1_db, gamma2_db],
        rule,
        &mut slot_rng(seed, slot),
        &mut scratch,
        &mut active,
    );
    active.sort_unstable();
    Ok(SlotSchedule {
        active,
        slot_index: slot,
    })
}
