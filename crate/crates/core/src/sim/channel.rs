use super::schedule::SlotSchedule;
use super::topology::{Link, Topology};
use super::SirMode;
use crate::error::{Error, Result};

/// Received power at `rx`'s receiver from `tx`'s transmitter.
fn received_power(tx: &Link, rx: &Link, alpha: f64) -> f64 {
    tx.power_weight * tx.tx.distance(rx.rx).powf(-alpha)
}

fn signal_power(link: &Link, power_control: bool, alpha: f64) -> f64 {
    if power_control {
        1.0
    } else {
        link.range.powf(-alpha)
    }
}

/// SIR at the receiver of active link `link_index`, evaluated from the
/// geometry. `+∞` when no other link is active.
pub fn compute_sir(
    topology: &Topology,
    schedule: &SlotSchedule,
    link_index: usize,
    mode: SirMode,
) -> Result<f64> {
    if !schedule.is_active(link_index) {
        return Err(Error::InactiveLink(link_index));
    }
    let alpha = topology.alpha().get();
    let links = topology.links();
    let own = &links[link_index];
    let terms = schedule
        .active
        .iter()
        .filter(|&&k| k != link_index)
        .map(|&k| received_power(&links[k], own, alpha));
    let interference = match mode {
        SirMode::Dominant => terms.fold(0.0, f64::max),
        SirMode::Full => terms.sum(),
    };
    if interference <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(signal_power(own, topology.power_control(), alpha) / interference)
}

/// Precomputed link gains for fast slot evaluation.
///
/// `gain[j * n + k]` is the power received at link `j`'s receiver from link
/// `k`'s transmitter, stored as `f32` (saturating at `f32::MAX`) with a zero
/// diagonal; `signal[j]` is the desired power at receiver `j`.
#[derive(Debug, Clone)]
pub struct Channel {
    n: usize,
    signal: Vec<f64>,
    gain: Vec<f32>,
}

fn to_f32(x: f64) -> f32 {
    (x as f32).min(f32::MAX)
}

impl Channel {
    pub fn new(topology: &Topology) -> Self {
        let n = topology.len();
        let mut ch = Self {
            n,
            signal: vec![0.0; n],
            gain: vec![0.0; n * n],
        };
        for j in 0..n {
            ch.refresh_row(topology, j);
        }
        ch
    }

    fn refresh_row(&mut self, topology: &Topology, j: usize) {
        let alpha = topology.alpha().get();
        let links = topology.links();
        self.signal[j] = signal_power(&links[j], topology.power_control(), alpha);
        for k in 0..self.n {
            let g = if k == j {
                0.0
            } else {
                to_f32(received_power(&links[k], &links[j], alpha))
            };
            self.gain[j * self.n + k] = g;
        }
    }

    /// Recompute everything involving link `idx` after it moved.
    pub(crate) fn refresh_link(&mut self, topology: &Topology, idx: usize) {
        self.refresh_row(topology, idx);
        let alpha = topology.alpha().get();
        let links = topology.links();
        for j in 0..self.n {
            if j != idx {
                self.gain[j * self.n + idx] = to_f32(received_power(&links[idx], &links[j], alpha));
            }
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn signal(&self, j: usize) -> f64 {
        self.signal[j]
    }

    /// Power at receiver `j` from transmitter `k`.
    pub fn gain(&self, j: usize, k: usize) -> f64 {
        self.gain[j * self.n + k] as f64
    }

    /// Powers at receiver `j` from every transmitter.
    pub(crate) fn row(&self, j: usize) -> &[f32] {
        &self.gain[j * self.n..(j + 1) * self.n]
    }

    /// Interference at receiver `j` from the active set, given both as a
    /// 0/1 mask (used when many links are active) and as an index list.
    pub(crate) fn interference(
        &self,
        j: usize,
        mask: &[f32],
        active: &[usize],
        mode: SirMode,
    ) -> f64 {
        let row = self.row(j);
        // The dense path touches every entry; the sparse one gathers.
        let dense = active.len() * 4 >= self.n;
        match (mode, dense) {
            (SirMode::Full, true) => masked_sum(row, mask),
            (SirMode::Dominant, true) => masked_max(row, mask),
            (SirMode::Full, false) => active.iter().map(|&k| row[k] as f64).sum(),
            (SirMode::Dominant, false) => {
                active.iter().map(|&k| row[k]).fold(0.0f32, f32::max) as f64
            }
        }
    }
}

const LANES: usize = 16;

fn masked_sum(row: &[f32], mask: &[f32]) -> f64 {
    let mut acc = [0.0f32; LANES];
    let rows = row.chunks_exact(LANES);
    let masks = mask.chunks_exact(LANES);
    let (rt, mt) = (rows.remainder(), masks.remainder());
    for (r, m) in rows.zip(masks) {
        for l in 0..LANES {
            acc[l] += r[l] * m[l];
        }
    }
    let mut total: f64 = acc.iter().map(|&x| x as f64).sum();
    for (r, m) in rt.iter().zip(mt) {
        total += (r * m) as f64;
    }
    total
}

fn masked_max(row: &[f32], mask: &[f32]) -> f64 {
    let mut acc = [0.0f32; LANES];
    let rows = row.chunks_exact(LANES);
    let masks = mask.chunks_exact(LANES);
    let (rt, mt) = (rows.remainder(), masks.remainder());
    for (r, m) in rows.zip(masks) {
        for l in 0..LANES {
            let v = r[l] * m[l];
            acc[l] = if v > acc[l] { v } else { acc[l] };
        }
    }
    let mut best = acc.iter().fold(0.0f32, |a, &b| a.max(b));
    for (r, m) in rt.iter().zip(mt) {
        best = best.max(r * m);
    }
    best as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::topology::{NetworkId, Point};
    use crate::PathlossExponent;

    fn pair(tx: (f64, f64), rx: (f64, f64)) -> (Point, Point, NetworkId) {
        (
            Point::new(tx.0, tx.1),
            Point::new(rx.0, rx.1),
            NetworkId::Net1,
        )
    }

    #[test]
    fn kernels_agree_with_naive_loops() {
        let row: Vec<f32> = (0..37).map(|i| (i as f32 * 0.37).sin().abs()).collect();
        let mask: Vec<f32> = (0..37)
            .map(|i| if i % 3 == 0 { 1.0 } else { 0.0 })
            .collect();
        let sum: f64 = row.iter().zip(&mask).map(|(r, m)| (r * m) as f64).sum();
        let max = row
            .iter()
            .zip(&mask)
            .map(|(r, m)| r * m)
            .fold(0.0f32, f32::max) as f64;
        assert!((masked_sum(&row, &mask) - sum).abs() < 1e-6);
        assert_eq!(masked_max(&row, &mask), max);
    }

    #[test]
    fn gains_follow_geometry_and_refresh() {
        let a = PathlossExponent::new(4.0).unwrap();
        let mut t = Topology::from_positions(
            &[pair((0.1, 0.1), (0.2, 0.1)), pair((0.5, 0.1), (0.6, 0.1))],
            a,
            false,
            0.0,
        )
        .unwrap();
        let ch = Channel::new(&t);
        assert!((ch.signal(0) - 1e4).abs() / 1e4 < 1e-12);
        // tx 1 at (0.5, 0.1), rx 0 at (0.2, 0.1): distance 0.3
        assert!((ch.gain(0, 1) - 0.3f64.powi(-4)).abs() / 0.3f64.powi(-4) < 1e-6);
        assert_eq!(ch.gain(0, 0), 0.0);

        let mut rng = crate::sim::rng::stream(1, crate::sim::rng::Purpose::Churn, 0, 0);
        assert!(t.replace_link(1, &mut rng).is_err());
        let mut ch = ch;
        let moved = pair((0.3, 0.1), (0.6, 0.1));
        t = Topology::from_positions(&[pair((0.1, 0.1), (0.2, 0.1)), moved], a, false, 0.0)
            .unwrap();
        ch.refresh_link(&t, 1);
        assert!((ch.gain(0, 1) - 1e4).abs() / 1e4 < 1e-6);
        assert_eq!(ch.row(0)[1] as f64, ch.gain(0, 1));
    }
}
