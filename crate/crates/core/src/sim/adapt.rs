use super::measure::{Engine, MeasureConfig};
use super::rng::{derive_seed, stream, Purpose};
use super::schedule::GammaRule;
use super::topology::{generate_topology, NetworkId, Topology, TopologySpec};
use super::{Protocol, RateModel, SirMode, SirModel};
use crate::error::{Error, Result};
use crate::numerics::PathlossExponent;
use rand::seq::index::sample;
use serde::{Deserialize, Serialize};
use std::io::{self, Write};

/// Parameters of a greedy adaptation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreedyConfig {
    pub topology: TopologySpec,
    pub protocol: Protocol,
    /// Initial strategies: access probabilities or thresholds in dB.
    pub init: [f64; 2],
    pub delta: f64,
    pub iterations: usize,
    pub slots_per_estimate: usize,
    /// Links per network replaced by fresh placements each iteration.
    pub churn: usize,
    pub sir: SirModel,
    pub gamma_rule: GammaRule,
    /// Measure a network's two probes on the same slot seeds (common random
    /// numbers) instead of independent ones.
    pub coupled_probes: bool,
    pub seed: u64,
}

impl GreedyConfig {
    /// Random access from `p = (1, 1)`: step 0.02, 500 iterations of 200
    /// slots per estimate, full interference, variable-rate crediting, no
    /// churn, on [`TopologySpec::two_network_default`].
    pub fn random_access(alpha: PathlossExponent, seed: u64) -> Self {
        Self {
            topology: TopologySpec::two_network_default(alpha),
            protocol: Protocol::RandomAccess,
            init: [1.0, 1.0],
            delta: 0.02,
            iterations: 500,
            slots_per_estimate: 200,
            churn: 0,
            sir: SirModel {
                mode: SirMode::Full,
                rate: RateModel::VariableRate,
            },
            gamma_rule: GammaRule::Candidate,
            coupled_probes: false,
            seed,
        }
    }

    /// CSMA from thresholds of 0 dB with 1 dB steps and 10 links of churn
    /// per network per iteration; otherwise as [`Self::random_access`].
    pub fn csma(alpha: PathlossExponent, seed: u64) -> Self {
        Self {
            protocol: Protocol::Csma,
            init: [0.0, 0.0],
            delta: 1.0,
            churn: 10,
            ..Self::random_access(alpha, seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.topology.validate()?;
        if self.topology.count1 == 0 || self.topology.count2 == 0 {
            return Err(Error::invalid(
                "greedy adaptation needs links in both networks",
            ));
        }
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return Err(Error::invalid(format!(
                "step size must be > 0, got {}",
                self.delta
            )));
        }
        if self.iterations == 0 || self.slots_per_estimate == 0 {
            return Err(Error::invalid(
                "iterations and slots per estimate must be >= 1",
            ));
        }
        self.protocol.strategy(self.init).validate()?;
        let fewest = self.topology.count1.min(self.topology.count2);
        if self.churn > fewest {
            return Err(Error::invalid(format!(
                "churn {} exceeds the smaller network's {fewest} links",
                self.churn
            )));
        }
        Ok(())
    }
}

/// One iteration of a greedy run, after both networks committed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub iter: usize,
    pub strategy1: f64,
    pub strategy2: f64,
    /// Each network's estimate at the probe it committed to.
    pub r1: f64,
    pub r2: f64,
    /// Scheduled fractions: the committed access probability for random
    /// access; the mean admitted fraction over the iteration's probe slots
    /// for CSMA.
    pub f1: f64,
    pub f2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptationTrace {
    pub steps: Vec<TraceStep>,
    pub protocol: Protocol,
    pub delta: f64,
}

/// Means over the last iterations of a trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailMeans {
    pub iterations: usize,
    pub strategy: [f64; 2],
    pub rate: [f64; 2],
    pub fraction: [f64; 2],
}

impl AdaptationTrace {
    /// CSV with header `iter,strategy1,strategy2,r1,r2,f1,f2`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "iter,strategy1,strategy2,r1,r2,f1,f2")?;
        for s in &self.steps {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                s.iter, s.strategy1, s.strategy2, s.r1, s.r2, s.f1, s.f2
            )?;
        }
        Ok(())
    }

    /// Means over the last `k` iterations (all of them if fewer).
    pub fn tail_means(&self, k: usize) -> Result<TailMeans> {
        if self.steps.is_empty() || k == 0 {
            return Err(Error::invalid(
                "tail means need a non-empty trace and window",
            ));
        }
        let tail = &self.steps[self.steps.len().saturating_sub(k)..];
        let n = tail.len() as f64;
        let mean = |f: fn(&TraceStep) -> f64| tail.iter().map(f).sum::<f64>() / n;
        Ok(TailMeans {
            iterations: tail.len(),
            strategy: [mean(|s| s.strategy1), mean(|s| s.strategy2)],
            rate: [mean(|s| s.r1), mean(|s| s.r2)],
            fraction: [mean(|s| s.f1), mean(|s| s.f2)],
        })
    }
}

/// Per-iteration scheduled fractions `(f1, f2)` of a trace.
pub fn scheduled_fraction(trace: &AdaptationTrace) -> Result<Vec<(f64, f64)>> {
    if trace.steps.is_empty() {
        return Err(Error::invalid("empty trace"));
    }
    Ok(trace.steps.iter().map(|s| (s.f1, s.f2)).collect())
}

/// Greedy hill climbing on measured throughput.
///
/// Each iteration: churn (if any), then network 1 measures its throughput
/// at `s₁+Δ` and `s₁-Δ` (clamped to the protocol bounds) against network
/// 2's current strategy and commits to the better probe, ties going to
/// `-Δ`; then network 2 does the same against network 1's new value. The
/// two probes run on independent slot seeds unless `coupled_probes` is set.
pub fn run_greedy_adaptation(cfg: &GreedyConfig) -> Result<AdaptationTrace> {
    cfg.validate()?;
    let topology = generate_topology(
        &cfg.topology,
        derive_seed(cfg.seed, Purpose::Topology, 0, 0),
    )?;
    run_greedy_on(topology, cfg).map(|(trace, _)| trace)
}

/// As [`run_greedy_adaptation`] but on a given topology; also returns the
/// topology as it stands after churn.
pub(crate) fn run_greedy_on(
    mut topology: Topology,
    cfg: &GreedyConfig,
) -> Result<(AdaptationTrace, Topology)> {
    cfg.validate()?;
    let mut engine = Engine::new(&topology);
    let measure = MeasureConfig {
        sir: cfg.sir,
        slots: cfg.slots_per_estimate,
        gamma_rule: cfg.gamma_rule,
    };
    let (lo, hi) = cfg.protocol.bounds();
    let mut s = cfg.init;
    let mut steps = Vec::with_capacity(cfg.iterations);
    let members: [Vec<usize>; 2] = NetworkId::BOTH.map(|net| {
        (0..topology.len())
            .filter(|&i| topology.links()[i].network == net)
            .collect()
    });

    for t in 1..=cfg.iterations {
        if cfg.churn > 0 {
            let mut rng = stream(cfg.seed, Purpose::Churn, t as u64, 0);
            for m in &members {
                for pick in sample(&mut rng, m.len(), cfg.churn) {
                    let idx = m[pick];
                    topology.replace_link(idx, &mut rng)?;
                    engine.channel.refresh_link(&topology, idx);
                }
            }
        }
        let mut rate = [0.0; 2];
        let mut fraction = [0.0; 2];
        for i in 0..2 {
            let probe_seed = derive_seed(cfg.seed, Purpose::Probe, t as u64, i as u64);
            let down_seed = if cfg.coupled_probes {
                probe_seed
            } else {
                derive_seed(cfg.seed, Purpose::Probe, t as u64, i as u64 + 2)
            };
            let mut up = s;
            up[i] = (s[i] + cfg.delta).min(hi);
            let mut down = s;
            down[i] = (s[i] - cfg.delta).max(lo);
            let only = [i == 0, i == 1];
            let e_up = engine.measure(
                &topology,
                cfg.protocol.strategy(up),
                &measure,
                probe_seed,
                only,
            )?;
            let e_down = engine.measure(
                &topology,
                cfg.protocol.strategy(down),
                &measure,
                down_seed,
                only,
            )?;
            if e_up.per_network_rate[i] > e_down.per_network_rate[i] {
                s = up;
                rate[i] = e_up.per_network_rate[i];
            } else {
                s = down;
                rate[i] = e_down.per_network_rate[i];
            }
            for n in 0..2 {
                fraction[n] += 0.25 * (e_up.scheduled_fraction[n] + e_down.scheduled_fraction[n]);
            }
        }
        if cfg.protocol == Protocol::RandomAccess {
            fraction = s;
        }
        steps.push(TraceStep {
            iter: t,
            strategy1: s[0],
            strategy2: s[1],
            r1: rate[0],
            r2: rate[1],
            f1: fraction[0],
            f2: fraction[1],
        });
    }
    Ok((
        AdaptationTrace {
            steps,
            protocol: cfg.protocol,
            delta: cfg.delta,
        },
        topology,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(protocol: Protocol) -> GreedyConfig {
        let a = PathlossExponent::new(3.0).unwrap();
        let base = match protocol {
            Protocol::RandomAccess => GreedyConfig::random_access(a, 11),
            Protocol::Csma => GreedyConfig::csma(a, 11),
        };
        GreedyConfig {
            topology: TopologySpec {
                count1: 40,
                count2: 20,
                ..base.topology
            },
            iterations: 15,
            slots_per_estimate: 10,
            churn: if protocol == Protocol::Csma { 3 } else { 0 },
            ..base
        }
    }

    #[test]
    fn strategies_stay_in_bounds_and_move_by_delta() {
        for protocol in [Protocol::RandomAccess, Protocol::Csma] {
            let cfg = small(protocol);
            let trace = run_greedy_adaptation(&cfg).unwrap();
            assert_eq!(trace.steps.len(), 15);
            let (lo, hi) = protocol.bounds();
            let mut prev = cfg.init;
            for s in &trace.steps {
                for (now, before) in [(s.strategy1, prev[0]), (s.strategy2, prev[1])] {
                    assert!((lo..=hi).contains(&now));
                    let step = (now - before).abs();
                    assert!(step <= cfg.delta + 1e-12);
                    assert!(step > 0.0 || now == lo || now == hi);
                }
                assert!(s.r1 >= 0.0 && s.r2 >= 0.0);
                assert!((0.0..=1.0).contains(&s.f1) && (0.0..=1.0).contains(&s.f2));
                prev = [s.strategy1, s.strategy2];
            }
        }
    }

    #[test]
    fn random_access_fraction_is_access_probability() {
        let trace = run_greedy_adaptation(&small(Protocol::RandomAccess)).unwrap();
        for (s, f) in trace.steps.iter().zip(scheduled_fraction(&trace).unwrap()) {
            assert_eq!((s.strategy1, s.strategy2), f);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let ok = small(Protocol::RandomAccess);
        assert!(run_greedy_adaptation(&GreedyConfig { delta: 0.0, ..ok }).is_err());
        assert!(run_greedy_adaptation(&GreedyConfig {
            init: [1.5, 0.5],
            ..ok
        })
        .is_err());
        assert!(run_greedy_adaptation(&GreedyConfig { churn: 21, ..ok }).is_err());
        let csma = small(Protocol::Csma);
        assert!(run_greedy_adaptation(&GreedyConfig {
            init: [-31.0, 0.0],
            ..csma
        })
        .is_err());
        let empty = AdaptationTrace {
            steps: vec![],
            protocol: Protocol::Csma,
            delta: 1.0,
        };
        assert!(scheduled_fraction(&empty).is_err());
        assert!(empty.tail_means(100).is_err());
    }

    #[test]
    fn csv_export() {
        let trace = run_greedy_adaptation(&GreedyConfig {
            iterations: 2,
            ..small(Protocol::Csma)
        })
        .unwrap();
        let mut buf = Vec::new();
        trace.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("iter,strategy1,strategy2,r1,r2,f1,f2"));
        assert!(lines.next().unwrap().starts_with("1,"));
        assert_eq!(text.lines().count(), 3);
    }
}
