use super::rng::{stream, Purpose};
use crate::error::{Error, Result};
use crate::game::{effective_nodes_per_disc, RangeSpec};
use crate::numerics::{Density, PathlossExponent};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::{self, Write};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NetworkId {
    Net1,
    Net2,
}

impl NetworkId {
    pub const BOTH: [NetworkId; 2] = [NetworkId::Net1, NetworkId::Net2];

    /// 0 for network 1, 1 for network 2.
    pub fn index(self) -> usize {
        match self {
            NetworkId::Net1 => 0,
            NetworkId::Net2 => 1,
        }
    }

    /// 1 or 2.
    pub fn label(self) -> u8 {
        self.index() as u8 + 1
    }
}

/// A transmitter/receiver pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Link {
    pub tx: Point,
    pub rx: Point,
    pub network: NetworkId,
    /// `|tx - rx|`.
    pub range: f64,
    /// Transmit power: `range^α` under power control (every receiver sees
    /// unit signal power), else 1.
    pub power_weight: f64,
}

impl Link {
    pub fn new(
        tx: Point,
        rx: Point,
        network: NetworkId,
        alpha: PathlossExponent,
        power_control: bool,
    ) -> Self {
        let range = tx.distance(rx);
        let power_weight = if power_control {
            range.powf(alpha.get())
        } else {
            1.0
        };
        Self {
            tx,
            rx,
            network,
            range,
            power_weight,
        }
    }
}

/// Parameters of a random two-network deployment on the unit square.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TopologySpec {
    pub count1: usize,
    pub count2: usize,
    pub range: RangeSpec,
    pub power_control: bool,
    pub alpha: PathlossExponent,
    /// Width of the boundary band whose transmitters are not measured.
    pub margin: f64,
}

impl TopologySpec {
    /// 400 and 200 transmitters, receivers uniform on a disc of radius
    /// 0.15, power control, interior margin 0.1.
    pub fn two_network_default(alpha: PathlossExponent) -> Self {
        Self {
            count1: 400,
            count2: 200,
            range: RangeSpec::UniformDisc { r: 0.15 },
            power_control: true,
            alpha,
            margin: 0.1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.range.validate()?;
        if let RangeSpec::SecondMoment { .. } = self.range {
            return Err(Error::invalid(
                "topology needs a fixed or uniform-disc range distribution",
            ));
        }
        validate_margin(self.margin)
    }

    /// Nodes per transmission disc `π λ_i E[d²]` of each network.
    pub fn nodes_per_disc(&self) -> Result<(Density, Density)> {
        let n = |count: usize| {
            if count == 0 {
                Ok(Density::ZERO)
            } else {
                effective_nodes_per_disc(count as f64, self.range)
            }
        };
        Ok((n(self.count1)?, n(self.count2)?))
    }
}

fn validate_margin(margin: f64) -> Result<()> {
    if (0.0..0.5).contains(&margin) {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "margin must lie in [0, 0.5), got {margin}"
        )))
    }
}

/// Links placed in the unit square. Receivers may lie outside it; only
/// links whose transmitter is in the interior band are measured.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    links: Vec<Link>,
    alpha: PathlossExponent,
    power_control: bool,
    margin: f64,
    area_side: f64,
    range: Option<RangeSpec>,
    rng_seed: u64,
}

impl Topology {
    /// A topology from explicit tx/rx positions. Transmitters must lie in
    /// the unit square. Such a topology cannot churn.
    pub fn from_positions(
        pairs: &[(Point, Point, NetworkId)],
        alpha: PathlossExponent,
        power_control: bool,
        margin: f64,
    ) -> Result<Self> {
        validate_margin(margin)?;
        let inside = |p: Point| (0.0..=1.0).contains(&p.x) && (0.0..=1.0).contains(&p.y);
        if let Some(bad) = pairs.iter().position(|(tx, _, _)| !inside(*tx)) {
            return Err(Error::invalid(format!(
                "transmitter {bad} lies outside the unit square"
            )));
        }
        let links = pairs
            .iter()
            .map(|&(tx, rx, net)| Link::new(tx, rx, net, alpha, power_control))
            .collect();
        Ok(Self {
            links,
            alpha,
            power_control,
            margin,
            area_side: 1.0,
            range: None,
            rng_seed: 0,
        })
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    pub fn alpha(&self) -> PathlossExponent {
        self.alpha
    }

    pub fn power_control(&self) -> bool {
        self.power_control
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    pub fn area_side(&self) -> f64 {
        self.area_side
    }

    pub fn rng_seed(&self) -> u64 {
        self.rng_seed
    }

    /// Same links with a different interior margin.
    pub fn with_margin(mut self, margin: f64) -> Result<Self> {
        validate_margin(margin)?;
        self.margin = margin;
        Ok(self)
    }

    /// Whether link `idx` has its transmitter in `[margin, 1 - margin]²`.
    pub fn is_interior(&self, idx: usize) -> bool {
        let p = self.links[idx].tx;
        let (lo, hi) = (self.margin, self.area_side - self.margin);
        p.x >= lo && p.x <= hi && p.y >= lo && p.y <= hi
    }

    /// Number of links per network.
    pub fn counts(&self) -> [usize; 2] {
        let mut c = [0; 2];
        for l in &self.links {
            c[l.network.index()] += 1;
        }
        c
    }

    pub fn interior_counts(&self) -> [usize; 2] {
        let mut c = [0; 2];
        for (i, l) in self.links.iter().enumerate() {
            if self.is_interior(i) {
                c[l.network.index()] += 1;
            }
        }
        c
    }

    /// Replace link `idx` by a fresh placement from the topology's range
    /// distribution, keeping its network.
    pub(crate) fn replace_link(&mut self, idx: usize, rng: &mut ChaCha8Rng) -> Result<()> {
        let range = self.range.ok_or_else(|| {
            Error::invalid("hand-built topology has no range distribution to draw from")
        })?;
        let net = self.links[idx].network;
        self.links[idx] = draw_link(rng, net, range, self.alpha, self.power_control);
        Ok(())
    }

    /// CSV with header `idx,network,tx_x,tx_y,rx_x,rx_y,range`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "idx,network,tx_x,tx_y,rx_x,rx_y,range")?;
        for (i, l) in self.links.iter().enumerate() {
            writeln!(
                out,
                "{i},{},{},{},{},{},{}",
                l.network.label(),
                l.tx.x,
                l.tx.y,
                l.rx.x,
                l.rx.y,
                l.range
            )?;
        }
        Ok(())
    }
}

fn draw_link(
    rng: &mut ChaCha8Rng,
    network: NetworkId,
    range: RangeSpec,
    alpha: PathlossExponent,
    power_control: bool,
) -> Link {
    let tx = Point::new(rng.random::<f64>(), rng.random::<f64>());
    let theta = 2.0 * PI * rng.random::<f64>();
    let r = match range {
        RangeSpec::Fixed { d } => d,
        RangeSpec::UniformDisc { r } => r * rng.random::<f64>().sqrt(),
        RangeSpec::SecondMoment { .. } => unreachable!("rejected by TopologySpec::validate"),
    };
    let rx = Point::new(tx.x + r * theta.cos(), tx.y + r * theta.sin());
    // Use the drawn distance rather than re-deriving it from rounded
    // coordinates.
    let power_weight = if power_control {
        r.powf(alpha.get())
    } else {
        1.0
    };
    Link {
        tx,
        rx,
        network,
        range: r,
        power_weight,
    }
}

/// Transmitters i.i.d. uniform on the unit square; network 1 links first.
pub fn generate_topology(spec: &TopologySpec, seed: u64) -> Result<Topology> {
    spec.validate()?;
    let mut rng = stream(seed, Purpose::Topology, 0, 0);
    let mut links = Vec::with_capacity(spec.count1 + spec.count2);
    for (net, count) in [
        (NetworkId::Net1, spec.count1),
        (NetworkId::Net2, spec.count2),
    ] {
        for _ in 0..count {
            links.push(draw_link(
                &mut rng,
                net,
                spec.range,
                spec.alpha,
                spec.power_control,
            ));
        }
    }
    Ok(Topology {
        links,
        alpha: spec.alpha,
        power_control: spec.power_control,
        margin: spec.margin,
        area_side: 1.0,
        range: Some(spec.range),
        rng_seed: seed,
    })
}
