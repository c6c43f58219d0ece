//! Seeded random instance generator.
//!
//! Construction, in order:
//!
//! 1. `paths` random simple source-sink paths. Each has a node count drawn
//!    uniformly from `[2, min(nodes, 20)]`; its intermediate nodes are
//!    distinct and drawn uniformly from the non-terminal nodes.
//! 2. `cycles` random simple cycles over `[3, min(nodes, 8)]` distinct nodes.
//! 3. Every remaining ordered pair `(i, j)`, `i != j`, scanned row-major,
//!    becomes an arc with probability `er_prob`.
//!
//! A pair already present is never added twice; the first arc drawn for it
//! wins. Capacities are uniform on `[lo, hi)`, loss factors uniform on
//! `(lo, hi]`. The source is node 1 and the sink node `n`.
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64`, consumed only
//! through the three primitives on [`Draw`] so output is identical across
//! platforms and crate versions.

use std::collections::HashSet;
use std::io::{self, Write};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::GenError;
use crate::graph::{Graph, Instance, NodeId};

const MAX_PATH_NODES: usize = 20;
const CYCLE_NODES: (usize, usize) = (3, 8);

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub nodes: usize,
    pub paths: usize,
    pub cycles: usize,
    pub er_prob: f64,
    pub seed: u64,
    pub capacity_range: (f64, f64),
    pub loss_range: (f64, f64),
}

impl GenConfig {
    pub fn new(nodes: usize, paths: usize, cycles: usize, er_prob: f64, seed: u64) -> Self {
        GenConfig {
            nodes,
            paths,
            cycles,
            er_prob,
            seed,
            capacity_range: (1.0, 100.0),
            loss_range: (0.1, 1.0),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.nodes < 2 {
            return Err(GenError::TooFewNodes(self.nodes));
        }
        if self.nodes > u32::MAX as usize {
            return Err(GenError::Invalid(format!(
                "{} nodes is too many",
                self.nodes
            )));
        }
        if self.paths == 0 {
            return Err(GenError::NoPaths);
        }
        if !(0.0..=1.0).contains(&self.er_prob) {
            return Err(GenError::Invalid(format!(
                "er_prob {} outside [0, 1]",
                self.er_prob
            )));
        }
        let (lo, hi) = self.capacity_range;
        if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
            return Err(GenError::Invalid(format!("capacity range [{lo}, {hi}]")));
        }
        let (lo, hi) = self.loss_range;
        if !(lo >= 0.0 && lo < hi && hi <= 1.0) {
            return Err(GenError::Invalid(format!("loss range ({lo}, {hi}]")));
        }
        Ok(())
    }
}

/// The only ways generator code touches the random stream.
pub struct Draw {
    rng: ChaCha8Rng,
}

impl Draw {
    pub fn new(seed: u64) -> Self {
        Draw {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, bound)` by rejection.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let x = self.rng.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }

    /// True with probability `threshold / 2^64`.
    pub fn below_threshold(&mut self, threshold: u64) -> bool {
        self.rng.next_u64() < threshold
    }
}

fn bernoulli_threshold(p: f64) -> Option<u64> {
    if p <= 0.0 {
        Some(0)
    } else if p >= 1.0 {
        None
    } else {
        Some((p * 18_446_744_073_709_551_616.0) as u64)
    }
}

struct Emitter<'c> {
    cfg: &'c GenConfig,
    draw: Draw,
}

impl Emitter<'_> {
    fn attributes(&mut self) -> (f64, f64) {
        let (clo, chi) = self.cfg.capacity_range;
        let (llo, lhi) = self.cfg.loss_range;
        let capacity = clo + (chi - clo) * self.draw.unit();
        let loss = lhi - (lhi - llo) * self.draw.unit();
        (capacity, loss)
    }

    /// Distinct nodes drawn from `[lo, hi)`, not already in `taken`.
    fn distinct(&mut self, lo: usize, hi: usize, count: usize, taken: &mut Vec<u32>) {
        let span = (hi - lo) as u64;
        while count > 0 && taken.len() < count {
            let v = (lo as u64 + self.draw.below(span)) as u32;
            if !taken.contains(&v) {
                taken.push(v);
            }
        }
    }

    /// Runs all three phases, calling `emit(tail, head, capacity, loss)` with
    /// 0-based nodes in arc order.
    fn run(mut self, mut emit: impl FnMut(u32, u32, f64, f64)) {
        let n = self.cfg.nodes;
        let (s, t) = (0u32, (n - 1) as u32);
        let mut present: HashSet<(u32, u32)> = HashSet::new();
        let mut push =
            |this: &mut Self, tail: u32, head: u32, emit: &mut dyn FnMut(u32, u32, f64, f64)| {
                if present.insert((tail, head)) {
                    let (u, p) = this.attributes();
                    emit(tail, head, u, p);
                }
            };

        let max_len = n.min(MAX_PATH_NODES);
        let mut nodes = Vec::with_capacity(max_len);
        for _ in 0..self.cfg.paths {
            let len = 2 + self.draw.below((max_len - 1) as u64) as usize;
            nodes.clear();
            self.distinct(1, n - 1, len - 2, &mut nodes);
            let mut prev = s;
            for &v in nodes.iter().chain(std::iter::once(&t)) {
                push(&mut self, prev, v, &mut emit);
                prev = v;
            }
        }

        if n >= CYCLE_NODES.0 {
            let (lo, hi) = (CYCLE_NODES.0, CYCLE_NODES.1.min(n));
            for _ in 0..self.cfg.cycles {
                let len = lo + self.draw.below((hi - lo + 1) as u64) as usize;
                nodes.clear();
                self.distinct(0, n, len, &mut nodes);
                for k in 0..len {
                    push(&mut self, nodes[k], nodes[(k + 1) % len], &mut emit);
                }
            }
        }

        let threshold = bernoulli_threshold(self.cfg.er_prob);
        if threshold == Some(0) {
            return;
        }
        for i in 0..n as u32 {
            for j in 0..n as u32 {
                if i == j || present.contains(&(i, j)) {
                    continue;
                }
                let hit = match threshold {
                    Some(th) => self.draw.below_threshold(th),
                    None => true,
                };
                if hit {
                    let (u, p) = self.attributes();
                    emit(i, j, u, p);
                }
            }
        }
    }
}

/// Builds the instance in memory.
pub fn generate(cfg: &GenConfig) -> Result<Instance, GenError> {
    cfg.validate()?;
    let mut g = Graph::new(cfg.nodes);
    Emitter {
        cfg,
        draw: Draw::new(cfg.seed),
    }
    .run(|tail, head, u, p| {
        g.add_arc(
            NodeId::from_index(tail as usize),
            NodeId::from_index(head as usize),
            u,
            p,
        )
        .expect("generator emits valid arcs");
    });
    Ok(
        Instance::new(g, NodeId::from_index(0), NodeId::from_index(cfg.nodes - 1))
            .expect("source and sink differ"),
    )
}

/// Writes the instance file without holding the arcs in memory. Runs the
/// generator twice, once to count arcs for the header. Output is
/// byte-identical to serializing [`generate`]'s result.
pub fn write_generated<W: Write>(cfg: &GenConfig, out: &mut W) -> io::Result<(usize, usize)> {
    cfg.validate()
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e))?;
    let mut m = 0usize;
    Emitter {
        cfg,
        draw: Draw::new(cfg.seed),
    }
    .run(|_, _, _, _| m += 1);

    let n = cfg.nodes;
    writeln!(out, "p gmcp {n} {m} 1 {n}")?;
    let mut result = Ok(());
    Emitter {
        cfg,
        draw: Draw::new(cfg.seed),
    }
    .run(|tail, head, u, p| {
        if result.is_ok() {
            result = writeln!(out, "a {} {} {} {}", tail + 1, head + 1, u, p);
        }
    });
    result.map(|()| (n, m))
}

/// One row of the benchmark grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub number: usize,
    pub config: GenConfig,
    /// Suggested number of instances for this row.
    pub instances: usize,
}

impl Preset {
    pub fn label(&self) -> String {
        format!("preset{:02}", self.number)
    }
}

/// The fifteen grid rows. Seeds default to the row number.
pub fn grid_presets() -> Vec<Preset> {
    const ROWS: [(usize, usize, usize, f64, usize); 15] = [
        (1000, 500, 100, 0.5, 10000),
        (1000, 500, 100, 0.7, 10000),
        (1000, 500, 100, 0.9, 10000),
        (2000, 1000, 100, 0.1, 1000),
        (2000, 1000, 250, 0.15, 1000),
        (2000, 1000, 500, 0.6, 1000),
        (5000, 2500, 1000, 0.1, 100),
        (5000, 2500, 1000, 0.2, 100),
        (5000, 2500, 1000, 0.3, 100),
        (10000, 5000, 2500, 0.15, 5),
        (10000, 5000, 2500, 0.3, 5),
        (10000, 5000, 2500, 0.5, 5),
        (15000, 7500, 1000, 0.15, 3),
        (20000, 7500, 1000, 0.15, 2),
        (25000, 8000, 1500, 0.15, 1),
    ];
    ROWS.iter()
        .enumerate()
        .map(|(i, &(nodes, paths, cycles, er, instances))| Preset {
            number: i + 1,
            config: GenConfig::new(nodes, paths, cycles, er, (i + 1) as u64),
            instances,
        })
        .collect()
}

pub fn preset(number: usize) -> Option<Preset> {
    grid_presets().into_iter().find(|p| p.number == number)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::serialize_instance;

    #[test]
    fn degenerate_config_is_single_arc() {
        let inst = generate(&GenConfig::new(2, 1, 0, 0.0, 7)).unwrap();
        assert_eq!(inst.arc_count(), 1);
        let a = &inst.graph.arcs()[0];
        assert_eq!((a.tail, a.head), (inst.source, inst.sink));
        assert!((1.0..100.0).contains(&a.capacity));
        assert!(a.loss > 0.1 && a.loss <= 1.0);
    }

    #[test]
    fn same_seed_same_bytes() {
        let cfg = GenConfig::new(30, 5, 3, 0.1, 99);
        let a = serialize_instance(&generate(&cfg).unwrap());
        let b = serialize_instance(&generate(&cfg).unwrap());
        assert_eq!(a, b);
        let c = serialize_instance(&generate(&cfg.clone().with_seed(100)).unwrap());
        assert_ne!(a, c);
    }

    #[test]
    fn streaming_matches_in_memory() {
        for cfg in [
            GenConfig::new(2, 1, 0, 0.0, 7),
            GenConfig::new(12, 4, 2, 0.3, 1),
            GenConfig::new(25, 10, 5, 1.0, 5),
        ] {
            let mut buf = Vec::new();
            let (n, m) = write_generated(&cfg, &mut buf).unwrap();
            let inst = generate(&cfg).unwrap();
            assert_eq!((n, m), (inst.node_count(), inst.arc_count()));
            assert_eq!(String::from_utf8(buf).unwrap(), serialize_instance(&inst));
        }
    }

    #[test]
    fn no_duplicate_pairs_or_self_loops() {
        let inst = generate(&GenConfig::new(15, 20, 10, 0.5, 3)).unwrap();
        let mut seen = HashSet::new();
        for a in inst.graph.arcs() {
            assert_ne!(a.tail, a.head);
            assert!(seen.insert((a.tail, a.head)));
        }
    }

    #[test]
    fn complete_graph_at_probability_one() {
        let inst = generate(&GenConfig::new(6, 1, 0, 1.0, 3)).unwrap();
        assert_eq!(inst.arc_count(), 30);
    }

    #[test]
    fn rejects_bad_configs() {
        assert_eq!(
            generate(&GenConfig::new(1, 1, 0, 0.0, 1)),
            Err(GenError::TooFewNodes(1))
        );
        assert_eq!(
            generate(&GenConfig::new(3, 0, 0, 0.0, 1)),
            Err(GenError::NoPaths)
        );
        assert!(generate(&GenConfig::new(3, 1, 0, 1.5, 1)).is_err());
        let mut cfg = GenConfig::new(3, 1, 0, 0.5, 1);
        cfg.loss_range = (0.5, 1.5);
        assert!(generate(&cfg).is_err());
    }

    #[test]
    fn presets() {
        let all = grid_presets();
        assert_eq!(all.len(), 15);
        let p1 = &preset(1).unwrap().config;
        assert_eq!(
            (p1.nodes, p1.paths, p1.cycles, p1.er_prob),
            (1000, 500, 100, 0.5)
        );
        let p10 = &preset(10).unwrap().config;
        assert_eq!(
            (p10.nodes, p10.paths, p10.cycles, p10.er_prob),
            (10000, 5000, 2500, 0.15)
        );
        assert_eq!(preset(15).unwrap().instances, 1);
        assert!(preset(16).is_none());
        assert_eq!(preset(3).unwrap().label(), "preset03");
    }

    #[test]
    fn draw_primitives_stay_in_range() {
        let mut d = Draw::new(1);
        for _ in 0..1000 {
            let u = d.unit();
            assert!((0.0..1.0).contains(&u));
            assert!(d.below(7) < 7);
        }
        assert!(!d.below_threshold(0));
    }
}
