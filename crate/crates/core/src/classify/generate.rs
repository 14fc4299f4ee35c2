use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Archetype;
use crate::error::{Error, Result};
use crate::graph::{Dedup, Edge, EdgeKind, Sociogram};

struct Builder {
    rng: ChaCha8Rng,
    names: Vec<String>,
    pairs: Vec<(usize, usize)>,
}

impl Builder {
    fn new(kind: Archetype, size: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(kind as u64);
        Builder {
            rng,
            names: (0..size).map(|i| format!("v{i:05}")).collect(),
            pairs: Vec::new(),
        }
    }

    /// Adds `u - v` in a random direction.
    fn link(&mut self, u: usize, v: usize) {
        if self.rng.random_bool(0.5) {
            self.pairs.push((u, v));
        } else {
            self.pairs.push((v, u));
        }
    }

    /// Random graph on `members` with edge probability `p`, plus a path
    /// through them in shuffled order so the block is connected.
    fn dense_block(&mut self, members: &[usize], p: f64) {
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                if self.rng.random_bool(p) {
                    self.link(u, v);
                }
            }
        }
        let mut order = members.to_vec();
        order.shuffle(&mut self.rng);
        for w in order.windows(2) {
            self.link(w[0], w[1]);
        }
    }

    fn pick_two(&mut self, n: usize) -> (usize, usize) {
        let a = self.rng.random_range(0..n);
        let mut b = self.rng.random_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        (a, b)
    }

    fn finish(self) -> Sociogram {
        let names = self.names;
        let edges = self
            .pairs
            .into_iter()
            .map(|(s, t)| {
                Edge::new(&names[s], &names[t], EdgeKind::Mention)
                    .expect("generated ids are non-empty")
            })
            .collect();
        Sociogram::with_vertices(&names, edges, Dedup::CollapsePairs)
    }
}

/// Hub at vertex 0 with a spoke from every other vertex, plus up to 10%
/// extra edges among the leaves. `inward` picks the spoke direction.
fn hub(b: &mut Builder, n: usize, inward: bool) {
    for leaf in 1..n {
        b.pairs.push(if inward { (leaf, 0) } else { (0, leaf) });
    }
    let noise = b.rng.random_range(0..=(n - 1) / 10);
    for _ in 0..noise {
        let (u, v) = b.pick_two(n - 1);
        b.link(u + 1, v + 1);
    }
}

fn polarized(b: &mut Builder, n: usize) {
    let half = n / 2;
    let left: Vec<usize> = (0..half).collect();
    let right: Vec<usize> = (half..n).collect();
    let p = b.rng.random_range(0.3..0.5);
    b.dense_block(&left, p);
    b.dense_block(&right, p);
    let intra = b.pairs.len();
    let cross = ((intra as f64 * b.rng.random_range(0.005..0.02)) as usize).max(1);
    for _ in 0..cross {
        let u = left[b.rng.random_range(0..left.len())];
        let v = right[b.rng.random_range(0..right.len())];
        b.link(u, v);
    }
}

fn unified(b: &mut Builder, n: usize) {
    let members: Vec<usize> = (0..n).collect();
    let p = b.rng.random_range(0.4..0.7);
    b.dense_block(&members, p);
}

/// Roughly two thirds isolates, half of them tweeting to themselves, and
/// the rest in components of two or three vertices.
fn fragmented(b: &mut Builder, n: usize) {
    let isolates = ((n as f64 * b.rng.random_range(0.6..0.7)).ceil() as usize).min(n - 2);
    for v in 0..isolates {
        if b.rng.random_bool(0.5) {
            b.pairs.push((v, v));
        }
    }
    let mut v = isolates;
    while v < n {
        let left = n - v;
        let size = if left <= 3 {
            left
        } else {
            b.rng.random_range(2..=3)
        };
        if size == 1 {
            b.pairs.push((v, v));
        }
        for w in v + 1..v + size {
            b.link(w - 1, w);
        }
        v += size;
    }
}

/// Three to six blocks, each around a local hub, tied together in a ring
/// and by random cross-block edges, with about 15% isolated outliers.
fn multi_topic(b: &mut Builder, n: usize) {
    let outliers = ((n as f64 * 0.15).round() as usize).max(1);
    let core = n - outliers;
    let blocks = b.rng.random_range(3..=6).min(core / 2);
    let members: Vec<Vec<usize>> = (0..blocks)
        .map(|i| {
            let lo = outliers + core * i / blocks;
            let hi = outliers + core * (i + 1) / blocks;
            (lo..hi).collect()
        })
        .collect();
    for block in &members {
        let (centre, rest) = block
            .split_first()
            .expect("blocks have at least two members");
        for &leaf in rest {
            b.link(leaf, *centre);
        }
        for (i, &u) in rest.iter().enumerate() {
            for &v in &rest[i + 1..] {
                if b.rng.random_bool(0.15) {
                    b.link(u, v);
                }
            }
        }
    }
    let intra = b.pairs.len();
    for i in 0..blocks {
        let (x, y) = (&members[i], &members[(i + 1) % blocks]);
        let (u, v) = (
            x[b.rng.random_range(0..x.len())],
            y[b.rng.random_range(0..y.len())],
        );
        b.link(u, v);
    }
    let cross = (intra as f64 * 0.2) as usize;
    for _ in 0..cross {
        let (i, j) = b.pick_two(blocks);
        let (x, y) = (&members[i], &members[j]);
        let (u, v) = (
            x[b.rng.random_range(0..x.len())],
            y[b.rng.random_range(0..y.len())],
        );
        b.link(u, v);
    }
}

/// Seeded synthetic graph of the given archetype with `size` vertices,
/// named `v00000`, `v00001`, ... Deterministic per `(kind, size, seed)`.
pub fn generate_archetype(kind: Archetype, size: usize, seed: u64) -> Result<Sociogram> {
    if size < 5 {
        return Err(Error::Contract(format!(
            "archetype graphs need at least 5 vertices, got {size}"
        )));
    }
    let mut b = Builder::new(kind, size, seed);
    match kind {
        Archetype::InHub => hub(&mut b, size, true),
        Archetype::OutHub => hub(&mut b, size, false),
        Archetype::Polarized => polarized(&mut b, size),
        Archetype::Unified => unified(&mut b, size),
        Archetype::Fragmented => fragmented(&mut b, size),
        Archetype::MultiTopic => multi_topic(&mut b, size),
    }
    Ok(b.finish())
}
