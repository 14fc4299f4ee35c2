#![allow(dead_code)]

//! Graph builders and brute-force reference implementations shared by the
//! integration suites. Nothing here calls into the library's algorithms.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::PathBuf;

use nalgebra::{DMatrix, DVector};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sociogram::graph::{Dedup, Edge, EdgeKind, Sociogram};

pub fn name(i: usize) -> String {
    format!("n{i:03}")
}

/// Graph on exactly `n` vertices named so that index order matches `pairs`.
pub fn graph(n: usize, pairs: &[(usize, usize)]) -> Sociogram {
    let names: Vec<String> = (0..n).map(name).collect();
    let edges = pairs
        .iter()
        .map(|&(s, t)| Edge::new(&names[s], &names[t], EdgeKind::Tweet).unwrap())
        .collect();
    Sociogram::with_vertices(&names, edges, Dedup::CollapsePairs)
}

/// Directed G(n, p) without self-loops.
pub fn random_pairs(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for s in 0..n {
        for t in 0..n {
            if s != t && rng.random_bool(p) {
                pairs.push((s, t));
            }
        }
    }
    pairs
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Symmetric boolean adjacency of the undirected view.
pub fn sym_adjacency(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut a = vec![vec![false; n]; n];
    for &(s, t) in pairs {
        if s != t {
            a[s][t] = true;
            a[t][s] = true;
        }
    }
    a
}

pub fn directed_adjacency(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut a = vec![vec![false; n]; n];
    for &(s, t) in pairs {
        if s != t {
            a[s][t] = true;
        }
    }
    a
}

/// Mean over vertices of closed / all connected triples centred there.
pub fn triplet_clustering(a: &[Vec<bool>]) -> f64 {
    let n = a.len();
    let mut sum = 0.0;
    for v in 0..n {
        let (mut open, mut closed) = (0u64, 0u64);
        for i in 0..n {
            for j in i + 1..n {
                if i != v && j != v && a[v][i] && a[v][j] {
                    open += 1;
                    if a[i][j] {
                        closed += 1;
                    }
                }
            }
        }
        if open > 0 {
            sum += closed as f64 / open as f64;
        }
    }
    sum / n as f64
}

pub fn count_density(a: &[Vec<bool>]) -> f64 {
    let n = a.len();
    let edges = (0..n)
        .flat_map(|s| (0..n).map(move |t| (s, t)))
        .filter(|&(s, t)| s != t && a[s][t])
        .count();
    edges as f64 / (n * (n - 1)) as f64
}

/// All-pairs hop distances; `None` when unreachable.
pub fn floyd_warshall(a: &[Vec<bool>]) -> Vec<Vec<Option<u32>>> {
    let n = a.len();
    let mut d = vec![vec![None; n]; n];
    for i in 0..n {
        d[i][i] = Some(0);
        for j in 0..n {
            if a[i][j] && i != j {
                d[i][j] = Some(1);
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(x), Some(y)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|cur| x + y < cur) {
                        d[i][j] = Some(x + y);
                    }
                }
            }
        }
    }
    d
}

fn bfs(a: &[Vec<bool>], s: usize) -> Vec<Option<u32>> {
    let n = a.len();
    let mut d = vec![None; n];
    d[s] = Some(0);
    let mut q = VecDeque::from([s]);
    while let Some(v) = q.pop_front() {
        for w in 0..n {
            if a[v][w] && d[w].is_none() {
                d[w] = Some(d[v].unwrap() + 1);
                q.push_back(w);
            }
        }
    }
    d
}

/// Every shortest `s -> t` path, listed explicitly.
pub fn all_shortest_paths(a: &[Vec<bool>], s: usize, t: usize) -> Vec<Vec<usize>> {
    let from_s = bfs(a, s);
    let Some(len) = from_s[t] else {
        return Vec::new();
    };
    let mut paths = Vec::new();
    let mut path = vec![s];
    fn walk(
        a: &[Vec<bool>],
        from_s: &[Option<u32>],
        t: usize,
        len: u32,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let v = *path.last().unwrap();
        if v == t {
            out.push(path.clone());
            return;
        }
        let here = from_s[v].unwrap();
        if here >= len {
            return;
        }
        for w in 0..a.len() {
            if a[v][w] && from_s[w] == Some(here + 1) {
                path.push(w);
                walk(a, from_s, t, len, path, out);
                path.pop();
            }
        }
    }
    walk(a, &from_s, t, len, &mut path, &mut paths);
    paths
}

/// Betweenness by enumerating shortest paths. For a symmetric `a` each
/// unordered pair is counted once. Returned as exact fractions summed per
/// vertex, then converted.
pub fn enumerated_betweenness(a: &[Vec<bool>], symmetric: bool) -> Vec<f64> {
    let n = a.len();
    let mut score = vec![Fraction::ZERO; n];
    for s in 0..n {
        for t in 0..n {
            if s == t || (symmetric && t < s) {
                continue;
            }
            let paths = all_shortest_paths(a, s, t);
            if paths.is_empty() {
                continue;
            }
            let total = paths.len() as u128;
            let mut through = vec![0u128; n];
            for p in &paths {
                for &v in &p[1..p.len() - 1] {
                    through[v] += 1;
                }
            }
            for v in 0..n {
                if through[v] > 0 {
                    score[v] = score[v].add(Fraction::new(through[v], total));
                }
            }
        }
    }
    score.iter().map(|f| f.to_f64()).collect()
}

/// Non-negative rational kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fraction {
    num: u128,
    den: u128,
}

impl Fraction {
    pub const ZERO: Fraction = Fraction { num: 0, den: 1 };

    pub fn new(num: u128, den: u128) -> Self {
        let g = gcd(num, den).max(1);
        Fraction {
            num: num / g,
            den: den / g,
        }
    }

    pub fn add(self, o: Fraction) -> Fraction {
        let l = self.den / gcd(self.den, o.den) * o.den;
        Fraction::new(self.num * (l / self.den) + o.num * (l / o.den), l)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Q of a labeling, summed pair by pair from the definition
/// `1/2m * sum_ij (A_ij - k_i k_j / 2m) [c_i = c_j]`.
pub fn pairwise_modularity(a: &[Vec<bool>], labels: &[usize]) -> f64 {
    let n = a.len();
    let k: Vec<f64> = a
        .iter()
        .map(|row| row.iter().filter(|&&x| x).count() as f64)
        .collect();
    let two_m: f64 = k.iter().sum();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                q += f64::from(u8::from(a[i][j])) - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

/// Every set partition of `0..n` as a restricted-growth label vector.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut labels = vec![0; n];
    fn rec(i: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == labels.len() {
            out.push(labels.clone());
            return;
        }
        for l in 0..=max + 1 {
            labels[i] = l;
            rec(i + 1, max.max(l), labels, out);
        }
    }
    if n > 0 {
        rec(1, 0, &mut labels, &mut out);
    }
    out
}

pub fn best_modularity(a: &[Vec<bool>]) -> f64 {
    set_partitions(a.len())
        .iter()
        .map(|l| pairwise_modularity(a, l))
        .fold(f64::NEG_INFINITY, f64::max)
}

pub fn is_connected(a: &[Vec<bool>]) -> bool {
    bfs(a, 0).iter().all(Option::is_some)
}

pub fn blocks_as_sets(blocks: &[Vec<usize>]) -> BTreeSet<BTreeSet<usize>> {
    blocks.iter().map(|b| b.iter().copied().collect()).collect()
}

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn schema_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/report.schema.json")
}

/// `Q * (2m)^2` of a labeling as an exact integer.
pub fn scaled_modularity(a: &[Vec<bool>], labels: &[usize]) -> i128 {
    let n = a.len();
    let k: Vec<i128> = a
        .iter()
        .map(|row| row.iter().filter(|&&x| x).count() as i128)
        .collect();
    let two_m: i128 = k.iter().sum();
    let mut q = 0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                q += two_m * i128::from(a[i][j]) - k[i] * k[j];
            }
        }
    }
    q
}

/// Greedy agglomeration that rescores the whole partition for every
/// candidate merge of two linked blocks. Blocks are named by their smallest
/// member; the best gain wins, ties go to the smallest pair of names, and
/// merging stops once no merge raises Q.
pub fn naive_greedy_blocks(a: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = a.len();
    let mut labels: Vec<usize> = (0..n).collect();
    loop {
        let current = scaled_modularity(a, &labels);
        let mut best: Option<(i128, usize, usize)> = None;
        let names: BTreeSet<usize> = labels.iter().copied().collect();
        for &x in &names {
            for &y in names.range(x + 1..) {
                let linked =
                    (0..n).any(|u| labels[u] == x && (0..n).any(|v| labels[v] == y && a[u][v]));
                if !linked {
                    continue;
                }
                let trial: Vec<usize> =
                    labels.iter().map(|&l| if l == y { x } else { l }).collect();
                let gain = scaled_modularity(a, &trial) - current;
                if best.is_none_or(|(g, _, _)| gain > g) {
                    best = Some((gain, x, y));
                }
            }
        }
        match best {
            Some((gain, x, y)) if gain > 0 => {
                for l in &mut labels {
                    if *l == y {
                        *l = x;
                    }
                }
            }
            _ => break,
        }
    }
    let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, &l) in labels.iter().enumerate() {
        blocks.entry(l).or_default().push(v);
    }
    blocks.into_values().collect()
}

/// Stationary vector of the Google matrix by a direct linear solve, with
/// dangling columns spread uniformly.
pub fn dense_pagerank(n: usize, pairs: &[(usize, usize)], d: f64) -> Vec<f64> {
    let a = directed_adjacency(n, pairs);
    let mut m = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let out = a[j].iter().filter(|&&x| x).count();
        for i in 0..n {
            let walk = if out == 0 {
                1.0 / n as f64
            } else {
                f64::from(u8::from(a[j][i])) / out as f64
            };
            m[(i, j)] = d * walk + (1.0 - d) / n as f64;
        }
    }
    let mut sys = DMatrix::<f64>::identity(n, n) - m;
    let mut rhs = DVector::<f64>::zeros(n);
    for j in 0..n {
        sys[(n - 1, j)] = 1.0;
    }
    rhs[n - 1] = 1.0;
    let x = sys
        .lu()
        .solve(&rhs)
        .expect("Google matrix system is nonsingular");
    x.iter().copied().collect()
}
