mod common;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use sociogram::centrality::{
    betweenness, eigenvector_centrality, pagerank, Directedness, EigenParams, PageRankParams,
};
use sociogram::classify::{
    classify_archetype, features, generate_archetype, Archetype, ClassifierConfig, FeatureVector,
};
use sociogram::community::{cnm_partition, modularity};
use sociogram::graph::{write_edge_csv, Dedup, DegreeMode, Edge, EdgeKind, Sociogram};
use sociogram::layout::{fr_layout, fr_layout_from, initial_positions, LayoutParams};
use sociogram::metrics::{
    asymmetry_strength, degree_distribution, density, geodesic_stats, global_clustering,
    graph_stats,
};
use sociogram::statfit::{fit, FitModel};
use sociogram::text::{
    risk_factor_match, sentiment_ratios, term_stats, tokenize, RiskFactorConfig, TokenCorpus,
};
use sociogram::{build_graph, parse_edge_csv};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 128,
        ..ProptestConfig::default()
    }
}

/// Edge lists over up to `max_n` vertices, self-loops and repeats included.
fn edge_list(max_n: usize, max_e: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1..=max_n).prop_flat_map(move |n| (Just(n), prop::collection::vec((0..n, 0..n), 0..=max_e)))
}

fn simple_edge_list(
    max_n: usize,
    max_e: usize,
) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    edge_list(max_n, max_e).prop_map(|(n, e)| (n, e.into_iter().filter(|(s, t)| s != t).collect()))
}

fn named(names: &[String], pairs: &[(usize, usize)], dedup: Dedup) -> Sociogram {
    let edges = pairs
        .iter()
        .map(|&(s, t)| Edge::new(&names[s], &names[t], EdgeKind::Tweet).unwrap())
        .collect();
    Sociogram::with_vertices(names, edges, dedup)
}

fn default_names(n: usize) -> Vec<String> {
    (0..n).map(common::name).collect()
}

/// The same graph with vertex `i` renamed to the `perm[i]`-th name.
fn relabeled(n: usize, pairs: &[(usize, usize)], perm: &[usize]) -> Sociogram {
    let names: Vec<String> = (0..n).map(|i| format!("r{:03}", perm[i])).collect();
    named(&names, pairs, Dedup::CollapsePairs)
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn with_perm(
    max_n: usize,
    max_e: usize,
) -> impl Strategy<Value = (usize, Vec<(usize, usize)>, Vec<usize>)> {
    simple_edge_list(max_n, max_e).prop_flat_map(|(n, e)| (Just(n), Just(e), permutation(n)))
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn csv_round_trip_keeps_vertices_and_unique_edges((n, pairs) in edge_list(12, 40)) {
        let g = named(&default_names(n), &pairs, Dedup::KeepAll);
        let g = Sociogram::from_edges(g.edges().to_vec(), Dedup::KeepAll);
        let mut buf = Vec::new();
        write_edge_csv(&g, &mut buf).unwrap();
        let back = build_graph(&parse_edge_csv(&buf[..]).unwrap(), Dedup::KeepAll);
        prop_assert_eq!(back.vertices(), g.vertices());
        let unique = |g: &Sociogram| g.retained_ends().collect::<BTreeSet<_>>();
        prop_assert_eq!(unique(&back), unique(&g));
        prop_assert_eq!(back.total_edge_count(), g.total_edge_count());
    }

    #[test]
    fn edge_counts_add_up((n, pairs) in edge_list(15, 60)) {
        for dedup in [Dedup::KeepAll, Dedup::CollapsePairs] {
            let g = named(&default_names(n), &pairs, dedup);
            prop_assert_eq!(g.unique_edge_count() + g.duplicate_count(), g.total_edge_count());
            prop_assert!(g.unique_edge_count() as u64 <= (n * (n - 1) + n) as u64);
            let ins: usize = (0..n).map(|v| g.in_degree(v)).sum();
            let outs: usize = (0..n).map(|v| g.out_degree(v)).sum();
            prop_assert_eq!(ins, outs);
            prop_assert_eq!(ins, g.simple_edge_count());
            let u = g.undirected_view();
            prop_assert!(u.edge_count() <= g.unique_edge_count());
            prop_assert_eq!(u.undirected_view().edges().collect::<Vec<_>>(), u.edges().collect::<Vec<_>>());
        }
    }

    #[test]
    fn components_partition_the_vertices((n, pairs) in edge_list(20, 30)) {
        let g = named(&default_names(n), &pairs, Dedup::CollapsePairs);
        let comps = g.connected_components();
        let mut seen = vec![0; n];
        for c in &comps {
            prop_assert!(!c.is_empty());
            for &v in c {
                seen[v] += 1;
            }
        }
        prop_assert!(seen.iter().all(|&k| k == 1));
        // no edge crosses components
        let comp_of: BTreeMap<usize, usize> =
            comps.iter().enumerate().flat_map(|(i, c)| c.iter().map(move |&v| (v, i))).collect();
        for (s, t) in g.simple_edges() {
            prop_assert_eq!(comp_of[&s], comp_of[&t]);
        }
    }

    #[test]
    fn graph_stats_stay_in_range((n, pairs) in edge_list(15, 60)) {
        let g = named(&default_names(n), &pairs, Dedup::CollapsePairs);
        let s = graph_stats(&g).unwrap();
        if let Some(&c) = s.c_global.value() {
            prop_assert!((0.0..=1.0).contains(&c));
        }
        if let Some(&rho) = s.rho.value() {
            prop_assert!((0.0..=1.0).contains(&rho));
        }
        if let (Some(&d), Some(&diam)) = (s.d_avg.value(), s.diameter.value()) {
            prop_assert!(d <= f64::from(diam));
        }
        if let (Some(&i), Some(&o), Some(&r)) = (s.n_in.value(), s.n_out.value(), s.r_vertex.value()) {
            prop_assert!(close(r, (i as f64 / o as f64).log10(), 1e-15));
        }
    }

    #[test]
    fn structure_metrics_ignore_labels((n, pairs, perm) in with_perm(14, 50)) {
        let a = named(&default_names(n), &pairs, Dedup::CollapsePairs);
        let b = relabeled(n, &pairs, &perm);
        prop_assert_eq!(density(&a).ok(), density(&b).ok());
        let (ga, gb) = (geodesic_stats(&a).ok(), geodesic_stats(&b).ok());
        prop_assert_eq!(ga.map(|g| (g.diameter, g.reachable_pairs)), gb.map(|g| (g.diameter, g.reachable_pairs)));
        if let (Some(x), Some(y)) = (ga, gb) {
            prop_assert!(close(x.d_avg, y.d_avg, 1e-12));
        }
        let (ca, cb) = (global_clustering(&a).unwrap(), global_clustering(&b).unwrap());
        prop_assert!(close(ca, cb, 1e-12));
        for mode in [DegreeMode::In, DegreeMode::Out, DegreeMode::Total] {
            prop_assert_eq!(degree_distribution(&a, mode).bins, degree_distribution(&b, mode).bins);
        }
    }

    #[test]
    fn new_edge_raises_density_and_never_lengthens_paths(
        (n, pairs) in simple_edge_list(12, 60),
        s in 0usize..12,
        t in 0usize..12,
    ) {
        let (s, t) = (s % n, t % n);
        let names = default_names(n);
        let before = named(&names, &pairs, Dedup::CollapsePairs);
        prop_assume!(n >= 2 && s != t && !before.has_edge(s, t));
        let mut more = pairs.clone();
        more.push((s, t));
        let after = named(&names, &more, Dedup::CollapsePairs);
        prop_assert!(density(&after).unwrap() > density(&before).unwrap());
        // with every pair already reachable, no distance may grow
        if before.connected_components().len() == 1 {
            let (g0, g1) = (geodesic_stats(&before).unwrap(), geodesic_stats(&after).unwrap());
            prop_assert!(g1.diameter <= g0.diameter);
            prop_assert!(g1.d_avg <= g0.d_avg);
            prop_assert_eq!(g1.reachable_pairs, g0.reachable_pairs);
        }
    }

    #[test]
    fn asymmetry_is_antisymmetric(a in 1u64..1_000_000, b in 1u64..1_000_000) {
        let (x, y) = (asymmetry_strength(a, b), asymmetry_strength(b, a));
        prop_assert_eq!(*x.value().unwrap(), -*y.value().unwrap());
    }

    #[test]
    fn histograms_count_every_vertex((n, pairs) in edge_list(25, 80)) {
        let g = named(&default_names(n), &pairs, Dedup::KeepAll);
        for mode in [DegreeMode::In, DegreeMode::Out, DegreeMode::Total] {
            prop_assert_eq!(degree_distribution(&g, mode).total(), n);
        }
    }

    #[test]
    fn pagerank_sums_to_one_and_follows_relabeling((n, pairs, perm) in with_perm(20, 70)) {
        let a = named(&default_names(n), &pairs, Dedup::CollapsePairs);
        let b = relabeled(n, &pairs, &perm);
        let p = PageRankParams::default();
        let (ra, rb) = (pagerank(&a, &p).unwrap(), pagerank(&b, &p).unwrap());
        prop_assert!((ra.scores.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!(ra.scores.iter().all(|&x| x > 0.0 && x < 1.0 || n == 1));
        for (i, &pi) in perm.iter().enumerate() {
            let j = b.index_of(&format!("r{pi:03}")).unwrap();
            prop_assert!((ra.scores[i] - rb.scores[j]).abs() < 1e-9);
        }
        prop_assert_eq!(&pagerank(&a, &p).unwrap(), &ra);
    }

    #[test]
    fn pagerank_is_uniform_on_transitive_graphs(n in 2usize..40, step in 1usize..5, complete in any::<bool>()) {
        let pairs: Vec<(usize, usize)> = if complete {
            (0..n).flat_map(|s| (0..n).filter(move |&t| t != s).map(move |t| (s, t))).collect()
        } else {
            (0..n).map(|v| (v, (v + step) % n)).filter(|(s, t)| s != t).collect()
        };
        let g = named(&default_names(n), &pairs, Dedup::CollapsePairs);
        let r = pagerank(&g, &PageRankParams::default()).unwrap();
        for x in r.scores {
            prop_assert!((x - 1.0 / n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn eigenvector_is_an_eigenvector((n, pairs) in simple_edge_list(18, 60)) {
        let g = named(&default_names(n), &pairs, Dedup::CollapsePairs);
        prop_assume!(g.undirected_view().edge_count() > 0);
        let r = eigenvector_centrality(&g, &EigenParams::default()).unwrap();
        prop_assert!(r.converged);
        let x = &r.scores;
        prop_assert!((x.iter().copied().fold(0.0, f64::max) - 1.0).abs() < 1e-15);
        prop_assert!(x.iter().all(|&v| v >= 0.0));
        let u = g.undirected_view();
        let ax: Vec<f64> = (0..n).map(|v| u.neighbors(v).iter().map(|&w| x[w]).sum()).collect();
        let top = (0..n).max_by(|&i, &j| x[i].total_cmp(&x[j])).unwrap();
        let lambda = ax[top] / x[top];
        for v in 0..n {
            prop_assert!((ax[v] - lambda * x[v]).abs() <= 1e-8 * lambda.max(1.0), "v={} {} vs {}", v, ax[v], lambda * x[v]);
        }
        prop_assert_eq!(&eigenvector_centrality(&g, &EigenParams::default()).unwrap(), &r);
    }

    #[test]
    fn low_degree_vertices_carry_no_betweenness((n, pairs) in simple_edge_list(20, 40)) {
        let g = named(&default_names(n), &pairs, Dedup::CollapsePairs);
        let b = betweenness(&g, Directedness::Undirected);
        prop_assert_eq!(&b, &betweenness(&g, Directedness::Undirected));
        for (v, &score) in b.iter().enumerate() {
            prop_assert!(score >= 0.0);
            if g.undirected_view().degree(v) <= 1 {
                prop_assert_eq!(score, 0.0);
            }
        }
    }

    #[test]
    fn cnm_blocks_partition_and_report_their_own_q((n, pairs) in simple_edge_list(30, 80)) {
        let g = named(&default_names(n), &pairs, Dedup::CollapsePairs);
        let grouping = cnm_partition(&g);
        let mut seen = vec![false; n];
        for b in &grouping.blocks {
            for &v in b {
                prop_assert!(!seen[v]);
                seen[v] = true;
            }
        }
        prop_assert!(seen.iter().all(|&s| s));
        for m in &grouping.merges {
            prop_assert!(m.delta_q > 0.0);
        }
        match grouping.modularity.value() {
            Some(&q) => {
                prop_assert!((q - modularity(&g, &grouping.blocks).unwrap()).abs() < 1e-12);
                prop_assert!((-0.5..=1.0).contains(&q));
            }
            None => prop_assert_eq!(g.undirected_view().edge_count(), 0),
        }
        prop_assert_eq!(cnm_partition(&g), grouping);
    }

    #[test]
    fn every_feature_vector_gets_one_label(
        n in 1usize..500,
        e in 0usize..2000,
        fr in prop::array::uniform9(0.0f64..=1.0),
        comps in 1usize..50,
    ) {
        let f = FeatureVector {
            n_vertices: n,
            n_edges: e,
            isolate_fraction: fr[0],
            largest_component_fraction: fr[1],
            hub_in_share: fr[2],
            hub_out_share: fr[3],
            bipartition_q: fr[4] - 0.5,
            cross_block_edge_fraction: fr[5],
            component_count: comps,
            self_loop_fraction: fr[6],
            largest_component_density: fr[7],
        };
        let label = classify_archetype(&f, &ClassifierConfig::default());
        prop_assert!((0.0..=1.0).contains(&label.confidence));
        prop_assert!(Archetype::ALL.contains(&label.kind));
    }

    #[test]
    fn features_are_label_free((n, pairs, perm) in with_perm(16, 50)) {
        let a = features(&named(&default_names(n), &pairs, Dedup::CollapsePairs));
        let b = features(&relabeled(n, &pairs, &perm));
        prop_assert_eq!(a.n_edges, b.n_edges);
        prop_assert_eq!(a.component_count, b.component_count);
        for (x, y) in [
            (a.isolate_fraction, b.isolate_fraction),
            (a.largest_component_fraction, b.largest_component_fraction),
            (a.hub_in_share, b.hub_in_share),
            (a.hub_out_share, b.hub_out_share),
            (a.self_loop_fraction, b.self_loop_fraction),
            (a.largest_component_density, b.largest_component_density),
        ] {
            prop_assert_eq!(x, y);
        }
        for x in [a.isolate_fraction, a.largest_component_fraction, a.hub_in_share, a.hub_out_share,
                  a.cross_block_edge_fraction, a.self_loop_fraction, a.largest_component_density] {
            prop_assert!((0.0..=1.0).contains(&x));
        }
    }

    #[test]
    fn fits_scale_with_y(
        model in prop::sample::select(vec![FitModel::PowerLaw, FitModel::StretchedPowerLaw, FitModel::Exponential]),
        ys in prop::collection::vec(0.01f64..100.0, 3..30),
        c in 0.01f64..100.0,
    ) {
        let pts: Vec<(f64, f64)> = ys.iter().enumerate().map(|(i, &y)| (i as f64 + 1.0, y)).collect();
        let scaled: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (x, c * y)).collect();
        let (f, g) = (fit(model, &pts).unwrap(), fit(model, &scaled).unwrap());
        prop_assert!(close(g.scale, c * f.scale, 1e-9));
        prop_assert!((g.exponent - f.exponent).abs() < 1e-9 * f.exponent.abs().max(1e-3));
        prop_assert!(f.r_squared <= 1.0);
        prop_assert!(f.n_points >= 3);
    }

    #[test]
    fn exact_models_fit_perfectly(
        model in prop::sample::select(vec![FitModel::PowerLaw, FitModel::StretchedPowerLaw, FitModel::Exponential]),
        scale in 0.1f64..100.0,
        exponent in -0.05f64..0.05,
    ) {
        let pts: Vec<(f64, f64)> = (1..=40).map(|i| {
            let x = f64::from(i);
            let y = match model {
                FitModel::PowerLaw => scale * x.powf(-exponent),
                FitModel::StretchedPowerLaw => scale * x.powf(-exponent * x),
                FitModel::Exponential => scale * (exponent * x).exp(),
            };
            (x, y)
        }).collect();
        let f = fit(model, &pts).unwrap();
        prop_assert!(close(f.scale, scale, 1e-9));
        prop_assert!((f.exponent - exponent).abs() < 1e-9);
        prop_assert!(f.r_squared > 1.0 - 1e-9);
    }

    #[test]
    fn salience_sums_to_one(texts in prop::collection::vec("[a-e ]{0,30}", 1..20)) {
        let corpus = TokenCorpus::from_texts(&texts);
        let total: usize = corpus.documents.iter().map(Vec::len).sum();
        prop_assert_eq!(corpus.total_tokens, total);
        prop_assert_eq!(corpus.vocabulary.values().sum::<usize>(), total);
        match term_stats(&corpus) {
            Ok(stats) => prop_assert!((stats.values().map(|s| s.salience).sum::<f64>() - 1.0).abs() < 1e-12),
            Err(_) => prop_assert_eq!(total, 0),
        }
    }

    #[test]
    fn sentiment_ratio_is_antisymmetric(a in 1e-6f64..1.0, b in 1e-6f64..1.0) {
        let (r, _) = sentiment_ratios(a, b, 0.0, 0.0, 0.0, 0.0);
        let (s, _) = sentiment_ratios(b, a, 0.0, 0.0, 0.0, 0.0);
        prop_assert_eq!(*r.value().unwrap(), -*s.value().unwrap());
    }

    #[test]
    fn layout_is_finite_and_seeded(
        (n, pairs) in edge_list(25, 60),
        seed in any::<u64>(),
        iterations in 0usize..15,
        repulsion in 0.1f64..10.0,
    ) {
        let g = named(&default_names(n), &pairs, Dedup::CollapsePairs);
        let params = LayoutParams { repulsion, iterations, seed, ..LayoutParams::default() };
        let r = fr_layout(&g, &params).unwrap();
        prop_assert_eq!(r.positions.len(), n);
        for &(x, y) in &r.positions {
            prop_assert!(x.is_finite() && y.is_finite());
            prop_assert!((0.0..=params.width).contains(&x) && (0.0..=params.height).contains(&y));
        }
        prop_assert_eq!(&fr_layout(&g, &params).unwrap(), &r);
        if iterations == 0 && n > 1 {
            prop_assert_eq!(r.positions, initial_positions(n, &params));
        }
    }

    #[test]
    fn layout_follows_relabeling((n, pairs, perm) in with_perm(15, 40), seed in any::<u64>()) {
        let params = LayoutParams { seed, ..LayoutParams::default() };
        let a = named(&default_names(n), &pairs, Dedup::CollapsePairs);
        let b = relabeled(n, &pairs, &perm);
        let start = initial_positions(n, &params);
        // b's vertex j is a's vertex i with perm[i] == j once names sort
        let mut b_start = vec![(0.0, 0.0); n];
        for (i, &pi) in perm.iter().enumerate() {
            b_start[pi] = start[i];
        }
        let ra = fr_layout_from(a.undirected_view(), start, &params).unwrap();
        let rb = fr_layout_from(b.undirected_view(), b_start, &params).unwrap();
        for (i, &pi) in perm.iter().enumerate() {
            let (p, q) = (ra.positions[i], rb.positions[pi]);
            prop_assert!((p.0 - q.0).abs() < 1e-6 && (p.1 - q.1).abs() < 1e-6, "{:?} vs {:?}", p, q);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn classification_survives_isomorphism(
        kind in prop::sample::select(Archetype::ALL.to_vec()),
        size in 20usize..80,
        seed in 0u64..1000,
        shuffle_seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let g = generate_archetype(kind, size, seed).unwrap();
        let n = g.vertex_count();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(shuffle_seed));
        let names: Vec<String> = (0..n).map(|i| format!("z{:05}", perm[i])).collect();
        let edges = g
            .edges()
            .iter()
            .map(|e| {
                let (s, t) = (g.index_of(&e.source).unwrap(), g.index_of(&e.target).unwrap());
                Edge::new(&names[s], &names[t], e.kind).unwrap()
            })
            .collect();
        let h = Sociogram::with_vertices(&names, edges, g.dedup());
        let c = ClassifierConfig::default();
        prop_assert_eq!(classify_archetype(&features(&g), &c).kind, classify_archetype(&features(&h), &c).kind);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    /// Adding documents one at a time never lowers a category's tweet count.
    #[test]
    fn risk_matching_is_monotone(picks in prop::collection::vec((0usize..12, 0usize..6), 60)) {
        let config = RiskFactorConfig::builtin();
        let fillers = ["i am fine", "what a day", "so tired of school", "love this song", "call me later", "no words"];
        let mut docs: Vec<Vec<String>> = Vec::new();
        let mut last = vec![0; 12];
        for (cat, filler) in picks {
            let phrase = config.categories[cat].phrases[0].join(" ");
            let text = if filler % 2 == 0 { format!("{} {phrase}", fillers[filler]) } else { fillers[filler].to_string() };
            docs.push(tokenize(&text));
            let report = risk_factor_match(&docs, &config).unwrap();
            let counts: Vec<usize> = report.categories.iter().map(|c| c.matched_tweets).collect();
            for (now, before) in counts.iter().zip(&last) {
                prop_assert!(now >= before);
            }
            prop_assert!(counts.iter().all(|&c| c <= docs.len()));
            last = counts;
        }
    }
}
