//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line (run with --nocapture to see them alongside the assert).

use rand::Rng;

use dnlkit::bits::VSet;
use dnlkit::chromatic::{
    self, chromatic_number, independence_number, SimpleGraph,
};
use dnlkit::cluster;
use dnlkit::core::{frac, Digraph, SetSystem, TriEdge, TriHypergraph, TriTournament};
use dnlkit::gen;
use dnlkit::lp;
use dnlkit::metric;
use dnlkit::nets::{self, NetRequest};
use dnlkit::rng::derive_rng;
use dnlkit::tournament::{self, TransitiveFamily};
use dnlkit::vc;

/// Frozen calibration: maximum majority dominating-set size observed at
/// eps = 1/10 across the calibration profiles, with slack.
const MAJORITY_BUDGET: usize = 24;
/// Frozen calibration: size ratio against the exact domination number on
/// small tournaments.
const RECURSION_RATIO_BOUND: f64 = 8.0;

fn report(idx: usize, name: &str, pass: bool, detail: &str) {
    println!(
        "acceptance {idx:02} {name}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {idx} ({name}) failed: {detail}");
}

#[test]
fn criterion_01_fractional_domination_at_most_two() {
    let mut worst = lp::rat(0, 1);
    let mut ok = true;
    for i in 0..500u64 {
        let n = 3 + (i as usize % 10); // 3..=12
        let t = gen::random_tournament(n, 0xF15E ^ i);
        let d = Digraph::new(n, &t.arcs()).unwrap();
        let fd = lp::fractional_domination(&d);
        if fd.value > worst {
            worst = fd.value.clone();
        }
        ok &= fd.value <= lp::rat(2, 1);
    }
    report(1, "fractional-domination", ok, &format!("max value {}", lp::rat_str(&worst)));
}

#[test]
fn criterion_02_disjointness_vc_bound() {
    let eps_list = [frac(1, 2), frac(1, 3), frac(1, 4)];
    let mut worst_margin = i64::MIN;
    let mut ok = true;
    for i in 0..200u64 {
        let eps = eps_list[i as usize % 3];
        let cap = (eps.denom() / eps.numer()) as i64; // floor(1/eps)
        let n = 6 + (i as usize % 9); // 6..=14
        let m = 8 + (i as usize % 13); // 8..=20
        let f = gen::random_set_system(n, m, 0.25 + 0.02 * (i % 5) as f64, 0xD155 ^ i);
        let h = f.disjointness_trigraph(eps).to_hypergraph();
        let d = vc::vc_dimension(&h, n).dimension;
        worst_margin = worst_margin.max(d - cap);
        ok &= d <= cap;
    }
    report(
        2,
        "disjointness-vc",
        ok,
        &format!("worst dimension minus floor(1/eps): {worst_margin}"),
    );
}

fn random_tri_hypergraph(n: usize, edges: usize, seed: u64) -> TriHypergraph {
    let mut rng = derive_rng(seed, "acceptance-trihyper", 0);
    let es = (0..edges)
        .map(|_| {
            let mut b = VSet::empty(n);
            let mut r = VSet::empty(n);
            let mut w = VSet::empty(n);
            for v in 0..n {
                match rng.gen_range(0..10) {
                    0..=2 => b.insert(v),
                    3..=4 => r.insert(v),
                    _ => w.insert(v),
                }
            }
            TriEdge::new(b, r, w).unwrap()
        })
        .collect();
    TriHypergraph::new(n, es)
}

#[test]
fn criterion_03_word_sauer_shelah() {
    let mut ok = true;
    let mut first_violation = String::new();
    for i in 0..500u64 {
        let n = 4 + (i as usize % 7); // 4..=10
        let h = random_tri_hypergraph(n, 3 + (i as usize % 10), 0x5A0E ^ i);
        let rep = vc::sauer_shelah_check(&h, 6);
        if !rep.pass && first_violation.is_empty() {
            first_violation = format!("{:?}", rep.violation);
        }
        ok &= rep.pass;
    }
    report(
        3,
        "word-sauer-shelah",
        ok,
        if first_violation.is_empty() { "0 violations" } else { &first_violation },
    );
}

#[test]
fn criterion_04_delta_net_success_rate() {
    // calibration instance: refined differences of a seeded random system
    let f = gen::random_set_system(24, 12, 0.35, 0xCA11);
    let h = cluster::refined_differences_sets(&f, frac(1, 3));
    let d = vc::vc_dimension(&h, 24).dimension.max(1) as usize;
    let runs = 1000usize;
    let mut ok = true;
    let mut detail = String::new();
    for p in [0.05, 0.2] {
        let mut failures = 0usize;
        for i in 0..runs {
            let req = NetRequest {
                delta: frac(1, 2),
                failure_prob: p,
                dimension: d,
                seed: 0x0E75 ^ (p.to_bits() ^ i as u64),
            };
            if !nets::sample_delta_net(&h, &req).valid {
                failures += 1;
            }
        }
        let rate = failures as f64 / runs as f64;
        let bound = p + 3.0 * (p * (1.0 - p) / runs as f64).sqrt();
        detail.push_str(&format!("p={p}: rate {rate:.4} <= {bound:.4}; "));
        ok &= rate <= bound;
    }
    report(4, "delta-net-success", ok, detail.trim_end_matches("; "));
}

#[test]
fn criterion_05_named_instances() {
    let hag = gen::named_graph("haggkvist").unwrap();
    let brandt = gen::named_graph("brandt12").unwrap();
    let s22 = gen::schrijver_graph(2, 2).unwrap();
    let s32 = gen::schrijver_graph(3, 2).unwrap();
    let checks = [
        ("haggkvist 29 vertices", hag.ground_size() == 29),
        ("haggkvist 10-regular", hag.regular_degree() == Some(10)),
        ("haggkvist triangle-free", chromatic::is_triangle_free(&hag)),
        ("haggkvist chi=4", chromatic_number(&hag).unwrap() == 4),
        ("brandt alpha=4", independence_number(&brandt).unwrap() == 4),
        ("schrijver(2,2) chi=4", chromatic_number(&s22.graph).unwrap() == 4),
        ("schrijver(3,2) chi=4", chromatic_number(&s32.graph).unwrap() == 4),
    ];
    let failed: Vec<&str> = checks.iter().filter(|(_, p)| !p).map(|(n, _)| *n).collect();
    let detail = if failed.is_empty() { "7 checks".to_string() } else { failed.join(", ") };
    report(5, "named-instances", failed.is_empty(), &detail);
}

#[test]
fn criterion_06_dnl_triangle_free_coloring() {
    let mut proper = 0usize;
    let mut max_classes = 0usize;
    let runs = 50usize;
    for i in 0..runs {
        let n = 100 + (i % 7) * 50; // up to 400
        let noise = (i % 3) * 15;
        let inst = gen::dense_tf_graph(n, frac(1, 20), noise, 0xD41 ^ i as u64).unwrap();
        let c =
            chromatic::dnl_color_triangle_free(&inst.graph, frac(1, 20), 0xC01 ^ i as u64, false)
                .unwrap();
        if c.proper {
            proper += 1;
        }
        max_classes = max_classes.max(c.classes_count);
    }
    report(
        6,
        "dnl-coloring",
        proper == runs,
        &format!("{proper}/{runs} proper, max classes {max_classes}"),
    );
}

fn complete_multipartite(parts: usize, m: usize) -> SimpleGraph {
    let n = parts * m;
    let mut g = SimpleGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if u / m != v / m {
                g.add_edge(u, v);
            }
        }
    }
    g
}

fn andrasfai_blowup(k: usize, m: usize) -> SimpleGraph {
    let base = gen::andrasfai(k);
    let nb = base.ground_size();
    let mut g = SimpleGraph::new(nb * m);
    for (u, v) in base.edges() {
        for i in 0..m {
            for j in 0..m {
                g.add_edge(u * m + i, v * m + j);
            }
        }
    }
    g
}

#[test]
fn criterion_07_regular_clustering_coloring() {
    let mut cases: Vec<(String, bool)> = Vec::new();
    // triangle-free, regular, degree >= (1/4 + 1/20) n
    let tf: Vec<(String, SimpleGraph)> = vec![
        ("haggkvist".into(), gen::named_graph("haggkvist").unwrap()),
        ("and3-blowup-5".into(), andrasfai_blowup(3, 5)),
        ("and3-blowup-12".into(), andrasfai_blowup(3, 12)),
        ("and2-blowup-30".into(), andrasfai_blowup(2, 30)),
    ];
    for (name, g) in tf {
        let r = chromatic::cluster_color_regular_triangle_free(&g, frac(1, 20), 0x7F, false);
        cases.push((name, r.map(|c| c.proper).unwrap_or(false)));
    }
    // K_4-free, regular, degree >= (4/7 + 1/21) n
    for m in [8, 12, 16] {
        let g = complete_multipartite(3, m);
        let r = chromatic::cluster_color_regular_kt_free(&g, 4, frac(1, 21), 0x7F, None, false);
        cases.push((format!("3-partite-{m}"), r.map(|c| c.proper).unwrap_or(false)));
    }
    let failed: Vec<String> =
        cases.iter().filter(|(_, p)| !p).map(|(n, _)| n.clone()).collect();
    report(
        7,
        "regular-clustering-coloring",
        failed.is_empty(),
        &format!("{} cases", cases.len()),
    );
}

#[test]
fn criterion_08_homomorphism_quotient() {
    let runs = 25usize;
    let mut ok3 = 0usize;
    for i in 0..runs {
        let inst = gen::dense_tf_graph(80 + (i % 4) * 40, frac(1, 20), 0, 0x803 ^ i as u64).unwrap();
        if chromatic::homomorphism_quotient(&inst.graph, 3, frac(1, 20), 0x903 ^ i as u64, false)
            .is_ok()
        {
            ok3 += 1;
        }
    }
    let mut ok4 = 0usize;
    for i in 0..runs {
        let g = complete_multipartite(3, 8 + (i % 5) * 2);
        if chromatic::homomorphism_quotient(&g, 4, frac(1, 20), 0x904 ^ i as u64, false).is_ok() {
            ok4 += 1;
        }
    }
    report(
        8,
        "homomorphism-quotient",
        ok3 == runs && ok4 == runs,
        &format!("t=3: {ok3}/{runs}, t=4: {ok4}/{runs}"),
    );
}

#[test]
fn criterion_09_clustering_validators() {
    let f = gen::random_set_system(200, 30, 0.2, 0x9A);
    let (_, rep_sets) = cluster::set_system_clustering(&f, frac(1, 5), frac(1, 5), 0x9B).unwrap();
    // grouped cloud: points in a group differ in a few flipped bits, groups
    // are random vs random, so the clustering has real multi-vertex parts
    let dim = 128usize;
    let groups = 10usize;
    let per_group = 30usize;
    let mut rng = derive_rng(0x9C, "acceptance-hamming-groups", 0);
    let mut points = Vec::with_capacity(groups * per_group);
    for _ in 0..groups {
        let center = VSet::from_iter(dim, (0..dim).filter(|_| rng.gen_bool(0.5)));
        for _ in 0..per_group {
            let mut b = center.clone();
            for _ in 0..5 {
                let i = rng.gen_range(0..dim);
                if b.contains(i) {
                    b.remove(i);
                } else {
                    b.insert(i);
                }
            }
            points.push(b);
        }
    }
    let p = metric::PointCloud::hamming(dim, points);
    let (_, rep_ham) = cluster::hamming_clustering(&p, 0.25, 0.2, frac(1, 5), 0x9D).unwrap();
    report(
        9,
        "clustering-validators",
        rep_sets.violations.is_empty() && rep_ham.violations.is_empty(),
        &format!(
            "set-system {} violations / {} pairs, hamming {} violations / {} pairs",
            rep_sets.violations.len(),
            rep_sets.checked_pairs,
            rep_ham.violations.len(),
            rep_ham.checked_pairs
        ),
    );
}

#[test]
fn criterion_10_euclidean_pipeline() {
    let runs = 100usize;
    let mut embed_ok = 0usize;
    let mut cluster_ok = 0usize;
    for i in 0..runs {
        let count = 30 + (i % 31); // up to 60
        let dim = 10 + (i % 11); // up to 20
        let p = gen::random_euclidean_ball_cloud(count, dim, 0xE0C ^ i as u64);
        if metric::embed_euclidean_to_hamming(&p, 0.3, 0xE0D ^ i as u64).is_ok() {
            embed_ok += 1;
        }
        if let Ok((_, rep)) = cluster::euclidean_clustering(&p, 0.3, frac(1, 5), 0xE0E ^ i as u64) {
            if rep.clean() {
                cluster_ok += 1;
            }
        }
    }
    report(
        10,
        "euclidean-pipeline",
        embed_ok >= 95 && cluster_ok >= 90,
        &format!("embed clean {embed_ok}/100 (>=95), clustering clean {cluster_ok}/100 (>=90)"),
    );
}

#[test]
fn criterion_11_shattered_sphere() {
    let mut ok = true;
    let mut detail = String::new();
    for n in [2usize, 3, 4] {
        let ss = metric::shattered_sphere_instance(n).unwrap();
        let h = metric::metric_trigraph(&ss.cloud, ss.tau, ss.eps).trigraph.to_hypergraph();
        let basis = VSet::from_iter(ss.cloud.len(), ss.basis.iter().copied());
        let shattered = vc::is_shattered(&h, &basis).is_some();
        let dim = vc::vc_dimension(&h, ss.cloud.len()).dimension;
        detail.push_str(&format!("N={n}: vc {dim}; "));
        ok &= shattered && dim >= n as i64;
    }
    report(11, "shattered-sphere", ok, detail.trim_end_matches("; "));
}

#[test]
fn criterion_12_majority_domination() {
    let eps = frac(1, 10);
    let runs = 100usize;
    let mut worst = 0usize;
    let mut validated = 0usize;
    let mut worst_ratio = 0.0f64;
    for i in 0..runs {
        // candidate counts stay small: the dominating-set sampler solves an
        // exact rational game LP whose cost grows steeply with n
        let n = 10 + (i * 3) % 51; // 10..=60
        let m = 51 + 2 * ((i * 13) % 476); // odd, up to 1001
        let p = gen::random_profile(n, m, 0x3A30 ^ i as u64);
        let t = tournament::majority_tri_tournament(&p, eps);
        let x = tournament::dominating_set_tri_tournament(&t, 0x3A31 ^ i as u64);
        if tournament::validate_majority_domination(&p, eps, &x) {
            validated += 1;
        }
        worst = worst.max(x.len());
        if n <= 20 {
            let (gamma, _) = tournament::exhaustive_domination(&t).unwrap();
            worst_ratio = worst_ratio.max(x.len() as f64 / gamma as f64);
        }
    }
    report(
        12,
        "majority-domination",
        validated == runs && worst <= MAJORITY_BUDGET,
        &format!(
            "validated {validated}/{runs}, max size {worst} <= {MAJORITY_BUDGET}, \
             small-n ratio vs exact {worst_ratio:.2}"
        ),
    );
}

/// Transitive family for tournaments too large for full enumeration:
/// one greedy maximal transitive set grown from every vertex in a seeded
/// random insertion order, so the family covers each vertex at least once.
fn greedy_transitive_family(t: &TriTournament, seed: u64) -> TransitiveFamily {
    let n = t.ground_size();
    let mut rng = derive_rng(seed, "acceptance-greedy-family", 0);
    let mut members = Vec::with_capacity(n);
    for v in 0..n {
        let mut order: Vec<usize> = (0..n).filter(|&u| u != v).collect();
        for i in (1..order.len()).rev() {
            let j = rng.gen_range(0..=i);
            order.swap(i, j);
        }
        let mut s = VSet::empty(n);
        s.insert(v);
        for u in order {
            let mut cand = s.clone();
            cand.insert(u);
            if t.is_transitive_on(&cand) {
                s = cand;
            }
        }
        members.push(s);
    }
    TransitiveFamily::new(t, members).expect("greedy members are transitive")
}

#[test]
fn criterion_13_tournament_recursion() {
    let runs = 100usize;
    let mut dominated = 0usize;
    let mut worst_ratio = 0.0f64;
    for i in 0..runs {
        let n = 6 + (i * 11) % 35; // 6..=40
        let t = gen::random_tournament(n, 0x7EC ^ i as u64);
        let family = if n <= 14 {
            TransitiveFamily::new(&t, lp::maximal_transitive_sets(&t)).unwrap()
        } else {
            greedy_transitive_family(&t, 0x7ED ^ i as u64)
        };
        let min_cov = family.coverage(n).into_iter().min().unwrap();
        let c = frac(min_cov as i64, family.size() as i64);
        let x = tournament::dominate_from_fractional_coloring(&t, &family, c, 0x7EE ^ i as u64)
            .unwrap();
        if t.dominates(&x) {
            dominated += 1;
        }
        if n <= 14 {
            let (gamma, _) = tournament::exhaustive_domination(&t).unwrap();
            worst_ratio = worst_ratio.max(x.len() as f64 / gamma as f64);
        }
    }
    report(
        13,
        "tournament-recursion",
        dominated == runs && worst_ratio <= RECURSION_RATIO_BOUND,
        &format!(
            "dominating {dominated}/{runs}, small-n ratio {worst_ratio:.2} <= {RECURSION_RATIO_BOUND}"
        ),
    );
}

fn block_system(n: usize, blocks: usize, m: usize) -> SetSystem {
    // m block indicators cycling through equal blocks; same-block pairs
    // co-occur in m/blocks sets, which must exceed eps*m to stay non-red
    let block_len = n / blocks;
    let sets: Vec<VSet> = (0..m)
        .map(|i| {
            let b = i % blocks;
            VSet::from_iter(n, b * block_len..(b + 1) * block_len)
        })
        .collect();
    SetSystem::new(n, sets)
}

#[test]
fn criterion_14_regularity_partition() {
    let eta = frac(1, 5);
    let mut ok = true;
    let mut detail = String::new();
    for (n, blocks, m) in [(400usize, 4usize, 100usize), (300, 4, 80), (200, 4, 60)] {
        let f = block_system(n, blocks, m);
        match cluster::regularity_partition(&f, frac(1, 5), eta, 0xFE6) {
            Ok(r) => {
                detail.push_str(&format!("n={n}: bad {}; ", r.bad_fraction));
                ok &= r.bad_fraction <= eta;
            }
            Err(e) => {
                detail.push_str(&format!("n={n}: {e}; "));
                ok = false;
            }
        }
    }
    report(14, "regularity-partition", ok, detail.trim_end_matches("; "));
}
