use edocc_core::stats_tests::{
    chi2_sf, compare_groups, dunn_posthoc, holm_adjust, kruskal_wallis, normal_sf, rank_groups,
    PairSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Mid-ranks by counting: rank(x) = #{v < x} + (#{v == x} + 1) / 2.
fn brute_ranks(pooled: &[f64]) -> Vec<f64> {
    pooled
        .iter()
        .map(|x| {
            let less = pooled.iter().filter(|v| *v < x).count() as f64;
            let eq = pooled.iter().filter(|v| *v == x).count() as f64;
            less + (eq + 1.0) / 2.0
        })
        .collect()
}

fn brute_h(groups: &[Vec<f64>]) -> f64 {
    let pooled: Vec<f64> = groups.concat();
    let ranks = brute_ranks(&pooled);
    let n = pooled.len() as f64;
    let mut offset = 0;
    let mut s = 0.0;
    for g in groups {
        let r: f64 = ranks[offset..offset + g.len()].iter().sum();
        s += r * r / g.len() as f64;
        offset += g.len();
    }
    let mut distinct = pooled.clone();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let ties: f64 = distinct
        .iter()
        .map(|d| {
            let t = pooled.iter().filter(|v| *v == d).count() as f64;
            t * t * t - t
        })
        .sum();
    let h = 12.0 / (n * (n + 1.0)) * s - 3.0 * (n + 1.0);
    h / (1.0 - ties / (n * n * n - n))
}

fn random_groups(rng: &mut ChaCha8Rng, k: usize) -> Vec<Vec<f64>> {
    (0..k)
        .map(|g| {
            let n = rng.random_range(3..40);
            (0..n)
                .map(|_| (rng.random_range(0.0..20.0) + g as f64).round())
                .collect()
        })
        .collect()
}

fn slices(g: &[Vec<f64>]) -> Vec<&[f64]> {
    g.iter().map(Vec::as_slice).collect()
}

#[test]
fn two_group_reference() {
    let r = kruskal_wallis(&[&[1.0, 2.0, 3.0][..], &[4.0, 5.0, 6.0]]).unwrap();
    assert!((r.h - 3.8571).abs() < 1e-3);
    assert!((r.p_value - 0.0495).abs() < 1e-3);
    assert!((chi2_sf(3.8571, 1.0) - 0.04953).abs() < 1e-5);
}

#[test]
fn h_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let g = random_groups(&mut rng, 3);
        let h = kruskal_wallis(&slices(&g)).unwrap().h;
        assert!((h - brute_h(&g).max(0.0)).abs() < 1e-10);
    }
}

#[test]
fn dunn_matches_mean_rank_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let g = random_groups(&mut rng, 3);
        let pooled = g.concat();
        let ranks = brute_ranks(&pooled);
        let n = pooled.len() as f64;
        let mut means = Vec::new();
        let mut off = 0;
        for grp in &g {
            means.push(ranks[off..off + grp.len()].iter().sum::<f64>() / grp.len() as f64);
            off += grp.len();
        }
        let mut sorted = pooled.clone();
        sorted.sort_by(f64::total_cmp);
        let mut tie = 0.0;
        let mut i = 0;
        while i < sorted.len() {
            let j = sorted[i..].iter().take_while(|v| **v == sorted[i]).count();
            tie += (j * j * j - j) as f64;
            i += j;
        }
        let r = rank_groups(&slices(&g)).unwrap();
        let got = dunn_posthoc(&r, &[(0, 1), (0, 2), (1, 2)]);
        for (idx, &(a, b)) in [(0, 1), (0, 2), (1, 2)].iter().enumerate() {
            let var = (n * (n + 1.0) / 12.0 - tie / (12.0 * (n - 1.0)))
                * (1.0 / g[a].len() as f64 + 1.0 / g[b].len() as f64);
            let z = (means[a] - means[b]) / var.sqrt();
            assert!((got[idx].0 - z).abs() < 1e-10);
            assert!((got[idx].1 - 2.0 * normal_sf(z.abs())).abs() < 1e-10);
        }
    }
}

#[test]
fn rank_invariance_under_monotone_transforms() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
    for _ in 0..100 {
        let g = random_groups(&mut rng, 3);
        let t: Vec<Vec<f64>> = g
            .iter()
            .map(|v| v.iter().map(|x| (x + 1.0).ln() * 3.0 + x.powi(3)).collect())
            .collect();
        let a = compare_groups(&names, &slices(&g), &PairSet::All).unwrap();
        let b = compare_groups(&names, &slices(&t), &PairSet::All).unwrap();
        assert!((a.h - b.h).abs() < 1e-9);
        assert!((a.p_kw - b.p_kw).abs() < 1e-12);
        for (x, y) in a.pairs.iter().zip(&b.pairs) {
            assert!((x.z - y.z).abs() < 1e-9);
            assert!((x.p_holm - y.p_holm).abs() < 1e-12);
        }
    }
}

#[test]
fn group_order_permutes_results() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let g = random_groups(&mut rng, 3);
    let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
    let fwd = compare_groups(&names, &slices(&g), &PairSet::All).unwrap();
    let rev_names: Vec<String> = names.iter().rev().cloned().collect();
    let rev_groups: Vec<Vec<f64>> = g.iter().rev().cloned().collect();
    let rev = compare_groups(&rev_names, &slices(&rev_groups), &PairSet::All).unwrap();
    assert!((fwd.h - rev.h).abs() < 1e-10);
    for p in &fwd.pairs {
        let q = rev.pairs.iter().find(|q| q.a == p.b && q.b == p.a).unwrap();
        assert!((p.z + q.z).abs() < 1e-10);
        assert!((p.p_holm - q.p_holm).abs() < 1e-12);
    }
}

#[test]
fn identical_groups_are_indistinguishable() {
    let names: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
    let x = [3.0, 1.0, 4.0, 1.0, 5.0];
    let r = compare_groups(&names, &[&x[..], &x], &PairSet::All).unwrap();
    assert_eq!((r.h, r.p_kw), (0.0, 1.0));
    assert_eq!(r.pairs[0].z, 0.0);
    assert_eq!(r.pairs[0].p_holm, 1.0);
}

#[test]
fn holm_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let m = rng.random_range(1..12);
        let p: Vec<f64> = (0..m).map(|_| rng.random::<f64>().powi(3)).collect();
        let adj = holm_adjust(&p).unwrap();
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by(|a, b| p[*a].total_cmp(&p[*b]));
        for w in order.windows(2) {
            assert!(adj[w[0]] <= adj[w[1]]);
        }
        for (a, r) in adj.iter().zip(&p) {
            assert!(a >= r && *a <= 1.0);
        }
    }
    assert_eq!(holm_adjust(&[0.2]).unwrap(), vec![0.2]);
}
