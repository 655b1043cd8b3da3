use lowcarb_core::scenario::{elbow_k, joint_scenarios, kmeans, knee, ClusterResult, CurveSet};
use proptest::prelude::*;

fn curve_set() -> impl Strategy<Value = CurveSet> {
    (1usize..=20, 1usize..=6).prop_flat_map(|(days, periods)| {
        prop::collection::vec(prop::collection::vec(0.0f64..500.0, periods), days)
            .prop_map(|curves| CurveSet::new("signal", curves).unwrap())
    })
}

fn sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

proptest! {
    #[test]
    fn clustering_invariants(set in curve_set(), k_pick in 1usize..=20, seed in any::<u64>()) {
        let k = 1 + (k_pick - 1) % set.days();
        let r = kmeans(&set, k, seed).unwrap();
        prop_assert_eq!(r.k(), k);
        prop_assert!(r.sse_history.windows(2).all(|w| w[1] <= w[0] + 1e-9 * w[0].max(1.0)), "{:?}", r.sse_history);
        prop_assert!(r.sse >= 0.0);
        prop_assert!((r.probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for (c, &p) in r.probabilities.iter().enumerate() {
            let size = r.assignments.iter().filter(|&&a| a == c).count();
            prop_assert_eq!(p, size as f64 / set.days() as f64);
        }
        let sse: f64 = set.curves.iter().zip(&r.assignments).map(|(x, &a)| sq(x, &r.centroids[a])).sum();
        prop_assert!((sse - r.sse).abs() <= 1e-9 * sse.max(1.0));
        for t in 0..set.periods() {
            let lo = set.curves.iter().map(|c| c[t]).fold(f64::INFINITY, f64::min);
            let hi = set.curves.iter().map(|c| c[t]).fold(f64::NEG_INFINITY, f64::max);
            for c in &r.centroids {
                prop_assert!(c[t] >= lo - 1e-9 && c[t] <= hi + 1e-9);
            }
        }
        prop_assert_eq!(&r, &kmeans(&set, k, seed).unwrap());
    }

    #[test]
    fn single_cluster_is_the_mean(set in curve_set(), seed in any::<u64>()) {
        let r = kmeans(&set, 1, seed).unwrap();
        prop_assert_eq!(&r.probabilities, &vec![1.0]);
        for t in 0..set.periods() {
            let mean = set.curves.iter().map(|c| c[t]).sum::<f64>() / set.days() as f64;
            prop_assert!((r.centroids[0][t] - mean).abs() <= 1e-9 * mean.max(1.0));
        }
    }

    #[test]
    fn separated_groups_match_brute_force(
        a in prop::collection::vec(prop::collection::vec(0.0f64..10.0, 3), 1..=5),
        b in prop::collection::vec(prop::collection::vec(1000.0f64..1010.0, 3), 1..=5),
        seed in any::<u64>(),
    ) {
        let curves: Vec<Vec<f64>> = a.iter().chain(&b).cloned().collect();
        let n = curves.len();
        let set = CurveSet::new("s", curves.clone()).unwrap();
        // Every nontrivial 2-partition, by bitmask.
        let mut best = f64::INFINITY;
        for mask in 1u32..(1 << n) - 1 {
            let mut sse = 0.0;
            for side in [true, false] {
                let members: Vec<&Vec<f64>> = (0..n).filter(|&i| (mask >> i & 1 == 1) == side).map(|i| &curves[i]).collect();
                let mean: Vec<f64> = (0..3).map(|t| members.iter().map(|c| c[t]).sum::<f64>() / members.len() as f64).collect();
                sse += members.iter().map(|c| sq(c, &mean)).sum::<f64>();
            }
            best = best.min(sse);
        }
        let r = kmeans(&set, 2, seed).unwrap();
        prop_assert!((r.sse - best).abs() <= 1e-9 * best.max(1.0), "{} vs {}", r.sse, best);
    }

    #[test]
    fn joint_marginals_are_preserved(
        pw in prop::collection::vec(0.01f64..1.0, 1..=4),
        ps in prop::collection::vec(0.01f64..1.0, 1..=4),
    ) {
        let norm = |v: Vec<f64>| { let s: f64 = v.iter().sum(); v.into_iter().map(|x| x / s).collect::<Vec<f64>>() };
        let (pw, ps) = (norm(pw), norm(ps));
        let wind = ClusterResult::from_marginals(vec![vec![1.0; 2]; pw.len()], pw.clone());
        let solar = ClusterResult::from_marginals(vec![vec![2.0; 2]; ps.len()], ps.clone());
        let set = joint_scenarios(&wind, &solar, &[3.0; 2]).unwrap();
        prop_assert_eq!(set.len(), pw.len() * ps.len());
        let p = set.probabilities();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        for (i, &w) in pw.iter().enumerate() {
            prop_assert!((p[i * ps.len()..(i + 1) * ps.len()].iter().sum::<f64>() - w).abs() < 1e-12);
        }
        for (j, &s) in ps.iter().enumerate() {
            prop_assert!(((0..pw.len()).map(|i| p[i * ps.len() + j]).sum::<f64>() - s).abs() < 1e-12);
        }
    }
}

#[test]
fn two_flat_groups() {
    let set = CurveSet::new("w", vec![vec![10.0; 4], vec![100.0; 4], vec![10.0; 4], vec![100.0; 4]]).unwrap();
    let r = kmeans(&set, 2, 7).unwrap();
    let mut cents: Vec<f64> = r.centroids.iter().map(|c| c[0]).collect();
    cents.sort_by(f64::total_cmp);
    assert_eq!(cents, vec![10.0, 100.0]);
    assert_eq!(r.probabilities, vec![0.5, 0.5]);
    assert_eq!(r.sse, 0.0);
    assert_eq!(elbow_k(&set, 1, 4, 7).unwrap(), 2);
}

#[test]
fn knee_examples() {
    let profile: Vec<(usize, f64)> = [100.0, 20.0, 18.0, 17.0, 16.0].iter().enumerate().map(|(i, &s)| (i + 1, s)).collect();
    assert_eq!(knee(&profile), 2);
    let linear: Vec<(usize, f64)> = (1..=5).map(|k| (k, 50.0 - 10.0 * k as f64)).collect();
    assert_eq!(knee(&linear), 1);
}

#[test]
fn forty_eight_day_shape() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let curves = (0..48)
        .map(|d| {
            let level = [150.0, 450.0, 60.0][d % 3];
            (0..24).map(|_| level * rng.gen_range(0.9..1.1)).collect()
        })
        .collect();
    let set = CurveSet::new("wind", curves).unwrap();
    let r = kmeans(&set, 3, 42).unwrap();
    assert_eq!(r.centroids.len(), 3);
    assert!((r.probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert!(r.sse_history.windows(2).all(|w| w[1] <= w[0]));
    assert!(kmeans(&set, 49, 42).is_err());
}
