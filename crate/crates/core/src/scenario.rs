//! Scenario reduction: k-means over daily output curves, elbow selection of
//! the cluster count and Cartesian composition of the wind and solar
//! clusters into a joint scenario set.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exec::{Executor, Sequential};
use crate::math::abs;
use crate::system::{Scenario, ScenarioSet};

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Lloyd iterations stop here even if assignments still move.
pub const MAX_ITERATIONS: usize = 300;

/// Independent k-means++ starts per clustering.
pub const RESTARTS: usize = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("curve set is empty")]
    Empty,
    #[error("curve {day} has {got} periods, expected {expected}")]
    Ragged { day: usize, expected: usize, got: usize },
    #[error("curve {day} period {period} is negative or not finite")]
    BadEntry { day: usize, period: usize },
    #[error("k = {k} is outside 1..={days}")]
    InvalidK { k: usize, days: usize },
    #[error("elbow range {k_min}..={k_max} invalid for {days} curves")]
    InvalidRange { k_min: usize, k_max: usize, days: usize },
    #[error("period counts differ: wind {wind}, solar {solar}, hydro {hydro}")]
    PeriodMismatch { wind: usize, solar: usize, hydro: usize },
}

/// Historical daily curves of one signal, `curves[day][period]` in MW.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct CurveSet {
    pub label: String,
    pub curves: Vec<Vec<f64>>,
}

impl CurveSet {
    pub fn new(label: impl Into<String>, curves: Vec<Vec<f64>>) -> Result<Self, ScenarioError> {
        let set = Self { label: label.into(), curves };
        set.validate()?;
        Ok(set)
    }

    pub fn days(&self) -> usize {
        self.curves.len()
    }

    pub fn periods(&self) -> usize {
        self.curves.first().map_or(0, Vec::len)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.curves.is_empty() || self.periods() == 0 {
            return Err(ScenarioError::Empty);
        }
        let periods = self.periods();
        for (day, c) in self.curves.iter().enumerate() {
            if c.len() != periods {
                return Err(ScenarioError::Ragged { day, expected: periods, got: c.len() });
            }
            if let Some(period) = c.iter().position(|v| !(*v >= 0.0 && v.is_finite())) {
                return Err(ScenarioError::BadEntry { day, period });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ClusterResult {
    /// `centroids[cluster][period]`
    pub centroids: Vec<Vec<f64>>,
    /// Cluster index of every input curve.
    pub assignments: Vec<usize>,
    /// Cluster size divided by the number of curves.
    pub probabilities: Vec<f64>,
    /// Sum of squared Euclidean distances to the assigned centroids.
    pub sse: f64,
    /// SSE after every Lloyd iteration (non-increasing).
    pub sse_history: Vec<f64>,
    pub iterations: usize,
}

impl ClusterResult {
    pub fn k(&self) -> usize {
        self.centroids.len()
    }

    pub fn periods(&self) -> usize {
        self.centroids.first().map_or(0, Vec::len)
    }

    /// A result carrying only centroids and marginal probabilities, as when
    /// the clustering was done elsewhere.
    pub fn from_marginals(centroids: Vec<Vec<f64>>, probabilities: Vec<f64>) -> Self {
        Self {
            centroids,
            assignments: Vec::new(),
            probabilities,
            sse: 0.0,
            sse_history: Vec::new(),
            iterations: 0,
        }
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, centroid) in centroids.iter().enumerate() {
        let d = sq_dist(point, centroid);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn plus_plus_init(curves: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = curves.len();
    let mut centroids = Vec::with_capacity(k);
    centroids.push(curves[rng.gen_range(0..n)].clone());
    let mut d2: Vec<f64> = curves.iter().map(|c| sq_dist(c, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.gen::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = n - 1;
            for (i, d) in d2.iter().enumerate() {
                acc += d;
                if acc > target && *d > 0.0 {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            // Every curve coincides with a centroid already.
            rng.gen_range(0..n)
        };
        centroids.push(curves[pick].clone());
        let last = centroids.last().unwrap();
        for (i, c) in curves.iter().enumerate() {
            let d = sq_dist(c, last);
            if d < d2[i] {
                d2[i] = d;
            }
        }
    }
    centroids
}

fn recompute_centroids(curves: &[Vec<f64>], assign: &[usize], k: usize) -> (Vec<Vec<f64>>, Vec<usize>) {
    let periods = curves[0].len();
    let mut sums = vec![vec![0.0; periods]; k];
    let mut counts = vec![0usize; k];
    for (c, &a) in curves.iter().zip(assign) {
        counts[a] += 1;
        for (s, v) in sums[a].iter_mut().zip(c) {
            *s += v;
        }
    }
    for (s, &n) in sums.iter_mut().zip(&counts) {
        if n > 0 {
            let inv = n as f64;
            s.iter_mut().for_each(|v| *v /= inv);
        }
    }
    (sums, counts)
}

/// Moves the curve farthest from its centroid into each empty cluster.
fn repair_empty(curves: &[Vec<f64>], assign: &mut [usize], centroids: &mut [Vec<f64>], counts: &mut [usize]) {
    for empty in 0..centroids.len() {
        if counts[empty] > 0 {
            continue;
        }
        let mut far = None;
        let mut far_d = -1.0;
        for (i, c) in curves.iter().enumerate() {
            if counts[assign[i]] <= 1 {
                continue;
            }
            let d = sq_dist(c, &centroids[assign[i]]);
            if d > far_d {
                far_d = d;
                far = Some(i);
            }
        }
        let Some(i) = far else { break };
        counts[assign[i]] -= 1;
        assign[i] = empty;
        counts[empty] = 1;
        centroids[empty] = curves[i].clone();
    }
    let (c, n) = recompute_centroids(curves, assign, centroids.len());
    centroids.clone_from_slice(&c);
    counts.clone_from_slice(&n);
}

fn total_sse(curves: &[Vec<f64>], assign: &[usize], centroids: &[Vec<f64>]) -> f64 {
    curves.iter().zip(assign).map(|(c, &a)| sq_dist(c, &centroids[a])).sum()
}

/// Lloyd's k-means with k-means++ seeding, restarted [`RESTARTS`] times from
/// one seeded stream; the run with the lowest SSE (earliest on ties) wins.
///
/// The result is a pure function of `(curves, k, seed)`.
pub fn kmeans(curves: &CurveSet, k: usize, seed: u64) -> Result<ClusterResult, ScenarioError> {
    curves.validate()?;
    let days = curves.days();
    if k == 0 || k > days {
        return Err(ScenarioError::InvalidK { k, days });
    }
    let data = &curves.curves;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<ClusterResult> = None;
    for _ in 0..RESTARTS {
        let run = lloyd(data, plus_plus_init(data, k, &mut rng));
        if best.as_ref().map_or(true, |b| run.sse < b.sse) {
            best = Some(run);
        }
    }
    Ok(best.unwrap())
}

fn lloyd(data: &[Vec<f64>], mut centroids: Vec<Vec<f64>>) -> ClusterResult {
    let k = centroids.len();
    let days = data.len();
    let mut assign: Vec<usize> = data.iter().map(|c| nearest(c, &centroids).0).collect();
    let mut history = Vec::new();
    let mut iterations = 0;
    loop {
        iterations += 1;
        let (c, mut counts) = recompute_centroids(data, &assign, k);
        centroids = c;
        if counts.iter().any(|&n| n == 0) {
            repair_empty(data, &mut assign, &mut centroids, &mut counts);
        }
        history.push(total_sse(data, &assign, &centroids));
        if iterations >= MAX_ITERATIONS {
            break;
        }
        let next: Vec<usize> = data
            .iter()
            .zip(&assign)
            .map(|(c, &cur)| {
                let (best, d) = nearest(c, &centroids);
                // Keep the current cluster on ties so assignments settle.
                if sq_dist(c, &centroids[cur]) <= d { cur } else { best }
            })
            .collect();
        if next == assign {
            break;
        }
        assign = next;
    }
    let (_, counts) = recompute_centroids(data, &assign, k);
    let probabilities = counts.iter().map(|&n| n as f64 / days as f64).collect();
    ClusterResult {
        sse: *history.last().unwrap(),
        centroids,
        assignments: assign,
        probabilities,
        sse_history: history,
        iterations,
    }
}

/// Knee of an SSE profile: the point farthest from the chord joining the
/// first and last points. Ties go to the smaller k.
pub fn knee(profile: &[(usize, f64)]) -> usize {
    let (Some(&(k0, s0)), Some(&(k1, s1))) = (profile.first(), profile.last()) else {
        return 0;
    };
    let dx = k1 as f64 - k0 as f64;
    let dy = s1 - s0;
    let norm = crate::math::sqrt(dx * dx + dy * dy);
    if norm == 0.0 {
        return k0;
    }
    let scale = profile.iter().map(|p| abs(p.1)).fold(1.0, f64::max) * 1e-9;
    let mut best = (k0, 0.0);
    for &(k, s) in profile {
        let d = abs(dy * (k as f64 - k0 as f64) - dx * (s - s0)) / norm;
        if d > best.1 + scale {
            best = (k, d);
        }
    }
    best.0
}

/// SSE of the k-means solution for every k in `k_min..=k_max`.
pub fn sse_profile<E: Executor>(
    curves: &CurveSet,
    k_min: usize,
    k_max: usize,
    seed: u64,
    exec: &E,
) -> Result<Vec<(usize, f64)>, ScenarioError> {
    curves.validate()?;
    let days = curves.days();
    if k_min == 0 || k_min >= k_max || k_max > days {
        return Err(ScenarioError::InvalidRange { k_min, k_max, days });
    }
    let ks: Vec<usize> = (k_min..=k_max).collect();
    let results = exec.map(ks, |_, k| kmeans(curves, k, seed).map(|r| (k, r.sse)));
    results.into_iter().collect()
}

/// Elbow choice of k over `k_min..=k_max`.
pub fn elbow_k(curves: &CurveSet, k_min: usize, k_max: usize, seed: u64) -> Result<usize, ScenarioError> {
    elbow_k_with(curves, k_min, k_max, seed, &Sequential)
}

pub fn elbow_k_with<E: Executor>(
    curves: &CurveSet,
    k_min: usize,
    k_max: usize,
    seed: u64,
    exec: &E,
) -> Result<usize, ScenarioError> {
    Ok(knee(&sse_profile(curves, k_min, k_max, seed, exec)?))
}

/// Cartesian product of wind and solar clusters, treating the two signals as
/// independent. Every scenario shares the same hydro capacity curve.
pub fn joint_scenarios(
    wind: &ClusterResult,
    solar: &ClusterResult,
    hydro_cap: &[f64],
) -> Result<ScenarioSet, ScenarioError> {
    if wind.periods() != solar.periods() || wind.periods() != hydro_cap.len() {
        return Err(ScenarioError::PeriodMismatch {
            wind: wind.periods(),
            solar: solar.periods(),
            hydro: hydro_cap.len(),
        });
    }
    let mut scenarios = Vec::with_capacity(wind.k() * solar.k());
    for (wc, pw) in wind.centroids.iter().zip(&wind.probabilities) {
        for (sc, ps) in solar.centroids.iter().zip(&solar.probabilities) {
            scenarios.push(Scenario {
                probability: pw * ps,
                wind_cap: wc.clone(),
                solar_cap: sc.clone(),
                hydro_cap: hydro_cap.to_vec(),
            });
        }
    }
    Ok(ScenarioSet { scenarios })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_groups() -> CurveSet {
        CurveSet::new(
            "wind",
            vec![vec![10.0; 4], vec![100.0; 4], vec![10.0; 4], vec![100.0; 4]],
        )
        .unwrap()
    }

    /// Exhaustive search over all assignments of `n` curves into `k` labelled
    /// groups (every group nonempty); returns the minimal SSE.
    fn brute_force_sse(curves: &[Vec<f64>], k: usize) -> f64 {
        let n = curves.len();
        let mut best = f64::INFINITY;
        let total = k.pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let assign: Vec<usize> = (0..n)
                .map(|_| {
                    let a = c % k;
                    c /= k;
                    a
                })
                .collect();
            let (cent, counts) = recompute_centroids(curves, &assign, k);
            if counts.iter().any(|&x| x == 0) {
                continue;
            }
            best = best.min(total_sse(curves, &assign, &cent));
        }
        best
    }

    #[test]
    fn k1_is_elementwise_mean() {
        let set = CurveSet::new("s", vec![vec![0.0, 2.0], vec![4.0, 6.0], vec![2.0, 1.0]]).unwrap();
        let r = kmeans(&set, 1, 7).unwrap();
        assert_eq!(r.centroids, vec![vec![2.0, 3.0]]);
        assert_eq!(r.probabilities, vec![1.0]);
    }

    #[test]
    fn two_group_split_matches_brute_force() {
        let set = two_groups();
        let oracle = brute_force_sse(&set.curves, 2);
        assert_eq!(oracle, 0.0);
        for seed in 0..20 {
            let r = kmeans(&set, 2, seed).unwrap();
            assert!((r.sse - oracle).abs() < 1e-12);
            let mut cents: Vec<f64> = r.centroids.iter().map(|c| c[0]).collect();
            cents.sort_by(f64::total_cmp);
            assert_eq!(cents, vec![10.0, 100.0]);
            assert_eq!(r.probabilities, vec![0.5, 0.5]);
        }
    }

    #[test]
    fn errors() {
        let set = two_groups();
        assert_eq!(kmeans(&set, 5, 0), Err(ScenarioError::InvalidK { k: 5, days: 4 }));
        assert_eq!(kmeans(&set, 0, 0), Err(ScenarioError::InvalidK { k: 0, days: 4 }));
        let empty = CurveSet { label: "x".into(), curves: vec![] };
        assert_eq!(kmeans(&empty, 1, 0), Err(ScenarioError::Empty));
        assert!(matches!(elbow_k(&set, 3, 3, 0), Err(ScenarioError::InvalidRange { .. })));
    }

    #[test]
    fn knee_of_hand_profile() {
        let profile = [(1, 100.0), (2, 20.0), (3, 18.0), (4, 17.0), (5, 16.0)];
        assert_eq!(knee(&profile), 2);
        let linear = [(2, 50.0), (3, 40.0), (4, 30.0), (5, 20.0)];
        assert_eq!(knee(&linear), 2);
    }

    #[test]
    fn elbow_on_two_groups() {
        assert_eq!(elbow_k(&two_groups(), 1, 4, 3).unwrap(), 2);
    }

    #[test]
    fn joint_probabilities_are_products() {
        let w = ClusterResult::from_marginals(vec![vec![1.0], vec![2.0]], vec![0.25, 0.75]);
        let s = ClusterResult::from_marginals(vec![vec![3.0], vec![4.0], vec![5.0]], vec![0.5, 0.3, 0.2]);
        let set = joint_scenarios(&w, &s, &[7.0]).unwrap();
        assert_eq!(set.len(), 6);
        let p = set.probabilities();
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((p[4] - 0.75 * 0.3).abs() < 1e-15);
        assert_eq!(set.scenarios[4].wind_cap, vec![2.0]);
        assert_eq!(set.scenarios[4].solar_cap, vec![4.0]);
        assert_eq!(set.scenarios[4].hydro_cap, vec![7.0]);
        assert!(matches!(joint_scenarios(&w, &s, &[]), Err(ScenarioError::PeriodMismatch { .. })));
    }

    #[test]
    fn degenerate_product() {
        let w = ClusterResult::from_marginals(vec![vec![1.0, 2.0]], vec![1.0]);
        let set = joint_scenarios(&w, &w, &[0.0, 0.0]).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.scenarios[0].probability, 1.0);
    }
}
