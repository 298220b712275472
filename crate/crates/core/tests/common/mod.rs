//! Oracles and generators shared by the integration tests. Nothing here
//! calls into the metric implementations it is used to check.
#![allow(dead_code)]

use curveset::clustering::ClusteringInstance;
use curveset::geometry::{pt, Curve, GeomObject, Point, PointSet};
use curveset::metrics::MetricKind;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    s.sqrt()
}

/// Minimum over every monotone correspondence (lattice path with steps
/// (1,0), (0,1), (1,1)) of the largest matched-pair distance.
pub fn brute_discrete_frechet(p: &[Point], q: &[Point]) -> f64 {
    fn walk(p: &[Point], q: &[Point], i: usize, j: usize, sofar: f64, best: &mut f64) {
        let here = sofar.max(euclid(p[i].coords(), q[j].coords()));
        if i == p.len() - 1 && j == q.len() - 1 {
            *best = best.min(here);
            return;
        }
        if i + 1 < p.len() {
            walk(p, q, i + 1, j, here, best);
        }
        if j + 1 < q.len() {
            walk(p, q, i, j + 1, here, best);
        }
        if i + 1 < p.len() && j + 1 < q.len() {
            walk(p, q, i + 1, j + 1, here, best);
        }
    }
    let mut best = f64::INFINITY;
    walk(p, q, 0, 0, 0.0, &mut best);
    best
}

/// Every covering correspondence contains the union of a map a→b and a map
/// b→a, and every such union is covering; enumerate all maps both ways.
pub fn brute_hausdorff(a: &[Point], b: &[Point]) -> f64 {
    fn best_map(from: &[Point], to: &[Point]) -> f64 {
        let total = to.len().pow(from.len() as u32);
        let mut best = f64::INFINITY;
        for code in 0..total {
            let mut c = code;
            let mut worst: f64 = 0.0;
            for x in from {
                let y = &to[c % to.len()];
                c /= to.len();
                worst = worst.max(euclid(x.coords(), y.coords()));
            }
            best = best.min(worst);
        }
        best
    }
    best_map(a, b).max(best_map(b, a))
}

pub fn random_points(rng: &mut ChaCha8Rng, n: usize, d: usize, spread: f64) -> Vec<Point> {
    (0..n)
        .map(|_| Point::new((0..d).map(|_| rng.gen_range(-spread..spread)).collect()).unwrap())
        .collect()
}

pub fn random_curve(rng: &mut ChaCha8Rng, max_len: usize, spread: f64) -> Curve {
    let n = rng.gen_range(1..=max_len);
    Curve::new(random_points(rng, n, 2, spread)).unwrap()
}

pub fn translate(c: &Curve, v: &[f64]) -> Curve {
    Curve::new(
        c.vertices()
            .iter()
            .map(|p| Point::new(p.coords().iter().zip(v).map(|(a, b)| a + b).collect()).unwrap())
            .collect(),
    )
    .unwrap()
}

/// `n` objects around `k` well-separated prototypes with 8 vertices each.
/// Objects drop a random number of interior vertices (keeping 4 to 8) and
/// jitter the rest with uniform noise of half-width 1.
pub fn planted_instance(rng: &mut ChaCha8Rng, metric: MetricKind, n: usize, k: usize, l: usize) -> ClusteringInstance {
    let prototypes: Vec<Vec<[f64; 2]>> = (0..k)
        .map(|c| {
            let (ox, oy) = (c as f64 * 60.0, rng.gen_range(-20.0..20.0));
            (0..8)
                .map(|j| [ox + j as f64 * 4.0 + rng.gen_range(-1.0..1.0), oy + rng.gen_range(-6.0..6.0)])
                .collect()
        })
        .collect();
    let objects = (0..n)
        .map(|_| {
            let proto = &prototypes[rng.gen_range(0..k)];
            let keep = rng.gen_range(4..=8);
            let mut idx: Vec<usize> = (1..7).collect();
            while idx.len() + 2 > keep {
                let r = rng.gen_range(0..idx.len());
                idx.remove(r);
            }
            let pts = std::iter::once(0)
                .chain(idx)
                .chain(std::iter::once(7))
                .map(|j| pt(&[proto[j][0] + rng.gen_range(-1.0..1.0), proto[j][1] + rng.gen_range(-1.0..1.0)]))
                .collect();
            GeomObject::from_kind(metric.object_kind(), pts).unwrap()
        })
        .collect();
    ClusteringInstance::new(objects, None, metric, k, l).unwrap()
}

/// Random objects of up to `m` points scattered over a few loose groups.
pub fn random_instance(
    rng: &mut ChaCha8Rng,
    metric: MetricKind,
    n: usize,
    m: usize,
    k: usize,
    l: usize,
) -> ClusteringInstance {
    let groups = rng.gen_range(1..=5);
    let centers: Vec<[f64; 2]> = (0..groups).map(|_| [rng.gen_range(0.0..50.0), rng.gen_range(0.0..50.0)]).collect();
    let objects = (0..n)
        .map(|_| {
            let c = centers[rng.gen_range(0..groups)];
            let len = rng.gen_range(1..=m);
            let pts = (0..len)
                .map(|_| pt(&[c[0] + rng.gen_range(-4.0..4.0), c[1] + rng.gen_range(-4.0..4.0)]))
                .collect();
            GeomObject::from_kind(metric.object_kind(), pts).unwrap()
        })
        .collect();
    ClusteringInstance::new(objects, None, metric, k, l).unwrap()
}

pub fn point_set(rng: &mut ChaCha8Rng, max_len: usize, spread: f64) -> PointSet {
    let n = rng.gen_range(1..=max_len);
    PointSet::new(random_points(rng, n, 2, spread)).unwrap()
}

/// All `k`-subsets of `0..n` (with repetition when n < k).
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n >= k {
        rec(0, n, k, &mut Vec::new(), &mut out);
    } else {
        out.push((0..k).map(|i| i % n).collect());
    }
    out
}
