//! Visiting order of the region centers as an open path.

use crate::config::SolverConfig;
use crate::geometry::Point2D;

/// Length of the open path through `centers` in `order`.
pub fn path_length(centers: &[Point2D], order: &[usize]) -> f64 {
    order
        .windows(2)
        .map(|w| centers[w[0]].distance(centers[w[1]]))
        .sum()
}

fn nearest_neighbour(centers: &[Point2D], start: usize) -> Vec<usize> {
    let n = centers.len();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut current = start;
    visited[start] = true;
    order.push(start);
    for _ in 1..n {
        let next = (0..n)
            .filter(|&j| !visited[j])
            .min_by(|&a, &b| {
                centers[current]
                    .distance(centers[a])
                    .total_cmp(&centers[current].distance(centers[b]))
            })
            .expect("unvisited center remains");
        visited[next] = true;
        order.push(next);
        current = next;
    }
    order
}

/// Reverses sub-paths while that shortens the open path.
fn two_opt(centers: &[Point2D], order: &mut [usize]) {
    let n = order.len();
    let d = |a: usize, b: usize| centers[a].distance(centers[b]);
    let scale = path_length(centers, order).max(1.0);
    loop {
        let mut improved = false;
        for i in 0..n {
            for j in i + 1..n {
                let mut delta = 0.0;
                if i > 0 {
                    delta += d(order[i - 1], order[j]) - d(order[i - 1], order[i]);
                }
                if j + 1 < n {
                    delta += d(order[i], order[j + 1]) - d(order[j], order[j + 1]);
                }
                if delta < -1e-12 * scale {
                    order[i..=j].reverse();
                    improved = true;
                }
            }
        }
        if !improved {
            return;
        }
    }
}

/// Exact shortest open path by dynamic programming over subsets.
pub fn exact_order(centers: &[Point2D]) -> Vec<usize> {
    let n = centers.len();
    if n <= 1 {
        return (0..n).collect();
    }
    let full = 1usize << n;
    let mut cost = vec![f64::INFINITY; full * n];
    let mut parent = vec![usize::MAX; full * n];
    for j in 0..n {
        cost[(1 << j) * n + j] = 0.0;
    }
    for mask in 1..full {
        for j in 0..n {
            let here = cost[mask * n + j];
            if mask & (1 << j) == 0 || !here.is_finite() {
                continue;
            }
            for k in 0..n {
                if mask & (1 << k) != 0 {
                    continue;
                }
                let next = mask | (1 << k);
                let candidate = here + centers[j].distance(centers[k]);
                if candidate < cost[next * n + k] {
                    cost[next * n + k] = candidate;
                    parent[next * n + k] = j;
                }
            }
        }
    }
    let last_mask = full - 1;
    let mut end = (0..n)
        .min_by(|&a, &b| cost[last_mask * n + a].total_cmp(&cost[last_mask * n + b]))
        .unwrap_or(0);
    let mut mask = last_mask;
    let mut order = Vec::with_capacity(n);
    loop {
        order.push(end);
        let p = parent[mask * n + end];
        if p == usize::MAX {
            break;
        }
        mask &= !(1 << end);
        end = p;
    }
    order.reverse();
    order
}

/// Open-path visiting order: nearest neighbour from every start, each
/// improved by 2-opt. Up to `cfg.exact_order_limit` regions the exact
/// optimum replaces the heuristic when it is strictly shorter.
pub fn order_regions(centers: &[Point2D], cfg: &SolverConfig) -> Vec<usize> {
    let n = centers.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut best: Vec<usize> = Vec::new();
    let mut best_len = f64::INFINITY;
    for start in 0..n {
        let mut order = nearest_neighbour(centers, start);
        two_opt(centers, &mut order);
        let len = path_length(centers, &order);
        if len < best_len {
            best_len = len;
            best = order;
        }
    }
    if n <= cfg.exact_order_limit {
        let exact = exact_order(centers);
        if path_length(centers, &exact) < best_len {
            best = exact;
        }
    }
    best
}
