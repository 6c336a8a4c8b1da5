//! Independent oracles shared by the oracle and acceptance suites.
//! Everything here recomputes quantities by brute force or by direct
//! formulas, deliberately avoiding the library's own code paths.

#![allow(dead_code)]

use normgeo::matrix::Matrix;
use normgeo::scalar::Scalar;
use normgeo::spaces::Exponent;
use normgeo::vector::Vector;

/// Direct p-norm formula without the library's max-scaling.
pub fn naive_p_norm(entries: &[Scalar], p: Exponent) -> f64 {
    match p {
        Exponent::Infinity => entries.iter().map(|z| z.norm()).fold(0.0, f64::max),
        Exponent::Finite(p) => entries
            .iter()
            .map(|z| z.norm().powf(p))
            .sum::<f64>()
            .powf(1.0 / p),
    }
}

/// Brute-force dual norm in R^2: sup |<w, v>| over a dense sweep of the
/// unit p-sphere (plus the axis vertices, which carry the extremes for
/// p in {1, inf}).
pub fn grid_dual_norm_2d(w: &[f64; 2], p: Exponent, steps: usize) -> f64 {
    let mut best: f64 = 0.0;
    let mut consider = |v: [f64; 2]| {
        let n = naive_p_norm(&[Scalar::new(v[0], 0.0), Scalar::new(v[1], 0.0)], p);
        if n > 1e-12 {
            best = best.max((v[0] * w[0] + v[1] * w[1]).abs() / n);
        }
    };
    for k in 0..steps {
        let theta = 2.0 * std::f64::consts::PI * (k as f64) / (steps as f64);
        consider([theta.cos(), theta.sin()]);
    }
    for v in [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, -1.0]] {
        consider(v);
    }
    best
}

/// Direct membership tests for the simple set families, independent of
/// the projection machinery.
pub enum OracleSet {
    Ball {
        p: Exponent,
        radius: f64,
        center: Vec<f64>,
    },
    Box {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    Orthant,
}

impl OracleSet {
    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            OracleSet::Ball { p, radius, center } => {
                let diff: Vec<Scalar> = x
                    .iter()
                    .zip(center)
                    .map(|(a, c)| Scalar::new(a - c, 0.0))
                    .collect();
                naive_p_norm(&diff, *p) <= *radius + 1e-12
            }
            OracleSet::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(v, (l, h))| *v >= l - 1e-12 && *v <= h + 1e-12),
            OracleSet::Orthant => x.iter().all(|&v| v >= -1e-12),
        }
    }
}

/// Dense-grid nearest-member distance over `[-extent, extent]^dim` with
/// `steps` points per axis. Returns `(best_distance, best_point)`.
pub fn grid_projection(
    set: &OracleSet,
    point: &[f64],
    extent: f64,
    steps: usize,
) -> (f64, Vec<f64>) {
    let dim = point.len();
    let mut best = f64::INFINITY;
    let mut best_point = vec![0.0; dim];
    let mut idx = vec![0usize; dim];
    loop {
        let x: Vec<f64> = idx
            .iter()
            .map(|&i| -extent + 2.0 * extent * (i as f64) / ((steps - 1) as f64))
            .collect();
        if set.contains(&x) {
            let d = x
                .iter()
                .zip(point)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if d < best {
                best = d;
                best_point = x;
            }
        }
        // odometer
        let mut k = 0;
        loop {
            idx[k] += 1;
            if idx[k] < steps {
                break;
            }
            idx[k] = 0;
            k += 1;
            if k == dim {
                return (best, best_point);
            }
        }
    }
}

/// Vertices of `{ x : a_i . x <= b_i }` in dimension <= 3 by
/// enumerating active subsets and filtering for feasibility.
pub fn polytope_vertices(halfspaces: &[(Vec<f64>, f64)], dim: usize) -> Vec<Vec<f64>> {
    let mut vertices: Vec<Vec<f64>> = Vec::new();
    let mut subset = vec![0usize; dim];
    fn rec(
        halfspaces: &[(Vec<f64>, f64)],
        dim: usize,
        start: usize,
        depth: usize,
        subset: &mut Vec<usize>,
        out: &mut Vec<Vec<f64>>,
    ) {
        if depth == dim {
            let rows: Vec<Vec<f64>> = subset.iter().map(|&i| halfspaces[i].0.clone()).collect();
            let rhs: Vec<f64> = subset.iter().map(|&i| halfspaces[i].1).collect();
            let Ok(m) = Matrix::from_real_rows(&rows) else {
                return;
            };
            let Ok(b) = Vector::from_real(&rhs) else {
                return;
            };
            let Ok(x) = m.lu_solve(&b) else { return };
            let xr: Vec<f64> = (0..dim).map(|k| x[k].re).collect();
            let feasible = halfspaces
                .iter()
                .all(|(a, bb)| a.iter().zip(&xr).map(|(ai, xi)| ai * xi).sum::<f64>() <= bb + 1e-9);
            if feasible {
                out.push(xr);
            }
            return;
        }
        for i in start..halfspaces.len() {
            subset[depth] = i;
            rec(halfspaces, dim, i + 1, depth + 1, subset, out);
        }
    }
    rec(halfspaces, dim, 0, 0, &mut subset, &mut vertices);

    vertices
}

/// Euclidean distance from `x` to `span(basis)` by Gram–Schmidt,
/// independent of the quotient module's normal equations.
pub fn gram_schmidt_distance(x: &[f64], basis: &[Vec<f64>]) -> f64 {
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    for b in basis {
        let mut v = b.clone();
        for q in &ortho {
            let c: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= c * qi;
            }
        }
        let n: f64 = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if n > 1e-12 {
            for vi in v.iter_mut() {
                *vi /= n;
            }
            ortho.push(v);
        }
    }
    let mut r = x.to_vec();
    for q in &ortho {
        let c: f64 = r.iter().zip(q).map(|(a, b)| a * b).sum();
        for (ri, qi) in r.iter_mut().zip(q) {
            *ri -= c * qi;
        }
    }
    r.iter().map(|a| a * a).sum::<f64>().sqrt()
}

/// Coarse-to-fine brute-force minimization of `f` over `R^d` (d = 1 or
/// 2). Each refinement window spans several parent grid spacings so a
/// flat valley cannot escape it; five levels with 160 steps per axis
/// end at spacing ~1e-6 of the initial radius.
pub fn nested_grid_min(f: &dyn Fn(&[f64]) -> f64, dim: usize, radius: f64) -> f64 {
    let steps = 160usize;
    let mut center = vec![0.0; dim];
    let mut r = radius;
    let mut best = f(&center);
    for _ in 0..8 {
        if dim == 1 {
            for i in 0..=steps {
                let t = center[0] - r + 2.0 * r * (i as f64) / (steps as f64);
                let v = f(&[t]);
                if v < best {
                    best = v;
                    center = vec![t];
                }
            }
        } else {
            let mut new_center = center.clone();
            for i in 0..=steps {
                for j in 0..=steps {
                    let t = [
                        center[0] - r + 2.0 * r * (i as f64) / (steps as f64),
                        center[1] - r + 2.0 * r * (j as f64) / (steps as f64),
                    ];
                    let v = f(&t);
                    if v < best {
                        best = v;
                        new_center = t.to_vec();
                    }
                }
            }
            center = new_center;
        }
        // next window: +-8 spacings of the current grid
        r *= 16.0 / steps as f64;
    }
    best
}
