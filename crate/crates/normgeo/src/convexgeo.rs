//! Nearest-point projection onto closed convex sets in `R^n`,
//! separating hyperplanes for exterior points, supporting hyperplanes at
//! boundary points via exterior sequences, and cone separation.
//!
//! Projection backends: closed forms for halfspaces, affine subspaces
//! (normal equations), boxes, `l1`/`l2`/`l∞` balls and the orthant;
//! Dykstra alternating projections for polytopes and intersections;
//! active-set nonnegative least squares for finitely generated cones.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::realvec as rv;
use crate::sampling;
use crate::spaces::Exponent;
use crate::tolerance::ToleranceProfile;
use crate::vector::Vector;
use serde::{Deserialize, Serialize};

/// Description of a nonempty closed convex subset of `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvexSet {
    /// `{ x : <a, x> <= b }`
    Halfspace {
        a: Vec<f64>,
        b: f64,
    },
    /// `offset + span(basis)`; an empty basis describes a single point.
    Affine {
        basis: Vec<Vec<f64>>,
        offset: Vec<f64>,
    },
    /// `{ x : lo <= x <= hi }` componentwise.
    Box {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
    /// `{ x : |x - center|_p <= radius }`; projection implemented for
    /// p in {1, 2, inf}.
    #[serde(rename = "pball")]
    PBall {
        p: Exponent,
        radius: f64,
        center: Vec<f64>,
    },
    /// The nonnegative orthant.
    Orthant {
        dim: usize,
    },
    /// Intersection of halfspaces, certified nonempty by `feasible`.
    Polytope {
        halfspaces: Vec<HalfspaceData>,
        feasible: Vec<f64>,
    },
    /// `{ sum_j c_j g_j : c_j >= 0 }`.
    #[serde(rename = "cone")]
    GeneratedCone {
        generators: Vec<Vec<f64>>,
    },
    Intersection {
        sets: Vec<ConvexSet>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfspaceData {
    pub a: Vec<f64>,
    pub b: f64,
}

impl ConvexSet {
    pub fn dim(&self) -> usize {
        match self {
            ConvexSet::Halfspace { a, .. } => a.len(),
            ConvexSet::Affine { offset, .. } => offset.len(),
            ConvexSet::Box { lo, .. } => lo.len(),
            ConvexSet::PBall { center, .. } => center.len(),
            ConvexSet::Orthant { dim } => *dim,
            ConvexSet::Polytope { feasible, .. } => feasible.len(),
            ConvexSet::GeneratedCone { generators } => {
                generators.first().map(|g| g.len()).unwrap_or(0)
            }
            ConvexSet::Intersection { sets } => sets.first().map(|s| s.dim()).unwrap_or(0),
        }
    }

    /// Structural validation (nonzero normals, ordered boxes, feasible
    /// polytope certificates, consistent dimensions).
    pub fn validate(&self, profile: &ToleranceProfile) -> Result<()> {
        match self {
            ConvexSet::Halfspace { a, .. } => {
                if a.is_empty() || rv::norm2(a) == 0.0 {
                    return Err(Error::InvalidSet("halfspace normal must be nonzero".into()));
                }
            }
            ConvexSet::Affine { basis, offset } => {
                if offset.is_empty() {
                    return Err(Error::InvalidSet("affine offset must be nonempty".into()));
                }
                if basis.iter().any(|b| b.len() != offset.len()) {
                    return Err(Error::InvalidSet("affine basis dimension mismatch".into()));
                }
            }
            ConvexSet::Box { lo, hi } => {
                if lo.is_empty() || lo.len() != hi.len() {
                    return Err(Error::InvalidSet("box bounds dimension mismatch".into()));
                }
                if lo.iter().zip(hi).any(|(l, h)| l > h) {
                    return Err(Error::InvalidSet("box needs lo <= hi componentwise".into()));
                }
            }
            ConvexSet::PBall { radius, center, .. } => {
                if center.is_empty() {
                    return Err(Error::InvalidSet("ball center must be nonempty".into()));
                }
                if radius.is_nan() || *radius < 0.0 {
                    return Err(Error::InvalidSet("ball radius must be nonnegative".into()));
                }
            }
            ConvexSet::Orthant { dim } => {
                if *dim == 0 {
                    return Err(Error::InvalidSet("orthant dimension must be >= 1".into()));
                }
            }
            ConvexSet::Polytope {
                halfspaces,
                feasible,
            } => {
                if halfspaces.is_empty() || feasible.is_empty() {
                    return Err(Error::InvalidSet(
                        "polytope needs halfspaces and a feasible point".into(),
                    ));
                }
                for h in halfspaces {
                    if h.a.len() != feasible.len() || rv::norm2(&h.a) == 0.0 {
                        return Err(Error::InvalidSet("polytope halfspace is malformed".into()));
                    }
                    if rv::dot(&h.a, feasible) > h.b + profile.eps_exact * (1.0 + h.b.abs()) {
                        return Err(Error::InvalidSet(
                            "polytope feasible point violates a halfspace".into(),
                        ));
                    }
                }
            }
            ConvexSet::GeneratedCone { generators } => {
                if generators.is_empty() || generators[0].is_empty() {
                    return Err(Error::InvalidSet(
                        "cone needs at least one generator".into(),
                    ));
                }
                let d = generators[0].len();
                if generators.iter().any(|g| g.len() != d) {
                    return Err(Error::InvalidSet(
                        "cone generator dimension mismatch".into(),
                    ));
                }
            }
            ConvexSet::Intersection { sets } => {
                if sets.is_empty() {
                    return Err(Error::InvalidSet(
                        "intersection needs at least one set".into(),
                    ));
                }
                let d = sets[0].dim();
                for s in sets {
                    if s.dim() != d {
                        return Err(Error::InvalidSet("intersection dimension mismatch".into()));
                    }
                    s.validate(profile)?;
                }
            }
        }
        Ok(())
    }

    /// Whether the projection backend is iterative (its output carries
    /// solver tolerance rather than rounding-level error).
    fn is_iterative(&self) -> bool {
        matches!(
            self,
            ConvexSet::Polytope { .. }
                | ConvexSet::GeneratedCone { .. }
                | ConvexSet::Intersection { .. }
        )
    }
}

/// Result of a nearest-point projection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Projection {
    pub point: Vec<f64>,
    pub distance: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Euclidean nearest point of `set` to `point`.
pub fn project(set: &ConvexSet, point: &[f64], profile: &ToleranceProfile) -> Result<Projection> {
    set.validate(profile)?;
    if point.len() != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: set.dim(),
            got: point.len(),
        });
    }
    let (q, iterations, converged) = project_inner(set, point, profile)?;
    Ok(Projection {
        distance: rv::dist2(point, &q),
        point: q,
        iterations,
        converged,
    })
}

fn project_inner(
    set: &ConvexSet,
    x: &[f64],
    profile: &ToleranceProfile,
) -> Result<(Vec<f64>, usize, bool)> {
    match set {
        ConvexSet::Halfspace { a, b } => {
            let s = rv::dot(a, x) - b;
            if s <= 0.0 {
                Ok((x.to_vec(), 0, true))
            } else {
                let aa = rv::dot(a, a);
                Ok((rv::add_scaled(x, -s / aa, a), 0, true))
            }
        }
        ConvexSet::Affine { basis, offset } => {
            if basis.is_empty() {
                return Ok((offset.clone(), 0, true));
            }
            let k = basis.len();
            let shifted = rv::sub(x, offset);
            // normal equations (B^T B) c = B^T (x - offset)
            let mut ata = vec![vec![0.0; k]; k];
            let mut atb = vec![0.0; k];
            for i in 0..k {
                for j in 0..k {
                    ata[i][j] = rv::dot(&basis[i], &basis[j]);
                }
                atb[i] = rv::dot(&basis[i], &shifted);
            }
            let m = Matrix::from_real_rows(&ata)?;
            let c = m.lu_solve(&Vector::from_real(&atb)?)?;
            let mut q = offset.clone();
            for (i, b) in basis.iter().enumerate() {
                q = rv::add_scaled(&q, c[i].re, b);
            }
            Ok((q, 0, true))
        }
        ConvexSet::Box { lo, hi } => Ok((
            x.iter()
                .zip(lo.iter().zip(hi))
                .map(|(&v, (&l, &h))| v.clamp(l, h))
                .collect(),
            0,
            true,
        )),
        ConvexSet::PBall { p, radius, center } => {
            let y = rv::sub(x, center);
            match p {
                Exponent::Finite(pv) if *pv == 2.0 => {
                    let n = rv::norm2(&y);
                    if n <= *radius {
                        Ok((x.to_vec(), 0, true))
                    } else {
                        Ok((rv::add_scaled(center, radius / n, &y), 0, true))
                    }
                }
                Exponent::Infinity => Ok((
                    y.iter()
                        .zip(center)
                        .map(|(&yi, &c)| c + yi.clamp(-radius, *radius))
                        .collect(),
                    0,
                    true,
                )),
                Exponent::Finite(pv) if *pv == 1.0 => {
                    let l1: f64 = y.iter().map(|v| v.abs()).sum();
                    if l1 <= *radius {
                        return Ok((x.to_vec(), 0, true));
                    }
                    // sort-based simplex projection of |y| onto the l1 sphere
                    let mut mags: Vec<f64> = y.iter().map(|v| v.abs()).collect();
                    mags.sort_by(|a, b| b.total_cmp(a));
                    let mut acc = 0.0;
                    let mut tau = 0.0;
                    for (k, &m) in mags.iter().enumerate() {
                        acc += m;
                        let t = (acc - radius) / (k as f64 + 1.0);
                        if t < m {
                            tau = t;
                        } else {
                            break;
                        }
                    }
                    let q: Vec<f64> = y
                        .iter()
                        .zip(center)
                        .map(|(&yi, &c)| c + yi.signum() * (yi.abs() - tau).max(0.0))
                        .collect();
                    Ok((q, 0, true))
                }
                _ => Err(Error::Unsupported(format!(
                    "projection onto a p-ball is implemented for p in {{1, 2, inf}}, got p={p}"
                ))),
            }
        }
        ConvexSet::Orthant { .. } => Ok((x.iter().map(|&v| v.max(0.0)).collect(), 0, true)),
        ConvexSet::Polytope { halfspaces, .. } => {
            let components: Vec<ConvexSet> = halfspaces
                .iter()
                .map(|h| ConvexSet::Halfspace {
                    a: h.a.clone(),
                    b: h.b,
                })
                .collect();
            dykstra(&components, x, profile)
        }
        ConvexSet::GeneratedCone { generators } => nnls_cone(generators, x, profile),
        ConvexSet::Intersection { sets } => dykstra(sets, x, profile),
    }
}

/// Dykstra's alternating projections with correction terms. Successive
/// x-iterates alone can stall on a plateau while the corrections still
/// drift, so the stop requires the whole state (iterate and correction
/// vectors) to move by at most `eps_iter` over a full cycle.
fn dykstra(
    components: &[ConvexSet],
    x0: &[f64],
    profile: &ToleranceProfile,
) -> Result<(Vec<f64>, usize, bool)> {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut corrections = vec![vec![0.0; n]; components.len()];
    for cycle in 1..=profile.max_iter {
        let x_before = x.clone();
        let mut correction_shift = 0.0f64;
        for (set, corr) in components.iter().zip(corrections.iter_mut()) {
            let y = rv::add(&x, corr);
            let (proj, _, ok) = project_inner(set, &y, profile)?;
            if !ok {
                return Ok((proj, cycle, false));
            }
            let new_corr = rv::sub(&y, &proj);
            correction_shift += rv::dist2(&new_corr, corr);
            *corr = new_corr;
            x = proj;
        }
        if rv::dist2(&x, &x_before) + correction_shift <= profile.eps_iter {
            return Ok((x, cycle, true));
        }
    }
    Ok((x, profile.max_iter, false))
}

/// Projection onto `{ G c : c >= 0 }` by Lawson–Hanson active-set
/// nonnegative least squares on the generator coefficients.
fn nnls_cone(
    generators: &[Vec<f64>],
    x: &[f64],
    profile: &ToleranceProfile,
) -> Result<(Vec<f64>, usize, bool)> {
    let k = generators.len();
    let scale = 1.0 + rv::norm2(x);
    let tol = profile.eps_iter * scale;
    let mut coeff = vec![0.0f64; k];
    let mut passive = vec![false; k];
    let reconstruct = |c: &[f64]| -> Vec<f64> {
        let mut q = vec![0.0; x.len()];
        for (ci, g) in c.iter().zip(generators) {
            q = rv::add_scaled(&q, *ci, g);
        }
        q
    };

    for iter in 1..=profile.max_iter {
        let q = reconstruct(&coeff);
        let r = rv::sub(x, &q);
        let mut best: Option<(usize, f64)> = None;
        for j in 0..k {
            if passive[j] {
                continue;
            }
            let g = rv::dot(generators[j].as_slice(), &r);
            if g > tol && best.map(|(_, bg)| g > bg).unwrap_or(true) {
                best = Some((j, g));
            }
        }
        let Some((jstar, _)) = best else {
            return Ok((q, iter, true));
        };
        passive[jstar] = true;

        // inner loop: unconstrained LS on the passive set, stepping back
        // whenever a coefficient would cross zero
        loop {
            let idx: Vec<usize> = (0..k).filter(|&j| passive[j]).collect();
            let m = idx.len();
            let mut ata = vec![vec![0.0; m]; m];
            let mut atb = vec![0.0; m];
            for (r_, &i) in idx.iter().enumerate() {
                for (c_, &j) in idx.iter().enumerate() {
                    ata[r_][c_] = rv::dot(&generators[i], &generators[j]);
                }
                atb[r_] = rv::dot(&generators[i], x);
            }
            let solved = Matrix::from_real_rows(&ata)
                .and_then(|mm| Vector::from_real(&atb).and_then(|b| mm.lu_solve(&b)));
            let z = match solved {
                Ok(z) => z,
                Err(_) => {
                    // dependent generator adds nothing; drop it for good
                    passive[jstar] = false;
                    break;
                }
            };
            if (0..m).all(|i| z[i].re > tol * 1e-3) {
                for (i, &j) in idx.iter().enumerate() {
                    coeff[j] = z[i].re;
                }
                break;
            }
            // step from coeff toward z until the first coefficient hits zero
            let mut alpha = 1.0f64;
            for (i, &j) in idx.iter().enumerate() {
                if z[i].re <= tol * 1e-3 {
                    let denom = coeff[j] - z[i].re;
                    if denom > 0.0 {
                        alpha = alpha.min(coeff[j] / denom);
                    }
                }
            }
            for (i, &j) in idx.iter().enumerate() {
                coeff[j] += alpha * (z[i].re - coeff[j]);
                if coeff[j] <= tol * 1e-3 {
                    coeff[j] = 0.0;
                    passive[j] = false;
                }
            }
        }
    }
    Ok((reconstruct(&coeff), profile.max_iter, false))
}

/// Membership: Euclidean distance to the set at most `eps_iter`.
pub fn membership(set: &ConvexSet, point: &[f64], profile: &ToleranceProfile) -> Result<bool> {
    Ok(project(set, point, profile)?.distance <= profile.eps_iter)
}

/// An affine hyperplane `{ x : <x, normal> = offset }` with unit normal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub normal: Vec<f64>,
    pub offset: f64,
}

/// Separating hyperplane through the projection `q` of an exterior
/// point, with normal `(p - q)/|p - q|`. Every set member `x` satisfies
/// `<x, normal> <= offset` while `<p, normal> > offset` strictly.
pub fn separate_point(
    set: &ConvexSet,
    point: &[f64],
    profile: &ToleranceProfile,
) -> Result<Hyperplane> {
    let proj = project(set, point, profile)?;
    if !proj.converged {
        return Err(Error::NonConvergence {
            iterations: proj.iterations,
        });
    }
    if proj.distance <= profile.eps_iter {
        return Err(Error::NoStrictSeparation);
    }
    let normal = rv::scale(&rv::sub(point, &proj.point), 1.0 / proj.distance);
    let offset = rv::dot(&normal, &proj.point);
    Ok(Hyperplane { normal, offset })
}

/// Supporting hyperplane at a boundary point via the exterior-sequence
/// limit construction: for `p_j = p + 2^{-j} d`, project to `q_j` and
/// take the inward unit direction from `p_j` to `q_j`; the last step is
/// returned. When the projection lands back on `p` (flat faces,
/// vertices) the direction degenerates to `-d/|d|`, the fallback the
/// variational inequality prescribes. The returned normal satisfies
/// `<x - p, normal> >= -eps_iter` for set members `x`.
pub fn supporting_hyperplane(
    set: &ConvexSet,
    boundary_point: &[f64],
    exterior_direction: &[f64],
    steps: usize,
    profile: &ToleranceProfile,
) -> Result<Hyperplane> {
    if steps == 0 {
        return Err(Error::InvalidSet(
            "supporting hyperplane needs steps >= 1".into(),
        ));
    }
    if !membership(set, boundary_point, profile)? {
        return Err(Error::NotInSet);
    }
    let dnorm = rv::norm2(exterior_direction);
    if dnorm == 0.0 {
        return Err(Error::NotExterior);
    }
    let fallback = rv::scale(exterior_direction, -1.0 / dnorm);

    // numerical floor below which a projection displacement is noise
    let noise = if set.is_iterative() {
        10.0 * profile.eps_iter
    } else {
        1e3 * f64::EPSILON * (1.0 + rv::norm2(boundary_point))
    };

    let mut normal = fallback.clone();
    let mut exterior_seen = false;
    for j in 1..=steps {
        let t = 0.5f64.powi(j as i32);
        let pj = rv::add_scaled(boundary_point, t, exterior_direction);
        let proj = project(set, &pj, profile)?;
        if proj.distance > noise {
            exterior_seen = true;
            normal = rv::scale(&rv::sub(&proj.point, &pj), 1.0 / proj.distance);
        } else {
            normal = fallback.clone();
        }
    }
    if !exterior_seen {
        return Err(Error::NotExterior);
    }
    let offset = rv::dot(&normal, boundary_point);
    Ok(Hyperplane { normal, offset })
}

/// Separation of a point from a closed convex cone. The returned unit
/// vector pairs nonnegatively with the cone, pairs to zero with the
/// nearest point `q`, and `<v, z> = -|z - q|` is strictly negative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeSeparation {
    pub normal: Vec<f64>,
    pub nearest: Vec<f64>,
}

pub fn separate_cone(
    cone: &ConvexSet,
    z: &[f64],
    profile: &ToleranceProfile,
) -> Result<ConeSeparation> {
    match cone {
        ConvexSet::Orthant { .. } | ConvexSet::GeneratedCone { .. } => {}
        _ => {
            return Err(Error::InvalidSet(
                "cone separation expects an orthant or a generated cone".into(),
            ))
        }
    }
    let proj = project(cone, z, profile)?;
    if !proj.converged {
        return Err(Error::NonConvergence {
            iterations: proj.iterations,
        });
    }
    if proj.distance <= profile.eps_iter {
        return Err(Error::NoStrictSeparation);
    }
    let normal = rv::scale(&rv::sub(&proj.point, z), 1.0 / proj.distance);
    Ok(ConeSeparation {
        normal,
        nearest: proj.point,
    })
}

/// Sample set members by projecting scaled Gaussian points.
pub fn sample_members(
    set: &ConvexSet,
    count: usize,
    scale: f64,
    seed: u64,
    profile: &ToleranceProfile,
) -> Result<Vec<Vec<f64>>> {
    let mut rng = sampling::rng(seed);
    let dim = set.dim();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let g = rv::scale(&sampling::gaussian_real_vec(&mut rng, dim), scale);
        out.push(project(set, &g, profile)?.point);
    }
    Ok(out)
}

/// Spot-check that the set equals the intersection of the halfspaces
/// containing it: exterior probes are strictly cut off by their
/// separating hyperplanes while sampled members are retained by every
/// generated hyperplane.
pub fn halfspace_hull_check(
    set: &ConvexSet,
    probes: usize,
    seed: u64,
    profile: &ToleranceProfile,
) -> Result<bool> {
    let dim = set.dim();
    let anchor = project(set, &vec![0.0; dim], profile)?.point;
    let members = sample_members(set, 64, 2.0, seed ^ 0x5eed, profile)?;
    let mut rng = sampling::rng(seed);
    let mut found = 0;
    let mut attempts = 0;
    while found < probes && attempts < probes * 50 {
        attempts += 1;
        let dir = sampling::gaussian_real_vec(&mut rng, dim);
        let radius = 0.5 + sampling::uniform(&mut rng, 0.0, 3.0);
        let candidate = rv::add_scaled(&anchor, radius, &dir);
        let proj = project(set, &candidate, profile)?;
        if proj.distance <= 10.0 * profile.eps_iter {
            continue; // landed inside; try again
        }
        found += 1;
        let h = separate_point(set, &candidate, profile)?;
        if rv::dot(&h.normal, &candidate) <= h.offset {
            return Ok(false);
        }
        for m in &members {
            if rv::dot(&h.normal, m) > h.offset + profile.eps_iter {
                return Ok(false);
            }
        }
    }
    Ok(found > 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn prof() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    #[test]
    fn project_halfspace_example() {
        let set = ConvexSet::Halfspace {
            a: vec![1.0, 0.0],
            b: 0.0,
        };
        let p = project(&set, &[2.0, 3.0], &prof()).unwrap();
        assert_eq!(p.point, vec![0.0, 3.0]);
        assert_eq!(p.distance, 2.0);
        // interior point is fixed
        let p = project(&set, &[-1.0, 5.0], &prof()).unwrap();
        assert_eq!(p.point, vec![-1.0, 5.0]);
        assert_eq!(p.distance, 0.0);
    }

    #[test]
    fn project_box_example() {
        let set = ConvexSet::Box {
            lo: vec![0.0, 0.0],
            hi: vec![1.0, 1.0],
        };
        let p = project(&set, &[2.0, -1.0], &prof()).unwrap();
        assert_eq!(p.point, vec![1.0, 0.0]);
        assert_relative_eq!(p.distance, 2f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn project_l1_ball_example() {
        let set = ConvexSet::PBall {
            p: Exponent::ONE,
            radius: 1.0,
            center: vec![0.0, 0.0],
        };
        let p = project(&set, &[1.0, 1.0], &prof()).unwrap();
        assert_relative_eq!(p.point[0], 0.5, max_relative = 1e-12);
        assert_relative_eq!(p.point[1], 0.5, max_relative = 1e-12);
        assert_relative_eq!(p.distance, 2f64.sqrt() / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn project_affine_line() {
        // line through origin spanned by (1, 1)
        let set = ConvexSet::Affine {
            basis: vec![vec![1.0, 1.0]],
            offset: vec![0.0, 0.0],
        };
        let p = project(&set, &[2.0, 0.0], &prof()).unwrap();
        assert_relative_eq!(p.point[0], 1.0, max_relative = 1e-12);
        assert_relative_eq!(p.point[1], 1.0, max_relative = 1e-12);
        // single point set via empty basis
        let pt = ConvexSet::Affine {
            basis: vec![],
            offset: vec![3.0, 4.0],
        };
        let p = project(&pt, &[0.0, 0.0], &prof()).unwrap();
        assert_eq!(p.point, vec![3.0, 4.0]);
        assert_eq!(p.distance, 5.0);
    }

    #[test]
    fn project_polytope_matches_direct_region() {
        // triangle x >= 0, y >= 0, x + y <= 1
        let set = ConvexSet::Polytope {
            halfspaces: vec![
                HalfspaceData {
                    a: vec![-1.0, 0.0],
                    b: 0.0,
                },
                HalfspaceData {
                    a: vec![0.0, -1.0],
                    b: 0.0,
                },
                HalfspaceData {
                    a: vec![1.0, 1.0],
                    b: 1.0,
                },
            ],
            feasible: vec![0.25, 0.25],
        };
        let profile = ToleranceProfile {
            eps_iter: 1e-10,
            ..prof()
        };
        let p = project(&set, &[1.0, 1.0], &profile).unwrap();
        assert!(p.converged);
        assert_relative_eq!(p.point[0], 0.5, epsilon = 1e-8);
        assert_relative_eq!(p.point[1], 0.5, epsilon = 1e-8);
        // variational inequality at a few members
        for m in sample_members(&set, 50, 1.0, 3, &profile).unwrap() {
            let lhs = rv::dot(&rv::sub(&m, &p.point), &rv::sub(&[1.0, 1.0], &p.point));
            assert!(lhs <= 1e-8, "variational inequality violated: {lhs}");
        }
    }

    #[test]
    fn project_generated_cone() {
        let cone = ConvexSet::GeneratedCone {
            generators: vec![vec![1.0, 0.0], vec![1.0, 1.0]],
        };
        // inside: fixed
        let p = project(&cone, &[2.0, 1.0], &prof()).unwrap();
        assert!(p.distance < 1e-10);
        // below the x-axis: projects onto the (1,0) ray
        let p = project(&cone, &[1.0, -1.0], &prof()).unwrap();
        assert_relative_eq!(p.point[0], 1.0, epsilon = 1e-9);
        assert!(p.point[1].abs() < 1e-9);
        // opposite the cone: projects to the origin
        let p = project(&cone, &[-2.0, -1.0], &prof()).unwrap();
        assert!(rv::norm2(&p.point) < 1e-9);
    }

    #[test]
    fn separate_point_examples() {
        let ball = ConvexSet::PBall {
            p: Exponent::TWO,
            radius: 1.0,
            center: vec![0.0, 0.0],
        };
        let h = separate_point(&ball, &[2.0, 0.0], &prof()).unwrap();
        assert_relative_eq!(h.normal[0], 1.0, max_relative = 1e-12);
        assert!(h.normal[1].abs() < 1e-12);
        assert_relative_eq!(h.offset, 1.0, max_relative = 1e-12);

        let orthant = ConvexSet::Orthant { dim: 2 };
        let h = separate_point(&orthant, &[-1.0, -1.0], &prof()).unwrap();
        let s = -1.0 / 2f64.sqrt();
        assert_relative_eq!(h.normal[0], s, max_relative = 1e-12);
        assert_relative_eq!(h.normal[1], s, max_relative = 1e-12);
        assert!(h.offset.abs() < 1e-12);

        // interior point: no strict separation
        assert_eq!(
            separate_point(&ball, &[0.1, 0.2], &prof()).unwrap_err(),
            Error::NoStrictSeparation
        );
    }

    #[test]
    fn supporting_hyperplane_examples() {
        let profile = prof();
        // l-inf ball at a face point
        let cube = ConvexSet::PBall {
            p: Exponent::INF,
            radius: 1.0,
            center: vec![0.0, 0.0],
        };
        let h = supporting_hyperplane(&cube, &[1.0, 0.5], &[1.0, 0.0], 40, &profile).unwrap();
        assert_relative_eq!(h.normal[0], -1.0, max_relative = 1e-9);
        assert!(h.normal[1].abs() < 1e-9);

        // l2 ball at the north pole
        let ball = ConvexSet::PBall {
            p: Exponent::TWO,
            radius: 1.0,
            center: vec![0.0, 0.0],
        };
        let h = supporting_hyperplane(&ball, &[0.0, 1.0], &[0.0, 1.0], 40, &profile).unwrap();
        assert!(h.normal[0].abs() < 1e-9);
        assert_relative_eq!(h.normal[1], -1.0, max_relative = 1e-9);

        // box vertex with diagonal exterior direction
        let square = ConvexSet::Box {
            lo: vec![0.0, 0.0],
            hi: vec![1.0, 1.0],
        };
        let h = supporting_hyperplane(&square, &[1.0, 1.0], &[1.0, 1.0], 40, &profile).unwrap();
        let s = -1.0 / 2f64.sqrt();
        assert_relative_eq!(h.normal[0], s, max_relative = 1e-12);
        assert_relative_eq!(h.normal[1], s, max_relative = 1e-12);

        // the half-space condition <x - p, v> >= 0 on members
        for m in sample_members(&square, 100, 1.5, 5, &profile).unwrap() {
            assert!(rv::dot(&rv::sub(&m, &[1.0, 1.0]), &h.normal) >= -1e-9);
        }

        // interior direction is rejected
        assert!(matches!(
            supporting_hyperplane(&square, &[1.0, 0.5], &[-1.0, 0.0], 40, &profile),
            Err(Error::NotExterior)
        ));
        // non-member boundary point is rejected
        assert!(matches!(
            supporting_hyperplane(&square, &[2.0, 0.0], &[1.0, 0.0], 40, &profile),
            Err(Error::NotInSet)
        ));
    }

    #[test]
    fn supporting_hyperplane_curved_offset_direction() {
        // exterior direction not parallel to the true normal: the limit
        // still recovers the inward normal at the boundary point.
        let ball = ConvexSet::PBall {
            p: Exponent::TWO,
            radius: 1.0,
            center: vec![0.0, 0.0],
        };
        let h = supporting_hyperplane(&ball, &[0.0, 1.0], &[1.0, 1.0], 40, &prof()).unwrap();
        for m in sample_members(&ball, 200, 1.5, 11, &prof()).unwrap() {
            let v = rv::dot(&rv::sub(&m, &[0.0, 1.0]), &h.normal);
            assert!(
                v >= -1e-7,
                "half-space condition violated: {v} normal {:?}",
                h.normal
            );
        }
    }

    #[test]
    fn separate_cone_examples() {
        let orthant = ConvexSet::Orthant { dim: 2 };
        let s = separate_cone(&orthant, &[-1.0, 1.0], &prof()).unwrap();
        assert_eq!(s.nearest, vec![0.0, 1.0]);
        assert_relative_eq!(s.normal[0], 1.0, max_relative = 1e-12);
        assert!(s.normal[1].abs() < 1e-12);
        assert_relative_eq!(rv::dot(&s.normal, &[-1.0, 1.0]), -1.0, max_relative = 1e-12);
        assert!(rv::dot(&s.normal, &s.nearest).abs() < 1e-12);

        let halfline = ConvexSet::GeneratedCone {
            generators: vec![vec![1.0, 0.0]],
        };
        let s = separate_cone(&halfline, &[0.0, 1.0], &prof()).unwrap();
        assert!(rv::norm2(&s.nearest) < 1e-9);
        assert_relative_eq!(s.normal[1], -1.0, max_relative = 1e-9);

        assert_eq!(
            separate_cone(&orthant, &[1.0, 1.0], &prof()).unwrap_err(),
            Error::NoStrictSeparation
        );
    }

    #[test]
    fn hull_check_on_examples() {
        let profile = prof();
        let ball = ConvexSet::PBall {
            p: Exponent::TWO,
            radius: 1.0,
            center: vec![0.0, 0.0],
        };
        assert!(halfspace_hull_check(&ball, 100, 7, &profile).unwrap());

        let square = ConvexSet::Box {
            lo: vec![0.0, 0.0],
            hi: vec![1.0, 1.0],
        };
        assert!(halfspace_hull_check(&square, 50, 8, &profile).unwrap());

        // single point: all normals appear
        let point = ConvexSet::Box {
            lo: vec![0.0, 0.0],
            hi: vec![0.0, 0.0],
        };
        assert!(halfspace_hull_check(&point, 50, 9, &profile).unwrap());
    }

    #[test]
    fn validation_rejects_malformed_sets() {
        let p = prof();
        assert!(ConvexSet::Halfspace {
            a: vec![0.0, 0.0],
            b: 1.0
        }
        .validate(&p)
        .is_err());
        assert!(ConvexSet::Box {
            lo: vec![1.0],
            hi: vec![0.0]
        }
        .validate(&p)
        .is_err());
        assert!(ConvexSet::Polytope {
            halfspaces: vec![HalfspaceData {
                a: vec![1.0],
                b: -1.0
            }],
            feasible: vec![0.0],
        }
        .validate(&p)
        .is_err());
    }

    #[test]
    fn set_json_round_trip() {
        let set = ConvexSet::PBall {
            p: Exponent::ONE,
            radius: 1.0,
            center: vec![0.0, 0.0],
        };
        let s = serde_json::to_string(&set).unwrap();
        assert_eq!(
            s,
            r#"{"kind":"pball","p":1.0,"radius":1.0,"center":[0.0,0.0]}"#
        );
        assert_eq!(serde_json::from_str::<ConvexSet>(&s).unwrap(), set);

        let set = ConvexSet::Intersection {
            sets: vec![
                ConvexSet::Orthant { dim: 2 },
                ConvexSet::Halfspace {
                    a: vec![1.0, 1.0],
                    b: 1.0,
                },
            ],
        };
        let s = serde_json::to_string(&set).unwrap();
        assert_eq!(serde_json::from_str::<ConvexSet>(&s).unwrap(), set);
    }
}
