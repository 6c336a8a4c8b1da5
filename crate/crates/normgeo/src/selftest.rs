//! Deterministic runtime battery exercising every invariant the modules
//! promise. Driven by a single seed; identical seeds give identical
//! reports.

use crate::cones::{self, SelfAdjointMap};
use crate::convexgeo::{self, ConvexSet, HalfspaceData};
use crate::duality::{attaining_vector, norming_functional, Functional};
use crate::matrix::Matrix;
use crate::opnorm::{self, LinearMap};
use crate::quotient::{self, Subspace};
use crate::realvec as rv;
use crate::sampling;
use crate::scalar::{Mode, Scalar};
use crate::spaces::{self, p_norm, Exponent, NormSpec};
use crate::tolerance::ToleranceProfile;
use crate::tracenorm;
use crate::vecfun::{self, VectorField};
use crate::vector::Vector;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

impl std::str::FromStr for Level {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            other => Err(crate::Error::Unsupported(format!(
                "unknown level '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    /// First few failure descriptions, each a minimal witness.
    pub failures: Vec<String>,
}

impl SuiteResult {
    fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            passed: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.failures.len() < 5 {
                self.failures.push(witness());
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelfTestReport {
    pub seed: u64,
    pub level: Level,
    pub suites: Vec<SuiteResult>,
    pub total_passed: usize,
    pub total_failed: usize,
    pub ok: bool,
}

const P_GRID: [Exponent; 5] = [
    Exponent::ONE,
    Exponent::Finite(1.5),
    Exponent::TWO,
    Exponent::Finite(3.0),
    Exponent::Infinity,
];

pub fn selftest(seed: u64, level: Level) -> SelfTestReport {
    let profile = ToleranceProfile::default();
    let suites = vec![
        spaces_suite(seed, level, &profile),
        duality_suite(seed, level, &profile),
        convexgeo_suite(seed, level, &profile),
        cones_suite(seed, level, &profile),
        opnorm_suite(seed, level, &profile),
        tracenorm_suite(seed, level, &profile),
        quotient_suite(seed, level, &profile),
        vecfun_suite(seed, level, &profile),
    ];
    let total_passed = suites.iter().map(|s| s.passed).sum();
    let total_failed = suites.iter().map(|s| s.failed).sum();
    SelfTestReport {
        seed,
        level,
        suites,
        total_passed,
        total_failed,
        ok: total_failed == 0,
    }
}

fn suite_seed(seed: u64, index: u64) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(index)
}

fn trials(level: Level, quick: usize, full: usize) -> usize {
    match level {
        Level::Quick => quick,
        Level::Full => full,
    }
}

fn spaces_suite(seed: u64, level: Level, profile: &ToleranceProfile) -> SuiteResult {
    let mut s = SuiteResult::new("spaces");
    let mut rng = sampling::rng(suite_seed(seed, 1));
    let n_sweep = trials(level, 400, 10_000);

    for mode in [Mode::Real, Mode::Complex] {
        for p in P_GRID {
            for _ in 0..n_sweep / (P_GRID.len() * 2) {
                let dim = 2 + sampling::uniform_index(&mut rng, 6);
                let v = sampling::gaussian_vector(&mut rng, dim, mode);
                let w = sampling::gaussian_vector(&mut rng, dim, mode);

                let h = spaces::holder_check(&v, &w, p, profile).unwrap();
                s.check(h.holds, || {
                    format!("holder p={p} lhs={:.6e} rhs={:.6e}", h.lhs, h.rhs)
                });
                let m = spaces::minkowski_check(&v, &w, p, profile).unwrap();
                s.check(m.holds, || {
                    format!("minkowski p={p} lhs={:.6e} rhs={:.6e}", m.lhs, m.rhs)
                });

                // homogeneity under a random scalar
                let alpha = sampling::gaussian_scalar(&mut rng, mode);
                let lhs = p_norm(&v.scale(alpha), p);
                let rhs = alpha.norm() * p_norm(&v, p);
                s.check(
                    (lhs - rhs).abs() <= profile.eps_exact * rhs.max(1.0),
                    || format!("homogeneity p={p} {lhs:.6e} vs {rhs:.6e}"),
                );

                // Cauchy-Schwarz and the reverse triangle inequality
                let cs_l = v.hdot(&w).unwrap().norm();
                let cs_r = v.norm2() * w.norm2();
                s.check(cs_l <= cs_r + profile.eps_exact * cs_r.max(1.0), || {
                    format!("cauchy-schwarz {cs_l:.6e} vs {cs_r:.6e}")
                });
                let rt_l = (p_norm(&v, p) - p_norm(&w, p)).abs();
                let rt_r = p_norm(&v.sub(&w).unwrap(), p);
                s.check(rt_l <= rt_r + profile.eps_exact * rt_r.max(1.0), || {
                    format!("reverse-triangle p={p} {rt_l:.6e} vs {rt_r:.6e}")
                });
            }
        }
    }

    // Young's inequality on nonnegative pairs
    for _ in 0..trials(level, 200, 2_000) {
        let a = sampling::uniform(&mut rng, 0.0, 4.0);
        let b = sampling::uniform(&mut rng, 0.0, 4.0);
        let p = sampling::uniform(&mut rng, 1.1, 6.0);
        let q = p / (p - 1.0);
        let y = spaces::young_bound(a, b, p, q, profile).unwrap();
        s.check(y.holds, || format!("young a={a:.3} b={b:.3} p={p:.3}"));
    }

    // both norm-comparison bounds
    for (p, q) in [
        (Exponent::ONE, Exponent::TWO),
        (Exponent::TWO, Exponent::INF),
        (Exponent::Finite(1.5), Exponent::Finite(3.0)),
    ] {
        for _ in 0..trials(level, 100, 2_000) {
            let dim = 2 + sampling::uniform_index(&mut rng, 6);
            let v = sampling::gaussian_vector(&mut rng, dim, Mode::Real);
            let c = spaces::norm_comparison(&v, p, q, profile).unwrap();
            s.check(c.holds, || format!("norm-comparison p={p} q={q}"));
        }
    }

    // positive definiteness is exact
    s.check(
        p_norm(&Vector::zero(4).unwrap(), Exponent::Finite(1.5)) == 0.0,
        || "p-norm of zero".into(),
    );

    // Holder equality via the norming vector from the duality module
    for p in P_GRID {
        for _ in 0..trials(level, 40, 200) {
            let v = sampling::gaussian_vector(&mut rng, 4, Mode::Complex);
            if v.is_zero() {
                continue;
            }
            let f = norming_functional(&v, &NormSpec::p(p)).unwrap();
            let h = spaces::holder_check(&f.weights, &v, p.conjugate(), profile).unwrap();
            s.check((h.lhs - h.rhs).abs() <= 1e-9 * h.rhs.max(1.0), || {
                format!("holder equality p={p} lhs={:.6e} rhs={:.6e}", h.lhs, h.rhs)
            });
        }
    }

    // ball convexity for the supported norms
    for p in P_GRID {
        let c = spaces::check_ball_convexity(
            &NormSpec::p(p),
            3,
            Mode::Real,
            trials(level, 300, 2_000),
            suite_seed(seed, 17),
            profile,
        );
        s.check(c.ok, || format!("ball convexity p={p}"));
    }
    s
}

fn duality_suite(seed: u64, level: Level, profile: &ToleranceProfile) -> SuiteResult {
    let mut s = SuiteResult::new("duality");
    let mut rng = sampling::rng(suite_seed(seed, 2));
    let n = trials(level, 150, 1_000);

    for mode in [Mode::Real, Mode::Complex] {
        for p in P_GRID {
            let spec = NormSpec::p(p);
            for _ in 0..n / (P_GRID.len() * 2) {
                let dim = 2 + sampling::uniform_index(&mut rng, 5);
                let w = sampling::gaussian_vector(&mut rng, dim, mode);
                if w.is_zero() {
                    continue;
                }
                let f = Functional::new(w.clone(), spec.clone());
                let dual = f.dual_norm().unwrap().lower;

                // generalized Cauchy-Schwarz
                let v = sampling::gaussian_vector(&mut rng, dim, mode);
                let lhs = f.evaluate(&v).unwrap().norm();
                let rhs = dual * p_norm(&v, p);
                s.check(lhs <= rhs + profile.eps_exact * rhs.max(1.0), || {
                    format!("generalized CS p={p} {lhs:.6e} vs {rhs:.6e}")
                });

                // double duality: dual norm of the dual weights recovers |w|_p
                let g = Functional::new(w.clone(), spec.dual().unwrap());
                let dd = g.dual_norm().unwrap().lower;
                s.check(
                    (dd - p_norm(&w, p)).abs() <= profile.eps_iter * p_norm(&w, p).max(1.0),
                    || format!("double duality p={p}"),
                );

                // attainment
                let vstar = attaining_vector(&f).unwrap();
                let attained = f.evaluate(&vstar).unwrap().norm();
                s.check(
                    (attained - dual).abs() <= 1e-9 * dual.max(1.0)
                        && (p_norm(&vstar, p) - 1.0).abs() <= 1e-9,
                    || format!("attainment p={p} {attained:.6e} vs {dual:.6e}"),
                );

                // norming functional and argument invariance
                let v = sampling::gaussian_vector(&mut rng, dim, mode);
                if v.is_zero() {
                    continue;
                }
                let nf = norming_functional(&v, &spec).unwrap();
                let nv = p_norm(&v, p);
                let ev = nf.evaluate(&v).unwrap();
                s.check(
                    (ev.re - nv).abs() <= 1e-9 * nv.max(1.0) && ev.im.abs() <= 1e-9 * nv.max(1.0),
                    || format!("norming attains p={p}"),
                );
                s.check((nf.dual_norm().unwrap().lower - 1.0).abs() <= 1e-8, || {
                    format!("norming has dual norm 1, p={p}")
                });
                let alpha = sampling::gaussian_scalar(&mut rng, mode);
                if alpha.norm() > 1e-6 {
                    let nf2 = norming_functional(&v.scale(alpha), &spec).unwrap();
                    let achieved = nf2.evaluate(&v.scale(alpha)).unwrap().norm();
                    s.check(
                        (achieved - alpha.norm() * nv).abs() <= 1e-8 * (alpha.norm() * nv).max(1.0)
                            && (nf2.dual_norm().unwrap().lower - 1.0).abs() <= 1e-8,
                        || format!("argument invariance p={p}"),
                    );
                }
            }
        }
    }
    s
}

fn convexgeo_suite(seed: u64, level: Level, profile: &ToleranceProfile) -> SuiteResult {
    let mut s = SuiteResult::new("convexgeo");
    let mut rng = sampling::rng(suite_seed(seed, 3));
    let sets: Vec<ConvexSet> = vec![
        ConvexSet::Box {
            lo: vec![-1.0, 0.0],
            hi: vec![1.0, 2.0],
        },
        ConvexSet::PBall {
            p: Exponent::ONE,
            radius: 1.5,
            center: vec![0.5, 0.0],
        },
        ConvexSet::PBall {
            p: Exponent::TWO,
            radius: 1.0,
            center: vec![0.0, 0.0],
        },
        ConvexSet::PBall {
            p: Exponent::INF,
            radius: 1.0,
            center: vec![0.0, 1.0],
        },
        ConvexSet::Orthant { dim: 3 },
        ConvexSet::Halfspace {
            a: vec![1.0, -2.0, 0.5],
            b: 1.0,
        },
        ConvexSet::Affine {
            basis: vec![vec![1.0, 1.0, 0.0]],
            offset: vec![0.0, 0.0, 1.0],
        },
        ConvexSet::Polytope {
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
            feasible: vec![0.2, 0.2],
        },
        ConvexSet::GeneratedCone {
            generators: vec![vec![1.0, 0.0], vec![1.0, 1.0]],
        },
    ];
    let n = trials(level, 30, 200);

    for set in &sets {
        let dim = set.dim();
        for _ in 0..n {
            let x = rv::scale(&sampling::gaussian_real_vec(&mut rng, dim), 2.0);
            let proj = convexgeo::project(set, &x, profile).unwrap();

            // idempotence
            let again = convexgeo::project(set, &proj.point, profile).unwrap();
            s.check(again.distance <= 10.0 * profile.eps_iter, || {
                format!("idempotence distance {:.3e}", again.distance)
            });

            // nonexpansiveness
            let y = rv::scale(&sampling::gaussian_real_vec(&mut rng, dim), 2.0);
            let projy = convexgeo::project(set, &y, profile).unwrap();
            let lhs = rv::dist2(&proj.point, &projy.point);
            let rhs = rv::dist2(&x, &y);
            s.check(lhs <= rhs + 10.0 * profile.eps_iter, || {
                format!("nonexpansive {lhs:.6e} vs {rhs:.6e}")
            });

            // variational inequality against sampled members
            let member = {
                let g = rv::scale(&sampling::gaussian_real_vec(&mut rng, dim), 1.5);
                convexgeo::project(set, &g, profile).unwrap().point
            };
            let vi = rv::dot(&rv::sub(&member, &proj.point), &rv::sub(&x, &proj.point));
            s.check(vi <= 10.0 * profile.eps_iter, || {
                format!("variational inequality {vi:.3e}")
            });
        }
    }

    // cone separation conclusions
    let cones: Vec<ConvexSet> = vec![
        ConvexSet::Orthant { dim: 3 },
        ConvexSet::GeneratedCone {
            generators: vec![vec![1.0, 0.0], vec![1.0, 1.0]],
        },
    ];
    for cone in &cones {
        let dim = cone.dim();
        let mut done = 0;
        while done < n {
            let z = rv::scale(&sampling::gaussian_real_vec(&mut rng, dim), 2.0);
            match convexgeo::separate_cone(cone, &z, profile) {
                Err(_) => continue,
                Ok(sep) => {
                    done += 1;
                    let q = &sep.nearest;
                    let v = &sep.normal;
                    let dist = rv::dist2(&z, q);
                    s.check((rv::norm2(v) - 1.0).abs() <= 1e-9, || {
                        "cone: unit normal".into()
                    });
                    s.check(rv::dot(v, q).abs() <= 1e-7 * (1.0 + rv::norm2(q)), || {
                        format!("cone: <v,q> = {:.3e}", rv::dot(v, q))
                    });
                    s.check((rv::dot(v, &z) + dist).abs() <= 1e-7 * (1.0 + dist), || {
                        "cone: <v,z> vs -dist".into()
                    });
                    let member = {
                        let g = rv::scale(&sampling::gaussian_real_vec(&mut rng, dim), 1.5);
                        convexgeo::project(cone, &g, profile).unwrap().point
                    };
                    s.check(
                        rv::dot(v, &member) >= -1e-7 * (1.0 + rv::norm2(&member)),
                        || "cone: nonnegativity on members".into(),
                    );
                }
            }
        }
    }

    // supporting hyperplanes at boundary points
    let boundary_cases: Vec<(ConvexSet, Vec<f64>, Vec<f64>)> = vec![
        (
            ConvexSet::PBall {
                p: Exponent::INF,
                radius: 1.0,
                center: vec![0.0, 0.0],
            },
            vec![1.0, 0.5],
            vec![1.0, 0.0],
        ),
        (
            ConvexSet::PBall {
                p: Exponent::TWO,
                radius: 1.0,
                center: vec![0.0, 0.0],
            },
            vec![0.0, 1.0],
            vec![0.4, 1.0],
        ),
        (
            ConvexSet::Box {
                lo: vec![0.0, 0.0],
                hi: vec![1.0, 1.0],
            },
            vec![1.0, 1.0],
            vec![1.0, 1.0],
        ),
    ];
    for (set, point, dir) in &boundary_cases {
        let h = convexgeo::supporting_hyperplane(set, point, dir, 40, profile).unwrap();
        s.check((rv::norm2(&h.normal) - 1.0).abs() <= 1e-9, || {
            "support: unit normal".into()
        });
        let members =
            convexgeo::sample_members(set, n, 1.5, suite_seed(seed, 31), profile).unwrap();
        let mut worst = f64::INFINITY;
        for m in &members {
            worst = worst.min(rv::dot(&rv::sub(m, point), &h.normal));
        }
        s.check(worst >= -profile.eps_iter, || {
            format!("support: half-space condition {worst:.3e}")
        });
    }
    s
}

fn cones_suite(seed: u64, level: Level, profile: &ToleranceProfile) -> SuiteResult {
    let mut s = SuiteResult::new("cones");
    let mut rng = sampling::rng(suite_seed(seed, 4));
    let n = trials(level, 100, 1_000);

    // PSD duality biconditional on random Hermitian matrices
    for k in 0..n {
        let dim = 2 + sampling::uniform_index(&mut rng, 5); // 2..6
        let mode = if k % 2 == 0 {
            Mode::Real
        } else {
            Mode::Complex
        };
        let mut b = Matrix::zeros(dim, dim).unwrap();
        for i in 0..dim {
            for j in 0..dim {
                b[(i, j)] = sampling::gaussian_scalar(&mut rng, mode);
            }
        }
        let h = SelfAdjointMap::new(
            b.add(&b.conj_transpose())
                .unwrap()
                .scale(Scalar::new(0.5, 0.0)),
        )
        .unwrap();
        let report =
            cones::psd_duality_check(&h, 24, suite_seed(seed, 100 + k as u64), profile).unwrap();
        s.check(report.is_psd == report.pairing_nonneg, || {
            format!("psd biconditional disagreement dim={dim}")
        });
        if !report.is_psd {
            s.check(
                report.witness.is_some() && report.witness_pairing.unwrap_or(0.0) < 0.0,
                || "negative case lacks a rank-one witness".into(),
            );
        }

        // trace pairing symmetry
        let mut c = Matrix::zeros(dim, dim).unwrap();
        for i in 0..dim {
            for j in 0..dim {
                c[(i, j)] = sampling::gaussian_scalar(&mut rng, mode);
            }
        }
        let a = SelfAdjointMap::new(
            c.add(&c.conj_transpose())
                .unwrap()
                .scale(Scalar::new(0.5, 0.0)),
        )
        .unwrap();
        let p1 = cones::trace_pairing(&h, &a).unwrap();
        let p2 = cones::trace_pairing(&a, &h).unwrap();
        s.check(
            (p1 - p2).abs() <= profile.eps_exact * (1.0 + p1.abs()),
            || format!("trace symmetry {p1:.6e} vs {p2:.6e}"),
        );
    }

    // orthant self-duality matches componentwise nonnegativity
    let spec = cones::DualConeSpec::Orthant { dim: 4 };
    for _ in 0..n {
        let w = sampling::gaussian_real_vec(&mut rng, 4);
        let member =
            cones::dual_cone_membership(&spec, &cones::ConeElement::Vector(w.clone()), profile)
                .unwrap();
        let direct = w.iter().all(|&x| x >= -profile.eps_exact);
        s.check(member == direct, || {
            format!("orthant self-duality at {w:?}")
        });
    }

    // dual cone closure under addition and nonnegative scaling
    let gen_spec = cones::DualConeSpec::Generated {
        generators: vec![
            vec![1.0, 0.0, 0.2],
            vec![0.0, 1.0, 0.2],
            vec![0.3, 0.3, 1.0],
        ],
    };
    let mut found = 0;
    while found < n / 4 {
        let w1 = sampling::gaussian_real_vec(&mut rng, 3);
        let w2 = sampling::gaussian_real_vec(&mut rng, 3);
        let in1 = cones::dual_cone_membership(
            &gen_spec,
            &cones::ConeElement::Vector(w1.clone()),
            profile,
        )
        .unwrap();
        let in2 = cones::dual_cone_membership(
            &gen_spec,
            &cones::ConeElement::Vector(w2.clone()),
            profile,
        )
        .unwrap();
        if in1 && in2 {
            found += 1;
            let sum = rv::add(&w1, &w2);
            let t = sampling::uniform(&mut rng, 0.0, 4.0);
            let scaled = rv::scale(&w1, t);
            s.check(
                cones::dual_cone_membership(&gen_spec, &cones::ConeElement::Vector(sum), profile)
                    .unwrap(),
                || "dual cone closed under addition".into(),
            );
            s.check(
                cones::dual_cone_membership(
                    &gen_spec,
                    &cones::ConeElement::Vector(scaled),
                    profile,
                )
                .unwrap(),
                || "dual cone closed under scaling".into(),
            );
        }
    }

    // bidual spot checks
    s.check(
        cones::bidual_check(
            &ConvexSet::Orthant { dim: 3 },
            trials(level, 50, 300),
            suite_seed(seed, 41),
            profile,
        )
        .unwrap(),
        || "orthant bidual".into(),
    );
    s.check(
        cones::bidual_check(
            &ConvexSet::GeneratedCone {
                generators: vec![vec![1.0, 0.0], vec![1.0, 1.0]],
            },
            trials(level, 50, 300),
            suite_seed(seed, 42),
            profile,
        )
        .unwrap(),
        || "generated cone bidual".into(),
    );
    s
}

fn opnorm_suite(seed: u64, level: Level, profile: &ToleranceProfile) -> SuiteResult {
    let mut s = SuiteResult::new("opnorm");
    let mut rng = sampling::rng(suite_seed(seed, 5));
    let maps_n = trials(level, 10, 40);
    let inputs_n = trials(level, 200, 10_000);

    let pairs = [
        (Exponent::ONE, Exponent::TWO),
        (Exponent::TWO, Exponent::TWO),
        (Exponent::Finite(1.5), Exponent::Finite(3.0)),
        (Exponent::Finite(3.0), Exponent::INF),
        (Exponent::INF, Exponent::ONE),
    ];
    for (pd, pc) in pairs {
        for _ in 0..maps_n / pairs.len() + 1 {
            let m = 2 + sampling::uniform_index(&mut rng, 3);
            let n = 2 + sampling::uniform_index(&mut rng, 3);
            let mut mat = Matrix::zeros(m, n).unwrap();
            for i in 0..m {
                for j in 0..n {
                    mat[(i, j)] = sampling::gaussian_scalar(&mut rng, Mode::Real);
                }
            }
            let t = LinearMap::new(mat, NormSpec::p(pd), NormSpec::p(pc)).unwrap();
            let c = opnorm::operator_norm(&t, profile, suite_seed(seed, 55)).unwrap();

            // defining bound
            for _ in 0..inputs_n / 40 {
                let v = sampling::gaussian_vector(&mut rng, n, Mode::Real);
                let lhs = t.codomain.norm(&t.apply(&v).unwrap()).unwrap();
                let rhs = c.upper * t.domain.norm(&v).unwrap();
                s.check(lhs <= rhs + profile.eps_iter * rhs.max(1.0), || {
                    format!("defining bound {lhs:.6e} vs {rhs:.6e} ({pd}->{pc})")
                });
            }

            // witness validity
            let w = c.witness.clone().unwrap();
            let wn = t.domain.norm(&w).unwrap();
            let achieved = t.codomain.norm(&t.apply(&w).unwrap()).unwrap();
            s.check(
                wn <= 1.0 + profile.eps_exact
                    && achieved >= c.lower - profile.eps_iter * c.lower.max(1.0),
                || format!("witness validity ({pd}->{pc})"),
            );

            // bilinear characterization: |mu(T v)| <= upper over unit pairs
            for _ in 0..10 {
                let v = sampling::gaussian_vector(&mut rng, n, Mode::Real);
                let mu = sampling::gaussian_vector(&mut rng, m, Mode::Real);
                let nv = t.domain.norm(&v).unwrap();
                let fmu = Functional::new(mu, t.codomain.clone());
                let nmu = fmu.dual_norm().unwrap().lower;
                if nv < 1e-9 || nmu < 1e-9 {
                    continue;
                }
                let val = fmu.evaluate(&t.apply(&v).unwrap()).unwrap().norm() / (nv * nmu);
                s.check(val <= c.upper + profile.eps_iter * c.upper.max(1.0), || {
                    format!("bilinear characterization ({pd}->{pc})")
                });
            }
        }
    }

    // submultiplicativity on exactly computable triples: (1 -> 1) maps
    for _ in 0..maps_n {
        let k = 3;
        let mut a = Matrix::zeros(k, k).unwrap();
        let mut b = Matrix::zeros(k, k).unwrap();
        for i in 0..k {
            for j in 0..k {
                a[(i, j)] = sampling::gaussian_scalar(&mut rng, Mode::Real);
                b[(i, j)] = sampling::gaussian_scalar(&mut rng, Mode::Real);
            }
        }
        let one = NormSpec::p(Exponent::ONE);
        let ta = LinearMap::new(a.clone(), one.clone(), one.clone()).unwrap();
        let tb = LinearMap::new(b.clone(), one.clone(), one.clone()).unwrap();
        let tab = LinearMap::new(a.mul(&b).unwrap(), one.clone(), one.clone()).unwrap();
        let na = opnorm::operator_norm(&ta, profile, 1).unwrap().lower;
        let nb = opnorm::operator_norm(&tb, profile, 1).unwrap().lower;
        let nab = opnorm::operator_norm(&tab, profile, 1).unwrap().lower;
        s.check(
            nab <= na * nb + profile.eps_iter * (na * nb).max(1.0),
            || format!("submultiplicativity {nab:.6e} vs {:.6e}", na * nb),
        );
    }

    // where both exact rules apply (1 -> inf) they agree; checked via
    // the adjoint equality (1 -> 1) vs (inf -> inf)
    for _ in 0..maps_n {
        let k = 3;
        let mut a = Matrix::zeros(k, k).unwrap();
        for i in 0..k {
            for j in 0..k {
                a[(i, j)] = sampling::gaussian_scalar(&mut rng, Mode::Real);
            }
        }
        let t = LinearMap::new(a, NormSpec::p(Exponent::ONE), NormSpec::p(Exponent::INF)).unwrap();
        let chk = opnorm::adjoint_norm_check(&t, profile, 3).unwrap();
        s.check(
            chk.consistent
                && (chk.primal.lower - chk.dual.lower).abs()
                    <= profile.eps_iter * chk.primal.lower.max(1.0),
            || "adjoint equality on exact pair".into(),
        );
    }
    s
}

fn tracenorm_suite(seed: u64, level: Level, profile: &ToleranceProfile) -> SuiteResult {
    let mut s = SuiteResult::new("tracenorm");
    let mut rng = sampling::rng(suite_seed(seed, 6));
    let n = trials(level, 15, 100);
    let l2 = NormSpec::euclidean();

    for _ in 0..n {
        let m = 2 + sampling::uniform_index(&mut rng, 2);
        let k = 2 + sampling::uniform_index(&mut rng, 2);
        let mut a = Matrix::zeros(m, k).unwrap();
        let mut b = Matrix::zeros(m, k).unwrap();
        for i in 0..m {
            for j in 0..k {
                a[(i, j)] = sampling::gaussian_scalar(&mut rng, Mode::Real);
                b[(i, j)] = sampling::gaussian_scalar(&mut rng, Mode::Real);
            }
        }
        let ta = LinearMap::new(a.clone(), l2.clone(), l2.clone()).unwrap();
        let tb = LinearMap::new(b.clone(), l2.clone(), l2.clone()).unwrap();
        let tra = tracenorm::trace_norm(&ta, profile, 1).unwrap().bounds.lower;
        let trb = tracenorm::trace_norm(&tb, profile, 1).unwrap().bounds.lower;

        // homogeneity and subadditivity on the exact path
        let alpha = sampling::gaussian(&mut rng);
        let tsc = LinearMap::new(a.scale(Scalar::new(alpha, 0.0)), l2.clone(), l2.clone()).unwrap();
        let trsc = tracenorm::trace_norm(&tsc, profile, 1)
            .unwrap()
            .bounds
            .lower;
        s.check(
            (trsc - alpha.abs() * tra).abs() <= profile.eps_iter * (alpha.abs() * tra).max(1.0),
            || "trace homogeneity".into(),
        );
        let tsum = LinearMap::new(a.add(&b).unwrap(), l2.clone(), l2.clone()).unwrap();
        let trsum = tracenorm::trace_norm(&tsum, profile, 1)
            .unwrap()
            .bounds
            .lower;
        s.check(
            trsum <= tra + trb + profile.eps_iter * (tra + trb).max(1.0),
            || "trace subadditivity".into(),
        );

        // op <= trace and pairing bound for the singular probe
        s.check(
            tracenorm::op_le_trace_check(&ta, profile, 2).unwrap(),
            || "op <= trace".into(),
        );
        let svd = a.svd(1e-13, 60).unwrap();
        if !svd.u.is_empty() {
            let mut probe = Matrix::zeros(k, m).unwrap();
            for (vi, ui) in svd.v.iter().zip(&svd.u) {
                for r in 0..k {
                    for c in 0..m {
                        probe[(r, c)] += vi[r] * ui[c].conj();
                    }
                }
            }
            let ap = LinearMap::new(probe, l2.clone(), l2.clone()).unwrap();
            let chk = tracenorm::pairing_bound_check(&ap, &ta, profile, 3).unwrap();
            s.check(chk.holds, || "pairing bound".into());
            s.check(
                (chk.lhs - chk.rhs).abs() <= profile.eps_iter * chk.rhs.max(1.0),
                || format!("duality attainment {:.6e} vs {:.6e}", chk.lhs, chk.rhs),
            );
        }

        // zero iff zero
        let tr_zero = tracenorm::trace_norm(
            &LinearMap::new(Matrix::zeros(m, k).unwrap(), l2.clone(), l2.clone()).unwrap(),
            profile,
            1,
        )
        .unwrap();
        s.check(tr_zero.bounds.upper == 0.0, || {
            "zero map has zero trace norm".into()
        });
        s.check(tra > 0.0 || a.is_zero(), || {
            "nonzero map has positive trace norm".into()
        });
    }

    // interval soundness on mixed-norm maps
    for _ in 0..n {
        let mut a = Matrix::zeros(3, 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                a[(i, j)] = sampling::gaussian_scalar(&mut rng, Mode::Real);
            }
        }
        let t = LinearMap::new(
            a,
            NormSpec::p(Exponent::Finite(1.5)),
            NormSpec::p(Exponent::Finite(3.0)),
        )
        .unwrap();
        let tr = tracenorm::trace_norm(&t, profile, 5).unwrap();
        s.check(tr.bounds.lower <= tr.bounds.upper + 1e-12, || {
            "interval order".into()
        });
        let cost = tracenorm::decomposition_cost(&tr.decomposition, &t, profile).unwrap();
        s.check(
            cost >= tr.bounds.lower - profile.eps_iter * cost.max(1.0),
            || "decomposition cost above lower bound".into(),
        );
        let op = opnorm::operator_norm(&t, profile, 5).unwrap();
        s.check(
            op.lower <= tr.bounds.upper + profile.eps_iter * tr.bounds.upper.max(1.0),
            || "op lower below trace upper".into(),
        );
    }
    s
}

fn quotient_suite(seed: u64, level: Level, profile: &ToleranceProfile) -> SuiteResult {
    let mut s = SuiteResult::new("quotient");
    let mut rng = sampling::rng(suite_seed(seed, 7));
    let n = trials(level, 60, 1_000);

    for k in 0..n {
        let p = P_GRID[k % 3]; // 1, 1.5, 2 rotate; inf handled below
        let p = if k % 4 == 3 { Exponent::Infinity } else { p };
        let norm = NormSpec::p(p);
        let dim = 3 + sampling::uniform_index(&mut rng, 3); // 3..5
        let zdim = 1 + sampling::uniform_index(&mut rng, dim - 1);
        let basis: Vec<Vector> = (0..zdim)
            .map(|_| sampling::gaussian_vector(&mut rng, dim, Mode::Real))
            .collect();
        let Ok(z) = Subspace::new(basis, dim) else {
            continue;
        };
        let values: Vec<Scalar> = (0..zdim)
            .map(|_| Scalar::new(sampling::gaussian(&mut rng), 0.0))
            .collect();

        let Ok(ext) = quotient::extend_functional(&z, &values, &norm, profile) else {
            s.check(false, || {
                format!("extension failed p={p} dim={dim} zdim={zdim}")
            });
            continue;
        };
        // agreement on Z
        let mut agree = true;
        for (b, v) in z.basis().iter().zip(&values) {
            if (ext.evaluate(b).unwrap() - v).norm() > 1e-7 * (1.0 + v.norm()) {
                agree = false;
            }
        }
        s.check(agree, || format!("extension agreement p={p}"));

        // no inflation and norm preservation
        let r = quotient::restriction_norm(&z, &values, &norm, profile).unwrap();
        let dual = ext.dual_norm().unwrap().lower;
        s.check(dual <= r.upper * (1.0 + 1e-6) + 1e-12, || {
            format!(
                "no-inflation p={p}: dual {dual:.6e} vs restriction upper {:.6e}",
                r.upper
            )
        });
        if r.exact {
            s.check((dual - r.lower).abs() <= 1e-6 * r.lower.max(1e-9), || {
                format!("norm preservation p={p}: {dual:.6e} vs {:.6e}", r.lower)
            });
        }

        // quotient norm vanishes on W and detects distance
        let w = z; // reuse as the quotient subspace
        let coords: Vec<Scalar> = (0..w.dim())
            .map(|_| Scalar::new(sampling::gaussian(&mut rng), 0.0))
            .collect();
        let member = w.member(&coords).unwrap();
        let qm = quotient::quotient_norm(&member, &w, &norm, profile).unwrap();
        let scale = norm.norm(&member).unwrap();
        s.check(qm.upper <= 10.0 * profile.eps_iter * (1.0 + scale), || {
            format!("member quotient of p={p} is {:.3e}", qm.upper)
        });
    }
    s
}

fn vecfun_suite(seed: u64, level: Level, profile: &ToleranceProfile) -> SuiteResult {
    let mut s = SuiteResult::new("vecfun");
    let mut rng = sampling::rng(suite_seed(seed, 8));
    let n_fields = trials(level, 300, 10_000);
    let m = 4;
    let vdim = 3;

    // mixed norm is a norm
    for p in [Exponent::ONE, Exponent::TWO, Exponent::INF] {
        for vnorm in [NormSpec::euclidean(), NormSpec::p(Exponent::ONE)] {
            for _ in 0..trials(level, 40, 300) {
                let f = VectorField::new(
                    (0..m)
                        .map(|_| sampling::gaussian_vector(&mut rng, vdim, Mode::Real))
                        .collect(),
                    vnorm.clone(),
                )
                .unwrap();
                let g = VectorField::new(
                    (0..m)
                        .map(|_| sampling::gaussian_vector(&mut rng, vdim, Mode::Real))
                        .collect(),
                    vnorm.clone(),
                )
                .unwrap();
                let nf = vecfun::mixed_norm(&f, p).unwrap();
                let ng = vecfun::mixed_norm(&g, p).unwrap();
                let alpha = sampling::gaussian(&mut rng);
                let scaled = VectorField::new(
                    f.values()
                        .iter()
                        .map(|v| v.scale(Scalar::new(alpha, 0.0)))
                        .collect(),
                    vnorm.clone(),
                )
                .unwrap();
                s.check(
                    (vecfun::mixed_norm(&scaled, p).unwrap() - alpha.abs() * nf).abs()
                        <= profile.eps_exact * (alpha.abs() * nf).max(1.0),
                    || format!("mixed homogeneity p={p}"),
                );
                let sum = VectorField::new(
                    f.values()
                        .iter()
                        .zip(g.values())
                        .map(|(a, b)| a.add(b).unwrap())
                        .collect(),
                    vnorm.clone(),
                )
                .unwrap();
                s.check(
                    vecfun::mixed_norm(&sum, p).unwrap()
                        <= nf + ng + profile.eps_exact * (nf + ng).max(1.0),
                    || format!("mixed triangle p={p}"),
                );
            }
        }
    }

    // contraction bound and witness embedding
    let per_case = (n_fields / 6).max(1);
    for p in [Exponent::ONE, Exponent::TWO, Exponent::INF] {
        let mut t = Matrix::zeros(m, m).unwrap();
        for i in 0..m {
            for j in 0..m {
                t[(i, j)] = sampling::gaussian_scalar(&mut rng, Mode::Real);
            }
        }
        for vnorm in [NormSpec::p(p), NormSpec::euclidean()] {
            let chk = vecfun::lifted_norm_check(
                &t,
                p,
                &vnorm,
                vdim,
                per_case,
                suite_seed(seed, 60),
                profile,
            )
            .unwrap();
            s.check(chk.holds, || {
                format!(
                    "lifted norm p={p}: ratio {:.6e} vs [{:.6e}, {:.6e}]",
                    chk.max_ratio, chk.scalar_opnorm.lower, chk.scalar_opnorm.upper
                )
            });
        }
    }
    s
}
