//! The acceptance suite: eight criteria, each with its own runtime budget.
//!
//! Every criterion is deterministic; the seeds are the instance indices.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::time::{Duration, Instant};

use itertools::Itertools;
use num::Signed;

use crate::cone::{self, VectorSet};
use crate::exec::Strategy;
use crate::gen;
use crate::oracle;
use crate::rainbow::ColoredSystem;
use crate::ratlin::RationalVector;
use crate::reay;
use crate::verify::{self, helly_h, helly_m, Polyhedron, Verdict, VerificationReport, Witness};

#[derive(Clone, Debug)]
pub struct Config {
    /// Upper bound on the ambient dimension of every criterion.
    pub max_d: usize,
    pub strategy: Strategy,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            max_d: 12,
            strategy: Strategy::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Option<Duration>,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{status}] criterion {}: {}: {}", self.id, self.name, self.detail)
    }
}

impl Outcome {
    /// The line plus elapsed time and budget.
    pub fn timed_line(&self) -> String {
        let budget = match self.limit {
            Some(l) => format!(" (limit {:.0?})", l),
            None => String::new(),
        };
        format!("{self} [{:.2?}{budget}]", self.elapsed)
    }
}

/// Runs `body` and turns its verdict into an outcome, failing it when the
/// budget is exceeded.
fn timed(
    id: usize,
    name: &'static str,
    limit: Option<Duration>,
    body: impl FnOnce() -> Result<String, String>,
) -> Outcome {
    let start = Instant::now();
    let result = body();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if let Some(l) = limit {
        if elapsed > l {
            passed = false;
            detail = format!("{detail}; over budget ({elapsed:.2?} > {l:.0?})");
        }
    }
    Outcome {
        id,
        name,
        passed,
        detail,
        elapsed,
        limit,
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lpos_dim(vectors: &[RationalVector], d: usize) -> usize {
    cone::lineality_of(d, vectors).subspace.dim()
}

pub fn formulas(cfg: &Config) -> Outcome {
    timed(1, "Helly numbers", Some(Duration::from_secs(1)), || {
        let dmax = cfg.max_d.min(12);
        let mut checks = 0;
        for d in 1..=dmax {
            let p = verify::helly_numbers(d, d).map_err(|e| e.to_string())?;
            ensure(p.m == d + 1, || format!("m({d}, {d}) = {}", p.m))?;
            checks += 1;
            for k in 1..d {
                ensure(helly_h(k, d) == helly_m(d - k, d), || format!("h({k}, {d}) != m({}, {d})", d - k))?;
                checks += 1;
            }
        }
        if let Some((j, k, d)) = verify::lemma_inequality_failure(dmax) {
            return Err(format!("inequality fails at j = {j}, k = {k}, d = {d}"));
        }
        Ok(format!("{checks} identities and the inequality for d <= {dmax}"))
    })
}

pub fn extremal_examples(cfg: &Config) -> Outcome {
    timed(2, "cross-polytope and simplex", Some(Duration::from_secs(10)), || {
        let mut sets = 0;
        for d in 1..=cfg.max_d.min(6) {
            for k in 0..d {
                let a = gen::gen_cross_polytope(k, d).map_err(|e| e.to_string())?;
                let v = a.vectors();
                ensure(lpos_dim(v, d) == k + 1, || format!("cross-polytope k = {k}, d = {d}"))?;
                for skip in 0..v.len() {
                    let rest: Vec<RationalVector> =
                        v.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, x)| x.clone()).collect();
                    ensure(lpos_dim(&rest, d) <= k, || format!("cross-polytope k = {k}, d = {d}, deleting {skip}"))?;
                }
                sets += 1;
            }
        }
        for d in 1..=cfg.max_d.min(5) {
            let s = gen::gen_simplex_vertices(d).map_err(|e| e.to_string())?;
            ensure(lpos_dim(s.vectors(), d) == d, || format!("simplex d = {d} is not positively spanning"))?;
            for size in 1..=d {
                for idx in (0..=d).combinations(size) {
                    ensure(lpos_dim(s.subset(&idx).vectors(), d) == 0, || {
                        format!("simplex d = {d}: subset {idx:?} has a line")
                    })?;
                }
            }
            sets += 1;
        }
        Ok(format!("{sets} sets checked exhaustively"))
    })
}

/// Every distinct set of vectors a rainbow sub-selection can produce.
fn rainbow_sets(sys: &ColoredSystem) -> Vec<Vec<RationalVector>> {
    let mut ids: HashMap<&RationalVector, usize> = HashMap::new();
    let mut items: Vec<&RationalVector> = Vec::new();
    for v in sys.colors().iter().flat_map(|c| c.vectors()) {
        ids.entry(v).or_insert_with(|| {
            items.push(v);
            items.len() - 1
        });
    }
    assert!(items.len() <= 128, "too many distinct vectors for a bit mask");
    let mut reach: HashSet<u128> = HashSet::from([0]);
    for c in sys.colors() {
        let next: Vec<u128> = reach
            .iter()
            .flat_map(|&s| c.vectors().iter().map(move |v| (s, v)))
            .map(|(s, v)| s | 1 << ids[v])
            .collect();
        reach.extend(next);
    }
    reach
        .into_iter()
        .sorted()
        .map(|s| (0..items.len()).filter(|i| s >> i & 1 == 1).map(|i| items[i].clone()).collect())
        .collect()
}

pub fn tightness(cfg: &Config) -> Outcome {
    timed(3, "extremal colorful systems", Some(Duration::from_secs(120)), || {
        let mut cases = 0;
        for d in 2..=cfg.max_d.min(5) {
            for k in 1..d {
                let sys = gen::gen_extremal_colorful(d, k + 1).map_err(|e| e.to_string())?;
                ensure(sys.n_colors() == d + k, || format!("d = {d}, k = {k}: {} colors", sys.n_colors()))?;
                for (i, c) in sys.colors().iter().enumerate() {
                    ensure(lpos_dim(c.vectors(), d) > k, || format!("d = {d}, k = {k}: color {i} too thin"))?;
                }
                for r in rainbow_sets(&sys) {
                    ensure(lpos_dim(&r, d) <= k, || format!("d = {d}, k = {k}: rainbow set {r:?} too fat"))?;
                }
                let report =
                    verify::verify_colorful_lineality_with(&sys, k, false, cfg.strategy).map_err(|e| e.to_string())?;
                ensure(report.verdict == Verdict::TightnessWitness, || {
                    format!("d = {d}, k = {k}: verdict {}", report.verdict.name())
                })?;
                cases += 1;
            }
        }
        Ok(format!("{cases} systems: every rainbow set thin, every color fat"))
    })
}

pub const DECOMPOSITIONS_PER_PAIR: usize = 200;

pub fn planted_instance(d: usize, k: usize, seed: u64) -> ColoredSystem {
    gen::gen_random_planted(d, k, d + k, (seed % 2) as usize, seed).expect("valid parameters")
}

pub fn decompositions(cfg: &Config) -> Outcome {
    timed(4, "Reay decompositions", Some(Duration::from_secs(300)), || {
        let mut runs = 0;
        for d in 1..=cfg.max_d.min(5) {
            for k in 1..=d {
                for seed in 0..DECOMPOSITIONS_PER_PAIR as u64 {
                    let sys = planted_instance(d, k, seed);
                    let ctx = || format!("d = {d}, k = {k}, seed = {seed}");
                    let dec = reay::reay_decompose_with(&sys, k, cfg.strategy).map_err(|e| format!("{}: {e}", ctx()))?;
                    let report = reay::verify_decomposition(&dec, &sys, k, true).map_err(|e| format!("{}: {e}", ctx()))?;
                    if let Some(clause) = report.violated {
                        return Err(format!("{}: clause {clause} violated", ctx()));
                    }
                    ensure(dec.m() <= k, || format!("{}: {} blocks", ctx(), dec.m()))?;
                    runs += 1;
                }
            }
        }
        Ok(format!("{runs} decompositions verified"))
    })
}

pub const THEOREM_INSTANCES: usize = 500;

/// Instance `i` of the randomized theorem checks: `(system, d, k)` with
/// `2d - k + 1` colors of at most five vectors. Instances cycle through the
/// `(d, k)` pairs and through planted, unplanted and mixed colors.
pub fn theorem_instance(i: usize, max_d: usize) -> (ColoredSystem, usize) {
    let pairs: Vec<(usize, usize)> = (2..=max_d.clamp(2, 4)).flat_map(|d| (1..d).map(move |k| (d, k))).collect();
    let (d, k) = pairs[i % pairs.len()];
    let n = 2 * d - k + 1;
    let seed = i as u64;
    let round = i / pairs.len();
    let plant = 1 + round % d;
    let planted = || gen::gen_random_planted(d, plant, n, (round / d) % (5 - plant), seed).expect("valid");
    let unplanted = || gen::gen_random_unplanted(d, n, 1 + round % 5, seed).expect("valid");
    let sys = match i % 3 {
        0 => planted(),
        1 => unplanted(),
        _ => {
            let (p, u) = (planted(), unplanted());
            let colors = (0..n).map(|c| if c % 2 == 0 { p.color(c) } else { u.color(c) }.clone()).collect();
            ColoredSystem::new(d, colors).expect("same shape")
        }
    };
    (sys, k)
}

/// Maps each verdict to the one for the dual parameter.
fn dual_witness_matches(d: usize, sol: &VerificationReport, lin: &VerificationReport) -> bool {
    if sol.verdict != lin.verdict {
        return false;
    }
    match (&sol.witness, &lin.witness) {
        (
            Witness::ViolatingSelection { selection: a, value: x },
            Witness::ViolatingSelection { selection: b, value: y },
        ) => a == b && *x == d - *y,
        (Witness::SatisfyingColor { color: a, value: x }, Witness::SatisfyingColor { color: b, value: y }) => {
            a == b && *x == d - *y
        }
        (Witness::AllColorsFail { values: xs }, Witness::AllColorsFail { values: ys }) => {
            xs.iter().zip(ys).all(|(x, y)| *x == d - *y)
        }
        _ => false,
    }
}

pub fn theorem_checks(cfg: &Config) -> Outcome {
    timed(5, "colorful Helly, both forms", Some(Duration::from_secs(300)), || {
        let mut tally: HashMap<&'static str, usize> = HashMap::new();
        for i in 0..THEOREM_INSTANCES {
            let (sys, k) = theorem_instance(i, cfg.max_d);
            let d = sys.ambient_dim();
            let sol = verify::verify_colorful_solutions_with(&sys, k, true, cfg.strategy)
                .map_err(|e| format!("instance {i}: {e}"))?;
            let lin = verify::verify_colorful_lineality_with(&sys, d - k, true, cfg.strategy)
                .map_err(|e| format!("instance {i}: {e}"))?;
            ensure(sol.verdict != Verdict::Counterexample, || format!("instance {i}: counterexample to the solution form"))?;
            ensure(lin.verdict != Verdict::Counterexample, || format!("instance {i}: counterexample to the lineality form"))?;
            ensure(dual_witness_matches(d, &sol, &lin), || format!("instance {i}: {sol:?} vs {lin:?}"))?;
            *tally.entry(sol.verdict.name()).or_default() += 1;
        }
        let summary = tally.iter().sorted().map(|(k, v)| format!("{k} {v}")).join(", ");
        Ok(format!("{THEOREM_INSTANCES} instances, no counterexample, forms agree ({summary})"))
    })
}

pub const ORACLE_INSTANCES: usize = 300;

/// A set of at most eight vectors in dimension at most four.
pub fn oracle_instance(i: usize, max_d: usize) -> VectorSet {
    let d = 1 + i % max_d.clamp(1, 4);
    let seed = i as u64;
    match i % 2 {
        0 => {
            let k = 1 + (i / 2) % d;
            let extra = (i / 8) % (8 - k);
            gen::gen_random_planted(d, k, 1, extra, seed).expect("valid").color(0).clone()
        }
        _ => {
            let size = (1 + (i / 2) % 8).min(5usize.pow(d as u32) - 1);
            gen::gen_random_unplanted(d, 1, size, seed).expect("valid").color(0).clone()
        }
    }
}

pub fn oracle_equivalence(cfg: &Config) -> Outcome {
    timed(6, "lineality and membership oracles", Some(Duration::from_secs(120)), || {
        let mut members = 0;
        for i in 0..ORACLE_INSTANCES {
            let a = oracle_instance(i, cfg.max_d);
            let d = a.ambient_dim();
            let fast = cone::lineality_space(&a).subspace;
            let slow = oracle::lineality_oracle(d, a.vectors());
            ensure(fast == slow, || format!("instance {i}: lineality {fast} vs oracle {slow}"))?;
            let mut rng = gen::color_rng(i as u64, usize::MAX);
            let mut probes: Vec<RationalVector> = a.vectors().iter().map(|v| -v).collect();
            probes.push(gen::random_vector(&mut rng, d));
            probes.push(a.vectors().iter().fold(RationalVector::zeros(d), |s, v| &s + v));
            for b in probes {
                let cert = cone::pos_membership(&a, &b).map_err(|e| e.to_string())?;
                let inside = oracle::in_positive_hull(d, a.vectors(), &b);
                ensure(cert.is_some() == inside, || format!("instance {i}: membership of {b} disagrees"))?;
                if let Some(cert) = cert {
                    ensure(cert.value == b && cert.check(a.vectors()), || format!("instance {i}: bad certificate for {b}"))?;
                    members += 1;
                }
            }
        }
        Ok(format!("{ORACLE_INSTANCES} sets agree; {members} certificates re-multiplied"))
    })
}

pub const POLYHEDRAL_INSTANCES: usize = 200;

/// Translates every halfspace so that all of them contain one random point
/// `p`: `<a, x> <= 0` moves by `p ± t` for a random `t`, the sign chosen so
/// that `<a, ±t> >= 0`.
pub fn translate_through_point(families: &[Vec<Polyhedron>], seed: u64) -> Vec<Vec<Polyhedron>> {
    let d = families[0][0].ambient_dim();
    let mut rng = gen::color_rng(seed, usize::MAX - 1);
    let p = gen::random_vector(&mut rng, d);
    families
        .iter()
        .map(|f| {
            f.iter()
                .map(|poly| {
                    let t = gen::random_vector(&mut rng, d);
                    assert_eq!(poly.normals().len(), 1, "halfspaces only");
                    let flip = poly.normals()[0].dot(&t).is_negative();
                    let shift = if flip { &p - &t } else { &p + &t };
                    poly.translate(&shift)
                })
                .collect()
        })
        .collect()
}

pub fn polyhedral_reduction(cfg: &Config) -> Outcome {
    timed(7, "polyhedral form and translations", Some(Duration::from_secs(180)), || {
        for i in 0..POLYHEDRAL_INSTANCES {
            let (sys, k) = theorem_instance(i, cfg.max_d);
            let homogeneous = verify::verify_colorful_solutions_with(&sys, k, true, cfg.strategy)
                .map_err(|e| format!("instance {i}: {e}"))?;
            let lifted = verify::lift_to_polyhedra(&sys);
            let run = |families: &[Vec<Polyhedron>]| {
                verify::verify_nonhomogeneous_with(families, k, true, cfg.strategy).map_err(|e| format!("instance {i}: {e}"))
            };
            let zero = run(&lifted)?;
            ensure(zero == homogeneous, || format!("instance {i}: lifted {zero:?} vs {homogeneous:?}"))?;
            let moved = run(&translate_through_point(&lifted, i as u64))?;
            ensure(moved == homogeneous, || format!("instance {i}: translated {moved:?} vs {homogeneous:?}"))?;
            let mut rng = gen::color_rng(i as u64, usize::MAX - 2);
            let t = gen::random_vector(&mut rng, sys.ambient_dim());
            let common: Vec<Vec<Polyhedron>> = lifted.iter().map(|f| f.iter().map(|p| p.translate(&t)).collect()).collect();
            let shifted = run(&common)?;
            ensure(shifted == homogeneous, || format!("instance {i}: shifted {shifted:?} vs {homogeneous:?}"))?;
        }
        Ok(format!("{POLYHEDRAL_INSTANCES} instances, verdicts unchanged by lifting and translation"))
    })
}

/// Instances per family used by the determinism check.
pub const DETERMINISM_SAMPLE: usize = 24;

/// The reports of a fixed sample, rendered for byte comparison.
pub fn determinism_transcript(strategy: Strategy, max_d: usize) -> String {
    let mut out = String::new();
    for i in 0..DETERMINISM_SAMPLE {
        let (sys, k) = theorem_instance(i, max_d);
        let d = sys.ambient_dim();
        let sol = verify::verify_colorful_solutions_with(&sys, k, true, strategy);
        let lin = verify::verify_colorful_lineality_with(&sys, d - k, true, strategy);
        let poly = verify::verify_nonhomogeneous_with(&verify::lift_to_polyhedra(&sys), k, true, strategy);
        out.push_str(&format!("{i} {sol:?} {lin:?} {poly:?}\n"));
        let (pd, pk) = (1 + i % max_d.clamp(1, 5), 1 + (i / 5) % (1 + i % max_d.clamp(1, 5)));
        let planted = planted_instance(pd, pk, i as u64);
        out.push_str(&format!("{i} {:?}\n", reay::reay_decompose_with(&planted, pk, strategy)));
    }
    out
}

pub fn determinism(cfg: &Config) -> Outcome {
    timed(8, "determinism", None, || {
        let a = determinism_transcript(Strategy::Sequential, cfg.max_d);
        let b = determinism_transcript(Strategy::Parallel, cfg.max_d);
        let c = determinism_transcript(Strategy::Parallel, cfg.max_d);
        ensure(a == b && b == c, || "sequential and parallel transcripts differ".to_string())?;
        Ok(format!("{} transcript bytes identical across strategies and repeats", a.len()))
    })
}

pub fn run_all(cfg: &Config) -> Vec<Outcome> {
    vec![
        formulas(cfg),
        extremal_examples(cfg),
        tightness(cfg),
        decompositions(cfg),
        theorem_checks(cfg),
        oracle_equivalence(cfg),
        polyhedral_reduction(cfg),
        determinism(cfg),
    ]
}

