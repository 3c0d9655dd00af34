//! Instance generators: the extremal constructions and seeded random
//! instances.
//!
//! Random instances are reproducible. A color's stream is a ChaCha8 generator
//! keyed with the 32-byte seed holding `color_seed(seed, c)` in little-endian
//! order followed by zeros, where `color_seed` is the splitmix64 finalizer
//! applied to `seed ^ (c * 0x9E3779B97F4A7C15)`. Coordinates are `p/q` with
//! `p` uniform in `-100..=100` and `q` uniform in `1..=10`, each drawn with
//! `Rng::gen_range`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::VectorSet;
use crate::error::{breach, input, Result};
use crate::rainbow::ColoredSystem;
use crate::ratlin::{rank_of, rat, Rational, RationalVector};

/// Redraws allowed per vector before giving up.
pub const MAX_ATTEMPTS: usize = 1000;

/// `{±e_1, ..., ±e_{k+1}}` in `Q^d`, ordered `e_1, -e_1, e_2, -e_2, ...`.
pub fn gen_cross_polytope(k: usize, d: usize) -> Result<VectorSet> {
    if k + 1 > d {
        return input(format!("the cross-polytope on k + 1 = {} axes needs d >= {}", k + 1, k + 1));
    }
    let mut vectors = Vec::with_capacity(2 * k + 2);
    for i in 0..=k {
        let e = RationalVector::unit(d, i);
        let minus = -&e;
        vectors.push(e);
        vectors.push(minus);
    }
    VectorSet::new(d, vectors)
}

/// `e_1, ..., e_d, -(e_1 + ... + e_d)`: zero-sum, any `d` independent.
pub fn gen_simplex_vertices(d: usize) -> Result<VectorSet> {
    if d < 1 {
        return input("the simplex needs d >= 1");
    }
    let mut vectors: Vec<RationalVector> = (0..d).map(|i| RationalVector::unit(d, i)).collect();
    vectors.push(RationalVector::new(vec![rat(-1); d]));
    VectorSet::new(d, vectors)
}

/// `d + k - 1` colors, each with `dim lpos >= k`, such that no rainbow
/// sub-selection has a `k`-dimensional lineality space.
///
/// Start with `2k - 1` copies of `{±e_1, ..., ±e_k}` in `Q^k`; to pass from
/// `Q^(n-1)` to `Q^n` add the color
/// `{e_i + e_n : i < n} ∪ {e_n} ∪ {-(e_1 + ... + e_(n-1) + n e_n)}`,
/// a minimal positive basis of `Q^n` off the hyperplane `x_n = 0`.
pub fn gen_extremal_colorful(d: usize, k: usize) -> Result<ColoredSystem> {
    if k < 1 || k > d {
        return input(format!("k = {k} is outside 1..={d}"));
    }
    let base = gen_cross_polytope(k - 1, k)?;
    let mut colors: Vec<Vec<RationalVector>> = vec![base.vectors().to_vec(); 2 * k - 1];
    for n in k + 1..=d {
        let top = RationalVector::unit(n, n - 1);
        let mut color: Vec<RationalVector> = (0..n - 1).map(|i| &RationalVector::unit(n, i) + &top).collect();
        color.push(top);
        let mut last = vec![rat(-1); n];
        last[n - 1] = rat(-(n as i64));
        color.push(RationalVector::new(last));
        colors.push(color);
    }
    let colors = colors
        .into_iter()
        .map(|c| VectorSet::new(d, c.iter().map(|v| v.pad_to(d)).collect()))
        .collect::<Result<Vec<_>>>()?;
    ColoredSystem::new(d, colors)
}

/// A set whose lineality has dimension at least `k + 1` while every subset
/// of size at most `h(k, d) - 1` has lineality dimension at most `k`.
pub fn gen_optimal_size_example(k: usize, d: usize) -> Result<VectorSet> {
    if k + 1 > d {
        return input(format!("k = {k} is outside 0..={}", d.saturating_sub(1)));
    }
    if d + 1 >= 2 * (k + 1) {
        gen_simplex_vertices(d)
    } else {
        gen_cross_polytope(k, d)
    }
}

/// Seed of color `c`'s stream.
pub fn color_seed(seed: u64, c: usize) -> u64 {
    let mut z = seed ^ (c as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn color_rng(seed: u64, c: usize) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&color_seed(seed, c).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

pub fn random_rational(rng: &mut impl Rng) -> Rational {
    let p: i64 = rng.gen_range(-100..=100);
    let q: i64 = rng.gen_range(1..=10);
    Rational::new(p.into(), q.into())
}

pub fn random_vector(rng: &mut impl Rng, d: usize) -> RationalVector {
    RationalVector::new((0..d).map(|_| random_rational(rng)).collect())
}

/// Draws until `accept` holds, at most [`MAX_ATTEMPTS`] times.
fn draw(
    rng: &mut ChaCha8Rng,
    mut sample: impl FnMut(&mut ChaCha8Rng) -> RationalVector,
    accept: impl Fn(&RationalVector) -> bool,
) -> Result<RationalVector> {
    for _ in 0..MAX_ATTEMPTS {
        let v = sample(rng);
        if accept(&v) {
            return Ok(v);
        }
    }
    breach(format!("no acceptable random vector in {MAX_ATTEMPTS} draws"))
}

/// One planted color: `k` independent random vectors, their negated sum,
/// then `extra` further distinct nonzero random vectors.
fn planted_color(rng: &mut ChaCha8Rng, d: usize, k: usize, extra: usize) -> Result<Vec<RationalVector>> {
    let mut color: Vec<RationalVector> = Vec::with_capacity(k + 1 + extra);
    for _ in 0..k {
        let v = draw(rng, |r| random_vector(r, d), |v| {
            let mut probe = color.clone();
            probe.push(v.clone());
            rank_of(&probe) == probe.len()
        })?;
        color.push(v);
    }
    let sum = color.iter().fold(RationalVector::zeros(d), |acc, v| &acc + v);
    color.push(-&sum);
    for _ in 0..extra {
        let v = draw(rng, |r| random_vector(r, d), |v| !v.is_zero() && !color.contains(v))?;
        color.push(v);
    }
    Ok(color)
}

/// Colors that each contain a minimal positive basis of a random
/// `k`-dimensional subspace, plus `extra` random vectors per color.
pub fn gen_random_planted(d: usize, k: usize, n_colors: usize, extra: usize, seed: u64) -> Result<ColoredSystem> {
    if k < 1 || k > d {
        return input(format!("k = {k} is outside 1..={d}"));
    }
    if n_colors < 1 {
        return input("need at least one color");
    }
    gen_random_planted_sized(d, k, &vec![extra; n_colors], seed)
}

/// [`gen_random_planted`] with `extras[c]` extra vectors in color `c`.
pub fn gen_random_planted_sized(d: usize, k: usize, extras: &[usize], seed: u64) -> Result<ColoredSystem> {
    if k < 1 || k > d {
        return input(format!("k = {k} is outside 1..={d}"));
    }
    if extras.is_empty() {
        return input("need at least one color");
    }
    let colors = extras
        .iter()
        .enumerate()
        .map(|(c, &extra)| VectorSet::new(d, planted_color(&mut color_rng(seed, c), d, k, extra)?))
        .collect::<Result<Vec<_>>>()?;
    ColoredSystem::new(d, colors)
}

/// Colors of `size` distinct nonzero vectors with integer coordinates in
/// `-2..=2`. Small coordinates make positive dependences common.
pub fn gen_random_unplanted(d: usize, n_colors: usize, size: usize, seed: u64) -> Result<ColoredSystem> {
    if d < 1 || n_colors < 1 || size < 1 {
        return input("need d, the number of colors and the color size all positive");
    }
    if size >= 5usize.saturating_pow(d as u32) {
        return input(format!("cannot draw {size} distinct nonzero vectors from the grid"));
    }
    let sample = |r: &mut ChaCha8Rng| RationalVector::new((0..d).map(|_| rat(r.gen_range(-2..=2))).collect());
    let colors = (0..n_colors)
        .map(|c| {
            let mut rng = color_rng(seed, c);
            let mut color: Vec<RationalVector> = Vec::with_capacity(size);
            for _ in 0..size {
                let v = draw(&mut rng, sample, |v| !v.is_zero() && !color.contains(v))?;
                color.push(v);
            }
            VectorSet::new(d, color)
        })
        .collect::<Result<Vec<_>>>()?;
    ColoredSystem::new(d, colors)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    CrossPolytope,
    Simplex,
    ExtremalColorful,
    OptimalSize,
    RandomPlanted,
    RandomUnplanted,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 6] = [
        GeneratorKind::CrossPolytope,
        GeneratorKind::Simplex,
        GeneratorKind::ExtremalColorful,
        GeneratorKind::OptimalSize,
        GeneratorKind::RandomPlanted,
        GeneratorKind::RandomUnplanted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::CrossPolytope => "cross_polytope",
            GeneratorKind::Simplex => "simplex",
            GeneratorKind::ExtremalColorful => "extremal_colorful",
            GeneratorKind::OptimalSize => "optimal_size",
            GeneratorKind::RandomPlanted => "random_planted",
            GeneratorKind::RandomUnplanted => "random_unplanted",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match Self::ALL.into_iter().find(|k| k.name() == s) {
            Some(k) => Ok(k),
            None => input(format!("unknown generator {s:?}")),
        }
    }
}

/// Parameters of one generator call.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub d: usize,
    pub k: usize,
    pub seed: Option<u64>,
    /// Number of colors of random instances; defaults to `d + k`.
    pub colors: Option<usize>,
    /// Extra vectors per planted color, or the color size of unplanted ones.
    pub extra: usize,
    /// Per-color extra-vector counts for planted instances; overrides
    /// `extra` and fixes the number of colors.
    pub sizes: Option<Vec<usize>>,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, d: usize, k: usize) -> Self {
        Self {
            kind,
            d,
            k,
            seed: None,
            colors: None,
            extra: 0,
            sizes: None,
        }
    }

    /// Runs the generator; single sets come back as one color.
    pub fn generate(&self) -> Result<ColoredSystem> {
        let (d, k) = (self.d, self.k);
        let seed = self.seed.unwrap_or(0);
        let n_colors = self.colors.unwrap_or(d + k);
        let single = |set: VectorSet| ColoredSystem::new(d, vec![set]);
        match self.kind {
            GeneratorKind::CrossPolytope => single(gen_cross_polytope(k, d)?),
            GeneratorKind::Simplex => single(gen_simplex_vertices(d)?),
            GeneratorKind::ExtremalColorful => gen_extremal_colorful(d, k),
            GeneratorKind::OptimalSize => single(gen_optimal_size_example(k, d)?),
            GeneratorKind::RandomPlanted => match &self.sizes {
                Some(sizes) => {
                    if self.colors.is_some_and(|n| n != sizes.len()) {
                        return input("the per-color sizes disagree with the number of colors");
                    }
                    gen_random_planted_sized(d, k, sizes, seed)
                }
                None => gen_random_planted(d, k, n_colors, self.extra, seed),
            },
            GeneratorKind::RandomUnplanted => gen_random_unplanted(d, n_colors, self.extra.max(1), seed),
        }
    }
}
