//! Colorful Reay decomposition.
//!
//! Given `d + k` colors in `Q^d` whose positive hulls each contain a
//! `k`-dimensional subspace, the construction picks a rainbow sub-selection
//! split into blocks `R_1, ..., R_m` of weakly decreasing size at least 2,
//! such that every prefix union positively spans a subspace of dimension
//! `sum |R_j| - i`, the last one of dimension at least `k`.
//!
//! Blocks are chosen greedily: each is a maximum-cardinality rainbow block
//! whose image under the projection onto the complement of the span so far
//! is a minimal positive basis.

use std::fmt;

use crate::cone::{self, VectorSet};
use crate::error::{breach, input, Result};
use crate::exec::Strategy;
use crate::rainbow::{max_cardinality_rainbow_mpb_with, ColoredSystem, RainbowSelection};
use crate::ratlin::{orthogonal_projector, Projector, RationalVector, Subspace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReayDecomposition {
    /// Blocks `R_1..R_m`; the color set of each block is its index set `I_j`.
    pub blocks: Vec<RainbowSelection>,
    /// `L_i = pos(R_1 ∪ ... ∪ R_i)` for every prefix.
    pub subspaces: Vec<Subspace>,
}

impl ReayDecomposition {
    pub fn m(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(RainbowSelection::len).collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.subspaces.iter().map(Subspace::dim).collect()
    }

    fn prefix_vectors(&self, sys: &ColoredSystem, upto: usize) -> Vec<RationalVector> {
        self.blocks[..=upto].iter().flat_map(|b| b.vectors(sys)).collect()
    }
}

fn check_hypotheses(sys: &ColoredSystem, k: usize) -> Result<()> {
    let d = sys.ambient_dim();
    if k < 1 || k > d {
        return input(format!("k = {k} is outside 1..={d}"));
    }
    if sys.n_colors() != d + k {
        return input(format!(
            "need exactly d + k = {} colors, got {}",
            d + k,
            sys.n_colors()
        ));
    }
    for (i, c) in sys.colors().iter().enumerate() {
        let dim = cone::lineality_space(c).subspace.dim();
        if dim < k {
            return input(format!(
                "the positive hull of color {i} contains no {k}-dimensional subspace (lineality dimension {dim})"
            ));
        }
    }
    Ok(())
}

/// Weak form: blocks with the size, dimension and final-dimension
/// properties.
pub fn reay_decompose_weak(sys: &ColoredSystem, k: usize) -> Result<ReayDecomposition> {
    reay_decompose_weak_with(sys, k, Strategy::default())
}

pub fn reay_decompose_weak_with(sys: &ColoredSystem, k: usize, strategy: Strategy) -> Result<ReayDecomposition> {
    check_hypotheses(sys, k)?;
    let d = sys.ambient_dim();
    let mut remaining: Vec<usize> = (0..sys.n_colors()).collect();
    let mut blocks: Vec<RainbowSelection> = Vec::new();
    let mut subspaces: Vec<Subspace> = Vec::new();
    let mut projectors: Vec<Projector> = vec![Projector::identity(d)];
    let mut span = Subspace::zero(d);
    let mut used = 0usize;

    while span.dim() < k {
        let step = blocks.len();
        // Colors left = d - dim L + (k - blocks so far).
        if remaining.len() != d + k - used || remaining.len() != d - span.dim() + (k - step) {
            return breach(format!(
                "color budget broken before block {}: {} colors left, span dimension {}",
                step + 1,
                remaining.len(),
                span.dim()
            ));
        }
        let p = &projectors[step];
        let Some(hit) = max_cardinality_rainbow_mpb_with(&remaining, sys, p, strategy) else {
            return breach(format!("no admissible block {} exists", step + 1));
        };
        let block = hit.selection;
        if let Some(prev) = blocks.last() {
            check_step(sys, &projectors[step - 1], prev, &block)?;
        }
        let vectors = block.vectors(sys);
        let next = span.join(&Subspace::span(d, &vectors));
        used += block.len();
        if next.dim() != used - (step + 1) {
            return breach(format!(
                "block {} raises the span to dimension {} instead of {}",
                step + 1,
                next.dim(),
                used - (step + 1)
            ));
        }
        remaining.retain(|c| !block.colors().contains(c));
        projectors.push(orthogonal_projector(&next));
        blocks.push(block);
        subspaces.push(next.clone());
        span = next;
    }
    Ok(ReayDecomposition { blocks, subspaces })
}

/// Consecutive blocks, projected by the projector in force before the
/// earlier one, satisfy `|Q| <= |R|` and positively span a subspace of
/// dimension `|R| + |Q| - 2`.
fn check_step(sys: &ColoredSystem, p: &Projector, prev: &RainbowSelection, next: &RainbowSelection) -> Result<()> {
    if next.len() > prev.len() {
        return breach(format!(
            "block sizes increase from {} to {}",
            prev.len(),
            next.len()
        ));
    }
    let d = sys.ambient_dim();
    let joint: Vec<RationalVector> = prev
        .vectors(sys)
        .iter()
        .chain(next.vectors(sys).iter())
        .map(|v| p.project(v))
        .collect();
    let lin = cone::lineality_of(d, &joint);
    if lin.generator_indices.len() != joint.len() || lin.subspace.dim() + 2 != prev.len() + next.len() {
        return breach("consecutive blocks do not positively span a subspace of the expected dimension");
    }
    Ok(())
}

/// Strong form: additionally every prefix union is a positive basis of its
/// span.
///
/// Runs the weak form, extracts a positive basis `R` of the final span from
/// its blocks, reruns the weak form on `d + dim` identical copies of `R`, and
/// maps each pick back to the original color that contributed that vector.
pub fn reay_decompose(sys: &ColoredSystem, k: usize) -> Result<ReayDecomposition> {
    reay_decompose_with(sys, k, Strategy::default())
}

pub fn reay_decompose_with(sys: &ColoredSystem, k: usize, strategy: Strategy) -> Result<ReayDecomposition> {
    let weak = reay_decompose_weak_with(sys, k, strategy)?;
    if prefix_bases_hold(&weak, sys) {
        return Ok(weak);
    }
    let d = sys.ambient_dim();
    let origin: Vec<(usize, usize)> = weak.blocks.iter().flat_map(|b| b.picks().to_vec()).collect();
    let vectors: Vec<RationalVector> = origin.iter().map(|&(c, i)| sys.vector(c, i).clone()).collect();
    let basis = cone::positive_basis_of_lineality_of(d, &vectors)?;
    let basis_set = match VectorSet::new(d, basis.iter().map(|&i| vectors[i].clone()).collect()) {
        Ok(s) => s,
        Err(e) => return breach(format!("weak blocks repeat a vector: {e}")),
    };
    let k2 = Subspace::span(d, &vectors).dim();
    let copies = ColoredSystem::copies(&basis_set, d + k2)?;
    let rerun = reay_decompose_weak_with(&copies, k2, strategy)?;

    let mut blocks = Vec::with_capacity(rerun.m());
    for block in &rerun.blocks {
        let picks = block
            .picks()
            .iter()
            .map(|&(_, j)| origin[basis[j]])
            .collect::<Vec<_>>();
        match RainbowSelection::new(picks) {
            Ok(b) => blocks.push(b),
            Err(_) => return breach("relabelled blocks reuse an original color"),
        }
    }
    let all: Vec<usize> = blocks.iter().flat_map(|b| b.colors()).collect();
    let mut sorted = all.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != all.len() {
        return breach("relabelled blocks reuse an original color");
    }
    Ok(ReayDecomposition {
        blocks,
        subspaces: rerun.subspaces,
    })
}

fn prefix_bases_hold(dec: &ReayDecomposition, sys: &ColoredSystem) -> bool {
    (0..dec.m()).all(|i| cone::is_positive_basis_of(&dec.prefix_vectors(sys, i), &dec.subspaces[i]))
}

/// Properties checked by [`verify_decomposition`], in checking order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clause {
    /// No color is used twice across all blocks.
    Rainbow,
    /// `|R_i| >= |R_{i+1}| >= 2`, and `|R_1| >= 2`.
    MonotoneSizes,
    /// Each prefix positively spans a linear subspace of dimension
    /// `sum |R_j| - i`.
    DimensionFormula,
    /// The stored subspaces equal the recomputed ones.
    SubspaceClaim,
    /// The last subspace has dimension at least `k`.
    FinalDimension,
    /// Each prefix union is a positive basis of its subspace.
    PositiveBasis,
}

impl Clause {
    pub fn name(self) -> &'static str {
        match self {
            Clause::Rainbow => "rainbow",
            Clause::MonotoneSizes => "monotone sizes",
            Clause::DimensionFormula => "dimension formula",
            Clause::SubspaceClaim => "subspace claim",
            Clause::FinalDimension => "final dimension",
            Clause::PositiveBasis => "positive basis",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    pub violated: Option<Clause>,
    /// Recomputed prefix dimensions, as far as the checks got.
    pub dims: Vec<usize>,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.violated.is_none()
    }
}

/// Re-checks a decomposition from the raw vectors using only cone
/// primitives. Nothing stored in `dec` besides the picks is trusted.
pub fn verify_decomposition(
    dec: &ReayDecomposition,
    sys: &ColoredSystem,
    k: usize,
    strong: bool,
) -> Result<DecompositionReport> {
    for b in &dec.blocks {
        b.check_against(sys)?;
    }
    if dec.subspaces.len() != dec.blocks.len() {
        return input("one subspace per block is required");
    }
    let d = sys.ambient_dim();
    let fail = |clause, dims| Ok(DecompositionReport { violated: Some(clause), dims });

    let mut colors: Vec<usize> = dec.blocks.iter().flat_map(|b| b.colors()).collect();
    let total = colors.len();
    colors.sort_unstable();
    colors.dedup();
    if colors.len() != total {
        return fail(Clause::Rainbow, vec![]);
    }

    let sizes = dec.block_sizes();
    if sizes.iter().any(|&s| s < 2) || sizes.windows(2).any(|w| w[0] < w[1]) {
        return fail(Clause::MonotoneSizes, vec![]);
    }

    let mut dims = Vec::new();
    let mut spans = Vec::new();
    let mut used = 0;
    for (i, size) in sizes.iter().enumerate() {
        used += size;
        let vs = dec.prefix_vectors(sys, i);
        let lin = cone::lineality_of(d, &vs);
        let linear = lin.generator_indices.len() == vs.len();
        dims.push(lin.subspace.dim());
        if !linear || lin.subspace.dim() + i + 1 != used {
            return fail(Clause::DimensionFormula, dims);
        }
        spans.push(lin.subspace);
    }
    if spans != dec.subspaces {
        return fail(Clause::SubspaceClaim, dims);
    }
    if dims.last().copied().unwrap_or(0) < k {
        return fail(Clause::FinalDimension, dims);
    }
    if strong {
        for (i, span) in spans.iter().enumerate() {
            if !cone::is_positive_basis_of(&dec.prefix_vectors(sys, i), span) {
                return fail(Clause::PositiveBasis, dims);
            }
        }
    }
    Ok(DecompositionReport { violated: None, dims })
}
