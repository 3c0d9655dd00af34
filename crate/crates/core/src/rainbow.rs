//! Colorful selections: colorful Carathéodory search, rainbow minimal
//! positive bases, and the exhaustive rainbow enumerator used by the
//! theorem verifiers.
//!
//! Every search enumerates deterministically. Sub-selections are ordered by
//! size, then by their color set, then by their pick indices, and the first
//! hit in that order is returned regardless of the execution strategy.

use std::collections::{HashMap, HashSet};
use std::sync::Mutex;

use itertools::Itertools;

use crate::cone::{self, VectorSet};
use crate::error::{breach, input, Result};
use crate::exec::{self, Strategy};
use crate::ratlin::{Projector, RationalVector, Subspace};

/// Ordered list of color classes in one ambient dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredSystem {
    colors: Vec<VectorSet>,
    ambient_dim: usize,
}

impl ColoredSystem {
    pub fn new(ambient_dim: usize, colors: Vec<VectorSet>) -> Result<Self> {
        if colors.is_empty() {
            return input("a colored system needs at least one color");
        }
        for (i, c) in colors.iter().enumerate() {
            if c.ambient_dim() != ambient_dim {
                return input(format!(
                    "color {i} lives in dimension {} instead of {ambient_dim}",
                    c.ambient_dim()
                ));
            }
            if c.is_empty() {
                return input(format!("color {i} is empty"));
            }
        }
        Ok(Self { colors, ambient_dim })
    }

    /// `n` colors that are all equal to `set`.
    pub fn copies(set: &VectorSet, n: usize) -> Result<Self> {
        Self::new(set.ambient_dim(), vec![set.clone(); n])
    }

    pub fn colors(&self) -> &[VectorSet] {
        &self.colors
    }

    pub fn color(&self, i: usize) -> &VectorSet {
        &self.colors[i]
    }

    pub fn n_colors(&self) -> usize {
        self.colors.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn require_nonzero(&self) -> Result<()> {
        for (i, c) in self.colors.iter().enumerate() {
            if let Err(e) = c.require_nonzero() {
                return input(format!("color {i}: {e}"));
            }
        }
        Ok(())
    }

    pub fn vector(&self, color: usize, index: usize) -> &RationalVector {
        self.colors[color].get(index)
    }
}

/// At most one pick per color, stored as `(color, index)` sorted by color.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RainbowSelection {
    picks: Vec<(usize, usize)>,
}

impl RainbowSelection {
    pub fn new(mut picks: Vec<(usize, usize)>) -> Result<Self> {
        picks.sort_unstable();
        if picks.windows(2).any(|w| w[0].0 == w[1].0) {
            return input("a rainbow selection picks at most one vector per color");
        }
        Ok(Self { picks })
    }

    pub fn picks(&self) -> &[(usize, usize)] {
        &self.picks
    }

    pub fn colors(&self) -> Vec<usize> {
        self.picks.iter().map(|p| p.0).collect()
    }

    pub fn len(&self) -> usize {
        self.picks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.picks.is_empty()
    }

    /// Errors when a pick points outside `sys`.
    pub fn check_against(&self, sys: &ColoredSystem) -> Result<()> {
        for &(c, i) in &self.picks {
            if c >= sys.n_colors() || i >= sys.color(c).len() {
                return input(format!("pick ({c}, {i}) does not exist in the system"));
            }
        }
        Ok(())
    }

    pub fn vectors(&self, sys: &ColoredSystem) -> Vec<RationalVector> {
        self.picks.iter().map(|&(c, i)| sys.vector(c, i).clone()).collect()
    }

    /// Ordering used by every search: size, colors, then indices.
    pub fn search_key(&self) -> (usize, Vec<usize>, Vec<usize>) {
        (
            self.picks.len(),
            self.colors(),
            self.picks.iter().map(|p| p.1).collect(),
        )
    }
}

fn origin_hull_precheck(sys: &ColoredSystem) -> Result<()> {
    for (i, c) in sys.colors().iter().enumerate() {
        if cone::origin_in_convex_hull(c.vectors()).is_none() {
            return input(format!("the origin is not in the convex hull of color {i}"));
        }
    }
    Ok(())
}

/// A full rainbow selection whose convex hull contains the origin, for
/// `n + 1` colors in dimension `n` that each contain the origin in their
/// convex hull. Exhaustive lexicographic search.
pub fn colorful_caratheodory_zero(sys: &ColoredSystem) -> Result<RainbowSelection> {
    let n = sys.ambient_dim();
    if sys.n_colors() != n + 1 {
        return input(format!(
            "need {} colors in dimension {n}, got {}",
            n + 1,
            sys.n_colors()
        ));
    }
    origin_hull_precheck(sys)?;
    let ranges: Vec<std::ops::Range<usize>> = sys.colors().iter().map(|c| 0..c.len()).collect();
    for picks in ranges.into_iter().multi_cartesian_product() {
        let vs: Vec<RationalVector> = picks
            .iter()
            .enumerate()
            .map(|(c, &i)| sys.vector(c, i).clone())
            .collect();
        if cone::origin_in_convex_hull(&vs).is_some() {
            return RainbowSelection::new(picks.into_iter().enumerate().collect());
        }
    }
    breach("no rainbow selection contains the origin in its convex hull")
}

/// Rainbow sub-selection that is a minimal positive basis of its positive
/// hull, for `n + 1` colors in dimension `n` with nontrivial lineality.
///
/// Existence goes through the positive-basis reduction, colorful
/// Carathéodory at the origin and face extraction. The returned selection
/// is then the canonical one: the smallest, lexicographically first rainbow
/// sub-selection of the original colors with the property.
pub fn rainbow_minimal_positive_basis(sys: &ColoredSystem) -> Result<(RainbowSelection, Subspace)> {
    let n = sys.ambient_dim();
    if sys.n_colors() != n + 1 {
        return input(format!(
            "need {} colors in dimension {n}, got {}",
            n + 1,
            sys.n_colors()
        ));
    }
    let mut reduced_picks = Vec::new();
    let mut reduced_colors = Vec::new();
    for (i, c) in sys.colors().iter().enumerate() {
        let basis = match cone::positive_basis_of_lineality(c) {
            Ok(b) => b,
            Err(_) => return input(format!("color {i} has trivial lineality space")),
        };
        reduced_colors.push(c.subset(&basis));
        reduced_picks.push(basis);
    }
    let reduced = ColoredSystem::new(n, reduced_colors)?;
    let full = colorful_caratheodory_zero(&reduced)?;
    let vs = full.vectors(&reduced);
    let lin_basis = cone::positive_basis_of_lineality_of(n, &vs)?;
    let face: Vec<RationalVector> = lin_basis.iter().map(|&i| vs[i].clone()).collect();
    let face_set = VectorSet::new(n, face)?;
    let minimal = cone::extract_minimal_positive_basis(&face_set)?;
    let witness_size = minimal.len();

    for size in 2..=witness_size {
        for combo in (0..sys.n_colors()).combinations(size) {
            if let Some(sel) = first_mpb_in_combo(sys, &combo, &Projector::identity(n)) {
                let span = Subspace::span(n, &sel.vectors(sys));
                return Ok((sel, span));
            }
        }
    }
    breach("face extraction produced a basis the exhaustive search cannot find")
}

/// Result of [`max_cardinality_rainbow_mpb`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxRainbow {
    pub selection: RainbowSelection,
    /// Span of the projected selection.
    pub subspace: Subspace,
}

impl MaxRainbow {
    pub fn colors(&self) -> Vec<usize> {
        self.selection.colors()
    }
}

/// Among the colors in `available`, finds a largest index set `I` with a
/// rainbow selection `R` (one pick per color of `I`) such that `P(R)` is a
/// minimal positive basis of its positive hull. Ties go to the
/// lexicographically first `I`, then the first picks. Vectors with zero
/// image are never picked.
pub fn max_cardinality_rainbow_mpb(
    available: &[usize],
    sys: &ColoredSystem,
    p: &Projector,
) -> Option<MaxRainbow> {
    max_cardinality_rainbow_mpb_with(available, sys, p, Strategy::default())
}

pub fn max_cardinality_rainbow_mpb_with(
    available: &[usize],
    sys: &ColoredSystem,
    p: &Projector,
    strategy: Strategy,
) -> Option<MaxRainbow> {
    let mut available: Vec<usize> = available.to_vec();
    available.sort_unstable();
    available.dedup();
    let usable: Vec<usize> = available
        .into_iter()
        .filter(|&c| sys.color(c).vectors().iter().any(|v| !p.project(v).is_zero()))
        .collect();
    let room = sys.ambient_dim() - p.kernel_dim() + 1;
    let largest = usable.len().min(room);
    for size in (2..=largest).rev() {
        let combos: Vec<Vec<usize>> = usable.iter().copied().combinations(size).collect();
        let hit = exec::find_first(strategy, &combos, |combo| first_mpb_in_combo(sys, combo, p));
        if let Some(selection) = hit {
            let images: Vec<RationalVector> =
                selection.vectors(sys).iter().map(|v| p.project(v)).collect();
            return Some(MaxRainbow {
                subspace: Subspace::span(sys.ambient_dim(), &images),
                selection,
            });
        }
    }
    None
}

/// First (lexicographic) picks from the colors of `combo` whose projections
/// form a minimal positive basis.
fn first_mpb_in_combo(sys: &ColoredSystem, combo: &[usize], p: &Projector) -> Option<RainbowSelection> {
    let d = sys.ambient_dim();
    let images: Vec<Vec<(usize, RationalVector)>> =
        combo.iter().map(|&c| sys.color(c).project(p)).collect();
    if images.iter().any(Vec::is_empty) {
        return None;
    }
    let mut picks = Vec::with_capacity(combo.len());
    let mut chosen = Vec::with_capacity(combo.len());
    if mpb_dfs(d, &images, &mut picks, &mut chosen) {
        let sel = combo.iter().copied().zip(picks).collect();
        Some(RainbowSelection::new(sel).expect("distinct colors"))
    } else {
        None
    }
}

fn mpb_dfs(
    d: usize,
    images: &[Vec<(usize, RationalVector)>],
    picks: &mut Vec<usize>,
    chosen: &mut Vec<RationalVector>,
) -> bool {
    let t = chosen.len();
    let last = t + 1 == images.len();
    for (idx, img) in &images[t] {
        chosen.push(img.clone());
        // Every proper subset of a minimal positive basis is independent.
        let ok = if last {
            cone::minimal_positive_basis_span(d, chosen).is_some()
        } else {
            crate::ratlin::rank_of(chosen) == chosen.len()
        };
        if ok {
            picks.push(*idx);
            if last || mpb_dfs(d, images, picks, chosen) {
                return true;
            }
            picks.pop();
        }
        chosen.pop();
    }
    false
}

/// Bit set over item ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ItemSet(Vec<u64>);

impl ItemSet {
    pub fn with_item(&self, id: usize) -> Self {
        let mut out = self.clone();
        out.insert(id);
        out
    }

    pub fn insert(&mut self, id: usize) {
        let w = id / 64;
        if self.0.len() <= w {
            self.0.resize(w + 1, 0);
        }
        self.0[w] |= 1 << (id % 64);
    }

    pub fn union(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        Self(
            (0..n)
                .map(|i| self.0.get(i).copied().unwrap_or(0) | other.0.get(i).copied().unwrap_or(0))
                .collect(),
        )
    }

    pub fn ids(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &bits) in self.0.iter().enumerate() {
            for b in 0..64 {
                if bits >> b & 1 == 1 {
                    out.push(w * 64 + b);
                }
            }
        }
        out
    }
}

/// Per-color item ids for rainbow enumeration. Equal items (equal vectors,
/// equal polyhedra) share one id, so selections that differ only in which
/// copy they picked are explored once.
#[derive(Clone, Debug)]
pub struct RainbowUniverse {
    colors: Vec<Vec<usize>>,
    n_items: usize,
}

impl RainbowUniverse {
    /// Assigns ids by equality of the given keys.
    pub fn from_keys<K: Eq + std::hash::Hash + Clone>(colors: &[Vec<K>]) -> (Self, Vec<K>) {
        let mut ids: HashMap<K, usize> = HashMap::new();
        let mut items = Vec::new();
        let colors = colors
            .iter()
            .map(|c| {
                c.iter()
                    .map(|k| {
                        *ids.entry(k.clone()).or_insert_with(|| {
                            items.push(k.clone());
                            items.len() - 1
                        })
                    })
                    .collect()
            })
            .collect();
        (
            Self {
                colors,
                n_items: items.len(),
            },
            items,
        )
    }

    pub fn n_colors(&self) -> usize {
        self.colors.len()
    }

    pub fn n_items(&self) -> usize {
        self.n_items
    }
}

/// Finds the first rainbow sub-selection (in search order) whose item set is
/// bad, considering sizes `min_size..=max_size`.
///
/// `is_bad` receives sorted distinct item ids and must be monotone: a
/// superset of a bad set is bad. The caller guarantees that no set with
/// fewer than `min_size` items is bad. Monotonicity is used twice: when the
/// largest size has no bad selection no smaller size has one either, and a
/// partial selection whose union with every remaining candidate is good is
/// skipped whole.
pub fn first_bad_subselection<F>(
    universe: &RainbowUniverse,
    min_size: usize,
    max_size: usize,
    is_bad: &F,
    strategy: Strategy,
) -> Option<RainbowSelection>
where
    F: Fn(&[usize]) -> bool + Sync,
{
    let max_size = max_size.min(universe.n_colors());
    let min_size = min_size.max(1);
    if min_size > max_size {
        return None;
    }
    let verdicts = Mutex::new(HashMap::new());
    let search = |size: usize| -> Option<RainbowSelection> {
        let combos: Vec<Vec<usize>> = (0..universe.n_colors()).combinations(size).collect();
        exec::find_first(strategy, &combos, |combo| {
            let mut dfs = BadDfs::new(universe, combo, is_bad, &verdicts);
            let mut picks = Vec::with_capacity(size);
            dfs.run(0, ItemSet::default(), &mut picks).then(|| {
                RainbowSelection::new(combo.iter().copied().zip(picks).collect()).expect("distinct")
            })
        })
    };
    let top = search(max_size)?;
    for size in min_size..max_size {
        if let Some(hit) = search(size) {
            return Some(hit);
        }
    }
    Some(top)
}

struct BadDfs<'a, F> {
    colors: Vec<&'a [usize]>,
    suffix: Vec<ItemSet>,
    is_bad: &'a F,
    verdicts: &'a Mutex<HashMap<ItemSet, bool>>,
    clean: HashSet<(usize, ItemSet)>,
}

impl<'a, F: Fn(&[usize]) -> bool> BadDfs<'a, F> {
    fn new(
        universe: &'a RainbowUniverse,
        combo: &[usize],
        is_bad: &'a F,
        verdicts: &'a Mutex<HashMap<ItemSet, bool>>,
    ) -> Self {
        let colors: Vec<&[usize]> = combo.iter().map(|&c| universe.colors[c].as_slice()).collect();
        let mut suffix = vec![ItemSet::default(); colors.len() + 1];
        for t in (0..colors.len()).rev() {
            let mut s = suffix[t + 1].clone();
            for &id in colors[t] {
                s.insert(id);
            }
            suffix[t] = s;
        }
        Self {
            colors,
            suffix,
            is_bad,
            verdicts,
            clean: HashSet::new(),
        }
    }

    fn bad(&mut self, set: &ItemSet) -> bool {
        if let Some(&v) = self.verdicts.lock().expect("verdict cache").get(set) {
            return v;
        }
        let v = (self.is_bad)(&set.ids());
        self.verdicts.lock().expect("verdict cache").insert(set.clone(), v);
        v
    }

    fn run(&mut self, t: usize, chosen: ItemSet, picks: &mut Vec<usize>) -> bool {
        if t == self.colors.len() {
            return self.bad(&chosen);
        }
        if self.clean.contains(&(t, chosen.clone())) {
            return false;
        }
        let reach = chosen.union(&self.suffix[t]);
        if self.bad(&reach) {
            let color = self.colors[t];
            for (idx, &id) in color.iter().enumerate() {
                picks.push(idx);
                if self.run(t + 1, chosen.with_item(id), picks) {
                    return true;
                }
                picks.pop();
            }
        }
        self.clean.insert((t, chosen));
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::orthogonal_projector;

    fn set(d: usize, vs: &[&[i64]]) -> VectorSet {
        VectorSet::from_ints(d, vs).unwrap()
    }

    fn cross2() -> VectorSet {
        set(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]])
    }

    fn simplex2() -> VectorSet {
        set(2, &[&[1, 0], &[0, 1], &[-1, -1]])
    }

    #[test]
    fn selections_pick_once_per_color() {
        assert!(RainbowSelection::new(vec![(0, 1), (0, 2)]).is_err());
        let s = RainbowSelection::new(vec![(2, 0), (0, 3)]).unwrap();
        assert_eq!(s.picks(), &[(0, 3), (2, 0)]);
    }

    #[test]
    fn caratheodory_identical_colors() {
        let sys = ColoredSystem::copies(&simplex2(), 3).unwrap();
        let sel = colorful_caratheodory_zero(&sys).unwrap();
        assert_eq!(sel.picks(), &[(0, 0), (1, 1), (2, 2)]);
    }

    #[test]
    fn caratheodory_lines() {
        let sys = ColoredSystem::new(
            2,
            vec![
                set(2, &[&[1, 0], &[-1, 0]]),
                set(2, &[&[0, 1], &[0, -1]]),
                set(2, &[&[1, 1], &[-1, -1]]),
            ],
        )
        .unwrap();
        let sel = colorful_caratheodory_zero(&sys).unwrap();
        assert_eq!(sel.picks(), &[(0, 0), (1, 0), (2, 1)]);
        assert!(cone::origin_in_convex_hull(&sel.vectors(&sys)).is_some());
    }

    #[test]
    fn caratheodory_precondition() {
        let sys = ColoredSystem::new(2, vec![simplex2(), simplex2(), set(2, &[&[1, 0], &[0, 1]])]).unwrap();
        let err = colorful_caratheodory_zero(&sys).unwrap_err();
        assert!(err.to_string().contains("color 2"));
    }

    #[test]
    fn rainbow_basis_copies_of_cross() {
        let sys = ColoredSystem::copies(&cross2(), 3).unwrap();
        let (sel, span) = rainbow_minimal_positive_basis(&sys).unwrap();
        assert_eq!(sel.picks(), &[(0, 0), (1, 1)]);
        assert_eq!(span, Subspace::span(2, &[RationalVector::from_ints(&[1, 0])]));
    }

    #[test]
    fn rainbow_basis_three_lines() {
        let sys = ColoredSystem::new(
            2,
            vec![
                set(2, &[&[1, 0], &[-1, 0]]),
                set(2, &[&[0, 1], &[0, -1]]),
                set(2, &[&[1, 1], &[-1, -1]]),
            ],
        )
        .unwrap();
        let (sel, span) = rainbow_minimal_positive_basis(&sys).unwrap();
        assert_eq!(sel.picks(), &[(0, 0), (1, 0), (2, 1)]);
        assert_eq!(span, Subspace::full(2));
        assert!(cone::minimal_positive_basis_span(2, &sel.vectors(&sys)).is_some());
    }

    #[test]
    fn rainbow_basis_needs_lineality() {
        let sys = ColoredSystem::new(2, vec![cross2(), cross2(), set(2, &[&[1, 0], &[0, 1]])]).unwrap();
        assert!(rainbow_minimal_positive_basis(&sys).is_err());
    }

    #[test]
    fn max_cardinality_examples() {
        let id = Projector::identity(2);
        let sys = ColoredSystem::copies(&cross2(), 4).unwrap();
        let hit = max_cardinality_rainbow_mpb(&[0, 1, 2, 3], &sys, &id).unwrap();
        assert_eq!(hit.selection.picks(), &[(0, 0), (1, 1)]);

        let sys = ColoredSystem::copies(&simplex2(), 3).unwrap();
        let hit = max_cardinality_rainbow_mpb(&[0, 1, 2], &sys, &id).unwrap();
        assert_eq!(hit.selection.picks(), &[(0, 0), (1, 1), (2, 2)]);
        assert_eq!(hit.subspace, Subspace::full(2));

        let pointed = ColoredSystem::copies(&set(2, &[&[1, 0], &[1, 1]]), 3).unwrap();
        assert!(max_cardinality_rainbow_mpb(&[0, 1, 2], &pointed, &id).is_none());
    }

    #[test]
    fn max_cardinality_after_projection() {
        let sys = ColoredSystem::copies(&cross2(), 4).unwrap();
        let p = orthogonal_projector(&Subspace::span(2, &[RationalVector::from_ints(&[1, 0])]));
        let hit = max_cardinality_rainbow_mpb(&[2, 3], &sys, &p).unwrap();
        assert_eq!(hit.selection.picks(), &[(2, 2), (3, 3)]);
    }

    #[test]
    fn bad_search_respects_order_and_monotonicity() {
        // Items are integers; a set is bad once it has three distinct items.
        let colors = vec![vec![0u32, 1], vec![0, 1], vec![2], vec![0, 3]];
        let (u, _) = RainbowUniverse::from_keys(&colors);
        let bad = |ids: &[usize]| ids.len() >= 3;
        for strategy in [Strategy::Sequential, Strategy::Parallel] {
            let hit = first_bad_subselection(&u, 1, 4, &bad, strategy).unwrap();
            assert_eq!(hit.picks(), &[(0, 0), (1, 1), (2, 0)]);
            assert!(first_bad_subselection(&u, 1, 2, &bad, strategy).is_none());
        }
    }
}
