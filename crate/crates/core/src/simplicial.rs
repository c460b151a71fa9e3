//! Windows of the free simplicial set `E G` and of the stages `G·E C` and
//! `(G·E C)_s`: membership, π₀ probes and simplicial homotopy checks.
//!
//! A simplex of `E G` lies in `G·E C` iff its vertex set lies in a single
//! translate `gC`, so order and repetition of entries never matter. A stage
//! window therefore stores the maximal translate sets meeting the window
//! (its facets); every simplex of the stage is a subset of a facet.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Signed;
use petgraph::unionfind::UnionFind;
use rayon::prelude::*;

use crate::cayley::{group_by_root, Level, Window};
use crate::character::{char_value, Character};
use crate::error::{Error, Result};
use crate::presentation::{GroupElement, Presentation};
use crate::track::FiniteSubset;
use crate::Rational;

/// Which translates `g·E C` make up a stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Translates {
    /// `g ∈ G`: the stages `G·E C`.
    All,
    /// `g ∈ G_χ`: the stages `G_χ·E C`.
    NonNegative,
}

/// Witness `g` with `g⁻¹tᵢ ∈ C` for all `i`, all `χ(tᵢ) ≥ s`, and `χ(g) ≥ 0`
/// when only non-negative translates are allowed. Candidates are
/// `g = t₀c⁻¹` for `c ∈ C` in shortlex order.
pub fn is_simplex_in_stage(
    tuple: &[GroupElement],
    c: &FiniteSubset,
    chi: &Character,
    level: &Level,
    translates: Translates,
    p: &Presentation,
) -> Result<Option<GroupElement>> {
    let Some(first) = tuple.first() else {
        return Ok(None);
    };
    if !tuple.iter().all(|t| level.admits(&char_value(chi, t.word()))) {
        return Ok(None);
    }
    for x in c.elements() {
        let g = p.multiply(first, &p.inverse(x)?)?;
        if translates == Translates::NonNegative && char_value(chi, g.word()).is_negative() {
            continue;
        }
        let g_inv = p.inverse(&g)?;
        let mut ok = true;
        for t in tuple {
            if !c.contains(&p.multiply(&g_inv, t)?) {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// The part of a stage whose vertices lie in a window.
#[derive(Debug, Clone)]
pub struct StageWindow {
    pub level: Level,
    pub translates: Translates,
    pub radius: usize,
    /// Size of the generating set `C`.
    pub generating_size: usize,
    /// Stage vertices, sorted shortlex.
    vertices: Vec<GroupElement>,
    values: Vec<Rational>,
    /// Maximal translate sets `gC ∩ window ∩ level`, as sorted vertex
    /// indices, deduplicated and sorted.
    facets: Vec<Vec<usize>>,
    /// Facets containing each vertex.
    incidence: Vec<Vec<usize>>,
}

impl StageWindow {
    pub fn vertices(&self) -> &[GroupElement] {
        &self.vertices
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.vertices.binary_search(g).ok()
    }

    /// Whether the vertex set of `tuple` is a simplex of this stage.
    pub fn contains_simplex(&self, tuple: &[GroupElement]) -> bool {
        let Some(idx) = tuple.iter().map(|g| self.index_of(g)).collect::<Option<Vec<_>>>() else {
            return false;
        };
        self.contains_indices(&idx)
    }

    fn contains_indices(&self, idx: &[usize]) -> bool {
        let Some(&first) = idx.first() else {
            return true;
        };
        self.incidence[first].iter().any(|&f| idx.iter().all(|i| self.facets[f].binary_search(i).is_ok()))
    }

    /// Nondegenerate simplices of dimension `dim ≤ 2`, as sorted vertex
    /// index tuples in lexicographic order.
    pub fn simplices(&self, dim: usize) -> Vec<Vec<usize>> {
        let mut out = BTreeSet::new();
        for facet in &self.facets {
            subsets(facet, dim + 1, &mut |s| {
                out.insert(s.to_vec());
            });
        }
        out.into_iter().collect()
    }

    /// Connected components of the 1-skeleton, as in [`crate::cayley::components`].
    pub fn components(&self) -> Vec<Vec<GroupElement>> {
        let mut uf = UnionFind::<usize>::new(self.vertices.len());
        for facet in &self.facets {
            for w in facet.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        group_by_root(&mut uf, &self.vertices)
    }

    /// Whether every simplex (of dimension ≤ 2) of `self` lies in `other`.
    pub fn is_subcomplex_of(&self, other: &StageWindow) -> bool {
        let map: Option<Vec<usize>> = self.vertices.iter().map(|g| other.index_of(g)).collect();
        let Some(map) = map else {
            return false;
        };
        self.facets.iter().all(|facet| {
            let image: Vec<usize> = facet.iter().map(|&i| map[i]).collect();
            if other.contains_indices(&sorted(image.clone())) {
                return true;
            }
            let mut ok = true;
            for k in 2..=3 {
                subsets(&image, k, &mut |s| {
                    if ok && !other.contains_indices(&sorted(s.to_vec())) {
                        ok = false;
                    }
                });
            }
            ok
        })
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

/// Calls `f` on every `k`-element subset of `items`, in lexicographic order.
fn subsets(items: &[usize], k: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(items: &[usize], k: usize, start: usize, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if acc.len() == k {
            f(acc);
            return;
        }
        for i in start..items.len() {
            acc.push(items[i]);
            go(items, k, i + 1, acc, f);
            acc.pop();
        }
    }
    if k <= items.len() {
        go(items, k, 0, &mut Vec::with_capacity(k), f);
    }
}

/// Builds the stage `(G·E C)_s` (or `(G_χ·E C)_s`) inside `window`.
pub fn stage_window(
    p: &Presentation,
    c: &FiniteSubset,
    chi: &Character,
    level: &Level,
    translates: Translates,
    window: &Window,
) -> Result<StageWindow> {
    let admitted: Vec<(usize, Rational)> = window
        .vertices()
        .iter()
        .enumerate()
        .filter_map(|(i, g)| {
            let v = char_value(chi, g.word());
            level.admits(&v).then_some((i, v))
        })
        .collect();
    let slot: HashMap<usize, usize> = admitted.iter().enumerate().map(|(k, (i, _))| (*i, k)).collect();
    let c_inv: Vec<GroupElement> = c.elements().iter().map(|x| p.inverse(x)).collect::<Result<_>>()?;

    // candidate translates g = u c⁻¹ for u in the level window
    let candidates: BTreeSet<GroupElement> = admitted
        .par_iter()
        .map(|(i, _)| {
            let u = &window.vertices()[*i];
            c_inv.iter().map(|x| p.multiply(u, x)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .filter(|g| translates == Translates::All || !char_value(chi, g.word()).is_negative())
        .collect();
    let candidates: Vec<GroupElement> = candidates.into_iter().collect();

    let facets: Vec<Vec<usize>> = candidates
        .par_iter()
        .map(|g| {
            let mut members = Vec::new();
            for x in c.elements() {
                let h = p.multiply(g, x)?;
                if let Some(k) = window.index_of(&h).and_then(|i| slot.get(&i)) {
                    members.push(*k);
                }
            }
            members.sort_unstable();
            Ok(members)
        })
        .collect::<Result<_>>()?;
    let facets: BTreeSet<Vec<usize>> = facets.into_iter().filter(|f| !f.is_empty()).collect();
    let facets = maximal_only(facets);

    // keep only vertices covered by some translate, then reindex
    let mut covered = vec![false; admitted.len()];
    for f in &facets {
        for &k in f {
            covered[k] = true;
        }
    }
    let mut reindex = vec![usize::MAX; admitted.len()];
    let mut vertices = Vec::new();
    let mut values = Vec::new();
    for (k, (i, v)) in admitted.into_iter().enumerate() {
        if covered[k] {
            reindex[k] = vertices.len();
            vertices.push(window.vertices()[i].clone());
            values.push(v);
        }
    }
    let facets: Vec<Vec<usize>> = facets.into_iter().map(|f| f.into_iter().map(|k| reindex[k]).collect()).collect();
    let mut incidence = vec![Vec::new(); vertices.len()];
    for (fi, f) in facets.iter().enumerate() {
        for &v in f {
            incidence[v].push(fi);
        }
    }
    Ok(StageWindow {
        level: level.clone(),
        translates,
        radius: window.radius(),
        generating_size: c.len(),
        vertices,
        values,
        facets,
        incidence,
    })
}

/// Drops facets contained in another facet.
fn maximal_only(facets: BTreeSet<Vec<usize>>) -> Vec<Vec<usize>> {
    let mut by_size: Vec<Vec<usize>> = facets.into_iter().collect();
    by_size.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    let mut kept: Vec<Vec<usize>> = Vec::new();
    let mut incidence: HashMap<usize, Vec<usize>> = HashMap::new();
    for f in by_size {
        let contained = incidence
            .get(&f[0])
            .map(|list| list.iter().any(|&k| f.iter().all(|i| kept[k].binary_search(i).is_ok())))
            .unwrap_or(false);
        if !contained {
            for &v in &f {
                incidence.entry(v).or_default().push(kept.len());
            }
            kept.push(f);
        }
    }
    kept.sort();
    kept
}

/// Component classes of a small stage and where they land in a larger one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pi0Evidence {
    /// Small-stage classes, each sorted, ordered by representative.
    pub small_classes: Vec<Vec<GroupElement>>,
    /// Number of classes of the large stage.
    pub large_class_count: usize,
    /// For each small class, the index of the large class containing it.
    pub merge: Vec<usize>,
    /// All small classes land in one large class.
    pub uniform: bool,
}

pub fn pi0_probe(small: &StageWindow, large: &StageWindow) -> Result<Pi0Evidence> {
    if !small.is_subcomplex_of(large) {
        return Err(Error::StageNotNested);
    }
    let small_classes = small.components();
    let large_classes = large.components();
    let mut class_of: HashMap<&GroupElement, usize> = HashMap::new();
    for (k, class) in large_classes.iter().enumerate() {
        for g in class {
            class_of.insert(g, k);
        }
    }
    let merge: Vec<usize> = small_classes.iter().map(|class| class_of[&class[0]]).collect();
    let uniform = merge.windows(2).all(|w| w[0] == w[1]);
    Ok(Pi0Evidence { small_classes, large_class_count: large_classes.len(), merge, uniform })
}

/// Whether the interpolation `(f(x₀),…,f(x_{i−1}), g(xᵢ),…,g(x_k))` lands
/// in `G·E C` for every simplex of the stage. Degenerate simplices are
/// included, so the binding condition for a simplex `σ` is that
/// `f(σ) ∪ g(σ)` lies in one translate of `C`.
pub fn simplicial_homotopy_exists(
    stage: &StageWindow,
    f: &dyn Fn(&GroupElement) -> Result<GroupElement>,
    g: &dyn Fn(&GroupElement) -> Result<GroupElement>,
    target: &FiniteSubset,
    p: &Presentation,
) -> Result<bool> {
    let chi = Character::zero(p.rank());
    let fv: Vec<GroupElement> = stage.vertices.iter().map(f).collect::<Result<_>>()?;
    let gv: Vec<GroupElement> = stage.vertices.iter().map(g).collect::<Result<_>>()?;
    for facet in &stage.facets {
        // simplices of dimension ≤ 2 only
        let mut ok = true;
        let mut check = |s: &[usize]| -> Result<()> {
            if !ok {
                return Ok(());
            }
            let mut tuple: Vec<GroupElement> = s.iter().map(|&i| fv[i].clone()).collect();
            tuple.extend(s.iter().map(|&i| gv[i].clone()));
            if is_simplex_in_stage(&tuple, target, &chi, &Level::NegInfinity, Translates::All, p)?.is_none() {
                ok = false;
            }
            Ok(())
        };
        let k = facet.len().min(3);
        let mut result = Ok(());
        subsets(facet, k, &mut |s| {
            if result.is_ok() {
                result = check(s);
            }
        });
        result?;
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `t_C`: a shortlex-first element of `C` minimizing `χ`.
pub fn retraction_shift(c: &FiniteSubset, chi: &Character) -> Option<GroupElement> {
    c.elements().iter().map(|x| (char_value(chi, x.word()), x)).min_by(|a, b| a.0.cmp(&b.0)).map(|(_, x)| x.clone())
}

/// The vertex map `r_C : g ↦ g t_C⁻¹`.
pub fn retraction<'a>(
    c: &FiniteSubset,
    chi: &Character,
    p: &'a Presentation,
) -> Result<impl Fn(&GroupElement) -> Result<GroupElement> + 'a> {
    let t = retraction_shift(c, chi).ok_or_else(|| Error::Precondition("empty generating set".into()))?;
    let t_inv = p.inverse(&t)?;
    Ok(move |g: &GroupElement| p.multiply(g, &t_inv))
}

/// One small stage of a filtration probe and the first large stage found
/// with a uniform merge.
#[derive(Debug, Clone)]
pub struct ProbeRow {
    pub m: usize,
    pub s: Level,
    pub small_class_count: usize,
    /// `(m₂, s₂)` of the least large stage with uniform merge.
    pub found: Option<(usize, Level)>,
}

#[derive(Debug, Clone)]
pub struct ProbeReport {
    pub radius: usize,
    pub translates: Translates,
    pub rows: Vec<ProbeRow>,
}

/// Scans the double index lattice `(Cᵐ, s)`. For each small stage
/// `(Cᵐ, s)` the large stages `(C^{m₂}, s₂)` with `m₂ ≥ m` and `s₂ ≤ s` are
/// tried in order of increasing `m₂`, then decreasing `s₂`.
pub fn filtration_probe(
    p: &Presentation,
    chi: &Character,
    c: &FiniteSubset,
    m_range: std::ops::RangeInclusive<usize>,
    s_grid: &[Level],
    window: &Window,
    translates: Translates,
) -> Result<ProbeReport> {
    let mut s_sorted: Vec<Level> = s_grid.to_vec();
    s_sorted.sort_by(|a, b| {
        if a == b {
            std::cmp::Ordering::Equal
        } else if a.at_least(b) {
            std::cmp::Ordering::Less
        } else {
            std::cmp::Ordering::Greater
        }
    });
    s_sorted.dedup();
    let mut stages: BTreeMap<(usize, usize), StageWindow> = BTreeMap::new();
    let mut powers: BTreeMap<usize, FiniteSubset> = BTreeMap::new();
    for m in m_range.clone() {
        let cm = c.centered(p)?.power(m.max(1), p)?;
        let cm = if m == 0 { FiniteSubset::new(vec![GroupElement::identity()]) } else { cm };
        powers.insert(m, cm);
    }
    let mut stage = |m: usize, si: usize| -> Result<StageWindow> {
        if let Some(s) = stages.get(&(m, si)) {
            return Ok(s.clone());
        }
        let s = stage_window(p, &powers[&m], chi, &s_sorted[si], translates, window)?;
        stages.insert((m, si), s.clone());
        Ok(s)
    };
    let mut rows = Vec::new();
    for m in m_range.clone() {
        for si in 0..s_sorted.len() {
            let small = stage(m, si)?;
            let mut found = None;
            'search: for m2 in m..=*m_range.end() {
                for (si2, s2) in s_sorted.iter().enumerate().skip(si) {
                    let large = stage(m2, si2)?;
                    if pi0_probe(&small, &large)?.uniform {
                        found = Some((m2, s2.clone()));
                        break 'search;
                    }
                }
            }
            rows.push(ProbeRow { m, s: s_sorted[si].clone(), small_class_count: small.components().len(), found });
        }
    }
    Ok(ProbeReport { radius: window.radius(), translates, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budgets;
    use crate::cayley::build_window;

    fn el(p: &Presentation, text: &str) -> GroupElement {
        p.normal_form(&p.parse_word(text).unwrap()).unwrap()
    }

    fn subset(p: &Presentation, words: &[&str]) -> FiniteSubset {
        FiniteSubset::new(words.iter().map(|w| el(p, w)).collect())
    }

    fn window(p: &Presentation, r: usize) -> Window {
        build_window(p, &FiniteSubset::generators(p).unwrap(), r, &Budgets::default()).unwrap()
    }

    #[test]
    fn membership_examples() {
        let z2 = Presentation::free_abelian(&["a", "b"]);
        let c = subset(&z2, &["1", "a", "b"]);
        let chi = Character::zero(2);
        let member = |t: &[&str]| {
            let tuple: Vec<GroupElement> = t.iter().map(|w| el(&z2, w)).collect();
            is_simplex_in_stage(&tuple, &c, &chi, &Level::NegInfinity, Translates::All, &z2).unwrap()
        };
        assert_eq!(member(&["1", "a"]), Some(el(&z2, "1")));
        assert_eq!(member(&["a", "b"]), Some(el(&z2, "1")));
        assert_eq!(member(&["a a", "b"]), None);
        assert_eq!(member(&["a b", "a b b"]), Some(el(&z2, "a b")));
    }

    #[test]
    fn point_stage_is_discrete() {
        let z = Presentation::free(&["a"]);
        let chi = Character::from_ints(&[1]);
        let one = subset(&z, &["1"]);
        let st = stage_window(&z, &one, &chi, &Level::zero(), Translates::All, &window(&z, 3)).unwrap();
        assert_eq!(st.vertices().len(), 4);
        assert!(st.simplices(1).is_empty());
        let high = stage_window(&z, &one, &chi, &Level::int(10), Translates::All, &window(&z, 3)).unwrap();
        assert!(high.vertices().is_empty());
    }

    #[test]
    fn z2_edges_have_labels_in_c_inverse_c() {
        let z2 = Presentation::free_abelian(&["a", "b"]);
        let c = FiniteSubset::dotted_generators(&z2).unwrap();
        let chi = Character::zero(2);
        let st = stage_window(&z2, &c, &chi, &Level::NegInfinity, Translates::All, &window(&z2, 1)).unwrap();
        let cc = c.product(&c, &z2).unwrap();
        let mut expected = BTreeSet::new();
        let vs = st.vertices();
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                let label = z2.multiply(&z2.inverse(&vs[i]).unwrap(), &vs[j]).unwrap();
                if cc.contains(&label) {
                    expected.insert(vec![i, j]);
                }
            }
        }
        let got: BTreeSet<Vec<usize>> = st.simplices(1).into_iter().collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn z_uniform_merge() {
        let z = Presentation::free(&["a"]);
        let chi = Character::from_ints(&[1]);
        let w = window(&z, 4);
        let small = stage_window(&z, &subset(&z, &["1"]), &chi, &Level::zero(), Translates::All, &w).unwrap();
        let large =
            stage_window(&z, &FiniteSubset::dotted_generators(&z).unwrap(), &chi, &Level::zero(), Translates::All, &w)
                .unwrap();
        let ev = pi0_probe(&small, &large).unwrap();
        assert_eq!(ev.small_classes.len(), 5);
        assert!(ev.uniform);
        assert_eq!(pi0_probe(&large, &small), Err(Error::StageNotNested));
        let same = pi0_probe(&large, &large).unwrap();
        assert_eq!(same.merge, vec![0]);
    }

    #[test]
    fn homotopies() {
        let f2z = Presentation::f2_times_z();
        let chi = Character::zero(3);
        let c = FiniteSubset::dotted_generators(&f2z).unwrap();
        let st = stage_window(&f2z, &c, &chi, &Level::NegInfinity, Translates::All, &window(&f2z, 2)).unwrap();
        let id = |g: &GroupElement| Ok(g.clone());
        assert!(simplicial_homotopy_exists(&st, &id, &id, &c, &f2z).unwrap());
        let t = el(&f2z, "t");
        let shift = |g: &GroupElement| f2z.multiply(g, &t);
        let ct = c.product(&FiniteSubset::new(vec![t.clone()]), &f2z).unwrap();
        assert!(simplicial_homotopy_exists(&st, &id, &shift, &c.union(&ct), &f2z).unwrap());
        let far = el(&f2z, "a^5");
        let jump = |g: &GroupElement| f2z.multiply(g, &far);
        assert!(!simplicial_homotopy_exists(&st, &id, &jump, &c, &f2z).unwrap());
    }
}
