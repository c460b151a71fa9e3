//! χ-tracks of words, level sets `X^{m,χ}`, bounded search for words of
//! non-negative track, and the track-raising rewrite.

use std::collections::{BTreeMap, HashMap};

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::budget::{Budgets, Exhausted};
use crate::character::{char_value, Character};
use crate::error::{Error, Result};
use crate::presentation::{GroupElement, Presentation};
use crate::word::{Letter, Word};
use crate::Rational;

/// Prefix values `χ(y₁⋯yᵢ)` for `i = 0..=|w|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrackProfile {
    values: Vec<Rational>,
}

impl TrackProfile {
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn min(&self) -> &Rational {
        self.values.iter().min().expect("profile is never empty")
    }

    pub fn max(&self) -> &Rational {
        self.values.iter().max().expect("profile is never empty")
    }

    pub fn end(&self) -> &Rational {
        self.values.last().expect("profile is never empty")
    }

    pub fn is_nonneg(&self) -> bool {
        !self.min().is_negative()
    }

    /// Index of the first prefix realizing the minimum.
    pub fn argmin(&self) -> usize {
        let m = self.min();
        self.values.iter().position(|v| v == m).expect("min is attained")
    }
}

pub fn chi_track(w: &Word, chi: &Character) -> TrackProfile {
    let mut values = Vec::with_capacity(w.len() + 1);
    let mut current = Rational::zero();
    values.push(current.clone());
    for &l in w.letters() {
        current += chi.letter(l);
        values.push(current.clone());
    }
    TrackProfile { values }
}

pub fn min_track(w: &Word, chi: &Character) -> Rational {
    chi_track(w, chi).min().clone()
}

pub fn is_nonneg_track(w: &Word, chi: &Character) -> bool {
    let mut current = Rational::zero();
    for &l in w.letters() {
        current += chi.letter(l);
        if current.is_negative() {
            return false;
        }
    }
    true
}

/// A finite subset of `G`, kept sorted in shortlex order of normal forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSubset {
    elements: Vec<GroupElement>,
    centered: bool,
}

impl FiniteSubset {
    pub fn new(mut elements: Vec<GroupElement>) -> Self {
        elements.sort();
        elements.dedup();
        FiniteSubset { elements, centered: false }
    }

    /// The generators `X` of `p`.
    pub fn generators(p: &Presentation) -> Result<Self> {
        let elements = (0..p.rank() as u32)
            .map(|g| p.normal_form(&Word::from_letters(vec![Letter::pos(g)])))
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteSubset::new(elements))
    }

    /// `Ẋ = X ∪ X⁻¹ ∪ {1}`.
    pub fn dotted_generators(p: &Presentation) -> Result<Self> {
        FiniteSubset::generators(p)?.centered(p)
    }

    /// Adds `1` and all inverses.
    pub fn centered(&self, p: &Presentation) -> Result<Self> {
        if self.centered {
            return Ok(self.clone());
        }
        let mut elements = self.elements.clone();
        elements.push(GroupElement::identity());
        for g in &self.elements {
            elements.push(p.inverse(g)?);
        }
        let mut out = FiniteSubset::new(elements);
        out.centered = true;
        Ok(out)
    }

    pub fn is_centered(&self) -> bool {
        self.centered
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn union(&self, other: &FiniteSubset) -> FiniteSubset {
        let mut elements = self.elements.clone();
        elements.extend(other.elements.iter().cloned());
        let mut out = FiniteSubset::new(elements);
        out.centered = self.centered && other.centered;
        out
    }

    /// All products `c·d`; the result is centered if both inputs are.
    pub fn product(&self, other: &FiniteSubset, p: &Presentation) -> Result<FiniteSubset> {
        let mut elements = Vec::with_capacity(self.len() * other.len());
        for c in &self.elements {
            for d in &other.elements {
                elements.push(p.multiply(c, d)?);
            }
        }
        let mut out = FiniteSubset::new(elements);
        out.centered = self.centered && other.centered;
        Ok(out)
    }

    /// `C^m` for `m ≥ 1`.
    pub fn power(&self, m: usize, p: &Presentation) -> Result<FiniteSubset> {
        let mut out = self.clone();
        for _ in 1..m {
            out = out.product(self, p)?;
        }
        Ok(out)
    }
}

/// `X^{m,χ}` with a shortlex-least witness of minimal length per element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSet {
    pub m: usize,
    entries: BTreeMap<GroupElement, Word>,
}

impl LevelSet {
    pub fn elements(&self) -> impl Iterator<Item = &GroupElement> {
        self.entries.keys()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&GroupElement, &Word)> {
        self.entries.iter()
    }

    pub fn witness(&self, g: &GroupElement) -> Option<&Word> {
        self.entries.get(g)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.entries.contains_key(g)
    }
}

/// Breadth-first exploration of `Ẋ^{∞,χ}` by word length. A word over `Ẋ`
/// is flattened into a word over `X^±` by concatenating normal forms.
struct LevelSearch<'a> {
    p: &'a Presentation,
    steps: Vec<(GroupElement, Rational)>,
    seen: HashMap<GroupElement, (Word, Rational)>,
    frontier: Vec<GroupElement>,
}

impl<'a> LevelSearch<'a> {
    fn new(x: &FiniteSubset, chi: &Character, p: &'a Presentation) -> Result<Self> {
        let dotted = x.centered(p)?;
        let steps = dotted
            .elements()
            .iter()
            .filter(|g| !g.is_identity())
            .map(|g| (g.clone(), char_value(chi, g.word())))
            .collect();
        let mut seen = HashMap::new();
        seen.insert(GroupElement::identity(), (Word::empty(), Rational::zero()));
        Ok(LevelSearch { p, steps, seen, frontier: vec![GroupElement::identity()] })
    }

    /// Extends every frontier element by every step, keeping the first
    /// discovery in (frontier order, step order). Frontier order is the
    /// shortlex order of witnesses, so first discovery is shortlex-least.
    fn advance(&mut self) -> Result<Vec<GroupElement>> {
        let p = self.p;
        let steps = &self.steps;
        let seen = &self.seen;
        let candidates: Vec<Vec<(GroupElement, usize)>> = self
            .frontier
            .par_iter()
            .map(|g| {
                let value = &seen[g].1;
                let mut out = Vec::new();
                for (i, (x, v)) in steps.iter().enumerate() {
                    if (value + v).is_negative() {
                        continue;
                    }
                    out.push((p.multiply(g, x)?, i));
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        let mut next = Vec::new();
        for (g, extensions) in self.frontier.iter().zip(candidates) {
            for (h, i) in extensions {
                if self.seen.contains_key(&h) {
                    continue;
                }
                let (word, value) = &self.seen[g];
                let witness = word.concat(self.steps[i].0.word());
                let value = value + &self.steps[i].1;
                self.seen.insert(h.clone(), (witness, value));
                next.push(h);
            }
        }
        self.frontier = next.clone();
        Ok(next)
    }
}

pub fn enumerate_levels(
    x: &FiniteSubset,
    chi: &Character,
    m: usize,
    p: &Presentation,
    budgets: &Budgets,
) -> Result<LevelSet> {
    let mut search = LevelSearch::new(x, chi, p)?;
    for _ in 0..m {
        let next = search.advance()?;
        if next.len() > budgets.max_frontier || search.seen.len() > budgets.max_nodes {
            return Err(Error::BudgetExceeded(format!(
                "level set exceeded element cap at {} elements",
                search.seen.len()
            )));
        }
        if next.is_empty() {
            break;
        }
    }
    let entries = search.seen.into_iter().map(|(g, (w, _))| (g, w)).collect();
    Ok(LevelSet { m, entries })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Word),
    Unknown(Exhausted),
}

/// Shortlex-least word of minimal length over `Ẋ` with non-negative track
/// representing `g`, up to `budgets.max_word_len`.
pub fn search_nonneg_word(
    g: &GroupElement,
    x: &FiniteSubset,
    chi: &Character,
    p: &Presentation,
    budgets: &Budgets,
) -> Result<SearchOutcome> {
    if char_value(chi, g.word()).is_negative() {
        return Err(Error::NotInGChi);
    }
    let mut search = LevelSearch::new(x, chi, p)?;
    if g.is_identity() {
        return Ok(SearchOutcome::Found(Word::empty()));
    }
    let mut meter = budgets.start();
    for _ in 0..budgets.max_word_len {
        if let Err(e) = meter.tick(search.frontier.len()) {
            return Ok(SearchOutcome::Unknown(e));
        }
        let next = search.advance()?;
        if let Some((w, _)) = search.seen.get(g) {
            return Ok(SearchOutcome::Found(w.clone()));
        }
        if next.is_empty() {
            break;
        }
        if let Err(e) = meter.check_frontier(next.len()) {
            return Ok(SearchOutcome::Unknown(e));
        }
    }
    Ok(SearchOutcome::Unknown(Exhausted::WordLength(budgets.max_word_len)))
}

/// `w′ = t · dict[y₁] ⋯ dict[y_l] · t⁻¹`. For letters with `χ(y) < 0` a
/// missing entry is replaced by the inverse of `dict[ȳ]`.
///
/// The minimum of the track of `w′` is `min{0, s + χ(t)}` where `s` is the
/// minimum of the track of `w`, provided `χ(w) ≥ 0` and the track of `t`
/// stays within `[0, χ(t)]`; both are checked.
pub fn raise_track(w: &Word, t: &Word, dict: &BTreeMap<Letter, Word>, chi: &Character) -> Result<Word> {
    let chi_t = char_value(chi, t);
    if !chi_t.is_positive() {
        return Err(Error::Precondition("χ(t) must be positive".into()));
    }
    let t_track = chi_track(t, chi);
    if t_track.min().is_negative() || t_track.max() > &chi_t {
        return Err(Error::Precondition("track of t must stay within [0, χ(t)]".into()));
    }
    if char_value(chi, w).is_negative() {
        return Err(Error::Precondition("χ(w) must be non-negative".into()));
    }
    let mut out = t.clone();
    for &y in w.letters() {
        let image = if !chi.letter(y).is_negative() {
            let image = dict.get(&y).ok_or_else(|| Error::DictIncomplete(format!("{y:?}")))?;
            if !is_nonneg_track(image, chi) {
                return Err(Error::Precondition(format!("dict entry for {y:?} dips below 0")));
            }
            image.clone()
        } else {
            match dict.get(&y) {
                Some(image) => image.clone(),
                None => {
                    dict.get(&y.inverse()).ok_or_else(|| Error::DictIncomplete(format!("{:?}", y.inverse())))?.inverse()
                }
            }
        };
        out.extend_from(&image);
    }
    out.extend_from(&t.inverse());
    Ok(out)
}
