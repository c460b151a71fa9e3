//! "Follows from R along χ": derivations `w₁r₁w̄₁ ⋯ w_l r_l w̄_l` of
//! non-negative track, their checker, relator normalization, letter
//! substitution and the Σ² window probe.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};

use num_traits::Signed;
use rayon::prelude::*;

use crate::backend::Soundness;
use crate::budget::{Budgets, Exhausted};
use crate::cayley::Window;
use crate::character::Character;
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::sigma::certificate::{reduced_words, Status, Verdict};
use crate::track::{chi_track, is_nonneg_track, min_track};
use crate::word::{free_reduce, Letter, Word};

/// A signed, cyclically rotated relator: rotate `r^{±1}` left by `rotation`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelatorRef {
    pub index: usize,
    pub inverse: bool,
    pub rotation: usize,
}

impl RelatorRef {
    pub fn word(&self, relators: &[Word]) -> Option<Word> {
        let r = relators.get(self.index)?;
        if self.rotation >= r.len().max(1) {
            return None;
        }
        let signed = if self.inverse { r.inverse() } else { r.clone() };
        Some(signed.rotate(self.rotation))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub conjugator: Word,
    pub relator: RelatorRef,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Derivation {
    pub factors: Vec<Factor>,
}

impl Derivation {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// `w₁r₁w̄₁ ⋯ w_l r_l w̄_l`, unreduced. `None` on a bad reference.
    pub fn assembled(&self, relators: &[Word]) -> Option<Word> {
        let mut out = Word::empty();
        for f in &self.factors {
            out.extend_from(&f.conjugator);
            out.extend_from(&f.relator.word(relators)?);
            out.extend_from(&f.conjugator.inverse());
        }
        Some(out)
    }
}

/// Words visited by cancelling the leftmost `y ȳ` pair, one pair at a time.
pub fn reduction_trace(w: &Word) -> Vec<Word> {
    let mut trace = vec![w.clone()];
    let mut current = w.letters().to_vec();
    while let Some(i) = current.windows(2).position(|p| p[0] == p[1].inverse()) {
        current.drain(i..i + 2);
        trace.push(Word::from_letters(current.clone()));
    }
    trace
}

/// Checks that the factors reference genuine (rotated, signed) relators,
/// that the assembled word has non-negative track and is freely equivalent
/// to `rho`, and that the leftmost-cancellation reduction sequences of both
/// stay non-negative.
pub fn verify_derivation(d: &Derivation, rho: &Word, relators: &[Word], chi: &Character) -> bool {
    let Some(assembled) = d.assembled(relators) else {
        return false;
    };
    if free_reduce(&assembled) != free_reduce(rho) {
        return false;
    }
    if !is_nonneg_track(&assembled, chi) {
        return false;
    }
    reduction_trace(&assembled).iter().all(|w| is_nonneg_track(w, chi))
        && (!is_nonneg_track(rho, chi) || reduction_trace(rho).iter().all(|w| is_nonneg_track(w, chi)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DerivationOutcome {
    Found(Derivation),
    Unknown(Exhausted),
}

/// How far a search word may grow beyond the start length.
pub const LENGTH_SLACK: usize = 4;

/// Best-first search (shorter words first, then shortlex) over freely
/// reduced words of non-negative track, from `rho` to the empty word. A move
/// replaces a nonempty subword `u` of the current word `p u q` by `v̄`, where
/// `uv` is a rotation `s` of some `r^{±1}`; it records the factor `p s p̄`.
/// The factor has non-negative track when `χ(p) + min_track(s) ≥ 0`.
pub fn follows_along_chi(
    rho: &Word,
    relators: &[Word],
    chi: &Character,
    p: &Presentation,
    budgets: &Budgets,
) -> Result<DerivationOutcome> {
    if !p.is_relation(rho)? {
        return Err(Error::NotARelation);
    }
    if !is_nonneg_track(rho, chi) {
        return Err(Error::NegativeTrack);
    }
    let start = free_reduce(rho);
    let max_len = start.len() + LENGTH_SLACK;

    // every rotation of every signed relator, with its minimum
    let mut rotations: Vec<(RelatorRef, Word, crate::Rational)> = Vec::new();
    for (index, r) in relators.iter().enumerate() {
        if r.is_empty() {
            continue;
        }
        for inverse in [false, true] {
            for rotation in 0..r.len() {
                let rel = RelatorRef { index, inverse, rotation };
                let s = rel.word(relators).expect("valid reference");
                let m = min_track(&s, chi);
                rotations.push((rel, s, m));
            }
        }
    }

    let mut parent: HashMap<Word, Option<(Word, Factor)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = BinaryHeap::new();
    queue.push(Reverse(start));
    let mut meter = budgets.start();
    while let Some(Reverse(current)) = queue.pop() {
        if current.is_empty() {
            return Ok(DerivationOutcome::Found(unwind(&parent, current)));
        }
        if let Err(e) = meter.tick(1) {
            return Ok(DerivationOutcome::Unknown(e));
        }
        let letters = current.letters();
        let track = chi_track(&current, chi);
        for i in 0..letters.len() {
            let prefix_value = &track.values()[i];
            for (rel, s, m) in &rotations {
                if (prefix_value + m).is_negative() {
                    continue;
                }
                let s_letters = s.letters();
                let mut k = 0;
                while k < s_letters.len() && i + k < letters.len() && letters[i + k] == s_letters[k] {
                    k += 1;
                    let v_bar = Word::from_letters(s_letters[k..].to_vec()).inverse();
                    let mut next = Word::from_letters(letters[..i].to_vec());
                    next.extend_from(&v_bar);
                    next.extend_from(&Word::from_letters(letters[i + k..].to_vec()));
                    let next = free_reduce(&next);
                    if next.len() > max_len || parent.contains_key(&next) || !is_nonneg_track(&next, chi) {
                        continue;
                    }
                    let factor = Factor { conjugator: Word::from_letters(letters[..i].to_vec()), relator: *rel };
                    parent.insert(next.clone(), Some((current.clone(), factor)));
                    queue.push(Reverse(next));
                }
            }
        }
        if let Err(e) = meter.check_frontier(queue.len()) {
            return Ok(DerivationOutcome::Unknown(e));
        }
    }
    Ok(DerivationOutcome::Unknown(Exhausted::WordLength(max_len)))
}

fn unwind(parent: &HashMap<Word, Option<(Word, Factor)>>, end: Word) -> Derivation {
    let mut factors = Vec::new();
    let mut current = end;
    while let Some(Some((prev, factor))) = parent.get(&current) {
        factors.push(factor.clone());
        current = prev.clone();
    }
    factors.reverse();
    Derivation { factors }
}

/// Rotates every relator factor to start right after its first minimal
/// prefix `v`, replacing the conjugator `w` by `wv`. Rotated factors have
/// non-negative track.
pub fn normalize_relators_nonneg(d: &Derivation, relators: &[Word], chi: &Character) -> Derivation {
    let factors = d
        .factors
        .iter()
        .map(|f| {
            let Some(r) = f.relator.word(relators) else {
                return f.clone();
            };
            let track = chi_track(&r, chi);
            if track.is_nonneg() {
                return f.clone();
            }
            let cut = track.argmin();
            let len = r.len();
            let relator = RelatorRef { rotation: (f.relator.rotation + cut) % len, ..f.relator };
            Factor { conjugator: f.conjugator.concat(&r.prefix(cut)), relator }
        })
        .collect();
    Derivation { factors }
}

/// Letterwise substitution. Each entry's track must attain its minimum at
/// an endpoint; under that condition the minimum of the track of the
/// output equals that of the input. Missing entries for `ȳ` are taken as
/// inverses of the entry for `y`; letters without either are kept.
pub fn substitute_letters(w: &Word, dict: &BTreeMap<Letter, Word>, chi: &Character) -> Result<Word> {
    let image =
        |y: Letter| -> Option<Word> { dict.get(&y).cloned().or_else(|| dict.get(&y.inverse()).map(Word::inverse)) };
    for (y, image) in dict {
        let track = chi_track(image, chi);
        let lo = track.min();
        if lo != &track.values()[0] && lo != track.end() {
            return Err(Error::EndpointMinViolated(format!("{y:?}")));
        }
    }
    let mut out = Word::empty();
    for &y in w.letters() {
        match image(y) {
            Some(img) => out.extend_from(&img),
            None => out.push(y),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obligation {
    pub relation: Word,
    pub outcome: DerivationOutcome,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sigma2Aggregate {
    /// The Σ¹ verdict was not `member`; nothing to check.
    Vacuous,
    AllDerived,
    /// Some obligations ran out of budget; index of the first one.
    Unknowns {
        first: usize,
        count: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sigma2Report {
    pub max_len: usize,
    pub radius: usize,
    pub soundness: Soundness,
    pub obligations: Vec<Obligation>,
    pub aggregate: Sigma2Aggregate,
}

/// Nonempty freely reduced relations of non-negative track and length
/// ≤ `max_len` whose loop at `1` stays in `window`, in shortlex order.
pub fn window_relations(p: &Presentation, chi: &Character, max_len: usize, window: &Window) -> Result<Vec<Word>> {
    // depth-first with incremental normal forms
    #[allow(clippy::too_many_arguments)]
    fn go(
        p: &Presentation,
        chi: &Character,
        window: &Window,
        max_len: usize,
        acc: &mut Vec<Letter>,
        value: &crate::Rational,
        element: &crate::presentation::GroupElement,
        out: &mut Vec<Word>,
    ) -> Result<()> {
        if !acc.is_empty() && element.is_identity() {
            out.push(Word::from_letters(acc.clone()));
        }
        if acc.len() == max_len {
            return Ok(());
        }
        for y in Letter::all(p.rank()) {
            if acc.last().is_some_and(|&l| l == y.inverse()) {
                continue;
            }
            let next_value = value + chi.letter(y);
            if next_value.is_negative() {
                continue;
            }
            let next = p.normal_form(&element.word().with_letter(y))?;
            let Some(i) = window.index_of(&next) else {
                continue;
            };
            // the loop must be able to close within the length bound
            if window.distance(i) > max_len - acc.len() - 1 {
                continue;
            }
            acc.push(y);
            go(p, chi, window, max_len, acc, &next_value, &next, out)?;
            acc.pop();
        }
        Ok(())
    }
    let mut out = Vec::new();
    let identity = crate::presentation::GroupElement::identity();
    go(p, chi, window, max_len, &mut Vec::new(), &crate::Rational::default(), &identity, &mut out)?;
    out.sort();
    Ok(out)
}

/// Runs [`follows_along_chi`] on every window relation of length ≤
/// `max_len` plus the `extra` obligations, in parallel, reporting in
/// order. `sigma1` is the Σ¹ verdict for the same group and character;
/// without membership the probe is vacuous.
#[allow(clippy::too_many_arguments)]
pub fn sigma2_probe(
    p: &Presentation,
    chi: &Character,
    max_len: usize,
    window: &Window,
    extra: &[Word],
    sigma1: &Verdict,
    budgets: &Budgets,
) -> Result<Sigma2Report> {
    let soundness = p.soundness().and(sigma1.soundness);
    if sigma1.status != Status::Member {
        return Ok(Sigma2Report {
            max_len,
            radius: window.radius(),
            soundness,
            obligations: vec![],
            aggregate: Sigma2Aggregate::Vacuous,
        });
    }
    let mut relations = window_relations(p, chi, max_len, window)?;
    relations.extend(extra.iter().cloned());
    let outcomes: Vec<DerivationOutcome> =
        relations.par_iter().map(|rho| follows_along_chi(rho, p.relators(), chi, p, budgets)).collect::<Result<_>>()?;
    let obligations: Vec<Obligation> =
        relations.into_iter().zip(outcomes).map(|(relation, outcome)| Obligation { relation, outcome }).collect();
    let unknown: Vec<usize> = obligations
        .iter()
        .enumerate()
        .filter(|(_, o)| matches!(o.outcome, DerivationOutcome::Unknown(_)))
        .map(|(i, _)| i)
        .collect();
    let aggregate = match unknown.first() {
        None => Sigma2Aggregate::AllDerived,
        Some(&first) => Sigma2Aggregate::Unknowns { first, count: unknown.len() },
    };
    Ok(Sigma2Report { max_len, radius: window.radius(), soundness, obligations, aggregate })
}

/// Reduced relations of length ≤ `max_len` with non-negative track, without
/// a window restriction. Used to cross-check [`window_relations`].
pub fn all_relations(p: &Presentation, chi: &Character, max_len: usize) -> Result<Vec<Word>> {
    let mut out = Vec::new();
    let mut err = None;
    reduced_words(p.rank(), max_len, |w| {
        if w.is_empty() || !is_nonneg_track(w, chi) {
            return false;
        }
        match p.is_relation(w) {
            Ok(true) => out.push(w.clone()),
            Ok(false) => {}
            Err(e) => {
                err = Some(e);
                return true;
            }
        }
        false
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}
