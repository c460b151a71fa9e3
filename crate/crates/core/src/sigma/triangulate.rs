//! Re-presenting `G` on `C = D^{m,χ} ∪ (D^{m,χ})⁻¹` with relators of length
//! at most 3.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::backend::Backend;
use crate::budget::Budgets;
use crate::character::{char_value, Character};
use crate::error::{Error, Result};
use crate::presentation::{GroupElement, Presentation};
use crate::track::{chi_track, enumerate_levels, FiniteSubset};
use crate::word::{free_reduce, Letter, Word};

#[derive(Debug, Clone)]
pub struct Triangulation {
    /// `⟨C | R₃⟩`, backed by the original group.
    pub presentation: Presentation,
    /// The element named by each new generator.
    pub elements: Vec<GroupElement>,
    /// The character on the new generators.
    pub character: Character,
    /// Original relators, rotated to non-negative track and spelled in `C`.
    pub original_relators: Vec<Word>,
}

/// Builds `C` from the level set `D^{m,χ}` of the generators `D` and emits
/// the triangles `c₁ y c̄₂` with `c₁, c₂ ∈ C ∪ {1}`, `y ∈ D^±` and
/// `c₁y = c₂`. Generators `c0, c1, …` name the non-identity elements of `C`
/// in shortlex order; `1` is dropped from words.
pub fn triangularize(p: &Presentation, chi: &Character, m: usize, budgets: &Budgets) -> Result<Triangulation> {
    let d = FiniteSubset::generators(p)?;
    let levels = enumerate_levels(&d, chi, m, p, budgets)?;
    let mut members: BTreeSet<GroupElement> = BTreeSet::new();
    for g in levels.elements() {
        members.insert(g.clone());
        members.insert(p.inverse(g)?);
    }
    members.remove(&GroupElement::identity());
    let elements: Vec<GroupElement> = members.into_iter().collect();
    let symbol: BTreeMap<&GroupElement, u32> = elements.iter().enumerate().map(|(i, g)| (g, i as u32)).collect();
    let spell = |g: &GroupElement| -> Word {
        match symbol.get(g) {
            Some(&i) => Word::from_letters(vec![Letter::pos(i)]),
            None => Word::empty(),
        }
    };

    // each base generator and its inverse are in C (one of them is in D^{1,χ})
    let mut sections = Vec::with_capacity(p.rank());
    for x in 0..p.rank() as u32 {
        let g = p.normal_form(&Word::from_letters(vec![Letter::pos(x)]))?;
        if g.is_identity() {
            sections.push(Word::empty());
            continue;
        }
        let w = spell(&g);
        if w.is_empty() {
            return Err(Error::Precondition(format!("generator {x} missing from C; need m >= 1")));
        }
        sections.push(w);
    }
    let step_letters: Vec<(Word, GroupElement)> = Letter::all(p.rank())
        .map(|y| {
            let base = Word::from_letters(vec![y]);
            let g = p.normal_form(&base)?;
            let sec = &sections[y.generator() as usize];
            let w = if y.is_inverse() { sec.inverse() } else { sec.clone() };
            Ok((w, g))
        })
        .collect::<Result<_>>()?;

    let mut relators: BTreeSet<Word> = BTreeSet::new();
    let mut with_identity = vec![GroupElement::identity()];
    with_identity.extend(elements.iter().cloned());
    for c1 in &with_identity {
        for (y, yg) in &step_letters {
            let c2 = p.multiply(c1, yg)?;
            if !c2.is_identity() && !symbol.contains_key(&c2) {
                continue;
            }
            let r = spell(c1).concat(y).concat(&spell(&c2).inverse());
            let reduced = free_reduce(&r);
            if !reduced.is_empty() {
                relators.insert(r);
            }
        }
    }
    let relators: Vec<Word> = relators.into_iter().collect();

    let names: Vec<String> = (0..elements.len()).map(|i| format!("c{i}")).collect();
    let images: Vec<Word> = elements.iter().map(|g| g.word().clone()).collect();
    let values = elements.iter().map(|g| char_value(chi, g.word())).collect();
    let presentation = Presentation::new(
        names,
        relators,
        Backend::Reencoded { base: Arc::new(p.clone()), images, sections: sections.clone() },
        vec![],
    )?;
    let character = Character::for_presentation(&presentation, values)?;

    let original_relators = p
        .relators()
        .iter()
        .map(|r| {
            let cut = chi_track(r, chi).argmin();
            let rotated = r.rotate(cut);
            let mut out = Word::empty();
            for l in rotated.letters() {
                let sec = &sections[l.generator() as usize];
                out.extend_from(&if l.is_inverse() { sec.inverse() } else { sec.clone() });
            }
            out
        })
        .collect();
    Ok(Triangulation { presentation, elements, character, original_relators })
}
