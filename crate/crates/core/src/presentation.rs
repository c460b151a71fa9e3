//! Presentations `⟨X | R⟩` with a word-problem backend.

use std::collections::HashSet;
use std::fmt;

use crate::backend::{Backend, Factor, Soundness};
use crate::error::{Error, Result};
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorSymbol {
    pub name: String,
    pub index: u32,
}

/// A group element, stored as its backend normal form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    canonical: Word,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement { canonical: Word::empty() }
    }

    pub fn word(&self) -> &Word {
        &self.canonical
    }

    pub fn into_word(self) -> Word {
        self.canonical
    }

    pub fn is_identity(&self) -> bool {
        self.canonical.is_empty()
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}]", self.canonical)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<GeneratorSymbol>,
    names: Vec<String>,
    relators: Vec<Word>,
    backend: Backend,
    central: Vec<u32>,
}

impl Presentation {
    /// Validates names, relators, backend structure, that every relator is
    /// trivial under an exact backend, and that central generators commute
    /// with all generators.
    pub fn new(names: Vec<String>, relators: Vec<Word>, backend: Backend, central: Vec<u32>) -> Result<Self> {
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateGenerator(name.clone()));
            }
        }
        let rank = names.len();
        for r in &relators {
            if let Some(l) = r.letters().iter().find(|l| l.generator() as usize >= rank) {
                return Err(Error::GeneratorOutOfRange(l.generator()));
            }
        }
        backend.validate(rank)?;
        let generators =
            names.iter().enumerate().map(|(i, n)| GeneratorSymbol { name: n.clone(), index: i as u32 }).collect();
        let mut central = central;
        central.sort_unstable();
        central.dedup();
        let p = Presentation { generators, names, relators, backend, central };
        if p.soundness() == Soundness::Exact {
            for (index, r) in p.relators.iter().enumerate() {
                if !p.normal_form(r)?.is_identity() {
                    return Err(Error::RelatorNotTrivial { index });
                }
            }
        }
        for &z in &p.central {
            if z as usize >= rank {
                return Err(Error::GeneratorOutOfRange(z));
            }
            for x in 0..rank as u32 {
                let zx = Word::from_letters(vec![Letter::pos(z), Letter::pos(x)]);
                let xz = Word::from_letters(vec![Letter::pos(x), Letter::pos(z)]);
                if p.normal_form(&zx)? != p.normal_form(&xz)? {
                    return Err(Error::NotCentral(p.names[z as usize].clone()));
                }
            }
        }
        Ok(p)
    }

    /// Free group on the given names.
    pub fn free(names: &[&str]) -> Self {
        Presentation::new(names.iter().map(|s| s.to_string()).collect(), vec![], Backend::Free, vec![])
            .expect("free presentation is valid")
    }

    /// Free abelian group with all commutators as relators.
    pub fn free_abelian(names: &[&str]) -> Self {
        let mut relators = Vec::new();
        for i in 0..names.len() as u32 {
            for j in i + 1..names.len() as u32 {
                relators.push(commutator(i, j));
            }
        }
        Presentation::new(names.iter().map(|s| s.to_string()).collect(), relators, Backend::FreeAbelian, vec![])
            .expect("free abelian presentation is valid")
    }

    /// `BS(1, n) = ⟨a, t | t a t⁻¹ a⁻ⁿ⟩`.
    pub fn baumslag_solitar(n: u32) -> Result<Self> {
        let mut relator = vec![Letter::pos(1), Letter::pos(0), Letter::neg(1)];
        relator.extend(std::iter::repeat_n(Letter::neg(0), n as usize));
        Presentation::new(
            vec!["a".into(), "t".into()],
            vec![Word::from_letters(relator)],
            Backend::BaumslagSolitar { n },
            vec![],
        )
    }

    /// `F₂ × ℤ = ⟨a, b, t | [a,t], [b,t]⟩` with `t` declared central.
    pub fn f2_times_z() -> Self {
        Presentation::new(
            vec!["a".into(), "b".into(), "t".into()],
            vec![commutator(0, 2), commutator(1, 2)],
            Backend::DirectProduct(vec![
                Factor { backend: Backend::Free, generators: vec![0, 1] },
                Factor { backend: Backend::FreeAbelian, generators: vec![2] },
            ]),
            vec![2],
        )
        .expect("F2 x Z presentation is valid")
    }

    pub fn generators(&self) -> &[GeneratorSymbol] {
        &self.generators
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn central(&self) -> &[u32] {
        &self.central
    }

    pub fn soundness(&self) -> Soundness {
        self.backend.soundness()
    }

    pub fn is_abelian(&self) -> bool {
        self.backend.is_abelian(self.rank())
    }

    pub fn generator_index(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        Word::parse(text, &self.names)
    }

    pub fn show(&self, word: &Word) -> String {
        word.display(&self.names).to_string()
    }

    pub fn normal_form(&self, word: &Word) -> Result<GroupElement> {
        Ok(GroupElement { canonical: self.backend.normal_form(self.rank(), word)? })
    }

    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.normal_form(&g.canonical.concat(&h.canonical))
    }

    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement> {
        self.normal_form(&g.canonical.inverse())
    }

    pub fn equal(&self, u: &Word, v: &Word) -> Result<bool> {
        Ok(self.normal_form(u)? == self.normal_form(v)?)
    }

    pub fn is_relation(&self, word: &Word) -> Result<bool> {
        Ok(self.normal_form(word)?.is_identity())
    }
}

/// `x y x⁻¹ y⁻¹` on generator indices.
pub fn commutator(x: u32, y: u32) -> Word {
    Word::from_letters(vec![Letter::pos(x), Letter::pos(y), Letter::neg(x), Letter::neg(y)])
}
