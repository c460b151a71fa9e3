//! Pulling characters back along homomorphisms given on generators.

use crate::character::{char_value, Character};
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::word::Word;

/// `χ_G = χ_Q ∘ f` where `images[x]` is a `Q`-word for `f(x)`. Every relator
/// of `G` must map to a relation of `Q`.
pub fn pullback_character(g: &Presentation, images: &[Word], q: &Presentation, chi_q: &Character) -> Result<Character> {
    if images.len() != g.rank() {
        return Err(Error::CharacterArity { expected: g.rank(), got: images.len() });
    }
    for (i, r) in g.relators().iter().enumerate() {
        if !q.is_relation(&map_word(r, images))? {
            return Err(Error::NotAHomomorphism(i));
        }
    }
    let values = images.iter().map(|w| char_value(chi_q, w)).collect();
    Character::for_presentation(g, values)
}

/// Applies the generator map letterwise.
pub fn map_word(w: &Word, images: &[Word]) -> Word {
    let mut out = Word::empty();
    for l in w.letters() {
        let image = &images[l.generator() as usize];
        if l.is_inverse() {
            out.extend_from(&image.inverse());
        } else {
            out.extend_from(image);
        }
    }
    out
}
