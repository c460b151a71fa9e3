//! Letters over `X ⊔ X̄` and finite words built from them.
//!
//! A [`Letter`] packs a generator index and a sign into one `u32` so that the
//! derived ordering is the declaration order `x0 < x0⁻¹ < x1 < x1⁻¹ < …`.
//! [`Word`] orders shortlex on top of that, which is the tie-break used by
//! every enumeration in the crate.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u32);

impl Letter {
    pub fn new(generator: u32, inverse: bool) -> Self {
        Letter(generator * 2 + inverse as u32)
    }

    pub fn pos(generator: u32) -> Self {
        Letter::new(generator, false)
    }

    pub fn neg(generator: u32) -> Self {
        Letter::new(generator, true)
    }

    pub fn generator(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    /// `+1` or `-1`.
    pub fn sign(self) -> i32 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    /// Dense index in `0..2 * rank`, in declaration order.
    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn from_code(code: usize) -> Self {
        Letter(code as u32)
    }

    /// All letters over `rank` generators in declaration order.
    pub fn all(rank: usize) -> impl Iterator<Item = Letter> {
        (0..2 * rank).map(Letter::from_code)
    }

    pub fn display<'a, S: AsRef<str>>(self, names: &'a [S]) -> LetterDisplay<'a, S> {
        LetterDisplay { letter: self, names }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "x{}^-1", self.generator())
        } else {
            write!(f, "x{}", self.generator())
        }
    }
}

pub struct LetterDisplay<'a, S> {
    letter: Letter,
    names: &'a [S],
}

impl<S: AsRef<str>> fmt::Display for LetterDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.names.get(self.letter.generator() as usize).map(|s| s.as_ref()).unwrap_or("?");
        if self.letter.is_inverse() {
            write!(f, "{name}^-1")
        } else {
            f.write_str(name)
        }
    }
}

/// A finite word over `X^±`. Words are not required to be freely reduced.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn with_letter(&self, letter: Letter) -> Word {
        let mut letters = Vec::with_capacity(self.len() + 1);
        letters.extend_from_slice(&self.0);
        letters.push(letter);
        Word(letters)
    }

    /// `w̄`: reversed, every letter inverted.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// `x^k` for a single generator letter.
    pub fn power(letter: Letter, exponent: i64) -> Word {
        let letter = if exponent < 0 { letter.inverse() } else { letter };
        Word(vec![letter; exponent.unsigned_abs() as usize])
    }

    /// Rotation moving the first `offset` letters to the end.
    pub fn rotate(&self, offset: usize) -> Word {
        if self.is_empty() {
            return Word::empty();
        }
        let k = offset % self.len();
        let mut letters = Vec::with_capacity(self.len());
        letters.extend_from_slice(&self.0[k..]);
        letters.extend_from_slice(&self.0[..k]);
        Word(letters)
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word(self.0[range].to_vec())
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inverse())
    }

    /// Maximal generator index used plus one.
    pub fn rank_hint(&self) -> usize {
        self.0.iter().map(|l| l.generator() as usize + 1).max().unwrap_or(0)
    }

    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }

    /// Parses `name[^int]` tokens separated by whitespace. The token `1`
    /// denotes the empty word.
    pub fn parse<S: AsRef<str>>(text: &str, names: &[S]) -> Result<Word> {
        let mut letters = Vec::new();
        let mut offset = 0;
        for token in text.split_whitespace() {
            let start = text[offset..].find(token).map(|i| i + offset).unwrap_or(offset);
            offset = start + token.len();
            letters.extend(parse_token(token, start + 1, names)?.0);
        }
        Ok(Word(letters))
    }

    pub fn display<'a, S: AsRef<str>>(&'a self, names: &'a [S]) -> WordDisplay<'a, S> {
        WordDisplay { word: self, names }
    }
}

fn parse_token<S: AsRef<str>>(token: &str, column: usize, names: &[S]) -> Result<Word> {
    if token == "1" {
        return Ok(Word::empty());
    }
    let (name, exponent) = match token.find('^') {
        Some(i) => {
            let exp_text = &token[i + 1..];
            let exponent: i64 = exp_text.parse().map_err(|_| Error::MalformedWord {
                column: column + i + 1,
                message: format!("malformed exponent `{exp_text}` in `{token}`"),
            })?;
            (&token[..i], exponent)
        }
        None => (token, 1),
    };
    if name.is_empty() {
        return Err(Error::MalformedWord { column, message: format!("missing generator name in `{token}`") });
    }
    let generator =
        names.iter().position(|n| n.as_ref() == name).ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
    Ok(Word::power(Letter::pos(generator as u32), exponent))
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.shortlex_cmp(other)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("ε");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l:?}")?;
        }
        Ok(())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

pub struct WordDisplay<'a, S> {
    word: &'a Word,
    names: &'a [S],
}

impl<S: AsRef<str>> fmt::Display for WordDisplay<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.word.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", l.display(self.names))?;
        }
        Ok(())
    }
}

/// Cancels adjacent `y ȳ` pairs until none remain. The result is the unique
/// freely reduced representative.
pub fn free_reduce(word: &Word) -> Word {
    let mut stack: Vec<Letter> = Vec::with_capacity(word.len());
    for &l in word.letters() {
        match stack.last() {
            Some(&top) if top == l.inverse() => {
                stack.pop();
            }
            _ => stack.push(l),
        }
    }
    Word(stack)
}

/// Cyclic reduction: strips `y … ȳ` from both ends of a freely reduced word.
pub fn cyclic_reduce(word: &Word) -> Word {
    let reduced = free_reduce(word);
    let letters = reduced.letters();
    let (mut lo, mut hi) = (0, letters.len());
    while hi - lo >= 2 && letters[lo] == letters[hi - 1].inverse() {
        lo += 1;
        hi -= 1;
    }
    Word(letters[lo..hi].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    const AB: [&str; 2] = ["a", "b"];

    fn w(text: &str) -> Word {
        Word::parse(text, &AB).unwrap()
    }

    #[test]
    fn letter_order_is_declaration_order() {
        let mut all: Vec<Letter> = vec![Letter::neg(1), Letter::pos(1), Letter::neg(0), Letter::pos(0)];
        all.sort();
        assert_eq!(all, vec![Letter::pos(0), Letter::neg(0), Letter::pos(1), Letter::neg(1)]);
    }

    #[test]
    fn parse_exponents() {
        assert_eq!(w("a^3 b^-2"), w("a a a b^-1 b^-1"));
        assert_eq!(w("a^0"), Word::empty());
        assert_eq!(w("1"), Word::empty());
        assert_eq!(w("").len(), 0);
    }

    #[test]
    fn malformed_exponent_reports_column() {
        let err = Word::parse("b a^", &AB).unwrap_err();
        assert_eq!(err, Error::MalformedWord { column: 5, message: "malformed exponent `` in `a^`".into() });
        assert!(matches!(Word::parse("c", &AB), Err(Error::UnknownGenerator(_))));
    }

    #[test]
    fn free_reduce_examples() {
        assert_eq!(free_reduce(&w("a a^-1 b")), w("b"));
        assert_eq!(free_reduce(&Word::empty()), Word::empty());
        assert_eq!(free_reduce(&w("a b b^-1 b b^-1 a")), w("a a"));
    }

    /// Applies cancellations in every possible order and collects the
    /// terminal words; confluence means exactly one terminal word.
    fn all_cancellation_orders(word: &Word) -> std::collections::BTreeSet<Word> {
        let letters = word.letters();
        let mut terminal = std::collections::BTreeSet::new();
        let mut any = false;
        for i in 0..letters.len().saturating_sub(1) {
            if letters[i] == letters[i + 1].inverse() {
                any = true;
                let mut next = letters.to_vec();
                next.drain(i..i + 2);
                terminal.extend(all_cancellation_orders(&Word::from_letters(next)));
            }
        }
        if !any {
            terminal.insert(word.clone());
        }
        terminal
    }

    #[test]
    fn free_reduce_matches_every_cancellation_order() {
        let word = w("a b b^-1 b b^-1 a");
        let terminal = all_cancellation_orders(&word);
        assert_eq!(terminal.len(), 1);
        assert_eq!(terminal.into_iter().next().unwrap(), free_reduce(&word));
    }

    #[test]
    fn display_round_trip() {
        let word = w("a b^-1 a^2");
        let text = word.display(&AB).to_string();
        assert_eq!(text, "a b^-1 a a");
        assert_eq!(Word::parse(&text, &AB).unwrap(), word);
        assert_eq!(Word::empty().display(&AB).to_string(), "1");
    }

    #[test]
    fn shortlex() {
        assert!(w("b") < w("a a"));
        assert!(w("a") < w("a^-1"));
        assert!(w("a^-1 b") < w("b a"));
    }

    #[test]
    fn cyclic_reduction() {
        assert_eq!(cyclic_reduce(&w("a b a^-1")), w("b"));
        assert_eq!(cyclic_reduce(&w("b a b^-1 a^-1")), w("b a b^-1 a^-1"));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn word_strategy() -> impl Strategy<Value = Word> {
            proptest::collection::vec(0usize..4, 0..24)
                .prop_map(|codes| codes.into_iter().map(Letter::from_code).collect())
        }

        proptest! {
            #[test]
            fn reduce_idempotent_and_shrinking(word in word_strategy()) {
                let r = free_reduce(&word);
                prop_assert!(r.len() <= word.len());
                prop_assert_eq!(free_reduce(&r), r.clone());
                prop_assert!(r.is_freely_reduced());
            }

            #[test]
            fn reduce_commutes_with_inverse(word in word_strategy()) {
                prop_assert_eq!(free_reduce(&word.inverse()), free_reduce(&word).inverse());
            }

            #[test]
            fn word_times_inverse_reduces_to_empty(word in word_strategy()) {
                prop_assert!(free_reduce(&word.concat(&word.inverse())).is_empty());
            }
        }
    }
}
