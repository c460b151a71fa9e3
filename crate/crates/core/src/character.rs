//! Rational characters `χ : G → ℚ` given by values on generators.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::word::{Letter, Word};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Character {
    values: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CharacterCheck {
    Valid,
    Violation { relator: usize, residual: Rational },
}

impl Character {
    pub fn new(values: Vec<Rational>) -> Self {
        Character { values }
    }

    pub fn zero(rank: usize) -> Self {
        Character { values: vec![Rational::zero(); rank] }
    }

    /// Integer values, mostly for tests.
    pub fn from_ints(values: &[i64]) -> Self {
        Character { values: values.iter().map(|&v| Rational::from_integer(v.into())).collect() }
    }

    /// Builds and validates a character for `p`.
    pub fn for_presentation(p: &Presentation, values: Vec<Rational>) -> Result<Self> {
        if values.len() != p.rank() {
            return Err(Error::CharacterArity { expected: p.rank(), got: values.len() });
        }
        let chi = Character { values };
        match validate_character(p, &chi) {
            CharacterCheck::Valid => Ok(chi),
            CharacterCheck::Violation { relator, residual } => {
                Err(Error::InvalidCharacter { relator, residual: residual.to_string() })
            }
        }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    pub fn generator(&self, g: u32) -> &Rational {
        &self.values[g as usize]
    }

    pub fn letter(&self, l: Letter) -> Rational {
        let v = &self.values[l.generator() as usize];
        if l.is_inverse() {
            -v
        } else {
            v.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, lambda: &Rational) -> Character {
        Character { values: self.values.iter().map(|v| v * lambda).collect() }
    }

    pub fn value(&self, w: &Word) -> Rational {
        char_value(self, w)
    }
}

/// Signed sum of generator values over the letters of `w`.
pub fn char_value(chi: &Character, w: &Word) -> Rational {
    let mut total = Rational::zero();
    for &l in w.letters() {
        let v = &chi.values[l.generator() as usize];
        if l.is_inverse() {
            total -= v;
        } else {
            total += v;
        }
    }
    total
}

/// Reports the first relator whose value is nonzero.
pub fn validate_character(p: &Presentation, chi: &Character) -> CharacterCheck {
    for (relator, r) in p.relators().iter().enumerate() {
        let residual = char_value(chi, r);
        if !residual.is_zero() {
            return CharacterCheck::Violation { relator, residual };
        }
    }
    CharacterCheck::Valid
}

/// A basis of the characters of `p`: the null space of the relator
/// exponent-sum matrix, one vector per free column of its reduced row
/// echelon form.
pub fn character_space_basis(p: &Presentation) -> Vec<Vec<Rational>> {
    let rank = p.rank();
    let mut rows: Vec<Vec<Rational>> = p
        .relators()
        .iter()
        .map(|r| {
            let mut row = vec![Rational::zero(); rank];
            for l in r.letters() {
                row[l.generator() as usize] += Rational::from_integer(l.sign().into());
            }
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..rank {
        let Some(found) = (next..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(next, found);
        let lead = rows[next][col].clone();
        for v in rows[next].iter_mut() {
            *v /= &lead;
        }
        for i in 0..rows.len() {
            if i != next && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                let pivot_row = rows[next].clone();
                for (v, p) in rows[i].iter_mut().zip(&pivot_row) {
                    *v -= &factor * p;
                }
            }
        }
        pivots.push(col);
        next += 1;
    }
    (0..rank)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); rank];
            v[free] = Rational::from_integer(1.into());
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = -rows[k][free].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn commutator_is_valid_for_any_values() {
        let p = Presentation::free_abelian(&["a", "b"]);
        assert_eq!(validate_character(&p, &Character::from_ints(&[1, 0])), CharacterCheck::Valid);
    }

    #[test]
    fn bs_violation_residual() {
        let p = Presentation::baumslag_solitar(2).unwrap();
        assert_eq!(
            validate_character(&p, &Character::from_ints(&[1, 0])),
            CharacterCheck::Violation { relator: 0, residual: q(-1, 1) }
        );
        assert_eq!(validate_character(&p, &Character::from_ints(&[0, -1])), CharacterCheck::Valid);
    }

    #[test]
    fn values() {
        let names = ["a", "b"];
        let chi = Character::from_ints(&[1, 0]);
        assert_eq!(char_value(&chi, &Word::parse("a b a", &names).unwrap()), q(2, 1));
        assert_eq!(char_value(&chi, &Word::empty()), q(0, 1));
        let bs = Presentation::baumslag_solitar(2).unwrap();
        let chi = Character::from_ints(&[0, -1]);
        assert_eq!(char_value(&chi, &bs.parse_word("t^-1 a t").unwrap()), q(0, 1));
    }

    #[test]
    fn arity_checked() {
        let p = Presentation::free(&["a", "b"]);
        assert!(matches!(
            Character::for_presentation(&p, vec![q(1, 1)]),
            Err(Error::CharacterArity { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn basis_of_character_space() {
        let bs = Presentation::baumslag_solitar(2).unwrap();
        assert_eq!(character_space_basis(&bs), vec![vec![q(0, 1), q(1, 1)]]);
        let z2 = Presentation::free_abelian(&["a", "b"]);
        assert_eq!(character_space_basis(&z2).len(), 2);
    }
}
