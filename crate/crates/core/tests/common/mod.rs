//! Independent models of the test groups. Nothing here goes through the
//! library's backends: ℤ² is exponent pairs, F₂ is a reduction stack and
//! BS(1,2) = ⟨a, t | t a t⁻¹ = a²⟩ is the affine group `x ↦ 2ᵏx + b`.
#![allow(dead_code)]

use sigma_core::{Character, Letter, Presentation, Rational, Word};

/// `b` is stored scaled by `2^BS_SCALE`, enough for words of length < 40.
const BS_SCALE: i32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Z2,
    F2,
    Bs12,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Z2(i64, i64),
    F2(Vec<(u32, bool)>),
    /// `(k, b · 2^BS_SCALE)`.
    Bs(i32, i128),
}

impl Model {
    pub fn presentation(self) -> Presentation {
        match self {
            Model::Z2 => Presentation::free_abelian(&["a", "b"]),
            Model::F2 => Presentation::free(&["a", "b"]),
            Model::Bs12 => Presentation::baumslag_solitar(2).unwrap(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Model::Z2 => "Z^2",
            Model::F2 => "F_2",
            Model::Bs12 => "BS(1,2)",
        }
    }

    pub fn identity(self) -> Elem {
        match self {
            Model::Z2 => Elem::Z2(0, 0),
            Model::F2 => Elem::F2(Vec::new()),
            Model::Bs12 => Elem::Bs(0, 0),
        }
    }

    /// Right multiplication by one letter.
    pub fn step(self, e: &Elem, l: Letter) -> Elem {
        let sign = if l.is_inverse() { -1 } else { 1 };
        match e.clone() {
            Elem::Z2(x, y) => match l.generator() {
                0 => Elem::Z2(x + sign, y),
                _ => Elem::Z2(x, y + sign),
            },
            Elem::F2(mut stack) => {
                let letter = (l.generator(), l.is_inverse());
                if stack.last() == Some(&(letter.0, !letter.1)) {
                    stack.pop();
                } else {
                    stack.push(letter);
                }
                Elem::F2(stack)
            }
            // (2ᵏ, b)·a = (2ᵏ, b + 2ᵏ), (2ᵏ, b)·t = (2ᵏ⁺¹, b)
            Elem::Bs(k, b) => match l.generator() {
                0 => Elem::Bs(k, b + sign as i128 * (1i128 << (k + BS_SCALE))),
                _ => Elem::Bs(k + sign as i32, b),
            },
        }
    }

    pub fn eval(self, w: &Word) -> Elem {
        w.letters().iter().fold(self.identity(), |e, &l| self.step(&e, l))
    }
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Prefix sums of letter values, computed without the library's track code.
pub fn prefix_values(w: &Word, chi: &Character) -> Vec<Rational> {
    let mut out = vec![int(0)];
    for &l in w.letters() {
        let v = chi.generator(l.generator()).clone();
        let v = if l.is_inverse() { -v } else { v };
        let next = out.last().unwrap() + v;
        out.push(next);
    }
    out
}

pub fn track_min(w: &Word, chi: &Character) -> Rational {
    prefix_values(w, chi).into_iter().min().unwrap()
}

/// Calls `visit` on every word over `X^±` of length ≤ `max_len` whose
/// track stays ≥ 0. `visit` sees the word and its element; returning
/// `false` prunes the extensions.
pub fn nonneg_words(model: Model, chi: &Character, max_len: usize, visit: &mut dyn FnMut(&[Letter], &Elem) -> bool) {
    fn go(
        model: Model,
        values: &[Rational],
        max_len: usize,
        acc: &mut Vec<Letter>,
        elem: &Elem,
        value: &Rational,
        visit: &mut dyn FnMut(&[Letter], &Elem) -> bool,
    ) {
        if !visit(acc, elem) || acc.len() == max_len {
            return;
        }
        for code in 0..values.len() {
            let next_value = value + &values[code];
            if next_value < int(0) {
                continue;
            }
            let l = Letter::from_code(code);
            let next = model.step(elem, l);
            acc.push(l);
            go(model, values, max_len, acc, &next, &next_value, visit);
            acc.pop();
        }
    }
    let values: Vec<Rational> = (0..2 * chi.rank()).map(|c| chi.letter(Letter::from_code(c))).collect();
    go(model, &values, max_len, &mut Vec::new(), &model.identity(), &int(0), visit);
}
