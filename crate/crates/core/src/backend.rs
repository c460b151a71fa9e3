//! Word-problem backends. Each one maps a word to a canonical word such that
//! two words are equal in the group iff their canonical words coincide.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::rewriting::RewritingSystem;
use crate::word::{free_reduce, Letter, Word};

/// Whether verdicts derived from a backend are proofs or best effort.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Soundness {
    Exact,
    Approximate,
}

impl Soundness {
    pub fn and(self, other: Soundness) -> Soundness {
        self.max(other)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Soundness::Exact => "exact",
            Soundness::Approximate => "approximate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Backend {
    Free,
    /// Free abelian on all generators.
    FreeAbelian,
    /// `BS(1, n) = ⟨a, t | t a t⁻¹ = aⁿ⟩`; generator 0 is `a`, generator 1 is `t`.
    BaumslagSolitar {
        n: u32,
    },
    /// Commuting factors, each acting on its own generators.
    DirectProduct(Vec<Factor>),
    Rewriting(RewritingSystem),
    /// A presentation on new generators, each naming an element of `base`.
    /// `sections[x]` spells base generator `x` in the new generators.
    Reencoded {
        base: Arc<Presentation>,
        images: Vec<Word>,
        sections: Vec<Word>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub backend: Backend,
    /// Global generator indices owned by this factor, in local order.
    pub generators: Vec<u32>,
}

impl Backend {
    /// Checks structural constraints for a presentation of the given rank.
    pub fn validate(&self, rank: usize) -> Result<()> {
        match self {
            Backend::Free | Backend::FreeAbelian | Backend::Rewriting(_) => Ok(()),
            Backend::BaumslagSolitar { n } => {
                if *n < 2 {
                    return Err(Error::InvalidBackend(format!("bs 1 {n}: need n >= 2")));
                }
                if rank != 2 {
                    return Err(Error::InvalidBackend(format!("bs backend needs exactly 2 generators, got {rank}")));
                }
                Ok(())
            }
            Backend::DirectProduct(factors) => {
                let mut seen = vec![false; rank];
                for factor in factors {
                    for &g in &factor.generators {
                        let slot = seen.get_mut(g as usize).ok_or(Error::GeneratorOutOfRange(g))?;
                        if *slot {
                            return Err(Error::InvalidBackend(format!("generator {g} appears in two factors")));
                        }
                        *slot = true;
                    }
                    factor.backend.validate(factor.generators.len())?;
                }
                if seen.iter().any(|s| !s) {
                    return Err(Error::InvalidBackend("product factors do not cover every generator".into()));
                }
                Ok(())
            }
            Backend::Reencoded { base, images, sections } => {
                if images.len() != rank {
                    return Err(Error::InvalidBackend("one image per generator required".into()));
                }
                if sections.len() != base.rank() {
                    return Err(Error::InvalidBackend("one section per base generator required".into()));
                }
                Ok(())
            }
        }
    }

    pub fn soundness(&self) -> Soundness {
        match self {
            Backend::Rewriting(rs) if !rs.is_confluent() => Soundness::Approximate,
            Backend::DirectProduct(factors) => {
                factors.iter().fold(Soundness::Exact, |s, f| s.and(f.backend.soundness()))
            }
            Backend::Reencoded { base, .. } => base.soundness(),
            _ => Soundness::Exact,
        }
    }

    /// True when the backend group is abelian.
    pub fn is_abelian(&self, rank: usize) -> bool {
        match self {
            Backend::FreeAbelian => true,
            Backend::Free => rank <= 1,
            Backend::DirectProduct(factors) => factors.iter().all(|f| f.backend.is_abelian(f.generators.len())),
            _ => false,
        }
    }

    pub fn normal_form(&self, rank: usize, word: &Word) -> Result<Word> {
        if let Some(l) = word.letters().iter().find(|l| l.generator() as usize >= rank) {
            return Err(Error::GeneratorOutOfRange(l.generator()));
        }
        match self {
            Backend::Free => Ok(free_reduce(word)),
            Backend::FreeAbelian => Ok(abelian_normal_form(rank, word)),
            Backend::BaumslagSolitar { n } => Ok(bs_normal_form(*n, word)),
            Backend::DirectProduct(factors) => {
                let mut out = Word::empty();
                for factor in factors {
                    let local: Word = word
                        .letters()
                        .iter()
                        .filter_map(|l| {
                            factor
                                .generators
                                .iter()
                                .position(|&g| g == l.generator())
                                .map(|i| Letter::new(i as u32, l.is_inverse()))
                        })
                        .collect();
                    let nf = factor.backend.normal_form(factor.generators.len(), &local)?;
                    for l in nf.letters() {
                        out.push(Letter::new(factor.generators[l.generator() as usize], l.is_inverse()));
                    }
                }
                Ok(out)
            }
            Backend::Rewriting(rs) => rs.normal_form(word),
            Backend::Reencoded { base, images, sections } => {
                let mut spelled = Word::empty();
                for l in word.letters() {
                    let image = &images[l.generator() as usize];
                    if l.is_inverse() {
                        spelled.extend_from(&image.inverse());
                    } else {
                        spelled.extend_from(image);
                    }
                }
                let canonical = base.normal_form(&spelled)?;
                let mut out = Word::empty();
                for l in canonical.word().letters() {
                    let section = &sections[l.generator() as usize];
                    if l.is_inverse() {
                        out.extend_from(&section.inverse());
                    } else {
                        out.extend_from(section);
                    }
                }
                Ok(free_reduce(&out))
            }
        }
    }
}

fn abelian_normal_form(rank: usize, word: &Word) -> Word {
    let mut exponents = vec![0i64; rank];
    for l in word.letters() {
        exponents[l.generator() as usize] += l.sign() as i64;
    }
    let mut out = Word::empty();
    for (g, &e) in exponents.iter().enumerate() {
        out.extend_from(&Word::power(Letter::pos(g as u32), e));
    }
    out
}

/// Element of `BS(1, n)` as the affine map `x ↦ nᵏ x + r`, with `a = (1, 1)`
/// and `t = (n, 0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Affine {
    shift: BigRational,
    k: i64,
}

fn pow_rational(n: u32, k: i64) -> BigRational {
    let base = BigInt::from(n);
    let p = num_traits::pow(base, k.unsigned_abs() as usize);
    if k >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

fn bs_normal_form(n: u32, word: &Word) -> Word {
    let a = 0u32;
    let t = 1u32;
    let mut g = Affine { shift: BigRational::zero(), k: 0 };
    for l in word.letters() {
        if l.generator() == a {
            let step = pow_rational(n, g.k);
            if l.is_inverse() {
                g.shift -= step;
            } else {
                g.shift += step;
            }
        } else if l.is_inverse() {
            g.k -= 1;
        } else {
            g.k += 1;
        }
    }
    // shift = m / nᵉ with e minimal; the element is t⁻ᵉ aᵐ tᵉ⁺ᵏ.
    let nn = BigInt::from(n);
    let mut e = 0i64;
    let mut scaled = g.shift.clone();
    while !scaled.is_integer() {
        scaled *= BigRational::from_integer(nn.clone());
        e += 1;
    }
    let m = scaled.to_integer();
    let mut out = Word::empty();
    if m.is_zero() {
        out.extend_from(&Word::power(Letter::pos(t), g.k));
        return out;
    }
    debug_assert!(e == 0 || !m.is_multiple_of(&nn));
    let m_abs = m.abs().to_usize().expect("exponent fits in memory");
    out.extend_from(&Word::power(Letter::pos(t), -e));
    let a_letter = if m.is_negative() { Letter::neg(a) } else { Letter::pos(a) };
    for _ in 0..m_abs {
        out.push(a_letter);
    }
    out.extend_from(&Word::power(Letter::pos(t), e + g.k));
    out
}
