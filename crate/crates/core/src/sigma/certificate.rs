//! Σ¹: certificates, their verification, oracles, the free-tree refutation
//! and the bounded search.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rand::Rng;

use crate::backend::{Backend, Soundness};
use crate::budget::{Budgets, Exhausted};
use crate::character::{char_value, character_space_basis, validate_character, Character, CharacterCheck};
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::track::{chi_track, is_nonneg_track, search_nonneg_word, FiniteSubset, SearchOutcome};
use crate::word::{free_reduce, Letter, Word};
use crate::Rational;

/// `t` with `χ(t) > 0` and, for each letter `y` with `χ(y) ≥ 0`, a word of
/// non-negative track equal to `t⁻¹ y t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sigma1Certificate {
    pub t: Word,
    pub dict: BTreeMap<Letter, Word>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Member,
    Refuted,
    Unknown,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Member => "member",
            Status::Refuted => "refuted",
            Status::Unknown => "unknown",
        }
    }
}

/// Which rule produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    ZeroCharacter,
    AbelianOracle,
    CentralOracle,
    Search,
    FreeTree,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::ZeroCharacter => "zero-character",
            Route::AbelianOracle => "oracle:abelian",
            Route::CentralOracle => "oracle:center",
            Route::Search => "search",
            Route::FreeTree => "free-tree",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    Certificate(Sigma1Certificate),
    /// `χ = 0`: membership reduces to finite generation, which the
    /// presentation provides.
    ZeroCharacter,
    /// An element of `G_χ` whose unique reduced word dips below zero.
    TreeWitness(Word),
    Budget {
        reason: Exhausted,
        t_candidates: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub soundness: Soundness,
    pub route: Route,
    pub evidence: Evidence,
}

impl Verdict {
    pub fn certificate(&self) -> Option<&Sigma1Certificate> {
        match &self.evidence {
            Evidence::Certificate(c) => Some(c),
            _ => None,
        }
    }
}

/// Pure check: `χ(t) > 0`, and every letter `y` with `χ(y) ≥ 0` has an entry
/// of non-negative track whose normal form is that of `t⁻¹ y t`.
pub fn verify_sigma1_certificate(cert: &Sigma1Certificate, p: &Presentation, chi: &Character) -> bool {
    if chi.rank() != p.rank() || validate_character(p, chi) != CharacterCheck::Valid {
        return false;
    }
    let in_range = |w: &Word| w.letters().iter().all(|l| (l.generator() as usize) < p.rank());
    if !in_range(&cert.t) || !char_value(chi, &cert.t).is_positive() {
        return false;
    }
    for y in Letter::all(p.rank()) {
        if chi.letter(y).is_negative() {
            continue;
        }
        let Some(image) = cert.dict.get(&y) else {
            return false;
        };
        if !in_range(image) || !is_nonneg_track(image, chi) {
            return false;
        }
        let conj = cert.t.inverse().with_letter(y).concat(&cert.t);
        match p.equal(&conj, image) {
            Ok(true) => {}
            _ => return false,
        }
    }
    true
}

fn identity_dict(p: &Presentation, chi: &Character) -> BTreeMap<Letter, Word> {
    Letter::all(p.rank()).filter(|&y| !chi.letter(y).is_negative()).map(|y| (y, Word::from_letters(vec![y]))).collect()
}

/// Abelian groups: every nonzero character is a member, `t` is the first
/// letter with positive value and the dictionary is the identity. With a
/// declared central generator `z` with `χ(z) ≠ 0`, `t = z^{±1}` works the
/// same way.
pub fn oracle_membership(p: &Presentation, chi: &Character) -> Option<Verdict> {
    if chi.is_zero() {
        return None;
    }
    let (t, route) = if p.is_abelian() {
        let t = Letter::all(p.rank()).find(|&y| chi.letter(y).is_positive())?;
        (t, Route::AbelianOracle)
    } else {
        let z = p.central().iter().copied().find(|&z| !chi.generator(z).is_zero())?;
        let t = if chi.generator(z).is_positive() { Letter::pos(z) } else { Letter::neg(z) };
        (t, Route::CentralOracle)
    };
    let cert = Sigma1Certificate { t: Word::from_letters(vec![t]), dict: identity_dict(p, chi) };
    if !verify_sigma1_certificate(&cert, p, chi) {
        return None;
    }
    Some(Verdict { status: Status::Member, soundness: p.soundness(), route, evidence: Evidence::Certificate(cert) })
}

/// Freely reduced words over `rank` generators in shortlex order, up to
/// length `max_len`, visited depth-first per length.
pub(crate) fn reduced_words(rank: usize, max_len: usize, mut visit: impl FnMut(&Word) -> bool) {
    fn go(rank: usize, len: usize, acc: &mut Vec<Letter>, visit: &mut dyn FnMut(&Word) -> bool) -> bool {
        if acc.len() == len {
            return visit(&Word::from_letters(acc.clone()));
        }
        for y in Letter::all(rank) {
            if acc.last().is_some_and(|&l| l == y.inverse()) {
                continue;
            }
            acc.push(y);
            let stop = go(rank, len, acc, visit);
            acc.pop();
            if stop {
                return true;
            }
        }
        false
    }
    for len in 0..=max_len {
        if go(rank, len, &mut Vec::with_capacity(len), &mut visit) {
            return;
        }
    }
}

/// Tree refutation for a free group on its free basis: the shortlex-first
/// reduced word of length ≤ `max_len` with `χ ≥ 0` whose track dips below
/// zero. In a tree every path to that vertex passes through the dip, so
/// `Γ(G,X)_χ` is disconnected. Rank 1 never has such a word and yields
/// `None`.
pub fn refute_sigma1_free(p: &Presentation, chi: &Character, max_len: usize) -> Result<Option<Verdict>> {
    if *p.backend() != Backend::Free || !p.relators().is_empty() {
        return Err(Error::NotFreeBasis);
    }
    if chi.is_zero() {
        return Err(Error::Precondition("tree refutation needs a nonzero character".into()));
    }
    if p.rank() < 2 {
        return Ok(None);
    }
    let mut witness = None;
    reduced_words(p.rank(), max_len, |w| {
        let track = chi_track(w, chi);
        if !track.end().is_negative() && track.min().is_negative() {
            witness = Some(w.clone());
            true
        } else {
            false
        }
    });
    Ok(witness.map(|w| Verdict {
        status: Status::Refuted,
        soundness: Soundness::Exact,
        route: Route::FreeTree,
        evidence: Evidence::TreeWitness(w),
    }))
}

/// Re-checks the side conditions of a tree refutation.
pub fn verify_tree_witness(p: &Presentation, chi: &Character, witness: &Word) -> bool {
    *p.backend() == Backend::Free
        && p.relators().is_empty()
        && witness.is_freely_reduced()
        && free_reduce(witness) == *witness
        && !char_value(chi, witness).is_negative()
        && chi_track(witness, chi).min().is_negative()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sigma1Options {
    pub budgets: Budgets,
    /// Longest `t` candidate.
    pub t_max_len: usize,
    /// Longest word scanned by the tree refutation.
    pub tree_max_len: usize,
    pub use_oracles: bool,
}

impl Default for Sigma1Options {
    fn default() -> Self {
        Sigma1Options { budgets: Budgets::default(), t_max_len: 2, tree_max_len: 4, use_oracles: true }
    }
}

/// Tries one `t`: every letter with `χ(y) ≥ 0` needs a non-negative word
/// for `t⁻¹ y t`.
fn certificate_for(
    t: &Word,
    p: &Presentation,
    chi: &Character,
    x: &FiniteSubset,
    budgets: &Budgets,
) -> Result<std::result::Result<Sigma1Certificate, Exhausted>> {
    let mut dict = BTreeMap::new();
    for y in Letter::all(p.rank()) {
        if chi.letter(y).is_negative() {
            continue;
        }
        let target = p.normal_form(&t.inverse().with_letter(y).concat(t))?;
        match search_nonneg_word(&target, x, chi, p, budgets)? {
            SearchOutcome::Found(w) => {
                dict.insert(y, w);
            }
            SearchOutcome::Unknown(e) => return Ok(Err(e)),
        }
    }
    Ok(Ok(Sigma1Certificate { t: t.clone(), dict }))
}

pub fn sigma1_search(p: &Presentation, chi: &Character, opts: &Sigma1Options) -> Result<Verdict> {
    if chi.rank() != p.rank() {
        return Err(Error::CharacterArity { expected: p.rank(), got: chi.rank() });
    }
    if let CharacterCheck::Violation { relator, residual } = validate_character(p, chi) {
        return Err(Error::InvalidCharacter { relator, residual: residual.to_string() });
    }
    if chi.is_zero() {
        return Ok(Verdict {
            status: Status::Member,
            soundness: p.soundness(),
            route: Route::ZeroCharacter,
            evidence: Evidence::ZeroCharacter,
        });
    }
    if opts.use_oracles {
        if let Some(v) = oracle_membership(p, chi) {
            return Ok(v);
        }
        if *p.backend() == Backend::Free && p.relators().is_empty() {
            if let Some(v) = refute_sigma1_free(p, chi, opts.tree_max_len)? {
                return Ok(v);
            }
        }
    }
    let x = FiniteSubset::generators(p)?;
    let mut candidates = Vec::new();
    reduced_words(p.rank(), opts.t_max_len, |t| {
        if char_value(chi, t).is_positive() {
            candidates.push(t.clone());
        }
        false
    });
    let mut last = Exhausted::WordLength(opts.budgets.max_word_len);
    for t in &candidates {
        match certificate_for(t, p, chi, &x, &opts.budgets)? {
            Ok(cert) => {
                debug_assert!(verify_sigma1_certificate(&cert, p, chi));
                return Ok(Verdict {
                    status: Status::Member,
                    soundness: p.soundness(),
                    route: Route::Search,
                    evidence: Evidence::Certificate(cert),
                });
            }
            Err(e) => last = e,
        }
    }
    Ok(Verdict {
        status: Status::Unknown,
        soundness: p.soundness(),
        route: Route::Search,
        evidence: Evidence::Budget { reason: last, t_candidates: candidates.len() },
    })
}

/// A linear form `Σ cᵢ χ′(xᵢ)` over generator values.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearForm(pub Vec<Rational>);

impl LinearForm {
    /// The form `χ′ ↦ χ′(w)`.
    pub fn of_word(w: &Word, rank: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); rank];
        for l in w.letters() {
            let c = &mut coeffs[l.generator() as usize];
            if l.is_inverse() {
                *c -= Rational::from_integer(1.into());
            } else {
                *c += Rational::from_integer(1.into());
            }
        }
        LinearForm(coeffs)
    }

    pub fn eval(&self, chi: &Character) -> Rational {
        self.0.iter().zip(chi.values()).map(|(c, v)| c * v).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn negate(&self) -> Self {
        LinearForm(self.0.iter().map(|c| -c).collect())
    }
}

/// `strict` forms must be `> 0`, `weak` forms `≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateCone {
    pub strict: Vec<LinearForm>,
    pub weak: Vec<LinearForm>,
}

impl CertificateCone {
    pub fn contains(&self, chi: &Character) -> bool {
        self.strict.iter().all(|f| f.eval(chi).is_positive()) && self.weak.iter().all(|f| !f.eval(chi).is_negative())
    }
}

/// Linear conditions on `χ′` under which `cert` still verifies:
///
/// * `χ′(t) > 0`;
/// * `χ′(y) < 0` for every letter without a dictionary entry, so that the
///   dictionary still covers all letters with `χ′(y) ≥ 0`;
/// * `χ′(p) ≥ 0` for every proper nonempty prefix `p` of every entry;
///   the full entry has value `χ′(y)`, which is `≥ 0` exactly when the entry
///   is needed;
/// * `χ′(r) = 0` for every relator, as a pair of weak forms.
///
/// Forms that vanish identically are dropped and duplicates merged.
pub fn certificate_cone(cert: &Sigma1Certificate, p: &Presentation) -> CertificateCone {
    let rank = p.rank();
    let mut strict = vec![LinearForm::of_word(&cert.t, rank)];
    for y in Letter::all(rank) {
        if !cert.dict.contains_key(&y) {
            strict.push(LinearForm::of_word(&Word::from_letters(vec![y]), rank).negate());
        }
    }
    let mut weak = Vec::new();
    for image in cert.dict.values() {
        for k in 1..image.len() {
            weak.push(LinearForm::of_word(&image.prefix(k), rank));
        }
    }
    for r in p.relators() {
        let f = LinearForm::of_word(r, rank);
        weak.push(f.negate());
        weak.push(f);
    }
    let tidy = |forms: Vec<LinearForm>| {
        let mut forms: Vec<LinearForm> = forms.into_iter().filter(|f| !f.is_zero()).collect();
        forms.sort();
        forms.dedup();
        forms
    };
    CertificateCone { strict: tidy(strict), weak: tidy(weak) }
}

/// Seeded rational points of `cone` near `chi`: `χ + ε·d` for a random
/// direction `d` in the character space of `p`, halving `ε` from 4 until
/// the point is inside. A direction is abandoned after 24 halvings.
pub fn sample_cone(
    cone: &CertificateCone,
    p: &Presentation,
    chi: &Character,
    count: usize,
    rng: &mut impl Rng,
) -> Vec<Character> {
    let basis = character_space_basis(p);
    let mut out = Vec::with_capacity(count);
    if basis.is_empty() {
        return out;
    }
    let mut attempts = 0;
    while out.len() < count && attempts < 100 * count.max(1) {
        attempts += 1;
        let mut d = vec![Rational::zero(); p.rank()];
        for b in &basis {
            let c = Rational::new(rng.gen_range(-6i64..=6).into(), rng.gen_range(1i64..=6).into());
            for (di, bi) in d.iter_mut().zip(b) {
                *di += &c * bi;
            }
        }
        if d.iter().all(Zero::is_zero) {
            continue;
        }
        let mut eps = Rational::from_integer(4.into());
        for _ in 0..24 {
            let values = chi.values().iter().zip(&d).map(|(v, di)| v + &eps * di).collect();
            let candidate = Character::new(values);
            if cone.contains(&candidate) {
                out.push(candidate);
                break;
            }
            eps /= Rational::from_integer(2.into());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(p: &Presentation, text: &str) -> Word {
        p.parse_word(text).unwrap()
    }

    #[test]
    fn z2_oracle_certificate() {
        let z2 = Presentation::free_abelian(&["a", "b"]);
        let chi = Character::from_ints(&[1, 0]);
        let v = sigma1_search(&z2, &chi, &Sigma1Options::default()).unwrap();
        assert_eq!(v.status, Status::Member);
        let cert = v.certificate().unwrap();
        assert_eq!(cert.t, word(&z2, "a"));
        let entries: Vec<(String, String)> =
            cert.dict.iter().map(|(y, w)| (z2.show(&Word::from_letters(vec![*y])), z2.show(w))).collect();
        assert_eq!(entries, vec![("a".into(), "a".into()), ("b".into(), "b".into()), ("b^-1".into(), "b^-1".into())]);
    }

    #[test]
    fn bs_search_certificate() {
        let bs = Presentation::baumslag_solitar(2).unwrap();
        let chi = Character::from_ints(&[0, -1]);
        let v = sigma1_search(&bs, &chi, &Sigma1Options::default()).unwrap();
        assert_eq!(v.status, Status::Member);
        let cert = v.certificate().unwrap();
        assert_eq!(cert.t, word(&bs, "t^-1"));
        assert_eq!(cert.dict[&Letter::pos(0)], word(&bs, "a a"));
        assert_eq!(cert.dict[&Letter::neg(0)], word(&bs, "a^-1 a^-1"));
        assert_eq!(cert.dict[&Letter::neg(1)], word(&bs, "t^-1"));
        assert!(verify_sigma1_certificate(cert, &bs, &chi));
    }

    #[test]
    fn tampered_certificate_fails() {
        let bs = Presentation::baumslag_solitar(2).unwrap();
        let chi = Character::from_ints(&[0, -1]);
        let mut cert = sigma1_search(&bs, &chi, &Sigma1Options::default()).unwrap().certificate().unwrap().clone();
        // t a t^-1 equals a a but its track dips to -1
        cert.dict.insert(Letter::pos(0), word(&bs, "t a t^-1"));
        assert!(!verify_sigma1_certificate(&cert, &bs, &chi));
    }

    #[test]
    fn free_tree_witnesses() {
        let f2 = Presentation::free(&["a", "b"]);
        let v = refute_sigma1_free(&f2, &Character::from_ints(&[1, 0]), 4).unwrap().unwrap();
        assert_eq!(v.evidence, Evidence::TreeWitness(word(&f2, "a^-1 b a")));
        let v = refute_sigma1_free(&f2, &Character::from_ints(&[1, 1]), 4).unwrap().unwrap();
        assert_eq!(v.evidence, Evidence::TreeWitness(word(&f2, "a^-1 b")));
        let z = Presentation::free(&["a"]);
        assert_eq!(refute_sigma1_free(&z, &Character::from_ints(&[1]), 4).unwrap(), None);
        let z2 = Presentation::free_abelian(&["a", "b"]);
        assert_eq!(refute_sigma1_free(&z2, &Character::from_ints(&[1, 0]), 4), Err(Error::NotFreeBasis));
    }

    #[test]
    fn oracle_applicability() {
        let f2z = Presentation::f2_times_z();
        let v = oracle_membership(&f2z, &Character::from_ints(&[0, 0, 1])).unwrap();
        assert_eq!(v.route, Route::CentralOracle);
        assert!(oracle_membership(&Presentation::free(&["a", "b"]), &Character::from_ints(&[1, 0])).is_none());
    }

    #[test]
    fn z2_cone_contains_tilted_characters() {
        let z2 = Presentation::free_abelian(&["a", "b"]);
        let chi = Character::from_ints(&[1, 0]);
        let v = sigma1_search(&z2, &chi, &Sigma1Options::default()).unwrap();
        let cert = v.certificate().unwrap();
        let cone = certificate_cone(cert, &z2);
        for b in [1, -1] {
            let tilted = Character::new(vec![Rational::from_integer(1.into()), Rational::new(b.into(), 10.into())]);
            assert!(cone.contains(&tilted));
            assert!(verify_sigma1_certificate(cert, &z2, &tilted));
        }
        assert!(cone.contains(&chi));
    }

    #[test]
    fn bs_cone_samples_stay_valid() {
        use rand::SeedableRng;
        let bs = Presentation::baumslag_solitar(2).unwrap();
        let chi = Character::from_ints(&[0, -1]);
        let v = sigma1_search(&bs, &chi, &Sigma1Options::default()).unwrap();
        let cert = v.certificate().unwrap();
        let cone = certificate_cone(cert, &bs);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let samples = sample_cone(&cone, &bs, &chi, 20, &mut rng);
        assert_eq!(samples.len(), 20);
        for s in &samples {
            assert!(s.generator(0).is_zero());
            assert!(verify_sigma1_certificate(cert, &bs, s));
        }
    }
}
