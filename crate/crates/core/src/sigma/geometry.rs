//! Norm bound from a `χ_P`-bound, with `χ_P(T) = ⟨T, −P/‖P‖⟩`.
//!
//! Norms are irrational in general, so every comparison is rewritten into
//! exact comparisons of rationals and squares.

use num_traits::{Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormBoundInstance {
    pub p: Vec<Rational>,
    pub t: Vec<Rational>,
    pub r: Rational,
    pub h: Rational,
    pub nu: Rational,
}

/// `(‖P‖ − ν)² − ‖T‖² = rational + sqrt_coeff · √radicand`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slack {
    pub rational: Rational,
    pub sqrt_coeff: Rational,
    pub radicand: Rational,
}

impl Slack {
    pub fn is_nonneg(&self) -> bool {
        sum_with_root_nonneg(&self.rational, &self.sqrt_coeff, &self.radicand)
    }
}

fn dot(u: &[Rational], v: &[Rational]) -> Rational {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// `a + b·√n ≥ 0` for `n ≥ 0`.
fn sum_with_root_nonneg(a: &Rational, b: &Rational, n: &Rational) -> bool {
    let b2n = b * b * n;
    match (a.is_negative(), b.is_negative()) {
        (false, false) => true,
        (true, true) => a.is_zero() && b2n.is_zero(),
        // a ≥ 0 > b: need a² ≥ b²n
        (false, true) => a * a >= b2n,
        // b ≥ 0 > a: need b²n ≥ a²
        (true, false) => b2n >= a * a,
    }
}

/// `√n ≥ q`.
fn root_at_least(n: &Rational, q: &Rational) -> bool {
    !q.is_positive() || n >= &(q * q)
}

/// Checks the hypotheses, then the conclusion `‖T‖² ≤ (‖P‖ − ν)²`.
pub fn norm_bound_from_chi(inst: &NormBoundInstance) -> Result<Slack> {
    let NormBoundInstance { p, t, r, h, nu } = inst;
    if p.len() != t.len() {
        return Err(Error::HypothesisViolated("P and T have the same dimension"));
    }
    let n = dot(p, p);
    if n.is_zero() {
        return Err(Error::HypothesisViolated("P != 0"));
    }
    if r.is_negative() {
        return Err(Error::HypothesisViolated("r >= 0"));
    }
    let diff: Vec<Rational> = p.iter().zip(t).map(|(a, b)| a - b).collect();
    if dot(&diff, &diff) > r * r {
        return Err(Error::HypothesisViolated("||P - T|| <= r"));
    }
    if !h.is_positive() {
        return Err(Error::HypothesisViolated("h > 0"));
    }
    if nu.is_negative() || nu >= h {
        return Err(Error::HypothesisViolated("0 <= nu < h"));
    }
    // χ_P(T) ≥ χ_P(P) + h  ⇔  ‖P‖² − ⟨T,P⟩ ≥ h‖P‖
    let lhs = &n - dot(t, p);
    if !sum_with_root_nonneg(&lhs, &-h, &n) {
        return Err(Error::HypothesisViolated("chi_P(T) >= chi_P(P) + h"));
    }
    let two = Rational::from_integer(2.into());
    let bound = (r * r - nu * nu) / (&two * (h - nu));
    if !root_at_least(&n, &bound) || !root_at_least(&n, h) {
        return Err(Error::HypothesisViolated("||P|| >= max{(r^2 - nu^2)/(2(h - nu)), h}"));
    }
    let slack = Slack { rational: &n + nu * nu - dot(t, t), sqrt_coeff: -(&two * nu), radicand: n };
    Ok(slack)
}

fn small_rational(rng: &mut impl Rng, max_num: i64, max_den: i64) -> Rational {
    Rational::new(rng.gen_range(-max_num..=max_num).into(), rng.gen_range(1..=max_den).into())
}

/// Draws instances until one satisfies the hypotheses. `P` has integer
/// coordinates of moderate size, `T` is a small perturbation of `P`, and
/// `r`, `h`, `ν` are small rationals.
pub fn random_instance(rng: &mut impl Rng) -> NormBoundInstance {
    loop {
        let dim = rng.gen_range(1..=3);
        let p: Vec<Rational> = (0..dim).map(|_| small_rational(rng, 30, 1)).collect();
        let delta: Vec<Rational> = (0..dim).map(|_| small_rational(rng, 12, 4)).collect();
        let t: Vec<Rational> = p.iter().zip(&delta).map(|(a, b)| a + b).collect();
        let r = delta.iter().map(|d| d.abs()).sum::<Rational>() + Rational::new(rng.gen_range(0..4).into(), 4.into());
        let h = Rational::new(rng.gen_range(1..=12).into(), rng.gen_range(1..=4).into());
        let k: i64 = rng.gen_range(0..8);
        let nu = &h * Rational::new(k.into(), 8.into());
        let inst = NormBoundInstance { p, t, r, h, nu };
        if norm_bound_from_chi(&inst).is_ok() {
            return inst;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn worked_instance() {
        let inst = NormBoundInstance {
            p: vec![q(-2, 1), q(0, 1)],
            t: vec![q(-1, 1), q(0, 1)],
            r: q(1, 1),
            h: q(1, 1),
            nu: q(1, 2),
        };
        let slack = norm_bound_from_chi(&inst).unwrap();
        // (2 - 1/2)² - 1 = 5/4 = 4 + 1/4 - 1 - 1·2
        assert_eq!(slack.rational, q(13, 4));
        assert_eq!(slack.sqrt_coeff, q(-1, 1));
        assert_eq!(slack.radicand, q(4, 1));
        assert!(slack.is_nonneg());
    }

    #[test]
    fn equal_points_violate_chi_bound() {
        let inst = NormBoundInstance {
            p: vec![q(-2, 1), q(0, 1)],
            t: vec![q(-2, 1), q(0, 1)],
            r: q(1, 1),
            h: q(1, 1),
            nu: q(1, 2),
        };
        assert_eq!(norm_bound_from_chi(&inst), Err(Error::HypothesisViolated("chi_P(T) >= chi_P(P) + h")));
    }

    #[test]
    fn root_comparisons() {
        // 1 - √2 < 0, 2 - √2 > 0, √4 - 2 = 0
        assert!(!sum_with_root_nonneg(&q(1, 1), &q(-1, 1), &q(2, 1)));
        assert!(sum_with_root_nonneg(&q(2, 1), &q(-1, 1), &q(2, 1)));
        assert!(sum_with_root_nonneg(&q(-2, 1), &q(1, 1), &q(4, 1)));
        assert!(!sum_with_root_nonneg(&q(-1, 1), &q(-1, 1), &q(0, 1)));
    }
}
