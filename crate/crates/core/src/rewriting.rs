//! String rewriting on top of free cancellation.
//!
//! Rules `lhs -> rhs` are applied leftmost-first in declaration order, with
//! `y ȳ -> ε` always available. Local confluence is decided by resolving
//! every critical pair; together with termination (assumed within the step
//! budget) that makes normal forms unique.

use crate::error::{Error, Result};
use crate::word::{free_reduce, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Word,
    pub rhs: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewritingSystem {
    rules: Vec<Rule>,
    max_steps: usize,
    confluent: bool,
}

pub const DEFAULT_MAX_STEPS: usize = 10_000;

impl RewritingSystem {
    /// Builds the system and runs the critical pair check. Rules whose
    /// left side is empty or not freely reduced are rejected.
    pub fn new(rules: Vec<Rule>, max_steps: usize) -> Result<Self> {
        for (i, rule) in rules.iter().enumerate() {
            if rule.lhs.is_empty() || !rule.lhs.is_freely_reduced() {
                return Err(Error::InvalidBackend(format!(
                    "rule {i}: left side must be a nonempty freely reduced word"
                )));
            }
        }
        let mut system = RewritingSystem { rules, max_steps, confluent: false };
        system.confluent = system.check_local_confluence();
        Ok(system)
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn max_steps(&self) -> usize {
        self.max_steps
    }

    pub fn is_confluent(&self) -> bool {
        self.confluent
    }

    pub fn normal_form(&self, word: &Word) -> Result<Word> {
        let mut current = free_reduce(word).into_letters();
        let mut steps = 0;
        'outer: loop {
            for pos in 0..current.len() {
                for rule in &self.rules {
                    let lhs = rule.lhs.letters();
                    if current[pos..].starts_with(lhs) {
                        steps += 1;
                        if steps > self.max_steps {
                            return Err(Error::BudgetExceeded(format!("rewriting exceeded {} steps", self.max_steps)));
                        }
                        let mut next = Vec::with_capacity(current.len() + rule.rhs.len());
                        next.extend_from_slice(&current[..pos]);
                        next.extend_from_slice(rule.rhs.letters());
                        next.extend_from_slice(&current[pos + lhs.len()..]);
                        current = free_reduce(&Word::from_letters(next)).into_letters();
                        continue 'outer;
                    }
                }
            }
            return Ok(Word::from_letters(current));
        }
    }

    /// Every overlap of two left sides, and of a left side with a
    /// cancellation pair, must rewrite to a common normal form.
    fn check_local_confluence(&self) -> bool {
        let joinable = |a: Vec<Letter>, b: Vec<Letter>| -> bool {
            match (self.normal_form(&Word::from_letters(a)), self.normal_form(&Word::from_letters(b))) {
                (Ok(x), Ok(y)) => x == y,
                _ => false,
            }
        };
        for r1 in &self.rules {
            let l1 = r1.lhs.letters();
            for r2 in &self.rules {
                let l2 = r2.lhs.letters();
                // suffix of l1 equals prefix of l2
                for k in 1..l1.len().min(l2.len()) + 1 {
                    if k == l1.len() && k == l2.len() && r1 == r2 {
                        continue;
                    }
                    if l1[l1.len() - k..] == l2[..k] {
                        let a = [r1.rhs.letters(), &l2[k..]].concat();
                        let b = [&l1[..l1.len() - k], r2.rhs.letters()].concat();
                        if !joinable(a, b) {
                            return false;
                        }
                    }
                }
                // l2 inside l1
                if l2.len() < l1.len() || (l2.len() == l1.len() && r1 != r2) {
                    for start in 0..=l1.len() - l2.len() {
                        if l1[start..start + l2.len()] == *l2 {
                            let a = r1.rhs.letters().to_vec();
                            let b = [&l1[..start], r2.rhs.letters(), &l1[start + l2.len()..]].concat();
                            if !joinable(a, b) {
                                return false;
                            }
                        }
                    }
                }
            }
            // overlaps with y ȳ -> ε
            let last = *l1.last().expect("nonempty lhs");
            let a = [r1.rhs.letters(), &[last.inverse()]].concat();
            if !joinable(a, l1[..l1.len() - 1].to_vec()) {
                return false;
            }
            let first = l1[0];
            let a = [&[first.inverse()], r1.rhs.letters()].concat();
            if !joinable(a, l1[1..].to_vec()) {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const AB: [&str; 2] = ["a", "b"];

    fn w(text: &str) -> Word {
        Word::parse(text, &AB).unwrap()
    }

    fn rule(l: &str, r: &str) -> Rule {
        Rule { lhs: w(l), rhs: w(r) }
    }

    fn z2() -> RewritingSystem {
        RewritingSystem::new(
            vec![
                rule("b a", "a b"),
                rule("b a^-1", "a^-1 b"),
                rule("b^-1 a", "a b^-1"),
                rule("b^-1 a^-1", "a^-1 b^-1"),
            ],
            DEFAULT_MAX_STEPS,
        )
        .unwrap()
    }

    #[test]
    fn commutation_system_is_confluent() {
        let system = z2();
        assert!(system.is_confluent());
        assert_eq!(system.normal_form(&w("b a b^-1 a")).unwrap(), w("a a"));
    }

    #[test]
    fn missing_rule_breaks_confluence() {
        let system = RewritingSystem::new(vec![rule("b a", "a b")], DEFAULT_MAX_STEPS).unwrap();
        // b a a^-1 -> b, and -> a b a^-1 which is stuck.
        assert!(!system.is_confluent());
    }

    #[test]
    fn non_terminating_rules_hit_the_step_budget() {
        let system = RewritingSystem::new(vec![rule("a", "a a a^-1")], 50);
        // a -> a a a^-1 reduces back to a; the loop never ends.
        let system = system.unwrap();
        assert!(matches!(system.normal_form(&w("a")), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn rejects_empty_lhs() {
        assert!(RewritingSystem::new(vec![rule("1", "a")], 10).is_err());
    }
}
