//! Search budgets. Running out of any budget yields an `unknown` verdict.

use std::fmt;
use std::time::{Duration, Instant};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budgets {
    /// Longest word considered by a search.
    pub max_word_len: usize,
    /// Largest BFS layer kept in memory.
    pub max_frontier: usize,
    /// Total number of expanded nodes.
    pub max_nodes: usize,
    /// Optional wall-clock limit. Off by default because hitting it makes
    /// outputs depend on machine speed.
    pub wall: Option<Duration>,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { max_word_len: 8, max_frontier: 200_000, max_nodes: 2_000_000, wall: None }
    }
}

impl Budgets {
    pub fn with_word_len(mut self, len: usize) -> Self {
        self.max_word_len = len;
        self
    }

    pub fn start(&self) -> Meter {
        Meter { budgets: self.clone(), started: Instant::now(), nodes: 0 }
    }
}

/// Which budget ran out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exhausted {
    /// The search space up to the length bound was exhausted without
    /// success. This is a completeness statement, not a cap.
    WordLength(usize),
    Frontier(usize),
    Nodes(usize),
    Wall,
}

impl fmt::Display for Exhausted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exhausted::WordLength(l) => write!(f, "word length {l} exhausted"),
            Exhausted::Frontier(n) => write!(f, "frontier cap {n} reached"),
            Exhausted::Nodes(n) => write!(f, "node cap {n} reached"),
            Exhausted::Wall => f.write_str("wall budget reached"),
        }
    }
}

/// Running counter against a [`Budgets`] value.
#[derive(Debug, Clone)]
pub struct Meter {
    budgets: Budgets,
    started: Instant,
    nodes: usize,
}

impl Meter {
    pub fn budgets(&self) -> &Budgets {
        &self.budgets
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    /// Counts `n` expanded nodes and checks the node and wall caps.
    pub fn tick(&mut self, n: usize) -> Result<(), Exhausted> {
        self.nodes += n;
        if self.nodes > self.budgets.max_nodes {
            return Err(Exhausted::Nodes(self.budgets.max_nodes));
        }
        if let Some(wall) = self.budgets.wall {
            if self.started.elapsed() > wall {
                return Err(Exhausted::Wall);
            }
        }
        Ok(())
    }

    pub fn check_frontier(&self, size: usize) -> Result<(), Exhausted> {
        if size > self.budgets.max_frontier {
            Err(Exhausted::Frontier(self.budgets.max_frontier))
        } else {
            Ok(())
        }
    }
}
