//! Bounded saturation of a finite set of words declared positive.
//!
//! The positive cone of a bi-order is closed under products and
//! conjugation, so deriving both `w` and `w⁻¹` from a seed set refutes every
//! bi-order making the seeds positive.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::word::{free_generators, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeStatus {
    /// No contradiction within the bounds (inconclusive beyond them).
    Consistent,
    Contradiction,
}

/// One closure step; `result` is recomputed on replay.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Product {
        left: Word,
        right: Word,
        result: Word,
    },
    /// `by · base · by⁻¹`
    Conjugate { base: Word, by: Word, result: Word },
}

impl Step {
    pub fn result(&self) -> &Word {
        match self {
            Step::Product { result, .. } | Step::Conjugate { result, .. } => result,
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Product {
                left,
                right,
                result,
            } => write!(f, "PRODUCT ({left}) * ({right}) = {result}"),
            Step::Conjugate { base, by, result } => {
                write!(f, "CONJUGATE ({base}) by ({by}) = {result}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeCertificate {
    pub status: ConeStatus,
    /// For a contradiction: the one of `w`, `w⁻¹` derived first.
    pub witness: Option<Word>,
    /// Steps needed to derive the witness and its inverse from the seeds.
    pub derivation: Vec<Step>,
    /// Closure rounds run.
    pub rounds: usize,
    /// Distinct words derived in total.
    pub derived: usize,
    /// True when the closure reached a fixed point within the length bound.
    pub saturated: bool,
}

impl fmt::Display for ConeCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.status, &self.witness) {
            (ConeStatus::Contradiction, Some(w)) => writeln!(f, "CONTRADICTION witness {w}")?,
            _ => writeln!(
                f,
                "CONSISTENT ({} words, {})",
                self.derived,
                if self.saturated {
                    "saturated"
                } else {
                    "limits reached"
                }
            )?,
        }
        for step in &self.derivation {
            writeln!(f, "{step}")?;
        }
        writeln!(f, "rounds {}", self.rounds)
    }
}

/// Work limits beyond the length bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_rounds: usize,
    pub max_words: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_rounds: 4,
            max_words: 200_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SaturateError {
    #[error("the identity cannot be a seed")]
    IdentitySeed,
    #[error("seed {0} is longer than the length bound")]
    SeedTooLong(String),
}

pub fn cone_saturate(seeds: &[Word], length_bound: u64) -> Result<ConeCertificate, SaturateError> {
    cone_saturate_with(seeds, length_bound, Limits::default())
}

/// Breadth-first closure under pairwise products and conjugation by `a^±1`,
/// `b^±1`, dropping words longer than `length_bound`. Stops at the first
/// word whose inverse is already derived.
pub fn cone_saturate_with(
    seeds: &[Word],
    length_bound: u64,
    limits: Limits,
) -> Result<ConeCertificate, SaturateError> {
    let mut origin: HashMap<Word, Option<Step>> = HashMap::new();
    let mut order: Vec<Word> = Vec::new();
    for s in seeds {
        if s.is_identity() {
            return Err(SaturateError::IdentitySeed);
        }
        if s.len() > length_bound {
            return Err(SaturateError::SeedTooLong(s.to_string()));
        }
        if origin.contains_key(s) {
            continue;
        }
        if origin.contains_key(&s.inverse()) {
            return Ok(contradiction(&origin, s.inverse(), s.clone(), 0));
        }
        origin.insert(s.clone(), None);
        order.push(s.clone());
    }
    let conjugators: Vec<Word> = free_generators()
        .into_iter()
        .flat_map(|g| [g.clone(), g.inverse()])
        .collect();
    let mut frontier_start = 0;
    let mut rounds = 0;
    while rounds < limits.max_rounds {
        let frontier_end = order.len();
        if frontier_start == frontier_end {
            return Ok(consistent(order.len(), rounds, true));
        }
        rounds += 1;
        let mut candidates: Vec<Step> = Vec::new();
        for base in &order[frontier_start..frontier_end] {
            for by in &conjugators {
                let result = base.conjugate_by(by);
                candidates.push(Step::Conjugate {
                    base: base.clone(),
                    by: by.clone(),
                    result,
                });
            }
        }
        // products with at least one factor new in the last round
        for i in 0..frontier_end {
            let j_start = if i >= frontier_start {
                0
            } else {
                frontier_start
            };
            for j in j_start..frontier_end {
                let result = order[i].multiply(&order[j]);
                candidates.push(Step::Product {
                    left: order[i].clone(),
                    right: order[j].clone(),
                    result,
                });
            }
        }
        for step in candidates {
            let w = step.result().clone();
            if w.len() > length_bound || origin.contains_key(&w) {
                continue;
            }
            if w.is_identity() {
                // only reachable as x·x⁻¹, caught when x⁻¹ was inserted
                continue;
            }
            let wi = w.inverse();
            origin.insert(w.clone(), Some(step));
            order.push(w.clone());
            if origin.contains_key(&wi) {
                return Ok(contradiction(&origin, wi, w, rounds));
            }
            if order.len() >= limits.max_words {
                return Ok(consistent(order.len(), rounds, false));
            }
        }
        frontier_start = frontier_end;
    }
    let saturated = frontier_start == order.len();
    Ok(consistent(order.len(), rounds, saturated))
}

fn consistent(derived: usize, rounds: usize, saturated: bool) -> ConeCertificate {
    ConeCertificate {
        status: ConeStatus::Consistent,
        witness: None,
        derivation: Vec::new(),
        rounds,
        derived,
        saturated,
    }
}

fn contradiction(
    origin: &HashMap<Word, Option<Step>>,
    first: Word,
    second: Word,
    rounds: usize,
) -> ConeCertificate {
    let mut derivation = Vec::new();
    let mut done: HashSet<Word> = HashSet::new();
    collect_steps(origin, &first, &mut done, &mut derivation);
    collect_steps(origin, &second, &mut done, &mut derivation);
    ConeCertificate {
        status: ConeStatus::Contradiction,
        witness: Some(first),
        derivation,
        rounds,
        derived: origin.len(),
        saturated: false,
    }
}

/// Post-order walk so that every step's operands precede it.
fn collect_steps(
    origin: &HashMap<Word, Option<Step>>,
    w: &Word,
    done: &mut HashSet<Word>,
    out: &mut Vec<Step>,
) {
    if !done.insert(w.clone()) {
        return;
    }
    let Some(Some(step)) = origin.get(w) else {
        return;
    };
    match step {
        Step::Product { left, right, .. } => {
            collect_steps(origin, left, done, out);
            collect_steps(origin, right, done, out);
        }
        Step::Conjugate { base, .. } => collect_steps(origin, base, done, out),
    }
    out.push(step.clone());
}

/// Re-derives a contradiction certificate from the seeds: every step must use
/// known words, recompute to its recorded result and respect the bound, and
/// both the witness and its inverse must end up known.
pub fn replay(seeds: &[Word], cert: &ConeCertificate, length_bound: u64) -> bool {
    let Some(witness) = &cert.witness else {
        return false;
    };
    let mut known: HashSet<Word> = seeds.iter().cloned().collect();
    for step in &cert.derivation {
        let (ok, result) = match step {
            Step::Product {
                left,
                right,
                result,
            } => (
                known.contains(left) && known.contains(right) && &left.multiply(right) == result,
                result,
            ),
            Step::Conjugate { base, by, result } => (
                known.contains(base) && by.len() == 1 && &base.conjugate_by(by) == result,
                result,
            ),
        };
        if !ok || result.len() > length_bound {
            return false;
        }
        known.insert(result.clone());
    }
    known.contains(witness) && known.contains(&witness.inverse())
}
