//! Two distinct bi-orders on a free product `G✱H`, both positive on a given
//! finite chain, built from a realized order by conjugating the `G` letters
//! with a small PL map `τ′`.
//!
//! Pipeline: smallest conjugate `f₀` of `f₁` → push word `f′` with
//! `f′(r_{f₁}) < r_{f₀}` → normalization → probe `g ∈ G` → maps `τ₁`, `τ₂` →
//! merge each with the realization of `F` → orders `≺ᵢ` signing `f` by the
//! realized sign of `(f)ᵢ`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_traits::One;
use thiserror::Error;

use crate::oracle::{
    check_biinvariance, compare, BiinvReport, OrderOracle, Provenance, RealizedOrder,
};
use crate::par::Exec;
use crate::pl::{make_tau, Critical, PLMap, PlError};
use crate::rational::{fmt_rational, Rational};
use crate::realization::{merge_with, FactorAction, Realization, RealizationError};
use crate::sign::Sign;
use crate::word::{normal_form, FactorId, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NonIsoError {
    #[error("input: chain element {0} is not positive")]
    NotPositive(String),
    #[error("input: chain is empty or has repeated elements")]
    BadChain,
    #[error("input: the realization must have exactly two blocks")]
    NotTwoBlocks,
    #[error("push: no word of radius {radius} moves r(f1) below r(f0)")]
    NotFound { radius: usize },
    #[error("push: the last push letter does not keep decreasing below t'_m")]
    NonMonotone,
    #[error("probe: no generator of the other factor moves a point down below t'_m")]
    NoMovement,
    #[error("tau: {0}")]
    Tau(#[from] PlError),
    #[error("tau: inequality {0} fails before merging")]
    TauInequality(&'static str),
    #[error("merge ({stage}): {source}")]
    Merge {
        stage: &'static str,
        source: RealizationError,
    },
}

/// Which conjugators `u` enter the minimum defining `f₀`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ConjugatorScope {
    /// Tails of each chain element (what the conjugation expansion uses).
    #[default]
    Suffixes,
    /// All contiguous subwords; a superset, so `f₀` can only get smaller.
    Subwords,
}

fn order_cmp(r: &Realization, u: &Word, v: &Word) -> Ordering {
    match r.realized_sign(&u.inverse().multiply(v)) {
        Sign::Positive => Ordering::Less,
        Sign::Zero => Ordering::Equal,
        Sign::Negative => Ordering::Greater,
    }
}

fn crit(r: &Realization, w: &Word) -> Rational {
    match r.critical_point(w) {
        Critical::At(x) => x,
        Critical::NegInfinity => panic!("{w} acts trivially"),
    }
}

/// Checks positivity and sorts the chain increasingly in the realized order.
pub fn validate_chain(r: &Realization, chain: &[Word]) -> Result<Vec<Word>, NonIsoError> {
    if chain.is_empty() {
        return Err(NonIsoError::BadChain);
    }
    for f in chain {
        if !r.realized_sign(f).is_positive() {
            return Err(NonIsoError::NotPositive(f.to_string()));
        }
    }
    let mut sorted = chain.to_vec();
    sorted.sort_by(|u, v| order_cmp(r, u, v));
    if sorted.windows(2).any(|p| p[0] == p[1]) {
        return Err(NonIsoError::BadChain);
    }
    Ok(sorted)
}

/// `min { u f₁ u⁻¹ }` over the conjugators `u` of the chain elements, with
/// the first `u` (in scan order) attaining it. `chain[0]` is `f₁`.
pub fn smallest_conjugate(r: &Realization, chain: &[Word], scope: ConjugatorScope) -> (Word, Word) {
    let f1 = &chain[0];
    let mut best = (f1.clone(), Word::identity());
    for fi in chain {
        let us = match scope {
            ConjugatorScope::Suffixes => fi.suffixes(),
            ConjugatorScope::Subwords => fi.subwords(),
        };
        for u in us {
            let c = f1.conjugate_by(&u);
            if order_cmp(r, &c, &best.0) == Ordering::Less {
                best = (c, u);
            }
        }
    }
    best
}

/// Shortlex-first ball word `f′` with `f′(t₁) < t₀`.
pub fn find_push_word(
    r: &Realization,
    t1: &Rational,
    t0: &Rational,
    radius: usize,
) -> Result<Word, NonIsoError> {
    r.ball(radius)
        .into_iter()
        .find(|w| &r.eval_word(w, t1) < t0)
        .ok_or(NonIsoError::NotFound { radius })
}

/// A normalized push word: block syllables `f′₁, …, f′_m` (acting order)
/// with points `t′_k = f′_k(t′_{k−1})`, `t′_0 = t₁`, strictly decreasing,
/// and `t′_{m−1} ≥ t₀ > t′_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Push {
    pub word: Word,
    /// `f′_1, …, f′_m`, first-acting first.
    pub letters: Vec<Word>,
    /// `t′_1, …, t′_m`.
    pub points: Vec<Rational>,
}

impl Push {
    pub fn last_letter(&self) -> &Word {
        self.letters.last().expect("push word is nonempty")
    }

    pub fn t_m(&self) -> &Rational {
        self.points.last().expect("push word is nonempty")
    }
}

/// Drops syllables that do not move the running point down and cuts the
/// word after the first point below `t₀`.
pub fn normalize_push(r: &Realization, f: &Word, t1: &Rational, t0: &Rational) -> Push {
    let mut kept: Vec<Word> = Vec::new();
    let mut p = t1.clone();
    for syl in r.block_syllables(f).into_iter().rev() {
        if &p < t0 {
            break;
        }
        let q = r.eval_word(&syl, &p);
        if q < p {
            kept.push(syl);
            p = q;
        }
    }
    // adjacent survivors of one block merge into one syllable
    let word = normal_form(kept.iter().rev().flat_map(|s| s.letters().to_vec()));
    let letters: Vec<Word> = r.block_syllables(&word).into_iter().rev().collect();
    let mut points = Vec::with_capacity(letters.len());
    let mut p = t1.clone();
    for l in &letters {
        p = r.eval_word(l, &p);
        points.push(p.clone());
    }
    Push {
        word,
        letters,
        points,
    }
}

/// A probe `g` of the other block with `t‴ = g(t″) < t″ < t′_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Probe {
    pub g: Word,
    pub t2: Rational,
    pub t3: Rational,
}

/// Tries each generator of `block` and its inverse; `t″` is the midpoint of
/// the topmost downward-moving interval below `t′_m` (or one unit below its
/// top when it is unbounded).
pub fn choose_probe(r: &Realization, block: usize, t_m: &Rational) -> Result<Probe, NonIsoError> {
    let two = Rational::from_integer(2.into());
    for gen in r.generators() {
        if !r.in_block(&gen, block) {
            continue;
        }
        for g in [gen.clone(), gen.inverse()] {
            let map = r.realize_word(&g);
            let best = map
                .moving_intervals(Sign::Negative)
                .into_iter()
                .rfind(|(lo, _)| lo.as_ref().is_none_or(|lo| lo < t_m));
            let Some((lo, hi)) = best else {
                continue;
            };
            let top = if &hi < t_m { hi } else { t_m.clone() };
            let t2 = match lo {
                Some(lo) => (lo + &top) / &two,
                None => &top - Rational::one(),
            };
            let t3 = map.eval(&t2);
            debug_assert!(t3 < t2);
            return Ok(Probe { g, t2, t3 });
        }
    }
    Err(NonIsoError::NoMovement)
}

/// `τ₁`, `τ₂`: identity above `t′`, `t″ ↦ t′_m`, and `t‴ ↦ t′_{m+1}`
/// (resp. `t′_{m+3}`).
pub fn build_tau_pair(
    t1: &Rational,
    t2: &Rational,
    t3: &Rational,
    t_m: &Rational,
    t_m1: &Rational,
    t_m3: &Rational,
) -> Result<(PLMap, PLMap), NonIsoError> {
    Ok((
        make_tau(t1, t2, t3, t_m, t_m1)?,
        make_tau(t1, t2, t3, t_m, t_m3)?,
    ))
}

/// `(f)ᵢ`: every letter from `g_factors` replaced by `c x c⁻¹`.
pub fn conjugate_letters(f: &Word, g_factors: &[FactorId], c: FactorId) -> Word {
    let cw = Word::gen(c, 1);
    f.substitute(|l| {
        let x = Word::from_letter(l);
        if g_factors.contains(&l.factor) {
            x.conjugate_by(&cw)
        } else {
            x
        }
    })
}

/// `f ≻ 1` iff `(f)ᵢ > 1` in the merged realization of `F✱⟨τ′⟩`.
#[derive(Clone, Debug)]
pub struct AdjustedOrder {
    /// Realization of `F✱⟨τ′⟩`; `τ′` is factor `tau_factor`.
    pub merged: Arc<Realization>,
    pub g_factors: Vec<FactorId>,
    pub tau_factor: FactorId,
    /// Generators of `F`.
    gens: Vec<Word>,
}

impl AdjustedOrder {
    pub fn adjusted_word(&self, f: &Word) -> Word {
        conjugate_letters(f, &self.g_factors, self.tau_factor)
    }

    pub fn tau_prime(&self) -> PLMap {
        self.merged.realize_word(&Word::gen(self.tau_factor, 1))
    }
}

impl OrderOracle for AdjustedOrder {
    fn sign(&self, w: &Word) -> Sign {
        self.merged.realized_sign(&self.adjusted_word(w))
    }

    fn provenance(&self) -> Provenance {
        Provenance::Realized
    }

    fn generators(&self) -> Vec<Word> {
        self.gens.clone()
    }
}

/// Merges `⟨τ⟩` into `R_F` and keeps the first candidate where
/// `τ′gτ′⁻¹(t′_m)` lies on the required side of `t′_{m+2}` and
/// `r_{τ′} < t₀`.
#[allow(clippy::too_many_arguments)]
pub fn adjusted_order(
    r_f: &Realization,
    tau: &PLMap,
    probe: &Probe,
    t_m: &Rational,
    t_m2: &Rational,
    above: bool,
    t0: &Rational,
    eps: &Rational,
    radius: usize,
    seed: u64,
    stage: &'static str,
    exec: Exec,
) -> Result<AdjustedOrder, NonIsoError> {
    let tau_r = Realization::new(vec![FactorAction::cyclic(tau.clone())], vec![0])
        .map_err(|source| NonIsoError::Merge { stage, source })?;
    let c = r_f.factor_count() as FactorId;
    let g_block = r_f.block_of(probe.g.letters()[0].factor);
    let g_factors: Vec<FactorId> = (0..r_f.factor_count() as FactorId)
        .filter(|&i| r_f.block_of(i) == g_block)
        .collect();
    let conj_g = probe.g.conjugate_by(&Word::gen(c, 1));
    let merged = merge_with(r_f, &tau_r, eps, radius, seed, exec, |m| {
        let r = &m.realization;
        let x = r.eval_word(&conj_g, t_m);
        let side = if above { &x > t_m2 } else { &x < t_m2 };
        side && r.critical_point(&Word::gen(c, 1)) < Critical::At(t0.clone())
    })
    .map_err(|source| NonIsoError::Merge { stage, source })?;
    Ok(AdjustedOrder {
        merged: Arc::new(merged.realization),
        g_factors,
        tau_factor: c,
        gens: r_f.generators(),
    })
}

#[derive(Clone, Debug)]
pub struct NonIsoInput {
    /// Realization of `F = G✱H` with `G`, `H` as blocks 0 and 1.
    pub realization: Realization,
    pub chain: Vec<Word>,
    pub search_radius: usize,
    pub audit_radius: usize,
    /// Radius at which `F✱⟨τ′⟩` is certified to merge.
    pub merge_radius: usize,
    pub seed: u64,
    pub scope: ConjugatorScope,
}

impl NonIsoInput {
    pub fn new(
        realization: Realization,
        chain: Vec<Word>,
        search_radius: usize,
        audit_radius: usize,
        seed: u64,
    ) -> Self {
        NonIsoInput {
            realization,
            chain,
            search_radius,
            audit_radius,
            merge_radius: 3,
            seed,
            scope: ConjugatorScope::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct NonIsoWitness {
    /// The chain, sorted increasingly.
    pub chain: Vec<Word>,
    pub f0: Word,
    pub u_star: Word,
    pub t1: Rational,
    pub t0: Rational,
    pub push: Push,
    /// `t′_{m+1}, t′_{m+2}, t′_{m+3}`.
    pub beyond: [Rational; 3],
    pub probe: Probe,
    pub t_prime: Rational,
    pub tau1: PLMap,
    pub tau2: PLMap,
    pub order1: AdjustedOrder,
    pub order2: AdjustedOrder,
    /// `w₊ = f₁^{g f′}`.
    pub w_plus: Word,
    /// `w₋ = f₁^{(f′_m)² f′}`, with critical point `t′_{m+2}`.
    pub w_minus: Word,
    /// `f₁^{f′_m f′}`, whose critical point is `t′_{m+1}`.
    pub w_minus_literal: Word,
    pub verdicts: Verdicts,
}

/// Everything the witness is checked against.
#[derive(Clone, Debug)]
pub struct Verdicts {
    pub chain_positive: [bool; 2],
    /// `compare(≺ᵢ, w₊, w₋)`.
    pub split: [Ordering; 2],
    pub literal_split: [Ordering; 2],
    /// `compare(<, w₊, w₋)` in the input order.
    pub base_split: Ordering,
    /// `τ′ᵢ g τ′ᵢ⁻¹(t′_m)` after merging.
    pub probe_images: [Rational; 2],
    pub tau_inequalities: bool,
    pub biinvariance: [BiinvReport; 2],
    /// Audit-ball words where `≺₁`, `≺₂` disagree with each other / with `<`.
    pub differ_12: Vec<Word>,
    pub differ_base: [usize; 2],
}

impl NonIsoWitness {
    /// Which output orders disagree with the input order on the witness pair.
    pub fn differs_from_base(&self) -> [bool; 2] {
        self.verdicts.split.map(|o| o != self.verdicts.base_split)
    }

    pub fn passed(&self) -> bool {
        let v = &self.verdicts;
        v.chain_positive.iter().all(|b| *b)
            && v.split == [Ordering::Greater, Ordering::Less]
            && v.tau_inequalities
            && v.biinvariance.iter().all(BiinvReport::is_clean)
    }
}

pub fn nonisolation_witness(input: &NonIsoInput) -> Result<NonIsoWitness, NonIsoError> {
    nonisolation_witness_with(input, Exec::default())
}

pub fn nonisolation_witness_with(
    input: &NonIsoInput,
    exec: Exec,
) -> Result<NonIsoWitness, NonIsoError> {
    let r = &input.realization;
    if r.blocks().iter().max() != Some(&1) {
        return Err(NonIsoError::NotTwoBlocks);
    }
    let chain = validate_chain(r, &input.chain)?;
    let f1 = chain[0].clone();
    let (f0, u_star) = smallest_conjugate(r, &chain, input.scope);
    let t1 = crit(r, &f1);
    let t0 = crit(r, &f0);

    let raw = find_push_word(r, &t1, &t0, input.search_radius)?;
    let push = normalize_push(r, &raw, &t1, &t0);
    let last = push.last_letter().clone();
    let t_m = push.t_m().clone();
    let mut beyond = Vec::with_capacity(3);
    let mut p = t_m.clone();
    for _ in 0..3 {
        let q = r.eval_word(&last, &p);
        if q >= p {
            return Err(NonIsoError::NonMonotone);
        }
        beyond.push(q.clone());
        p = q;
    }
    let beyond: [Rational; 3] = beyond.try_into().expect("three points");

    let h_block = r.block_of(last.letters()[0].factor);
    let probe = choose_probe(r, 1 - h_block, &t_m)?;
    let two = Rational::from_integer(2.into());
    let t_prime = (&t_m + &t0) / &two;
    let (tau1, tau2) =
        build_tau_pair(&t_prime, &probe.t2, &probe.t3, &t_m, &beyond[0], &beyond[2])?;
    let g_map = r.realize_word(&probe.g);
    if tau1.eval(&g_map.eval(&tau1.eval_inverse(&t_m))) <= beyond[1] {
        return Err(NonIsoError::TauInequality("tau1"));
    }
    if tau2.eval(&g_map.eval(&tau2.eval_inverse(&t_m))) >= beyond[1] {
        return Err(NonIsoError::TauInequality("tau2"));
    }

    // keep perturbations well inside the gaps the inequalities rely on
    let gaps = [
        &t0 - &t_prime,
        &beyond[0] - &beyond[1],
        &beyond[1] - &beyond[2],
    ];
    let eps = gaps
        .iter()
        .map(|g| g / Rational::from_integer(8.into()))
        .fold(Rational::new(1.into(), 10.into()), |a, b| a.min(b));
    let order1 = adjusted_order(
        r,
        &tau1,
        &probe,
        &t_m,
        &beyond[1],
        true,
        &t0,
        &eps,
        input.merge_radius,
        input.seed,
        "tau1",
        exec,
    )?;
    let order2 = adjusted_order(
        r,
        &tau2,
        &probe,
        &t_m,
        &beyond[1],
        false,
        &t0,
        &eps,
        input.merge_radius,
        input.seed.wrapping_add(1),
        "tau2",
        exec,
    )?;

    let fprime = push.word.clone();
    let w_plus = f1.conjugate_by(&probe.g.multiply(&fprime));
    let w_minus = f1.conjugate_by(&last.pow(2).multiply(&fprime));
    let w_minus_literal = f1.conjugate_by(&last.multiply(&fprime));

    let orders = [&order1, &order2];
    let chain_positive = orders.map(|o| chain.iter().all(|f| o.sign(f).is_positive()));
    let split = orders.map(|o| compare(o, &w_plus, &w_minus));
    let literal_split = orders.map(|o| compare(o, &w_plus, &w_minus_literal));
    let base = RealizedOrder::new(r.clone());
    let base_split = compare(&base, &w_plus, &w_minus);
    let probe_images = orders.map(|o| {
        let conj = probe.g.conjugate_by(&Word::gen(o.tau_factor, 1));
        o.merged.eval_word(&conj, &t_m)
    });
    let tau_inequalities = probe_images[0] > beyond[1]
        && probe_images[1] < beyond[1]
        && orders.iter().all(|o| {
            o.merged.critical_point(&Word::gen(o.tau_factor, 1)) < Critical::At(t0.clone())
        });
    let biinvariance = orders.map(|o| check_biinvariance(o, input.audit_radius, exec));
    let ball = r.ball(input.audit_radius.max(3));
    let differ_12: Vec<Word> = ball
        .iter()
        .filter(|w| order1.sign(w) != order2.sign(w))
        .cloned()
        .collect();
    let differ_base = orders.map(|o| ball.iter().filter(|w| o.sign(w) != base.sign(w)).count());

    Ok(NonIsoWitness {
        chain,
        f0,
        u_star,
        t1,
        t0,
        push,
        beyond,
        probe,
        t_prime,
        tau1,
        tau2,
        order1,
        order2,
        w_plus,
        w_minus,
        w_minus_literal,
        verdicts: Verdicts {
            chain_positive,
            split,
            literal_split,
            base_split,
            probe_images,
            tau_inequalities,
            biinvariance,
            differ_12,
            differ_base,
        },
    })
}

fn ordering_word(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "less",
        Ordering::Equal => "equal",
        Ordering::Greater => "greater",
    }
}

impl fmt::Display for NonIsoWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = &self.verdicts;
        let chain: Vec<String> = self.chain.iter().map(Word::to_string).collect();
        writeln!(f, "chain (sorted) {}", chain.join(" < "))?;
        writeln!(f, "f0 {}  (u* = {})", self.f0, self.u_star)?;
        writeln!(
            f,
            "t1 {}  t0 {}",
            fmt_rational(&self.t1),
            fmt_rational(&self.t0)
        )?;
        writeln!(f, "f' {}", self.push.word)?;
        let pts: Vec<String> = self
            .push
            .points
            .iter()
            .chain(&self.beyond)
            .map(fmt_rational)
            .collect();
        writeln!(f, "t'_1.. t'_(m+3) {}", pts.join(" "))?;
        writeln!(
            f,
            "probe g {}  t'' {}  t''' {}  t' {}",
            self.probe.g,
            fmt_rational(&self.probe.t2),
            fmt_rational(&self.probe.t3),
            fmt_rational(&self.t_prime)
        )?;
        writeln!(f, "tau1 {}", self.tau1)?;
        writeln!(f, "tau2 {}", self.tau2)?;
        writeln!(f, "tau1' {}", self.order1.tau_prime())?;
        writeln!(f, "tau2' {}", self.order2.tau_prime())?;
        writeln!(
            f,
            "probe images {} {}  (t'_(m+2) = {})",
            fmt_rational(&v.probe_images[0]),
            fmt_rational(&v.probe_images[1]),
            fmt_rational(&self.beyond[1])
        )?;
        writeln!(f, "w+ {}", self.w_plus)?;
        writeln!(f, "w- {}", self.w_minus)?;
        writeln!(
            f,
            "order1 w+ vs w-: {}  order2 w+ vs w-: {}",
            ordering_word(v.split[0]),
            ordering_word(v.split[1])
        )?;
        writeln!(f, "input order w+ vs w-: {}", ordering_word(v.base_split))?;
        writeln!(
            f,
            "literal pair {}: order1 {}  order2 {}",
            self.w_minus_literal,
            ordering_word(v.literal_split[0]),
            ordering_word(v.literal_split[1])
        )?;
        for (i, o) in [&self.order1, &self.order2].iter().enumerate() {
            let positive: Vec<String> = crate::word::ball(&o.gens, 2)
                .into_iter()
                .filter(|w| o.sign(w).is_positive())
                .map(|w| w.to_string())
                .collect();
            writeln!(f, "cone{} (radius 2) {}", i + 1, positive.join(", "))?;
            writeln!(
                f,
                "order{} chain positive {}  biinvariance violations {}",
                i + 1,
                v.chain_positive[i],
                v.biinvariance[i].violations.len()
            )?;
        }
        writeln!(
            f,
            "ball-3 disagreements: order1 vs order2 {}, vs input {} / {}",
            v.differ_12.len(),
            v.differ_base[0],
            v.differ_base[1]
        )
    }
}

/// The pieces of `realize((f)ᵢ)` as in the conjugation expansion: the maps
/// of `f`, then for each `G` letter `x_j` the conjugates of `τ′` and `τ′⁻¹`
/// by the tails `S_j`, `S_{j+1}`, composed left to right as written.
pub fn telescoped_map(o: &AdjustedOrder, f: &Word) -> PLMap {
    let r = &o.merged;
    let tau = Word::gen(o.tau_factor, 1);
    let letters = f.letters();
    let tail = |j: usize| normal_form(letters[j..].iter().copied());
    let mut factors: Vec<Word> = vec![f.clone()];
    for (j, l) in letters.iter().enumerate() {
        if o.g_factors.contains(&l.factor) {
            factors.push(tau.conjugate_by(&tail(j).inverse()));
            factors.push(tau.inverse().conjugate_by(&tail(j + 1).inverse()));
        }
    }
    factors
        .iter()
        .map(|w| r.realize_word(w))
        .fold(PLMap::identity(), |acc, m| acc.compose(&m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};
    use crate::realization::{merge, standard_realization, FactorSpec};
    use crate::word::w;

    fn merged_pair() -> Realization {
        let g = standard_realization(&FactorSpec::z(int(0)));
        merge(&g, &g, &q(1, 10), 3, 7).unwrap().realization
    }

    #[test]
    fn smallest_conjugate_examples() {
        let r = merged_pair();
        let (f0, u) = smallest_conjugate(&r, &[w("a")], ConjugatorScope::Suffixes);
        assert_eq!(f0, w("a"));
        assert!(u.is_identity());
        let chain = validate_chain(&r, &[w("a"), w("ab")]).unwrap();
        let (f0, _) = smallest_conjugate(&r, &chain, ConjugatorScope::Suffixes);
        let f1 = &chain[0];
        let mut cands = vec![f1.clone()];
        for fi in &chain {
            for u in fi.suffixes() {
                cands.push(f1.conjugate_by(&u));
            }
        }
        for c in &cands {
            assert_ne!(order_cmp(&r, c, &f0), Ordering::Less);
        }
        assert_ne!(order_cmp(&r, &f0, f1), Ordering::Greater);
    }

    #[test]
    fn push_examples() {
        let r = merged_pair();
        let t = crit(&r, &w("a"));
        assert!(find_push_word(&r, &t, &t, 0).is_err());
        let f = find_push_word(&r, &t, &t, 4).unwrap();
        assert!(r.eval_word(&f, &t) < t);
        let push = normalize_push(&r, &f, &t, &t);
        let mut prev = t.clone();
        for p in &push.points {
            assert!(p < &prev);
            prev = p.clone();
        }
        assert!(push.t_m() < &t);
        if push.points.len() > 1 {
            assert!(push.points[push.points.len() - 2] >= t);
        }
    }

    #[test]
    fn normalization_drops_rising_letters() {
        let r = merged_pair();
        let t = crit(&r, &w("a"));
        // a raises every point below r_a, so it is dropped
        let push = normalize_push(&r, &w("b^-1 a"), &t, &t);
        assert_eq!(push.word, w("b^-1"));
    }

    #[test]
    fn probe_degenerate_factor() {
        // a generator fixing everything below -10
        let bump = PLMap::from_points(vec![
            (int(-2), int(-2)),
            (int(-1), q(-1, 2)),
            (int(0), int(0)),
        ])
        .unwrap();
        let g = Realization::new(vec![FactorAction::cyclic(bump)], vec![0]).unwrap();
        let h = standard_realization(&FactorSpec::z(int(3)));
        let r = g.join(&h).unwrap();
        assert_eq!(choose_probe(&r, 0, &int(-10)), Err(NonIsoError::NoMovement));
        let p = choose_probe(&r, 0, &q(-1, 4)).unwrap();
        assert!(p.t3 < p.t2 && p.t2 < q(-1, 4));
    }

    #[test]
    fn rejects_nonpositive_chain() {
        let r = merged_pair();
        let input = NonIsoInput::new(r, vec![w("a"), w("b^-1")], 4, 2, 7);
        assert!(matches!(
            nonisolation_witness(&input),
            Err(NonIsoError::NotPositive(_))
        ));
    }

    #[test]
    fn witness_end_to_end() {
        let r = merged_pair();
        let input = NonIsoInput::new(r.clone(), vec![w("a"), w("b"), w("ab")], 4, 1, 7);
        let wit = nonisolation_witness(&input).unwrap();
        assert!(wit.passed(), "{wit}");
        assert!(wit.differs_from_base().iter().any(|b| *b));
        // critical points of chain elements are unchanged by the adjustment
        for o in [&wit.order1, &wit.order2] {
            for f in &wit.chain {
                assert_eq!(
                    o.merged.critical_point(&o.adjusted_word(f)),
                    r.critical_point(f)
                );
            }
            for f in r.ball(2) {
                assert_eq!(
                    o.merged.realize_word(&o.adjusted_word(&f)),
                    telescoped_map(o, &f)
                );
            }
        }
        // pure H words are untouched
        let h_factor = wit.push.last_letter().letters()[0].factor;
        let h = Word::gen(h_factor, 1);
        assert_eq!(wit.order1.adjusted_word(&h), h);
    }
}
