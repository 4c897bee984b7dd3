//! Dynamical realizations: free products acting on the line by PL maps.
//!
//! Each free factor carries its own generator maps; factors are grouped into
//! *blocks*, the free factors of the product being merged (a block may itself
//! hold several factors, e.g. `F₂ = ⟨a⟩✱⟨b⟩` inside `F₂✱⟨τ⟩`). A word acts by
//! composing letter maps right to left, and its sign is the left germ at its
//! critical point.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use num_traits::{One, Signed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::par::Exec;
use crate::pl::{chain_eval, chain_germ, random_bump, standard_generator_scaled, Critical, PLMap};
use crate::rational::{fmt_rational, parse_rational, Rational};
use crate::sign::Sign;
use crate::word::{ball, normal_form, Exponent, FactorId, Letter, Word, MAX_FACTOR};

/// Attempt cap for [`merge`].
pub const MERGE_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizationError {
    #[error("generator of factor {0} acts as the identity")]
    IdentityGenerator(char),
    #[error("at most {} factors are supported", MAX_FACTOR as usize + 1)]
    TooManyFactors,
    #[error("the two maps of lattice factor {0} do not commute")]
    NonCommuting(char),
    #[error("block list does not match the factor list")]
    BlockMismatch,
    #[error("word {0} uses a factor this realization does not have")]
    ForeignWord(String),
    #[error("no clean merge within {attempts} attempts")]
    MergeFailed { attempts: usize },
    #[error("malformed realization text: {0}")]
    Parse(String),
}

pub fn factor_name(id: FactorId) -> char {
    (b'a' + id) as char
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FactorKind {
    /// ℤ, one generator map.
    Cyclic,
    /// ℤ² with the lexicographic order; maps `(big, small)`.
    Lattice,
}

/// The action of one free factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorAction {
    pub kind: FactorKind,
    pub maps: Vec<PLMap>,
    /// Sign the factor's own order gives its generator(s).
    pub declared: Sign,
}

impl FactorAction {
    pub fn cyclic(map: PLMap) -> Self {
        FactorAction {
            kind: FactorKind::Cyclic,
            maps: vec![map],
            declared: Sign::Positive,
        }
    }

    pub fn lattice(big: PLMap, small: PLMap) -> Self {
        FactorAction {
            kind: FactorKind::Lattice,
            maps: vec![big, small],
            declared: Sign::Positive,
        }
    }

    pub fn declared_as(mut self, s: Sign) -> Self {
        self.declared = s;
        self
    }

    /// Sign of a factor element in the factor's own order.
    pub fn declared_sign(&self, e: Exponent) -> Sign {
        Sign::from_i64(e.lex_signum()) * self.declared
    }

    pub fn conjugate_by(&self, phi: &PLMap) -> FactorAction {
        FactorAction {
            kind: self.kind,
            maps: self.maps.iter().map(|m| m.conjugate_by(phi)).collect(),
            declared: self.declared,
        }
    }
}

/// Description of a standard factor realization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorSpec {
    /// `ℤ` via the standard pattern at critical point `c`, stretched by `scale`.
    Z { c: Rational, scale: Rational },
    /// `ℤ²` lex: a bump on `(c − 1, c)` for the big generator and the standard
    /// pattern at `c − 2` for the small one (disjoint supports).
    Z2Lex { c: Rational },
}

impl FactorSpec {
    pub fn z(c: Rational) -> Self {
        FactorSpec::Z {
            c,
            scale: Rational::one(),
        }
    }

    pub fn action(&self) -> FactorAction {
        match self {
            FactorSpec::Z { c, scale } => FactorAction::cyclic(standard_generator_scaled(c, scale)),
            FactorSpec::Z2Lex { c } => {
                let one = Rational::one();
                let half = Rational::new(1.into(), 2.into());
                let quarter = Rational::new(1.into(), 4.into());
                let big = PLMap::from_points(vec![
                    (c - &one, c - &one),
                    (c - &half, c - &quarter),
                    (c.clone(), c.clone()),
                ])
                .expect("bump data is increasing");
                let small =
                    standard_generator_scaled(&(c - Rational::from_integer(2.into())), &one);
                FactorAction::lattice(big, small)
            }
        }
    }
}

impl fmt::Display for FactorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorSpec::Z { c, scale } if scale.is_one() => write!(f, "Z@{}", fmt_rational(c)),
            FactorSpec::Z { c, scale } => {
                write!(f, "Z@{}:{}", fmt_rational(c), fmt_rational(scale))
            }
            FactorSpec::Z2Lex { c } => write!(f, "Z2@{}", fmt_rational(c)),
        }
    }
}

impl FromStr for FactorSpec {
    type Err = RealizationError;

    /// `Z@c`, `Z@c:scale` or `Z2@c`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad =
            || RealizationError::Parse(format!("factor spec {s:?} (expected Z@c, Z@c:s or Z2@c)"));
        let (kind, rest) = s.trim().split_once('@').ok_or_else(bad)?;
        let num = |t: &str| parse_rational(t).map_err(|_| bad());
        match kind {
            "Z" => {
                let (c, scale) = match rest.split_once(':') {
                    Some((c, sc)) => (num(c)?, num(sc)?),
                    None => (num(rest)?, Rational::one()),
                };
                if !scale.is_positive() {
                    return Err(bad());
                }
                Ok(FactorSpec::Z { c, scale })
            }
            "Z2" => Ok(FactorSpec::Z2Lex { c: num(rest)? }),
            _ => Err(bad()),
        }
    }
}

/// One standard factor as a realization on its own (factor `a`).
pub fn standard_realization(spec: &FactorSpec) -> Realization {
    Realization::new(vec![spec.action()], vec![0]).expect("standard actions are valid")
}

/// Generator actions of a free product of supported factors.
///
/// Letter maps are cached; the cache is invisible to equality and cloning.
pub struct Realization {
    factors: Vec<FactorAction>,
    blocks: Vec<usize>,
    audit_radius: usize,
    cache: RwLock<HashMap<Letter, Arc<PLMap>>>,
}

impl Clone for Realization {
    fn clone(&self) -> Self {
        Realization {
            factors: self.factors.clone(),
            blocks: self.blocks.clone(),
            audit_radius: self.audit_radius,
            cache: RwLock::default(),
        }
    }
}

impl PartialEq for Realization {
    fn eq(&self, other: &Self) -> bool {
        self.factors == other.factors
            && self.blocks == other.blocks
            && self.audit_radius == other.audit_radius
    }
}

impl fmt::Debug for Realization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Realization")
            .field("factors", &self.factors)
            .field("blocks", &self.blocks)
            .field("audit_radius", &self.audit_radius)
            .finish()
    }
}

pub const DEFAULT_AUDIT_RADIUS: usize = 3;

impl Realization {
    /// `blocks[i]` is the free-product block of factor `i`.
    pub fn new(factors: Vec<FactorAction>, blocks: Vec<usize>) -> Result<Self, RealizationError> {
        if factors.len() > MAX_FACTOR as usize + 1 {
            return Err(RealizationError::TooManyFactors);
        }
        if blocks.len() != factors.len() {
            return Err(RealizationError::BlockMismatch);
        }
        for (i, fa) in factors.iter().enumerate() {
            let name = factor_name(i as FactorId);
            let arity = match fa.kind {
                FactorKind::Cyclic => 1,
                FactorKind::Lattice => 2,
            };
            if fa.maps.len() != arity || fa.declared == Sign::Zero {
                return Err(RealizationError::Parse(format!(
                    "factor {name} is malformed"
                )));
            }
            if fa.maps.iter().any(PLMap::is_identity) {
                return Err(RealizationError::IdentityGenerator(name));
            }
            if fa.kind == FactorKind::Lattice
                && fa.maps[0].compose(&fa.maps[1]) != fa.maps[1].compose(&fa.maps[0])
            {
                return Err(RealizationError::NonCommuting(name));
            }
        }
        Ok(Realization {
            factors,
            blocks,
            audit_radius: DEFAULT_AUDIT_RADIUS,
            cache: RwLock::default(),
        })
    }

    pub fn with_audit_radius(mut self, n: usize) -> Self {
        self.audit_radius = n;
        self
    }

    pub fn audit_radius(&self) -> usize {
        self.audit_radius
    }

    pub fn factors(&self) -> &[FactorAction] {
        &self.factors
    }

    pub fn factor_count(&self) -> usize {
        self.factors.len()
    }

    pub fn block_of(&self, factor: FactorId) -> usize {
        self.blocks[factor as usize]
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// One word per generator: `x` for cyclic factors, `x^(1,0)` and
    /// `x^(0,1)` for lattice factors.
    pub fn generators(&self) -> Vec<Word> {
        let mut out = Vec::new();
        for (i, fa) in self.factors.iter().enumerate() {
            let id = i as FactorId;
            match fa.kind {
                FactorKind::Cyclic => out.push(Word::gen(id, 1)),
                FactorKind::Lattice => {
                    out.push(Word::from_letter(Letter::new(id, Exponent::lattice(1, 0))));
                    out.push(Word::from_letter(Letter::new(id, Exponent::lattice(0, 1))));
                }
            }
        }
        out
    }

    pub fn ball(&self, radius: usize) -> Vec<Word> {
        ball(&self.generators(), radius)
    }

    /// Rejects words with letters outside this realization's factors or of
    /// the wrong shape for their factor.
    pub fn check_word(&self, w: &Word) -> Result<(), RealizationError> {
        for l in w.letters() {
            let ok = match self.factors.get(l.factor as usize) {
                None => false,
                Some(fa) => fa.kind == FactorKind::Lattice || l.exp.is_cyclic(),
            };
            if !ok {
                return Err(RealizationError::ForeignWord(w.to_string()));
            }
        }
        Ok(())
    }

    pub fn letter_map(&self, l: Letter) -> Arc<PLMap> {
        if let Some(m) = self.cache.read().expect("cache lock").get(&l) {
            return Arc::clone(m);
        }
        let fa = self
            .factors
            .get(l.factor as usize)
            .unwrap_or_else(|| panic!("letter {l} outside the realization"));
        let map = match fa.kind {
            FactorKind::Cyclic => {
                assert!(l.exp.is_cyclic(), "lattice exponent on cyclic factor {l}");
                fa.maps[0].pow(l.exp.major)
            }
            FactorKind::Lattice => fa.maps[0]
                .pow(l.exp.major)
                .compose(&fa.maps[1].pow(l.exp.minor)),
        };
        let map = Arc::new(map);
        self.cache
            .write()
            .expect("cache lock")
            .insert(l, Arc::clone(&map));
        map
    }

    /// Letter maps in acting order (last written letter first).
    fn acting_maps(&self, w: &Word) -> Vec<Arc<PLMap>> {
        w.letters()
            .iter()
            .rev()
            .map(|&l| self.letter_map(l))
            .collect()
    }

    /// The PL map of `w`: letter maps composed right to left.
    pub fn realize_word(&self, w: &Word) -> PLMap {
        self.acting_maps(w)
            .iter()
            .fold(PLMap::identity(), |acc, m| m.compose(&acc))
    }

    pub fn eval_word(&self, w: &Word, x: &Rational) -> Rational {
        let maps = self.acting_maps(w);
        let refs: Vec<&PLMap> = maps.iter().map(|m| m.as_ref()).collect();
        chain_eval(&refs, x)
    }

    /// Critical point and left-germ sign of `w`, read without composing.
    pub fn germ(&self, w: &Word) -> (Critical, Sign) {
        let maps = self.acting_maps(w);
        let refs: Vec<&PLMap> = maps.iter().map(|m| m.as_ref()).collect();
        chain_germ(&refs)
    }

    pub fn realized_sign(&self, w: &Word) -> Sign {
        self.germ(w).1
    }

    pub fn critical_point(&self, w: &Word) -> Critical {
        self.germ(w).0
    }

    /// Sign in the factor's own order for one-letter words.
    pub fn declared_sign(&self, w: &Word) -> Option<Sign> {
        match w.letters() {
            [l] => Some(self.factors[l.factor as usize].declared_sign(l.exp)),
            _ => None,
        }
    }

    /// Declared sign on one-letter words, realized sign otherwise.
    pub fn order_sign(&self, w: &Word) -> Sign {
        self.declared_sign(w)
            .unwrap_or_else(|| self.realized_sign(w))
    }

    /// True when every letter of `w` lies in factors of `block`.
    pub fn in_block(&self, w: &Word, block: usize) -> bool {
        w.letters()
            .iter()
            .all(|l| self.blocks[l.factor as usize] == block)
    }

    /// Maximal runs of letters from one block, in written order.
    pub fn block_syllables(&self, w: &Word) -> Vec<Word> {
        let mut out: Vec<Vec<Letter>> = Vec::new();
        let mut last_block = None;
        for &l in w.letters() {
            let b = self.blocks[l.factor as usize];
            if last_block == Some(b) {
                out.last_mut().expect("open run").push(l);
            } else {
                out.push(vec![l]);
                last_block = Some(b);
            }
        }
        out.into_iter().map(normal_form).collect()
    }

    /// Deletes block syllables whose critical point lies below the image of
    /// `x` under the syllables acting before them, until nothing changes.
    pub fn x_reduce(&self, w: &Word, x: &Rational) -> Word {
        let mut current = w.clone();
        loop {
            let syl = self.block_syllables(&current);
            let mut keep = vec![true; syl.len()];
            let mut p = x.clone();
            for k in (0..syl.len()).rev() {
                if let Critical::At(t) = self.critical_point(&syl[k]) {
                    if t < p {
                        keep[k] = false;
                    }
                }
                p = self.eval_word(&syl[k], &p);
            }
            if keep.iter().all(|k| *k) {
                return current;
            }
            current = normal_form(
                syl.iter()
                    .zip(&keep)
                    .filter(|(_, k)| **k)
                    .flat_map(|(s, _)| s.letters().to_vec()),
            );
        }
    }

    /// The free product of `self` and `other`; `other`'s factors are
    /// renumbered after `self`'s and its blocks after `self`'s blocks.
    pub fn join(&self, other: &Realization) -> Result<Realization, RealizationError> {
        let offset = self.blocks.iter().max().map_or(0, |b| b + 1);
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        let mut blocks = self.blocks.clone();
        blocks.extend(other.blocks.iter().map(|b| b + offset));
        Ok(Realization::new(factors, blocks)?.with_audit_radius(self.audit_radius))
    }

    /// Every generator map replaced by `φ ∘ g ∘ φ⁻¹`.
    pub fn conjugated(&self, phi: &PLMap) -> Realization {
        Realization {
            factors: self.factors.iter().map(|f| f.conjugate_by(phi)).collect(),
            blocks: self.blocks.clone(),
            audit_radius: self.audit_radius,
            cache: RwLock::default(),
        }
    }

    /// Critical points of the nonidentity elements of `ball(radius)`, sorted.
    pub fn critical_set(&self, radius: usize) -> Vec<Rational> {
        let set: BTreeSet<Rational> = self
            .ball(radius)
            .iter()
            .filter_map(|w| self.critical_point(w).point().cloned())
            .collect();
        set.into_iter().collect()
    }

    /// Nonidentity ball words whose map fixes an interval below its critical
    /// point.
    pub fn germ_faithfulness_failures(&self, radius: usize, exec: Exec) -> Vec<Word> {
        let words: Vec<Word> = self
            .ball(radius)
            .into_iter()
            .filter(|w| !w.is_identity())
            .collect();
        exec.flat_map(&words, |w| {
            if self.realize_word(w).fixes_interval_below_critical() {
                vec![w.clone()]
            } else {
                vec![]
            }
        })
    }

    /// Smallest and largest breakpoints over all generator maps.
    fn breakpoint_hull(&self) -> Option<(Rational, Rational)> {
        let xs = self
            .factors
            .iter()
            .flat_map(|f| f.maps.iter())
            .flat_map(|m| m.breakpoint_xs().iter());
        let lo = xs.clone().min()?.clone();
        let hi = xs.max()?.clone();
        Some((lo, hi))
    }
}

/// Renumbers the factors of `w` by `offset` (the right operand of
/// [`Realization::join`] renumbers this way).
pub fn shift_word(w: &Word, offset: FactorId) -> Word {
    w.substitute(|l| Word::from_letter(Letter::new(l.factor + offset, l.exp)))
}

/// Outcome of the exhaustive merging check at one radius.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MergeReport {
    pub violations: Vec<(Word, Rational)>,
    pub checked_radius: usize,
}

impl MergeReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for MergeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (w, x) in &self.violations {
            writeln!(f, "VIOLATION {w} @ {}", fmt_rational(x))?;
        }
        Ok(())
    }
}

/// Checks the merging condition for the two blocks of `joined`, given the
/// critical sets of each side: every `x`-reduced ball word fixing a critical
/// point `x` must lie in a side owning `x`.
///
/// Words are scanned in shortlex order, so violations by shorter words come
/// first.
fn merging_violations(
    joined: &Realization,
    t_g: &[Rational],
    t_h: &[Rational],
    radius: usize,
    exec: Exec,
) -> MergeReport {
    let mut points: Vec<(Rational, bool, bool)> = Vec::new();
    let all: BTreeSet<&Rational> = t_g.iter().chain(t_h).collect();
    for x in all {
        points.push((
            x.clone(),
            t_g.binary_search(x).is_ok(),
            t_h.binary_search(x).is_ok(),
        ));
    }
    let words: Vec<Word> = joined
        .ball(radius)
        .into_iter()
        .filter(|w| !w.is_identity())
        .collect();
    let violations = exec.flat_map(&words, |f| {
        let in_g = joined.in_block(f, 0);
        let in_h = joined.in_block(f, 1);
        points
            .iter()
            .filter(|(x, owned_g, owned_h)| {
                !((*owned_g && in_g) || (*owned_h && in_h))
                    && &joined.eval_word(f, x) == x
                    && &joined.x_reduce(f, x) == f
            })
            .map(|(x, _, _)| (f.clone(), x.clone()))
            .collect()
    });
    MergeReport {
        violations,
        checked_radius: radius,
    }
}

/// Exhaustive merging check of `R_G` against `R_H` over `ball(radius)`.
/// Each side is treated as one block of the free product.
pub fn check_merging(g: &Realization, h: &Realization, radius: usize) -> MergeReport {
    check_merging_with(g, h, radius, Exec::default())
}

pub fn check_merging_with(
    g: &Realization,
    h: &Realization,
    radius: usize,
    exec: Exec,
) -> MergeReport {
    if radius == 0 {
        return MergeReport::default();
    }
    let joined = two_blocks(g, h);
    merging_violations(
        &joined,
        &g.critical_set(radius),
        &h.critical_set(radius),
        radius,
        exec,
    )
}

/// `g ✱ h` with all of `g` in block 0 and all of `h` in block 1.
fn two_blocks(g: &Realization, h: &Realization) -> Realization {
    let mut factors = g.factors.clone();
    factors.extend(h.factors.iter().cloned());
    let mut blocks = vec![0; g.factors.len()];
    blocks.extend(std::iter::repeat_n(1, h.factors.len()));
    Realization::new(factors, blocks)
        .expect("factor count within bounds")
        .with_audit_radius(g.audit_radius.max(h.audit_radius))
}

/// Result of a successful [`merge`].
#[derive(Clone, Debug)]
pub struct Merged {
    /// `R_G ✱ φR_Hφ⁻¹`, `G` in block 0 and `H` in block 1.
    pub realization: Realization,
    pub conjugator: PLMap,
    /// Index of the accepted attempt (0 is the identity conjugator).
    pub attempt: usize,
    pub report: MergeReport,
}

/// Conjugates `R_H` by a small PL map until the pair merges at `radius`.
pub fn merge(
    g: &Realization,
    h: &Realization,
    eps: &Rational,
    radius: usize,
    seed: u64,
) -> Result<Merged, RealizationError> {
    merge_with(g, h, eps, radius, seed, Exec::default(), |_| true)
}

/// [`merge`] with an extra acceptance test on each clean candidate.
///
/// Attempt 0 uses the identity; later attempts draw bumps with norm `< eps`
/// from a ChaCha stream seeded by `seed`, supported around all breakpoints.
pub fn merge_with<F>(
    g: &Realization,
    h: &Realization,
    eps: &Rational,
    radius: usize,
    seed: u64,
    exec: Exec,
    accept: F,
) -> Result<Merged, RealizationError>
where
    F: Fn(&Merged) -> bool,
{
    assert!(eps.is_positive(), "eps must be positive");
    let one = Rational::one();
    let (lo, hi) = match (g.breakpoint_hull(), h.breakpoint_hull()) {
        (Some((a, b)), Some((c, d))) => (a.min(c) - &one, b.max(d) + &one),
        (Some((a, b)), None) | (None, Some((a, b))) => (a - &one, b + &one),
        (None, None) => (-one.clone(), one.clone()),
    };
    let t_g = g.critical_set(radius);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..MERGE_ATTEMPTS {
        let phi = if attempt == 0 {
            PLMap::identity()
        } else {
            random_bump(&lo, &hi, eps, &mut rng)
        };
        let h_conj = h.conjugated(&phi);
        let joined = two_blocks(g, &h_conj);
        let report = if radius == 0 {
            MergeReport::default()
        } else {
            merging_violations(&joined, &t_g, &h_conj.critical_set(radius), radius, exec)
        };
        if !report.is_clean() {
            continue;
        }
        let merged = Merged {
            realization: joined,
            conjugator: phi,
            attempt,
            report,
        };
        if accept(&merged) {
            return Ok(merged);
        }
    }
    Err(RealizationError::MergeFailed {
        attempts: MERGE_ATTEMPTS,
    })
}

/// Positive (order-sign) ball words whose positive-displacement supremum does
/// not exceed the negative one.
pub fn dynbi_failures(r: &Realization, radius: usize, exec: Exec) -> Vec<Word> {
    let words = r.ball(radius);
    exec.flat_map(&words, |w| {
        if w.is_identity() || !r.order_sign(w).is_positive() {
            return vec![];
        }
        let m = r.realize_word(w);
        if m.sup_displacement(Sign::Positive) > m.sup_displacement(Sign::Negative) {
            vec![]
        } else {
            vec![w.clone()]
        }
    })
}

pub fn check_dynbi(r: &Realization, radius: usize) -> bool {
    dynbi_failures(r, radius, Exec::default()).is_empty()
}

/// Factor elements `x` with `|exponent| ≤ bound` (per coordinate) whose
/// realized sign differs from the factor's declared order.
pub fn extension_failures(r: &Realization, bound: i64) -> Vec<Word> {
    let mut out = Vec::new();
    for (i, fa) in r.factors.iter().enumerate() {
        let minors = match fa.kind {
            FactorKind::Cyclic => 0..=0,
            FactorKind::Lattice => -bound..=bound,
        };
        for major in -bound..=bound {
            for minor in minors.clone() {
                let e = Exponent::lattice(major, minor);
                if e.is_zero() {
                    continue;
                }
                let w = Word::from_letter(Letter::new(i as FactorId, e));
                if r.realized_sign(&w) != fa.declared_sign(e) {
                    out.push(w);
                }
            }
        }
    }
    out
}

/// A failure of the power-bounded domination check: `h^{-n} |f|` is not
/// positive although `r_f > r_h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynnolFailure {
    pub f: Word,
    pub h: Word,
    pub n: i64,
}

/// For ball pairs with `r_f > r_h`, checks `h^n ≺ |f|` for `|n| ≤ bound`,
/// i.e. `h^{-n}|f|` positive, where `|f|` is `f` or `f⁻¹`, whichever is
/// positive.
pub fn dynnol_failures(
    r: &Realization,
    radius: usize,
    bound: i64,
    exec: Exec,
) -> Vec<DynnolFailure> {
    let words: Vec<Word> = r
        .ball(radius)
        .into_iter()
        .filter(|w| !w.is_identity())
        .collect();
    let maps: Vec<PLMap> = exec.map(&words, |w| r.realize_word(w));
    // |f| for each word
    let abs: Vec<PLMap> = exec.map(&maps, |m| {
        if m.sign().is_negative() {
            m.inverse()
        } else {
            m.clone()
        }
    });
    let idx: Vec<usize> = (0..words.len()).collect();
    exec.flat_map(&idx, |&hi| {
        let h = &maps[hi];
        let r_h = h.critical_point();
        let powers: Vec<(i64, PLMap)> = (-bound..=bound).map(|n| (n, h.pow(-n))).collect();
        let mut out = Vec::new();
        for (fi, f) in abs.iter().enumerate() {
            if f.critical_point() <= r_h {
                continue;
            }
            for (n, hp) in &powers {
                if chain_germ(&[f, hp]).1 != Sign::Positive {
                    out.push(DynnolFailure {
                        f: words[fi].clone(),
                        h: words[hi].clone(),
                        n: *n,
                    });
                }
            }
        }
        out
    })
}

pub fn check_dynnol_proxy(r: &Realization, radius: usize, power_bound: i64) -> bool {
    dynnol_failures(r, radius, power_bound, Exec::default()).is_empty()
}

impl fmt::Display for Realization {
    /// ```text
    /// audit 3
    /// a Z block=0 sign=+ : 1/2; (-1/1,-1/2) (0/1,0/1)
    /// b Z2 block=1 sign=+ : <big> | <small>
    /// ```
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "audit {}", self.audit_radius)?;
        for (i, fa) in self.factors.iter().enumerate() {
            let kind = match fa.kind {
                FactorKind::Cyclic => "Z",
                FactorKind::Lattice => "Z2",
            };
            let sign = if fa.declared.is_positive() { '+' } else { '-' };
            let maps: Vec<String> = fa.maps.iter().map(|m| m.to_string()).collect();
            writeln!(
                f,
                "{} {kind} block={} sign={sign} : {}",
                factor_name(i as FactorId),
                self.blocks[i],
                maps.join(" | ")
            )?;
        }
        Ok(())
    }
}

impl FromStr for Realization {
    type Err = RealizationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: String| RealizationError::Parse(m);
        let mut audit = DEFAULT_AUDIT_RADIUS;
        let mut factors = Vec::new();
        let mut blocks = Vec::new();
        for line in s.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(n) = line.strip_prefix("audit ") {
                audit = n
                    .trim()
                    .parse()
                    .map_err(|_| bad(format!("audit radius {n:?}")))?;
                continue;
            }
            let (head, body) = line
                .split_once(':')
                .ok_or_else(|| bad(format!("missing ':' in {line:?}")))?;
            let fields: Vec<&str> = head.split_whitespace().collect();
            let [name, kind, block, sign] = fields[..] else {
                return Err(bad(format!(
                    "expected 'name kind block=k sign=±' in {line:?}"
                )));
            };
            let expected = factor_name(factors.len() as FactorId).to_string();
            if name != expected {
                return Err(bad(format!(
                    "factor {name:?} out of order (expected {expected})"
                )));
            }
            let block: usize = block
                .strip_prefix("block=")
                .and_then(|b| b.parse().ok())
                .ok_or_else(|| bad(format!("block field {block:?}")))?;
            let declared = match sign {
                "sign=+" => Sign::Positive,
                "sign=-" => Sign::Negative,
                _ => return Err(bad(format!("sign field {sign:?}"))),
            };
            let maps = body
                .split('|')
                .map(|m| m.trim().parse::<PLMap>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| bad(e.to_string()))?;
            let kind = match kind {
                "Z" => FactorKind::Cyclic,
                "Z2" => FactorKind::Lattice,
                _ => return Err(bad(format!("factor kind {kind:?}"))),
            };
            factors.push(FactorAction {
                kind,
                maps,
                declared,
            });
            blocks.push(block);
        }
        Ok(Realization::new(factors, blocks)?.with_audit_radius(audit))
    }
}

/// Reference x-reduction acting on the composite maps directly; used to
/// cross-check the syllable pass.
#[cfg(test)]
fn agrees_after_reduction(r: &Realization, w: &Word, x: &Rational) -> bool {
    let full = r.realize_word(w);
    let red = r.realize_word(&r.x_reduce(w, x));
    full.agrees_on_ray(&red, x) && full.same_left_germ(&red, x)
}
