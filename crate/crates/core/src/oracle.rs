//! Order oracles: total sign functions on words, with combinators and an
//! exhaustive bi-invariance audit.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::aut::{apply_aut, AutWord};
use crate::magnus::magnus_sign;
use crate::par::Exec;
use crate::realization::Realization;
use crate::sign::Sign;
use crate::word::{ball, free_generators, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    Magnus,
    Realized,
    TypeAlpha,
    Reversed,
    PulledBack,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Magnus => "magnus",
            Provenance::Realized => "realized",
            Provenance::TypeAlpha => "type-alpha",
            Provenance::Reversed => "reversed",
            Provenance::PulledBack => "pulled-back",
        })
    }
}

/// A bi-order given by its sign function: `w > 1` iff `sign(w)` is positive.
pub trait OrderOracle: Send + Sync {
    fn sign(&self, w: &Word) -> Sign;

    fn provenance(&self) -> Provenance;

    /// Generators whose balls the audits scan.
    fn generators(&self) -> Vec<Word> {
        free_generators().to_vec()
    }
}

pub type SharedOracle = Arc<dyn OrderOracle>;

/// The Magnus order on the free group on `a`, `b`.
#[derive(Clone, Copy, Debug, Default)]
pub struct MagnusOrder;

impl OrderOracle for MagnusOrder {
    fn sign(&self, w: &Word) -> Sign {
        magnus_sign(w).unwrap_or_else(|e| panic!("magnus order undefined on {w}: {e}"))
    }

    fn provenance(&self) -> Provenance {
        Provenance::Magnus
    }
}

/// The order read off a realization: left germ at the critical point.
#[derive(Clone, Debug)]
pub struct RealizedOrder {
    pub realization: Arc<Realization>,
}

impl RealizedOrder {
    pub fn new(r: Realization) -> Self {
        RealizedOrder {
            realization: Arc::new(r),
        }
    }
}

impl OrderOracle for RealizedOrder {
    fn sign(&self, w: &Word) -> Sign {
        self.realization.realized_sign(w)
    }

    fn provenance(&self) -> Provenance {
        Provenance::Realized
    }

    fn generators(&self) -> Vec<Word> {
        self.realization.generators()
    }
}

/// Wraps a closure; handy for hand-made or deliberately broken orders.
pub struct FnOracle<F> {
    f: F,
    tag: Provenance,
}

impl<F> FnOracle<F>
where
    F: Fn(&Word) -> Sign + Send + Sync,
{
    pub fn new(tag: Provenance, f: F) -> Self {
        FnOracle { f, tag }
    }
}

impl<F> OrderOracle for FnOracle<F>
where
    F: Fn(&Word) -> Sign + Send + Sync,
{
    fn sign(&self, w: &Word) -> Sign {
        (self.f)(w)
    }

    fn provenance(&self) -> Provenance {
        self.tag
    }
}

pub type Membership = Arc<dyn Fn(&Word) -> bool + Send + Sync>;

/// `f ≻ 1` iff `f > 1` and `f ∉ Γ`, or `f < 1` and `f ∈ Γ`.
pub struct Reversed {
    base: SharedOracle,
    gamma: Membership,
}

impl OrderOracle for Reversed {
    fn sign(&self, w: &Word) -> Sign {
        let s = self.base.sign(w);
        if (self.gamma)(w) {
            -s
        } else {
            s
        }
    }

    fn provenance(&self) -> Provenance {
        Provenance::Reversed
    }

    fn generators(&self) -> Vec<Word> {
        self.base.generators()
    }
}

/// Reverses `base` on `Γ`. Convexity and normality of `Γ` are the caller's
/// business; [`check_biinvariance`] audits the result.
pub fn reverse_on(base: SharedOracle, gamma: Membership) -> Reversed {
    Reversed { base, gamma }
}

/// `sign′(w) = sign(σ(w))`.
pub struct PulledBack {
    base: SharedOracle,
    sigma: AutWord,
}

impl PulledBack {
    pub fn sigma(&self) -> &AutWord {
        &self.sigma
    }
}

impl OrderOracle for PulledBack {
    fn sign(&self, w: &Word) -> Sign {
        self.base.sign(&apply_aut(&self.sigma, w))
    }

    fn provenance(&self) -> Provenance {
        Provenance::PulledBack
    }

    fn generators(&self) -> Vec<Word> {
        self.base.generators()
    }
}

pub fn pullback(base: SharedOracle, sigma: AutWord) -> PulledBack {
    PulledBack { base, sigma }
}

/// `u` against `v`: `Less` iff `u⁻¹v > 1`.
pub fn compare(o: &dyn OrderOracle, u: &Word, v: &Word) -> Ordering {
    match o.sign(&u.inverse().multiply(v)) {
        Sign::Positive => Ordering::Less,
        Sign::Zero => Ordering::Equal,
        Sign::Negative => Ordering::Greater,
    }
}

/// Positive words of the oracle's ball, shortlex.
pub fn positive_cone_ball(o: &dyn OrderOracle, radius: usize) -> Vec<Word> {
    ball(&o.generators(), radius)
        .into_iter()
        .filter(|w| o.sign(w).is_positive())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `sign(ε) ≠ 0` or `sign(w) = 0` for `w ≠ ε`.
    Totality(Word),
    Antisymmetry(Word),
    /// `g < f` but not `hg < hf`.
    LeftTranslate {
        f: Word,
        g: Word,
        h: Word,
    },
    /// `g < f` but not `gh < fh`.
    RightTranslate {
        f: Word,
        g: Word,
        h: Word,
    },
    /// `f < g < h` but not `f < h`.
    Transitivity {
        f: Word,
        g: Word,
        h: Word,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Totality(w) => write!(out, "TOTALITY {w}"),
            Violation::Antisymmetry(w) => write!(out, "ANTISYMMETRY {w}"),
            Violation::LeftTranslate { f, g, h } => write!(out, "LEFT f={f} g={g} h={h}"),
            Violation::RightTranslate { f, g, h } => write!(out, "RIGHT f={f} g={g} h={h}"),
            Violation::Transitivity { f, g, h } => write!(out, "TRANSITIVITY f={f} g={g} h={h}"),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct BiinvReport {
    pub violations: Vec<Violation>,
    /// Size of the audited ball.
    pub words: usize,
    /// Number of `(f, g, h)` triples checked.
    pub triples: usize,
    /// Distinct words whose sign was evaluated.
    pub signed: usize,
}

impl BiinvReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks, for all `f, g, h` in the ball: totality and antisymmetry of each
/// comparison word, `g < f ⇔ hg < hf ⇔ gh < fh`, and transitivity.
///
/// Every distinct word is signed exactly once (in parallel under
/// [`Exec::Parallel`]); the triple scan then only does lookups.
pub fn check_biinvariance(o: &dyn OrderOracle, radius: usize, exec: Exec) -> BiinvReport {
    let words = ball(&o.generators(), radius);
    let n = words.len();
    let inv: Vec<Word> = words.iter().map(Word::inverse).collect();
    // quotient[g][f] = g⁻¹f
    let quotient: Vec<Vec<Word>> = inv
        .iter()
        .map(|gi| words.iter().map(|f| gi.multiply(f)).collect())
        .collect();
    let mut needed: HashSet<Word> = HashSet::new();
    for row in &quotient {
        for q in row {
            needed.insert(q.clone());
            needed.insert(q.inverse());
        }
    }
    for (hi, h) in words.iter().enumerate() {
        for row in &quotient {
            for q in row {
                needed.insert(inv[hi].multiply(q).multiply(h));
            }
        }
    }
    let needed: Vec<Word> = needed.into_iter().collect();
    let signs: Vec<Sign> = exec.map(&needed, |w| o.sign(w));
    let table: HashMap<&Word, Sign> = needed.iter().zip(signs).collect();
    let sign = |w: &Word| table[w];

    let mut violations = Vec::new();
    for row in &quotient {
        for q in row {
            let s = sign(q);
            if s.is_zero() != q.is_identity() {
                violations.push(Violation::Totality(q.clone()));
            }
            if sign(&q.inverse()) != -s {
                violations.push(Violation::Antisymmetry(q.clone()));
            }
        }
    }
    violations.sort_by_key(|v| v.to_string());
    violations.dedup();
    let idx: Vec<usize> = (0..n).collect();
    let triple_violations = exec.flat_map(&idx, |&fi| {
        let mut out = Vec::new();
        for gi in 0..n {
            let s = sign(&quotient[gi][fi]);
            for hi in 0..n {
                let (f, g, h) = (&words[fi], &words[gi], &words[hi]);
                // (hg)⁻¹(hf)
                let left = h.multiply(g).inverse().multiply(&h.multiply(f));
                if sign(&left) != s {
                    out.push(Violation::LeftTranslate {
                        f: f.clone(),
                        g: g.clone(),
                        h: h.clone(),
                    });
                }
                let right = inv[hi].multiply(&quotient[gi][fi]).multiply(h);
                if sign(&right) != s {
                    out.push(Violation::RightTranslate {
                        f: f.clone(),
                        g: g.clone(),
                        h: h.clone(),
                    });
                }
                // f < g and g < h ⇒ f < h
                if sign(&quotient[fi][gi]).is_positive()
                    && sign(&quotient[gi][hi]).is_positive()
                    && !sign(&quotient[fi][hi]).is_positive()
                {
                    out.push(Violation::Transitivity {
                        f: f.clone(),
                        g: g.clone(),
                        h: h.clone(),
                    });
                }
            }
        }
        out
    });
    violations.extend(triple_violations);
    BiinvReport {
        violations,
        words: n,
        triples: n * n * n,
        signed: needed.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};
    use crate::realization::{merge, standard_realization, FactorSpec};
    use crate::word::w;

    fn magnus() -> SharedOracle {
        Arc::new(MagnusOrder)
    }

    #[test]
    fn compare_examples() {
        let m = MagnusOrder;
        assert_eq!(compare(&m, &w("a"), &w("a")), Ordering::Equal);
        assert_eq!(compare(&m, &Word::identity(), &w("a")), Ordering::Less);
        assert_eq!(
            compare(&m, &w("a"), &w("b")),
            compare(&m, &w("b"), &w("a")).reverse()
        );
    }

    #[test]
    fn cone_sizes() {
        let m = MagnusOrder;
        assert!(positive_cone_ball(&m, 0).is_empty());
        assert_eq!(positive_cone_ball(&m, 1), vec![w("a"), w("b")]);
        assert_eq!(positive_cone_ball(&m, 3).len(), (53 - 1) / 2);
    }

    #[test]
    fn magnus_radius_two_clean_and_corruption_caught() {
        assert!(check_biinvariance(&MagnusOrder, 2, Exec::Sequential).is_clean());
        let target = w("ab^-1");
        let bad = FnOracle::new(Provenance::Magnus, move |x: &Word| {
            let s = MagnusOrder.sign(x);
            if *x == target {
                -s
            } else {
                s
            }
        });
        assert!(!check_biinvariance(&bad, 2, Exec::Sequential).is_clean());
    }

    #[test]
    fn realized_merged_pair_radius_two() {
        let g = standard_realization(&FactorSpec::z(int(0)));
        let m = merge(&g, &g, &q(1, 10), 3, 7).unwrap();
        let o = RealizedOrder::new(m.realization);
        let report = check_biinvariance(&o, 2, Exec::Parallel);
        assert!(
            report.is_clean(),
            "{:?}",
            &report.violations[..3.min(report.violations.len())]
        );
    }

    #[test]
    fn reversal() {
        let id_gamma: Membership = Arc::new(|x: &Word| x.is_identity());
        let r = reverse_on(magnus(), id_gamma);
        for x in crate::word::free_ball(3) {
            assert_eq!(r.sign(&x), MagnusOrder.sign(&x));
        }
        // reversing on the kernel of the b-exponent sum, twice
        let gamma: Membership =
            Arc::new(|x: &Word| x.exponent_sum(1) == 0 && x.exponent_sum(0) == 0);
        let once: SharedOracle = Arc::new(reverse_on(magnus(), gamma.clone()));
        let twice = reverse_on(once, gamma);
        for x in crate::word::free_ball(3) {
            assert_eq!(twice.sign(&x), MagnusOrder.sign(&x));
        }
    }

    #[test]
    fn pullback_law() {
        let swap: AutWord = "swap".parse().unwrap();
        let p = pullback(magnus(), swap);
        assert_eq!(p.sign(&w("a")), MagnusOrder.sign(&w("b")));
        let sigma: AutWord = "mult inv_a".parse().unwrap();
        let tau: AutWord = "swap^-1 mult^-1".parse().unwrap();
        let nested = pullback(Arc::new(pullback(magnus(), sigma.clone())), tau.clone());
        let direct = pullback(magnus(), sigma.compose(&tau));
        for x in crate::word::free_ball(2) {
            assert_eq!(nested.sign(&x), direct.sign(&x));
        }
        assert!(check_biinvariance(&direct, 2, Exec::Sequential).is_clean());
    }
}
