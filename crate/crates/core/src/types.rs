//! Type-α orders on the free group `F₂ = ⟨a, b⟩` and the windows used to
//! separate automorphism orbits of bi-orders.
//!
//! `φ` is the exponent sum of `a`; on `ker φ`, `ψ` weighs each `b`-letter by
//! `α^h`, `h` being the `a`-height (exponent sum of `a` to its left). The
//! type-α order compares by `φ`, then `ψ`, then a base order on `ker ψ`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::aut::AutWord;
use crate::oracle::{pullback, MagnusOrder, OrderOracle, Provenance, SharedOracle};
use crate::par::Exec;
use crate::rational::{fmt_rational, Rational};
use crate::saturate::{cone_saturate, ConeCertificate, ConeStatus, SaturateError};
use crate::sign::Sign;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("{0} is not in the kernel of phi")]
    NotInKernel(String),
    #[error("alpha must exceed 1, got {0}")]
    AlphaTooSmall(String),
    #[error("window {0} must satisfy 1 < k/l < m/n")]
    BadWindow(String),
    #[error("parameters must satisfy 1 < k1/l1 < alpha < m1/n1 < k2/l2 < beta < m2/n2")]
    Unordered,
    #[error("malformed window {0:?} (expected k,l,m,n)")]
    Parse(String),
    #[error(transparent)]
    Saturate(#[from] SaturateError),
}

fn rat_pow(x: &Rational, e: i64) -> Rational {
    let base = if e < 0 { x.recip() } else { x.clone() };
    let mut out = Rational::one();
    for _ in 0..e.unsigned_abs() {
        out *= &base;
    }
    out
}

/// Exponent sum of `a`.
pub fn phi(w: &Word) -> i64 {
    w.exponent_sum(0)
}

/// `Σ ε·α^h` over the `b`-letters of `w`; defined on `ker φ`.
pub fn psi(w: &Word, alpha: &Rational) -> Result<Rational, TypeError> {
    if phi(w) != 0 {
        return Err(TypeError::NotInKernel(w.to_string()));
    }
    let mut height = 0i64;
    let mut total = Rational::zero();
    for l in w.letters() {
        match l.factor {
            0 => height += l.exp.major,
            1 => total += rat_pow(alpha, height) * Rational::from_integer(l.exp.major.into()),
            _ => return Err(TypeError::NotInKernel(w.to_string())),
        }
    }
    Ok(total)
}

/// The type-α order with a base order deciding on `ker ψ`.
#[derive(Clone)]
pub struct TypeAlphaOrder {
    alpha: Rational,
    base: SharedOracle,
}

impl fmt::Debug for TypeAlphaOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "TypeAlphaOrder({}, base {})",
            fmt_rational(&self.alpha),
            self.base.provenance()
        )
    }
}

impl TypeAlphaOrder {
    pub fn new(alpha: Rational, base: SharedOracle) -> Result<Self, TypeError> {
        if alpha <= Rational::one() {
            return Err(TypeError::AlphaTooSmall(fmt_rational(&alpha)));
        }
        Ok(TypeAlphaOrder { alpha, base })
    }

    /// Base order: Magnus.
    pub fn magnus(alpha: Rational) -> Result<Self, TypeError> {
        Self::new(alpha, Arc::new(MagnusOrder))
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    /// `(φ(w), ψ(w))`, the latter only on `ker φ`.
    pub fn conrad_values(&self, w: &Word) -> (i64, Option<Rational>) {
        let p = phi(w);
        if p != 0 {
            return (p, None);
        }
        (0, Some(psi(w, &self.alpha).expect("phi vanishes")))
    }

    /// Which comparisons of the window fall through to the base order
    /// (`ψ = 0` on the comparison word).
    pub fn window_boundary(&self, win: &Window, third: ThirdInequality) -> [bool; 3] {
        let words = win.comparison_words(third);
        [0, 1, 2].map(|i| {
            words[i]
                .iter()
                .any(|w| self.conrad_values(w) == (0, Some(Rational::zero())))
        })
    }
}

/// Sign of `w` in the type-α order over `base`.
pub fn type_alpha_sign(w: &Word, alpha: &Rational, base: &dyn OrderOracle) -> Sign {
    let p = phi(w);
    if p != 0 {
        return Sign::from_i64(p);
    }
    let s = psi(w, alpha).expect("phi vanishes");
    if !s.is_zero() {
        return Sign::of(&s);
    }
    base.sign(w)
}

impl OrderOracle for TypeAlphaOrder {
    fn sign(&self, w: &Word) -> Sign {
        type_alpha_sign(w, &self.alpha, self.base.as_ref())
    }

    fn provenance(&self) -> Provenance {
        Provenance::TypeAlpha
    }
}

/// Positive integers with `1 < k/l < m/n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub k: u32,
    pub l: u32,
    pub m: u32,
    pub n: u32,
}

/// Form of the third window inequality.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ThirdInequality {
    /// `b^k < (b^a)^l`, encoding a type above `k/l`.
    #[default]
    Corrected,
    /// The transposed form `b^l < (b^a)^k`; vacuous for `k/l > 1`.
    Printed,
}

fn ratio(p: u32, q: u32) -> Rational {
    Rational::new(p.into(), q.into())
}

impl Window {
    pub fn new(k: u32, l: u32, m: u32, n: u32) -> Result<Self, TypeError> {
        let w = Window { k, l, m, n };
        if [k, l, m, n].contains(&0) || !(Rational::one() < w.lower() && w.lower() < w.upper()) {
            return Err(TypeError::BadWindow(w.to_string()));
        }
        Ok(w)
    }

    pub fn lower(&self) -> Rational {
        ratio(self.k, self.l)
    }

    pub fn upper(&self) -> Rational {
        ratio(self.m, self.n)
    }

    /// Words that must be positive, one group per inequality:
    /// `1 < b < a`; `(b^a)^n < b^m`; the third inequality.
    /// Each `x < y` is encoded as `y·x⁻¹`.
    pub fn comparison_words(&self, third: ThirdInequality) -> [Vec<Word>; 3] {
        let a = Word::gen(0, 1);
        let b = Word::gen(1, 1);
        let ba = b.conjugate_by(&a);
        let less = |x: &Word, y: &Word| y.multiply(&x.inverse());
        let (k, l, m, n) = (self.k as i64, self.l as i64, self.m as i64, self.n as i64);
        let third_word = match third {
            ThirdInequality::Corrected => less(&b.pow(k), &ba.pow(l)),
            ThirdInequality::Printed => less(&b.pow(l), &ba.pow(k)),
        };
        [
            vec![b.clone(), less(&b, &a)],
            vec![less(&ba.pow(n), &b.pow(m))],
            vec![third_word],
        ]
    }

    /// All comparison words as positivity seeds.
    pub fn seeds(&self, third: ThirdInequality) -> Vec<Word> {
        self.comparison_words(third).into_iter().flatten().collect()
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.k, self.l, self.m, self.n)
    }
}

impl FromStr for Window {
    type Err = TypeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<u32> = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(|p| p.trim().parse())
            .collect::<Result<_, _>>()
            .map_err(|_| TypeError::Parse(s.to_string()))?;
        let [k, l, m, n] = parts[..] else {
            return Err(TypeError::Parse(s.to_string()));
        };
        Window::new(k, l, m, n)
    }
}

/// Outcome of the three window inequalities under an oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WindowCheck {
    pub holds: [bool; 3],
}

impl WindowCheck {
    pub fn inside(&self) -> bool {
        self.holds.iter().all(|h| *h)
    }
}

pub fn check_window(o: &dyn OrderOracle, win: &Window, third: ThirdInequality) -> WindowCheck {
    let groups = win.comparison_words(third);
    WindowCheck {
        holds: groups.map(|ws| ws.iter().all(|w| o.sign(w).is_positive())),
    }
}

/// Whether the oracle satisfies the (corrected) window inequalities.
pub fn in_window(o: &dyn OrderOracle, win: &Window) -> bool {
    check_window(o, win, ThirdInequality::Corrected).inside()
}

#[derive(Clone, Debug)]
pub struct SeparationReport {
    /// `<_α ∈ V_{W₁}` and `<_β ∈ V_{W₂}`.
    pub own_windows: bool,
    /// Automorphisms checked in (ii).
    pub automorphisms: usize,
    /// `(σ, which)` with `σ*<_α ∈ V_{W₂}` (`which = 'a'`) or
    /// `σ*<_β ∈ V_{W₁}` (`which = 'b'`).
    pub crossings: Vec<(AutWord, char)>,
    pub saturation: ConeCertificate,
}

impl SeparationReport {
    pub fn windows_ok(&self) -> bool {
        self.own_windows
    }

    pub fn orbits_ok(&self) -> bool {
        self.crossings.is_empty()
    }

    pub fn disjoint_ok(&self) -> bool {
        self.saturation.status == ConeStatus::Contradiction
    }

    pub fn passed(&self) -> bool {
        self.windows_ok() && self.orbits_ok() && self.disjoint_ok()
    }
}

impl fmt::Display for SeparationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = |b: bool| if b { "PASS" } else { "FAIL" };
        writeln!(f, "{} (i) own windows", verdict(self.windows_ok()))?;
        writeln!(
            f,
            "{} (ii) {} automorphisms, {} crossings",
            verdict(self.orbits_ok()),
            self.automorphisms,
            self.crossings.len()
        )?;
        for (s, which) in &self.crossings {
            writeln!(f, "CROSSING {which} {s}")?;
        }
        writeln!(f, "{} (iii) window cones", verdict(self.disjoint_ok()))?;
        write!(f, "{}", self.saturation)
    }
}

/// Length bound for the window-cone saturation.
pub const SEPARATION_LENGTH_BOUND: u64 = 24;

/// Finite evidence that `<_α` and `<_β` lie in different automorphism
/// orbits, using windows `W₁ ∋ <_α` and `W₂ ∋ <_β`.
pub fn separation_evidence(
    alpha: &Rational,
    beta: &Rational,
    w1: &Window,
    w2: &Window,
    aut_len: usize,
    exec: Exec,
) -> Result<SeparationReport, TypeError> {
    let chain = [
        w1.lower(),
        alpha.clone(),
        w1.upper(),
        w2.lower(),
        beta.clone(),
        w2.upper(),
    ];
    if !chain.windows(2).all(|p| p[0] < p[1]) {
        return Err(TypeError::Unordered);
    }
    let oa: SharedOracle = Arc::new(TypeAlphaOrder::magnus(alpha.clone())?);
    let ob: SharedOracle = Arc::new(TypeAlphaOrder::magnus(beta.clone())?);
    let own_windows = in_window(oa.as_ref(), w1) && in_window(ob.as_ref(), w2);
    let auts = AutWord::all_up_to(aut_len);
    let crossings: Vec<(AutWord, char)> = exec.flat_map(&auts, |s| {
        let mut out = Vec::new();
        if in_window(&pullback(oa.clone(), s.clone()), w2) {
            out.push((s.clone(), 'a'));
        }
        if in_window(&pullback(ob.clone(), s.clone()), w1) {
            out.push((s.clone(), 'b'));
        }
        out
    });
    let mut seeds = w1.seeds(ThirdInequality::Corrected);
    for s in w2.seeds(ThirdInequality::Corrected) {
        if !seeds.contains(&s) {
            seeds.push(s);
        }
    }
    let bound = SEPARATION_LENGTH_BOUND.max(seeds.iter().map(Word::len).max().unwrap_or(0));
    let saturation = cone_saturate(&seeds, bound)?;
    Ok(SeparationReport {
        own_windows,
        automorphisms: auts.len(),
        crossings,
        saturation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::word::{free_ball, w};

    fn alpha(p: i64, d: i64) -> TypeAlphaOrder {
        TypeAlphaOrder::magnus(q(p, d)).unwrap()
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&w("a")), 1);
        assert_eq!(phi(&w("b^-3")), 0);
        assert_eq!(phi(&w("aba^-1b^-1")), 0);
    }

    #[test]
    fn psi_examples() {
        let a = q(3, 2);
        assert_eq!(psi(&w("aba^-1"), &a).unwrap(), q(3, 2));
        assert_eq!(psi(&w("aba^-1b^-1"), &a).unwrap(), q(1, 2));
        assert_eq!(psi(&w("ab^2a^-1b^-3"), &a).unwrap(), q(0, 1));
        assert!(matches!(psi(&w("ab"), &a), Err(TypeError::NotInKernel(_))));
    }

    #[test]
    fn psi_scaling_and_homomorphism() {
        let al = q(5, 2);
        let kernel: Vec<Word> = free_ball(3).into_iter().filter(|x| phi(x) == 0).collect();
        for x in &kernel {
            let scaled = psi(&x.conjugate_by(&w("a")), &al).unwrap();
            assert_eq!(scaled, &al * psi(x, &al).unwrap());
            for y in &kernel {
                assert_eq!(
                    psi(&x.multiply(y), &al).unwrap(),
                    psi(x, &al).unwrap() + psi(y, &al).unwrap()
                );
            }
        }
    }

    #[test]
    fn sign_examples() {
        let o = alpha(3, 2);
        assert_eq!(o.sign(&w("a")), Sign::Positive);
        assert_eq!(o.sign(&w("b^-1")), Sign::Negative);
        let kerpsi = w("ab^2a^-1b^-3");
        assert_eq!(o.sign(&kerpsi), MagnusOrder.sign(&kerpsi));
        // b-exponent sum −1: the degree-one Magnus term is −B
        assert_eq!(o.sign(&kerpsi), Sign::Negative);
    }

    #[test]
    fn conrad_values_examples() {
        let o = alpha(3, 2);
        assert_eq!(o.conrad_values(&w("a")), (1, None));
        assert_eq!(o.conrad_values(&w("aba^-1")), (0, Some(q(3, 2))));
        assert_eq!(o.conrad_values(&Word::identity()), (0, Some(q(0, 1))));
    }

    #[test]
    fn window_matrix() {
        let w1: Window = "4,3,7,4".parse().unwrap();
        let w2: Window = "9,4,8,3".parse().unwrap();
        assert!(in_window(&alpha(3, 2), &w1));
        assert!(!in_window(&alpha(3, 2), &w2));
        assert!(in_window(&alpha(5, 2), &w2));
        assert!(!in_window(&alpha(5, 2), &w1));
        // the printed third inequality cannot tell the windows apart
        let printed = check_window(&alpha(3, 2), &w2, ThirdInequality::Printed);
        assert!(printed.holds[2]);
        assert_eq!(
            alpha(3, 2).window_boundary(&w1, ThirdInequality::Corrected),
            [false; 3]
        );
        assert!(Window::new(3, 4, 7, 4).is_err());
        assert!(Window::new(7, 4, 4, 3).is_err());
        assert!("1,2,3".parse::<Window>().is_err());
    }

    #[test]
    fn separation_small() {
        let w1: Window = "4,3,7,4".parse().unwrap();
        let w2: Window = "9,4,8,3".parse().unwrap();
        let r = separation_evidence(&q(3, 2), &q(5, 2), &w1, &w2, 1, Exec::Sequential).unwrap();
        assert!(r.passed(), "{r}");
        let zero = separation_evidence(&q(3, 2), &q(5, 2), &w1, &w2, 0, Exec::Sequential).unwrap();
        assert_eq!(zero.automorphisms, 1);
        assert!(separation_evidence(&q(5, 2), &q(3, 2), &w2, &w1, 1, Exec::Sequential).is_err());
    }
}
