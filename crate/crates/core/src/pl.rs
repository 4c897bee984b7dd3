//! Exact piecewise-linear orientation-preserving homeomorphisms of ℝ.
//!
//! A [`PLMap`] is the identity on `[x_k, ∞)`, a translation on `(−∞, x_0]`,
//! and affine with positive slope between consecutive breakpoints. Stored
//! breakpoints are exactly the points where the slope changes, so two maps
//! are equal as functions iff they are structurally equal.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

use crate::rational::{fmt_rational, parse_rational, Rational};
use crate::sign::Sign;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlError {
    #[error("breakpoint abscissae must be strictly increasing")]
    NonIncreasingX,
    #[error("breakpoint values must be strictly increasing")]
    NonIncreasingY,
    #[error("the last breakpoint must be fixed (right tail is the identity)")]
    RightTailNotIdentity,
    #[error("tau parameters must satisfy t''' < t'' < t' and v < u < t'")]
    InvalidTau,
    #[error("malformed PL map text: {0}")]
    Parse(String),
}

/// `r_g = sup{x : g(x) ≠ x}`; `NegInfinity` only for the identity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Critical {
    NegInfinity,
    At(Rational),
}

impl Critical {
    pub fn point(&self) -> Option<&Rational> {
        match self {
            Critical::NegInfinity => None,
            Critical::At(x) => Some(x),
        }
    }
}

impl fmt::Display for Critical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Critical::NegInfinity => f.write_str("-inf"),
            Critical::At(x) => f.write_str(&fmt_rational(x)),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PLMap {
    xs: Vec<Rational>,
    ys: Vec<Rational>,
    /// `slopes[i]` is the slope on `[xs[i], xs[i+1]]`.
    slopes: Vec<Rational>,
}

impl PLMap {
    pub fn identity() -> Self {
        PLMap::default()
    }

    /// Builds a map through the given points. Redundant points (no change
    /// of slope) are dropped.
    pub fn from_points(points: Vec<(Rational, Rational)>) -> Result<Self, PlError> {
        for pair in points.windows(2) {
            if pair[0].0 >= pair[1].0 {
                return Err(PlError::NonIncreasingX);
            }
            if pair[0].1 >= pair[1].1 {
                return Err(PlError::NonIncreasingY);
            }
        }
        if let Some((x, y)) = points.last() {
            if x != y {
                return Err(PlError::RightTailNotIdentity);
            }
        }
        let (xs, ys) = points.into_iter().unzip();
        Ok(Self::canonical(xs, ys))
    }

    /// Assumes increasing data with a fixed last point.
    fn canonical(xs: Vec<Rational>, ys: Vec<Rational>) -> Self {
        let n = xs.len();
        let mut slopes = Vec::with_capacity(n.saturating_sub(1));
        for i in 0..n.saturating_sub(1) {
            slopes.push((&ys[i + 1] - &ys[i]) / (&xs[i + 1] - &xs[i]));
        }
        let one = Rational::one();
        let mut keep = Vec::with_capacity(n);
        for i in 0..n {
            let left = if i == 0 { &one } else { &slopes[i - 1] };
            let right = if i + 1 == n { &one } else { &slopes[i] };
            keep.push(left != right);
        }
        if keep.iter().all(|k| *k) {
            return PLMap { xs, ys, slopes };
        }
        let mut out_x = Vec::new();
        let mut out_y = Vec::new();
        for ((x, y), k) in xs.into_iter().zip(ys).zip(keep) {
            if k {
                out_x.push(x);
                out_y.push(y);
            }
        }
        let mut out_s = Vec::with_capacity(out_x.len().saturating_sub(1));
        for i in 0..out_x.len().saturating_sub(1) {
            out_s.push((&out_y[i + 1] - &out_y[i]) / (&out_x[i + 1] - &out_x[i]));
        }
        PLMap {
            xs: out_x,
            ys: out_y,
            slopes: out_s,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.xs.iter().zip(self.ys.iter())
    }

    pub fn breakpoint_xs(&self) -> &[Rational] {
        &self.xs
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Offset of the left tail `x ↦ x + offset`.
    pub fn tail_offset(&self) -> Rational {
        match (self.xs.first(), self.ys.first()) {
            (Some(x), Some(y)) => y - x,
            _ => Rational::zero(),
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        interpolate(&self.xs, &self.ys, &self.slopes, x, false)
    }

    pub fn eval_inverse(&self, y: &Rational) -> Rational {
        interpolate(&self.ys, &self.xs, &self.slopes, y, true)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PLMap) -> PLMap {
        if self.is_identity() {
            return inner.clone();
        }
        if inner.is_identity() {
            return self.clone();
        }
        let pulled: Vec<Rational> = self.xs.iter().map(|x| inner.eval_inverse(x)).collect();
        let xs = merge_sorted(&inner.xs, &pulled);
        let ys: Vec<Rational> = xs.iter().map(|x| self.eval(&inner.eval(x))).collect();
        Self::canonical(xs, ys)
    }

    pub fn inverse(&self) -> PLMap {
        PLMap::canonical(self.ys.clone(), self.xs.clone())
    }

    /// `self^n` for any integer `n`.
    pub fn pow(&self, n: i64) -> PLMap {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = PLMap::identity();
        for _ in 0..n.unsigned_abs() {
            out = base.compose(&out);
        }
        out
    }

    /// `h ∘ self ∘ h⁻¹`.
    pub fn conjugate_by(&self, h: &PLMap) -> PLMap {
        h.compose(&self.compose(&h.inverse()))
    }

    pub fn critical_point(&self) -> Critical {
        match self.xs.last() {
            None => Critical::NegInfinity,
            Some(x) => Critical::At(x.clone()),
        }
    }

    /// Sign of `φ(t) − t` for `t` slightly below `x`.
    pub fn germ_sign_left(&self, x: &Rational) -> Sign {
        let Some(last) = self.xs.last() else {
            return Sign::Zero;
        };
        if x > last {
            return Sign::Zero;
        }
        if x <= &self.xs[0] {
            return Sign::of(&self.tail_offset());
        }
        // piece i with xs[i] < x <= xs[i+1]
        let i = self.xs.partition_point(|p| p < x) - 1;
        let here = &self.ys[i] + (x - &self.xs[i]) * &self.slopes[i] - x;
        if !here.is_zero() {
            return Sign::of(&here);
        }
        Sign::of(&(Rational::one() - &self.slopes[i]))
    }

    /// Sign of `φ(t) − t` for `t` slightly above `x`.
    pub fn germ_sign_right(&self, x: &Rational) -> Sign {
        let Some(last) = self.xs.last() else {
            return Sign::Zero;
        };
        if x >= last {
            return Sign::Zero;
        }
        if x < &self.xs[0] {
            return Sign::of(&self.tail_offset());
        }
        // piece i with xs[i] <= x < xs[i+1]
        let i = self.xs.partition_point(|p| p <= x) - 1;
        let here = &self.ys[i] + (x - &self.xs[i]) * &self.slopes[i] - x;
        if !here.is_zero() {
            return Sign::of(&here);
        }
        Sign::of(&(&self.slopes[i] - Rational::one()))
    }

    /// Realized sign: the left germ at the critical point.
    pub fn sign(&self) -> Sign {
        match self.xs.last() {
            None => Sign::Zero,
            Some(r) => self.germ_sign_left(r),
        }
    }

    /// `sup{x : |φ(x) − x|}`; attained at a breakpoint.
    pub fn norm(&self) -> Rational {
        self.xs
            .iter()
            .zip(&self.ys)
            .map(|(x, y)| (y - x).abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// `sup{x : sign(φ(x) − x) = s}` for `s` positive or negative;
    /// `NegInfinity` when the set is empty.
    pub fn sup_displacement(&self, s: Sign) -> Critical {
        assert!(s != Sign::Zero, "the fixed set is unbounded above");
        let n = self.xs.len();
        if n == 0 {
            return Critical::NegInfinity;
        }
        for i in (0..n - 1).rev() {
            let dp = &self.ys[i] - &self.xs[i];
            let dq = &self.ys[i + 1] - &self.xs[i + 1];
            if Sign::of(&dq) == s {
                return Critical::At(self.xs[i + 1].clone());
            }
            if Sign::of(&dp) == s {
                let root = &self.xs[i] - &dp / (&self.slopes[i] - Rational::one());
                return Critical::At(root);
            }
        }
        if Sign::of(&self.tail_offset()) == s {
            return Critical::At(self.xs[0].clone());
        }
        Critical::NegInfinity
    }

    /// Maximal open intervals on which `φ(x) − x` has sign `s`, in increasing
    /// order. A `None` left endpoint stands for −∞.
    pub fn moving_intervals(&self, s: Sign) -> Vec<(Option<Rational>, Rational)> {
        assert!(s != Sign::Zero, "the fixed set is unbounded above");
        let n = self.xs.len();
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        // breakpoints and interior roots of the displacement, increasing
        let mut events: Vec<(Rational, Rational)> = Vec::with_capacity(2 * n);
        for i in 0..n {
            let d = &self.ys[i] - &self.xs[i];
            if let Some((_, prev)) = events.last() {
                if Sign::of(prev) * Sign::of(&d) == Sign::Negative {
                    let root = &self.xs[i - 1] - prev / (&self.slopes[i - 1] - Rational::one());
                    events.push((root, Rational::zero()));
                }
            }
            events.push((self.xs[i].clone(), d));
        }
        let mut start: Option<Option<Rational>> = None;
        if Sign::of(&self.tail_offset()) == s {
            start = Some(None);
        }
        for k in 0..events.len() {
            let (p, d) = &events[k];
            if start.is_some() && Sign::of(d) != s {
                out.push((start.take().unwrap(), p.clone()));
            }
            let after = match events.get(k + 1) {
                Some((_, d2)) if d.is_zero() => Sign::of(d2),
                Some(_) => Sign::of(d),
                None => Sign::Zero,
            };
            if start.is_none() && after == s {
                start = Some(Some(p.clone()));
            }
        }
        out
    }

    /// True when the map is the identity on some open interval below its
    /// critical point (including a fixed left tail).
    pub fn fixes_interval_below_critical(&self) -> bool {
        if self.xs.is_empty() {
            return false;
        }
        if self.tail_offset().is_zero() {
            return true;
        }
        (0..self.xs.len() - 1).any(|i| self.xs[i] == self.ys[i] && self.slopes[i].is_one())
    }

    /// True when both maps coincide on `[x, ∞)`.
    pub fn agrees_on_ray(&self, other: &PLMap, x: &Rational) -> bool {
        let mut pts: Vec<&Rational> = self
            .xs
            .iter()
            .chain(other.xs.iter())
            .filter(|p| *p > x)
            .collect();
        pts.push(x);
        pts.iter().all(|p| self.eval(p) == other.eval(p))
    }

    /// True when both maps coincide on a left neighbourhood of `x`.
    pub fn same_left_germ(&self, other: &PLMap, x: &Rational) -> bool {
        if self.eval(x) != other.eval(x) {
            return false;
        }
        // the largest breakpoint of either map strictly below x bounds a
        // common affine piece; comparing at its midpoint with x settles it
        let below = self
            .xs
            .iter()
            .chain(other.xs.iter())
            .filter(|p| *p < x)
            .max()
            .cloned()
            .unwrap_or_else(|| x - Rational::one());
        let probe = (&below + x) / Rational::from_integer(2.into());
        self.eval(&probe) == other.eval(&probe)
    }
}

fn interpolate(
    xs: &[Rational],
    ys: &[Rational],
    slopes: &[Rational],
    x: &Rational,
    inverse: bool,
) -> Rational {
    let Some(last) = xs.last() else {
        return x.clone();
    };
    if x >= last {
        return x.clone();
    }
    if x <= &xs[0] {
        return x + (&ys[0] - &xs[0]);
    }
    let i = xs.partition_point(|p| p <= x) - 1;
    if inverse {
        &ys[i] + (x - &xs[i]) / &slopes[i]
    } else {
        &ys[i] + (x - &xs[i]) * &slopes[i]
    }
}

fn merge_sorted(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x < y => {
                i += 1;
                x
            }
            (Some(x), Some(y)) if x > y => {
                j += 1;
                y
            }
            (Some(x), Some(_)) => {
                i += 1;
                j += 1;
                x
            }
            (Some(x), None) => {
                i += 1;
                x
            }
            (None, Some(y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        out.push(next.clone());
    }
    out
}

/// The three-piece map that is the identity above `t1`, sends `t2 ↦ u`
/// and `t3 ↦ v`, and is a translation below `t3`.
///
/// Arguments in order: `t′`, `t″`, `t‴`, `u`, `v`.
pub fn make_tau(
    t1: &Rational,
    t2: &Rational,
    t3: &Rational,
    u: &Rational,
    v: &Rational,
) -> Result<PLMap, PlError> {
    if !(t3 < t2 && t2 < t1 && v < u && u < t1) {
        return Err(PlError::InvalidTau);
    }
    PLMap::from_points(vec![
        (t3.clone(), v.clone()),
        (t2.clone(), u.clone()),
        (t1.clone(), t1.clone()),
    ])
}

/// Denominator used for random rationals in perturbations.
pub const PERTURB_DENOMINATOR: i64 = 1 << 16;

/// A random PL map with all breakpoints in `[lo, hi]`, dyadic data with
/// denominator [`PERTURB_DENOMINATOR`], and norm strictly below `eps`.
pub fn random_bump<R: Rng>(lo: &Rational, hi: &Rational, eps: &Rational, rng: &mut R) -> PLMap {
    assert!(eps.is_positive() && lo < hi);
    let den = Rational::from_integer(PERTURB_DENOMINATOR.into());
    let span = hi - lo;
    loop {
        let n = rng.gen_range(2..=4usize);
        let mut xs: Vec<Rational> = (0..n)
            .map(|_| {
                lo + &span * Rational::from_integer(rng.gen_range(0..=PERTURB_DENOMINATOR).into())
                    / &den
            })
            .collect();
        xs.sort();
        xs.dedup();
        if xs.len() < 2 {
            continue;
        }
        let last = xs.len() - 1;
        let pts: Vec<(Rational, Rational)> = xs
            .into_iter()
            .enumerate()
            .map(|(i, x)| {
                let d = if i == last {
                    Rational::zero()
                } else {
                    let k = rng.gen_range(-(PERTURB_DENOMINATOR - 1)..PERTURB_DENOMINATOR);
                    eps * Rational::from_integer(k.into()) / &den
                };
                let y = &x + d;
                (x, y)
            })
            .collect();
        if let Ok(m) = PLMap::from_points(pts) {
            if !m.is_identity() {
                return m;
            }
        }
    }
}

/// `ψ ∘ φ` for a random small bump `ψ` with `‖ψ‖ < eps`, deterministic in
/// `seed`.
pub fn perturb(phi: &PLMap, eps: &Rational, seed: u64) -> PLMap {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let one = Rational::one();
    let (lo, hi) = match (phi.xs.first(), phi.xs.last()) {
        (Some(a), Some(b)) => (a - &one, b + &one),
        _ => (-one.clone(), one),
    };
    random_bump(&lo, &hi, eps, &mut rng).compose(phi)
}

impl fmt::Display for PLMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", fmt_rational(&self.tail_offset()))?;
        for (x, y) in self.breakpoints() {
            write!(f, " ({},{})", fmt_rational(x), fmt_rational(y))?;
        }
        Ok(())
    }
}

impl FromStr for PLMap {
    type Err = PlError;

    /// `tail_offset; (x0,y0) (x1,y1) ...`
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: &str| PlError::Parse(format!("{m} in {s:?}"));
        let (offset, rest) = s.split_once(';').ok_or_else(|| bad("missing ';'"))?;
        let offset = parse_rational(offset).map_err(|e| PlError::Parse(e.to_string()))?;
        let mut points = Vec::new();
        let mut rest = rest.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
            let close = body.find(')').ok_or_else(|| bad("missing ')'"))?;
            let (x, y) = body[..close]
                .split_once(',')
                .ok_or_else(|| bad("expected 'x,y'"))?;
            let x = parse_rational(x).map_err(|e| PlError::Parse(e.to_string()))?;
            let y = parse_rational(y).map_err(|e| PlError::Parse(e.to_string()))?;
            points.push((x, y));
            rest = body[close + 1..].trim_start();
        }
        let expected = match points.first() {
            Some((x, y)) => y - x,
            None => Rational::zero(),
        };
        if expected != offset {
            return Err(bad("tail offset disagrees with the first breakpoint"));
        }
        PLMap::from_points(points)
    }
}

/// The standard generator pattern at critical point `c`: identity on
/// `[c, ∞)`, `x ↦ c + (x − c)/2` on `[c − 1, c]`, and `x ↦ x + 1/2` below.
pub fn standard_generator(c: &Rational) -> PLMap {
    standard_generator_scaled(c, &Rational::one())
}

/// The standard pattern stretched by `s > 0`: halving on `[c − s, c]` and a
/// translation by `s/2` below.
pub fn standard_generator_scaled(c: &Rational, s: &Rational) -> PLMap {
    assert!(s.is_positive(), "scale must be positive");
    let half = s / Rational::from_integer(2.into());
    PLMap::from_points(vec![(c - s, c - &half), (c.clone(), c.clone())])
        .expect("standard generator data is increasing")
}

/// `maps[n−1] ∘ … ∘ maps[0]` evaluated at `x` (`maps[0]` acts first).
pub fn chain_eval(maps: &[&PLMap], x: &Rational) -> Rational {
    maps.iter().fold(x.clone(), |acc, m| m.eval(&acc))
}

/// Critical point and left-germ sign of `maps[n−1] ∘ … ∘ maps[0]` without
/// building the composite.
///
/// Candidate breakpoints of the composite are the breakpoints of each map
/// pulled back through the maps acting before it. They are visited from the
/// top down, lazily; on each gap the composite is affine and fixes the upper
/// end, so one probe at the midpoint decides whether it moves there.
pub fn chain_germ(maps: &[&PLMap]) -> (Critical, Sign) {
    let pull = |k: usize, y: &Rational| -> Rational {
        maps[..k]
            .iter()
            .rev()
            .fold(y.clone(), |acc, m| m.eval_inverse(&acc))
    };
    // per map: number of unvisited breakpoints and the pulled-back top one
    let mut left: Vec<usize> = maps.iter().map(|m| m.xs.len()).collect();
    let mut heads: Vec<Option<Rational>> = (0..maps.len())
        .map(|k| maps[k].xs.last().map(|y| pull(k, y)))
        .collect();
    let pop_max = |heads: &mut Vec<Option<Rational>>, left: &mut Vec<usize>| {
        let top = heads.iter().flatten().max().cloned()?;
        for k in 0..heads.len() {
            if heads[k].as_ref() == Some(&top) {
                left[k] -= 1;
                heads[k] = (left[k] > 0).then(|| pull(k, &maps[k].xs[left[k] - 1]));
            }
        }
        Some(top)
    };
    let Some(mut p) = pop_max(&mut heads, &mut left) else {
        return (Critical::NegInfinity, Sign::Zero);
    };
    let two = Rational::from_integer(2.into());
    loop {
        let next = heads.iter().flatten().max().cloned();
        let lower = next.clone().unwrap_or_else(|| &p - Rational::one());
        let mid = (&lower + &p) / &two;
        let d = chain_eval(maps, &mid) - &mid;
        if !d.is_zero() {
            return (Critical::At(p), Sign::of(&d));
        }
        if next.is_none() {
            return (Critical::NegInfinity, Sign::Zero);
        }
        p = pop_max(&mut heads, &mut left).expect("a head remains");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};
    use rand::{Rng, SeedableRng};

    fn g0() -> PLMap {
        standard_generator(&int(0))
    }

    fn tau_example() -> PLMap {
        make_tau(&int(0), &int(-2), &int(-4), &int(-1), &int(-3)).unwrap()
    }

    fn random_map(rng: &mut impl Rng) -> PLMap {
        let lo = int(rng.gen_range(-4..0));
        let hi = int(rng.gen_range(1..4));
        random_bump(&lo, &hi, &int(2), rng)
    }

    fn random_rational(rng: &mut impl Rng) -> Rational {
        q(rng.gen_range(-800..800), rng.gen_range(1..97))
    }

    #[test]
    fn eval_examples() {
        assert_eq!(PLMap::identity().eval(&q(7, 3)), q(7, 3));
        let t = tau_example();
        assert_eq!(t.eval(&int(-2)), int(-1));
        assert_eq!(t.eval(&int(-4)), int(-3));
        assert_eq!(t.eval(&int(1)), int(1));
        assert_eq!(g0().eval(&q(-1, 2)), q(-1, 4));
        assert_eq!(g0().eval(&int(-3)), q(-5, 2));
    }

    #[test]
    fn composition_matches_nested_evaluation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let phi = random_map(&mut rng);
            let psi = random_map(&mut rng);
            let comp = phi.compose(&psi);
            for _ in 0..10 {
                let x = random_rational(&mut rng);
                assert_eq!(comp.eval(&x), phi.eval(&psi.eval(&x)));
            }
        }
        let phi = g0();
        assert!(phi.compose(&phi.inverse()).is_identity());
        assert_eq!(PLMap::identity().compose(&phi), phi);
    }

    #[test]
    fn inversion() {
        assert!(PLMap::identity().inverse().is_identity());
        let inv = tau_example().inverse();
        assert_eq!(inv.eval(&int(-1)), int(-2));
        assert_eq!(inv.inverse(), tau_example());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let m = random_map(&mut rng);
            let x = random_rational(&mut rng);
            assert_eq!(m.eval_inverse(&m.eval(&x)), x);
            assert_eq!(m.inverse().eval(&x), m.eval_inverse(&x));
        }
    }

    #[test]
    fn critical_points() {
        assert_eq!(PLMap::identity().critical_point(), Critical::NegInfinity);
        assert_eq!(g0().critical_point(), Critical::At(int(0)));
        assert_eq!(tau_example().critical_point(), Critical::At(int(0)));
        assert!(Critical::NegInfinity < Critical::At(int(-1000)));
    }

    #[test]
    fn conjugation_moves_critical_point() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let g = random_map(&mut rng);
            let h = random_map(&mut rng);
            let conj = g.conjugate_by(&h);
            let Critical::At(r) = g.critical_point() else {
                unreachable!()
            };
            assert_eq!(conj.critical_point(), Critical::At(h.eval(&r)));
            assert_eq!(conj.sign(), g.sign());
        }
    }

    #[test]
    fn germ_signs() {
        assert_eq!(PLMap::identity().germ_sign_left(&int(0)), Sign::Zero);
        assert_eq!(g0().germ_sign_left(&int(0)), Sign::Positive);
        assert_eq!(g0().inverse().germ_sign_left(&int(0)), Sign::Negative);
        assert_eq!(g0().germ_sign_left(&int(5)), Sign::Zero);
        assert_eq!(g0().germ_sign_left(&int(-7)), Sign::Positive);
        assert_eq!(g0().germ_sign_right(&int(0)), Sign::Zero);
        assert_eq!(g0().germ_sign_right(&int(-1)), Sign::Positive);
    }

    #[test]
    fn norms() {
        assert_eq!(PLMap::identity().norm(), int(0));
        assert_eq!(g0().norm(), q(1, 2));
        assert_eq!(tau_example().norm(), int(1));
    }

    #[test]
    fn norm_is_subadditive() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..30 {
            let a = random_map(&mut rng);
            let b = random_map(&mut rng);
            assert!(a.compose(&b).norm() <= a.norm() + b.norm());
        }
    }

    #[test]
    fn tau_construction() {
        let t = tau_example();
        // middle piece slope (t' − u)/(t' − t'') = 1/2
        assert_eq!(t.eval(&int(-1)), q(-1, 2));
        assert_eq!(t.breakpoint_xs(), &[int(-2), int(0)]);
        assert_eq!(
            make_tau(&int(0), &int(0), &int(-4), &int(-1), &int(-3)),
            Err(PlError::InvalidTau)
        );
        assert_eq!(
            make_tau(&int(0), &int(-2), &int(-4), &int(-3), &int(-1)),
            Err(PlError::InvalidTau)
        );
    }

    #[test]
    fn perturbation_bounds() {
        let g = g0();
        for seed in 0..100 {
            let p = perturb(&g, &q(1, 10), seed);
            assert!(p.compose(&g.inverse()).norm() < q(1, 10));
        }
        assert_eq!(perturb(&g, &q(1, 10), 9), perturb(&g, &q(1, 10), 9));
        assert!(perturb(&PLMap::identity(), &q(1, 10), 4).norm() < q(1, 10));
    }

    #[test]
    fn sup_displacement_and_intervals() {
        let g = g0();
        assert_eq!(g.sup_displacement(Sign::Positive), Critical::At(int(0)));
        assert_eq!(g.sup_displacement(Sign::Negative), Critical::NegInfinity);
        assert_eq!(g.moving_intervals(Sign::Positive), vec![(None, int(0))]);
        // a map moving right on (−∞, −1) and left on (−1, 0)
        let m = PLMap::from_points(vec![
            (int(-2), q(-3, 2)),
            (int(-1), int(-1)),
            (q(-1, 2), q(-3, 4)),
            (int(0), int(0)),
        ])
        .unwrap();
        assert_eq!(m.sup_displacement(Sign::Positive), Critical::At(int(-1)));
        assert_eq!(m.sup_displacement(Sign::Negative), Critical::At(int(0)));
        assert_eq!(
            m.moving_intervals(Sign::Negative),
            vec![(Some(int(-1)), int(0))]
        );
        assert_eq!(m.moving_intervals(Sign::Positive), vec![(None, int(-1))]);
    }

    #[test]
    fn chain_germ_matches_composite() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let pool: Vec<PLMap> = (0..6)
            .map(|_| random_map(&mut rng))
            .chain([g0(), g0().inverse()])
            .collect();
        for _ in 0..300 {
            let n = rng.gen_range(0..5);
            let picks: Vec<&PLMap> = (0..n)
                .map(|_| &pool[rng.gen_range(0..pool.len())])
                .collect();
            let composite = picks
                .iter()
                .fold(PLMap::identity(), |acc, m| m.compose(&acc));
            assert_eq!(
                chain_germ(&picks),
                (composite.critical_point(), composite.sign())
            );
        }
        // cancelling pairs give the identity
        let g = g0();
        let gi = g.inverse();
        assert_eq!(chain_germ(&[&g, &gi]), (Critical::NegInfinity, Sign::Zero));
    }

    #[test]
    fn fixed_intervals() {
        assert!(!g0().fixes_interval_below_critical());
        let bump = PLMap::from_points(vec![(int(-1), int(-1)), (int(0), int(0))]).unwrap();
        assert!(bump.is_identity());
        let bump = PLMap::from_points(vec![
            (int(-2), int(-2)),
            (int(-1), q(-1, 2)),
            (int(0), int(0)),
        ])
        .unwrap();
        assert!(bump.fixes_interval_below_critical());
    }

    #[test]
    fn ray_agreement() {
        let g = g0();
        let h = standard_generator(&int(-5)).compose(&g);
        assert!(g.agrees_on_ray(&h, &int(-4)));
        assert!(!g.agrees_on_ray(&h, &int(-6)));
        assert!(g.same_left_germ(&h, &int(-4)));
        assert!(g.same_left_germ(&h, &int(-5)));
        assert!(!g.same_left_germ(&h, &q(-11, 2)));
    }

    #[test]
    fn text_round_trip() {
        let t = tau_example();
        let s = t.to_string();
        assert_eq!(s, "1/1; (-2/1,-1/1) (0/1,0/1)");
        assert_eq!(s.parse::<PLMap>().unwrap(), t);
        assert_eq!(PLMap::identity().to_string(), "0/1;");
        assert!("0/1;".parse::<PLMap>().unwrap().is_identity());
        assert!("2; (-2,-1) (0,0)".parse::<PLMap>().is_err());
        assert!("1; (0,1)".parse::<PLMap>().is_err());
        assert!("(0,0)".parse::<PLMap>().is_err());
    }

    #[test]
    fn from_points_validation() {
        assert_eq!(
            PLMap::from_points(vec![(int(0), int(0)), (int(0), int(1))]),
            Err(PlError::NonIncreasingX)
        );
        assert_eq!(
            PLMap::from_points(vec![(int(0), int(1)), (int(1), int(1))]),
            Err(PlError::NonIncreasingY)
        );
        assert_eq!(
            PLMap::from_points(vec![(int(0), int(1))]),
            Err(PlError::RightTailNotIdentity)
        );
        // collinear points collapse
        let m = PLMap::from_points(vec![
            (int(-3), int(-2)),
            (int(-2), int(-1)),
            (int(0), int(0)),
        ])
        .unwrap();
        assert_eq!(m.len(), 2);
    }
}
