//! Magnus expansion of the rank-2 free group into truncated noncommutative
//! power series over `A`, `B`, and the bi-order it induces.
//!
//! `a ↦ 1 + A`, `b ↦ 1 + B`. A nontrivial word is positive when the first
//! nonzero coefficient of `M(w) − 1`, in degree-lexicographic order with
//! `A < B`, is positive.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::sign::Sign;
use crate::word::Word;

/// Highest truncation degree tried before giving up.
pub const DEFAULT_CAP_CEILING: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MagnusError {
    #[error("word {0} is not a word in the generators a, b")]
    NotFreeGroupWord(String),
    #[error("magnus sign of {word} undecided at degree cap {cap}; this is a bug")]
    CapExceeded { word: String, cap: u32 },
    #[error("coefficient overflow while expanding {0}")]
    Overflow(String),
}

/// Noncommutative monomial: `deg` symbols, the first symbol in the most
/// significant bit, `0 = A` and `1 = B`. The derived order is degree-lex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub deg: u32,
    pub bits: u64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { deg: 0, bits: 0 };

    pub fn parse(s: &str) -> Option<Monomial> {
        let mut m = Monomial::ONE;
        for c in s.chars() {
            let bit = match c {
                'A' => 0,
                'B' => 1,
                _ => return None,
            };
            m = Monomial {
                deg: m.deg + 1,
                bits: (m.bits << 1) | bit,
            };
        }
        Some(m)
    }

    /// `self · X^i` where `X` is `A` (`sym = 0`) or `B` (`sym = 1`).
    fn times_power(self, sym: u64, i: u32) -> Monomial {
        let tail = if sym == 1 { (1u64 << i) - 1 } else { 0 };
        Monomial {
            deg: self.deg + i,
            bits: if i == 0 {
                self.bits
            } else {
                (self.bits << i) | tail
            },
        }
    }

    fn mul(self, other: Monomial) -> Monomial {
        Monomial {
            deg: self.deg + other.deg,
            bits: if other.deg == 0 {
                self.bits
            } else {
                (self.bits << other.deg) | other.bits
            },
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.deg == 0 {
            return f.write_str("1");
        }
        for i in (0..self.deg).rev() {
            let c = if (self.bits >> i) & 1 == 1 { 'B' } else { 'A' };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Power series truncated above `cap`. `exact` is true when no nonzero term
/// was discarded, i.e. the series equals the full expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    cap: u32,
    terms: BTreeMap<Monomial, i128>,
    exact: bool,
}

impl TruncSeries {
    pub fn one(cap: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::ONE, 1);
        TruncSeries {
            cap,
            terms,
            exact: true,
        }
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Nonzero terms in degree-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, i128)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }

    pub fn coeff(&self, m: Monomial) -> i128 {
        self.terms.get(&m).copied().unwrap_or(0)
    }

    /// Truncated product.
    pub fn mul_trunc(&self, other: &TruncSeries) -> Result<TruncSeries, MagnusError> {
        let cap = self.cap.min(other.cap);
        let mut acc: HashMap<Monomial, i128> = HashMap::new();
        let mut exact = self.exact && other.exact;
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(*m2);
                if m.deg > cap {
                    exact = false;
                    continue;
                }
                let prod = c1
                    .checked_mul(*c2)
                    .ok_or_else(|| MagnusError::Overflow("product".into()))?;
                let slot = acc.entry(m).or_insert(0);
                *slot = slot
                    .checked_add(prod)
                    .ok_or_else(|| MagnusError::Overflow("product".into()))?;
            }
        }
        Ok(TruncSeries {
            cap,
            terms: acc.into_iter().filter(|(_, c)| *c != 0).collect(),
            exact,
        })
    }

    /// Right multiplication by the expansion of `x^k`, `x = a` (`sym = 0`)
    /// or `b` (`sym = 1`).
    fn mul_letter(&mut self, sym: u64, k: i64) -> Result<(), MagnusError> {
        let coeffs = power_coeffs(k, self.cap)?;
        // (1 + X)^k with k > 0 is a polynomial of degree k; beyond that it is
        // an infinite series, always cut by the cap.
        let full_len = if k > 0 { k as u64 + 1 } else { u64::MAX };
        let mut acc: HashMap<Monomial, i128> = HashMap::with_capacity(self.terms.len() * 2);
        for (m, c) in &self.terms {
            let room = self.cap - m.deg;
            if (room as u64 + 1) < full_len {
                self.exact = false;
            }
            for (i, p) in coeffs.iter().enumerate().take(room as usize + 1) {
                if *p == 0 {
                    continue;
                }
                let prod = c
                    .checked_mul(*p)
                    .ok_or_else(|| MagnusError::Overflow("letter".into()))?;
                let slot = acc.entry(m.times_power(sym, i as u32)).or_insert(0);
                *slot = slot
                    .checked_add(prod)
                    .ok_or_else(|| MagnusError::Overflow("letter".into()))?;
            }
        }
        self.terms = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        Ok(())
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.terms() {
            let (sign, abs) = if c < 0 { ("-", -c) } else { ("+", c) };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if m.deg == 0 {
                write!(f, "{abs}")?;
            } else if abs == 1 {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}{m}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Coefficients of `(1 + X)^k` up to degree `cap`.
fn power_coeffs(k: i64, cap: u32) -> Result<Vec<i128>, MagnusError> {
    let mut out = Vec::with_capacity(cap as usize + 1);
    out.push(1i128);
    // generalized binomial: c_{i+1} = c_i (k − i) / (i + 1)
    for i in 0..cap as i128 {
        let prev = out[i as usize];
        let num = prev
            .checked_mul(k as i128 - i)
            .ok_or_else(|| MagnusError::Overflow(format!("(1+X)^{k}")))?;
        out.push(num / (i + 1));
    }
    Ok(out)
}

/// Expansion of `w` truncated above degree `cap`.
pub fn expand(w: &Word, cap: u32) -> Result<TruncSeries, MagnusError> {
    let mut s = TruncSeries::one(cap);
    for l in w.letters() {
        if l.factor > 1 || !l.exp.is_cyclic() {
            return Err(MagnusError::NotFreeGroupWord(w.to_string()));
        }
        s.mul_letter(l.factor as u64, l.exp.major)?;
    }
    Ok(s)
}

/// Outcome of reading a sign off a truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesSign {
    Decided(Sign),
    /// Every nonconstant term up to the cap vanished; expand further.
    Undecided,
}

pub fn series_sign(s: &TruncSeries) -> SeriesSign {
    for (m, c) in s.terms() {
        if m.deg == 0 {
            if c != 1 {
                return SeriesSign::Decided(Sign::from_i64((c - 1).signum() as i64));
            }
            continue;
        }
        return SeriesSign::Decided(if c > 0 {
            Sign::Positive
        } else {
            Sign::Negative
        });
    }
    if s.is_exact() {
        SeriesSign::Decided(Sign::Zero)
    } else {
        SeriesSign::Undecided
    }
}

/// Magnus sign with an explicit cap ceiling.
pub fn magnus_sign_with(w: &Word, ceiling: u32) -> Result<Sign, MagnusError> {
    if w.is_identity() {
        return Ok(Sign::Zero);
    }
    let mut cap = 2u32;
    loop {
        let cap_now = cap.min(ceiling);
        match series_sign(&expand(w, cap_now)?) {
            SeriesSign::Decided(s) => return Ok(s),
            SeriesSign::Undecided if cap_now >= ceiling => {
                return Err(MagnusError::CapExceeded {
                    word: w.to_string(),
                    cap: ceiling,
                })
            }
            SeriesSign::Undecided => cap *= 2,
        }
    }
}

/// Sign of `w` under the Magnus order.
pub fn magnus_sign(w: &Word) -> Result<Sign, MagnusError> {
    magnus_sign_with(w, DEFAULT_CAP_CEILING)
}
