//! Normal-form words in free products of cyclic (and rank-2 lexicographic
//! lattice) factors.
//!
//! A [`Word`] stores its letters in written order `f_n … f_2 f_1`: the last
//! letter acts first when the word is realized as a map of the line.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Neg};
use std::str::FromStr;

use thiserror::Error;

/// Index of a free factor. Factor `0` prints as `a`, `1` as `b`, and so on.
pub type FactorId = u8;

/// Highest factor id with a printable name (`a` through `d`).
pub const MAX_FACTOR: FactorId = 3;

/// Exponent of a letter: an element of ℤ² under the lexicographic order.
/// Cyclic factors only use `major`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponent {
    pub major: i64,
    pub minor: i64,
}

impl Exponent {
    pub const ZERO: Exponent = Exponent { major: 0, minor: 0 };

    pub const fn cyclic(k: i64) -> Self {
        Exponent { major: k, minor: 0 }
    }

    pub const fn lattice(major: i64, minor: i64) -> Self {
        Exponent { major, minor }
    }

    pub fn is_zero(self) -> bool {
        self.major == 0 && self.minor == 0
    }

    pub fn is_cyclic(self) -> bool {
        self.minor == 0
    }

    /// Number of generator occurrences this exponent stands for.
    pub fn weight(self) -> u64 {
        self.major.unsigned_abs() + self.minor.unsigned_abs()
    }

    /// Lexicographic sign: `1`, `0` or `-1`.
    pub fn lex_signum(self) -> i64 {
        if self.major != 0 {
            self.major.signum()
        } else {
            self.minor.signum()
        }
    }
}

impl Add for Exponent {
    type Output = Exponent;
    fn add(self, rhs: Exponent) -> Exponent {
        Exponent {
            major: self.major + rhs.major,
            minor: self.minor + rhs.minor,
        }
    }
}

impl Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent {
            major: -self.major,
            minor: -self.minor,
        }
    }
}

/// A nonidentity element of one free factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub factor: FactorId,
    pub exp: Exponent,
}

impl Letter {
    pub const fn new(factor: FactorId, exp: Exponent) -> Self {
        Letter { factor, exp }
    }

    pub const fn cyclic(factor: FactorId, k: i64) -> Self {
        Letter {
            factor,
            exp: Exponent::cyclic(k),
        }
    }

    pub fn inverse(self) -> Letter {
        Letter {
            factor: self.factor,
            exp: -self.exp,
        }
    }
}

/// Element of a free product in normal form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

/// Reduces a letter sequence: merges adjacent letters of the same factor and
/// drops identity letters, cascading as far as needed.
pub fn normal_form<I>(letters: I) -> Word
where
    I: IntoIterator<Item = Letter>,
{
    let mut stack: Vec<Letter> = Vec::new();
    for letter in letters {
        if letter.exp.is_zero() {
            continue;
        }
        match stack.last_mut() {
            Some(top) if top.factor == letter.factor => {
                let merged = top.exp + letter.exp;
                if merged.is_zero() {
                    stack.pop();
                } else {
                    top.exp = merged;
                }
            }
            _ => stack.push(letter),
        }
    }
    Word { letters: stack }
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    /// `x^k` for the cyclic factor `x`.
    pub fn gen(factor: FactorId, k: i64) -> Self {
        normal_form([Letter::cyclic(factor, k)])
    }

    pub fn from_letter(letter: Letter) -> Self {
        normal_form([letter])
    }

    /// Builds a word from `(factor, exponent)` pairs in written order.
    pub fn from_pairs(pairs: &[(FactorId, i64)]) -> Self {
        normal_form(pairs.iter().map(|&(f, k)| Letter::cyclic(f, k)))
    }

    /// Letters in written order; the last one acts first.
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number of syllables (normal-form letters).
    pub fn syllables(&self) -> usize {
        self.letters.len()
    }

    /// Word length in generators and their inverses.
    pub fn len(&self) -> u64 {
        self.letters.iter().map(|l| l.exp.weight()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn multiply(&self, other: &Word) -> Word {
        if self.is_identity() {
            return other.clone();
        }
        if other.is_identity() {
            return self.clone();
        }
        normal_form(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `h · self · h⁻¹`, so that the critical point of the conjugate is the
    /// image under `h` of the critical point of `self`.
    pub fn conjugate_by(&self, h: &Word) -> Word {
        normal_form(
            h.letters
                .iter()
                .chain(self.letters.iter())
                .copied()
                .chain(h.letters.iter().rev().map(|l| l.inverse())),
        )
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.multiply(&base);
        }
        out
    }

    /// Contiguous tails of the word (the parts acting first), from `ε` up to
    /// the word itself. Cyclic letters contribute one tail per unit step, so
    /// `a^2` yields `ε, a, a^2`.
    pub fn suffixes(&self) -> Vec<Word> {
        let mut out = vec![Word::identity()];
        for i in (0..self.letters.len()).rev() {
            let rest = &self.letters[i + 1..];
            let letter = self.letters[i];
            if letter.exp.is_cyclic() {
                let step = letter.exp.major.signum();
                for j in 1..=letter.exp.major.abs() {
                    let mut letters = Vec::with_capacity(rest.len() + 1);
                    letters.push(Letter::cyclic(letter.factor, step * j));
                    letters.extend_from_slice(rest);
                    out.push(Word { letters });
                }
            } else {
                out.push(Word {
                    letters: self.letters[i..].to_vec(),
                });
            }
        }
        out
    }

    /// All contiguous subwords at unit granularity, deduplicated, in
    /// shortlex order.
    pub fn subwords(&self) -> Vec<Word> {
        let units = self.unit_letters();
        let mut seen = HashSet::new();
        for i in 0..=units.len() {
            for j in i..=units.len() {
                seen.insert(normal_form(units[i..j].iter().copied()));
            }
        }
        let mut out: Vec<Word> = seen.into_iter().collect();
        out.sort();
        out
    }

    /// Splits cyclic letters into unit letters; lattice letters stay whole.
    fn unit_letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for l in &self.letters {
            if l.exp.is_cyclic() {
                let step = l.exp.major.signum();
                out.extend((0..l.exp.major.abs()).map(|_| Letter::cyclic(l.factor, step)));
            } else {
                out.push(*l);
            }
        }
        out
    }

    /// Exponent sum of the cyclic factor `factor`.
    pub fn exponent_sum(&self, factor: FactorId) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.factor == factor)
            .map(|l| l.exp.major)
            .sum()
    }

    /// True when every letter lies in one of the given factors.
    pub fn within(&self, factors: &[FactorId]) -> bool {
        self.letters.iter().all(|l| factors.contains(&l.factor))
    }

    /// Applies `f` to each letter and multiplies the resulting words.
    pub fn substitute<F>(&self, mut f: F) -> Word
    where
        F: FnMut(Letter) -> Word,
    {
        normal_form(
            self.letters
                .iter()
                .flat_map(|&l| f(l).letters.into_iter())
                .collect::<Vec<_>>(),
        )
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The two generators of the rank-2 free group.
pub fn free_generators() -> [Word; 2] {
    [Word::gen(0, 1), Word::gen(1, 1)]
}

/// All distinct elements expressible as products of at most `radius`
/// generators or inverses, sorted shortlex.
pub fn ball(generators: &[Word], radius: usize) -> Vec<Word> {
    let mut steps: Vec<Word> = Vec::new();
    for g in generators {
        for s in [g.clone(), g.inverse()] {
            if !s.is_identity() && !steps.contains(&s) {
                steps.push(s);
            }
        }
    }
    let mut seen: HashSet<Word> = HashSet::new();
    seen.insert(Word::identity());
    let mut frontier = vec![Word::identity()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &frontier {
            for s in &steps {
                let v = w.multiply(s);
                if seen.insert(v.clone()) {
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<Word> = seen.into_iter().collect();
    out.sort();
    out
}

/// Ball of the rank-2 free group on `a`, `b`.
pub fn free_ball(radius: usize) -> Vec<Word> {
    ball(&free_generators(), radius)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordParseError {
    #[error("unexpected character {found:?} at offset {offset}")]
    Unexpected { found: char, offset: usize },
    #[error("missing exponent after '^' at offset {offset}")]
    MissingExponent { offset: usize },
    #[error("exponent out of range at offset {offset}")]
    Overflow { offset: usize },
    #[error("empty word text (use `e` for the identity)")]
    Empty,
}

fn factor_name(f: FactorId) -> char {
    (b'a' + f) as char
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = factor_name(self.factor);
        if self.exp.is_cyclic() {
            write!(f, "{}^{}", name, self.exp.major)
        } else {
            write!(f, "{}^({},{})", name, self.exp.major, self.exp.minor)
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            chars: src.char_indices().collect(),
            pos: 0,
            _src: src,
        }
    }

    fn peek(&self) -> Option<(usize, char)> {
        self.chars.get(self.pos).copied()
    }

    fn offset(&self) -> usize {
        self.peek().map(|(o, _)| o).unwrap_or(self._src.len())
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some((_, c)) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn int(&mut self) -> Result<i64, WordParseError> {
        let start = self.offset();
        let mut text = String::new();
        if let Some((_, c @ ('-' | '+'))) = self.peek() {
            text.push(c);
            self.pos += 1;
        }
        while let Some((_, c)) = self.peek() {
            if c.is_ascii_digit() {
                text.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        if !text.chars().any(|c| c.is_ascii_digit()) {
            return Err(WordParseError::MissingExponent { offset: start });
        }
        text.parse()
            .map_err(|_| WordParseError::Overflow { offset: start })
    }

    fn expect(&mut self, want: char) -> Result<(), WordParseError> {
        match self.peek() {
            Some((_, c)) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some((offset, found)) => Err(WordParseError::Unexpected { found, offset }),
            None => Err(WordParseError::MissingExponent {
                offset: self.offset(),
            }),
        }
    }
}

impl FromStr for Word {
    type Err = WordParseError;

    /// Accepts the canonical `a^1 b^-2` form as well as shorthand such as
    /// `ab^-1a`. The identity is `e`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor::new(s);
        let mut letters = Vec::new();
        let mut any = false;
        loop {
            cur.skip_ws();
            let Some((offset, c)) = cur.peek() else { break };
            any = true;
            if c == 'e' || c == 'ε' {
                cur.pos += 1;
                continue;
            }
            let factor = match c {
                'a'..='d' => c as u8 - b'a',
                _ => return Err(WordParseError::Unexpected { found: c, offset }),
            };
            cur.pos += 1;
            let mut exp = Exponent::cyclic(1);
            if let Some((_, '^')) = cur.peek() {
                cur.pos += 1;
                if let Some((_, '(')) = cur.peek() {
                    cur.pos += 1;
                    let major = cur.int()?;
                    cur.expect(',')?;
                    let minor = cur.int()?;
                    cur.expect(')')?;
                    exp = Exponent::lattice(major, minor);
                } else {
                    exp = Exponent::cyclic(cur.int()?);
                }
            }
            letters.push(Letter::new(factor, exp));
        }
        if !any {
            return Err(WordParseError::Empty);
        }
        Ok(normal_form(letters))
    }
}

/// Parses a word; panics on malformed input. Intended for tests and
/// hard-coded constants.
pub fn w(s: &str) -> Word {
    s.parse().unwrap_or_else(|e| panic!("bad word {s:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(k: i64) -> Letter {
        Letter::cyclic(0, k)
    }
    fn b(k: i64) -> Letter {
        Letter::cyclic(1, k)
    }

    /// Single left-to-right pass cancelling adjacent pairs only; repeated
    /// until stable. Independent of the stack reduction above.
    fn naive_reduce(mut letters: Vec<Letter>) -> Vec<Letter> {
        loop {
            let mut changed = false;
            let mut out: Vec<Letter> = Vec::new();
            let mut i = 0;
            while i < letters.len() {
                let l = letters[i];
                if l.exp.is_zero() {
                    changed = true;
                    i += 1;
                    continue;
                }
                if i + 1 < letters.len() && letters[i + 1].factor == l.factor {
                    out.push(Letter::new(l.factor, l.exp + letters[i + 1].exp));
                    changed = true;
                    i += 2;
                    continue;
                }
                out.push(l);
                i += 1;
            }
            letters = out;
            if !changed {
                return letters;
            }
        }
    }

    #[test]
    fn normal_form_examples() {
        assert_eq!(normal_form([a(1), a(-1)]), Word::identity());
        assert_eq!(normal_form([a(1), a(1)]), Word::gen(0, 2));
        let cascade = vec![a(1), b(1), b(-1), a(1)];
        assert_eq!(normal_form(cascade.clone()), Word::gen(0, 2));
        assert_eq!(naive_reduce(cascade), vec![a(2)]);
    }

    #[test]
    fn multiply_and_invert() {
        assert_eq!(w("a").multiply(&w("a^-1")), Word::identity());
        let lhs = w("ab").multiply(&w("b^-1 a"));
        assert_eq!(lhs, w("a^2"));
        let mut cat = w("ab").letters().to_vec();
        cat.extend_from_slice(w("b^-1a").letters());
        assert_eq!(normal_form(cat), lhs);
        assert_eq!(Word::identity().multiply(&w("ab^3")), w("ab^3"));

        assert_eq!(w("ab").inverse(), w("b^-1 a^-1"));
        assert_eq!(Word::identity().inverse(), Word::identity());
        let x = w("a^2 b^-1");
        assert_eq!(x.inverse(), w("b a^-2"));
        assert!(x.multiply(&x.inverse()).is_identity());
    }

    #[test]
    fn conjugation_convention() {
        assert_eq!(w("b").conjugate_by(&w("a")), w("a b a^-1"));
        assert_eq!(w("b").conjugate_by(&Word::identity()), w("b"));
        assert_eq!(w("a b a^-1").conjugate_by(&w("a^-1")), w("b"));
    }

    #[test]
    fn suffix_examples() {
        let s = w("ab").suffixes();
        assert_eq!(s, vec![Word::identity(), w("b"), w("ab")]);
        assert_eq!(Word::identity().suffixes(), vec![Word::identity()]);
        assert_eq!(
            w("a^2").suffixes(),
            vec![Word::identity(), w("a"), w("a^2")]
        );
        assert_eq!(
            w("a^-2 b").suffixes(),
            vec![Word::identity(), w("b"), w("a^-1 b"), w("a^-2 b")]
        );
    }

    #[test]
    fn subwords_contain_suffixes() {
        let x = w("a^2 b^-1 a");
        let subs = x.subwords();
        for s in x.suffixes() {
            assert!(subs.contains(&s), "{s}");
        }
        assert!(subs.contains(&w("b^-1")));
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(free_ball(0), vec![Word::identity()]);
        let b1 = free_ball(1);
        assert_eq!(b1.len(), 5);
        for x in ["e", "a", "a^-1", "b", "b^-1"] {
            assert!(b1.contains(&w(x)));
        }
        assert_eq!(free_ball(2).len(), 17);
        assert_eq!(free_ball(3).len(), 53);
        assert_eq!(free_ball(4).len(), 161);
    }

    #[test]
    fn brute_force_ball_two() {
        // all sequences of at most two steps, reduced and deduplicated
        let steps = [a(1), a(-1), b(1), b(-1)];
        let mut seen = HashSet::new();
        seen.insert(Word::identity());
        for &x in &steps {
            seen.insert(normal_form([x]));
            for &y in &steps {
                seen.insert(normal_form([x, y]));
            }
        }
        let ball: HashSet<Word> = free_ball(2).into_iter().collect();
        assert_eq!(seen, ball);
    }

    #[test]
    fn ball_is_shortlex_sorted() {
        let b3 = free_ball(3);
        assert!(b3.windows(2).all(|p| p[0] < p[1]));
        assert!(b3[0].is_identity());
    }

    #[test]
    fn text_format() {
        let x = w("a^1 b^-2 a^3");
        assert_eq!(x.to_string(), "a^1 b^-2 a^3");
        assert_eq!(w("e").to_string(), "e");
        assert_eq!(w("ab^-1").to_string(), "a^1 b^-1");
        assert_eq!(w("c^(1,-2)").to_string(), "c^(1,-2)");
        assert_eq!(w("c^(1,-2) c^(-1,2)"), Word::identity());
        assert!("a^".parse::<Word>().is_err());
        assert!("x".parse::<Word>().is_err());
        assert!("".parse::<Word>().is_err());
        assert!("a^99999999999999999999".parse::<Word>().is_err());
    }

    #[test]
    fn lattice_letters_merge() {
        let x = normal_form([
            Letter::new(2, Exponent::lattice(1, 0)),
            Letter::new(2, Exponent::lattice(0, 3)),
        ]);
        assert_eq!(x, w("c^(1,3)"));
        assert_eq!(x.suffixes().len(), 2);
    }
}
