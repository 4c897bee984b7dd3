//! Automorphisms of the rank-2 free group as words in Nielsen moves.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::word::{Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NielsenMove {
    /// a ↦ a⁻¹
    InvA,
    /// a ↔ b
    Swap,
    /// a ↦ ab
    Mult,
    InvAInv,
    SwapInv,
    /// a ↦ ab⁻¹
    MultInv,
}

impl NielsenMove {
    pub const ALL: [NielsenMove; 6] = [
        NielsenMove::InvA,
        NielsenMove::Swap,
        NielsenMove::Mult,
        NielsenMove::InvAInv,
        NielsenMove::SwapInv,
        NielsenMove::MultInv,
    ];

    pub fn inverse(self) -> NielsenMove {
        use NielsenMove::*;
        match self {
            InvA => InvAInv,
            Swap => SwapInv,
            Mult => MultInv,
            InvAInv => InvA,
            SwapInv => Swap,
            MultInv => Mult,
        }
    }

    /// Images of `a` and `b`.
    fn images(self) -> [Word; 2] {
        use NielsenMove::*;
        let a = Word::gen(0, 1);
        let b = Word::gen(1, 1);
        match self {
            InvA | InvAInv => [a.inverse(), b],
            Swap | SwapInv => [b, a],
            Mult => [a.multiply(&b), b],
            MultInv => [a.multiply(&b.inverse()), b],
        }
    }

    fn token(self) -> &'static str {
        use NielsenMove::*;
        match self {
            InvA => "inv_a",
            Swap => "swap",
            Mult => "mult",
            InvAInv => "inv_a^-1",
            SwapInv => "swap^-1",
            MultInv => "mult^-1",
        }
    }
}

/// A composition `m_1 ∘ m_2 ∘ … ∘ m_k` of Nielsen moves; `m_k` is applied
/// first. The empty word is the identity automorphism.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AutWord {
    moves: Vec<NielsenMove>,
}

impl AutWord {
    pub fn identity() -> Self {
        AutWord::default()
    }

    pub fn new(moves: Vec<NielsenMove>) -> Self {
        AutWord { moves }
    }

    pub fn moves(&self) -> &[NielsenMove] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AutWord) -> AutWord {
        let mut moves = self.moves.clone();
        moves.extend_from_slice(&other.moves);
        AutWord { moves }
    }

    pub fn inverse(&self) -> AutWord {
        AutWord {
            moves: self.moves.iter().rev().map(|m| m.inverse()).collect(),
        }
    }

    /// Images of the generators `a`, `b` under the whole composition.
    pub fn generator_images(&self) -> [Word; 2] {
        let mut images = [Word::gen(0, 1), Word::gen(1, 1)];
        for m in &self.moves {
            let [ma, mb] = m.images();
            images = [substitute(&ma, &images), substitute(&mb, &images)];
        }
        images
    }

    /// Every move sequence of length at most `max_len`, shortest first.
    pub fn all_up_to(max_len: usize) -> Vec<AutWord> {
        let mut out = vec![AutWord::identity()];
        let mut layer = vec![AutWord::identity()];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(layer.len() * 6);
            for w in &layer {
                for m in NielsenMove::ALL {
                    let mut moves = w.moves.clone();
                    moves.push(m);
                    next.push(AutWord { moves });
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

fn substitute(w: &Word, images: &[Word; 2]) -> Word {
    w.substitute(|l: Letter| match l.factor {
        0 | 1 => images[l.factor as usize].pow(l.exp.major),
        _ => Word::from_letter(l),
    })
}

/// Image of `w` under `sigma`. Letters outside the factors `a`, `b` are fixed.
pub fn apply_aut(sigma: &AutWord, w: &Word) -> Word {
    if sigma.is_empty() {
        return w.clone();
    }
    let images = sigma.generator_images();
    substitute(w, &images)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown Nielsen move {0:?} (expected inv_a, swap, mult, optionally with ^-1)")]
pub struct AutParseError(pub String);

impl fmt::Display for AutWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.moves.is_empty() {
            return f.write_str("id");
        }
        let tokens: Vec<&str> = self.moves.iter().map(|m| m.token()).collect();
        f.write_str(&tokens.join(" "))
    }
}

impl FromStr for AutWord {
    type Err = AutParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut moves = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "id" {
                continue;
            }
            let m = NielsenMove::ALL
                .into_iter()
                .find(|m| m.token() == tok)
                .ok_or_else(|| AutParseError(tok.to_string()))?;
            moves.push(m);
        }
        Ok(AutWord { moves })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{free_ball, w};

    #[test]
    fn move_examples() {
        let mult = AutWord::new(vec![NielsenMove::Mult]);
        assert_eq!(apply_aut(&mult, &w("a")), w("ab"));
        let swap2 = AutWord::new(vec![NielsenMove::Swap, NielsenMove::Swap]);
        for x in free_ball(2) {
            assert_eq!(apply_aut(&swap2, &x), x);
        }
        let inv_mult = AutWord::new(vec![NielsenMove::InvA, NielsenMove::Mult]);
        assert_eq!(apply_aut(&inv_mult, &w("b")), w("b"));
        // inv_a ∘ mult: a ↦ ab ↦ a⁻¹b
        assert_eq!(apply_aut(&inv_mult, &w("a")), w("a^-1 b"));
    }

    #[test]
    fn moves_undone_by_inverse() {
        let ball = free_ball(3);
        for m in NielsenMove::ALL {
            let there_and_back = AutWord::new(vec![m.inverse(), m]);
            for x in &ball {
                assert_eq!(&apply_aut(&there_and_back, x), x, "{m:?} on {x}");
            }
        }
    }

    #[test]
    fn composition_law() {
        let sigma: AutWord = "mult swap".parse().unwrap();
        let tau: AutWord = "inv_a mult^-1".parse().unwrap();
        for x in free_ball(2) {
            assert_eq!(
                apply_aut(&sigma.compose(&tau), &x),
                apply_aut(&sigma, &apply_aut(&tau, &x))
            );
        }
    }

    #[test]
    fn enumeration_count_and_text() {
        assert_eq!(AutWord::all_up_to(3).len(), 1 + 6 + 36 + 216);
        let s: AutWord = "inv_a swap^-1 mult".parse().unwrap();
        assert_eq!(s.to_string(), "inv_a swap^-1 mult");
        assert!("twist".parse::<AutWord>().is_err());
    }
}
