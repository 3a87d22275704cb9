//! Permutations of the alphabet {0,1,2,3} and isotopies built from them.
//!
//! Composition follows `(s * t)(x) = s(t(x))` everywhere in the crate.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of the alphabet {0,1,2,3}.
pub type Symbol = u8;

/// Size of the alphabet.
pub const ORDER: usize = 4;

/// A permutation of {0,1,2,3}, stored as its image list.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Perm([Symbol; 4]);

impl Perm {
    pub const IDENTITY: Perm = Perm([0, 1, 2, 3]);

    pub fn from_images(images: [Symbol; 4]) -> Result<Perm> {
        let mut seen = 0u8;
        for &v in &images {
            if v > 3 || seen & (1 << v) != 0 {
                return Err(Error::InvalidPerm(format!("{images:?}")));
            }
            seen |= 1 << v;
        }
        Ok(Perm(images))
    }

    /// Builds a transposition `(a b)`; `a == b` gives the identity.
    pub fn transposition(a: Symbol, b: Symbol) -> Perm {
        let mut images = [0, 1, 2, 3];
        images.swap(a as usize, b as usize);
        Perm(images)
    }

    /// Parses cycle notation such as `(02)(13)`, `(0123)`, `Id` or `()`.
    pub fn from_cycles(text: &str) -> Result<Perm> {
        let text = text.trim();
        if text.eq_ignore_ascii_case("id") || text.is_empty() || text == "()" {
            return Ok(Perm::IDENTITY);
        }
        let mut images = [0, 1, 2, 3];
        let mut used = 0u8;
        let bad = || Error::InvalidPerm(text.to_string());
        let mut rest = text;
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = body.find(')').ok_or_else(bad)?;
            let cycle: Vec<Symbol> = body[..close]
                .chars()
                .map(|c| match c {
                    '0'..='3' => Ok(c as u8 - b'0'),
                    _ => Err(bad()),
                })
                .collect::<Result<_>>()?;
            for &v in &cycle {
                if used & (1 << v) != 0 {
                    return Err(bad());
                }
                used |= 1 << v;
            }
            for (k, &v) in cycle.iter().enumerate() {
                images[v as usize] = cycle[(k + 1) % cycle.len()];
            }
            rest = body[close + 1..].trim_start();
        }
        Ok(Perm(images))
    }

    /// All 24 permutations in lexicographic order of their image lists.
    pub fn all() -> &'static [Perm; 24] {
        static ALL: OnceLock<[Perm; 24]> = OnceLock::new();
        ALL.get_or_init(|| {
            let mut out = [Perm::IDENTITY; 24];
            let mut k = 0;
            for a in 0..4u8 {
                for b in 0..4u8 {
                    for c in 0..4u8 {
                        if a == b || a == c || b == c {
                            continue;
                        }
                        out[k] = Perm([a, b, c, 6 - a - b - c]);
                        k += 1;
                    }
                }
            }
            out
        })
    }

    /// Position of this permutation in [`Perm::all`].
    pub fn index(&self) -> usize {
        let [a, b, c, _] = self.0;
        let a = a as usize;
        let mut rest: Vec<usize> = (0..4).filter(|&v| v != a).collect();
        let bi = rest.iter().position(|&v| v == b as usize).unwrap();
        rest.remove(bi);
        let ci = rest.iter().position(|&v| v == c as usize).unwrap();
        a * 6 + bi * 2 + ci
    }

    #[inline]
    pub fn apply(&self, x: Symbol) -> Symbol {
        self.0[x as usize]
    }

    pub fn images(&self) -> [Symbol; 4] {
        self.0
    }

    /// `self * other`, i.e. apply `other` first.
    #[inline]
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm([
            self.0[other.0[0] as usize],
            self.0[other.0[1] as usize],
            self.0[other.0[2] as usize],
            self.0[other.0[3] as usize],
        ])
    }

    #[inline]
    pub fn inverse(&self) -> Perm {
        let mut inv = [0; 4];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y as usize] = x as Symbol;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        *self == Perm::IDENTITY
    }

    pub fn order(&self) -> usize {
        let mut p = *self;
        let mut k = 1;
        while !p.is_identity() {
            p = p.compose(self);
            k += 1;
        }
        k
    }

    fn cycles(&self) -> Vec<Vec<Symbol>> {
        let mut seen = [false; 4];
        let mut out = Vec::new();
        for start in 0..4u8 {
            if seen[start as usize] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start as usize] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x as usize] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }
}

impl Default for Perm {
    fn default() -> Self {
        Perm::IDENTITY
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("Id");
        }
        for c in cycles {
            f.write_str("(")?;
            for v in c {
                write!(f, "{v}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Perm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Perm> {
        Perm::from_cycles(s)
    }
}

impl TryFrom<String> for Perm {
    type Error = Error;
    fn try_from(s: String) -> Result<Perm> {
        Perm::from_cycles(&s)
    }
}

impl From<Perm> for String {
    fn from(p: Perm) -> String {
        p.to_string()
    }
}

/// A tuple `(t_0, t_1, ..., t_n)` of permutations acting coordinate-wise on
/// `Sigma^{n+1}`; `t_0` acts on the value coordinate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Isotopy {
    parts: Vec<Perm>,
}

impl Isotopy {
    pub fn new(parts: Vec<Perm>) -> Result<Isotopy> {
        if parts.len() < 2 {
            return Err(Error::InvalidArgument(
                "an isotopy needs at least two components".into(),
            ));
        }
        Ok(Isotopy { parts })
    }

    pub fn identity(arity: usize) -> Isotopy {
        Isotopy {
            parts: vec![Perm::IDENTITY; arity + 1],
        }
    }

    /// Parses whitespace- or comma-separated cycle notation, e.g. `"Id (0123) (0321)"`.
    pub fn parse(text: &str) -> Result<Isotopy> {
        let inner = strip_outer(text.trim());
        let mut parts = Vec::new();
        let mut token = String::new();
        for c in inner.chars() {
            match c {
                ',' | ' ' | '\t' => {
                    if !token.is_empty() {
                        parts.push(Perm::from_cycles(&token)?);
                        token.clear();
                    }
                }
                _ => token.push(c),
            }
        }
        if !token.is_empty() {
            parts.push(Perm::from_cycles(&token)?);
        }
        Isotopy::new(parts)
    }

    /// The same permutation in every coordinate.
    pub fn uniform(arity: usize, p: Perm) -> Isotopy {
        Isotopy {
            parts: vec![p; arity + 1],
        }
    }

    pub fn arity(&self) -> usize {
        self.parts.len() - 1
    }

    pub fn parts(&self) -> &[Perm] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> Perm {
        self.parts[i]
    }

    /// Componentwise `self * other`.
    pub fn compose(&self, other: &Isotopy) -> Isotopy {
        debug_assert_eq!(self.parts.len(), other.parts.len());
        Isotopy {
            parts: self
                .parts
                .iter()
                .zip(&other.parts)
                .map(|(a, b)| a.compose(b))
                .collect(),
        }
    }

    pub fn inverse(&self) -> Isotopy {
        Isotopy {
            parts: self.parts.iter().map(Perm::inverse).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.parts.iter().all(Perm::is_identity)
    }

    /// Image of a word `(x_0, ..., x_n)`.
    pub fn apply_word(&self, word: &[Symbol]) -> Vec<Symbol> {
        word.iter()
            .zip(&self.parts)
            .map(|(&x, p)| p.apply(x))
            .collect()
    }
}

impl fmt::Display for Isotopy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Isotopy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Removes one enclosing pair of brackets or parentheses around a whole tuple.
fn strip_outer(text: &str) -> &str {
    if let Some(inner) = text.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
        return inner;
    }
    if !text.starts_with('(') {
        return text;
    }
    let mut depth = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return if i + 1 == text.len() {
                        &text[1..i]
                    } else {
                        text
                    };
                }
            }
            _ => {}
        }
    }
    text
}
