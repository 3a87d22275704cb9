//! Semilinearity with respect to pair partitions of the alphabet, and the
//! autotopies every semilinear quasigroup carries.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{Isotopy, Perm, Symbol};
use crate::quasigroup::Quasigroup;

/// A partition of {0,1,2,3} into two pairs, named by the partner of 0.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct PairPartition(u8);

impl PairPartition {
    pub const ALL: [PairPartition; 3] = [PairPartition(1), PairPartition(2), PairPartition(3)];

    /// The partition containing the pair `{0, a}`.
    pub fn with_zero(a: Symbol) -> Result<PairPartition> {
        match a {
            1..=3 => Ok(PairPartition(a)),
            _ => Err(Error::InvalidArgument(format!("no pair {{0,{a}}}"))),
        }
    }

    /// The partition containing the pair `{x, y}`.
    pub fn from_pair(x: Symbol, y: Symbol) -> Result<PairPartition> {
        if x == y || x > 3 || y > 3 {
            return Err(Error::InvalidArgument(format!("invalid pair {{{x},{y}}}")));
        }
        Ok(PairPartition(if x == 0 {
            y
        } else if y == 0 {
            x
        } else {
            6 - x - y
        }))
    }

    /// Partner of 0.
    pub fn partner(self) -> Symbol {
        self.0
    }

    /// The block index of `x`: 0 for the block containing 0, else 1.
    #[inline]
    pub fn block(self, x: Symbol) -> u8 {
        u8::from(x != 0 && x != self.0)
    }

    /// The partition `{p(u), p(v)} | {p(w), p(z)}`.
    pub fn image(self, p: Perm) -> PairPartition {
        PairPartition::from_pair(p.apply(0), p.apply(self.0)).expect("images are distinct")
    }

    /// The pair not containing 0, as `(b, c)` with `b < c`.
    pub fn complement(self) -> (Symbol, Symbol) {
        let mut rest = (1..4).filter(|&v| v != self.0);
        (rest.next().unwrap(), rest.next().unwrap())
    }
}

impl TryFrom<u8> for PairPartition {
    type Error = Error;
    fn try_from(a: u8) -> Result<PairPartition> {
        PairPartition::with_zero(a)
    }
}

impl From<PairPartition> for u8 {
    fn from(p: PairPartition) -> u8 {
        p.0
    }
}

impl fmt::Display for PairPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (b, c) = self.complement();
        write!(f, "{{0{}|{b}{c}}}", self.0)
    }
}

impl fmt::Debug for PairPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Every full assignment `(P_0, P_1, ..., P_n)` under which the block of
/// `f(x)` depends only on the blocks of the arguments.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemilinearProfile {
    pub arity: usize,
    pub assignments: Vec<Vec<PairPartition>>,
}

impl SemilinearProfile {
    pub fn is_semilinear(&self) -> bool {
        !self.assignments.is_empty()
    }

    pub fn is_linear(&self) -> bool {
        self.assignments.len() == 3
    }

    /// Whether position `j` (0 = value) admits `pair` in some assignment.
    pub fn is_semilinear_in_pair(&self, j: usize, pair: PairPartition) -> bool {
        self.assignments.iter().any(|a| a.get(j) == Some(&pair))
    }

    /// Partners `a` such that one assignment uses `{0,a}` at every position.
    pub fn uniform_pairs(&self) -> Vec<Symbol> {
        self.assignments
            .iter()
            .filter(|a| a.iter().all(|&p| p == a[0]))
            .map(|a| a[0].partner())
            .collect()
    }
}

pub fn semilinear_profile(q: &Quasigroup) -> SemilinearProfile {
    let n = q.arity();
    let assignments = PairPartition::ALL
        .iter()
        .filter_map(|&p0| assignment_for(q, p0))
        .collect();
    SemilinearProfile {
        arity: n,
        assignments,
    }
}

/// The assignment with value partition `p0`, if it verifies.
fn assignment_for(q: &Quasigroup, p0: PairPartition) -> Option<Vec<PairPartition>> {
    let n = q.arity();
    let mut parts = vec![p0];
    for j in 1..=n {
        // section through the zero tuple; its preimage of p0 is forced
        let s = q.section_at(j, 0);
        let inv = s.inverse();
        let same_block_as_s0 = if s.apply(0) == 0 {
            p0.partner()
        } else if s.apply(0) == p0.partner() {
            0
        } else {
            let (b, c) = p0.complement();
            if s.apply(0) == b {
                c
            } else {
                b
            }
        };
        parts.push(PairPartition(inv.apply(same_block_as_s0)));
    }
    let mut seen = vec![u8::MAX; 1 << n];
    let mut x = vec![0 as Symbol; n];
    for &v in q.table() {
        let key = x
            .iter()
            .zip(&parts[1..])
            .fold(0usize, |acc, (&xi, p)| acc << 1 | p.block(xi) as usize);
        let blk = p0.block(v);
        if seen[key] == u8::MAX {
            seen[key] = blk;
        } else if seen[key] != blk {
            return None;
        }
        crate::quasigroup::increment(&mut x);
    }
    Some(parts)
}

pub fn is_semilinear_in_pair(q: &Quasigroup, j: usize, pair: PairPartition) -> bool {
    semilinear_profile(q).is_semilinear_in_pair(j, pair)
}

pub fn is_linear(q: &Quasigroup) -> bool {
    semilinear_profile(q).is_linear()
}

/// The permutations attached to a pair `{0, a}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NativeElements {
    pub pair: PairPartition,
    pub native_involution: Perm,
    /// `(0a)` then `(bc)`
    pub native_transpositions: [Perm; 2],
    /// `(0bac)` then `(0cab)`
    pub native_cycles: [Perm; 2],
    /// `(0b)(ca)` then `(0c)(ab)`
    pub foreign_involutions: [Perm; 2],
}

pub fn native_elements(a: Symbol) -> Result<NativeElements> {
    let pair = PairPartition::with_zero(a)?;
    let (b, c) = pair.complement();
    let cyc = |s: [Symbol; 4]| {
        let mut images = [0; 4];
        for k in 0..4 {
            images[s[k] as usize] = s[(k + 1) % 4];
        }
        Perm::from_images(images).expect("4-cycle")
    };
    let t0a = Perm::transposition(0, a);
    let tbc = Perm::transposition(b, c);
    Ok(NativeElements {
        pair,
        native_involution: t0a.compose(&tbc),
        native_transpositions: [t0a, tbc],
        native_cycles: [cyc([0, b, a, c]), cyc([0, c, a, b])],
        foreign_involutions: [
            Perm::transposition(0, b).compose(&Perm::transposition(c, a)),
            Perm::transposition(0, c).compose(&Perm::transposition(a, b)),
        ],
    })
}

/// The autotopies guaranteed for a quasigroup that is `{0,a}`-semilinear in
/// every position: all placements of two native involutions, then one
/// isotopy made of native transpositions.
pub fn canonical_semilinear_autotopies(q: &Quasigroup, a: Symbol) -> Result<Vec<Isotopy>> {
    let pair = PairPartition::with_zero(a)?;
    let profile = semilinear_profile(q);
    if !profile.uniform_pairs().contains(&a) {
        return Err(Error::NotUniformlySemilinear(a));
    }
    let n = q.arity();
    let nat = native_elements(a)?;
    let xi = nat.native_involution;
    let mut out = Vec::new();
    for p in 0..=n {
        for r in p + 1..=n {
            let mut parts = vec![Perm::IDENTITY; n + 1];
            parts[p] = xi;
            parts[r] = xi;
            out.push(Isotopy::new(parts)?);
        }
    }
    let [t0a, tbc] = nat.native_transpositions;
    // the value block of f on {0,a}^n decides whether (0a) occurs
    if pair.block(q.value_at(0)) == 0 {
        out.push(Isotopy::uniform(n, tbc));
    } else {
        let found = (0..=n).find_map(|pos| {
            let mut parts = vec![tbc; n + 1];
            parts[pos] = t0a;
            let theta = Isotopy::new(parts).ok()?;
            crate::autotopy::is_autotopy(q, &theta)
                .ok()?
                .then_some(theta)
        });
        out.push(found.ok_or(Error::NotUniformlySemilinear(a))?);
    }
    Ok(out)
}
