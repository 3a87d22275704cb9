//! Value tables of n-ary quasigroups of order 4, their codes, inverses,
//! isotopes and repetition-free compositions.
//!
//! A table stores `f(x_1, ..., x_n)` at index `sum_j x_j * 4^(n-j)`, so `x_1`
//! is the most significant digit and printed tables read row-major.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::perm::{Isotopy, Perm, Symbol};

/// Largest arity accepted anywhere (a table of 4^12 bytes).
pub const MAX_ARITY: usize = 12;

/// `x xor y` (the group Z2 x Z2) in lexicographic argument order.
pub const XOR2_TABLE: &str = "0123103223013210";

/// `x + y mod 4` (the group Z4) in lexicographic argument order.
pub const Z4_TABLE: &str = "0123123023013012";

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Quasigroup {
    arity: usize,
    table: Vec<Symbol>,
}

#[inline]
pub(crate) fn pow4(k: usize) -> usize {
    1usize << (2 * k)
}

impl Quasigroup {
    /// Wraps a table after checking its size, alphabet and the Latin property.
    pub fn new(arity: usize, table: Vec<Symbol>) -> Result<Quasigroup> {
        check_arity(arity)?;
        if table.len() != pow4(arity) {
            return Err(Error::DigitCount {
                expected: pow4(arity),
                found: table.len(),
            });
        }
        if let Some(offset) = table.iter().position(|&v| v > 3) {
            return Err(Error::InvalidDigit {
                offset,
                found: char::from(b'0' + table[offset].min(9)),
            });
        }
        let q = Quasigroup { arity, table };
        q.check_latin()?;
        Ok(q)
    }

    /// Tabulates `f` over `Sigma^arity` in index order.
    pub fn from_fn(arity: usize, mut f: impl FnMut(&[Symbol]) -> Symbol) -> Result<Quasigroup> {
        check_arity(arity)?;
        let mut x = vec![0; arity];
        let mut table = Vec::with_capacity(pow4(arity));
        for _ in 0..pow4(arity) {
            table.push(f(&x));
            increment(&mut x);
        }
        Quasigroup::new(arity, table)
    }

    /// Parses a bare digit string such as [`Z4_TABLE`].
    pub fn from_digits(arity: usize, digits: &str) -> Result<Quasigroup> {
        let table = digits_to_table(digits.as_bytes())?;
        Quasigroup::new(arity, table)
    }

    /// Parses the `qg4` text format: `"qg4 <n>\n"` followed by exactly `4^n`
    /// digits and a newline.
    pub fn parse_qg4(text: &[u8]) -> Result<Quasigroup> {
        let nl = text
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| Error::MalformedHeader("missing newline after header".into()))?;
        let header = std::str::from_utf8(text[..nl].strip_suffix(b"\r").unwrap_or(&text[..nl]))
            .map_err(|_| Error::MalformedHeader("header is not ASCII".into()))?;
        let arity_text = header.strip_prefix("qg4 ").ok_or_else(|| {
            Error::MalformedHeader(format!("expected \"qg4 <n>\", got {header:?}"))
        })?;
        if arity_text.is_empty() || !arity_text.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::MalformedHeader(format!("bad arity {arity_text:?}")));
        }
        let arity: usize = arity_text
            .parse()
            .map_err(|_| Error::MalformedHeader(format!("bad arity {arity_text:?}")))?;
        check_arity(arity)?;
        let mut body = &text[nl + 1..];
        // the trailing newline is part of the format, but accept its absence
        if let Some(stripped) = body.strip_suffix(b"\n") {
            body = stripped.strip_suffix(b"\r").unwrap_or(stripped);
        }
        if body.len() != pow4(arity) {
            return Err(Error::DigitCount {
                expected: pow4(arity),
                found: body.len(),
            });
        }
        let table = digits_to_table(body)?;
        Quasigroup::new(arity, table)
    }

    pub fn to_qg4(&self) -> String {
        format!("qg4 {}\n{}\n", self.arity, self.digits())
    }

    /// The table as a digit string.
    pub fn digits(&self) -> String {
        self.table.iter().map(|&v| char::from(b'0' + v)).collect()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[Symbol] {
        &self.table
    }

    /// Number of table cells, `4^arity`.
    pub fn size(&self) -> usize {
        self.table.len()
    }

    /// Table index of an argument tuple (no validation).
    #[inline]
    pub fn index_of(&self, x: &[Symbol]) -> usize {
        x.iter().fold(0, |acc, &v| acc * 4 + v as usize)
    }

    /// Inverse of [`Quasigroup::index_of`].
    pub fn decode(&self, mut index: usize) -> Vec<Symbol> {
        let mut x = vec![0; self.arity];
        for slot in x.iter_mut().rev() {
            *slot = (index & 3) as Symbol;
            index >>= 2;
        }
        x
    }

    /// Distance between table cells that differ by one in argument `i` (1-based).
    #[inline]
    pub fn stride(&self, i: usize) -> usize {
        pow4(self.arity - i)
    }

    #[inline]
    pub fn value_at(&self, index: usize) -> Symbol {
        self.table[index]
    }

    pub fn eval(&self, x: &[Symbol]) -> Result<Symbol> {
        if x.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: x.len(),
            });
        }
        if x.iter().any(|&v| v > 3) {
            return Err(Error::InvalidArgument(format!(
                "symbol out of range in {x:?}"
            )));
        }
        Ok(self.table[self.index_of(x)])
    }

    /// The unary section `v -> f(..., v at position i, ...)` with the other
    /// arguments taken from `fixed` in order.
    pub fn section(&self, i: usize, fixed: &[Symbol]) -> Result<Perm> {
        self.check_position(i)?;
        if fixed.len() + 1 != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity - 1,
                found: fixed.len(),
            });
        }
        let mut x = Vec::with_capacity(self.arity);
        x.extend_from_slice(&fixed[..i - 1]);
        x.push(0);
        x.extend_from_slice(&fixed[i - 1..]);
        let base = self.index_of(&x);
        Ok(self.section_at(i, base))
    }

    /// Section through the cell `base`, which must have digit 0 at position `i`.
    pub(crate) fn section_at(&self, i: usize, base: usize) -> Perm {
        let s = self.stride(i);
        let images = [
            self.table[base],
            self.table[base + s],
            self.table[base + 2 * s],
            self.table[base + 3 * s],
        ];
        Perm::from_images(images).expect("Latin table has bijective sections")
    }

    /// The inverse `f^<i>`: `f^<i>(x with a at position i) = x_i` iff `f(x) = a`.
    pub fn inverse(&self, i: usize) -> Result<Quasigroup> {
        self.check_position(i)?;
        let s = self.stride(i);
        let mut table = vec![0; self.size()];
        for (idx, &a) in self.table.iter().enumerate() {
            let xi = (idx / s) % 4;
            let target = idx - xi * s + a as usize * s;
            table[target] = xi as Symbol;
        }
        Ok(Quasigroup {
            arity: self.arity,
            table,
        })
    }

    /// `g(x) = t_0^{-1} f(t_1 x_1, ..., t_n x_n)`.
    pub fn apply_isotopy(&self, iso: &Isotopy) -> Result<Quasigroup> {
        if iso.arity() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: iso.arity(),
            });
        }
        let inv0 = iso.part(0).inverse();
        let offsets = arg_offsets(self.arity, &iso.parts()[1..]);
        let mut table = Vec::with_capacity(self.size());
        for_each_mapped(self.arity, &offsets, |_, mapped| {
            table.push(inv0.apply(self.table[mapped]));
        });
        Ok(Quasigroup {
            arity: self.arity,
            table,
        })
    }

    /// `g(x_1, ..., x_n) = f(x_{src[0]}, ..., x_{src[n-1]})` where `src` is a
    /// permutation of `1..=n`.
    pub fn rearrange_args(&self, src: &[usize]) -> Result<Quasigroup> {
        let n = self.arity;
        let mut sorted = src.to_vec();
        sorted.sort_unstable();
        if sorted != (1..=n).collect::<Vec<_>>() {
            return Err(Error::InvalidArgument(format!(
                "{src:?} is not a permutation of 1..={n}"
            )));
        }
        // argument j of g feeds position k of f where src[k] = j
        let mut offsets = vec![[0usize; 4]; n];
        for (k, &j) in src.iter().enumerate() {
            let s = pow4(n - 1 - k);
            for (v, o) in offsets[j - 1].iter_mut().enumerate() {
                *o = v * s;
            }
        }
        let mut table = Vec::with_capacity(self.size());
        for_each_mapped(n, &offsets, |_, mapped| table.push(self.table[mapped]));
        Ok(Quasigroup { arity: n, table })
    }

    /// The set `{(f(x), x)}`.
    pub fn code(&self) -> Code {
        let words = self
            .table
            .iter()
            .enumerate()
            .map(|(idx, &v)| {
                let mut w = Vec::with_capacity(self.arity + 1);
                w.push(v);
                w.extend(self.decode(idx));
                w
            })
            .collect();
        Code {
            arity: self.arity,
            words,
        }
    }

    fn check_position(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.arity {
            return Err(Error::InvalidArgument(format!(
                "argument position {i} outside 1..={}",
                self.arity
            )));
        }
        Ok(())
    }

    fn check_latin(&self) -> Result<()> {
        for i in 1..=self.arity {
            let s = self.stride(i);
            for base in 0..self.size() {
                if !(base / s).is_multiple_of(4) {
                    continue;
                }
                let mut seen = 0u8;
                for k in 0..4 {
                    let v = self.table[base + k * s];
                    if seen & (1 << v) != 0 {
                        return Err(Error::NotLatin {
                            position: i,
                            index: base + k * s,
                        });
                    }
                    seen |= 1 << v;
                }
            }
        }
        Ok(())
    }
}

/// Substitutes `g` into argument `i` of `h`:
/// `f(x) = h(x_1, ..., x_{i-1}, g(x_i, ..., x_{i+m-1}), x_{i+m}, ...)`.
///
/// Both factors must have arity at least 2.
pub fn compose_at(h: &Quasigroup, g: &Quasigroup, i: usize) -> Result<Quasigroup> {
    h.check_position(i)?;
    if h.arity < 2 || g.arity < 2 {
        return Err(Error::InvalidArgument(
            "composition factors must have arity at least 2".into(),
        ));
    }
    let n = h.arity + g.arity - 1;
    check_arity(n)?;
    let m = g.arity;
    let tail = h.arity - i; // arguments of h after position i
    let mut table = Vec::with_capacity(pow4(n));
    for idx in 0..pow4(n) {
        let low = idx % pow4(tail);
        let mid = (idx / pow4(tail)) % pow4(m);
        let high = idx / pow4(tail + m);
        let v = g.table[mid] as usize;
        let h_idx = (high * 4 + v) * pow4(tail) + low;
        table.push(h.table[h_idx]);
    }
    Ok(Quasigroup { arity: n, table })
}

impl fmt::Debug for Quasigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Quasigroup({}; {})", self.arity, self.digits())
    }
}

impl fmt::Display for Quasigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_qg4())
    }
}

/// The code `M(f)` of a quasigroup: words `(x_0, x_1, ..., x_n)` with `x_0 = f(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Code {
    arity: usize,
    words: BTreeSet<Vec<Symbol>>,
}

impl Code {
    pub fn from_words(arity: usize, words: impl IntoIterator<Item = Vec<Symbol>>) -> Result<Code> {
        let words: BTreeSet<_> = words.into_iter().collect();
        if words
            .iter()
            .any(|w| w.len() != arity + 1 || w.iter().any(|&v| v > 3))
        {
            return Err(Error::InvalidArgument("malformed codeword".into()));
        }
        Ok(Code { arity, words })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, word: &[Symbol]) -> bool {
        self.words.contains(word)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<Symbol>> {
        self.words.iter()
    }

    /// Image `t(M)` under an isotopy.
    pub fn map(&self, iso: &Isotopy) -> Result<Code> {
        if iso.arity() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: iso.arity(),
            });
        }
        Ok(Code {
            arity: self.arity,
            words: self.words.iter().map(|w| iso.apply_word(w)).collect(),
        })
    }

    /// True iff every line of `Sigma^{n+1}` meets the code in exactly one word.
    pub fn meets_every_line_once(&self) -> bool {
        let n = self.arity;
        if self.words.len() != pow4(n) {
            return false;
        }
        for skip in 0..=n {
            let mut hits = vec![0u8; pow4(n)];
            for w in &self.words {
                let key = w
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != skip)
                    .fold(0usize, |acc, (_, &v)| acc * 4 + v as usize);
                hits[key] += 1;
            }
            if hits.iter().any(|&h| h != 1) {
                return false;
            }
        }
        true
    }

    /// Recovers the quasigroup whose code this is.
    pub fn to_quasigroup(&self) -> Result<Quasigroup> {
        if !self.meets_every_line_once() {
            return Err(Error::InvalidArgument(
                "not the code of a quasigroup".into(),
            ));
        }
        let mut table = vec![0; pow4(self.arity)];
        for w in &self.words {
            let idx = w[1..].iter().fold(0usize, |acc, &v| acc * 4 + v as usize);
            table[idx] = w[0];
        }
        Quasigroup::new(self.arity, table)
    }
}

fn check_arity(arity: usize) -> Result<()> {
    if arity == 0 {
        return Err(Error::InvalidArgument("arity must be at least 1".into()));
    }
    if arity > MAX_ARITY {
        return Err(Error::ArityTooLarge {
            arity,
            max: MAX_ARITY,
        });
    }
    Ok(())
}

fn digits_to_table(bytes: &[u8]) -> Result<Vec<Symbol>> {
    bytes
        .iter()
        .enumerate()
        .map(|(offset, &b)| match b {
            b'0'..=b'3' => Ok(b - b'0'),
            _ => Err(Error::InvalidDigit {
                offset,
                found: char::from(b),
            }),
        })
        .collect()
}

/// Lexicographic successor of a tuple; wraps to all zeros.
pub(crate) fn increment(x: &mut [Symbol]) {
    for slot in x.iter_mut().rev() {
        if *slot < 3 {
            *slot += 1;
            return;
        }
        *slot = 0;
    }
}

/// `offsets[j][v]` = contribution of value `p_j(v)` at argument `j+1` to a table index.
pub(crate) fn arg_offsets(arity: usize, perms: &[Perm]) -> Vec<[usize; 4]> {
    perms
        .iter()
        .enumerate()
        .map(|(j, p)| {
            let s = pow4(arity - 1 - j);
            [
                p.apply(0) as usize * s,
                p.apply(1) as usize * s,
                p.apply(2) as usize * s,
                p.apply(3) as usize * s,
            ]
        })
        .collect()
}

/// Walks all argument tuples in index order, passing `(index, mapped index)`
/// where the mapped index is `sum_j offsets[j][x_j]`.
pub(crate) fn for_each_mapped(
    arity: usize,
    offsets: &[[usize; 4]],
    mut visit: impl FnMut(usize, usize),
) {
    let _ = try_for_each_mapped(arity, offsets, |idx, mapped| {
        visit(idx, mapped);
        true
    });
}

/// Like [`for_each_mapped`] but stops as soon as `visit` returns false;
/// returns whether the walk completed.
pub(crate) fn try_for_each_mapped(
    arity: usize,
    offsets: &[[usize; 4]],
    mut visit: impl FnMut(usize, usize) -> bool,
) -> bool {
    let mut x = vec![0usize; arity];
    let mut mapped: usize = offsets.iter().map(|o| o[0]).sum();
    for idx in 0..pow4(arity) {
        if !visit(idx, mapped) {
            return false;
        }
        // odometer step, updating the mapped index incrementally
        for j in (0..arity).rev() {
            let o = &offsets[j];
            mapped -= o[x[j]];
            if x[j] < 3 {
                x[j] += 1;
                mapped += o[x[j]];
                break;
            }
            x[j] = 0;
            mapped += o[0];
        }
    }
    true
}
