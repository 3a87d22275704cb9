//! Exact autotopy groups and isotopy testing.
//!
//! An isotopy `t` maps a quasigroup `g` onto `f` when `f(t_1 x_1, ..., t_n x_n)
//! = t_0 g(x)` for every `x`. Fixing `t_0` and the image `b` of a single anchor
//! tuple `a` forces every other component: varying `x_i` alone gives
//! `t_i = s_i^{-1} t_0 r_i` with `r_i(x) = g(a with x at i)` and
//! `s_i(y) = f(b with y at i)`. The search below enumerates all `(b, t_0)`
//! pairs and verifies each forced candidate against the whole table.

use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::perm::{Isotopy, Perm, Symbol};
use crate::quasigroup::{arg_offsets, try_for_each_mapped, Quasigroup};

/// Default largest arity for exhaustive searches.
pub const DEFAULT_ARITY_CAP: usize = 6;

/// Groups up to this order keep their full element list.
pub const MATERIALIZE_LIMIT: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub max_arity: usize,
    pub materialize_limit: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_arity: DEFAULT_ARITY_CAP,
            materialize_limit: MATERIALIZE_LIMIT,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutotopyGroup {
    pub arity: usize,
    pub order: u64,
    pub generators: Vec<Isotopy>,
    /// Every element in lexicographic order, when the group is small enough.
    pub elements: Option<Vec<Isotopy>>,
}

impl AutotopyGroup {
    /// Builds a group record from a complete element list.
    pub fn from_elements(arity: usize, mut elements: Vec<Isotopy>) -> AutotopyGroup {
        elements.sort();
        elements.dedup();
        let generators = greedy_generators(arity, &elements);
        AutotopyGroup {
            arity,
            order: elements.len() as u64,
            generators,
            elements: Some(elements),
        }
    }

    pub fn elements(&self) -> Result<&[Isotopy]> {
        self.elements.as_deref().ok_or(Error::NotMaterialized)
    }
}

/// The isotopies of a quasigroup that fix one codeword.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerWitness {
    pub base: Vec<Symbol>,
    pub members: Vec<Isotopy>,
}

/// Group together with the orbit and stabilizer of the zero codeword
/// `(f(0,...,0), 0, ..., 0)`.
#[derive(Clone, Debug)]
pub struct AutotopyAnalysis {
    pub group: AutotopyGroup,
    pub orbit: Vec<Vec<Symbol>>,
    pub stabilizer: StabilizerWitness,
}

impl AutotopyAnalysis {
    pub fn is_transitive(&self) -> bool {
        self.orbit.len() == 1usize << (2 * self.group.arity)
    }
}

pub fn is_autotopy(q: &Quasigroup, theta: &Isotopy) -> Result<bool> {
    check_arity_match(q.arity(), theta.arity())?;
    Ok(maps_onto(q, q, theta))
}

/// True iff `apply_isotopy(dst, theta) = src`.
fn maps_onto(dst: &Quasigroup, src: &Quasigroup, theta: &Isotopy) -> bool {
    let t0 = theta.part(0);
    let offsets = arg_offsets(dst.arity(), &theta.parts()[1..]);
    let d = dst.table();
    let s = src.table();
    try_for_each_mapped(dst.arity(), &offsets, |idx, mapped| {
        d[mapped] == t0.apply(s[idx])
    })
}

/// Candidate generator for isotopies mapping `src` onto `dst` with a fixed anchor.
struct Solver<'a> {
    src: &'a Quasigroup,
    dst: &'a Quasigroup,
    /// sections of `src` through the anchor, one per argument
    src_sections: Vec<Perm>,
}

impl<'a> Solver<'a> {
    fn new(src: &'a Quasigroup, dst: &'a Quasigroup, anchor: usize) -> Self {
        let src_sections = (1..=src.arity())
            .map(|i| src.section_at(i, zero_digit(src, anchor, i)))
            .collect();
        Solver {
            src,
            dst,
            src_sections,
        }
    }

    /// The unique candidate sending the anchor to `target` with value part
    /// `t0`, if it verifies.
    fn solve(&self, target: usize, t0: Perm) -> Option<Isotopy> {
        let n = self.src.arity();
        let mut parts = Vec::with_capacity(n + 1);
        parts.push(t0);
        for i in 1..=n {
            let s = self.dst.section_at(i, zero_digit(self.dst, target, i));
            parts.push(s.inverse().compose(&t0).compose(&self.src_sections[i - 1]));
        }
        let theta = Isotopy::new(parts).expect("arity at least 1");
        maps_onto(self.dst, self.src, &theta).then_some(theta)
    }

    /// The value permutations compatible with sending the anchor to `target`.
    fn value_parts(&self, anchor_value: Symbol, target: usize) -> impl Iterator<Item = Perm> {
        let want = self.dst.value_at(target);
        Perm::all()
            .iter()
            .copied()
            .filter(move |p| p.apply(anchor_value) == want)
    }
}

fn zero_digit(q: &Quasigroup, index: usize, i: usize) -> usize {
    let s = q.stride(i);
    index - ((index / s) % 4) * s
}

fn check_arity_match(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::ArityMismatch { expected, found });
    }
    Ok(())
}

fn check_cap(arity: usize, opts: &SearchOptions) -> Result<()> {
    if arity > opts.max_arity {
        return Err(Error::CapExceeded {
            arity,
            cap: opts.max_arity,
        });
    }
    Ok(())
}

/// The unique autotopy sending the zero codeword to `target` with value
/// permutation `theta0`, if one exists.
pub fn propagate(q: &Quasigroup, target: &[Symbol], theta0: Perm) -> Result<Option<Isotopy>> {
    check_arity_match(q.arity() + 1, target.len())?;
    if target.iter().any(|&v| v > 3) || q.eval(&target[1..])? != target[0] {
        return Err(Error::NotInCode);
    }
    if theta0.apply(q.value_at(0)) != target[0] {
        return Err(Error::InconsistentValue);
    }
    let solver = Solver::new(q, q, 0);
    Ok(solver.solve(q.index_of(&target[1..]), theta0))
}

/// Every `(target index, value permutation)` pair that extends to an
/// autotopy, in enumeration order.
fn autotopy_keys(q: &Quasigroup) -> Vec<(u32, Perm)> {
    let solver = Solver::new(q, q, 0);
    let f0 = q.value_at(0);
    (0..q.size())
        .into_par_iter()
        .flat_map_iter(|b| {
            solver
                .value_parts(f0, b)
                .filter(|&t0| solver.solve(b, t0).is_some())
                .map(move |t0| (b as u32, t0))
                .collect::<Vec<_>>()
        })
        .collect()
}

pub fn autotopy_group(q: &Quasigroup) -> Result<AutotopyGroup> {
    Ok(analyze_autotopies_with(q, &SearchOptions::default())?.group)
}

pub fn autotopy_group_with(q: &Quasigroup, opts: &SearchOptions) -> Result<AutotopyGroup> {
    Ok(analyze_autotopies_with(q, opts)?.group)
}

pub fn analyze_autotopies(q: &Quasigroup) -> Result<AutotopyAnalysis> {
    analyze_autotopies_with(q, &SearchOptions::default())
}

pub fn analyze_autotopies_with(q: &Quasigroup, opts: &SearchOptions) -> Result<AutotopyAnalysis> {
    check_cap(q.arity(), opts)?;
    let n = q.arity();
    let keys = autotopy_keys(q);
    let solver = Solver::new(q, q, 0);
    let element =
        |&(b, t0): &(u32, Perm)| solver.solve(b as usize, t0).expect("recorded key verifies");

    let mut targets: Vec<u32> = keys.iter().map(|k| k.0).collect();
    targets.dedup();
    let orbit = targets
        .iter()
        .map(|&b| {
            let mut w = vec![q.value_at(b as usize)];
            w.extend(q.decode(b as usize));
            w
        })
        .collect();
    let stabilizer = StabilizerWitness {
        base: {
            let mut w = vec![q.value_at(0)];
            w.extend(std::iter::repeat_n(0, n));
            w
        },
        members: keys.iter().filter(|k| k.0 == 0).map(element).collect(),
    };

    let order = keys.len() as u64;
    let group = if order <= opts.materialize_limit {
        let elements: Vec<Isotopy> = keys.iter().map(element).collect();
        AutotopyGroup::from_elements(n, elements)
    } else {
        AutotopyGroup {
            arity: n,
            order,
            generators: orbit_generators(q, &keys, &stabilizer.members, element),
            elements: None,
        }
    };
    Ok(AutotopyAnalysis {
        group,
        orbit,
        stabilizer,
    })
}

/// The orbit of the zero codeword under the autotopy group.
pub fn zero_orbit(q: &Quasigroup) -> Result<Vec<Vec<Symbol>>> {
    Ok(analyze_autotopies(q)?.orbit)
}

pub fn is_transitive(q: &Quasigroup) -> Result<bool> {
    Ok(analyze_autotopies(q)?.is_transitive())
}

/// All autotopies fixing the codeword `word` coordinatewise.
pub fn stabilizer(q: &Quasigroup, word: &[Symbol]) -> Result<StabilizerWitness> {
    check_arity_match(q.arity() + 1, word.len())?;
    if word.iter().any(|&v| v > 3) || q.eval(&word[1..])? != word[0] {
        return Err(Error::NotInCode);
    }
    let anchor = q.index_of(&word[1..]);
    let solver = Solver::new(q, q, anchor);
    let members = solver
        .value_parts(word[0], anchor)
        .filter_map(|t0| solver.solve(anchor, t0))
        .collect();
    Ok(StabilizerWitness {
        base: word.to_vec(),
        members,
    })
}

/// An isotopy `t` with `apply_isotopy(q1, t) = q2`, or `None`.
pub fn are_isotopic(q1: &Quasigroup, q2: &Quasigroup) -> Result<Option<Isotopy>> {
    are_isotopic_with(q1, q2, &SearchOptions::default())
}

pub fn are_isotopic_with(
    q1: &Quasigroup,
    q2: &Quasigroup,
    opts: &SearchOptions,
) -> Result<Option<Isotopy>> {
    check_arity_match(q1.arity(), q2.arity())?;
    check_cap(q1.arity(), opts)?;
    let solver = Solver::new(q2, q1, 0);
    let g0 = q2.value_at(0);
    Ok((0..q1.size())
        .into_par_iter()
        .find_map_first(|b| solver.value_parts(g0, b).find_map(|t0| solver.solve(b, t0))))
}

/// Autotopy group of `compose_at(h, g, 1)` from those of `g` (arity `m`) and `h`.
///
/// Pairs `p` in `Atp(g)` and `t` in `Atp(h)` with `p_0 = t_1` combine into
/// `(t_0, p_1, ..., p_m, t_2, ...)`.
pub fn atp_join(atp_g: &AutotopyGroup, atp_h: &AutotopyGroup, m: usize) -> Result<AutotopyGroup> {
    check_arity_match(m, atp_g.arity)?;
    let g_elems = atp_g.elements()?;
    let h_elems = atp_h.elements()?;
    let mut by_first: HashMap<Perm, Vec<&Isotopy>> = HashMap::new();
    for t in h_elems {
        by_first.entry(t.part(1)).or_default().push(t);
    }
    let arity = atp_g.arity + atp_h.arity - 1;
    let mut elements = Vec::new();
    for p in g_elems {
        for t in by_first.get(&p.part(0)).into_iter().flatten() {
            let mut parts = Vec::with_capacity(arity + 1);
            parts.push(t.part(0));
            parts.extend_from_slice(&p.parts()[1..]);
            parts.extend_from_slice(&t.parts()[2..]);
            elements.push(Isotopy::new(parts)?);
        }
    }
    Ok(AutotopyGroup::from_elements(arity, elements))
}

/// All products of the generators, including the identity, sorted.
pub fn group_closure(arity: usize, generators: &[Isotopy]) -> Vec<Isotopy> {
    let id = Isotopy::identity(arity);
    let mut seen: HashSet<Isotopy> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = x.compose(g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<Isotopy> = seen.into_iter().collect();
    out.sort();
    out
}

/// Scans elements in order, keeping each one not generated by those kept so far.
fn greedy_generators(arity: usize, elements: &[Isotopy]) -> Vec<Isotopy> {
    let mut gens: Vec<Isotopy> = Vec::new();
    let mut span: HashSet<Isotopy> = HashSet::from([Isotopy::identity(arity)]);
    for e in elements {
        if span.len() == elements.len() {
            break;
        }
        if !span.contains(e) {
            gens.push(e.clone());
            span = group_closure(arity, &gens).into_iter().collect();
        }
    }
    gens
}

/// Generators for a group too large to list: stabilizer members plus
/// elements whose targets extend the orbit of the zero tuple.
fn orbit_generators(
    q: &Quasigroup,
    keys: &[(u32, Perm)],
    stabilizer: &[Isotopy],
    element: impl Fn(&(u32, Perm)) -> Isotopy,
) -> Vec<Isotopy> {
    let mut gens = greedy_generators(q.arity(), &{
        let mut s = stabilizer.to_vec();
        s.sort();
        s
    });
    let mut orbit = orbit_of_zero(q, &gens);
    for key in keys {
        if !orbit[key.0 as usize] {
            gens.push(element(key));
            orbit = orbit_of_zero(q, &gens);
        }
    }
    gens
}

fn orbit_of_zero(q: &Quasigroup, gens: &[Isotopy]) -> Vec<bool> {
    let maps: Vec<Vec<[usize; 4]>> = gens
        .iter()
        .map(|g| arg_offsets(q.arity(), &g.parts()[1..]))
        .collect();
    let mut seen = vec![false; q.size()];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(idx) = queue.pop_front() {
        let x = q.decode(idx);
        for offs in &maps {
            let image: usize = x.iter().zip(offs).map(|(&v, o)| o[v as usize]).sum();
            if !seen[image] {
                seen[image] = true;
                queue.push_back(image);
            }
        }
    }
    seen
}
