use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::perm::gset::{format_tuple, GSet, GSetKind, Tuple};
use crate::perm::presentation::{cyclic_presentation, standard_presentation_alternating, MAX_PRESENTED_DEGREE};
use crate::perm::{Permutation, Presentation};

/// Default cap on full element enumeration.
pub const DEFAULT_ENUMERATION_CAP: u64 = 25_000;

/// How membership in a group is decided without enumerating it.
#[derive(Clone, Debug)]
pub enum GroupKind {
    /// All even permutations moving only `support`.
    Alternating { support: Vec<u8> },
    /// All permutations moving only `support`.
    Symmetric { support: Vec<u8> },
    /// Elements of `parent` fixing `point` of the derived set `set`.
    Stabilizer { parent: PermGroup, set: GSetKind, point: Tuple },
    /// Known only through its generators.
    Generated,
}

/// Elements in breadth-first order from the identity, with a Cayley
/// spanning tree: `elements[i] = generators[via[i].1] * elements[via[i].0]`.
pub struct Enumeration {
    pub elements: Vec<Permutation>,
    index: HashMap<Permutation, u32>,
    via: Vec<(u32, u16)>,
    mul: OnceLock<Vec<u32>>,
}

impl Enumeration {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, g: &Permutation) -> Option<usize> {
        self.index.get(g).map(|&i| i as usize)
    }

    /// Generator indices `w` with `elements[i] = gens[w0] * gens[w1] * ...`.
    pub fn word(&self, mut i: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while i != 0 {
            let (parent, gen) = self.via[i];
            w.push(gen as usize);
            i = parent as usize;
        }
        w
    }

    /// Full multiplication table, `table[i * n + j] = index(elements[i] * elements[j])`.
    pub fn mul_table(&self) -> &[u32] {
        self.mul.get_or_init(|| {
            let n = self.len();
            let mut t = vec![0u32; n * n];
            for (i, a) in self.elements.iter().enumerate() {
                for (j, b) in self.elements.iter().enumerate() {
                    t[i * n + j] = self.index[&a.mul(b)];
                }
            }
            t
        })
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.index[&self.elements[i].inverse()] as usize
    }
}

struct GroupData {
    name: String,
    degree: usize,
    generators: Vec<Permutation>,
    order: u64,
    kind: GroupKind,
    enumeration: OnceLock<Arc<Enumeration>>,
    presentation: OnceLock<Presentation>,
}

/// A finite permutation group; cheap to clone.
#[derive(Clone)]
pub struct PermGroup(Arc<GroupData>);

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (degree {}, order {})", self.name(), self.degree(), self.order())
    }
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.degree() == other.degree()
                && self.order() == other.order()
                && self.generators() == other.generators())
    }
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn alternating_gens(degree: usize, support: &[u8]) -> Vec<Permutation> {
    if support.len() < 3 {
        return Vec::new();
    }
    let (a, b) = (support[0] as usize, support[1] as usize);
    support[2..]
        .iter()
        .map(|&c| Permutation::from_cycles(degree, &[&[a, b, c as usize]]).expect("3-cycle"))
        .collect()
}

fn symmetric_gens(degree: usize, support: &[u8]) -> Vec<Permutation> {
    match support.len() {
        0 | 1 => Vec::new(),
        2 => vec![Permutation::from_cycles(degree, &[&[support[0] as usize, support[1] as usize]]).unwrap()],
        _ => {
            let cyc: Vec<usize> = support.iter().map(|&x| x as usize).collect();
            vec![
                Permutation::from_cycles(degree, &[&[cyc[0], cyc[1]]]).unwrap(),
                Permutation::from_cycles(degree, &[&cyc]).unwrap(),
            ]
        }
    }
}

/// `A_n` on `{0, …, n-1}` generated by the 3-cycles `(1 2 k)`, `k = 3..n`
/// (1-based).
pub fn alternating_group(n: usize) -> Result<PermGroup> {
    if n < 3 {
        return Err(Error::invalid(format!("alternating group needs n >= 3, got {n}")));
    }
    Ok(PermGroup::alternating_on(format!("A{n}"), n, (0..n as u8).collect()))
}

pub fn symmetric_group(n: usize) -> Result<PermGroup> {
    if n < 1 {
        return Err(Error::invalid("symmetric group needs n >= 1"));
    }
    Ok(PermGroup::symmetric_on(format!("S{n}"), n, (0..n as u8).collect()))
}

/// Cyclic group of order `n` generated by an `n`-cycle.
pub fn cyclic_group(n: usize) -> Result<PermGroup> {
    if n < 1 {
        return Err(Error::invalid("cyclic group needs n >= 1"));
    }
    let cyc: Vec<usize> = (0..n).collect();
    let gens = if n == 1 { Vec::new() } else { vec![Permutation::from_cycles(n, &[&cyc])?] };
    Ok(PermGroup::from_parts(format!("C{n}"), n, gens, n as u64, GroupKind::Generated))
}

impl PermGroup {
    fn from_parts(name: String, degree: usize, generators: Vec<Permutation>, order: u64, kind: GroupKind) -> PermGroup {
        debug_assert!(generators.iter().all(|g| g.degree() == degree));
        PermGroup(Arc::new(GroupData { name, degree, generators, order, kind, enumeration: OnceLock::new(), presentation: OnceLock::new() }))
    }

    pub fn alternating_on(name: String, degree: usize, support: Vec<u8>) -> PermGroup {
        let k = support.len();
        let order = if k < 2 { 1 } else { factorial(k) / 2 };
        let gens = alternating_gens(degree, &support);
        PermGroup::from_parts(name, degree, gens, order, GroupKind::Alternating { support })
    }

    pub fn symmetric_on(name: String, degree: usize, support: Vec<u8>) -> PermGroup {
        let order = factorial(support.len());
        let gens = symmetric_gens(degree, &support);
        PermGroup::from_parts(name, degree, gens, order, GroupKind::Symmetric { support })
    }

    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup::from_parts("1".into(), degree, Vec::new(), 1, GroupKind::Generated)
    }

    /// Group generated by `generators`; its order is found by enumeration.
    pub fn generated(name: impl Into<String>, degree: usize, generators: Vec<Permutation>) -> Result<PermGroup> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::invalid(format!("generator {g} has degree {} != {degree}", g.degree())));
        }
        let probe = PermGroup::from_parts(name.into(), degree, generators, 0, GroupKind::Generated);
        let e = bfs_enumerate(&probe.0.generators, degree, DEFAULT_ENUMERATION_CAP)?;
        let order = e.len() as u64;
        let data = Arc::try_unwrap(probe.0).ok().expect("fresh Arc");
        let g = PermGroup(Arc::new(GroupData { order, ..data }));
        let _ = g.0.enumeration.set(Arc::new(e));
        Ok(g)
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.0.generators
    }

    pub fn order(&self) -> u64 {
        self.0.order
    }

    pub fn kind(&self) -> &GroupKind {
        &self.0.kind
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree())
    }

    pub fn is_full_alternating(&self) -> bool {
        matches!(&self.0.kind, GroupKind::Alternating { support } if support.len() == self.degree())
    }

    pub fn is_full_symmetric(&self) -> bool {
        matches!(&self.0.kind, GroupKind::Symmetric { support } if support.len() == self.degree())
    }

    pub fn enumerate(&self) -> Result<Arc<Enumeration>> {
        self.enumerate_with(DEFAULT_ENUMERATION_CAP)
    }

    pub fn enumerate_with(&self, cap: u64) -> Result<Arc<Enumeration>> {
        if let Some(e) = self.0.enumeration.get() {
            return Ok(e.clone());
        }
        if self.order() > cap {
            return Err(Error::ResourceLimit(format!(
                "{} has order {} above the enumeration cap {cap}",
                self.name(),
                self.order()
            )));
        }
        let e = bfs_enumerate(&self.0.generators, self.degree(), cap)?;
        if e.len() as u64 != self.order() {
            return Err(Error::Verification(format!(
                "{}: enumerated {} elements, expected {}",
                self.name(),
                e.len(),
                self.order()
            )));
        }
        let _ = self.0.enumeration.set(Arc::new(e));
        Ok(self.0.enumeration.get().expect("just set").clone())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree() {
            return false;
        }
        match &self.0.kind {
            GroupKind::Alternating { support } => fixes_outside(g, support) && g.is_even(),
            GroupKind::Symmetric { support } => fixes_outside(g, support),
            GroupKind::Stabilizer { parent, set, point } => {
                let s = GSet::new(*set, self.degree());
                parent.contains(g) && s.act_tuple(g, point) == s.canonical(point)
            }
            GroupKind::Generated => self
                .enumerate()
                .map(|e| e.index_of(g).is_some())
                .unwrap_or(false),
        }
    }

    pub fn is_subgroup_of(&self, g: &PermGroup) -> bool {
        self.degree() == g.degree()
            && self.generators().iter().all(|h| g.contains(h))
            && g.order().is_multiple_of(self.order())
    }

    /// Orbit of a derived-set element under this group.
    pub fn orbit(&self, set: &GSet, x: usize) -> Vec<usize> {
        set.orbit(self.generators(), x)
    }

    /// Stabilizer of element `x` of `set`. Generators come from filtering the
    /// enumerated elements when the group is small, from explicit
    /// constructions for full alternating or symmetric groups, and from
    /// Schreier generators otherwise. Order is `|G| / |orbit|`.
    pub fn stabilizer(&self, set: &GSet, x: usize) -> Result<PermGroup> {
        if set.degree() != self.degree() {
            return Err(Error::invalid("set degree differs from group degree"));
        }
        if x >= set.len() {
            return Err(Error::invalid(format!("element index {x} not in {:?}", set)));
        }
        let orbit_len = self.orbit(set, x).len() as u64;
        let order = self.order() / orbit_len;
        let point = set.element(x).clone();
        let name = format!("Stab({},{})", self.name(), format_tuple(set.kind(), &point));
        let degree = self.degree();
        let others = |fixed: &[u8]| -> Vec<u8> { (0..degree as u8).filter(|p| !fixed.contains(p)).collect() };

        let explicit = if self.is_full_alternating() || self.is_full_symmetric() {
            let alt = self.is_full_alternating();
            let pointwise = |fixed: &[u8]| {
                let rest = others(fixed);
                if alt {
                    PermGroup::alternating_on(name.clone(), degree, rest)
                } else {
                    PermGroup::symmetric_on(name.clone(), degree, rest)
                }
            };
            match set.kind() {
                GSetKind::Points | GSetKind::OrderedPairs => Some(pointwise(&point)),
                GSetKind::AllPairs if point[0] == point[1] => Some(pointwise(&point[..1])),
                GSetKind::AllPairs => Some(pointwise(&point)),
                GSetKind::UnorderedPairs => {
                    let rest = others(&point);
                    let (a, b) = (point[0] as usize, point[1] as usize);
                    let mut gens = if alt { alternating_gens(degree, &rest) } else { symmetric_gens(degree, &rest) };
                    if alt {
                        if rest.len() >= 2 {
                            gens.push(Permutation::from_cycles(degree, &[&[a, b], &[rest[0] as usize, rest[1] as usize]])?);
                        }
                    } else {
                        gens.push(Permutation::from_cycles(degree, &[&[a, b]])?);
                    }
                    if order <= DEFAULT_ENUMERATION_CAP || rest.len() >= 2 || !alt {
                        let kind = GroupKind::Stabilizer { parent: self.clone(), set: set.kind(), point: point.clone() };
                        Some(PermGroup::from_parts(name.clone(), degree, gens, order, kind))
                    } else {
                        None
                    }
                }
            }
        } else {
            None
        };
        if let Some(h) = explicit {
            // the explicit generators must generate a group of the right size
            if h.order() == order && h.order() <= DEFAULT_ENUMERATION_CAP {
                h.enumerate()?;
            }
            return Ok(h);
        }

        let kind = GroupKind::Stabilizer { parent: self.clone(), set: set.kind(), point: point.clone() };
        let gens = if self.order() <= DEFAULT_ENUMERATION_CAP {
            let e = self.enumerate()?;
            let stab: Vec<Permutation> = e.elements.iter().filter(|g| set.act(g, x) == x).cloned().collect();
            greedy_generators(&stab, degree)?
        } else {
            schreier_generators(self, set, x)
        };
        let h = PermGroup::from_parts(name, degree, gens, order, kind);
        if order <= DEFAULT_ENUMERATION_CAP {
            h.enumerate()?;
        }
        Ok(h)
    }

    /// A Sylow `p`-subgroup, grown greedily from `p`-elements in enumeration
    /// order. Returns the trivial group when `p` does not divide the order.
    pub fn sylow_subgroup(&self, p: u64) -> Result<PermGroup> {
        if p < 2 || !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        let mut target = 1u64;
        let mut rest = self.order();
        while rest.is_multiple_of(p) {
            rest /= p;
            target *= p;
        }
        let name = format!("Syl{p}({})", self.name());
        if target == 1 {
            return Ok(PermGroup::from_parts(name, self.degree(), Vec::new(), 1, GroupKind::Generated));
        }
        let e = self.enumerate()?;
        let candidates: Vec<&Permutation> = e
            .elements
            .iter()
            .filter(|g| {
                let o = g.order();
                o > 1 && is_power_of(o, p)
            })
            .collect();
        let mut gens: Vec<Permutation> = Vec::new();
        let mut closure: HashSet<Permutation> = HashSet::from([self.identity()]);
        while (closure.len() as u64) < target {
            let mut grown = false;
            for g in &candidates {
                if closure.contains(*g) {
                    continue;
                }
                let mut trial = gens.clone();
                trial.push((*g).clone());
                if let Some(c) = bounded_closure(&trial, self.degree(), target) {
                    if is_power_of(c.len() as u64, p) {
                        gens = trial;
                        closure = c;
                        grown = true;
                        break;
                    }
                }
            }
            if !grown {
                return Err(Error::Verification(format!("Sylow search stalled at order {}", closure.len())));
            }
        }
        let h = PermGroup::from_parts(name, self.degree(), gens, target, GroupKind::Generated);
        h.enumerate()?;
        Ok(h)
    }

    /// Lexicographically smallest element (as an image array) mapping the
    /// base element `x` to each element of its orbit, keyed by set index.
    pub fn transversal(&self, set: &GSet, x: usize) -> Result<Vec<(usize, Permutation)>> {
        let mut orbit = self.orbit(set, x);
        orbit.sort_unstable();
        if self.is_full_alternating() || self.is_full_symmetric() {
            let alt = self.is_full_alternating();
            let base = set.element(x).clone();
            let mut out = Vec::with_capacity(orbit.len());
            for &y in &orbit {
                let target = set.element(y).clone();
                let g = lex_min_mapping(self.degree(), &base, &target, set.kind().is_unordered(), alt)
                    .ok_or_else(|| Error::Verification("no constructive coset representative".into()))?;
                out.push((y, g));
            }
            return Ok(out);
        }
        let e = self.enumerate()?;
        let mut best: HashMap<usize, &Permutation> = HashMap::new();
        for g in &e.elements {
            let y = set.act(g, x);
            let slot = best.entry(y).or_insert(g);
            if g < *slot {
                *slot = g;
            }
        }
        Ok(orbit.into_iter().map(|y| (y, best[&y].clone())).collect())
    }

    /// A verified presentation whose check map hits this group's generators:
    /// the standard one for full alternating groups, `⟨t | t^n⟩` for cyclic
    /// groups, and otherwise one read off the Cayley graph.
    pub fn presentation(&self) -> Result<&Presentation> {
        if let Some(p) = self.0.presentation.get() {
            return Ok(p);
        }
        let p = if self.is_full_alternating() && (3..=MAX_PRESENTED_DEGREE).contains(&self.degree()) {
            standard_presentation_alternating(self.degree())?
        } else if self.generators().len() == 1 {
            cyclic_presentation(self)?
        } else {
            Presentation::from_cayley(self)?
        };
        let _ = self.0.presentation.set(p);
        Ok(self.0.presentation.get().expect("just set"))
    }

    /// Same generators, new name.
    pub fn renamed(&self, name: impl Into<String>) -> PermGroup {
        let d = &self.0;
        let g = PermGroup::from_parts(name.into(), d.degree, d.generators.clone(), d.order, d.kind.clone());
        if let Some(e) = d.enumeration.get() {
            let _ = g.0.enumeration.set(e.clone());
        }
        g
    }
}

fn fixes_outside(g: &Permutation, support: &[u8]) -> bool {
    (0..g.degree()).all(|x| support.contains(&(x as u8)) || g.apply(x) == x)
}

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn is_power_of(mut x: u64, p: u64) -> bool {
    while x.is_multiple_of(p) {
        x /= p;
    }
    x == 1
}

pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn bfs_enumerate(gens: &[Permutation], degree: usize, cap: u64) -> Result<Enumeration> {
    let id = Permutation::identity(degree);
    let mut elements = vec![id.clone()];
    let mut index: HashMap<Permutation, u32> = HashMap::from([(id, 0)]);
    let mut via = vec![(0u32, 0u16)];
    let mut k = 0;
    while k < elements.len() {
        for (gi, s) in gens.iter().enumerate() {
            let y = s.mul(&elements[k]);
            if !index.contains_key(&y) {
                if elements.len() as u64 >= cap {
                    return Err(Error::ResourceLimit(format!("enumeration exceeded cap {cap}")));
                }
                index.insert(y.clone(), elements.len() as u32);
                elements.push(y);
                via.push((k as u32, gi as u16));
            }
        }
        k += 1;
    }
    Ok(Enumeration { elements, index, via, mul: OnceLock::new() })
}

fn bounded_closure(gens: &[Permutation], degree: usize, bound: u64) -> Option<HashSet<Permutation>> {
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut queue = vec![id];
    let mut k = 0;
    while k < queue.len() {
        for s in gens {
            let y = s.mul(&queue[k]);
            if seen.insert(y.clone()) {
                if seen.len() as u64 > bound {
                    return None;
                }
                queue.push(y);
            }
        }
        k += 1;
    }
    Some(seen)
}

/// Picks generators from `elements` (in order) until they generate all of them.
fn greedy_generators(elements: &[Permutation], degree: usize) -> Result<Vec<Permutation>> {
    let mut gens: Vec<Permutation> = Vec::new();
    let mut closure: HashSet<Permutation> = HashSet::from([Permutation::identity(degree)]);
    for g in elements {
        if closure.len() == elements.len() {
            break;
        }
        if !closure.contains(g) {
            gens.push(g.clone());
            closure = bounded_closure(&gens, degree, elements.len() as u64)
                .ok_or_else(|| Error::Verification("element list is not a subgroup".into()))?;
        }
    }
    Ok(gens)
}

fn schreier_generators(g: &PermGroup, set: &GSet, x: usize) -> Vec<Permutation> {
    let mut rep: HashMap<usize, Permutation> = HashMap::from([(x, g.identity())]);
    let mut queue = vec![x];
    let mut k = 0;
    while k < queue.len() {
        let y = queue[k];
        for s in g.generators() {
            let z = set.act(s, y);
            if !rep.contains_key(&z) {
                let r = s.mul(&rep[&y]);
                rep.insert(z, r);
                queue.push(z);
            }
        }
        k += 1;
    }
    let mut out: Vec<Permutation> = Vec::new();
    let mut seen: HashSet<Permutation> = HashSet::new();
    for &y in &queue {
        for s in g.generators() {
            let z = set.act(s, y);
            let h = rep[&z].inverse().mul(&s.mul(&rep[&y]));
            if !h.is_identity() && seen.insert(h.clone()) {
                out.push(h);
            }
        }
    }
    out
}

/// Lex-smallest permutation (parity-restricted if `even`) sending the tuple
/// `base` to `target` (as a set when `unordered`).
fn lex_min_mapping(degree: usize, base: &[u8], target: &[u8], unordered: bool, even: bool) -> Option<Permutation> {
    let mut targets: Vec<Vec<u8>> = vec![target.to_vec()];
    if unordered && target.len() == 2 && target[0] != target[1] {
        targets.push(vec![target[1], target[0]]);
    }
    let mut best: Option<Permutation> = None;
    for t in targets {
        let mut images: Vec<Option<usize>> = vec![None; degree];
        let mut used = vec![false; degree];
        let mut ok = true;
        for (a, b) in base.iter().zip(&t) {
            let (a, b) = (*a as usize, *b as usize);
            match images[a] {
                Some(prev) if prev != b => ok = false,
                Some(_) => {}
                None => {
                    if used[b] {
                        ok = false;
                    } else {
                        images[a] = Some(b);
                        used[b] = true;
                    }
                }
            }
        }
        if !ok {
            continue;
        }
        let free_pos: Vec<usize> = (0..degree).filter(|&i| images[i].is_none()).collect();
        let free_val: Vec<usize> = (0..degree).filter(|&v| !used[v]).collect();
        for (p, v) in free_pos.iter().zip(&free_val) {
            images[*p] = Some(*v);
        }
        let mut imgs: Vec<usize> = images.into_iter().map(|x| x.expect("filled")).collect();
        let perm = Permutation::from_images(imgs.clone()).ok()?;
        let perm = if even && !perm.is_even() {
            if free_pos.len() < 2 {
                continue;
            }
            let (p, q) = (free_pos[free_pos.len() - 2], free_pos[free_pos.len() - 1]);
            imgs.swap(p, q);
            Permutation::from_images(imgs).ok()?
        } else {
            perm
        };
        if best.as_ref().is_none_or(|b| perm < *b) {
            best = Some(perm);
        }
    }
    best
}

/// The point-stabilizer embedding `A_{n-1} -> A_n` fixing the last letter.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub source: PermGroup,
    pub target: PermGroup,
    /// Image of `source` inside `target`, as a subgroup of degree `n`.
    pub image: PermGroup,
}

impl Embedding {
    pub fn map(&self, g: &Permutation) -> Permutation {
        g.extend(self.target.degree())
    }
}

pub fn embed_smaller_alternating(n: usize) -> Result<Embedding> {
    if n < 4 {
        return Err(Error::invalid(format!("embedding A_(n-1) -> A_n needs n >= 4, got {n}")));
    }
    let source = alternating_group(n - 1)?;
    let target = alternating_group(n)?;
    let image = PermGroup::alternating_on(format!("A{}<A{n}", n - 1), n, (0..(n - 1) as u8).collect());
    debug_assert!(source.generators().iter().zip(image.generators()).all(|(g, h)| g.extend(n) == *h));
    Ok(Embedding { source, target, image })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_orders() {
        assert_eq!(alternating_group(3).unwrap().order(), 3);
        assert_eq!(alternating_group(5).unwrap().enumerate().unwrap().len(), 60);
        let a7 = alternating_group(7).unwrap();
        let e = a7.enumerate().unwrap();
        assert_eq!(e.len(), 2520);
        assert!(e.elements.iter().all(Permutation::is_even));
        assert!(alternating_group(2).is_err());
    }

    #[test]
    fn enumeration_words_rebuild_elements() {
        let g = alternating_group(5).unwrap();
        let e = g.enumerate().unwrap();
        for i in [0, 7, 33, 59] {
            let w = e.word(i);
            let prod = w.iter().fold(g.identity(), |acc, &k| acc.mul(&g.generators()[k]));
            assert_eq!(prod, e.elements[i]);
        }
    }

    #[test]
    fn stabilizer_examples() {
        let a5 = alternating_group(5).unwrap();
        let pts = GSet::new(GSetKind::Points, 5);
        let h = a5.stabilizer(&pts, 4).unwrap();
        assert_eq!(h.order(), 12);
        assert_eq!(h.enumerate().unwrap().len(), 12);
        let pairs = GSet::new(GSetKind::UnorderedPairs, 5);
        let h = a5.stabilizer(&pairs, pairs.index_of(&[0, 1]).unwrap()).unwrap();
        assert_eq!(h.order(), 6);
        assert_eq!(h.enumerate().unwrap().len(), 6);
        let a4 = alternating_group(4).unwrap();
        let op = GSet::new(GSetKind::OrderedPairs, 4);
        assert_eq!(a4.stabilizer(&op, 0).unwrap().order(), 1);
        assert!(a4.stabilizer(&op, 99).is_err());
    }

    #[test]
    fn stabilizer_matches_filtering() {
        let a5 = alternating_group(5).unwrap();
        let e = a5.enumerate().unwrap();
        let pairs = GSet::new(GSetKind::UnorderedPairs, 5);
        let x = pairs.index_of(&[1, 3]).unwrap();
        let h = a5.stabilizer(&pairs, x).unwrap();
        let filtered: HashSet<_> = e.elements.iter().filter(|g| pairs.act(g, x) == x).cloned().collect();
        let mine: HashSet<_> = h.enumerate().unwrap().elements.iter().cloned().collect();
        assert_eq!(filtered, mine);
    }

    #[test]
    fn orbit_stabilizer_holds() {
        for n in [4, 5, 6] {
            let g = alternating_group(n).unwrap();
            for kind in [GSetKind::Points, GSetKind::UnorderedPairs, GSetKind::OrderedPairs, GSetKind::AllPairs] {
                let set = GSet::new(kind, n);
                for x in [0, set.len() - 1] {
                    let h = g.stabilizer(&set, x).unwrap();
                    let orbit = g.orbit(&set, x).len() as u64;
                    assert_eq!(orbit * h.enumerate().unwrap().len() as u64, g.order());
                }
            }
        }
    }

    #[test]
    fn sylow_orders() {
        let a4 = alternating_group(4).unwrap();
        assert_eq!(a4.sylow_subgroup(2).unwrap().order(), 4);
        assert_eq!(a4.sylow_subgroup(5).unwrap().order(), 1);
        assert_eq!(alternating_group(5).unwrap().sylow_subgroup(5).unwrap().order(), 5);
        let p = alternating_group(7).unwrap().sylow_subgroup(2).unwrap();
        assert_eq!(p.order(), 8);
        assert_eq!(p.enumerate().unwrap().len(), 8);
    }

    #[test]
    fn constructive_transversal_matches_enumeration() {
        for n in [4, 5] {
            let g = alternating_group(n).unwrap();
            let e = g.enumerate().unwrap();
            for kind in [GSetKind::Points, GSetKind::UnorderedPairs, GSetKind::AllPairs] {
                let set = GSet::new(kind, n);
                let x = 0;
                let fast = g.transversal(&set, x).unwrap();
                for (y, rep) in fast {
                    let slow = e.elements.iter().filter(|h| set.act(h, x) == y).min().unwrap();
                    assert_eq!(&rep, slow, "n={n} kind={kind:?} y={y}");
                }
            }
        }
    }

    #[test]
    fn embedding_is_point_stabilizer() {
        let emb = embed_smaller_alternating(5).unwrap();
        assert_eq!(emb.image.order(), 12);
        let pts = GSet::new(GSetKind::Points, 5);
        let stab = emb.target.stabilizer(&pts, 4).unwrap();
        for g in emb.source.enumerate().unwrap().elements.iter() {
            let img = emb.map(g);
            assert!(img.is_even());
            assert!(stab.contains(&img));
        }
        let emb4 = embed_smaller_alternating(4).unwrap();
        assert_eq!(emb4.image.enumerate().unwrap().len(), 3);
    }
}
