//! Finite presentations with a check map to permutations, Todd–Coxeter coset
//! enumeration, and Fox-derivative expansion of relators.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::perm::{GSet, GSetKind, PermGroup, Permutation};

/// A letter is `k + 1` for generator `k` and `-(k + 1)` for its inverse.
pub type Letter = i32;
pub type Word = Vec<Letter>;

pub fn letter(generator: usize, inverse: bool) -> Letter {
    let l = generator as Letter + 1;
    if inverse {
        -l
    } else {
        l
    }
}

pub fn letter_generator(l: Letter) -> usize {
    (l.unsigned_abs() - 1) as usize
}

pub fn invert_word(w: &[Letter]) -> Word {
    w.iter().rev().map(|&l| -l).collect()
}

/// One term `sign · element · f(s_generator)` of a Fox expansion.
#[derive(Clone, Debug)]
pub struct FoxTerm {
    pub generator: usize,
    pub sign: i8,
    pub element: Permutation,
}

#[derive(Clone, Debug)]
pub struct Presentation {
    num_generators: usize,
    relators: Vec<Word>,
    images: Vec<Permutation>,
    fox: OnceLock<Vec<Vec<FoxTerm>>>,
}

impl Presentation {
    pub fn new(images: Vec<Permutation>, relators: Vec<Word>) -> Result<Presentation> {
        let k = images.len();
        if let Some(d) = images.first().map(Permutation::degree) {
            if images.iter().any(|g| g.degree() != d) {
                return Err(Error::invalid("check-map images differ in degree"));
            }
        }
        for r in &relators {
            if let Some(&l) = r.iter().find(|&&l| l == 0 || letter_generator(l) >= k) {
                return Err(Error::invalid(format!("relator letter {l} outside 1..={k}")));
            }
        }
        Ok(Presentation { num_generators: k, relators, images, fox: OnceLock::new() })
    }

    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn images(&self) -> &[Permutation] {
        &self.images
    }

    fn degree(&self) -> usize {
        self.images.first().map_or(0, Permutation::degree)
    }

    /// Image of `w` under the check map; the word is read left to right as a
    /// product.
    pub fn evaluate(&self, w: &[Letter]) -> Permutation {
        let mut acc = Permutation::identity(self.degree());
        for &l in w {
            let g = &self.images[letter_generator(l)];
            acc = if l > 0 { acc.mul(g) } else { acc.mul(&g.inverse()) };
        }
        acc
    }

    pub fn check_relators(&self) -> Result<()> {
        for (i, r) in self.relators.iter().enumerate() {
            let v = self.evaluate(r);
            if !v.is_identity() {
                return Err(Error::Verification(format!("relator {i} evaluates to {v}, not the identity")));
            }
        }
        Ok(())
    }

    /// Index in the presented group of the subgroup generated by `subgroup`.
    pub fn coset_index(&self, subgroup: &[Word], max_cosets: usize) -> Result<usize> {
        let mut t = CosetTable::new(self.num_generators, max_cosets);
        for w in subgroup {
            t.scan_and_fill(0, &t.columns(w))?;
        }
        let rels: Vec<Vec<usize>> = self.relators.iter().map(|r| t.columns(r)).collect();
        let mut c = 0;
        while c < t.rows.len() {
            for r in &rels {
                if !t.is_live(c) {
                    break;
                }
                t.scan_and_fill(c, r)?;
            }
            if t.is_live(c) {
                for x in 0..2 * self.num_generators {
                    if t.rows[c][x] == NONE {
                        t.define(c, x)?;
                    }
                }
            }
            c += 1;
        }
        Ok(t.live_count())
    }

    /// Order of the presented group by enumerating cosets of the trivial subgroup.
    pub fn presented_order(&self, max_cosets: usize) -> Result<usize> {
        self.coset_index(&[], max_cosets)
    }

    /// Fox expansion of every relator: for a cocycle `f` with
    /// `f(gh) = f(g) + g·f(h)`, `f(r) = Σ sign · element · f(s_generator)`.
    pub fn fox_expansions(&self) -> &[Vec<FoxTerm>] {
        self.fox.get_or_init(|| {
            self.relators
                .iter()
                .map(|r| {
                    let mut prefix = Permutation::identity(self.degree());
                    let mut terms = Vec::with_capacity(r.len());
                    for &l in r {
                        let k = letter_generator(l);
                        let g = &self.images[k];
                        if l > 0 {
                            terms.push(FoxTerm { generator: k, sign: 1, element: prefix.clone() });
                            prefix = prefix.mul(g);
                        } else {
                            prefix = prefix.mul(&g.inverse());
                            terms.push(FoxTerm { generator: k, sign: -1, element: prefix.clone() });
                        }
                    }
                    terms
                })
                .collect()
        })
    }

    /// Presentation read off the Cayley graph of an enumerated group: one
    /// relator `w(s·e)^{-1} s w(e)` per element `e` and generator `s`.
    pub fn from_cayley(group: &PermGroup) -> Result<Presentation> {
        let e = group.enumerate()?;
        let words: Vec<Word> = (0..e.len())
            .map(|i| e.word(i).into_iter().map(|k| letter(k, false)).collect())
            .collect();
        let mut relators = Vec::new();
        for (i, el) in e.elements.iter().enumerate() {
            for (k, s) in group.generators().iter().enumerate() {
                let j = e.index_of(&s.mul(el)).expect("closed under generators");
                let mut r = invert_word(&words[j]);
                r.push(letter(k, false));
                r.extend_from_slice(&words[i]);
                let r = free_reduce(&r);
                if !r.is_empty() && !relators.contains(&r) {
                    relators.push(r);
                }
            }
        }
        let p = Presentation::new(group.generators().to_vec(), relators)?;
        p.check_relators()?;
        Ok(p)
    }
}

pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// `⟨t | t^n⟩` mapped onto the generator of [`crate::perm::cyclic_group`].
pub fn cyclic_presentation(group: &PermGroup) -> Result<Presentation> {
    if group.generators().len() != 1 {
        return Err(Error::invalid(format!("{} is not given by a single generator", group.name())));
    }
    let t = &group.generators()[0];
    let p = Presentation::new(vec![t.clone()], vec![vec![1; t.order() as usize]])?;
    p.check_relators()?;
    Ok(p)
}

fn carmichael(n: usize) -> Result<Presentation> {
    let g = crate::perm::alternating_group(n)?;
    let k = g.generators().len();
    let mut relators: Vec<Word> = (0..k).map(|i| vec![letter(i, false); 3]).collect();
    for i in 0..k {
        for j in (i + 1)..k {
            let (a, b) = (letter(i, false), letter(j, false));
            relators.push(vec![a, b, a, b]);
        }
    }
    Presentation::new(g.generators().to_vec(), relators)
}

pub const MAX_PRESENTED_DEGREE: usize = 12;

/// Generators `x_k = (1 2 k+2)` with relators `x_i^3` and `(x_i x_j)^2`, the
/// check map hitting the generators of `alternating_group(n)`.
///
/// Verification is inductive over `m = 3..=n`: relators hold, the images act
/// transitively on `m` points, and the subgroup on the first `m - 3`
/// generators has index `m` (for `m = 3`, the group has order 3). Hence the
/// presented group has order at most `m!/2` and maps onto `A_m`.
pub fn standard_presentation_alternating(n: usize) -> Result<Presentation> {
    if !(3..=MAX_PRESENTED_DEGREE).contains(&n) {
        return Err(Error::invalid(format!("standard presentation covers 3 <= n <= {MAX_PRESENTED_DEGREE}, got {n}")));
    }
    for m in 3..=n {
        let p = carmichael(m)?;
        p.check_relators()?;
        let orbit = GSet::new(GSetKind::Points, m).orbit(p.images(), 0).len();
        if orbit != m {
            return Err(Error::Verification(format!("generators of A{m} are not transitive")));
        }
        let sub: Vec<Word> = (0..m - 3).map(|i| vec![letter(i, false)]).collect();
        let expected = if m == 3 { 3 } else { m };
        let idx = p.coset_index(&sub, 100_000)?;
        if idx != expected {
            return Err(Error::Verification(format!("coset index {idx} for A{m}, expected {expected}")));
        }
    }
    carmichael(n)
}

const NONE: u32 = u32::MAX;

/// HLT coset table with coincidence processing.
struct CosetTable {
    ngen: usize,
    rows: Vec<Vec<u32>>,
    parent: Vec<u32>,
    max: usize,
}

impl CosetTable {
    fn new(ngen: usize, max: usize) -> CosetTable {
        CosetTable { ngen, rows: vec![vec![NONE; 2 * ngen]], parent: vec![0], max }
    }

    fn columns(&self, w: &[Letter]) -> Vec<usize> {
        w.iter().map(|&l| 2 * letter_generator(l) + usize::from(l < 0)).collect()
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] as usize == c
    }

    fn live_count(&self) -> usize {
        (0..self.rows.len()).filter(|&c| self.is_live(c)).count()
    }

    fn define(&mut self, c: usize, x: usize) -> Result<()> {
        if self.rows.len() >= self.max {
            return Err(Error::ResourceLimit(format!("coset enumeration exceeded {} cosets", self.max)));
        }
        let d = self.rows.len();
        self.rows.push(vec![NONE; 2 * self.ngen]);
        self.parent.push(d as u32);
        self.rows[c][x] = d as u32;
        self.rows[d][x ^ 1] = c as u32;
        Ok(())
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<()> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0i64, w.len() as i64 - 1);
        loop {
            while i <= j && self.rows[f][w[i as usize]] != NONE {
                f = self.rows[f][w[i as usize]] as usize;
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i && self.rows[b][w[j as usize] ^ 1] != NONE {
                b = self.rows[b][w[j as usize] ^ 1] as usize;
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            if i == j {
                let x = w[i as usize];
                self.rows[f][x] = b as u32;
                self.rows[b][x ^ 1] = f as u32;
                return Ok(());
            }
            self.define(f, w[i as usize])?;
        }
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] as usize != r {
            r = self.parent[r] as usize;
        }
        let mut k = c;
        while self.parent[k] as usize != r {
            let next = self.parent[k] as usize;
            self.parent[k] = r as u32;
            k = next;
        }
        r
    }

    fn merge(&mut self, k: usize, l: usize, queue: &mut Vec<usize>) {
        let (k, l) = (self.rep(k), self.rep(l));
        if k == l {
            return;
        }
        let (lo, hi) = (k.min(l), k.max(l));
        self.parent[hi] = lo as u32;
        queue.push(hi);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..2 * self.ngen {
                let f = self.rows[e][x];
                if f == NONE {
                    continue;
                }
                let f = f as usize;
                self.rows[f][x ^ 1] = NONE;
                let (e1, f1) = (self.rep(e), self.rep(f));
                if self.rows[e1][x] != NONE {
                    let t = self.rows[e1][x] as usize;
                    self.merge(f1, t, &mut queue);
                } else if self.rows[f1][x ^ 1] != NONE {
                    let t = self.rows[f1][x ^ 1] as usize;
                    self.merge(e1, t, &mut queue);
                } else {
                    self.rows[e1][x] = f1 as u32;
                    self.rows[f1][x ^ 1] = e1 as u32;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{alternating_group, cyclic_group};

    #[test]
    fn a3_is_one_generator_cubed() {
        let p = standard_presentation_alternating(3).unwrap();
        assert_eq!(p.num_generators(), 1);
        assert_eq!(p.relators(), &[vec![1, 1, 1]]);
        assert_eq!(p.presented_order(100).unwrap(), 3);
    }

    #[test]
    fn small_presented_orders() {
        for (n, order) in [(4, 12), (5, 60), (6, 360), (7, 2520)] {
            let p = standard_presentation_alternating(n).unwrap();
            assert_eq!(p.presented_order(200_000).unwrap(), order, "n={n}");
            assert_eq!(p.images(), alternating_group(n).unwrap().generators());
        }
        assert!(standard_presentation_alternating(2).is_err());
        assert!(standard_presentation_alternating(13).is_err());
    }

    #[test]
    fn inductive_verification_reaches_twelve() {
        assert!(standard_presentation_alternating(12).is_ok());
    }

    #[test]
    fn missing_relator_is_detected() {
        // dropping x0^3 from the A4 presentation gives an infinite group; the
        // enumeration must hit its cap instead of answering
        let p = standard_presentation_alternating(4).unwrap();
        let rel: Vec<Word> = p.relators()[1..].to_vec();
        let q = Presentation::new(p.images().to_vec(), rel).unwrap();
        assert!(q.presented_order(5_000).unwrap_err().is_budget());
    }

    #[test]
    fn cayley_presentation_has_right_order() {
        let g = alternating_group(4).unwrap();
        let p = Presentation::from_cayley(&g).unwrap();
        assert_eq!(p.presented_order(10_000).unwrap(), 12);
        let c = cyclic_group(5).unwrap();
        assert_eq!(cyclic_presentation(&c).unwrap().presented_order(100).unwrap(), 5);
    }

    #[test]
    fn fox_terms_track_prefixes() {
        let c = cyclic_group(3).unwrap();
        let p = Presentation::new(c.generators().to_vec(), vec![vec![1, -1, 1]]).unwrap();
        let terms = &p.fox_expansions()[0];
        assert_eq!(terms.len(), 3);
        assert!(terms[0].element.is_identity() && terms[0].sign == 1);
        // t·t^{-1}: second term is -(t·t^{-1}) f(t) = -f(t)
        assert!(terms[1].element.is_identity() && terms[1].sign == -1);
        assert!(terms[2].element.is_identity() && terms[2].sign == 1);
    }
}
