//! Finite sets derived from the natural action on points, materialized as
//! explicit lists with an index so orbits and stabilizers are uniform.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GSetKind {
    /// `{0, …, n-1}`.
    Points,
    /// `{i, j}` with `i < j`, lex order.
    UnorderedPairs,
    /// `(i, j)` with `i != j`, lex order.
    OrderedPairs,
    /// All `(i, j)`, diagonal included, lex order.
    AllPairs,
}

impl GSetKind {
    pub fn arity(self) -> usize {
        match self {
            GSetKind::Points => 1,
            _ => 2,
        }
    }

    pub fn is_unordered(self) -> bool {
        matches!(self, GSetKind::UnorderedPairs)
    }

    pub fn name(self) -> &'static str {
        match self {
            GSetKind::Points => "points",
            GSetKind::UnorderedPairs => "pairs",
            GSetKind::OrderedPairs => "opairs",
            GSetKind::AllPairs => "ypairs",
        }
    }

    pub fn from_name(s: &str) -> Option<GSetKind> {
        match s {
            "points" => Some(GSetKind::Points),
            "pairs" => Some(GSetKind::UnorderedPairs),
            "opairs" => Some(GSetKind::OrderedPairs),
            "ypairs" => Some(GSetKind::AllPairs),
            _ => None,
        }
    }
}

/// An element of a derived set: a tuple of points (sorted when unordered).
pub type Tuple = Vec<u8>;

pub fn format_tuple(kind: GSetKind, t: &[u8]) -> String {
    let pts: Vec<String> = t.iter().map(|x| (x + 1).to_string()).collect();
    match kind {
        GSetKind::Points => pts[0].clone(),
        GSetKind::UnorderedPairs => format!("{{{}}}", pts.join(",")),
        _ => format!("({})", pts.join(",")),
    }
}

#[derive(Clone)]
pub struct GSet {
    kind: GSetKind,
    degree: usize,
    elements: Vec<Tuple>,
    index: HashMap<Tuple, usize>,
}

impl fmt::Debug for GSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GSet({}, degree {}, size {})", self.kind.name(), self.degree, self.len())
    }
}

impl GSet {
    pub fn new(kind: GSetKind, degree: usize) -> GSet {
        let n = degree as u8;
        let elements: Vec<Tuple> = match kind {
            GSetKind::Points => (0..n).map(|i| vec![i]).collect(),
            GSetKind::UnorderedPairs => {
                (0..n).flat_map(|i| ((i + 1)..n).map(move |j| vec![i, j])).collect()
            }
            GSetKind::OrderedPairs => (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| vec![i, j]))
                .collect(),
            GSetKind::AllPairs => (0..n).flat_map(|i| (0..n).map(move |j| vec![i, j])).collect(),
        };
        let index = elements.iter().enumerate().map(|(k, t)| (t.clone(), k)).collect();
        GSet { kind, degree, elements, index }
    }

    pub fn kind(&self) -> GSetKind {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> &Tuple {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Tuple] {
        &self.elements
    }

    /// Canonical form of a tuple for this set (sorted if unordered).
    pub fn canonical(&self, t: &[u8]) -> Tuple {
        let mut t = t.to_vec();
        if self.kind.is_unordered() {
            t.sort_unstable();
        }
        t
    }

    pub fn index_of(&self, t: &[u8]) -> Result<usize> {
        let c = self.canonical(t);
        self.index
            .get(&c)
            .copied()
            .ok_or_else(|| Error::invalid(format!("{} is not an element of {}", format_tuple(self.kind, &c), self.kind.name())))
    }

    pub fn act_tuple(&self, g: &Permutation, t: &[u8]) -> Tuple {
        let moved: Vec<u8> = t.iter().map(|&x| g.apply(x as usize) as u8).collect();
        self.canonical(&moved)
    }

    /// Index of `g · element(i)`.
    pub fn act(&self, g: &Permutation, i: usize) -> usize {
        let t = self.act_tuple(g, &self.elements[i]);
        self.index[&t]
    }

    /// The permutation of the set induced by `g`.
    pub fn induced(&self, g: &Permutation) -> Vec<usize> {
        (0..self.len()).map(|i| self.act(g, i)).collect()
    }

    /// Orbit of `i` under `generators`, in BFS order.
    pub fn orbit(&self, generators: &[Permutation], i: usize) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut orbit = vec![i];
        seen[i] = true;
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            for g in generators {
                let y = self.act(g, x);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            k += 1;
        }
        orbit
    }
}
