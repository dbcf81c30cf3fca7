//! Permutation groups, derived actions, and presentations.

pub mod group;
pub mod gset;
pub mod permutation;
pub mod presentation;

pub use group::{
    alternating_group, cyclic_group, embed_smaller_alternating, prime_divisors, symmetric_group, Embedding,
    Enumeration, GroupKind, PermGroup, DEFAULT_ENUMERATION_CAP,
};
pub use gset::{GSet, GSetKind, Tuple};
pub use permutation::Permutation;
pub use presentation::{cyclic_presentation, standard_presentation_alternating, Presentation, Word};

/// Parses `A<n>`, `S<n>` or `C<n>`.
pub fn parse_group(name: &str) -> crate::Result<PermGroup> {
    let s = name.trim();
    let bad = || crate::Error::Parse { pos: 0, msg: format!("unknown group {s:?}; expected A<n>, S<n> or C<n>") };
    let (head, tail) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |(i, _)| i));
    let n: usize = tail.parse().map_err(|_| crate::Error::Parse { pos: 1, msg: format!("bad degree in {s:?}") })?;
    if n > 64 {
        return Err(crate::Error::invalid(format!("degree {n} too large")));
    }
    match head {
        "A" => alternating_group(n),
        "S" => symmetric_group(n),
        "C" => cyclic_group(n),
        _ => Err(bad()),
    }
}
