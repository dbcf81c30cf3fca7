//! Module expressions such as `wedge2(N)` or `ind(stab(pairs,{1,2}), sign({1,2}))`.
//!
//! Grammar:
//! ```text
//! expr  := name | name '(' arg (',' arg)* ')'
//! arg   := expr | integer | '{' int ',' int '}' | '(' int (',' int)* ')'
//! ```
//! Modules: `triv`, `sign`, `sign({i,j})`, `M`, `N`, `K`, `perm(points|pairs|opairs|ypairs)`,
//! `dsum(a,b,…)`, `tensor(a,b)`, `wedge2(a)`, `ind(H,a)`, `res(H,a)`, `kummer(n,q)`.
//! Subgroups: `stab(<set>,<element>)`, `A<k>` / `S<k>` on the first `k` points,
//! `syl(p)`, `1`. Points are 1-based.

use crate::error::{Error, Result};
use crate::gmodule::maps::module_k;
use crate::gmodule::module::{
    dsum, induce, kummer_module_over, module_n, natural_module, permutation_module, restrict, sign_module, tensor,
    trivial_module, wedge2, SignKind,
};
use crate::gmodule::GModule;
use crate::perm::{GSet, GSetKind, PermGroup};

#[derive(Clone, Debug, PartialEq)]
pub enum Ast {
    Call { name: String, pos: usize, args: Vec<Ast> },
    Num { value: u64, pos: usize },
    Set { items: Vec<u64>, pos: usize },
    Tuple { items: Vec<u64>, pos: usize },
}

impl Ast {
    pub fn pos(&self) -> usize {
        match self {
            Ast::Call { pos, .. } | Ast::Num { pos, .. } | Ast::Set { pos, .. } | Ast::Tuple { pos, .. } => *pos,
        }
    }
}

fn perr(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => Err(perr(self.pos, format!("expected '{}', found '{}'", c as char, x as char))),
            None => Err(perr(self.pos, format!("expected '{}', found end of input", c as char))),
        }
    }

    fn number(&mut self) -> Result<(u64, usize)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(perr(start, "expected a number"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse().map(|v| (v, start)).map_err(|_| perr(start, "number too large"))
    }

    fn int_list(&mut self, close: u8) -> Result<Vec<u64>> {
        let mut items = vec![self.number()?.0];
        while self.peek() == Some(b',') {
            self.pos += 1;
            items.push(self.number()?.0);
        }
        self.expect(close)?;
        Ok(items)
    }

    fn arg(&mut self) -> Result<Ast> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let (value, pos) = self.number()?;
                Ok(Ast::Num { value, pos })
            }
            Some(b'{') => {
                let pos = self.pos;
                self.pos += 1;
                Ok(Ast::Set { items: self.int_list(b'}')?, pos })
            }
            Some(b'(') => {
                let pos = self.pos;
                self.pos += 1;
                Ok(Ast::Tuple { items: self.int_list(b')')?, pos })
            }
            _ => self.expr(),
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return match self.src.get(start) {
                Some(c) => Err(perr(start, format!("unexpected '{}'", *c as char))),
                None => Err(perr(start, "unexpected end of input")),
            };
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii").to_string();
        let mut args = Vec::new();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            args.push(self.arg()?);
            while self.peek() == Some(b',') {
                self.pos += 1;
                args.push(self.arg()?);
            }
            self.expect(b')')?;
        }
        Ok(Ast::Call { name, pos: start, args })
    }
}

pub fn parse(src: &str) -> Result<Ast> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let ast = p.expr()?;
    if let Some(c) = p.peek() {
        return Err(perr(p.pos, format!("trailing input starting at '{}'", c as char)));
    }
    Ok(ast)
}

fn arity(name: &str, pos: usize, args: &[Ast], n: usize) -> Result<()> {
    if args.len() != n {
        return Err(perr(pos, format!("{name} takes {n} argument(s), got {}", args.len())));
    }
    Ok(())
}

fn point(g: &PermGroup, v: u64, pos: usize) -> Result<u8> {
    if v == 0 || v as usize > g.degree() {
        return Err(perr(pos, format!("point {v} outside 1..={}", g.degree())));
    }
    Ok((v - 1) as u8)
}

fn num(a: &Ast) -> Result<u64> {
    match a {
        Ast::Num { value, .. } => Ok(*value),
        other => Err(perr(other.pos(), "expected a number")),
    }
}

fn set_kind(a: &Ast) -> Result<GSetKind> {
    match a {
        Ast::Call { name, pos, args } if args.is_empty() => {
            GSetKind::from_name(name).ok_or_else(|| perr(*pos, format!("unknown set {name:?}; expected points, pairs, opairs or ypairs")))
        }
        other => Err(perr(other.pos(), "expected a set name")),
    }
}

fn element(g: &PermGroup, kind: GSetKind, a: &Ast) -> Result<Vec<u8>> {
    let (items, pos) = match (kind, a) {
        (GSetKind::Points, Ast::Num { value, pos }) => (vec![*value], *pos),
        (GSetKind::UnorderedPairs, Ast::Set { items, pos }) => (items.clone(), *pos),
        (GSetKind::OrderedPairs | GSetKind::AllPairs, Ast::Tuple { items, pos }) => (items.clone(), *pos),
        (_, other) => return Err(perr(other.pos(), format!("element does not match set {}", kind.name()))),
    };
    if items.len() != kind.arity() {
        return Err(perr(pos, format!("{} elements have {} entries", kind.name(), kind.arity())));
    }
    items.iter().map(|&v| point(g, v, pos)).collect()
}

/// Resolves a subgroup expression relative to `g`.
pub fn eval_subgroup(g: &PermGroup, a: &Ast) -> Result<PermGroup> {
    match a {
        Ast::Num { value: 1, .. } => Ok(PermGroup::trivial(g.degree())),
        Ast::Call { name, pos, args } if name == "stab" => {
            arity(name, *pos, args, 2)?;
            let kind = set_kind(&args[0])?;
            let set = GSet::new(kind, g.degree());
            let t = element(g, kind, &args[1])?;
            let x = set.index_of(&t).map_err(|e| perr(args[1].pos(), e.to_string()))?;
            g.stabilizer(&set, x)
        }
        Ast::Call { name, pos, args } if name == "syl" => {
            arity(name, *pos, args, 1)?;
            g.sylow_subgroup(num(&args[0])?)
        }
        Ast::Call { name, pos, args } if args.is_empty() && (name.starts_with('A') || name.starts_with('S')) => {
            let k: usize = name[1..].parse().map_err(|_| perr(*pos, format!("unknown subgroup {name:?}")))?;
            if k > g.degree() {
                return Err(perr(*pos, format!("{name} does not fit in degree {}", g.degree())));
            }
            let support: Vec<u8> = (0..k as u8).collect();
            let h = if name.starts_with('A') {
                PermGroup::alternating_on(name.clone(), g.degree(), support)
            } else {
                PermGroup::symmetric_on(name.clone(), g.degree(), support)
            };
            if !h.is_subgroup_of(g) {
                return Err(perr(*pos, format!("{name} is not a subgroup of {}", g.name())));
            }
            Ok(h)
        }
        other => Err(perr(other.pos(), "expected a subgroup: stab(..), syl(p), A<k>, S<k> or 1")),
    }
}

/// Builds the module described by `a` over `g` (`res` changes the group).
pub fn eval(g: &PermGroup, a: &Ast) -> Result<GModule> {
    let (name, pos, args) = match a {
        Ast::Call { name, pos, args } => (name.as_str(), *pos, args.as_slice()),
        other => return Err(perr(other.pos(), "expected a module expression")),
    };
    let at = |e: Error| match e {
        Error::Parse { .. } => e,
        other => perr(pos, other.to_string()),
    };
    match name {
        "triv" => {
            arity(name, pos, args, 0)?;
            Ok(trivial_module(g))
        }
        "sign" if args.is_empty() => sign_module(g, SignKind::Parity).map_err(at),
        "sign" => {
            arity(name, pos, args, 1)?;
            let p = element(g, GSetKind::UnorderedPairs, &args[0])?;
            sign_module(g, SignKind::PairSwap(p[0], p[1])).map_err(at)
        }
        "M" => {
            arity(name, pos, args, 0)?;
            Ok(natural_module(g))
        }
        "N" => {
            arity(name, pos, args, 0)?;
            module_n(g).map_err(at)
        }
        "K" => {
            arity(name, pos, args, 0)?;
            module_k(g).map_err(at)
        }
        "perm" => {
            arity(name, pos, args, 1)?;
            Ok(permutation_module(g, set_kind(&args[0])?))
        }
        "dsum" => {
            if args.is_empty() {
                return Err(perr(pos, "dsum needs at least one argument"));
            }
            let parts = args.iter().map(|x| eval(g, x)).collect::<Result<Vec<_>>>()?;
            dsum(&parts).map_err(at)
        }
        "tensor" => {
            arity(name, pos, args, 2)?;
            tensor(&eval(g, &args[0])?, &eval(g, &args[1])?).map_err(at)
        }
        "wedge2" => {
            arity(name, pos, args, 1)?;
            Ok(wedge2(&eval(g, &args[0])?))
        }
        "ind" => {
            arity(name, pos, args, 2)?;
            let h = eval_subgroup(g, &args[0])?;
            let w = eval(&h, &args[1])?;
            induce(g, &w).map_err(at)
        }
        "res" => {
            arity(name, pos, args, 2)?;
            let h = eval_subgroup(g, &args[0])?;
            restrict(&eval(g, &args[1])?, &h).map_err(at)
        }
        "kummer" => {
            arity(name, pos, args, 2)?;
            let n = num(&args[0])? as usize;
            if !g.is_full_alternating() || g.degree() != n {
                return Err(perr(pos, format!("kummer({n},..) lives over A{n}, not {}", g.name())));
            }
            kummer_module_over(g, num(&args[1])? as usize).map_err(at)
        }
        other => Err(perr(pos, format!("unknown module constructor {other:?}"))),
    }
}

/// Parses and builds in one step.
pub fn parse_module(g: &PermGroup, src: &str) -> Result<GModule> {
    eval(g, &parse(src)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::alternating_group;

    #[test]
    fn builds_common_expressions() {
        let g = alternating_group(5).unwrap();
        assert_eq!(parse_module(&g, "wedge2(N)").unwrap().rank(), 6);
        assert_eq!(parse_module(&g, "dsum(M, N, triv)").unwrap().rank(), 10);
        assert_eq!(parse_module(&g, " tensor( N ,N )").unwrap().rank(), 16);
        assert_eq!(parse_module(&g, "kummer(5,2)").unwrap().rank(), 4 * 6 + 6 * 16);
        let m = parse_module(&g, "ind(stab(pairs,{1,2}), sign({1,2}))").unwrap();
        assert_eq!(m.rank(), 10);
        m.verify().unwrap();
        let r = parse_module(&g, "res(stab(points,5), N)").unwrap();
        assert_eq!(r.group().order(), 12);
        assert_eq!(parse_module(&g, "ind(A4, triv)").unwrap().rank(), 5);
    }

    #[test]
    fn errors_carry_positions() {
        let g = alternating_group(5).unwrap();
        match parse_module(&g, "wedge2(N").unwrap_err() {
            Error::Parse { pos, .. } => assert_eq!(pos, 8),
            e => panic!("{e}"),
        }
        match parse_module(&g, "dsum(M, foo)").unwrap_err() {
            Error::Parse { pos, .. } => assert_eq!(pos, 8),
            e => panic!("{e}"),
        }
        match parse_module(&g, "ind(stab(points,9), triv)").unwrap_err() {
            Error::Parse { pos, .. } => assert_eq!(pos, 16),
            e => panic!("{e}"),
        }
        assert!(matches!(parse_module(&g, "M)"), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(parse_module(&g, "kummer(6,1)"), Err(Error::Parse { pos: 0, .. })));
    }
}
