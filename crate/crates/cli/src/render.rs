use std::fmt::Write;

use kumtors::{BoundReport, CohCell, Table};

/// `(table, n, p, cell, provenance summary)`.
pub type Row = (Table, usize, usize, CohCell, String);

pub fn table_name(t: Table) -> &'static str {
    match t {
        Table::Main => "main",
        Table::Trivial => "trivial",
    }
}

fn grid(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|j| rows.iter().filter_map(|r| r.get(j)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (i, r) in rows.iter().enumerate() {
        let line: Vec<String> = r.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
        let _ = writeln!(out, "| {} |", line.join(" | "));
        if i == 0 {
            let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
            let _ = writeln!(out, "|-{}-|", rule.join("-|-"));
        }
    }
    out
}

/// Values and provenance of one table, rows `p`, columns `n`.
pub fn table(t: Table, n_min: usize, n_max: usize, cells: &[Row]) -> String {
    let title = match t {
        Table::Main => "H^p(A_n, H^(3-p)(K_(n-1)(A), Z))",
        Table::Trivial => "H^p(A_n, Z_triv)",
    };
    let find = |n: usize, p: usize| cells.iter().find(|(tt, nn, pp, _, _)| *tt == t && *nn == n && *pp == p);
    let header: Vec<String> = std::iter::once("p \\ n".to_string()).chain((n_min..=n_max).map(|n| n.to_string())).collect();
    let mut values = vec![header.clone()];
    let mut sources = vec![header];
    for p in 1..=3 {
        let mut v = vec![p.to_string()];
        let mut s = vec![p.to_string()];
        for n in n_min..=n_max {
            let c = find(n, p);
            v.push(c.map_or("-".into(), |c| c.3.status.to_string()));
            s.push(c.map_or("-".into(), |c| c.4.clone()));
        }
        values.push(v);
        sources.push(s);
    }
    format!("{title}\n{}\nprovenance\n{}\n", grid(&values), grid(&sources))
}

pub fn bound(r: &BoundReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "n = {}", r.n);
    for e in &r.exponents {
        let _ = writeln!(
            out,
            "  e_{} = {:<4} H^{}({}, {}) = {}{}",
            e.degree,
            e.exponent,
            e.cell.degree,
            e.cell.group,
            e.cell.module,
            e.cell.status,
            if e.exact { "" } else { " (bound)" }
        );
    }
    let _ = writeln!(out, "  spectral bound 2 e_1 e_2 e_3 = {} ({})", r.spectral_bound, r.spectral_bound_kind);
    let _ = writeln!(out, "  cover bound = {}", r.cover_bound);
    let _ = writeln!(out, "  annihilator = gcd = {}", r.annihilator);
    let _ = writeln!(
        out,
        "  closed form {}: {}",
        r.expected,
        if r.matches_expected { "agrees" } else { "DIFFERS" }
    );
    let _ = writeln!(out, "  certificate: {} steps", r.certificate.steps.len());
    out
}
