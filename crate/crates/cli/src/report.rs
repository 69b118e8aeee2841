//! Human-readable renderings. Every report names the verdict on a line of its
//! own so text and JSON outputs can be compared mechanically.

use std::fmt::Write;

use k3cert_core::classifier::{Certificate, Verdict};
use k3cert_core::positivity::{BigNefVerdict, Decomposition};
use k3cert_core::qform::{IsotropyStatus, IsotropyVerdict};
use k3cert_core::{Condition, ConditionWitness, CorpusEntry, DivisorClass, Int, Lattice};

fn header(out: &mut String, lattice: &Lattice) {
    let _ = writeln!(out, "lattice: {lattice}");
    let _ = writeln!(
        out,
        "rank: {}  signature: {}  det: {}",
        lattice.rank(),
        lattice.signature(),
        lattice.discriminant()
    );
}

fn witness_lines(out: &mut String, w: &ConditionWitness) {
    for (i, p) in w.parts.iter().enumerate() {
        let _ = writeln!(out, "  L{} = {p}", i + 1);
    }
    for c in &w.checks {
        let _ = writeln!(out, "  check {}: {}", c.label, c.value);
    }
}

pub fn certificate(cert: &Certificate) -> String {
    let mut out = String::new();
    match cert.lattice() {
        Ok(l) => header(&mut out, &l),
        Err(_) => out.push_str("lattice: <invalid>\n"),
    }
    let _ = writeln!(out, "ample: {}", cert.ample);
    let _ = writeln!(out, "queried: {}", cert.queried);
    let _ = writeln!(out, "characteristic: {}", cert.characteristic);
    let _ = writeln!(out, "verdict: {}", cert.verdict.label());
    match &cert.verdict {
        Verdict::OddRank { rank } => {
            let _ = writeln!(out, "  anisotropic lattice of odd rank {rank}");
        }
        Verdict::Elliptic { witness, method } => {
            let _ = writeln!(out, "  isotropic class {witness} ({method:?})");
        }
        Verdict::Rank4Exceptional { witness, .. } | Verdict::Rank2Condition { witness, .. } => {
            witness_lines(&mut out, witness)
        }
        Verdict::InfiniteAutomorphismsDeduced => {
            out.push_str("  anisotropic rank-4 lattice not isometric to either exceptional lattice\n");
        }
        Verdict::Inconclusive { reasons } => {
            for r in reasons {
                let _ = writeln!(out, "  reason: {r}");
            }
        }
    }
    if cert.assumptions.is_empty() {
        out.push_str("assumptions: none\n");
    } else {
        out.push_str("assumptions:\n");
        for a in &cert.assumptions {
            let _ = writeln!(out, "  - {a}");
        }
    }
    out
}

pub fn condition(
    lattice: &Lattice,
    condition: Condition,
    target: &DivisorClass,
    found: Option<&ConditionWitness>,
    big_nef: Option<&BigNefVerdict>,
) -> String {
    let mut out = String::new();
    header(&mut out, lattice);
    if condition != Condition::A1 {
        let _ = writeln!(out, "class: {target}");
    }
    if let Some(b) = big_nef {
        let status = match b {
            BigNefVerdict::BigAndNef => "big and nef".to_string(),
            BigNefVerdict::NefNotBig => "nef, not big".to_string(),
            BigNefVerdict::NotNef(ob) => format!("not nef: {ob}"),
            BigNefVerdict::Unknown(why) => format!("undecided: {why}"),
        };
        let _ = writeln!(out, "big and nef: {status}");
    }
    match found {
        Some(w) => {
            let _ = writeln!(out, "{condition}: holds");
            witness_lines(&mut out, w);
        }
        None => {
            let _ = writeln!(out, "{condition}: no witness");
        }
    }
    out
}

pub fn decomposition(lattice: &Lattice, d: &DivisorClass, dec: &Decomposition) -> String {
    let mut out = String::new();
    header(&mut out, lattice);
    let _ = writeln!(out, "class: {d}");
    for p in &dec.nef_parts {
        let minimal = if p.minimal_verified { "minimal nef" } else { "nef, minimality unverified" };
        let _ = writeln!(out, "  {} × {} ({minimal})", p.multiplicity, p.class);
    }
    for m in &dec.residual {
        let _ = writeln!(out, "  {} × {} ((−2)-curve)", m.multiplicity, m.class);
    }
    match &dec.partial {
        None => out.push_str("decomposition: complete\n"),
        Some(p) => {
            let _ = writeln!(out, "decomposition: partial, stuck at {} ({})", p.stuck, p.reason);
        }
    }
    out
}

pub fn isotropy(lattice: &Lattice, verdict: &IsotropyVerdict) -> String {
    let mut out = String::new();
    header(&mut out, lattice);
    let line = match &verdict.status {
        IsotropyStatus::Isotropic { witness: Some(w) } => format!("isotropic: yes, witness {w}"),
        IsotropyStatus::Isotropic { witness: None } => "isotropic: yes, no witness within the search cap".into(),
        IsotropyStatus::Anisotropic { obstruction } => format!("isotropic: no ({obstruction})"),
        IsotropyStatus::Unknown => "isotropic: unknown".into(),
    };
    let _ = writeln!(out, "{line}");
    let _ = writeln!(out, "method: {:?}", verdict.method);
    out
}

pub fn roots(lattice: &Lattice, ample: &DivisorClass, bound: &Int, rows: &[(DivisorClass, Int, bool)]) -> String {
    let mut out = String::new();
    header(&mut out, lattice);
    let _ = writeln!(out, "ample: {ample}");
    let _ = writeln!(out, "(−2)-classes of degree 1..={bound}: {}", rows.len());
    for (r, d, irreducible) in rows {
        let kind = if *irreducible { "irreducible" } else { "reducible" };
        let _ = writeln!(out, "  degree {d}: {r} {kind}");
    }
    out
}

pub fn corpus(entries: &[CorpusEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        let _ = writeln!(
            out,
            "{:<12} rank {}  det {:>3}  ample {:<16} roots≤{} {:>3}  {}",
            e.name(),
            e.lattice.rank(),
            e.lattice.discriminant().to_string(),
            e.ample.to_string(),
            e.roots.degree_bound,
            e.roots.roots.len(),
            e.description
        );
    }
    out
}
