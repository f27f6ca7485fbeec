//! Text file formats for groups, geometries and Kantor families.
//!
//! Group files: `group <order>` then either `table` with one row of
//! space-separated indices per element, or `law <name> <params>` naming a
//! built-in law. Geometry files: `geom <n_points> <n_lines>` then one
//! `L <id>: <point ids>` line per geometry line, with an optional
//! `order s t` trailer. Family files: `kantor <s> <t>`, an embedded group,
//! and `A <i>:` / `Astar <i>:` member lists. `#` starts a comment line.

use std::fmt::Write as _;

use thiserror::Error;

use crate::gq::PointLineGeometry;
use crate::grp::{heisenberg, suzuki_tits_group, FiniteGroup, GroupError};
use crate::kantor::KantorFamily;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {0}: {1}")]
    Parse(usize, String),
    #[error("unknown built-in law: {0}")]
    UnknownLaw(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Kantor(#[from] crate::kantor::KantorError),
}

pub fn write_group(group: &FiniteGroup) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "group {}", group.order());
    match builtin_law_line(group.name()) {
        Some(law) => {
            let _ = writeln!(out, "{law}");
        }
        None => {
            let _ = writeln!(out, "table");
            for a in group.elements() {
                let row: Vec<String> = group.elements().map(|b| group.mul(a, b).to_string()).collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
        }
    }
    out
}

fn builtin_law_line(name: &str) -> Option<String> {
    let mut parts = name.split_whitespace();
    match parts.next()? {
        "heisenberg" => Some(format!("law heisenberg {} {}", parts.next()?, parts.next()?)),
        "suzuki_tits" => Some(format!("law suzuki_tits {}", parts.next()?)),
        _ => None,
    }
}

pub fn read_group(text: &str) -> Result<FiniteGroup, FormatError> {
    let mut lines = numbered_lines(text);
    let (ln, header) = lines
        .next()
        .ok_or_else(|| FormatError::Parse(0, "empty group file".into()))?;
    let order: usize = match header.strip_prefix("group ") {
        Some(rest) => rest
            .trim()
            .parse()
            .map_err(|_| FormatError::Parse(ln, "bad order".into()))?,
        None => return Err(FormatError::Parse(ln, "expected `group <order>`".into())),
    };
    let (ln2, kind) = lines
        .next()
        .ok_or_else(|| FormatError::Parse(ln, "missing body".into()))?;
    if kind.trim() == "table" {
        let mut table: Vec<Vec<usize>> = Vec::with_capacity(order);
        for _ in 0..order {
            let (ln3, row) = lines
                .next()
                .ok_or_else(|| FormatError::Parse(ln2, "truncated table".into()))?;
            let parsed: Result<Vec<usize>, _> = row.split_whitespace().map(|t| t.parse()).collect();
            let parsed = parsed.map_err(|_| FormatError::Parse(ln3, "bad table row".into()))?;
            if parsed.len() != order {
                return Err(FormatError::Parse(ln3, format!("row has {} entries, expected {order}", parsed.len())));
            }
            table.push(parsed);
        }
        Ok(FiniteGroup::from_table(table)?)
    } else if let Some(rest) = kind.trim().strip_prefix("law ") {
        let toks: Vec<&str> = rest.split_whitespace().collect();
        match toks.as_slice() {
            ["heisenberg", n, q] => {
                let n: usize = n.parse().map_err(|_| FormatError::Parse(ln2, "bad n".into()))?;
                let q: usize = q.parse().map_err(|_| FormatError::Parse(ln2, "bad q".into()))?;
                Ok(heisenberg(n, q)?)
            }
            ["suzuki_tits", q] => {
                let q: usize = q.parse().map_err(|_| FormatError::Parse(ln2, "bad q".into()))?;
                Ok(suzuki_tits_group(q)?)
            }
            _ => Err(FormatError::UnknownLaw(rest.to_string())),
        }
    } else {
        Err(FormatError::Parse(ln2, "expected `table` or `law ...`".into()))
    }
}

pub fn write_geometry(geom: &PointLineGeometry, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    let _ = writeln!(out, "geom {} {}", geom.n_points(), geom.n_lines());
    for l in 0..geom.n_lines() {
        let pts: Vec<String> = geom.points_on_line(l).iter().map(|p| p.to_string()).collect();
        let _ = writeln!(out, "L {l}: {}", pts.join(" "));
    }
    if let Some((s, t)) = geom.order() {
        let _ = writeln!(out, "order {s} {t}");
    }
    out
}

pub fn read_geometry(text: &str) -> Result<PointLineGeometry, FormatError> {
    let mut lines = numbered_lines(text);
    let (ln, header) = lines
        .next()
        .ok_or_else(|| FormatError::Parse(0, "empty geometry file".into()))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 3 || toks[0] != "geom" {
        return Err(FormatError::Parse(ln, "expected `geom <n_points> <n_lines>`".into()));
    }
    let n_points: usize = toks[1].parse().map_err(|_| FormatError::Parse(ln, "bad point count".into()))?;
    let n_lines: usize = toks[2].parse().map_err(|_| FormatError::Parse(ln, "bad line count".into()))?;
    let mut line_sets: Vec<Vec<u32>> = Vec::with_capacity(n_lines);
    let mut order: Option<(usize, usize)> = None;
    for (ln, body) in lines {
        if let Some(rest) = body.trim().strip_prefix("order ") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(FormatError::Parse(ln, "bad order trailer".into()));
            }
            order = Some((
                parts[0].parse().map_err(|_| FormatError::Parse(ln, "bad s".into()))?,
                parts[1].parse().map_err(|_| FormatError::Parse(ln, "bad t".into()))?,
            ));
            continue;
        }
        let rest = body
            .trim()
            .strip_prefix('L')
            .and_then(|r| r.split_once(':'))
            .ok_or_else(|| FormatError::Parse(ln, "expected `L <id>: <points>`".into()))?;
        let pts: Result<Vec<u32>, _> = rest.1.split_whitespace().map(|t| t.parse()).collect();
        let pts = pts.map_err(|_| FormatError::Parse(ln, "bad point id".into()))?;
        if pts.iter().any(|&p| p as usize >= n_points) {
            return Err(FormatError::Parse(ln, "point id out of range".into()));
        }
        line_sets.push(pts);
    }
    if line_sets.len() != n_lines {
        return Err(FormatError::Parse(0, format!("{} lines declared, {} found", n_lines, line_sets.len())));
    }
    let mut geom = PointLineGeometry::from_lines(n_points, line_sets);
    if let Some((s, t)) = order {
        let verified = geom.verify_gq().map_err(|e| FormatError::Parse(0, e.to_string()))?;
        if verified != (s, t) {
            return Err(FormatError::Parse(0, format!("order trailer {s} {t} does not match verified {verified:?}")));
        }
    }
    Ok(geom)
}

pub fn write_family(fam: &KantorFamily) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "kantor {} {}", fam.s, fam.t);
    out.push_str(&write_group(&fam.group));
    for (i, a) in fam.f.iter().enumerate() {
        let ids: Vec<String> = a.members().iter().map(|m| m.to_string()).collect();
        let _ = writeln!(out, "A {i}: {}", ids.join(" "));
    }
    for (i, a) in fam.fstar.iter().enumerate() {
        let ids: Vec<String> = a.members().iter().map(|m| m.to_string()).collect();
        let _ = writeln!(out, "Astar {i}: {}", ids.join(" "));
    }
    out
}

pub fn read_family(text: &str) -> Result<KantorFamily, FormatError> {
    let mut lines: Vec<(usize, &str)> = numbered_lines(text).collect();
    if lines.is_empty() {
        return Err(FormatError::Parse(0, "empty family file".into()));
    }
    let (ln, header) = lines.remove(0);
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 3 || toks[0] != "kantor" {
        return Err(FormatError::Parse(ln, "expected `kantor <s> <t>`".into()));
    }
    let s: usize = toks[1].parse().map_err(|_| FormatError::Parse(ln, "bad s".into()))?;
    let t: usize = toks[2].parse().map_err(|_| FormatError::Parse(ln, "bad t".into()))?;

    // the embedded group runs until the first `A <i>:` line
    let split = lines
        .iter()
        .position(|(_, l)| l.trim_start().starts_with("A "))
        .ok_or_else(|| FormatError::Parse(ln, "missing family member lines".into()))?;
    let group_text: String =
        lines[..split].iter().map(|(_, l)| format!("{l}\n")).collect();
    let group = read_group(&group_text)?;

    let mut f: Vec<(usize, Vec<u32>)> = Vec::new();
    let mut fstar: Vec<(usize, Vec<u32>)> = Vec::new();
    for &(ln, body) in &lines[split..] {
        let body = body.trim();
        let (bucket, rest) = if let Some(r) = body.strip_prefix("Astar ") {
            (&mut fstar, r)
        } else if let Some(r) = body.strip_prefix("A ") {
            (&mut f, r)
        } else {
            return Err(FormatError::Parse(ln, "expected `A <i>:` or `Astar <i>:`".into()));
        };
        let (idx, ids) = rest
            .split_once(':')
            .ok_or_else(|| FormatError::Parse(ln, "missing `:`".into()))?;
        let idx: usize = idx.trim().parse().map_err(|_| FormatError::Parse(ln, "bad index".into()))?;
        let members: Result<Vec<u32>, _> = ids.split_whitespace().map(|x| x.parse()).collect();
        bucket.push((idx, members.map_err(|_| FormatError::Parse(ln, "bad member id".into()))?));
    }
    f.sort_by_key(|(i, _)| *i);
    fstar.sort_by_key(|(i, _)| *i);
    let f = f.into_iter().map(|(_, m)| group.subgroup_from_members(m)).collect();
    let fstar = fstar.into_iter().map(|(_, m)| group.subgroup_from_members(m)).collect();
    Ok(KantorFamily::new(group, f, fstar, s, t))
}

fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_round_trip_table() {
        let g = FiniteGroup::from_law(6, |a, b| (a + b) % 6).unwrap();
        let text = write_group(&g);
        let g2 = read_group(&text).unwrap();
        assert_eq!(g2.order(), 6);
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(g.mul(a, b), g2.mul(a, b));
            }
        }
    }

    #[test]
    fn group_round_trip_law() {
        let g = heisenberg(1, 3).unwrap();
        let text = write_group(&g);
        assert!(text.contains("law heisenberg 1 3"));
        let g2 = read_group(&text).unwrap();
        assert_eq!(g2.order(), 27);
    }

    #[test]
    fn geometry_round_trip() {
        let m = crate::classical::build_w(2).unwrap();
        let text = write_geometry(&m.geometry, Some("symplectic model"));
        let g2 = read_geometry(&text).unwrap();
        assert_eq!(g2.n_points(), m.geometry.n_points());
        assert_eq!(g2.order(), Some((2, 2)));
        for l in 0..g2.n_lines() {
            assert_eq!(g2.points_on_line(l), m.geometry.points_on_line(l));
        }
    }

    #[test]
    fn family_round_trip() {
        let fam = crate::kantor::classical_w_family(3).unwrap();
        let text = write_family(&fam);
        let fam2 = read_family(&text).unwrap();
        assert_eq!(fam2.s, 3);
        assert_eq!(fam2.t, 3);
        assert!(fam2.verify().unwrap().all_pass());
        for (a, b) in fam.f.iter().zip(&fam2.f) {
            assert_eq!(a.members(), b.members());
        }
    }

    #[test]
    fn malformed_inputs_error() {
        assert!(read_group("grp 5").is_err());
        assert!(read_group("group 3\ntable\n0 1 2\n1 2").is_err());
        assert!(read_geometry("geom 3 1\nL 0: 0 1 9").is_err());
        assert!(read_group("group 32\nlaw suzuki_tits 4").is_err());
    }
}
