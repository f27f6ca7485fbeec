//! Moufang i-root machinery: root groups inside a supplied action, the
//! local condition at a point, and the four MSTGQ axioms.

use crate::gq::PointLineGeometry;

use super::{AutmError, GeometryAutomorphism};

/// Interior of a root: point-line-point, or line-point-line for the dual
/// kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootSpec {
    IRoot { x: usize, line: usize, y: usize },
    DualIRoot { l1: usize, point: usize, l2: usize },
}

#[derive(Debug, Clone)]
pub struct MoufangVerdict {
    /// indices into the action of the interior fixer A(root).
    pub root_group: Vec<usize>,
    pub transitive: bool,
    pub sharply_transitive: bool,
}

impl MoufangVerdict {
    pub fn is_moufang(&self) -> bool {
        self.sharply_transitive
    }
}

fn fixes_point_linewise(geom: &PointLineGeometry, a: &GeometryAutomorphism, p: usize) -> bool {
    geom.lines_on_point(p).iter().all(|&l| a.line_perm[l as usize] == l)
}

fn fixes_line_pointwise(geom: &PointLineGeometry, a: &GeometryAutomorphism, l: usize) -> bool {
    geom.points_on_line(l).iter().all(|&p| a.point_perm[p as usize] == p)
}

/// The interior fixer of the root within the action, and its transitivity
/// on the panel M \ {y} (resp. dual panel).
pub fn moufang_iroot_check(
    geom: &PointLineGeometry,
    root: RootSpec,
    action: &[GeometryAutomorphism],
) -> Result<MoufangVerdict, AutmError> {
    match root {
        RootSpec::IRoot { x, line, y } => {
            if x == y || !geom.incident(x, line) || !geom.incident(y, line) {
                return Err(AutmError::Precondition("malformed i-root".into()));
            }
            let fixer: Vec<usize> = action
                .iter()
                .enumerate()
                .filter(|(_, a)| {
                    fixes_point_linewise(geom, a, x)
                        && fixes_point_linewise(geom, a, y)
                        && fixes_line_pointwise(geom, a, line)
                })
                .map(|(i, _)| i)
                .collect();
            // Panel: any line M on y besides the root line.
            let m = geom
                .lines_on_point(y)
                .iter()
                .map(|&l| l as usize)
                .find(|&l| l != line)
                .ok_or_else(|| AutmError::Precondition("no panel line".into()))?;
            let panel: Vec<usize> = geom
                .points_on_line(m)
                .iter()
                .map(|&p| p as usize)
                .filter(|&p| p != y)
                .collect();
            let base = panel[0];
            let mut orbit: std::collections::HashSet<usize> = Default::default();
            for &i in &fixer {
                orbit.insert(action[i].point_perm[base] as usize);
            }
            let transitive = panel.iter().all(|p| orbit.contains(p));
            let sharply = transitive && fixer.len() == panel.len() && orbit.len() == fixer.len();
            Ok(MoufangVerdict { root_group: fixer, transitive, sharply_transitive: sharply })
        }
        RootSpec::DualIRoot { l1, point, l2 } => {
            if l1 == l2 || !geom.incident(point, l1) || !geom.incident(point, l2) {
                return Err(AutmError::Precondition("malformed dual i-root".into()));
            }
            let fixer: Vec<usize> = action
                .iter()
                .enumerate()
                .filter(|(_, a)| {
                    fixes_line_pointwise(geom, a, l1)
                        && fixes_line_pointwise(geom, a, l2)
                        && fixes_point_linewise(geom, a, point)
                })
                .map(|(i, _)| i)
                .collect();
            let m = geom
                .points_on_line(l2)
                .iter()
                .map(|&p| p as usize)
                .find(|&p| p != point)
                .ok_or_else(|| AutmError::Precondition("no panel point".into()))?;
            let panel: Vec<usize> = geom
                .lines_on_point(m)
                .iter()
                .map(|&l| l as usize)
                .filter(|&l| l != l2)
                .collect();
            let base = panel[0];
            let mut orbit: std::collections::HashSet<usize> = Default::default();
            for &i in &fixer {
                orbit.insert(action[i].line_perm[base] as usize);
            }
            let transitive = panel.iter().all(|l| orbit.contains(l));
            let sharply = transitive && fixer.len() == panel.len() && orbit.len() == fixer.len();
            Ok(MoufangVerdict { root_group: fixer, transitive, sharply_transitive: sharply })
        }
    }
}

/// (M)_x: every i-root (x, L, y) on x is Moufang within the action.
/// Returns the verdict and the first failing root, if any.
pub fn m_x_check(
    geom: &PointLineGeometry,
    x: usize,
    action: &[GeometryAutomorphism],
) -> Result<(bool, Option<RootSpec>), AutmError> {
    for &l in geom.lines_on_point(x) {
        for &y in geom.points_on_line(l as usize) {
            if y as usize == x {
                continue;
            }
            let root = RootSpec::IRoot { x, line: l as usize, y: y as usize };
            if !moufang_iroot_check(geom, root, action)?.is_moufang() {
                return Ok((false, Some(root)));
            }
        }
    }
    Ok((true, None))
}

#[derive(Debug, Clone)]
pub struct MstgqReport {
    pub mstgq1: bool,
    pub mstgq1_witness: Option<RootSpec>,
    pub mstgq2: bool,
    pub mstgq3: bool,
    pub mstgq3_witness: Option<[usize; 3]>,
    pub mstgq1b: bool,
    pub is_mstgq: bool,
}

/// The four axioms, reported separately.
pub fn mstgq_check(
    geom: &PointLineGeometry,
    x: usize,
    action: &[GeometryAutomorphism],
) -> Result<MstgqReport, AutmError> {
    let (mstgq1, mstgq1_witness) = m_x_check(geom, x, action)?;

    // (MSTGQ2): for y ~ x != y, each nontrivial element of the root group
    // L(y) fixing an affine line U also fixes U n xy linewise.
    let mut mstgq2 = true;
    'm2: for y in geom.perp_point(x).ones() {
        if y == x {
            continue;
        }
        let xy = geom.line_through(x, y).expect("collinear pair has a line");
        let fixer: Vec<&GeometryAutomorphism> = action
            .iter()
            .filter(|a| {
                fixes_point_linewise(geom, a, x)
                    && fixes_point_linewise(geom, a, y)
                    && fixes_line_pointwise(geom, a, xy)
            })
            .collect();
        for a in fixer {
            if a.is_identity() {
                continue;
            }
            for l in 0..geom.n_lines() {
                if geom.incident(x, l) || a.line_perm[l] != l as u32 {
                    continue;
                }
                // U is affine and fixed; it meets xy at a point.
                let meet = geom
                    .points_on_line(l)
                    .iter()
                    .find(|&&p| geom.incident(p as usize, xy));
                if let Some(&p) = meet {
                    if !fixes_point_linewise(geom, a, p as usize) {
                        mstgq2 = false;
                        break 'm2;
                    }
                }
            }
        }
    }

    // (MSTGQ3): no line U on x is the unique center of a triad {V, W, X}
    // with V on x.
    let dual = geom.dualize();
    let mut mstgq3 = true;
    let mut mstgq3_witness = None;
    let on_x: Vec<usize> = geom.lines_on_point(x).iter().map(|&l| l as usize).collect();
    'm3: for &v in &on_x {
        for w in 0..geom.n_lines() {
            if w == v || dual.collinear(v, w) {
                continue;
            }
            for z in (w + 1)..geom.n_lines() {
                if z == v || dual.collinear(v, z) || dual.collinear(w, z) {
                    continue;
                }
                let centers = dual.perp_of_set(&[v, w, z]);
                if centers.len() == 1 && geom.incident(x, centers[0] as usize) {
                    mstgq3 = false;
                    mstgq3_witness = Some([v, w, z]);
                    break 'm3;
                }
            }
        }
    }

    // (MSTGQ1)^b: nontrivial elements fixing an affine line U fix
    // U n proj_U x linewise.
    let mut mstgq1b = true;
    'm1b: for a in action {
        if a.is_identity() {
            continue;
        }
        for l in 0..geom.n_lines() {
            if geom.incident(x, l) || a.line_perm[l] != l as u32 {
                continue;
            }
            let p = geom.proj_point(x, l);
            if !fixes_point_linewise(geom, a, p) {
                mstgq1b = false;
                break 'm1b;
            }
        }
    }

    Ok(MstgqReport {
        mstgq1,
        mstgq1_witness,
        mstgq2,
        mstgq3,
        mstgq3_witness,
        mstgq1b,
        is_mstgq: mstgq1 && mstgq2 && mstgq3,
    })
}
