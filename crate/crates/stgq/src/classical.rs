//! Coordinate models of the classical quadrangles: the symplectic W(q) in
//! PG(3,q) and the Hermitian H(3,q^2) in PG(3,q^2).

use std::collections::HashMap;

use thiserror::Error;

use crate::autm::GeometryAutomorphism;
use crate::ff::{conjugation_map, field_build, FieldAutomorphism, FiniteField};
use crate::gq::{GqError, PointLineGeometry};

#[derive(Debug, Error)]
pub enum ClassicalError {
    #[error("q = {0} out of range for this model")]
    QOutOfRange(usize),
    #[error(transparent)]
    Field(#[from] crate::ff::FieldError),
    #[error(transparent)]
    Gq(#[from] GqError),
}

/// A built coordinate model: the verified geometry plus the projective
/// coordinates of each point.
pub struct ClassicalModel {
    pub geometry: PointLineGeometry,
    pub field: FiniteField,
    pub coords: Vec<[usize; 4]>,
    index: HashMap<[usize; 4], usize>,
}

impl ClassicalModel {
    pub fn point_index(&self, coords: [usize; 4]) -> Option<usize> {
        self.index.get(&normalize(&self.field, coords)).copied()
    }
}

/// Projective normalization: scale so the first nonzero coordinate is 1.
pub fn normalize(f: &FiniteField, v: [usize; 4]) -> [usize; 4] {
    let lead = v.iter().find(|&&c| c != 0).copied();
    match lead {
        None => v,
        Some(c) => {
            let inv = f.inv(c);
            [f.mul(v[0], inv), f.mul(v[1], inv), f.mul(v[2], inv), f.mul(v[3], inv)]
        }
    }
}

fn pg3_points(f: &FiniteField) -> Vec<[usize; 4]> {
    let q = f.order();
    let mut pts = Vec::new();
    for lead in 0..4 {
        // coords[lead] = 1, earlier zero, later free
        let free = 3 - lead;
        let count = q.pow(free as u32);
        for k in 0..count {
            let mut v = [0usize; 4];
            v[lead] = 1;
            let mut rest = k;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = rest % q;
                rest /= q;
            }
            pts.push(v);
        }
    }
    pts
}

/// The symplectic form X0 Y3 + X1 Y2 - X2 Y1 - X3 Y0.
pub fn symplectic_form(f: &FiniteField, x: &[usize; 4], y: &[usize; 4]) -> usize {
    let a = f.add(f.mul(x[0], y[3]), f.mul(x[1], y[2]));
    let b = f.add(f.mul(x[2], y[1]), f.mul(x[3], y[0]));
    f.sub(a, b)
}

/// Hermitian evaluation sum x_i^(q+1) over GF(q^2) where conj is x -> x^q:
/// on the diagonal the form is sum x_i conj(x_i).
fn hermitian_self(f: &FiniteField, conj: &FieldAutomorphism, x: &[usize; 4]) -> usize {
    x.iter().fold(0, |acc, &c| f.add(acc, f.mul(c, conj.apply(f, c))))
}

/// All q+1 points of the projective line through two distinct points.
fn line_points(f: &FiniteField, p: &[usize; 4], r: &[usize; 4]) -> Vec<[usize; 4]> {
    let mut out = vec![normalize(f, *r)];
    for lambda in 0..f.order() {
        let mut v = [0usize; 4];
        for i in 0..4 {
            v[i] = f.add(p[i], f.mul(lambda, r[i]));
        }
        out.push(normalize(f, v));
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn geometry_from_isotropic_pairs<FPred>(
    f: &FiniteField,
    points: Vec<[usize; 4]>,
    pair_ok: FPred,
) -> (PointLineGeometry, Vec<[usize; 4]>, HashMap<[usize; 4], usize>)
where
    FPred: Fn(&[usize; 4], &[usize; 4]) -> bool,
{
    let index: HashMap<[usize; 4], usize> =
        points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut lines: Vec<Vec<u32>> = Vec::new();
    let mut seen: std::collections::HashSet<Vec<u32>> = std::collections::HashSet::new();
    for (i, p) in points.iter().enumerate() {
        for r in points.iter().skip(i + 1) {
            if !pair_ok(p, r) {
                continue;
            }
            let pts = line_points(f, p, r);
            // the line must lie entirely in the point set
            let mut ids: Vec<u32> = Vec::with_capacity(pts.len());
            let mut inside = true;
            for v in &pts {
                match index.get(v) {
                    Some(&id) => ids.push(id as u32),
                    None => {
                        inside = false;
                        break;
                    }
                }
            }
            if !inside {
                continue;
            }
            ids.sort_unstable();
            if seen.insert(ids.clone()) {
                lines.push(ids);
            }
        }
    }
    lines.sort();
    (PointLineGeometry::from_lines(points.len(), lines), points, index)
}

/// W(q): all points of PG(3,q), lines the totally isotropic lines of the
/// symplectic polarity. A GQ of order (q, q).
pub fn build_w(q: usize) -> Result<ClassicalModel, ClassicalError> {
    if !matches!(q, 2 | 3 | 5) {
        return Err(ClassicalError::QOutOfRange(q));
    }
    let (p, e) = crate::grp::prime_power(q).ok_or(ClassicalError::QOutOfRange(q))?;
    let f = field_build(p as u32, e)?;
    let points = pg3_points(&f);
    let ff = f.clone();
    let (mut geom, coords, index) =
        geometry_from_isotropic_pairs(&f, points, |a, b| symplectic_form(&ff, a, b) == 0);
    let (s, t) = geom.verify_gq()?;
    debug_assert_eq!((s, t), (q, q));
    Ok(ClassicalModel { geometry: geom, field: f, coords, index })
}

/// H(3,q^2): the Hermitian variety X0^(q+1) + X1^(q+1) + X2^(q+1) + X3^(q+1) = 0
/// in PG(3,q^2) with the lines fully contained in it. A GQ of order (q^2, q).
pub fn build_h3(q: usize) -> Result<ClassicalModel, ClassicalError> {
    if q != 2 && q != 3 {
        return Err(ClassicalError::QOutOfRange(q));
    }
    let (p, e) = crate::grp::prime_power(q).ok_or(ClassicalError::QOutOfRange(q))?;
    let f = field_build(p as u32, 2 * e)?;
    let conj = conjugation_map(&f)?;
    let points: Vec<[usize; 4]> = pg3_points(&f)
        .into_iter()
        .filter(|x| hermitian_self(&f, &conj, x) == 0)
        .collect();
    let ff = f.clone();
    let cc = conj;
    // A projective line lies in the variety iff all its points do; seed the
    // pair scan with the polarized form being zero is equivalent, but the
    // full containment test below is what decides.
    let (mut geom, coords, index) = geometry_from_isotropic_pairs(&f, points, |a, b| {
        hermitian_pair(&ff, &cc, a, b) == 0
    });
    let (s, t) = geom.verify_gq()?;
    debug_assert_eq!((s, t), (q * q, q));
    Ok(ClassicalModel { geometry: geom, field: f, coords, index })
}

/// The sesquilinear pairing sum x_i y_i^q.
fn hermitian_pair(f: &FiniteField, conj: &FieldAutomorphism, x: &[usize; 4], y: &[usize; 4]) -> usize {
    (0..4).fold(0, |acc, i| f.add(acc, f.mul(x[i], conj.apply(f, y[i]))))
}

/// The symmetries of W(q) with center p: symplectic transvections
/// x -> x + lambda f(x, p) p. Returns q automorphisms forming a group
/// isomorphic to (F_q, +).
pub fn w_point_symmetries(model: &ClassicalModel, point: usize) -> Vec<GeometryAutomorphism> {
    let f = &model.field;
    let pc = model.coords[point];
    let geom = &model.geometry;
    let mut autos = Vec::new();
    for lambda in 0..f.order() {
        let point_perm: Vec<u32> = model
            .coords
            .iter()
            .map(|x| {
                let scale = f.mul(lambda, symplectic_form(f, x, &pc));
                let mut v = [0usize; 4];
                for i in 0..4 {
                    v[i] = f.add(x[i], f.mul(scale, pc[i]));
                }
                model.point_index(v).expect("transvection image in PG(3,q)") as u32
            })
            .collect();
        let line_perm: Vec<u32> = (0..geom.n_lines())
            .map(|l| {
                let pts = geom.points_on_line(l);
                let a = point_perm[pts[0] as usize] as usize;
                let b = point_perm[pts[1] as usize] as usize;
                geom.line_through(a, b).expect("transvection maps lines to lines") as u32
            })
            .collect();
        autos.push(GeometryAutomorphism { point_perm, line_perm });
    }
    autos
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w3_counts_and_order() {
        let m = build_w(3).unwrap();
        assert_eq!(m.geometry.n_points(), 40);
        assert_eq!(m.geometry.n_lines(), 40);
        assert_eq!(m.geometry.order(), Some((3, 3)));
    }

    #[test]
    fn w2_order() {
        let m = build_w(2).unwrap();
        assert_eq!(m.geometry.order(), Some((2, 2)));
        assert_eq!(m.geometry.n_points(), 15);
    }

    #[test]
    fn w3_form_vanishes_on_lines() {
        let m = build_w(3).unwrap();
        for l in 0..m.geometry.n_lines() {
            let pts = m.geometry.points_on_line(l);
            for (i, &a) in pts.iter().enumerate() {
                for &b in &pts[i + 1..] {
                    assert_eq!(
                        symplectic_form(&m.field, &m.coords[a as usize], &m.coords[b as usize]),
                        0
                    );
                }
            }
        }
    }

    #[test]
    fn h3_q2_counts() {
        let m = build_h3(2).unwrap();
        assert_eq!(m.geometry.n_points(), 45);
        assert_eq!(m.geometry.n_lines(), 27);
        assert_eq!(m.geometry.order(), Some((4, 2)));
        // every point on exactly t+1 = 3 lines
        for p in 0..45 {
            assert_eq!(m.geometry.lines_on_point(p).len(), 3);
        }
    }

    #[test]
    fn h3_variety_contains_all_line_points() {
        let m = build_h3(2).unwrap();
        let conj = conjugation_map(&m.field).unwrap();
        for l in 0..m.geometry.n_lines() {
            for &p in m.geometry.points_on_line(l) {
                assert_eq!(hermitian_self(&m.field, &conj, &m.coords[p as usize]), 0);
            }
        }
    }

    #[test]
    fn q_out_of_range() {
        assert!(build_w(7).is_err());
        assert!(build_w(4).is_err());
        assert!(build_w(1).is_err());
        assert!(build_h3(4).is_err());
    }

    #[test]
    fn transvections_are_symmetries() {
        let m = build_w(3).unwrap();
        let autos = w_point_symmetries(&m, 0);
        assert_eq!(autos.len(), 3);
        for a in &autos {
            a.verify_on(&m.geometry).unwrap();
            // fixes 0 linewise and 0^perp pointwise
            for &l in m.geometry.lines_on_point(0) {
                assert_eq!(a.line_perm[l as usize], l);
            }
            for p in m.geometry.perp_point(0).ones() {
                assert_eq!(a.point_perm[p] as usize, p);
            }
        }
    }
}
