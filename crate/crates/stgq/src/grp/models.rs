//! Coordinate models: the general Heisenberg groups H_n(q) and the
//! Suzuki-Tits elation group of order q^5.

use crate::ff::{field_build, tits_endomorphism, FieldAutomorphism, FiniteField};

use super::{FiniteGroup, GroupError};

/// Coordinate codec for H_n(q): triples (alpha, c, beta) with
/// alpha, beta in F_q^n and c in F_q, encoded base q with digit order
/// alpha_0..alpha_{n-1}, c, beta_0..beta_{n-1}.
#[derive(Debug, Clone)]
pub struct HeisenbergCoords {
    pub n: usize,
    pub field: FiniteField,
}

impl HeisenbergCoords {
    pub fn q(&self) -> usize {
        self.field.order()
    }

    pub fn group_order(&self) -> usize {
        self.q().pow(2 * self.n as u32 + 1)
    }

    pub fn encode(&self, alpha: &[usize], c: usize, beta: &[usize]) -> usize {
        let q = self.q();
        let mut idx = 0usize;
        for &b in beta.iter().rev() {
            idx = idx * q + b;
        }
        idx = idx * q + c;
        for &a in alpha.iter().rev() {
            idx = idx * q + a;
        }
        idx
    }

    pub fn decode(&self, mut idx: usize) -> (Vec<usize>, usize, Vec<usize>) {
        let q = self.q();
        let mut alpha = vec![0usize; self.n];
        let mut beta = vec![0usize; self.n];
        for slot in alpha.iter_mut() {
            *slot = idx % q;
            idx /= q;
        }
        let c = idx % q;
        idx /= q;
        for slot in beta.iter_mut() {
            *slot = idx % q;
            idx /= q;
        }
        (alpha, c, beta)
    }

    /// The matrix law (alpha,c,beta)(alpha',c',beta')
    /// = (alpha+alpha', c+c'+<alpha,beta'>, beta+beta').
    pub fn law(&self, x: usize, y: usize) -> usize {
        let f = &self.field;
        let (a1, c1, b1) = self.decode(x);
        let (a2, c2, b2) = self.decode(y);
        let alpha: Vec<usize> = a1.iter().zip(&a2).map(|(&u, &v)| f.add(u, v)).collect();
        let beta: Vec<usize> = b1.iter().zip(&b2).map(|(&u, &v)| f.add(u, v)).collect();
        let c = f.add(f.add(c1, c2), f.dot(&a1, &b2));
        self.encode(&alpha, c, &beta)
    }
}

/// Builds the general Heisenberg group H_n(q) of order q^(2n+1).
pub fn heisenberg(n: usize, q: usize) -> Result<FiniteGroup, GroupError> {
    if !(n == 1 && q <= 27 || n == 2 && q <= 9) {
        return Err(GroupError::Parameter(format!("heisenberg needs n=1,q<=27 or n=2,q<=9; got n={n}, q={q}")));
    }
    let (p, e) = super::prime_power(q)
        .ok_or_else(|| GroupError::Parameter(format!("q={q} is not a prime power")))?;
    let field = field_build(p as u32, e)?;
    let coords = HeisenbergCoords { n, field };
    let order = coords.group_order();

    // Additive generators of the alpha and beta coordinate blocks.
    let mut gens: Vec<u32> = Vec::new();
    let h = coords.field.degree();
    for i in 0..n {
        for j in 0..h {
            let unit = (p as usize).pow(j); // the field element x^j
            let mut alpha = vec![0usize; n];
            alpha[i] = unit;
            gens.push(coords.encode(&alpha, 0, &vec![0; n]) as u32);
            let mut beta = vec![0usize; n];
            beta[i] = unit;
            gens.push(coords.encode(&vec![0; n], 0, &beta) as u32);
        }
    }

    let law_coords = coords.clone();
    let label_coords = coords.clone();
    FiniteGroup::from_verified_law(
        order,
        Box::new(move |a, b| law_coords.law(a, b)),
        gens,
        format!("heisenberg {n} {q}"),
        Some(Box::new(move |g| {
            let (a, c, b) = label_coords.decode(g);
            format!("({a:?},{c},{b:?})")
        })),
    )
}

/// The Suzuki-Tits coordinate model over F_q, q an odd power of 2:
/// 5-tuples [a,b,c,d,e] with the collineation law and its 5x5 matrix form.
#[derive(Debug, Clone)]
pub struct SuzukiTitsModel {
    pub field: FiniteField,
    pub sigma: FieldAutomorphism,
}

impl SuzukiTitsModel {
    pub fn new(q: usize) -> Result<SuzukiTitsModel, GroupError> {
        let (p, e) = super::prime_power(q)
            .ok_or_else(|| GroupError::Parameter(format!("q={q} is not a power of 2")))?;
        if p != 2 || e % 2 == 0 {
            return Err(GroupError::Parameter(format!("q={q} is not an odd power of 2")));
        }
        let field = field_build(2, e)?;
        let sigma = tits_endomorphism(&field)?;
        Ok(SuzukiTitsModel { field, sigma })
    }

    pub fn q(&self) -> usize {
        self.field.order()
    }

    fn sig(&self, x: usize) -> usize {
        self.sigma.apply(&self.field, x)
    }

    /// f(a,b) = a^(sigma+2) + ab + b^sigma.
    pub fn f(&self, a: usize, b: usize) -> usize {
        let ff = &self.field;
        let t1 = ff.mul(self.sig(a), ff.mul(a, a));
        ff.add(ff.add(t1, ff.mul(a, b)), self.sig(b))
    }

    pub fn encode(&self, v: [usize; 5]) -> usize {
        let q = self.q();
        v.iter().rev().fold(0usize, |acc, &x| acc * q + x)
    }

    pub fn decode(&self, mut idx: usize) -> [usize; 5] {
        let q = self.q();
        let mut v = [0usize; 5];
        for slot in v.iter_mut() {
            *slot = idx % q;
            idx /= q;
        }
        v
    }

    /// The group law on coordinate tuples.
    pub fn law(&self, u: [usize; 5], v: [usize; 5]) -> [usize; 5] {
        let ff = &self.field;
        let [a, b, c, d, e] = u;
        let [a2, b2, c2, d2, e2] = v;
        let a2s = self.sig(a2);
        let na = ff.add(a, a2);
        let nb = ff.add(ff.add(b, b2), ff.mul(a, a2s));
        // c + c' + d(a'^(sigma+1) + b') + e a'
        let a2s1 = ff.mul(a2s, a2);
        let nc = ff.add(
            ff.add(c, c2),
            ff.add(ff.mul(d, ff.add(a2s1, b2)), ff.mul(e, a2)),
        );
        let nd = ff.add(d, d2);
        let ne = ff.add(ff.add(e, e2), ff.mul(d, a2s));
        [na, nb, nc, nd, ne]
    }

    /// The 5x5 matrix of the collineation [a,b,c,d,e].
    pub fn matrix(&self, v: [usize; 5]) -> [[usize; 5]; 5] {
        let ff = &self.field;
        let [a, b, c, d, e] = v;
        let mut m = [[0usize; 5]; 5];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        m[0][2] = c;
        m[0][3] = d;
        m[0][4] = e;
        m[1][2] = self.f(a, b);
        m[1][3] = a;
        m[1][4] = b;
        m[3][2] = ff.add(ff.mul(self.sig(a), a), b);
        m[3][4] = self.sig(a);
        m[4][2] = a;
        m
    }

    pub fn matrix_mul(&self, x: &[[usize; 5]; 5], y: &[[usize; 5]; 5]) -> [[usize; 5]; 5] {
        let ff = &self.field;
        let mut out = [[0usize; 5]; 5];
        for i in 0..5 {
            for j in 0..5 {
                let mut acc = 0;
                for (k, yk) in y.iter().enumerate() {
                    acc = ff.add(acc, ff.mul(x[i][k], yk[j]));
                }
                out[i][j] = acc;
            }
        }
        out
    }
}

/// Matrix-model product of two coordinate tuples: multiplies the 5x5
/// matrices and reads the coordinates back off the product. Independent of
/// the closed-form law, so it serves as an oracle for it.
pub fn suzuki_tits_matrix_product(model: &SuzukiTitsModel, u: [usize; 5], v: [usize; 5]) -> [usize; 5] {
    let m = model.matrix_mul(&model.matrix(u), &model.matrix(v));
    [m[1][3], m[1][4], m[0][2], m[0][3], m[0][4]]
}

/// Builds the Suzuki-Tits group of order q^5 for q in {2, 8}.
pub fn suzuki_tits_group(q: usize) -> Result<FiniteGroup, GroupError> {
    if q != 2 && q != 8 {
        return Err(GroupError::Parameter(format!("suzuki_tits_group supports q in {{2,8}}, got {q}")));
    }
    let model = SuzukiTitsModel::new(q)?;
    let order = q.pow(5);

    let mut gens: Vec<u32> = Vec::new();
    let h = model.field.degree();
    for slot in 0..5 {
        for j in 0..h {
            let mut v = [0usize; 5];
            v[slot] = 2usize.pow(j); // x^j in GF(2^h)
            gens.push(model.encode(v) as u32);
        }
    }

    let law_model = model.clone();
    let label_model = model.clone();
    FiniteGroup::from_verified_law(
        order,
        Box::new(move |a, b| law_model.encode(law_model.law(law_model.decode(a), law_model.decode(b)))),
        gens,
        format!("suzuki_tits {q}"),
        Some(Box::new(move |g| format!("{:?}", label_model.decode(g)))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::SplitMix64;

    #[test]
    fn heisenberg_1_3_basics() {
        let g = heisenberg(1, 3).unwrap();
        assert_eq!(g.order(), 27);
        let z = g.center();
        assert_eq!(z.order(), 3);
        // Z(H) = {(0,c,0)}
        let coords = HeisenbergCoords { n: 1, field: crate::ff::field_build(3, 1).unwrap() };
        for &m in z.members() {
            let (a, _, b) = coords.decode(m as usize);
            assert!(a.iter().all(|&x| x == 0) && b.iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn heisenberg_inverse_formula() {
        // (alpha,c,beta)^-1 = (-alpha, -c + alpha.beta^T, -beta)
        let g = heisenberg(2, 3).unwrap();
        let f = crate::ff::field_build(3, 1).unwrap();
        let coords = HeisenbergCoords { n: 2, field: f.clone() };
        let mut rng = SplitMix64::new(7);
        for _ in 0..20 {
            let x = rng.below(g.order());
            let (a, c, b) = coords.decode(x);
            let na: Vec<usize> = a.iter().map(|&v| f.neg(v)).collect();
            let nb: Vec<usize> = b.iter().map(|&v| f.neg(v)).collect();
            let nc = f.add(f.neg(c), f.dot(&a, &b));
            assert_eq!(g.inv(x), coords.encode(&na, nc, &nb));
        }
    }

    #[test]
    fn heisenberg_center_equals_derived_class_two() {
        for (n, q) in [(1, 3), (1, 5), (2, 2)] {
            let g = heisenberg(n, q).unwrap();
            let z = g.center();
            let d = g.derived_subgroup();
            assert_eq!(z.members(), d.members(), "H_{n}({q})");
            assert_eq!(z.order(), q);
            let series = g.lower_central_series();
            assert_eq!(series.len(), 3); // G > [G,G] > 1
        }
    }

    #[test]
    fn heisenberg_exponents() {
        assert_eq!(heisenberg(1, 3).unwrap().exponent(), 3);
        assert_eq!(heisenberg(2, 2).unwrap().exponent(), 4);
        assert_eq!(heisenberg(1, 5).unwrap().exponent(), 5);
    }

    #[test]
    fn heisenberg_rejects_out_of_range() {
        assert!(heisenberg(1, 29).is_err());
        assert!(heisenberg(2, 16).is_err());
        assert!(heisenberg(3, 2).is_err());
        assert!(heisenberg(1, 6).is_err());
    }

    #[test]
    fn suzuki_tits_q2() {
        let g = suzuki_tits_group(2).unwrap();
        assert_eq!(g.order(), 32);
        let z = g.center();
        let model = SuzukiTitsModel::new(2).unwrap();
        // Z(G) = {[0,0,c,0,0]}
        assert_eq!(z.order(), 2);
        for &m in z.members() {
            let v = model.decode(m as usize);
            assert_eq!([v[0], v[1], v[3], v[4]], [0, 0, 0, 0]);
        }
    }

    #[test]
    fn suzuki_tits_law_matches_matrix_model() {
        let model = SuzukiTitsModel::new(8).unwrap();
        let mut rng = SplitMix64::new(99);
        for _ in 0..2000 {
            let u = model.decode(rng.below(8usize.pow(5)));
            let v = model.decode(rng.below(8usize.pow(5)));
            assert_eq!(model.law(u, v), suzuki_tits_matrix_product(&model, u, v));
        }
    }

    #[test]
    fn suzuki_tits_rejects_bad_q() {
        assert!(suzuki_tits_group(4).is_err());
        assert!(suzuki_tits_group(3).is_err());
        assert!(suzuki_tits_group(32).is_err());
    }
}
