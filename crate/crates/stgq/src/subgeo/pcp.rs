//! Partial congruence partitions, their translation nets, and the
//! AI / AII factor analysis of H / S.

use crate::gq::PointLineGeometry;
use crate::grp::{FiniteGroup, Subgroup};

use super::{verify_net, SubgeoError};

/// A group of order s^2 with r >= 3 components of order s.
pub struct PcpSpec {
    pub group: FiniteGroup,
    pub components: Vec<Subgroup>,
}

#[derive(Debug)]
pub struct PcpReport {
    pub s: usize,
    pub r: usize,
    pub axioms_ok: bool,
    pub failures: Vec<String>,
    /// translation net (points = group elements, lines = component
    /// cosets), present when the axioms pass.
    pub net: Option<PointLineGeometry>,
    pub net_order_degree: Option<(usize, usize)>,
}

pub fn pcp_verify(spec: &PcpSpec) -> PcpReport {
    let g = &spec.group;
    let r = spec.components.len();
    let mut failures = Vec::new();
    let order = g.order();
    let s = (1..=order).find(|&s| s * s == order);
    let s = match s {
        Some(s) => s,
        None => {
            return PcpReport {
                s: 0,
                r,
                axioms_ok: false,
                failures: vec![format!("|G| = {order} is not a square")],
                net: None,
                net_order_degree: None,
            }
        }
    };
    if r < 3 {
        failures.push(format!("r = {r} < 3"));
    }
    for (i, c) in spec.components.iter().enumerate() {
        if c.order() != s {
            failures.push(format!("|G_{i}| = {} != s = {s}", c.order()));
        }
    }
    for i in 0..r {
        for j in (i + 1)..r {
            if spec.components[i].product_set(&spec.components[j]).len() != order {
                failures.push(format!("G_{i} G_{j} != G"));
            }
        }
    }
    if !failures.is_empty() {
        return PcpReport { s, r, axioms_ok: false, failures, net: None, net_order_degree: None };
    }

    // translation net: right cosets of each component
    let mut lines: Vec<Vec<u32>> = Vec::new();
    for c in &spec.components {
        let mut seen = vec![false; order];
        for e in 0..order {
            if seen[e] {
                continue;
            }
            let coset: Vec<u32> = c.members().iter().map(|&m| g.mul(m as usize, e) as u32).collect();
            for &x in &coset {
                seen[x as usize] = true;
            }
            lines.push(coset);
        }
    }
    let net = PointLineGeometry::from_lines(order, lines);
    let net_order_degree = verify_net(&net).ok();
    let axioms_ok = net_order_degree == Some((s, r));
    PcpReport { s, r, axioms_ok, failures, net: Some(net), net_order_degree }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorClass {
    /// H/S abelian.
    AI,
    /// H/S of nilpotency class 2.
    AII,
    Other,
}

#[derive(Debug)]
pub struct FactorAnalysis {
    pub class: FactorClass,
    pub t_elementary_abelian: bool,
    /// Omega_p (AI, non-elementary-abelian case) or Z(H/S) (AII): does it
    /// factorize every component pair?
    pub factor_subgroup_order: Option<usize>,
    pub factorizes: Option<bool>,
    /// the induced PCP {A S / S} in H/S.
    pub pcp: PcpReport,
}

/// Computes T = H/S, classifies it, and tests the factorization of the
/// designated subgroup against every pair of PCP components.
pub fn factor_analysis(
    h: &FiniteGroup,
    s: &Subgroup,
    family: &[Subgroup],
) -> Result<FactorAnalysis, SubgeoError> {
    let (t, proj) = h.quotient(s)?;
    let components: Vec<Subgroup> = family
        .iter()
        .map(|a| {
            let mut members: Vec<u32> = a.members().iter().map(|&m| proj[m as usize]).collect();
            members.sort_unstable();
            members.dedup();
            t.subgroup_from_members(members)
        })
        .collect();
    let spec = PcpSpec { group: t.clone(), components: components.clone() };
    let pcp = pcp_verify(&spec);

    let abelian = t.is_abelian();
    let series = t.lower_central_series();
    let class2 = series.len() >= 2 && series.last().map(|x| x.order()) == Some(1) && series.len() - 1 == 2;
    let class = if abelian {
        FactorClass::AI
    } else if class2 {
        FactorClass::AII
    } else {
        FactorClass::Other
    };
    let (p, _) = crate::grp::prime_power(t.order())
        .ok_or_else(|| SubgeoError::Precondition("H/S is not a p-group".into()))?;
    let t_elementary_abelian = abelian && t.exponent() == p;

    let factor_subgroup: Option<Subgroup> = match class {
        FactorClass::AI if !t_elementary_abelian => {
            // Omega_p = subgroup generated by the elements of order <= p
            let gens: Vec<usize> = t.elements().filter(|&g| t.element_order(g) <= p).collect();
            Some(t.subgroup_generate(&gens))
        }
        FactorClass::AII => Some(t.center()),
        _ => None,
    };
    let factorizes = factor_subgroup.as_ref().map(|n| {
        components.iter().enumerate().all(|(i, a)| {
            components.iter().enumerate().all(|(j, b)| {
                i == j || {
                    let an = a.intersect(n);
                    let bn = b.intersect(n);
                    an.product_set(&bn) == *n.members()
                }
            })
        })
    });

    Ok(FactorAnalysis {
        class,
        t_elementary_abelian,
        factor_subgroup_order: factor_subgroup.map(|n| n.order()),
        factorizes,
        pcp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pcp_in_elementary_abelian_9() {
        let g = FiniteGroup::from_law(9, |a, b| {
            let (a0, a1) = (a % 3, a / 3);
            let (b0, b1) = (b % 3, b / 3);
            (a0 + b0) % 3 + 3 * ((a1 + b1) % 3)
        })
        .unwrap();
        // four subgroups of order 3 pairwise spanning
        let comps = vec![
            g.subgroup_generate(&[1]),
            g.subgroup_generate(&[3]),
            g.subgroup_generate(&[4]),
            g.subgroup_generate(&[5]),
        ];
        let report = pcp_verify(&PcpSpec { group: g, components: comps });
        assert!(report.axioms_ok, "{:?}", report.failures);
        assert_eq!(report.net_order_degree, Some((3, 4)));
        let net = report.net.unwrap();
        assert_eq!(net.n_points(), 9);
        assert_eq!(net.n_lines(), 12);
    }

    #[test]
    fn r_two_rejected() {
        let g = FiniteGroup::from_law(9, |a, b| {
            let (a0, a1) = (a % 3, a / 3);
            let (b0, b1) = (b % 3, b / 3);
            (a0 + b0) % 3 + 3 * ((a1 + b1) % 3)
        })
        .unwrap();
        let comps = vec![g.subgroup_generate(&[1]), g.subgroup_generate(&[3])];
        let report = pcp_verify(&PcpSpec { group: g, components: comps });
        assert!(!report.axioms_ok);
        assert!(report.failures.iter().any(|f| f.contains("r = 2")));
    }
}
