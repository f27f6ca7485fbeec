//! Cross-model checks that tie the coordinate models, coset geometries
//! and analysis operations together on the worked instances.

use stgq::autm::{centrality_check, fix_profile, m_x_check, moufang_iroot_check, mstgq_check, RootSpec, TaxonomyFix1};
use stgq::classical::{build_h3, build_w};
use stgq::gq::gq_isomorphic;
use stgq::grp::{group_isomorphic, heisenberg, suzuki_tits_group, HeisenbergCoords};
use stgq::kantor::{classical_w_family, coset_geometry, search_kantor_families, suzuki_tits_family};
use stgq::subgeo::{f_factor_type, frattini_geometry, subgq_intersection_classify, substructure_classify,
    twist, FFactorType, IntersectionShape, SubstructureClass};

#[test]
fn heisenberg_generation_examples() {
    let g = heisenberg(1, 3).unwrap();
    let coords = HeisenbergCoords { n: 1, field: stgq::ff::field_build(3, 1).unwrap() };
    let a = coords.encode(&[1], 0, &[0]);
    let b = coords.encode(&[0], 0, &[1]);
    assert_eq!(g.subgroup_generate(&[a, b]).order(), 27);
    let z = coords.encode(&[0], 1, &[0]);
    let central = g.subgroup_generate(&[z]);
    assert_eq!(central.order(), 3);
    assert_eq!(central.members(), g.center().members());
}

#[test]
fn suzuki_tits_quotient_by_center_is_nonabelian_4096() {
    let g = suzuki_tits_group(8).unwrap();
    let (q, proj) = g.quotient(&g.center()).unwrap();
    assert_eq!(q.order(), 4096);
    assert!(!q.is_abelian());
    // spot-check the projection is a homomorphism
    let mut rng = stgq::util::SplitMix64::new(11);
    for _ in 0..2000 {
        let a = rng.below(g.order());
        let b = rng.below(g.order());
        assert_eq!(proj[g.mul(a, b)] as usize, q.mul(proj[a] as usize, proj[b] as usize));
    }
}

#[test]
fn w3_is_not_isomorphic_to_its_dual() {
    let m = build_w(3).unwrap();
    let mut d = m.geometry.dualize();
    d.verify_gq().unwrap();
    // all 40 points of W(3) are regular; the dual has antiregular points,
    // so the search must refute.
    assert!(!gq_isomorphic(&m.geometry, &d).unwrap().is_isomorphic());
}

#[test]
fn h3_dual_has_swapped_order() {
    let m = build_h3(2).unwrap();
    let mut d = m.geometry.dualize();
    assert_eq!(d.verify_gq().unwrap(), (2, 4));
}

#[test]
fn regular_point_is_not_antiregular() {
    let m = build_w(3).unwrap();
    assert!(m.geometry.is_regular_point(0));
    assert!(!m.geometry.is_antiregular_point(0));
}

#[test]
fn centrality_cases() {
    let fam = classical_w_family(3).unwrap();
    let s = fam.symmetry.clone().unwrap();
    assert!(centrality_check(&fam.group, &s).central);

    let fam8 = suzuki_tits_family(8).unwrap().with_symmetry().unwrap();
    assert!(centrality_check(&fam8.group, fam8.symmetry.as_ref().unwrap()).central);

    // a non-central subgroup yields a witness commutator
    let g = heisenberg(1, 3).unwrap();
    let coords = HeisenbergCoords { n: 1, field: stgq::ff::field_build(3, 1).unwrap() };
    let a = coords.encode(&[1], 0, &[0]);
    let sub = g.subgroup_generate(&[a]);
    let verdict = centrality_check(&g, &sub);
    assert!(!verdict.central);
    let (x, y) = verdict.witness.unwrap();
    assert_ne!(g.commutator(x, y), 0);
}

#[test]
fn symmetry_subgroup_acts_as_symmetries_about_infinity() {
    let fam = classical_w_family(3).unwrap();
    let s = fam.symmetry.clone().unwrap();
    let cg = coset_geometry(&fam);
    let mut geom = cg.geometry.clone();
    geom.verify_gq().unwrap();
    for &m in s.members() {
        let a = cg.automorphism(m as usize);
        for p in geom.perp_point(cg.infinity).ones() {
            assert_eq!(a.point_perm[p] as usize, p);
        }
    }
}

#[test]
fn w3_satisfies_m_x_with_root_groups_of_order_3() {
    let fam = classical_w_family(3).unwrap();
    let cg = coset_geometry(&fam);
    let mut geom = cg.geometry.clone();
    geom.verify_gq().unwrap();
    let action = cg.group_action().unwrap();
    let (mx, _) = m_x_check(&geom, cg.infinity, &action.autos).unwrap();
    assert!(mx);
    let l = geom.lines_on_point(cg.infinity)[0] as usize;
    let y = *geom.points_on_line(l).iter().find(|&&p| p as usize != cg.infinity).unwrap() as usize;
    let v = moufang_iroot_check(&geom, RootSpec::IRoot { x: cg.infinity, line: l, y }, &action.autos).unwrap();
    assert!(v.is_moufang());
    assert_eq!(v.root_group.len(), 3);
}

#[test]
fn suzuki_dual_q2_fails_mstgq1_but_w3_is_mstgq() {
    let fam = suzuki_tits_family(2).unwrap().with_symmetry().unwrap();
    let cg = coset_geometry(&fam);
    let mut geom = cg.geometry.clone();
    geom.verify_gq().unwrap();
    let action = cg.group_action().unwrap();
    let ms = mstgq_check(&geom, cg.infinity, &action.autos).unwrap();
    assert!(!ms.mstgq1);
    assert!(!ms.is_mstgq);

    let famw = classical_w_family(3).unwrap();
    let cgw = coset_geometry(&famw);
    let mut geomw = cgw.geometry.clone();
    geomw.verify_gq().unwrap();
    let actionw = cgw.group_action().unwrap();
    let msw = mstgq_check(&geomw, cgw.infinity, &actionw.autos).unwrap();
    assert!(msw.is_mstgq);
}

#[test]
fn h34_elation_elements_partition_across_fix1_cases() {
    let h22 = heisenberg(2, 2).unwrap();
    let fams = search_kantor_families(&h22, 4, 2, None).unwrap();
    let cg = coset_geometry(&fams[0]);
    let mut geom = cg.geometry.clone();
    geom.verify_gq().unwrap();
    let mut perp = 0;
    let mut only_x = 0;
    let mut line_subset = 0;
    for g in cg.group().elements().skip(1) {
        let a = cg.automorphism(g);
        let profile = fix_profile(&geom, &a, cg.infinity).unwrap();
        match profile.taxonomy_fix1 {
            TaxonomyFix1::PerpOfX => perp += 1,
            TaxonomyFix1::OnlyX => only_x += 1,
            TaxonomyFix1::SubsetOfLineOnX => line_subset += 1,
            other => panic!("unclassified elation element: {other:?}"),
        }
    }
    assert_eq!(perp + only_x + line_subset, 31);
    // the t symmetries besides the identity land in the perp case
    assert_eq!(perp, 1);
    // elements outside every A* fix nothing beyond the base point
    assert!(only_x > 0);
}

#[test]
fn w2_inside_dual_h34_classifies_as_subquadrangle() {
    let h22 = heisenberg(2, 2).unwrap();
    let fams = search_kantor_families(&h22, 4, 2, None).unwrap();
    let cg = coset_geometry(&fams[0]);
    let mut geom = cg.geometry.clone();
    geom.verify_gq().unwrap();
    let x = cg.infinity;
    let ls = geom.lines_on_point(x);
    let (l1, l2) = (ls[0] as usize, ls[1] as usize);
    let y = *geom.points_on_line(l1).iter().find(|&&p| p as usize != x).unwrap() as usize;
    let w = *geom.points_on_line(l2).iter().find(|&&p| p as usize != x).unwrap() as usize;
    let z = geom.perp_pair(y, w).iter().map(|&p| p as usize).find(|&p| p != x).unwrap();
    let subs = stgq::subgeo::find_subgqs(&geom, &[x, y, z, w], (2, 2)).unwrap();
    assert!(!subs.is_empty());
    let sub = &subs[0];
    // in the dual, the subGQ's lines become points and conditions (i)/(ii)
    // hold with full (3-point) lines, so the classifier sees a proper
    // subquadrangle.
    let mut dual = geom.dualize();
    dual.verify_gq().unwrap();
    let points: Vec<usize> = sub.lines.iter().map(|&l| l as usize).collect();
    let lines: Vec<usize> = sub.points.iter().map(|&p| p as usize).collect();
    match substructure_classify(&dual, &points, &lines).unwrap() {
        SubstructureClass::SubQuadrangle { s, t_prime } => {
            assert_eq!((s, t_prime), (2, 2));
        }
        other => panic!("expected a subquadrangle, got {other:?}"),
    }
}

#[test]
fn twisting_family_pairwise_intersections_are_pencils() {
    let h22 = heisenberg(2, 2).unwrap();
    let fams = search_kantor_families(&h22, 4, 2, None).unwrap();
    let fam = fams[0].clone().with_symmetry().unwrap();
    let cg = coset_geometry(&fam);
    let mut geom = cg.geometry.clone();
    geom.verify_gq().unwrap();
    let x = cg.infinity;
    let ls = geom.lines_on_point(x);
    let (l1, l2) = (ls[0] as usize, ls[1] as usize);
    let y = *geom.points_on_line(l1).iter().find(|&&p| p as usize != x).unwrap() as usize;
    let w = *geom.points_on_line(l2).iter().find(|&&p| p as usize != x).unwrap() as usize;
    let z = geom.perp_pair(y, w).iter().map(|&p| p as usize).find(|&p| p != x).unwrap();
    let forced: Vec<(usize, usize)> = [x, y, z, w].iter().map(|&p| (p, p)).collect();
    let candidates = stgq::subgeo::automorphisms_with_constraints(&geom, &forced, 4096);
    let action = cg.group_action().unwrap();
    let dec = candidates
        .iter()
        .filter(|t| !t.is_identity() && t.compose(t).is_identity())
        .find_map(|t| twist(&geom, x, &action, t).ok())
        .expect("twist succeeds");
    let subs = &dec.fixed_subgqs;
    for i in 0..subs.len() {
        for j in (i + 1)..subs.len() {
            let forward = subgq_intersection_classify(&geom, &subs[i], &subs[j]).unwrap();
            let backward = subgq_intersection_classify(&geom, &subs[j], &subs[i]).unwrap();
            assert_eq!(forward, backward);
            match forward {
                IntersectionShape::PencilOnLine { line, points } => {
                    assert!(geom.incident(x, line));
                    assert_eq!(points.len(), 3);
                }
                other => panic!("expected pencil intersection, got {other:?}"),
            }
        }
    }
    // the twisted group passes the Benson congruence elementwise
    for a in &dec.hminus.autos {
        assert!(stgq::autm::benson_check(&geom, a).unwrap().passes);
    }
    // distinctness precondition
    assert!(subgq_intersection_classify(&geom, &subs[0], &subs[0]).is_err());
}

#[test]
fn frattini_geometry_examples() {
    // W(3): Phi = S, so the line orbits on the perp points are singletons.
    let fam = classical_w_family(3).unwrap();
    let cg = coset_geometry(&fam);
    let fr = frattini_geometry(&cg).unwrap();
    assert_eq!(fr.phi.members(), fam.symmetry.as_ref().unwrap().members());
    assert_eq!(fr.gamma.n_lines(), 12);
    for l in 0..fr.gamma.n_lines() {
        assert_eq!(fr.gamma.points_on_line(l).len(), 3);
    }
    match fr.f_factor {
        FFactorType::Central { tau } => assert_eq!(tau, 3),
        other => panic!("expected the central case, got {other:?}"),
    }

    // H_2(2): Phi is central of order 2 inside every A*.
    let h22 = heisenberg(2, 2).unwrap();
    let fams = search_kantor_families(&h22, 4, 2, None).unwrap();
    let cg2 = coset_geometry(&fams[0]);
    let fr2 = frattini_geometry(&cg2).unwrap();
    assert_eq!(fr2.phi.order(), 2);
    assert!(matches!(fr2.f_factor, FFactorType::Central { tau: 2 }));

    // the same typing applied to an arbitrary subgroup that is not an
    // F-factor reports a witness
    let g = &fams[0].group;
    let odd = g
        .elements()
        .find(|&e| {
            let sub = g.subgroup_generate(&[e]);
            sub.order() == 4 && matches!(f_factor_type(&cg2, &sub), Ok(FFactorType::NotAnFFactor { .. }))
        });
    assert!(odd.is_some());
}

#[test]
fn three_regular_line_triads_in_h34() {
    let m = build_h3(2).unwrap();
    let geom = &m.geometry;
    let dual = geom.dualize();
    // H(3,4) has order (t^2, t) and Property (G), so triads of lines in a
    // common perp with pairwise nonconcurrency are 3-regular.
    let u = 0usize;
    let mut found = 0;
    let others: Vec<usize> = dual.perp_point(u).ones().filter(|&l| l != u).collect();
    'outer: for (i, &v) in others.iter().enumerate() {
        for &w in &others[i + 1..] {
            if dual.collinear(v, w) {
                continue;
            }
            for z in 0..geom.n_lines() {
                if z == v || z == w || dual.collinear(z, v) || dual.collinear(z, w) {
                    continue;
                }
                if stgq::gq::three_regular_lines(geom, [v, w, z]).unwrap() {
                    let rec = dual.triad_centers([v, w, z]).unwrap();
                    assert_eq!(rec.span.len(), 3);
                    found += 1;
                    if found > 5 {
                        break 'outer;
                    }
                }
            }
        }
    }
    assert!(found > 0);
}

#[test]
fn pcp_components_with_normal_members_are_isomorphic() {
    let fam = classical_w_family(3).unwrap();
    let s = fam.symmetry.clone().unwrap();
    let (t, proj) = fam.group.quotient(&s).unwrap();
    let comps: Vec<_> = fam
        .f
        .iter()
        .map(|a| {
            let mut m: Vec<u32> = a.members().iter().map(|&x| proj[x as usize]).collect();
            m.sort_unstable();
            m.dedup();
            t.subgroup_from_members(m)
        })
        .collect();
    // T is abelian, so every component is normal; they must be pairwise
    // isomorphic.
    for c in &comps {
        assert!(c.is_normal());
    }
    let first = comps[0].as_group().unwrap();
    for c in &comps[1..] {
        let g = c.as_group().unwrap();
        assert!(group_isomorphic(&first, &g).unwrap().is_isomorphic());
    }
}
