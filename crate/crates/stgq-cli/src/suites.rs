//! Verification suites. Each suite builds what it needs from the resolved
//! context and emits check records; `all` fans the applicable suites out
//! over the worker pool.

use std::path::PathBuf;
use std::time::Instant;

use stgq::autm::{
    ab1_equivalence, averaging_check, benson_check, fix_profile, m_x_check, mstgq_check,
    projection_lemma_check, semifield_type_check, structure_equiv_report, transfer_check,
    verify_elation_group, TaxonomyFix1,
};
use stgq::gq::{ar1_check, property_g_at_point, PointLineGeometry};
use stgq::grp::{abelian_subgroups_of_order, suzuki_tits_matrix_product, SuzukiTitsModel};
use stgq::kantor::{
    classical_w_family, coset_geometry, search_kantor_families, suzuki_tits_family, CosetGeometry,
    KantorFamily,
};
use stgq::report::{CheckRecord, RunReport};
use stgq::subgeo::{
    comblem_plane, dual_net, factor_analysis, frattini_geometry, plane_completion, subgq_plane,
    twist, verify_affine_plane, verify_net_dual, verify_projective_plane, FFactorType,
};
use stgq::util::SplitMix64;

use crate::jobs::{max_threads, run_jobs, Job};
use crate::CliError;

const SUITES: &[&str] = &[
    "gq", "kantor", "stgq", "benson", "star", "moufang", "averaging", "ar1", "semifield", "twist",
    "frattini", "pcp",
];

#[derive(Clone)]
pub enum Subject {
    W { q: usize },
    H3 { q: usize },
    SuzukiTits { q: usize },
    GeometryFile { path: PathBuf },
    FamilyFile { path: PathBuf },
}

#[derive(Clone)]
pub struct Context {
    pub subject: Subject,
    pub point: Option<usize>,
    pub deep: bool,
}

impl Context {
    pub fn resolve(
        model: Option<&str>,
        q: Option<usize>,
        geometry: Option<PathBuf>,
        group: Option<PathBuf>,
        point: Option<usize>,
        deep: bool,
    ) -> Result<Context, CliError> {
        let subject = match (model, geometry, group) {
            (Some(m), None, None) => {
                let q = q.ok_or_else(|| CliError::Usage("--model needs --q".into()))?;
                match m {
                    "w" => Subject::W { q },
                    "h3" => Subject::H3 { q },
                    "suzuki-tits" => Subject::SuzukiTits { q },
                    other => return Err(CliError::Usage(format!("unknown verify model `{other}`"))),
                }
            }
            (None, Some(path), None) => Subject::GeometryFile { path },
            (None, None, Some(path)) => Subject::FamilyFile { path },
            (None, Some(gpath), Some(fpath)) => {
                // both given: the family must reproduce the geometry file
                let gtext = std::fs::read_to_string(&gpath)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", gpath.display())))?;
                let given = stgq::io::read_geometry(&gtext).map_err(|e| CliError::Usage(e.to_string()))?;
                let ftext = std::fs::read_to_string(&fpath)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", fpath.display())))?;
                let fam = stgq::io::read_family(&ftext).map_err(|e| CliError::Usage(e.to_string()))?;
                let cg = coset_geometry(&fam);
                let same = cg.geometry.n_points() == given.n_points()
                    && cg.geometry.n_lines() == given.n_lines()
                    && (0..given.n_lines()).all(|l| cg.geometry.points_on_line(l) == given.points_on_line(l));
                if !same {
                    return Err(CliError::Usage(format!(
                        "{} does not present the coset geometry of {}",
                        gpath.display(),
                        fpath.display()
                    )));
                }
                Subject::FamilyFile { path: fpath }
            }
            _ => return Err(CliError::Usage("give exactly one of --model, --geometry, --group".into())),
        };
        Ok(Context { subject, point, deep })
    }

    fn label(&self) -> String {
        match &self.subject {
            Subject::W { q } => format!("w{q}"),
            Subject::H3 { q } => format!("h3_{q}"),
            Subject::SuzukiTits { q } => format!("suzuki_{q}"),
            Subject::GeometryFile { path } => path.display().to_string(),
            Subject::FamilyFile { path } => path.display().to_string(),
        }
    }

    /// The Kantor family behind the subject, when there is one.
    fn family(&self) -> Result<Option<KantorFamily>, CliError> {
        let fam = match &self.subject {
            Subject::W { q } => Some(classical_w_family(*q).map_err(usage)?),
            Subject::H3 { q } => {
                if *q != 2 {
                    return Err(CliError::Usage(format!(
                        "elation-side suites for h3 are wired at q = 2 only (got q = {q})"
                    )));
                }
                let h22 = stgq::grp::heisenberg(2, 2).map_err(usage)?;
                let fams = search_kantor_families(&h22, 4, 2, None).map_err(usage)?;
                let fam = fams
                    .into_iter()
                    .next()
                    .ok_or_else(|| CliError::Internal("no type (4,2) family in H_2(2)".into()))?;
                Some(fam)
            }
            Subject::SuzukiTits { q } => Some(suzuki_tits_family(*q).map_err(usage)?),
            Subject::FamilyFile { path } => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
                Some(stgq::io::read_family(&text).map_err(usage)?)
            }
            Subject::GeometryFile { .. } => None,
        };
        Ok(fam)
    }

    /// Coset geometry of the family, verified, for desk-scale subjects.
    fn coset(&self) -> Result<Option<(CosetGeometry, PointLineGeometry)>, CliError> {
        let fam = match self.family()? {
            Some(f) => f,
            None => return Ok(None),
        };
        if fam.group.order() > 4096 {
            return Ok(None); // group-side suites handle the q = 8 case
        }
        let cg = coset_geometry(&fam);
        let mut geom = cg.geometry.clone();
        geom.verify_gq().map_err(usage)?;
        Ok(Some((cg, geom)))
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn timed(mut record: CheckRecord, start: Instant) -> CheckRecord {
    record.wall_time_ms = start.elapsed().as_millis();
    record
}

pub fn run_suite(suite: &str, ctx: &Context) -> Result<RunReport, CliError> {
    let mut report = RunReport::new(format!("verify {suite} {}", ctx.label()));
    if suite == "all" {
        let jobs: Vec<Job> = SUITES
            .iter()
            .map(|&name| {
                let ctx = ctx.clone();
                Box::new(move || match dispatch(name, &ctx) {
                    Ok(records) => records,
                    Err(e) => vec![CheckRecord::new(name, &ctx.label(), format!("error: {e}"))],
                }) as Job
            })
            .collect();
        for record in run_jobs(jobs, max_threads()) {
            report.push(record);
        }
        return Ok(report);
    }
    if !SUITES.contains(&suite) {
        return Err(CliError::Usage(format!("unknown suite `{suite}`")));
    }
    for record in dispatch(suite, ctx)? {
        report.push(record);
    }
    Ok(report)
}

fn dispatch(suite: &str, ctx: &Context) -> Result<Vec<CheckRecord>, CliError> {
    match suite {
        "gq" => suite_gq(ctx),
        "kantor" => suite_kantor(ctx),
        "stgq" => suite_stgq(ctx),
        "benson" => suite_benson(ctx),
        "star" => suite_star(ctx),
        "moufang" => suite_moufang(ctx),
        "averaging" => suite_averaging(ctx),
        "ar1" => suite_ar1(ctx),
        "semifield" => suite_semifield(ctx),
        "twist" => suite_twist(ctx),
        "frattini" => suite_frattini(ctx),
        "pcp" => suite_pcp(ctx),
        other => Err(CliError::Usage(format!("unknown suite `{other}`"))),
    }
}

fn suite_gq(ctx: &Context) -> Result<Vec<CheckRecord>, CliError> {
    let label = ctx.label();
    let t0 = Instant::now();
    let mut out = Vec::new();
    match &ctx.subject {
        Subject::W { q } => {
            let m = stgq::classical::build_w(*q).map_err(usage)?;
            let (s, t) = m.geometry.order().unwrap();
            out.push(timed(
                CheckRecord::pass("verify_gq", &label, true)
                    .with_parameter("s", s)
                    .with_parameter("t", t)
                    .with_parameter("points", m.geometry.n_points())
                    .with_parameter("lines", m.geometry.n_lines()),
                t0,
            ));
            let t1 = Instant::now();
            let regular = m.geometry.regular_point_count();
            out.push(timed(
                CheckRecord::pass("all_points_regular", &label, regular == m.geometry.n_points())
                    .with_parameter("regular", regular),
                t1,
            ));
        }
        Subject::H3 { q } => {
            let m = stgq::classical::build_h3(*q).map_err(usage)?;
            let (s, t) = m.geometry.order().unwrap();
            out.push(timed(
                CheckRecord::pass("verify_gq", &label, true)
                    .with_parameter("s", s)
                    .with_parameter("t", t)
                    .with_parameter("points", m.geometry.n_points())
                    .with_parameter("lines", m.geometry.n_lines()),
                t0,
            ));
            let t1 = Instant::now();
            out.push(timed(
                CheckRecord::pass("base_point_regular", &label, m.geometry.is_regular_point(0)),
                t1,
            ));
            if *q == 2 {
                let t2 = Instant::now();
                let g_ok = property_g_at_point(&m.geometry, 0).map_err(usage)?;
                out.push(timed(CheckRecord::pass("property_g_at_base", &label, g_ok), t2));
            }
        }
        Subject::SuzukiTits { q } => {
            if let Some((_, geom)) = ctx.coset()? {
                let (s, t) = geom.order().unwrap();
                out.push(timed(
                    CheckRecord::pass("verify_gq", &label, true)
                        .with_parameter("s", s)
                        .with_parameter("t", t)
                        .with_parameter("points", geom.n_points()),
                    t0,
                ));
            } else {
                out.push(timed(
                    CheckRecord::new("verify_gq", &label, "skipped")
                        .with_parameter("reason", format!("coset geometry at q={q} exceeds the verification bound; axioms covered group-side")),
                    t0,
                ));
            }
        }
        Subject::GeometryFile { path } => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let mut geom = stgq::io::read_geometry(&text).map_err(usage)?;
            match geom.verify_gq() {
                Ok((s, t)) => out.push(timed(
                    CheckRecord::pass("verify_gq", &label, true)
                        .with_parameter("s", s)
                        .with_parameter("t", t),
                    t0,
                )),
                Err(e) => out.push(timed(
                    CheckRecord::pass("verify_gq", &label, false).with_witness(e.to_string()),
                    t0,
                )),
            }
        }
        Subject::FamilyFile { .. } => {
            if let Some((_, geom)) = ctx.coset()? {
                let (s, t) = geom.order().unwrap();
                out.push(timed(
                    CheckRecord::pass("verify_gq", &label, true)
                        .with_parameter("s", s)
                        .with_parameter("t", t),
                    t0,
                ));
            }
        }
    }
    Ok(out)
}

fn suite_kantor(ctx: &Context) -> Result<Vec<CheckRecord>, CliError> {
    let label = ctx.label();
    let fam = ctx
        .family()?
        .ok_or_else(|| CliError::Usage("kantor suite needs a family-backed subject".into()))?;
    let t0 = Instant::now();
    let report = fam.verify().map_err(usage)?;
    let mut out = vec![timed(
        CheckRecord::pass("kantor_axiom_a", &label, report.sizes_ok)
            .with_parameter("s", fam.s)
            .with_parameter("t", fam.t),
        t0,
    )];
    out.push(CheckRecord::pass("kantor_axiom_b", &label, report.inclusion_ok));
    let mut c = CheckRecord::pass("kantor_axiom_c", &label, report.product_ok);
    if let Some(w) = report.product_witness {
        c = c.with_witness(format!("triple {w:?}"));
    }
    out.push(c);
    let mut d = CheckRecord::pass("kantor_axiom_d", &label, report.meet_ok);
    if let Some(w) = report.meet_witness {
        d = d.with_witness(format!("pair {w:?}"));
    }
    out.push(d);
    if report.all_pass() {
        if let Some((cg, geom)) = ctx.coset()? {
            let t1 = Instant::now();
            let action = cg.group_action().map_err(usage)?;
            let v = verify_elation_group(&geom, cg.infinity, &action.autos).map_err(usage)?;
            let mut rec = CheckRecord::pass("elation_group", &label, v.is_elation_group);
            for f in &v.failures {
                rec = rec.with_witness(f.clone());
            }
            out.push(timed(rec, t1));
        }
    }
    Ok(out)
}

fn suite_stgq(ctx: &Context) -> Result<Vec<CheckRecord>, CliError> {
    let label = ctx.label();
    let fam = ctx
        .family()?
        .ok_or_else(|| CliError::Usage("stgq suite needs a family-backed subject".into()))?;
    let t0 = Instant::now();
    let mut out = Vec::new();
    match stgq::kantor::verify_stgq_family(&fam) {
        Ok(s) => {
            let center = fam.group.center();
            out.push(timed(
                CheckRecord::pass("stgq_condition", &label, true).with_parameter("symmetry_order", s.order()),
                t0,
            ));
            out.push(CheckRecord::pass("symmetry_is_center", &label, s.members() == center.members()));
        }
        Err(e) => {
            out.push(timed(
                CheckRecord::pass("stgq_condition", &label, false).with_witness(format!("{e:?}")),
                t0,
            ));
        }
    }
    if let Subject::SuzukiTits { q } = ctx.subject {
        let idx_inf = fam.f.len() - 1;
        let astar_inf = &fam.fstar[idx_inf];
        let astar_one = &fam.fstar[idx_inf.min(1)];
        out.push(
            CheckRecord::pass(
                "astar_inf_elementary_abelian_normal",
                &label,
                astar_inf.is_elementary_abelian() && astar_inf.is_normal(),
            ),
        );
        out.push(
            CheckRecord::pass(
                "astar_finite_nonabelian_exp4_nonnormal",
                &label,
                !astar_one.is_abelian() && astar_one.exponent() == 4 && !astar_one.is_normal(),
            )
            .with_parameter("applies", (q >= 8).to_string()),
        );
        let derived = fam.group.derived_subgroup();
        let contained = stgq::util::sorted_is_subset(derived.members(), astar_inf.members());
        out.push(
            CheckRecord::new(
                "derived_in_astar_inf",
                &label,
                format!("contained={} strict={}", contained, contained && derived.order() < astar_inf.order()),
            )
            .with_parameter("derived_order", derived.order())
            .with_parameter("astar_inf_order", astar_inf.order()),
        );
        // matrix-model cross-check
        let t1 = Instant::now();
        let model = SuzukiTitsModel::new(q).map_err(usage)?;
        let triples = if ctx.deep { 1_000_000 } else { 10_000 };
        let mut rng = SplitMix64::new(0x5354_0000 + q as u64);
        let mut ok = true;
        for _ in 0..triples {
            let a = model.decode(rng.below(q.pow(5)));
            let b = model.decode(rng.below(q.pow(5)));
            let c = model.decode(rng.below(q.pow(5)));
            if model.law(model.law(a, b), c) != model.law(a, model.law(b, c))
                || model.law(a, b) != suzuki_tits_matrix_product(&model, a, b)
            {
                ok = false;
                break;
            }
        }
        out.push(timed(
            CheckRecord::pass("matrix_model_cross_check", &label, ok).with_parameter("triples", triples),
            t1,
        ));
    }
    Ok(out)
}

fn suite_benson(ctx: &Context) -> Result<Vec<CheckRecord>, CliError> {
    let label = ctx.label();
    let t0 = Instant::now();
    if let Some((cg, geom)) = ctx.coset()? {
        let mut pass = 0usize;
        let mut fail = 0usize;
        for g in cg.group().elements() {
            let b = benson_check(&geom, &cg.automorphism(g)).map_err(usage)?;
            if b.passes {
                pass += 1;
            } else {
                fail += 1;
            }
        }
        return Ok(vec![timed(
            CheckRecord::pass("benson_all_elements", &label, fail == 0)
                .with_parameter("pass", pass)
                .with_parameter("fail", fail),
            t0,
        )]);
    }
    // large subject: no desk-scale geometry; the congruence is exercised on
    // the small members instead.
    Ok(vec![timed(
        CheckRecord::new("benson_all_elements", &label, "skipped")
            .with_parameter("reason", "geometry beyond desk scale"),
        t0,
    )])
}

fn suite_star(ctx: &Context) -> Result<Vec<CheckRecord>, CliError> {
    let label = ctx.label();
    let t0 = Instant::now();
    let fam = ctx
        .family()?
        .ok_or_else(|| CliError::Usage("star suite needs a family-backed subject".into()))?;
    let fam = fam
        .with_symmetry()
        .map_err(|e| CliError::Usage(format!("subject is not an STGQ: {e:?}")))?;
    let s = fam.symmetry.clone().unwrap();
    if fam.group.order() <= 4096 {
        let cg = coset_geometry(&fam);
        let mut geom = cg.geometry.clone();
        geom.verify_gq().map_err(usage)?;
        let action = cg.group_action().map_err(usage)?;
        let r = ab1_equivalence(&geom, cg.infinity, &action, s.members()).map_err(usage)?;
        Ok(vec![timed(
            CheckRecord::pass("star_ab1_agree", &label, r.agree)
                .with_parameter("star", r.star_holds)
                .with_parameter("quotient_abelian", r.quotient_abelian),
            t0,
        )])
    } else {
        let cg = coset_geometry(&fam);
        let (star, witness) = cg.property_star_group_side();
        let quotient_abelian = fam.group.derived_subgroup().is_subset_of(&s);
        let mut rec = CheckRecord::pass("star_ab1_agree", &label, star == quotient_abelian)
            .with_parameter("star", star)
            .with_parameter("quotient_abelian", quotient_abelian);
        if let Some((g, i, k)) = witness {
            rec = rec.with_witness(format!("element {g} fixes a coset of A*_{i} at rep {k} without fixing the line pointwise"));
        }
        Ok(vec![timed(rec, t0)])
    }
}

fn suite_moufang(ctx: &Context) -> Result<Vec<CheckRecord>, CliError> {
    let label = ctx.label();
    let t0 = Instant::now();
    let mut out = Vec::new();
    if let Some((cg, geom)) = ctx.coset()? {
        let action = cg.group_action().map_err(usage)?;
        let (mx, witness) = m_x_check(&geom, cg.infinity, &action.autos).map_err(usage)?;
        let mut rec = CheckRecord::new("m_x", &label, mx.to_string());
        if let Some(w) = witness {
            rec = rec.with_witness(format!("{w:?}"));
        }
        out.push(timed(rec, t0));
        let t1 = Instant::now();
        let ms = mstgq_check(&geom, cg.infinity, &action.autos).map_err(usage)?;
        out.push(timed(
            CheckRecord::new("mstgq", &label, ms.is_mstgq.to_string())
                .with_parameter("mstgq1", ms.mstgq1)
                .with_parameter("mstgq2", ms.mstgq2)
                .with_parameter("mstgq3", ms.mstgq3)
                .with_parameter("mstgq1b", ms.mstgq1b),
            t1,
        ));
    } else if let Some(fam) = ctx.family()? {
        // group-side sampled i-root checks for the big subject
        let cg = coset_geometry(&fam);
        let last = fam.f.len() - 1;
        for member in [0usize, 1, last] {
            let t1 = Instant::now();
            let (sharp, fixer) = cg.iroot_moufang_group_side(member, 0);
            let name = if member == last { "inf".to_string() } else { member.to_string() };
            out.push(timed(
                CheckRecord::new("iroot_moufang", &label, sharp.to_string())
                    .with_parameter("member", name)
                    .with_parameter("fixer_order", fixer),
                t1,
            ));
        }
    }
    Ok(out)
}

fn suite_averaging(ctx: &Context) -> Result<Vec<CheckRecord>, CliError> {
    let label = ctx.label();
    let t0 = Instant::now();
    let (cg, geom) = match ctx.coset()? {
        Some(x) => x,
        None => {
            return Ok(vec![CheckRecord::new("averaging", &label, "skipped")
                .with_parameter("reason", "geometry beyond desk scale")])
        }
    };
    let action = cg.group_action().map_err(usage)?;
    let r = averaging_check(&geom, cg.infinity, &action.autos).map_err(usage)?;
    let mut out = vec![timed(
        CheckRecord::new("averaging", &label, if !r.applicable { "not-applicable".into() } else if r.all_pass { "pass".to_string() } else { "fail".to_string() })
            .with_parameter("checked", r.checked)
            .with_parameter("reason", r.reason),
        t0,
    )];
    // transfer on elements confined to one line on x, when s > t
    let (s, t) = geom.order().unwrap();
    if s > t {
        let t1 = Instant::now();
        let mut congruences = 0usize;
        let mut violations = 0usize;
        let mut o_values: Vec<i64> = Vec::new();
        for a in &action.autos {
            if a.is_identity() {
                continue;
            }
            let profile = fix_profile(&geom, a, cg.infinity).map_err(usage)?;
            if profile.taxonomy_fix1 == TaxonomyFix1::SubsetOfLineOnX {
                let tr = transfer_check(&profile, s, t);
                if tr.applicable {
                    congruences += 1;
                    if !tr.congruence_ok || !tr.f_nonzero {
                        violations += 1;
                    }
                    if let Some((o, _)) = tr.power_law {
                        o_values.push(o);
                    }
                }
            }
        }
        o_values.sort_unstable();
        o_values.dedup();
        out.push(timed(
            CheckRecord::pass("transfer", &label, violations == 0)
                .with_parameter("checked", congruences)
                .with_parameter("o_values", format!("{o_values:?}")),
            t1,
        ));
    }
    Ok(out)
}

fn suite_ar1(ctx: &Context) -> Result<Vec<CheckRecord>, CliError> {
    let label = ctx.label();
    let t0 = Instant::now();
    let (cg, geom) = match ctx.coset()? {
        Some(x) => x,
        None => {
            return Ok(vec![CheckRecord::new("ar1", &label, "skipped")
                .with_parameter("reason", "geometry beyond desk scale")])
        }
    };
    let x = ctx.point.unwrap_or(cg.infinity);
    let holds = ar1_check(&geom, x).map_err(usage)?;
    let mut out = vec![timed(CheckRecord::new("ar1", &label, holds.to_string()).with_parameter("point", x), t0)];
    let (s, t) = geom.order().unwrap();
    if holds && s == t {
        let t1 = Instant::now();
        let on_x: Vec<usize> = geom.lines_on_point(x).iter().map(|&l| l as usize).collect();
        let mut planes = 0usize;
        let mut ok = true;
        for (i, &a) in on_x.iter().enumerate() {
            for &b in &on_x[i + 1..] {
                match comblem_plane(&geom, a, b) {
                    Ok(p) => {
                        ok &= verify_affine_plane(&p).map_err(usage)? == s;
                        planes += 1;
                    }
                    Err(e) => return Err(usage(e)),
                }
            }
        }
        out.push(timed(
            CheckRecord::pass("comblem_planes", &label, ok).with_parameter("pairs", planes),
            t1,
        ));
        if geom.is_regular_point(x) {
            let t2 = Instant::now();
            let dn = dual_net(&geom, x).map_err(usage)?;
            let net_ok = verify_net_dual(&dn.net).map_err(usage)? == (s, t + 1);
            let completion = plane_completion(&geom, x).map_err(usage)?;
            let plane_ok = verify_projective_plane(&completion).map_err(usage)? == s;
            out.push(timed(
                CheckRecord::pass("dual_net_and_completion", &label, net_ok && plane_ok)
                    .with_parameter("net_points", dn.net.n_points())
                    .with_parameter("net_lines", dn.net.n_lines()),
                t2,
            ));
        }
    }
    Ok(out)
}

fn suite_semifield(ctx: &Context) -> Result<Vec<CheckRecord>, CliError> {
    let label = ctx.label();
    let t0 = Instant::now();
    let fam = match (&ctx.subject, ctx.family()?) {
        (Subject::W { .. }, Some(f)) => f,
        _ => {
            return Ok(vec![CheckRecord::new("semifield_type", &label, "not-applicable")
                .with_parameter("reason", "needs a square-order family with |H| = q^3")])
        }
    };
    let mut ok = true;
    let mut pairs = 0usize;
    for i in 0..fam.fstar.len() {
        for j in 0..fam.fstar.len() {
            if i != j {
                let v = semifield_type_check(&fam.group, &fam.fstar[i], &fam.fstar[j]);
                ok &= v.is_semifield_type;
                pairs += 1;
            }
        }
    }
    let mut out = vec![timed(
        CheckRecord::pass("semifield_type", &label, ok).with_parameter("pairs", pairs),
        t0,
    )];
    let t1 = Instant::now();
    let q = fam.s;
    let count = abelian_subgroups_of_order(&fam.group, q * q).map_err(usage)?.len();
    out.push(timed(
        CheckRecord::pass("hiramine_count", &label, count == q + 1)
            .with_parameter("count", count)
            .with_parameter("expected", q + 1),
        t1,
    ));
    Ok(out)
}

fn suite_twist(ctx: &Context) -> Result<Vec<CheckRecord>, CliError> {
    let label = ctx.label();
    if !ctx.deep {
        return Ok(vec![CheckRecord::new("twist", &label, "skipped")
            .with_parameter("reason", "long-running; pass --deep")]);
    }
    let t0 = Instant::now();
    eprintln!("twist: building the coset geometry and searching involutions ...");
    let (cg, geom) = match ctx.coset()? {
        Some(x) => x,
        None => {
            return Ok(vec![CheckRecord::new("twist", &label, "skipped")
                .with_parameter("reason", "geometry beyond desk scale")])
        }
    };
    let (s, t) = geom.order().unwrap();
    if s != t * t || t % 2 != 0 {
        return Ok(vec![CheckRecord::new("twist", &label, "not-applicable")
            .with_parameter("reason", format!("needs order (q^2,q), q even; got ({s},{t})"))]);
    }
    let x = cg.infinity;
    let ls = geom.lines_on_point(x);
    let (l1, l2) = (ls[0] as usize, ls[1] as usize);
    let y = *geom.points_on_line(l1).iter().find(|&&p| p as usize != x).unwrap() as usize;
    let w = *geom.points_on_line(l2).iter().find(|&&p| p as usize != x).unwrap() as usize;
    let z = geom.perp_pair(y, w).iter().map(|&p| p as usize).find(|&p| p != x).unwrap();
    let forced: Vec<(usize, usize)> = [x, y, z, w].iter().map(|&p| (p, p)).collect();
    let candidates = stgq::subgeo::automorphisms_with_constraints(&geom, &forced, 4096);
    let action = cg.group_action().map_err(usage)?;
    for theta in &candidates {
        if theta.is_identity() || !theta.compose(theta).is_identity() {
            continue;
        }
        if let Ok(dec) = twist(&geom, x, &action, theta) {
            let plane = subgq_plane(&geom, x, &dec.fixed_subgqs).map_err(usage)?;
            let plane_order = verify_affine_plane(&plane).map_err(usage)?;
            let rec = CheckRecord::pass(
                "twist",
                &label,
                dec.subgq_involutions.len() == t * t
                    && plane_order == t
                    && dec.hminus_is_elation
                    && !dec.h_vs_hminus.is_isomorphic(),
            )
            .with_parameter("subgq_involutions", dec.subgq_involutions.len())
            .with_parameter("plane_order", plane_order)
            .with_parameter("hminus_elation", dec.hminus_is_elation)
            .with_parameter("h_iso_hminus", dec.h_vs_hminus.is_isomorphic());
            return Ok(vec![timed(rec, t0)]);
        }
    }
    Ok(vec![timed(
        CheckRecord::pass("twist", &label, false).with_witness("no usable involution found"),
        t0,
    )])
}

fn suite_frattini(ctx: &Context) -> Result<Vec<CheckRecord>, CliError> {
    let label = ctx.label();
    let fam = ctx
        .family()?
        .ok_or_else(|| CliError::Usage("frattini suite needs a family-backed subject".into()))?;
    if fam.group.order() > 4096 && !ctx.deep {
        return Ok(vec![CheckRecord::new("frattini_geometry", &label, "skipped")
            .with_parameter("reason", "long-running at this order; pass --deep")]);
    }
    let t0 = Instant::now();
    let cg = coset_geometry(&fam);
    let fr = frattini_geometry(&cg).map_err(usage)?;
    let f_factor = match &fr.f_factor {
        FFactorType::NotAnFFactor { witness } => format!("not-an-f-factor at {witness:?}"),
        FFactorType::Central { tau } => format!("central sigma=1 tau={tau}"),
        FFactorType::ThickKantor { sigma, tau, report } => {
            format!("thick sigma={sigma} tau={tau} axioms_pass={}", report.all_pass())
        }
    };
    let mut out = vec![timed(
        CheckRecord::new("frattini_geometry", &label, format!("dual_partial_linear={}", fr.dual_partial_linear))
            .with_parameter("phi_order", fr.phi.order())
            .with_parameter("gamma_points", fr.gamma.n_points())
            .with_parameter("gamma_lines", fr.gamma.n_lines())
            .with_parameter("f_factor", f_factor),
        t0,
    )];
    if fam.group.order() <= 1024 {
        let t1 = Instant::now();
        let fam2 = fam.clone().with_symmetry().map_err(|e| CliError::Usage(format!("{e:?}")))?;
        let s = fam2.symmetry.unwrap();
        let pl = projection_lemma_check(&fam.group, &s).map_err(usage)?;
        out.push(timed(
            CheckRecord::new("projection_lemma", &label, pl.holds.to_string())
                .with_parameter("s_in_frattini", pl.s_in_frattini)
                .with_parameter("routes_agree", pl.routes_agree)
                .with_parameter("maximal_subgroups", pl.maximal_count),
            t1,
        ));
        // the square-order structure equivalences, where the geometry is at
        // desk scale
        if let Some((cg, geom)) = ctx.coset()? {
            let t2 = Instant::now();
            let action = cg.group_action().map_err(usage)?;
            let fam3 = cg.family.clone().with_symmetry().map_err(|e| CliError::Usage(format!("{e:?}")))?;
            let sm = fam3.symmetry.unwrap();
            let r = structure_equiv_report(&geom, cg.infinity, &action, &fam3.fstar, sm.members())
                .map_err(usage)?;
            // the all-equal assertion is the square odd-order theorem; for
            // other parameters the five verdicts are recorded as data
            let (s_, t_) = geom.order().unwrap();
            let verdict = if s_ == t_ && s_ % 2 == 1 {
                if r.all_equal { "pass".to_string() } else { "fail".to_string() }
            } else {
                format!("recorded (all_equal={})", r.all_equal)
            };
            out.push(timed(
                CheckRecord::new("structure_equivalences_agree", &label, verdict)
                    .with_parameter("fstar_abelian", r.fstar_abelian)
                    .with_parameter("m_x", r.m_x)
                    .with_parameter("special_exp_p", r.special_of_exponent_p)
                    .with_parameter("s_in_center", r.s_in_center)
                    .with_parameter("s_equals_center", r.s_equals_center),
                t2,
            ));
        }
    }
    Ok(out)
}

fn suite_pcp(ctx: &Context) -> Result<Vec<CheckRecord>, CliError> {
    let label = ctx.label();
    let t0 = Instant::now();
    let fam = ctx
        .family()?
        .ok_or_else(|| CliError::Usage("pcp suite needs a family-backed subject".into()))?;
    let fam = fam.with_symmetry().map_err(|e| CliError::Usage(format!("{e:?}")))?;
    let s = fam.symmetry.clone().unwrap();
    let fa = factor_analysis(&fam.group, &s, &fam.f).map_err(usage)?;
    let class = format!("{:?}", fa.class);
    let mut rec = CheckRecord::pass("pcp", &label, fa.pcp.axioms_ok)
        .with_parameter("s", fa.pcp.s)
        .with_parameter("r", fa.pcp.r)
        .with_parameter("class", class)
        .with_parameter("t_elementary_abelian", fa.t_elementary_abelian);
    if let Some(f) = fa.factorizes {
        rec = rec.with_parameter("factor_subgroup_factorizes", f);
    }
    Ok(vec![timed(rec, t0)])
}
