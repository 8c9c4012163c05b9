//! Verification of catalog instances against the structural results on
//! toric Fano fans, and the blow-up correspondence between the two lists.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::catalog::{instances, FamilyId, FamilyInstance, Group, Section};
use crate::error::{Error, Result};
use crate::fan::SmoothCompleteFan;
use crate::lattice::{LatticeVector, RaySet};
use crate::mori::{contraction_reports, ContractionKind, MoriCone};
use crate::oracle::{brute_minimal_nonfaces, extremal_oracle, BRUTE_RAY_LIMIT};
use crate::presentation::{isomorphic, presentation_of, realize, Presentation, Relation};
use crate::primitive::{primitive_collections, PrimitiveRelation};
use crate::surgery::{blow_down_relation, blow_up};

/// Instances up to this many rays are also compared with the brute-force
/// non-face enumeration.
pub const BRUTE_CHECK_RAYS: usize = 13;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub predicate: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct InstanceAudit {
    pub id: FamilyId,
    pub d: usize,
    pub alpha: Option<i64>,
    pub num_rays: usize,
    pub picard: usize,
    pub num_collections: usize,
    pub fano: bool,
    pub splitting: bool,
    /// The contraction relation in table notation.
    pub contraction: Option<String>,
    pub extremal: bool,
    /// Largest `rho(X) - rho(D)` over all rays.
    pub max_picard_drop: usize,
    pub failures: Vec<Failure>,
    pub fan: Option<SmoothCompleteFan>,
}

impl InstanceAudit {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, predicate: &'static str, detail: impl Into<String>) {
        self.failures.push(Failure {
            predicate,
            detail: detail.into(),
        });
    }
}

fn names(fan: &SmoothCompleteFan) -> Vec<String> {
    (0..fan.num_rays()).map(|i| fan.fan().ray_name(i)).collect()
}

fn show(rel: &PrimitiveRelation, names: &[String]) -> String {
    crate::presentation::format_relation_with(&Relation::new(rel.lhs(), rel.rhs.clone()), |i| {
        names[i].as_str()
    })
}

/// For two distinct relations `x + y = z` and `x + w = v`: `w = -z`, `v = -y`.
pub fn check_shared_pair_relations(fan: &SmoothCompleteFan, rels: &[PrimitiveRelation]) -> Result<(), String> {
    let pairs: Vec<(RaySet, usize)> = rels
        .iter()
        .filter_map(|r| match r.rhs.as_slice() {
            &[(z, 1)] if r.lhs().len() == 2 => Some((r.lhs(), z)),
            _ => None,
        })
        .collect();
    let neg = |i: usize| fan.ray(i).checked_neg().map_err(|e| e.to_string());
    let names = names(fan);
    for (k, &(a, z)) in pairs.iter().enumerate() {
        for &(b, v) in &pairs[k + 1..] {
            let shared = a.intersection(b);
            if shared.len() != 1 {
                continue;
            }
            let y = a.difference(shared).iter().next().expect("pair");
            let w = b.difference(shared).iter().next().expect("pair");
            if *fan.ray(w) != neg(z)? || *fan.ray(v) != neg(y)? {
                let x = shared.iter().next().expect("pair");
                return Err(format!(
                    "{x}+{y} = {z} and {x}+{w} = {v}",
                    x = names[x],
                    y = names[y],
                    z = names[z],
                    w = names[w],
                    v = names[v]
                ));
            }
        }
    }
    Ok(())
}

/// With `x + (-x) = 0`, every other relation `x + y_1 + ... + y_m` reads
/// `= z_1 + ... + z_m`, with the companion `(-x) + z = y` also primitive,
/// and both extremal.
pub fn check_antipodal_relations(
    fan: &SmoothCompleteFan,
    cone: &MoriCone,
) -> Result<(), String> {
    let rels = cone.relations();
    let names = names(fan);
    for r in rels.iter().filter(|r| r.lhs().len() == 2 && r.rhs.is_empty()) {
        for x in r.lhs() {
            let minus_x = r.lhs().without(x).iter().next().expect("pair");
            for (i, p) in rels.iter().enumerate() {
                if p == r || !p.lhs().contains(x) {
                    continue;
                }
                let ys = p.lhs().without(x);
                let ok_shape = p.rhs.len() == ys.len() && p.rhs.iter().all(|&(_, a)| a == 1);
                if !ok_shape {
                    return Err(format!("{} beside {}", show(p, &names), show(r, &names)));
                }
                let companion = p.sigma().with(minus_x);
                let Some(j) = rels.iter().position(|q| q.lhs() == companion) else {
                    return Err(format!("no companion of {}", show(p, &names)));
                };
                let q = &rels[j];
                let want: Vec<(usize, i64)> = ys.iter().map(|y| (y, 1)).collect();
                if q.rhs != want {
                    return Err(format!("companion of {} is {}", show(p, &names), show(q, &names)));
                }
                if !cone.is_extremal(i) || !cone.is_extremal(j) {
                    return Err(format!(
                        "{} or {} not extremal",
                        show(p, &names),
                        show(q, &names)
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Realizes and verifies one instance. `5.*` instances are only checked
/// for realizability, Picard number and splitting.
pub fn audit_instance(inst: &FamilyInstance) -> InstanceAudit {
    let mut a = InstanceAudit {
        id: inst.id,
        d: inst.d,
        alpha: inst.alpha,
        num_rays: inst.presentation.num_rays(),
        picard: 0,
        num_collections: 0,
        fano: false,
        splitting: false,
        contraction: inst.contraction.as_ref().map(|r| inst.presentation.format_relation(r)),
        extremal: false,
        max_picard_drop: 0,
        failures: Vec::new(),
        fan: None,
    };
    if let Err(e) = run_checks(inst, &mut a) {
        a.fail("computation", e.to_string());
    }
    a
}

fn run_checks(inst: &FamilyInstance, a: &mut InstanceAudit) -> Result<()> {
    let fan = match realize(&inst.presentation) {
        Ok(f) => f,
        Err(e) => {
            let predicate = match e {
                Error::Presentation(crate::PresentationError::NotSmoothComplete(_)) => "smooth-complete",
                _ => "relations",
            };
            a.fail(predicate, e.to_string());
            return Ok(());
        }
    };
    let fan = match SmoothCompleteFan::new(fan) {
        Ok(f) => f,
        Err(e) => {
            a.fail("smooth-complete", e.to_string());
            return Ok(());
        }
    };
    let d = fan.dim();
    a.picard = fan.picard_number();
    if a.picard + d != fan.num_rays() || a.picard != inst.id.picard_number() {
        a.fail(
            "picard",
            format!("rho = {}, expected {}", a.picard, inst.id.picard_number()),
        );
    }
    if presentation_of(&fan)? != inst.presentation {
        a.fail("relations", "recomputed relations differ from the table");
    }
    let cone = MoriCone::new(&fan)?;
    let rels = cone.relations();
    a.num_collections = rels.len();
    a.fano = rels.iter().all(|r| r.degree > 0);
    a.splitting = crate::mori::is_splitting_fan(&fan);
    if a.splitting != inst.id.splitting() {
        a.fail(
            "splitting",
            format!("splitting = {}, expected {}", a.splitting, inst.id.splitting()),
        );
    }
    if fan.num_rays() <= BRUTE_CHECK_RAYS.min(BRUTE_RAY_LIMIT) {
        let brute = brute_minimal_nonfaces(fan.fan())?;
        let pcs: Vec<RaySet> = primitive_collections(&fan).iter().map(|p| p.members()).collect();
        if brute != pcs {
            a.fail("collections-oracle", "level-wise and brute-force non-faces differ");
        }
    }
    if inst.id.section == Section::Five {
        a.fan = Some(fan);
        return Ok(());
    }

    let names = names(&fan);
    if !a.fano {
        let bad: Vec<String> = rels
            .iter()
            .filter(|r| r.degree <= 0)
            .map(|r| show(r, &names))
            .collect();
        a.fail("fano", format!("non-positive degree: {}", bad.join("; ")));
    }
    let flags = cone.extremal_flags();
    for (i, r) in rels.iter().enumerate() {
        if r.degree == 1 && !flags[i] {
            a.fail("degree-one-extremal", show(r, &names));
        }
        match extremal_oracle(cone.classes(), &cone.classes()[i]) {
            Ok(e) if e == flags[i] => {}
            Ok(e) => a.fail(
                "extremal-oracle",
                format!("{}: simplex {}, double description {}", show(r, &names), flags[i], e),
            ),
            Err(e) => a.fail("extremal-oracle", e.to_string()),
        }
    }
    if !cone.is_pointed() {
        a.fail("mori-pointed", "the cone of curves contains a line");
    }

    if let Some(want) = &inst.contraction {
        let reports = contraction_reports(&fan)?;
        let hit = reports
            .iter()
            .find(|r| r.relation.lhs() == want.lhs && r.relation.rhs == want.rhs);
        match hit.map(|r| r.kind) {
            Some(ContractionKind::DivisorToCurve {
                alpha,
                exceptional_ray,
            }) if Some(alpha) == inst.alpha && exceptional_ray == want.rhs[0].0 => {
                a.extremal = true;
                let rho_e = fan.divisor_picard(exceptional_ray)?;
                if rho_e != 2 {
                    a.fail(
                        "exceptional-picard",
                        format!("rho(D_{}) = {rho_e}", names[exceptional_ray]),
                    );
                }
            }
            other => a.fail(
                "contraction",
                format!(
                    "{} classified as {:?}",
                    inst.presentation.format_relation(want),
                    other
                ),
            ),
        }
    }

    for (x, name) in names.iter().enumerate() {
        let rho_d = fan.divisor_picard(x)?;
        if rho_d > a.picard || a.picard - rho_d > 3 {
            a.fail(
                "divisor-bound",
                format!("rho(X) = {}, rho(D_{name}) = {rho_d}", a.picard),
            );
            continue;
        }
        let drop = a.picard - rho_d;
        a.max_picard_drop = a.max_picard_drop.max(drop);
        if drop == 3 && inst.id.group != Group::IV {
            a.fail(
                "divisor-bound",
                format!("rho(X) - rho(D_{name}) = 3 outside group IV"),
            );
        }
    }
    if let Err(msg) = check_shared_pair_relations(&fan, rels) {
        a.fail("pair-relations", msg);
    }
    if let Err(msg) = check_antipodal_relations(&fan, &cone) {
        a.fail("antipodal-relations", msg);
    }
    a.fan = Some(fan);
    Ok(())
}

/// A cone whose blow-up is presentation-isomorphic to a `4.*` instance.
#[derive(Clone, Debug)]
pub struct Pairing {
    pub center: RaySet,
    /// Names of the center's rays in the `5.*` fan.
    pub center_names: Vec<String>,
    pub target: FamilyId,
    pub target_alpha: Option<i64>,
    /// `map[i]` is the target ray matched with ray `i` of the blow-up.
    pub map: Vec<usize>,
}

/// Cheap invariants compared before running the isomorphism search.
fn signature(p: &Presentation) -> (usize, Vec<(usize, Vec<i64>)>) {
    let mut shapes: Vec<(usize, Vec<i64>)> = p
        .relations()
        .iter()
        .map(|r| {
            let mut c: Vec<i64> = r.rhs.iter().map(|&(_, a)| a).collect();
            c.sort_unstable();
            (r.lhs.len(), c)
        })
        .collect();
    shapes.sort();
    (p.num_rays(), shapes)
}

/// `4.*` instances with `alpha = 1` at dimension `d`.
pub fn alpha_one_targets(d: usize) -> Result<Vec<FamilyInstance>> {
    Ok(instances(Section::Four, d)?
        .into_iter()
        .filter(|i| i.alpha == Some(1))
        .collect())
}

fn codim_one_faces(fan: &SmoothCompleteFan) -> Vec<RaySet> {
    let mut out: Vec<RaySet> = Vec::new();
    for &c in fan.fan().max_cones() {
        for v in c {
            out.push(c.without(v));
        }
    }
    out.sort_by(|a, b| a.lex_cmp(*b));
    out.dedup();
    out
}

/// Every wall of `fan` whose blow-up is Fano and matches one of `targets`.
pub fn blow_up_pairings(fan: &SmoothCompleteFan, targets: &[FamilyInstance]) -> Result<Vec<Pairing>> {
    let sigs: Vec<_> = targets.iter().map(|t| signature(&t.presentation)).collect();
    let names = names(fan);
    let mut out = Vec::new();
    for tau in codim_one_faces(fan) {
        let b = blow_up(fan, tau)?;
        let cone_rels = crate::primitive::primitive_relations(&b)?;
        if cone_rels.iter().any(|r| r.degree <= 0) {
            continue;
        }
        // Names are irrelevant to the match, so the blow-up keeps its own.
        let p = presentation_of(&b)?;
        let sig = signature(&p);
        for (t, s) in targets.iter().zip(&sigs) {
            if *s != sig {
                continue;
            }
            if let Some(map) = isomorphic(&p, &t.presentation) {
                out.push(Pairing {
                    center: tau,
                    center_names: tau.iter().map(|i| names[i].clone()).collect(),
                    target: t.id,
                    target_alpha: t.alpha,
                    map,
                });
            }
        }
    }
    Ok(out)
}

/// Blows down a `4.*` instance with `alpha = 1` along its contraction
/// relation and reports which `candidates` match the result.
pub fn blow_down_matches(
    inst: &FamilyInstance,
    fan: &SmoothCompleteFan,
    candidates: &[FamilyInstance],
) -> Result<Vec<FamilyId>> {
    let rel = inst
        .contraction
        .as_ref()
        .ok_or_else(|| Error::BlowDown(format!("{} has no contraction relation", inst.id)))?;
    let down = blow_down_relation(fan, rel.rhs[0].0, rel.lhs)?;
    let p = presentation_of(&down)?;
    let sig = signature(&p);
    Ok(candidates
        .iter()
        .filter(|c| signature(&c.presentation) == sig && isomorphic(&p, &c.presentation).is_some())
        .map(|c| c.id)
        .collect())
}

/// Presentation-isomorphic pairs within a list, as index pairs.
pub fn collisions(list: &[FamilyInstance]) -> Vec<(usize, usize)> {
    let sigs: Vec<_> = list.iter().map(|i| signature(&i.presentation)).collect();
    let mut out = Vec::new();
    for i in 0..list.len() {
        for j in i + 1..list.len() {
            if sigs[i] == sigs[j] && isomorphic(&list[i].presentation, &list[j].presentation).is_some() {
                out.push((i, j));
            }
        }
    }
    out
}

/// `u = sum of tau` for reporting.
pub fn center_ray(fan: &SmoothCompleteFan, tau: RaySet) -> Result<LatticeVector> {
    LatticeVector::checked_sum(fan.dim(), tau.iter().map(|i| fan.ray(i)))
}
