//! The census: every catalog instance over a range of dimensions, verified,
//! paired by blow-ups, and rendered as Markdown plus JSON.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};
use toric_core::audit::{audit_instance, blow_down_matches, blow_up_pairings, center_ray, collisions, InstanceAudit};
use toric_core::catalog::MIN_DIM;
use toric_core::{instances, FamilyId, FamilyInstance, Presentation, Section};

use crate::formats::{FormatError, PresentationFile};

pub const MAX_DIM: usize = 12;

/// A presentation that stands in for one catalog instance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OverrideFile {
    pub family: String,
    pub dim: usize,
    #[serde(default)]
    pub alpha: Option<i64>,
    pub presentation: PresentationFile,
}

#[derive(Clone, Debug)]
pub struct Override {
    pub id: FamilyId,
    pub d: usize,
    pub alpha: Option<i64>,
    pub presentation: Presentation,
}

impl OverrideFile {
    pub fn resolve(&self) -> Result<Override, FormatError> {
        let id: FamilyId = self.family.parse()?;
        Ok(Override {
            id,
            d: self.dim,
            alpha: self.alpha,
            presentation: self.presentation.to_presentation()?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FailureRow {
    pub predicate: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusRow {
    pub family: String,
    pub d: usize,
    pub alpha: Option<i64>,
    pub rays: usize,
    pub picard: usize,
    pub primitive_collections: usize,
    pub fano: bool,
    pub splitting: bool,
    pub contraction: Option<String>,
    pub extremal: bool,
    pub max_picard_drop: usize,
    pub collisions: Vec<String>,
    pub failures: Vec<FailureRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingRow {
    pub center: Vec<String>,
    pub new_ray: Vec<i64>,
    pub target: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BaseRow {
    pub family: String,
    pub d: usize,
    pub rays: usize,
    pub picard: usize,
    pub primitive_collections: usize,
    pub splitting: bool,
    pub collisions: Vec<String>,
    pub pairings: Vec<PairingRow>,
    pub failures: Vec<FailureRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlowDownRow {
    pub family: String,
    pub d: usize,
    pub relation: String,
    pub lands_on: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Census {
    pub dims: (usize, usize),
    pub contraction_rows: Vec<CensusRow>,
    pub base_rows: Vec<BaseRow>,
    pub blow_downs: Vec<BlowDownRow>,
    pub failures: Vec<String>,
    pub passed: bool,
}

fn tag(inst: &FamilyInstance) -> String {
    match inst.alpha {
        Some(a) => format!("{} (alpha={a})", inst.id),
        None => inst.id.to_string(),
    }
}

fn failure_rows(a: &InstanceAudit) -> Vec<FailureRow> {
    a.failures
        .iter()
        .map(|f| FailureRow {
            predicate: f.predicate.to_string(),
            detail: f.detail.clone(),
        })
        .collect()
}

fn collision_names(list: &[FamilyInstance]) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new(); list.len()];
    for (i, j) in collisions(list) {
        out[i].push(tag(&list[j]));
        out[j].push(tag(&list[i]));
    }
    out
}

fn apply(list: &mut [FamilyInstance], overrides: &[Override]) {
    for o in overrides {
        for inst in list.iter_mut() {
            if inst.id == o.id && inst.d == o.d && inst.alpha == o.alpha {
                inst.presentation = o.presentation.clone();
            }
        }
    }
}

/// Checks `lo..=hi` against the supported range.
pub fn check_dims(lo: usize, hi: usize) -> Result<(), String> {
    if lo < MIN_DIM || hi > MAX_DIM || lo > hi {
        return Err(format!("dimensions must satisfy {MIN_DIM} <= a <= b <= {MAX_DIM}, got {lo}..{hi}"));
    }
    Ok(())
}

pub fn build(lo: usize, hi: usize, overrides: &[Override]) -> Result<Census, FormatError> {
    let mut census = Census {
        dims: (lo, hi),
        contraction_rows: Vec::new(),
        base_rows: Vec::new(),
        blow_downs: Vec::new(),
        failures: Vec::new(),
        passed: true,
    };
    for d in lo..=hi {
        let mut fours = instances(Section::Four, d)?;
        let mut fives = instances(Section::Five, d)?;
        apply(&mut fours, overrides);
        apply(&mut fives, overrides);
        let four_audits: Vec<InstanceAudit> = fours.iter().map(audit_instance).collect();
        let five_audits: Vec<InstanceAudit> = fives.iter().map(audit_instance).collect();

        let targets: Vec<FamilyInstance> = fours.iter().filter(|i| i.alpha == Some(1)).cloned().collect();
        let mut down_failures: BTreeMap<(String, Option<i64>), FailureRow> = BTreeMap::new();
        for inst in &targets {
            let audit = fours
                .iter()
                .zip(&four_audits)
                .find(|(i, _)| i.id == inst.id && i.alpha == inst.alpha)
                .map(|(_, a)| a)
                .expect("target comes from the list");
            let Some(fan) = &audit.fan else { continue };
            let relation = inst
                .contraction
                .as_ref()
                .map(|r| inst.presentation.format_relation(r))
                .unwrap_or_default();
            match blow_down_matches(inst, fan, &fives) {
                Ok(m) => {
                    if m.is_empty() {
                        down_failures.insert(
                            (inst.id.to_string(), inst.alpha),
                            FailureRow {
                                predicate: "blow-down".into(),
                                detail: "the blow-down matches no 5.* instance".into(),
                            },
                        );
                    }
                    census.blow_downs.push(BlowDownRow {
                        family: inst.id.to_string(),
                        d,
                        relation,
                        lands_on: m.iter().map(|id| id.to_string()).collect(),
                    });
                }
                Err(e) => {
                    down_failures.insert(
                        (inst.id.to_string(), inst.alpha),
                        FailureRow {
                            predicate: "blow-down".into(),
                            detail: e.to_string(),
                        },
                    );
                }
            }
        }

        let four_collisions = collision_names(&fours);
        for ((inst, a), coll) in fours.iter().zip(&four_audits).zip(four_collisions) {
            let mut failures = failure_rows(a);
            if let Some(f) = down_failures.remove(&(inst.id.to_string(), inst.alpha)) {
                failures.push(f);
            }
            census.contraction_rows.push(CensusRow {
                family: inst.id.to_string(),
                d,
                alpha: inst.alpha,
                rays: a.num_rays,
                picard: a.picard,
                primitive_collections: a.num_collections,
                fano: a.fano,
                splitting: a.splitting,
                contraction: a.contraction.clone(),
                extremal: a.extremal,
                max_picard_drop: a.max_picard_drop,
                collisions: coll,
                failures,
            });
        }

        let five_collisions = collision_names(&fives);
        for ((inst, a), coll) in fives.iter().zip(&five_audits).zip(five_collisions) {
            let mut failures = failure_rows(a);
            let mut pairings = Vec::new();
            if let Some(fan) = &a.fan {
                match blow_up_pairings(fan, &targets) {
                    Ok(ps) => {
                        for p in ps {
                            pairings.push(PairingRow {
                                center: p.center_names.clone(),
                                new_ray: center_ray(fan, p.center)?.coords().to_vec(),
                                target: p.target.to_string(),
                            });
                        }
                        if pairings.is_empty() {
                            failures.push(FailureRow {
                                predicate: "pairing".into(),
                                detail: "no wall blows up to a Fano 4.* instance with alpha = 1".into(),
                            });
                        }
                    }
                    Err(e) => failures.push(FailureRow {
                        predicate: "pairing".into(),
                        detail: e.to_string(),
                    }),
                }
            }
            census.base_rows.push(BaseRow {
                family: inst.id.to_string(),
                d,
                rays: a.num_rays,
                picard: a.picard,
                primitive_collections: a.num_collections,
                splitting: a.splitting,
                collisions: coll,
                pairings,
                failures,
            });
        }
    }
    for r in &census.contraction_rows {
        let alpha = r.alpha.map(|a| format!(" alpha={a}")).unwrap_or_default();
        for f in &r.failures {
            census
                .failures
                .push(format!("{} d={}{alpha}: {}: {}", r.family, r.d, f.predicate, f.detail));
        }
    }
    for r in &census.base_rows {
        for f in &r.failures {
            census
                .failures
                .push(format!("{} d={}: {}: {}", r.family, r.d, f.predicate, f.detail));
        }
    }
    census.passed = census.failures.is_empty();
    Ok(census)
}

fn flag(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn status(f: &[FailureRow]) -> String {
    if f.is_empty() {
        "ok".into()
    } else {
        let mut p: Vec<&str> = f.iter().map(|f| f.predicate.as_str()).collect();
        p.dedup();
        format!("FAIL: {}", p.join(", "))
    }
}

fn or_dash(v: &[String]) -> String {
    if v.is_empty() {
        "-".into()
    } else {
        v.join(", ")
    }
}

pub fn markdown(c: &Census) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# Toric Fano census, d = {}..{}\n", c.dims.0, c.dims.1);
    let _ = writeln!(
        s,
        "Result: {} ({} contraction rows, {} base rows, {} failures)\n",
        if c.passed { "PASS" } else { "FAIL" },
        c.contraction_rows.len(),
        c.base_rows.len(),
        c.failures.len()
    );

    let _ = writeln!(s, "## Divisor-to-curve families (4.*)\n");
    let _ = writeln!(
        s,
        "| family | d | alpha | rays | rho | PC | Fano | splitting | contraction | extremal | max rho drop | collisions | status |"
    );
    let _ = writeln!(s, "|---|---|---|---|---|---|---|---|---|---|---|---|---|");
    for r in &c.contraction_rows {
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} |",
            r.family,
            r.d,
            r.alpha.map_or("-".into(), |a| a.to_string()),
            r.rays,
            r.picard,
            r.primitive_collections,
            flag(r.fano),
            flag(r.splitting),
            r.contraction.as_deref().unwrap_or("-"),
            flag(r.extremal),
            r.max_picard_drop,
            or_dash(&r.collisions),
            status(&r.failures)
        );
    }

    let _ = writeln!(s, "\n## Base families (5.*) and their Fano blow-ups\n");
    let _ = writeln!(s, "| family | d | rays | rho | PC | splitting | walls | targets | collisions | status |");
    let _ = writeln!(s, "|---|---|---|---|---|---|---|---|---|---|");
    for r in &c.base_rows {
        let mut targets: Vec<String> = r.pairings.iter().map(|p| p.target.clone()).collect();
        targets.sort();
        targets.dedup();
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} |",
            r.family,
            r.d,
            r.rays,
            r.picard,
            r.primitive_collections,
            flag(r.splitting),
            r.pairings.len(),
            or_dash(&targets),
            or_dash(&r.collisions),
            status(&r.failures)
        );
    }

    let _ = writeln!(s, "\n## Blow-downs of alpha = 1 families\n");
    let _ = writeln!(s, "| family | d | relation | lands on |");
    let _ = writeln!(s, "|---|---|---|---|");
    for r in &c.blow_downs {
        let _ = writeln!(s, "| {} | {} | {} | {} |", r.family, r.d, r.relation, or_dash(&r.lands_on));
    }

    let _ = writeln!(s, "\n## Failures\n");
    if c.failures.is_empty() {
        let _ = writeln!(s, "none");
    }
    for f in &c.failures {
        let _ = writeln!(s, "- {f}");
    }
    s
}

pub fn json(c: &Census) -> String {
    serde_json::to_string_pretty(c).expect("census serializes") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;
    use toric_core::{instantiate, Relation};

    #[test]
    fn dims_are_bounded() {
        assert!(check_dims(5, 8).is_ok());
        assert!(check_dims(4, 8).is_err());
        assert!(check_dims(5, 13).is_err());
        assert!(check_dims(7, 6).is_err());
    }

    #[test]
    fn census_at_dimension_five() {
        let c = build(5, 5, &[]).unwrap();
        assert_eq!(c.contraction_rows.len(), 58);
        assert_eq!(c.base_rows.len(), 17);
        assert!(c.passed, "{:?}", c.failures);
        assert!(c.base_rows.iter().all(|r| !r.pairings.is_empty()));
        assert_eq!(c.blow_downs.len(), 22);
        let md = markdown(&c);
        assert!(md.contains("| 4.I | 5 | 2 | 7 | 2 | 2 | yes | yes | x1+x2+x3+x4 = 2 x5 | yes |"));
        assert!(md.ends_with("none\n"));
    }

    #[test]
    fn corrupted_row_is_named() {
        let inst = instantiate("4.IIa.2".parse().unwrap(), 5, Some(1)).unwrap();
        let p = &inst.presentation;
        let k = p
            .relations()
            .iter()
            .position(|r| p.format_relation(r) == "x5+x6 = x7")
            .unwrap();
        let bad = Relation::new(p.relations()[k].lhs, vec![(6, 1), (7, 1)]);
        let o = Override {
            id: inst.id,
            d: 5,
            alpha: Some(1),
            presentation: p.with_relation_replaced(k, bad).unwrap(),
        };
        let c = build(5, 5, &[o]).unwrap();
        assert!(!c.passed);
        assert!(c.failures.iter().any(|f| f.starts_with("4.IIa.2 d=5 alpha=1: relations: presentation inconsistent")));
        assert!(markdown(&c).contains("FAIL: relations"));
    }
}
