//! Presentations of the classified families, expanded for a given `d` and `alpha`.
//!
//! Rays are named `x1, ..., xn`. The `4.*` families are toric Fano `d`-folds
//! with a contraction of a divisor onto a curve; the `5.*` families are the
//! varieties whose blow-up along a curve is such a Fano.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::lattice::{RaySet, MAX_RAYS};
use crate::presentation::{Presentation, Relation};

/// Smallest dimension the lists cover.
pub const MIN_DIM: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Section {
    Four,
    Five,
}

impl Section {
    pub fn number(self) -> u8 {
        match self {
            Section::Four => 4,
            Section::Five => 5,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            4 => Some(Section::Four),
            5 => Some(Section::Five),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Group {
    I,
    IIa,
    IIb,
    IIIa,
    IIIb,
    IV,
}

impl Group {
    pub fn as_str(self) -> &'static str {
        match self {
            Group::I => "I",
            Group::IIa => "IIa",
            Group::IIb => "IIb",
            Group::IIIa => "IIIa",
            Group::IIIb => "IIIb",
            Group::IV => "IV",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "I" => Group::I,
            "IIa" => Group::IIa,
            "IIb" => Group::IIb,
            "IIIa" => Group::IIIa,
            "IIIb" => Group::IIIb,
            "IV" => Group::IV,
            _ => return None,
        })
    }
}

/// `section.group[.case[.subcase]]`, e.g. `4.IIb.4.2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FamilyId {
    pub section: Section,
    pub group: Group,
    pub case: Option<u8>,
    pub subcase: Option<u8>,
}

const fn id(section: Section, group: Group, case: Option<u8>, subcase: Option<u8>) -> FamilyId {
    FamilyId {
        section,
        group,
        case,
        subcase,
    }
}

/// How `alpha` enters a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlphaRule {
    /// Any `1 <= alpha <= d - 2`.
    Free,
    Pinned(i64),
    Absent,
}

impl AlphaRule {
    /// Every legal value for dimension `d`; `[None]` when there is no parameter.
    pub fn values(self, d: usize) -> Vec<Option<i64>> {
        match self {
            AlphaRule::Free => (1..=d as i64 - 2).map(Some).collect(),
            AlphaRule::Pinned(a) => alloc::vec![Some(a)],
            AlphaRule::Absent => alloc::vec![None],
        }
    }
}

impl FamilyId {
    pub fn alpha_rule(self) -> AlphaRule {
        match (self.section, self.group, self.case) {
            (Section::Five, _, _) => AlphaRule::Absent,
            (Section::Four, Group::IIb, Some(3 | 4)) => AlphaRule::Pinned(1),
            (Section::Four, _, _) => AlphaRule::Free,
        }
    }

    /// Number of rays minus `d`.
    pub fn extra_rays(self) -> usize {
        let base = match self.group {
            Group::I => 2,
            Group::IIa | Group::IIb => 3,
            Group::IIIa | Group::IIIb => 4,
            Group::IV => 5,
        };
        match self.section {
            Section::Four => base,
            Section::Five => base - 1,
        }
    }

    /// The Picard number stated for the family.
    pub fn picard_number(self) -> usize {
        self.extra_rays()
    }

    /// Whether the family's fans are splitting, as stated in its heading.
    pub fn splitting(self) -> bool {
        match self.section {
            Section::Four => matches!(self.group, Group::I | Group::IIa),
            Section::Five => !matches!(self.group, Group::IIIa | Group::IV),
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.section.number(), self.group.as_str())?;
        if let Some(c) = self.case {
            write!(f, ".{c}")?;
        }
        if let Some(s) = self.subcase {
            write!(f, ".{s}")?;
        }
        Ok(())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownFamily(s.to_string());
        let mut parts = s.split('.');
        let section = parts
            .next()
            .and_then(|p| p.parse::<u8>().ok())
            .and_then(Section::from_number)
            .ok_or_else(unknown)?;
        let group = parts.next().and_then(Group::parse).ok_or_else(unknown)?;
        let num = |parts: &mut core::str::Split<'_, char>| -> Result<Option<u8>> {
            match parts.next() {
                None => Ok(None),
                Some(p) => p.parse::<u8>().map(Some).map_err(|_| unknown()),
            }
        };
        let case = num(&mut parts)?;
        let subcase = num(&mut parts)?;
        if parts.next().is_some() {
            return Err(unknown());
        }
        let parsed = id(section, group, case, subcase);
        if catalog(section).contains(&parsed) {
            Ok(parsed)
        } else {
            Err(unknown())
        }
    }
}

/// Every family of a section, in table order.
pub fn catalog(section: Section) -> Vec<FamilyId> {
    use Group::*;
    let s = section;
    let cases = |g: Group, n: u8| (1..=n).map(move |c| id(s, g, Some(c), None));
    let mut out = Vec::new();
    match section {
        Section::Four => {
            out.push(id(s, I, None, None));
            out.extend(cases(IIa, 5));
            out.extend(cases(IIb, 3));
            out.extend((1..=3).map(|k| id(s, IIb, Some(4), Some(k))));
            out.extend(cases(IIIa, 3));
            out.extend(cases(IIIb, 6));
            out.push(id(s, IV, None, None));
        }
        Section::Five => {
            out.push(id(s, I, None, None));
            out.extend(cases(IIa, 4));
            out.extend(cases(IIb, 3));
            out.extend(cases(IIIa, 3));
            out.extend(cases(IIIb, 5));
            out.push(id(s, IV, None, None));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyInstance {
    pub id: FamilyId,
    pub d: usize,
    pub alpha: Option<i64>,
    pub presentation: Presentation,
    /// `x1 + ... + x_{d-1} = alpha x` for `4.*` families.
    pub contraction: Option<Relation>,
}

impl FamilyInstance {
    /// The right-hand ray of the contraction relation.
    pub fn exceptional_ray(&self) -> Option<usize> {
        self.contraction.as_ref().map(|r| r.rhs[0].0)
    }
}

/// Relations over rays `x1..xn`, written with 1-based indices.
struct Table {
    rels: Vec<Relation>,
}

impl Table {
    fn new() -> Self {
        Self { rels: Vec::new() }
    }

    /// Zero coefficients are dropped, so `(alpha - 1) x` vanishes at `alpha = 1`.
    fn rel<L>(&mut self, lhs: L, rhs: &[(usize, i64)]) -> &mut Self
    where
        L: IntoIterator<Item = usize>,
    {
        let lhs = RaySet::from_indices(lhs.into_iter().map(|i| i - 1));
        let rhs = rhs
            .iter()
            .filter(|&&(_, a)| a != 0)
            .map(|&(j, a)| (j - 1, a))
            .collect();
        self.rels.push(Relation::new(lhs, rhs));
        self
    }
}

fn ones(range: core::ops::RangeInclusive<usize>) -> Vec<(usize, i64)> {
    range.map(|i| (i, 1)).collect()
}

fn chain<A, B>(a: A, b: B) -> Vec<usize>
where
    A: IntoIterator<Item = usize>,
    B: IntoIterator<Item = usize>,
{
    a.into_iter().chain(b).collect()
}

pub fn instantiate(id: FamilyId, d: usize, alpha: Option<i64>) -> Result<FamilyInstance> {
    if !catalog(id.section).contains(&id) {
        return Err(Error::UnknownFamily(id.to_string()));
    }
    if d < MIN_DIM {
        return Err(Error::Parameter(format!("{id} requires d >= {MIN_DIM}, got d = {d}")));
    }
    if d + id.extra_rays() > MAX_RAYS {
        return Err(Error::Parameter(format!(
            "{id} at d = {d} needs more than {MAX_RAYS} rays"
        )));
    }
    let a = match (id.alpha_rule(), alpha) {
        (AlphaRule::Free, Some(a)) if (1..=d as i64 - 2).contains(&a) => a,
        (AlphaRule::Free, Some(a)) => {
            return Err(Error::Parameter(format!(
                "{id} requires 1 <= alpha <= d - 2 = {}, got alpha = {a}",
                d - 2
            )))
        }
        (AlphaRule::Free, None) => {
            return Err(Error::Parameter(format!("{id} requires alpha")))
        }
        (AlphaRule::Pinned(p), Some(a)) if a == p => a,
        (AlphaRule::Pinned(p), None) => p,
        (AlphaRule::Pinned(p), Some(a)) => {
            return Err(Error::Parameter(format!(
                "{id} requires alpha = {p}, got alpha = {a}"
            )))
        }
        (AlphaRule::Absent, None) => 0,
        (AlphaRule::Absent, Some(a)) => {
            return Err(Error::Parameter(format!(
                "{id} takes no alpha, got alpha = {a}"
            )))
        }
    };
    let n = d + id.extra_rays();
    let mut t = Table::new();
    let mut target = None;
    match id.section {
        Section::Four => {
            target = Some(section_four(&mut t, id, d, a));
        }
        Section::Five => section_five(&mut t, id, d),
    }
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let contraction = target.map(|x| Relation::new(RaySet::full(d - 1), alloc::vec![(x - 1, a)]));
    let presentation = Presentation::new(d, names, t.rels)?;
    Ok(FamilyInstance {
        id,
        d,
        alpha: (a != 0).then_some(a),
        presentation,
        contraction,
    })
}

/// Fills a `4.*` table and returns the (1-based) ray `x` of the
/// contraction relation `x1 + ... + x_{d-1} = alpha x`.
fn section_four(t: &mut Table, id: FamilyId, d: usize, a: i64) -> usize {
    let head = 1..=d - 1;
    let x = match (id.group, id.case) {
        (Group::IIa, Some(3 | 5)) => d + 2,
        (Group::IIa, Some(4)) => d + 3,
        (Group::IIIa, Some(2)) => d + 1,
        (Group::IIIa, Some(3)) => d + 2,
        _ => d,
    };
    t.rel(head.clone(), &[(x, a)]);
    match (id.group, id.case, id.subcase) {
        (Group::I, _, _) => {
            t.rel([d, d + 1, d + 2], &[]);
        }
        (Group::IIa, Some(c), _) => {
            t.rel([d + 2, d + 3], &[]);
            let rhs: &[(usize, i64)] = match c {
                1 => &[],
                2..=4 => &[(d + 2, 1)],
                _ => &[(1, 1)],
            };
            t.rel([d, d + 1], rhs);
        }
        (Group::IIb, Some(1), _) => {
            t.rel(chain(1..=d - 3, [d + 1, d + 2]), &[(d, a - 1)])
                .rel([d - 2, d - 1, d + 3], &[(d + 1, 1), (d + 2, 1)])
                .rel([d, d + 1, d + 2], &[(d - 2, 1), (d - 1, 1)])
                .rel([d, d + 3], &[]);
        }
        (Group::IIb, Some(2), _) => {
            t.rel(chain(1..=d - 2, [d + 3]), &[(d, a - 1)])
                .rel([d - 1, d + 1, d + 2], &[(d + 3, 1)])
                .rel([d, d + 1, d + 2], &[])
                .rel([d, d + 3], &[(d - 1, 1)]);
        }
        (Group::IIb, Some(3), _) => {
            t.rel(chain(3..=d - 1, [d + 1, d + 2]), &[])
                .rel([1, 2, d + 3], &[(d + 1, 1), (d + 2, 1)])
                .rel([d, d + 1, d + 2], &[(1, 1), (2, 1)])
                .rel([d, d + 3], &[]);
        }
        (Group::IIb, Some(_), sub) => {
            t.rel(chain(2..=d - 1, [d + 3]), &[]).rel([d, d + 3], &[(1, 1)]);
            match sub {
                Some(1) => t
                    .rel([1, d + 1, d + 2], &[(d + 3, 1)])
                    .rel([d, d + 1, d + 2], &[]),
                Some(2) => t
                    .rel([1, d + 1, d + 2], &[(d + 3, 2)])
                    .rel([d, d + 1, d + 2], &[(d + 3, 1)]),
                _ => t
                    .rel([1, d + 1, d + 2], &[(2, 1), (d + 3, 1)])
                    .rel([d, d + 1, d + 2], &[(2, 1)]),
            };
        }
        (Group::IIIa, _, _) => {
            t.rel([d, d + 2], &[(d + 1, 1)])
                .rel([d, d + 3], &[(d + 4, 1)])
                .rel([d + 1, d + 3], &[])
                .rel([d + 1, d + 4], &[(d, 1)])
                .rel([d + 2, d + 4], &[]);
        }
        (Group::IIIb, Some(c), _) => {
            t.rel(chain(2..=d - 1, [d + 4]), &[(d, a - 1)])
                .rel([d, d + 3], &[])
                .rel([d, d + 4], &[(1, 1)])
                .rel([1, d + 3], &[(d + 4, 1)]);
            let rhs: &[(usize, i64)] = match c {
                1 => &[],
                2 => &[(1, 1)],
                3 => &[(2, 1)],
                4 => &[(d, 1)],
                5 => &[(d + 3, 1)],
                _ => &[(d + 4, 1)],
            };
            t.rel([d + 1, d + 2], rhs);
        }
        (Group::IV, _, _) => {
            t.rel([d, d + 2], &[(d + 1, 1)])
                .rel([d, d + 3], &[])
                .rel([d, d + 4], &[(d + 5, 1)])
                .rel([d + 1, d + 3], &[(d + 2, 1)])
                .rel([d + 1, d + 4], &[])
                .rel([d + 1, d + 5], &[(d, 1)])
                .rel([d + 2, d + 4], &[(d + 3, 1)])
                .rel([d + 2, d + 5], &[])
                .rel([d + 3, d + 5], &[(d + 4, 1)]);
        }
        _ => unreachable!("family ids are validated against the catalog"),
    }
    x
}

fn section_five(t: &mut Table, id: FamilyId, d: usize) {
    let head = 1..=d - 1;
    match (id.group, id.case) {
        (Group::I, _) => {
            t.rel(1..=d + 1, &[]);
        }
        (Group::IIa, Some(c)) => {
            match c {
                2 => t.rel(1..=d, &[(d + 1, 1)]).rel([d + 1, d + 2], &[]),
                3 => t.rel(1..=d, &[]).rel([d + 1, d + 2], &ones(head)),
                4 => t.rel(1..=d, &[]).rel([d + 1, d + 2], &[(1, 1)]),
                _ => t.rel(1..=d, &[]).rel([d + 1, d + 2], &[]),
            };
        }
        (Group::IIb, Some(c)) => {
            t.rel(head, &[]);
            let rhs: &[(usize, i64)] = match c {
                1 => &[(1, 1)],
                2 => &[(1, 2)],
                _ => &[(1, 1), (2, 1)],
            };
            t.rel([d, d + 1, d + 2], rhs);
        }
        (Group::IIIa, Some(1)) => {
            t.rel([d + 2, d + 3], &ones(head.clone()))
                .rel(1..=d, &[(d + 2, 1)])
                .rel(chain(head, [d + 1]), &[(d + 3, 1)])
                .rel([d, d + 3], &[])
                .rel([d + 1, d + 2], &[]);
        }
        (Group::IIIa, Some(2)) => {
            t.rel([d + 2, d + 3], &ones(head.clone()))
                .rel(1..=d, &[])
                .rel(chain(head, [d + 1]), &[(d + 3, 1)])
                .rel([d, d + 3], &[(d + 1, 1)])
                .rel([d + 1, d + 2], &[]);
        }
        (Group::IIIa, Some(_)) => {
            t.rel([d + 2, d + 3], &[])
                .rel(1..=d, &[(d + 2, 1)])
                .rel(chain(head, [d + 1]), &[])
                .rel([d, d + 3], &[(d + 1, 1)])
                .rel([d + 1, d + 2], &[(d, 1)]);
        }
        (Group::IIIb, Some(c)) => {
            t.rel(2..=d, &[]).rel([1, d + 3], &[(d, 1)]);
            let rhs = match c {
                1 => Vec::new(),
                2 => alloc::vec![(1, 1)],
                3 => alloc::vec![(2, 1)],
                4 => ones(head),
                _ => alloc::vec![(d, 1)],
            };
            t.rel([d + 1, d + 2], &rhs);
        }
        (Group::IV, _) => {
            t.rel(chain(head.clone(), [d + 2]), &[(d + 1, 1)])
                .rel(chain(head.clone(), [d + 3]), &[])
                .rel(chain(head.clone(), [d + 4]), &[(d, 1)])
                .rel([d + 1, d + 3], &[(d + 2, 1)])
                .rel([d + 1, d + 4], &[])
                .rel([d, d + 1], &ones(head))
                .rel([d + 2, d + 4], &[(d + 3, 1)])
                .rel([d, d + 2], &[])
                .rel([d, d + 3], &[(d + 4, 1)]);
        }
        _ => unreachable!("family ids are validated against the catalog"),
    }
}

/// Every instance of a section at dimension `d`, across the legal `alpha` range.
pub fn instances(section: Section, d: usize) -> Result<Vec<FamilyInstance>> {
    let mut out = Vec::new();
    for id in catalog(section) {
        for alpha in id.alpha_rule().values(d) {
            out.push(instantiate(id, d, alpha)?);
        }
    }
    Ok(out)
}
