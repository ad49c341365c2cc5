//! Branched covers of knot complements from homomorphisms to permutation groups.
//!
//! A transitive homomorphism `phi: G -> S_m` determines the finite-index
//! subgroup `U = ker phi` (we work with the regular action of the image, so
//! `U` is normal). Filling in the boundary tori of the unbranched cover gives
//! the branched cover, with fundamental group `Q = U / M_U`, where `M_U` is
//! normally generated by the meridian powers lying in `U`.

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::abelian::FinGenAbelianGroup;
use crate::coset_table::{enumerate_with, kernel_table, CosetError, CosetTable, EnumerationLimits, Limit, Strategy};
use crate::identify::{identify_group, ConcreteFiniteGroup};
use crate::knot::WirtingerData;
use crate::perm::{enumerate_group, Permutation};
use crate::presentation::{Presentation, Simplified, DEFAULT_TIETZE_BUDGET};
use crate::schreier::{rewrite_presentation, RewritingData, SchreierError};
use crate::words::Word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error(transparent)]
    Coset(#[from] CosetError),
    #[error(transparent)]
    Schreier(#[from] SchreierError),
    #[error("meridians have images of different orders ({0} and {1})")]
    MeridianOrders(u64, u64),
}

/// `index = e * f * r`: `e` is the order of the meridian's image, `e * f` the
/// order of the image of the peripheral subgroup, and `r` the number of
/// boundary tori of the cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Efr {
    pub e: u64,
    pub f: u64,
    pub r: u64,
    pub index: u64,
}

fn word_image(w: &Word, images: &[Permutation]) -> Permutation {
    let degree = images.first().map_or(0, Permutation::degree);
    crate::coset_table::word_image(w, images, degree)
}

pub fn efr(w: &WirtingerData, images: &[Permutation], limits: EnumerationLimits) -> Result<Efr, CoverError> {
    let table = kernel_table(&w.pres, images, limits.max_cosets)?;
    efr_from_table(w, images, &table, limits)
}

fn efr_from_table(
    w: &WirtingerData,
    images: &[Permutation],
    table: &CosetTable,
    limits: EnumerationLimits,
) -> Result<Efr, CoverError> {
    let degree = images.iter().map(Permutation::degree).max().unwrap_or(0);
    let images: Vec<Permutation> = images.iter().map(|g| g.padded(degree)).collect();
    let a = &images[w.meridian.zero_based()];
    let e = a.order();
    for g in &images {
        if g.order() != e {
            return Err(CoverError::MeridianOrders(e, g.order()));
        }
    }
    let l = word_image(&w.longitude, &images);
    let ef =
        enumerate_group(&[a.clone(), l], degree, limits.max_cosets).map_err(CosetError::from)?.elements.len() as u64;
    let index = table.index() as u64;
    debug_assert_eq!(index % ef, 0);
    let r = index / ef;
    let out = Efr { e, f: ef / e, r, index };
    assert_eq!(out.e * out.f * out.r, out.index);
    Ok(out)
}

/// Everything computed about `U = ker phi`.
#[derive(Clone, Debug)]
pub struct SubgroupData {
    pub efr: Efr,
    /// Coset table of `U` in `G`.
    pub table: CosetTable,
    pub rewriting: RewritingData,
    /// Smallest coset of each orbit of the peripheral subgroup on `U\G`;
    /// these index the boundary tori.
    pub torus_cosets: Vec<usize>,
    /// `t_j a^e t_j^-1` for each torus coset `j`, in the Schreier generators of `U`.
    pub meridian_powers: Vec<Word>,
}

pub fn subgroup_data(
    w: &WirtingerData,
    images: &[Permutation],
    limits: EnumerationLimits,
) -> Result<SubgroupData, CoverError> {
    let table = kernel_table(&w.pres, images, limits.max_cosets)?;
    let efr = efr_from_table(w, images, &table, limits)?;
    let rewriting = rewrite_presentation(&w.pres, &table)?;

    let a = w.meridian_word();
    let l = &w.longitude;
    let mut orbit = vec![usize::MAX; table.index()];
    let mut torus_cosets = Vec::new();
    for start in 0..table.index() {
        if orbit[start] != usize::MAX {
            continue;
        }
        let id = torus_cosets.len();
        torus_cosets.push(start);
        orbit[start] = id;
        let mut stack = vec![start];
        while let Some(c) = stack.pop() {
            for d in [table.act_word(c, &a), table.act_word(c, l)] {
                if orbit[d] == usize::MAX {
                    orbit[d] = id;
                    stack.push(d);
                }
            }
        }
    }
    debug_assert_eq!(torus_cosets.len() as u64, efr.r);

    let a_e = a.pow(efr.e as i64);
    let meridian_powers = torus_cosets
        .iter()
        .map(|&j| {
            let t = &rewriting.transversal[j];
            rewriting.rewrite_word(&t.mul(&a_e).mul(&t.inverse()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SubgroupData { efr, table, rewriting, torus_cosets, meridian_powers })
}

/// Presentation of `Q` in two forms.
#[derive(Clone, Debug)]
pub struct BranchedPi1 {
    pub efr: Efr,
    /// Rewritten presentation of the kernel of `G / <<a^e>> -> image`.
    pub raw: Presentation,
    pub simplified: Simplified,
}

/// `Q = U / M_U`, computed as the kernel of the map induced on
/// `G' = G / <<a^e>>`.
///
/// `M_U` is the normal closure in `U` of the meridian powers lying in `U`.
/// Every such power is conjugate in `G` to `a^e`, and the normal closure of
/// `a^e` in `G` is generated, as a normal subgroup of `U`, by the conjugates
/// `t_j a^e t_j^-1` over a transversal; so it equals `M_U` and adding the one
/// relator `a^e` to `G` suffices.
pub fn branched_pi1(
    w: &WirtingerData,
    images: &[Permutation],
    limits: EnumerationLimits,
) -> Result<BranchedPi1, CoverError> {
    let efr = efr(w, images, limits)?;
    let g_prime = w.pres.with_extra_relators([w.meridian_word().pow(efr.e as i64)]).expect("meridian is a generator");
    let table = kernel_table(&g_prime, images, limits.max_cosets)?;
    let rewriting = rewrite_presentation(&g_prime, &table)?;
    let simplified = rewriting.simplified(DEFAULT_TIETZE_BUDGET);
    Ok(BranchedPi1 { efr, raw: rewriting.presentation, simplified })
}

/// `Q` built inside `U`: the Schreier presentation of `U` plus one meridian
/// power per boundary torus. Gives the same group as [`branched_pi1`].
pub fn branched_pi1_in_subgroup(sub: &SubgroupData) -> Presentation {
    sub.rewriting
        .presentation
        .with_extra_relators(sub.meridian_powers.iter().cloned())
        .expect("rewritten words use Schreier generators")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderVerdict {
    Finite(u64),
    NotClosed { cosets_defined: usize, steps: u64, limit: Limit },
}

impl OrderVerdict {
    pub fn finite(&self) -> Option<u64> {
        match self {
            OrderVerdict::Finite(n) => Some(*n),
            OrderVerdict::NotClosed { .. } => None,
        }
    }
}

impl Serialize for OrderVerdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = serializer.serialize_map(None)?;
        match self {
            OrderVerdict::Finite(n) => {
                m.serialize_entry("status", "finite")?;
                m.serialize_entry("order", n)?;
            }
            OrderVerdict::NotClosed { cosets_defined, steps, limit } => {
                m.serialize_entry("status", "not_closed")?;
                m.serialize_entry("cosets_defined", cosets_defined)?;
                m.serialize_entry("steps", steps)?;
                m.serialize_entry("limit", &limit.to_string())?;
            }
        }
        m.end()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverReport {
    pub efr: Efr,
    pub q_presentation: Presentation,
    pub order: OrderVerdict,
    pub h1: FinGenAbelianGroup,
    pub label: String,
    /// The input is not checked to be prime, which the identification of
    /// `Q` with the branched cover group assumes.
    pub prime_knot_hypothesis_verified: bool,
}

/// Enumerates the trivial subgroup of the simplified presentation, then of
/// the raw one if that fails; the two attempts share the step budget.
fn order_table(q: &BranchedPi1, limits: EnumerationLimits) -> Result<CosetTable, OrderVerdict> {
    let spent = match enumerate_with(&q.simplified.presentation, &[], limits, Strategy::Felsch) {
        Ok(t) => return Ok(t),
        Err(CosetError::NotClosed { cosets_defined, steps, limit }) => {
            if steps >= limits.max_steps {
                return Err(OrderVerdict::NotClosed { cosets_defined, steps, limit });
            }
            steps
        }
        Err(e) => unreachable!("enumerating the trivial subgroup failed: {e}"),
    };
    let rest = EnumerationLimits { max_steps: limits.max_steps - spent, ..limits };
    match enumerate_with(&q.raw, &[], rest, Strategy::Felsch) {
        Ok(t) => Ok(t),
        Err(CosetError::NotClosed { cosets_defined, steps, limit }) => {
            let limit = match limit {
                Limit::Steps(_) => Limit::Steps(limits.max_steps),
                other => other,
            };
            Err(OrderVerdict::NotClosed { cosets_defined, steps: steps + spent, limit })
        }
        Err(e) => unreachable!("enumerating the trivial subgroup failed: {e}"),
    }
}

pub fn analyze(
    w: &WirtingerData,
    images: &[Permutation],
    limits: EnumerationLimits,
) -> Result<CoverReport, CoverError> {
    let q = branched_pi1(w, images, limits)?;
    let h1 = q.simplified.presentation.abelian_invariants();
    let (order, label) = match order_table(&q, limits) {
        Ok(table) => {
            let group = ConcreteFiniteGroup::from_table(&table);
            let label = identify_group(&group, &h1);
            (OrderVerdict::Finite(table.index() as u64), label)
        }
        Err(verdict) => (verdict, "unknown".to_string()),
    };
    Ok(CoverReport {
        efr: q.efr,
        q_presentation: q.simplified.presentation,
        order,
        h1,
        label,
        prime_knot_hypothesis_verified: false,
    })
}
