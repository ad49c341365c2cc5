//! Machine checks of the exact sequences attached to a branched cover.
//!
//! All checks work with finitely generated abelian groups given as
//! cokernels of integer relation matrices over the Schreier generators of
//! `U = ker phi`. Matrices used for a verdict are kept in the report so the
//! verdict can be recomputed independently.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::abelian::{
    cokernel, hermite_normal_form, induced_map_exactness, row_space_contains, smith_normal_form, solve_in_row_space,
    FinGenAbelianGroup, IntMatrix,
};
use crate::coset_table::{word_image, EnumerationLimits};
use crate::cover::{branched_pi1, subgroup_data, CoverError, Efr, SubgroupData};
use crate::knot::WirtingerData;
use crate::perm::Permutation;
use crate::words::Word;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Exact,
    NotExact,
    NotComputed { reason: String },
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Verdict::Exact => serializer.serialize_str("exact"),
            Verdict::NotExact => serializer.serialize_str("not exact"),
            Verdict::NotComputed { reason } => serializer.collect_str(&format_args!("not computed ({reason})")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Junction {
    pub at: String,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct SequenceCheckReport {
    pub sequence: String,
    pub junctions: Vec<Junction>,
    /// Groups, ranks and counts at the nodes of the sequence.
    pub witness: BTreeMap<String, String>,
    /// Relation and map matrices behind the verdicts.
    #[serde(skip)]
    pub matrices: BTreeMap<String, IntMatrix>,
}

impl SequenceCheckReport {
    fn new(sequence: &str) -> Self {
        SequenceCheckReport {
            sequence: sequence.to_string(),
            junctions: Vec::new(),
            witness: BTreeMap::new(),
            matrices: BTreeMap::new(),
        }
    }

    fn junction(&mut self, at: &str, verdict: Verdict) {
        self.junctions.push(Junction { at: at.to_string(), verdict });
    }

    fn note(&mut self, key: &str, value: impl ToString) {
        self.witness.insert(key.to_string(), value.to_string());
    }

    /// No computed junction failed.
    pub fn passed(&self) -> bool {
        self.junctions.iter().all(|j| j.verdict != Verdict::NotExact)
    }
}

/// Exponent-sum vector of a word over `n` generators.
fn abelianized(w: &Word, n: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    for l in w.letters() {
        v[l.gen().zero_based()] += l.sign();
    }
    v
}

fn rows_of(words: &[Word], n: usize) -> IntMatrix {
    let rows: Vec<Vec<BigInt>> = words.iter().map(|w| abelianized(w, n)).collect();
    IntMatrix::from_rows(n, &rows)
}

fn rank(m: &IntMatrix) -> usize {
    smith_normal_form(m).rank()
}

/// `M_U^ab -> U^ab -> H_1(Q) -> 0`: the cokernel of the meridian powers in
/// `U^ab` must agree with `H_1(Q)` computed from the quotient presentation.
pub fn check_prop_b(
    w: &WirtingerData,
    images: &[Permutation],
    limits: EnumerationLimits,
) -> Result<SequenceCheckReport, CoverError> {
    let sub = subgroup_data(w, images, limits)?;
    let q = branched_pi1(w, images, limits)?;
    let n = sub.rewriting.n_generators();
    let r_u = sub.rewriting.presentation.relation_matrix();
    let powers = rows_of(&sub.meridian_powers, n);
    let quotient = r_u.vstack(&powers).expect("same generators");
    let coker = cokernel(&quotient);
    let h1_q = q.simplified.presentation.abelian_invariants();

    let mut report = SequenceCheckReport::new("M_U^ab -> U^ab -> H_1(Q) -> 0");
    report.note("U^ab", cokernel(&r_u));
    report.note("boundary tori", sub.efr.r);
    report.note("cokernel of meridian powers", &coker);
    report.note("H_1(Q)", &h1_q);
    let verdict = if coker == h1_q { Verdict::Exact } else { Verdict::NotExact };
    report.junction("U^ab", verdict);
    report.matrices.insert("U relations".into(), r_u);
    report.matrices.insert("meridian powers".into(), powers);
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingReport {
    /// `r = index`: every boundary torus lifts to `index` separate tori.
    pub complete_splitting: bool,
    pub r: u64,
    pub index: u64,
    pub meridian_image_trivial: bool,
    pub homomorphism_trivial: bool,
    /// The three conditions agree, as they must for a knot.
    pub consistent: bool,
}

pub fn check_splitting(
    w: &WirtingerData,
    images: &[Permutation],
    limits: EnumerationLimits,
) -> Result<SplittingReport, CoverError> {
    let efr = crate::cover::efr(w, images, limits)?;
    let complete_splitting = efr.r == efr.index;
    let meridian_image_trivial = images[w.meridian.zero_based()].is_identity();
    let homomorphism_trivial = images.iter().all(Permutation::is_identity);
    Ok(SplittingReport {
        complete_splitting,
        r: efr.r,
        index: efr.index,
        meridian_image_trivial,
        homomorphism_trivial,
        consistent: complete_splitting == meridian_image_trivial && meridian_image_trivial == homomorphism_trivial,
    })
}

/// Basis `{a^e, u}` of the lattice `{(x, y) : phi(a^x l^y) = 1}`, so that
/// `H ∩ U = <a^e, a^x l^y>` with `u = (x, y)`.
///
/// The lattice is first put in Hermite normal form `{v, w}`; writing
/// `(e, 0) = alpha v + beta w` with `alpha, beta` coprime, an extended Euclid
/// step gives `gamma, delta` with `alpha delta - beta gamma = 1` and
/// `u = gamma v + delta w`.
pub fn peripheral_lattice_basis(w: &WirtingerData, images: &[Permutation], efr: &Efr) -> [(i64, i64); 2] {
    let degree = images.iter().map(Permutation::degree).max().unwrap_or(0);
    let images: Vec<Permutation> = images.iter().map(|g| g.padded(degree)).collect();
    let a = &images[w.meridian.zero_based()];
    let l = word_image(&w.longitude, &images, degree);
    let powers_of_a: Vec<Permutation> = (0..efr.e).map(|k| a.pow(k)).collect();
    let mut l_pow = Permutation::identity(degree);
    let (x0, y0) = (1..=efr.e * efr.f)
        .find_map(|y| {
            l_pow = l_pow.then(&l);
            powers_of_a.iter().position(|p| *p == l_pow).map(|x| (x as i64, y as i64))
        })
        .expect("some power of l lies in <a>");
    let e = efr.e as i64;
    let lattice = hermite_normal_form(&IntMatrix::from_i64(&[&[e, 0], &[-x0, y0]]));
    let v: Vec<BigInt> = lattice.row(0).to_vec();
    let wv: Vec<BigInt> = lattice.row(1).to_vec();
    let coeffs = solve_in_row_space(&lattice, &[BigInt::from(e), BigInt::zero()]).expect("(e, 0) is in the lattice");
    let (alpha, beta) = (&coeffs[0], &coeffs[1]);
    let g = alpha.extended_gcd(beta);
    assert!(g.gcd.is_one() || (-&g.gcd).is_one(), "(e, 0) is primitive in the lattice");
    // alpha * x + beta * y = gcd = +-1, so delta = x, gamma = -y
    let sign = if g.gcd.is_one() { BigInt::one() } else { -BigInt::one() };
    let delta = &g.x * &sign;
    let gamma = -&g.y * &sign;
    let u: Vec<BigInt> = (0..2).map(|k| &gamma * &v[k] + &delta * &wv[k]).collect();
    let to_i64 = |b: &BigInt| i64::try_from(b).expect("small lattice coordinates");
    [(e, 0), (to_i64(&u[0]), to_i64(&u[1]))]
}

fn peripheral_word(w: &WirtingerData, (x, y): (i64, i64)) -> Word {
    w.meridian_word().pow(x).mul(&w.longitude.pow(y))
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PropDOutcome {
    NotApplicable { hypothesis: String, detail: String },
    Checked(SequenceCheckReport),
}

impl PropDOutcome {
    pub fn passed(&self) -> bool {
        match self {
            PropDOutcome::NotApplicable { .. } => true,
            PropDOutcome::Checked(r) => r.passed(),
        }
    }
}

/// `H_1(H ∩ U) -> H_1(U) -> H_1(Q) -> 0` together with the rank statement
/// for `H^1(Q)`, when the lifted knot is connected (`r = 1`) and its
/// longitude is null-homologous in the cover.
pub fn check_prop_d(
    w: &WirtingerData,
    images: &[Permutation],
    limits: EnumerationLimits,
) -> Result<PropDOutcome, CoverError> {
    let sub = subgroup_data(w, images, limits)?;
    if sub.efr.r != 1 {
        return Ok(PropDOutcome::NotApplicable {
            hypothesis: "r = 1".into(),
            detail: format!("the preimage of the knot has r = {} components", sub.efr.r),
        });
    }
    let n = sub.rewriting.n_generators();
    let basis = peripheral_lattice_basis(w, images, &sub.efr);
    let peripheral: Vec<Word> =
        basis.iter().map(|&v| sub.rewriting.rewrite_word(&peripheral_word(w, v))).collect::<Result<_, _>>()?;
    let r_u = sub.rewriting.presentation.relation_matrix();
    let r_u_basis = hermite_normal_form(&r_u);
    if !row_space_contains(&r_u_basis, &abelianized(&peripheral[1], n)) {
        return Ok(PropDOutcome::NotApplicable {
            hypothesis: "longitude null-homologous".into(),
            detail: "the lifted longitude is nonzero in H_1(U)".into(),
        });
    }

    let iota = rows_of(&peripheral, n);
    let q_relations = r_u.vstack(&rows_of(&sub.meridian_powers, n)).expect("same generators");
    let identity = IntMatrix::identity(n);
    let at_u = induced_map_exactness(&iota, &identity, &r_u, &q_relations).expect("dimensions agree");
    let h1_q = cokernel(&q_relations);
    let onto = cokernel(&identity.vstack(&q_relations).expect("same width")).is_trivial();

    // rank H^1(Q) = rank H^1(U) - rank of the restriction to H^1(H ∩ U)
    let rank_iota = rank(&iota.vstack(&r_u).expect("same width")) - rank(&r_u);
    let h1_u = cokernel(&r_u);
    let rank_h1_dual = h1_u.free_rank - rank_iota;

    let mut report = SequenceCheckReport::new("H_1(H∩U) -> H_1(U) -> H_1(Q) -> 0");
    report.note("H∩U basis", format!("a^{} ; a^{} l^{}", basis[0].0, basis[1].0, basis[1].1));
    report.note("H_1(U)", &h1_u);
    report.note("H_1(Q)", &h1_q);
    report.note("rank H^1(Q) from dual map", rank_h1_dual);
    report.note("free rank H_1(Q)", h1_q.free_rank);
    report
        .note("torsion of H_1(Q) (informational)", FinGenAbelianGroup { free_rank: 0, torsion: h1_q.torsion.clone() });
    let verdict = |ok: bool| if ok { Verdict::Exact } else { Verdict::NotExact };
    report.junction("H_1(U)", verdict(at_u.exact));
    report.junction("H_1(Q) -> 0", verdict(onto));
    report.junction("rank H^1(Q)", verdict(rank_h1_dual == h1_q.free_rank));
    report.matrices.insert("H∩U -> U".into(), iota);
    report.matrices.insert("U relations".into(), r_u);
    report.matrices.insert("Q relations".into(), q_relations);
    Ok(PropDOutcome::Checked(report))
}

/// The peripheral sequence of `U`, one summand per boundary torus:
///
/// ```text
/// 0 -> H^0(U) -> ⊕H_2(H∩U) -> H_2(U) -> H^1(U) -> ⊕H_1(H∩U) -> H_1(U)
///   -> H^2(U) -> ⊕H_0(H∩U) -> H_0(U) -> 0
/// ```
///
/// Only the junction at `H_0(U)` is decided. The image of `⊕H_1(H∩U)` in
/// `H_1(U)` is recorded; every junction that involves `H_2` or `H^2`, or the
/// duality map out of `H^1(U)`, is reported as not computed.
pub fn check_prop_c_degree01(
    w: &WirtingerData,
    images: &[Permutation],
    limits: EnumerationLimits,
) -> Result<SequenceCheckReport, CoverError> {
    let sub = subgroup_data(w, images, limits)?;
    let r = sub.efr.r as usize;
    let mut report = SequenceCheckReport::new(
        "H^0(U) -> ⊕H_2(H∩U) -> H_2(U) -> H^1(U) -> ⊕H_1(H∩U) -> H_1(U) -> H^2(U) -> ⊕H_0(H∩U) -> H_0(U) -> 0",
    );

    let ones = IntMatrix::from_rows(1, &vec![vec![1i64]; r]);
    let h0_onto = cokernel(&ones).is_trivial();
    report.note("boundary tori", r);
    report.matrices.insert("H_0 map".into(), ones);

    let image = peripheral_h1_image(w, images, &sub);
    let n = sub.rewriting.n_generators();
    let r_u = sub.rewriting.presentation.relation_matrix();
    let quotient = cokernel(&r_u.vstack(&image).expect("same width"));
    let prop_b = cokernel(&r_u.vstack(&rows_of(&sub.meridian_powers, n)).expect("same width"));
    report.note("H_1(U)", cokernel(&r_u));
    report.note("H_1(U) / image of ⊕H_1(H∩U)", &quotient);
    report.note("image has finite index", quotient.is_finite());
    report.note("cokernel of meridian powers", &prop_b);

    let not_computed = |reason: &str| Verdict::NotComputed { reason: reason.into() };
    let h2 = "H_2(U) is not determined by a presentation";
    report.junction("⊕H_2(H∩U)", not_computed(h2));
    report.junction("H_2(U)", not_computed(h2));
    report.junction("H^1(U)", not_computed(h2));
    report.junction("⊕H_1(H∩U)", not_computed("the map out of H^1(U) is a duality map"));
    report.junction("H_1(U)", not_computed("needs H^2(U)"));
    report.junction("H^2(U)", not_computed("needs H^2(U)"));
    report.junction("⊕H_0(H∩U)", not_computed("needs the map out of H^2(U)"));
    report.junction("H_0(U) -> 0", if h0_onto { Verdict::Exact } else { Verdict::NotExact });
    report.matrices.insert("⊕H_1(H∩U) -> H_1(U)".into(), image);
    report.matrices.insert("U relations".into(), r_u);
    Ok(report)
}

/// Rows: `t_j a^e t_j^-1` and `t_j u t_j^-1` for every boundary torus `j`.
fn peripheral_h1_image(w: &WirtingerData, images: &[Permutation], sub: &SubgroupData) -> IntMatrix {
    let basis = peripheral_lattice_basis(w, images, &sub.efr);
    let n = sub.rewriting.n_generators();
    let mut words = Vec::new();
    for &j in &sub.torus_cosets {
        let t = &sub.rewriting.transversal[j];
        for &v in &basis {
            let g = t.mul(&peripheral_word(w, v)).mul(&t.inverse());
            words.push(sub.rewriting.rewrite_word(&g).expect("peripheral elements of the torus lie in U"));
        }
    }
    rows_of(&words, n)
}
