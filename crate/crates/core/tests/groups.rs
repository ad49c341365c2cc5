use covers_core::coset_table::kernel_table;
use covers_core::cover::subgroup_data;
use covers_core::identify::{identify_group, ConcreteFiniteGroup};
use covers_core::knot::{builtin, linking_hom, wirtinger};
use covers_core::verify::{check_prop_b, check_prop_c_degree01, check_prop_d, check_splitting, PropDOutcome, Verdict};
use covers_core::{EnumerationLimits, FinGenAbelianGroup, IntMatrix, Permutation, Presentation, WirtingerData};
use covers_oracles as oracle;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn perm(p: &[usize]) -> Permutation {
    Permutation::from_images(p.iter().map(|&i| i as u32).collect())
}

fn materialize(gens: &[Vec<usize>]) -> ConcreteFiniteGroup {
    let free = Presentation::free(Presentation::numbered_names("g", gens.len())).unwrap();
    let images: Vec<Permutation> = gens.iter().map(|g| perm(g)).collect();
    ConcreteFiniteGroup::from_table(&kernel_table(&free, &images, 10_000).unwrap())
}

fn to_rows(m: &IntMatrix) -> Vec<Vec<i64>> {
    m.row_vectors().iter().map(|r| r.iter().map(|x| i64::try_from(x).unwrap()).collect()).collect()
}

fn oracle_cokernel(m: &IntMatrix) -> FinGenAbelianGroup {
    let (free, torsion) = oracle::cokernel_invariants(&to_rows(m), m.cols());
    let torsion: Vec<u64> = torsion.iter().map(|&d| d as u64).collect();
    FinGenAbelianGroup::from_parts(free, &torsion)
}

/// Subgroups of S4 generated by random pairs, plus a few named ones.
fn small_groups() -> Vec<Vec<Vec<usize>>> {
    let s4 = oracle::symmetric_group(4);
    let mut rng = StdRng::seed_from_u64(7);
    let mut out: Vec<Vec<Vec<usize>>> = (0..60)
        .map(|_| {
            let a = s4.choose(&mut rng).unwrap().clone();
            let b = s4.choose(&mut rng).unwrap().clone();
            vec![a, b]
        })
        .collect();
    // Z/5 and D5 on five points
    out.push(vec![vec![1, 2, 3, 4, 0]]);
    out.push(vec![vec![1, 2, 3, 4, 0], vec![0, 4, 3, 2, 1]]);
    // Z/2 x Z/2 x Z/2 on six points
    out.push(vec![vec![1, 0, 2, 3, 4, 5], vec![0, 1, 3, 2, 4, 5], vec![0, 1, 2, 3, 5, 4]]);
    out
}

#[test]
fn probes_match_cayley_tables() {
    for gens in small_groups() {
        let g = materialize(&gens);
        let degree = gens[0].len();
        let cayley = oracle::CayleyTable::from_permutations(&oracle::closure(&gens, degree));
        assert!(cayley.order() <= 24);
        assert_eq!(g.order(), cayley.order(), "{gens:?}");
        assert_eq!(g.involution_count(), cayley.involutions(), "{gens:?}");
        assert_eq!(g.center().len(), cayley.center_order(), "{gens:?}");
        assert_eq!(g.is_abelian(), cayley.is_abelian());
        assert_eq!(g.is_cyclic(), cayley.is_cyclic());
        assert_eq!(g.derived_subgroup_order(), cayley.derived_order(), "{gens:?}");
        let mut mine = g.element_orders();
        let mut theirs: Vec<u64> = (0..cayley.order()).map(|x| cayley.element_order(x) as u64).collect();
        mine.sort();
        theirs.sort();
        assert_eq!(mine, theirs);
    }
}

#[test]
fn cyclic_labels_have_a_generator_of_full_order() {
    for gens in small_groups() {
        let g = materialize(&gens);
        let free = Presentation::free(Presentation::numbered_names("g", gens.len())).unwrap();
        let t = kernel_table(&free, &gens.iter().map(|p| perm(p)).collect::<Vec<_>>(), 100).unwrap();
        let h1 = abelianization_of_table(&t);
        let label = identify_group(&g, &h1);
        if label.starts_with("Z/") && !label.contains(" x ") {
            assert!(g.element_orders().contains(&(g.order() as u64)), "{label}");
        }
    }
}

/// `G^ab` from the multiplication table: one generator per element and the
/// relations `e_x + e_y = e_xy`.
fn abelianization_of_table(t: &covers_core::CosetTable) -> FinGenAbelianGroup {
    let g = ConcreteFiniteGroup::from_table(t);
    let n = g.order();
    let mut rows = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let mut r = vec![0i64; n];
            r[x] += 1;
            r[y] += 1;
            r[g.mul(x, y)] -= 1;
            rows.push(r);
        }
    }
    covers_core::abelian::cokernel(&IntMatrix::from_rows(n, &rows))
}

#[test]
fn labels_survive_relabeling() {
    let mut rng = StdRng::seed_from_u64(11);
    for gens in small_groups() {
        let degree = gens[0].len();
        // conjugate by a random point relabeling and reorder the generators
        let mut sigma: Vec<usize> = (0..degree).collect();
        sigma.shuffle(&mut rng);
        let inv = oracle::invert(&sigma);
        let mut moved: Vec<Vec<usize>> =
            gens.iter().map(|g| oracle::compose(&oracle::compose(&inv, g), &sigma)).collect();
        moved.reverse();
        let (a, b) = (materialize(&gens), materialize(&moved));
        let free = |k| Presentation::free(Presentation::numbered_names("g", k)).unwrap();
        let ta = kernel_table(&free(gens.len()), &gens.iter().map(|p| perm(p)).collect::<Vec<_>>(), 100).unwrap();
        let tb = kernel_table(&free(moved.len()), &moved.iter().map(|p| perm(p)).collect::<Vec<_>>(), 100).unwrap();
        let (ha, hb) = (abelianization_of_table(&ta), abelianization_of_table(&tb));
        assert_eq!(ha, hb);
        assert_eq!(identify_group(&a, &ha), identify_group(&b, &hb));
    }
}

fn trefoil() -> WirtingerData {
    wirtinger(&builtin("trefoil").unwrap())
}

/// The trefoil onto S3, found by exhaustive search.
fn s3_images(w: &WirtingerData) -> Vec<Permutation> {
    let relators: Vec<Vec<i32>> =
        w.pres.relators().iter().map(|r| r.letters().iter().map(|l| l.signed()).collect()).collect();
    let homs = oracle::homomorphisms_to_symmetric(w.pres.ngens(), &relators, 3);
    let onto = homs.into_iter().find(|h| oracle::closure(h, 3).len() == 6).unwrap();
    onto.iter().map(|p| perm(p)).collect()
}

#[test]
fn prop_b_verdicts_rederive_from_witness_matrices() {
    let w = trefoil();
    let limits = EnumerationLimits::default();
    let mut cases: Vec<Vec<Permutation>> = (1..=5).map(|n| linking_hom(&w, n)).collect();
    cases.push(s3_images(&w));
    for images in cases {
        let r = check_prop_b(&w, &images, limits).unwrap();
        assert!(r.passed());
        let stacked = r.matrices["U relations"].vstack(&r.matrices["meridian powers"]).unwrap();
        let coker = oracle_cokernel(&stacked);
        assert_eq!(coker.to_string(), r.witness["cokernel of meridian powers"]);
        assert_eq!(r.witness["H_1(Q)"], coker.to_string());
        assert_eq!(oracle_cokernel(&r.matrices["U relations"]).to_string(), r.witness["U^ab"]);
    }
}

#[test]
fn prop_b_on_figure_eight() {
    let w = wirtinger(&builtin("figure-eight").unwrap());
    let r = check_prop_b(&w, &linking_hom(&w, 2), EnumerationLimits::default()).unwrap();
    assert!(r.passed());
    assert_eq!(r.witness["H_1(Q)"], "Z/5");
}

#[test]
fn prop_d_verdicts_rederive_from_witness_matrices() {
    let w = trefoil();
    for n in 1..=4 {
        let PropDOutcome::Checked(r) = check_prop_d(&w, &linking_hom(&w, n), EnumerationLimits::default()).unwrap()
        else {
            panic!("n={n} should be applicable");
        };
        assert!(r.passed(), "n={n}");
        let q = oracle_cokernel(&r.matrices["Q relations"]);
        assert_eq!(q.to_string(), r.witness["H_1(Q)"]);
        // the image of H_1(H∩U) plus the U relations give the Q relations' row space
        let u = &r.matrices["U relations"];
        let with_image = oracle_cokernel(&u.vstack(&r.matrices["H∩U -> U"]).unwrap());
        assert_eq!(with_image, q, "n={n}");
        assert_eq!(r.witness["rank H^1(Q) from dual map"], q.free_rank.to_string());
    }
}

#[test]
fn splitting_and_applicability_on_s3() {
    let w = trefoil();
    let limits = EnumerationLimits::default();
    let images = s3_images(&w);
    let s = check_splitting(&w, &images, limits).unwrap();
    assert!(!s.complete_splitting && s.consistent);
    match check_prop_d(&w, &images, limits).unwrap() {
        PropDOutcome::NotApplicable { hypothesis, .. } => assert_eq!(hypothesis, "r = 1"),
        other => panic!("{other:?}"),
    }
    let c = check_prop_c_degree01(&w, &images, limits).unwrap();
    let r = subgroup_data(&w, &images, limits).unwrap().efr.r;
    assert_eq!(c.matrices["H_0 map"].rows() as u64, r);
    assert_eq!(oracle_cokernel(&c.matrices["H_0 map"]), FinGenAbelianGroup::trivial());
    let not_computed: Vec<&str> = c
        .junctions
        .iter()
        .filter(|j| matches!(j.verdict, Verdict::NotComputed { .. }))
        .map(|j| j.at.as_str())
        .collect();
    assert!(not_computed.iter().any(|j| j.contains("H_2")));
}

#[test]
fn prop_c_image_is_consistent_with_prop_b() {
    let w = trefoil();
    for n in 2..=3 {
        let c = check_prop_c_degree01(&w, &linking_hom(&w, n), EnumerationLimits::default()).unwrap();
        assert!(c.passed());
        let quotient = oracle_cokernel(&c.matrices["U relations"].vstack(&c.matrices["⊕H_1(H∩U) -> H_1(U)"]).unwrap());
        assert_eq!(quotient.to_string(), c.witness["H_1(U) / image of ⊕H_1(H∩U)"]);
        assert!(quotient.is_finite());
        // with r = 1 the image quotient is H_1(Q)
        assert_eq!(quotient.to_string(), c.witness["cokernel of meridian powers"]);
    }
}
