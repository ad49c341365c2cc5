use std::collections::BTreeSet;

use covers_core::abelian::{cokernel, induced_map_exactness, smith_normal_form};
use covers_core::coset_table::{enumerate_with, word_image, CosetError};
use covers_core::presentation::{tietze_simplify, DEFAULT_TIETZE_BUDGET};
use covers_core::schreier::{rewrite_presentation, rewrite_presentation_with, TransversalPolicy};
use covers_core::Strategy as Order;
use covers_core::{CosetTable, EnumerationLimits, IntMatrix, Permutation, Presentation, Word};
use covers_oracles as oracle;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

fn signed(w: &Word) -> Vec<i32> {
    w.letters().iter().map(|l| l.signed()).collect()
}

fn letters(n_gens: i32, max_len: usize) -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec((1..=n_gens, any::<bool>()).prop_map(|(g, inv)| if inv { -g } else { g }), 0..=max_len)
}

/// Random generators of a transitive group on `degree` points.
fn transitive_action(rng: &mut StdRng, n_gens: usize, degree: usize) -> Vec<Permutation> {
    loop {
        let perms: Vec<Permutation> = (0..n_gens)
            .map(|_| {
                let mut v: Vec<u32> = (0..degree as u32).collect();
                v.shuffle(rng);
                Permutation::from_images(v)
            })
            .collect();
        if CosetTable::from_action(&perms, degree).is_ok() {
            return perms;
        }
    }
}

fn random_word(rng: &mut StdRng, n_gens: usize, len: usize) -> Word {
    let ids: Vec<i32> = (0..len)
        .map(|_| {
            let g = rng.gen_range(1..=n_gens as i32);
            if rng.gen_bool(0.5) {
                g
            } else {
                -g
            }
        })
        .collect();
    Word::from_signed(&ids)
}

/// A presentation whose relators all hold in the given permutation group:
/// powers `w^ord(w)` of random words.
fn presentation_satisfied_by(rng: &mut StdRng, perms: &[Permutation], n_relators: usize) -> Presentation {
    let degree = perms[0].degree();
    let relators = (0..n_relators)
        .map(|_| {
            let len = rng.gen_range(1..=4);
            let w = random_word(rng, perms.len(), len);
            let k = word_image(&w, perms, degree).order();
            w.pow(k as i64)
        })
        .filter(|w| !w.is_identity())
        .collect();
    Presentation::new(Presentation::numbered_names("x", perms.len()), relators).unwrap()
}

fn check_table_invariants(t: &CosetTable, p: &Presentation) {
    for c in 0..t.index() {
        for col in 0..t.n_cols() {
            assert_eq!(t.get(t.get(c, col), col ^ 1), c);
        }
    }
    for r in p.relators() {
        for c in 0..t.index() {
            assert_eq!(t.act_word(c, r), c);
        }
    }
    // coset numbering is breadth-first from coset 0
    let mut seen = vec![0usize];
    let mut head = 0;
    while head < seen.len() {
        for col in 0..t.n_cols() {
            let d = t.get(seen[head], col);
            if !seen.contains(&d) {
                assert_eq!(d, seen.len());
                seen.push(d);
            }
        }
        head += 1;
    }
    assert_eq!(seen.len(), t.index());
}

fn to_matrix(rows: &[Vec<i64>], cols: usize) -> IntMatrix {
    IntMatrix::from_rows(cols, rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn reduce_matches_stack_oracle(ls in letters(3, 50)) {
        let w = Word::from_signed(&ls);
        prop_assert_eq!(signed(&w), oracle::free_reduce_stack(&ls));
        prop_assert_eq!(Word::reduce(w.letters().iter().copied()), w.clone());
        prop_assert!(w.mul(&w.inverse()).is_identity());
    }

    #[test]
    fn cyclic_reduce_reassembles(ls in letters(3, 30)) {
        let w = Word::from_signed(&ls);
        let (core, conj) = w.cyclic_reduce();
        prop_assert!(core.len() <= w.len());
        prop_assert_eq!(conj.mul(&core).mul(&conj.inverse()), w);
    }

    #[test]
    fn substitute_respects_products(u in letters(2, 12), v in letters(2, 12), a in letters(3, 4), b in letters(3, 4)) {
        let images = [Word::from_signed(&a), Word::from_signed(&b)];
        let (u, v) = (Word::from_signed(&u), Word::from_signed(&v));
        let lhs = u.mul(&v).substitute_slice(&images).unwrap();
        let rhs = u.substitute_slice(&images).unwrap().mul(&v.substitute_slice(&images).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn snf_matches_minor_gcds(entries in prop::collection::vec(-9i64..=9, 36)) {
        let rows: Vec<Vec<i64>> = entries.chunks(6).map(<[i64]>::to_vec).collect();
        let a = to_matrix(&rows, 6);
        let r = smith_normal_form(&a);
        prop_assert_eq!(r.u.mul(&a).unwrap().mul(&r.v).unwrap(), r.s.clone());
        let diag = r.diagonal();
        for w in diag.windows(2) {
            if w[0] != BigInt::from(0) {
                prop_assert_eq!(&w[1] % &w[0], BigInt::from(0));
            }
        }
        let want: Vec<BigInt> = oracle::invariant_factors(&rows).into_iter().map(BigInt::from).collect();
        prop_assert_eq!(diag, want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn nielsen_schreier_count(seed in any::<u64>(), n in 1usize..=3, k in 1usize..=8) {
        let mut rng = StdRng::seed_from_u64(seed);
        let perms = transitive_action(&mut rng, n, k);
        let t = CosetTable::from_action(&perms, k).unwrap();
        let free = Presentation::free(Presentation::numbered_names("x", n)).unwrap();
        let data = rewrite_presentation(&free, &t).unwrap();
        // index k, rank n
        prop_assert_eq!(data.n_generators(), k * (n - 1) + 1);
        prop_assert!(data.presentation.relators().is_empty());
        for w in &data.generator_words {
            prop_assert_eq!(t.act_word(0, w), 0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn subgroup_invariants_ignore_transversal(seed in any::<u64>(), n in 1usize..=3, k in 2usize..=6) {
        let mut rng = StdRng::seed_from_u64(seed);
        let perms = transitive_action(&mut rng, n, k);
        let p = presentation_satisfied_by(&mut rng, &perms, 3);
        let t = CosetTable::from_action(&perms, k).unwrap();
        check_table_invariants(&t, &p);
        let a = rewrite_presentation_with(&p, &t, TransversalPolicy::Bfs).unwrap();
        let b = rewrite_presentation_with(&p, &t, TransversalPolicy::ReverseGenerators).unwrap();
        prop_assert_eq!(a.presentation.abelian_invariants(), b.presentation.abelian_invariants());
        // rewritten relators are trivial back in the permutation image
        for r in a.presentation.relators() {
            prop_assert!(word_image(&a.embed(r), &perms, k).is_identity());
        }
        // rewriting is a homomorphism on subgroup elements
        let u = a.generator_words[rng.gen_range(0..a.n_generators())].clone();
        let v = a.generator_words[rng.gen_range(0..a.n_generators())].inverse();
        prop_assert_eq!(
            a.rewrite_word(&u.mul(&v)).unwrap(),
            a.rewrite_word(&u).unwrap().mul(&a.rewrite_word(&v).unwrap())
        );
    }

    #[test]
    fn enumeration_is_strategy_independent(seed in any::<u64>(), n in 1usize..=2, k in 2usize..=6) {
        let mut rng = StdRng::seed_from_u64(seed);
        let perms = transitive_action(&mut rng, n, k);
        let mut p = presentation_satisfied_by(&mut rng, &perms, 4);
        // make the group finite by bounding each generator's order
        let extra: Vec<Word> = (0..n).map(|g| Word::from_signed(&[g as i32 + 1]).pow(perms[g].order() as i64)).collect();
        p = p.with_extra_relators(extra).unwrap();
        let limits = EnumerationLimits { max_cosets: 20_000, max_steps: 2_000_000 };
        let felsch = enumerate_with(&p, &[], limits, Order::Felsch);
        let hlt = enumerate_with(&p, &[], limits, Order::Hlt);
        if let (Ok(f), Ok(h)) = (&felsch, &hlt) {
            prop_assert_eq!(f.index(), h.index());
            check_table_invariants(f, &p);
            check_table_invariants(h, &p);
            // the permutation image is a quotient
            let image = oracle::closure(
                &perms.iter().map(|q| q.images().iter().map(|&i| i as usize).collect()).collect::<Vec<_>>(),
                k,
            );
            prop_assert_eq!(f.index() % image.len(), 0);
            // larger limits give the same answer
            let bigger = EnumerationLimits { max_cosets: 40_000, max_steps: 4_000_000 };
            prop_assert_eq!(enumerate_with(&p, &[], bigger, Order::Felsch).unwrap().index(), f.index());
            // simplification keeps the abelian invariants and the order
            let s = tietze_simplify(&p, DEFAULT_TIETZE_BUDGET);
            prop_assert!(s.total_length() <= p.total_length());
            prop_assert_eq!(s.abelian_invariants(), p.abelian_invariants());
            prop_assert_eq!(enumerate_with(&s, &[], bigger, Order::Felsch).unwrap().index(), f.index());
        }
        for r in [&felsch, &hlt] {
            if let Err(e) = r {
                prop_assert!(matches!(e, CosetError::NotClosed { .. }), "{}", e);
            }
        }
    }

    #[test]
    fn exactness_matches_enumeration(
        b_mods in prop::collection::vec(2i64..=5, 1..=3),
        c_mods in prop::collection::vec(2i64..=5, 1..=2),
        f_entries in prop::collection::vec(-4i64..=4, 6),
        g_entries in prop::collection::vec(-4i64..=4, 6),
    ) {
        let (nb, nc) = (b_mods.len(), c_mods.len());
        // g must be well defined: b_i * g_i = 0 in C
        let g: Vec<Vec<i64>> = (0..nb)
            .map(|i| (0..nc).map(|j| {
                let step = c_mods[j] / num_integer::gcd(c_mods[j], b_mods[i]);
                g_entries[i * nc + j] * step
            }).collect())
            .collect();
        let f: Vec<Vec<i64>> = f_entries.chunks(nb).take(2).map(|c| c[..nb].to_vec()).collect();
        let diag = |mods: &[i64]| -> Vec<Vec<i64>> {
            (0..mods.len()).map(|i| (0..mods.len()).map(|j| if i == j { mods[i] } else { 0 }).collect()).collect()
        };
        let report = induced_map_exactness(
            &to_matrix(&f, nb),
            &to_matrix(&g, nc),
            &to_matrix(&diag(&b_mods), nb),
            &to_matrix(&diag(&c_mods), nc),
        ).unwrap();
        prop_assert_eq!(report.exact, oracle::finite_abelian_exact(&f, &g, &b_mods, &c_mods));
        let order: i64 = b_mods.iter().product();
        prop_assert_eq!(cokernel(&to_matrix(&diag(&b_mods), nb)).order(), Some(BigInt::from(order)));
    }
}

#[test]
fn triangle_group_tables() {
    // A (2,3,n) triangle group for n = 2..5: orders 6, 12, 24, 60.
    let mut orders = BTreeSet::new();
    for n in 2..=5 {
        let p = covers_core::text::parse_presentation(&format!("<a,b | a^2, b^3, (a*b)^{n}>")).unwrap();
        let t = enumerate_with(&p, &[], EnumerationLimits::default(), Order::Hlt).unwrap();
        let f = enumerate_with(&p, &[], EnumerationLimits::default(), Order::Felsch).unwrap();
        check_table_invariants(&t, &p);
        check_table_invariants(&f, &p);
        assert_eq!(t.index(), f.index());
        orders.insert(t.index());
    }
    assert_eq!(orders, BTreeSet::from([6, 12, 24, 60]));
}
