//! Finitely presented groups, Tietze simplification and abelianization.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

pub use crate::abelian::FinGenAbelianGroup;
use crate::abelian::{cokernel, IntMatrix};
use crate::words::{GeneratorIndex, Letter, Word};

/// Default number of Tietze moves.
pub const DEFAULT_TIETZE_BUDGET: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("empty generator name")]
    EmptyName,
    #[error("duplicate generator name {0:?}")]
    DuplicateName(String),
    #[error("relator {relator} uses generator {gen} but only {ngens} generators exist")]
    GeneratorOutOfRange { relator: usize, gen: GeneratorIndex, ngens: usize },
}

/// `⟨generators | relators⟩` with relators stored cyclically reduced and nonempty.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Presentation {
    generator_names: Vec<String>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new<S: Into<String>>(names: Vec<S>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        let generator_names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in generator_names.iter().enumerate() {
            if n.is_empty() {
                return Err(PresentationError::EmptyName);
            }
            if generator_names[..i].contains(n) {
                return Err(PresentationError::DuplicateName(n.clone()));
            }
        }
        let ngens = generator_names.len();
        for (i, r) in relators.iter().enumerate() {
            if let Some(g) = r.max_generator() {
                if g.zero_based() >= ngens {
                    return Err(PresentationError::GeneratorOutOfRange { relator: i, gen: g, ngens });
                }
            }
        }
        let relators = relators.into_iter().map(|r| r.cyclic_reduce().0).filter(|r| !r.is_identity()).collect();
        Ok(Presentation { generator_names, relators })
    }

    /// Free group on the given names.
    pub fn free<S: Into<String>>(names: Vec<S>) -> Result<Self, PresentationError> {
        Self::new(names, Vec::new())
    }

    /// Generators named `prefix1, prefix2, ...`.
    pub fn numbered_names(prefix: &str, n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn ngens(&self) -> usize {
        self.generator_names.len()
    }

    pub fn generator(&self, name: &str) -> Option<GeneratorIndex> {
        self.generator_names.iter().position(|n| n == name).map(GeneratorIndex::from_zero_based)
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    pub fn with_extra_relators(&self, extra: impl IntoIterator<Item = Word>) -> Result<Self, PresentationError> {
        let mut rels = self.relators.clone();
        rels.extend(extra);
        Self::new(self.generator_names.clone(), rels)
    }

    /// One row per relator, one column per generator; entries are exponent sums.
    pub fn relation_matrix(&self) -> IntMatrix {
        let rows: Vec<Vec<i64>> = self
            .relators
            .iter()
            .map(|r| {
                let mut row = vec![0i64; self.ngens()];
                for l in r.letters() {
                    row[l.gen().zero_based()] += l.sign() as i64;
                }
                row
            })
            .collect();
        IntMatrix::from_rows(self.ngens(), &rows)
    }

    pub fn abelian_invariants(&self) -> FinGenAbelianGroup {
        cokernel(&self.relation_matrix())
    }

    pub fn display_word(&self, w: &Word) -> String {
        w.display_with(&self.generator_names)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.display_word(r)).collect();
        write!(f, "<{} | {}>", self.generator_names.join(","), rels.join(", "))
    }
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Presentation{self}")
    }
}

impl Serialize for Presentation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Result of [`tietze_simplify_tracked`].
#[derive(Clone, Debug)]
pub struct Simplified {
    pub presentation: Presentation,
    /// Image of every original generator as a word in the new generators.
    pub generator_images: Vec<Word>,
    /// Original index of every surviving generator.
    pub kept: Vec<GeneratorIndex>,
}

/// Greedy deterministic Tietze simplification.
///
/// Repeats, while the move budget lasts: shorten a relator by substituting a
/// long piece of a shorter relator; otherwise eliminate a generator occurring
/// exactly once in some relator, provided the total relator length does not
/// grow. Duplicate relators (up to cyclic permutation and inversion) are
/// dropped between moves.
pub fn tietze_simplify(p: &Presentation, budget: usize) -> Presentation {
    tietze_simplify_tracked(p, budget).presentation
}

pub fn tietze_simplify_tracked(p: &Presentation, budget: usize) -> Simplified {
    let n = p.ngens();
    let mut st = Tietze {
        rels: p.relators.clone(),
        active: vec![true; n],
        images: (0..n).map(|i| Word::generator(GeneratorIndex::from_zero_based(i))).collect(),
    };
    st.normalize();
    let mut left = budget;
    while left > 0 {
        if st.substring_move() || st.eliminate_move() {
            left -= 1;
            st.normalize();
        } else {
            break;
        }
    }
    st.finish(&p.generator_names)
}

struct Tietze {
    rels: Vec<Word>,
    active: Vec<bool>,
    images: Vec<Word>,
}

fn canonical(w: &Word) -> Vec<i32> {
    let mut best: Option<Vec<i32>> = None;
    for v in [w.clone(), w.inverse()] {
        let s: Vec<i32> = v.letters().iter().map(|l| l.signed()).collect();
        for k in 0..s.len().max(1) {
            let mut rot = s[k..].to_vec();
            rot.extend_from_slice(&s[..k]);
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

fn rotations_and_inverses(r: &Word) -> Vec<Vec<Letter>> {
    let mut out = Vec::with_capacity(2 * r.len());
    for v in [r.clone(), r.inverse()] {
        let s = v.letters();
        for k in 0..s.len() {
            let mut rot = s[k..].to_vec();
            rot.extend_from_slice(&s[..k]);
            out.push(rot);
        }
    }
    out
}

/// Replaces a cyclic occurrence in `s` of more than half of a cyclic variant
/// of `r` by the inverse of the rest of that variant.
fn shorten_with(r: &Word, s: &Word) -> Option<Word> {
    let l = r.len();
    let sl = s.letters();
    let n = sl.len();
    if l == 0 || n == 0 {
        return None;
    }
    let variants = rotations_and_inverses(r);
    for k in (l / 2 + 1..=l.min(n)).rev() {
        for rho in &variants {
            let piece = &rho[..k];
            for p in 0..n {
                if (0..k).all(|i| sl[(p + i) % n] == piece[i]) {
                    let rest: Vec<Letter> = rho[k..].iter().rev().map(|x| x.inverse()).collect();
                    let tail = (k..n).map(|i| sl[(p + i) % n]);
                    let w = Word::reduce(rest.into_iter().chain(tail));
                    return Some(w.cyclic_reduce().0);
                }
            }
        }
    }
    None
}

impl Tietze {
    fn total(&self) -> usize {
        self.rels.iter().map(Word::len).sum()
    }

    fn normalize(&mut self) {
        let mut keyed: Vec<(usize, Vec<i32>, Word)> = self
            .rels
            .drain(..)
            .map(|r| r.cyclic_reduce().0)
            .filter(|r| !r.is_identity())
            .map(|r| (r.len(), canonical(&r), r))
            .collect();
        keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        keyed.dedup_by(|a, b| a.1 == b.1);
        self.rels = keyed.into_iter().map(|(_, _, r)| r).collect();
    }

    fn substring_move(&mut self) -> bool {
        for ri in 0..self.rels.len() {
            for si in 0..self.rels.len() {
                if si == ri || self.rels[si].len() < self.rels[ri].len() {
                    continue;
                }
                if let Some(w) = shorten_with(&self.rels[ri], &self.rels[si]) {
                    self.rels[si] = w;
                    return true;
                }
            }
        }
        false
    }

    fn eliminate_move(&mut self) -> bool {
        let total = self.total();
        // (new total, occurrences, relator length, generator, relator)
        let mut best: Option<(usize, usize, usize, usize, usize)> = None;
        for g in 0..self.active.len() {
            if !self.active[g] {
                continue;
            }
            let gi = GeneratorIndex::from_zero_based(g);
            let occurrences: usize =
                self.rels.iter().map(|r| r.letters().iter().filter(|l| l.gen() == gi).count()).sum();
            for (ri, r) in self.rels.iter().enumerate() {
                if r.letters().iter().filter(|l| l.gen() == gi).count() != 1 {
                    continue;
                }
                let value = solve_for(r, gi);
                let new_total: usize = self
                    .rels
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != ri)
                    .map(|(_, s)| substitute_one(s, gi, &value).cyclic_reduce().0.len())
                    .sum();
                if new_total > total {
                    continue;
                }
                let key = (new_total, occurrences, r.len(), g, ri);
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
            }
        }
        let Some((_, _, _, g, ri)) = best else {
            return false;
        };
        let gi = GeneratorIndex::from_zero_based(g);
        let r = self.rels.remove(ri);
        let value = solve_for(&r, gi);
        for s in &mut self.rels {
            *s = substitute_one(s, gi, &value);
        }
        for img in &mut self.images {
            *img = substitute_one(img, gi, &value);
        }
        self.active[g] = false;
        true
    }

    fn finish(self, names: &[String]) -> Simplified {
        let kept: Vec<GeneratorIndex> =
            (0..self.active.len()).filter(|&g| self.active[g]).map(GeneratorIndex::from_zero_based).collect();
        let mut new_index = vec![None; self.active.len()];
        for (k, g) in kept.iter().enumerate() {
            new_index[g.zero_based()] = Some(GeneratorIndex::from_zero_based(k));
        }
        let relabel = |w: &Word| -> Word {
            w.letters()
                .iter()
                .map(|l| {
                    Letter::new(new_index[l.gen().zero_based()].expect("eliminated generator survived"), l.is_inverse())
                })
                .collect()
        };
        let relators = self.rels.iter().map(relabel).collect();
        let generator_images = self.images.iter().map(relabel).collect();
        let kept_names: Vec<String> = kept.iter().map(|g| names[g.zero_based()].clone()).collect();
        Simplified {
            presentation: Presentation::new(kept_names, relators).expect("relabelling keeps presentation valid"),
            generator_images,
            kept,
        }
    }
}

/// Solves the relator `r = 1` for the single occurrence of `g`.
fn solve_for(r: &Word, g: GeneratorIndex) -> Word {
    let s = r.letters();
    let pos = s.iter().position(|l| l.gen() == g).expect("generator occurs");
    // r rotated to w · g^e, so g^e = w^-1
    let w: Word = s[pos + 1..].iter().chain(s[..pos].iter()).copied().collect();
    if s[pos].is_inverse() {
        w
    } else {
        w.inverse()
    }
}

fn substitute_one(w: &Word, g: GeneratorIndex, value: &Word) -> Word {
    w.substitute_with(|h| Some(if h == g { value.clone() } else { Word::generator(h) })).expect("total substitution")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_presentation;
    use proptest::prelude::*;

    fn pres(s: &str) -> Presentation {
        parse_presentation(s).unwrap()
    }

    #[test]
    fn validation() {
        assert_eq!(
            Presentation::new(vec!["a", "a"], vec![]).unwrap_err(),
            PresentationError::DuplicateName("a".into())
        );
        assert_eq!(Presentation::new(vec![""], vec![]).unwrap_err(), PresentationError::EmptyName);
        assert!(matches!(
            Presentation::new(vec!["a"], vec![Word::from_signed(&[2])]),
            Err(PresentationError::GeneratorOutOfRange { .. })
        ));
    }

    #[test]
    fn relators_are_cyclically_reduced_on_construction() {
        let p = Presentation::new(vec!["a", "b"], vec![Word::from_signed(&[1, 2, -1]), Word::from_signed(&[1, -1])])
            .unwrap();
        assert_eq!(p.relators(), &[Word::from_signed(&[2])]);
    }

    #[test]
    fn kill_trivial_generator() {
        let s = tietze_simplify(&pres("<a,b | b>"), DEFAULT_TIETZE_BUDGET);
        assert_eq!(s.generator_names(), &["a"]);
        assert!(s.relators().is_empty());
    }

    #[test]
    fn trefoil_wirtinger_reduces_to_braid_relation() {
        let s = tietze_simplify(&pres("<a,b,c | a*b = b*c, b*c = c*a>"), DEFAULT_TIETZE_BUDGET);
        assert_eq!(s.ngens(), 2);
        assert_eq!(s.relators().len(), 1);
        let r = &s.relators()[0];
        // some cyclic variant of aba b^-1 a^-1 b^-1 (or with a and b swapped)
        let target1 = canonical(&Word::from_signed(&[1, 2, 1, -2, -1, -2]));
        let target2 = canonical(&Word::from_signed(&[2, 1, 2, -1, -2, -1]));
        let c = canonical(r);
        assert!(c == target1 || c == target2, "got {s}");
    }

    #[test]
    fn commutator_subgroup_of_trefoil_is_free_of_rank_two() {
        // x_j = a^j (a^-1 b) a^-j with x_{k+1} x_{k+2}^-1 x_k^-1 = 1
        let p = pres("<x0,x1,x2,x3,x4,x5 | x1*x2^-1*x0^-1, x2*x3^-1*x1^-1, x3*x4^-1*x2^-1, x4*x5^-1*x3^-1>");
        let s = tietze_simplify(&p, DEFAULT_TIETZE_BUDGET);
        assert_eq!(s.ngens(), 2);
        assert!(s.relators().is_empty());
    }

    #[test]
    fn tracked_images_express_old_generators() {
        let p = pres("<a,b,c | c = a*b>");
        let t = tietze_simplify_tracked(&p, DEFAULT_TIETZE_BUDGET);
        assert_eq!(t.presentation.ngens(), 2);
        assert_eq!(t.kept.len(), 2);
        let lengths: Vec<usize> = t.generator_images.iter().map(Word::len).collect();
        assert_eq!(lengths.iter().filter(|&&l| l == 2).count(), 1);
        // relators of the original map to the identity in the free group on the survivors
        for r in p.relators() {
            assert!(r.substitute_slice(&t.generator_images).unwrap().is_identity());
        }
    }

    #[test]
    fn substring_substitution_shortens() {
        let p = pres("<a,b | a^3, a^2*b^5>");
        let s = tietze_simplify(&p, DEFAULT_TIETZE_BUDGET);
        assert!(s.total_length() < p.total_length());
        assert_eq!(s.abelian_invariants(), p.abelian_invariants());
    }

    #[test]
    fn relation_matrix_examples() {
        assert_eq!(pres("<a | a^3>").relation_matrix(), IntMatrix::from_i64(&[&[3]]));
        assert_eq!(pres("<a,b | a*b*a = b*a*b>").relation_matrix(), IntMatrix::from_i64(&[&[1, -1]]));
        let free = pres("<a,b | >").relation_matrix();
        assert_eq!((free.rows(), free.cols()), (0, 2));
    }

    #[test]
    fn abelian_invariants_examples() {
        assert_eq!(pres("<a,b | a*b*a = b*a*b>").abelian_invariants(), FinGenAbelianGroup::free(1));
        assert_eq!(pres("<x,y | x^2, y^2, (x*y)^2>").abelian_invariants(), FinGenAbelianGroup::from_parts(0, &[2, 2]));
        assert_eq!(pres("<a | >").abelian_invariants(), FinGenAbelianGroup::free(1));
        assert_eq!(pres("<a,b,c | >").abelian_invariants(), FinGenAbelianGroup::free(3));
    }

    fn random_presentation() -> impl Strategy<Value = Presentation> {
        let word = prop::collection::vec(prop_oneof![1i32..=3, -3i32..=-1], 1..8);
        prop::collection::vec(word, 0..5).prop_map(|rels| {
            Presentation::new(vec!["a", "b", "c"], rels.iter().map(|r| Word::from_signed(r)).collect()).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn tietze_preserves_abelianization(p in random_presentation()) {
            let s = tietze_simplify(&p, DEFAULT_TIETZE_BUDGET);
            prop_assert!(s.total_length() <= p.total_length());
            prop_assert_eq!(s.abelian_invariants(), p.abelian_invariants());
        }

        #[test]
        fn tietze_is_deterministic(p in random_presentation()) {
            prop_assert_eq!(tietze_simplify(&p, 50), tietze_simplify(&p, 50));
        }

        #[test]
        fn abelianization_ignores_relator_order_and_inversion(p in random_presentation(), rot in 0usize..8) {
            let mut rels: Vec<Word> = p.relators().iter().rev().map(|r| {
                let s = r.letters();
                let k = rot % s.len();
                Word::reduce(s[k..].iter().chain(s[..k].iter()).copied()).inverse()
            }).collect();
            let shift = rot % rels.len().max(1);
            rels.rotate_left(shift);
            let q = Presentation::new(p.generator_names().to_vec(), rels).unwrap();
            prop_assert_eq!(p.abelian_invariants(), q.abelian_invariants());
        }
    }
}
