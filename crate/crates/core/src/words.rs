//! Free-group words over indexed generators.
//!
//! Every constructor freely reduces, so structural equality of two [`Word`]s is
//! equality in the free group. Generator names are not stored here; they live in
//! the owning [`Presentation`](crate::presentation::Presentation).

use std::collections::BTreeMap;
use std::fmt;
use std::num::NonZeroU32;

use thiserror::Error;

/// 1-based index into a presentation's generator list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneratorIndex(NonZeroU32);

impl GeneratorIndex {
    pub fn new(id: u32) -> Option<Self> {
        NonZeroU32::new(id).map(Self)
    }

    pub fn from_zero_based(i: usize) -> Self {
        Self(NonZeroU32::new(i as u32 + 1).expect("index overflow"))
    }

    pub fn get(self) -> u32 {
        self.0.get()
    }

    pub fn zero_based(self) -> usize {
        self.0.get() as usize - 1
    }
}

impl fmt::Display for GeneratorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A generator or its inverse.
///
/// Stored as a signed integer: `+g` is the generator, `-g` its inverse.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(i32);

impl Letter {
    pub fn new(gen: GeneratorIndex, inverse: bool) -> Self {
        let g = gen.get() as i32;
        Letter(if inverse { -g } else { g })
    }

    pub fn pos(gen: GeneratorIndex) -> Self {
        Self::new(gen, false)
    }

    pub fn neg(gen: GeneratorIndex) -> Self {
        Self::new(gen, true)
    }

    /// Builds a letter from a nonzero signed id (`-3` is the inverse of generator 3).
    pub fn from_signed(id: i32) -> Option<Self> {
        (id != 0).then_some(Letter(id))
    }

    pub fn gen(self) -> GeneratorIndex {
        GeneratorIndex::new(self.0.unsigned_abs()).unwrap()
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    /// +1 or -1.
    pub fn sign(self) -> i32 {
        self.0.signum()
    }

    pub fn signed(self) -> i32 {
        self.0
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    /// Coset-table column: `2i` for generator `i` (0-based), `2i + 1` for its inverse.
    pub fn column(self) -> usize {
        2 * self.gen().zero_based() + usize::from(self.is_inverse())
    }

    pub fn from_column(col: usize) -> Self {
        Self::new(GeneratorIndex::from_zero_based(col / 2), col % 2 == 1)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "x{}^-1", self.gen())
        } else {
            write!(f, "x{}", self.gen())
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("no image given for generator {0}")]
    MissingImage(GeneratorIndex),
}

/// A freely reduced word.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// Freely reduces a raw letter sequence.
    pub fn reduce(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn from_letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn generator(g: GeneratorIndex) -> Self {
        Word(vec![Letter::pos(g)])
    }

    /// Builds a word from signed ids, e.g. `[1, 2, -1]` is `x1 x2 x1^-1`.
    ///
    /// Panics on a zero entry.
    pub fn from_signed(ids: &[i32]) -> Self {
        Self::reduce(ids.iter().map(|&i| Letter::from_signed(i).expect("zero letter")))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn mul(&self, other: &Word) -> Word {
        Self::reduce(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `self · other · self⁻¹`
    pub fn conjugate(&self, other: &Word) -> Word {
        self.mul(other).mul(&self.inverse())
    }

    /// Splits `w = conjugator · core · conjugator⁻¹` with `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let w = &self.0;
        let mut i = 0;
        let mut j = w.len();
        while j >= i + 2 && w[i] == w[j - 1].inverse() {
            i += 1;
            j -= 1;
        }
        (Word(w[i..j].to_vec()), Word(w[..i].to_vec()))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.0.len() < 2 || self.0[0] != self.0[self.0.len() - 1].inverse()
    }

    /// Applies the homomorphism sending generator `g` to `images[g]`.
    pub fn substitute(&self, images: &BTreeMap<GeneratorIndex, Word>) -> Result<Word, WordError> {
        self.substitute_with(|g| images.get(&g).cloned())
    }

    /// Like [`substitute`](Self::substitute) with images indexed by 0-based generator.
    pub fn substitute_slice(&self, images: &[Word]) -> Result<Word, WordError> {
        self.substitute_with(|g| images.get(g.zero_based()).cloned())
    }

    pub fn substitute_with(&self, mut image: impl FnMut(GeneratorIndex) -> Option<Word>) -> Result<Word, WordError> {
        let mut letters = Vec::new();
        for &l in &self.0 {
            let img = image(l.gen()).ok_or(WordError::MissingImage(l.gen()))?;
            if l.is_inverse() {
                letters.extend(img.0.iter().rev().map(|x| x.inverse()));
            } else {
                letters.extend_from_slice(&img.0);
            }
        }
        Ok(Word::reduce(letters))
    }

    pub fn exponent_sum(&self, g: GeneratorIndex) -> i64 {
        self.0.iter().filter(|l| l.gen() == g).map(|l| l.sign() as i64).sum()
    }

    pub fn total_exponent(&self) -> i64 {
        self.0.iter().map(|l| l.sign() as i64).sum()
    }

    pub fn max_generator(&self) -> Option<GeneratorIndex> {
        self.0.iter().map(|l| l.gen()).max()
    }

    /// Renders with the given generator names, collapsing runs into powers:
    /// `a^2*b*a^-1`. The identity renders as `1`.
    pub fn display_with<S: AsRef<str>>(&self, names: &[S]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == l {
                run += 1;
            }
            let name = names
                .get(l.gen().zero_based())
                .map(|s| s.as_ref().to_string())
                .unwrap_or_else(|| format!("x{}", l.gen()));
            let exp = run as i64 * l.sign() as i64;
            parts.push(if exp == 1 { name } else { format!("{name}^{exp}") });
            i += run;
        }
        parts.join("*")
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: [&str; 0] = [];
        write!(f, "Word({})", self.display_with(&names))
    }
}

impl std::ops::Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        Word::mul(self, rhs)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        Word::reduce(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(i: u32) -> GeneratorIndex {
        GeneratorIndex::new(i).unwrap()
    }

    /// Pushes letters and pops on inverse collision.
    fn stack_oracle(letters: &[i32]) -> Vec<i32> {
        let mut stack: Vec<i32> = Vec::new();
        for &l in letters {
            match stack.last() {
                Some(&top) if top == -l => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        stack
    }

    fn signed(w: &Word) -> Vec<i32> {
        w.letters().iter().map(|l| l.signed()).collect()
    }

    fn raw_word() -> impl Strategy<Value = Vec<i32>> {
        prop::collection::vec(prop_oneof![1i32..=3, -3i32..=-1], 0..50)
    }

    #[test]
    fn cancellation() {
        assert!(Word::from_signed(&[1, -1]).is_identity());
        assert_eq!(signed(&Word::from_signed(&[1, 2, -2, 1])), vec![1, 1]);
    }

    #[test]
    fn cyclic_reduction_examples() {
        let (core, conj) = Word::from_signed(&[1, 2, -1]).cyclic_reduce();
        assert_eq!(signed(&core), vec![2]);
        assert_eq!(signed(&conj), vec![1]);

        let (core, conj) = Word::identity().cyclic_reduce();
        assert!(core.is_identity() && conj.is_identity());

        let w = Word::from_signed(&[1, 1, 2, -1, -1]);
        let (core, conj) = w.cyclic_reduce();
        assert_eq!(signed(&core), vec![2]);
        assert_eq!(signed(&conj), vec![1, 1]);
        assert_eq!(conj.conjugate(&core), w);
    }

    #[test]
    fn substitution_examples() {
        let x = Word::generator(g(1));
        let mut images = BTreeMap::new();
        images.insert(g(1), x.clone());
        images.insert(g(2), x.inverse());
        assert!(Word::from_signed(&[1, 2]).substitute(&images).unwrap().is_identity());

        let mut id = BTreeMap::new();
        id.insert(g(1), Word::generator(g(1)));
        assert_eq!(Word::from_signed(&[1]).substitute(&id).unwrap(), Word::from_signed(&[1]));

        // aba b^-1 a^-1 b^-1 under a, b -> t has exponent sum zero
        let trefoil = Word::from_signed(&[1, 2, 1, -2, -1, -2]);
        let t = Word::generator(g(1));
        let abelian: Vec<Word> = vec![t.clone(), t];
        assert!(trefoil.substitute_slice(&abelian).unwrap().is_identity());

        let err = Word::from_signed(&[3]).substitute(&images).unwrap_err();
        assert_eq!(err, WordError::MissingImage(g(3)));
    }

    #[test]
    fn display_collapses_powers() {
        let w = Word::from_signed(&[1, 1, 2, -1]);
        assert_eq!(w.display_with(&["a", "b"]), "a^2*b*a^-1");
        assert_eq!(Word::identity().display_with(&["a"]), "1");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn reduce_matches_stack_oracle(raw in raw_word()) {
            let w = Word::from_signed(&raw);
            prop_assert_eq!(signed(&w), stack_oracle(&raw));
        }

        #[test]
        fn reduce_is_idempotent(raw in raw_word()) {
            let w = Word::from_signed(&raw);
            prop_assert_eq!(Word::reduce(w.letters().iter().copied()), w);
        }

        #[test]
        fn word_times_inverse_is_identity(raw in raw_word()) {
            let w = Word::from_signed(&raw);
            prop_assert!(w.mul(&w.inverse()).is_identity());
        }

        #[test]
        fn cyclic_reduce_reassembles(raw in raw_word()) {
            let w = Word::from_signed(&raw);
            let (core, conj) = w.cyclic_reduce();
            prop_assert!(core.len() <= w.len());
            prop_assert!(core.is_cyclically_reduced());
            prop_assert_eq!(conj.conjugate(&core), w);
        }

        #[test]
        fn substitute_respects_concatenation(u in raw_word(), v in raw_word(), imgs in prop::collection::vec(raw_word(), 3)) {
            let images: Vec<Word> = imgs.iter().map(|r| Word::from_signed(r)).collect();
            let u = Word::from_signed(&u);
            let v = Word::from_signed(&v);
            let lhs = u.mul(&v).substitute_slice(&images).unwrap();
            let rhs = u.substitute_slice(&images).unwrap().mul(&v.substitute_slice(&images).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
