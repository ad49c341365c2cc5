//! Recognition of the small finite groups that occur as branched cover groups.

use std::collections::HashSet;

use crate::abelian::FinGenAbelianGroup;
use crate::coset_table::CosetTable;
use crate::perm::{enumerate_group, Permutation};
use crate::presentation::Presentation;
use crate::schreier::rewrite_presentation;
use crate::words::Word;

/// A finite group given by its regular action: elements are the cosets of
/// the trivial subgroup, with coset 0 the identity.
#[derive(Clone, Debug)]
pub struct ConcreteFiniteGroup {
    table: CosetTable,
    /// A word for every element, read from the identity.
    words: Vec<Word>,
}

impl ConcreteFiniteGroup {
    /// Coset table of the trivial subgroup.
    pub fn from_table(table: &CosetTable) -> Self {
        let words = breadth_first_words(table);
        ConcreteFiniteGroup { table: table.clone(), words }
    }

    /// The group generated by permutations acting regularly on their points.
    /// Panics if the action is not regular.
    pub fn from_regular_action(gens: &[Permutation]) -> Self {
        let degree = gens.iter().map(Permutation::degree).max().unwrap_or(1);
        let size = enumerate_group(gens, degree, degree).map(|e| e.elements.len());
        assert_eq!(size, Ok(degree), "action is not regular");
        let table = CosetTable::from_action(gens, degree).expect("regular actions are transitive");
        Self::from_table(&table)
    }

    pub fn order(&self) -> usize {
        self.table.index()
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Elements corresponding to the generators of the presentation.
    pub fn generators(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.table.n_gens()).map(|g| self.table.get(0, 2 * g))
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table.act_word(x, &self.words[y])
    }

    pub fn inverse(&self, x: usize) -> usize {
        self.table.act_word(0, &self.words[x].inverse())
    }

    pub fn order_of(&self, x: usize) -> u64 {
        let mut p = x;
        let mut k = 1;
        while p != 0 {
            p = self.mul(p, x);
            k += 1;
        }
        k
    }

    pub fn element_orders(&self) -> Vec<u64> {
        (0..self.order()).map(|x| self.order_of(x)).collect()
    }

    pub fn involution_count(&self) -> usize {
        (0..self.order()).filter(|&x| x != 0 && self.mul(x, x) == 0).count()
    }

    /// Elements commuting with every generator.
    pub fn center(&self) -> Vec<usize> {
        let gens: Vec<usize> = self.generators().collect();
        (0..self.order()).filter(|&x| gens.iter().all(|&g| self.mul(x, g) == self.mul(g, x))).collect()
    }

    pub fn is_abelian(&self) -> bool {
        let gens: Vec<usize> = self.generators().collect();
        gens.iter().all(|&g| gens.iter().all(|&h| self.mul(g, h) == self.mul(h, g)))
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.order()).any(|x| self.order_of(x) == self.order() as u64)
    }

    /// Order of the subgroup generated by `gens`.
    pub fn subgroup_order(&self, gens: &[usize]) -> usize {
        self.closure(gens).len()
    }

    fn closure(&self, gens: &[usize]) -> HashSet<usize> {
        let mut seen = HashSet::from([0usize]);
        let mut stack = vec![0usize];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// Order of the commutator subgroup, as the normal closure of the
    /// commutators of the generators.
    pub fn derived_subgroup_order(&self) -> usize {
        let gens: Vec<usize> = self.generators().collect();
        let mut normal_gens: Vec<usize> = Vec::new();
        for &g in &gens {
            for &h in &gens {
                let c = self.mul(self.mul(self.inverse(g), self.inverse(h)), self.mul(g, h));
                if c != 0 && !normal_gens.contains(&c) {
                    normal_gens.push(c);
                }
            }
        }
        loop {
            let n = self.closure(&normal_gens);
            let mut extra = None;
            'search: for &x in &n {
                for &g in &gens {
                    let y = self.mul(self.mul(self.inverse(g), x), g);
                    if !n.contains(&y) {
                        extra = Some(y);
                        break 'search;
                    }
                }
            }
            match extra {
                Some(y) => normal_gens.push(y),
                None => return n.len(),
            }
        }
    }

    pub fn is_perfect(&self) -> bool {
        self.derived_subgroup_order() == self.order()
    }
}

/// Words reaching each coset from coset 0 along a breadth-first tree.
fn breadth_first_words(table: &CosetTable) -> Vec<Word> {
    let p = Presentation::free(Presentation::numbered_names("g", table.n_gens())).expect("distinct names");
    rewrite_presentation(&p, table).expect("table matches generator count").transversal
}

/// Names the group by a short decision list: trivial, cyclic, the binary
/// polyhedral groups `Q8`, `SL(2,3)`, `SL(2,5)`, and abelian groups by their
/// invariants. Anything else is `unrecognized(order=n)`.
pub fn identify_group(g: &ConcreteFiniteGroup, h1: &FinGenAbelianGroup) -> String {
    let n = g.order();
    if n == 1 {
        return "trivial".into();
    }
    if g.is_cyclic() {
        return format!("Z/{n}");
    }
    let involutions = g.involution_count();
    if n == 8 && involutions == 1 {
        return "Q8".into();
    }
    if n == 24 && *h1 == FinGenAbelianGroup::from_parts(0, &[3]) && involutions == 1 {
        return "SL(2,3)".into();
    }
    if n == 120 && h1.is_trivial() && g.center().len() == 2 {
        return "SL(2,5)".into();
    }
    if g.is_abelian() {
        return h1.to_string();
    }
    format!("unrecognized(order={n})")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset_table::enumerate;
    use crate::text::parse_presentation;

    fn group(s: &str) -> (ConcreteFiniteGroup, FinGenAbelianGroup) {
        let p = parse_presentation(s).unwrap();
        (ConcreteFiniteGroup::from_table(&enumerate(&p, &[]).unwrap()), p.abelian_invariants())
    }

    #[test]
    fn labels() {
        let cases = [
            ("<a | a^3>", "Z/3"),
            ("<a | a>", "trivial"),
            ("<a,b | a^4, a^2 = b^2, b^-1*a*b = a^-1>", "Q8"),
            ("<a,b | a^2, b^2, (a*b)^2>", "Z/2 x Z/2"),
            ("<a,b | a^2, b^3, (a*b)^2>", "unrecognized(order=6)"),
            ("<a,b | a^2, b^3, (a*b)^5>", "unrecognized(order=60)"),
            ("<s,t | (s*t)^2 = s^3 = t^3>", "SL(2,3)"),
            ("<s,t | (s*t)^2 = s^3 = t^5>", "SL(2,5)"),
        ];
        for (s, label) in cases {
            let (g, h1) = group(s);
            assert_eq!(identify_group(&g, &h1), label, "{s}");
        }
    }

    #[test]
    fn probes_on_symmetric_group() {
        let (g, _) = group("<a,b | a^2, b^3, (a*b)^2>");
        assert_eq!(g.order(), 6);
        assert_eq!(g.involution_count(), 3);
        assert_eq!(g.center(), vec![0]);
        assert!(!g.is_abelian());
        assert_eq!(g.derived_subgroup_order(), 3);
        let mut orders = g.element_orders();
        orders.sort();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 3]);
    }

    #[test]
    fn binary_icosahedral_is_perfect() {
        let (g, _) = group("<s,t | (s*t)^2 = s^3 = t^5>");
        assert_eq!(g.order(), 120);
        assert!(g.is_perfect());
        assert_eq!(g.center().len(), 2);
        let inv = g.inverse(g.generators().next().unwrap());
        assert_eq!(g.mul(inv, g.generators().next().unwrap()), 0);
    }
}
