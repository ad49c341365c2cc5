//! Reidemeister–Schreier rewriting.
//!
//! Given a complete coset table for `H ≤ G`, a spanning tree of the coset
//! graph gives a Schreier transversal `t_c`. Each non-tree edge `c --x--> d`
//! yields a Schreier generator `s = t_c x t_d^-1` of `H`, and the conjugates
//! `t_c r t_c^-1` of the relators, rewritten in these generators, present `H`.

use std::collections::VecDeque;

use thiserror::Error;

use crate::coset_table::CosetTable;
use crate::presentation::{tietze_simplify_tracked, Presentation, Simplified};
use crate::words::{GeneratorIndex, Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchreierError {
    #[error("coset table has {table} generators but the presentation has {presentation}")]
    TableMismatch { table: usize, presentation: usize },
    #[error("word is not in the subgroup: it moves coset 1 to coset {}", .ends_at + 1)]
    NotInSubgroup { ends_at: usize },
}

/// Order in which the spanning tree explores the coset graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TransversalPolicy {
    /// Breadth-first, columns `x1, x1^-1, x2, ...`.
    #[default]
    Bfs,
    /// Breadth-first with the generators taken last to first.
    ReverseGenerators,
}

#[derive(Clone, Debug)]
pub struct RewritingData {
    pub table: CosetTable,
    /// Transversal word for every coset; prefix-closed with `t_0` empty.
    pub transversal: Vec<Word>,
    /// `t_c x t_{cx}^-1` for every Schreier generator, as words in `G`.
    pub generator_words: Vec<Word>,
    /// Schreier generator of the edge `(coset, generator)`, or `None` on tree edges.
    edge_generator: Vec<Option<GeneratorIndex>>,
    /// The subgroup presentation, before any simplification.
    pub presentation: Presentation,
}

pub fn rewrite_presentation(p: &Presentation, table: &CosetTable) -> Result<RewritingData, SchreierError> {
    rewrite_presentation_with(p, table, TransversalPolicy::default())
}

pub fn rewrite_presentation_with(
    p: &Presentation,
    table: &CosetTable,
    policy: TransversalPolicy,
) -> Result<RewritingData, SchreierError> {
    let n = p.ngens();
    if table.n_gens() != n {
        return Err(SchreierError::TableMismatch { table: table.n_gens(), presentation: n });
    }
    let k = table.index();
    let cols: Vec<usize> = match policy {
        TransversalPolicy::Bfs => (0..2 * n).collect(),
        TransversalPolicy::ReverseGenerators => (0..n).rev().flat_map(|g| [2 * g, 2 * g + 1]).collect(),
    };

    let mut transversal: Vec<Option<Word>> = vec![None; k];
    let mut tree = vec![false; k * n];
    transversal[0] = Some(Word::identity());
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for &col in &cols {
            let d = table.get(c, col);
            if transversal[d].is_some() {
                continue;
            }
            let l = Letter::from_column(col);
            transversal[d] = Some(transversal[c].as_ref().expect("visited").mul(&Word::from_letter(l)));
            // the positive-letter edge that this tree step uses
            let (from, g) = if l.is_inverse() { (d, l.gen()) } else { (c, l.gen()) };
            tree[from * n + g.zero_based()] = true;
            queue.push_back(d);
        }
    }
    let transversal: Vec<Word> = transversal.into_iter().map(|t| t.expect("coset table is connected")).collect();

    let mut edge_generator = vec![None; k * n];
    let mut generator_words = Vec::new();
    for c in 0..k {
        for g in 0..n {
            if tree[c * n + g] {
                continue;
            }
            let gi = GeneratorIndex::from_zero_based(g);
            let d = table.act(c, Letter::pos(gi));
            edge_generator[c * n + g] = Some(GeneratorIndex::from_zero_based(generator_words.len()));
            let w = transversal[c].mul(&Word::generator(gi)).mul(&transversal[d].inverse());
            generator_words.push(w);
        }
    }

    let mut data = RewritingData {
        table: table.clone(),
        transversal,
        generator_words,
        edge_generator,
        presentation: Presentation::free(Vec::<String>::new()).expect("empty presentation"),
    };
    let mut relators = Vec::with_capacity(k * p.relators().len());
    for c in 0..k {
        for r in p.relators() {
            let (w, end) = data.rewrite_from(c, r);
            debug_assert_eq!(end, c, "relator does not close in the coset table");
            relators.push(w);
        }
    }
    let names = Presentation::numbered_names("s", data.generator_words.len());
    data.presentation = Presentation::new(names, relators).expect("Schreier generators are in range");
    Ok(data)
}

impl RewritingData {
    pub fn n_generators(&self) -> usize {
        self.generator_words.len()
    }

    /// Schreier generator on the edge from `coset` along generator `g`.
    pub fn edge_generator(&self, coset: usize, g: GeneratorIndex) -> Option<GeneratorIndex> {
        self.edge_generator[coset * self.table.n_gens() + g.zero_based()]
    }

    /// Rewrites `w` read from `coset`; returns the rewritten word and the end coset.
    pub fn rewrite_from(&self, coset: usize, w: &Word) -> (Word, usize) {
        let mut c = coset;
        let mut out = Vec::new();
        for &l in w.letters() {
            if l.is_inverse() {
                let d = self.table.act(c, l);
                if let Some(s) = self.edge_generator(d, l.gen()) {
                    out.push(Letter::neg(s));
                }
                c = d;
            } else {
                if let Some(s) = self.edge_generator(c, l.gen()) {
                    out.push(Letter::pos(s));
                }
                c = self.table.act(c, l);
            }
        }
        (Word::reduce(out), c)
    }

    /// Expresses an element of the subgroup in the Schreier generators.
    pub fn rewrite_word(&self, w: &Word) -> Result<Word, SchreierError> {
        let (r, end) = self.rewrite_from(0, w);
        if end != 0 {
            return Err(SchreierError::NotInSubgroup { ends_at: end });
        }
        Ok(r)
    }

    /// Maps a word in the Schreier generators back into `G`.
    pub fn embed(&self, w: &Word) -> Word {
        w.substitute_slice(&self.generator_words).expect("word over the Schreier generators")
    }

    /// Tietze-simplified subgroup presentation with the images of the
    /// Schreier generators in it.
    pub fn simplified(&self, budget: usize) -> Simplified {
        tietze_simplify_tracked(&self.presentation, budget)
    }
}
