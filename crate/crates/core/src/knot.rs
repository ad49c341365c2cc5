//! Knot diagrams, their Wirtinger presentations and peripheral words.
//!
//! PD convention: `X[i,j,k,l]` lists the four edge labels counterclockwise,
//! starting from the incoming under-strand `i`. Edges are labelled `1..2n`
//! in order along the knot, so the outgoing under-strand is `k = i+1`
//! (mod `2n`). The over-strand runs `l -> j` when `j = l+1` (a positive
//! crossing) and `j -> l` when `l = j+1` (negative). With two edges both
//! readings fit and the sign must be written out: `X[1,1,2,2] sign=+`.
//!
//! Wirtinger generators are the arcs (maximal over-strands), named `a, b, c,
//! ...` in order of their smallest edge label, so the meridian `a` is the arc
//! containing edge 1. At a crossing with over-arc `o`, sign `e`, incoming
//! under-arc `x` and outgoing `y` the relation is `y = o^-e x o^e`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::perm::Permutation;
use crate::presentation::Presentation;
use crate::text::line_col;
use crate::words::{GeneratorIndex, Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KnotError {
    #[error("line {line}, column {column}: {msg}")]
    Syntax { line: usize, column: usize, msg: String },
    #[error("edge label {label} appears {count} times; every label must appear exactly twice")]
    LabelMultiplicity { label: u32, count: usize },
    #[error("crossing {crossing}: outgoing under-strand must be labelled {expected}")]
    UnderStrand { crossing: usize, expected: u32 },
    #[error("crossing {crossing}: over-strand labels are not consecutive")]
    OverStrand { crossing: usize },
    #[error("crossing {crossing}: sign is ambiguous and must be given with sign=+ or sign=-")]
    AmbiguousSign { crossing: usize },
    #[error("crossing {crossing}: stated sign contradicts the edge labels")]
    SignMismatch { crossing: usize },
    #[error("edge {edge} enters two crossings; the labels do not trace a single knot")]
    Orientation { edge: u32 },
    #[error("closure is a link with {components} components, not a knot")]
    NotAKnot { components: usize },
    #[error("empty braid word")]
    EmptyBraid,
    #[error("unknown built-in knot {name:?}; known: {}", BUILTIN_NAMES.join(", "))]
    UnknownBuiltin { name: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Crossing {
    /// Edge labels `[i, j, k, l]`, 1-based.
    pub labels: [u32; 4],
    /// `+1` or `-1`.
    pub sign: i8,
}

impl Crossing {
    pub fn under_in(&self) -> u32 {
        self.labels[0]
    }

    pub fn under_out(&self) -> u32 {
        self.labels[2]
    }

    /// Over-strand edges `(incoming, outgoing)`.
    pub fn over(&self) -> (u32, u32) {
        if self.sign > 0 {
            (self.labels[3], self.labels[1])
        } else {
            (self.labels[1], self.labels[3])
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KnotDiagram {
    crossings: Vec<Crossing>,
}

fn next_label(e: u32, n_edges: u32) -> u32 {
    e % n_edges + 1
}

impl KnotDiagram {
    pub fn unknot() -> Self {
        KnotDiagram { crossings: Vec::new() }
    }

    /// Validates crossings whose labels are given; `signs[c]` is an optional
    /// stated sign, otherwise the sign is read off the labels.
    pub fn from_labels(labels: &[[u32; 4]], signs: &[Option<i8>]) -> Result<Self, KnotError> {
        let n_edges = 2 * labels.len() as u32;
        let max = labels.iter().flatten().copied().max().unwrap_or(0).max(n_edges);
        let mut count = vec![0usize; max as usize + 1];
        for &l in labels.iter().flatten() {
            count[l as usize] += 1;
        }
        if let Some(label) = (0..=max).find(|&l| count[l as usize] != if l == 0 { 0 } else { 2 }) {
            return Err(KnotError::LabelMultiplicity { label, count: count[label as usize] });
        }
        let mut crossings = Vec::with_capacity(labels.len());
        for (c, &[i, j, k, l]) in labels.iter().enumerate() {
            let crossing = c + 1;
            if k != next_label(i, n_edges) {
                return Err(KnotError::UnderStrand { crossing, expected: next_label(i, n_edges) });
            }
            let pos = j == next_label(l, n_edges);
            let neg = l == next_label(j, n_edges);
            let sign = match (signs.get(c).copied().flatten(), pos, neg) {
                (_, false, false) => return Err(KnotError::OverStrand { crossing }),
                (Some(s), p, n) => {
                    if (s > 0 && !p) || (s < 0 && !n) {
                        return Err(KnotError::SignMismatch { crossing });
                    }
                    s.signum()
                }
                (None, true, true) => return Err(KnotError::AmbiguousSign { crossing }),
                (None, true, false) => 1,
                (None, false, true) => -1,
            };
            crossings.push(Crossing { labels: [i, j, k, l], sign });
        }
        // Each edge must end at exactly one crossing; together with the
        // successor rules above this makes 1, 2, .., 2n a single closed path.
        let mut entered = vec![false; n_edges as usize + 1];
        for c in &crossings {
            for e in [c.under_in(), c.over().0] {
                if std::mem::replace(&mut entered[e as usize], true) {
                    return Err(KnotError::Orientation { edge: e });
                }
            }
        }
        Ok(KnotDiagram { crossings })
    }

    /// Parses `X[1,4,2,3] X[3,6,4,5] X[5,2,6,1]`, or the literal `unknot`.
    pub fn parse_pd(text: &str) -> Result<Self, KnotError> {
        if text.trim() == "unknot" {
            return Ok(Self::unknot());
        }
        let (labels, signs) = PdParser { text, pos: 0 }.crossings()?;
        Self::from_labels(&labels, &signs)
    }

    /// Parses a braid word such as `s1 s2^-1 s1` and closes it up.
    pub fn parse_braid(text: &str) -> Result<Self, KnotError> {
        let mut word = Vec::new();
        let mut offset = 0;
        for tok in text.split_whitespace() {
            let start = text[offset..].find(tok).map_or(offset, |p| p + offset);
            offset = start + tok.len();
            let err = |msg: &str| {
                let (line, column) = line_col(text, start);
                KnotError::Syntax { line, column, msg: format!("{msg} in braid token {tok:?}") }
            };
            let body = tok.strip_prefix('s').ok_or_else(|| err("expected s<k>"))?;
            let (index, exp) = match body.split_once('^') {
                Some((i, e)) => (i, e.parse::<i32>().map_err(|_| err("bad exponent"))?),
                None => (body, 1),
            };
            let index: i32 = index.parse().map_err(|_| err("bad generator index"))?;
            if index < 1 {
                return Err(err("generator index must be at least 1"));
            }
            for _ in 0..exp.unsigned_abs() {
                word.push(index * exp.signum());
            }
        }
        Self::from_braid(&word)
    }

    /// Closure of a braid given by signed generator indices (`-2` is `s2^-1`).
    /// The number of strands is one more than the largest index.
    pub fn from_braid(word: &[i32]) -> Result<Self, KnotError> {
        if word.is_empty() {
            return Err(KnotError::EmptyBraid);
        }
        let strands = word.iter().map(|s| s.unsigned_abs() as usize).max().unwrap_or(0) + 1;

        let mut perm: Vec<usize> = (0..strands).collect();
        for s in word {
            let p = s.unsigned_abs() as usize - 1;
            perm.swap(p, p + 1);
        }
        let components = Permutation::from_images(perm.iter().map(|&x| x as u32).collect()).cycles().len();
        if components != 1 {
            return Err(KnotError::NotAKnot { components });
        }

        // Provisional edge ids: 0..strands on top, two new ones per crossing.
        struct Raw {
            left: (usize, usize),
            right: (usize, usize),
            positive: bool,
        }
        let mut cur: Vec<usize> = (0..strands).collect();
        let mut next_id = strands;
        let mut raw = Vec::with_capacity(word.len());
        for &s in word {
            let p = s.unsigned_abs() as usize - 1;
            let (in_l, in_r) = (cur[p], cur[p + 1]);
            let (out_r, out_l) = (next_id, next_id + 1);
            next_id += 2;
            cur[p] = out_l;
            cur[p + 1] = out_r;
            raw.push(Raw { left: (in_l, out_r), right: (in_r, out_l), positive: s > 0 });
        }
        // the bottom edge at each position is the top edge at that position
        let mut alias: Vec<usize> = (0..next_id).collect();
        for (p, &bottom) in cur.iter().enumerate() {
            alias[bottom] = p;
        }
        let canon = |e: usize| if alias[e] < strands { alias[e] } else { e };
        let mut next_of = vec![usize::MAX; next_id];
        for r in &raw {
            next_of[canon(r.left.0)] = canon(r.left.1);
            next_of[canon(r.right.0)] = canon(r.right.1);
        }
        let mut label = vec![0u32; next_id];
        let mut e = canon(0);
        let mut n = 0u32;
        loop {
            n += 1;
            label[e] = n;
            e = next_of[e];
            if e == canon(0) {
                break;
            }
        }
        debug_assert_eq!(n as usize, 2 * word.len());

        let mut labels = Vec::with_capacity(raw.len());
        let mut signs = Vec::with_capacity(raw.len());
        for r in &raw {
            let lab = |(a, b): (usize, usize)| (label[canon(a)], label[canon(b)]);
            let (under, over) = if r.positive { (lab(r.left), lab(r.right)) } else { (lab(r.right), lab(r.left)) };
            if r.positive {
                labels.push([under.0, over.1, under.1, over.0]);
                signs.push(Some(1));
            } else {
                labels.push([under.0, over.0, under.1, over.1]);
                signs.push(Some(-1));
            }
        }
        Self::from_labels(&labels, &signs)
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn n_edges(&self) -> u32 {
        2 * self.crossings.len() as u32
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign as i64).sum()
    }

    fn sign_is_ambiguous(&self, c: &Crossing) -> bool {
        let n = self.n_edges();
        let [_, j, _, l] = c.labels;
        j == next_label(l, n) && l == next_label(j, n)
    }
}

impl fmt::Display for KnotDiagram {
    /// PD text accepted by [`KnotDiagram::parse_pd`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.crossings.is_empty() {
            return write!(f, "unknot");
        }
        for (k, c) in self.crossings.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            let [i, j, kk, l] = c.labels;
            write!(f, "X[{i},{j},{kk},{l}]")?;
            if self.sign_is_ambiguous(c) {
                write!(f, " sign={}", if c.sign > 0 { '+' } else { '-' })?;
            }
        }
        Ok(())
    }
}

struct PdParser<'a> {
    text: &'a str,
    pos: usize,
}

type PdCrossings = (Vec<[u32; 4]>, Vec<Option<i8>>);

impl PdParser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, KnotError> {
        let (line, column) = line_col(self.text, self.pos);
        Err(KnotError::Syntax { line, column, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u32, KnotError> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        match rest[..end].parse() {
            Ok(v) => {
                self.pos += end;
                Ok(v)
            }
            Err(_) => self.err("expected an edge label"),
        }
    }

    fn crossings(mut self) -> Result<PdCrossings, KnotError> {
        let mut labels = Vec::new();
        let mut signs = Vec::new();
        self.skip_ws();
        if self.pos == self.text.len() {
            return self.err("empty PD code; write `unknot` for the trivial knot");
        }
        while {
            self.skip_ws();
            self.pos < self.text.len()
        } {
            if !self.eat("X[") {
                return self.err("expected X[");
            }
            let mut t = [0u32; 4];
            for (k, slot) in t.iter_mut().enumerate() {
                if k > 0 && !self.eat(",") {
                    return self.err("expected ','");
                }
                *slot = self.number()?;
            }
            if !self.eat("]") {
                return self.err("expected ']'");
            }
            let sign = if self.eat("sign=") {
                if self.eat("+") {
                    Some(1)
                } else if self.eat("-") {
                    Some(-1)
                } else {
                    return self.err("expected '+' or '-' after sign=");
                }
            } else {
                None
            };
            labels.push(t);
            signs.push(sign);
        }
        Ok((labels, signs))
    }
}

pub const BUILTIN_NAMES: &[&str] = &["unknot", "trefoil", "figure-eight", "cinquefoil"];

/// Diagrams shipped with the library.
pub fn builtin(name: &str) -> Result<KnotDiagram, KnotError> {
    match name {
        "unknot" | "0_1" => Ok(KnotDiagram::unknot()),
        "trefoil" | "3_1" => KnotDiagram::parse_pd("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]"),
        "figure-eight" | "figure8" | "4_1" => KnotDiagram::parse_pd("X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]"),
        "cinquefoil" | "5_1" => KnotDiagram::parse_braid("s1^5"),
        _ => Err(KnotError::UnknownBuiltin { name: name.to_string() }),
    }
}

/// Wirtinger presentation with a distinguished meridian and longitude.
#[derive(Clone, Debug)]
pub struct WirtingerData {
    pub pres: Presentation,
    pub meridian: GeneratorIndex,
    pub longitude: Word,
    pub writhe: i64,
    /// Arc (generator, 0-based) of each edge; `arc_of_edge[e - 1]` for label `e`.
    pub arc_of_edge: Vec<usize>,
}

impl WirtingerData {
    pub fn meridian_word(&self) -> Word {
        Word::generator(self.meridian)
    }
}

fn arc_names(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n).map(|i| char::from(b'a' + i as u8).to_string()).collect()
    } else {
        Presentation::numbered_names("x", n)
    }
}

pub fn wirtinger(d: &KnotDiagram) -> WirtingerData {
    wirtinger_based_at(d, 1)
}

/// Wirtinger data with the meridian on the arc through edge `start` and the
/// longitude read from there.
pub fn wirtinger_based_at(d: &KnotDiagram, start: u32) -> WirtingerData {
    if d.crossings.is_empty() {
        return WirtingerData {
            pres: Presentation::free(vec!["a"]).expect("one generator"),
            meridian: GeneratorIndex::from_zero_based(0),
            longitude: Word::identity(),
            writhe: 0,
            arc_of_edge: Vec::new(),
        };
    }
    let n_edges = d.n_edges() as usize;
    assert!((1..=n_edges as u32).contains(&start), "edge label out of range");

    let mut parent: Vec<usize> = (0..n_edges).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for c in &d.crossings {
        let (a, b) = c.over();
        let ra = find(&mut parent, a as usize - 1);
        let rb = find(&mut parent, b as usize - 1);
        parent[ra.max(rb)] = ra.min(rb);
    }
    let mut arc_of_root = vec![usize::MAX; n_edges];
    let mut arc_of_edge = vec![0; n_edges];
    let mut n_arcs = 0;
    for (e, arc) in arc_of_edge.iter_mut().enumerate() {
        let r = find(&mut parent, e);
        if arc_of_root[r] == usize::MAX {
            arc_of_root[r] = n_arcs;
            n_arcs += 1;
        }
        *arc = arc_of_root[r];
    }
    let gen = |edge: u32| GeneratorIndex::from_zero_based(arc_of_edge[edge as usize - 1]);

    let mut relators = Vec::with_capacity(d.crossings.len());
    for c in &d.crossings[..d.crossings.len() - 1] {
        let o = Word::generator(gen(c.over().0));
        let e = c.sign as i64;
        let x = Word::generator(gen(c.under_in()));
        let y = Word::generator(gen(c.under_out()));
        relators.push(o.pow(-e).mul(&x).mul(&o.pow(e)).mul(&y.inverse()));
    }
    let pres = Presentation::new(arc_names(n_arcs), relators).expect("arcs are in range");

    let mut under_at = vec![usize::MAX; n_edges + 1];
    for (k, c) in d.crossings.iter().enumerate() {
        under_at[c.under_in() as usize] = k;
    }
    let mut lambda = Vec::new();
    for step in 0..n_edges as u32 {
        let e = (start - 1 + step) % n_edges as u32 + 1;
        let Some(c) = d.crossings.get(under_at[e as usize]) else {
            continue;
        };
        lambda.push(Letter::new(gen(c.over().0), c.sign < 0));
    }
    let meridian = gen(start);
    let writhe = d.writhe();
    let longitude = Word::reduce(lambda).mul(&Word::generator(meridian).pow(-writhe));
    WirtingerData { pres, meridian, longitude, writhe, arc_of_edge }
}

/// Every Wirtinger generator goes to the rotation `i -> i+1` of `Z/n`.
pub fn linking_hom(w: &WirtingerData, n: usize) -> Vec<Permutation> {
    assert!(n >= 1, "n must be positive");
    let rot = Permutation::from_images((0..n as u32).map(|i| (i + 1) % n as u32).collect());
    vec![rot; w.pres.ngens()]
}
