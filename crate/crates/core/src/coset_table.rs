//! Todd–Coxeter coset enumeration.
//!
//! Columns are `x1, x1^-1, x2, x2^-1, ...` (see [`Letter::column`]). Cosets are
//! stored 0-based with the subgroup itself as coset 0 and printed 1-based.
//! Finished tables are renumbered breadth-first from coset 0, scanning columns
//! in order, so the result depends only on the presentation and subgroup.

use std::fmt;

use thiserror::Error;

use crate::perm::{enumerate_group, PermError, Permutation};
use crate::presentation::Presentation;
use crate::words::{Letter, Word};

const UNDEF: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationLimits {
    /// Total coset definitions allowed; dead cosets are not reclaimed.
    pub max_cosets: usize,
    /// Definitions plus relator scans.
    pub max_steps: u64,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits { max_cosets: 1_000_000, max_steps: 100_000_000 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Define the first undefined entry, then process deductions.
    #[default]
    Felsch,
    /// Scan and fill every relator at every coset in order.
    Hlt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Limit {
    Cosets(usize),
    Steps(u64),
}

impl fmt::Display for Limit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Limit::Cosets(n) => write!(f, "max cosets {n}"),
            Limit::Steps(n) => write!(f, "max steps {n}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CosetError {
    #[error("enumeration did not close: {cosets_defined} cosets defined in {steps} steps ({limit} reached)")]
    NotClosed { cosets_defined: usize, steps: u64, limit: Limit },
    #[error("subgroup generator {0} uses a generator outside the presentation")]
    BadSubgroupGenerator(usize),
    #[error("expected {expected} generator images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("relator {relator} is not sent to the identity")]
    NotAHomomorphism { relator: usize },
    #[error("permutation action is not transitive")]
    NotTransitive,
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// A complete coset table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CosetTable {
    n_gens: usize,
    n_cosets: usize,
    table: Vec<u32>,
}

impl CosetTable {
    pub fn index(&self) -> usize {
        self.n_cosets
    }

    pub fn n_gens(&self) -> usize {
        self.n_gens
    }

    pub fn n_cols(&self) -> usize {
        2 * self.n_gens
    }

    pub fn get(&self, coset: usize, col: usize) -> usize {
        self.table[coset * self.n_cols() + col] as usize
    }

    pub fn act(&self, coset: usize, l: Letter) -> usize {
        self.get(coset, l.column())
    }

    pub fn act_word(&self, coset: usize, w: &Word) -> usize {
        w.letters().iter().fold(coset, |c, &l| self.act(c, l))
    }

    pub fn row(&self, coset: usize) -> &[u32] {
        &self.table[coset * self.n_cols()..(coset + 1) * self.n_cols()]
    }

    /// Permutation of the cosets induced by each generator.
    pub fn generator_permutations(&self) -> Vec<Permutation> {
        (0..self.n_gens)
            .map(|g| Permutation::from_images((0..self.n_cosets).map(|c| self.get(c, 2 * g) as u32).collect()))
            .collect()
    }

    pub fn word_permutation(&self, w: &Word) -> Permutation {
        Permutation::from_images((0..self.n_cosets).map(|c| self.act_word(c, w) as u32).collect())
    }

    /// Whether every relator closes at every coset and every subgroup
    /// generator closes at coset 0.
    pub fn satisfies(&self, p: &Presentation, subgroup: &[Word]) -> bool {
        if p.ngens() != self.n_gens {
            return false;
        }
        let inverses_ok =
            (0..self.n_cosets).all(|c| (0..self.n_cols()).all(|col| self.get(self.get(c, col), col ^ 1) == c));
        inverses_ok
            && p.relators().iter().all(|r| (0..self.n_cosets).all(|c| self.act_word(c, r) == c))
            && subgroup.iter().all(|h| self.act_word(0, h) == 0)
    }

    /// Table of the stabilizer of point 0 under a transitive action.
    pub fn from_action(perms: &[Permutation], degree: usize) -> Result<CosetTable, CosetError> {
        let n_gens = perms.len();
        let mut table = Vec::with_capacity(degree * 2 * n_gens);
        let perms: Vec<Permutation> = perms.iter().map(|p| p.padded(degree)).collect();
        let invs: Vec<Permutation> = perms.iter().map(Permutation::inverse).collect();
        for c in 0..degree {
            for g in 0..n_gens {
                table.push(perms[g].image(c) as u32);
                table.push(invs[g].image(c) as u32);
            }
        }
        let raw = CosetTable { n_gens, n_cosets: degree, table };
        let t = raw.normalized();
        if t.n_cosets != degree {
            return Err(CosetError::NotTransitive);
        }
        Ok(t)
    }

    /// Breadth-first renumbering from coset 0, keeping only reachable cosets.
    fn normalized(&self) -> CosetTable {
        let ncols = self.n_cols();
        let mut number = vec![UNDEF; self.n_cosets];
        let mut order = Vec::with_capacity(self.n_cosets);
        if self.n_cosets > 0 {
            number[0] = 0;
            order.push(0);
        }
        let mut head = 0;
        while head < order.len() {
            let c = order[head];
            head += 1;
            for col in 0..ncols {
                let d = self.get(c, col);
                if number[d] == UNDEF {
                    number[d] = order.len() as u32;
                    order.push(d);
                }
            }
        }
        let mut table = Vec::with_capacity(order.len() * ncols);
        for &c in &order {
            table.extend(self.row(c).iter().map(|&d| number[d as usize]));
        }
        CosetTable { n_gens: self.n_gens, n_cosets: order.len(), table }
    }
}

impl fmt::Display for CosetTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in 0..self.n_cosets {
            let row: Vec<String> = self.row(c).iter().map(|d| (d + 1).to_string()).collect();
            writeln!(f, "{}: {}", c + 1, row.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for CosetTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CosetTable(index {})\n{self}", self.n_cosets)
    }
}

pub fn enumerate(p: &Presentation, subgroup: &[Word]) -> Result<CosetTable, CosetError> {
    enumerate_with(p, subgroup, EnumerationLimits::default(), Strategy::default())
}

pub fn enumerate_with(
    p: &Presentation,
    subgroup: &[Word],
    limits: EnumerationLimits,
    strategy: Strategy,
) -> Result<CosetTable, CosetError> {
    for (i, h) in subgroup.iter().enumerate() {
        if h.max_generator().is_some_and(|g| g.zero_based() >= p.ngens()) {
            return Err(CosetError::BadSubgroupGenerator(i));
        }
    }
    let mut e = Enumerator::new(p, subgroup, limits);
    match strategy {
        Strategy::Felsch => e.felsch()?,
        Strategy::Hlt => e.hlt()?,
    }
    Ok(e.finish())
}

/// Order of the group, as the index of the trivial subgroup.
pub fn order_of(p: &Presentation, limits: EnumerationLimits) -> Result<usize, CosetError> {
    enumerate_with(p, &[], limits, Strategy::default()).map(|t| t.index())
}

/// Coset table of the kernel of the homomorphism sending generator `i` to
/// `images[i]`. Its cosets are the elements of the image group.
pub fn kernel_table(p: &Presentation, images: &[Permutation], max_order: usize) -> Result<CosetTable, CosetError> {
    if images.len() != p.ngens() {
        return Err(CosetError::ImageCount { expected: p.ngens(), got: images.len() });
    }
    let degree = images.iter().map(Permutation::degree).max().unwrap_or(0);
    let images: Vec<Permutation> = images.iter().map(|g| g.padded(degree)).collect();
    for (i, r) in p.relators().iter().enumerate() {
        if !word_image(r, &images, degree).is_identity() {
            return Err(CosetError::NotAHomomorphism { relator: i });
        }
    }
    let group = enumerate_group(&images, degree, max_order)?;
    let n_cosets = group.elements.len();
    let table = group.action.into_iter().flatten().collect();
    Ok(CosetTable { n_gens: p.ngens(), n_cosets, table }.normalized())
}

/// Image of a word under generator images (right action, left to right).
pub fn word_image(w: &Word, images: &[Permutation], degree: usize) -> Permutation {
    w.letters().iter().fold(Permutation::identity(degree), |acc, l| {
        let g = &images[l.gen().zero_based()];
        if l.is_inverse() {
            acc.then(&g.inverse())
        } else {
            acc.then(g)
        }
    })
}

struct Enumerator {
    ncols: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    relators: Vec<Vec<usize>>,
    subgroup: Vec<Vec<usize>>,
    /// Cyclic conjugates of relators and their inverses, by first column.
    by_col: Vec<Vec<Vec<usize>>>,
    deductions: Vec<(u32, usize)>,
    overflow: bool,
    steps: u64,
    limits: EnumerationLimits,
}

const DEDUCTION_CAP: usize = 4096;

fn columns(w: &Word) -> Vec<usize> {
    w.letters().iter().map(|l| l.column()).collect()
}

impl Enumerator {
    fn new(p: &Presentation, subgroup: &[Word], limits: EnumerationLimits) -> Self {
        let ncols = 2 * p.ngens();
        let relators: Vec<Vec<usize>> = p.relators().iter().map(columns).collect();
        let mut by_col = vec![Vec::new(); ncols];
        for r in p.relators() {
            for v in [r.clone(), r.inverse()] {
                let cols = columns(&v);
                for k in 0..cols.len() {
                    let mut rot = cols[k..].to_vec();
                    rot.extend_from_slice(&cols[..k]);
                    if !by_col[rot[0]].contains(&rot) {
                        by_col[rot[0]].push(rot);
                    }
                }
            }
        }
        Enumerator {
            ncols,
            table: vec![UNDEF; ncols],
            parent: vec![0],
            relators,
            subgroup: subgroup.iter().filter(|h| !h.is_identity()).map(columns).collect(),
            by_col,
            deductions: Vec::new(),
            overflow: false,
            steps: 0,
            limits,
        }
    }

    fn defined(&self) -> usize {
        self.parent.len()
    }

    fn get(&self, c: u32, col: usize) -> u32 {
        self.table[c as usize * self.ncols + col]
    }

    fn set(&mut self, c: u32, col: usize, d: u32) {
        self.table[c as usize * self.ncols + col] = d;
    }

    fn live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn not_closed(&self, limit: Limit) -> CosetError {
        CosetError::NotClosed { cosets_defined: self.defined(), steps: self.steps, limit }
    }

    fn tick(&mut self) -> Result<(), CosetError> {
        self.steps += 1;
        if self.steps > self.limits.max_steps {
            return Err(self.not_closed(Limit::Steps(self.limits.max_steps)));
        }
        Ok(())
    }

    fn push_deduction(&mut self, c: u32, col: usize) {
        if self.deductions.len() < DEDUCTION_CAP {
            self.deductions.push((c, col));
        } else {
            self.overflow = true;
        }
    }

    fn define(&mut self, c: u32, col: usize) -> Result<u32, CosetError> {
        if self.defined() >= self.limits.max_cosets {
            return Err(self.not_closed(Limit::Cosets(self.limits.max_cosets)));
        }
        self.tick()?;
        let d = self.defined() as u32;
        self.parent.push(d);
        self.table.extend(std::iter::repeat_n(UNDEF, self.ncols));
        self.set(c, col, d);
        self.set(d, col ^ 1, c);
        self.push_deduction(c, col);
        Ok(d)
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut x = c;
        while self.parent[x as usize] != r {
            let next = self.parent[x as usize];
            self.parent[x as usize] = r;
            x = next;
        }
        r
    }

    fn merge(&mut self, a: u32, b: u32, queue: &mut Vec<u32>) {
        let a = self.rep(a);
        let b = self.rep(b);
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.parent[hi as usize] = lo;
            queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for col in 0..self.ncols {
                let f = self.get(e, col);
                if f == UNDEF {
                    continue;
                }
                self.set(f, col ^ 1, UNDEF);
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let g = self.get(e1, col);
                if g != UNDEF {
                    self.merge(f1, g, &mut queue);
                    continue;
                }
                let h = self.get(f1, col ^ 1);
                if h != UNDEF {
                    self.merge(e1, h, &mut queue);
                    continue;
                }
                self.set(e1, col, f1);
                self.set(f1, col ^ 1, e1);
                self.push_deduction(e1, col);
            }
        }
    }

    /// Traces `w` from `c` in both directions. With `fill`, undefined entries
    /// are defined until the word closes.
    fn scan(&mut self, c: u32, w: &[usize], fill: bool) -> Result<(), CosetError> {
        self.tick()?;
        if w.is_empty() {
            return Ok(());
        }
        loop {
            let mut f = c;
            let mut i = 0isize;
            let mut j = w.len() as isize - 1;
            while i <= j && self.get(f, w[i as usize]) != UNDEF {
                f = self.get(f, w[i as usize]);
                i += 1;
            }
            if i > j {
                if f != c {
                    self.coincidence(f, c);
                }
                return Ok(());
            }
            let mut b = c;
            while j >= i && self.get(b, w[j as usize] ^ 1) != UNDEF {
                b = self.get(b, w[j as usize] ^ 1);
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            let col = w[i as usize];
            if i == j {
                self.set(f, col, b);
                self.set(b, col ^ 1, f);
                self.push_deduction(f, col);
                return Ok(());
            }
            if !fill {
                return Ok(());
            }
            self.define(f, col)?;
        }
    }

    fn process_deductions(&mut self) -> Result<(), CosetError> {
        while let Some((c, col)) = self.deductions.pop() {
            if !self.live(c) {
                continue;
            }
            for k in 0..self.by_col[col].len() {
                if !self.live(c) {
                    break;
                }
                let w = std::mem::take(&mut self.by_col[col][k]);
                let res = self.scan(c, &w, false);
                self.by_col[col][k] = w;
                res?;
            }
            let d = self.get(c, col);
            if d != UNDEF && self.live(d) {
                for k in 0..self.by_col[col ^ 1].len() {
                    if !self.live(d) {
                        break;
                    }
                    let w = std::mem::take(&mut self.by_col[col ^ 1][k]);
                    let res = self.scan(d, &w, false);
                    self.by_col[col ^ 1][k] = w;
                    res?;
                }
            }
        }
        if self.overflow {
            self.overflow = false;
            self.scan_everything(false)?;
        }
        Ok(())
    }

    /// Scans every relator at every live coset and the subgroup generators at 0.
    fn scan_everything(&mut self, fill: bool) -> Result<(), CosetError> {
        let subgroup = std::mem::take(&mut self.subgroup);
        let mut res = Ok(());
        for h in &subgroup {
            res = res.and_then(|_| self.scan(0, h, fill));
        }
        self.subgroup = subgroup;
        res?;
        let relators = std::mem::take(&mut self.relators);
        let mut c = 0u32;
        let mut res = Ok(());
        'outer: while (c as usize) < self.defined() {
            for r in &relators {
                if !self.live(c) {
                    break;
                }
                if let Err(e) = self.scan(c, r, fill) {
                    res = Err(e);
                    break 'outer;
                }
            }
            c += 1;
        }
        self.relators = relators;
        res
    }

    fn first_gap(&self, from: u32) -> Option<(u32, usize)> {
        (from..self.defined() as u32)
            .filter(|&c| self.live(c))
            .find_map(|c| (0..self.ncols).find(|&col| self.get(c, col) == UNDEF).map(|col| (c, col)))
    }

    /// Confirms a gap-free table against all relators; false if a
    /// coincidence reopened the enumeration.
    fn verify(&mut self) -> Result<bool, CosetError> {
        let live_before = (0..self.defined() as u32).filter(|&c| self.live(c)).count();
        self.scan_everything(false)?;
        self.process_deductions()?;
        let live_after = (0..self.defined() as u32).filter(|&c| self.live(c)).count();
        Ok(live_before == live_after && self.first_gap(0).is_none())
    }

    fn felsch(&mut self) -> Result<(), CosetError> {
        let subgroup = std::mem::take(&mut self.subgroup);
        let mut res = Ok(());
        for h in &subgroup {
            res = res.and_then(|_| self.scan(0, h, true));
        }
        self.subgroup = subgroup;
        res?;
        self.process_deductions()?;
        loop {
            let mut from = 0;
            while let Some((c, col)) = self.first_gap(from) {
                from = c;
                self.define(c, col)?;
                self.process_deductions()?;
            }
            if self.verify()? {
                return Ok(());
            }
        }
    }

    fn hlt(&mut self) -> Result<(), CosetError> {
        let subgroup = std::mem::take(&mut self.subgroup);
        let mut res = Ok(());
        for h in &subgroup {
            res = res.and_then(|_| self.scan(0, h, true));
        }
        self.subgroup = subgroup;
        res?;
        loop {
            let mut c = 0u32;
            while (c as usize) < self.defined() {
                for k in 0..self.relators.len() {
                    if !self.live(c) {
                        break;
                    }
                    let r = std::mem::take(&mut self.relators[k]);
                    let res = self.scan(c, &r, true);
                    self.relators[k] = r;
                    res?;
                }
                for col in 0..self.ncols {
                    if self.live(c) && self.get(c, col) == UNDEF {
                        self.define(c, col)?;
                    }
                }
                c += 1;
            }
            self.deductions.clear();
            self.overflow = false;
            if self.verify()? {
                return Ok(());
            }
        }
    }

    fn finish(mut self) -> CosetTable {
        let n = self.defined();
        for c in 0..n as u32 {
            if self.live(c) {
                for col in 0..self.ncols {
                    let d = self.get(c, col);
                    let r = self.rep(d);
                    self.set(c, col, r);
                }
            }
        }
        let raw = CosetTable { n_gens: self.ncols / 2, n_cosets: n, table: self.table };
        raw.normalized()
    }
}
