//! Independent brute-force reference computations for the test suites.
//!
//! Nothing here depends on `covers-core`. Everything uses plain vectors and
//! machine integers and is only meant for small inputs.

#![allow(clippy::needless_range_loop)]

use std::collections::{BTreeSet, HashSet, VecDeque};

/// Free reduction with a stack: push each letter, pop on collision with its inverse.
pub fn free_reduce_stack(letters: &[i32]) -> Vec<i32> {
    let mut stack: Vec<i32> = Vec::with_capacity(letters.len());
    for &l in letters {
        if stack.last() == Some(&-l) {
            stack.pop();
        } else {
            stack.push(l);
        }
    }
    stack
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Determinant by fraction-free Gaussian elimination.
pub fn determinant(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// `d_k` = gcd of all k×k minors, for k = 1..min(rows, cols). The invariant
/// factors are `d_k / d_{k-1}`.
pub fn determinantal_divisors(m: &[Vec<i64>]) -> Vec<i128> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut g = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j] as i128).collect()).collect();
                g = gcd(g, determinant(&minor));
            }
        }
        out.push(g);
    }
    out
}

/// Invariant factors (including 1s and trailing 0s) from the minor gcds.
pub fn invariant_factors(m: &[Vec<i64>]) -> Vec<i128> {
    let d = determinantal_divisors(m);
    let mut out = Vec::with_capacity(d.len());
    let mut prev = 1i128;
    for &dk in &d {
        if dk == 0 {
            out.push(0);
        } else {
            out.push(dk / prev);
            prev = dk;
        }
    }
    out
}

/// Cokernel of an integer matrix (rows are relations) as
/// `(free rank, invariant factors > 1)`, by textbook diagonalization over i128.
pub fn cokernel_invariants(m: &[Vec<i64>], cols: usize) -> (usize, Vec<i128>) {
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let rows = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the remaining block
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| a[i][j].abs());
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let p = a[t][t];
        let mut clean = true;
        for i in t + 1..rows {
            let q = a[i][t] / p;
            for j in t..cols {
                a[i][j] -= q * a[t][j];
            }
            clean &= a[i][t] == 0;
        }
        for j in t + 1..cols {
            let q = a[t][j] / p;
            for row in a.iter_mut().skip(t) {
                let v = row[t];
                row[j] -= q * v;
            }
            clean &= a[t][j] == 0;
        }
        if !clean {
            continue;
        }
        // p must divide the rest of the block before it can be split off
        if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0)) {
            for j in t..cols {
                a[t][j] += a[i][j];
            }
            continue;
        }
        diag.push(p.abs());
        t += 1;
    }
    let rank = diag.len();
    (cols - rank, diag.into_iter().filter(|&d| d > 1).collect())
}

/// Integer polynomial, lowest degree first.
pub type Poly = Vec<i128>;

fn poly_trim(mut p: Poly) -> Poly {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn poly_add(a: &[i128], b: &[i128]) -> Poly {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] += x;
    }
    poly_trim(out)
}

fn poly_mul(a: &[i128], b: &[i128]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    poly_trim(out)
}

/// Determinant over `Z[t]` by cofactor expansion along the first row.
fn poly_determinant(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 0 {
        return vec![1];
    }
    let mut total: Poly = vec![];
    for j in 0..n {
        if m[0][j].is_empty() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, p)| p.clone()).collect())
            .collect();
        let mut term = poly_mul(&m[0][j], &poly_determinant(&minor));
        if j % 2 == 1 {
            term.iter_mut().for_each(|c| *c = -*c);
        }
        total = poly_add(&total, &term);
    }
    total
}

/// Sign of a PD crossing `X[i,j,k,l]` (counterclockwise from the incoming
/// under-strand), read from the direction of the over-strand.
pub fn pd_crossing_sign(x: [u32; 4], n_edges: u32) -> i32 {
    let [_, j, _, l] = x;
    if l % n_edges + 1 == j {
        1
    } else if j % n_edges + 1 == l {
        -1
    } else {
        panic!("over-strand labels {j}, {l} are not consecutive")
    }
}

/// Alexander polynomial of a knot from its PD code, normalized so that the
/// constant term is nonzero and the leading coefficient is positive.
///
/// Arcs break exactly at under-crossings. Every crossing gives the Fox row
/// `(1 - t) o + t u_in - u_out` (positive) or `(t - 1) o + u_in - t u_out`
/// (negative); one row and one column are deleted.
pub fn alexander_polynomial(pd: &[[u32; 4]]) -> Poly {
    if pd.is_empty() {
        return vec![1];
    }
    let n_edges = 2 * pd.len() as u32;
    let under_in: HashSet<u32> = pd.iter().map(|x| x[0]).collect();
    // arc of each edge, walking the knot from edge 1
    let mut arc = vec![0usize; n_edges as usize + 1];
    let mut current = 0;
    for e in 1..=n_edges {
        arc[e as usize] = current;
        if under_in.contains(&e) && e != n_edges {
            current += 1;
        }
    }
    if !under_in.contains(&n_edges) {
        // the last arc wraps around into the first
        let last = arc[n_edges as usize];
        for a in arc.iter_mut() {
            if *a == last {
                *a = 0;
            }
        }
    }
    let n_arcs = pd.len();
    let mut rows: Vec<Vec<Poly>> = Vec::new();
    for &x in pd {
        let mut row: Vec<Poly> = vec![vec![]; n_arcs];
        let (o, u_in, u_out) = (arc[x[1] as usize], arc[x[0] as usize], arc[x[2] as usize]);
        let entries: [(usize, Poly); 3] = if pd_crossing_sign(x, n_edges) > 0 {
            [(o, vec![1, -1]), (u_in, vec![0, 1]), (u_out, vec![-1])]
        } else {
            [(o, vec![-1, 1]), (u_in, vec![1]), (u_out, vec![0, -1])]
        };
        for (c, p) in entries {
            row[c] = poly_add(&row[c], &p);
        }
        rows.push(row);
    }
    let minor: Vec<Vec<Poly>> = rows[..n_arcs - 1].iter().map(|r| r[..n_arcs - 1].to_vec()).collect();
    let mut p = poly_determinant(&minor);
    while p.first() == Some(&0) {
        p.remove(0);
    }
    if p.last().is_some_and(|&c| c < 0) {
        p.iter_mut().for_each(|c| *c = -*c);
    }
    p
}

/// Sylvester resultant of two integer polynomials.
pub fn resultant(a: &[i128], b: &[i128]) -> i128 {
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    if size == 0 {
        return 1;
    }
    let mut s = vec![vec![0i128; size]; size];
    // rows hold coefficients from the highest degree down
    for i in 0..n {
        for (k, &c) in a.iter().rev().enumerate() {
            s[i][i + k] = c;
        }
    }
    for i in 0..m {
        for (k, &c) in b.iter().rev().enumerate() {
            s[n + i][i + k] = c;
        }
    }
    determinant(&s)
}

/// `|prod_{i=1}^{n-1} Delta(zeta^i)|` with `zeta` a primitive n-th root of
/// unity: the order of `H_1` of the n-fold cyclic branched cover, or 0 when
/// it is infinite.
pub fn cyclic_cover_h1_order(pd: &[[u32; 4]], n: usize) -> u128 {
    let delta = alexander_polynomial(pd);
    if n == 1 {
        return 1;
    }
    let phi: Poly = vec![1; n];
    resultant(&delta, &phi).unsigned_abs()
}

/// Permutations as image vectors on `0..m`, composed left to right.
pub fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    p.iter().map(|&i| q[i]).collect()
}

pub fn invert(p: &[usize]) -> Vec<usize> {
    let mut out = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        out[j] = i;
    }
    out
}

/// Image of a signed word (generator `k` is `k` or `-k`, 1-based).
pub fn evaluate(word: &[i32], images: &[Vec<usize>], degree: usize) -> Vec<usize> {
    word.iter().fold((0..degree).collect(), |acc, &l| {
        let g = &images[l.unsigned_abs() as usize - 1];
        if l > 0 {
            compose(&acc, g)
        } else {
            compose(&acc, &invert(g))
        }
    })
}

/// All elements of the group generated by `gens`, by breadth-first closure.
pub fn closure(gens: &[Vec<usize>], degree: usize) -> Vec<Vec<usize>> {
    let id: Vec<usize> = (0..degree).collect();
    let mut seen = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = compose(&x, g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().collect()
}

/// All permutations of `0..m` in lexicographic order.
pub fn symmetric_group(m: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

/// Every assignment of elements of `S_m` to generators that kills all the
/// relators and acts transitively, by exhaustive backtracking. A relator is
/// tested as soon as all of its generators have images.
pub fn homomorphisms_to_symmetric(n_gens: usize, relators: &[Vec<i32>], m: usize) -> Vec<Vec<Vec<usize>>> {
    let elements = symmetric_group(m);
    let id: Vec<usize> = (0..m).collect();
    let mut ready: Vec<Vec<&Vec<i32>>> = vec![Vec::new(); n_gens];
    for r in relators {
        if let Some(top) = r.iter().map(|l| l.unsigned_abs() as usize - 1).max() {
            ready[top].push(r);
        }
    }
    let mut out = Vec::new();
    let mut images: Vec<Vec<usize>> = Vec::with_capacity(n_gens);
    fn go(
        k: usize,
        images: &mut Vec<Vec<usize>>,
        elements: &[Vec<usize>],
        ready: &[Vec<&Vec<i32>>],
        id: &[usize],
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        let m = id.len();
        if k == ready.len() {
            if transitive(images, m) {
                out.push(images.clone());
            }
            return;
        }
        for x in elements {
            images.push(x.clone());
            if ready[k].iter().all(|r| evaluate(r, images, m) == id) {
                go(k + 1, images, elements, ready, id, out);
            }
            images.pop();
        }
    }
    go(0, &mut images, &elements, &ready, &id, &mut out);
    out
}

fn transitive(gens: &[Vec<usize>], m: usize) -> bool {
    let mut seen = vec![false; m];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for g in gens {
            if !seen[g[x]] {
                seen[g[x]] = true;
                stack.push(g[x]);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// A finite group by its full multiplication table, element 0 the identity.
#[derive(Clone, Debug)]
pub struct CayleyTable {
    pub mul: Vec<Vec<usize>>,
}

impl CayleyTable {
    /// From a list of permutations closed under composition, identity first.
    pub fn from_permutations(elements: &[Vec<usize>]) -> Self {
        let index = |p: &Vec<usize>| elements.iter().position(|q| q == p).expect("closed under composition");
        let mul = elements.iter().map(|x| elements.iter().map(|y| index(&compose(x, y))).collect()).collect();
        CayleyTable { mul }
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn involutions(&self) -> usize {
        (1..self.order()).filter(|&x| self.mul[x][x] == 0).count()
    }

    pub fn center_order(&self) -> usize {
        let n = self.order();
        (0..n).filter(|&x| (0..n).all(|y| self.mul[x][y] == self.mul[y][x])).count()
    }

    pub fn is_abelian(&self) -> bool {
        self.center_order() == self.order()
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut p = x;
        let mut k = 1;
        while p != 0 {
            p = self.mul[p][x];
            k += 1;
        }
        k
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.order()).any(|x| self.element_order(x) == self.order())
    }

    fn inverse(&self, x: usize) -> usize {
        (0..self.order()).find(|&y| self.mul[x][y] == 0).expect("group")
    }

    /// Order of the subgroup generated by all commutators.
    pub fn derived_order(&self) -> usize {
        let n = self.order();
        let mut sub = BTreeSet::from([0usize]);
        for x in 0..n {
            for y in 0..n {
                sub.insert(self.mul[self.mul[self.inverse(x)][self.inverse(y)]][self.mul[x][y]]);
            }
        }
        loop {
            let before = sub.len();
            let items: Vec<usize> = sub.iter().copied().collect();
            for &a in &items {
                for &b in &items {
                    sub.insert(self.mul[a][b]);
                }
            }
            if sub.len() == before {
                return before;
            }
        }
    }
}

/// Exactness of `A -f-> B -g-> C` at `B` for `B = ⊕ Z/b_i`, `C = ⊕ Z/c_j`,
/// decided by listing every element of `B`. `f` has one row per generator of
/// `A` (its image in `B`), `g` one row per generator of `B`.
pub fn finite_abelian_exact(f: &[Vec<i64>], g: &[Vec<i64>], b_mods: &[i64], c_mods: &[i64]) -> bool {
    let reduce =
        |v: Vec<i64>, mods: &[i64]| -> Vec<i64> { v.iter().zip(mods).map(|(x, m)| x.rem_euclid(*m)).collect() };
    let add = |x: &[i64], y: &[i64], mods: &[i64]| reduce(x.iter().zip(y).map(|(a, b)| a + b).collect(), mods);
    // image of f as the closure of its rows
    let zero = vec![0i64; b_mods.len()];
    let mut image = BTreeSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    let gens: Vec<Vec<i64>> = f.iter().map(|r| reduce(r.clone(), b_mods)).collect();
    while let Some(x) = queue.pop_front() {
        for gv in &gens {
            let y = add(&x, gv, b_mods);
            if image.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    // kernel of g by enumeration of B
    let mut kernel = BTreeSet::new();
    let mut b = vec![0i64; b_mods.len()];
    loop {
        let mut img = vec![0i64; c_mods.len()];
        for (i, &bi) in b.iter().enumerate() {
            for (j, c) in img.iter_mut().enumerate() {
                *c += bi * g[i][j];
            }
        }
        if reduce(img, c_mods).iter().all(|&x| x == 0) {
            kernel.insert(b.clone());
        }
        let mut k = 0;
        loop {
            if k == b.len() {
                return image == kernel;
            }
            b[k] += 1;
            if b[k] < b_mods[k] {
                break;
            }
            b[k] = 0;
            k += 1;
        }
    }
}
