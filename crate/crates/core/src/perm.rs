//! Permutations on `{0, .., n-1}` acting on the right.
//!
//! `p.then(q)` applies `p` first, matching the left-to-right reading of words.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("malformed cycle notation at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("point {0} repeated in cycle notation")]
    RepeatedPoint(usize),
    #[error("permutation group has more than {0} elements")]
    TooLarge(usize),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree as u32).collect())
    }

    /// From an image list; panics if it is not a bijection.
    pub fn from_images(images: Vec<u32>) -> Self {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            assert!(!std::mem::replace(&mut seen[i as usize], true), "not a bijection");
        }
        Permutation(images)
    }

    /// Cycles given with 0-based points.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Self {
        let mut img: Vec<u32> = (0..degree as u32).collect();
        for c in cycles {
            for (k, &p) in c.iter().enumerate() {
                img[p as usize] = c[(k + 1) % c.len()];
            }
        }
        Self::from_images(img)
    }

    /// Parses 1-based cycle notation such as `(1,2)(3 4 5)`; `()` or `id` is the
    /// identity. The degree is the largest point mentioned, or `min_degree`.
    pub fn parse_cycles(text: &str, min_degree: usize) -> Result<Self, PermError> {
        let t = text.trim();
        if t == "id" || t == "()" || t.is_empty() {
            return Ok(Self::identity(min_degree));
        }
        let mut cycles: Vec<Vec<u32>> = Vec::new();
        let bytes = t.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            match bytes[i] {
                b' ' | b'\t' => i += 1,
                b'(' => {
                    let close =
                        t[i..].find(')').ok_or_else(|| PermError::Syntax { pos: i, msg: "unclosed cycle".into() })? + i;
                    let mut cycle = Vec::new();
                    for tok in t[i + 1..close].split(|c: char| c == ',' || c.is_whitespace()) {
                        if tok.is_empty() {
                            continue;
                        }
                        let p: u32 =
                            tok.parse().map_err(|_| PermError::Syntax { pos: i, msg: format!("bad point {tok:?}") })?;
                        if p == 0 {
                            return Err(PermError::Syntax { pos: i, msg: "points are 1-based".into() });
                        }
                        cycle.push(p - 1);
                    }
                    cycles.push(cycle);
                    i = close + 1;
                }
                _ => {
                    return Err(PermError::Syntax { pos: i, msg: "expected '('".into() });
                }
            }
        }
        let degree = cycles.iter().flatten().map(|&p| p as usize + 1).max().unwrap_or(0).max(min_degree);
        let mut seen = vec![false; degree];
        for &p in cycles.iter().flatten() {
            if std::mem::replace(&mut seen[p as usize], true) {
                return Err(PermError::RepeatedPoint(p as usize + 1));
            }
        }
        let refs: Vec<&[u32]> = cycles.iter().map(|c| c.as_slice()).collect();
        Ok(Self::from_cycles(degree, &refs))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn image(&self, point: usize) -> usize {
        self.0[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    /// Extends with fixed points up to `degree`.
    pub fn padded(&self, degree: usize) -> Self {
        let mut v = self.0.clone();
        v.extend(self.0.len() as u32..degree as u32);
        Permutation(v)
    }

    /// Apply `self`, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut c = vec![start];
            seen[start] = true;
            let mut p = self.0[start] as usize;
            while p != start {
                seen[p] = true;
                c.push(p);
                p = self.0[p] as usize;
            }
            out.push(c);
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    pub fn pow(&self, n: u64) -> Permutation {
        let mut out = Self::identity(self.degree());
        for _ in 0..n {
            out = out.then(self);
        }
        out
    }
}

impl fmt::Display for Permutation {
    /// 1-based cycle notation without fixed points.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let pts: Vec<String> = c.iter().map(|p| (p + 1).to_string()).collect();
            write!(f, "({})", pts.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{self}")
    }
}

/// The elements of the group generated by `gens`, enumerated breadth-first
/// from the identity by right multiplication with `g1, g1^-1, g2, g2^-1, ...`.
#[derive(Clone, Debug)]
pub struct PermGroupElements {
    pub elements: Vec<Permutation>,
    pub index: HashMap<Permutation, usize>,
    /// `action[e][col]` is the index of `elements[e]` times the generator for column `col`.
    pub action: Vec<Vec<u32>>,
}

pub fn enumerate_group(gens: &[Permutation], degree: usize, cap: usize) -> Result<PermGroupElements, PermError> {
    let mut columns = Vec::with_capacity(2 * gens.len());
    for g in gens {
        let g = g.padded(degree);
        let inv = g.inverse();
        columns.push(g);
        columns.push(inv);
    }
    let id = Permutation::identity(degree);
    let mut elements = vec![id.clone()];
    let mut index = HashMap::new();
    index.insert(id, 0);
    let mut action: Vec<Vec<u32>> = Vec::new();
    let mut head = 0;
    while head < elements.len() {
        let mut row = Vec::with_capacity(columns.len());
        for c in &columns {
            let prod = elements[head].then(c);
            let next = match index.get(&prod) {
                Some(&k) => k,
                None => {
                    if elements.len() >= cap {
                        return Err(PermError::TooLarge(cap));
                    }
                    let k = elements.len();
                    index.insert(prod.clone(), k);
                    elements.push(prod);
                    k
                }
            };
            row.push(next as u32);
        }
        action.push(row);
        head += 1;
    }
    Ok(PermGroupElements { elements, index, action })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let p = Permutation::parse_cycles("(1,2)(3 4 5)", 0).unwrap();
        assert_eq!(p.degree(), 5);
        assert_eq!(p.to_string(), "(1,2)(3,4,5)");
        assert_eq!(p.order(), 6);
        assert!(Permutation::parse_cycles("()", 3).unwrap().is_identity());
        assert!(Permutation::parse_cycles("(1,1)", 0).is_err());
        assert!(Permutation::parse_cycles("(1,2", 0).is_err());
        assert!(Permutation::parse_cycles("(0,2)", 0).is_err());
    }

    #[test]
    fn composition_is_left_to_right() {
        let a = Permutation::from_cycles(3, &[&[0, 1]]);
        let b = Permutation::from_cycles(3, &[&[1, 2]]);
        // 0 -a-> 1 -b-> 2
        assert_eq!(a.then(&b).image(0), 2);
        assert!(a.then(&a.inverse()).is_identity());
    }

    #[test]
    fn symmetric_group_of_degree_three() {
        let a = Permutation::from_cycles(3, &[&[0, 1]]);
        let b = Permutation::from_cycles(3, &[&[0, 1, 2]]);
        let g = enumerate_group(&[a, b], 3, 100).unwrap();
        assert_eq!(g.elements.len(), 6);
        assert!(matches!(
            enumerate_group(
                &[Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]), Permutation::from_cycles(5, &[&[0, 1]])],
                5,
                10
            ),
            Err(PermError::TooLarge(10))
        ));
    }
}
