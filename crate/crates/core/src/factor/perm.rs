//! Permutations of {0..n-1} (printed 1-based in cycle notation).

use crate::{Error, Result};
use alloc::collections::BTreeSet;
use alloc::{format, vec, vec::Vec};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::domain("not a bijection"));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// From 1-based cycles, e.g. `[(1,4,3,2)]` on n points.
    pub fn from_cycles_one_based(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        for cyc in cycles {
            for w in 0..cyc.len() {
                let from = cyc[w]
                    .checked_sub(1)
                    .ok_or_else(|| Error::domain("cycle entries are 1-based"))?;
                let to = cyc[(w + 1) % cyc.len()] - 1;
                if from >= n || to >= n {
                    return Err(Error::domain("cycle entry out of range"));
                }
                images[from] = to;
            }
        }
        Permutation::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self` after `rhs`.
    pub fn compose(&self, rhs: &Permutation) -> Permutation {
        Permutation {
            images: (0..self.images.len())
                .map(|i| self.images[rhs.images[i]])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn is_involution(&self) -> bool {
        self.compose(self).is_identity()
    }

    /// Cycles (including fixed points), each starting at its least element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut cur = self.images[start];
            while cur != start {
                seen[cur] = true;
                cyc.push(cur);
                cur = self.images[cur];
            }
            out.push(cyc);
        }
        out
    }

    /// Cycle lengths, sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn is_full_cycle(&self) -> bool {
        self.cycles().len() == 1 && self.degree() > 0
    }

    /// 1-based cycle notation, fixed points omitted; identity prints "()".
    pub fn cycle_string(&self) -> alloc::string::String {
        let mut s = alloc::string::String::new();
        for cyc in self.cycles() {
            if cyc.len() < 2 {
                continue;
            }
            s.push('(');
            for (i, p) in cyc.iter().enumerate() {
                if i > 0 {
                    s.push(' ');
                }
                s.push_str(&format!("{}", p + 1));
            }
            s.push(')');
        }
        if s.is_empty() {
            s.push_str("()");
        }
        s
    }
}

/// Orbit of `0` under the generators covers all points.
pub fn is_transitive(gens: &[Permutation]) -> bool {
    let n = match gens.first() {
        Some(g) => g.degree(),
        None => return false,
    };
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(p) = stack.pop() {
        for g in gens {
            for q in [g.apply(p), g.inverse().apply(p)] {
                if !seen[q] {
                    seen[q] = true;
                    count += 1;
                    stack.push(q);
                }
            }
        }
    }
    count == n
}

/// Order of the generated group by breadth-first closure, giving up (and
/// returning `None`) past `cap` elements.
pub fn generated_group_order(gens: &[Permutation], cap: usize) -> Option<usize> {
    let n = gens.first()?.degree();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let id = Permutation::identity(n);
    seen.insert(id.images().to_vec());
    let mut frontier = vec![id];
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q = g.compose(&p);
            if seen.insert(q.images().to_vec()) {
                if seen.len() > cap {
                    return None;
                }
                frontier.push(q);
            }
        }
    }
    Some(seen.len())
}
