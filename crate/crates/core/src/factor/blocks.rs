//! Block systems of imprimitivity.
//!
//! Minimal block systems come from the classical union-find algorithm seeded
//! by point pairs; closure under joins yields the full lattice. Proper
//! systems certify decomposability: a block of size d corresponds to an
//! inner factor of degree d.

use super::monodromy::MonodromyRep;
use super::perm::Permutation;
use crate::{Error, Result};
use alloc::collections::BTreeSet;
use alloc::{vec, vec::Vec};

/// A partition of {0..n-1} into equal-size cells preserved by every
/// generator. Blocks and their entries are sorted, so equality is
/// structural.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BlockSystem {
    pub blocks: Vec<Vec<usize>>,
}

impl BlockSystem {
    pub fn block_size(&self) -> usize {
        self.blocks.first().map_or(0, |b| b.len())
    }

    pub fn degree(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum()
    }

    pub fn is_proper(&self) -> bool {
        let d = self.block_size();
        d > 1 && d < self.degree()
    }

    fn from_classes(classes: &[usize]) -> Self {
        let n = classes.len();
        let mut map: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, &c) in classes.iter().enumerate() {
            map[c].push(i);
        }
        let mut blocks: Vec<Vec<usize>> = map.into_iter().filter(|b| !b.is_empty()).collect();
        for b in blocks.iter_mut() {
            b.sort_unstable();
        }
        blocks.sort();
        BlockSystem { blocks }
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, i: usize) -> usize {
        let mut i = i;
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            false
        } else {
            self.parent[ra] = rb;
            true
        }
    }

    fn classes(&mut self) -> Vec<usize> {
        (0..self.parent.len()).map(|i| self.find(i)).collect()
    }
}

/// The minimal block system whose block contains both `a` and `b`;
/// `None` when that closure is the whole point set.
pub fn minimal_block_system(gens: &[Permutation], a: usize, b: usize) -> Option<BlockSystem> {
    let n = gens.first()?.degree();
    let mut uf = UnionFind::new(n);
    let mut queue = vec![(a, b)];
    uf.union(a, b);
    while let Some((x, y)) = queue.pop() {
        for g in gens {
            let (gx, gy) = (g.apply(x), g.apply(y));
            if uf.union(gx, gy) {
                queue.push((gx, gy));
            }
        }
    }
    let classes = uf.classes();
    let sys = BlockSystem::from_classes(&classes);
    if sys.blocks.len() <= 1 {
        None
    } else {
        Some(sys)
    }
}

/// Join (finest common coarsening) of two partitions.
pub fn join(p: &BlockSystem, q: &BlockSystem) -> BlockSystem {
    let n = p.degree();
    let mut uf = UnionFind::new(n);
    for b in p.blocks.iter().chain(q.blocks.iter()) {
        for w in b.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let classes = uf.classes();
    BlockSystem::from_classes(&classes)
}

/// All proper block systems of a transitive representation: minimal systems
/// from the seeds {0, i} closed under joins.
pub fn block_systems(rep: &MonodromyRep) -> Result<Vec<BlockSystem>> {
    if !rep.is_transitive() {
        return Err(Error::domain(
            "block systems need a transitive representation",
        ));
    }
    let n = rep.degree;
    let mut found: BTreeSet<BlockSystem> = BTreeSet::new();
    for i in 1..n {
        if let Some(sys) = minimal_block_system(&rep.loops, 0, i) {
            if sys.is_proper() {
                found.insert(sys);
            }
        }
    }
    // closure under joins
    loop {
        let mut added = false;
        let list: Vec<BlockSystem> = found.iter().cloned().collect();
        for i in 0..list.len() {
            for j in (i + 1)..list.len() {
                let joined = join(&list[i], &list[j]);
                if joined.is_proper() && !found.contains(&joined) {
                    found.insert(joined);
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    // transitivity makes every system equal-size-celled; verify anyway
    for sys in &found {
        let d = sys.block_size();
        if sys.blocks.iter().any(|b| b.len() != d) || n % d != 0 {
            return Err(Error::inconsistent("unequal block sizes in a block system"));
        }
    }
    Ok(found.into_iter().collect())
}

/// The factor-degree lattice of `f` certified by its monodromy: block sizes
/// of proper systems together with 1 and the degree.
pub fn factor_degree_lattice(rep: &MonodromyRep) -> Result<BTreeSet<usize>> {
    let mut degrees: BTreeSet<usize> = BTreeSet::new();
    degrees.insert(1);
    degrees.insert(rep.degree);
    for sys in block_systems(rep)? {
        degrees.insert(sys.block_size());
    }
    Ok(degrees)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_six_blocks() {
        let c6 = Permutation::from_cycles_one_based(6, &[vec![1, 2, 3, 4, 5, 6]]).unwrap();
        let rep = MonodromyRep {
            base_point: crate::C64::new(0.0, 0.0),
            critical_values: vec![],
            loops: vec![c6],
            degree: 6,
        };
        let systems = block_systems(&rep).unwrap();
        let mut sizes: Vec<usize> = systems.iter().map(|s| s.block_size()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 3]);
        let lattice = factor_degree_lattice(&rep).unwrap();
        assert_eq!(lattice.into_iter().collect::<Vec<_>>(), vec![1, 2, 3, 6]);
    }

    #[test]
    fn prime_degree_has_no_proper_system() {
        let c5 = Permutation::from_cycles_one_based(5, &[vec![1, 2, 3, 4, 5]]).unwrap();
        let rep = MonodromyRep {
            base_point: crate::C64::new(0.0, 0.0),
            critical_values: vec![],
            loops: vec![c5],
            degree: 5,
        };
        assert!(block_systems(&rep).unwrap().is_empty());
    }
}
