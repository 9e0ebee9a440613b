//! Linear algebra over F₂ on packed bit rows.

use crate::bits::BitVec;

/// Row-echelon basis that accepts vectors one at a time.
///
/// Each stored row is keyed by its lowest set bit and contains no other
/// stored pivot below it, so insertion is a single reduction pass.
#[derive(Debug, Clone)]
pub struct IncrementalBasis {
    dim: usize,
    rows: Vec<Option<(BitVec, bool)>>,
    rank: usize,
    inconsistent: bool,
}

impl IncrementalBasis {
    pub fn new(dim: usize) -> Self {
        IncrementalBasis {
            dim,
            rows: vec![None; dim],
            rank: 0,
            inconsistent: false,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn is_full(&self) -> bool {
        self.rank == self.dim
    }

    /// Adds a vector; returns `true` when it increased the rank.
    pub fn insert(&mut self, v: BitVec) -> bool {
        self.insert_equation(v, false)
    }

    /// Adds the equation `⟨v, x⟩ = rhs`. Returns `true` when the rank grew.
    /// A dependent equation with the wrong right-hand side marks the system
    /// inconsistent.
    pub fn insert_equation(&mut self, mut v: BitVec, mut rhs: bool) -> bool {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        while let Some(p) = v.first_one() {
            match &self.rows[p] {
                Some((row, b)) => {
                    v.xor_assign(row);
                    rhs ^= *b;
                }
                None => {
                    self.rows[p] = Some((v, rhs));
                    self.rank += 1;
                    return true;
                }
            }
        }
        if rhs {
            self.inconsistent = true;
        }
        false
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    /// A solution with every free variable set to zero, or `None` if the
    /// system is inconsistent.
    pub fn particular_solution(&self) -> Option<BitVec> {
        if self.inconsistent {
            return None;
        }
        let mut x = BitVec::zeros(self.dim);
        for p in (0..self.dim).rev() {
            if let Some((row, rhs)) = &self.rows[p] {
                let mut bit = *rhs;
                for j in row.iter_ones() {
                    if j > p && x.get(j) {
                        bit = !bit;
                    }
                }
                x.set(p, bit);
            }
        }
        Some(x)
    }
}

/// Rank of a set of rows.
pub fn rank(rows: &[BitVec]) -> usize {
    let Some(first) = rows.first() else {
        return 0;
    };
    let mut basis = IncrementalBasis::new(first.len());
    for r in rows {
        basis.insert(r.clone());
    }
    basis.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(bits: &[u8]) -> BitVec {
        BitVec::from_bools(&bits.iter().map(|&b| b == 1).collect::<Vec<_>>())
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(&[]), 0);
        assert_eq!(rank(&[bv(&[1, 0, 1]), bv(&[0, 1, 1]), bv(&[1, 1, 0])]), 2);
        assert_eq!(rank(&[bv(&[1, 0, 0]), bv(&[0, 1, 0]), bv(&[0, 0, 1])]), 3);
        assert_eq!(rank(&[bv(&[0, 0, 0])]), 0);
    }

    #[test]
    fn solves_and_detects_inconsistency() {
        let mut b = IncrementalBasis::new(3);
        b.insert_equation(bv(&[1, 1, 0]), true);
        b.insert_equation(bv(&[0, 1, 1]), false);
        b.insert_equation(bv(&[0, 0, 1]), true);
        let x = b.particular_solution().unwrap();
        assert_eq!(x.to_bools(), vec![false, true, true]);
        assert!(b.is_full());

        let mut c = IncrementalBasis::new(2);
        c.insert_equation(bv(&[1, 1]), true);
        c.insert_equation(bv(&[1, 1]), false);
        assert!(!c.is_consistent());
        assert!(c.particular_solution().is_none());
    }

    #[test]
    fn brute_force_solution_agreement() {
        // every system over 4 variables with 3 random-ish equations
        for seed in 0u32..512 {
            let rows: Vec<(BitVec, bool)> = (0..3)
                .map(|i| {
                    let w = (seed >> (3 * i)) as u64 & 0xf;
                    (
                        BitVec::from_words(4, vec![w ^ (i as u64 * 5)]),
                        (seed >> i) & 1 == 1,
                    )
                })
                .collect();
            let mut b = IncrementalBasis::new(4);
            for (r, rhs) in &rows {
                b.insert_equation(r.clone(), *rhs);
            }
            let solutions: Vec<u64> = (0..16u64)
                .filter(|&x| {
                    rows.iter()
                        .all(|(r, rhs)| ((r.words()[0] & x).count_ones() % 2 == 1) == *rhs)
                })
                .collect();
            match b.particular_solution() {
                None => assert!(solutions.is_empty()),
                Some(x) => {
                    assert!(solutions.contains(&x.words()[0]));
                    assert_eq!(solutions.len(), 1 << (4 - b.rank()));
                }
            }
        }
    }
}
