use std::collections::HashMap;

use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("empty group")]
    Empty,
    #[error("multiplication table is not square (row {row} has {len} entries, expected {n})")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("table entry {value} at ({row}, {col}) out of range")]
    OutOfRange { row: usize, col: usize, value: usize },
    #[error("no identity element")]
    NoIdentity,
    #[error("row {0} is not a permutation of the elements (element has no inverse)")]
    NotInvertible(usize),
    #[error("column {0} is not a permutation of the elements")]
    NotLatin(usize),
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("permutation {0} is not a bijection of 0..{1}")]
    BadPermutation(usize, usize),
    #[error("permutations {0} and {1} coincide")]
    DuplicatePermutation(usize, usize),
    #[error("permutations are not closed under composition ({0} o {1})")]
    NotClosed(usize, usize),
}

/// A finite group given by its full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupData {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

/// One conjugacy class; `rep` is its smallest element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub rep: usize,
    pub elements: Vec<usize>,
}

impl GroupData {
    /// `table[a][b] = a * b`.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != n {
                return Err(GroupError::NotSquare { row, len: r.len(), n });
            }
            if let Some((col, &value)) = r.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(GroupError::OutOfRange { row, col, value });
            }
        }
        let identity = (0..n).find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x)).ok_or(GroupError::NoIdentity)?;
        for (a, row) in table.iter().enumerate() {
            let mut seen = vec![false; n];
            for &v in row {
                if std::mem::replace(&mut seen[v], true) {
                    return Err(GroupError::NotInvertible(a));
                }
            }
        }
        for c in 0..n {
            let mut seen = vec![false; n];
            for row in &table {
                if std::mem::replace(&mut seen[row[c]], true) {
                    return Err(GroupError::NotLatin(c));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        let inverse = (0..n).map(|a| (0..n).find(|&b| table[a][b] == identity).unwrap()).collect();
        Ok(GroupData { table, identity, inverse })
    }

    /// Elements are the given permutations; `(p * q)(i) = p[q[i]]`.
    pub fn from_permutations(perms: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = perms.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        let degree = perms[0].len();
        let mut index = HashMap::new();
        for (i, p) in perms.iter().enumerate() {
            let mut seen = vec![false; degree];
            if p.len() != degree || p.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
                return Err(GroupError::BadPermutation(i, degree));
            }
            if let Some(j) = index.insert(p.clone(), i) {
                return Err(GroupError::DuplicatePermutation(j, i));
            }
        }
        let mut table = vec![vec![0; n]; n];
        for (a, p) in perms.iter().enumerate() {
            for (b, q) in perms.iter().enumerate() {
                let pq: Vec<usize> = q.iter().map(|&x| p[x]).collect();
                table[a][b] = *index.get(&pq).ok_or(GroupError::NotClosed(a, b))?;
            }
        }
        Self::from_table(table)
    }

    /// Cyclic group `Z/n` with `a * b = a + b mod n`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(table).expect("cyclic table is a group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `h g h^{-1}`.
    pub fn conjugate(&self, h: usize, g: usize) -> usize {
        self.mul(self.mul(h, g), self.inv(h))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Least common multiple of all element orders.
    pub fn exponent(&self) -> usize {
        (0..self.order()).map(|g| self.element_order(g)).fold(1, |a, b| a.lcm(&b))
    }

    pub fn centralizer(&self, g: usize) -> Vec<usize> {
        (0..self.order()).filter(|&h| self.mul(h, g) == self.mul(g, h)).collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|g| self.centralizer(g).len() == self.order())
    }

    /// Classes in order of their smallest element.
    pub fn conjugacy_classes(&self) -> Vec<ConjugacyClass> {
        let n = self.order();
        let mut assigned = vec![false; n];
        let mut out = Vec::new();
        for g in 0..n {
            if assigned[g] {
                continue;
            }
            let mut elements: Vec<usize> = (0..n).map(|h| self.conjugate(h, g)).collect();
            elements.sort_unstable();
            elements.dedup();
            for &x in &elements {
                assigned[x] = true;
            }
            debug_assert_eq!(elements.len() * self.centralizer(g).len(), n);
            out.push(ConjugacyClass { rep: g, elements });
        }
        out
    }

    /// Index into [`conjugacy_classes`](Self::conjugacy_classes) of the class containing `g`.
    pub fn class_index(&self, g: usize) -> usize {
        self.conjugacy_classes().iter().position(|c| c.elements.contains(&g)).expect("every element lies in a class")
    }

    /// Some `h` with `h a h^{-1} = b`.
    pub fn conjugator(&self, a: usize, b: usize) -> Option<usize> {
        (0..self.order()).find(|&h| self.conjugate(h, a) == b)
    }
}
