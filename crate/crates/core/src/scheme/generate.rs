//! Standard scheme families: cyclic, group, Hamming and Johnson.

use thiserror::Error;

use super::{ClassMatrix, SchemeError};
use crate::tensor::{pairs, triples};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group table is empty")]
    Empty,
    #[error("group table needs {expected} entries, got {found}")]
    Size { expected: usize, found: usize },
    #[error("product {a}*{b} = {value} is outside 0..{n}")]
    NotClosed {
        a: usize,
        b: usize,
        value: usize,
        n: usize,
    },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
}

/// A validated finite group given by its Cayley table, `table[a * n + b] = a*b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    n: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl GroupTable {
    pub fn new(n: usize, table: Vec<usize>) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::Empty);
        }
        if table.len() != n * n {
            return Err(GroupError::Size {
                expected: n * n,
                found: table.len(),
            });
        }
        let mul = |a: usize, b: usize| table[a * n + b];
        for (a, b) in pairs(n) {
            let value = mul(a, b);
            if value >= n {
                return Err(GroupError::NotClosed { a, b, value, n });
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| mul(e, a) == a && mul(a, e) == a))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| mul(a, b) == identity && mul(b, a) == identity)
                .ok_or(GroupError::NoInverse(a))?;
            inverse.push(inv);
        }
        for (a, b, c) in triples(n) {
            if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                return Err(GroupError::NotAssociative { a, b, c });
            }
        }
        Ok(GroupTable {
            n,
            table,
            identity,
            inverse,
        })
    }

    /// Symmetric group on `k` letters; elements are permutations in
    /// lexicographic order and `a*b` applies `b` first.
    pub fn symmetric(k: usize) -> Self {
        let perms = permutations(k);
        let n = perms.len();
        let index = |p: &[usize]| perms.iter().position(|q| q == p).expect("closed");
        let mut table = Vec::with_capacity(n * n);
        for a in &perms {
            for b in &perms {
                let ab: Vec<usize> = (0..k).map(|i| a[b[i]]).collect();
                table.push(index(&ab));
            }
        }
        GroupTable::new(n, table).expect("symmetric group table is valid")
    }

    /// Cyclic group `Z_n` under addition.
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        GroupTable::new(n, pairs(n).map(|(a, b)| (a + b) % n).collect())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn is_abelian(&self) -> bool {
        pairs(self.n).all(|(a, b)| self.mul(a, b) == self.mul(b, a))
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..k {
        for rest in permutations(k - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|v| if v >= first { v + 1 } else { v }));
            out.push(p);
        }
    }
    out
}

/// `class(x, y) = (y - x) mod n`.
pub fn gen_cyclic(n: usize) -> Result<ClassMatrix, SchemeError> {
    if n == 0 {
        return Err(SchemeError::Empty);
    }
    ClassMatrix::from_fn(n, |x, y| (y + n - x) % n)
}

/// `class(x, y) = y * x^-1`.
pub fn gen_group(group: &GroupTable) -> Result<ClassMatrix, SchemeError> {
    ClassMatrix::from_fn(group.order(), |x, y| group.mul(y, group.inverse(x)))
}

/// Words of length `n` over a `q`-letter alphabet, classed by Hamming
/// distance. Words are numbered in base `q`, most significant letter first.
pub fn gen_hamming(n: usize, q: usize) -> Result<ClassMatrix, SchemeError> {
    if q < 2 {
        return Err(SchemeError::BadParameter(format!(
            "Hamming alphabet size {q} < 2"
        )));
    }
    let points = q
        .checked_pow(u32::try_from(n).map_err(|_| SchemeError::BadParameter("length".into()))?)
        .ok_or_else(|| SchemeError::BadParameter(format!("{q}^{n} points overflow")))?;
    let digits = |mut w: usize| {
        let mut d = vec![0; n];
        for slot in d.iter_mut().rev() {
            *slot = w % q;
            w /= q;
        }
        d
    };
    ClassMatrix::from_fn(points, |x, y| {
        digits(x)
            .iter()
            .zip(digits(y))
            .filter(|(a, b)| **a != *b)
            .count()
    })
}

/// `k`-subsets of a `v`-set in lexicographic order, classed by
/// `k - |x ∩ y|`.
pub fn gen_johnson(v: usize, k: usize) -> Result<ClassMatrix, SchemeError> {
    if k > v {
        return Err(SchemeError::BadParameter(format!(
            "Johnson k={k} exceeds v={v}"
        )));
    }
    let subsets = k_subsets(v, k);
    ClassMatrix::from_fn(subsets.len(), |x, y| {
        let common = subsets[x].iter().filter(|e| subsets[y].contains(e)).count();
        k - common
    })
}

fn k_subsets(v: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, v: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for e in start..v {
            cur.push(e);
            go(e + 1, v, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, v, k, &mut Vec::new(), &mut out);
    out
}
