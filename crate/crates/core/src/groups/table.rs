//! Finite groups given by an explicit multiplication table, with the
//! brute-force invariants used to compare groups: element orders and the
//! abelianization.

use std::collections::{BTreeMap, VecDeque};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicationTable {
    n: usize,
    data: Vec<usize>,
    identity: usize,
}

impl MultiplicationTable {
    /// `data[i * n + j]` is the index of `x_i * x_j`.
    pub fn new(n: usize, data: Vec<usize>, identity: usize) -> Self {
        assert_eq!(data.len(), n * n, "table must be n x n");
        MultiplicationTable { n, data, identity }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.data[a * self.n + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.n)
            .find(|&b| self.mul(a, b) == self.identity)
            .expect("every element has an inverse")
    }

    pub fn is_associative(&self) -> bool {
        (0..self.n).all(|a| {
            (0..self.n).all(|b| {
                let ab = self.mul(a, b);
                (0..self.n).all(|c| self.mul(ab, c) == self.mul(a, self.mul(b, c)))
            })
        })
    }

    /// Identity is two-sided and every element has a two-sided inverse.
    pub fn has_identity_and_inverses(&self) -> bool {
        let e = self.identity;
        (0..self.n).all(|a| {
            self.mul(e, a) == a
                && self.mul(a, e) == a
                && (0..self.n).any(|b| self.mul(a, b) == e && self.mul(b, a) == e)
        })
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Map from element order to the number of elements of that order.
    pub fn order_histogram(&self) -> BTreeMap<u64, usize> {
        let mut hist = BTreeMap::new();
        for a in 0..self.n {
            *hist.entry(self.element_order(a)).or_insert(0) += 1;
        }
        hist
    }

    fn closure(&self, generators: &[usize]) -> Vec<bool> {
        let mut member = vec![false; self.n];
        member[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in generators {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    queue.push_back(y);
                }
            }
        }
        member
    }

    /// Membership vector of `[G, G]`.
    pub fn commutator_subgroup(&self) -> Vec<bool> {
        let inv: Vec<usize> = (0..self.n).map(|a| self.inverse(a)).collect();
        let mut commutators: Vec<usize> = Vec::new();
        let mut seen = vec![false; self.n];
        for a in 0..self.n {
            for b in 0..self.n {
                let c = self.mul(self.mul(inv[a], inv[b]), self.mul(a, b));
                if !seen[c] {
                    seen[c] = true;
                    commutators.push(c);
                }
            }
        }
        self.closure(&commutators)
    }

    /// Invariant factors `d_1 | d_2 | ...` (all `> 1`) of `G / [G, G]`.
    pub fn abelian_invariants(&self) -> Vec<u64> {
        let normal = self.commutator_subgroup();
        let kernel: Vec<usize> = (0..self.n).filter(|&x| normal[x]).collect();
        // coset labels
        let mut coset = vec![usize::MAX; self.n];
        let mut reps = Vec::new();
        for g in 0..self.n {
            if coset[g] != usize::MAX {
                continue;
            }
            for &k in &kernel {
                coset[self.mul(g, k)] = reps.len();
            }
            reps.push(g);
        }
        let q = reps.len() as u64;
        let power = |x: usize, e: u64| {
            let mut acc = self.identity;
            for _ in 0..e {
                acc = self.mul(acc, x);
            }
            acc
        };

        let mut by_prime: Vec<(u64, Vec<u32>)> = Vec::new();
        for (p, v) in factorize(q) {
            // r[k] = log_p #{ cosets killed by p^k }
            let mut r = vec![0u32];
            let mut pk = 1u64;
            loop {
                pk *= p;
                let killed = reps.iter().filter(|&&x| normal[power(x, pk)]).count() as u64;
                let exp = log_exact(killed, p);
                r.push(exp);
                if exp == v {
                    break;
                }
            }
            // at_least[k] = number of cyclic factors of order >= p^k
            let at_least: Vec<u32> = (1..r.len()).map(|k| r[k] - r[k - 1]).collect();
            let mut exps = Vec::new();
            for k in 0..at_least.len() {
                let next = at_least.get(k + 1).copied().unwrap_or(0);
                for _ in 0..(at_least[k] - next) {
                    exps.push(k as u32 + 1);
                }
            }
            exps.sort_unstable_by(|a, b| b.cmp(a));
            by_prime.push((p, exps));
        }
        let count = by_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
        let mut factors: Vec<u64> = (0..count)
            .map(|i| {
                by_prime
                    .iter()
                    .map(|(p, exps)| exps.get(i).map_or(1, |&e| p.pow(e)))
                    .product()
            })
            .collect();
        factors.sort_unstable();
        factors
    }
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn log_exact(mut x: u64, p: u64) -> u32 {
    let mut e = 0;
    while x.is_multiple_of(p) && x > 1 {
        x /= p;
        e += 1;
    }
    debug_assert_eq!(x, 1, "count of killed cosets must be a prime power");
    e
}
