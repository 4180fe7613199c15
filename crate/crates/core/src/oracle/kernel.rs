//! A small, self-contained GF(p) matrix kernel for the brute-force oracle.
//!
//! It shares no code with the exact-arithmetic modules on purpose: the oracle is
//! the ground truth those modules are checked against, and its rank routine is
//! the independent re-implementation used for the self-check.

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::matrix::Matrix;

/// Largest number of rows or columns a kernel matrix may have.
pub const MAX_SIDE: usize = 8;
/// Largest characteristic the kernel handles.
pub const MAX_PRIME: u8 = 13;

/// Arithmetic modulo a small prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gf {
    p: u8,
    inv: [u8; MAX_PRIME as usize],
}

impl Gf {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..=u32::from(MAX_PRIME)).contains(&p) || !(2..p).all(|d| !p.is_multiple_of(d)) {
            return Err(Error::Field(format!("the oracle supports primes up to {MAX_PRIME}, got {p}")));
        }
        let p = p as u8;
        let mut inv = [0u8; MAX_PRIME as usize];
        for a in 1..p {
            inv[a as usize] = (1..p).find(|&b| (a as u16 * b as u16) % p as u16 == 1).unwrap();
        }
        Ok(Gf { p, inv })
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.p as u16) as u8
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }
}

/// Dense matrix of residues, at most `MAX_SIDE × MAX_SIDE`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Small {
    rows: u8,
    cols: u8,
    e: [u8; MAX_SIDE * MAX_SIDE],
}

impl std::fmt::Debug for Small {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}[{}]", self.rows, self.cols, self.digits())
    }
}

impl Small {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows <= MAX_SIDE && cols <= MAX_SIDE, "kernel matrices are at most {MAX_SIDE}x{MAX_SIDE}");
        Small {
            rows: rows as u8,
            cols: cols as u8,
            e: [0; MAX_SIDE * MAX_SIDE],
        }
    }

    /// Row-major entries taken from the base-`p` digits of `code`, most
    /// significant first, so that increasing codes run in lexicographic order.
    pub fn from_code(rows: usize, cols: usize, p: u8, mut code: u64) -> Self {
        let mut m = Small::zeros(rows, cols);
        for idx in (0..rows * cols).rev() {
            m.set(idx / cols, idx % cols, (code % p as u64) as u8);
            code /= p as u64;
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: &[u8]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        let mut m = Small::zeros(rows, cols);
        for (idx, &v) in entries.iter().enumerate() {
            m.set(idx / cols, idx % cols, v);
        }
        m
    }

    pub fn from_matrix(a: &Matrix<PrimeField>) -> Result<Self> {
        let (r, c) = a.shape();
        if r > MAX_SIDE || c > MAX_SIDE {
            return Err(Error::Precondition(format!("oracle matrices are at most {MAX_SIDE}x{MAX_SIDE}, got {r}x{c}")));
        }
        let mut m = Small::zeros(r, c);
        for i in 0..r {
            for j in 0..c {
                m.set(i, j, *a.get(i, j) as u8);
            }
        }
        Ok(m)
    }

    pub fn to_matrix(&self, field: PrimeField) -> Matrix<PrimeField> {
        let data = self.entries().iter().map(|&v| field.elem(u64::from(v))).collect();
        Matrix::new(field, self.rows(), self.cols(), data).expect("length matches")
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows as usize
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols as usize
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.e[r * MAX_SIDE + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.e[r * MAX_SIDE + c] = v;
    }

    pub fn entries(&self) -> Vec<u8> {
        (0..self.rows())
            .flat_map(|r| (0..self.cols()).map(move |c| (r, c)))
            .map(|(r, c)| self.get(r, c))
            .collect()
    }

    /// Entries as a digit string, row-major (a compact reproducer).
    pub fn digits(&self) -> String {
        self.entries().iter().map(|d| char::from_digit(u32::from(*d), 36).unwrap()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|&v| v == 0)
    }

    pub fn add(&self, other: &Small, gf: &Gf) -> Small {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = *self;
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                out.set(r, c, gf.add(self.get(r, c), other.get(r, c)));
            }
        }
        out
    }

    pub fn sub(&self, other: &Small, gf: &Gf) -> Small {
        let mut out = *self;
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                out.set(r, c, gf.sub(self.get(r, c), other.get(r, c)));
            }
        }
        out
    }

    pub fn mul(&self, other: &Small, gf: &Gf) -> Small {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = Small::zeros(self.rows(), other.cols());
        for r in 0..self.rows() {
            for c in 0..other.cols() {
                let mut acc = 0u16;
                for k in 0..self.cols() {
                    acc += self.get(r, k) as u16 * other.get(k, c) as u16;
                }
                out.set(r, c, (acc % gf.p as u16) as u8);
            }
        }
        out
    }

    /// `[[a, b], [c, d]]`.
    pub fn block(a: &Small, b: &Small, c: &Small, d: &Small) -> Small {
        let mut out = Small::zeros(a.rows() + c.rows(), a.cols() + b.cols());
        out.put(0, 0, a);
        out.put(0, a.cols(), b);
        out.put(a.rows(), 0, c);
        out.put(a.rows(), a.cols(), d);
        out
    }

    pub fn put(&mut self, r0: usize, c0: usize, m: &Small) {
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                self.set(r0 + r, c0 + c, m.get(r, c));
            }
        }
    }

    pub fn identity(n: usize) -> Small {
        let mut m = Small::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Rank by row reduction from scratch.
    pub fn rank(&self, gf: &Gf) -> usize {
        let mut w = self.e;
        let (rows, cols) = (self.rows(), self.cols());
        let p = gf.p as u16;
        let mut rank = 0;
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(piv) = (rank..rows).find(|&r| w[r * MAX_SIDE + c] != 0) else {
                continue;
            };
            if piv != rank {
                for k in c..cols {
                    w.swap(piv * MAX_SIDE + k, rank * MAX_SIDE + k);
                }
            }
            let inv = gf.inv[w[rank * MAX_SIDE + c] as usize] as u16;
            for r in rank + 1..rows {
                let v = w[r * MAX_SIDE + c];
                if v == 0 {
                    continue;
                }
                let f = (p - (v as u16 * inv) % p) % p;
                for k in c..cols {
                    let s = w[r * MAX_SIDE + k] as u16 + f * w[rank * MAX_SIDE + k] as u16;
                    w[r * MAX_SIDE + k] = (s % p) as u8;
                }
            }
            rank += 1;
        }
        rank
    }
}
