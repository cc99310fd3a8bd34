//! w-ary index calculus over `[0, N = w^m)`.
//!
//! Indices are read as digit vectors `(a_0, ..., a_{m-1})` with `a_0` most
//! significant. The module provides digit replacement `a(i, u)`, digit
//! insertion `g_{i,u}(a)` from the smaller space `[0, N/w)`, addition modulo
//! w, and the basis-partition selector matrices `V_{i,t}` that repair and
//! select matrices are built from.
//!
//! Selectors are kept as index lists, never dense matrices: all the algebra
//! they participate in reduces to picking and summing rows.

/// The index space `[0, w^m)` with digit operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Digits {
    w: usize,
    m: usize,
    size: usize,
}

impl Digits {
    /// Panics if `w < 2`, `m < 1`, or `w^m` overflows the desk-scale budget.
    pub fn new(w: usize, m: usize) -> Self {
        assert!(w >= 2, "radix must be at least 2");
        assert!(m >= 1, "need at least one digit");
        let mut size = 1usize;
        for _ in 0..m {
            size = size
                .checked_mul(w)
                .filter(|&n| n <= 1 << 24)
                .expect("w^m out of range");
        }
        Digits { w, m, size }
    }

    pub fn w(&self) -> usize {
        self.w
    }

    /// Number of digits m.
    pub fn m(&self) -> usize {
        self.m
    }

    /// N = w^m.
    pub fn size(&self) -> usize {
        self.size
    }

    /// The index space over one fewer digit; its size is N/w.
    pub fn shrink(&self) -> Digits {
        assert!(self.m >= 2, "cannot shrink a single-digit space");
        Digits::new(self.w, self.m - 1)
    }

    /// Place value of digit position i, i.e. w^(m-1-i).
    fn place(&self, i: usize) -> usize {
        assert!(
            i < self.m,
            "digit position {i} out of range (m = {})",
            self.m
        );
        self.w.pow((self.m - 1 - i) as u32)
    }

    /// Digit vector of `a`, most significant first.
    pub fn expand(&self, a: usize) -> Vec<usize> {
        assert!(a < self.size, "index {a} out of range (N = {})", self.size);
        let mut digits = vec![0; self.m];
        let mut rest = a;
        for j in (0..self.m).rev() {
            digits[j] = rest % self.w;
            rest /= self.w;
        }
        digits
    }

    /// Inverse of [`expand`](Self::expand).
    pub fn compose(&self, digits: &[usize]) -> usize {
        assert_eq!(digits.len(), self.m, "wrong digit count");
        digits.iter().fold(0, |acc, &d| {
            assert!(d < self.w, "digit {d} out of range (w = {})", self.w);
            acc * self.w + d
        })
    }

    /// The i-th digit a_i.
    pub fn digit(&self, a: usize, i: usize) -> usize {
        assert!(a < self.size, "index {a} out of range (N = {})", self.size);
        a / self.place(i) % self.w
    }

    /// a(i, u): replace the i-th digit with u.
    pub fn replace(&self, a: usize, i: usize, u: usize) -> usize {
        assert!(u < self.w, "digit {u} out of range (w = {})", self.w);
        let p = self.place(i);
        a - self.digit(a, i) * p + u * p
    }

    /// g_{i,u}(a): insert u as the i-th digit of `a`, where `a` ranges over
    /// the smaller space `[0, w^(m-1))`.
    pub fn insert(&self, a: usize, i: usize, u: usize) -> usize {
        assert!(
            self.m >= 1 && a < self.size / self.w,
            "index {a} out of range (N/w = {})",
            self.size / self.w
        );
        assert!(
            i < self.m,
            "digit position {i} out of range (m = {})",
            self.m
        );
        assert!(u < self.w, "digit {u} out of range (w = {})", self.w);
        let p = self.place(i);
        let high = a / p;
        let low = a % p;
        (high * self.w + u) * p + low
    }

    /// V_{i,t}: the (N/w) x N selector whose row a is the basis vector
    /// picked by `g_{i,t}(a)`, rows in ascending a.
    pub fn selector(&self, i: usize, t: usize) -> Selector {
        let rows = (0..self.size / self.w)
            .map(|a| self.insert(a, i, t))
            .collect();
        Selector {
            rows,
            width: self.size,
        }
    }

    /// V_{i,0} + V_{i,1} + ... + V_{i,w-1} as row-aligned supports.
    pub fn selector_sum(&self, i: usize) -> SelectorSum {
        let rows = (0..self.size / self.w)
            .map(|a| (0..self.w).map(|u| self.insert(a, i, u)).collect())
            .collect();
        SelectorSum {
            rows,
            width: self.size,
        }
    }
}

/// (u + v) mod w.
pub fn digit_add(u: usize, v: usize, w: usize) -> usize {
    assert!(u < w && v < w, "digits out of range");
    (u + v) % w
}

/// A full-rank 0/1 row-selection matrix: row a is the standard basis vector
/// `e_{rows[a]}` of width `width`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selector {
    rows: Vec<usize>,
    width: usize,
}

impl Selector {
    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }
}

/// A row-wise sum of selectors: row a is the 0/1 vector with support
/// `rows[a]`. Supports are pairwise disjoint across rows for every sum of
/// partition selectors, so the matrix has full row rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectorSum {
    rows: Vec<Vec<usize>>,
    width: usize,
}

impl SelectorSum {
    pub fn from_selector(sel: &Selector) -> Self {
        SelectorSum {
            rows: sel.rows.iter().map(|&b| vec![b]).collect(),
            width: sel.width,
        }
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }
}
