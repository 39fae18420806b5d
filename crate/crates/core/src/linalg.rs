//! Dense linear algebra over prime fields GF(p).

/// A linear system `A x = b` over GF(p), assembled row by row.
#[derive(Clone, Debug)]
pub struct System {
    p: u32,
    ncols: usize,
    rows: Vec<Row>,
}

#[derive(Clone, Debug)]
enum Row {
    Bits(Vec<u64>, bool),
    Dense(Vec<u32>, u32),
}

impl System {
    pub fn new(p: u32, ncols: usize) -> Self {
        System { p, ncols, rows: Vec::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// Adds the equation `sum coeffs[k].1 * x[coeffs[k].0] = rhs`; repeated indices accumulate.
    pub fn push(&mut self, coeffs: &[(usize, u32)], rhs: u32) {
        let p = self.p;
        if p == 2 {
            let mut bits = vec![0u64; self.ncols.div_ceil(64)];
            for &(i, c) in coeffs {
                if c % 2 == 1 {
                    bits[i / 64] ^= 1 << (i % 64);
                }
            }
            self.rows.push(Row::Bits(bits, rhs % 2 == 1));
        } else {
            let mut v = vec![0u32; self.ncols];
            for &(i, c) in coeffs {
                v[i] = (v[i] + c % p) % p;
            }
            self.rows.push(Row::Dense(v, rhs % p));
        }
    }

    /// One solution (free variables set to zero), or `None` if inconsistent.
    pub fn solve(&self) -> Option<Vec<u32>> {
        if self.p == 2 {
            self.solve_bits()
        } else {
            self.solve_dense()
        }
    }

    fn solve_bits(&self) -> Option<Vec<u32>> {
        let mut rows: Vec<(Vec<u64>, bool)> = self
            .rows
            .iter()
            .map(|r| match r {
                Row::Bits(b, c) => (b.clone(), *c),
                Row::Dense(..) => unreachable!(),
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.ncols {
            let (w, bit) = (col / 64, 1u64 << (col % 64));
            let Some(k) = (r..rows.len()).find(|&k| rows[k].0[w] & bit != 0) else {
                continue;
            };
            rows.swap(r, k);
            let pivot = rows[r].clone();
            for (k, row) in rows.iter_mut().enumerate() {
                if k != r && row.0[w] & bit != 0 {
                    for (a, b) in row.0[w..].iter_mut().zip(&pivot.0[w..]) {
                        *a ^= b;
                    }
                    row.1 ^= pivot.1;
                }
            }
            pivots.push(col);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        if rows[r..].iter().any(|row| row.1) {
            return None;
        }
        let mut x = vec![0u32; self.ncols];
        for (i, &col) in pivots.iter().enumerate() {
            x[col] = rows[i].1 as u32;
        }
        Some(x)
    }

    fn solve_dense(&self) -> Option<Vec<u32>> {
        let p = self.p as u64;
        let mut rows: Vec<(Vec<u32>, u32)> = self
            .rows
            .iter()
            .map(|r| match r {
                Row::Dense(v, c) => (v.clone(), *c),
                Row::Bits(..) => unreachable!(),
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.ncols {
            let Some(k) = (r..rows.len()).find(|&k| rows[k].0[col] != 0) else {
                continue;
            };
            rows.swap(r, k);
            let inv = inv_mod(rows[r].0[col] as u64, p);
            for v in rows[r].0[col..].iter_mut() {
                *v = ((*v as u64 * inv) % p) as u32;
            }
            rows[r].1 = ((rows[r].1 as u64 * inv) % p) as u32;
            let pivot = rows[r].clone();
            for (k, row) in rows.iter_mut().enumerate() {
                if k == r || row.0[col] == 0 {
                    continue;
                }
                let f = p - row.0[col] as u64;
                for (a, &b) in row.0[col..].iter_mut().zip(&pivot.0[col..]) {
                    *a = ((*a as u64 + f * b as u64) % p) as u32;
                }
                row.1 = ((row.1 as u64 + f * pivot.1 as u64) % p) as u32;
            }
            pivots.push(col);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        if rows[r..].iter().any(|row| row.1 != 0) {
            return None;
        }
        let mut x = vec![0u32; self.ncols];
        for (i, &col) in pivots.iter().enumerate() {
            x[col] = rows[i].1;
        }
        Some(x)
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Solves a dense system given as full rows.
pub fn solve_mod_p(p: u32, rows: &[Vec<u32>], rhs: &[u32]) -> Option<Vec<u32>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut sys = System::new(p, ncols);
    for (row, &b) in rows.iter().zip(rhs) {
        let coeffs: Vec<(usize, u32)> = row.iter().copied().enumerate().filter(|&(_, c)| c != 0).collect();
        sys.push(&coeffs, b);
    }
    sys.solve()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check(p: u32, rows: &[Vec<u32>], rhs: &[u32], x: &[u32]) {
        for (row, &b) in rows.iter().zip(rhs) {
            let s: u64 = row.iter().zip(x).map(|(&a, &v)| a as u64 * v as u64).sum();
            assert_eq!((s % p as u64) as u32, b);
        }
    }

    #[test]
    fn random_consistent_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [2u32, 3, 5] {
            for _ in 0..50 {
                let n = rng.gen_range(1..90);
                let m = rng.gen_range(1..90);
                let rows: Vec<Vec<u32>> = (0..m).map(|_| (0..n).map(|_| rng.gen_range(0..p)).collect()).collect();
                let x0: Vec<u32> = (0..n).map(|_| rng.gen_range(0..p)).collect();
                let rhs: Vec<u32> = rows
                    .iter()
                    .map(|r| (r.iter().zip(&x0).map(|(&a, &v)| a as u64 * v as u64).sum::<u64>() % p as u64) as u32)
                    .collect();
                let x = solve_mod_p(p, &rows, &rhs).expect("consistent");
                check(p, &rows, &rhs, &x);
            }
        }
    }

    #[test]
    fn inconsistent_system() {
        assert_eq!(solve_mod_p(3, &[vec![1, 1], vec![2, 2]], &[1, 1]), None);
        assert_eq!(solve_mod_p(2, &[vec![1, 1], vec![1, 1]], &[0, 1]), None);
    }
}
