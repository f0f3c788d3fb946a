//! Floating point residual of the generalized Kähler system for a skew `J_-` with `g = I`,
//! minimized by coordinate descent with shrinking steps from seeded random restarts.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::symbolic::{var_pair, NVARS};

/// Sparse structure constants `[e_i, e_j] = c e_k` with `i < j`.
#[derive(Clone, Debug)]
pub struct Residual {
    brackets: Vec<(usize, usize, usize, f64)>,
    /// The `i` with `[e_i, e_b] != 0`, per `b`.
    left: [Vec<usize>; 6],
    units: [[[f64; 6]; 6]; 6],
    j_plus: [[f64; 6]; 6],
    h_plus: [[[f64; 6]; 6]; 6],
    /// Positions of `[J_+, J_-]` required to vanish, zero based.
    pub alignment: Option<Vec<(usize, usize)>>,
}

type M6 = [[f64; 6]; 6];

/// Pair index of `(a, b)` with `a < b` in row-major order.
const fn pair(a: usize, b: usize) -> usize {
    a * (11 - a) / 2 + b - a - 1
}

/// `(a, b, c)` with `a < b < c` and the pair indices of `ab`, `ac`, `bc`.
const TRIPLES: [(usize, usize, usize, usize, usize, usize); 20] = {
    let mut out = [(0, 0, 0, 0, 0, 0); 20];
    let mut n = 0;
    let mut a = 0;
    while a < 6 {
        let mut b = a + 1;
        while b < 6 {
            let mut c = b + 1;
            while c < 6 {
                out[n] = (a, b, c, pair(a, b), pair(a, c), pair(b, c));
                n += 1;
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
};

fn from_vars(x: &[f64; NVARS]) -> M6 {
    let mut m = [[0.0; 6]; 6];
    for (v, &val) in x.iter().enumerate() {
        let (a, b) = var_pair(v);
        m[a][b] = val;
        m[b][a] = -val;
    }
    m
}

impl Residual {
    pub fn new(structure: &[f64], j_plus: &[Vec<f64>], h_plus: &[((usize, usize, usize), f64)]) -> Residual {
        let mut brackets = Vec::new();
        let mut left: [Vec<usize>; 6] = Default::default();
        let mut units = [[[0.0; 6]; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                for k in 0..6 {
                    let c = structure[(i * 6 + j) * 6 + k];
                    if c != 0.0 {
                        if i < j {
                            brackets.push((i, j, k, c));
                        }
                        if left[j].last() != Some(&i) {
                            left[j].push(i);
                        }
                        units[i][j][k] = c;
                    }
                }
            }
        }
        let mut jp = [[0.0; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                jp[i][j] = j_plus[i][j];
            }
        }
        let mut h = [[[0.0; 6]; 6]; 6];
        for &((a, b, c), v) in h_plus {
            for (p, q, r, s) in [(a, b, c, 1.0), (b, c, a, 1.0), (c, a, b, 1.0), (b, a, c, -1.0), (a, c, b, -1.0), (c, b, a, -1.0)] {
                h[p][q][r] = s * v;
            }
        }
        Residual { brackets, left, units, j_plus: jp, h_plus: h, alignment: None }
    }

    fn bracket(&self, x: &[f64; 6], y: &[f64; 6]) -> [f64; 6] {
        let mut out = [0.0; 6];
        for &(i, j, k, c) in &self.brackets {
            out[k] += c * (x[i] * y[j] - x[j] * y[i]);
        }
        out
    }

    pub fn eval(&self, x: &[f64; NVARS]) -> f64 {
        let m = from_vars(x);
        let mut cols = [[0.0; 6]; 6];
        for (a, col) in cols.iter_mut().enumerate() {
            for r in 0..6 {
                col[r] = m[r][a];
            }
        }
        // m2 = J J, symmetric since J is skew
        let mut m2 = [[0.0; 6]; 6];
        for (row, mr) in m2.iter_mut().zip(&m) {
            for (x, mk) in mr.iter().zip(&m) {
                for z in 0..6 {
                    row[z] += x * mk[z];
                }
            }
        }
        let mut total = 0.0;
        for (r, row) in m2.iter().enumerate() {
            for (z, &v) in row.iter().enumerate() {
                let e = if r == z { v + 1.0 } else { v };
                total += e * e;
            }
        }
        // J [e_i, e_b] for every nonzero bracket with e_b on the right
        let mut ju = [[[0.0; 6]; 6]; 6];
        for b in 0..6 {
            for &i in &self.left[b] {
                let out = &mut ju[i][b];
                for (u, col) in self.units[i][b].iter().zip(&cols) {
                    for r in 0..6 {
                        out[r] += u * col[r];
                    }
                }
            }
        }
        let mut jj = [[0.0; 6]; 15];
        let mut p = 0;
        for a in 0..6 {
            for b in a + 1..6 {
                jj[p] = self.bracket(&cols[a], &cols[b]);
                // J([J e_a, e_b] - [J e_b, e_a])
                let mut t = [0.0; 6];
                for &i in &self.left[b] {
                    let x = cols[a][i];
                    for r in 0..6 {
                        t[r] += x * ju[i][b][r];
                    }
                }
                for &i in &self.left[a] {
                    let x = cols[b][i];
                    for r in 0..6 {
                        t[r] -= x * ju[i][a][r];
                    }
                }
                let unit = &self.units[a][b];
                for r in 0..6 {
                    let n = jj[p][r] - t[r] - unit[r];
                    total += n * n;
                }
                p += 1;
            }
        }
        // H_-(a,b,c) = dω(J e_a, J e_b, J e_c) with ω(u, e_c) = -u . (J J e_c)
        let mut w = [[0.0; 6]; 15];
        for (row, v) in w.iter_mut().zip(&jj) {
            for (x, mk) in v.iter().zip(&m2) {
                for z in 0..6 {
                    row[z] += x * mk[z];
                }
            }
        }
        for &(a, b, c, ab, ac, bc) in TRIPLES.iter() {
            let hm = w[ab][c] + w[bc][a] - w[ac][b];
            let s = self.h_plus[a][b][c] + hm;
            total += s * s;
        }
        if let Some(zeros) = &self.alignment {
            for &(i, j) in zeros {
                let c: f64 = (0..6).map(|k| self.j_plus[i][k] * m[k][j] - m[i][k] * self.j_plus[k][j]).sum();
                total += c * c;
            }
        }
        total
    }

    /// Coordinate descent, step halving over `levels` levels. Once the step is below
    /// `1e-6` a level that improves the residual by a relative `1e-9` or less ends the run.
    /// Each level makes at most two sweeps over the coordinates.
    pub fn descend(&self, x0: [f64; NVARS], levels: usize) -> ([f64; NVARS], f64) {
        let mut x = x0;
        let mut best = self.eval(&x);
        let mut step = 0.5;
        for _ in 0..levels {
            if best < 1e-28 {
                break;
            }
            let level_start = best;
            let mut sweeps = 0;
            loop {
                let mut improved = false;
                for v in 0..NVARS {
                    for sign in [1.0, -1.0] {
                        let old = x[v];
                        x[v] = old + sign * step;
                        let r = self.eval(&x);
                        if r < best {
                            best = r;
                            improved = true;
                            break;
                        }
                        x[v] = old;
                    }
                }
                sweeps += 1;
                if !improved || sweeps >= 2 {
                    break;
                }
            }
            if step < 1e-6 && level_start - best <= 1e-9 * level_start {
                break;
            }
            step *= 0.5;
        }
        (x, best)
    }
}

/// `O J_+ O^T` for a random orthogonal `O`, as upper triangular coordinates.
pub fn random_start(j_plus: &[Vec<f64>], seed: u64, index: u64) -> [f64; NVARS] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let a = DMatrix::<f64>::from_fn(6, 6, |_, _| rng.gen_range(-1.0..1.0));
    let q = a.qr().q();
    let jp = DMatrix::<f64>::from_fn(6, 6, |i, j| j_plus[i][j]);
    let j = &q * jp * q.transpose();
    std::array::from_fn(|v| {
        let (r, c) = var_pair(v);
        j[(r, c)]
    })
}

pub fn to_vars(m: &[Vec<f64>]) -> [f64; NVARS] {
    std::array::from_fn(|v| {
        let (r, c) = var_pair(v);
        m[r][c]
    })
}

pub fn to_matrix(x: &[f64; NVARS]) -> Vec<Vec<f64>> {
    from_vars(x).iter().map(|r| r.to_vec()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub residual: f64,
    pub restart: usize,
    pub j_minus: Vec<Vec<f64>>,
}

/// Runs `budget` restarts; ties broken by restart index so the result is deterministic.
pub fn search(res: &Residual, j_plus: &[Vec<f64>], budget: usize, seed: u64, levels: usize) -> SearchOutcome {
    let mut best: Option<SearchOutcome> = None;
    for i in 0..budget {
        let x0 = random_start(j_plus, seed, i as u64);
        let (x, r) = res.descend(x0, levels);
        let better = match &best {
            None => true,
            Some(b) => r < b.residual,
        };
        if better {
            best = Some(SearchOutcome { residual: r, restart: i, j_minus: to_matrix(&x) });
        }
    }
    best.expect("budget is positive")
}

