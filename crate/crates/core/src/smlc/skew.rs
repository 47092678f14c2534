//! Skew-symmetric matrices supported on an oriented graph, with exact
//! (Bareiss determinant, rational Pfaffian) and floating-point evaluation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::kasteleyn::Orientation;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Exact,
    Float,
}

impl Backend {
    /// Exact arithmetic up to 512 qubits, floating point beyond.
    pub fn default_for(n_qubits: usize) -> Backend {
        if n_qubits <= 512 {
            Backend::Exact
        } else {
            Backend::Float
        }
    }
}

/// `A[u][v] = w` and `A[v][u] = -w` for each oriented edge `u -> v`.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewSystem {
    pub dim: usize,
    /// Oriented entries `(u, v, w)`; parallel entries add up.
    pub entries: Vec<(usize, usize, BigRational)>,
    pub backend: Backend,
}

/// A real number as sign and natural log of its magnitude; `sign == 0`
/// means zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogValue {
    pub sign: i8,
    pub ln_abs: f64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        sign: 0,
        ln_abs: f64::NEG_INFINITY,
    };

    pub fn to_f64(self) -> f64 {
        self.sign as f64 * self.ln_abs.exp()
    }
}

impl SkewSystem {
    /// Builds `A` from graph edges, an orientation and per-edge weights.
    pub fn from_graph(
        dim: usize,
        ends: impl IntoIterator<Item = (usize, usize)>,
        orientation: &Orientation,
        weights: &[BigRational],
        backend: Backend,
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(weights.len());
        for (i, (u, v)) in ends.into_iter().enumerate() {
            let w = weights
                .get(i)
                .ok_or(Error::LengthMismatch {
                    expected: i + 1,
                    got: weights.len(),
                })?
                .clone();
            let forward = *orientation.forward.get(i).ok_or(Error::LengthMismatch {
                expected: i + 1,
                got: orientation.forward.len(),
            })?;
            if forward {
                entries.push((u, v, w));
            } else {
                entries.push((v, u, w));
            }
        }
        let sk = SkewSystem { dim, entries, backend };
        sk.check()?;
        Ok(sk)
    }

    fn check(&self) -> Result<()> {
        for &(u, v, _) in &self.entries {
            if u >= self.dim || v >= self.dim || u == v {
                return Err(Error::InvalidArgument(format!("entry ({u}, {v}) outside a {0}x{0} skew matrix", self.dim)));
            }
        }
        Ok(())
    }

    fn even_dim(&self) -> Result<()> {
        if self.dim % 2 == 1 {
            return Err(Error::OddDimension(self.dim));
        }
        Ok(())
    }

    pub fn dense_exact(&self) -> Vec<Vec<BigRational>> {
        let mut a = vec![vec![BigRational::zero(); self.dim]; self.dim];
        for (u, v, w) in &self.entries {
            a[*u][*v] += w;
            a[*v][*u] -= w;
        }
        a
    }

    pub fn dense_f64(&self) -> Vec<Vec<f64>> {
        let mut a = vec![vec![0.0; self.dim]; self.dim];
        for (u, v, w) in &self.entries {
            let x = ratio_f64(w);
            a[*u][*v] += x;
            a[*v][*u] -= x;
        }
        a
    }

    /// Least common denominator of the entries.
    fn common_denominator(&self) -> BigInt {
        self.entries.iter().fold(BigInt::one(), |acc, (_, _, w)| acc.lcm(w.denom()))
    }
}

fn ratio_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact determinant. Entries are cleared to integers by one common scale
/// `q`, eliminated fraction-free, and the result divided by `q^dim`.
pub fn det_exact(sk: &SkewSystem) -> Result<BigRational> {
    sk.even_dim()?;
    let q = sk.common_denominator();
    let mut m = vec![vec![BigInt::zero(); sk.dim]; sk.dim];
    for (u, v, w) in &sk.entries {
        let x = w.numer() * (&q / w.denom());
        m[*u][*v] += &x;
        m[*v][*u] -= &x;
    }
    let d = bareiss(m);
    Ok(BigRational::new(d, num_traits::pow(q, sk.dim)))
}

/// Fraction-free Gaussian elimination with row pivoting.
pub fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, r);
            negate = !negate;
        }
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            let lead = std::mem::take(&mut row[k]);
            for j in k + 1..n {
                let x = &row[j] * &pivot_row[k] - &lead * &pivot_row[j];
                row[j] = if prev.is_one() { x } else { x / &prev };
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Exact Pfaffian with its sign, by skew-symmetric elimination: pivot on
/// `A[k][k+1]` (swapping row and column `k+1` with the first nonzero
/// column), multiply it in, and replace the trailing block by its Schur
/// complement.
pub fn pfaffian_signed(sk: &SkewSystem) -> Result<BigRational> {
    sk.even_dim()?;
    let mut a = sk.dense_exact();
    let n = sk.dim;
    let mut pf = BigRational::one();
    for k in (0..n).step_by(2) {
        let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) else {
            return Ok(BigRational::zero());
        };
        if j != k + 1 {
            swap_index(&mut a, k + 1, j);
            pf = -pf;
        }
        let piv = a[k][k + 1].clone();
        pf *= &piv;
        let (rk, rk1) = (a[k].clone(), a[k + 1].clone());
        for i in k + 2..n {
            if rk[i].is_zero() && rk1[i].is_zero() {
                continue;
            }
            for jj in i + 1..n {
                if rk[jj].is_zero() && rk1[jj].is_zero() {
                    continue;
                }
                let delta = (&rk1[i] * &rk[jj] - &rk[i] * &rk1[jj]) / &piv;
                a[i][jj] += &delta;
                a[jj][i] -= &delta;
            }
        }
    }
    Ok(pf)
}

fn swap_index<T>(a: &mut [Vec<T>], x: usize, y: usize) {
    a.swap(x, y);
    for row in a.iter_mut() {
        row.swap(x, y);
    }
}

/// Floating-point Pfaffian with partial pivoting, as sign and log.
pub fn pfaffian_log(sk: &SkewSystem) -> Result<LogValue> {
    sk.even_dim()?;
    let mut a = sk.dense_f64();
    let n = sk.dim;
    let mut sign = 1i8;
    let mut ln = 0.0;
    for k in (0..n).step_by(2) {
        let (j, best) = (k + 1..n)
            .map(|j| (j, a[k][j].abs()))
            .fold((k + 1, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= 0.0 {
            return Ok(LogValue::ZERO);
        }
        if j != k + 1 {
            swap_index(&mut a, k + 1, j);
            sign = -sign;
        }
        let piv = a[k][k + 1];
        if piv < 0.0 {
            sign = -sign;
        }
        ln += piv.abs().ln();
        let (rk, rk1) = (a[k].clone(), a[k + 1].clone());
        for i in k + 2..n {
            for jj in i + 1..n {
                let delta = (rk1[i] * rk[jj] - rk[i] * rk1[jj]) / piv;
                a[i][jj] += delta;
                a[jj][i] -= delta;
            }
        }
    }
    Ok(LogValue { sign, ln_abs: ln })
}

/// Floating-point determinant by LU with partial pivoting.
pub fn det_log(sk: &SkewSystem) -> Result<LogValue> {
    sk.even_dim()?;
    let mut a = sk.dense_f64();
    let n = sk.dim;
    let mut sign = 1i8;
    let mut ln = 0.0;
    for k in 0..n {
        let (r, best) = (k..n)
            .map(|r| (r, a[r][k].abs()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= 0.0 {
            return Ok(LogValue::ZERO);
        }
        if r != k {
            a.swap(r, k);
            sign = -sign;
        }
        let piv = a[k][k];
        if piv < 0.0 {
            sign = -sign;
        }
        ln += piv.abs().ln();
        let (top, rest) = a.split_at_mut(k + 1);
        let prow = &top[k];
        for row in rest.iter_mut() {
            let f = row[k] / piv;
            if f != 0.0 {
                for j in k + 1..n {
                    row[j] -= f * prow[j];
                }
            }
        }
    }
    Ok(LogValue { sign, ln_abs: ln })
}

/// Exact square root of a non-negative rational that is a perfect square.
pub fn exact_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer().sqrt(), q.denom().sqrt());
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}
