use std::fmt;

use serde::{Serialize, Serializer};

use super::matrix::QMatrix;
use super::scalar::Scalar;

/// Univariate polynomial with rational coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| Scalar::from_int(x)).collect())
    }

    pub fn constant(c: Scalar) -> Poly {
        Poly::new(vec![c])
    }

    pub fn x() -> Poly {
        Poly::from_ints(&[0, 1])
    }

    /// `x - r`.
    pub fn linear(r: &Scalar) -> Poly {
        Poly::new(vec![-r, Scalar::one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has degree 0 here, callers check `is_zero`.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead();
        Poly::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::new(vec![]);
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn pow(&self, e: usize) -> Poly {
        (0..e).fold(Poly::constant(Scalar::one()), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Scalar::from_int(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(Scalar::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64())
    }

    /// Evaluates at a square matrix by Horner's rule.
    pub fn eval_matrix(&self, m: &QMatrix) -> QMatrix {
        let n = m.rows();
        let mut acc = QMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m).add(&QMatrix::identity(n).scale(c));
        }
        acc
    }

    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        let dl = d.lead();
        if self.is_zero() || self.degree() < dd {
            return (Poly::new(vec![]), self.clone());
        }
        let mut q = vec![Scalar::zero(); self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &dl;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's square-free decomposition: monic factors paired with their multiplicity.
    pub fn square_free(&self) -> Vec<(Poly, usize)> {
        let f = self.monic();
        if f.degree() == 0 {
            return vec![];
        }
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.divrem(&a0).0;
        let mut c = fp.divrem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        let mut i = 1;
        while b.degree() > 0 {
            let a = b.gcd(&d);
            b = b.divrem(&a).0;
            c = d.divrem(&a).0;
            d = c.sub(&b.derivative());
            if a.degree() > 0 {
                out.push((a, i));
            }
            i += 1;
        }
        out
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64()).collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let coef = if a.is_one() && i > 0 { String::new() } else { a.to_string() };
            match i {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{coef}x")?,
                _ => write!(f, "{coef}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

/// Characteristic polynomial `det(xI - M)` by Faddeev-LeVerrier.
pub fn char_poly(m: &QMatrix) -> Poly {
    assert!(m.is_square(), "characteristic polynomial of a non-square matrix");
    let n = m.rows();
    let mut c = vec![Scalar::zero(); n + 1];
    c[n] = Scalar::one();
    let mut mk = QMatrix::zeros(n, n);
    for k in 1..=n {
        mk = m.mul(&mk).add(&QMatrix::identity(n).scale(&c[n + 1 - k]));
        let t = m.mul(&mk).trace();
        c[n - k] = -(t / Scalar::from_int(k as i64));
    }
    Poly::new(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_poly_of_rotation_block() {
        let m = QMatrix::from_ints(&[&[0, 0, 0, 0], &[0, 0, 1, 0], &[0, -1, 0, 0], &[0, 0, 0, 0]]);
        assert_eq!(char_poly(&m), Poly::from_ints(&[0, 0, 1, 0, 1]));
    }

    #[test]
    fn yun_multiplicities() {
        // (x-1)^2 (x+2)^3 (x^2+1)
        let p = Poly::from_ints(&[-1, 1])
            .pow(2)
            .mul(&Poly::from_ints(&[2, 1]).pow(3))
            .mul(&Poly::from_ints(&[1, 0, 1]));
        let sf = p.square_free();
        assert_eq!(
            sf,
            vec![
                (Poly::from_ints(&[1, 0, 1]), 1),
                (Poly::from_ints(&[-1, 1]), 2),
                (Poly::from_ints(&[2, 1]), 3)
            ]
        );
    }

    #[test]
    fn divrem_identity() {
        let a = Poly::from_ints(&[3, 0, -2, 5, 1]);
        let b = Poly::new(vec![Scalar::new(1, 2), Scalar::from_int(3)]);
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.is_zero() || r.degree() < b.degree());
    }

    #[test]
    fn display() {
        assert_eq!(Poly::from_ints(&[1, -1, 0, 2]).to_string(), "2x^3 - x + 1");
    }
}
