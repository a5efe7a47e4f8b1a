//! Second-order forward-mode jets: value, gradient and Hessian with respect
//! to up to [`MAX_DIM`] parameters.

use std::ops::{Add, Mul, Neg, Sub};

pub const MAX_DIM: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub dim: usize,
    pub v: f64,
    pub g: [f64; MAX_DIM],
    pub h: [[f64; MAX_DIM]; MAX_DIM],
}

impl Jet {
    pub fn constant(dim: usize, v: f64) -> Self {
        debug_assert!(dim <= MAX_DIM);
        Self { dim, v, g: [0.0; MAX_DIM], h: [[0.0; MAX_DIM]; MAX_DIM] }
    }

    /// An affine function v + Σ gᵢ sᵢ.
    pub fn affine(dim: usize, v: f64, g: &[f64]) -> Self {
        let mut j = Self::constant(dim, v);
        j.g[..dim].copy_from_slice(&g[..dim]);
        j
    }

    /// Apply a scalar function given f, f′, f″ at the current value.
    pub fn chain(&self, f0: f64, f1: f64, f2: f64) -> Self {
        let d = self.dim;
        let mut out = Self::constant(d, f0);
        for i in 0..d {
            out.g[i] = f1 * self.g[i];
            for j in 0..d {
                out.h[i][j] = f1 * self.h[i][j] + f2 * self.g[i] * self.g[j];
            }
        }
        out
    }

    pub fn recip_sqrt(&self) -> Self {
        let s = self.v.sqrt();
        let f0 = 1.0 / s;
        let f1 = -0.5 * f0 / self.v;
        let f2 = 0.75 * f0 / (self.v * self.v);
        self.chain(f0, f1, f2)
    }

    pub fn scale(&self, c: f64) -> Self {
        let d = self.dim;
        let mut out = *self;
        out.v *= c;
        for i in 0..d {
            out.g[i] *= c;
            for j in 0..d {
                out.h[i][j] *= c;
            }
        }
        out
    }

    /// self += c·other
    pub fn add_scaled(&mut self, c: f64, other: &Jet) {
        let d = self.dim;
        self.v += c * other.v;
        for i in 0..d {
            self.g[i] += c * other.g[i];
            for j in 0..d {
                self.h[i][j] += c * other.h[i][j];
            }
        }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Jet) -> Jet {
        self.add_scaled(1.0, &rhs);
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: Jet) -> Jet {
        self.add_scaled(-1.0, &rhs);
        self
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let d = self.dim;
        let mut out = Jet::constant(d, self.v * rhs.v);
        for i in 0..d {
            out.g[i] = self.v * rhs.g[i] + rhs.v * self.g[i];
            for j in 0..d {
                out.h[i][j] = self.v * rhs.h[i][j] + rhs.v * self.h[i][j] + self.g[i] * rhs.g[j] + self.g[j] * rhs.g[i];
            }
        }
        out
    }
}
