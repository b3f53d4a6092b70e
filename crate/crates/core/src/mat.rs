//! Square matrices over E = F(sqrt(d)), Hermitian forms, and the orbit
//! invariant of the symmetric space of Hermitian matrices under
//! x . g = conj-transpose(g) * x * g.
//!
//! Everything is exact; det and inverse go through Gaussian elimination
//! over the field E.

use crate::error::{Error, Result};
use crate::quad::{rat_int, FieldConfig, NormClass, QuadExt};
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, RngExt};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EMatrix {
    n: usize,
    // row-major
    e: Vec<QuadExt>,
}

impl EMatrix {
    pub fn zero(n: usize) -> Self {
        EMatrix {
            n,
            e: vec![QuadExt::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = EMatrix::zero(n);
        for i in 0..n {
            m[(i, i)] = QuadExt::one();
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> QuadExt) -> Self {
        let mut m = EMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Integer matrix, row-major.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let n = rows.len();
        EMatrix::from_fn(n, |i, j| QuadExt::from_int(rows[i][j]))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mul(&self, o: &EMatrix, cfg: &FieldConfig) -> EMatrix {
        assert_eq!(self.n, o.n, "matrix size mismatch");
        let mut out = EMatrix::zero(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..self.n {
                    let t = a.mul(&o[(k, j)], cfg);
                    out[(i, j)] = out[(i, j)].add(&t);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> EMatrix {
        EMatrix::from_fn(self.n, |i, j| self[(j, i)].clone())
    }

    /// Entrywise Galois conjugate.
    pub fn conj(&self) -> EMatrix {
        EMatrix::from_fn(self.n, |i, j| self[(i, j)].conj())
    }

    /// conj-transpose: transpose of the entrywise conjugate.
    pub fn conj_transpose(&self) -> EMatrix {
        EMatrix::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn det(&self, cfg: &FieldConfig) -> QuadExt {
        let mut w = self.clone();
        let mut det = QuadExt::one();
        for col in 0..self.n {
            let pivot = (col..self.n).find(|&r| !w[(r, col)].is_zero());
            let Some(pr) = pivot else {
                return QuadExt::zero();
            };
            if pr != col {
                w.swap_rows(pr, col);
                det = det.neg();
            }
            let pv = w[(col, col)].clone();
            det = det.mul(&pv, cfg);
            let pinv = pv.inv(cfg).expect("pivot is nonzero");
            for r in col + 1..self.n {
                if w[(r, col)].is_zero() {
                    continue;
                }
                let factor = w[(r, col)].mul(&pinv, cfg);
                for c in col..self.n {
                    let t = factor.mul(&w[(col, c)], cfg);
                    w[(r, c)] = w[(r, c)].sub(&t);
                }
            }
        }
        det
    }

    pub fn inverse(&self, cfg: &FieldConfig) -> Result<EMatrix> {
        let n = self.n;
        let mut w = self.clone();
        let mut inv = EMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !w[(r, col)].is_zero());
            let Some(pr) = pivot else {
                return Err(Error::Singular);
            };
            if pr != col {
                w.swap_rows(pr, col);
                inv.swap_rows(pr, col);
            }
            let pinv = w[(col, col)].inv(cfg).expect("pivot is nonzero");
            for c in 0..n {
                w[(col, c)] = w[(col, c)].mul(&pinv, cfg);
                inv[(col, c)] = inv[(col, c)].mul(&pinv, cfg);
            }
            for r in 0..n {
                if r == col || w[(r, col)].is_zero() {
                    continue;
                }
                let factor = w[(r, col)].clone();
                for c in 0..n {
                    let t = factor.mul(&w[(col, c)], cfg);
                    w[(r, c)] = w[(r, c)].sub(&t);
                    let t = factor.mul(&inv[(col, c)], cfg);
                    inv[(r, c)] = inv[(r, c)].sub(&t);
                }
            }
        }
        Ok(inv)
    }

    pub fn add(&self, o: &EMatrix) -> EMatrix {
        EMatrix::from_fn(self.n, |i, j| self[(i, j)].add(&o[(i, j)]))
    }

    pub fn sub(&self, o: &EMatrix) -> EMatrix {
        EMatrix::from_fn(self.n, |i, j| self[(i, j)].sub(&o[(i, j)]))
    }

    pub fn neg(&self) -> EMatrix {
        EMatrix::from_fn(self.n, |i, j| self[(i, j)].neg())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.n {
            self.e.swap(a * self.n + c, b * self.n + c);
        }
    }

    pub fn is_hermitian(&self) -> bool {
        self.conj_transpose() == *self
    }

    /// Block-diagonal test for the composition `shape` of n.
    pub fn is_block_diagonal(&self, shape: &[usize]) -> bool {
        assert_eq!(shape.iter().sum::<usize>(), self.n);
        let mut block_of = vec![0usize; self.n];
        let mut idx = 0;
        for (b, &len) in shape.iter().enumerate() {
            for _ in 0..len {
                block_of[idx] = b;
                idx += 1;
            }
        }
        (0..self.n).all(|i| {
            (0..self.n).all(|j| block_of[i] == block_of[j] || self[(i, j)].is_zero())
        })
    }

    /// Leading principal block of size `len` starting at `start`.
    pub fn sub_block(&self, start: usize, len: usize) -> EMatrix {
        EMatrix::from_fn(len, |i, j| self[(start + i, start + j)].clone())
    }

    /// diag(blocks) with the given square blocks.
    pub fn block_diag(blocks: &[EMatrix]) -> EMatrix {
        let n: usize = blocks.iter().map(|b| b.n).sum();
        let mut m = EMatrix::zero(n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    m[(off + i, off + j)] = b[(i, j)].clone();
                }
            }
            off += b.n;
        }
        m
    }
}

impl std::ops::Index<(usize, usize)> for EMatrix {
    type Output = QuadExt;
    fn index(&self, (i, j): (usize, usize)) -> &QuadExt {
        &self.e[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for EMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut QuadExt {
        &mut self.e[i * self.n + j]
    }
}

/// Invertible Hermitian matrix: conj-transpose(x) = x.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianMatrix(EMatrix);

impl HermitianMatrix {
    pub fn new(m: EMatrix, cfg: &FieldConfig) -> Result<Self> {
        if !m.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        if m.det(cfg).is_zero() {
            return Err(Error::Singular);
        }
        Ok(HermitianMatrix(m))
    }

    pub fn matrix(&self) -> &EMatrix {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    /// x . g = conj-transpose(g) * x * g. Stays Hermitian and invertible
    /// for invertible g.
    pub fn act(&self, g: &EMatrix, cfg: &FieldConfig) -> Result<HermitianMatrix> {
        let moved = g.conj_transpose().mul(&self.0, cfg).mul(g, cfg);
        HermitianMatrix::new(moved, cfg)
    }

    /// det(x) lands in F for Hermitian x.
    pub fn det_f(&self, cfg: &FieldConfig) -> BigRational {
        let d = self.0.det(cfg);
        assert!(
            d.is_rational(),
            "determinant of a Hermitian matrix lies in F"
        );
        d.a
    }

    /// Class of det(x) in F^x/N(E^x); a complete invariant of the G-orbit
    /// of x on the space of Hermitian forms of fixed rank.
    pub fn orbit_invariant(&self, cfg: &FieldConfig) -> NormClass {
        cfg.norm_class(&self.det_f(cfg))
            .expect("Hermitian matrices here are invertible")
    }
}

/// Antidiagonal matrix J_n (1 on the antidiagonal).
pub fn antidiag_ones(n: usize) -> EMatrix {
    EMatrix::from_fn(n, |i, j| {
        if i + j == n - 1 {
            QuadExt::one()
        } else {
            QuadExt::zero()
        }
    })
}

/// Diagonal Hermitian matrix from F-entries.
pub fn diag_f(entries: &[BigRational]) -> EMatrix {
    let n = entries.len();
    EMatrix::from_fn(n, |i, j| {
        if i == j {
            QuadExt::from_rat(entries[i].clone())
        } else {
            QuadExt::zero()
        }
    })
}

fn small_rat(rng: &mut impl Rng) -> BigRational {
    rat_int(rng.random_range(-3..=3))
}

pub fn sample_quad_ext(rng: &mut impl Rng) -> QuadExt {
    QuadExt::new(small_rat(rng), small_rat(rng))
}

/// Random invertible matrix over E with small entries.
pub fn sample_invertible(cfg: &FieldConfig, n: usize, rng: &mut impl Rng) -> EMatrix {
    loop {
        let m = EMatrix::from_fn(n, |_, _| sample_quad_ext(rng));
        if !m.det(cfg).is_zero() {
            return m;
        }
    }
}

/// Random nonzero diagonal over E.
pub fn sample_diag_e(cfg: &FieldConfig, n: usize, rng: &mut impl Rng) -> EMatrix {
    EMatrix::from_fn(n, |i, j| {
        if i != j {
            return QuadExt::zero();
        }
        loop {
            let x = sample_quad_ext(rng);
            if !x.norm(cfg).is_zero() {
                return x;
            }
        }
    })
}

/// Random element of the unitary group U_x = { u : conj-transpose(u) x u = x },
/// by the Cayley transform: for s with conj-transpose(s) x = -x s and 1+s
/// invertible, (1-s)(1+s)^{-1} is x-unitary. Such s arise as x^{-1} a with
/// a anti-Hermitian.
pub fn sample_unitary(
    cfg: &FieldConfig,
    x: &HermitianMatrix,
    rng: &mut impl Rng,
) -> Result<EMatrix> {
    let n = x.n();
    let xinv = x.matrix().inverse(cfg)?;
    loop {
        let b = EMatrix::from_fn(n, |_, _| sample_quad_ext(rng));
        let a = b.sub(&b.conj_transpose());
        let s = xinv.mul(&a, cfg);
        let one_plus = EMatrix::identity(n).add(&s);
        let Ok(inv) = one_plus.inverse(cfg) else {
            continue;
        };
        return Ok(EMatrix::identity(n).sub(&s).mul(&inv, cfg));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q5() -> FieldConfig {
        FieldConfig::unramified(5).unwrap()
    }

    #[test]
    fn det_and_inverse() {
        let f = q5();
        let m = EMatrix::from_ints(&[&[1, 2, 0], &[0, 1, 3], &[4, 0, 1]]);
        // det by cofactor expansion: 1*(1) - 2*(0 - 12) + 0 = 25
        assert_eq!(m.det(&f), QuadExt::from_int(25));
        let inv = m.inverse(&f).unwrap();
        assert_eq!(m.mul(&inv, &f), EMatrix::identity(3));
        assert_eq!(inv.mul(&m, &f), EMatrix::identity(3));
        let sing = EMatrix::from_ints(&[&[1, 2], &[2, 4]]);
        assert!(sing.inverse(&f).is_err());
        assert!(sing.det(&f).is_zero());
    }

    #[test]
    fn det_multiplicative() {
        let f = q5();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = sample_invertible(&f, 3, &mut rng);
            let b = sample_invertible(&f, 3, &mut rng);
            assert_eq!(a.mul(&b, &f).det(&f), a.det(&f).mul(&b.det(&f), &f));
        }
    }

    #[test]
    fn hermitian_validation_and_action() {
        let f = q5();
        let j = antidiag_ones(3);
        let x = HermitianMatrix::new(j, &f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let g = sample_invertible(&f, 3, &mut rng);
            let y = x.act(&g, &f).unwrap();
            assert!(y.matrix().is_hermitian());
            // class of det is preserved: det(x.g) = N(det g) det(x)
            assert_eq!(y.orbit_invariant(&f), x.orbit_invariant(&f));
        }
        let not_h = EMatrix::from_ints(&[&[0, 1], &[2, 0]]);
        assert!(matches!(
            HermitianMatrix::new(not_h, &f),
            Err(Error::NotHermitian)
        ));
    }

    #[test]
    fn unitary_samples_preserve_form() {
        let f = q5();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let x = HermitianMatrix::new(antidiag_ones(4), &f).unwrap();
        for _ in 0..10 {
            let u = sample_unitary(&f, &x, &mut rng).unwrap();
            let moved = x.act(&u, &f).unwrap();
            assert_eq!(moved.matrix(), x.matrix());
        }
    }

    #[test]
    fn block_diagonal_predicate() {
        let m = EMatrix::from_ints(&[&[1, 2, 0], &[3, 4, 0], &[0, 0, 5]]);
        assert!(m.is_block_diagonal(&[2, 1]));
        assert!(!m.is_block_diagonal(&[1, 2]));
        assert_eq!(m.sub_block(0, 2), EMatrix::from_ints(&[&[1, 2], &[3, 4]]));
    }
}
