//! The involution theta_x(g) = x^{-1} conj-transpose(g)^{-1} x on GL_m(E),
//! its action on tori and root systems, and the structure it induces on
//! standard parabolic subgroups.
//!
//! Conventions: w_l is the antidiagonal J_m; the standard involution is
//! theta = theta_{w_l}, whose fixed points form the quasi-split unitary
//! group. gamma_m conjugates the diagonal torus A_T to the torus A_0 on
//! which theta acts by inversion; in A_0 coordinates every root is sent to
//! its negative, so every base of the root system is a theta-base there.

use crate::error::{Error, Result};
use crate::linalg::{self, QVec};
use crate::mat::{antidiag_ones, diag_f, sample_diag_e, sample_unitary, EMatrix, HermitianMatrix};
use crate::quad::{rat_int, FieldConfig, QuadExt};
use crate::root::{CharVec, PartitionShape, RootDatum};
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, RngExt};

/// The matrix gamma_r: top rows have 1 at (i, i) and (i, r-1-i); an odd
/// middle row is the coordinate vector; bottom rows have 1 at (i, r-1-i)
/// and -1 at (i, i). It is symmetric with rational entries and conjugates
/// the block structure used throughout.
pub fn gamma_matrix(r: usize) -> EMatrix {
    let mut g = EMatrix::zero(r);
    for i in 0..r / 2 {
        g[(i, i)] = QuadExt::from_int(1);
        g[(i, r - 1 - i)] = QuadExt::from_int(1);
    }
    if r % 2 == 1 {
        g[(r / 2, r / 2)] = QuadExt::from_int(1);
    }
    for i in r.div_ceil(2)..r {
        g[(i, r - 1 - i)] = QuadExt::from_int(1);
        g[(i, i)] = QuadExt::from_int(-1);
    }
    g
}

/// diag(2, ..., 2, [1 if r odd], -2, ..., -2) with floor(r/2) twos:
/// the value of conj-transpose(gamma_r) J_r gamma_r.
pub fn gamma_product_expected(r: usize) -> EMatrix {
    EMatrix::from_fn(r, |i, j| {
        if i != j {
            QuadExt::zero()
        } else if 2 * i + 1 == r {
            QuadExt::from_int(1)
        } else if i < r / 2 {
            QuadExt::from_int(2)
        } else {
            QuadExt::from_int(-2)
        }
    })
}

/// theta_x(g) = x^{-1} conj-transpose(g)^{-1} x for a Hermitian x.
#[derive(Clone, Debug)]
pub struct ThetaInvolution {
    x: HermitianMatrix,
}

impl ThetaInvolution {
    pub fn new(x: HermitianMatrix) -> Self {
        ThetaInvolution { x }
    }

    /// The standard involution theta_{w_l}, w_l = J_m.
    pub fn standard(cfg: &FieldConfig, m: usize) -> Self {
        let x = HermitianMatrix::new(antidiag_ones(m), cfg)
            .expect("J_m is Hermitian and invertible");
        ThetaInvolution { x }
    }

    pub fn form(&self) -> &HermitianMatrix {
        &self.x
    }

    pub fn apply(&self, g: &EMatrix, cfg: &FieldConfig) -> Result<EMatrix> {
        let xinv = self.x.matrix().inverse(cfg).expect("form is invertible");
        let ginv_ct = g.inverse(cfg)?.conj_transpose();
        Ok(xinv.mul(&ginv_ct, cfg).mul(self.x.matrix(), cfg))
    }

    pub fn is_fixed(&self, g: &EMatrix, cfg: &FieldConfig) -> Result<bool> {
        Ok(self.apply(g, cfg)? == *g)
    }
}

/// Fixed points of theta_x are exactly { h : conj-transpose(h) x h = x }.
pub fn fixed_points_membership(
    theta: &ThetaInvolution,
    g: &EMatrix,
    cfg: &FieldConfig,
) -> Result<bool> {
    let gram = g
        .conj_transpose()
        .mul(theta.form().matrix(), cfg)
        .mul(g, cfg);
    let fixed = theta.is_fixed(g, cfg)?;
    debug_assert_eq!(fixed, gram == *theta.form().matrix());
    Ok(fixed)
}

/// theta on X*(A_T): e_i -> -e_{m+1-i} (0-based: out[j] = -v[m-1-j]).
pub fn theta_on_at_char(v: &CharVec) -> CharVec {
    let m = v.len();
    (0..m).map(|j| -v[m - 1 - j]).collect()
}

/// theta on X*(A_0) sends every root to its negative.
pub fn theta_on_a0_root(v: &CharVec) -> CharVec {
    v.iter().map(|x| -x).collect()
}

/// Signed permutation action on the character lattice:
/// e_i -> sign * e_{perm[i]}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterAction {
    pub perm: Vec<usize>,
    pub sign: i8,
}

impl CharacterAction {
    pub fn act(&self, v: &CharVec) -> CharVec {
        let mut out = vec![0; v.len()];
        for (i, &x) in v.iter().enumerate() {
            out[self.perm[i]] = self.sign as i64 * x;
        }
        out
    }

    pub fn is_involution(&self) -> bool {
        let m = self.perm.len();
        (0..m).all(|i| self.perm[self.perm[i]] == i)
    }
}

/// The A_T-coordinate action of theta: reversal with a sign.
pub fn reversal_action(m: usize) -> CharacterAction {
    CharacterAction {
        perm: (0..m).rev().collect(),
        sign: -1,
    }
}

/// The A_0-coordinate action of theta: pure negation.
pub fn negation_action(m: usize) -> CharacterAction {
    CharacterAction {
        perm: (0..m).collect(),
        sign: -1,
    }
}

fn to_qvec(v: &CharVec) -> QVec {
    v.iter().map(|&x| rat_int(x)).collect()
}

/// Sign of a root in the positive system determined by `base`:
/// +1 if all base coordinates are >= 0, -1 if all <= 0.
/// Err if `base` does not span or some root has mixed signs.
fn root_sign(base_cols: &[QVec], root: &CharVec) -> Result<i8> {
    let coeffs = linalg::solve_columns(base_cols, &to_qvec(root))
        .ok_or_else(|| Error::NotABase("given set does not span the root lattice".into()))?;
    use num_traits::Signed;
    let pos = coeffs.iter().all(|c| !c.is_negative());
    let neg = coeffs.iter().all(|c| !c.is_positive());
    match (pos, neg) {
        (true, false) => Ok(1),
        (false, true) => Ok(-1),
        _ => Err(Error::NotABase(
            "a root has mixed-sign coordinates in the given set".into(),
        )),
    }
}

/// Theta-base test: with positivity determined by `base`, every positive
/// root alpha with act(alpha) != alpha must satisfy act(alpha) negative.
pub fn is_theta_base(m: usize, base: &[CharVec], act: &CharacterAction) -> Result<bool> {
    if base.len() != m - 1 {
        return Err(Error::NotABase(format!(
            "expected {} elements, got {}",
            m - 1,
            base.len()
        )));
    }
    let datum = RootDatum::new(m);
    let base_cols: Vec<QVec> = base.iter().map(to_qvec).collect();
    for alpha in datum.roots() {
        // also validates that `base` is a genuine base
        let s = root_sign(&base_cols, &alpha)?;
        if s != 1 {
            continue;
        }
        let img = act.act(&alpha);
        if img != alpha && root_sign(&base_cols, &img)? != -1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Restriction data for the torus pairing: p(v) = (v - act(v)) / 2, which
/// kills exactly the act-fixed subspace.
#[derive(Clone, Debug)]
pub struct RestrictedRootData {
    /// Distinct nonzero restricted roots with multiplicities.
    pub roots: Vec<(QVec, usize)>,
    /// Images of the base elements, zeros dropped.
    pub base_image: Vec<QVec>,
    pub base_image_independent: bool,
    /// Dimension of the act-fixed subspace of X ox Q (the kernel of p).
    pub fixed_space_dim: usize,
}

pub fn restricted_roots(
    m: usize,
    base: &[CharVec],
    act: &CharacterAction,
) -> Result<RestrictedRootData> {
    if !is_theta_base(m, base, act)? {
        return Err(Error::NotThetaBase(format!("{base:?}")));
    }
    let half = BigRational::new(1.into(), 2.into());
    let p = |v: &CharVec| -> QVec {
        let img = act.act(v);
        (0..m)
            .map(|i| (rat_int(v[i]) - rat_int(img[i])) * &half)
            .collect()
    };
    let datum = RootDatum::new(m);
    let mut roots: Vec<(QVec, usize)> = Vec::new();
    for alpha in datum.roots() {
        let r = p(&alpha);
        if linalg::is_zero_vec(&r) {
            continue;
        }
        match roots.iter_mut().find(|(v, _)| *v == r) {
            Some((_, mult)) => *mult += 1,
            None => roots.push((r, 1)),
        }
    }
    let base_image: Vec<QVec> = base
        .iter()
        .map(|b| p(b))
        .filter(|v| !linalg::is_zero_vec(v))
        .collect();
    let base_image_independent = linalg::rank(&base_image) == base_image.len();
    // kernel of p = fixed subspace; p maps e_i to (e_i - act(e_i))/2
    let p_cols: Vec<QVec> = (0..m)
        .map(|i| {
            let mut e = vec![0i64; m];
            e[i] = 1;
            p(&e)
        })
        .collect();
    let fixed_space_dim = m - linalg::rank(&p_cols);
    Ok(RestrictedRootData {
        roots,
        base_image,
        base_image_independent,
        fixed_space_dim,
    })
}

/// How a standard parabolic of shape `parts` sits relative to theta.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ParabolicClass {
    /// theta(P) = P: holds iff the shape is balanced.
    pub theta_stable: bool,
    /// The Levi is theta-elliptic iff the shape is (m/2, m/2).
    pub theta_elliptic_levi: bool,
    /// Standard parabolics here always admit a theta-split conjugate.
    pub theta_split_conjugate: bool,
}

pub fn classify_parabolic(shape: &PartitionShape) -> ParabolicClass {
    let balanced = shape.is_balanced();
    ParabolicClass {
        theta_stable: balanced,
        theta_elliptic_levi: shape.parts.len() == 2 && shape.parts[0] == shape.parts[1],
        theta_split_conjugate: true,
    }
}

/// Independent route for theta-stability: the unipotent radical's support
/// pattern must satisfy supp(N) = w_l supp(N^op) w_l^{-1}, i.e.
/// supp(i, j) == supp(m-1-j, m-1-i).
pub fn support_pattern_stable(shape: &PartitionShape) -> bool {
    let m = shape.m();
    let block = shape.block_of();
    let supp = |i: usize, j: usize| block[i] < block[j];
    (0..m).all(|i| (0..m).all(|j| supp(i, j) == supp(m - 1 - j, m - 1 - i)))
}

/// x_L = gamma^{-1} g^{-1} theta(g) gamma for g in (H A_0-torus)(F); it must
/// land in the (n, n) Levi as a pair of Hermitian blocks.
pub fn levi_fixed_form(
    cfg: &FieldConfig,
    g: &EMatrix,
) -> Result<(HermitianMatrix, HermitianMatrix)> {
    let m = g.n();
    if m % 2 != 0 {
        return Err(Error::Dim(format!("need even size, got {m}")));
    }
    let n = m / 2;
    let theta = ThetaInvolution::standard(cfg, m);
    let gamma = gamma_matrix(m);
    let gamma_inv = gamma.inverse(cfg).expect("gamma is invertible");
    let x_l = gamma_inv
        .mul(&g.inverse(cfg)?, cfg)
        .mul(&theta.apply(g, cfg)?, cfg)
        .mul(&gamma, cfg);
    if !x_l.is_block_diagonal(&[n, n]) {
        return Err(Error::InvalidLeviDatum(
            "g^{-1} theta(g) does not normalize the split Levi".into(),
        ));
    }
    let x1 = HermitianMatrix::new(x_l.sub_block(0, n), cfg)
        .map_err(|_| Error::InvalidLeviDatum("first block is not Hermitian".into()))?;
    let x2 = HermitianMatrix::new(x_l.sub_block(n, n), cfg)
        .map_err(|_| Error::InvalidLeviDatum("second block is not Hermitian".into()))?;
    Ok((x1, x2))
}

/// The involution l -> (g gamma)^{-1} theta((g gamma) l (g gamma)^{-1}) (g gamma)
/// transported to the Levi.
pub fn transported_involution(
    cfg: &FieldConfig,
    g: &EMatrix,
    l: &EMatrix,
) -> Result<EMatrix> {
    let theta = ThetaInvolution::standard(cfg, g.n());
    let c = g.mul(&gamma_matrix(g.n()), cfg);
    let cinv = c.inverse(cfg)?;
    Ok(cinv.mul(&theta.apply(&c.mul(l, cfg).mul(&cinv, cfg), cfg)?, cfg).mul(&c, cfg))
}

/// Random element of H * (gamma-conjugated diagonal torus), the sources of
/// standard-position Levi form data.
pub fn sample_h_t0(cfg: &FieldConfig, m: usize, rng: &mut impl Rng) -> EMatrix {
    let theta = ThetaInvolution::standard(cfg, m);
    let h = sample_unitary(cfg, theta.form(), rng).expect("w_l form is invertible");
    let gamma = gamma_matrix(m);
    let gamma_inv = gamma.inverse(cfg).expect("gamma is invertible");
    let t = gamma.mul(&sample_diag_e(cfg, m, rng), cfg).mul(&gamma_inv, cfg);
    h.mul(&t, cfg)
}

/// Random F-point of A_0 = gamma A_T gamma^{-1}; these are theta-split.
pub fn sample_a0(cfg: &FieldConfig, m: usize, rng: &mut impl Rng) -> EMatrix {
    let entries: Vec<BigRational> = (0..m)
        .map(|_| loop {
            let v = rat_int(rng.random_range(-4i64..=4));
            if !v.is_zero() {
                break v;
            }
        })
        .collect();
    let gamma = gamma_matrix(m);
    let gamma_inv = gamma.inverse(cfg).expect("gamma is invertible");
    gamma.mul(&diag_f(&entries), cfg).mul(&gamma_inv, cfg)
}
