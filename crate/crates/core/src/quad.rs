//! Exact arithmetic in F = Q carrying the p-adic valuation, and in the
//! quadratic extension E = F(sqrt(d)).
//!
//! Elements of F are `BigRational`; elements of E are pairs a + b*sqrt(d).
//! The Hilbert symbol (a,b)_p is computed through the unit/valuation
//! decomposition (odd p only) and can be cross-checked against
//! `hilbert_symbol_oracle`, a primitive-solution search modulo p^3 that
//! shares no code with the fast path.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Kind of the local extension E_p / Q_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtensionType {
    Unramified,
    Ramified,
}

/// Coset of F^x modulo the norm group N(E^x). Exactly two classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum NormClass {
    Norm,
    NonNorm,
}

/// The base field F = Q with the valuation v_p, together with the
/// discriminant d of E = F(sqrt(d)).
#[derive(Clone, Debug, PartialEq)]
pub struct FieldConfig {
    p: u64,
    d: BigRational,
}

fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut k = 3;
    while k * k <= p {
        if p % k == 0 {
            return false;
        }
        k += 2;
    }
    true
}

fn is_square_int(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

impl FieldConfig {
    pub fn new(p: u64, d: BigRational) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        if d.is_zero() || (is_square_int(d.numer()) && is_square_int(d.denom())) {
            return Err(Error::SquareDiscriminant(rat_to_str(&d)));
        }
        let cfg = FieldConfig { p, d };
        // Reject d that is a square in Q_p: even valuation and square unit part.
        let (v, u) = cfg.split_unit(&cfg.d.clone());
        if v % 2 == 0 && cfg.legendre_unit(&u) == 1 {
            return Err(Error::LocallySplit(rat_to_str(&cfg.d), p));
        }
        Ok(cfg)
    }

    /// E/F inert at p: d is the smallest positive nonsquare unit mod p.
    pub fn unramified(p: u64) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        let d = (2..p)
            .find(|&u| mod_pow(u, (p - 1) / 2, p) == p - 1)
            .expect("every odd prime has a nonsquare unit");
        FieldConfig::new(p, BigRational::from_integer(BigInt::from(d)))
    }

    /// E/F ramified at p: d = p.
    pub fn ramified(p: u64) -> Result<Self> {
        FieldConfig::new(p, BigRational::from_integer(BigInt::from(p)))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn d(&self) -> &BigRational {
        &self.d
    }

    pub fn extension_type(&self) -> ExtensionType {
        if self.val(self.d()).expect("d is nonzero") % 2 == 0 {
            ExtensionType::Unramified
        } else {
            ExtensionType::Ramified
        }
    }

    /// v_p(x); None iff x = 0.
    pub fn val(&self, x: &BigRational) -> Option<i64> {
        if x.is_zero() {
            return None;
        }
        Some(self.val_int(x.numer()) - self.val_int(x.denom()))
    }

    fn val_int(&self, n: &BigInt) -> i64 {
        let p = BigInt::from(self.p);
        let mut n = n.clone();
        let mut v = 0;
        loop {
            let (q, r) = num_integer::Integer::div_rem(&n, &p);
            if !r.is_zero() {
                return v;
            }
            n = q;
            v += 1;
        }
    }

    /// x = p^v * u with u a p-adic unit.
    fn split_unit(&self, x: &BigRational) -> (i64, BigRational) {
        let v = self.val(x).expect("split_unit needs x != 0");
        let pw = BigRational::from_integer(BigInt::from(self.p)).pow(v as i32);
        (v, x / pw)
    }

    /// Legendre symbol of a p-adic unit, via its residue mod p.
    pub fn legendre_unit(&self, u: &BigRational) -> i8 {
        assert_eq!(self.val(u), Some(0), "legendre_unit needs a unit");
        let p = BigInt::from(self.p);
        let num = u.numer().mod_floor_big(&p);
        let den = u.denom().mod_floor_big(&p);
        let den_inv = mod_pow_big(&den, self.p - 2, self.p);
        let r = (num * den_inv) % &p;
        let r = r.to_u64().expect("residue fits in u64");
        if mod_pow(r, (self.p - 1) / 2, self.p) == 1 {
            1
        } else {
            -1
        }
    }

    /// Hilbert symbol (a,b)_p for odd p, by the classical unit decomposition:
    /// with a = p^A u, b = p^B w, the symbol is
    /// (-1|p)^(AB) (u|p)^B (w|p)^A.
    pub fn hilbert_symbol(&self, a: &BigRational, b: &BigRational) -> Result<i8> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::HilbertZero);
        }
        let (va, u) = self.split_unit(a);
        let (vb, w) = self.split_unit(b);
        let mut s = 1i8;
        if va % 2 != 0 && vb % 2 != 0 && (self.p - 1) / 2 % 2 == 1 {
            s = -s;
        }
        if vb % 2 != 0 && self.legendre_unit(&u) == -1 {
            s = -s;
        }
        if va % 2 != 0 && self.legendre_unit(&w) == -1 {
            s = -s;
        }
        Ok(s)
    }

    /// Independent route for (a,b)_p: search for a primitive solution of
    /// z^2 = a x^2 + b y^2 modulo p^3.
    ///
    /// a and b are first moved, modulo squares, to integers of valuation 0
    /// or 1; for such coefficients and odd p a primitive solution mod p^3
    /// lifts to Z_p (Hensel), so the search is exact. Cost is O(p^6).
    pub fn hilbert_symbol_oracle(&self, a: &BigRational, b: &BigRational) -> Result<i8> {
        if a.is_zero() || b.is_zero() {
            return Err(Error::HilbertZero);
        }
        let p = self.p;
        let p3 = p * p * p;
        let ai = self.square_reduced_residue(a);
        let bi = self.square_reduced_residue(b);
        let mut any_sq = vec![false; p3 as usize];
        let mut unit_sq = vec![false; p3 as usize];
        for z in 0..p3 {
            let t = (z * z % p3) as usize;
            any_sq[t] = true;
            if z % p != 0 {
                unit_sq[t] = true;
            }
        }
        for x in 0..p3 {
            let axx = ai * (x * x % p3) % p3;
            for y in 0..p3 {
                let t = ((axx + bi * (y * y % p3)) % p3) as usize;
                let primitive_xy = x % p != 0 || y % p != 0;
                if (primitive_xy && any_sq[t]) || (!primitive_xy && unit_sq[t]) {
                    return Ok(1);
                }
            }
        }
        Ok(-1)
    }

    /// Representative of x modulo squares: an integer residue in [0, p^3)
    /// of valuation 0 or 1.
    fn square_reduced_residue(&self, x: &BigRational) -> u64 {
        let p = BigInt::from(self.p);
        // x ~ numer * denom mod squares.
        let mut n = x.numer() * x.denom();
        let p2 = &p * &p;
        while self.val_int(&n) >= 2 {
            n /= &p2;
        }
        let p3 = &p2 * &p;
        n.mod_floor_big(&p3).to_u64().expect("p^3 fits in u64")
    }

    /// x lies in N(E^x) iff (x, d)_p = 1.
    pub fn is_norm(&self, x: &BigRational) -> Result<bool> {
        Ok(self.hilbert_symbol(x, &self.d)? == 1)
    }

    pub fn norm_class(&self, x: &BigRational) -> Result<NormClass> {
        Ok(if self.is_norm(x)? {
            NormClass::Norm
        } else {
            NormClass::NonNorm
        })
    }

    /// Smallest-height representative of the nontrivial class of
    /// F^x / N(E^x).
    pub fn nonnorm_representative(&self) -> BigRational {
        let p_rat = BigRational::from_integer(BigInt::from(self.p));
        if !self.is_norm(&p_rat).expect("p != 0") {
            return p_rat;
        }
        for u in 2..self.p {
            let c = BigRational::from_integer(BigInt::from(u));
            if !self.is_norm(&c).expect("u != 0") {
                return c;
            }
        }
        unreachable!("F^x/N(E^x) has two classes, so a non-norm exists below p")
    }
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn mod_pow_big(b: &BigInt, e: u64, m: u64) -> BigInt {
    b.modpow(&BigInt::from(e), &BigInt::from(m))
}

trait ModFloor {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt;
}

impl ModFloor for BigInt {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt {
        num_integer::Integer::mod_floor(self, m)
    }
}

/// Element a + b*sqrt(d) of E. The discriminant lives in `FieldConfig`;
/// operations that need it take the config explicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadExt {
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadExt {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QuadExt { a, b }
    }

    pub fn from_rat(a: BigRational) -> Self {
        QuadExt::new(a, BigRational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        QuadExt::from_rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        QuadExt::from_int(0)
    }

    pub fn one() -> Self {
        QuadExt::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The nontrivial Galois automorphism: a + b*sqrt(d) -> a - b*sqrt(d).
    pub fn conj(&self) -> Self {
        QuadExt::new(self.a.clone(), -self.b.clone())
    }

    pub fn add(&self, o: &QuadExt) -> Self {
        QuadExt::new(&self.a + &o.a, &self.b + &o.b)
    }

    pub fn sub(&self, o: &QuadExt) -> Self {
        QuadExt::new(&self.a - &o.a, &self.b - &o.b)
    }

    pub fn neg(&self) -> Self {
        QuadExt::new(-self.a.clone(), -self.b.clone())
    }

    /// (x + y sqrt(d))(z + w sqrt(d)) = (xz + d yw) + (xw + yz) sqrt(d)
    pub fn mul(&self, o: &QuadExt, cfg: &FieldConfig) -> Self {
        QuadExt::new(
            &self.a * &o.a + cfg.d() * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
        )
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        QuadExt::new(&self.a * c, &self.b * c)
    }

    /// N_{E/F}(x) = x * conj(x) = a^2 - d b^2.
    pub fn norm(&self, cfg: &FieldConfig) -> BigRational {
        &self.a * &self.a - cfg.d() * &self.b * &self.b
    }

    pub fn trace(&self) -> BigRational {
        &self.a + &self.a
    }

    pub fn inv(&self, cfg: &FieldConfig) -> Result<Self> {
        let n = self.norm(cfg);
        if n.is_zero() {
            // d is a nonsquare, so the norm form is anisotropic.
            return Err(Error::Singular);
        }
        Ok(self.conj().scale(&(BigRational::one() / n)))
    }
}

impl std::fmt::Display for QuadExt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*s", self.b)
        } else {
            write!(f, "{} + {}*s", self.a, self.b)
        }
    }
}

pub fn rat_to_str(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn rat_from_str(s: &str) -> Result<BigRational> {
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Config(format!("not an integer: {t:?}")))
    };
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(Error::Config(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse_int(n)?, den))
        }
    }
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q5() -> FieldConfig {
        FieldConfig::unramified(5).unwrap()
    }

    fn q5r() -> FieldConfig {
        FieldConfig::ramified(5).unwrap()
    }

    #[test]
    fn presets() {
        assert_eq!(q5().d(), &rat_int(2));
        assert_eq!(q5().extension_type(), ExtensionType::Unramified);
        assert_eq!(q5r().d(), &rat_int(5));
        assert_eq!(q5r().extension_type(), ExtensionType::Ramified);
        assert!(FieldConfig::new(4, rat_int(2)).is_err());
        assert!(FieldConfig::new(2, rat_int(3)).is_err());
        assert!(FieldConfig::new(5, rat_int(9)).is_err());
        assert!(FieldConfig::new(5, BigRational::new(4.into(), 9.into())).is_err());
        // 6 = 2*3 is a square unit mod 5 (1^2=1, 4^2=16=1): 6 mod 5 = 1.
        assert!(matches!(
            FieldConfig::new(5, rat_int(6)),
            Err(Error::LocallySplit(_, 5))
        ));
        // -1 is a square mod 5 (= 4) but not mod 7.
        assert!(FieldConfig::new(5, rat_int(-1)).is_err());
        assert!(FieldConfig::new(7, rat_int(-1)).is_ok());
    }

    #[test]
    fn valuations() {
        let f = q5();
        assert_eq!(f.val(&rat_int(50)), Some(2));
        assert_eq!(f.val(&BigRational::new(3.into(), 25.into())), Some(-2));
        assert_eq!(f.val(&rat_int(0)), None);
    }

    #[test]
    fn legendre_small() {
        let f = q5();
        // squares mod 5: 1, 4
        assert_eq!(f.legendre_unit(&rat_int(1)), 1);
        assert_eq!(f.legendre_unit(&rat_int(4)), 1);
        assert_eq!(f.legendre_unit(&rat_int(2)), -1);
        assert_eq!(f.legendre_unit(&rat_int(3)), -1);
        assert_eq!(f.legendre_unit(&BigRational::new(1.into(), 2.into())), -1);
    }

    #[test]
    fn hilbert_pinned_values() {
        let f = q5();
        // (u, u) = 1 for any unit u at odd p.
        for u in [1i64, 2, 3, 4, 6, -1, -2] {
            assert_eq!(f.hilbert_symbol(&rat_int(u), &rat_int(u)).unwrap(), 1);
        }
        // (p, u) = (u|p): -1 for a nonsquare unit.
        assert_eq!(f.hilbert_symbol(&rat_int(5), &rat_int(2)).unwrap(), -1);
        assert_eq!(f.hilbert_symbol(&rat_int(5), &rat_int(4)).unwrap(), 1);
        assert!(f.hilbert_symbol(&rat_int(0), &rat_int(1)).is_err());
    }

    #[test]
    fn hilbert_laws_small_grid() {
        let f = q5();
        let vals: Vec<BigRational> = [-10i64, -5, -2, -1, 1, 2, 3, 5, 10, 50]
            .iter()
            .map(|&n| rat_int(n))
            .chain([BigRational::new(1.into(), 5.into())])
            .collect();
        for a in &vals {
            for b in &vals {
                let ab = f.hilbert_symbol(a, b).unwrap();
                assert_eq!(ab, f.hilbert_symbol(b, a).unwrap(), "symmetry at {a},{b}");
                for c in &vals {
                    let ac = f.hilbert_symbol(a, c).unwrap();
                    let abc = f.hilbert_symbol(a, &(b * c)).unwrap();
                    assert_eq!(abc, ab * ac, "bilinearity at {a},{b},{c}");
                }
                let sq = f.hilbert_symbol(&(a * a), b).unwrap();
                assert_eq!(sq, 1, "squares are norms everywhere");
            }
            assert_eq!(f.hilbert_symbol(a, &(-a)).unwrap(), 1, "(a,-a)=1");
        }
    }

    #[test]
    fn hilbert_matches_residue_oracle() {
        for f in [q5(), q5r()] {
            let vals: Vec<BigRational> = [-10i64, -5, -3, -2, -1, 1, 2, 3, 4, 5, 6, 10, 15, 50]
                .iter()
                .map(|&n| rat_int(n))
                .chain([
                    BigRational::new(1.into(), 5.into()),
                    BigRational::new(2.into(), 5.into()),
                    BigRational::new((-3).into(), 25.into()),
                ])
                .collect();
            for a in &vals {
                for b in &vals {
                    assert_eq!(
                        f.hilbert_symbol(a, b).unwrap(),
                        f.hilbert_symbol_oracle(a, b).unwrap(),
                        "oracle disagrees at d={}, a={a}, b={b}",
                        f.d()
                    );
                }
            }
        }
    }

    #[test]
    fn norm_classes() {
        let f = q5();
        // Unramified: norms are exactly the even-valuation elements.
        assert_eq!(f.norm_class(&rat_int(2)).unwrap(), NormClass::Norm);
        assert_eq!(f.norm_class(&rat_int(5)).unwrap(), NormClass::NonNorm);
        assert_eq!(f.norm_class(&rat_int(50)).unwrap(), NormClass::Norm);
        assert_eq!(f.nonnorm_representative(), rat_int(5));
        let g = q5r();
        // Ramified at 5: units are norms iff square mod 5; N(sqrt(5)) = -5.
        assert_eq!(g.norm_class(&rat_int(4)).unwrap(), NormClass::Norm);
        assert_eq!(g.norm_class(&rat_int(2)).unwrap(), NormClass::NonNorm);
        assert_eq!(g.norm_class(&rat_int(-5)).unwrap(), NormClass::Norm);
        assert_eq!(g.nonnorm_representative(), rat_int(2));
    }

    #[test]
    fn quad_ext_field_ops() {
        let f = q5();
        let x = QuadExt::new(rat_int(3), BigRational::new(1.into(), 2.into()));
        let y = QuadExt::new(rat_int(-1), rat_int(4));
        // norm multiplicativity
        let nxy = x.mul(&y, &f).norm(&f);
        assert_eq!(nxy, x.norm(&f) * y.norm(&f));
        // conj is multiplicative and fixes F
        assert_eq!(
            x.mul(&y, &f).conj(),
            x.conj().mul(&y.conj(), &f),
            "conj(xy) = conj(x)conj(y)"
        );
        assert_eq!(QuadExt::from_int(7).conj(), QuadExt::from_int(7));
        // x * x^{-1} = 1
        assert_eq!(x.mul(&x.inv(&f).unwrap(), &f), QuadExt::one());
        assert!(QuadExt::zero().inv(&f).is_err());
        // trace and norm land in F
        assert_eq!(x.trace(), rat_int(6));
        assert_eq!(x.norm(&f), rat_int(9) - rat_int(2) * BigRational::new(1.into(), 4.into()));
    }

    #[test]
    fn rat_strings_round_trip() {
        for s in ["3", "-7", "2/5", "-11/4"] {
            let r = rat_from_str(s).unwrap();
            assert_eq!(rat_to_str(&r), s);
        }
        assert_eq!(rat_from_str("4/2").unwrap(), rat_int(2));
        assert!(rat_from_str("1/0").is_err());
        assert!(rat_from_str("x").is_err());
    }
}
