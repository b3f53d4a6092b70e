//! Formal-representation layer and the end-to-end certifier for relative
//! square integrability of representations induced from a mirror Levi.
//!
//! Representations are opaque labels with a Galois-twist involution; the
//! distinction criteria for unitary groups enter as rules on labels, not
//! as computations on vector spaces. What is computed exactly: Jacquet
//! exponents of generalized Steinberg segments along every standard
//! parabolic, their Weyl twists, and strict-decay pairings against the
//! non-central extreme rays of the anti-dominant split cones.

use crate::cone::dominant_extreme_rays;
use crate::error::{Error, Result};
use crate::linalg::QVec;
use crate::root::{
    case_classify, double_coset_reps, levi_intersection, subset_to_partition, CharVec,
    CosetCase, SimpleSubset, WeylElement,
};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// A supercuspidal building block: an opaque label, the size of the
/// general linear group carrying it, the label of its Galois twist, and
/// an unramified |det|-twist exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSupercuspidal {
    pub label: String,
    pub size: usize,
    pub sigma_label: String,
    pub central_twist: BigRational,
}

impl FormalSupercuspidal {
    pub fn new(label: &str, size: usize, sigma_label: &str) -> Self {
        FormalSupercuspidal {
            label: label.into(),
            size,
            sigma_label: sigma_label.into(),
            central_twist: BigRational::zero(),
        }
    }

    pub fn galois_invariant(&self) -> bool {
        self.label == self.sigma_label
    }

    pub fn sigma_twist(&self) -> FormalSupercuspidal {
        FormalSupercuspidal {
            label: self.sigma_label.clone(),
            size: self.size,
            sigma_label: self.label.clone(),
            central_twist: self.central_twist.clone(),
        }
    }
}

/// A discrete series of GL_{k*r}(E) presented as a generalized Steinberg
/// built from k segment twists of a supercuspidal of size r; k = 1 is the
/// bare supercuspidal, and an unramified character chi times the Steinberg
/// of GL_n is the k = n, r = 1 instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalDiscreteSeries {
    pub k: usize,
    pub rho: FormalSupercuspidal,
}

impl FormalDiscreteSeries {
    pub fn new(k: usize, rho: FormalSupercuspidal) -> Result<Self> {
        if k == 0 || rho.size == 0 {
            return Err(Error::Certify("segment data must be nonempty".into()));
        }
        Ok(FormalDiscreteSeries { k, rho })
    }

    pub fn size(&self) -> usize {
        self.k * self.rho.size
    }

    pub fn label(&self) -> String {
        if self.k == 1 {
            self.rho.label.clone()
        } else {
            format!("st({},{})", self.k, self.rho.label)
        }
    }

    pub fn is_supercuspidal(&self) -> bool {
        self.k == 1
    }

    pub fn sigma_twist(&self) -> FormalDiscreteSeries {
        FormalDiscreteSeries {
            k: self.k,
            rho: self.rho.sigma_twist(),
        }
    }

    /// The segment twist exponents (1-k)/2, (3-k)/2, ..., (k-1)/2 shifted
    /// by the central twist: strictly increasing by 1, sum = k * twist.
    pub fn segment_exponents(&self) -> Vec<BigRational> {
        (0..self.k)
            .map(|j| rat(1 - self.k as i64, 2) + rat(j as i64, 1) + &self.rho.central_twist)
            .collect()
    }
}

/// Galois invariance of a generalized Steinberg reduces to its cuspidal
/// support: st(k, rho) is invariant exactly when rho is.
pub fn galois_invariant(tau: &FormalDiscreteSeries) -> bool {
    tau.rho.galois_invariant()
}

/// Distinction of pi_1 (x) pi_2 by the twisted-diagonal subgroup of a
/// doubled general linear group: holds exactly when pi_2 is the Galois
/// twist of pi_1.
pub fn ltheta_distinguished(
    pi1: &FormalDiscreteSeries,
    pi2: &FormalDiscreteSeries,
) -> Result<bool> {
    if pi1.size() != pi2.size() {
        return Err(Error::Certify(format!(
            "size mismatch: {} vs {}",
            pi1.size(),
            pi2.size()
        )));
    }
    Ok(pi1.k == pi2.k && pi2.rho.label == pi1.rho.sigma_label)
}

/// The inducing datum: tau' on GL_n(E), inflated to tau = tau' (x) (Galois
/// twist of tau') on the (n, n) block Levi of GL_{2n}(E).
#[derive(Clone, Debug)]
pub struct InducedDatum {
    pub n: usize,
    pub tau_prime: FormalDiscreteSeries,
}

impl InducedDatum {
    pub fn new(n: usize, tau_prime: FormalDiscreteSeries) -> Result<Self> {
        if n == 0 {
            return Err(Error::Certify("rank must be positive".into()));
        }
        if tau_prime.size() != n {
            return Err(Error::Certify(format!(
                "inducing factor lives on GL_{}, expected GL_{}",
                tau_prime.size(),
                n
            )));
        }
        Ok(InducedDatum { n, tau_prime })
    }

    pub fn m(&self) -> usize {
        2 * self.n
    }

    /// The inducing Levi's subset: all simple roots except the middle one.
    pub fn mirror_subset(&self) -> SimpleSubset {
        (0..self.m() - 1).filter(|&i| i != self.n - 1).collect()
    }

    pub fn factors(&self) -> (FormalDiscreteSeries, FormalDiscreteSeries) {
        (self.tau_prime.clone(), self.tau_prime.sigma_twist())
    }
}

/// Per-coordinate exponent of a central character of a block Levi, as a
/// rational vector: pairing with a tied valuation vector computes the
/// restriction to any smaller center, so coordinate sums never need to be
/// materialized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentVector {
    pub coords: QVec,
}

impl ExponentVector {
    pub fn central_sum(&self) -> BigRational {
        self.coords.iter().sum()
    }

    pub fn pair_ray(&self, ray: &CharVec) -> BigRational {
        self.coords
            .iter()
            .zip(ray)
            .map(|(c, &r)| c * BigRational::from_integer(r.into()))
            .sum()
    }
}

/// The two full-Levi subquotients of the mirror-parabolic Jacquet module:
/// the identity representative keeps the factor order, the block swap
/// exchanges it. Only these two representatives are first-case.
pub fn case1_subquotients(
    datum: &InducedDatum,
    w: &WeylElement,
) -> Result<(FormalDiscreteSeries, FormalDiscreteSeries)> {
    let mirror = datum.mirror_subset();
    if case_classify(w, &mirror, &mirror)? != CosetCase::Case1 {
        return Err(Error::Certify(
            "representative does not carry a full-Levi subquotient".into(),
        ));
    }
    let (tau, stau) = datum.factors();
    if *w == WeylElement::identity(datum.m()) {
        Ok((tau, stau))
    } else if *w == WeylElement::block_swap(datum.n) {
        Ok((stau, tau))
    } else {
        Err(Error::Certify(
            "unexpected first-case representative beyond identity and block swap".into(),
        ))
    }
}

/// Whether a first-case subquotient is distinguished by the fixed points
/// of the transported involution on the Levi: the involution pairs the two
/// block factors with unitary groups, and distinction of each factor
/// requires its label to be Galois invariant. For non-invariant tau' both
/// representatives therefore fail to be distinguished.
pub fn case1_mtheta_distinguished(datum: &InducedDatum, w: &WeylElement) -> Result<bool> {
    let (first, second) = case1_subquotients(datum, w)?;
    Ok(galois_invariant(&first) && galois_invariant(&second))
}

/// Per-coordinate exponents of the unique constituent of a generalized
/// Steinberg's Jacquet module along sub-blocks of the given coordinate
/// sizes: None when some size is not a whole number of segments (the
/// module vanishes). Chunks split from the top of the decreasing segment
/// ladder.
fn steinberg_chunk_exponents(
    k: usize,
    r: usize,
    twist: &BigRational,
    sizes: &[usize],
) -> Option<QVec> {
    debug_assert_eq!(sizes.iter().sum::<usize>(), k * r);
    if sizes.iter().any(|s| s % r != 0) {
        return None;
    }
    let mut coords = Vec::with_capacity(k * r);
    let mut consumed = 0i64;
    for &size in sizes {
        let b = (size / r) as i64;
        let e = rat(k as i64 - 2 * consumed - b, 2) + twist;
        coords.extend(std::iter::repeat_n(e, size));
        consumed += b;
    }
    Some(coords)
}

/// Exponents a second-case representative contributes to the Jacquet
/// module along the theta-parabolic: the inducing factors' Jacquet
/// exponents along omega's w-pullback refinement, twisted by w. At most
/// one vector (the segment Jacquet module is irreducible or zero).
pub fn case2_exponents(
    datum: &InducedDatum,
    theta: &SimpleSubset,
    w: &WeylElement,
    omega: &SimpleSubset,
) -> Result<Vec<ExponentVector>> {
    if *omega != datum.mirror_subset() {
        return Err(Error::Certify(
            "inducing subset must be the datum's mirror Levi".into(),
        ));
    }
    if case_classify(w, theta, omega)? == CosetCase::Case1 {
        return Err(Error::ExpectedCase2);
    }
    let m = datum.m();
    let n = datum.n;
    // omega intersect w^{-1}(theta), the sub-Levi of the mirror Levi whose
    // Jacquet module feeds this filtration piece
    let pullback = levi_intersection(&w.inverse(), omega, theta)?;
    let parts = subset_to_partition(m, &pullback).parts;
    // the mirror boundary is never inside the pullback, so the parts split
    // cleanly between the two factors
    let mut first: Vec<usize> = Vec::new();
    let mut second: Vec<usize> = Vec::new();
    let mut acc = 0;
    for &p in &parts {
        if acc < n {
            first.push(p);
        } else {
            second.push(p);
        }
        acc += p;
    }
    debug_assert_eq!(first.iter().sum::<usize>(), n);
    let (tau, stau) = datum.factors();
    let Some(c1) = steinberg_chunk_exponents(tau.k, tau.rho.size, &tau.rho.central_twist, &first)
    else {
        return Ok(vec![]);
    };
    let Some(c2) =
        steinberg_chunk_exponents(stau.k, stau.rho.size, &stau.rho.central_twist, &second)
    else {
        return Ok(vec![]);
    };
    let c: QVec = c1.into_iter().chain(c2).collect();
    // w-twist of the character: new[w(i)] = c[i]
    let mut twisted = vec![BigRational::zero(); m];
    for (i, x) in c.into_iter().enumerate() {
        twisted[w.apply(i)] = x;
    }
    Ok(vec![ExponentVector { coords: twisted }])
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub enum EntryVerdict {
    StrictDecay,
    NonDistinguished,
    Fail,
}

#[derive(Clone, Debug)]
pub enum EntryEvidence {
    /// Factor labels differ from their required Galois twists, so the
    /// subquotient carries no invariant functional.
    LabelMismatch { first: String, second: String },
    /// Both factors Galois invariant: the non-distinction route is closed
    /// and the unitary exponent cannot decay strictly.
    GaloisInvariant { label: String },
    /// Strict positivity of the exponent against every non-central ray.
    RayDecay {
        exponent: ExponentVector,
        pairings: Vec<(CharVec, BigRational)>,
    },
    /// The contributing Jacquet module is zero.
    JacquetVanishes { reason: String },
    /// A ray pairing failed to be strictly positive.
    DecayFailure {
        exponent: ExponentVector,
        ray: CharVec,
        pairing: BigRational,
    },
}

#[derive(Clone, Debug)]
pub struct CertificateEntry {
    /// The simple root removed from the full set to form the parabolic.
    pub theta_removed: usize,
    pub w: WeylElement,
    pub case: CosetCase,
    pub verdict: EntryVerdict,
    pub evidence: EntryEvidence,
}

#[derive(Clone, Debug)]
pub struct RdsCertificate {
    pub n: usize,
    pub tau_prime_label: String,
    pub regular: bool,
    pub entries: Vec<CertificateEntry>,
    pub rds: bool,
    pub relatively_supercuspidal: bool,
    pub verdict: String,
    /// Assumed hypotheses and coverage notes, recorded but not checked.
    pub notes: Vec<String>,
}

/// Replay the square-integrability criterion for the induced
/// representation: every maximal standard parabolic, every double-coset
/// representative. First-case entries discharge by non-distinction,
/// second-case entries by strict ray decay; any entry neither can
/// discharge is a FAIL, and a certificate with FAIL entries means "not
/// certified by this route", never "not square integrable".
pub fn certify_rds(datum: &InducedDatum) -> Result<RdsCertificate> {
    if !datum.tau_prime.rho.central_twist.is_zero() {
        return Err(Error::Certify(
            "certification requires a unitary central character (zero twist)".into(),
        ));
    }
    let m = datum.m();
    let omega = datum.mirror_subset();
    let regular = !galois_invariant(&datum.tau_prime);
    let mut entries = Vec::new();
    let mut case2_all_vanish = true;
    for removed in 0..m - 1 {
        let theta: SimpleSubset = (0..m - 1).filter(|&i| i != removed).collect();
        let rays = dominant_extreme_rays(m, &theta, None)?;
        for w in double_coset_reps(m, &theta, &omega) {
            let case = case_classify(&w, &theta, &omega)?;
            let (verdict, evidence) = match case {
                CosetCase::Case1 => {
                    let (first, second) = case1_subquotients(datum, &w)?;
                    if case1_mtheta_distinguished(datum, &w)? {
                        (
                            EntryVerdict::Fail,
                            EntryEvidence::GaloisInvariant {
                                label: datum.tau_prime.label(),
                            },
                        )
                    } else {
                        (
                            EntryVerdict::NonDistinguished,
                            EntryEvidence::LabelMismatch {
                                first: first.label(),
                                second: second.label(),
                            },
                        )
                    }
                }
                CosetCase::Case2 => {
                    let exps = case2_exponents(datum, &theta, &w, &omega)?;
                    match exps.into_iter().next() {
                        None => (
                            EntryVerdict::StrictDecay,
                            EntryEvidence::JacquetVanishes {
                                reason: "segment sizes incompatible with the sub-Levi".into(),
                            },
                        ),
                        Some(exp) => {
                            case2_all_vanish = false;
                            let mut failing = None;
                            let mut pairings = Vec::new();
                            for ray in &rays.rays {
                                let p = exp.pair_ray(ray);
                                if p.is_positive() {
                                    pairings.push((ray.clone(), p));
                                } else {
                                    failing = Some((ray.clone(), p));
                                    break;
                                }
                            }
                            match failing {
                                None => (
                                    EntryVerdict::StrictDecay,
                                    EntryEvidence::RayDecay {
                                        exponent: exp,
                                        pairings,
                                    },
                                ),
                                Some((ray, pairing)) => (
                                    EntryVerdict::Fail,
                                    EntryEvidence::DecayFailure {
                                        exponent: exp,
                                        ray,
                                        pairing,
                                    },
                                ),
                            }
                        }
                    }
                }
            };
            entries.push(CertificateEntry {
                theta_removed: removed,
                w,
                case,
                verdict,
                evidence,
            });
        }
    }
    let rds = entries.iter().all(|e| e.verdict != EntryVerdict::Fail);
    let relatively_supercuspidal = rds && datum.tau_prime.is_supercuspidal() && case2_all_vanish;
    let verdict = if rds {
        "certified: strict exponent decay on every split cone".into()
    } else {
        "not certified by this criterion route".into()
    };
    Ok(RdsCertificate {
        n: datum.n,
        tau_prime_label: datum.tau_prime.label(),
        regular,
        entries,
        rds,
        relatively_supercuspidal,
        verdict,
        notes: vec![
            "invariant-functional multiplicity at most one on each unitary block; recorded, unused".into(),
            "irreducibility of the induced representation is an assumed hypothesis".into(),
            "non-standard parabolics covered by coordinate-relabeling transport of the standard cones".into(),
            "second-case discharge relies on the torus-neighborhood cone containment".into(),
            "exponent set along each parabolic over-approximates the functional-relevant exponents".into(),
        ],
    })
}

/// Labels realized among the entries' first-case factor pairs, for
/// relabeling-invariance checks.
pub fn case1_label_multiset(cert: &RdsCertificate) -> BTreeSet<(String, String)> {
    cert.entries
        .iter()
        .filter_map(|e| match &e.evidence {
            EntryEvidence::LabelMismatch { first, second } => {
                Some((first.clone(), second.clone()))
            }
            _ => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi_pair() -> FormalSupercuspidal {
        FormalSupercuspidal::new("chi1", 1, "chi2")
    }

    fn chi_self() -> FormalSupercuspidal {
        FormalSupercuspidal::new("chi", 1, "chi")
    }

    fn steinberg(k: usize, rho: FormalSupercuspidal) -> FormalDiscreteSeries {
        FormalDiscreteSeries::new(k, rho).unwrap()
    }

    #[test]
    fn segment_exponent_shape() {
        let tau = steinberg(4, chi_pair());
        let exps = tau.segment_exponents();
        assert_eq!(
            exps,
            vec![rat(-3, 2), rat(-1, 2), rat(1, 2), rat(3, 2)]
        );
        assert!(exps.windows(2).all(|w| &w[1] - &w[0] == rat(1, 1)));
        assert!(exps.iter().sum::<BigRational>().is_zero());
    }

    #[test]
    fn galois_invariance_reduces_to_support() {
        for k in 1..=4 {
            assert!(galois_invariant(&steinberg(k, chi_self())));
            assert!(!galois_invariant(&steinberg(k, chi_pair())));
        }
    }

    #[test]
    fn twisted_diagonal_distinction_rule() {
        let tau = steinberg(2, chi_pair());
        let stau = tau.sigma_twist();
        assert!(ltheta_distinguished(&tau, &stau).unwrap());
        assert!(ltheta_distinguished(&stau, &tau).unwrap());
        assert!(!ltheta_distinguished(&tau, &tau).unwrap());
        let small = steinberg(1, chi_pair());
        assert!(ltheta_distinguished(&tau, &small).is_err());
    }

    #[test]
    fn case1_factor_order() {
        let datum = InducedDatum::new(2, steinberg(2, chi_pair())).unwrap();
        let id = WeylElement::identity(4);
        let swap = WeylElement::block_swap(2);
        let (a, b) = case1_subquotients(&datum, &id).unwrap();
        assert_eq!((a.label(), b.label()), ("st(2,chi1)".into(), "st(2,chi2)".into()));
        let (a, b) = case1_subquotients(&datum, &swap).unwrap();
        assert_eq!((a.label(), b.label()), ("st(2,chi2)".into(), "st(2,chi1)".into()));
        // neither is distinguished when the support is not invariant
        assert!(!case1_mtheta_distinguished(&datum, &id).unwrap());
        assert!(!case1_mtheta_distinguished(&datum, &swap).unwrap());
        // invariant support flips the rule
        let inv = InducedDatum::new(2, steinberg(2, chi_self())).unwrap();
        assert!(case1_mtheta_distinguished(&inv, &id).unwrap());
        // a second-case representative is refused
        let mid = WeylElement::new(vec![0, 2, 1, 3]);
        assert!(case1_subquotients(&datum, &mid).is_err());
    }

    #[test]
    fn case1_exponents_are_unitary() {
        // the full-Levi subquotients have segment exponent sum zero per
        // factor, so the central exponent pairs to zero with every ray
        let datum = InducedDatum::new(2, steinberg(2, chi_pair())).unwrap();
        let (tau, stau) = datum.factors();
        assert!(tau.segment_exponents().iter().sum::<BigRational>().is_zero());
        assert!(stau.segment_exponents().iter().sum::<BigRational>().is_zero());
    }

    #[test]
    fn case2_exponent_hand_value() {
        // 2n = 4, theta = omega = mirror, middle representative: the
        // pullback Levi is the diagonal torus, segment exponents
        // (1/2, -1/2) per factor, and the twist regroups them as
        // (1/2, 1/2, -1/2, -1/2)
        let datum = InducedDatum::new(2, steinberg(2, chi_pair())).unwrap();
        let mirror = datum.mirror_subset();
        let w = WeylElement::new(vec![0, 2, 1, 3]);
        let exps = case2_exponents(&datum, &mirror, &w, &mirror).unwrap();
        assert_eq!(exps.len(), 1);
        assert_eq!(
            exps[0].coords,
            vec![rat(1, 2), rat(1, 2), rat(-1, 2), rat(-1, 2)]
        );
        assert_eq!(exps[0].pair_ray(&vec![1, 1, 0, 0]), rat(1, 1));
        // first-case input is refused
        let id = WeylElement::identity(4);
        assert!(matches!(
            case2_exponents(&datum, &mirror, &id, &mirror),
            Err(Error::ExpectedCase2)
        ));
    }

    #[test]
    fn supercuspidal_jacquet_vanishes() {
        // k = 1, r = 2: any proper sub-block has size 1, not a multiple
        // of the cuspidal size, so the exponent set is empty
        let rho = FormalSupercuspidal::new("pi", 2, "pi2");
        let datum = InducedDatum::new(2, steinberg(1, rho)).unwrap();
        let mirror = datum.mirror_subset();
        let w = WeylElement::new(vec![0, 2, 1, 3]);
        assert!(case2_exponents(&datum, &mirror, &w, &mirror).unwrap().is_empty());
    }

    #[test]
    fn exponent_sums_conserve_central_character() {
        for (n, k, r) in [(2usize, 2usize, 1usize), (3, 3, 1), (3, 1, 3), (2, 1, 2)] {
            let rho = FormalSupercuspidal::new("a", r, "b");
            let datum = InducedDatum::new(n, steinberg(k, rho)).unwrap();
            let m = 2 * n;
            let omega = datum.mirror_subset();
            for removed in 0..m - 1 {
                let theta: SimpleSubset = (0..m - 1).filter(|&i| i != removed).collect();
                for w in double_coset_reps(m, &theta, &omega) {
                    if case_classify(&w, &theta, &omega).unwrap() == CosetCase::Case2 {
                        for e in case2_exponents(&datum, &theta, &w, &omega).unwrap() {
                            assert!(e.central_sum().is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn certify_regular_steinberg() {
        let datum = InducedDatum::new(2, steinberg(2, chi_pair())).unwrap();
        let cert = certify_rds(&datum).unwrap();
        assert!(cert.rds && cert.regular && !cert.relatively_supercuspidal);
        let mirror_entries: Vec<_> = cert
            .entries
            .iter()
            .filter(|e| e.theta_removed == 1)
            .collect();
        assert_eq!(mirror_entries.len(), 3);
        assert_eq!(
            mirror_entries
                .iter()
                .filter(|e| e.case == CosetCase::Case1)
                .count(),
            2
        );
        for e in &cert.entries {
            match e.case {
                CosetCase::Case1 => assert_eq!(e.verdict, EntryVerdict::NonDistinguished),
                CosetCase::Case2 => assert_eq!(e.verdict, EntryVerdict::StrictDecay),
            }
        }
    }

    #[test]
    fn certify_invariant_steinberg_fails_at_case1_only() {
        let datum = InducedDatum::new(2, steinberg(2, chi_self())).unwrap();
        let cert = certify_rds(&datum).unwrap();
        assert!(!cert.rds && !cert.regular);
        assert!(cert.verdict.contains("not certified"));
        for e in &cert.entries {
            match e.case {
                CosetCase::Case1 => assert_eq!(e.verdict, EntryVerdict::Fail),
                CosetCase::Case2 => assert_eq!(e.verdict, EntryVerdict::StrictDecay),
            }
        }
    }

    #[test]
    fn certify_supercuspidal_flags_relative_supercuspidality() {
        let rho = FormalSupercuspidal::new("pi", 2, "pi2");
        let datum = InducedDatum::new(2, steinberg(1, rho)).unwrap();
        let cert = certify_rds(&datum).unwrap();
        assert!(cert.rds && cert.relatively_supercuspidal);
        assert!(cert
            .entries
            .iter()
            .filter(|e| e.case == CosetCase::Case2)
            .all(|e| matches!(e.evidence, EntryEvidence::JacquetVanishes { .. })));
    }

    #[test]
    fn verdict_invariant_under_factor_swap_and_relabeling() {
        let datum = InducedDatum::new(2, steinberg(2, chi_pair())).unwrap();
        let swapped = InducedDatum::new(2, datum.tau_prime.sigma_twist()).unwrap();
        let a = certify_rds(&datum).unwrap();
        let b = certify_rds(&swapped).unwrap();
        assert_eq!(a.rds, b.rds);
        // the first-case evidence pairs swap
        let la = case1_label_multiset(&a);
        let lb = case1_label_multiset(&b);
        let flipped: BTreeSet<_> = la.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
        assert_eq!(lb, flipped);
        // renaming the opaque labels changes nothing structural
        let renamed = InducedDatum::new(
            2,
            steinberg(2, FormalSupercuspidal::new("zeta", 1, "xi")),
        )
        .unwrap();
        let c = certify_rds(&renamed).unwrap();
        assert_eq!(a.rds, c.rds);
        assert_eq!(
            a.entries.iter().map(|e| &e.verdict).collect::<Vec<_>>(),
            c.entries.iter().map(|e| &e.verdict).collect::<Vec<_>>()
        );
    }

    #[test]
    fn nonzero_twist_is_refused() {
        let mut rho = chi_pair();
        rho.central_twist = rat(1, 2);
        let datum = InducedDatum::new(2, steinberg(2, rho)).unwrap();
        assert!(certify_rds(&datum).is_err());
    }
}
