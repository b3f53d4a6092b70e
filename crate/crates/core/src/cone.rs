//! Valuation-lattice models of split-torus cones. A diagonal torus element
//! is recorded by its vector of entry valuations v in Z^m; a character
//! vector c pairs as <c, v>, and with |chi(a)| = q^{-<c, v>} the condition
//! |chi(a)| <= 1 reads <c, v> >= 0 while |chi(a)| < 1 reads <c, v> > 0.
//! That normalization is fixed here once and used everywhere.
//!
//! Cones carry an equality pattern (tied coordinates, the valuation image
//! of a subtorus of the diagonal torus) plus inequality functionals. The
//! containment engine certifies one cone inside another with exact
//! nonnegative multipliers and, for the strict part, an explicit positive
//! functional per extreme ray.

use crate::error::{Error, Result};
use crate::linalg::{self, QVec};
use crate::root::{
    case_classify, double_coset_reps, levi_intersection, root_vec, subset_to_partition, CharVec,
    CosetCase, RootDatum, SimpleSubset, WeylElement,
};
use num_rational::BigRational;
use num_traits::Signed;

pub fn pair(c: &CharVec, v: &[i64]) -> i64 {
    c.iter().zip(v).map(|(a, b)| a * b).sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationCone {
    m: usize,
    /// class[i] = smallest coordinate tied to i; v must be constant on
    /// each class.
    classes: Vec<usize>,
    /// functionals c with <c, v> >= threshold.
    ineqs: Vec<CharVec>,
    /// 0 models |alpha| <= 1; t > 0 models |alpha| <= q^{-t}.
    threshold: i64,
}

fn normalize_classes(mut classes: Vec<usize>) -> Vec<usize> {
    // path-compress to the smallest member of each class
    for i in 0..classes.len() {
        let mut r = classes[i];
        while classes[r] != r {
            r = classes[r];
        }
        classes[i] = r;
    }
    classes
}

impl ValuationCone {
    pub fn new(m: usize, classes: Vec<usize>, ineqs: Vec<CharVec>, threshold: i64) -> Self {
        assert_eq!(classes.len(), m);
        assert!(ineqs.iter().all(|c| c.len() == m));
        ValuationCone {
            m,
            classes: normalize_classes(classes),
            ineqs,
            threshold,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn ineqs(&self) -> &[CharVec] {
        &self.ineqs
    }

    pub fn threshold(&self) -> i64 {
        self.threshold
    }

    pub fn satisfies_ties(&self, v: &[i64]) -> bool {
        v.len() == self.m && (0..self.m).all(|i| v[i] == v[self.classes[i]])
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.satisfies_ties(v) && self.ineqs.iter().all(|c| pair(c, v) >= self.threshold)
    }

    /// The two-sided part: ties hold and every defining functional
    /// vanishes. This is the valuation image of the unit-times-center
    /// subgroup excluded from decay statements.
    pub fn in_exclusion(&self, v: &[i64]) -> bool {
        self.satisfies_ties(v) && self.ineqs.iter().all(|c| pair(c, v) == 0)
    }

    /// e_i - e_class(i) for every non-representative coordinate.
    pub fn equality_generators(&self) -> Vec<CharVec> {
        (0..self.m)
            .filter(|&i| self.classes[i] != i)
            .map(|i| {
                let mut c = vec![0i64; self.m];
                c[i] = 1;
                c[self.classes[i]] = -1;
                c
            })
            .collect()
    }

    /// Coordinates indexing the class representatives, in order.
    pub fn class_reps(&self) -> Vec<usize> {
        (0..self.m).filter(|&i| self.classes[i] == i).collect()
    }

    /// Relabel coordinates by w: the new cone's membership predicate is
    /// the old one composed with w^{-1}.
    pub fn relabel(&self, w: &WeylElement) -> ValuationCone {
        assert_eq!(w.m(), self.m);
        let mut classes = vec![0usize; self.m];
        for i in 0..self.m {
            classes[w.apply(i)] = w.apply(self.classes[i]);
        }
        let ineqs = self.ineqs.iter().map(|c| w.act_char(c)).collect();
        ValuationCone::new(self.m, classes, ineqs, self.threshold)
    }
}

/// The anti-dominant part of the split component of a standard Levi's
/// center: coordinates tied along the blocks of `theta`, with
/// <alpha, v> >= 0 for every simple root alpha of `within` (whole group
/// when absent) outside `theta`. The maximal split torus here is already
/// its own maximal (theta, F)-split torus at valuation level, so the same
/// cone serves both.
pub fn dominant_part(
    m: usize,
    theta: &SimpleSubset,
    within: Option<&SimpleSubset>,
) -> Result<ValuationCone> {
    dominant_part_eps(m, theta, within, 0)
}

/// Variant with |alpha(s)| <= q^{-threshold}; only threshold = 0 feeds the
/// containment machinery.
pub fn dominant_part_eps(
    m: usize,
    theta: &SimpleSubset,
    within: Option<&SimpleSubset>,
    threshold: i64,
) -> Result<ValuationCone> {
    if let Some(omega) = within {
        if !theta.is_subset(omega) {
            return Err(Error::EmptyCone(format!(
                "subsets not nested: {theta:?} inside {omega:?}"
            )));
        }
    }
    if theta.iter().any(|&i| i + 1 >= m) {
        return Err(Error::EmptyCone(format!("subset {theta:?} exceeds rank")));
    }
    let shape = subset_to_partition(m, theta);
    let block = shape.block_of();
    let starts = shape.block_starts();
    let classes: Vec<usize> = (0..m).map(|i| starts[block[i]]).collect();
    let ineqs = (0..m - 1)
        .filter(|i| !theta.contains(i) && within.is_none_or(|om| om.contains(i)))
        .map(|i| root_vec(m, i, i + 1))
        .collect();
    Ok(ValuationCone::new(m, classes, ineqs, threshold))
}

/// Extreme rays of a dominant-part cone, modulo its lineality space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeRays {
    pub rays: Vec<CharVec>,
    pub lineality: Vec<CharVec>,
}

impl ConeRays {
    pub fn relabel(&self, w: &WeylElement) -> ConeRays {
        ConeRays {
            rays: self.rays.iter().map(|r| w.act_char(r)).collect(),
            lineality: self.lineality.iter().map(|r| w.act_char(r)).collect(),
        }
    }
}

/// Closed-form ray description: within each `within`-block, the cone ties
/// coordinates along theta-blocks and orders the tied values weakly
/// decreasingly, so the extreme rays are the indicators of the first j
/// theta-blocks of that within-block (j proper), and the lineality space
/// is spanned by the within-block indicators. `decompose_dominant` is the
/// executable completeness proof for this description.
pub fn dominant_extreme_rays(
    m: usize,
    theta: &SimpleSubset,
    within: Option<&SimpleSubset>,
) -> Result<ConeRays> {
    let cone = dominant_part(m, theta, within)?;
    let omega_shape = subset_to_partition(m, &within.cloned().unwrap_or((0..m - 1).collect()));
    let theta_block = subset_to_partition(m, theta).block_of();
    let mut rays: Vec<CharVec> = Vec::new();
    let mut lineality: Vec<CharVec> = Vec::new();
    let mut start = 0;
    for part in &omega_shape.parts {
        let coords = start..start + part;
        lineality.push((0..m).map(|i| coords.contains(&i) as i64).collect());
        // indicators of proper leading unions of theta-blocks
        for j in coords.clone().skip(1) {
            if theta_block[j] != theta_block[j - 1] {
                rays.push(
                    (0..m)
                        .map(|i| (coords.contains(&i) && i < j) as i64)
                        .collect(),
                );
            }
        }
        start += part;
    }
    debug_assert!(rays.iter().all(|r| cone.contains(r)));
    Ok(ConeRays { rays, lineality })
}

/// Writes v as sum of gap-coordinates g_j >= 0 over the rays plus free
/// coefficients over the lineality basis; succeeds exactly on cone points,
/// and the reconstruction is exact. Threshold-0 cones only.
pub fn decompose_dominant(
    m: usize,
    theta: &SimpleSubset,
    within: Option<&SimpleSubset>,
    v: &[i64],
) -> Result<Option<(Vec<i64>, Vec<i64>)>> {
    let cone = dominant_part(m, theta, within)?;
    let rays = dominant_extreme_rays(m, theta, within)?;
    if !cone.contains(v) {
        return Ok(None);
    }
    // gap across each ray boundary, block-final value per lineality block
    let gaps: Vec<i64> = rays
        .rays
        .iter()
        .map(|r| {
            let j = r.iter().rposition(|&x| x == 1).unwrap() + 1;
            v[j - 1] - v[j]
        })
        .collect();
    let frees: Vec<i64> = rays
        .lineality
        .iter()
        .map(|b| v[b.iter().rposition(|&x| x == 1).unwrap()])
        .collect();
    let mut recon = vec![0i64; m];
    for (g, r) in gaps.iter().zip(&rays.rays) {
        for i in 0..m {
            recon[i] += g * r[i];
        }
    }
    for (c, b) in frees.iter().zip(&rays.lineality) {
        for i in 0..m {
            recon[i] += c * b[i];
        }
    }
    assert_eq!(recon, v, "gap decomposition must reconstruct the input");
    assert!(gaps.iter().all(|&g| g >= 0));
    Ok(Some((gaps, frees)))
}

/// Exact multiplier proof that one functional is implied: target equals
/// sum lambda_i * ineq_i + sum mu_j * eq_j with lambda >= 0.
#[derive(Clone, Debug)]
pub struct FarkasRow {
    pub target: CharVec,
    pub ineq_multipliers: Vec<BigRational>,
    pub eq_multipliers: Vec<BigRational>,
}

#[derive(Clone, Debug)]
pub struct FarkasCertificate {
    pub source_ineqs: Vec<CharVec>,
    pub source_eqs: Vec<CharVec>,
    pub rows: Vec<FarkasRow>,
}

impl FarkasCertificate {
    /// Re-multiply every row and compare exactly.
    pub fn validate(&self) -> bool {
        self.rows.iter().all(|row| {
            if row.ineq_multipliers.iter().any(|l| l.is_negative()) {
                return false;
            }
            let m = row.target.len();
            let mut acc: QVec = vec![BigRational::from_integer(0.into()); m];
            let terms = row
                .ineq_multipliers
                .iter()
                .zip(&self.source_ineqs)
                .chain(row.eq_multipliers.iter().zip(&self.source_eqs));
            for (coef, gen) in terms {
                for i in 0..m {
                    acc[i] += coef * BigRational::from_integer(gen[i].into());
                }
            }
            acc == linalg::qvec_from_ints(&row.target)
        })
    }
}

#[derive(Clone, Debug)]
pub struct StrictnessEvidence {
    pub ray: CharVec,
    /// A target functional pairing strictly positively with the ray.
    pub functional: CharVec,
    pub pairing: i64,
}

#[derive(Clone, Debug)]
pub struct ContainmentData {
    pub holds: bool,
    pub certificate: FarkasCertificate,
    pub strictness: Vec<StrictnessEvidence>,
    /// A source point violating the target constraints (or a non-central
    /// ray with no strictly positive functional) when the claim fails.
    pub witness: Option<CharVec>,
}

fn integer_point(q: &QVec) -> CharVec {
    let lcm = q.iter().fold(num_bigint::BigInt::from(1), |acc, x| {
        num_integer::Integer::lcm(&acc, x.denom())
    });
    q.iter()
        .map(|x| {
            let scaled = x * BigRational::from_integer(lcm.clone());
            i64::try_from(scaled.to_integer()).expect("witness fits i64")
        })
        .collect()
}

/// Search the source cone for a point with <c, v> <= -1; exact, via
/// Fourier-Motzkin, then scaled to an integer vector.
fn violation_witness(source: &ValuationCone, c: &CharVec) -> Option<CharVec> {
    let zero = BigRational::from_integer(0.into());
    let one = BigRational::from_integer(1.into());
    let mut sys: Vec<(QVec, BigRational)> = Vec::new();
    for s in &source.ineqs {
        sys.push((linalg::qvec_from_ints(s), zero.clone()));
    }
    for e in source.equality_generators() {
        sys.push((linalg::qvec_from_ints(&e), zero.clone()));
        sys.push((linalg::qvec_from_ints(&e).iter().map(|x| -x).collect(), zero.clone()));
    }
    sys.push((
        linalg::qvec_from_ints(c).iter().map(|x| -x).collect(),
        one,
    ));
    linalg::fm_feasible_point(&sys).map(|q| integer_point(&q))
}

/// Certify source inside target. Part (i): every target tie and target
/// inequality is an exact nonnegative combination of source data. Part
/// (ii), run when rays are supplied: each ray gets a target inequality
/// pairing strictly positively, which together with part (i) pushes every
/// non-lineality source point strictly inside. Both cones must sit at
/// threshold 0.
pub fn verify_containment(
    source: &ValuationCone,
    source_rays: Option<&ConeRays>,
    target: &ValuationCone,
) -> ContainmentData {
    assert_eq!(source.threshold, 0);
    assert_eq!(target.threshold, 0);
    let source_ineqs = source.ineqs.clone();
    let source_eqs = source.equality_generators();
    let ineq_q: Vec<QVec> = source_ineqs.iter().map(|c| linalg::qvec_from_ints(c)).collect();
    let eq_q: Vec<QVec> = source_eqs.iter().map(|c| linalg::qvec_from_ints(c)).collect();

    let mut targets: Vec<CharVec> = Vec::new();
    for e in target.equality_generators() {
        targets.push(e.iter().map(|x| -x).collect());
        targets.push(e);
    }
    targets.extend(target.ineqs.iter().cloned());

    let mut rows = Vec::new();
    let mut witness = None;
    for t in &targets {
        match linalg::nonneg_combination(&ineq_q, &eq_q, &linalg::qvec_from_ints(t)) {
            Some((lambda, mu)) => rows.push(FarkasRow {
                target: t.clone(),
                ineq_multipliers: lambda,
                eq_multipliers: mu,
            }),
            None => {
                if witness.is_none() {
                    witness = violation_witness(source, t);
                    debug_assert!(witness.is_some(), "refused row must yield a witness");
                }
            }
        }
    }
    let part_one = witness.is_none() && rows.len() == targets.len();

    let mut strictness = Vec::new();
    let mut part_two = true;
    if let Some(rays) = source_rays {
        for r in &rays.rays {
            match target
                .ineqs
                .iter()
                .map(|c| (c, pair(c, r)))
                .find(|(_, p)| *p > 0)
            {
                Some((c, p)) => strictness.push(StrictnessEvidence {
                    ray: r.clone(),
                    functional: c.clone(),
                    pairing: p,
                }),
                None => {
                    part_two = false;
                    if witness.is_none() {
                        witness = Some(r.clone());
                    }
                }
            }
        }
    }

    ContainmentData {
        holds: part_one && part_two,
        certificate: FarkasCertificate {
            source_ineqs,
            source_eqs,
            rows,
        },
        strictness,
        witness,
    }
}

/// One torus-neighborhood containment instance: for a Case2 representative
/// w, the anti-dominant split cone of theta maps inside the cone of the
/// intersection Levi viewed inside the w-twisted Levi, away from the
/// unit-center part.
#[derive(Clone, Debug)]
pub struct LemmaInstance {
    pub m: usize,
    pub theta: SimpleSubset,
    pub omega: SimpleSubset,
    pub w: WeylElement,
    pub intersection: SimpleSubset,
    pub source: ValuationCone,
    pub target: ValuationCone,
    pub source_rays: ConeRays,
    /// w-images of the omega-blocks: the tie pattern of the w-twisted
    /// Levi's center, used by the strictness oracle.
    pub omega_image_blocks: Vec<Vec<usize>>,
}

pub fn lemma_instance(
    m: usize,
    theta: &SimpleSubset,
    w: &WeylElement,
    omega: &SimpleSubset,
) -> Result<LemmaInstance> {
    if case_classify(w, theta, omega)? == CosetCase::Case1 {
        return Err(Error::ExpectedCase2);
    }
    let intersection = levi_intersection(w, theta, omega)?;
    let source = dominant_part(m, theta, None)?;
    let source_rays = dominant_extreme_rays(m, theta, None)?;
    // target: tied on intersection-blocks, with <w(alpha), v> >= 0 for
    // alpha in omega whose w-image is not an intersection simple root
    let shape = subset_to_partition(m, &intersection);
    let block = shape.block_of();
    let starts = shape.block_starts();
    let classes: Vec<usize> = (0..m).map(|i| starts[block[i]]).collect();
    let ineqs: Vec<CharVec> = omega
        .iter()
        .filter(|&&i| !(w.apply(i + 1) == w.apply(i) + 1 && intersection.contains(&w.apply(i))))
        .map(|&i| root_vec(m, w.apply(i), w.apply(i + 1)))
        .collect();
    let target = ValuationCone::new(m, classes, ineqs, 0);
    let omega_shape = subset_to_partition(m, omega);
    let ostarts = omega_shape.block_starts();
    let omega_image_blocks: Vec<Vec<usize>> = omega_shape
        .parts
        .iter()
        .zip(&ostarts)
        .map(|(part, &s)| (s..s + part).map(|i| w.apply(i)).collect())
        .collect();
    Ok(LemmaInstance {
        m,
        theta: theta.clone(),
        omega: omega.clone(),
        w: w.clone(),
        intersection,
        source,
        target,
        source_rays,
        omega_image_blocks,
    })
}

/// The lemma direction: source strictly inside target, fully certified.
pub fn containment_check(
    m: usize,
    theta: &SimpleSubset,
    w: &WeylElement,
    omega: &SimpleSubset,
) -> Result<(LemmaInstance, ContainmentData)> {
    let inst = lemma_instance(m, theta, w, omega)?;
    let data = verify_containment(&inst.source, Some(&inst.source_rays), &inst.target);
    Ok((inst, data))
}

/// The deliberately swapped direction (target into source); expected to
/// fail with an explicit witness.
pub fn swapped_check(inst: &LemmaInstance) -> ContainmentData {
    verify_containment(&inst.target, None, &inst.source)
}

/// Every second-case instance over all pairs of maximal proper subsets,
/// with its verification data.
pub fn case2_instances(m: usize) -> Result<Vec<(LemmaInstance, ContainmentData)>> {
    let datum = RootDatum::new(m);
    let mut out = Vec::new();
    for kt in 0..m - 1 {
        let theta = datum.maximal_subset(kt);
        for ko in 0..m - 1 {
            let omega = datum.maximal_subset(ko);
            for w in double_coset_reps(m, &theta, &omega) {
                if case_classify(&w, &theta, &omega)? == CosetCase::Case1 {
                    continue;
                }
                out.push(containment_check(m, &theta, &w, &omega)?);
            }
        }
    }
    Ok(out)
}

/// Lattice enumeration oracle over class values in [-bound, bound]:
/// reports every source point that leaves the target cone, plus every
/// non-central source point whose coordinates are constant on all
/// omega-image blocks (the strictness violation).
#[derive(Clone, Debug)]
pub struct BoxScan {
    pub bound: i64,
    pub points_checked: u64,
    pub violations: Vec<CharVec>,
}

impl BoxScan {
    pub fn clean(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn box_scan_oracle(inst: &LemmaInstance, bound: i64) -> BoxScan {
    scan_cones(
        &inst.source,
        &inst.target,
        Some(&inst.omega_image_blocks),
        bound,
        false,
    )
}

/// Same enumeration with the roles swapped, for falsified instances;
/// stops at the first violation (one witness settles the question, and
/// the swapped cone can have many free classes).
pub fn box_scan_swapped(inst: &LemmaInstance, bound: i64) -> BoxScan {
    scan_cones(&inst.target, &inst.source, None, bound, true)
}

fn scan_cones(
    source: &ValuationCone,
    target: &ValuationCone,
    strict_blocks: Option<&[Vec<usize>]>,
    bound: i64,
    stop_at_first: bool,
) -> BoxScan {
    let reps = source.class_reps();
    let mut v = vec![0i64; source.m];
    let mut assignment = vec![-bound; reps.len()];
    let mut points_checked = 0u64;
    let mut violations = Vec::new();
    loop {
        for i in 0..source.m {
            let class = source.classes[i];
            v[i] = assignment[reps.iter().position(|&r| r == class).unwrap()];
        }
        if source.contains(&v) {
            points_checked += 1;
            let mut violated = !target.contains(&v);
            if let Some(blocks) = strict_blocks {
                let central = v.iter().all(|&x| x == v[0]);
                let in_twisted_center = blocks
                    .iter()
                    .all(|b| b.iter().all(|&i| v[i] == v[b[0]]));
                if !central && in_twisted_center {
                    violated = true;
                }
            }
            if violated {
                violations.push(v.clone());
                if stop_at_first {
                    return BoxScan {
                        bound,
                        points_checked,
                        violations,
                    };
                }
            }
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == assignment.len() {
                return BoxScan {
                    bound,
                    points_checked,
                    violations,
                };
            }
            if assignment[k] < bound {
                assignment[k] += 1;
                break;
            }
            assignment[k] = -bound;
            k += 1;
        }
    }
}

/// Coordinate transport: the valuation-level effect of conjugating the
/// torus data by any element normalizing it factors through a coordinate
/// permutation (central elements act trivially), so the transported cone
/// is the relabeled one and verdicts are permutation-invariant.
pub fn conjugation_transport(w: &WeylElement, cone: &ValuationCone) -> ValuationCone {
    cone.relabel(w)
}

/// Relabel a whole instance; feeding the result to `verify_containment`
/// and the box scan must reproduce the original verdicts.
pub fn transport_instance(sigma: &WeylElement, inst: &LemmaInstance) -> LemmaInstance {
    LemmaInstance {
        m: inst.m,
        theta: inst.theta.clone(),
        omega: inst.omega.clone(),
        w: inst.w.clone(),
        intersection: inst.intersection.clone(),
        source: inst.source.relabel(sigma),
        target: inst.target.relabel(sigma),
        source_rays: inst.source_rays.relabel(sigma),
        omega_image_blocks: inst
            .omega_image_blocks
            .iter()
            .map(|b| b.iter().map(|&i| sigma.apply(i)).collect())
            .collect(),
    }
}
