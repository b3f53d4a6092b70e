//! Verification suites and the JSON report they assemble.
//!
//! Every check carries a stable identifier from [`LEMMA_INDEX`]; the
//! record constructor refuses identifiers that are not registered, so the
//! documented index and the emitted reports cannot drift apart. Reports
//! are deterministic for a fixed config and seed: sampling goes through a
//! seeded ChaCha stream per suite, suites are sorted by name, records by
//! identifier then instance, and no timestamps are recorded.

use crate::certify::{
    case2_exponents, certify_rds, CertificateEntry, EntryEvidence, ExponentVector,
    FormalDiscreteSeries, FormalSupercuspidal, InducedDatum, RdsCertificate,
};
use crate::cone::{
    box_scan_oracle, box_scan_swapped, containment_check, swapped_check, transport_instance,
    BoxScan, ContainmentData, FarkasCertificate, LemmaInstance,
};
use crate::error::{Error, Result};
use crate::mat::{
    antidiag_ones, diag_f, sample_invertible, sample_quad_ext, sample_unitary, EMatrix,
    HermitianMatrix,
};
use crate::quad::{rat_from_str, rat_int, rat_to_str, FieldConfig, NormClass, QuadExt};
use crate::root::{
    case_classify, double_coset_reps, double_coset_reps_exhaustive, canonical_rep,
    intersection_matches_refinement, is_minimal_rep, subset_to_partition, CosetCase, RootDatum,
    SimpleSubset, WeylElement,
};
use crate::theta::{
    classify_parabolic, gamma_matrix, gamma_product_expected, is_theta_base, negation_action,
    restricted_roots, support_pattern_stable, ThetaInvolution,
};
use itertools::Itertools;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};

/// Every check identifier the suites may emit, with its one-line meaning.
/// The documentation index lists exactly these; `record` panics on ids
/// missing here, and a test pins the README against the registry.
pub const LEMMA_INDEX: &[(&str, &str)] = &[
    (
        "gamma-diagonal-identity",
        "the symmetrizing matrices multiply out to the signed pair diagonal, exactly",
    ),
    (
        "involution-order-two",
        "each Hermitian-form twist of conjugate-inverse-transpose squares to the identity",
    ),
    (
        "fixed-points-unitary",
        "the fixed points of the twisted involution are exactly the form's unitary group",
    ),
    (
        "balanced-parabolic-classification",
        "a block parabolic is involution-stable exactly when its shape is balanced, elliptic exactly for two equal halves",
    ),
    (
        "theta-base-negative-roots",
        "the involution negates every root of the small torus and fixes none",
    ),
    (
        "restricted-root-data",
        "restriction to the split part keeps the base independent and kills nothing",
    ),
    (
        "mirror-coset-count",
        "the mirror Levi meets itself in exactly n+1 double cosets",
    ),
    (
        "mirror-case1-pair",
        "exactly two mirror cosets carry the full Levi: the identity and the block swap",
    ),
    (
        "coset-exhaustive-oracle",
        "the traversal's coset representatives match a brute-force scan of the symmetric group",
    ),
    (
        "coset-self-consistency",
        "representatives are minimal, pairwise distinct, and absorb random elements under reduction",
    ),
    (
        "levi-intersection-refinement",
        "the intersection Levi equals the common refinement of the two block patterns",
    ),
    (
        "split-cone-containment",
        "the dominant split cone lands strictly inside the twisted center's cone, with exact multiplier proofs",
    ),
    (
        "containment-box-oracle",
        "lattice points in a box confirm the cone containment and its strictness",
    ),
    (
        "falsified-containment-witness",
        "the reversed containment fails with an explicit separating point",
    ),
    (
        "transport-equivariance",
        "relabeling coordinates by a permutation preserves containment verdicts",
    ),
    (
        "orbit-two-classes",
        "random Hermitian forms realize exactly two determinant classes",
    ),
    (
        "orbit-invariant-constant",
        "the determinant class is constant along congruence orbits",
    ),
    (
        "hilbert-residue-oracle",
        "the closed-form Hilbert symbol agrees with a residue solution search",
    ),
    (
        "rds-certification",
        "the square-integrability certifier discharges every parabolic entry for the configured representation",
    ),
    (
        "exponent-central-conservation",
        "every second-case exponent vector sums to zero when the central twist vanishes",
    ),
];

pub fn lemma_registered(id: &str) -> bool {
    LEMMA_INDEX.iter().any(|(name, _)| *name == id)
}

/// Suite names in report order.
pub const SUITE_NAMES: &[&str] = &["certify", "cones", "cosets", "orbits", "structure"];

fn default_p() -> u64 {
    5
}
fn default_d() -> String {
    "2".into()
}
fn default_rank() -> usize {
    4
}
fn default_suites() -> Vec<String> {
    SUITE_NAMES.iter().map(|s| s.to_string()).collect()
}
fn default_tau() -> String {
    "steinberg:k=2,rho=chi1".into()
}
fn default_sigma_pairs() -> String {
    "chi1:chi2".into()
}

/// Full run configuration; the JSON config file deserializes into this,
/// with every field optional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub p: u64,
    pub d: String,
    pub rank: usize,
    pub suites: Vec<String>,
    pub seed: u64,
    pub tau: String,
    pub sigma_pairs: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            p: default_p(),
            d: default_d(),
            rank: default_rank(),
            suites: default_suites(),
            seed: 0,
            tau: default_tau(),
            sigma_pairs: default_sigma_pairs(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<RunConfig> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("bad config file: {e}")))
    }

    pub fn field(&self) -> Result<FieldConfig> {
        FieldConfig::new(self.p, rat_from_str(&self.d)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.field()?;
        if self.rank < 2 {
            return Err(Error::Config(format!(
                "rank must be at least 2, got {}",
                self.rank
            )));
        }
        if self.rank > 10 {
            return Err(Error::Config(format!(
                "rank {} is beyond the exhaustive-check scale (max 10)",
                self.rank
            )));
        }
        for name in &self.suites {
            if !SUITE_NAMES.contains(&name.as_str()) {
                return Err(Error::Config(format!(
                    "unknown suite '{name}' (expected one of {SUITE_NAMES:?})"
                )));
            }
        }
        if self.suites.is_empty() {
            return Err(Error::Config("no suites requested".into()));
        }
        if self.suites.iter().any(|s| s == "certify") {
            if self.rank % 2 != 0 || self.rank < 4 {
                return Err(Error::Config(format!(
                    "certify needs an even rank of at least 4, got {}",
                    self.rank
                )));
            }
            build_datum(self.rank / 2, &self.tau, &self.sigma_pairs)?;
        }
        Ok(())
    }
}

/// Expand a `--suites` flag value: comma-separated names, `all` for every
/// suite. Result is sorted and de-duplicated.
pub fn parse_suites(s: &str) -> Result<Vec<String>> {
    let mut out: BTreeSet<String> = BTreeSet::new();
    for part in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if part == "all" {
            out.extend(SUITE_NAMES.iter().map(|n| n.to_string()));
        } else if SUITE_NAMES.contains(&part) {
            out.insert(part.to_string());
        } else {
            return Err(Error::Config(format!(
                "unknown suite '{part}' (expected one of {SUITE_NAMES:?} or 'all')"
            )));
        }
    }
    if out.is_empty() {
        return Err(Error::Config("no suites requested".into()));
    }
    Ok(out.into_iter().collect())
}

/// Inducing-factor spec: `steinberg:k=2,rho=chi1`. `k` counts the segment
/// twists (1 means a bare supercuspidal), `rho` names the building block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauSpec {
    pub k: usize,
    pub rho_label: String,
}

fn label_ok(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn parse_tau(s: &str) -> Result<TauSpec> {
    let body = s.strip_prefix("steinberg:").ok_or_else(|| {
        Error::Config(format!(
            "inducing factor must look like 'steinberg:k=2,rho=chi1', got '{s}'"
        ))
    })?;
    let mut k: Option<usize> = None;
    let mut rho: Option<String> = None;
    for item in body.split(',') {
        let (key, val) = item
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value in tau spec, got '{item}'")))?;
        match key.trim() {
            "k" => {
                k = Some(val.trim().parse().map_err(|_| {
                    Error::Config(format!("k must be a positive integer, got '{val}'"))
                })?)
            }
            "rho" => rho = Some(val.trim().to_string()),
            other => {
                return Err(Error::Config(format!("unknown tau key '{other}'")));
            }
        }
    }
    let k = k.ok_or_else(|| Error::Config("tau spec is missing k".into()))?;
    let rho_label = rho.ok_or_else(|| Error::Config("tau spec is missing rho".into()))?;
    if k == 0 {
        return Err(Error::Config("k must be positive".into()));
    }
    if !label_ok(&rho_label) {
        return Err(Error::Config(format!(
            "rho label must be alphanumeric, got '{rho_label}'"
        )));
    }
    Ok(TauSpec { k, rho_label })
}

/// Galois-twist table for supercuspidal labels: `a:b` pairs `a` with `b`
/// in both directions, a bare `a` pins `a` as invariant, and any label
/// not listed is invariant by default.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SigmaPairing {
    map: BTreeMap<String, String>,
}

impl SigmaPairing {
    pub fn parse(s: &str) -> Result<SigmaPairing> {
        let mut map: BTreeMap<String, String> = BTreeMap::new();
        let mut put = |a: &str, b: &str| -> Result<()> {
            if !label_ok(a) || !label_ok(b) {
                return Err(Error::Config(format!(
                    "labels must be alphanumeric, got '{a}:{b}'"
                )));
            }
            match map.get(a) {
                Some(prev) if prev != b => Err(Error::Config(format!(
                    "label '{a}' is paired with both '{prev}' and '{b}'"
                ))),
                _ => {
                    map.insert(a.into(), b.into());
                    Ok(())
                }
            }
        };
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part.split_once(':') {
                Some((a, b)) => {
                    put(a.trim(), b.trim())?;
                    put(b.trim(), a.trim())?;
                }
                None => put(part, part)?,
            }
        }
        Ok(SigmaPairing { map })
    }

    pub fn twist_of(&self, label: &str) -> String {
        self.map
            .get(label)
            .cloned()
            .unwrap_or_else(|| label.to_string())
    }
}

/// Assemble the induced-representation datum for GL_2n from the textual
/// specs: tau gives the segment shape, the pairing gives the Galois twist.
pub fn build_datum(n: usize, tau: &str, sigma_pairs: &str) -> Result<InducedDatum> {
    let spec = parse_tau(tau)?;
    let pairing = SigmaPairing::parse(sigma_pairs)?;
    if n == 0 || n % spec.k != 0 {
        return Err(Error::Config(format!(
            "segment count k={} must divide the factor size n={n}",
            spec.k
        )));
    }
    let rho = FormalSupercuspidal::new(
        &spec.rho_label,
        n / spec.k,
        &pairing.twist_of(&spec.rho_label),
    );
    InducedDatum::new(n, FormalDiscreteSeries::new(spec.k, rho)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub lemma: String,
    pub instance: String,
    pub status: String,
    pub evidence: Value,
}

impl CheckRecord {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

fn record(lemma: &str, instance: String, pass: bool, evidence: Value) -> CheckRecord {
    assert!(lemma_registered(lemma), "unregistered check id '{lemma}'");
    CheckRecord {
        lemma: lemma.into(),
        instance,
        status: if pass { "pass" } else { "fail" }.into(),
        evidence,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub records: Vec<CheckRecord>,
}

impl SuiteReport {
    fn new(name: &str, mut records: Vec<CheckRecord>) -> SuiteReport {
        records.sort_by(|a, b| (&a.lemma, &a.instance).cmp(&(&b.lemma, &b.instance)));
        SuiteReport {
            name: name.into(),
            records,
        }
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(CheckRecord::passed)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Aggregate {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: String,
    pub config: RunConfig,
    pub suites: Vec<SuiteReport>,
    pub aggregate: Aggregate,
    pub pass: bool,
}

pub fn report_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// One human line per suite plus a verdict, for the terminal.
pub fn report_summary(report: &Report) -> String {
    let mut out = String::new();
    for suite in &report.suites {
        let passed = suite.records.iter().filter(|r| r.passed()).count();
        out.push_str(&format!(
            "suite {:<9} {:>3}/{:<3} checks pass\n",
            suite.name,
            passed,
            suite.records.len()
        ));
    }
    out.push_str(&format!(
        "total {}/{} — {}\n",
        report.aggregate.passed,
        report.aggregate.total,
        if report.pass { "PASS" } else { "FAIL" }
    ));
    out
}

/// Run the configured suites concurrently and assemble the deterministic
/// report. Suite order in the output is alphabetical regardless of spawn
/// or completion order.
pub fn run(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let field = config.field()?;
    let mut wanted = config.suites.clone();
    wanted.sort();
    wanted.dedup();
    let outcomes: Vec<Result<SuiteReport>> = std::thread::scope(|scope| {
        let handles: Vec<_> = wanted
            .iter()
            .map(|name| {
                let field = &field;
                scope.spawn(move || suite_by_name(name, config, field))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("suite thread panicked"))
            .collect()
    });
    let mut suites = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    suites.sort_by(|a, b| a.name.cmp(&b.name));
    let total: usize = suites.iter().map(|s| s.records.len()).sum();
    let passed: usize = suites
        .iter()
        .map(|s| s.records.iter().filter(|r| r.passed()).count())
        .sum();
    let aggregate = Aggregate {
        total,
        passed,
        failed: total - passed,
    };
    let pass = aggregate.failed == 0;
    Ok(Report {
        tool: format!("relcass {}", env!("CARGO_PKG_VERSION")),
        config: config.clone(),
        suites,
        aggregate,
        pass,
    })
}

fn suite_by_name(name: &str, config: &RunConfig, field: &FieldConfig) -> Result<SuiteReport> {
    match name {
        "structure" => structure_suite(field, config.rank, config.seed, 60),
        "cosets" => cosets_suite(config.rank, config.seed),
        "cones" => cones_suite(config.rank, config.seed, 3, 5),
        "orbits" => orbits_suite(field, config.rank, config.seed, 200, 100),
        "certify" => certify_suite(config.rank, &config.tau, &config.sigma_pairs),
        other => Err(Error::Config(format!("unknown suite '{other}'"))),
    }
}

fn suite_rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(salt))
}

fn maximal_subsets(m: usize) -> Vec<(usize, SimpleSubset)> {
    let datum = RootDatum::new(m);
    (0..m - 1).map(|k| (k, datum.maximal_subset(k))).collect()
}

/// Gamma identities, involution laws, fixed points, parabolic
/// classification, and root-action checks on the configured field.
pub fn structure_suite(
    field: &FieldConfig,
    rank: usize,
    seed: u64,
    samples: usize,
) -> Result<SuiteReport> {
    let mut rng = suite_rng(seed, 1);
    let mut records = Vec::new();
    let m = rank;

    for r in 1..=8usize {
        let g = gamma_matrix(r);
        let prod = g
            .conj_transpose()
            .mul(&antidiag_ones(r), field)
            .mul(&g, field);
        let pass = prod == gamma_product_expected(r);
        let half = r / 2;
        let mut diagonal: Vec<i64> = vec![2; half];
        if r % 2 == 1 {
            diagonal.push(1);
        }
        diagonal.extend(std::iter::repeat_n(-2, half));
        records.push(record(
            "gamma-diagonal-identity",
            format!("r={r}"),
            pass,
            json!({ "diagonal": diagonal }),
        ));
    }

    let nonnorm = field.nonnorm_representative();
    let mut diag_entries = vec![rat_int(1); m];
    diag_entries[0] = nonnorm;
    let forms: Vec<(&str, EMatrix)> = vec![
        ("antidiagonal", antidiag_ones(m)),
        ("diagonal-nonnorm", diag_f(&diag_entries)),
    ];
    for (name, x) in &forms {
        let theta = ThetaInvolution::new(HermitianMatrix::new(x.clone(), field)?);
        let mut involution_ok = theta.apply(&EMatrix::identity(m), field)? == EMatrix::identity(m);
        let mut fixed_ok = true;
        for _ in 0..samples {
            let g = sample_invertible(field, m, &mut rng);
            involution_ok &= theta.apply(&theta.apply(&g, field)?, field)? == g;
            let gram = g.conj_transpose().mul(x, field).mul(&g, field) == *x;
            fixed_ok &= theta.is_fixed(&g, field)? == gram;
        }
        let unitary_trials = samples / 4 + 1;
        for _ in 0..unitary_trials {
            let u = sample_unitary(field, theta.form(), &mut rng)?;
            fixed_ok &= theta.is_fixed(&u, field)?;
        }
        records.push(record(
            "involution-order-two",
            format!("m={m} form={name}"),
            involution_ok,
            json!({ "samples": samples, "seed": seed }),
        ));
        records.push(record(
            "fixed-points-unitary",
            format!("m={m} form={name}"),
            fixed_ok,
            json!({ "generic_samples": samples, "unitary_samples": unitary_trials, "seed": seed }),
        ));
    }

    let mut partitions = 0usize;
    let mut stable = 0usize;
    let mut elliptic = 0usize;
    let mut classify_ok = true;
    for subset in (0..m - 1).powerset() {
        let theta: SimpleSubset = subset.into_iter().collect();
        let shape = subset_to_partition(m, &theta);
        let class = classify_parabolic(&shape);
        partitions += 1;
        stable += class.theta_stable as usize;
        elliptic += class.theta_elliptic_levi as usize;
        classify_ok &= class.theta_stable == support_pattern_stable(&shape);
        classify_ok &= class.theta_stable == shape.is_balanced();
        let two_halves = m % 2 == 0 && shape.parts == vec![m / 2, m / 2];
        classify_ok &= class.theta_elliptic_levi == two_halves;
    }
    records.push(record(
        "balanced-parabolic-classification",
        format!("m={m}"),
        classify_ok,
        json!({ "partitions": partitions, "stable": stable, "elliptic": elliptic }),
    ));

    let datum = RootDatum::new(m);
    let act = negation_action(m);
    let roots = datum.roots();
    let negated = roots
        .iter()
        .all(|a| act.act(a).iter().zip(a).all(|(x, y)| *x == -y));
    let fixed_roots = roots.iter().filter(|a| act.act(a) == **a).count();
    let base_ok = is_theta_base(m, &datum.simple_roots(), &act)?;
    records.push(record(
        "theta-base-negative-roots",
        format!("m={m}"),
        negated && fixed_roots == 0 && base_ok,
        json!({ "roots": roots.len(), "fixed_roots": fixed_roots }),
    ));

    let restricted = restricted_roots(m, &datum.simple_roots(), &act)?;
    let pass = restricted.base_image_independent
        && restricted.fixed_space_dim == 0
        && restricted.base_image.len() == m - 1
        && restricted.roots.len() == m * (m - 1);
    records.push(record(
        "restricted-root-data",
        format!("m={m}"),
        pass,
        json!({
            "distinct_roots": restricted.roots.len(),
            "base_image": restricted.base_image.len(),
            "fixed_space_dim": restricted.fixed_space_dim,
        }),
    ));

    Ok(SuiteReport::new("structure", records))
}

/// Double-coset representative checks: brute-force oracle at small sizes,
/// self-consistency at the configured rank, intersection refinement, and
/// the mirror-Levi counting facts.
pub fn cosets_suite(rank: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = suite_rng(seed, 2);
    let mut records = Vec::new();
    let m = rank;

    for mm in 2..=m.min(6) {
        let mut pairs = 0usize;
        let mut reps_checked = 0usize;
        let mut agree = true;
        for (_, theta) in maximal_subsets(mm) {
            for (_, omega) in maximal_subsets(mm) {
                let fast: Vec<Vec<usize>> = double_coset_reps(mm, &theta, &omega)
                    .iter()
                    .map(|w| w.perm().to_vec())
                    .sorted()
                    .collect();
                let slow: Vec<Vec<usize>> = double_coset_reps_exhaustive(mm, &theta, &omega)
                    .iter()
                    .map(|w| w.perm().to_vec())
                    .sorted()
                    .collect();
                agree &= fast == slow;
                pairs += 1;
                reps_checked += fast.len();
            }
        }
        records.push(record(
            "coset-exhaustive-oracle",
            format!("m={mm}"),
            agree,
            json!({ "pairs": pairs, "reps_checked": reps_checked }),
        ));
    }

    let mut pairs = 0usize;
    let mut reps_total = 0usize;
    let mut sampled = 0usize;
    let mut consistent = true;
    let mut refine_ok = true;
    let mut refine_reps = 0usize;
    for (_, theta) in maximal_subsets(m) {
        for (_, omega) in maximal_subsets(m) {
            let reps = double_coset_reps(m, &theta, &omega);
            pairs += 1;
            reps_total += reps.len();
            let distinct: BTreeSet<Vec<usize>> =
                reps.iter().map(|w| w.perm().to_vec()).collect();
            consistent &= distinct.len() == reps.len();
            for w in &reps {
                consistent &= is_minimal_rep(w, &theta, &omega);
                consistent &= canonical_rep(w, &theta, &omega) == *w;
                refine_ok &= intersection_matches_refinement(m, w, &theta, &omega)?;
                refine_reps += 1;
            }
            for _ in 0..20 {
                let w = random_permutation(m, &mut rng);
                let reduced = canonical_rep(&w, &theta, &omega);
                consistent &= distinct.contains(reduced.perm());
                sampled += 1;
            }
        }
    }
    records.push(record(
        "coset-self-consistency",
        format!("m={m}"),
        consistent,
        json!({ "pairs": pairs, "reps_total": reps_total, "sampled_reductions": sampled, "seed": seed }),
    ));
    records.push(record(
        "levi-intersection-refinement",
        format!("m={m}"),
        refine_ok,
        json!({ "pairs": pairs, "reps_checked": refine_reps }),
    ));

    if m % 2 == 0 {
        let n = m / 2;
        let mirror: SimpleSubset = (0..m - 1).filter(|&i| i != n - 1).collect();
        let reps = double_coset_reps(m, &mirror, &mirror);
        records.push(record(
            "mirror-coset-count",
            format!("m={m}"),
            reps.len() == n + 1,
            json!({ "count": reps.len(), "expected": n + 1 }),
        ));
        let case1: Vec<String> = reps
            .iter()
            .filter(|w| case_classify(w, &mirror, &mirror).unwrap() == CosetCase::Case1)
            .map(|w| w.one_line())
            .collect();
        let expected: BTreeSet<String> = [
            WeylElement::identity(m).one_line(),
            WeylElement::block_swap(n).one_line(),
        ]
        .into();
        let got: BTreeSet<String> = case1.iter().cloned().collect();
        records.push(record(
            "mirror-case1-pair",
            format!("m={m}"),
            case1.len() == 2 && got == expected,
            json!({ "case1_reps": case1 }),
        ));
    }

    Ok(SuiteReport::new("cosets", records))
}

fn random_permutation(m: usize, rng: &mut impl Rng) -> WeylElement {
    let mut v: Vec<usize> = (0..m).collect();
    for i in (1..m).rev() {
        let j = rng.random_range(0..=i);
        v.swap(i, j);
    }
    WeylElement::new(v)
}

fn subset_one_based(s: &SimpleSubset) -> Vec<usize> {
    s.iter().map(|&i| i + 1).collect()
}

/// Cone containments with exact certificates, box-scan oracles, the
/// deliberately reversed direction, and transport under relabelings.
pub fn cones_suite(
    rank: usize,
    seed: u64,
    bound: i64,
    transport_perms: usize,
) -> Result<SuiteReport> {
    let mut rng = suite_rng(seed, 3);
    let mut records = Vec::new();
    let m = rank;

    for (kt, theta) in maximal_subsets(m) {
        for (ko, omega) in maximal_subsets(m) {
            let mut first_case2: Option<LemmaInstance> = None;
            for w in double_coset_reps(m, &theta, &omega) {
                if case_classify(&w, &theta, &omega)? == CosetCase::Case1 {
                    continue;
                }
                let (inst, data) = containment_check(m, &theta, &w, &omega)?;
                let instance =
                    format!("m={m} t=a{} o=a{} w={}", kt + 1, ko + 1, w.one_line());
                records.push(record(
                    "split-cone-containment",
                    instance.clone(),
                    data.holds && data.certificate.validate() && data.witness.is_none(),
                    json!({
                        "farkas_rows": data.certificate.rows.len(),
                        "rays": inst.source_rays.rays.len(),
                        "strictness": data.strictness.len(),
                    }),
                ));
                let scan = box_scan_oracle(&inst, bound);
                records.push(record(
                    "containment-box-oracle",
                    instance.clone(),
                    scan.clean() && scan.points_checked > 0,
                    json!({ "bound": bound, "points_checked": scan.points_checked }),
                ));
                let swapped = swapped_check(&inst);
                let witness_ok = match &swapped.witness {
                    Some(v) => inst.target.contains(v) && !inst.source.contains(v),
                    None => false,
                };
                let mut scan_consistent = true;
                if let Some(v) = &swapped.witness {
                    if v.iter().all(|x| x.abs() <= bound) {
                        scan_consistent = !box_scan_swapped(&inst, bound).clean();
                    }
                }
                records.push(record(
                    "falsified-containment-witness",
                    instance,
                    !swapped.holds && witness_ok && scan_consistent,
                    json!({ "witness": swapped.witness }),
                ));
                if first_case2.is_none() {
                    first_case2 = Some(inst);
                }
            }
            if let Some(inst) = first_case2 {
                let mut invariant = true;
                for _ in 0..transport_perms {
                    let sigma = random_permutation(m, &mut rng);
                    let moved = transport_instance(&sigma, &inst);
                    let data = crate::cone::verify_containment(
                        &moved.source,
                        Some(&moved.source_rays),
                        &moved.target,
                    );
                    invariant &= data.holds && data.certificate.validate();
                    let swapped =
                        crate::cone::verify_containment(&moved.target, None, &moved.source);
                    invariant &= !swapped.holds;
                }
                records.push(record(
                    "transport-equivariance",
                    format!("m={m} t=a{} o=a{} w={}", kt + 1, ko + 1, inst.w.one_line()),
                    invariant,
                    json!({ "perms": transport_perms, "seed": seed }),
                ));
            }
        }
    }

    Ok(SuiteReport::new("cones", records))
}

fn small_rat(rng: &mut impl Rng) -> BigRational {
    rat_int(rng.random_range(-4..=4))
}

/// Random invertible Hermitian matrix with small entries.
pub fn sample_hermitian(
    field: &FieldConfig,
    n: usize,
    rng: &mut impl Rng,
) -> Result<HermitianMatrix> {
    loop {
        let mut upper = vec![vec![QuadExt::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                upper[i][j] = if i == j {
                    QuadExt::from_rat(small_rat(rng))
                } else {
                    sample_quad_ext(rng)
                };
            }
        }
        let m = EMatrix::from_fn(n, |i, j| {
            if i <= j {
                upper[i][j].clone()
            } else {
                upper[j][i].conj()
            }
        });
        if m.det(field).is_zero() {
            continue;
        }
        return HermitianMatrix::new(m, field);
    }
}

fn sample_nonzero_rat(field: &FieldConfig, rng: &mut impl Rng) -> BigRational {
    let num: i64 = loop {
        let n = rng.random_range(-20..=20);
        if n != 0 {
            break n;
        }
    };
    let den: i64 = rng.random_range(1..=12);
    let scale = BigRational::from_integer((field.p() as i64).pow(rng.random_range(0..=2)).into());
    BigRational::new(num.into(), den.into()) * scale
}

/// Hermitian-form class statistics and the Hilbert symbol oracle.
pub fn orbits_suite(
    field: &FieldConfig,
    rank: usize,
    seed: u64,
    samples: usize,
    pairs: usize,
) -> Result<SuiteReport> {
    let mut rng = suite_rng(seed, 4);
    let mut records = Vec::new();
    let m = rank;

    let mut norm = 0usize;
    let mut non_norm = 0usize;
    for _ in 0..samples {
        match sample_hermitian(field, m, &mut rng)?.orbit_invariant(field) {
            NormClass::Norm => norm += 1,
            NormClass::NonNorm => non_norm += 1,
        }
    }
    records.push(record(
        "orbit-two-classes",
        format!("m={m}"),
        norm > 0 && non_norm > 0,
        json!({ "samples": samples, "norm": norm, "non_norm": non_norm, "seed": seed }),
    ));

    let bases = 6usize;
    let moves = 8usize;
    let mut constant = true;
    for _ in 0..bases {
        let x = sample_hermitian(field, m, &mut rng)?;
        let class = x.orbit_invariant(field);
        for _ in 0..moves {
            let g = sample_invertible(field, m, &mut rng);
            constant &= x.act(&g, field)?.orbit_invariant(field) == class;
        }
    }
    records.push(record(
        "orbit-invariant-constant",
        format!("m={m}"),
        constant,
        json!({ "bases": bases, "moves_per_base": moves, "seed": seed }),
    ));

    let mut agree = true;
    for _ in 0..pairs {
        let a = sample_nonzero_rat(field, &mut rng);
        let b = sample_nonzero_rat(field, &mut rng);
        agree &= field.hilbert_symbol(&a, &b)? == field.hilbert_symbol_oracle(&a, &b)?;
    }
    records.push(record(
        "hilbert-residue-oracle",
        format!("p={}", field.p()),
        agree,
        json!({ "pairs": pairs, "seed": seed }),
    ));

    Ok(SuiteReport::new("orbits", records))
}

/// Run the square-integrability certifier on the configured inducing
/// datum. The certification record fails when the route does not certify,
/// so the process exit code surfaces "not certified" outcomes.
pub fn certify_suite(rank: usize, tau: &str, sigma_pairs: &str) -> Result<SuiteReport> {
    let mut records = Vec::new();
    if rank % 2 != 0 || rank < 4 {
        return Err(Error::Config(format!(
            "certify needs an even rank of at least 4, got {rank}"
        )));
    }
    let n = rank / 2;
    let datum = build_datum(n, tau, sigma_pairs)?;
    let cert = certify_rds(&datum)?;
    let entries: Vec<Value> = cert.entries.iter().map(entry_summary_json).collect();
    records.push(record(
        "rds-certification",
        format!("n={n} tau={}", cert.tau_prime_label),
        cert.rds,
        json!({
            "rds": cert.rds,
            "relatively_supercuspidal": cert.relatively_supercuspidal,
            "verdict": cert.verdict,
            "entries": entries,
        }),
    ));

    let m = datum.m();
    let omega = datum.mirror_subset();
    let mut vectors = 0usize;
    let mut all_zero = true;
    for (_, theta) in maximal_subsets(m) {
        for w in double_coset_reps(m, &theta, &omega) {
            if case_classify(&w, &theta, &omega)? == CosetCase::Case1 {
                continue;
            }
            for exp in case2_exponents(&datum, &theta, &w, &omega)? {
                all_zero &= exp.central_sum().is_zero();
                vectors += 1;
            }
        }
    }
    records.push(record(
        "exponent-central-conservation",
        format!("n={n}"),
        all_zero,
        json!({ "vectors": vectors }),
    ));

    Ok(SuiteReport::new("certify", records))
}

fn rat_vec_json(v: &[BigRational]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(rat_to_str(x))).collect())
}

fn exponent_json(e: &ExponentVector) -> Value {
    rat_vec_json(&e.coords)
}

fn evidence_json(e: &EntryEvidence) -> Value {
    match e {
        EntryEvidence::LabelMismatch { first, second } => json!({
            "kind": "label-mismatch", "first": first, "second": second,
        }),
        EntryEvidence::GaloisInvariant { label } => json!({
            "kind": "galois-invariant", "label": label,
        }),
        EntryEvidence::RayDecay { exponent, pairings } => json!({
            "kind": "ray-decay",
            "exponent": exponent_json(exponent),
            "pairings": pairings.iter().map(|(ray, v)| json!({
                "ray": ray, "value": rat_to_str(v),
            })).collect::<Vec<_>>(),
        }),
        EntryEvidence::JacquetVanishes { reason } => json!({
            "kind": "jacquet-vanishes", "reason": reason,
        }),
        EntryEvidence::DecayFailure { exponent, ray, pairing } => json!({
            "kind": "decay-failure",
            "exponent": exponent_json(exponent),
            "ray": ray,
            "pairing": rat_to_str(pairing),
        }),
    }
}

fn entry_summary_json(entry: &CertificateEntry) -> Value {
    json!({
        "parabolic_removed": entry.theta_removed + 1,
        "w": entry.w.one_line(),
        "case": entry.case,
        "verdict": entry.verdict,
    })
}

fn entry_json(entry: &CertificateEntry) -> Value {
    json!({
        "parabolic_removed": entry.theta_removed + 1,
        "w": entry.w.one_line(),
        "case": entry.case,
        "verdict": entry.verdict,
        "evidence": evidence_json(&entry.evidence),
    })
}

/// Full certificate as JSON, rationals rendered as `num/den` strings.
pub fn certificate_json(cert: &RdsCertificate) -> Value {
    json!({
        "n": cert.n,
        "inducing_factor": cert.tau_prime_label,
        "regular": cert.regular,
        "rds": cert.rds,
        "relatively_supercuspidal": cert.relatively_supercuspidal,
        "verdict": cert.verdict,
        "entries": cert.entries.iter().map(entry_json).collect::<Vec<_>>(),
        "notes": cert.notes,
    })
}

fn farkas_json(cert: &FarkasCertificate) -> Value {
    json!({
        "source_inequalities": cert.source_ineqs,
        "source_equalities": cert.source_eqs,
        "rows": cert.rows.iter().map(|row| json!({
            "target": row.target,
            "inequality_multipliers": rat_vec_json(&row.ineq_multipliers),
            "equality_multipliers": rat_vec_json(&row.eq_multipliers),
        })).collect::<Vec<_>>(),
        "validated": cert.validate(),
    })
}

fn containment_json(data: &ContainmentData) -> Value {
    json!({
        "holds": data.holds,
        "farkas": farkas_json(&data.certificate),
        "strictness": data.strictness.iter().map(|s| json!({
            "ray": s.ray, "functional": s.functional, "pairing": s.pairing,
        })).collect::<Vec<_>>(),
        "witness": data.witness,
    })
}

fn scan_json(scan: &BoxScan) -> Value {
    json!({
        "bound": scan.bound,
        "points_checked": scan.points_checked,
        "clean": scan.clean(),
        "violations": scan.violations.len(),
    })
}

/// Per-instance JSON for the cones subcommand: the pair data, the
/// verdict, the full certificate, and the lattice oracle's agreement.
pub fn cone_pair_json(inst: &LemmaInstance, data: &ContainmentData, scan: &BoxScan) -> Value {
    json!({
        "m": inst.m,
        "theta": subset_one_based(&inst.theta),
        "omega": subset_one_based(&inst.omega),
        "w": inst.w.one_line(),
        "intersection": subset_one_based(&inst.intersection),
        "verdict": if data.holds { "contained-strictly" } else { "falsified" },
        "certificate": containment_json(data),
        "oracle_agreement": scan_json(scan),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_ids_are_unique_and_kebab() {
        let mut seen = BTreeSet::new();
        for (id, desc) in LEMMA_INDEX {
            assert!(seen.insert(id), "duplicate id {id}");
            assert!(
                id.chars()
                    .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '-'),
                "bad id {id}"
            );
            assert!(!desc.is_empty());
        }
    }

    #[test]
    #[should_panic(expected = "unregistered")]
    fn unregistered_ids_are_refused() {
        record("no-such-check", "x".into(), true, json!({}));
    }

    #[test]
    fn tau_parser_round_trips() {
        let spec = parse_tau("steinberg:k=2,rho=chi1").unwrap();
        assert_eq!(spec.k, 2);
        assert_eq!(spec.rho_label, "chi1");
        let spec = parse_tau("steinberg:rho=eta,k=1").unwrap();
        assert_eq!((spec.k, spec.rho_label.as_str()), (1, "eta"));
        assert!(parse_tau("steinberg:k=0,rho=a").is_err());
        assert!(parse_tau("steinberg:k=2").is_err());
        assert!(parse_tau("k=2,rho=a").is_err());
        assert!(parse_tau("steinberg:k=2,rho=a,extra=1").is_err());
    }

    #[test]
    fn sigma_pairs_enforce_involution() {
        let pairing = SigmaPairing::parse("chi1:chi2,eta").unwrap();
        assert_eq!(pairing.twist_of("chi1"), "chi2");
        assert_eq!(pairing.twist_of("chi2"), "chi1");
        assert_eq!(pairing.twist_of("eta"), "eta");
        assert_eq!(pairing.twist_of("unlisted"), "unlisted");
        assert!(SigmaPairing::parse("a:b,a:c").is_err());
        assert!(SigmaPairing::parse("a:b,b:c").is_err());
        assert!(SigmaPairing::parse("").unwrap().map.is_empty());
    }

    #[test]
    fn datum_construction_checks_divisibility() {
        let datum = build_datum(2, "steinberg:k=2,rho=chi1", "chi1:chi2").unwrap();
        assert_eq!(datum.n, 2);
        assert_eq!(datum.tau_prime.k, 2);
        assert_eq!(datum.tau_prime.rho.size, 1);
        assert!(!datum.tau_prime.rho.galois_invariant());
        assert!(build_datum(3, "steinberg:k=2,rho=chi1", "").is_err());
    }

    #[test]
    fn config_validation() {
        let mut config = RunConfig::default();
        config.validate().unwrap();
        config.rank = 3;
        assert!(config.validate().is_err());
        config.suites = vec!["structure".into()];
        config.validate().unwrap();
        config.suites = vec!["bogus".into()];
        assert!(config.validate().is_err());
        let parsed = RunConfig::from_json(r#"{"rank": 6, "seed": 9}"#).unwrap();
        assert_eq!(parsed.rank, 6);
        assert_eq!(parsed.seed, 9);
        assert_eq!(parsed.p, 5);
        assert!(RunConfig::from_json(r#"{"rnak": 6}"#).is_err());
    }

    #[test]
    fn suite_name_expansion() {
        assert_eq!(
            parse_suites("all").unwrap(),
            SUITE_NAMES.iter().map(|s| s.to_string()).collect::<Vec<_>>()
        );
        assert_eq!(parse_suites("cones,structure").unwrap(), vec!["cones", "structure"]);
        assert!(parse_suites("nope").is_err());
        assert!(parse_suites("").is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        let config = RunConfig {
            rank: 4,
            suites: vec!["cosets".into(), "structure".into()],
            seed: 7,
            ..RunConfig::default()
        };
        let a = report_json(&run(&config).unwrap());
        let b = report_json(&run(&config).unwrap());
        assert_eq!(a, b);
        assert!(a.contains("\"pass\": true"));
    }

    #[test]
    fn records_are_sorted_and_registered() {
        let config = RunConfig {
            rank: 4,
            seed: 3,
            ..RunConfig::default()
        };
        let report = run(&config).unwrap();
        assert!(report.pass, "{}", report_summary(&report));
        let names: Vec<&String> = report.suites.iter().map(|s| &s.name).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        for suite in &report.suites {
            assert!(!suite.records.is_empty());
            for pair in suite.records.windows(2) {
                assert!(
                    (&pair[0].lemma, &pair[0].instance) <= (&pair[1].lemma, &pair[1].instance)
                );
            }
            for rec in &suite.records {
                assert!(lemma_registered(&rec.lemma));
            }
        }
    }

    #[test]
    fn invariant_factor_fails_certification_record() {
        let suite = certify_suite(4, "steinberg:k=2,rho=chi1", "chi1").unwrap();
        assert!(!suite.passed());
        let rec = suite
            .records
            .iter()
            .find(|r| r.lemma == "rds-certification")
            .unwrap();
        assert_eq!(rec.status, "fail");
        assert!(rec.evidence["verdict"]
            .as_str()
            .unwrap()
            .contains("not certified"));
        let conservation = suite
            .records
            .iter()
            .find(|r| r.lemma == "exponent-central-conservation")
            .unwrap();
        assert_eq!(conservation.status, "pass");
    }

    #[test]
    fn certificate_json_renders_rationals_as_fractions() {
        let datum = build_datum(2, "steinberg:k=2,rho=chi1", "chi1:chi2").unwrap();
        let cert = certify_rds(&datum).unwrap();
        let value = certificate_json(&cert);
        assert_eq!(value["rds"], Value::Bool(true));
        let text = value.to_string();
        assert!(text.contains("1/2"), "{text}");
        assert!(text.contains("ray-decay"), "{text}");
    }
}
