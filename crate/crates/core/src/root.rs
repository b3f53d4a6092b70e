//! Root datum of GL_m (type A_{m-1}), the Weyl group as permutations, and
//! minimal double-coset representatives for pairs of standard parabolic
//! subgroups.
//!
//! Characters of the diagonal torus live in Z^m with e_i the i-th
//! coordinate character; the roots are e_i - e_j. A permutation w acts by
//! w(e_i) = e_{w(i)} (indices 0-based throughout).
//!
//! Minimal representatives of W_Theta \ W / W_Omega are the w with
//! w(Omega) and w^{-1}(Theta) positive; equivalently w increases along each
//! Omega block and w^{-1} increases along each Theta block. They are
//! enumerated directly from block-assignment matrices (row sums the Theta
//! block sizes, column sums the Omega block sizes); an exhaustive scan of
//! the full symmetric group serves as an independent oracle.

use crate::error::{Error, Result};
use itertools::Itertools;
use std::collections::BTreeSet;

/// Character of the diagonal torus, as exponents in Z^m.
pub type CharVec = Vec<i64>;

/// The root e_i - e_j as a character vector.
pub fn root_vec(m: usize, i: usize, j: usize) -> CharVec {
    assert!(i != j && i < m && j < m);
    let mut v = vec![0; m];
    v[i] = 1;
    v[j] = -1;
    v
}

/// Root datum of GL_m.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootDatum {
    pub m: usize,
}

impl RootDatum {
    pub fn new(m: usize) -> Self {
        assert!(m >= 1);
        RootDatum { m }
    }

    /// All roots e_i - e_j, i != j.
    pub fn roots(&self) -> Vec<CharVec> {
        let mut out = Vec::new();
        for i in 0..self.m {
            for j in 0..self.m {
                if i != j {
                    out.push(root_vec(self.m, i, j));
                }
            }
        }
        out
    }

    /// Simple roots alpha_i = e_i - e_{i+1}, i = 0..m-2.
    pub fn simple_roots(&self) -> Vec<CharVec> {
        (0..self.m - 1).map(|i| root_vec(self.m, i, i + 1)).collect()
    }

    pub fn full_subset(&self) -> SimpleSubset {
        (0..self.m - 1).collect()
    }

    /// Delta minus the single simple root alpha_k (0-based cut index).
    pub fn maximal_subset(&self, k: usize) -> SimpleSubset {
        assert!(k < self.m - 1);
        (0..self.m - 1).filter(|&i| i != k).collect()
    }
}

/// Subset of the simple roots, by 0-based index into alpha_0..alpha_{m-2}.
pub type SimpleSubset = BTreeSet<usize>;

/// Ordered composition of m (block sizes of a standard Levi).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionShape {
    pub parts: Vec<usize>,
}

impl PartitionShape {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.iter().any(|&p| p == 0) {
            return Err(Error::BadPartition(format!("{parts:?}")));
        }
        Ok(PartitionShape { parts })
    }

    pub fn m(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Block index of each of 0..m-1.
    pub fn block_of(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.m());
        for (b, &len) in self.parts.iter().enumerate() {
            out.extend(std::iter::repeat(b).take(len));
        }
        out
    }

    /// First index of each block.
    pub fn block_starts(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.parts.len());
        let mut acc = 0;
        for &len in &self.parts {
            out.push(acc);
            acc += len;
        }
        out
    }

    /// Mirror-symmetric: parts read the same in both directions.
    pub fn is_balanced(&self) -> bool {
        let r = self.parts.len();
        (0..r).all(|i| self.parts[i] == self.parts[r - 1 - i])
    }
}

/// Theta subsets of Delta correspond to compositions of m: the blocks are
/// the maximal runs of consecutive indices with all inner alpha_i in Theta.
pub fn subset_to_partition(m: usize, theta: &SimpleSubset) -> PartitionShape {
    let mut parts = Vec::new();
    let mut len = 1;
    for i in 0..m - 1 {
        if theta.contains(&i) {
            len += 1;
        } else {
            parts.push(len);
            len = 1;
        }
    }
    parts.push(len);
    PartitionShape::new(parts).expect("run lengths are positive")
}

pub fn partition_to_subset(shape: &PartitionShape) -> SimpleSubset {
    let m = shape.m();
    let cuts: BTreeSet<usize> = shape
        .block_starts()
        .into_iter()
        .skip(1)
        .map(|s| s - 1)
        .collect();
    (0..m - 1).filter(|i| !cuts.contains(i)).collect()
}

/// Element of the Weyl group S_m. `perm[i]` is the image of i; the action
/// on characters is (w v)[w(i)] = v[i].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct WeylElement {
    perm: Vec<usize>,
}

impl WeylElement {
    pub fn new(perm: Vec<usize>) -> Self {
        let mut seen = vec![false; perm.len()];
        for &v in &perm {
            assert!(v < perm.len() && !seen[v], "not a permutation: {perm:?}");
            seen[v] = true;
        }
        WeylElement { perm }
    }

    pub fn identity(m: usize) -> Self {
        WeylElement {
            perm: (0..m).collect(),
        }
    }

    /// Simple reflection s_i, swapping i and i+1.
    pub fn simple(m: usize, i: usize) -> Self {
        let mut p: Vec<usize> = (0..m).collect();
        p.swap(i, i + 1);
        WeylElement { perm: p }
    }

    /// The block swap of GL_{2n}: i <-> i + n.
    pub fn block_swap(n: usize) -> Self {
        WeylElement {
            perm: (0..2 * n).map(|i| (i + n) % (2 * n)).collect(),
        }
    }

    pub fn m(&self) -> usize {
        self.perm.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.perm[i]
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// self . other: apply other first.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        assert_eq!(self.m(), other.m());
        WeylElement {
            perm: (0..self.m()).map(|i| self.perm[other.perm[i]]).collect(),
        }
    }

    pub fn inverse(&self) -> WeylElement {
        let mut p = vec![0; self.m()];
        for (i, &v) in self.perm.iter().enumerate() {
            p[v] = i;
        }
        WeylElement { perm: p }
    }

    pub fn act_char(&self, v: &CharVec) -> CharVec {
        assert_eq!(v.len(), self.m());
        let mut out = vec![0; v.len()];
        for (i, &x) in v.iter().enumerate() {
            out[self.perm[i]] = x;
        }
        out
    }

    /// Number of inversions = length in the simple reflections.
    pub fn length(&self) -> usize {
        let mut l = 0;
        for i in 0..self.m() {
            for j in i + 1..self.m() {
                if self.perm[i] > self.perm[j] {
                    l += 1;
                }
            }
        }
        l
    }

    /// One-line notation, 1-based, e.g. [2 1 3].
    pub fn one_line(&self) -> String {
        format!(
            "[{}]",
            self.perm.iter().map(|v| (v + 1).to_string()).join(" ")
        )
    }
}

fn increases_on_blocks(perm_val: impl Fn(usize) -> usize, subset: &SimpleSubset) -> bool {
    subset.iter().all(|&i| perm_val(i) < perm_val(i + 1))
}

/// w is the minimal element of W_Theta w W_Omega iff w(Omega) > 0 and
/// w^{-1}(Theta) > 0.
pub fn is_minimal_rep(w: &WeylElement, theta: &SimpleSubset, omega: &SimpleSubset) -> bool {
    let winv = w.inverse();
    increases_on_blocks(|i| w.apply(i), omega) && increases_on_blocks(|i| winv.apply(i), theta)
}

/// Minimal representatives of W_Theta \ W / W_Omega, built from
/// block-assignment matrices K: K[t][o] values of Theta block t land in
/// Omega block o. Within each Omega block the received values are sorted;
/// each Theta block hands out its values in increasing order to increasing
/// Omega blocks. Sorted by one-line notation for determinism.
pub fn double_coset_reps(
    m: usize,
    theta: &SimpleSubset,
    omega: &SimpleSubset,
) -> Vec<WeylElement> {
    let rows = subset_to_partition(m, theta).parts;
    let cols = subset_to_partition(m, omega).parts;
    let mut reps = Vec::new();
    let mut k = vec![vec![0usize; cols.len()]; rows.len()];
    fill_tables(&rows, &cols, 0, &mut cols.clone(), &mut k, &mut |k| {
        reps.push(rep_from_table(&rows, &cols, k));
    });
    reps.sort();
    reps
}

fn fill_tables(
    rows: &[usize],
    cols: &[usize],
    r: usize,
    col_rem: &mut Vec<usize>,
    k: &mut Vec<Vec<usize>>,
    emit: &mut impl FnMut(&Vec<Vec<usize>>),
) {
    if r == rows.len() {
        if col_rem.iter().all(|&c| c == 0) {
            emit(k);
        }
        return;
    }
    fn fill_row(
        rows: &[usize],
        cols: &[usize],
        r: usize,
        c: usize,
        row_rem: usize,
        col_rem: &mut Vec<usize>,
        k: &mut Vec<Vec<usize>>,
        emit: &mut impl FnMut(&Vec<Vec<usize>>),
    ) {
        if c == cols.len() {
            if row_rem == 0 {
                fill_tables(rows, cols, r + 1, col_rem, k, emit);
            }
            return;
        }
        let max = row_rem.min(col_rem[c]);
        for v in 0..=max {
            k[r][c] = v;
            col_rem[c] -= v;
            fill_row(rows, cols, r, c + 1, row_rem - v, col_rem, k, emit);
            col_rem[c] += v;
        }
        k[r][c] = 0;
    }
    fill_row(rows, cols, r, 0, rows[r], col_rem, k, emit);
}

fn rep_from_table(rows: &[usize], cols: &[usize], k: &Vec<Vec<usize>>) -> WeylElement {
    let m: usize = rows.iter().sum();
    // Values of Theta block t are consecutive starting at row_start[t];
    // chunk them across Omega blocks in order.
    let mut next_val: Vec<usize> = Vec::with_capacity(rows.len());
    let mut acc = 0;
    for &len in rows {
        next_val.push(acc);
        acc += len;
    }
    let mut perm = vec![0usize; m];
    let mut pos = 0;
    for (o, &clen) in cols.iter().enumerate() {
        let mut vals = Vec::with_capacity(clen);
        for t in 0..rows.len() {
            for _ in 0..k[t][o] {
                vals.push(next_val[t]);
                next_val[t] += 1;
            }
        }
        vals.sort_unstable();
        for v in vals {
            // positions pos..pos+clen form Omega block o
            perm[pos] = v;
            pos += 1;
        }
    }
    WeylElement::new(perm)
}

/// Oracle route: filter all of S_m by the defining conditions.
pub fn double_coset_reps_exhaustive(
    m: usize,
    theta: &SimpleSubset,
    omega: &SimpleSubset,
) -> Vec<WeylElement> {
    let mut reps: Vec<WeylElement> = (0..m)
        .permutations(m)
        .map(WeylElement::new)
        .filter(|w| is_minimal_rep(w, theta, omega))
        .collect();
    reps.sort();
    reps
}

/// Minimal element of the double coset W_Theta w W_Omega, by greedy descent.
pub fn canonical_rep(
    w: &WeylElement,
    theta: &SimpleSubset,
    omega: &SimpleSubset,
) -> WeylElement {
    let mut u = w.clone();
    loop {
        let mut changed = false;
        for &i in omega {
            if u.apply(i) > u.apply(i + 1) {
                u = u.compose(&WeylElement::simple(u.m(), i));
                changed = true;
            }
        }
        let uinv = u.inverse();
        for &j in theta {
            if uinv.apply(j) > uinv.apply(j + 1) {
                u = WeylElement::simple(u.m(), j).compose(&u);
                changed = true;
            }
        }
        if !changed {
            return u;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum CosetCase {
    /// w(Omega) lands inside Theta: the twisted Levi is contained in M_Theta.
    Case1,
    /// Proper intersection.
    Case2,
}

/// Theta intersect w(Omega): the simple roots alpha_v with alpha_v in Theta
/// and alpha_v = w(alpha_i) for some alpha_i in Omega.
pub fn levi_intersection(
    w: &WeylElement,
    theta: &SimpleSubset,
    omega: &SimpleSubset,
) -> Result<SimpleSubset> {
    if !is_minimal_rep(w, theta, omega) {
        return Err(Error::NotMinimalRep);
    }
    let mut out = SimpleSubset::new();
    for &i in omega {
        let v = w.apply(i);
        if w.apply(i + 1) == v + 1 && theta.contains(&v) {
            out.insert(v);
        }
    }
    Ok(out)
}

/// Independent route to the intersection Levi: the partition cut out by
/// Theta intersect w(Omega) must coincide with the common refinement of
/// the Theta blocks and the w-images of the Omega blocks. Returns whether
/// the two computations agree.
pub fn intersection_matches_refinement(
    m: usize,
    w: &WeylElement,
    theta: &SimpleSubset,
    omega: &SimpleSubset,
) -> Result<bool> {
    let inter = levi_intersection(w, theta, omega)?;
    let blocks = subset_to_partition(m, &inter).block_of();
    let tblocks = subset_to_partition(m, theta).block_of();
    let oblocks = subset_to_partition(m, omega).block_of();
    let winv = w.inverse();
    let key = |i: usize| (tblocks[i], oblocks[winv.apply(i)]);
    Ok((0..m).all(|i| (0..m).all(|j| (blocks[i] == blocks[j]) == (key(i) == key(j)))))
}

pub fn case_classify(
    w: &WeylElement,
    theta: &SimpleSubset,
    omega: &SimpleSubset,
) -> Result<CosetCase> {
    let inter = levi_intersection(w, theta, omega)?;
    Ok(if inter.len() == omega.len() {
        CosetCase::Case1
    } else {
        CosetCase::Case2
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn subset(m: usize, missing: &[usize]) -> SimpleSubset {
        (0..m - 1).filter(|i| !missing.contains(i)).collect()
    }

    #[test]
    fn partition_round_trip() {
        for m in 2..=7 {
            let d = RootDatum::new(m);
            for theta in (0..m - 1).powerset().map(|s| s.into_iter().collect::<SimpleSubset>()) {
                let shape = subset_to_partition(m, &theta);
                assert_eq!(shape.m(), m);
                assert_eq!(partition_to_subset(&shape), theta);
            }
            assert_eq!(subset_to_partition(m, &d.full_subset()).parts, vec![m]);
        }
        // Delta minus alpha_n in GL_2n gives (n, n).
        let theta = RootDatum::new(4).maximal_subset(1);
        assert_eq!(subset_to_partition(4, &theta).parts, vec![2, 2]);
    }

    #[test]
    fn weyl_basics() {
        let w = WeylElement::new(vec![2, 0, 1]);
        assert_eq!(w.inverse().compose(&w), WeylElement::identity(3));
        assert_eq!(w.length(), 2);
        let v = vec![5, 7, 9];
        // (w v)[w(i)] = v[i]
        let out = w.act_char(&v);
        assert_eq!(out[2], 5);
        assert_eq!(out[0], 7);
        assert_eq!(out[1], 9);
        // action is a homomorphism
        let u = WeylElement::new(vec![1, 2, 0]);
        assert_eq!(
            w.compose(&u).act_char(&v),
            w.act_char(&u.act_char(&v))
        );
        assert_eq!(WeylElement::block_swap(2).one_line(), "[3 4 1 2]");
    }

    #[test]
    fn simple_reflection_length() {
        let m = 5;
        for i in 0..m - 1 {
            assert_eq!(WeylElement::simple(m, i).length(), 1);
        }
        // longest element
        let w0 = WeylElement::new((0..m).rev().collect());
        assert_eq!(w0.length(), m * (m - 1) / 2);
    }

    #[test]
    fn coset_reps_match_exhaustive_oracle() {
        for m in 2..=6 {
            for missing_t in 0..m - 1 {
                for missing_o in 0..m - 1 {
                    let theta = subset(m, &[missing_t]);
                    let omega = subset(m, &[missing_o]);
                    assert_eq!(
                        double_coset_reps(m, &theta, &omega),
                        double_coset_reps_exhaustive(m, &theta, &omega),
                        "m={m} theta cut {missing_t} omega cut {missing_o}"
                    );
                }
            }
        }
        // a non-maximal pair
        let theta = subset(5, &[0, 2]);
        let omega = subset(5, &[3]);
        assert_eq!(
            double_coset_reps(5, &theta, &omega),
            double_coset_reps_exhaustive(5, &theta, &omega)
        );
    }

    #[test]
    fn coset_count_for_mirror_levi() {
        // Theta = Omega = Delta minus alpha_n in GL_2n: n+1 representatives,
        // exactly two of them Case 1 (identity and the block swap).
        for n in 1..=4usize {
            let m = 2 * n;
            let theta = RootDatum::new(m).maximal_subset(n - 1);
            let reps = double_coset_reps(m, &theta, &theta);
            assert_eq!(reps.len(), n + 1);
            let case1: Vec<&WeylElement> = reps
                .iter()
                .filter(|w| case_classify(w, &theta, &theta).unwrap() == CosetCase::Case1)
                .collect();
            assert_eq!(case1.len(), 2);
            assert!(case1.contains(&&WeylElement::identity(m)));
            assert!(case1.contains(&&WeylElement::block_swap(n)));
        }
    }

    #[test]
    fn reps_are_minimal_in_their_coset() {
        let m = 5;
        let theta = subset(m, &[1]);
        let omega = subset(m, &[2]);
        let reps = double_coset_reps(m, &theta, &omega);
        for w in &reps {
            assert!(is_minimal_rep(w, &theta, &omega));
            assert_eq!(&canonical_rep(w, &theta, &omega), w);
        }
        // every group element canonicalizes to a listed representative, and
        // distinct representatives give distinct cosets
        let mut seen = std::collections::BTreeMap::new();
        for p in (0..m).permutations(m) {
            let w = WeylElement::new(p);
            let c = canonical_rep(&w, &theta, &omega);
            assert!(reps.contains(&c), "canonical rep of {} missing", w.one_line());
            *seen.entry(c).or_insert(0usize) += 1;
        }
        assert_eq!(seen.len(), reps.len());
        assert_eq!(seen.values().sum::<usize>(), 120);
    }

    #[test]
    fn levi_intersection_matches_block_refinement() {
        // For a minimal rep, the standard Levi on Theta intersect w(Omega)
        // must induce the same partition of 0..m-1 as intersecting Theta
        // blocks with w-images of Omega blocks.
        for m in [4usize, 5, 6] {
            for ct in 0..m - 1 {
                for co in 0..m - 1 {
                    let theta = subset(m, &[ct]);
                    let omega = subset(m, &[co]);
                    for w in double_coset_reps(m, &theta, &omega) {
                        assert!(
                            intersection_matches_refinement(m, &w, &theta, &omega).unwrap(),
                            "m={m} w={}",
                            w.one_line()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn case_classify_rejects_non_reps() {
        let theta = subset(4, &[1]);
        let w = WeylElement::new(vec![1, 0, 2, 3]);
        assert!(matches!(
            case_classify(&w, &theta, &theta),
            Err(Error::NotMinimalRep)
        ));
    }
}
