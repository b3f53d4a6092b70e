//! Exact linear algebra over Q: solving, rank, nullspace, and a small
//! Fourier-Motzkin feasibility engine used to extract nonnegative
//! combination certificates.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type QVec = Vec<BigRational>;

pub fn qvec_from_ints(v: &[i64]) -> QVec {
    v.iter().map(|&x| crate::quad::rat_int(x)).collect()
}

pub fn dot(a: &QVec, b: &QVec) -> BigRational {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn scale(v: &QVec, c: &BigRational) -> QVec {
    v.iter().map(|x| x * c).collect()
}

pub fn add(a: &QVec, b: &QVec) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &QVec, b: &QVec) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn is_zero_vec(v: &QVec) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(rows: &mut Vec<QVec>) -> Vec<usize> {
    let nrows = rows.len();
    if nrows == 0 {
        return vec![];
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = BigRational::one() / rows[r][c].clone();
        rows[r] = scale(&rows[r], &inv);
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                rows[i] = sub(&rows[i], &scale(&rows[r], &f));
            }
        }
        pivots.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[QVec]) -> usize {
    let mut m: Vec<QVec> = rows.to_vec();
    rref(&mut m).len()
}

/// One solution x of sum_i x_i cols[i] = target, if consistent
/// (free variables set to 0).
pub fn solve_columns(cols: &[QVec], target: &QVec) -> Option<QVec> {
    if cols.is_empty() {
        return if is_zero_vec(target) {
            Some(vec![])
        } else {
            None
        };
    }
    let dim = cols[0].len();
    assert_eq!(target.len(), dim);
    // augmented rows of [cols | target]
    let mut rows: Vec<QVec> = (0..dim)
        .map(|r| {
            let mut row: QVec = cols.iter().map(|c| c[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let pivots = rref(&mut rows);
    if pivots.contains(&cols.len()) {
        return None; // pivot in the augmented column: inconsistent
    }
    let mut x = vec![BigRational::zero(); cols.len()];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = rows[r][cols.len()].clone();
    }
    Some(x)
}

/// Basis of { x : sum_i x_i cols[i] = 0 }.
pub fn nullspace(cols: &[QVec]) -> Vec<QVec> {
    if cols.is_empty() {
        return vec![];
    }
    let dim = cols[0].len();
    let n = cols.len();
    let mut rows: Vec<QVec> = (0..dim)
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect();
    let pivots = rref(&mut rows);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -rows[r][f].clone();
            }
            v
        })
        .collect()
}

/// Membership of `target` in the span of `vecs`, with coefficients.
pub fn in_span(vecs: &[QVec], target: &QVec) -> Option<QVec> {
    solve_columns(vecs, target)
}

/// Inequality sum_i c_i z_i >= r.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Ineq {
    c: QVec,
    r: BigRational,
}

impl Ineq {
    fn normalize(mut self) -> Self {
        let lead = self.c.iter().find(|x| !x.is_zero()).cloned();
        if let Some(l) = lead {
            let inv = (BigRational::one() / l).abs();
            self.c = scale(&self.c, &inv);
            self.r *= inv;
        }
        self
    }
}

/// Feasibility of { z : for each (c, r), <c, z> >= r }, by Fourier-Motzkin
/// elimination; returns a feasible point if one exists. Intended for the
/// small systems arising from certificate extraction.
pub fn fm_feasible_point(ineqs: &[(QVec, BigRational)]) -> Option<QVec> {
    if ineqs.is_empty() {
        return Some(vec![]);
    }
    let dim = ineqs[0].0.len();
    if dim == 0 {
        return if ineqs.iter().all(|(_, r)| !r.is_positive()) {
            Some(vec![])
        } else {
            None
        };
    }
    let mut stages: Vec<Vec<Ineq>> = Vec::with_capacity(dim + 1);
    let mut cur: Vec<Ineq> = ineqs
        .iter()
        .map(|(c, r)| {
            Ineq {
                c: c.clone(),
                r: r.clone(),
            }
            .normalize()
        })
        .collect();
    cur.sort();
    cur.dedup();
    for var in (0..dim).rev() {
        stages.push(cur.clone());
        let mut next: Vec<Ineq> = Vec::new();
        let (mut lowers, mut uppers, mut rest) = (vec![], vec![], vec![]);
        for q in &cur {
            match q.c[var].cmp(&BigRational::zero()) {
                std::cmp::Ordering::Greater => lowers.push(q.clone()),
                std::cmp::Ordering::Less => uppers.push(q.clone()),
                std::cmp::Ordering::Equal => rest.push(q.clone()),
            }
        }
        // each (lower, upper) pair eliminates var
        for lo in &lowers {
            for up in &uppers {
                // lo: a z_var + ... >= r1 (a > 0), up: -b z_var + ... >= r2 (b > 0)
                let a = lo.c[var].clone();
                let b = -up.c[var].clone();
                let mut c = add(&scale(&lo.c, &b), &scale(&up.c, &a));
                c[var] = BigRational::zero();
                let r = &lo.r * &b + &up.r * &a;
                next.push(Ineq { c, r }.normalize());
            }
        }
        next.extend(rest);
        next.sort();
        next.dedup();
        // contradiction: 0 >= positive
        if next
            .iter()
            .any(|q| q.c.iter().all(|x| x.is_zero()) && q.r.is_positive())
        {
            return None;
        }
        next.retain(|q| !q.c.iter().all(|x| x.is_zero()));
        cur = next;
    }
    // back-substitute, last variable first
    let mut z = vec![BigRational::zero(); dim];
    for var in 0..dim {
        let sys = &stages[dim - 1 - var];
        let mut lo: Option<BigRational> = None;
        let mut hi: Option<BigRational> = None;
        for q in sys {
            if q.c[var].is_zero() {
                continue;
            }
            // coefficients of later-eliminated variables are known; earlier
            // ones are still zero in z
            let mut rest = q.r.clone();
            for (j, cj) in q.c.iter().enumerate() {
                if j != var && !cj.is_zero() {
                    rest -= cj * &z[j];
                }
            }
            let bound = rest / q.c[var].clone();
            if q.c[var].is_positive() {
                lo = Some(match lo {
                    None => bound,
                    Some(l) => l.max(bound),
                });
            } else {
                hi = Some(match hi {
                    None => bound,
                    Some(h) => h.min(bound),
                });
            }
        }
        z[var] = match (lo, hi) {
            (None, None) => BigRational::zero(),
            (Some(l), None) => l,
            (None, Some(h)) => h,
            (Some(l), Some(h)) => {
                debug_assert!(l <= h, "FM interval is nonempty at feasibility");
                (l + h) / crate::quad::rat_int(2)
            }
        };
    }
    Some(z)
}

/// Nonnegative-combination certificate: lambda >= 0 and mu with
/// target = sum lambda_i ineq_gens[i] + sum mu_j eq_gens[j].
/// Returns (lambda, mu) if one exists.
pub fn nonneg_combination(
    ineq_gens: &[QVec],
    eq_gens: &[QVec],
    target: &QVec,
) -> Option<(QVec, QVec)> {
    let s = ineq_gens.len();
    let cols: Vec<QVec> = ineq_gens.iter().chain(eq_gens).cloned().collect();
    if cols.is_empty() {
        return if is_zero_vec(target) {
            Some((vec![], vec![]))
        } else {
            None
        };
    }
    let w0 = solve_columns(&cols, target)?;
    let null = nullspace(&cols);
    // lambda_i = w0_i + sum_j null_j[i] z_j >= 0 for i < s
    let sys: Vec<(QVec, BigRational)> = (0..s)
        .map(|i| {
            let c: QVec = null.iter().map(|nv| nv[i].clone()).collect();
            (c, -w0[i].clone())
        })
        .collect();
    let z = if null.is_empty() {
        if w0[..s].iter().any(|x| x.is_negative()) {
            return None;
        }
        vec![]
    } else {
        fm_feasible_point(&sys)?
    };
    let mut w = w0;
    for (j, nv) in null.iter().enumerate() {
        for i in 0..w.len() {
            w[i] += &nv[i] * &z[j];
        }
    }
    debug_assert!(w[..s].iter().all(|x| !x.is_negative()));
    let mu = w.split_off(s);
    Some((w, mu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::rat_int;

    fn qv(v: &[i64]) -> QVec {
        qvec_from_ints(v)
    }

    #[test]
    fn solve_and_nullspace() {
        let cols = vec![qv(&[1, 0, 1]), qv(&[0, 1, 1]), qv(&[1, 1, 2])];
        let x = solve_columns(&cols, &qv(&[2, 3, 5])).unwrap();
        // verify by recombination
        let mut acc = vec![BigRational::zero(); 3];
        for (c, xi) in cols.iter().zip(&x) {
            acc = add(&acc, &scale(c, xi));
        }
        assert_eq!(acc, qv(&[2, 3, 5]));
        assert!(solve_columns(&cols, &qv(&[1, 0, 0])).is_none());
        let null = nullspace(&cols);
        assert_eq!(null.len(), 1);
        assert_eq!(null[0], qv(&[-1, -1, 1]));
        assert_eq!(rank(&cols), 2);
    }

    #[test]
    fn fm_feasibility() {
        // z1 >= 1, z2 >= 2, -z1 - z2 >= -10
        let sys = vec![
            (qv(&[1, 0]), rat_int(1)),
            (qv(&[0, 1]), rat_int(2)),
            (qv(&[-1, -1]), rat_int(-10)),
        ];
        let z = fm_feasible_point(&sys).unwrap();
        for (c, r) in &sys {
            assert!(dot(c, &z) >= *r);
        }
        // infeasible: z >= 1 and -z >= 0
        let bad = vec![(qv(&[1]), rat_int(1)), (qv(&[-1]), rat_int(0))];
        assert!(fm_feasible_point(&bad).is_none());
    }

    #[test]
    fn nonneg_combination_roundtrip() {
        // e1 - e3 = (e1 - e2) + (e2 - e3): multipliers 1, 1
        let gens = vec![qv(&[1, -1, 0]), qv(&[0, 1, -1])];
        let (lam, mu) = nonneg_combination(&gens, &[], &qv(&[1, 0, -1])).unwrap();
        assert!(mu.is_empty());
        let mut acc = vec![BigRational::zero(); 3];
        for (g, l) in gens.iter().zip(&lam) {
            assert!(!l.is_negative());
            acc = add(&acc, &scale(g, l));
        }
        assert_eq!(acc, qv(&[1, 0, -1]));
        // e2 - e1 needs a negative multiplier: no certificate
        assert!(nonneg_combination(&gens, &[], &qv(&[-1, 1, 0])).is_none());
        // but with e1 - e2 allowed as an equality generator it works
        let (_, mu) =
            nonneg_combination(&gens[1..], &[qv(&[1, -1, 0])], &qv(&[-1, 1, 0])).unwrap();
        assert_eq!(mu, vec![rat_int(-1)]);
    }
}
