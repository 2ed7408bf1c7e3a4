//! Exhaustive enumeration of basic solutions of an equality-form LP.
//!
//! Every `m`-subset of columns is tried in lexicographic order; nonsingular
//! subsets yield a basic solution via a dense LU solve with partial pivoting.
//! The best feasible one is the optimum of any bounded LP, which makes this a
//! slow but independent check on the two iterative engines. The oracle does
//! not detect unboundedness.

use thiserror::Error;

use crate::linalg::DenseVector;
use crate::model::{StandardForm, DEFAULT_FEASIBILITY_TOL};
use crate::solution::{Solution, Status};

/// Largest number of subsets the oracle agrees to visit.
pub const MAX_SUBSETS: u128 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("{subsets} column subsets exceed the enumeration limit of {MAX_SUBSETS}")]
    TooLarge { subsets: u128 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasicSolution {
    pub basis: Vec<usize>,
    /// Full-length point; nonbasic entries are exactly zero.
    pub x: DenseVector,
    pub feasible: bool,
    /// Internal (maximization) objective.
    pub objective: f64,
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Solves `B·z = rhs` in place by Gaussian elimination with partial pivoting.
/// `b` is `m×m` row-major. Returns `false` if a pivot falls below `threshold`.
fn lu_solve(b: &mut [f64], rhs: &mut [f64], m: usize, threshold: f64) -> bool {
    for k in 0..m {
        let (p, pmax) =
            (k..m)
                .map(|r| (r, b[r * m + k].abs()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pmax < threshold {
            return false;
        }
        if p != k {
            for j in 0..m {
                b.swap(k * m + j, p * m + j);
            }
            rhs.swap(k, p);
        }
        let pivot = b[k * m + k];
        for r in (k + 1)..m {
            let f = b[r * m + k] / pivot;
            if f == 0.0 {
                continue;
            }
            for j in k..m {
                b[r * m + j] -= f * b[k * m + j];
            }
            rhs[r] -= f * rhs[k];
        }
    }
    for k in (0..m).rev() {
        let mut v = rhs[k];
        for j in (k + 1)..m {
            v -= b[k * m + j] * rhs[j];
        }
        rhs[k] = v / b[k * m + k];
    }
    true
}

/// Iterator over the nonsingular bases of a [`StandardForm`].
pub struct BasicSolutions<'a> {
    form: &'a StandardForm,
    subset: Vec<usize>,
    done: bool,
    visited: u64,
    feasibility_tol: f64,
    scratch: Vec<f64>,
    rhs: Vec<f64>,
}

impl BasicSolutions<'_> {
    /// Number of column subsets examined so far, singular ones included.
    pub fn subsets_visited(&self) -> u64 {
        self.visited
    }

    fn advance(&mut self) {
        let n = self.form.cols();
        let m = self.subset.len();
        let mut i = m;
        while i > 0 {
            i -= 1;
            if self.subset[i] < n - m + i {
                self.subset[i] += 1;
                for k in (i + 1)..m {
                    self.subset[k] = self.subset[k - 1] + 1;
                }
                return;
            }
        }
        self.done = true;
    }

    fn evaluate(&mut self) -> Option<BasicSolution> {
        let m = self.subset.len();
        let a = &self.form.a;
        let mut norm = 0.0f64;
        for r in 0..m {
            for (k, &col) in self.subset.iter().enumerate() {
                let v = a[(r, col)];
                self.scratch[r * m + k] = v;
                norm = norm.max(v.abs());
            }
        }
        self.rhs.copy_from_slice(&self.form.b);
        if !lu_solve(&mut self.scratch, &mut self.rhs, m, 1e-10 * norm.max(f64::MIN_POSITIVE)) {
            return None;
        }
        let mut x = vec![0.0; self.form.cols()];
        for (k, &col) in self.subset.iter().enumerate() {
            x[col] = self.rhs[k];
        }
        let feasible = self.rhs.iter().all(|&v| v >= -self.feasibility_tol);
        Some(BasicSolution {
            basis: self.subset.clone(),
            objective: self.form.internal_objective(&x),
            x: x.into(),
            feasible,
        })
    }
}

impl Iterator for BasicSolutions<'_> {
    type Item = BasicSolution;

    fn next(&mut self) -> Option<BasicSolution> {
        while !self.done {
            self.visited += 1;
            let found = self.evaluate();
            self.advance();
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

/// Streams every basic solution, in lexicographic order of the basis.
pub fn enumerate_basic_solutions(form: &StandardForm) -> Result<BasicSolutions<'_>, OracleError> {
    let n = form.cols();
    let m = form.rows();
    let subsets = binomial(n, m);
    if subsets > MAX_SUBSETS {
        return Err(OracleError::TooLarge { subsets });
    }
    Ok(BasicSolutions {
        form,
        subset: (0..m).collect(),
        done: m > n || m == 0,
        visited: 0,
        // Basic values are compared against rhs magnitudes that can reach 1e6.
        feasibility_tol: 1e-9 * (1.0 + form.b.norm_inf()),
        scratch: vec![0.0; m * m],
        rhs: vec![0.0; m],
    })
}

/// Best feasible basic solution; ties keep the lexicographically smallest
/// basis. Reports `Infeasible` when no basis is feasible.
pub fn brute_force_optimum(form: &StandardForm) -> Result<Solution, OracleError> {
    let mut iter = enumerate_basic_solutions(form)?;
    let mut best: Option<BasicSolution> = None;
    for bs in iter.by_ref() {
        if !bs.feasible {
            continue;
        }
        let better = best
            .as_ref()
            .is_none_or(|b| bs.objective > b.objective + 1e-12 * (1.0 + b.objective.abs()));
        if better {
            best = Some(bs);
        }
    }
    let visited = iter.subsets_visited() as usize;
    Ok(match best {
        None => Solution::without_point(Status::Infeasible, visited),
        Some(bs) => Solution {
            status: Status::Optimal,
            x: form.structural_part(&bs.x).iter().map(|v| v.max(0.0)).collect(),
            objective: form.native_objective(bs.objective),
            iterations: visited,
            binding: form.binding_rows(&bs.x, DEFAULT_FEASIBILITY_TOL),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_model, lana_instance, to_equality_form, Constraint, Relation, Sense};

    fn form(objective: Vec<f64>, rows: Vec<(Vec<f64>, Relation, f64)>) -> StandardForm {
        let n = objective.len();
        to_equality_form(
            &build_model(
                Sense::Maximize,
                (0..n).map(|j| format!("x{j}")).collect(),
                objective,
                rows.into_iter()
                    .enumerate()
                    .map(|(i, (a, r, b))| Constraint::new(format!("c{i}"), a, r, b))
                    .collect(),
            )
            .unwrap(),
        )
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(21, 15), 54_264);
        assert_eq!(binomial(21, 6), 54_264);
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(2, 3), 0);
    }

    #[test]
    fn single_row_has_two_bases() {
        let f = form(vec![1.0], vec![(vec![1.0], Relation::Le, 1.0)]);
        let all: Vec<_> = enumerate_basic_solutions(&f).unwrap().collect();
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].x.as_slice(), &[1.0, 0.0]);
        assert_eq!(all[1].x.as_slice(), &[0.0, 1.0]);
        assert!(all.iter().all(|b| b.feasible));
    }

    #[test]
    fn toy_enumeration() {
        // bases of {x, y, s1, s2}:
        // {x,y} (2,2) obj 10; {x,s1} (2,0) obj 6; {x,s2} x=4,s2=-2 infeasible;
        // {y,s1} singular; {y,s2} (0,4) obj 8; {s1,s2} origin obj 0
        let f = form(
            vec![3.0, 2.0],
            vec![(vec![1.0, 1.0], Relation::Le, 4.0), (vec![1.0, 0.0], Relation::Le, 2.0)],
        );
        let mut it = enumerate_basic_solutions(&f).unwrap();
        let all: Vec<_> = it.by_ref().collect();
        assert_eq!(it.subsets_visited(), 6);
        assert_eq!(all.len(), 5);
        let feasible: Vec<f64> = all.iter().filter(|b| b.feasible).map(|b| b.objective).collect();
        assert_eq!(feasible, vec![10.0, 6.0, 8.0, 0.0]);

        let best = brute_force_optimum(&f).unwrap();
        assert_eq!(best.status, Status::Optimal);
        assert_eq!(best.objective, 10.0);
        assert_eq!(best.x, vec![2.0, 2.0]);
    }

    #[test]
    fn infeasible_toy() {
        let f = form(
            vec![1.0],
            vec![(vec![1.0], Relation::Le, 1.0), (vec![1.0], Relation::Ge, 2.0)],
        );
        assert_eq!(brute_force_optimum(&f).unwrap().status, Status::Infeasible);
    }

    #[test]
    fn lana_subset_count() {
        let f = to_equality_form(&lana_instance());
        let mut it = enumerate_basic_solutions(&f).unwrap();
        it.by_ref().for_each(drop);
        assert_eq!(it.subsets_visited(), 54_264);
    }

    #[test]
    fn guard_rejects_huge_enumerations() {
        let n = 30;
        let rows: Vec<_> = (0..15)
            .map(|i| {
                let mut a = vec![0.0; n];
                a[i] = 1.0;
                (a, Relation::Eq, 1.0)
            })
            .collect();
        let f = form(vec![1.0; n], rows);
        assert!(matches!(
            enumerate_basic_solutions(&f),
            Err(OracleError::TooLarge { .. })
        ));
    }
}
