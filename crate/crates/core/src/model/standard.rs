use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{LpModel, Relation, Sense};
use crate::linalg::{DenseMatrix, DenseVector};

/// Origin of a column in an equality-form system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    /// Original variable, by index into the model's variables.
    Structural(usize),
    /// `+1` column of a `<=` row.
    Slack(usize),
    /// `-1` column of a `>=` row.
    Surplus(usize),
    /// Basis-seeding column of a `>=` or `=` row (Big-M form only).
    Artificial(usize),
}

/// `A·x = b, x ≥ 0`, maximize `cᵀx`.
///
/// Columns are laid out as the structural variables first, followed by one
/// slack or surplus column per inequality row in row order. Minimization
/// models are stored with a negated objective; `sense` remembers the original
/// direction so reported objectives can be restored.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardForm {
    pub a: DenseMatrix,
    pub b: DenseVector,
    pub c: DenseVector,
    pub column_kinds: Vec<ColumnKind>,
    pub row_origin: Vec<usize>,
    pub sense: Sense,
    pub num_structural: usize,
}

impl StandardForm {
    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    /// Internal (maximization) objective of a full-length point.
    pub fn internal_objective(&self, x: &[f64]) -> f64 {
        self.c.dot(x)
    }

    /// Converts an internal objective value back to the model's sense.
    pub fn native_objective(&self, internal: f64) -> f64 {
        match self.sense {
            Sense::Maximize => internal,
            Sense::Minimize => -internal,
        }
    }

    pub fn structural_part(&self, x: &[f64]) -> Vec<f64> {
        x[..self.num_structural].to_vec()
    }

    /// Rows whose slack or surplus is (numerically) zero at `x`; equality
    /// rows are always binding.
    pub fn binding_rows(&self, x: &[f64], tol: f64) -> Vec<usize> {
        let mut is_binding = vec![true; self.rows()];
        for (j, kind) in self.column_kinds.iter().enumerate() {
            if let ColumnKind::Slack(r) | ColumnKind::Surplus(r) = *kind {
                is_binding[r] = x[j].abs() <= tol * (1.0 + self.b[r].abs());
            }
        }
        (0..self.rows())
            .filter(|&r| is_binding[r])
            .map(|r| self.row_origin[r])
            .collect()
    }
}

/// `finite + m_coeff·M` with `M` symbolically larger than any real.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BigMNumber {
    pub finite: f64,
    pub m_coeff: f64,
}

impl BigMNumber {
    pub const ZERO: BigMNumber = BigMNumber {
        finite: 0.0,
        m_coeff: 0.0,
    };

    pub fn new(finite: f64, m_coeff: f64) -> Self {
        Self { finite, m_coeff }
    }

    pub fn real(finite: f64) -> Self {
        Self::new(finite, 0.0)
    }

    /// Negative under the lexicographic order, treating parts within `tol`
    /// of zero as zero.
    pub fn is_negative(&self, tol: f64) -> bool {
        self.m_coeff < -tol || (self.m_coeff.abs() <= tol && self.finite < -tol)
    }
}

impl PartialOrd for BigMNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.m_coeff.partial_cmp(&other.m_coeff)? {
            Ordering::Equal => self.finite.partial_cmp(&other.finite),
            ord => Some(ord),
        }
    }
}

impl Add for BigMNumber {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.finite + rhs.finite, self.m_coeff + rhs.m_coeff)
    }
}

impl Sub for BigMNumber {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.finite - rhs.finite, self.m_coeff - rhs.m_coeff)
    }
}

impl Mul<f64> for BigMNumber {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self::new(self.finite * k, self.m_coeff * k)
    }
}

impl Neg for BigMNumber {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.finite, -self.m_coeff)
    }
}

impl fmt::Display for BigMNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m_coeff == 0.0 {
            write!(f, "{}", self.finite)
        } else if self.m_coeff < 0.0 {
            write!(f, "{} - {}M", self.finite, -self.m_coeff)
        } else {
            write!(f, "{} + {}M", self.finite, self.m_coeff)
        }
    }
}

/// Equality form extended with one artificial column per `>=`/`=` row.
#[derive(Debug, Clone, PartialEq)]
pub struct BigMForm {
    pub base: StandardForm,
    /// `(column, row)` for every artificial, in row order.
    pub artificial_cols: Vec<(usize, usize)>,
    /// Base columns followed by the artificial columns.
    pub matrix: DenseMatrix,
    /// Objective coefficients; artificials carry `-M`.
    pub costs: Vec<BigMNumber>,
    pub column_kinds: Vec<ColumnKind>,
    /// Column forming the unit vector of each row in the starting basis.
    pub initial_basis: Vec<usize>,
}

impl BigMForm {
    pub fn is_artificial(&self, col: usize) -> bool {
        matches!(self.column_kinds[col], ColumnKind::Artificial(_))
    }
}

/// Adds `+slack` to `<=` rows and `-surplus` to `>=` rows; the objective is
/// extended with zeros and negated for minimization.
pub fn to_equality_form(model: &LpModel) -> StandardForm {
    let n = model.num_variables();
    let m = model.num_constraints();
    let extra = model
        .constraints()
        .iter()
        .filter(|c| c.relation != Relation::Eq)
        .count();
    let cols = n + extra;

    let mut a = DenseMatrix::zeros(m, cols);
    let mut column_kinds: Vec<ColumnKind> = (0..n).map(ColumnKind::Structural).collect();
    for (i, con) in model.constraints().iter().enumerate() {
        a.row_mut(i)[..n].copy_from_slice(&con.coefficients);
        let kind = match con.relation {
            Relation::Le => ColumnKind::Slack(i),
            Relation::Ge => ColumnKind::Surplus(i),
            Relation::Eq => continue,
        };
        let col = column_kinds.len();
        a[(i, col)] = if con.relation == Relation::Le { 1.0 } else { -1.0 };
        column_kinds.push(kind);
    }

    let sign = match model.sense() {
        Sense::Maximize => 1.0,
        Sense::Minimize => -1.0,
    };
    let mut c = vec![0.0; cols];
    for (cj, &oj) in c.iter_mut().zip(model.objective().iter()) {
        *cj = sign * oj;
    }

    StandardForm {
        a,
        b: model.constraints().iter().map(|c| c.rhs).collect(),
        c: c.into(),
        column_kinds,
        row_origin: (0..m).collect(),
        sense: model.sense(),
        num_structural: n,
    }
}

/// Equality form plus artificials on every row lacking a `+1` slack column.
pub fn to_big_m_form(model: &LpModel) -> BigMForm {
    let base = to_equality_form(model);
    let m = base.rows();
    let n_base = base.cols();

    let mut initial_basis = vec![usize::MAX; m];
    for (j, kind) in base.column_kinds.iter().enumerate() {
        if let ColumnKind::Slack(r) = *kind {
            initial_basis[r] = j;
        }
    }
    let needs_artificial: Vec<usize> = (0..m).filter(|&r| initial_basis[r] == usize::MAX).collect();
    let cols = n_base + needs_artificial.len();

    let mut matrix = DenseMatrix::zeros(m, cols);
    for i in 0..m {
        matrix.row_mut(i)[..n_base].copy_from_slice(base.a.row(i));
    }
    let mut column_kinds = base.column_kinds.clone();
    let mut costs: Vec<BigMNumber> = base.c.iter().map(|&c| BigMNumber::real(c)).collect();
    let mut artificial_cols = Vec::with_capacity(needs_artificial.len());
    for (k, &r) in needs_artificial.iter().enumerate() {
        let col = n_base + k;
        matrix[(r, col)] = 1.0;
        column_kinds.push(ColumnKind::Artificial(r));
        costs.push(BigMNumber::new(0.0, -1.0));
        artificial_cols.push((col, r));
        initial_basis[r] = col;
    }

    BigMForm {
        base,
        artificial_cols,
        matrix,
        costs,
        column_kinds,
        initial_basis,
    }
}
