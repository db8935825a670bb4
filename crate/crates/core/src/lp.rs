//! Exact linear feasibility with certificates.
//!
//! Systems are equalities `A x = b` over variables that are each either
//! nonnegative or free. [`solve_feasibility`] runs a phase-1 simplex with
//! Bland's rule on a dense rational tableau and returns either a satisfying
//! assignment or Farkas multipliers `y` with
//!
//! * `yᵀA_j ≥ 0` for every nonnegative variable `j`,
//! * `yᵀA_j = 0` for every free variable `j`,
//! * `yᵀb < 0`,
//!
//! which no feasible `x` can satisfy since `yᵀb = Σ_j (yᵀA_j) x_j ≥ 0`.
//! Both branches are checked by substitution in [`verify_certificate`].

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::points::{IndexSet, PointSet};
use crate::rational::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Equation {
    pub coeffs: Vector,
    pub rhs: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LinearSystem {
    variables: usize,
    equalities: Vec<Equation>,
    nonnegative: Vec<bool>,
}

impl LinearSystem {
    /// System over `variables` unknowns, all nonnegative until marked free.
    pub fn new(variables: usize) -> Self {
        LinearSystem { variables, equalities: Vec::new(), nonnegative: vec![true; variables] }
    }

    pub fn variables(&self) -> usize {
        self.variables
    }

    pub fn equalities(&self) -> &[Equation] {
        &self.equalities
    }

    pub fn nonnegative(&self) -> &[bool] {
        &self.nonnegative
    }

    pub fn set_free(&mut self, var: usize) {
        self.nonnegative[var] = false;
    }

    /// Appends a new variable and returns its index.
    pub fn add_variable(&mut self, nonnegative: bool) -> usize {
        self.variables += 1;
        self.nonnegative.push(nonnegative);
        for e in &mut self.equalities {
            e.coeffs.push(Rat::zero());
        }
        self.variables - 1
    }

    /// Panics if `coeffs` has the wrong length.
    pub fn add_equality(&mut self, coeffs: Vector, rhs: Rat) {
        assert_eq!(coeffs.len(), self.variables, "coefficient vector length");
        self.equalities.push(Equation { coeffs, rhs });
    }

    /// `Σ coeffs_j x_j = rhs` from sparse terms.
    pub fn add_sparse(&mut self, terms: &[(usize, Rat)], rhs: Rat) {
        let mut coeffs = vec![Rat::zero(); self.variables];
        for (j, c) in terms {
            coeffs[*j] += c;
        }
        self.add_equality(coeffs, rhs);
    }

    /// Well-formed means every row has one coefficient per variable.
    pub fn is_well_formed(&self) -> bool {
        self.nonnegative.len() == self.variables && self.equalities.iter().all(|e| e.coeffs.len() == self.variables)
    }

    pub fn is_satisfied_by(&self, x: &[Rat]) -> bool {
        x.len() == self.variables
            && x.iter().zip(&self.nonnegative).all(|(v, &nn)| !nn || !v.is_negative())
            && self.equalities.iter().all(|e| linalg::dot(&e.coeffs, x) == e.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeasWitness {
    pub assignment: Vector,
}

/// One multiplier per equality row.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InfeasCert {
    pub multipliers: Vector,
}

impl InfeasCert {
    pub fn verify(&self, sys: &LinearSystem) -> bool {
        if self.multipliers.len() != sys.equalities.len() {
            return false;
        }
        let combined_rhs: Rat = self.multipliers.iter().zip(&sys.equalities).map(|(y, e)| y * &e.rhs).sum();
        if !combined_rhs.is_negative() {
            return false;
        }
        (0..sys.variables).all(|j| {
            let col: Rat = self
                .multipliers
                .iter()
                .zip(&sys.equalities)
                .filter(|(y, e)| !y.is_zero() && !e.coeffs[j].is_zero())
                .map(|(y, e)| y * &e.coeffs[j])
                .sum();
            if sys.nonnegative[j] {
                !col.is_negative()
            } else {
                col.is_zero()
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Verdict {
    Feasible(FeasWitness),
    Infeasible(InfeasCert),
}

impl Verdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Verdict::Feasible(_))
    }

    pub fn witness(&self) -> Option<&FeasWitness> {
        match self {
            Verdict::Feasible(w) => Some(w),
            Verdict::Infeasible(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&InfeasCert> {
        match self {
            Verdict::Feasible(_) => None,
            Verdict::Infeasible(c) => Some(c),
        }
    }
}

pub fn verify_certificate(sys: &LinearSystem, v: &Verdict) -> bool {
    match v {
        Verdict::Feasible(w) => sys.is_satisfied_by(&w.assignment),
        Verdict::Infeasible(c) => c.verify(sys),
    }
}

/// Outcome of maximizing a linear objective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Optimum {
    Infeasible(InfeasCert),
    Unbounded,
    Optimal { assignment: Vector, value: Rat },
}

/// Dense simplex tableau over split variables and one artificial per row.
struct Tableau {
    rows: Vec<Vector>,
    rhs: Vec<Rat>,
    /// Reduced costs for every column; `obj` is minus the current objective.
    cost: Vector,
    obj: Rat,
    basis: Vec<usize>,
    /// Number of structural (split) columns; artificials follow them.
    structural: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        if !inv.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v = &*v * &inv;
                }
            }
            self.rhs[r] = &self.rhs[r] * &inv;
        }
        let nz: Vec<usize> = (0..self.rows[r].len()).filter(|&j| !self.rows[r][j].is_zero()).collect();
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for &j in &nz {
                let v = &self.rows[i][j] - &(&f * &pivot_row[j]);
                self.rows[i][j] = v;
            }
            if !pivot_rhs.is_zero() {
                self.rhs[i] = &self.rhs[i] - &(&f * &pivot_rhs);
            }
        }
        if !self.cost[c].is_zero() {
            let f = self.cost[c].clone();
            for &j in &nz {
                let v = &self.cost[j] - &(&f * &pivot_row[j]);
                self.cost[j] = v;
            }
            self.obj = &self.obj - &(&f * &pivot_rhs);
        }
        self.basis[r] = c;
    }

    /// Bland's rule until optimal. `allowed` limits entering columns.
    /// Returns false if the objective is unbounded below.
    fn run(&mut self, allowed: usize) -> bool {
        loop {
            let Some(c) = (0..allowed).find(|&j| self.cost[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br || (ratio == br && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }
}

/// Maps split columns back to original variables.
struct Split {
    /// For each structural column: (original variable, sign).
    cols: Vec<(usize, bool)>,
}

fn phase_one(sys: &LinearSystem) -> (Tableau, Split, Vec<bool>) {
    let mut cols = Vec::new();
    for j in 0..sys.variables {
        cols.push((j, true));
        if !sys.nonnegative[j] {
            cols.push((j, false));
        }
    }
    let n = cols.len();
    let m = sys.equalities.len();
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut flipped = Vec::with_capacity(m);
    for (i, e) in sys.equalities.iter().enumerate() {
        let flip = e.rhs.is_negative();
        flipped.push(flip);
        let mut row = Vec::with_capacity(n + m);
        for &(j, pos) in &cols {
            let c = &e.coeffs[j];
            row.push(if pos != flip { c.clone() } else { -c });
        }
        for k in 0..m {
            row.push(if k == i { Rat::one() } else { Rat::zero() });
        }
        rows.push(row);
        rhs.push(if flip { -&e.rhs } else { e.rhs.clone() });
    }
    let mut cost = vec![Rat::zero(); n + m];
    for j in 0..n {
        cost[j] = -rows.iter().map(|r| &r[j]).sum::<Rat>();
    }
    let obj = -rhs.iter().sum::<Rat>();
    let mut t = Tableau { rows, rhs, cost, obj, basis: (n..n + m).collect(), structural: n };
    t.run(n + m);
    (t, Split { cols }, flipped)
}

fn extract(t: &Tableau, split: &Split, vars: usize) -> Vector {
    let mut x = vec![Rat::zero(); vars];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < t.structural {
            let (j, pos) = split.cols[b];
            if pos {
                x[j] += &t.rhs[i];
            } else {
                x[j] -= &t.rhs[i];
            }
        }
    }
    x
}

fn farkas(t: &Tableau, flipped: &[bool]) -> InfeasCert {
    let n = t.structural;
    // y'_i = 1 - reduced cost of artificial i; y = -D y'.
    let mut y: Vector = flipped
        .iter()
        .enumerate()
        .map(|(i, &flip)| {
            let yp = &Rat::one() - &t.cost[n + i];
            if flip {
                yp
            } else {
                -yp
            }
        })
        .collect();
    // normalize so that yᵀb = -1; the phase-1 optimum is -obj > 0
    let scale = (-&t.obj).recip();
    for v in &mut y {
        *v = &*v * &scale;
    }
    InfeasCert { multipliers: y }
}

/// Decides whether the system has a solution, with a certificate either way.
pub fn solve_feasibility(sys: &LinearSystem) -> Verdict {
    assert!(sys.is_well_formed(), "malformed linear system");
    let (t, split, flipped) = phase_one(sys);
    if t.obj.is_zero() {
        Verdict::Feasible(FeasWitness { assignment: extract(&t, &split, sys.variables) })
    } else {
        Verdict::Infeasible(farkas(&t, &flipped))
    }
}

/// Maximizes `objective · x` subject to the system.
pub fn maximize(sys: &LinearSystem, objective: &[Rat]) -> Optimum {
    assert!(sys.is_well_formed(), "malformed linear system");
    assert_eq!(objective.len(), sys.variables);
    let (mut t, split, flipped) = phase_one(sys);
    if !t.obj.is_zero() {
        return Optimum::Infeasible(farkas(&t, &flipped));
    }
    let n = t.structural;
    // Drive zero-level artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            if let Some(c) = (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                t.pivot(i, c);
            } else {
                t.rows.remove(i);
                t.rhs.remove(i);
                t.basis.remove(i);
                continue;
            }
        }
        i += 1;
    }
    // minimize -objective
    let c: Vector =
        split.cols.iter().map(|&(j, pos)| if pos { -&objective[j] } else { objective[j].clone() }).collect();
    let mut cost = vec![Rat::zero(); n + flipped.len()];
    cost[..n].clone_from_slice(&c);
    let mut obj = Rat::zero();
    for (i, &b) in t.basis.iter().enumerate() {
        let cb = &c[b];
        if cb.is_zero() {
            continue;
        }
        for (j, v) in t.rows[i].iter().enumerate() {
            if !v.is_zero() {
                cost[j] = &cost[j] - &(cb * v);
            }
        }
        obj = &obj - &(cb * &t.rhs[i]);
    }
    t.cost = cost;
    t.obj = obj;
    if !t.run(n) {
        return Optimum::Unbounded;
    }
    let x = extract(&t, &split, sys.variables);
    let value = linalg::dot(objective, &x);
    Optimum::Optimal { assignment: x, value }
}

/// Barycentric certificate that `point ∈ conv{x_i : i ∈ indices}`; one
/// coefficient per index in increasing index order.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Barycentric {
    pub indices: IndexSet,
    pub coefficients: Vector,
}

impl Barycentric {
    /// Exact substitution: nonnegative, sums to one, reproduces `point`.
    pub fn verify(&self, ground: &PointSet, point: &[Rat]) -> bool {
        if self.indices.is_empty()
            || self.coefficients.len() != self.indices.len()
            || self.indices.iter().any(|i| i >= ground.len())
            || point.len() != ground.dim()
        {
            return false;
        }
        if self.coefficients.iter().any(Rat::is_negative) || self.coefficients.iter().sum::<Rat>() != Rat::one() {
            return false;
        }
        let p = linalg::combination(
            ground.dim(),
            self.coefficients.iter().zip(self.indices.iter().map(|i| ground.point(i))),
        );
        p == point
    }
}

/// Variables are `λ_i` for `i ∈ indices` in increasing order.
pub fn hull_membership_system(p: &[Rat], ground: &PointSet, indices: IndexSet) -> LinearSystem {
    let idx: Vec<usize> = indices.iter().collect();
    let mut sys = LinearSystem::new(idx.len());
    sys.add_equality(vec![Rat::one(); idx.len()], Rat::one());
    for k in 0..ground.dim() {
        sys.add_equality(idx.iter().map(|&i| ground.point(i)[k].clone()).collect(), p[k].clone());
    }
    sys
}

/// Decides `p ∈ conv{x_i : i ∈ indices}`. The feasible witness is the vector
/// of barycentric coefficients.
pub fn in_convex_hull(p: &[Rat], ground: &PointSet, indices: IndexSet) -> Result<Verdict> {
    if indices.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    ground.check_indices(indices)?;
    ground.check_point(p)?;
    Ok(solve_feasibility(&hull_membership_system(p, ground, indices)))
}

/// [`in_convex_hull`] packaged as a [`Barycentric`] certificate on success.
pub fn hull_membership(p: &[Rat], ground: &PointSet, indices: IndexSet) -> Result<Option<Barycentric>> {
    Ok(match in_convex_hull(p, ground, indices)? {
        Verdict::Feasible(w) => Some(Barycentric { indices, coefficients: w.assignment }),
        Verdict::Infeasible(_) => None,
    })
}
