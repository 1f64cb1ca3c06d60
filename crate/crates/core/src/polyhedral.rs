//! Exact rational linear algebra and Fourier–Motzkin feasibility.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut [Vec<Rational>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..ncols {
                    let delta = &f * &rows[r][j];
                    rows[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// A basis of `{x : rows · x = 0}`.
pub fn kernel(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -m[i][f].clone();
            }
            v
        })
        .collect()
}

/// Scales a rational vector to the primitive integer vector on the same ray.
pub fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `coeffs · x >= rhs`
    AtLeast,
    /// `coeffs · x == rhs`
    Equal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl LinearConstraint {
    pub fn at_least(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        LinearConstraint {
            coeffs,
            relation: Relation::AtLeast,
            rhs,
        }
    }

    pub fn equal(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        LinearConstraint {
            coeffs,
            relation: Relation::Equal,
            rhs,
        }
    }

    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        let lhs = dot(&self.coeffs, x);
        match self.relation {
            Relation::AtLeast => lhs >= self.rhs,
            Relation::Equal => lhs == self.rhs,
        }
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `coeffs · x >= rhs` during elimination.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Ineq {
    coeffs: Vec<Rational>,
    rhs: Rational,
}

impl Ineq {
    /// Divide by the largest absolute coefficient to keep numbers small and
    /// make duplicates comparable.
    fn normalized(mut self) -> Ineq {
        let scale = self
            .coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .filter(|m| !m.is_zero());
        if let Some(s) = scale {
            for c in self.coeffs.iter_mut() {
                *c /= &s;
            }
            self.rhs /= &s;
        }
        self
    }
}

enum Step {
    /// `x_var = (rhs - Σ coeffs_j x_j) / pivot`, other vars only.
    Substitute {
        var: usize,
        coeffs: Vec<Rational>,
        rhs: Rational,
    },
    /// Bounds on `x_var` from the inequalities that mentioned it.
    Eliminate { var: usize, bounds: Vec<Ineq> },
}

/// Finds a point satisfying every constraint, or `None` when the system is
/// infeasible. Exact; exponential in the worst case, intended for small
/// systems.
pub fn feasible_point(nvars: usize, constraints: &[LinearConstraint]) -> Option<Vec<Rational>> {
    let mut eqs: Vec<Ineq> = Vec::new();
    let mut ineqs: Vec<Ineq> = Vec::new();
    for c in constraints {
        assert_eq!(c.coeffs.len(), nvars, "constraint arity");
        let row = Ineq {
            coeffs: c.coeffs.clone(),
            rhs: c.rhs.clone(),
        };
        match c.relation {
            Relation::Equal => eqs.push(row),
            Relation::AtLeast => ineqs.push(row),
        }
    }

    let mut steps = Vec::new();

    while let Some(eq) = eqs.pop() {
        let Some(var) = (0..nvars).find(|&j| !eq.coeffs[j].is_zero()) else {
            if !eq.rhs.is_zero() {
                return None;
            }
            continue;
        };
        let pivot = eq.coeffs[var].clone();
        let substitute = |row: &mut Ineq| {
            let a = row.coeffs[var].clone();
            if a.is_zero() {
                return;
            }
            let f = a / &pivot;
            for j in 0..nvars {
                let d = &f * &eq.coeffs[j];
                row.coeffs[j] -= d;
            }
            row.rhs -= &f * &eq.rhs;
        };
        eqs.iter_mut().for_each(substitute);
        ineqs.iter_mut().for_each(substitute);
        let mut coeffs: Vec<Rational> = eq.coeffs.iter().map(|c| c / &pivot).collect();
        coeffs[var] = Rational::zero();
        steps.push(Step::Substitute {
            var,
            coeffs,
            rhs: &eq.rhs / &pivot,
        });
    }

    let mut remaining: Vec<usize> = (0..nvars)
        .filter(|v| !steps.iter().any(|s| matches!(s, Step::Substitute { var, .. } if var == v)))
        .collect();
    let mut rows = dedup(ineqs);

    loop {
        // Constant rows are decided now.
        let mut kept = Vec::with_capacity(rows.len());
        for r in rows {
            if r.coeffs.iter().all(|c| c.is_zero()) {
                if r.rhs.is_positive() {
                    return None;
                }
            } else {
                kept.push(r);
            }
        }
        rows = kept;
        if remaining.is_empty() {
            break;
        }
        // Eliminate the variable producing the fewest new rows.
        let (pos_in_remaining, &var) = remaining
            .iter()
            .enumerate()
            .min_by_key(|&(_, &v)| {
                let p = rows.iter().filter(|r| r.coeffs[v].is_positive()).count();
                let n = rows.iter().filter(|r| r.coeffs[v].is_negative()).count();
                p * n
            })
            .expect("nonempty");
        remaining.remove(pos_in_remaining);

        let (with, without): (Vec<Ineq>, Vec<Ineq>) = rows.into_iter().partition(|r| !r.coeffs[var].is_zero());
        let mut next = without;
        for p in with.iter().filter(|r| r.coeffs[var].is_positive()) {
            for n in with.iter().filter(|r| r.coeffs[var].is_negative()) {
                let a = p.coeffs[var].clone();
                let b = -n.coeffs[var].clone();
                let coeffs: Vec<Rational> = p.coeffs.iter().zip(&n.coeffs).map(|(x, y)| &b * x + &a * y).collect();
                next.push(Ineq {
                    coeffs,
                    rhs: &b * &p.rhs + &a * &n.rhs,
                });
            }
        }
        steps.push(Step::Eliminate { var, bounds: with });
        rows = dedup(next);
    }

    let mut x = vec![Rational::zero(); nvars];
    for step in steps.iter().rev() {
        match step {
            Step::Substitute { var, coeffs, rhs } => {
                x[*var] = rhs - dot(coeffs, &x);
            }
            Step::Eliminate { var, bounds } => {
                let mut lo: Option<Rational> = None;
                let mut hi: Option<Rational> = None;
                for b in bounds {
                    let a = &b.coeffs[*var];
                    let rest: Rational = (0..nvars)
                        .filter(|j| j != var)
                        .map(|j| &b.coeffs[j] * &x[j])
                        .sum();
                    let bound = (&b.rhs - rest) / a;
                    if a.is_positive() {
                        lo = Some(lo.map_or(bound.clone(), |l| l.max(bound)));
                    } else {
                        hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
                    }
                }
                x[*var] = match (lo, hi) {
                    (Some(l), Some(h)) => {
                        debug_assert!(l <= h);
                        (l + h) / rat(2)
                    }
                    (Some(l), None) => l,
                    (None, Some(h)) => h,
                    (None, None) => Rational::zero(),
                };
            }
        }
    }
    debug_assert!(constraints.iter().all(|c| c.satisfied_by(&x)));
    Some(x)
}

/// Range of `x_var` over `{x : coeffs · x >= rhs}` (inequalities only):
/// `None` if the system is infeasible, otherwise the lower and upper bounds,
/// each absent when unbounded.
pub fn variable_bounds(
    nvars: usize,
    constraints: &[LinearConstraint],
    var: usize,
) -> Option<(Option<Rational>, Option<Rational>)> {
    let mut rows: Vec<Ineq> = Vec::new();
    for c in constraints {
        assert_eq!(c.coeffs.len(), nvars, "constraint arity");
        rows.push(Ineq {
            coeffs: c.coeffs.clone(),
            rhs: c.rhs.clone(),
        });
        if c.relation == Relation::Equal {
            rows.push(Ineq {
                coeffs: c.coeffs.iter().map(|x| -x).collect(),
                rhs: -c.rhs.clone(),
            });
        }
    }
    let mut rows = dedup(rows);
    for elim in (0..nvars).filter(|&j| j != var) {
        let (with, mut next): (Vec<Ineq>, Vec<Ineq>) = rows.into_iter().partition(|r| !r.coeffs[elim].is_zero());
        for p in with.iter().filter(|r| r.coeffs[elim].is_positive()) {
            for n in with.iter().filter(|r| r.coeffs[elim].is_negative()) {
                let a = p.coeffs[elim].clone();
                let b = -n.coeffs[elim].clone();
                next.push(Ineq {
                    coeffs: p.coeffs.iter().zip(&n.coeffs).map(|(x, y)| &b * x + &a * y).collect(),
                    rhs: &b * &p.rhs + &a * &n.rhs,
                });
            }
        }
        rows = dedup(next);
    }
    let (mut lo, mut hi): (Option<Rational>, Option<Rational>) = (None, None);
    for r in rows {
        let a = &r.coeffs[var];
        if a.is_zero() {
            if r.rhs.is_positive() {
                return None;
            }
        } else if a.is_positive() {
            let b = &r.rhs / a;
            lo = Some(lo.map_or(b.clone(), |l| l.max(b)));
        } else {
            let b = &r.rhs / a;
            hi = Some(hi.map_or(b.clone(), |h| h.min(b)));
        }
    }
    if let (Some(l), Some(h)) = (&lo, &hi) {
        if l > h {
            return None;
        }
    }
    Some((lo, hi))
}

fn dedup(rows: Vec<Ineq>) -> Vec<Ineq> {
    let mut rows: Vec<Ineq> = rows.into_iter().map(Ineq::normalized).collect();
    rows.sort();
    rows.dedup();
    rows
}
