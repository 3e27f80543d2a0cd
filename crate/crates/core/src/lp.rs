//! Exact linear programming for problems of the form
//!
//! ```text
//! maximize c·y  subject to  A y <= b,  y >= 0,  with b >= 0
//! ```
//!
//! The origin is feasible, so the slack basis starts the simplex directly.
//! The tableau is kept fraction-free: rows are scaled to integers once and
//! every pivot divides exactly by the previous pivot element, so all
//! entries stay integral and no gcd work is needed. Bland's rule picks
//! both entering and leaving variables, which guarantees termination.
//! Arithmetic runs on `i64`, and transparently restarts on `i128` and then
//! on big integers if an intermediate would overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardLp {
    pub objective: Vec<Rational>,
    pub rows: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    /// Optimal `y`.
    pub primal: Vec<Rational>,
    /// Optimal multipliers of the rows: `x >= 0` with `Aᵀx >= c` and `b·x = value`.
    pub dual: Vec<Rational>,
    pub pivots: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Unbounded,
}

impl StandardLp {
    fn validate(&self) -> Result<()> {
        let n = self.objective.len();
        if self.rows.len() != self.rhs.len() {
            return Err(Error::Precondition("row count and rhs length differ".into()));
        }
        if let Some(r) = self.rows.iter().find(|r| r.len() != n) {
            return Err(Error::Precondition(format!("row of width {} in a {n}-variable problem", r.len())));
        }
        if self.rhs.iter().any(|b| *b < Rational::ZERO) {
            return Err(Error::Precondition("right-hand sides must be non-negative".into()));
        }
        Ok(())
    }
}

/// Solves `lp` exactly.
pub fn maximize(lp: &StandardLp) -> Result<LpOutcome> {
    lp.validate()?;
    Ok(solve_scaled(&Scaled::new(lp)))
}

/// Same as [`maximize`] for data that is already integral: the objective
/// is `objective / objective_scale` and every row has integer entries.
pub(crate) fn maximize_integral(
    objective: Vec<i128>,
    objective_scale: i128,
    rows: Vec<Vec<i128>>,
    rhs: Vec<i128>,
) -> LpOutcome {
    debug_assert!(rhs.iter().all(|&b| b >= 0) && objective_scale > 0);
    let row_scale = vec![1; rows.len()];
    solve_scaled(&Scaled { rows, rhs, objective, row_scale, objective_scale })
}

fn solve_scaled(scaled: &Scaled) -> LpOutcome {
    Tableau::<i64>::build(scaled)
        .and_then(|t| t.solve(scaled))
        .or_else(|_| Tableau::<i128>::build(scaled).and_then(|t| t.solve(scaled)))
        .or_else(|_| Tableau::<BigInt>::build(scaled).and_then(|t| t.solve(scaled)))
        .unwrap_or_else(|_| unreachable!("big integers do not overflow"))
}

struct Overflow;

trait Exact: Clone + Integer + Signed + CheckedMul + CheckedSub + CheckedAdd + ToPrimitive {
    fn from_wide(v: i128) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Exact for i64 {
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }

    fn from_wide(v: i128) -> Option<Self> {
        i64::try_from(v).ok()
    }
}

impl Exact for i128 {
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }

    fn from_wide(v: i128) -> Option<Self> {
        Some(v)
    }
}

impl Exact for BigInt {
    fn to_big(&self) -> BigInt {
        self.clone()
    }

    fn from_wide(v: i128) -> Option<Self> {
        Some(BigInt::from(v))
    }
}

/// Integer rows and the factors that produced them.
struct Scaled {
    rows: Vec<Vec<i128>>,
    rhs: Vec<i128>,
    objective: Vec<i128>,
    row_scale: Vec<i128>,
    objective_scale: i128,
}

impl Scaled {
    fn new(lp: &StandardLp) -> Self {
        let mut rows = Vec::with_capacity(lp.rows.len());
        let mut rhs = Vec::with_capacity(lp.rows.len());
        let mut row_scale = Vec::with_capacity(lp.rows.len());
        for (row, b) in lp.rows.iter().zip(&lp.rhs) {
            let scale = Rational::common_denominator(row.iter().chain(std::iter::once(b)));
            rows.push(row.iter().map(|a| a.scaled_to_integer(scale)).collect());
            rhs.push(b.scaled_to_integer(scale));
            row_scale.push(scale);
        }
        let objective_scale = Rational::common_denominator(&lp.objective);
        let objective = lp.objective.iter().map(|c| c.scaled_to_integer(objective_scale)).collect();
        Scaled { rows, rhs, objective, row_scale, objective_scale }
    }
}

struct Tableau<T> {
    m: usize,
    n: usize,
    width: usize,
    /// `m` constraint rows followed by the objective row; last column is rhs.
    cells: Vec<T>,
    basis: Vec<usize>,
    denom: T,
}

fn checked<T>(v: Option<T>) -> std::result::Result<T, Overflow> {
    v.ok_or(Overflow)
}

impl<T: Exact> Tableau<T> {
    fn build(s: &Scaled) -> std::result::Result<Self, Overflow> {
        let m = s.rows.len();
        let n = s.objective.len();
        let width = n + m + 1;
        let mut cells = vec![T::zero(); (m + 1) * width];
        for i in 0..m {
            for j in 0..n {
                cells[i * width + j] = checked(T::from_wide(s.rows[i][j]))?;
            }
            cells[i * width + n + i] = T::one();
            cells[i * width + width - 1] = checked(T::from_wide(s.rhs[i]))?;
        }
        for j in 0..n {
            cells[m * width + j] = checked(T::from_wide(-s.objective[j]))?;
        }
        Ok(Tableau { m, n, width, cells, basis: (n..n + m).collect(), denom: T::one() })
    }

    fn at(&self, i: usize, j: usize) -> &T {
        &self.cells[i * self.width + j]
    }

    fn entering(&self) -> Option<usize> {
        (0..self.n + self.m).find(|&j| self.at(self.m, j).is_negative())
    }

    fn leaving(&self, q: usize) -> std::result::Result<Option<usize>, Overflow> {
        let rhs = self.width - 1;
        let mut best: Option<usize> = None;
        for i in 0..self.m {
            if !self.at(i, q).is_positive() {
                continue;
            }
            best = Some(match best {
                None => i,
                Some(k) => {
                    // Compare rhs_i / a_iq with rhs_k / a_kq.
                    let lhs = checked(self.at(i, rhs).checked_mul(self.at(k, q)))?;
                    let rhs_v = checked(self.at(k, rhs).checked_mul(self.at(i, q)))?;
                    match lhs.cmp(&rhs_v) {
                        std::cmp::Ordering::Less => i,
                        std::cmp::Ordering::Equal if self.basis[i] < self.basis[k] => i,
                        _ => k,
                    }
                }
            });
        }
        Ok(best)
    }

    fn pivot(&mut self, r: usize, q: usize) -> std::result::Result<(), Overflow> {
        let w = self.width;
        let p = self.at(r, q).clone();
        let pivot_row: Vec<T> = self.cells[r * w..(r + 1) * w].to_vec();
        for i in 0..=self.m {
            if i == r {
                continue;
            }
            let factor = self.cells[i * w + q].clone();
            for j in 0..w {
                let cell = &self.cells[i * w + j];
                let a = checked(p.checked_mul(cell))?;
                let b = checked(factor.checked_mul(&pivot_row[j]))?;
                let num = checked(a.checked_sub(&b))?;
                debug_assert!(num.is_multiple_of(&self.denom), "fraction-free pivot lost integrality");
                self.cells[i * w + j] = num / self.denom.clone();
            }
        }
        self.denom = p;
        self.basis[r] = q;
        Ok(())
    }

    fn solve(mut self, s: &Scaled) -> std::result::Result<LpOutcome, Overflow> {
        let mut pivots = 0;
        while let Some(q) = self.entering() {
            match self.leaving(q)? {
                None => return Ok(LpOutcome::Unbounded),
                Some(r) => self.pivot(r, q)?,
            }
            pivots += 1;
        }
        Ok(LpOutcome::Optimal(self.extract(s, pivots)))
    }

    /// `num / (denom * scale)` as a reduced rational.
    fn ratio(&self, num: &T, scale: i128) -> Rational {
        if num.is_zero() {
            return Rational::ZERO;
        }
        let small = num
            .to_i128()
            .zip(self.denom.to_i128().and_then(|d| d.checked_mul(scale)));
        if let Some((n, d)) = small {
            let g = n.gcd(&d);
            return Rational::new(n / g, d / g);
        }
        let n = num.to_big();
        let d = self.denom.to_big() * BigInt::from(scale);
        let g = n.gcd(&d);
        let to = |v: BigInt| v.to_i128().expect("solution value fits in i128");
        Rational::new(to(n / g.clone()), to(d / g))
    }

    fn extract(&self, s: &Scaled, pivots: usize) -> LpSolution {
        let rhs = self.width - 1;
        let mut primal = vec![Rational::ZERO; self.n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n {
                primal[b] = self.ratio(self.at(i, rhs), 1);
            }
        }
        let dual = (0..self.m)
            .map(|i| {
                let y = self.ratio(self.at(self.m, self.n + i), s.objective_scale);
                y * Rational::from_integer(s.row_scale[i])
            })
            .collect();
        let value = self.ratio(self.at(self.m, rhs), s.objective_scale);
        LpSolution { value, primal, dual, pivots }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from(n)
    }

    fn lp(c: &[i64], rows: &[&[i64]], b: &[i64]) -> StandardLp {
        StandardLp {
            objective: c.iter().map(|&x| r(x)).collect(),
            rows: rows.iter().map(|row| row.iter().map(|&x| r(x)).collect()).collect(),
            rhs: b.iter().map(|&x| r(x)).collect(),
        }
    }

    fn check_certificate(p: &StandardLp, s: &LpSolution) {
        // Primal feasibility.
        for (row, b) in p.rows.iter().zip(&p.rhs) {
            let lhs: Rational = row.iter().zip(&s.primal).map(|(a, y)| *a * *y).sum();
            assert!(lhs <= *b);
        }
        assert!(s.primal.iter().all(|y| *y >= Rational::ZERO));
        // Dual feasibility.
        assert!(s.dual.iter().all(|x| *x >= Rational::ZERO));
        for j in 0..p.objective.len() {
            let col: Rational = p.rows.iter().zip(&s.dual).map(|(row, x)| row[j] * *x).sum();
            assert!(col >= p.objective[j]);
        }
        // Equal objectives.
        let primal_value: Rational = p.objective.iter().zip(&s.primal).map(|(c, y)| *c * *y).sum();
        let dual_value: Rational = p.rhs.iter().zip(&s.dual).map(|(b, x)| *b * *x).sum();
        assert_eq!(primal_value, s.value);
        assert_eq!(dual_value, s.value);
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6).
        let p = lp(&[3, 5], &[&[1, 0], &[0, 2], &[3, 2]], &[4, 12, 18]);
        let LpOutcome::Optimal(s) = maximize(&p).unwrap() else { panic!() };
        assert_eq!(s.value, r(36));
        assert_eq!(s.primal, vec![r(2), r(6)]);
        check_certificate(&p, &s);
    }

    #[test]
    fn fractional_optimum() {
        // max x + y, 2x + y <= 3/2, x + 3y <= 2 -> (1/2, 1/2).
        let p = StandardLp {
            objective: vec![r(1), r(1)],
            rows: vec![vec![r(2), r(1)], vec![r(1), r(3)]],
            rhs: vec![Rational::new(3, 2), r(2)],
        };
        let LpOutcome::Optimal(s) = maximize(&p).unwrap() else { panic!() };
        assert_eq!(s.value, r(1));
        assert_eq!(s.primal, vec![Rational::new(1, 2), Rational::new(1, 2)]);
        check_certificate(&p, &s);
    }

    #[test]
    fn unbounded() {
        let p = lp(&[1, 1], &[&[1, -1]], &[1]);
        assert_eq!(maximize(&p).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn degenerate_cycles_are_avoided() {
        // Beale's classic cycling example (in maximization form).
        let p = StandardLp {
            objective: vec![Rational::new(3, 4), r(-150), Rational::new(1, 50), r(-6)],
            rows: vec![
                vec![Rational::new(1, 4), r(-60), Rational::new(-1, 25), r(9)],
                vec![Rational::new(1, 2), r(-90), Rational::new(-1, 50), r(3)],
                vec![r(0), r(0), r(1), r(0)],
            ],
            rhs: vec![r(0), r(0), r(1)],
        };
        let LpOutcome::Optimal(s) = maximize(&p).unwrap() else { panic!() };
        assert_eq!(s.value, Rational::new(1, 20));
        check_certificate(&p, &s);
    }

    #[test]
    fn rejects_negative_rhs() {
        let p = lp(&[1], &[&[1]], &[-1]);
        assert!(maximize(&p).is_err());
    }

    #[test]
    fn big_entries_fall_back_to_bigint() {
        // Pivot products reach 2^135 while the optimum stays small.
        let big = Rational::from_integer(1 << 45);
        let p = StandardLp {
            objective: vec![r(1), r(1), r(1)],
            rows: vec![vec![big, r(1), r(1)], vec![r(1), big, r(1)], vec![r(1), r(1), big]],
            rhs: vec![big, big, big],
        };
        let LpOutcome::Optimal(s) = maximize(&p).unwrap() else { panic!() };
        let each = big / (big + r(2));
        assert_eq!(s.primal, vec![each; 3]);
        check_certificate(&p, &s);
    }

    #[test]
    fn empty_problem() {
        let p = StandardLp { objective: vec![], rows: vec![], rhs: vec![] };
        let LpOutcome::Optimal(s) = maximize(&p).unwrap() else { panic!() };
        assert_eq!(s.value, Rational::ZERO);
    }
}
