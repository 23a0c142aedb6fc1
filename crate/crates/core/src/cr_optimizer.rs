//! Selection of the reference weights by constrained extremization of the
//! Cramér–Rao product `f = I·(⟨x²⟩ - ⟨x⟩²)` under the normalization
//! `φ = Σ_k F_k^{2/k} = 1`.
//!
//! For moment orders {2, 4} (even potential, so `⟨x⟩ = 0` and the variance
//! is `⟨x²⟩`) the stationarity system `∇f = μ∇φ, φ = 1` collapses to a
//! single scalar equation
//!
//! ```text
//! F₂^{-1/2} (1-F₂)^{-1/3} (7F₂ - 3) = 3 |λ₂|^{1/2} |λ₄|^{-1/3},
//! F₄ = (1 - F₂)²,
//! ```
//!
//! whose left side is strictly increasing on (3/7, 1), so the critical
//! point is unique and a bracketed root solve finds it.

use crate::fisher_core::{MultiplierVector, ReferenceWeights, FD_RELATIVE_STEP};
use crate::{Error, Result};

/// Lower endpoint of the root bracket: `7F₂ - 3 = 0`.
pub const F2_LOWER: f64 = 3.0 / 7.0;

/// Absolute tolerance of the root solve in `F₂`.
const ROOT_XTOL: f64 = 1e-13;

/// Inward nudge keeping evaluations off the singular bracket endpoints.
const BRACKET_NUDGE: f64 = 1e-15;

/// A quartic-oscillator extremization problem: multipliers over orders
/// {2, 4} with `λ₂ ≤ 0`, `λ₄ ≤ 0`, not both zero. `λ₄ = 0` is the harmonic
/// degenerate case; `λ₂ = 0` is the pure-quartic degenerate case.
#[derive(Debug, Clone, Copy)]
pub struct CrProblem {
    lambda2: f64,
    lambda4: f64,
}

impl CrProblem {
    pub fn new(lambda2: f64, lambda4: f64) -> Result<Self> {
        if !lambda2.is_finite() || !lambda4.is_finite() {
            return Err(Error::Domain("multipliers must be finite".into()));
        }
        if lambda2 > 0.0 || lambda4 > 0.0 {
            return Err(Error::Domain(format!(
                "confining problem requires λ₂ ≤ 0 and λ₄ ≤ 0, got ({lambda2}, {lambda4})"
            )));
        }
        if lambda2 == 0.0 && lambda4 == 0.0 {
            return Err(Error::Domain("λ₂ and λ₄ cannot both vanish".into()));
        }
        Ok(Self { lambda2, lambda4 })
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }

    pub fn lambda4(&self) -> f64 {
        self.lambda4
    }

    pub fn multipliers(&self) -> MultiplierVector {
        MultiplierVector::from_pairs(&[(2, self.lambda2), (4, self.lambda4)])
            .expect("orders {2,4} are valid")
    }
}

/// Critical point of the constrained Cramér–Rao extremization.
///
/// `f2 + f4^{1/2} = 1` holds by construction (`f4 = (1-f2)²`). In the
/// pure-quartic degenerate case (`λ₂ = 0`) the CR product and the
/// stationarity multiplier diverge and are reported as `+∞`.
#[derive(Debug, Clone, Copy)]
pub struct CrSolution {
    pub f2: f64,
    pub f4: f64,
    /// Lagrange multiplier `μ` of the stationarity system `∇f = μ∇φ`.
    pub multiplier_mu: f64,
    /// Cramér–Rao product at the critical point; always ≥ 1.
    pub f_value: f64,
}

impl CrSolution {
    /// Reference weights over orders {2, 4}; errors in the degenerate
    /// harmonic case where `F₄ = 0` is not a valid weight.
    pub fn weights(&self) -> Result<ReferenceWeights> {
        ReferenceWeights::from_pairs(&[(2, self.f2), (4, self.f4)])
    }
}

fn require_quartic_orders(orders: &[u32], what: &str) -> Result<()> {
    if orders != [2, 4] {
        return Err(Error::Domain(format!(
            "{what} requires moment orders {{2, 4}}, got {orders:?}"
        )));
    }
    Ok(())
}

/// Cramér–Rao product expressed through the weights,
/// `f(F₂,F₄) = F₂ + 2·F₂^{1/2}·F₄^{1/3}·|λ₂|^{-1/2}·|λ₄|^{1/3}`,
/// for orders {2, 4} with `λ₂ < 0` and `λ₄ < 0`. The variance is `⟨x²⟩`
/// since the even potential has `⟨x⟩ = 0`.
pub fn cr_objective(weights: &ReferenceWeights, multipliers: &MultiplierVector) -> Result<f64> {
    require_quartic_orders(weights.orders().orders(), "cr_objective")?;
    require_quartic_orders(multipliers.orders().orders(), "cr_objective")?;
    let (f2, f4) = (weights.f(2).unwrap(), weights.f(4).unwrap());
    let (l2, l4) = (multipliers.get(2).unwrap(), multipliers.get(4).unwrap());
    if l2 >= 0.0 || l4 >= 0.0 {
        return Err(Error::Domain(format!(
            "cr_objective requires λ₂ < 0 and λ₄ < 0, got ({l2}, {l4})"
        )));
    }
    Ok(f2 + 2.0 * f2.sqrt() * f4.cbrt() * l2.abs().powf(-0.5) * l4.abs().cbrt())
}

/// Normalization constraint `φ = Σ_k F_k^{2/k}`; equals `F₂ + F₄^{1/2}`
/// for the quartic case. Defined for any order set.
pub fn cr_constraint(weights: &ReferenceWeights) -> f64 {
    weights
        .iter_f()
        .map(|(k, f)| f.powf(2.0 / k as f64))
        .sum()
}

/// Left side `g(F₂) = F₂^{-1/2}·(1-F₂)^{-1/3}·(7F₂-3)` of the critical
/// equation; strictly increasing from 0 to +∞ on the open bracket
/// `(3/7, 1)`.
pub fn critical_equation_lhs(f2: f64) -> Result<f64> {
    if !(f2 > F2_LOWER && f2 < 1.0) {
        return Err(Error::Domain(format!(
            "critical equation is bracketed on (3/7, 1), got F₂ = {f2}"
        )));
    }
    Ok(f2.powf(-0.5) * (1.0 - f2).powf(-1.0 / 3.0) * (7.0 * f2 - 3.0))
}

/// Right side `3·|λ₂|^{1/2}·|λ₄|^{-1/3}` of the critical equation.
pub fn critical_equation_rhs(lambda2: f64, lambda4: f64) -> f64 {
    3.0 * lambda2.abs().sqrt() / lambda4.abs().cbrt()
}

/// Bisection tightened by a safeguarded secant step. `f(lo) < 0 < f(hi)`
/// must hold on entry; converges to `|hi - lo| <= xtol`.
fn bracketed_root<F>(f: F, mut lo: f64, mut hi: f64, xtol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    if f_lo > 0.0 || f_hi < 0.0 {
        return Err(Error::Internal(format!(
            "root bracket violated: f({lo}) = {f_lo}, f({hi}) = {f_hi}"
        )));
    }
    for _ in 0..200 {
        if hi - lo <= xtol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        // secant proposal from current bracket endpoints
        let secant = lo - f_lo * (hi - lo) / (f_hi - f_lo);
        let x = if secant.is_finite() && secant > lo + 0.25 * xtol && secant < hi - 0.25 * xtol {
            secant
        } else {
            mid
        };
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
        // keep worst-case convergence at bisection rate
        let mid2 = 0.5 * (lo + hi);
        if hi - lo > xtol {
            let fm = f(mid2);
            if fm == 0.0 {
                return Ok(mid2);
            }
            if fm < 0.0 {
                lo = mid2;
                f_lo = fm;
            } else {
                hi = mid2;
                f_hi = fm;
            }
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Solve the constrained extremization for the weights.
///
/// Degenerate limits are returned in closed form: `λ₄ = 0` gives the
/// harmonic solution `(F₂, F₄) = (1, 0)` and `λ₂ = 0` gives the
/// pure-quartic solution `F₂ = 3/7` exactly. Otherwise the critical
/// equation is root-solved on `(3/7, 1)` to an absolute tolerance of
/// 1e-13 in `F₂`.
pub fn solve_critical_point(problem: &CrProblem) -> Result<CrSolution> {
    let (l2, l4) = (problem.lambda2, problem.lambda4);

    if l4 == 0.0 {
        // harmonic: the quartic weight vanishes and the CR bound saturates
        return Ok(CrSolution {
            f2: 1.0,
            f4: 0.0,
            multiplier_mu: 1.0,
            f_value: 1.0,
        });
    }
    if l2 == 0.0 {
        // pure quartic: rhs = 0 forces 7F₂ - 3 = 0; the product I·<x²>
        // is unbounded because the conjugate <x²> diverges
        let f2 = F2_LOWER;
        return Ok(CrSolution {
            f2,
            f4: (1.0 - f2) * (1.0 - f2),
            multiplier_mu: f64::INFINITY,
            f_value: f64::INFINITY,
        });
    }

    let rhs = critical_equation_rhs(l2, l4);
    let lo = F2_LOWER + BRACKET_NUDGE;
    let hi = 1.0 - BRACKET_NUDGE;
    let g = |f2: f64| critical_equation_lhs(f2).expect("inside bracket") - rhs;
    // the root sits within one nudge of an endpoint for extreme multiplier
    // ratios; clamp instead of failing the sign test there
    let f2 = if g(lo) >= 0.0 {
        lo
    } else if g(hi) <= 0.0 {
        hi
    } else {
        bracketed_root(g, lo, hi, ROOT_XTOL)?
    };
    let f4 = (1.0 - f2) * (1.0 - f2);

    let r = l2.abs().powf(-0.5) * l4.abs().cbrt();
    let multiplier_mu = 1.0 + f2.powf(-0.5) * f4.cbrt() * r;
    let weights = ReferenceWeights::from_pairs(&[(2, f2), (4, f4)])?;
    let f_value = cr_objective(&weights, &problem.multipliers())?;
    Ok(CrSolution {
        f2,
        f4,
        multiplier_mu,
        f_value,
    })
}

/// Components of `∇f - μ∇φ` in `(F₂, F₄)` by central finite differences.
/// Both vanish at the critical point with its reported `μ`.
pub fn stationarity_residual(
    weights: &ReferenceWeights,
    multipliers: &MultiplierVector,
    mu: f64,
) -> Result<[f64; 2]> {
    require_quartic_orders(weights.orders().orders(), "stationarity_residual")?;
    let (f2, f4) = (weights.f(2).unwrap(), weights.f(4).unwrap());

    let objective = |a: f64, b: f64| -> Result<f64> {
        cr_objective(&ReferenceWeights::from_pairs(&[(2, a), (4, b)])?, multipliers)
    };
    let constraint = |a: f64, b: f64| -> Result<f64> {
        Ok(cr_constraint(&ReferenceWeights::from_pairs(&[(2, a), (4, b)])?))
    };

    let df_d2 = crate::fisher_core::central_difference(|x| objective(x, f4), f2, FD_RELATIVE_STEP)?;
    let df_d4 = crate::fisher_core::central_difference(|x| objective(f2, x), f4, FD_RELATIVE_STEP)?;
    let dphi_d2 =
        crate::fisher_core::central_difference(|x| constraint(x, f4), f2, FD_RELATIVE_STEP)?;
    let dphi_d4 =
        crate::fisher_core::central_difference(|x| constraint(f2, x), f4, FD_RELATIVE_STEP)?;

    Ok([df_d2 - mu * dphi_d2, df_d4 - mu * dphi_d4])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn weights24(f2: f64, f4: f64) -> ReferenceWeights {
        ReferenceWeights::from_pairs(&[(2, f2), (4, f4)]).unwrap()
    }

    fn multipliers24(l2: f64, l4: f64) -> MultiplierVector {
        MultiplierVector::from_pairs(&[(2, l2), (4, l4)]).unwrap()
    }

    #[test]
    fn objective_harmonic_limit_saturates_bound() {
        let f = cr_objective(&weights24(1.0, 1e-30), &multipliers24(-16.0, -32.0)).unwrap();
        assert!((f - 1.0).abs() < 1e-9, "f = {f}");
    }

    #[test]
    fn objective_matches_pinned_table_values() {
        // critical weights at λ = 1 (literature convention)
        let f = cr_objective(
            &weights24(0.7272060764516631, 0.0744165247248959),
            &multipliers24(-16.0, -32.0),
        )
        .unwrap();
        assert!((f - 1.296590).abs() < 1e-5, "f = {f}");

        // rounded weights quoted for λ = 0.0001
        let f2 = 0.99988;
        let f = cr_objective(
            &weights24(f2, (1.0 - f2) * (1.0 - f2)),
            &multipliers24(-16.0, -0.0032),
        )
        .unwrap();
        assert!((f - 1.000059).abs() < 1e-5, "f = {f}");
    }

    #[test]
    fn objective_rejects_bad_inputs() {
        assert!(cr_objective(&weights24(0.5, 0.1), &multipliers24(-1.0, 0.0)).is_err());
        // wrong orders
        let w = ReferenceWeights::from_pairs(&[(2, 0.5)]).unwrap();
        let lam = MultiplierVector::from_pairs(&[(2, -1.0)]).unwrap();
        assert!(cr_objective(&w, &lam).is_err());
    }

    #[test]
    fn constraint_values() {
        assert!((cr_constraint(&weights24(1.0, 1e-300)) - 1.0).abs() < 1e-12);
        let f2 = 3.0 / 7.0;
        let f4 = (4.0 / 7.0) * (4.0 / 7.0);
        assert!((cr_constraint(&weights24(f2, f4)) - 1.0).abs() < 1e-15);
        assert!((cr_constraint(&weights24(0.5, 0.5)) - 1.2071067811865476).abs() < 1e-12);
    }

    #[test]
    fn critical_lhs_pinned_values() {
        assert!(critical_equation_lhs(3.0 / 7.0).is_err());
        assert!(critical_equation_lhs(1.0).is_err());
        // vanishing limit just above the lower endpoint
        assert!(critical_equation_lhs(3.0 / 7.0 + 1e-12).unwrap() < 1e-10);
        let g = critical_equation_lhs(0.7271).unwrap();
        assert!((g - 3.778206508643914).abs() < 1e-10, "g = {g}");
        let g = critical_equation_lhs(0.99988155).unwrap();
        assert!((g - 81.43616727608106).abs() < 1e-8, "g = {g}");
    }

    #[test]
    fn critical_lhs_equals_rhs_at_the_root() {
        let sol = solve_critical_point(&CrProblem::new(-16.0, -32.0).unwrap()).unwrap();
        let g = critical_equation_lhs(sol.f2).unwrap();
        let rhs = critical_equation_rhs(-16.0, -32.0);
        assert!((g - rhs).abs() < 1e-9, "g = {g}, rhs = {rhs}");
        assert!((rhs - 3.7797631496846193).abs() < 1e-12);
    }

    #[test]
    fn solve_harmonic_degenerate_case() {
        let sol = solve_critical_point(&CrProblem::new(-16.0, 0.0).unwrap()).unwrap();
        assert_eq!(sol.f2, 1.0);
        assert_eq!(sol.f4, 0.0);
        assert_eq!(sol.f_value, 1.0);
    }

    #[test]
    fn solve_pure_quartic_degenerate_case() {
        let sol = solve_critical_point(&CrProblem::new(0.0, -32.0).unwrap()).unwrap();
        assert_eq!(sol.f2, 3.0 / 7.0);
        let f4_expect = (4.0 / 7.0) * (4.0 / 7.0);
        assert!((sol.f4 - f4_expect).abs() < 1e-16);
        assert!(sol.f_value.is_infinite());
    }

    #[test]
    fn solve_generic_quartic_case() {
        let sol = solve_critical_point(&CrProblem::new(-16.0, -32.0).unwrap()).unwrap();
        assert!((sol.f2 - 0.7272060764516631).abs() < 1e-10, "F2 = {}", sol.f2);
        assert!((sol.f4 - (1.0 - sol.f2) * (1.0 - sol.f2)).abs() < 1e-16);
        assert!((sol.f2 + sol.f4.sqrt() - 1.0).abs() < 1e-12);
        assert!((sol.f_value - 1.2965900097194627).abs() < 1e-9);
        assert!(sol.multiplier_mu > 1.0);
    }

    #[test]
    fn problem_rejects_bad_multipliers() {
        assert!(CrProblem::new(0.0, 0.0).is_err());
        assert!(CrProblem::new(1.0, -1.0).is_err());
        assert!(CrProblem::new(-1.0, 2.0).is_err());
        assert!(CrProblem::new(f64::NAN, -1.0).is_err());
    }

    #[test]
    fn stationarity_residual_vanishes_at_critical_point() {
        let problem = CrProblem::new(-16.0, -32.0).unwrap();
        let sol = solve_critical_point(&problem).unwrap();
        let res = stationarity_residual(
            &sol.weights().unwrap(),
            &problem.multipliers(),
            sol.multiplier_mu,
        )
        .unwrap();
        assert!(res[0].abs() <= 1e-6 && res[1].abs() <= 1e-6, "res = {res:?}");
    }

    #[test]
    fn stationarity_residual_nonzero_off_critical_point() {
        let problem = CrProblem::new(-16.0, -32.0).unwrap();
        // constraint-satisfying but non-critical point
        let w = weights24(0.5, 0.25);
        // recover μ by least squares from the finite-difference gradients
        let raw = stationarity_residual(&w, &problem.multipliers(), 0.0).unwrap();
        let dphi = [1.0, 0.5 * 0.25f64.powf(-0.5)];
        let mu_lsq = (raw[0] * dphi[0] + raw[1] * dphi[1]) / (dphi[0] * dphi[0] + dphi[1] * dphi[1]);
        let res = stationarity_residual(&w, &problem.multipliers(), mu_lsq).unwrap();
        let max = res[0].abs().max(res[1].abs());
        assert!(max > 1e-2, "expected visible residual, got {max}");
    }

    #[test]
    fn g_is_strictly_increasing_on_dense_grid() {
        let n = 10_000;
        let mut prev = f64::NEG_INFINITY;
        for i in 0..n {
            let f2 = F2_LOWER + (1.0 - 2e-9 - F2_LOWER) * (i as f64 + 0.5) / n as f64;
            let g = critical_equation_lhs(f2).unwrap();
            assert!(g > prev, "g not increasing at F₂ = {f2}");
            prev = g;
        }
    }

    proptest! {
        #[test]
        fn critical_point_properties(
            l2 in -100.0f64..-0.01, l4 in -100.0f64..-0.01,
        ) {
            let sol = solve_critical_point(&CrProblem::new(l2, l4).unwrap()).unwrap();
            prop_assert!(sol.f2 > F2_LOWER && sol.f2 < 1.0);
            prop_assert!(sol.f_value >= 1.0);
            prop_assert!((sol.f2 + sol.f4.sqrt() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn scale_covariance(
            l2 in -50.0f64..-0.1, l4 in -50.0f64..-0.1, a in 0.01f64..100.0,
        ) {
            use crate::fisher_core::alpha_closed_form;
            let base = CrProblem::new(l2, l4).unwrap();
            let scaled = CrProblem::new(a * l2, a.powf(1.5) * l4).unwrap();
            let s0 = solve_critical_point(&base).unwrap();
            let s1 = solve_critical_point(&scaled).unwrap();
            prop_assert!((s0.f2 - s1.f2).abs() < 1e-11, "F₂ not scale invariant");
            prop_assert!((s0.f_value - s1.f_value).abs() < 1e-9 * s0.f_value);

            let a0 = alpha_closed_form(&s0.weights().unwrap(), &base.multipliers()).unwrap();
            let a1 = alpha_closed_form(&s1.weights().unwrap(), &scaled.multipliers()).unwrap();
            prop_assert!((a1 - a.sqrt() * a0).abs() < 1e-9 * a1.abs(),
                "alpha scaling: {a1} vs {}", a.sqrt() * a0);
        }
    }
}
