//! Closed-form solutions of the governing PDEs for the Fisher information
//! `I(⟨x^k⟩)` and the normalization multiplier `α(λ_k)`, together with the
//! conjugation maps between moments and multipliers and residual evaluators
//! for every structural identity of the Legendre transform.
//!
//! Conventions: unit mass, ħ = 1. Multipliers `λ_k` are the (scaled) series
//! coefficients of the pseudo-potential `U(x) = -⅛ Σ_k λ_k x^k`; confining
//! potentials have `λ_k < 0`. Both closed forms are power laws in the
//! magnitudes `|⟨x^k⟩|` and `|λ_k|`, weighted by positive reference
//! constants `F_k` (equivalently `C_k` or `D_k`).

use crate::{Error, Result};

/// Relative step used by all central finite differences in this module.
pub const FD_RELATIVE_STEP: f64 = 1e-5;

/// Ordered set of distinct positive moment orders `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentOrderSet {
    orders: Vec<u32>,
}

impl MomentOrderSet {
    /// Build from a strictly increasing list of orders `k ≥ 1`.
    pub fn new(orders: &[u32]) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::Domain("moment order set must be non-empty".into()));
        }
        if orders[0] < 1 {
            return Err(Error::Domain("moment orders must be >= 1".into()));
        }
        if orders.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain(
                "moment orders must be strictly increasing with no duplicates".into(),
            ));
        }
        Ok(Self {
            orders: orders.to_vec(),
        })
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        false // non-empty by construction
    }

    pub fn position(&self, k: u32) -> Option<usize> {
        self.orders.iter().position(|&o| o == k)
    }
}

fn check_same_orders(a: &MomentOrderSet, b: &MomentOrderSet, what: &str) -> Result<()> {
    if a != b {
        return Err(Error::Domain(format!(
            "{what}: moment orders {:?} do not match {:?}",
            a.orders(),
            b.orders()
        )));
    }
    Ok(())
}

fn check_finite(values: &[f64], what: &str) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("{what}: values must be finite")));
    }
    Ok(())
}

/// Values indexed by moment order; shared layout of the vector types below.
#[derive(Debug, Clone, PartialEq)]
struct OrderIndexed {
    orders: MomentOrderSet,
    values: Vec<f64>,
}

impl OrderIndexed {
    fn new(orders: MomentOrderSet, values: Vec<f64>, what: &str) -> Result<Self> {
        if orders.len() != values.len() {
            return Err(Error::Domain(format!(
                "{what}: {} values for {} orders",
                values.len(),
                orders.len()
            )));
        }
        check_finite(&values, what)?;
        Ok(Self { orders, values })
    }

    fn get(&self, k: u32) -> Option<f64> {
        self.orders.position(k).map(|i| self.values[i])
    }

    fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.orders
            .orders()
            .iter()
            .copied()
            .zip(self.values.iter().copied())
    }
}

/// Lagrange multipliers `λ_k`, i.e. the potential's expansion coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierVector(OrderIndexed);

impl MultiplierVector {
    pub fn new(orders: MomentOrderSet, values: Vec<f64>) -> Result<Self> {
        OrderIndexed::new(orders, values, "multipliers").map(Self)
    }

    /// Convenience constructor from `(order, λ_k)` pairs, already sorted.
    pub fn from_pairs(pairs: &[(u32, f64)]) -> Result<Self> {
        let orders = MomentOrderSet::new(&pairs.iter().map(|p| p.0).collect::<Vec<_>>())?;
        Self::new(orders, pairs.iter().map(|p| p.1).collect())
    }

    pub fn orders(&self) -> &MomentOrderSet {
        &self.0.orders
    }

    pub fn get(&self, k: u32) -> Option<f64> {
        self.0.get(k)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.0.iter()
    }

    /// True when every multiplier is strictly negative (confining case).
    pub fn all_negative(&self) -> bool {
        self.0.values.iter().all(|&v| v < 0.0)
    }

    pub fn values(&self) -> &[f64] {
        &self.0.values
    }
}

/// Expectation values `⟨x^k⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentVector(OrderIndexed);

impl MomentVector {
    pub fn new(orders: MomentOrderSet, values: Vec<f64>) -> Result<Self> {
        let inner = OrderIndexed::new(orders, values, "moments")?;
        for (k, m) in inner.iter() {
            if k % 2 == 0 && m <= 0.0 {
                return Err(Error::Domain(format!(
                    "moment <x^{k}> must be strictly positive, got {m}"
                )));
            }
        }
        Ok(Self(inner))
    }

    pub fn from_pairs(pairs: &[(u32, f64)]) -> Result<Self> {
        let orders = MomentOrderSet::new(&pairs.iter().map(|p| p.0).collect::<Vec<_>>())?;
        Self::new(orders, pairs.iter().map(|p| p.1).collect())
    }

    pub fn orders(&self) -> &MomentOrderSet {
        &self.0.orders
    }

    pub fn get(&self, k: u32) -> Option<f64> {
        self.0.get(k)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.0.iter()
    }

    pub fn values(&self) -> &[f64] {
        &self.0.values
    }
}

/// Positive reference constants `F_k` of the closed-form PDE solutions,
/// with the derived weights `C_k = (k/2)·F_k^{2/k}` (entering `I`) and
/// `D_k = ((k+2)/2)·F_k^{2/(2+k)}` (entering `α`). The underlying
/// integration constants obey `C̄_k^k = D̄_k^{2+k} = F_k²`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceWeights(OrderIndexed);

impl ReferenceWeights {
    pub fn new(orders: MomentOrderSet, f_values: Vec<f64>) -> Result<Self> {
        let inner = OrderIndexed::new(orders, f_values, "reference weights")?;
        for (k, f) in inner.iter() {
            if f <= 0.0 {
                return Err(Error::Domain(format!(
                    "reference weight F_{k} must be strictly positive, got {f}"
                )));
            }
        }
        Ok(Self(inner))
    }

    pub fn from_pairs(pairs: &[(u32, f64)]) -> Result<Self> {
        let orders = MomentOrderSet::new(&pairs.iter().map(|p| p.0).collect::<Vec<_>>())?;
        Self::new(orders, pairs.iter().map(|p| p.1).collect())
    }

    pub fn orders(&self) -> &MomentOrderSet {
        &self.0.orders
    }

    pub fn f(&self, k: u32) -> Option<f64> {
        self.0.get(k)
    }

    /// `C_k = (k/2)·F_k^{2/k}`.
    pub fn c(&self, k: u32) -> Option<f64> {
        self.0
            .get(k)
            .map(|f| (k as f64 / 2.0) * f.powf(2.0 / k as f64))
    }

    /// `D_k = ((k+2)/2)·F_k^{2/(2+k)}`.
    pub fn d(&self, k: u32) -> Option<f64> {
        self.0
            .get(k)
            .map(|f| ((k as f64 + 2.0) / 2.0) * f.powf(2.0 / (2.0 + k as f64)))
    }

    pub fn iter_f(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.0.iter()
    }
}

/// One configuration of the Legendre structure: multipliers, moments, and
/// the two potentials `I` and `α`. Self-consistent points (all four fields
/// produced from the same reference weights) make every identity residual
/// vanish.
#[derive(Debug, Clone)]
pub struct ScenarioPoint {
    pub multipliers: MultiplierVector,
    pub moments: MomentVector,
    pub fisher_info: f64,
    pub alpha: f64,
}

impl ScenarioPoint {
    pub fn new(
        multipliers: MultiplierVector,
        moments: MomentVector,
        fisher_info: f64,
        alpha: f64,
    ) -> Result<Self> {
        check_same_orders(multipliers.orders(), moments.orders(), "scenario point")?;
        if !fisher_info.is_finite() || fisher_info < 0.0 {
            return Err(Error::Domain(format!(
                "fisher information must be finite and >= 0, got {fisher_info}"
            )));
        }
        if !alpha.is_finite() {
            return Err(Error::Domain("alpha must be finite".into()));
        }
        Ok(Self {
            multipliers,
            moments,
            fisher_info,
            alpha,
        })
    }

    /// Build the self-consistent point determined by `weights` and
    /// `multipliers`: moments by conjugation, `I` and `α` from the closed
    /// forms.
    pub fn self_consistent(
        weights: &ReferenceWeights,
        multipliers: &MultiplierVector,
    ) -> Result<Self> {
        let moments = conjugate_moments(weights, multipliers)?;
        let fisher_info = fim_closed_form(weights, &moments)?;
        let alpha = alpha_closed_form(weights, multipliers)?;
        Self::new(multipliers.clone(), moments, fisher_info, alpha)
    }
}

/// Closed-form Fisher information `I = Σ_k (k/2)·(F_k/|⟨x^k⟩|)^{2/k}`.
///
/// Diverges as any moment approaches zero; zero moments are rejected.
pub fn fim_closed_form(weights: &ReferenceWeights, moments: &MomentVector) -> Result<f64> {
    check_same_orders(weights.orders(), moments.orders(), "fim_closed_form")?;
    let mut total = 0.0;
    for ((k, f), (_, m)) in weights.iter_f().zip(moments.iter()) {
        if m == 0.0 {
            return Err(Error::Domain(format!(
                "<x^{k}> = 0 lies outside the domain of I"
            )));
        }
        total += (k as f64 / 2.0) * (f / m.abs()).powf(2.0 / k as f64);
    }
    Ok(total)
}

/// Closed-form normalization multiplier
/// `α = Σ_k ((k+2)/2)·(F_k·|λ_k|)^{2/(2+k)}`.
pub fn alpha_closed_form(weights: &ReferenceWeights, multipliers: &MultiplierVector) -> Result<f64> {
    check_same_orders(weights.orders(), multipliers.orders(), "alpha_closed_form")?;
    let mut total = 0.0;
    for ((k, f), (_, lam)) in weights.iter_f().zip(multipliers.iter()) {
        total += ((k as f64 + 2.0) / 2.0) * (f * lam.abs()).powf(2.0 / (2.0 + k as f64));
    }
    Ok(total)
}

/// Multipliers conjugate to the given moments:
/// `λ_k = -(2/k)·C_k·⟨x^k⟩^{-(2+k)/k}`, defined for `⟨x^k⟩ > 0` and always
/// strictly negative.
pub fn conjugate_multipliers(
    weights: &ReferenceWeights,
    moments: &MomentVector,
) -> Result<MultiplierVector> {
    check_same_orders(weights.orders(), moments.orders(), "conjugate_multipliers")?;
    let mut values = Vec::with_capacity(moments.orders().len());
    for ((k, _), (_, m)) in weights.iter_f().zip(moments.iter()) {
        if m <= 0.0 {
            return Err(Error::Domain(format!(
                "conjugate_multipliers requires <x^{k}> > 0, got {m}"
            )));
        }
        let c = weights.c(k).expect("order present");
        values.push(-(2.0 / k as f64) * c * m.powf(-(2.0 + k as f64) / k as f64));
    }
    MultiplierVector::new(moments.orders().clone(), values)
}

/// Moments conjugate to the given multipliers:
/// `⟨x^k⟩ = (2/(2+k))·D_k·|λ_k|^{-k/(2+k)}`, defined for `λ_k < 0` and
/// always strictly positive.
pub fn conjugate_moments(
    weights: &ReferenceWeights,
    multipliers: &MultiplierVector,
) -> Result<MomentVector> {
    check_same_orders(weights.orders(), multipliers.orders(), "conjugate_moments")?;
    let mut values = Vec::with_capacity(multipliers.orders().len());
    for ((k, _), (_, lam)) in weights.iter_f().zip(multipliers.iter()) {
        if lam >= 0.0 {
            return Err(Error::Domain(format!(
                "conjugate_moments requires λ_{k} < 0, got {lam}"
            )));
        }
        let d = weights.d(k).expect("order present");
        values.push((2.0 / (2.0 + k as f64)) * d * lam.abs().powf(-(k as f64) / (2.0 + k as f64)));
    }
    MomentVector::new(multipliers.orders().clone(), values)
}

/// Residual of the Legendre identity `I = α + Σ_k λ_k⟨x^k⟩`.
pub fn legendre_residual(point: &ScenarioPoint) -> f64 {
    let coupling: f64 = point
        .multipliers
        .iter()
        .zip(point.moments.iter())
        .map(|((_, lam), (_, m))| lam * m)
        .sum();
    point.fisher_info - point.alpha - coupling
}

/// Residuals of the virial-derived expressions
/// `I = -Σ_k (k/2)·λ_k⟨x^k⟩` and `α = -Σ_k (1+k/2)·λ_k⟨x^k⟩`,
/// returned as `(I + Σ(k/2)λ_k⟨x^k⟩, α + Σ(1+k/2)λ_k⟨x^k⟩)`.
pub fn virial_residuals(point: &ScenarioPoint) -> (f64, f64) {
    let mut half_k_sum = 0.0;
    let mut one_plus_half_k_sum = 0.0;
    for ((k, lam), (_, m)) in point.multipliers.iter().zip(point.moments.iter()) {
        half_k_sum += (k as f64 / 2.0) * lam * m;
        one_plus_half_k_sum += (1.0 + k as f64 / 2.0) * lam * m;
    }
    (
        point.fisher_info + half_k_sum,
        point.alpha + one_plus_half_k_sum,
    )
}

/// Central difference `(f(x+h) - f(x-h)) / 2h` with `h` relative to `|x|`.
///
/// Errors with [`Error::Precision`] when the step underflows (`x ± h`
/// indistinguishable from `x`).
pub fn central_difference<F>(f: F, x: f64, relative_step: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let h = relative_step * x.abs();
    if h == 0.0 || x + h == x || x - h == x {
        return Err(Error::Precision(format!(
            "finite-difference step underflowed at x = {x}"
        )));
    }
    Ok((f(x + h)? - f(x - h)?) / (2.0 * h))
}

/// Residual of the governing PDE for an arbitrary information functional
/// `I(⟨x^k⟩)`: returns `I + Σ_k (k/2)·⟨x^k⟩·∂I/∂⟨x^k⟩` with the partials
/// taken by central differences. Vanishes exactly on solutions of the PDE;
/// a constant functional returns its own (nonzero) value.
pub fn pde_residual_i_of<F>(i_fn: F, moments: &MomentVector) -> Result<f64>
where
    F: Fn(&MomentVector) -> Result<f64>,
{
    let base = i_fn(moments)?;
    let orders = moments.orders().clone();
    let values = moments.values().to_vec();
    let mut residual = base;
    for (idx, &k) in orders.orders().iter().enumerate() {
        let m_k = values[idx];
        let partial = central_difference(
            |m| {
                let mut shifted = values.clone();
                shifted[idx] = m;
                i_fn(&MomentVector::new(orders.clone(), shifted)?)
            },
            m_k,
            FD_RELATIVE_STEP,
        )?;
        residual += (k as f64 / 2.0) * m_k * partial;
    }
    Ok(residual)
}

/// [`pde_residual_i_of`] applied to the closed form [`fim_closed_form`].
pub fn pde_residual_i(weights: &ReferenceWeights, moments: &MomentVector) -> Result<f64> {
    check_same_orders(weights.orders(), moments.orders(), "pde_residual_i")?;
    pde_residual_i_of(|m| fim_closed_form(weights, m), moments)
}

/// Residual of the governing PDE for an arbitrary eigenvalue functional
/// `α(λ_k)`: returns `α - Σ_k (1+k/2)·λ_k·∂α/∂λ_k` with central-difference
/// partials.
pub fn pde_residual_alpha_of<F>(alpha_fn: F, multipliers: &MultiplierVector) -> Result<f64>
where
    F: Fn(&MultiplierVector) -> Result<f64>,
{
    let base = alpha_fn(multipliers)?;
    let orders = multipliers.orders().clone();
    let values = multipliers.values().to_vec();
    let mut residual = base;
    for (idx, &k) in orders.orders().iter().enumerate() {
        let lam_k = values[idx];
        let partial = central_difference(
            |lam| {
                let mut shifted = values.clone();
                shifted[idx] = lam;
                alpha_fn(&MultiplierVector::new(orders.clone(), shifted)?)
            },
            lam_k,
            FD_RELATIVE_STEP,
        )?;
        residual -= (1.0 + k as f64 / 2.0) * lam_k * partial;
    }
    Ok(residual)
}

/// [`pde_residual_alpha_of`] applied to the closed form [`alpha_closed_form`].
pub fn pde_residual_alpha(
    weights: &ReferenceWeights,
    multipliers: &MultiplierVector,
) -> Result<f64> {
    check_same_orders(weights.orders(), multipliers.orders(), "pde_residual_alpha")?;
    pde_residual_alpha_of(|lam| alpha_closed_form(weights, lam), multipliers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn weights2(f2: f64) -> ReferenceWeights {
        ReferenceWeights::from_pairs(&[(2, f2)]).unwrap()
    }

    fn weights24(f2: f64, f4: f64) -> ReferenceWeights {
        ReferenceWeights::from_pairs(&[(2, f2), (4, f4)]).unwrap()
    }

    #[test]
    fn order_set_rejects_bad_input() {
        assert!(MomentOrderSet::new(&[]).is_err());
        assert!(MomentOrderSet::new(&[0, 2]).is_err());
        assert!(MomentOrderSet::new(&[2, 2]).is_err());
        assert!(MomentOrderSet::new(&[4, 2]).is_err());
        assert!(MomentOrderSet::new(&[1, 2, 4]).is_ok());
    }

    #[test]
    fn even_moments_must_be_positive() {
        assert!(MomentVector::from_pairs(&[(2, -1.0)]).is_err());
        assert!(MomentVector::from_pairs(&[(2, 0.0)]).is_err());
        // odd moments may be negative
        assert!(MomentVector::from_pairs(&[(1, -0.3), (2, 1.0)]).is_ok());
    }

    #[test]
    fn derived_weights_satisfy_integration_constant_relation() {
        let w = weights24(0.7, 0.1);
        for k in [2u32, 4] {
            let f = w.f(k).unwrap();
            let c_bar = w.c(k).unwrap() / (k as f64 / 2.0);
            let d_bar = w.d(k).unwrap() / ((k as f64 + 2.0) / 2.0);
            assert!((c_bar.powi(k as i32) - f * f).abs() < 1e-12);
            assert!((d_bar.powi(k as i32 + 2) - f * f).abs() < 1e-12);
        }
    }

    #[test]
    fn fim_unit_cases() {
        let m1 = MomentVector::from_pairs(&[(2, 1.0)]).unwrap();
        assert_eq!(fim_closed_form(&weights2(1.0), &m1).unwrap(), 1.0);
        let m2 = MomentVector::from_pairs(&[(2, 2.0)]).unwrap();
        assert!((fim_closed_form(&weights2(1.0), &m2).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn fim_rejects_zero_moment() {
        // an odd order admits a zero moment at the type level
        let m = MomentVector::from_pairs(&[(1, 0.0)]).unwrap();
        let w = ReferenceWeights::from_pairs(&[(1, 1.0)]).unwrap();
        assert!(matches!(
            fim_closed_form(&w, &m),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn fim_matches_legendre_route_on_conjugate_point() {
        // orders {2,4}: I from the moments form must equal α + Σ λ_k <x^k>
        let w = weights24(0.7271, 0.074474);
        let lam = MultiplierVector::from_pairs(&[(2, -16.0), (4, -32.0)]).unwrap();
        let m = conjugate_moments(&w, &lam).unwrap();
        let i_direct = fim_closed_form(&w, &m).unwrap();
        let alpha = alpha_closed_form(&w, &lam).unwrap();
        let coupling: f64 = lam.iter().zip(m.iter()).map(|((_, l), (_, mm))| l * mm).sum();
        assert!((i_direct - (alpha + coupling)).abs() < 1e-10);
    }

    #[test]
    fn alpha_unit_cases() {
        let lam2 = MultiplierVector::from_pairs(&[(2, -16.0)]).unwrap();
        assert!((alpha_closed_form(&weights2(1.0), &lam2).unwrap() - 8.0).abs() < 1e-13);

        let w4 = ReferenceWeights::from_pairs(&[(4, 1.0)]).unwrap();
        let lam4 = MultiplierVector::from_pairs(&[(4, -8.0)]).unwrap();
        assert!((alpha_closed_form(&w4, &lam4).unwrap() - 6.0).abs() < 1e-13);
    }

    #[test]
    fn alpha_at_quartic_reference_weights() {
        let lam = MultiplierVector::from_pairs(&[(2, -16.0), (4, -32.0)]).unwrap();
        // rounded reference weights, as quoted to 4-5 digits
        let a_rounded = alpha_closed_form(&weights24(0.7271, 0.074474), &lam).unwrap();
        assert!((a_rounded - 10.82879846273357).abs() < 1e-12);
        // exact critical weights reproduce the pinned eigenvalue E = α/8
        let a_exact = alpha_closed_form(
            &weights24(0.7272060764516631, 0.0744165247248959),
            &lam,
        )
        .unwrap();
        assert!((a_exact - 10.828264933123936).abs() < 1e-10);
        assert!((a_exact / 8.0 - 1.353533).abs() < 1e-5);
    }

    #[test]
    fn conjugate_multipliers_unit_cases() {
        let m2 = MomentVector::from_pairs(&[(2, 1.0)]).unwrap();
        let lam = conjugate_multipliers(&weights2(1.0), &m2).unwrap();
        assert!((lam.get(2).unwrap() + 1.0).abs() < 1e-15);

        let w4 = ReferenceWeights::from_pairs(&[(4, 1.0)]).unwrap();
        let m4 = MomentVector::from_pairs(&[(4, 1.0)]).unwrap();
        let lam = conjugate_multipliers(&w4, &m4).unwrap();
        assert!((lam.get(4).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn conjugate_moments_unit_cases() {
        let lam1 = MultiplierVector::from_pairs(&[(2, -1.0)]).unwrap();
        let m = conjugate_moments(&weights2(1.0), &lam1).unwrap();
        assert!((m.get(2).unwrap() - 1.0).abs() < 1e-15);

        let lam16 = MultiplierVector::from_pairs(&[(2, -16.0)]).unwrap();
        let m = conjugate_moments(&weights2(1.0), &lam16).unwrap();
        assert!((m.get(2).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn conjugate_moments_rejects_nonnegative_multiplier() {
        let lam = MultiplierVector::from_pairs(&[(2, 0.0)]).unwrap();
        assert!(conjugate_moments(&weights2(1.0), &lam).is_err());
        let lam = MultiplierVector::from_pairs(&[(2, 1.0)]).unwrap();
        assert!(conjugate_moments(&weights2(1.0), &lam).is_err());
    }

    #[test]
    fn legendre_residual_vanishes_on_self_consistent_point() {
        let w = weights2(1.0);
        let lam = MultiplierVector::from_pairs(&[(2, -16.0)]).unwrap();
        let point = ScenarioPoint::self_consistent(&w, &lam).unwrap();
        assert!(legendre_residual(&point).abs() < 1e-12);
    }

    #[test]
    fn closed_forms_handle_general_moment_orders() {
        // nothing restricts the structure to orders {2, 4}
        let w = ReferenceWeights::from_pairs(&[(1, 0.8), (3, 0.5), (6, 0.2)]).unwrap();
        let lam = MultiplierVector::from_pairs(&[(1, -0.7), (3, -4.0), (6, -11.0)]).unwrap();
        let point = ScenarioPoint::self_consistent(&w, &lam).unwrap();
        assert!(legendre_residual(&point).abs() < 1e-12);
        let (r_i, r_a) = virial_residuals(&point);
        assert!(r_i.abs() < 1e-12 && r_a.abs() < 1e-12);

        let back = conjugate_multipliers(&w, &point.moments).unwrap();
        for ((k, a), (_, b)) in lam.iter().zip(back.iter()) {
            assert!((a - b).abs() < 1e-12 * a.abs(), "order {k}");
        }
        assert!(pde_residual_i(&w, &point.moments).unwrap().abs() < 1e-6);
        assert!(pde_residual_alpha(&w, &lam).unwrap().abs() < 1e-6);
    }

    #[test]
    fn legendre_residual_is_linear_in_moment_perturbation() {
        let w = weights2(1.0);
        let lam = MultiplierVector::from_pairs(&[(2, -16.0)]).unwrap();
        let mut point = ScenarioPoint::self_consistent(&w, &lam).unwrap();
        let perturbed = point.moments.get(2).unwrap() + 0.1;
        point.moments = MomentVector::from_pairs(&[(2, perturbed)]).unwrap();
        // residual picks up -λ₂·0.1 = +1.6
        assert!((legendre_residual(&point) - 1.6).abs() < 1e-12);
    }

    #[test]
    fn virial_residuals_vanish_on_self_consistent_point() {
        let w = weights2(1.0);
        let lam = MultiplierVector::from_pairs(&[(2, -16.0)]).unwrap();
        let point = ScenarioPoint::self_consistent(&w, &lam).unwrap();
        let (r_i, r_alpha) = virial_residuals(&point);
        assert!(r_i.abs() < 1e-12, "virial I residual {r_i}");
        assert!(r_alpha.abs() < 1e-12, "virial alpha residual {r_alpha}");
    }

    #[test]
    fn pde_residuals_vanish_on_closed_forms() {
        let w = weights2(0.83);
        for m_val in [0.5, 1.3, 5.0] {
            let m = MomentVector::from_pairs(&[(2, m_val)]).unwrap();
            assert!(pde_residual_i(&w, &m).unwrap().abs() < 1e-6);
        }
        let w = weights24(0.6, 0.2);
        let lam = MultiplierVector::from_pairs(&[(2, -3.0), (4, -11.0)]).unwrap();
        assert!(pde_residual_alpha(&w, &lam).unwrap().abs() < 1e-6);
    }

    #[test]
    fn pde_residual_detects_non_solution() {
        // a constant functional is not a PDE solution: residual equals it
        let m = MomentVector::from_pairs(&[(2, 1.7)]).unwrap();
        let r = pde_residual_i_of(|_| Ok(4.2), &m).unwrap();
        assert!((r - 4.2).abs() < 1e-9);
        let lam = MultiplierVector::from_pairs(&[(2, -2.0)]).unwrap();
        let r = pde_residual_alpha_of(|_| Ok(4.2), &lam).unwrap();
        assert!((r - 4.2).abs() < 1e-9);
    }

    #[test]
    fn central_difference_step_underflow_is_reported() {
        let err = central_difference(|x| Ok(x * x), 0.0, 1e-5);
        assert!(matches!(err, Err(Error::Precision(_))));
    }

    proptest! {
        #[test]
        fn round_trip_moments_to_multipliers(
            f2 in 0.05f64..5.0, f4 in 0.05f64..5.0,
            l2 in -50.0f64..-0.05, l4 in -50.0f64..-0.05,
        ) {
            let w = weights24(f2, f4);
            let lam = MultiplierVector::from_pairs(&[(2, l2), (4, l4)]).unwrap();
            let m = conjugate_moments(&w, &lam).unwrap();
            let back = conjugate_multipliers(&w, &m).unwrap();
            for ((k, a), (_, b)) in lam.iter().zip(back.iter()) {
                prop_assert!((a - b).abs() <= 1e-10 * a.abs(), "order {k}: {a} vs {b}");
            }
        }

        #[test]
        fn round_trip_multipliers_to_moments(
            f2 in 0.05f64..5.0, f4 in 0.05f64..5.0,
            m2 in 0.1f64..10.0, m4 in 0.1f64..10.0,
        ) {
            let w = weights24(f2, f4);
            let m = MomentVector::from_pairs(&[(2, m2), (4, m4)]).unwrap();
            let lam = conjugate_multipliers(&w, &m).unwrap();
            let back = conjugate_moments(&w, &lam).unwrap();
            for ((k, a), (_, b)) in m.iter().zip(back.iter()) {
                prop_assert!((a - b).abs() <= 1e-10 * a.abs(), "order {k}: {a} vs {b}");
            }
        }

        #[test]
        fn conjugacy_identity_holds(
            f2 in 0.05f64..5.0, f4 in 0.05f64..5.0,
            l2 in -50.0f64..-0.05, l4 in -50.0f64..-0.05,
        ) {
            let w = weights24(f2, f4);
            let lam = MultiplierVector::from_pairs(&[(2, l2), (4, l4)]).unwrap();
            let m = conjugate_moments(&w, &lam).unwrap();
            for (k, f) in w.iter_f() {
                let lhs = f * f;
                let rhs = lam.get(k).unwrap().abs().powi(k as i32)
                    * m.get(k).unwrap().abs().powi(k as i32 + 2);
                prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.max(rhs), "order {k}");
            }
        }

        #[test]
        fn fim_monotone_decreasing_and_convex(
            f2 in 0.1f64..3.0, m2 in 0.3f64..8.0,
        ) {
            let w = weights2(f2);
            let i = |m: f64| fim_closed_form(&w, &MomentVector::from_pairs(&[(2, m)]).unwrap()).unwrap();
            let h = 1e-3 * m2;
            let (lo, mid, hi) = (i(m2 - h), i(m2), i(m2 + h));
            prop_assert!(hi < mid && mid < lo, "I not decreasing");
            prop_assert!(lo - 2.0 * mid + hi >= 0.0, "I not convex");
        }

        #[test]
        fn alpha_monotone_decreasing_and_concave(
            f2 in 0.1f64..3.0, l2 in -30.0f64..-0.1,
        ) {
            let w = weights2(f2);
            let a = |l: f64| alpha_closed_form(&w, &MultiplierVector::from_pairs(&[(2, l)]).unwrap()).unwrap();
            let h = 1e-3 * l2.abs();
            let (lo, mid, hi) = (a(l2 - h), a(l2), a(l2 + h));
            prop_assert!(hi < mid && mid < lo, "alpha not decreasing in λ");
            prop_assert!(lo - 2.0 * mid + hi <= 0.0, "alpha not concave");
        }

        #[test]
        fn reciprocity_relations_by_finite_difference(
            f2 in 0.1f64..3.0, f4 in 0.1f64..3.0,
            l2 in -30.0f64..-0.1, l4 in -30.0f64..-0.1,
        ) {
            let w = weights24(f2, f4);
            let lam = MultiplierVector::from_pairs(&[(2, l2), (4, l4)]).unwrap();
            let m = conjugate_moments(&w, &lam).unwrap();

            // ∂α/∂λ_k = -<x^k>
            for (idx, &k) in [2u32, 4].iter().enumerate() {
                let base = lam.values().to_vec();
                let d_alpha = central_difference(|l| {
                    let mut v = base.clone();
                    v[idx] = l;
                    alpha_closed_form(&w, &MultiplierVector::new(lam.orders().clone(), v)?)
                }, base[idx], FD_RELATIVE_STEP).unwrap();
                let target = -m.get(k).unwrap();
                prop_assert!((d_alpha - target).abs() <= 1e-5 * target.abs().max(1e-3),
                    "∂α/∂λ_{k}: {d_alpha} vs {target}");
            }

            // ∂I/∂<x^k> = λ_k
            for (idx, &k) in [2u32, 4].iter().enumerate() {
                let base = m.values().to_vec();
                let d_i = central_difference(|mm| {
                    let mut v = base.clone();
                    v[idx] = mm;
                    fim_closed_form(&w, &MomentVector::new(m.orders().clone(), v)?)
                }, base[idx], FD_RELATIVE_STEP).unwrap();
                let target = lam.get(k).unwrap();
                prop_assert!((d_i - target).abs() <= 1e-5 * target.abs().max(1e-3),
                    "∂I/∂<x^{k}>: {d_i} vs {target}");
            }
        }

        #[test]
        fn euler_relation_by_chained_finite_differences(
            f2 in 0.2f64..2.0, f4 in 0.2f64..2.0,
            l2 in -20.0f64..-0.5, l4 in -20.0f64..-0.5,
        ) {
            let w = weights24(f2, f4);
            let orders = MomentOrderSet::new(&[2, 4]).unwrap();
            let base = [l2, l4];
            // ∂I/∂λ_i with I(λ) := I(<x^k>(λ)) vs Σ_k λ_k ∂<x^k>/∂λ_i
            for i in 0..2 {
                let i_of = |l: f64| -> Result<f64> {
                    let mut v = base.to_vec();
                    v[i] = l;
                    let lam = MultiplierVector::new(orders.clone(), v)?;
                    fim_closed_form(&w, &conjugate_moments(&w, &lam)?)
                };
                let lhs = central_difference(i_of, base[i], FD_RELATIVE_STEP).unwrap();

                let mut rhs = 0.0;
                for (j, &k) in [2u32, 4].iter().enumerate() {
                    let m_of = |l: f64| -> Result<f64> {
                        let mut v = base.to_vec();
                        v[i] = l;
                        let lam = MultiplierVector::new(orders.clone(), v)?;
                        Ok(conjugate_moments(&w, &lam)?.get(k).unwrap())
                    };
                    let dm = central_difference(m_of, base[i], FD_RELATIVE_STEP).unwrap();
                    rhs += base[j] * dm;
                }
                prop_assert!((lhs - rhs).abs() <= 1e-4 * lhs.abs().max(1e-3),
                    "Euler relation in λ_{i}: {lhs} vs {rhs}");
            }
        }

        #[test]
        fn pde_residuals_small_at_random_interior_points(
            f2 in 0.1f64..3.0, f4 in 0.1f64..3.0,
            m2 in 0.5f64..5.0, m4 in 0.5f64..5.0,
            l2 in -30.0f64..-0.1, l4 in -30.0f64..-0.1,
        ) {
            let w = weights24(f2, f4);
            let m = MomentVector::from_pairs(&[(2, m2), (4, m4)]).unwrap();
            prop_assert!(pde_residual_i(&w, &m).unwrap().abs() <= 1e-6);
            let lam = MultiplierVector::from_pairs(&[(2, l2), (4, l4)]).unwrap();
            prop_assert!(pde_residual_alpha(&w, &lam).unwrap().abs() <= 1e-6);
        }
    }
}
