//! Even-parity harmonic-oscillator basis for `H = p²/2 + c₂x² + c₄x⁴`.
//!
//! Basis functions are the frequency-`ω` Hermite functions
//! `φ_n(x) = ω^{1/4} h_n(√ω·x)` restricted to even `n` (the even potential
//! decouples parities and the ground state is even). All operator matrix
//! elements are analytic in the ladder representation, so no quadrature
//! enters the Hamiltonian build.

use super::eigen::SymBanded;

/// Gaussian-variational basis frequency: the positive root of
/// `ω³ - 2c₂ω - 6c₄ = 0`, which minimizes the ground-state energy of a
/// width-`1/√ω` Gaussian. Scales like `(2c₂)^{1/2}` in the harmonic limit
/// and `(6c₄)^{1/3}` in the quartic limit.
pub fn variational_frequency(c2: f64, c4: f64) -> f64 {
    let start = if c2 > 0.0 { (2.0 * c2).sqrt() } else { 0.0 };
    let mut w = start.max((6.0 * c4).cbrt()).max(1e-3);
    for _ in 0..200 {
        let f = w * w * w - 2.0 * c2 * w - 6.0 * c4;
        let fp = 3.0 * w * w - 2.0 * c2;
        let step = f / fp;
        w -= step;
        if step.abs() <= 1e-15 * w {
            break;
        }
    }
    w
}

/// Band coefficients of `x²` in the even sector: index `i` holds basis
/// level `n = 2i`, with `diag[i] = ⟨2i|x²|2i⟩` and
/// `off[i] = ⟨2i|x²|2i+2⟩`.
fn x2_bands(m: usize, omega: f64) -> (Vec<f64>, Vec<f64>) {
    let diag: Vec<f64> = (0..m).map(|i| (4 * i + 1) as f64 / (2.0 * omega)).collect();
    let off: Vec<f64> = (0..m)
        .map(|i| {
            let n = 2 * i as u64;
            (((n + 1) * (n + 2)) as f64).sqrt() / (2.0 * omega)
        })
        .collect();
    (diag, off)
}

/// `x²` as a banded matrix on the even sector.
pub fn x2_matrix(m: usize, omega: f64) -> SymBanded {
    let (diag, off) = x2_bands(m, omega);
    let mut a = SymBanded::zeros(m, 1);
    for i in 0..m {
        a.set(i, i, diag[i]);
        if i + 1 < m {
            a.set(i, i + 1, off[i]);
        }
    }
    a
}

/// `p²` as a banded matrix on the even sector.
pub fn p2_matrix(m: usize, omega: f64) -> SymBanded {
    let mut a = SymBanded::zeros(m, 1);
    for i in 0..m {
        let n = 2 * i as u64;
        a.set(i, i, omega * (2 * n + 1) as f64 / 2.0);
        if i + 1 < m {
            a.set(i, i + 1, -omega * (((n + 1) * (n + 2)) as f64).sqrt() / 2.0);
        }
    }
    a
}

/// `x⁴ = (x²)²` on the even sector. The band product is exact because the
/// analytic `x²` coefficients are available at every intermediate level.
pub fn x4_matrix(m: usize, omega: f64) -> SymBanded {
    let (diag, off) = x2_bands(m + 1, omega);
    let mut a = SymBanded::zeros(m, 2);
    for i in 0..m {
        let below = if i > 0 { off[i - 1] } else { 0.0 };
        a.set(i, i, diag[i] * diag[i] + below * below + off[i] * off[i]);
        if i + 1 < m {
            a.set(i, i + 1, off[i] * (diag[i] + diag[i + 1]));
        }
        if i + 2 < m {
            a.set(i, i + 2, off[i] * off[i + 1]);
        }
    }
    a
}

/// Even-sector Hamiltonian `H = p²/2 + c₂x² + c₄x⁴` with `m` basis levels.
pub fn hamiltonian(m: usize, omega: f64, c2: f64, c4: f64) -> SymBanded {
    let x2 = x2_matrix(m, omega);
    let p2 = p2_matrix(m, omega);
    let x4 = x4_matrix(m, omega);
    let mut h = SymBanded::zeros(m, 2);
    for i in 0..m {
        h.set(
            i,
            i,
            0.5 * p2.get(i, i) + c2 * x2.get(i, i) + c4 * x4.get(i, i),
        );
        if i + 1 < m {
            h.set(
                i,
                i + 1,
                0.5 * p2.get(i, i + 1) + c2 * x2.get(i, i + 1) + c4 * x4.get(i, i + 1),
            );
        }
        if i + 2 < m {
            h.set(i, i + 2, c4 * x4.get(i, i + 2));
        }
    }
    h
}

/// Evaluate `ψ(x)` and `ψ'(x)` for an even-sector coefficient vector.
///
/// The normalized Hermite-function recurrence
/// `h_{n+1} = ξ√(2/(n+1)) h_n - √(n/(n+1)) h_{n-1}` runs once per point up
/// to one level above the highest stored coefficient, and the analytic
/// derivative `h_n' = √(n/2) h_{n-1} - √((n+1)/2) h_{n+1}` gives `ψ'`
/// without any grid differencing.
pub fn eval_even_state(coeffs: &[f64], omega: f64, x: f64) -> (f64, f64) {
    let xi = omega.sqrt() * x;
    let n_top = 2 * (coeffs.len() - 1) + 1;
    let mut psi = 0.0;
    let mut dpsi_dxi = 0.0;

    let mut h_prev = 0.0_f64; // h_{-1}
    let mut h_curr = std::f64::consts::PI.powf(-0.25) * (-0.5 * xi * xi).exp(); // h_0
    let mut h_values = Vec::with_capacity(n_top + 1);
    h_values.push(h_curr);
    for n in 0..n_top {
        let np1 = (n + 1) as f64;
        let h_next = xi * (2.0 / np1).sqrt() * h_curr - (n as f64 / np1).sqrt() * h_prev;
        h_values.push(h_next);
        h_prev = h_curr;
        h_curr = h_next;
    }

    for (i, &c) in coeffs.iter().enumerate() {
        let n = 2 * i;
        psi += c * h_values[n];
        let lower = if n > 0 {
            (n as f64 / 2.0).sqrt() * h_values[n - 1]
        } else {
            0.0
        };
        let upper = ((n as f64 + 1.0) / 2.0).sqrt() * h_values[n + 1];
        dpsi_dxi += c * (lower - upper);
    }

    (omega.powf(0.25) * psi, omega.powf(0.75) * dpsi_dxi)
}

/// Drop the numerically-zero tail of a coefficient vector so wavefunction
/// evaluation does not run the recurrence through empty levels.
pub fn effective_coefficients(coeffs: &[f64]) -> &[f64] {
    let max = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    let cutoff = 1e-16 * max;
    let last = coeffs
        .iter()
        .rposition(|c| c.abs() > cutoff)
        .unwrap_or(0);
    &coeffs[..=last]
}

/// Half-extent `L` of the output grid: the classical turning point of the
/// state plus enough WKB decay that `|ψ(±L)| ≲ 1e-12`.
pub fn wkb_half_extent(c2: f64, c4: f64, energy: f64) -> f64 {
    // turning point from c₂t + c₄t² = E with t = x²
    let t = if c4 == 0.0 {
        energy / c2
    } else {
        (-c2 + (c2 * c2 + 4.0 * c4 * energy).sqrt()) / (2.0 * c4)
    };
    let x_t = t.max(1e-12).sqrt();

    // accumulate the decay exponent ∫√(2(U-E)) dx beyond the turning point
    let target = 28.0; // e^-28 ≈ 7e-13
    let dx = x_t / 256.0;
    let mut x = x_t;
    let mut phase = 0.0;
    for _ in 0..2_000_000 {
        let xm = x + 0.5 * dx;
        let u = c2 * xm * xm + c4 * xm * xm * xm * xm;
        phase += (2.0 * (u - energy)).max(0.0).sqrt() * dx;
        x += dx;
        if phase >= target {
            break;
        }
    }
    x * 1.05
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::eigen::lowest_eigenpair;

    #[test]
    fn variational_frequency_limits() {
        // harmonic: ω = √(2c₂); the c₂ = 2 oscillator has ω = 2
        assert!((variational_frequency(2.0, 0.0) - 2.0).abs() < 1e-12);
        // pure quartic: ω = (6c₄)^{1/3}
        assert!((variational_frequency(0.0, 36.0) - 6.0).abs() < 1e-10);
    }

    #[test]
    fn harmonic_hamiltonian_is_diagonal_in_its_own_basis() {
        // c₂ = ω²/2 with matching basis frequency: H = diag((2n+½)ω)
        let omega = 3.0;
        let h = hamiltonian(6, omega, omega * omega / 2.0, 0.0);
        for i in 0..6 {
            let expected = (2.0 * (2 * i) as f64 + 1.0) * omega / 2.0;
            assert!((h.get(i, i) - expected).abs() < 1e-12);
            if i + 1 < 6 {
                assert!(h.get(i, i + 1).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ground_state_energy_of_harmonic_in_mismatched_basis() {
        // solve c₂ = 2 (ω_true = 2) in an ω = 3 basis: still exact
        let h = hamiltonian(32, 3.0, 2.0, 0.0);
        let (e, _) = lowest_eigenpair(&h).unwrap();
        assert!((e - 1.0).abs() < 1e-11, "E = {e}");
    }

    #[test]
    fn evaluated_state_matches_analytic_gaussian() {
        // ground state of the matched harmonic basis is exactly φ₀
        let omega = 2.0;
        let coeffs = [1.0];
        for x in [-1.3, 0.0, 0.4, 2.2] {
            let (psi, dpsi) = eval_even_state(&coeffs, omega, x);
            let analytic = (omega / std::f64::consts::PI).powf(0.25)
                * (-0.5 * omega * x * x).exp();
            assert!((psi - analytic).abs() < 1e-14);
            assert!((dpsi - (-omega * x) * analytic).abs() < 1e-13);
        }
    }

    #[test]
    fn x4_band_matches_moment_of_gaussian() {
        // ⟨0|x⁴|0⟩ = 3/(4ω²)
        let omega = 1.7;
        let x4 = x4_matrix(4, omega);
        assert!((x4.get(0, 0) - 3.0 / (4.0 * omega * omega)).abs() < 1e-14);
    }

    #[test]
    fn effective_coefficients_trims_tail() {
        let c = [1.0, 0.1, 0.0, 0.0];
        assert_eq!(effective_coefficients(&c).len(), 2);
        let c = [1.0, 0.0, 1e-40, 0.0];
        assert_eq!(effective_coefficients(&c).len(), 1);
    }

    #[test]
    fn wkb_extent_covers_gaussian_decay() {
        // harmonic c₂ = 2, E = 1: ψ ∝ e^{-x²}; need |ψ| ≤ 1e-12 at L
        let l = wkb_half_extent(2.0, 0.0, 1.0);
        assert!((-l * l).exp() < 1e-11, "L = {l}");
        assert!(l < 12.0, "extent unexpectedly large: {l}");
    }
}
