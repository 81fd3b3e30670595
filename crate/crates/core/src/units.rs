//! SI boundary helpers. Everything inside the crate is natural units
//! (ħ = c = 1, lengths in units of the guide width `a`).

use std::f64::consts::PI;

pub const HBAR: f64 = 1.054_571_817e-34;
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;

/// Transition wavelength (m) to wavelength in units of `a` (m).
pub fn lambda_over_a(lambda_m: f64, a_m: f64) -> f64 {
    lambda_m / a_m
}

/// Transition energy (J) to natural units of `ħc/a`.
pub fn energy_to_natural(energy_j: f64, a_m: f64) -> f64 {
    energy_j * a_m / (HBAR * SPEED_OF_LIGHT)
}

/// Natural energy (units of `ħc/a`) back to joules.
pub fn energy_to_si(energy: f64, a_m: f64) -> f64 {
    energy * HBAR * SPEED_OF_LIGHT / a_m
}

/// Vacuum wavelength (m) of a transition of energy `energy_j` (J).
pub fn wavelength_si(energy_j: f64) -> f64 {
    2.0 * PI * HBAR * SPEED_OF_LIGHT / energy_j
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energy_round_trip() {
        let a = 1e-7;
        let e = 3.0e-19;
        let n = energy_to_natural(e, a);
        assert!((energy_to_si(n, a) - e).abs() < 1e-30);
        // λ/a = 2π / E_natural
        assert!((wavelength_si(e) / a - 2.0 * PI / n).abs() < 1e-9);
    }
}
