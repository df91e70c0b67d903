use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const BOLTZMANN: f64 = 1.380_649e-23;
pub const HBAR: f64 = 1.054_571_817e-34;
pub const ATOMIC_MASS: f64 = 1.660_539_066_60e-27;

/// Experimental inputs in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpParams {
    pub radius: f64,
    pub wavelength: f64,
    pub numerical_aperture: f64,
    /// Relative permittivity of the particle.
    pub epsilon: f64,
    pub pressure: f64,
    pub temperature: f64,
    /// Mass of one gas molecule.
    pub gas_mass: f64,
    pub particle_mass: f64,
    /// Angular trap frequency.
    pub omega: f64,
}

impl Default for ExpParams {
    /// 50 nm silica sphere (ε = 2.1, ρ = 2200 kg/m³) at 1550 nm, NA 0.75,
    /// in nitrogen at 60 K and 3e-9 mbar, trapped at 2π·77.6 kHz.
    fn default() -> Self {
        let radius = 50e-9;
        let density = 2200.0;
        ExpParams {
            radius,
            wavelength: 1550e-9,
            numerical_aperture: 0.75,
            epsilon: 2.1,
            pressure: 3e-7,
            temperature: 60.0,
            gas_mass: 28.0134 * ATOMIC_MASS,
            particle_mass: density * 4.0 / 3.0 * PI * radius.powi(3),
            omega: 2.0 * PI * 77.6e3,
        }
    }
}

impl ExpParams {
    pub fn violations(&self) -> Vec<String> {
        let fields = [
            ("radius", self.radius),
            ("wavelength", self.wavelength),
            ("numerical_aperture", self.numerical_aperture),
            ("epsilon", self.epsilon),
            ("pressure", self.pressure),
            ("temperature", self.temperature),
            ("gas_mass", self.gas_mass),
            ("particle_mass", self.particle_mass),
            ("omega", self.omega),
        ];
        let mut out: Vec<String> = fields
            .iter()
            .filter(|(_, v)| !(*v > 0.0 && v.is_finite()))
            .map(|(n, v)| format!("{n}: must be positive, got {v}"))
            .collect();
        if self.epsilon.is_finite() && self.epsilon > 0.0 && self.epsilon <= 1.0 {
            out.push(format!("epsilon: must exceed 1, got {}", self.epsilon));
        }
        out
    }

    /// Clausius–Mossotti factor `(ε−1)/(3(ε+2))`.
    pub fn epsilon_c(&self) -> f64 {
        (self.epsilon - 1.0) / (3.0 * (self.epsilon + 2.0))
    }

    /// Mean thermal speed of the gas molecules.
    pub fn v_gas(&self) -> f64 {
        (8.0 * BOLTZMANN * self.temperature / (PI * self.gas_mass)).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpResults {
    #[serde(rename = "Lambda_over_omega")]
    pub lambda_over_omega: f64,
    /// Gas damping rate in s⁻¹.
    pub gamma_exp: f64,
    pub thermalization_rate_over_omega: f64,
    pub n_th: f64,
    pub v_gas: f64,
    pub epsilon_c: f64,
}

pub fn compute_exp_params(e: &ExpParams) -> Result<ExpResults> {
    let v = e.violations();
    if !v.is_empty() {
        return Err(Error::Validation(v));
    }
    let eps_c = e.epsilon_c();
    let lambda_over_omega = 64.0 / 45.0 * PI.powi(3) * eps_c / e.numerical_aperture.powi(2)
        * (e.radius / e.wavelength).powi(3);
    let v_gas = e.v_gas();
    let gamma_exp = 64.0 / 3.0 * e.radius.powi(2) * e.pressure / (e.particle_mass * v_gas);
    let n_th = BOLTZMANN * e.temperature / (HBAR * e.omega);
    Ok(ExpResults {
        lambda_over_omega,
        gamma_exp,
        thermalization_rate_over_omega: n_th * gamma_exp / e.omega,
        n_th,
        v_gas,
        epsilon_c: eps_c,
    })
}
