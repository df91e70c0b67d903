use crate::error::{Error, Result};
use crate::linalg::pairwise_sum;

/// Product quadrature on the unit sphere: Gauss–Legendre in `cos θ` times a
/// uniform rule in `φ`. Values on the grid are stored row-major, `θ` outer.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    theta: Vec<f64>,
    cos_theta: Vec<f64>,
    theta_weights: Vec<f64>,
    phi: Vec<f64>,
    phi_weight: f64,
}

pub const MIN_NODES: usize = 8;

/// Gauss–Legendre nodes (descending, from near +1 to near −1) and weights on
/// [−1, 1]. Computed for one half and mirrored so the rule is exactly symmetric.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let weight = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = z;
        w[i] = weight;
        x[n - 1 - i] = -z;
        w[n - 1 - i] = weight;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let deriv = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, deriv)
}

impl SphereGrid {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta < MIN_NODES {
            return Err(Error::invalid("n_theta", format!("need at least {MIN_NODES} nodes")));
        }
        if n_phi < MIN_NODES {
            return Err(Error::invalid("n_phi", format!("need at least {MIN_NODES} nodes")));
        }
        let (x, w) = gauss_legendre(n_theta);
        let theta = x.iter().map(|v| v.acos()).collect();
        let phi = (0..n_phi)
            .map(|l| 2.0 * std::f64::consts::PI * l as f64 / n_phi as f64)
            .collect();
        Ok(SphereGrid {
            theta,
            cos_theta: x,
            theta_weights: w,
            phi,
            phi_weight: 2.0 * std::f64::consts::PI / n_phi as f64,
        })
    }

    pub fn n_theta(&self) -> usize {
        self.theta.len()
    }

    pub fn n_phi(&self) -> usize {
        self.phi.len()
    }

    pub fn len(&self) -> usize {
        self.n_theta() * self.n_phi()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn cos_theta(&self) -> &[f64] {
        &self.cos_theta
    }

    pub fn theta_weights(&self) -> &[f64] {
        &self.theta_weights
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn phi_weight(&self) -> f64 {
        self.phi_weight
    }

    /// Quadrature weight of node `(i, l)`; the same for every `l`.
    pub fn weight(&self, i: usize) -> f64 {
        self.theta_weights[i] * self.phi_weight
    }

    pub fn index(&self, i: usize, l: usize) -> usize {
        i * self.n_phi() + l
    }

    /// Index of the node at `(π − θ_i, −φ_l)`, which is again a grid node.
    pub fn reflected_index(&self, i: usize, l: usize) -> usize {
        let np = self.n_phi();
        self.index(self.n_theta() - 1 - i, (np - l) % np)
    }

    /// `∮ f dΩ` for values laid out on the grid, summed in a fixed tree.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.len(), "field does not match grid");
        let weighted: Vec<f64> = values
            .iter()
            .enumerate()
            .map(|(idx, v)| v * self.weight(idx / self.n_phi()))
            .collect();
        pairwise_sum(&weighted)
    }

    pub fn total_weight(&self) -> f64 {
        self.integrate(&vec![1.0; self.len()])
    }
}

impl Default for SphereGrid {
    fn default() -> Self {
        SphereGrid::new(64, 64).expect("default grid is valid")
    }
}
