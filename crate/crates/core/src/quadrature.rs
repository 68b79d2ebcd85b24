//! Composite quadrature rules used for moment integrals.

/// A composite rule over a fixed number of equal panels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quadrature {
    /// Composite trapezoid with the given number of panels.
    Trapezoid(usize),
    /// Composite 8-point Gauss-Legendre with the given number of panels.
    Gauss(usize),
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature::Trapezoid(1000)
    }
}

// 8-point Gauss-Legendre nodes and weights on [-1, 1].
const GL8_NODES: [f64; 4] =
    [0.183_434_642_495_649_8, 0.525_532_409_916_329, 0.796_666_477_413_626_7, 0.960_289_856_497_536_3];
const GL8_WEIGHTS: [f64; 4] =
    [0.362_683_783_378_362, 0.313_706_645_877_887_3, 0.222_381_034_453_374_5, 0.101_228_536_290_376_3];

impl Quadrature {
    pub fn panels(&self) -> usize {
        match *self {
            Quadrature::Trapezoid(n) | Quadrature::Gauss(n) => n,
        }
    }

    /// Integrates `f` over `[lo, hi]`. An empty interval gives 0.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, lo: f64, hi: f64) -> f64 {
        if hi == lo {
            return 0.0;
        }
        match *self {
            Quadrature::Trapezoid(n) => trapezoid(f, lo, hi, n.max(1)),
            Quadrature::Gauss(n) => gauss_legendre(f, lo, hi, n.max(1)),
        }
    }
}

pub fn trapezoid<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, panels: usize) -> f64 {
    let h = (hi - lo) / panels as f64;
    let interior: f64 = (1..panels).map(|i| f(lo + i as f64 * h)).sum();
    h * (0.5 * (f(lo) + f(hi)) + interior)
}

pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, panels: usize) -> f64 {
    let h = (hi - lo) / panels as f64;
    let half = 0.5 * h;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * h;
        let panel: f64 =
            GL8_NODES.iter().zip(GL8_WEIGHTS.iter()).map(|(&x, &w)| w * (f(mid - half * x) + f(mid + half * x))).sum();
        total += half * panel;
    }
    total
}
