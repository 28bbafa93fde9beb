//! Domain types and utility/feasibility primitives shared by all solvers.
//!
//! A PEVG (a group of plug-in electric vehicles behaving as one follower)
//! buying `x` MWh at price `p` gets utility `b*x - s*x^2/2 - p*x`. The grid
//! sells at most `capacity` MWh per slot, which couples the followers'
//! strategy sets through `sum(x) <= capacity`.

use crate::error::{Error, Result};

/// Absolute feasibility slack, in MWh. Double-precision projections land
/// well inside this.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// One follower: battery capacity `b` (MWh), satisfaction parameter `s`
/// (utility per MWh^2), and initial charge `x_ini` (MWh).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PevgParams {
    pub b: f64,
    pub s: f64,
    pub x_ini: f64,
}

impl PevgParams {
    pub fn new(b: f64, s: f64, x_ini: f64) -> Result<Self> {
        if !b.is_finite() || b <= 0.0 {
            return Err(Error::InvalidInput(format!("pevg.b must be > 0, got {b}")));
        }
        if !s.is_finite() || s <= 0.0 {
            return Err(Error::InvalidInput(format!("pevg.s must be > 0, got {s}")));
        }
        if !x_ini.is_finite() || x_ini < 0.0 {
            return Err(Error::InvalidInput(format!(
                "pevg.x_ini must be >= 0, got {x_ini}"
            )));
        }
        if x_ini > b {
            return Err(Error::InvalidInput(format!(
                "pevg.x_ini ({x_ini}) exceeds battery capacity b ({b})"
            )));
        }
        Ok(Self { b, s, x_ini })
    }

    /// Demand at which marginal utility reaches zero at price `p`:
    /// `max(0, (b - p) / s)`. Demands are clamped here rather than zeroing
    /// utility discontinuously, which keeps the map concave.
    pub fn satiation(&self, p: Price) -> f64 {
        ((self.b - p.value()) / self.s).max(0.0)
    }
}

/// The leader's side: available energy `capacity` (MWh) and the announced
/// initial price `initial_price` (USD/MWh).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridParams {
    pub capacity: f64,
    pub initial_price: f64,
}

impl GridParams {
    pub fn new(capacity: f64, initial_price: f64) -> Result<Self> {
        if !capacity.is_finite() || capacity <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "capacity must be > 0, got {capacity}"
            )));
        }
        if !initial_price.is_finite() || initial_price < 0.0 {
            return Err(Error::InvalidInput(format!(
                "initial_price must be >= 0, got {initial_price}"
            )));
        }
        Ok(Self {
            capacity,
            initial_price,
        })
    }
}

/// A complete single-slot instance: the grid plus an ordered list of PEVGs.
/// The ordering is stable and indexes every per-PEVG vector in the crate.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub grid: GridParams,
    pub pevgs: Vec<PevgParams>,
    pub seed: u64,
}

impl Scenario {
    pub fn new(grid: GridParams, pevgs: Vec<PevgParams>, seed: u64) -> Result<Self> {
        if pevgs.is_empty() {
            return Err(Error::InvalidInput("scenario needs at least one PEVG".into()));
        }
        Ok(Self { grid, pevgs, seed })
    }

    pub fn len(&self) -> usize {
        self.pevgs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pevgs.is_empty()
    }

    pub fn capacity(&self) -> f64 {
        self.grid.capacity
    }

    pub fn initial_price(&self) -> Price {
        Price::new(self.grid.initial_price).expect("validated at construction")
    }
}

/// Price per MWh, nonnegative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Price(f64);

impl Price {
    pub const ZERO: Price = Price(0.0);

    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::InvalidInput(format!("price must be >= 0, got {p}")));
        }
        Ok(Price(p))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl std::fmt::Display for Price {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Demand vector, one entry per PEVG, in scenario order.
#[derive(Debug, Clone, PartialEq)]
pub struct Allocation(Vec<f64>);

impl Allocation {
    pub fn new(x: Vec<f64>) -> Self {
        Allocation(x)
    }

    pub fn zeros(n: usize) -> Self {
        Allocation(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Index<usize> for Allocation {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl From<Vec<f64>> for Allocation {
    fn from(x: Vec<f64>) -> Self {
        Allocation(x)
    }
}

impl AsRef<[f64]> for Allocation {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// One PEVG's utility from consuming `x` MWh at price `p`:
/// `b*x - s*x^2/2 - p*x`. Rejects negative demand.
pub fn pevg_utility(params: &PevgParams, x: f64, p: Price) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::InvalidInput(format!("demand must be >= 0, got {x}")));
    }
    Ok(params.b * x - 0.5 * params.s * x * x - p.value() * x)
}

/// Grid revenue `p * sum(x)`.
pub fn grid_revenue(p: Price, alloc: &Allocation) -> f64 {
    p.value() * alloc.total()
}

/// Joint utility of all PEVGs: `sum_m (b_m x_m - s_m x_m^2 / 2) - p * sum_m x_m`.
/// Equals the sum of `pevg_utility` over all members.
pub fn joint_utility(scenario: &Scenario, alloc: &Allocation, p: Price) -> Result<f64> {
    if alloc.len() != scenario.len() {
        return Err(Error::InvalidInput(format!(
            "allocation has {} entries for {} PEVGs",
            alloc.len(),
            scenario.len()
        )));
    }
    let mut total = 0.0;
    for (params, &x) in scenario.pevgs.iter().zip(alloc.as_slice()) {
        total += pevg_utility(params, x, p)?;
    }
    Ok(total)
}

/// True iff every demand is >= -tol and the total stays within capacity + tol.
pub fn feasible(scenario: &Scenario, alloc: &Allocation, tol: f64) -> bool {
    alloc.len() == scenario.len()
        && alloc.as_slice().iter().all(|&x| x >= -tol)
        && alloc.total() <= scenario.capacity() + tol
}

/// The non-trivial-game condition: total battery capacity must exceed the
/// total VE demand plus `p * N`, i.e. `sum(b) > p*N + sum(s_n * x_n)`.
/// When it fails, every PEVG could simply be charged to capacity and no
/// competition takes place.
pub fn capacity_condition(scenario: &Scenario, alloc: &Allocation, p: Price) -> bool {
    let n = scenario.len() as f64;
    let sum_b: f64 = scenario.pevgs.iter().map(|g| g.b).sum();
    let weighted: f64 = scenario
        .pevgs
        .iter()
        .zip(alloc.as_slice())
        .map(|(g, &x)| g.s * x)
        .sum();
    sum_b > p.value() * n + weighted
}
