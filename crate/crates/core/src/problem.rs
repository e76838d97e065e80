//! Problem instances, solutions, feasibility accounting and scenario
//! generation.
//!
//! An instance is a fixed list of candidate IRS sites, each carrying its
//! element bounds, affine cost model and precomputed log-outage coefficient,
//! together with the three global budgets (installed-site cardinality, total
//! elements, total cost). Instances are immutable after construction and
//! serializable to/from JSON.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{
    self, beta_coeff, effective_gain, path_loss, ChannelError, FadeDistribution, LinkBudget,
    PathLossParams,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error("site {id}: {reason}")]
    InvalidSite { id: usize, reason: &'static str },
    #[error("invalid instance: {0}")]
    InvalidInstance(&'static str),
    #[error("invalid scenario config: {0}")]
    InvalidConfig(&'static str),
    #[error("solution has {got} entries, instance has {expected} sites")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("element count {value} for site {id} outside [{lo}, {hi}]")]
    ElementsOutOfBounds { id: usize, value: u32, lo: u32, hi: u32 },
    #[error(transparent)]
    Channel(#[from] ChannelError),
}

/// A candidate IRS location.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrsSite {
    /// Index within the instance; ids are contiguous from 0.
    pub id: usize,
    /// Planar coordinates in meters.
    pub position: [f64; 2],
    /// Minimum number of reflecting elements if installed.
    pub l_min: u32,
    /// Maximum number of reflecting elements.
    pub l_max: u32,
    /// Fixed deployment cost.
    pub fixed_cost: f64,
    /// Cost per reflecting element.
    pub cost_rate: f64,
    /// Log-outage coefficient, `ln F(sqrt(gamma_th / rho))`, nonpositive.
    pub beta: f64,
}

impl IrsSite {
    fn validate(&self) -> Result<(), ProblemError> {
        let fail = |reason| Err(ProblemError::InvalidSite { id: self.id, reason });
        if self.l_min > self.l_max {
            return fail("l_min exceeds l_max");
        }
        if !(self.fixed_cost >= 0.0 && self.fixed_cost.is_finite()) {
            return fail("fixed_cost must be nonnegative and finite");
        }
        if !(self.cost_rate >= 0.0 && self.cost_rate.is_finite()) {
            return fail("cost_rate must be nonnegative and finite");
        }
        if !(self.beta <= 0.0) || !self.beta.is_finite() {
            return fail("beta must be nonpositive and finite");
        }
        Ok(())
    }

    /// Cost of installing this site with `elements` reflecting elements.
    pub fn cost(&self, elements: u32) -> f64 {
        self.fixed_cost + self.cost_rate * f64::from(elements)
    }
}

/// The full discrete optimization input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct ProblemInstance {
    sites: Vec<IrsSite>,
    max_irs: usize,
    max_total_elements: u64,
    max_total_cost: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawInstance {
    sites: Vec<IrsSite>,
    max_irs: usize,
    max_total_elements: u64,
    max_total_cost: f64,
}

impl TryFrom<RawInstance> for ProblemInstance {
    type Error = ProblemError;
    fn try_from(raw: RawInstance) -> Result<Self, Self::Error> {
        ProblemInstance::new(raw.sites, raw.max_irs, raw.max_total_elements, raw.max_total_cost)
    }
}

impl From<ProblemInstance> for RawInstance {
    fn from(p: ProblemInstance) -> Self {
        RawInstance {
            sites: p.sites,
            max_irs: p.max_irs,
            max_total_elements: p.max_total_elements,
            max_total_cost: p.max_total_cost,
        }
    }
}

impl ProblemInstance {
    pub fn new(
        sites: Vec<IrsSite>,
        max_irs: usize,
        max_total_elements: u64,
        max_total_cost: f64,
    ) -> Result<Self, ProblemError> {
        for (n, site) in sites.iter().enumerate() {
            if site.id != n {
                return Err(ProblemError::InvalidInstance("site ids must be contiguous from 0"));
            }
            site.validate()?;
        }
        if max_irs > sites.len() {
            return Err(ProblemError::InvalidInstance("max_irs exceeds the number of sites"));
        }
        if !(max_total_cost >= 0.0 && max_total_cost.is_finite()) {
            return Err(ProblemError::InvalidInstance("max_total_cost must be nonnegative"));
        }
        Ok(Self { sites, max_irs, max_total_elements, max_total_cost })
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn sites(&self) -> &[IrsSite] {
        &self.sites
    }

    pub fn site(&self, n: usize) -> &IrsSite {
        &self.sites[n]
    }

    pub fn max_irs(&self) -> usize {
        self.max_irs
    }

    pub fn max_total_elements(&self) -> u64 {
        self.max_total_elements
    }

    pub fn max_total_cost(&self) -> f64 {
        self.max_total_cost
    }

    pub fn betas(&self) -> Vec<f64> {
        self.sites.iter().map(|s| s.beta).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Binary installation vector plus per-site element counts. Element counts
/// are validated against the per-site bounds at construction, for every site
/// (counts at uninstalled sites are carried but do not affect the objective
/// or the budgets).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Solution {
    x: Vec<bool>,
    elements: Vec<u32>,
}

impl Solution {
    pub fn new(
        instance: &ProblemInstance,
        x: Vec<bool>,
        elements: Vec<u32>,
    ) -> Result<Self, ProblemError> {
        let n = instance.n_sites();
        if x.len() != n {
            return Err(ProblemError::DimensionMismatch { got: x.len(), expected: n });
        }
        if elements.len() != n {
            return Err(ProblemError::DimensionMismatch { got: elements.len(), expected: n });
        }
        for (site, &l) in instance.sites().iter().zip(&elements) {
            if l < site.l_min || l > site.l_max {
                return Err(ProblemError::ElementsOutOfBounds {
                    id: site.id,
                    value: l,
                    lo: site.l_min,
                    hi: site.l_max,
                });
            }
        }
        Ok(Self { x, elements })
    }

    /// The empty installation with all element counts at their minimum;
    /// feasible for every instance.
    pub fn empty(instance: &ProblemInstance) -> Self {
        Self {
            x: vec![false; instance.n_sites()],
            elements: instance.sites().iter().map(|s| s.l_min).collect(),
        }
    }

    pub fn x(&self) -> &[bool] {
        &self.x
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    /// Indices of installed sites in ascending order, with element counts.
    pub fn installed(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.x
            .iter()
            .enumerate()
            .filter(|(_, &on)| on)
            .map(|(n, _)| (n, self.elements[n]))
    }
}

/// Which budget a candidate solution violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConstraintTag {
    Cardinality,
    TotalElements,
    TotalCost,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub cardinality: usize,
    pub total_elements: u64,
    pub total_cost: f64,
    pub violated: Vec<ConstraintTag>,
}

/// Canonical accumulation of the three budget totals over installed sites,
/// in ascending site order. Every component that needs these sums uses this
/// helper so that floating-point rounding is identical everywhere.
pub(crate) fn selection_totals(
    instance: &ProblemInstance,
    x: &[bool],
    elements: &[u32],
) -> (usize, u64, f64) {
    let mut cardinality = 0usize;
    let mut total_elements = 0u64;
    let mut total_cost = 0.0f64;
    for (n, site) in instance.sites().iter().enumerate() {
        if x[n] {
            cardinality += 1;
            total_elements += u64::from(elements[n]);
            total_cost += site.cost(elements[n]);
        }
    }
    (cardinality, total_elements, total_cost)
}

/// Objective `G = sum_n beta_n x_n L_n` (log of the system outage bound).
pub fn objective_g(instance: &ProblemInstance, solution: &Solution) -> f64 {
    assert_eq!(solution.x().len(), instance.n_sites(), "dimension mismatch");
    let mut acc = 0.0;
    for (n, site) in instance.sites().iter().enumerate() {
        if solution.x()[n] {
            acc += site.beta * f64::from(solution.elements()[n]);
        }
    }
    acc
}

/// Checks the cardinality, total-element and total-cost budgets. Element
/// bounds are a construction-time invariant of [`Solution`], not re-checked
/// here.
pub fn check_feasibility(instance: &ProblemInstance, solution: &Solution) -> FeasibilityReport {
    assert_eq!(solution.x().len(), instance.n_sites(), "dimension mismatch");
    let (cardinality, total_elements, total_cost) =
        selection_totals(instance, solution.x(), solution.elements());
    let mut violated = Vec::new();
    if cardinality > instance.max_irs() {
        violated.push(ConstraintTag::Cardinality);
    }
    if total_elements > instance.max_total_elements() {
        violated.push(ConstraintTag::TotalElements);
    }
    if total_cost > instance.max_total_cost() {
        violated.push(ConstraintTag::TotalCost);
    }
    FeasibilityReport {
        feasible: violated.is_empty(),
        cardinality,
        total_elements,
        total_cost,
        violated,
    }
}

/// Axis-aligned placement rectangle, corners in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

impl Rect {
    pub fn new(min: [f64; 2], max: [f64; 2]) -> Result<Self, ProblemError> {
        if !(min[0] < max[0] && min[1] < max[1]) {
            return Err(ProblemError::InvalidConfig("degenerate placement rectangle"));
        }
        Ok(Self { min, max })
    }
}

/// Random-scenario recipe: fixed user positions, two candidate placement
/// rectangles, cost ranges and the physical-layer context. All powers linear.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub ue_positions: [[f64; 2]; 2],
    pub rect_upper: Rect,
    pub rect_lower: Rect,
    pub n_sites: usize,
    pub max_irs: usize,
    pub l_min: u32,
    pub l_max: u32,
    pub max_total_elements: u64,
    pub max_total_cost: f64,
    pub fixed_cost_range: (f64, f64),
    pub cost_rate_range: (f64, f64),
    pub path_loss: PathLossParams,
    pub link_budget: LinkBudget,
    pub fade: FadeDistribution,
}

impl Default for ScenarioConfig {
    /// The benchmark configuration used throughout the experiment suite:
    /// users at (0,0) and (100,0), sites uniform in [30,70]x[20,40] or its
    /// mirror, 25 candidate sites, at most 7 installed, 5..40 elements each,
    /// 250 elements and 75 cost units total, costs Uniform[1,5] +
    /// Uniform[0.1,0.5] per element, P = 25 dBm, sigma_LI^2 = -70 dBm,
    /// sigma_w^2 = -80 dBm, threshold 8 dB, unit channel variance,
    /// path loss d^-2.7.
    fn default() -> Self {
        ScenarioConfig {
            ue_positions: [[0.0, 0.0], [100.0, 0.0]],
            rect_upper: Rect { min: [30.0, 20.0], max: [70.0, 40.0] },
            rect_lower: Rect { min: [30.0, -40.0], max: [70.0, -20.0] },
            n_sites: 25,
            max_irs: 7,
            l_min: 5,
            l_max: 40,
            max_total_elements: 250,
            max_total_cost: 75.0,
            fixed_cost_range: (1.0, 5.0),
            cost_rate_range: (0.1, 0.5),
            path_loss: PathLossParams { a0: 1.0, alpha: 2.7 },
            link_budget: LinkBudget {
                tx_power_mw: channel::dbm_to_mw(25.0),
                noise_mw: channel::dbm_to_mw(-80.0),
                residual_li_mw: channel::dbm_to_mw(-70.0),
                sinr_threshold: channel::db_to_linear(8.0),
                duplex: channel::Duplex::Fd,
            },
            fade: FadeDistribution::RayleighProduct { sigma_sq: 1.0 },
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), ProblemError> {
        if self.n_sites == 0 {
            return Err(ProblemError::InvalidConfig("n_sites must be positive"));
        }
        if self.max_irs > self.n_sites {
            return Err(ProblemError::InvalidConfig("max_irs exceeds n_sites"));
        }
        if self.l_min > self.l_max {
            return Err(ProblemError::InvalidConfig("l_min exceeds l_max"));
        }
        if self.fixed_cost_range.0 > self.fixed_cost_range.1 || self.fixed_cost_range.0 < 0.0 {
            return Err(ProblemError::InvalidConfig("fixed_cost_range out of order"));
        }
        if self.cost_rate_range.0 > self.cost_rate_range.1 || self.cost_rate_range.0 < 0.0 {
            return Err(ProblemError::InvalidConfig("cost_rate_range out of order"));
        }
        if !(self.max_total_cost >= 0.0 && self.max_total_cost.is_finite()) {
            return Err(ProblemError::InvalidConfig("max_total_cost must be nonnegative"));
        }
        Rect::new(self.rect_upper.min, self.rect_upper.max)?;
        Rect::new(self.rect_lower.min, self.rect_lower.max)?;
        Ok(())
    }
}

/// Euclidean distance; dimension-generic so a 3-D variant costs nothing.
pub fn euclidean<const D: usize>(a: [f64; D], b: [f64; D]) -> f64 {
    let mut acc = 0.0;
    for d in 0..D {
        let diff = a[d] - b[d];
        acc += diff * diff;
    }
    acc.sqrt()
}

fn unif(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.gen::<f64>()
}

/// Draws a random instance: each site picks the upper or lower rectangle
/// with probability 1/2, a uniform position inside it, and uniform cost
/// parameters; the log-outage coefficient then follows deterministically
/// from the two hop distances. Bit-identical for a given seed.
///
/// Per site the generator consumes exactly five f64 draws, in the order
/// rectangle flag, x, y, fixed cost, cost rate.
pub fn generate_scenario(config: &ScenarioConfig, seed: u64) -> Result<ProblemInstance, ProblemError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sites = Vec::with_capacity(config.n_sites);
    for id in 0..config.n_sites {
        let rect = if rng.gen::<f64>() < 0.5 { &config.rect_upper } else { &config.rect_lower };
        let px = unif(&mut rng, rect.min[0], rect.max[0]);
        let py = unif(&mut rng, rect.min[1], rect.max[1]);
        let fixed_cost = unif(&mut rng, config.fixed_cost_range.0, config.fixed_cost_range.1);
        let cost_rate = unif(&mut rng, config.cost_rate_range.0, config.cost_rate_range.1);

        let position = [px, py];
        let d1 = euclidean(config.ue_positions[0], position);
        let d2 = euclidean(config.ue_positions[1], position);
        let delta = path_loss(&config.path_loss, d1)? * path_loss(&config.path_loss, d2)?;
        let rho = effective_gain(&config.link_budget, delta);
        let beta = beta_coeff(&config.fade, &config.link_budget, rho)?;

        sites.push(IrsSite {
            id,
            position,
            l_min: config.l_min,
            l_max: config.l_max,
            fixed_cost,
            cost_rate,
            beta,
        });
    }
    ProblemInstance::new(sites, config.max_irs, config.max_total_elements, config.max_total_cost)
}

/// Builds the knapsack-shaped special case used as a correctness oracle:
/// one element per site (`l_min = l_max = 1`), no cardinality or element
/// budget, `beta_n = -phi_n`, site cost `theta_n` fixed, cost budget equal
/// to the knapsack capacity. Maximizing `sum phi_n x_n` under
/// `sum theta_n x_n <= capacity` is then exactly the instance's problem,
/// with optimum `G* = -(knapsack optimum)`.
pub fn knapsack_reduction(
    values: &[u64],
    weights: &[u64],
    capacity: u64,
) -> Result<ProblemInstance, ProblemError> {
    if values.len() != weights.len() {
        return Err(ProblemError::InvalidInstance("values/weights length mismatch"));
    }
    if values.iter().any(|&v| v == 0) || weights.iter().any(|&w| w == 0) {
        return Err(ProblemError::InvalidInstance("knapsack coefficients must be positive"));
    }
    let n = values.len();
    let sites = (0..n)
        .map(|id| IrsSite {
            id,
            position: [0.0, 0.0],
            l_min: 1,
            l_max: 1,
            fixed_cost: weights[id] as f64,
            cost_rate: 0.0,
            beta: -(values[id] as f64),
        })
        .collect();
    ProblemInstance::new(sites, n, n as u64, capacity as f64)
}

/// Small random instance for oracle harnesses: at most `max_sites` sites,
/// element ranges at most 5 values wide, loosely scaled budgets. Exhaustive
/// enumeration stays trivial on these.
pub fn random_small_instance(rng: &mut impl Rng, max_sites: usize) -> ProblemInstance {
    let n = rng.gen_range(1..=max_sites.max(1));
    let mut sites = Vec::with_capacity(n);
    let mut max_cost_sum = 0.0;
    let mut l_max_sum = 0u64;
    for id in 0..n {
        let l_min = rng.gen_range(0u32..=8);
        let l_max = l_min + rng.gen_range(0u32..=4);
        let fixed_cost = unif(rng, 0.0, 5.0);
        let cost_rate = unif(rng, 0.0, 1.0);
        let beta = -unif(rng, 0.01, 3.0);
        max_cost_sum += fixed_cost + cost_rate * f64::from(l_max);
        l_max_sum += u64::from(l_max);
        sites.push(IrsSite { id, position: [0.0, 0.0], l_min, l_max, fixed_cost, cost_rate, beta });
    }
    let max_irs = rng.gen_range(0..=n);
    let max_total_elements = (unif(rng, 0.0, 1.2) * l_max_sum as f64) as u64;
    let max_total_cost = unif(rng, 0.0, 1.2) * max_cost_sum;
    ProblemInstance::new(sites, max_irs, max_total_elements, max_total_cost)
        .expect("generated instance is valid")
}
