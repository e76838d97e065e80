//! Physical-layer math for the IRS-assisted two-way link.
//!
//! Everything here is a pure function of its inputs: large-scale path loss,
//! the effective SINR gain of a relayed hop pair, the per-element
//! Rayleigh-product fading CDF, per-site log-outage coefficients and the
//! multiplicative outage bounds built from them, plus the full-duplex to
//! half-duplex conversion used for fair comparisons.
//!
//! All power quantities are stored linearly in milliwatts; dB/dBm values are
//! accepted only at the configuration boundary (see [`dbm_to_mw`]).

mod bessel;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bessel::EULER_GAMMA;

/// Floor applied to log-outage coefficients so that `exp(beta * L)`
/// underflows gracefully instead of producing garbage.
pub const BETA_FLOOR: f64 = -700.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("distance must be positive, got {0}")]
    NonPositiveDistance(f64),
    #[error("bessel K1 is defined for positive arguments, got {0}")]
    BesselDomain(f64),
    #[error("fade CDF evaluates to zero at the outage threshold; site would be outage-free")]
    InfinitelyGoodSite,
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

/// Large-scale path-loss model `a0 * d^-alpha` with distance in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLossParams {
    pub a0: f64,
    pub alpha: f64,
}

impl PathLossParams {
    pub fn new(a0: f64, alpha: f64) -> Result<Self, ChannelError> {
        if !(a0 > 0.0 && a0.is_finite()) {
            return Err(ChannelError::InvalidParameter("a0 must be positive"));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(ChannelError::InvalidParameter("alpha must be positive"));
        }
        Ok(Self { a0, alpha })
    }
}

/// Duplexing mode of the two user terminals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Duplex {
    Fd,
    Hd,
}

impl Duplex {
    pub fn as_str(self) -> &'static str {
        match self {
            Duplex::Fd => "FD",
            Duplex::Hd => "HD",
        }
    }
}

/// Link-level power budget. Powers in milliwatts, threshold linear.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    pub tx_power_mw: f64,
    pub noise_mw: f64,
    pub residual_li_mw: f64,
    pub sinr_threshold: f64,
    pub duplex: Duplex,
}

impl LinkBudget {
    pub fn new(
        tx_power_mw: f64,
        noise_mw: f64,
        residual_li_mw: f64,
        sinr_threshold: f64,
        duplex: Duplex,
    ) -> Result<Self, ChannelError> {
        if !(tx_power_mw > 0.0 && tx_power_mw.is_finite()) {
            return Err(ChannelError::InvalidParameter("tx_power_mw must be positive"));
        }
        if !(noise_mw > 0.0 && noise_mw.is_finite()) {
            return Err(ChannelError::InvalidParameter("noise_mw must be positive"));
        }
        if !(residual_li_mw >= 0.0 && residual_li_mw.is_finite()) {
            return Err(ChannelError::InvalidParameter("residual_li_mw must be nonnegative"));
        }
        if !(sinr_threshold > 0.0 && sinr_threshold.is_finite()) {
            return Err(ChannelError::InvalidParameter("sinr_threshold must be positive"));
        }
        if duplex == Duplex::Hd && residual_li_mw != 0.0 {
            return Err(ChannelError::InvalidParameter(
                "half-duplex links carry no residual loop interference",
            ));
        }
        Ok(Self {
            tx_power_mw,
            noise_mw,
            residual_li_mw,
            sinr_threshold,
            duplex,
        })
    }

    /// The half-duplex budget with equal spectral efficiency: loop
    /// interference drops to zero and the SINR threshold is inflated by
    /// [`hd_threshold`].
    pub fn to_hd(&self) -> LinkBudget {
        LinkBudget {
            tx_power_mw: self.tx_power_mw,
            noise_mw: self.noise_mw,
            residual_li_mw: 0.0,
            sinr_threshold: hd_threshold(self.sinr_threshold),
            duplex: Duplex::Hd,
        }
    }
}

/// Residual loop-interference model `omega * P^nu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiModel {
    pub omega: f64,
    pub nu: f64,
}

impl LiModel {
    pub fn new(omega: f64, nu: f64) -> Result<Self, ChannelError> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(ChannelError::InvalidParameter("omega must be positive"));
        }
        if !(0.0..=1.0).contains(&nu) {
            return Err(ChannelError::InvalidParameter("nu must lie in [0, 1]"));
        }
        Ok(Self { omega, nu })
    }
}

/// Per-element fading distribution of `|h||g|`. A closed tagged variant so
/// alternative CDFs can be added without touching call sites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FadeDistribution {
    /// Product of two independent Rayleigh(sigma/sqrt(2)) magnitudes, i.e.
    /// both underlying channels are complex normal with variance `sigma_sq`.
    RayleighProduct { sigma_sq: f64 },
}

impl FadeDistribution {
    pub fn rayleigh_product(sigma_sq: f64) -> Result<Self, ChannelError> {
        if !(sigma_sq > 0.0 && sigma_sq.is_finite()) {
            return Err(ChannelError::InvalidParameter("sigma_sq must be positive"));
        }
        Ok(FadeDistribution::RayleighProduct { sigma_sq })
    }
}

/// dBm -> milliwatts.
pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

/// Milliwatts -> dBm.
pub fn mw_to_dbm(mw: f64) -> f64 {
    10.0 * mw.log10()
}

/// dB -> linear ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Large-scale attenuation `a0 * d^-alpha`, strictly decreasing in distance.
pub fn path_loss(params: &PathLossParams, distance_m: f64) -> Result<f64, ChannelError> {
    if !(distance_m > 0.0) {
        return Err(ChannelError::NonPositiveDistance(distance_m));
    }
    Ok(params.a0 * distance_m.powf(-params.alpha))
}

/// Effective SINR gain `rho = P * delta / (sigma_LI^2 + sigma_w^2)` of a site
/// whose end-to-end (two-hop) path loss is `delta_n`. In half-duplex mode the
/// denominator is the noise power alone.
pub fn effective_gain(budget: &LinkBudget, delta_n: f64) -> f64 {
    debug_assert!(delta_n > 0.0);
    let denom = match budget.duplex {
        Duplex::Fd => budget.residual_li_mw + budget.noise_mw,
        Duplex::Hd => budget.noise_mw,
    };
    budget.tx_power_mw * delta_n / denom
}

/// Residual loop-interference power `omega * P^nu` in milliwatts.
pub fn residual_li_power(model: &LiModel, tx_power_mw: f64) -> f64 {
    debug_assert!(tx_power_mw > 0.0);
    model.omega * tx_power_mw.powf(model.nu)
}

/// SINR threshold of the spectrally-equivalent half-duplex scheme:
/// `(1 + gamma)^2 - 1`, from equating `log(1+g) = log(1+g_hd)/2`.
pub fn hd_threshold(gamma_th: f64) -> f64 {
    debug_assert!(gamma_th >= 0.0);
    (1.0 + gamma_th) * (1.0 + gamma_th) - 1.0
}

/// Modified Bessel function of the second kind, order one.
pub fn bessel_k1(x: f64) -> Result<f64, ChannelError> {
    if !(x > 0.0) {
        return Err(ChannelError::BesselDomain(x));
    }
    Ok(bessel::k1(x))
}

/// CDF of the per-element fade variable at `u >= 0`. Continuous,
/// nondecreasing, `F(0) = 0`, limit 1.
pub fn fade_cdf(dist: &FadeDistribution, u: f64) -> f64 {
    debug_assert!(u >= 0.0);
    match dist {
        FadeDistribution::RayleighProduct { sigma_sq } => {
            bessel::one_minus_x_k1(2.0 * u / sigma_sq)
        }
    }
}

/// Per-site log-outage coefficient `beta = ln F(sqrt(gamma_th / rho))`,
/// clamped at [`BETA_FLOOR`]. A CDF value of exactly zero (an outage-free
/// site, only reachable with infinite gain) is rejected as a sentinel.
pub fn beta_coeff(
    dist: &FadeDistribution,
    budget: &LinkBudget,
    rho_n: f64,
) -> Result<f64, ChannelError> {
    if !(rho_n > 0.0) {
        return Err(ChannelError::InvalidParameter("rho_n must be positive"));
    }
    let u = (budget.sinr_threshold / rho_n).sqrt();
    let f = fade_cdf(dist, u);
    if f == 0.0 {
        return Err(ChannelError::InfinitelyGoodSite);
    }
    let beta = f.ln();
    if beta < BETA_FLOOR {
        log::warn!("beta coefficient {beta:.3} clamped to floor {BETA_FLOOR}");
        return Ok(BETA_FLOOR);
    }
    Ok(beta.min(0.0))
}

/// Outage bound `f^L` for a single site with `L` elements; `L = 0` gives 1.
pub fn outage_bound_single(f_val: f64, elements: u32) -> f64 {
    debug_assert!(f_val > 0.0 && f_val <= 1.0);
    f_val.powi(elements as i32)
}

/// System outage bound `exp(sum_n beta_n x_n L_n)`; equals 1 for an empty
/// installation.
pub fn outage_bound_system(betas: &[f64], x: &[bool], elements: &[u32]) -> f64 {
    assert_eq!(betas.len(), x.len());
    assert_eq!(betas.len(), elements.len());
    log_outage_bound_system(betas, x, elements).exp()
}

/// Log of the system outage bound, `sum_n beta_n x_n L_n`.
pub fn log_outage_bound_system(betas: &[f64], x: &[bool], elements: &[u32]) -> f64 {
    assert_eq!(betas.len(), x.len());
    assert_eq!(betas.len(), elements.len());
    let mut acc = 0.0;
    for n in 0..betas.len() {
        if x[n] {
            acc += betas[n] * f64::from(elements[n]);
        }
    }
    acc
}

/// Residual-LI power at which the per-link FD and HD outage bounds coincide,
/// in milliwatts: `sigma_w^2 * (gamma_th + 1)`. FD is preferable below it.
///
/// Derivation: the per-link bound argument is `sqrt(gamma_th / rho)`; FD and
/// HD coincide when `gamma_th (sigma_LI^2 + sigma_w^2) = gamma_th_hd sigma_w^2`
/// and `gamma_th_hd / gamma_th - 1 = gamma_th + 1`.
pub fn fd_hd_crossover_li_mw(noise_mw: f64, gamma_th: f64) -> f64 {
    debug_assert!(noise_mw > 0.0 && gamma_th > 0.0);
    noise_mw * (gamma_th + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fd_budget() -> LinkBudget {
        LinkBudget::new(dbm_to_mw(25.0), dbm_to_mw(-80.0), dbm_to_mw(-70.0), db_to_linear(8.0), Duplex::Fd)
            .unwrap()
    }

    fn rp_unit() -> FadeDistribution {
        FadeDistribution::rayleigh_product(1.0).unwrap()
    }

    #[test]
    fn path_loss_values() {
        let p = PathLossParams::new(1.0, 2.7).unwrap();
        assert_eq!(path_loss(&p, 1.0).unwrap(), 1.0);
        // Frozen via exp(-2.7 ln 50), cross-checked in the log domain.
        let at50 = path_loss(&p, 50.0).unwrap();
        assert!((at50 - 2.586_908_026_309_43e-5).abs() < 1e-18);
        assert!(((-2.7f64 * 50f64.ln()).exp() - at50).abs() < 1e-20);
        // Doubling the distance scales by 2^-2.7.
        let at100 = path_loss(&p, 100.0).unwrap();
        assert!((at100 / at50 - 2f64.powf(-2.7)).abs() < 1e-15);
        assert!(path_loss(&p, 0.0).is_err());
        assert!(path_loss(&p, -3.0).is_err());
    }

    #[test]
    fn effective_gain_values() {
        let b = fd_budget();
        let hop = 50f64.powf(-2.7);
        let delta = hop * hop;
        let rho = effective_gain(&b, delta);
        assert!((rho - 1.923_841_511_416_926_5).abs() < 1e-12);
        // HD removes the loop-interference term: denominator shrinks 11x.
        let hd = LinkBudget { residual_li_mw: 0.0, duplex: Duplex::Hd, ..b };
        assert!((effective_gain(&hd, delta) / rho - 11.0).abs() < 1e-12);
        // Linear in delta.
        assert!((effective_gain(&b, delta * 10.0) / rho - 10.0).abs() < 1e-12);
    }

    #[test]
    fn residual_li_values() {
        let m = LiModel::new(1e-9, 0.0).unwrap();
        assert_eq!(residual_li_power(&m, 316.23), 1e-9);
        let m = LiModel::new(1e-9, 1.0).unwrap();
        assert!((residual_li_power(&m, 316.23) - 3.1623e-7).abs() < 1e-15);
        let m = LiModel::new(1e-9, 0.5).unwrap();
        assert!((residual_li_power(&m, 100.0) - 1e-8).abs() < 1e-20);
        assert!(LiModel::new(1e-9, 1.5).is_err());
    }

    #[test]
    fn hd_threshold_values() {
        assert_eq!(hd_threshold(0.0), 0.0);
        let g8 = db_to_linear(8.0);
        assert!((hd_threshold(g8) - 52.429_863_944_953_59).abs() < 1e-10);
        let g9 = db_to_linear(9.0);
        assert!((hd_threshold(g9) - 78.982_299_142_504_95).abs() < 1e-10);
        assert!(hd_threshold(g8) > g8);
    }

    #[test]
    fn bessel_domain_errors() {
        assert!(bessel_k1(0.0).is_err());
        assert!(bessel_k1(-1.0).is_err());
        assert!((bessel_k1(1.0).unwrap() - 0.601_907_230_197_234_6).abs() < 1e-12);
    }

    #[test]
    fn fade_cdf_values() {
        let d = rp_unit();
        assert_eq!(fade_cdf(&d, 0.0), 0.0);
        // F(0.5) = 1 - K1(1), frozen via the quadrature oracle.
        assert!((fade_cdf(&d, 0.5) - 0.398_092_769_802_765_4).abs() < 1e-12);
        assert!(fade_cdf(&d, 0.5) < fade_cdf(&d, 1.0));
        assert!(fade_cdf(&d, 1.0) < fade_cdf(&d, 2.0));
        assert!(fade_cdf(&d, 2.0) < 1.0);
        // Saturates to 1 once the scaled argument is huge.
        assert_eq!(fade_cdf(&d, 1e6), 1.0);
    }

    #[test]
    fn beta_values() {
        let d = rp_unit();
        let b = fd_budget();
        // rho chosen so that the threshold argument is exactly 0.5.
        let rho = b.sinr_threshold / 0.25;
        let beta = beta_coeff(&d, &b, rho).unwrap();
        assert!((beta - (-0.921_070_210_902_245_7)).abs() < 1e-12);
        // rho = gamma_th gives u = 1: F(1) = 1 - 2 K1(2).
        let beta1 = beta_coeff(&d, &b, b.sinr_threshold).unwrap();
        assert!((beta1 - (-0.328_131_585_842_086_16)).abs() < 1e-12);
        assert!(beta1 <= 0.0);
    }

    #[test]
    fn beta_floor_and_sentinel() {
        let d = rp_unit();
        let b = fd_budget();
        // Infinite gain: threshold argument is exactly zero -> sentinel.
        assert_eq!(beta_coeff(&d, &b, f64::INFINITY), Err(ChannelError::InfinitelyGoodSite));
        // Near-maximal finite gain drives beta past the floor; it clamps.
        let beta = beta_coeff(&d, &b, 1.6e308).unwrap();
        assert_eq!(beta, BETA_FLOOR);
    }

    #[test]
    fn outage_bound_single_values() {
        assert_eq!(outage_bound_single(0.5, 3), 0.125);
        assert_eq!(outage_bound_single(0.37, 0), 1.0);
        // Repeated multiplication as the oracle for the power law.
        let mut prod = 1.0f64;
        for _ in 0..40 {
            prod *= 0.9;
        }
        let got = outage_bound_single(0.9, 40);
        assert!((got - prod).abs() < 1e-15);
        assert!((got - (40.0 * 0.9f64.ln()).exp()).abs() < 1e-15);
        assert!((got - 0.014_780_882_941_434_59).abs() < 1e-15);
    }

    #[test]
    fn outage_bound_system_values() {
        assert_eq!(outage_bound_system(&[-1.0, -2.0], &[false, false], &[1, 2]), 1.0);
        let b = outage_bound_system(&[-1.0, -2.0], &[true, true], &[1, 2]);
        assert!((b - (-5.0f64).exp()).abs() < 1e-16);
        assert!((b - 6.737_946_999_085_467e-3).abs() < 1e-15);
        // Single-site consistency with the power-law bound.
        let single = outage_bound_system(&[-0.7], &[true], &[4]);
        let f = (-0.7f64).exp();
        assert!((single - outage_bound_single(f, 4)).abs() < 1e-15);
    }

    #[test]
    fn crossover_value() {
        let cross = fd_hd_crossover_li_mw(dbm_to_mw(-80.0), db_to_linear(9.0));
        let dbm = mw_to_dbm(cross);
        assert!((dbm - (-70.485_030_579_747_7)).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn fade_cdf_monotone_and_bounded(mut us in proptest::collection::vec(0.0f64..10.0, 2..40)) {
            let d = rp_unit();
            us.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mut prev = fade_cdf(&d, 0.0);
            prop_assert_eq!(prev, 0.0);
            for &u in &us {
                let f = fade_cdf(&d, u);
                prop_assert!((0.0..=1.0).contains(&f));
                prop_assert!(f >= prev);
                prev = f;
            }
        }

        #[test]
        fn outage_bound_single_nonincreasing(f in 1e-6f64..1.0, l in 1u32..500) {
            prop_assert!(outage_bound_single(f, l + 1) <= outage_bound_single(f, l));
        }

        #[test]
        fn system_bound_log_identity(
            betas in proptest::collection::vec(-8.0f64..0.0, 1..12),
            bits in proptest::collection::vec(any::<bool>(), 12),
            ls in proptest::collection::vec(1u32..40, 12),
        ) {
            let n = betas.len();
            let x = &bits[..n];
            let l = &ls[..n];
            let expected: f64 = (0..n).filter(|&i| x[i]).map(|i| betas[i] * f64::from(l[i])).sum();
            let logged = outage_bound_system(&betas, x, l).ln();
            let scale = expected.abs().max(1.0);
            prop_assert!((logged - expected).abs() <= 1e-12 * scale);
        }

        #[test]
        fn hd_threshold_round_trip(g in 1e-6f64..1e3) {
            let hd = hd_threshold(g);
            let lhs = (1.0 + g).ln();
            let rhs = 0.5 * (1.0 + hd).ln();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1e-6));
        }

        #[test]
        fn bessel_matches_oracle_random(x in 1e-4f64..30.0) {
            let got = bessel_k1(x).unwrap();
            let want = super::bessel::oracle::k1_quadrature(x);
            prop_assert!(((got - want) / want).abs() <= 1e-7);
        }
    }
}
