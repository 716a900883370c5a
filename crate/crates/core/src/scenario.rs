//! Multi-service band planning.
//!
//! Services are laid out side by side in ascending numerology order. Each
//! boundary gets the guard band required for the rejection target, measured
//! from the victim's edge subcarrier to the nearest interferer subcarrier,
//! and the plan reports the resulting total bandwidth and the fraction of it
//! carrying service data.
//!
//! With [`GuardScaling::Normalized`] (the default) each requirement is solved
//! for the lowest pair with the same ratio `Q` (shifted down so that one side
//! is numerology 0), read off in victim subcarriers, and then scaled to the
//! actual victim subcarrier width. [`GuardScaling::Direct`] solves the actual
//! pair, including the finite-sampling effects that grow with numerology.

use alloc::vec::Vec;

use crate::analytic::InterferencePair;
use crate::error::{Error, Result};
use crate::guardband::{min_guard_band, SearchOptions};
use crate::numerology::{check_mu, FrequencyOffset, NumerologyParams, SUBCARRIERS_PER_RB};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ServiceSpec {
    pub mu: u32,
    pub n_rb: u64,
}

impl ServiceSpec {
    pub fn new(mu: u32, n_rb: u64) -> Result<Self> {
        check_mu(mu)?;
        if n_rb == 0 {
            return Err(Error::EmptyService);
        }
        Ok(Self { mu, n_rb })
    }

    pub fn n_subcarriers(&self) -> u64 {
        self.n_rb * SUBCARRIERS_PER_RB
    }

    pub fn bandwidth_khz(&self) -> f64 {
        self.n_rb as f64 * NumerologyParams::new(self.mu).map_or(0.0, |p| p.rb_khz)
    }
}

/// Which directions of a boundary are protected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GuardConvention {
    /// Each side is protected from the other; the boundary takes the larger
    /// of the two requirements.
    #[default]
    Bidirectional,
    /// Only the lower-numerology service is treated as a victim.
    LowerVictim,
}

impl GuardConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            GuardConvention::Bidirectional => "bidirectional",
            GuardConvention::LowerVictim => "lower-victim",
        }
    }
}

impl core::str::FromStr for GuardConvention {
    type Err = &'static str;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        match s {
            "bidirectional" => Ok(GuardConvention::Bidirectional),
            "lower-victim" => Ok(GuardConvention::LowerVictim),
            _ => Err("convention must be `bidirectional` or `lower-victim`"),
        }
    }
}

/// How a boundary requirement is obtained from the guard-band solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GuardScaling {
    /// Solve the `Q`-equivalent pair shifted down to numerology 0 and scale
    /// the result in victim subcarriers.
    #[default]
    Normalized,
    /// Solve the actual pair.
    Direct,
}

impl GuardScaling {
    pub fn as_str(self) -> &'static str {
        match self {
            GuardScaling::Normalized => "normalized",
            GuardScaling::Direct => "direct",
        }
    }
}

impl core::str::FromStr for GuardScaling {
    type Err = &'static str;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        match s {
            "normalized" => Ok(GuardScaling::Normalized),
            "direct" => Ok(GuardScaling::Direct),
            _ => Err("scaling must be `normalized` or `direct`"),
        }
    }
}

/// Planner settings.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlanOptions {
    pub convention: GuardConvention,
    pub scaling: GuardScaling,
    pub search: SearchOptions,
}

/// Guard band at one boundary between adjacent services.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Boundary {
    /// Lower service index in [`ScenarioPlan::services`].
    pub lower: usize,
    /// Requirement with the lower service interfering on the upper one.
    pub lower_on_upper: Option<FrequencyOffset>,
    /// Requirement with the upper service interfering on the lower one.
    pub upper_on_lower: Option<FrequencyOffset>,
    pub guard: FrequencyOffset,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioPlan {
    pub services: Vec<ServiceSpec>,
    pub target_rejection_db: f64,
    pub convention: GuardConvention,
    pub scaling: GuardScaling,
    pub boundaries: Vec<Boundary>,
    pub guard_bands_khz: Vec<f64>,
    pub service_bandwidth_khz: f64,
    pub total_bandwidth_khz: f64,
    pub efficiency: f64,
}

impl ScenarioPlan {
    pub fn guard_total_khz(&self) -> f64 {
        self.guard_bands_khz.iter().sum()
    }
}

pub fn plan_scenario(services: &[ServiceSpec], target_rejection_db: f64) -> Result<ScenarioPlan> {
    plan_scenario_with(services, target_rejection_db, &PlanOptions::default())
}

pub fn plan_scenario_with(
    services: &[ServiceSpec],
    target_rejection_db: f64,
    options: &PlanOptions,
) -> Result<ScenarioPlan> {
    let convention = options.convention;
    if services.is_empty() {
        return Err(Error::EmptyScenario);
    }
    let mut services: Vec<ServiceSpec> = services
        .iter()
        .map(|s| ServiceSpec::new(s.mu, s.n_rb))
        .collect::<Result<_>>()?;
    services.sort_by_key(|s| s.mu);

    let requirement = |boundary: usize, interferer: &ServiceSpec, victim: &ServiceSpec| {
        let shift = match options.scaling {
            GuardScaling::Normalized => interferer.mu.min(victim.mu),
            GuardScaling::Direct => 0,
        };
        let pair = InterferencePair::new(interferer.mu - shift, victim.mu - shift)?;
        // each direction searches on its own victim's subcarrier grid
        min_guard_band(&pair, interferer.n_subcarriers(), target_rejection_db, &options.search)
            .and_then(|r| FrequencyOffset::from_bins(r.min_gb.bins() * (1u64 << shift) as f64))
            .map_err(|e| match e {
                Error::HorizonExceeded {
                    target_db,
                    horizon_bins,
                    best_rejection_db,
                } => Error::BoundaryHorizonExceeded {
                    boundary,
                    mu_i: interferer.mu,
                    mu_u: victim.mu,
                    target_db,
                    horizon_bins: horizon_bins * (1u64 << shift) as f64,
                    best_rejection_db,
                },
                other => other,
            })
    };

    let mut boundaries = Vec::with_capacity(services.len().saturating_sub(1));
    for (i, w) in services.windows(2).enumerate() {
        let (lo, hi) = (&w[0], &w[1]);
        let lower_on_upper = match convention {
            GuardConvention::Bidirectional => Some(requirement(i, lo, hi)?),
            GuardConvention::LowerVictim => None,
        };
        let upper_on_lower = Some(requirement(i, hi, lo)?);
        let guard = [lower_on_upper, upper_on_lower]
            .into_iter()
            .flatten()
            .fold(FrequencyOffset::ZERO, |a, b| if b.bins() > a.bins() { b } else { a });
        boundaries.push(Boundary {
            lower: i,
            lower_on_upper,
            upper_on_lower,
            guard,
        });
    }

    let guard_bands_khz: Vec<f64> = boundaries.iter().map(|b| b.guard.khz()).collect();
    let service_bandwidth_khz: f64 = services.iter().map(ServiceSpec::bandwidth_khz).sum();
    let total_bandwidth_khz = service_bandwidth_khz + guard_bands_khz.iter().sum::<f64>();
    Ok(ScenarioPlan {
        services,
        target_rejection_db,
        convention,
        scaling: options.scaling,
        boundaries,
        guard_bands_khz,
        service_bandwidth_khz,
        total_bandwidth_khz,
        efficiency: service_bandwidth_khz / total_bandwidth_khz,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_numerology_boundary_is_one_subcarrier() {
        let s = [ServiceSpec::new(1, 50).unwrap(), ServiceSpec::new(1, 50).unwrap()];
        let plan = plan_scenario(&s, 40.0).unwrap();
        assert_eq!(plan.guard_bands_khz, [30.0]);
        assert!(plan.efficiency > 0.99);
        assert_eq!(plan.total_bandwidth_khz, 2.0 * 50.0 * 360.0 + 30.0);
    }

    #[test]
    fn single_service_is_fully_efficient() {
        let plan = plan_scenario(&[ServiceSpec::new(2, 5).unwrap()], 30.0).unwrap();
        assert!(plan.boundaries.is_empty());
        assert_eq!(plan.efficiency, 1.0);
        assert_eq!(plan.total_bandwidth_khz, 3600.0);
    }

    #[test]
    fn services_are_sorted_by_numerology() {
        let s = [
            ServiceSpec { mu: 2, n_rb: 5 },
            ServiceSpec { mu: 0, n_rb: 5 },
            ServiceSpec { mu: 1, n_rb: 5 },
        ];
        let plan = plan_scenario(&s, 25.0).unwrap();
        let mus: Vec<u32> = plan.services.iter().map(|s| s.mu).collect();
        assert_eq!(mus, [0, 1, 2]);
        assert_eq!(plan.boundaries.len(), 2);
    }

    #[test]
    fn totals_add_up() {
        let s = [
            ServiceSpec::new(0, 10).unwrap(),
            ServiceSpec::new(1, 10).unwrap(),
            ServiceSpec::new(2, 10).unwrap(),
        ];
        let plan = plan_scenario(&s, 30.0).unwrap();
        let services: f64 = plan.services.iter().map(|s| s.bandwidth_khz()).sum();
        assert_eq!(plan.total_bandwidth_khz, services + plan.guard_total_khz());
        assert!(plan.efficiency > 0.0 && plan.efficiency <= 1.0);
        for b in &plan.boundaries {
            let a = b.lower_on_upper.unwrap().bins();
            let c = b.upper_on_lower.unwrap().bins();
            assert_eq!(b.guard.bins(), a.max(c));
        }
    }

    #[test]
    fn lower_victim_never_needs_more() {
        let s = [ServiceSpec::new(0, 5).unwrap(), ServiceSpec::new(1, 5).unwrap()];
        let both = plan_scenario(&s, 30.0).unwrap();
        let opts = PlanOptions {
            convention: GuardConvention::LowerVictim,
            ..PlanOptions::default()
        };
        let one = plan_scenario_with(&s, 30.0, &opts).unwrap();
        assert!(one.total_bandwidth_khz <= both.total_bandwidth_khz);
        assert!(one.boundaries[0].lower_on_upper.is_none());
    }

    #[test]
    fn horizon_errors_name_the_boundary() {
        let s = [ServiceSpec::new(0, 5).unwrap(), ServiceSpec::new(2, 5).unwrap()];
        let opts = PlanOptions {
            search: SearchOptions::with_horizon_bins(16.0).unwrap(),
            ..PlanOptions::default()
        };
        let err = plan_scenario_with(&s, 60.0, &opts).unwrap_err();
        assert!(
            matches!(err, Error::BoundaryHorizonExceeded { boundary: 0, .. }),
            "{err:?}"
        );
    }

    #[test]
    fn scalings_agree_when_a_side_is_numerology_zero() {
        let s = [ServiceSpec::new(0, 5).unwrap(), ServiceSpec::new(1, 5).unwrap()];
        let direct = PlanOptions {
            scaling: GuardScaling::Direct,
            ..PlanOptions::default()
        };
        assert_eq!(
            plan_scenario(&s, 30.0).unwrap().guard_bands_khz,
            plan_scenario_with(&s, 30.0, &direct).unwrap().guard_bands_khz
        );
    }

    #[test]
    fn normalized_scaling_uses_the_shifted_pair() {
        let s = [ServiceSpec::new(1, 5).unwrap(), ServiceSpec::new(2, 5).unwrap()];
        let plan = plan_scenario(&s, 30.0).unwrap();
        let base = min_guard_band(
            &InterferencePair::new(1, 0).unwrap(),
            60,
            30.0,
            &SearchOptions::default(),
        )
        .unwrap();
        // (2 -> 1) is read from (1 -> 0) in victim subcarriers, then doubled
        assert_eq!(
            plan.boundaries[0].upper_on_lower.unwrap().bins(),
            2.0 * base.min_gb.bins()
        );
    }

    #[test]
    fn rejects_bad_services() {
        assert_eq!(plan_scenario(&[], 25.0).unwrap_err(), Error::EmptyScenario);
        assert_eq!(ServiceSpec::new(0, 0).unwrap_err(), Error::EmptyService);
        assert!(plan_scenario(&[ServiceSpec { mu: 7, n_rb: 1 }], 25.0).is_err());
        assert_eq!(ServiceSpec::new(1, 5).unwrap().bandwidth_khz(), 1800.0);
    }
}
