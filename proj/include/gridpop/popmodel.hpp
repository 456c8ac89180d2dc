// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef GRIDPOP_POPMODEL_HPP
#define GRIDPOP_POPMODEL_HPP

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "gridpop/rng.hpp"

namespace gridpop {

// Bottom-up population model. Each settlement i with area A_i (hectares)
// has a latent density D_i (people/hectare) and an observed head count N_i:
//
//   N_i ~ Poisson(D_i * A_i)
//   D_i ~ LogNormal(mu_i, sigma)          (natural-log parameterization)
//   mu_i = alpha0 + a_t[t] + a_r[r] + a_s[s] + a_l[l] + sum_k beta_k x_ki
//
// The grouped intercept is realized as an additive decomposition: a global
// term plus one effect per settlement type, region, state, and LGA level.
// sigma is pooled by default, with an optional per-settlement-type vector.

/// Factor level ids for one location.
struct GroupKey {
    int t = 0; // settlement type
    int r = 0; // region
    int s = 0; // state
    int l = 0; // local government area
};

/// Declared number of levels per factor.
struct FactorLevels {
    int types = 1;
    int regions = 1;
    int states = 1;
    int lgas = 1;
};

struct LocationRecord {
    std::string loc_id;
    GroupKey key;
    std::vector<double> x;               // standardized covariates, length K
    double area = 1.0;                   // hectares, > 0
    std::optional<long long> observed;   // N; absent for prediction targets
    double density = 0.0;                // latent D; <= 0 means unset
};

struct MicrocensusDataset {
    FactorLevels levels;
    int covariate_dim = 0;
    std::vector<LocationRecord> records;
};

/// Scales of the (artifact-chosen) priors: effects ~ Normal(0, sd),
/// beta ~ Normal(0, beta_sd), sigma ~ HalfNormal(sigma_scale).
struct PriorScales {
    double intercept_sd = 10.0;
    double effect_sd = 1.0;
    double beta_sd = 10.0;
    double sigma_scale = 1.0;
};

struct ModelParams {
    double alpha0 = 0.0;
    std::vector<double> alpha_t{ 0.0 };
    std::vector<double> alpha_r{ 0.0 };
    std::vector<double> alpha_s{ 0.0 };
    std::vector<double> alpha_l{ 0.0 };
    std::vector<double> beta;
    double sigma = 1.0;
    std::vector<double> sigma_t; // optional per-type scales; empty = pooled
    PriorScales priors;

    double sigma_for(int type_id) const
    {
        return sigma_t.empty() ? sigma
                               : sigma_t[static_cast<std::size_t>(type_id)];
    }
};

/// Linear predictor on the log-density scale.
double mu_linear(const ModelParams& params, const LocationRecord& rec);

struct SimDraw {
    double density;
    long long count;
};

/// One generative draw: D ~ LogNormal(mu, sigma), N ~ Poisson(D * A).
SimDraw simulate_location(const ModelParams& params,
                          const GroupKey& key,
                          const std::vector<double>& x,
                          double area,
                          Rng& rng);

/// Joint log density of observations, latent densities, and parameters.
/// Returns -infinity for zero-probability configurations (sigma <= 0,
/// density <= 0) instead of throwing; throws DimensionMismatch when shapes
/// disagree. Every record must carry an observed count and a density.
double log_joint(const ModelParams& params, const MicrocensusDataset& data);

struct MapConfig {
    int max_sweeps = 200;
    double tol = 1e-8;
    PriorScales priors;
};

struct MapFit {
    ModelParams params;
    std::vector<double> densities;      // latent D estimates, record order
    std::vector<double> objective_trace; // log_joint after each sweep
};

/// Maximum a posteriori fit by cyclic coordinate ascent with adaptive step
/// sizes; every accepted move strictly improves log_joint, so the trace is
/// non-decreasing. Finishes with a polish pass at probe steps 0.1 and 0.05
/// in every coordinate.
MapFit fit_map(const MicrocensusDataset& data, const MapConfig& config = {});

struct MhConfig {
    int draws = 2000;
    int burn_in = 1000;
    double initial_step = 0.1;
    double target_accept = 0.44;
    std::uint64_t seed = 0;
    bool per_type_sigma = false;
    PriorScales priors;
};

struct Chain {
    std::vector<ModelParams> draws;
    std::vector<double> log_posterior; // exact log_joint at each draw
    std::uint64_t seed = 0;
    double acceptance_rate = 0.0;
    FactorLevels levels;
    int covariate_dim = 0;
};

/// Random-walk Metropolis over (effects, beta, log sigma, log D_i), one
/// scalar proposal at a time. Step sizes adapt toward the target acceptance
/// rate during burn-in only and are frozen afterwards. Deterministic given
/// the seed. Factors with a single level are held at zero so the global
/// intercept stays identified.
Chain fit_mh(const MicrocensusDataset& data, const MhConfig& config = {});

struct Prediction {
    double mean; // average of exp(mu + sigma^2/2) * A over draws
    double lo;   // empirical quantiles of a sampled N per draw
    double hi;
};

/// Posterior-predictive summary for one location at credible level q.
Prediction predict(const Chain& chain,
                   const GroupKey& key,
                   const std::vector<double>& x,
                   double area,
                   double level,
                   Rng& rng);

// Microcensus CSV: header loc_id,t,r,s,l,A,N,x1..xK; an empty N marks a
// prediction target. Chain CSV: one row per retained draw, one column per
// scalar parameter.
MicrocensusDataset read_microcensus_csv(std::istream& in);
MicrocensusDataset read_microcensus_csv(const std::string& text);
std::string write_microcensus_csv(const MicrocensusDataset& data);
std::string write_chain_csv(const Chain& chain);
Chain read_chain_csv(std::istream& in);
Chain read_chain_csv(const std::string& text);

struct SimulateConfig {
    int locations = 100;
    FactorLevels levels;
    int covariate_dim = 1;
    ModelParams params;     // true parameters used to generate the data
    double area_min = 0.5;
    double area_max = 4.0;
    std::uint64_t seed = 0;
};

/// Synthetic microcensus: x ~ Normal(0,1), A ~ Uniform(area_min, area_max),
/// uniform factor ids, then (D, N) from the generative model.
MicrocensusDataset simulate_dataset(const SimulateConfig& config);

} // namespace gridpop

#endif // GRIDPOP_POPMODEL_HPP
