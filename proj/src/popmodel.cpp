// Apache License, Version 2.0, refer to LICENSE.txt

#include "gridpop/popmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gridpop/csv.hpp"
#include "gridpop/errors.hpp"
#include "gridpop/numeric.hpp"

namespace gridpop {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kHalfLog2Pi = 0.91893853320467274178;

double log_normal_pdf(double v, double mean, double sd)
{
    const double r = (v - mean) / sd;
    return -std::log(sd) - kHalfLog2Pi - 0.5 * r * r;
}

// Density of |X| for X ~ Normal(0, scale); support s > 0. Twice the normal
// density, folded onto the positive axis.
double log_halfnormal_pdf(double s, double scale)
{
    if (!(s > 0.0)) {
        return kNegInf;
    }
    const double r = s / scale;
    return std::log(2.0) - std::log(scale) - kHalfLog2Pi - 0.5 * r * r;
}

void check_levels(const FactorLevels& lv)
{
    if (lv.types < 1 || lv.regions < 1 || lv.states < 1 || lv.lgas < 1) {
        throw DimensionMismatch("factor level counts must be positive");
    }
}

void check_params_shape(const ModelParams& p,
                        const FactorLevels& lv,
                        int covariate_dim)
{
    check_levels(lv);
    if (static_cast<int>(p.alpha_t.size()) != lv.types ||
        static_cast<int>(p.alpha_r.size()) != lv.regions ||
        static_cast<int>(p.alpha_s.size()) != lv.states ||
        static_cast<int>(p.alpha_l.size()) != lv.lgas) {
        throw DimensionMismatch("effect vectors do not match factor levels");
    }
    if (static_cast<int>(p.beta.size()) != covariate_dim) {
        throw DimensionMismatch("beta length does not match covariate dim");
    }
    if (!p.sigma_t.empty() &&
        static_cast<int>(p.sigma_t.size()) != lv.types) {
        throw DimensionMismatch("sigma_t length does not match type count");
    }
}

void check_dataset(const MicrocensusDataset& data, bool need_observed)
{
    check_levels(data.levels);
    for (std::size_t i = 0; i < data.records.size(); ++i) {
        const LocationRecord& rec = data.records[i];
        if (static_cast<int>(rec.x.size()) != data.covariate_dim) {
            throw DimensionMismatch("record " + std::to_string(i) +
                                    ": covariate length mismatch");
        }
        if (!(rec.area > 0.0) || !std::isfinite(rec.area)) {
            throw std::invalid_argument("record " + std::to_string(i) +
                                        ": area must be positive");
        }
        if (rec.key.t < 0 || rec.key.t >= data.levels.types ||
            rec.key.r < 0 || rec.key.r >= data.levels.regions ||
            rec.key.s < 0 || rec.key.s >= data.levels.states ||
            rec.key.l < 0 || rec.key.l >= data.levels.lgas) {
            throw DimensionMismatch("record " + std::to_string(i) +
                                    ": factor id outside declared levels");
        }
        if (need_observed) {
            if (!rec.observed) {
                throw std::invalid_argument(
                  "record " + std::to_string(i) +
                  ": observed count required for fitting");
            }
            if (*rec.observed < 0) {
                throw std::invalid_argument("record " + std::to_string(i) +
                                            ": observed count negative");
            }
        }
    }
}

/// Exact joint evaluation with the per-record lgamma(N+1) terms cached.
class LogJointEvaluator {
  public:
    explicit LogJointEvaluator(const MicrocensusDataset& data)
      : data_(data)
    {
        lgamma_np1_.reserve(data.records.size());
        for (const LocationRecord& rec : data.records) {
            lgamma_np1_.push_back(
              rec.observed
                ? std::lgamma(static_cast<double>(*rec.observed) + 1.0)
                : 0.0);
        }
    }

    double eval(const ModelParams& p, const std::vector<double>& densities) const
    {
        check_params_shape(p, data_.levels, data_.covariate_dim);
        if (p.sigma_t.empty()) {
            if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) {
                return kNegInf;
            }
        } else {
            for (double s : p.sigma_t) {
                if (!(s > 0.0) || !std::isfinite(s)) {
                    return kNegInf;
                }
            }
        }

        double acc = 0.0;
        for (std::size_t i = 0; i < data_.records.size(); ++i) {
            const LocationRecord& rec = data_.records[i];
            const double d = densities[i];
            if (!(d > 0.0) || !std::isfinite(d)) {
                return kNegInf;
            }
            const double mu = mu_linear(p, rec);
            const double sigma = p.sigma_for(rec.key.t);
            const double lambda = d * rec.area;
            const auto n = static_cast<double>(*rec.observed);
            acc += n * std::log(lambda) - lambda - lgamma_np1_[i];
            const double log_d = std::log(d);
            const double r = (log_d - mu) / sigma;
            acc += -log_d - std::log(sigma) - kHalfLog2Pi - 0.5 * r * r;
        }

        acc += log_normal_pdf(p.alpha0, 0.0, p.priors.intercept_sd);
        for (double v : p.alpha_t) {
            acc += log_normal_pdf(v, 0.0, p.priors.effect_sd);
        }
        for (double v : p.alpha_r) {
            acc += log_normal_pdf(v, 0.0, p.priors.effect_sd);
        }
        for (double v : p.alpha_s) {
            acc += log_normal_pdf(v, 0.0, p.priors.effect_sd);
        }
        for (double v : p.alpha_l) {
            acc += log_normal_pdf(v, 0.0, p.priors.effect_sd);
        }
        for (double v : p.beta) {
            acc += log_normal_pdf(v, 0.0, p.priors.beta_sd);
        }
        if (p.sigma_t.empty()) {
            acc += log_halfnormal_pdf(p.sigma, p.priors.sigma_scale);
        } else {
            for (double s : p.sigma_t) {
                acc += log_halfnormal_pdf(s, p.priors.sigma_scale);
            }
        }
        if (std::isnan(acc)) {
            return kNegInf;
        }
        return acc;
    }

  private:
    const MicrocensusDataset& data_;
    std::vector<double> lgamma_np1_;
};

ModelParams initial_params(const MicrocensusDataset& data,
                           const PriorScales& priors,
                           bool per_type_sigma,
                           std::vector<double>& z_out)
{
    ModelParams p;
    p.priors = priors;
    p.alpha_t.assign(static_cast<std::size_t>(data.levels.types), 0.0);
    p.alpha_r.assign(static_cast<std::size_t>(data.levels.regions), 0.0);
    p.alpha_s.assign(static_cast<std::size_t>(data.levels.states), 0.0);
    p.alpha_l.assign(static_cast<std::size_t>(data.levels.lgas), 0.0);
    p.beta.assign(static_cast<std::size_t>(data.covariate_dim), 0.0);

    z_out.clear();
    z_out.reserve(data.records.size());
    double mean_z = 0.0;
    for (const LocationRecord& rec : data.records) {
        const double n = std::max(static_cast<double>(*rec.observed), 0.5);
        const double z = std::log(n / rec.area);
        z_out.push_back(z);
        mean_z += z;
    }
    mean_z /= static_cast<double>(z_out.size());
    double var_z = 0.0;
    for (double z : z_out) {
        var_z += (z - mean_z) * (z - mean_z);
    }
    var_z /= static_cast<double>(z_out.size());
    p.alpha0 = mean_z;
    p.sigma = std::clamp(std::sqrt(var_z), 0.1, 2.0);
    if (per_type_sigma) {
        p.sigma_t.assign(static_cast<std::size_t>(data.levels.types),
                         p.sigma);
    }
    return p;
}

double quantile_sorted(const std::vector<double>& sorted, double p)
{
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) {
        return sorted.back();
    }
    const double frac = h - std::floor(h);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

} // namespace

double mu_linear(const ModelParams& params, const LocationRecord& rec)
{
    if (rec.x.size() != params.beta.size()) {
        throw DimensionMismatch("covariate vector does not match beta");
    }
    const auto at = [](const std::vector<double>& v, int idx,
                       const char* name) -> double {
        if (idx < 0 || static_cast<std::size_t>(idx) >= v.size()) {
            throw DimensionMismatch(std::string("factor id out of range: ") +
                                    name);
        }
        return v[static_cast<std::size_t>(idx)];
    };
    double mu = params.alpha0 + at(params.alpha_t, rec.key.t, "t") +
                at(params.alpha_r, rec.key.r, "r") +
                at(params.alpha_s, rec.key.s, "s") +
                at(params.alpha_l, rec.key.l, "l");
    for (std::size_t k = 0; k < params.beta.size(); ++k) {
        mu += params.beta[k] * rec.x[k];
    }
    return mu;
}

SimDraw simulate_location(const ModelParams& params,
                          const GroupKey& key,
                          const std::vector<double>& x,
                          double area,
                          Rng& rng)
{
    LocationRecord rec;
    rec.key = key;
    rec.x = x;
    const double mu = mu_linear(params, rec);
    const double sigma = params.sigma_for(key.t);
    const double density = std::exp(rng.normal(mu, sigma));
    const long long count = rng.poisson(density * area);
    return { density, count };
}

double log_joint(const ModelParams& params, const MicrocensusDataset& data)
{
    check_dataset(data, /*need_observed=*/true);
    std::vector<double> densities;
    densities.reserve(data.records.size());
    for (const LocationRecord& rec : data.records) {
        densities.push_back(rec.density);
    }
    return LogJointEvaluator(data).eval(params, densities);
}

MapFit fit_map(const MicrocensusDataset& data, const MapConfig& config)
{
    if (data.records.empty()) {
        throw EmptyDataset("MAP fit needs a non-empty dataset");
    }
    check_dataset(data, /*need_observed=*/true);

    std::vector<double> z;
    ModelParams p = initial_params(data, config.priors, false, z);
    std::vector<double> d(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        d[i] = std::exp(z[i]);
    }

    const LogJointEvaluator evaluator(data);
    double obj = evaluator.eval(p, d);
    if (!std::isfinite(obj)) {
        throw NonFinite("MAP objective is not finite at the starting point");
    }

    // Free coordinates: a pointer per scalar plus the latent log-densities.
    // Factors with a single level stay pinned at zero.
    struct Coord {
        double* value;
        std::size_t latent_idx;
        bool is_latent;
        bool log_scale; // ascend multiplicatively (sigma)
        double step;
    };
    std::vector<Coord> coords;
    const double init_step = 0.25;
    coords.push_back({ &p.alpha0, 0, false, false, init_step });
    const auto add_effects = [&](std::vector<double>& v) {
        if (v.size() > 1) {
            for (double& e : v) {
                coords.push_back({ &e, 0, false, false, init_step });
            }
        }
    };
    add_effects(p.alpha_t);
    add_effects(p.alpha_r);
    add_effects(p.alpha_s);
    add_effects(p.alpha_l);
    for (double& b : p.beta) {
        coords.push_back({ &b, 0, false, false, init_step });
    }
    coords.push_back({ &p.sigma, 0, false, true, init_step });
    for (std::size_t i = 0; i < z.size(); ++i) {
        coords.push_back({ &z[i], i, true, false, init_step });
    }

    const auto probe = [&](Coord& c, double delta) -> bool {
        const double saved = *c.value;
        const double saved_d = c.is_latent ? d[c.latent_idx] : 0.0;
        if (c.log_scale) {
            *c.value = saved * std::exp(delta);
        } else {
            *c.value = saved + delta;
        }
        if (c.is_latent) {
            d[c.latent_idx] = std::exp(*c.value);
        }
        const double cand = evaluator.eval(p, d);
        if (cand > obj) {
            obj = cand;
            return true;
        }
        *c.value = saved;
        if (c.is_latent) {
            d[c.latent_idx] = saved_d;
        }
        return false;
    };

    MapFit fit;
    fit.objective_trace.push_back(obj);
    double prev = obj;
    for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
        for (Coord& c : coords) {
            if (probe(c, c.step) || probe(c, -c.step)) {
                c.step = std::min(c.step * 2.0, 1.0);
            } else {
                c.step *= 0.5;
            }
        }
        fit.objective_trace.push_back(obj);
        const double rel = (obj - prev) / std::max(1.0, std::abs(prev));
        prev = obj;
        if (rel < config.tol) {
            break;
        }
    }

    // Polish until no +-0.1 or +-0.05 probe improves any coordinate. Sigma
    // is probed additively here so the optimum is stable to natural-scale
    // shifts in every reported coordinate; latent probes stay on the log
    // scale.
    bool moved = true;
    for (int pass = 0; moved && pass < 50; ++pass) {
        moved = false;
        for (const double probe_step : { 0.1, 0.05 }) {
            for (Coord& c : coords) {
                Coord natural = c;
                natural.log_scale = false;
                if (probe(natural, probe_step) ||
                    probe(natural, -probe_step)) {
                    moved = true;
                }
            }
        }
        fit.objective_trace.push_back(obj);
    }

    if (!std::isfinite(obj)) {
        throw NonFinite("MAP optimization diverged");
    }
    fit.params = p;
    fit.densities = d;
    return fit;
}

Chain fit_mh(const MicrocensusDataset& data, const MhConfig& config)
{
    if (data.records.empty()) {
        throw EmptyDataset("MH fit needs a non-empty dataset");
    }
    check_dataset(data, /*need_observed=*/true);
    if (config.draws < 1 || config.burn_in < 0) {
        throw std::invalid_argument("draws must be >= 1 and burn_in >= 0");
    }
    if (config.initial_step < 0.0) {
        throw std::invalid_argument("initial_step must be >= 0");
    }

    const std::size_t n = data.records.size();
    std::vector<double> z;
    ModelParams p =
      initial_params(data, config.priors, config.per_type_sigma, z);
    std::vector<double> d(n);
    std::vector<double> mu(n);
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = std::exp(z[i]);
        mu[i] = mu_linear(p, data.records[i]);
    }

    // Record index lists per factor level, for O(affected) likelihood deltas.
    const auto group_indices = [&](auto key_of, int levels) {
        std::vector<std::vector<std::size_t>> groups(
          static_cast<std::size_t>(levels));
        for (std::size_t i = 0; i < n; ++i) {
            groups[static_cast<std::size_t>(key_of(data.records[i]))].push_back(
              i);
        }
        return groups;
    };
    const auto by_t = group_indices(
      [](const LocationRecord& r) { return r.key.t; }, data.levels.types);
    const auto by_r = group_indices(
      [](const LocationRecord& r) { return r.key.r; }, data.levels.regions);
    const auto by_s = group_indices(
      [](const LocationRecord& r) { return r.key.s; }, data.levels.states);
    const auto by_l = group_indices(
      [](const LocationRecord& r) { return r.key.l; }, data.levels.lgas);
    std::vector<std::size_t> all_indices(n);
    for (std::size_t i = 0; i < n; ++i) {
        all_indices[i] = i;
    }

    Rng rng(config.seed);
    const LogJointEvaluator evaluator(data);

    const double target = config.target_accept;
    long long proposed_kept = 0;
    long long accepted_kept = 0;
    int iteration = 0;

    const auto adapt = [&](double& step, bool accepted) {
        if (iteration >= config.burn_in) {
            return;
        }
        const double gamma =
          std::pow(static_cast<double>(iteration + 1), -0.6);
        step *= std::exp(gamma * ((accepted ? 1.0 : 0.0) - target));
    };

    const auto track = [&](bool accepted) {
        if (iteration >= config.burn_in) {
            ++proposed_kept;
            if (accepted) {
                ++accepted_kept;
            }
        }
    };

    // Gaussian-part delta for shifting mu by delta * multiplier(i) over a
    // subset of records; the Poisson term does not involve mu.
    const auto shift_delta = [&](const std::vector<std::size_t>& subset,
                                 double delta, const auto& multiplier) {
        double acc = 0.0;
        for (std::size_t i : subset) {
            const double m = multiplier(i);
            const double dm = delta * m;
            const double sigma = p.sigma_for(data.records[i].key.t);
            acc += (2.0 * (z[i] - mu[i]) * dm - dm * dm) /
                   (2.0 * sigma * sigma);
        }
        return acc;
    };
    const auto apply_shift = [&](const std::vector<std::size_t>& subset,
                                 double delta, const auto& multiplier) {
        for (std::size_t i : subset) {
            mu[i] += delta * multiplier(i);
        }
    };

    // One scalar random-walk update for a location-shift coordinate.
    const auto update_shift = [&](double& value, double& step,
                                  const std::vector<std::size_t>& subset,
                                  double prior_sd, const auto& multiplier) {
        const double delta = step * rng.normal();
        const double u = rng.uniform();
        const double cand = value + delta;
        double log_ratio = shift_delta(subset, delta, multiplier);
        log_ratio +=
          (value * value - cand * cand) / (2.0 * prior_sd * prior_sd);
        const bool accepted = std::log(u) < log_ratio;
        if (accepted) {
            value = cand;
            apply_shift(subset, delta, multiplier);
        }
        adapt(step, accepted);
        track(accepted);
    };

    const auto unit = [](std::size_t) { return 1.0; };

    // Proposal step sizes, one per free coordinate.
    double step_alpha0 = config.initial_step;
    std::vector<double> step_t(by_t.size(), config.initial_step);
    std::vector<double> step_r(by_r.size(), config.initial_step);
    std::vector<double> step_s(by_s.size(), config.initial_step);
    std::vector<double> step_l(by_l.size(), config.initial_step);
    std::vector<double> step_beta(p.beta.size(), config.initial_step);
    double step_sigma = config.initial_step;
    std::vector<double> step_sigma_t(p.sigma_t.size(), config.initial_step);
    std::vector<double> step_z(n, config.initial_step);

    // Log-sigma update over a record subset (pooled: all records).
    const auto update_sigma = [&](double& sigma_value, double& step,
                                  const std::vector<std::size_t>& subset) {
        const double delta = step * rng.normal();
        const double u = rng.uniform();
        const double log_cand = std::log(sigma_value) + delta;
        const double cand = std::exp(log_cand);
        double log_ratio = 0.0;
        if (!(cand > 0.0) || !std::isfinite(cand)) {
            log_ratio = kNegInf;
        } else {
            double ssr = 0.0;
            for (std::size_t i : subset) {
                ssr += (z[i] - mu[i]) * (z[i] - mu[i]);
            }
            const double m = static_cast<double>(subset.size());
            log_ratio =
              m * (std::log(sigma_value) - log_cand) +
              0.5 * ssr * (1.0 / (sigma_value * sigma_value) -
                           1.0 / (cand * cand)) -
              (cand * cand - sigma_value * sigma_value) /
                (2.0 * config.priors.sigma_scale * config.priors.sigma_scale) +
              delta; // Jacobian of the log transform
        }
        const bool accepted = std::log(u) < log_ratio;
        if (accepted) {
            sigma_value = cand;
        }
        adapt(step, accepted);
        track(accepted);
    };

    Chain chain;
    chain.seed = config.seed;
    chain.levels = data.levels;
    chain.covariate_dim = data.covariate_dim;
    chain.draws.reserve(static_cast<std::size_t>(config.draws));
    chain.log_posterior.reserve(static_cast<std::size_t>(config.draws));

    const int total_iters = config.burn_in + config.draws;
    for (iteration = 0; iteration < total_iters; ++iteration) {
        update_shift(p.alpha0, step_alpha0, all_indices,
                     config.priors.intercept_sd, unit);
        if (data.levels.types > 1) {
            for (std::size_t j = 0; j < by_t.size(); ++j) {
                update_shift(p.alpha_t[j], step_t[j], by_t[j],
                             config.priors.effect_sd, unit);
            }
        }
        if (data.levels.regions > 1) {
            for (std::size_t j = 0; j < by_r.size(); ++j) {
                update_shift(p.alpha_r[j], step_r[j], by_r[j],
                             config.priors.effect_sd, unit);
            }
        }
        if (data.levels.states > 1) {
            for (std::size_t j = 0; j < by_s.size(); ++j) {
                update_shift(p.alpha_s[j], step_s[j], by_s[j],
                             config.priors.effect_sd, unit);
            }
        }
        if (data.levels.lgas > 1) {
            for (std::size_t j = 0; j < by_l.size(); ++j) {
                update_shift(p.alpha_l[j], step_l[j], by_l[j],
                             config.priors.effect_sd, unit);
            }
        }
        for (std::size_t k = 0; k < p.beta.size(); ++k) {
            update_shift(p.beta[k], step_beta[k], all_indices,
                         config.priors.beta_sd,
                         [&](std::size_t i) { return data.records[i].x[k]; });
        }
        if (p.sigma_t.empty()) {
            update_sigma(p.sigma, step_sigma, all_indices);
        } else {
            for (std::size_t j = 0; j < p.sigma_t.size(); ++j) {
                update_sigma(p.sigma_t[j], step_sigma_t[j], by_t[j]);
            }
        }

        for (std::size_t i = 0; i < n; ++i) {
            const double delta = step_z[i] * rng.normal();
            const double u = rng.uniform();
            const double cand_z = z[i] + delta;
            const double cand_d = std::exp(cand_z);
            const LocationRecord& rec = data.records[i];
            const double sigma = p.sigma_for(rec.key.t);
            double log_ratio;
            if (!(cand_d > 0.0) || !std::isfinite(cand_d)) {
                log_ratio = kNegInf;
            } else {
                const auto nobs = static_cast<double>(*rec.observed);
                log_ratio = nobs * delta - rec.area * (cand_d - d[i]);
                log_ratio += ((z[i] - mu[i]) * (z[i] - mu[i]) -
                              (cand_z - mu[i]) * (cand_z - mu[i])) /
                             (2.0 * sigma * sigma);
            }
            const bool accepted = std::log(u) < log_ratio;
            if (accepted) {
                z[i] = cand_z;
                d[i] = cand_d;
            }
            adapt(step_z[i], accepted);
            track(accepted);
        }

        if (iteration >= config.burn_in) {
            chain.draws.push_back(p);
            chain.log_posterior.push_back(evaluator.eval(p, d));
        }
    }

    chain.acceptance_rate =
      proposed_kept > 0
        ? static_cast<double>(accepted_kept) / static_cast<double>(proposed_kept)
        : 0.0;
    return chain;
}

Prediction predict(const Chain& chain,
                   const GroupKey& key,
                   const std::vector<double>& x,
                   double area,
                   double level,
                   Rng& rng)
{
    if (chain.draws.empty()) {
        throw EmptyChain("prediction needs a non-empty chain");
    }
    if (!(level > 0.0) || !(level < 1.0)) {
        throw std::invalid_argument("credible level must be in (0, 1)");
    }
    if (!(area >= 0.0) || !std::isfinite(area)) {
        throw std::invalid_argument("area must be non-negative");
    }

    LocationRecord rec;
    rec.key = key;
    rec.x = x;

    KahanSum mean_acc;
    std::vector<double> sampled;
    sampled.reserve(chain.draws.size());
    for (const ModelParams& p : chain.draws) {
        const double mu = mu_linear(p, rec);
        const double sigma = p.sigma_for(key.t);
        mean_acc.add(std::exp(mu + 0.5 * sigma * sigma) * area);
        const double density = std::exp(rng.normal(mu, sigma));
        sampled.push_back(
          static_cast<double>(rng.poisson(density * area)));
    }
    std::sort(sampled.begin(), sampled.end());

    Prediction out;
    out.mean = mean_acc.value() / static_cast<double>(chain.draws.size());
    out.lo = quantile_sorted(sampled, (1.0 - level) / 2.0);
    out.hi = quantile_sorted(sampled, (1.0 + level) / 2.0);
    return out;
}

MicrocensusDataset simulate_dataset(const SimulateConfig& config)
{
    if (config.locations < 1) {
        throw std::invalid_argument("locations must be >= 1");
    }
    if (!(config.area_min > 0.0) || config.area_max < config.area_min) {
        throw std::invalid_argument("area range must satisfy 0 < min <= max");
    }
    if (config.covariate_dim < 0) {
        throw std::invalid_argument("covariate_dim must be >= 0");
    }
    check_params_shape(config.params, config.levels, config.covariate_dim);

    MicrocensusDataset data;
    data.levels = config.levels;
    data.covariate_dim = config.covariate_dim;
    data.records.reserve(static_cast<std::size_t>(config.locations));

    Rng rng(config.seed);
    const auto pick = [&](int levels) {
        return static_cast<int>(rng.uniform() * static_cast<double>(levels));
    };
    for (int i = 0; i < config.locations; ++i) {
        LocationRecord rec;
        rec.loc_id = "loc_" + std::to_string(i);
        rec.key = { pick(config.levels.types), pick(config.levels.regions),
                    pick(config.levels.states), pick(config.levels.lgas) };
        rec.x.resize(static_cast<std::size_t>(config.covariate_dim));
        for (double& v : rec.x) {
            v = rng.normal();
        }
        rec.area = rng.uniform(config.area_min, config.area_max);
        const SimDraw draw =
          simulate_location(config.params, rec.key, rec.x, rec.area, rng);
        rec.density = draw.density;
        rec.observed = draw.count;
        data.records.push_back(std::move(rec));
    }
    return data;
}

MicrocensusDataset read_microcensus_csv(std::istream& in)
{
    const auto records = csv::read_records(in);
    if (records.empty() || records[0].size() < 7 ||
        records[0][0] != "loc_id" || records[0][1] != "t" ||
        records[0][2] != "r" || records[0][3] != "s" ||
        records[0][4] != "l" || records[0][5] != "A" ||
        records[0][6] != "N") {
        throw SchemaError(
          "microcensus CSV header must start loc_id,t,r,s,l,A,N");
    }
    const int covariate_dim = static_cast<int>(records[0].size()) - 7;
    for (int k = 0; k < covariate_dim; ++k) {
        if (records[0][static_cast<std::size_t>(7 + k)] !=
            "x" + std::to_string(k + 1)) {
            throw SchemaError("microcensus CSV covariate columns must be "
                              "named x1..xK in order");
        }
    }

    MicrocensusDataset data;
    data.covariate_dim = covariate_dim;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& rec = records[i];
        if (rec.size() != records[0].size()) {
            throw ParseError("microcensus CSV row " + std::to_string(i) +
                             ": wrong field count");
        }
        const auto number = [&](const std::string& field,
                                const char* what) -> double {
            const auto parsed = parse_double(field);
            if (!parsed) {
                throw ParseError("microcensus CSV row " + std::to_string(i) +
                                 ": " + what + " '" + field +
                                 "' is not a number");
            }
            return *parsed;
        };
        const auto factor_id = [&](const std::string& field,
                                   const char* what) -> int {
            const double v = number(field, what);
            if (v < 0.0 || v != std::floor(v)) {
                throw ParseError("microcensus CSV row " + std::to_string(i) +
                                 ": " + what +
                                 " must be a non-negative integer");
            }
            return static_cast<int>(v);
        };
        LocationRecord row;
        row.loc_id = rec[0];
        row.key = { factor_id(rec[1], "t"), factor_id(rec[2], "r"),
                    factor_id(rec[3], "s"), factor_id(rec[4], "l") };
        row.area = number(rec[5], "A");
        if (!rec[6].empty()) {
            const double v = number(rec[6], "N");
            if (v < 0.0 || v != std::floor(v)) {
                throw ParseError("microcensus CSV row " + std::to_string(i) +
                                 ": N must be a non-negative integer");
            }
            row.observed = static_cast<long long>(v);
        }
        row.x.reserve(static_cast<std::size_t>(covariate_dim));
        for (int k = 0; k < covariate_dim; ++k) {
            row.x.push_back(
              number(rec[static_cast<std::size_t>(7 + k)], "covariate"));
        }
        data.levels.types = std::max(data.levels.types, row.key.t + 1);
        data.levels.regions = std::max(data.levels.regions, row.key.r + 1);
        data.levels.states = std::max(data.levels.states, row.key.s + 1);
        data.levels.lgas = std::max(data.levels.lgas, row.key.l + 1);
        data.records.push_back(std::move(row));
    }
    return data;
}

MicrocensusDataset read_microcensus_csv(const std::string& text)
{
    std::istringstream in(text);
    return read_microcensus_csv(in);
}

std::string write_microcensus_csv(const MicrocensusDataset& data)
{
    std::string out = "loc_id,t,r,s,l,A,N";
    for (int k = 1; k <= data.covariate_dim; ++k) {
        out += ",x" + std::to_string(k);
    }
    out += '\n';
    for (const LocationRecord& rec : data.records) {
        std::vector<std::string> fields{
            rec.loc_id,
            std::to_string(rec.key.t),
            std::to_string(rec.key.r),
            std::to_string(rec.key.s),
            std::to_string(rec.key.l),
            format_double(rec.area),
            rec.observed ? std::to_string(*rec.observed) : std::string(),
        };
        for (double v : rec.x) {
            fields.push_back(format_double(v));
        }
        out += csv::join_record(fields);
        out += '\n';
    }
    return out;
}

std::string write_chain_csv(const Chain& chain)
{
    std::vector<std::string> header{ "alpha0" };
    const auto add_block = [&](const char* stem, std::size_t count) {
        for (std::size_t j = 0; j < count; ++j) {
            header.push_back(std::string(stem) + "_" + std::to_string(j));
        }
    };
    add_block("alpha_t", static_cast<std::size_t>(chain.levels.types));
    add_block("alpha_r", static_cast<std::size_t>(chain.levels.regions));
    add_block("alpha_s", static_cast<std::size_t>(chain.levels.states));
    add_block("alpha_l", static_cast<std::size_t>(chain.levels.lgas));
    add_block("beta", static_cast<std::size_t>(chain.covariate_dim));
    const bool per_type =
      !chain.draws.empty() && !chain.draws.front().sigma_t.empty();
    if (per_type) {
        add_block("sigma_t", static_cast<std::size_t>(chain.levels.types));
    } else {
        header.emplace_back("sigma");
    }

    std::string out = csv::join_record(header);
    out += '\n';
    for (const ModelParams& p : chain.draws) {
        std::vector<std::string> fields{ format_double(p.alpha0) };
        const auto add_values = [&](const std::vector<double>& v) {
            for (double e : v) {
                fields.push_back(format_double(e));
            }
        };
        add_values(p.alpha_t);
        add_values(p.alpha_r);
        add_values(p.alpha_s);
        add_values(p.alpha_l);
        add_values(p.beta);
        if (per_type) {
            add_values(p.sigma_t);
        } else {
            fields.push_back(format_double(p.sigma));
        }
        out += csv::join_record(fields);
        out += '\n';
    }
    return out;
}

Chain read_chain_csv(std::istream& in)
{
    const auto records = csv::read_records(in);
    if (records.empty() || records[0].empty() || records[0][0] != "alpha0") {
        throw SchemaError("chain CSV must start with an alpha0 column");
    }
    const auto& header = records[0];

    const auto block_count = [&](const std::string& stem,
                                 std::size_t start) -> std::size_t {
        std::size_t count = 0;
        while (start + count < header.size() &&
               header[start + count] == stem + "_" + std::to_string(count)) {
            ++count;
        }
        return count;
    };

    Chain chain;
    std::size_t pos = 1;
    const std::size_t n_t = block_count("alpha_t", pos);
    pos += n_t;
    const std::size_t n_r = block_count("alpha_r", pos);
    pos += n_r;
    const std::size_t n_s = block_count("alpha_s", pos);
    pos += n_s;
    const std::size_t n_l = block_count("alpha_l", pos);
    pos += n_l;
    const std::size_t n_beta = block_count("beta", pos);
    pos += n_beta;
    std::size_t n_sigma_t = 0;
    bool pooled = false;
    if (pos < header.size() && header[pos] == "sigma") {
        pooled = true;
        pos += 1;
    } else {
        n_sigma_t = block_count("sigma_t", pos);
        pos += n_sigma_t;
    }
    if (n_t == 0 || n_r == 0 || n_s == 0 || n_l == 0 ||
        (!pooled && n_sigma_t == 0) || pos != header.size()) {
        throw SchemaError("chain CSV header does not match the chain schema");
    }

    chain.levels = { static_cast<int>(n_t), static_cast<int>(n_r),
                     static_cast<int>(n_s), static_cast<int>(n_l) };
    chain.covariate_dim = static_cast<int>(n_beta);

    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& rec = records[i];
        if (rec.size() != header.size()) {
            throw ParseError("chain CSV row " + std::to_string(i) +
                             ": wrong field count");
        }
        std::size_t at = 0;
        const auto next = [&]() -> double {
            const auto parsed = parse_double(rec[at]);
            if (!parsed) {
                throw ParseError("chain CSV row " + std::to_string(i) +
                                 ": '" + rec[at] + "' is not a number");
            }
            ++at;
            return *parsed;
        };
        ModelParams p;
        p.alpha0 = next();
        const auto read_block = [&](std::size_t count) {
            std::vector<double> v(count);
            for (double& e : v) {
                e = next();
            }
            return v;
        };
        p.alpha_t = read_block(n_t);
        p.alpha_r = read_block(n_r);
        p.alpha_s = read_block(n_s);
        p.alpha_l = read_block(n_l);
        p.beta = read_block(n_beta);
        if (pooled) {
            p.sigma = next();
        } else {
            p.sigma_t = read_block(n_sigma_t);
            p.sigma = p.sigma_t.front();
        }
        chain.draws.push_back(std::move(p));
    }
    return chain;
}

Chain read_chain_csv(const std::string& text)
{
    std::istringstream in(text);
    return read_chain_csv(in);
}

} // namespace gridpop
