#include "simplexconf/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "simplexconf/errors.hpp"
#include "simplexconf/parallel.hpp"

namespace simplexconf {

namespace {

double draw_covariate(CovariateLaw law, Rng& rng) {
    switch (law) {
        case CovariateLaw::Uniform01:
            return rng.uniform();
        case CovariateLaw::BernoulliHalf:
            return rng.bernoulli(0.5) ? 1.0 : 0.0;
        case CovariateLaw::GammaShape3Rate6:
            return rng.gamma(3.0) / 6.0;
    }
    throw ConfigError("unknown covariate law");
}

Observation draw_observation(const ScenarioSpec& spec, Rng& rng) {
    std::vector<double> cov{1.0};
    for (CovariateLaw law : spec.covariate_laws) cov.push_back(draw_covariate(law, rng));
    DesignRow row{cov, cov};
    const MeanPrecision mp = linear_predictors(row, spec.coefficients);
    CompositionalVector y = sample_dirichlet(mp, rng);
    return Observation{std::move(row), std::move(y)};
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct MethodOutcome {
    bool covered = false;
    std::vector<double> widths;
    std::vector<double> individual;  // QR componentwise coverage indicators
    double seconds = 0.0;
    double width_spread = 0.0;
};

MethodOutcome evaluate_method(Method method, const Coefficients& coeffs, const Dataset& data,
                              const std::vector<std::size_t>& cal_idx,
                              const Observation& test, double alpha, const McOptions& opts) {
    MethodOutcome out;
    const auto start = std::chrono::steady_clock::now();
    std::vector<double> scores;
    scores.reserve(cal_idx.size());
    const bool density_score = method != Method::QR;
    for (std::size_t i : cal_idx) {
        const MeanPrecision mp = linear_predictors(data[i].x, coeffs);
        scores.push_back(density_score ? nll_score(data[i].y, mp) : qr_score(data[i].y, mp));
    }
    const ConformalQuantile q = conformal_quantile(std::move(scores), alpha);
    const MeanPrecision mp_test = linear_predictors(test.x, coeffs);

    PredictionRegion region;
    switch (method) {
        case Method::QR:
            region = qr_region(mp_test, q);
            break;
        case Method::HdrFloor:
            region = floor_polytope(mp_test, q.value);
            break;
        case Method::HdrFloorGrid:
            region = grid_region(mp_test, q.value, opts.grid_m);
            break;
        case Method::SimplexGrid:
            region = simplex_grid_region(mp_test, q.value, opts.full_grid_m);
            break;
    }
    out.covered = region_contains(region, test.y);
    out.widths = region_widths(region);
    out.seconds = seconds_since(start);
    if (method == Method::QR) {
        const auto& box = std::get<BoxRegion>(region);
        out.individual.resize(box.intervals.size());
        for (std::size_t j = 0; j < box.intervals.size(); ++j) {
            out.individual[j] = (test.y[j] >= box.intervals[j].lo &&
                                 test.y[j] <= box.intervals[j].hi)
                                    ? 1.0
                                    : 0.0;
        }
    }
    if (method == Method::HdrFloor) {
        const auto [lo, hi] = std::minmax_element(out.widths.begin(), out.widths.end());
        out.width_spread = *hi - *lo;
    }
    return out;
}

}  // namespace

std::string method_name(Method method) {
    switch (method) {
        case Method::QR: return "QR";
        case Method::HdrFloor: return "HDR-floor";
        case Method::HdrFloorGrid: return "HDR-floor-grid";
        case Method::SimplexGrid: return "simplex-grid";
    }
    throw ConfigError("unknown method");
}

Method parse_method(const std::string& name) {
    if (name == "qr" || name == "QR") return Method::QR;
    if (name == "hdr-floor" || name == "HDR-floor") return Method::HdrFloor;
    if (name == "hdr-grid" || name == "hdr-floor-grid" || name == "HDR-floor-grid") {
        return Method::HdrFloorGrid;
    }
    if (name == "simplex-grid") return Method::SimplexGrid;
    throw ConfigError("unknown method '" + name + "'");
}

ScenarioSpec scenario_spec(const std::string& id, std::size_t D,
                           std::optional<double> gamma1_override) {
    if (!is_known_scenario(id)) {
        throw ConfigError("unknown scenario '" + id + "'");
    }
    if (D != 3 && D != 4) {
        throw ConfigError("scenario_spec: D must be 3 or 4");
    }
    const char family = id[0];
    const bool low_variance = id[1] == 'b';

    double intercept2 = -0.3, intercept3 = -0.3;
    if (family == '2') {
        intercept2 = 0.7;
        intercept3 = -0.7;
    } else if (family == '3') {
        intercept2 = 1.5;
        intercept3 = -1.5;
    }

    ScenarioSpec spec;
    spec.id = id;
    spec.D = D;
    spec.n = 1000;
    spec.coefficients.beta = {{intercept2, 1.0, -0.5}, {intercept3, -0.5, 1.0}};
    if (D == 4) {
        // Symmetric fourth component: third row's pattern with the two
        // slopes swapped.
        spec.coefficients.beta.push_back({intercept3, 1.0, -0.5});
    }
    double gamma1 = low_variance ? 4.6 : 3.0;
    if (gamma1_override) gamma1 = *gamma1_override;
    if (family == '4') {
        spec.coefficients.gamma = {gamma1, 0.5, -0.5};
    } else {
        spec.coefficients.gamma = {gamma1, 0.0, 0.0};
    }
    if (family == '5') {
        spec.covariate_laws = {CovariateLaw::BernoulliHalf, CovariateLaw::GammaShape3Rate6};
    } else {
        spec.covariate_laws = {CovariateLaw::Uniform01, CovariateLaw::Uniform01};
    }
    return spec;
}

bool is_known_scenario(const std::string& id) {
    return id.size() == 2 && id[0] >= '1' && id[0] <= '5' && (id[1] == 'a' || id[1] == 'b');
}

Dataset generate_scenario(const ScenarioSpec& spec) {
    Rng rng(spec.seed);
    return generate_scenario(spec, rng, spec.n);
}

Dataset generate_scenario(const ScenarioSpec& spec, Rng& rng, std::size_t n) {
    Dataset data;
    data.reserve(n);
    for (std::size_t i = 0; i < n; ++i) data.push_back(draw_observation(spec, rng));
    return data;
}

std::vector<EvalSummary> run_monte_carlo(const ScenarioSpec& spec,
                                         const std::vector<Method>& methods, int iterations,
                                         double alpha, const McOptions& options) {
    if (iterations < 1) {
        throw ConfigError("run_monte_carlo: iterations must be >= 1");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ConfigError("run_monte_carlo: alpha must lie in (0,1)");
    }

    struct IterationRecord {
        bool failed = false;
        std::vector<MethodOutcome> outcomes;
    };
    std::vector<IterationRecord> records(static_cast<std::size_t>(iterations));

    parallel_for_index(static_cast<std::size_t>(iterations), [&](std::size_t iter) {
        const std::uint64_t iter_seed = derive_seed(spec.seed, iter);
        Rng rng(derive_seed(iter_seed, 0));
        IterationRecord& rec = records[iter];
        try {
            Dataset data = generate_scenario(spec, rng, spec.n);
            const Observation test = draw_observation(spec, rng);
            const SplitIndices split =
                split_data(spec.n, options.fractions, derive_seed(iter_seed, 1));

            Coefficients coeffs;
            if (options.oracle) {
                coeffs = spec.coefficients;
            } else {
                Dataset train;
                train.reserve(split.train.size());
                for (std::size_t i : split.train) train.push_back(data[i]);
                coeffs = fit_mle(train).coefficients;
            }
            rec.outcomes.reserve(methods.size());
            for (Method method : methods) {
                rec.outcomes.push_back(evaluate_method(method, coeffs, data,
                                                       split.calibration, test, alpha,
                                                       options));
            }
        } catch (const FitError&) {
            rec.failed = true;
        } catch (const NumericError&) {
            rec.failed = true;
        }
    });

    std::size_t failures = 0;
    for (const auto& rec : records) failures += rec.failed ? 1 : 0;
    if (static_cast<double>(failures) > 0.01 * iterations) {
        throw FitError("run_monte_carlo: more than 1% of iterations failed (" +
                       std::to_string(failures) + "/" + std::to_string(iterations) + ")");
    }
    const double n_ok = static_cast<double>(iterations) - static_cast<double>(failures);

    std::vector<EvalSummary> summaries;
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        EvalSummary s;
        s.scenario = spec.id;
        s.method = methods[mi];
        s.failures = failures;
        s.mean_widths.assign(spec.D, 0.0);
        if (methods[mi] == Method::QR) s.individual_coverage_pct.assign(spec.D, 0.0);
        double covered = 0.0, seconds = 0.0;
        for (const auto& rec : records) {
            if (rec.failed) continue;
            const MethodOutcome& out = rec.outcomes[mi];
            covered += out.covered ? 1.0 : 0.0;
            seconds += out.seconds;
            for (std::size_t j = 0; j < spec.D; ++j) s.mean_widths[j] += out.widths[j];
            for (std::size_t j = 0; j < out.individual.size(); ++j) {
                s.individual_coverage_pct[j] += out.individual[j];
            }
            s.max_width_spread = std::max(s.max_width_spread, out.width_spread);
        }
        s.empirical_coverage_pct = 100.0 * covered / n_ok;
        s.mean_time_seconds = options.timing ? seconds / n_ok : 0.0;
        for (double& w : s.mean_widths) w /= n_ok;
        for (double& c : s.individual_coverage_pct) c = 100.0 * c / n_ok;
        summaries.push_back(std::move(s));
    }
    return summaries;
}

std::vector<CompositionalVector> full_simplex_grid(std::size_t D, int m) {
    FloorPolytope whole;
    whole.tau.assign(D, 0.0);
    return interior_grid(whole, m);
}

LevelSetGrid simplex_grid_region(const MeanPrecision& mp, double q, int m) {
    LevelSetGrid grid;
    grid.points_per_axis = m;
    grid.floor.tau.assign(mp.dim(), 0.0);
    grid.floor.level = level_threshold(mp, std::isinf(q) ? 0.0 : q);
    if (std::isinf(q)) {
        grid.floor.level.q = q;
        grid.floor.level.t_star = -std::numeric_limits<double>::infinity();
    }
    const LevelData& level = grid.floor.level;
    for_each_grid_point(grid.floor, m, [&](const std::vector<double>& p) {
        double s = 0.0;
        for (std::size_t j = 0; j < level.w.size(); ++j) s += level.w[j] * std::log(p[j]);
        if (s >= level.t_star) grid.accepted.emplace_back(p);
    });
    return grid;
}

std::vector<EvalSummary> compare_hdr_vs_full(const ScenarioSpec& spec, int iterations,
                                             double alpha, int m_hdr, int m_full,
                                             bool timing) {
    McOptions options;
    options.grid_m = m_hdr;
    options.full_grid_m = m_full;
    options.timing = timing;
    return run_monte_carlo(spec, {Method::HdrFloorGrid, Method::SimplexGrid}, iterations,
                           alpha, options);
}

}  // namespace simplexconf
