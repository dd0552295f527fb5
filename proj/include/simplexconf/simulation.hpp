#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "simplexconf/conformal.hpp"
#include "simplexconf/regression.hpp"

namespace simplexconf {

enum class Method { QR, HdrFloor, HdrFloorGrid, SimplexGrid };

std::string method_name(Method method);
Method parse_method(const std::string& name);

enum class CovariateLaw { Uniform01, BernoulliHalf, GammaShape3Rate6 };

// Data-generating design: two covariates shared between the mean and
// precision links plus intercepts, with scenario-specific coefficients.
struct ScenarioSpec {
    std::string id;
    std::size_t D = 3;
    std::size_t n = 1000;
    Coefficients coefficients;
    std::vector<CovariateLaw> covariate_laws;
    std::uint64_t seed = 0;
};

// Registry of the study designs 1a..5b; gamma1_override replaces the
// precision intercept (used for the grid-comparison precision settings).
ScenarioSpec scenario_spec(const std::string& id, std::size_t D = 3,
                           std::optional<double> gamma1_override = std::nullopt);

bool is_known_scenario(const std::string& id);

Dataset generate_scenario(const ScenarioSpec& spec);
Dataset generate_scenario(const ScenarioSpec& spec, Rng& rng, std::size_t n);

struct EvalSummary {
    std::string scenario;
    Method method = Method::QR;
    double empirical_coverage_pct = 0.0;
    std::vector<double> individual_coverage_pct;  // per component; QR only
    std::vector<double> mean_widths;
    double mean_time_seconds = 0.0;
    std::size_t failures = 0;
    // Largest within-iteration spread of the floor widths (floor method
    // only); the floor geometry forces this to zero.
    double max_width_spread = 0.0;
};

struct McOptions {
    int grid_m = 100;
    bool timing = false;
    bool oracle = false;  // score with the true parameters, no fitting
    SplitFractions fractions{0.7, 0.3, 0.0};
    // Full-simplex lattice resolution when Method::SimplexGrid is requested.
    int full_grid_m = 200;
};

// Monte Carlo coverage/width/runtime study: per iteration, generate data,
// split, fit (unless oracle), calibrate each method and evaluate one fresh
// test point. Deterministic given spec.seed.
std::vector<EvalSummary> run_monte_carlo(const ScenarioSpec& spec,
                                         const std::vector<Method>& methods, int iterations,
                                         double alpha, const McOptions& options = {});

// Lattice over the whole simplex (zero floors).
std::vector<CompositionalVector> full_simplex_grid(std::size_t D, int m);

// Level-set grid evaluated on the full-simplex lattice instead of the floor
// polytope.
LevelSetGrid simplex_grid_region(const MeanPrecision& mp, double q, int m);

// Runs the HDR-floor grid and the full-simplex grid on identical data.
std::vector<EvalSummary> compare_hdr_vs_full(const ScenarioSpec& spec, int iterations,
                                             double alpha, int m_hdr, int m_full,
                                             bool timing = true);

}  // namespace simplexconf
