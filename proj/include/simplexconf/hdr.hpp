#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "simplexconf/dirichlet.hpp"

namespace simplexconf {

// Level-set data for the density score at one test point:
// { y : sum_j w_j log y_j >= t_star } with w_j = phi mu_j - 1.
struct LevelData {
    double t_star = 0.0;
    std::vector<double> w;
    double W = 0.0;  // sum of w
    double q = 0.0;  // conformal threshold that produced t_star
};

// Axis floors tau_i defining { y in simplex : y_i >= tau_i }.
struct FloorPolytope {
    std::vector<double> tau;
    LevelData level;
    bool fallback = false;  // set when any w_j <= 0 or a floor solve failed
};

// Grid points inside the floor polytope that satisfy the level constraint.
struct LevelSetGrid {
    std::vector<CompositionalVector> accepted;
    FloorPolytope floor;
    int points_per_axis = 0;
};

// Density nonconformity score: -log_density(y, mp).
double nll_score(const CompositionalVector& y, const MeanPrecision& mp);

// Threshold and weights of the exact highest-density set at level q.
LevelData level_threshold(const MeanPrecision& mp, double q);

// Membership in the exact set, evaluated through the level identity.
bool level_constraint_holds(const LevelData& level, const CompositionalVector& y);

// Residual F_i(rho) - t_star of the one-dimensional floor equation for face
// i; strictly increasing in rho when all w_j > 0.
double floor_equation(double rho, const std::vector<double>& w, double W, double t_star,
                      std::size_t i);

// Minimum of y_i over the exact set, via the closed form in rho. Returns 0
// when some w_j <= 0 or bracketing fails.
double solve_floor(const LevelData& level, std::size_t i);

FloorPolytope floor_polytope(const MeanPrecision& mp, double q);

// Lattice sweep inside the polytope: per axis, m equally spaced values over
// the axis' full range within the polytope, nested subject to feasibility;
// the last coordinate takes the remainder. Boundary coordinates are nudged
// inward by 1e-12 (compensated on the largest part) so logs stay finite.
std::vector<CompositionalVector> interior_grid(const FloorPolytope& floor, int m);

// Visitor form of interior_grid for filters that do not need to materialize
// every candidate. Points arrive in deterministic sweep order.
void for_each_grid_point(const FloorPolytope& floor, int m,
                         const std::function<void(const std::vector<double>&)>& visit);

LevelSetGrid grid_region(const MeanPrecision& mp, double q, int m);

}  // namespace simplexconf
