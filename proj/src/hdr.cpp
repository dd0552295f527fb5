#include "simplexconf/hdr.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "simplexconf/errors.hpp"
#include "simplexconf/root_finding.hpp"
#include "simplexconf/special_functions.hpp"

namespace simplexconf {

namespace {

constexpr double kNudge = 1e-12;
constexpr double kGridTol = 1e-9;

}  // namespace

double nll_score(const CompositionalVector& y, const MeanPrecision& mp) {
    return -log_density(y, mp);
}

LevelData level_threshold(const MeanPrecision& mp, double q) {
    LevelData level;
    level.q = q;
    level.w.resize(mp.dim());
    double t = -q - log_gamma(mp.phi);
    double w_total = 0.0;
    for (std::size_t j = 0; j < mp.dim(); ++j) {
        const double lambda_j = mp.phi * mp.mu[j];
        t += log_gamma(lambda_j);
        level.w[j] = lambda_j - 1.0;
        w_total += level.w[j];
    }
    level.t_star = t;
    level.W = w_total;
    return level;
}

bool level_constraint_holds(const LevelData& level, const CompositionalVector& y) {
    double s = 0.0;
    for (std::size_t j = 0; j < level.w.size(); ++j) s += level.w[j] * std::log(y[j]);
    return s >= level.t_star;
}

double floor_equation(double rho, const std::vector<double>& w, double W, double t_star,
                      std::size_t i) {
    if (!(rho > 0.0)) {
        throw DomainError("floor_equation: rho must be positive");
    }
    if (i >= w.size()) {
        throw DomainError("floor_equation: face index out of range");
    }
    double entropy = 0.0;
    for (double wj : w) {
        if (!(wj > 0.0)) {
            throw DomainError("floor_equation: weights must be positive");
        }
        entropy += wj * std::log(wj);
    }
    const double wi = w[i];
    return wi * std::log(rho) + (W - wi) * std::log1p(rho) -
           W * std::log(wi * rho + (W - wi) * (1.0 + rho)) + entropy - t_star;
}

double solve_floor(const LevelData& level, std::size_t i) {
    for (double wj : level.w) {
        if (!(wj > 0.0)) return 0.0;
    }
    const auto f = [&](double rho) {
        return floor_equation(rho, level.w, level.W, level.t_star, i);
    };
    // F_i is strictly increasing with range (-inf, sup); expand geometrically
    // until a sign change appears or the expansion cap rules one out.
    double lo = 0.1, hi = 10.0;
    int expansions = 0;
    while (f(lo) > 0.0) {
        lo *= 0.1;
        if (++expansions > 30) return 0.0;
    }
    expansions = 0;
    while (f(hi) < 0.0) {
        hi *= 10.0;
        if (++expansions > 30) return 0.0;
    }
    double rho;
    try {
        rho = find_root(f, Bracket{lo, hi}, RootOptions{1e-12, 200});
    } catch (const NumericError&) {
        return 0.0;
    }
    const double wi = level.w[i];
    const double theta = 1.0 / (wi / (1.0 + rho) + (level.W - wi) / rho);
    const double tau = theta * wi / (1.0 + rho);
    return std::clamp(tau, 0.0, 1.0 - 1e-12);
}

FloorPolytope floor_polytope(const MeanPrecision& mp, double q) {
    FloorPolytope poly;
    if (std::isinf(q)) {
        poly.level = level_threshold(mp, 0.0);
        poly.level.q = q;
        poly.level.t_star = -std::numeric_limits<double>::infinity();
        poly.tau.assign(mp.dim(), 0.0);
        return poly;
    }
    poly.level = level_threshold(mp, q);
    poly.tau.resize(mp.dim());
    for (std::size_t i = 0; i < mp.dim(); ++i) {
        poly.tau[i] = solve_floor(poly.level, i);
        if (poly.tau[i] == 0.0) poly.fallback = true;
    }
    double total = 0.0;
    for (double t : poly.tau) total += t;
    assert(total < 1.0 + 1e-9);
    if (total >= 1.0) {
        const double shrink = (1.0 - 1e-9) / total;
        for (double& t : poly.tau) t *= shrink;
    }
    return poly;
}

void for_each_grid_point(const FloorPolytope& floor, int m,
                         const std::function<void(const std::vector<double>&)>& visit) {
    const std::size_t d = floor.tau.size();
    if (m < 2) {
        throw DomainError("interior_grid: need at least two points per axis");
    }
    double tau_total = 0.0;
    for (double t : floor.tau) tau_total += t;
    if (!(tau_total < 1.0)) {
        throw DomainError("interior_grid: floors leave no interior");
    }

    // Per-axis lattice over the widest feasible interval for that axis.
    std::vector<std::vector<double>> lattice(d - 1);
    for (std::size_t k = 0; k + 1 < d; ++k) {
        const double lo = floor.tau[k];
        const double hi = 1.0 - (tau_total - floor.tau[k]);
        lattice[k].resize(m);
        for (int t = 0; t < m; ++t) {
            lattice[k][t] = lo + (hi - lo) * static_cast<double>(t) / (m - 1);
        }
    }

    std::vector<double> point(d, 0.0);
    std::vector<double> work(d, 0.0);
    const std::function<void(std::size_t, double, double)> sweep =
        [&](std::size_t k, double chosen_sum, double tail_tau) {
            if (k + 1 == d) {
                const double rest = 1.0 - chosen_sum;
                if (rest < floor.tau[k] - kGridTol) return;
                point[k] = rest;
                // Nudge boundary coordinates inward, compensating on the
                // largest part so the sum stays exact.
                work = point;
                std::size_t largest = 0;
                double shift = 0.0;
                for (std::size_t j = 0; j < d; ++j) {
                    if (work[j] > work[largest]) largest = j;
                }
                for (std::size_t j = 0; j < d; ++j) {
                    if (j != largest && work[j] < kNudge) {
                        shift += kNudge - work[j];
                        work[j] = kNudge;
                    }
                }
                work[largest] -= shift;
                if (work[largest] <= 0.0) return;
                visit(work);
                return;
            }
            const double next_tail = tail_tau - floor.tau[k];
            const double ub = 1.0 - next_tail - chosen_sum;
            for (double v : lattice[k]) {
                if (v > ub + kGridTol) break;
                point[k] = v;
                sweep(k + 1, chosen_sum + v, next_tail);
            }
        };
    sweep(0, 0.0, tau_total);
}

std::vector<CompositionalVector> interior_grid(const FloorPolytope& floor, int m) {
    std::vector<CompositionalVector> out;
    for_each_grid_point(floor, m,
                        [&](const std::vector<double>& p) { out.emplace_back(p); });
    return out;
}

LevelSetGrid grid_region(const MeanPrecision& mp, double q, int m) {
    LevelSetGrid grid;
    grid.floor = floor_polytope(mp, q);
    grid.points_per_axis = m;
    const LevelData& level = grid.floor.level;
    for_each_grid_point(grid.floor, m, [&](const std::vector<double>& p) {
        double s = 0.0;
        for (std::size_t j = 0; j < level.w.size(); ++j) s += level.w[j] * std::log(p[j]);
        if (s >= level.t_star) grid.accepted.emplace_back(p);
    });
    return grid;
}

}  // namespace simplexconf
