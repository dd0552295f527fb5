#include "simplexconf/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "simplexconf/errors.hpp"
#include "simplexconf/rng.hpp"
#include "simplexconf/special_functions.hpp"

namespace simplexconf {

namespace {

constexpr double kPitClamp = 1e-12;

}  // namespace

SplitIndices split_data(std::size_t n, SplitFractions fractions, std::uint64_t seed) {
    const double f[3] = {fractions.train, fractions.calibration, fractions.test};
    double total = 0.0;
    for (double x : f) {
        if (x < 0.0) throw ConfigError("split_data: negative fraction");
        total += x;
    }
    if (std::fabs(total - 1.0) > 1e-9) {
        throw ConfigError("split_data: fractions must sum to one");
    }
    const std::size_t n_train = static_cast<std::size_t>(std::lround(f[0] * n));
    const std::size_t n_cal = static_cast<std::size_t>(std::lround(f[1] * n));
    if (n_train + n_cal > n) {
        throw ConfigError("split_data: n too small for the requested fractions");
    }
    const std::size_t n_test = n - n_train - n_cal;
    if ((f[0] > 0.0 && n_train == 0) || (f[1] > 0.0 && n_cal == 0) ||
        (f[2] > 0.0 && n_test == 0)) {
        throw ConfigError("split_data: n too small for a nonempty block");
    }

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(seed);
    rng.shuffle(idx);

    SplitIndices split;
    split.seed = seed;
    split.train.assign(idx.begin(), idx.begin() + n_train);
    split.calibration.assign(idx.begin() + n_train, idx.begin() + n_train + n_cal);
    split.test.assign(idx.begin() + n_train + n_cal, idx.end());
    return split;
}

bool ConformalQuantile::is_infinite() const { return std::isinf(value); }

ConformalQuantile conformal_quantile(std::vector<double> scores, double alpha) {
    if (scores.empty()) {
        throw DomainError("conformal_quantile: empty score vector");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ConfigError("conformal_quantile: alpha must lie in (0,1)");
    }
    for (double s : scores) {
        if (!std::isfinite(s)) {
            throw DomainError("conformal_quantile: non-finite score");
        }
    }
    ConformalQuantile q;
    q.n_cal = scores.size();
    q.alpha = alpha;
    q.k = static_cast<std::size_t>(
        std::ceil((1.0 - alpha) * static_cast<double>(q.n_cal + 1)));
    if (q.k > q.n_cal) {
        q.value = std::numeric_limits<double>::infinity();
        return q;
    }
    std::sort(scores.begin(), scores.end());
    q.value = scores[q.k - 1];
    return q;
}

std::vector<double> pit_values(const CompositionalVector& y, const MeanPrecision& mp) {
    if (y.dim() != mp.dim()) {
        throw DomainError("pit_values: dimension mismatch");
    }
    std::vector<double> u(y.dim());
    for (std::size_t j = 0; j < y.dim(); ++j) {
        const auto [a, b] = marginal_beta(mp, j);
        u[j] = std::clamp(beta_cdf(y[j], a, b), kPitClamp, 1.0 - kPitClamp);
    }
    return u;
}

double qr_score(const CompositionalVector& y, const MeanPrecision& mp) {
    double score = 0.0;
    for (double u : pit_values(y, mp)) {
        score = std::max(score, std::fabs(normal_quantile(u)));
    }
    return score;
}

BoxRegion qr_region(const MeanPrecision& mp, const ConformalQuantile& q) {
    BoxRegion region;
    region.intervals.resize(mp.dim());
    if (q.is_infinite()) {
        for (auto& iv : region.intervals) iv = Interval{0.0, 1.0};
        return region;
    }
    const double p_inf = normal_cdf(-q.value);
    const double p_sup = normal_cdf(q.value);
    for (std::size_t j = 0; j < mp.dim(); ++j) {
        const auto [a, b] = marginal_beta(mp, j);
        region.intervals[j] = Interval{beta_quantile(p_inf, a, b), beta_quantile(p_sup, a, b)};
    }
    return region;
}

bool region_contains(const PredictionRegion& region, const CompositionalVector& y) {
    return std::visit(
        [&](const auto& r) -> bool {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, BoxRegion>) {
                if (r.intervals.size() != y.dim()) {
                    throw DomainError("region_contains: dimension mismatch");
                }
                for (std::size_t j = 0; j < y.dim(); ++j) {
                    if (y[j] < r.intervals[j].lo || y[j] > r.intervals[j].hi) return false;
                }
                return true;
            } else if constexpr (std::is_same_v<T, FloorPolytope>) {
                if (r.tau.size() != y.dim()) {
                    throw DomainError("region_contains: dimension mismatch");
                }
                for (std::size_t j = 0; j < y.dim(); ++j) {
                    if (y[j] < r.tau[j]) return false;
                }
                return true;
            } else {
                // Membership in the exact level set, not in the finite grid.
                return level_constraint_holds(r.floor.level, y);
            }
        },
        region);
}

std::vector<double> region_widths(const PredictionRegion& region) {
    return std::visit(
        [](const auto& r) -> std::vector<double> {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, BoxRegion>) {
                std::vector<double> w(r.intervals.size());
                for (std::size_t j = 0; j < w.size(); ++j) {
                    w[j] = r.intervals[j].hi - r.intervals[j].lo;
                }
                return w;
            } else if constexpr (std::is_same_v<T, FloorPolytope>) {
                double total = 0.0;
                for (double t : r.tau) total += t;
                return std::vector<double>(r.tau.size(), 1.0 - total);
            } else {
                const std::size_t d = r.floor.tau.size();
                std::vector<double> w(d, 0.0);
                if (r.accepted.empty()) return w;
                std::vector<double> lo(d, 1.0), hi(d, 0.0);
                for (const auto& p : r.accepted) {
                    for (std::size_t j = 0; j < d; ++j) {
                        lo[j] = std::min(lo[j], p[j]);
                        hi[j] = std::max(hi[j], p[j]);
                    }
                }
                for (std::size_t j = 0; j < d; ++j) w[j] = hi[j] - lo[j];
                return w;
            }
        },
        region);
}

}  // namespace simplexconf
