#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "simplexconf/errors.hpp"
#include "simplexconf/root_finding.hpp"

using namespace simplexconf;

TEST_CASE("find_root basic roots") {
    const double r = find_root([](double x) { return x * x - 2.0; }, Bracket{1.0, 2.0});
    CHECK(r == doctest::Approx(1.4142135623730951).epsilon(1e-8));

    CHECK(find_root([](double x) { return x - 0.3; }, Bracket{0.0, 1.0}) ==
          doctest::Approx(0.3).epsilon(1e-10));
}

TEST_CASE("find_root endpoint root and errors") {
    CHECK(find_root([](double x) { return x; }, Bracket{0.0, 1.0}) == 0.0);
    CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, Bracket{-1.0, 1.0}),
                    BracketError);
    CHECK_THROWS_AS(find_root([](double x) { return x; }, Bracket{2.0, 1.0}), BracketError);
}

TEST_CASE("find_root tolerance and stiff objective") {
    // Steep exponential root.
    const double r = find_root([](double x) { return std::exp(10.0 * x) - 3.0; },
                               Bracket{-2.0, 2.0}, RootOptions{1e-12, 200});
    CHECK(r == doctest::Approx(std::log(3.0) / 10.0).epsilon(1e-10));
}
