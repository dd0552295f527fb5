#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "simplexconf/conformal.hpp"

namespace simplexconf {

// Barycentric projection of a three-part composition onto the reference
// triangle with corners (0,0), (1,0), (0.5, sqrt(3)/2) for components
// y1, y2, y3 respectively.
std::array<double, 2> ternary_project(const std::vector<double>& y);

// Region outline on the simplex as a polygon in barycentric coordinates:
// the triangle clipped to y_j >= lo_j and y_j <= hi_j for every j.
std::vector<std::vector<double>> clip_simplex_to_box(const BoxRegion& box);

// Vertices of the floor triangle {y_i >= tau_i}.
std::vector<std::vector<double>> floor_triangle_vertices(const std::vector<double>& tau);

// SVG ternary diagram: region overlay, estimated mean (circle), true test
// point (diamond) and a legend. Three components only.
void emit_ternary_plot(const PredictionRegion& region, const CompositionalVector& mean,
                       const std::optional<CompositionalVector>& truth,
                       const std::string& path);

}  // namespace simplexconf
