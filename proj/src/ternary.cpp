#include "simplexconf/ternary.hpp"

#include <cmath>
#include <fstream>

#include "simplexconf/errors.hpp"

namespace simplexconf {

namespace {

constexpr double kRoot3Half = 0.86602540378443864676;

// Sutherland-Hodgman clip of a barycentric polygon against sign*(y[axis]-c) >= 0.
std::vector<std::vector<double>> clip_halfplane(const std::vector<std::vector<double>>& poly,
                                                std::size_t axis, double c, double sign) {
    std::vector<std::vector<double>> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % n];
        const double fa = sign * (a[axis] - c);
        const double fb = sign * (b[axis] - c);
        if (fa >= 0.0) out.push_back(a);
        if ((fa >= 0.0) != (fb >= 0.0)) {
            const double t = fa / (fa - fb);
            std::vector<double> p(3);
            for (std::size_t j = 0; j < 3; ++j) p[j] = a[j] + t * (b[j] - a[j]);
            out.push_back(std::move(p));
        }
    }
    return out;
}

struct SvgMapper {
    double margin = 50.0;
    double side = 420.0;

    std::array<double, 2> operator()(const std::vector<double>& y) const {
        const auto p = ternary_project(y);
        return {margin + side * p[0], margin + side * kRoot3Half - side * p[1] + 40.0};
    }
    double width() const { return margin * 2 + side; }
    double height() const { return margin * 2 + side * kRoot3Half + 40.0; }
};

void write_polygon(std::ofstream& out, const SvgMapper& map,
                   const std::vector<std::vector<double>>& poly, const char* style) {
    if (poly.size() < 3) return;
    out << "<polygon points=\"";
    for (const auto& v : poly) {
        const auto p = map(v);
        out << p[0] << "," << p[1] << " ";
    }
    out << "\" style=\"" << style << "\"/>\n";
}

}  // namespace

std::array<double, 2> ternary_project(const std::vector<double>& y) {
    if (y.size() != 3) {
        throw DomainError("ternary_project: three components required");
    }
    return {y[1] + 0.5 * y[2], kRoot3Half * y[2]};
}

std::vector<std::vector<double>> clip_simplex_to_box(const BoxRegion& box) {
    if (box.intervals.size() != 3) {
        throw DomainError("clip_simplex_to_box: three components required");
    }
    std::vector<std::vector<double>> poly = {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
    for (std::size_t j = 0; j < 3 && !poly.empty(); ++j) {
        poly = clip_halfplane(poly, j, box.intervals[j].lo, 1.0);
        if (!poly.empty()) poly = clip_halfplane(poly, j, box.intervals[j].hi, -1.0);
    }
    return poly;
}

std::vector<std::vector<double>> floor_triangle_vertices(const std::vector<double>& tau) {
    if (tau.size() != 3) {
        throw DomainError("floor_triangle_vertices: three components required");
    }
    std::vector<std::vector<double>> v;
    for (std::size_t i = 0; i < 3; ++i) {
        std::vector<double> y(tau);
        y[i] = 1.0 - tau[(i + 1) % 3] - tau[(i + 2) % 3];
        v.push_back(std::move(y));
    }
    return v;
}

void emit_ternary_plot(const PredictionRegion& region, const CompositionalVector& mean,
                       const std::optional<CompositionalVector>& truth,
                       const std::string& path) {
    if (mean.dim() != 3) {
        throw DomainError("emit_ternary_plot: three components required");
    }
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");

    const SvgMapper map;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << map.width()
        << "\" height=\"" << map.height() << "\" viewBox=\"0 0 " << map.width() << " "
        << map.height() << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    const std::vector<std::vector<double>> simplex = {
        {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
    write_polygon(out, map, simplex, "fill:none;stroke:black;stroke-width:1.5");
    const char* corner_labels[3] = {"y1", "y2", "y3"};
    const double label_off[3][2] = {{-22.0, 14.0}, {8.0, 14.0}, {-8.0, -10.0}};
    for (std::size_t i = 0; i < 3; ++i) {
        const auto p = map(simplex[i]);
        out << "<text x=\"" << p[0] + label_off[i][0] << "\" y=\"" << p[1] + label_off[i][1]
            << "\" font-family=\"sans-serif\" font-size=\"14\">" << corner_labels[i]
            << "</text>\n";
    }

    std::string region_label;
    std::visit(
        [&](const auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, BoxRegion>) {
                region_label = "interval box";
                write_polygon(out, map, clip_simplex_to_box(r),
                              "fill:rgba(70,130,180,0.25);stroke:steelblue;stroke-width:1.5");
            } else if constexpr (std::is_same_v<T, FloorPolytope>) {
                region_label = "floor triangle";
                write_polygon(out, map, floor_triangle_vertices(r.tau),
                              "fill:rgba(178,34,34,0.25);stroke:firebrick;stroke-width:1.5");
            } else {
                region_label = "level-set grid";
                write_polygon(out, map, floor_triangle_vertices(r.floor.tau),
                              "fill:none;stroke:firebrick;stroke-width:1;stroke-dasharray:4 3");
                for (const auto& pt : r.accepted) {
                    const auto p = map(pt.parts());
                    out << "<circle cx=\"" << p[0] << "\" cy=\"" << p[1]
                        << "\" r=\"1.4\" fill=\"rgba(178,34,34,0.6)\"/>\n";
                }
            }
        },
        region);

    const auto pm = map(mean.parts());
    out << "<circle cx=\"" << pm[0] << "\" cy=\"" << pm[1]
        << "\" r=\"6\" fill=\"gold\" stroke=\"black\" stroke-width=\"1\"/>\n";
    if (truth) {
        if (truth->dim() != 3) {
            throw DomainError("emit_ternary_plot: three components required");
        }
        const auto pt = map(truth->parts());
        out << "<path d=\"M " << pt[0] << " " << pt[1] - 7 << " L " << pt[0] + 7 << " "
            << pt[1] << " L " << pt[0] << " " << pt[1] + 7 << " L " << pt[0] - 7 << " "
            << pt[1] << " Z\" fill=\"red\" stroke=\"black\" stroke-width=\"1\"/>\n";
    }

    // Legend.
    const double lx = map.width() - 190.0, ly = 24.0;
    out << "<circle cx=\"" << lx << "\" cy=\"" << ly
        << "\" r=\"6\" fill=\"gold\" stroke=\"black\"/>"
        << "<text x=\"" << lx + 12 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"13\">estimated mean</text>\n";
    if (truth) {
        out << "<path d=\"M " << lx << " " << ly + 15 << " L " << lx + 6 << " " << ly + 21
            << " L " << lx << " " << ly + 27 << " L " << lx - 6 << " " << ly + 21
            << " Z\" fill=\"red\" stroke=\"black\"/>"
            << "<text x=\"" << lx + 12 << "\" y=\"" << ly + 25
            << "\" font-family=\"sans-serif\" font-size=\"13\">true test point</text>\n";
    }
    out << "<text x=\"" << lx + 12 << "\" y=\"" << ly + 46
        << "\" font-family=\"sans-serif\" font-size=\"13\">region: " << region_label
        << "</text>\n";
    out << "</svg>\n";
}

}  // namespace simplexconf
