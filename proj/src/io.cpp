#include "simplexconf/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "simplexconf/errors.hpp"
#include "simplexconf/parallel.hpp"
#include "simplexconf/special_functions.hpp"

namespace simplexconf {

namespace {

constexpr double kShareClamp = 1e-6;

std::string fmt(double x, const char* spec = "%.6f") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, x);
    return buf;
}

std::string fmt_full(double x) { return fmt(x, "%.17g"); }

std::vector<std::string> split_line(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    for (char c : line) {
        if (c == sep) {
            out.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    out.push_back(field);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\"");
    std::size_t e = s.find_last_not_of(" \t\"");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field, std::size_t row, const std::string& col) {
    const std::string t = trim(field);
    if (t == "inf") return std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        const double v = std::stod(t, &pos);
        if (pos != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw ParseError("row " + std::to_string(row) + ", column '" + col +
                         "': non-numeric value '" + t + "'");
    }
}

struct ColumnRef {
    std::size_t index = 0;
    bool take_log = false;
    std::string name;
};

ColumnRef resolve_column(const std::vector<std::string>& header, const std::string& spec) {
    ColumnRef ref;
    std::string name = trim(spec);
    if (name.size() > 5 && name.substr(0, 4) == "log(" && name.back() == ')') {
        ref.take_log = true;
        name = trim(name.substr(4, name.size() - 5));
    }
    ref.name = name;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            ref.index = i;
            return ref;
        }
    }
    throw ParseError("missing column '" + name + "'");
}

std::vector<bool> padded_flags(const std::vector<bool>& flags, std::size_t n) {
    std::vector<bool> out(flags);
    out.resize(n, true);
    return out;
}

}  // namespace

DatasetSchema load_schema(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open schema file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("schema '" + path + "': " + e.what());
    }
    DatasetSchema schema;
    const auto read_names = [&](const char* key) {
        if (!doc.contains(key)) {
            throw ParseError("schema '" + path + "': missing '" + key + "'");
        }
        return doc.at(key).get<std::vector<std::string>>();
    };
    schema.response_columns = read_names("response_columns");
    schema.mean_covariate_columns = read_names("mean_covariate_columns");
    schema.precision_covariate_columns = read_names("precision_covariate_columns");
    const auto read_flags = [&](const char* key, std::size_t n) -> std::vector<bool> {
        if (!doc.contains(key)) return std::vector<bool>(n, true);
        const auto& v = doc.at(key);
        if (v.is_boolean()) return std::vector<bool>(n, v.get<bool>());
        return padded_flags(v.get<std::vector<bool>>(), n);
    };
    schema.standardize_mean = read_flags("standardize_mean", schema.mean_covariate_columns.size());
    schema.standardize_precision =
        read_flags("standardize_precision", schema.precision_covariate_columns.size());
    if (schema.response_columns.size() < 2) {
        throw ParseError("schema '" + path + "': need at least two response columns");
    }
    return schema;
}

DatasetSchema budget_italy_schema() {
    DatasetSchema schema;
    schema.response_columns = {"wfood", "whouse", "wmisc"};
    schema.mean_covariate_columns = {"log(totexp)", "size", "pfood", "phouse", "pmisc"};
    schema.precision_covariate_columns = schema.mean_covariate_columns;
    schema.standardize_mean.assign(5, true);
    schema.standardize_precision.assign(5, true);
    return schema;
}

LoadedDataset load_dataset(const std::string& path, const DatasetSchema& schema,
                           bool apply_standardization) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open data file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ParseError("'" + path + "': empty file");
    std::vector<std::string> header = split_line(line, ',');
    for (auto& h : header) h = trim(h);

    std::vector<ColumnRef> resp, mean_cols, phi_cols;
    for (const auto& c : schema.response_columns) resp.push_back(resolve_column(header, c));
    for (const auto& c : schema.mean_covariate_columns) {
        mean_cols.push_back(resolve_column(header, c));
    }
    for (const auto& c : schema.precision_covariate_columns) {
        phi_cols.push_back(resolve_column(header, c));
    }
    for (const auto& r : resp) {
        for (const auto& m : mean_cols) {
            if (m.name == r.name) {
                throw ParseError("column '" + r.name + "' used as both response and covariate");
            }
        }
        for (const auto& m : phi_cols) {
            if (m.name == r.name) {
                throw ParseError("column '" + r.name + "' used as both response and covariate");
            }
        }
    }

    LoadedDataset out;
    out.schema = schema;
    const std::size_t d = resp.size();
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> fields = split_line(line, ',');
        if (fields.size() < header.size()) {
            throw ParseError("row " + std::to_string(row_no) + ": expected " +
                             std::to_string(header.size()) + " fields");
        }
        std::vector<double> shares(d);
        double total = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            shares[j] = parse_double(fields[resp[j].index], row_no, resp[j].name);
            if (shares[j] < 0.0) {
                throw ParseError("row " + std::to_string(row_no) + ": negative share in '" +
                                 resp[j].name + "'");
            }
            total += shares[j];
        }
        if (total <= 0.0) {
            throw ParseError("row " + std::to_string(row_no) + ": all shares are zero");
        }
        for (double& s : shares) s /= total;
        double clamped_total = 0.0;
        for (double& s : shares) {
            s = std::clamp(s, kShareClamp, 1.0 - kShareClamp);
            clamped_total += s;
        }
        for (double& s : shares) s /= clamped_total;

        const auto read_covariates = [&](const std::vector<ColumnRef>& cols) {
            std::vector<double> v{1.0};
            for (const auto& c : cols) {
                double x = parse_double(fields[c.index], row_no, c.name);
                if (c.take_log) {
                    if (!(x > 0.0)) {
                        throw ParseError("row " + std::to_string(row_no) + ": log of '" +
                                         c.name + "' needs a positive value");
                    }
                    x = std::log(x);
                }
                v.push_back(x);
            }
            return v;
        };
        DesignRow row{read_covariates(mean_cols), read_covariates(phi_cols)};
        out.data.push_back(Observation{std::move(row), CompositionalVector(shares)});
    }
    if (out.data.empty()) throw ParseError("'" + path + "': no data rows");

    // Standardization over the full file; intercept entries pass through.
    const auto build_scaling = [&](bool precision_block, const std::vector<bool>& flags) {
        const std::size_t p = 1 + flags.size();
        std::vector<CovariateScaling> scaling(p);
        const double n = static_cast<double>(out.data.size());
        for (std::size_t k = 1; k < p; ++k) {
            if (!flags[k - 1]) continue;
            double mean = 0.0, var = 0.0;
            for (const auto& obs : out.data) {
                mean += precision_block ? obs.x.precision_covariates[k]
                                        : obs.x.mean_covariates[k];
            }
            mean /= n;
            for (const auto& obs : out.data) {
                const double v = precision_block ? obs.x.precision_covariates[k]
                                                 : obs.x.mean_covariates[k];
                var += (v - mean) * (v - mean);
            }
            var /= std::max(1.0, n - 1.0);
            if (var <= 0.0) {
                throw ParseError("constant covariate cannot be standardized (block " +
                                 std::string(precision_block ? "precision" : "mean") +
                                 ", position " + std::to_string(k) + ")");
            }
            scaling[k] = CovariateScaling{true, mean, std::sqrt(var)};
        }
        return scaling;
    };
    out.standardization.mean_block = build_scaling(false, out.schema.standardize_mean);
    out.standardization.precision_block =
        build_scaling(true, out.schema.standardize_precision);
    if (apply_standardization) {
        for (auto& obs : out.data) {
            for (std::size_t k = 0; k < obs.x.mean_covariates.size(); ++k) {
                const auto& sc = out.standardization.mean_block[k];
                if (sc.standardize) {
                    obs.x.mean_covariates[k] = (obs.x.mean_covariates[k] - sc.mean) / sc.scale;
                }
            }
            for (std::size_t k = 0; k < obs.x.precision_covariates.size(); ++k) {
                const auto& sc = out.standardization.precision_block[k];
                if (sc.standardize) {
                    obs.x.precision_covariates[k] =
                        (obs.x.precision_covariates[k] - sc.mean) / sc.scale;
                }
            }
        }
    }
    return out;
}

namespace {

struct RepeatOutcome {
    bool failed = false;
    // Per method: coverage pct, individual pct, widths, seconds.
    std::vector<double> coverage;
    std::vector<std::vector<double>> individual;
    std::vector<std::vector<double>> widths;
    std::vector<double> seconds;
};

}  // namespace

std::vector<EvalSummary> run_application(const LoadedDataset& dataset,
                                         const RunConfig& config) {
    if (config.repeats < 1) throw ConfigError("run_application: repeats must be >= 1");
    const Dataset& data = dataset.data;
    const std::size_t d = data.front().y.dim();
    std::vector<RepeatOutcome> outcomes(static_cast<std::size_t>(config.repeats));

    parallel_for_index(static_cast<std::size_t>(config.repeats), [&](std::size_t r) {
        RepeatOutcome& out = outcomes[r];
        try {
            const SplitIndices split =
                split_data(data.size(), config.fractions, derive_seed(config.seed, r));
            Dataset train;
            train.reserve(split.train.size());
            for (std::size_t i : split.train) train.push_back(data[i]);
            const FittedModel model = fit_mle(train);

            for (Method method : config.methods) {
                const auto start = std::chrono::steady_clock::now();
                const bool density_score = method != Method::QR;
                std::vector<double> scores;
                scores.reserve(split.calibration.size());
                for (std::size_t i : split.calibration) {
                    const MeanPrecision mp = model.predict(data[i].x);
                    scores.push_back(density_score ? nll_score(data[i].y, mp)
                                                   : qr_score(data[i].y, mp));
                }
                const ConformalQuantile q = conformal_quantile(std::move(scores), config.alpha);

                double covered = 0.0;
                std::vector<double> widths(d, 0.0), individual(d, 0.0);
                for (std::size_t i : split.test) {
                    const MeanPrecision mp = model.predict(data[i].x);
                    PredictionRegion region;
                    switch (method) {
                        case Method::QR: region = qr_region(mp, q); break;
                        case Method::HdrFloor: region = floor_polytope(mp, q.value); break;
                        case Method::HdrFloorGrid:
                            region = grid_region(mp, q.value, config.grid_m);
                            break;
                        case Method::SimplexGrid:
                            region = simplex_grid_region(mp, q.value, config.grid_m);
                            break;
                    }
                    covered += region_contains(region, data[i].y) ? 1.0 : 0.0;
                    const std::vector<double> w = region_widths(region);
                    for (std::size_t j = 0; j < d; ++j) widths[j] += w[j];
                    if (method == Method::QR) {
                        const auto& box = std::get<BoxRegion>(region);
                        for (std::size_t j = 0; j < d; ++j) {
                            if (data[i].y[j] >= box.intervals[j].lo &&
                                data[i].y[j] <= box.intervals[j].hi) {
                                individual[j] += 1.0;
                            }
                        }
                    }
                }
                const double n_test = static_cast<double>(split.test.size());
                out.coverage.push_back(100.0 * covered / n_test);
                for (double& w : widths) w /= n_test;
                for (double& c : individual) c = 100.0 * c / n_test;
                out.widths.push_back(std::move(widths));
                out.individual.push_back(std::move(individual));
                out.seconds.push_back(
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                        .count());
            }
        } catch (const FitError&) {
            out.failed = true;
        } catch (const NumericError&) {
            out.failed = true;
        }
    });

    std::size_t failures = 0;
    for (const auto& o : outcomes) failures += o.failed ? 1 : 0;
    if (failures == static_cast<std::size_t>(config.repeats)) {
        throw FitError("run_application: every repeat failed to fit");
    }
    const double n_ok = static_cast<double>(config.repeats) - static_cast<double>(failures);

    std::vector<EvalSummary> summaries;
    for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
        EvalSummary s;
        s.scenario = "application";
        s.method = config.methods[mi];
        s.failures = failures;
        s.mean_widths.assign(d, 0.0);
        if (config.methods[mi] == Method::QR) s.individual_coverage_pct.assign(d, 0.0);
        double seconds = 0.0;
        for (const auto& o : outcomes) {
            if (o.failed) continue;
            s.empirical_coverage_pct += o.coverage[mi];
            seconds += o.seconds[mi];
            for (std::size_t j = 0; j < d; ++j) s.mean_widths[j] += o.widths[mi][j];
            if (!s.individual_coverage_pct.empty()) {
                for (std::size_t j = 0; j < d; ++j) {
                    s.individual_coverage_pct[j] += o.individual[mi][j];
                }
            }
        }
        s.empirical_coverage_pct /= n_ok;
        for (double& w : s.mean_widths) w /= n_ok;
        for (double& c : s.individual_coverage_pct) c /= n_ok;
        s.mean_time_seconds = config.timing ? seconds / n_ok : 0.0;
        summaries.push_back(std::move(s));
    }
    return summaries;
}

void save_model(const FittedModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write model file '" + path + "'");
    const Coefficients& c = model.coefficients;
    out << "simplexconf-model v1\n";
    out << "D " << model.D << "\n";
    out << "beta " << c.beta.size() << " " << c.n_mean_covariates() << "\n";
    for (const auto& row : c.beta) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            out << (k ? " " : "") << fmt_full(row[k]);
        }
        out << "\n";
    }
    out << "gamma " << c.gamma.size() << "\n";
    for (std::size_t k = 0; k < c.gamma.size(); ++k) {
        out << (k ? " " : "") << fmt_full(c.gamma[k]);
    }
    out << "\n";
    const auto write_scaling = [&](const char* key, const std::vector<CovariateScaling>& sc) {
        out << key << " " << sc.size() << "\n";
        for (const auto& s : sc) {
            out << (s.standardize ? 1 : 0) << " " << fmt_full(s.mean) << " "
                << fmt_full(s.scale) << "\n";
        }
    };
    const Standardization std_info =
        model.standardization.value_or(Standardization{});
    write_scaling("std_mean", std_info.mean_block);
    write_scaling("std_phi", std_info.precision_block);
    out << "convergence " << (model.convergence.converged ? 1 : 0) << " "
        << model.convergence.iterations << " " << fmt_full(model.convergence.gradient_norm)
        << " " << fmt_full(model.convergence.nll) << "\n";
}

FittedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open model file '" + path + "'");
    std::string word;
    std::string version_tag, version;
    in >> version_tag >> version;
    if (version_tag != "simplexconf-model") {
        throw ParseError("model file '" + path + "': not a model document");
    }
    if (version != "v1") {
        throw ParseError("model file '" + path + "': unsupported version '" + version + "'");
    }
    FittedModel model;
    const auto expect_key = [&](const char* key) {
        if (!(in >> word) || word != key) {
            throw ParseError("model file '" + path + "': missing '" + key + "' block");
        }
    };
    expect_key("D");
    in >> model.D;
    expect_key("beta");
    std::size_t rows = 0, p = 0;
    in >> rows >> p;
    if (!in || rows + 1 != model.D) {
        throw ParseError("model file '" + path + "': malformed beta block");
    }
    model.coefficients.beta.assign(rows, std::vector<double>(p));
    for (auto& row : model.coefficients.beta) {
        for (auto& v : row) {
            if (!(in >> v)) throw ParseError("model file '" + path + "': malformed beta block");
        }
    }
    expect_key("gamma");
    std::size_t p_phi = 0;
    in >> p_phi;
    model.coefficients.gamma.resize(p_phi);
    for (auto& v : model.coefficients.gamma) {
        if (!(in >> v)) throw ParseError("model file '" + path + "': malformed gamma block");
    }
    Standardization std_info;
    const auto read_scaling = [&](const char* key, std::vector<CovariateScaling>& sc) {
        expect_key(key);
        std::size_t n = 0;
        in >> n;
        sc.resize(n);
        for (auto& s : sc) {
            int flag = 0;
            if (!(in >> flag >> s.mean >> s.scale)) {
                throw ParseError("model file '" + path + "': malformed '" + key + "' block");
            }
            s.standardize = flag != 0;
        }
    };
    read_scaling("std_mean", std_info.mean_block);
    read_scaling("std_phi", std_info.precision_block);
    if (!std_info.empty()) model.standardization = std_info;
    expect_key("convergence");
    int converged = 0;
    in >> converged >> model.convergence.iterations >> model.convergence.gradient_norm >>
        model.convergence.nll;
    if (!in) throw ParseError("model file '" + path + "': malformed convergence block");
    model.convergence.converged = converged != 0;
    return model;
}

void write_summary_csv(const std::string& path, const std::vector<EvalSummary>& summaries) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << "scenario,method,coverage_pct,cov_y1,cov_y2,cov_y3,"
           "width_y1,width_y2,width_y3,mean_time_s,failures\n";
    for (const auto& s : summaries) {
        if (s.mean_widths.size() != 3) {
            throw ConfigError("write_summary_csv: three-component summaries only");
        }
        out << s.scenario << "," << method_name(s.method) << ","
            << fmt(s.empirical_coverage_pct);
        for (std::size_t j = 0; j < 3; ++j) {
            out << ",";
            if (j < s.individual_coverage_pct.size()) {
                out << fmt(s.individual_coverage_pct[j]);
            }
        }
        for (std::size_t j = 0; j < 3; ++j) out << "," << fmt(s.mean_widths[j]);
        out << "," << fmt(s.mean_time_seconds) << "," << s.failures << "\n";
    }
}

std::vector<EvalSummary> read_summary_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ParseError("'" + path + "': empty file");
    std::vector<EvalSummary> out;
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (trim(line).empty()) continue;
        const auto f = split_line(line, ',');
        if (f.size() != 11) {
            throw ParseError("'" + path + "' row " + std::to_string(row_no) +
                             ": expected 11 fields");
        }
        EvalSummary s;
        s.scenario = f[0];
        s.method = parse_method(f[1]);
        s.empirical_coverage_pct = parse_double(f[2], row_no, "coverage_pct");
        for (std::size_t j = 0; j < 3; ++j) {
            if (!trim(f[3 + j]).empty()) {
                s.individual_coverage_pct.push_back(
                    parse_double(f[3 + j], row_no, "cov_y"));
            }
        }
        for (std::size_t j = 0; j < 3; ++j) {
            s.mean_widths.push_back(parse_double(f[6 + j], row_no, "width_y"));
        }
        s.mean_time_seconds = parse_double(f[9], row_no, "mean_time_s");
        s.failures = static_cast<std::size_t>(parse_double(f[10], row_no, "failures"));
        out.push_back(std::move(s));
    }
    return out;
}

void write_comparison_csv(const std::string& path, const std::vector<EvalSummary>& summaries,
                          std::size_t D) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << "scenario,method,coverage_pct";
    for (std::size_t j = 1; j <= D; ++j) out << ",width_y" << j;
    out << ",mean_time_s,failures\n";
    for (const auto& s : summaries) {
        out << s.scenario << "," << method_name(s.method) << ","
            << fmt(s.empirical_coverage_pct);
        for (std::size_t j = 0; j < D; ++j) out << "," << fmt(s.mean_widths[j]);
        out << "," << fmt(s.mean_time_seconds) << "," << s.failures << "\n";
    }
}

namespace {

void write_vec(std::ostream& out, const std::vector<double>& v, std::size_t D) {
    for (std::size_t j = 0; j < D; ++j) {
        out << ",";
        if (j < v.size()) out << fmt_full(v[j]);
    }
}

}  // namespace

void write_region_csv(const std::string& path, const std::vector<RegionRecord>& records) {
    if (records.empty()) throw ConfigError("write_region_csv: no records");
    const std::size_t D = records.front().D;
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << "method,D,alpha,q";
    const auto group = [&](const char* stem) {
        for (std::size_t j = 1; j <= D; ++j) out << "," << stem << "_" << j;
    };
    group("mu");
    group("truth");
    group("lo");
    group("hi");
    group("tau");
    group("w");
    out << ",t_star,grid_m";
    group("width");
    out << ",contains_truth\n";
    for (const auto& r : records) {
        if (r.D != D) throw ConfigError("write_region_csv: mixed dimensions");
        out << method_name(r.method) << "," << r.D << "," << fmt_full(r.alpha) << ","
            << (std::isinf(r.q) ? "inf" : fmt_full(r.q));
        write_vec(out, r.mu, D);
        write_vec(out, r.truth, D);
        write_vec(out, r.lo, D);
        write_vec(out, r.hi, D);
        write_vec(out, r.tau, D);
        write_vec(out, r.w, D);
        out << ",";
        if (r.method != Method::QR) out << fmt_full(r.t_star);
        out << ",";
        if (r.grid_m > 0) out << r.grid_m;
        write_vec(out, r.widths, D);
        out << ",";
        if (r.contains_truth.has_value()) out << (*r.contains_truth ? 1 : 0);
        out << "\n";
    }
}

std::vector<RegionRecord> read_region_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ParseError("'" + path + "': empty file");
    const auto header = split_line(line, ',');
    if (header.size() < 7 || header[0] != "method" || header[1] != "D") {
        throw ParseError("'" + path + "': not a region file");
    }
    std::vector<RegionRecord> out;
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (trim(line).empty()) continue;
        const auto f = split_line(line, ',');
        RegionRecord r;
        r.method = parse_method(f[0]);
        r.D = static_cast<std::size_t>(parse_double(f[1], row_no, "D"));
        const std::size_t D = r.D;
        if (f.size() != 4 + 7 * D + 3) {
            throw ParseError("'" + path + "' row " + std::to_string(row_no) +
                             ": wrong field count for D=" + std::to_string(D));
        }
        r.alpha = parse_double(f[2], row_no, "alpha");
        r.q = parse_double(f[3], row_no, "q");
        const auto grab = [&](std::size_t base) {
            std::vector<double> v;
            for (std::size_t j = 0; j < D; ++j) {
                if (!trim(f[base + j]).empty()) {
                    v.push_back(parse_double(f[base + j], row_no, "field"));
                }
            }
            return v;
        };
        std::size_t base = 4;
        r.mu = grab(base); base += D;
        r.truth = grab(base); base += D;
        r.lo = grab(base); base += D;
        r.hi = grab(base); base += D;
        r.tau = grab(base); base += D;
        r.w = grab(base); base += D;
        if (!trim(f[base]).empty()) r.t_star = parse_double(f[base], row_no, "t_star");
        ++base;
        if (!trim(f[base]).empty()) {
            r.grid_m = static_cast<int>(parse_double(f[base], row_no, "grid_m"));
        }
        ++base;
        r.widths = grab(base); base += D;
        if (!trim(f[base]).empty()) {
            r.contains_truth = parse_double(f[base], row_no, "contains_truth") != 0.0;
        }
        out.push_back(std::move(r));
    }
    return out;
}

RegionRecord make_region_record(Method method, const MeanPrecision& mp,
                                const ConformalQuantile& q, int grid_m,
                                const CompositionalVector* truth) {
    RegionRecord r;
    r.method = method;
    r.D = mp.dim();
    r.alpha = q.alpha;
    r.q = q.value;
    r.mu = mp.mu;
    if (truth) r.truth = truth->parts();

    PredictionRegion region;
    switch (method) {
        case Method::QR: {
            BoxRegion box = qr_region(mp, q);
            for (const auto& iv : box.intervals) {
                r.lo.push_back(iv.lo);
                r.hi.push_back(iv.hi);
            }
            region = std::move(box);
            break;
        }
        case Method::HdrFloor: {
            FloorPolytope poly = floor_polytope(mp, q.value);
            r.tau = poly.tau;
            r.w = poly.level.w;
            r.t_star = poly.level.t_star;
            region = std::move(poly);
            break;
        }
        case Method::HdrFloorGrid:
        case Method::SimplexGrid: {
            LevelSetGrid grid = method == Method::HdrFloorGrid
                                    ? grid_region(mp, q.value, grid_m)
                                    : simplex_grid_region(mp, q.value, grid_m);
            r.tau = grid.floor.tau;
            r.w = grid.floor.level.w;
            r.t_star = grid.floor.level.t_star;
            r.grid_m = grid_m;
            region = std::move(grid);
            break;
        }
    }
    r.widths = region_widths(region);
    if (truth) r.contains_truth = region_contains(region, *truth);
    return r;
}

PredictionRegion region_from_record(const RegionRecord& record) {
    switch (record.method) {
        case Method::QR: {
            BoxRegion box;
            if (record.lo.size() != record.D || record.hi.size() != record.D) {
                throw ParseError("region record: QR row lacks interval endpoints");
            }
            for (std::size_t j = 0; j < record.D; ++j) {
                box.intervals.push_back(Interval{record.lo[j], record.hi[j]});
            }
            return box;
        }
        case Method::HdrFloor:
        case Method::HdrFloorGrid:
        case Method::SimplexGrid: {
            if (record.tau.size() != record.D || record.w.size() != record.D) {
                throw ParseError("region record: HDR row lacks floor/level data");
            }
            FloorPolytope poly;
            poly.tau = record.tau;
            poly.level.w = record.w;
            poly.level.t_star = record.t_star;
            poly.level.q = record.q;
            for (double w : record.w) poly.level.W += w;
            if (record.method == Method::HdrFloor) return poly;
            LevelSetGrid grid;
            grid.floor = poly;
            grid.points_per_axis = record.grid_m;
            const LevelData& level = grid.floor.level;
            for_each_grid_point(grid.floor, record.grid_m,
                                [&](const std::vector<double>& p) {
                                    double s = 0.0;
                                    for (std::size_t j = 0; j < level.w.size(); ++j) {
                                        s += level.w[j] * std::log(p[j]);
                                    }
                                    if (s >= level.t_star) grid.accepted.emplace_back(p);
                                });
            return grid;
        }
    }
    throw ConfigError("region_from_record: unknown method");
}

}  // namespace simplexconf
