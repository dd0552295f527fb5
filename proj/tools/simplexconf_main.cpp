// Command-line front end: fit / predict / simulate / compare-grid / apply / plot.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "simplexconf/errors.hpp"
#include "simplexconf/io.hpp"
#include "simplexconf/ternary.hpp"

namespace {

using namespace simplexconf;

std::vector<Method> parse_method_list(const std::string& list) {
    std::vector<Method> methods;
    std::string item;
    for (char c : list + ",") {
        if (c == ',') {
            if (!item.empty()) methods.push_back(parse_method(item));
            item.clear();
        } else if (c != ' ') {
            item += c;
        }
    }
    if (methods.empty()) throw ConfigError("empty method list");
    return methods;
}

DatasetSchema schema_from_option(const std::string& schema_path) {
    return schema_path.empty() ? budget_italy_schema() : load_schema(schema_path);
}

int run(int argc, char** argv) {
    CLI::App app{"Conformal prediction regions for compositional responses"};
    app.require_subcommand(1);

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "Fit a Dirichlet regression on a dataset");
    std::string fit_data, fit_schema, fit_out;
    fit_cmd->add_option("--data", fit_data, "input CSV")->required();
    fit_cmd->add_option("--schema", fit_schema, "schema JSON (default: budget shares)");
    fit_cmd->add_option("--out", fit_out, "output model file")->required();

    // predict
    auto* pred_cmd = app.add_subcommand(
        "predict", "Calibrate on a dataset and emit prediction regions");
    std::string pred_model, pred_data, pred_points, pred_schema, pred_method = "qr",
                pred_out;
    double pred_alpha = 0.1;
    int pred_grid_m = 100;
    pred_cmd->add_option("--model", pred_model, "model file")->required();
    pred_cmd->add_option("--data", pred_data, "calibration CSV (with responses)")->required();
    pred_cmd->add_option("--points", pred_points, "rows to predict (default: --data)");
    pred_cmd->add_option("--schema", pred_schema, "schema JSON");
    pred_cmd->add_option("--method", pred_method, "qr | hdr-floor | hdr-grid");
    pred_cmd->add_option("--alpha", pred_alpha, "miscoverage level");
    pred_cmd->add_option("--grid-m", pred_grid_m, "grid points per axis");
    pred_cmd->add_option("--out", pred_out, "output region CSV")->required();

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo coverage/width study");
    std::string sim_scenario = "1a", sim_methods = "qr,hdr-floor,hdr-grid", sim_out;
    int sim_iters = 1000, sim_grid_m = 100;
    double sim_alpha = 0.1;
    std::uint64_t sim_seed = 1;
    bool sim_timing = false;
    sim_cmd->add_option("--scenario", sim_scenario, "scenario id 1a..5b");
    sim_cmd->add_option("--iters", sim_iters, "Monte Carlo iterations");
    sim_cmd->add_option("--alpha", sim_alpha, "miscoverage level");
    sim_cmd->add_option("--seed", sim_seed, "master seed");
    sim_cmd->add_option("--methods", sim_methods, "comma list: qr,hdr-floor,hdr-grid");
    sim_cmd->add_option("--grid-m", sim_grid_m, "grid points per axis");
    sim_cmd->add_flag("--timing", sim_timing,
                      "measure calibrate+predict wall time (non-deterministic output)");
    sim_cmd->add_option("--out", sim_out, "output CSV")->required();

    // compare-grid
    auto* cmp_cmd = app.add_subcommand(
        "compare-grid", "HDR-floor grid versus full-simplex grid on one scenario");
    std::string cmp_scenario = "1a", cmp_out;
    int cmp_dims = 3, cmp_m_hdr = 100, cmp_m_full = 200, cmp_iters = 100;
    double cmp_alpha = 0.1;
    std::uint64_t cmp_seed = 1;
    bool cmp_no_timing = false;
    std::optional<double> cmp_gamma1;
    cmp_cmd->add_option("--scenario", cmp_scenario, "scenario id 1a..5b");
    cmp_cmd->add_option("--dims", cmp_dims, "number of parts (3 or 4)")
        ->check(CLI::IsMember({3, 4}));
    cmp_cmd->add_option("--m-hdr", cmp_m_hdr, "points per axis, HDR grid");
    cmp_cmd->add_option("--m-full", cmp_m_full, "points per axis, full simplex grid");
    cmp_cmd->add_option("--iters", cmp_iters, "Monte Carlo iterations");
    cmp_cmd->add_option("--alpha", cmp_alpha, "miscoverage level");
    cmp_cmd->add_option("--seed", cmp_seed, "master seed");
    cmp_cmd->add_option("--gamma1", cmp_gamma1, "override the precision intercept");
    cmp_cmd->add_flag("--no-timing", cmp_no_timing, "suppress wall-time measurement");
    cmp_cmd->add_option("--out", cmp_out, "output CSV")->required();

    // apply
    auto* app_cmd = app.add_subcommand("apply", "Repeated-split evaluation on a dataset");
    std::string app_data, app_schema, app_methods = "qr,hdr-floor,hdr-grid", app_out;
    int app_repeats = 10, app_grid_m = 100;
    double app_alpha = 0.1;
    std::uint64_t app_seed = 1;
    bool app_timing = false;
    app_cmd->add_option("--data", app_data, "input CSV")->required();
    app_cmd->add_option("--schema", app_schema, "schema JSON (default: budget shares)");
    app_cmd->add_option("--repeats", app_repeats, "number of repeated splits");
    app_cmd->add_option("--alpha", app_alpha, "miscoverage level");
    app_cmd->add_option("--seed", app_seed, "master seed");
    app_cmd->add_option("--methods", app_methods, "comma list");
    app_cmd->add_option("--grid-m", app_grid_m, "grid points per axis");
    app_cmd->add_flag("--timing", app_timing, "measure wall time");
    app_cmd->add_option("--out", app_out, "output CSV")->required();

    // plot
    auto* plot_cmd = app.add_subcommand("plot", "Ternary SVG for one region row");
    std::string plot_region, plot_out;
    std::size_t plot_row = 0;
    plot_cmd->add_option("--region", plot_region, "region CSV from `predict`")->required();
    plot_cmd->add_option("--row", plot_row, "row index (default 0)");
    plot_cmd->add_option("--out", plot_out, "output SVG")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    if (fit_cmd->parsed()) {
        const LoadedDataset ds = load_dataset(fit_data, schema_from_option(fit_schema));
        FittedModel model = fit_mle(ds.data);
        model.standardization = ds.standardization;
        save_model(model, fit_out);
        std::cout << "fitted " << ds.data.size() << " rows, D=" << model.D
                  << ", nll=" << model.convergence.nll
                  << ", iterations=" << model.convergence.iterations << "\n";
    } else if (pred_cmd->parsed()) {
        const FittedModel model = load_model(pred_model);
        const DatasetSchema schema = schema_from_option(pred_schema);
        const LoadedDataset cal = load_dataset(pred_data, schema, false);
        const Method method = parse_method(pred_method);
        const bool density_score = method != Method::QR;
        std::vector<double> scores;
        scores.reserve(cal.data.size());
        for (const auto& obs : cal.data) {
            const MeanPrecision mp = model.predict_raw(obs.x);
            scores.push_back(density_score ? nll_score(obs.y, mp) : qr_score(obs.y, mp));
        }
        const ConformalQuantile q = conformal_quantile(std::move(scores), pred_alpha);
        const LoadedDataset pts =
            pred_points.empty() ? cal : load_dataset(pred_points, schema, false);
        std::vector<RegionRecord> records;
        records.reserve(pts.data.size());
        for (const auto& obs : pts.data) {
            const MeanPrecision mp = model.predict_raw(obs.x);
            records.push_back(make_region_record(method, mp, q, pred_grid_m, &obs.y));
        }
        write_region_csv(pred_out, records);
        std::cout << "wrote " << records.size() << " regions to " << pred_out << "\n";
    } else if (sim_cmd->parsed()) {
        ScenarioSpec spec = scenario_spec(sim_scenario);
        spec.seed = sim_seed;
        McOptions options;
        options.grid_m = sim_grid_m;
        options.timing = sim_timing;
        const auto summaries = run_monte_carlo(spec, parse_method_list(sim_methods),
                                               sim_iters, sim_alpha, options);
        write_summary_csv(sim_out, summaries);
        std::cout << "wrote " << summaries.size() << " summaries to " << sim_out << "\n";
    } else if (cmp_cmd->parsed()) {
        ScenarioSpec spec = scenario_spec(cmp_scenario, static_cast<std::size_t>(cmp_dims),
                                          cmp_gamma1);
        spec.seed = cmp_seed;
        const auto summaries = compare_hdr_vs_full(spec, cmp_iters, cmp_alpha, cmp_m_hdr,
                                                   cmp_m_full, !cmp_no_timing);
        write_comparison_csv(cmp_out, summaries, spec.D);
        std::cout << "wrote " << summaries.size() << " summaries to " << cmp_out << "\n";
    } else if (app_cmd->parsed()) {
        const LoadedDataset ds = load_dataset(app_data, schema_from_option(app_schema));
        RunConfig config;
        config.alpha = app_alpha;
        config.repeats = app_repeats;
        config.seed = app_seed;
        config.methods = parse_method_list(app_methods);
        config.grid_m = app_grid_m;
        config.timing = app_timing;
        const auto summaries = run_application(ds, config);
        write_summary_csv(app_out, summaries);
        std::cout << "wrote " << summaries.size() << " summaries to " << app_out << "\n";
    } else if (plot_cmd->parsed()) {
        const auto records = read_region_csv(plot_region);
        if (plot_row >= records.size()) {
            throw ConfigError("plot: row " + std::to_string(plot_row) + " out of range (" +
                              std::to_string(records.size()) + " rows)");
        }
        const RegionRecord& rec = records[plot_row];
        if (rec.D != 3) throw ConfigError("plot: three-component regions only");
        const PredictionRegion region = region_from_record(rec);
        const CompositionalVector mean(rec.mu);
        std::optional<CompositionalVector> truth;
        if (rec.truth.size() == 3) truth = CompositionalVector(rec.truth);
        emit_ternary_plot(region, mean, truth, plot_out);
        std::cout << "wrote " << plot_out << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const FitError& e) {
        std::cerr << "fit error: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
