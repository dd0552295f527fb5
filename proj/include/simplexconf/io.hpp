#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "simplexconf/regression.hpp"
#include "simplexconf/simulation.hpp"

namespace simplexconf {

// Column mapping for a delimited dataset. Covariate names may be wrapped as
// "log(col)" to ingest the log of a column. The standardize flags align
// with the covariate column lists; a shorter list is padded with `true`.
struct DatasetSchema {
    std::vector<std::string> response_columns;
    std::vector<std::string> mean_covariate_columns;
    std::vector<std::string> precision_covariate_columns;
    std::vector<bool> standardize_mean;
    std::vector<bool> standardize_precision;
};

DatasetSchema load_schema(const std::string& path);

// Household budget-shares schema used by the bundled application configs.
DatasetSchema budget_italy_schema();

struct LoadedDataset {
    Dataset data;  // covariates already standardized when requested
    Standardization standardization;
    DatasetSchema schema;
};

// Parses a header-row CSV, renormalizes responses onto the open simplex
// (clamping into [1e-6, 1-1e-6] first), prepends intercepts and applies the
// schema's standardization. With apply_standardization=false covariates are
// left raw (used when predicting through a stored model).
LoadedDataset load_dataset(const std::string& path, const DatasetSchema& schema,
                           bool apply_standardization = true);

struct RunConfig {
    double alpha = 0.1;
    SplitFractions fractions{0.7, 0.2, 0.1};
    int repeats = 10;
    std::uint64_t seed = 0;
    std::vector<Method> methods{Method::QR, Method::HdrFloor, Method::HdrFloorGrid};
    int grid_m = 100;
    bool timing = false;
};

// Repeated-split evaluation on a real dataset: per repeat, split, fit on
// train, calibrate on calibration, evaluate every test point; averages the
// per-repeat summaries.
std::vector<EvalSummary> run_application(const LoadedDataset& dataset,
                                         const RunConfig& config);

void save_model(const FittedModel& model, const std::string& path);
FittedModel load_model(const std::string& path);

// Summary CSV (three-component schema):
// scenario,method,coverage_pct,cov_y1..3,width_y1..3,mean_time_s,failures
void write_summary_csv(const std::string& path, const std::vector<EvalSummary>& summaries);
std::vector<EvalSummary> read_summary_csv(const std::string& path);

// Grid-comparison CSV with one width column per component (D = 3 or 4).
void write_comparison_csv(const std::string& path, const std::vector<EvalSummary>& summaries,
                          std::size_t D);

// One prediction region per row, wide format shared by `predict` and `plot`.
struct RegionRecord {
    Method method = Method::QR;
    std::size_t D = 0;
    double alpha = 0.0;
    double q = 0.0;
    std::vector<double> mu;
    std::vector<double> truth;  // empty when unknown
    std::vector<double> lo, hi;   // QR
    std::vector<double> tau, w;   // HDR methods
    double t_star = 0.0;
    int grid_m = 0;
    std::vector<double> widths;
    std::optional<bool> contains_truth;
};

void write_region_csv(const std::string& path, const std::vector<RegionRecord>& records);
std::vector<RegionRecord> read_region_csv(const std::string& path);

RegionRecord make_region_record(Method method, const MeanPrecision& mp,
                                const ConformalQuantile& q, int grid_m,
                                const CompositionalVector* truth);

// Rebuilds the prediction region described by a record (grids are
// regenerated from the stored floor/level data).
PredictionRegion region_from_record(const RegionRecord& record);

}  // namespace simplexconf
