#ifndef CHANMOM_PIPELINE_HPP
#define CHANMOM_PIPELINE_HPP

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "chanmom/fitting.hpp"
#include "chanmom/moments.hpp"
#include "chanmom/types.hpp"

namespace chanmom {

struct PipelineConfig {
    /// Pre-computed instantaneous profiles (the realistic path).
    std::vector<MomentProfile> profiles;
    /// Alternative input: a snapshot ensemble plus the orders to compute.
    std::optional<SnapshotEnsemble> ensemble;
    std::vector<MomentOrder> orders;

    FitRange range{};
    CenterlinePolicy policy = CenterlinePolicy::CenterPoint;
    bool drop_nonpositive = false;

    /// Order limits: n <= 7 and m <= 7 for pure moments, n + m <= 6 mixed.
    int max_pure_order = 7;
    int max_mixed_order = 6;
    bool allow_order_override = false;

    /// Key/value pairs copied into the report (input names, hashes, flags).
    std::vector<std::pair<std::string, std::string>> provenance;
};

/// Per-order plot table: x2/h, deficit data, fitted value. Rows cover every
/// grid point inside the fit range.
struct PlotTable {
    MomentOrder order;
    std::vector<std::array<double, 3>> rows;
};

struct ReportBundle {
    FlowCase flow_case;
    FitRange range;
    std::vector<PowerLawFit> fits; // ascending order, all orders fitted
    ScalingExponents sigmas;
    PrefactorModel model;
    AnomalousScalingReport anomalous;
    std::vector<PlotTable> plots;
    std::vector<std::string> notes;
    std::vector<std::pair<std::string, std::string>> provenance;
};

/// Full pipeline: moments (if an ensemble is given) -> deficit -> free fits
/// of (1,0), (2,0), (0,1) -> sigma extraction -> constrained fits of every
/// order -> prefactor model from the five low orders -> diagnostics. Stage
/// failures propagate with the stage name and input identity prefixed.
ReportBundle run_pipeline(const PipelineConfig& config);

nlohmann::json report_to_json(const ReportBundle& report);

/// Writes report.json plus one CSV per order into plots_dir (all writes are
/// atomic). CSV columns: x2_over_h, deficit_data, deficit_fit.
void write_report(const ReportBundle& report,
                  const std::filesystem::path& json_path,
                  const std::filesystem::path& plots_dir);

} // namespace chanmom

#endif // CHANMOM_PIPELINE_HPP
