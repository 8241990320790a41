#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "qss/adaptive.hpp"
#include "qss/error_budget.hpp"
#include "qss/estimators.hpp"
#include "qss/matrix.hpp"
#include "qss/resources.hpp"

namespace qss {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kVersion = "qss 1.0.0";

Json to_json(const ErrorBudget& budget);
Json to_json(const ResourceReport& report);
Json to_json(const EstimateReport& report);
Json to_json(const AdaptiveTrace& trace);
Json to_json(const SpectrumInfo& spectrum, bool with_eigenvalues);
Json matrix_summary(const SparseHermitianMatrix& a);

/// Pretty-printed report text with a trailing newline.
std::string render(const Json& report);

/// Copy of the report with the timestamp field blanked, for golden comparisons.
Json mask_timestamp(Json report);

/// CSV columns of a cost sweep.
inline constexpr const char* kCostCsvHeader =
    "epsilon,n,s,m,N,eta,tau,queries,two_qubit_gates,T_U,N_qpe_cost,total_steps,T_LgD";

struct CostSweepRow {
    double epsilon = 0.0;  // NaN when the row is not epsilon-driven
    ResourceReport report;
};

void write_cost_csv(std::span<const CostSweepRow> rows, std::ostream& out);

}  // namespace qss
