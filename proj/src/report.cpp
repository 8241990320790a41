#include "qss/report.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace qss {
namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

template <typename T>
Json optional_json(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

}  // namespace

Json to_json(const ErrorBudget& b) {
    Json j;
    j["delta_alpha_mc"] = number_or_null(b.delta_alpha_mc);
    j["delta_alpha_qpe_main"] = number_or_null(b.delta_alpha_qpe_main);
    j["delta_alpha_qpe_appendix"] = number_or_null(b.delta_alpha_qpe_appendix);
    j["delta_alpha_err"] = number_or_null(b.delta_alpha_err);
    j["relative_error_bound"] = number_or_null(b.relative_error_bound);
    j["epsilon_target"] = optional_json(b.epsilon_target);
    j["N_mc"] = b.n_mc;
    j["m"] = b.m;
    return j;
}

Json to_json(const ResourceReport& r) {
    Json inputs;
    inputs["n"] = r.inputs.n;
    inputs["s"] = r.inputs.s;
    inputs["m"] = r.inputs.m;
    inputs["N"] = r.inputs.samples;
    inputs["eta"] = r.inputs.eta;
    inputs["a_max"] = optional_json(r.inputs.a_max);
    inputs["qram_cost"] = r.qram_cost;

    Json j;
    j["convention"] = std::string(kUnitConstantConvention);
    j["inputs"] = inputs;
    j["tau"] = r.tau;
    j["queries"] = r.queries;
    j["two_qubit_gates"] = r.two_qubit_gates;
    j["T_U"] = r.t_u;
    j["cost_U"] = r.cost_u;
    j["N_qpe_cost"] = r.n_qpe_cost;
    j["total_steps"] = r.total_steps;
    j["T_LgD"] = r.t_lgd;
    return j;
}

Json to_json(const EstimateReport& r) {
    Json j;
    j["function"] = r.function;
    j["estimate"] = number_or_null(r.estimate);
    j["n"] = r.n;
    j["N_used"] = r.n_used;
    j["m_used"] = r.m_used;
    j["sample_mu_f"] = number_or_null(r.sample_mu_f);
    j["sample_delta_f"] = number_or_null(r.sample_delta_f);
    j["error_budget"] = to_json(r.error_budget);
    j["seed"] = r.seed;
    j["mode"] = std::string(to_string(r.mode));
    return j;
}

Json to_json(const AdaptiveTrace& trace) {
    Json rounds = Json::array();
    for (const AdaptiveRound& r : trace.rounds) {
        Json j;
        j["pass"] = r.pass;
        j["m"] = r.m;
        j["N"] = r.n_samples;
        j["mu_hat"] = optional_json(r.mu_hat);
        j["delta_hat"] = optional_json(r.delta_hat);
        j["kappa_hat"] = optional_json(r.kappa_hat);
        j["N_required"] = optional_json(r.n_required);
        j["decision"] = std::string(to_string(r.decision));
        rounds.push_back(std::move(j));
    }
    return rounds;
}

Json to_json(const SpectrumInfo& s, bool with_eigenvalues) {
    Json j;
    j["n"] = s.dim();
    j["alpha"] = s.alpha;
    j["mu"] = s.mu;
    j["delta"] = s.delta;
    j["kappa_actual"] = s.kappa_actual;
    j["lambda_min"] = s.eigenvalues.front();
    j["lambda_max"] = s.eigenvalues.back();
    if (with_eigenvalues) {
        j["eigenvalues"] = s.eigenvalues;
    }
    return j;
}

Json matrix_summary(const SparseHermitianMatrix& a) {
    Json j;
    j["n"] = a.dim();
    j["nonzeros"] = a.nonzeros();
    j["sparsity"] = a.sparsity();
    j["max_entry_modulus"] = a.max_entry_modulus();
    j["real"] = a.is_real();
    return j;
}

std::string render(const Json& report) { return report.dump(2) + "\n"; }

Json mask_timestamp(Json report) {
    if (report.contains("timestamp")) {
        report["timestamp"] = "";
    }
    return report;
}

void write_cost_csv(std::span<const CostSweepRow> rows, std::ostream& out) {
    out << kCostCsvHeader << "\n";
    std::ostringstream line;
    for (const CostSweepRow& row : rows) {
        const ResourceReport& r = row.report;
        line.str("");
        line << std::setprecision(17);
        if (std::isfinite(row.epsilon)) {
            line << row.epsilon;
        }
        line << ',' << r.inputs.n << ',' << r.inputs.s << ',' << r.inputs.m << ',' << r.inputs.samples << ','
             << r.inputs.eta << ',' << r.tau << ',' << r.queries << ',' << r.two_qubit_gates << ',' << r.t_u << ','
             << r.n_qpe_cost << ',' << r.total_steps << ',' << r.t_lgd;
        out << line.str() << "\n";
    }
}

}  // namespace qss
