#include "qss/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <thread>

#include <CLI11.hpp>

#include "qss/adaptive.hpp"
#include "qss/error.hpp"
#include "qss/error_budget.hpp"
#include "qss/estimators.hpp"
#include "qss/numeric.hpp"
#include "qss/resources.hpp"
#include "qss/sampler.hpp"
#include "qss/spectral_function.hpp"

namespace qss {

std::string_view to_string(Command command) noexcept {
    switch (command) {
        case Command::Validate: return "validate";
        case Command::Spectrum: return "spectrum";
        case Command::Sample: return "sample";
        case Command::Estimate: return "estimate";
        case Command::Budget: return "budget";
        case Command::Cost: return "cost";
        case Command::Adaptive: return "adaptive";
    }
    return "unknown";
}

namespace {

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

template <typename T>
Json opt(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

std::string_view to_string(ScaleMode s) {
    switch (s) {
        case ScaleMode::Auto: return "auto";
        case ScaleMode::None: return "none";
        case ScaleMode::Default: break;
    }
    return "default";
}

// Everything that influences results; output locations and thread count are
// left out so reports compare byte-for-byte across them.
Json inputs_json(const RunConfig& c) {
    Json j;
    j["matrix"] = c.matrix_path.empty() ? Json(nullptr) : Json(c.matrix_path);
    j["epsilon"] = opt(c.epsilon);
    j["m"] = opt(c.m);
    j["N"] = opt(c.samples);
    j["mode"] = std::string(to_string(c.mode));
    j["function"] = c.function;
    j["seed"] = opt(c.seed);
    j["mu"] = opt(c.mu);
    j["delta"] = opt(c.delta);
    j["kappa"] = opt(c.kappa);
    j["gamma"] = opt(c.gamma);
    j["lambda_max_source"] = std::string(to_string(c.lambda_max_source));
    j["lambda_max"] = opt(c.lambda_max);
    j["lambda_min"] = opt(c.lambda_min);
    j["scale"] = std::string(to_string(c.scale));
    j["n"] = opt(c.n);
    j["s"] = opt(c.s);
    j["eta"] = opt(c.eta);
    j["a_max"] = opt(c.a_max);
    j["qram_cost"] = opt(c.qram_cost);
    j["sweep_epsilon"] = c.sweep_epsilon;
    j["sweep_n"] = c.sweep_n;
    if (c.command == Command::Adaptive) {
        j["seed_m"] = c.seed_m;
        j["seed_N"] = c.seed_n;
        j["max_restarts"] = c.max_restarts;
        j["growth"] = c.growth;
    }
    return j;
}

std::uint64_t need_seed(const RunConfig& c) {
    require(c.seed.has_value(), ErrorCode::InvalidConfig,
            "--seed is mandatory for " + std::string(to_string(c.command)));
    return *c.seed;
}

template <typename T>
T need(const std::optional<T>& v, const char* flag) {
    require(v.has_value(), ErrorCode::InvalidConfig, std::string(flag) + " is required");
    return *v;
}

unsigned effective_threads(unsigned requested) {
    if (requested == 0) {
        return std::max(1u, std::thread::hardware_concurrency());
    }
    return requested;
}

struct Prepared {
    explicit Prepared(SparseHermitianMatrix m) : a(std::move(m)) {}
    SparseHermitianMatrix a;
    SpectrumInfo original;
    std::optional<ScaledMatrix> scaled;
    SpectrumInfo working;  // what the sampler sees
    double lo = 0.0;       // lower spectral bound in working units
    double hi = 0.5;
    double kappa = 1.0;    // hi / lo with hi = 1/2
    double log_det_correction = 0.0;
};

Prepared prepare(const RunConfig& c, bool rescale) {
    require(!c.matrix_path.empty(), ErrorCode::InvalidConfig, "--matrix is required");
    Prepared p(load_matrix(c.matrix_path));
    p.original = exact_spectrum(p.a, c.dense_cap);

    if (rescale) {
        double lmax = 0.0;
        switch (c.lambda_max_source) {
            case BoundSource::Oracle: lmax = p.original.eigenvalues.back(); break;
            case BoundSource::PowerIteration: lmax = estimate_lambda_max(p.a); break;
            case BoundSource::Supplied: lmax = need(c.lambda_max, "--lambda-max"); break;
        }
        RescaleOptions opts;
        opts.lambda_max_source = c.lambda_max_source;
        opts.lambda_min_estimate = c.lambda_min;
        opts.dense_cap = c.dense_cap;
        p.scaled = rescale_with_spectrum(p.a, p.original.eigenvalues, lmax, opts);
        p.working = scaled_spectrum(p.original.eigenvalues, *p.scaled);
        p.lo = p.scaled->lambda_min;
        p.hi = p.scaled->lambda_max;
        p.kappa = p.scaled->kappa_bound;
        p.log_det_correction = p.scaled->log_det_correction();
    } else {
        const double true_min = p.original.eigenvalues.front();
        const double true_max = p.original.eigenvalues.back();
        require(true_max <= 0.5, ErrorCode::BoundViolation,
                "largest eigenvalue " + std::to_string(true_max) + " exceeds 1/2; use --scale auto");
        p.lo = true_min;
        if (c.lambda_min) {
            require(*c.lambda_min > 0.0 && *c.lambda_min <= true_min, ErrorCode::BoundViolation,
                    "lambda_min estimate above the smallest eigenvalue");
            p.lo = *c.lambda_min;
        }
        p.working = p.original;
        p.hi = 0.5;
        p.kappa = std::max(1.0, 0.5 / p.lo);
    }
    return p;
}

Json matrix_json(const Prepared& p) {
    Json j = matrix_summary(p.a);
    Json s;
    s["applied"] = p.scaled.has_value();
    if (p.scaled) {
        s["scale"] = p.scaled->scale;
        s["lambda_max_source"] = std::string(to_string(p.scaled->lambda_max_source));
        s["lambda_min_source"] = std::string(to_string(p.scaled->lambda_min_source));
        s["scaled_max_entry_modulus"] = p.scaled->matrix.max_entry_modulus();
        s["log_det_correction"] = p.scaled->log_det_correction();
    } else {
        s["scale"] = 1.0;
    }
    s["lambda_min_bound"] = p.lo;
    s["lambda_max_bound"] = p.hi;
    s["kappa_bound"] = p.kappa;
    j["scaling"] = s;
    return j;
}

double exact_sum(const SpectrumInfo& spectrum, const SpectralFunction& f) {
    std::vector<double> values;
    values.reserve(spectrum.dim());
    for (double v : spectrum.eigenvalues) {
        values.push_back(f.value(v));
    }
    return pairwise_sum(values);
}

FunctionStats exact_function_stats(const SpectrumInfo& spectrum, const SpectralFunction& f) {
    std::vector<double> values;
    values.reserve(spectrum.dim());
    for (double v : spectrum.eigenvalues) {
        values.push_back(f.value(v));
    }
    const double n = static_cast<double>(values.size());
    FunctionStats s;
    s.mean = pairwise_sum(values) / n;
    for (double& v : values) {
        v = (v - s.mean) * (v - s.mean);
    }
    s.stddev = std::sqrt(pairwise_sum(values) / n);
    return s;
}

void dump_samples(const RunConfig& c, const SampleString& samples) {
    if (c.dump_samples_path.empty()) {
        return;
    }
    std::ofstream out(c.dump_samples_path);
    require(out.good(), ErrorCode::IoError, "cannot write " + c.dump_samples_path);
    write_sample_dump(samples, out);
    require(out.good(), ErrorCode::IoError, "write failed for " + c.dump_samples_path);
}

// Moves the budget nested in an estimate report to the top level.
Json split_budget(Json estimate, Json& report) {
    report["error_budget"] = estimate["error_budget"];
    estimate.erase("error_budget");
    return estimate;
}

Json resources_or_error(const ResourceInputs& in) {
    try {
        return to_json(resource_report(in));
    } catch (const Error& e) {
        Json j;
        j["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
        return j;
    }
}

void cmd_validate(const RunConfig& c, Json& r) {
    require(!c.matrix_path.empty(), ErrorCode::InvalidConfig, "--matrix is required");
    const SparseHermitianMatrix a = load_matrix(c.matrix_path);
    r["matrix"] = matrix_summary(a);
    Json res;
    res["hermitian"] = true;
    if (a.dim() <= c.dense_cap) {
        const SpectrumInfo s = exact_spectrum(a, c.dense_cap);
        res["positive_definite"] = true;
        res["lambda_min"] = s.eigenvalues.front();
        res["lambda_max"] = s.eigenvalues.back();
        res["kappa_actual"] = s.kappa_actual;
    } else {
        res["positive_definite"] = nullptr;
    }
    r["results"] = res;
}

void cmd_spectrum(const RunConfig& c, Json& r) {
    const Prepared p = prepare(c, c.scale != ScaleMode::None);
    r["matrix"] = matrix_json(p);
    Json res;
    res["original"] = to_json(p.original, true);
    res["working"] = to_json(p.working, true);
    Json b;
    const double abs_mu = std::abs(p.working.mu);
    b["abs_mu"] = abs_mu;
    b["abs_mu_lower"] = std::log(2.0);
    b["abs_mu_upper"] = std::log(2.0 * p.kappa);
    b["delta_upper"] = std::log(p.kappa) / 2.0;
    b["holds"] = p.scaled.has_value() && abs_mu >= std::log(2.0) * (1.0 - 1e-12) &&
                 abs_mu <= std::log(2.0 * p.kappa) * (1.0 + 1e-12) &&
                 p.working.delta <= std::log(p.kappa) / 2.0 + 1e-12;
    res["bounds"] = b;
    r["results"] = res;
}

void cmd_sample(const RunConfig& c, Json& r) {
    const std::uint64_t seed = need_seed(c);
    const int m = need(c.m, "--m");
    const std::uint64_t count = need(c.samples, "--N");
    const Prepared p = prepare(c, c.scale != ScaleMode::None);
    r["matrix"] = matrix_json(p);
    const QpeConfig qpe{m, c.mode};
    qpe.validate();
    const SampleString samples = draw_batch(p.working, qpe, count, seed, {effective_threads(c.threads)});
    dump_samples(c, samples);

    const std::vector<double> lt = samples.lambda_tildes();
    const std::size_t zeros = static_cast<std::size_t>(
        std::count_if(samples.records.begin(), samples.records.end(), [](const SampleRecord& s) { return s.outcome == 0; }));
    Json res;
    res["N"] = samples.size();
    res["m"] = m;
    res["mode"] = std::string(to_string(c.mode));
    res["zero_outcomes"] = zeros;
    res["lambda_tilde_mean"] = pairwise_sum(lt) / static_cast<double>(lt.size());
    res["lambda_tilde_min"] = *std::min_element(lt.begin(), lt.end());
    res["lambda_tilde_max"] = *std::max_element(lt.begin(), lt.end());
    if (zeros == 0 && samples.size() >= 2) {
        const SampleStats st = sample_stats(samples);
        res["mu_hat"] = st.mu_hat;
        res["delta_hat"] = st.delta_hat;
        res["kappa_hat"] = st.kappa_hat;
    }
    r["results"] = res;
}

void cmd_estimate(const RunConfig& c, Json& r) {
    const std::uint64_t seed = need_seed(c);
    const SpectralFunction f = parse_function(c.function);
    const bool is_log = f.kind == FunctionKind::Log;
    const bool rescale = c.scale == ScaleMode::Auto || (c.scale == ScaleMode::Default && is_log);
    const Prepared p = prepare(c, rescale);
    r["matrix"] = matrix_json(p);
    const SpectrumInfo& sp = p.working;
    const std::size_t n = sp.dim();

    double mu = 0.0;
    double delta = 0.0;
    if (is_log) {
        mu = c.mu.value_or(sp.mu);
        delta = c.delta.value_or(sp.delta);
    } else {
        const FunctionStats fs = exact_function_stats(sp, f);
        mu = c.mu.value_or(fs.mean);
        delta = c.delta.value_or(fs.stddev);
    }
    const double kappa = c.kappa.value_or(p.kappa);

    require(c.epsilon || (c.m && c.samples), ErrorCode::InvalidConfig, "estimate needs --epsilon or both --m and --N");
    Parameters chosen;
    if (c.epsilon) {
        chosen = is_log ? choose_parameters(mu, delta, kappa, *c.epsilon)
                        : choose_parameters_generic(f, p.lo, p.hi, mu, delta, *c.epsilon);
    }
    const int m = c.m.value_or(chosen.m);
    const std::uint64_t count = c.samples.value_or(chosen.n_mc);
    const QpeConfig qpe{m, c.mode};
    qpe.validate();

    const SampleString samples = draw_batch(sp, qpe, count, seed, {effective_threads(c.threads)});
    dump_samples(c, samples);

    const ErrorBudget budget = is_log ? logdet_budget(mu, delta, kappa, m, count, n, c.epsilon)
                                      : spectral_budget(f, p.lo, p.hi, mu, delta, m, count, n, c.epsilon);
    const EstimateReport er = make_estimate_report(samples, f, n, budget);

    Json res = split_budget(to_json(er), r);
    Json params;
    params["source"] = (c.mu || c.delta || c.kappa) ? "supplied" : "oracle";
    params["mu"] = mu;
    params["delta"] = delta;
    params["kappa"] = kappa;
    params["chosen_by_epsilon"] = c.epsilon.has_value();
    res["parameters"] = params;
    if (is_log) {
        res["alpha_original_estimate"] = er.estimate + p.log_det_correction;
    }
    if (c.gamma) {
        res["chebyshev_failure_bound"] = chebyshev_bound(budget.delta_alpha_err, *c.gamma);
    }

    Json exact;
    const double value = exact_sum(sp, f);
    exact["value"] = value;
    if (is_log) {
        exact["alpha_original"] = p.original.alpha;
    }
    exact["relative_error"] = std::abs(er.estimate - value) / std::abs(value);
    exact["noiseless_estimate"] = verify::noiseless_estimate(samples, sp, f);
    res["exact"] = exact;
    r["results"] = res;

    ResourceInputs in;
    in.n = std::max<std::size_t>(n, 2);
    in.s = p.a.sparsity();
    in.m = m;
    in.samples = count;
    in.eta = c.eta.value_or(c.epsilon.value_or(0.1));
    in.a_max = c.a_max ? c.a_max : std::optional<double>(p.scaled ? p.scaled->matrix.max_entry_modulus()
                                                                   : p.a.max_entry_modulus());
    in.qram_cost = c.qram_cost;
    r["resources"] = resources_or_error(in);
}

void cmd_budget(const RunConfig& c, Json& r) {
    const double mu = need(c.mu, "--mu");
    const double delta = need(c.delta, "--delta");
    const double kappa = need(c.kappa, "--kappa");
    const std::size_t n = need(c.n, "--n");
    require(c.epsilon || (c.m && c.samples), ErrorCode::InvalidConfig, "budget needs --epsilon or both --m and --N");
    Json res;
    Parameters chosen;
    if (c.epsilon) {
        chosen = choose_parameters(mu, delta, kappa, *c.epsilon);
        res["chosen"] = {{"N", chosen.n_mc}, {"m", chosen.m}};
    }
    const int m = c.m.value_or(chosen.m);
    const std::uint64_t count = c.samples.value_or(chosen.n_mc);
    const RelativeErrorForms forms = total_relative_error(mu, delta, kappa, m, count);
    res["relative_error_main_form"] = forms.main_form;
    res["relative_error_appendix_form"] = forms.appendix_form;
    const ErrorBudget b = logdet_budget(mu, delta, kappa, m, count, n, c.epsilon);
    if (c.gamma) {
        res["chebyshev_failure_bound"] = chebyshev_bound(b.delta_alpha_err, *c.gamma);
    }
    r["results"] = res;
    r["error_budget"] = to_json(b);
}

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double k = static_cast<double>(x.size());
    const double mx = pairwise_sum(x) / k;
    const double my = pairwise_sum(y) / k;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

void write_csv(const RunConfig& c, const std::vector<CostSweepRow>& rows) {
    if (c.csv_path.empty()) {
        return;
    }
    std::ofstream out(c.csv_path);
    require(out.good(), ErrorCode::IoError, "cannot write " + c.csv_path);
    write_cost_csv(rows, out);
    require(out.good(), ErrorCode::IoError, "write failed for " + c.csv_path);
}

void cmd_cost(const RunConfig& c, Json& r) {
    const double eta = need(c.eta, "--eta");
    const std::size_t s = need(c.s, "--s");
    constexpr double kNoEpsilon = std::numeric_limits<double>::quiet_NaN();
    std::vector<CostSweepRow> rows;
    Json res = Json::object();

    auto inputs = [&](std::size_t n, int m, std::uint64_t count) {
        ResourceInputs in;
        in.n = n;
        in.s = s;
        in.m = m;
        in.samples = count;
        in.eta = eta;
        in.a_max = c.a_max;
        in.qram_cost = c.qram_cost;
        return in;
    };

    if (!c.sweep_epsilon.empty()) {
        const double mu = need(c.mu, "--mu");
        const double delta = need(c.delta, "--delta");
        const double kappa = need(c.kappa, "--kappa");
        const std::size_t n = need(c.n, "--n");
        std::vector<double> x;
        std::vector<double> y;
        Json out = Json::array();
        for (double eps : c.sweep_epsilon) {
            const Parameters p = choose_parameters(mu, delta, kappa, eps);
            const ResourceReport rep = resource_report(inputs(n, p.m, p.n_mc));
            rows.push_back({eps, rep});
            x.push_back(std::log(1.0 / eps));
            y.push_back(std::log(rep.t_lgd));
            Json row;
            row["epsilon"] = eps;
            row["resources"] = to_json(rep);
            out.push_back(std::move(row));
        }
        res["rows"] = out;
        res["slope_vs_inverse_epsilon"] = x.size() >= 2 ? Json(fit_slope(x, y)) : Json(nullptr);
    } else if (!c.sweep_n.empty()) {
        const int m = need(c.m, "--m");
        const std::uint64_t count = need(c.samples, "--N");
        std::vector<double> x;
        std::vector<double> y;
        Json out = Json::array();
        for (std::size_t n : c.sweep_n) {
            const ResourceReport rep = resource_report(inputs(n, m, count));
            rows.push_back({c.epsilon.value_or(kNoEpsilon), rep});
            x.push_back(std::log(std::log2(static_cast<double>(n))));
            y.push_back(std::log(rep.t_lgd));
            out.push_back(to_json(rep));
        }
        res["rows"] = out;
        res["slope_vs_log2_n"] = x.size() >= 2 ? Json(fit_slope(x, y)) : Json(nullptr);
    } else {
        const ResourceReport rep =
            resource_report(inputs(need(c.n, "--n"), need(c.m, "--m"), need(c.samples, "--N")));
        rows.push_back({c.epsilon.value_or(kNoEpsilon), rep});
        r["resources"] = to_json(rep);
    }
    write_csv(c, rows);
    r["results"] = res;
}

void cmd_adaptive(const RunConfig& c, Json& r) {
    AdaptiveConfig ac;
    ac.seed = need_seed(c);
    ac.epsilon = need(c.epsilon, "--epsilon");
    ac.seed_m = c.seed_m;
    ac.seed_n = c.seed_n;
    ac.max_restarts = c.max_restarts;
    ac.growth_factor = c.growth;
    ac.threads = effective_threads(c.threads);
    require(c.function == "logdet", ErrorCode::InvalidConfig, "adaptive supports --function logdet only");
    require(c.scale != ScaleMode::None, ErrorCode::InvalidConfig, "adaptive always rescales");
    const Prepared p = prepare(c, true);
    r["matrix"] = matrix_json(p);

    const AdaptiveResult ar = run_adaptive(p.working, p.log_det_correction, ac, c.mode);
    Json res = split_budget(to_json(ar.report), r);
    res["alpha_original_estimate"] = ar.alpha_original;
    res["restarts"] = ar.restarts;
    res["skewed_toward_smaller"] = ar.skewed_toward_smaller;
    Json exact;
    exact["value"] = p.working.alpha;
    exact["alpha_original"] = p.original.alpha;
    exact["relative_error"] = std::abs(ar.report.estimate - p.working.alpha) / std::abs(p.working.alpha);
    res["exact"] = exact;
    r["results"] = res;
    r["trace"] = to_json(ar.trace);
}

// Commands fill sections in whatever order is convenient; reports always
// list them in this order.
Json canonical_order(Json r) {
    static constexpr const char* kOrder[] = {"schema_version", "command", "timestamp", "status",
                                             "inputs",         "provenance", "matrix", "results",
                                             "error_budget",   "resources", "trace",  "error"};
    Json out;
    for (const char* key : kOrder) {
        if (r.contains(key)) {
            out[key] = std::move(r[key]);
            r.erase(key);
        }
    }
    for (auto& item : r.items()) {
        out[item.key()] = std::move(item.value());
    }
    return out;
}

}  // namespace

RunResult run(const RunConfig& config) {
    RunResult out;
    Json& r = out.report;
    r["schema_version"] = kSchemaVersion;
    r["command"] = std::string(to_string(config.command));
    r["timestamp"] = config.timestamp.empty() ? utc_now() : config.timestamp;
    r["status"] = "ok";
    r["inputs"] = inputs_json(config);
    Json prov;
    prov["seed"] = opt(config.seed);
    prov["mode"] = std::string(to_string(config.mode));
    prov["version"] = kVersion;
    prov["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                    std::to_string(EIGEN_MINOR_VERSION);
    prov["rng"] = "philox4x32-10";
    r["provenance"] = prov;

    try {
        switch (config.command) {
            case Command::Validate: cmd_validate(config, r); break;
            case Command::Spectrum: cmd_spectrum(config, r); break;
            case Command::Sample: cmd_sample(config, r); break;
            case Command::Estimate: cmd_estimate(config, r); break;
            case Command::Budget: cmd_budget(config, r); break;
            case Command::Cost: cmd_cost(config, r); break;
            case Command::Adaptive: cmd_adaptive(config, r); break;
        }
    } catch (const Error& e) {
        r["status"] = "error";
        r["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
        out.exit_code = exit_code(e.code());
    }
    out.report = canonical_order(std::move(r));
    return out;
}

int run_and_write(const RunConfig& config) {
    const RunResult result = run(config);
    const std::string text = render(result.report);
    if (result.exit_code != 0) {
        std::cerr << result.report["error"]["message"].get<std::string>() << "\n";
    }
    if (config.output_path.empty()) {
        std::cout << text;
        return result.exit_code;
    }
    std::ofstream out(config.output_path, std::ios::binary);
    if (!out || !(out << text)) {
        std::cerr << "IoError: cannot write " << config.output_path << "\n";
        return exit_code(ErrorCode::IoError);
    }
    return result.exit_code;
}

std::optional<RunConfig> parse_command_line(int argc, const char* const* argv) {
    RunConfig c;
    CLI::App app{"Log-determinant and spectral-sum estimation by simulated spectral sampling"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string mode = "full";
    std::string lambda_source;
    std::string scale = "default";
    std::optional<double> epsilon, mu, delta, kappa, gamma, lambda_max, lambda_min, eta, a_max, qram;
    std::optional<int> m;
    std::optional<std::uint64_t> samples, seed;
    std::optional<std::size_t> n, s;

    app.add_option("--matrix", c.matrix_path, "Matrix Market file");
    app.add_option("--epsilon", epsilon, "target relative error");
    app.add_option("--m", m, "pointer qubits");
    app.add_option("--N", samples, "Monte Carlo samples");
    app.add_option("--mode", mode, "floor | nearest | full");
    app.add_option("--function", c.function, "logdet | partition:<beta> | entropy | trace | power:<p>");
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--output", c.output_path, "report path (stdout when omitted)");
    app.add_option("--dump-samples", c.dump_samples_path, "write j,k,m,mode records");
    app.add_option("--csv", c.csv_path, "cost sweep CSV path");
    app.add_option("--threads", c.threads, "sampling threads (0 = all cores)");
    app.add_option("--mu", mu, "mean log eigenvalue override");
    app.add_option("--delta", delta, "log eigenvalue spread override");
    app.add_option("--kappa", kappa, "condition number bound override");
    app.add_option("--gamma", gamma, "absolute error level for the Chebyshev bound");
    app.add_option("--lambda-max-source", lambda_source, "oracle | power | supplied");
    app.add_option("--lambda-max", lambda_max, "supplied upper spectral bound");
    app.add_option("--lambda-min", lambda_min, "supplied lower spectral bound");
    app.add_option("--scale", scale, "auto | none (default: auto for logdet, none otherwise)");
    app.add_option("--dense-cap", c.dense_cap, "largest n for dense eigendecomposition");
    app.add_option("--n", n, "matrix dimension (budget, cost)");
    app.add_option("--s", s, "sparsity (cost)");
    app.add_option("--eta", eta, "Hamiltonian simulation accuracy");
    app.add_option("--a-max", a_max, "max entry modulus for tau");
    app.add_option("--qram-cost", qram, "cost per oracle query (default log2 n)");
    app.add_option("--sweep-epsilon", c.sweep_epsilon, "comma-separated epsilons")->delimiter(',');
    app.add_option("--sweep-n", c.sweep_n, "comma-separated dimensions")->delimiter(',');
    app.add_option("--seed-m", c.seed_m, "adaptive: initial m");
    app.add_option("--seed-N", c.seed_n, "adaptive: initial N");
    app.add_option("--max-restarts", c.max_restarts, "adaptive: restart limit");
    app.add_option("--growth", c.growth, "adaptive: N growth factor");
    app.add_option("--timestamp", c.timestamp, "fixed timestamp for the report");

    struct Sub {
        const char* name;
        const char* help;
        Command command;
    };
    const Sub commands[] = {
        {"validate", "check Hermiticity and positivity", Command::Validate},
        {"spectrum", "exact spectrum and log-eigenvalue bounds", Command::Spectrum},
        {"sample", "draw readouts and summarize them", Command::Sample},
        {"estimate", "spectral-sum estimate with error budget", Command::Estimate},
        {"budget", "error formulas from supplied mu, delta, kappa", Command::Budget},
        {"cost", "resource counts, optionally swept", Command::Cost},
        {"adaptive", "log-det estimate with data-driven m and N", Command::Adaptive},
    };
    for (const Sub& sub : commands) {
        app.add_subcommand(sub.name, sub.help)->callback([&c, cmd = sub.command] { c.command = cmd; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        fail(ErrorCode::InvalidConfig, e.what());
    }

    c.mode = parse_mode(mode);
    c.epsilon = epsilon;
    c.mu = mu;
    c.delta = delta;
    c.kappa = kappa;
    c.gamma = gamma;
    c.lambda_max = lambda_max;
    c.lambda_min = lambda_min;
    c.eta = eta;
    c.a_max = a_max;
    c.qram_cost = qram;
    c.m = m;
    c.samples = samples;
    c.seed = seed;
    c.n = n;
    c.s = s;

    if (lambda_source.empty()) {
        c.lambda_max_source = lambda_max ? BoundSource::Supplied : BoundSource::Oracle;
    } else if (lambda_source == "oracle") {
        c.lambda_max_source = BoundSource::Oracle;
    } else if (lambda_source == "power" || lambda_source == "power_iteration") {
        c.lambda_max_source = BoundSource::PowerIteration;
    } else if (lambda_source == "supplied") {
        c.lambda_max_source = BoundSource::Supplied;
    } else {
        fail(ErrorCode::InvalidConfig, "unknown --lambda-max-source '" + lambda_source + "'");
    }

    if (scale == "auto") {
        c.scale = ScaleMode::Auto;
    } else if (scale == "none") {
        c.scale = ScaleMode::None;
    } else if (scale == "default") {
        c.scale = ScaleMode::Default;
    } else {
        fail(ErrorCode::InvalidConfig, "unknown --scale '" + scale + "'");
    }
    return c;
}

}  // namespace qss
