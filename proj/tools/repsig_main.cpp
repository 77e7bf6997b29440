// Command-line surface: plan tables, threshold curves, worst-case alpha
// evaluation, stream monitoring, Monte Carlo simulation, and comparison
// against the always-valid baseline boundary. Emits CSV/JSON.
//
// Exit codes: 0 success (or monitor stopped significant), 2 usage or
// validation error, 3 monitor stream ended without stopping.

#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "repsig/json_io.hpp"
#include "repsig/monitor.hpp"
#include "repsig/normal.hpp"
#include "repsig/plan.hpp"
#include "repsig/simulate.hpp"

namespace {

using repsig::TestPlan;

// Decimal with 10 significant digits, scientific below 1e-4, bare zero for
// zero. Deep-tail thresholds survive a round-trip at the 1e-9 z level.
std::string fmt_value(double x) {
    if (x == 0.0) {
        return "0";
    }
    char buf[40];
    if (std::fabs(x) < 1e-4) {
        std::snprintf(buf, sizeof buf, "%.9e", x);
    } else {
        std::snprintf(buf, sizeof buf, "%.10g", x);
    }
    return buf;
}

// --plan accepts inline JSON (first non-space byte is '{') or a file path.
nlohmann::json load_spec(const std::string& spec) {
    const auto pos = spec.find_first_not_of(" \t\r\n");
    if (pos != std::string::npos && spec[pos] == '{') {
        return nlohmann::json::parse(spec);
    }
    std::ifstream in(spec);
    if (!in) {
        throw std::invalid_argument("cannot open plan file: " + spec);
    }
    return nlohmann::json::parse(in);
}

TestPlan load_plan(const std::string& spec) {
    return repsig::plan_from_json(load_spec(spec));
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-" || path == "stdout") {
        return std::cout;
    }
    file.open(path);
    if (!file) {
        throw std::invalid_argument("cannot open output file: " + path);
    }
    return file;
}

void print_findings(const std::vector<repsig::Finding>& findings) {
    for (const auto& f : findings) {
        const char* tag = f.severity == repsig::Finding::Severity::error
                              ? "error"
                              : f.severity == repsig::Finding::Severity::warning
                                    ? "warning"
                                    : "info";
        std::cerr << tag << ": " << f.message << "\n";
    }
}

// Seed resolution: --seed beats REPSIG_SEED beats the fixed default.
std::uint64_t resolve_seed(bool flag_given, std::uint64_t flag_value) {
    if (flag_given) {
        return flag_value;
    }
    const char* env = std::getenv("REPSIG_SEED");
    if (env == nullptr || *env == '\0') {
        return repsig::kDefaultSeed;
    }
    if (*env == '-') {
        throw std::invalid_argument("REPSIG_SEED must be a nonnegative integer");
    }
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || end == env || *end != '\0') {
        throw std::invalid_argument("REPSIG_SEED must be a nonnegative integer");
    }
    return v;
}

// Log-spaced integer decision points from 1 to t_max, deduplicated; curves
// routinely span up to 1e9 points, so full enumeration is opt-out.
std::vector<std::int64_t> sample_points(std::int64_t t_max, bool log_spacing,
                                        int per_decade) {
    std::vector<std::int64_t> ts;
    if (!log_spacing) {
        ts.reserve(static_cast<std::size_t>(t_max));
        for (std::int64_t t = 1; t <= t_max; ++t) {
            ts.push_back(t);
        }
        return ts;
    }
    const double decades = std::log10(static_cast<double>(t_max));
    const auto total = static_cast<long>(
        std::ceil(decades * static_cast<double>(per_decade)));
    std::int64_t last = 0;
    for (long i = 0; i <= total; ++i) {
        auto t = static_cast<std::int64_t>(std::llround(
            std::pow(10.0, static_cast<double>(i) / per_decade)));
        t = std::min(std::max<std::int64_t>(t, 1), t_max);
        if (t > last) {
            ts.push_back(t);
            last = t;
        }
    }
    if (last < t_max) {
        ts.push_back(t_max);
    }
    return ts;
}

// z cell is empty once delta underflowed to zero: no finite equivalent.
std::string z_cell(double delta) {
    return delta > 0.0 ? fmt_value(repsig::two_sided_z(delta)) : std::string();
}

int run_plan(const std::string& spec, std::int64_t t_max,
             const std::string& out_path) {
    const TestPlan plan = load_plan(spec);
    print_findings(repsig::validate_plan(plan));
    std::ofstream file;
    std::ostream& out = open_out(out_path, file);
    out << "t,alpha_t,r_t,delta_t,z_t\n";
    for (std::int64_t t = 1; t <= t_max; ++t) {
        const double alpha_t = plan.schedule().alpha_at(t).value;
        const double delta = plan.threshold_at(t).delta;
        out << t << ',' << fmt_value(alpha_t) << ',' << plan.r_at(t) << ','
            << fmt_value(delta) << ',' << z_cell(delta) << '\n';
    }
    return 0;
}

int run_curve(const std::vector<std::string>& specs, std::int64_t t_max,
              bool log_spacing, int per_decade, const std::string& out_path) {
    std::vector<TestPlan> plans;
    plans.reserve(specs.size());
    for (const auto& spec : specs) {
        plans.push_back(load_plan(spec));
        print_findings(repsig::validate_plan(plans.back()));
    }
    const auto ts = sample_points(t_max, log_spacing, per_decade);
    std::ofstream file;
    std::ostream& out = open_out(out_path, file);
    out << "series,t,delta,z\n";
    for (std::size_t i = 0; i < plans.size(); ++i) {
        const std::string label = "plan" + std::to_string(i + 1);
        for (const std::int64_t t : ts) {
            const double delta = plans[i].threshold_at(t).delta;
            out << label << ',' << t << ',' << fmt_value(delta) << ','
                << z_cell(delta) << '\n';
        }
    }
    return 0;
}

int run_alpha(const std::string& spec, std::int64_t horizon,
              const std::string& out_path) {
    const TestPlan plan = load_plan(spec);
    print_findings(repsig::validate_plan(plan));
    const repsig::AlphaEstimate est = repsig::worst_case_alpha(plan, horizon);
    nlohmann::json j = repsig::estimate_to_json(est);
    j["corollary_bound"] = repsig::corollary_bound(plan, horizon);
    std::ofstream file;
    std::ostream& out = open_out(out_path, file);
    out << j.dump(2) << '\n';
    return 0;
}

int run_monitor(const std::string& spec, const std::string& out_path) {
    repsig::Monitor monitor{load_plan(spec)};
    print_findings(monitor.findings());
    std::ofstream file;
    std::ostream& out = open_out(out_path, file);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(std::cin, line)) {
        ++lineno;
        const auto begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) {
            continue;
        }
        errno = 0;
        char* end = nullptr;
        const double p = std::strtod(line.c_str() + begin, &end);
        while (*end == ' ' || *end == '\t' || *end == '\r') {
            ++end;
        }
        if (end == line.c_str() + begin || *end != '\0' || errno != 0) {
            std::cerr << "error: line " << lineno
                      << ": not a p-value: " << line << "\n";
            return 2;
        }
        repsig::Decision d;
        try {
            d = monitor.observe(p);
        } catch (const std::domain_error& e) {
            std::cerr << "error: line " << lineno << ": " << e.what() << "\n";
            return 2;
        }
        out << d.t << ',' << fmt_value(p) << ',' << fmt_value(d.delta_t)
            << ',' << (d.hit ? 1 : 0) << ',' << d.hits << ',' << d.r_t << ','
            << (d.stopped ? "stop_significant" : "continue") << '\n';
        if (d.stopped) {
            return 0;
        }
    }
    return 3;
}

int run_simulate(const std::string& spec, const std::string& model_name,
                 double mu, bool mu_given, std::int64_t n_per_point,
                 bool npp_given, std::int64_t reps, std::int64_t horizon,
                 std::uint64_t seed, int threads,
                 const std::string& out_path) {
    const TestPlan plan = load_plan(spec);
    print_findings(repsig::validate_plan(plan));
    repsig::StreamModel model = repsig::StreamModel::iid_uniform_null();
    if (model_name == "iid_uniform_null") {
        if (mu_given || npp_given) {
            throw std::invalid_argument(
                "--mu and --n-per-point apply only to the Brownian models");
        }
    } else if (model_name == "brownian_null") {
        if (mu_given) {
            throw std::invalid_argument("--mu applies only to brownian_drift");
        }
        model = repsig::StreamModel::brownian_null(n_per_point);
    } else if (model_name == "brownian_drift") {
        model = repsig::StreamModel::brownian_drift(mu, n_per_point);
    } else {
        throw std::invalid_argument("unknown model: " + model_name);
    }
    repsig::SimulationConfig config;
    config.replications = reps;
    config.horizon = horizon;
    config.seed = seed;
    config.threads = threads;
    const repsig::SimulationReport report =
        repsig::simulate(plan, model, config);
    std::ofstream file;
    std::ostream& out = open_out(out_path, file);
    out << repsig::report_to_json(report, plan, model).dump(2) << '\n';
    return 0;
}

int run_compare(const std::string& spec, std::vector<double> rhos,
                std::int64_t t_max, bool log_spacing, int per_decade,
                const std::string& out_path) {
    const TestPlan plan = load_plan(spec);
    print_findings(repsig::validate_plan(plan));
    if (rhos.empty()) {
        rhos.push_back(1.0);
    }
    for (double rho : rhos) {
        if (!(rho > 0.0) || !std::isfinite(rho)) {
            throw std::invalid_argument("--rho values must be positive");
        }
    }
    const double alpha = plan.alpha();
    const auto ts = sample_points(t_max, log_spacing, per_decade);
    std::ofstream file;
    std::ostream& out = open_out(out_path, file);
    out << "t,z_repsig";
    for (double rho : rhos) {
        out << ",z_baseline(rho=" << fmt_value(rho) << ')';
    }
    out << '\n';
    for (const std::int64_t t : ts) {
        out << t << ',' << z_cell(plan.threshold_at(t).delta);
        for (double rho : rhos) {
            out << ',' << fmt_value(repsig::baseline_z(t, rho, alpha));
        }
        out << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Unbounded sequential test plans built on repeated significance: "
        "alpha-spending thresholds, worst-case type-1 error, stream "
        "monitoring, simulation, and baseline comparison."};
    app.require_subcommand(1);

    std::string plan_spec;
    std::string out_path;
    std::int64_t t_max = 100;
    auto* plan_cmd = app.add_subcommand(
        "plan", "Threshold table CSV: t,alpha_t,r_t,delta_t,z_t");
    plan_cmd->add_option("--plan", plan_spec, "Plan JSON (inline or file)")
        ->required();
    plan_cmd->add_option("--t-max", t_max, "Last decision point (default 100)");
    plan_cmd->add_option("--out", out_path, "Output path (default stdout)");

    std::vector<std::string> curve_specs;
    std::string curve_out;
    std::int64_t curve_t_max = 1000000;
    bool curve_log = true;
    int per_decade = 400;
    auto* curve_cmd = app.add_subcommand(
        "curve", "Z-score curve CSV at log-spaced decision points");
    curve_cmd
        ->add_option("--plan", curve_specs,
                     "Plan JSON (repeatable for overlaid series)")
        ->required();
    curve_cmd->add_option("--t-max", curve_t_max,
                          "Last decision point (default 1e6)");
    curve_cmd->add_flag("--log-spacing,!--no-log-spacing", curve_log,
                        "Log-spaced sampling (default on)");
    curve_cmd->add_option("--points-per-decade", per_decade,
                          "Sampling density (default 400)");
    curve_cmd->add_option("--out", curve_out, "Output path (default stdout)");

    std::string alpha_spec;
    std::string alpha_out;
    std::int64_t horizon = 1000000;
    auto* alpha_cmd = app.add_subcommand(
        "alpha",
        "Worst-case type-1 error: collected mass, tail bound, upper bound");
    alpha_cmd->add_option("--plan", alpha_spec, "Plan JSON (inline or file)")
        ->required();
    alpha_cmd->add_option("--horizon", horizon,
                          "Evaluation horizon (default 1e6)");
    alpha_cmd->add_option("--out", alpha_out, "Output path (default stdout)");

    std::string mon_spec;
    std::string mon_out;
    auto* monitor_cmd = app.add_subcommand(
        "monitor",
        "Read one p-value per line from stdin; emit "
        "t,p,delta_t,hit,hits,r_t,decision per observation");
    monitor_cmd->add_option("--plan", mon_spec, "Plan JSON (inline or file)")
        ->required();
    monitor_cmd->add_option("--out", mon_out, "Output path (default stdout)");

    std::string sim_spec;
    std::string sim_out;
    std::string model_name = "iid_uniform_null";
    double mu = 0.0;
    std::int64_t n_per_point = 1;
    std::int64_t reps = 100000;
    std::int64_t sim_horizon = 10000;
    std::uint64_t seed = repsig::kDefaultSeed;
    int threads = 0;
    auto* sim_cmd = app.add_subcommand(
        "simulate", "Monte Carlo stopping-probability report (JSON)");
    sim_cmd->add_option("--plan", sim_spec, "Plan JSON (inline or file)")
        ->required();
    sim_cmd->add_option(
        "--model", model_name,
        "iid_uniform_null | brownian_null | brownian_drift (default iid)");
    auto* mu_opt =
        sim_cmd->add_option("--mu", mu, "Drift per observation (drift model)");
    auto* npp_opt = sim_cmd->add_option(
        "--n-per-point", n_per_point,
        "Observations per decision point (Brownian models, default 1)");
    sim_cmd->add_option("--reps", reps, "Replications (default 1e5)");
    sim_cmd->add_option("--horizon", sim_horizon,
                        "Decision points per replication (default 1e4)");
    auto* seed_opt = sim_cmd->add_option(
        "--seed", seed, "Master seed (beats REPSIG_SEED, default 4242424242)");
    sim_cmd->add_option("--threads", threads,
                        "Worker threads, 0 = auto; results do not depend on "
                        "the thread count");
    sim_cmd->add_option("--out", sim_out, "Output path (default stdout)");

    std::string cmp_spec;
    std::string cmp_out;
    std::vector<double> rhos;
    std::int64_t cmp_t_max = 1000000;
    bool cmp_log = true;
    int cmp_per_decade = 400;
    auto* cmp_cmd = app.add_subcommand(
        "compare",
        "Overlay CSV of this boundary and the always-valid baseline");
    cmp_cmd->add_option("--plan", cmp_spec, "Plan JSON (inline or file)")
        ->required();
    cmp_cmd->add_option("--rho", rhos,
                        "Baseline rho values (repeatable, default 1.0)");
    cmp_cmd->add_option("--t-max", cmp_t_max,
                        "Last decision point (default 1e6)");
    cmp_cmd->add_flag("--log-spacing,!--no-log-spacing", cmp_log,
                      "Log-spaced sampling (default on)");
    cmp_cmd->add_option("--points-per-decade", cmp_per_decade,
                        "Sampling density (default 400)");
    cmp_cmd->add_option("--out", cmp_out, "Output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (t_max < 1 || curve_t_max < 1 || cmp_t_max < 1 || horizon < 1) {
            throw std::invalid_argument("--t-max and --horizon must be >= 1");
        }
        if (per_decade < 1 || cmp_per_decade < 1) {
            throw std::invalid_argument("--points-per-decade must be >= 1");
        }
        if (plan_cmd->parsed()) {
            return run_plan(plan_spec, t_max, out_path);
        }
        if (curve_cmd->parsed()) {
            return run_curve(curve_specs, curve_t_max, curve_log, per_decade,
                             curve_out);
        }
        if (alpha_cmd->parsed()) {
            return run_alpha(alpha_spec, horizon, alpha_out);
        }
        if (monitor_cmd->parsed()) {
            return run_monitor(mon_spec, mon_out);
        }
        if (sim_cmd->parsed()) {
            return run_simulate(sim_spec, model_name, mu, mu_opt->count() > 0,
                                n_per_point, npp_opt->count() > 0, reps,
                                sim_horizon,
                                resolve_seed(seed_opt->count() > 0, seed),
                                threads, sim_out);
        }
        if (cmp_cmd->parsed()) {
            return run_compare(cmp_spec, rhos, cmp_t_max, cmp_log,
                               cmp_per_decade, cmp_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
