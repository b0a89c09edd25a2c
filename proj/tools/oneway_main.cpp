// Command-line front end: benchmark generators, measurements, protocol runs,
// extractor audits and the numeric verification suites. Exit codes: 0 ok,
// 1 validation error, 2 infeasible or cap exceeded.

#include <cinttypes>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "oneway/dimensions.hpp"
#include "oneway/errors.hpp"
#include "oneway/extractors.hpp"
#include "oneway/generators.hpp"
#include "oneway/info.hpp"
#include "oneway/io.hpp"
#include "oneway/protocols.hpp"
#include "oneway/quantum.hpp"
#include "oneway/rectangles.hpp"

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Output plumbing: key=value lines to stdout, optional CSV and JSON reports.
// All number formatting is locale-free and deterministic.
// ---------------------------------------------------------------------------

std::string fmt_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_human(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    std::string s = buf;
    if (s.find_first_of(".eE") == std::string::npos &&
        s.find_first_of("0123456789") != std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
        s += ".0";
    return s;
}

struct Report {
    std::string csv_path;
    std::string json_path;
    std::string csv_text;
    json payload;

    void kv(const std::string& key, const std::string& value) {
        std::cout << key << "=" << value << "\n";
        payload[key] = value;
    }
    void kv(const std::string& key, double value) {
        std::cout << key << "=" << fmt_human(value) << "\n";
        payload[key] = value;
    }
    void kv(const std::string& key, std::int64_t value) {
        std::cout << key << "=" << value << "\n";
        payload[key] = value;
    }
    void kv(const std::string& key, int value) { kv(key, static_cast<std::int64_t>(value)); }
    void kv(const std::string& key, bool value) {
        std::cout << key << "=" << (value ? "true" : "false") << "\n";
        payload[key] = value;
    }

    void flush(const std::string& command) {
        if (!csv_path.empty()) oneway::write_text_file(csv_path, csv_text);
        if (!json_path.empty()) {
            json out{{"schema_version", 1}, {"command", command}};
            out.update(payload);
            oneway::write_text_file(json_path, out.dump(2) + "\n");
        }
    }
};

std::string join_ints(std::span<const int> v) {
    std::ostringstream ss;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) ss << ",";
        ss << v[i];
    }
    return ss.str();
}

std::string join_doubles(std::span<const double> v) {
    std::ostringstream ss;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) ss << ",";
        ss << fmt_human(v[i]);
    }
    return ss.str();
}

// ---------------------------------------------------------------------------
// Subcommand state
// ---------------------------------------------------------------------------

struct Options {
    // global
    std::string csv_path, json_path;
    int threads = 1;

    // bench gen
    std::string kind;
    int n = 4;
    std::string out_path, dist_out_path;

    // measure / shared inputs
    std::string fn_path, dist_path;
    double eps = 0.1;
    double gamma = 0.1;
    bool exact = false;
    bool greedy = false;

    // protocol
    std::int64_t m = -1;
    double c0 = 1.0;
    double l_const = 16.0;
    bool truncate = false;
    std::string mode = "independent";
    bool nonboolean = false;
    std::int64_t trials = 1000;
    std::uint64_t seed = 1;

    // extractor
    int k = -1;
    bool with_rec = false;
    int leak_bits = -1;

    // quantum
    std::string suite;
};

oneway::FunctionTable require_function(const Options& opt) {
    if (opt.fn_path.empty())
        throw oneway::validation_error("missing --fn FILE");
    return oneway::load_function(opt.fn_path);
}

oneway::JointDistribution require_distribution(const Options& opt) {
    if (opt.dist_path.empty())
        throw oneway::validation_error("missing --dist FILE");
    return oneway::load_distribution(opt.dist_path);
}

oneway::JointDistribution distribution_or_uniform(const Options& opt,
                                                  const oneway::FunctionTable& f) {
    if (opt.dist_path.empty())
        return oneway::JointDistribution::uniform(f.x_size, f.y_size);
    auto d = oneway::load_distribution(opt.dist_path);
    if (d.x_size != f.x_size || d.y_size != f.y_size)
        throw oneway::validation_error("--dist shape does not match --fn");
    return d;
}

// ---------------------------------------------------------------------------
// bench gen
// ---------------------------------------------------------------------------

int cmd_bench_gen(const Options& opt, Report& report) {
    if (opt.out_path.empty())
        throw oneway::validation_error("bench gen: missing --out FILE");
    if (opt.kind == "npm") {
        const auto inst = oneway::make_npm(opt.n);
        oneway::save_function(inst.table, opt.out_path);
        report.kv("kind", std::string("npm"));
        report.kv("n", opt.n);
        report.kv("x_size", inst.table.x_size);
        report.kv("y_size", inst.table.y_size);
        report.kv("matchings", inst.matchings);
        report.kv("radius", inst.radius);
        if (!opt.dist_out_path.empty())
            oneway::save_distribution(inst.dist, opt.dist_out_path);
    } else {
        const auto kind = oneway::benchmark_kind_from_string(opt.kind);
        const auto f = oneway::make_benchmark(kind, opt.n);
        oneway::save_function(f, opt.out_path);
        report.kv("kind", opt.kind);
        report.kv("n", opt.n);
        report.kv("x_size", f.x_size);
        report.kv("y_size", f.y_size);
        if (!opt.dist_out_path.empty())
            oneway::save_distribution(
                oneway::JointDistribution::uniform(f.x_size, f.y_size), opt.dist_out_path);
    }
    report.flush("bench gen");
    return 0;
}

// ---------------------------------------------------------------------------
// measure
// ---------------------------------------------------------------------------

void csv_metric(Report& report, const std::string& name, const std::string& value) {
    if (report.csv_text.empty()) report.csv_text = "metric,value\n";
    report.csv_text += name + "," + value + "\n";
}

int cmd_measure_vc(const Options& opt, Report& report) {
    const auto f = require_function(opt);
    const auto res = oneway::vc_dimension(f);
    report.kv("vc", res.dimension);
    report.kv("witness_columns", join_ints(res.witness.columns));
    csv_metric(report, "vc", std::to_string(res.dimension));
    csv_metric(report, "witness_columns", "\"" + join_ints(res.witness.columns) + "\"");
    report.flush("measure vc");
    return 0;
}

int cmd_measure_pdim(const Options& opt, Report& report) {
    const auto f = require_function(opt);
    const auto res = oneway::pseudo_dimension(f, opt.gamma);
    report.kv("pdim", res.dimension);
    report.kv("gamma", opt.gamma);
    report.kv("witness_columns", join_ints(res.witness.columns));
    report.kv("witness_thresholds", join_doubles(res.witness.thresholds));
    csv_metric(report, "pdim", std::to_string(res.dimension));
    csv_metric(report, "gamma", fmt_full(opt.gamma));
    report.flush("measure pdim");
    return 0;
}

int cmd_measure_mi(const Options& opt, Report& report) {
    const auto d = require_distribution(opt);
    const double mi = oneway::mutual_information(d);
    report.kv("mi_bits", mi);
    report.kv("is_product", d.is_product(1e-9));
    csv_metric(report, "mi_bits", fmt_full(mi));
    report.flush("measure mi");
    return 0;
}

int cmd_measure_minentropy(const Options& opt, Report& report) {
    const auto d = require_distribution(opt);
    const oneway::MassFunction joint(d.p);
    const oneway::MassFunction mx(d.x_marginal());
    const oneway::MassFunction my(d.y_marginal());
    report.kv("minentropy_bits", oneway::min_entropy(joint));
    report.kv("minentropy_x_bits", oneway::min_entropy(mx));
    report.kv("minentropy_y_bits", oneway::min_entropy(my));
    csv_metric(report, "minentropy_bits", fmt_full(oneway::min_entropy(joint)));
    report.flush("measure minentropy");
    return 0;
}

int cmd_measure_rec(const Options& opt, Report& report) {
    const auto f = require_function(opt);
    const auto d = distribution_or_uniform(opt, f);
    oneway::RectangleCertificate cert;
    if (opt.exact) {
        oneway::RectangleOptions ropts;
        ropts.threads = opt.threads;
        cert = oneway::rec_exact(f, d, opt.eps, ropts);
    } else {
        cert = oneway::rec_greedy(f, d, opt.eps);
    }
    report.kv("rec_bits", cert.value_bits);
    report.kv("exact", opt.exact);
    report.kv("mass", cert.mass);
    report.kv("error", cert.error);
    report.kv("S", join_ints(cert.rows));
    report.payload["certificate"] = json::parse(cert.to_json());
    csv_metric(report, "rec_bits", fmt_full(cert.value_bits));
    csv_metric(report, "mass", fmt_full(cert.mass));
    csv_metric(report, "error", fmt_full(cert.error));
    report.flush("measure rec");
    return 0;
}

int cmd_measure_dopt(const Options& opt, Report& report) {
    const auto f = require_function(opt);
    const auto d = distribution_or_uniform(opt, f);
    const auto res = oneway::optimal_oneway(f, d, opt.eps);
    report.kv("dopt_bits", res.bits);
    report.kv("blocks", res.blocks);
    report.kv("error", res.error);
    report.kv("partition", join_ints(res.block_of_x));
    csv_metric(report, "dopt_bits", std::to_string(res.bits));
    csv_metric(report, "blocks", std::to_string(res.blocks));
    csv_metric(report, "error", fmt_full(res.error));
    report.flush("measure dopt");
    return 0;
}

// ---------------------------------------------------------------------------
// protocol run / calibrate
// ---------------------------------------------------------------------------

const char* kProtocolCsvHeader =
    "fn,dist,eps,m,mode,truncate,mean_m1_bits,max_m1_bits,m2_bits,"
    "error_rate,abort_rate,mi_bits,vc_or_pdim\n";

std::string protocol_csv_row(const Options& opt, std::int64_t m,
                             const oneway::TranscriptStats& stats,
                             const std::string& vc_or_pdim) {
    std::ostringstream row;
    row << opt.fn_path << "," << opt.dist_path << "," << fmt_full(opt.eps) << "," << m << ","
        << opt.mode << "," << (opt.truncate ? 1 : 0) << "," << fmt_full(stats.mean_m1_bits)
        << "," << stats.max_m1_bits << "," << stats.m2_bits << ","
        << fmt_full(stats.error_rate) << "," << fmt_full(stats.abort_rate) << ","
        << fmt_full(stats.mi_bits) << "," << vc_or_pdim << "\n";
    return row.str();
}

std::string dimension_field(const oneway::FunctionTable& f, bool nonboolean, double eps) {
    try {
        if (!nonboolean) return std::to_string(oneway::vc_dimension(f).dimension);
        const double gamma = eps * eps / (576.0 * f.z_size * f.z_size);
        return std::to_string(oneway::pseudo_dimension(f, gamma).dimension);
    } catch (const oneway::cap_error&) {
        return "";
    }
}

oneway::ProtocolParams protocol_params(const Options& opt) {
    oneway::ProtocolParams params;
    params.c0 = opt.c0;
    params.l_const = opt.l_const;
    params.eps = opt.eps;
    params.truncate = opt.truncate;
    params.trials = opt.trials;
    params.seed = opt.seed;
    params.threads = opt.threads;
    if (opt.mode == "independent") params.mode = oneway::SamplingMode::independent;
    else if (opt.mode == "joint") params.mode = oneway::SamplingMode::joint;
    else throw oneway::validation_error("--mode must be independent or joint");
    return params;
}

void report_stats(Report& report, const oneway::TranscriptStats& stats) {
    report.kv("trials", stats.trials);
    report.kv("mean_m1_bits", stats.mean_m1_bits);
    report.kv("max_m1_bits", stats.max_m1_bits);
    report.kv("m2_bits", stats.m2_bits);
    report.kv("error_rate", stats.error_rate);
    report.kv("abort_rate", stats.abort_rate);
    report.kv("mi_bits", stats.mi_bits);
}

int cmd_protocol_run(const Options& opt, Report& report) {
    const auto f = require_function(opt);
    const auto d = require_distribution(opt);
    auto params = protocol_params(opt);
    if (opt.m >= 0) {
        params.m = opt.m;
    } else {
        // Default sample count from the learning bounds: m0(VC, eps/4, eps/4)
        // for boolean tables, m0(pdim, eps/k, eps) otherwise.
        if (!opt.nonboolean) {
            const int vc = oneway::vc_dimension(f).dimension;
            params.m = oneway::sample_size_boolean(vc, opt.eps / 4.0, opt.eps / 4.0, opt.c0);
        } else {
            const double gamma = opt.eps * opt.eps / (576.0 * f.z_size * f.z_size);
            const int pd = oneway::pseudo_dimension(f, gamma).dimension;
            params.m = oneway::sample_size_nonboolean(pd, opt.eps / f.z_size, opt.eps, opt.c0);
        }
        if (params.m * params.trials > 1'000'000'000)
            throw oneway::cap_error(
                "derived sample count m=" + std::to_string(params.m) +
                " is impractical at " + std::to_string(params.trials) +
                " trials; pass --m explicitly or use `protocol calibrate`");
    }
    const auto stats = opt.nonboolean ? oneway::run_nonboolean_protocol(f, d, params)
                                      : oneway::run_boolean_protocol(f, d, params);
    report.kv("m", params.m);
    report_stats(report, stats);
    report.csv_text = kProtocolCsvHeader;
    report.csv_text += protocol_csv_row(opt, params.m, stats,
                                        dimension_field(f, opt.nonboolean, opt.eps));
    report.flush("protocol run");
    return 0;
}

int cmd_protocol_calibrate(const Options& opt, Report& report) {
    const auto f = require_function(opt);
    const auto d = require_distribution(opt);
    const auto params = protocol_params(opt);
    const auto result = oneway::calibrate_m(f, d, params, opt.eps, opt.nonboolean);
    report.kv("m", result.m);
    report_stats(report, result.stats);
    report.csv_text = kProtocolCsvHeader;
    report.csv_text += protocol_csv_row(opt, result.m, result.stats,
                                        dimension_field(f, opt.nonboolean, opt.eps));
    report.flush("protocol calibrate");
    return 0;
}

// ---------------------------------------------------------------------------
// extractor audit
// ---------------------------------------------------------------------------

int cmd_extractor_audit(const Options& opt, Report& report) {
    const auto h = require_function(opt);
    oneway::ExtractorOptions eopts;
    eopts.allow_greedy = opt.greedy;
    const int n = [&] {
        int b = 0;
        while ((1 << b) < h.x_size) ++b;
        return b;
    }();

    report.csv_text = "k,bias,is_strong,rec_value,margin\n";
    const int k_lo = opt.k >= 0 ? opt.k : 0;
    const int k_hi = opt.k >= 0 ? opt.k : n;
    json rows = json::array();
    for (int k = k_lo; k <= k_hi; ++k) {
        const auto audit = oneway::worst_flat_source(h, k, eopts);
        const bool strong = audit.bias < 2.0 * opt.eps;
        std::string rec_field, margin_field;
        json row{{"k", k}, {"bias", audit.bias}, {"is_strong", strong},
                 {"exact", audit.exact}, {"worst_set", audit.worst_set}};
        if (opt.with_rec && strong) {
            oneway::RectangleOptions ropts;
            ropts.threads = opt.threads;
            const auto cert = oneway::rec_exact(
                h, oneway::JointDistribution::uniform(h.x_size, h.y_size), 0.5 - opt.eps, ropts);
            rec_field = fmt_full(cert.value_bits);
            margin_field = fmt_full(cert.value_bits - static_cast<double>(n - k));
            row["rec_bits"] = cert.value_bits;
            row["margin"] = cert.value_bits - static_cast<double>(n - k);
        }
        report.csv_text += std::to_string(k) + "," + fmt_full(audit.bias) + "," +
                           (strong ? "1" : "0") + "," + rec_field + "," + margin_field + "\n";
        std::cout << "k=" << k << " bias=" << fmt_human(audit.bias)
                  << " is_strong=" << (strong ? "true" : "false");
        if (!rec_field.empty())
            std::cout << " rec_bits=" << fmt_human(std::stod(rec_field))
                      << " margin=" << fmt_human(std::stod(margin_field));
        if (!audit.exact) std::cout << " (greedy lower bound)";
        std::cout << "\n";
        rows.push_back(std::move(row));
    }
    report.payload["audit"] = std::move(rows);

    const auto threshold = oneway::extractor_threshold(h, opt.eps, eopts);
    if (threshold) report.kv("threshold_k", *threshold);
    else report.kv("threshold_k", std::string("none"));

    if (opt.leak_bits >= 0) {
        if (opt.leak_bits > n)
            throw oneway::validation_error("--leak bits exceed n");
        std::vector<int> leak(h.x_size);
        for (int x = 0; x < h.x_size; ++x) leak[x] = x >> (n - opt.leak_bits);
        const auto side = oneway::side_info_experiment(h, opt.eps, leak, eopts);
        report.kv("si_mi_bits", side.mi_bits);
        report.kv("si_dist", side.dist);
        report.kv("a_eps", side.a_eps);
        report.kv("b_eps", side.b_eps);
        report.kv("si_k", side.k);
        report.kv("implication_ok", side.implication_ok);
    }
    report.flush("extractor audit");
    return 0;
}

// ---------------------------------------------------------------------------
// quantum check suites
// ---------------------------------------------------------------------------

struct SuiteOutcome {
    std::int64_t instances = 0;
    std::int64_t violations = 0;
    double max_violation = 0.0;

    void record(bool ok, double margin) {
        ++instances;
        if (!ok) {
            ++violations;
            max_violation = std::max(max_violation, margin);
        }
    }
};

SuiteOutcome suite_helstrom(std::int64_t trials, std::uint64_t seed) {
    SuiteOutcome out;
    for (std::int64_t i = 0; i < trials; ++i) {
        oneway::RandomStream rng(oneway::substream_seed(seed, i));
        const int dim = (i % 2 == 0) ? 2 : 4;
        const double p0 = 0.1 + 0.8 * rng.next_unit();
        const auto rho0 = oneway::random_density(dim, rng);
        const auto rho1 = oneway::random_density(dim, rng);
        const double opt = oneway::helstrom_success(p0, rho0, 1.0 - p0, rho1);

        oneway::QuantumEnsemble ens{{{p0, rho0}, {1.0 - p0, rho1}}};
        const auto meas = oneway::helstrom_measurement(p0, rho0, 1.0 - p0, rho1);
        const auto joint = oneway::measure(ens, meas);
        const double attained = joint.probs[0] + joint.probs[3];
        bool ok = std::abs(attained - opt) <= 1e-9;

        for (int t = 0; t < 1000 && ok; ++t) {
            const auto rnd = oneway::random_two_outcome_measurement(dim, rng);
            const auto rj = oneway::measure(ens, rnd);
            const double succ = std::max(rj.probs[0] + rj.probs[3],
                                         rj.probs[1] + rj.probs[2]);
            ok = succ <= opt + 1e-9;
        }
        out.record(ok, std::abs(attained - opt));
    }
    return out;
}

SuiteOutcome suite_holevo(std::int64_t trials, std::uint64_t seed) {
    SuiteOutcome out;
    for (std::int64_t i = 0; i < trials; ++i) {
        oneway::RandomStream rng(oneway::substream_seed(seed, i));
        const int dim = 2 + static_cast<int>(rng.next_u64() % 3);      // 2..4
        const int nx = 2 + static_cast<int>(rng.next_u64() % 3);      // 2..4
        const int outcomes = 2 + static_cast<int>(rng.next_u64() % 3); // 2..4
        oneway::QuantumEnsemble ens;
        std::vector<double> priors(nx);
        double total = 0.0;
        for (int x = 0; x < nx; ++x) total += priors[x] = 0.05 + rng.next_unit();
        for (int x = 0; x < nx; ++x)
            ens.states.emplace_back(priors[x] / total, oneway::random_density(dim, rng));
        const double chi = oneway::holevo_chi(ens);
        const auto povm = oneway::random_povm(dim, outcomes, rng);
        const auto joint = oneway::measure(ens, povm);
        oneway::JointDistribution matrix(nx, outcomes);
        matrix.p = joint.probs;
        const double mi = oneway::mutual_information(matrix);
        out.record(mi <= chi + 1e-9, mi - chi);
    }
    return out;
}

SuiteOutcome suite_largeinf(std::int64_t trials, std::uint64_t seed) {
    SuiteOutcome out;
    for (std::int64_t i = 0; i < trials; ++i) {
        oneway::RandomStream rng(oneway::substream_seed(seed, i));
        const double p0 = 0.1 + 0.8 * rng.next_unit();
        const auto rho0 = oneway::random_density(2, rng);
        const auto rho1 = oneway::random_density(2, rng);
        oneway::QuantumEnsemble ens{{{p0, rho0}, {1.0 - p0, rho1}}};
        const auto meas = oneway::helstrom_measurement(p0, rho0, 1.0 - p0, rho1);
        const auto gap = oneway::largeinf_gap(ens, meas);
        out.record(gap.mi_bits >= gap.bound_bits - 1e-9, gap.bound_bits - gap.mi_bits);
    }
    return out;
}

SuiteOutcome suite_fano(std::int64_t trials, std::uint64_t seed) {
    SuiteOutcome out;
    for (std::int64_t i = 0; i < trials; ++i) {
        oneway::RandomStream rng(oneway::substream_seed(seed, i));
        const int n = 2 + static_cast<int>(rng.next_u64() % 4); // square joints up to 5x5
        oneway::JointDistribution d(n, n);
        double total = 0.0;
        for (auto& cell : d.p) total += cell = rng.next_unit();
        for (auto& cell : d.p) cell /= total;
        double pe = 0.0;
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                if (x != y) pe += d.at(x, y);
        const auto joint = oneway::LabeledJoint::from_matrix(d);
        const std::vector<int> gx{0}, gy{1};
        const double cond = oneway::group_entropy(joint, std::span<const int>(gx)) -
                            oneway::conditional_mutual_information(
                                joint, std::span<const int>(gx), std::span<const int>(gy), {});
        // S(X|Y) = S(X) - I(X:Y)
        const double bound = oneway::fano_bound(pe, n);
        out.record(bound >= cond - 1e-9, cond - bound);
    }
    return out;
}

SuiteOutcome suite_ssmall(std::int64_t, std::uint64_t) {
    SuiteOutcome out;
    for (int i = 0; i <= 500; ++i) {
        const double delta = static_cast<double>(i) * 1e-3;
        const double lhs1 = oneway::binary_entropy(0.5 + delta);
        const double lhs2 = oneway::binary_entropy(delta);
        const bool ok1 = lhs1 <= 1.0 - 2.0 * delta * delta + 1e-12;
        const bool ok2 = lhs2 <= 2.0 * std::sqrt(delta) + 1e-12;
        out.record(ok1 && ok2, std::max(lhs1 - (1.0 - 2.0 * delta * delta),
                                        lhs2 - 2.0 * std::sqrt(delta)));
    }
    return out;
}

int cmd_quantum_check(const Options& opt, Report& report) {
    SuiteOutcome out;
    if (opt.suite == "helstrom") out = suite_helstrom(opt.trials, opt.seed);
    else if (opt.suite == "holevo") out = suite_holevo(opt.trials, opt.seed);
    else if (opt.suite == "largeinf") out = suite_largeinf(opt.trials, opt.seed);
    else if (opt.suite == "fano") out = suite_fano(opt.trials, opt.seed);
    else if (opt.suite == "ssmall") out = suite_ssmall(opt.trials, opt.seed);
    else throw oneway::validation_error("unknown suite '" + opt.suite + "'");

    report.kv("suite", opt.suite);
    report.kv("instances", out.instances);
    report.kv("violations", out.violations);
    report.kv("max_violation", out.max_violation);
    report.csv_text = "suite,instances,violations,max_violation,seed\n";
    report.csv_text += opt.suite + "," + std::to_string(out.instances) + "," +
                       std::to_string(out.violations) + "," + fmt_full(out.max_violation) +
                       "," + std::to_string(opt.seed) + "\n";
    report.flush("quantum check");
    return out.violations == 0 ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"one-way communication measures, protocols and verification suites"};
    app.require_subcommand(1);
    app.fallthrough(); // global --csv/--json/--threads may follow the subcommand
    Options opt;

    app.add_option("--csv", opt.csv_path, "write a CSV report to FILE");
    app.add_option("--json", opt.json_path, "write a JSON report (schema_version 1) to FILE");
    app.add_option("--threads", opt.threads, "worker cap for parallel searches and trials");

    auto* bench = app.add_subcommand("bench", "benchmark function generators");
    auto* gen = bench->add_subcommand("gen", "generate a function table (and distribution)");
    gen->add_option("--kind", opt.kind, "gt | ip | disj | npm")->required();
    gen->add_option("--n", opt.n, "bit width (gt/ip/disj) or NPM size parameter")->required();
    gen->add_option("--out", opt.out_path, "function file to write")->required();
    gen->add_option("--dist-out", opt.dist_out_path,
                    "distribution file to write (NPM: its hard distribution; else uniform)");

    auto* measure = app.add_subcommand("measure", "complexity measures on explicit tables");
    auto* m_vc = measure->add_subcommand("vc", "exact VC dimension (CSV: metric,value)");
    auto* m_pdim = measure->add_subcommand("pdim", "exact gamma-pseudo-dimension");
    auto* m_mi = measure->add_subcommand("mi", "mutual information of a distribution");
    auto* m_me = measure->add_subcommand("minentropy", "min-entropy of a distribution");
    auto* m_rec = measure->add_subcommand("rec", "one-way rectangle bound");
    auto* m_dopt = measure->add_subcommand("dopt", "optimal one-way bits (partition oracle)");
    for (auto* sub : {m_vc, m_pdim, m_rec, m_dopt})
        sub->add_option("--fn", opt.fn_path, "function file");
    for (auto* sub : {m_mi, m_me, m_rec, m_dopt})
        sub->add_option("--dist", opt.dist_path, "distribution file (rec/dopt default: uniform)");
    for (auto* sub : {m_rec, m_dopt})
        sub->add_option("--eps", opt.eps, "error budget");
    m_pdim->add_option("--gamma", opt.gamma, "shattering margin")->required();
    m_rec->add_flag("--exact", opt.exact, "exhaustive subset enumeration (<= 24 rows)");
    m_rec->add_flag("--greedy", opt.greedy, "greedy upper bound (default)");

    auto* protocol = app.add_subcommand("protocol", "sampling-based one-way protocols");
    auto* p_run = protocol->add_subcommand(
        "run", "Monte Carlo protocol run (CSV: fn,dist,eps,m,mode,truncate,mean_m1_bits,"
               "max_m1_bits,m2_bits,error_rate,abort_rate,mi_bits,vc_or_pdim)");
    auto* p_cal = protocol->add_subcommand(
        "calibrate", "smallest m meeting the error target at the given trial budget");
    for (auto* sub : {p_run, p_cal}) {
        sub->add_option("--fn", opt.fn_path, "function file")->required();
        sub->add_option("--dist", opt.dist_path, "distribution file")->required();
        sub->add_option("--eps", opt.eps, "target error in (0, 1/2)");
        sub->add_option("--trials", opt.trials, "Monte Carlo trials");
        sub->add_option("--seed", opt.seed, "master seed (per-trial substreams)");
        sub->add_option("--c0", opt.c0, "learning-constant stand-in");
        sub->add_option("--l", opt.l_const, "per-call overhead stand-in");
        sub->add_flag("--truncate", opt.truncate, "abort to output 0 past 2c/eps message bits");
        sub->add_option("--mode", opt.mode, "independent | joint");
        sub->add_flag("--nonboolean", opt.nonboolean, "L1-learner variant with log2(k)-bit M2");
    }
    p_run->add_option("--m", opt.m, "sample count (default: learning-bound formula)");

    auto* extractor = app.add_subcommand("extractor", "strong-extractor audits");
    auto* e_audit = extractor->add_subcommand(
        "audit", "worst flat-source bias per k (CSV: k,bias,is_strong,rec_value,margin)");
    e_audit->add_option("--fn", opt.fn_path, "boolean function file, power-of-two sizes")
        ->required();
    e_audit->add_option("--eps", opt.eps, "extractor error parameter")->required();
    e_audit->add_option("--k", opt.k, "audit a single min-entropy level");
    e_audit->add_flag("--rec", opt.with_rec, "also compute the rectangle bound per strong k");
    e_audit->add_option("--leak", opt.leak_bits, "side-information sweep: leak first t bits");
    e_audit->add_flag("--greedy", opt.greedy, "allow the coordinate-ascent fallback for m > 4");

    auto* quantum = app.add_subcommand("quantum", "numeric verification suites");
    auto* q_check = quantum->add_subcommand(
        "check", "run a suite (CSV: suite,instances,violations,max_violation,seed)");
    q_check->add_option("--suite", opt.suite, "helstrom | holevo | largeinf | fano | ssmall")
        ->required();
    q_check->add_option("--trials", opt.trials, "instance count");
    q_check->add_option("--seed", opt.seed, "master seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1; // flag-level problems are validation errors
    }

    Report report;
    report.csv_path = opt.csv_path;
    report.json_path = opt.json_path;

    try {
        if (gen->parsed()) return cmd_bench_gen(opt, report);
        if (m_vc->parsed()) return cmd_measure_vc(opt, report);
        if (m_pdim->parsed()) return cmd_measure_pdim(opt, report);
        if (m_mi->parsed()) return cmd_measure_mi(opt, report);
        if (m_me->parsed()) return cmd_measure_minentropy(opt, report);
        if (m_rec->parsed()) return cmd_measure_rec(opt, report);
        if (m_dopt->parsed()) return cmd_measure_dopt(opt, report);
        if (p_run->parsed()) return cmd_protocol_run(opt, report);
        if (p_cal->parsed()) return cmd_protocol_calibrate(opt, report);
        if (e_audit->parsed()) return cmd_extractor_audit(opt, report);
        if (q_check->parsed()) return cmd_quantum_check(opt, report);
        std::cerr << "error: no subcommand given\n";
        return 1;
    } catch (const oneway::validation_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        if (!opt.json_path.empty()) {
            json err{{"schema_version", 1}, {"error", e.what()}, {"code", 1}};
            oneway::write_text_file(opt.json_path, err.dump(2) + "\n");
        }
        return 1;
    } catch (const oneway::cap_error& e) {
        std::cerr << "infeasible or cap exceeded: " << e.what() << "\n";
        if (!opt.json_path.empty()) {
            json err{{"schema_version", 1}, {"error", e.what()}, {"code", 2}};
            oneway::write_text_file(opt.json_path, err.dump(2) + "\n");
        }
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
