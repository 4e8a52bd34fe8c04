// Copyright 2026 nicd Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "nicd/bounds.hpp"
#include "nicd/gaussian.hpp"
#include "nicd/noise.hpp"
#include "nicd/protocol.hpp"
#include "nicd/serialize.hpp"
#include "nicd/sets.hpp"
#include "nicd/verify.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;

using nicd::format_double;

// Output sink: file path or stdout.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ";";
        out += format_double(v[i]);
    }
    return out;
}

void csv_header(std::ostream& out, const std::string& subcommand,
                const std::vector<std::pair<std::string, std::string>>& params,
                const std::string& seed) {
    out << "# nicd version=" << kVersion << "\n";
    out << "# subcommand=" << subcommand << "\n";
    for (const auto& [key, value] : params) out << "# " << key << "=" << value << "\n";
    out << "# seed=" << seed << "\n";
}

nlohmann::json json_header(const std::string& subcommand, const nlohmann::json& params,
                           const nlohmann::json& seed) {
    return nlohmann::json{{"nicd_version", kVersion},
                          {"subcommand", subcommand},
                          {"parameters", params},
                          {"seed", seed}};
}

// ---------------------------------------------------------------------------

int cmd_bound(const std::vector<double>& deltas, const std::vector<double>& epsilons, int s_max,
              const std::string& out_path, const std::string& trace_path) {
    Output output(out_path);
    csv_header(output.stream(), "bound",
               {{"delta", join_doubles(deltas)},
                {"epsilon", join_doubles(epsilons)},
                {"s_max", std::to_string(s_max)}},
               "none");
    output.stream() << "epsilon,delta,S,p,sigma_sq,capped\n";

    std::unique_ptr<Output> trace;
    if (!trace_path.empty()) {
        trace = std::make_unique<Output>(trace_path);
        csv_header(trace->stream(), "bound",
                   {{"delta", join_doubles(deltas)},
                    {"epsilon", join_doubles(epsilons)},
                    {"s_max", std::to_string(s_max)},
                    {"content", "per-s scan trace"}},
                   "none");
        trace->stream() << "epsilon,delta,s,p,sigma_sq,satisfied\n";
    }

    bool any_ok = false;
    for (double eps : epsilons) {
        for (double delta : deltas) {
            const nicd::AlphabetScan scan = nicd::min_alphabet(delta, eps, s_max);
            if (scan.min_s) {
                any_ok = true;
                const auto& row = scan.trace[static_cast<std::size_t>(*scan.min_s - 2)];
                output.stream() << format_double(eps) << ',' << format_double(delta) << ','
                                << *scan.min_s << ',' << format_double(row.p) << ','
                                << format_double(row.sigma_sq) << ",0\n";
            } else {
                output.stream() << format_double(eps) << ',' << format_double(delta)
                                << ",-1,nan,nan,1\n";
            }
            if (trace) {
                for (const auto& row : scan.trace)
                    trace->stream() << format_double(eps) << ',' << format_double(delta) << ','
                                    << row.s << ',' << format_double(row.p) << ','
                                    << format_double(row.sigma_sq) << ','
                                    << (row.satisfied ? 1 : 0) << '\n';
            }
            if (!scan.predicate_monotone)
                std::cerr << "warning: predicate not monotone on scanned prefix at eps="
                          << format_double(eps) << " delta=" << format_double(delta) << "\n";
        }
    }
    return any_ok ? kExitOk : kExitVerification;
}

// ---------------------------------------------------------------------------

int cmd_evaluate(const std::string& descriptor, const std::vector<double>& epsilons,
                 const std::vector<int>& n_list, const std::string& format,
                 const std::string& out_path) {
    const nicd::SetSpec base = nicd::parse_set_descriptor(descriptor);

    std::vector<nicd::SetSpec> specs;
    if (n_list.empty()) {
        specs.push_back(base);
    } else {
        if (std::holds_alternative<nicd::ExplicitSet>(base))
            throw std::invalid_argument("evaluate: --n applies to structured descriptors only");
        for (int n : n_list) {
            nicd::SetSpec spec = base;
            std::visit([n](auto& v) { v.n = n; }, spec);
            nicd::validate_spec(spec);
            specs.push_back(spec);
        }
    }

    Output output(out_path);
    const bool csv = format == "csv";
    if (csv) {
        csv_header(output.stream(), "evaluate",
                   {{"set", descriptor}, {"epsilon", join_doubles(epsilons)}}, "none");
        output.stream() << "set,epsilon,method,set_probability,joint,conditional,m_value,"
                           "log_set_probability,log_joint,limit_m\n";
    } else {
        output.stream() << json_header("evaluate",
                                       {{"set", descriptor}, {"epsilon", epsilons}}, nullptr)
                               .dump()
                        << "\n";
    }

    for (const auto& spec : specs) {
        for (double eps : epsilons) {
            const nicd::NoiseModel model = nicd::make_noise_model(nicd::spec_s(spec), eps);
            const nicd::AgreementReport rep = nicd::analyze_set(spec, model);
            std::optional<double> limit_m;
            if (const auto* ball = std::get_if<nicd::HammingBallSet>(&spec);
                ball && ball->alpha > 0.0 && eps > 0.0)
                limit_m = nicd::hamming_limit_m(ball->s, ball->alpha, eps);
            if (csv) {
                output.stream() << nicd::spec_descriptor(spec) << ',' << format_double(eps) << ','
                                << nicd::method_name(rep.method) << ','
                                << format_double(rep.set_probability) << ','
                                << format_double(rep.joint) << ','
                                << format_double(rep.conditional) << ','
                                << (rep.m_value ? format_double(*rep.m_value) : "") << ','
                                << format_double(rep.log_set_probability) << ','
                                << format_double(rep.log_joint) << ','
                                << (limit_m ? format_double(*limit_m) : "") << '\n';
            } else {
                nlohmann::json j = nicd::report_to_json(spec, model, rep);
                if (limit_m) j["limit_m"] = *limit_m;
                output.stream() << j.dump() << "\n";
            }
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_construct(const std::string& set_path, int k, int seeds, double epsilon,
                  std::uint64_t seed, const std::string& out_path, const std::string& report_path,
                  bool no_decoder) {
    const nicd::ExplicitSet set = nicd::load_explicit_set(set_path);
    const nicd::NoiseModel model = nicd::make_noise_model(set.s, epsilon);
    if (k < 0 || k > set.n) throw std::invalid_argument("construct: k must lie in [0, n]");

    {
        const double cap = std::pow(static_cast<double>(set.s), set.n - k);
        const double m = static_cast<double>(set.points.size());
        if (m < cap / 8.0 || m > cap / 4.0)
            std::cerr << "warning: |A|=" << set.points.size() << " outside the size window ["
                      << cap / 8.0 << ", " << cap / 4.0 << "]; the 1/16 guarantee may not apply\n";
    }

    const nicd::Rng root(seed);
    std::optional<nicd::TranslationProtocol> best;
    nicd::ProtocolVerification best_verification;
    std::uint64_t best_seed = 0;
    for (int i = 0; i < seeds; ++i) {
        const std::uint64_t child = root.derive(static_cast<std::uint64_t>(i)).seed();
        const nicd::CenterSet centers = nicd::build_center_set(set.s, set.n, k, child);
        nicd::TranslationProtocol tp = nicd::build_protocol(set, centers);
        const nicd::ProtocolVerification v = nicd::verify_protocol(tp, model);
        if (!best || v.ratio > best_verification.ratio) {
            best = std::move(tp);
            best_verification = v;
            best_seed = child;
        }
    }

    {
        Output output(out_path);
        nlohmann::json j = nicd::protocol_to_json(*best, !no_decoder);
        j["construct"] = {{"epsilon", epsilon},
                          {"seeds_tried", seeds},
                          {"base_seed", seed},
                          {"best_seed", best_seed}};
        output.stream() << j.dump(2) << "\n";
    }
    {
        Output report(report_path);
        report.stream() << json_header("construct",
                                       {{"set", set_path},
                                        {"k", k},
                                        {"seeds", seeds},
                                        {"epsilon", epsilon}},
                                       seed)
                               .dump()
                        << "\n";
        const nlohmann::json j = {
            {"best_seed", best_seed},
            {"agreement", best_verification.agreement},
            {"set_conditional", best_verification.set_conditional},
            {"ratio", best_verification.ratio},
            {"ratio_at_least_one_sixteenth", best_verification.ratio >= 1.0 / 16.0},
            {"uniform_marginal", best_verification.uniform_marginal},
            {"uniform_conditional", best_verification.uniform_conditional},
            {"size_window_ok", best_verification.size_window_ok}};
        report.stream() << j.dump() << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_simulate(const std::string& protocol_path, double epsilon, std::int64_t samples,
                 std::uint64_t seed, const std::string& out_path) {
    std::ifstream in(protocol_path);
    if (!in) throw std::runtime_error("simulate: cannot open " + protocol_path);
    nlohmann::json pj;
    in >> pj;
    const nicd::TranslationProtocol tp = nicd::protocol_from_json(pj);
    const nicd::NoiseModel model = nicd::make_noise_model(tp.centers.s, epsilon);

    nicd::Rng rng(seed);
    std::int64_t agreements = 0;
    for (std::int64_t i = 0; i < samples; ++i) {
        const auto [x, y] = nicd::sample_correlated_pair(model, tp.centers.n, rng);
        const std::uint64_t xi = nicd::index_of(x, model.s);
        const std::uint64_t yi = nicd::index_of(y, model.s);
        if (tp.decoder[xi] == tp.decoder[yi]) ++agreements;
    }
    const double empirical = static_cast<double>(agreements) / static_cast<double>(samples);
    const nicd::ProtocolVerification v = nicd::verify_protocol(tp, model);
    const double stderr_est =
        std::sqrt(std::max(empirical * (1.0 - empirical), 1e-300) / static_cast<double>(samples));

    Output output(out_path);
    output.stream() << json_header("simulate",
                                   {{"protocol", protocol_path},
                                    {"epsilon", epsilon},
                                    {"samples", samples}},
                                   seed)
                           .dump()
                    << "\n";
    const nlohmann::json j = {{"samples", samples},
                              {"agreements", agreements},
                              {"empirical_agreement", empirical},
                              {"exact_agreement", v.agreement},
                              {"stderr", stderr_est},
                              {"deviation_sigmas",
                               stderr_est > 0.0 ? (empirical - v.agreement) / stderr_est : 0.0}};
    output.stream() << j.dump() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_verify(const std::vector<std::string>& suites, std::uint64_t seed,
               const std::string& out_path) {
    Output output(out_path);
    {
        std::string names;
        for (const auto& s : suites) names += (names.empty() ? "" : ";") + s;
        csv_header(output.stream(), "verify", {{"suite", names}}, std::to_string(seed));
    }
    bool all_passed = true;
    for (const auto& name : suites) {
        const nicd::SuiteResult result = nicd::run_suite(name, seed);
        for (const auto& check : result.checks) {
            output.stream() << (check.passed ? "[PASS] " : "[FAIL] ") << result.suite << '/'
                            << check.name << ": achieved=" << format_double(check.achieved)
                            << " tolerance=" << format_double(check.tolerance);
            if (!check.detail.empty()) output.stream() << " (" << check.detail << ")";
            output.stream() << "\n";
        }
        all_passed = all_passed && result.passed;
    }
    output.stream() << (all_passed ? "verification passed" : "verification FAILED") << "\n";
    return all_passed ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact agreement probabilities, bounds, and protocol construction for "
                 "noise-correlated strings"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    // bound
    auto* bound = app.add_subcommand("bound", "emit minimal-alphabet curves S(delta, epsilon)");
    std::vector<double> b_deltas, b_epsilons;
    int b_smax = 100000;
    std::string b_out, b_trace;
    bound->add_option("--delta", b_deltas, "delta grid")->required()->expected(-1);
    bound->add_option("--epsilon", b_epsilons, "epsilon grid")->required()->expected(-1);
    bound->add_option("--s-max", b_smax, "scan cap");
    bound->add_option("--out", b_out, "output CSV path (default stdout)");
    bound->add_option("--trace-out", b_trace, "per-s scan trace CSV path");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "agreement reports for structured or "
                                                    "explicit sets");
    std::string e_set, e_format = "json", e_out;
    std::vector<double> e_epsilons;
    std::vector<int> e_ns;
    evaluate->add_option("--set", e_set,
                         "descriptor (cylinder:s=..,n=..,k=.. | ball:s=..,n=..,alpha=..[,zeros=1]) "
                         "or explicit-set file path")
        ->required();
    evaluate->add_option("--epsilon", e_epsilons, "noise rates")->required()->expected(-1);
    evaluate->add_option("--n", e_ns, "override n (structured sets; one report per n)")
        ->expected(-1);
    evaluate->add_option("--format", e_format, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));
    evaluate->add_option("--out", e_out, "output path (default stdout)");

    // construct
    auto* construct = app.add_subcommand("construct", "build a translation protocol from a set");
    std::string c_set, c_out, c_report;
    int c_k = 1, c_seeds = 50;
    double c_epsilon = 0.3;
    std::uint64_t c_seed = 1;
    bool c_nodec = false;
    construct->add_option("--set", c_set, "explicit-set file")->required();
    construct->add_option("--k", c_k, "output entropy (|C| = s^k)")->required();
    construct->add_option("--seeds", c_seeds, "number of seeds to try");
    construct->add_option("--epsilon", c_epsilon, "noise rate used to rank seeds")->required();
    construct->add_option("--seed", c_seed, "base seed");
    construct->add_option("--out", c_out, "protocol JSON path (default stdout)");
    construct->add_option("--report", c_report, "verification report path (default stdout)");
    construct->add_flag("--no-decoder", c_nodec, "omit the dense decoder table");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo agreement of a serialized "
                                                    "protocol");
    std::string s_protocol, s_out;
    double s_epsilon = 0.3;
    std::int64_t s_samples = 100000;
    std::uint64_t s_seed = 1;
    simulate->add_option("--protocol", s_protocol, "protocol JSON file")->required();
    simulate->add_option("--epsilon", s_epsilon, "noise rate")->required();
    simulate->add_option("--samples", s_samples, "sample count")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--seed", s_seed, "sampler seed");
    simulate->add_option("--out", s_out, "output path (default stdout)");

    // verify
    auto* verify = app.add_subcommand("verify", "run a named invariant suite");
    std::vector<std::string> v_suites;
    std::uint64_t v_seed = 12345;
    std::string v_out;
    verify->add_option("--suite", v_suites, "suite name(s)")
        ->required()
        ->expected(-1)
        ->check(CLI::IsMember(nicd::suite_names()));
    verify->add_option("--seed", v_seed, "suite seed");
    verify->add_option("--out", v_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion")
            return app.exit(e);
        (void)app.exit(e);
        return kExitUsage;
    }

    try {
        if (bound->parsed()) return cmd_bound(b_deltas, b_epsilons, b_smax, b_out, b_trace);
        if (evaluate->parsed()) return cmd_evaluate(e_set, e_epsilons, e_ns, e_format, e_out);
        if (construct->parsed())
            return cmd_construct(c_set, c_k, c_seeds, c_epsilon, c_seed, c_out, c_report, c_nodec);
        if (simulate->parsed()) return cmd_simulate(s_protocol, s_epsilon, s_samples, s_seed, s_out);
        if (verify->parsed()) return cmd_verify(v_suites, v_seed, v_out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerification;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerification;
    }
    return kExitUsage;
}
