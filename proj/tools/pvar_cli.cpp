// pvar: exact p-variation computation, norm checks, and the factorization /
// lifting pipeline on step functions, with JSON reports and seeded runs.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "pvar/io.hpp"
#include "pvar/lambda_variation.hpp"
#include "pvar/lifting.hpp"
#include "pvar/openness.hpp"
#include "pvar/suites.hpp"

namespace {

using json = nlohmann::json;
using namespace pvar;

// Exit codes are a stable contract.
constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitPrecondition = 2;
constexpr int kExitUsage = 64;

json margins_to_json(const std::array<double, 6>& margins) {
    json out = json::array();
    for (double m : margins) {
        if (std::isinf(m))
            out.push_back(nullptr);  // empty classification set
        else
            out.push_back(m);
    }
    return out;
}

json interval_collection_to_json(const IntervalCollection& c) {
    json out = json::array();
    for (const auto& s : c.intervals) {
        out.push_back({{"a", s.a},
                       {"b", s.b},
                       {"first_index", s.first_index},
                       {"last_index", s.last_index},
                       {"contains_one", s.contains_one},
                       {"inf_h", s.inf_h},
                       {"sup_h", s.sup_h},
                       {"sup_abs_F", s.sup_abs_F},
                       {"sup_abs_G", s.sup_abs_G}});
    }
    return out;
}

json plan_to_json(const ApproxPlan& plan) {
    return json{{"epsilon", plan.epsilon},
                {"p", plan.p_value},
                {"zero_pair", plan.zero_pair},
                {"identity", plan.identity},
                {"small_value_delta", plan.small_value_delta},
                {"eta", plan.eta},
                {"rho", plan.rho},
                {"N", plan.a0.size()},
                {"n", plan.a.size()},
                {"a0_intervals", interval_collection_to_json(plan.a0)},
                {"a_intervals", interval_collection_to_json(plan.a)},
                {"c", plan.c},
                {"d", plan.d},
                {"J_eta", plan.j_eta},
                {"J_eta_s", plan.j_eta_s},
                {"J_eta_0", plan.j_eta_0},
                {"k", plan.k},
                {"margins", margins_to_json(plan.margins)},
                {"joint_margin", plan.joint_margin_after},
                {"dist_F", plan.dist_F},
                {"dist_G", plan.dist_G}};
}

json audit_to_json(const AuditReport& audit) {
    return json{{"pass", audit.pass},
                {"margins", margins_to_json(audit.margins)},
                {"margin_bounds", audit.margin_bounds},
                {"product_residual", audit.product_residual},
                {"joint_margin", audit.joint_margin},
                {"dist_F", audit.dist_F},
                {"dist_G", audit.dist_G},
                {"dist_F_f", audit.dist_F_f},
                {"dist_F_f_bound", audit.dist_F_f_bound},
                {"dist_F1_f", audit.dist_F1_f},
                {"dist_F1_f_bound", audit.dist_F1_f_bound},
                {"separation_ok", audit.separation_ok},
                {"violations", audit.violations}};
}

json claim_to_json(const ClaimCheck& c) {
    return json{{"ok", c.ok}, {"attained", c.attained}, {"bound", c.bound}};
}

json trace_to_json(const std::vector<InvariantReport>& trace) {
    json out = json::array();
    for (const auto& step : trace) {
        out.push_back({{"n", step.n},
                       {"claim_i_residual", step.claim_i_residual},
                       {"claim_i_bound", step.claim_i_bound},
                       {"claim_i_ok", step.claim_i_ok},
                       {"claim_ii_F", claim_to_json(step.claim_ii_F)},
                       {"claim_ii_G", claim_to_json(step.claim_ii_G)},
                       {"claim_iii", claim_to_json(step.claim_iii)},
                       {"claim_iv", claim_to_json(step.claim_iv)},
                       {"h_norm", step.h_norm},
                       {"min_denominator", step.min_denominator}});
    }
    return out;
}

json factor_to_json(const FactorResult& result) {
    return json{{"converged", result.converged},
                {"steps", result.steps},
                {"final_h_norm", result.final_h_norm},
                {"residual", result.residual},
                {"dist_F", result.dist_F},
                {"dist_G", result.dist_G},
                {"claims_ok", result.claims_ok},
                {"decay_ok", result.decay_ok},
                {"guarantees_ok", result.guarantees_ok},
                {"forced", result.forced},
                {"config",
                 {{"epsilon", result.config.epsilon},
                  {"requested_epsilon", result.config.requested_epsilon},
                  {"epsilon_clamped", result.config.epsilon_clamped},
                  {"delta", result.config.delta},
                  {"K", result.config.K},
                  {"C", result.config.C},
                  {"eta", result.config.eta}}},
                {"trace", trace_to_json(result.trace)}};
}

json suite_to_json(const SuiteReport& report) {
    return json{{"suite", report.name},       {"pass", report.pass},
                {"seed", report.seed},        {"cases", report.cases},
                {"violations", report.violations},
                {"duration_seconds", report.duration_seconds},
                {"failures", report.failures}, {"stats", report.stats}};
}

void emit(const json& report, const std::optional<std::string>& out_path) {
    if (out_path) {
        std::ofstream out(*out_path);
        if (!out) throw std::runtime_error("cannot open " + *out_path + " for writing");
        out << report.dump(2) << '\n';
    }
    std::cout << report.dump(2) << std::endl;
}

LambdaSequence parse_lambda(const std::string& spec) {
    if (spec == "harmonic") return LambdaSequence::harmonic();
    if (spec == "constant") return LambdaSequence::constant();
    std::ifstream in(spec);
    if (!in) throw std::invalid_argument("cannot open lambda file " + spec);
    json j;
    in >> j;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "harmonic") return LambdaSequence::harmonic();
    if (kind == "constant") return LambdaSequence::constant();
    if (kind == "explicit") {
        auto prefix = j.at("prefix").get<std::vector<double>>();
        auto tail_name = j.value("tail", std::string("harmonic"));
        auto tail = tail_name == "constant" ? LambdaSequence::Tail::Constant
                                            : LambdaSequence::Tail::Harmonic;
        return LambdaSequence::explicit_prefix(std::move(prefix), tail);
    }
    throw std::invalid_argument("unknown lambda kind \"" + kind + "\"");
}

std::filesystem::path out_file(const std::optional<std::string>& out_dir,
                               const std::string& name) {
    if (!out_dir) return name;
    std::filesystem::create_directories(*out_dir);
    return std::filesystem::path(*out_dir) / name;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Wiener p-variation and open-multiplication pipeline on step functions"};
    app.require_subcommand(1);

    std::string input_path, f_path, g_path, h_path;
    std::string lambda_spec = "harmonic";
    std::optional<std::string> out_path;
    double p_value = 2.0;
    double epsilon = 0.5;
    double tol = 1e-12;
    std::size_t max_iter = 200;
    std::uint64_t seed = 1;
    bool want_witness = false;
    bool want_oracle = false;
    bool force = false;

    auto* var = app.add_subcommand("var", "p-variation, norm, and optional witness/oracle");
    var->add_option("--input,-i", input_path, "step function file (.json or .csv)")->required();
    var->add_option("--p", p_value, "variation exponent (>= 1)");
    var->add_flag("--witness", want_witness, "include the attaining partition");
    var->add_flag("--oracle", want_oracle, "cross-check against exhaustive enumeration");
    var->add_option("--out", out_path, "write the JSON report here too");

    auto* lambda_var = app.add_subcommand("lambda-var", "Shiba-Waterman variation and norm");
    lambda_var->add_option("--input,-i", input_path, "step function file")->required();
    lambda_var->add_option("--p", p_value, "variation exponent (>= 1)");
    lambda_var->add_option("--lambda", lambda_spec, "harmonic|constant|<file.json>");
    lambda_var->add_option("--out", out_path, "write the JSON report here too");

    auto* factor = app.add_subcommand("factor", "factor F G + h = f g near a pair");
    factor->add_option("-F", f_path, "left factor file")->required();
    factor->add_option("-G", g_path, "right factor file")->required();
    factor->add_option("-H", h_path, "perturbation file")->required();
    factor->add_option("--p", p_value, "variation exponent (>= 1)");
    factor->add_option("--eps", epsilon, "target distance for both factors");
    factor->add_option("--tol", tol, "stopping tolerance on the perturbation norm");
    factor->add_option("--max-iter", max_iter, "iteration limit");
    factor->add_flag("--force", force, "proceed outside the admissible radius");
    factor->add_option("--out", out_path, "directory for f.json, g.json, report.json");

    auto* approx = app.add_subcommand("approx", "lift a pair to a jointly nondegenerate one");
    approx->add_option("-F", f_path, "left function file")->required();
    approx->add_option("-G", g_path, "right function file")->required();
    approx->add_option("--p", p_value, "variation exponent (>= 1)");
    approx->add_option("--eps", epsilon, "distance budget");
    approx->add_option("--out", out_path, "directory for F1.json, G1.json, report.json");

    auto* probe = app.add_subcommand("probe", "Shiba-Waterman conjecture probe (evidence only)");
    probe->add_option("-F", f_path, "left function file")->required();
    probe->add_option("-G", g_path, "right function file")->required();
    probe->add_option("--p", p_value, "variation exponent (>= 1)");
    probe->add_option("--eps", epsilon, "distance budget");
    probe->add_option("--lambda", lambda_spec, "harmonic|constant|<file.json>");
    probe->add_option("--seed", seed, "seed for the perturbation draw");
    probe->add_option("--out", out_path, "write the JSON report here too");

    std::string suite_name = "all";
    std::optional<std::size_t> suite_samples;
    std::optional<std::uint64_t> suite_seed;
    auto* check = app.add_subcommand("check", "run a property suite");
    check->add_option("--suite", suite_name,
                      "oracle|norms|inverse|inequalities|smallvalue|iteration|lifting|endtoend|"
                      "lambda|all");
    check->add_option("--samples", suite_samples, "override the suite's sample count");
    check->add_option("--seed", suite_seed, "override the suite's seed");
    check->add_option("--out", out_path, "write the JSON report here too");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        PExponent p(p_value);

        if (var->parsed()) {
            StepFunction f = read_step_function(input_path);
            auto [value, witness] = total_var_p(f, p);
            json report{{"input", input_path},
                        {"p", p_value},
                        {"var_p", value},
                        {"norm", bvp_norm(f, p)}};
            if (want_witness) report["witness"] = witness_to_json(witness);
            if (want_oracle) {
                double oracle = brute_force_var_p(f, p);  // refuses large grids
                bool agrees =
                    std::abs(value - oracle) <= 1e-12 * std::max({1.0, value, oracle});
                report["oracle"] = {{"value", oracle}, {"agrees", agrees}};
                if (!agrees) {
                    emit(report, out_path);
                    return kExitVerificationFailure;
                }
            }
            emit(report, out_path);
            return kExitOk;
        }

        if (lambda_var->parsed()) {
            StepFunction f = read_step_function(input_path);
            LambdaSequence lambda = parse_lambda(lambda_spec);
            auto result = lambda_var_p(f, lambda, p);
            auto norm = lambda_bv_norm(f, lambda, p);
            json family = json::array();
            for (std::size_t i = 0; i < result.family.intervals.size(); ++i) {
                const auto& iv = result.family.intervals[i];
                family.push_back({{"a", iv.a},
                                  {"b", iv.b},
                                  {"increment", result.family.increments[i]}});
            }
            emit(json{{"input", input_path},
                      {"p", p_value},
                      {"lambda", lambda_spec},
                      {"lambda_var", result.value},
                      {"norm", norm.value},
                      {"exact", result.exact},
                      {"family", family}},
                 out_path);
            return kExitOk;
        }

        if (factor->parsed()) {
            StepFunction F = read_step_function(f_path);
            StepFunction G = read_step_function(g_path);
            StepFunction h = read_step_function(h_path);
            FactorOptions options;
            options.epsilon = epsilon;
            options.tol = tol;
            options.max_iter = max_iter;
            options.force = force;
            try {
                OpenBallResult result = open_ball_factorize(F, G, p, epsilon, h, options);
                write_step_function(out_file(out_path, "f.json"), result.factor.f);
                write_step_function(out_file(out_path, "g.json"), result.factor.g);
                json report = factor_to_json(result.factor);
                report["radius"] = result.radius;
                report["dist_F_total"] = result.dist_F;
                report["dist_G_total"] = result.dist_G;
                report["residual_vs_original"] = result.residual;
                report["lift"] = plan_to_json(result.lift.plan);
                report["epsilon"] = epsilon;
                std::ofstream rep(out_file(out_path, "report.json"));
                rep << report.dump(2) << '\n';
                std::cout << report.dump(2) << std::endl;
                return result.guarantees_ok ? kExitOk : kExitVerificationFailure;
            } catch (const RadiusError& e) {
                emit(json{{"error", e.what()}, {"h_norm", e.h_norm()}, {"radius", e.radius()}},
                     {});
                return kExitPrecondition;
            }
        }

        if (approx->parsed()) {
            StepFunction F = read_step_function(f_path);
            StepFunction G = read_step_function(g_path);
            LiftResult lift = lift_pair(F, G, p, epsilon);
            AuditReport audit = audit_plan(lift.plan, F, G, lift.F1, lift.G1, p, epsilon);
            write_step_function(out_file(out_path, "F1.json"), lift.F1);
            write_step_function(out_file(out_path, "G1.json"), lift.G1);
            json report{{"plan", plan_to_json(lift.plan)}, {"audit", audit_to_json(audit)}};
            std::ofstream rep(out_file(out_path, "report.json"));
            rep << report.dump(2) << '\n';
            std::cout << report.dump(2) << std::endl;
            return audit.pass ? kExitOk : kExitVerificationFailure;
        }

        if (probe->parsed()) {
            StepFunction F = read_step_function(f_path);
            StepFunction G = read_step_function(g_path);
            LambdaSequence lambda = parse_lambda(lambda_spec);
            ProbeReport r = conjecture_probe(F, G, lambda, p, epsilon, seed);
            emit(json{{"lambda", r.lambda_kind},
                      {"p", r.p_value},
                      {"epsilon", r.epsilon},
                      {"seed", r.seed},
                      {"lift_identity", r.lift_identity},
                      {"lift_zero_pair", r.lift_zero_pair},
                      {"dist_F_lambda", r.dist_F_lambda},
                      {"dist_G_lambda", r.dist_G_lambda},
                      {"distances_exact", r.distances_exact},
                      {"under_epsilon", r.under_epsilon},
                      {"lambda_radius", r.lambda_radius},
                      {"factor",
                       {{"ran", r.factor_ran},
                        {"converged", r.factor_converged},
                        {"claims_ok", r.factor_claims_ok},
                        {"steps", r.factor_steps},
                        {"dist_F", r.factor_dist_F},
                        {"dist_G", r.factor_dist_G},
                        {"residual", r.factor_residual}}},
                      {"note", r.note}},
                 out_path);
            return kExitOk;
        }

        if (check->parsed()) {
            std::vector<SuiteReport> reports;
            try {
                reports = run_suites(suite_name, suite_samples, suite_seed);
            } catch (const std::invalid_argument& e) {
                std::cerr << e.what() << std::endl;
                return kExitUsage;
            }
            json all = json::array();
            bool pass = true;
            for (const auto& report : reports) {
                all.push_back(suite_to_json(report));
                pass = pass && report.pass;
            }
            emit(json{{"pass", pass}, {"suites", all}}, out_path);
            return pass ? kExitOk : kExitVerificationFailure;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitPrecondition;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitVerificationFailure;
    }
    return kExitUsage;
}
