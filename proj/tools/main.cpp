// chanmom: channel-flow moment scaling toolkit.
//
// Subcommands: moments, fit, predict, synth, transform, report mpc, registry.
// Exit codes: 0 success, 2 validation error, 3 numerical failure.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "chanmom/fitting.hpp"
#include "chanmom/io.hpp"
#include "chanmom/moments.hpp"
#include "chanmom/mpc.hpp"
#include "chanmom/pipeline.hpp"
#include "chanmom/synth.hpp"
#include "chanmom/types.hpp"

namespace {

using namespace chanmom;
using nlohmann::json;

std::vector<MomentOrder> parse_orders(const std::vector<std::string>& specs) {
    std::vector<MomentOrder> orders;
    for (const auto& spec : specs) {
        std::istringstream in(spec);
        std::string token;
        while (std::getline(in, token, ';')) {
            if (token.empty()) continue;
            const auto comma = token.find(',');
            if (comma == std::string::npos) {
                throw ValidationError("order '" + token +
                                      "' is not of the form n,m");
            }
            try {
                const int n = std::stoi(token.substr(0, comma));
                const int m = std::stoi(token.substr(comma + 1));
                orders.push_back(make_moment_order(n, m));
            } catch (const std::invalid_argument&) {
                throw ValidationError("order '" + token +
                                      "' is not of the form n,m");
            }
        }
    }
    return orders;
}

/// All validated orders: pure moments to order 7, mixed to total order 6.
std::vector<MomentOrder> all_default_orders() {
    std::vector<MomentOrder> orders;
    for (int n = 1; n <= 7; ++n) orders.push_back({n, 0});
    for (int m = 1; m <= 7; ++m) orders.push_back({0, m});
    for (int n = 1; n <= 5; ++n) {
        for (int m = 1; n + m <= 6; ++m) orders.push_back({n, m});
    }
    return orders;
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

struct FitArgs {
    std::vector<std::string> profile_paths;
    std::string snapshot_path;
    std::vector<std::string> order_specs;
    bool all_orders = false;
    double x_lo = 0.0;
    double x_hi = 0.75;
    std::string policy = "center-point";
    bool drop_nonpositive = false;
    int max_order = 0; // 0 = keep defaults
    std::string report_path = "report.json";
    std::string plots_dir = "plots";
};

int run_fit(const FitArgs& args) {
    PipelineConfig config;
    config.range = {args.x_lo, args.x_hi};
    config.drop_nonpositive = args.drop_nonpositive;
    if (args.policy == "center-point") {
        config.policy = CenterlinePolicy::CenterPoint;
    } else if (args.policy == "symmetric-average") {
        config.policy = CenterlinePolicy::SymmetricAverage;
    } else {
        throw ValidationError("unknown centerline policy '" + args.policy +
                              "'");
    }
    if (args.max_order > 0) {
        config.allow_order_override = true;
    }

    std::size_t input_index = 0;
    auto add_provenance_input = [&](const std::string& path) {
        std::ostringstream key;
        key << "input." << input_index++;
        config.provenance.emplace_back(key.str() + ".path", path);
        config.provenance.emplace_back(key.str() + ".fnv1a",
                                       fnv1a_hex_file(path));
    };

    for (const auto& path : args.profile_paths) {
        add_provenance_input(path);
        config.profiles.push_back(read_profile_file(path));
    }
    if (!args.snapshot_path.empty()) {
        add_provenance_input(args.snapshot_path);
        config.ensemble = read_snapshot_file(args.snapshot_path);
        if (config.ensemble->nonpositive_theta_count() > 0) {
            std::cerr << "warning: " << args.snapshot_path << " contains "
                      << config.ensemble->nonpositive_theta_count()
                      << " non-positive Theta samples\n";
        }
        config.orders = args.all_orders ? all_default_orders()
                                        : parse_orders(args.order_specs);
        if (config.orders.empty()) {
            throw ValidationError("snapshot input requires --order or "
                                  "--all-orders");
        }
    }

    {
        std::ostringstream range;
        range << args.x_lo << ":" << args.x_hi;
        config.provenance.emplace_back("fit_range", range.str());
        config.provenance.emplace_back("policy", args.policy);
        config.provenance.emplace_back(
            "drop_nonpositive", args.drop_nonpositive ? "true" : "false");
        config.provenance.emplace_back("timestamp", iso_timestamp());
    }

    const ReportBundle report = run_pipeline(config);
    write_report(report, args.report_path, args.plots_dir);

    std::cout << "sigma1=" << report.sigmas.sigma1
              << " sigma2=" << report.sigmas.sigma2
              << " sigma_theta=" << report.sigmas.sigma_theta << "\n"
              << "alpha'=" << report.model.alpha_prime
              << " beta'=" << report.model.beta_prime
              << " beta'_theta=" << report.model.beta_prime_theta << "\n"
              << "regime: " << to_string(report.anomalous.regime) << "\n"
              << "report: " << args.report_path << "\n";
    return 0;
}

SynthSpec build_synth_spec(double sigma1, double sigma2, double sigma_theta,
                           double alpha_prime, double beta_prime,
                           double beta_prime_theta, double re_tau, double pr,
                           double noise_amplitude, std::uint64_t seed,
                           double centerline_scale,
                           const std::vector<MomentOrder>& orders) {
    SynthSpec spec;
    spec.sig = {sigma1, sigma2, sigma_theta};
    spec.model = {alpha_prime, beta_prime, beta_prime_theta};
    spec.flow_case = make_flow_case(re_tau, pr, 1.0, 1.0, 1.0);
    spec.grid = default_synth_grid();
    if (noise_amplitude > 0.0) {
        spec.noise = NoiseSpec{NoiseKind::Multiplicative, noise_amplitude, seed};
    }
    for (MomentOrder order : orders) {
        spec.centerline[order] = centerline_scale * spec.model.prefactor(order);
    }
    return make_synth_spec(std::move(spec));
}

json synth_metadata(const SynthSpec& spec) {
    json block;
    block["sigma1"] = spec.sig.sigma1;
    block["sigma2"] = spec.sig.sigma2;
    block["sigma_theta"] = spec.sig.sigma_theta;
    block["alpha_prime"] = spec.model.alpha_prime;
    block["beta_prime"] = spec.model.beta_prime;
    block["beta_prime_theta"] = spec.model.beta_prime_theta;
    if (spec.noise) {
        block["noise"] = {{"kind", "multiplicative"},
                          {"amplitude", spec.noise->amplitude},
                          {"seed", spec.noise->seed}};
    }
    return json{{"synth", block}};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"channel-flow moment scaling toolkit"};
    app.require_subcommand(1);

    // ---- moments ----
    auto* moments_cmd = app.add_subcommand(
        "moments", "compute moment profiles from a snapshot file");
    std::string mom_snapshots;
    std::vector<std::string> mom_orders;
    bool mom_all_orders = false;
    std::string mom_outdir = ".";
    moments_cmd->add_option("--snapshots", mom_snapshots, "snapshot container")
        ->required();
    moments_cmd->add_option("--order", mom_orders,
                            "moment order n,m (repeatable; ';' separated)");
    moments_cmd->add_flag("--all-orders", mom_all_orders,
                          "all pure orders to 7 and mixed to 6");
    moments_cmd->add_option("--output-dir", mom_outdir,
                            "directory for profile files");

    // ---- fit ----
    auto* fit_cmd = app.add_subcommand(
        "fit", "run the fitting pipeline and write a report");
    FitArgs fit_args;
    fit_cmd->add_option("--profile", fit_args.profile_paths,
                        "moment profile file (repeatable)");
    fit_cmd->add_option("--snapshots", fit_args.snapshot_path,
                        "snapshot container (alternative input)");
    fit_cmd->add_option("--order", fit_args.order_specs,
                        "orders to compute from snapshots");
    fit_cmd->add_flag("--all-orders", fit_args.all_orders,
                      "all pure orders to 7 and mixed to 6");
    fit_cmd->add_option("--x-lo", fit_args.x_lo,
                        "fit range lower bound (exclusive)");
    fit_cmd->add_option("--x-hi", fit_args.x_hi,
                        "fit range upper bound (inclusive)");
    fit_cmd->add_option("--policy", fit_args.policy,
                        "centerline policy: center-point | symmetric-average");
    fit_cmd->add_flag("--drop-nonpositive", fit_args.drop_nonpositive,
                      "drop non-positive deficit points instead of failing");
    fit_cmd->add_option("--max-order", fit_args.max_order,
                        "override the default order limits");
    fit_cmd->add_option("--report", fit_args.report_path, "report JSON path");
    fit_cmd->add_option("--plots-dir", fit_args.plots_dir,
                        "directory for per-order plot CSVs");

    // ---- predict ----
    auto* predict_cmd = app.add_subcommand(
        "predict", "predict a high-order deficit profile from a report");
    std::string pred_report, pred_grid_from, pred_output = "predicted.profile";
    int pred_n = 0, pred_m = 0;
    predict_cmd->add_option("--report", pred_report, "fit report JSON")
        ->required();
    predict_cmd->add_option("--n", pred_n, "velocity power")->required();
    predict_cmd->add_option("--m", pred_m, "temperature power")->required();
    predict_cmd->add_option("--grid-from", pred_grid_from,
                            "profile file whose grid to reuse");
    predict_cmd->add_option("--output", pred_output, "output profile path");

    // ---- synth ----
    auto* synth_cmd = app.add_subcommand(
        "synth", "generate synthetic profiles or ensembles");
    std::string synth_kind = "profiles";
    synth_cmd->add_option("--kind", synth_kind, "profiles | ensemble");
    double sy_sigma1 = 1.05, sy_sigma2 = 1.08, sy_sigma_theta = 0.02;
    double sy_alpha = 0.9, sy_beta = 0.4, sy_beta_theta = 0.3;
    double sy_re_tau = 2000.0, sy_pr = 0.71;
    double sy_noise = 0.0, sy_centerline_scale = 3.0;
    std::uint64_t sy_seed = 1;
    std::vector<std::string> sy_orders;
    bool sy_all_orders = false;
    std::string sy_outdir = ".";
    std::string sy_output = "ensemble.snap";
    std::vector<std::uint64_t> sy_shape{16, 98, 16};
    int sy_snapshots = 4;
    synth_cmd->add_option("--sigma1", sy_sigma1, "sigma1");
    synth_cmd->add_option("--sigma2", sy_sigma2, "sigma2");
    synth_cmd->add_option("--sigma-theta", sy_sigma_theta, "sigma_theta");
    synth_cmd->add_option("--alpha-prime", sy_alpha, "alpha'");
    synth_cmd->add_option("--beta-prime", sy_beta, "beta'");
    synth_cmd->add_option("--beta-prime-theta", sy_beta_theta, "beta'_theta");
    synth_cmd->add_option("--re-tau", sy_re_tau, "friction Reynolds number");
    synth_cmd->add_option("--pr", sy_pr, "Prandtl number");
    synth_cmd->add_option("--noise-amplitude", sy_noise,
                          "multiplicative noise amplitude in [0, 0.1]");
    synth_cmd->add_option("--seed", sy_seed, "64-bit noise seed");
    synth_cmd->add_option("--centerline-scale", sy_centerline_scale,
                          "H_cl = scale * C'(n,m)");
    synth_cmd->add_option("--order", sy_orders, "orders to generate");
    synth_cmd->add_flag("--all-orders", sy_all_orders,
                        "all pure orders to 7 and mixed to 6");
    synth_cmd->add_option("--output-dir", sy_outdir,
                          "directory for profile files");
    synth_cmd->add_option("--output", sy_output, "ensemble output path");
    synth_cmd->add_option("--shape", sy_shape, "ensemble shape n1 n2 n3")
        ->expected(3);
    synth_cmd->add_option("--snapshots", sy_snapshots, "ensemble snapshots");

    // ---- transform ----
    auto* transform_cmd = app.add_subcommand(
        "transform", "apply the symmetry group to a profile");
    std::string tr_input, tr_output = "transformed.profile";
    double tr_a_sx = 0.0, tr_a_st = 0.0, tr_a_theta = 0.0, tr_a_ss = 0.0;
    double tr_a_x2 = 0.0, tr_a_h = 0.0;
    transform_cmd->add_option("--profile", tr_input, "input profile")
        ->required();
    transform_cmd->add_option("--a-sx", tr_a_sx, "space scaling parameter");
    transform_cmd->add_option("--a-st", tr_a_st, "time scaling parameter");
    transform_cmd->add_option("--a-theta", tr_a_theta,
                              "temperature scaling parameter");
    transform_cmd->add_option("--a-ss", tr_a_ss,
                              "statistical scaling parameter");
    transform_cmd->add_option("--a-x2", tr_a_x2, "x2 translation");
    transform_cmd->add_option("--a-h", tr_a_h,
                              "moment translation for this order");
    transform_cmd->add_option("--output", tr_output, "output profile path");

    // ---- report mpc ----
    auto* report_cmd = app.add_subcommand("report", "structural reports");
    auto* mpc_cmd = report_cmd->add_subcommand(
        "mpc", "term structure of the moment transport equation");
    int mpc_n = 0, mpc_m = 0;
    std::string mpc_output;
    mpc_cmd->add_option("--n", mpc_n, "velocity power")->required();
    mpc_cmd->add_option("--m", mpc_m, "temperature power")->required();
    mpc_cmd->add_option("--output", mpc_output,
                        "write JSON here instead of stdout");
    report_cmd->require_subcommand(1);

    // ---- registry ----
    auto* registry_cmd = app.add_subcommand(
        "registry", "the (Re_tau, Pr) case grid of the validation study");
    bool registry_json = false;
    registry_cmd->add_flag("--json", registry_json, "emit JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (moments_cmd->parsed()) {
            const SnapshotEnsemble ensemble = read_snapshot_file(mom_snapshots);
            if (ensemble.nonpositive_theta_count() > 0) {
                std::cerr << "warning: " << mom_snapshots << " contains "
                          << ensemble.nonpositive_theta_count()
                          << " non-positive Theta samples\n";
            }
            const auto orders = mom_all_orders ? all_default_orders()
                                               : parse_orders(mom_orders);
            if (orders.empty()) {
                throw ValidationError("need --order or --all-orders");
            }
            std::filesystem::create_directories(mom_outdir);
            for (MomentOrder order : orders) {
                const MomentProfile profile = compute_moment(ensemble, order);
                std::ostringstream name;
                name << "moment_n" << order.n << "_m" << order.m << ".profile";
                write_profile_file(profile, std::filesystem::path(mom_outdir) /
                                                name.str());
            }
            std::cout << "wrote " << orders.size() << " profile(s) to "
                      << mom_outdir << "\n";
        } else if (fit_cmd->parsed()) {
            return run_fit(fit_args);
        } else if (predict_cmd->parsed()) {
            std::ifstream in(pred_report);
            if (!in) {
                throw ValidationError("cannot open report " + pred_report);
            }
            json report = json::parse(in, nullptr, false);
            if (report.is_discarded()) {
                throw ValidationError("report " + pred_report +
                                      " is not valid JSON");
            }
            for (const char* key :
                 {"sigma1", "sigma2", "sigma_theta", "alpha_prime",
                  "beta_prime", "beta_prime_theta", "case"}) {
                if (!report.contains(key)) {
                    throw ValidationError("report " + pred_report +
                                          ": missing key '" + key + "'");
                }
            }
            const ScalingExponents sig{report["sigma1"], report["sigma2"],
                                       report["sigma_theta"]};
            const PrefactorModel model{report["alpha_prime"],
                                       report["beta_prime"],
                                       report["beta_prime_theta"]};
            const json& c = report["case"];
            const FlowCase flow_case = make_flow_case(
                c["re_tau"], c["pr"], c["u_tau"], c["theta_tau"], c["h"]);
            WallNormalGrid grid = pred_grid_from.empty()
                                      ? default_synth_grid()
                                      : read_profile_file(pred_grid_from).grid;
            const MomentProfile predicted = predict_moment(
                make_moment_order(pred_n, pred_m), sig, model, grid, flow_case);
            write_profile_file(predicted, pred_output);
            std::cout << "wrote " << pred_output << "\n";
        } else if (synth_cmd->parsed()) {
            const auto orders = sy_all_orders ? all_default_orders()
                                              : parse_orders(sy_orders);
            std::vector<MomentOrder> needed = orders;
            // ensembles always need the two mean laws
            needed.push_back({1, 0});
            needed.push_back({0, 1});
            const SynthSpec spec = build_synth_spec(
                sy_sigma1, sy_sigma2, sy_sigma_theta, sy_alpha, sy_beta,
                sy_beta_theta, sy_re_tau, sy_pr, sy_noise, sy_seed,
                sy_centerline_scale, needed);
            if (synth_kind == "profiles") {
                if (orders.empty()) {
                    throw ValidationError("need --order or --all-orders");
                }
                std::filesystem::create_directories(sy_outdir);
                const auto profiles = generate_profiles(spec, orders);
                for (const auto& [order, profile] : profiles) {
                    std::ostringstream name;
                    name << "synth_n" << order.n << "_m" << order.m
                         << ".profile";
                    write_profile_file(profile,
                                       std::filesystem::path(sy_outdir) /
                                           name.str(),
                                       synth_metadata(spec));
                }
                std::cout << "wrote " << profiles.size() << " profile(s) to "
                          << sy_outdir << "\n";
            } else if (synth_kind == "ensemble") {
                SnapshotShape shape{sy_shape[0], sy_shape[1], sy_shape[2]};
                const SnapshotEnsemble ensemble =
                    generate_ensemble(spec, shape, sy_snapshots);
                write_snapshot_file(ensemble, sy_output);
                std::cout << "wrote " << sy_output << "\n";
            } else {
                throw ValidationError("--kind must be profiles or ensemble");
            }
        } else if (transform_cmd->parsed()) {
            const MomentProfile profile = read_profile_file(tr_input);
            SymmetryParams params;
            params.a_sx = tr_a_sx;
            params.a_st = tr_a_st;
            params.a_theta = tr_a_theta;
            params.a_ss = tr_a_ss;
            params.a_x = {0.0, tr_a_x2, 0.0};
            if (tr_a_h != 0.0) params.a_h[profile.order] = tr_a_h;
            write_profile_file(apply_symmetry(profile, params), tr_output);
            std::cout << "wrote " << tr_output << "\n";
        } else if (report_cmd->parsed() && mpc_cmd->parsed()) {
            const MomentOrder order = make_moment_order(mpc_n, mpc_m);
            const auto terms = enumerate_mpc_terms(order);
            const auto counts = count_continuity_relations(order);
            json out;
            out["n"] = order.n;
            out["m"] = order.m;
            out["term_count"] = terms.size();
            json term_list = json::array();
            for (const auto& term : terms) {
                term_list.push_back(
                    {{"kind", to_string(term.kind)},
                     {"applied_point", term.applied_point},
                     {"coefficient", to_string(term.coefficient)},
                     {"correlation", term.correlation.describe()}});
            }
            out["terms"] = term_list;
            out["continuity"] = {{"c1", counts.c1}, {"c2", counts.c2}};
            const std::string text = out.dump(2) + "\n";
            if (mpc_output.empty()) {
                std::cout << text;
            } else {
                atomic_write(mpc_output, text);
            }
        } else if (registry_cmd->parsed()) {
            const CaseRegistry registry = CaseRegistry::bundled();
            if (registry_json) {
                std::cout << registry.to_json().dump(2) << "\n";
            } else {
                std::cout << "Re_tau \\ Pr |";
                for (double pr : CaseRegistry::prandtl_values()) {
                    std::cout << " " << pr;
                }
                std::cout << "\n";
                for (double re : CaseRegistry::reynolds_values()) {
                    std::cout << re << " |";
                    for (double pr : CaseRegistry::prandtl_values()) {
                        std::cout << (registry.available(re, pr) ? " X" : " -");
                    }
                    std::cout << "\n";
                }
            }
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
