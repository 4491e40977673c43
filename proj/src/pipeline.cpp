#include "chanmom/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "chanmom/io.hpp"

namespace chanmom {

namespace {

using nlohmann::json;

template <typename Fn>
auto with_stage(const std::string& stage, const std::string& input, Fn&& fn) {
    try {
        return fn();
    } catch (const ValidationError& e) {
        throw ValidationError("stage " + stage + " [" + input + "]: " +
                              e.what());
    } catch (const NumericalError& e) {
        throw NumericalError("stage " + stage + " [" + input + "]: " +
                             e.what());
    }
}

void check_order_limits(const PipelineConfig& config, MomentOrder order) {
    if (config.allow_order_override) return;
    std::ostringstream msg;
    if (order.pure_velocity() && order.n > config.max_pure_order) {
        msg << "order " << order_label(order) << " exceeds the pure velocity "
            << "limit n <= " << config.max_pure_order
            << " (use --max-order to override)";
    } else if (order.pure_temperature() && order.m > config.max_pure_order) {
        msg << "order " << order_label(order) << " exceeds the pure "
            << "temperature limit m <= " << config.max_pure_order
            << " (use --max-order to override)";
    } else if (!order.pure_velocity() && !order.pure_temperature() &&
               order.total() > config.max_mixed_order) {
        msg << "order " << order_label(order) << " exceeds the mixed moment "
            << "limit n + m <= " << config.max_mixed_order
            << " (use --max-order to override)";
    } else {
        return;
    }
    throw ValidationError(msg.str());
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

ReportBundle run_pipeline(const PipelineConfig& config) {
    // 1. collect instantaneous profiles
    std::map<MomentOrder, MomentProfile> h_profiles;
    for (const auto& profile : config.profiles) {
        check_order_limits(config, profile.order);
        if (!h_profiles.emplace(profile.order, profile).second) {
            throw ValidationError("stage collect [" +
                                  order_label(profile.order) +
                                  "]: duplicate profile for this order");
        }
    }
    if (config.ensemble) {
        for (MomentOrder order : config.orders) {
            check_order_limits(config, order);
            h_profiles.emplace(
                order, with_stage("moments", order_label(order), [&] {
                    return compute_moment(*config.ensemble, order);
                }));
        }
    }
    if (h_profiles.empty()) {
        throw ValidationError("stage collect [config]: no input profiles");
    }

    for (MomentOrder seed :
         {MomentOrder{1, 0}, MomentOrder{2, 0}, MomentOrder{0, 1}}) {
        if (!h_profiles.count(seed)) {
            throw ValidationError("stage collect [" + order_label(seed) +
                                  "]: required low-order moment missing");
        }
    }

    ReportBundle report;
    report.flow_case = h_profiles.begin()->second.flow_case;
    report.range = config.range;
    report.provenance = config.provenance;

    // 2. deficit profiles
    std::map<MomentOrder, MomentProfile> deficits;
    for (const auto& [order, profile] : h_profiles) {
        deficits.emplace(order,
                         with_stage("deficit", order_label(order), [&] {
                             return to_deficit(profile, config.policy);
                         }));
    }

    // 3. free fits of the three seed orders
    const FitOptions options{config.drop_nonpositive};
    auto free_fit = [&](MomentOrder order) {
        return with_stage("fit", order_label(order), [&] {
            return fit_power_law(deficits.at(order), config.range, options);
        });
    };
    const PowerLawFit fit10 = free_fit(MomentOrder{1, 0});
    const PowerLawFit fit20 = free_fit(MomentOrder{2, 0});
    const PowerLawFit fit01 = free_fit(MomentOrder{0, 1});

    report.sigmas = extract_sigmas(fit10, fit20, fit01);

    // 4. constrained fits for every order (identical exponents for the
    // three seeds, so their free fits are reproduced)
    std::map<MomentOrder, PowerLawFit> fits;
    for (const auto& [order, deficit] : deficits) {
        fits.emplace(order, with_stage("fit-constrained", order_label(order),
                                       [&] {
                                           return fit_constrained(
                                               deficit, report.sigmas,
                                               config.range, options);
                                       }));
    }

    // 5. prefactor model from the five low orders
    report.model = with_stage("prefactor-model", "C'(nm)",
                              [&] { return fit_prefactor_model(fits); });

    // 6. diagnostics and plot tables
    report.anomalous = anomalous_scaling_report(report.sigmas);

    for (const auto& [order, fit] : fits) {
        report.fits.push_back(fit);

        const MomentProfile& deficit = deficits.at(order);
        PlotTable table;
        table.order = order;
        for (std::size_t i = 0; i < deficit.grid.size(); ++i) {
            const double x = deficit.grid[i];
            if (!(x > config.range.x_lo) || !(x <= config.range.x_hi)) continue;
            const double fitted = fit.prefactor * std::pow(x, fit.exponent);
            table.rows.push_back({x, deficit.values[i], fitted});
        }
        report.plots.push_back(std::move(table));
    }

    if (config.range.x_hi <= 0.1) {
        std::ostringstream note;
        note << "reduced fit range: x2/h <= " << config.range.x_hi
             << " (low-Peclet workflow)";
        report.notes.push_back(note.str());
    }

    return report;
}

json report_to_json(const ReportBundle& report) {
    json out;
    out["schema"] = "chanmom-report";
    out["version"] = 1;
    out["case"] = {{"re_tau", report.flow_case.re_tau},
                   {"pr", report.flow_case.pr},
                   {"pe_tau", report.flow_case.pe_tau},
                   {"u_tau", report.flow_case.u_tau},
                   {"theta_tau", report.flow_case.theta_tau},
                   {"h", report.flow_case.h}};
    out["fit_range"] = {report.range.x_lo, report.range.x_hi};

    json orders = json::array();
    for (const auto& fit : report.fits) {
        orders.push_back({{"n", fit.order.n},
                          {"m", fit.order.m},
                          {"exponent", fit.exponent},
                          {"prefactor", fit.prefactor},
                          {"max_rel_error", fit.max_rel_error},
                          {"range", {fit.fit_range.first, fit.fit_range.second}},
                          {"n_points", fit.n_points}});
    }
    out["orders"] = orders;

    out["sigma1"] = report.sigmas.sigma1;
    out["sigma2"] = report.sigmas.sigma2;
    out["sigma_theta"] = report.sigmas.sigma_theta;
    out["alpha_prime"] = report.model.alpha_prime;
    out["beta_prime"] = report.model.beta_prime;
    out["beta_prime_theta"] = report.model.beta_prime_theta;

    out["anomalous_scaling"] = {
        {"space_time_per_n", report.anomalous.space_time_per_n},
        {"sigma_theta", report.anomalous.sigma_theta},
        {"intermittency", report.anomalous.intermittency},
        {"regime", to_string(report.anomalous.regime)}};

    out["notes"] = report.notes;

    json provenance = json::object();
    for (const auto& [key, value] : report.provenance) {
        provenance[key] = value;
    }
    out["provenance"] = provenance;
    return out;
}

void write_report(const ReportBundle& report,
                  const std::filesystem::path& json_path,
                  const std::filesystem::path& plots_dir) {
    atomic_write(json_path, report_to_json(report).dump(2) + "\n");

    std::filesystem::create_directories(plots_dir);
    for (const auto& table : report.plots) {
        std::ostringstream csv;
        csv << "x2_over_h,deficit_data,deficit_fit\n";
        for (const auto& row : table.rows) {
            csv << format_double(row[0]) << ',' << format_double(row[1]) << ','
                << format_double(row[2]) << '\n';
        }
        std::ostringstream name;
        name << "deficit_n" << table.order.n << "_m" << table.order.m << ".csv";
        atomic_write(plots_dir / name.str(), csv.str());
    }
}

} // namespace chanmom
