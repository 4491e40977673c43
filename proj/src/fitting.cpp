#include "chanmom/fitting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

#include "chanmom/numerics.hpp"

namespace chanmom {

double exponent(MomentOrder order, const ScalingExponents& sig) {
    // algebraically n(sigma2 - sigma1) + m sigma_theta + 2 sigma1 - sigma2,
    // arranged so that the n = 1 and n = 2 identities are exact in floating
    // point: the coefficient of the other sigma vanishes
    return (order.n - 1) * sig.sigma2 - (order.n - 2) * sig.sigma1 +
           order.m * sig.sigma_theta;
}

double PrefactorModel::prefactor(MomentOrder order) const {
    return alpha_prime *
           std::exp(order.n * beta_prime + order.m * beta_prime_theta);
}

namespace {

struct FitData {
    std::vector<double> x;
    std::vector<double> d;
    std::vector<double> log_x;
    std::vector<double> log_d;
};

FitData select_fit_points(const MomentProfile& deficit, FitRange range,
                          const FitOptions& options, MomentOrder order) {
    if (deficit.basis != MomentBasis::Deficit) {
        throw ValidationError("fit " + order_label(order) +
                              ": profile must be in the deficit basis");
    }

    FitData data;
    std::vector<std::size_t> nonpositive;
    for (std::size_t i = 0; i < deficit.grid.size(); ++i) {
        const double x = deficit.grid[i];
        if (!(x > range.x_lo) || !(x <= range.x_hi)) continue;
        const double d = deficit.values[i];
        if (d <= 0.0) {
            nonpositive.push_back(i);
            continue;
        }
        data.x.push_back(x);
        data.d.push_back(d);
    }

    if (!nonpositive.empty() && !options.drop_nonpositive) {
        std::ostringstream msg;
        msg << "fit " << order_label(order) << ": non-positive deficit inside "
            << "fit range at grid indices";
        for (std::size_t i : nonpositive) {
            msg << " " << i << " (x2/h=" << deficit.grid[i] << ")";
        }
        throw ValidationError(msg.str());
    }
    if (data.x.size() < 8) {
        throw ValidationError("fit " + order_label(order) + ": only " +
                              std::to_string(data.x.size()) +
                              " usable points in range, need at least 8");
    }

    data.log_x.resize(data.x.size());
    data.log_d.resize(data.x.size());
    for (std::size_t i = 0; i < data.x.size(); ++i) {
        data.log_x[i] = std::log(data.x[i]);
        data.log_d[i] = std::log(data.d[i]);
    }
    return data;
}

/// Minimax prefactor and error for a fixed exponent. For C > 0, the error
/// |1 - C t| is convex in t = x^e/d, so the maximum over points sits at
/// t_min or t_max; balancing the two gives the optimum.
struct BalancedFit {
    double prefactor;
    double error;
};

BalancedFit balanced_prefactor(const FitData& data, double e) {
    double t_min = std::numeric_limits<double>::infinity();
    double t_max = 0.0;
    for (std::size_t i = 0; i < data.x.size(); ++i) {
        const double t = std::exp(e * data.log_x[i] - data.log_d[i]);
        t_min = std::min(t_min, t);
        t_max = std::max(t_max, t);
    }
    const double c = 2.0 / (t_min + t_max);
    const double err = (t_max - t_min) / (t_max + t_min);
    return {c, err};
}

double linf_rel_error(const FitData& data, double e, double log_c) {
    double worst = 0.0;
    for (std::size_t i = 0; i < data.x.size(); ++i) {
        const double t = std::exp(log_c + e * data.log_x[i] - data.log_d[i]);
        worst = std::max(worst, std::abs(1.0 - t));
    }
    return worst;
}

/// Ordinary least squares of log d on log x: slope = exponent seed.
std::pair<double, double> log_log_ols(const FitData& data) {
    const std::size_t n = data.x.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += data.log_x[i];
        sy += data.log_d[i];
        sxx += data.log_x[i] * data.log_x[i];
        sxy += data.log_x[i] * data.log_d[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) {
        throw NumericalError("fit: degenerate abscissa, cannot seed");
    }
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    return {slope, intercept};
}

/// Nelder-Mead on (exponent, log prefactor) with fixed iteration budget.
std::pair<std::array<double, 2>, double>
nelder_mead_2d(const std::function<double(double, double)>& f,
               std::array<double, 2> start, double scale, int max_iter) {
    using Point = std::array<double, 2>;
    struct Vertex {
        Point p;
        double value;
    };

    std::array<Vertex, 3> simplex;
    simplex[0] = {start, f(start[0], start[1])};
    simplex[1] = {{start[0] + scale, start[1]}, 0.0};
    simplex[1].value = f(simplex[1].p[0], simplex[1].p[1]);
    simplex[2] = {{start[0], start[1] + scale}, 0.0};
    simplex[2].value = f(simplex[2].p[0], simplex[2].p[1]);

    for (int iter = 0; iter < max_iter; ++iter) {
        std::sort(simplex.begin(), simplex.end(),
                  [](const Vertex& a, const Vertex& b) {
                      return a.value < b.value;
                  });
        if (std::abs(simplex[2].value - simplex[0].value) <
            1e-16 * (1.0 + std::abs(simplex[0].value))) {
            break;
        }

        const Point& best = simplex[0].p;
        const Point& worst = simplex[2].p;
        Point centroid{(simplex[0].p[0] + simplex[1].p[0]) / 2.0,
                       (simplex[0].p[1] + simplex[1].p[1]) / 2.0};

        auto along = [&](double t) {
            return Point{centroid[0] + t * (centroid[0] - worst[0]),
                         centroid[1] + t * (centroid[1] - worst[1])};
        };

        Point reflected = along(1.0);
        const double fr = f(reflected[0], reflected[1]);
        if (fr < simplex[0].value) {
            Point expanded = along(2.0);
            const double fe = f(expanded[0], expanded[1]);
            simplex[2] = fe < fr ? Vertex{expanded, fe} : Vertex{reflected, fr};
        } else if (fr < simplex[1].value) {
            simplex[2] = {reflected, fr};
        } else {
            Point contracted = along(fr < simplex[2].value ? 0.5 : -0.5);
            const double fc = f(contracted[0], contracted[1]);
            if (fc < std::min(fr, simplex[2].value)) {
                simplex[2] = {contracted, fc};
            } else {
                // shrink toward the best vertex
                for (int i = 1; i < 3; ++i) {
                    simplex[i].p = {best[0] + 0.5 * (simplex[i].p[0] - best[0]),
                                    best[1] + 0.5 * (simplex[i].p[1] - best[1])};
                    simplex[i].value = f(simplex[i].p[0], simplex[i].p[1]);
                }
            }
        }
    }
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.value < b.value; });
    return {simplex[0].p, simplex[0].value};
}

/// Golden-section minimization of a unimodal 1-d function.
double golden_section(const std::function<double(double)>& f, double lo,
                      double hi, int max_iter) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < max_iter && (b - a) > 1e-14; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? c : d;
}

PowerLawFit finish_fit(MomentOrder order, FitRange range, const FitData& data,
                       double e, double c, double err) {
    PowerLawFit fit;
    fit.order = order;
    fit.exponent = e;
    fit.prefactor = c;
    fit.fit_range = {range.x_lo, range.x_hi};
    fit.max_rel_error = err;
    fit.n_points = static_cast<int>(data.x.size());
    return fit;
}

} // namespace

PowerLawFit fit_power_law(const MomentProfile& deficit, FitRange range,
                          const FitOptions& options) {
    const FitData data =
        select_fit_points(deficit, range, options, deficit.order);

    const auto [e_seed, log_c_seed] = log_log_ols(data);

    auto objective = [&](double e, double log_c) {
        return linf_rel_error(data, e, log_c);
    };
    auto [nm_point, nm_value] =
        nelder_mead_2d(objective, {e_seed, log_c_seed}, 0.05, 400);

    // 1-d polish: for each exponent the optimal prefactor is closed-form,
    // so minimize the balanced error over the exponent alone.
    auto phi = [&](double e) { return balanced_prefactor(data, e).error; };

    double lo = nm_point[0] - 0.1;
    double hi = nm_point[0] + 0.1;
    double e_best = golden_section(phi, lo, hi, 200);
    for (int expand = 0; expand < 12; ++expand) {
        if (e_best - lo < 1e-9 * (hi - lo)) {
            lo -= (hi - lo);
        } else if (hi - e_best < 1e-9 * (hi - lo)) {
            hi += (hi - lo);
        } else {
            break;
        }
        e_best = golden_section(phi, lo, hi, 200);
    }

    const BalancedFit polished = balanced_prefactor(data, e_best);

    // keep whichever stage achieved the smaller minimax error
    const BalancedFit at_nm = balanced_prefactor(data, nm_point[0]);
    double e = e_best, c = polished.prefactor, err = polished.error;
    if (at_nm.error < err) {
        e = nm_point[0];
        c = at_nm.prefactor;
        err = at_nm.error;
    }
    if (nm_value < err) {
        e = nm_point[0];
        c = std::exp(nm_point[1]);
        err = nm_value;
    }

    return finish_fit(deficit.order, range, data, e, c, err);
}

PowerLawFit fit_constrained(const MomentProfile& deficit,
                            const ScalingExponents& sig, FitRange range,
                            const FitOptions& options) {
    const FitData data =
        select_fit_points(deficit, range, options, deficit.order);
    const double e = exponent(deficit.order, sig);
    const BalancedFit balanced = balanced_prefactor(data, e);
    return finish_fit(deficit.order, range, data, e, balanced.prefactor,
                      balanced.error);
}

ScalingExponents extract_sigmas(const PowerLawFit& fit10,
                                const PowerLawFit& fit20,
                                const PowerLawFit& fit01) {
    if (fit10.order != MomentOrder{1, 0} || fit20.order != MomentOrder{2, 0} ||
        fit01.order != MomentOrder{0, 1}) {
        throw ValidationError("extract_sigmas: fits must have orders (1,0), "
                              "(2,0), (0,1)");
    }
    ScalingExponents sig;
    sig.sigma1 = fit10.exponent;
    sig.sigma2 = fit20.exponent;
    sig.sigma_theta = fit01.exponent - (2.0 * sig.sigma1 - sig.sigma2);
    return sig;
}

namespace {

const std::array<MomentOrder, 5> kModelOrders = {
    MomentOrder{1, 0}, MomentOrder{2, 0}, MomentOrder{0, 1}, MomentOrder{0, 2},
    MomentOrder{1, 1}};

} // namespace

PrefactorModel
fit_prefactor_model(const std::map<MomentOrder, PowerLawFit>& fits) {
    std::array<double, 5> log_c{};
    for (std::size_t i = 0; i < kModelOrders.size(); ++i) {
        auto it = fits.find(kModelOrders[i]);
        if (it == fits.end()) {
            throw ValidationError("fit_prefactor_model: missing fit for " +
                                  order_label(kModelOrders[i]));
        }
        if (!(it->second.prefactor > 0.0)) {
            throw ValidationError("fit_prefactor_model: non-positive "
                                  "prefactor at " +
                                  order_label(kModelOrders[i]));
        }
        log_c[i] = std::log(it->second.prefactor);
    }

    // exact log-space seed from (1,0), (2,0), (0,1)
    const double beta_seed = log_c[1] - log_c[0];
    const double log_alpha_seed = 2.0 * log_c[0] - log_c[1];
    const double beta_theta_seed = log_c[2] - log_alpha_seed;

    auto objective = [&](double log_alpha, double beta, double beta_theta) {
        double worst = 0.0;
        for (std::size_t i = 0; i < kModelOrders.size(); ++i) {
            const MomentOrder& o = kModelOrders[i];
            const double t = std::exp(log_alpha + o.n * beta +
                                      o.m * beta_theta - log_c[i]);
            worst = std::max(worst, std::abs(1.0 - t));
        }
        return worst;
    };

    std::array<double, 3> p{log_alpha_seed, beta_seed, beta_theta_seed};
    double best = objective(p[0], p[1], p[2]);

    // deterministic cyclic coordinate descent with shrinking golden sweeps
    double window = 0.1;
    for (int sweep = 0; sweep < 40; ++sweep) {
        for (int axis = 0; axis < 3; ++axis) {
            auto f1 = [&](double v) {
                std::array<double, 3> q = p;
                q[axis] = v;
                return objective(q[0], q[1], q[2]);
            };
            const double v =
                golden_section(f1, p[axis] - window, p[axis] + window, 120);
            const double fv = f1(v);
            if (fv < best) {
                best = fv;
                p[axis] = v;
            }
        }
        window *= 0.6;
    }

    PrefactorModel model;
    model.alpha_prime = std::exp(p[0]);
    model.beta_prime = p[1];
    model.beta_prime_theta = p[2];
    return model;
}

MomentProfile predict_moment(MomentOrder order, const ScalingExponents& sig,
                             const PrefactorModel& model,
                             const WallNormalGrid& grid,
                             const FlowCase& flow_case) {
    const double e = exponent(order, sig);
    const double c = model.prefactor(order);
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        values[i] = x == 0.0 ? 0.0 : c * std::pow(x, e);
    }
    return make_profile(order, grid, std::move(values), MomentBasis::Deficit,
                        flow_case);
}

std::string to_string(ScalingRegime regime) {
    switch (regime) {
    case ScalingRegime::AnomalousDominated: return "anomalous-dominated";
    case ScalingRegime::Mixed: return "mixed";
    case ScalingRegime::Degenerate: return "degenerate";
    }
    return "unknown";
}

AnomalousScalingReport anomalous_scaling_report(const ScalingExponents& sig) {
    AnomalousScalingReport report;
    report.space_time_per_n = sig.sigma2 - sig.sigma1;
    report.sigma_theta = sig.sigma_theta;
    report.intermittency = 2.0 * sig.sigma1 - sig.sigma2;
    if (report.intermittency == 0.0) {
        report.regime = ScalingRegime::Degenerate;
    } else if (std::abs(report.space_time_per_n) <
                   0.1 * std::abs(report.intermittency) &&
               std::abs(report.sigma_theta) <
                   0.1 * std::abs(report.intermittency)) {
        report.regime = ScalingRegime::AnomalousDominated;
    } else {
        report.regime = ScalingRegime::Mixed;
    }
    return report;
}

} // namespace chanmom
