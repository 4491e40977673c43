#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "chanmom/fitting.hpp"
#include "chanmom/synth.hpp"

using namespace chanmom;

namespace {

const FlowCase kCase = make_flow_case(2000.0, 0.71, 1.0, 1.0, 1.0);

WallNormalGrid log_grid(std::size_t count, double lo = 0.01, double hi = 0.75) {
    std::vector<double> pts;
    pts.reserve(count + 1);
    pts.push_back(0.0);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / (count - 1);
        pts.push_back(lo * std::pow(hi / lo, t));
    }
    return WallNormalGrid(std::move(pts));
}

MomentProfile deficit_profile(const WallNormalGrid& grid,
                              const std::vector<double>& values,
                              MomentOrder order = {1, 0}) {
    return make_profile(order, grid, values, MomentBasis::Deficit, kCase);
}

/// Independent oracle: exhaustive grid scan of the L-inf relative error over
/// (exponent, log prefactor), evaluating the objective point by point.
struct BruteBest {
    double exponent;
    double log_prefactor;
    double error;
};

BruteBest brute_force_minimax(const std::vector<double>& x,
                              const std::vector<double>& d, double e_center,
                              double log_c_center, double window,
                              double resolution) {
    BruteBest best{0.0, 0.0, std::numeric_limits<double>::infinity()};
    const int steps = static_cast<int>(std::round(2.0 * window / resolution));
    for (int i = 0; i <= steps; ++i) {
        const double e = e_center - window + i * resolution;
        std::vector<double> t(x.size());
        for (std::size_t p = 0; p < x.size(); ++p) {
            t[p] = std::pow(x[p], e) / d[p];
        }
        for (int j = 0; j <= steps; ++j) {
            const double log_c = log_c_center - window + j * resolution;
            const double c = std::exp(log_c);
            double worst = 0.0;
            for (std::size_t p = 0; p < x.size(); ++p) {
                worst = std::max(worst, std::abs(1.0 - c * t[p]));
            }
            if (worst < best.error) {
                best = {e, log_c, worst};
            }
        }
    }
    return best;
}

std::pair<std::vector<double>, std::vector<double>>
fit_points(const MomentProfile& deficit, FitRange range) {
    std::vector<double> x, d;
    for (std::size_t i = 0; i < deficit.grid.size(); ++i) {
        const double xi = deficit.grid[i];
        if (xi > range.x_lo && xi <= range.x_hi && deficit.values[i] > 0.0) {
            x.push_back(xi);
            d.push_back(deficit.values[i]);
        }
    }
    return {x, d};
}

} // namespace

TEST_CASE("exponent formula and its identities") {
    const ScalingExponents sig{1.07, 1.11, 0.025};
    CHECK(exponent({1, 0}, sig) == sig.sigma1);
    CHECK(exponent({2, 0}, sig) == sig.sigma2);
    CHECK(exponent({0, 1}, sig) ==
          doctest::Approx(0.025 + 2 * 1.07 - 1.11).epsilon(1e-15));
    // degenerate order, exposed for diagnostics
    CHECK(exponent({0, 0}, sig) ==
          doctest::Approx(2 * 1.07 - 1.11).epsilon(1e-15));

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
        const ScalingExponents s{dist(rng), dist(rng), dist(rng)};
        CHECK(exponent({1, 0}, s) - s.sigma1 == 0.0);
        CHECK(exponent({2, 0}, s) - s.sigma2 == 0.0);
    }
}

TEST_CASE("exact power-law data is recovered") {
    const WallNormalGrid grid = log_grid(50);
    std::vector<double> values;
    for (double x : grid.points()) values.push_back(3.5 * std::pow(x, 1.9));
    const PowerLawFit fit = fit_power_law(deficit_profile(grid, values), {});
    CHECK(fit.exponent == doctest::Approx(1.9).epsilon(1e-9));
    CHECK(fit.prefactor == doctest::Approx(3.5).epsilon(1e-9));
    CHECK(fit.max_rel_error <= 1e-10);
    CHECK(fit.n_points == 50);
}

TEST_CASE("bounded perturbation bounds the minimax error") {
    const WallNormalGrid grid = log_grid(60);
    std::vector<double> values;
    for (double x : grid.points()) {
        const double delta = 0.001 * std::sin(7.0 * x); // |delta| <= 0.001
        values.push_back(0.8 * std::pow(x, 1.3) * (1.0 + delta));
    }
    const MomentProfile deficit = deficit_profile(grid, values);
    const PowerLawFit fit = fit_power_law(deficit, {});
    CHECK(fit.max_rel_error <= 0.001 + 1e-6);

    // progressive brute-force refinement down to 1e-6 resolution
    auto [x, d] = fit_points(deficit, {});
    BruteBest best{fit.exponent, std::log(fit.prefactor), fit.max_rel_error};
    double window = 0.02;
    for (double res : {1e-3, 1e-4, 1e-5, 1e-6}) {
        best = brute_force_minimax(x, d, best.exponent, best.log_prefactor,
                                   window, res);
        window = res * 10;
    }
    CHECK(fit.max_rel_error <= best.error + 1e-9);
}

TEST_CASE("solver is minimax-optimal against the brute-force oracle") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> e_dist(0.5, 2.2);
    std::uniform_real_distribution<double> c_dist(0.3, 4.0);
    std::uniform_real_distribution<double> noise(-1.0, 1.0);

    const WallNormalGrid grid = log_grid(40);
    for (int trial = 0; trial < 5; ++trial) {
        const double e_true = e_dist(rng);
        const double c_true = c_dist(rng);
        std::vector<double> values;
        for (double x : grid.points()) {
            const double wiggle = 1.0 + 2e-3 * noise(rng);
            values.push_back(c_true * std::pow(x, e_true) * wiggle);
        }
        const MomentProfile deficit = deficit_profile(grid, values);
        const PowerLawFit fit = fit_power_law(deficit, {});

        auto [x, d] = fit_points(deficit, {});
        const BruteBest best = brute_force_minimax(
            x, d, fit.exponent, std::log(fit.prefactor), 0.05, 1e-4);
        CHECK(fit.max_rel_error <= best.error + 1e-9);
    }
}

TEST_CASE("fit validation errors") {
    const WallNormalGrid grid = log_grid(20);

    SUBCASE("too few points in range") {
        std::vector<double> values;
        for (double x : grid.points()) values.push_back(std::pow(x, 1.1));
        const MomentProfile deficit = deficit_profile(grid, values);
        CHECK_THROWS_WITH_AS(fit_power_law(deficit, {0.0, 0.015}),
                             doctest::Contains("at least 8"), ValidationError);
    }

    SUBCASE("non-positive deficit points are listed or dropped") {
        std::vector<double> values;
        for (double x : grid.points()) values.push_back(std::pow(x, 1.1));
        values[5] = -1e-3;
        values[6] = 0.0;
        const MomentProfile deficit = deficit_profile(grid, values);
        CHECK_THROWS_WITH_AS(fit_power_law(deficit, {}),
                             doctest::Contains("non-positive"),
                             ValidationError);
        FitOptions permissive;
        permissive.drop_nonpositive = true;
        const PowerLawFit fit = fit_power_law(deficit, {}, permissive);
        CHECK(fit.n_points == 18);
        CHECK(fit.exponent == doctest::Approx(1.1).epsilon(1e-8));
    }

    SUBCASE("wrong basis is rejected") {
        std::vector<double> values(grid.size(), 1.0);
        const MomentProfile h = make_profile({1, 0}, grid, values,
                                             MomentBasis::Instantaneous, kCase);
        CHECK_THROWS_AS(fit_power_law(h, {}), ValidationError);
    }
}

TEST_CASE("constrained fits") {
    const WallNormalGrid grid = log_grid(50);
    const ScalingExponents sig{1.05, 1.08, 0.02};

    SUBCASE("matching exponent recovers the prefactor to 1e-12") {
        const double e = exponent({3, 0}, sig);
        std::vector<double> values;
        for (double x : grid.points()) values.push_back(2.2 * std::pow(x, e));
        const PowerLawFit fit =
            fit_constrained(deficit_profile(grid, values, {3, 0}), sig, {});
        CHECK(fit.exponent == e);
        CHECK(fit.prefactor == doctest::Approx(2.2).epsilon(1e-12));
        CHECK(fit.max_rel_error <= 1e-12);
    }

    SUBCASE("mismatched exponent grows the error as predicted") {
        // exact data C0 x^(e0), constrained exponent e0 + de over [a, b]:
        // t(x) = x^de / C0, so the balanced error is
        // (r - 1)/(r + 1) with r = (b/a)^|de|
        const double e0 = 1.5, c0 = 1.7;
        std::vector<double> values;
        for (double x : grid.points()) values.push_back(c0 * std::pow(x, e0));
        const MomentProfile deficit = deficit_profile(grid, values, {3, 0});

        for (double de : {0.01, 0.05, -0.03}) {
            ScalingExponents shifted{e0 + de, 2.0 * (e0 + de), 0.0};
            // exponent((3,0)) = 3 sigma2 - ... ; build sig giving e0 + de at (3,0)
            // simpler: order (1,0) has exponent sigma1
            ScalingExponents sig1{e0 + de, 1.0, 0.0};
            const MomentProfile d10 = deficit_profile(grid, values, {1, 0});
            const PowerLawFit fit = fit_constrained(d10, sig1, {});
            auto [x, d] = fit_points(d10, {});
            const double ratio =
                std::pow(x.back() / x.front(), std::abs(de));
            const double predicted = (ratio - 1.0) / (ratio + 1.0);
            CHECK(fit.max_rel_error ==
                  doctest::Approx(predicted).epsilon(1e-10));
            CHECK(fit.max_rel_error > 0.0);

            // brute force over the prefactor alone confirms the optimum
            double best = std::numeric_limits<double>::infinity();
            for (int k = -2000; k <= 2000; ++k) {
                const double c = fit.prefactor * std::exp(k * 1e-5);
                double worst = 0.0;
                for (std::size_t p = 0; p < x.size(); ++p) {
                    worst = std::max(
                        worst, std::abs((d[p] - c * std::pow(x[p], e0 + de)) /
                                        d[p]));
                }
                best = std::min(best, worst);
            }
            CHECK(fit.max_rel_error <= best + 1e-12);
        }
    }

    SUBCASE("synthetic mixed moment recovers the model prefactor") {
        const SynthSpec spec = reference_synth_spec();
        const MomentOrder order{2, 1};
        const auto profiles =
            generate_profiles(spec, std::vector<MomentOrder>{order});
        const MomentProfile deficit = to_deficit(profiles.at(order));
        const PowerLawFit fit = fit_constrained(deficit, spec.sig, {});
        const double expected = 0.9 * std::exp(2 * 0.4 + 0.3);
        CHECK(fit.prefactor == doctest::Approx(expected).epsilon(1e-8));
    }
}

TEST_CASE("sigma extraction") {
    auto fit_with = [](MomentOrder order, double e) {
        PowerLawFit fit;
        fit.order = order;
        fit.exponent = e;
        fit.prefactor = 1.0;
        return fit;
    };

    SUBCASE("examples") {
        ScalingExponents sig =
            extract_sigmas(fit_with({1, 0}, 1.0), fit_with({2, 0}, 2.0),
                           fit_with({0, 1}, 1.0));
        CHECK(sig.sigma_theta == doctest::Approx(1.0).epsilon(1e-15));

        sig = extract_sigmas(fit_with({1, 0}, 1.0), fit_with({2, 0}, 1.0),
                             fit_with({0, 1}, 1.05));
        CHECK(sig.sigma1 == 1.0);
        CHECK(sig.sigma2 == 1.0);
        CHECK(sig.sigma_theta == doctest::Approx(0.05).epsilon(1e-12));
    }

    SUBCASE("wrong orders are rejected") {
        CHECK_THROWS_AS(extract_sigmas(fit_with({2, 0}, 1.0),
                                       fit_with({1, 0}, 1.0),
                                       fit_with({0, 1}, 1.0)),
                        ValidationError);
    }
}

TEST_CASE("prefactor model fitting") {
    auto fits_from_model = [](const PrefactorModel& model,
                              double noise_scale = 0.0,
                              std::uint64_t seed = 0) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> noise(-1.0, 1.0);
        std::map<MomentOrder, PowerLawFit> fits;
        for (MomentOrder order : {MomentOrder{1, 0}, MomentOrder{2, 0},
                                  MomentOrder{0, 1}, MomentOrder{0, 2},
                                  MomentOrder{1, 1}}) {
            PowerLawFit fit;
            fit.order = order;
            fit.prefactor = model.prefactor(order) *
                            (1.0 + noise_scale * noise(rng));
            fits.emplace(order, fit);
        }
        return fits;
    };

    SUBCASE("exact generation inverts to 1e-10") {
        const PrefactorModel truth{0.9, 0.4, 0.3};
        const PrefactorModel fitted =
            fit_prefactor_model(fits_from_model(truth));
        CHECK(fitted.alpha_prime == doctest::Approx(0.9).epsilon(1e-10));
        CHECK(fitted.beta_prime == doctest::Approx(0.4).epsilon(1e-10));
        CHECK(fitted.beta_prime_theta == doctest::Approx(0.3).epsilon(1e-10));
    }

    SUBCASE("unit prefactors give the identity model") {
        const PrefactorModel fitted =
            fit_prefactor_model(fits_from_model({1.0, 0.0, 0.0}));
        CHECK(fitted.alpha_prime == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(fitted.beta_prime == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(fitted.beta_prime_theta == doctest::Approx(0.0).epsilon(1e-12));
    }

    SUBCASE("1% noise keeps the residual under 2%") {
        const PrefactorModel truth{0.9, 0.4, 0.3};
        const auto fits = fits_from_model(truth, 0.01, 77);
        const PrefactorModel fitted = fit_prefactor_model(fits);

        auto residual = [&](const PrefactorModel& m) {
            double worst = 0.0;
            for (const auto& [order, fit] : fits) {
                worst = std::max(worst,
                                 std::abs((fit.prefactor - m.prefactor(order)) /
                                          fit.prefactor));
            }
            return worst;
        };
        const double achieved = residual(fitted);
        CHECK(achieved <= 0.02);

        // brute-force 3-parameter oracle around the fitted optimum
        double best = achieved;
        const double la = std::log(fitted.alpha_prime);
        for (int i = -20; i <= 20; ++i) {
            for (int j = -20; j <= 20; ++j) {
                for (int k = -20; k <= 20; ++k) {
                    PrefactorModel m{std::exp(la + i * 5e-4),
                                     fitted.beta_prime + j * 5e-4,
                                     fitted.beta_prime_theta + k * 5e-4};
                    best = std::min(best, residual(m));
                }
            }
        }
        CHECK(achieved <= best + 1e-6);
    }

    SUBCASE("missing or non-positive prefactors are rejected") {
        auto fits = fits_from_model({1.0, 0.1, 0.1});
        fits.erase(MomentOrder{1, 1});
        CHECK_THROWS_WITH_AS(fit_prefactor_model(fits),
                             doctest::Contains("(1,1)"), ValidationError);

        auto bad = fits_from_model({1.0, 0.1, 0.1});
        bad.at(MomentOrder{0, 2}).prefactor = -1.0;
        CHECK_THROWS_AS(fit_prefactor_model(bad), ValidationError);
    }

    SUBCASE("1000 randomized models invert to 1e-10") {
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> alpha_dist(0.1, 10.0);
        std::uniform_real_distribution<double> beta_dist(-2.0, 2.0);
        for (int i = 0; i < 1000; ++i) {
            const PrefactorModel truth{alpha_dist(rng), beta_dist(rng),
                                       beta_dist(rng)};
            const PrefactorModel fitted =
                fit_prefactor_model(fits_from_model(truth));
            CHECK(fitted.alpha_prime ==
                  doctest::Approx(truth.alpha_prime).epsilon(1e-10));
            CHECK(fitted.beta_prime ==
                  doctest::Approx(truth.beta_prime).epsilon(1e-10));
            CHECK(fitted.beta_prime_theta ==
                  doctest::Approx(truth.beta_prime_theta).epsilon(1e-10));
        }
    }
}

TEST_CASE("statistical scaling leaves exponents invariant") {
    const WallNormalGrid grid = log_grid(40);
    std::vector<double> values;
    for (double x : grid.points()) {
        values.push_back(1.4 * std::pow(x, 1.2) * (1.0 + 1e-3 * std::sin(9 * x)));
    }
    const MomentProfile deficit = deficit_profile(grid, values);
    const PowerLawFit base = fit_power_law(deficit, {});

    for (double a : {0.3, -0.7, 2.0}) {
        const double factor = std::exp(a);
        std::vector<double> scaled;
        for (double v : values) scaled.push_back(factor * v);
        const PowerLawFit fit =
            fit_power_law(deficit_profile(grid, scaled), {});
        CHECK(std::abs(fit.exponent - base.exponent) < 1e-10);
        CHECK(fit.prefactor / base.prefactor ==
              doctest::Approx(factor).epsilon(1e-10));
    }
}

TEST_CASE("fits depend only on x2/h, not on h itself") {
    const WallNormalGrid grid = log_grid(30);
    std::vector<double> values;
    for (double x : grid.points()) values.push_back(0.6 * std::pow(x, 0.9));

    const FlowCase h1 = make_flow_case(1000, 1.0, 1.0, 1.0, 1.0);
    const FlowCase h2 = make_flow_case(1000, 1.0, 1.0, 1.0, 2.0);
    const PowerLawFit fit1 = fit_power_law(
        make_profile({1, 0}, grid, values, MomentBasis::Deficit, h1), {});
    const PowerLawFit fit2 = fit_power_law(
        make_profile({1, 0}, grid, values, MomentBasis::Deficit, h2), {});
    CHECK(fit1.exponent == fit2.exponent);
    CHECK(fit1.prefactor == fit2.prefactor);
    CHECK(fit1.max_rel_error == fit2.max_rel_error);
}

TEST_CASE("fits are deterministic") {
    const WallNormalGrid grid = log_grid(40);
    std::vector<double> values;
    for (double x : grid.points()) {
        values.push_back(2.0 * std::pow(x, 1.4) * (1.0 + 5e-4 * std::cos(13 * x)));
    }
    const MomentProfile deficit = deficit_profile(grid, values);
    const PowerLawFit a = fit_power_law(deficit, {});
    const PowerLawFit b = fit_power_law(deficit, {});
    CHECK(a.exponent == b.exponent);
    CHECK(a.prefactor == b.prefactor);
    CHECK(a.max_rel_error == b.max_rel_error);
}

TEST_CASE("prediction from fitted parameters") {
    SUBCASE("linear law") {
        const ScalingExponents sig{1.0, 1.0, 0.0};
        const PrefactorModel model{1.0, 0.0, 0.0};
        const WallNormalGrid grid({0.0, 0.25, 0.5, 1.0});
        const MomentProfile p =
            predict_moment({1, 0}, sig, model, grid, kCase);
        CHECK(p.values[0] == 0.0);
        CHECK(p.values[1] == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(p.values[3] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(p.basis == MomentBasis::Deficit);
    }

    SUBCASE("temperature law with the model prefactor") {
        const ScalingExponents sig{1.0, 1.0, 0.05};
        const PrefactorModel model{2.0, 0.0, 0.1};
        const WallNormalGrid grid({0.0, 0.5});
        const MomentProfile p =
            predict_moment({0, 1}, sig, model, grid, kCase);
        CHECK(p.values[1] == doctest::Approx(2.0 * std::exp(0.1) *
                                             std::pow(0.5, 1.05))
                                 .epsilon(1e-14));
    }

    SUBCASE("predict then fit round trips") {
        const ScalingExponents sig{1.05, 1.08, 0.02};
        const PrefactorModel model{0.9, 0.4, 0.3};
        const WallNormalGrid grid = log_grid(50);
        const MomentProfile p =
            predict_moment({3, 2}, sig, model, grid, kCase);
        const PowerLawFit fit = fit_power_law(p, {});
        CHECK(fit.exponent ==
              doctest::Approx(exponent({3, 2}, sig)).epsilon(1e-10));
        CHECK(fit.prefactor ==
              doctest::Approx(model.prefactor({3, 2})).epsilon(1e-10));
    }
}

TEST_CASE("anomalous scaling diagnostics") {
    SUBCASE("pure intermittency is anomalous-dominated") {
        const AnomalousScalingReport r =
            anomalous_scaling_report({1.0, 1.0, 0.0});
        CHECK(r.space_time_per_n == 0.0);
        CHECK(r.sigma_theta == 0.0);
        CHECK(r.intermittency == 1.0);
        CHECK(r.regime == ScalingRegime::AnomalousDominated);
    }

    SUBCASE("cancelling sigmas are degenerate") {
        const AnomalousScalingReport r =
            anomalous_scaling_report({1.5, 3.0, 0.0});
        CHECK(r.intermittency == 0.0);
        CHECK(r.regime == ScalingRegime::Degenerate);
    }

    SUBCASE("paper-like values are anomalous-dominated") {
        // 2 sigma1 - sigma2 slightly below 2, sigma_theta far smaller
        const AnomalousScalingReport r =
            anomalous_scaling_report({1.98, 2.0, 0.02});
        CHECK(r.intermittency == doctest::Approx(1.96));
        CHECK(r.regime == ScalingRegime::AnomalousDominated);
    }

    SUBCASE("large order dependence is mixed") {
        const AnomalousScalingReport r =
            anomalous_scaling_report({1.0, 1.5, 0.0});
        CHECK(r.regime == ScalingRegime::Mixed);
    }
}
