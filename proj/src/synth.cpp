#include "chanmom/synth.hpp"

#include <cmath>

#include "chanmom/numerics.hpp"
#include "chanmom/rng.hpp"

namespace chanmom {

namespace {

std::uint64_t order_stream(MomentOrder order) {
    return (static_cast<std::uint64_t>(order.n) << 32) |
           static_cast<std::uint64_t>(order.m);
}

/// Law value of the deficit at x for one order, without noise.
double law_deficit(const SynthSpec& spec, MomentOrder order, double x) {
    if (x == 0.0) return 0.0;
    const double e = exponent(order, spec.sig);
    return spec.model.prefactor(order) * std::pow(x, e);
}

double law_mean(const SynthSpec& spec, MomentOrder order, double x) {
    const double norm = ipow(spec.flow_case.u_tau, order.n) *
                        ipow(spec.flow_case.theta_tau, order.m);
    return spec.centerline.at(order) - norm * law_deficit(spec, order, x);
}

double require_centerline(const SynthSpec& spec, MomentOrder order) {
    auto it = spec.centerline.find(order);
    if (it == spec.centerline.end()) {
        throw ValidationError("synth: missing centerline entry for " +
                              order_label(order));
    }
    return it->second;
}

} // namespace

SynthSpec make_synth_spec(SynthSpec spec) {
    if (spec.noise) {
        const double a = spec.noise->amplitude;
        if (!(a >= 0.0 && a <= 0.1)) {
            throw ValidationError("synth: noise amplitude must lie in "
                                  "[0, 0.1], got " + std::to_string(a));
        }
    }
    if (!(spec.model.alpha_prime > 0.0)) {
        throw ValidationError("synth: alpha' must be positive");
    }
    return spec;
}

WallNormalGrid default_synth_grid() {
    std::vector<double> points;
    points.reserve(98);
    points.push_back(0.0);
    const double lo = 0.005;
    const int count = 97;
    for (int i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / (count - 1);
        points.push_back(lo * std::pow(1.0 / lo, t));
    }
    points.back() = 1.0;
    return WallNormalGrid(std::move(points));
}

SynthSpec reference_synth_spec() {
    SynthSpec spec;
    spec.sig = {1.05, 1.08, 0.02};
    spec.model = {0.9, 0.4, 0.3};
    spec.flow_case = make_flow_case(2000.0, 0.71, 1.0, 1.0, 1.0);
    spec.grid = default_synth_grid();
    for (int n = 0; n <= 7; ++n) {
        for (int m = 0; m <= 7; ++m) {
            if (n + m < 1 || n + m > 7) continue;
            // large enough that all instantaneous values stay positive
            spec.centerline[MomentOrder{n, m}] =
                3.0 * spec.model.prefactor(MomentOrder{n, m});
        }
    }
    return make_synth_spec(spec);
}

std::map<MomentOrder, MomentProfile>
generate_profiles(const SynthSpec& spec, std::span<const MomentOrder> orders) {
    if (orders.empty()) {
        throw ValidationError("synth: no orders requested");
    }

    std::map<MomentOrder, MomentProfile> out;
    for (const MomentOrder& order : orders) {
        const double h_cl = require_centerline(spec, order);
        const double norm = ipow(spec.flow_case.u_tau, order.n) *
                            ipow(spec.flow_case.theta_tau, order.m);

        const CounterRng rng(spec.noise ? spec.noise->seed : 0,
                             order_stream(order));
        const double amp = spec.noise ? spec.noise->amplitude : 0.0;

        std::vector<double> values(spec.grid.size());
        for (std::size_t i = 0; i < spec.grid.size(); ++i) {
            const double deficit = law_deficit(spec, order, spec.grid[i]);
            const double factor =
                amp > 0.0 ? 1.0 + amp * rng.uniform_sym(i) : 1.0;
            values[i] = h_cl - norm * deficit * factor;
        }
        out.emplace(order,
                    make_profile(order, spec.grid, std::move(values),
                                 MomentBasis::Instantaneous, spec.flow_case));
    }
    return out;
}

SnapshotEnsemble generate_ensemble(const SynthSpec& spec, SnapshotShape shape,
                                   int n_snapshots) {
    if (shape.n1 < 2 || shape.n3 < 2) {
        throw ValidationError("synth ensemble: n1 and n3 must be at least 2");
    }
    if (shape.n2 != spec.grid.size()) {
        throw ValidationError("synth ensemble: n2 = " +
                              std::to_string(shape.n2) +
                              " does not match grid length " +
                              std::to_string(spec.grid.size()));
    }
    if (n_snapshots < 1) {
        throw ValidationError("synth ensemble: need at least one snapshot");
    }
    require_centerline(spec, MomentOrder{1, 0});
    require_centerline(spec, MomentOrder{0, 1});

    const double s = spec.noise ? spec.noise->amplitude : 0.0;
    const std::uint64_t seed = spec.noise ? spec.noise->seed : 0;
    const std::size_t plane = shape.plane_size();

    std::vector<SnapshotFields> snapshots(n_snapshots);
    for (auto& snap : snapshots) {
        snap.u1.resize(shape.field_size());
        snap.theta.resize(shape.field_size());
    }

    for (std::size_t j = 0; j < shape.n2; ++j) {
        const double x = spec.grid[j];
        const double mu_u = law_mean(spec, MomentOrder{1, 0}, x);
        const double mu_t = law_mean(spec, MomentOrder{0, 1}, x);
        const CounterRng rng(seed, j);
        const double half_var = 0.5 * s * s;

        for (int snap = 0; snap < n_snapshots; ++snap) {
            const std::size_t offset = j * plane;
            auto& fields = snapshots[snap];
            for (std::size_t p = 0; p < plane; ++p) {
                const std::uint64_t idx =
                    (static_cast<std::uint64_t>(snap) * plane + p) * 2;
                const double lu =
                    s > 0.0 ? std::exp(s * rng.normal(idx) - half_var) : 1.0;
                const double lt =
                    s > 0.0 ? std::exp(s * rng.normal(idx + 1) - half_var)
                            : 1.0;
                fields.u1[offset + p] = (mu_u - 1.0) + lu;
                fields.theta[offset + p] = (mu_t - 1.0) + lt;
            }
        }
    }

    return SnapshotEnsemble(shape, std::move(snapshots), spec.grid,
                            spec.flow_case);
}

double analytic_plane_moment(const SynthSpec& spec, MomentOrder order,
                             std::size_t plane_index) {
    const double x = spec.grid[plane_index];
    const double s = spec.noise ? spec.noise->amplitude : 0.0;

    auto shifted_lognormal_moment = [&](double mean, int k) {
        // c + L with c = mean - 1 and E[L^j] = exp(j(j-1) s^2 / 2)
        const double c = mean - 1.0;
        double sum = 0.0;
        for (int j = 0; j <= k; ++j) {
            sum += binomial(k, j) * ipow(c, k - j) *
                   std::exp(0.5 * j * (j - 1) * s * s);
        }
        return sum;
    };

    const double mu_u = law_mean(spec, MomentOrder{1, 0}, x);
    const double mu_t = law_mean(spec, MomentOrder{0, 1}, x);
    return shifted_lognormal_moment(mu_u, order.n) *
           shifted_lognormal_moment(mu_t, order.m);
}

} // namespace chanmom
