#include "chanmom/mpc.hpp"

#include <cmath>
#include <sstream>

namespace chanmom {

std::string to_string(MpcTermKind kind) {
    switch (kind) {
    case MpcTermKind::TimeDerivative: return "time_derivative";
    case MpcTermKind::Convective: return "convective";
    case MpcTermKind::PressureGradient: return "pressure_gradient";
    case MpcTermKind::ViscousDiffusion: return "viscous_diffusion";
    case MpcTermKind::ThermalDiffusion: return "thermal_diffusion";
    }
    return "unknown";
}

std::string to_string(MpcCoefficient c) {
    switch (c) {
    case MpcCoefficient::One: return "1";
    case MpcCoefficient::MinusNu: return "-nu";
    case MpcCoefficient::MinusAlpha: return "-alpha";
    }
    return "unknown";
}

std::string CorrelationRef::describe() const {
    std::ostringstream s;
    s << object << "[n=" << velocity_count << ",m=" << temperature_count;
    if (object == 'I') s << ",P@" << pressure_slot;
    s << "]";
    if (extra_index) {
        const int extra = velocity_count + temperature_count;
        s << "(i(" << extra << ")->k @ x(" << moved_to_point << "))";
    }
    return s.str();
}

std::vector<MpcTerm> enumerate_mpc_terms(MomentOrder order) {
    if (order.total() < 1) {
        throw ValidationError("enumerate_mpc_terms: order must satisfy "
                              "n + m >= 1");
    }

    const int n = order.n;
    const int m = order.m;
    std::vector<MpcTerm> terms;
    terms.reserve(1 + 3 * n + 2 * m);

    const CorrelationRef base{'H', n, m, 0, false, 0};

    terms.push_back({MpcTermKind::TimeDerivative, 0, MpcCoefficient::One, base});

    // velocity points: convective + pressure gradient + viscous diffusion
    for (int a = 1; a <= n; ++a) {
        CorrelationRef conv{'H', n + 1, m, 0, true, a};
        terms.push_back({MpcTermKind::Convective, a, MpcCoefficient::One, conv});

        CorrelationRef pres{'I', n - 1, m, a, false, 0};
        terms.push_back(
            {MpcTermKind::PressureGradient, a, MpcCoefficient::One, pres});

        terms.push_back(
            {MpcTermKind::ViscousDiffusion, a, MpcCoefficient::MinusNu, base});
    }

    // temperature points: convective + thermal diffusion
    for (int b = n + 1; b <= n + m; ++b) {
        CorrelationRef conv{'H', n + 1, m, 0, true, b};
        terms.push_back({MpcTermKind::Convective, b, MpcCoefficient::One, conv});

        terms.push_back(
            {MpcTermKind::ThermalDiffusion, b, MpcCoefficient::MinusAlpha, base});
    }

    return terms;
}

ContinuityCounts count_continuity_relations(MomentOrder order) {
    ContinuityCounts counts;
    counts.c1 = order.n;
    counts.c2 = order.n >= 2 ? order.n * (order.n - 1) : 0;
    return counts;
}

double SymmetryParams::translation_for(MomentOrder order) const {
    auto it = a_h.find(order);
    return it == a_h.end() ? 0.0 : it->second;
}

bool SymmetryParams::is_identity() const {
    if (a_sx != 0.0 || a_st != 0.0 || a_theta != 0.0 || a_ss != 0.0) {
        return false;
    }
    if (a_x[0] != 0.0 || a_x[1] != 0.0 || a_x[2] != 0.0) return false;
    for (const auto& [order, value] : a_h) {
        if (value != 0.0) return false;
    }
    return true;
}

double symmetry_value_exponent(MomentOrder order, const SymmetryParams& params) {
    return order.n * (params.a_sx - params.a_st) + order.m * params.a_theta +
           params.a_ss;
}

MomentProfile apply_symmetry(const MomentProfile& profile,
                             const SymmetryParams& params) {
    if (profile.basis != MomentBasis::Instantaneous) {
        throw ValidationError("apply_symmetry: profile must be in the "
                              "instantaneous (H) basis");
    }

    if (params.is_identity()) return profile;

    const double space_scale = std::exp(params.a_sx);
    const double shift = params.a_x[1]; // x2 component
    const double value_scale =
        std::exp(symmetry_value_exponent(profile.order, params));
    const double value_shift = params.translation_for(profile.order);

    std::vector<double> points(profile.grid.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        points[i] = space_scale * profile.grid[i] + shift;
    }

    std::vector<double> values(profile.values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = value_scale * profile.values[i] + value_shift;
    }

    const bool grid_changed = params.a_sx != 0.0 || shift != 0.0;
    MomentProfile out;
    if (grid_changed) {
        WallNormalGrid grid = WallNormalGrid::transformed(points);
        out = make_profile(profile.order, std::move(grid), std::move(values),
                           MomentBasis::Instantaneous, profile.flow_case);
        out.transformed_domain = {points.front(), points.back()};
    } else {
        out = make_profile(profile.order, profile.grid, std::move(values),
                           MomentBasis::Instantaneous, profile.flow_case);
        out.transformed_domain = profile.transformed_domain;
    }
    out.centerline = profile.centerline;
    return out;
}

SymmetryParams compose(const SymmetryParams& first, const SymmetryParams& second) {
    for (const auto* p : {&first, &second}) {
        for (const auto& [order, value] : p->a_h) {
            if (value != 0.0) {
                throw ValidationError("compose: moment translations a_h must "
                                      "be zero for group composition");
            }
        }
    }
    SymmetryParams out;
    out.a_sx = first.a_sx + second.a_sx;
    out.a_st = first.a_st + second.a_st;
    out.a_theta = first.a_theta + second.a_theta;
    out.a_ss = first.a_ss + second.a_ss;
    const double s2 = std::exp(second.a_sx);
    for (int i = 0; i < 3; ++i) {
        out.a_x[i] = s2 * first.a_x[i] + second.a_x[i];
    }
    return out;
}

Infinitesimals infinitesimal_generator(MomentOrder order,
                                       const SymmetryParams& params, double t,
                                       const std::array<double, 3>& x,
                                       double h_value) {
    Infinitesimals inf;
    inf.xi_t = params.a_st * t;
    for (int i = 0; i < 3; ++i) {
        inf.xi_x[i] = params.a_sx * x[i] + params.a_x[i];
    }
    inf.eta_h = symmetry_value_exponent(order, params) * h_value +
                params.translation_for(order);
    return inf;
}

} // namespace chanmom
