#include "chanmom/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace chanmom {

namespace {

void require_positive(double value, const char* field) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        std::ostringstream msg;
        msg << "flow case: field '" << field << "' must be positive, got "
            << value;
        throw ValidationError(msg.str());
    }
}

} // namespace

FlowCase make_flow_case(double re_tau, double pr, double u_tau,
                        double theta_tau, double h) {
    require_positive(re_tau, "re_tau");
    require_positive(pr, "pr");
    require_positive(u_tau, "u_tau");
    require_positive(theta_tau, "theta_tau");
    require_positive(h, "h");
    FlowCase c;
    c.re_tau = re_tau;
    c.pr = pr;
    c.pe_tau = re_tau * pr;
    c.u_tau = u_tau;
    c.theta_tau = theta_tau;
    c.h = h;
    return c;
}

MomentOrder make_moment_order(int n, int m) {
    if (n < 0 || m < 0) {
        throw ValidationError("moment order: n and m must be non-negative");
    }
    if (n + m < 1) {
        throw ValidationError("moment order: n + m must be at least 1");
    }
    return MomentOrder{n, m};
}

std::string order_label(const MomentOrder& order) {
    std::ostringstream s;
    s << "H(" << order.n << "," << order.m << ")";
    return s.str();
}

namespace {

void check_strictly_increasing(const std::vector<double>& points) {
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i])) {
            throw ValidationError("grid: non-finite point at index " +
                                  std::to_string(i));
        }
        if (i > 0 && !(points[i] > points[i - 1])) {
            throw ValidationError("grid: points must be strictly increasing "
                                  "(violated at index " +
                                  std::to_string(i) + ")");
        }
    }
}

} // namespace

WallNormalGrid::WallNormalGrid(std::vector<double> points)
    : points_(std::move(points)), canonical_(true) {
    check_strictly_increasing(points_);
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (points_[i] < 0.0 || points_[i] > 1.0) {
            throw ValidationError("grid: point " + std::to_string(points_[i]) +
                                  " at index " + std::to_string(i) +
                                  " outside [0, 1]");
        }
    }
}

WallNormalGrid WallNormalGrid::transformed(std::vector<double> points) {
    check_strictly_increasing(points);
    WallNormalGrid g;
    g.points_ = std::move(points);
    g.canonical_ = false;
    return g;
}

std::size_t WallNormalGrid::centre_index() const {
    if (points_.empty()) {
        throw ValidationError("grid: empty grid has no centre point");
    }
    std::size_t best = 0;
    double best_dist = std::abs(points_[0]);
    for (std::size_t i = 1; i < points_.size(); ++i) {
        const double d = std::abs(points_[i]);
        if (d < best_dist) {
            best_dist = d;
            best = i;
        }
    }
    return best;
}

bool WallNormalGrid::has_exact_centre() const {
    return !points_.empty() && points_[centre_index()] == 0.0;
}

std::string to_string(MomentBasis basis) {
    switch (basis) {
    case MomentBasis::Instantaneous: return "instantaneous";
    case MomentBasis::Fluctuation: return "fluctuation";
    case MomentBasis::Deficit: return "deficit";
    }
    return "unknown";
}

MomentBasis moment_basis_from_string(const std::string& name) {
    if (name == "instantaneous") return MomentBasis::Instantaneous;
    if (name == "fluctuation") return MomentBasis::Fluctuation;
    if (name == "deficit") return MomentBasis::Deficit;
    throw ValidationError("unknown moment basis '" + name + "'");
}

MomentProfile make_profile(MomentOrder order, WallNormalGrid grid,
                           std::vector<double> values, MomentBasis basis,
                           FlowCase flow_case) {
    if (values.size() != grid.size()) {
        throw ValidationError(
            "profile " + order_label(order) + ": " +
            std::to_string(values.size()) + " values for " +
            std::to_string(grid.size()) + " grid points");
    }
    MomentProfile p;
    p.order = order;
    p.grid = std::move(grid);
    p.values = std::move(values);
    p.basis = basis;
    p.flow_case = flow_case;
    return p;
}

} // namespace chanmom
