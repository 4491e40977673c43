#ifndef CHANMOM_TYPES_HPP
#define CHANMOM_TYPES_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chanmom/errors.hpp"

namespace chanmom {

/// Flow case metadata: friction Reynolds/Prandtl/Peclet numbers and the
/// scales (u_tau, theta_tau, h) used to normalize deficit profiles.
struct FlowCase {
    double re_tau = 0.0;
    double pr = 0.0;
    double pe_tau = 0.0; // always re_tau * pr
    double u_tau = 0.0;
    double theta_tau = 0.0;
    double h = 0.0;
};

/// Builds a FlowCase, deriving pe_tau = re_tau * pr. Throws ValidationError
/// naming the offending field if any input is non-positive.
FlowCase make_flow_case(double re_tau, double pr, double u_tau,
                        double theta_tau, double h);

/// Moment order (n, m): velocity power n, temperature power m.
struct MomentOrder {
    int n = 0;
    int m = 0;

    auto operator<=>(const MomentOrder&) const = default;

    int total() const { return n + m; }
    bool pure_velocity() const { return m == 0; }
    bool pure_temperature() const { return n == 0; }
};

/// Validates n, m >= 0 and n + m >= 1.
MomentOrder make_moment_order(int n, int m);

/// Short label "H(n,m)" used in error messages and reports.
std::string order_label(const MomentOrder& order);

/// Wall-normal grid of x2/h values. The convention is swapped relative to
/// wall units: the centre line is at x2/h = 0 and the wall at x2/h = 1.
/// Canonical grids live in [0, 1]; symmetry-transformed grids may leave that
/// interval and are marked non-canonical.
class WallNormalGrid {
public:
    WallNormalGrid() = default;

    /// Canonical grid: strictly increasing, all points in [0, 1].
    explicit WallNormalGrid(std::vector<double> points);

    /// Grid produced by an affine symmetry map; only strict monotonicity is
    /// required.
    static WallNormalGrid transformed(std::vector<double> points);

    const std::vector<double>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    double operator[](std::size_t i) const { return points_[i]; }
    bool canonical() const { return canonical_; }

    /// Index of the grid point closest to x2/h = 0.
    std::size_t centre_index() const;
    /// True if the grid contains the exact centre point 0.
    bool has_exact_centre() const;

private:
    std::vector<double> points_;
    bool canonical_ = true;
};

enum class MomentBasis {
    Instantaneous, // H: averages of products of full fields
    Fluctuation,   // R: averages of products of fluctuations
    Deficit        // (H_cl - H) / (u_tau^n theta_tau^m)
};

std::string to_string(MomentBasis basis);
MomentBasis moment_basis_from_string(const std::string& name);

/// A wall-normal profile of one moment, together with its grid, basis and
/// case metadata. Immutable after construction.
struct MomentProfile {
    MomentOrder order;
    WallNormalGrid grid;
    std::vector<double> values;
    MomentBasis basis = MomentBasis::Instantaneous;
    FlowCase flow_case;

    /// Centreline value H_cl, recorded when a deficit profile is formed.
    std::optional<double> centerline;
    /// [min, max] of the grid after a symmetry transformation.
    std::optional<std::pair<double, double>> transformed_domain;
};

/// Validates values.size() == grid.size(); throws ValidationError otherwise.
MomentProfile make_profile(MomentOrder order, WallNormalGrid grid,
                           std::vector<double> values, MomentBasis basis,
                           FlowCase flow_case);

} // namespace chanmom

#endif // CHANMOM_TYPES_HPP
