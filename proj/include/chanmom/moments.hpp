#ifndef CHANMOM_MOMENTS_HPP
#define CHANMOM_MOMENTS_HPP

#include <map>
#include <optional>
#include <vector>

#include "chanmom/types.hpp"

namespace chanmom {

/// One instantaneous snapshot: U1 and Theta fields on an n1 x n2 x n3 grid.
/// Storage is plane-major: index(i1, i2, i3) = i2*(n1*n3) + i1*n3 + i3, so
/// each x2 plane is contiguous.
struct SnapshotFields {
    std::vector<double> u1;
    std::vector<double> theta;
};

struct SnapshotShape {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::size_t n3 = 0;

    std::size_t field_size() const { return n1 * n2 * n3; }
    std::size_t plane_size() const { return n1 * n3; }
};

/// An ensemble of instantaneous (U1, Theta) fields, homogeneous in x1, x3
/// and time. Theta is the transformed temperature; it is expected positive
/// but only finiteness is enforced.
class SnapshotEnsemble {
public:
    SnapshotEnsemble(SnapshotShape shape, std::vector<SnapshotFields> snapshots,
                     WallNormalGrid grid, FlowCase flow_case);

    const SnapshotShape& shape() const { return shape_; }
    const std::vector<SnapshotFields>& snapshots() const { return snapshots_; }
    const WallNormalGrid& grid() const { return grid_; }
    const FlowCase& flow_case() const { return flow_case_; }

    /// Number of Theta samples <= 0 found at construction (warning, not error).
    std::size_t nonpositive_theta_count() const { return nonpositive_theta_; }

private:
    SnapshotShape shape_;
    std::vector<SnapshotFields> snapshots_;
    WallNormalGrid grid_;
    FlowCase flow_case_;
    std::size_t nonpositive_theta_ = 0;
};

/// Plane average of U1^n * Theta^m over all x1, x3 points and snapshots.
/// Uses pairwise summation per plane; reduction order is fixed, so repeated
/// runs are bit-identical. Returns an Instantaneous-basis profile.
MomentProfile compute_moment(const SnapshotEnsemble& ensemble,
                             MomentOrder order);

/// Mean profiles used by the H <-> R conversions. Only the side actually
/// referenced by the order needs to be set.
struct MeanProfiles {
    std::optional<MomentProfile> u_mean;     // H(1,0)
    std::optional<MomentProfile> theta_mean; // H(0,1)
};

/// Raw moment from central moments via the binomial expansion
///   H(n,m) = sum_{j<=n, k<=m} C(n,j) C(m,k) Ubar^(n-j) Tbar^(m-k) R(j,k)
/// with R(0,0) = 1 and R(1,0) = R(0,1) = 0 implied. central_moments must
/// contain every (j,k) with j <= n, k <= m, j + k >= 2.
MomentProfile h_from_r(const MeanProfiles& means,
                       const std::map<MomentOrder, MomentProfile>& central_moments,
                       MomentOrder order);

/// Central moment from raw moments (inverse binomial expansion), with means
/// taken from H(1,0) and H(0,1) inside h_moments.
MomentProfile r_from_h(const std::map<MomentOrder, MomentProfile>& h_moments,
                       MomentOrder order);

enum class CenterlinePolicy {
    CenterPoint,      // value at the grid point nearest x2/h = 0
    SymmetricAverage  // mean of the two grid points nearest the centre
};

/// Deficit profile (H_cl - H) / (u_tau^n theta_tau^m). The centreline value
/// is recorded in the result's metadata. Under CenterPoint the deficit at
/// the centre grid point is exactly zero.
MomentProfile to_deficit(const MomentProfile& profile,
                         CenterlinePolicy policy = CenterlinePolicy::CenterPoint);

} // namespace chanmom

#endif // CHANMOM_MOMENTS_HPP
