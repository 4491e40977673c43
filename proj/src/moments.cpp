#include "chanmom/moments.hpp"

#include <cmath>
#include <sstream>

#include "chanmom/numerics.hpp"

namespace chanmom {

SnapshotEnsemble::SnapshotEnsemble(SnapshotShape shape,
                                   std::vector<SnapshotFields> snapshots,
                                   WallNormalGrid grid, FlowCase flow_case)
    : shape_(shape), snapshots_(std::move(snapshots)), grid_(std::move(grid)),
      flow_case_(flow_case) {
    if (shape_.n1 == 0 || shape_.n2 == 0 || shape_.n3 == 0) {
        throw ValidationError("ensemble: all shape extents must be positive");
    }
    if (grid_.size() != shape_.n2) {
        throw ValidationError("ensemble: grid length " +
                              std::to_string(grid_.size()) +
                              " does not match n2 = " +
                              std::to_string(shape_.n2));
    }
    const std::size_t expected = shape_.field_size();
    for (std::size_t s = 0; s < snapshots_.size(); ++s) {
        const auto& snap = snapshots_[s];
        if (snap.u1.size() != expected || snap.theta.size() != expected) {
            throw ValidationError("ensemble: snapshot " + std::to_string(s) +
                                  " field size does not match shape");
        }
        for (std::size_t i = 0; i < expected; ++i) {
            if (!std::isfinite(snap.u1[i])) {
                throw ValidationError("ensemble: non-finite U1 sample in "
                                      "snapshot " + std::to_string(s));
            }
            if (!std::isfinite(snap.theta[i])) {
                throw ValidationError("ensemble: non-finite Theta sample in "
                                      "snapshot " + std::to_string(s));
            }
            if (snap.theta[i] <= 0.0) ++nonpositive_theta_;
        }
    }
}

MomentProfile compute_moment(const SnapshotEnsemble& ensemble,
                             MomentOrder order) {
    if (ensemble.snapshots().empty()) {
        throw ValidationError("compute_moment: empty ensemble");
    }
    if (order.total() < 1) {
        throw ValidationError("compute_moment: order must satisfy n + m >= 1");
    }

    const auto& shape = ensemble.shape();
    const std::size_t plane = shape.plane_size();
    const std::size_t n_snaps = ensemble.snapshots().size();
    const double denom =
        static_cast<double>(plane) * static_cast<double>(n_snaps);

    std::vector<double> values(shape.n2, 0.0);
    std::vector<double> products(plane);
    std::vector<double> snap_sums(n_snaps);

    for (std::size_t j = 0; j < shape.n2; ++j) {
        const std::size_t offset = j * plane;
        for (std::size_t s = 0; s < n_snaps; ++s) {
            const auto& snap = ensemble.snapshots()[s];
            for (std::size_t p = 0; p < plane; ++p) {
                products[p] = ipow(snap.u1[offset + p], order.n) *
                              ipow(snap.theta[offset + p], order.m);
            }
            snap_sums[s] = pairwise_sum(products);
        }
        const double total = pairwise_sum(snap_sums);
        if (!std::isfinite(total)) {
            throw NumericalError("compute_moment " + order_label(order) +
                                 ": non-finite accumulation at plane " +
                                 std::to_string(j));
        }
        values[j] = total / denom;
    }

    return make_profile(order, ensemble.grid(), std::move(values),
                        MomentBasis::Instantaneous, ensemble.flow_case());
}

namespace {

void check_same_grid(const MomentProfile& a, const MomentProfile& b,
                     const char* op) {
    if (a.grid.points() != b.grid.points()) {
        throw ValidationError(std::string(op) +
                              ": input profiles use different grids");
    }
}

std::string missing_orders_message(const char* op,
                                   const std::vector<MomentOrder>& missing) {
    std::ostringstream msg;
    msg << op << ": missing required moment(s)";
    for (const auto& o : missing) msg << " (" << o.n << "," << o.m << ")";
    return msg.str();
}

} // namespace

MomentProfile h_from_r(const MeanProfiles& means,
                       const std::map<MomentOrder, MomentProfile>& central_moments,
                       MomentOrder order) {
    if (order.n >= 1 && !means.u_mean) {
        throw ValidationError("h_from_r: velocity mean profile required for n >= 1");
    }
    if (order.m >= 1 && !means.theta_mean) {
        throw ValidationError("h_from_r: temperature mean profile required for m >= 1");
    }

    const MomentProfile* reference = means.u_mean ? &*means.u_mean
                                                  : &*means.theta_mean;

    std::vector<MomentOrder> missing;
    for (int j = 0; j <= order.n; ++j) {
        for (int k = 0; k <= order.m; ++k) {
            if (j + k < 2) continue; // R(0,0), R(1,0), R(0,1) are implied
            if (!central_moments.count(MomentOrder{j, k})) {
                missing.push_back(MomentOrder{j, k});
            }
        }
    }
    if (!missing.empty()) {
        throw ValidationError(missing_orders_message("h_from_r", missing));
    }

    const std::size_t len = reference->grid.size();
    if (means.u_mean && means.theta_mean) {
        check_same_grid(*means.u_mean, *means.theta_mean, "h_from_r");
    }
    for (const auto& [o, prof] : central_moments) {
        check_same_grid(*reference, prof, "h_from_r");
    }

    std::vector<double> values(len, 0.0);
    for (std::size_t p = 0; p < len; ++p) {
        const double ubar = means.u_mean ? means.u_mean->values[p] : 0.0;
        const double tbar = means.theta_mean ? means.theta_mean->values[p] : 0.0;
        double sum = 0.0;
        for (int j = 0; j <= order.n; ++j) {
            for (int k = 0; k <= order.m; ++k) {
                double r;
                if (j + k == 0) {
                    r = 1.0;
                } else if (j + k == 1) {
                    r = 0.0; // central first moments vanish
                } else {
                    r = central_moments.at(MomentOrder{j, k}).values[p];
                }
                if (r == 0.0) continue;
                sum += binomial(order.n, j) * binomial(order.m, k) *
                       ipow(ubar, order.n - j) * ipow(tbar, order.m - k) * r;
            }
        }
        values[p] = sum;
    }

    return make_profile(order, reference->grid, std::move(values),
                        MomentBasis::Instantaneous, reference->flow_case);
}

MomentProfile r_from_h(const std::map<MomentOrder, MomentProfile>& h_moments,
                       MomentOrder order) {
    std::vector<MomentOrder> missing;
    for (int j = 0; j <= order.n; ++j) {
        for (int k = 0; k <= order.m; ++k) {
            if (j + k < 1) continue; // H(0,0) = 1 implied
            if (!h_moments.count(MomentOrder{j, k})) {
                missing.push_back(MomentOrder{j, k});
            }
        }
    }
    if (!missing.empty()) {
        throw ValidationError(missing_orders_message("r_from_h", missing));
    }

    const MomentProfile& reference = h_moments.begin()->second;
    for (const auto& [o, prof] : h_moments) {
        check_same_grid(reference, prof, "r_from_h");
    }

    const MomentProfile* u_mean =
        order.n >= 1 ? &h_moments.at(MomentOrder{1, 0}) : nullptr;
    const MomentProfile* t_mean =
        order.m >= 1 ? &h_moments.at(MomentOrder{0, 1}) : nullptr;

    const std::size_t len = reference.grid.size();
    std::vector<double> values(len, 0.0);
    for (std::size_t p = 0; p < len; ++p) {
        const double ubar = u_mean ? u_mean->values[p] : 0.0;
        const double tbar = t_mean ? t_mean->values[p] : 0.0;
        double sum = 0.0;
        for (int j = 0; j <= order.n; ++j) {
            for (int k = 0; k <= order.m; ++k) {
                const double h = (j + k == 0)
                                     ? 1.0
                                     : h_moments.at(MomentOrder{j, k}).values[p];
                sum += binomial(order.n, j) * binomial(order.m, k) *
                       ipow(-ubar, order.n - j) * ipow(-tbar, order.m - k) * h;
            }
        }
        values[p] = sum;
    }

    return make_profile(order, reference.grid, std::move(values),
                        MomentBasis::Fluctuation, reference.flow_case);
}

MomentProfile to_deficit(const MomentProfile& profile, CenterlinePolicy policy) {
    if (profile.basis != MomentBasis::Instantaneous) {
        throw ValidationError("to_deficit: profile must be in the "
                              "instantaneous (H) basis");
    }
    if (profile.grid.size() == 0) {
        throw ValidationError("to_deficit: empty profile");
    }

    double h_cl = 0.0;
    switch (policy) {
    case CenterlinePolicy::CenterPoint:
        h_cl = profile.values[profile.grid.centre_index()];
        break;
    case CenterlinePolicy::SymmetricAverage: {
        if (profile.grid.has_exact_centre()) {
            h_cl = profile.values[profile.grid.centre_index()];
        } else if (profile.grid.size() >= 2) {
            // Grid points are sorted by x2/h, so the two nearest the centre
            // are the first two.
            h_cl = 0.5 * (profile.values[0] + profile.values[1]);
        } else {
            throw ValidationError("to_deficit: centre point absent and "
                                  "symmetric average needs at least 2 points");
        }
        break;
    }
    }

    const double norm = ipow(profile.flow_case.u_tau, profile.order.n) *
                        ipow(profile.flow_case.theta_tau, profile.order.m);
    std::vector<double> values(profile.values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = (h_cl - profile.values[i]) / norm;
    }

    MomentProfile deficit = make_profile(profile.order, profile.grid,
                                         std::move(values), MomentBasis::Deficit,
                                         profile.flow_case);
    deficit.centerline = h_cl;
    return deficit;
}

} // namespace chanmom
