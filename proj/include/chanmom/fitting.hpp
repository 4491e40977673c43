#ifndef CHANMOM_FITTING_HPP
#define CHANMOM_FITTING_HPP

#include <map>
#include <utility>

#include "chanmom/types.hpp"

namespace chanmom {

/// The three fitted scaling parameters. Every moment exponent is a linear
/// combination of these: exponent(1,0) = sigma1 and exponent(2,0) = sigma2
/// are exact algebraic identities.
struct ScalingExponents {
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double sigma_theta = 0.0;
};

/// Deficit power-law exponent at order (n, m):
///   n (sigma2 - sigma1) + m sigma_theta + 2 sigma1 - sigma2.
double exponent(MomentOrder order, const ScalingExponents& sig);

/// Result of one minimax power-law fit, deficit = prefactor * x^exponent.
struct PowerLawFit {
    MomentOrder order;
    double exponent = 0.0;
    double prefactor = 0.0; // C'(n,m) > 0
    std::pair<double, double> fit_range{0.0, 0.0};
    double max_rel_error = 0.0; // achieved L-inf relative error
    int n_points = 0;
};

/// Exponential prefactor model C'(n,m) = alpha' e^{n beta' + m beta'_theta}.
struct PrefactorModel {
    double alpha_prime = 0.0;
    double beta_prime = 0.0;
    double beta_prime_theta = 0.0;

    double prefactor(MomentOrder order) const;
};

struct FitRange {
    double x_lo = 0.0;  // exclusive; the centre point (deficit = 0) is always out
    double x_hi = 0.75; // inclusive
};

struct FitOptions {
    /// Drop non-positive deficit values inside the range instead of failing.
    bool drop_nonpositive = false;
};

/// Fits deficit = C x^e by minimizing the L-inf norm of the relative error
/// |(data - C x^e)/data| over grid points with x in (x_lo, x_hi] and
/// positive deficit values. At least 8 usable points are required.
///
/// Deterministic composite solver: ordinary least squares in log-log space
/// seeds a Nelder-Mead search on (e, log C); a golden-section sweep on the
/// exponent then polishes, re-optimizing C in closed form per exponent. For
/// fixed e the minimax-optimal C balances the extremes of t_i = x_i^e/d_i:
/// C = 2/(t_min + t_max), with error (t_max - t_min)/(t_max + t_min).
PowerLawFit fit_power_law(const MomentProfile& deficit, FitRange range,
                          const FitOptions& options = {});

/// One-dimensional minimax fit of the prefactor with the exponent pinned to
/// exponent(order, sig). The closed-form balanced C is exact here.
PowerLawFit fit_constrained(const MomentProfile& deficit,
                            const ScalingExponents& sig, FitRange range,
                            const FitOptions& options = {});

/// sigma1 and sigma2 from the free fits of the first two velocity moments;
/// sigma_theta from the first temperature moment via
/// sigma_theta = exponent(0,1) - (2 sigma1 - sigma2).
ScalingExponents extract_sigmas(const PowerLawFit& fit10,
                                const PowerLawFit& fit20,
                                const PowerLawFit& fit01);

/// Fits (alpha', beta', beta'_theta) to the prefactors of the five orders
/// (1,0), (2,0), (0,1), (0,2), (1,1) by minimax relative error, seeded by
/// the exact log-space solution from (1,0), (2,0), (0,1).
PrefactorModel
fit_prefactor_model(const std::map<MomentOrder, PowerLawFit>& fits);

/// Deficit-basis profile predicted from the fitted parameters:
/// values = C'(n,m) (x2/h)^exponent, with 0 at the exact centre point.
MomentProfile predict_moment(MomentOrder order, const ScalingExponents& sig,
                             const PrefactorModel& model,
                             const WallNormalGrid& grid,
                             const FlowCase& flow_case);

enum class ScalingRegime { AnomalousDominated, Mixed, Degenerate };

std::string to_string(ScalingRegime regime);

/// Decomposition of the exponent into its symmetry contributions.
struct AnomalousScalingReport {
    double space_time_per_n = 0.0; // sigma2 - sigma1, per unit n
    double sigma_theta = 0.0;      // per unit m
    double intermittency = 0.0;    // 2 sigma1 - sigma2, order-independent
    ScalingRegime regime = ScalingRegime::Mixed;
};

/// Flags "anomalous-dominated" when |sigma2 - sigma1| and |sigma_theta| are
/// each below 10% of |2 sigma1 - sigma2|; "degenerate" when the
/// intermittency term vanishes exactly.
AnomalousScalingReport anomalous_scaling_report(const ScalingExponents& sig);

} // namespace chanmom

#endif // CHANMOM_FITTING_HPP
