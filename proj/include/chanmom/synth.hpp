#ifndef CHANMOM_SYNTH_HPP
#define CHANMOM_SYNTH_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>

#include "chanmom/fitting.hpp"
#include "chanmom/moments.hpp"
#include "chanmom/types.hpp"

namespace chanmom {

enum class NoiseKind { Multiplicative };

struct NoiseSpec {
    NoiseKind kind = NoiseKind::Multiplicative;
    double amplitude = 0.0; // in [0, 0.1]
    std::uint64_t seed = 0;
};

/// Forward model of the deficit scaling law with exactly known parameters.
/// Serves as the independent oracle for every fitting test.
struct SynthSpec {
    ScalingExponents sig;
    PrefactorModel model;
    std::map<MomentOrder, double> centerline; // H_cl per order
    FlowCase flow_case;
    WallNormalGrid grid;
    std::optional<NoiseSpec> noise;
};

/// Validates the noise amplitude range; returns the spec unchanged.
SynthSpec make_synth_spec(SynthSpec spec);

/// Default synthetic grid: 97 points log-spaced in (0.005, 1] plus the
/// exact centre point 0.
WallNormalGrid default_synth_grid();

/// Reference parameter set used by fixtures: sigma = (1.05, 1.08, 0.02),
/// prefactor model (0.9, 0.4, 0.3).
SynthSpec reference_synth_spec();

/// Generates instantaneous-basis profiles
///   H(x2) = H_cl - u_tau^n theta_tau^m C'(n,m) (x2/h)^exponent * f
/// where f = 1 + amplitude * u with u drawn uniformly in [-1, 1] from the
/// counter-based generator (stream = n * 2^32 + m, counter = point index).
/// The noise factor multiplies the deficit term, so generated deficits stay
/// positive; at the exact centre the value is H_cl.
std::map<MomentOrder, MomentProfile>
generate_profiles(const SynthSpec& spec, std::span<const MomentOrder> orders);

/// Draws an ensemble whose plane statistics are analytically known. At
/// plane j, with means mu_U(j), mu_T(j) given by the (1,0) and (0,1)
/// scaling laws of the spec:
///   U1    = (mu_U - 1) + exp(s Z1 - s^2/2)
///   Theta = (mu_T - 1) + exp(s Z2 - s^2/2)
/// with Z1, Z2 independent standard normals and spread s taken from the
/// noise amplitude (0 when noise is absent, giving the degenerate
/// distribution that reproduces mu_U^n mu_T^m exactly). Streams derive from
/// the plane index, so generation is plane-order independent.
SnapshotEnsemble generate_ensemble(const SynthSpec& spec, SnapshotShape shape,
                                   int n_snapshots);

/// Closed-form plane moment E[U1^n Theta^m] of the ensemble distribution at
/// one plane: the shifted log-normal has
///   E[(c + L)^k] = sum_j C(k,j) c^(k-j) exp(j(j-1) s^2 / 2),
/// and the pair is independent.
double analytic_plane_moment(const SynthSpec& spec, MomentOrder order,
                             std::size_t plane_index);

} // namespace chanmom

#endif // CHANMOM_SYNTH_HPP
