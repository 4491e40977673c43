#ifndef CHANMOM_MPC_HPP
#define CHANMOM_MPC_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include "chanmom/types.hpp"

namespace chanmom {

enum class MpcTermKind {
    TimeDerivative,
    Convective,
    PressureGradient,
    ViscousDiffusion,
    ThermalDiffusion
};

std::string to_string(MpcTermKind kind);

/// Symbolic coefficient in front of a term of the moment transport equation.
enum class MpcCoefficient { One, MinusNu, MinusAlpha };

std::string to_string(MpcCoefficient c);

/// Which correlation object a term differentiates, and how its index set was
/// produced from the base moment (extra velocity index substituted to a
/// point, or one velocity slot replaced by pressure).
struct CorrelationRef {
    char object = 'H';         // 'H' moment or 'I' pressure correlation
    int velocity_count = 0;    // number of velocity indices
    int temperature_count = 0; // number of temperature indices
    int pressure_slot = 0;     // for 'I': the slot holding P (1-based), else 0
    bool extra_index = false;  // i_(n+m+1) -> k substitution applied
    int moved_to_point = 0;    // point receiving the extra index, else 0

    /// Compact text form, e.g. "H[n+1=3,m=1](i(5)->k @ x(2))" or "I[n-1=1,m=1,P@1]".
    std::string describe() const;
};

/// One term of the moment transport equation for a mixed moment.
struct MpcTerm {
    MpcTermKind kind = MpcTermKind::TimeDerivative;
    /// 1-based point the derivative acts on; 0 for the time derivative,
    /// which carries the whole correlation.
    int applied_point = 0;
    MpcCoefficient coefficient = MpcCoefficient::One;
    CorrelationRef correlation;
};

/// Enumerates the terms of the transport equation for the moment of order
/// (n, m): one time derivative; a convective, a pressure-gradient and a
/// viscous term per velocity point a = 1..n; a convective and a thermal
/// diffusion term per temperature point b = n+1..n+m. Exactly 1 + 3n + 2m
/// terms in total.
std::vector<MpcTerm> enumerate_mpc_terms(MomentOrder order);

/// Continuity relation counts for order (n, m): c1 = n (one per velocity
/// slot) and c2 = n(n-1) pressure-bearing relations for n >= 2, else 0.
/// Pure temperature correlations admit none.
struct ContinuityCounts {
    int c1 = 0;
    int c2 = 0;
};

ContinuityCounts count_continuity_relations(MomentOrder order);

/// Parameters of the combined multi-parameter symmetry group acting on
/// moments:
///   t*  = e^{a_st} t
///   x*  = e^{a_sx} x + a_x
///   H*  = e^{n(a_sx - a_st) + m a_theta + a_ss} H + a_h(n,m)
/// All-zero parameters give the identity.
struct SymmetryParams {
    double a_sx = 0.0;    // space scaling
    double a_st = 0.0;    // time scaling
    double a_theta = 0.0; // temperature scaling
    double a_ss = 0.0;    // statistical (intermittency) scaling
    std::array<double, 3> a_x{0.0, 0.0, 0.0}; // space translation
    std::map<MomentOrder, double> a_h;        // moment translations, default 0

    double translation_for(MomentOrder order) const;
    bool is_identity() const;
};

/// Exponent of the value-scaling factor at order (n, m):
/// n(a_sx - a_st) + m a_theta + a_ss.
double symmetry_value_exponent(MomentOrder order, const SymmetryParams& params);

/// Applies the group transformation to an instantaneous-basis profile. Grid
/// points map as x2* = e^{a_sx} x2 + a_x[1]; the transformed domain is
/// recorded in the profile metadata when it changes.
MomentProfile apply_symmetry(const MomentProfile& profile,
                             const SymmetryParams& params);

/// Composition p = p2 after p1 (scale first, then translate). Only valid for
/// translation-free moment maps (a_h empty on both).
SymmetryParams compose(const SymmetryParams& first, const SymmetryParams& second);

/// Infinitesimal generator components at a given state:
///   xi_t = a_st t, xi_x = a_sx x + a_x,
///   eta_H = [n(a_sx - a_st) + m a_theta + a_ss] H + a_h(n,m).
struct Infinitesimals {
    double xi_t = 0.0;
    std::array<double, 3> xi_x{0.0, 0.0, 0.0};
    double eta_h = 0.0;
};

Infinitesimals infinitesimal_generator(MomentOrder order,
                                       const SymmetryParams& params, double t,
                                       const std::array<double, 3>& x,
                                       double h_value);

} // namespace chanmom

#endif // CHANMOM_MPC_HPP
