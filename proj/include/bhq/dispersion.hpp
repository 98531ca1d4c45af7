#pragma once

#include <string>

#include "bhq/model.hpp"

namespace bhq {

// Excitation branches of the chain. Single-particle kinds evaluate E_k; the
// pair kinds evaluate the doublon-holon pair energy 2E_k directly, so every
// downstream prediction (correlation-edge and extrema velocities) reads off
// the pair energy without factor-of-two bookkeeping.
enum class DispersionKind {
    Free,                    // eps_k = 4 J sin^2(k/2)
    Bogoliubov,              // sqrt(eps_k (eps_k + 2 nbar U))
    DoublonHolonPair,        // sqrt([U - 2J(2nbar+1)cos k]^2 + 16 J^2 nbar(nbar+1) sin^2 k)
    EffectiveStrongCoupling  // -2 (2nbar+1) J cos k  (gap-factorized pair energy)
};

DispersionKind dispersion_kind_from_string(const std::string& s);
std::string to_string(DispersionKind k);
bool is_pair_kind(DispersionKind k);

struct Dispersion {
    DispersionKind kind = DispersionKind::Free;
    BoseHubbardParams params;

    // Energy of the evaluated branch at quasimomentum k in [-pi, pi].
    double energy(double k) const;
    // Analytic d(energy)/dk on (-pi, pi); 0 at the zone center by oddness.
    double group_velocity(double k) const;
    // Analytic d2(energy)/dk2; used by the stationary-phase machinery.
    double curvature(double k) const;
};

// Characteristic velocities of a branch. For pair kinds V_g_star and
// V_phi_star refer to the single-quasiparticle convention (half the pair
// values), so that the doubled predictions below match the pair-energy
// phase functions 2E_k t -/+ k R.
struct VelocitySet {
    double k_star = 0;      // argmax of the group velocity on (0, pi]
    double V_g_star = 0;    // max group velocity
    double V_phi_star = 0;  // phase velocity at k_star
    double V_ce_pred = 0;   // = 2 V_g_star, correlation-edge velocity
    double V_m_pred = 0;    // = 2 V_phi_star, extrema velocity
};

// Dense grid scan (>= 4096 points) plus golden-section refinement of k_star
// to |dk| < 1e-8.
VelocitySet velocity_set(const Dispersion& d);

// Weak-coupling sound velocity (2 J nbar) sqrt(gamma) (1 - sqrt(gamma)/4pi).
double sound_velocity_weak(double gamma, double nbar, double J = 1.0);

// Strong-coupling doubled sound velocity
// (4 J) sin(pi nbar) [1 - (8 J / U) cos(pi nbar)]; returns 2 V_s.
double sound_velocity_strong2(double u_over_j, double nbar, double J = 1.0);

struct LiebLinigerParams {
    double gamma = 0;  // U / (2 J nbar)
    double c = 0;      // contact interaction strength
    double rho = 0;    // linear density
    double m = 0;      // effective mass
    double a = 1;      // lattice spacing
};

// Continuum mapping with hbar = a = 1: J = 1/(2m), U = c/m, rho = nbar.
LiebLinigerParams lieb_liniger_map(const BoseHubbardParams& p);

}  // namespace bhq
