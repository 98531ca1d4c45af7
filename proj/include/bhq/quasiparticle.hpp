#pragma once

#include <complex>
#include <string>

#include "bhq/correlation_map.hpp"
#include "bhq/dispersion.hpp"
#include "bhq/model.hpp"

namespace bhq {

// Strong-coupling G2 building blocks at unit-type filling: direct quadrature
// of the oscillatory pair integrals and their stationary-phase asymptotics.
// Overall constants are fixed to 1; only the space-time structure carries
// physics, and the analysis pipeline is normalization-invariant.

// Pair-energy branch used under the integrals / phase functions.
enum class PairBranch {
    Full,      // doublon-holon pair energy, gap included
    Effective  // gap-factorized cosine band -2(2nbar+1) J cos k
};

// Bare zone integral I(R,t) = int_{-pi}^{pi} dk/2pi
//   [ e^{i(W_k t + kR)} + e^{i(W_k t - kR)} ],  W_k the selected pair energy.
// Uniform trapezoid on N_k points; spectrally accurate for the periodic
// integrand. Exposed separately because the R = 0 prefactor of g2 vanishes.
std::complex<double> pair_phase_integral(const BoseHubbardParams& p, PairBranch branch, int R,
                                         double t, int N_k);

// g2(R,t) = (J/U)(R/t) * pair_phase_integral. Requires t > 0.
std::complex<double> g2_integral(const BoseHubbardParams& p, int R, double t, int N_k,
                                 PairBranch branch = PairBranch::Full);

// g2bar(R,t) = (J/U)^2 int dk/2pi sin^2 k [e^{i(W t - kR)} + e^{-i(W t + kR)}]
// on the full pair energy; real by the k -> -k fold.
double g2bar_integral(const BoseHubbardParams& p, int R, double t, int N_k);

// Root of the stationary-phase equation d(W)/dk = R/t on the rising branch
// (0, k_max_vel), bisected to 1e-10. Throws NoStationaryPoint outside the
// cone, SingularCurvature when the pair curvature at the root is ~0.
double stationary_point(const Dispersion& pair_disp, double R, double t);

// Single-saddle stationary-phase amplitude of g2 on the effective branch:
// (J/U) Vg~(k_sp) / sqrt(|d2W(k_sp)| t) * e^{i(W t - k_sp R + sigma pi/4)}.
std::complex<double> stationary_phase_g2(const BoseHubbardParams& p, double R, double t);

// Stationary-phase amplitude of g2bar on the full pair energy:
// (J/U)^2 sin^2(k_sp) / sqrt(|d2W| t) * cos(W t - k_sp R + sigma' pi/4).
double stationary_phase_g2bar(const BoseHubbardParams& p, double R, double t);

enum class MapVariant {
    G2Full,                     // -2 (|g2|^2 + |g2bar|^2), quadrature
    G2Leading,                  // -2 |g2|^2
    G2LeadingRe2,               // -2 Re[g2]^2
    G2Subleading,               // -2 g2bar^2
    StationaryPhaseLeading,     // -2 |spa g2|^2, interior of the cone only
    StationaryPhaseLeadingRe2,  // -2 Re[spa g2]^2
    StationaryPhaseSubleading   // -2 (spa g2bar)^2
};

MapVariant map_variant_from_string(const std::string& s);
std::string to_string(MapVariant v);

struct AnalyticMapSpec {
    BoseHubbardParams params;
    int R_max = 20;
    double t_max = 6.0;
    double dt = 0.05;
    int N_k = 4096;
    MapVariant variant = MapVariant::G2Full;
    // Branch used by the quadrature variants; stationary-phase variants pin
    // their own branch (leading: effective, subleading: full).
    PairBranch branch = PairBranch::Full;
};

// Fills the (R, t) grid with the chosen variant. Stationary-phase variants
// fill only the cone interior and zero outside; per-point failures become
// NaN markers instead of aborting the map. Deterministic under the
// data-parallel fill.
CorrelationMap predict_map(const AnalyticMapSpec& spec);

}  // namespace bhq
