#pragma once

#include <limits>
#include <string>
#include <utility>

namespace bhq {

// Unit conventions used throughout: hbar = 1, lattice spacing a = 1, energies
// in units of J, times in hbar/J, velocities in J*a/hbar.

// Physical parameterization of the one-dimensional Bose-Hubbard chain with a
// truncated local Hilbert space. Immutable after construction.
struct BoseHubbardParams {
    double J = 1.0;     // hopping energy (sets the energy unit)
    double U = 0.0;     // on-site interaction, units of J
    double nbar = 0.0;  // mean filling, particles per site
    int M = 2;          // lattice sites
    long N = 0;         // total particle number
    int n_max = 1;      // local occupation cutoff

    // Canonical construction: N = round(nbar * M).
    static BoseHubbardParams canonical(double J, double U, double nbar, int M, int n_max);
};

// Returns params unchanged if all invariants hold, otherwise throws
// InvalidParameter naming the violated invariant.
const BoseHubbardParams& validate(const BoseHubbardParams& p);

// Smallest n with Poisson tail 1 - sum_{m<=n} P(m) <= tail_tol at mean nbar.
int poisson_cutoff(double nbar, double tail_tol);

// Distinguished pre-quench value denoting the unit-density Fock product state.
inline constexpr double kInfiniteInteraction = std::numeric_limits<double>::infinity();

inline bool is_infinite_interaction(double u) { return u == kInfiniteInteraction; }

// Sudden global quench (U/J)_0 -> U/J at fixed filling.
struct QuenchProtocol {
    double u0 = 1.0;         // pre-quench U/J, may be kInfiniteInteraction
    double u1 = 1.0;         // post-quench U/J
    double nbar = 1.0;       // filling
    double T = 1.0;          // evolution horizon, hbar/J
    double dt_sample = 0.1;  // observable sampling interval
    bool measure_g1 = true;
    bool measure_g2 = true;
};

const QuenchProtocol& validate(const QuenchProtocol& p);

// Measurement site pair (i, j) with j - i = R, placed symmetrically about the
// chain center. Open boundaries; both engines use the same policy.
std::pair<int, int> pair_for_distance(int M, int R);

std::string describe(const BoseHubbardParams& p);
std::string describe(const QuenchProtocol& p);

}  // namespace bhq
