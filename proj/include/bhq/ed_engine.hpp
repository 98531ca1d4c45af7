#pragma once

#include <map>
#include <optional>
#include <string>

#include "bhq/correlation_map.hpp"
#include "bhq/krylov.hpp"
#include "bhq/model.hpp"
#include "bhq/sparse_hamiltonian.hpp"

namespace bhq {

// One spatial slice of the connected correlators at the symmetric site pairs,
// without the t = 0 subtraction.
struct CorrelationSlice {
    std::vector<std::complex<double>> g1;  // <a^dag_{i+R} a_i>
    std::vector<double> g2;                // <n_{i+R} n_i> - <n_{i+R}><n_i>
};

CorrelationSlice measure_correlations(const FockBasis& basis, const StateVector& psi,
                                      bool want_g1, bool want_g2);

struct QuenchRunResult {
    std::optional<CorrelationMap> g1;
    std::optional<CorrelationMap> g2;
    // Engine diagnostics, also copied into the map metadata.
    double number_drift = 0;       // max_t |sum <n_i> - N|
    double energy_drift_abs = 0;   // max_t |<H1> - <H1>(0)|
    double energy_drift_rel = 0;   // relative to max(|<H1>(0)|, J*M)
    double wall_seconds = 0;
    std::map<std::string, std::string> info;
};

// Hard guard applied before any allocation.
inline constexpr double kEdDimensionCap = 5e5;

// Sudden quench on the truncated chain: initial state from the pre-quench
// coupling (exact Fock product state when u0 is INFINITE, otherwise the
// Lanczos ground state), Krylov time evolution under H(u1), observables
// sampled every dt_sample. params.U is ignored; couplings come from the
// protocol with the energy scale params.J.
QuenchRunResult run_quench_ed(const QuenchProtocol& protocol, const BoseHubbardParams& params,
                              double dim_cap = kEdDimensionCap);

}  // namespace bhq
