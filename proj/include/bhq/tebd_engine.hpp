#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bhq/ed_engine.hpp"
#include "bhq/model.hpp"
#include "bhq/mps.hpp"

namespace bhq {

// Second-order splitting into alternating even/odd bond layers:
// exp(-i H dt) ~ even(dt/2) odd(dt) even(dt/2), local error O(dt^3).
struct TrotterPlan {
    double dt = 0.01;
    bool imaginary = false;
    int order = 2;
    std::vector<Eigen::MatrixXcd> even_half;  // per even bond, step dt/2
    std::vector<Eigen::MatrixXcd> odd_full;   // per odd bond, step dt
};

TrotterPlan make_trotter_plan(const BoseHubbardParams& p, double dt, bool imaginary);

// One full second-order step under the plan. Returns the largest per-bond
// discarded weight of the step.
double trotter_step(MPSState& psi, const TrotterPlan& plan, const TruncationPolicy& pol);

// Exact bond-dimension-1 Fock product state at integer filling.
MPSState product_state(const BoseHubbardParams& p);

struct ImaginaryTimeOptions {
    std::vector<double> dtau_schedule{0.1, 0.01, 0.001};
    double energy_tol = 1e-8;  // |dE| between sweeps to advance the schedule
    int sweep_cap = 4000;      // per schedule stage
    int chi = 64;
};

// Ground state by imaginary-time evolution from a balanced product pattern,
// renormalizing after every step. The returned energy is the MPS expectation
// value, not the evolution log. Throws ConvergenceError on a stalled stage.
struct ImaginaryTimeResult {
    MPSState state;
    double energy = 0;
    int sweeps = 0;
};
ImaginaryTimeResult imaginary_time_ground_state(const BoseHubbardParams& p, double u0,
                                                const ImaginaryTimeOptions& opts = {});

struct TebdOptions {
    int chi = 64;
    double dt = 0.01;
    double svd_rel_cutoff = 1e-10;
    double discard_fail = 1e-4;
    ImaginaryTimeOptions ground_state;
};

// Real-time quench evolution mirroring run_quench_ed: product state or
// imaginary-time ground state, Trotterized evolution under H(u1), the same
// observables, sampling grid, and map/metadata conventions.
QuenchRunResult run_quench_tebd(const QuenchProtocol& protocol,
                                const BoseHubbardParams& params, const TebdOptions& opts = {});

struct ConvergenceVerdict {
    bool pass = false;
    double diff_chi = 0;  // max-abs map difference chi vs 2*chi
    double diff_dt = 0;   // max-abs map difference dt vs dt/2
    double threshold = 1e-3;
    QuenchRunResult base, double_chi, half_dt;
    std::string record;  // structured text form
};

// Reruns the quench at (2*chi, dt) and (chi, dt/2); PASS iff both map
// differences stay below the threshold for every requested observable.
ConvergenceVerdict convergence_check(const QuenchProtocol& protocol,
                                     const BoseHubbardParams& params,
                                     const TebdOptions& opts = {}, double threshold = 1e-3);

}  // namespace bhq
