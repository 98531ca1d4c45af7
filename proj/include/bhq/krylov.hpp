#pragma once

#include "bhq/sparse_hamiltonian.hpp"

namespace bhq {

struct GroundStateResult {
    double energy = 0;
    StateVector state;
    double residual = 0;
    int iterations = 0;
};

// Lowest eigenpair by restarted Lanczos with full reorthogonalization.
// Deterministic (fixed-seed start vector). Throws ConvergenceError if the
// residual does not reach tol within the restart cap.
GroundStateResult lanczos_ground_state(const SparseHamiltonian& H, double tol = 1e-10,
                                       int max_restarts = 400, int subspace = 60);

// One step of e^{-i H dt} psi by Lanczos subspace exponentiation with full
// reorthogonalization. The subspace grows until the a-posteriori error
// estimate drops below tol; oversized steps are split recursively. Unitarity
// is inherited from the Hermitian projection, not enforced.
StateVector krylov_evolve(const SparseHamiltonian& H, const StateVector& psi, double dt,
                          double tol = 1e-11, int max_subspace = 90);

}  // namespace bhq
