#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "bhq/fock_basis.hpp"

namespace bhq {

using StateVector = Eigen::VectorXcd;

// Row-compressed real-symmetric Bose-Hubbard Hamiltonian in a FockBasis.
// Diagonal (U/2) sum n(n-1); off-diagonals -J sqrt((n_s+1) n_{s+1}) from
// nearest-neighbor hopping with open boundaries.
struct SparseHamiltonian {
    std::size_t dim = 0;
    std::vector<std::size_t> row_ptr;
    std::vector<std::uint32_t> col;
    std::vector<double> val;

    void apply(const StateVector& x, StateVector& y) const;
    StateVector apply(const StateVector& x) const;
    double expectation(const StateVector& x) const;  // real for Hermitian H
};

SparseHamiltonian build_hamiltonian(const FockBasis& basis, const BoseHubbardParams& p);

// Observable expectations over a normalized state in the same basis.
Eigen::VectorXd site_densities(const FockBasis& basis, const StateVector& psi);
double density_correlation(const FockBasis& basis, const StateVector& psi, int i, int j);
std::complex<double> hopping_correlation(const FockBasis& basis, const StateVector& psi, int i,
                                         int j);  // <a^dag_i a_j>

}  // namespace bhq
