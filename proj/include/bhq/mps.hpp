#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "bhq/model.hpp"

namespace bhq {

struct SvdResult {
    Eigen::MatrixXcd U;
    Eigen::VectorXd S;
    Eigen::MatrixXcd Vh;
};

// Compact SVD via LAPACK (divide-and-conquer, QR fallback).
SvdResult svd_compact(const Eigen::MatrixXcd& A);

struct TruncationPolicy {
    int chi_max = 64;
    double rel_cutoff = 1e-10;  // drop singular values below rel_cutoff * s_max
    double hard_fail = 1e-4;    // per-bond discarded weight triggering TruncationOverflow
    bool enforce_fail = false;  // real-time evolution turns this on
};

// Open-boundary matrix-product state in mixed-canonical form: tensors left of
// the orthogonality center are left isometries, tensors right of it are right
// isometries. Site tensors are stored as d matrices (chi_l x chi_r) per
// physical occupation.
struct MPSState {
    int M = 0;
    int d = 0;  // n_max + 1
    int center = 0;
    std::vector<std::vector<Eigen::MatrixXcd>> A;  // A[site][n]
    double discarded_total = 0;
    double discarded_max_bond = 0;

    int chi_left(int site) const { return static_cast<int>(A[site][0].rows()); }
    int chi_right(int site) const { return static_cast<int>(A[site][0].cols()); }
    int max_bond() const;

    double norm() const;  // Frobenius norm of the center tensor
    void normalize();

    // Canonical moves by QR/LQ; no truncation.
    void move_center_to(int site);

    // Contract the two-site block at (bond, bond+1), apply the d^2 x d^2 gate,
    // split by SVD under the policy, renormalize the kept weights, and leave
    // the center at bond+1. Returns the discarded weight of this bond.
    double apply_two_site_gate(int bond, const Eigen::MatrixXcd& gate,
                               const TruncationPolicy& pol);

    // Largest deviation from the isometry conditions on the claimed side of
    // the center (machine-level for a healthy state).
    double canonical_defect() const;

    std::complex<double> site_density(int i);             // <n_i>
    double density_correlation(int i, int j);             // <n_i n_j>
    std::complex<double> hopping_correlation(int i, int j);  // <a^dag_i a_j>, i <= j

    // Dense amplitude vector in the occupation basis (n_1 slowest); small M only.
    Eigen::VectorXcd to_statevector() const;
};

// Bond-dimension-1 product state with the given per-site occupations.
MPSState product_mps(int M, int n_max, const std::vector<int>& occupations);

// Two-site bond Hamiltonian of the chain (hopping plus interaction shared
// between bonds; boundary sites carry full interaction weight).
Eigen::MatrixXcd bond_hamiltonian(const BoseHubbardParams& p, int bond);

// <H> from bond expectation values around the center.
double mps_energy(MPSState& psi, const BoseHubbardParams& p);

}  // namespace bhq
