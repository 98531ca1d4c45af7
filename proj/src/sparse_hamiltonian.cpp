#include "bhq/sparse_hamiltonian.hpp"

#include <algorithm>
#include <cmath>

#include "bhq/errors.hpp"

namespace bhq {

void SparseHamiltonian::apply(const StateVector& x, StateVector& y) const {
    y.resize(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        std::complex<double> acc = 0;
        for (std::size_t q = row_ptr[r]; q < row_ptr[r + 1]; ++q) acc += val[q] * x[col[q]];
        y[r] = acc;
    }
}

StateVector SparseHamiltonian::apply(const StateVector& x) const {
    StateVector y;
    apply(x, y);
    return y;
}

double SparseHamiltonian::expectation(const StateVector& x) const {
    return x.dot(apply(x)).real();
}

SparseHamiltonian build_hamiltonian(const FockBasis& basis, const BoseHubbardParams& p) {
    SparseHamiltonian H;
    H.dim = basis.dim;
    H.row_ptr.assign(basis.dim + 1, 0);
    std::vector<std::pair<std::uint32_t, double>> row;
    std::vector<std::uint8_t> target(basis.M);
    H.col.reserve(basis.dim * (2 * basis.M));
    H.val.reserve(basis.dim * (2 * basis.M));
    for (std::size_t r = 0; r < basis.dim; ++r) {
        const std::uint8_t* n = basis.config(r);
        row.clear();
        double diag = 0;
        for (int s = 0; s < basis.M; ++s) diag += 0.5 * p.U * n[s] * (n[s] - 1.0);
        if (diag != 0) row.emplace_back(static_cast<std::uint32_t>(r), diag);
        for (int s = 0; s + 1 < basis.M; ++s) {
            // a^dag_{s+1} a_s
            if (n[s] >= 1 && n[s + 1] < basis.n_max) {
                std::copy(n, n + basis.M, target.begin());
                --target[s];
                ++target[s + 1];
                const std::size_t c = basis.find(target.data());
                if (c < basis.dim)
                    row.emplace_back(static_cast<std::uint32_t>(c),
                                     -p.J * std::sqrt(n[s] * (n[s + 1] + 1.0)));
            }
            // a^dag_s a_{s+1}
            if (n[s + 1] >= 1 && n[s] < basis.n_max) {
                std::copy(n, n + basis.M, target.begin());
                ++target[s];
                --target[s + 1];
                const std::size_t c = basis.find(target.data());
                if (c < basis.dim)
                    row.emplace_back(static_cast<std::uint32_t>(c),
                                     -p.J * std::sqrt(n[s + 1] * (n[s] + 1.0)));
            }
        }
        std::sort(row.begin(), row.end());
        for (const auto& [c, v] : row) {
            H.col.push_back(c);
            H.val.push_back(v);
        }
        H.row_ptr[r + 1] = H.col.size();
    }
    return H;
}

Eigen::VectorXd site_densities(const FockBasis& basis, const StateVector& psi) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(basis.M);
    for (std::size_t r = 0; r < basis.dim; ++r) {
        const double w = std::norm(psi[r]);
        if (w == 0) continue;
        const std::uint8_t* n = basis.config(r);
        for (int s = 0; s < basis.M; ++s) out[s] += w * n[s];
    }
    return out;
}

double density_correlation(const FockBasis& basis, const StateVector& psi, int i, int j) {
    double acc = 0;
    for (std::size_t r = 0; r < basis.dim; ++r) {
        const double w = std::norm(psi[r]);
        if (w == 0) continue;
        const std::uint8_t* n = basis.config(r);
        acc += w * n[i] * n[j];
    }
    return acc;
}

std::complex<double> hopping_correlation(const FockBasis& basis, const StateVector& psi, int i,
                                         int j) {
    if (i == j) {
        double acc = 0;
        for (std::size_t r = 0; r < basis.dim; ++r)
            acc += std::norm(psi[r]) * basis.config(r)[i];
        return acc;
    }
    std::complex<double> acc = 0;
    std::vector<std::uint8_t> target(basis.M);
    for (std::size_t r = 0; r < basis.dim; ++r) {
        const std::uint8_t* n = basis.config(r);
        if (n[j] < 1 || n[i] >= basis.n_max) continue;
        std::copy(n, n + basis.M, target.begin());
        --target[j];
        ++target[i];
        const std::size_t c = basis.find(target.data());
        if (c >= basis.dim) continue;
        acc += std::conj(psi[c]) * psi[r] * std::sqrt(n[j] * (n[i] + 1.0));
    }
    return acc;
}

}  // namespace bhq
