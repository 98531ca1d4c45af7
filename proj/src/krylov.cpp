#include "bhq/krylov.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "bhq/errors.hpp"

namespace bhq {

namespace {

// Lanczos tridiagonalization with full reorthogonalization (two MGS passes).
// Returns the number of vectors built; beta[m] is the residual norm after
// the last vector (happy breakdown when ~0).
struct LanczosSpace {
    std::vector<StateVector> V;
    std::vector<double> alpha;
    std::vector<double> beta;  // beta[j] couples V[j] and V[j+1]
};

void extend_lanczos(const SparseHamiltonian& H, LanczosSpace& L) {
    const std::size_t j = L.V.size() - 1;
    StateVector w = H.apply(L.V[j]);
    const double a = w.dot(L.V[j]).real();
    L.alpha.push_back(a);
    w -= a * L.V[j];
    if (j > 0) w -= L.beta[j - 1] * L.V[j - 1];
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& v : L.V) w -= v.dot(w) * v;
    const double b = w.norm();
    L.beta.push_back(b);
    if (b > 1e-14) L.V.push_back(w / b);
}

Eigen::MatrixXd tridiag(const LanczosSpace& L, int m) {
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        T(i, i) = L.alpha[i];
        if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = L.beta[i];
    }
    return T;
}

}  // namespace

GroundStateResult lanczos_ground_state(const SparseHamiltonian& H, double tol, int max_restarts,
                                       int subspace) {
    if (H.dim == 0) throw InvalidParameter("empty Hamiltonian");
    if (H.dim == 1) {
        GroundStateResult r;
        r.energy = H.val.empty() ? 0.0 : H.val[0];
        r.state = StateVector::Ones(1);
        r.residual = 0;
        return r;
    }
    std::mt19937 rng(12345);
    std::normal_distribution<double> gauss;
    StateVector x(H.dim);
    for (std::size_t i = 0; i < H.dim; ++i) x[i] = gauss(rng);
    x /= x.norm();

    GroundStateResult res;
    for (int restart = 0; restart < max_restarts; ++restart) {
        LanczosSpace L;
        L.V.push_back(x);
        const int m_target = static_cast<int>(std::min<std::size_t>(subspace, H.dim));
        while (static_cast<int>(L.alpha.size()) < m_target &&
               L.V.size() > L.alpha.size())
            extend_lanczos(H, L);
        const int m = static_cast<int>(L.alpha.size());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tridiag(L, m));
        const Eigen::VectorXd y = es.eigenvectors().col(0);
        x = StateVector::Zero(H.dim);
        for (int i = 0; i < m; ++i) x += y[i] * L.V[i];
        x /= x.norm();
        res.energy = es.eigenvalues()(0);
        res.iterations = restart + 1;
        res.residual = (H.apply(x) - res.energy * x).norm();
        if (res.residual < tol) {
            res.state = std::move(x);
            return res;
        }
    }
    throw ConvergenceError("lanczos_ground_state: residual " + std::to_string(res.residual) +
                           " above tolerance after restart cap");
}

StateVector krylov_evolve(const SparseHamiltonian& H, const StateVector& psi, double dt,
                          double tol, int max_subspace) {
    if (dt == 0.0) return psi;
    const double nrm = psi.norm();
    if (nrm == 0.0) throw InvalidParameter("krylov_evolve: zero state");

    LanczosSpace L;
    L.V.push_back(psi / nrm);
    const int cap = static_cast<int>(std::min<std::size_t>(max_subspace, H.dim));
    const std::complex<double> mi(0, -1);
    Eigen::VectorXcd u;
    for (;;) {
        extend_lanczos(H, L);
        const int m = static_cast<int>(L.alpha.size());
        const bool breakdown = L.beta[m - 1] <= 1e-14;
        if (m >= 3 || breakdown || m >= cap) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tridiag(L, m));
            const Eigen::VectorXcd phase =
                (mi * dt * es.eigenvalues().array()).exp().matrix();
            u = es.eigenvectors().cast<std::complex<double>>() *
                phase.cwiseProduct(es.eigenvectors().row(0).transpose().cast<std::complex<double>>());
            // a-posteriori estimate: weight leaking through the last coupling
            const double err = breakdown ? 0.0 : L.beta[m - 1] * std::abs(u[m - 1]);
            if (err < tol || breakdown) {
                StateVector out = StateVector::Zero(H.dim);
                for (int i = 0; i < m; ++i) out += u[i] * L.V[i];
                return nrm * out;
            }
            if (m >= cap) {
                // step too ambitious for the subspace cap: split it
                StateVector half = krylov_evolve(H, psi, dt / 2, tol / 2, max_subspace);
                return krylov_evolve(H, half, dt / 2, tol / 2, max_subspace);
            }
        }
    }
}

}  // namespace bhq
