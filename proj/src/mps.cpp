#include "bhq/mps.hpp"

#include <cmath>

#define LAPACK_COMPLEX_CPP
#include <complex>
#include <lapacke.h>

#include "bhq/errors.hpp"

namespace bhq {

SvdResult svd_compact(const Eigen::MatrixXcd& A) {
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    const int k = std::min(m, n);
    SvdResult out;
    out.U.resize(m, k);
    out.S.resize(k);
    out.Vh.resize(k, n);
    Eigen::MatrixXcd work = A;  // gesdd destroys its input
    int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', m, n,
                              reinterpret_cast<lapack_complex_double*>(work.data()), m,
                              out.S.data(),
                              reinterpret_cast<lapack_complex_double*>(out.U.data()), m,
                              reinterpret_cast<lapack_complex_double*>(out.Vh.data()), k);
    if (info != 0) {
        work = A;
        std::vector<double> superb(std::max(1, k - 1));
        info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'S', 'S', m, n,
                              reinterpret_cast<lapack_complex_double*>(work.data()), m,
                              out.S.data(),
                              reinterpret_cast<lapack_complex_double*>(out.U.data()), m,
                              reinterpret_cast<lapack_complex_double*>(out.Vh.data()), k,
                              superb.data());
    }
    if (info != 0) throw ConvergenceError("SVD failed (info=" + std::to_string(info) + ")");
    return out;
}

int MPSState::max_bond() const {
    int mx = 1;
    for (int s = 0; s < M; ++s) mx = std::max(mx, chi_right(s));
    return mx;
}

double MPSState::norm() const {
    double acc = 0;
    for (const auto& mat : A[center]) acc += mat.squaredNorm();
    return std::sqrt(acc);
}

void MPSState::normalize() {
    const double nrm = norm();
    if (nrm == 0) throw InvalidParameter("MPS with zero norm");
    for (auto& mat : A[center]) mat /= nrm;
}

namespace {

// Stack the d blocks vertically: (d*chi_l) x chi_r, block n at rows [n*chi_l, ..).
Eigen::MatrixXcd stack_v(const std::vector<Eigen::MatrixXcd>& T) {
    const int d = static_cast<int>(T.size());
    const int rl = static_cast<int>(T[0].rows()), rc = static_cast<int>(T[0].cols());
    Eigen::MatrixXcd out(d * rl, rc);
    for (int n = 0; n < d; ++n) out.middleRows(n * rl, rl) = T[n];
    return out;
}

// Concatenate the d blocks horizontally: chi_l x (d*chi_r).
Eigen::MatrixXcd stack_h(const std::vector<Eigen::MatrixXcd>& T) {
    const int d = static_cast<int>(T.size());
    const int rl = static_cast<int>(T[0].rows()), rc = static_cast<int>(T[0].cols());
    Eigen::MatrixXcd out(rl, d * rc);
    for (int n = 0; n < d; ++n) out.middleCols(n * rc, rc) = T[n];
    return out;
}

}  // namespace

void MPSState::move_center_to(int site) {
    while (center < site) {
        const int c = center;
        const int rl = chi_left(c), rc = chi_right(c);
        Eigen::MatrixXcd Cm = stack_v(A[c]);
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Cm);
        const int r = std::min<int>(Cm.rows(), Cm.cols());
        Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(Cm.rows(), r);
        Eigen::MatrixXcd R =
            qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
        for (int n = 0; n < d; ++n) A[c][n] = Q.middleRows(n * rl, rl);
        for (int n = 0; n < d; ++n) A[c + 1][n] = R * A[c + 1][n];
        (void)rc;
        ++center;
    }
    while (center > site) {
        const int c = center;
        const int rc = chi_right(c);
        Eigen::MatrixXcd Cm = stack_h(A[c]);  // chi_l x (d chi_r)
        // LQ via QR of the adjoint: Cm = L Qh with Qh row-isometric
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Cm.adjoint());
        const int r = std::min<int>(Cm.rows(), Cm.cols());
        Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(Cm.cols(), r);
        Eigen::MatrixXcd Rt =
            qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
        Eigen::MatrixXcd L = Rt.adjoint();       // chi_l x r
        Eigen::MatrixXcd Qh = Q.adjoint();       // r x (d chi_r)
        for (int n = 0; n < d; ++n) A[c][n] = Qh.middleCols(n * rc, rc);
        for (int n = 0; n < d; ++n) A[c - 1][n] = A[c - 1][n] * L;
        --center;
    }
}

double MPSState::apply_two_site_gate(int bond, const Eigen::MatrixXcd& gate,
                                     const TruncationPolicy& pol) {
    if (bond < 0 || bond + 1 >= M) throw InvalidParameter("bond out of range");
    move_center_to(bond);
    const int rl = chi_left(bond);
    const int rm = chi_right(bond);
    const int rr = chi_right(bond + 1);
    (void)rm;

    // theta[(n1 n2)] as a (d*d) x (chi_l*chi_r) matrix for the gate product
    Eigen::MatrixXcd theta(d * d, rl * rr);
    for (int n1 = 0; n1 < d; ++n1) {
        for (int n2 = 0; n2 < d; ++n2) {
            const Eigen::MatrixXcd blk = A[bond][n1] * A[bond + 1][n2];  // rl x rr
            theta.row(n1 * d + n2) =
                Eigen::Map<const Eigen::VectorXcd>(blk.data(), rl * rr).transpose();
        }
    }
    theta = gate * theta;

    // regroup to (chi_l*d) x (d*chi_r) for the bond split
    Eigen::MatrixXcd m(rl * d, d * rr);
    for (int n1 = 0; n1 < d; ++n1)
        for (int n2 = 0; n2 < d; ++n2) {
            Eigen::Map<const Eigen::MatrixXcd> blk(theta.row(n1 * d + n2).data(), rl, rr);
            m.block(n1 * rl, n2 * rr, rl, rr) = blk;
        }

    auto svd = svd_compact(m);
    const double total_w = svd.S.squaredNorm();
    int keep = 0;
    const double cut = pol.rel_cutoff * (svd.S.size() ? svd.S[0] : 0.0);
    for (int i = 0; i < svd.S.size(); ++i)
        if (svd.S[i] > cut && keep < pol.chi_max) ++keep;
    keep = std::max(keep, 1);
    double kept_w = 0;
    for (int i = 0; i < keep; ++i) kept_w += svd.S[i] * svd.S[i];
    const double discard = total_w > 0 ? 1.0 - kept_w / total_w : 0.0;
    discarded_total += discard;
    discarded_max_bond = std::max(discarded_max_bond, discard);
    if (pol.enforce_fail && discard > pol.hard_fail)
        throw TruncationOverflow("bond " + std::to_string(bond) + " discarded weight " +
                                 std::to_string(discard) + " exceeds " +
                                 std::to_string(pol.hard_fail));

    const double renorm = std::sqrt(kept_w);
    Eigen::VectorXd S = svd.S.head(keep) / renorm;
    for (int n1 = 0; n1 < d; ++n1) A[bond][n1] = svd.U.block(n1 * rl, 0, rl, keep);
    for (int n2 = 0; n2 < d; ++n2)
        A[bond + 1][n2] = S.asDiagonal() * svd.Vh.block(0, n2 * rr, keep, rr);
    center = bond + 1;
    return discard;
}

double MPSState::canonical_defect() const {
    double worst = 0;
    for (int s = 0; s < M; ++s) {
        if (s == center) continue;
        if (s < center) {
            Eigen::MatrixXcd acc =
                Eigen::MatrixXcd::Zero(chi_right(s), chi_right(s));
            for (int n = 0; n < d; ++n) acc += A[s][n].adjoint() * A[s][n];
            worst = std::max(worst, (acc - Eigen::MatrixXcd::Identity(acc.rows(), acc.cols()))
                                        .cwiseAbs()
                                        .maxCoeff());
        } else {
            Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(chi_left(s), chi_left(s));
            for (int n = 0; n < d; ++n) acc += A[s][n] * A[s][n].adjoint();
            worst = std::max(worst, (acc - Eigen::MatrixXcd::Identity(acc.rows(), acc.cols()))
                                        .cwiseAbs()
                                        .maxCoeff());
        }
    }
    return worst;
}

std::complex<double> MPSState::site_density(int i) {
    move_center_to(i);
    std::complex<double> acc = 0;
    for (int n = 1; n < d; ++n)
        acc += static_cast<double>(n) * (A[i][n].conjugate().cwiseProduct(A[i][n])).sum();
    return acc;
}

namespace {

Eigen::MatrixXcd transfer_through(const std::vector<Eigen::MatrixXcd>& B,
                                  const Eigen::MatrixXcd& F) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(B[0].cols(), B[0].cols());
    for (const auto& mat : B) out += mat.adjoint() * F * mat;
    return out;
}

}  // namespace

double MPSState::density_correlation(int i, int j) {
    if (i == j) {
        move_center_to(i);
        double acc = 0;
        for (int n = 1; n < d; ++n)
            acc += static_cast<double>(n) * static_cast<double>(n) * A[i][n].squaredNorm();
        return acc;
    }
    if (i > j) std::swap(i, j);
    move_center_to(i);
    Eigen::MatrixXcd F = Eigen::MatrixXcd::Zero(chi_right(i), chi_right(i));
    for (int n = 1; n < d; ++n) F += static_cast<double>(n) * A[i][n].adjoint() * A[i][n];
    for (int s = i + 1; s < j; ++s) F = transfer_through(A[s], F);
    std::complex<double> acc = 0;
    for (int n = 1; n < d; ++n)
        acc += static_cast<double>(n) * (A[j][n].adjoint() * F * A[j][n]).trace();
    return acc.real();
}

std::complex<double> MPSState::hopping_correlation(int i, int j) {
    if (i == j) return site_density(i);
    const bool swapped = i > j;
    if (swapped) std::swap(i, j);
    move_center_to(i);
    // creation at i, annihilation at j: F = sum_n sqrt(n+1) A^{n+1}^dag A^n
    Eigen::MatrixXcd F = Eigen::MatrixXcd::Zero(chi_right(i), chi_right(i));
    for (int n = 0; n + 1 < d; ++n)
        F += std::sqrt(n + 1.0) * A[i][n + 1].adjoint() * A[i][n];
    for (int s = i + 1; s < j; ++s) F = transfer_through(A[s], F);
    std::complex<double> acc = 0;
    for (int n = 1; n < d; ++n)
        acc += std::sqrt(static_cast<double>(n)) * (A[j][n - 1].adjoint() * F * A[j][n]).trace();
    return swapped ? std::conj(acc) : acc;
}

Eigen::VectorXcd MPSState::to_statevector() const {
    long dim = 1;
    for (int s = 0; s < M; ++s) dim *= d;
    if (dim > (1 << 22)) throw CapacityError("statevector contraction too large");
    Eigen::MatrixXcd amps = Eigen::MatrixXcd::Ones(1, 1);
    for (int s = 0; s < M; ++s) {
        const long rows = amps.rows();
        Eigen::MatrixXcd next(rows * d, A[s][0].cols());
        for (long c = 0; c < rows; ++c)
            for (int n = 0; n < d; ++n) next.row(c * d + n) = amps.row(c) * A[s][n];
        amps = std::move(next);
    }
    return amps.col(0);
}

MPSState product_mps(int M, int n_max, const std::vector<int>& occupations) {
    if (static_cast<int>(occupations.size()) != M)
        throw InvalidParameter("occupation pattern length != M");
    MPSState psi;
    psi.M = M;
    psi.d = n_max + 1;
    psi.center = 0;
    psi.A.resize(M);
    for (int s = 0; s < M; ++s) {
        if (occupations[s] < 0 || occupations[s] > n_max)
            throw InvalidParameter("occupation outside [0, n_max]");
        psi.A[s].assign(psi.d, Eigen::MatrixXcd::Zero(1, 1));
        psi.A[s][occupations[s]](0, 0) = 1.0;
    }
    return psi;
}

Eigen::MatrixXcd bond_hamiltonian(const BoseHubbardParams& p, int bond) {
    const int d = p.n_max + 1;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d * d, d * d);
    const double wl = bond == 0 ? 1.0 : 0.5;
    const double wr = bond + 1 == p.M - 1 ? 1.0 : 0.5;
    auto idx = [d](int n1, int n2) { return n1 * d + n2; };
    for (int n1 = 0; n1 < d; ++n1)
        for (int n2 = 0; n2 < d; ++n2) {
            h(idx(n1, n2), idx(n1, n2)) +=
                0.5 * p.U * (wl * n1 * (n1 - 1.0) + wr * n2 * (n2 - 1.0));
            // -J a^dag_l a_r : (n1+1, n2-1) <- (n1, n2)
            if (n1 + 1 < d && n2 >= 1)
                h(idx(n1 + 1, n2 - 1), idx(n1, n2)) += -p.J * std::sqrt((n1 + 1.0) * n2);
            // -J a_l a^dag_r
            if (n1 >= 1 && n2 + 1 < d)
                h(idx(n1 - 1, n2 + 1), idx(n1, n2)) += -p.J * std::sqrt(n1 * (n2 + 1.0));
        }
    return h;
}

double mps_energy(MPSState& psi, const BoseHubbardParams& p) {
    double energy = 0;
    for (int b = 0; b + 1 < psi.M; ++b) {
        psi.move_center_to(b);
        const Eigen::MatrixXcd h = bond_hamiltonian(p, b);
        const int d = psi.d;
        std::vector<Eigen::MatrixXcd> theta(d * d);
        for (int n1 = 0; n1 < d; ++n1)
            for (int n2 = 0; n2 < d; ++n2)
                theta[n1 * d + n2] = psi.A[b][n1] * psi.A[b + 1][n2];
        std::complex<double> acc = 0;
        for (int r = 0; r < d * d; ++r)
            for (int c = 0; c < d * d; ++c) {
                if (h(r, c) == 0.0) continue;
                acc += h(r, c) * (theta[r].conjugate().cwiseProduct(theta[c])).sum();
            }
        energy += acc.real();
    }
    return energy;
}

}  // namespace bhq
