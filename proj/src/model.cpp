#include "bhq/model.hpp"

#include <cmath>
#include <sstream>

#include "bhq/errors.hpp"
#include "bhq/util.hpp"

namespace bhq {

BoseHubbardParams BoseHubbardParams::canonical(double J, double U, double nbar, int M,
                                               int n_max) {
    BoseHubbardParams p;
    p.J = J;
    p.U = U;
    p.nbar = nbar;
    p.M = M;
    p.n_max = n_max;
    p.N = std::lround(nbar * M);
    return p;
}

const BoseHubbardParams& validate(const BoseHubbardParams& p) {
    if (!(p.J > 0)) throw InvalidParameter("J > 0 violated");
    if (!(p.U >= 0)) throw InvalidParameter("U >= 0 violated");
    if (!(p.n_max >= 1)) throw InvalidParameter("n_max >= 1 violated");
    if (!(p.M >= 2)) throw InvalidParameter("M >= 2 violated");
    if (!(p.nbar >= 0)) throw InvalidParameter("nbar >= 0 violated");
    if (p.N < 0) throw InvalidParameter("N >= 0 violated");
    if (p.N > static_cast<long>(p.M) * p.n_max)
        throw InvalidParameter("N <= M*n_max violated (truncated space cannot hold N)");
    return p;
}

int poisson_cutoff(double nbar, double tail_tol) {
    if (!(nbar > 0)) throw DomainError("poisson_cutoff: nbar must be > 0");
    if (!(tail_tol > 0 && tail_tol < 1)) throw DomainError("poisson_cutoff: tail_tol in (0,1)");
    // Incremental P(n) = P(n-1) * nbar / n avoids factorials.
    double p = std::exp(-nbar);
    double cdf = p;
    int n = 0;
    while (1.0 - cdf > tail_tol) {
        ++n;
        p *= nbar / n;
        cdf += p;
        if (n > 100000) throw ConvergenceError("poisson_cutoff: series did not reach tolerance");
    }
    return n;
}

const QuenchProtocol& validate(const QuenchProtocol& p) {
    if (!(p.T > 0)) throw InvalidParameter("T > 0 violated");
    if (!(p.dt_sample > 0 && p.dt_sample <= p.T))
        throw InvalidParameter("0 < dt_sample <= T violated");
    if (!(p.u1 >= 0)) throw InvalidParameter("u1 >= 0 violated");
    if (is_infinite_interaction(p.u0)) {
        const double r = std::round(p.nbar);
        if (!(p.nbar > 0) || std::abs(p.nbar - r) > 1e-12)
            throw InvalidParameter(
                "u0 = INFINITE requires a positive integer filling (Fock product state)");
    } else if (!(p.u0 > 0)) {
        throw InvalidParameter("u0 > 0 violated");
    }
    if (!p.measure_g1 && !p.measure_g2)
        throw InvalidParameter("at least one observable (G1, G2) must be requested");
    return p;
}

std::pair<int, int> pair_for_distance(int M, int R) {
    if (R < 0 || R >= M) throw DomainError("pair_for_distance: need 0 <= R < M");
    // floor((M - R)/2) keeps the pair within one site of exact center symmetry.
    const int lo = (M - R) / 2;
    return {lo, lo + R};
}

std::string describe(const BoseHubbardParams& p) {
    std::ostringstream ss;
    ss << "J=" << fmt_double(p.J) << " U=" << fmt_double(p.U) << " nbar=" << fmt_double(p.nbar)
       << " M=" << p.M << " N=" << p.N << " n_max=" << p.n_max;
    return ss.str();
}

std::string describe(const QuenchProtocol& p) {
    std::ostringstream ss;
    ss << "u0=" << (is_infinite_interaction(p.u0) ? std::string("inf") : fmt_double(p.u0))
       << " u1=" << fmt_double(p.u1) << " nbar=" << fmt_double(p.nbar)
       << " T=" << fmt_double(p.T) << " dt_sample=" << fmt_double(p.dt_sample)
       << " observables=" << (p.measure_g1 ? "G1" : "") << (p.measure_g1 && p.measure_g2 ? "," : "")
       << (p.measure_g2 ? "G2" : "");
    return ss.str();
}

}  // namespace bhq
