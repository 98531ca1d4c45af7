#include "bhq/fock_basis.hpp"

#include <cmath>
#include <functional>

#include "bhq/errors.hpp"

namespace bhq {

double count_bounded_compositions(int M, long N, int n_max) {
    if (N < 0) return 0;
    if (N > static_cast<long>(M) * n_max) return 0;
    // sum_j (-1)^j C(M,j) C(N - j(n_max+1) + M - 1, M - 1)
    auto log_choose = [](double n, double k) {
        return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
    };
    double total = 0;
    for (int j = 0;; ++j) {
        const long r = N - static_cast<long>(j) * (n_max + 1);
        if (r < 0 || j > M) break;
        const double term =
            std::exp(log_choose(M, j) + log_choose(r + M - 1.0, M - 1.0));
        total += (j % 2 ? -1.0 : 1.0) * term;
    }
    return std::round(total);
}

FockBasis build_basis(const BoseHubbardParams& p) {
    validate(p);
    if (p.N > static_cast<long>(p.M) * p.n_max)
        throw CapacityError("N exceeds M * n_max");
    FockBasis b;
    b.M = p.M;
    b.n_max = p.n_max;
    b.N = p.N;
    b.bits = 1;
    while ((1 << b.bits) <= p.n_max) ++b.bits;
    if (b.bits * p.M > 64)
        throw CapacityError("packed occupation key exceeds 64 bits; chain too large for ED");

    const double dim_est = count_bounded_compositions(p.M, p.N, p.n_max);
    b.configs.reserve(static_cast<std::size_t>(dim_est) * p.M);

    // Ascending lexicographic enumeration over (n_1 .. n_M).
    std::vector<std::uint8_t> n(p.M, 0);
    const auto emit = [&](const std::vector<std::uint8_t>& cfg) {
        b.configs.insert(b.configs.end(), cfg.begin(), cfg.end());
    };
    const std::function<void(int, long)> rec = [&](int s, long left) {
        if (s == p.M - 1) {
            if (left <= p.n_max) {
                n[s] = static_cast<std::uint8_t>(left);
                emit(n);
            }
            return;
        }
        const long hi = std::min<long>(p.n_max, left);
        const long lo = std::max<long>(0, left - static_cast<long>(p.n_max) * (p.M - 1 - s));
        for (long v = lo; v <= hi; ++v) {
            n[s] = static_cast<std::uint8_t>(v);
            rec(s + 1, left - v);
        }
    };
    rec(0, p.N);

    b.dim = b.configs.size() / p.M;
    b.index.reserve(b.dim * 2);
    for (std::size_t i = 0; i < b.dim; ++i)
        b.index.emplace(b.pack(b.config(i)), static_cast<std::uint32_t>(i));
    return b;
}

}  // namespace bhq
