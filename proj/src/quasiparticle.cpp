#include "bhq/quasiparticle.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "bhq/errors.hpp"
#include "bhq/util.hpp"

namespace bhq {

namespace {

constexpr double kPi = std::numbers::pi;

Dispersion branch_dispersion(const BoseHubbardParams& p, PairBranch b) {
    Dispersion d;
    d.params = p;
    d.kind = b == PairBranch::Full ? DispersionKind::DoublonHolonPair
                                   : DispersionKind::EffectiveStrongCoupling;
    return d;
}

void require_positive_time(double t) {
    if (!(t > 0)) throw DomainError("pair integrals require t > 0");
}

}  // namespace

std::complex<double> pair_phase_integral(const BoseHubbardParams& p, PairBranch branch, int R,
                                         double t, int N_k) {
    require_positive_time(t);
    if (R < 0) throw DomainError("R >= 0 required");
    if (N_k < 256 || N_k % 2) throw InvalidParameter("N_k >= 256 and even required");
    const Dispersion d = branch_dispersion(p, branch);
    // Both exponentials fold onto 2 cos(kR) by k -> -k parity.
    const double dk = 2 * kPi / N_k;
    double re = 0, im = 0;
    for (int j = 0; j < N_k; ++j) {
        const double k = -kPi + j * dk;
        const double W = d.energy(k);
        const double c = 2 * std::cos(k * R);
        re += std::cos(W * t) * c;
        im += std::sin(W * t) * c;
    }
    return {re / N_k, im / N_k};
}

std::complex<double> g2_integral(const BoseHubbardParams& p, int R, double t, int N_k,
                                 PairBranch branch) {
    require_positive_time(t);
    const std::complex<double> I = pair_phase_integral(p, branch, R, t, N_k);
    return (p.J / p.U) * (R / t) * I;
}

double g2bar_integral(const BoseHubbardParams& p, int R, double t, int N_k) {
    require_positive_time(t);
    if (R < 0) throw DomainError("R >= 0 required");
    if (N_k < 256 || N_k % 2) throw InvalidParameter("N_k >= 256 and even required");
    const Dispersion d = branch_dispersion(p, PairBranch::Full);
    // The two terms are complex conjugates after folding, so only the real
    // part of sin^2(k) e^{i(W t)} cos(kR) survives.
    const double dk = 2 * kPi / N_k;
    double acc = 0;
    for (int j = 0; j < N_k; ++j) {
        const double k = -kPi + j * dk;
        const double s = std::sin(k);
        acc += s * s * std::cos(d.energy(k) * t) * std::cos(k * R);
    }
    const double pref = (p.J / p.U) * (p.J / p.U);
    return pref * 2.0 * acc / N_k;
}

namespace {

double stationary_point_at(const Dispersion& pair_disp, double k_star, double R, double t) {
    require_positive_time(t);
    const double v = R / t;
    const double vmax = pair_disp.group_velocity(k_star);
    if (!(v < vmax)) throw NoStationaryPoint("R/t outside the cone of the pair dispersion");
    // Rising branch of the pair group velocity on (0, k_star).
    double lo = 0.0, hi = k_star;
    for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (pair_disp.group_velocity(mid) < v)
            lo = mid;
        else
            hi = mid;
    }
    const double ksp = 0.5 * (lo + hi);
    if (std::abs(pair_disp.curvature(ksp)) < 1e-12)
        throw SingularCurvature("stationary point at a curvature zero (cone edge)");
    return ksp;
}

std::complex<double> spa_g2_at(const BoseHubbardParams& p, const Dispersion& d, double k_star,
                               double R, double t) {
    const double ksp = stationary_point_at(d, k_star, R, t);
    const double curv = d.curvature(ksp);
    const double sigma = curv >= 0 ? 1.0 : -1.0;
    // Vg~ of the single quasiparticle is half the pair group velocity.
    const double vg = 0.5 * d.group_velocity(ksp);
    const double amp = (p.J / p.U) * vg / std::sqrt(std::abs(curv) * t);
    const double phase = d.energy(ksp) * t - ksp * R + sigma * kPi / 4;
    return {amp * std::cos(phase), amp * std::sin(phase)};
}

double spa_g2bar_at(const BoseHubbardParams& p, const Dispersion& d, double k_star, double R,
                    double t) {
    const double ksp = stationary_point_at(d, k_star, R, t);
    const double curv = d.curvature(ksp);
    const double sigma = curv >= 0 ? 1.0 : -1.0;
    const double s = std::sin(ksp);
    const double pref = (p.J / p.U) * (p.J / p.U);
    const double amp = pref * s * s / std::sqrt(std::abs(curv) * t);
    return amp * std::cos(d.energy(ksp) * t - ksp * R + sigma * kPi / 4);
}

}  // namespace

double stationary_point(const Dispersion& pair_disp, double R, double t) {
    return stationary_point_at(pair_disp, velocity_set(pair_disp).k_star, R, t);
}

std::complex<double> stationary_phase_g2(const BoseHubbardParams& p, double R, double t) {
    const Dispersion d = branch_dispersion(p, PairBranch::Effective);
    return spa_g2_at(p, d, velocity_set(d).k_star, R, t);
}

double stationary_phase_g2bar(const BoseHubbardParams& p, double R, double t) {
    const Dispersion d = branch_dispersion(p, PairBranch::Full);
    return spa_g2bar_at(p, d, velocity_set(d).k_star, R, t);
}

MapVariant map_variant_from_string(const std::string& s) {
    if (s == "g2_full") return MapVariant::G2Full;
    if (s == "g2_leading") return MapVariant::G2Leading;
    if (s == "g2_leading_re2") return MapVariant::G2LeadingRe2;
    if (s == "g2_subleading") return MapVariant::G2Subleading;
    if (s == "sp_leading") return MapVariant::StationaryPhaseLeading;
    if (s == "sp_leading_re2") return MapVariant::StationaryPhaseLeadingRe2;
    if (s == "sp_subleading") return MapVariant::StationaryPhaseSubleading;
    throw InvalidParameter("unknown map variant: " + s);
}

std::string to_string(MapVariant v) {
    switch (v) {
        case MapVariant::G2Full: return "g2_full";
        case MapVariant::G2Leading: return "g2_leading";
        case MapVariant::G2LeadingRe2: return "g2_leading_re2";
        case MapVariant::G2Subleading: return "g2_subleading";
        case MapVariant::StationaryPhaseLeading: return "sp_leading";
        case MapVariant::StationaryPhaseLeadingRe2: return "sp_leading_re2";
        case MapVariant::StationaryPhaseSubleading: return "sp_subleading";
    }
    return "?";
}

CorrelationMap predict_map(const AnalyticMapSpec& spec) {
    validate(spec.params);
    if (spec.N_k < 256 || spec.N_k % 2) throw InvalidParameter("N_k >= 256 and even required");
    if (!(spec.dt > 0)) throw InvalidParameter("dt > 0 required");
    if (spec.R_max < 1) throw InvalidParameter("R_max >= 1 required");
    if (!(spec.t_max >= spec.dt)) throw InvalidParameter("t_max >= dt required");

    CorrelationMap map;
    map.kind = "G2";
    for (int R = 0; R <= spec.R_max; ++R) map.R_values.push_back(R);
    const int nt = static_cast<int>(std::floor(spec.t_max / spec.dt + 1e-9));
    for (int j = 1; j <= nt; ++j) map.t_values.push_back(j * spec.dt);
    map.values.assign(map.nR() * map.nT(), 0.0);

    const auto& p = spec.params;
    // Stationary-phase context computed once for the whole map.
    const Dispersion d_eff = branch_dispersion(p, PairBranch::Effective);
    const Dispersion d_full = branch_dispersion(p, PairBranch::Full);
    const double kstar_eff = velocity_set(d_eff).k_star;
    const double kstar_full = velocity_set(d_full).k_star;

    const std::size_t npts = map.values.size();
    const std::size_t ncols = map.nT();
    parallel_for(npts, [&](std::size_t idx) {
        const std::size_t i = idx / ncols;
        const std::size_t j = idx % ncols;
        const int R = map.R_values[i];
        const double t = map.t_values[j];
        double out = 0;
        try {
            switch (spec.variant) {
                case MapVariant::G2Full: {
                    const auto g2 = g2_integral(p, R, t, spec.N_k, spec.branch);
                    const double gb = g2bar_integral(p, R, t, spec.N_k);
                    out = -2 * (std::norm(g2) + gb * gb);
                    break;
                }
                case MapVariant::G2Leading: {
                    const auto g2 = g2_integral(p, R, t, spec.N_k, spec.branch);
                    out = -2 * std::norm(g2);
                    break;
                }
                case MapVariant::G2LeadingRe2: {
                    const auto g2 = g2_integral(p, R, t, spec.N_k, spec.branch);
                    out = -2 * g2.real() * g2.real();
                    break;
                }
                case MapVariant::G2Subleading: {
                    const double gb = g2bar_integral(p, R, t, spec.N_k);
                    out = -2 * gb * gb;
                    break;
                }
                case MapVariant::StationaryPhaseLeading:
                case MapVariant::StationaryPhaseLeadingRe2: {
                    try {
                        const auto a = spa_g2_at(p, d_eff, kstar_eff, R, t);
                        out = spec.variant == MapVariant::StationaryPhaseLeading
                                  ? -2 * std::norm(a)
                                  : -2 * a.real() * a.real();
                    } catch (const NoStationaryPoint&) {
                        out = 0;  // outside the cone
                    }
                    break;
                }
                case MapVariant::StationaryPhaseSubleading: {
                    try {
                        const double a = spa_g2bar_at(p, d_full, kstar_full, R, t);
                        out = -2 * a * a;
                    } catch (const NoStationaryPoint&) {
                        out = 0;
                    }
                    break;
                }
            }
        } catch (const SingularCurvature&) {
            out = std::numeric_limits<double>::quiet_NaN();
        }
        map.values[idx] = out;
    });

    map.metadata["engine"] = "analytic";
    map.metadata["variant"] = to_string(spec.variant);
    map.metadata["branch"] = spec.branch == PairBranch::Full ? "full" : "effective";
    map.metadata["N_k"] = std::to_string(spec.N_k);
    map.metadata["J"] = fmt_double(p.J);
    map.metadata["U"] = fmt_double(p.U);
    map.metadata["nbar"] = fmt_double(p.nbar);
    return map;
}

}  // namespace bhq
