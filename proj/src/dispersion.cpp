#include "bhq/dispersion.hpp"

#include <cmath>
#include <numbers>

#include "bhq/errors.hpp"

namespace bhq {

namespace {

constexpr double kPi = std::numbers::pi;

void check_range(double k, double lim) {
    if (!(k >= -lim && k <= lim)) throw DomainError("quasimomentum outside [-pi, pi]");
}

}  // namespace

DispersionKind dispersion_kind_from_string(const std::string& s) {
    if (s == "free") return DispersionKind::Free;
    if (s == "bogoliubov") return DispersionKind::Bogoliubov;
    if (s == "pair" || s == "doublon-holon" || s == "doublon_holon_pair")
        return DispersionKind::DoublonHolonPair;
    if (s == "effective" || s == "effective_strong_coupling")
        return DispersionKind::EffectiveStrongCoupling;
    throw InvalidParameter("unknown dispersion kind: " + s);
}

std::string to_string(DispersionKind k) {
    switch (k) {
        case DispersionKind::Free: return "free";
        case DispersionKind::Bogoliubov: return "bogoliubov";
        case DispersionKind::DoublonHolonPair: return "pair";
        case DispersionKind::EffectiveStrongCoupling: return "effective";
    }
    return "?";
}

bool is_pair_kind(DispersionKind k) {
    return k == DispersionKind::DoublonHolonPair || k == DispersionKind::EffectiveStrongCoupling;
}

double Dispersion::energy(double k) const {
    check_range(k, kPi * (1 + 1e-12));
    const double J = params.J, U = params.U, nb = params.nbar;
    switch (kind) {
        case DispersionKind::Free: {
            const double s = std::sin(k / 2);
            return 4 * J * s * s;
        }
        case DispersionKind::Bogoliubov: {
            const double s = std::sin(k / 2);
            const double eps = 4 * J * s * s;
            return std::sqrt(eps * (eps + 2 * nb * U));
        }
        case DispersionKind::DoublonHolonPair: {
            const double A = U - 2 * J * (2 * nb + 1) * std::cos(k);
            const double s = std::sin(k);
            return std::sqrt(A * A + 16 * J * J * nb * (nb + 1) * s * s);
        }
        case DispersionKind::EffectiveStrongCoupling:
            return -2 * (2 * nb + 1) * J * std::cos(k);
    }
    throw DomainError("unreachable dispersion kind");
}

double Dispersion::group_velocity(double k) const {
    check_range(k, kPi * (1 + 1e-12));
    const double J = params.J, U = params.U, nb = params.nbar;
    if (k == 0.0) return 0.0;  // odd continuation at the zone center
    switch (kind) {
        case DispersionKind::Free:
            return 2 * J * std::sin(k);
        case DispersionKind::Bogoliubov: {
            const double s = std::sin(k / 2);
            const double eps = 4 * J * s * s;
            const double E = std::sqrt(eps * (eps + 2 * nb * U));
            if (E == 0.0) return 2 * J * std::sin(k);  // U = 0 degenerates to Free
            const double deps = 2 * J * std::sin(k);
            return deps * (eps + nb * U) / E;
        }
        case DispersionKind::DoublonHolonPair: {
            const double a = 2 * J * (2 * nb + 1);
            const double A = U - a * std::cos(k);
            const double C = 16 * J * J * nb * (nb + 1);
            const double W = std::sqrt(A * A + C * std::sin(k) * std::sin(k));
            if (W == 0.0) return 0.0;  // gapless point, odd limit
            return (A * a * std::sin(k) + C * std::sin(k) * std::cos(k)) / W;
        }
        case DispersionKind::EffectiveStrongCoupling:
            return 2 * (2 * nb + 1) * J * std::sin(k);
    }
    throw DomainError("unreachable dispersion kind");
}

double Dispersion::curvature(double k) const {
    check_range(k, kPi * (1 + 1e-12));
    const double J = params.J, U = params.U, nb = params.nbar;
    switch (kind) {
        case DispersionKind::Free:
            return 2 * J * std::cos(k);
        case DispersionKind::Bogoliubov: {
            const double s = std::sin(k / 2);
            const double eps = 4 * J * s * s;
            const double E = std::sqrt(eps * (eps + 2 * nb * U));
            if (E == 0.0) throw DomainError("Bogoliubov curvature undefined at E = 0");
            const double deps = 2 * J * std::sin(k);
            const double ddeps = 2 * J * std::cos(k);
            const double dE = deps * (eps + nb * U) / E;
            return (ddeps * (eps + nb * U) + deps * deps - dE * dE) / E;
        }
        case DispersionKind::DoublonHolonPair: {
            const double a = 2 * J * (2 * nb + 1);
            const double A = U - a * std::cos(k);
            const double Ap = a * std::sin(k);
            const double App = a * std::cos(k);
            const double C = 16 * J * J * nb * (nb + 1);
            const double s = std::sin(k), c = std::cos(k);
            const double W = std::sqrt(A * A + C * s * s);
            if (W == 0.0) throw DomainError("pair curvature undefined at the gapless point");
            const double Wp = (A * Ap + C * s * c) / W;
            return (Ap * Ap + A * App + C * (c * c - s * s) - Wp * Wp) / W;
        }
        case DispersionKind::EffectiveStrongCoupling:
            return 2 * (2 * nb + 1) * J * std::cos(k);
    }
    throw DomainError("unreachable dispersion kind");
}

VelocitySet velocity_set(const Dispersion& d) {
    // Dense scan of the group velocity on (0, pi], then golden-section
    // refinement of the bracketing interval. One code path for all kinds;
    // closed forms are only used in tests.
    constexpr int kGrid = 8192;
    double best_k = 0, best_v = -1e300;
    for (int i = 1; i <= kGrid; ++i) {
        const double k = kPi * i / kGrid;
        const double v = d.group_velocity(k);
        if (v > best_v) {
            best_v = v;
            best_k = k;
        }
    }
    double lo = std::max(best_k - kPi / kGrid, 1e-12);
    double hi = std::min(best_k + kPi / kGrid, kPi);
    const double gr = (std::sqrt(5.0) - 1) / 2;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = d.group_velocity(x1), f2 = d.group_velocity(x2);
    while (hi - lo > 1e-9) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = d.group_velocity(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = d.group_velocity(x1);
        }
    }
    VelocitySet vs;
    vs.k_star = 0.5 * (lo + hi);
    // Golden section stalls at the sqrt(eps) floor on the flat top; an
    // interior maximum is pinned to machine precision as the curvature root.
    {
        double blo = std::max(best_k - 2 * kPi / kGrid, 1e-12);
        double bhi = std::min(best_k + 2 * kPi / kGrid, kPi);
        double clo = d.curvature(blo), chi = d.curvature(bhi);
        if (clo > 0 && chi < 0) {
            for (int it = 0; it < 200 && bhi - blo > 1e-15; ++it) {
                const double mid = 0.5 * (blo + bhi);
                if (d.curvature(mid) > 0)
                    blo = mid;
                else
                    bhi = mid;
            }
            vs.k_star = 0.5 * (blo + bhi);
        }
    }
    const double scale = is_pair_kind(d.kind) ? 2.0 : 1.0;
    vs.V_g_star = d.group_velocity(vs.k_star) / scale;
    vs.V_phi_star = d.energy(vs.k_star) / (scale * vs.k_star);
    vs.V_ce_pred = 2 * vs.V_g_star;
    vs.V_m_pred = 2 * vs.V_phi_star;
    return vs;
}

double sound_velocity_weak(double gamma, double nbar, double J) {
    if (!(gamma >= 0)) throw DomainError("sound_velocity_weak: gamma >= 0 required");
    const double sg = std::sqrt(gamma);
    return 2 * J * nbar * sg * (1 - sg / (4 * kPi));
}

double sound_velocity_strong2(double u_over_j, double nbar, double J) {
    return 4 * J * std::sin(kPi * nbar) * (1 - (8.0 / u_over_j) * std::cos(kPi * nbar));
}

LiebLinigerParams lieb_liniger_map(const BoseHubbardParams& p) {
    if (!(p.nbar > 0)) throw DomainError("lieb_liniger_map: nbar must be > 0");
    LiebLinigerParams ll;
    ll.a = 1.0;
    ll.m = 1.0 / (2 * p.J);
    ll.c = p.U * ll.m;
    ll.rho = p.nbar;
    ll.gamma = p.U / (2 * p.J * p.nbar);
    return ll;
}

}  // namespace bhq
