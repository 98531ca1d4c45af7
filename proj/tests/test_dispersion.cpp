#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bhq/dispersion.hpp"
#include "bhq/errors.hpp"

using namespace bhq;

namespace {

constexpr double kPi = std::numbers::pi;

Dispersion make(DispersionKind kind, double U, double nbar, double J = 1.0) {
    Dispersion d;
    d.kind = kind;
    d.params.J = J;
    d.params.U = U;
    d.params.nbar = nbar;
    d.params.M = 16;
    d.params.N = static_cast<long>(std::lround(nbar * 16));
    d.params.n_max = 8;
    return d;
}

double central_diff(const Dispersion& d, double k, double h = 1e-6) {
    return (d.energy(k + h) - d.energy(k - h)) / (2 * h);
}

}  // namespace

TEST_CASE("energy closed-form spot checks") {
    CHECK(make(DispersionKind::Free, 0, 1).energy(kPi) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(make(DispersionKind::Bogoliubov, 0.1, 5).energy(kPi) ==
          doctest::Approx(std::sqrt(20.0)).epsilon(1e-12));
    CHECK(make(DispersionKind::DoublonHolonPair, 24, 1).energy(0) ==
          doctest::Approx(18.0).epsilon(1e-12));
    CHECK(make(DispersionKind::EffectiveStrongCoupling, 24, 1).energy(kPi / 2) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(make(DispersionKind::Free, 0, 1).energy(4.0), DomainError);
}

TEST_CASE("energy parity over random k") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uk(0, kPi);
    for (auto kind : {DispersionKind::Free, DispersionKind::Bogoliubov,
                      DispersionKind::DoublonHolonPair, DispersionKind::EffectiveStrongCoupling}) {
        auto d = make(kind, 8.0, 1.0);
        for (int i = 0; i < 1000; ++i) {
            const double k = uk(rng);
            CHECK(d.energy(k) == doctest::Approx(d.energy(-k)).epsilon(1e-12));
        }
    }
}

TEST_CASE("group velocity closed forms and degeneracies") {
    CHECK(make(DispersionKind::Free, 0, 1).group_velocity(kPi / 2) ==
          doctest::Approx(2.0).epsilon(1e-12));
    // U = 0 Bogoliubov degenerates to Free
    CHECK(make(DispersionKind::Bogoliubov, 0.0, 3).group_velocity(kPi / 2) ==
          doctest::Approx(2.0).epsilon(1e-12));
    // finite-difference oracle for the pair branch at U/J = 24
    auto d = make(DispersionKind::DoublonHolonPair, 24, 1);
    const double fd = central_diff(d, kPi / 2);
    CHECK(d.group_velocity(kPi / 2) == doctest::Approx(fd).epsilon(1e-8));
    CHECK(d.group_velocity(kPi / 2) == doctest::Approx(144.0 / std::sqrt(608.0)).epsilon(1e-12));
}

TEST_CASE("analytic derivative matches central differences on a k grid") {
    for (auto kind : {DispersionKind::Free, DispersionKind::Bogoliubov,
                      DispersionKind::DoublonHolonPair, DispersionKind::EffectiveStrongCoupling}) {
        auto d = make(kind, kind == DispersionKind::Bogoliubov ? 0.1 : 8.0,
                      kind == DispersionKind::Bogoliubov ? 5.0 : 1.0);
        for (int i = 0; i < 1024; ++i) {
            const double k = -kPi + (2 * kPi) * (i + 0.5) / 1024;
            const double a = d.group_velocity(k);
            const double n = central_diff(d, k);
            CHECK(std::abs(a - n) / std::max(1.0, std::abs(a)) < 1e-6);
        }
    }
}

TEST_CASE("curvature matches second differences") {
    for (auto kind : {DispersionKind::Free, DispersionKind::DoublonHolonPair,
                      DispersionKind::EffectiveStrongCoupling}) {
        auto d = make(kind, 12.0, 1.0);
        for (double k : {0.3, 1.0, 2.0, 2.8}) {
            const double h = 1e-5;
            const double num = (d.energy(k + h) - 2 * d.energy(k) + d.energy(k - h)) / (h * h);
            CHECK(d.curvature(k) == doctest::Approx(num).epsilon(1e-4));
        }
    }
    auto b = make(DispersionKind::Bogoliubov, 0.1, 5.0);
    const double h = 1e-5, k = 1.1;
    const double num = (b.energy(k + h) - 2 * b.energy(k) + b.energy(k - h)) / (h * h);
    CHECK(b.curvature(k) == doctest::Approx(num).epsilon(1e-4));
}

TEST_CASE("Bogoliubov with U=0 equals Free pointwise") {
    auto bog = make(DispersionKind::Bogoliubov, 0.0, 4.0);
    auto fre = make(DispersionKind::Free, 0.0, 4.0);
    for (int i = 0; i <= 300; ++i) {
        const double k = -kPi + 2 * kPi * i / 300.0;
        CHECK(bog.energy(k) == doctest::Approx(fre.energy(k)).epsilon(1e-12));
    }
}

TEST_CASE("gap-removed pair branch approaches the effective branch as U grows") {
    const double U = 1000.0, nb = 1.0;
    auto pair = make(DispersionKind::DoublonHolonPair, U, nb);
    auto eff = make(DispersionKind::EffectiveStrongCoupling, U, nb);
    double sup = 0, scale = 0;
    for (int i = 0; i <= 512; ++i) {
        const double k = -kPi + 2 * kPi * i / 512.0;
        sup = std::max(sup, std::abs((pair.energy(k) - U) - eff.energy(k)));
        scale = std::max(scale, std::abs(eff.energy(k)));
    }
    CHECK(sup / scale < 4 * (2 * nb + 1) * 1.0 / U);
}

TEST_CASE("small-k Bogoliubov slope equals the sound velocity") {
    auto d = make(DispersionKind::Bogoliubov, 0.1, 5.0);
    const double k = 1e-4;
    CHECK(d.energy(k) / k == doctest::Approx(std::sqrt(2 * 5.0 * 0.1 * 1.0)).epsilon(1e-4));
}

TEST_CASE("velocity_set closed forms: Free") {
    auto vs = velocity_set(make(DispersionKind::Free, 0, 1));
    CHECK(std::abs(vs.k_star - kPi / 2) < 1e-8);
    CHECK(std::abs(vs.V_g_star - 2.0) < 1e-8);
    CHECK(vs.V_phi_star == doctest::Approx(4.0 / kPi).epsilon(1e-8));
    CHECK(vs.V_ce_pred == doctest::Approx(2 * vs.V_g_star).epsilon(1e-15));
    CHECK(vs.V_m_pred == doctest::Approx(2 * vs.V_phi_star).epsilon(1e-15));
}

TEST_CASE("velocity_set: effective strong coupling at unit filling") {
    auto vs = velocity_set(make(DispersionKind::EffectiveStrongCoupling, 200, 1));
    CHECK(std::abs(vs.k_star - kPi / 2) < 1e-7);
    CHECK(std::abs(vs.V_ce_pred - 6.0) < 1e-6);  // pair CE velocity 2(2nbar+1)J
    CHECK(std::abs(vs.V_m_pred) < 1e-6);         // pair energy vanishes at k*
}

TEST_CASE("velocity_set: Bogoliubov exceeds the sound velocity") {
    auto vs = velocity_set(make(DispersionKind::Bogoliubov, 0.1, 5.0));
    // frozen from an independent dense-grid argmax (200001 points + refine)
    CHECK(vs.k_star == doctest::Approx(1.53431372596).epsilon(1e-8));
    CHECK(vs.V_g_star == doctest::Approx(2.04248119307).epsilon(1e-9));
    CHECK(vs.V_phi_star == doctest::Approx(1.54791666394).epsilon(1e-9));
    CHECK(vs.V_g_star > std::sqrt(2 * 5.0 * 0.1));
}

TEST_CASE("velocity_set: doublon-holon pair predictions") {
    auto vs8 = velocity_set(make(DispersionKind::DoublonHolonPair, 8, 1));
    CHECK(vs8.V_ce_pred == doctest::Approx(5.82022941552).epsilon(1e-9));
    CHECK(vs8.V_m_pred == doctest::Approx(6.9837268643).epsilon(1e-9));
    auto vs24 = velocity_set(make(DispersionKind::DoublonHolonPair, 24, 1));
    CHECK(vs24.V_ce_pred == doctest::Approx(5.98133679695).epsilon(1e-9));
    CHECK(vs24.V_m_pred == doctest::Approx(17.3328891417).epsilon(1e-9));
}

TEST_CASE("velocity_set scale invariance under J,U -> lambda J, lambda U") {
    for (double lam : {2.0, 10.0}) {
        auto base = velocity_set(make(DispersionKind::DoublonHolonPair, 8, 1, 1.0));
        auto scaled = velocity_set(make(DispersionKind::DoublonHolonPair, 8 * lam, 1, lam));
        CHECK(scaled.k_star == doctest::Approx(base.k_star).epsilon(1e-7));
        CHECK(scaled.V_g_star == doctest::Approx(lam * base.V_g_star).epsilon(1e-9));
        CHECK(scaled.V_phi_star == doctest::Approx(lam * base.V_phi_star).epsilon(1e-9));
    }
}

TEST_CASE("weak-coupling sound velocity") {
    CHECK(sound_velocity_weak(0.01, 5.0) == doctest::Approx(0.9920423).epsilon(1e-6));
    // doubled value at the critical point matches the quoted Bethe-ansatz number
    CHECK(2 * sound_velocity_weak(1.65, 1.0) == doctest::Approx(4.6128817).epsilon(1e-6));
    CHECK(sound_velocity_weak(1e-12, 1.0) < 1e-5);
}

TEST_CASE("strong-coupling doubled sound velocity") {
    CHECK(sound_velocity_strong2(50, 0.5) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(std::abs(sound_velocity_strong2(50, 0.9999)) < 1.5e-3);
    CHECK(std::abs(sound_velocity_strong2(50, 0.99999)) < 1.5e-4);
    // arithmetic oracle: 4 sin(pi/4) (1 - 0.16 cos(pi/4))
    const double expect = 4 * std::sin(kPi / 4) * (1 - 0.16 * std::cos(kPi / 4));
    CHECK(sound_velocity_strong2(50, 0.25) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(sound_velocity_strong2(50, 0.25) == doctest::Approx(2.5084271).epsilon(1e-6));
}

TEST_CASE("Lieb-Liniger mapping") {
    auto p = BoseHubbardParams::canonical(1.0, 0.2, 5.0, 10, 12);
    CHECK(lieb_liniger_map(p).gamma == doctest::Approx(0.02).epsilon(1e-12));
    p.U = 0.1;
    CHECK(lieb_liniger_map(p).gamma == doctest::Approx(0.01).epsilon(1e-12));
    auto q = BoseHubbardParams::canonical(1.0, 3.3, 1.0, 10, 5);
    auto ll = lieb_liniger_map(q);
    CHECK(ll.gamma == doctest::Approx(1.65).epsilon(1e-12));
    // consistency of the parameter correspondence: gamma = c / rho
    CHECK(ll.c / ll.rho == doctest::Approx(ll.gamma).epsilon(1e-12));
    CHECK(1.0 / (2 * ll.m) == doctest::Approx(q.J).epsilon(1e-12));
    q.nbar = 0;
    CHECK_THROWS_AS(lieb_liniger_map(q), DomainError);
}
