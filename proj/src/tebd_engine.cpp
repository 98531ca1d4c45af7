#include "bhq/tebd_engine.hpp"

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <sstream>

#include "bhq/errors.hpp"
#include "bhq/util.hpp"

namespace bhq {

namespace {

Eigen::MatrixXcd gate_exponential(const Eigen::MatrixXcd& h, double tau, bool imaginary) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    Eigen::VectorXcd phase(es.eigenvalues().size());
    for (int i = 0; i < phase.size(); ++i)
        phase[i] = imaginary ? std::complex<double>(std::exp(-tau * es.eigenvalues()[i]), 0)
                             : std::exp(std::complex<double>(0, -tau * es.eigenvalues()[i]));
    return es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<int> balanced_pattern(int M, long N) {
    std::vector<int> occ(M);
    for (int i = 0; i < M; ++i)
        occ[i] = static_cast<int>((static_cast<long>(i + 1) * N) / M -
                                  (static_cast<long>(i) * N) / M);
    return occ;
}

}  // namespace

TrotterPlan make_trotter_plan(const BoseHubbardParams& p, double dt, bool imaginary) {
    TrotterPlan plan;
    plan.dt = dt;
    plan.imaginary = imaginary;
    for (int b = 0; b + 1 < p.M; ++b) {
        const Eigen::MatrixXcd h = bond_hamiltonian(p, b);
        if (b % 2 == 0)
            plan.even_half.push_back(gate_exponential(h, dt / 2, imaginary));
        else
            plan.odd_full.push_back(gate_exponential(h, dt, imaginary));
    }
    return plan;
}

double trotter_step(MPSState& psi, const TrotterPlan& plan, const TruncationPolicy& pol) {
    double worst = 0;
    auto sweep_even = [&] {
        int g = 0;
        for (int b = 0; b + 1 < psi.M; b += 2, ++g)
            worst = std::max(worst, psi.apply_two_site_gate(b, plan.even_half[g], pol));
    };
    auto sweep_odd = [&] {
        int g = 0;
        for (int b = 1; b + 1 < psi.M; b += 2, ++g)
            worst = std::max(worst, psi.apply_two_site_gate(b, plan.odd_full[g], pol));
    };
    sweep_even();
    sweep_odd();
    sweep_even();
    if (plan.imaginary) psi.normalize();
    return worst;
}

MPSState product_state(const BoseHubbardParams& p) {
    validate(p);
    const double r = std::round(p.nbar);
    if (!(p.nbar > 0) || std::abs(p.nbar - r) > 1e-12)
        throw DomainError("product_state requires a positive integer filling");
    const int fill = static_cast<int>(r);
    if (fill > p.n_max) throw CapacityError("filling exceeds n_max");
    return product_mps(p.M, p.n_max, std::vector<int>(p.M, fill));
}

ImaginaryTimeResult imaginary_time_ground_state(const BoseHubbardParams& p, double u0,
                                                const ImaginaryTimeOptions& opts) {
    if (is_infinite_interaction(u0))
        throw DomainError("imaginary-time ground state needs a finite u0");
    BoseHubbardParams p0 = p;
    p0.U = u0 * p.J;
    validate(p0);

    MPSState psi = product_mps(p0.M, p0.n_max, balanced_pattern(p0.M, p0.N));
    TruncationPolicy pol;
    pol.chi_max = opts.chi;
    pol.enforce_fail = false;

    ImaginaryTimeResult res;
    double energy = mps_energy(psi, p0);
    int total_sweeps = 0;
    for (double dtau : opts.dtau_schedule) {
        const TrotterPlan plan = make_trotter_plan(p0, dtau, true);
        bool stage_done = false;
        for (int sweep = 0; sweep < opts.sweep_cap; ++sweep) {
            trotter_step(psi, plan, pol);
            ++total_sweeps;
            const double e_new = mps_energy(psi, p0);
            const double delta = std::abs(e_new - energy);
            energy = e_new;
            if (delta < opts.energy_tol * std::max(1.0, std::abs(p0.J))) {
                stage_done = true;
                break;
            }
        }
        if (!stage_done)
            throw ConvergenceError("imaginary-time stage dtau=" + std::to_string(dtau) +
                                   " not converged within the sweep cap");
    }
    psi.normalize();
    res.state = std::move(psi);
    res.energy = mps_energy(res.state, p0);
    res.sweeps = total_sweeps;
    return res;
}

QuenchRunResult run_quench_tebd(const QuenchProtocol& protocol,
                                const BoseHubbardParams& params, const TebdOptions& opts) {
    validate(protocol);
    const auto t_begin = std::chrono::steady_clock::now();

    BoseHubbardParams p1 = params;
    p1.nbar = protocol.nbar;
    p1.N = std::lround(protocol.nbar * params.M);
    p1.U = protocol.u1 * params.J;
    validate(p1);
    if (opts.chi < 2) throw InvalidParameter("chi >= 2 required");

    MPSState psi;
    if (is_infinite_interaction(protocol.u0)) {
        psi = product_state(p1);
    } else {
        ImaginaryTimeOptions gopts = opts.ground_state;
        gopts.chi = std::max(gopts.chi, opts.chi);
        psi = imaginary_time_ground_state(p1, protocol.u0, gopts).state;
    }

    TruncationPolicy pol;
    pol.chi_max = opts.chi;
    pol.rel_cutoff = opts.svd_rel_cutoff;
    pol.hard_fail = opts.discard_fail;
    pol.enforce_fail = true;

    // inner step divides the sampling interval exactly
    const int per_sample = std::max(1, static_cast<int>(std::ceil(
                                           protocol.dt_sample / opts.dt - 1e-9)));
    const double dt = protocol.dt_sample / per_sample;
    const TrotterPlan plan = make_trotter_plan(p1, dt, false);

    const int n_samples = static_cast<int>(std::floor(protocol.T / protocol.dt_sample + 1e-9));
    std::vector<double> ts;
    for (int k = 1; k <= n_samples; ++k) ts.push_back(k * protocol.dt_sample);

    auto measure_slice = [&](MPSState& s) {
        CorrelationSlice out;
        std::vector<double> dens(p1.M);
        for (int i = 0; i < p1.M; ++i) dens[i] = s.site_density(i).real();
        for (int R = 0; R < p1.M; ++R) {
            const auto [i, j] = pair_for_distance(p1.M, R);
            if (protocol.measure_g1) out.g1.push_back(s.hopping_correlation(j, i));
            if (protocol.measure_g2)
                out.g2.push_back(s.density_correlation(i, j) - dens[i] * dens[j]);
        }
        return out;
    };

    const CorrelationSlice base = measure_slice(psi);

    QuenchRunResult res;
    auto make_map = [&](const std::string& kind) {
        CorrelationMap m;
        m.kind = kind;
        for (int R = 0; R < p1.M; ++R) m.R_values.push_back(R);
        m.t_values = ts;
        m.values.assign(m.nR() * m.nT(), 0.0);
        if (kind == "G1") m.magnitude.assign(m.nR() * m.nT(), 0.0);
        return m;
    };
    if (protocol.measure_g1) res.g1 = make_map("G1");
    if (protocol.measure_g2) res.g2 = make_map("G2");

    const double e_ref = mps_energy(psi, p1);
    double norm_drift = 0;
    for (int k = 0; k < n_samples; ++k) {
        for (int s = 0; s < per_sample; ++s) trotter_step(psi, plan, pol);
        norm_drift = std::max(norm_drift, std::abs(psi.norm() - 1.0));
        const CorrelationSlice slice = measure_slice(psi);
        for (int R = 0; R < p1.M; ++R) {
            if (res.g1) {
                const std::complex<double> d = slice.g1[R] - base.g1[R];
                res.g1->at(R, k) = d.real();
                res.g1->mag(R, k) = std::abs(d);
            }
            if (res.g2) res.g2->at(R, k) = slice.g2[R] - base.g2[R];
        }
        double ntot = 0;
        for (int i = 0; i < p1.M; ++i) ntot += psi.site_density(i).real();
        res.number_drift =
            std::max(res.number_drift, std::abs(ntot - static_cast<double>(p1.N)));
        res.energy_drift_abs =
            std::max(res.energy_drift_abs, std::abs(mps_energy(psi, p1) - e_ref));
    }
    res.energy_drift_rel = res.energy_drift_abs / std::max(std::abs(e_ref), p1.J * p1.M);
    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();

    res.info["engine"] = "tebd";
    res.info["M"] = std::to_string(p1.M);
    res.info["N"] = std::to_string(p1.N);
    res.info["n_max"] = std::to_string(p1.n_max);
    res.info["J"] = fmt_double(p1.J);
    res.info["u0"] = is_infinite_interaction(protocol.u0) ? "inf" : fmt_double(protocol.u0);
    res.info["u1"] = fmt_double(protocol.u1);
    res.info["nbar"] = fmt_double(protocol.nbar);
    res.info["T"] = fmt_double(protocol.T);
    res.info["dt_sample"] = fmt_double(protocol.dt_sample);
    res.info["chi"] = std::to_string(opts.chi);
    res.info["dt"] = fmt_double(dt);
    res.info["trotter_order"] = "2";
    res.info["svd_rel_cutoff"] = fmt_double(opts.svd_rel_cutoff);
    res.info["max_bond"] = std::to_string(psi.max_bond());
    res.info["discarded_total"] = fmt_double(psi.discarded_total);
    res.info["discarded_max_bond"] = fmt_double(psi.discarded_max_bond);
    res.info["norm_drift"] = fmt_double(norm_drift);
    res.info["pair_policy"] = "symmetric-about-center";
    res.info["number_drift"] = fmt_double(res.number_drift);
    res.info["energy_drift_abs"] = fmt_double(res.energy_drift_abs);
    res.info["energy_drift_rel"] = fmt_double(res.energy_drift_rel);
    if (res.g1)
        res.g1->metadata = std::map<std::string, std::string>(res.info.begin(), res.info.end());
    if (res.g2)
        res.g2->metadata = std::map<std::string, std::string>(res.info.begin(), res.info.end());
    return res;
}

namespace {

double map_maxabs_diff(const std::optional<CorrelationMap>& a,
                       const std::optional<CorrelationMap>& b) {
    if (!a || !b) return 0;
    double worst = 0;
    for (std::size_t i = 0; i < a->values.size(); ++i)
        worst = std::max(worst, std::abs(a->values[i] - b->values[i]));
    return worst;
}

}  // namespace

ConvergenceVerdict convergence_check(const QuenchProtocol& protocol,
                                     const BoseHubbardParams& params, const TebdOptions& opts,
                                     double threshold) {
    ConvergenceVerdict v;
    v.threshold = threshold;
    v.base = run_quench_tebd(protocol, params, opts);
    TebdOptions oc = opts;
    oc.chi = 2 * opts.chi;
    v.double_chi = run_quench_tebd(protocol, params, oc);
    TebdOptions od = opts;
    od.dt = opts.dt / 2;
    v.half_dt = run_quench_tebd(protocol, params, od);

    v.diff_chi = std::max(map_maxabs_diff(v.base.g1, v.double_chi.g1),
                          map_maxabs_diff(v.base.g2, v.double_chi.g2));
    v.diff_dt = std::max(map_maxabs_diff(v.base.g1, v.half_dt.g1),
                         map_maxabs_diff(v.base.g2, v.half_dt.g2));
    v.pass = v.diff_chi < threshold && v.diff_dt < threshold;

    std::ostringstream ss;
    ss << "format = bhq-convergence-1\n";
    ss << "verdict = " << (v.pass ? "PASS" : "FAIL") << "\n";
    ss << "threshold = " << fmt_double(threshold) << "\n";
    ss << "chi = " << opts.chi << "\n";
    ss << "chi_doubled = " << oc.chi << "\n";
    ss << "dt = " << fmt_double(opts.dt) << "\n";
    ss << "dt_halved = " << fmt_double(od.dt) << "\n";
    ss << "maxabs_diff_chi = " << fmt_double(v.diff_chi) << "\n";
    ss << "maxabs_diff_dt = " << fmt_double(v.diff_dt) << "\n";
    v.record = ss.str();
    return v;
}

}  // namespace bhq
