#include "bhq/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bhq/errors.hpp"
#include "bhq/util.hpp"

namespace bhq {

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Extremum {
    double pos;  // refined coordinate along the scan axis
    int polarity;
};

// Local extrema of y sampled at x, refined by the vertex of the parabola
// through the three neighboring samples. NaN samples break the scan. The
// zero-floor is relative to the slice maximum so that rescaling the map
// rescales the comparison on both sides.
std::vector<Extremum> local_extrema(const std::vector<double>& x, const std::vector<double>& y) {
    double slice_max = 0;
    for (double v : y)
        if (!std::isnan(v)) slice_max = std::max(slice_max, std::abs(v));
    const double floor_abs = 1e-12 * slice_max;
    std::vector<Extremum> out;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
        if (std::isnan(y0) || std::isnan(y1) || std::isnan(y2)) continue;
        if (std::abs(y1) <= floor_abs) continue;
        const bool mx = y1 > y0 && y1 > y2;
        const bool mn = y1 < y0 && y1 < y2;
        if (!mx && !mn) continue;
        const double den = y0 - 2 * y1 + y2;
        double off = 0;
        if (den != 0) off = 0.5 * (y0 - y2) / den;
        off = std::clamp(off, -0.5, 0.5);
        // Non-uniform x handled by local spacing around the center sample.
        const double h = 0.5 * (x[i + 1] - x[i - 1]);
        out.push_back({x[i] + off * h, mx ? 1 : -1});
    }
    return out;
}

struct Track {
    std::vector<RidgePoint> pts;
    int polarity = 0;
    double last = 0;  // last matched coordinate along the linking axis
    int miss = 0;
};

// Greedy nearest-neighbor linking of per-slice extrema into tracks. For each
// new slice, every active track grabs the nearest unused extremum of its
// polarity within the gate; unmatched extrema seed new tracks.
std::vector<Ridge> link_tracks(const std::vector<std::vector<Extremum>>& slices,
                               const std::vector<double>& slice_coord, char direction,
                               int max_miss) {
    std::vector<Track> active;
    std::vector<Track> done;
    for (std::size_t s = 0; s < slices.size(); ++s) {
        const auto& ext = slices[s];
        std::vector<double> spacing;
        {
            std::vector<double> ps;
            ps.reserve(ext.size());
            for (const auto& e : ext) ps.push_back(e.pos);
            std::sort(ps.begin(), ps.end());
            for (std::size_t i = 1; i < ps.size(); ++i) spacing.push_back(ps[i] - ps[i - 1]);
        }
        double gate = spacing.empty() ? std::numeric_limits<double>::infinity()
                                      : 0.5 * median(spacing);
        std::vector<bool> used(ext.size(), false);
        for (auto& tr : active) {
            int best = -1;
            double bd = gate;
            for (std::size_t m = 0; m < ext.size(); ++m) {
                if (used[m] || ext[m].polarity != tr.polarity) continue;
                const double d = std::abs(ext[m].pos - tr.last);
                if (d <= bd) {
                    bd = d;
                    best = static_cast<int>(m);
                }
            }
            if (best >= 0) {
                used[best] = true;
                const double c = slice_coord[s];
                if (direction == 't')
                    tr.pts.push_back({c, ext[best].pos});
                else
                    tr.pts.push_back({ext[best].pos, c});
                tr.last = ext[best].pos;
                tr.miss = 0;
            } else {
                ++tr.miss;
            }
        }
        auto mid = std::stable_partition(active.begin(), active.end(),
                                         [max_miss](const Track& t) { return t.miss <= max_miss; });
        for (auto it = mid; it != active.end(); ++it) done.push_back(std::move(*it));
        active.erase(mid, active.end());
        for (std::size_t m = 0; m < ext.size(); ++m) {
            if (used[m]) continue;
            Track t;
            t.polarity = ext[m].polarity;
            t.last = ext[m].pos;
            const double c = slice_coord[s];
            if (direction == 't')
                t.pts.push_back({c, ext[m].pos});
            else
                t.pts.push_back({ext[m].pos, c});
            active.push_back(std::move(t));
        }
    }
    for (auto& t : active) done.push_back(std::move(t));

    std::vector<Ridge> ridges;
    for (auto& t : done) {
        if (t.pts.size() < 5) continue;
        Ridge r;
        r.points = std::move(t.pts);
        std::sort(r.points.begin(), r.points.end(),
                  [](const RidgePoint& a, const RidgePoint& b) { return a.t < b.t; });
        r.polarity = t.polarity;
        r.direction = direction;
        ridges.push_back(std::move(r));
    }
    return ridges;
}

}  // namespace

std::vector<ActivationPoint> activation_times(const CorrelationMap& map, double eta,
                                              double noise_floor) {
    if (!(eta > 0 && eta < 1)) throw DomainError("activation_times: eta in (0,1) required");
    map.check();
    std::vector<ActivationPoint> out;
    for (std::size_t i = 0; i < map.nR(); ++i) {
        double rowmax = 0;
        for (std::size_t j = 0; j < map.nT(); ++j) {
            const double v = std::abs(map.at(i, j));
            if (!std::isnan(v) && v > rowmax) rowmax = v;
        }
        if (rowmax < noise_floor) continue;
        const double thr = eta * rowmax;
        for (std::size_t j = 0; j < map.nT(); ++j) {
            const double v = std::abs(map.at(i, j));
            if (std::isnan(v) || v < thr) continue;
            double tstar = map.t_values[j];
            if (j > 0 && !std::isnan(map.at(i, j - 1))) {
                const double v0 = std::abs(map.at(i, j - 1));
                const double t0 = map.t_values[j - 1];
                if (v > v0) tstar = t0 + (thr - v0) * (map.t_values[j] - t0) / (v - v0);
            }
            out.push_back({map.R_values[i], tstar});
            break;
        }
    }
    if (out.empty()) throw EmptySignal("activation_times: no row above the noise floor");
    return out;
}

std::vector<Ridge> extrema_ridges(const CorrelationMap& map, double noise_floor) {
    map.check();
    if (map.nT() < 3) throw DomainError("extrema_ridges: need at least 3 time samples");
    std::vector<std::vector<Extremum>> slices(map.nR());
    std::vector<double> coord(map.nR());
    std::vector<double> row(map.nT());
    for (std::size_t i = 0; i < map.nR(); ++i) {
        double rowmax = 0;
        for (std::size_t j = 0; j < map.nT(); ++j) {
            row[j] = map.at(i, j);
            if (!std::isnan(row[j])) rowmax = std::max(rowmax, std::abs(row[j]));
        }
        if (rowmax >= noise_floor) slices[i] = local_extrema(map.t_values, row);
        coord[i] = map.R_values[i];
    }
    return link_tracks(slices, coord, 't', 1);
}

std::vector<Ridge> spatial_ridges(const CorrelationMap& map, double noise_floor) {
    map.check();
    if (map.nR() < 3) return {};
    std::vector<double> Rs(map.nR());
    for (std::size_t i = 0; i < map.nR(); ++i) Rs[i] = map.R_values[i];
    std::vector<std::vector<Extremum>> slices(map.nT());
    std::vector<double> col(map.nR());
    for (std::size_t j = 0; j < map.nT(); ++j) {
        double colmax = 0;
        for (std::size_t i = 0; i < map.nR(); ++i) {
            col[i] = map.at(i, j);
            if (!std::isnan(col[i])) colmax = std::max(colmax, std::abs(col[i]));
        }
        if (colmax >= noise_floor) slices[j] = local_extrema(Rs, col);
    }
    return link_tracks(slices, map.t_values, 'x', 3);
}

VelocityFit fit_velocity(const std::vector<RidgePoint>& points, double window_rmin,
                         double window_rmax) {
    std::vector<RidgePoint> sel;
    for (const auto& p : points)
        if (p.R >= window_rmin && p.R <= window_rmax) sel.push_back(p);
    if (sel.size() < 3)
        throw InsufficientPoints("fit_velocity: fewer than 3 points inside the window");
    double tm = 0, Rm = 0;
    for (const auto& p : sel) {
        tm += p.t;
        Rm += p.R;
    }
    tm /= sel.size();
    Rm /= sel.size();
    double stt = 0, str = 0;
    for (const auto& p : sel) {
        stt += (p.t - tm) * (p.t - tm);
        str += (p.t - tm) * (p.R - Rm);
    }
    if (stt == 0) throw InsufficientPoints("fit_velocity: degenerate time spread");
    VelocityFit fit;
    fit.velocity = str / stt;
    fit.intercept = Rm - fit.velocity * tm;
    double ss = 0;
    for (const auto& p : sel) {
        const double r = p.R - fit.intercept - fit.velocity * p.t;
        ss += r * r;
    }
    fit.n_points = static_cast<int>(sel.size());
    fit.residual_rms = std::sqrt(ss / sel.size());
    const double s2 = ss / std::max<std::size_t>(sel.size() - 2, 1);
    fit.stderr_v = std::sqrt(s2 / stt);
    fit.window_rmin = window_rmin;
    fit.window_rmax = window_rmax;
    return fit;
}

TwofoldReport twofold_report(const CorrelationMap& map, const TwofoldOptions& opts,
                             const VelocitySet* prediction) {
    map.check();
    TwofoldReport rep;
    rep.kind = map.kind;
    rep.eta = opts.eta;

    double rmax = opts.window_rmax;
    if (std::isnan(rmax)) {
        auto it = map.metadata.find("M");
        if (it != map.metadata.end())
            rmax = std::stod(it->second) / 2.0 - 2.0;
        else
            rmax = map.R_values.back() - 2.0;
    }
    rep.window_rmin = opts.window_rmin;
    rep.window_rmax = rmax;

    const auto act = activation_times(map, opts.eta, opts.noise_floor);
    std::vector<RidgePoint> act_pts;
    for (const auto& a : act) act_pts.push_back({static_cast<double>(a.R), a.t_star});
    rep.v_ce = fit_velocity(act_pts, opts.window_rmin, rmax);
    rep.v_ce.method = "ACTIVATION";
    const double vce = rep.v_ce.velocity;
    const double a0 = rep.v_ce.intercept;
    auto t_front = [vce, a0](double R) { return (R - a0) / vce; };

    std::vector<Ridge> all;
    try {
        auto rt = extrema_ridges(map, opts.noise_floor);
        all.insert(all.end(), rt.begin(), rt.end());
    } catch (const DomainError&) {
    }
    auto rx = spatial_ridges(map, opts.noise_floor);
    all.insert(all.end(), rx.begin(), rx.end());

    const double dt_sample =
        map.nT() > 1 ? map.t_values[1] - map.t_values[0] : map.t_values[0];
    for (const auto& ridge : all) {
        std::vector<RidgePoint> win;
        for (const auto& p : ridge.points)
            if (p.R >= opts.window_rmin && p.R <= rmax) win.push_back(p);
        if (win.size() < 3) continue;
        RidgeFit rf;
        rf.direction = ridge.direction;
        rf.polarity = ridge.polarity;
        rf.n_points = static_cast<int>(win.size());
        VelocityFit whole;
        try {
            whole = fit_velocity(win, opts.window_rmin, rmax);
        } catch (const InsufficientPoints&) {
            continue;
        }
        rf.whole_velocity = whole.velocity;
        rf.whole_rms = whole.residual_rms;
        double dist = 0;
        for (const auto& p : win) dist += std::abs(p.R - (a0 + vce * p.t));
        rf.front_dist = dist / win.size();
        rf.front_coincident = rf.front_dist < opts.front_dist_tol &&
                              std::abs(rf.whole_velocity - vce) <
                                  opts.front_slope_tol * std::abs(vce);
        // Head segment: the earliest-time points carry the near-front slope.
        std::vector<RidgePoint> head(win.begin(),
                                     win.begin() + std::min<std::size_t>(
                                                       win.size(), opts.head_points));
        try {
            auto hf = fit_velocity(head, opts.window_rmin, rmax);
            rf.head_velocity = hf.velocity;
            rf.stderr_v = hf.stderr_v;
        } catch (const InsufficientPoints&) {
            continue;
        }
        const bool straight = rf.whole_rms < opts.straight_rms_tol;
        rf.velocity = straight ? rf.whole_velocity : rf.head_velocity;
        if (straight) rf.stderr_v = whole.stderr_v;
        double lag = 0;
        for (const auto& p : head) lag += p.t - t_front(p.R);
        rf.lag = lag / head.size();
        rep.ridges.push_back(rf);
    }

    std::vector<std::size_t> surv;
    for (std::size_t i = 0; i < rep.ridges.size(); ++i)
        if (!rep.ridges[i].front_coincident) surv.push_back(i);
    std::sort(surv.begin(), surv.end(), [&](std::size_t a, std::size_t b) {
        return rep.ridges[a].lag < rep.ridges[b].lag;
    });
    if (surv.size() > static_cast<std::size_t>(opts.max_ridges))
        surv.resize(opts.max_ridges);

    if (surv.empty()) {
        // No extrema feature distinct from the edge.
        rep.single_cone = true;
        for (const auto& rf : rep.ridges)
            if (rf.front_coincident) {
                rep.v_m = rf.whole_velocity;
                rep.v_m_err = rf.stderr_v;
                break;
            }
        if (std::isnan(rep.v_m) && !rep.ridges.empty()) {
            rep.v_m = rep.ridges.front().velocity;
            rep.v_m_err = rep.ridges.front().stderr_v;
        }
    } else {
        double wsum = 0, vsum = 0;
        const double eps = 1e-4 * dt_sample * dt_sample + 1e-12;
        for (std::size_t i : surv) {
            auto& rf = rep.ridges[i];
            rf.used_in_vm = true;
            const double w = 1.0 / (rf.stderr_v * rf.stderr_v + eps);
            wsum += w;
            vsum += w * rf.velocity;
        }
        rep.v_m = vsum / wsum;
        double var = 0;
        for (std::size_t i : surv) {
            const double d = rep.ridges[i].velocity - rep.v_m;
            var += d * d;
        }
        rep.v_m_err = surv.size() > 1 ? std::sqrt(var / (surv.size() * (surv.size() - 1)))
                                      : rep.ridges[surv[0]].stderr_v;
        if (std::abs(rep.v_m - vce) < opts.single_cone_tol * std::abs(vce))
            rep.single_cone = true;
    }

    if (prediction) {
        rep.prediction = *prediction;
        if (prediction->V_ce_pred != 0)
            rep.rel_dev_ce = (vce - prediction->V_ce_pred) / prediction->V_ce_pred;
        if (prediction->V_m_pred != 0 && !std::isnan(rep.v_m))
            rep.rel_dev_m = (rep.v_m - prediction->V_m_pred) / prediction->V_m_pred;
    }
    return rep;
}

std::string format_report(const TwofoldReport& rep) {
    std::ostringstream ss;
    ss << "format = bhq-twofold-1\n";
    ss << "kind = " << rep.kind << "\n";
    ss << "eta = " << fmt_double(rep.eta) << "\n";
    ss << "window_rmin = " << fmt_double(rep.window_rmin) << "\n";
    ss << "window_rmax = " << fmt_double(rep.window_rmax) << "\n";
    ss << "V_CE = " << fmt_double(rep.v_ce.velocity) << "\n";
    ss << "V_CE_err = " << fmt_double(rep.v_ce.stderr_v) << "\n";
    ss << "V_CE_n_points = " << rep.v_ce.n_points << "\n";
    ss << "V_m = " << fmt_double(rep.v_m) << "\n";
    ss << "V_m_err = " << fmt_double(rep.v_m_err) << "\n";
    ss << "flags = " << (rep.single_cone ? "SINGLE_CONE" : "") << "\n";
    if (rep.prediction) {
        ss << "V_CE_pred = " << fmt_double(rep.prediction->V_ce_pred) << "\n";
        ss << "V_m_pred = " << fmt_double(rep.prediction->V_m_pred) << "\n";
        ss << "rel_dev_CE = " << fmt_double(rep.rel_dev_ce) << "\n";
        ss << "rel_dev_m = " << fmt_double(rep.rel_dev_m) << "\n";
    }
    ss << "n_ridges = " << rep.ridges.size() << "\n";
    for (const auto& r : rep.ridges) {
        ss << "ridge = dir:" << r.direction << " pol:" << (r.polarity > 0 ? "max" : "min")
           << " v:" << fmt_double(r.velocity) << " err:" << fmt_double(r.stderr_v)
           << " lag:" << fmt_double(r.lag) << " head_v:" << fmt_double(r.head_velocity)
           << " whole_v:" << fmt_double(r.whole_velocity) << " rms:" << fmt_double(r.whole_rms)
           << " front_dist:" << fmt_double(r.front_dist) << " n:" << r.n_points
           << (r.front_coincident ? " front" : "") << (r.used_in_vm ? " used" : "") << "\n";
    }
    return ss.str();
}

void write_report(const TwofoldReport& rep, const std::string& path) {
    atomic_write_file(path, format_report(rep));
}

}  // namespace bhq
