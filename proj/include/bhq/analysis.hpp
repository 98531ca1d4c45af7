#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bhq/correlation_map.hpp"
#include "bhq/dispersion.hpp"

namespace bhq {

struct ActivationPoint {
    int R;
    double t_star;
};

// Per-R activation times: earliest time |G(R,t)| reaches eta times the row
// maximum, refined by linear interpolation between the bracketing samples.
// Rows whose maximum is below noise_floor are skipped. Throws EmptySignal if
// nothing qualifies.
std::vector<ActivationPoint> activation_times(const CorrelationMap& map, double eta,
                                              double noise_floor = 1e-10);

struct RidgePoint {
    double R;
    double t;
};

// An extrema track. direction 't': per-R extrema in time linked across R.
// direction 'x': per-time-slice extrema in R linked across time (resolves
// carriers whose extrema barely move, which the t-direction tracker cannot
// see). polarity +1 for maxima, -1 for minima of the signed map value.
struct Ridge {
    std::vector<RidgePoint> points;  // ordered by increasing t
    int polarity = 0;
    char direction = 't';
};

// Local extrema in t per row, quadratic-refined, linked across adjacent R by
// nearest-in-t continuity gated at half the median inter-extremum spacing of
// the target row. Ridges shorter than 5 points are discarded.
std::vector<Ridge> extrema_ridges(const CorrelationMap& map, double noise_floor = 1e-10);

// Complementary tracker: local extrema in R per time slice, linked across
// adjacent samples by nearest-in-R continuity. Same gating and length rules.
std::vector<Ridge> spatial_ridges(const CorrelationMap& map, double noise_floor = 1e-10);

struct VelocityFit {
    double velocity = 0;
    double intercept = 0;  // of R = intercept + velocity * t
    double stderr_v = 0;
    int n_points = 0;
    double residual_rms = 0;
    std::string method;  // ACTIVATION or RIDGE
    double window_rmin = 0, window_rmax = 0;
};

// Ordinary least squares of R against t over points with R inside the window.
// Throws InsufficientPoints below 3 points.
VelocityFit fit_velocity(const std::vector<RidgePoint>& points, double window_rmin,
                         double window_rmax);

struct TwofoldOptions {
    double eta = 0.1;
    double noise_floor = 1e-10;
    // R fit window; NaN means derive from the map (M/2 - 2 for engine maps,
    // max R - 2 for analytic maps), with R_min = 4.
    double window_rmin = 4.0;
    double window_rmax = std::numeric_limits<double>::quiet_NaN();
    // Straight ridges (whole-track residual rms below straight_rms_tol sites)
    // are fitted over all windowed points; curved ones fall back to the OLS
    // slope of the head_points earliest points, which carries the near-front
    // velocity the paper's picture refers to.
    int head_points = 8;
    double straight_rms_tol = 0.5;
    // Number of nearest-front surviving ridges averaged into V_m.
    int max_ridges = 4;
    // A ridge is front-coincident (an image of the edge itself, excluded from
    // V_m) if its whole-track mean |R - R_front(t)| is below front_dist_tol
    // sites and its whole-track slope is within front_slope_tol of V_CE.
    double front_dist_tol = 1.0;
    double front_slope_tol = 0.15;
    // SINGLE_CONE when |V_m - V_CE| / V_CE falls below this, or when no ridge
    // survives the front-coincidence cut.
    double single_cone_tol = 0.1;
};

struct RidgeFit {
    double velocity = 0;  // selected estimate (whole-track if straight, else head)
    double stderr_v = 0;
    double lag = 0;  // mean t - t_front over the head points
    double head_velocity = 0;
    double whole_velocity = 0;
    double whole_rms = 0;   // whole-track residual rms, sites
    double front_dist = 0;  // whole-track mean |R - R_front(t)|
    bool front_coincident = false;
    bool used_in_vm = false;
    char direction = 't';
    int polarity = 0;
    int n_points = 0;
};

struct TwofoldReport {
    std::string kind;
    VelocityFit v_ce;
    double v_m = std::numeric_limits<double>::quiet_NaN();
    double v_m_err = std::numeric_limits<double>::quiet_NaN();
    bool single_cone = false;
    std::vector<RidgeFit> ridges;
    double eta = 0;
    double window_rmin = 0, window_rmax = 0;
    // Predictions, present when a dispersion prediction was supplied.
    std::optional<VelocitySet> prediction;
    double rel_dev_ce = std::numeric_limits<double>::quiet_NaN();
    double rel_dev_m = std::numeric_limits<double>::quiet_NaN();
};

// Full pipeline: activation fit -> V_CE; both ridge trackers -> per-ridge
// fits -> V_m as the error-weighted mean of the nearest-front non-front-
// coincident ridges; attaches relative deviations from the prediction.
TwofoldReport twofold_report(const CorrelationMap& map, const TwofoldOptions& opts,
                             const VelocitySet* prediction = nullptr);

// Structured-text serialization of a report ("key = value" lines plus one
// "ridge = ..." line per ridge).
std::string format_report(const TwofoldReport& rep);
void write_report(const TwofoldReport& rep, const std::string& path);

}  // namespace bhq
