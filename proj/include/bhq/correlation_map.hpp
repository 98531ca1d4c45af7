#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace bhq {

// Discrete G(R, t) field with provenance metadata; the interchange object
// between engines and analysis. values is row-major over (R, t). G1 maps
// carry the real part in values plus a parallel magnitude matrix; G2 maps
// leave magnitude empty. Missing points are stored as NaN.
struct CorrelationMap {
    std::string kind = "G2";  // "G1" or "G2"
    std::vector<int> R_values;
    std::vector<double> t_values;
    std::vector<double> values;
    std::vector<double> magnitude;
    std::map<std::string, std::string> metadata;

    std::size_t nR() const { return R_values.size(); }
    std::size_t nT() const { return t_values.size(); }
    double& at(std::size_t i, std::size_t j) { return values[i * t_values.size() + j]; }
    double at(std::size_t i, std::size_t j) const { return values[i * t_values.size() + j]; }
    double& mag(std::size_t i, std::size_t j) { return magnitude[i * t_values.size() + j]; }
    double mag(std::size_t i, std::size_t j) const { return magnitude[i * t_values.size() + j]; }
    bool has_magnitude() const { return !magnitude.empty(); }

    // Throws InvalidParameter if grids are not strictly increasing or the
    // matrix shape does not match the grids.
    void check() const;
};

// Data file: delimiter-separated with header "R,t,value" ("R,t,value,mag" for
// G1 maps), one row per grid point, R-major, missing values written as nan.
// A sidecar "<path>.meta" holds "key = value" metadata lines plus the grid
// shape and kind. Writes are atomic (temp file + rename).
void write_map(const CorrelationMap& map, const std::string& path);

CorrelationMap read_map(const std::string& path);

}  // namespace bhq
