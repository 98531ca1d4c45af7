#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace bhq {

// Runs fn(i) for i in [0, n). Work is split into contiguous chunks over at most
// max_threads workers; each index writes only its own outputs, so results are
// identical to the serial loop regardless of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  unsigned max_threads = 0);

// Worker count resolved from the BHQ_WORKERS environment variable, falling back
// to the hardware concurrency.
unsigned worker_count();

// Writes content to path via a temporary file in the same directory followed by
// an atomic rename.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// Shortest round-trip decimal formatting ("%.17g" trimmed); used for all
// numeric file output so identical inputs give byte-identical files.
std::string fmt_double(double x);

std::vector<std::string> split(const std::string& s, char delim);
std::string trim(const std::string& s);

// Parses "a:b:step" or a comma list into a numeric grid.
std::vector<double> parse_grid(const std::string& s);

}  // namespace bhq
