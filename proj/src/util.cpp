#include "bhq/util.hpp"

#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "bhq/errors.hpp"

namespace bhq {

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  unsigned max_threads) {
    if (n == 0) return;
    unsigned nt = max_threads ? max_threads : worker_count();
    if (nt > n) nt = static_cast<unsigned>(n);
    if (nt <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    const std::size_t chunk = std::max<std::size_t>(1, n / (4 * nt));
    std::vector<std::thread> pool;
    pool.reserve(nt);
    std::atomic<bool> failed{false};
    for (unsigned w = 0; w < nt; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t begin = next.fetch_add(chunk);
                if (begin >= n || failed.load()) return;
                std::size_t end = std::min(begin + chunk, n);
                try {
                    for (std::size_t i = begin; i < end; ++i) fn(i);
                } catch (...) {
                    failed.store(true);
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failed.load()) throw std::runtime_error("parallel_for: worker failed");
}

unsigned worker_count() {
    if (const char* env = std::getenv("BHQ_WORKERS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

void atomic_write_file(const std::string& path, const std::string& content) {
    const auto tid = std::hash<std::thread::id>{}(std::this_thread::get_id());
    const std::string tmp = path + ".tmp" + std::to_string(tid & 0xffff);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("rename failed: " + path + " (" + std::strerror(errno) + ")");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fmt_double(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

std::vector<std::string> split(const std::string& s, char delim) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == delim) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> vals;
    const std::string t = trim(s);
    if (t.find(':') != std::string::npos) {
        auto parts = split(t, ':');
        if (parts.size() != 3) throw ParseError("grid must be lo:hi:step, got: " + s);
        double lo = std::stod(parts[0]), hi = std::stod(parts[1]), step = std::stod(parts[2]);
        if (step <= 0) throw ParseError("grid step must be > 0");
        for (double v = lo; v <= hi + 1e-12 * std::abs(step); v += step) vals.push_back(v);
    } else {
        for (const auto& p : split(t, ',')) {
            if (trim(p).empty()) continue;
            vals.push_back(std::stod(trim(p)));
        }
    }
    if (vals.empty()) throw ParseError("empty grid: " + s);
    return vals;
}

}  // namespace bhq
