#include "bhq/correlation_map.hpp"

#include <cmath>
#include <sstream>

#include "bhq/errors.hpp"
#include "bhq/util.hpp"

namespace bhq {

void CorrelationMap::check() const {
    if (kind != "G1" && kind != "G2") throw InvalidParameter("map kind must be G1 or G2");
    if (R_values.empty() || t_values.empty()) throw InvalidParameter("empty map grid");
    for (std::size_t i = 1; i < R_values.size(); ++i)
        if (R_values[i] <= R_values[i - 1])
            throw InvalidParameter("R grid must be strictly increasing");
    for (std::size_t j = 1; j < t_values.size(); ++j)
        if (t_values[j] <= t_values[j - 1])
            throw InvalidParameter("t grid must be strictly increasing");
    if (values.size() != R_values.size() * t_values.size())
        throw InvalidParameter("value matrix shape does not match grids");
    if (!magnitude.empty() && magnitude.size() != values.size())
        throw InvalidParameter("magnitude matrix shape does not match grids");
}

void write_map(const CorrelationMap& map, const std::string& path) {
    map.check();
    std::ostringstream data;
    const bool with_mag = map.has_magnitude();
    data << (with_mag ? "R,t,value,mag\n" : "R,t,value\n");
    for (std::size_t i = 0; i < map.nR(); ++i) {
        for (std::size_t j = 0; j < map.nT(); ++j) {
            data << map.R_values[i] << ',' << fmt_double(map.t_values[j]) << ','
                 << fmt_double(map.at(i, j));
            if (with_mag) data << ',' << fmt_double(map.mag(i, j));
            data << '\n';
        }
    }
    atomic_write_file(path, data.str());

    std::ostringstream meta;
    meta << "format = bhq-map-1\n";
    meta << "kind = " << map.kind << "\n";
    meta << "n_R = " << map.nR() << "\n";
    meta << "n_t = " << map.nT() << "\n";
    meta << "columns = " << (with_mag ? "R,t,value,mag" : "R,t,value") << "\n";
    for (const auto& [k, v] : map.metadata) meta << k << " = " << v << "\n";
    atomic_write_file(path + ".meta", meta.str());
}

CorrelationMap read_map(const std::string& path) {
    CorrelationMap map;
    bool with_mag = false;

    const std::string meta = read_file(path + ".meta");
    std::istringstream ms(meta);
    std::string line;
    while (std::getline(ms, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("bad metadata line: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "kind") map.kind = val;
        else if (key == "columns") with_mag = (val == "R,t,value,mag");
        else if (key != "format" && key != "n_R" && key != "n_t") map.metadata[key] = val;
    }

    const std::string body = read_file(path);
    std::istringstream bs(body);
    if (!std::getline(bs, line)) throw ParseError(path + ": empty map file");
    const std::string header = trim(line);
    if (header != "R,t,value" && header != "R,t,value,mag")
        throw ParseError(path + ": unexpected header '" + header + "'");
    with_mag = (header == "R,t,value,mag");

    std::vector<int> Rs;
    std::vector<double> ts;
    std::vector<double> vals, mags;
    std::size_t lineno = 1;
    int cur_R = 0;
    bool first = true;
    std::size_t nt_expect = 0, nt_cur = 0;
    while (std::getline(bs, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto cells = split(trim(line), ',');
        if (cells.size() != (with_mag ? 4u : 3u))
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected " +
                             (with_mag ? std::string("4") : std::string("3")) + " columns");
        int R;
        double t, v;
        try {
            R = std::stoi(cells[0]);
            t = std::stod(cells[1]);
            v = std::stod(cells[2]);
        } catch (const std::exception&) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": malformed number");
        }
        if (first || R != cur_R) {
            if (!first) {
                if (nt_expect == 0) nt_expect = nt_cur;
                else if (nt_cur != nt_expect)
                    throw ParseError(path + ":" + std::to_string(lineno) + ": ragged t grid");
            }
            Rs.push_back(R);
            cur_R = R;
            nt_cur = 0;
            first = false;
        }
        if (Rs.size() == 1) ts.push_back(t);
        ++nt_cur;
        vals.push_back(v);
        if (with_mag) {
            try {
                mags.push_back(std::stod(cells[3]));
            } catch (const std::exception&) {
                throw ParseError(path + ":" + std::to_string(lineno) + ": malformed number");
            }
        }
    }
    if (first) throw ParseError(path + ": no data rows");
    if (nt_expect == 0) nt_expect = nt_cur;
    if (nt_cur != nt_expect) throw ParseError(path + ": truncated final row block");

    map.R_values = std::move(Rs);
    map.t_values = std::move(ts);
    map.values = std::move(vals);
    map.magnitude = std::move(mags);
    map.check();
    return map;
}

}  // namespace bhq
