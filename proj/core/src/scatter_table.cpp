#include <cmath>
#include <fstream>
#include <sstream>

#include "surfride/error.hpp"
#include "surfride/sgisc.hpp"

namespace surfride {
namespace {

// Occurrences in tenths, Hs rows 0.5..16.5 m, Tz columns 3.5..18.5 s.
constexpr int kTenths[17 * 16] = {
    13, 1337, 8656, 11860, 6342, 1863, 369, 56, 7, 1, 0, 0, 0, 0, 0, 0,
    0, 293, 9860, 49760, 77380, 55697, 23757, 7035, 1607, 305, 51, 8, 1, 0, 0, 0,
    0, 22, 1975, 21588, 62300, 74495, 48604, 20660, 6445, 1602, 337, 63, 11, 2, 0, 0,
    0, 2, 349, 6955, 32265, 56750, 50991, 28380, 11141, 3377, 843, 182, 35, 6, 1, 0,
    0, 0, 60, 1961, 13543, 32885, 38575, 26855, 12752, 4551, 1309, 319, 69, 13, 2, 0,
    0, 0, 10, 510, 4984, 16029, 23727, 20083, 11260, 4636, 1509, 410, 97, 21, 4, 1,
    0, 0, 2, 126, 1670, 6903, 12579, 12686, 8259, 3868, 1408, 422, 109, 25, 5, 1,
    0, 0, 0, 30, 521, 2701, 5944, 7032, 5249, 2767, 1117, 367, 102, 25, 6, 1,
    0, 0, 0, 7, 154, 979, 2559, 3506, 2969, 1746, 776, 277, 84, 22, 5, 1,
    0, 0, 0, 2, 43, 332, 1019, 1599, 1522, 992, 483, 187, 61, 17, 4, 1,
    0, 0, 0, 0, 12, 107, 379, 675, 717, 515, 273, 114, 40, 12, 3, 1,
    0, 0, 0, 0, 3, 33, 133, 266, 314, 247, 142, 64, 24, 7, 2, 1,
    0, 0, 0, 0, 1, 10, 44, 99, 128, 110, 68, 33, 13, 4, 1, 0,
    0, 0, 0, 0, 0, 3, 14, 35, 50, 46, 31, 16, 7, 2, 1, 0,
    0, 0, 0, 0, 0, 1, 4, 12, 18, 18, 13, 7, 3, 1, 0, 0,
    0, 0, 0, 0, 0, 0, 1, 4, 6, 7, 5, 3, 1, 1, 0, 0,
    0, 0, 0, 0, 0, 0, 0, 1, 2, 2, 2, 1, 1, 0, 0, 0,
};

}  // namespace

double WaveScatterTable::total() const {
    double t = 0.0;
    for (double c : counts) t += c;
    return t;
}

void WaveScatterTable::validate() const {
    if (hs.empty() || tz.empty()) throw ValidationError("scatter: empty Hs or Tz bins");
    if (counts.size() != hs.size() * tz.size())
        throw ValidationError("scatter: counts size does not match Hs x Tz bins");
    for (double h : hs)
        if (!(h > 0.0)) throw ValidationError("scatter: Hs bin centres must be > 0");
    for (double t : tz)
        if (!(t > 0.0)) throw ValidationError("scatter: Tz bin centres must be > 0");
    for (double c : counts)
        if (!(c >= 0.0)) throw ValidationError("scatter: counts must be >= 0");
    if (!(total() > 0.0)) throw ValidationError("scatter: total occurrence must be > 0");
}

const WaveScatterTable& builtin_scatter_table() {
    static const WaveScatterTable table = [] {
        WaveScatterTable t;
        for (int i = 0; i < 17; ++i) t.hs.push_back(0.5 + i);
        for (int j = 0; j < 16; ++j) t.tz.push_back(3.5 + j);
        for (int v : kTenths) t.counts.push_back(v / 10.0);
        return t;
    }();
    return table;
}

WaveScatterTable parse_scatter_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    WaveScatterTable t;
    bool header = false;
    auto fields = [](const std::string& l) {
        std::vector<std::string> out;
        std::stringstream ss(l);
        std::string f;
        while (std::getline(ss, f, ',')) out.push_back(f);
        return out;
    };
    auto number = [&](const std::string& f) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(f, &pos);
            if (f.find_first_not_of(" \t\r", pos) != std::string::npos) throw std::invalid_argument(f);
            return v;
        } catch (const std::exception&) {
            throw ValidationError("scatter csv line " + std::to_string(line_no) +
                                  ": not a number '" + f + "'");
        }
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
        const auto f = fields(line);
        if (!header) {
            if (f.size() < 2)
                throw ValidationError("scatter csv line " + std::to_string(line_no) +
                                      ": header needs 'hs' and at least one Tz column");
            for (std::size_t k = 1; k < f.size(); ++k) t.tz.push_back(number(f[k]));
            header = true;
            continue;
        }
        if (f.size() != t.tz.size() + 1)
            throw ValidationError("scatter csv line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(t.tz.size() + 1) + " fields, got " +
                                  std::to_string(f.size()));
        t.hs.push_back(number(f[0]));
        for (std::size_t k = 1; k < f.size(); ++k) t.counts.push_back(number(f[k]));
    }
    if (!header) throw ValidationError("scatter csv: missing header row");
    t.validate();
    return t;
}

WaveScatterTable load_scatter_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot open scatter table '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_scatter_csv(ss.str());
}

}  // namespace surfride
