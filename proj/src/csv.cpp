#include "tailchain/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace tailchain {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

bool parse_double(const std::string& s, double& out) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return false;
    std::size_t e = s.find_last_not_of(" \t");
    const char* first = s.data() + b;
    const char* last = s.data() + e + 1;
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

} // namespace

ReturnSeries read_return_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open input file: " + path);
    ReturnSeries series;
    series.source = path;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        double v;
        if (!parse_double(line, v)) {
            if (first) {
                first = false; // header line
                continue;
            }
            ++series.skipped;
            continue;
        }
        first = false;
        if (!std::isfinite(v)) {
            ++series.skipped;
            continue;
        }
        series.values.push_back(v);
    }
    if (in.bad()) throw IoError("read failure on: " + path);
    return series;
}

} // namespace tailchain
