#pragma once

#include <string>
#include <vector>

#include "tailchain/errors.hpp"

namespace tailchain {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

/// Empirical return series read from a single-column CSV.
struct ReturnSeries {
    std::vector<double> values;
    std::string source;
    long long skipped = 0; // malformed rows dropped during ingestion
};

/// Reads one numeric column; an unparsable first line is treated as a
/// header, later malformed rows and non-finite values are skipped and
/// counted. LF and CRLF both accepted. Throws IoError when the file
/// cannot be read.
ReturnSeries read_return_series(const std::string& path);

} // namespace tailchain
