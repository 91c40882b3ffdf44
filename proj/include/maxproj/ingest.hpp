#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "maxproj/geometry.hpp"

namespace maxproj {

struct IngestOptions {
    /// Keep only rows whose `filter_column` value is ≥ this.
    std::optional<double> min_value;
    std::string filter_column = "diameter_km";
};

struct IngestReport {
    std::string schema;  ///< "latlon" or "cartesian"
    int d = 0;
    long rows_read = 0;
    long kept = 0;
    long repaired = 0;
    long skipped = 0;   ///< rows that could not be normalized
    long filtered = 0;  ///< rows removed by the min-value filter
    std::vector<std::string> notes;
};

struct IngestResult {
    SphericalSample sample;
    IngestReport report;
};

/// Parses a header-led CSV with either lat,lon (degrees, d = 3) or x1..xd
/// columns. Malformed rows throw InputError naming the line; rows that cannot
/// be normalized are skipped and counted.
IngestResult ingest(std::istream& in, const IngestOptions& opt = {});
IngestResult ingest_file(const std::string& path, const IngestOptions& opt = {});

/// Splits one CSV record (RFC 4180 quoting, no embedded newlines).
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace maxproj
