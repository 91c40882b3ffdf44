#include "maxproj/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include "maxproj/errors.hpp"

namespace maxproj {

namespace {

std::string trim_lower(std::string s) {
    auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double parse_number(const std::string& raw, long line, const std::string& column) {
    std::string s = trim_lower(raw);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
        throw InputError("line " + std::to_string(line) + ": column '" + column + "': cannot parse '" + raw +
                         "' as a number");
    return v;
}

const char* kSchemas = "accepted schemas: 'lat,lon' (degrees, d = 3) or 'x1,...,xd' (d >= 2)";

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    if (quoted) throw InputError("unterminated quoted field");
    out.push_back(cur);
    return out;
}

IngestResult ingest(std::istream& in, const IngestOptions& opt) {
    std::string line;
    long lineno = 0;
    // Header: first non-empty line.
    while (std::getline(in, line)) {
        ++lineno;
        if (!trim_lower(line).empty()) break;
    }
    if (trim_lower(line).empty()) throw InputError("empty input: no header row; " + std::string(kSchemas));
    std::vector<std::string> header;
    try {
        header = split_csv_line(line);
    } catch (const InputError& e) {
        throw InputError("line " + std::to_string(lineno) + ": " + e.what());
    }
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[trim_lower(header[i])] = i;

    IngestReport rep;
    std::vector<std::size_t> coord_cols;
    auto find_any = [&](std::initializer_list<const char*> names) -> std::optional<std::size_t> {
        for (const char* n : names)
            if (auto it = col.find(n); it != col.end()) return it->second;
        return std::nullopt;
    };
    const auto lat = find_any({"lat", "latitude"});
    const auto lon = find_any({"lon", "long", "longitude"});
    if (lat && lon) {
        rep.schema = "latlon";
        rep.d = 3;
        coord_cols = {*lat, *lon};
    } else {
        for (int i = 1;; ++i) {
            auto it = col.find("x" + std::to_string(i));
            if (it == col.end()) break;
            coord_cols.push_back(it->second);
        }
        if (coord_cols.size() < 2) throw InputError("unknown schema in header '" + line + "'; " + kSchemas);
        rep.schema = "cartesian";
        rep.d = static_cast<int>(coord_cols.size());
    }
    std::optional<std::size_t> filter_col;
    if (opt.min_value) {
        auto it = col.find(trim_lower(opt.filter_column));
        if (it == col.end())
            throw InputError("filter column '" + opt.filter_column + "' not present in header");
        filter_col = it->second;
    }

    SphericalSample sample(rep.d);
    std::vector<double> v(static_cast<std::size_t>(rep.d));
    while (std::getline(in, line)) {
        ++lineno;
        if (trim_lower(line).empty()) continue;
        ++rep.rows_read;
        std::vector<std::string> f;
        try {
            f = split_csv_line(line);
        } catch (const InputError& e) {
            throw InputError("line " + std::to_string(lineno) + ": " + e.what());
        }
        if (f.size() != header.size())
            throw InputError("line " + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                             " fields, found " + std::to_string(f.size()));
        if (filter_col) {
            const double fv = parse_number(f[*filter_col], lineno, opt.filter_column);
            if (fv < *opt.min_value) {
                ++rep.filtered;
                continue;
            }
        }
        if (rep.schema == "latlon") {
            const double la = parse_number(f[coord_cols[0]], lineno, "lat");
            const double lo = parse_number(f[coord_cols[1]], lineno, "lon");
            if (la < -90.0 || la > 90.0 || lo < -180.0 || lo >= 360.0)
                throw InputError("line " + std::to_string(lineno) + ": lat/lon out of range");
            const auto u = latlon_to_unit(la, lo);
            sample.push_back(u.coords());
            ++rep.kept;
            continue;
        }
        for (std::size_t i = 0; i < coord_cols.size(); ++i)
            v[i] = parse_number(f[coord_cols[i]], lineno, header[coord_cols[i]]);
        const auto status = normalize_in_place(v);
        if (status == NormalizeStatus::rejected) {
            ++rep.skipped;
            rep.notes.push_back("line " + std::to_string(lineno) + ": norm below 1e-8, row skipped");
            continue;
        }
        if (status == NormalizeStatus::repaired) ++rep.repaired;
        sample.push_back(v);
        ++rep.kept;
    }
    return {std::move(sample), std::move(rep)};
}

IngestResult ingest_file(const std::string& path, const IngestOptions& opt) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open data file '" + path + "'");
    return ingest(in, opt);
}

}  // namespace maxproj
