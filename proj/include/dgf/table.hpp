#pragma once

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "params.hpp"

#ifndef DGF_VERSION
#define DGF_VERSION "0.1.0"
#endif

namespace dgf {

using json = nlohmann::json;

struct IoError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct SweepTable
{
    std::vector<std::string> columns;
    std::vector<std::string> units;
    std::vector<std::vector<double>> rows;
    json manifest = json::object();

    SweepTable() = default;
    SweepTable(std::vector<std::string> cols, std::vector<std::string> u = {}) : columns(std::move(cols)), units(std::move(u))
    {
        if (units.empty()) units.assign(columns.size(), "");
        if (units.size() != columns.size()) throw std::invalid_argument("units and columns differ in length");
    }

    void add_row(std::vector<double> r)
    {
        if (r.size() != columns.size())
            throw std::invalid_argument("row has " + std::to_string(r.size()) + " cells, table has " +
                                        std::to_string(columns.size()) + " columns");
        rows.push_back(std::move(r));
    }

    int column_index(const std::string& name) const
    {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return static_cast<int>(i);
        throw std::out_of_range("no column named " + name);
    }

    std::vector<double> column(const std::string& name) const
    {
        const int c = column_index(name);
        std::vector<double> out;
        for (const auto& r : rows) out.push_back(r[c]);
        return out;
    }
};

// 17 significant digits, round-trips through strtod.
inline std::string format_double(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

inline double parse_double(const std::string& s)
{
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    // from_chars keeps subnormals, which stod rejects as out of range
    double x = 0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, x);
    if (ec == std::errc::invalid_argument || s.empty()) throw std::invalid_argument("not a number: '" + s + "'");
    if (ptr != end) throw std::invalid_argument("trailing characters in number '" + s + "'");
    return x;
}

inline json params_json(const ModelParams& p)
{
    return json{{"L", p.L},
                {"u_up", p.u_up},
                {"v_up", p.v_up},
                {"u_dn", p.u_dn},
                {"v_dn", p.v_dn},
                {"gamma_up", p.gamma_up},
                {"gamma_dn", p.gamma_dn},
                {"t", p.t},
                {"bc_up", to_string(p.bc_up)},
                {"bc_dn", to_string(p.bc_dn)},
                {"disorder_lambda", p.disorder_lambda},
                {"disorder_shared", p.disorder_shared},
                {"nrh_strength", p.nrh_strength},
                {"include_dgf", p.include_dgf}};
}

inline std::string utc_timestamp()
{
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

inline json make_manifest(const ModelParams& p, const std::string& command, double wall_time_s)
{
    json m{{"command", command},
           {"params", params_json(p)},
           {"seed", p.disorder_seed},
           {"code_version", DGF_VERSION},
           {"wall_time_s", wall_time_s},
           {"created", utc_timestamp()}};
    if (p.disorder_lambda > 0) m["disorder_seed"] = p.disorder_seed;
    return m;
}

enum class Format { csv, json };

inline Format parse_format(const std::string& s)
{
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw std::invalid_argument("format must be csv or json (got '" + s + "')");
}

inline std::string manifest_path(const std::string& csv_path) { return csv_path + ".manifest.json"; }

inline std::string csv_body(const SweepTable& t)
{
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += '\n';
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + format_double(r[i]);
        out += '\n';
    }
    return out;
}

namespace detail {

inline void write_file(const std::string& path, const std::string& data)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f << data;
    f.close();
    if (!f) throw IoError("write failed for " + path);
}

inline std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for reading");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline json cell_json(double x)
{
    if (std::isfinite(x)) return x;
    return format_double(x);
}

inline double cell_value(const json& j)
{
    if (j.is_string()) return parse_double(j.get<std::string>());
    return j.get<double>();
}

} // namespace detail

inline json table_json(const SweepTable& t)
{
    json rows = json::array();
    for (const auto& r : t.rows) {
        json jr = json::array();
        for (double x : r) jr.push_back(detail::cell_json(x));
        rows.push_back(jr);
    }
    return json{{"columns", t.columns}, {"units", t.units}, {"rows", rows}, {"manifest", t.manifest}};
}

// CSV goes to path, the manifest to path + ".manifest.json"; JSON holds both.
inline void emit(const SweepTable& t, const std::string& path, Format fmt)
{
    if (fmt == Format::csv) {
        detail::write_file(path, csv_body(t));
        json side = t.manifest;
        side["columns"] = t.columns;
        side["units"] = t.units;
        detail::write_file(manifest_path(path), side.dump(2) + "\n");
    } else {
        detail::write_file(path, table_json(t).dump(2) + "\n");
    }
}

inline SweepTable read_csv(const std::string& path)
{
    std::istringstream in(detail::read_file(path));
    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": missing header row");
    SweepTable t(detail::split(line));
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = detail::split(line);
        if (cells.size() != t.columns.size())
            throw IoError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(t.columns.size()) +
                          " cells");
        std::vector<double> r;
        for (const auto& c : cells) r.push_back(parse_double(c));
        t.rows.push_back(std::move(r));
    }
    std::ifstream side(manifest_path(path));
    if (side) {
        json m = json::parse(side);
        if (m.contains("units")) t.units = m["units"].get<std::vector<std::string>>();
        m.erase("columns");
        m.erase("units");
        t.manifest = m;
    }
    return t;
}

inline SweepTable read_json(const std::string& path)
{
    json j;
    try {
        j = json::parse(detail::read_file(path));
    } catch (const json::parse_error& e) {
        throw IoError(path + ": " + e.what());
    }
    SweepTable t(j.at("columns").get<std::vector<std::string>>(), j.at("units").get<std::vector<std::string>>());
    for (const auto& jr : j.at("rows")) {
        std::vector<double> r;
        for (const auto& c : jr) r.push_back(detail::cell_value(c));
        t.add_row(std::move(r));
    }
    t.manifest = j.value("manifest", json::object());
    return t;
}

inline SweepTable read_table(const std::string& path, Format fmt)
{
    return fmt == Format::csv ? read_csv(path) : read_json(path);
}

} // namespace dgf
