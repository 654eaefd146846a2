#pragma once

#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "smkp/constants.hpp"
#include "smkp/model.hpp"
#include "smkp/version.hpp"

namespace smkp {

class IoError : public Error {
public:
    using Error::Error;
};

// Malformed input file; the message carries line / field diagnostics.
class ParseError : public IoError {
public:
    using IoError::IoError;
};

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline int line_of_offset(std::string_view text, std::size_t offset) {
    int line = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

} // namespace detail

// Molecule records as stored on disk: spectroscopic units, converted on load.
inline std::vector<MoleculeParams> parse_molecules(std::string_view text,
                                                   const PhysicalConstants& pc = default_constants(),
                                                   const std::string& source = "<input>") {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(source + ":" + std::to_string(detail::line_of_offset(text, e.byte)) +
                         ": " + e.what());
    }
    if (!doc.is_array()) throw ParseError(source + ": top level must be an array of records");

    static const char* const required[] = {"name", "De_cm1", "re_A", "mu_amu", "delta_A1"};
    std::vector<MoleculeParams> out;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& rec = doc[i];
        const std::string where = source + ": record " + std::to_string(i);
        if (!rec.is_object()) throw ParseError(where + " is not an object");
        for (const auto& [key, _] : rec.items()) {
            bool known = key == "q";
            for (const char* r : required) known = known || key == r;
            if (!known) throw ParseError(where + ": unknown field '" + key + "'");
        }
        for (const char* r : required)
            if (!rec.contains(r)) throw ParseError(where + ": missing field '" + r + "'");
        if (!rec["name"].is_string()) throw ParseError(where + ": field 'name' must be a string");
        auto number = [&](const char* key) {
            if (!rec[key].is_number())
                throw ParseError(where + ": field '" + key + "' must be a number");
            return rec[key].get<double>();
        };
        MoleculeParams m;
        m.name = rec["name"].get<std::string>();
        m.D_e = convert_wavenumber_to_ev(number("De_cm1"), pc);
        m.r_e = number("re_A");
        m.mu = convert_amu_to_ev(number("mu_amu"), pc);
        m.delta = number("delta_A1");
        m.q = rec.contains("q") ? number("q") : 1.0;
        try {
            m.validate();
        } catch (const InvalidParameter& e) {
            throw InvalidParameter(where + ": " + e.what());
        }
        out.push_back(std::move(m));
    }
    return out;
}

inline std::vector<MoleculeParams> load_molecules(const std::filesystem::path& path,
                                                  const PhysicalConstants& pc = default_constants()) {
    return parse_molecules(detail::read_file(path), pc, path.string());
}

inline std::optional<MoleculeParams> find_molecule(const std::vector<MoleculeParams>& all,
                                                   std::string_view name) {
    for (const auto& m : all)
        if (m.name == name) return m;
    return std::nullopt;
}

struct Table1Entry {
    int block = 0;
    double b_field = 0.0;
    double xi = 0.0;
    double alpha = 1.0;
    int m = 0;
    int n = 0;
    double energy = 0.0;

    [[nodiscard]] bool magnetic() const noexcept { return b_field != 0.0; }
};

struct Table2Entry {
    double q = 1.0;
    int n = 0;
    int ell = 0;
    double energy = 0.0;
};

namespace detail {

// Data rows of a small CSV file: '#' comment lines skipped, header checked.
inline std::vector<std::vector<std::string>> read_csv_rows(const std::filesystem::path& path,
                                                           std::string_view expected_header) {
    std::istringstream in(read_file(path));
    std::string line;
    bool seen_header = false;
    int lineno = 0;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!seen_header) {
            if (line != expected_header)
                throw ParseError(path.string() + ":" + std::to_string(lineno) +
                                 ": expected header '" + std::string(expected_header) + "'");
            seen_header = true;
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        cells.push_back(std::to_string(lineno));
        rows.push_back(std::move(cells));
    }
    if (!seen_header) throw ParseError(path.string() + ": missing header");
    return rows;
}

inline double to_double(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(where + ": '" + s + "' is not a number");
    }
}

inline int to_int(const std::string& s, const std::string& where) {
    const double v = to_double(s, where);
    if (v != std::floor(v)) throw ParseError(where + ": '" + s + "' is not an integer");
    return static_cast<int>(v);
}

} // namespace detail

inline std::vector<Table1Entry> load_table1(const std::filesystem::path& path) {
    std::vector<Table1Entry> out;
    for (const auto& c : detail::read_csv_rows(path, "block,B_T,xi,alpha,m,n,E_eV")) {
        const std::string where = path.string() + ":" + c.back();
        if (c.size() != 8) throw ParseError(where + ": expected 7 columns");
        out.push_back({detail::to_int(c[0], where), detail::to_double(c[1], where),
                       detail::to_double(c[2], where), detail::to_double(c[3], where),
                       detail::to_int(c[4], where), detail::to_int(c[5], where),
                       detail::to_double(c[6], where)});
    }
    return out;
}

inline std::vector<Table2Entry> load_table2(const std::filesystem::path& path) {
    std::vector<Table2Entry> out;
    for (const auto& c : detail::read_csv_rows(path, "q,n,l,E_eV")) {
        const std::string where = path.string() + ":" + c.back();
        if (c.size() != 5) throw ParseError(where + ": expected 4 columns");
        out.push_back({detail::to_double(c[0], where), detail::to_int(c[1], where),
                       detail::to_int(c[2], where), detail::to_double(c[3], where)});
    }
    return out;
}

// Nine significant digits. printf rounds the exact binary value to nearest,
// ties to even.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

private:
    std::ostream& out_;
};

struct RunManifest {
    std::string command;
    nlohmann::json parameters = nlohmann::json::object();
    std::string timestamp;
    std::string code_version = version_string;

    [[nodiscard]] nlohmann::json to_json() const {
        return {{"command", command},
                {"parameters", parameters},
                {"timestamp", timestamp},
                {"code_version", code_version}};
    }
};

inline std::string iso8601_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::filesystem::path manifest_path(const std::filesystem::path& out) {
    return std::filesystem::path(out.string() + ".manifest.json");
}

inline void write_manifest(const RunManifest& m, const std::filesystem::path& out) {
    std::ofstream f(manifest_path(out), std::ios::binary);
    if (!f) throw IoError("cannot write '" + manifest_path(out).string() + "'");
    f << m.to_json().dump(2) << '\n';
}

} // namespace smkp
