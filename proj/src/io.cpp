/*
 * Copyright 2026 The geospm authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "geospm/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace geospm::io {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cell += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    out.push_back(cell);
    return out;
}

double parse_number(const std::string& text, std::size_t line, const std::string& column) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    while (end && *end == ' ') ++end;
    if (text.empty() || end == begin || *end != '\0')
        throw FormatError("line " + std::to_string(line) + ": column '" + column + "' is not a number: '" + text + "'");
    return v;
}

std::string quote_if_needed(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

Dataset read_dataset_csv(std::istream& in, const SpatialDomain& domain) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty CSV input");
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // UTF-8 BOM
    const auto header = split_csv_line(line);
    if (header.size() < 2 || header[0] != "x" || header[1] != "y")
        throw FormatError("CSV header must start with x,y");
    Dataset d;
    d.domain = domain;
    d.variable_names.assign(header.begin() + 2, header.end());
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw FormatError("line " + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                              " fields, found " + std::to_string(cells.size()));
        Observation o;
        o.location = {parse_number(cells[0], lineno, "x"), parse_number(cells[1], lineno, "y")};
        for (std::size_t c = 2; c < cells.size(); ++c) o.values.push_back(parse_number(cells[c], lineno, header[c]));
        d.observations.push_back(std::move(o));
    }
    return d;
}

void write_dataset_csv(std::ostream& out, const Dataset& dataset) {
    out << "x,y";
    for (const auto& n : dataset.variable_names) out << ',' << quote_if_needed(n);
    out << '\n';
    for (const auto& o : dataset.observations) {
        out << format_double(o.location.x) << ',' << format_double(o.location.y);
        for (double v : o.values) out << ',' << format_double(v);
        out << '\n';
    }
}

SpatialDomain bounding_domain(const Dataset& dataset, double cell_size) {
    double xmax = 0.0, ymax = 0.0;
    for (const auto& o : dataset.observations) {
        if (o.location.x < 0.0 || o.location.y < 0.0)
            throw FormatError("negative coordinates need an explicit domain");
        xmax = std::max(xmax, o.location.x);
        ymax = std::max(ymax, o.location.y);
    }
    return SpatialDomain(static_cast<int>(std::floor(xmax / cell_size)) + 1,
                         static_cast<int>(std::floor(ymax / cell_size)) + 1, {}, cell_size);
}

json domain_to_json(const SpatialDomain& d) {
    return {{"width", d.width()},
            {"height", d.height()},
            {"origin", {d.origin().x, d.origin().y}},
            {"cell_size", d.cell_size()}};
}

SpatialDomain domain_from_json(const json& j) {
    try {
        const auto origin = j.contains("origin") ? j.at("origin").get<std::vector<double>>() : std::vector<double>{0, 0};
        if (origin.size() != 2) throw FormatError("domain origin needs two coordinates");
        return SpatialDomain(j.at("width").get<int>(), j.at("height").get<int>(), {origin[0], origin[1]},
                             j.contains("cell_size") ? j.at("cell_size").get<double>() : 1.0);
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed domain: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Rasters

namespace {

void write_header(std::ostream& out, const SpatialDomain& d, const char* dtype) {
    out << kRasterMagic << " 1\n";
    out << "width " << d.width() << '\n';
    out << "height " << d.height() << '\n';
    out << "origin " << format_double(d.origin().x) << ' ' << format_double(d.origin().y) << '\n';
    out << "cell_size " << format_double(d.cell_size()) << '\n';
    out << "dtype " << dtype << '\n';
}

template <typename Get>
void write_rows(std::ostream& out, const SpatialDomain& d, Get get) {
    std::size_t v = 0;
    for (int k = 0; k < d.height(); ++k) {
        for (int j = 0; j < d.width(); ++j, ++v) {
            if (j) out << ' ';
            out << get(v);
        }
        out << '\n';
    }
}

std::string expect_key(std::istream& in, const char* key) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError(std::string("raster header ends before '") + key + "'");
    std::istringstream ls(line);
    std::string k;
    ls >> k;
    if (k != key) throw FormatError(std::string("raster header expected '") + key + "', found '" + k + "'");
    std::string rest;
    std::getline(ls, rest);
    return rest;
}

struct Header {
    SpatialDomain domain;
    std::string dtype;
};

Header read_header(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty raster input");
    std::istringstream magic(line);
    std::string m;
    int version = 0;
    magic >> m >> version;
    if (m != kRasterMagic) throw FormatError("not a raster file (missing " + std::string(kRasterMagic) + ")");
    if (version != 1) throw FormatError("unsupported raster version " + std::to_string(version));
    try {
        const int w = std::stoi(expect_key(in, "width"));
        const int h = std::stoi(expect_key(in, "height"));
        std::istringstream os(expect_key(in, "origin"));
        std::string ox, oy;
        os >> ox >> oy;
        const double cs = std::stod(expect_key(in, "cell_size"));
        std::istringstream ds(expect_key(in, "dtype"));
        Header hd;
        ds >> hd.dtype;
        if (hd.dtype != "float64" && hd.dtype != "bool") throw FormatError("unknown raster dtype '" + hd.dtype + "'");
        hd.domain = SpatialDomain(w, h, {std::stod(ox), std::stod(oy)}, cs);
        return hd;
    } catch (const std::logic_error& e) {
        throw FormatError(std::string("malformed raster header: ") + e.what());
    }
}

std::vector<double> read_values(std::istream& in, const Header& hd) {
    std::vector<double> values;
    values.reserve(hd.domain.cell_count());
    std::string token;
    while (in >> token) {
        const char* begin = token.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin || *end != '\0') throw FormatError("raster value is not a number: '" + token + "'");
        if (hd.dtype == "bool" && v != 0.0 && v != 1.0) throw FormatError("bool raster holds a value other than 0/1");
        values.push_back(v);
    }
    if (values.size() != hd.domain.cell_count())
        throw FormatError("raster holds " + std::to_string(values.size()) + " values, expected " +
                          std::to_string(hd.domain.cell_count()));
    return values;
}

}  // namespace

void write_field(std::ostream& out, const ScalarField& field) {
    write_header(out, field.domain(), "float64");
    write_rows(out, field.domain(), [&](std::size_t v) { return format_double(field[v]); });
}

void write_map(std::ostream& out, const BinaryMap& map) {
    write_header(out, map.domain(), "bool");
    write_rows(out, map.domain(), [&](std::size_t v) { return map[v] ? '1' : '0'; });
}

Raster read_raster(std::istream& in) {
    const Header hd = read_header(in);
    return {hd.dtype, ScalarField(hd.domain, read_values(in, hd))};
}

ScalarField read_field(std::istream& in) {
    auto r = read_raster(in);
    if (r.dtype != "float64") throw FormatError("expected a float64 raster, found " + r.dtype);
    return std::move(r.values);
}

BinaryMap read_map(std::istream& in) {
    auto r = read_raster(in);
    if (r.dtype != "bool") throw FormatError("expected a bool raster, found " + r.dtype);
    BinaryMap m(r.values.domain());
    for (std::size_t v = 0; v < m.size(); ++v) m.set(v, r.values[v] != 0.0);
    return m;
}

// ---------------------------------------------------------------------------
// Scores

void write_scores_header(std::ostream& out) {
    out << "model,n,parameter,repetition,variable,method,seed,generator,diameter,jaccard,dice,mcc,su,mhd,"
           "tp,fp,fn,tn,significant_cells,flags,failed,error\n";
}

void write_score_row(std::ostream& out, const harness::RunRow& r) {
    const auto& s = r.scores;
    out << quote_if_needed(r.model) << ',' << r.n << ',' << format_double(r.parameter) << ',' << r.repetition << ','
        << quote_if_needed(r.variable) << ',' << harness::to_string(r.method) << ',' << r.seed << ',' << r.generator
        << ',' << format_double(r.diameter) << ',' << format_double(s.jaccard) << ',' << format_double(s.dice) << ','
        << format_double(s.mcc) << ',' << format_double(s.su) << ',' << format_double(s.mhd) << ',' << s.counts.tp
        << ',' << s.counts.fp << ',' << s.counts.fn << ',' << s.counts.tn << ',' << r.significant_cells << ','
        << metrics::describe_flags(s.flags) << ',' << (r.failed ? 1 : 0) << ',' << quote_if_needed(r.error) << '\n';
}

void write_aggregate_csv(std::ostream& out, const std::vector<harness::AggregateRow>& rows) {
    out << "model,n,parameter,variable,method,runs";
    for (const char* m : metrics::kMetricNames) out << ',' << m << "_mean," << m << "_sd";
    out << ",mean_significant_cells,failures,single_run\n";
    for (const auto& r : rows) {
        out << quote_if_needed(r.model) << ',' << r.n << ',' << format_double(r.parameter) << ','
            << quote_if_needed(r.variable) << ',' << harness::to_string(r.method) << ',' << r.scores.n;
        for (const auto& m : r.scores.metrics) out << ',' << format_double(m.mean) << ',' << format_double(m.sd);
        out << ',' << format_double(r.mean_significant_cells) << ',' << r.failures << ','
            << (r.scores.single_run() ? 1 : 0) << '\n';
    }
}

json score_to_json(const metrics::ScoreRecord& r) {
    return {{"jaccard", r.jaccard},
            {"dice", r.dice},
            {"mcc", r.mcc},
            {"su", r.su},
            {"mhd", r.mhd},
            {"tp", r.counts.tp},
            {"fp", r.counts.fp},
            {"fn", r.counts.fn},
            {"tn", r.counts.tn},
            {"flags", metrics::describe_flags(r.flags)}};
}

json layout_to_json(const synthetic::LayoutSpec& layout) {
    json shapes = json::array();
    for (const auto& s : layout.shapes) {
        json j = {{"variant", synthetic::to_string(s.variant)},
                  {"center", {s.center.x, s.center.y}},
                  {"circumradius", s.circumradius},
                  {"depth", s.depth},
                  {"rotation", s.rotation},
                  {"label", s.label}};
        if (s.sector_labels) j["sector_labels"] = *s.sector_labels;
        shapes.push_back(std::move(j));
    }
    return {{"layout", synthetic::to_string(layout.layout)},
            {"domain", domain_to_json(layout.domain)},
            {"regions", layout.regions},
            {"shapes", shapes}};
}

}  // namespace geospm::io
