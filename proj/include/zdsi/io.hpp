#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "zdsi/graph.hpp"
#include "zdsi/multiterminal.hpp"
#include "zdsi/problem.hpp"
#include "zdsi/quantizer.hpp"
#include "zdsi/ri_codes.hpp"
#include "zdsi/seq_scheme.hpp"
#include "zdsi/stream_sim.hpp"

namespace zdsi {

// ---------------------------------------------------------------- problem files

namespace detail {

using nlohmann::json;

inline const json& field(const json& obj, const std::string& key)
{
    auto it = obj.find(key);
    if (it == obj.end()) fail(Errc::ParseError, "missing field '" + key + "'");
    return *it;
}

inline Alphabet read_alphabet(const json& j, const std::string& path, const std::string& name)
{
    if (!j.is_array()) fail(Errc::ParseError, path + ": expected an array of strings");
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_string()) fail(Errc::ParseError, path + "[" + std::to_string(i) + "]: expected a string");
        labels.push_back(j[i].get<std::string>());
    }
    try {
        return Alphabet(name, std::move(labels));
    } catch (const Error& e) {
        fail(Errc::ValidationError, path + ": " + e.message());
    }
}

inline Rational read_rational(const json& j, const std::string& path)
{
    std::string text;
    if (j.is_string())
        text = j.get<std::string>();
    else if (j.is_number_integer())
        text = std::to_string(j.get<long long>());
    else
        fail(Errc::ParseError, path + ": expected a \"num/den\" string");
    try {
        return Rational::parse(text);
    } catch (const Error& e) {
        fail(Errc::ParseError, path + ": " + e.message());
    }
}

inline RationalMatrix read_matrix(const json& j, const std::string& path, std::size_t rows, std::size_t cols)
{
    if (!j.is_array()) fail(Errc::ParseError, path + ": expected an array");
    if (j.size() != rows)
        fail(Errc::ValidationError, path + ": expected " + std::to_string(rows) + " rows, found " + std::to_string(j.size()));
    RationalMatrix m(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        auto rp = path + "[" + std::to_string(r) + "]";
        if (!j[r].is_array()) fail(Errc::ParseError, rp + ": expected an array");
        if (j[r].size() != cols)
            fail(Errc::ValidationError, rp + ": expected " + std::to_string(cols) + " entries, found " + std::to_string(j[r].size()));
        for (std::size_t c = 0; c < cols; ++c) m[r].push_back(read_rational(j[r][c], rp + "[" + std::to_string(c) + "]"));
    }
    return m;
}

inline void check_pmf_entries(const std::vector<const RationalMatrix*>& blocks)
{
    Rational total;
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (std::size_t r = 0; r < blocks[b]->size(); ++r)
            for (std::size_t c = 0; c < (*blocks[b])[r].size(); ++c) {
                const auto& v = (*blocks[b])[r][c];
                if (v.sign() < 0) {
                    std::string at = blocks.size() > 1 ? "[" + std::to_string(b) + "]" : "";
                    fail(Errc::ValidationError,
                         "pmf" + at + "[" + std::to_string(r) + "][" + std::to_string(c) + "]: negative entry " + v.str());
                }
                total += v;
            }
    if (total != Rational(1)) fail(Errc::ValidationError, "pmf: entries sum to " + total.str() + ", expected 1");
}

inline DistortionMatrix read_distortion(const json& doc, const std::string& key, const std::string& repro_key,
                                        const Alphabet& source)
{
    Alphabet repro = doc.contains(repro_key) ? read_alphabet(doc[repro_key], repro_key, "R") : source;
    if (!doc.contains(key)) {
        if (repro.symbols() != source.symbols())
            fail(Errc::ValidationError, key + ": required when " + repro_key + " differs from the source alphabet");
        return DistortionMatrix::hamming(source);
    }
    auto m = read_matrix(doc[key], key, source.size(), repro.size());
    try {
        return DistortionMatrix(source, repro, std::move(m));
    } catch (const Error& e) {
        fail(Errc::ValidationError, key + ": " + e.message());
    }
}

} // namespace detail

/// Parses a problem document. Syntax errors carry the line and column; semantic
/// errors name the offending field.
inline ProblemSpec parse_problem(const std::string& text)
{
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(Errc::ParseError, e.what());
    }
    if (!doc.is_object()) fail(Errc::ParseError, "top level must be an object");

    ProblemSpec spec;
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) fail(Errc::ParseError, "name: expected a string");
        spec.name = doc["name"].get<std::string>();
    }
    auto X = detail::read_alphabet(detail::field(doc, "source_alphabet"), "source_alphabet", "X");
    auto Y = detail::read_alphabet(detail::field(doc, "si_alphabet"), "si_alphabet", "Y");
    const auto& pj = detail::field(doc, "pmf");

    if (doc.contains("encoder_si_alphabet")) {
        auto S = detail::read_alphabet(doc["encoder_si_alphabet"], "encoder_si_alphabet", "S");
        if (!pj.is_array()) fail(Errc::ParseError, "pmf: expected an array");
        if (pj.size() != S.size())
            fail(Errc::ValidationError, "pmf: expected " + std::to_string(S.size()) + " blocks (one per encoder SI symbol)");
        std::vector<RationalMatrix> t;
        std::vector<const RationalMatrix*> blocks;
        t.reserve(S.size());
        for (std::size_t s = 0; s < S.size(); ++s) {
            t.push_back(detail::read_matrix(pj[s], "pmf[" + std::to_string(s) + "]", X.size(), Y.size()));
        }
        for (const auto& b : t) blocks.push_back(&b);
        detail::check_pmf_entries(blocks);
        spec.sxy = TriplePMF(S, X, Y, std::move(t));
        spec.pmf = marginal_xy(*spec.sxy);
    } else {
        auto m = detail::read_matrix(pj, "pmf", X.size(), Y.size());
        detail::check_pmf_entries({&m});
        spec.pmf = JointPMF(X, Y, std::move(m));
    }

    spec.distortion = detail::read_distortion(doc, "distortion", "reproduction_alphabet", X);
    if (doc.contains("distortion_y") || doc.contains("si_reproduction_alphabet"))
        spec.distortion_y = detail::read_distortion(doc, "distortion_y", "si_reproduction_alphabet", Y);
    return spec;
}

inline ProblemSpec load_problem(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) fail(Errc::ParseError, "cannot open '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_problem(ss.str());
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.message());
    }
}

inline nlohmann::ordered_json problem_to_json(const ProblemSpec& spec)
{
    using nlohmann::ordered_json;
    auto mat = [](const RationalMatrix& m) {
        ordered_json a = ordered_json::array();
        for (const auto& row : m) {
            ordered_json r = ordered_json::array();
            for (const auto& v : row) r.push_back(v.str());
            a.push_back(std::move(r));
        }
        return a;
    };
    auto dist = [](const DistortionMatrix& d) {
        ordered_json a = ordered_json::array();
        for (std::size_t x = 0; x < d.rows(); ++x) {
            ordered_json r = ordered_json::array();
            for (std::size_t c = 0; c < d.cols(); ++c) r.push_back(d.at(x, c).str());
            a.push_back(std::move(r));
        }
        return a;
    };
    ordered_json doc;
    if (!spec.name.empty()) doc["name"] = spec.name;
    doc["source_alphabet"] = spec.pmf.source().symbols();
    doc["si_alphabet"] = spec.pmf.si().symbols();
    if (spec.sxy) {
        doc["encoder_si_alphabet"] = spec.sxy->first().symbols();
        ordered_json blocks = ordered_json::array();
        for (const auto& m : spec.sxy->tensor()) blocks.push_back(mat(m));
        doc["pmf"] = std::move(blocks);
    } else {
        doc["pmf"] = mat(spec.pmf.matrix());
    }
    doc["reproduction_alphabet"] = spec.distortion.reproduction().symbols();
    doc["distortion"] = dist(spec.distortion);
    if (spec.distortion_y) {
        doc["si_reproduction_alphabet"] = spec.distortion_y->reproduction().symbols();
        doc["distortion_y"] = dist(*spec.distortion_y);
    }
    return doc;
}

/// Problem file text: one key per line, one matrix row per line.
inline std::string format_problem(const ProblemSpec& spec)
{
    auto doc = problem_to_json(spec);
    std::string s = "{\n";
    std::size_t k = 0;
    for (const auto& [key, value] : doc.items()) {
        s += "  \"" + key + "\": ";
        bool nested = value.is_array() && !value.empty() && value[0].is_array();
        if (!nested) {
            s += value.dump();
        } else {
            s += "[\n";
            for (std::size_t r = 0; r < value.size(); ++r) s += "    " + value[r].dump() + (r + 1 < value.size() ? ",\n" : "\n");
            s += "  ]";
        }
        s += ++k < doc.size() ? ",\n" : "\n";
    }
    return s + "}\n";
}

// ---------------------------------------------------------------- CSV output

enum class NumberFormat { Exact, Float };

inline std::string format_double(double v)
{
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline std::string format_number(const Rational& v, NumberFormat f)
{
    return f == NumberFormat::Exact ? v.str() : format_double(v.to_double());
}

/// Quotes a CSV field when it holds a comma, quote or newline.
inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

inline void write_curve_csv(std::ostream& os, const RDCurve<Rational>& curve, NumberFormat f)
{
    if (f == NumberFormat::Exact) {
        os << "D_num,D_den,R_num,R_den\n";
        for (const auto& v : curve.vertices)
            os << v.distortion.num() << ',' << v.distortion.den() << ',' << v.rate.num() << ',' << v.rate.den() << '\n';
    } else {
        os << "D,R\n";
        for (const auto& v : curve.vertices) os << format_double(v.distortion.to_double()) << ',' << format_double(v.rate.to_double()) << '\n';
    }
}

inline void write_curve_csv(std::ostream& os, const RDCurve<double>& curve)
{
    os << "D,R\n";
    for (const auto& v : curve.vertices) os << format_double(v.distortion) << ',' << format_double(v.rate) << '\n';
}

/// Reproduction labels per cell, one row per cell separated by '|', '-' where
/// the (cell, y) pair has zero probability.
inline std::string decoder_string(const std::vector<std::vector<SymbolIndex>>& table, const Alphabet& repro)
{
    std::string s;
    for (std::size_t z = 0; z < table.size(); ++z) {
        if (z) s += '|';
        for (std::size_t y = 0; y < table[z].size(); ++y) {
            if (y) s += ' ';
            s += table[z][y] >= repro.size() ? std::string("-") : repro.label(table[z][y]);
        }
    }
    return s;
}

inline std::string codeword_list(const RIProtocol& p)
{
    std::string s;
    for (std::size_t z = 0; z < p.codewords.size(); ++z) {
        if (z) s += ' ';
        s += p.codewords[z].empty() ? std::string("-") : p.codewords[z].bits();
    }
    return s;
}

inline void write_cloud_csv(std::ostream& os, const RDCloud& cloud, NumberFormat f)
{
    os << "partition,D,R,codewords,decoder\n";
    for (const auto& q : cloud.points)
        os << csv_field(q.partition.describe(cloud.pmf.source())) << ',' << format_number(q.distortion, f) << ','
           << format_number(q.rate, f) << ',' << codeword_list(q.protocol) << ','
           << decoder_string(q.decoder.table, cloud.distortion.reproduction()) << '\n';
}

inline void write_protocol_table(std::ostream& os, const JointPMF& pmf, const RISolution& sol, NumberFormat f)
{
    auto g = build_characteristic_graph(pmf);
    auto colors = coloring_of_protocol(sol.protocol, g);
    auto px = marginal_source(pmf);
    os << "L_Y = " << format_number(sol.length, f) << '\n';
    os << "colors = " << colors.count << '\n';
    os << "symbol,probability,codeword,color\n";
    for (std::size_t x = 0; x < pmf.rows(); ++x) {
        const auto& w = sol.protocol.codewords[x];
        os << csv_field(pmf.source().label(x)) << ',' << format_number(px[x], f) << ',' << (w.empty() ? "-" : w.bits()) << ','
           << colors.color[x] << '\n';
    }
}

inline void write_region_row(std::ostream& os, const MTRegion& r, const MTPoint& p, NumberFormat f)
{
    os << to_string(p.order) << ',' << format_number(p.rx, f) << ',' << format_number(p.ry, f) << ',' << format_number(p.dx, f)
       << ',' << format_number(p.dy, f) << ',' << csv_field(p.px.describe(r.pmf.source())) << ','
       << csv_field(p.py.describe(r.pmf.si()));
}

inline void write_region_csv(std::ostream& os, const MTRegion& r, NumberFormat f)
{
    os << "order,Rx,Ry,Dx,Dy,partitionX,partitionY\n";
    for (const auto& p : r.points) {
        write_region_row(os, r, p, f);
        os << '\n';
    }
}

inline void write_membership(std::ostream& os, const MTRegion& r, const Membership& m, NumberFormat f)
{
    os << "achievable: " << (m.achievable ? "yes" : "no");
    if (m.achievable && m.order) os << " (order " << to_string(*m.order) << ")";
    os << '\n';
    if (!m.achievable) return;
    os << "weight,order,Rx,Ry,Dx,Dy,partitionX,partitionY\n";
    for (const auto& t : m.witness) {
        os << format_number(t.weight, f) << ',';
        write_region_row(os, r, r.points[t.point], f);
        os << '\n';
    }
}

inline void write_scheme_csv(std::ostream& os, const SchemeReport& r)
{
    os << "alpha,n,R,pc_bound,pc_estimate,ci_halfwidth,bits_per_symbol,distortion,typical_fail_rate,prefix_fail_rate\n";
    os << format_double(r.alpha) << ',' << r.n << ',' << format_double(r.rate) << ',' << format_double(r.pc_bound) << ','
       << format_double(r.pc_estimate) << ',' << format_double(r.ci_halfwidth) << ',' << format_double(r.bits_per_symbol) << ','
       << format_double(r.distortion) << ',' << format_double(r.typical_fail_rate) << ',' << format_double(r.prefix_fail_rate)
       << '\n';
}

/// Prefix-uniqueness experiment in the same schema; scheme-only columns stay empty.
inline void write_prefix_csv(std::ostream& os, double alpha, std::size_t n, double R, double bound, const PrefixEstimate& e)
{
    os << "alpha,n,R,pc_bound,pc_estimate,ci_halfwidth,bits_per_symbol,distortion,typical_fail_rate,prefix_fail_rate\n";
    os << format_double(alpha) << ',' << n << ',' << format_double(R) << ',' << format_double(bound) << ','
       << format_double(e.estimate) << ',' << format_double(e.ci_halfwidth) << ",,,,\n";
}

inline void write_sim_csv(std::ostream& os, const SimReport& r)
{
    os << "n,total_bits,rate,distortion,sync_errors,mismatches\n";
    os << r.n << ',' << r.total_bits << ',' << format_double(r.rate) << ',' << format_double(r.distortion) << ',' << r.sync_errors
       << ',' << r.mismatches << '\n';
}

inline void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace)
{
    os << "t,x,y,z,codeword,xhat\n";
    for (const auto& t : trace)
        os << t.t << ',' << csv_field(t.x) << ',' << csv_field(t.y) << ',' << t.z << ',' << t.codeword << ',' << csv_field(t.xhat)
           << '\n';
}

} // namespace zdsi
