#ifndef WESTERVELT_IO_HPP
#define WESTERVELT_IO_HPP

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "westervelt/cascade.hpp"
#include "westervelt/estimates.hpp"
#include "westervelt/grid.hpp"
#include "westervelt/inverse.hpp"
#include "westervelt/types.hpp"

namespace westervelt {

using json = nlohmann::json;

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Field dump: CSV `x,y,re,im`, row-major by (j,i), LF endings, 17 significant digits.
inline void write_field_csv(const std::string& path, const Grid& g, std::span<const cplx> f) {
    if (f.size() != g.size()) throw ShapeMismatchError("field size does not match grid");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "x,y,re,im\n";
    for (size_t n = 0; n < f.size(); ++n) {
        const auto [x, y] = g.coords(static_cast<int>(n));
        out << format_g17(x) << ',' << format_g17(y) << ',' << format_g17(f[n].real()) << ','
            << format_g17(f[n].imag()) << '\n';
    }
}

inline void write_real_field_csv(const std::string& path, const Grid& g, std::span<const double> f) {
    std::vector<cplx> c(f.size());
    for (size_t n = 0; n < f.size(); ++n) c[n] = cplx(f[n], 0.0);
    write_field_csv(path, g, c);
}

inline json complex_list_json(std::span<const cplx> v) {
    json arr = json::array();
    for (const auto& z : v) arr.push_back({z.real(), z.imag()});
    return arr;
}

inline std::vector<cplx> complex_list_from_json(const json& arr) {
    std::vector<cplx> out;
    for (const auto& e : arr) out.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    return out;
}

inline json rtd_to_json(const RtDDataset& ds) {
    json j;
    j["omega"] = ds.omega;
    j["medium_tag"] = ds.medium_tag;
    j["noise_level"] = ds.noise_level;
    json bxy = json::array();
    for (const auto& p : ds.boundary_xy) bxy.push_back({p[0], p[1]});
    j["boundary_nodes"] = bxy;
    json recs = json::array();
    for (const auto& r : ds.records) {
        recs.push_back({{"g", complex_list_json(r.g)},
                        {"trace1", complex_list_json(r.trace1)},
                        {"trace2", complex_list_json(r.trace2)}});
    }
    j["records"] = recs;
    return j;
}

inline RtDDataset rtd_from_json(const json& j) {
    RtDDataset ds;
    ds.omega = j.at("omega").get<double>();
    ds.medium_tag = j.value("medium_tag", "");
    ds.noise_level = j.value("noise_level", 0.0);
    for (const auto& p : j.at("boundary_nodes"))
        ds.boundary_xy.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    for (const auto& r : j.at("records")) {
        RtDRecord rec;
        rec.g = complex_list_from_json(r.at("g"));
        rec.trace1 = complex_list_from_json(r.at("trace1"));
        rec.trace2 = complex_list_from_json(r.at("trace2"));
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

inline void write_json(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
}

inline json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

inline json stack_manifest(const HarmonicStack& stack, const CascadeDiagnostics& diag) {
    json j;
    j["omega"] = stack.omega;
    j["K"] = stack.highest();
    j["truncation_reason"] = to_string(stack.truncation_reason);
    json norms = json::array();
    for (int k = 0; k <= stack.highest(); ++k)
        norms.push_back({{"k", k},
                         {"l2", stack.norms[k].l2},
                         {"h1_semi", stack.norms[k].h1_semi},
                         {"max_abs", stack.norms[k].max_abs}});
    j["norms"] = norms;
    j["diagnostics"] = {{"ratio_sequence", diag.ratio_sequence},
                        {"empirical_r", diag.empirical_r},
                        {"degeneracy_margin", diag.degeneracy_margin},
                        {"degeneracy_warning", diag.degeneracy_warning}};
    return j;
}

inline json sweep_report_json(const SweepReport& rep) {
    json j;
    j["all_bounded"] = rep.all_bounded;
    j["skipped"] = rep.skipped;
    json tables = json::array();
    for (const auto& t : rep.tables) {
        json rows = json::array();
        for (const auto& r : t.rows)
            rows.push_back({{"omega", r.omega}, {"k", r.k}, {"raw", r.raw}, {"ratio", r.ratio}});
        tables.push_back({{"name", t.name},
                          {"rows", rows},
                          {"max_min_ratio", t.max_min_ratio},
                          {"bounded", t.bounded},
                          {"fitted_exponent", t.fit.exponent},
                          {"fit_residual", t.fit.residual}});
    }
    j["tables"] = tables;
    return j;
}

inline void write_sweep_csv(const std::string& path, const QuantityTable& t) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "omega,k,raw,ratio\n";
    for (const auto& r : t.rows)
        out << format_g17(r.omega) << ',' << r.k << ',' << format_g17(r.raw) << ','
            << format_g17(r.ratio) << '\n';
}

inline uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace westervelt

#endif
