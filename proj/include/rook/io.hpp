#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rook/bilinear.hpp"
#include "rook/diagonal.hpp"
#include "rook/entangled.hpp"
#include "rook/errors.hpp"
#include "rook/function_field.hpp"
#include "rook/simulate.hpp"
#include "rook/tensor_power.hpp"

namespace rook {

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline int64_t parse_int(const std::string& s) {
    std::string t = trim(s);
    if (t.empty()) throw ConfigError("expected an integer, got an empty string");
    size_t pos = 0;
    int64_t v = 0;
    try {
        v = std::stoll(t, &pos);
    } catch (const std::exception&) {
        throw ConfigError("not an integer: '" + t + "'");
    }
    if (pos != t.size()) throw ConfigError("trailing characters after integer: '" + t + "'");
    return v;
}

// CSV cell with standard quoting for embedded commas/quotes/newlines.
inline std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

inline std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw ConfigError("unterminated quote in CSV line");
    out.push_back(cur);
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// curve descriptors: "rational/q=11", "hyper/q=11/f=0,10,0,0,0,1" (low-to-high
// coefficients, ';'-separated element tuples over extension fields),
// "hermitian/q0=3"

inline std::string curve_to_string(const Curve& c) {
    const Field& F = c.field();
    switch (c.family()) {
        case CurveFamily::Rational:
            return "rational/q=" + std::to_string(F.order());
        case CurveFamily::Hyperelliptic: {
            std::string fs;
            char sep = F.degree() == 1 ? ',' : ';';
            for (size_t i = 0; i < c.f().size(); ++i) {
                if (i) fs += sep;
                fs += F.to_string(c.f()[i]);
            }
            return "hyper/q=" + std::to_string(F.order()) + "/f=" + fs;
        }
        case CurveFamily::Hermitian:
            return "hermitian/q0=" + std::to_string(c.q0());
    }
    throw ConfigError("unknown curve family");
}

inline Curve curve_from_string(const std::string& desc) {
    std::vector<std::string> parts = detail::split(detail::trim(desc), '/');
    if (parts.empty()) throw ConfigError("empty curve descriptor");
    const std::string& fam = parts[0];
    auto field_arg = [&](size_t idx, const std::string& key) {
        if (parts.size() <= idx || parts[idx].rfind(key + "=", 0) != 0)
            throw ConfigError("curve descriptor needs " + key + "=...: '" + desc + "'");
        return parts[idx].substr(key.size() + 1);
    };
    if (fam == "rational") {
        if (parts.size() != 2) throw ConfigError("rational descriptor is rational/q=<order>");
        return Curve::rational(Field::of_order(static_cast<uint32_t>(detail::parse_int(field_arg(1, "q")))));
    }
    if (fam == "hyper") {
        if (parts.size() != 3) throw ConfigError("hyper descriptor is hyper/q=<order>/f=<coeffs>");
        Field F = Field::of_order(static_cast<uint32_t>(detail::parse_int(field_arg(1, "q"))));
        std::string fs = field_arg(2, "f");
        char sep = fs.find(';') != std::string::npos ? ';' : ',';
        std::vector<FieldElement> f;
        for (const std::string& tok : detail::split(fs, sep)) f.push_back(F.parse(detail::trim(tok)));
        return Curve::hyperelliptic(F, f);
    }
    if (fam == "hermitian") {
        if (parts.size() != 2) throw ConfigError("hermitian descriptor is hermitian/q0=<prime power>");
        return Curve::hermitian(static_cast<uint32_t>(detail::parse_int(field_arg(1, "q0"))));
    }
    throw ConfigError("unknown curve family '" + fam + "'");
}

// ---------------------------------------------------------------------------
// scheme descriptors (JSON)

inline nlohmann::json policy_to_json(const Policy& p) {
    nlohmann::json j;
    j["kind"] = p.kind == Policy::Kind::Canonical ? "canonical" : "seeded";
    if (p.kind == Policy::Kind::Seeded) j["seed"] = p.seed;
    return j;
}

inline nlohmann::json scheme_to_json(const DiagonalScheme& s, const Policy& policy = Policy::canonical()) {
    nlohmann::json j;
    j["kind"] = "diagonal";
    j["curve"] = curve_to_string(s.curve);
    j["k"] = s.k;
    j["n"] = s.n;
    j["policy"] = policy_to_json(policy);
    for (const Place& p : s.construction) j["construction"].push_back(place_to_string(s.curve, p));
    for (const Place& p : s.evaluation) j["evaluation"].push_back(place_to_string(s.curve, p));
    for (const Generator& g : s.generators) j["r_list"].push_back(g.r);
    j["sigma_hat"] = s.sigma_hat;
    j["r_star"] = s.r_star;
    return j;
}

inline nlohmann::json scheme_to_json(const EntangledScheme& s, const Policy& policy = Policy::canonical()) {
    nlohmann::json j;
    j["kind"] = "entangled";
    j["curve"] = curve_to_string(s.curve);
    j["base"] = place_to_string(s.curve, s.base);
    j["dims"] = {s.maps.chi, s.maps.zeta, s.maps.upsilon};
    j["eA"] = s.maps.eA;
    j["eB"] = s.maps.eB;
    j["d"] = s.maps.d;
    j["exponents"] = s.E;
    j["r0"] = s.gen.r;
    j["n"] = s.n;
    j["policy"] = policy_to_json(policy);
    for (const Place& p : s.evaluation) j["evaluation"].push_back(place_to_string(s.curve, p));
    j["r_star"] = s.r_star;
    return j;
}

inline nlohmann::json scheme_to_json(const PowerScheme& s, const Policy& policy = Policy::canonical()) {
    nlohmann::json j;
    j["kind"] = "power";
    j["curve"] = curve_to_string(s.curve);
    j["k"] = s.k;
    j["ell"] = s.ell;
    j["n"] = s.n;
    j["policy"] = policy_to_json(policy);
    for (const Place& p : s.construction) j["construction"].push_back(place_to_string(s.curve, p));
    for (const Place& p : s.evaluation) j["evaluation"].push_back(place_to_string(s.curve, p));
    for (const Generator& g : s.generators) j["r_list"].push_back(g.r);
    j["sigma_hat"] = s.sigma_hat;
    j["r_star"] = s.r_star;
    return j;
}

// ---------------------------------------------------------------------------
// bilinear algorithm files (JSON; integer grids reduced into the field)

inline nlohmann::json algorithm_to_json(const Field& F, const BilinearAlgorithm& alg) {
    nlohmann::json j;
    j["chi"] = alg.chi;
    j["zeta"] = alg.zeta;
    j["upsilon"] = alg.upsilon;
    j["rank"] = alg.rank;
    // Grids are stored as plain integers reduced into the field at load time,
    // so every entry must already lie in the prime subfield.
    auto grid = [&](const Matrix& m) {
        nlohmann::json rows = nlohmann::json::array();
        for (int r = 0; r < m.rows; ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (int c = 0; c < m.cols; ++c) {
                if (m.at(r, c).code >= F.characteristic())
                    throw ConfigError("algorithm grids serialize as integers; entries must lie in the prime subfield");
                row.push_back(m.at(r, c).code);
            }
            rows.push_back(std::move(row));
        }
        return rows;
    };
    j["gamma"] = grid(alg.gamma);
    j["delta"] = grid(alg.delta);
    j["epsilon"] = grid(alg.epsilon);
    return j;
}

inline BilinearAlgorithm algorithm_from_json(const Field& F, const nlohmann::json& j) {
    for (const char* key : {"chi", "zeta", "upsilon", "rank", "gamma", "delta", "epsilon"})
        if (!j.contains(key)) throw ConfigError(std::string("algorithm JSON is missing '") + key + "'");
    BilinearAlgorithm alg;
    alg.chi = j.at("chi").get<int>();
    alg.zeta = j.at("zeta").get<int>();
    alg.upsilon = j.at("upsilon").get<int>();
    alg.rank = j.at("rank").get<int>();
    if (alg.chi < 1 || alg.zeta < 1 || alg.upsilon < 1 || alg.rank < 1)
        throw ConfigError("algorithm dims and rank must be >= 1");
    auto grid = [&](const nlohmann::json& rows, int want_r, int want_c, const char* name) {
        if (!rows.is_array() || static_cast<int>(rows.size()) != want_r)
            throw ConfigError(std::string("grid '") + name + "' must have " + std::to_string(want_r) + " rows");
        Matrix m(want_r, want_c);
        for (int r = 0; r < want_r; ++r) {
            const nlohmann::json& row = rows.at(r);
            if (!row.is_array() || static_cast<int>(row.size()) != want_c)
                throw ConfigError(std::string("grid '") + name + "' must have " + std::to_string(want_c) + " columns");
            for (int c = 0; c < want_c; ++c) m.at(r, c) = F.from_int(row.at(c).get<int64_t>());
        }
        return m;
    };
    alg.gamma = grid(j.at("gamma"), alg.rank, alg.chi * alg.zeta, "gamma");
    alg.delta = grid(j.at("delta"), alg.rank, alg.zeta * alg.upsilon, "delta");
    alg.epsilon = grid(j.at("epsilon"), alg.chi * alg.upsilon, alg.rank, "epsilon");
    return alg;
}

// ---------------------------------------------------------------------------
// polynomial files: one term per line, "e1,e2,...,et:coeff"

inline std::string poly_to_string(const Field& F, const MultivariatePoly& p) {
    std::string out;
    for (const auto& [e, c] : p.terms) {
        std::string line;
        for (size_t j = 0; j < e.size(); ++j) {
            if (j) line += ',';
            line += std::to_string(e[j]);
        }
        out += line + ":" + F.to_string(c) + "\n";
    }
    return out;
}

inline MultivariatePoly poly_from_string(const Field& F, int t, const std::string& text) {
    MultivariatePoly p = poly_zero(t);
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = detail::trim(line);
        if (line.empty() || line[0] == '#') continue;
        size_t colon = line.find(':');
        if (colon == std::string::npos) throw ConfigError("polynomial line needs 'exponents:coeff': '" + line + "'");
        std::vector<std::string> etoks = detail::split(line.substr(0, colon), ',');
        if (static_cast<int>(etoks.size()) != t)
            throw ConfigError("polynomial line has " + std::to_string(etoks.size()) + " exponents, expected " +
                              std::to_string(t));
        std::vector<int> e(t);
        for (int j = 0; j < t; ++j) {
            int64_t v = detail::parse_int(etoks[j]);
            if (v < 0) throw ConfigError("negative exponent in polynomial file");
            e[j] = detail::reduce_exponent(static_cast<int>(v), F.order());
        }
        FieldElement c = F.parse(detail::trim(line.substr(colon + 1)));
        MultivariatePoly term{t, {}};
        if (!F.is_zero(c)) term.terms[e] = c;
        p = poly_add(F, p, term);
    }
    return p;
}

// ---------------------------------------------------------------------------
// decomposition files: header "<ell>; <rank>", then one form per line with
// ';'-separated coefficient tuples

inline std::string decomposition_to_string(const Field& F, const SymmetricDecomposition& d) {
    std::string out = std::to_string(d.order) + "; " + std::to_string(d.rank) + "\n";
    for (const auto& w : d.forms) {
        std::string line;
        for (size_t j = 0; j < w.size(); ++j) {
            if (j) line += ';';
            line += F.to_string(w[j]);
        }
        out += line + "\n";
    }
    return out;
}

inline SymmetricDecomposition decomposition_from_string(const Field& F, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) {
        line = detail::trim(line);
        if (!line.empty() && line[0] != '#') lines.push_back(line);
    }
    if (lines.empty()) throw ConfigError("decomposition file is empty");
    std::vector<std::string> head = detail::split(lines[0], ';');
    if (head.size() != 2) throw ConfigError("decomposition header must be '<ell>; <rank>'");
    SymmetricDecomposition d;
    d.order = static_cast<int>(detail::parse_int(head[0]));
    d.rank = static_cast<int>(detail::parse_int(head[1]));
    if (d.order < 1 || d.rank < 0) throw ConfigError("decomposition order must be >= 1 and rank >= 0");
    if (static_cast<int>(lines.size()) - 1 != d.rank)
        throw ConfigError("decomposition lists " + std::to_string(lines.size() - 1) + " forms, header says " +
                          std::to_string(d.rank));
    size_t arity = 0;
    for (int i = 0; i < d.rank; ++i) {
        std::vector<FieldElement> w;
        for (const std::string& tok : detail::split(lines[i + 1], ';')) w.push_back(F.parse(detail::trim(tok)));
        if (i == 0) arity = w.size();
        if (w.size() != arity || w.size() < 2) throw ConfigError("decomposition forms must share arity >= 2");
        d.forms.push_back(std::move(w));
    }
    return d;
}

// ---------------------------------------------------------------------------
// truth tables (CSV): header "in1,...,int,out" (or out1..outu), rows in
// input-index order

inline std::string table_to_csv(const Field& F, const TruthTable& tab) {
    std::string out;
    for (int j = 0; j < tab.t; ++j) out += "in" + std::to_string(j + 1) + ",";
    if (tab.u == 1) {
        out += "out\n";
    } else {
        for (int c = 0; c < tab.u; ++c) out += "out" + std::to_string(c + 1) + (c + 1 < tab.u ? "," : "\n");
    }
    for (uint64_t i = 0; i < tab.out.size(); ++i) {
        std::vector<FieldElement> a = table_input(F, tab.t, i);
        std::string line;
        for (int j = 0; j < tab.t; ++j) line += detail::csv_cell(F.to_string(a[j])) + ",";
        for (int c = 0; c < tab.u; ++c)
            line += detail::csv_cell(F.to_string(tab.out[i][c])) + (c + 1 < tab.u ? "," : "");
        out += line + "\n";
    }
    return out;
}

inline TruthTable table_from_csv(const Field& F, int t, int u, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("truth table CSV is empty");
    TruthTable tab{t, u, {}};
    uint64_t sz = table_size(F, t);
    tab.out.assign(sz, {});
    uint64_t filled = 0;
    while (std::getline(in, line)) {
        line = detail::trim(line);
        if (line.empty()) continue;
        std::vector<std::string> cells = detail::csv_split(line);
        if (static_cast<int>(cells.size()) != t + u)
            throw ConfigError("truth table row has " + std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(t + u));
        std::vector<FieldElement> a(t);
        for (int j = 0; j < t; ++j) a[j] = F.parse(cells[j]);
        uint64_t idx = table_index(F, a);
        if (!tab.out[idx].empty()) throw ConfigError("duplicate truth table row");
        std::vector<FieldElement> val(u);
        for (int c = 0; c < u; ++c) val[c] = F.parse(cells[t + c]);
        tab.out[idx] = std::move(val);
        ++filled;
    }
    if (filled != sz) throw ConfigError("truth table is incomplete: " + std::to_string(filled) + " of " +
                                        std::to_string(sz) + " rows");
    return tab;
}

// ---------------------------------------------------------------------------
// threshold and success-curve reports

struct ThresholdRow {
    std::string curve;
    int k = 0, n = 0, sigma_hat = 0, r_star = 0, r_emp = 0;
    int bound_2sigma = 0;
    uint64_t subsets_tested = 0;
    std::vector<int> witness;  // empty when no failing subset exists
};

inline std::string threshold_csv_header() {
    return "curve,k,n,sigma_hat,R_star,R_emp,bound_2sigma,subsets_tested,witness";
}

inline std::string threshold_row_to_csv(const ThresholdRow& r) {
    std::string wit;
    for (size_t i = 0; i < r.witness.size(); ++i) {
        if (i) wit += ';';
        wit += std::to_string(r.witness[i]);
    }
    return detail::csv_cell(r.curve) + "," + std::to_string(r.k) + "," + std::to_string(r.n) + "," +
           std::to_string(r.sigma_hat) + "," + std::to_string(r.r_star) + "," + std::to_string(r.r_emp) + "," +
           std::to_string(r.bound_2sigma) + "," + std::to_string(r.subsets_tested) + "," + detail::csv_cell(wit);
}

inline std::string success_curve_to_csv(const std::vector<CurvePoint>& pts) {
    std::string out = "m,success_rate,trials,seed\n";
    char buf[64];
    for (const CurvePoint& p : pts) {
        std::snprintf(buf, sizeof(buf), "%d,%.6f,%d,%llu", p.m, p.success_rate, p.trials,
                      static_cast<unsigned long long>(p.seed));
        out += buf;
        out += "\n";
    }
    return out;
}

inline nlohmann::json certification_to_json(const Certification& c) {
    nlohmann::json j;
    j["size"] = c.size;
    j["status"] = c.status == Certification::Status::Certified ? "certified" : "witness";
    j["subsets_checked"] = c.subsets_checked;
    if (c.status == Certification::Status::Witness) j["witness"] = c.witness;
    return j;
}

// Wall-clock time is intentionally omitted: serialized reports must be
// byte-identical across runs with the same seed.
inline nlohmann::json report_to_json(const RunReport& r) {
    nlohmann::json j;
    j["scheme_id"] = r.scheme_id;
    j["responders"] = r.responders;
    j["success"] = r.success;
    j["digest"] = r.digest;
    if (!r.failure_witness.empty()) j["failure_witness"] = r.failure_witness;
    j["trials"] = r.trials;
    return j;
}

// ---------------------------------------------------------------------------
// files

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write file '" + path + "'");
    out << content;
    if (!out.good()) throw ConfigError("failed writing file '" + path + "'");
}

}  // namespace rook
