#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rook/diagonal.hpp"
#include "rook/errors.hpp"
#include "rook/function_field.hpp"
#include "rook/linalg.hpp"

namespace rook {

// Exponent assignment for an entangled scheme on chi x zeta times
// zeta x upsilon block grids. The defining property (checked, never
// assumed): eA(i,j) + eB(k,l) = d(i',l') holds iff j = k, i = i', l = l',
// so the coefficient at exponent d(i,l) of a share product is exactly
// sum_j A_{i,j} B_{j,l}.
struct ExponentMaps {
    int chi = 0, zeta = 0, upsilon = 0;
    std::vector<int> eA;  // chi*zeta entries, index i*zeta + j
    std::vector<int> eB;  // zeta*upsilon entries, index k*upsilon + l
    std::vector<int> d;   // chi*upsilon entries, index i*upsilon + l

    int eA_at(int i, int j) const { return eA[i * zeta + j]; }
    int eB_at(int k, int l) const { return eB[k * upsilon + l]; }
    int d_at(int i, int l) const { return d[i * upsilon + l]; }

    // eA(i,j) = j + i*zeta*upsilon, eB(k,l) = (zeta-1-k) + zeta*l,
    // d(i,l) = (zeta-1) + i*zeta*upsilon + zeta*l
    static ExponentMaps defaults(int chi, int zeta, int upsilon) {
        if (chi < 1 || zeta < 1 || upsilon < 1) throw ConfigError("exponent maps need dims >= 1");
        ExponentMaps m;
        m.chi = chi;
        m.zeta = zeta;
        m.upsilon = upsilon;
        m.eA.resize(chi * zeta);
        m.eB.resize(zeta * upsilon);
        m.d.resize(chi * upsilon);
        for (int i = 0; i < chi; ++i)
            for (int j = 0; j < zeta; ++j) m.eA[i * zeta + j] = j + i * zeta * upsilon;
        for (int k = 0; k < zeta; ++k)
            for (int l = 0; l < upsilon; ++l) m.eB[k * upsilon + l] = (zeta - 1 - k) + zeta * l;
        for (int i = 0; i < chi; ++i)
            for (int l = 0; l < upsilon; ++l) m.d[i * upsilon + l] = (zeta - 1) + i * zeta * upsilon + zeta * l;
        return m;
    }
};

struct DecodabilityReport {
    bool pass = true;
    std::string witness;
};

// Exhaustive check of the defining property over all (i,j,k,l) x (i',l').
inline DecodabilityReport check_decodability(const ExponentMaps& m) {
    DecodabilityReport rep;
    for (int i = 0; i < m.chi; ++i)
        for (int j = 0; j < m.zeta; ++j)
            for (int k = 0; k < m.zeta; ++k)
                for (int l = 0; l < m.upsilon; ++l) {
                    int sum = m.eA_at(i, j) + m.eB_at(k, l);
                    for (int ip = 0; ip < m.chi; ++ip)
                        for (int lp = 0; lp < m.upsilon; ++lp) {
                            bool hits = (sum == m.d_at(ip, lp));
                            bool should = (j == k && i == ip && l == lp);
                            if (hits == should) continue;
                            rep.pass = false;
                            rep.witness = "eA(" + std::to_string(i) + "," + std::to_string(j) + ") + eB(" +
                                          std::to_string(k) + "," + std::to_string(l) + ") = " + std::to_string(sum) +
                                          (hits ? " collides with" : " misses") + " d(" + std::to_string(ip) + "," +
                                          std::to_string(lp) + ") = " + std::to_string(m.d_at(ip, lp));
                            return rep;
                        }
                }
    return rep;
}

// Entangled scheme: every share is a combination of powers z^{-e} of one
// generator with a pole at the base place, so coding and the block
// inner-product recombination happen in a single evaluation code.
struct EntangledScheme {
    Curve curve;
    Place base;     // P_0
    Generator gen;  // (z, r_0), pole of order r_0 at P_0
    ExponentMaps maps;
    std::vector<int> E;  // sorted distinct exponent sums eA + eB
    int n = 0;
    std::vector<Place> evaluation;
    int r_star = 0;  // r_0 * max(E) + 1
    Matrix coeffA;   // n x (chi*zeta):    z^{-eA(i,j)}(Q_w)
    Matrix coeffB;   // n x (zeta*upsilon): z^{-eB(k,l)}(Q_w)
    Matrix M;        // n x |E|:           z^{-E[c]}(Q_w)

    int exponent_index(int e) const {
        auto it = std::lower_bound(E.begin(), E.end(), e);
        if (it == E.end() || *it != e) throw ConfigError("exponent not in the support set");
        return static_cast<int>(it - E.begin());
    }
};

inline EntangledScheme build_entangled(const Curve& curve, const Place& base, int chi, int zeta, int upsilon, int n,
                                       const Policy& policy = Policy::canonical()) {
    if (n < 1) throw ConfigError("build_entangled needs n >= 1");
    EntangledScheme s;
    s.curve = curve;
    s.base = base;
    s.maps = ExponentMaps::defaults(chi, zeta, upsilon);
    DecodabilityReport rep = check_decodability(s.maps);
    if (!rep.pass) throw RookConditionViolated(rep.witness);
    s.gen = min_pole_generator(curve, base);  // UnsupportedPlace where no closed form exists
    s.n = n;

    std::set<int> sums;
    for (int a : s.maps.eA)
        for (int b : s.maps.eB) sums.insert(a + b);
    s.E.assign(sums.begin(), sums.end());
    s.r_star = s.gen.r * s.E.back() + 1;

    // evaluation places must avoid both the base pole and the zeros of z
    const Field& F = curve.field();
    Divisor supp = divisor_of(curve, s.gen.z);
    std::vector<Place> cands;
    for (const Place& p : curve.places())
        if (!supp.contains(p)) cands.push_back(p);
    cands = detail::arrange(cands, policy, 3);
    if (static_cast<int>(cands.size()) < n)
        throw NotEnoughPlaces("need " + std::to_string(n) + " evaluation places, have " + std::to_string(cands.size()));
    s.evaluation.assign(cands.begin(), cands.begin() + n);

    const int na = chi * zeta, nb = zeta * upsilon, ne = static_cast<int>(s.E.size());
    s.coeffA = Matrix(n, na);
    s.coeffB = Matrix(n, nb);
    s.M = Matrix(n, ne);
    std::map<int, FunctionExpr> powers;  // z^{-e} for every exponent in play
    auto power_of = [&](int e) -> const FunctionExpr& {
        auto it = powers.find(e);
        if (it == powers.end()) it = powers.emplace(e, fe_pow(F, s.gen.z, -e)).first;
        return it->second;
    };
    for (int w = 0; w < n; ++w) {
        for (int c = 0; c < na; ++c) s.coeffA.at(w, c) = evaluate_value(curve, power_of(s.maps.eA[c]), s.evaluation[w]);
        for (int c = 0; c < nb; ++c) s.coeffB.at(w, c) = evaluate_value(curve, power_of(s.maps.eB[c]), s.evaluation[w]);
        for (int c = 0; c < ne; ++c) s.M.at(w, c) = evaluate_value(curve, power_of(s.E[c]), s.evaluation[w]);
    }
    return s;
}

inline int guaranteed_threshold(const EntangledScheme& s) { return s.r_star; }

// worker index w is 0-based
inline std::pair<Matrix, Matrix> encode_entangled(const EntangledScheme& s, const std::vector<Matrix>& A,
                                                  const std::vector<Matrix>& B, int w) {
    if (static_cast<int>(A.size()) != s.maps.chi * s.maps.zeta) throw ShapeMismatch("A: wrong block count");
    if (static_cast<int>(B.size()) != s.maps.zeta * s.maps.upsilon) throw ShapeMismatch("B: wrong block count");
    check_uniform_shape(A, "A");
    check_uniform_shape(B, "B");
    if (A[0].cols != B[0].rows) throw ShapeMismatch("inner block dimensions disagree");
    if (w < 0 || w >= s.n) throw ConfigError("worker index out of range");
    const Field& F = s.curve.field();
    Matrix At(A[0].rows, A[0].cols), Bt(B[0].rows, B[0].cols);
    for (size_t c = 0; c < A.size(); ++c) At = mat_add(F, At, mat_scale(F, s.coeffA.at(w, static_cast<int>(c)), A[c]));
    for (size_t c = 0; c < B.size(); ++c) Bt = mat_add(F, Bt, mat_scale(F, s.coeffB.at(w, static_cast<int>(c)), B[c]));
    return {At, Bt};
}

inline bool decode_success(const EntangledScheme& s, const std::vector<int>& responders) {
    const Field& F = s.curve.field();
    std::vector<std::vector<FieldElement>> targets;
    for (int e : s.maps.d) {
        std::vector<FieldElement> t(s.E.size(), F.zero());
        t[s.exponent_index(e)] = F.one();
        targets.push_back(std::move(t));
    }
    auto combos = detail::solve_functionals(F, s.M, responders, targets);
    for (bool d : combos.determined)
        if (!d) return false;
    return true;
}

// Recovers the chi x upsilon product blocks, row-major: C[i*upsilon + l].
inline std::vector<Matrix> decode_entangled(const EntangledScheme& s, const std::map<int, Matrix>& responses) {
    if (responses.empty()) throw InsufficientResponses("no responses", 0, static_cast<int>(s.E.size()));
    const Field& F = s.curve.field();
    std::vector<int> rows;
    std::vector<const Matrix*> vals;
    for (const auto& [w, mat] : responses) {
        if (w < 0 || w >= s.n) throw ConfigError("response from unknown worker " + std::to_string(w));
        if (mat.rows != responses.begin()->second.rows || mat.cols != responses.begin()->second.cols)
            throw ShapeMismatch("response shapes differ");
        rows.push_back(w);
        vals.push_back(&mat);
    }

    std::vector<std::vector<FieldElement>> targets;
    for (int e : s.maps.d) {
        std::vector<FieldElement> t(s.E.size(), F.zero());
        t[s.exponent_index(e)] = F.one();
        targets.push_back(std::move(t));
    }
    auto combos = detail::solve_functionals(F, s.M, rows, targets);

    for (const auto& mu : combos.null_rows) {
        Matrix acc(vals[0]->rows, vals[0]->cols);
        for (size_t r = 0; r < mu.size(); ++r)
            if (!F.is_zero(mu[r])) acc = mat_add(F, acc, mat_scale(F, mu[r], *vals[r]));
        for (const FieldElement& v : acc.a)
            if (!F.is_zero(v)) throw InconsistentResponses("responses violate a code constraint");
    }

    std::vector<Matrix> out;
    for (size_t t = 0; t < targets.size(); ++t) {
        if (!combos.determined[t])
            throw InsufficientResponses("product block " + std::to_string(t) + " undetermined", combos.rank,
                                        mat_rank(F, s.M));
        Matrix acc(vals[0]->rows, vals[0]->cols);
        for (size_t r = 0; r < combos.lambda[t].size(); ++r)
            if (!F.is_zero(combos.lambda[t][r])) acc = mat_add(F, acc, mat_scale(F, combos.lambda[t][r], *vals[r]));
        out.push_back(std::move(acc));
    }
    return out;
}

inline EmpiricalThreshold empirical_threshold(const EntangledScheme& s, const ThresholdMode& mode) {
    return empirical_threshold_sweep(s.n, mode, [&](const std::vector<int>& subset) { return decode_success(s, subset); });
}

}  // namespace rook
