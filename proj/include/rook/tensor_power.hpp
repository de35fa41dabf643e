#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rook/diagonal.hpp"
#include "rook/errors.hpp"
#include "rook/function_field.hpp"
#include "rook/linalg.hpp"

namespace rook {

// ---------------------------------------------------------------------------
// multivariate polynomials under the functional equivalence x^q = x

// Sparse polynomial in t variables. Exponents are kept reduced: x^q = x as
// a function on the field, so every per-variable exponent lies in [0, q-1]
// and two polynomials are equal as functions iff their term maps are equal.
struct MultivariatePoly {
    int t = 0;
    std::map<std::vector<int>, FieldElement> terms;  // exponents -> nonzero coeff

    bool operator==(const MultivariatePoly& o) const { return t == o.t && terms == o.terms; }
};

namespace detail {

inline int reduce_exponent(int e, uint32_t q) {
    while (e >= static_cast<int>(q)) e -= static_cast<int>(q) - 1;
    return e;
}

}  // namespace detail

inline MultivariatePoly poly_zero(int t) { return {t, {}}; }

inline MultivariatePoly poly_const(const Field& F, int t, FieldElement c) {
    MultivariatePoly p{t, {}};
    if (!F.is_zero(c)) p.terms[std::vector<int>(t, 0)] = c;
    return p;
}

// x_var - a (var is 0-based)
inline MultivariatePoly poly_linear(const Field& F, int t, int var, FieldElement a) {
    MultivariatePoly p = poly_const(F, t, F.neg(a));
    std::vector<int> e(t, 0);
    e[var] = 1;
    p.terms[e] = F.one();
    return p;
}

inline MultivariatePoly poly_add(const Field& F, const MultivariatePoly& a, const MultivariatePoly& b) {
    if (a.t != b.t) throw ShapeMismatch("polynomial variable counts differ");
    MultivariatePoly out{a.t, a.terms};
    for (const auto& [e, c] : b.terms) {
        auto it = out.terms.find(e);
        if (it == out.terms.end()) {
            out.terms[e] = c;
        } else {
            it->second = F.add(it->second, c);
            if (F.is_zero(it->second)) out.terms.erase(it);
        }
    }
    return out;
}

inline MultivariatePoly poly_scale(const Field& F, FieldElement s, const MultivariatePoly& a) {
    MultivariatePoly out{a.t, {}};
    if (F.is_zero(s)) return out;
    for (const auto& [e, c] : a.terms) out.terms[e] = F.mul(s, c);
    return out;
}

inline MultivariatePoly poly_mul(const Field& F, const MultivariatePoly& a, const MultivariatePoly& b) {
    if (a.t != b.t) throw ShapeMismatch("polynomial variable counts differ");
    MultivariatePoly out{a.t, {}};
    for (const auto& [ea, ca] : a.terms)
        for (const auto& [eb, cb] : b.terms) {
            std::vector<int> e(a.t);
            for (int j = 0; j < a.t; ++j) e[j] = detail::reduce_exponent(ea[j] + eb[j], F.order());
            FieldElement c = F.mul(ca, cb);
            auto it = out.terms.find(e);
            if (it == out.terms.end()) {
                if (!F.is_zero(c)) out.terms[e] = c;
            } else {
                it->second = F.add(it->second, c);
                if (F.is_zero(it->second)) out.terms.erase(it);
            }
        }
    return out;
}

inline FieldElement poly_eval(const Field& F, const MultivariatePoly& p, const std::vector<FieldElement>& a) {
    if (static_cast<int>(a.size()) != p.t) throw ShapeMismatch("evaluation point has wrong arity");
    FieldElement acc = F.zero();
    for (const auto& [e, c] : p.terms) {
        FieldElement term = c;
        for (int j = 0; j < p.t; ++j) term = F.mul(term, F.pow(a[j], e[j]));
        acc = F.add(acc, term);
    }
    return acc;
}

inline int poly_total_degree(const MultivariatePoly& p) {
    int d = 0;
    for (const auto& [e, c] : p.terms) {
        (void)c;
        int s = 0;
        for (int v : e) s += v;
        d = std::max(d, s);
    }
    return d;
}

// ---------------------------------------------------------------------------
// truth tables

// Complete table of a function F_q^t -> F_q^u. Inputs are indexed by the
// odometer rank sum_j index(a_j) * q^j (coordinate 0 least significant).
struct TruthTable {
    int t = 0, u = 1;
    std::vector<std::vector<FieldElement>> out;  // q^t rows, each length u
};

inline uint64_t table_size(const Field& F, int t) {
    uint64_t s = 1;
    for (int j = 0; j < t; ++j) s *= F.order();
    return s;
}

inline std::vector<FieldElement> table_input(const Field& F, int t, uint64_t index) {
    std::vector<FieldElement> a(t);
    for (int j = 0; j < t; ++j) {
        a[j] = F.element_at(static_cast<uint32_t>(index % F.order()));
        index /= F.order();
    }
    return a;
}

inline uint64_t table_index(const Field& F, const std::vector<FieldElement>& a) {
    uint64_t idx = 0;
    for (size_t j = a.size(); j-- > 0;) idx = idx * F.order() + F.index_of(a[j]);
    return idx;
}

template <typename Fn>
inline TruthTable table_from_function(const Field& F, int t, int u, Fn&& fn) {
    TruthTable tab{t, u, {}};
    uint64_t sz = table_size(F, t);
    tab.out.reserve(sz);
    for (uint64_t i = 0; i < sz; ++i) {
        std::vector<FieldElement> val = fn(table_input(F, t, i));
        if (static_cast<int>(val.size()) != u) throw ShapeMismatch("function output arity mismatch");
        tab.out.push_back(std::move(val));
    }
    return tab;
}

// Lagrange-style interpolation from indicator polynomials: each input a
// contributes f(a) * prod_j (1 - (x_j - a_j)^(q-1)), expanded and reduced.
// Returns one polynomial per output coordinate.
inline std::vector<MultivariatePoly> interpolate(const Field& F, const TruthTable& tab) {
    if (tab.out.size() != table_size(F, tab.t)) throw ConfigError("truth table is incomplete");
    std::vector<MultivariatePoly> acc(tab.u, poly_zero(tab.t));
    for (uint64_t i = 0; i < tab.out.size(); ++i) {
        std::vector<FieldElement> a = table_input(F, tab.t, i);
        bool needed = false;
        for (int c = 0; c < tab.u; ++c) needed |= !F.is_zero(tab.out[i][c]);
        if (!needed) continue;
        MultivariatePoly ind = poly_const(F, tab.t, F.one());
        for (int j = 0; j < tab.t; ++j) {
            MultivariatePoly lin = poly_linear(F, tab.t, j, a[j]);
            MultivariatePoly pw = poly_const(F, tab.t, F.one());
            for (uint32_t e = 0; e + 1 < F.order(); ++e) pw = poly_mul(F, pw, lin);
            MultivariatePoly one_minus = poly_add(F, poly_const(F, tab.t, F.one()), poly_scale(F, F.from_int(-1), pw));
            ind = poly_mul(F, ind, one_minus);
        }
        for (int c = 0; c < tab.u; ++c)
            if (!F.is_zero(tab.out[i][c])) acc[c] = poly_add(F, acc[c], poly_scale(F, tab.out[i][c], ind));
    }
    return acc;
}

// ---------------------------------------------------------------------------
// symmetric (Waring) decompositions

// f(x) = sum_i (w_i . (x, 1))^order with each form a length-(t+1)
// coefficient vector; the last coordinate multiplies the homogenizing 1.
struct SymmetricDecomposition {
    int order = 0;  // ell
    int rank = 0;
    std::vector<std::vector<FieldElement>> forms;
};

inline FieldElement form_value(const Field& F, const std::vector<FieldElement>& form,
                               const std::vector<FieldElement>& v) {
    if (form.size() != v.size() + 1) throw ShapeMismatch("linear form arity mismatch");
    FieldElement acc = form.back();
    for (size_t j = 0; j < v.size(); ++j) acc = F.add(acc, F.mul(form[j], v[j]));
    return acc;
}

struct DecompositionCheck {
    bool pass = true;
    std::vector<FieldElement> witness;  // input where the identity fails
};

inline DecompositionCheck verify_decomposition(const Field& F, const MultivariatePoly& poly,
                                               const SymmetricDecomposition& d) {
    DecompositionCheck chk;
    uint64_t sz = table_size(F, poly.t);
    for (uint64_t i = 0; i < sz; ++i) {
        std::vector<FieldElement> a = table_input(F, poly.t, i);
        FieldElement sum = F.zero();
        for (const auto& w : d.forms) sum = F.add(sum, F.pow(form_value(F, w, a), d.order));
        if (sum == poly_eval(F, poly, a)) continue;
        chk.pass = false;
        chk.witness = a;
        return chk;
    }
    return chk;
}

struct WaringResult {
    bool feasible = false;
    SymmetricDecomposition decomp;  // valid iff feasible
    uint64_t tuples_tried = 0;
};

// Exhaustive smallest-rank-first search over tuples of linear forms with
// pointwise verification. Forms within a tuple are enumerated in
// non-decreasing index order (the sum is symmetric) and the zero form is
// skipped (it never helps beyond rank 0).
inline WaringResult waring_bruteforce(const Field& F, const MultivariatePoly& poly, int ell, int max_rank) {
    if (ell < 1 || max_rank < 0) throw ConfigError("waring_bruteforce needs ell >= 1 and max_rank >= 0");
    if (poly_total_degree(poly) > ell) throw ConfigError("polynomial total degree exceeds the requested order");
    uint64_t nforms = 1;
    for (int j = 0; j <= poly.t; ++j) {
        nforms *= F.order();
        if (nforms > (1ull << 25)) {  // already past any feasible search space
            nforms = (1ull << 25);
            break;
        }
    }
    uint64_t space = 1;
    for (int r = 0; r < max_rank; ++r) {
        space *= nforms;
        if (space > (1ull << 24)) throw SearchSpaceTooLarge("waring search space exceeds 2^24 form tuples");
    }

    // dense evaluations of the target over all inputs
    uint64_t sz = table_size(F, poly.t);
    std::vector<FieldElement> want(sz);
    std::vector<std::vector<FieldElement>> points(sz);
    for (uint64_t i = 0; i < sz; ++i) {
        points[i] = table_input(F, poly.t, i);
        want[i] = poly_eval(F, poly, points[i]);
    }
    auto form_of = [&](uint64_t idx) {
        std::vector<FieldElement> w(poly.t + 1);
        for (int j = 0; j <= poly.t; ++j) {
            w[j] = F.element_at(static_cast<uint32_t>(idx % F.order()));
            idx /= F.order();
        }
        return w;
    };
    // power table: contribution of form idx at every input (rank >= 1 only)
    std::vector<std::vector<FieldElement>> contrib;
    if (max_rank >= 1) {
        contrib.resize(nforms);
        for (uint64_t idx = 1; idx < nforms; ++idx) {
            std::vector<FieldElement> w = form_of(idx);
            contrib[idx].resize(sz);
            for (uint64_t i = 0; i < sz; ++i) contrib[idx][i] = F.pow(form_value(F, w, points[i]), ell);
        }
    }

    WaringResult res;
    for (int rank = 0; rank <= max_rank; ++rank) {
        std::vector<uint64_t> tuple(rank, 1);
        bool more = (rank == 0) || nforms > 1;
        while (more) {
            ++res.tuples_tried;
            bool ok = true;
            for (uint64_t i = 0; i < sz && ok; ++i) {
                FieldElement sum = F.zero();
                for (int r = 0; r < rank; ++r) sum = F.add(sum, contrib[tuple[r]][i]);
                ok = (sum == want[i]);
            }
            if (ok) {
                res.feasible = true;
                res.decomp.order = ell;
                res.decomp.rank = rank;
                for (uint64_t idx : tuple) res.decomp.forms.push_back(form_of(idx));
                return res;
            }
            if (rank == 0) break;
            int j = rank - 1;
            while (j >= 0 && tuple[j] == nforms - 1) --j;
            if (j < 0) break;
            ++tuple[j];
            for (int i = j + 1; i < rank; ++i) tuple[i] = tuple[j];
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// the tensor-power coding scheme

// Same construction as the diagonal scheme, but workers raise their scalar
// share to the ell-th power, so decoding runs over the span of all
// ell-fold products of the x_i (indexed by non-decreasing multisets).
struct PowerScheme {
    Curve curve;
    SymmetricDecomposition decomp;
    int k = 0, n = 0, ell = 0;
    std::vector<Place> construction;
    std::vector<Generator> generators;
    std::vector<FunctionExpr> x;
    std::vector<FieldElement> normalizer;
    std::vector<Place> evaluation;
    int sigma_hat = 0, min_r = 0, r_star = 0;
    bool all_attain_min = true;
    Matrix coeff;                            // n x k: x_i(Q_w)
    std::vector<std::vector<int>> multisets; // non-decreasing ell-tuples over [0,k)
    std::vector<int> diag_index;             // position of (i,...,i) per i
    Matrix M;                                // n x |multisets|: prod_j x_{m_j}(Q_w)
};

inline std::vector<std::vector<int>> multisets_of(int k, int ell) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(ell, 0);
    while (true) {
        out.push_back(cur);
        int j = ell - 1;
        while (j >= 0 && cur[j] == k - 1) --j;
        if (j < 0) break;
        ++cur[j];
        for (int i = j + 1; i < ell; ++i) cur[i] = cur[j];
    }
    return out;
}

// Order-ell support condition: at place P_l the product over any index
// multiset is a unit iff every index is l, and vanishes otherwise.
inline RookReport validate_power_condition(const PowerScheme& s) {
    RookReport rep;
    const Field& F = s.curve.field();
    for (int l = 0; l < s.k; ++l)
        for (size_t m = 0; m < s.multisets.size(); ++m) {
            FunctionExpr prod = fe_const(F.one());
            for (int idx : s.multisets[m]) prod = fe_mul(F, prod, s.x[idx]);
            int v = valuation(s.curve, prod, s.construction[l]);
            bool diag = std::all_of(s.multisets[m].begin(), s.multisets[m].end(), [&](int i) { return i == l; });
            if (diag && v != 0) {
                rep.pass = false;
                rep.violations.push_back("diagonal product not a unit at place " + std::to_string(l));
            }
            if (!diag && v <= 0) {
                rep.pass = false;
                rep.violations.push_back("off-diagonal product does not vanish at place " + std::to_string(l));
            }
        }
    return rep;
}

inline PowerScheme build_power_scheme(const Curve& curve, const SymmetricDecomposition& decomp, int n,
                                      const Policy& policy = Policy::canonical()) {
    if (decomp.order < 1) throw ConfigError("decomposition order must be >= 1");
    if (decomp.rank < 1) throw ConfigError("decomposition rank must be >= 1");
    DiagonalScheme base = build_diagonal(curve, decomp.rank, n, policy);
    PowerScheme s;
    s.curve = base.curve;
    s.decomp = decomp;
    s.k = base.k;
    s.n = base.n;
    s.ell = decomp.order;
    s.construction = base.construction;
    s.generators = base.generators;
    s.x = base.x;
    s.normalizer = base.normalizer;
    s.evaluation = base.evaluation;
    s.sigma_hat = base.sigma_hat;
    s.min_r = base.min_r;
    s.all_attain_min = base.all_attain_min;
    s.r_star = s.ell * (s.sigma_hat - s.min_r) + 1;
    s.coeff = base.coeff;
    s.multisets = multisets_of(s.k, s.ell);
    s.diag_index.assign(s.k, -1);
    for (size_t m = 0; m < s.multisets.size(); ++m) {
        bool diag = std::all_of(s.multisets[m].begin(), s.multisets[m].end(),
                                [&](int i) { return i == s.multisets[m][0]; });
        if (diag) s.diag_index[s.multisets[m][0]] = static_cast<int>(m);
    }
    const Field& F = curve.field();
    s.M = Matrix(s.n, static_cast<int>(s.multisets.size()));
    for (int w = 0; w < s.n; ++w)
        for (size_t m = 0; m < s.multisets.size(); ++m) {
            FieldElement prod = F.one();
            for (int idx : s.multisets[m]) prod = F.mul(prod, s.coeff.at(w, idx));
            s.M.at(w, static_cast<int>(m)) = prod;
        }
    return s;
}

inline int guaranteed_threshold(const PowerScheme& s) { return s.r_star; }

// Scalar share for worker w: wtilde(Q_w) = sum_i w_i(v) * x_i(Q_w).
inline FieldElement encode_power(const PowerScheme& s, const std::vector<FieldElement>& v, int w) {
    if (w < 0 || w >= s.n) throw ConfigError("worker index out of range");
    const Field& F = s.curve.field();
    FieldElement acc = F.zero();
    for (int i = 0; i < s.k; ++i) acc = F.add(acc, F.mul(form_value(F, s.decomp.forms[i], v), s.coeff.at(w, i)));
    return acc;
}

inline FieldElement worker_power(const PowerScheme& s, FieldElement share) {
    return s.curve.field().pow(share, s.ell);
}

struct PowerOutput {
    std::vector<FieldElement> powers;  // w_i(v)^ell per form
    FieldElement value;                // f(v) = sum of the powers
};

inline bool decode_success(const PowerScheme& s, const std::vector<int>& responders) {
    const Field& F = s.curve.field();
    std::vector<std::vector<FieldElement>> targets;
    for (int i = 0; i < s.k; ++i) {
        std::vector<FieldElement> t(s.multisets.size(), F.zero());
        t[s.diag_index[i]] = F.one();
        targets.push_back(std::move(t));
    }
    auto combos = detail::solve_functionals(F, s.M, responders, targets);
    for (bool d : combos.determined)
        if (!d) return false;
    return true;
}

inline PowerOutput decode_power(const PowerScheme& s, const std::map<int, FieldElement>& responses) {
    if (responses.empty()) throw InsufficientResponses("no responses", 0, s.k);
    const Field& F = s.curve.field();
    std::vector<int> rows;
    std::vector<FieldElement> vals;
    for (const auto& [w, r] : responses) {
        if (w < 0 || w >= s.n) throw ConfigError("response from unknown worker " + std::to_string(w));
        rows.push_back(w);
        vals.push_back(r);
    }
    std::vector<std::vector<FieldElement>> targets;
    for (int i = 0; i < s.k; ++i) {
        std::vector<FieldElement> t(s.multisets.size(), F.zero());
        t[s.diag_index[i]] = F.one();
        targets.push_back(std::move(t));
    }
    auto combos = detail::solve_functionals(F, s.M, rows, targets);
    for (const auto& mu : combos.null_rows) {
        FieldElement acc = F.zero();
        for (size_t r = 0; r < mu.size(); ++r) acc = F.add(acc, F.mul(mu[r], vals[r]));
        if (!F.is_zero(acc)) throw InconsistentResponses("responses violate a code constraint");
    }
    PowerOutput out;
    out.value = F.zero();
    for (int i = 0; i < s.k; ++i) {
        if (!combos.determined[i])
            throw InsufficientResponses("power " + std::to_string(i) + " undetermined", combos.rank,
                                        mat_rank(F, s.M));
        FieldElement acc = F.zero();
        for (size_t r = 0; r < combos.lambda[i].size(); ++r) acc = F.add(acc, F.mul(combos.lambda[i][r], vals[r]));
        out.powers.push_back(acc);
        out.value = F.add(out.value, acc);
    }
    return out;
}

inline EmpiricalThreshold empirical_threshold(const PowerScheme& s, const ThresholdMode& mode) {
    return empirical_threshold_sweep(s.n, mode, [&](const std::vector<int>& subset) { return decode_success(s, subset); });
}

}  // namespace rook
