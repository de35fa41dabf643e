#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "rook/errors.hpp"
#include "rook/function_field.hpp"
#include "rook/linalg.hpp"
#include "rook/rng.hpp"

namespace rook {

// Place-selection policy shared by all scheme builders.
struct Policy {
    enum class Kind { Canonical, Seeded };
    Kind kind = Kind::Canonical;
    uint64_t seed = 0;

    static Policy canonical() { return {}; }
    static Policy seeded(uint64_t s) { return {Kind::Seeded, s}; }
};

namespace detail {

// Applies the policy to a candidate list: canonical keeps the canonical
// order, seeded shuffles it (one Rng per list, derived from the seed and a
// role tag so construction/evaluation draws do not interleave).
inline std::vector<Place> arrange(const std::vector<Place>& candidates, const Policy& policy, uint64_t role) {
    if (policy.kind == Policy::Kind::Canonical) return candidates;
    Rng rng(policy.seed ^ (0x9e3779b97f4a7c15ull * (role + 1)));
    std::vector<int> order = shuffled_indices(rng, static_cast<int>(candidates.size()));
    std::vector<Place> out;
    out.reserve(candidates.size());
    for (int i : order) out.push_back(candidates[i]);
    return out;
}

}  // namespace detail

// Diagonal rook code: k construction places with one-place generators z_i,
// coefficient functions x_i = prod_{j != i} z_j^{-1}, and n evaluation
// places disjoint from every generator support.
struct DiagonalScheme {
    Curve curve;
    int k = 0, n = 0;
    std::vector<Place> construction;       // P_1..P_k (all affine)
    std::vector<Generator> generators;     // (z_i, r_i)
    std::vector<FunctionExpr> x;           // x_i
    std::vector<FieldElement> normalizer;  // c_i = x_i(P_i), nonzero
    std::vector<Place> evaluation;         // Q_1..Q_n
    int sigma_hat = 0;
    int min_r = 0;
    int r_star = 0;
    bool all_attain_min = true;
    Matrix coeff;  // n x k, coeff(w, i) = x_i(Q_w): the encoding coefficients
    Matrix M;      // n x k^2, M(w, i*k + j) = x_i x_j (Q_w): the product basis
};

struct RookReport {
    bool pass = true;
    std::vector<std::string> violations;
};

inline RookReport validate_rook_condition(const DiagonalScheme& s) {
    RookReport rep;
    const Field& F = s.curve.field();
    auto complain = [&](const std::string& msg) {
        rep.pass = false;
        rep.violations.push_back(msg);
    };
    for (int l = 0; l < s.k; ++l) {
        // Remark-2 form: the diagonal factor is flat at its own place
        if (valuation(s.curve, s.x[l], s.construction[l]) != 0)
            complain("v_P" + std::to_string(l) + "(x_" + std::to_string(l) + ") != 0");
        for (int i = 0; i < s.k; ++i)
            for (int j = 0; j < s.k; ++j) {
                FunctionExpr prod = fe_mul(F, s.x[i], s.x[j]);
                int v = valuation(s.curve, prod, s.construction[l]);
                bool diag = (i == l && j == l);
                if (diag && v != 0)
                    complain("v_P" + std::to_string(l) + "(x_" + std::to_string(i) + "x_" + std::to_string(j) +
                             ") = " + std::to_string(v) + ", want 0");
                if (!diag && v <= 0)
                    complain("v_P" + std::to_string(l) + "(x_" + std::to_string(i) + "x_" + std::to_string(j) +
                             ") = " + std::to_string(v) + ", want > 0");
            }
    }
    // Lemma-2 additivity of divisors over all pairs
    for (int i = 0; i < s.k; ++i)
        for (int j = 0; j < s.k; ++j) {
            Divisor lhs = divisor_of(s.curve, fe_mul(F, s.x[i], s.x[j]));
            Divisor rhs = divisor_add(divisor_of(s.curve, s.x[i]), divisor_of(s.curve, s.x[j]));
            if (lhs != rhs)
                complain("divisor additivity fails for pair (" + std::to_string(i) + "," + std::to_string(j) + ")");
        }
    return rep;
}

inline int guaranteed_threshold_formula(int sigma_hat, int min_r) {
    int r = 2 * sigma_hat - 2 * min_r + 1;
    return r < 1 ? 1 : r;
}

inline DiagonalScheme build_diagonal(const Curve& curve, int k, int n, const Policy& policy = Policy::canonical()) {
    if (k < 1 || n < 1) throw ConfigError("build_diagonal needs k >= 1 and n >= 1");
    const Field& F = curve.field();

    // construction candidates: affine places with a closed-form generator
    // (infinity is never eligible: every other x_i would inherit a pole
    // there from z_inf^{-1}, breaking the diagonal pattern)
    std::vector<Place> cands;
    for (const Place& p : curve.places())
        if (p.kind == Place::Kind::Affine && supports_generator(curve, p)) cands.push_back(p);
    cands = detail::arrange(cands, policy, 1);
    if (static_cast<int>(cands.size()) < k)
        throw NotEnoughPlaces("need " + std::to_string(k) + " generator places, have " + std::to_string(cands.size()));

    DiagonalScheme s;
    s.curve = curve;
    s.k = k;
    s.n = n;
    s.construction.assign(cands.begin(), cands.begin() + k);

    for (const Place& p : s.construction) {
        s.generators.push_back(min_pole_generator(curve, p));
        s.all_attain_min &= s.generators.back().attains_min;
    }

    for (int i = 0; i < k; ++i) {
        FunctionExpr xi = fe_const(F.one());
        for (int j = 0; j < k; ++j)
            if (j != i) xi = fe_mul(F, xi, fe_inv(F, s.generators[j].z));
        s.x.push_back(xi);
    }

    // evaluation candidates: rational places outside every generator support
    Divisor excluded;
    for (const Generator& g : s.generators) excluded = divisor_add(excluded, divisor_of(curve, g.z));
    std::vector<Place> evals;
    for (const Place& p : curve.places())
        if (!excluded.contains(p)) evals.push_back(p);
    evals = detail::arrange(evals, policy, 2);
    if (static_cast<int>(evals.size()) < n)
        throw NotEnoughPlaces("need " + std::to_string(n) + " evaluation places, have " + std::to_string(evals.size()));
    s.evaluation.assign(evals.begin(), evals.begin() + n);

    PoleSum ps = pole_sum(curve, s.construction);
    s.sigma_hat = ps.sigma_hat;
    s.min_r = *std::min_element(ps.r_list.begin(), ps.r_list.end());
    s.r_star = guaranteed_threshold_formula(s.sigma_hat, s.min_r);

    for (int i = 0; i < k; ++i) {
        EvalValue v = evaluate(curve, s.x[i], s.construction[i]);
        if (!v.is_value() || F.is_zero(v.value))
            throw RookConditionViolated("x_i is not a unit at its own place");
        s.normalizer.push_back(v.value);
    }

    s.coeff = Matrix(n, k);
    s.M = Matrix(n, k * k);
    for (int w = 0; w < n; ++w) {
        for (int i = 0; i < k; ++i) s.coeff.at(w, i) = evaluate_value(curve, s.x[i], s.evaluation[w]);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) s.M.at(w, i * k + j) = F.mul(s.coeff.at(w, i), s.coeff.at(w, j));
    }

    RookReport rep = validate_rook_condition(s);
    if (!rep.pass) throw RookConditionViolated(rep.violations.front());
    return s;
}

inline int guaranteed_threshold(const DiagonalScheme& s) { return s.r_star; }

// ---------------------------------------------------------------------------
// encode / compute / decode

inline void check_uniform_shape(const std::vector<Matrix>& blocks, const char* label) {
    if (blocks.empty()) throw ShapeMismatch(std::string(label) + ": no blocks");
    for (const Matrix& b : blocks)
        if (b.rows != blocks[0].rows || b.cols != blocks[0].cols)
            throw ShapeMismatch(std::string(label) + ": inconsistent block shapes");
}

// worker index w is 0-based throughout
inline std::pair<Matrix, Matrix> encode_pair(const DiagonalScheme& s, const std::vector<Matrix>& A,
                                             const std::vector<Matrix>& B, int w) {
    if (static_cast<int>(A.size()) != s.k || static_cast<int>(B.size()) != s.k)
        throw ShapeMismatch("batch size must equal k");
    check_uniform_shape(A, "A");
    check_uniform_shape(B, "B");
    if (w < 0 || w >= s.n) throw ConfigError("worker index out of range");
    const Field& F = s.curve.field();
    Matrix At(A[0].rows, A[0].cols), Bt(B[0].rows, B[0].cols);
    for (int i = 0; i < s.k; ++i) {
        At = mat_add(F, At, mat_scale(F, s.coeff.at(w, i), A[i]));
        Bt = mat_add(F, Bt, mat_scale(F, s.coeff.at(w, i), B[i]));
    }
    return {At, Bt};
}

inline Matrix worker_multiply(const Field& F, const Matrix& At, const Matrix& Bt) { return mat_mul(F, At, Bt); }

namespace detail {

// Shared solver core: given the n x m coefficient matrix, the responding
// rows and a set of target functionals (rows of length m), produce for each
// target a combination lambda over the responses with lambda * M_S = target.
// in_rowspace is false where the functional is undetermined.
struct FunctionalCombos {
    int rank = 0;
    std::vector<bool> determined;
    std::vector<std::vector<FieldElement>> lambda;  // per target, length |S|
    std::vector<std::vector<FieldElement>> null_rows;  // left-nullspace of M_S
};

inline FunctionalCombos solve_functionals(const Field& F, const Matrix& M, const std::vector<int>& rows,
                                          const std::vector<std::vector<FieldElement>>& targets) {
    const int m = M.cols;
    const int ns = static_cast<int>(rows.size());
    Matrix aug(ns, m + ns);
    for (int r = 0; r < ns; ++r) {
        for (int c = 0; c < m; ++c) aug.at(r, c) = M.at(rows[r], c);
        aug.at(r, m + r) = F.one();
    }
    std::vector<int> pivots = rref(F, aug, m);
    FunctionalCombos out;
    out.rank = static_cast<int>(pivots.size());
    for (int r = out.rank; r < ns; ++r) {
        std::vector<FieldElement> mu(ns);
        for (int c = 0; c < ns; ++c) mu[c] = aug.at(r, m + c);
        out.null_rows.push_back(std::move(mu));
    }
    for (const auto& target : targets) {
        std::vector<FieldElement> t = target;
        std::vector<FieldElement> lam(ns, F.zero());
        for (size_t r = 0; r < pivots.size(); ++r) {
            FieldElement coef = t[pivots[r]];
            if (F.is_zero(coef)) continue;
            for (int c = 0; c < m; ++c) t[c] = F.sub(t[c], F.mul(coef, aug.at(static_cast<int>(r), c)));
            for (int c = 0; c < ns; ++c)
                lam[c] = F.add(lam[c], F.mul(coef, aug.at(static_cast<int>(r), m + c)));
        }
        bool ok = true;
        for (const FieldElement& v : t) ok &= F.is_zero(v);
        out.determined.push_back(ok);
        out.lambda.push_back(ok ? std::move(lam) : std::vector<FieldElement>{});
    }
    return out;
}

}  // namespace detail

// Success is a pure function of the responder set: all k diagonal
// functionals must lie in the rowspace of the responding rows.
inline bool decode_success(const DiagonalScheme& s, const std::vector<int>& responders) {
    const Field& F = s.curve.field();
    std::vector<std::vector<FieldElement>> targets;
    for (int l = 0; l < s.k; ++l) {
        std::vector<FieldElement> e(s.k * s.k, F.zero());
        e[l * s.k + l] = F.one();
        targets.push_back(std::move(e));
    }
    auto combos = detail::solve_functionals(F, s.M, responders, targets);
    for (bool d : combos.determined)
        if (!d) return false;
    return true;
}

inline std::vector<Matrix> decode_batch(const DiagonalScheme& s, const std::map<int, Matrix>& responses) {
    if (responses.empty()) throw InsufficientResponses("no responses", 0, s.k);
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
    for (int l = 0; l < s.k; ++l) {
        std::vector<FieldElement> e(s.k * s.k, F.zero());
        e[l * s.k + l] = F.one();
        targets.push_back(std::move(e));
    }
    auto combos = detail::solve_functionals(F, s.M, rows, targets);

    // corrupted-input guard: responses must satisfy every left-nullspace
    // relation of the coefficient rows
    for (const auto& mu : combos.null_rows) {
        Matrix acc(vals[0]->rows, vals[0]->cols);
        for (size_t r = 0; r < mu.size(); ++r)
            if (!F.is_zero(mu[r])) acc = mat_add(F, acc, mat_scale(F, mu[r], *vals[r]));
        for (const FieldElement& v : acc.a)
            if (!F.is_zero(v)) throw InconsistentResponses("responses violate a code constraint");
    }

    std::vector<Matrix> out;
    for (int l = 0; l < s.k; ++l) {
        if (!combos.determined[l])
            throw InsufficientResponses("diagonal output " + std::to_string(l) + " undetermined", combos.rank,
                                        mat_rank(F, s.M));
        Matrix acc(vals[0]->rows, vals[0]->cols);
        for (size_t r = 0; r < combos.lambda[l].size(); ++r)
            if (!F.is_zero(combos.lambda[l][r])) acc = mat_add(F, acc, mat_scale(F, combos.lambda[l][r], *vals[r]));
        out.push_back(std::move(acc));
    }
    return out;
}

// ---------------------------------------------------------------------------
// thresholds

struct EmpiricalThreshold {
    int r_emp = 0;
    bool witness_exists = false;
    std::vector<int> witness;  // failing subset of size r_emp - 1, when any
    uint64_t subsets_tested = 0;
};

struct ThresholdMode {
    enum class Kind { Exhaustive, MonteCarlo };
    Kind kind = Kind::Exhaustive;
    uint64_t seed = 0;
    int trials = 200;

    static ThresholdMode exhaustive() { return {}; }
    static ThresholdMode monte_carlo(uint64_t seed, int trials = 200) {
        return {Kind::MonteCarlo, seed, trials};
    }
};

// generic sweep over any subset-success predicate (shared with the other
// scheme kinds); success must be monotone under supersets
template <typename SuccessFn>
inline EmpiricalThreshold empirical_threshold_sweep(int n, const ThresholdMode& mode, SuccessFn&& success) {
    if (mode.kind == ThresholdMode::Kind::Exhaustive && n > 14)
        throw SearchSpaceTooLarge("exhaustive threshold sweep supports n <= 14");
    EmpiricalThreshold out;
    for (int R = 1; R <= n; ++R) {
        bool all_ok = true;
        std::vector<int> failing;
        if (mode.kind == ThresholdMode::Kind::Exhaustive) {
            std::vector<int> c = first_combination(R);
            do {
                ++out.subsets_tested;
                if (!success(c)) {
                    all_ok = false;
                    failing = c;
                    break;
                }
            } while (next_combination(c, n));
        } else {
            Rng rng(mode.seed ^ static_cast<uint64_t>(R) * 0x9e3779b97f4a7c15ull);
            for (int t = 0; t < mode.trials; ++t) {
                std::vector<int> c = sample_subset(rng, n, R);
                ++out.subsets_tested;
                if (!success(c)) {
                    all_ok = false;
                    failing = c;
                    break;
                }
            }
        }
        if (all_ok) {
            out.r_emp = R;
            return out;
        }
        out.witness_exists = true;
        out.witness = failing;
    }
    out.r_emp = n + 1;  // even the full set fails
    return out;
}

inline EmpiricalThreshold empirical_threshold(const DiagonalScheme& s, const ThresholdMode& mode) {
    return empirical_threshold_sweep(s.n, mode, [&](const std::vector<int>& subset) { return decode_success(s, subset); });
}

}  // namespace rook
