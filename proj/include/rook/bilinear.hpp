#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rook/diagonal.hpp"
#include "rook/errors.hpp"
#include "rook/linalg.hpp"

namespace rook {

// A bilinear matrix-multiplication algorithm for chi x zeta times
// zeta x upsilon block grids, using `rank` elementary products:
//   L_t = sum_{i,j} gamma(t, i*zeta+j)     * A_{i,j}
//   R_t = sum_{j,l} delta(t, j*upsilon+l)  * B_{j,l}
//   C_{i,l} = sum_t epsilon(i*upsilon+l, t) * L_t R_t
// Block lists are row-major: A[i*zeta+j], B[j*upsilon+l], C[i*upsilon+l].
struct BilinearAlgorithm {
    int chi = 0, zeta = 0, upsilon = 0;
    int rank = 0;
    Matrix gamma;    // rank x (chi*zeta)
    Matrix delta;    // rank x (zeta*upsilon)
    Matrix epsilon;  // (chi*upsilon) x rank
};

// One elementary product per (i, j, l) triple; epsilon is 0/1 selection.
inline BilinearAlgorithm naive_algorithm(const Field& F, int chi, int zeta, int upsilon) {
    if (chi < 1 || zeta < 1 || upsilon < 1) throw ConfigError("naive_algorithm needs dims >= 1");
    BilinearAlgorithm alg;
    alg.chi = chi;
    alg.zeta = zeta;
    alg.upsilon = upsilon;
    alg.rank = chi * zeta * upsilon;
    alg.gamma = Matrix(alg.rank, chi * zeta);
    alg.delta = Matrix(alg.rank, zeta * upsilon);
    alg.epsilon = Matrix(chi * upsilon, alg.rank);
    for (int i = 0; i < chi; ++i)
        for (int j = 0; j < zeta; ++j)
            for (int l = 0; l < upsilon; ++l) {
                int t = (i * zeta + j) * upsilon + l;
                alg.gamma.at(t, i * zeta + j) = F.one();
                alg.delta.at(t, j * upsilon + l) = F.one();
                alg.epsilon.at(i * upsilon + l, t) = F.one();
            }
    return alg;
}

// Strassen's rank-7 2x2x2 algorithm; the {-1, 0, 1} tables are mapped into
// the field (in characteristic 2 both signs land on 1).
inline BilinearAlgorithm strassen_2x2x2(const Field& F) {
    static constexpr int G[7][4] = {{1, 0, 0, 1}, {0, 0, 1, 1}, {1, 0, 0, 0}, {0, 0, 0, 1},
                                    {1, 1, 0, 0}, {-1, 0, 1, 0}, {0, 1, 0, -1}};
    static constexpr int D[7][4] = {{1, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, -1}, {-1, 0, 1, 0},
                                    {0, 0, 0, 1}, {1, 1, 0, 0}, {0, 0, 1, 1}};
    static constexpr int E[4][7] = {{1, 0, 0, 1, -1, 0, 1},
                                    {0, 0, 1, 0, 1, 0, 0},
                                    {0, 1, 0, 1, 0, 0, 0},
                                    {1, -1, 1, 0, 0, 1, 0}};
    BilinearAlgorithm alg;
    alg.chi = alg.zeta = alg.upsilon = 2;
    alg.rank = 7;
    alg.gamma = Matrix(7, 4);
    alg.delta = Matrix(7, 4);
    alg.epsilon = Matrix(4, 7);
    for (int t = 0; t < 7; ++t)
        for (int c = 0; c < 4; ++c) {
            alg.gamma.at(t, c) = F.from_int(G[t][c]);
            alg.delta.at(t, c) = F.from_int(D[t][c]);
            alg.epsilon.at(c, t) = F.from_int(E[c][t]);
        }
    return alg;
}

inline BilinearAlgorithm lift_algorithm(const Field& sub, const Field& ext, const BilinearAlgorithm& alg) {
    BilinearAlgorithm out = alg;
    out.gamma = lift_matrix(sub, ext, alg.gamma);
    out.delta = lift_matrix(sub, ext, alg.delta);
    out.epsilon = lift_matrix(sub, ext, alg.epsilon);
    return out;
}

namespace detail {

inline void check_block_grid(const std::vector<Matrix>& blocks, int want, const char* label) {
    if (static_cast<int>(blocks.size()) != want)
        throw ShapeMismatch(std::string(label) + ": expected " + std::to_string(want) + " blocks, got " +
                            std::to_string(blocks.size()));
    check_uniform_shape(blocks, label);
}

}  // namespace detail

// Left factors L_t of the elementary products.
inline std::vector<Matrix> left_factors(const Field& F, const BilinearAlgorithm& alg, const std::vector<Matrix>& A) {
    detail::check_block_grid(A, alg.chi * alg.zeta, "A");
    std::vector<Matrix> out;
    out.reserve(alg.rank);
    for (int t = 0; t < alg.rank; ++t) {
        Matrix acc(A[0].rows, A[0].cols);
        for (int c = 0; c < alg.gamma.cols; ++c)
            if (!F.is_zero(alg.gamma.at(t, c))) acc = mat_add(F, acc, mat_scale(F, alg.gamma.at(t, c), A[c]));
        out.push_back(std::move(acc));
    }
    return out;
}

// Right factors R_t of the elementary products.
inline std::vector<Matrix> right_factors(const Field& F, const BilinearAlgorithm& alg, const std::vector<Matrix>& B) {
    detail::check_block_grid(B, alg.zeta * alg.upsilon, "B");
    std::vector<Matrix> out;
    out.reserve(alg.rank);
    for (int t = 0; t < alg.rank; ++t) {
        Matrix acc(B[0].rows, B[0].cols);
        for (int c = 0; c < alg.delta.cols; ++c)
            if (!F.is_zero(alg.delta.at(t, c))) acc = mat_add(F, acc, mat_scale(F, alg.delta.at(t, c), B[c]));
        out.push_back(std::move(acc));
    }
    return out;
}

// Recombination step: C_{i,l} = sum_t epsilon(i*upsilon+l, t) * P_t.
inline std::vector<Matrix> recombine(const Field& F, const BilinearAlgorithm& alg, const std::vector<Matrix>& prods) {
    detail::check_block_grid(prods, alg.rank, "products");
    std::vector<Matrix> out;
    for (int e = 0; e < alg.chi * alg.upsilon; ++e) {
        Matrix acc(prods[0].rows, prods[0].cols);
        for (int t = 0; t < alg.rank; ++t)
            if (!F.is_zero(alg.epsilon.at(e, t))) acc = mat_add(F, acc, mat_scale(F, alg.epsilon.at(e, t), prods[t]));
        out.push_back(std::move(acc));
    }
    return out;
}

// Direct (uncoded) evaluation of the algorithm on block inputs.
inline std::vector<Matrix> bilinear_block_product(const Field& F, const BilinearAlgorithm& alg,
                                                  const std::vector<Matrix>& A, const std::vector<Matrix>& B) {
    std::vector<Matrix> L = left_factors(F, alg, A);
    std::vector<Matrix> R = right_factors(F, alg, B);
    if (L[0].cols != R[0].rows) throw ShapeMismatch("inner block dimensions disagree");
    std::vector<Matrix> prods;
    prods.reserve(alg.rank);
    for (int t = 0; t < alg.rank; ++t) prods.push_back(mat_mul(F, L[t], R[t]));
    return recombine(F, alg, prods);
}

// Reference block product, C_{i,l} = sum_j A_{i,j} B_{j,l}.
inline std::vector<Matrix> schoolbook_block_product(const Field& F, int chi, int zeta, int upsilon,
                                                    const std::vector<Matrix>& A, const std::vector<Matrix>& B) {
    detail::check_block_grid(A, chi * zeta, "A");
    detail::check_block_grid(B, zeta * upsilon, "B");
    if (A[0].cols != B[0].rows) throw ShapeMismatch("inner block dimensions disagree");
    std::vector<Matrix> out;
    for (int i = 0; i < chi; ++i)
        for (int l = 0; l < upsilon; ++l) {
            Matrix acc(A[0].rows, B[0].cols);
            for (int j = 0; j < zeta; ++j)
                acc = mat_add(F, acc, mat_mul(F, A[i * zeta + j], B[j * upsilon + l]));
            out.push_back(std::move(acc));
        }
    return out;
}

// ---------------------------------------------------------------------------
// verification

struct VerifyMode {
    enum class Kind { Auto, Exhaustive, Random };
    Kind kind = Kind::Auto;
    uint64_t seed = 0;
    int trials = 100;

    static VerifyMode auto_mode() { return {}; }
    static VerifyMode exhaustive() { return {Kind::Exhaustive, 0, 0}; }
    static VerifyMode random(uint64_t seed, int trials = 100) { return {Kind::Random, seed, trials}; }
};

struct VerifyResult {
    bool pass = true;
    bool exhaustive = false;
    uint64_t cases = 0;
    std::string witness;  // description of the first failing input pair
};

namespace detail {

inline std::string blocks_to_string(const Field& F, const std::vector<Matrix>& blocks) {
    std::string s;
    for (size_t b = 0; b < blocks.size(); ++b) {
        if (b) s += " | ";
        for (size_t e = 0; e < blocks[b].a.size(); ++e) {
            if (e) s += "; ";
            s += F.to_string(blocks[b].a[e]);
        }
    }
    return s;
}

inline bool verify_one(const Field& F, const BilinearAlgorithm& alg, const std::vector<Matrix>& A,
                       const std::vector<Matrix>& B, std::string& witness) {
    std::vector<Matrix> got = bilinear_block_product(F, alg, A, B);
    std::vector<Matrix> want = schoolbook_block_product(F, alg.chi, alg.zeta, alg.upsilon, A, B);
    for (size_t e = 0; e < want.size(); ++e)
        if (!(got[e] == want[e])) {
            witness = "A = [" + blocks_to_string(F, A) + "], B = [" + blocks_to_string(F, B) + "], output block " +
                      std::to_string(e) + ": got [" + blocks_to_string(F, {got[e]}) + "], want [" +
                      blocks_to_string(F, {want[e]}) + "]";
            return false;
        }
    return true;
}

}  // namespace detail

// Checks the defining identity of the algorithm. Exhaustive mode enumerates
// all scalar-block inputs (q^(chi*zeta + zeta*upsilon) cases); random mode
// draws seeded 2x2 blocks, which also catches commutativity-dependent
// shortcuts that scalar inputs cannot see.
inline VerifyResult verify_algorithm(const Field& F, const BilinearAlgorithm& alg,
                                     const VerifyMode& mode = VerifyMode::auto_mode()) {
    const int na = alg.chi * alg.zeta, nb = alg.zeta * alg.upsilon;
    uint64_t space = 1;
    bool small = true;
    for (int e = 0; e < na + nb && small; ++e) {
        space *= F.order();
        if (space > (1ull << 16)) small = false;
    }
    VerifyMode::Kind kind = mode.kind;
    if (kind == VerifyMode::Kind::Auto) kind = small ? VerifyMode::Kind::Exhaustive : VerifyMode::Kind::Random;

    VerifyResult res;
    if (kind == VerifyMode::Kind::Exhaustive) {
        if (!small) throw SearchSpaceTooLarge("exhaustive verification needs q^(chi*zeta + zeta*upsilon) <= 2^16");
        res.exhaustive = true;
        std::vector<uint32_t> idx(na + nb, 0);
        std::vector<Matrix> A(na, Matrix(1, 1)), B(nb, Matrix(1, 1));
        while (true) {
            for (int e = 0; e < na; ++e) A[e].at(0, 0) = F.element_at(idx[e]);
            for (int e = 0; e < nb; ++e) B[e].at(0, 0) = F.element_at(idx[na + e]);
            ++res.cases;
            if (!detail::verify_one(F, alg, A, B, res.witness)) {
                res.pass = false;
                return res;
            }
            int carry = 0;
            while (carry < na + nb && ++idx[carry] == F.order()) idx[carry++] = 0;
            if (carry == na + nb) break;
        }
        return res;
    }

    Rng rng(mode.seed);
    for (int t = 0; t < mode.trials; ++t) {
        std::vector<Matrix> A(na, Matrix(2, 2)), B(nb, Matrix(2, 2));
        for (auto& blk : A)
            for (auto& v : blk.a) v = F.element_at(static_cast<uint32_t>(rng.below(F.order())));
        for (auto& blk : B)
            for (auto& v : blk.a) v = F.element_at(static_cast<uint32_t>(rng.below(F.order())));
        ++res.cases;
        if (!detail::verify_one(F, alg, A, B, res.witness)) {
            res.pass = false;
            return res;
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// composition with the diagonal scheme

// Per-worker coefficients of the fused encoder: row w sends the raw blocks
// A_{i,j} straight to the worker share, with no intermediate L_t batch.
inline Matrix composed_coefficients_A(const DiagonalScheme& s, const BilinearAlgorithm& alg) {
    if (s.k != alg.rank) throw RankMismatch("scheme batch size k must equal the algorithm rank");
    return mat_mul(s.curve.field(), s.coeff, alg.gamma);  // n x (chi*zeta)
}

inline Matrix composed_coefficients_B(const DiagonalScheme& s, const BilinearAlgorithm& alg) {
    if (s.k != alg.rank) throw RankMismatch("scheme batch size k must equal the algorithm rank");
    return mat_mul(s.curve.field(), s.coeff, alg.delta);  // n x (zeta*upsilon)
}

// Full coded pipeline: form the elementary-product factors, run them through
// the diagonal scheme as a batch of size rank, decode the elementary
// products from the responding workers, and recombine.
inline std::vector<Matrix> general_matmul(const DiagonalScheme& s, const BilinearAlgorithm& alg,
                                          const std::vector<Matrix>& A, const std::vector<Matrix>& B,
                                          const std::vector<int>& responders) {
    if (s.k != alg.rank) throw RankMismatch("scheme batch size k must equal the algorithm rank");
    const Field& F = s.curve.field();
    std::vector<Matrix> L = left_factors(F, alg, A);
    std::vector<Matrix> R = right_factors(F, alg, B);
    if (L[0].cols != R[0].rows) throw ShapeMismatch("inner block dimensions disagree");
    std::map<int, Matrix> resp;
    for (int w : responders) {
        auto [At, Bt] = encode_pair(s, L, R, w);
        resp[w] = worker_multiply(F, At, Bt);
    }
    std::vector<Matrix> prods = decode_batch(s, resp);
    return recombine(F, alg, prods);
}

inline std::vector<Matrix> general_matmul(const DiagonalScheme& s, const BilinearAlgorithm& alg,
                                          const std::vector<Matrix>& A, const std::vector<Matrix>& B) {
    std::vector<int> all(s.n);
    for (int w = 0; w < s.n; ++w) all[w] = w;
    return general_matmul(s, alg, A, B, all);
}

}  // namespace rook
