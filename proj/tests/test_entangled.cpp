#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "rook/bilinear.hpp"
#include "rook/entangled.hpp"

using namespace rook;

namespace {

Curve hyper11() {
    Field F = Field::make(11, 1);
    std::vector<FieldElement> f;
    for (int c : {0, 2, 5, 2, 1, 1}) f.push_back(F.from_int(c));
    return Curve::hyperelliptic(F, f);
}

Matrix random_matrix(const Field& F, Rng& rng, int r, int c) {
    Matrix m(r, c);
    for (auto& v : m.a) v = F.element_at(static_cast<uint32_t>(rng.below(F.order())));
    return m;
}

std::vector<Matrix> random_blocks(const Field& F, Rng& rng, int count, int r, int c) {
    std::vector<Matrix> out;
    for (int i = 0; i < count; ++i) out.push_back(random_matrix(F, rng, r, c));
    return out;
}

std::map<int, Matrix> all_responses(const EntangledScheme& s, const std::vector<Matrix>& A,
                                    const std::vector<Matrix>& B) {
    std::map<int, Matrix> resp;
    for (int w = 0; w < s.n; ++w) {
        auto [At, Bt] = encode_entangled(s, A, B, w);
        resp[w] = worker_multiply(s.curve.field(), At, Bt);
    }
    return resp;
}

}  // namespace

TEST_CASE("default exponent maps are decodable", "[entangled]") {
    ExponentMaps m = ExponentMaps::defaults(2, 2, 2);
    CHECK(m.eA == std::vector<int>{0, 1, 4, 5});
    CHECK(m.eB == std::vector<int>{1, 3, 0, 2});
    CHECK(m.d == std::vector<int>{1, 3, 5, 7});
    CHECK(check_decodability(m).pass);

    ExponentMaps big = ExponentMaps::defaults(3, 2, 4);
    CHECK(check_decodability(big).pass);
    std::set<int> sums;
    for (int a : big.eA)
        for (int b : big.eB) sums.insert(a + b);
    CHECK(sums.size() == 25);  // chi*zeta*upsilon + zeta - 1

    CHECK_THROWS_AS(ExponentMaps::defaults(0, 1, 1), ConfigError);
}

TEST_CASE("degenerate maps fail with a witness", "[entangled]") {
    ExponentMaps m = ExponentMaps::defaults(2, 2, 2);
    std::fill(m.eA.begin(), m.eA.end(), 0);
    std::fill(m.eB.begin(), m.eB.end(), 0);
    std::fill(m.d.begin(), m.d.end(), 0);
    DecodabilityReport rep = check_decodability(m);
    CHECK_FALSE(rep.pass);
    CHECK_FALSE(rep.witness.empty());
}

TEST_CASE("exponent support size is chi*zeta*upsilon + zeta - 1 for all small dims", "[entangled]") {
    for (int chi = 1; chi <= 4; ++chi)
        for (int zeta = 1; zeta <= 4; ++zeta)
            for (int upsilon = 1; upsilon <= 4; ++upsilon) {
                ExponentMaps m = ExponentMaps::defaults(chi, zeta, upsilon);
                REQUIRE(check_decodability(m).pass);
                std::set<int> sums;
                for (int a : m.eA)
                    for (int b : m.eB) sums.insert(a + b);
                REQUIRE(static_cast<int>(sums.size()) == chi * zeta * upsilon + zeta - 1);
            }
}

TEST_CASE("genus-0 (2,2,2) scheme over GF(13)", "[entangled]") {
    Field F = Field::make(13, 1);
    Curve c = Curve::rational(F);
    EntangledScheme s = build_entangled(c, Place::affine(F.from_int(0)), 2, 2, 2, 12);
    CHECK(s.E == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8});
    CHECK(s.r_star == 9);
    CHECK(s.gen.r == 1);
    REQUIRE(s.evaluation.size() == 12);
    for (int w = 0; w < 12; ++w) CHECK(s.evaluation[w] == Place::affine(F.from_int(w + 1)));
    // shares are powers of x here: coefficient columns are Vandermonde rows
    CHECK(s.M.at(2, 3) == F.pow(F.from_int(3), 3));
}

TEST_CASE("(2,2,2) decode matches schoolbook from any 9-subset", "[entangled]") {
    Field F = Field::make(13, 1);
    EntangledScheme s = build_entangled(Curve::rational(F), Place::affine(F.from_int(0)), 2, 2, 2, 12);
    Rng rng(7);
    auto A = random_blocks(F, rng, 4, 2, 2);
    auto B = random_blocks(F, rng, 4, 2, 2);
    auto want = schoolbook_block_product(F, 2, 2, 2, A, B);
    auto resp = all_responses(s, A, B);

    CHECK(decode_entangled(s, resp) == want);

    std::vector<int> sub = first_combination(9);
    int decoded = 0;
    do {
        REQUIRE(decode_success(s, sub));
        if (decoded % 37 == 0) {  // spot-check full decodes along the way
            std::map<int, Matrix> part;
            for (int w : sub) part[w] = resp.at(w);
            REQUIRE(decode_entangled(s, part) == want);
        }
        ++decoded;
    } while (next_combination(sub, s.n));
    CHECK(decoded == 220);  // C(12,9)
}

TEST_CASE("8-subsets: sign-symmetric evaluation sets decode, others do not", "[entangled]") {
    Field F = Field::make(13, 1);
    EntangledScheme s = build_entangled(Curve::rational(F), Place::affine(F.from_int(0)), 2, 2, 2, 12);
    // workers w sit at x = w+1; the needed functionals are the odd-degree
    // coefficients, killed exactly when the x-multiset is symmetric under
    // negation mod 13
    std::vector<int> plain = {0, 1, 2, 3, 4, 5, 6, 7};  // x in {1..8}: not symmetric
    CHECK_FALSE(decode_success(s, plain));
    std::vector<int> symmetric = {0, 1, 2, 3, 8, 9, 10, 11};  // x in ±{1,2,3,4}
    CHECK(decode_success(s, symmetric));

    Rng rng(11);
    auto A = random_blocks(F, rng, 4, 2, 2);
    auto B = random_blocks(F, rng, 4, 2, 2);
    auto resp = all_responses(s, A, B);
    std::map<int, Matrix> part;
    for (int w : plain) part[w] = resp.at(w);
    CHECK_THROWS_AS(decode_entangled(s, part), InsufficientResponses);
    part.clear();
    for (int w : symmetric) part[w] = resp.at(w);
    CHECK(decode_entangled(s, part) == schoolbook_block_product(F, 2, 2, 2, A, B));
}

TEST_CASE("empirical threshold of the (2,2,2) scheme is 9", "[entangled]") {
    Field F = Field::make(13, 1);
    EntangledScheme s = build_entangled(Curve::rational(F), Place::affine(F.from_int(0)), 2, 2, 2, 12);
    EmpiricalThreshold t = empirical_threshold(s, ThresholdMode::exhaustive());
    CHECK(t.r_emp == 9);
    CHECK(t.witness_exists);
    CHECK(t.witness.size() == 8);
    CHECK_FALSE(decode_success(s, t.witness));
}

TEST_CASE("(1,1,1) needs a single response", "[entangled]") {
    Field F = Field::make(5, 1);
    EntangledScheme s = build_entangled(Curve::rational(F), Place::affine(F.from_int(0)), 1, 1, 1, 4);
    CHECK(s.E == std::vector<int>{0});
    CHECK(s.r_star == 1);
    Rng rng(3);
    auto A = random_blocks(F, rng, 1, 2, 2);
    auto B = random_blocks(F, rng, 1, 2, 2);
    auto [At, Bt] = encode_entangled(s, A, B, 2);
    std::map<int, Matrix> resp{{2, worker_multiply(F, At, Bt)}};
    auto out = decode_entangled(s, resp);
    REQUIRE(out.size() == 1);
    CHECK(out[0] == mat_mul(F, A[0], B[0]));
}

TEST_CASE("hyperelliptic base at infinity doubles every pole order", "[entangled]") {
    Curve c = hyper11();
    EntangledScheme s = build_entangled(c, Place::infinity(), 2, 2, 2, 10);
    CHECK(s.gen.r == 2);
    CHECK(s.E.back() == 8);
    CHECK(s.r_star == 17);  // 2 * 8 + 1
    // supp(z) = {infinity, the ramified place over 0}: 10 of 12 places remain
    for (const Place& q : s.evaluation) {
        CHECK(q.kind == Place::Kind::Affine);
        CHECK_FALSE(q == Place::affine(c.field().from_int(0), c.field().zero()));
    }
}

TEST_CASE("hyperelliptic (1,1,2) roundtrip at threshold", "[entangled]") {
    Curve c = hyper11();
    const Field& F = c.field();
    EntangledScheme s = build_entangled(c, Place::infinity(), 1, 1, 2, 10);
    CHECK(s.E == std::vector<int>{0, 1});
    CHECK(s.r_star == 3);
    Rng rng(19);
    auto A = random_blocks(F, rng, 1, 2, 2);
    auto B = random_blocks(F, rng, 2, 2, 2);
    auto want = schoolbook_block_product(F, 1, 1, 2, A, B);
    auto resp = all_responses(s, A, B);
    CHECK(decode_entangled(s, resp) == want);
    std::vector<int> sub = first_combination(3);
    do {
        std::map<int, Matrix> part;
        for (int w : sub) part[w] = resp.at(w);
        REQUIRE(decode_entangled(s, part) == want);
    } while (next_combination(sub, s.n));
}

TEST_CASE("hermitian base place with non-minimal generator", "[entangled]") {
    Curve c = Curve::hermitian(3);
    const Field& F = c.field();
    Place base = Place::affine(F.from_int(0), F.from_int(0));
    EntangledScheme s = build_entangled(c, base, 2, 1, 2, 20);
    CHECK(s.gen.r == 4);  // tangent pole order q0 + 1
    CHECK_FALSE(s.gen.attains_min);
    CHECK(s.E == std::vector<int>{0, 1, 2, 3});
    CHECK(s.r_star == 13);
    Rng rng(29);
    auto A = random_blocks(F, rng, 2, 1, 2);
    auto B = random_blocks(F, rng, 2, 2, 1);
    auto want = schoolbook_block_product(F, 2, 1, 2, A, B);
    auto resp = all_responses(s, A, B);
    CHECK(decode_entangled(s, resp) == want);
    std::map<int, Matrix> part;
    for (int w = 3; w < 16; ++w) part[w] = resp.at(w);  // an arbitrary 13-subset
    CHECK(decode_entangled(s, part) == want);
}

TEST_CASE("build guards", "[entangled]") {
    Field F5 = Field::make(5, 1);
    Curve r5 = Curve::rational(F5);
    CHECK_THROWS_AS(build_entangled(r5, Place::affine(F5.from_int(0)), 2, 2, 2, 5), NotEnoughPlaces);
    CHECK_THROWS_AS(build_entangled(r5, Place::affine(F5.from_int(0)), 1, 1, 1, 0), ConfigError);
    Curve h = hyper11();
    Place split = Place::affine(h.field().from_int(6), h.field().from_int(4));
    CHECK_THROWS_AS(build_entangled(h, split, 2, 2, 2, 5), UnsupportedPlace);
}

TEST_CASE("corrupted entangled responses are rejected", "[entangled]") {
    Field F = Field::make(13, 1);
    EntangledScheme s = build_entangled(Curve::rational(F), Place::affine(F.from_int(0)), 2, 2, 2, 12);
    Rng rng(5);
    auto A = random_blocks(F, rng, 4, 1, 1);
    auto B = random_blocks(F, rng, 4, 1, 1);
    auto resp = all_responses(s, A, B);
    resp.at(5).at(0, 0) = F.add(resp.at(5).at(0, 0), F.one());
    CHECK_THROWS_AS(decode_entangled(s, resp), InconsistentResponses);
}

TEST_CASE("seeded policy reproduces entangled schemes", "[entangled]") {
    Field F = Field::make(13, 1);
    Curve c = Curve::rational(F);
    Place base = Place::affine(F.from_int(0));
    EntangledScheme a = build_entangled(c, base, 2, 2, 2, 10, Policy::seeded(4));
    EntangledScheme b = build_entangled(c, base, 2, 2, 2, 10, Policy::seeded(4));
    CHECK(a.evaluation == b.evaluation);
    CHECK(a.M == b.M);
    Rng rng(1);
    auto A = random_blocks(F, rng, 4, 1, 1);
    auto B = random_blocks(F, rng, 4, 1, 1);
    CHECK(decode_entangled(a, all_responses(a, A, B)) == schoolbook_block_product(F, 2, 2, 2, A, B));
}
