#include <catch2/catch_amalgamated.hpp>

#include <cstdio>

#include "rook/io.hpp"

using namespace rook;

namespace {

Curve hyper11() {
    Field F = Field::make(11, 1);
    // f(x) = x(x-1)(x-2)(x-3)(x-4) = x^5 + x^4 + 2x^3 + 5x^2 + 2x over GF(11)
    std::vector<FieldElement> f;
    for (uint32_t c : {0u, 2u, 5u, 2u, 1u, 1u}) f.push_back(F.element_at(c));
    return Curve::hyperelliptic(F, f);
}

}  // namespace

// ---------------------------------------------------------------------------
// curve descriptors

TEST_CASE("curve descriptors round-trip", "[io]") {
    Field F11 = Field::make(11, 1);

    Curve rat = Curve::rational(F11);
    CHECK(curve_to_string(rat) == "rational/q=11");
    Curve rat2 = curve_from_string("rational/q=11");
    CHECK(rat2.family() == CurveFamily::Rational);
    CHECK(rat2.field().order() == 11);

    Curve hyp = hyper11();
    CHECK(curve_to_string(hyp) == "hyper/q=11/f=0,2,5,2,1,1");
    Curve hyp2 = curve_from_string("hyper/q=11/f=0,2,5,2,1,1");
    CHECK(hyp2.family() == CurveFamily::Hyperelliptic);
    CHECK(hyp2.genus() == 2);
    REQUIRE(hyp2.f().size() == 6);
    for (size_t i = 0; i < 6; ++i) CHECK(hyp2.f()[i] == hyp.f()[i]);

    Curve her = Curve::hermitian(3);
    CHECK(curve_to_string(her) == "hermitian/q0=3");
    Curve her2 = curve_from_string("hermitian/q0=3");
    CHECK(her2.family() == CurveFamily::Hermitian);
    CHECK(her2.q0() == 3);
    CHECK(her2.field().order() == 9);
}

TEST_CASE("extension-field hyperelliptic descriptors use tuple coefficients", "[io]") {
    Field F9 = Field::make(3, 2);
    // f(x) = x^3 - x is square-free over GF(9) (f' = -1)
    std::vector<FieldElement> f = {F9.zero(), F9.neg(F9.one()), F9.zero(), F9.one()};
    Curve c = Curve::hyperelliptic(F9, f);
    CHECK(curve_to_string(c) == "hyper/q=9/f=0,0;2,0;0,0;1,0");
    Curve back = curve_from_string("hyper/q=9/f=0,0;2,0;0,0;1,0");
    REQUIRE(back.f().size() == 4);
    for (size_t i = 0; i < 4; ++i) CHECK(back.f()[i] == f[i]);
}

TEST_CASE("malformed curve descriptors are rejected", "[io]") {
    CHECK_THROWS_AS(curve_from_string(""), ConfigError);
    CHECK_THROWS_AS(curve_from_string("elliptic/q=11"), ConfigError);
    CHECK_THROWS_AS(curve_from_string("rational"), ConfigError);
    CHECK_THROWS_AS(curve_from_string("rational/p=11"), ConfigError);
    CHECK_THROWS_AS(curve_from_string("rational/q=abc"), ConfigError);
    CHECK_THROWS_AS(curve_from_string("rational/q=11/extra"), ConfigError);
    CHECK_THROWS_AS(curve_from_string("hyper/q=11"), ConfigError);
    CHECK_THROWS_AS(curve_from_string("hermitian/q0="), ConfigError);
}

// ---------------------------------------------------------------------------
// scheme descriptors

TEST_CASE("diagonal scheme JSON captures the full construction", "[io]") {
    Field F = Field::make(11, 1);
    DiagonalScheme s = build_diagonal(Curve::rational(F), 3, 8);
    nlohmann::json j = scheme_to_json(s);

    CHECK(j.at("kind") == "diagonal");
    CHECK(j.at("curve") == "rational/q=11");
    CHECK(j.at("k") == 3);
    CHECK(j.at("n") == 8);
    CHECK(j.at("policy").at("kind") == "canonical");
    CHECK_FALSE(j.at("policy").contains("seed"));
    CHECK(j.at("construction") == nlohmann::json({"a=0", "a=1", "a=2"}));
    CHECK(j.at("evaluation") ==
          nlohmann::json({"a=3", "a=4", "a=5", "a=6", "a=7", "a=8", "a=9", "a=10"}));
    CHECK(j.at("r_list") == nlohmann::json({1, 1, 1}));
    CHECK(j.at("sigma_hat") == 3);
    CHECK(j.at("r_star") == 5);

    // every serialized place parses back to a place on the curve
    Curve c = curve_from_string(j.at("curve").get<std::string>());
    for (const auto& ps : j.at("evaluation")) {
        Place p = place_from_string(c, ps.get<std::string>());
        CHECK(p.kind == Place::Kind::Affine);
    }
}

TEST_CASE("seeded policy is recorded with its seed", "[io]") {
    Field F = Field::make(11, 1);
    DiagonalScheme s = build_diagonal(Curve::rational(F), 3, 8, Policy::seeded(42));
    nlohmann::json j = scheme_to_json(s, Policy::seeded(42));
    CHECK(j.at("policy").at("kind") == "seeded");
    CHECK(j.at("policy").at("seed") == 42);
}

TEST_CASE("scheme JSON is byte-stable across rebuilds", "[io]") {
    Field F = Field::make(11, 1);
    std::string a = scheme_to_json(build_diagonal(Curve::rational(F), 3, 8, Policy::seeded(7)),
                                   Policy::seeded(7))
                        .dump(2);
    std::string b = scheme_to_json(build_diagonal(Curve::rational(F), 3, 8, Policy::seeded(7)),
                                   Policy::seeded(7))
                        .dump(2);
    CHECK(a == b);
}

TEST_CASE("entangled scheme JSON records maps and exponents", "[io]") {
    Field F = Field::make(13, 1);
    Curve c = Curve::rational(F);
    EntangledScheme s = build_entangled(c, Place::affine(F.zero()), 2, 2, 2, 12);
    nlohmann::json j = scheme_to_json(s);

    CHECK(j.at("kind") == "entangled");
    CHECK(j.at("curve") == "rational/q=13");
    CHECK(j.at("base") == "a=0");
    CHECK(j.at("dims") == nlohmann::json({2, 2, 2}));
    CHECK(j.at("eA") == nlohmann::json({0, 1, 4, 5}));
    CHECK(j.at("eB") == nlohmann::json({1, 3, 0, 2}));
    CHECK(j.at("d") == nlohmann::json({1, 3, 5, 7}));
    CHECK(j.at("exponents") == nlohmann::json({0, 1, 2, 3, 4, 5, 6, 7, 8}));
    CHECK(j.at("r0") == 1);
    CHECK(j.at("n") == 12);
    CHECK(j.at("r_star") == 9);
    CHECK(j.at("evaluation").size() == 12);
}

TEST_CASE("power scheme JSON records the order", "[io]") {
    Field F = Field::make(5, 1);
    SymmetricDecomposition d;
    d.order = 2;
    d.rank = 2;
    d.forms = {{F.from_int(2), F.from_int(2), F.zero()}, {F.one(), F.from_int(-1), F.zero()}};
    PowerScheme s = build_power_scheme(Curve::rational(F), d, 3);
    nlohmann::json j = scheme_to_json(s);
    CHECK(j.at("kind") == "power");
    CHECK(j.at("ell") == 2);
    CHECK(j.at("k") == 2);
    CHECK(j.at("n") == 3);
    CHECK(j.at("r_star") == s.r_star);
}

// ---------------------------------------------------------------------------
// bilinear algorithm files

TEST_CASE("algorithm JSON round-trips and still verifies", "[io]") {
    Field F3 = Field::make(3, 1);
    BilinearAlgorithm alg = strassen_2x2x2(F3);
    nlohmann::json j = algorithm_to_json(F3, alg);
    CHECK(j.at("chi") == 2);
    CHECK(j.at("zeta") == 2);
    CHECK(j.at("upsilon") == 2);
    CHECK(j.at("rank") == 7);
    CHECK(j.at("gamma").size() == 7);
    CHECK(j.at("gamma")[0] == nlohmann::json({1, 0, 0, 1}));
    CHECK(j.at("gamma")[5] == nlohmann::json({2, 0, 1, 0}));  // -1 reduced mod 3
    CHECK(j.at("epsilon").size() == 4);

    // parse back from the serialized text, not the in-memory object
    BilinearAlgorithm back = algorithm_from_json(F3, nlohmann::json::parse(j.dump()));
    CHECK(verify_algorithm(F3, back).pass);
    CHECK(back.gamma.a == alg.gamma.a);
    CHECK(back.delta.a == alg.delta.a);
    CHECK(back.epsilon.a == alg.epsilon.a);
}

TEST_CASE("algorithm JSON reduces integer grids into the field", "[io]") {
    Field F5 = Field::make(5, 1);
    nlohmann::json j = algorithm_to_json(F5, naive_algorithm(F5, 2, 1, 3));
    j["gamma"][0][0] = -4;  // == 1 mod 5
    j["gamma"][1][0] = 6;   // == 1 mod 5
    BilinearAlgorithm alg = algorithm_from_json(F5, j);
    CHECK(alg.gamma.at(0, 0) == F5.one());
    CHECK(alg.gamma.at(1, 0) == F5.one());
    CHECK(verify_algorithm(F5, alg).pass);
}

TEST_CASE("malformed algorithm JSON is rejected", "[io]") {
    Field F3 = Field::make(3, 1);
    nlohmann::json good = algorithm_to_json(F3, strassen_2x2x2(F3));

    nlohmann::json missing = good;
    missing.erase("gamma");
    CHECK_THROWS_AS(algorithm_from_json(F3, missing), ConfigError);

    nlohmann::json short_rows = good;
    short_rows["gamma"].erase(6);
    CHECK_THROWS_AS(algorithm_from_json(F3, short_rows), ConfigError);

    nlohmann::json ragged = good;
    ragged["delta"][2].erase(3);
    CHECK_THROWS_AS(algorithm_from_json(F3, ragged), ConfigError);

    nlohmann::json bad_dims = good;
    bad_dims["rank"] = 0;
    CHECK_THROWS_AS(algorithm_from_json(F3, bad_dims), ConfigError);
}

TEST_CASE("algorithms outside the prime subfield refuse integer serialization", "[io]") {
    Field F4 = Field::make(2, 2);
    BilinearAlgorithm alg = naive_algorithm(F4, 2, 2, 2);
    alg.gamma.at(0, 0) = F4.element_at(1);  // the generator, not a prime-subfield value
    CHECK_THROWS_AS(algorithm_to_json(F4, alg), ConfigError);
}

// ---------------------------------------------------------------------------
// polynomial files

TEST_CASE("polynomial text round-trips term maps", "[io]") {
    Field F3 = Field::make(3, 1);
    MultivariatePoly p = poly_zero(2);
    p.terms[{0, 0}] = F3.one();
    p.terms[{1, 2}] = F3.from_int(2);
    CHECK(poly_to_string(F3, p) == "0,0:1\n1,2:2\n");
    CHECK(poly_from_string(F3, 2, "0,0:1\n1,2:2\n") == p);

    // comments and blank lines are ignored
    CHECK(poly_from_string(F3, 2, "# header\n\n0,0:1\n1,2:2\n") == p);

    // zero polynomial serializes to nothing and parses back
    CHECK(poly_to_string(F3, poly_zero(2)).empty());
    CHECK(poly_from_string(F3, 2, "") == poly_zero(2));
}

TEST_CASE("polynomial parsing reduces exponents and merges terms", "[io]") {
    Field F3 = Field::make(3, 1);
    // x^3 == x as a function on GF(3)
    MultivariatePoly p = poly_from_string(F3, 2, "3,0:1\n");
    MultivariatePoly want = poly_zero(2);
    want.terms[{1, 0}] = F3.one();
    CHECK(p == want);

    // 1 + 2 == 0 mod 3: the merged term vanishes
    CHECK(poly_from_string(F3, 2, "1,0:1\n1,0:2\n") == poly_zero(2));
}

TEST_CASE("polynomial text supports extension-field coefficients", "[io]") {
    Field F4 = Field::make(2, 2);
    MultivariatePoly p = poly_zero(1);
    p.terms[{2}] = F4.element_at(3);  // 1 + generator
    CHECK(poly_to_string(F4, p) == "2:1,1\n");
    CHECK(poly_from_string(F4, 1, "2:1,1\n") == p);
}

TEST_CASE("malformed polynomial lines are rejected", "[io]") {
    Field F3 = Field::make(3, 1);
    CHECK_THROWS_AS(poly_from_string(F3, 2, "1,0\n"), ConfigError);
    CHECK_THROWS_AS(poly_from_string(F3, 2, "1:1\n"), ConfigError);
    CHECK_THROWS_AS(poly_from_string(F3, 2, "1,0,0:1\n"), ConfigError);
    CHECK_THROWS_AS(poly_from_string(F3, 2, "-1,0:1\n"), ConfigError);
    CHECK_THROWS_AS(poly_from_string(F3, 2, "x,0:1\n"), ConfigError);
}

// ---------------------------------------------------------------------------
// decomposition files

TEST_CASE("decomposition text round-trips and re-verifies", "[io]") {
    Field F5 = Field::make(5, 1);
    SymmetricDecomposition d;
    d.order = 2;
    d.rank = 2;
    d.forms = {{F5.from_int(2), F5.from_int(2), F5.zero()}, {F5.one(), F5.from_int(4), F5.zero()}};
    CHECK(decomposition_to_string(F5, d) == "2; 2\n2;2;0\n1;4;0\n");

    SymmetricDecomposition back = decomposition_from_string(F5, "2; 2\n2;2;0\n1;4;0\n");
    CHECK(back.order == 2);
    CHECK(back.rank == 2);
    REQUIRE(back.forms.size() == 2);
    CHECK(back.forms[0] == d.forms[0]);
    CHECK(back.forms[1] == d.forms[1]);

    // x1*x2 = 2*(2x1+2x2)^2 + (x1-x2)^2 over GF(5)... checked via the module's
    // own verifier on the reloaded object
    MultivariatePoly target = poly_zero(2);
    target.terms[{1, 1}] = F5.one();
    CHECK(verify_decomposition(F5, target, back).pass);
}

TEST_CASE("malformed decomposition files are rejected", "[io]") {
    Field F5 = Field::make(5, 1);
    CHECK_THROWS_AS(decomposition_from_string(F5, ""), ConfigError);
    CHECK_THROWS_AS(decomposition_from_string(F5, "2\n1;1;0\n"), ConfigError);
    CHECK_THROWS_AS(decomposition_from_string(F5, "2; 3\n2;2;0\n1;4;0\n"), ConfigError);
    CHECK_THROWS_AS(decomposition_from_string(F5, "2; 2\n2;2;0\n1;4\n"), ConfigError);
    CHECK_THROWS_AS(decomposition_from_string(F5, "0; 1\n1;0\n"), ConfigError);
}

// ---------------------------------------------------------------------------
// truth tables

TEST_CASE("truth table CSV round-trips in input-index order", "[io]") {
    Field F2 = Field::make(2, 1);
    TruthTable tab = table_from_function(F2, 2, 1, [&](const std::vector<FieldElement>& a) {
        return std::vector<FieldElement>{F2.mul(a[0], a[1])};
    });
    std::string csv = table_to_csv(F2, tab);
    CHECK(csv == "in1,in2,out\n0,0,0\n1,0,0\n0,1,0\n1,1,1\n");

    TruthTable back = table_from_csv(F2, 2, 1, csv);
    CHECK(back.out == tab.out);

    // shuffled rows index by input, landing in the same table
    TruthTable shuffled = table_from_csv(F2, 2, 1, "in1,in2,out\n1,1,1\n0,1,0\n1,0,0\n0,0,0\n");
    CHECK(shuffled.out == tab.out);
}

TEST_CASE("multi-output truth tables label out columns", "[io]") {
    Field F3 = Field::make(3, 1);
    TruthTable tab = table_from_function(F3, 1, 2, [&](const std::vector<FieldElement>& a) {
        return std::vector<FieldElement>{a[0], F3.mul(a[0], a[0])};
    });
    std::string csv = table_to_csv(F3, tab);
    CHECK(csv == "in1,out1,out2\n0,0,0\n1,1,1\n2,2,1\n");
    CHECK(table_from_csv(F3, 1, 2, csv).out == tab.out);
}

TEST_CASE("extension-field truth table cells are quoted", "[io]") {
    Field F4 = Field::make(2, 2);
    TruthTable tab = table_from_function(F4, 1, 1, [&](const std::vector<FieldElement>& a) {
        return std::vector<FieldElement>{F4.mul(a[0], a[0])};
    });
    std::string csv = table_to_csv(F4, tab);
    CHECK(csv.find("\"1,1\"") != std::string::npos);
    CHECK(table_from_csv(F4, 1, 1, csv).out == tab.out);
}

TEST_CASE("malformed truth table CSV is rejected", "[io]") {
    Field F2 = Field::make(2, 1);
    CHECK_THROWS_AS(table_from_csv(F2, 2, 1, ""), ConfigError);
    // incomplete
    CHECK_THROWS_AS(table_from_csv(F2, 2, 1, "in1,in2,out\n0,0,0\n"), ConfigError);
    // duplicate row
    CHECK_THROWS_AS(table_from_csv(F2, 2, 1, "in1,in2,out\n0,0,0\n0,0,1\n1,0,0\n0,1,0\n"),
                    ConfigError);
    // wrong cell count
    CHECK_THROWS_AS(table_from_csv(F2, 2, 1, "in1,in2,out\n0,0\n"), ConfigError);
    // unterminated quote
    CHECK_THROWS_AS(table_from_csv(F2, 2, 1, "in1,in2,out\n\"0,0,0\n"), ConfigError);
}

// ---------------------------------------------------------------------------
// threshold and success-curve reports

TEST_CASE("threshold CSV uses the documented column order", "[io]") {
    CHECK(threshold_csv_header() == "curve,k,n,sigma_hat,R_star,R_emp,bound_2sigma,subsets_tested,witness");

    ThresholdRow r;
    r.curve = "rational/q=11";
    r.k = 3;
    r.n = 8;
    r.sigma_hat = 3;
    r.r_star = 5;
    r.r_emp = 5;
    r.bound_2sigma = 6;
    r.subsets_tested = 218;
    r.witness = {0, 1, 2, 3};
    CHECK(threshold_row_to_csv(r) == "rational/q=11,3,8,3,5,5,6,218,0;1;2;3");

    r.witness.clear();
    CHECK(threshold_row_to_csv(r) == "rational/q=11,3,8,3,5,5,6,218,");
}

TEST_CASE("curve descriptors with commas are CSV-quoted", "[io]") {
    ThresholdRow r;
    r.curve = "hyper/q=11/f=0,2,5,2,1,1";
    r.k = 2;
    r.n = 8;
    r.sigma_hat = 4;
    r.r_star = 5;
    r.r_emp = 5;
    r.bound_2sigma = 8;
    r.subsets_tested = 100;
    std::string line = threshold_row_to_csv(r);
    CHECK(line.substr(0, 28) == "\"hyper/q=11/f=0,2,5,2,1,1\",2");
    std::vector<std::string> cells = rook::detail::csv_split(line);
    REQUIRE(cells.size() == 9);
    CHECK(cells[0] == "hyper/q=11/f=0,2,5,2,1,1");
    CHECK(cells[8].empty());
}

TEST_CASE("success-curve CSV prints six decimal places", "[io]") {
    std::vector<CurvePoint> pts = {{1, 0.0, 50, 7}, {2, 1.0 / 3.0, 50, 7}, {5, 1.0, 50, 7}};
    CHECK(success_curve_to_csv(pts) ==
          "m,success_rate,trials,seed\n"
          "1,0.000000,50,7\n"
          "2,0.333333,50,7\n"
          "5,1.000000,50,7\n");
}

// ---------------------------------------------------------------------------
// certification and run reports

TEST_CASE("certification JSON distinguishes certified from witness", "[io]") {
    Field F = Field::make(11, 1);
    DiagonalScheme s = build_diagonal(Curve::rational(F), 3, 8);

    Certification ok = certify_adversarial(s, 5);
    nlohmann::json jok = certification_to_json(ok);
    CHECK(jok.dump() == R"({"size":5,"status":"certified","subsets_checked":56})");

    Certification bad = certify_adversarial(s, 4);
    nlohmann::json jbad = certification_to_json(bad);
    CHECK(jbad.at("status") == "witness");
    CHECK(jbad.at("size") == 4);
    REQUIRE(jbad.contains("witness"));
    CHECK(jbad.at("witness").size() == 4);
}

TEST_CASE("run report JSON never includes wall-clock time", "[io]") {
    Field F = Field::make(11, 1);
    DiagonalScheme s = build_diagonal(Curve::rational(F), 3, 8);
    Rng rng(123);
    std::vector<Matrix> A, B;
    for (int i = 0; i < 3; ++i) {
        Matrix a(2, 2), b(2, 2);
        for (auto& v : a.a) v = F.element_at(static_cast<uint32_t>(rng.below(11)));
        for (auto& v : b.a) v = F.element_at(static_cast<uint32_t>(rng.below(11)));
        A.push_back(a);
        B.push_back(b);
    }

    RunReport ok = simulate_run(s, A, B, StragglerModel::fixed_set({0, 1, 2, 3, 4}));
    REQUIRE(ok.success);
    nlohmann::json j = report_to_json(ok);
    CHECK_FALSE(j.contains("wall_ms"));
    CHECK_FALSE(j.contains("failure_witness"));
    CHECK(j.at("scheme_id") == "diagonal/rational/q=11/k=3/n=8");
    CHECK(j.at("success") == true);
    CHECK(j.at("digest") == ok.digest);
    CHECK(j.at("trials") == 1);
    CHECK(j.at("responders") == nlohmann::json({0, 1, 2, 3, 4}));

    // identical runs serialize byte-identically even though wall time differs
    RunReport ok2 = simulate_run(s, A, B, StragglerModel::fixed_set({0, 1, 2, 3, 4}));
    CHECK(report_to_json(ok2).dump(2) == j.dump(2));

    RunReport fail = simulate_run(s, A, B, StragglerModel::fixed_set({0, 1, 2, 3}));
    REQUIRE_FALSE(fail.success);
    nlohmann::json jf = report_to_json(fail);
    CHECK(jf.contains("failure_witness"));
    CHECK(jf.at("digest") == 0);
}

// ---------------------------------------------------------------------------
// file helpers

TEST_CASE("text files round-trip and missing files throw", "[io]") {
    std::string path = "io_roundtrip_tmp.txt";
    write_text_file(path, "m,success_rate\n1,0.500000\n");
    CHECK(read_text_file(path) == "m,success_rate\n1,0.500000\n");
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_text_file("definitely/not/a/real/path.txt"), ConfigError);
}
