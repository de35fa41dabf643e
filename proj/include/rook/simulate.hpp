#pragma once

#include <algorithm>
#include <chrono>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rook/diagonal.hpp"
#include "rook/entangled.hpp"
#include "rook/errors.hpp"
#include "rook/tensor_power.hpp"

namespace rook {

// Stragglers are pure erasures: a worker either responds with the correct
// value or not at all.
struct StragglerModel {
    enum class Kind { FixedSet, Bernoulli, ExhaustiveAdversary };
    Kind kind = Kind::FixedSet;
    std::vector<int> responders;  // FixedSet
    double p = 1.0;               // Bernoulli response probability
    uint64_t seed = 0;            // Bernoulli
    int size = 0;                 // ExhaustiveAdversary subset size

    static StragglerModel fixed_set(std::vector<int> responders) {
        StragglerModel m;
        m.kind = Kind::FixedSet;
        m.responders = std::move(responders);
        return m;
    }
    static StragglerModel bernoulli(double p, uint64_t seed) {
        if (p < 0.0 || p > 1.0) throw ConfigError("bernoulli response probability must lie in [0, 1]");
        StragglerModel m;
        m.kind = Kind::Bernoulli;
        m.p = p;
        m.seed = seed;
        return m;
    }
    static StragglerModel adversary(int size) {
        if (size < 0) throw ConfigError("adversary subset size must be >= 0");
        StragglerModel m;
        m.kind = Kind::ExhaustiveAdversary;
        m.size = size;
        return m;
    }
};

struct RunReport {
    std::string scheme_id;
    std::vector<int> responders;  // responding set, or the witness subset for an adversary
    bool success = false;
    uint64_t digest = 0;  // FNV-1a over the decoded outputs; 0 on failure
    std::string failure_witness;
    uint64_t trials = 1;
    double wall_ms = 0.0;  // informational only; never serialized
};

namespace detail {

struct Fnv1a {
    uint64_t h = 1469598103934665603ull;
    void add(uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xff;
            h *= 1099511628211ull;
        }
    }
};

inline void digest_matrix(Fnv1a& d, const Matrix& m) {
    d.add(static_cast<uint64_t>(m.rows));
    d.add(static_cast<uint64_t>(m.cols));
    for (const FieldElement& v : m.a) d.add(v.code);
}

inline std::string family_tag(const Curve& c) {
    switch (c.family()) {
        case CurveFamily::Rational: return "rational";
        case CurveFamily::Hyperelliptic: return "hyper";
        case CurveFamily::Hermitian: return "hermitian";
    }
    return "unknown";
}

inline std::vector<int> bernoulli_subset(int n, double p, uint64_t seed) {
    Rng rng(seed);
    std::vector<int> out;
    const uint64_t threshold = static_cast<uint64_t>(p * 9007199254740992.0);  // p * 2^53
    for (int w = 0; w < n; ++w)
        if ((rng.next() >> 11) < threshold) out.push_back(w);
    return out;
}

inline void validate_fixed_set(const std::vector<int>& responders, int n) {
    std::vector<int> sorted = responders;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] < 0 || sorted[i] >= n) throw ConfigError("fixed responder set contains an invalid worker index");
        if (i > 0 && sorted[i] == sorted[i - 1]) throw ConfigError("fixed responder set contains duplicates");
    }
}

// Shared driver. decode_digest(responders) runs the real decode and hashes
// the outputs (throwing decode errors on failure); success(responders) is
// the payload-free determinacy predicate used for adversarial sweeps.
template <typename DecodeFn, typename SuccessFn>
RunReport simulate_core(int n, std::string id, const StragglerModel& model, DecodeFn&& decode_digest,
                        SuccessFn&& success) {
    auto start = std::chrono::steady_clock::now();
    RunReport rep;
    rep.scheme_id = std::move(id);
    if (model.kind == StragglerModel::Kind::ExhaustiveAdversary) {
        if (model.size > n) throw ConfigError("adversary subset size exceeds the worker count");
        if (binomial(n, model.size) > (1ull << 22))
            throw SearchSpaceTooLarge("adversarial certification supports C(n, size) <= 2^22 subsets");
        rep.success = true;
        std::vector<int> c = first_combination(model.size);
        rep.trials = 0;
        do {
            ++rep.trials;
            if (!success(c)) {
                rep.success = false;
                rep.responders = c;
                rep.failure_witness = "decode is undetermined for a responder subset of size " +
                                      std::to_string(model.size);
                break;
            }
        } while (next_combination(c, n));
    } else {
        rep.responders = model.kind == StragglerModel::Kind::FixedSet
                             ? model.responders
                             : bernoulli_subset(n, model.p, model.seed);
        validate_fixed_set(rep.responders, n);
        try {
            rep.digest = decode_digest(rep.responders);
            rep.success = true;
        } catch (const InsufficientResponses& e) {
            rep.failure_witness = e.what();
        } catch (const InconsistentResponses& e) {
            rep.failure_witness = e.what();
        }
    }
    rep.wall_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(std::chrono::steady_clock::now() - start)
            .count();
    return rep;
}

}  // namespace detail

inline RunReport simulate_run(const DiagonalScheme& s, const std::vector<Matrix>& A, const std::vector<Matrix>& B,
                              const StragglerModel& model) {
    std::string id = "diagonal/" + detail::family_tag(s.curve) + "/q=" + std::to_string(s.curve.field().order()) +
                     "/k=" + std::to_string(s.k) + "/n=" + std::to_string(s.n);
    return detail::simulate_core(
        s.n, std::move(id), model,
        [&](const std::vector<int>& resp) {
            std::map<int, Matrix> responses;
            for (int w : resp) {
                auto [At, Bt] = encode_pair(s, A, B, w);
                responses[w] = worker_multiply(s.curve.field(), At, Bt);
            }
            detail::Fnv1a d;
            for (const Matrix& m : decode_batch(s, responses)) detail::digest_matrix(d, m);
            return d.h;
        },
        [&](const std::vector<int>& resp) { return decode_success(s, resp); });
}

inline RunReport simulate_run(const EntangledScheme& s, const std::vector<Matrix>& A, const std::vector<Matrix>& B,
                              const StragglerModel& model) {
    std::string id = "entangled/" + detail::family_tag(s.curve) + "/q=" + std::to_string(s.curve.field().order()) +
                     "/dims=" + std::to_string(s.maps.chi) + "x" + std::to_string(s.maps.zeta) + "x" +
                     std::to_string(s.maps.upsilon) + "/n=" + std::to_string(s.n);
    return detail::simulate_core(
        s.n, std::move(id), model,
        [&](const std::vector<int>& resp) {
            std::map<int, Matrix> responses;
            for (int w : resp) {
                auto [At, Bt] = encode_entangled(s, A, B, w);
                responses[w] = worker_multiply(s.curve.field(), At, Bt);
            }
            detail::Fnv1a d;
            for (const Matrix& m : decode_entangled(s, responses)) detail::digest_matrix(d, m);
            return d.h;
        },
        [&](const std::vector<int>& resp) { return decode_success(s, resp); });
}

inline RunReport simulate_run(const PowerScheme& s, const std::vector<FieldElement>& v, const StragglerModel& model) {
    std::string id = "power/" + detail::family_tag(s.curve) + "/q=" + std::to_string(s.curve.field().order()) +
                     "/k=" + std::to_string(s.k) + "/ell=" + std::to_string(s.ell) + "/n=" + std::to_string(s.n);
    return detail::simulate_core(
        s.n, std::move(id), model,
        [&](const std::vector<int>& resp) {
            std::map<int, FieldElement> responses;
            for (int w : resp) responses[w] = worker_power(s, encode_power(s, v, w));
            PowerOutput out = decode_power(s, responses);
            detail::Fnv1a d;
            for (const FieldElement& p : out.powers) d.add(p.code);
            d.add(out.value.code);
            return d.h;
        },
        [&](const std::vector<int>& resp) { return decode_success(s, resp); });
}

// ---------------------------------------------------------------------------
// success curves and adversarial certification

struct CurvePoint {
    int m = 0;
    double success_rate = 0.0;
    int trials = 0;
    uint64_t seed = 0;
};

// For each responder count m, the fraction of seeded uniform m-subsets that
// decode. Success is determinacy of the responder set, so no payloads are
// generated. Exactly 1.0 for every m >= the guaranteed threshold.
template <typename Scheme>
std::vector<CurvePoint> success_curve(const Scheme& s, int trials, uint64_t seed) {
    if (trials < 1) throw ConfigError("success_curve needs trials >= 1");
    std::vector<CurvePoint> out;
    for (int m = 1; m <= s.n; ++m) {
        Rng rng(seed ^ static_cast<uint64_t>(m) * 0x9e3779b97f4a7c15ull);
        int ok = 0;
        for (int t = 0; t < trials; ++t)
            if (decode_success(s, sample_subset(rng, s.n, m))) ++ok;
        out.push_back({m, static_cast<double>(ok) / trials, trials, seed});
    }
    return out;
}

struct Certification {
    enum class Status { Certified, Witness };
    Status status = Status::Certified;
    int size = 0;
    std::vector<int> witness;  // failing subset when status == Witness
    uint64_t subsets_checked = 0;
};

// Checks decode determinacy on every size-subset of the workers; Certified
// means the size is a valid recovery threshold for this scheme.
template <typename Scheme>
Certification certify_adversarial(const Scheme& s, int size) {
    if (size < 0 || size > s.n) throw ConfigError("certification size must lie in [0, n]");
    if (binomial(s.n, size) > (1ull << 22))
        throw SearchSpaceTooLarge("adversarial certification supports C(n, size) <= 2^22 subsets");
    Certification cert;
    cert.size = size;
    std::vector<int> c = first_combination(size);
    do {
        ++cert.subsets_checked;
        if (!decode_success(s, c)) {
            cert.status = Certification::Status::Witness;
            cert.witness = c;
            return cert;
        }
    } while (next_combination(c, s.n));
    return cert;
}

}  // namespace rook
