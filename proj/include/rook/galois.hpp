#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rook/errors.hpp"

namespace rook {

// Element of GF(p^m), stored canonically as code = sum c_i * p^i over the
// little-endian coefficient vector (c_0, ..., c_{m-1}). Equality of codes is
// equality of elements.
struct FieldElement {
    uint32_t code = 0;
    friend bool operator==(FieldElement, FieldElement) = default;
    friend auto operator<=>(FieldElement, FieldElement) = default;
};

namespace detail {

// Dense polynomials over Z_p, low-to-high coefficients, used only for
// modulus selection and element arithmetic.
using ZpPoly = std::vector<uint32_t>;

inline void zp_trim(ZpPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline ZpPoly zp_mul(const ZpPoly& a, const ZpPoly& b, uint32_t p) {
    if (a.empty() || b.empty()) return {};
    ZpPoly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + static_cast<uint64_t>(a[i]) * b[j]) % p;
    zp_trim(c);
    return c;
}

// remainder of a modulo monic b
inline ZpPoly zp_mod(ZpPoly a, const ZpPoly& b, uint32_t p) {
    zp_trim(a);
    const size_t db = b.size() - 1;
    while (a.size() >= b.size()) {
        uint32_t lead = a.back();
        size_t shift = a.size() - 1 - db;
        for (size_t i = 0; i <= db; ++i) {
            uint64_t sub = static_cast<uint64_t>(lead) * b[i] % p;
            a[shift + i] = static_cast<uint32_t>((a[shift + i] + p - sub) % p);
        }
        zp_trim(a);
    }
    return a;
}

inline bool zp_is_zero(const ZpPoly& a) {
    for (uint32_t c : a)
        if (c != 0) return false;
    return true;
}

// no monic divisor of degree in [1, deg/2] => irreducible
inline bool zp_irreducible(const ZpPoly& f, uint32_t p) {
    const size_t deg = f.size() - 1;
    for (size_t d = 1; 2 * d <= deg; ++d) {
        // odometer over monic candidates of degree d
        ZpPoly g(d + 1, 0);
        g[d] = 1;
        while (true) {
            if (zp_is_zero(zp_mod(f, g, p))) return false;
            size_t i = 0;
            while (i < d && ++g[i] == p) g[i++] = 0;
            if (i == d) break;
        }
    }
    return true;
}

inline bool is_prime_u32(uint32_t n) {
    if (n < 2) return false;
    for (uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace detail

// GF(p^m) with a deterministic modulus: among monic irreducibles of degree m
// the one whose coefficient tuple (c_0, ..., c_{m-1}) is lexicographically
// smallest. Elements enumerate in the same tuple-lexicographic order, so any
// place-selection policy downstream is reproducible without shipped tables.
class Field {
   public:
    static constexpr uint32_t kMaxOrder = 1u << 20;

    static Field make(uint32_t p, uint32_t m) {
        if (!detail::is_prime_u32(p)) throw NotPrime("field characteristic " + std::to_string(p) + " is not prime");
        if (m < 1 || m > 8) throw DegreeTooLarge("extension degree must be in [1, 8], got " + std::to_string(m));
        uint64_t q = 1;
        for (uint32_t i = 0; i < m; ++i) {
            q *= p;
            if (q > kMaxOrder) throw DegreeTooLarge("field order exceeds 2^20");
        }
        Field f;
        f.p_ = p;
        f.m_ = m;
        f.q_ = static_cast<uint32_t>(q);
        if (m > 1) f.modulus_ = smallest_irreducible(p, m);
        return f;
    }

    // Parses an order q = p^m (q must be a prime power).
    static Field of_order(uint32_t q) {
        if (q < 2) throw NotPrime("field order must be >= 2");
        uint32_t p = 2;
        while (q % p != 0) {
            ++p;
            if (static_cast<uint64_t>(p) * p > q) {
                p = q;
                break;
            }
        }
        uint32_t m = 0;
        uint32_t rest = q;
        while (rest % p == 0) {
            rest /= p;
            ++m;
        }
        if (rest != 1) throw NotPrime(std::to_string(q) + " is not a prime power");
        return make(p, m);
    }

    uint32_t characteristic() const { return p_; }
    uint32_t degree() const { return m_; }
    uint32_t order() const { return q_; }
    const std::vector<uint32_t>& modulus() const { return modulus_; }

    friend bool operator==(const Field& a, const Field& b) { return a.p_ == b.p_ && a.m_ == b.m_; }

    FieldElement zero() const { return {0}; }
    FieldElement one() const { return {1}; }
    bool is_zero(FieldElement a) const { return a.code == 0; }

    // embeds an integer (possibly negative) through Z -> Z_p
    FieldElement from_int(int64_t v) const {
        int64_t r = v % static_cast<int64_t>(p_);
        if (r < 0) r += p_;
        return {static_cast<uint32_t>(r)};
    }

    std::vector<uint32_t> coeffs(FieldElement a) const {
        std::vector<uint32_t> c(m_);
        uint32_t v = a.code;
        for (uint32_t i = 0; i < m_; ++i) {
            c[i] = v % p_;
            v /= p_;
        }
        return c;
    }

    FieldElement from_coeffs(const std::vector<uint32_t>& c) const {
        if (c.size() != m_) throw FieldMismatch("coefficient vector length mismatch");
        uint32_t code = 0;
        for (uint32_t i = m_; i-- > 0;) {
            if (c[i] >= p_) throw FieldMismatch("coefficient out of range");
            code = code * p_ + c[i];
        }
        return {code};
    }

    FieldElement add(FieldElement a, FieldElement b) const {
        if (m_ == 1) return {(a.code + b.code) % p_};
        uint32_t out = 0, mult = 1;
        for (uint32_t i = 0; i < m_; ++i) {
            uint32_t da = a.code % p_, db = b.code % p_;
            a.code /= p_;
            b.code /= p_;
            out += (da + db) % p_ * mult;
            mult *= p_;
        }
        return {out};
    }

    FieldElement neg(FieldElement a) const {
        if (m_ == 1) return {a.code == 0 ? 0 : p_ - a.code};
        uint32_t out = 0, mult = 1;
        for (uint32_t i = 0; i < m_; ++i) {
            uint32_t d = a.code % p_;
            a.code /= p_;
            out += (d == 0 ? 0 : p_ - d) * mult;
            mult *= p_;
        }
        return {out};
    }

    FieldElement sub(FieldElement a, FieldElement b) const { return add(a, neg(b)); }

    FieldElement mul(FieldElement a, FieldElement b) const {
        if (m_ == 1) return {static_cast<uint32_t>(static_cast<uint64_t>(a.code) * b.code % p_)};
        detail::ZpPoly pa = to_poly(a), pb = to_poly(b);
        detail::ZpPoly prod = detail::zp_mul(pa, pb, p_);
        return from_poly(detail::zp_mod(std::move(prod), modulus_, p_));
    }

    FieldElement pow(FieldElement a, int64_t e) const {
        if (e < 0) {
            a = inv(a);
            e = -e;
        }
        FieldElement acc = one();
        while (e > 0) {
            if (e & 1) acc = mul(acc, a);
            a = mul(a, a);
            e >>= 1;
        }
        return acc;
    }

    FieldElement inv(FieldElement a) const {
        if (a.code == 0) throw DivisionByZero("inverse of zero");
        return pow(a, static_cast<int64_t>(q_) - 2);
    }

    FieldElement div(FieldElement a, FieldElement b) const { return mul(a, inv(b)); }

    // All b with b*b == a. Size 0, 1 or 2; exactly 1 in characteristic 2.
    std::vector<FieldElement> sqrt(FieldElement a) const {
        std::vector<FieldElement> roots;
        for (uint32_t i = 0; i < q_; ++i) {
            FieldElement b = element_at(i);
            if (mul(b, b) == a) roots.push_back(b);
        }
        return roots;
    }

    // i-th element in tuple-lexicographic order on (c_0, ..., c_{m-1})
    FieldElement element_at(uint32_t idx) const {
        if (m_ == 1) return {idx};
        std::vector<uint32_t> c(m_);
        for (uint32_t i = m_; i-- > 0;) {
            c[i] = idx % p_;
            idx /= p_;
        }
        return from_coeffs(c);
    }

    uint32_t index_of(FieldElement a) const {
        if (m_ == 1) return a.code;
        std::vector<uint32_t> c = coeffs(a);
        uint32_t idx = 0;
        for (uint32_t i = 0; i < m_; ++i) idx = idx * p_ + c[i];
        return idx;
    }

    std::vector<FieldElement> elements() const {
        std::vector<FieldElement> out;
        out.reserve(q_);
        for (uint32_t i = 0; i < q_; ++i) out.push_back(element_at(i));
        return out;
    }

    std::string to_string(FieldElement a) const {
        std::vector<uint32_t> c = coeffs(a);
        std::string s;
        for (uint32_t i = 0; i < m_; ++i) {
            if (i) s += ',';
            s += std::to_string(c[i]);
        }
        return s;
    }

    FieldElement parse(std::string_view s) const {
        std::vector<uint32_t> c;
        uint32_t cur = 0;
        bool any = false;
        for (char ch : s) {
            if (ch == ',') {
                if (!any) throw FieldMismatch("empty coefficient in element literal");
                c.push_back(cur);
                cur = 0;
                any = false;
            } else if (ch >= '0' && ch <= '9') {
                cur = cur * 10 + static_cast<uint32_t>(ch - '0');
                if (cur >= kMaxOrder) throw FieldMismatch("coefficient too large in element literal");
                any = true;
            } else {
                throw FieldMismatch("bad element literal: " + std::string(s));
            }
        }
        if (!any) throw FieldMismatch("empty coefficient in element literal");
        c.push_back(cur);
        if (c.size() != m_) throw FieldMismatch("element literal has wrong coefficient count");
        return from_coeffs(c);
    }

   private:
    static detail::ZpPoly smallest_irreducible(uint32_t p, uint32_t m) {
        // candidates ordered by (c_0, ..., c_{m-1}) tuple-lexicographically
        std::vector<uint32_t> c(m, 0);
        while (true) {
            detail::ZpPoly f(m + 1, 0);
            f[m] = 1;
            for (uint32_t i = 0; i < m; ++i) f[i] = c[i];
            if (detail::zp_irreducible(f, p)) return f;
            uint32_t i = m;
            while (i > 0 && ++c[i - 1] == p) c[--i] = 0;
            if (i == 0) throw Error("no irreducible polynomial found");  // unreachable
        }
    }

    detail::ZpPoly to_poly(FieldElement a) const {
        detail::ZpPoly out = coeffs(a);
        detail::zp_trim(out);
        return out;
    }

    FieldElement from_poly(const detail::ZpPoly& f) const {
        uint32_t code = 0, mult = 1;
        for (uint32_t i = 0; i < m_; ++i) {
            code += (i < f.size() ? f[i] : 0) * mult;
            mult *= p_;
        }
        return {code};
    }

    uint32_t p_ = 0, m_ = 0, q_ = 0;
    detail::ZpPoly modulus_;  // monic degree m, present only for m > 1
};

// Carries a prime-field value into (the prime subfield of) an extension.
inline FieldElement lift_element(const Field& from, const Field& to, FieldElement a) {
    if (from == to) return a;
    if (from.degree() != 1 || from.characteristic() != to.characteristic())
        throw FieldMismatch("can only lift from the prime subfield");
    return {a.code};
}

// Inverse of lift_element; rejects values outside the prime subfield.
inline FieldElement project_element(const Field& from, const Field& to, FieldElement a) {
    if (from == to) return a;
    if (to.degree() != 1 || from.characteristic() != to.characteristic())
        throw FieldMismatch("can only project onto the prime subfield");
    if (a.code >= from.characteristic()) throw FieldMismatch("value lies outside the prime subfield");
    return {a.code};
}

}  // namespace rook
