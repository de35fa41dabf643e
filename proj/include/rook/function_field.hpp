#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "rook/errors.hpp"
#include "rook/galois.hpp"

namespace rook {

enum class CurveFamily { Rational, Hyperelliptic, Hermitian };

// A rational or degree-2 place. Affine places carry coordinates; the
// quadratic kind marks the inert degree-2 place over an x with non-square
// f(x) on a hyperelliptic curve (divisor bookkeeping only).
struct Place {
    enum class Kind { Infinity, Affine, QuadraticAffine };
    Kind kind = Kind::Infinity;
    FieldElement x{}, y{};
    bool has_y = false;

    int degree() const { return kind == Kind::QuadraticAffine ? 2 : 1; }

    static Place infinity() { return {}; }
    static Place affine(FieldElement x) { return {Kind::Affine, x, {}, false}; }
    static Place affine(FieldElement x, FieldElement y) { return {Kind::Affine, x, y, true}; }
    static Place quadratic(FieldElement x) { return {Kind::QuadraticAffine, x, {}, false}; }

    friend bool operator==(const Place&, const Place&) = default;
};

// deterministic order used for divisor maps and tie-breaking
struct PlaceOrder {
    bool operator()(const Place& p, const Place& q) const {
        auto key = [](const Place& r) {
            return std::tuple(static_cast<int>(r.kind), r.x.code, r.has_y ? r.y.code : 0u);
        };
        return key(p) < key(q);
    }
};

using Divisor = std::map<Place, int, PlaceOrder>;

// The function dictionary: x, y, x - a, and the Hermitian tangent line
// y - b - a^q0 (x - a). All functions the schemes need are scalar multiples
// of products of powers of these.
struct Primitive {
    enum class Kind { X, Y, XminusA, TangentAt };
    Kind kind = Kind::X;
    FieldElement a{}, b{};

    static Primitive x() { return {Kind::XminusA, {}, {}}; }  // x == (x - 0)
    static Primitive y() { return {Kind::Y, {}, {}}; }
    static Primitive x_minus(FieldElement a) { return {Kind::XminusA, a, {}}; }
    static Primitive tangent_at(FieldElement a, FieldElement b) { return {Kind::TangentAt, a, b}; }

    friend bool operator==(const Primitive&, const Primitive&) = default;
    std::tuple<int, uint32_t, uint32_t> key() const { return {static_cast<int>(kind), a.code, b.code}; }
};

// c * prod prim_i^{e_i}, factors deduplicated and sorted. scalar 0 encodes
// the zero function (accepted by evaluate, rejected by valuation/divisor).
struct FunctionExpr {
    FieldElement scalar{1};
    std::vector<std::pair<Primitive, int>> factors;
};

inline FunctionExpr fe_const(FieldElement c) { return {c, {}}; }

inline FunctionExpr fe_primitive(Primitive p, int e = 1) {
    FunctionExpr f;
    if (e != 0) f.factors.push_back({p, e});
    return f;
}

inline FunctionExpr fe_mul(const Field& F, const FunctionExpr& a, const FunctionExpr& b) {
    FunctionExpr out;
    out.scalar = F.mul(a.scalar, b.scalar);
    if (F.is_zero(out.scalar)) return fe_const(F.zero());
    out.factors = a.factors;
    for (const auto& [p, e] : b.factors) {
        auto it = std::find_if(out.factors.begin(), out.factors.end(), [&](const auto& f) { return f.first == p; });
        if (it == out.factors.end())
            out.factors.push_back({p, e});
        else if ((it->second += e) == 0)
            out.factors.erase(it);
    }
    std::sort(out.factors.begin(), out.factors.end(),
              [](const auto& l, const auto& r) { return l.first.key() < r.first.key(); });
    return out;
}

inline FunctionExpr fe_pow(const Field& F, const FunctionExpr& a, int e) {
    if (e == 0) return fe_const(F.one());
    FunctionExpr out;
    out.scalar = F.pow(a.scalar, e);
    out.factors = a.factors;
    for (auto& [p, exp] : out.factors) exp *= e;
    return out;
}

inline FunctionExpr fe_inv(const Field& F, const FunctionExpr& a) { return fe_pow(F, a, -1); }

namespace detail {

// polynomials with FieldElement coefficients, low-to-high (for validating
// hyperelliptic models)
using FPoly = std::vector<FieldElement>;

inline void fp_trim(const Field& F, FPoly& f) {
    while (!f.empty() && F.is_zero(f.back())) f.pop_back();
}

inline FieldElement fp_eval(const Field& F, const FPoly& f, FieldElement a) {
    FieldElement acc = F.zero();
    for (size_t i = f.size(); i-- > 0;) acc = F.add(F.mul(acc, a), f[i]);
    return acc;
}

inline FPoly fp_derivative(const Field& F, const FPoly& f) {
    FPoly d;
    for (size_t i = 1; i < f.size(); ++i) d.push_back(F.mul(F.from_int(static_cast<int64_t>(i)), f[i]));
    fp_trim(F, d);
    return d;
}

inline FPoly fp_mod(const Field& F, FPoly a, FPoly b) {
    fp_trim(F, a);
    fp_trim(F, b);
    FieldElement lead_inv = F.inv(b.back());
    while (a.size() >= b.size()) {
        FieldElement coef = F.mul(a.back(), lead_inv);
        size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] = F.sub(a[shift + i], F.mul(coef, b[i]));
        fp_trim(F, a);
    }
    return a;
}

inline FPoly fp_gcd(const Field& F, FPoly a, FPoly b) {
    fp_trim(F, a);
    fp_trim(F, b);
    while (!b.empty()) {
        FPoly r = fp_mod(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

}  // namespace detail

// One of the three supported curve families, with its rational places
// cached in canonical order: infinity first, then affine places by
// (x index, y index) in the field's enumeration order.
class Curve {
   public:
    static Curve rational(const Field& F) {
        Curve c;
        c.family_ = CurveFamily::Rational;
        c.field_ = F;
        c.genus_ = 0;
        c.places_.push_back(Place::infinity());
        for (FieldElement a : F.elements()) c.places_.push_back(Place::affine(a));
        return c;
    }

    // y^2 = f(x), f monic square-free of odd degree 2g+1 >= 3, char != 2
    static Curve hyperelliptic(const Field& F, std::vector<FieldElement> f) {
        if (F.characteristic() == 2)
            throw CharacteristicTwoHyperelliptic("hyperelliptic model y^2 = f(x) needs characteristic != 2");
        detail::fp_trim(F, f);
        size_t deg = f.empty() ? 0 : f.size() - 1;
        if (deg < 3 || deg % 2 == 0)
            throw EvenDegreeUnsupported("f must have odd degree >= 3, got degree " + std::to_string(deg));
        if (!(f.back() == F.one())) throw Error("f must be monic");
        detail::FPoly g = detail::fp_gcd(F, f, detail::fp_derivative(F, f));
        if (g.size() > 1) throw NotSquareFree("f has a repeated root");
        Curve c;
        c.family_ = CurveFamily::Hyperelliptic;
        c.field_ = F;
        c.f_ = std::move(f);
        c.genus_ = static_cast<uint32_t>((deg - 1) / 2);
        c.places_.push_back(Place::infinity());
        for (FieldElement a : F.elements()) {
            FieldElement v = detail::fp_eval(F, c.f_, a);
            auto roots = F.sqrt(v);
            if (F.is_zero(v))
                c.places_.push_back(Place::affine(a, F.zero()));
            else
                for (FieldElement b : roots) c.places_.push_back(Place::affine(a, b));
        }
        return c;
    }

    // y^q0 + y = x^(q0+1) over GF(q0^2)
    static Curve hermitian(uint32_t q0) {
        Field F = [&] {
            try {
                Field base = Field::of_order(q0);
                return Field::make(base.characteristic(), 2 * base.degree());
            } catch (const Error& e) {
                throw BadHermitianField("q0 must be a prime power with q0^2 <= 2^20: " + std::string(e.what()));
            }
        }();
        Curve c;
        c.family_ = CurveFamily::Hermitian;
        c.field_ = F;
        c.q0_ = q0;
        c.genus_ = q0 * (q0 - 1) / 2;
        c.places_.push_back(Place::infinity());
        for (FieldElement a : F.elements()) {
            FieldElement rhs = F.pow(a, q0 + 1);
            for (FieldElement b : F.elements())
                if (F.add(F.pow(b, q0), b) == rhs) c.places_.push_back(Place::affine(a, b));
        }
        return c;
    }

    CurveFamily family() const { return family_; }
    const Field& field() const { return field_; }
    uint32_t genus() const { return genus_; }
    uint32_t q0() const { return q0_; }
    const std::vector<FieldElement>& f() const { return f_; }
    FieldElement f_at(FieldElement a) const { return detail::fp_eval(field_, f_, a); }

    // all rational (degree-1) places, canonical order
    const std::vector<Place>& places() const { return places_; }

    bool on_curve(const Place& p) const {
        switch (p.kind) {
            case Place::Kind::Infinity:
                return true;
            case Place::Kind::Affine:
                switch (family_) {
                    case CurveFamily::Rational:
                        return !p.has_y;
                    case CurveFamily::Hyperelliptic:
                        return p.has_y && field_.mul(p.y, p.y) == f_at(p.x);
                    case CurveFamily::Hermitian:
                        return p.has_y && field_.add(field_.pow(p.y, q0_), p.y) == field_.pow(p.x, q0_ + 1);
                }
                return false;
            case Place::Kind::QuadraticAffine:
                return family_ == CurveFamily::Hyperelliptic && field_.sqrt(f_at(p.x)).empty();
        }
        return false;
    }

   private:
    CurveFamily family_ = CurveFamily::Rational;
    Field field_ = Field::make(2, 1);
    uint32_t genus_ = 0;
    uint32_t q0_ = 0;
    std::vector<FieldElement> f_;
    std::vector<Place> places_;
};

// ---------------------------------------------------------------------------
// closed-form primitive valuations

inline int primitive_valuation(const Curve& c, const Primitive& prim, const Place& p) {
    const Field& F = c.field();
    switch (c.family()) {
        case CurveFamily::Rational:
            if (prim.kind != Primitive::Kind::XminusA && prim.kind != Primitive::Kind::X)
                throw UnsupportedPrimitive("only x - a exists on the rational curve");
            if (p.kind == Place::Kind::Infinity) return -1;
            if (p.kind == Place::Kind::QuadraticAffine) throw UnsupportedPlace("no quadratic places on the rational curve");
            return p.x == prim.a ? 1 : 0;

        case CurveFamily::Hyperelliptic: {
            int two_g_plus_1 = static_cast<int>(c.f().size()) - 1;
            switch (prim.kind) {
                case Primitive::Kind::X:
                case Primitive::Kind::XminusA:
                    if (p.kind == Place::Kind::Infinity) return -2;
                    if (p.x != prim.a) return 0;
                    if (p.kind == Place::Kind::QuadraticAffine) return 1;
                    return F.is_zero(p.y) ? 2 : 1;
                case Primitive::Kind::Y:
                    if (p.kind == Place::Kind::Infinity) return -two_g_plus_1;
                    if (p.kind == Place::Kind::QuadraticAffine) return 0;  // y^2 = f(x) != 0 there
                    return F.is_zero(p.y) ? 1 : 0;
                case Primitive::Kind::TangentAt:
                    throw UnsupportedPrimitive("tangent primitives exist only on the Hermitian curve");
            }
            break;
        }

        case CurveFamily::Hermitian: {
            int q0 = static_cast<int>(c.q0());
            if (p.kind == Place::Kind::QuadraticAffine) throw UnsupportedPlace("no quadratic places on the Hermitian curve");
            switch (prim.kind) {
                case Primitive::Kind::X:
                case Primitive::Kind::XminusA:
                    if (p.kind == Place::Kind::Infinity) return -q0;
                    return p.x == prim.a ? 1 : 0;
                case Primitive::Kind::Y:
                    if (p.kind == Place::Kind::Infinity) return -(q0 + 1);
                    return (F.is_zero(p.x) && F.is_zero(p.y)) ? q0 + 1 : 0;
                case Primitive::Kind::TangentAt: {
                    if (!c.on_curve(Place::affine(prim.a, prim.b)))
                        throw UnsupportedPrimitive("tangent base point is not on the curve");
                    if (p.kind == Place::Kind::Infinity) return -(q0 + 1);
                    return (p.x == prim.a && p.y == prim.b) ? q0 + 1 : 0;
                }
            }
            break;
        }
    }
    throw UnsupportedPrimitive("unhandled primitive/curve combination");
}

inline int valuation(const Curve& c, const FunctionExpr& f, const Place& p) {
    if (c.field().is_zero(f.scalar)) throw Error("valuation of the zero function is undefined");
    int total = 0;
    for (const auto& [prim, e] : f.factors) total += e * primitive_valuation(c, prim, p);
    return total;
}

// ---------------------------------------------------------------------------
// evaluation

struct EvalValue {
    enum class Tag { Value, Zero, Pole };
    Tag tag = Tag::Value;
    FieldElement value{};  // set when tag == Value
    int order = 0;         // set (positive) when tag is Zero or Pole

    static EvalValue finite(FieldElement v) { return {Tag::Value, v, 0}; }
    static EvalValue zero(int ord) { return {Tag::Zero, {}, ord}; }
    static EvalValue pole(int ord) { return {Tag::Pole, {}, ord}; }
    bool is_value() const { return tag == Tag::Value; }
    friend bool operator==(const EvalValue&, const EvalValue&) = default;
};

inline FieldElement primitive_value(const Curve& c, const Primitive& prim, const Place& p) {
    const Field& F = c.field();
    if (p.kind != Place::Kind::Affine) throw UnsupportedPlace("can only evaluate at affine rational places");
    switch (prim.kind) {
        case Primitive::Kind::X:
        case Primitive::Kind::XminusA:
            return F.sub(p.x, prim.a);
        case Primitive::Kind::Y:
            return p.y;
        case Primitive::Kind::TangentAt:
            return F.sub(F.sub(p.y, prim.b), F.mul(F.pow(prim.a, c.q0()), F.sub(p.x, prim.a)));
    }
    throw UnsupportedPrimitive("unhandled primitive");
}

inline EvalValue evaluate(const Curve& c, const FunctionExpr& f, const Place& p) {
    const Field& F = c.field();
    if (p.degree() != 1) throw UnsupportedPlace("evaluation requires a rational place");
    if (F.is_zero(f.scalar)) return EvalValue::finite(F.zero());
    int total = 0;
    bool all_flat = true;
    for (const auto& [prim, e] : f.factors) {
        int v = primitive_valuation(c, prim, p);
        total += e * v;
        all_flat &= (v == 0);
    }
    if (total < 0) return EvalValue::pole(-total);
    if (total > 0) return EvalValue::zero(total);
    if (!all_flat)
        throw IndeterminateForm("cancelling zero/pole factors at the evaluation place");
    FieldElement acc = f.scalar;
    for (const auto& [prim, e] : f.factors) acc = F.mul(acc, F.pow(primitive_value(c, prim, p), e));
    return EvalValue::finite(acc);
}

// convenience: evaluate where a finite nonzero value is required
inline FieldElement evaluate_value(const Curve& c, const FunctionExpr& f, const Place& p) {
    EvalValue v = evaluate(c, f, p);
    if (v.tag == EvalValue::Tag::Zero) return c.field().zero();
    if (!v.is_value()) throw IndeterminateForm("expected a finite value, found a pole");
    return v.value;
}

// ---------------------------------------------------------------------------
// divisors

inline int divisor_degree(const Divisor& d) {
    int deg = 0;
    for (const auto& [p, a] : d) deg += a * p.degree();
    return deg;
}

inline void divisor_accumulate(Divisor& d, const Place& p, int coeff) {
    if (coeff == 0) return;
    auto [it, fresh] = d.try_emplace(p, coeff);
    if (!fresh && (it->second += coeff) == 0) d.erase(it);
}

inline Divisor divisor_add(const Divisor& a, const Divisor& b) {
    Divisor out = a;
    for (const auto& [p, c] : b) divisor_accumulate(out, p, c);
    return out;
}

inline Divisor primitive_divisor(const Curve& c, const Primitive& prim) {
    const Field& F = c.field();
    Divisor d;
    switch (c.family()) {
        case CurveFamily::Rational:
            if (prim.kind != Primitive::Kind::XminusA && prim.kind != Primitive::Kind::X)
                throw UnsupportedPrimitive("only x - a exists on the rational curve");
            divisor_accumulate(d, Place::affine(prim.a), 1);
            divisor_accumulate(d, Place::infinity(), -1);
            return d;

        case CurveFamily::Hyperelliptic: {
            int two_g_plus_1 = static_cast<int>(c.f().size()) - 1;
            switch (prim.kind) {
                case Primitive::Kind::X:
                case Primitive::Kind::XminusA: {
                    FieldElement v = c.f_at(prim.a);
                    if (F.is_zero(v))
                        divisor_accumulate(d, Place::affine(prim.a, F.zero()), 2);
                    else {
                        auto roots = F.sqrt(v);
                        if (roots.empty())
                            divisor_accumulate(d, Place::quadratic(prim.a), 1);
                        else
                            for (FieldElement b : roots) divisor_accumulate(d, Place::affine(prim.a, b), 1);
                    }
                    divisor_accumulate(d, Place::infinity(), -2);
                    return d;
                }
                case Primitive::Kind::Y: {
                    int roots = 0;
                    for (FieldElement a : F.elements())
                        if (F.is_zero(c.f_at(a))) {
                            divisor_accumulate(d, Place::affine(a, F.zero()), 1);
                            ++roots;
                        }
                    if (roots != two_g_plus_1)
                        throw UnsupportedPrimitive("divisor of y requires f to split into distinct linear factors");
                    divisor_accumulate(d, Place::infinity(), -two_g_plus_1);
                    return d;
                }
                case Primitive::Kind::TangentAt:
                    throw UnsupportedPrimitive("tangent primitives exist only on the Hermitian curve");
            }
            break;
        }

        case CurveFamily::Hermitian: {
            int q0 = static_cast<int>(c.q0());
            switch (prim.kind) {
                case Primitive::Kind::X:
                case Primitive::Kind::XminusA: {
                    FieldElement rhs = F.pow(prim.a, c.q0() + 1);
                    for (FieldElement b : F.elements())
                        if (F.add(F.pow(b, c.q0()), b) == rhs) divisor_accumulate(d, Place::affine(prim.a, b), 1);
                    divisor_accumulate(d, Place::infinity(), -q0);
                    return d;
                }
                case Primitive::Kind::Y:
                    divisor_accumulate(d, Place::affine(F.zero(), F.zero()), q0 + 1);
                    divisor_accumulate(d, Place::infinity(), -(q0 + 1));
                    return d;
                case Primitive::Kind::TangentAt:
                    if (!c.on_curve(Place::affine(prim.a, prim.b)))
                        throw UnsupportedPrimitive("tangent base point is not on the curve");
                    divisor_accumulate(d, Place::affine(prim.a, prim.b), q0 + 1);
                    divisor_accumulate(d, Place::infinity(), -(q0 + 1));
                    return d;
            }
            break;
        }
    }
    throw UnsupportedPrimitive("unhandled primitive/curve combination");
}

inline Divisor divisor_of(const Curve& c, const FunctionExpr& f) {
    if (c.field().is_zero(f.scalar)) throw Error("divisor of the zero function is undefined");
    Divisor d;
    for (const auto& [prim, e] : f.factors) {
        Divisor pd = primitive_divisor(c, prim);
        for (auto& [p, a] : pd) divisor_accumulate(d, p, a * e);
    }
    return d;
}

// ---------------------------------------------------------------------------
// generators and pole sums

struct Generator {
    FunctionExpr z;       // pole divisor exactly r * place
    int r = 0;            // effective pole order
    bool attains_min = true;  // false when r exceeds the true min pole number
};

inline bool supports_generator(const Curve& c, const Place& p) {
    switch (c.family()) {
        case CurveFamily::Rational:
            return p.kind != Place::Kind::QuadraticAffine;
        case CurveFamily::Hyperelliptic:
            return p.kind == Place::Kind::Infinity ||
                   (p.kind == Place::Kind::Affine && c.field().is_zero(p.y));
        case CurveFamily::Hermitian:
            return p.kind != Place::Kind::QuadraticAffine;
    }
    return false;
}

inline Generator min_pole_generator(const Curve& c, const Place& p) {
    const Field& F = c.field();
    switch (c.family()) {
        case CurveFamily::Rational:
            if (p.kind == Place::Kind::Infinity) return {fe_primitive(Primitive::x()), 1, true};
            if (p.kind == Place::Kind::Affine) return {fe_primitive(Primitive::x_minus(p.x), -1), 1, true};
            break;
        case CurveFamily::Hyperelliptic:
            if (p.kind == Place::Kind::Infinity) return {fe_primitive(Primitive::x()), 2, true};
            if (p.kind == Place::Kind::Affine && F.is_zero(p.y))
                return {fe_primitive(Primitive::x_minus(p.x), -1), 2, true};
            break;
        case CurveFamily::Hermitian:
            if (p.kind == Place::Kind::Infinity)
                return {fe_primitive(Primitive::x()), static_cast<int>(c.q0()), true};
            if (p.kind == Place::Kind::Affine)
                return {fe_primitive(Primitive::tangent_at(p.x, p.y), -1), static_cast<int>(c.q0()) + 1, false};
            break;
    }
    throw UnsupportedPlace("no closed-form generator at this place");
}

struct PoleSum {
    int sigma_hat = 0;
    std::vector<int> r_list;
};

inline PoleSum pole_sum(const Curve& c, const std::vector<Place>& places) {
    for (size_t i = 0; i < places.size(); ++i)
        for (size_t j = i + 1; j < places.size(); ++j)
            if (places[i] == places[j]) throw UnsupportedPlace("pole_sum requires distinct places");
    PoleSum s;
    for (const Place& p : places) {
        int r = min_pole_generator(c, p).r;
        s.r_list.push_back(r);
        s.sigma_hat += r;
    }
    return s;
}

// ---------------------------------------------------------------------------
// serialization (places and expressions)

inline std::string place_to_string(const Curve& c, const Place& p) {
    const Field& F = c.field();
    switch (p.kind) {
        case Place::Kind::Infinity:
            return "inf";
        case Place::Kind::Affine:
            if (p.has_y) return "a=" + F.to_string(p.x) + ",b=" + F.to_string(p.y);
            return "a=" + F.to_string(p.x);
        case Place::Kind::QuadraticAffine:
            return "quad:a=" + F.to_string(p.x);
    }
    throw Error("unhandled place kind");
}

inline Place place_from_string(const Curve& c, std::string_view s) {
    const Field& F = c.field();
    Place p;
    if (s == "inf") return Place::infinity();
    if (s.starts_with("quad:a=")) {
        p = Place::quadratic(F.parse(s.substr(7)));
    } else if (s.starts_with("a=")) {
        std::string_view rest = s.substr(2);
        size_t split = rest.find(",b=");
        if (split == std::string_view::npos)
            p = Place::affine(F.parse(rest));
        else
            p = Place::affine(F.parse(rest.substr(0, split)), F.parse(rest.substr(split + 3)));
    } else {
        throw UnsupportedPlace("bad place literal: " + std::string(s));
    }
    if (!c.on_curve(p)) throw UnsupportedPlace("place is not on the curve: " + std::string(s));
    return p;
}

inline std::string fe_to_string(const Curve& c, const FunctionExpr& f) {
    const Field& F = c.field();
    std::string out;
    if (f.factors.empty() || !(f.scalar == F.one())) out = F.to_string(f.scalar);
    for (const auto& [prim, e] : f.factors) {
        if (!out.empty()) out += "*";
        switch (prim.kind) {
            case Primitive::Kind::X:
                out += "x";
                break;
            case Primitive::Kind::XminusA:
                out += F.is_zero(prim.a) ? "x" : "(x-" + F.to_string(prim.a) + ")";
                break;
            case Primitive::Kind::Y:
                out += "y";
                break;
            case Primitive::Kind::TangentAt:
                out += "tangent[a=" + F.to_string(prim.a) + ",b=" + F.to_string(prim.b) + "]";
                break;
        }
        if (e != 1) out += "^" + std::to_string(e);
    }
    return out;
}

}  // namespace rook
