#ifndef DCSPLIT_RATIONAL_HPP
#define DCSPLIT_RATIONAL_HPP

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace dcsplit {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;
using RatMat = std::vector<RatVec>;

/// Canonical rational from a numerator/denominator pair. Handles negative
/// and zero denominators; the mpq backend reduces to lowest terms.
inline Rat make_rat(Int num, Int den) {
    if (den == 0) throw std::invalid_argument("make_rat: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    return Rat(num, den);
}

/// Parse "p/q" or "p". The mpq string constructor does not canonicalize,
/// so we go through make_rat.
inline Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(Int(s));
    return make_rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
}

inline std::string rat_to_string(const Rat& r) { return r.str(); }

inline bool is_integer(const Rat& r) { return denominator(r) == 1; }

inline Rat dot(const RatVec& a, const RatVec& b) {
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Rat dot(const IntVec& a, const RatVec& b) {
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += Rat(a[i]) * b[i];
    return s;
}

inline Int dot(const IntVec& a, const IntVec& b) {
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline RatVec operator+(const RatVec& a, const RatVec& b) {
    RatVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline RatVec operator-(const RatVec& a, const RatVec& b) {
    RatVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline RatVec operator*(const Rat& c, const RatVec& v) {
    RatVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = c * v[i];
    return r;
}

inline bool is_zero(const RatVec& v) {
    for (const auto& x : v) if (x != 0) return false;
    return true;
}

inline bool is_zero(const IntVec& v) {
    for (const auto& x : v) if (x != 0) return false;
    return true;
}

inline RatVec to_rat_vec(const IntVec& v) {
    RatVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i]);
    return r;
}

/// Squared Euclidean norm as an exact rational; unit vectors are never
/// materialized.
inline Rat norm_sq(const IntVec& v) { return Rat(dot(v, v)); }
inline Rat norm_sq(const RatVec& v) { return dot(v, v); }

/// λv for the unique λ > 0 that makes the entries coprime integers.
/// Throws std::domain_error on the zero vector.
inline IntVec primitive_normal(const RatVec& v) {
    if (is_zero(v)) throw std::domain_error("primitive_normal: zero vector");
    Int den_lcm = 1;
    for (const auto& x : v) den_lcm = lcm(den_lcm, denominator(x));
    IntVec w(v.size());
    Int g = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        w[i] = numerator(v[i]) * (den_lcm / denominator(v[i]));
        g = gcd(g, w[i]);
    }
    for (auto& x : w) x /= g;
    return w;
}

inline IntVec primitive_normal(const IntVec& v) {
    return primitive_normal(to_rat_vec(v));
}

inline IntVec negate(const IntVec& v) {
    IntVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = -v[i];
    return r;
}

}  // namespace dcsplit

#endif
