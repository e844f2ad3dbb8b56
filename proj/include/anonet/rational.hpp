#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/functional/hash.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace anonet {

namespace mp = boost::multiprecision;

// Exact arithmetic throughout: GMP-backed integers and canonical rationals
// (always reduced, positive denominator -- gmp canonicalizes on every op).
using Int = mp::number<mp::gmp_int, mp::et_off>;
using Rat = mp::number<mp::gmp_rational, mp::et_off>;

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvariantBreach : std::logic_error {
    using std::logic_error::logic_error;
};

#define ANONET_INVARIANT(cond, msg) \
    do { if (!(cond)) throw ::anonet::InvariantBreach(msg); } while (0)

inline Rat rat_abs(const Rat& x) { return x < 0 ? Rat(-x) : x; }

inline Int floor_div(const Int& a, const Int& b) {
    ANONET_INVARIANT(b != 0, "floor_div by zero");
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

inline Int rat_floor(const Rat& x) { return floor_div(numerator(x), denominator(x)); }

// Parses "p", "p/q" (q > 0 after canonicalization; "1/-2" is rejected).
inline Rat parse_rat(const std::string& s) {
    if (s.empty()) throw ValidationError("empty rational literal");
    std::size_t slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash)), den(s.substr(slash + 1));
        if (den <= 0) throw ValidationError("rational literal needs positive denominator: " + s);
        return Rat(num, den);
    } catch (const std::runtime_error&) {
        throw ValidationError("malformed rational literal: " + s);
    }
}

inline bool looks_like_rational(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = 0, digits = 0;
    if (s[i] == '-') ++i;
    for (; i < s.size() && s[i] >= '0' && s[i] <= '9'; ++i) ++digits;
    if (digits == 0) return false;
    if (i == s.size()) return true;
    if (s[i] != '/') return false;
    ++i;
    std::size_t den_digits = 0;
    for (; i < s.size() && s[i] >= '0' && s[i] <= '9'; ++i) ++den_digits;
    return den_digits > 0 && i == s.size();
}

inline std::string rat_str(const Rat& x) {
    if (denominator(x) == 1) return numerator(x).str();
    return numerator(x).str() + "/" + denominator(x).str();
}

inline std::size_t hash_rat(const Rat& x) { return boost::hash<Rat>{}(x); }
inline std::size_t hash_int(const Int& x) { return boost::hash<Int>{}(x); }

}  // namespace anonet
