#pragma once

#include <compare>
#include <variant>

#include "anonet/rational.hpp"

namespace anonet {

// An input value: an exact rational or an opaque token. Totally ordered
// (rationals first, then tokens lexicographically) so vectors, sets and
// frequency supports have one canonical sorted order.
class Value {
public:
    Value() : v_(Rat(0)) {}
    static Value rational(Rat r) { return Value(std::move(r)); }
    static Value token(std::string t) { return Value(std::move(t)); }

    // "3", "-1/2" parse as rationals, everything else as a token.
    static Value parse(const std::string& s) {
        if (looks_like_rational(s)) return rational(parse_rat(s));
        return token(s);
    }

    bool is_rational() const { return v_.index() == 0; }
    bool is_token() const { return v_.index() == 1; }
    const Rat& rat() const {
        if (!is_rational()) throw ValidationError("value is not rational: " + str());
        return std::get<0>(v_);
    }
    const std::string& token() const {
        ANONET_INVARIANT(is_token(), "value is not a token");
        return std::get<1>(v_);
    }

    std::string str() const {
        return is_rational() ? rat_str(std::get<0>(v_)) : std::get<1>(v_);
    }

    friend bool operator==(const Value& a, const Value& b) { return a.v_ == b.v_; }
    friend bool operator<(const Value& a, const Value& b) {
        if (a.v_.index() != b.v_.index()) return a.v_.index() < b.v_.index();
        if (a.is_rational()) return std::get<0>(a.v_) < std::get<0>(b.v_);
        return std::get<1>(a.v_) < std::get<1>(b.v_);
    }
    friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }
    friend bool operator>(const Value& a, const Value& b) { return b < a; }
    friend bool operator<=(const Value& a, const Value& b) { return !(b < a); }
    friend bool operator>=(const Value& a, const Value& b) { return !(a < b); }

    std::size_t hash() const {
        std::size_t seed = v_.index();
        if (is_rational()) boost::hash_combine(seed, hash_rat(std::get<0>(v_)));
        else boost::hash_combine(seed, std::get<1>(v_));
        return seed;
    }

private:
    explicit Value(Rat r) : v_(std::move(r)) {}
    explicit Value(std::string t) : v_(std::move(t)) {}
    std::variant<Rat, std::string> v_;
};

inline Value val(long long n) { return Value::rational(Rat(n)); }
inline Value val(int n) { return Value::rational(Rat(n)); }
inline Value val(const char* token) { return Value::token(token); }
inline Value val(Rat r) { return Value::rational(std::move(r)); }

}  // namespace anonet
