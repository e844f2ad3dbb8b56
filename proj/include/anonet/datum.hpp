#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "anonet/rational.hpp"
#include "anonet/value.hpp"

namespace anonet {

// Universal agent state / message payload. A small structural value type:
// equality, total order and hashing are exact, so traces can be compared
// bit-for-bit and received message multisets canonically sorted.
class Datum {
public:
    using List = std::vector<Datum>;

    Datum() : v_(std::monostate{}) {}
    Datum(std::int64_t i) : v_(i) {}
    Datum(int i) : v_(static_cast<std::int64_t>(i)) {}
    Datum(Rat r) : v_(std::move(r)) {}
    Datum(double d) : v_(d) {}
    Datum(std::string s) : v_(std::move(s)) {}
    Datum(const char* s) : v_(std::string(s)) {}
    Datum(List xs) : v_(std::move(xs)) {}
    static Datum of_value(const Value& v) {
        return v.is_rational() ? Datum(v.rat()) : Datum(v.token());
    }

    bool is_unit() const { return v_.index() == 0; }
    bool is_int() const { return v_.index() == 1; }
    bool is_rat() const { return v_.index() == 2; }
    bool is_real() const { return v_.index() == 3; }
    bool is_text() const { return v_.index() == 4; }
    bool is_list() const { return v_.index() == 5; }

    std::int64_t as_int() const {
        ANONET_INVARIANT(is_int(), "datum is not an int");
        return std::get<1>(v_);
    }
    const Rat& as_rat() const {
        ANONET_INVARIANT(is_rat(), "datum is not a rational");
        return std::get<2>(v_);
    }
    double as_real() const {
        ANONET_INVARIANT(is_real(), "datum is not a real");
        return std::get<3>(v_);
    }
    const std::string& as_text() const {
        ANONET_INVARIANT(is_text(), "datum is not text");
        return std::get<4>(v_);
    }
    const List& as_list() const {
        ANONET_INVARIANT(is_list(), "datum is not a list");
        return std::get<5>(v_);
    }
    Value as_value() const {
        if (is_rat()) return Value::rational(as_rat());
        if (is_text()) return Value::token(as_text());
        throw InvariantBreach("datum is not a value");
    }

    friend bool operator==(const Datum& a, const Datum& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Datum& a, const Datum& b) { return !(a == b); }
    friend bool operator<(const Datum& a, const Datum& b) {
        if (a.v_.index() != b.v_.index()) return a.v_.index() < b.v_.index();
        switch (a.v_.index()) {
            case 0: return false;
            case 1: return std::get<1>(a.v_) < std::get<1>(b.v_);
            case 2: return std::get<2>(a.v_) < std::get<2>(b.v_);
            case 3: return std::get<3>(a.v_) < std::get<3>(b.v_);
            case 4: return std::get<4>(a.v_) < std::get<4>(b.v_);
            default: {
                const List& x = std::get<5>(a.v_);
                const List& y = std::get<5>(b.v_);
                return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
            }
        }
    }

    std::size_t hash() const {
        std::size_t seed = v_.index();
        switch (v_.index()) {
            case 1: boost::hash_combine(seed, std::get<1>(v_)); break;
            case 2: boost::hash_combine(seed, hash_rat(std::get<2>(v_))); break;
            case 3: boost::hash_combine(seed, std::get<3>(v_)); break;
            case 4: boost::hash_combine(seed, std::get<4>(v_)); break;
            case 5:
                for (const Datum& d : std::get<5>(v_)) boost::hash_combine(seed, d.hash());
                break;
            default: break;
        }
        return seed;
    }

    // Canonical text form, used for state digests in exported traces.
    std::string text() const {
        switch (v_.index()) {
            case 0: return "()";
            case 1: return "i" + std::to_string(std::get<1>(v_));
            case 2: return "q" + rat_str(std::get<2>(v_));
            case 3: {
                char buf[40];
                std::snprintf(buf, sizeof buf, "d%a", std::get<3>(v_));
                return buf;
            }
            case 4: return "s\"" + std::get<4>(v_) + "\"";
            default: {
                std::string out = "[";
                bool first = true;
                for (const Datum& d : std::get<5>(v_)) {
                    if (!first) out += " ";
                    out += d.text();
                    first = false;
                }
                return out + "]";
            }
        }
    }

private:
    std::variant<std::monostate, std::int64_t, Rat, double, std::string, List> v_;
};

struct DatumHash {
    std::size_t operator()(const Datum& d) const { return d.hash(); }
};

}  // namespace anonet
