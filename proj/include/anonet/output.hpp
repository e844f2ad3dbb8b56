#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "anonet/frequency.hpp"
#include "anonet/value.hpp"

namespace anonet {

// Sorted unique values / sorted (value, multiplicity) pairs.
using ValueSet = std::vector<Value>;
using ValueMultiset = std::vector<std::pair<Value, Int>>;

enum class Metric { Discrete, Euclidean };

inline ValueSet make_value_set(std::span<const Value> xs) {
    ValueSet s(xs.begin(), xs.end());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

inline ValueMultiset make_value_multiset(std::span<const Value> xs) {
    std::map<Value, Int> m;
    for (const Value& v : xs) m[v] += 1;
    return ValueMultiset(m.begin(), m.end());
}

// What an agent reports each round. NotReady marks outputs that are not yet
// defined (e.g. a Push-Sum ratio with zero weight before leader mass arrives).
class Output {
public:
    struct NotReady {
        friend bool operator==(NotReady, NotReady) { return true; }
    };

    Output() : v_(NotReady{}) {}
    Output(Rat r) : v_(std::move(r)) {}
    Output(double d) : v_(d) {}
    Output(Value v) : v_(std::move(v)) {}
    Output(ValueSet s) : v_(std::move(s)) {}
    Output(ValueMultiset m) : v_(std::move(m)) {}
    Output(FrequencyFunction f) : v_(std::move(f)) {}
    static Output not_ready() { return Output(); }

    bool is_not_ready() const { return v_.index() == 0; }
    bool is_rat() const { return v_.index() == 1; }
    bool is_real() const { return v_.index() == 2; }
    bool is_value() const { return v_.index() == 3; }
    bool is_set() const { return v_.index() == 4; }
    bool is_multiset() const { return v_.index() == 5; }
    bool is_frequency() const { return v_.index() == 6; }

    const Rat& rat() const { return std::get<1>(v_); }
    double real() const { return std::get<2>(v_); }
    const Value& value() const { return std::get<3>(v_); }
    const ValueSet& set() const { return std::get<4>(v_); }
    const ValueMultiset& multiset() const { return std::get<5>(v_); }
    const FrequencyFunction& frequency() const { return std::get<6>(v_); }

    friend bool operator==(const Output& a, const Output& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Output& a, const Output& b) { return !(a == b); }

    // Distance under a metric; nullopt when the metric does not apply
    // (callers treat that as "not within eps" unless outputs are equal).
    std::optional<Rat> distance(const Output& other, Metric m) const {
        if (*this == other) return Rat(0);
        if (m == Metric::Discrete) return Rat(1);
        if (is_rat() && other.is_rat()) return rat_abs(rat() - other.rat());
        if (is_real() && other.is_real()) {
            double d = real() - other.real();
            return rat_abs(Rat(d));
        }
        if (is_frequency() && other.is_frequency()) {
            // Euclidean over the union support, compared via the squared norm.
            Rat sq = 0;
            const auto& fa = frequency().nu;
            const auto& fb = other.frequency().nu;
            for (const auto& [v, q] : fa) {
                Rat d = q - other.frequency().at(v);
                sq += d * d;
            }
            for (const auto& [v, q] : fb)
                if (!fa.count(v)) sq += q * q;
            return sq;  // callers compare against eps^2 via within()
        }
        return std::nullopt;
    }

    bool within(const Output& other, Metric m, const Rat& eps) const {
        if (*this == other) return true;
        std::optional<Rat> d = distance(other, m);
        if (!d) return false;
        if (m == Metric::Euclidean && is_frequency() && other.is_frequency())
            return *d <= eps * eps;
        return *d <= eps;
    }

    std::string str() const {
        switch (v_.index()) {
            case 0: return "not-ready";
            case 1: return rat_str(rat());
            case 2: return std::to_string(real());
            case 3: return value().str();
            case 4: {
                std::string s = "{";
                for (std::size_t i = 0; i < set().size(); ++i)
                    s += (i ? ", " : "") + set()[i].str();
                return s + "}";
            }
            case 5: {
                std::string s = "{";
                bool first = true;
                for (const auto& [v, c] : multiset()) {
                    if (!first) s += ", ";
                    s += v.str() + ":" + c.str();
                    first = false;
                }
                return s + "}";
            }
            default: {
                std::string s = "[";
                bool first = true;
                for (const auto& [v, q] : frequency().nu) {
                    if (!first) s += ", ";
                    s += v.str() + "->" + rat_str(q);
                    first = false;
                }
                return s + "]";
            }
        }
    }

private:
    std::variant<NotReady, Rat, double, Value, ValueSet, ValueMultiset, FrequencyFunction> v_;
};

}  // namespace anonet
