#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "frequency.hpp"
#include "output.hpp"
#include "rational.hpp"
#include "value.hpp"

namespace anonet {

// Real-valued parameter that is either an exact rational or scale*sqrt(radicand)
// with the radicand not a perfect square. Irrational parameters are compared
// against rationals through shrinking interval enclosures, which always decide
// because a rational never equals an irrational.
class RealParam {
public:
    static RealParam exact(Rat v) {
        RealParam p;
        p.rational_ = std::move(v);
        return p;
    }

    // scale * sqrt(radicand); collapses to an exact rational when the radicand
    // is a perfect square of a rational.
    static RealParam root(Rat radicand, Rat scale = Rat(1)) {
        if (radicand < 0) throw ValidationError("negative radicand");
        Int ns = mp::sqrt(numerator(radicand));
        Int ds = mp::sqrt(denominator(radicand));
        if (ns * ns == numerator(radicand) && ds * ds == denominator(radicand))
            return exact(scale * Rat(ns) / Rat(ds));
        if (scale == 0) return exact(Rat(0));
        RealParam p;
        p.radicand_ = std::move(radicand);
        p.scale_ = std::move(scale);
        return p;
    }

    bool irrational() const { return !rational_.has_value(); }
    const Rat& rational_value() const {
        if (!rational_) throw ValidationError("parameter is irrational");
        return *rational_;
    }

    // lo < value < hi with hi - lo <= |scale| * 10^-digits
    std::pair<Rat, Rat> enclosure(int digits) const {
        if (rational_) return {*rational_, *rational_};
        Int p = numerator(radicand_), q = denominator(radicand_);
        Int pow = 1;
        for (int i = 0; i < digits; ++i) pow *= 10;
        // sqrt(p/q) = sqrt(p*q)/q, bracketed by consecutive integer roots
        Int s = mp::sqrt(p * q * pow * pow);
        Rat lo = Rat(s) / Rat(q * pow), hi = Rat(s + 1) / Rat(q * pow);
        lo *= scale_;
        hi *= scale_;
        if (scale_ < 0) std::swap(lo, hi);
        return {lo, hi};
    }

    // sign of (q - value); never 0 for an irrational parameter
    int compare(const Rat& q) const {
        if (rational_) return q < *rational_ ? -1 : (q > *rational_ ? 1 : 0);
        for (int digits = 8;; digits *= 2) {
            auto [lo, hi] = enclosure(digits);
            if (q <= lo) return -1;
            if (q >= hi) return 1;
        }
    }

    std::string str() const {
        if (rational_) return rat_str(*rational_);
        std::string s = "sqrt(" + rat_str(radicand_) + ")";
        if (scale_ != 1) s = rat_str(scale_) + "*" + s;
        return s;
    }

    // "p/q", "sqrtK", or "sqrtK/q" (meaning sqrt(K)/q)
    static RealParam parse(const std::string& text) {
        if (text.rfind("sqrt", 0) == 0) {
            std::string rest = text.substr(4);
            auto slash = rest.find('/');
            Rat scale(1);
            if (slash != std::string::npos) {
                scale = Rat(1) / parse_rat(rest.substr(slash + 1));
                rest = rest.substr(0, slash);
            }
            return root(parse_rat(rest), scale);
        }
        return exact(parse_rat(text));
    }

private:
    std::optional<Rat> rational_;
    Rat radicand_{0};
    Rat scale_{1};
};

// How much information about the input vector a function needs: its set of
// values, its frequency function, or the full multiset.
enum class FunctionClass { SetBased, FrequencyBased, MultisetBased };

inline std::string function_class_name(FunctionClass c) {
    switch (c) {
        case FunctionClass::SetBased: return "set-based";
        case FunctionClass::FrequencyBased: return "frequency-based";
        case FunctionClass::MultisetBased: return "multiset-based";
    }
    return "?";
}

inline FrequencyFunction frequency_of_multiset(const ValueMultiset& ms) {
    Int total = 0;
    for (const auto& [v, c] : ms) total += c;
    if (total == 0) throw ValidationError("empty multiset");
    FrequencyFunction f;
    for (const auto& [v, c] : ms)
        if (c > 0) f.nu[v] = Rat(c) / Rat(total);
    return f;
}

struct TargetFunction {
    std::string name;
    FunctionClass cls = FunctionClass::FrequencyBased;
    // Defined for set- and frequency-based functions; evaluates from nu alone.
    std::function<Output(const FrequencyFunction&)> on_frequency;
    // Defined for every function; the multiset determines nu.
    std::function<Output(const ValueMultiset&)> on_multiset;
};

inline Output eval_on_vector(const TargetFunction& f, std::span<const Value> xs) {
    if (xs.empty()) throw ValidationError("empty input vector");
    return f.on_multiset(make_value_multiset(xs));
}

namespace detail {

// Wire a frequency-computable core into both evaluators.
inline TargetFunction from_frequency_core(std::string name, FunctionClass cls,
                                          std::function<Output(const FrequencyFunction&)> core) {
    TargetFunction f;
    f.name = std::move(name);
    f.cls = cls;
    f.on_frequency = core;
    f.on_multiset = [core](const ValueMultiset& ms) { return core(frequency_of_multiset(ms)); };
    return f;
}

inline Rat numeric(const Value& v) {
    if (!v.is_rational()) throw ValidationError("non-numeric value " + v.str());
    return v.rat();
}

}  // namespace detail

inline TargetFunction make_max() {
    return detail::from_frequency_core("max", FunctionClass::SetBased, [](const FrequencyFunction& nu) {
        return Output(nu.nu.rbegin()->first);
    });
}

inline TargetFunction make_min() {
    return detail::from_frequency_core("min", FunctionClass::SetBased, [](const FrequencyFunction& nu) {
        return Output(nu.nu.begin()->first);
    });
}

inline TargetFunction make_set() {
    return detail::from_frequency_core("set", FunctionClass::SetBased, [](const FrequencyFunction& nu) {
        ValueSet s;
        for (const auto& [v, r] : nu.nu) s.push_back(v);
        return Output(s);
    });
}

inline TargetFunction make_average() {
    return detail::from_frequency_core("average", FunctionClass::FrequencyBased,
                                       [](const FrequencyFunction& nu) {
                                           Rat acc(0);
                                           for (const auto& [v, r] : nu.nu)
                                               acc += detail::numeric(v) * r;
                                           return Output(acc);
                                       });
}

inline TargetFunction make_frequency() {
    return detail::from_frequency_core("frequency", FunctionClass::FrequencyBased,
                                       [](const FrequencyFunction& nu) { return Output(nu); });
}

// 1 when nu(omega) >= r, else 0
inline TargetFunction make_threshold(Value omega, RealParam r) {
    std::string name = "threshold:omega=" + omega.str() + ",r=" + r.str();
    return detail::from_frequency_core(
        std::move(name), FunctionClass::FrequencyBased,
        [omega, r](const FrequencyFunction& nu) {
            return Output(r.compare(nu.at(omega)) >= 0 ? Rat(1) : Rat(0));
        });
}

inline TargetFunction make_sum() {
    TargetFunction f;
    f.name = "sum";
    f.cls = FunctionClass::MultisetBased;
    f.on_multiset = [](const ValueMultiset& ms) {
        Rat acc(0);
        for (const auto& [v, c] : ms) acc += detail::numeric(v) * Rat(c);
        return Output(acc);
    };
    return f;
}

inline TargetFunction make_multiset() {
    TargetFunction f;
    f.name = "multiset";
    f.cls = FunctionClass::MultisetBased;
    f.on_multiset = [](const ValueMultiset& ms) { return Output(ms); };
    return f;
}

inline TargetFunction make_multiplicity(Value omega) {
    TargetFunction f;
    f.name = "multiplicity:omega=" + omega.str();
    f.cls = FunctionClass::MultisetBased;
    f.on_multiset = [omega](const ValueMultiset& ms) {
        for (const auto& [v, c] : ms)
            if (v == omega) return Output(Rat(c));
        return Output(Rat(0));
    };
    return f;
}

// Identifier plus parameters, e.g. "average", "threshold:omega=a,r=sqrt2/2",
// "multiplicity:omega=3".
inline TargetFunction parse_target(const std::string& text) {
    auto colon = text.find(':');
    std::string head = text.substr(0, colon);
    std::map<std::string, std::string> kv;
    if (colon != std::string::npos) {
        std::string rest = text.substr(colon + 1);
        std::size_t pos = 0;
        while (pos < rest.size()) {
            auto comma = rest.find(',', pos);
            std::string item = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            auto eq = item.find('=');
            if (eq == std::string::npos) throw ValidationError("malformed parameter '" + item + "'");
            kv[item.substr(0, eq)] = item.substr(eq + 1);
            pos = comma == std::string::npos ? rest.size() : comma + 1;
        }
    }
    auto need = [&](const char* key) {
        auto it = kv.find(key);
        if (it == kv.end()) throw ValidationError(head + " needs parameter " + key);
        return it->second;
    };
    if (head == "max") return make_max();
    if (head == "min") return make_min();
    if (head == "set") return make_set();
    if (head == "average") return make_average();
    if (head == "frequency") return make_frequency();
    if (head == "sum") return make_sum();
    if (head == "multiset") return make_multiset();
    if (head == "multiplicity") return make_multiplicity(Value::parse(need("omega")));
    if (head == "threshold")
        return make_threshold(Value::parse(need("omega")), RealParam::parse(need("r")));
    throw ValidationError("unknown function '" + head + "'");
}

}  // namespace anonet
