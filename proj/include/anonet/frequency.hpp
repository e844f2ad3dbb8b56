#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "anonet/rational.hpp"
#include "anonet/value.hpp"

namespace anonet {

// Map value -> relative frequency. A proper frequency function has positive
// entries summing to one; intermediate estimates (rounded or normalized
// mid-run) may violate that, so validation is explicit.
struct FrequencyFunction {
    std::map<Value, Rat> nu;

    bool is_probability() const {
        Rat sum = 0;
        for (const auto& [v, q] : nu) {
            if (q <= 0) return false;
            sum += q;
        }
        return sum == 1;
    }

    Rat at(const Value& v) const {
        auto it = nu.find(v);
        return it == nu.end() ? Rat(0) : it->second;
    }

    friend bool operator==(const FrequencyFunction& a, const FrequencyFunction& b) {
        return a.nu == b.nu;
    }
};

inline FrequencyFunction frequency_of(std::span<const Value> xs) {
    if (xs.empty()) throw ValidationError("frequency of empty vector");
    FrequencyFunction f;
    Rat unit(1, static_cast<long>(xs.size()));
    for (const Value& v : xs) f.nu[v] += unit;
    return f;
}

// Shortest vector realizing nu, values in canonical sorted order; its length
// is the lcm of the reduced denominators.
inline std::vector<Value> canonical_vector(const FrequencyFunction& f) {
    if (!f.is_probability())
        throw ValidationError("canonical vector needs a probability frequency function");
    Int l = 1;
    for (const auto& [v, q] : f.nu) l = mp::lcm(l, denominator(q));
    std::vector<Value> out;
    for (const auto& [v, q] : f.nu) {
        Int count = numerator(q) * (l / denominator(q));
        ANONET_INVARIANT(count > 0 && count <= l, "canonical vector count out of range");
        for (Int i = 0; i < count; ++i) out.push_back(v);
    }
    return out;
}

inline bool equivalent_in_frequency(std::span<const Value> a, std::span<const Value> b) {
    return frequency_of(a) == frequency_of(b);
}

inline Rat quot_sum(std::span<const std::pair<Rat, Rat>> pairs) {
    Rat num = 0, den = 0;
    for (const auto& [v, w] : pairs) {
        num += v;
        den += w;
    }
    if (den == 0) throw ValidationError("quot-sum with zero weight sum");
    return num / den;
}

// All p/q with 0 <= p <= q <= N, sorted ascending, duplicates removed.
inline const std::vector<Rat>& qn_set(int n) {
    static std::map<int, std::vector<Rat>> cache;
    if (n < 1) throw ValidationError("qn_set needs N >= 1");
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::map<Rat, bool> seen;
    for (int q = 1; q <= n; ++q)
        for (int p = 0; p <= q; ++p) seen[Rat(p, q)] = true;
    std::vector<Rat> out;
    for (const auto& [r, _] : seen) out.push_back(r);
    return cache.emplace(n, std::move(out)).first->second;
}

// Nearest element of Q_N; exact ties prefer the smaller rational (documented
// tie rule; at the convergence bound estimates are strictly within half a gap,
// so the rule never decides a converged answer).
inline Rat nearest_in_qn(const Rat& x, int n) {
    const std::vector<Rat>& qs = qn_set(n);
    if (x <= qs.front()) return qs.front();
    if (x >= qs.back()) return qs.back();
    auto hi = std::lower_bound(qs.begin(), qs.end(), x);
    if (*hi == x) return x;
    auto lo = std::prev(hi);
    Rat dlo = x - *lo, dhi = *hi - x;
    return dlo <= dhi ? *lo : *hi;
}

}  // namespace anonet
