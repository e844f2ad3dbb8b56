#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "algorithm.hpp"
#include "engine.hpp"
#include "frequency.hpp"
#include "static_algo.hpp"
#include "target_function.hpp"

namespace anonet {

// Rounds needed to shrink the ratio spread by a factor eps on a dynamic
// graph of size n and dynamic diameter D. The underlying contraction gives
// spread(t) <= (1 - n^-2D)^floor(t/D) * spread(0), which is below eps once
// t >= D * n^(2D) * ln(1/eps). The tiny slack guards the ceiling against
// floating-point noise when the product is an exact integer.
inline long long convergence_bound_ln(int n, int diameter, long double ln_inv_eps) {
    if (n < 1 || diameter < 1) throw ValidationError("bound needs n >= 1 and D >= 1");
    if (ln_inv_eps <= 0) return 0;
    long double x = static_cast<long double>(diameter) *
                    powl(static_cast<long double>(n), 2.0L * diameter) * ln_inv_eps;
    return static_cast<long long>(ceill(x - 1e-9L));
}

inline long long convergence_bound(int n, int diameter, const Rat& eps) {
    if (eps <= 0 || eps > 1) throw ValidationError("eps must be in (0, 1]");
    long double ln_inv =
        logl(denominator(eps).convert_to<long double>()) -
        logl(numerator(eps).convert_to<long double>());
    return convergence_bound_ln(n, diameter, ln_inv);
}

struct PushSumOptions {
    std::vector<Rat> weights;   // per-agent initial weight; empty = all ones
    bool predivide = true;      // send shares y/d, z/d rather than <y, z, d>
    bool leader_seeded = false; // weight 1 at leaders, 0 elsewhere
};

inline Rat pushsum_y(const Datum& state) { return state.as_list()[0].as_rat(); }
inline Rat pushsum_z(const Datum& state) { return state.as_list()[1].as_rat(); }

// The ratio estimate y/z; not ready while no weight has arrived.
inline Output pushsum_ratio(const Datum& state) {
    Rat z = pushsum_z(state);
    if (z == 0) return Output::not_ready();
    return Output(pushsum_y(state) / z);
}

// Scalar ratio consensus: every agent's y/z converges to quot_sum of the
// initial (value, weight) pairs. Mass moves only in equal shares along the
// round's edges, so sum(y) and sum(z) are invariants.
inline AlgorithmDescriptor make_pushsum(const PushSumOptions& opt = {}) {
    AlgorithmDescriptor a;
    a.name = opt.predivide ? "push-sum" : "push-sum/raw-wire";
    a.model = CommunicationModel::OutdegreeAware;
    a.sample_values = {Value::parse("0"), Value::parse("1"), Value::parse("2")};
    auto weights = opt.weights;
    bool leader_seeded = opt.leader_seeded;
    a.init = [weights, leader_seeded](int idx, const Value& v, bool leader) {
        Rat w(1);
        if (leader_seeded) {
            w = leader ? 1 : 0;
        } else if (!weights.empty()) {
            w = weights.at(static_cast<std::size_t>(idx));
            if (w <= 0) throw ValidationError("weights must be positive");
        }
        return Datum(std::vector<Datum>{Datum(v.rat()), Datum(w)});
    };
    if (opt.predivide) {
        a.send = [](const Datum& s, int d, int) {
            ANONET_INVARIANT(d >= 1, "push-sum requires a known positive outdegree");
            return Datum(std::vector<Datum>{Datum(pushsum_y(s) / d), Datum(pushsum_z(s) / d)});
        };
        a.transition = [](const Datum&, int, const std::vector<Datum>& received) {
            if (received.empty()) return Datum(std::vector<Datum>{Datum(Rat(0)), Datum(Rat(0))});
            Rat y(0), z(0);
            for (const Datum& m : received) {
                y += m.as_list()[0].as_rat();
                z += m.as_list()[1].as_rat();
            }
            return Datum(std::vector<Datum>{Datum(y), Datum(z)});
        };
    } else {
        a.send = [](const Datum& s, int d, int) {
            ANONET_INVARIANT(d >= 1, "push-sum requires a known positive outdegree");
            return Datum(std::vector<Datum>{Datum(pushsum_y(s)), Datum(pushsum_z(s)),
                                            Datum(std::int64_t{d})});
        };
        a.transition = [](const Datum&, int, const std::vector<Datum>& received) {
            if (received.empty()) return Datum(std::vector<Datum>{Datum(Rat(0)), Datum(Rat(0))});
            Rat y(0), z(0);
            for (const Datum& m : received) {
                const auto& parts = m.as_list();
                Rat d(parts[2].as_int());
                y += parts[0].as_rat() / d;
                z += parts[1].as_rat() / d;
            }
            return Datum(std::vector<Datum>{Datum(y), Datum(z)});
        };
    }
    a.output = [](const Datum& s) { return pushsum_ratio(s); };
    return a;
}

// Binary-float twin of the scalar algorithm, for speed comparisons; the
// exact-rational form above is the authoritative one.
inline AlgorithmDescriptor make_pushsum_float(const PushSumOptions& opt = {}) {
    AlgorithmDescriptor a;
    a.name = "push-sum/float";
    a.model = CommunicationModel::OutdegreeAware;
    a.sample_values = {Value::parse("0"), Value::parse("1"), Value::parse("2")};
    auto weights = opt.weights;
    bool leader_seeded = opt.leader_seeded;
    a.init = [weights, leader_seeded](int idx, const Value& v, bool leader) {
        double w = 1.0;
        if (leader_seeded) {
            w = leader ? 1.0 : 0.0;
        } else if (!weights.empty()) {
            Rat wr = weights.at(static_cast<std::size_t>(idx));
            if (wr <= 0) throw ValidationError("weights must be positive");
            w = static_cast<double>(wr);
        }
        return Datum(std::vector<Datum>{Datum(static_cast<double>(v.rat())), Datum(w)});
    };
    a.send = [](const Datum& s, int d, int) {
        ANONET_INVARIANT(d >= 1, "push-sum requires a known positive outdegree");
        return Datum(std::vector<Datum>{Datum(s.as_list()[0].as_real() / d),
                                        Datum(s.as_list()[1].as_real() / d)});
    };
    a.transition = [](const Datum&, int, const std::vector<Datum>& received) {
        double y = 0, z = 0;
        for (const Datum& m : received) {
            y += m.as_list()[0].as_real();
            z += m.as_list()[1].as_real();
        }
        return Datum(std::vector<Datum>{Datum(y), Datum(z)});
    };
    a.output = [](const Datum& s) {
        double z = s.as_list()[1].as_real();
        if (z == 0) return Output::not_ready();
        return Output(s.as_list()[0].as_real() / z);
    };
    return a;
}

namespace pushsum_detail {

// state: [ sorted list of [value, y] pairs, z ]
inline std::map<Value, Rat> ymap_of(const Datum& state) {
    std::map<Value, Rat> out;
    for (const Datum& pair : state.as_list()[0].as_list())
        out[pair.as_list()[0].as_value()] = pair.as_list()[1].as_rat();
    return out;
}

inline Datum pack(const std::map<Value, Rat>& ymap, const Rat& z) {
    std::vector<Datum> pairs;
    pairs.reserve(ymap.size());
    for (const auto& [v, y] : ymap)
        pairs.push_back(Datum(std::vector<Datum>{Datum::of_value(v), Datum(y)}));
    return Datum(std::vector<Datum>{Datum(std::move(pairs)), Datum(z)});
}

}  // namespace pushsum_detail

inline Rat frequency_pushsum_z(const Datum& state) { return state.as_list()[1].as_rat(); }
inline std::map<Value, Rat> frequency_pushsum_ymap(const Datum& state) {
    return pushsum_detail::ymap_of(state);
}

// One ratio-consensus instance per value runs inside a single shared packet:
// y[w] carries the indicator mass of value w, and one scalar weight z is
// shared by all instances (their initial weights are identical, so the
// per-instance denominators coincide; keeping one copy preserves sum(z) = n
// exactly even while agents are still discovering values). An entry missing
// from a received y simply contributes nothing, which is the exact content
// of "agents that have not seen w hold y[w] = 0".
//
// Output layers per help mode:
//   none      f applied to the normalized estimates y[w] / sum(y)
//   bound N   f applied to the estimates rounded to the nearest point of the
//             p/q grid with q <= N; exact once the error drops under half the
//             grid's minimum gap
//   exact n   as bound n; multiset-based targets get counts n * nu[w]
//   leaders l z is seeded only at the l leaders, so l * y[w] / z estimates
//             the multiplicity of w; counts are rounded to nearest integers
inline AlgorithmDescriptor make_frequency_pushsum(const TargetFunction& f,
                                                  const Help& help = Help::none()) {
    bool leader_seeded = help.kind == Help::Kind::Leaders;
    if (f.cls == FunctionClass::MultisetBased && !leader_seeded &&
        help.kind != Help::Kind::ExactN)
        throw ValidationError(f.name + " is multiset-based and needs the exact size or leaders");

    AlgorithmDescriptor a;
    a.name = "frequency-push-sum:" + f.name;
    a.model = CommunicationModel::OutdegreeAware;
    a.sample_values = {Value::parse("a"), Value::parse("b"), Value::parse("c")};
    a.init = [leader_seeded](int, const Value& v, bool leader) {
        std::map<Value, Rat> ymap{{v, Rat(1)}};
        return pushsum_detail::pack(ymap, leader_seeded ? Rat(leader ? 1 : 0) : Rat(1));
    };
    a.send = [](const Datum& s, int d, int) {
        ANONET_INVARIANT(d >= 1, "push-sum requires a known positive outdegree");
        std::map<Value, Rat> ymap = pushsum_detail::ymap_of(s);
        for (auto& [v, y] : ymap) y /= d;
        return pushsum_detail::pack(ymap, frequency_pushsum_z(s) / d);
    };
    a.transition = [](const Datum&, int, const std::vector<Datum>& received) {
        if (received.empty()) return pushsum_detail::pack({}, Rat(0));
        std::map<Value, Rat> acc;
        Rat z(0);
        for (const Datum& m : received) {
            for (const auto& [v, y] : pushsum_detail::ymap_of(m)) acc[v] += y;
            z += frequency_pushsum_z(m);
        }
        return pushsum_detail::pack(acc, z);
    };
    a.output = [f, help](const Datum& s) -> Output {
        std::map<Value, Rat> ymap = pushsum_detail::ymap_of(s);
        Rat z = frequency_pushsum_z(s);
        if (help.kind == Help::Kind::None) {
            Rat total(0);
            for (const auto& [v, y] : ymap) total += y;
            if (total == 0) return Output::not_ready();
            FrequencyFunction nu;
            for (const auto& [v, y] : ymap)
                if (y > 0) nu.nu[v] = y / total;
            return f.on_frequency(nu);
        }
        if (help.kind == Help::Kind::Bound || help.kind == Help::Kind::ExactN) {
            if (z == 0) return Output::not_ready();
            int N = static_cast<int>(help.n);
            FrequencyFunction nu;
            Rat total(0);
            for (const auto& [v, y] : ymap) {
                Rat r = nearest_in_qn(y / z, N);
                total += r;
                if (r > 0) nu.nu[v] = r;
            }
            if (total != 1) return Output::not_ready();
            if (f.cls == FunctionClass::MultisetBased) {
                ValueMultiset ms;
                for (const auto& [v, r] : nu.nu) {
                    Rat c = r * Rat(help.n);
                    if (denominator(c) != 1) return Output::not_ready();
                    ms.emplace_back(v, numerator(c));
                }
                return f.on_multiset(ms);
            }
            return f.on_frequency(nu);
        }
        // leaders
        if (z == 0) return Output::not_ready();
        ValueMultiset ms;
        for (const auto& [v, y] : ymap) {
            Rat est = Rat(help.ell) * y / z;
            Int count = rat_floor(est + Rat(1, 2));
            if (count > 0) ms.emplace_back(v, count);
        }
        if (ms.empty()) return Output::not_ready();
        return f.on_multiset(ms);
    };
    return a;
}

// Per-round health of a scalar ratio-consensus trace.
struct PushSumReport {
    bool mass_conserved = true;      // sum(y) and sum(z) never change
    bool envelopes_monotone = true;  // [min ratio, max ratio] is nested round to round
    std::optional<int> within_from;  // first round from which all ratios stay within eps of target
};

inline PushSumReport check_pushsum_trace(const ExecutionTrace& trace, const Rat& target,
                                         const Rat& eps) {
    PushSumReport rep;
    if (trace.states.empty()) return rep;
    Rat y0(0), z0(0);
    for (const Datum& s : trace.states.front()) {
        y0 += pushsum_y(s);
        z0 += pushsum_z(s);
    }
    std::optional<Rat> prev_lo, prev_hi;
    int last_outside = -1;
    for (std::size_t t = 0; t < trace.states.size(); ++t) {
        Rat y(0), z(0);
        bool all_positive = true;
        std::optional<Rat> lo, hi;
        for (const Datum& s : trace.states[t]) {
            y += pushsum_y(s);
            z += pushsum_z(s);
            if (pushsum_z(s) <= 0) {
                all_positive = false;
                continue;
            }
            Rat x = pushsum_y(s) / pushsum_z(s);
            if (!lo || x < *lo) lo = x;
            if (!hi || x > *hi) hi = x;
            if (rat_abs(x - target) > eps) last_outside = static_cast<int>(t);
        }
        if (y != y0 || z != z0) rep.mass_conserved = false;
        if (!all_positive) {
            last_outside = static_cast<int>(t);
            continue;
        }
        if (prev_lo && (*lo < *prev_lo || *hi > *prev_hi)) rep.envelopes_monotone = false;
        prev_lo = lo;
        prev_hi = hi;
    }
    if (last_outside + 1 < static_cast<int>(trace.states.size()))
        rep.within_from = last_outside + 1;
    return rep;
}

}  // namespace anonet
