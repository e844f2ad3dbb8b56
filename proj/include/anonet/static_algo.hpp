#pragma once

#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "algorithm.hpp"
#include "graph.hpp"
#include "graph_ops.hpp"
#include "matrix.hpp"
#include "target_function.hpp"
#include "view.hpp"

namespace anonet {

// Degree-balance matrix of an outdegree-valued base: row i holds the
// multiplicities of i's out-edges per target class, with the outdegree
// valuation subtracted on the diagonal. Fibre cardinalities span its kernel.
inline IntMatrix build_M(const DirectedMultigraph& base) {
    if (!base.out_valuation())
        throw ValidationError("degree-balance matrix needs an outdegree valuation");
    int m = base.n();
    IntMatrix M(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            M.at(i, j) = base.multiplicity(i, j) - (i == j ? Int(base.send_degree(i)) : Int(0));
    return M;
}

// Relative fibre cardinalities of a recovered base: z positive, coprime, one
// entry per base vertex. True cardinalities are k*z for one integer k >= 1.
struct FibreSolution {
    bool ok = false;
    std::string why;
    DirectedMultigraph base;
    std::vector<Int> z;
};

namespace solve_detail {

inline FibreSolution fail(std::string why) {
    FibreSolution s;
    s.why = std::move(why);
    return s;
}

inline std::vector<Int> normalize(std::vector<Rat> zr) {
    Int l = 1;
    for (const Rat& q : zr) l = mp::lcm(l, denominator(q));
    std::vector<Int> z;
    z.reserve(zr.size());
    for (const Rat& q : zr) z.push_back(numerator(q) * (l / denominator(q)));
    Int g = 0;
    for (const Int& x : z) g = mp::gcd(g, x);
    ANONET_INVARIANT(g > 0, "zero cardinality vector");
    for (Int& x : z) x /= g;
    return z;
}

}  // namespace solve_detail

// Outdegree-aware solving: one-dimensional kernel of the balance matrix.
inline FibreSolution solve_od(DirectedMultigraph base) {
    if (!base.out_valuation()) return solve_detail::fail("base carries no outdegrees");
    KernelResult k = kernel_generator(build_M(base));
    if (!k) return solve_detail::fail(k.error);
    FibreSolution s;
    s.ok = true;
    s.base = std::move(base);
    s.z = std::move(k.generator);
    return s;
}

// Port-aware solving: a port-preserving fibration is a covering, so all
// fibres share one cardinality. Rejects bases that are not coverings (port
// labels must exhaust 1..outdegree, and the base outdegree must match the
// outdegree valuation).
inline FibreSolution solve_op(DirectedMultigraph base) {
    if (!base.ports()) return solve_detail::fail("base carries no port labels");
    if (!base.out_valuation()) return solve_detail::fail("base carries no outdegrees");
    for (int v = 0; v < base.n(); ++v)
        if (base.out_degree(v) != base.send_degree(v))
            return solve_detail::fail("base is not a covering: outdegree mismatch at class " +
                                      std::to_string(v));
    FibreSolution s;
    s.ok = true;
    s.base = std::move(base);
    s.z.assign(static_cast<std::size_t>(s.base.n()), Int(1));
    return s;
}

// Symmetric solving: on a bidirectional graph every fibration satisfies the
// detailed-balance relations d(i->j) * |fibre j| = d(j->i) * |fibre i|, which
// determine the cardinalities up to scale by propagation along any spanning
// tree of the base's (symmetric) support.
inline FibreSolution solve_sym(DirectedMultigraph base) {
    int m = base.n();
    std::vector<Rat> zr(static_cast<std::size_t>(m), Rat(0));
    zr[0] = 1;
    std::vector<int> order{0};
    std::vector<bool> seen(static_cast<std::size_t>(m), false);
    seen[0] = true;
    for (std::size_t q = 0; q < order.size(); ++q) {
        int i = order[q];
        for (int j = 0; j < m; ++j) {
            if (seen[static_cast<std::size_t>(j)]) continue;
            int fwd = base.multiplicity(i, j), bwd = base.multiplicity(j, i);
            if (fwd == 0 && bwd == 0) continue;
            if (fwd == 0 || bwd == 0)
                return solve_detail::fail("base support is not symmetric");
            zr[static_cast<std::size_t>(j)] = zr[static_cast<std::size_t>(i)] * Rat(bwd) / Rat(fwd);
            seen[static_cast<std::size_t>(j)] = true;
            order.push_back(j);
        }
    }
    if (static_cast<int>(order.size()) != m)
        return solve_detail::fail("base support is not connected");
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (Rat(base.multiplicity(i, j)) * zr[static_cast<std::size_t>(j)] !=
                Rat(base.multiplicity(j, i)) * zr[static_cast<std::size_t>(i)])
                return solve_detail::fail("detailed balance fails between classes " +
                                          std::to_string(i) + " and " + std::to_string(j));
    FibreSolution s;
    s.ok = true;
    s.base = std::move(base);
    s.z = solve_detail::normalize(std::move(zr));
    return s;
}

inline FibreSolution solve_fibres(DirectedMultigraph base, CommunicationModel model) {
    switch (model) {
        case CommunicationModel::OutdegreeAware: return solve_od(std::move(base));
        case CommunicationModel::OutputPortAware: return solve_op(std::move(base));
        case CommunicationModel::Symmetric: return solve_sym(std::move(base));
        case CommunicationModel::Broadcast: {
            // no relation pins the cardinalities; a uniform guess documents
            // exactly what simple broadcast cannot see
            FibreSolution s;
            s.ok = true;
            s.base = std::move(base);
            s.z.assign(static_cast<std::size_t>(s.base.n()), Int(1));
            return s;
        }
    }
    return solve_detail::fail("unreachable");
}

// Shared knowledge granted to the agents beyond the model itself.
struct Help {
    enum class Kind { None, Bound, ExactN, Leaders };
    Kind kind = Kind::None;
    Int n = 0;    // ExactN: the size; Bound: an upper bound on the size
    int ell = 0;  // Leaders: how many leaders exist

    static Help none() { return {}; }
    static Help bound(Int N) { return {Kind::Bound, std::move(N), 0}; }
    static Help exact_n(Int n) { return {Kind::ExactN, std::move(n), 0}; }
    static Help leaders(int ell) { return {Kind::Leaders, 0, ell}; }
};

inline FrequencyFunction fibre_frequency(const FibreSolution& s) {
    Int total = 0;
    for (const Int& x : s.z) total += x;
    FrequencyFunction nu;
    const auto& vals = *s.base.valuation();
    for (int i = 0; i < s.base.n(); ++i)
        nu.nu[vals[static_cast<std::size_t>(i)]] += Rat(s.z[static_cast<std::size_t>(i)]) / Rat(total);
    return nu;
}

// Exact fibre cardinalities under ExactN or Leaders help; empty when the
// arithmetic does not come out integral (a sign the recovery is still bogus).
inline std::optional<std::vector<Int>> fibre_cardinalities(const FibreSolution& s, const Help& h) {
    std::vector<Int> cards;
    if (h.kind == Help::Kind::ExactN) {
        Int total = 0;
        for (const Int& x : s.z) total += x;
        if (h.n <= 0 || h.n % total != 0) return std::nullopt;
        Int k = h.n / total;
        for (const Int& x : s.z) cards.push_back(k * x);
        return cards;
    }
    if (h.kind == Help::Kind::Leaders) {
        const auto& lead = *s.base.leaders();
        Int lsum = 0;
        for (int i = 0; i < s.base.n(); ++i)
            if (lead[static_cast<std::size_t>(i)]) lsum += s.z[static_cast<std::size_t>(i)];
        if (lsum == 0 || h.ell <= 0) return std::nullopt;
        for (const Int& x : s.z) {
            Int num = Int(h.ell) * x;
            if (num % lsum != 0) return std::nullopt;
            cards.push_back(num / lsum);
        }
        return cards;
    }
    return std::nullopt;
}

inline std::optional<ValueMultiset> fibre_multiset(const FibreSolution& s, const Help& h) {
    auto cards = fibre_cardinalities(s, h);
    if (!cards) return std::nullopt;
    std::map<Value, Int> acc;
    const auto& vals = *s.base.valuation();
    for (int i = 0; i < s.base.n(); ++i) acc[vals[static_cast<std::size_t>(i)]] += (*cards)[static_cast<std::size_t>(i)];
    ValueMultiset out;
    for (auto& [v, c] : acc)
        if (c > 0) out.emplace_back(v, c);
    return out;
}

// Memoized per content-addressed view id and model.
inline const FibreSolution& solve_from_view(int view_id, CommunicationModel model) {
    static std::map<std::pair<int, int>, std::unique_ptr<FibreSolution>> memo;
    auto key = std::pair(view_id, static_cast<int>(model));
    auto it = memo.find(key);
    if (it == memo.end()) {
        const BaseRecovery& rec = reconstruct_base(view_id);
        FibreSolution sol =
            rec.ok ? solve_fibres(rec.base, model) : solve_detail::fail(rec.why);
        it = memo.emplace(key, std::make_unique<FibreSolution>(std::move(sol))).first;
    }
    return *it->second;
}

// The complete view-and-solve algorithm: each agent grows its in-view (depth
// capped), recovers the minimum base of the communication graph from it,
// solves for relative fibre cardinalities under its model, and applies the
// target function to the reconstructed frequency function or multiset. Until
// recovery succeeds the agent answers as if it were alone.
//
// State layout: [input value, leader flag, view id]. The first two entries
// mirror read-only environment registers, so arbitrary-initialization tests
// scramble only the view.
inline AlgorithmDescriptor make_static_algorithm(const TargetFunction& f, CommunicationModel model,
                                                 const Help& help = Help::none(),
                                                 int depth_cap = 16) {
    if (f.cls == FunctionClass::MultisetBased && help.kind != Help::Kind::ExactN &&
        help.kind != Help::Kind::Leaders)
        throw ValidationError(f.name + " is multiset-based and needs the exact size or leaders");
    if (depth_cap < 1) throw ValidationError("depth cap must be positive");

    AlgorithmDescriptor a;
    a.name = "view-solve:" + f.name + "@" + model_name(model);
    a.model = model;
    a.sample_values = {Value::parse("1"), Value::parse("2"), Value::parse("5")};

    a.init = [](int, const Value& v, bool leader) {
        int id = ViewStore::global().leaf(v, leader);
        return Datum(std::vector<Datum>{Datum::of_value(v), Datum(std::int64_t{leader ? 1 : 0}),
                                        Datum(std::int64_t{id})});
    };
    a.send = [model](const Datum& state, int d, int port) {
        int id = static_cast<int>(state.as_list()[2].as_int());
        if (d >= 0) id = ViewStore::global().with_od(id, d);
        (void)model;
        return Datum(std::vector<Datum>{Datum(std::int64_t{port}), Datum(std::int64_t{id})});
    };
    a.transition = [depth_cap](const Datum& state, int d, const std::vector<Datum>& received) {
        const auto& slots = state.as_list();
        std::vector<std::pair<int, int>> children;
        children.reserve(received.size());
        for (const Datum& msg : received) {
            const auto& parts = msg.as_list();
            children.emplace_back(static_cast<int>(parts[0].as_int()),
                                  static_cast<int>(parts[1].as_int()));
        }
        ViewStore& store = ViewStore::global();
        int id = store.make(slots[0].as_value(), slots[1].as_int() != 0, d, std::move(children));
        id = store.truncate(id, depth_cap);
        return Datum(std::vector<Datum>{slots[0], slots[1], Datum(std::int64_t{id})});
    };
    a.output = [f, model, help](const Datum& state) {
        const auto& slots = state.as_list();
        const FibreSolution& sol = solve_from_view(static_cast<int>(slots[2].as_int()), model);
        if (sol.ok) {
            if (f.cls == FunctionClass::MultisetBased || help.kind == Help::Kind::ExactN ||
                help.kind == Help::Kind::Leaders) {
                if (auto ms = fibre_multiset(sol, help)) return f.on_multiset(*ms);
            } else {
                return f.on_frequency(fibre_frequency(sol));
            }
        }
        return f.on_multiset(ValueMultiset{{slots[0].as_value(), 1}});
    };
    return a;
}

}  // namespace anonet
