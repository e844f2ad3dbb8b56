// Ratio consensus on a randomly varying graph: mass conservation keeps the
// quotient exact while the envelope [min x, max x] contracts geometrically.

#include <iostream>

#include "anonet/anonet.hpp"

using namespace anonet;

int main() {
    std::mt19937_64 rng(2026);
    DynamicGraph dg = random_dynamic_with_diameter(4, 2, rng);

    RunOptions opt;
    opt.rounds = 30;
    std::vector<Value> inputs{val(1), val(2), val(4), val(9)};
    ExecutionTrace tr = run(make_pushsum(), GraphSchedule(dg), inputs, opt);

    std::cout << "round  min x        max x        spread\n";
    for (int t = 0; t <= opt.rounds; t += 5) {
        std::optional<Rat> lo, hi;
        for (const Datum& s : tr.states[static_cast<std::size_t>(t)]) {
            Rat x = pushsum_y(s) / pushsum_z(s);
            if (!lo || x < *lo) lo = x;
            if (!hi || x > *hi) hi = x;
        }
        std::cout << t << "\t" << rat_str(*lo).substr(0, 12) << "\t"
                  << rat_str(*hi).substr(0, 12) << "\t"
                  << (Rat(*hi - *lo)).convert_to<double>() << "\n";
    }

    PushSumReport rep = check_pushsum_trace(tr, Rat(4), Rat(1, 1000));
    std::cout << "mass conserved: " << (rep.mass_conserved ? "yes" : "no")
              << ", within 1/1000 of 4 from round "
              << (rep.within_from ? std::to_string(*rep.within_from) : "never") << "\n";
    return 0;
}
