// Agents that know nothing about the network size or topology compute the
// exact average of their inputs: each one reconstructs the minimum base from
// its view and solves for the fibre frequencies.

#include <iostream>

#include "anonet/anonet.hpp"

using namespace anonet;

int main() {
    DirectedMultigraph g = star_bidirectional(2);
    std::vector<Value> inputs{val(5), val(1), val(1)};

    AlgorithmDescriptor algo =
        make_static_algorithm(make_average(), CommunicationModel::OutdegreeAware);
    RunOptions opt;
    opt.rounds = 8;
    ExecutionTrace tr = run(algo, GraphSchedule(g), inputs, opt);

    for (int t = 0; t <= opt.rounds; ++t) {
        std::cout << "round " << t << ":";
        for (const Output& o : tr.outputs[static_cast<std::size_t>(t)])
            std::cout << " " << o.str();
        std::cout << "\n";
    }
    std::cout << "true average: 7/3\n";
    return 0;
}
