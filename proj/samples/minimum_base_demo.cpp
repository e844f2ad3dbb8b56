// Quotients a valuated star down to its minimum base and solves the fibre
// cardinality system, showing why outdegree-aware agents can measure value
// frequencies that broadcast agents cannot.

#include <iostream>

#include "anonet/anonet.hpp"

using namespace anonet;

int main() {
    DirectedMultigraph g = star_bidirectional(4);
    g.set_valuation({val(5), val(1), val(1), val(1), val(1)});

    Fibration f = minimum_base(g);
    std::cout << "star with 4 leaves -> base on " << f.base.n() << " classes\n";
    for (std::size_t b = 0; b < f.fibres.size(); ++b) {
        std::cout << "  class " << b << " ("
                  << (*f.base.valuation())[b].str() << "): fibre size "
                  << f.fibres[b].size() << "\n";
    }

    FibreSolution sol = solve_fibres(f.base, CommunicationModel::OutdegreeAware);
    std::cout << "kernel of the degree matrix:";
    for (const Int& zi : sol.z) std::cout << " " << zi.str();
    std::cout << "\nfrequencies:";
    for (const auto& [v, q] : fibre_frequency(sol).nu)
        std::cout << " " << v.str() << "->" << rat_str(q);
    std::cout << "\n";

    FibreSolution blind = solve_fibres(f.base, CommunicationModel::Broadcast);
    std::cout << "broadcast sees every class once:";
    for (const Int& zi : blind.z) std::cout << " " << zi.str();
    std::cout << "\n";
    return 0;
}
