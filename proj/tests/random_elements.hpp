#pragma once

#include <random>
#include <vector>

#include "bilax/ring.hpp"

namespace bilax::testing {

/// Field generators for a chain of `sites` sites plus sl(2).
inline std::vector<Generator> field_generators(int sites) {
    std::vector<Generator> out{Generator::E(), Generator::F(), Generator::H()};
    for (int j = 1; j <= sites; ++j) {
        out.push_back(Generator::u(j));
        out.push_back(Generator::X(j));
    }
    return out;
}

/// Monomial in at most four field generators with a small rational coefficient.
inline RingElement random_monomial(std::mt19937_64& rng, int sites) {
    auto gens = field_generators(sites);
    std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
    std::uniform_int_distribution<int> count(1, 4);
    std::uniform_int_distribution<int> coef(-3, 3);
    RingElement m(1);
    int n = count(rng);
    for (int i = 0; i < n; ++i) {
        Generator g = gens[pick(rng)];
        int power = g.allows_negative_powers() ? std::uniform_int_distribution<int>(-2, 2)(rng)
                                               : std::uniform_int_distribution<int>(1, 2)(rng);
        if (power == 0) power = 1;
        m = m * gen(g, power);
    }
    int c = coef(rng);
    if (c == 0) c = 1;
    Rational q(c, 2);
    q.canonicalize();
    return m.scaled(q);
}

inline RingElement random_element(std::mt19937_64& rng, int sites, int terms) {
    RingElement r;
    for (int i = 0; i < terms; ++i) r += random_monomial(rng, sites);
    return r;
}

}  // namespace bilax::testing
