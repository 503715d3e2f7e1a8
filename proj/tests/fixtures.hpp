#pragma once

#include "sdchain/constructions.hpp"

#include <map>
#include <vector>

namespace fixtures {

using sdchain::PrimeField;
using Alg = sdchain::AlgebraPtr<PrimeField>;
using Mod = sdchain::FiniteModule<PrimeField>;
using Ring = sdchain::ExampleRing<PrimeField>;

inline const PrimeField& gf()
{
    static const PrimeField f{};
    return f;
}

/// The example rings, built once per test binary.
inline const Ring& ring(const std::vector<std::size_t>& exponents)
{
    static std::map<std::vector<std::size_t>, Ring> cache;
    auto it = cache.find(exponents);
    if (it == cache.end())
        it = cache.emplace(exponents, Ring(exponents, gf())).first;
    return it->second;
}

inline Alg te(std::size_t a) { return ring({a}).algebra(); }

/// R, k, D and the chain modules of an example ring.
inline std::vector<Mod> golden_modules(const Ring& r)
{
    std::vector<Mod> out{sdchain::regular_module(r.algebra()), sdchain::residue_field_module(r.algebra()),
                         sdchain::dualizing_module(r.algebra())};
    for (std::size_t j = 1; j <= r.n(); ++j)
        out.push_back(r.b_module(j));
    for (std::size_t j = 1; j < r.n(); ++j)
        out.push_back(r.chain_module(j));
    return out;
}

}  // namespace fixtures
