#pragma once

#include "sdchain/homology.hpp"
#include "sdchain/verdict.hpp"

#include <string>

namespace sdchain {

/// Whether r -> (multiplication by r) is a bijection R -> Hom_R(C, C).
template <Field F>
bool homothety_is_bijective(const FiniteModule<F>& c)
{
    const auto& alg = c.algebra();
    if (hom_module(c, c).maps.size() != alg.dim())
        return false;
    // The image lies in Hom_R(C, C); injectivity settles it.
    Matrix<F> images(c.field(), alg.dim(), c.dim() * c.dim());
    for (std::size_t r = 0; r < alg.dim(); ++r)
        std::copy(c.action(r).data().begin(), c.action(r).data().end(), images.row_ptr(r));
    return rank(std::move(images)) == alg.dim();
}

/// The biduality map M -> Hom(Hom(M, C), C) as a matrix in the bases of the Hom modules.
template <Field F>
Matrix<F> biduality_matrix(const FiniteModule<F>& m, const HomModule<F>& h, const HomModule<F>& hh)
{
    const F& f = m.field();
    const std::size_t hd = h.maps.size();
    const std::size_t cd = hh.maps.empty() ? 0 : hh.maps[0].rows();
    Matrix<F> out(f, hh.maps.size(), m.dim());
    for (std::size_t b = 0; b < m.dim(); ++b) {
        // (f -> f(e_b)) as a (dim C) x (dim Hom(M,C)) matrix.
        Matrix<F> eval(f, cd, hd);
        for (std::size_t t = 0; t < hd; ++t)
            for (std::size_t r = 0; r < cd; ++r)
                eval(r, t) = h.maps[t](r, b);
        const auto coords = hh.coordinates(eval);
        for (std::size_t s = 0; s < coords.size(); ++s)
            out(s, b) = coords[s];
    }
    return out;
}

/// C is semidualizing up to `bound`: the homothety is bijective and Ext^i(C, C) = 0 for 1 <= i <= bound.
template <Field F>
Verdict is_semidualizing(const FiniteModule<F>& c, std::size_t bound, Session<F>& session)
{
    if (bound < 1)
        throw std::invalid_argument("is_semidualizing: bound must be at least 1");
    if (!homothety_is_bijective(c))
        return Verdict::fail(bound, "homothety R -> Hom(C,C) is not bijective");
    for (std::size_t i = 1; i <= bound; ++i)
        if (const auto e = session.ext(c, c, i); e != 0)
            return Verdict::fail(bound, "Ext^" + std::to_string(i) + "(C,C) has dimension " + std::to_string(e));
    return Verdict::pass(bound);
}

template <Field F>
Verdict is_semidualizing(const FiniteModule<F>& c, std::size_t bound)
{
    Session<F> s;
    return is_semidualizing(c, bound, s);
}

/// M is totally C-reflexive up to `bound`: biduality is bijective and
/// Ext^i(M, C) = 0 = Ext^i(Hom(M, C), C) for 1 <= i <= bound.
template <Field F>
Verdict is_totally_reflexive(const FiniteModule<F>& m, const FiniteModule<F>& c, std::size_t bound,
                             Session<F>& session)
{
    if (bound < 1)
        throw std::invalid_argument("is_totally_reflexive: bound must be at least 1");
    const HomModule<F> h = hom_module(m, c);
    const HomModule<F> hh = hom_module(h.module, c);
    if (hh.maps.size() != m.dim())
        return Verdict::fail(bound, "Hom(Hom(M,C),C) has the wrong dimension");
    if (rank(biduality_matrix(m, h, hh)) != m.dim())
        return Verdict::fail(bound, "biduality map is not bijective");
    for (std::size_t i = 1; i <= bound; ++i) {
        if (const auto e = session.ext(m, c, i); e != 0)
            return Verdict::fail(bound, "Ext^" + std::to_string(i) + "(M,C) has dimension " + std::to_string(e));
        if (const auto e = session.ext(h.module, c, i); e != 0)
            return Verdict::fail(bound,
                                 "Ext^" + std::to_string(i) + "(Hom(M,C),C) has dimension " + std::to_string(e));
    }
    return Verdict::pass(bound);
}

template <Field F>
Verdict is_totally_reflexive(const FiniteModule<F>& m, const FiniteModule<F>& c, std::size_t bound)
{
    Session<F> s;
    return is_totally_reflexive(m, c, bound, s);
}

}  // namespace sdchain
