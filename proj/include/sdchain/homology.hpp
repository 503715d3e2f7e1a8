#pragma once

#include "sdchain/resolution.hpp"

#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

namespace sdchain {

enum class BassMethod { ext_direct, matlis };

namespace detail {

/// Whether two modules can share homogeneous blocks.
template <Field F>
bool compatible_gradings(const FiniteModule<F>& a, const FiniteModule<F>& b)
{
    return a.graded() && b.graded() && a.algebra().degrees() == b.algebra().degrees();
}

/// Rank of d_i (x) N, or of Hom(d_i, N) when `hom` is set; zero for i = 0.
template <Field F>
std::size_t tensored_rank(Resolution<F>& res, std::size_t i, const FiniteModule<F>& n, bool hom)
{
    if (i == 0)
        return 0;
    const F& f = n.field();
    const auto& gens = res.generators(i);
    const auto& deg_i = res.generator_degrees(i);
    const auto& deg_prev = res.generator_degrees(i - 1);
    const std::size_t beta_prev = res.generators(i - 1).size();
    if (gens.empty() || beta_prev == 0 || n.dim() == 0)
        return 0;
    const std::size_t d = n.algebra().dim(), nd = n.dim();
    const bool graded = compatible_gradings(res.module(), n);
    std::vector<std::vector<std::vector<Term<F>>>> ncols;
    for (std::size_t l = 0; l < d; ++l)
        ncols.push_back(sparse_columns(n.action(l)));

    // For Hom, the entries of d_i grouped by source row j'.
    struct Entry {
        std::uint32_t j;
        std::uint32_t l;
        typename F::Element value;
    };
    std::vector<std::vector<Entry>> by_row;
    if (hom) {
        by_row.resize(beta_prev);
        for (std::size_t j = 0; j < gens.size(); ++j)
            for (std::size_t k = 0; k < gens[j].nnz(); ++k)
                by_row[gens[j].index[k] / d].push_back(
                    {static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(gens[j].index[k] % d), gens[j].value[k]});
    }

    const std::size_t ncolumns = (hom ? beta_prev : gens.size()) * nd;
    std::map<Degree, std::vector<std::uint32_t>> blocks;
    for (std::size_t c = 0; c < ncolumns; ++c) {
        const std::size_t a = c / nd, y = c % nd;
        Degree deg = 0;
        if (graded)
            deg = hom ? n.degree(y) - deg_prev[a] : deg_i[a] + n.degree(y);
        blocks[deg].push_back(checked_index(c));
    }

    std::size_t total = 0;
    for (const auto& [deg, cols] : blocks) {
        std::vector<SparseVector<F>> vecs;
        vecs.reserve(cols.size());
        for (std::uint32_t c : cols) {
            const std::size_t a = c / nd, y = c % nd;
            std::vector<Term<F>> terms;
            if (hom) {
                for (const auto& e : by_row[a])
                    for (const auto& [yp, v] : ncols[e.l][y])
                        terms.emplace_back(checked_index(e.j * nd + yp), f.mul(e.value, v));
            } else {
                const auto& g = gens[a];
                for (std::size_t k = 0; k < g.nnz(); ++k) {
                    const std::size_t jp = g.index[k] / d, l = g.index[k] % d;
                    for (const auto& [yp, v] : ncols[l][y])
                        terms.emplace_back(checked_index(jp * nd + yp), f.mul(g.value[k], v));
                }
            }
            vecs.push_back(compress(f, terms));
        }
        std::vector<const SparseVector<F>*> ptrs;
        for (const auto& v : vecs)
            if (!v.empty())
                ptrs.push_back(&v);
        total += span_rank(f, ptrs, res.limits().max_block_entries);
    }
    return total;
}

}  // namespace detail

/// dim Tor_i(M, N) from a resolution of M.
template <Field F>
std::size_t tor_from(Resolution<F>& res, const FiniteModule<F>& n, std::size_t i)
{
    if (!res.module().same_algebra(n))
        throw std::invalid_argument("tor: modules over different algebras");
    res.extend_to(i + 1);
    const std::size_t beta = res.betti(i);
    return beta * n.dim() - detail::tensored_rank(res, i, n, false) - detail::tensored_rank(res, i + 1, n, false);
}

/// dim Ext^i(M, N) from a resolution of M.
template <Field F>
std::size_t ext_from(Resolution<F>& res, const FiniteModule<F>& n, std::size_t i)
{
    if (!res.module().same_algebra(n))
        throw std::invalid_argument("ext: modules over different algebras");
    res.extend_to(i + 1);
    const std::size_t beta = res.betti(i);
    return beta * n.dim() - detail::tensored_rank(res, i + 1, n, true) - detail::tensored_rank(res, i, n, true);
}

/// A cache of resolutions shared by related computations.
template <Field F>
class Session {
public:
    explicit Session(ResolutionLimits limits = {}) : limits_(limits) {}

    Resolution<F>& resolution(const FiniteModule<F>& m)
    {
        auto& bucket = cache_[m.hash()];
        for (auto& r : bucket)
            if (r->module() == m && r->graded() == m.graded())
                return *r;
        bucket.push_back(std::make_unique<Resolution<F>>(m, limits_));
        return *bucket.back();
    }

    std::vector<std::size_t> betti_numbers(const FiniteModule<F>& m, std::size_t n)
    {
        return resolution(m).betti_numbers(n);
    }

    /// dim Tor_i(M, N), resolving whichever of M and N reaches degree i + 1 more cheaply.
    std::size_t tor(const FiniteModule<F>& m, const FiniteModule<F>& n, std::size_t i)
    {
        auto& rm = resolution(m);
        auto& rn = resolution(n);
        if (&race(rm, rn, i + 1) == &rm)
            return tor_from(rm, n, i);
        return tor_from(rn, m, i);
    }

    /// dim Tor_i(M, N) from a resolution of M only.
    std::size_t tor_direct(const FiniteModule<F>& m, const FiniteModule<F>& n, std::size_t i)
    {
        return tor_from(resolution(m), n, i);
    }

    /// dim Ext^i(M, N) = dim Tor_i(M, N^v), by the cheaper of the two resolutions.
    std::size_t ext(const FiniteModule<F>& m, const FiniteModule<F>& n, std::size_t i)
    {
        return tor(m, matlis_dual(n), i);
    }

    /// dim Ext^i(M, N) as cohomology of Hom(resolution of M, N).
    std::size_t ext_direct(const FiniteModule<F>& m, const FiniteModule<F>& n, std::size_t i)
    {
        return ext_from(resolution(m), n, i);
    }

    /// mu^i(M) for i = 0..n.
    std::vector<std::size_t> bass_numbers(const FiniteModule<F>& m, std::size_t n, BassMethod method)
    {
        if (method == BassMethod::matlis)
            return betti_numbers(matlis_dual(m), n);
        auto& rk = resolution(residue_field_module(m.algebra_ptr()));
        std::vector<std::size_t> mu;
        for (std::size_t i = 0; i <= n; ++i)
            mu.push_back(ext_from(rk, m, i));
        return mu;
    }

    /// A finite module is free exactly when dim M = beta_0 dim R.
    bool is_free(const FiniteModule<F>& m)
    {
        return resolution(m).betti(0) * m.algebra().dim() == m.dim();
    }

    const ResolutionLimits& limits() const { return limits_; }

private:
    /// Extends the two resolutions step by step, always the one whose last
    /// free module is smaller, until one of them reaches degree n.
    Resolution<F>& race(Resolution<F>& a, Resolution<F>& b, std::size_t n)
    {
        for (;;) {
            if (a.length() >= n || a.terminated())
                return a;
            if (b.length() >= n || b.terminated())
                return b;
            if (a.betti(a.length()) <= b.betti(b.length()))
                a.extend_to(a.length() + 1);
            else
                b.extend_to(b.length() + 1);
        }
    }

    ResolutionLimits limits_;
    std::map<std::uint64_t, std::vector<std::unique_ptr<Resolution<F>>>> cache_;
};

template <Field F>
std::size_t tor(const FiniteModule<F>& m, const FiniteModule<F>& n, std::size_t i)
{
    Session<F> s;
    return s.tor(m, n, i);
}

template <Field F>
std::size_t ext(const FiniteModule<F>& m, const FiniteModule<F>& n, std::size_t i)
{
    Session<F> s;
    return s.ext(m, n, i);
}

template <Field F>
std::vector<std::size_t> bass_numbers(const FiniteModule<F>& m, std::size_t n, BassMethod method)
{
    Session<F> s;
    return s.bass_numbers(m, n, method);
}

}  // namespace sdchain
