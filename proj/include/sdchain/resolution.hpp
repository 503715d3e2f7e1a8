#pragma once

#include "sdchain/module.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sdchain {

/// Raised when a dense block would exceed the configured memory budget.
class ResourceLimitExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ResolutionLimits {
    /// Largest dense block (rows x cols) the engine will allocate.
    std::size_t max_block_entries = std::size_t{1} << 27;
};

/// Sorted sparse vector of field elements.
template <Field F>
struct SparseVector {
    std::vector<std::uint32_t> index;
    std::vector<typename F::Element> value;

    std::size_t nnz() const { return index.size(); }
    bool empty() const { return index.empty(); }
};

namespace detail {

template <Field F>
using Term = std::pair<std::uint32_t, typename F::Element>;

/// Nonzero entries of every column of `m`.
template <Field F>
std::vector<std::vector<Term<F>>> sparse_columns(const Matrix<F>& m)
{
    const F& f = m.field();
    std::vector<std::vector<Term<F>>> cols(m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (!f.is_zero(m(r, c)))
                cols[c].emplace_back(static_cast<std::uint32_t>(r), m(r, c));
    return cols;
}

/// Sums the terms by index and drops zeros.
template <Field F>
SparseVector<F> compress(const F& f, std::vector<Term<F>>& terms)
{
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseVector<F> out;
    for (std::size_t k = 0; k < terms.size();) {
        const auto idx = terms[k].first;
        auto acc = terms[k].second;
        for (++k; k < terms.size() && terms[k].first == idx; ++k)
            acc = f.add(acc, terms[k].second);
        if (!f.is_zero(acc)) {
            out.index.push_back(idx);
            out.value.push_back(acc);
        }
    }
    return out;
}

inline std::uint32_t checked_index(std::size_t i)
{
    if (i > 0xffffffffu)
        throw ResourceLimitExceeded("coordinate index exceeds 32 bits");
    return static_cast<std::uint32_t>(i);
}

/// Dense matrix whose columns are the given sparse vectors, over the union of their supports.
template <Field F>
Matrix<F> columns_matrix(const F& f, const std::vector<const SparseVector<F>*>& vecs, std::size_t max_entries)
{
    std::vector<std::uint32_t> coords;
    for (const auto* v : vecs)
        coords.insert(coords.end(), v->index.begin(), v->index.end());
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    if (coords.size() * vecs.size() > max_entries)
        throw ResourceLimitExceeded("dense block of " + std::to_string(coords.size()) + " x " +
                                    std::to_string(vecs.size()) + " exceeds the configured limit");
    Matrix<F> m(f, coords.size(), vecs.size());
    for (std::size_t c = 0; c < vecs.size(); ++c) {
        const auto& v = *vecs[c];
        for (std::size_t k = 0; k < v.nnz(); ++k) {
            const auto r = std::lower_bound(coords.begin(), coords.end(), v.index[k]) - coords.begin();
            m(static_cast<std::size_t>(r), c) = v.value[k];
        }
    }
    return m;
}

/// Rank of the span of the given vectors.
template <Field F>
std::size_t span_rank(const F& f, const std::vector<const SparseVector<F>*>& vecs, std::size_t max_entries)
{
    if (vecs.empty())
        return 0;
    Matrix<F> m = columns_matrix(f, vecs, max_entries);
    return rank(std::move(m));
}

}  // namespace detail

/// A minimal free resolution of a module, extended on demand.
///
/// Generators of the i-th free module F_i are stored through their images:
/// for i = 0 as vectors of M, for i >= 1 as vectors of F_{i-1}, whose
/// coordinate (j, l) = j * dim R + l is the e_l-component at generator j.
/// When the module carries a grading every computation splits into
/// homogeneous blocks; otherwise the whole space is one block.
template <Field F>
class Resolution {
public:
    using Element = typename F::Element;
    using Vec = SparseVector<F>;

    explicit Resolution(FiniteModule<F> m, ResolutionLimits limits = {}) : module_(std::move(m)), limits_(limits)
    {
        const auto& alg = module_.algebra();
        d_ = alg.dim();
        graded_ = module_.graded();
        adeg_ = graded_ ? alg.degrees() : std::vector<Degree>(d_, 0);
        for (std::size_t l = 0; l < d_; ++l)
            algebra_cols_.push_back(detail::sparse_columns(alg.left(l)));
        for (std::size_t l = 0; l < d_; ++l)
            module_cols_.push_back(detail::sparse_columns(module_.action(l)));
        in_square_.assign(d_, 0);
        if (const auto& sq = alg.square_coordinates()) {
            has_square_ = true;
            for (std::size_t l : *sq)
                in_square_[l] = 1;
        }
        compute_cover();
    }

    const FiniteModule<F>& module() const { return module_; }
    const F& field() const { return module_.field(); }
    bool graded() const { return graded_; }

    /// Highest index i for which beta_i is known.
    std::size_t length() const { return gens_.size() - 1; }

    /// True once some beta_i vanished, so the resolution is finite and complete.
    bool terminated() const { return gens_.back().empty(); }

    void extend_to(std::size_t n)
    {
        while (gens_.size() <= n)
            compute_next();
    }

    std::size_t betti(std::size_t i)
    {
        extend_to(i);
        return gens_[i].size();
    }

    std::vector<std::size_t> betti_numbers(std::size_t n)
    {
        extend_to(n);
        std::vector<std::size_t> b;
        for (std::size_t i = 0; i <= n; ++i)
            b.push_back(gens_[i].size());
        return b;
    }

    /// Images of the generators of F_i (in M for i = 0, in F_{i-1} otherwise).
    const std::vector<Vec>& generators(std::size_t i)
    {
        extend_to(i);
        return gens_[i];
    }

    const std::vector<Degree>& generator_degrees(std::size_t i)
    {
        extend_to(i);
        return degrees_[i];
    }

    /// Degree of the basis vector e_l of the algebra as used by this resolution.
    Degree algebra_degree(std::size_t l) const { return adeg_[l]; }

    /// e_l times a vector of a free module, coordinates j * dim R + s.
    Vec act_free(std::size_t l, const Vec& v) const
    {
        std::vector<detail::Term<F>> terms;
        const F& f = field();
        for (std::size_t k = 0; k < v.nnz(); ++k) {
            const std::size_t j = v.index[k] / d_, s = v.index[k] % d_;
            for (const auto& [t, c] : algebra_cols_[l][s])
                terms.emplace_back(detail::checked_index(j * d_ + t), f.mul(v.value[k], c));
        }
        return detail::compress(f, terms);
    }

    /// e_l times a vector of M.
    Vec act_module(std::size_t l, const Vec& v) const
    {
        std::vector<detail::Term<F>> terms;
        const F& f = field();
        for (std::size_t k = 0; k < v.nnz(); ++k)
            for (const auto& [t, c] : module_cols_[l][v.index[k]])
                terms.emplace_back(t, f.mul(v.value[k], c));
        return detail::compress(f, terms);
    }

    const ResolutionLimits& limits() const { return limits_; }

private:
    struct Block {
        std::vector<std::uint32_t> columns;
        std::vector<Vec> kernel;
        std::vector<std::uint32_t> kernel_free;
        std::vector<Vec> m_kernel;
    };

    void compute_cover()
    {
        const F& f = field();
        const std::size_t n = module_.dim();
        // m M is spanned by the columns of the generator actions.
        RowSpace<F> mm(f, n);
        for (std::size_t g : module_.algebra().generator_indices())
            if (n > 0)
                mm.add(module_.action(g).transpose());
        std::vector<Vec> gens;
        std::vector<Degree> degs;
        for (std::size_t b = 0; b < n && mm.dim() < n; ++b) {
            std::vector<Element> v(n, f.zero());
            v[b] = f.one();
            if (mm.contains(v))
                continue;
            mm.add_vector(v);
            Vec u;
            u.index.push_back(static_cast<std::uint32_t>(b));
            u.value.push_back(f.one());
            gens.push_back(std::move(u));
            degs.push_back(graded_ ? module_.degree(b) : 0);
        }
        gens_.push_back(std::move(gens));
        degrees_.push_back(std::move(degs));
    }

    void compute_next()
    {
        const F& f = field();
        const std::size_t i = gens_.size() - 1;
        const auto& g = gens_[i];
        const auto& gdeg = degrees_[i];
        if (g.empty()) {
            gens_.emplace_back();
            degrees_.emplace_back();
            return;
        }

        // Columns (j, l), l >= 1, of F_i grouped by degree; the kernel lies in m F_i.
        std::map<Degree, Block> blocks;
        for (std::size_t j = 0; j < g.size(); ++j)
            for (std::size_t l = 1; l < d_; ++l)
                blocks[gdeg[j] + adeg_[l]].columns.push_back(detail::checked_index(j * d_ + l));

        for (auto& [deg, blk] : blocks) {
            // Columns in m^2 F_i first, so kernel vectors with a free column there avoid the rest.
            if (has_square_)
                std::stable_partition(blk.columns.begin(), blk.columns.end(),
                                      [&](std::uint32_t c) { return in_square_[c % d_] != 0; });
            std::vector<Vec> images;
            images.reserve(blk.columns.size());
            for (std::uint32_t col : blk.columns) {
                const std::size_t j = col / d_, l = col % d_;
                images.push_back(i == 0 ? act_module(l, g[j]) : act_free(l, g[j]));
            }
            std::vector<const Vec*> ptrs;
            for (const auto& v : images)
                ptrs.push_back(&v);
            Matrix<F> m = detail::columns_matrix(f, ptrs, limits_.max_block_entries);
            const auto pivots = rref_inplace(m);
            const auto frees = free_columns(pivots, blk.columns.size());
            for (std::size_t fc : frees) {
                std::vector<detail::Term<F>> terms;
                terms.emplace_back(blk.columns[fc], f.one());
                for (std::size_t r = 0; r < pivots.size(); ++r)
                    if (!f.is_zero(m(r, fc)))
                        terms.emplace_back(blk.columns[pivots[r]], f.neg(m(r, fc)));
                blk.kernel.push_back(detail::compress(f, terms));
                blk.kernel_free.push_back(blk.columns[fc]);
            }
        }

        // m K is spanned by x_g K for the algebra generators x_g.
        const auto& alg_gens = module_.algebra().generator_indices();
        for (auto& [deg, blk] : blocks)
            for (std::size_t gi : alg_gens) {
                auto target = blocks.find(deg + adeg_[gi]);
                for (const auto& v : blk.kernel) {
                    Vec w = act_free(gi, v);
                    if (w.empty())
                        continue;
                    if (target == blocks.end())
                        throw std::logic_error("resolution: product left every homogeneous block");
                    target->second.m_kernel.push_back(std::move(w));
                }
            }

        // Minimal generators: a complement of m K in each block.
        std::vector<std::pair<std::uint32_t, std::pair<Vec, Degree>>> chosen;
        for (auto& [deg, blk] : blocks) {
            for (std::size_t idx : select_generators(blk))
                chosen.emplace_back(blk.kernel_free[idx], std::make_pair(std::move(blk.kernel[idx]), deg));
            blk = Block{};
        }
        std::sort(chosen.begin(), chosen.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<Vec> next;
        std::vector<Degree> next_deg;
        next.reserve(chosen.size());
        for (auto& c : chosen) {
            next.push_back(std::move(c.second.first));
            next_deg.push_back(c.second.second);
        }
        gens_.push_back(std::move(next));
        degrees_.push_back(std::move(next_deg));
    }

    /// Indices of kernel vectors completing m K to K, in kernel order.
    std::vector<std::size_t> select_generators(const Block& blk) const
    {
        const F& f = field();
        const std::size_t nk = blk.kernel.size();
        if (nk == 0)
            return {};
        std::vector<std::uint32_t> coords;
        for (const auto& v : blk.kernel)
            coords.insert(coords.end(), v.index.begin(), v.index.end());
        for (const auto& v : blk.m_kernel)
            coords.insert(coords.end(), v.index.begin(), v.index.end());
        std::sort(coords.begin(), coords.end());
        coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
        auto dense_rows = [&](auto first, std::size_t count) {
            if (count * coords.size() > limits_.max_block_entries)
                throw ResourceLimitExceeded("dense block of " + std::to_string(count) + " x " +
                                            std::to_string(coords.size()) + " exceeds the configured limit");
            Matrix<F> m(f, count, coords.size());
            for (std::size_t r = 0; r < count; ++r) {
                const Vec& v = *(first + static_cast<std::ptrdiff_t>(r));
                for (std::size_t k = 0; k < v.nnz(); ++k)
                    m(r, static_cast<std::size_t>(std::lower_bound(coords.begin(), coords.end(), v.index[k]) -
                                                  coords.begin())) = v.value[k];
            }
            return m;
        };

        // Kernel vectors with a free column outside m^2 F_i ("top") are
        // independent modulo m K, which sits inside m^2 F_i.  The others are
        // needed only when m K is smaller than their span.
        std::vector<char> is_top(nk, 0);
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < nk; ++k)
            if (has_square_ && !in_square_[blk.kernel_free[k] % d_]) {
                is_top[k] = 1;
                out.push_back(k);
            }
        const std::size_t target = nk - out.size();
        if (target == 0)
            return out;
        RowSpace<F> space(f, coords.size());
        const std::size_t nm = blk.m_kernel.size();
        for (std::size_t at = 0; at < nm && space.dim() < target;) {
            const std::size_t batch = std::min(nm - at, std::max<std::size_t>(target - space.dim(), 16));
            space.add(dense_rows(blk.m_kernel.begin() + static_cast<std::ptrdiff_t>(at), batch));
            at += batch;
        }
        if (space.dim() == target)
            return out;
        for (std::size_t k : out)
            space.add(dense_rows(blk.kernel.begin() + static_cast<std::ptrdiff_t>(k), 1));
        for (std::size_t k = 0; k < nk; ++k)
            if (!is_top[k] && space.add(dense_rows(blk.kernel.begin() + static_cast<std::ptrdiff_t>(k), 1)) > 0)
                out.push_back(k);
        std::sort(out.begin(), out.end());
        return out;
    }

    FiniteModule<F> module_;
    ResolutionLimits limits_;
    std::size_t d_ = 0;
    bool graded_ = false;
    std::vector<Degree> adeg_;
    std::vector<char> in_square_;
    bool has_square_ = false;
    std::vector<std::vector<std::vector<detail::Term<F>>>> algebra_cols_;
    std::vector<std::vector<std::vector<detail::Term<F>>>> module_cols_;
    std::vector<std::vector<Vec>> gens_;
    std::vector<std::vector<Degree>> degrees_;
};

/// A finite prefix of a minimal free resolution with explicit differentials.
///
/// `augmentation` is the (dim M) x beta_0 matrix of F_0 -> M.  For i >= 1,
/// `differentials[i - 1]` is the (beta_{i-1} dim R) x beta_i matrix whose
/// column j holds the image of the j-th generator of F_i; the algebra entry
/// at (j', j) is rows j' dim R .. j' dim R + dim R - 1 of that column.
template <Field F>
struct FreeResolutionPrefix {
    FiniteModule<F> module;
    std::size_t length = 0;
    std::vector<std::size_t> betti;
    Matrix<F> augmentation;
    std::vector<Matrix<F>> differentials;

    /// The algebra element at row j', column j of d_i, as a coefficient vector.
    std::vector<typename F::Element> entry(std::size_t i, std::size_t row, std::size_t col) const
    {
        const std::size_t d = module.algebra().dim();
        const auto& m = differentials.at(i - 1);
        std::vector<typename F::Element> e;
        for (std::size_t l = 0; l < d; ++l)
            e.push_back(m(row * d + l, col));
        return e;
    }
};

namespace detail {

template <Field F>
Matrix<F> dense_columns(const F& f, std::size_t rows, const std::vector<SparseVector<F>>& cols)
{
    Matrix<F> m(f, rows, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t k = 0; k < cols[c].nnz(); ++k)
            m(cols[c].index[k], c) = cols[c].value[k];
    return m;
}

/// The F-linear matrix of a map out of R^beta given generator images and the action on the target.
template <Field F>
Matrix<F> expand_free_map(const FiniteModule<F>& target_as_module_or_free, const Matrix<F>& gen_images,
                          bool target_is_free)
{
    const auto& alg = target_as_module_or_free.algebra();
    const std::size_t d = alg.dim();
    const F& f = alg.field();
    const std::size_t beta = gen_images.cols();
    const std::size_t rows = gen_images.rows();
    Matrix<F> out(f, rows, beta * d);
    for (std::size_t l = 0; l < d; ++l) {
        Matrix<F> act;
        if (target_is_free)
            act = Matrix<F>::identity(f, rows / d).kron(alg.left(l));
        else
            act = target_as_module_or_free.action(l);
        const Matrix<F> img = act * gen_images;
        for (std::size_t j = 0; j < beta; ++j)
            for (std::size_t r = 0; r < rows; ++r)
                out(r, j * d + l) = img(r, j);
    }
    return out;
}

}  // namespace detail

template <Field F>
FreeResolutionPrefix<F> minimal_free_resolution(Resolution<F>& res, std::size_t n)
{
    res.extend_to(n);
    const auto& m = res.module();
    const F& f = m.field();
    const std::size_t d = m.algebra().dim();
    FreeResolutionPrefix<F> p;
    p.module = m;
    p.length = n;
    p.betti = res.betti_numbers(n);
    p.augmentation = detail::dense_columns(f, m.dim(), res.generators(0));
    for (std::size_t i = 1; i <= n; ++i)
        p.differentials.push_back(detail::dense_columns(f, p.betti[i - 1] * d, res.generators(i)));
    return p;
}

template <Field F>
FreeResolutionPrefix<F> minimal_free_resolution(const FiniteModule<F>& m, std::size_t n)
{
    Resolution<F> res(m);
    return minimal_free_resolution(res, n);
}

template <Field F>
std::vector<std::size_t> betti_numbers(const FiniteModule<F>& m, std::size_t n)
{
    Resolution<F> res(m);
    return res.betti_numbers(n);
}

/// The F-linear matrix of d_i (i >= 1) or of the augmentation (i = 0).
template <Field F>
Matrix<F> linear_differential(const FreeResolutionPrefix<F>& p, std::size_t i)
{
    if (i == 0)
        return detail::expand_free_map(p.module, p.augmentation, false);
    return detail::expand_free_map(p.module, p.differentials.at(i - 1), true);
}

/// Checks d_i d_{i+1} = 0, minimality and exactness on every computed step.
template <Field F>
ValidationReport check_resolution(const FreeResolutionPrefix<F>& p)
{
    ValidationReport rep;
    const auto& m = p.module;
    const F& f = m.field();
    const std::size_t d = m.algebra().dim();
    std::vector<Matrix<F>> maps;
    for (std::size_t i = 0; i <= p.length; ++i)
        maps.push_back(linear_differential(p, i));

    // Minimality: the augmentation is onto M and induces an iso on M/mM; the
    // differentials have no unit entries.
    if (rank(maps[0]) != m.dim())
        rep.problems.push_back("augmentation is not surjective");
    for (std::size_t i = 1; i <= p.length; ++i) {
        const auto& di = p.differentials[i - 1];
        for (std::size_t r = 0; r < di.rows(); r += d)
            for (std::size_t c = 0; c < di.cols(); ++c)
                if (!f.is_zero(di(r, c))) {
                    rep.problems.push_back("d_" + std::to_string(i) + " has a unit entry");
                    r = di.rows();
                    break;
                }
    }
    for (std::size_t i = 0; i < p.length; ++i) {
        const Matrix<F> comp = maps[i] * maps[i + 1];
        if (!comp.is_zero())
            rep.problems.push_back("d_" + std::to_string(i) + " d_" + std::to_string(i + 1) + " is not zero");
        const std::size_t ker = maps[i].cols() - rank(maps[i]);
        const std::size_t img = rank(maps[i + 1]);
        if (ker != img)
            rep.problems.push_back("not exact at F_" + std::to_string(i));
    }
    return rep;
}

}  // namespace sdchain
