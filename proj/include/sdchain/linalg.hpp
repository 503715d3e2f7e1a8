#pragma once

#include "sdchain/detail/modp_kernels.hpp"
#include "sdchain/matrix.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace sdchain {

template <Field F>
struct EchelonForm {
    Matrix<F> matrix;
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_cols;
};

namespace detail {

template <Field F>
std::vector<std::size_t> rref_generic(Matrix<F>& m)
{
    const F& f = m.field();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t piv = r;
        while (piv < m.rows() && f.is_zero(m(piv, c)))
            ++piv;
        if (piv == m.rows())
            continue;
        if (piv != r)
            std::swap_ranges(m.row_ptr(piv), m.row_ptr(piv) + m.cols(), m.row_ptr(r));
        const auto s = f.inv(m(r, c));
        for (std::size_t j = c; j < m.cols(); ++j)
            m(r, j) = f.mul(m(r, j), s);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || f.is_zero(m(i, c)))
                continue;
            const auto factor = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j)
                if (!f.is_zero(m(r, j)))
                    m(i, j) = f.sub(m(i, j), f.mul(factor, m(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace detail

/// Row-reduces `m` in place; returns the pivot columns.  Rows past the rank are zero.
template <Field F>
std::vector<std::size_t> rref_inplace(Matrix<F>& m)
{
    if constexpr (is_prime_field_v<F>)
        return detail::rref_modp(m.field(), m.data().data(), m.rows(), m.cols(), m.cols());
    else
        return detail::rref_generic(m);
}

template <Field F>
EchelonForm<F> rref(Matrix<F> m)
{
    auto pivots = rref_inplace(m);
    const std::size_t r = pivots.size();
    return {std::move(m), r, std::move(pivots)};
}

template <Field F>
std::size_t rank(Matrix<F> m)
{
    return rref_inplace(m).size();
}

/// Complement of the pivot set in [0, n).
inline std::vector<std::size_t> free_columns(const std::vector<std::size_t>& pivots, std::size_t n)
{
    std::vector<char> is_pivot(n, 0);
    for (std::size_t p : pivots)
        is_pivot[p] = 1;
    std::vector<std::size_t> out;
    out.reserve(n - pivots.size());
    for (std::size_t c = 0; c < n; ++c)
        if (!is_pivot[c])
            out.push_back(c);
    return out;
}

/// Right kernel of the reduced matrix `r` (pivots given), one basis vector per row.
/// The vector attached to free column f has a 1 at f and is zero at the other free columns.
template <Field F>
Matrix<F> kernel_rows_from_rref(const Matrix<F>& r, const std::vector<std::size_t>& pivots)
{
    const F& f = r.field();
    const auto frees = free_columns(pivots, r.cols());
    Matrix<F> k(f, frees.size(), r.cols());
    for (std::size_t a = 0; a < frees.size(); ++a) {
        k(a, frees[a]) = f.one();
        for (std::size_t i = 0; i < pivots.size(); ++i)
            k(a, pivots[i]) = f.neg(r(i, frees[a]));
    }
    return k;
}

/// Basis of the right null space, as rows.
template <Field F>
Matrix<F> kernel_rows(Matrix<F> m)
{
    const auto pivots = rref_inplace(m);
    return kernel_rows_from_rref(m, pivots);
}

/// Basis of the right null space, as columns.
template <Field F>
Matrix<F> kernel_basis(const Matrix<F>& m)
{
    return kernel_rows(m).transpose();
}

/// Some x with a x = b, or nothing when the system is inconsistent.
template <Field F>
std::optional<Matrix<F>> solve(const Matrix<F>& a, const Matrix<F>& b)
{
    if (a.rows() != b.rows())
        throw std::invalid_argument("solve: row count mismatch");
    Matrix<F> aug = Matrix<F>::hstack(a, b);
    const auto pivots = rref_inplace(aug);
    Matrix<F> x(a.field(), a.cols(), b.cols());
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        if (pivots[i] >= a.cols())
            return std::nullopt;
        for (std::size_t j = 0; j < b.cols(); ++j)
            x(pivots[i], j) = aug(i, a.cols() + j);
    }
    return x;
}

/// Indices of the lexicographically first maximal independent subset of rows.
template <Field F>
std::vector<std::size_t> independent_rows(const Matrix<F>& m)
{
    Matrix<F> t = m.transpose();
    return rref_inplace(t);
}

/// A subspace of F^n maintained as a fully reduced row basis.
///
/// Every basis row has a 1 in its pivot column and every other basis row is
/// zero there, so reducing a vector against the space is a single product.
template <Field F>
class RowSpace {
public:
    using Element = typename F::Element;

    RowSpace(F field, std::size_t ambient) : field_(field), n_(ambient), basis_(field, 0, ambient) {}

    std::size_t ambient() const { return n_; }
    std::size_t dim() const { return pivots_.size(); }
    bool full() const { return dim() == n_; }
    const Matrix<F>& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    /// x <- x minus its component along the space (rows of x are vectors).
    void reduce(Matrix<F>& x) const
    {
        if (x.cols() != n_)
            throw std::invalid_argument("RowSpace::reduce: wrong vector length");
        const std::size_t r = dim();
        if (r == 0 || x.rows() == 0)
            return;
        if constexpr (is_prime_field_v<F>) {
            std::vector<double> c(x.rows() * r);
            for (std::size_t i = 0; i < x.rows(); ++i)
                for (std::size_t k = 0; k < r; ++k)
                    c[i * r + k] = x(i, pivots_[k]);
            detail::gemm_modp(field_, x.rows(), n_, r, -1.0, c.data(), r, basis_.data().data(), n_, true,
                              x.data().data(), n_);
        } else {
            for (std::size_t i = 0; i < x.rows(); ++i)
                for (std::size_t k = 0; k < r; ++k) {
                    const Element coef = x(i, pivots_[k]);
                    if (field_.is_zero(coef))
                        continue;
                    for (std::size_t j = 0; j < n_; ++j)
                        if (!field_.is_zero(basis_(k, j)))
                            x(i, j) = field_.sub(x(i, j), field_.mul(coef, basis_(k, j)));
                }
        }
    }

    bool contains(const std::vector<Element>& v) const
    {
        Matrix<F> x(field_, 1, n_, v);
        reduce(x);
        return x.is_zero();
    }

    /// Adds the rows of `batch` to the space; returns the gain in dimension.
    std::size_t add(Matrix<F> batch)
    {
        if (batch.rows() == 0)
            return 0;
        reduce(batch);
        const auto newp = rref_inplace(batch);
        const std::size_t k = newp.size();
        if (k == 0)
            return 0;
        batch.resize_rows(k);
        // Clear the new pivot columns from the old basis.
        const std::size_t r = dim();
        if (r > 0) {
            if constexpr (is_prime_field_v<F>) {
                std::vector<double> c(r * k);
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = 0; j < k; ++j)
                        c[i * k + j] = basis_(i, newp[j]);
                detail::gemm_modp(field_, r, n_, k, -1.0, c.data(), k, batch.data().data(), n_, true,
                                  basis_.data().data(), n_);
            } else {
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = 0; j < k; ++j) {
                        const Element coef = basis_(i, newp[j]);
                        if (field_.is_zero(coef))
                            continue;
                        for (std::size_t c = 0; c < n_; ++c)
                            if (!field_.is_zero(batch(j, c)))
                                basis_(i, c) = field_.sub(basis_(i, c), field_.mul(coef, batch(j, c)));
                    }
            }
        }
        basis_.append_rows(batch);
        pivots_.insert(pivots_.end(), newp.begin(), newp.end());
        return k;
    }

    void add_vector(const std::vector<Element>& v) { add(Matrix<F>(field_, 1, n_, v)); }

private:
    F field_;
    std::size_t n_;
    Matrix<F> basis_;
    std::vector<std::size_t> pivots_;
};

}  // namespace sdchain
