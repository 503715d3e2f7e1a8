#pragma once

#include "sdchain/detail/modp_kernels.hpp"
#include "sdchain/field.hpp"

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdchain {

/// Dense row-major matrix over a field.
template <Field F>
class Matrix {
public:
    using field_type = F;
    using Element = typename F::Element;

    Matrix() = default;
    Matrix(F field, std::size_t rows, std::size_t cols)
        : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, field_.zero())
    {
    }
    Matrix(F field, std::size_t rows, std::size_t cols, std::vector<Element> entries)
        : field_(std::move(field)), rows_(rows), cols_(cols), data_(std::move(entries))
    {
        if (data_.size() != rows * cols)
            throw std::invalid_argument("matrix entry count does not match its shape");
    }

    static Matrix identity(const F& field, std::size_t n)
    {
        Matrix m(field, n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = field.one();
        return m;
    }

    /// Builds a matrix from integer literals, mainly for tests.
    static Matrix from_ints(const F& field, std::initializer_list<std::initializer_list<long long>> rows)
    {
        const std::size_t r = rows.size();
        const std::size_t c = r == 0 ? 0 : rows.begin()->size();
        Matrix m(field, r, c);
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != c)
                throw std::invalid_argument("ragged matrix literal");
            std::size_t j = 0;
            for (long long v : row)
                m(i, j++) = field.from_int(v);
            ++i;
        }
        return m;
    }

    const F& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Element& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Element& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Element* row_ptr(std::size_t i) { return data_.data() + i * cols_; }
    const Element* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }
    std::vector<Element>& data() { return data_; }
    const std::vector<Element>& data() const { return data_; }

    bool is_zero() const
    {
        return std::all_of(data_.begin(), data_.end(), [&](const Element& e) { return field_.is_zero(e); });
    }

    bool operator==(const Matrix& o) const
    {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    Matrix transpose() const
    {
        Matrix t(field_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix operator+(const Matrix& o) const
    {
        check_same_shape(o);
        Matrix r(field_, rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k)
            r.data_[k] = field_.add(data_[k], o.data_[k]);
        return r;
    }

    Matrix operator-(const Matrix& o) const
    {
        check_same_shape(o);
        Matrix r(field_, rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k)
            r.data_[k] = field_.sub(data_[k], o.data_[k]);
        return r;
    }

    Matrix scaled(const Element& s) const
    {
        Matrix r(*this);
        for (auto& e : r.data_)
            e = field_.mul(e, s);
        return r;
    }

    /// this += s * o
    void add_scaled(const Matrix& o, const Element& s)
    {
        check_same_shape(o);
        if (field_.is_zero(s))
            return;
        for (std::size_t k = 0; k < data_.size(); ++k)
            if (!field_.is_zero(o.data_[k]))
                data_[k] = field_.add(data_[k], field_.mul(o.data_[k], s));
    }

    Matrix operator*(const Matrix& o) const
    {
        if (cols_ != o.rows_)
            throw std::invalid_argument("matrix product shape mismatch");
        Matrix r(field_, rows_, o.cols_);
        if constexpr (is_prime_field_v<F>) {
            detail::gemm_modp(field_, rows_, o.cols_, cols_, 1.0, data_.data(), cols_, o.data_.data(), o.cols_, false,
                              r.data_.data(), o.cols_);
        } else {
            for (std::size_t i = 0; i < rows_; ++i)
                for (std::size_t k = 0; k < cols_; ++k) {
                    const Element& a = (*this)(i, k);
                    if (field_.is_zero(a))
                        continue;
                    const Element* brow = o.row_ptr(k);
                    Element* rrow = r.row_ptr(i);
                    for (std::size_t j = 0; j < o.cols_; ++j)
                        if (!field_.is_zero(brow[j]))
                            rrow[j] = field_.add(rrow[j], field_.mul(a, brow[j]));
                }
        }
        return r;
    }

    std::vector<Element> apply(const std::vector<Element>& v) const
    {
        if (v.size() != cols_)
            throw std::invalid_argument("matrix-vector shape mismatch");
        std::vector<Element> out(rows_, field_.zero());
        for (std::size_t i = 0; i < rows_; ++i) {
            Element acc = field_.zero();
            const Element* row = row_ptr(i);
            for (std::size_t j = 0; j < cols_; ++j)
                if (!field_.is_zero(row[j]) && !field_.is_zero(v[j]))
                    acc = field_.add(acc, field_.mul(row[j], v[j]));
            out[i] = acc;
        }
        return out;
    }

    /// Kronecker product: (A kron B)[(i,k),(j,l)] = A[i,j] * B[k,l].
    Matrix kron(const Matrix& o) const
    {
        Matrix r(field_, rows_ * o.rows_, cols_ * o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) {
                const Element& a = (*this)(i, j);
                if (field_.is_zero(a))
                    continue;
                for (std::size_t k = 0; k < o.rows_; ++k)
                    for (std::size_t l = 0; l < o.cols_; ++l)
                        r(i * o.rows_ + k, j * o.cols_ + l) = field_.mul(a, o(k, l));
            }
        return r;
    }

    Matrix select(const std::vector<std::size_t>& row_idx, const std::vector<std::size_t>& col_idx) const
    {
        Matrix r(field_, row_idx.size(), col_idx.size());
        for (std::size_t i = 0; i < row_idx.size(); ++i)
            for (std::size_t j = 0; j < col_idx.size(); ++j)
                r(i, j) = (*this)(row_idx[i], col_idx[j]);
        return r;
    }

    Matrix select_rows(const std::vector<std::size_t>& row_idx) const
    {
        Matrix r(field_, row_idx.size(), cols_);
        for (std::size_t i = 0; i < row_idx.size(); ++i)
            std::copy(row_ptr(row_idx[i]), row_ptr(row_idx[i]) + cols_, r.row_ptr(i));
        return r;
    }

    Matrix row_range(std::size_t begin, std::size_t end) const
    {
        Matrix r(field_, end - begin, cols_);
        std::copy(data_.begin() + begin * cols_, data_.begin() + end * cols_, r.data_.begin());
        return r;
    }

    /// Vertical concatenation.
    static Matrix vstack(const Matrix& a, const Matrix& b)
    {
        if (a.rows_ == 0)
            return b;
        if (b.rows_ == 0)
            return a;
        if (a.cols_ != b.cols_)
            throw std::invalid_argument("vstack column mismatch");
        Matrix r(a.field_, a.rows_ + b.rows_, a.cols_);
        std::copy(a.data_.begin(), a.data_.end(), r.data_.begin());
        std::copy(b.data_.begin(), b.data_.end(), r.data_.begin() + a.data_.size());
        return r;
    }

    /// Horizontal concatenation.
    static Matrix hstack(const Matrix& a, const Matrix& b)
    {
        if (a.rows_ != b.rows_)
            throw std::invalid_argument("hstack row mismatch");
        Matrix r(a.field_, a.rows_, a.cols_ + b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            std::copy(a.row_ptr(i), a.row_ptr(i) + a.cols_, r.row_ptr(i));
            std::copy(b.row_ptr(i), b.row_ptr(i) + b.cols_, r.row_ptr(i) + a.cols_);
        }
        return r;
    }

    void append_row(const std::vector<Element>& row)
    {
        if (rows_ == 0 && cols_ == 0)
            cols_ = row.size();
        if (row.size() != cols_)
            throw std::invalid_argument("append_row length mismatch");
        data_.insert(data_.end(), row.begin(), row.end());
        ++rows_;
    }

    void append_rows(const Matrix& o)
    {
        if (o.rows_ == 0)
            return;
        if (o.cols_ != cols_)
            throw std::invalid_argument("append_rows column mismatch");
        data_.insert(data_.end(), o.data_.begin(), o.data_.end());
        rows_ += o.rows_;
    }

    void resize_rows(std::size_t rows)
    {
        data_.resize(rows * cols_, field_.zero());
        rows_ = rows;
    }

    std::string to_string() const
    {
        std::ostringstream os;
        for (std::size_t i = 0; i < rows_; ++i) {
            os << '[';
            for (std::size_t j = 0; j < cols_; ++j)
                os << (j ? " " : "") << field_.to_string((*this)(i, j));
            os << "]\n";
        }
        return os.str();
    }

private:
    void check_same_shape(const Matrix& o) const
    {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("matrix shape mismatch");
    }

    F field_{};
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Element> data_;
};

}  // namespace sdchain
