#pragma once

// Dense kernels over GF(p) on raw row-major double buffers.  Products are
// accumulated exactly in double precision by Eigen's GEMM and reduced
// afterwards; the inner dimension of every product is capped so partial sums
// stay below 2^53.

#include "sdchain/field.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cstddef>
#include <vector>

namespace sdchain::detail {

/// Largest inner dimension whose exact dot products fit in a double.
inline std::size_t safe_inner_dim(const PrimeField& f)
{
    const double pm1 = static_cast<double>(f.characteristic()) - 1.0;
    const double bound = 4503599627370496.0;  // 2^52, leaves room for the accumulator term
    const double k = std::floor(bound / std::max(1.0, pm1 * pm1));
    return static_cast<std::size_t>(std::max(1.0, std::min(k, 1.0e9)));
}

inline void reduce_range(const PrimeField& f, double* x, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        x[i] = f.reduce(x[i]);
}

inline void reduce_block(const PrimeField& f, double* c, std::size_t rows, std::size_t cols, std::size_t ldc)
{
    for (std::size_t i = 0; i < rows; ++i)
        reduce_range(f, c + i * ldc, cols);
}

/// C <- (accumulate ? C : 0) + sign * A * B  (mod p), all row-major.
/// sign is +1 or -1; C must hold reduced entries on entry when accumulate is true.
inline void gemm_modp(const PrimeField& f, std::size_t m, std::size_t n, std::size_t k, double sign, const double* a,
                      std::size_t lda, const double* b, std::size_t ldb, bool accumulate, double* c, std::size_t ldc)
{
    if (m == 0 || n == 0)
        return;
    if (k == 0) {
        if (!accumulate)
            for (std::size_t i = 0; i < m; ++i)
                std::fill(c + i * ldc, c + i * ldc + n, 0.0);
        return;
    }
    const std::size_t step = safe_inner_dim(f);
    bool acc = accumulate;
    for (std::size_t k0 = 0; k0 < k; k0 += step) {
        const std::size_t kk = std::min(step, k - k0);
        using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        using Stride = Eigen::OuterStride<>;
        const Eigen::Map<const RowMat, 0, Stride> ma(a + k0, m, kk, Stride(lda));
        const Eigen::Map<const RowMat, 0, Stride> mb(b + k0 * ldb, kk, n, Stride(ldb));
        Eigen::Map<RowMat, 0, Stride> mc(c, m, n, Stride(ldc));
        if (!acc)
            mc.setZero();
        if (sign > 0)
            mc.noalias() += ma * mb;
        else
            mc.noalias() -= ma * mb;
        reduce_block(f, c, m, n, ldc);
        acc = true;
    }
}

/// Inverse of the k x k matrix q (row-major, invertible) by Gauss-Jordan.
inline std::vector<double> inverse_modp(const PrimeField& f, const std::vector<double>& q, std::size_t k)
{
    std::vector<double> a(q);
    std::vector<double> inv(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
        inv[i * k + i] = 1.0;
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t piv = c;
        while (piv < k && a[piv * k + c] == 0.0)
            ++piv;
        if (piv == k)
            throw std::logic_error("inverse_modp: singular pivot block");
        if (piv != c) {
            std::swap_ranges(a.begin() + piv * k, a.begin() + piv * k + k, a.begin() + c * k);
            std::swap_ranges(inv.begin() + piv * k, inv.begin() + piv * k + k, inv.begin() + c * k);
        }
        const double s = f.inv(a[c * k + c]);
        for (std::size_t j = 0; j < k; ++j) {
            a[c * k + j] = f.mul(a[c * k + j], s);
            inv[c * k + j] = f.mul(inv[c * k + j], s);
        }
        for (std::size_t i = 0; i < k; ++i) {
            if (i == c)
                continue;
            const double m = a[i * k + c];
            if (m == 0.0)
                continue;
            const double nm = f.neg(m);
            for (std::size_t j = 0; j < k; ++j) {
                a[i * k + j] = f.reduce(a[i * k + j] + nm * a[c * k + j]);
                inv[i * k + j] = f.reduce(inv[i * k + j] + nm * inv[c * k + j]);
            }
        }
    }
    return inv;
}

/// Panel width for blocked elimination.
inline std::size_t panel_width(const PrimeField& f)
{
    return std::clamp<std::size_t>(safe_inner_dim(f), 1, 192);
}

/// In-place reduced row echelon form of the rows x cols block `a` (leading dimension ld).
///
/// Rows are permuted so that the first `rank` rows hold the RREF rows in pivot
/// order and the remaining rows are zero.  Returns the pivot columns.
///
/// Column panels are eliminated with scalar Gauss-Jordan; the effect on the
/// trailing columns is then applied with two matrix products.
inline std::vector<std::size_t> rref_modp(const PrimeField& f, double* a, std::size_t rows, std::size_t cols,
                                          std::size_t ld)
{
    std::vector<std::size_t> pivots;
    if (rows == 0 || cols == 0)
        return pivots;
    const std::size_t nb = panel_width(f);
    std::size_t r = 0;
    std::vector<double> w, w0, q, pv, x;

    auto swap_rows = [&](std::size_t i, std::size_t j, std::size_t width) {
        std::swap_ranges(a + i * ld, a + i * ld + cols, a + j * ld);
        std::swap_ranges(w.begin() + i * width, w.begin() + (i + 1) * width, w.begin() + j * width);
        std::swap_ranges(w0.begin() + i * width, w0.begin() + (i + 1) * width, w0.begin() + j * width);
    };

    for (std::size_t c0 = 0; c0 < cols && r < rows; c0 += nb) {
        const std::size_t width = std::min(nb, cols - c0);
        w.assign(rows * width, 0.0);
        for (std::size_t i = 0; i < rows; ++i)
            std::copy(a + i * ld + c0, a + i * ld + c0 + width, w.begin() + i * width);
        w0 = w;

        std::vector<std::size_t> local;  // pivot columns within the panel
        for (std::size_t c = 0; c < width && r + local.size() < rows; ++c) {
            const std::size_t top = r + local.size();
            std::size_t piv = top;
            while (piv < rows && w[piv * width + c] == 0.0)
                ++piv;
            if (piv == rows)
                continue;
            if (piv != top)
                swap_rows(piv, top, width);
            double* prow = w.data() + top * width;
            const double s = f.inv(prow[c]);
            for (std::size_t j = c; j < width; ++j)
                prow[j] = f.mul(prow[j], s);
            for (std::size_t i = 0; i < rows; ++i) {
                if (i == top)
                    continue;
                double* row = w.data() + i * width;
                const double m = row[c];
                if (m == 0.0)
                    continue;
                const double nm = f.neg(m);
                for (std::size_t j = c; j < width; ++j)
                    row[j] = f.reduce(row[j] + nm * prow[j]);
            }
            local.push_back(c);
        }

        const std::size_t k = local.size();
        const std::size_t t0 = c0 + width;
        const std::size_t nt = cols - t0;
        if (k > 0 && nt > 0) {
            // Pivot block of the original panel and its inverse.
            q.assign(k * k, 0.0);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j)
                    q[i * k + j] = w0[(r + i) * width + local[j]];
            const std::vector<double> qinv = inverse_modp(f, q, k);
            // New pivot rows on the trailing columns.
            pv.assign(k * nt, 0.0);
            gemm_modp(f, k, nt, k, 1.0, qinv.data(), k, a + r * ld + t0, ld, false, pv.data(), nt);
            // Every other row loses W0[i, pivots] * pv.
            auto update = [&](std::size_t begin, std::size_t end) {
                if (begin >= end)
                    return;
                const std::size_t m = end - begin;
                x.assign(m * k, 0.0);
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t j = 0; j < k; ++j)
                        x[i * k + j] = w0[(begin + i) * width + local[j]];
                gemm_modp(f, m, nt, k, -1.0, x.data(), k, pv.data(), nt, true, a + begin * ld + t0, ld);
            };
            update(0, r);
            update(r + k, rows);
            for (std::size_t i = 0; i < k; ++i)
                std::copy(pv.begin() + i * nt, pv.begin() + (i + 1) * nt, a + (r + i) * ld + t0);
        }
        for (std::size_t i = 0; i < rows; ++i)
            std::copy(w.begin() + i * width, w.begin() + (i + 1) * width, a + i * ld + c0);
        for (std::size_t c : local)
            pivots.push_back(c0 + c);
        r += k;
    }
    return pivots;
}

}  // namespace sdchain::detail
