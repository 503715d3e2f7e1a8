#pragma once

// Independent reference computations for the tests.  Everything here works on
// plain integer vectors mod p and shares no code with the library's linear algebra.

#include "sdchain/module.hpp"

#include <cstdint>
#include <vector>

namespace oracle {

using Vec = std::vector<std::uint64_t>;

struct ModP {
    std::uint64_t p;

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % p; }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + p - b) % p; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return a * b % p; }
    std::uint64_t inv(std::uint64_t a) const
    {
        std::uint64_t r = 1, e = p - 2, b = a % p;
        while (e) {
            if (e & 1)
                r = mul(r, b);
            b = mul(b, b);
            e >>= 1;
        }
        return r;
    }
};

/// Row echelon basis that can be grown one vector at a time.
class Echelon {
public:
    Echelon(ModP f, std::size_t n) : f_(f), n_(n) {}

    /// Reduces v against the basis; returns true (and keeps it) if it was independent.
    bool insert(Vec v)
    {
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            const std::uint64_t c = v[piv_[r]];
            if (c)
                for (std::size_t k = 0; k < n_; ++k)
                    v[k] = f_.sub(v[k], f_.mul(c, rows_[r][k]));
        }
        std::size_t p = 0;
        while (p < n_ && v[p] == 0)
            ++p;
        if (p == n_)
            return false;
        const std::uint64_t inv = f_.inv(v[p]);
        for (auto& x : v)
            x = f_.mul(x, inv);
        rows_.push_back(std::move(v));
        piv_.push_back(p);
        return true;
    }

    std::size_t rank() const { return rows_.size(); }

private:
    ModP f_;
    std::size_t n_;
    std::vector<Vec> rows_;
    std::vector<std::size_t> piv_;
};

inline std::size_t rank(ModP f, const std::vector<Vec>& vecs, std::size_t n)
{
    Echelon e(f, n);
    for (const auto& v : vecs)
        e.insert(v);
    return e.rank();
}

/// Kernel of x -> sum_c x_c cols[c], as a list of vectors in F^{cols.size()}.
inline std::vector<Vec> kernel(ModP f, const std::vector<Vec>& cols, std::size_t rows)
{
    const std::size_t n = cols.size();
    // Row-reduce the rows x n matrix.
    std::vector<Vec> a(rows, Vec(n, 0));
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < rows; ++r)
            a[r][c] = cols[c][r];
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < n && rank < rows; ++c) {
        std::size_t p = rank;
        while (p < rows && a[p][c] == 0)
            ++p;
        if (p == rows)
            continue;
        std::swap(a[p], a[rank]);
        const std::uint64_t inv = f.inv(a[rank][c]);
        for (auto& x : a[rank])
            x = f.mul(x, inv);
        for (std::size_t r = 0; r < rows; ++r)
            if (r != rank && a[r][c]) {
                const std::uint64_t m = a[r][c];
                for (std::size_t k = c; k < n; ++k)
                    a[r][k] = f.sub(a[r][k], f.mul(m, a[rank][k]));
            }
        pivots.push_back(c);
        ++rank;
    }
    std::vector<bool> is_pivot(n, false);
    for (auto c : pivots)
        is_pivot[c] = true;
    std::vector<Vec> out;
    for (std::size_t free = 0; free < n; ++free) {
        if (is_pivot[free])
            continue;
        Vec v(n, 0);
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = f.sub(0, a[r][free]);
        out.push_back(std::move(v));
    }
    return out;
}

using IntMat = std::vector<Vec>;  // row-major

inline IntMat to_int(const sdchain::Matrix<sdchain::PrimeField>& m)
{
    IntMat out(m.rows(), Vec(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            out[r][c] = static_cast<std::uint64_t>(m(r, c));
    return out;
}

inline Vec apply(ModP f, const IntMat& m, const Vec& v)
{
    Vec out(m.size(), 0);
    for (std::size_t r = 0; r < m.size(); ++r) {
        std::uint64_t s = 0;
        for (std::size_t c = 0; c < v.size(); ++c)
            if (v[c] && m[r][c])
                s = f.add(s, f.mul(m[r][c], v[c]));
        out[r] = s;
    }
    return out;
}

/// Brute-force minimal free resolution.  Each syzygy module is a subspace of an
/// ambient space with its own action matrices; generators are chosen greedily
/// modulo m times the subspace.  gens[i][j] is the image of the j-th generator
/// of F_i in F_{i-1} (or in M for i = 0).
struct NaiveResolution {
    std::vector<std::size_t> betti;
    std::vector<std::vector<Vec>> gens;
};

inline NaiveResolution naive_resolution(const sdchain::FiniteModule<sdchain::PrimeField>& m, std::size_t n)
{
    const ModP f{m.field().characteristic()};
    const auto& alg = m.algebra();
    const std::size_t d = alg.dim();
    std::vector<IntMat> left;
    for (std::size_t l = 0; l < d; ++l)
        left.push_back(to_int(alg.left(l)));

    // Ambient space and its action, initially M itself.
    std::size_t amb = m.dim();
    std::vector<IntMat> act;
    for (std::size_t l = 0; l < d; ++l)
        act.push_back(to_int(m.action(l)));
    std::vector<Vec> sub;
    for (std::size_t b = 0; b < amb; ++b) {
        Vec v(amb, 0);
        v[b] = 1;
        sub.push_back(v);
    }

    NaiveResolution res;
    for (std::size_t i = 0; i <= n; ++i) {
        Echelon e(f, amb);
        for (std::size_t l = 1; l < d; ++l)
            for (const auto& w : sub)
                e.insert(apply(f, act[l], w));
        std::vector<Vec> g;
        for (const auto& w : sub)
            if (e.insert(w))
                g.push_back(w);
        res.betti.push_back(g.size());
        res.gens.push_back(g);
        if (i == n || g.empty())
            break;
        // Cover R^beta -> ambient, column (j, l) = e_l g_j; its kernel is the next syzygy.
        std::vector<Vec> cols;
        for (const auto& gj : g)
            for (std::size_t l = 0; l < d; ++l)
                cols.push_back(apply(f, act[l], gj));
        sub = kernel(f, cols, amb);
        const std::size_t beta = g.size();
        amb = beta * d;
        act.assign(d, IntMat(amb, Vec(amb, 0)));
        for (std::size_t l = 0; l < d; ++l)
            for (std::size_t j = 0; j < beta; ++j)
                for (std::size_t r = 0; r < d; ++r)
                    for (std::size_t c = 0; c < d; ++c)
                        act[l][j * d + r][j * d + c] = left[l][r][c];
    }
    while (res.betti.size() <= n)
        res.betti.push_back(0);
    return res;
}

inline std::vector<std::size_t> naive_betti(const sdchain::FiniteModule<sdchain::PrimeField>& m, std::size_t n)
{
    return naive_resolution(m, n).betti;
}

/// dim Ext^i(k, M) for i = 0..n from Hom of a brute-force resolution of k into M.
inline std::vector<std::size_t> naive_bass(const sdchain::FiniteModule<sdchain::PrimeField>& m, std::size_t n)
{
    const ModP f{m.field().characteristic()};
    const auto& alg = m.algebra();
    const std::size_t d = alg.dim();
    const std::size_t dm = m.dim();
    const auto k = sdchain::residue_field_module(m.algebra_ptr());
    const auto res = naive_resolution(k, n + 1);
    std::vector<IntMat> act;
    for (std::size_t l = 0; l < d; ++l)
        act.push_back(to_int(m.action(l)));

    // Hom(F_i, M) = M^{beta_i}; the coboundary into Hom(F_{i+1}, M) sends phi to
    // (g -> sum_j a_{jg} phi(e_j)), where g = sum_j a_{jg} e_j.
    auto coboundary_rank = [&](std::size_t i) -> std::size_t {
        if (i + 1 >= res.gens.size() || res.gens[i + 1].empty() || res.betti[i] == 0)
            return 0;
        const std::size_t bi = res.betti[i];
        std::vector<Vec> images;
        for (std::size_t j = 0; j < bi; ++j)
            for (std::size_t b = 0; b < dm; ++b) {
                Vec img;
                for (const auto& g : res.gens[i + 1]) {
                    Vec y(dm, 0);
                    for (std::size_t l = 0; l < d; ++l) {
                        const std::uint64_t c = g[j * d + l];
                        if (!c)
                            continue;
                        for (std::size_t r = 0; r < dm; ++r)
                            y[r] = f.add(y[r], f.mul(c, act[l][r][b]));
                    }
                    img.insert(img.end(), y.begin(), y.end());
                }
                images.push_back(std::move(img));
            }
        return rank(f, images, res.betti[i + 1] * dm);
    };
    std::vector<std::size_t> out;
    std::size_t prev = 0;
    for (std::size_t i = 0; i <= n; ++i) {
        const std::size_t next = coboundary_rank(i);
        out.push_back(res.betti[i] * dm - next - prev);
        prev = next;
    }
    return out;
}

/// Coefficientwise product of two truncated integer series.
inline std::vector<std::int64_t> convolve(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b)
{
    const std::size_t n = std::min(a.size(), b.size());
    std::vector<std::int64_t> out(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; i + j < n; ++j)
            out[i + j] += a[i] * b[j];
    return out;
}

/// Expansion of prod (a_i - t) / prod (1 - d_i t) by repeated multiplication with geometric series.
inline std::vector<std::int64_t> expand(const std::vector<std::int64_t>& num, const std::vector<std::int64_t>& den,
                                        std::size_t order)
{
    std::vector<std::int64_t> s(order + 1, 0);
    s[0] = 1;
    for (auto a : num) {
        std::vector<std::int64_t> lin(order + 1, 0);
        lin[0] = a;
        if (order >= 1)
            lin[1] = -1;
        s = convolve(s, lin);
    }
    for (auto d : den) {
        std::vector<std::int64_t> geo(order + 1, 1);
        for (std::size_t i = 1; i <= order; ++i)
            geo[i] = geo[i - 1] * d;
        s = convolve(s, geo);
    }
    return s;
}

}  // namespace oracle
