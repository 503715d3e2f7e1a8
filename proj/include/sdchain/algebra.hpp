#pragma once

#include "sdchain/linalg.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sdchain {

struct ValidationReport {
    std::vector<std::string> problems;
    bool ok() const { return problems.empty(); }
};

namespace detail {

inline std::uint64_t fnv_mix(std::uint64_t h, std::uint64_t v)
{
    for (int b = 0; b < 8; ++b) {
        h ^= (v >> (8 * b)) & 0xffu;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline constexpr std::uint64_t fnv_basis = 0xcbf29ce484222325ull;

}  // namespace detail

/// A multidegree packed into one integer: component i is weighted by 2^(10 i),
/// so packing is additive and components in (-512, 512) round-trip.
using Degree = std::int64_t;

namespace grading {

inline constexpr int max_rank = 6;
inline constexpr int bits = 10;

inline Degree unit(int axis) { return Degree{1} << (bits * axis); }

inline Degree shift(Degree d, int axes) { return d * (Degree{1} << (bits * axes)); }

inline Degree encode(const std::vector<int>& comps)
{
    Degree d = 0;
    for (std::size_t i = 0; i < comps.size(); ++i)
        d += Degree{comps[i]} * unit(static_cast<int>(i));
    return d;
}

inline std::vector<int> decode(Degree d, int rank)
{
    std::vector<int> out;
    constexpr Degree half = Degree{1} << (bits - 1);
    constexpr Degree full = Degree{1} << bits;
    for (int i = 0; i < rank; ++i) {
        Degree c = ((d % full) + full + half) % full - half;
        out.push_back(static_cast<int>(c));
        d = (d - c) / full;
    }
    return out;
}

/// Merges the components of a rank-`from` grading into `to` groups by summing.
inline std::vector<Degree> coarsen(const std::vector<Degree>& deg, int from, int to)
{
    if (to >= from)
        return deg;
    if (to <= 0)
        return std::vector<Degree>(deg.size(), 0);
    std::vector<Degree> out;
    out.reserve(deg.size());
    for (Degree d : deg) {
        const auto c = decode(d, from);
        std::vector<int> merged(static_cast<std::size_t>(to), 0);
        for (int i = 0; i < from; ++i)
            merged[static_cast<std::size_t>(i * to / from)] += c[static_cast<std::size_t>(i)];
        out.push_back(encode(merged));
    }
    return out;
}

/// Ranks kept from each factor of a tensor product so the total stays within max_rank.
inline std::pair<int, int> product_plan(int ra, int rb)
{
    if (ra + rb <= max_rank)
        return {ra, rb};
    const int nb = std::min(rb, max_rank / 2);
    return {std::min(ra, max_rank - nb), nb};
}

inline int product_rank(int ra, int rb)
{
    const auto [na, nb] = product_plan(ra, rb);
    return na + nb;
}

/// Degrees of x (x) y at index i * |db| + j for gradings of ranks ra and rb.
inline std::vector<Degree> product_degrees(const std::vector<Degree>& da, int ra, const std::vector<Degree>& db, int rb)
{
    const auto [na, nb] = product_plan(ra, rb);
    const auto ca = coarsen(da, ra, na);
    const auto cb = coarsen(db, rb, nb);
    std::vector<Degree> deg;
    deg.reserve(da.size() * db.size());
    for (Degree x : ca)
        for (Degree y : cb)
            deg.push_back(x + shift(y, na));
    return deg;
}

}  // namespace grading

/// A commutative local algebra of finite dimension over F, given by structure constants.
///
/// Basis element 0 is the identity and e_1, ..., e_{dim-1} span the maximal ideal.
/// Multiplication is stored as left-multiplication matrices: column j of
/// left(i) is the coordinate vector of e_i * e_j.
template <Field F>
class FiniteLocalAlgebra {
public:
    using Element = typename F::Element;
    using Mat = Matrix<F>;

    FiniteLocalAlgebra(F field, std::vector<Mat> left_mult, std::vector<std::string> labels = {})
        : field_(field), left_(std::move(left_mult)), labels_(std::move(labels))
    {
        const std::size_t d = left_.size();
        if (d == 0)
            throw std::invalid_argument("algebra must have positive dimension");
        for (const auto& l : left_)
            if (l.rows() != d || l.cols() != d)
                throw std::invalid_argument("structure constants have the wrong shape");
        if (!labels_.empty() && labels_.size() != d)
            throw std::invalid_argument("label count does not match the dimension");
        if (labels_.empty())
            labels_ = default_labels(d);
        degrees_.assign(d, 0);
        structure_ = compute_structure();
    }

    /// Builds from c[i][j][k] with e_i e_j = sum_k c[i][j][k] e_k.
    static FiniteLocalAlgebra from_structure_constants(F field,
                                                      const std::vector<std::vector<std::vector<Element>>>& c,
                                                      std::vector<std::string> labels = {})
    {
        const std::size_t d = c.size();
        std::vector<Mat> left;
        left.reserve(d);
        for (std::size_t i = 0; i < d; ++i) {
            if (c[i].size() != d)
                throw std::invalid_argument("structure constants have the wrong shape");
            Mat l(field, d, d);
            for (std::size_t j = 0; j < d; ++j) {
                if (c[i][j].size() != d)
                    throw std::invalid_argument("structure constants have the wrong shape");
                for (std::size_t k = 0; k < d; ++k)
                    l(k, j) = c[i][j][k];
            }
            left.push_back(std::move(l));
        }
        return FiniteLocalAlgebra(field, std::move(left), std::move(labels));
    }

    const F& field() const { return field_; }
    FieldSpec field_spec() const { return spec_of(field_); }

    /// Number of grading components (0 when ungraded).
    int grading_rank() const { return grading_rank_; }
    Degree degree(std::size_t i) const { return degrees_[i]; }
    const std::vector<Degree>& degrees() const { return degrees_; }

    /// True when every structure constant is homogeneous for `deg`.
    bool is_homogeneous(const std::vector<Degree>& deg) const
    {
        if (deg.size() != dim())
            return false;
        for (std::size_t i = 0; i < dim(); ++i)
            for (std::size_t j = 0; j < dim(); ++j)
                for (std::size_t k = 0; k < dim(); ++k)
                    if (!field_.is_zero(c(i, j, k)) && deg[k] != deg[i] + deg[j])
                        return false;
        return true;
    }

    /// Attaches a multigrading; throws if the structure constants are not homogeneous.
    FiniteLocalAlgebra with_grading(int rank, std::vector<Degree> deg) const
    {
        if (rank < 0 || rank > grading::max_rank)
            throw std::invalid_argument("unsupported grading rank");
        if (!is_homogeneous(deg))
            throw std::invalid_argument("structure constants are not homogeneous for the given grading");
        FiniteLocalAlgebra a(*this);
        a.grading_rank_ = rank;
        a.degrees_ = std::move(deg);
        if (rank == 0)
            a.degrees_.assign(dim(), 0);
        return a;
    }
    std::size_t dim() const { return left_.size(); }
    static constexpr std::size_t one_index() { return 0; }
    const std::vector<std::string>& labels() const { return labels_; }

    /// Multiplication by e_i as a dim x dim matrix.
    const Mat& left(std::size_t i) const { return left_.at(i); }
    const std::vector<Mat>& left_matrices() const { return left_; }

    /// Coefficient of e_k in e_i e_j.
    const Element& c(std::size_t i, std::size_t j, std::size_t k) const { return left_[i](k, j); }

    std::vector<Element> multiply(const std::vector<Element>& x, const std::vector<Element>& y) const
    {
        std::vector<Element> out(dim(), field_.zero());
        for (std::size_t i = 0; i < dim(); ++i) {
            if (field_.is_zero(x[i]))
                continue;
            const auto col = left_[i].apply(y);
            for (std::size_t k = 0; k < dim(); ++k)
                out[k] = field_.add(out[k], field_.mul(x[i], col[k]));
        }
        return out;
    }

    /// Successive powers m, m^2, ..., up to the first zero power (not included).
    /// Stops after dim + 1 steps, which only happens when m is not nilpotent.
    std::vector<RowSpace<F>> radical_powers() const
    {
        std::vector<RowSpace<F>> powers;
        RowSpace<F> m(field_, dim());
        for (std::size_t i = 1; i < dim(); ++i) {
            std::vector<Element> v(dim(), field_.zero());
            v[i] = field_.one();
            m.add_vector(v);
        }
        while (m.dim() > 0 && powers.size() <= dim()) {
            RowSpace<F> next(field_, dim());
            const Mat& b = m.basis();
            for (std::size_t g = 1; g < dim(); ++g)
                next.add(b * left_[g].transpose());
            powers.push_back(std::move(m));
            m = std::move(next);
        }
        return powers;
    }

    /// l = min{ i > 0 : m^i = 0 }.
    std::size_t nilpotency_index() const
    {
        if (!structure_.nilpotent)
            throw std::domain_error("maximal ideal is not nilpotent");
        return structure_.power_dims.size() + 1;
    }

    /// dim m^i for i = 1, 2, ... while nonzero.
    const std::vector<std::size_t>& radical_power_dims() const { return structure_.power_dims; }

    /// ann(m) as a matrix whose rows span it.
    Mat socle_basis() const
    {
        Mat stacked(field_, 0, dim());
        for (std::size_t i = 1; i < dim(); ++i)
            stacked.append_rows(left_[i]);
        return kernel_rows(stacked);
    }

    std::size_t type() const { return socle_basis().rows(); }

    /// Indices i >= 1 whose images form a basis of m / m^2, lowest indices first.
    const std::vector<std::size_t>& generator_indices() const { return structure_.generators; }

    /// When m^2 is spanned by a subset of the basis, that subset.
    const std::optional<std::vector<std::size_t>>& square_coordinates() const { return structure_.square; }

    ValidationReport validate() const
    {
        ValidationReport rep;
        const std::size_t d = dim();
        const Mat id = Mat::identity(field_, d);
        if (!(left_[0] == id))
            rep.problems.push_back("e_0 does not act as the identity");
        for (std::size_t i = 0; i < d && rep.problems.size() < 8; ++i)
            for (std::size_t j = i + 1; j < d; ++j)
                for (std::size_t k = 0; k < d; ++k)
                    if (c(i, j, k) != c(j, i, k)) {
                        rep.problems.push_back("not commutative: e_" + std::to_string(i) + " e_" + std::to_string(j));
                        j = d;
                        break;
                    }
        // Associativity: L_i L_j = sum_k c[i][j][k] L_k.
        for (std::size_t i = 0; i < d && rep.problems.size() < 8; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                Mat lhs = left_[i] * left_[j];
                Mat rhs(field_, d, d);
                for (std::size_t k = 0; k < d; ++k)
                    if (!field_.is_zero(c(i, j, k)))
                        rhs.add_scaled(left_[k], c(i, j, k));
                if (!(lhs == rhs)) {
                    rep.problems.push_back("not associative at e_" + std::to_string(i) + ", e_" + std::to_string(j));
                    break;
                }
            }
        if (rep.ok()) {
            if (!structure_.nilpotent)
                rep.problems.push_back("span(e_1..e_{dim-1}) is not a nilpotent ideal");
            else {
                // m must be an ideal: e_i m lands in m for every i.
                for (std::size_t i = 1; i < d; ++i)
                    for (std::size_t j = 1; j < d; ++j)
                        if (!field_.is_zero(c(i, j, 0))) {
                            rep.problems.push_back("span(e_1..e_{dim-1}) is not closed under multiplication");
                            i = d;
                            break;
                        }
            }
        }
        return rep;
    }

    std::uint64_t hash() const
    {
        std::uint64_t h = detail::fnv_basis;
        const FieldSpec fs = field_spec();
        h = detail::fnv_mix(h, fs.kind == FieldSpec::Kind::rationals ? 0 : fs.p);
        h = detail::fnv_mix(h, dim());
        for (const auto& l : left_)
            for (const auto& e : l.data())
                h = detail::fnv_mix(h, field_.fingerprint(e));
        return h;
    }

    bool operator==(const FiniteLocalAlgebra& o) const
    {
        return field_ == o.field_ && left_ == o.left_;
    }

private:
    struct Structure {
        std::vector<std::size_t> power_dims;
        bool nilpotent = true;
        std::vector<std::size_t> generators;
        std::optional<std::vector<std::size_t>> square;
    };

    Structure compute_structure() const
    {
        Structure st;
        const auto p = radical_powers();
        st.nilpotent = p.size() <= dim();
        for (const auto& sp : p)
            st.power_dims.push_back(sp.dim());
        if (dim() > 1) {
            Mat rows(field_, dim() - 1, dim());
            for (std::size_t i = 1; i < dim(); ++i)
                rows(i - 1, i) = field_.one();
            if (p.size() >= 2)
                p[1].reduce(rows);
            st.generators = independent_rows(rows);
            for (auto& i : st.generators)
                ++i;
        }
        if (p.size() < 2) {
            st.square = std::vector<std::size_t>{};
        } else {
            std::vector<std::size_t> idx;
            for (std::size_t k = 1; k < dim(); ++k) {
                std::vector<Element> v(dim(), field_.zero());
                v[k] = field_.one();
                if (p[1].contains(v))
                    idx.push_back(k);
            }
            if (idx.size() == p[1].dim())
                st.square = std::move(idx);
        }
        return st;
    }

    static std::vector<std::string> default_labels(std::size_t d)
    {
        std::vector<std::string> l{"1"};
        for (std::size_t i = 1; i < d; ++i)
            l.push_back("e" + std::to_string(i));
        return l;
    }

    F field_;
    std::vector<Mat> left_;
    std::vector<std::string> labels_;
    int grading_rank_ = 0;
    std::vector<Degree> degrees_;
    Structure structure_;
};

/// The field itself, as a one-dimensional algebra.
template <Field F>
FiniteLocalAlgebra<F> base_field(const F& field)
{
    return FiniteLocalAlgebra<F>(field, {Matrix<F>::identity(field, 1)}, {"1"});
}

/// F x F^a with square-zero ideal F^a.
template <Field F>
FiniteLocalAlgebra<F> trivial_extension(std::size_t a, const F& field)
{
    if (a == 0)
        throw std::invalid_argument("trivial extension needs a >= 1; use base_field for the field itself");
    const std::size_t d = a + 1;
    std::vector<Matrix<F>> left;
    left.push_back(Matrix<F>::identity(field, d));
    for (std::size_t i = 1; i < d; ++i) {
        Matrix<F> l(field, d, d);
        l(i, 0) = field.one();
        left.push_back(std::move(l));
    }
    std::vector<std::string> labels{"1"};
    for (std::size_t i = 1; i < d; ++i)
        labels.push_back("x" + std::to_string(i));
    // One grading axis per radical generator when it fits, else the total degree.
    const bool fine = a <= static_cast<std::size_t>(grading::max_rank);
    std::vector<Degree> deg(d, 0);
    for (std::size_t i = 1; i < d; ++i)
        deg[i] = fine ? grading::unit(static_cast<int>(i - 1)) : 1;
    return FiniteLocalAlgebra<F>(field, std::move(left), std::move(labels))
        .with_grading(fine ? static_cast<int>(a) : 1, std::move(deg));
}

/// A (x)_F B with basis e_i (x) f_j at index i * dim B + j.
template <Field F>
FiniteLocalAlgebra<F> tensor_algebra(const FiniteLocalAlgebra<F>& a, const FiniteLocalAlgebra<F>& b)
{
    if (!(a.field() == b.field()))
        throw std::invalid_argument("tensor_algebra: field mismatch");
    std::vector<Matrix<F>> left;
    std::vector<std::string> labels;
    left.reserve(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j) {
            left.push_back(a.left(i).kron(b.left(j)));
            const auto& la = a.labels()[i];
            const auto& lb = b.labels()[j];
            labels.push_back(la == "1" ? lb : (lb == "1" ? la : la + "*" + lb));
        }
    FiniteLocalAlgebra<F> out(a.field(), std::move(left), std::move(labels));
    const int ra = a.grading_rank(), rb = b.grading_rank();
    if (ra + rb == 0)
        return out;
    return out.with_grading(grading::product_rank(ra, rb),
                            grading::product_degrees(a.degrees(), ra, b.degrees(), rb));
}

template <Field F>
std::size_t nilpotency_index(const FiniteLocalAlgebra<F>& a)
{
    return a.nilpotency_index();
}

template <Field F>
std::size_t type_of(const FiniteLocalAlgebra<F>& a)
{
    return a.type();
}

}  // namespace sdchain
