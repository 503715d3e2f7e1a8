#pragma once

#include "sdchain/algebra.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdchain {

template <Field F>
using AlgebraPtr = std::shared_ptr<const FiniteLocalAlgebra<F>>;

template <Field F>
AlgebraPtr<F> share(FiniteLocalAlgebra<F> a)
{
    return std::make_shared<const FiniteLocalAlgebra<F>>(std::move(a));
}

/// A finite module: a vector space with one action matrix per algebra basis element.
template <Field F>
class FiniteModule {
public:
    using Element = typename F::Element;
    using Mat = Matrix<F>;

    FiniteModule() = default;
    FiniteModule(AlgebraPtr<F> algebra, std::vector<Mat> action, std::string label = {})
        : algebra_(std::move(algebra)), action_(std::move(action)), label_(std::move(label))
    {
        if (!algebra_)
            throw std::invalid_argument("module needs an algebra");
        if (action_.size() != algebra_->dim())
            throw std::invalid_argument("need one action matrix per algebra basis element");
        dim_ = action_[0].rows();
        for (const auto& a : action_)
            if (a.rows() != dim_ || a.cols() != dim_)
                throw std::invalid_argument("action matrices must be square of the module dimension");
        hash_ = compute_hash();
    }

    const FiniteLocalAlgebra<F>& algebra() const { return *algebra_; }
    const AlgebraPtr<F>& algebra_ptr() const { return algebra_; }
    const F& field() const { return algebra_->field(); }
    std::size_t dim() const { return dim_; }
    const Mat& action(std::size_t i) const { return action_.at(i); }
    const std::vector<Mat>& actions() const { return action_; }
    const std::string& label() const { return label_; }
    std::uint64_t hash() const { return hash_; }

    FiniteModule with_label(std::string label) const
    {
        FiniteModule m(*this);
        m.label_ = std::move(label);
        return m;
    }

    /// Whether the module carries a grading compatible with the algebra's.
    bool graded() const { return graded_; }
    Degree degree(std::size_t b) const { return graded_ ? degrees_[b] : 0; }
    const std::vector<Degree>& degrees() const { return degrees_; }

    /// True when e_i maps every degree-a basis vector into degree a + deg(e_i).
    bool grading_compatible(const std::vector<Degree>& deg) const
    {
        if (deg.size() != dim_)
            return false;
        const auto& alg = *algebra_;
        for (std::size_t i = 0; i < action_.size(); ++i) {
            const Degree s = alg.degree(i);
            const auto& a = action_[i];
            for (std::size_t r = 0; r < dim_; ++r)
                for (std::size_t c = 0; c < dim_; ++c)
                    if (!field().is_zero(a(r, c)) && deg[r] != deg[c] + s)
                        return false;
        }
        return true;
    }

    FiniteModule with_grading(std::vector<Degree> deg) const
    {
        if (!grading_compatible(deg))
            throw std::invalid_argument("module grading is not compatible with the action");
        FiniteModule m(*this);
        m.degrees_ = std::move(deg);
        m.graded_ = true;
        return m;
    }

    /// Attaches the grading when it is compatible; otherwise returns the module unchanged.
    FiniteModule with_grading_if_compatible(std::vector<Degree> deg) const
    {
        if (!grading_compatible(deg))
            return *this;
        FiniteModule m(*this);
        m.degrees_ = std::move(deg);
        m.graded_ = true;
        return m;
    }

    FiniteModule without_grading() const
    {
        FiniteModule m(*this);
        m.degrees_.clear();
        m.graded_ = false;
        return m;
    }

    bool same_algebra(const FiniteModule& o) const
    {
        return algebra_ == o.algebra_ || algebra_->hash() == o.algebra_->hash();
    }

    ValidationReport validate() const
    {
        ValidationReport rep;
        const auto& alg = *algebra_;
        const std::size_t d = alg.dim();
        if (!(action_[0] == Mat::identity(field(), dim_)))
            rep.problems.push_back("identity does not act as the identity");
        for (std::size_t i = 1; i < d && rep.problems.size() < 8; ++i)
            for (std::size_t j = i; j < d; ++j) {
                const Mat ij = action_[i] * action_[j];
                if (j != i && !(ij == action_[j] * action_[i])) {
                    rep.problems.push_back("actions of e_" + std::to_string(i) + " and e_" + std::to_string(j) +
                                           " do not commute");
                    break;
                }
                Mat rhs(field(), dim_, dim_);
                for (std::size_t k = 0; k < d; ++k)
                    if (!field().is_zero(alg.c(i, j, k)))
                        rhs.add_scaled(action_[k], alg.c(i, j, k));
                if (!(ij == rhs)) {
                    rep.problems.push_back("action does not respect e_" + std::to_string(i) + " e_" +
                                           std::to_string(j));
                    break;
                }
            }
        return rep;
    }

    /// Content equality: same algebra, same matrices.  Labels are ignored.
    bool operator==(const FiniteModule& o) const
    {
        return hash_ == o.hash_ && same_algebra(o) && action_ == o.action_;
    }

private:
    std::uint64_t compute_hash() const
    {
        std::uint64_t h = detail::fnv_mix(detail::fnv_basis, algebra_->hash());
        h = detail::fnv_mix(h, dim_);
        const F& f = field();
        for (const auto& a : action_)
            for (const auto& e : a.data())
                h = detail::fnv_mix(h, f.fingerprint(e));
        return h;
    }

    AlgebraPtr<F> algebra_;
    std::vector<Mat> action_;
    std::string label_;
    std::size_t dim_ = 0;
    std::uint64_t hash_ = 0;
    std::vector<Degree> degrees_;
    bool graded_ = false;
};

template <Field F>
FiniteModule<F> regular_module(const AlgebraPtr<F>& a)
{
    return FiniteModule<F>(a, a->left_matrices(), "R").with_grading(a->degrees());
}

template <Field F>
FiniteModule<F> residue_field_module(const AlgebraPtr<F>& a)
{
    std::vector<Matrix<F>> act;
    act.push_back(Matrix<F>::identity(a->field(), 1));
    for (std::size_t i = 1; i < a->dim(); ++i)
        act.emplace_back(a->field(), 1, 1);
    return FiniteModule<F>(a, std::move(act), "k").with_grading({0});
}

/// Hom_F(M, F) with transposed actions.
template <Field F>
FiniteModule<F> matlis_dual(const FiniteModule<F>& m)
{
    std::vector<Matrix<F>> act;
    act.reserve(m.actions().size());
    for (const auto& a : m.actions())
        act.push_back(a.transpose());
    FiniteModule<F> out(m.algebra_ptr(), std::move(act), m.label().empty() ? "" : m.label() + "^v");
    if (!m.graded())
        return out;
    std::vector<Degree> deg;
    for (Degree d : m.degrees())
        deg.push_back(-d);
    return out.with_grading(std::move(deg));
}

/// Free module R^r.
template <Field F>
FiniteModule<F> free_module(const AlgebraPtr<F>& a, std::size_t r)
{
    std::vector<Matrix<F>> act;
    const auto id = Matrix<F>::identity(a->field(), r);
    for (std::size_t i = 0; i < a->dim(); ++i)
        act.push_back(id.kron(a->left(i)));
    std::vector<Degree> deg;
    for (std::size_t j = 0; j < r; ++j)
        deg.insert(deg.end(), a->degrees().begin(), a->degrees().end());
    return FiniteModule<F>(a, std::move(act), "R^" + std::to_string(r)).with_grading(std::move(deg));
}

/// Direct sum M (+) N with the basis of M first.
template <Field F>
FiniteModule<F> direct_sum(const FiniteModule<F>& m, const FiniteModule<F>& n)
{
    if (!m.same_algebra(n))
        throw std::invalid_argument("direct_sum: modules over different algebras");
    std::vector<Matrix<F>> act;
    for (std::size_t i = 0; i < m.actions().size(); ++i) {
        Matrix<F> a(m.field(), m.dim() + n.dim(), m.dim() + n.dim());
        for (std::size_t r = 0; r < m.dim(); ++r)
            for (std::size_t c = 0; c < m.dim(); ++c)
                a(r, c) = m.action(i)(r, c);
        for (std::size_t r = 0; r < n.dim(); ++r)
            for (std::size_t c = 0; c < n.dim(); ++c)
                a(m.dim() + r, m.dim() + c) = n.action(i)(r, c);
        act.push_back(std::move(a));
    }
    FiniteModule<F> out(m.algebra_ptr(), std::move(act));
    if (!m.graded() || !n.graded())
        return out;
    std::vector<Degree> deg(m.degrees());
    deg.insert(deg.end(), n.degrees().begin(), n.degrees().end());
    return out.with_grading(std::move(deg));
}

/// Hom_R(M, N) together with its basis realized as F-linear maps M -> N.
template <Field F>
struct HomModule {
    FiniteModule<F> module;
    /// maps[t] is the (dim N) x (dim M) matrix of the t-th basis element.
    std::vector<Matrix<F>> maps;
    /// Positions in the row-major flattening of a map that serve as coordinates:
    /// the coordinates of a homomorphism are its entries at these positions.
    std::vector<std::size_t> coordinate_positions;

    std::vector<typename F::Element> coordinates(const Matrix<F>& f) const
    {
        std::vector<typename F::Element> c;
        c.reserve(coordinate_positions.size());
        for (std::size_t p : coordinate_positions)
            c.push_back(f.data()[p]);
        return c;
    }

    Matrix<F> element(const std::vector<typename F::Element>& coords) const
    {
        const auto& f = module.field();
        Matrix<F> out(f, maps.empty() ? 0 : maps[0].rows(), maps.empty() ? 0 : maps[0].cols());
        for (std::size_t t = 0; t < maps.size(); ++t)
            if (!f.is_zero(coords[t]))
                out.add_scaled(maps[t], coords[t]);
        return out;
    }
};

namespace detail {

/// Rows: the linear conditions f M_g = N_g f on vec(f), for algebra generators g.
template <Field F>
Matrix<F> commutation_system(const FiniteModule<F>& m, const FiniteModule<F>& n)
{
    const F& f = m.field();
    const std::size_t dm = m.dim(), dn = n.dim();
    const auto gens = m.algebra().generator_indices();
    Matrix<F> sys(f, gens.size() * dn * dm, dn * dm);
    std::size_t row = 0;
    for (std::size_t g : gens) {
        const auto& mg = m.action(g);
        const auto& ng = n.action(g);
        for (std::size_t a = 0; a < dn; ++a)
            for (std::size_t b = 0; b < dm; ++b, ++row) {
                // (f M_g)[a][b] = sum_c f[a][c] M_g[c][b]
                for (std::size_t c = 0; c < dm; ++c)
                    if (!f.is_zero(mg(c, b)))
                        sys(row, a * dm + c) = f.add(sys(row, a * dm + c), mg(c, b));
                // -(N_g f)[a][b] = -sum_c N_g[a][c] f[c][b]
                for (std::size_t c = 0; c < dn; ++c)
                    if (!f.is_zero(ng(a, c)))
                        sys(row, c * dm + b) = f.sub(sys(row, c * dm + b), ng(a, c));
            }
    }
    return sys;
}

}  // namespace detail

template <Field F>
HomModule<F> hom_module(const FiniteModule<F>& m, const FiniteModule<F>& n)
{
    if (!m.same_algebra(n))
        throw std::invalid_argument("hom_module: modules over different algebras");
    const F& f = m.field();
    const std::size_t dm = m.dim(), dn = n.dim();
    Matrix<F> sys = detail::commutation_system(m, n);
    const auto pivots = rref_inplace(sys);
    const auto frees = free_columns(pivots, dm * dn);
    const Matrix<F> ker = kernel_rows_from_rref(sys, pivots);
    sys = Matrix<F>();

    HomModule<F> h;
    h.coordinate_positions = frees;
    h.maps.reserve(ker.rows());
    for (std::size_t t = 0; t < ker.rows(); ++t)
        h.maps.emplace_back(f, dn, dm, std::vector<typename F::Element>(ker.row_ptr(t), ker.row_ptr(t) + dm * dn));

    // r . phi = N_r phi; read coordinates off the free positions.
    const std::size_t hd = h.maps.size();
    std::vector<Matrix<F>> act;
    act.reserve(m.algebra().dim());
    for (std::size_t r = 0; r < m.algebra().dim(); ++r) {
        Matrix<F> a(f, hd, hd);
        if (r == 0) {
            a = Matrix<F>::identity(f, hd);
        } else if (hd > 0) {
            // Stack all basis maps side by side so that one product handles them all.
            Matrix<F> wide(f, dn, dm * hd);
            for (std::size_t t = 0; t < hd; ++t)
                for (std::size_t i = 0; i < dn; ++i)
                    std::copy(h.maps[t].row_ptr(i), h.maps[t].row_ptr(i) + dm, wide.row_ptr(i) + t * dm);
            const Matrix<F> img = n.action(r) * wide;
            for (std::size_t t = 0; t < hd; ++t)
                for (std::size_t s = 0; s < hd; ++s) {
                    const std::size_t pos = frees[s];
                    a(s, t) = img(pos / dm, t * dm + pos % dm);
                }
        }
        act.push_back(std::move(a));
    }
    std::string label;
    if (!m.label().empty() && !n.label().empty())
        label = "Hom(" + m.label() + "," + n.label() + ")";
    h.module = FiniteModule<F>(m.algebra_ptr(), std::move(act), std::move(label));
    if (m.graded() && n.graded()) {
        // Kernel vectors of a homogeneous system are homogeneous; each has the
        // degree of its coordinate position.
        std::vector<Degree> deg;
        for (std::size_t pos : frees)
            deg.push_back(n.degree(pos / dm) - m.degree(pos % dm));
        h.module = h.module.with_grading_if_compatible(std::move(deg));
    }
    return h;
}

/// M (x)_R N as a quotient of M (x)_F N, with basis the non-pivot coordinates
/// of the reduced relation space.  Coordinate (x, y) of M (x)_F N is x * dim N + y.
template <Field F>
FiniteModule<F> tensor_module(const FiniteModule<F>& m, const FiniteModule<F>& n)
{
    if (!m.same_algebra(n))
        throw std::invalid_argument("tensor_module: modules over different algebras");
    const F& f = m.field();
    const std::size_t dm = m.dim(), dn = n.dim(), amb = dm * dn;
    const auto& alg = m.algebra();
    const auto gens = alg.generator_indices();
    const auto idm = Matrix<F>::identity(f, dm);
    const auto idn = Matrix<F>::identity(f, dn);

    // Relations (g x) (x) y - x (x) (g y), one per row.
    Matrix<F> rel(f, 0, amb);
    for (std::size_t g : gens)
        rel.append_rows((m.action(g).kron(idn) - idm.kron(n.action(g))).transpose());
    const auto pivots = rref_inplace(rel);
    const auto basis = free_columns(pivots, amb);
    rel.resize_rows(pivots.size());
    const std::size_t q = basis.size();

    // Projection of a vector v onto quotient coordinates: v_Q - v_P * rel_Q.
    const Matrix<F> rel_q = rel.select([&] {
        std::vector<std::size_t> r(pivots.size());
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] = i;
        return r;
    }(), basis);

    std::vector<Matrix<F>> act;
    act.reserve(alg.dim());
    for (std::size_t r = 0; r < alg.dim(); ++r) {
        if (r == 0) {
            act.push_back(Matrix<F>::identity(f, q));
            continue;
        }
        const Matrix<F> big = m.action(r).kron(idn);  // amb x amb
        const Matrix<F> cols = big.select(basis, basis);
        const Matrix<F> cols_p = big.select(pivots, basis);
        act.push_back(cols - rel_q.transpose() * cols_p);
    }
    std::string label;
    if (!m.label().empty() && !n.label().empty())
        label = "(" + m.label() + "(x)" + n.label() + ")";
    FiniteModule<F> out(m.algebra_ptr(), std::move(act), std::move(label));
    if (!m.graded() || !n.graded())
        return out;
    std::vector<Degree> deg;
    for (std::size_t c : basis)
        deg.push_back(m.degree(c / dn) + n.degree(c % dn));
    return out.with_grading_if_compatible(std::move(deg));
}

}  // namespace sdchain
