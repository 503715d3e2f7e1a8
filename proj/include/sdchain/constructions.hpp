#pragma once

#include "sdchain/module.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace sdchain {

/// Hom_F(R, F), the dualizing module of an Artinian local F-algebra with residue field F.
template <Field F>
FiniteModule<F> dualizing_module(const AlgebraPtr<F>& a)
{
    return matlis_dual(regular_module(a)).with_label("D");
}

/// M (x)_F N over A (x)_F B, where `product` is tensor_algebra(A, B).
/// Basis x (x) y has index x * dim N + y; e_i (x) f_j acts by the Kronecker product.
template <Field F>
FiniteModule<F> external_tensor(const FiniteModule<F>& m, const FiniteModule<F>& n, const AlgebraPtr<F>& product)
{
    const auto& a = m.algebra();
    const auto& b = n.algebra();
    if (!(a.field() == b.field()))
        throw std::invalid_argument("external_tensor: field mismatch");
    if (product->dim() != a.dim() * b.dim())
        throw std::invalid_argument("external_tensor: product algebra has the wrong dimension");
    std::vector<Matrix<F>> act;
    act.reserve(product->dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j)
            act.push_back(m.action(i).kron(n.action(j)));
    std::string label;
    if (!m.label().empty() && !n.label().empty())
        label = m.label() + "*" + n.label();
    FiniteModule<F> out(product, std::move(act), std::move(label));
    if (!m.graded() || !n.graded() || product->grading_rank() == 0)
        return out;
    return out.with_grading_if_compatible(
        grading::product_degrees(m.degrees(), a.grading_rank(), n.degrees(), b.grading_rank()));
}

template <Field F>
FiniteModule<F> external_tensor(const FiniteModule<F>& m, const FiniteModule<F>& n)
{
    return external_tensor(m, n, share(tensor_algebra(m.algebra(), n.algebra())));
}

/// Exponents a_1..a_n of the ring S = (F x F^{a_1}) (x) ... (x) (F x F^{a_n}) and run parameters.
struct ExampleSpec {
    std::vector<std::size_t> exponents;
    FieldSpec field;
    std::size_t bound = 8;
    std::size_t order = 8;
};

/// Throws std::invalid_argument unless `spec` describes a valid instance.
inline void validate_example_spec(const ExampleSpec& spec)
{
    if (spec.exponents.empty())
        throw std::invalid_argument("at least one exponent is required");
    for (std::size_t a : spec.exponents) {
        if (a == 0)
            throw std::invalid_argument("exponent 0 does not define a trivial extension");
        if (a == 1)
            throw std::invalid_argument("exponent 1 yields Gorenstein factor");
    }
    if (spec.bound < 1)
        throw std::invalid_argument("bound must be at least 1");
    if (spec.order < 1)
        throw std::invalid_argument("order must be at least 1");
}

/// The factors S_i, the left-associated products S_1 (x) ... (x) S_k, and
/// modules of the form K_1 (x) ... (x) K_n with each K_i in {S_i, D_i}.
template <Field F>
class ExampleRing {
public:
    ExampleRing(const std::vector<std::size_t>& exponents, const F& field)
    {
        if (exponents.empty())
            throw std::invalid_argument("ExampleRing needs at least one factor");
        for (std::size_t a : exponents)
            factors_.push_back(share(trivial_extension(a, field)));
        partial_.push_back(factors_[0]);
        for (std::size_t i = 1; i < factors_.size(); ++i)
            partial_.push_back(share(tensor_algebra(*partial_.back(), *factors_[i])));
    }

    std::size_t n() const { return factors_.size(); }
    const AlgebraPtr<F>& algebra() const { return partial_.back(); }
    const AlgebraPtr<F>& factor(std::size_t i) const { return factors_.at(i); }

    /// K_1 (x) ... (x) K_n with K_i = D_i when dual[i] is set, else S_i.
    FiniteModule<F> product_module(const std::vector<bool>& dual) const
    {
        if (dual.size() != n())
            throw std::invalid_argument("product_module: one flag per factor is required");
        auto piece = [&](std::size_t i) {
            return dual[i] ? dualizing_module(factors_[i]).with_label("D" + std::to_string(i + 1))
                           : regular_module(factors_[i]).with_label("S" + std::to_string(i + 1));
        };
        FiniteModule<F> m = piece(0);
        for (std::size_t i = 1; i < n(); ++i)
            m = external_tensor(m, piece(i), partial_[i]);
        return m;
    }

    /// C_j = D_1 (x) ... (x) D_j (x) S_{j+1} (x) ... (x) S_n.
    FiniteModule<F> chain_module(std::size_t j) const
    {
        std::vector<bool> dual(n(), false);
        for (std::size_t i = 0; i < j; ++i)
            dual[i] = true;
        return product_module(dual).with_label("C" + std::to_string(j));
    }

    /// B_j = S_1 (x) ... (x) D_j (x) ... (x) S_n, for 1 <= j <= n.
    FiniteModule<F> b_module(std::size_t j) const
    {
        std::vector<bool> dual(n(), false);
        dual.at(j - 1) = true;
        return product_module(dual).with_label("B" + std::to_string(j));
    }

private:
    std::vector<AlgebraPtr<F>> factors_;
    std::vector<AlgebraPtr<F>> partial_;
};

/// Which factors are dualizing modules in the predicted C_u for u_1 < ... < u_j:
/// the blocks (u_{k-1}, u_k] alternate, the last one (u_{j-1}, u_j] is dual,
/// and everything after u_j is the ring itself.
inline std::vector<bool> parity_pattern(const std::vector<std::size_t>& word, std::size_t n)
{
    std::vector<bool> dual(n, false);
    const std::size_t j = word.size();
    std::size_t start = 0;
    for (std::size_t k = 0; k < j; ++k) {
        const bool is_dual = (j - 1 - k) % 2 == 0;
        for (std::size_t i = start; i < word[k]; ++i)
            dual.at(i) = is_dual;
        start = word[k];
    }
    return dual;
}

}  // namespace sdchain
