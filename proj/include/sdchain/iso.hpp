#pragma once

#include "sdchain/homology.hpp"
#include "sdchain/verdict.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>

namespace sdchain {

struct IsoOptions {
    std::uint64_t seed = 20240917;
    std::size_t attempts = 64;
    /// Exhaustive search is used when dim Hom and the characteristic are at most these.
    std::size_t exhaustive_max_dim = 4;
    std::uint32_t exhaustive_max_prime = 5;
};

template <Field F>
struct IsoResult {
    Status status = Status::fail;
    /// An invertible R-linear map M -> N when status is pass.
    std::optional<Matrix<F>> certificate;
    std::string reason;

    bool isomorphic() const { return status == Status::pass; }
};

namespace detail {

template <Field F>
bool is_invertible(const Matrix<F>& m)
{
    return m.rows() == m.cols() && rank(m) == m.rows();
}

/// Seed depending only on the options and the two modules, so results do not
/// depend on the order in which tests are run.
template <Field F>
std::uint64_t iso_seed(const IsoOptions& o, const FiniteModule<F>& m, const FiniteModule<F>& n)
{
    std::uint64_t h = fnv_mix(fnv_basis, o.seed);
    h = fnv_mix(h, m.hash());
    return fnv_mix(h, n.hash());
}

}  // namespace detail

/// Decides whether M and N are isomorphic R-modules.
///
/// Cheap invariants are compared first.  Then random elements of Hom_R(M, N)
/// are tried; over a small prime field with a small Hom space every element is
/// tried instead.  Over the rationals a failed random search is reported as
/// inconclusive.
template <Field F>
IsoResult<F> is_isomorphic(const FiniteModule<F>& m, const FiniteModule<F>& n, Session<F>& session,
                           const IsoOptions& opt = {})
{
    if (!m.same_algebra(n))
        throw std::invalid_argument("is_isomorphic: modules over different algebras");
    const F& f = m.field();
    IsoResult<F> res;
    if (m.dim() != n.dim()) {
        res.reason = "dimensions differ";
        return res;
    }
    if (m == n) {
        res.status = Status::pass;
        res.certificate = Matrix<F>::identity(f, m.dim());
        res.reason = "identical presentations";
        return res;
    }
    if (session.resolution(m).betti(0) != session.resolution(n).betti(0)) {
        res.reason = "minimal numbers of generators differ";
        return res;
    }
    const HomModule<F> h = hom_module(m, n);
    const std::size_t hd = h.maps.size();
    if (hd != hom_module(n, m).maps.size()) {
        res.reason = "dim Hom(M,N) differs from dim Hom(N,M)";
        return res;
    }
    if (m.dim() == 0) {
        res.status = Status::pass;
        res.certificate = Matrix<F>(f, 0, 0);
        return res;
    }
    if (hd == 0) {
        res.reason = "no nonzero homomorphisms";
        return res;
    }

    auto accept = [&](Matrix<F> map) {
        if (!detail::is_invertible(map))
            return false;
        res.status = Status::pass;
        res.certificate = std::move(map);
        return true;
    };

    std::mt19937_64 rng(detail::iso_seed(opt, m, n));
    std::vector<typename F::Element> coords(hd);
    for (std::size_t a = 0; a < opt.attempts; ++a) {
        for (auto& c : coords)
            c = f.random(rng);
        if (accept(h.element(coords))) {
            res.reason = "random element of Hom is invertible";
            return res;
        }
    }

    if constexpr (is_prime_field_v<F>) {
        const std::uint32_t p = f.characteristic();
        if (hd <= opt.exhaustive_max_dim && p <= opt.exhaustive_max_prime) {
            std::vector<std::uint32_t> digits(hd, 0);
            for (;;) {
                for (std::size_t t = 0; t < hd; ++t)
                    coords[t] = f.from_int(digits[t]);
                if (accept(h.element(coords))) {
                    res.reason = "exhaustive search found an invertible element";
                    return res;
                }
                std::size_t t = 0;
                while (t < hd && ++digits[t] == p)
                    digits[t++] = 0;
                if (t == hd)
                    break;
            }
            res.reason = "no element of Hom is invertible (exhaustive)";
            return res;
        }
        res.reason = "no invertible element among " + std::to_string(opt.attempts) + " random elements of Hom";
        return res;
    } else {
        res.status = Status::inconclusive;
        res.reason = "invariants agree but random search over Q found no invertible element";
        return res;
    }
}

template <Field F>
IsoResult<F> is_isomorphic(const FiniteModule<F>& m, const FiniteModule<F>& n, const IsoOptions& opt = {})
{
    Session<F> s;
    return is_isomorphic(m, n, s, opt);
}

}  // namespace sdchain
