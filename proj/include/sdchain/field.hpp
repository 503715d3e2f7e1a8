#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace sdchain {

/// The prime field GF(p).
///
/// Elements are stored as doubles holding the canonical representative in
/// [0, p).  Every product of two elements is an integer below 2^52, so it is
/// represented exactly, and dense kernels can hand whole blocks to BLAS and
/// reduce afterwards.
class PrimeField {
public:
    using Element = double;

    static constexpr std::uint32_t default_characteristic = 32003;
    static constexpr std::uint32_t max_characteristic = (1u << 26) - 1;

    explicit PrimeField(std::uint32_t p = default_characteristic) : p_(p), pd_(p), inv_p_(1.0 / p)
    {
        if (p < 2 || p > max_characteristic || !is_prime(p))
            throw std::invalid_argument("characteristic must be a prime below 2^26, got " + std::to_string(p));
    }

    std::uint32_t characteristic() const { return p_; }

    Element zero() const { return 0.0; }
    Element one() const { return 1.0; }
    bool is_zero(Element a) const { return a == 0.0; }

    Element add(Element a, Element b) const
    {
        const double s = a + b;
        return s >= pd_ ? s - pd_ : s;
    }
    Element sub(Element a, Element b) const
    {
        const double s = a - b;
        return s < 0.0 ? s + pd_ : s;
    }
    Element neg(Element a) const { return a == 0.0 ? 0.0 : pd_ - a; }
    Element mul(Element a, Element b) const { return reduce(a * b); }

    /// Canonical representative of an integer-valued double with |x| < 2^53.
    Element reduce(double x) const
    {
        double r = x - std::floor(x * inv_p_) * pd_;
        if (r < 0.0)
            r += pd_;
        else if (r >= pd_)
            r -= pd_;
        return r;
    }

    Element inv(Element a) const
    {
        if (a == 0.0)
            throw std::domain_error("inverse of zero in GF(p)");
        std::int64_t t = 0, new_t = 1;
        std::int64_t r = p_, new_r = static_cast<std::int64_t>(a);
        while (new_r != 0) {
            const std::int64_t q = r / new_r;
            t = std::exchange(new_t, t - q * new_t);
            r = std::exchange(new_r, r - q * new_r);
        }
        if (t < 0)
            t += p_;
        return static_cast<double>(t);
    }

    Element from_int(std::int64_t v) const
    {
        std::int64_t r = v % static_cast<std::int64_t>(p_);
        if (r < 0)
            r += p_;
        return static_cast<double>(r);
    }

    std::string to_string(Element a) const { return std::to_string(static_cast<std::int64_t>(a)); }

    Element parse(std::string_view s) const
    {
        const auto slash = s.find('/');
        if (slash != std::string_view::npos)
            return mul(parse(s.substr(0, slash)), inv(parse(s.substr(slash + 1))));
        std::size_t used = 0;
        const std::string text(s);
        long long v = 0;
        try {
            v = std::stoll(text, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("not an integer: '" + text + "'");
        }
        if (used != text.size())
            throw std::invalid_argument("not an integer: '" + text + "'");
        return from_int(v);
    }

    template <class Rng>
    Element random(Rng& rng) const
    {
        std::uniform_int_distribution<std::uint32_t> dist(0, p_ - 1);
        return static_cast<double>(dist(rng));
    }

    /// Stable integer image of an element, for hashing.
    std::uint64_t fingerprint(Element a) const { return static_cast<std::uint64_t>(a); }

    bool operator==(const PrimeField& o) const { return p_ == o.p_; }

    static bool is_prime(std::uint32_t n)
    {
        if (n < 2)
            return false;
        for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= n; ++d)
            if (n % d == 0)
                return false;
        return true;
    }

private:
    std::uint32_t p_;
    double pd_;
    double inv_p_;
};

/// The rational numbers, exact and normalized.
class RationalField {
public:
    using Element = boost::multiprecision::cpp_rational;

    Element zero() const { return Element(0); }
    Element one() const { return Element(1); }
    bool is_zero(const Element& a) const { return a == 0; }

    Element add(const Element& a, const Element& b) const { return a + b; }
    Element sub(const Element& a, const Element& b) const { return a - b; }
    Element neg(const Element& a) const { return -a; }
    Element mul(const Element& a, const Element& b) const { return a * b; }
    Element inv(const Element& a) const
    {
        if (a == 0)
            throw std::domain_error("inverse of zero in Q");
        return Element(1) / a;
    }
    Element from_int(std::int64_t v) const { return Element(v); }

    std::string to_string(const Element& a) const { return a.str(); }

    Element parse(std::string_view s) const
    {
        const std::string text(s);
        try {
            const auto slash = text.find('/');
            if (slash == std::string::npos)
                return Element(boost::multiprecision::cpp_int(text));
            boost::multiprecision::cpp_int num(text.substr(0, slash));
            boost::multiprecision::cpp_int den(text.substr(slash + 1));
            if (den == 0)
                throw std::invalid_argument("zero denominator");
            return Element(num, den);
        } catch (const std::runtime_error&) {
            throw std::invalid_argument("not a rational number: '" + text + "'");
        }
    }

    /// Small integers keep random combinations cheap in exact arithmetic.
    template <class Rng>
    Element random(Rng& rng) const
    {
        std::uniform_int_distribution<int> dist(-8, 8);
        return Element(dist(rng));
    }

    std::uint64_t fingerprint(const Element& a) const
    {
        return std::hash<std::string>{}(a.str());
    }

    bool operator==(const RationalField&) const { return true; }
};

template <class F>
concept Field = std::copy_constructible<F> && requires(const F& f, const typename F::Element& a, std::mt19937_64& rng) {
    { f.zero() } -> std::convertible_to<typename F::Element>;
    { f.one() } -> std::convertible_to<typename F::Element>;
    { f.is_zero(a) } -> std::convertible_to<bool>;
    { f.add(a, a) } -> std::convertible_to<typename F::Element>;
    { f.sub(a, a) } -> std::convertible_to<typename F::Element>;
    { f.mul(a, a) } -> std::convertible_to<typename F::Element>;
    { f.neg(a) } -> std::convertible_to<typename F::Element>;
    { f.inv(a) } -> std::convertible_to<typename F::Element>;
    { f.from_int(std::int64_t{}) } -> std::convertible_to<typename F::Element>;
    { f.to_string(a) } -> std::convertible_to<std::string>;
    { f.random(rng) } -> std::convertible_to<typename F::Element>;
    { f.fingerprint(a) } -> std::convertible_to<std::uint64_t>;
};

template <class F>
inline constexpr bool is_prime_field_v = std::is_same_v<F, PrimeField>;

/// Runtime description of the coefficient field, as it appears in files and on the command line.
struct FieldSpec {
    enum class Kind { prime, rationals };

    Kind kind = Kind::prime;
    std::uint32_t p = PrimeField::default_characteristic;

    static FieldSpec prime(std::uint32_t p)
    {
        PrimeField check(p);
        (void)check;
        return {Kind::prime, p};
    }
    static FieldSpec rationals() { return {Kind::rationals, 0}; }

    /// Accepts "Q" / "rationals" or a decimal prime.
    static FieldSpec parse(std::string_view text)
    {
        if (text == "Q" || text == "q" || text == "rationals")
            return rationals();
        std::size_t used = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(std::string(text), &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("field must be a prime or Q, got '" + std::string(text) + "'");
        }
        if (used != text.size() || v > PrimeField::max_characteristic)
            throw std::invalid_argument("field must be a prime or Q, got '" + std::string(text) + "'");
        return prime(static_cast<std::uint32_t>(v));
    }

    std::string to_string() const { return kind == Kind::rationals ? "Q" : std::to_string(p); }

    bool operator==(const FieldSpec&) const = default;
};

inline FieldSpec spec_of(const PrimeField& f) { return FieldSpec::prime(f.characteristic()); }
inline FieldSpec spec_of(const RationalField&) { return FieldSpec::rationals(); }

/// Calls `fn` with a concrete field object matching `spec`.
template <class Fn>
decltype(auto) with_field(const FieldSpec& spec, Fn&& fn)
{
    if (spec.kind == FieldSpec::Kind::rationals)
        return fn(RationalField{});
    return fn(PrimeField{spec.p});
}

}  // namespace sdchain
