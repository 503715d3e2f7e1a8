#pragma once

#include "sdchain/chains.hpp"

#include <boost/rational.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdchain {

/// Integer polynomial, lowest degree first.
using Polynomial = std::vector<std::int64_t>;

namespace detail {

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("series coefficient overflow");
    return r;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("series coefficient overflow");
    return r;
}

/// Product of two coefficient lists, truncated after degree `order`.
inline Polynomial mul_truncated(const Polynomial& a, const Polynomial& b, std::size_t order)
{
    Polynomial out(order + 1, 0);
    for (std::size_t i = 0; i < a.size() && i <= order; ++i)
        for (std::size_t j = 0; j < b.size() && i + j <= order; ++j)
            out[i + j] = checked_add(out[i + j], checked_mul(a[i], b[j]));
    return out;
}

}  // namespace detail

/// c_0 + c_1 t + ... + c_N t^N, known through degree N.
class TruncatedSeries {
public:
    TruncatedSeries() : coeffs_{0} {}
    explicit TruncatedSeries(std::vector<std::int64_t> coeffs) : coeffs_(std::move(coeffs))
    {
        if (coeffs_.empty())
            throw std::invalid_argument("TruncatedSeries needs at least one coefficient");
    }

    static TruncatedSeries from_counts(const std::vector<std::size_t>& counts)
    {
        std::vector<std::int64_t> c;
        for (std::size_t x : counts)
            c.push_back(static_cast<std::int64_t>(x));
        return TruncatedSeries(std::move(c));
    }

    /// Expansion of num/den through degree `order`; den must have constant term 1.
    static TruncatedSeries expand(const Polynomial& num, const Polynomial& den, std::size_t order)
    {
        if (den.empty() || den[0] != 1)
            throw std::invalid_argument("denominator must have constant term 1");
        std::vector<std::int64_t> c(order + 1, 0);
        for (std::size_t m = 0; m <= order; ++m) {
            std::int64_t v = m < num.size() ? num[m] : 0;
            for (std::size_t j = 1; j < den.size() && j <= m; ++j)
                v = detail::checked_add(v, -detail::checked_mul(den[j], c[m - j]));
            c[m] = v;
        }
        return TruncatedSeries(std::move(c));
    }

    std::size_t order() const { return coeffs_.size() - 1; }
    const std::vector<std::int64_t>& coeffs() const { return coeffs_; }
    std::int64_t operator[](std::size_t i) const { return coeffs_.at(i); }

    TruncatedSeries truncate(std::size_t order) const
    {
        if (order > this->order())
            throw std::invalid_argument("cannot truncate beyond the known order");
        return TruncatedSeries({coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(order + 1)});
    }

    /// Coefficientwise product, known through the smaller order.
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b)
    {
        return TruncatedSeries(detail::mul_truncated(a.coeffs_, b.coeffs_, std::min(a.order(), b.order())));
    }

    bool nonnegative() const
    {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](std::int64_t c) { return c >= 0; });
    }

    friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

    std::string to_string() const
    {
        std::string s;
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            s += (i ? " " : "") + std::to_string(coeffs_[i]);
        return s;
    }

private:
    std::vector<std::int64_t> coeffs_;
};

/// prod (a - t) / prod (1 - d t).
struct RationalFormSpec {
    std::vector<std::int64_t> numerator_factors;
    std::vector<std::int64_t> denominator_factors;

    RationalFormSpec() = default;
    RationalFormSpec(std::vector<std::int64_t> num, std::vector<std::int64_t> den)
        : numerator_factors(std::move(num)), denominator_factors(std::move(den))
    {
        for (std::int64_t x : numerator_factors)
            if (x < 1)
                throw std::invalid_argument("numerator factors need a >= 1");
        for (std::int64_t x : denominator_factors)
            if (x < 1)
                throw std::invalid_argument("denominator factors need d >= 1");
        std::sort(numerator_factors.begin(), numerator_factors.end());
        std::sort(denominator_factors.begin(), denominator_factors.end());
    }

    /// (a_1 - t)...(a_k - t) / ((1 - d_1 t)...(1 - d_k t)) for the same list.
    static RationalFormSpec mobius(const std::vector<std::int64_t>& a) { return {a, a}; }
    static RationalFormSpec inverse_of(const std::vector<std::int64_t>& d) { return {{}, d}; }

    Polynomial numerator() const
    {
        Polynomial p{1};
        for (std::int64_t a : numerator_factors)
            p = detail::mul_truncated(p, {a, -1}, p.size());
        return p;
    }

    Polynomial denominator() const
    {
        Polynomial p{1};
        for (std::int64_t d : denominator_factors)
            p = detail::mul_truncated(p, {1, -d}, p.size());
        return p;
    }

    TruncatedSeries expand(std::size_t order) const { return TruncatedSeries::expand(numerator(), denominator(), order); }

    std::string to_string() const
    {
        auto side = [](const std::vector<std::int64_t>& v, bool num) {
            if (v.empty())
                return std::string("1");
            std::string s;
            for (std::int64_t x : v)
                s += num ? "(" + std::to_string(x) + "-t)" : "(1-" + std::to_string(x) + "t)";
            return s;
        };
        return side(numerator_factors, true) + "/" + side(denominator_factors, false);
    }
};

/// Multiplies s by the denominator and compares with the numerator through degree N.
inline bool matches_rational_form(const TruncatedSeries& s, const RationalFormSpec& spec)
{
    const std::size_t n = s.order();
    const auto lhs = detail::mul_truncated(s.coeffs(), spec.denominator(), n);
    auto rhs = spec.numerator();
    rhs.resize(n + 1, 0);
    return std::equal(lhs.begin(), lhs.end(), rhs.begin());
}

struct NoRecurrence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Minimal recurrence c_m = a_1 c_{m-1} + ... + a_d c_{m-d}, required for all
/// m >= max(d, 1) + excess up to the order, with d <= max_degree.  Returns 1 - a_1 t - ... - a_d t^d.
/// With excess e the numerator of the rational function may have degree up to d + e - 1.
inline Polynomial infer_denominator(const TruncatedSeries& s, std::size_t max_degree, std::size_t excess = 0)
{
    using Q = boost::rational<std::int64_t>;
    const std::size_t n = s.order();
    if (max_degree < 1)
        throw std::invalid_argument("infer_denominator: max_degree must be positive");
    if (n < 2 * max_degree + excess)
        throw std::invalid_argument("infer_denominator: order must be at least 2 * max_degree");
    const auto& c = s.coeffs();
    for (std::size_t d = 0; d <= max_degree; ++d) {
        const std::size_t first = std::max<std::size_t>(d, 1) + excess;
        // Rows m = first..n of [c_{m-1} ... c_{m-d} | c_m].
        std::vector<std::vector<Q>> rows;
        for (std::size_t m = first; m <= n; ++m) {
            std::vector<Q> r;
            for (std::size_t j = 1; j <= d; ++j)
                r.emplace_back(c[m - j]);
            r.emplace_back(c[m]);
            rows.push_back(std::move(r));
        }
        std::size_t rank = 0;
        std::vector<std::size_t> pivots;
        for (std::size_t col = 0; col <= d && rank < rows.size(); ++col) {
            std::size_t p = rank;
            while (p < rows.size() && rows[p][col].numerator() == 0)
                ++p;
            if (p == rows.size())
                continue;
            std::swap(rows[p], rows[rank]);
            const Q inv = Q(1) / rows[rank][col];
            for (auto& x : rows[rank])
                x *= inv;
            for (std::size_t r = 0; r < rows.size(); ++r)
                if (r != rank && rows[r][col].numerator() != 0) {
                    const Q f = rows[r][col];
                    for (std::size_t k = col; k <= d; ++k)
                        rows[r][k] -= f * rows[rank][k];
                }
            pivots.push_back(col);
            ++rank;
        }
        // Inconsistent if the right-hand column is a pivot; ambiguous if some unknown is free.
        if (!pivots.empty() && pivots.back() == d)
            continue;
        if (pivots.size() != d)
            continue;
        Polynomial den{1};
        bool integral = true;
        for (std::size_t j = 0; j < d; ++j) {
            const Q a = rows[j][d];
            if (a.denominator() != 1)
                integral = false;
            den.push_back(-a.numerator());
        }
        if (integral)
            return den;
    }
    throw NoRecurrence("no linear recurrence of degree <= " + std::to_string(max_degree) + " fits the series");
}

/// Positive integers d_i with prod (1 - d_i t) equal to `den`, if they exist.
/// Candidate roots are the divisors of the leading coefficient.
inline std::optional<std::vector<std::int64_t>> factor_denominator(Polynomial den)
{
    while (den.size() > 1 && den.back() == 0)
        den.pop_back();
    if (den.empty() || den[0] != 1)
        return std::nullopt;
    std::vector<std::int64_t> roots;
    while (den.size() > 1) {
        const std::int64_t lead = den.back() < 0 ? -den.back() : den.back();
        bool found = false;
        for (std::int64_t d = 1; d <= lead && !found; ++d) {
            if (lead % d != 0)
                continue;
            // 1 - d t divides den iff den(1/d) = 0, i.e. sum c_j d^{k-j} = 0.
            const std::size_t k = den.size() - 1;
            std::int64_t v = 0;
            for (std::size_t j = 0; j <= k; ++j)
                v = detail::checked_add(detail::checked_mul(v, d), den[j]);
            if (v != 0)
                continue;
            // Synthetic division by (1 - d t): q_j = c_j + d q_{j-1}.
            Polynomial q(k, 0);
            std::int64_t carry = 0;
            for (std::size_t j = 0; j < k; ++j) {
                q[j] = detail::checked_add(den[j], detail::checked_mul(d, carry));
                carry = q[j];
            }
            den = std::move(q);
            roots.push_back(d);
            found = true;
        }
        if (!found)
            return std::nullopt;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

/// Positive integers a_i with prod (a_i - t) equal to `num`, if they exist.
inline std::optional<std::vector<std::int64_t>> factor_numerator(Polynomial num)
{
    while (num.size() > 1 && num.back() == 0)
        num.pop_back();
    if (num.empty() || num[0] <= 0)
        return std::nullopt;
    std::vector<std::int64_t> roots;
    while (num.size() > 1) {
        const std::int64_t c0 = num[0];
        bool found = false;
        for (std::int64_t a = 1; a <= c0 && !found; ++a) {
            if (c0 % a != 0)
                continue;
            std::int64_t v = 0;
            for (std::size_t j = num.size(); j-- > 0;)
                v = detail::checked_add(detail::checked_mul(v, a), num[j]);
            if (v != 0)
                continue;
            // num = (a - t) q: q_0 = num_0 / a and q_j = (num_j + q_{j-1}) / a.
            Polynomial q(num.size() - 1, 0);
            std::int64_t prev = 0;
            bool exact = true;
            for (std::size_t j = 0; j < q.size(); ++j) {
                const std::int64_t t = detail::checked_add(num[j], prev);
                if (t % a != 0)
                    exact = false;
                q[j] = t / a;
                prev = q[j];
            }
            if (!exact)
                continue;
            num = std::move(q);
            roots.push_back(a);
            found = true;
        }
        if (!found)
            return std::nullopt;
    }
    if (num[0] != 1)
        return std::nullopt;
    std::sort(roots.begin(), roots.end());
    return roots;
}

/// N(t)/D(t) recovered from a truncated series.
struct InferredForm {
    Polynomial numerator;
    Polynomial denominator;

    std::string to_string() const
    {
        auto poly = [](const Polynomial& p) {
            std::string s;
            for (std::size_t i = 0; i < p.size(); ++i) {
                if (p[i] == 0 && p.size() > 1)
                    continue;
                std::string c = std::to_string(p[i] < 0 ? -p[i] : p[i]);
                if (i > 0 && (p[i] == 1 || p[i] == -1))
                    c.clear();
                const std::string sign = p[i] < 0 ? "-" : (s.empty() ? "" : "+");
                s += sign + c + (i == 0 ? "" : (i == 1 ? "t" : "t^" + std::to_string(i)));
            }
            return s.empty() ? std::string("0") : s;
        };
        std::string num, den;
        const auto nr = factor_numerator(numerator);
        if (nr && !nr->empty()) {
            for (auto a : *nr)
                num += "(" + std::to_string(a) + "-t)";
        } else {
            num = nr ? "1" : poly(numerator);
        }
        const auto dr = factor_denominator(denominator);
        if (dr && dr->empty())
            return num;
        if (dr) {
            for (auto d : *dr)
                den += "(1-" + std::to_string(d) + "t)";
            if (dr->size() > 1)
                den = "(" + den + ")";
        } else {
            den = "(" + poly(denominator) + ")";
        }
        return num + "/" + den;
    }
};

/// Tries a strictly proper numerator first, then one of degree up to the denominator degree.
inline std::optional<InferredForm> infer_rational_form(const TruncatedSeries& s, std::size_t max_degree)
{
    for (std::size_t excess = 0; excess <= 1; ++excess) {
        if (s.order() < 2 * max_degree + excess)
            break;
        try {
            InferredForm f;
            f.denominator = infer_denominator(s, max_degree, excess);
            const std::size_t d = f.denominator.size() - 1;
            const std::size_t first = std::max<std::size_t>(d, 1) + excess;
            f.numerator = detail::mul_truncated(s.coeffs(), f.denominator, first - 1);
            while (f.numerator.size() > 1 && f.numerator.back() == 0)
                f.numerator.pop_back();
            return f;
        } catch (const NoRecurrence&) {
        }
    }
    return std::nullopt;
}

template <Field F>
TruncatedSeries poincare_series(const FiniteModule<F>& m, std::size_t order, Session<F>& session)
{
    return TruncatedSeries::from_counts(session.betti_numbers(m, order));
}

template <Field F>
TruncatedSeries poincare_series(const FiniteModule<F>& m, std::size_t order)
{
    Session<F> s;
    return poincare_series(m, order, s);
}

struct MethodMismatch : std::logic_error {
    using std::logic_error::logic_error;
};

/// Largest degree at which Bass numbers are recomputed through Hom(F, M).
inline constexpr std::size_t bass_cross_check_cap = 6;

/// Bass numbers via the Matlis dual, cross-checked against the direct Hom
/// computation through min(order, 6).  Throws MethodMismatch on disagreement.
template <Field F>
TruncatedSeries bass_series(const FiniteModule<F>& m, std::size_t order, Session<F>& session)
{
    const auto mu = session.bass_numbers(m, order, BassMethod::matlis);
    const auto direct = session.bass_numbers(m, std::min(order, bass_cross_check_cap), BassMethod::ext_direct);
    for (std::size_t i = 0; i < direct.size(); ++i)
        if (direct[i] != mu[i])
            throw MethodMismatch("Bass number " + std::to_string(i) + ": matlis gives " + std::to_string(mu[i]) +
                                 ", direct gives " + std::to_string(direct[i]));
    return TruncatedSeries::from_counts(mu);
}

template <Field F>
TruncatedSeries bass_series(const FiniteModule<F>& m, std::size_t order)
{
    Session<F> s;
    return bass_series(m, order, s);
}

struct T1Report {
    Status status = Status::pass;
    std::size_t n = 0;
    std::size_t nilpotency_index = 0;
    std::size_t order = 0;
    std::optional<TruncatedSeries> pk;
    std::optional<Polynomial> denominator;
    std::vector<std::int64_t> roots;
    std::string detail;
};

/// m^n != 0 for a chain of length n; when m^{n+1} = 0, P_k = 1 / prod_{i<=n} (1 - d_i t).
/// The series is computed to max(order, 2n) so that the recurrence search is overdetermined.
template <Field F>
T1Report verify_T1(const Chain<F>& chain, std::size_t order, Session<F>& session)
{
    T1Report rep;
    rep.n = chain.length();
    rep.nilpotency_index = chain.algebra->nilpotency_index();
    if (rep.nilpotency_index <= rep.n) {
        rep.status = Status::fail;
        rep.detail = "m^" + std::to_string(rep.n) + " = 0";
        return rep;
    }
    if (rep.nilpotency_index > rep.n + 1) {
        rep.detail = "m^" + std::to_string(rep.n + 1) + " != 0; only the nilpotency claim applies";
        return rep;
    }
    rep.order = std::max(order, 2 * rep.n);
    rep.pk = poincare_series(residue_field_module(chain.algebra), rep.order, session);
    if (rep.n == 0) {
        rep.denominator = Polynomial{1};
        if (!matches_rational_form(*rep.pk, {})) {
            rep.status = Status::fail;
            rep.detail = "P_k is not 1";
        }
        return rep;
    }
    try {
        rep.denominator = infer_denominator(*rep.pk, rep.n);
    } catch (const NoRecurrence& e) {
        rep.status = Status::fail;
        rep.detail = e.what();
        return rep;
    }
    const auto roots = factor_denominator(*rep.denominator);
    if (!roots || roots->size() != rep.n) {
        rep.status = Status::fail;
        rep.detail = "denominator does not factor into " + std::to_string(rep.n) + " positive integer roots";
        return rep;
    }
    rep.roots = *roots;
    if (!matches_rational_form(*rep.pk, RationalFormSpec::inverse_of(rep.roots))) {
        rep.status = Status::fail;
        rep.detail = "inferred form does not reproduce P_k";
    }
    return rep;
}

struct IdentityRecord {
    std::string name;
    Status status = Status::pass;
    std::optional<TruncatedSeries> series;
    std::optional<RationalFormSpec> form;
    std::string detail;
};

struct SeriesReport {
    std::vector<IdentityRecord> identities;
    std::vector<std::int64_t> beta0_b;  // beta_0(B_j)
    std::vector<std::int64_t> mu0_b;    // mu^0(B_{[n] minus j})

    Status status() const
    {
        Status s = Status::pass;
        for (const auto& r : identities)
            s = combine(s, r.status);
        return s;
    }
    const IdentityRecord* find(const std::string& name) const
    {
        for (const auto& r : identities)
            if (r.name == name)
                return &r;
        return nullptr;
    }
};

/// Series identities for a suitable chain of maximal length (m^{n+1} = 0), all to `order`.
template <Field F>
SeriesReport verify_series_identities(const Chain<F>& chain, const BFamily<F>& fam, std::size_t order,
                                      Session<F>& session)
{
    SeriesReport rep;
    const std::size_t n = chain.length();
    auto check = [&](std::string name, auto compute, const RationalFormSpec& form) {
        IdentityRecord r;
        r.name = std::move(name);
        r.form = form;
        try {
            r.series = compute();
            if (!matches_rational_form(*r.series, form)) {
                r.status = Status::fail;
                r.detail = "series " + r.series->to_string() + " does not match " + form.to_string();
            }
        } catch (const MethodMismatch& e) {
            r.status = Status::fail;
            r.detail = e.what();
        }
        rep.identities.push_back(std::move(r));
        return rep.identities.back().series;
    };
    auto complement = [&](std::size_t j) {
        DaggerWord w;
        for (std::size_t i = 1; i <= n; ++i)
            if (i != j)
                w.push_back(i);
        return w;
    };

    for (std::size_t j = 1; j <= n; ++j)
        rep.beta0_b.push_back(static_cast<std::int64_t>(session.resolution(fam[j]).betti(0)));

    for (std::size_t j = 1; j <= n; ++j) {
        const std::int64_t b0 = rep.beta0_b[j - 1];
        check("P_B" + std::to_string(j), [&] { return poincare_series(fam[j], order, session); },
              RationalFormSpec::mobius({b0}));
    }
    for (std::size_t j = 1; j <= n; ++j) {
        const auto& m = fam.of(complement(j));
        const auto mu0 = static_cast<std::int64_t>(session.bass_numbers(m, 0, BassMethod::matlis).at(0));
        rep.mu0_b.push_back(mu0);
        const auto name = "I_B" + word_to_string(complement(j));
        if (mu0 < 1) {
            rep.identities.push_back({name, Status::fail, std::nullopt, std::nullopt, "mu^0 is zero"});
            continue;
        }
        check(name, [&] { return bass_series(m, order, session); }, RationalFormSpec::mobius({mu0}));
    }
    for (std::size_t j = 1; j <= n; ++j) {
        IdentityRecord r;
        r.name = "mu0_B" + word_to_string(complement(j)) + "=beta0_B" + std::to_string(j);
        if (rep.mu0_b[j - 1] != rep.beta0_b[j - 1]) {
            r.status = Status::fail;
            r.detail = std::to_string(rep.mu0_b[j - 1]) + " != " + std::to_string(rep.beta0_b[j - 1]);
        }
        rep.identities.push_back(std::move(r));
    }
    for (std::size_t i = 1; i <= n; ++i) {
        std::vector<std::int64_t> f(rep.beta0_b.begin(), rep.beta0_b.begin() + static_cast<std::ptrdiff_t>(i));
        check("P_C" + std::to_string(i), [&] { return poincare_series(chain[i], order, session); },
              RationalFormSpec::mobius(f));
    }
    for (std::size_t i = 1; i <= n; ++i) {
        std::vector<std::int64_t> f(rep.beta0_b.begin() + static_cast<std::ptrdiff_t>(i), rep.beta0_b.end());
        check("I_C" + std::to_string(i), [&] { return bass_series(chain[i], order, session); },
              RationalFormSpec::mobius(f));
    }
    check("I_R", [&] { return bass_series(chain[0], order, session); }, RationalFormSpec::mobius(rep.beta0_b));
    return rep;
}

struct GrowthReport {
    Status strictly_increasing = Status::pass;
    Status lower_bound = Status::pass;
    std::string detail;

    Status status() const { return combine(strictly_increasing, lower_bound); }
};

/// c_{j+1} > c_j throughout, and c_j >= alpha^j for j >= 1 when alpha is given.
inline GrowthReport verify_growth(const TruncatedSeries& s, std::optional<std::int64_t> alpha = std::nullopt)
{
    GrowthReport rep;
    for (std::size_t j = 0; j < s.order(); ++j)
        if (s[j + 1] <= s[j]) {
            rep.strictly_increasing = Status::fail;
            rep.detail = "c_" + std::to_string(j + 1) + " = " + std::to_string(s[j + 1]) + " <= c_" +
                         std::to_string(j) + " = " + std::to_string(s[j]);
            break;
        }
    if (alpha) {
        if (*alpha < 1)
            throw std::invalid_argument("verify_growth: alpha must be positive");
        std::int64_t pw = 1;
        for (std::size_t j = 1; j <= s.order(); ++j) {
            pw = detail::checked_mul(pw, *alpha);
            if (s[j] < pw) {
                rep.lower_bound = Status::fail;
                if (rep.detail.empty())
                    rep.detail = "c_" + std::to_string(j) + " = " + std::to_string(s[j]) + " < " +
                                 std::to_string(*alpha) + "^" + std::to_string(j);
                break;
            }
        }
    }
    return rep;
}

inline std::int64_t binomial(std::int64_t n, std::int64_t k)
{
    if (k < 0 || k > n)
        return 0;
    std::int64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i)
        r = detail::checked_mul(r, n - k + i) / i;
    return r;
}

/// c_j >= binomial(j + n - 1, n - 1) for every known j.
inline bool satisfies_polynomial_lower_bound(const TruncatedSeries& s, std::size_t n)
{
    if (n == 0)
        return true;
    const auto k = static_cast<std::int64_t>(n) - 1;
    for (std::size_t j = 0; j <= s.order(); ++j)
        if (s[j] < binomial(static_cast<std::int64_t>(j) + k, k))
            return false;
    return true;
}

}  // namespace sdchain
