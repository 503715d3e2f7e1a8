#pragma once

#include "sdchain/iso.hpp"
#include "sdchain/predicates.hpp"

#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdchain {

/// A strictly increasing sequence of indices in 1..n.
using DaggerWord = std::vector<std::size_t>;

/// [C_n] < ... < [C_1] < [C_0] with C_0 = R, checked up to `bound`.
template <Field F>
struct Chain {
    AlgebraPtr<F> algebra;
    std::vector<FiniteModule<F>> modules;
    std::size_t bound = 8;

    std::size_t length() const { return modules.empty() ? 0 : modules.size() - 1; }
    const FiniteModule<F>& operator[](std::size_t i) const { return modules.at(i); }
};

/// Subsets of {1..n} in binary-counter order (bit b stands for index b + 1).
inline std::vector<DaggerWord> all_words(std::size_t n)
{
    if (n >= 20)
        throw std::invalid_argument("too many subsets to enumerate");
    std::vector<DaggerWord> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        DaggerWord w;
        for (std::size_t b = 0; b < n; ++b)
            if (mask >> b & 1u)
                w.push_back(b + 1);
        out.push_back(std::move(w));
    }
    return out;
}

inline std::size_t word_mask(const DaggerWord& w)
{
    std::size_t mask = 0;
    for (std::size_t i : w)
        mask |= std::size_t{1} << (i - 1);
    return mask;
}

inline std::string word_to_string(const DaggerWord& w)
{
    std::string s = "{";
    for (std::size_t k = 0; k < w.size(); ++k)
        s += (k ? "," : "") + std::to_string(w[k]);
    return s + "}";
}

inline void validate_word(const DaggerWord& w, std::size_t n)
{
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (w[k] < 1 || w[k] > n)
            throw std::invalid_argument("dagger word entry out of range");
        if (k > 0 && w[k] <= w[k - 1])
            throw std::invalid_argument("dagger word must be strictly increasing");
    }
}

/// C_0 dualized successively into C_{i_1}, ..., C_{i_j}.
template <Field F>
FiniteModule<F> dagger_iterate(const Chain<F>& chain, const DaggerWord& word)
{
    validate_word(word, chain.length());
    FiniteModule<F> m = chain[0];
    for (std::size_t i : word)
        m = hom_module(m, chain[i]).module;
    return m.with_label("C" + word_to_string(word));
}

/// Chain invariants: C_0 = R, every C_i semidualizing, and C_{i-1} totally
/// C_i-reflexive but not isomorphic to C_i.
template <Field F>
Verdict validate_chain(const Chain<F>& chain, Session<F>& session, const IsoOptions& iso = {})
{
    const std::size_t b = chain.bound;
    if (chain.modules.empty())
        return Verdict::fail(b, "empty chain");
    const auto r = regular_module(chain.algebra);
    Status st = Status::pass;
    const auto c0 = is_isomorphic(chain[0], r, session, iso);
    if (c0.status == Status::fail)
        return Verdict::fail(b, "C0 is not isomorphic to R");
    st = combine(st, c0.status);
    for (std::size_t i = 1; i <= chain.length(); ++i) {
        const auto sd = is_semidualizing(chain[i], b, session);
        if (!sd)
            return Verdict::fail(b, "C" + std::to_string(i) + ": " + sd.detail);
        const auto tr = is_totally_reflexive(chain[i - 1], chain[i], b, session);
        if (!tr)
            return Verdict::fail(b, "C" + std::to_string(i - 1) + " vs C" + std::to_string(i) + ": " + tr.detail);
        const auto iso_res = is_isomorphic(chain[i - 1], chain[i], session, iso);
        if (iso_res.status == Status::pass)
            return Verdict::fail(b, "C" + std::to_string(i - 1) + " is isomorphic to C" + std::to_string(i));
        st = combine(st, iso_res.status == Status::inconclusive ? Status::inconclusive : Status::pass);
    }
    return {st, b, st == Status::pass ? "" : "an isomorphism test was inconclusive"};
}

struct ReflexivityCheck {
    DaggerWord word;
    std::size_t target = 0;
    Verdict verdict;
};

struct SuitabilityReport {
    Verdict verdict;
    std::vector<ReflexivityCheck> checks;
};

/// Checks that C_u is totally C_t-reflexive for every word u and max(u) <= t <= n
/// (1 <= t <= n for the empty word).
template <Field F>
SuitabilityReport is_suitable(const Chain<F>& chain, Session<F>& session)
{
    SuitabilityReport rep;
    const std::size_t n = chain.length();
    rep.verdict = Verdict::pass(chain.bound);
    for (const auto& w : all_words(n)) {
        const auto cu = dagger_iterate(chain, w);
        const std::size_t tmin = w.empty() ? 1 : w.back();
        for (std::size_t t = tmin; t <= n; ++t) {
            auto v = is_totally_reflexive(cu, chain[t], chain.bound, session);
            if (!v && rep.verdict.holds())
                rep.verdict = Verdict::fail(chain.bound, "C" + word_to_string(w) + " vs C" + std::to_string(t) +
                                                             ": " + v.detail);
            rep.checks.push_back({w, t, std::move(v)});
        }
    }
    return rep;
}

/// B_i = Hom(C_{i-1}, C_i) and B_u = tensor product of the B_i with i in u (B_empty = C_0).
template <Field F>
struct BFamily {
    std::vector<FiniteModule<F>> b;                 // b[i - 1] = B_i
    std::map<std::size_t, FiniteModule<F>> subset;  // keyed by word mask

    const FiniteModule<F>& operator[](std::size_t i) const { return b.at(i - 1); }
    const FiniteModule<F>& of(const DaggerWord& w) const { return subset.at(word_mask(w)); }
};

template <Field F>
BFamily<F> derive_B_family(const Chain<F>& chain)
{
    BFamily<F> fam;
    const std::size_t n = chain.length();
    for (std::size_t i = 1; i <= n; ++i)
        fam.b.push_back(hom_module(chain[i - 1], chain[i]).module.with_label("B" + std::to_string(i)));
    for (const auto& w : all_words(n)) {
        if (w.empty()) {
            fam.subset.emplace(0, chain[0]);
            continue;
        }
        // Left-associated: B_{u minus its last index} (x) B_last.
        DaggerWord head(w.begin(), w.end() - 1);
        FiniteModule<F> m = head.empty() ? fam[w.back()]
                                         : tensor_module(fam.subset.at(word_mask(head)), fam[w.back()]);
        fam.subset.emplace(word_mask(w), m.with_label("B" + word_to_string(w)));
    }
    return fam;
}

struct IsoCheck {
    std::string what;
    Status status = Status::fail;
    std::string reason;
};

struct ContractionCheck {
    DaggerWord s;
    DaggerWord i;
    Status iso = Status::fail;
    Verdict reflexive;
};

/// Outcome of the four parts of the class-count proposition for a suitable chain.
struct P1Report {
    /// (1) every B_u is semidualizing.
    std::vector<std::pair<DaggerWord, Verdict>> semidualizing;
    Status part1 = Status::pass;
    /// (2) Hom(B_s, B_i) = B_{i minus s} and B_s totally B_i-reflexive, for s inside i.
    std::vector<ContractionCheck> contractions;
    Status part2 = Status::pass;
    /// (3) the modules C_u fall into exactly 2^n classes.
    std::size_t class_count = 0;
    std::vector<std::size_t> class_of;  // per word, in binary-counter order
    std::vector<std::size_t> beta0;     // beta_0(C_u) per word
    Status part3 = Status::pass;
    /// (4) the classes of the B_u are the classes of the C_u.
    std::vector<std::size_t> matching;  // for word u, the index of the C word isomorphic to B_u
    Status part4 = Status::pass;

    Status status() const { return combine(combine(part1, part2), combine(part3, part4)); }
};

namespace detail {

inline bool is_subset(const DaggerWord& s, const DaggerWord& i) { return (word_mask(s) & ~word_mask(i)) == 0; }

inline DaggerWord difference(const DaggerWord& i, const DaggerWord& s)
{
    DaggerWord d;
    for (std::size_t x : i)
        if (std::find(s.begin(), s.end(), x) == s.end())
            d.push_back(x);
    return d;
}

}  // namespace detail

template <Field F>
P1Report verify_prop_P1(const Chain<F>& chain, const BFamily<F>& fam, Session<F>& session, const IsoOptions& iso = {})
{
    P1Report rep;
    const std::size_t n = chain.length(), b = chain.bound;
    const auto words = all_words(n);

    for (const auto& w : words) {
        auto v = is_semidualizing(fam.of(w), b, session);
        rep.part1 = combine(rep.part1, v.status);
        rep.semidualizing.emplace_back(w, std::move(v));
    }

    for (const auto& i : words)
        for (const auto& s : words) {
            if (!detail::is_subset(s, i))
                continue;
            ContractionCheck c;
            c.s = s;
            c.i = i;
            const auto h = hom_module(fam.of(s), fam.of(i)).module;
            c.iso = is_isomorphic(h, fam.of(detail::difference(i, s)), session, iso).status;
            c.reflexive = is_totally_reflexive(fam.of(s), fam.of(i), b, session);
            rep.part2 = combine(rep.part2, combine(c.iso, c.reflexive.status));
            rep.contractions.push_back(std::move(c));
        }

    // (3): classes among the C_u, tested pairwise against class representatives.
    std::vector<FiniteModule<F>> cu;
    for (const auto& w : words)
        cu.push_back(dagger_iterate(chain, w));
    std::vector<std::size_t> reps;
    for (std::size_t a = 0; a < cu.size(); ++a) {
        rep.beta0.push_back(session.resolution(cu[a]).betti(0));
        std::size_t found = reps.size();
        for (std::size_t r = 0; r < reps.size() && found == reps.size(); ++r) {
            const auto res = is_isomorphic(cu[a], cu[reps[r]], session, iso);
            if (res.status == Status::pass)
                found = r;
            else if (res.status == Status::inconclusive)
                rep.part3 = combine(rep.part3, Status::inconclusive);
        }
        if (found == reps.size())
            reps.push_back(a);
        rep.class_of.push_back(found);
    }
    rep.class_count = reps.size();
    if (rep.class_count != (std::size_t{1} << n))
        rep.part3 = Status::fail;

    // (4): every B_u matches some C_w, and every class of C is hit.
    std::vector<bool> hit(reps.size(), false);
    for (const auto& w : words) {
        std::size_t match = words.size();
        for (std::size_t r = 0; r < reps.size() && match == words.size(); ++r) {
            const auto res = is_isomorphic(fam.of(w), cu[reps[r]], session, iso);
            if (res.status == Status::pass) {
                match = reps[r];
                hit[r] = true;
            } else if (res.status == Status::inconclusive) {
                rep.part4 = combine(rep.part4, Status::inconclusive);
            }
        }
        if (match == words.size())
            rep.part4 = Status::fail;
        rep.matching.push_back(match);
    }
    for (bool h : hit)
        if (!h)
            rep.part4 = Status::fail;
    return rep;
}

/// Every sub-collection has vanishing higher Tor, checked in stages:
/// T = K_{l_1}, then Tor_i(T, K_{l_{m+1}}) = 0 for 1 <= i <= bound and T <- T (x) K_{l_{m+1}}.
template <Field F>
Verdict strongly_tor_independent(const std::vector<FiniteModule<F>>& mods, std::size_t bound, Session<F>& session)
{
    const std::size_t n = mods.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && !mods[i].same_algebra(mods[0]))
            throw std::invalid_argument("strongly_tor_independent: modules over different algebras");
        if (session.is_free(mods[i]))
            return Verdict::fail(bound, "module " + std::to_string(i + 1) + " is free");
    }
    // Products over the lower part of each subset are shared between subsets.
    std::map<std::size_t, FiniteModule<F>> prefix;
    for (const auto& w : all_words(n)) {
        if (w.size() < 2)
            continue;
        const DaggerWord head(w.begin(), w.end() - 1);
        const std::size_t hm = word_mask(head);
        if (!prefix.count(hm)) {
            FiniteModule<F> t = mods[head[0] - 1];
            for (std::size_t k = 1; k < head.size(); ++k)
                t = tensor_module(t, mods[head[k] - 1]);
            prefix.emplace(hm, t);
        }
        const auto& t = prefix.at(hm);
        const auto& k = mods[w.back() - 1];
        for (std::size_t i = 1; i <= bound; ++i)
            if (const auto e = session.tor(t, k, i); e != 0)
                return Verdict::fail(bound, "Tor_" + std::to_string(i) + " at stage " + word_to_string(w) +
                                                " has dimension " + std::to_string(e));
        prefix.emplace(word_mask(w), tensor_module(t, k));
    }
    return Verdict::pass(bound);
}

struct SDFullReport {
    Verdict verdict;
    std::size_t nilpotency_index = 0;
    Verdict tor_independent;
    std::vector<bool> non_free;
    std::vector<std::pair<DaggerWord, Verdict>> products;
};

/// m^{n+1} = 0, the modules are non-free and strongly Tor-independent, and
/// every subset product is semidualizing.
template <Field F>
SDFullReport is_SD_n_full(const FiniteLocalAlgebra<F>& a, const std::vector<FiniteModule<F>>& mods, std::size_t bound,
                          Session<F>& session)
{
    SDFullReport rep;
    const std::size_t n = mods.size();
    rep.verdict = Verdict::pass(bound);
    auto fail = [&](std::string why) {
        if (rep.verdict.holds())
            rep.verdict = Verdict::fail(bound, std::move(why));
    };
    rep.nilpotency_index = a.nilpotency_index();
    if (rep.nilpotency_index > n + 1)
        fail("m^" + std::to_string(n + 1) + " is not zero");
    for (std::size_t i = 0; i < n; ++i) {
        rep.non_free.push_back(!session.is_free(mods[i]));
        if (!rep.non_free.back())
            fail("module " + std::to_string(i + 1) + " is free");
    }
    rep.tor_independent = strongly_tor_independent(mods, bound, session);
    if (!rep.tor_independent)
        fail("not strongly Tor-independent: " + rep.tor_independent.detail);
    for (const auto& w : all_words(n)) {
        if (w.empty())
            continue;
        FiniteModule<F> t = mods[w[0] - 1];
        for (std::size_t k = 1; k < w.size(); ++k)
            t = tensor_module(t, mods[w[k] - 1]);
        auto v = is_semidualizing(t, bound, session);
        if (!v)
            fail("product over " + word_to_string(w) + " is not semidualizing");
        rep.products.emplace_back(w, std::move(v));
    }
    return rep;
}

/// C_0 = R and C_j = K_1 (x) ... (x) K_j; throws if the result is not a suitable chain.
template <Field F>
Chain<F> chain_from_tor_independent(const AlgebraPtr<F>& a, const std::vector<FiniteModule<F>>& mods,
                                    std::size_t bound, Session<F>& session, const IsoOptions& iso = {})
{
    const auto full = is_SD_n_full(*a, mods, bound, session);
    if (!full.verdict)
        throw std::invalid_argument("chain_from_tor_independent: modules are not SD(n)-full: " +
                                    full.verdict.detail);
    Chain<F> c;
    c.algebra = a;
    c.bound = bound;
    c.modules.push_back(regular_module(a).with_label("C0"));
    for (std::size_t j = 0; j < mods.size(); ++j) {
        FiniteModule<F> next = j == 0 ? mods[0] : tensor_module(c.modules.back(), mods[j]);
        c.modules.push_back(next.with_label("C" + std::to_string(j + 1)));
    }
    const auto valid = validate_chain(c, session, iso);
    if (valid.status == Status::fail)
        throw std::runtime_error("rebuilt chain violates the chain invariants: " + valid.detail);
    const auto suitable = is_suitable(c, session);
    if (!suitable.verdict)
        throw std::runtime_error("rebuilt chain is not suitable: " + suitable.verdict.detail);
    return c;
}

/// Status of C_i = C'_i for every level of two chains of equal length.
template <Field F>
Status chains_levelwise_isomorphic(const Chain<F>& a, const Chain<F>& b, Session<F>& session,
                                   const IsoOptions& iso = {})
{
    if (a.length() != b.length())
        return Status::fail;
    Status st = Status::pass;
    for (std::size_t i = 0; i <= a.length(); ++i)
        st = combine(st, is_isomorphic(a[i], b[i], session, iso).status);
    return st;
}

}  // namespace sdchain
