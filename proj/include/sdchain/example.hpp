#pragma once

#include "sdchain/constructions.hpp"
#include "sdchain/serialize.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sdchain {

struct VerifyOptions {
    std::size_t bound = 8;
    std::size_t order = 8;
    std::uint64_t seed = IsoOptions{}.seed;
};

/// A chain together with its algebra and, when known, the exponents it was built from.
template <Field F>
struct ExampleInstance {
    std::vector<std::size_t> exponents;
    AlgebraPtr<F> algebra;
    Chain<F> chain;
    std::optional<ExampleRing<F>> ring;

    std::size_t n() const { return chain.length(); }
};

/// S = S_1 (x) ... (x) S_n with S_i = F x F^{a_i}, and C_j = D_1 ... D_j S_{j+1} ... S_n.
template <Field F>
ExampleInstance<F> build_example(const ExampleSpec& spec, const F& field)
{
    validate_example_spec(spec);
    ExampleInstance<F> inst;
    inst.exponents = spec.exponents;
    inst.ring.emplace(spec.exponents, field);
    inst.algebra = inst.ring->algebra();
    inst.chain.algebra = inst.algebra;
    inst.chain.bound = spec.bound;
    for (std::size_t j = 0; j <= inst.ring->n(); ++j)
        inst.chain.modules.push_back(inst.ring->chain_module(j));
    return inst;
}

struct VerificationReport {
    std::vector<ClaimRecord> claims;

    Status status() const
    {
        Status s = Status::pass;
        for (const auto& c : claims)
            s = combine(s, c.status);
        return s;
    }
    const ClaimRecord* find(const std::string& id) const
    {
        for (const auto& c : claims)
            if (c.claim_id == id)
                return &c;
        return nullptr;
    }
};

namespace detail {

inline json words_json(const std::vector<DaggerWord>& ws)
{
    json out = json::array();
    for (const auto& w : ws)
        out.push_back(word_to_string(w));
    return out;
}

inline json verdict_json(const Verdict& v)
{
    json out{{"status", to_string(v.status)}};
    if (!v.detail.empty())
        out["detail"] = v.detail;
    return out;
}

}  // namespace detail

/// Runs every check on the instance, in a fixed order, and records one claim per statement.
/// Stops after the structural checks if the algebra, the modules or the chain are invalid.
template <Field F>
VerificationReport verify_instance(const ExampleInstance<F>& inst, const VerifyOptions& opt, Session<F>& session)
{
    VerificationReport rep;
    const std::size_t b = opt.bound;
    const std::size_t n = inst.n();
    const IsoOptions iso{.seed = opt.seed};
    auto add = [&](std::string id, std::string anchor, Status st, json witness) {
        rep.claims.push_back({std::move(id), std::move(anchor), st, b, std::move(witness)});
        return st;
    };

    const auto av = inst.algebra->validate();
    if (add("algebra.valid", "commutative local algebra: unital, associative, m nilpotent",
            av.ok() ? Status::pass : Status::fail, json{{"dim", inst.algebra->dim()}, {"problems", av.problems}}) !=
        Status::pass)
        return rep;
    {
        json problems = json::object();
        Status st = Status::pass;
        for (const auto& m : inst.chain.modules) {
            if (!m.same_algebra(inst.chain.modules[0]) || m.algebra().hash() != inst.algebra->hash()) {
                problems[m.label()] = json::array({"module over a different algebra"});
                st = Status::fail;
                continue;
            }
            const auto mv = m.validate();
            if (!mv.ok()) {
                problems[m.label()] = mv.problems;
                st = Status::fail;
            }
        }
        if (add("modules.valid", "each C_i is a module over the algebra", st, json{{"problems", problems}}) !=
            Status::pass)
            return rep;
    }
    if (inst.ring) {
        const bool same = *inst.ring->algebra() == *inst.algebra;
        if (add("example.algebra", "S is the tensor product of the trivial extensions F x F^{a_i}",
                same ? Status::pass : Status::fail,
                json{{"exponents", inst.exponents},
                     {"dim", inst.algebra->dim()},
                     {"type", inst.algebra->type()},
                     {"nilpotency_index", inst.algebra->nilpotency_index()}}) != Status::pass)
            return rep;
    }

    Chain<F> chain = inst.chain;
    chain.bound = b;
    const auto valid = validate_chain(chain, session, iso);
    if (add("chain.valid", "C_0 = R, each C_i semidualizing, [C_i] strictly below [C_{i-1}]", valid.status,
            detail::verdict_json(valid)) == Status::fail)
        return rep;

    const auto suit = is_suitable(chain, session);
    {
        json checks = json::array();
        for (const auto& c : suit.checks)
            checks.push_back(json{{"word", word_to_string(c.word)}, {"t", c.target}, {"status", to_string(c.verdict.status)}});
        if (add("chain.suitable", "suitable chain: C_u totally C_t-reflexive for max(u) <= t <= n",
                suit.verdict.status, json{{"checks", checks}}) == Status::fail)
            return rep;
    }

    const auto fam = derive_B_family(chain);
    std::vector<FiniteModule<F>> bs(fam.b);
    {
        json beta0 = json::array();
        for (const auto& m : bs)
            beta0.push_back(session.resolution(m).betti(0));
        Status st = Status::pass;
        json iso_b = json::array();
        if (inst.ring)
            for (std::size_t j = 1; j <= n; ++j) {
                const auto r = is_isomorphic(fam[j], inst.ring->b_module(j), session, iso);
                st = combine(st, r.status);
                iso_b.push_back(to_string(r.status));
            }
        add("b_family", "B_j = Hom(C_{j-1}, C_j) is S_1 ... D_j ... S_n", st,
            json{{"beta0", beta0}, {"matches_example_form", iso_b}});
    }
    {
        Status st = Status::pass;
        json per = json::array();
        for (std::size_t i = 1; i <= n; ++i) {
            DaggerWord w;
            for (std::size_t k = 1; k <= i; ++k)
                w.push_back(k);
            const auto r = is_isomorphic(chain[i], fam.of(w), session, iso);
            st = combine(st, r.status);
            per.push_back(to_string(r.status));
        }
        add("fact.c_as_b_product", "C_i is isomorphic to B_1 (x) ... (x) B_i", st, json{{"levels", per}});
    }

    const auto p1 = verify_prop_P1(chain, fam, session, iso);
    {
        json sd = json::object();
        for (const auto& [w, v] : p1.semidualizing)
            sd[word_to_string(w)] = to_string(v.status);
        add("p1.b_semidualizing", "every B_u is semidualizing", p1.part1, json{{"modules", sd}});
        json pairs = json::array();
        for (const auto& c : p1.contractions)
            pairs.push_back(json{{"s", word_to_string(c.s)},
                                 {"i", word_to_string(c.i)},
                                 {"hom_iso", to_string(c.iso)},
                                 {"reflexive", to_string(c.reflexive.status)}});
        add("p1.contraction", "Hom(B_s, B_i) = B_{i minus s} and B_s totally B_i-reflexive for s inside i", p1.part2,
            json{{"pairs", pairs.size()}, {"checks", pairs}});
        const auto words = all_words(n);
        json fp = json::object();
        for (std::size_t k = 0; k < words.size(); ++k)
            fp[word_to_string(words[k])] = json{{"beta0", p1.beta0[k]}, {"class", p1.class_of[k]}};
        add("p1.class_count", "the C_u represent exactly 2^n isomorphism classes", p1.part3,
            json{{"classes", p1.class_count}, {"expected", std::size_t{1} << n}, {"modules", fp}});
        json match = json::object();
        for (std::size_t k = 0; k < words.size(); ++k)
            match["B" + word_to_string(words[k])] =
                p1.matching[k] < words.size() ? json("C" + word_to_string(words[p1.matching[k]])) : json(nullptr);
        add("p1.class_equality", "the classes of the B_u are the classes of the C_u", p1.part4,
            json{{"matching", match}});
    }

    if (inst.ring) {
        Status st = Status::pass;
        json per = json::object();
        for (const auto& w : all_words(n)) {
            const auto dual = parity_pattern(w, n);
            std::string pattern;
            for (bool d : dual)
                pattern += d ? 'D' : 'S';
            const auto r = is_isomorphic(dagger_iterate(chain, w), inst.ring->product_module(dual), session, iso);
            st = combine(st, r.status);
            per[word_to_string(w)] = json{{"pattern", pattern}, {"status", to_string(r.status)}};
        }
        add("example.parity_pattern", "C_u is the product with alternating D/S blocks ending in D at u_j", st,
            json{{"words", per}});
    }

    const auto full = is_SD_n_full(*chain.algebra, bs, b, session);
    add("t2.b_family_sd_full", "the B_i of a suitable chain form an SD(n)-full family", full.verdict.status,
        json{{"nilpotency_index", full.nilpotency_index},
             {"tor_independent", detail::verdict_json(full.tor_independent)},
             {"detail", full.verdict.detail}});
    {
        Status st = Status::fail;
        std::string why;
        if (full.verdict.holds()) {
            try {
                const auto rebuilt = chain_from_tor_independent(chain.algebra, bs, b, session, iso);
                st = chains_levelwise_isomorphic(chain, rebuilt, session, iso);
            } catch (const std::exception& e) {
                why = e.what();
            }
        } else {
            why = "family is not SD(n)-full";
        }
        add("t2.round_trip", "an SD(n)-full family yields a suitable chain with C_j = K_1 (x) ... (x) K_j", st,
            why.empty() ? json::object() : json{{"detail", why}});
    }

    const auto t1 = verify_T1(chain, opt.order, session);
    {
        json w{{"n", t1.n}, {"nilpotency_index", t1.nilpotency_index}};
        if (t1.pk) {
            w["order"] = t1.order;
            w["pk"] = series_to_json(*t1.pk);
        }
        if (t1.denominator)
            w["denominator"] = *t1.denominator;
        w["d"] = t1.roots;
        if (!t1.detail.empty())
            w["detail"] = t1.detail;
        add("t1", "m^n != 0, and if m^{n+1} = 0 then P_k = 1 / prod (1 - d_i t)", t1.status, std::move(w));
    }
    if (t1.nilpotency_index != n + 1)
        return rep;

    const auto sr = verify_series_identities(chain, fam, opt.order, session);
    for (const auto& r : sr.identities) {
        json w = json::object();
        if (r.series)
            w["series"] = series_to_json(*r.series);
        if (r.form)
            w["form"] = r.form->to_string();
        if (!r.detail.empty())
            w["detail"] = r.detail;
        add("series." + r.name, "series identity " + r.name, r.status, std::move(w));
    }

    if (n >= 1) {
        if (const auto* ir = sr.find("I_R"); ir && ir->series) {
            const auto g = verify_growth(*ir->series);
            add("growth.bass_ring", "mu^j(R) is strictly increasing", g.status(),
                json{{"series", series_to_json(*ir->series)}, {"detail", g.detail}});
            add("growth.polynomial_lower_bound", "mu^j(R) >= binomial(j + n - 1, n - 1)",
                satisfies_polynomial_lower_bound(*ir->series, n) ? Status::pass : Status::fail,
                json{{"n", n}});
        }
        for (std::size_t j = 1; j <= n; ++j) {
            DaggerWord w;
            for (std::size_t i = 1; i <= n; ++i)
                if (i != j)
                    w.push_back(i);
            const auto* r = sr.find("I_B" + word_to_string(w));
            if (!r || !r->series)
                continue;
            const auto alpha = sr.mu0_b.at(j - 1);
            const auto g = verify_growth(*r->series, alpha);
            add("growth.bass_B" + word_to_string(w), "mu^j(B_{[n] minus i}) strictly increasing and >= alpha_i^j",
                g.status(), json{{"alpha", alpha}, {"detail", g.detail}});
        }
    }
    return rep;
}

template <Field F>
json report_to_json(const ExampleInstance<F>& inst, const VerifyOptions& opt, const VerificationReport& rep)
{
    json claims = json::array();
    for (const auto& c : rep.claims)
        claims.push_back(claim_to_json(c));
    return json{{"instance",
                 json{{"exponents", inst.exponents},
                      {"field", field_to_json(inst.algebra->field_spec())},
                      {"dim", inst.algebra->dim()},
                      {"n", inst.n()}}},
                {"bound", opt.bound},
                {"order", opt.order},
                {"seed", opt.seed},
                {"status", to_string(rep.status())},
                {"claims", std::move(claims)}};
}

/// Writes algebra.json, modules/*.json and chain.json under `dir`.
template <Field F>
void write_bundle(const std::filesystem::path& dir, const ExampleInstance<F>& inst, const VerifyOptions& opt)
{
    write_json_file(dir / "algebra.json", algebra_to_json(*inst.algebra));
    json files = json::array();
    for (std::size_t i = 0; i <= inst.n(); ++i) {
        const std::string name = "C" + std::to_string(i);
        write_json_file(dir / "modules" / (name + ".json"), module_to_json(inst.chain[i].with_label(name)));
        files.push_back("modules/" + name + ".json");
    }
    const auto fam = derive_B_family(inst.chain);
    for (std::size_t j = 1; j <= inst.n(); ++j)
        write_json_file(dir / "modules" / ("B" + std::to_string(j) + ".json"), module_to_json(fam[j]));
    write_json_file(dir / "modules" / "D.json", module_to_json(dualizing_module(inst.algebra)));
    write_json_file(dir / "modules" / "k.json", module_to_json(residue_field_module(inst.algebra)));
    write_json_file(dir / "chain.json", json{{"exponents", inst.exponents},
                                             {"length", inst.n()},
                                             {"bound", opt.bound},
                                             {"order", opt.order},
                                             {"seed", opt.seed},
                                             {"modules", files}});
}

inline FieldSpec bundle_field(const std::filesystem::path& dir)
{
    return field_from_json(detail::require(read_json_file(dir / "algebra.json"), "field"));
}

/// Reads a bundle; the exponents, when recorded, are used to rebuild the expected example.
template <Field F>
ExampleInstance<F> read_bundle(const std::filesystem::path& dir, const F& field)
{
    ExampleInstance<F> inst;
    inst.algebra = share(algebra_from_json(read_json_file(dir / "algebra.json"), field));
    const json chain = read_json_file(dir / "chain.json");
    if (chain.contains("exponents"))
        inst.exponents = chain["exponents"].get<std::vector<std::size_t>>();
    inst.chain.algebra = inst.algebra;
    inst.chain.bound = chain.value("bound", std::size_t{8});
    for (const auto& f : detail::require(chain, "modules")) {
        const std::filesystem::path p = dir / f.get<std::string>();
        inst.chain.modules.push_back(module_from_json(read_json_file(p), inst.algebra));
    }
    if (inst.chain.modules.empty())
        throw FormatError("chain.json lists no modules");
    if (!inst.exponents.empty()) {
        if (inst.exponents.size() != inst.chain.length())
            throw FormatError("chain length does not match the number of exponents");
        validate_example_spec({inst.exponents, spec_of(field), inst.chain.bound, 1});
        inst.ring.emplace(inst.exponents, field);
    }
    return inst;
}

/// Looks up a module by name: k, R, D, C<i>, B<j> (derived from the chain), or a file in modules/.
template <Field F>
FiniteModule<F> named_module(const ExampleInstance<F>& inst, const std::string& name,
                             const std::optional<std::filesystem::path>& dir = std::nullopt)
{
    if (name == "k")
        return residue_field_module(inst.algebra);
    if (name == "R")
        return regular_module(inst.algebra);
    if (name == "D")
        return dualizing_module(inst.algebra);
    auto index = [&](std::size_t lo, std::size_t hi) -> std::optional<std::size_t> {
        if (name.size() < 2 || name.find_first_not_of("0123456789", 1) != std::string::npos)
            return std::nullopt;
        const std::size_t i = std::stoul(name.substr(1));
        if (i < lo || i > hi)
            return std::nullopt;
        return i;
    };
    if (name[0] == 'C')
        if (const auto i = index(0, inst.n()))
            return inst.chain[*i];
    if (name[0] == 'B')
        if (const auto j = index(1, inst.n()))
            return hom_module(inst.chain[*j - 1], inst.chain[*j]).module.with_label(name);
    if (dir) {
        const auto p = *dir / "modules" / (name + ".json");
        if (std::filesystem::exists(p))
            return module_from_json(read_json_file(p), inst.algebra);
    }
    throw std::invalid_argument("unknown module '" + name + "'");
}

}  // namespace sdchain
