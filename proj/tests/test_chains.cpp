#include "fixtures.hpp"

#include "sdchain/chains.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace sdchain;
using fixtures::gf;
using fixtures::Mod;
using fixtures::ring;
using fixtures::te;

namespace {

using Sizes = std::vector<std::size_t>;

Chain<PrimeField> example_chain(const Sizes& ex, std::size_t bound = 8)
{
    const auto& r = ring(ex);
    Chain<PrimeField> c{r.algebra(), {}, bound};
    for (std::size_t j = 0; j <= r.n(); ++j)
        c.modules.push_back(r.chain_module(j));
    return c;
}

}  // namespace

TEST(Words, BinaryCounterOrder)
{
    const std::vector<DaggerWord> expected{{}, {1}, {2}, {1, 2}, {3}, {1, 3}, {2, 3}, {1, 2, 3}};
    EXPECT_EQ(all_words(3), expected);
    EXPECT_EQ(all_words(0), (std::vector<DaggerWord>{{}}));
    for (std::size_t m = 0; m < 8; ++m)
        EXPECT_EQ(word_mask(expected[m]), m);
}

TEST(Words, Formatting)
{
    EXPECT_EQ(word_to_string({}), "{}");
    EXPECT_EQ(word_to_string({1, 3}), "{1,3}");
}

TEST(Words, Validation)
{
    EXPECT_NO_THROW(validate_word({1, 2}, 2));
    EXPECT_THROW(validate_word({0}, 2), std::invalid_argument);
    EXPECT_THROW(validate_word({3}, 2), std::invalid_argument);
    EXPECT_THROW(validate_word({2, 1}, 2), std::invalid_argument);
    EXPECT_THROW(validate_word({1, 1}, 2), std::invalid_argument);
    EXPECT_THROW(dagger_iterate(example_chain({2}), {2}), std::invalid_argument);
}

TEST(Chain, ExampleChainsAreValid)
{
    for (const auto& ex : {Sizes{2}, Sizes{3}, Sizes{2, 3}}) {
        Session<PrimeField> s;
        EXPECT_TRUE(validate_chain(example_chain(ex), s)) << ex.size();
    }
}

TEST(Chain, RepeatedModuleIsRejected)
{
    const auto& r = ring({2, 3});
    Chain<PrimeField> c{r.algebra(), {r.chain_module(0), r.chain_module(1), r.chain_module(1)}, 4};
    Session<PrimeField> s;
    const auto v = validate_chain(c, s);
    EXPECT_EQ(v.status, Status::fail);
    EXPECT_NE(v.detail.find("isomorphic"), std::string::npos);
}

TEST(Chain, NonSemidualizingLevelIsRejected)
{
    Chain<PrimeField> c{te(2), {regular_module(te(2)), residue_field_module(te(2))}, 4};
    Session<PrimeField> s;
    EXPECT_EQ(validate_chain(c, s).status, Status::fail);
}

TEST(Chain, BottomMustBeTheRing)
{
    Chain<PrimeField> c{te(2), {dualizing_module(te(2))}, 4};
    Session<PrimeField> s;
    EXPECT_EQ(validate_chain(c, s).status, Status::fail);
    EXPECT_EQ(validate_chain(Chain<PrimeField>{te(2), {}, 4}, s).status, Status::fail);
}

TEST(Chain, WrongOrderIsRejected)
{
    const auto& r = ring({2, 3});
    Chain<PrimeField> c{r.algebra(), {r.chain_module(0), r.chain_module(2), r.chain_module(1)}, 4};
    Session<PrimeField> s;
    EXPECT_EQ(validate_chain(c, s).status, Status::fail);
}

TEST(DaggerIterate, EmptyWordIsTheRing)
{
    const auto c = example_chain({2, 3});
    EXPECT_EQ(dagger_iterate(c, {}).dim(), 12u);
    EXPECT_TRUE(is_isomorphic(dagger_iterate(c, {}), c[0]).isomorphic());
    EXPECT_EQ(dagger_iterate(c, {1}).label(), "C{1}");
}

TEST(DaggerIterate, MatchesTheParityPattern)
{
    const auto& r = ring({2, 3});
    const auto c = example_chain({2, 3});
    for (const auto& w : all_words(2))
        EXPECT_TRUE(is_isomorphic(dagger_iterate(c, w), r.product_module(parity_pattern(w, 2))).isomorphic())
            << word_to_string(w);
}

TEST(Suitability, ExampleChainsAreSuitable)
{
    for (const auto& ex : {Sizes{2}, Sizes{2, 3}}) {
        Session<PrimeField> s;
        const auto rep = is_suitable(example_chain(ex), s);
        EXPECT_TRUE(rep.verdict) << rep.verdict.detail;
        for (const auto& chk : rep.checks)
            EXPECT_TRUE(chk.verdict);
    }
}

TEST(Suitability, ChecksTheRequiredPairs)
{
    Session<PrimeField> s;
    const auto rep = is_suitable(example_chain({2, 3}), s);
    std::vector<std::pair<DaggerWord, std::size_t>> pairs;
    for (const auto& chk : rep.checks)
        pairs.emplace_back(chk.word, chk.target);
    const std::vector<std::pair<DaggerWord, std::size_t>> expected{
        {{}, 1}, {{}, 2}, {{1}, 1}, {{1}, 2}, {{2}, 2}, {{1, 2}, 2}};
    EXPECT_EQ(pairs, expected);
}

TEST(Suitability, LengthZeroChainIsSuitable)
{
    Session<PrimeField> s;
    const Chain<PrimeField> c{te(2), {regular_module(te(2))}, 4};
    const auto rep = is_suitable(c, s);
    EXPECT_TRUE(rep.verdict);
    EXPECT_TRUE(rep.checks.empty());
}

TEST(BFamily, LevelsAreTheFactorDuals)
{
    const auto& r = ring({2, 3});
    const auto fam = derive_B_family(example_chain({2, 3}));
    ASSERT_EQ(fam.b.size(), 2u);
    for (std::size_t j = 1; j <= 2; ++j)
        EXPECT_TRUE(is_isomorphic(fam[j], r.b_module(j)).isomorphic());
    EXPECT_EQ(fam.subset.size(), 4u);
    EXPECT_EQ(fam.of({1, 2}).label(), "B{1,2}");
    EXPECT_TRUE(is_isomorphic(fam.of({}), regular_module(r.algebra())).isomorphic());
    EXPECT_TRUE(is_isomorphic(fam.of({1, 2}), dualizing_module(r.algebra())).isomorphic());
}

TEST(BFamily, LevelsTensorToTheChain)
{
    const auto c = example_chain({2, 3});
    const auto fam = derive_B_family(c);
    EXPECT_TRUE(is_isomorphic(fam.of({1}), c[1]).isomorphic());
    EXPECT_TRUE(is_isomorphic(fam.of({1, 2}), c[2]).isomorphic());
}

TEST(PropP1, HoldsForLengthOne)
{
    Session<PrimeField> s;
    const auto c = example_chain({2});
    const auto rep = verify_prop_P1(c, derive_B_family(c), s);
    EXPECT_EQ(rep.status(), Status::pass);
    EXPECT_EQ(rep.class_count, 2u);
    EXPECT_EQ(rep.contractions.size(), 3u);
    EXPECT_EQ(rep.beta0, (Sizes{1, 2}));
}

TEST(PropP1, HoldsForTwoFactors)
{
    Session<PrimeField> s;
    const auto c = example_chain({2, 3});
    const auto rep = verify_prop_P1(c, derive_B_family(c), s);
    EXPECT_EQ(rep.part1, Status::pass);
    EXPECT_EQ(rep.part2, Status::pass);
    EXPECT_EQ(rep.part3, Status::pass);
    EXPECT_EQ(rep.part4, Status::pass);
    EXPECT_EQ(rep.semidualizing.size(), 4u);
    EXPECT_EQ(rep.contractions.size(), 9u);
    EXPECT_EQ(rep.class_count, 4u);
    EXPECT_EQ(std::set<std::size_t>(rep.class_of.begin(), rep.class_of.end()).size(), 4u);
    EXPECT_EQ(std::set<std::size_t>(rep.beta0.begin(), rep.beta0.end()), (std::set<std::size_t>{1, 2, 3, 6}));
    EXPECT_EQ(std::set<std::size_t>(rep.matching.begin(), rep.matching.end()).size(), 4u);
}

TEST(PropP1, CollapsedChainHasTooFewClasses)
{
    const auto& r = ring({2, 3});
    Chain<PrimeField> c{r.algebra(), {r.chain_module(0), r.chain_module(1), r.chain_module(1)}, 4};
    Session<PrimeField> s;
    const auto rep = verify_prop_P1(c, derive_B_family(c), s);
    EXPECT_LT(rep.class_count, 4u);
    EXPECT_EQ(rep.part3, Status::fail);
    EXPECT_EQ(rep.status(), Status::fail);
}

TEST(TorIndependence, ExampleFactorsAreIndependent)
{
    const auto& r = ring({2, 3});
    Session<PrimeField> s;
    EXPECT_TRUE(strongly_tor_independent<PrimeField>({r.b_module(1), r.b_module(2)}, 8, s));
}

TEST(TorIndependence, ThreeFactors)
{
    const auto& r = ring({2, 2, 2});
    Session<PrimeField> s;
    EXPECT_TRUE(strongly_tor_independent<PrimeField>({r.b_module(1), r.b_module(2), r.b_module(3)}, 3, s));
}

TEST(TorIndependence, FreeModuleFails)
{
    const auto& r = ring({2, 3});
    Session<PrimeField> s;
    const auto v = strongly_tor_independent<PrimeField>({regular_module(r.algebra()), r.b_module(2)}, 4, s);
    EXPECT_EQ(v.status, Status::fail);
    EXPECT_NE(v.detail.find("free"), std::string::npos);
}

TEST(TorIndependence, DualizingModuleWithItselfFails)
{
    const auto d = dualizing_module(te(2));
    Session<PrimeField> s;
    const auto v = strongly_tor_independent<PrimeField>({d, d}, 4, s);
    EXPECT_EQ(v.status, Status::fail);
    EXPECT_NE(v.detail.find("Tor_"), std::string::npos);
}

TEST(SDFull, ExampleFactorsAreFull)
{
    const auto& r = ring({2, 3});
    Session<PrimeField> s;
    const auto rep = is_SD_n_full(*r.algebra(), {r.b_module(1), r.b_module(2)}, 8, s);
    EXPECT_TRUE(rep.verdict) << rep.verdict.detail;
    EXPECT_EQ(rep.nilpotency_index, 3u);
    EXPECT_EQ(rep.non_free, (std::vector<bool>{true, true}));
    EXPECT_EQ(rep.products.size(), 3u);
}

TEST(SDFull, TooFewModulesForTheLoewyLength)
{
    const auto& r = ring({2, 3});
    Session<PrimeField> s;
    const auto rep = is_SD_n_full(*r.algebra(), {r.b_module(1)}, 4, s);
    EXPECT_EQ(rep.verdict.status, Status::fail);
    EXPECT_NE(rep.verdict.detail.find("m^2"), std::string::npos);
}

TEST(RoundTrip, RebuiltChainMatchesTheOriginal)
{
    const auto& r = ring({2, 3});
    const auto c = example_chain({2, 3});
    Session<PrimeField> s;
    const auto fam = derive_B_family(c);
    const auto rebuilt = chain_from_tor_independent(r.algebra(), fam.b, 8, s);
    EXPECT_EQ(rebuilt.length(), 2u);
    EXPECT_EQ(chains_levelwise_isomorphic(c, rebuilt, s), Status::pass);
}

TEST(RoundTrip, RejectsModulesThatAreNotFull)
{
    const auto d = dualizing_module(te(2));
    Session<PrimeField> s;
    EXPECT_THROW(chain_from_tor_independent<PrimeField>(te(2), {regular_module(te(2))}, 4, s),
                 std::invalid_argument);
    EXPECT_THROW(chain_from_tor_independent<PrimeField>(te(2), {d, d}, 4, s), std::invalid_argument);
}

TEST(RoundTrip, LevelwiseComparisonDetectsDifferences)
{
    const auto c = example_chain({2, 3});
    const auto& r = ring({2, 3});
    Chain<PrimeField> other{r.algebra(), {r.chain_module(0), r.b_module(2), r.chain_module(2)}, 8};
    Session<PrimeField> s;
    EXPECT_EQ(chains_levelwise_isomorphic(c, other, s), Status::fail);
    EXPECT_EQ(chains_levelwise_isomorphic(c, example_chain({2, 3}, 4), s), Status::pass);
    Chain<PrimeField> shorter{r.algebra(), {r.chain_module(0)}, 8};
    EXPECT_EQ(chains_levelwise_isomorphic(c, shorter, s), Status::fail);
}
