#include "fixtures.hpp"

#include "sdchain/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

using namespace sdchain;
using fixtures::gf;
using fixtures::ring;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir()
    {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("sdchain_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }
    std::string str() const { return path_.string(); }

private:
    fs::path path_;
};

/// A bundle for exponents (2), built once.
const TempDir& bundle2()
{
    static const TempDir dir;
    static const int code = run_cli({"build", "--a", "2", "--out", dir.str()}).code;
    EXPECT_EQ(code, 0);
    return dir;
}

void copy_bundle(const fs::path& from, const fs::path& to)
{
    fs::copy(from, to, fs::copy_options::recursive | fs::copy_options::overwrite_existing);
}

}  // namespace

TEST(CliUsage, GorensteinFactorIsRejected)
{
    const auto r = run_cli({"build", "--a", "1,2"});
    EXPECT_EQ(r.code, 64);
    EXPECT_NE(r.err.find("exponent 1 yields Gorenstein factor"), std::string::npos);
}

TEST(CliUsage, MalformedArguments)
{
    EXPECT_EQ(run_cli({}).code, 64);
    EXPECT_EQ(run_cli({"frobnicate"}).code, 64);
    EXPECT_EQ(run_cli({"build"}).code, 64);
    EXPECT_EQ(run_cli({"build", "--a", "2,x"}).code, 64);
    EXPECT_EQ(run_cli({"build", "--a", "0"}).code, 64);
    EXPECT_EQ(run_cli({"build", "--a", "2", "--field", "4"}).code, 64);
    EXPECT_EQ(run_cli({"build", "--a", "2", "--bound", "0"}).code, 64);
    EXPECT_EQ(run_cli({"build", "--a", "2", "--format", "xml"}).code, 64);
    EXPECT_EQ(run_cli({"series", "k"}).code, 64);
    EXPECT_EQ(run_cli({"series", "k", "--a", "2", "--bundle", bundle2().str()}).code, 64);
    EXPECT_EQ(run_cli({"series", "Z9", "--a", "2"}).code, 64);
}

TEST(CliUsage, HelpExitsCleanly)
{
    const auto r = run_cli({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("build"), std::string::npos);
}

TEST(CliBuild, WritesABundle)
{
    const auto& dir = bundle2().path();
    for (const auto* f : {"algebra.json", "chain.json", "report.json", "modules/C0.json", "modules/C1.json",
                          "modules/B1.json", "modules/D.json", "modules/k.json"})
        EXPECT_TRUE(fs::exists(dir / f)) << f;
    const auto report = read_json_file(dir / "report.json");
    EXPECT_EQ(report["status"], "pass");
    EXPECT_EQ(report["instance"]["dim"], 3);
    EXPECT_EQ(report["instance"]["n"], 1);
    for (const auto& c : report["claims"]) {
        EXPECT_EQ(c["status"], "pass") << c["claim_id"];
        EXPECT_NO_THROW(claim_from_json(c));
    }
}

TEST(CliBuild, TextOutput)
{
    const auto r = run_cli({"build", "--a", "2", "--bound", "3", "--order", "4"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("dim 3\nn 1\nnilpotency_index 2\n"), std::string::npos);
    EXPECT_NE(r.out.find("bound 3  order 4"), std::string::npos);
    EXPECT_NE(r.out.find("chain.suitable\tpass"), std::string::npos);
    EXPECT_NE(r.out.find("status pass"), std::string::npos);
}

TEST(CliBuild, RationalField)
{
    const auto r = run_cli({"build", "--a", "2", "--field", "Q", "--bound", "3", "--order", "4", "--format", "json"});
    EXPECT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["instance"]["field"], "rationals");
    EXPECT_EQ(j["status"], "pass");
}

TEST(CliVerify, BundleVerifies)
{
    const auto r = run_cli({"verify", bundle2().str(), "--format", "json"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(json::parse(r.out)["status"], "pass");
}

TEST(CliVerify, BoundOneIsRecorded)
{
    TempDir tmp;
    const auto out = tmp.path() / "report.json";
    const auto r = run_cli({"verify", bundle2().str(), "--bound", "1", "--out", out.string()});
    EXPECT_EQ(r.code, 0) << r.err;
    const auto report = read_json_file(out);
    EXPECT_EQ(report["bound"], 1);
    for (const auto& c : report["claims"])
        EXPECT_EQ(c["bound"], 1);
}

TEST(CliVerify, TamperedAlgebraFails)
{
    TempDir tmp;
    copy_bundle(bundle2().path(), tmp.path());
    auto alg = read_json_file(tmp.path() / "algebra.json");
    alg["mult"][1][2][1] = "1";
    write_json_file(tmp.path() / "algebra.json", alg);
    const auto r = run_cli({"verify", tmp.str()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("algebra.valid\tfail"), std::string::npos);
    EXPECT_NE(r.out.find("status fail"), std::string::npos);
}

TEST(CliVerify, TamperedModuleFails)
{
    TempDir tmp;
    copy_bundle(bundle2().path(), tmp.path());
    auto m = read_json_file(tmp.path() / "modules" / "C1.json");
    m["action"][1][0][0] = "1";
    write_json_file(tmp.path() / "modules" / "C1.json", m);
    const auto r = run_cli({"verify", tmp.str()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("modules.valid\tfail"), std::string::npos);
}

TEST(CliVerify, MissingOrMalformedBundleFails)
{
    TempDir tmp;
    EXPECT_EQ(run_cli({"verify", (tmp.path() / "nothing").string()}).code, 1);
    copy_bundle(bundle2().path(), tmp.path());
    {
        std::ofstream out(tmp.path() / "algebra.json");
        out << "{ not json";
    }
    const auto r = run_cli({"verify", tmp.str()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("algebra.json"), std::string::npos);
}

TEST(CliSeries, ResidueFieldWithInference)
{
    const auto r = run_cli({"series", "k", "--a", "2,3", "--order", "6", "--infer"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "1 5 19 65 211 665 2059\ninferred 1/((1-2t)(1-3t))\n");
}

TEST(CliSeries, BassSeriesFromABundle)
{
    const auto r = run_cli({"series", "R", "--bundle", bundle2().str(), "--bass", "--order", "4"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "2 3 6 12 24\n");
    const auto d = run_cli({"series", "C1", "--bundle", bundle2().str(), "--bass", "--order", "3"});
    EXPECT_EQ(d.out, "1 0 0 0\n");
    TempDir tmp;
    copy_bundle(bundle2().path(), tmp.path());
    fs::copy_file(tmp.path() / "modules" / "B1.json", tmp.path() / "modules" / "extra.json");
    const auto f = run_cli({"series", "extra", "--bundle", tmp.str(), "--order", "3"});
    EXPECT_EQ(f.code, 0) << f.err;
    EXPECT_EQ(f.out, "2 3 6 12\n");
}

TEST(CliSeries, JsonOutput)
{
    const auto r = run_cli({"series", "B1", "--a", "2", "--order", "4", "--infer", "--format", "json"});
    EXPECT_EQ(r.code, 0) << r.err;
    const auto j = json::parse(r.out);
    EXPECT_EQ(j["module"], "B1");
    EXPECT_EQ(j["kind"], "poincare");
    EXPECT_EQ(j["order"], 4);
    EXPECT_EQ(j["coeffs"], json::parse("[2,3,6,12,24]"));
    EXPECT_EQ(j["inferred"], "(2-t)/(1-2t)");
    EXPECT_EQ(series_from_json(j), TruncatedSeries({2, 3, 6, 12, 24}));
}

TEST(Serialization, AlgebraRoundTrip)
{
    const auto& a = *ring({2, 3}).algebra();
    const auto j = algebra_to_json(a);
    const auto back = algebra_from_json(j, gf());
    EXPECT_EQ(algebra_to_json(back), j);
    EXPECT_EQ(back.hash(), a.hash());
    EXPECT_EQ(field_from_json(j["field"]), a.field_spec());
}

TEST(Serialization, ModuleRoundTrip)
{
    const auto& r = ring({2, 3});
    for (const auto& m : fixtures::golden_modules(r)) {
        const auto j = module_to_json(m);
        const auto back = module_from_json(j, r.algebra());
        EXPECT_EQ(back, m) << m.label();
        EXPECT_EQ(back.label(), m.label());
        EXPECT_EQ(module_to_json(back), j);
    }
}

TEST(Serialization, RationalAlgebraRoundTrip)
{
    const RationalField q;
    const auto a = trivial_extension(2, q);
    const auto j = algebra_to_json(a);
    EXPECT_EQ(j["field"], "rationals");
    EXPECT_EQ(algebra_to_json(algebra_from_json(j, q)), j);
}

TEST(Serialization, MalformedInputIsRejected)
{
    auto j = algebra_to_json(*ring({2}).algebra());
    j["mult"].erase(0);
    EXPECT_THROW(algebra_from_json(j, gf()), FormatError);
    auto k = module_to_json(residue_field_module(ring({2}).algebra()));
    k.erase("dim");
    EXPECT_THROW(module_from_json(k, ring({2}).algebra()), FormatError);
    EXPECT_THROW(status_from_string("maybe"), FormatError);
    EXPECT_THROW(field_from_json(json("reals")), FormatError);
}

TEST(Serialization, ClaimRoundTrip)
{
    const ClaimRecord c{"t1", "residue field series", Status::inconclusive, 5, json{{"order", 4}}};
    const auto back = claim_from_json(claim_to_json(c));
    EXPECT_EQ(back.claim_id, c.claim_id);
    EXPECT_EQ(back.anchor, c.anchor);
    EXPECT_EQ(back.status, c.status);
    EXPECT_EQ(back.bound, c.bound);
    EXPECT_EQ(back.witness, c.witness);
}
