#pragma once

#include "sdchain/example.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace sdchain::cli {

enum ExitCode : int { exit_pass = 0, exit_fail = 1, exit_inconclusive = 2, exit_usage = 64 };

inline int exit_code(Status s)
{
    switch (s) {
    case Status::pass:
        return exit_pass;
    case Status::fail:
        return exit_fail;
    case Status::inconclusive:
        return exit_inconclusive;
    }
    return exit_fail;
}

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    std::string command;
    std::string exponents;
    std::string field = std::to_string(PrimeField::default_characteristic);
    std::size_t bound = 8;
    std::size_t order = VerifyOptions{}.order;
    std::uint64_t seed = IsoOptions{}.seed;
    std::string format = "text";
    std::string out;
    std::string bundle;
    std::string module;
    bool bass = false;
    bool infer = false;
};

inline std::vector<std::size_t> parse_exponents(const std::string& csv)
{
    std::vector<std::size_t> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(item, &used);
        } catch (const std::exception&) {
            throw UsageError("--a expects comma-separated integers, got '" + csv + "'");
        }
        if (used != item.size() || v < 0)
            throw UsageError("--a expects comma-separated nonnegative integers, got '" + csv + "'");
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty())
        throw UsageError("--a needs at least one exponent");
    return out;
}

inline void print_report(std::ostream& out, const json& report, const std::string& format)
{
    if (format == "json") {
        out << report.dump(1) << '\n';
        return;
    }
    const auto& inst = report["instance"];
    out << "instance: exponents";
    for (const auto& a : inst["exponents"])
        out << ' ' << a.get<std::size_t>();
    out << "  field " << inst["field"].dump() << "  dim " << inst["dim"] << "  n " << inst["n"]
        << "  nilpotency_index " << inst["nilpotency_index"] << '\n';
    out << "bound " << report["bound"] << "  order " << report["order"] << "  seed " << report["seed"] << '\n';
    for (const auto& c : report["claims"])
        out << c["claim_id"].get<std::string>() << '\t' << c["status"].get<std::string>() << '\t' << c["bound"]
            << '\t' << c["anchor"].get<std::string>() << '\t' << c["witness"].dump() << '\n';
    out << "status " << report["status"].get<std::string>() << '\n';
}

template <Field F>
json full_report(const ExampleInstance<F>& inst, const VerifyOptions& opt, const VerificationReport& rep)
{
    json j = report_to_json(inst, opt, rep);
    j["instance"]["nilpotency_index"] = inst.algebra->nilpotency_index();
    return j;
}

inline int cmd_build(const RunConfig& cfg, std::ostream& out)
{
    ExampleSpec spec;
    spec.exponents = parse_exponents(cfg.exponents);
    try {
        spec.field = FieldSpec::parse(cfg.field);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    spec.bound = cfg.bound;
    spec.order = cfg.order;
    try {
        validate_example_spec(spec);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const VerifyOptions opt{spec.bound, spec.order, cfg.seed};
    return with_field(spec.field, [&](const auto& field) {
        using Fd = std::decay_t<decltype(field)>;
        const auto inst = build_example<Fd>(spec, field);
        if (cfg.format == "text")
            out << "dim " << inst.algebra->dim() << "\nn " << inst.n() << "\nnilpotency_index "
                << inst.algebra->nilpotency_index() << '\n';
        Session<Fd> session;
        const auto rep = verify_instance(inst, opt, session);
        const json report = full_report(inst, opt, rep);
        if (!cfg.out.empty()) {
            write_bundle(cfg.out, inst, opt);
            write_json_file(std::filesystem::path(cfg.out) / "report.json", report);
        }
        print_report(out, report, cfg.format);
        return exit_code(rep.status());
    });
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out)
{
    const std::filesystem::path dir(cfg.bundle);
    const FieldSpec fs = bundle_field(dir);
    return with_field(fs, [&](const auto& field) {
        using Fd = std::decay_t<decltype(field)>;
        const auto inst = read_bundle<Fd>(dir, field);
        const VerifyOptions opt{cfg.bound, cfg.order, cfg.seed};
        Session<Fd> session;
        const auto rep = verify_instance(inst, opt, session);
        const json report = full_report(inst, opt, rep);
        if (!cfg.out.empty())
            write_json_file(cfg.out, report);
        print_report(out, report, cfg.format);
        return exit_code(rep.status());
    });
}

inline int cmd_series(const RunConfig& cfg, std::ostream& out)
{
    if (cfg.bundle.empty() == cfg.exponents.empty())
        throw UsageError("series needs exactly one of --bundle or --a");
    const std::size_t order = cfg.order;
    auto run = [&](const auto& inst, const std::optional<std::filesystem::path>& dir) {
        using Fld = std::decay_t<decltype(inst.algebra->field())>;
        FiniteModule<Fld> m;
        try {
            m = named_module(inst, cfg.module, dir);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        Session<Fld> session;
        const TruncatedSeries s = cfg.bass ? bass_series(m, order, session) : poincare_series(m, order, session);
        std::optional<std::string> inferred;
        if (cfg.infer) {
            const std::size_t max_degree = std::max<std::size_t>(inst.n(), 1);
            const auto f = infer_rational_form(s, max_degree);
            inferred = f ? f->to_string() : std::string("none");
        }
        if (cfg.format == "json") {
            json j{{"module", cfg.module}, {"kind", cfg.bass ? "bass" : "poincare"}};
            const json sj = series_to_json(s);
            for (const auto& [k, v] : sj.items())
                j[k] = v;
            if (inferred)
                j["inferred"] = *inferred;
            out << j.dump() << '\n';
        } else {
            out << s.to_string() << '\n';
            if (inferred)
                out << "inferred " << *inferred << '\n';
        }
        return exit_pass;
    };
    if (!cfg.bundle.empty()) {
        const std::filesystem::path dir(cfg.bundle);
        return with_field(bundle_field(dir), [&](const auto& field) {
            using Fd = std::decay_t<decltype(field)>;
            return run(read_bundle<Fd>(dir, field), dir);
        });
    }
    ExampleSpec spec;
    spec.exponents = parse_exponents(cfg.exponents);
    try {
        spec.field = FieldSpec::parse(cfg.field);
        validate_example_spec(spec);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return with_field(spec.field, [&](const auto& field) {
        using Fd = std::decay_t<decltype(field)>;
        return run(build_example<Fd>(spec, field), std::nullopt);
    });
}

/// Entry point shared by the executable and the tests.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Semidualizing chains over Artinian local algebras"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--bound", cfg.bound, "homological bound")->check(CLI::PositiveNumber);
        sub->add_option("--order", cfg.order, "series truncation order")->check(CLI::PositiveNumber);
        sub->add_option("--seed", cfg.seed, "seed for randomized isomorphism tests");
        sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"json", "text"}));
    };

    auto* build = app.add_subcommand("build", "construct an example and verify it");
    build->add_option("--a", cfg.exponents, "exponents a_1,...,a_n")->required();
    build->add_option("--field", cfg.field, "prime p or Q");
    build->add_option("--out", cfg.out, "bundle directory");
    add_common(build);

    auto* verify = app.add_subcommand("verify", "verify a bundle");
    verify->add_option("bundle", cfg.bundle, "bundle directory")->required();
    verify->add_option("--out", cfg.out, "report file");
    add_common(verify);

    auto* series = app.add_subcommand("series", "Poincare or Bass series of a module");
    series->add_option("module", cfg.module, "k, R, D, C<i>, B<j> or a bundle module name")->required();
    series->add_option("--bundle", cfg.bundle, "bundle directory");
    series->add_option("--a", cfg.exponents, "exponents a_1,...,a_n");
    series->add_option("--field", cfg.field, "prime p or Q");
    series->add_flag("--bass", cfg.bass, "Bass series instead of Poincare series");
    series->add_flag("--infer", cfg.infer, "also print an inferred rational form");
    add_common(series);

    std::vector<std::string> storage{"sdchain"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage)
        argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_pass;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_pass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        if (build->parsed())
            return cmd_build(cfg, out);
        if (verify->parsed())
            return cmd_verify(cfg, out);
        return cmd_series(cfg, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return exit_fail;
    } catch (const MethodMismatch& e) {
        err << "error: " << e.what() << '\n';
        return exit_fail;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_fail;
    }
}

}  // namespace sdchain::cli
