#pragma once

#include "sdchain/series.hpp"
#include "sdchain/verdict.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdchain {

using json = nlohmann::ordered_json;

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline json field_to_json(const FieldSpec& f)
{
    if (f.kind == FieldSpec::Kind::rationals)
        return "rationals";
    return json{{"prime", f.p}};
}

inline FieldSpec field_from_json(const json& j)
{
    if (j.is_string() && j.get<std::string>() == "rationals")
        return FieldSpec::rationals();
    if (j.is_object() && j.contains("prime") && j["prime"].is_number_unsigned())
        return FieldSpec::prime(j["prime"].get<std::uint32_t>());
    throw FormatError("field must be {\"prime\": p} or \"rationals\"");
}

namespace detail {

inline const json& require(const json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        throw FormatError(std::string("missing field '") + key + "'");
    return j[key];
}

inline std::size_t require_size(const json& j, const char* key)
{
    const auto& v = require(j, key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
        throw FormatError(std::string("field '") + key + "' must be a nonnegative integer");
    return v.get<std::size_t>();
}

template <Field F>
typename F::Element parse_element(const F& f, const json& v)
{
    if (!v.is_string())
        throw FormatError("field elements must be strings");
    try {
        return f.parse(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
}

inline json degrees_to_json(const std::vector<Degree>& deg)
{
    json out = json::array();
    for (Degree d : deg)
        out.push_back(d);
    return out;
}

inline std::vector<Degree> degrees_from_json(const json& j, std::size_t dim)
{
    if (!j.is_array() || j.size() != dim)
        throw FormatError("degrees must be an array with one entry per basis element");
    std::vector<Degree> out;
    for (const auto& v : j) {
        if (!v.is_number_integer())
            throw FormatError("degrees must be integers");
        out.push_back(v.get<Degree>());
    }
    return out;
}

}  // namespace detail

/// {"field", "dim", "mult": c[i][j][k] as strings, "labels", "grading"?}.
template <Field F>
json algebra_to_json(const FiniteLocalAlgebra<F>& a)
{
    const F& f = a.field();
    const std::size_t d = a.dim();
    json mult = json::array();
    for (std::size_t i = 0; i < d; ++i) {
        json plane = json::array();
        for (std::size_t j = 0; j < d; ++j) {
            json row = json::array();
            for (std::size_t k = 0; k < d; ++k)
                row.push_back(f.to_string(a.c(i, j, k)));
            plane.push_back(std::move(row));
        }
        mult.push_back(std::move(plane));
    }
    json out{{"field", field_to_json(a.field_spec())}, {"dim", d}, {"mult", std::move(mult)}, {"labels", a.labels()}};
    if (a.grading_rank() > 0)
        out["grading"] = json{{"rank", a.grading_rank()}, {"degrees", detail::degrees_to_json(a.degrees())}};
    return out;
}

/// Reads an algebra over `field`; the structure is not validated here.
template <Field F>
FiniteLocalAlgebra<F> algebra_from_json(const json& j, const F& field)
{
    const std::size_t d = detail::require_size(j, "dim");
    const auto& mult = detail::require(j, "mult");
    if (!mult.is_array() || mult.size() != d)
        throw FormatError("mult must be a dim x dim x dim array");
    std::vector<std::vector<std::vector<typename F::Element>>> c(d);
    for (std::size_t i = 0; i < d; ++i) {
        if (!mult[i].is_array() || mult[i].size() != d)
            throw FormatError("mult must be a dim x dim x dim array");
        c[i].resize(d);
        for (std::size_t jj = 0; jj < d; ++jj) {
            const auto& row = mult[i][jj];
            if (!row.is_array() || row.size() != d)
                throw FormatError("mult must be a dim x dim x dim array");
            for (std::size_t k = 0; k < d; ++k)
                c[i][jj].push_back(detail::parse_element(field, row[k]));
        }
    }
    std::vector<std::string> labels;
    if (j.contains("labels"))
        labels = j["labels"].get<std::vector<std::string>>();
    try {
        auto a = FiniteLocalAlgebra<F>::from_structure_constants(field, c, std::move(labels));
        if (j.contains("grading")) {
            const auto& g = j["grading"];
            const int rank = static_cast<int>(detail::require_size(g, "rank"));
            auto deg = detail::degrees_from_json(detail::require(g, "degrees"), d);
            if (a.is_homogeneous(deg))
                a = a.with_grading(rank, std::move(deg));
        }
        return a;
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
}

/// {"algebra_ref", "dim", "action": one dim x dim matrix per algebra basis element, "label", "degrees"?}.
template <Field F>
json module_to_json(const FiniteModule<F>& m, const std::string& algebra_ref = "algebra.json")
{
    const F& f = m.field();
    json action = json::array();
    for (const auto& a : m.actions()) {
        json mat = json::array();
        for (std::size_t r = 0; r < a.rows(); ++r) {
            json row = json::array();
            for (std::size_t c = 0; c < a.cols(); ++c)
                row.push_back(f.to_string(a(r, c)));
            mat.push_back(std::move(row));
        }
        action.push_back(std::move(mat));
    }
    json out{{"algebra_ref", algebra_ref}, {"dim", m.dim()}, {"action", std::move(action)}, {"label", m.label()}};
    if (m.graded())
        out["degrees"] = detail::degrees_to_json(m.degrees());
    return out;
}

template <Field F>
FiniteModule<F> module_from_json(const json& j, const AlgebraPtr<F>& a)
{
    const F& f = a->field();
    const std::size_t d = detail::require_size(j, "dim");
    const auto& action = detail::require(j, "action");
    if (!action.is_array() || action.size() != a->dim())
        throw FormatError("action must have one matrix per algebra basis element");
    std::vector<Matrix<F>> mats;
    for (const auto& mj : action) {
        if (!mj.is_array() || mj.size() != d)
            throw FormatError("action matrices must be dim x dim");
        Matrix<F> mat(f, d, d);
        for (std::size_t r = 0; r < d; ++r) {
            if (!mj[r].is_array() || mj[r].size() != d)
                throw FormatError("action matrices must be dim x dim");
            for (std::size_t c = 0; c < d; ++c)
                mat(r, c) = detail::parse_element(f, mj[r][c]);
        }
        mats.push_back(std::move(mat));
    }
    const std::string label = j.contains("label") ? j["label"].get<std::string>() : std::string();
    try {
        FiniteModule<F> m(a, std::move(mats), label);
        if (j.contains("degrees") && a->grading_rank() > 0)
            m = m.with_grading_if_compatible(detail::degrees_from_json(j["degrees"], d));
        return m;
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
}

inline json series_to_json(const TruncatedSeries& s) { return json{{"order", s.order()}, {"coeffs", s.coeffs()}}; }

inline TruncatedSeries series_from_json(const json& j)
{
    const auto coeffs = detail::require(j, "coeffs").get<std::vector<std::int64_t>>();
    if (coeffs.size() != detail::require_size(j, "order") + 1)
        throw FormatError("series order does not match the number of coefficients");
    return TruncatedSeries(coeffs);
}

inline json form_to_json(const RationalFormSpec& r)
{
    return json{{"numerator_factors", r.numerator_factors}, {"denominator_factors", r.denominator_factors}};
}

/// One checked statement: identifier, the statement it certifies, outcome and supporting data.
struct ClaimRecord {
    std::string claim_id;
    std::string anchor;
    Status status = Status::pass;
    std::size_t bound = 0;
    json witness = json::object();
};

inline json claim_to_json(const ClaimRecord& c)
{
    return json{{"claim_id", c.claim_id},
                {"anchor", c.anchor},
                {"status", to_string(c.status)},
                {"bound", c.bound},
                {"witness", c.witness}};
}

inline Status status_from_string(const std::string& s)
{
    if (s == "pass")
        return Status::pass;
    if (s == "fail")
        return Status::fail;
    if (s == "inconclusive")
        return Status::inconclusive;
    throw FormatError("unknown status '" + s + "'");
}

inline ClaimRecord claim_from_json(const json& j)
{
    ClaimRecord c;
    c.claim_id = detail::require(j, "claim_id").get<std::string>();
    c.anchor = detail::require(j, "anchor").get<std::string>();
    c.status = status_from_string(detail::require(j, "status").get<std::string>());
    c.bound = detail::require_size(j, "bound");
    c.witness = j.value("witness", json::object());
    return c;
}

inline json read_json_file(const std::filesystem::path& p)
{
    std::ifstream in(p);
    if (!in)
        throw FormatError("cannot open " + p.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError(p.string() + ": " + e.what());
    }
}

inline void write_json_file(const std::filesystem::path& p, const json& j)
{
    if (p.has_parent_path())
        std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out)
        throw std::runtime_error("cannot write " + p.string());
    out << j.dump(1) << '\n';
}

}  // namespace sdchain
