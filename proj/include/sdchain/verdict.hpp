#pragma once

#include <cstddef>
#include <string>
#include <utility>

namespace sdchain {

enum class Status { pass, fail, inconclusive };

inline const char* to_string(Status s)
{
    switch (s) {
    case Status::pass:
        return "pass";
    case Status::fail:
        return "fail";
    case Status::inconclusive:
        return "inconclusive";
    }
    return "?";
}

/// Worst of two outcomes: fail beats inconclusive beats pass.
inline Status combine(Status a, Status b)
{
    if (a == Status::fail || b == Status::fail)
        return Status::fail;
    if (a == Status::inconclusive || b == Status::inconclusive)
        return Status::inconclusive;
    return Status::pass;
}

/// Outcome of a bounded homological check.  `bound` is the largest degree examined.
struct Verdict {
    Status status = Status::pass;
    std::size_t bound = 0;
    std::string detail;

    bool holds() const { return status == Status::pass; }
    explicit operator bool() const { return holds(); }

    static Verdict pass(std::size_t bound, std::string detail = {}) { return {Status::pass, bound, std::move(detail)}; }
    static Verdict fail(std::size_t bound, std::string detail) { return {Status::fail, bound, std::move(detail)}; }
    static Verdict inconclusive(std::size_t bound, std::string detail)
    {
        return {Status::inconclusive, bound, std::move(detail)};
    }
};

}  // namespace sdchain
