#ifndef FJSP_GENOME_HPP
#define FJSP_GENOME_HPP

#include "fjsp/instance.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fjsp {

using Gene = std::uint32_t;

/// Two-vector chromosome.
///
/// `os` holds job indices, one entry per operation; the k-th occurrence of job
/// i stands for the k-th operation of that job. `ma` holds, in the fixed
/// job-by-job locus order, an index into each operation's alternative list.
/// Both are 0-based here and 1-based in any external text.
struct Chromosome {
    std::vector<Gene> os;
    std::vector<Gene> ma;

    friend bool operator==(Chromosome const&, Chromosome const&) = default;
};

/// Operation identities for every os position, in position order.
inline std::vector<OperationId> operation_sequence(Chromosome const& c, FjspInstance const& instance)
{
    std::vector<std::size_t> seen(instance.num_jobs(), 0);
    std::vector<OperationId> ops;
    ops.reserve(c.os.size());
    for (auto job : c.os) {
        ops.push_back({ job, seen[job]++ });
    }
    return ops;
}

/// Operation at a 0-based os position.
inline OperationId os_operation_at(Chromosome const& c, std::size_t position, FjspInstance const& instance)
{
    auto const job = c.os.at(position);
    std::size_t occurrence = 0;
    for (std::size_t p = 0; p < position; ++p) {
        occurrence += c.os[p] == job ? 1 : 0;
    }
    if (occurrence >= instance.num_operations(job)) {
        throw std::out_of_range("os position maps past the last operation of its job");
    }
    return { job, occurrence };
}

inline Alternative const& assigned_alternative(Chromosome const& c, OperationId op, FjspInstance const& instance)
{
    auto const& alts = instance.operation(op).alternatives;
    auto const k = c.ma.at(instance.flat_index(op));
    if (k >= alts.size()) {
        throw std::out_of_range("corrupt chromosome: ma entry outside the alternative list");
    }
    return alts[k];
}

inline MachineIndex assigned_machine(Chromosome const& c, OperationId op, FjspInstance const& instance)
{
    return assigned_alternative(c, op, instance).machine;
}

/// Index of `machine` in the alternative list of `op`, if capable.
inline std::optional<Gene> alternative_index(FjspInstance const& instance, OperationId op, MachineIndex machine)
{
    auto const& alts = instance.operation(op).alternatives;
    for (std::size_t k = 0; k < alts.size(); ++k) {
        if (alts[k].machine == machine) {
            return static_cast<Gene>(k);
        }
    }
    return std::nullopt;
}

enum class Violation {
    OsLength,
    OsJobOutOfRange,
    OsMultiset,
    MaLength,
    MaOutOfRange,
};

struct ValidationReport {
    Violation violation;
    std::string message;
};

/// Checks the os multiset and the ma ranges; returns the first violation.
inline std::optional<ValidationReport> validate(Chromosome const& c, FjspInstance const& instance)
{
    auto const n = instance.total_operations();
    if (c.os.size() != n) {
        return ValidationReport { Violation::OsLength,
            "os has length " + std::to_string(c.os.size()) + ", expected " + std::to_string(n) };
    }
    std::vector<std::size_t> counts(instance.num_jobs(), 0);
    for (std::size_t p = 0; p < c.os.size(); ++p) {
        if (c.os[p] >= instance.num_jobs()) {
            return ValidationReport { Violation::OsJobOutOfRange,
                "os position " + std::to_string(p + 1) + " names job " + std::to_string(c.os[p] + 1) };
        }
        ++counts[c.os[p]];
    }
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] != instance.num_operations(i)) {
            return ValidationReport { Violation::OsMultiset,
                "job " + std::to_string(i + 1) + " occurs " + std::to_string(counts[i]) + " times in os, expected "
                    + std::to_string(instance.num_operations(i)) };
        }
    }
    if (c.ma.size() != n) {
        return ValidationReport { Violation::MaLength,
            "ma has length " + std::to_string(c.ma.size()) + ", expected " + std::to_string(n) };
    }
    for (std::size_t f = 0; f < n; ++f) {
        auto const size = instance.operation(f).alternatives.size();
        if (c.ma[f] >= size) {
            auto const id = instance.operation_at(f);
            return ValidationReport { Violation::MaOutOfRange,
                "ma entry " + std::to_string(c.ma[f] + 1) + " for O(" + std::to_string(id.job + 1) + ","
                    + std::to_string(id.op + 1) + ") exceeds its " + std::to_string(size) + " alternatives" };
        }
    }
    return std::nullopt;
}

inline bool is_valid(Chromosome const& c, FjspInstance const& instance) { return !validate(c, instance).has_value(); }

} // namespace fjsp

#endif
