#ifndef FJSP_INSTANCE_HPP
#define FJSP_INSTANCE_HPP

#include <cstddef>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fjsp {

using Time = std::int64_t;
using MachineIndex = std::uint32_t; // 0-based internally, printed 1-based

/// One (machine, processing time) pair an operation may be run with.
struct Alternative {
    MachineIndex machine{};
    Time duration{};

    friend bool operator==(Alternative const&, Alternative const&) = default;
};

struct OperationSpec {
    std::vector<Alternative> alternatives;

    friend bool operator==(OperationSpec const&, OperationSpec const&) = default;
};

struct Job {
    std::vector<OperationSpec> operations;

    friend bool operator==(Job const&, Job const&) = default;
};

/// Identity of O_ij with 0-based job and operation indices.
struct OperationId {
    std::size_t job{};
    std::size_t op{};

    friend auto operator<=>(OperationId const&, OperationId const&) = default;
};

class InstanceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public InstanceError {
public:
    ParseError(std::size_t line, std::string const& what)
        : InstanceError("line " + std::to_string(line) + ": " + what)
        , line_(line)
    {
    }

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Average number of alternatives per operation, kept as an exact ratio.
struct Flexibility {
    std::size_t alternatives{};
    std::size_t operations{};

    [[nodiscard]] double value() const
    {
        return static_cast<double>(alternatives) / static_cast<double>(operations);
    }

    friend bool operator==(Flexibility const& a, Flexibility const& b)
    {
        return a.alternatives * b.operations == b.alternatives * a.operations;
    }
};

/// Immutable flexible job-shop problem data.
///
/// Operations are also addressed by a flat index that runs job by job and
/// operation by operation; this is the fixed locus order of the machine
/// assignment vector.
class FjspInstance {
public:
    FjspInstance(std::size_t num_machines, std::vector<Job> jobs)
        : num_machines_(num_machines)
        , jobs_(std::move(jobs))
    {
        if (num_machines_ == 0) {
            throw InstanceError("instance needs at least one machine");
        }
        if (jobs_.empty()) {
            throw InstanceError("instance needs at least one job");
        }
        for (std::size_t i = 0; i < jobs_.size(); ++i) {
            auto const& job = jobs_[i];
            if (job.operations.empty()) {
                throw InstanceError("job " + std::to_string(i + 1) + " has no operations");
            }
            first_flat_.push_back(flat_job_.size());
            for (std::size_t j = 0; j < job.operations.size(); ++j) {
                auto const& alts = job.operations[j].alternatives;
                auto const tag = "O(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
                if (alts.empty()) {
                    throw InstanceError(tag + " has no alternative machines");
                }
                std::vector<bool> seen(num_machines_, false);
                for (auto const& alt : alts) {
                    if (alt.machine >= num_machines_) {
                        throw InstanceError(tag + " names machine " + std::to_string(alt.machine + 1)
                            + " outside [1," + std::to_string(num_machines_) + "]");
                    }
                    if (seen[alt.machine]) {
                        throw InstanceError(tag + " lists machine " + std::to_string(alt.machine + 1) + " twice");
                    }
                    seen[alt.machine] = true;
                    if (alt.duration <= 0) {
                        throw InstanceError(tag + " has a nonpositive duration");
                    }
                }
                flat_job_.push_back(i);
                flat_op_.push_back(j);
            }
        }
    }

    [[nodiscard]] std::size_t num_jobs() const noexcept { return jobs_.size(); }
    [[nodiscard]] std::size_t num_machines() const noexcept { return num_machines_; }
    [[nodiscard]] std::vector<Job> const& jobs() const noexcept { return jobs_; }
    [[nodiscard]] Job const& job(std::size_t i) const { return jobs_.at(i); }
    [[nodiscard]] std::size_t num_operations(std::size_t job) const { return jobs_.at(job).operations.size(); }

    /// N, the number of operations over all jobs.
    [[nodiscard]] std::size_t total_operations() const noexcept { return flat_job_.size(); }

    [[nodiscard]] std::size_t flat_index(OperationId id) const { return first_flat_[id.job] + id.op; }
    [[nodiscard]] OperationId operation_at(std::size_t flat) const { return { flat_job_[flat], flat_op_[flat] }; }

    [[nodiscard]] OperationSpec const& operation(OperationId id) const { return jobs_[id.job].operations[id.op]; }
    [[nodiscard]] OperationSpec const& operation(std::size_t flat) const { return operation(operation_at(flat)); }

    [[nodiscard]] Flexibility flexibility() const
    {
        std::size_t alts = 0;
        for (auto const& job : jobs_) {
            for (auto const& op : job.operations) {
                alts += op.alternatives.size();
            }
        }
        return { alts, total_operations() };
    }

    friend bool operator==(FjspInstance const& a, FjspInstance const& b)
    {
        return a.num_machines_ == b.num_machines_ && a.jobs_ == b.jobs_;
    }

private:
    std::size_t num_machines_;
    std::vector<Job> jobs_;
    std::vector<std::size_t> first_flat_;
    std::vector<std::size_t> flat_job_;
    std::vector<std::size_t> flat_op_;
};

inline std::size_t total_operations(FjspInstance const& instance) { return instance.total_operations(); }
inline Flexibility flexibility(FjspInstance const& instance) { return instance.flexibility(); }

namespace detail {
    inline bool parse_integer(std::string_view token, long long& out)
    {
        if (token.empty()) {
            return false;
        }
        std::size_t pos = 0;
        bool negative = false;
        if (token[0] == '-' || token[0] == '+') {
            negative = token[0] == '-';
            pos = 1;
        }
        if (pos == token.size()) {
            return false;
        }
        long long value = 0;
        for (; pos < token.size(); ++pos) {
            char const c = token[pos];
            if (c < '0' || c > '9') {
                return false;
            }
            value = value * 10 + (c - '0');
        }
        out = negative ? -value : value;
        return true;
    }

    inline std::vector<std::string> split_tokens(std::string const& line)
    {
        std::vector<std::string> tokens;
        std::istringstream ss(line);
        std::string tok;
        while (ss >> tok) {
            tokens.push_back(tok);
        }
        return tokens;
    }
} // namespace detail

/// Parses the standard `.fjs` benchmark text format.
///
/// Line 1 is `n m [avg_flex]`; the flexibility field is ignored. Each of the
/// next n non-blank lines describes one job: the operation count, then per
/// operation the alternative count followed by that many `machine duration`
/// pairs with 1-based machine numbers. Alternatives keep their file order.
inline FjspInstance parse_fjs(std::istream& in)
{
    std::string line;
    std::size_t line_no = 0;

    auto next_content_line = [&](std::vector<std::string>& tokens) {
        while (std::getline(in, line)) {
            ++line_no;
            tokens = detail::split_tokens(line);
            if (!tokens.empty()) {
                return true;
            }
        }
        return false;
    };

    std::vector<std::string> tokens;
    if (!next_content_line(tokens)) {
        throw ParseError(line_no == 0 ? 1 : line_no, "missing header `n m [flexibility]`");
    }
    if (tokens.size() < 2 || tokens.size() > 3) {
        throw ParseError(line_no, "malformed header: expected `n m [flexibility]`");
    }
    long long n = 0;
    long long m = 0;
    if (!detail::parse_integer(tokens[0], n) || !detail::parse_integer(tokens[1], m) || n < 1 || m < 1) {
        throw ParseError(line_no, "malformed header: job and machine counts must be positive integers");
    }
    if (tokens.size() == 3) {
        try {
            std::size_t used = 0;
            (void)std::stod(tokens[2], &used);
            if (used != tokens[2].size()) {
                throw std::invalid_argument("trailing characters");
            }
        } catch (std::exception const&) {
            throw ParseError(line_no, "malformed header: flexibility field is not a number");
        }
    }

    std::vector<Job> jobs;
    jobs.reserve(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) {
        if (!next_content_line(tokens)) {
            throw ParseError(line_no + 1, "expected " + std::to_string(n) + " job lines, found " + std::to_string(i));
        }
        std::vector<long long> values;
        values.reserve(tokens.size());
        for (auto const& tok : tokens) {
            long long v = 0;
            if (!detail::parse_integer(tok, v)) {
                throw ParseError(line_no, "non-integer token `" + tok + "`");
            }
            values.push_back(v);
        }
        std::size_t pos = 0;
        auto take = [&](char const* what) {
            if (pos >= values.size()) {
                throw ParseError(line_no, std::string("job line too short: missing ") + what);
            }
            return values[pos++];
        };
        auto const num_ops = take("operation count");
        if (num_ops < 1) {
            throw ParseError(line_no, "job must have at least one operation");
        }
        Job job;
        for (long long j = 0; j < num_ops; ++j) {
            auto const num_alts = take("alternative count");
            if (num_alts < 1) {
                throw ParseError(line_no, "operation must have at least one alternative");
            }
            OperationSpec spec;
            for (long long k = 0; k < num_alts; ++k) {
                auto const machine = take("machine index");
                auto const duration = take("duration");
                if (machine < 1 || machine > m) {
                    throw ParseError(line_no, "machine index " + std::to_string(machine) + " outside [1," + std::to_string(m) + "]");
                }
                if (duration <= 0) {
                    throw ParseError(line_no, "nonpositive duration " + std::to_string(duration));
                }
                for (auto const& alt : spec.alternatives) {
                    if (alt.machine == static_cast<MachineIndex>(machine - 1)) {
                        throw ParseError(line_no, "machine " + std::to_string(machine) + " listed twice for one operation");
                    }
                }
                spec.alternatives.push_back({ static_cast<MachineIndex>(machine - 1), static_cast<Time>(duration) });
            }
            job.operations.push_back(std::move(spec));
        }
        if (pos != values.size()) {
            throw ParseError(line_no, "job line has " + std::to_string(values.size() - pos) + " extra tokens");
        }
        jobs.push_back(std::move(job));
    }
    return FjspInstance(static_cast<std::size_t>(m), std::move(jobs));
}

inline FjspInstance parse_fjs(std::string_view text)
{
    std::istringstream in { std::string(text) };
    return parse_fjs(in);
}

/// Writes the instance in `.fjs` format. The header carries the average
/// flexibility with two decimals.
inline void write_fjs(std::ostream& out, FjspInstance const& instance)
{
    auto const flex = instance.flexibility();
    std::ostringstream f;
    f.setf(std::ios::fixed);
    f.precision(2);
    f << flex.value();
    out << instance.num_jobs() << ' ' << instance.num_machines() << ' ' << f.str() << '\n';
    for (auto const& job : instance.jobs()) {
        out << job.operations.size();
        for (auto const& op : job.operations) {
            out << ' ' << op.alternatives.size();
            for (auto const& alt : op.alternatives) {
                out << ' ' << alt.machine + 1 << ' ' << alt.duration;
            }
        }
        out << '\n';
    }
}

inline std::string to_fjs(FjspInstance const& instance)
{
    std::ostringstream out;
    write_fjs(out, instance);
    return out.str();
}

} // namespace fjsp

#endif
