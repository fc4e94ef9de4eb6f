#ifndef FJSP_DECODER_HPP
#define FJSP_DECODER_HPP

#include "fjsp/genome.hpp"
#include "fjsp/instance.hpp"
#include "fjsp/random.hpp"

#include <algorithm>
#include <array>
#include <compare>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

namespace fjsp {

/// Right end of the trailing idle interval of every machine.
inline constexpr Time kHorizon = std::numeric_limits<Time>::max();

/// Half-open time window [start, end).
struct Interval {
    Time start{};
    Time end{};

    friend bool operator==(Interval const&, Interval const&) = default;
};

struct Placement {
    OperationId operation{};
    MachineIndex machine{};
    Time start{};
    Time end{};

    friend bool operator==(Placement const&, Placement const&) = default;
};

/// Makespan, total workload and critical (maximum machine) workload; all
/// minimized.
struct ObjectiveVector {
    Time makespan{};
    Time total_workload{};
    Time critical_workload{};

    [[nodiscard]] constexpr Time operator[](std::size_t k) const
    {
        return k == 0 ? makespan : (k == 1 ? total_workload : critical_workload);
    }

    [[nodiscard]] constexpr std::array<Time, 3> as_array() const { return { makespan, total_workload, critical_workload }; }

    friend constexpr auto operator<=>(ObjectiveVector const&, ObjectiveVector const&) = default;
};

inline constexpr std::size_t kNumObjectives = 3;

/// Placements indexed by flat operation index, plus per-machine idle tables.
struct Schedule {
    std::vector<Placement> placements;
    std::vector<std::vector<Interval>> idle;

    friend bool operator==(Schedule const&, Schedule const&) = default;
};

/// True iff the operation fits in the interval once it is ready:
/// max(interval start, job ready) + duration <= interval end.
constexpr bool interval_feasible(Interval interval, Time job_ready, Time duration)
{
    auto const start = std::max(interval.start, job_ready);
    if (interval.end == kHorizon) {
        return true;
    }
    return start + duration <= interval.end;
}

inline ObjectiveVector objectives(Schedule const& schedule, std::size_t num_machines)
{
    std::vector<Time> workload(num_machines, 0);
    ObjectiveVector v;
    for (auto const& p : schedule.placements) {
        v.makespan = std::max(v.makespan, p.end);
        workload[p.machine] += p.end - p.start;
    }
    for (auto w : workload) {
        v.total_workload += w;
        v.critical_workload = std::max(v.critical_workload, w);
    }
    return v;
}

/// Per-machine flat operation indices ordered by start time.
inline std::vector<std::vector<std::size_t>> machine_sequences(Schedule const& schedule, std::size_t num_machines)
{
    std::vector<std::vector<std::size_t>> seq(num_machines);
    for (std::size_t f = 0; f < schedule.placements.size(); ++f) {
        seq[schedule.placements[f].machine].push_back(f);
    }
    for (auto& s : seq) {
        std::sort(s.begin(), s.end(), [&](std::size_t a, std::size_t b) {
            return schedule.placements[a].start < schedule.placements[b].start;
        });
    }
    return seq;
}

/// Gaps between the busy intervals of one machine, closed by the trailing
/// [last end, horizon) interval. `skip` leaves one operation out.
inline std::vector<Interval> idle_intervals(Schedule const& schedule, std::vector<std::size_t> const& sequence,
    std::optional<std::size_t> skip = std::nullopt)
{
    std::vector<Interval> idle;
    Time cursor = 0;
    for (auto f : sequence) {
        if (skip && *skip == f) {
            continue;
        }
        auto const& p = schedule.placements[f];
        if (p.start > cursor) {
            idle.push_back({ cursor, p.start });
        }
        cursor = std::max(cursor, p.end);
    }
    idle.push_back({ cursor, kHorizon });
    return idle;
}

inline void rebuild_idle_tables(Schedule& schedule, std::size_t num_machines)
{
    auto const seq = machine_sequences(schedule, num_machines);
    schedule.idle.assign(num_machines, {});
    for (std::size_t k = 0; k < num_machines; ++k) {
        schedule.idle[k] = idle_intervals(schedule, seq[k]);
    }
}

/// os ordered by start time; equal starts by machine, then job.
inline std::vector<Gene> os_by_start(Schedule const& schedule)
{
    std::vector<std::size_t> order(schedule.placements.size());
    std::iota(order.begin(), order.end(), std::size_t { 0 });
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        auto const& pa = schedule.placements[a];
        auto const& pb = schedule.placements[b];
        return std::tie(pa.start, pa.machine, pa.operation) < std::tie(pb.start, pb.machine, pb.operation);
    });
    std::vector<Gene> os;
    os.reserve(order.size());
    for (auto f : order) {
        os.push_back(static_cast<Gene>(schedule.placements[f].operation.job));
    }
    return os;
}

struct DecodeResult {
    Schedule schedule;
    ObjectiveVector objectives;
    Chromosome chromosome;
};

/// Places operations in os order on their assigned machines, each in the
/// earliest idle interval that can hold it. The returned chromosome has its os
/// re-sorted by start time.
inline DecodeResult decode_level1(Chromosome const& c, FjspInstance const& instance)
{
    auto const n = instance.total_operations();
    auto const m = instance.num_machines();
    Schedule schedule;
    schedule.placements.resize(n);
    schedule.idle.assign(m, std::vector<Interval> { { 0, kHorizon } });
    std::vector<Time> job_ready(instance.num_jobs(), 0);
    std::vector<std::size_t> next_op(instance.num_jobs(), 0);

    for (auto job : c.os) {
        OperationId const id { job, next_op[job]++ };
        auto const& alt = assigned_alternative(c, id, instance);
        auto& idle = schedule.idle[alt.machine];
        auto const ready = job_ready[job];
        // the trailing interval is unbounded, so a slot always exists
        auto it = std::find_if(idle.begin(), idle.end(), [&](Interval const& iv) {
            return interval_feasible(iv, ready, alt.duration);
        });
        auto const gap = *it;
        auto const start = std::max(gap.start, ready);
        auto const end = start + alt.duration;
        bool const head = start > gap.start;
        bool const tail = gap.end == kHorizon || end < gap.end;
        if (head && tail) {
            // split into two shorter intervals
            it->end = start;
            idle.insert(it + 1, Interval { end, gap.end });
        } else if (head) {
            it->end = start;
        } else if (tail) {
            it->start = end;
        } else {
            idle.erase(it);
        }
        schedule.placements[instance.flat_index(id)] = { id, alt.machine, start, end };
        job_ready[job] = end;
    }

    DecodeResult result;
    result.objectives = objectives(schedule, m);
    result.chromosome = Chromosome { os_by_start(schedule), c.ma };
    result.schedule = std::move(schedule);
    return result;
}

struct Level2Result {
    Schedule schedule;
    ObjectiveVector objectives;
    Chromosome chromosome;
    bool accepted = false;
};

namespace detail {

    // Completion time and workload per machine.
    struct MachineLoad {
        std::vector<Time> completion;
        std::vector<Time> workload;
    };

    inline MachineLoad machine_load(Schedule const& schedule, std::size_t num_machines)
    {
        MachineLoad load { std::vector<Time>(num_machines, 0), std::vector<Time>(num_machines, 0) };
        for (auto const& p : schedule.placements) {
            load.completion[p.machine] = std::max(load.completion[p.machine], p.end);
            load.workload[p.machine] += p.end - p.start;
        }
        return load;
    }

    inline bool any_better(ObjectiveVector const& now, ObjectiveVector const& before)
    {
        for (std::size_t k = 0; k < kNumObjectives; ++k) {
            if (now[k] < before[k]) {
                return true;
            }
        }
        return false;
    }

} // namespace detail

/// Second-level local search over a level-1 result.
///
/// Operations are visited in os order. An operation with a predecessor in its
/// job that starts later than the predecessor completes may move to the first
/// idle interval (machines ascending, intervals chronological) that fits it
/// without delaying its job successor and is "really available": on the same
/// machine it must start earlier; on another machine the new duration must be
/// shorter, or the source machine must attain the maximal completion time or
/// the maximal workload. The pass is kept only if some objective strictly
/// improves; otherwise the input is returned with `accepted == false`.
inline Level2Result decode_level2(Chromosome const& c, Schedule const& schedule, ObjectiveVector const& before,
    FjspInstance const& instance)
{
    auto const m = instance.num_machines();
    Schedule work = schedule;
    Chromosome updated = c;
    auto sequences = machine_sequences(work, m);
    auto load = detail::machine_load(work, m);
    bool moved = false;

    for (auto const id : operation_sequence(c, instance)) {
        if (id.op == 0) {
            continue;
        }
        auto const f = instance.flat_index(id);
        auto const pred = work.placements[f - 1];
        auto const current = work.placements[f];
        auto const ready = pred.end;
        if (current.start <= ready) {
            continue;
        }
        Time const successor_start = id.op + 1 < instance.num_operations(id.job) ? work.placements[f + 1].start : kHorizon;
        auto const source = current.machine;
        auto const source_duration = current.end - current.start;
        Time const max_completion = *std::max_element(load.completion.begin(), load.completion.end());
        Time const max_workload = *std::max_element(load.workload.begin(), load.workload.end());
        bool const source_critical_makespan = load.completion[source] == max_completion;
        bool const source_critical_workload = load.workload[source] == max_workload;

        // candidate machines in ascending index
        std::vector<Alternative> alts = instance.operation(id).alternatives;
        std::sort(alts.begin(), alts.end(), [](Alternative const& a, Alternative const& b) { return a.machine < b.machine; });

        std::optional<Placement> target;
        for (auto const& alt : alts) {
            bool const same = alt.machine == source;
            auto const idle = same ? idle_intervals(work, sequences[alt.machine], f) : idle_intervals(work, sequences[alt.machine]);
            for (auto const& iv : idle) {
                if (!interval_feasible(iv, ready, alt.duration)) {
                    continue;
                }
                auto const start = std::max(iv.start, ready);
                auto const end = start + alt.duration;
                if (end > successor_start) {
                    continue;
                }
                bool really = false;
                if (same) {
                    really = start < current.start;
                } else {
                    really = alt.duration < source_duration || source_critical_makespan || source_critical_workload;
                }
                if (really) {
                    target = Placement { id, alt.machine, start, end };
                    break;
                }
            }
            if (target) {
                break;
            }
        }
        if (!target) {
            continue;
        }

        moved = true;
        work.placements[f] = *target;
        auto& src_seq = sequences[source];
        src_seq.erase(std::find(src_seq.begin(), src_seq.end(), f));
        auto& dst_seq = sequences[target->machine];
        auto const pos = std::find_if(dst_seq.begin(), dst_seq.end(), [&](std::size_t g) { return work.placements[g].start > target->start; });
        dst_seq.insert(pos, f);
        updated.ma[f] = *alternative_index(instance, id, target->machine);

        load.workload[source] -= source_duration;
        load.workload[target->machine] += target->end - target->start;
        load.completion[source] = src_seq.empty() ? 0 : work.placements[src_seq.back()].end;
        load.completion[target->machine] = work.placements[dst_seq.back()].end;
    }

    if (moved) {
        auto const after = objectives(work, m);
        if (detail::any_better(after, before)) {
            rebuild_idle_tables(work, m);
            updated.os = os_by_start(work);
            return { std::move(work), after, std::move(updated), true };
        }
    }
    return { schedule, before, c, false };
}

inline constexpr double kLevel2Probability = 0.3;

struct Evaluation {
    ObjectiveVector objectives;
    Chromosome chromosome;
    Schedule schedule;
    bool level2_fired = false;
    bool level2_accepted = false;
};

enum class Level2Mode { Random, Always, Never };

/// One evaluation: level-1 decode, then a single level-2 attempt with
/// probability 0.3 (or as forced by `mode`).
inline Evaluation evaluate(Chromosome const& c, FjspInstance const& instance, Rng& rng, Level2Mode mode = Level2Mode::Random)
{
    auto l1 = decode_level1(c, instance);
    bool fire = false;
    switch (mode) {
    case Level2Mode::Random: fire = rng.bernoulli(kLevel2Probability); break;
    case Level2Mode::Always: fire = true; break;
    case Level2Mode::Never: fire = false; break;
    }
    if (!fire) {
        return { l1.objectives, std::move(l1.chromosome), std::move(l1.schedule), false, false };
    }
    auto l2 = decode_level2(l1.chromosome, l1.schedule, l1.objectives, instance);
    return { l2.objectives, std::move(l2.chromosome), std::move(l2.schedule), true, l2.accepted };
}

/// Violations of the schedule invariants: placement per operation, capability,
/// durations, precedence, no machine overlap, idle tables complementing the
/// busy time. Empty when feasible.
inline std::vector<std::string> schedule_violations(Schedule const& schedule, FjspInstance const& instance)
{
    std::vector<std::string> out;
    auto const n = instance.total_operations();
    auto const m = instance.num_machines();
    if (schedule.placements.size() != n) {
        out.push_back("placement count differs from the number of operations");
        return out;
    }
    for (std::size_t f = 0; f < n; ++f) {
        auto const& p = schedule.placements[f];
        auto const id = instance.operation_at(f);
        if (p.operation != id) {
            out.push_back("placement slot holds the wrong operation");
            continue;
        }
        auto const& alts = instance.operation(id).alternatives;
        auto it = std::find_if(alts.begin(), alts.end(), [&](Alternative const& a) { return a.machine == p.machine; });
        if (it == alts.end()) {
            out.push_back("operation placed on an incapable machine");
        } else if (p.end - p.start != it->duration) {
            out.push_back("placement length differs from the processing time");
        }
        if (p.start < 0) {
            out.push_back("negative start time");
        }
        if (id.op > 0 && p.start < schedule.placements[f - 1].end) {
            out.push_back("precedence violated");
        }
    }
    auto const seq = machine_sequences(schedule, m);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t a = 1; a < seq[k].size(); ++a) {
            if (schedule.placements[seq[k][a]].start < schedule.placements[seq[k][a - 1]].end) {
                out.push_back("overlap on machine " + std::to_string(k + 1));
            }
        }
        if (schedule.idle.size() == m && schedule.idle[k] != idle_intervals(schedule, seq[k])) {
            out.push_back("idle table of machine " + std::to_string(k + 1) + " does not complement its busy time");
        }
    }
    if (schedule.idle.size() != m) {
        out.push_back("idle table count differs from the machine count");
    }
    return out;
}

} // namespace fjsp

#endif
