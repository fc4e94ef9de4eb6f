#ifndef FJSP_INITIALIZER_HPP
#define FJSP_INITIALIZER_HPP

#include "fjsp/genome.hpp"
#include "fjsp/instance.hpp"
#include "fjsp/random.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace fjsp {

enum class MaInit { Random, PRW, WRW };
enum class OsInit { Random, MWR, MOR, LPT, MRMO, MRMW };

inline constexpr std::array kMaInitMethods { MaInit::Random, MaInit::PRW, MaInit::WRW };
inline constexpr std::array kOsInitMethods { OsInit::Random, OsInit::MWR, OsInit::MOR, OsInit::LPT, OsInit::MRMO, OsInit::MRMW };

constexpr std::string_view to_string(MaInit m)
{
    switch (m) {
    case MaInit::Random: return "random";
    case MaInit::PRW: return "prw";
    case MaInit::WRW: return "wrw";
    }
    return "?";
}

constexpr std::string_view to_string(OsInit m)
{
    switch (m) {
    case OsInit::Random: return "random";
    case OsInit::MWR: return "mwr";
    case OsInit::MOR: return "mor";
    case OsInit::LPT: return "lpt";
    case OsInit::MRMO: return "mrmo";
    case OsInit::MRMW: return "mrmw";
    }
    return "?";
}

/// Optionally pins the method pair, e.g. for ablation runs.
struct InitMethodPair {
    std::optional<MaInit> ma_method;
    std::optional<OsInit> os_method;
};

/// Roulette weights used by PRW for one operation: 1 / duration.
inline std::vector<double> prw_weights(OperationSpec const& op)
{
    std::vector<double> w;
    w.reserve(op.alternatives.size());
    for (auto const& alt : op.alternatives) {
        w.push_back(1.0 / static_cast<double>(alt.duration));
    }
    return w;
}

/// Roulette weights used by WRW: 1 / (accumulated machine workload + duration).
inline std::vector<double> wrw_weights(OperationSpec const& op, std::vector<Time> const& workload)
{
    std::vector<double> w;
    w.reserve(op.alternatives.size());
    for (auto const& alt : op.alternatives) {
        w.push_back(1.0 / static_cast<double>(workload[alt.machine] + alt.duration));
    }
    return w;
}

inline std::vector<Gene> init_ma(MaInit method, FjspInstance const& instance, Rng& rng)
{
    auto const n = instance.total_operations();
    std::vector<Gene> ma(n, 0);
    std::vector<Time> workload(instance.num_machines(), 0);
    for (std::size_t f = 0; f < n; ++f) {
        auto const& op = instance.operation(f);
        std::size_t k = 0;
        switch (method) {
        case MaInit::Random:
            k = rng.uniform_index(op.alternatives.size());
            break;
        case MaInit::PRW: {
            auto const w = prw_weights(op);
            k = rng.roulette(w);
            break;
        }
        case MaInit::WRW: {
            auto const w = wrw_weights(op, workload);
            k = rng.roulette(w);
            workload[op.alternatives[k].machine] += op.alternatives[k].duration;
            break;
        }
        }
        ma[f] = static_cast<Gene>(k);
    }
    return ma;
}

namespace detail {

    // Bookkeeping shared by the dispatching rules: which operation of each job
    // comes next and what is still unplaced per job and per machine.
    struct DispatchState {
        FjspInstance const& instance;
        std::vector<Gene> const& ma;
        std::vector<std::size_t> next_op;
        std::vector<std::size_t> job_ops_left;
        std::vector<Time> job_work_left;
        std::vector<std::size_t> machine_ops_left;
        std::vector<Time> machine_work_left;

        DispatchState(FjspInstance const& inst, std::vector<Gene> const& assignment)
            : instance(inst)
            , ma(assignment)
            , next_op(inst.num_jobs(), 0)
            , job_ops_left(inst.num_jobs(), 0)
            , job_work_left(inst.num_jobs(), 0)
            , machine_ops_left(inst.num_machines(), 0)
            , machine_work_left(inst.num_machines(), 0)
        {
            for (std::size_t f = 0; f < inst.total_operations(); ++f) {
                auto const id = inst.operation_at(f);
                auto const& alt = assigned(id);
                ++job_ops_left[id.job];
                job_work_left[id.job] += alt.duration;
                ++machine_ops_left[alt.machine];
                machine_work_left[alt.machine] += alt.duration;
            }
        }

        [[nodiscard]] Alternative const& assigned(OperationId id) const
        {
            return instance.operation(id).alternatives[ma[instance.flat_index(id)]];
        }

        [[nodiscard]] bool has_next(std::size_t job) const { return next_op[job] < instance.num_operations(job); }
        [[nodiscard]] OperationId next(std::size_t job) const { return { job, next_op[job] }; }

        void place(std::size_t job)
        {
            auto const& alt = assigned(next(job));
            --job_ops_left[job];
            job_work_left[job] -= alt.duration;
            --machine_ops_left[alt.machine];
            machine_work_left[alt.machine] -= alt.duration;
            ++next_op[job];
        }
    };

    // Job with the largest key among those with an unplaced operation; lowest
    // index wins ties.
    template<typename Key>
    std::size_t argmax_job(DispatchState const& s, Key key)
    {
        std::size_t best = s.instance.num_jobs();
        for (std::size_t i = 0; i < s.instance.num_jobs(); ++i) {
            if (!s.has_next(i)) {
                continue;
            }
            if (best == s.instance.num_jobs() || key(i) > key(best)) {
                best = i;
            }
        }
        return best;
    }

    // Machine-first hierarchy of MRMO/MRMW: rank machines by `machine_key`
    // (descending, lower index on ties), take the first that hosts a currently
    // optional operation, then the job on it with the largest `job_key`.
    template<typename MachineKey, typename JobKey>
    std::size_t machine_then_job(DispatchState const& s, MachineKey machine_key, JobKey job_key)
    {
        auto const m = s.instance.num_machines();
        std::vector<MachineIndex> order(m);
        for (MachineIndex k = 0; k < m; ++k) {
            order[k] = k;
        }
        std::stable_sort(order.begin(), order.end(), [&](MachineIndex a, MachineIndex b) { return machine_key(a) > machine_key(b); });
        for (auto machine : order) {
            std::size_t best = s.instance.num_jobs();
            for (std::size_t i = 0; i < s.instance.num_jobs(); ++i) {
                if (!s.has_next(i) || s.assigned(s.next(i)).machine != machine) {
                    continue;
                }
                if (best == s.instance.num_jobs() || job_key(i) > job_key(best)) {
                    best = i;
                }
            }
            if (best != s.instance.num_jobs()) {
                return best;
            }
        }
        return s.instance.num_jobs(); // unreachable while operations remain
    }

} // namespace detail

/// Builds an os vector with the given dispatching rule. Every rule except
/// Random is deterministic given `ma`.
inline std::vector<Gene> init_os(OsInit method, std::vector<Gene> const& ma, FjspInstance const& instance, Rng& rng)
{
    auto const n = instance.total_operations();
    std::vector<Gene> os;
    os.reserve(n);

    if (method == OsInit::Random) {
        for (std::size_t i = 0; i < instance.num_jobs(); ++i) {
            os.insert(os.end(), instance.num_operations(i), static_cast<Gene>(i));
        }
        // Fisher-Yates
        for (std::size_t p = n; p > 1; --p) {
            std::swap(os[p - 1], os[rng.uniform_index(p)]);
        }
        return os;
    }

    detail::DispatchState s(instance, ma);
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t job = 0;
        switch (method) {
        case OsInit::MWR:
            job = detail::argmax_job(s, [&](std::size_t i) { return s.job_work_left[i]; });
            break;
        case OsInit::MOR:
            job = detail::argmax_job(s, [&](std::size_t i) { return s.job_ops_left[i]; });
            break;
        case OsInit::LPT:
            job = detail::argmax_job(s, [&](std::size_t i) { return s.assigned(s.next(i)).duration; });
            break;
        case OsInit::MRMO:
            job = detail::machine_then_job(
                s, [&](MachineIndex k) { return s.machine_ops_left[k]; }, [&](std::size_t i) { return s.job_ops_left[i]; });
            break;
        case OsInit::MRMW:
            job = detail::machine_then_job(
                s, [&](MachineIndex k) { return s.machine_work_left[k]; }, [&](std::size_t i) { return s.job_work_left[i]; });
            break;
        case OsInit::Random:
            break;
        }
        os.push_back(static_cast<Gene>(job));
        s.place(job);
    }
    return os;
}

/// One individual with its method pair drawn uniformly (unless pinned).
inline Chromosome random_chromosome(FjspInstance const& instance, Rng& rng, InitMethodPair const& pinned = {})
{
    auto const ma_method = pinned.ma_method.value_or(kMaInitMethods[rng.uniform_index(kMaInitMethods.size())]);
    auto const os_method = pinned.os_method.value_or(kOsInitMethods[rng.uniform_index(kOsInitMethods.size())]);
    Chromosome c;
    c.ma = init_ma(ma_method, instance, rng);
    c.os = init_os(os_method, c.ma, instance, rng);
    return c;
}

/// Initial population. Each individual is built from its own stream split off
/// `rng`, so individuals can be generated independently.
inline std::vector<Chromosome> generate_population(
    std::size_t size, FjspInstance const& instance, Rng& rng, InitMethodPair const& pinned = {})
{
    if (size == 0) {
        throw std::invalid_argument("population size must be at least 1");
    }
    std::vector<Chromosome> pop;
    pop.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
        Rng local(rng.split());
        pop.push_back(random_chromosome(instance, local, pinned));
    }
    return pop;
}

} // namespace fjsp

#endif
