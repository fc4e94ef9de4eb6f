#ifndef FJSP_EXPERIMENT_HPP
#define FJSP_EXPERIMENT_HPP

#include "fjsp/moea.hpp"

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace fjsp {

/// Repeated independent runs on one instance. Run r uses
/// derive_seed(master_seed, r).
struct Campaign {
    std::string instance_name;
    std::size_t runs = 30;
    RunConfig run;
    std::uint64_t master_seed = 1;
    std::size_t workers = 1;
    // fixed HV reference; when absent it is taken from the merged front
    std::optional<HvReference> hv_reference;
};

/// Kacem setting: population 100, 10,000 evaluations, mutation rates 0.6.
inline Campaign kacem_campaign()
{
    Campaign c;
    c.run.population_size = 100;
    c.run.evaluation_budget = 10'000;
    c.run.variation.p_insert = c.run.variation.p_swap1 = c.run.variation.p_swap2 = 0.6;
    return c;
}

/// BRdata setting: population 100, 150,000 evaluations.
inline Campaign brdata_campaign()
{
    Campaign c = kacem_campaign();
    c.run.evaluation_budget = 150'000;
    return c;
}

struct RunSummary {
    std::uint64_t seed{};
    Front front;
    std::size_t evaluations{};
};

struct WitnessedPoint {
    ObjectiveVector objectives;
    Chromosome chromosome;
    Schedule schedule;
    std::size_t run{};
};

struct CampaignReport {
    std::string instance_name;
    std::uint64_t master_seed{};
    RunConfig config;
    std::vector<RunSummary> runs;
    Front merged;
    std::vector<WitnessedPoint> witnesses; // parallel to merged.points()
    HvReference hv_reference;
    double hypervolume{};
    double wall_seconds{};
};

inline CampaignReport run_campaign(FjspInstance const& instance, Campaign const& campaign)
{
    if (campaign.runs < 1) {
        throw std::invalid_argument("campaign needs at least one run");
    }
    campaign.run.check();
    auto const t0 = std::chrono::steady_clock::now();

    std::vector<RunResult> results(campaign.runs);
    detail::parallel_for(campaign.runs, campaign.workers, [&](std::size_t r) {
        RunConfig cfg = campaign.run;
        cfg.seed = derive_seed(campaign.master_seed, r);
        if (r != 0) {
            cfg.observer = nullptr; // only the first run reports progress
        }
        results[r] = run(instance, cfg);
    });

    CampaignReport report;
    report.instance_name = campaign.instance_name;
    report.master_seed = campaign.master_seed;
    report.config = campaign.run;
    report.config.observer = nullptr;
    std::vector<Front> fronts;
    for (std::size_t r = 0; r < campaign.runs; ++r) {
        std::vector<ObjectiveVector> objs;
        for (auto const& ind : results[r].front) {
            objs.push_back(ind.objectives);
        }
        fronts.push_back(nd_filter(objs));
        report.runs.push_back({ derive_seed(campaign.master_seed, r), fronts.back(), results[r].evaluations });
    }
    report.merged = merge_runs(fronts);
    for (auto const& point : report.merged) {
        bool found = false;
        for (std::size_t r = 0; r < results.size() && !found; ++r) {
            for (auto const& ind : results[r].front) {
                if (ind.objectives == point) {
                    report.witnesses.push_back({ point, ind.chromosome, ind.schedule, r });
                    found = true;
                    break;
                }
            }
        }
    }
    report.hv_reference = campaign.hv_reference.value_or(reference_point(report.merged));
    report.hypervolume = hypervolume3(report.merged, report.hv_reference);
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

// ---------------------------------------------------------------------------
// Reports. Field order is fixed and all indices are 1-based.

using Json = nlohmann::ordered_json;

inline Json to_json(ObjectiveVector const& v) { return Json::array({ v.makespan, v.total_workload, v.critical_workload }); }

inline Json to_json(Chromosome const& c)
{
    Json os = Json::array();
    Json ma = Json::array();
    for (auto g : c.os) {
        os.push_back(g + 1);
    }
    for (auto g : c.ma) {
        ma.push_back(g + 1);
    }
    return Json { { "os", std::move(os) }, { "ma", std::move(ma) } };
}

/// Placements as {job, op, machine, start, end}, ordered by start time then
/// machine.
inline Json to_json(Schedule const& s)
{
    std::vector<Placement> ps = s.placements;
    std::sort(ps.begin(), ps.end(), [](Placement const& a, Placement const& b) {
        return std::tie(a.start, a.machine, a.operation) < std::tie(b.start, b.machine, b.operation);
    });
    Json out = Json::array();
    for (auto const& p : ps) {
        out.push_back(Json { { "job", p.operation.job + 1 }, { "op", p.operation.op + 1 }, { "machine", p.machine + 1 },
            { "start", p.start }, { "end", p.end } });
    }
    return out;
}

inline Json to_json(HvReference const& ref) { return Json::array({ ref.point[0], ref.point[1], ref.point[2] }); }

inline Json to_json(RunConfig const& cfg)
{
    Json j { { "population_size", cfg.population_size }, { "evaluation_budget", cfg.evaluation_budget },
        { "divisions", cfg.divisions }, { "crossover_probability", cfg.variation.crossover_probability },
        { "p_insert", cfg.variation.p_insert }, { "p_swap1", cfg.variation.p_swap1 }, { "p_swap2", cfg.variation.p_swap2 },
        { "machine_accept_worse", cfg.variation.machine_accept_worse } };
    j["xover_ma"] = cfg.variation.ma_crossover ? std::string(to_string(*cfg.variation.ma_crossover)) : "random";
    j["xover_os"] = cfg.variation.os_crossover ? std::string(to_string(*cfg.variation.os_crossover)) : "random";
    j["init_ma"] = cfg.init.ma_method ? std::string(to_string(*cfg.init.ma_method)) : "random-choice";
    j["init_os"] = cfg.init.os_method ? std::string(to_string(*cfg.init.os_method)) : "random-choice";
    return j;
}

inline Json to_json(Front const& f)
{
    Json out = Json::array();
    for (auto const& p : f) {
        out.push_back(to_json(p));
    }
    return out;
}

/// Campaign report. Wall time is left out unless asked for, so reports for the
/// same master seed are byte-identical.
inline Json to_json(CampaignReport const& r, bool include_timing = false)
{
    Json j;
    j["instance"] = r.instance_name;
    j["master_seed"] = r.master_seed;
    j["config"] = to_json(r.config);
    j["hypervolume"] = Json { { "value", r.hypervolume }, { "reference_point", to_json(r.hv_reference) },
        { "space", "reference-normalized" } };
    Json merged = Json::array();
    for (auto const& w : r.witnesses) {
        merged.push_back(Json { { "objectives", to_json(w.objectives) }, { "run", w.run + 1 },
            { "chromosome", to_json(w.chromosome) }, { "schedule", to_json(w.schedule) } });
    }
    j["merged_front"] = std::move(merged);
    Json runs = Json::array();
    for (std::size_t i = 0; i < r.runs.size(); ++i) {
        runs.push_back(Json { { "run", i + 1 }, { "seed", r.runs[i].seed }, { "evaluations", r.runs[i].evaluations },
            { "front", to_json(r.runs[i].front) } });
    }
    j["runs"] = std::move(runs);
    if (include_timing) {
        j["wall_seconds"] = r.wall_seconds;
    }
    return j;
}

inline void write_text(std::filesystem::path const& path, std::string const& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << text;
    if (!out) {
        throw std::runtime_error("failed writing " + path.string());
    }
}

/// Writes `report.json` and `front.csv` into `dir` (created if needed).
inline void report_emit(CampaignReport const& r, std::filesystem::path const& dir, bool include_timing = false)
{
    std::filesystem::create_directories(dir);
    write_text(dir / "report.json", to_json(r, include_timing).dump(2) + "\n");
    std::ostringstream csv;
    write_front_csv(csv, r.merged);
    write_text(dir / "front.csv", csv.str());
}

// ---------------------------------------------------------------------------
// Mutation-probability tuning: uniform sampling without replacement over the
// 11^3 grid of one-decimal probabilities, scored by merged-front hypervolume.

inline constexpr std::size_t kGridSteps = 11;
inline constexpr std::size_t kGridSize = kGridSteps * kGridSteps * kGridSteps;

struct MutationSetting {
    std::array<std::size_t, 3> tenths {}; // insert, swap1, swap2

    [[nodiscard]] double p_insert() const { return static_cast<double>(tenths[0]) / 10.0; }
    [[nodiscard]] double p_swap1() const { return static_cast<double>(tenths[1]) / 10.0; }
    [[nodiscard]] double p_swap2() const { return static_cast<double>(tenths[2]) / 10.0; }

    static MutationSetting from_grid_index(std::size_t index)
    {
        return { { index / (kGridSteps * kGridSteps), (index / kGridSteps) % kGridSteps, index % kGridSteps } };
    }

    friend bool operator==(MutationSetting const&, MutationSetting const&) = default;
};

struct TuneSpec {
    std::size_t budget = 200;
    std::uint64_t seed = 1; // drives configuration sampling
    std::size_t workers = 1;
};

struct TuneEntry {
    MutationSetting setting;
    Front merged;
    double hypervolume{};
};

struct TuneResult {
    MutationSetting best;
    std::size_t best_index{}; // into trace
    std::vector<TuneEntry> trace; // in sampling order
    HvReference hv_reference;
    double best_fraction{}; // share of sampled settings reaching the best HV
};

/// Grid indices of `budget` distinct settings, drawn uniformly without
/// replacement (partial Fisher-Yates).
inline std::vector<std::size_t> sample_grid(std::size_t budget, Rng& rng)
{
    if (budget < 1 || budget > kGridSize) {
        throw std::invalid_argument("tuning budget must lie in [1, 1331]");
    }
    std::vector<std::size_t> idx(kGridSize);
    std::iota(idx.begin(), idx.end(), std::size_t { 0 });
    for (std::size_t i = 0; i < budget; ++i) {
        std::swap(idx[i], idx[i + rng.uniform_index(kGridSize - i)]);
    }
    idx.resize(budget);
    return idx;
}

/// Every sampled setting runs the same inner campaign (same master seed);
/// hypervolumes share one reference point, 1.1x the maxima over all settings'
/// merged fronts unless the template fixes one.
inline TuneResult tune_mutation(FjspInstance const& instance, TuneSpec const& spec, Campaign const& inner)
{
    Rng rng(spec.seed);
    auto const grid = sample_grid(spec.budget, rng);
    TuneResult result;
    result.trace.resize(grid.size());
    detail::parallel_for(grid.size(), spec.workers, [&](std::size_t i) {
        Campaign c = inner;
        auto const setting = MutationSetting::from_grid_index(grid[i]);
        c.run.variation.p_insert = setting.p_insert();
        c.run.variation.p_swap1 = setting.p_swap1();
        c.run.variation.p_swap2 = setting.p_swap2();
        c.workers = 1;
        auto const report = run_campaign(instance, c);
        result.trace[i] = { setting, report.merged, 0.0 };
    });

    if (inner.hv_reference) {
        result.hv_reference = *inner.hv_reference;
    } else {
        std::vector<Front> all;
        for (auto const& e : result.trace) {
            all.push_back(e.merged);
        }
        result.hv_reference = reference_point(merge_runs(all));
    }
    double best = -1.0;
    for (std::size_t i = 0; i < result.trace.size(); ++i) {
        auto& e = result.trace[i];
        e.hypervolume = hypervolume3(e.merged, result.hv_reference);
        if (e.hypervolume > best) {
            best = e.hypervolume;
            result.best_index = i;
        }
    }
    result.best = result.trace[result.best_index].setting;
    std::size_t hits = 0;
    for (auto const& e : result.trace) {
        hits += e.hypervolume == best ? 1 : 0;
    }
    result.best_fraction = static_cast<double>(hits) / static_cast<double>(result.trace.size());
    return result;
}

inline Json to_json(TuneResult const& r, TuneSpec const& spec, Campaign const& inner)
{
    Json j;
    j["master_seed"] = inner.master_seed;
    j["sampling_seed"] = spec.seed;
    j["budget"] = spec.budget;
    j["inner_runs"] = inner.runs;
    j["inner_config"] = to_json(inner.run);
    j["reference_point"] = to_json(r.hv_reference);
    auto setting_json = [](MutationSetting const& s) {
        return Json { { "p_insert", s.p_insert() }, { "p_swap1", s.p_swap1() }, { "p_swap2", s.p_swap2() } };
    };
    j["best"] = setting_json(r.best);
    j["best_hypervolume"] = r.trace[r.best_index].hypervolume;
    j["best_fraction"] = r.best_fraction;
    Json trace = Json::array();
    for (auto const& e : r.trace) {
        Json row = setting_json(e.setting);
        row["hypervolume"] = e.hypervolume;
        row["front_size"] = e.merged.size();
        trace.push_back(std::move(row));
    }
    j["trace"] = std::move(trace);
    return j;
}

} // namespace fjsp

#endif
