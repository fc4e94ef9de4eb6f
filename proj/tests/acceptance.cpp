// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
// Benchmark files are looked up in $FJSP_BENCHMARK_DIR, else data/benchmarks.
// Criteria that name specific benchmark files fail when those files are
// missing; the same check on a generated instance of equal shape is printed
// alongside for information only.

#include "fjsp/fjsp.hpp"
#include "support/benchmarks.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace fjsp;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(char const* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::set<support::Vec3> objective_set(std::vector<Individual> const& front)
{
    std::set<support::Vec3> s;
    for (auto const& ind : front) {
        s.insert({ ind.objectives[0], ind.objectives[1], ind.objectives[2] });
    }
    return s;
}

std::vector<std::string> missing_benchmarks(std::vector<std::string_view> const& names)
{
    std::vector<std::string> missing;
    for (auto name : names) {
        if (!support::load_benchmark(name)) {
            missing.emplace_back(name);
        }
    }
    return missing;
}

std::string join(std::vector<std::string> const& v)
{
    std::string out;
    for (auto const& s : v) {
        out += (out.empty() ? "" : " ") + s;
    }
    return out;
}

std::vector<std::string_view> const kBrdata { "Mk01", "Mk02", "Mk03", "Mk04", "Mk05", "Mk06", "Mk07", "Mk08", "Mk09", "Mk10" };

// ---------------------------------------------------------------------------

Outcome toy_exactness()
{
    auto const t0 = Clock::now();
    auto const inst = support::example3x3();
    auto const truth = support::exhaustive_pareto(inst);
    std::size_t exact = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        RunConfig cfg;
        cfg.population_size = 20;
        cfg.evaluation_budget = 2000;
        cfg.seed = seed;
        exact += objective_set(run(inst, cfg).front) == truth ? 1 : 0;
    }
    auto const secs = seconds_since(t0);
    return { exact == 5 && secs < 10.0,
        fmt("%zu/5 runs return the exhaustive Pareto set (%zu points); %.2f s total", exact, truth.size(), secs) };
}

Outcome decoder_witness()
{
    auto const inst = support::example3x3();
    auto const c = support::worked_chromosome();
    auto const l1 = decode_level1(c, inst);
    Rng rng(1);
    auto const l2 = evaluate(c, inst, rng, Level2Mode::Always);
    bool const ok = l1.objectives == ObjectiveVector { 10, 18, 8 } && l2.objectives == ObjectiveVector { 9, 20, 8 };
    return { ok,
        fmt("level-1 (%lld,%lld,%lld), level-2 (%lld,%lld,%lld)", (long long)l1.objectives[0], (long long)l1.objectives[1],
            (long long)l1.objectives[2], (long long)l2.objectives[0], (long long)l2.objectives[1], (long long)l2.objectives[2]) };
}

// Violations over `count` random chromosomes, level-1 and level-2 schedules.
std::size_t fuzz_violations(FjspInstance const& inst, std::size_t count, std::uint64_t seed)
{
    Rng rng(seed);
    std::size_t bad = 0;
    for (std::size_t t = 0; t < count; ++t) {
        auto const c = random_chromosome(inst, rng);
        auto const l1 = decode_level1(c, inst);
        auto const l2 = decode_level2(l1.chromosome, l1.schedule, l1.objectives, inst);
        bad += schedule_violations(l1.schedule, inst).empty() ? 0 : 1;
        bad += schedule_violations(l2.schedule, inst).empty() ? 0 : 1;
    }
    return bad;
}

Outcome feasibility_fuzzing()
{
    auto const missing = missing_benchmarks(kBrdata);
    auto const t0 = Clock::now();
    std::size_t bad = 0;
    if (missing.empty()) {
        for (auto name : kBrdata) {
            bad += fuzz_violations(*support::load_benchmark(name), 1000, support::benchmark_row(name).operations);
        }
        auto const secs = seconds_since(t0);
        return { bad == 0 && secs < 60.0, fmt("10 x 1000 chromosomes on Mk01-Mk10: %zu violations; %.1f s", bad, secs) };
    }
    for (auto name : kBrdata) {
        auto const& row = support::benchmark_row(name);
        bad += fuzz_violations(support::stand_in_instance(row, 1), 1000, row.operations);
    }
    auto const secs = seconds_since(t0);
    return { false,
        "benchmark files missing (" + join(missing) + ")"
            + fmt("; generated instances of the same shape: %zu violations in 10 x 1000, %.1f s", bad, secs) };
}

Outcome sorting_oracle()
{
    Rng rng(20);
    auto const refs = das_dennis(12);
    std::size_t sort_mismatch = 0, size_bad = 0, split_bad = 0, niche_bad = 0;
    for (int t = 0; t < 1000; ++t) {
        auto const n = 1 + rng.uniform_index(50);
        auto const range = static_cast<Time>(2 + rng.uniform_index(30));
        std::vector<ObjectiveVector> pop(n);
        std::vector<support::Vec3> v(n);
        for (std::size_t i = 0; i < n; ++i) {
            pop[i] = { static_cast<Time>(rng.uniform_index(range)), static_cast<Time>(rng.uniform_index(range)),
                static_cast<Time>(rng.uniform_index(range)) };
            v[i] = { pop[i][0], pop[i][1], pop[i][2] };
        }
        auto const fronts = fast_nondominated_sort(pop);
        sort_mismatch += fronts == support::peel_fronts(v) ? 0 : 1;

        auto const target = 1 + rng.uniform_index(n);
        auto const sel = environmental_selection(pop, target, refs, rng);
        std::set<std::size_t> chosen(sel.selected.begin(), sel.selected.end());
        size_bad += (sel.selected.size() == target && chosen.size() == target) ? 0 : 1;
        bool split = false;
        for (std::size_t f = 0; f < fronts.size(); ++f) {
            std::size_t in = 0;
            for (auto i : fronts[f]) {
                in += chosen.count(i);
            }
            bool const whole = f < sel.fronts_accepted_whole;
            bool const beyond = f > sel.fronts_accepted_whole;
            if ((whole && in != fronts[f].size()) || (beyond && in != 0)) {
                split = true;
            }
        }
        split_bad += split ? 1 : 0;
        if (!sel.associations.empty()) {
            std::vector<std::size_t> recount(refs.points.size(), 0);
            for (std::size_t c = 0; c < sel.candidates.size(); ++c) {
                recount[sel.associations[c].reference] += chosen.count(sel.candidates[c]);
            }
            niche_bad += recount == sel.niche_counts ? 0 : 1;
        }
    }
    return { sort_mismatch + size_bad + split_bad + niche_bad == 0,
        fmt("1000 populations: %zu sort mismatches, %zu wrong sizes, %zu split fronts, %zu niche-count mismatches",
            sort_mismatch, size_bad, split_bad, niche_bad) };
}

Outcome hypervolume_oracle()
{
    Rng rng(55);
    double worst_exact = 0.0;
    std::size_t exact_cases = 0;
    for (int t = 0; t < 5000; ++t) {
        auto const n = 1 + rng.uniform_index(4);
        std::vector<Point3> pts(n);
        for (auto& p : pts) {
            p = { rng.uniform01(), rng.uniform01(), rng.uniform01() };
        }
        worst_exact = std::max(worst_exact, std::abs(hypervolume_unit(pts) - support::inclusion_exclusion_hv(pts)));
        ++exact_cases;
    }
    std::size_t outside = 0;
    double worst_z = 0.0;
    for (int t = 0; t < 100; ++t) {
        // random front: the non-dominated subset of up to 10 random points
        std::vector<ObjectiveVector> raw(1 + rng.uniform_index(10));
        for (auto& p : raw) {
            p = { static_cast<Time>(rng.uniform_index(1000)), static_cast<Time>(rng.uniform_index(1000)),
                static_cast<Time>(rng.uniform_index(1000)) };
        }
        auto const front = nd_filter(raw);
        HvReference const ref { { 1000.0, 1000.0, 1000.0 } };
        auto const pts = normalize(front, ref);
        auto const mc = support::monte_carlo_hv(pts, 1'000'000, rng);
        double const exact = hypervolume3(front, ref);
        double const z = mc.standard_error > 0 ? std::abs(exact - mc.mean) / mc.standard_error : 0.0;
        worst_z = std::max(worst_z, z);
        outside += std::abs(exact - mc.mean) <= 3.0 * mc.standard_error + 1e-12 ? 0 : 1;
    }
    return { worst_exact <= 1e-12 && outside == 0,
        fmt("inclusion-exclusion on %zu fronts of <=4 points: max error %.1e; Monte Carlo on 100 fronts: %zu outside 3 SE "
            "(max |z| %.2f)",
            exact_cases, worst_exact, outside, worst_z) };
}

Outcome level2_contract()
{
    // A generated instance with Mk01's shape; the contract is instance-independent.
    auto const inst = support::stand_in_instance(support::benchmark_row("Mk01"), 6);
    Rng rng(606);
    std::size_t fired = 0, accepted = 0, broken = 0;
    for (int t = 0; t < 10'000; ++t) {
        auto const c = random_chromosome(inst, rng);
        auto const l1 = decode_level1(c, inst).objectives;
        auto const e = evaluate(c, inst, rng);
        fired += e.level2_fired ? 1 : 0;
        if (e.level2_accepted) {
            ++accepted;
            bool better = false;
            for (std::size_t k = 0; k < kNumObjectives; ++k) {
                better = better || e.objectives[k] < l1[k];
            }
            broken += (better && !dominates(l1, e.objectives)) ? 0 : 1;
        }
    }
    double const freq = fired / 10'000.0;
    return { broken == 0 && std::abs(freq - 0.3) <= 0.02,
        fmt("10000 evaluations: level-2 fired %.4f, accepted %zu, contract violations %zu", freq, accepted, broken) };
}

// Non-dominated archive of `budget` uniformly random chromosomes, evaluated
// exactly as the algorithm evaluates its offspring.
Front random_sampling(FjspInstance const& inst, std::size_t budget, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<ObjectiveVector> archive;
    for (std::size_t t = 0; t < budget; ++t) {
        auto const c = random_chromosome(inst, rng, { MaInit::Random, OsInit::Random });
        archive.push_back(evaluate(c, inst, rng).objectives);
        if (archive.size() >= 4096) {
            auto const f = nd_filter(archive);
            archive = f.points();
        }
    }
    return nd_filter(archive);
}

struct ProtocolStats {
    std::size_t wins = 0;
    double slowest_run = 0.0;
    bool fronts_nondominated = true;
};

ProtocolStats protocol_comparison(FjspInstance const& inst, std::size_t seeds)
{
    ProtocolStats s;
    for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
        RunConfig cfg;
        cfg.population_size = 100;
        cfg.evaluation_budget = 150'000;
        cfg.seed = seed;
        auto const t0 = Clock::now();
        auto const result = run(inst, cfg);
        s.slowest_run = std::max(s.slowest_run, seconds_since(t0));
        std::vector<ObjectiveVector> objs;
        for (auto const& ind : result.front) {
            objs.push_back(ind.objectives);
        }
        s.fronts_nondominated = s.fronts_nondominated && fast_nondominated_sort(objs).size() == 1;
        auto const ours = nd_filter(objs);
        auto const baseline = random_sampling(inst, 150'000, seed);
        auto const ref = reference_point(merge_runs(std::vector<Front> { ours, baseline }));
        s.wins += hypervolume3(ours, ref) > hypervolume3(baseline, ref) ? 1 : 0;
    }
    return s;
}

Outcome protocol_scale()
{
    auto const real = support::load_benchmark("Mk01");
    auto const inst = real.value_or(support::stand_in_instance(support::benchmark_row("Mk01"), 1));
    auto const s = protocol_comparison(inst, 30);
    auto const summary = fmt("%zu/30 paired wins over random sampling, slowest run %.1f s, fronts %s", s.wins,
        s.slowest_run, s.fronts_nondominated ? "non-dominated" : "NOT non-dominated");
    if (!real) {
        return { false, "benchmark file missing (Mk01); generated instance of the same shape: " + summary };
    }
    return { s.wins >= 29 && s.slowest_run < 300.0 && s.fronts_nondominated, "Mk01: " + summary };
}

// Third header field of a benchmark file, if present.
std::optional<double> declared_flexibility(std::string_view name)
{
    std::string lower(name);
    for (auto& c : lower) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    for (auto const& file : { std::string(name) + ".fjs", lower + ".fjs", std::string(name) + ".txt", lower + ".txt" }) {
        std::ifstream in(support::benchmark_dir() / file);
        if (!in) {
            continue;
        }
        std::string line;
        while (std::getline(in, line) && line.find_first_not_of(" \t\r") == std::string::npos) { }
        std::istringstream header(line);
        double n = 0, m = 0, flex = 0;
        if (header >> n >> m >> flex) {
            return flex;
        }
        return std::nullopt;
    }
    return std::nullopt;
}

Outcome paper_data()
{
    std::vector<ObjectiveVector> const mk06 {
        { 61, 427, 53 }, { 63, 428, 52 }, { 63, 435, 51 }, { 65, 453, 49 }, { 66, 451, 49 }, { 66, 457, 48 },
    };
    std::vector<ObjectiveVector> const mk10 {
        { 218, 1973, 195 }, { 218, 1991, 194 }, { 219, 1965, 195 }, { 220, 1984, 191 }, { 225, 1979, 194 },
        { 226, 1954, 196 }, { 226, 1974, 194 }, { 226, 1979, 192 }, { 228, 1973, 194 }, { 235, 1938, 199 },
        { 236, 1978, 193 },
    };
    bool const nd_ok = nd_filter(mk06).size() == mk06.size() && nd_filter(mk10).size() == mk10.size();
    std::string detail = fmt("published Mk06 (%zu) and Mk10 (%zu) vectors %s nd_filter", mk06.size(), mk10.size(),
        nd_ok ? "survive" : "do NOT survive");

    std::vector<std::string> missing, mismatched;
    for (auto const& row : support::kBenchmarkTable) {
        auto const inst = support::load_benchmark(row.name);
        if (!inst) {
            missing.emplace_back(row.name);
            continue;
        }
        auto const declared = declared_flexibility(row.name);
        double const flex = declared ? *declared : std::round(flexibility(*inst).value() * 10.0) / 10.0;
        if (inst->num_jobs() != row.jobs || inst->num_machines() != row.machines || inst->total_operations() != row.operations
            || std::abs(flex - row.flexibility) > 1e-9) {
            mismatched.push_back(fmt("%s(%zu,%zu,%zu,%.2f)", std::string(row.name).c_str(), inst->num_jobs(),
                inst->num_machines(), inst->total_operations(), flex));
        }
    }
    if (!missing.empty()) {
        detail += "; instance statistics unchecked, files missing: " + join(missing);
    }
    if (!mismatched.empty()) {
        detail += "; statistics differ: " + join(mismatched);
    }
    if (missing.empty() && mismatched.empty()) {
        detail += "; all 14 instance rows match";
    }
    return { nd_ok && missing.empty() && mismatched.empty(), detail };
}

Outcome determinism()
{
    auto const inst = support::example3x3();
    Campaign campaign;
    campaign.instance_name = "example3x3";
    campaign.runs = 5;
    campaign.run.population_size = 20;
    campaign.run.evaluation_budget = 500;
    campaign.master_seed = 2024;
    auto const solve_a = to_json(run_campaign(inst, campaign)).dump(2);
    auto const solve_b = to_json(run_campaign(inst, campaign)).dump(2);

    auto const wide = support::stand_in_instance(support::benchmark_row("Mk01"), 2);
    campaign.instance_name = "wide";
    auto const solve_c = to_json(run_campaign(wide, campaign)).dump(2);
    auto const solve_d = to_json(run_campaign(wide, campaign)).dump(2);

    TuneSpec spec;
    spec.budget = 20;
    spec.seed = 5;
    campaign.runs = 2;
    campaign.run.evaluation_budget = 200;
    auto const tune_a = to_json(tune_mutation(wide, spec, campaign), spec, campaign).dump(2);
    auto const tune_b = to_json(tune_mutation(wide, spec, campaign), spec, campaign).dump(2);
    bool const ok = solve_a == solve_b && solve_c == solve_d && tune_a == tune_b;
    return { ok, fmt("solve reports %s, tune reports %s (serial, same master seed)",
                     solve_a == solve_b && solve_c == solve_d ? "byte-identical" : "DIFFER",
                     tune_a == tune_b ? "byte-identical" : "DIFFER") };
}

} // namespace

int main()
{
    std::cout << "benchmark directory: " << support::benchmark_dir().string() << "\n";
    struct Criterion {
        int id;
        char const* name;
        std::function<Outcome()> check;
    };
    std::vector<Criterion> const criteria {
        { 1, "toy-instance exactness", toy_exactness },
        { 2, "decoder witness", decoder_witness },
        { 3, "feasibility fuzzing", feasibility_fuzzing },
        { 4, "sorting oracle", sorting_oracle },
        { 5, "hypervolume oracle", hypervolume_oracle },
        { 6, "level-2 acceptance contract", level2_contract },
        { 7, "protocol scale check", protocol_scale },
        { 8, "published-data consistency", paper_data },
        { 9, "determinism", determinism },
    };
    int failures = 0;
    for (auto const& c : criteria) {
        Outcome o;
        try {
            o = c.check();
        } catch (std::exception const& e) {
            o = { false, std::string("exception: ") + e.what() };
        }
        failures += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << o.detail << std::endl;
    }
    std::cout << (9 - failures) << "/9 criteria pass\n";
    return failures == 0 ? 0 : 1;
}
