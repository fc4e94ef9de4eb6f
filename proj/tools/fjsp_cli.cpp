#include "fjsp/fjsp.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <string>

namespace {

template<typename Enum, std::size_t N>
std::map<std::string, Enum> name_map(std::array<Enum, N> const& values)
{
    std::map<std::string, Enum> m;
    for (auto v : values) {
        m.emplace(std::string(fjsp::to_string(v)), v);
    }
    return m;
}

fjsp::FjspInstance load_instance(std::string const& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open instance file " + path);
    }
    try {
        return fjsp::parse_fjs(in);
    } catch (fjsp::ParseError const& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

fjsp::Front load_front(std::string const& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open front file " + path);
    }
    return fjsp::nd_filter(fjsp::read_points_csv(in));
}

std::string stem_of(std::string const& path) { return std::filesystem::path(path).stem().string(); }

// Options shared by `solve` and `tune`.
struct CommonOptions {
    std::string instance_path;
    std::size_t pop = 100;
    std::size_t evals = 10'000;
    std::uint64_t seed = 1;
    std::size_t runs = 30;
    std::size_t divisions = 12;
    std::size_t threads = 1;
    std::string ref_front;
    std::string out_dir;
    std::string init_ma, init_os, xover_ma, xover_os;

    void add_to(CLI::App& app)
    {
        app.add_option("instance", instance_path, "Instance in .fjs format")->required()->check(CLI::ExistingFile);
        app.add_option("--pop", pop, "Population size")->check(CLI::PositiveNumber);
        app.add_option("--evals", evals, "Evaluation budget per run")->check(CLI::PositiveNumber);
        app.add_option("--seed", seed, "Master seed");
        app.add_option("--runs", runs, "Independent runs")->check(CLI::PositiveNumber);
        app.add_option("--divisions", divisions, "Reference-point divisions")->check(CLI::PositiveNumber);
        app.add_option("--threads", threads, "Worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
        app.add_option("--ref-front", ref_front, "CSV front fixing the hypervolume reference point")->check(CLI::ExistingFile);
        app.add_option("--out", out_dir, "Output directory");
        auto names = [](auto const& m) {
            std::vector<std::string> v;
            for (auto const& [k, _] : m) {
                v.push_back(k);
            }
            return v;
        };
        app.add_option("--init-ma", init_ma, "Pin the machine-assignment initializer")
            ->check(CLI::IsMember(names(name_map(fjsp::kMaInitMethods))));
        app.add_option("--init-os", init_os, "Pin the operation-sequence initializer")
            ->check(CLI::IsMember(names(name_map(fjsp::kOsInitMethods))));
        app.add_option("--xover-ma", xover_ma, "Pin the machine-assignment crossover")
            ->check(CLI::IsMember(names(name_map(fjsp::kMaCrossovers))));
        app.add_option("--xover-os", xover_os, "Pin the operation-sequence crossover")
            ->check(CLI::IsMember(names(name_map(fjsp::kOsCrossovers))));
    }

    fjsp::Campaign campaign() const
    {
        fjsp::Campaign c;
        c.instance_name = stem_of(instance_path);
        c.runs = runs;
        c.master_seed = seed;
        c.run.population_size = pop;
        c.run.evaluation_budget = evals;
        c.run.divisions = divisions;
        c.workers = threads;
        if (!init_ma.empty()) {
            c.run.init.ma_method = name_map(fjsp::kMaInitMethods).at(init_ma);
        }
        if (!init_os.empty()) {
            c.run.init.os_method = name_map(fjsp::kOsInitMethods).at(init_os);
        }
        if (!xover_ma.empty()) {
            c.run.variation.ma_crossover = name_map(fjsp::kMaCrossovers).at(xover_ma);
        }
        if (!xover_os.empty()) {
            c.run.variation.os_crossover = name_map(fjsp::kOsCrossovers).at(xover_os);
        }
        if (!ref_front.empty()) {
            c.hv_reference = fjsp::reference_point(load_front(ref_front));
        }
        return c;
    }
};

void check_one_decimal(double p, char const* name)
{
    double const scaled = p * 10.0;
    if (p < 0.0 || p > 1.0 || std::abs(scaled - std::round(scaled)) > 1e-9) {
        throw CLI::ValidationError(std::string(name), "must be one of 0.0, 0.1, ..., 1.0");
    }
}

void print_hv(std::ostream& out, double hv, fjsp::HvReference const& ref)
{
    out << std::setprecision(10) << "hypervolume " << hv << " reference " << ref.point[0] << ',' << ref.point[1] << ','
        << ref.point[2] << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app { "Multi-objective flexible job-shop solver (NSGA-III with idle-time local search)" };
    app.require_subcommand(1);

    CommonOptions solve_opts;
    double p_insert = 0.6, p_swap1 = 0.6, p_swap2 = 0.6;
    bool verbose = false;
    bool timing = false;
    auto* solve = app.add_subcommand("solve", "Run a multi-run campaign and report the merged front");
    solve_opts.add_to(*solve);
    solve->add_option("--p-insert", p_insert, "Insertion mutation probability");
    solve->add_option("--p-swap1", p_swap1, "One-point swap mutation probability");
    solve->add_option("--p-swap2", p_swap2, "Two-point swap mutation probability");
    solve->add_flag("--verbose", verbose, "Per-generation log on stderr");
    solve->add_flag("--timing", timing, "Include wall time in report.json");

    CommonOptions tune_opts;
    tune_opts.runs = 3;
    tune_opts.evals = 10'000;
    std::size_t budget = 200;
    std::uint64_t tune_seed = 1;
    auto* tune = app.add_subcommand("tune", "Search the one-decimal grid of mutation probabilities");
    tune_opts.add_to(*tune);
    tune->add_option("--budget", budget, "Distinct settings to evaluate (at most 1331)")->check(CLI::Range(1, 1331));
    tune->add_option("--tune-seed", tune_seed, "Seed for sampling settings");

    std::string front_csv, ref_csv;
    auto* hv = app.add_subcommand("hv", "Hypervolume of a CSV front");
    hv->add_option("front", front_csv, "Front CSV (f1,f2,f3)")->required()->check(CLI::ExistingFile);
    hv->add_option("--ref-front", ref_csv, "Reference front CSV")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        return app.exit(e);
    }

    try {
        if (*solve) {
            check_one_decimal(p_insert, "--p-insert");
            check_one_decimal(p_swap1, "--p-swap1");
            check_one_decimal(p_swap2, "--p-swap2");
            auto const instance = load_instance(solve_opts.instance_path);
            auto campaign = solve_opts.campaign();
            campaign.run.variation.p_insert = p_insert;
            campaign.run.variation.p_swap1 = p_swap1;
            campaign.run.variation.p_swap2 = p_swap2;
            if (verbose) {
                // logged for the first run only
                campaign.run.observer = [](fjsp::GenerationStats const& s) {
                    std::cerr << "gen " << s.generation << " evals " << s.evaluations << " front " << s.front_size
                              << " hv " << std::setprecision(8) << s.hypervolume << '\n';
                };
            }
            auto const report = fjsp::run_campaign(instance, campaign);
            if (!solve_opts.out_dir.empty()) {
                fjsp::report_emit(report, solve_opts.out_dir, timing);
            }
            fjsp::write_front_csv(std::cout, report.merged);
            print_hv(std::cout, report.hypervolume, report.hv_reference);
            std::cerr << "wall " << report.wall_seconds << " s\n";
        } else if (*tune) {
            auto const instance = load_instance(tune_opts.instance_path);
            auto const campaign = tune_opts.campaign();
            fjsp::TuneSpec spec;
            spec.budget = budget;
            spec.seed = tune_seed;
            spec.workers = tune_opts.threads;
            auto const result = fjsp::tune_mutation(instance, spec, campaign);
            auto const json = fjsp::to_json(result, spec, campaign).dump(2) + "\n";
            if (!tune_opts.out_dir.empty()) {
                std::filesystem::create_directories(tune_opts.out_dir);
                fjsp::write_text(std::filesystem::path(tune_opts.out_dir) / "tune.json", json);
            }
            std::cout << "best p_insert " << result.best.p_insert() << " p_swap1 " << result.best.p_swap1() << " p_swap2 "
                      << result.best.p_swap2() << '\n';
            std::cout << "best_fraction " << result.best_fraction << '\n';
            print_hv(std::cout, result.trace[result.best_index].hypervolume, result.hv_reference);
        } else if (*hv) {
            auto const front = load_front(front_csv);
            auto const ref = fjsp::reference_point(load_front(ref_csv));
            print_hv(std::cout, fjsp::hypervolume3(front, ref), ref);
        }
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
