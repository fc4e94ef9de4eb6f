#include "fjsp/moea.hpp"
#include "support/benchmarks.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace fjsp;

namespace {

std::vector<ObjectiveVector> random_population(Rng& rng, std::size_t n, Time range)
{
    std::vector<ObjectiveVector> pop;
    for (std::size_t i = 0; i < n; ++i) {
        pop.push_back({ static_cast<Time>(rng.uniform_index(range)), static_cast<Time>(rng.uniform_index(range)),
            static_cast<Time>(rng.uniform_index(range)) });
    }
    return pop;
}

std::set<support::Vec3> as_set(std::vector<Individual> const& front)
{
    std::set<support::Vec3> s;
    for (auto const& ind : front) {
        s.insert({ ind.objectives[0], ind.objectives[1], ind.objectives[2] });
    }
    return s;
}

} // namespace

TEST(Moea, DasDennisCounts)
{
    auto const p1 = das_dennis(1);
    ASSERT_EQ(p1.points.size(), 3u);
    std::set<Direction> corners(p1.points.begin(), p1.points.end());
    EXPECT_EQ(corners, (std::set<Direction> { { 1, 0, 0 }, { 0, 1, 0 }, { 0, 0, 1 } }));
    auto const p2 = das_dennis(2);
    EXPECT_EQ(p2.points.size(), 6u);
    EXPECT_NE(std::find(p2.points.begin(), p2.points.end(), Direction { 0.5, 0.5, 0.0 }), p2.points.end());
    auto const p12 = das_dennis(12);
    EXPECT_EQ(p12.points.size(), 91u);
    for (auto const& d : p12.points) {
        EXPECT_NEAR(d[0] + d[1] + d[2], 1.0, 1e-12);
    }
    EXPECT_THROW(das_dennis(0), std::invalid_argument);
}

TEST(Moea, SortExamples)
{
    std::vector<ObjectiveVector> const pop { { 1, 1, 1 }, { 2, 2, 2 }, { 1, 2, 3 } };
    auto const fronts = fast_nondominated_sort(pop);
    ASSERT_EQ(fronts.size(), 2u);
    EXPECT_EQ(fronts[0], (std::vector<std::size_t> { 0 }));
    EXPECT_EQ(fronts[1], (std::vector<std::size_t> { 1, 2 }));

    std::vector<ObjectiveVector> const same(5, ObjectiveVector { 3, 3, 3 });
    EXPECT_EQ(fast_nondominated_sort(same).size(), 1u);

    std::vector<ObjectiveVector> chain;
    for (Time k = 6; k > 0; --k) {
        chain.push_back({ k, k, k });
    }
    auto const chain_fronts = fast_nondominated_sort(chain);
    ASSERT_EQ(chain_fronts.size(), 6u);
    EXPECT_EQ(chain_fronts[0], (std::vector<std::size_t> { 5 }));
    EXPECT_EQ(chain_fronts[5], (std::vector<std::size_t> { 0 }));
}

TEST(Moea, SortMatchesBruteForce)
{
    Rng rng(8);
    for (int t = 0; t < 1000; ++t) {
        auto const pop = random_population(rng, 1 + rng.uniform_index(50), 1 + static_cast<Time>(rng.uniform_index(10)));
        std::vector<support::Vec3> v;
        for (auto const& p : pop) {
            v.push_back({ p[0], p[1], p[2] });
        }
        ASSERT_EQ(fast_nondominated_sort(pop), support::peel_fronts(v));
    }
}

TEST(Moea, AssociationExamples)
{
    auto const refs = das_dennis(1);
    std::vector<Direction> const pts { { 1, 0, 0 }, { 0, 1, 0 } };
    auto const a = associate(pts, refs);
    EXPECT_EQ(refs.points[a[0].reference], (Direction { 1, 0, 0 }));
    EXPECT_EQ(refs.points[a[1].reference], (Direction { 0, 1, 0 }));
    EXPECT_DOUBLE_EQ(a[0].distance, 0.0);

    auto const refs12 = das_dennis(12);
    std::vector<Direction> const on_line { { 0.25, 0.5, 0.25 } };
    auto const b = associate(on_line, refs12);
    EXPECT_NEAR(b[0].distance, 0.0, 1e-12);
    EXPECT_EQ(refs12.points[b[0].reference], (Direction { 3.0 / 12, 6.0 / 12, 3.0 / 12 }));

    std::vector<ObjectiveVector> const single { { 7, 30, 5 } };
    auto const n = normalize_objectives(single);
    EXPECT_EQ(n[0], (Direction { 0, 0, 0 }));
    auto const c = normalize_and_associate(single, refs12);
    EXPECT_TRUE(std::isfinite(c[0].distance));
}

TEST(Moea, NormalizationMapsExtremesToUnitIntercepts)
{
    std::vector<ObjectiveVector> const pop { { 10, 0, 0 }, { 0, 20, 0 }, { 0, 0, 40 }, { 5, 5, 5 } };
    auto const n = normalize_objectives(pop);
    EXPECT_NEAR(n[0][0], 1.0, 1e-12);
    EXPECT_NEAR(n[1][1], 1.0, 1e-12);
    EXPECT_NEAR(n[2][2], 1.0, 1e-12);
    EXPECT_NEAR(n[3][2], 0.125, 1e-12);
}

TEST(Moea, SelectionTakesExactFirstFront)
{
    auto const refs = das_dennis(4);
    std::vector<ObjectiveVector> pop { { 1, 5, 5 }, { 5, 1, 5 }, { 5, 5, 1 }, { 6, 6, 6 }, { 7, 7, 7 }, { 8, 8, 8 } };
    Rng rng(1);
    auto const sel = environmental_selection(pop, 3, refs, rng);
    EXPECT_EQ(sel.selected, (std::vector<std::size_t> { 0, 1, 2 }));
    EXPECT_EQ(sel.fronts_accepted_whole, 1u);
}

TEST(Moea, SelectionOfChainTakesLeadingFronts)
{
    auto const refs = das_dennis(12);
    std::vector<ObjectiveVector> chain;
    for (Time k = 1; k <= 10; ++k) {
        chain.push_back({ k, k, k });
    }
    Rng rng(1);
    auto const sel = environmental_selection(chain, 4, refs, rng);
    EXPECT_EQ(sel.selected, (std::vector<std::size_t> { 0, 1, 2, 3 }));
}

TEST(Moea, NichingPrefersClosestOnEmptyNiches)
{
    // six mutually non-dominated members, two per axis; refs p=1. The axis
    // points normalize onto the corners, so each corner takes its exact one.
    std::vector<ObjectiveVector> pop {
        { 100, 0, 0 }, { 90, 10, 10 }, //
        { 0, 100, 0 }, { 10, 90, 10 }, //
        { 0, 0, 100 }, { 10, 10, 90 },
    };
    auto const refs = das_dennis(1);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        auto sel = environmental_selection(pop, 3, refs, rng);
        std::sort(sel.selected.begin(), sel.selected.end());
        EXPECT_EQ(sel.selected, (std::vector<std::size_t> { 0, 2, 4 }));
    }
}

TEST(Moea, SelectionSizeWholeFrontsAndNicheCounts)
{
    Rng rng(77);
    auto const refs = das_dennis(6);
    for (int t = 0; t < 1000; ++t) {
        auto const n_pop = 2 + rng.uniform_index(25);
        auto const pop = random_population(rng, 2 * n_pop, 20);
        auto const sel = environmental_selection(pop, n_pop, refs, rng);
        ASSERT_EQ(sel.selected.size(), n_pop);
        std::set<std::size_t> chosen(sel.selected.begin(), sel.selected.end());
        ASSERT_EQ(chosen.size(), n_pop);

        auto const fronts = fast_nondominated_sort(pop);
        for (std::size_t f = 0; f < sel.fronts_accepted_whole; ++f) {
            for (auto i : fronts[f]) {
                ASSERT_TRUE(chosen.count(i));
            }
        }
        // nothing beyond the split front is taken
        std::size_t upto = 0;
        for (std::size_t f = 0; f <= std::min(sel.fronts_accepted_whole, fronts.size() - 1); ++f) {
            upto += fronts[f].size();
        }
        for (std::size_t f = sel.fronts_accepted_whole + 1; f < fronts.size(); ++f) {
            for (auto i : fronts[f]) {
                ASSERT_FALSE(chosen.count(i));
            }
        }
        if (!sel.associations.empty()) {
            std::vector<std::size_t> recount(refs.points.size(), 0);
            for (std::size_t c = 0; c < sel.candidates.size(); ++c) {
                if (chosen.count(sel.candidates[c])) {
                    ++recount[sel.associations[c].reference];
                }
            }
            ASSERT_EQ(recount, sel.niche_counts);
        }
    }
}

TEST(Moea, RunIsDeterministicAndThreadIndependent)
{
    auto const inst = support::stand_in_instance(support::benchmark_row("Mk01"), 3);
    RunConfig cfg;
    cfg.population_size = 30;
    cfg.evaluation_budget = 1000;
    cfg.seed = 9;
    auto const a = run(inst, cfg);
    auto const b = run(inst, cfg);
    cfg.threads = 4;
    auto const c = run(inst, cfg);
    ASSERT_EQ(a.front.size(), b.front.size());
    for (std::size_t i = 0; i < a.front.size(); ++i) {
        EXPECT_EQ(a.front[i].chromosome, b.front[i].chromosome);
        EXPECT_EQ(a.front[i].chromosome, c.front[i].chromosome);
        EXPECT_EQ(a.front[i].objectives, c.front[i].objectives);
    }
    EXPECT_EQ(a.evaluations, 1000u);
}

TEST(Moea, BudgetIsSpentExactly)
{
    auto const inst = support::example3x3();
    RunConfig cfg;
    cfg.population_size = 20;
    cfg.evaluation_budget = 95;
    std::vector<std::size_t> evals;
    cfg.observer = [&](GenerationStats const& s) { evals.push_back(s.evaluations); };
    auto const r = run(inst, cfg);
    EXPECT_EQ(r.evaluations, 95u);
    EXPECT_EQ(evals, (std::vector<std::size_t> { 20, 40, 60, 80, 95 }));
    cfg.evaluation_budget = 19;
    EXPECT_THROW(run(inst, cfg), std::invalid_argument);
}

TEST(Moea, RunFrontIsWitnessedAndNonDominated)
{
    auto const inst = support::stand_in_instance(support::benchmark_row("ka4x5"), 1);
    RunConfig cfg;
    cfg.evaluation_budget = 10'000;
    cfg.seed = 4;
    std::vector<double> hv;
    cfg.observer = [&](GenerationStats const& s) { hv.push_back(s.hypervolume); };
    auto const r = run(inst, cfg);
    std::vector<ObjectiveVector> objs;
    for (auto const& ind : r.front) {
        objs.push_back(ind.objectives);
        EXPECT_EQ(objectives(ind.schedule, inst.num_machines()), ind.objectives);
        EXPECT_TRUE(schedule_violations(ind.schedule, inst).empty());
        EXPECT_EQ(decode_level1(ind.chromosome, inst).objectives, ind.objectives);
    }
    EXPECT_EQ(fast_nondominated_sort(objs).size(), 1u);
    EXPECT_EQ(hv.size(), 100u);
    EXPECT_GT(hv.back(), hv.front());
}

TEST(Moea, ToyRunsRecoverExhaustivePareto)
{
    auto const inst = support::example3x3();
    auto const truth = support::exhaustive_pareto(inst);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        RunConfig cfg;
        cfg.population_size = 20;
        cfg.evaluation_budget = 2000;
        cfg.seed = seed;
        EXPECT_EQ(as_set(run(inst, cfg).front), truth) << "seed " << seed;
    }
}
