#ifndef FJSP_MOEA_HPP
#define FJSP_MOEA_HPP

#include "fjsp/decoder.hpp"
#include "fjsp/genome.hpp"
#include "fjsp/initializer.hpp"
#include "fjsp/metrics.hpp"
#include "fjsp/random.hpp"
#include "fjsp/variation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

namespace fjsp {

struct Individual {
    Chromosome chromosome;
    ObjectiveVector objectives;
    Schedule schedule; // witness for `objectives`
};

using Direction = std::array<double, 3>;

struct ReferencePointSet {
    std::vector<Direction> points;
    std::size_t divisions{};
};

/// Das-Dennis simplex lattice for three objectives: all (i, j, p-i-j) / p.
inline ReferencePointSet das_dennis(std::size_t divisions)
{
    if (divisions < 1) {
        throw std::invalid_argument("das_dennis: divisions must be at least 1");
    }
    ReferencePointSet refs { {}, divisions };
    auto const p = static_cast<double>(divisions);
    for (std::size_t i = 0; i <= divisions; ++i) {
        for (std::size_t j = 0; i + j <= divisions; ++j) {
            refs.points.push_back({ static_cast<double>(i) / p, static_cast<double>(j) / p,
                static_cast<double>(divisions - i - j) / p });
        }
    }
    return refs;
}

/// Non-dominated fronts as index lists; front 0 is the non-dominated set.
/// Indices within a front are ascending.
inline std::vector<std::vector<std::size_t>> fast_nondominated_sort(std::span<ObjectiveVector const> members)
{
    auto const n = members.size();
    std::vector<std::vector<std::size_t>> dominated_by_me(n);
    std::vector<std::size_t> dominator_count(n, 0);
    std::vector<std::vector<std::size_t>> fronts;
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(members[i], members[j])) {
                dominated_by_me[i].push_back(j);
                ++dominator_count[j];
            } else if (dominates(members[j], members[i])) {
                dominated_by_me[j].push_back(i);
                ++dominator_count[i];
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (dominator_count[i] == 0) {
            current.push_back(i);
        }
    }
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (auto i : current) {
            for (auto j : dominated_by_me[i]) {
                if (--dominator_count[j] == 0) {
                    next.push_back(j);
                }
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

struct Association {
    std::size_t reference{};
    double distance{};
};

inline constexpr double kNormalizationEpsilon = 1e-6;

namespace detail {

    inline double perpendicular_distance(Direction const& point, Direction const& direction)
    {
        double dot = 0.0;
        double norm2 = 0.0;
        for (std::size_t k = 0; k < 3; ++k) {
            dot += point[k] * direction[k];
            norm2 += direction[k] * direction[k];
        }
        double const t = dot / norm2;
        double d2 = 0.0;
        for (std::size_t k = 0; k < 3; ++k) {
            double const r = point[k] - t * direction[k];
            d2 += r * r;
        }
        return std::sqrt(d2);
    }

    // Solves A x = b for 3x3 A by Gaussian elimination with partial pivoting.
    inline std::optional<std::array<double, 3>> solve3(std::array<std::array<double, 3>, 3> a, std::array<double, 3> b)
    {
        for (std::size_t col = 0; col < 3; ++col) {
            std::size_t pivot = col;
            for (std::size_t r = col + 1; r < 3; ++r) {
                if (std::abs(a[r][col]) > std::abs(a[pivot][col])) {
                    pivot = r;
                }
            }
            if (std::abs(a[pivot][col]) < 1e-12) {
                return std::nullopt;
            }
            std::swap(a[col], a[pivot]);
            std::swap(b[col], b[pivot]);
            for (std::size_t r = 0; r < 3; ++r) {
                if (r == col) {
                    continue;
                }
                double const factor = a[r][col] / a[col][col];
                for (std::size_t c = col; c < 3; ++c) {
                    a[r][c] -= factor * a[col][c];
                }
                b[r] -= factor * b[col];
            }
        }
        return std::array<double, 3> { b[0] / a[0][0], b[1] / a[1][1], b[2] / a[2][2] };
    }

} // namespace detail

/// Normalized objectives of `members`: translated by the per-objective
/// minimum and divided by the hyperplane intercepts through the extreme
/// points. Degenerate intercepts fall back to the per-objective maxima of the
/// translated objectives.
inline std::vector<Direction> normalize_objectives(std::span<ObjectiveVector const> members)
{
    auto const n = members.size();
    std::vector<Direction> translated(n);
    if (n == 0) {
        return translated;
    }
    std::array<double, 3> ideal {};
    for (std::size_t k = 0; k < 3; ++k) {
        ideal[k] = std::numeric_limits<double>::infinity();
        for (auto const& v : members) {
            ideal[k] = std::min(ideal[k], static_cast<double>(v[k]));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < 3; ++k) {
            translated[i][k] = static_cast<double>(members[i][k]) - ideal[k];
        }
    }

    // extreme point per axis: minimize the achievement scalarizing function
    std::array<std::array<double, 3>, 3> extremes {};
    for (std::size_t axis = 0; axis < 3; ++axis) {
        double best = std::numeric_limits<double>::infinity();
        for (auto const& t : translated) {
            double asf = 0.0;
            for (std::size_t k = 0; k < 3; ++k) {
                double const w = k == axis ? 1.0 : kNormalizationEpsilon;
                asf = std::max(asf, t[k] / w);
            }
            if (asf < best) {
                best = asf;
                extremes[axis] = t;
            }
        }
    }

    std::array<double, 3> intercepts {};
    bool degenerate = true;
    if (auto plane = detail::solve3(extremes, { 1.0, 1.0, 1.0 })) {
        degenerate = false;
        for (std::size_t k = 0; k < 3; ++k) {
            double const a = (*plane)[k];
            if (!(a > 0.0) || !std::isfinite(1.0 / a)) {
                degenerate = true;
                break;
            }
            intercepts[k] = 1.0 / a;
            if (intercepts[k] < kNormalizationEpsilon) {
                degenerate = true;
                break;
            }
        }
    }
    if (degenerate) {
        for (std::size_t k = 0; k < 3; ++k) {
            intercepts[k] = 0.0;
            for (auto const& t : translated) {
                intercepts[k] = std::max(intercepts[k], t[k]);
            }
            if (intercepts[k] < kNormalizationEpsilon) {
                intercepts[k] = 1.0;
            }
        }
    }
    for (auto& t : translated) {
        for (std::size_t k = 0; k < 3; ++k) {
            t[k] /= intercepts[k];
        }
    }
    return translated;
}

/// Associates each normalized point with the reference line (through the
/// origin) of smallest perpendicular distance; lowest index on ties.
inline std::vector<Association> associate(std::span<Direction const> normalized, ReferencePointSet const& refs)
{
    std::vector<Association> out;
    out.reserve(normalized.size());
    for (auto const& p : normalized) {
        Association best { 0, std::numeric_limits<double>::infinity() };
        for (std::size_t r = 0; r < refs.points.size(); ++r) {
            double const d = detail::perpendicular_distance(p, refs.points[r]);
            if (d < best.distance) {
                best = { r, d };
            }
        }
        out.push_back(best);
    }
    return out;
}

inline std::vector<Association> normalize_and_associate(std::span<ObjectiveVector const> members, ReferencePointSet const& refs)
{
    auto const normalized = normalize_objectives(members);
    return associate(normalized, refs);
}

struct SelectionResult {
    std::vector<std::size_t> selected;     // indices into R_t
    std::size_t fronts_accepted_whole{};   // fronts taken without niching
    std::vector<std::size_t> candidates;   // S_t as indices into R_t
    std::vector<Association> associations; // parallel to `candidates`; empty if no niching
    std::vector<std::size_t> niche_counts; // per reference point, after niching
};

/// NSGA-III survivor selection of `target` members from `members`.
inline SelectionResult environmental_selection(
    std::span<ObjectiveVector const> members, std::size_t target, ReferencePointSet const& refs, Rng& rng)
{
    if (members.size() < target) {
        throw std::invalid_argument("environmental_selection: fewer members than the target size");
    }
    auto const fronts = fast_nondominated_sort(members);
    SelectionResult result;
    std::size_t last = 0;
    for (; last < fronts.size(); ++last) {
        result.candidates.insert(result.candidates.end(), fronts[last].begin(), fronts[last].end());
        if (result.candidates.size() >= target) {
            break;
        }
    }
    auto const& split = fronts[last];
    if (result.candidates.size() == target) {
        result.selected = result.candidates;
        result.fronts_accepted_whole = last + 1;
        return result;
    }
    result.fronts_accepted_whole = last;
    auto const whole = result.candidates.size() - split.size();
    result.selected.assign(result.candidates.begin(), result.candidates.begin() + static_cast<std::ptrdiff_t>(whole));

    std::vector<ObjectiveVector> s_t;
    s_t.reserve(result.candidates.size());
    for (auto i : result.candidates) {
        s_t.push_back(members[i]);
    }
    result.associations = normalize_and_associate(s_t, refs);

    auto& niche = result.niche_counts;
    niche.assign(refs.points.size(), 0);
    for (std::size_t c = 0; c < whole; ++c) {
        ++niche[result.associations[c].reference];
    }
    // members of the split front, per reference point
    std::vector<std::vector<std::size_t>> pool(refs.points.size());
    for (std::size_t c = whole; c < result.candidates.size(); ++c) {
        pool[result.associations[c].reference].push_back(c);
    }
    std::vector<bool> active(refs.points.size(), true);
    while (result.selected.size() < target) {
        std::size_t min_count = std::numeric_limits<std::size_t>::max();
        for (std::size_t r = 0; r < niche.size(); ++r) {
            if (active[r]) {
                min_count = std::min(min_count, niche[r]);
            }
        }
        std::vector<std::size_t> ties;
        for (std::size_t r = 0; r < niche.size(); ++r) {
            if (active[r] && niche[r] == min_count) {
                ties.push_back(r);
            }
        }
        auto const r = ties[rng.uniform_index(ties.size())];
        auto& members_r = pool[r];
        if (members_r.empty()) {
            active[r] = false;
            continue;
        }
        std::size_t pick = 0;
        if (niche[r] == 0) {
            for (std::size_t q = 1; q < members_r.size(); ++q) {
                if (result.associations[members_r[q]].distance < result.associations[members_r[pick]].distance) {
                    pick = q;
                }
            }
        } else {
            pick = rng.uniform_index(members_r.size());
        }
        result.selected.push_back(result.candidates[members_r[pick]]);
        members_r.erase(members_r.begin() + static_cast<std::ptrdiff_t>(pick));
        ++niche[r];
    }
    return result;
}

struct GenerationStats {
    std::size_t generation{};
    std::size_t evaluations{};
    std::size_t front_size{};
    double hypervolume{}; // normalized, against RunConfig::hv_reference
};

struct RunConfig {
    std::size_t population_size = 100;
    std::size_t evaluation_budget = 10'000;
    std::size_t divisions = 12;
    VariationConfig variation;
    InitMethodPair init;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
    // fixed reference for the per-generation hypervolume; defaults to 1.1x the
    // per-objective maxima of the initial population
    std::optional<HvReference> hv_reference;
    std::function<void(GenerationStats const&)> observer;

    void check() const
    {
        if (population_size < 1) {
            throw std::invalid_argument("population size must be at least 1");
        }
        if (evaluation_budget < population_size) {
            throw std::invalid_argument("evaluation budget is smaller than the population size");
        }
        if (divisions < 1) {
            throw std::invalid_argument("divisions must be at least 1");
        }
        variation.check();
    }
};

struct RunResult {
    std::vector<Individual> front; // non-dominated members of the final population
    std::size_t evaluations{};
    std::size_t generations{};
};

namespace detail {

    // Runs body(i) for i in [0, count) on up to `threads` workers. Results must
    // be written to per-index slots so the outcome is independent of threads.
    template<typename Body>
    void parallel_for(std::size_t count, std::size_t threads, Body&& body)
    {
        if (threads <= 1 || count < 2) {
            for (std::size_t i = 0; i < count; ++i) {
                body(i);
            }
            return;
        }
        auto const workers = std::min(threads, count);
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < count; i += workers) {
                    body(i);
                }
            });
        }
    }

    inline std::vector<ObjectiveVector> objectives_of(std::vector<Individual> const& pop)
    {
        std::vector<ObjectiveVector> out;
        out.reserve(pop.size());
        for (auto const& ind : pop) {
            out.push_back(ind.objectives);
        }
        return out;
    }

    inline Individual to_individual(Evaluation&& e)
    {
        return { std::move(e.chromosome), e.objectives, std::move(e.schedule) };
    }

} // namespace detail

/// NSGA-III generational loop. Initial evaluations count against the budget
/// and the last generation is truncated so exactly `evaluation_budget`
/// evaluations are spent. Each individual and each mating event draws from
/// its own stream split off the run seed, so results do not depend on the
/// number of threads.
inline RunResult run(FjspInstance const& instance, RunConfig const& config)
{
    config.check();
    auto const refs = das_dennis(config.divisions);
    auto const n_pop = config.population_size;
    Rng rng(config.seed);

    auto chromosomes = generate_population(n_pop, instance, rng, config.init);
    std::vector<std::uint64_t> seeds(n_pop);
    for (auto& s : seeds) {
        s = rng.split();
    }
    std::vector<Individual> population(n_pop);
    detail::parallel_for(n_pop, config.threads, [&](std::size_t i) {
        Rng local(seeds[i]);
        population[i] = detail::to_individual(evaluate(chromosomes[i], instance, local));
    });
    std::size_t evaluations = n_pop;

    std::optional<HvReference> hv_ref = config.hv_reference;
    auto report = [&](std::size_t generation) {
        if (!config.observer) {
            return;
        }
        auto const objs = detail::objectives_of(population);
        auto const front = nd_filter(objs);
        if (!hv_ref) {
            HvReference r;
            for (std::size_t k = 0; k < kNumObjectives; ++k) {
                Time mx = 0;
                for (auto const& v : objs) {
                    mx = std::max(mx, v[k]);
                }
                r.point[k] = kReferenceScale * static_cast<double>(mx);
            }
            hv_ref = r;
        }
        config.observer({ generation, evaluations, front.size(), hypervolume3(front, *hv_ref) });
    };
    report(0);

    std::size_t generation = 0;
    while (evaluations < config.evaluation_budget) {
        ++generation;
        auto const children = std::min(n_pop, config.evaluation_budget - evaluations);
        auto const pairs = (children + 1) / 2;
        std::vector<std::uint64_t> pair_seeds(pairs);
        for (auto& s : pair_seeds) {
            s = rng.split();
        }
        std::vector<Individual> offspring(2 * pairs);
        detail::parallel_for(pairs, config.threads, [&](std::size_t k) {
            Rng local(pair_seeds[k]);
            auto const& a = population[local.uniform_index(population.size())];
            auto const& b = population[local.uniform_index(population.size())];
            auto [c1, c2] = make_offspring(a.chromosome, b.chromosome, instance, config.variation, local);
            offspring[2 * k] = detail::to_individual(evaluate(c1, instance, local));
            if (2 * k + 1 < children) {
                offspring[2 * k + 1] = detail::to_individual(evaluate(c2, instance, local));
            }
        });
        offspring.resize(children);
        evaluations += children;

        std::vector<Individual> combined = std::move(population);
        combined.insert(combined.end(), std::make_move_iterator(offspring.begin()), std::make_move_iterator(offspring.end()));
        auto const objs = detail::objectives_of(combined);
        auto const sel = environmental_selection(objs, n_pop, refs, rng);
        population.clear();
        population.reserve(n_pop);
        for (auto i : sel.selected) {
            population.push_back(std::move(combined[i]));
        }
        report(generation);
    }

    RunResult result;
    result.evaluations = evaluations;
    result.generations = generation;
    auto const objs = detail::objectives_of(population);
    auto const fronts = fast_nondominated_sort(objs);
    for (auto i : fronts.front()) {
        result.front.push_back(std::move(population[i]));
    }
    return result;
}

} // namespace fjsp

#endif
