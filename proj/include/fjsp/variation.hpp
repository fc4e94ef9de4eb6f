#ifndef FJSP_VARIATION_HPP
#define FJSP_VARIATION_HPP

#include "fjsp/genome.hpp"
#include "fjsp/instance.hpp"
#include "fjsp/random.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

namespace fjsp {

enum class MaCrossover { None, OnePoint, TwoPoint, JX, MPX };
enum class OsCrossover { None, PPOP, PPTP, IPOX, UPX };
enum class Mutation { Insertion, Swap1, Swap2 };

inline constexpr std::array kMaCrossovers { MaCrossover::None, MaCrossover::OnePoint, MaCrossover::TwoPoint, MaCrossover::JX, MaCrossover::MPX };
inline constexpr std::array kOsCrossovers { OsCrossover::None, OsCrossover::PPOP, OsCrossover::PPTP, OsCrossover::IPOX, OsCrossover::UPX };

constexpr std::string_view to_string(MaCrossover x)
{
    switch (x) {
    case MaCrossover::None: return "none";
    case MaCrossover::OnePoint: return "one-point";
    case MaCrossover::TwoPoint: return "two-point";
    case MaCrossover::JX: return "jx";
    case MaCrossover::MPX: return "mpx";
    }
    return "?";
}

constexpr std::string_view to_string(OsCrossover x)
{
    switch (x) {
    case OsCrossover::None: return "none";
    case OsCrossover::PPOP: return "ppop";
    case OsCrossover::PPTP: return "pptp";
    case OsCrossover::IPOX: return "ipox";
    case OsCrossover::UPX: return "upx";
    }
    return "?";
}

struct VariationConfig {
    double crossover_probability = 1.0;
    double p_insert = 0.6;
    double p_swap1 = 0.6;
    double p_swap2 = 0.6;
    double machine_accept_worse = 0.2;
    // pin an operator instead of drawing it uniformly
    std::optional<MaCrossover> ma_crossover;
    std::optional<OsCrossover> os_crossover;

    void check() const
    {
        for (double p : { crossover_probability, p_insert, p_swap1, p_swap2, machine_accept_worse }) {
            if (!(p >= 0.0 && p <= 1.0)) {
                throw std::invalid_argument("variation probabilities must lie in [0,1]");
            }
        }
    }
};

using GenePair = std::pair<std::vector<Gene>, std::vector<Gene>>;

// ---------------------------------------------------------------------------
// Machine assignment crossovers. Every child locus is copied from one of the
// parents at the same locus, so children stay valid by construction.

/// Swaps the loci marked true.
inline GenePair masked_swap(std::vector<Gene> const& a, std::vector<Gene> const& b, std::vector<bool> const& swap)
{
    GenePair children { a, b };
    for (std::size_t f = 0; f < a.size(); ++f) {
        if (swap[f]) {
            std::swap(children.first[f], children.second[f]);
        }
    }
    return children;
}

/// Genes at loci >= cut are swapped.
inline GenePair one_point_ma(std::vector<Gene> const& a, std::vector<Gene> const& b, std::size_t cut)
{
    std::vector<bool> swap(a.size(), false);
    for (std::size_t f = cut; f < a.size(); ++f) {
        swap[f] = true;
    }
    return masked_swap(a, b, swap);
}

/// Genes at loci in [lo, hi) are swapped.
inline GenePair two_point_ma(std::vector<Gene> const& a, std::vector<Gene> const& b, std::size_t lo, std::size_t hi)
{
    std::vector<bool> swap(a.size(), false);
    for (std::size_t f = lo; f < hi && f < a.size(); ++f) {
        swap[f] = true;
    }
    return masked_swap(a, b, swap);
}

/// Loci of every job whose mask bit is set are swapped.
inline GenePair job_based_ma(
    std::vector<Gene> const& a, std::vector<Gene> const& b, std::vector<bool> const& job_mask, FjspInstance const& instance)
{
    std::vector<bool> swap(a.size(), false);
    for (std::size_t f = 0; f < a.size(); ++f) {
        swap[f] = job_mask[instance.operation_at(f).job];
    }
    return masked_swap(a, b, swap);
}

inline std::vector<bool> random_mask(std::size_t size, Rng& rng)
{
    std::vector<bool> mask(size);
    for (std::size_t i = 0; i < size; ++i) {
        mask[i] = rng.bernoulli(0.5);
    }
    return mask;
}

// Two distinct cut positions in [0, size], returned ordered.
inline std::pair<std::size_t, std::size_t> two_cuts(std::size_t size, Rng& rng)
{
    auto lo = rng.uniform_index(size + 1);
    auto hi = rng.uniform_index(size + 1);
    if (lo > hi) {
        std::swap(lo, hi);
    }
    return { lo, hi };
}

inline GenePair crossover_ma(
    MaCrossover op, Chromosome const& p1, Chromosome const& p2, FjspInstance const& instance, Rng& rng)
{
    auto const n = p1.ma.size();
    switch (op) {
    case MaCrossover::None:
        return { p1.ma, p2.ma };
    case MaCrossover::OnePoint:
        // cut strictly inside so both sides are nonempty when n > 1
        return one_point_ma(p1.ma, p2.ma, n > 1 ? rng.uniform_between(1, n - 1) : 0);
    case MaCrossover::TwoPoint: {
        auto const [lo, hi] = two_cuts(n, rng);
        return two_point_ma(p1.ma, p2.ma, lo, hi);
    }
    case MaCrossover::JX:
        return job_based_ma(p1.ma, p2.ma, random_mask(instance.num_jobs(), rng), instance);
    case MaCrossover::MPX:
        return masked_swap(p1.ma, p2.ma, random_mask(n, rng));
    }
    return { p1.ma, p2.ma };
}

// ---------------------------------------------------------------------------
// Operation sequence crossovers. Preserved genes keep their loci; the
// operations at the freed loci are written back, left to right, in the order
// those same operations (k-th occurrence of a job) appear in the other parent.

namespace detail {

    // Occurrence number of each gene: os[p] is operation occ[p] of its job.
    inline std::vector<std::size_t> occurrences(std::vector<Gene> const& os, std::size_t num_jobs)
    {
        std::vector<std::size_t> seen(num_jobs, 0);
        std::vector<std::size_t> occ(os.size());
        for (std::size_t p = 0; p < os.size(); ++p) {
            occ[p] = seen[os[p]]++;
        }
        return occ;
    }

    // `keep[p]` marks preserved loci of `base`. Returns base with the other
    // loci refilled in `donor` order.
    inline std::vector<Gene> refill(
        std::vector<Gene> const& base, std::vector<bool> const& keep, std::vector<Gene> const& donor, std::size_t num_jobs)
    {
        auto const base_occ = occurrences(base, num_jobs);
        std::vector<std::vector<bool>> freed(num_jobs);
        for (std::size_t p = 0; p < base.size(); ++p) {
            auto& f = freed[base[p]];
            if (f.size() <= base_occ[p]) {
                f.resize(base_occ[p] + 1, false);
            }
            f[base_occ[p]] = !keep[p];
        }
        auto const donor_occ = occurrences(donor, num_jobs);
        std::vector<Gene> fill;
        fill.reserve(base.size());
        for (std::size_t p = 0; p < donor.size(); ++p) {
            auto const& f = freed[donor[p]];
            if (donor_occ[p] < f.size() && f[donor_occ[p]]) {
                fill.push_back(donor[p]);
            }
        }
        std::vector<Gene> child = base;
        std::size_t next = 0;
        for (std::size_t p = 0; p < base.size(); ++p) {
            if (!keep[p]) {
                child[p] = fill[next++];
            }
        }
        return child;
    }

    inline std::size_t num_jobs_of(std::vector<Gene> const& os)
    {
        Gene mx = 0;
        for (auto g : os) {
            mx = std::max(mx, g);
        }
        return os.empty() ? 0 : static_cast<std::size_t>(mx) + 1;
    }

} // namespace detail

/// Loci [0, cut) preserved.
inline GenePair ppop(std::vector<Gene> const& a, std::vector<Gene> const& b, std::size_t cut)
{
    auto const jobs = detail::num_jobs_of(a);
    std::vector<bool> keep(a.size(), false);
    for (std::size_t p = 0; p < cut && p < a.size(); ++p) {
        keep[p] = true;
    }
    return { detail::refill(a, keep, b, jobs), detail::refill(b, keep, a, jobs) };
}

/// Loci outside [lo, hi) preserved.
inline GenePair pptp(std::vector<Gene> const& a, std::vector<Gene> const& b, std::size_t lo, std::size_t hi)
{
    auto const jobs = detail::num_jobs_of(a);
    std::vector<bool> keep(a.size(), true);
    for (std::size_t p = lo; p < hi && p < a.size(); ++p) {
        keep[p] = false;
    }
    return { detail::refill(a, keep, b, jobs), detail::refill(b, keep, a, jobs) };
}

/// child1 keeps a's genes of jobs in `subset`; child2 keeps b's genes of the
/// complementary jobs. The rest come from the other parent in its order.
inline GenePair ipox(std::vector<Gene> const& a, std::vector<Gene> const& b, std::vector<bool> const& subset)
{
    auto const jobs = subset.size();
    std::vector<bool> keep1(a.size());
    std::vector<bool> keep2(b.size());
    for (std::size_t p = 0; p < a.size(); ++p) {
        keep1[p] = subset[a[p]];
        keep2[p] = !subset[b[p]];
    }
    return { detail::refill(a, keep1, b, jobs), detail::refill(b, keep2, a, jobs) };
}

/// Loci with a 0 bit preserved; the genes under 1 bits are rewritten in the
/// other parent's order.
inline GenePair upx(std::vector<Gene> const& a, std::vector<Gene> const& b, std::vector<bool> const& mask)
{
    auto const jobs = detail::num_jobs_of(a);
    std::vector<bool> keep(a.size());
    for (std::size_t p = 0; p < a.size(); ++p) {
        keep[p] = !mask[p];
    }
    return { detail::refill(a, keep, b, jobs), detail::refill(b, keep, a, jobs) };
}

/// Random nonempty proper subset of jobs; with a single job the subset is
/// everything and IPOX degenerates to copying the parents.
inline std::vector<bool> random_job_subset(std::size_t num_jobs, Rng& rng)
{
    std::vector<bool> subset(num_jobs, false);
    if (num_jobs < 2) {
        subset.assign(num_jobs, true);
        return subset;
    }
    for (;;) {
        std::size_t count = 0;
        for (std::size_t i = 0; i < num_jobs; ++i) {
            subset[i] = rng.bernoulli(0.5);
            count += subset[i] ? 1 : 0;
        }
        if (count > 0 && count < num_jobs) {
            return subset;
        }
    }
}

inline GenePair crossover_os(
    OsCrossover op, Chromosome const& p1, Chromosome const& p2, FjspInstance const& instance, Rng& rng)
{
    auto const n = p1.os.size();
    switch (op) {
    case OsCrossover::None:
        return { p1.os, p2.os };
    case OsCrossover::PPOP:
        return ppop(p1.os, p2.os, n > 1 ? rng.uniform_between(1, n - 1) : 0);
    case OsCrossover::PPTP: {
        auto const [lo, hi] = two_cuts(n, rng);
        return pptp(p1.os, p2.os, lo, hi);
    }
    case OsCrossover::IPOX:
        return ipox(p1.os, p2.os, random_job_subset(instance.num_jobs(), rng));
    case OsCrossover::UPX:
        return upx(p1.os, p2.os, random_mask(n, rng));
    }
    return { p1.os, p2.os };
}

// ---------------------------------------------------------------------------
// Mutation

/// Moves the gene at position `from` in front of the gene at position `before`
/// (positions refer to the sequence prior to the move).
inline void insert_before(std::vector<Gene>& os, std::size_t before, std::size_t from)
{
    if (before == from) {
        return;
    }
    auto const gene = os[from];
    os.erase(os.begin() + static_cast<std::ptrdiff_t>(from));
    auto const target = from < before ? before - 1 : before;
    os.insert(os.begin() + static_cast<std::ptrdiff_t>(target), gene);
}

/// Neighbour used by the one-point swap: the right one, or the left one at the
/// last position.
constexpr std::size_t swap1_partner(std::size_t i, std::size_t n) { return i + 1 < n ? i + 1 : (i > 0 ? i - 1 : i); }

/// Redraws the machine of `op` uniformly among its alternatives. Shorter or
/// equal durations are taken; longer ones with probability `accept_worse`.
inline void redraw_machine(Chromosome& c, OperationId op, FjspInstance const& instance, double accept_worse, Rng& rng)
{
    auto const& alts = instance.operation(op).alternatives;
    auto const f = instance.flat_index(op);
    auto const candidate = rng.uniform_index(alts.size());
    auto const current = alts[c.ma[f]].duration;
    auto const proposed = alts[candidate].duration;
    if (proposed <= current || rng.bernoulli(accept_worse)) {
        c.ma[f] = static_cast<Gene>(candidate);
    }
}

/// Applies one mutation kind with explicit positions; `j` is ignored by Swap1.
/// The machines of the operations sitting at the touched positions afterwards
/// are redrawn.
inline void mutate_at(Mutation kind, Chromosome& c, std::size_t i, std::size_t j, FjspInstance const& instance,
    VariationConfig const& config, Rng& rng)
{
    auto const n = c.os.size();
    std::size_t other = j;
    switch (kind) {
    case Mutation::Insertion:
        insert_before(c.os, i, j);
        break;
    case Mutation::Swap1:
        other = swap1_partner(i, n);
        std::swap(c.os[i], c.os[other]);
        break;
    case Mutation::Swap2:
        std::swap(c.os[i], c.os[j]);
        break;
    }
    redraw_machine(c, os_operation_at(c, i, instance), instance, config.machine_accept_worse, rng);
    if (other != i) {
        redraw_machine(c, os_operation_at(c, other, instance), instance, config.machine_accept_worse, rng);
    }
}

inline Chromosome mutate(
    Mutation kind, Chromosome c, FjspInstance const& instance, VariationConfig const& config, Rng& rng)
{
    auto const n = c.os.size();
    auto const i = rng.uniform_index(n);
    auto const j = kind == Mutation::Swap1 ? i : rng.uniform_index(n);
    mutate_at(kind, c, i, j, instance, config, rng);
    return c;
}

/// Crossover (one machine-assignment and one operation-sequence operator,
/// each drawn uniformly including "none"), then the three mutations as
/// independent coin flips per child in the order insertion, swap1, swap2.
inline std::pair<Chromosome, Chromosome> make_offspring(Chromosome const& p1, Chromosome const& p2,
    FjspInstance const& instance, VariationConfig const& config, Rng& rng)
{
    Chromosome c1 = p1;
    Chromosome c2 = p2;
    if (rng.bernoulli(config.crossover_probability)) {
        auto const xma = config.ma_crossover.value_or(kMaCrossovers[rng.uniform_index(kMaCrossovers.size())]);
        auto const xos = config.os_crossover.value_or(kOsCrossovers[rng.uniform_index(kOsCrossovers.size())]);
        auto [ma1, ma2] = crossover_ma(xma, p1, p2, instance, rng);
        auto [os1, os2] = crossover_os(xos, p1, p2, instance, rng);
        c1 = Chromosome { std::move(os1), std::move(ma1) };
        c2 = Chromosome { std::move(os2), std::move(ma2) };
    }
    for (Chromosome* child : { &c1, &c2 }) {
        if (rng.bernoulli(config.p_insert)) {
            *child = mutate(Mutation::Insertion, std::move(*child), instance, config, rng);
        }
        if (rng.bernoulli(config.p_swap1)) {
            *child = mutate(Mutation::Swap1, std::move(*child), instance, config, rng);
        }
        if (rng.bernoulli(config.p_swap2)) {
            *child = mutate(Mutation::Swap2, std::move(*child), instance, config, rng);
        }
    }
    return { std::move(c1), std::move(c2) };
}

} // namespace fjsp

#endif
