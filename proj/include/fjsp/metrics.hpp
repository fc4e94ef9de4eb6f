#ifndef FJSP_METRICS_HPP
#define FJSP_METRICS_HPP

#include "fjsp/decoder.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fjsp {

/// Pareto dominance under minimization.
constexpr bool dominates(ObjectiveVector const& a, ObjectiveVector const& b)
{
    bool strictly = false;
    for (std::size_t k = 0; k < kNumObjectives; ++k) {
        if (a[k] > b[k]) {
            return false;
        }
        strictly = strictly || a[k] < b[k];
    }
    return strictly;
}

/// Mutually non-dominated, duplicate-free set of objective vectors, kept
/// sorted lexicographically.
class Front {
public:
    Front() = default;

    [[nodiscard]] std::vector<ObjectiveVector> const& points() const noexcept { return points_; }
    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] bool empty() const noexcept { return points_.empty(); }
    [[nodiscard]] auto begin() const { return points_.begin(); }
    [[nodiscard]] auto end() const { return points_.end(); }

    friend bool operator==(Front const&, Front const&) = default;

private:
    friend Front nd_filter(std::span<ObjectiveVector const> points);
    std::vector<ObjectiveVector> points_;
};

/// Removes duplicates and every point dominated by another.
inline Front nd_filter(std::span<ObjectiveVector const> points)
{
    std::vector<ObjectiveVector> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    Front front;
    // A dominator is lexicographically smaller, so it has already been seen.
    for (auto const& p : sorted) {
        bool dominated = false;
        for (auto const& q : front.points_) {
            if (dominates(q, p)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) {
            front.points_.push_back(p);
        }
    }
    return front;
}

inline Front nd_filter(std::vector<ObjectiveVector> const& points) { return nd_filter(std::span<ObjectiveVector const>(points)); }

inline Front merge_runs(std::span<Front const> fronts)
{
    std::vector<ObjectiveVector> all;
    for (auto const& f : fronts) {
        all.insert(all.end(), f.begin(), f.end());
    }
    return nd_filter(all);
}

inline Front merge_runs(std::vector<Front> const& fronts) { return merge_runs(std::span<Front const>(fronts)); }

/// Hypervolume reference: the ideal is the origin and `point` bounds the box.
struct HvReference {
    std::array<double, 3> point {};

    friend bool operator==(HvReference const&, HvReference const&) = default;
};

inline constexpr double kReferenceScale = 1.1;

/// 1.1 times the per-objective maximum of a reference front.
inline HvReference reference_point(Front const& reference_front)
{
    if (reference_front.empty()) {
        throw std::invalid_argument("reference_point: empty reference front");
    }
    HvReference ref;
    for (std::size_t k = 0; k < kNumObjectives; ++k) {
        Time mx = 0;
        for (auto const& p : reference_front) {
            mx = std::max(mx, p[k]);
        }
        ref.point[k] = kReferenceScale * static_cast<double>(mx);
    }
    return ref;
}

using Point3 = std::array<double, 3>;

namespace detail {

    // Area dominated by 2-D points inside [0,1]^2 w.r.t. reference (1,1).
    inline double area2(std::vector<std::array<double, 2>> pts)
    {
        std::sort(pts.begin(), pts.end());
        double area = 0.0;
        double best_y = 1.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (pts[i][1] >= best_y) {
                continue;
            }
            // next x where a lower staircase step begins
            double next_x = 1.0;
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                if (pts[j][1] < pts[i][1]) {
                    next_x = pts[j][0];
                    break;
                }
            }
            best_y = pts[i][1];
            area += (next_x - pts[i][0]) * (1.0 - best_y);
        }
        return area;
    }

} // namespace detail

/// Exact hypervolume of points in the unit cube against reference (1,1,1).
/// Points with any coordinate >= 1 contribute nothing. Dimension sweep over
/// the third coordinate with a 2-D staircase per slab.
inline double hypervolume_unit(std::span<Point3 const> points)
{
    std::vector<Point3> pts;
    for (auto const& p : points) {
        if (p[0] < 1.0 && p[1] < 1.0 && p[2] < 1.0) {
            pts.push_back(p);
        }
    }
    std::sort(pts.begin(), pts.end(), [](Point3 const& a, Point3 const& b) { return a[2] < b[2]; });
    double volume = 0.0;
    std::vector<std::array<double, 2>> slab;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        slab.push_back({ pts[i][0], pts[i][1] });
        double const z_next = i + 1 < pts.size() ? pts[i + 1][2] : 1.0;
        if (z_next > pts[i][2]) {
            volume += detail::area2(slab) * (z_next - pts[i][2]);
        }
    }
    return volume;
}

inline std::vector<Point3> normalize(Front const& front, HvReference const& ref)
{
    std::vector<Point3> pts;
    pts.reserve(front.size());
    for (auto const& p : front) {
        pts.push_back({ static_cast<double>(p[0]) / ref.point[0], static_cast<double>(p[1]) / ref.point[1],
            static_cast<double>(p[2]) / ref.point[2] });
    }
    return pts;
}

/// Hypervolume in reference-normalized space: each objective is divided by
/// its reference coordinate, so the measured region lies in the unit cube.
inline double hypervolume3(Front const& front, HvReference const& ref)
{
    auto const pts = normalize(front, ref);
    return hypervolume_unit(pts);
}

// ---------------------------------------------------------------------------
// CSV: header `f1,f2,f3`, then one integer row per point.

inline void write_front_csv(std::ostream& out, Front const& front)
{
    out << "f1,f2,f3\n";
    for (auto const& p : front) {
        out << p.makespan << ',' << p.total_workload << ',' << p.critical_workload << '\n';
    }
}

inline std::vector<ObjectiveVector> read_points_csv(std::istream& in)
{
    std::vector<ObjectiveVector> pts;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        if (line_no == 1 && line.find_first_of("fF") != std::string::npos) {
            continue; // header
        }
        std::array<Time, 3> v {};
        std::istringstream row(line);
        std::string cell;
        std::size_t k = 0;
        while (std::getline(row, cell, ',')) {
            if (k == 3) {
                throw std::runtime_error("csv line " + std::to_string(line_no) + ": more than three columns");
            }
            try {
                std::size_t used = 0;
                v[k] = std::stoll(cell, &used);
                if (cell.find_first_not_of(" \t", used) != std::string::npos) {
                    throw std::invalid_argument("trailing");
                }
            } catch (std::exception const&) {
                throw std::runtime_error("csv line " + std::to_string(line_no) + ": `" + cell + "` is not an integer");
            }
            ++k;
        }
        if (k != 3) {
            throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected three columns");
        }
        pts.push_back({ v[0], v[1], v[2] });
    }
    return pts;
}

} // namespace fjsp

#endif
