// time_grid.hpp — output time grids (strictly increasing, starting at 0)

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nmdyn/error.hpp"

namespace nmdyn {

class TimeGrid {
public:
    explicit TimeGrid(std::vector<double> points) : points_(std::move(points)) {
        if (points_.empty() || points_.front() != 0.0)
            throw Error(ErrorKind::InvalidArgument, "time grid must start at t = 0");
        for (std::size_t k = 1; k < points_.size(); ++k) {
            if (!(points_[k] > points_[k - 1]))
                throw Error(ErrorKind::InvalidArgument, "time grid must be strictly increasing");
        }
    }

    // `intervals` equal steps on [0, t_max]; intervals + 1 points.
    static TimeGrid uniform(double t_max, std::size_t intervals) {
        if (intervals == 0 || !(t_max > 0.0))
            throw Error(ErrorKind::InvalidArgument, "uniform grid needs t_max > 0 and at least one interval");
        std::vector<double> pts(intervals + 1);
        const double h = t_max / static_cast<double>(intervals);
        for (std::size_t k = 0; k < intervals; ++k) pts[k] = static_cast<double>(k) * h;
        pts[intervals] = t_max;
        return TimeGrid(std::move(pts));
    }

    std::size_t size() const noexcept { return points_.size(); }
    double operator[](std::size_t k) const { return points_[k]; }
    double back() const noexcept { return points_.back(); }
    std::span<const double> points() const noexcept { return points_; }

    bool operator==(const TimeGrid&) const = default;

private:
    std::vector<double> points_;
};

}  // namespace nmdyn
