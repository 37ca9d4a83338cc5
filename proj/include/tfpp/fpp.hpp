#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "tfpp/lattice.hpp"
#include "tfpp/percolation.hpp"

namespace tfpp {

inline constexpr int64_t kUnreachable = -1;

// Shortest-path instance over 0/1 site weights. The path cost is the sum of
// site weights over every path site, both endpoints included, so a
// single-site path costs that site's own weight.
struct PassageProblem {
    const RegionMask* mask = nullptr;
    const Configuration* config = nullptr;
    std::vector<int32_t> sources; // site indices
    std::vector<int32_t> targets;
    // Admissibility predicate for interior (non-endpoint) path sites; null
    // means unconstrained. Endpoints are always exempt.
    std::function<bool(int32_t)> constraint;
    bool want_witness = false;
};

struct PassageResult {
    int64_t time = kUnreachable;
    std::vector<int32_t> witness; // simple source->target path when requested
};

// Exact minimum via deque-based breadth-first relaxation (0-1 weights).
PassageResult passage_time(const PassageProblem& p);

// Origin to the sites bordering the circular arc of a half-disk mask.
int64_t c_n_plus(const RegionMask& mask, const Configuration& config);

// Inner-boundary-adjacent to outer-boundary-adjacent sites of a half-annulus.
int64_t T_plus(const RegionMask& mask, const Configuration& config);

// Vertical crossing times of a strip mask: first component from terminal
// (-m,2m) to terminal (-n,2n), second from (-m,2m) to any site of the top
// row; interior path sites must lie strictly between the two horizontal
// lines (endpoints exempt).
std::pair<int64_t, int64_t> cylinder_times(const RegionMask& mask, const Configuration& config);

// Site nearest the origin to the sites bordering the circular arc of a
// sector mask.
int64_t sector_time(const RegionMask& mask, const Configuration& config);

// Between the lattice sites nearest to two polygon vertices (indices into
// the spec's vertex list).
int64_t polygon_corner_time(const RegionMask& mask, const Configuration& config,
                            size_t corner_a, size_t corner_b);

// Region site whose hexagon center is nearest to p (canonical order breaks
// ties).
int32_t nearest_site(const RegionMask& mask, Vec2 p);

} // namespace tfpp
