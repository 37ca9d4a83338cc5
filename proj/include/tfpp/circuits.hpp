#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "tfpp/lattice.hpp"
#include "tfpp/percolation.hpp"

namespace tfpp {

// Monochromatic yellow lattice path whose first site neighbors the left
// below-axis boundary and whose last site neighbors the right one, so it
// separates the inner boundary of a half-annulus from the outer one.
struct HalfCircuit {
    std::vector<int32_t> sites; // simple path, ordered left to right
};

// Disjoint nested circuits, outermost first.
struct CircuitStack {
    std::vector<HalfCircuit> circuits;
};

// Where a traced interface curve ends (the colorless hexagon class hit), or
// Closed for a loop that never leaves the colored area.
enum class CurveEnd : uint8_t { Closed, Dl, Dr, Di, Do, Other };

// Chain of dual (hexagon-boundary) edges, each separating one yellow from
// one blue hexagon under an effective coloring.
struct InterfaceCurve {
    std::vector<DualEdge> edges;       // yellow site first in each edge
    CurveEnd end_a = CurveEnd::Closed; // end reached tracing backward
    CurveEnd end_b = CurveEnd::Closed; // end reached tracing forward
    bool closed = false;

    bool end_l_and_r() const {
        return (end_a == CurveEnd::Dl && end_b == CurveEnd::Dr) ||
               (end_a == CurveEnd::Dr && end_b == CurveEnd::Dl);
    }
    DualEdge canonical_min_edge() const; // deduplication key
    void dump(std::ostream& os) const;   // one dual edge per line
};

// Color lookup used by the tracer; Color::Open acts as "colorless" and
// terminates curves.
using ColorLookup = std::function<Color(SiteCoord)>;

// Trace the full interface curve through the dual edge between adjacent
// sites y (yellow) and b (blue), in both directions.
InterfaceCurve trace_interface(const RegionMask& mask, const ColorLookup& color, SiteCoord y,
                               SiteCoord b);

// Outermost yellow half-circuit of a half-annulus under the given per-site
// activity filter (active = still part of the working region during
// peeling); nullopt iff blue reaches from the outer attachment to the inner
// boundary. `active` may be null meaning "all sites active".
std::optional<HalfCircuit> outermost_yellow_half_circuit(
    const RegionMask& mask, const Configuration& config,
    const std::vector<char>* active = nullptr);

// Maximum number of disjoint nested yellow half-circuits, by iterated
// outermost-circuit peeling; also returns the stack, outermost first.
std::pair<int, CircuitStack> rho_plus(const RegionMask& mask, const Configuration& config);

// Sites strictly inside circuit c: the part of `domain` (mask sites where
// domain[i] != 0; null = all) separated from the outer side by c, reachable
// from the inner boundary without touching c.
std::vector<char> inside_circuit(const RegionMask& mask, const HalfCircuit& c,
                                 const std::vector<char>* domain = nullptr);

// Sites strictly between two nested circuits (excluding both):
// inside(outer) minus inner minus inside(inner).
std::vector<int32_t> between_region(const RegionMask& mask, const HalfCircuit& outer,
                                    const HalfCircuit& inner);

// Number of interface half-loops separating the inner boundary from the
// outer one, with the outer boundary colored blue and all other boundary
// classes colorless. Refuses colorings that do not paint the outer boundary
// blue.
int count_interface_half_loops(const RegionMask& mask, const Configuration& config,
                               BoundaryColoring coloring = {Color::Open, Color::Open,
                                                            Color::Open, Color::Blue});

// The circuit-count-to-loop-count configuration rewrite: with the circuit
// stack C1..Cn (outermost first), flips alternate circuits and the gaps
// between consecutive circuits so that the n disjoint yellow circuits become
// n nested yellow/blue interface half-loops. Identity when n = 0.
Configuration color_switch(const RegionMask& mask, const Configuration& config);

} // namespace tfpp
