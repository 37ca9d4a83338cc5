#include "tfpp/circuits.hpp"

#include <algorithm>
#include <deque>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace tfpp {

namespace {

int offset_index(SiteCoord from, SiteCoord to) {
    int32_t da = to.a - from.a, db = to.b - from.b;
    for (int k = 0; k < 6; ++k)
        if (kNeighborOffsets[k].a == da && kNeighborOffsets[k].b == db) return k;
    throw std::logic_error("offset_index: sites not adjacent");
}

SiteCoord step_offset(SiteCoord s, int k) {
    k = ((k % 6) + 6) % 6;
    return {s.a + kNeighborOffsets[k].a, s.b + kNeighborOffsets[k].b};
}

CurveEnd end_class(const RegionMask& mask, SiteCoord s) {
    switch (mask.classify(s)) {
        case BoundaryClass::Dl: return CurveEnd::Dl;
        case BoundaryClass::Dr: return CurveEnd::Dr;
        case BoundaryClass::Di: return CurveEnd::Di;
        case BoundaryClass::Do: return CurveEnd::Do;
        default: return CurveEnd::Other;
    }
}

// Directed position on an interface: the dual edge between yellow site y and
// blue site b, advancing toward the common neighbor at offset index
// idx(b-y)+side.
struct WalkState {
    SiteCoord y, b;
    int side; // +1 or -1
    friend bool operator==(const WalkState&, const WalkState&) = default;
};

// One tracing step. Returns true while the curve continues; on termination
// sets `end` to the class of the colorless hexagon reached.
bool walk_step(const RegionMask& mask, const ColorLookup& color, WalkState& st, CurveEnd& end) {
    int k = offset_index(st.y, st.b);
    SiteCoord c = step_offset(st.y, k + st.side);
    Color col = color(c);
    if (col == Color::Open) {
        end = end_class(mask, c);
        return false;
    }
    if (col == Color::Yellow) {
        // interface continues between c and b
        int j = offset_index(c, st.b);
        int side = (step_offset(c, j + 1) == st.y) ? -1 : +1;
        st = {c, st.b, side};
    } else {
        // interface continues between y and c
        int j = offset_index(st.y, c);
        int side = (step_offset(st.y, j + 1) == st.b) ? -1 : +1;
        st = {st.y, c, side};
    }
    return true;
}

constexpr size_t kMaxCurveSteps = 100'000'000;

} // namespace

DualEdge InterfaceCurve::canonical_min_edge() const {
    DualEdge best = edges.front().canonical();
    for (auto& e : edges) {
        DualEdge c = e.canonical();
        if (canonical_edge_less(c, best)) best = c;
    }
    return best;
}

void InterfaceCurve::dump(std::ostream& os) const {
    for (auto& e : edges)
        os << e.left_site.a << " " << e.left_site.b << " " << e.right_site.a << " "
           << e.right_site.b << "\n";
}

InterfaceCurve trace_interface(const RegionMask& mask, const ColorLookup& color, SiteCoord y,
                               SiteCoord b) {
    if (color(y) != Color::Yellow || color(b) != Color::Blue)
        throw std::invalid_argument("trace_interface: seed edge is not yellow/blue");
    InterfaceCurve curve;

    WalkState start{y, b, +1};
    std::vector<WalkState> fwd{start};
    WalkState st = start;
    CurveEnd end_b = CurveEnd::Closed;
    while (walk_step(mask, color, st, end_b)) {
        if (st == start) { // closed loop
            curve.closed = true;
            break;
        }
        fwd.push_back(st);
        if (fwd.size() > kMaxCurveSteps) throw std::runtime_error("trace_interface: runaway");
    }

    std::vector<WalkState> bwd;
    CurveEnd end_a = CurveEnd::Closed;
    if (!curve.closed) {
        st = {y, b, -1};
        while (walk_step(mask, color, st, end_a)) {
            bwd.push_back(st);
            if (bwd.size() > kMaxCurveSteps) throw std::runtime_error("trace_interface: runaway");
        }
    }

    curve.end_a = end_a;
    curve.end_b = end_b;
    curve.edges.reserve(fwd.size() + bwd.size());
    for (auto it = bwd.rbegin(); it != bwd.rend(); ++it)
        curve.edges.push_back({it->y, it->b});
    for (auto& w : fwd) curve.edges.push_back({w.y, w.b});
    return curve;
}

// ---------------------------------------------------------------------------
// Outermost circuit extraction
// ---------------------------------------------------------------------------

namespace {

struct BlueSide {
    std::vector<char> in_x;  // active blue sites reachable from the exterior
    bool touches_inner = false;
};

// Flood the blue cluster attached to the exterior (= inactive region sites
// plus the outer boundary). touches_inner is set when the blue side reaches
// the inner boundary, i.e. a blue crossing exists and no further yellow
// circuit does.
BlueSide flood_exterior_blue(const RegionMask& mask, const Configuration& config,
                             const std::vector<char>* active) {
    const int64_t n = mask.site_count();
    auto is_active = [&](int32_t i) { return !active || (*active)[i]; };
    BlueSide out;
    out.in_x.assign(n, 0);

    std::deque<int32_t> queue;
    auto adj_inner = [&](SiteCoord s) {
        for (auto nb : neighbors(s))
            if (mask.classify(nb) == BoundaryClass::Di) return true;
        return false;
    };

    for (int64_t i = 0; i < n; ++i) {
        SiteCoord s = mask.site(static_cast<int32_t>(i));
        if (!is_active(static_cast<int32_t>(i))) {
            // exterior site touching the inner boundary: degenerate crossing
            if (adj_inner(s)) out.touches_inner = true;
            continue;
        }
        if (config.bit(i)) continue;
        bool seed = false;
        for (auto nb : neighbors(s)) {
            BoundaryClass cls = mask.classify(nb);
            if (cls == BoundaryClass::Do) seed = true;
            if (cls == BoundaryClass::In && !is_active(mask.site_index(nb))) seed = true;
        }
        if (seed) {
            out.in_x[i] = 1;
            queue.push_back(static_cast<int32_t>(i));
        }
    }
    while (!queue.empty()) {
        int32_t u = queue.front();
        queue.pop_front();
        SiteCoord su = mask.site(u);
        if (adj_inner(su)) out.touches_inner = true;
        for (auto nb : neighbors(su)) {
            int32_t v = mask.site_index(nb);
            if (v < 0 || out.in_x[v] || !is_active(v) || config.bit(v)) continue;
            out.in_x[v] = 1;
            queue.push_back(v);
        }
    }
    return out;
}

// Remove loops from a site sequence, keeping first occurrences.
std::vector<int32_t> loop_erase(const std::vector<int32_t>& seq) {
    std::vector<int32_t> path;
    std::unordered_map<int32_t, size_t> pos;
    for (int32_t v : seq) {
        auto it = pos.find(v);
        if (it != pos.end()) {
            while (path.size() > it->second + 1) {
                pos.erase(path.back());
                path.pop_back();
            }
        } else {
            pos[v] = path.size();
            path.push_back(v);
        }
    }
    return path;
}

} // namespace

std::optional<HalfCircuit> outermost_yellow_half_circuit(const RegionMask& mask,
                                                         const Configuration& config,
                                                         const std::vector<char>* active) {
    if (!std::holds_alternative<HalfAnnulusSpec>(mask.spec()))
        throw std::invalid_argument("outermost_yellow_half_circuit: expects half_annulus");
    auto is_active = [&](int32_t i) { return !active || (*active)[i]; };

    BlueSide side = flood_exterior_blue(mask, config, active);
    if (side.touches_inner) return std::nullopt;

    // Effective coloring: blue side = exterior + its attached blue cluster;
    // yellow = active yellow sites; everything else colorless.
    ColorLookup color = [&](SiteCoord s) -> Color {
        switch (mask.classify(s)) {
            case BoundaryClass::Do: return Color::Blue;
            case BoundaryClass::In: {
                int32_t i = mask.site_index(s);
                if (!is_active(i) || side.in_x[i]) return Color::Blue;
                return config.bit(i) ? Color::Yellow : Color::Open; // enclosed blue: colorless
            }
            default: return Color::Open;
        }
    };

    // Seed from every exposed yellow/blue-side adjacency; the circuit is the
    // yellow side of the unique curve running from the left below-axis
    // boundary to the right one.
    std::set<std::pair<std::pair<int32_t, int32_t>, std::pair<int32_t, int32_t>>> seen;
    auto edge_key = [](DualEdge e) {
        DualEdge c = e.canonical();
        return std::make_pair(std::make_pair(c.left_site.a, c.left_site.b),
                              std::make_pair(c.right_site.a, c.right_site.b));
    };
    std::optional<InterfaceCurve> crossing;
    for (int64_t i = 0; i < mask.site_count(); ++i) {
        SiteCoord s = mask.site(static_cast<int32_t>(i));
        if (!is_active(static_cast<int32_t>(i)) || !config.bit(i)) continue;
        for (auto nb : neighbors(s)) {
            if (color(nb) != Color::Blue) continue;
            if (!seen.insert(edge_key({s, nb})).second) continue;
            InterfaceCurve curve = trace_interface(mask, color, s, nb);
            for (auto& e : curve.edges) seen.insert(edge_key(e));
            if (curve.end_l_and_r()) {
                if (crossing)
                    throw std::runtime_error(
                        "outermost_yellow_half_circuit: multiple crossing curves");
                crossing = std::move(curve);
            }
        }
    }
    if (!crossing)
        throw std::runtime_error(
            "outermost_yellow_half_circuit: no crossing curve despite no blue crossing");

    // Orient left -> right, take the yellow flank, straighten it.
    if (crossing->end_a == CurveEnd::Dr)
        std::reverse(crossing->edges.begin(), crossing->edges.end());
    std::vector<int32_t> seq;
    for (auto& e : crossing->edges) {
        int32_t idx = mask.site_index(e.left_site); // yellow site stored first
        if (seq.empty() || seq.back() != idx) seq.push_back(idx);
    }
    HalfCircuit c;
    c.sites = loop_erase(seq);
    return c;
}

std::vector<char> inside_circuit(const RegionMask& mask, const HalfCircuit& c,
                                 const std::vector<char>* domain) {
    const int64_t n = mask.site_count();
    std::vector<char> on_c(n, 0);
    for (int32_t v : c.sites) on_c[v] = 1;
    auto usable = [&](int32_t i) { return (!domain || (*domain)[i]) && !on_c[i]; };

    std::vector<char> inside(n, 0);
    std::deque<int32_t> queue;
    for (int64_t i = 0; i < n; ++i) {
        if (!usable(static_cast<int32_t>(i))) continue;
        for (auto nb : neighbors(mask.site(static_cast<int32_t>(i))))
            if (mask.classify(nb) == BoundaryClass::Di) {
                inside[i] = 1;
                queue.push_back(static_cast<int32_t>(i));
                break;
            }
    }
    while (!queue.empty()) {
        int32_t u = queue.front();
        queue.pop_front();
        for (auto nb : neighbors(mask.site(u))) {
            int32_t v = mask.site_index(nb);
            if (v < 0 || inside[v] || !usable(v)) continue;
            inside[v] = 1;
            queue.push_back(v);
        }
    }
    return inside;
}

std::vector<int32_t> between_region(const RegionMask& mask, const HalfCircuit& outer,
                                    const HalfCircuit& inner) {
    std::vector<char> in_outer = inside_circuit(mask, outer);
    for (int32_t v : inner.sites)
        if (!in_outer[v]) throw std::invalid_argument("between_region: circuits not nested");
    std::vector<char> in_inner = inside_circuit(mask, inner);
    std::vector<char> on_inner(mask.site_count(), 0);
    for (int32_t v : inner.sites) on_inner[v] = 1;
    std::vector<int32_t> out;
    for (int64_t i = 0; i < mask.site_count(); ++i)
        if (in_outer[i] && !on_inner[i] && !in_inner[i]) out.push_back(static_cast<int32_t>(i));
    return out;
}

std::pair<int, CircuitStack> rho_plus(const RegionMask& mask, const Configuration& config) {
    CircuitStack stack;
    std::vector<char> active(mask.site_count(), 1);
    while (true) {
        auto c = outermost_yellow_half_circuit(mask, config, &active);
        if (!c) break;
        active = inside_circuit(mask, *c, &active);
        stack.circuits.push_back(std::move(*c));
    }
    return {static_cast<int>(stack.circuits.size()), std::move(stack)};
}

int count_interface_half_loops(const RegionMask& mask, const Configuration& config,
                               BoundaryColoring coloring) {
    if (!std::holds_alternative<HalfAnnulusSpec>(mask.spec()))
        throw std::invalid_argument("count_interface_half_loops: expects half_annulus");
    if (coloring.o != Color::Blue)
        throw std::invalid_argument(
            "count_interface_half_loops: defined only with a blue outer boundary");
    if (coloring.l != Color::Open || coloring.r != Color::Open || coloring.i != Color::Open)
        throw std::invalid_argument(
            "count_interface_half_loops: left/right/inner boundaries must stay uncolored");

    ColorLookup color = [&](SiteCoord s) -> Color {
        switch (mask.classify(s)) {
            case BoundaryClass::Do: return Color::Blue;
            case BoundaryClass::In:
                return config.bit(mask.site_index(s)) ? Color::Yellow : Color::Blue;
            default: return Color::Open;
        }
    };

    // Radial column of pairwise-adjacent hexagons just right of the
    // imaginary axis; every curve separating inner from outer must cross it.
    auto column_site = [](int32_t b) -> SiteCoord {
        return {b % 2 == 0 ? -b / 2 : -(b - 1) / 2, b};
    };

    std::set<std::pair<std::pair<int32_t, int32_t>, std::pair<int32_t, int32_t>>> seen;
    auto edge_key = [](DualEdge e) {
        DualEdge c = e.canonical();
        return std::make_pair(std::make_pair(c.left_site.a, c.left_site.b),
                              std::make_pair(c.right_site.a, c.right_site.b));
    };

    int count = 0;
    for (int32_t b = std::max(mask.b_min(), 0); b < mask.b_max(); ++b) {
        SiteCoord lo = column_site(b), hi = column_site(b + 1);
        Color cl = color(lo), ch = color(hi);
        if (cl == Color::Open || ch == Color::Open || cl == ch) continue;
        SiteCoord y = cl == Color::Yellow ? lo : hi;
        SiteCoord bl = cl == Color::Yellow ? hi : lo;
        if (!seen.insert(edge_key({y, bl})).second) continue;
        InterfaceCurve curve = trace_interface(mask, color, y, bl);
        for (auto& e : curve.edges) seen.insert(edge_key(e));
        if (curve.end_l_and_r()) ++count;
    }
    return count;
}

Configuration color_switch(const RegionMask& mask, const Configuration& config) {
    auto [n, stack] = rho_plus(mask, config);
    Configuration out = config;
    if (n == 0) return out;

    auto flip_where = [&](const std::vector<char>& flags) {
        for (int64_t i = 0; i < mask.site_count(); ++i)
            if (flags[i]) out.flip(i);
    };

    // Alternate circuits C2, C4, ... (outermost = C1).
    for (int i = 1; i < n; i += 2)
        for (int32_t v : stack.circuits[i].sites) out.flip(v);
    // Gaps between consecutive circuit pairs (C1,C2), (C3,C4), ...
    for (int j = 0; 2 * j + 1 < n; ++j)
        for (int32_t v : between_region(mask, stack.circuits[2 * j], stack.circuits[2 * j + 1]))
            out.flip(v);
    // Odd count: everything strictly inside the innermost circuit flips too.
    if (n % 2 == 1) flip_where(inside_circuit(mask, stack.circuits[n - 1]));
    return out;
}

} // namespace tfpp
