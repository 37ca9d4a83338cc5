#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace tfpp {

inline constexpr double kSqrt3 = 1.7320508075688772;

// Site of the triangular lattice in axial coordinates.
// Euclidean position: a*(1,0) + b*(1/2, sqrt(3)/2).
struct SiteCoord {
    int32_t a = 0;
    int32_t b = 0;
    friend bool operator==(SiteCoord, SiteCoord) = default;
};

// Canonical site order used everywhere: lexicographic in (b,a).
inline bool canonical_less(SiteCoord u, SiteCoord v) {
    return u.b != v.b ? u.b < v.b : u.a < v.a;
}

struct Vec2 {
    double x = 0, y = 0;
};

inline Vec2 position(SiteCoord s) {
    return {s.a + 0.5 * s.b, 0.5 * kSqrt3 * s.b};
}

// The 6 neighbors, counterclockwise starting at (1,0).
inline constexpr std::array<SiteCoord, 6> kNeighborOffsets = {{
    {1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1},
}};

inline std::array<SiteCoord, 6> neighbors(SiteCoord s) {
    std::array<SiteCoord, 6> out;
    for (int k = 0; k < 6; ++k)
        out[k] = {s.a + kNeighborOffsets[k].a, s.b + kNeighborOffsets[k].b};
    return out;
}

// Dual (hexagon) edge between two adjacent sites; canonical form keeps the
// canonically smaller site first.
struct DualEdge {
    SiteCoord left_site;
    SiteCoord right_site;
    DualEdge canonical() const {
        return canonical_less(left_site, right_site) ? *this
                                                     : DualEdge{right_site, left_site};
    }
    friend bool operator==(const DualEdge&, const DualEdge&) = default;
};

inline bool canonical_edge_less(const DualEdge& e, const DualEdge& f) {
    DualEdge a = e.canonical(), b = f.canonical();
    if (!(a.left_site == b.left_site)) return canonical_less(a.left_site, b.left_site);
    return canonical_less(a.right_site, b.right_site);
}

// ---------------------------------------------------------------------------
// Region specifications
// ---------------------------------------------------------------------------

struct HalfDiskSpec {
    int n; // radius, in lattice units
};
struct HalfAnnulusSpec {
    int r;
    int R;
};
struct SectorSpec {
    double alpha; // opening angle in (0, 2*pi)
    double delta; // lattice spacing; sector has unit radius before scaling
};
struct StripSpec {
    int m;
    int n;
    // Horizontal truncation: |Re| <= half_width (the continuum strip is
    // infinite; <= 0 means "use the default of sqrt(3)*(n-m) + 2", twice the
    // strip height, wide enough that truncation bias is negligible for the
    // vertical crossing statistics studied here).
    double half_width = 0.0;
};
struct PolygonSpec {
    std::vector<Vec2> vertices; // counterclockwise, in continuum units
    double delta;               // lattice spacing
};

using RegionSpec =
    std::variant<HalfDiskSpec, HalfAnnulusSpec, SectorSpec, StripSpec, PolygonSpec>;

std::string spec_name(const RegionSpec& spec);   // e.g. "half_annulus"
std::string spec_params(const RegionSpec& spec); // space-separated parameters
std::string spec_id(const RegionSpec& spec);     // "half_annulus 2 4"

struct RegionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class BoundaryClass : uint8_t { None, In, Dl, Dr, Di, Do };

// ---------------------------------------------------------------------------
// RegionMask
// ---------------------------------------------------------------------------

// Finite connected set of sites (= hexagons, apothem 1/2, circumradius
// 1/sqrt(3), centered at position(s)) plus the classified external site
// boundary. Immutable after construction.
class RegionMask {
public:
    const RegionSpec& spec() const { return spec_; }
    std::string id() const { return spec_id(spec_); }

    int64_t site_count() const { return static_cast<int64_t>(sites_.size()); }
    const std::vector<SiteCoord>& sites() const { return sites_; } // canonical order
    SiteCoord site(int32_t idx) const { return sites_[idx]; }

    // -1 when not a region site.
    int32_t site_index(SiteCoord s) const {
        int32_t c = cell(s);
        return c >= 0 ? c : -1;
    }
    bool contains(SiteCoord s) const { return cell(s) >= 0; }

    BoundaryClass classify(SiteCoord s) const {
        int32_t c = cell(s);
        if (c >= 0) return BoundaryClass::In;
        switch (c) {
            case kDl: return BoundaryClass::Dl;
            case kDr: return BoundaryClass::Dr;
            case kDi: return BoundaryClass::Di;
            case kDo: return BoundaryClass::Do;
            default: return BoundaryClass::None;
        }
    }

    const std::vector<SiteCoord>& boundary_l() const { return boundary_l_; }
    const std::vector<SiteCoord>& boundary_r() const { return boundary_r_; }
    const std::vector<SiteCoord>& boundary_i() const { return boundary_i_; }
    const std::vector<SiteCoord>& boundary_o() const { return boundary_o_; }

    // Region sites with at least one neighbor in the given boundary class.
    std::vector<int32_t> sites_adjacent_to(BoundaryClass cls) const;

    // Strip terminals ((-m,2m), (-n,2n)); empty for other variants.
    const std::vector<int32_t>& terminals() const { return terminals_; }

    // Bounding box (inclusive) of sites+boundary in (a,b) coordinates.
    int32_t a_min() const { return a_min_; }
    int32_t a_max() const { return a_max_; }
    int32_t b_min() const { return b_min_; }
    int32_t b_max() const { return b_max_; }

    void serialize(std::ostream& os) const;
    static RegionMask deserialize(std::istream& is);

    friend RegionMask build_region(const RegionSpec& spec);

private:
    static constexpr int32_t kNone = -1, kDl = -2, kDr = -3, kDi = -4, kDo = -5;

    int32_t cell(SiteCoord s) const {
        if (s.a < a_min_ || s.a > a_max_ || s.b < b_min_ || s.b > b_max_) return kNone;
        return grid_[static_cast<size_t>(s.b - b_min_) * stride_ + (s.a - a_min_)];
    }

    RegionSpec spec_;
    int32_t a_min_ = 0, a_max_ = -1, b_min_ = 0, b_max_ = -1;
    size_t stride_ = 0;
    std::vector<int32_t> grid_;
    std::vector<SiteCoord> sites_;
    std::vector<SiteCoord> boundary_l_, boundary_r_, boundary_i_, boundary_o_;
    std::vector<int32_t> terminals_;

    void index_from_sites(); // fills grid_/bbox from sites_ (+1 ring)
    void classify_boundary();
};

RegionMask build_region(const RegionSpec& spec);

// ---------------------------------------------------------------------------
// Hexagon geometry helpers (exposed for tests)
// ---------------------------------------------------------------------------

// Vertices of the dual hexagon of site s (circumradius 1/sqrt(3), vertices at
// angles 30 + 60k degrees, so edges bisect lattice bonds).
std::array<Vec2, 6> hex_vertices(SiteCoord s);

// Closed-intersection membership tests (tolerance 1e-9 in favor of inclusion).
bool hex_intersects_half_disk(SiteCoord s, double radius);
bool hex_intersects_sector(SiteCoord s, double alpha, double radius);
bool hex_intersects_polygon(SiteCoord s, const std::vector<Vec2>& poly);
bool hex_intersects_segment(SiteCoord s, Vec2 p, Vec2 q);

} // namespace tfpp
