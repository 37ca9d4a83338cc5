#include "tfpp/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <functional>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace tfpp {

namespace {

constexpr double kGeomEps = 1e-9;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// --- small planar helpers ---------------------------------------------------

double dot(Vec2 u, Vec2 v) { return u.x * v.x + u.y * v.y; }
double cross(Vec2 u, Vec2 v) { return u.x * v.y - u.y * v.x; }
Vec2 sub(Vec2 u, Vec2 v) { return {u.x - v.x, u.y - v.y}; }
double norm(Vec2 u) { return std::hypot(u.x, u.y); }

double point_segment_dist(Vec2 p, Vec2 a, Vec2 b) {
    Vec2 ab = sub(b, a);
    double len2 = dot(ab, ab);
    if (len2 == 0.0) return norm(sub(p, a));
    double t = std::clamp(dot(sub(p, a), ab) / len2, 0.0, 1.0);
    return norm(sub(p, Vec2{a.x + t * ab.x, a.y + t * ab.y}));
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    double d1 = cross(sub(b, a), sub(c, a));
    double d2 = cross(sub(b, a), sub(d, a));
    double d3 = cross(sub(d, c), sub(a, c));
    double d4 = cross(sub(d, c), sub(b, c));
    if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0))) return true;
    // touching / collinear cases via distance
    double dist = std::min(std::min(point_segment_dist(a, c, d), point_segment_dist(b, c, d)),
                           std::min(point_segment_dist(c, a, b), point_segment_dist(d, a, b)));
    return dist <= kGeomEps;
}

// Convex polygon as a fixed-capacity vertex list (clipping a hexagon by two
// half-planes needs at most 8 + margin vertices).
struct Poly {
    std::array<Vec2, 16> v;
    int n = 0;
    void push(Vec2 p) { v[n++] = p; }
};

// Clip convex polygon by half-plane dot(normal, p) + off >= 0.
Poly clip_halfplane(const Poly& in, Vec2 normal, double off) {
    Poly out;
    for (int i = 0; i < in.n; ++i) {
        Vec2 p = in.v[i];
        Vec2 q = in.v[(i + 1) % in.n];
        double fp = dot(normal, p) + off;
        double fq = dot(normal, q) + off;
        if (fp >= -kGeomEps) out.push(p);
        if ((fp > kGeomEps && fq < -kGeomEps) || (fp < -kGeomEps && fq > kGeomEps)) {
            double t = fp / (fp - fq);
            out.push({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
        }
    }
    return out;
}

// Distance from the origin to a convex polygon (0 if inside).
double origin_dist(const Poly& poly) {
    if (poly.n == 0) return std::numeric_limits<double>::infinity();
    if (poly.n == 1) return norm(poly.v[0]);
    if (poly.n == 2) return point_segment_dist({0, 0}, poly.v[0], poly.v[1]);
    bool inside = true;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < poly.n; ++i) {
        Vec2 p = poly.v[i];
        Vec2 q = poly.v[(i + 1) % poly.n];
        if (cross(sub(q, p), sub(Vec2{0, 0}, p)) < -kGeomEps) inside = false;
        best = std::min(best, point_segment_dist({0, 0}, p, q));
    }
    return inside ? 0.0 : best;
}

Poly hex_poly(SiteCoord s) {
    auto verts = hex_vertices(s);
    Poly p;
    for (auto& v : verts) p.push(v);
    return p;
}

bool point_in_hex(Vec2 p, SiteCoord s) {
    auto hp = hex_poly(s);
    for (int i = 0; i < 6; ++i) {
        Vec2 a = hp.v[i], b = hp.v[(i + 1) % 6];
        if (cross(sub(b, a), sub(p, a)) < -kGeomEps) return false;
    }
    return true;
}

// Crossing-number point-in-polygon; boundary points count as inside.
bool point_in_polygon(Vec2 p, const std::vector<Vec2>& poly) {
    int n = static_cast<int>(poly.size());
    for (int i = 0; i < n; ++i)
        if (point_segment_dist(p, poly[i], poly[(i + 1) % n]) <= kGeomEps) return true;
    bool in = false;
    for (int i = 0; i < n; ++i) {
        Vec2 a = poly[i], b = poly[(i + 1) % n];
        if ((a.y > p.y) != (b.y > p.y)) {
            double xi = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (xi > p.x) in = !in;
        }
    }
    return in;
}

// Hexagon vs convex sector of opening <= pi anchored at the origin,
// spanned counterclockwise from angle lo to angle hi.
bool hex_intersects_convex_sector(SiteCoord s, double lo, double hi, double radius) {
    Poly p = hex_poly(s);
    // inward normals of the two radial edges
    p = clip_halfplane(p, {-std::sin(lo), std::cos(lo)}, 0.0);
    if (p.n == 0) return false;
    p = clip_halfplane(p, {std::sin(hi), -std::cos(hi)}, 0.0);
    if (p.n == 0) return false;
    return origin_dist(p) <= radius + kGeomEps;
}

} // namespace

std::array<Vec2, 6> hex_vertices(SiteCoord s) {
    static const std::array<Vec2, 6> offsets = [] {
        std::array<Vec2, 6> o{};
        const double r = 1.0 / kSqrt3;
        for (int k = 0; k < 6; ++k) {
            double ang = M_PI / 6.0 + k * M_PI / 3.0;
            o[k] = {r * std::cos(ang), r * std::sin(ang)};
        }
        return o;
    }();
    Vec2 c = position(s);
    std::array<Vec2, 6> out;
    for (int k = 0; k < 6; ++k) out[k] = {c.x + offsets[k].x, c.y + offsets[k].y};
    return out;
}

bool hex_intersects_half_disk(SiteCoord s, double radius) {
    Poly p = clip_halfplane(hex_poly(s), {0, 1}, 0.0); // y >= 0
    if (p.n == 0) return false;
    return origin_dist(p) <= radius + kGeomEps;
}

bool hex_intersects_sector(SiteCoord s, double alpha, double radius) {
    if (alpha <= M_PI + kGeomEps)
        return hex_intersects_convex_sector(s, 0.0, alpha, radius);
    return hex_intersects_convex_sector(s, 0.0, alpha / 2, radius) ||
           hex_intersects_convex_sector(s, alpha / 2, alpha, radius);
}

bool hex_intersects_polygon(SiteCoord s, const std::vector<Vec2>& poly) {
    auto hv = hex_vertices(s);
    for (auto& v : hv)
        if (point_in_polygon(v, poly)) return true;
    for (auto& v : poly)
        if (point_in_hex(v, s)) return true;
    int n = static_cast<int>(poly.size());
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < n; ++j)
            if (segments_intersect(hv[i], hv[(i + 1) % 6], poly[j], poly[(j + 1) % n]))
                return true;
    return false;
}

bool hex_intersects_segment(SiteCoord s, Vec2 p, Vec2 q) {
    if (point_in_hex(p, s) || point_in_hex(q, s)) return true;
    auto hv = hex_vertices(s);
    for (int i = 0; i < 6; ++i)
        if (segments_intersect(hv[i], hv[(i + 1) % 6], p, q)) return true;
    return false;
}

// ---------------------------------------------------------------------------
// RegionSpec formatting
// ---------------------------------------------------------------------------

std::string spec_name(const RegionSpec& spec) {
    struct V {
        std::string operator()(const HalfDiskSpec&) const { return "half_disk"; }
        std::string operator()(const HalfAnnulusSpec&) const { return "half_annulus"; }
        std::string operator()(const SectorSpec&) const { return "sector"; }
        std::string operator()(const StripSpec&) const { return "strip"; }
        std::string operator()(const PolygonSpec&) const { return "polygon"; }
    };
    return std::visit(V{}, spec);
}

std::string spec_params(const RegionSpec& spec) {
    struct V {
        std::string operator()(const HalfDiskSpec& s) const { return std::to_string(s.n); }
        std::string operator()(const HalfAnnulusSpec& s) const {
            return std::to_string(s.r) + " " + std::to_string(s.R);
        }
        std::string operator()(const SectorSpec& s) const {
            return fmt_double(s.alpha) + " " + fmt_double(s.delta);
        }
        std::string operator()(const StripSpec& s) const {
            return std::to_string(s.m) + " " + std::to_string(s.n) + " " +
                   fmt_double(s.half_width);
        }
        std::string operator()(const PolygonSpec& s) const {
            std::string out = fmt_double(s.delta) + " " + std::to_string(s.vertices.size());
            for (auto& v : s.vertices)
                out += " " + fmt_double(v.x) + " " + fmt_double(v.y);
            return out;
        }
    };
    return std::visit(V{}, spec);
}

std::string spec_id(const RegionSpec& spec) { return spec_name(spec) + " " + spec_params(spec); }

// ---------------------------------------------------------------------------
// Region construction
// ---------------------------------------------------------------------------

namespace {

void validate(const RegionSpec& spec) {
    if (auto* h = std::get_if<HalfDiskSpec>(&spec)) {
        if (h->n < 1) throw RegionError("half_disk: n must be positive");
    } else if (auto* a = std::get_if<HalfAnnulusSpec>(&spec)) {
        if (a->r < 1 || a->R <= a->r) throw RegionError("half_annulus: need 1 <= r < R");
    } else if (auto* s = std::get_if<SectorSpec>(&spec)) {
        if (!(s->alpha > 0 && s->alpha < 2 * M_PI)) throw RegionError("sector: alpha in (0,2pi)");
        if (!(s->delta > 0)) throw RegionError("sector: delta must be positive");
    } else if (auto* t = std::get_if<StripSpec>(&spec)) {
        if (t->m >= t->n) throw RegionError("strip: need m < n");
    } else if (auto* p = std::get_if<PolygonSpec>(&spec)) {
        if (p->vertices.size() < 3) throw RegionError("polygon: need >= 3 vertices");
        if (!(p->delta > 0)) throw RegionError("polygon: delta must be positive");
    }
}

} // namespace

RegionMask build_region(const RegionSpec& spec_in) {
    validate(spec_in);
    RegionSpec spec = spec_in;
    if (auto* t = std::get_if<StripSpec>(&spec); t && t->half_width <= 0)
        t->half_width = kSqrt3 * (t->n - t->m) + 2.0;

    RegionMask mask;
    mask.spec_ = spec;

    // Scan window in Euclidean coordinates and membership predicate.
    double xlo, xhi, ylo, yhi;
    std::function<bool(SiteCoord)> member;
    std::vector<SiteCoord> forced; // sites included regardless of predicate

    if (auto* h = std::get_if<HalfDiskSpec>(&spec)) {
        double n = h->n;
        xlo = -n - 2, xhi = n + 2, ylo = -2, yhi = n + 2;
        member = [n](SiteCoord s) { return hex_intersects_half_disk(s, n); };
    } else if (auto* a = std::get_if<HalfAnnulusSpec>(&spec)) {
        double r = a->r, R = a->R;
        xlo = -R - 2, xhi = R + 2, ylo = -2, yhi = R + 2;
        member = [r, R](SiteCoord s) {
            return hex_intersects_half_disk(s, R) && !hex_intersects_half_disk(s, r);
        };
    } else if (auto* sc = std::get_if<SectorSpec>(&spec)) {
        double rad = 1.0 / sc->delta, alpha = sc->alpha;
        xlo = -rad - 2, xhi = rad + 2, ylo = -rad - 2, yhi = rad + 2;
        member = [alpha, rad](SiteCoord s) { return hex_intersects_sector(s, alpha, rad); };
    } else if (auto* st = std::get_if<StripSpec>(&spec)) {
        int m = st->m, n = st->n;
        double hw = st->half_width;
        xlo = -hw - 2, xhi = hw + 2;
        ylo = kSqrt3 * m - 2, yhi = kSqrt3 * n + 2;
        member = [m, n, hw](SiteCoord s) {
            if (s.b <= 2 * m || s.b > 2 * n) return false;
            double x = s.a + 0.5 * s.b;
            return std::abs(x) <= hw + kGeomEps;
        };
        forced.push_back({-m, 2 * m});
        mask.terminals_ = {0, 0}; // resolved after indexing
    } else {
        auto& pg = std::get<PolygonSpec>(spec);
        std::vector<Vec2> scaled;
        scaled.reserve(pg.vertices.size());
        double sxlo = 1e300, sxhi = -1e300, sylo = 1e300, syhi = -1e300;
        for (auto& v : pg.vertices) {
            Vec2 w{v.x / pg.delta, v.y / pg.delta};
            scaled.push_back(w);
            sxlo = std::min(sxlo, w.x), sxhi = std::max(sxhi, w.x);
            sylo = std::min(sylo, w.y), syhi = std::max(syhi, w.y);
        }
        xlo = sxlo - 2, xhi = sxhi + 2, ylo = sylo - 2, yhi = syhi + 2;
        member = [scaled](SiteCoord s) { return hex_intersects_polygon(s, scaled); };
    }

    // Row scan, b then a: yields canonical (b,a) site order directly.
    int32_t b_lo = static_cast<int32_t>(std::floor(2.0 * ylo / kSqrt3)) - 1;
    int32_t b_hi = static_cast<int32_t>(std::ceil(2.0 * yhi / kSqrt3)) + 1;
    for (int32_t b = b_lo; b <= b_hi; ++b) {
        int32_t a_lo = static_cast<int32_t>(std::floor(xlo - 0.5 * b)) - 1;
        int32_t a_hi = static_cast<int32_t>(std::ceil(xhi - 0.5 * b)) + 1;
        for (int32_t a = a_lo; a <= a_hi; ++a) {
            SiteCoord s{a, b};
            if (member(s)) mask.sites_.push_back(s);
        }
    }
    for (auto s : forced)
        if (std::find(mask.sites_.begin(), mask.sites_.end(), s) == mask.sites_.end())
            mask.sites_.push_back(s);
    std::sort(mask.sites_.begin(), mask.sites_.end(), canonical_less);

    if (mask.sites_.empty()) throw RegionError("region empty: " + mask.id());

    mask.index_from_sites();

    // Connectivity is asserted, not repaired.
    {
        std::vector<char> seen(mask.sites_.size(), 0);
        std::deque<int32_t> queue{0};
        seen[0] = 1;
        size_t reached = 1;
        while (!queue.empty()) {
            int32_t u = queue.front();
            queue.pop_front();
            for (auto nb : neighbors(mask.sites_[u])) {
                int32_t v = mask.site_index(nb);
                if (v >= 0 && !seen[v]) {
                    seen[v] = 1;
                    ++reached;
                    queue.push_back(v);
                }
            }
        }
        if (reached != mask.sites_.size())
            throw RegionError("region disconnected: " + mask.id());
    }

    mask.classify_boundary();

    if (std::holds_alternative<StripSpec>(spec)) {
        auto& st = std::get<StripSpec>(spec);
        mask.terminals_ = {mask.site_index({-st.m, 2 * st.m}),
                           mask.site_index({-st.n, 2 * st.n})};
        if (mask.terminals_[0] < 0 || mask.terminals_[1] < 0)
            throw RegionError("strip terminals missing: " + mask.id());
    }
    return mask;
}

void RegionMask::index_from_sites() {
    a_min_ = sites_[0].a, a_max_ = sites_[0].a;
    b_min_ = sites_[0].b, b_max_ = sites_[0].b;
    for (auto s : sites_) {
        a_min_ = std::min(a_min_, s.a), a_max_ = std::max(a_max_, s.a);
        b_min_ = std::min(b_min_, s.b), b_max_ = std::max(b_max_, s.b);
    }
    a_min_ -= 1, a_max_ += 1, b_min_ -= 1, b_max_ += 1; // room for the boundary ring
    stride_ = static_cast<size_t>(a_max_ - a_min_ + 1);
    grid_.assign(stride_ * (b_max_ - b_min_ + 1), kNone);
    for (size_t i = 0; i < sites_.size(); ++i) {
        SiteCoord s = sites_[i];
        grid_[static_cast<size_t>(s.b - b_min_) * stride_ + (s.a - a_min_)] =
            static_cast<int32_t>(i);
    }
}

void RegionMask::classify_boundary() {
    auto classify_site = [this](SiteCoord s) -> int32_t {
        Vec2 p = position(s);
        if (auto* h = std::get_if<HalfDiskSpec>(&spec_)) {
            (void)h;
            if (p.y < -kGeomEps) return p.x < 0 ? kDl : kDr;
            return kDo;
        }
        if (auto* a = std::get_if<HalfAnnulusSpec>(&spec_)) {
            if (p.y < -kGeomEps) return p.x < 0 ? kDl : kDr;
            if (hex_intersects_half_disk(s, a->r)) return kDi;
            return kDo;
        }
        if (auto* sc = std::get_if<SectorSpec>(&spec_)) {
            double rad = 1.0 / sc->delta;
            Vec2 tip{rad * std::cos(sc->alpha), rad * std::sin(sc->alpha)};
            double dr = point_segment_dist(p, {0, 0}, {rad, 0});
            double dl = point_segment_dist(p, {0, 0}, tip);
            double phi = std::atan2(p.y, p.x);
            if (phi < 0) phi += 2 * M_PI;
            double da = phi <= sc->alpha ? std::abs(norm(p) - rad)
                                         : std::min(norm(sub(p, Vec2{rad, 0})), norm(sub(p, tip)));
            if (dl <= dr && dl <= da) return kDl;
            if (dr <= da) return kDr;
            return kDo;
        }
        return kDo; // strip, polygon
    };

    std::vector<std::pair<SiteCoord, int32_t>> found;
    for (auto s : sites_) {
        for (auto nb : neighbors(s)) {
            size_t idx = static_cast<size_t>(nb.b - b_min_) * stride_ + (nb.a - a_min_);
            if (grid_[idx] == kNone) {
                int32_t cls = classify_site(nb);
                grid_[idx] = cls;
                found.emplace_back(nb, cls);
            }
        }
    }
    std::sort(found.begin(), found.end(),
              [](auto& u, auto& v) { return canonical_less(u.first, v.first); });
    for (auto& [s, cls] : found) {
        switch (cls) {
            case kDl: boundary_l_.push_back(s); break;
            case kDr: boundary_r_.push_back(s); break;
            case kDi: boundary_i_.push_back(s); break;
            default: boundary_o_.push_back(s); break;
        }
    }
}

std::vector<int32_t> RegionMask::sites_adjacent_to(BoundaryClass cls) const {
    std::vector<int32_t> out;
    for (size_t i = 0; i < sites_.size(); ++i) {
        for (auto nb : neighbors(sites_[i])) {
            if (classify(nb) == cls) {
                out.push_back(static_cast<int32_t>(i));
                break;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialization: "region <variant> <params>" header, then "a b class" lines.
// ---------------------------------------------------------------------------

void RegionMask::serialize(std::ostream& os) const {
    os << "region " << spec_id(spec_) << "\n";
    struct Row {
        SiteCoord s;
        const char* cls;
    };
    std::vector<Row> rows;
    rows.reserve(sites_.size() + boundary_l_.size() + boundary_r_.size() + boundary_i_.size() +
                 boundary_o_.size());
    for (auto s : sites_) rows.push_back({s, "in"});
    for (auto s : boundary_l_) rows.push_back({s, "dl"});
    for (auto s : boundary_r_) rows.push_back({s, "dr"});
    for (auto s : boundary_i_) rows.push_back({s, "di"});
    for (auto s : boundary_o_) rows.push_back({s, "do"});
    std::sort(rows.begin(), rows.end(),
              [](const Row& u, const Row& v) { return canonical_less(u.s, v.s); });
    for (auto& r : rows) os << r.s.a << " " << r.s.b << " " << r.cls << "\n";
}

RegionMask RegionMask::deserialize(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw RegionError("region deserialize: empty input");
    std::istringstream hs(line);
    std::string tag, name;
    hs >> tag >> name;
    if (tag != "region") throw RegionError("region deserialize: bad header");

    RegionMask mask;
    if (name == "half_disk") {
        HalfDiskSpec s{};
        hs >> s.n;
        mask.spec_ = s;
    } else if (name == "half_annulus") {
        HalfAnnulusSpec s{};
        hs >> s.r >> s.R;
        mask.spec_ = s;
    } else if (name == "sector") {
        SectorSpec s{};
        hs >> s.alpha >> s.delta;
        mask.spec_ = s;
    } else if (name == "strip") {
        StripSpec s{};
        hs >> s.m >> s.n >> s.half_width;
        mask.spec_ = s;
    } else if (name == "polygon") {
        PolygonSpec s{};
        size_t k = 0;
        hs >> s.delta >> k;
        s.vertices.resize(k);
        for (auto& v : s.vertices) hs >> v.x >> v.y;
        mask.spec_ = s;
    } else {
        throw RegionError("region deserialize: unknown variant " + name);
    }

    std::vector<std::pair<SiteCoord, std::string>> boundary;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        SiteCoord s{};
        std::string cls;
        ls >> s.a >> s.b >> cls;
        if (!ls) throw RegionError("region deserialize: bad site line");
        if (cls == "in")
            mask.sites_.push_back(s);
        else
            boundary.emplace_back(s, cls);
    }
    if (mask.sites_.empty()) throw RegionError("region deserialize: no sites");
    std::sort(mask.sites_.begin(), mask.sites_.end(), canonical_less);
    mask.index_from_sites();
    for (auto& [s, cls] : boundary) {
        size_t idx =
            static_cast<size_t>(s.b - mask.b_min_) * mask.stride_ + (s.a - mask.a_min_);
        if (cls == "dl")
            mask.grid_[idx] = kDl, mask.boundary_l_.push_back(s);
        else if (cls == "dr")
            mask.grid_[idx] = kDr, mask.boundary_r_.push_back(s);
        else if (cls == "di")
            mask.grid_[idx] = kDi, mask.boundary_i_.push_back(s);
        else if (cls == "do")
            mask.grid_[idx] = kDo, mask.boundary_o_.push_back(s);
        else
            throw RegionError("region deserialize: unknown class " + cls);
    }
    if (auto* st = std::get_if<StripSpec>(&mask.spec_)) {
        mask.terminals_ = {mask.site_index({-st->m, 2 * st->m}),
                           mask.site_index({-st->n, 2 * st->n})};
    }
    return mask;
}

} // namespace tfpp
