#include "tfpp/fpp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace tfpp {

PassageResult passage_time(const PassageProblem& p) {
    const RegionMask& mask = *p.mask;
    const Configuration& cfg = *p.config;
    const int64_t n = mask.site_count();
    if (p.sources.empty() || p.targets.empty())
        throw std::invalid_argument("passage_time: empty source or target set");
    for (int32_t s : p.sources)
        if (s < 0 || s >= n) throw std::invalid_argument("passage_time: bad source index");
    for (int32_t t : p.targets)
        if (t < 0 || t >= n) throw std::invalid_argument("passage_time: bad target index");

    constexpr int32_t kInf = INT32_MAX;
    std::vector<int32_t> dist(n, kInf);
    std::vector<int32_t> parent;
    if (p.want_witness) parent.assign(n, -1);
    std::vector<char> is_target(n, 0);
    for (int32_t t : p.targets) is_target[t] = 1;

    std::deque<int32_t> dq;
    for (int32_t s : p.sources) {
        int32_t w = cfg.bit(s) ? 1 : 0; // the starting site's own weight counts
        if (w < dist[s]) {
            dist[s] = w;
            if (w == 0)
                dq.push_front(s);
            else
                dq.push_back(s);
        }
    }

    int32_t best = -1;
    while (!dq.empty()) {
        int32_t u = dq.front();
        dq.pop_front();
        if (best >= 0 && dist[u] >= dist[best]) break; // all remaining are no better
        if (is_target[u]) {
            best = u;
            continue;
        }
        SiteCoord su = mask.site(u);
        for (auto nb : neighbors(su)) {
            int32_t v = mask.site_index(nb);
            if (v < 0) continue;
            if (p.constraint && !is_target[v] && !p.constraint(v)) continue;
            int32_t w = cfg.bit(v) ? 1 : 0;
            int32_t nd = dist[u] + w;
            if (nd < dist[v]) {
                dist[v] = nd;
                if (p.want_witness) parent[v] = u;
                if (w == 0)
                    dq.push_front(v);
                else
                    dq.push_back(v);
            }
        }
    }

    PassageResult res;
    if (best < 0) return res; // UNREACHABLE
    res.time = dist[best];
    if (p.want_witness) {
        for (int32_t v = best; v >= 0; v = parent[v]) res.witness.push_back(v);
        std::reverse(res.witness.begin(), res.witness.end());
    }
    return res;
}

int32_t nearest_site(const RegionMask& mask, Vec2 p) {
    int32_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int64_t i = 0; i < mask.site_count(); ++i) {
        Vec2 c = position(mask.site(i));
        double d = std::hypot(c.x - p.x, c.y - p.y);
        if (d < best_d - 1e-12) {
            best_d = d;
            best = static_cast<int32_t>(i);
        }
    }
    return best;
}

int64_t c_n_plus(const RegionMask& mask, const Configuration& config) {
    if (!std::holds_alternative<HalfDiskSpec>(mask.spec()))
        throw std::invalid_argument("c_n_plus: expects a half_disk mask");
    PassageProblem p;
    p.mask = &mask;
    p.config = &config;
    int32_t origin = mask.site_index({0, 0});
    if (origin < 0) throw std::invalid_argument("c_n_plus: origin not in mask");
    p.sources = {origin};
    p.targets = mask.sites_adjacent_to(BoundaryClass::Do);
    return passage_time(p).time;
}

int64_t T_plus(const RegionMask& mask, const Configuration& config) {
    if (!std::holds_alternative<HalfAnnulusSpec>(mask.spec()))
        throw std::invalid_argument("T_plus: expects a half_annulus mask");
    PassageProblem p;
    p.mask = &mask;
    p.config = &config;
    p.sources = mask.sites_adjacent_to(BoundaryClass::Di);
    p.targets = mask.sites_adjacent_to(BoundaryClass::Do);
    return passage_time(p).time;
}

std::pair<int64_t, int64_t> cylinder_times(const RegionMask& mask, const Configuration& config) {
    auto* st = std::get_if<StripSpec>(&mask.spec());
    if (!st) throw std::invalid_argument("cylinder_times: expects a strip mask");
    const int32_t b_lo = 2 * st->m, b_hi = 2 * st->n;

    PassageProblem p;
    p.mask = &mask;
    p.config = &config;
    p.sources = {mask.terminals()[0]};
    p.constraint = [&mask, b_lo, b_hi](int32_t v) {
        int32_t b = mask.site(v).b;
        return b > b_lo && b < b_hi;
    };

    p.targets = {mask.terminals()[1]};
    int64_t t_mn = passage_time(p).time;

    p.targets.clear();
    for (int64_t i = 0; i < mask.site_count(); ++i)
        if (mask.site(i).b == b_hi) p.targets.push_back(static_cast<int32_t>(i));
    int64_t s_mn = passage_time(p).time;
    return {t_mn, s_mn};
}

int64_t sector_time(const RegionMask& mask, const Configuration& config) {
    if (!std::holds_alternative<SectorSpec>(mask.spec()))
        throw std::invalid_argument("sector_time: expects a sector mask");
    PassageProblem p;
    p.mask = &mask;
    p.config = &config;
    p.sources = {nearest_site(mask, {0, 0})};
    p.targets = mask.sites_adjacent_to(BoundaryClass::Do);
    return passage_time(p).time;
}

int64_t polygon_corner_time(const RegionMask& mask, const Configuration& config,
                            size_t corner_a, size_t corner_b) {
    auto* pg = std::get_if<PolygonSpec>(&mask.spec());
    if (!pg) throw std::invalid_argument("polygon_corner_time: expects a polygon mask");
    if (corner_a >= pg->vertices.size() || corner_b >= pg->vertices.size())
        throw std::invalid_argument("polygon_corner_time: corner index out of range");
    auto corner_site = [&](size_t k) {
        Vec2 v = pg->vertices[k];
        return nearest_site(mask, {v.x / pg->delta, v.y / pg->delta});
    };
    PassageProblem p;
    p.mask = &mask;
    p.config = &config;
    p.sources = {corner_site(corner_a)};
    p.targets = {corner_site(corner_b)};
    return passage_time(p).time;
}

} // namespace tfpp
