#include "tfpp/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include "tfpp/fpp.hpp"
#include "tfpp/hs_formula.hpp"

namespace tfpp {

namespace {

constexpr double kSqrt3Over2Pi = 0.27566444771089593;     // sqrt(3)/(2*pi)
constexpr double kSqrt3OverPi = 0.55132889542179186;      // sqrt(3)/pi
constexpr double kCnVarSlope = 0.19076713804862313;       // 2*sqrt(3)/pi - 9/pi^2
constexpr double kTVarSlope = 0.38153427609724626;        // 4*sqrt(3)/pi - 18/pi^2
constexpr int64_t kMaxSites = 1'000'000'000;

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void guard_sites(const RegionSpec& spec, double approx_sites) {
    if (approx_sites > static_cast<double>(kMaxSites))
        throw ResourceError("region too large (> 1e9 sites): " + spec_id(spec));
}

RegionMask build_guarded(const RegionSpec& spec) {
    double approx = 0;
    if (auto* h = std::get_if<HalfDiskSpec>(&spec))
        approx = 2.0 * static_cast<double>(h->n) * h->n;
    else if (auto* a = std::get_if<HalfAnnulusSpec>(&spec))
        approx = 2.0 * static_cast<double>(a->R) * a->R;
    else if (auto* st = std::get_if<StripSpec>(&spec)) {
        double hw = st->half_width > 0 ? st->half_width : kSqrt3 * (st->n - st->m) + 2;
        approx = 2.5 * hw * kSqrt3 * (st->n - st->m);
    } else if (auto* sc = std::get_if<SectorSpec>(&spec))
        approx = 4.0 / (sc->delta * sc->delta);
    else if (auto* pg = std::get_if<PolygonSpec>(&spec)) {
        double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
        for (auto& v : pg->vertices) {
            xlo = std::min(xlo, v.x), xhi = std::max(xhi, v.x);
            ylo = std::min(ylo, v.y), yhi = std::max(yhi, v.y);
        }
        approx = (xhi - xlo) * (yhi - ylo) / (pg->delta * pg->delta) * 1.5;
    }
    guard_sites(spec, approx);
    return build_region(spec);
}

// Generic deterministic worker pool: out[i] = fn(i) regardless of scheduling.
template <typename T>
bool map_replicas_t(int64_t reps, int workers, const std::function<T(int64_t)>& fn,
                    std::vector<T>& out) {
    out.assign(reps, T{});
    std::atomic<int64_t> next{0};
    workers = std::max(1, workers);
    auto body = [&] {
        while (!interrupt_flag().load(std::memory_order_relaxed)) {
            int64_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= reps) return;
            out[i] = fn(i);
        }
    };
    if (workers == 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }
    return !interrupt_flag().load() && next.load() >= reps;
}

EstimatorState accumulate(const std::vector<double>& values) {
    EstimatorState e;
    for (double v : values) e.add(v);
    return e;
}

ResultRow make_row(std::string experiment, double scale, const EstimatorState& e,
                   std::optional<double> target = {}, std::optional<double> normalized = {}) {
    ResultRow r;
    r.experiment = std::move(experiment);
    r.scale = scale;
    r.estimate = e.mean;
    r.variance = e.variance();
    r.std_error = e.std_error();
    r.count = e.count;
    r.target = target;
    r.normalized = normalized;
    return r;
}

} // namespace

std::atomic<bool>& interrupt_flag() {
    static std::atomic<bool> flag{false};
    return flag;
}

bool map_replicas(int64_t reps, int workers, const std::function<double(int64_t)>& fn,
                  std::vector<double>& out) {
    return map_replicas_t<double>(reps, workers, fn, out);
}

uint64_t replica_stream(const std::string& tag, int64_t rep) {
    return hash_combine(fnv1a(tag), static_cast<uint64_t>(rep));
}

bool site_coin(uint64_t stream_key, SiteCoord s) {
    uint64_t k = hash_combine(
        stream_key, (static_cast<uint64_t>(static_cast<uint32_t>(s.a)) << 32) |
                        static_cast<uint64_t>(static_cast<uint32_t>(s.b)));
    return splitmix64(k) >> 63;
}

Configuration coupled_config(const RegionMask& mask, uint64_t stream_key) {
    Configuration c(mask);
    for (int64_t i = 0; i < mask.site_count(); ++i)
        if (site_coin(stream_key, mask.site(static_cast<int32_t>(i)))) c.set(i, true);
    return c;
}

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows, bool truncated) {
    os << "experiment,scale,estimate,variance,stderr,count,target,normalized\n";
    for (auto& r : rows) {
        os << r.experiment << "," << fmt(r.scale) << "," << fmt(r.estimate) << ","
           << fmt(r.variance) << "," << fmt(r.std_error) << "," << r.count << ",";
        if (r.target) os << fmt(*r.target);
        os << ",";
        if (r.normalized) os << fmt(*r.normalized);
        os << "\n";
    }
    if (truncated) os << "# truncated\n";
}

// ---------------------------------------------------------------------------
// Runners
// ---------------------------------------------------------------------------

std::vector<ResultRow> run_cn_scaling(const std::vector<int>& n_list, int64_t reps,
                                      uint64_t seed, int workers) {
    std::vector<ResultRow> rows;
    for (int n : n_list) {
        if (interrupt_flag().load()) break;
        RegionMask mask = build_guarded(HalfDiskSpec{n});
        std::string tag = "cn_scaling n=" + std::to_string(n);
        std::vector<double> values;
        bool done = map_replicas(
            reps, workers,
            [&](int64_t rep) {
                RngStream stream(seed, replica_stream(tag, rep));
                Configuration cfg = sample_config(mask, stream);
                return static_cast<double>(c_n_plus(mask, cfg));
            },
            values);
        if (!done) break;
        EstimatorState e = accumulate(values);
        double ln = std::log(static_cast<double>(n));
        rows.push_back(make_row("cn_mean", n, e, kSqrt3Over2Pi, e.mean / ln));
        ResultRow var_row = make_row("cn_var_norm", n, e, kCnVarSlope, e.variance() / ln);
        var_row.estimate = e.variance();
        rows.push_back(var_row);
    }
    return rows;
}

std::vector<ResultRow> run_cylinder(const std::vector<int>& n_list, int64_t reps, uint64_t seed,
                                    int workers) {
    std::vector<ResultRow> rows;
    for (int n : n_list) {
        if (interrupt_flag().load()) break;
        RegionMask strip = build_guarded(StripSpec{0, n});
        RegionMask disk = build_guarded(HalfDiskSpec{n});
        std::string tag = "cylinder n=" + std::to_string(n);
        // per replica: t_{0,n}, s_{0,n}, and the coupled half-disk time
        std::vector<std::array<double, 3>> values;
        bool done = map_replicas_t<std::array<double, 3>>(
            reps, workers,
            [&](int64_t rep) -> std::array<double, 3> {
                uint64_t key = hash_combine(seed, replica_stream(tag, rep));
                Configuration cfg_strip = coupled_config(strip, key);
                auto [t, s] = cylinder_times(strip, cfg_strip);
                Configuration cfg_disk = coupled_config(disk, key);
                double c = static_cast<double>(c_n_plus(disk, cfg_disk));
                return {static_cast<double>(t), static_cast<double>(s), c};
            },
            values);
        if (!done) break;
        EstimatorState et, es, ediff;
        for (auto& v : values) {
            et.add(v[0]);
            es.add(v[1]);
            ediff.add(std::fabs(v[2] - v[1]));
        }
        double ln = std::log(static_cast<double>(n));
        rows.push_back(make_row("t_mean", n, et, kSqrt3OverPi, et.mean / ln));
        ResultRow tv = make_row("t_var_norm", n, et, kTVarSlope, et.variance() / ln);
        tv.estimate = et.variance();
        rows.push_back(tv);
        rows.push_back(make_row("s_mean", n, es, kSqrt3Over2Pi, es.mean / ln));
        ResultRow sv = make_row("s_var_norm", n, es, kCnVarSlope, es.variance() / ln);
        sv.estimate = es.variance();
        rows.push_back(sv);
        ResultRow ratio;
        ratio.experiment = "ts_ratio";
        ratio.scale = n;
        ratio.estimate = et.mean / es.mean;
        ratio.count = et.count;
        ratio.target = 2.0;
        rows.push_back(ratio);
        rows.push_back(make_row("coupling_abs_diff", n, ediff));
    }
    return rows;
}

std::vector<ResultRow> run_t_plus_stabilization(int r, int ratio, const std::vector<int>& tau_list,
                                                int64_t reps, uint64_t seed, int workers,
                                                int64_t renewal_reps, double dt) {
    if (ratio < 2) throw std::invalid_argument("run_t_plus_stabilization: ratio must be >= 2");
    std::vector<ResultRow> rows;
    for (int tau : tau_list) {
        if (interrupt_flag().load()) break;
        RegionMask mask = build_guarded(HalfAnnulusSpec{tau * r, tau * r * ratio});
        std::string tag = "t_plus tau=" + std::to_string(tau);
        std::vector<double> values;
        bool done = map_replicas(
            reps, workers,
            [&](int64_t rep) {
                RngStream stream(seed, replica_stream(tag, rep));
                Configuration cfg = sample_config(mask, stream);
                return static_cast<double>(T_plus(mask, cfg));
            },
            values);
        if (!done) break;
        rows.push_back(make_row("t_plus_mean", tau, accumulate(values)));
    }
    if (!interrupt_flag().load()) {
        ThetaParams params{6.0, dt};
        std::vector<double> values;
        double threshold = std::log(static_cast<double>(ratio));
        bool done = map_replicas(
            renewal_reps, workers,
            [&](int64_t rep) {
                RngStream stream(seed, replica_stream("renewal_limit", rep));
                return static_cast<double>(renewal_count_log(threshold, params, stream));
            },
            values);
        if (done)
            rows.push_back(make_row("renewal_limit_mean", ratio, accumulate(values)));
    }
    return rows;
}

std::vector<ResultRow> run_renewal_slope(const std::vector<double>& minus_log_eps_list,
                                         int64_t reps, uint64_t seed, int workers, double dt) {
    std::vector<ResultRow> rows;
    ThetaParams params{6.0, dt};
    for (double L : minus_log_eps_list) {
        if (interrupt_flag().load()) break;
        std::string tag = "renewal L=" + fmt(L);
        std::vector<double> values;
        bool done = map_replicas(
            reps, workers,
            [&](int64_t rep) {
                RngStream stream(seed, replica_stream(tag, rep));
                return static_cast<double>(renewal_count_log(L, params, stream));
            },
            values);
        if (!done) break;
        EstimatorState e = accumulate(values);
        rows.push_back(make_row("renewal_slope", L, e, kSqrt3Over2Pi, e.mean / L));
    }
    return rows;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_distance_normal(std::vector<double> sample) {
    std::sort(sample.begin(), sample.end());
    double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (size_t i = 0; i < sample.size(); ++i) {
        double f = normal_cdf(sample[i]);
        d = std::max(d, std::fabs(f - static_cast<double>(i + 1) / n));
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    }
    return d;
}

CltResult run_clt_renewal(double minus_log_eps, int64_t reps, uint64_t seed, int workers,
                          double dt) {
    if (reps < 100) throw std::invalid_argument("run_clt_renewal: needs at least 100 replicas");
    ThetaParams params{6.0, dt};
    std::string tag = "clt_renewal L=" + fmt(minus_log_eps);
    std::vector<double> values;
    map_replicas(
        reps, workers,
        [&](int64_t rep) {
            RngStream stream(seed, replica_stream(tag, rep));
            return static_cast<double>(renewal_count_log(minus_log_eps, params, stream));
        },
        values);
    EstimatorState e = accumulate(values);
    double sd = std::sqrt(e.variance());
    for (auto& v : values) v = (v - e.mean) / sd;
    CltResult res;
    res.ks = ks_distance_normal(values);
    ResultRow row = make_row("clt_renewal_ks", minus_log_eps, e);
    row.estimate = res.ks;
    res.rows.push_back(row);
    return res;
}

TailResult run_tail(int r, int R, int64_t reps, uint64_t seed, int workers) {
    RegionMask mask = build_guarded(HalfAnnulusSpec{r, R});
    std::string tag = "tail " + std::to_string(r) + ":" + std::to_string(R);
    std::vector<double> values;
    map_replicas(
        reps, workers,
        [&](int64_t rep) {
            RngStream stream(seed, replica_stream(tag, rep));
            Configuration cfg = sample_config(mask, stream);
            return static_cast<double>(T_plus(mask, cfg));
        },
        values);

    int64_t max_t = 0;
    for (double v : values) max_t = std::max(max_t, static_cast<int64_t>(v));
    std::vector<int64_t> hist(max_t + 1, 0);
    for (double v : values) hist[static_cast<int64_t>(v)]++;

    TailResult res;
    double n = static_cast<double>(values.size());
    std::vector<std::pair<double, double>> fit_pts; // (x, log survival)
    int64_t at_least = static_cast<int64_t>(values.size());
    for (int64_t x = 0; x <= max_t; ++x) {
        double p = static_cast<double>(at_least) / n;
        ResultRow row;
        row.experiment = "tail_survival";
        row.scale = static_cast<double>(x);
        row.estimate = p;
        row.count = static_cast<int64_t>(n);
        res.rows.push_back(row);
        if (x >= 1 && p >= 1e-3) fit_pts.emplace_back(static_cast<double>(x), std::log(p));
        at_least -= hist[x];
    }

    // least-squares line through the usable part of the log-survival curve
    if (fit_pts.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0, m = fit_pts.size();
        for (auto& [x, y] : fit_pts) {
            sx += x, sy += y, sxx += x * x, sxy += x * y, syy += y * y;
        }
        double cov = sxy - sx * sy / m;
        double vx = sxx - sx * sx / m;
        double vy = syy - sy * sy / m;
        res.fit_slope = cov / vx;
        res.r_squared = vy > 0 ? cov * cov / (vx * vy) : 1.0;
    }
    ResultRow slope_row;
    slope_row.experiment = "tail_fit_slope";
    slope_row.scale = static_cast<double>(R);
    slope_row.estimate = res.fit_slope;
    slope_row.normalized = res.r_squared;
    res.rows.push_back(slope_row);
    return res;
}

std::vector<ResultRow> run_sector(const std::vector<double>& alpha_list,
                                  const std::vector<double>& delta_list, int64_t reps,
                                  uint64_t seed, int workers) {
    std::vector<ResultRow> rows;
    for (double alpha : alpha_list) {
        for (double delta : delta_list) {
            if (interrupt_flag().load()) return rows;
            RegionMask mask = build_guarded(SectorSpec{alpha, delta});
            std::string tag = "sector a=" + fmt(alpha) + " d=" + fmt(delta);
            std::vector<double> values;
            bool done = map_replicas(
                reps, workers,
                [&](int64_t rep) {
                    uint64_t key = hash_combine(seed, replica_stream(tag, rep));
                    Configuration cfg = coupled_config(mask, key);
                    return static_cast<double>(sector_time(mask, cfg));
                },
                values);
            if (!done) return rows;
            EstimatorState e = accumulate(values);
            double ld = -std::log(delta);
            rows.push_back(make_row("sector alpha=" + fmt(alpha), ld, e,
                                    std::sqrt(3.0) / (2.0 * alpha), e.mean / ld));
        }
    }
    return rows;
}

std::vector<ResultRow> run_polygon(const PolygonSpec& polygon, size_t corner_a, size_t corner_b,
                                   const std::vector<double>& delta_list, int64_t reps,
                                   uint64_t seed, int workers) {
    const auto& vs = polygon.vertices;
    if (corner_a >= vs.size() || corner_b >= vs.size())
        throw std::invalid_argument("run_polygon: corner index out of range");
    auto interior_angle = [&](size_t k) {
        Vec2 p = vs[(k + vs.size() - 1) % vs.size()], q = vs[k], r = vs[(k + 1) % vs.size()];
        double ax = p.x - q.x, ay = p.y - q.y, bx = r.x - q.x, by = r.y - q.y;
        double na = std::hypot(ax, ay), nb = std::hypot(bx, by);
        return std::acos(std::clamp((ax * bx + ay * by) / (na * nb), -1.0, 1.0));
    };
    double target = std::sqrt(3.0) / (2.0 * interior_angle(corner_a)) +
                    std::sqrt(3.0) / (2.0 * interior_angle(corner_b));

    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (auto& v : vs) {
        xlo = std::min(xlo, v.x), xhi = std::max(xhi, v.x);
        ylo = std::min(ylo, v.y), yhi = std::max(yhi, v.y);
    }
    double min_extent = std::min(xhi - xlo, yhi - ylo);

    std::vector<ResultRow> rows;
    for (double delta : delta_list) {
        if (interrupt_flag().load()) break;
        if (min_extent / delta < 10.0)
            throw std::invalid_argument("run_polygon: fewer than 10 hexagons across at delta=" +
                                        fmt(delta));
        PolygonSpec spec = polygon;
        spec.delta = delta;
        RegionMask mask = build_guarded(spec);
        std::string tag = "polygon d=" + fmt(delta);
        std::vector<double> values;
        bool done = map_replicas(
            reps, workers,
            [&](int64_t rep) {
                RngStream stream(seed, replica_stream(tag, rep));
                Configuration cfg = sample_config(mask, stream);
                return static_cast<double>(
                    polygon_corner_time(mask, cfg, corner_a, corner_b));
            },
            values);
        if (!done) break;
        EstimatorState e = accumulate(values);
        double ld = -std::log(delta);
        rows.push_back(make_row("polygon", ld, e, target, e.mean / ld));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Exhaustive small-shape audit
// ---------------------------------------------------------------------------

AuditShapeReport audit_shape(const RegionMask& mask, const SwitchFn& switch_fn_in) {
    if (mask.site_count() > 22)
        throw ResourceError("audit_shape: " + mask.id() + " has " +
                            std::to_string(mask.site_count()) + " sites, limit is 22");
    SwitchFn switch_fn = switch_fn_in;
    if (!switch_fn)
        switch_fn = [](const RegionMask& m, const Configuration& c) { return color_switch(m, c); };

    AuditShapeReport rep;
    rep.shape_id = mask.id();
    rep.sites = mask.site_count();
    rep.t_equals_rho = rep.switch_bijective = rep.level_preserved = true;

    const size_t hist_size = static_cast<size_t>(mask.site_count()) + 2;
    rep.hist_T.assign(hist_size, 0);
    rep.hist_N.assign(hist_size, 0);
    std::vector<char> image_seen(uint64_t{1} << mask.site_count(), 0);

    ConfigEnumerator en(mask);
    Configuration cfg;
    while (en.next(cfg)) {
        ++rep.configs;
        int64_t t = T_plus(mask, cfg);
        auto [n, stack] = rho_plus(mask, cfg);
        if (t != n) rep.t_equals_rho = false;
        rep.hist_T[static_cast<size_t>(t)]++;
        rep.hist_N[static_cast<size_t>(count_interface_half_loops(mask, cfg))]++;

        Configuration sw = switch_fn(mask, cfg);
        if (count_interface_half_loops(mask, sw) != n) rep.level_preserved = false;
        uint64_t image = sw.words().empty() ? 0 : sw.words()[0];
        if (image_seen[image])
            rep.switch_bijective = false;
        else
            image_seen[image] = 1;
    }
    rep.histograms_equal = rep.hist_T == rep.hist_N;
    return rep;
}

std::vector<std::pair<std::string, HalfAnnulusSpec>> bundled_audit_shapes() {
    return {
        {"half_annulus_min", {1, 2}},
        {"half_annulus_1_3", {1, 3}},
        {"half_annulus_2_3", {2, 3}},
    };
}

AuditReport run_equivalence_audit(const std::vector<HalfAnnulusSpec>& shapes) {
    AuditReport report;
    for (auto& spec : shapes) {
        RegionMask mask = build_region(RegionSpec{spec});
        report.shapes.push_back(audit_shape(mask));
    }
    return report;
}

} // namespace tfpp
