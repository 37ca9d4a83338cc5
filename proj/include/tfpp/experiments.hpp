#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfpp/circuits.hpp"
#include "tfpp/estimator.hpp"
#include "tfpp/lattice.hpp"
#include "tfpp/percolation.hpp"
#include "tfpp/radial_sde.hpp"
#include "tfpp/rng.hpp"

namespace tfpp {

// Refusals that should surface as a resource-guard exit (too many sites,
// too many configurations), as opposed to usage errors.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One CSV data row. Optional fields serialize as empty columns.
struct ResultRow {
    std::string experiment;
    double scale = 0.0;
    double estimate = 0.0;
    double variance = 0.0;
    double std_error = 0.0;
    int64_t count = 0;
    std::optional<double> target;
    std::optional<double> normalized;
};

// Header `experiment,scale,estimate,variance,stderr,count,target,normalized`;
// a trailing `# truncated` line marks an interrupted run.
void write_csv(std::ostream& os, const std::vector<ResultRow>& rows, bool truncated = false);

// Cooperative interrupt flag (set from the CLI signal handler). Runners stop
// between scales and drop any partially completed scale.
std::atomic<bool>& interrupt_flag();

// Evaluates fn(0..reps-1) on `workers` threads. Slot i always holds fn(i),
// so results are independent of scheduling. Returns false when interrupted
// before completion.
bool map_replicas(int64_t reps, int workers, const std::function<double(int64_t)>& fn,
                  std::vector<double>& out);

// Per-replica stream id: stable hash of the experiment tag and the replica.
uint64_t replica_stream(const std::string& tag, int64_t rep);

// Fair coin keyed by (stream key, site); lets two masks share one random
// coloring site-for-site.
bool site_coin(uint64_t stream_key, SiteCoord s);
Configuration coupled_config(const RegionMask& mask, uint64_t stream_key);

// --- experiment runners -----------------------------------------------------

// Mean/variance of the half-disk passage time per n, normalized by log n.
std::vector<ResultRow> run_cn_scaling(const std::vector<int>& n_list, int64_t reps,
                                      uint64_t seed, int workers);

// Per n: strip crossing times t_{0,n} and s_{0,n} (normalized by log n),
// their ratio, and the coupled half-disk discrepancy E|c_n - s_{0,n}|.
std::vector<ResultRow> run_cylinder(const std::vector<int>& n_list, int64_t reps, uint64_t seed,
                                    int workers);

// Mean half-annulus crossing time at scales tau*r..tau*R plus a renewal-side
// estimate of the limit E N(r/R) from the diffusion sampler.
std::vector<ResultRow> run_t_plus_stabilization(int r, int ratio,
                                                const std::vector<int>& tau_list, int64_t reps,
                                                uint64_t seed, int workers,
                                                int64_t renewal_reps = 100000,
                                                double dt = 1e-3);

// Mean renewal count / threshold per threshold in the list.
std::vector<ResultRow> run_renewal_slope(const std::vector<double>& minus_log_eps_list,
                                         int64_t reps, uint64_t seed, int workers,
                                         double dt = 1e-3);

// Kolmogorov-Smirnov distance of self-standardized renewal counts from the
// standard normal distribution. Refuses reps < 100.
struct CltResult {
    double ks = 0.0;
    std::vector<ResultRow> rows;
};
CltResult run_clt_renewal(double minus_log_eps, int64_t reps, uint64_t seed, int workers,
                          double dt = 1e-3);

// Empirical survival function of the half-annulus crossing time on integer
// levels, plus the log-linear fit over levels with survival >= 1e-3.
struct TailResult {
    double fit_slope = 0.0;
    double r_squared = 0.0;
    std::vector<ResultRow> rows;
};
TailResult run_tail(int r, int R, int64_t reps, uint64_t seed, int workers);

// Mean sector time normalized by -log(delta), per (alpha, delta) pair.
std::vector<ResultRow> run_sector(const std::vector<double>& alpha_list,
                                  const std::vector<double>& delta_list, int64_t reps,
                                  uint64_t seed, int workers);

// Mean polygon corner-to-corner time normalized by -log(delta). Refuses
// meshes coarser than 10 hexagons across the polygon.
std::vector<ResultRow> run_polygon(const PolygonSpec& polygon, size_t corner_a, size_t corner_b,
                                   const std::vector<double>& delta_list, int64_t reps,
                                   uint64_t seed, int workers);

// --- exhaustive small-shape audit -------------------------------------------

struct AuditShapeReport {
    std::string shape_id;
    int64_t sites = 0;
    uint64_t configs = 0;
    bool t_equals_rho = false;     // crossing time == circuit count, every config
    bool switch_bijective = false; // rewrite map is a bijection on configurations
    bool level_preserved = false;  // circuit count == loop count after rewrite
    bool histograms_equal = false; // crossing-time vs loop-count histograms
    std::vector<uint64_t> hist_T;
    std::vector<uint64_t> hist_N;
    bool pass() const {
        return t_equals_rho && switch_bijective && level_preserved && histograms_equal;
    }
};

using SwitchFn = std::function<Configuration(const RegionMask&, const Configuration&)>;

// Exhaustive audit of one half-annulus shape (<= 22 sites); switch_fn
// defaults to color_switch and is injectable for negative controls.
AuditShapeReport audit_shape(const RegionMask& mask, const SwitchFn& switch_fn = {});

// Named shapes bundled for `audit`: small half-annuli with <= 22 sites.
std::vector<std::pair<std::string, HalfAnnulusSpec>> bundled_audit_shapes();

struct AuditReport {
    std::vector<AuditShapeReport> shapes;
    bool pass() const {
        for (auto& s : shapes)
            if (!s.pass()) return false;
        return !shapes.empty();
    }
};
AuditReport run_equivalence_audit(const std::vector<HalfAnnulusSpec>& shapes);

// Standard normal distribution function (erf-based), used by the KS test.
double normal_cdf(double x);

// Kolmogorov-Smirnov distance of a sample from the standard normal law.
double ks_distance_normal(std::vector<double> sample);

} // namespace tfpp
