#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tfpp/circuits.hpp"
#include "tfpp/experiments.hpp"
#include "tfpp/fpp.hpp"
#include "tfpp/hs_formula.hpp"
#include "tfpp/lattice.hpp"
#include "tfpp/percolation.hpp"
#include "tfpp/radial_sde.hpp"

namespace {

using namespace tfpp;

void on_interrupt(int) { interrupt_flag().store(true); }

// Parse a region id string like "half_annulus 2 4" back into a spec.
RegionSpec parse_spec(const std::string& text) {
    std::istringstream is(text);
    std::string name;
    is >> name;
    if (name == "half_disk") {
        HalfDiskSpec s{};
        is >> s.n;
        if (!is) throw CLI::ValidationError("--spec", "half_disk needs: n");
        return s;
    }
    if (name == "half_annulus") {
        HalfAnnulusSpec s{};
        is >> s.r >> s.R;
        if (!is) throw CLI::ValidationError("--spec", "half_annulus needs: r R");
        return s;
    }
    if (name == "sector") {
        SectorSpec s{};
        is >> s.alpha >> s.delta;
        if (!is) throw CLI::ValidationError("--spec", "sector needs: alpha delta");
        return s;
    }
    if (name == "strip") {
        StripSpec s{};
        is >> s.m >> s.n;
        if (!is) throw CLI::ValidationError("--spec", "strip needs: m n [half_width]");
        is >> s.half_width; // optional
        return s;
    }
    if (name == "polygon") {
        PolygonSpec s{};
        size_t k = 0;
        is >> s.delta >> k;
        s.vertices.resize(k);
        for (auto& v : s.vertices) is >> v.x >> v.y;
        if (!is) throw CLI::ValidationError("--spec", "polygon needs: delta k x1 y1 ... xk yk");
        return s;
    }
    throw CLI::ValidationError("--spec", "unknown region variant: " + name);
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw CLI::ValidationError("--out", "cannot open " + path);
    return file;
}

std::vector<Vec2> parse_vertices(const std::string& text) {
    std::vector<Vec2> out;
    std::istringstream is(text);
    std::string pair;
    while (std::getline(is, pair, ';')) {
        Vec2 v;
        if (std::sscanf(pair.c_str(), "%lf,%lf", &v.x, &v.y) != 2)
            throw CLI::ValidationError("--poly", "expected x,y;x,y;... got: " + text);
        out.push_back(v);
    }
    return out;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"Critical-percolation first-passage toolkit for the triangular lattice"};
    app.require_subcommand(1);
    app.set_config("--config")->configurable(false);

    uint64_t seed = 1;
    int workers = 1;
    std::string out_path;

    // --- region ---
    auto* region = app.add_subcommand("region", "Build a region mask and print it");
    std::string region_spec;
    region->add_option("--spec", region_spec, "Region id, e.g. 'half_annulus 2 4'")->required();
    region->add_option("--out", out_path, "Output path (default stdout)");

    // --- simulate ---
    auto* simulate = app.add_subcommand("simulate", "Sample fair-coin configurations on a region");
    std::string sim_spec;
    int64_t sim_count = 1;
    uint64_t sim_stream = 0;
    bool sim_times = false;
    simulate->add_option("--spec", sim_spec, "Region id")->required();
    simulate->add_option("--seed", seed, "RNG seed");
    simulate->add_option("--stream", sim_stream, "First stream id");
    simulate->add_option("--count", sim_count, "Number of configurations");
    simulate->add_flag("--times", sim_times,
                       "Also print the region's natural passage time per configuration");
    simulate->add_option("--out", out_path, "Output path (default stdout)");

    // --- audit ---
    auto* audit = app.add_subcommand("audit", "Exhaustive small-shape identity/bijection audit");
    std::string audit_shape_name = "all";
    audit->add_option("--shape", audit_shape_name, "Bundled shape name or 'all'");

    // --- sde ---
    auto* sde = app.add_subcommand("sde", "Angular-diffusion sampler and closed forms");
    std::string sde_mode = "z";
    int64_t sde_samples = 10;
    double sde_dt = 1e-3, sde_kappa = 6.0, sde_lambda = 0.0, sde_log_eps = 10.0;
    sde->add_option("--mode", sde_mode, "z | hitting | renewal | mgf | moments")
        ->check(CLI::IsMember({"z", "hitting", "renewal", "mgf", "moments"}));
    sde->add_option("--samples", sde_samples, "Sample count");
    sde->add_option("--dt", sde_dt, "Euler step");
    sde->add_option("--kappa", sde_kappa, "Diffusion parameter (> 4)");
    sde->add_option("--lambda", sde_lambda, "MGF argument (< 1/3)");
    sde->add_option("--log-eps", sde_log_eps, "Renewal threshold -log(epsilon)");
    sde->add_option("--seed", seed, "RNG seed");
    sde->add_option("--out", out_path, "Output path (default stdout)");

    // --- hs ---
    auto* hs = app.add_subcommand("hs", "Crossing-cluster formula table");
    std::vector<double> hs_log_r;
    hs->add_option("--log-r", hs_log_r, "log R values")->required()->delimiter(',');
    hs->add_option("--out", out_path, "Output path (default stdout)");

    // --- experiment ---
    auto* exp = app.add_subcommand("experiment", "Monte Carlo experiment suites");
    std::string kind;
    std::vector<int> n_list{128, 512, 2048}, tau_list{64, 256, 1024};
    std::vector<double> alpha_list{M_PI / 2, M_PI}, delta_list, log_eps_list{50, 100, 200};
    double clt_log_eps = 500, exp_dt = 1e-3;
    int exp_r = 1, exp_ratio = 2, tail_R = 64;
    int64_t reps = 0, renewal_reps = 100000;
    std::string poly_text = "0,0;1,0;1,1;0,1";
    std::vector<size_t> poly_corners{0, 2};
    exp->add_option("--kind", kind, "cn_scaling | cylinder | t_plus | renewal_slope | "
                                    "clt_renewal | tail | sector | polygon | equivalence_audit")
        ->required()
        ->check(CLI::IsMember({"cn_scaling", "cylinder", "t_plus", "renewal_slope", "clt_renewal",
                               "tail", "sector", "polygon", "equivalence_audit"}));
    exp->add_option("--reps", reps, "Replicas per scale")->required();
    exp->add_option("--seed", seed, "RNG seed");
    exp->add_option("--workers", workers, "Worker thread count");
    exp->add_option("--n", n_list, "Half-disk / strip sizes")->delimiter(',');
    exp->add_option("--tau", tau_list, "Half-annulus scale factors")->delimiter(',');
    exp->add_option("--alpha", alpha_list, "Sector opening angles")->delimiter(',');
    exp->add_option("--delta", delta_list, "Lattice spacings")->delimiter(',');
    exp->add_option("--log-eps", log_eps_list, "Renewal thresholds")->delimiter(',');
    exp->add_option("--clt-log-eps", clt_log_eps, "Threshold for the CLT check");
    exp->add_option("--r", exp_r, "Inner radius unit");
    exp->add_option("--ratio", exp_ratio, "Outer/inner radius ratio");
    exp->add_option("--tail-R", tail_R, "Outer radius for the tail experiment");
    exp->add_option("--dt", exp_dt, "Euler step for diffusion-based kinds");
    exp->add_option("--renewal-reps", renewal_reps, "Replicas for the renewal comparison row");
    exp->add_option("--poly", poly_text, "Polygon vertices x,y;x,y;...");
    exp->add_option("--corners", poly_corners, "Two vertex indices")->delimiter(',');
    exp->add_option("--out", out_path, "Output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    std::ofstream file;

    if (region->parsed()) {
        RegionMask mask = build_region(parse_spec(region_spec));
        mask.serialize(open_out(file, out_path));
        return 0;
    }

    if (simulate->parsed()) {
        RegionMask mask = build_region(parse_spec(sim_spec));
        std::ostream& os = open_out(file, out_path);
        for (int64_t k = 0; k < sim_count; ++k) {
            RngStream stream(seed, sim_stream + static_cast<uint64_t>(k));
            Configuration cfg = sample_config(mask, stream);
            cfg.serialize(os);
            if (sim_times) {
                int64_t t = -1;
                if (std::holds_alternative<HalfDiskSpec>(mask.spec()))
                    t = c_n_plus(mask, cfg);
                else if (std::holds_alternative<HalfAnnulusSpec>(mask.spec()))
                    t = T_plus(mask, cfg);
                else if (std::holds_alternative<SectorSpec>(mask.spec()))
                    t = sector_time(mask, cfg);
                else if (std::holds_alternative<StripSpec>(mask.spec()))
                    t = cylinder_times(mask, cfg).first;
                os << "time " << t << "\n";
            }
        }
        return 0;
    }

    if (audit->parsed()) {
        std::vector<HalfAnnulusSpec> shapes;
        for (auto& [name, spec] : bundled_audit_shapes())
            if (audit_shape_name == "all" || audit_shape_name == name) shapes.push_back(spec);
        if (shapes.empty()) {
            std::cerr << "unknown audit shape: " << audit_shape_name << "\n";
            return 1;
        }
        AuditReport report = run_equivalence_audit(shapes);
        for (auto& s : report.shapes) {
            std::cout << (s.pass() ? "PASS" : "FAIL") << " " << s.shape_id << " sites=" << s.sites
                      << " configs=" << s.configs << " identity=" << s.t_equals_rho
                      << " bijective=" << s.switch_bijective << " level=" << s.level_preserved
                      << " histograms=" << s.histograms_equal << "\n";
        }
        return report.pass() ? 0 : 3;
    }

    if (sde->parsed()) {
        std::ostream& os = open_out(file, out_path);
        ThetaParams params{sde_kappa, sde_dt};
        if (sde_mode == "mgf") {
            os << mgf_Z(sde_lambda) << "\n";
        } else if (sde_mode == "moments") {
            Moments m = moments_Z();
            os << m.mean << " " << m.variance << "\n";
        } else {
            for (int64_t k = 0; k < sde_samples; ++k) {
                RngStream stream(seed, static_cast<uint64_t>(k));
                if (sde_mode == "z")
                    os << sample_Z(params, stream) << "\n";
                else if (sde_mode == "hitting")
                    os << sample_hitting_time(params, stream) << "\n";
                else
                    os << renewal_count_log(sde_log_eps, params, stream) << "\n";
            }
        }
        return 0;
    }

    if (hs->parsed()) {
        std::vector<ResultRow> rows;
        for (double lr : hs_log_r) {
            CrossRatio x = half_annulus_cross_ratio_log(lr);
            ResultRow row;
            row.experiment = "hs_slope";
            row.scale = lr;
            row.estimate = expected_crossing_clusters(x);
            row.target = std::sqrt(3.0) / (4.0 * M_PI);
            row.normalized = slope_log(lr);
            rows.push_back(row);
        }
        write_csv(open_out(file, out_path), rows);
        return 0;
    }

    // experiment
    std::vector<ResultRow> rows;
    if (kind == "equivalence_audit") {
        std::vector<HalfAnnulusSpec> shapes;
        for (auto& [name, spec] : bundled_audit_shapes()) shapes.push_back(spec);
        AuditReport report = run_equivalence_audit(shapes);
        for (auto& s : report.shapes)
            std::cout << (s.pass() ? "PASS" : "FAIL") << " " << s.shape_id << "\n";
        return report.pass() ? 0 : 3;
    } else if (kind == "cn_scaling") {
        rows = run_cn_scaling(n_list, reps, seed, workers);
    } else if (kind == "cylinder") {
        rows = run_cylinder(n_list, reps, seed, workers);
    } else if (kind == "t_plus") {
        rows = run_t_plus_stabilization(exp_r, exp_ratio, tau_list, reps, seed, workers,
                                        renewal_reps, exp_dt);
    } else if (kind == "renewal_slope") {
        rows = run_renewal_slope(log_eps_list, reps, seed, workers, exp_dt);
    } else if (kind == "clt_renewal") {
        rows = run_clt_renewal(clt_log_eps, reps, seed, workers, exp_dt).rows;
    } else if (kind == "tail") {
        rows = run_tail(exp_r, tail_R, reps, seed, workers).rows;
    } else if (kind == "sector") {
        if (delta_list.empty()) delta_list = {1.0 / 128, 1.0 / 512, 1.0 / 2048};
        rows = run_sector(alpha_list, delta_list, reps, seed, workers);
    } else if (kind == "polygon") {
        if (delta_list.empty()) delta_list = {1.0 / 16, 1.0 / 64, 1.0 / 256};
        PolygonSpec spec{parse_vertices(poly_text), delta_list.front()};
        rows = run_polygon(spec, poly_corners.at(0), poly_corners.at(1), delta_list, reps, seed,
                           workers);
    }
    write_csv(open_out(file, out_path), rows, interrupt_flag().load());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    std::signal(SIGINT, on_interrupt);
    try {
        return dispatch(argc, argv);
    } catch (const tfpp::ResourceError& e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
