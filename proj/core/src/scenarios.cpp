#include "lcl/scenarios.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <fstream>

#include <nlohmann/json.hpp>

#include "lcl/checkpoint.hpp"
#include "lcl/linearized.hpp"
#include "lcl/lyapunov.hpp"
#include "lcl/mixing.hpp"
#include "lcl/planner.hpp"
#include "lcl/saturation.hpp"
#include "lcl/sha256.hpp"
#include "lcl/thread_pool.hpp"
#include "lcl/version.hpp"

namespace lcl {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Vec2 parse_vec2(const Config& cfg, const std::string& key, const Vec2& dflt) {
    if (!cfg.has(key)) return dflt;
    std::string v = cfg.get_string(key);
    double a, b;
    if (std::sscanf(v.c_str(), "%lf,%lf", &a, &b) != 2)
        throw ConfigError("config: key '" + key + "' must be 'x,y'");
    return {a, b};
}

Mat2 parse_mat2(const Config& cfg, const std::string& key, const Mat2& dflt) {
    if (!cfg.has(key)) return dflt;
    std::string v = cfg.get_string(key);
    Mat2 m;
    if (std::sscanf(v.c_str(), "%lf,%lf,%lf,%lf", &m[0], &m[1], &m[2], &m[3]) != 4)
        throw ConfigError("config: key '" + key + "' must be 'a11,a12,a21,a22'");
    return m;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream os(p, std::ios::trunc);
    if (!os) throw IoFailure("cannot write " + p.string());
    return os;
}

void write_json(const fs::path& p, const nlohmann::json& j) {
    auto os = open_out(p);
    os << j.dump(2) << "\n";
}

nlohmann::json grid_json(const GridSpec& g, double dt) {
    return {{"N", g.N}, {"nu", g.nu}, {"dt", dt},
            {"dealias_fraction", g.dealias_fraction},
            {"sobolev_index", g.sobolev_index}};
}

VelocityField initial_velocity(const Config& cfg, const std::string& key,
                               const GridSpec& grid) {
    std::string spec = cfg.get_string(key, "zero");
    if (spec == "zero") return VelocityField(grid);
    VelocityField u = read_checkpoint(spec);
    if (u.grid().N != grid.N || u.grid().nu != grid.nu)
        throw ConfigError("config: checkpoint at '" + spec +
                          "' does not match the configured grid");
    return u;
}

std::vector<std::string> run_simulate(const Config& cfg, const fs::path& out,
                                      std::uint64_t seed) {
    GridSpec grid = cfg.grid();
    NoiseParams noise = cfg.noise();
    double dt = cfg.dt();
    double dt_ode = cfg.dt_ode();
    int n = cfg.get_int("simulate.n", 10);
    Vec2 y0 = parse_vec2(cfg, "simulate.y0", {0.0, 0.0});
    VelocityField u = initial_velocity(cfg, "simulate.u0", grid);

    RngStream rng(derive_stream_seed(seed, "noise", 0));
    PdeStepper stepper(grid);
    DensePath path;
    Mat2 Q = mat2_identity();
    Vec2 y = y0;

    auto traj = open_out(out / "trajectory.csv");
    traj << "n,y1,y2,a11,a12,a21,a22,lognorm_increment,Vm_norm_u\n";
    auto noise_csv = open_out(out / "noise.csv");
    noise_csv << "segment_index,j1,j2,l,xi\n";

    double lognorm_total = 0.0;
    for (int i = 1; i <= n; ++i) {
        NoiseRealization zeta = sample_segment(noise, rng);
        dump_realization_csv(noise_csv, i, zeta);
        u = evolve_unit_with(stepper, u, zeta, dt, &path);
        auto res = advance_triple_unit(path, y, Q, Vec2{1.0, 0.0}, dt_ode);
        y = res.y;
        double l1, l2;
        qr_step(res.A, Q, l1, l2);
        lognorm_total += l1;
        traj << i << ',' << fmt(y[0]) << ',' << fmt(y[1]) << ',' << fmt(Q[0])
             << ',' << fmt(Q[1]) << ',' << fmt(Q[2]) << ',' << fmt(Q[3]) << ','
             << fmt(l1) << ',' << fmt(u.sobolev_norm(grid.sobolev_index))
             << "\n";
    }
    write_checkpoint((out / "final.lcl").string(), u);

    nlohmann::json summary;
    summary["scenario"] = "simulate";
    summary["n"] = n;
    summary["seed"] = seed;
    summary["grid"] = grid_json(grid, dt);
    summary["noise_preset"] = noise.preset;
    summary["final"] = {{"y", {y[0], y[1]}},
                        {"u_norm_v5", u.sobolev_norm(5)},
                        {"u_norm_v8", u.sobolev_norm(8)},
                        {"lognorm_total", lognorm_total}};
    write_json(out / "summary.json", summary);
    return {"trajectory.csv", "noise.csv", "final.lcl", "summary.json"};
}

std::vector<std::string> run_lyapunov(const Config& cfg, const fs::path& out,
                                      std::uint64_t seed) {
    GridSpec grid = cfg.grid();
    NoiseParams noise = cfg.noise();
    LyapunovOptions opts;
    opts.n = cfg.get_int("lyapunov.n", 2000);
    opts.block = cfg.get_int("lyapunov.block", std::max(10, opts.n / 100));
    opts.burn_in = cfg.get_int("lyapunov.burn_in", -1);
    opts.bootstrap_resamples = cfg.get_int("lyapunov.bootstrap_resamples", 1000);
    opts.seed = seed;

    std::string synthetic = cfg.get_string("lyapunov.synthetic", "");
    std::unique_ptr<CocycleSource> source;
    if (synthetic.empty()) {
        StepTripleOptions sopts;
        sopts.dt = cfg.dt();
        sopts.dt_ode = cfg.dt_ode();
        TripleState init;
        init.u = initial_velocity(cfg, "lyapunov.u0", grid);
        init.y = parse_vec2(cfg, "lyapunov.y0", {0.0, 0.0});
        source = std::make_unique<NavierStokesSource>(
            grid, noise, derive_stream_seed(seed, "noise", 0), init, sopts);
    } else if (synthetic == "identity") {
        source = std::make_unique<SyntheticSource>(
            [](int) { return mat2_identity(); });
    } else if (synthetic.rfind("diag(", 0) == 0) {
        double a = 2.0, b = 0.5;
        if (std::sscanf(synthetic.c_str(), "diag(%lf,%lf)", &a, &b) != 2)
            throw ConfigError("config: key 'lyapunov.synthetic' is malformed");
        source = std::make_unique<SyntheticSource>(
            [a, b](int) { return Mat2{a, 0.0, 0.0, b}; });
    } else if (synthetic == "rotations") {
        auto rng = std::make_shared<RngStream>(derive_stream_seed(seed, "rot", 0));
        source = std::make_unique<SyntheticSource>([rng](int) {
            double th = rng->uniform(0.0, 2.0 * 3.141592653589793);
            double c = std::cos(th), s = std::sin(th);
            return Mat2{c, -s, s, c};
        });
    } else {
        throw ConfigError("config: key 'lyapunov.synthetic' has unknown value '" +
                          synthetic + "'");
    }

    LyapunovEstimate est = estimate(*source, opts);
    est.config_fingerprint = cfg.fingerprint();

    auto blocks = open_out(out / "blocks.csv");
    blocks << "block,lambda_plus_block\n";
    for (std::size_t b = 0; b < est.block_estimates.size(); ++b)
        blocks << b << ',' << fmt(est.block_estimates[b]) << "\n";

    nlohmann::json summary;
    summary["scenario"] = "lyapunov";
    summary["lambda_plus"] = est.lambda_plus;
    summary["lambda_minus"] = est.lambda_minus;
    summary["lambda_sum"] = est.lambda_sum;
    summary["ci_95"] = {est.ci_lo, est.ci_hi};
    summary["n"] = est.n_steps;
    summary["block"] = est.block;
    summary["burn_in"] = est.burn_in;
    summary["seed"] = seed;
    summary["grid"] = grid_json(grid, cfg.dt());
    summary["nu"] = grid.nu;
    summary["noise_preset"] = noise.preset;
    summary["config_fingerprint"] = est.config_fingerprint;
    if (!synthetic.empty()) summary["synthetic"] = synthetic;
    write_json(out / "summary.json", summary);
    return {"blocks.csv", "summary.json"};
}

std::vector<std::string> run_steer(const Config& cfg, const fs::path& out,
                                   std::uint64_t seed) {
    GridSpec grid = cfg.grid();
    NoiseParams noise = cfg.noise();
    StepTripleOptions sopts;
    sopts.dt = cfg.dt();
    sopts.dt_ode = cfg.dt_ode();
    sopts.renorm_det = true;

    Vec2 y0 = parse_vec2(cfg, "steer.y0", {0.0, 0.0});
    Vec2 ysharp = parse_vec2(cfg, "steer.ysharp", {1.0, 0.5});
    Mat2 A0 = parse_mat2(cfg, "steer.A0", mat2_identity());

    TripleState z0;
    z0.u = VelocityField(grid);
    z0.y = y0;
    z0.A = A0;

    ControlPlan plan;
    TripleState end;
    Mat2 A_target = A0;
    if (cfg.has("steer.A_target")) {
        A_target = parse_mat2(cfg, "steer.A_target", mat2_identity());
        PlanTarget target;
        target.y = ysharp;
        target.A = A_target;
        PlanFullOptions popts;
        popts.eps = cfg.get_double("steer.eps", 1e-2);
        popts.step = sopts;
        plan = plan_full(z0, target, noise, grid, popts);
        end = execute_plan(z0, plan, sopts);
    } else {
        plan = shift_position(y0, ysharp, grid.nu, noise);
        end = execute_plan(z0, plan, sopts);
        plan.measured_distance = triple_distance(end, nullptr, ysharp, A0);
    }

    nlohmann::json pj = plan_to_json(plan);
    pj["measured_terminal"] = {{"y", {end.y[0], end.y[1]}},
                               {"A", {end.A[0], end.A[1], end.A[2], end.A[3]}},
                               {"u_norm_v5", end.u.sobolev_norm(5)}};
    write_json(out / "plan.json", pj);

    double dy = torus_distance(end.y.data(), ysharp.data());
    double dA = 0.0;
    for (int i = 0; i < 4; ++i) {
        double d = end.A[i] - A_target[i];
        dA += d * d;
    }
    nlohmann::json summary;
    summary["scenario"] = "steer";
    summary["seed"] = seed;
    summary["grid"] = grid_json(grid, sopts.dt);
    summary["noise_preset"] = noise.preset;
    summary["segments"] = plan.segments.size();
    summary["terminal_error"] = plan.measured_distance;
    summary["terminal_error_y"] = dy;
    summary["terminal_error_A"] = std::sqrt(dA);
    summary["terminal_u_norm_v5"] = end.u.sobolev_norm(5);
    write_json(out / "summary.json", summary);
    return {"plan.json", "summary.json"};
}

std::vector<std::string> run_mixing(const Config& cfg, const fs::path& out,
                                    std::uint64_t seed) {
    GridSpec grid = cfg.grid();
    NoiseParams noise = cfg.noise();
    double dt = cfg.dt();
    int samples = cfg.get_int("mixing.samples", 1024);
    int n_max = cfg.get_int("mixing.n", 50);
    int stride = cfg.get_int("mixing.stride", 1);

    Vec2 yA = parse_vec2(cfg, "mixing.yA", {0.0, 0.0});
    Vec2 yB = parse_vec2(cfg, "mixing.yB",
                         {3.141592653589793, 3.141592653589793});

    // second initial condition: a state a few noise segments away from rest
    VelocityField uB(grid);
    {
        int warm = cfg.get_int("mixing.warm_segments", 5);
        RngStream rng(derive_stream_seed(seed, "mixing-warm", 0));
        PdeStepper stepper(grid);
        for (int i = 0; i < warm; ++i)
            uB = evolve_unit_with(stepper, uB, sample_segment(noise, rng), dt);
    }

    std::vector<EnsembleInit> initsA(samples), initsB(samples);
    for (int i = 0; i < samples; ++i) {
        initsA[i] = {VelocityField(grid), yA};
        initsB[i] = {uB, yB};
    }
    auto snapsA = evolve_ensemble(initsA, noise,
                                  derive_stream_seed(seed, "mixing-A", 0), n_max,
                                  stride, dt);
    auto snapsB = evolve_ensemble(initsB, noise,
                                  derive_stream_seed(seed, "mixing-B", 0), n_max,
                                  stride, dt);

    ObservableFamily fam = ObservableFamily::default_family();
    auto dist = open_out(out / "distance.csv");
    dist << "n,dl_lower_bound\n";
    std::vector<double> dl(snapsA.size());
    for (std::size_t s = 0; s < snapsA.size(); ++s) {
        dl[s] = dl_distance(snapsA[s], snapsB[s], fam);
        dist << snapsA[s].n << ',' << fmt(dl[s]) << "\n";
    }

    // observable decorrelation along one long stationary run
    int acf_len = cfg.get_int("mixing.acf_len", 2000);
    int acf_lags = cfg.get_int("mixing.acf_lags", 100);
    std::vector<double> series;
    {
        RngStream rng(derive_stream_seed(seed, "mixing-acf", 0));
        PdeStepper stepper(grid);
        DensePath path;
        VelocityField u(grid);
        Vec2 y = yA;
        int burn = acf_len / 10;
        for (int n = 0; n < acf_len + burn; ++n) {
            u = evolve_unit_with(stepper, u, sample_segment(noise, rng), dt, &path);
            y = advance_particle(path, y, 0.0, 1.0, dt);
            if (n >= burn) series.push_back(fam.eval(0, snapshot_row(u, y)));
        }
    }
    AutocorrResult acf = autocorrelation(series, acf_lags);
    auto acsv = open_out(out / "autocorr.csv");
    acsv << "lag,rho\n";
    int first_below = -1;
    for (std::size_t i = 0; i < acf.lags.size(); ++i) {
        acsv << acf.lags[i] << ',' << fmt(acf.rho[i]) << "\n";
        if (first_below < 0 && std::abs(acf.rho[i]) < 0.1)
            first_below = acf.lags[i];
    }

    nlohmann::json summary;
    summary["scenario"] = "mixing";
    summary["seed"] = seed;
    summary["grid"] = grid_json(grid, dt);
    summary["noise_preset"] = noise.preset;
    summary["samples"] = samples;
    summary["n"] = n_max;
    summary["dl_first"] = dl.size() > 1 ? dl[1] : dl[0];
    summary["dl_last"] = dl.back();
    summary["dl_ratio"] = dl.back() > 0 ? (dl.size() > 1 ? dl[1] : dl[0]) / dl.back()
                                        : std::numeric_limits<double>::infinity();
    summary["acf_first_below_0.1"] = first_below;
    summary["acf_degenerate"] = acf.degenerate;
    write_json(out / "summary.json", summary);
    return {"distance.csv", "autocorr.csv", "summary.json"};
}

std::vector<std::string> run_gramian(const Config& cfg, const fs::path& out,
                                     std::uint64_t seed) {
    GridSpec grid = cfg.grid();
    NoiseParams noise = cfg.noise();
    double dt = cfg.dt();
    int K_v = cfg.get_int("gramian.K_v", 2);
    int L_c = cfg.get_int("gramian.L_c", 12);
    double threshold = cfg.get_double("gramian.threshold", 1e-10);
    int warm = cfg.get_int("gramian.warm_segments", 3);

    RngStream rng(derive_stream_seed(seed, "gramian", 0));
    VelocityField u0(grid);
    {
        PdeStepper stepper(grid);
        for (int i = 0; i < warm; ++i)
            u0 = evolve_unit_with(stepper, u0, sample_segment(noise, rng), dt);
    }
    TripleState z0;
    z0.u = u0;
    z0.y = parse_vec2(cfg, "gramian.y0", {0.0, 0.0});
    NoiseRealization eta = sample_segment(noise, rng);
    TripleTrajectory traj = TripleTrajectory::make(z0, eta, dt);
    GramianReport rep = gramian(traj, K_v, L_c, threshold);
    rep.trajectory_id = "seed" + std::to_string(seed) + "-warm" +
                        std::to_string(warm);

    nlohmann::json j;
    j["trajectory_id"] = rep.trajectory_id;
    j["K_v"] = rep.K_v;
    j["L_c"] = rep.L_c;
    j["singular_values"] = rep.singular_values;
    j["rank"] = rep.rank;
    j["threshold"] = rep.threshold;
    j["dim_velocity"] = rep.dim_velocity;
    j["dim_total"] = rep.dim_total;
    j["velocity_block_rank"] = rep.velocity_block_rank;
    j["grid"] = grid_json(grid, dt);
    j["noise_preset"] = noise.preset;
    j["seed"] = seed;
    write_json(out / "gramian.json", j);
    return {"gramian.json"};
}

std::vector<std::string> run_saturate(const Config& cfg, const fs::path& out,
                                      std::uint64_t seed) {
    int R = cfg.get_int("saturate.R", 3);
    int depth = cfg.get_int("saturate.depth", 8);
    SaturationLadder lad = saturation_ladder(R, depth);

    nlohmann::json j;
    j["R"] = lad.R;
    j["dims_per_level"] = lad.dims;
    j["covered_at_level"] = lad.covered_at_level;
    j["full_dim"] = lad.full_dim;
    j["seed"] = seed;
    write_json(out / "ladder.json", j);
    return {"ladder.json"};
}

}  // namespace

bool is_scenario(const std::string& name) {
    return name == "simulate" || name == "lyapunov" || name == "steer" ||
           name == "mixing" || name == "gramian" || name == "saturate";
}

std::vector<std::string> run_scenario(const std::string& scenario,
                                      const Config& cfg,
                                      const std::string& out_dir,
                                      std::uint64_t seed) {
    if (!is_scenario(scenario))
        throw ConfigError("unknown scenario '" + scenario + "'");
    cfg.validate_scenario(scenario);
    fs::path out(out_dir);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw IoFailure("cannot create output directory " + out_dir);

    if (scenario == "simulate") return run_simulate(cfg, out, seed);
    if (scenario == "lyapunov") return run_lyapunov(cfg, out, seed);
    if (scenario == "steer") return run_steer(cfg, out, seed);
    if (scenario == "mixing") return run_mixing(cfg, out, seed);
    if (scenario == "gramian") return run_gramian(cfg, out, seed);
    return run_saturate(cfg, out, seed);
}

Manifest run_with_manifest(const std::string& scenario, const Config& cfg,
                           const std::string& out_dir, std::uint64_t seed) {
    auto t0 = std::chrono::steady_clock::now();
    auto artifacts = run_scenario(scenario, cfg, out_dir, seed);
    auto t1 = std::chrono::steady_clock::now();

    Manifest m;
    m.scenario = scenario;
    m.seed = seed;
    m.config_text = cfg.canonical_text();
    m.config_sha256 = cfg.fingerprint();
    m.version = kVersion;
    m.format = kFormatVersion;
    m.threads = ThreadPool::configured_threads();
    m.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    for (const auto& a : artifacts)
        m.outputs.push_back({a, Sha256::of_file((fs::path(out_dir) / a).string())});
    m.write((fs::path(out_dir) / "manifest.json").string());
    return m;
}

ReplayReport replay_manifest(const std::string& manifest_path,
                             const std::string& work_dir,
                             std::optional<std::uint64_t> seed_override) {
    Manifest m = Manifest::read(manifest_path);
    if (m.version != kVersion)
        throw VersionMismatch("manifest was written by lcl " + m.version +
                              ", this is " + kVersion);
    fs::path mdir = fs::path(manifest_path).parent_path();
    fs::path work = work_dir.empty() ? mdir / "replay" : fs::path(work_dir);

    Config cfg = Config::parse_text(m.config_text, manifest_path);
    std::uint64_t seed = seed_override.value_or(m.seed);
    run_scenario(m.scenario, cfg, work.string(), seed);

    ReplayReport rep;
    bool expected_diff = seed != m.seed;
    for (const auto& e : m.outputs) {
        fs::path original = mdir / e.path;
        fs::path recomputed = work / e.path;
        std::string orig_hash =
            fs::exists(original) ? Sha256::of_file(original.string()) : "missing";
        std::string new_hash = Sha256::of_file(recomputed.string());
        if (orig_hash != e.sha256)
            rep.differing.push_back({e.path, "original-modified"});
        if (new_hash != e.sha256)
            rep.differing.push_back({e.path, "replay-differs"});
    }
    if (rep.differing.empty())
        rep.status = ReplayReport::Status::Identical;
    else
        rep.status = expected_diff ? ReplayReport::Status::DiffExpected
                                   : ReplayReport::Status::Diff;
    return rep;
}

}  // namespace lcl
