// linflow command-line front end: simulate, classify, sweep, lagrangian,
// validate. Emits CSV time series and JSON summaries for offline plotting;
// identical configuration produces byte-identical output files.

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "linflow/acceptance.hpp"
#include "linflow/classifier.hpp"
#include "linflow/closed_forms.hpp"
#include "linflow/dynamics.hpp"
#include "linflow/io.hpp"
#include "linflow/lagrangian.hpp"
#include "linflow/spectral.hpp"

namespace {

using namespace linflow;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_csv_numbers(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(cell, &pos));
            if (pos != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
            throw ValidationError("not a number: '" + cell + "'");
        }
    }
    return out;
}

// Accepts "m11,m12,...,m33" (row-major) or "diag(a,b,c)".
Mat3 parse_matrix(const std::string& text) {
    std::string t = text;
    if (t.rfind("diag(", 0) == 0 && t.back() == ')') {
        const std::vector<double> d = parse_csv_numbers(t.substr(5, t.size() - 6));
        if (d.size() != 3) throw ValidationError("diag(...) needs exactly 3 entries");
        return Mat3::diag(d[0], d[1], d[2]);
    }
    const std::vector<double> v = parse_csv_numbers(t);
    if (v.size() != 9) throw ValidationError("--matrix needs 9 row-major entries");
    Mat3 m;
    std::copy(v.begin(), v.end(), m.m.begin());
    return m;
}

// "s11,s22,s33,s12,s13,s23,w1,w2,w3"
StrainVorticityPair parse_pair(const std::string& text) {
    const std::vector<double> v = parse_csv_numbers(text);
    if (v.size() != 9)
        throw ValidationError("--pair needs 9 entries: s11,s22,s33,s12,s13,s23,w1,w2,w3");
    const SymMat3 s{v[0], v[1], v[2], v[3], v[4], v[5]};
    return StrainVorticityPair(s, {v[6], v[7], v[8]});
}

AlignedParams parse_params(const std::string& text) {
    const std::vector<double> v = parse_csv_numbers(text);
    if (v.size() != 3) throw ValidationError("--params needs lambda0,r0,k0");
    if (!(v[0] > 0.0)) throw ValidationError("precondition violated: lambda0 must be > 0");
    return {v[0], v[1], v[2]};
}

double env_default_rel_tol() {
    if (const char* s = std::getenv("LINFLOW_DEFAULT_TOL")) {
        try {
            const double v = std::stod(s);
            if (v > 0.0) return v;
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring malformed LINFLOW_DEFAULT_TOL\n";
    }
    return 1e-10;
}

struct SolverFlags {
    double rel_tol = env_default_rel_tol();
    double abs_tol = 1e-12;
    double t_end = 10.0;
    double threshold = 1e9;
    std::size_t max_samples = 200000;
    unsigned n_samples = 256;

    void attach(CLI::App* cmd) {
        cmd->add_option("--rel-tol", rel_tol, "relative tolerance")->capture_default_str();
        cmd->add_option("--abs-tol", abs_tol, "absolute tolerance")->capture_default_str();
        cmd->add_option("--t-end", t_end, "integration horizon")->capture_default_str();
        cmd->add_option("--blowup-threshold", threshold, "norm threshold for blowup")
            ->capture_default_str();
        cmd->add_option("--max-samples", max_samples, "sample budget")->capture_default_str();
        cmd->add_option("--samples", n_samples, "uniform sample times written to the series")
            ->capture_default_str();
    }

    SolverConfig config() const {
        SolverConfig cfg;
        cfg.rel_tol = rel_tol;
        cfg.abs_tol = abs_tol;
        cfg.t_end = t_end;
        cfg.blowup_norm_threshold = threshold;
        cfg.max_samples = max_samples;
        for (unsigned s = 1; s <= n_samples; ++s)
            cfg.sample_times.push_back(t_end * s / n_samples);
        try {
            cfg.validate();
        } catch (const std::invalid_argument& e) {
            throw ValidationError(e.what());
        }
        return cfg;
    }
};

void require_extension(const std::string& path, const std::string& ext,
                       const std::string& flag) {
    if (path.size() < ext.size() || path.substr(path.size() - ext.size()) != ext)
        throw ValidationError(flag + " expects a " + ext + " path (format by extension)");
}

json params_json(const AlignedParams& p) {
    return {{"form", "params"}, {"lambda0", p.lambda}, {"r0", p.r}, {"k0", p.k}};
}

json matrix_json(const Mat3& m, const char* form) {
    const StrainVorticityPair pr = decompose(TraceFreeMatrix::project(m));
    return {{"form", form},
            {"entries", m.m},
            {"strain",
             {pr.strain().xx, pr.strain().yy, pr.strain().zz, pr.strain().xy, pr.strain().xz,
              pr.strain().yz}},
            {"vorticity", {pr.vorticity().x, pr.vorticity().y, pr.vorticity().z}}};
}

void print_termination(std::ostream& os, const Termination& term) {
    os << "termination: " << io::termination_name(term.kind) << '\n';
    if (term.blowup) {
        os << "t_max_estimate: " << io::format_full(term.blowup->t_max) << "\n"
           << "t_max_interval: [" << io::format_full(term.blowup->lower) << ", "
           << io::format_full(term.blowup->upper) << "]\n";
    }
}

// ---- simulate ---------------------------------------------------------------

struct SimulateOpts {
    std::string params_text, matrix_text, pair_text;
    SolverFlags solver;
    std::string series_path, summary_path;
};

int run_simulate(const SimulateOpts& opt) {
    const SolverConfig cfg = opt.solver.config();
    json input;
    json summary;
    Termination term;

    if (!opt.params_text.empty()) {
        const AlignedParams p0 = parse_params(opt.params_text);
        const auto traj = integrate_params(p0, cfg);
        term = traj.termination;
        input = params_json(p0);
        if (!opt.series_path.empty()) {
            require_extension(opt.series_path, ".csv", "--series");
            io::write_csv_file(opt.series_path, io::aligned_series(traj));
        }
        summary = io::run_summary(input, term, io::m0_drift(traj), std::nullopt,
                                  io::boundary_c_drift(traj), traj.times.size());
    } else {
        Trajectory<Mat3> traj;
        if (!opt.matrix_text.empty()) {
            const Mat3 m = parse_matrix(opt.matrix_text);
            TraceFreeMatrix m0(m);  // throws on large trace violation
            input = matrix_json(m0.matrix(), "matrix");
            traj = integrate_matrix(m0, cfg);
        } else {
            const StrainVorticityPair p0 = parse_pair(opt.pair_text);
            const auto pair_traj = integrate_pair(p0, cfg);
            // Emit through the matrix schema; recompose each sample.
            traj.times = pair_traj.times;
            traj.norms = pair_traj.norms;
            traj.termination = pair_traj.termination;
            traj.trace_projections = pair_traj.trace_projections;
            traj.rel_tol_used = pair_traj.rel_tol_used;
            for (const PairState& s : pair_traj.states)
                traj.states.push_back(recompose(s.pair()).matrix());
            input = matrix_json(recompose(p0).matrix(), "pair");
        }
        term = traj.termination;
        if (!opt.series_path.empty()) {
            require_extension(opt.series_path, ".csv", "--series");
            io::write_csv_file(opt.series_path, io::matrix_series(traj));
        }
        summary = io::run_summary(input, term, std::nullopt, io::trace_drift(traj),
                                  std::nullopt, traj.times.size());
    }

    if (!opt.summary_path.empty()) {
        require_extension(opt.summary_path, ".json", "--summary");
        io::write_json_file(opt.summary_path, summary);
    }
    print_termination(std::cout, term);
    std::cout << "samples: " << summary["samples_written"] << '\n';
    return term.kind == TerminationKind::step_underflow ? kExitNumerical : kExitOk;
}

// ---- classify ---------------------------------------------------------------

struct ClassifyOpts {
    std::string params_text, matrix_text, pair_text;
    double tol = 1e-8;
    bool verify = false;
    double verify_tol = 2e-2;
};

void print_prediction(std::ostream& os, const FatePrediction& pred) {
    os << "case: " << to_string(pred.tag) << '\n'
       << "finite_blowup: " << (pred.finite_blowup ? "true" : "false") << '\n'
       << "lambda_limit: " << to_string(pred.lambda_limit) << '\n';
    if (pred.limits)
        os << "r_limit: " << io::format_full(pred.limits->first) << '\n'
           << "k_limit: " << io::format_full(pred.limits->second) << '\n';
    if (pred.t_max_exact) os << "t_max_exact: " << io::format_full(*pred.t_max_exact) << '\n';
    if (pred.blowup_profile) {
        os << "blowup_profile:";
        for (double v : pred.blowup_profile->m) os << ' ' << io::format_full(v);
        os << '\n';
    }
    if (pred.ill_conditioned) os << "ill_conditioned: true\n";
}

void print_report(std::ostream& os, const VerifyReport& rep) {
    if (rep.inconclusive) {
        os << "verification: inconclusive (" << rep.note << ")\n";
        return;
    }
    for (const CheckLine& c : rep.checks)
        os << "  [" << (c.pass ? "ok" : "FAIL") << "] " << c.name
           << ": predicted=" << io::format_full(c.predicted)
           << " observed=" << io::format_full(c.observed) << " tol=" << c.tol << '\n';
    os << "verification: " << (rep.passed ? "passed" : "failed") << '\n';
}

int run_classify(const ClassifyOpts& opt) {
    if (!opt.params_text.empty()) {
        const AlignedParams p0 = parse_params(opt.params_text);
        const FatePrediction pred = classify_aligned(p0);
        print_prediction(std::cout, pred);
        if (opt.verify) {
            const auto traj = integrate_params(p0, verification_config(pred, p0.lambda));
            print_report(std::cout, verify_prediction(pred, traj, opt.verify_tol));
        }
        return kExitOk;
    }
    Mat3 m = opt.matrix_text.empty() ? recompose(parse_pair(opt.pair_text)).matrix()
                                     : parse_matrix(opt.matrix_text);
    const TraceFreeMatrix m0(m);
    const FatePrediction pred = classify_general(m0, opt.tol);
    print_prediction(std::cout, pred);
    if (opt.verify) {
        SolverConfig cfg;
        cfg.t_end = 400.0;
        cfg.blowup_norm_threshold = 1e7;
        const auto traj = integrate_matrix(m0, cfg);
        print_report(std::cout, verify_prediction(pred, traj, opt.verify_tol));
    }
    return kExitOk;
}

// ---- sweep ------------------------------------------------------------------

struct RangeSpec {
    double lo = 0.0, hi = 0.0;
    unsigned count = 1;
};

RangeSpec parse_range(const std::string& text, const std::string& flag) {
    std::stringstream ss(text);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c))
        throw ValidationError(flag + " expects min:max:count");
    RangeSpec r;
    try {
        r.lo = std::stod(a);
        r.hi = std::stod(b);
        const long n = std::stol(c);
        if (n < 1) throw std::invalid_argument(c);
        r.count = static_cast<unsigned>(n);
    } catch (const std::exception&) {
        throw ValidationError(flag + " expects min:max:count with count >= 1");
    }
    if (r.count > 1 && !(r.hi >= r.lo)) throw ValidationError(flag + ": max must be >= min");
    return r;
}

double range_at(const RangeSpec& r, unsigned i) {
    if (r.count == 1) return r.lo;
    return r.lo + (r.hi - r.lo) * i / (r.count - 1);
}

struct SweepOpts {
    double lambda0 = 1.0;
    std::string r_range = "-1:1.5:21";
    std::string k_range = "0:2.5:21";
    bool verify = false;
    double verify_tol = 2e-2;
    double margin = 0.0;
    unsigned jobs = 0;
    std::size_t max_points = 100000;
    std::string out_path;
};

int run_sweep(const SweepOpts& opt) {
    if (!(opt.lambda0 > 0.0))
        throw ValidationError("precondition violated: lambda0 must be > 0");
    const RangeSpec rr = parse_range(opt.r_range, "--r-range");
    const RangeSpec kr = parse_range(opt.k_range, "--k-range");
    const std::size_t total = static_cast<std::size_t>(rr.count) * kr.count;
    if (total > opt.max_points) throw ValidationError("grid exceeds --max-points");

    std::vector<json> records(total);
    std::atomic<std::size_t> cursor{0};
    const unsigned jobs =
        opt.jobs ? opt.jobs : std::max(1u, std::thread::hardware_concurrency());

    const auto work = [&]() {
        for (std::size_t idx = cursor.fetch_add(1); idx < total; idx = cursor.fetch_add(1)) {
            const unsigned i = static_cast<unsigned>(idx / kr.count);
            const unsigned j = static_cast<unsigned>(idx % kr.count);
            const double r0 = range_at(rr, i);
            const double k0 = range_at(kr, j);
            json rec{{"r0", r0}, {"k0", k0}};
            try {
                const AlignedParams p0{opt.lambda0, r0, k0};
                const FatePrediction pred = classify_aligned(p0);
                rec["case"] = to_string(pred.tag);
                rec["finite_blowup"] = pred.finite_blowup;
                if (pred.limits)
                    rec["limits"] = {pred.limits->first, pred.limits->second};
                if (pred.t_max_exact) rec["t_max_exact"] = *pred.t_max_exact;
                const bool near_boundary =
                    opt.margin > 0.0 && case_boundary_distance(r0, k0) <= opt.margin;
                if (opt.verify && !near_boundary) {
                    const auto traj =
                        integrate_params(p0, verification_config(pred, p0.lambda));
                    const VerifyReport rep = verify_prediction(pred, traj, opt.verify_tol);
                    json checks = json::array();
                    for (const CheckLine& c : rep.checks)
                        checks.push_back({{"name", c.name},
                                          {"predicted", c.predicted},
                                          {"observed", c.observed},
                                          {"pass", c.pass}});
                    rec["verify"] = {{"passed", rep.passed},
                                     {"inconclusive", rep.inconclusive},
                                     {"checks", checks}};
                } else if (opt.verify) {
                    rec["verify"] = {{"skipped", "within boundary margin"}};
                }
            } catch (const std::exception& e) {
                rec["error"] = e.what();
            }
            records[idx] = std::move(rec);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < jobs; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();

    json out = json::array();
    std::size_t verified = 0, passed = 0;
    for (auto& rec : records) {
        if (rec.contains("verify") && rec["verify"].contains("passed")) {
            ++verified;
            if (rec["verify"]["passed"].get<bool>() &&
                !rec["verify"]["inconclusive"].get<bool>())
                ++passed;
        }
        out.push_back(std::move(rec));
    }
    if (!opt.out_path.empty()) {
        require_extension(opt.out_path, ".json", "--out");
        io::write_json_file(opt.out_path, out);
    } else {
        std::cout << out.dump(2) << '\n';
    }
    std::cout << "points: " << total;
    if (opt.verify) std::cout << ", verified: " << passed << "/" << verified;
    std::cout << '\n';
    return kExitOk;
}

// ---- lagrangian -------------------------------------------------------------

struct LagrangianOpts {
    std::string family_text = "1,0.5";
    std::string scenario = "particles";
    unsigned frames = 20;
    double t_frac = 0.9;
    std::string y0_text = "1,1,1";
    double radius = 1.0;
    unsigned theta_samples = 64;
    std::string out_path;
};

int run_lagrangian(const LagrangianOpts& opt) {
    const std::vector<double> fam = parse_csv_numbers(opt.family_text);
    if (fam.size() != 2) throw ValidationError("--family needs lambda0,r");
    if (!(fam[0] > 0.0)) throw ValidationError("precondition violated: lambda0 must be > 0");
    if (!(fam[1] > 0.0) || fam[1] > 1.0)
        throw ValidationError(
            "precondition violated: closed-form scenarios need family r in (0, 1]");
    if (!(opt.t_frac > 0.0) || opt.t_frac >= 1.0)
        throw ValidationError("--t-frac must be in (0, 1)");
    const FamilySolution family(fam[0], fam[1]);
    const FlowMapSpec spec(family);
    const double t_last = opt.t_frac * *family.t_max();

    io::TimeSeries ts;
    if (opt.scenario == "particles") {
        const std::vector<double> y = parse_csv_numbers(opt.y0_text);
        if (y.size() != 3) throw ValidationError("--y0 needs x,y,z");
        const Vec3 y0{y[0], y[1], y[2]};
        ts.columns = {"t", "x", "y", "z", "jacobian_det"};
        for (unsigned f = 0; f <= opt.frames; ++f) {
            const double t = t_last * f / opt.frames;
            const Vec3 p = flow_map(spec, y0, t);
            ts.rows.push_back({t, p.x, p.y, p.z, spec.jacobian_det(t)});
        }
    } else if (opt.scenario == "circle-eigenplane" || opt.scenario == "circle-yz") {
        const bool yz = opt.scenario == "circle-yz";
        ts.columns = {"t", "theta", "x", "y", "z", "jacobian_det"};
        for (unsigned f = 0; f <= opt.frames; ++f) {
            const double t = t_last * f / opt.frames;
            const double det = spec.jacobian_det(t);
            for (unsigned s = 0; s < opt.theta_samples; ++s) {
                const double theta = 2.0 * M_PI * s / opt.theta_samples - M_PI;
                const Vec3 p = yz ? circle_image_yz(opt.radius, spec, t, theta)
                                  : circle_image_eigenplane(opt.radius, spec, t, theta);
                ts.rows.push_back({t, theta, p.x, p.y, p.z, det});
            }
        }
    } else if (opt.scenario == "pressure-probe") {
        ts.columns = {"t", "pressure", "bernoulli"};
        for (unsigned f = 0; f <= opt.frames; ++f) {
            const double t = t_last * f / opt.frames;
            const PressureProbe pr = seregin_sverak_probe(spec, t, opt.radius);
            ts.rows.push_back({t, pr.pressure, pr.bernoulli});
        }
    } else {
        throw ValidationError("unknown --scenario '" + opt.scenario + "'");
    }

    if (!opt.out_path.empty()) {
        require_extension(opt.out_path, ".csv", "--out");
        io::write_csv_file(opt.out_path, ts);
        std::cout << "rows: " << ts.rows.size() << '\n';
    } else {
        io::write_csv(std::cout, ts);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for spatially linear incompressible flows"};
    app.require_subcommand(1);

    SimulateOpts sim;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "integrate initial data and emit a time series plus summary");
    simulate->set_config("--config");
    auto* sim_in = simulate->add_option_group("input", "initial data (exactly one)");
    sim_in->add_option("--params", sim.params_text, "lambda0,r0,k0 aligned data");
    sim_in->add_option("--matrix", sim.matrix_text, "9 row-major entries or diag(a,b,c)");
    sim_in->add_option("--pair", sim.pair_text, "s11,s22,s33,s12,s13,s23,w1,w2,w3");
    sim_in->require_option(1);
    sim.solver.attach(simulate);
    simulate->add_option("--series", sim.series_path, "CSV time-series output path");
    simulate->add_option("--summary", sim.summary_path, "JSON summary output path");

    ClassifyOpts cls;
    CLI::App* classify =
        app.add_subcommand("classify", "predict the fate of initial data");
    classify->set_config("--config");
    auto* cls_in = classify->add_option_group("input", "initial data (exactly one)");
    cls_in->add_option("--params", cls.params_text, "lambda0,r0,k0 aligned data");
    cls_in->add_option("--matrix", cls.matrix_text, "9 row-major entries or diag(a,b,c)");
    cls_in->add_option("--pair", cls.pair_text, "s11,s22,s33,s12,s13,s23,w1,w2,w3");
    cls_in->require_option(1);
    classify->add_option("--tol", cls.tol, "spectral classification tolerance")
        ->capture_default_str();
    classify->add_flag("--verify", cls.verify, "integrate and compare against the prediction");
    classify->add_option("--verify-tol", cls.verify_tol, "verification tolerance")
        ->capture_default_str();

    SweepOpts swp;
    CLI::App* sweep =
        app.add_subcommand("sweep", "classify (optionally verify) a grid of aligned data");
    sweep->set_config("--config");
    sweep->add_option("--lambda0", swp.lambda0, "lambda0 for every grid point")
        ->capture_default_str();
    sweep->add_option("--r-range", swp.r_range, "r grid as min:max:count")
        ->capture_default_str();
    sweep->add_option("--k-range", swp.k_range, "k grid as min:max:count")
        ->capture_default_str();
    sweep->add_flag("--verify", swp.verify, "verify each point against the dynamics");
    sweep->add_option("--verify-tol", swp.verify_tol, "verification tolerance")
        ->capture_default_str();
    sweep->add_option("--margin", swp.margin,
                      "skip verification within this distance of case boundaries")
        ->capture_default_str();
    sweep->add_option("--jobs", swp.jobs, "worker threads (0 = hardware)")
        ->capture_default_str();
    sweep->add_option("--max-points", swp.max_points, "grid size guard")
        ->capture_default_str();
    sweep->add_option("--out", swp.out_path, "JSON output path (stdout if omitted)");

    LagrangianOpts lag;
    CLI::App* lagr = app.add_subcommand(
        "lagrangian", "closed-form particle/circle/pressure scenarios for a blowup family");
    lagr->set_config("--config");
    lagr->add_option("--family", lag.family_text, "lambda0,r with r in (0,1]")
        ->capture_default_str();
    lagr->add_option("--scenario", lag.scenario,
                     "particles | circle-eigenplane | circle-yz | pressure-probe")
        ->capture_default_str();
    lagr->add_option("--frames", lag.frames, "number of time frames")->capture_default_str();
    lagr->add_option("--t-frac", lag.t_frac, "last frame as a fraction of t_max")
        ->capture_default_str();
    lagr->add_option("--y0", lag.y0_text, "particle start (particles scenario)")
        ->capture_default_str();
    lagr->add_option("--radius", lag.radius, "circle radius / probe distance")
        ->capture_default_str();
    lagr->add_option("--theta-samples", lag.theta_samples, "points per circle frame")
        ->capture_default_str();
    lagr->add_option("--out", lag.out_path, "CSV output path (stdout if omitted)");

    unsigned validate_jobs = 0;
    CLI::App* validate =
        app.add_subcommand("validate", "run the full acceptance suite and report pass/fail");
    validate->add_option("--jobs", validate_jobs, "worker threads (0 = hardware)")
        ->capture_default_str();

    bool dump_config = false;
    for (CLI::App* cmd : {simulate, classify, sweep, lagr})
        cmd->add_flag("--dump-config", dump_config, "print effective defaults and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (dump_config) {
            for (CLI::App* cmd : {simulate, classify, sweep, lagr})
                if (cmd->parsed())
                    std::cout << cmd->config_to_str(true, true);
            return kExitOk;
        }
        if (simulate->parsed()) return run_simulate(sim);
        if (classify->parsed()) return run_classify(cls);
        if (sweep->parsed()) return run_sweep(swp);
        if (lagr->parsed()) return run_lagrangian(lag);
        if (validate->parsed()) {
            const auto results = acceptance::run_all(std::cout, validate_jobs);
            return acceptance::all_passed(results) ? kExitOk : 1;
        }
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::domain_error& e) {
        std::cerr << "validation error: precondition violated: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const io::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}
