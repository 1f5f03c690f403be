#include "curvedmag/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "curvedmag/analytic.hpp"
#include "curvedmag/errors.hpp"
#include "curvedmag/verify.hpp"

namespace curvedmag::cli {

namespace {

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& v) {
    double out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
        throw Error(ErrorKind::ConfigError, "key '" + key + "': not a finite number: '" + v + "'");
    return out;
}

std::size_t parse_count(const std::string& key, const std::string& v) {
    std::size_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || out == 0)
        throw Error(ErrorKind::ConfigError, "key '" + key + "': expected a positive integer");
    return out;
}

}  // namespace

double SimConfig::effective_b() const {
    return lambda ? effective_relativistic_B(b_field, *lambda) : b_field;
}

SimConfig parse_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::ConfigError, "line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw Error(ErrorKind::ConfigError, "line " + std::to_string(lineno) + ": empty key or value");
        if (!kv.emplace(key, value).second)
            throw Error(ErrorKind::ConfigError, "duplicate key '" + key + "'");
    }

    SimConfig cfg;
    for (const char* req : {"model", "B", "r", "t_end"})
        if (!kv.count(req)) throw Error(ErrorKind::ConfigError, std::string("missing key '") + req + "'");

    std::string mode = "adaptive";
    for (const auto& [key, v] : kv) {
        if (key == "model") {
            try {
                cfg.model = parse_model(v);
            } catch (const Error& e) {
                throw Error(ErrorKind::ConfigError, e.what());
            }
        } else if (key == "B") cfg.b_field = parse_real(key, v);
        else if (key == "lambda") cfg.lambda = parse_real(key, v);
        else if (key == "r") cfg.initial.point.r = parse_real(key, v);
        else if (key == "phi") cfg.initial.point.phi = parse_real(key, v);
        else if (key == "z") cfg.initial.point.z = parse_real(key, v);
        else if (key == "vr") cfg.initial.vr = parse_real(key, v);
        else if (key == "vphi") cfg.initial.vphi = parse_real(key, v);
        else if (key == "vz") cfg.initial.vz = parse_real(key, v);
        else if (key == "t_end") cfg.t_end = parse_real(key, v);
        else if (key == "step_mode") mode = v;
        else if (key == "h") cfg.step.h = parse_real(key, v);
        else if (key == "rel_tol") cfg.step.rel_tol = parse_real(key, v);
        else if (key == "abs_tol") cfg.step.abs_tol = parse_real(key, v);
        else if (key == "h_min") cfg.step.h_min = parse_real(key, v);
        else if (key == "h_max") cfg.step.h_max = parse_real(key, v);
        else if (key == "stride") cfg.stride = parse_count(key, v);
        else if (key == "output") cfg.output = v;
        else throw Error(ErrorKind::ConfigError, "unknown key '" + key + "'");
    }
    if (mode == "fixed") cfg.step.mode = StepControl::Mode::Fixed;
    else if (mode == "adaptive") cfg.step.mode = StepControl::Mode::Adaptive;
    else throw Error(ErrorKind::ConfigError, "step_mode must be fixed or adaptive");

    if (!(cfg.t_end > 0)) throw Error(ErrorKind::ConfigError, "t_end must be > 0");
    try {
        cfg.step.validate();
        check_chart(cfg.model, cfg.initial.point);
        if (cfg.lambda) {
            effective_relativistic_B(cfg.b_field, *cfg.lambda);
            require_subluminal(cfg.model, cfg.effective_b(), cfg.initial);
        }
    } catch (const Error& e) {
        throw Error(ErrorKind::ConfigError, e.what());
    }
    return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ConfigError, "cannot open config '" + path.string() + "'");
    return parse_config(in);
}

std::filesystem::path resolve_output(const std::string& output) {
    std::filesystem::path p(output);
    if (p.is_relative()) {
        if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) return std::filesystem::path(dir) / p;
    }
    return p;
}

void write_csv(std::ostream& out, SpaceModel m, double B, const Trajectory& tr) {
    out << "t,r,phi,z,vr,vphi,vz,eps,I,A\n";
    for (const Sample& s : tr.samples) {
        const MotionConstants c = invariants_of(m, B, s.state);
        const CylState& st = s.state;
        out << g17(s.t) << ',' << g17(st.point.r) << ',' << g17(st.point.phi) << ',' << g17(st.point.z) << ','
            << g17(st.vr) << ',' << g17(st.vphi) << ',' << g17(st.vz) << ',' << g17(c.epsilon) << ','
            << g17(c.i_phi) << ',' << g17(c.a_transverse) << '\n';
    }
}

void write_summary(std::ostream& out, const SimConfig& cfg, const Trajectory& tr) {
    const double B = cfg.effective_b();
    const MotionConstants fin = invariants_of(cfg.model, B, tr.samples.back().state);
    out << "model = " << to_string(cfg.model) << '\n';
    out << "B = " << g17(cfg.b_field) << '\n';
    if (cfg.lambda) out << "lambda = " << g17(*cfg.lambda) << '\n';
    out << "B_effective = " << g17(B) << '\n';
    out << "termination = " << to_string(tr.termination) << '\n';
    if (!tr.reason.empty()) out << "reason = " << tr.reason << '\n';
    out << "partial = " << (tr.termination == Termination::Completed ? "false" : "true") << '\n';
    out << "samples = " << tr.samples.size() << '\n';
    out << "accepted_steps = " << tr.accepted_steps << '\n';
    out << "rejected_steps = " << tr.rejected_steps << '\n';
    out << "t_final = " << g17(tr.samples.back().t) << '\n';
    out << "initial_eps = " << g17(tr.initial.epsilon) << '\n';
    out << "initial_I = " << g17(tr.initial.i_phi) << '\n';
    out << "initial_A = " << g17(tr.initial.a_transverse) << '\n';
    out << "final_eps = " << g17(fin.epsilon) << '\n';
    out << "final_I = " << g17(fin.i_phi) << '\n';
    out << "final_A = " << g17(fin.a_transverse) << '\n';
    out << "drift_eps = " << g17(tr.drift.epsilon) << '\n';
    out << "drift_I = " << g17(tr.drift.i_phi) << '\n';
    out << "drift_A = " << g17(tr.drift.a_transverse) << '\n';
    if (cfg.model != SpaceModel::Euclidean) {
        const TrajectoryClass c = classify(cfg.model, B, tr.initial.i_phi, tr.initial.a_transverse,
                                           tr.initial.epsilon, cfg.initial.point.z);
        out << "radial_class = " << to_string(c.radial) << '\n';
        out << "axial_class = " << to_string(c.axial) << '\n';
    }
}

int cmd_simulate(const std::filesystem::path& config, std::ostream& out, std::ostream& err) {
    SimConfig cfg;
    try {
        cfg = load_config(config);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    }
    IntegrateOptions opt;
    opt.stride = cfg.stride;
    Trajectory tr;
    try {
        tr = integrate(cfg.model, cfg.effective_b(), cfg.initial, cfg.t_end, cfg.step, opt);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    }

    const std::filesystem::path csv = resolve_output(cfg.output);
    if (csv.has_parent_path()) std::filesystem::create_directories(csv.parent_path());
    std::ofstream f(csv);
    if (!f) {
        err << "error: cannot write '" << csv.string() << "'\n";
        return kParseError;
    }
    write_csv(f, cfg.model, cfg.effective_b(), tr);
    std::filesystem::path summary_path = csv;
    summary_path += ".summary";
    std::ofstream sf(summary_path);
    write_summary(sf, cfg, tr);
    out << "output = " << csv.string() << '\n';
    write_summary(out, cfg, tr);
    if (tr.termination != Termination::Completed) {
        err << "warning: run aborted: " << tr.reason << '\n';
        return kAborted;
    }
    return kOk;
}

int cmd_classify(const std::string& model, double B, double I, double A, double epsilon,
                 std::ostream& out, std::ostream& err) {
    try {
        for (double v : {B, I, A, epsilon})
            if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "arguments must be finite");
        const SpaceModel m = parse_model(model);
        const TrajectoryClass c = classify(m, B, I, A, epsilon);
        const RadialQuadratic q = radial_quadratic(m, B, I, A);
        out << "model = " << to_string(m) << '\n';
        out << "radial_class = " << to_string(c.radial) << '\n';
        out << "axial_class = " << to_string(c.axial) << '\n';
        out << "a = " << g17(q.a) << "\nb = " << g17(q.b) << "\nc = " << g17(q.c) << "\ndisc = " << g17(q.disc)
            << '\n';
        if (q.roots) out << "root_1 = " << g17(q.roots->first) << "\nroot_2 = " << g17(q.roots->second) << '\n';
        else out << "roots = none\n";
        try {
            const CanonicalParams cp = canonical_parameters(m, B, I, A);
            out << "J = " << g17(cp.j) << "\nC = " << g17(cp.c_par) << '\n';
        } catch (const Error&) {
            out << "J = " << g17(m == SpaceModel::Hyperbolic ? I + B : B - I) << "\nC = unavailable\n";
        }
        out << "invariant = " << g17(m == SpaceModel::Hyperbolic ? B * B - A : A + B * B) << '\n';
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    }
    return kOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, std::size_t n_cases, std::ostream& out,
               std::ostream& err) {
    static const char* kSuites[] = {"conservation", "closed-form", "surface", "symmetry", "convergence", "all"};
    if (std::find(std::begin(kSuites), std::end(kSuites), suite) == std::end(kSuites)) {
        err << "error: unknown suite '" << suite << "'\n";
        return kParseError;
    }
    if (n_cases == 0) {
        err << "error: --cases must be >= 1\n";
        return kParseError;
    }
    const bool all = suite == "all";
    std::vector<verify::CheckReport> reports;
    auto add = [&](std::vector<verify::CheckReport> rs) {
        for (auto& r : rs) reports.push_back(std::move(r));
    };
    const SpaceModel models[] = {SpaceModel::Hyperbolic, SpaceModel::Spherical};
    for (SpaceModel m : models) {
        if (all || suite == "conservation")
            reports.push_back(verify::run_conservation_sweep(m, n_cases, 50.0, StepControl::adaptive(), seed));
        if (all || suite == "closed-form") add(verify::run_closed_form_sweep(m, n_cases, seed));
        if (all || suite == "surface") add(verify::run_surface_sweep(m, n_cases, seed));
        if (all || suite == "symmetry") add(verify::run_symmetry_sweep(m, n_cases, seed));
    }
    if (all || suite == "convergence") {
        const std::vector<double> ladder{1e-2, 5e-3, 2.5e-3};
        const std::pair<verify::ConvergenceCase, const char*> cases[] = {
            {verify::ConvergenceCase::FixedRadiusHyperbolic, "convergence/order/Hyperbolic"},
            {verify::ConvergenceCase::PeriodicSpherical, "convergence/order/Spherical"}};
        for (const auto& [c, name] : cases) {
            const double order = verify::measure_convergence_order(c, ladder);
            out << "fitted order " << name << " = " << order << '\n';
            verify::Tracker t(name, 0.3, seed);
            t.add(std::abs(order - 4.0), "order=" + g17(order));
            reports.push_back(t.finish());
        }
        for (SpaceModel m : models) {
            std::vector<double> lx, ly;
            for (double s : {0.04, 0.02, 0.01}) {
                lx.push_back(std::log(s));
                ly.push_back(std::log(verify::flat_limit_error(m, s)));
            }
            const double slope = verify::fitted_slope(lx, ly);
            const std::string name = "convergence/flat-limit/" + std::string(to_string(m));
            out << "fitted slope " << name << " = " << slope << '\n';
            verify::Tracker t(name, 0.2, seed);
            t.add(std::abs(slope - 2.0), "slope=" + g17(slope));
            reports.push_back(t.finish());
        }
    }
    bool ok = true;
    for (const auto& r : reports) {
        out << verify::to_text(r) << '\n';
        ok = ok && r.passed;
    }
    out << (ok ? "verify: all checks passed" : "verify: FAILED") << '\n';
    return ok ? kOk : kVerifyFailed;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Charged particle motion in a uniform magnetic field on H3, S3 and E3"};
    app.require_subcommand(1);

    std::string config;
    auto* sim = app.add_subcommand("simulate", "Integrate a trajectory from a config file");
    sim->add_option("config", config, "key = value config file")->required();

    std::string model;
    double B = 0, I = 0, A = 0, eps = 0;
    auto* cls = app.add_subcommand("classify", "Classify a parameter set");
    cls->add_option("model", model)->required();
    cls->add_option("B", B)->required();
    cls->add_option("I", I)->required();
    cls->add_option("A", A)->required();
    cls->add_option("eps", eps)->required();

    std::string suite = "all";
    std::uint64_t seed = 42;
    std::size_t n_cases = 100;
    auto* ver = app.add_subcommand("verify", "Run the cross-check suites");
    ver->add_option("--suite", suite, "conservation, closed-form, surface, symmetry, convergence or all");
    ver->add_option("--seed", seed);
    ver->add_option("--cases", n_cases);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    }

    if (sim->parsed()) return cmd_simulate(config, out, err);
    if (cls->parsed()) return cmd_classify(model, B, I, A, eps, out, err);
    return cmd_verify(suite, seed, n_cases, out, err);
}

}  // namespace curvedmag::cli
