// rcm: command-line driver for simulations, OZ solves and diagram certification.

#include <rcm/certify.hpp>
#include <rcm/io.hpp>
#include <rcm/model.hpp>
#include <rcm/oz.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using rcm::json;

namespace {

constexpr const char* version = "rcm 1.0.0";

struct Globals {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<uint64_t> seed;
    int threads = 1;
    size_t budget_cells = rcm::default_pair_budget;
};

struct Run {
    std::string command;
    json config;  // effective config, the digest input
    Globals g;
    std::string digest;
    std::vector<std::string> outputs;

    fs::path out(const std::string& name) {
        outputs.push_back(name);
        return fs::path(g.out_dir) / name;
    }
    void write(const std::string& name, const std::string& bytes) { rcm::detail::write_atomic(out(name), bytes); }
};

const json& need(const json& cfg, const std::string& key) {
    if (!cfg.is_object() || !cfg.contains(key)) throw rcm::config_error("missing config key: " + key);
    return cfg.at(key);
}

template <class T>
T get_or(const json& cfg, const std::string& key, T fallback) {
    return cfg.contains(key) ? cfg.at(key).get<T>() : fallback;
}

int dimension(const json& cfg) {
    const int d = need(cfg, "dimension").get<int>();
    if (d < 1) throw rcm::config_error("dimension must be positive");
    return d;
}

rcm::AdjacencyKernel kernel_from(const json& cfg, int d) {
    const json& k = need(cfg, "kernel");
    const std::string variant = k.is_string() ? k.get<std::string>() : need(k, "variant").get<std::string>();
    if (variant == "disk") return rcm::make_disk(d);
    if (variant == "gaussian") return rcm::make_gaussian(d);
    if (variant == "tabulated") {
        const json& p = need(k, "params");
        return rcm::make_tabulated(d, need(p, "r").get<std::vector<double>>(), need(p, "phi").get<std::vector<double>>());
    }
    throw rcm::config_error("unknown kernel variant: " + variant);
}

std::vector<double> lambdas_from(const json& cfg) {
    const json& l = need(cfg, "lambda");
    auto out = l.is_array() ? l.get<std::vector<double>>() : std::vector<double>{l.get<double>()};
    for (double x : out)
        if (x < 0.0) throw rcm::config_error("lambda must be nonnegative");
    return out;
}

rcm::BoxDomain box_from(const json& cfg, int d) {
    rcm::BoxDomain dom;
    dom.d = d;
    dom.L = need(need(cfg, "box"), "L").get<double>();
    if (!(dom.L > 0.0)) throw rcm::config_error("box.L must be positive");
    return dom;
}

rcm::Seeds seeds_from(const json& cfg) {
    const json s = cfg.value("seeds", json::object());
    rcm::Seeds seeds = rcm::seeds_from_master(s.value("master", uint64_t{1}));
    if (s.contains("point")) seeds.point = s.at("point").get<uint64_t>();
    if (s.contains("edge")) seeds.edge = s.at("edge").get<uint64_t>();
    return seeds;
}

std::vector<std::vector<double>> displacements_from(const json& cfg, int d) {
    auto xs = need(cfg, "displacements").get<std::vector<std::vector<double>>>();
    for (const auto& x : xs)
        if (static_cast<int>(x.size()) != d) throw rcm::config_error("displacement has wrong dimension");
    return xs;
}

void check_sample_budget(const json& cfg, uint64_t total) {
    const uint64_t cap = cfg.value("max_samples", uint64_t{1} << 40);
    if (total > cap) throw rcm::budget_error("sample budget exceeded");
}

// ---- commands --------------------------------------------------------------------

void cmd_adjacency(Run& run) {
    const int d = dimension(run.config);
    const auto k = kernel_from(run.config, d);
    std::vector<rcm::EstimateRecord> rows;
    for (const auto& x : run.config.value("points", std::vector<std::vector<double>>{})) {
        if (static_cast<int>(x.size()) != d) throw rcm::config_error("point has wrong dimension");
        rcm::EstimateRecord r;
        r.quantity = "phi";
        r.x = x;
        r.value = rcm::eval_adjacency(k, x);
        r.config_digest = run.digest;
        rows.push_back(r);
    }
    run.write("adjacency.csv", rcm::estimate_csv(rows, d));
    json rep = {{"variant", rcm::to_string(k.variant)},
                {"dimension", d},
                {"normalization", rcm::kernel_normalization(k)},
                {"r_cut", k.r_cut}};
    if (k.variant == rcm::KernelVariant::disk) rep["R"] = k.R;
    run.write("adjacency.json", rep.dump(2) + "\n");
}

std::vector<rcm::EstimateRecord> tau_rows(Run& run, int d) {
    const auto k = kernel_from(run.config, d);
    const auto dom = box_from(run.config, d);
    const auto xs = displacements_from(run.config, d);
    const auto lambdas = lambdas_from(run.config);
    const uint64_t samples = need(run.config, "samples").get<uint64_t>();
    check_sample_budget(run.config, samples * xs.size() * lambdas.size());
    rcm::McOptions opt;
    opt.threads = run.g.threads;
    std::vector<rcm::EstimateRecord> rows;
    for (double lam : lambdas)
        for (const auto& x : xs) {
            auto r = rcm::palm_two_point(k, lam, x, samples, dom, seeds_from(run.config), opt);
            r.config_digest = run.digest;
            rows.push_back(r);
        }
    return rows;
}

std::vector<rcm::EstimateRecord> chi_rows(Run& run, int d) {
    const auto k = kernel_from(run.config, d);
    const auto dom = box_from(run.config, d);
    const auto lambdas = lambdas_from(run.config);
    const uint64_t samples = need(run.config, "samples").get<uint64_t>();
    check_sample_budget(run.config, samples * lambdas.size());
    rcm::McOptions opt;
    opt.threads = run.g.threads;
    std::vector<rcm::EstimateRecord> rows;
    for (double lam : lambdas) {
        auto r = rcm::susceptibility(k, lam, dom, samples, seeds_from(run.config), opt);
        r.x.assign(static_cast<size_t>(d), 0.0);
        r.config_digest = run.digest;
        rows.push_back(r);
    }
    return rows;
}

void cmd_simulate(Run& run) {
    const int d = dimension(run.config);
    auto rows = tau_rows(run, d);
    if (run.config.value("chi", false)) {
        auto chi = chi_rows(run, d);
        rows.insert(rows.end(), chi.begin(), chi.end());
    }
    run.write("simulate.csv", rcm::estimate_csv(rows, d));
}

void cmd_tau(Run& run) {
    const int d = dimension(run.config);
    run.write("tau.csv", rcm::estimate_csv(tau_rows(run, d), d));
}

void cmd_chi(Run& run) {
    const int d = dimension(run.config);
    run.write("chi.csv", rcm::estimate_csv(chi_rows(run, d), d));
}

void cmd_lambda_c(Run& run) {
    const int d = dimension(run.config);
    const auto k = kernel_from(run.config, d);
    rcm::LambdaCOptions opt;
    opt.threads = run.g.threads;
    opt.samples = run.config.value("samples", opt.samples);
    if (run.config.contains("range")) {
        const auto r = run.config.at("range").get<std::vector<double>>();
        if (r.size() != 2) throw rcm::config_error("range needs two entries");
        opt.lambda_lo = r[0];
        opt.lambda_hi = r[1];
    }
    const auto ladder = run.config.value("ladder", std::vector<double>{8.0, 16.0});
    const double tol = run.config.value("tolerance", 0.1);
    check_sample_budget(run.config, opt.samples * ladder.size());
    const auto iv = rcm::estimate_lambda_c(k, ladder, tol, seeds_from(run.config), opt);
    json rep = {{"lambda_lo", iv.lo},          {"lambda_hi", iv.hi}, {"evaluations", iv.evaluations},
                {"ladder", ladder},            {"tolerance", tol},   {"samples", opt.samples},
                {"estimator", "largest-cluster ratio crossing"}, {"config_digest", run.digest}};
    run.write("lambda_c.json", rep.dump(2) + "\n");
}

void cmd_oz(Run& run) {
    const json& cfg = run.config;
    const int d = dimension(cfg);
    const auto k = kernel_from(cfg, d);
    const double lambda = need(cfg, "lambda").get<double>();
    const json& grid = need(cfg, "grid");
    const double L = need(grid, "L").get<double>();
    const int n = need(grid, "n").get<int>();
    if (static_cast<double>(rcm::ipow(static_cast<size_t>(n), d)) > double(run.g.budget_cells))
        throw rcm::budget_error("grid exceeds cell budget");
    const rcm::GridField phi = rcm::discretize(k, L, n);
    std::optional<rcm::GridField> pi;
    if (cfg.contains("pi")) pi = rcm::read_rcmf(cfg.at("pi").get<std::string>());
    const rcm::KernelPair kp = rcm::form_J(phi, pi, lambda);
    const rcm::InfraredReport ir = rcm::infrared_check(kp.J);
    const rcm::OzSolution sol = rcm::oz_deconvolve(kp);
    rcm::write_rcmf(run.out("lambda_tau.rcmf"), sol.lambda_tau);

    json rep = {{"J_hat_zero", kp.J_hat_zero},
                {"K_IR", ir.K_IR},
                {"K_IR_argmin", ir.argmin_k},
                {"K_IR_pass", ir.pass},
                {"residual_rel", sol.residual_rel},
                {"regularized", sol.regularized},
                {"tail_fraction", rcm::weighted_norm_report(sol.lambda_tau, 0.0, 1.0).tail_fraction},
                {"field", "lambda_tau.rcmf"},
                {"config_digest", run.digest}};
    const rcm::MomentMatrix mm = rcm::moment_matrix(kp.J);
    std::vector<double> sigma;
    for (int a = 0; a < d; ++a) sigma.push_back(mm(a, a));
    rep["sigma_diagonal"] = sigma;
    rep["a_d"] = d <= 2 ? json(nullptr) : json(rcm::a_d(d));

    if (cfg.contains("fit")) {
        const json& f = cfg.at("fit");
        const auto window = need(f, "window").get<std::vector<double>>();
        if (window.size() != 2) throw rcm::config_error("fit.window needs two entries");
        rcm::FitResult fit;
        std::string source = "grid";
        if (f.contains("radial")) {
            const json& r = f.at("radial");
            const auto prof = rcm::oz_radial([&](double kk) { return lambda * rcm::phi_hat(k, kk); },
                                             [&](double rr) { return lambda * rcm::eval_radial(k, rr); }, d,
                                             need(r, "L").get<double>(), need(r, "n").get<int>());
            std::vector<std::pair<double, double>> rv;
            for (size_t i = 0; i < prof.r.size(); ++i) rv.emplace_back(prof.r[i], prof.value[i]);
            fit = rcm::fit_decay_exponent(rv, window[0], window[1]);
            source = "radial";
        } else {
            const auto [lo, hi] = rcm::clip_fit_window(window[0], window[1], phi.h, d, L);
            fit = rcm::fit_decay_exponent(rcm::radial_samples(sol.lambda_tau), lo, hi);
        }
        rep["fit"] = {{"exponent", fit.exponent},
                      {"amplitude", fit.amplitude},
                      {"r2", fit.r2},
                      {"window", {fit.window_lo, fit.window_hi}},
                      {"points", fit.points},
                      {"source", source}};
    }
    run.write("oz.json", rep.dump(2) + "\n");
}

rcm::SuiteOptions suite_from(const json& cfg, const std::string& preset_flag) {
    rcm::SuiteOptions o;
    const std::string preset = preset_flag.empty() ? cfg.value("preset", std::string("desk-suite")) : preset_flag;
    if (preset != "desk-suite" && preset != "custom") throw rcm::config_error("unknown preset: " + preset);
    o.kernels = cfg.value("kernels", o.kernels);
    o.lambdas = cfg.value("lambdas", o.lambdas);
    if (cfg.contains("ps")) {
        o.ps.clear();
        for (const auto& p : cfg.at("ps")) o.ps.push_back(p.is_string() ? rcm::parse_double(p.get<std::string>()) : p.get<double>());
    }
    o.d = cfg.value("d", o.d);
    o.n = cfg.value("n", o.n);
    o.L = cfg.value("L", o.L);
    o.A = cfg.value("A", o.A);
    o.B = cfg.value("B", o.B);
    o.block_m = cfg.value("block_m", o.block_m);
    o.split_trials = cfg.value("split_trials", o.split_trials);
    o.categories = cfg.value("cases", o.categories);
    o.seed = cfg.value("seed", o.seed);
    return o;
}

void cmd_certify(Run& run, const std::string& preset, bool self_test) {
    rcm::SuiteOptions o = suite_from(run.config, preset);
    o.self_test = self_test;
    rcm::check_pair_budget(o.d, o.n, run.g.budget_cells);
    const auto certs = rcm::run_desk_suite(o);
    run.write("certify.jsonl", rcm::certification_jsonl(certs));
    size_t fails = 0;
    for (const auto& c : certs) fails += !c.holds;
    std::cerr << certs.size() << " certifications, " << fails << " failing\n";
}

std::vector<rcm::EstimateRecord> read_estimates(const std::string& path, int& d) {
    return rcm::parse_estimate_csv(rcm::detail::read_file(path), d);
}

void cmd_compare(Run& run) {
    const json& cfg = run.config;
    int d = 0;
    const auto mc = read_estimates(need(cfg, "mc_csv").get<std::string>(), d);
    const std::string oz_path = need(cfg, "oz").get<std::string>();
    std::function<double(const rcm::EstimateRecord&)> oz_value;
    std::vector<rcm::EstimateRecord> oz_rows;
    std::optional<rcm::GridField> field;
    if (fs::path(oz_path).extension() == ".csv") {
        int d2 = 0;
        oz_rows = read_estimates(oz_path, d2);
        if (d2 != d) throw rcm::config_error("mismatched grids");
        oz_value = [&](const rcm::EstimateRecord& r) {
            for (const auto& o : oz_rows)
                if (o.quantity == r.quantity && o.x == r.x && o.lambda == r.lambda) return o.value;
            throw rcm::config_error("mismatched grids");
        };
    } else {
        field = rcm::read_rcmf(oz_path);
        if (field->d != d) throw rcm::config_error("mismatched grids");
        oz_value = [&](const rcm::EstimateRecord& r) {
            for (double c : r.x) {
                const double m = c / field->h;
                if (std::abs(m - std::round(m)) > 1e-9 || std::abs(c) >= field->L() / 2.0)
                    throw rcm::config_error("mismatched grids");
            }
            const double lam = cfg.value("lambda", r.lambda);
            if (!(lam > 0.0)) throw rcm::config_error("compare needs lambda > 0 to turn lambda tau into tau");
            return field->v[rcm::nearest_index(d, field->n, field->h, r.x)] / lam;
        };
    }
    std::optional<rcm::AsymptoticModel> model;
    if (cfg.contains("asymptotic") && d >= 3) {
        const json& a = cfg.at("asymptotic");
        rcm::AsymptoticModel m;
        m.d = d;
        m.lambda_c = need(a, "lambda_c").get<double>();
        m.sigma = need(a, "sigma").get<std::vector<double>>();
        if (static_cast<int>(m.sigma.size()) != d) throw rcm::config_error("asymptotic.sigma has wrong length");
        for (double s : m.sigma)
            if (!(s > 0.0)) throw rcm::numeric_error("singular Sigma");
        m.a_d = rcm::a_d(d);
        model = m;
    }
    std::string out;
    for (int a = 1; a <= d; ++a) out += "x" + std::to_string(a) + ",";
    out += "r,monte_carlo,mc_stderr,oz,prediction,ratio_mc_oz,ratio_mc_prediction\n";
    for (const auto& r : mc) {
        if (r.quantity != "tau") continue;
        double r2 = 0.0;
        for (double c : r.x) {
            out += rcm::num(c) + ",";
            r2 += c * c;
        }
        const double oz = oz_value(r);
        const double pred = model && r2 > 0.0 ? model->predict(r.x) : std::nan("");
        out += rcm::num(std::sqrt(r2)) + "," + rcm::num(r.value) + "," + rcm::num(r.std_error) + "," + rcm::num(oz) +
               "," + rcm::num(pred) + "," + rcm::num(r.value / oz) + "," + rcm::num(r.value / pred) + "\n";
    }
    run.write("compare.csv", out);
}

void cmd_fit(Run& run) {
    const json& cfg = run.config;
    const std::string input = need(cfg, "input").get<std::string>();
    const auto window = need(cfg, "window").get<std::vector<double>>();
    if (window.size() != 2) throw rcm::config_error("window needs two entries");
    std::vector<std::pair<double, double>> rv;
    if (fs::path(input).extension() == ".csv") {
        int d = 0;
        const std::string q = cfg.value("quantity", std::string("tau"));
        for (const auto& r : read_estimates(input, d)) {
            if (r.quantity != q) continue;
            double r2 = 0.0;
            for (double c : r.x) r2 += c * c;
            rv.emplace_back(std::sqrt(r2), r.value);
        }
    } else {
        rv = rcm::radial_samples(rcm::read_rcmf(input));
    }
    const auto fit = rcm::fit_decay_exponent(rv, window[0], window[1]);
    json rep = {{"exponent", fit.exponent},
                {"amplitude", fit.amplitude},
                {"r2", fit.r2},
                {"window", {fit.window_lo, fit.window_hi}},
                {"points", fit.points},
                {"config_digest", run.digest}};
    run.write("fit.json", rep.dump(2) + "\n");
}

json load_config(const std::string& path, const std::string& command) {
    if (path.empty()) return json::object();
    json doc;
    try {
        doc = json::parse(rcm::detail::read_file(path));
    } catch (const json::parse_error& e) {
        throw rcm::config_error(std::string("config is not valid JSON: ") + e.what());
    }
    // a manifest carries the effective config of an earlier run
    if (doc.is_object() && doc.contains("command") && doc.contains("config")) {
        if (doc.at("command") != command)
            throw rcm::config_error("manifest was written by command " + doc.at("command").get<std::string>());
        return doc.at("config");
    }
    if (!doc.is_object()) throw rcm::config_error("config must be a JSON object");
    return doc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random connection model laboratory"};
    app.set_version_flag("--version", version);
    Globals g;
    app.add_option("--config", g.config_path, "JSON config or a previous manifest");
    app.add_option("--out", g.out_dir, "output directory");
    app.add_option("--seed", g.seed, "master seed (overrides seeds.master)");
    app.add_option("--threads", g.threads, "worker threads")->check(CLI::Range(1, 1024));
    app.add_option("--budget-cells", g.budget_cells, "largest grid (cells) any command may allocate");
    app.require_subcommand(1);

    std::string preset;
    bool self_test = false;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"adjacency", "evaluate adjacency functions"},
        {"simulate", "Monte Carlo two-point function (and susceptibility)"},
        {"tau", "Monte Carlo two-point function"},
        {"chi", "Monte Carlo susceptibility"},
        {"lambda-c", "finite-size estimate of the critical intensity"},
        {"oz", "Ornstein-Zernike deconvolution, infrared bound, decay fit"},
        {"certify", "numerical certification of the diagram bounds"},
        {"compare", "Monte Carlo vs OZ vs asymptotic prediction"},
        {"fit", "power-law fit of a radial profile"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->fallthrough();
        if (name == "certify") {
            sub->add_option("--preset", preset, "named suite (desk-suite)");
            sub->add_flag("--self-test", self_test, "double every lhs to exercise the failure path");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    Run run;
    run.command = app.get_subcommands().front()->get_name();
    run.g = g;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        run.config = load_config(g.config_path, run.command);
        if (g.seed) run.config["seed"] = *g.seed;
        if (run.config.contains("seed")) run.config["seeds"]["master"] = run.config.at("seed");
        run.digest = rcm::config_digest(run.config);
        fs::create_directories(g.out_dir);

        if (run.command == "adjacency") cmd_adjacency(run);
        else if (run.command == "simulate") cmd_simulate(run);
        else if (run.command == "tau") cmd_tau(run);
        else if (run.command == "chi") cmd_chi(run);
        else if (run.command == "lambda-c") cmd_lambda_c(run);
        else if (run.command == "oz") cmd_oz(run);
        else if (run.command == "certify") cmd_certify(run, preset, self_test);
        else if (run.command == "compare") cmd_compare(run);
        else if (run.command == "fit") cmd_fit(run);

        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        json manifest = {{"command", run.command},
                         {"config", run.config},
                         {"digest", run.digest},
                         {"version", version},
                         {"seed", run.config.value("seeds", json::object()).value("master", uint64_t{1})},
                         {"threads", g.threads},
                         {"wall_time", wall},
                         {"outputs", run.outputs}};
        rcm::detail::write_atomic(fs::path(g.out_dir) / "manifest.json", manifest.dump(2) + "\n");
    } catch (const rcm::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const rcm::budget_error& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const rcm::numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
