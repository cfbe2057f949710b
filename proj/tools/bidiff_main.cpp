// Command-line front end: construct corrected kernels, run the named
// invariant suite, scan the genus-1 moduli space, and trace genus-2
// deformations. Exit codes: 0 success, 1 invalid configuration or evaluation
// domain, 2 broken mathematical invariant, 3 numerical non-convergence.

#include "bidiff/io.hpp"
#include "bidiff/projstruct.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bidiff;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::vector<std::string> tol_overrides;
    int threads = 1;
};

struct Tolerances {
    double jet_tol = 1e-8;
    double obstruction_tol = 1e-6;
    double swap_tol = 1e-10;
    double cocycle_tol = 1e-6;
    double uniqueness_tol = 1e-8;
    double kappa_tol = 1e-4;
    num::AdaptiveOptions quad;
};

Tolerances parse_overrides(const std::vector<std::string>& kvs) {
    Tolerances t;
    for (const std::string& kv : kvs) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("tolerance override must be key=value, got \"" + kv + "\"");
        const std::string key = kv.substr(0, eq);
        double v = 0.0;
        try {
            std::size_t used = 0;
            v = std::stod(kv.substr(eq + 1), &used);
            if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
        } catch (const std::exception&) {
            throw ConfigError("bad numeric value in override \"" + kv + "\"");
        }
        if (key == "quad_max_nodes") {
            if (v < 1) throw ConfigError("quad_max_nodes must be at least 1");
            t.quad.max_nodes = static_cast<int>(v);
            continue;
        }
        if (!(v > 0.0)) throw ConfigError("tolerances must be positive, got \"" + kv + "\"");
        if (key == "jet_tol") t.jet_tol = v;
        else if (key == "obstruction_tol") t.obstruction_tol = v;
        else if (key == "swap_tol") t.swap_tol = v;
        else if (key == "cocycle_tol") t.cocycle_tol = v;
        else if (key == "uniqueness_tol") t.uniqueness_tol = v;
        else if (key == "kappa_tol") t.kappa_tol = v;
        else if (key == "quad_rel_tol") t.quad.rel_tol = v;
        else throw ConfigError("unknown tolerance key \"" + key + "\"");
    }
    return t;
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    return json::parse(in); // malformed JSON raises json::parse_error (exit 1)
}

fs::path prepare_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
    return fs::path(dir);
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    if (!out) throw ConfigError("cannot write " + p.string());
    out << text;
}

void write_json_file(const fs::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

std::string get_name(const json& cfg, const char* dflt) {
    if (!cfg.contains("name")) return dflt;
    if (!cfg["name"].is_string()) throw ConfigError("\"name\" must be a string");
    return cfg["name"].get<std::string>();
}

Cplx get_cplx(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError(std::string(what) + " must be a [re, im] pair");
    return Cplx(j[0].get<double>(), j[1].get<double>());
}

// Pipeline shared by the subcommands: base kernel -> Bergman -> corrected.
struct KernelSet {
    Curve curve;
    PeriodData pd;
    Kernel bergman;
    Kernel eta;
};

KernelSet build_kernels(const Curve& c, const num::AdaptiveOptions& quad) {
    KernelSet s{c, period_matrices(c, holomorphic_basis(c), quad), Kernel{}, Kernel{}};
    s.bergman = a_normalize(base_kernel(c), s.pd);
    s.eta = hodge_correct(s.bergman, s.pd);
    return s;
}

int classify(const Error& e) {
    if (dynamic_cast<const ContractViolation*>(&e) || dynamic_cast<const AsymmetricSolution*>(&e) ||
        dynamic_cast<const AsymmetricInput*>(&e) || dynamic_cast<const SingularPiA*>(&e) ||
        dynamic_cast<const SingularImTau*>(&e) || dynamic_cast<const ContourTopologyChanged*>(&e))
        return 2;
    if (dynamic_cast<const NoConvergence*>(&e) || dynamic_cast<const IllConditionedFit*>(&e) ||
        dynamic_cast<const StepTooLarge*>(&e))
        return 3;
    return 1;
}

int run_mapped(const std::function<int()>& body) {
    try {
        return body();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify(e);
    } catch (const json::exception& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

// ---------------------------------------------------------------- compute-eta

int cmd_compute_eta(const CommonOpts& o) {
    const Tolerances tol = parse_overrides(o.tol_overrides);
    const json cfg = load_config(o.config_path);
    if (!cfg.contains("curve")) throw ConfigError("compute-eta config needs a \"curve\" object");

    int probes = 5;
    if (cfg.contains("probes")) {
        if (!cfg["probes"].is_number_integer() || cfg["probes"].get<int>() < 1)
            throw ConfigError("\"probes\" must be a positive integer");
        probes = cfg["probes"].get<int>();
    }

    const KernelSet ks = build_kernels(curve_from_json(cfg["curve"]), tol.quad);
    const KernelDiagnostics d = kernel_diagnostics(ks.eta, ks.pd, probes, tol.quad);

    const fs::path out = prepare_out_dir(o.out_dir) / (get_name(cfg, "eta") + ".kernel.json");
    write_json_file(out, kernel_to_json(ks.eta, d));

    double max_obs = 0.0;
    for (double v : d.obstruction_norms) max_obs = std::max(max_obs, v);
    std::cout << "curve: genus " << ks.curve.genus
              << (ks.curve.kind == CurveKind::Elliptic ? " (elliptic)" : " (hyperelliptic)") << "\n"
              << std::scientific << std::setprecision(3)
              << "biresidue deviation:  " << std::abs(d.biresidue - 1.0) << "\n"
              << "residue term:         " << std::abs(d.residue_term) << "\n"
              << "max obstruction norm: " << max_obs << " over " << probes << " probes\n"
              << "cup sign:             " << (d.cup_sign > 0 ? "+1" : "-1")
              << " (deviation " << d.cup_deviation << ")\n"
              << "wrote " << out.string() << "\n";

    const bool ok = std::abs(d.biresidue - 1.0) <= tol.jet_tol &&
                    std::abs(d.residue_term) <= tol.jet_tol && max_obs <= tol.obstruction_tol &&
                    d.cup_deviation <= tol.obstruction_tol;
    if (!ok) {
        std::cerr << "error: corrected kernel fails its invariants (see dump)\n";
        return 2;
    }
    return 0;
}

// --------------------------------------------------------------------- verify

struct CheckRow {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool upper = true; // pass iff measured <= tolerance (else >=)
    bool pass = false;
};

void add_row(std::vector<CheckRow>& rows, std::string name, double measured, double tolerance,
             bool upper = true) {
    CheckRow r{std::move(name), measured, tolerance, upper, false};
    r.pass = upper ? measured <= tolerance : measured >= tolerance;
    rows.push_back(std::move(r));
}

int cmd_verify(const CommonOpts& o) {
    const Tolerances tol = parse_overrides(o.tol_overrides);
    const json cfg = o.config_path.empty() ? json::object() : load_config(o.config_path);

    // Fixed fixtures: a generic torus and the real-branch genus-2 quintic.
    const Cplx tau1(0.3, 1.2);
    const KernelSet g1 = build_kernels(make_elliptic(tau1), tol.quad);
    KernelSet g2 = build_kernels(
        make_hyperelliptic({Cplx(0), Cplx(4), Cplx(0), Cplx(-5), Cplx(0), Cplx(1)}), tol.quad);

    if (cfg.contains("perturb")) {
        const auto& pj = cfg["perturb"];
        if (!pj.is_object() || !pj.contains("i") || !pj.contains("j") || !pj.contains("value"))
            throw ConfigError("\"perturb\" needs integer \"i\", \"j\" and a [re, im] \"value\"");
        const int i = pj["i"].get<int>(), j = pj["j"].get<int>();
        if (i < 0 || i >= 2 || j < 0 || j >= 2)
            throw ConfigError("perturbation indices must lie in [0, 2)");
        const Cplx v = get_cplx(pj["value"], "perturb value");
        Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(2, 2);
        M(i, j) = v;
        M(j, i) = v;
        g2.eta = perturb(g2.eta, M);
        std::cout << "applied fixture perturbation to the corrected genus-2 kernel\n";
    }

    std::vector<CheckRow> rows;

    // Genus 1: jet, closed-form correction, obstruction, cup normalization.
    const KernelDiagnostics d1 = kernel_diagnostics(g1.eta, g1.pd, 3, tol.quad);
    add_row(rows, "genus1 diagonal jet",
            std::max(std::abs(d1.biresidue - 1.0), std::abs(d1.residue_term)), tol.jet_tol);
    add_row(rows, "genus1 correction closed form",
            std::abs(g1.eta.correction(0, 0) + pi / tau1.imag()), tol.jet_tol);
    double max_obs1 = 0.0;
    for (double v : d1.obstruction_norms) max_obs1 = std::max(max_obs1, v);
    add_row(rows, "genus1 obstruction cancellation", max_obs1, tol.obstruction_tol);
    add_row(rows, "genus1 cup normalization", d1.cup_deviation, tol.obstruction_tol);

    // Genus 2: jet, obstruction decay, cup normalization.
    const KernelDiagnostics d2 = kernel_diagnostics(g2.eta, g2.pd, 5, tol.quad);
    add_row(rows, "genus2 diagonal jet",
            std::max(std::abs(d2.biresidue - 1.0), std::abs(d2.residue_term)), tol.jet_tol);
    double max_obs2 = 0.0;
    for (double v : d2.obstruction_norms) max_obs2 = std::max(max_obs2, v);
    add_row(rows, "genus2 obstruction decay", max_obs2, tol.obstruction_tol);
    add_row(rows, "genus2 cup normalization", d2.cup_deviation, tol.obstruction_tol);

    // Swap symmetry over deterministic pseudo-random point pairs, mixed sheets.
    {
        std::mt19937 rng(20260814u);
        const auto urand = [&rng] { return (rng() >> 5) * (1.0 / 134217728.0); };
        double worst = 0.0;
        for (int s = 0; s < 10; ++s) {
            const Cplx xa(-1.5 + 3.0 * urand(), 0.4 + 1.2 * urand());
            const Cplx xb(-1.5 + 3.0 * urand(), 0.4 + 1.2 * urand());
            const SurfacePoint pa = point_on_sheet(g2.curve, xa, urand() < 0.5 ? +1 : -1);
            const SurfacePoint pb = point_on_sheet(g2.curve, xb, urand() < 0.5 ? +1 : -1);
            const Cplx kxy = eval_kernel(g2.eta, pa, pb);
            const Cplx kyx = eval_kernel(g2.eta, pb, pa);
            worst = std::max(worst, std::abs(kxy - kyx) / (1.0 + std::abs(kxy)));
        }
        add_row(rows, "genus2 swap symmetry", worst, tol.swap_tol);
    }

    // Uniqueness: the linear response of the obstruction to symmetric
    // correction perturbations must be injective (square g(g+1)/2 system).
    {
        std::vector<SurfacePoint> probes;
        for (int s = 0; s < 3; ++s) {
            const Cplx x(0.3 * (0.55 + 0.35 * s) - 0.2, 0.55 + 0.35 * s);
            probes.push_back(SurfacePoint{x, y_plus(g2.curve, x)});
        }
        const Eigen::MatrixXcd resp = obstruction_response(g2.eta, g2.pd, probes);
        const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(resp);
        const double ratio =
            svd.singularValues()(svd.singularValues().size() - 1) / svd.singularValues()(0);
        add_row(rows, "genus2 correction uniqueness", ratio, tol.uniqueness_tol, false);
    }

    // Projective structure: cocycle across the AffineX/InverseX overlap, the
    // expansion identity that fixes the Schwarzian sign, and the weight-2 law
    // for connection differences.
    {
        const Cplx x5(5.0, 0.0);
        const SurfacePoint p5{x5, y_plus(g2.curve, x5)};
        const auto eta_aff = connection_from_kernel(g2.eta, Chart{ChartKind::AffineX, +1}, {p5});
        const auto eta_inv = connection_from_kernel(g2.eta, Chart{ChartKind::InverseX, +1}, {p5});
        // x = 1/w is Moebius: S~(w) = S(x) (dx/dw)^2 = S(x) x^4 at w = 1/x.
        const Cplx expected = eta_aff.values[0] * std::pow(x5, 4);
        add_row(rows, "cocycle across charts",
                std::abs(eta_inv.values[0] - expected) / (1.0 + std::abs(expected)),
                tol.cocycle_tol);

        const auto moebius = [](Cplx w) { return (2.0 * w + 1.0) / (w + 3.0); };
        add_row(rows, "expansion identity sign",
                expansion_identity_check(moebius, Cplx(0.7, 0.0), 0.5), 1e-12);

        const auto berg_aff = connection_from_kernel(g2.bergman, Chart{ChartKind::AffineX, +1}, {p5});
        const auto berg_inv = connection_from_kernel(g2.bergman, Chart{ChartKind::InverseX, +1}, {p5});
        const auto q_aff = connection_difference(eta_aff, berg_aff);
        const auto q_inv = connection_difference(eta_inv, berg_inv);
        const Cplx q_expected = q_aff.values[0] * std::pow(x5, 4);
        add_row(rows, "weight-2 difference law",
                std::abs(q_inv.values[0] - q_expected) / (1.0 + std::abs(q_expected)),
                tol.cocycle_tol);
    }

    // Moduli: the dbar density of the corrected section at one modulus.
    {
        const auto scan = dbar_scan({Cplx(0.0, 1.1)}, 1e-3);
        const Cplx kappa_ref(0.0, 3.0 * pi);
        add_row(rows, "moduli kappa constant", std::abs(scan[0].kappa - kappa_ref) / std::abs(kappa_ref),
                tol.kappa_tol);
    }

    bool all_pass = true;
    json jrows = json::array();
    std::cout << std::left << std::setw(34) << "check" << std::setw(14) << "measured"
              << std::setw(14) << "tolerance" << "result\n";
    for (const CheckRow& r : rows) {
        all_pass = all_pass && r.pass;
        std::ostringstream m, t;
        m << std::scientific << std::setprecision(3) << r.measured;
        t << (r.upper ? "<= " : ">= ") << std::scientific << std::setprecision(1) << r.tolerance;
        std::cout << std::left << std::setw(34) << r.name << std::setw(14) << m.str()
                  << std::setw(14) << t.str() << (r.pass ? "pass" : "FAIL") << "\n";
        jrows.push_back({{"name", r.name},
                         {"measured", r.measured},
                         {"tolerance", r.tolerance},
                         {"direction", r.upper ? "<=" : ">="},
                         {"pass", r.pass}});
    }
    std::cout << "verification: " << (all_pass ? "all checks passed" : "FAILURES present") << "\n";

    const fs::path out = prepare_out_dir(o.out_dir) / (get_name(cfg, "verify") + ".report.json");
    write_json_file(out, json{{"all_pass", all_pass}, {"checks", jrows}});
    std::cout << "wrote " << out.string() << "\n";
    return all_pass ? 0 : 2;
}

// ---------------------------------------------------------------- moduli-scan

int cmd_moduli_scan(const CommonOpts& o) {
    const json cfg = load_config(o.config_path);
    std::vector<Cplx> grid;
    if (cfg.contains("grid")) {
        if (!cfg["grid"].is_array()) throw ConfigError("\"grid\" must be an array of [re, im] pairs");
        for (const auto& e : cfg["grid"]) grid.push_back(get_cplx(e, "grid point"));
    }
    double h = 5e-4;
    if (cfg.contains("h")) {
        if (!cfg["h"].is_number()) throw ConfigError("\"h\" must be a number");
        h = cfg["h"].get<double>();
    }

    const auto samples = dbar_scan(grid, h); // empty grid -> BadConfiguration (exit 1)

    const fs::path out = prepare_out_dir(o.out_dir) / (get_name(cfg, "moduli") + ".scan.csv");
    write_text(out, moduli_csv(samples));

    Cplx mean = 0.0;
    double worst_residual = 0.0;
    for (const auto& s : samples) {
        mean += s.kappa;
        worst_residual = std::max(worst_residual, s.richardson_residual);
    }
    mean /= static_cast<double>(samples.size());
    double spread = 0.0;
    for (const auto& s : samples) spread = std::max(spread, std::abs(s.kappa - mean));
    std::cout << std::scientific << std::setprecision(6) << "points: " << samples.size() << "\n"
              << "mean kappa: (" << mean.real() << ", " << mean.imag() << ")\n"
              << std::setprecision(3) << "max |kappa - mean|: " << spread << "\n"
              << "max richardson residual: " << worst_residual << "\n"
              << "wrote " << out.string() << "\n";
    return 0;
}

// --------------------------------------------------------------- genus2-trace

int cmd_genus2_trace(const CommonOpts& o) {
    const json cfg = load_config(o.config_path);

    Curve curve = cfg.contains("curve")
                      ? curve_from_json(cfg["curve"])
                      : make_hyperelliptic({Cplx(0), Cplx(4), Cplx(0), Cplx(-5), Cplx(0), Cplx(1)});

    PerturbationPath path;
    if (cfg.contains("path")) {
        const auto& pj = cfg["path"];
        if (!pj.is_object()) throw ConfigError("\"path\" must be an object");
        if (pj.contains("coeff_index")) path.coeff_index = pj["coeff_index"].get<int>();
        if (pj.contains("direction")) path.direction = get_cplx(pj["direction"], "direction");
        if (pj.contains("magnitude")) path.magnitude = pj["magnitude"].get<double>();
        if (pj.contains("circle")) path.circle = pj["circle"].get<bool>();
    }
    int steps = 8;
    if (cfg.contains("steps")) steps = cfg["steps"].get<int>();

    const Genus2Trace tr = genus2_section_trace(curve, path, steps);

    const fs::path dir = prepare_out_dir(o.out_dir);
    const std::string name = get_name(cfg, "trace");
    const fs::path csv = dir / (name + ".trace.csv");
    write_text(csv, trace_csv(tr));
    const fs::path summary = dir / (name + ".trace.json");
    write_json_file(summary, json{{"dbar", {tr.dbar.real(), tr.dbar.imag()}},
                                  {"richardson_residual", tr.richardson_residual},
                                  {"inconclusive", tr.inconclusive},
                                  {"samples", tr.samples.size()}});

    std::cout << std::scientific << std::setprecision(6) << "dbar component: (" << tr.dbar.real()
              << ", " << tr.dbar.imag() << ")\n"
              << std::setprecision(3) << "richardson residual: " << tr.richardson_residual << "\n"
              << "inconclusive: " << (tr.inconclusive ? "yes (segment path)" : "no") << "\n"
              << "wrote " << csv.string() << " and " << summary.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Intrinsic bidifferential toolkit: corrected kernels, projective structures, "
                 "moduli scans"};
    app.footer("exit codes: 0 success, 1 invalid configuration or evaluation domain, "
               "2 broken mathematical invariant, 3 numerical non-convergence");
    app.require_subcommand(1);

    CommonOpts o;
    auto* c_eta = app.add_subcommand("compute-eta",
                                     "construct the corrected kernel, dump it with diagnostics");
    auto* c_ver = app.add_subcommand("verify", "run the named invariant suite on fixed fixtures");
    auto* c_scan = app.add_subcommand("moduli-scan", "dbar scan over a grid of moduli");
    auto* c_tr = app.add_subcommand("genus2-trace", "trace the connection along a coefficient path");

    for (CLI::App* sub : {c_eta, c_ver, c_scan, c_tr}) {
        auto* cfg = sub->add_option("--config", o.config_path, "JSON config file");
        if (sub != c_ver) cfg->required();
        sub->add_option("--out", o.out_dir, "output directory (created if missing)");
        sub->add_option("--tol-override", o.tol_overrides,
                        "tolerance override key=value (repeatable)");
        sub->add_option("--threads", o.threads, "worker threads (reserved; runs single-threaded)")
            ->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    return run_mapped([&]() -> int {
        if (c_eta->parsed()) return cmd_compute_eta(o);
        if (c_ver->parsed()) return cmd_verify(o);
        if (c_scan->parsed()) return cmd_moduli_scan(o);
        return cmd_genus2_trace(o);
    });
}
