#include "sublin/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "sublin/capacity.hpp"
#include "sublin/wmp.hpp"

namespace sublin {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
}

fs::path prepare_outdir(const Scenario& s) {
    fs::path dir(s.out_dir);
    fs::create_directories(dir);
    write_file(dir / "resolved.scenario", scenario_to_text(s));
    return dir;
}

std::string footer(const Scenario& s) {
    return "\n--- resolved scenario ---\n" + scenario_to_text(s);
}

// The tilde system the estimates run through for modified scenarios:
// kernel G~, sigma~, forcing mu~ / f~.  Plain scenarios pass through.
struct EffectiveSystem {
    Kernel kernel;
    Measure sigma;
    std::optional<Measure> mu;
    std::optional<std::vector<double>> f;
};

EffectiveSystem effective_system(const Scenario& s) {
    Problem p = build_problem(s);
    if (!p.modifier)
        return {std::move(p.kernel), std::move(p.sigma), std::move(p.mu), std::move(p.f)};
    const Modifier& m = *p.modifier;
    EffectiveSystem sys{modify(p.kernel, m), modified_sigma(p.sigma, m, p.q), std::nullopt,
                        std::nullopt};
    if (p.mu) {
        std::vector<double> w(p.size());
        for (int y = 0; y < p.size(); ++y) w[y] = m.values[y] * (*p.mu)[y];
        sys.mu = Measure(std::move(w));
    }
    if (p.f) {
        std::vector<double> ft(p.size());
        for (int y = 0; y < p.size(); ++y) ft[y] = (*p.f)[y] / m.values[y];
        sys.f = std::move(ft);
    }
    return sys;
}

json certificate_json(const EmbeddingCertificate& cert) {
    json j;
    json set = json::array();
    for (int i : cert.set) set.push_back(i + 1);
    j["set"] = set;
    j["value"] = cert.value;
    j["phi"] = cert.phi;
    j["gap"] = cert.gap;
    j["iterations"] = cert.iterations;
    j["maximizer"] = cert.maximizer;
    return j;
}

std::string status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::converged: return "Converged";
        case SolveStatus::diverged: return "Diverged";
        case SolveStatus::nonexistence_detected: return "NonexistenceDetected";
    }
    return "?";
}

void write_solution_csv(const fs::path& path, const std::vector<double>& u,
                        const BilateralReport& rep) {
    std::ostringstream out;
    out << "point,u,lower_bound,upper_bound,lower_ratio,upper_ratio\n";
    for (std::size_t x = 0; x < u.size(); ++x) {
        out << (x + 1) << "," << fmt(u[x]) << "," << fmt(rep.lower[x]) << ","
            << fmt(rep.upper[x]) << "," << fmt(rep.lower_ratio[x]) << ","
            << fmt(rep.upper_ratio[x]) << "\n";
    }
    write_file(path, out.str());
}

void append_constants(std::ostringstream& out, const SolveConstants& k) {
    out << "q = " << fmt(k.q) << "\n";
    out << "kappa = " << fmt(k.kappa) << "\n";
    out << "b = " << fmt(k.b) << "\n";
    out << "c = " << fmt(k.c) << "\n";
    out << "C = " << fmt(k.C) << "\n";
    out << "c0 = " << fmt(k.c0) << "\n";
}

BilateralReport rescale_report(BilateralReport rep, const std::vector<double>& u,
                               const Measure& sigma) {
    rep.worst_lower = std::numeric_limits<double>::infinity();
    rep.worst_upper = 0.0;
    for (std::size_t x = 0; x < u.size(); ++x) {
        if (sigma[static_cast<int>(x)] <= 0.0) continue;
        rep.lower_ratio[x] = u[x] / rep.lower[x];
        rep.upper_ratio[x] = u[x] / rep.upper[x];
        if (rep.lower_ratio[x] < rep.worst_lower) {
            rep.worst_lower = rep.lower_ratio[x];
            rep.witness_lower = static_cast<int>(x);
        }
        if (rep.upper_ratio[x] > rep.worst_upper) {
            rep.worst_upper = rep.upper_ratio[x];
            rep.witness_upper = static_cast<int>(x);
        }
    }
    rep.pass = rep.worst_lower >= 1.0 - 1e-9 && rep.worst_upper <= 1.0 + 1e-9;
    return rep;
}

} // namespace

int cmd_solve(const Scenario& s) {
    fs::path dir = prepare_outdir(s);
    Problem problem = build_problem(s);
    SolveOptions opt = build_solve_options(s);
    opt.verify = false;

    std::vector<double> u;
    BilateralReport rep;
    SolveStatus status;
    long iterations = 0;
    double residual = 0.0;
    SolveConstants constants;
    if (problem.modifier) {
        ModifiedSolveResult r = solve_modified(problem, opt);
        status = r.result.status;
        iterations = r.result.iterations;
        residual = r.result.residual;
        constants = r.result.constants;
        u = r.result.u;
        rep = r.bounds;
    } else {
        SolveResult r = solve(problem, opt);
        status = r.status;
        iterations = r.iterations;
        residual = r.residual;
        constants = r.constants;
        u = r.u;
        if (status == SolveStatus::converged) rep = verify_bilateral(problem, u, opt);
    }

    if (status != SolveStatus::converged) {
        std::ostringstream out;
        out << "status = " << status_name(status) << "\n";
        out << "iterations = " << iterations << "\n";
        out << footer(s);
        write_file(dir / "solve_report.txt", out.str());
        return status == SolveStatus::nonexistence_detected ? exit_nonexistence : exit_numeric;
    }

    if (s.inject_scale != 1.0) {
        for (double& v : u) v *= s.inject_scale;
        rep = rescale_report(std::move(rep), u, problem.sigma);
    }

    write_solution_csv(dir / "solution.csv", u, rep);

    std::ostringstream out;
    out << "status = " << status_name(status) << "\n";
    out << "iterations = " << iterations << "\n";
    out << "residual = " << fmt(residual) << "\n";
    append_constants(out, constants);
    out << "bounds = " << (rep.pass ? "PASS" : "FAIL") << "\n";
    out << "worst_lower_ratio = " << fmt(rep.worst_lower) << " at point "
        << (rep.witness_lower + 1) << "\n";
    out << "worst_upper_ratio = " << fmt(rep.worst_upper) << " at point "
        << (rep.witness_upper + 1) << "\n";
    out << footer(s);
    write_file(dir / "solve_report.txt", out.str());
    return rep.pass ? exit_ok : exit_bound_fail;
}

int cmd_potentials(const Scenario& s) {
    fs::path dir = prepare_outdir(s);
    EffectiveSystem sys = effective_system(s);

    EmbeddingOptions eopt;
    eopt.tol = s.gap;
    KappaCache cache(sys.kernel, sys.sigma, s.q, eopt);
    std::vector<double> ks = intrinsic_potential(cache);
    std::vector<double> gs = potential(sys.kernel, sys.sigma);
    std::vector<double> gmu(sys.kernel.size(), 0.0);
    if (sys.mu) gmu = potential(sys.kernel, *sys.mu);
    else if (sys.f) gmu = *sys.f;

    std::ostringstream csv;
    csv << "point,g_sigma,k_sigma,g_mu,h\n";
    for (int x = 0; x < sys.kernel.size(); ++x) {
        double h = pow_11mq(gs[x], s.q) + ks[x] + gmu[x];
        csv << (x + 1) << "," << fmt(gs[x]) << "," << fmt(ks[x]) << "," << fmt(gmu[x]) << ","
            << fmt(h) << "\n";
    }
    write_file(dir / "potentials.csv", csv.str());

    json certs = json::array();
    for (const auto& cert : cache.snapshot()) certs.push_back(certificate_json(cert));
    write_file(dir / "kappa_certificates.json", certs.dump(2) + "\n");

    if (s.emit_plot_data) {
        const BallDecomposition& d = sys.kernel.decomposition(s.center);
        std::ostringstream plot;
        plot << "r,sigma_ball,kappa_ball\n";
        for (int j = 1; j <= d.level_count(); ++j) {
            double r = 1.0 / d.levels[j - 1];  // breakpoint where B(x,.) becomes B_j
            std::vector<int> ball = d.ball(j);
            plot << fmt(r) << "," << fmt(sys.sigma.mass(ball)) << ","
                 << fmt(cache.get(ball).value) << "\n";
        }
        write_file(dir / ("radial_x" + std::to_string(s.center + 1) + ".csv"), plot.str());
    }

    std::ostringstream out;
    out << "points = " << sys.kernel.size() << "\n";
    out << "kappa_sets_solved = " << cache.snapshot().size() << "\n";
    out << footer(s);
    write_file(dir / "potentials_report.txt", out.str());
    return exit_ok;
}

int cmd_kappa(const Scenario& s) {
    fs::path dir = prepare_outdir(s);
    EffectiveSystem sys = effective_system(s);
    std::vector<int> set = s.set;
    if (set.empty()) {
        set.resize(sys.kernel.size());
        for (int i = 0; i < sys.kernel.size(); ++i) set[i] = i;
    }
    EmbeddingOptions eopt;
    eopt.tol = s.gap;
    EmbeddingCertificate cert = embedding_constant(sys.kernel, sys.sigma, s.q, set, eopt);
    write_file(dir / "kappa.json", certificate_json(cert).dump(2) + "\n");

    std::ostringstream out;
    out << "kappa = " << fmt(cert.value) << "\n";
    out << "phi = " << fmt(cert.phi) << "\n";
    out << "gap = " << fmt(cert.gap) << "\n";
    out << "iterations = " << cert.iterations << "\n";
    out << footer(s);
    write_file(dir / "kappa_report.txt", out.str());
    return exit_ok;
}

int cmd_capacity(const Scenario& s) {
    fs::path dir = prepare_outdir(s);
    EffectiveSystem sys = effective_system(s);
    std::vector<int> set = s.set;
    if (set.empty()) {
        set.resize(sys.kernel.size());
        for (int i = 0; i < sys.kernel.size(); ++i) set[i] = i;
    }
    CapacityOptions copt;
    copt.subset_limit = s.subset_limit;
    if (s.mode == "bracket")
        copt.mode = CapacityMode::bracket;
    else if (s.mode == "exact")
        copt.mode = CapacityMode::exact;
    else
        copt.mode = static_cast<int>(set.size()) <= s.subset_limit ? CapacityMode::exact
                                                                   : CapacityMode::bracket;
    CapacityResult res = wiener_capacity(sys.kernel, set, copt);

    bool sandwich_ok = true;
    if (res.mode == CapacityMode::exact && res.wmp_bound > 0.0)
        sandwich_ok = res.cap0 <= res.cap_lo * (1.0 + 1e-9) &&
                      res.cap_lo <= res.wmp_bound * res.cap0 * (1.0 + 1e-9);

    std::ostringstream out;
    out << "set =";
    for (int i : res.set) out << " " << (i + 1);
    out << "\n";
    out << "cap0 = " << fmt(res.cap0) << "\n";
    if (res.mode == CapacityMode::exact) {
        out << "cap = " << fmt(res.cap_lo) << "\n";
    } else {
        out << "cap_bracket = [" << fmt(res.cap_lo) << ", " << fmt(res.cap_hi) << "]\n";
    }
    if (res.wmp_bound > 0.0) out << "wmp_bound = " << fmt(res.wmp_bound) << "\n";
    out << "sandwich = " << (sandwich_ok ? "PASS" : "FAIL") << "\n";
    out << "equilibrium =";
    for (double w : res.equilibrium) out << " " << fmt(w);
    out << "\n";
    out << "equilibrium_cap0 =";
    for (double w : res.equilibrium_cap0) out << " " << fmt(w);
    out << "\n";
    out << footer(s);
    write_file(dir / "capacity_report.txt", out.str());
    return sandwich_ok ? exit_ok : exit_bound_fail;
}

int cmd_verify(const Scenario& s) {
    fs::path dir = prepare_outdir(s);
    EffectiveSystem sys = effective_system(s);
    const Kernel& k = sys.kernel;

    std::ostringstream out;
    bool all_pass = true;

    double kappa = k.quasi_metric_constant();  // NotSymmetric propagates (exit 65)
    KappaWitness w = k.quasi_metric_witness();
    out << "kappa = " << fmt(kappa) << "\n";
    out << "kappa_witness = (" << (w.x + 1) << "," << (w.y + 1) << "," << (w.z + 1) << ")\n";
    out << "quasi_symmetry = " << fmt(k.quasi_symmetry_constant()) << "\n";

    WmpOptions wopt;
    wopt.exact_limit = s.exact_limit;
    wopt.budget = s.budget;
    wopt.seed = s.seed;
    if (s.mode == "exact") wopt.mode = WmpMode::exact;
    else if (s.mode == "sampled") wopt.mode = WmpMode::sampled;
    WmpReport wmp = wmp_constant(k, wopt);
    bool wmp_ok = !wmp.has_theoretical || wmp.b_empirical <= wmp.b_theoretical * (1.0 + 1e-9);
    all_pass = all_pass && wmp_ok;
    out << "wmp_mode = " << (wmp.exact ? "exact" : "sampled") << "\n";
    out << "wmp_empirical = " << fmt(wmp.b_empirical) << "\n";
    out << "wmp_bound = " << fmt(wmp.b_theoretical) << "\n";
    out << "wmp = " << (wmp_ok ? "PASS" : "FAIL") << "\n";

    PtolemyReport pt = ptolemy_check(k);
    all_pass = all_pass && pt.pass;
    out << "ptolemy_worst = " << fmt(pt.worst_ratio) << "\n";
    out << "ptolemy_bound = " << fmt(pt.bound) << "\n";
    out << "ptolemy = " << (pt.pass ? "PASS" : "FAIL") << "\n";

    ModifiabilityCertificate mc = modifiability_certificate(k, s.x0);
    all_pass = all_pass && mc.pass;
    out << "modifiability_pole = " << (mc.pole + 1) << "\n";
    out << "kappa_modified = " << fmt(mc.kappa_modified) << "\n";
    out << "kappa_modified_bound = " << fmt(mc.bound) << "\n";
    out << "modifiability = " << (mc.pass ? "PASS" : "FAIL") << "\n";

    // Scaling covariance: kappa and the quasi-symmetry constant are invariant
    // under G -> 2G, and B_{2G}(x,r) = B_G(x, 2r).
    {
        std::vector<double> doubled(k.data());
        for (double& v : doubled) v *= 2.0;
        Kernel k2(doubled, k.size(), k.provenance());
        bool scale_ok = std::abs(k2.quasi_metric_constant() - kappa) <= 1e-12 * (1.0 + kappa) &&
                        std::abs(k2.quasi_symmetry_constant() - k.quasi_symmetry_constant()) <=
                            1e-12;
        for (int x = 0; x < k.size() && scale_ok; ++x) {
            const BallDecomposition& d = k.decomposition(x);
            for (int j = 1; j <= d.level_count(); ++j) {
                double r_mid = (j < d.level_count())
                                   ? 0.5 * (1.0 / d.levels[j - 1] + 1.0 / d.levels[j])
                                   : 2.0 / d.levels[j - 1];
                if (k2.ball(x, r_mid) != k.ball(x, 2.0 * r_mid)) { scale_ok = false; break; }
            }
        }
        all_pass = all_pass && scale_ok;
        out << "scaling = " << (scale_ok ? "PASS" : "FAIL") << "\n";
    }

    out << "verify = " << (all_pass ? "PASS" : "FAIL") << "\n";
    out << footer(s);
    write_file(dir / "verify_report.txt", out.str());
    return all_pass ? exit_ok : exit_bound_fail;
}

int cmd_existence(const Scenario& s) {
    fs::path dir = prepare_outdir(s);
    Problem problem = build_problem(s);
    SolveOptions opt = build_solve_options(s);
    ExistenceReport rep = existence_check(problem, s.x0, s.a, opt);

    std::ostringstream out;
    out << "exists = " << (rep.exists ? "yes" : "no") << "\n";
    out << "g_sigma_max = " << fmt(rep.g_sigma_max) << "\n";
    out << "k_sigma_max = " << fmt(rep.k_sigma_max) << "\n";
    out << "g_mu_max = " << fmt(rep.g_mu_max) << "\n";
    out << "x0 = " << (rep.x0 + 1) << "\n";
    out << "a = " << fmt(rep.a) << "\n";
    out << "tail_sigma = " << fmt(rep.tail_sigma) << "\n";
    out << "tail_kappa = " << fmt(rep.tail_kappa) << "\n";
    out << "tail_mu = " << fmt(rep.tail_mu) << "\n";
    if (rep.modified_mode) {
        out << "kappa_tilde_omega = " << fmt(rep.kappa_tilde_omega) << "\n";
        out << "int_g_dmu = " << fmt(rep.int_g_dmu) << "\n";
    }
    out << footer(s);
    write_file(dir / "existence_report.txt", out.str());
    return rep.exists ? exit_ok : exit_nonexistence;
}

int run_command(const std::string& name, const Scenario& s) {
    if (name == "solve") return cmd_solve(s);
    if (name == "potentials") return cmd_potentials(s);
    if (name == "kappa") return cmd_kappa(s);
    if (name == "capacity") return cmd_capacity(s);
    if (name == "verify") return cmd_verify(s);
    if (name == "check-existence") return cmd_existence(s);
    throw ConfigError("unknown command '" + name + "'");
}

int run_command_guarded(const std::string& name, const std::string& scenario_path,
                        const std::string& out_dir_override, bool emit_plot_data) {
    try {
        Scenario s = scenario_from_file(scenario_path);
        if (!out_dir_override.empty()) s.out_dir = out_dir_override;
        if (emit_plot_data) s.emit_plot_data = true;
        return run_command(name, s);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const ZeroSigma& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const LengthMismatch& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const BadExponent& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const NotSymmetric& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return exit_data;
    } catch (const NonPositiveEntry& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return exit_data;
    } catch (const NonFiniteEntry& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return exit_data;
    } catch (const DuplicatePoints& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return exit_data;
    } catch (const BadAlpha& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return exit_data;
    } catch (const NotQuasiMetricModified& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return exit_data;
    } catch (const Error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return exit_numeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numeric;
    }
}

} // namespace sublin
