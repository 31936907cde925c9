#include "sublin/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace sublin {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

using KeyMap = std::map<std::string, std::string>;  // "section.key" -> value

double parse_real(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse real for " + key + ": '" + v + "'");
    }
}

long parse_int(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse integer for " + key + ": '" + v + "'");
    }
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("cannot parse boolean for " + key + ": '" + v + "'");
}

std::vector<double> parse_reals(const std::string& v, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string tok;
    while (ss >> tok) {
        if (!tok.empty() && tok.back() == ',') tok.pop_back();
        if (tok.empty()) continue;
        out.push_back(parse_real(tok, key));
    }
    if (out.empty()) throw ConfigError("empty list for " + key);
    return out;
}

std::vector<std::vector<double>> parse_rows(const std::string& v, const std::string& key) {
    std::vector<std::vector<double>> rows;
    std::stringstream ss(v);
    std::string row;
    while (std::getline(ss, row, ';')) {
        row = trim(row);
        if (row.empty()) continue;
        rows.push_back(parse_reals(row, key));
    }
    if (rows.empty()) throw ConfigError("empty rows for " + key);
    return rows;
}

std::vector<int> parse_indices(const std::string& v, const std::string& key, int n) {
    std::vector<int> out;
    for (double x : parse_reals(v, key)) {
        long i = static_cast<long>(x);
        if (i < 1 || i > n)
            throw ConfigError(key + " index " + std::to_string(i) + " outside 1.." +
                              std::to_string(n));
        out.push_back(static_cast<int>(i - 1));
    }
    return out;
}

Scenario::KernelType parse_kernel_type(const std::string& v, const std::string& key) {
    if (v == "matrix") return Scenario::KernelType::matrix;
    if (v == "riesz") return Scenario::KernelType::riesz;
    if (v == "green_ball") return Scenario::KernelType::green_ball;
    if (v == "modified") return Scenario::KernelType::modified;
    throw ConfigError("unknown kernel type for " + key + ": '" + v + "'");
}

std::string kernel_type_name(Scenario::KernelType t) {
    switch (t) {
        case Scenario::KernelType::matrix: return "matrix";
        case Scenario::KernelType::riesz: return "riesz";
        case Scenario::KernelType::green_ball: return "green_ball";
        case Scenario::KernelType::modified: return "modified";
    }
    return "matrix";
}

const char* const known_keys[] = {
    "space.points", "space.coords", "space.sigma", "space.mu", "space.f", "space.csv",
    "kernel.type", "kernel.matrix", "kernel.csv", "kernel.alpha", "kernel.n",
    "kernel.diagonal_rule", "kernel.diagonal", "kernel.base", "kernel.pole",
    "kernel.quasi_metric",
    "problem.q", "problem.forcing",
    "tolerances.tol", "tolerances.gap", "tolerances.subset_limit", "tolerances.exact_limit",
    "tolerances.max_iter",
    "command.set", "command.center", "command.x0", "command.a", "command.mode",
    "command.budget", "command.inject_scale",
    "output.dir", "output.emit_plot_data",
    "run.seed",
};

} // namespace

Scenario scenario_from_text(const std::string& text) {
    KeyMap kv;
    std::stringstream ss(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("bad section header at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value at line " + std::to_string(lineno));
        std::string key = section + "." + trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        bool known = false;
        for (const char* k : known_keys)
            if (key == k) { known = true; break; }
        if (!known) throw ConfigError("unknown scenario key '" + key + "'");
        kv[key] = value;
    }

    auto has = [&](const std::string& k) { return kv.count(k) > 0; };
    auto get = [&](const std::string& k) { return kv.at(k); };

    Scenario s;

    // [space]
    if (has("space.csv")) {
        Space sp = space_from_csv(get("space.csv"));
        s.points = sp.size();
        s.coords = sp.coords();
        s.sigma = sp.sigma().weights();
        if (sp.mu()) s.mu = sp.mu()->weights();
        if (sp.f()) s.f = *sp.f();
    } else {
        if (!has("space.sigma")) throw ConfigError("scenario needs space.sigma or space.csv");
        s.sigma = parse_reals(get("space.sigma"), "space.sigma");
        s.points = static_cast<int>(s.sigma.size());
        if (has("space.coords")) s.coords = parse_rows(get("space.coords"), "space.coords");
        if (has("space.mu")) s.mu = parse_reals(get("space.mu"), "space.mu");
        if (has("space.f")) s.f = parse_reals(get("space.f"), "space.f");
    }
    if (has("space.points")) {
        long n = parse_int(get("space.points"), "space.points");
        if (n != s.points)
            throw ConfigError("space.points = " + std::to_string(n) + " but sigma has " +
                              std::to_string(s.points) + " entries");
    }

    // [kernel]
    if (has("kernel.type")) s.kernel_type = parse_kernel_type(get("kernel.type"), "kernel.type");
    Scenario::KernelType shape =
        s.kernel_type == Scenario::KernelType::modified
            ? (has("kernel.base") ? parse_kernel_type(get("kernel.base"), "kernel.base")
                                  : Scenario::KernelType::matrix)
            : s.kernel_type;
    s.base_type = shape;
    if (shape == Scenario::KernelType::matrix) {
        if (has("kernel.matrix"))
            s.matrix = parse_rows(get("kernel.matrix"), "kernel.matrix");
        else if (has("kernel.csv")) {
            Kernel k = kernel_from_csv(get("kernel.csv"));
            s.matrix.assign(k.size(), std::vector<double>(k.size()));
            for (int i = 0; i < k.size(); ++i)
                for (int j = 0; j < k.size(); ++j) s.matrix[i][j] = k(i, j);
        } else {
            throw ConfigError("matrix kernel needs kernel.matrix or kernel.csv");
        }
    } else if (shape == Scenario::KernelType::modified) {
        throw ConfigError("kernel.base cannot itself be 'modified'");
    }
    if (has("kernel.alpha")) s.alpha = parse_real(get("kernel.alpha"), "kernel.alpha");
    if (has("kernel.n")) s.dim_n = parse_real(get("kernel.n"), "kernel.n");
    if (has("kernel.diagonal_rule")) {
        std::string r = get("kernel.diagonal_rule");
        if (r == "half_nearest") s.diagonal_rule = DiagonalRule::half_nearest;
        else if (r == "explicit") s.diagonal_rule = DiagonalRule::explicit_values;
        else throw ConfigError("unknown kernel.diagonal_rule '" + r + "'");
    }
    if (has("kernel.diagonal"))
        s.diagonal = parse_reals(get("kernel.diagonal"), "kernel.diagonal");
    if (has("kernel.pole")) {
        auto p = parse_indices(get("kernel.pole"), "kernel.pole", s.points);
        if (p.size() != 1) throw ConfigError("kernel.pole needs exactly one index");
        s.pole = p[0];
    }
    if (has("kernel.quasi_metric"))
        s.require_quasi_metric = parse_bool(get("kernel.quasi_metric"), "kernel.quasi_metric");

    // [problem]
    if (has("problem.q")) s.q = parse_real(get("problem.q"), "problem.q");
    if (has("problem.forcing")) {
        std::string fo = get("problem.forcing");
        if (fo == "mu") s.forcing = Scenario::Forcing::mu;
        else if (fo == "f") s.forcing = Scenario::Forcing::f;
        else if (fo == "none") s.forcing = Scenario::Forcing::none;
        else throw ConfigError("unknown problem.forcing '" + fo + "'");
    } else if (s.mu) {
        s.forcing = Scenario::Forcing::mu;
    } else if (s.f) {
        s.forcing = Scenario::Forcing::f;
    }
    if (s.forcing == Scenario::Forcing::mu && !s.mu)
        throw ConfigError("forcing = mu but no mu weights given");
    if (s.forcing == Scenario::Forcing::f && !s.f)
        throw ConfigError("forcing = f but no f values given");

    // [tolerances]
    if (has("tolerances.tol")) s.tol = parse_real(get("tolerances.tol"), "tolerances.tol");
    if (has("tolerances.gap")) s.gap = parse_real(get("tolerances.gap"), "tolerances.gap");
    if (has("tolerances.subset_limit"))
        s.subset_limit =
            static_cast<int>(parse_int(get("tolerances.subset_limit"), "tolerances.subset_limit"));
    if (has("tolerances.exact_limit"))
        s.exact_limit =
            static_cast<int>(parse_int(get("tolerances.exact_limit"), "tolerances.exact_limit"));
    if (has("tolerances.max_iter"))
        s.max_iter = parse_int(get("tolerances.max_iter"), "tolerances.max_iter");

    // [command]
    if (has("command.set")) s.set = parse_indices(get("command.set"), "command.set", s.points);
    if (has("command.center")) {
        auto c = parse_indices(get("command.center"), "command.center", s.points);
        if (c.size() != 1) throw ConfigError("command.center needs exactly one index");
        s.center = c[0];
    }
    if (has("command.x0")) {
        auto c = parse_indices(get("command.x0"), "command.x0", s.points);
        if (c.size() != 1) throw ConfigError("command.x0 needs exactly one index");
        s.x0 = c[0];
    }
    if (has("command.a")) s.a = parse_real(get("command.a"), "command.a");
    if (has("command.mode")) {
        s.mode = get("command.mode");
        if (s.mode != "exact" && s.mode != "bracket" && s.mode != "sampled" && s.mode != "auto")
            throw ConfigError("unknown command.mode '" + s.mode + "'");
    }
    if (has("command.budget")) s.budget = parse_int(get("command.budget"), "command.budget");
    if (has("command.inject_scale"))
        s.inject_scale = parse_real(get("command.inject_scale"), "command.inject_scale");

    // [output]
    if (has("output.dir")) s.out_dir = get("output.dir");
    if (has("output.emit_plot_data"))
        s.emit_plot_data = parse_bool(get("output.emit_plot_data"), "output.emit_plot_data");

    // [run]
    if (has("run.seed"))
        s.seed = static_cast<std::uint64_t>(parse_int(get("run.seed"), "run.seed"));

    // validation shared with the library constructors
    if (!(s.q >= 1e-3 && s.q <= 1.0 - 1e-3))
        throw ConfigError("problem.q must lie in [1e-3, 1-1e-3]");
    if (s.mu && s.mu->size() != s.sigma.size())
        throw ConfigError("mu length does not match sigma");
    if (s.f && s.f->size() != s.sigma.size())
        throw ConfigError("f length does not match sigma");
    return s;
}

Scenario scenario_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return scenario_from_text(buf.str());
}

std::string scenario_to_text(const Scenario& s) {
    std::ostringstream out;
    auto rows = [&](const std::vector<std::vector<double>>& m) {
        std::string t;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i) t += "; ";
            for (std::size_t j = 0; j < m[i].size(); ++j) {
                if (j) t += " ";
                t += fmt(m[i][j]);
            }
        }
        return t;
    };
    auto list = [&](const std::vector<double>& v) {
        std::string t;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) t += " ";
            t += fmt(v[i]);
        }
        return t;
    };

    out << "[space]\n";
    out << "points = " << s.points << "\n";
    if (!s.coords.empty()) out << "coords = " << rows(s.coords) << "\n";
    out << "sigma = " << list(s.sigma) << "\n";
    if (s.mu) out << "mu = " << list(*s.mu) << "\n";
    if (s.f) out << "f = " << list(*s.f) << "\n";

    out << "\n[kernel]\n";
    out << "type = " << kernel_type_name(s.kernel_type) << "\n";
    if (s.kernel_type == Scenario::KernelType::modified)
        out << "base = " << kernel_type_name(s.base_type) << "\n";
    if (s.base_type == Scenario::KernelType::matrix)
        out << "matrix = " << rows(s.matrix) << "\n";
    if (s.base_type == Scenario::KernelType::riesz ||
        s.base_type == Scenario::KernelType::green_ball) {
        out << "alpha = " << fmt(s.alpha) << "\n";
        out << "n = " << fmt(s.dim_n) << "\n";
    }
    if (s.base_type == Scenario::KernelType::riesz) {
        out << "diagonal_rule = "
            << (s.diagonal_rule == DiagonalRule::half_nearest ? "half_nearest" : "explicit")
            << "\n";
        if (s.diagonal_rule == DiagonalRule::explicit_values)
            out << "diagonal = " << list(s.diagonal) << "\n";
    }
    if (s.kernel_type == Scenario::KernelType::modified)
        out << "pole = " << (s.pole + 1) << "\n";
    out << "quasi_metric = " << (s.require_quasi_metric ? "true" : "false") << "\n";

    out << "\n[problem]\n";
    out << "q = " << fmt(s.q) << "\n";
    out << "forcing = "
        << (s.forcing == Scenario::Forcing::mu ? "mu"
                                               : s.forcing == Scenario::Forcing::f ? "f" : "none")
        << "\n";

    out << "\n[tolerances]\n";
    out << "tol = " << fmt(s.tol) << "\n";
    out << "gap = " << fmt(s.gap) << "\n";
    out << "subset_limit = " << s.subset_limit << "\n";
    out << "exact_limit = " << s.exact_limit << "\n";
    out << "max_iter = " << s.max_iter << "\n";

    out << "\n[command]\n";
    if (!s.set.empty()) {
        out << "set =";
        for (int i : s.set) out << " " << (i + 1);
        out << "\n";
    }
    out << "center = " << (s.center + 1) << "\n";
    out << "x0 = " << (s.x0 + 1) << "\n";
    out << "a = " << fmt(s.a) << "\n";
    out << "mode = " << s.mode << "\n";
    out << "budget = " << s.budget << "\n";
    out << "inject_scale = " << fmt(s.inject_scale) << "\n";

    out << "\n[output]\n";
    out << "dir = " << s.out_dir << "\n";
    out << "emit_plot_data = " << (s.emit_plot_data ? "true" : "false") << "\n";

    out << "\n[run]\n";
    out << "seed = " << s.seed << "\n";
    return out.str();
}

Kernel build_base_kernel(const Scenario& s) {
    switch (s.base_type) {
        case Scenario::KernelType::matrix: {
            Kernel k = kernel_from_matrix(s.matrix);
            if (k.size() != s.points)
                throw ConfigError("kernel size does not match the space");
            if (s.require_quasi_metric && !k.symmetric())
                throw NotSymmetric("scenario requires a quasi-metric kernel");
            return k;
        }
        case Scenario::KernelType::riesz: {
            if (s.coords.empty()) throw ConfigError("riesz kernel needs space.coords");
            return riesz_kernel(s.coords, s.alpha, s.dim_n, s.diagonal_rule, s.diagonal);
        }
        case Scenario::KernelType::green_ball: {
            if (s.coords.empty()) throw ConfigError("green_ball kernel needs space.coords");
            return green_ball_kernel(s.coords, s.alpha, static_cast<int>(s.dim_n));
        }
        case Scenario::KernelType::modified:
            break;
    }
    throw ConfigError("invalid base kernel type");
}

Kernel build_effective_kernel(const Scenario& s) {
    Kernel base = build_base_kernel(s);
    if (s.kernel_type != Scenario::KernelType::modified) return base;
    return modify(base, green_modifier(base, s.pole));
}

Space build_space(const Scenario& s) {
    return Space(s.points, s.sigma, s.mu, s.f, s.coords);
}

Problem build_problem(const Scenario& s) {
    Kernel base = build_base_kernel(s);
    std::optional<Modifier> modifier;
    if (s.kernel_type == Scenario::KernelType::modified)
        modifier = green_modifier(base, s.pole);
    std::optional<Measure> mu;
    std::optional<std::vector<double>> f;
    if (s.forcing == Scenario::Forcing::mu) mu = Measure(*s.mu);
    if (s.forcing == Scenario::Forcing::f) f = *s.f;
    return make_problem(std::move(base), Measure(s.sigma), s.q, std::move(mu), std::move(f),
                        std::move(modifier));
}

SolveOptions build_solve_options(const Scenario& s) {
    SolveOptions opt;
    opt.tol = s.tol;
    opt.max_iterations = s.max_iter;
    opt.intrinsic.embedding.tol = s.gap;
    return opt;
}

} // namespace sublin
