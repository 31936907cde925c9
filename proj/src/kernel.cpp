#include "sublin/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace sublin {

std::string provenance_name(Provenance p) {
    switch (p) {
        case Provenance::explicit_matrix: return "explicit";
        case Provenance::riesz: return "riesz";
        case Provenance::green_ball: return "green_ball";
        case Provenance::modified: return "modified";
    }
    return "unknown";
}

bool Modifier::is_identity() const {
    for (double v : values)
        if (v != 1.0) return false;
    return true;
}

Kernel::Kernel(std::vector<double> row_major, int n, Provenance provenance)
    : n_(n), g_(std::move(row_major)), provenance_(provenance) {
    if (n_ < 1) throw Error("kernel needs at least one point");
    if (g_.size() != static_cast<std::size_t>(n_) * n_)
        throw LengthMismatch("kernel data size does not match n x n");
    for (int x = 0; x < n_; ++x)
        for (int y = 0; y < n_; ++y) {
            double v = g_[static_cast<std::size_t>(x) * n_ + y];
            if (!std::isfinite(v)) throw NonFiniteEntry(x, y);
            if (v <= 0.0) throw NonPositiveEntry(x, y);
        }
    symmetric_ = true;
    for (int x = 0; x < n_ && symmetric_; ++x)
        for (int y = x + 1; y < n_; ++y)
            if (g_[static_cast<std::size_t>(x) * n_ + y] !=
                g_[static_cast<std::size_t>(y) * n_ + x]) {
                symmetric_ = false;
                break;
            }
}

void Kernel::ensure_kappa() const {
    std::call_once(kappa_once_, [this] {
        // kappa = max over triples of d(x,y) / (d(x,z)+d(z,y)), d = 1/G.
        // Denominators are always positive here (finite G => d > 0).
        double best = 0.0;
        KappaWitness w;
        for (int x = 0; x < n_; ++x)
            for (int y = 0; y < n_; ++y) {
                double dxy = 1.0 / (*this)(x, y);
                for (int z = 0; z < n_; ++z) {
                    double denom = 1.0 / (*this)(x, z) + 1.0 / (*this)(z, y);
                    if (denom <= 0.0) continue;
                    double ratio = dxy / denom;
                    if (ratio > best) {
                        best = ratio;
                        w = {x, y, z, ratio};
                    }
                }
            }
        kappa_ = best;
        kappa_witness_ = w;
    });
}

double Kernel::quasi_metric_constant() const {
    if (!symmetric_) throw NotSymmetric("quasi-metric constant needs a symmetric kernel");
    ensure_kappa();
    return kappa_;
}

KappaWitness Kernel::quasi_metric_witness() const {
    if (!symmetric_) throw NotSymmetric("quasi-metric constant needs a symmetric kernel");
    ensure_kappa();
    return kappa_witness_;
}

double Kernel::kappa_eff() const { return std::max(quasi_metric_constant(), 0.5); }

double Kernel::quasi_symmetry_constant() const {
    std::call_once(qs_once_, [this] {
        double best = 1.0;
        for (int x = 0; x < n_; ++x)
            for (int y = x + 1; y < n_; ++y) {
                double r = (*this)(x, y) / (*this)(y, x);
                best = std::max(best, std::max(r, 1.0 / r));
            }
        qs_ = best;
    });
    return qs_;
}

std::vector<int> Kernel::ball(int x, double r) const {
    if (r <= 0.0) throw Error("ball radius must be positive");
    std::vector<int> set;
    double threshold = 1.0 / r;
    for (int y = 0; y < n_; ++y)
        if ((*this)(x, y) > threshold) set.push_back(y);
    return set;
}

void Kernel::ensure_decompositions() const {
    std::call_once(decomp_once_, [this] {
        decomp_.resize(n_);
        for (int x = 0; x < n_; ++x) {
            BallDecomposition& d = decomp_[x];
            d.center = x;
            d.order.resize(n_);
            std::iota(d.order.begin(), d.order.end(), 0);
            std::stable_sort(d.order.begin(), d.order.end(), [&](int a, int b) {
                return (*this)(x, a) > (*this)(x, b);
            });
            // merge equal values into one level
            int i = 0;
            while (i < n_) {
                double g = (*this)(x, d.order[i]);
                int j = i;
                while (j < n_ && (*this)(x, d.order[j]) == g) ++j;
                d.levels.push_back(g);
                d.counts.push_back(j);
                i = j;
            }
        }
    });
}

const BallDecomposition& Kernel::decomposition(int x) const {
    ensure_decompositions();
    return decomp_[x];
}

double Kernel::row_max(int x) const {
    double m = (*this)(x, 0);
    for (int y = 1; y < n_; ++y) m = std::max(m, (*this)(x, y));
    return m;
}

double Kernel::row_min(int x) const {
    double m = (*this)(x, 0);
    for (int y = 1; y < n_; ++y) m = std::min(m, (*this)(x, y));
    return m;
}

Kernel kernel_from_matrix(const std::vector<std::vector<double>>& matrix) {
    int n = static_cast<int>(matrix.size());
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& row : matrix) {
        if (static_cast<int>(row.size()) != n)
            throw LengthMismatch("kernel matrix is not square");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return Kernel(std::move(flat), n, Provenance::explicit_matrix);
}

Kernel kernel_from_rowmajor(std::vector<double> row_major, int n, Provenance provenance) {
    return Kernel(std::move(row_major), n, provenance);
}

namespace {

double dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        double d = a[k] - b[k];
        s += d * d;
    }
    return std::sqrt(s);
}

// Nearest-neighbor distance of each point; throws on duplicates.
std::vector<double> nearest_distances(const std::vector<std::vector<double>>& coords) {
    int n = static_cast<int>(coords.size());
    std::vector<double> h(n, std::numeric_limits<double>::infinity());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double d = dist(coords[i], coords[j]);
            if (d == 0.0) throw DuplicatePoints(i, j);
            h[i] = std::min(h[i], d);
            h[j] = std::min(h[j], d);
        }
    if (n == 1) h[0] = 1.0;  // a lone point has no neighbor; unit scale
    return h;
}

} // namespace

Kernel riesz_kernel(const std::vector<std::vector<double>>& coords, double alpha, double n,
                    DiagonalRule rule, const std::vector<double>& diagonal) {
    if (!(alpha > 0.0 && alpha < n)) throw BadAlpha("riesz kernel needs 0 < alpha < n");
    int N = static_cast<int>(coords.size());
    if (N < 1) throw Error("riesz kernel needs at least one point");
    double e = alpha - n;  // negative exponent
    auto h = nearest_distances(coords);
    if (rule == DiagonalRule::explicit_values && static_cast<int>(diagonal.size()) != N)
        throw LengthMismatch("explicit diagonal length does not match point count");

    std::vector<double> g(static_cast<std::size_t>(N) * N);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            if (i == j) {
                g[static_cast<std::size_t>(i) * N + j] =
                    rule == DiagonalRule::half_nearest ? std::pow(h[i] / 2.0, e) : diagonal[i];
            } else {
                g[static_cast<std::size_t>(i) * N + j] = std::pow(dist(coords[i], coords[j]), e);
            }
        }
    }
    return Kernel(std::move(g), N, Provenance::riesz);
}

namespace {

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fb, double fm,
                        int depth) {
    double m = 0.5 * (a + b);
    double flm = f(0.5 * (a + m)), frm = f(0.5 * (m + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 1e-15 * (1.0 + std::abs(whole)))
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, fm, flm, depth - 1) +
           adaptive_simpson(f, m, b, fm, fb, frm, depth - 1);
}

// int_0^y t^{a/2-1} (1+t)^{-n/2} dt for 0 < y <= 1.  The substitution
// t = v^{2/a} absorbs the endpoint singularity exactly:
//   t^{a/2-1} dt = (2/a) dv,  so the integral is (2/a) int_0^{y^{a/2}} (1+v^{2/a})^{-n/2} dv.
double boggio_core(double y, double a, double n) {
    double p = 2.0 / a;
    auto f = [&](double v) { return std::pow(1.0 + std::pow(v, p), -n / 2.0); };
    double upper = std::pow(y, a / 2.0);
    return p * adaptive_simpson(f, 0.0, upper, f(0.0), f(upper), f(0.5 * upper), 40);
}

// int_0^rho t^{alpha/2-1} (1+t)^{-n/2} dt.  For rho > 1, substitute t = 1/s in
// the tail: the integral equals B(alpha/2, (n-alpha)/2) minus the same family
// of integrals with alpha replaced by n-alpha, evaluated at 1/rho.
double boggio_integral(double rho, double alpha, double n) {
    if (rho <= 0.0) return 0.0;
    if (rho <= 1.0) return boggio_core(rho, alpha, n);
    double complete = std::exp(std::lgamma(alpha / 2.0) + std::lgamma((n - alpha) / 2.0) -
                               std::lgamma(n / 2.0));
    return complete - boggio_core(1.0 / rho, n - alpha, n);
}

} // namespace

Kernel green_ball_kernel(const std::vector<std::vector<double>>& coords, double alpha, int n) {
    if (!(alpha > 0.0 && alpha < n)) throw BadAlpha("green ball kernel needs 0 < alpha < n");
    int N = static_cast<int>(coords.size());
    if (N < 1) throw Error("green ball kernel needs at least one point");
    for (int i = 0; i < N; ++i) {
        if (static_cast<int>(coords[i].size()) != n)
            throw LengthMismatch("green ball kernel needs coordinates of dimension n");
        double r2 = 0.0;
        for (double c : coords[i]) r2 += c * c;
        if (r2 >= 1.0)
            throw Error("green ball kernel point " + std::to_string(i + 1) +
                        " is outside the open unit ball");
    }
    auto h = nearest_distances(coords);
    const double pi = std::acos(-1.0);
    double k = std::tgamma(n / 2.0) /
               (std::pow(2.0, alpha) * std::pow(pi, n / 2.0) *
                std::pow(std::tgamma(alpha / 2.0), 2.0));

    auto norm2 = [&](int i) {
        double s = 0.0;
        for (double c : coords[i]) s += c * c;
        return s;
    };
    auto entry = [&](int i, int j, double r) {
        double rho = (1.0 - norm2(i)) * (1.0 - norm2(j)) / (r * r);
        return k * std::pow(r, alpha - n) * boggio_integral(rho, alpha, n);
    };

    std::vector<double> g(static_cast<std::size_t>(N) * N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double r = (i == j) ? h[i] / 2.0 : dist(coords[i], coords[j]);
            g[static_cast<std::size_t>(i) * N + j] = entry(i, j, r);
        }
    // enforce exact symmetry (entry(i,j) and entry(j,i) agree analytically)
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j)
            g[static_cast<std::size_t>(j) * N + i] = g[static_cast<std::size_t>(i) * N + j];
    return Kernel(std::move(g), N, Provenance::green_ball);
}

Kernel symmetrize(const Kernel& kernel) {
    int n = kernel.size();
    std::vector<double> g(static_cast<std::size_t>(n) * n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            g[static_cast<std::size_t>(x) * n + y] = kernel(x, y) + kernel(y, x);
    return Kernel(std::move(g), n, kernel.provenance());
}

Modifier green_modifier(const Kernel& kernel, int x0) {
    if (x0 < 0 || x0 >= kernel.size()) throw Error("green modifier pole out of range");
    Modifier m;
    m.pole = x0;
    m.values.resize(kernel.size());
    for (int x = 0; x < kernel.size(); ++x) m.values[x] = std::min(1.0, kernel(x, x0));
    return m;
}

Kernel modify(const Kernel& kernel, const Modifier& modifier) {
    int n = kernel.size();
    if (static_cast<int>(modifier.values.size()) != n)
        throw LengthMismatch("modifier length does not match kernel size");
    for (double v : modifier.values)
        if (!(v > 0.0) || !std::isfinite(v)) throw Error("modifier values must be positive finite");
    std::vector<double> g(static_cast<std::size_t>(n) * n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            g[static_cast<std::size_t>(x) * n + y] =
                kernel(x, y) / (modifier.values[x] * modifier.values[y]);
    return Kernel(std::move(g), n, Provenance::modified);
}

PtolemyReport ptolemy_check(const Kernel& kernel) {
    double kappa = kernel.quasi_metric_constant();
    int n = kernel.size();
    auto d = [&](int a, int b) { return 1.0 / kernel(a, b); };
    PtolemyReport rep;
    rep.bound = 4.0 * kappa * kappa;
    for (int x0 = 0; x0 < n; ++x0)
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                for (int z = 0; z < n; ++z) {
                    double lhs = d(x, y) * d(x0, z);
                    double bracket = d(x, z) * d(y, x0) + d(x0, x) * d(z, y);
                    if (bracket <= 0.0) continue;  // degenerate, contributes nothing
                    double ratio = lhs / bracket;
                    if (ratio > rep.worst_ratio) {
                        rep.worst_ratio = ratio;
                        rep.x0 = x0; rep.x = x; rep.y = y; rep.z = z;
                    }
                }
    rep.pass = rep.worst_ratio <= rep.bound * (1.0 + 1e-12);
    return rep;
}

ModifiabilityCertificate modifiability_certificate(const Kernel& kernel, int x0) {
    double kappa = kernel.quasi_metric_constant();
    Kernel modified = modify(kernel, green_modifier(kernel, x0));
    ModifiabilityCertificate cert;
    cert.pole = x0;
    cert.kappa_base = kappa;
    cert.kappa_modified = modified.quasi_metric_constant();
    cert.bound = 4.0 * kappa * kappa;
    cert.wmp_modified = 2.0 * cert.kappa_modified;
    cert.wmp_bound = 8.0 * kappa * kappa;
    cert.pass = cert.kappa_modified <= cert.bound * (1.0 + 1e-12);
    return cert;
}

Kernel kernel_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open kernel csv '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            try {
                row.push_back(std::stod(field));
            } catch (const std::exception&) {
                throw Error("cannot parse kernel csv '" + path + "' line " +
                            std::to_string(lineno));
            }
        }
        rows.push_back(std::move(row));
    }
    return kernel_from_matrix(rows);
}

void kernel_to_csv(const Kernel& kernel, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write kernel csv '" + path + "'");
    char buf[64];
    for (int x = 0; x < kernel.size(); ++x) {
        for (int y = 0; y < kernel.size(); ++y) {
            std::snprintf(buf, sizeof buf, "%.17g", kernel(x, y));
            out << (y ? "," : "") << buf;
        }
        out << "\n";
    }
}

KernelMeta kernel_meta_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open kernel meta '" + path + "'");
    KernelMeta meta;
    std::string line;
    while (std::getline(in, line)) {
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key == "provenance") meta.provenance = value;
        else if (key == "alpha") meta.alpha = std::stod(value);
        else if (key == "n") meta.n = std::stod(value);
        else if (key == "diagonal_rule") meta.diagonal_rule = value;
    }
    return meta;
}

void kernel_meta_to_file(const KernelMeta& meta, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write kernel meta '" + path + "'");
    char buf[64];
    out << "provenance = " << meta.provenance << "\n";
    if (meta.alpha) {
        std::snprintf(buf, sizeof buf, "%.17g", *meta.alpha);
        out << "alpha = " << buf << "\n";
    }
    if (meta.n) {
        std::snprintf(buf, sizeof buf, "%.17g", *meta.n);
        out << "n = " << buf << "\n";
    }
    if (meta.diagonal_rule) out << "diagonal_rule = " << *meta.diagonal_rule << "\n";
}

} // namespace sublin
