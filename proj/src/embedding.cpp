#include "sublin/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "sublin/accum.hpp"

namespace sublin {

namespace {

void check_exponent(double q) {
    if (!(q >= 1e-3 && q <= 1.0 - 1e-3)) throw BadExponent(q);
}

// Restriction of E to the sigma-support; zero-weight points contribute
// nothing to Phi and would only blur the cache key.
std::vector<int> effective_set(const std::vector<int>& set_E, const Measure& sigma) {
    std::vector<int> e;
    for (int y : set_E)
        if (y >= 0 && y < sigma.size() && sigma[y] > 0.0) e.push_back(y);
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return e;
}

struct Objective {
    const Kernel& kernel;
    const Measure& sigma;
    const std::vector<int>& set;  // nonempty, sigma-positive
    double q;

    // G nu on the set.
    std::vector<double> apply(const std::vector<double>& nu) const {
        std::vector<double> p(set.size());
        for (std::size_t i = 0; i < set.size(); ++i) {
            Accum acc;
            int y = set[i];
            for (int z = 0; z < kernel.size(); ++z)
                if (nu[z] != 0.0) acc.add(kernel(y, z) * nu[z]);
            p[i] = acc.value();
        }
        return p;
    }

    double phi_of(const std::vector<double>& p) const {
        Accum acc;
        for (std::size_t i = 0; i < set.size(); ++i)
            acc.add(sigma[set[i]] * std::pow(p[i], q));
        return acc.value();
    }

    // grad Phi(nu)_z = q sum_i sigma_i p_i^{q-1} G(y_i, z).
    std::vector<double> gradient(const std::vector<double>& p) const {
        std::vector<double> coeff(set.size());
        for (std::size_t i = 0; i < set.size(); ++i)
            coeff[i] = q * sigma[set[i]] * std::pow(p[i], q - 1.0);
        std::vector<double> g(kernel.size(), 0.0);
        for (int z = 0; z < kernel.size(); ++z) {
            Accum acc;
            for (std::size_t i = 0; i < set.size(); ++i) acc.add(coeff[i] * kernel(set[i], z));
            g[z] = acc.value();
        }
        return g;
    }
};

} // namespace

EmbeddingCertificate embedding_constant(const Kernel& kernel, const Measure& sigma, double q,
                                        const std::vector<int>& set_E,
                                        const EmbeddingOptions& options) {
    check_exponent(q);
    if (sigma.size() != kernel.size())
        throw LengthMismatch("sigma length does not match kernel size");
    const int n = kernel.size();

    EmbeddingCertificate cert;
    cert.set = effective_set(set_E, sigma);
    if (cert.set.empty()) {
        // kappa(E) = 0 when sigma(E) = 0: the inequality holds with C = 0.
        cert.value = 0.0;
        cert.phi = 0.0;
        cert.gap = 0.0;
        cert.maximizer.assign(n, 1.0 / n);
        return cert;
    }

    Objective obj{kernel, sigma, cert.set, q};

    std::vector<double> nu;
    if (options.warm_start && static_cast<int>(options.warm_start->size()) == n) {
        nu = *options.warm_start;
        double s = 0.0;
        for (double& v : nu) {
            if (!(v > 0.0)) v = 0.0;
            s += v;
        }
        if (s > 0.0)
            for (double& v : nu) v /= s;
        else
            nu.assign(n, 1.0 / n);
    } else {
        nu.assign(n, 1.0 / n);
    }

    std::vector<double> p = obj.apply(nu);
    double phi = obj.phi_of(p);
    double gap = std::numeric_limits<double>::infinity();
    long it = 0;

    for (; it < options.max_iterations; ++it) {
        std::vector<double> grad = obj.gradient(p);

        double gdotnu = 0.0;
        for (int z = 0; z < n; ++z) gdotnu += grad[z] * nu[z];

        int fw = 0;
        for (int z = 1; z < n; ++z)
            if (grad[z] > grad[fw]) fw = z;
        gap = grad[fw] - gdotnu;
        double threshold = std::max(options.tol, 10.0 * options.tol * phi);
        if (gap <= threshold) break;

        int away = -1;
        for (int z = 0; z < n; ++z)
            if (nu[z] > 0.0 && (away < 0 || grad[z] < grad[away])) away = z;

        // direction choice: toward-vertex vs away-from-vertex
        double fw_score = grad[fw] - gdotnu;
        double away_score = gdotnu - grad[away];
        bool use_away = away >= 0 && away_score > fw_score && nu[away] < 1.0;

        int vertex = use_away ? away : fw;
        double gamma_max = use_away ? nu[away] / (1.0 - nu[away]) : 1.0;

        // d = +/- (e_vertex - nu); G d on the set, for the 1-D restriction.
        std::vector<double> u(cert.set.size());
        for (std::size_t i = 0; i < cert.set.size(); ++i) {
            Accum acc;
            acc.add(kernel(cert.set[i], vertex));
            for (int z = 0; z < n; ++z)
                if (nu[z] != 0.0) acc.add(-kernel(cert.set[i], z) * nu[z]);
            u[i] = acc.value();
        }
        double sign = use_away ? -1.0 : 1.0;

        // phi'(gamma) = q sum_i s_i (p_i + sign gamma u_i)^{q-1} sign u_i;
        // concave restriction, so bisect on the derivative.
        auto dphi = [&](double gamma) {
            double s = 0.0;
            for (std::size_t i = 0; i < cert.set.size(); ++i) {
                double v = p[i] + sign * gamma * u[i];
                if (v <= 0.0) v = std::numeric_limits<double>::min();
                s += sigma[cert.set[i]] * std::pow(v, q - 1.0) * sign * u[i];
            }
            return q * s;
        };

        double gamma = gamma_max;
        if (dphi(gamma_max) < 0.0) {
            double lo = 0.0, hi = gamma_max;
            for (int b = 0; b < 30; ++b) {
                double mid = 0.5 * (lo + hi);
                if (dphi(mid) > 0.0)
                    lo = mid;
                else
                    hi = mid;
            }
            gamma = 0.5 * (lo + hi);
        }
        if (gamma <= 0.0) break;  // numerically stuck at a face

        // nu <- nu + gamma sign (e_vertex - nu)
        double scale = 1.0 - sign * gamma;
        for (int z = 0; z < n; ++z) nu[z] *= scale;
        nu[vertex] += sign * gamma;
        if (use_away && gamma >= gamma_max * (1.0 - 1e-14)) nu[vertex] = 0.0;  // drop step
        for (double& v : nu)
            if (v < 0.0) v = 0.0;
        double total = 0.0;
        for (double v : nu) total += v;
        for (double& v : nu) v /= total;

        p = obj.apply(nu);
        phi = obj.phi_of(p);
    }

    cert.maximizer = nu;
    cert.phi = phi;
    cert.value = std::pow(phi, 1.0 / q);
    cert.gap = std::max(gap, 0.0);
    cert.iterations = it;

    double threshold = std::max(options.tol, 10.0 * options.tol * phi);
    if (!(cert.gap <= threshold))
        throw NoConvergence("embedding constant: gap " + std::to_string(cert.gap) +
                                " above tolerance after " + std::to_string(it) + " iterations",
                            cert);
    return cert;
}

KappaCache::KappaCache(const Kernel& kernel, const Measure& sigma, double q,
                       EmbeddingOptions options)
    : kernel_(kernel), sigma_(sigma), q_(q), options_(options) {
    check_exponent(q);
}

std::vector<int> KappaCache::canonical(const std::vector<int>& set_E) const {
    return effective_set(set_E, sigma_);
}

const EmbeddingCertificate& KappaCache::get(const std::vector<int>& set_E,
                                            const std::vector<double>* warm) {
    std::vector<int> key = canonical(set_E);
    {
        std::shared_lock lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    EmbeddingOptions opts = options_;
    opts.warm_start = warm;
    EmbeddingCertificate cert = embedding_constant(kernel_, sigma_, q_, key, opts);
    std::unique_lock lock(mutex_);
    auto [it, inserted] = cache_.emplace(std::move(key), std::move(cert));
    (void)inserted;  // first writer wins
    return it->second;
}

std::vector<EmbeddingCertificate> KappaCache::snapshot() const {
    std::shared_lock lock(mutex_);
    std::vector<EmbeddingCertificate> all;
    all.reserve(cache_.size());
    for (const auto& [key, cert] : cache_) all.push_back(cert);
    return all;
}

} // namespace sublin
