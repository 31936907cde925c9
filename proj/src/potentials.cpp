#include "sublin/potentials.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "sublin/accum.hpp"

namespace sublin {

std::vector<double> potential(const Kernel& kernel, const Measure& measure) {
    if (measure.size() != kernel.size())
        throw LengthMismatch("measure length does not match kernel size");
    int n = kernel.size();
    std::vector<double> out(n);
    for (int x = 0; x < n; ++x) {
        Accum acc;
        for (int y = 0; y < n; ++y) acc.add(kernel(x, y) * measure[y]);
        out[x] = acc.value();
    }
    return out;
}

std::vector<double> adjoint_potential(const Kernel& kernel, const Measure& measure) {
    if (measure.size() != kernel.size())
        throw LengthMismatch("measure length does not match kernel size");
    int n = kernel.size();
    std::vector<double> out(n);
    for (int x = 0; x < n; ++x) {
        Accum acc;
        for (int y = 0; y < n; ++y) acc.add(kernel(y, x) * measure[y]);
        out[x] = acc.value();
    }
    return out;
}

double potential_radial(const Kernel& kernel, const Measure& measure, int x) {
    const BallDecomposition& d = kernel.decomposition(x);
    int m = d.level_count();
    // sigma(B_j) as compensated prefix sums over the sorted row order.
    Accum mass;
    Accum total;
    int consumed = 0;
    for (int j = 0; j < m; ++j) {
        while (consumed < d.counts[j]) mass.add(measure[d.order[consumed++]]);
        double next = (j + 1 < m) ? d.levels[j + 1] : 0.0;
        total.add(mass.value() * (d.levels[j] - next));
    }
    return total.value();
}

double potential_radial_tail(const Kernel& kernel, const Measure& measure, int x, double a) {
    if (!(a > 0.0)) throw Error("tail anchor a must be positive");
    const BallDecomposition& d = kernel.decomposition(x);
    int m = d.level_count();
    double cut = 1.0 / a;  // interval j contributes on (max(a, 1/g_j), 1/g_{j+1}]
    Accum mass;
    Accum total;
    int consumed = 0;
    for (int j = 0; j < m; ++j) {
        while (consumed < d.counts[j]) mass.add(measure[d.order[consumed++]]);
        double next = (j + 1 < m) ? d.levels[j + 1] : 0.0;
        double hi = std::min(d.levels[j], cut);  // int_{max(a,1/g_j)}^{1/g_{j+1}} dr/r^2
        if (hi > next) total.add(mass.value() * (hi - next));
    }
    return total.value();
}

double pow_q1mq(double t, double q) {
    double e = q / (1.0 - q);
    if (t == 0.0) return 0.0;
    if (q > 0.9) return std::exp(e * std::log(t));
    return std::pow(t, e);
}

double pow_11mq(double t, double q) {
    double e = 1.0 / (1.0 - q);
    if (t == 0.0) return 0.0;
    if (q > 0.9) return std::exp(e * std::log(t));
    return std::pow(t, e);
}

namespace {

double intrinsic_at(KappaCache& cache, int x) {
    const Kernel& kernel = cache.kernel();
    const BallDecomposition& d = kernel.decomposition(x);
    int m = d.level_count();
    Accum total;
    const std::vector<double>* warm = nullptr;
    for (int j = 1; j <= m; ++j) {
        const EmbeddingCertificate& cert = cache.get(d.ball(j), warm);
        warm = &cert.maximizer;  // nested chain: B_{j-1} is the largest cached subset
        double next = (j < m) ? d.levels[j] : 0.0;
        total.add(pow_q1mq(cert.value, cache.q()) * (d.levels[j - 1] - next));
    }
    return total.value();
}

} // namespace

std::vector<double> intrinsic_potential(KappaCache& cache, const IntrinsicOptions& options) {
    int n = cache.kernel().size();
    std::vector<double> out(n);
    if (options.threads <= 1) {
        for (int x = 0; x < n; ++x) out[x] = intrinsic_at(cache, x);
        return out;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int x = next.fetch_add(1); x < n; x = next.fetch_add(1))
            out[x] = intrinsic_at(cache, x);
    };
    std::vector<std::thread> pool;
    int count = std::min(options.threads, n);
    pool.reserve(count);
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return out;
}

std::vector<double> intrinsic_potential(const Kernel& kernel, const Measure& sigma, double q,
                                        const IntrinsicOptions& options) {
    KappaCache cache(kernel, sigma, q, options.embedding);
    return intrinsic_potential(cache, options);
}

double intrinsic_potential_tail(KappaCache& cache, int x, double a) {
    if (!(a > 0.0)) throw Error("tail anchor a must be positive");
    const Kernel& kernel = cache.kernel();
    const BallDecomposition& d = kernel.decomposition(x);
    int m = d.level_count();
    double cut = 1.0 / a;
    Accum total;
    const std::vector<double>* warm = nullptr;
    for (int j = 1; j <= m; ++j) {
        const EmbeddingCertificate& cert = cache.get(d.ball(j), warm);
        warm = &cert.maximizer;
        double next = (j < m) ? d.levels[j] : 0.0;
        double hi = std::min(d.levels[j - 1], cut);
        if (hi > next) total.add(pow_q1mq(cert.value, cache.q()) * (hi - next));
    }
    return total.value();
}

Measure modified_sigma(const Measure& sigma, const Modifier& modifier, double q) {
    std::vector<double> w(sigma.size());
    for (int y = 0; y < sigma.size(); ++y)
        w[y] = std::pow(modifier.values[y], 1.0 + q) * sigma[y];
    return Measure(std::move(w));
}

std::vector<double> modified_intrinsic_potential(const Kernel& kernel, const Modifier& modifier,
                                                 const Measure& sigma, double q,
                                                 const IntrinsicOptions& options) {
    Kernel modified = modify(kernel, modifier);
    Measure sigma_tilde = modified_sigma(sigma, modifier, q);
    KappaCache cache(modified, sigma_tilde, q, options.embedding);
    return intrinsic_potential(cache, options);
}

PotentialProfile potential_profile(const Kernel& kernel, const Measure& sigma,
                                   const std::optional<Measure>& mu, double q,
                                   const IntrinsicOptions& options) {
    PotentialProfile prof;
    prof.q = q;
    prof.g_sigma = potential(kernel, sigma);
    prof.k_sigma = intrinsic_potential(kernel, sigma, q, options);
    prof.g_mu = mu ? potential(kernel, *mu) : std::vector<double>(kernel.size(), 0.0);
    prof.h.resize(kernel.size());
    for (int x = 0; x < kernel.size(); ++x)
        prof.h[x] = pow_11mq(prof.g_sigma[x], q) + prof.k_sigma[x] + prof.g_mu[x];
    return prof;
}

double lorentz_quasi_norm(std::vector<double> values, std::vector<double> weights, double p,
                          double s) {
    if (values.size() != weights.size())
        throw LengthMismatch("lorentz norm needs matching values/weights");
    std::vector<std::size_t> idx(values.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return values[a] > values[b];
    });
    Accum acc;
    double W = 0.0;
    double prev_pow = 0.0;
    for (std::size_t i : idx) {
        if (weights[i] <= 0.0) continue;
        W += weights[i];
        double cur_pow = std::pow(W, s / p);
        acc.add(std::pow(values[i], s) * (cur_pow - prev_pow));
        prev_pow = cur_pow;
    }
    return std::pow(acc.value(), 1.0 / s);
}

LorentzDiagnostic lorentz_diagnostic(const Kernel& kernel, const Measure& sigma, double q,
                                     const std::vector<int>& set_B,
                                     const EmbeddingOptions& options) {
    LorentzDiagnostic diag;
    diag.set = set_B;
    std::sort(diag.set.begin(), diag.set.end());
    diag.set.erase(std::unique(diag.set.begin(), diag.set.end()), diag.set.end());

    std::vector<double> restricted(kernel.size(), 0.0);
    for (int y : diag.set) restricted[y] = sigma[y];
    Measure sigma_B(restricted);
    if (sigma_B.total() <= 0.0) {
        diag.empty = true;
        diag.ratio_lq = diag.ratio_lorentz = std::numeric_limits<double>::quiet_NaN();
        return diag;
    }

    EmbeddingCertificate cert = embedding_constant(kernel, sigma, q, diag.set, options);
    diag.kappa = cert.value;

    std::vector<double> f = potential(kernel, sigma_B);
    double p = q / (1.0 - q);
    std::vector<double> vals, wts;
    for (int y = 0; y < kernel.size(); ++y)
        if (sigma_B[y] > 0.0) {
            vals.push_back(f[y]);
            wts.push_back(sigma_B[y]);
        }
    diag.lq_norm = lorentz_quasi_norm(vals, wts, p, p);
    diag.lorentz_norm = lorentz_quasi_norm(vals, wts, p, q);
    diag.ratio_lq = diag.kappa / diag.lq_norm;
    diag.ratio_lorentz = diag.kappa / diag.lorentz_norm;
    return diag;
}

} // namespace sublin
