#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "sublin/space.hpp"

namespace sublin {

enum class Provenance { explicit_matrix, riesz, green_ball, modified };

std::string provenance_name(Provenance p);

// Witness triple for the quasi-metric constant: the (x,y,z) attaining
// kappa = d(x,y) / (d(x,z) + d(z,y)) with d = 1/G.
struct KappaWitness {
    int x = 0, y = 0, z = 0;
    double ratio = 0.0;
};

// Strictly positive function used to modify a kernel, G~ = G/(m (x) m).
struct Modifier {
    std::vector<double> values;   // all > 0
    std::optional<int> pole;      // set when this is the Green modifier min{1, G(.,x0)}

    bool is_identity() const;
};

// Strictly positive finite N x N kernel with cached structural constants
// and per-row ball decompositions.  Immutable after construction; the
// lazy caches are write-once behind call_once, so concurrent readers are safe.
class Kernel {
public:
    Kernel(std::vector<double> row_major, int n, Provenance provenance);

    int size() const { return n_; }
    double operator()(int x, int y) const { return g_[static_cast<std::size_t>(x) * n_ + y]; }
    const std::vector<double>& data() const { return g_; }
    bool symmetric() const { return symmetric_; }
    Provenance provenance() const { return provenance_; }

    // Least kappa with d(x,y) <= kappa [d(x,z) + d(z,y)], d = 1/G; exact
    // O(N^3) enumeration.  Throws NotSymmetric for non-symmetric kernels.
    double quasi_metric_constant() const;
    KappaWitness quasi_metric_witness() const;

    // kappa with the paper's floor 1/2 applied (a no-op for finite diagonals,
    // where the triple (x,x,x) already forces kappa >= 1/2).
    double kappa_eff() const;

    // Least a >= 1 with a^{-1} G(y,x) <= G(x,y) <= a G(y,x) for all pairs.
    double quasi_symmetry_constant() const;

    // B(x, r) = { y : G(x,y) > 1/r }, strict inequality.  r must be > 0.
    std::vector<int> ball(int x, double r) const;

    const BallDecomposition& decomposition(int x) const;

    double row_max(int x) const;
    double row_min(int x) const;

private:
    void ensure_kappa() const;
    void ensure_decompositions() const;

    int n_;
    std::vector<double> g_;
    bool symmetric_;
    Provenance provenance_;

    mutable std::once_flag kappa_once_;
    mutable double kappa_ = 0.0;
    mutable KappaWitness kappa_witness_;

    mutable std::once_flag qs_once_;
    mutable double qs_ = 1.0;

    mutable std::once_flag decomp_once_;
    mutable std::vector<BallDecomposition> decomp_;
};

// ---- constructors ----

Kernel kernel_from_matrix(const std::vector<std::vector<double>>& matrix);
Kernel kernel_from_rowmajor(std::vector<double> row_major, int n,
                            Provenance provenance = Provenance::explicit_matrix);

enum class DiagonalRule { half_nearest, explicit_values };

// Riesz kernel of order alpha in R^n restricted to a point cloud:
// G(x,y) = |x-y|^{alpha-n} off the diagonal.  The continuum kernel is
// singular on the diagonal, so G(x,x) is set by the declared rule:
// half_nearest uses (h_x/2)^{alpha-n} with h_x the nearest-neighbor
// distance, explicit_values takes the supplied diagonal.
Kernel riesz_kernel(const std::vector<std::vector<double>>& coords, double alpha, double n,
                    DiagonalRule rule = DiagonalRule::half_nearest,
                    const std::vector<double>& diagonal = {});

// Green's kernel of (-Delta)^{alpha/2} on the open unit ball of R^n
// (Boggio's closed form), restricted to a point cloud strictly inside
// the ball.  External to the quasi-metric theory itself; provided because
// such kernels are the canonical quasi-metrically modifiable examples.
//
//   G(x,y) = k(n,alpha) |x-y|^{alpha-n} I(rho),     rho = (1-|x|^2)(1-|y|^2)/|x-y|^2,
//   I(rho) = int_0^rho t^{alpha/2-1} (1+t)^{-n/2} dt,
//   k(n,alpha) = Gamma(n/2) / (2^alpha pi^{n/2} Gamma(alpha/2)^2).
//
// The diagonal uses the same formula with |x-y| replaced by half the
// nearest-neighbor distance (the half_nearest rule).
Kernel green_ball_kernel(const std::vector<std::vector<double>>& coords, double alpha, int n);

// ---- structural operations ----

// G^s(x,y) = G(x,y) + G(y,x); always symmetric, and for quasi-symmetric G
// satisfies (1 + 1/a) G <= G^s <= (1 + a) G entrywise.
Kernel symmetrize(const Kernel& kernel);

// Green modifier g(x) = min{1, G(x, x0)} with pole x0.
Modifier green_modifier(const Kernel& kernel, int x0);

// G~(x,y) = G(x,y) / (m(x) m(y)); symmetric iff the input is.
Kernel modify(const Kernel& kernel, const Modifier& modifier);

// Worst quadruple ratio of d(x,y) d(x0,z) against the Ptolemy bracket
// d(x,z) d(y,x0) + d(x0,x) d(z,y); for a quasi-metric d the ratio is
// at most 4 kappa^2.
struct PtolemyReport {
    double worst_ratio = 0.0;
    int x0 = 0, x = 0, y = 0, z = 0;  // witness quadruple
    double bound = 0.0;               // 4 kappa^2
    bool pass = false;
};

PtolemyReport ptolemy_check(const Kernel& kernel);

// Certifies quasi-metric modifiability with the Green modifier at pole x0:
// computes kappa~ of the g-modified kernel exactly and compares against
// the guaranteed 4 kappa^2 (hence WMP constant 2 kappa~ <= 8 kappa^2).
struct ModifiabilityCertificate {
    int pole = 0;
    double kappa_base = 0.0;
    double kappa_modified = 0.0;
    double bound = 0.0;        // 4 kappa^2
    double wmp_modified = 0.0; // 2 kappa~
    double wmp_bound = 0.0;    // 8 kappa^2
    bool pass = false;
};

ModifiabilityCertificate modifiability_certificate(const Kernel& kernel, int x0);

// ---- file I/O ----

// CSV: N rows x N columns of decimal reals, no header.
Kernel kernel_from_csv(const std::string& path);
void kernel_to_csv(const Kernel& kernel, const std::string& path);

struct KernelMeta {
    std::string provenance;
    std::optional<double> alpha;
    std::optional<double> n;
    std::optional<std::string> diagonal_rule;
};

KernelMeta kernel_meta_from_file(const std::string& path);
void kernel_meta_to_file(const KernelMeta& meta, const std::string& path);

} // namespace sublin
