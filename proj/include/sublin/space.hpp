#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sublin/errors.hpp"

namespace sublin {

// Nonnegative weight vector over the points of a finite space.
class Measure {
public:
    Measure() = default;
    explicit Measure(std::vector<double> weights);

    static Measure zero(int n) { return Measure(std::vector<double>(n, 0.0)); }
    static Measure dirac(int n, int at, double mass = 1.0);

    int size() const { return static_cast<int>(w_.size()); }
    double operator[](int i) const { return w_[i]; }
    const std::vector<double>& weights() const { return w_; }
    double total() const { return total_; }

    // Total mass on an index set.
    double mass(const std::vector<int>& set) const;

    // Indices with strictly positive weight.
    std::vector<int> support() const;

    Measure scaled(double t) const;

private:
    std::vector<double> w_;
    double total_ = 0.0;
};

// Super-level decomposition of one kernel row: the distinct values
// g_1 > g_2 > ... > g_m of G(x,.) together with the nested sets
// B_j = { y : G(x,y) >= g_j }.  For r in (1/g_j, 1/g_{j+1}] the ball
// B(x,r) = { y : G(x,y) > 1/r } equals B_j, so every radial integral
// over r is an exact finite step sum.
struct BallDecomposition {
    int center = 0;
    std::vector<double> levels;  // strictly decreasing, positive
    std::vector<int> order;      // all points, sorted by decreasing G(center,.)
    std::vector<int> counts;     // |B_j|; counts.back() == n

    int level_count() const { return static_cast<int>(levels.size()); }

    // Materializes B_j (1-based level index j in [1, m]) as a sorted index set.
    std::vector<int> ball(int j) const;

    // Index j of the level with B(center,r) == B_j, or 0 if the ball is empty.
    int level_of_radius(double r) const;

    // B(center, r) as a sorted index set (empty when r <= 1/levels[0]).
    std::vector<int> ball_at_radius(double r) const;
};

// Finite point set with a base measure sigma and optional mu / data f.
class Space {
public:
    // coords empty => abstract point set of the given size.
    Space(int n_points, std::vector<double> sigma_weights,
          std::optional<std::vector<double>> mu_weights = std::nullopt,
          std::optional<std::vector<double>> f_values = std::nullopt,
          std::vector<std::vector<double>> coords = {},
          std::vector<std::string> labels = {});

    int size() const { return n_; }
    const std::vector<std::vector<double>>& coords() const { return coords_; }
    const std::vector<std::string>& labels() const { return labels_; }
    bool has_coords() const { return !coords_.empty(); }
    int dimension() const { return coords_.empty() ? 0 : static_cast<int>(coords_[0].size()); }

    const Measure& sigma() const { return sigma_; }
    const std::optional<Measure>& mu() const { return mu_; }
    const std::optional<std::vector<double>>& f() const { return f_; }

private:
    int n_;
    std::vector<std::vector<double>> coords_;
    std::vector<std::string> labels_;
    Measure sigma_;
    std::optional<Measure> mu_;
    std::optional<std::vector<double>> f_;
};

// CSV ingestion: one row per point, header required.  Recognized columns:
// x1..xd (optional coordinates), sigma, mu (optional), f (optional),
// label (optional).  Any other column name is an error.
Space space_from_csv(const std::string& path);

void space_to_csv(const Space& space, const std::string& path);

} // namespace sublin
