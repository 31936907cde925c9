#include "sublin/space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sublin/accum.hpp"

namespace sublin {

Measure::Measure(std::vector<double> weights) : w_(std::move(weights)) {
    Accum acc;
    for (std::size_t i = 0; i < w_.size(); ++i) {
        if (!std::isfinite(w_[i]) || w_[i] < 0.0)
            throw Error("measure weight " + std::to_string(i + 1) + " is negative or non-finite");
        acc.add(w_[i]);
    }
    total_ = acc.value();
}

Measure Measure::dirac(int n, int at, double mass) {
    std::vector<double> w(n, 0.0);
    w[at] = mass;
    return Measure(std::move(w));
}

double Measure::mass(const std::vector<int>& set) const {
    Accum acc;
    for (int i : set) acc.add(w_[i]);
    return acc.value();
}

std::vector<int> Measure::support() const {
    std::vector<int> s;
    for (int i = 0; i < size(); ++i)
        if (w_[i] > 0.0) s.push_back(i);
    return s;
}

Measure Measure::scaled(double t) const {
    std::vector<double> w(w_);
    for (double& x : w) x *= t;
    return Measure(std::move(w));
}

std::vector<int> BallDecomposition::ball(int j) const {
    std::vector<int> set(order.begin(), order.begin() + counts[j - 1]);
    std::sort(set.begin(), set.end());
    return set;
}

int BallDecomposition::level_of_radius(double r) const {
    if (r <= 0.0) return 0;
    // B(center,r) = B_j for the largest j with levels[j-1] > 1/r.
    double threshold = 1.0 / r;
    int j = 0;
    for (int k = 0; k < level_count(); ++k) {
        if (levels[k] > threshold)
            j = k + 1;
        else
            break;
    }
    return j;
}

std::vector<int> BallDecomposition::ball_at_radius(double r) const {
    int j = level_of_radius(r);
    if (j == 0) return {};
    return ball(j);
}

Space::Space(int n_points, std::vector<double> sigma_weights,
             std::optional<std::vector<double>> mu_weights,
             std::optional<std::vector<double>> f_values,
             std::vector<std::vector<double>> coords, std::vector<std::string> labels)
    : n_(n_points), coords_(std::move(coords)), labels_(std::move(labels)) {
    if (n_ < 1) throw Error("space needs at least one point");
    if (static_cast<int>(sigma_weights.size()) != n_)
        throw LengthMismatch("sigma has " + std::to_string(sigma_weights.size()) +
                             " weights for " + std::to_string(n_) + " points");
    sigma_ = Measure(std::move(sigma_weights));
    if (sigma_.total() <= 0.0) throw ZeroSigma();

    if (mu_weights) {
        if (static_cast<int>(mu_weights->size()) != n_)
            throw LengthMismatch("mu has " + std::to_string(mu_weights->size()) +
                                 " weights for " + std::to_string(n_) + " points");
        mu_ = Measure(std::move(*mu_weights));
    }
    if (f_values) {
        if (static_cast<int>(f_values->size()) != n_)
            throw LengthMismatch("f has " + std::to_string(f_values->size()) + " values for " +
                                 std::to_string(n_) + " points");
        for (std::size_t i = 0; i < f_values->size(); ++i)
            if (!std::isfinite((*f_values)[i]) || (*f_values)[i] < 0.0)
                throw Error("f value " + std::to_string(i + 1) + " is negative or non-finite");
        f_ = std::move(*f_values);
    }
    if (!coords_.empty()) {
        if (static_cast<int>(coords_.size()) != n_)
            throw LengthMismatch("coords rows do not match point count");
        std::size_t d = coords_[0].size();
        if (d < 1) throw Error("coordinate dimension must be >= 1");
        for (const auto& row : coords_)
            if (row.size() != d) throw LengthMismatch("coordinate rows have unequal dimension");
    }
    if (!labels_.empty() && static_cast<int>(labels_.size()) != n_)
        throw LengthMismatch("labels do not match point count");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim
        auto b = field.find_first_not_of(" \t\r");
        auto e = field.find_last_not_of(" \t\r");
        fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double parse_real(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error("cannot parse '" + s + "' as a real (" + where + ")");
    }
}

} // namespace

Space space_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open space csv '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw Error("space csv '" + path + "' is empty");
    auto header = split_csv_line(line);

    int sigma_col = -1, mu_col = -1, f_col = -1, label_col = -1;
    std::vector<std::pair<int, int>> coord_cols;  // (dimension index, column)
    for (int c = 0; c < static_cast<int>(header.size()); ++c) {
        const std::string& name = header[c];
        if (name == "sigma") sigma_col = c;
        else if (name == "mu") mu_col = c;
        else if (name == "f") f_col = c;
        else if (name == "label") label_col = c;
        else if (name.size() >= 2 && name[0] == 'x') {
            int d = 0;
            try { d = std::stoi(name.substr(1)); } catch (...) { d = 0; }
            if (d < 1) throw Error("unrecognized space csv column '" + name + "'");
            coord_cols.emplace_back(d - 1, c);
        } else {
            throw Error("unrecognized space csv column '" + name + "'");
        }
    }
    if (sigma_col < 0) throw Error("space csv '" + path + "' lacks a sigma column");
    std::sort(coord_cols.begin(), coord_cols.end());
    for (int d = 0; d < static_cast<int>(coord_cols.size()); ++d)
        if (coord_cols[d].first != d)
            throw Error("space csv coordinate columns must be x1..xd without gaps");

    std::vector<double> sigma, mu, f;
    std::vector<std::vector<double>> coords;
    std::vector<std::string> labels;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw Error("space csv row " + std::to_string(row) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(header.size()));
        std::string where = path + ":" + std::to_string(row);
        sigma.push_back(parse_real(fields[sigma_col], where));
        if (mu_col >= 0) mu.push_back(parse_real(fields[mu_col], where));
        if (f_col >= 0) f.push_back(parse_real(fields[f_col], where));
        if (label_col >= 0) labels.push_back(fields[label_col]);
        if (!coord_cols.empty()) {
            std::vector<double> pt;
            for (auto [d, c] : coord_cols) pt.push_back(parse_real(fields[c], where));
            coords.push_back(std::move(pt));
        }
    }
    if (sigma.empty()) throw Error("space csv '" + path + "' has no data rows");

    int n = static_cast<int>(sigma.size());
    return Space(n, std::move(sigma),
                 mu_col >= 0 ? std::optional<std::vector<double>>(std::move(mu)) : std::nullopt,
                 f_col >= 0 ? std::optional<std::vector<double>>(std::move(f)) : std::nullopt,
                 std::move(coords), std::move(labels));
}

void space_to_csv(const Space& space, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write space csv '" + path + "'");
    int d = space.dimension();
    for (int k = 1; k <= d; ++k) out << "x" << k << ",";
    out << "sigma";
    if (space.mu()) out << ",mu";
    if (space.f()) out << ",f";
    out << "\n";
    char buf[64];
    auto put = [&](double v, bool lead_comma) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        if (lead_comma) out << ",";
        out << buf;
    };
    for (int i = 0; i < space.size(); ++i) {
        bool first = true;
        for (int k = 0; k < d; ++k) { put(space.coords()[i][k], !first); first = false; }
        put(space.sigma()[i], !first);
        if (space.mu()) put((*space.mu())[i], true);
        if (space.f()) put((*space.f())[i], true);
        out << "\n";
    }
}

} // namespace sublin
