#pragma once

#include <stdexcept>
#include <string>

namespace sublin {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// ---- space ----
class ZeroSigma : public Error {
public:
    ZeroSigma() : Error("sigma measure has zero total mass") {}
};

class LengthMismatch : public Error {
public:
    explicit LengthMismatch(const std::string& what) : Error(what) {}
};

// ---- kernels ----
class NonPositiveEntry : public Error {
public:
    NonPositiveEntry(int row, int col)
        : Error("kernel entry (" + std::to_string(row + 1) + "," +
                std::to_string(col + 1) + ") is not strictly positive") {}
};

class NonFiniteEntry : public Error {
public:
    NonFiniteEntry(int row, int col)
        : Error("kernel entry (" + std::to_string(row + 1) + "," +
                std::to_string(col + 1) + ") is not finite") {}
};

class DuplicatePoints : public Error {
public:
    DuplicatePoints(int a, int b)
        : Error("points " + std::to_string(a + 1) + " and " + std::to_string(b + 1) +
                " coincide") {}
};

class BadAlpha : public Error {
public:
    explicit BadAlpha(const std::string& what) : Error(what) {}
};

class NotSymmetric : public Error {
public:
    explicit NotSymmetric(const std::string& what = "kernel is not symmetric")
        : Error(what) {}
};

// ---- potentials / solver ----
class BadExponent : public Error {
public:
    explicit BadExponent(double q)
        : Error("exponent q=" + std::to_string(q) + " outside [1e-3, 1-1e-3]") {}
};

class SeedNotSubsolution : public Error {
public:
    explicit SeedNotSubsolution(const std::string& what) : Error(what) {}
};

class GapStagnation : public Error {
public:
    explicit GapStagnation(const std::string& what) : Error(what) {}
};

class NotQuasiMetricModified : public Error {
public:
    explicit NotQuasiMetricModified(const std::string& what) : Error(what) {}
};

// ---- capacity ----
class SubsetLimitExceeded : public Error {
public:
    SubsetLimitExceeded(int size, int limit)
        : Error("set of size " + std::to_string(size) + " exceeds exact-mode subset limit " +
                std::to_string(limit) + "; use bracket mode") {}
};

class LpNumericalFailure : public Error {
public:
    explicit LpNumericalFailure(const std::string& what) : Error(what) {}
};

// ---- cli ----
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

} // namespace sublin
