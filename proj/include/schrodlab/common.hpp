#pragma once

// Shared error types and small numeric helpers.

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace schrodlab {

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& m) : std::runtime_error(m) {}
};
struct DegenerateCubeError : std::runtime_error {
    explicit DegenerateCubeError(const std::string& m) : std::runtime_error(m) {}
};
struct ResolutionError : std::runtime_error {
    explicit ResolutionError(const std::string& m) : std::runtime_error(m) {}
};
struct SizeLimitError : std::runtime_error {
    explicit SizeLimitError(const std::string& m) : std::runtime_error(m) {}
};
struct AlgorithmError : std::runtime_error {
    explicit AlgorithmError(const std::string& m) : std::runtime_error(m) {}
};
struct SingularOperatorError : std::runtime_error {
    explicit SingularOperatorError(const std::string& m) : std::runtime_error(m) {}
};
struct UnsupportedError : std::runtime_error {
    explicit UnsupportedError(const std::string& m) : std::runtime_error(m) {}
};
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Volume and surface coefficients of the unit ball in R^n, n = 1,2,3.
inline double unit_ball_volume(int n) {
    switch (n) {
        case 1: return 2.0;
        case 2: return M_PI;
        case 3: return 4.0 * M_PI / 3.0;
    }
    throw UnsupportedError("dimension must be 1, 2 or 3");
}
inline double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

// log(sum(exp(x_i))) without overflow; empty input gives -inf.
inline double log_sum_exp(std::span<const double> xs) {
    double m = -kInf;
    for (double x : xs) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
}

// Streaming variant: accumulate (max, sum of exp shifted by running max).
class LogSumExpAcc {
  public:
    void add(double x) {
        if (x == -kInf) return;
        if (x <= max_) {
            sum_ += std::exp(x - max_);
        } else {
            sum_ = sum_ * std::exp(max_ - x) + 1.0;
            max_ = x;
        }
        ++n_;
    }
    double value() const { return n_ == 0 ? -kInf : max_ + std::log(sum_); }
    std::size_t count() const { return n_; }

  private:
    double max_ = -kInf;
    double sum_ = 0.0;
    std::size_t n_ = 0;
};

inline std::vector<double> log_spaced(double lo, double hi, int count) {
    if (count < 1 || lo <= 0 || hi <= lo) throw ConfigError("bad log-spaced range");
    std::vector<double> out(count);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < count; ++i)
        out[i] = std::exp(llo + (lhi - llo) * (count == 1 ? 0.0 : double(i) / (count - 1)));
    return out;
}

inline std::vector<double> linear_spaced(double lo, double hi, int count) {
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i)
        out[i] = lo + (hi - lo) * (count == 1 ? 0.0 : double(i) / (count - 1));
    return out;
}

// Least-squares slope of y against x.
inline double fit_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw ConfigError("slope fit needs >= 2 points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
    mx /= x.size(); my /= y.size();
    double num = 0, den = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    if (den == 0) throw AlgorithmError("degenerate slope fit");
    return num / den;
}

}  // namespace schrodlab
