#pragma once

// Shared basics: error types, vertex ids, and a couple of numeric helpers
// used across the library.

#include <cstdint>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lmotif {

using VertexId = std::uint32_t;

// Domain errors: bad inputs, violated preconditions (exit code 1 territory).
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed files / CLI misuse (exit code 2 territory when thrown from parsers).
class ParseError : public Error {
  public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Streaming log-sum-exp: accumulates log(sum_i exp(x_i)) without overflow.
class LogSumExp {
  public:
    void add(double log_term) {
        if (log_term == kNegInf) return;
        if (log_term <= max_) {
            sum_ += std::exp(log_term - max_);
        } else {
            if (max_ != kNegInf) sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
            else sum_ = 1.0;
            max_ = log_term;
        }
    }
    bool empty() const { return max_ == kNegInf; }
    double value() const { return empty() ? kNegInf : max_ + std::log(sum_); }

  private:
    double max_ = kNegInf;
    double sum_ = 0.0;
};

// Uniform double in [0,1) from a 64-bit engine draw. std::uniform_real_distribution
// is implementation-defined, which would break bit-for-bit reproducibility of
// seeded studies across toolchains; this mapping is fully specified.
template <class Engine>
inline double next_unit_double(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

}  // namespace lmotif
