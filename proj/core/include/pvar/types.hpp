#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace pvar {

using complexd = std::complex<double>;

enum class Field { Real, Complex };

inline const char* field_name(Field f) {
    return f == Field::Real ? "real" : "complex";
}

/// Variation exponent p with 1 <= p < infinity.
class PExponent {
  public:
    explicit PExponent(double p) : p_(p) {
        if (!(std::isfinite(p) && p >= 1.0))
            throw std::invalid_argument("p exponent must be finite and >= 1, got " +
                                        std::to_string(p));
    }
    double value() const { return p_; }

  private:
    double p_;
};

/// a^p for a >= 0, with 0^p = 0 and exact shortcuts for p = 1, 2.
/// All variation sums go through this so that independently computed
/// routes (DP, enumeration) round identically per term.
inline double pow_abs(double a, double p) {
    if (a == 0.0) return 0.0;
    if (p == 1.0) return a;
    if (p == 2.0) return a * a;
    return std::pow(a, p);
}

inline double abs_pow(const complexd& z, double p) { return pow_abs(std::abs(z), p); }

inline bool is_finite(const complexd& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace pvar
