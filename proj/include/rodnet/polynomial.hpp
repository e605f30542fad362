#pragma once

#include <cstddef>
#include <vector>

namespace rodnet {

/// Dense univariate polynomial with coefficients in ascending degree.
/// The zero polynomial has an empty coefficient list; trailing zero
/// coefficients are trimmed on construction.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs);

    static Polynomial zero() { return Polynomial(); }
    static Polynomial constant(double c) { return Polynomial({c}); }

    /// Degree, or -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<double>& coeffs() const { return coeffs_; }

    /// Coefficient of s^k (0 beyond the stored degree).
    double coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : 0.0; }

    double operator()(double s) const;

    Polynomial operator+(const Polynomial& other) const;
    Polynomial operator-(const Polynomial& other) const;
    Polynomial operator*(double scale) const;

private:
    std::vector<double> coeffs_;
};

/// d/ds p.
Polynomial differentiate(const Polynomial& p);

/// Repeated differentiation.
Polynomial differentiate(const Polynomial& p, int times);

/// Antiderivative with integration constant 0.
Polynomial antidifferentiate(const Polynomial& p);

/// Exact closed-form evaluation of the definite integral of p*q over [a, b].
double integrate_product(const Polynomial& p, const Polynomial& q, double a, double b);

} // namespace rodnet
