#include "rodnet/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace rodnet {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    while (!coeffs_.empty() && coeffs_.back() == 0.0) {
        coeffs_.pop_back();
    }
}

double Polynomial::operator()(double s) const {
    double value = 0.0;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
        value = value * s + coeffs_[i];
    }
    return value;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
    std::vector<double> sum(std::max(coeffs_.size(), other.coeffs_.size()), 0.0);
    for (std::size_t i = 0; i < sum.size(); ++i) {
        sum[i] = coeff(i) + other.coeff(i);
    }
    return Polynomial(std::move(sum));
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
    return *this + other * -1.0;
}

Polynomial Polynomial::operator*(double scale) const {
    std::vector<double> scaled = coeffs_;
    for (double& c : scaled) {
        c *= scale;
    }
    return Polynomial(std::move(scaled));
}

Polynomial differentiate(const Polynomial& p) {
    if (p.degree() < 1) {
        return Polynomial::zero();
    }
    std::vector<double> d(p.degree(), 0.0);
    for (std::size_t k = 1; k < p.coeffs().size(); ++k) {
        d[k - 1] = p.coeffs()[k] * static_cast<double>(k);
    }
    return Polynomial(std::move(d));
}

Polynomial differentiate(const Polynomial& p, int times) {
    Polynomial d = p;
    for (int i = 0; i < times; ++i) {
        d = differentiate(d);
    }
    return d;
}

Polynomial antidifferentiate(const Polynomial& p) {
    if (p.is_zero()) {
        return Polynomial::zero();
    }
    std::vector<double> a(p.coeffs().size() + 1, 0.0);
    for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
        a[k + 1] = p.coeffs()[k] / static_cast<double>(k + 1);
    }
    return Polynomial(std::move(a));
}

double integrate_product(const Polynomial& p, const Polynomial& q, double a, double b) {
    if (p.is_zero() || q.is_zero()) {
        return 0.0;
    }
    // Convolve coefficients, pairing (i, k-i) with (k-i, i) so the result is
    // bit-identical under argument swap, then integrate monomials.
    const std::size_t n = std::max(p.coeffs().size(), q.coeffs().size());
    std::vector<double> prod(2 * n - 1, 0.0);
    for (std::size_t k = 0; k < prod.size(); ++k) {
        const std::size_t lo = k >= n ? k - n + 1 : 0;
        double cell = 0.0;
        for (std::size_t i = lo; 2 * i <= k; ++i) {
            const std::size_t j = k - i;
            if (i == j) {
                cell += p.coeff(i) * q.coeff(i);
            } else {
                cell += p.coeff(i) * q.coeff(j) + p.coeff(j) * q.coeff(i);
            }
        }
        prod[k] = cell;
    }
    double integral = 0.0;
    double pa = a;
    double pb = b;
    for (std::size_t k = 0; k < prod.size(); ++k) {
        integral += prod[k] * (pb - pa) / static_cast<double>(k + 1);
        pa *= a;
        pb *= b;
    }
    return integral;
}

} // namespace rodnet
