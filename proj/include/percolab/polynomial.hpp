#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace percolab {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "a/b", an integer, a decimal literal ("0.35", "-1.5") or a power
/// of two ("2^-30"). Decimals are read as their exact decimal value.
Rational parse_rational(std::string_view text);

/// Always "num/den", also for integers ("1/1").
std::string fraction_string(const Rational& q);

/// Power of a rational with a non-negative exponent.
Rational pow(const Rational& base, unsigned exponent);

/// Polynomial in p with exact rational coefficients, index = degree.
/// Trailing zero coefficients are always trimmed; the zero polynomial has
/// no coefficients.
class RationalPolynomial {
public:
    RationalPolynomial() = default;
    explicit RationalPolynomial(std::vector<Rational> coeffs);

    static RationalPolynomial constant(const Rational& c);
    /// The monomial c * p^k.
    static RationalPolynomial monomial(const Rational& c, unsigned k);
    /// sum_k counts[k] p^k (1-p)^(m-k), m = counts.size() - 1: the
    /// probability of an event given the number of configurations with k
    /// open edges among m.
    static RationalPolynomial from_config_counts(const std::vector<Integer>& counts);

    const std::vector<Rational>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    /// Degree; -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    Rational coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Rational(0); }

    Rational operator()(const Rational& p) const;
    double evaluate(double p) const;
    RationalPolynomial derivative() const;

    RationalPolynomial& operator+=(const RationalPolynomial& o);
    RationalPolynomial& operator-=(const RationalPolynomial& o);
    RationalPolynomial& operator*=(const RationalPolynomial& o);
    RationalPolynomial& operator*=(const Rational& c);

    friend RationalPolynomial operator+(RationalPolynomial a, const RationalPolynomial& b) { return a += b; }
    friend RationalPolynomial operator-(RationalPolynomial a, const RationalPolynomial& b) { return a -= b; }
    friend RationalPolynomial operator*(RationalPolynomial a, const RationalPolynomial& b) { return a *= b; }
    friend RationalPolynomial operator*(RationalPolynomial a, const Rational& c) { return a *= c; }
    bool operator==(const RationalPolynomial& o) const { return coeffs_ == o.coeffs_; }

    /// {"coeffs": ["num/den", ...]} in ascending degree.
    std::string to_json() const;
    static RationalPolynomial from_json(std::string_view json);
    /// Human readable, e.g. "2*p^2 - p^4".
    std::string to_string() const;

private:
    void trim();

    std::vector<Rational> coeffs_;
};

}  // namespace percolab
