#include "percolab/polynomial.hpp"

#include <algorithm>
#include <cctype>

#include "json.hpp"

#include "percolab/errors.hpp"

namespace percolab {

namespace {

bool all_digits(std::string_view s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

Integer parse_integer(std::string_view s, std::string_view whole)
{
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) {
        throw ConfigError("cannot parse number '" + std::string(whole) + "'");
    }
    Integer z(std::string(s), 10);
    return negative ? Integer(-z) : z;
}

}  // namespace

Rational parse_rational(std::string_view text)
{
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
        text.remove_prefix(1);
    }
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
        text.remove_suffix(1);
    }
    if (text.empty()) {
        throw ConfigError("empty number");
    }

    if (auto caret = text.find('^'); caret != std::string_view::npos) {
        Integer base = parse_integer(text.substr(0, caret), text);
        Integer exp = parse_integer(text.substr(caret + 1), text);
        if (base == 0 || abs(exp) > 4096) {
            throw ConfigError("unsupported power '" + std::string(text) + "'");
        }
        Rational r = pow(Rational(base), static_cast<unsigned>(Integer(abs(exp)).get_ui()));
        if (exp < 0) {
            r = 1 / r;
        }
        return r;
    }

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Integer num = parse_integer(text.substr(0, slash), text);
        Integer den = parse_integer(text.substr(slash + 1), text);
        if (den == 0) {
            throw ConfigError("zero denominator in '" + std::string(text) + "'");
        }
        Rational r(num, den);
        r.canonicalize();
        return r;
    }

    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view head = text.substr(0, dot);
        std::string_view frac = text.substr(dot + 1);
        bool negative = !head.empty() && head.front() == '-';
        if (!head.empty() && (head.front() == '-' || head.front() == '+')) {
            head.remove_prefix(1);
        }
        if ((!head.empty() && !all_digits(head)) || (!frac.empty() && !all_digits(frac)) ||
            (head.empty() && frac.empty())) {
            throw ConfigError("cannot parse number '" + std::string(text) + "'");
        }
        Integer num(std::string(head.empty() ? "0" : head) + std::string(frac), 10);
        Integer den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
        Rational r(negative ? Integer(-num) : num, den);
        r.canonicalize();
        return r;
    }

    return Rational(parse_integer(text, text));
}

std::string fraction_string(const Rational& q)
{
    Rational c = q;
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational pow(const Rational& base, unsigned exponent)
{
    Rational out;
    mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
    mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
    out.canonicalize();
    return out;
}

RationalPolynomial::RationalPolynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs))
{
    for (auto& c : coeffs_) {
        c.canonicalize();
    }
    trim();
}

RationalPolynomial RationalPolynomial::constant(const Rational& c)
{
    return RationalPolynomial({c});
}

RationalPolynomial RationalPolynomial::monomial(const Rational& c, unsigned k)
{
    std::vector<Rational> coeffs(k + 1);
    coeffs[k] = c;
    return RationalPolynomial(std::move(coeffs));
}

RationalPolynomial RationalPolynomial::from_config_counts(const std::vector<Integer>& counts)
{
    if (counts.empty()) {
        return {};
    }
    const std::size_t m = counts.size() - 1;
    // p^k (1-p)^(m-k) = sum_j C(m-k, j) (-1)^j p^(k+j)
    std::vector<Integer> acc(m + 1);
    Integer binom;
    for (std::size_t k = 0; k <= m; ++k) {
        if (counts[k] == 0) {
            continue;
        }
        for (std::size_t j = 0; k + j <= m; ++j) {
            mpz_bin_uiui(binom.get_mpz_t(), m - k, j);
            if (j % 2 == 0) {
                acc[k + j] += counts[k] * binom;
            } else {
                acc[k + j] -= counts[k] * binom;
            }
        }
    }
    std::vector<Rational> coeffs;
    coeffs.reserve(acc.size());
    for (auto& a : acc) {
        coeffs.emplace_back(a);
    }
    return RationalPolynomial(std::move(coeffs));
}

Rational RationalPolynomial::operator()(const Rational& p) const
{
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * p + *it;
    }
    return acc;
}

double RationalPolynomial::evaluate(double p) const
{
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * p + it->get_d();
    }
    return acc;
}

RationalPolynomial RationalPolynomial::derivative() const
{
    if (coeffs_.size() <= 1) {
        return {};
    }
    std::vector<Rational> out(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) {
        out[k - 1] = coeffs_[k] * static_cast<unsigned long>(k);
    }
    return RationalPolynomial(std::move(out));
}

RationalPolynomial& RationalPolynomial::operator+=(const RationalPolynomial& o)
{
    if (o.coeffs_.size() > coeffs_.size()) {
        coeffs_.resize(o.coeffs_.size());
    }
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) {
        coeffs_[k] += o.coeffs_[k];
    }
    trim();
    return *this;
}

RationalPolynomial& RationalPolynomial::operator-=(const RationalPolynomial& o)
{
    if (o.coeffs_.size() > coeffs_.size()) {
        coeffs_.resize(o.coeffs_.size());
    }
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) {
        coeffs_[k] -= o.coeffs_[k];
    }
    trim();
    return *this;
}

RationalPolynomial& RationalPolynomial::operator*=(const RationalPolynomial& o)
{
    if (is_zero() || o.is_zero()) {
        coeffs_.clear();
        return *this;
    }
    std::vector<Rational> out(coeffs_.size() + o.coeffs_.size() - 1);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j) {
            out[i + j] += coeffs_[i] * o.coeffs_[j];
        }
    }
    coeffs_ = std::move(out);
    trim();
    return *this;
}

RationalPolynomial& RationalPolynomial::operator*=(const Rational& c)
{
    for (auto& a : coeffs_) {
        a *= c;
    }
    trim();
    return *this;
}

std::string RationalPolynomial::to_json() const
{
    nlohmann::ordered_json j;
    j["coeffs"] = nlohmann::json::array();
    for (const auto& c : coeffs_) {
        j["coeffs"].push_back(fraction_string(c));
    }
    return j.dump();
}

RationalPolynomial RationalPolynomial::from_json(std::string_view json)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("malformed polynomial JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_array()) {
        throw ConfigError("polynomial JSON needs a \"coeffs\" array");
    }
    std::vector<Rational> coeffs;
    for (const auto& c : j["coeffs"]) {
        if (!c.is_string()) {
            throw ConfigError("polynomial coefficients must be fraction strings");
        }
        coeffs.push_back(parse_rational(c.get<std::string>()));
    }
    return RationalPolynomial(std::move(coeffs));
}

std::string RationalPolynomial::to_string() const
{
    if (is_zero()) {
        return "0";
    }
    std::string out;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        const Rational& c = coeffs_[k];
        if (c == 0) {
            continue;
        }
        Rational mag = abs(c);
        if (out.empty()) {
            out += c < 0 ? "-" : "";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        bool unit = mag == 1 && k > 0;
        if (!unit) {
            out += mag.get_str();
        }
        if (k > 0) {
            out += unit ? "p" : "*p";
            if (k > 1) {
                out += "^" + std::to_string(k);
            }
        }
    }
    return out;
}

void RationalPolynomial::trim()
{
    while (!coeffs_.empty() && coeffs_.back() == 0) {
        coeffs_.pop_back();
    }
}

}  // namespace percolab
