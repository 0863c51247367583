#include "percolab/criterion.hpp"

#include <algorithm>

#include "json.hpp"

namespace percolab {

Rational default_width_tol()
{
    return Rational(1, 1u << 30);
}

Rational simplest_rational_between(const Rational& lo, const Rational& hi)
{
    Integer fl;
    mpz_fdiv_q(fl.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
    if (Rational(fl) == lo) {
        return lo;
    }
    Integer fh;
    mpz_fdiv_q(fh.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
    if (fl < fh) {
        return Rational(fl + 1);
    }
    // same integer part: recurse on the reciprocals of the fractional parts
    const Rational a = hi - fl;
    const Rational b = lo - fl;
    Rational inner = simplest_rational_between(1 / a, 1 / b);
    return Rational(fl) + 1 / inner;
}

PstarInterval pstar(const RationalPolynomial& phi, const Rational& width_tol)
{
    if (width_tol <= 0) {
        throw ConfigError("width tolerance must be positive");
    }
    if (!(phi(0) < 1) || phi(1) < 1) {
        throw ConfigError("phi must be below 1 at p=0 and at least 1 at p=1");
    }
    PstarInterval out{0, 1, std::nullopt};
    while (out.hi - out.lo > width_tol) {
        Rational mid = (out.lo + out.hi) / 2;
        if (phi(mid) < 1) {
            out.lo = mid;
        } else {
            out.hi = mid;
        }
    }
    Rational candidate = simplest_rational_between(out.lo, out.hi);
    if (phi(candidate) == 1) {
        out.exact_root = candidate;
    }
    return out;
}

PstarInterval pstar(const VertexSet& s, const Rational& width_tol, const EnumerationBudget& budget)
{
    if (width_tol <= 0) {
        throw ConfigError("width tolerance must be positive");
    }
    return pstar(phi_exact(s, budget), width_tol);
}

namespace {

PcLowerBound make_bound(const VertexSet& witness, const RationalPolynomial& phi, const PstarInterval& interval)
{
    PcLowerBound b{interval.lo, witness, phi(interval.lo), interval.lo, phi(interval.lo), "exact"};
    if (interval.exact_root) {
        b.bound = *interval.exact_root;
        b.phi_at_bound = phi(b.bound);
    }
    return b;
}

}  // namespace

PcLadder pc_lower_bound(int dim, int k_max, const EnumerationBudget& budget, const Rational& width_tol,
                        const std::vector<VertexSet>& extra_witnesses)
{
    if (k_max < 0) {
        throw ConfigError("k_max must be non-negative");
    }
    if (width_tol <= 0) {
        throw ConfigError("width tolerance must be positive");
    }
    std::vector<LadderEntry> entries;
    std::optional<PcLowerBound> best;
    auto consider = [&](int k, const VertexSet& s) {
        LadderEntry entry;
        entry.k = k;
        try {
            RationalPolynomial phi = phi_exact(s, budget);
            entry.interval = pstar(phi, width_tol);
            PcLowerBound b = make_bound(s, phi, *entry.interval);
            if (!best || b.bound > best->bound) {
                best = std::move(b);
            }
        } catch (const BudgetExceeded& e) {
            entry.error = e.what();
        }
        entries.push_back(std::move(entry));
        return entries.back().error.empty();
    };
    for (int k = 0; k <= k_max; ++k) {
        if (!consider(k, make_box(dim, k).set())) {
            break;
        }
    }
    for (const auto& s : extra_witnesses) {
        if (s.dim() != dim) {
            throw ConfigError("witness set dimension does not match --dim");
        }
        consider(-1, s);
    }
    // the box of radius 0 is always enumerable, so best is set
    return PcLadder{std::move(entries), std::move(*best)};
}

bool verify_pc_lower_bound(const PcLowerBound& b, const EnumerationBudget& budget)
{
    const RationalPolynomial phi = phi_exact(b.witness, budget);
    if (b.certified_below < 0 || b.certified_below > b.bound || b.bound > 1) {
        return false;
    }
    if (phi(b.certified_below) != b.phi_at_certified || !(b.phi_at_certified < 1)) {
        return false;
    }
    if (phi(b.bound) != b.phi_at_bound || b.phi_at_bound > 1) {
        return false;
    }
    // phi is nondecreasing and not identically 1, so phi(bound) <= 1 leaves
    // phi < 1 on a left neighbourhood of bound
    return phi != RationalPolynomial::constant(1);
}

Rational DecayCertificate::bound(int k) const
{
    if (k < 1) {
        throw ConfigError("decay bound is stated for k >= 1");
    }
    return pow(phi, static_cast<unsigned>(k - 1));
}

DecayCertificate decay_certificate(int dim, const Rational& p, const VertexSet& s, const EnumerationBudget& budget)
{
    if (s.dim() != dim) {
        throw ConfigError("witness set dimension does not match");
    }
    if (p < 0 || p > 1) {
        throw ConfigError("p must lie in [0,1]");
    }
    Rational phi = phi_exact(s, budget)(p);
    if (!(phi < 1)) {
        throw CertificateRefused("phi_p(S) = " + fraction_string(phi) + " is not below 1; no decay certificate",
                                 phi);
    }
    return DecayCertificate{s, p, phi, static_cast<int>(s.radius()) + 1};
}

bool verify_decay_certificate(const DecayCertificate& c, const EnumerationBudget& budget)
{
    if (c.L != static_cast<int>(c.set.radius()) + 1 || c.p < 0 || c.p > 1) {
        return false;
    }
    const Rational phi = phi_exact(c.set, budget)(c.p);
    return phi == c.phi && phi < 1;
}

MeanFieldFloor meanfield_floor(const Rational& p, const Rational& pc_ref)
{
    if (pc_ref < 0 || pc_ref >= 1) {
        throw ConfigError("reference critical point must lie in [0,1)");
    }
    if (p > 1) {
        throw ConfigError("p must not exceed 1");
    }
    if (p <= pc_ref) {
        throw ConfigError("mean-field floor needs p > pc_ref (p = " + fraction_string(p) +
                          ", pc_ref = " + fraction_string(pc_ref) + "); the bound is vacuous otherwise");
    }
    return MeanFieldFloor{p, pc_ref, (p - pc_ref) / (p * (1 - pc_ref))};
}

std::vector<PhiSequenceEntry> phi_sequence(int dim, const Rational& p, int k_max, PhiMethod method,
                                           const SampleSpec& spec, const EnumerationBudget& budget)
{
    if (k_max < 0) {
        throw ConfigError("k_max must be non-negative");
    }
    if (p < 0 || p > 1) {
        throw ConfigError("p must lie in [0,1]");
    }
    std::vector<PhiSequenceEntry> out;
    SampleSpec mc = spec;
    mc.p = p.get_d();
    for (int k = 0; k <= k_max; ++k) {
        const Box box = make_box(dim, k);
        PhiSequenceEntry entry;
        entry.k = k;
        if (method == PhiMethod::exact) {
            entry.exact = phi_exact(box.set(), budget)(p);
        } else {
            entry.estimate = estimate_phi(box.set(), mc);
        }
        out.push_back(std::move(entry));
    }
    return out;
}

namespace {

nlohmann::ordered_json witness_json(const VertexSet& s)
{
    auto arr = nlohmann::ordered_json::array();
    for (const auto& v : s.vertices()) {
        arr.push_back(v.coords);
    }
    return arr;
}

VertexSet witness_from_json(const nlohmann::json& j, int dim)
{
    if (!j.is_array()) {
        throw ConfigError("certificate witness must be an array of coordinate arrays");
    }
    std::vector<Vertex> vs;
    for (const auto& row : j) {
        vs.emplace_back(row.get<std::vector<Coord>>());
    }
    return VertexSet(dim, std::move(vs));
}

Rational fraction_field(const nlohmann::json& j, const char* key)
{
    if (!j.contains(key) || !j[key].is_string()) {
        throw ConfigError(std::string("certificate field '") + key + "' must be a fraction string");
    }
    return parse_rational(j[key].get<std::string>());
}

}  // namespace

std::string to_json(const PcLowerBound& b)
{
    nlohmann::ordered_json j;
    j["kind"] = "pc_lower_bound";
    j["dim"] = b.witness.dim();
    j["method"] = b.method;
    j["bound"] = fraction_string(b.bound);
    j["phi_at_bound"] = fraction_string(b.phi_at_bound);
    j["certified_below"] = fraction_string(b.certified_below);
    j["phi_at_certified"] = fraction_string(b.phi_at_certified);
    j["witness"] = witness_json(b.witness);
    return j.dump();
}

std::string to_json(const DecayCertificate& c)
{
    nlohmann::ordered_json j;
    j["kind"] = "decay_certificate";
    j["dim"] = c.set.dim();
    j["p"] = fraction_string(c.p);
    j["phi"] = fraction_string(c.phi);
    j["L"] = c.L;
    j["witness"] = witness_json(c.set);
    return j.dump();
}

CertificateCheck verify_certificate_json(const std::string& text, const EnumerationBudget& budget)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("malformed certificate: ") + e.what());
    }
    if (!j.is_object() || !j.contains("kind") || !j.contains("dim") || !j.contains("witness")) {
        throw ConfigError("certificate needs kind, dim and witness fields");
    }
    CertificateCheck check;
    try {
        check.kind = j["kind"].get<std::string>();
        const int dim = j["dim"].get<int>();
        VertexSet witness = witness_from_json(j["witness"], dim);
        if (check.kind == "pc_lower_bound") {
            PcLowerBound b{fraction_field(j, "bound"),          witness,
                           fraction_field(j, "phi_at_bound"),   fraction_field(j, "certified_below"),
                           fraction_field(j, "phi_at_certified"), "exact"};
            check.valid = verify_pc_lower_bound(b, budget);
            check.detail = "p_c >= " + fraction_string(b.bound);
        } else if (check.kind == "decay_certificate") {
            DecayCertificate c{witness, fraction_field(j, "p"), fraction_field(j, "phi"), j.at("L").get<int>()};
            check.valid = verify_decay_certificate(c, budget);
            check.detail = "phi = " + fraction_string(c.phi) + ", L = " + std::to_string(c.L);
        } else {
            throw ConfigError("unknown certificate kind '" + check.kind + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed certificate: ") + e.what());
    }
    return check;
}

}  // namespace percolab
