#pragma once

// Certified statements derived from phi_p(S): lower bounds on p_c, the
// per-set threshold where phi crosses 1, exponential-decay certificates and
// the mean-field floor.
//
// Any finite S containing the origin with phi_p(S) < 1 proves p <= p_c.
// phi_p(S) is a polynomial, nondecreasing on [0,1], with phi_0 = 0 and
// phi_1 = |boundary edges of S| >= 1, so the crossing point is bracketed by
// exact bisection.

#include <optional>
#include <string>
#include <vector>

#include "percolab/errors.hpp"
#include "percolab/estimator.hpp"
#include "percolab/exact.hpp"

namespace percolab {

/// 2^-30
Rational default_width_tol();

/// Bracket [lo, hi] of the crossing phi = 1 with phi(lo) < 1 <= phi(hi).
struct PstarInterval {
    Rational lo;
    Rational hi;
    /// Set when the simplest rational inside [lo, hi] is an exact root of phi = 1.
    std::optional<Rational> exact_root;
};

PstarInterval pstar(const RationalPolynomial& phi, const Rational& width_tol = default_width_tol());
PstarInterval pstar(const VertexSet& s, const Rational& width_tol = default_width_tol(),
                    const EnumerationBudget& budget = {});

/// Simplest rational (smallest denominator) in the closed interval [lo, hi], 0 <= lo <= hi.
Rational simplest_rational_between(const Rational& lo, const Rational& hi);

/// A certified lower bound on p_c.
///
/// `certified_below` always satisfies phi(certified_below) < 1. `bound`
/// equals it unless the crossing point is an exact rational root r, in which
/// case bound = r with phi(r) = 1: phi < 1 just left of r, so r is the
/// supremum of certified points and still a lower bound on p_c.
struct PcLowerBound {
    Rational bound;
    VertexSet witness;
    Rational phi_at_bound;
    Rational certified_below;
    Rational phi_at_certified;
    std::string method = "exact";
};

struct LadderEntry {
    /// Box radius, or -1 for a user supplied witness.
    int k = 0;
    std::optional<PstarInterval> interval;
    /// Budget message when the entry could not be computed.
    std::string error;
};

struct PcLadder {
    std::vector<LadderEntry> entries;
    PcLowerBound best;
};

/// pstar of the boxes of radius 0..k_max (and of any extra witnesses), keeping
/// the running maximum. Boxes beyond the budget are recorded with their error
/// and the ladder stops there.
PcLadder pc_lower_bound(int dim, int k_max, const EnumerationBudget& budget = {},
                        const Rational& width_tol = default_width_tol(),
                        const std::vector<VertexSet>& extra_witnesses = {});

/// Recomputes phi for the witness from scratch and checks the claims of `b`.
bool verify_pc_lower_bound(const PcLowerBound& b, const EnumerationBudget& budget = {});

/// Thrown by decay_certificate when phi_p(S) >= 1.
class CertificateRefused : public ConfigError {
public:
    CertificateRefused(const std::string& what, Rational phi) : ConfigError(what), phi_(std::move(phi)) {}
    const Rational& phi() const { return phi_; }

private:
    Rational phi_;
};

/// For phi_p(S) < 1 and S inside the box of radius L-1:
/// P_p[0 <-> boundary of box kL] <= phi^(k-1) for every k >= 1.
struct DecayCertificate {
    VertexSet set;
    Rational p;
    Rational phi;
    int L = 1;

    Rational bound(int k) const;
};

DecayCertificate decay_certificate(int dim, const Rational& p, const VertexSet& s,
                                   const EnumerationBudget& budget = {});
bool verify_decay_certificate(const DecayCertificate& c, const EnumerationBudget& budget = {});

/// (p - pc_ref) / (p (1 - pc_ref)), for 0 <= pc_ref < p <= 1.
struct MeanFieldFloor {
    Rational p;
    Rational pc_ref;
    Rational floor;
};

MeanFieldFloor meanfield_floor(const Rational& p, const Rational& pc_ref);

enum class PhiMethod { exact, monte_carlo };

struct PhiSequenceEntry {
    int k = 0;
    std::optional<Rational> exact;
    std::optional<MeanEstimate> estimate;
};

/// phi_p of the boxes of radius 0..k_max. The exact method stops with
/// BudgetExceeded; the Monte Carlo method uses spec with spec.p replaced by p.
std::vector<PhiSequenceEntry> phi_sequence(int dim, const Rational& p, int k_max, PhiMethod method,
                                           const SampleSpec& spec = {}, const EnumerationBudget& budget = {});

/// Certificate files: JSON objects with exact fractions as strings.
std::string to_json(const PcLowerBound& b);
std::string to_json(const DecayCertificate& c);

struct CertificateCheck {
    std::string kind;
    bool valid = false;
    std::string detail;
};

/// Parses a certificate file produced by to_json and re-checks it with a
/// fresh exact computation.
CertificateCheck verify_certificate_json(const std::string& text, const EnumerationBudget& budget = {});

}  // namespace percolab
