// Acceptance suite: one PASS/FAIL line per criterion, with wall time against
// its limit. Exit status is non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "percolab/cli.hpp"
#include "percolab/criterion.hpp"
#include "percolab/estimator.hpp"
#include "percolab/exact.hpp"
#include "percolab/stats.hpp"

using namespace percolab;

namespace {

unsigned workers()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Outcome()> body;
};

std::string fmt(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

Outcome closed_form_anchor()
{
    Outcome o;
    for (int d = 2; d <= 4; ++d) {
        const VertexSet origin = make_box(d, 0).set();
        o.require(phi_exact(origin) == RationalPolynomial::monomial(2 * d, 1), "phi({0}) != 2dp for d=" +
                                                                                   std::to_string(d));
        const PstarInterval iv = pstar(origin);
        const Rational root(1, 2 * d);
        o.require(iv.lo < root && root <= iv.hi, "bracket misses 1/(2d) for d=" + std::to_string(d));
        o.require(iv.exact_root && *iv.exact_root == root, "exact root not 1/(2d) for d=" + std::to_string(d));
    }
    o.detail = o.pass ? "phi = 2dp and pstar = 1/(2d) for d = 2,3,4" : o.detail;
    return o;
}

Outcome russo_identity()
{
    Outcome o;
    o.require(make_box(2, 1).set().internal_edges().size() == 12, "box does not have 12 edges");
    const RationalPolynomial residual = russo_residual(2, 1);
    o.require(residual.is_zero(), "residual " + residual.to_string());
    o.detail = o.pass ? "residual is the zero polynomial over 4096 configurations" : o.detail;
    return o;
}

Outcome blocking_reassembly()
{
    Outcome o;
    const std::vector<Rational> ps = {Rational(1, 10), Rational(1, 4), Rational(1, 2), Rational(3, 4),
                                      Rational(9, 10)};
    const RationalPolynomial reach = reach_poly(2, 1);
    for (const auto& dec : blocking_decomposition(2, 1, ps)) {
        const std::string at = " at p=" + fraction_string(dec.p);
        o.require(dec.rows.size() == 256, "expected 256 subsets" + at);
        o.require(dec.reassembled == (1 - dec.p) * reach.derivative()(dec.p), "reassembly differs" + at);
        o.require(dec.identity_holds(), "blocking mass differs" + at);
    }
    o.detail = o.pass ? "exact reassembly at p = 1/10, 1/4, 1/2, 3/4, 9/10" : o.detail;
    return o;
}

Outcome lemma_inequality()
{
    Outcome o;
    std::vector<Rational> ps;
    for (int k = 1; k <= 9; ++k) {
        ps.emplace_back(k, 10);
    }
    Rational tightest = -1;
    for (const auto& l : lemma_check(2, 1, ps)) {
        o.require(l.lhs >= l.rhs, "lhs < rhs at p=" + fraction_string(l.p));
        const Rational margin = l.lhs - l.rhs;
        if (tightest < 0 || margin < tightest) {
            tightest = margin;
        }
    }
    o.detail = o.pass ? "lhs >= rhs at p = k/10, smallest margin " + fraction_string(tightest) : o.detail;
    return o;
}

Outcome certified_ladder()
{
    Outcome o;
    const PcLadder ladder = pc_lower_bound(2, 1);
    const Rational& b = ladder.best.bound;
    o.require(b > Rational(1, 4), "bound not above 1/4");
    o.require(b < Rational(1, 2), "bound not below 1/2");
    o.require(ladder.best.phi_at_certified < 1, "phi at certified point not below 1");
    o.require(verify_pc_lower_bound(ladder.best), "certificate does not re-verify");
    o.detail = o.pass ? "p_c >= " + fraction_string(b) + " ~ " + fmt(b.get_d()) : o.detail;
    return o;
}

Outcome meanfield_floor_check()
{
    Outcome o;
    o.require(meanfield_floor(Rational(3, 5), Rational(1, 2)).floor == Rational(1, 3), "floor at 0.6 is not 1/3");
    double worst = 1e300;
    for (double p : {0.55, 0.6, 0.7}) {
        const Rational floor = meanfield_floor(Rational(p), Rational(1, 2)).floor;
        for (std::uint64_t seed : {1, 2, 3}) {
            const BernoulliEstimate e = estimate_reach(2, 32, {p, 50000, seed, workers()});
            const double slack = e.point - (floor.get_d() - 4 * e.std_error());
            worst = std::min(worst, slack);
            o.require(slack >= 0, "estimate below floor at p=" + fmt(p) + " seed " + std::to_string(seed));
        }
    }
    o.detail = o.pass ? "all 9 cells above floor - 4 sigma, least slack " + fmt(worst) : o.detail;
    return o;
}

Outcome decay_check()
{
    Outcome o;
    const DecayCertificate cert = decay_certificate(2, Rational(1, 5), make_box(2, 0).set());
    o.require(cert.phi == Rational(4, 5) && cert.L == 1, "certificate is not phi=4/5, L=1");
    for (int k = 1; k <= 4; ++k) {
        const BernoulliEstimate e = estimate_reach(2, k * cert.L, {0.2, 100000, 1, workers()});
        o.require(e.point <= cert.bound(k).get_d() + 4 * e.std_error(), "k=" + std::to_string(k) + " above bound");
    }
    std::vector<DecayPoint> pts;
    for (int n : {4, 8, 12, 16, 20}) {
        pts.push_back({n, estimate_reach(2, n, {0.35, 100000, 1, workers()}).point});
    }
    try {
        const DecayFit fit = fit_decay(pts);
        o.require(fit.dropped.empty(), "zero estimates dropped from the fit");
        o.require(fit.slope < 0, "slope not negative");
        o.require(fit.r_squared >= 0.98, "r^2 = " + fmt(fit.r_squared));
        if (o.pass) {
            o.detail = "(4/5)^(k-1) bound holds for k=1..4; p=0.35 slope " + fmt(fit.slope) + ", r^2 " +
                       fmt(fit.r_squared);
        }
    } catch (const ConfigError& e) {
        o.require(false, e.what());
    }
    return o;
}

Outcome oracle_equivalence()
{
    Outcome o;
    const VertexSet square(2, {Vertex({0, 0}), Vertex({1, 0}), Vertex({0, 1}), Vertex({1, 1})});
    const VertexSet box1 = make_box(2, 1).set();
    int cells = 0;
    int inside = 0;
    for (const VertexSet* s : {&square, &box1}) {
        const RationalPolynomial phi = phi_exact(*s);
        for (double p : {0.3, 0.5}) {
            const Rational pr(p);
            for (std::uint64_t seed = 1; seed <= 10; ++seed) {
                const SampleSpec spec{p, 100000, seed, workers()};
                for (const auto& x : s->vertices()) {
                    if (x.is_origin()) {
                        continue;
                    }
                    const double exact = connect_poly(*s, x)(pr).get_d();
                    const double se = std::sqrt(exact * (1 - exact) / static_cast<double>(spec.trials));
                    ++cells;
                    inside += std::abs(estimate_connect(*s, x, spec).point - exact) <= 4 * se ? 1 : 0;
                }
                const MeanEstimate m = estimate_phi(*s, spec);
                ++cells;
                inside += std::abs(m.mean - phi(pr).get_d()) <= 4 * m.std_error() ? 1 : 0;
            }
        }
    }
    const double frac = static_cast<double>(inside) / cells;
    o.require(frac >= 0.95, "only " + fmt(100 * frac) + "% of cells within 4 sigma");
    o.detail = std::to_string(inside) + "/" + std::to_string(cells) + " cells within 4 sigma" +
               (o.pass ? "" : "; " + o.detail);
    return o;
}

Outcome coupling_monotonicity()
{
    Outcome o;
    std::uint64_t violations = 0;
    std::vector<double> ps;
    for (int i = 1; i <= 19; ++i) {
        ps.push_back(i / 20.0);
    }
    for (std::uint64_t t = 0; t < 10000; ++t) {
        const TrialStream stream(2024, t);
        bool prev = false;
        for (double p : ps) {
            const bool now = explore_cluster(2, p, 8, stream).reached_boundary;
            violations += (prev && !now) ? 1 : 0;
            prev = now;
        }
    }
    o.require(violations == 0, std::to_string(violations) + " coupled violations");
    const PivotalReport rep = pivotal_report(2, 1);
    const RationalPolynomial dreach = reach_poly(2, 1).derivative();
    for (int i = 0; i <= 100; ++i) {
        const Rational p(i, 100);
        o.require(dreach(p) >= 0, "reach derivative negative at p=" + fraction_string(p));
        for (const auto& piv : rep.per_edge) {
            o.require(piv(p) >= 0, "pivotal probability negative at p=" + fraction_string(p));
        }
    }
    o.detail = o.pass ? "0 violations in 10^4 trials x 19 p values; derivatives >= 0 on 101 points" : o.detail;
    return o;
}

Outcome determinism()
{
    Outcome o;
    std::vector<std::string> outputs;
    for (const char* w : {"1", "4", "8"}) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = run_cli({"meanfield", "--dim", "2", "--p", "0.6", "--seed", "11", "--workers", w}, out, err);
        o.require(code == 0, std::string("exit code ") + std::to_string(code) + " with workers " + w);
        outputs.push_back(out.str());
    }
    o.require(outputs[0] == outputs[1] && outputs[0] == outputs[2], "outputs differ across worker counts");
    o.detail = o.pass ? "byte-identical JSON for workers 1, 4, 8 (" + std::to_string(outputs[0].size()) + " bytes)"
                      : o.detail;
    return o;
}

}  // namespace

int main()
{
    const std::vector<Criterion> criteria = {
        {1, "closed-form anchor", 1, closed_form_anchor},
        {2, "Russo identity", 10, russo_identity},
        {3, "blocking-set decomposition", 30, blocking_reassembly},
        {4, "differential inequality", 60, lemma_inequality},
        {5, "certified ladder", 60, certified_ladder},
        {6, "mean-field floor", 300, meanfield_floor_check},
        {7, "exponential decay", 300, decay_check},
        {8, "oracle equivalence", 300, oracle_equivalence},
        {9, "coupling monotonicity", 60, coupling_monotonicity},
        {10, "determinism", 300, determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.limit_seconds) {
            o.pass = false;
            o.detail += "; took " + fmt(secs) + " s, limit " + fmt(c.limit_seconds) + " s";
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s  criterion %2d  %-28s %8.2f s / %4.0f s  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                    c.limit_seconds, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
