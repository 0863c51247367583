#include "percolab/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "percolab/criterion.hpp"
#include "percolab/errors.hpp"
#include "percolab/estimator.hpp"
#include "percolab/exact.hpp"
#include "percolab/records.hpp"

namespace percolab {

namespace {

constexpr double kSigmaMargin = 4.0;
constexpr const char* kReachObservable = "P[0<->boundary(Lambda_n)], finite-volume upper proxy for theta(p)";

struct RunConfig {
    std::string subcommand;
    int dim = 2;
    std::optional<int> box;
    std::string set_file;
    std::optional<int> n;
    int k_max = 1;
    std::vector<std::string> p_values;
    std::string p_grid;
    std::string method = "exact";
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::string max_configs = "2^22";
    std::string max_subsets = "2^20";
    std::string width_tol = "2^-30";
    std::string n_list;
    std::string k_list;
    std::string pc_ref;
    int k_max_ref = 1;
    std::string certificate_out;
    std::string certificate;
    std::string format = "json";
    std::string output;
    bool test_mode = false;
};

/// Everything a subcommand produces: the config echo, records, and the exit
/// status of its statistical or identity checks.
struct Run {
    Record config{"config"};
    std::vector<Record> records;
    bool checks_passed = true;
};

ValueList ci_list(double lo, double hi)
{
    return ValueList{Value(lo), Value(hi)};
}

ValueList coeff_list(const RationalPolynomial& poly)
{
    ValueList out;
    for (const auto& c : poly.coeffs()) {
        out.emplace_back(c);
    }
    return out;
}

std::uint64_t parse_count(const std::string& text, const char* what)
{
    const Rational q = parse_rational(text);
    if (q.get_den() != 1 || q < 1 || !q.get_num().fits_ulong_p()) {
        throw ConfigError(std::string(what) + " must be a positive integer, got '" + text + "'");
    }
    return q.get_num().get_ui();
}

EnumerationBudget budget_of(const RunConfig& c)
{
    return EnumerationBudget{parse_count(c.max_configs, "--max-configs"),
                             parse_count(c.max_subsets, "--max-subsets")};
}

unsigned workers_of(const RunConfig& c)
{
    if (c.workers) {
        if (*c.workers == 0) {
            throw ConfigError("--workers must be positive");
        }
        return *c.workers;
    }
    if (const char* env = std::getenv("PERCOLAB_WORKERS")) {
        return static_cast<unsigned>(parse_count(env, "PERCOLAB_WORKERS"));
    }
    return 1;
}

bool test_mode_of(const RunConfig& c)
{
    if (c.test_mode) {
        return true;
    }
    const char* env = std::getenv("PERCOLAB_TEST_MODE");
    return env != nullptr && std::string(env) != "" && std::string(env) != "0";
}

std::uint64_t seed_of(const RunConfig& c, std::ostream& err)
{
    if (c.seed) {
        return *c.seed;
    }
    if (test_mode_of(c)) {
        throw ConfigError("--seed is required in test mode");
    }
    std::random_device rd;
    const std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    err << "percolab: no --seed given, using seed " << seed << '\n';
    return seed;
}

Rational probability(const std::string& text)
{
    Rational p = parse_rational(text);
    if (p < 0 || p > 1) {
        throw ConfigError("p must lie in [0,1], got '" + text + "'");
    }
    return p;
}

/// --p values, or --p-grid "start:stop:steps" with evenly spaced exact points.
std::vector<Rational> p_values_of(const RunConfig& c, const std::string& default_grid)
{
    std::vector<Rational> out;
    for (const auto& text : c.p_values) {
        out.push_back(probability(text));
    }
    std::string grid = c.p_grid;
    if (grid.empty() && out.empty()) {
        grid = default_grid;
    }
    if (!grid.empty()) {
        auto first = grid.find(':');
        auto second = first == std::string::npos ? first : grid.find(':', first + 1);
        if (second == std::string::npos) {
            throw ConfigError("--p-grid expects start:stop:steps, got '" + grid + "'");
        }
        const Rational start = probability(grid.substr(0, first));
        const Rational stop = probability(grid.substr(first + 1, second - first - 1));
        const auto steps = parse_count(grid.substr(second + 1), "p-grid steps");
        for (std::uint64_t i = 0; i < steps; ++i) {
            out.push_back(steps == 1 ? start : start + (stop - start) * Rational(i, steps - 1));
        }
    }
    if (out.empty()) {
        throw ConfigError("no p given; use --p or --p-grid");
    }
    return out;
}

std::vector<int> int_list(const std::string& text, const char* what)
{
    std::vector<int> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        out.push_back(static_cast<int>(parse_count(item, what)));
    }
    if (out.empty()) {
        throw ConfigError(std::string(what) + " is empty");
    }
    return out;
}

struct Witness {
    VertexSet set;
    std::string label;
};

Witness witness_of(const RunConfig& c, int default_box)
{
    if (c.box && !c.set_file.empty()) {
        throw ConfigError("give either --box or --set-file, not both");
    }
    if (!c.set_file.empty()) {
        VertexSet s = read_vertex_set_file(c.set_file);
        if (s.dim() != c.dim) {
            throw ConfigError("set file dimension " + std::to_string(s.dim()) + " does not match --dim " +
                              std::to_string(c.dim));
        }
        return {std::move(s), "file:" + c.set_file};
    }
    const int k = c.box.value_or(default_box);
    return {make_box(c.dim, k).set(), "box:" + std::to_string(k)};
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path);
    if (!f) {
        throw ConfigError("cannot write '" + path + "'");
    }
    f << text << '\n';
}

void add_estimate(Record& r, const BernoulliEstimate& e, std::uint64_t seed)
{
    r.add("trials", e.trials)
        .add("successes", e.successes)
        .add("point", e.point)
        .add("ci", ci_list(e.ci_low, e.ci_high))
        .add("std_error", e.std_error())
        .add("seed", seed);
}

void echo_common(Run& run, const RunConfig& c)
{
    run.config.add("subcommand", c.subcommand).add("dim", c.dim);
}

void echo_budget(Run& run, const EnumerationBudget& b)
{
    run.config.add("max_configs", b.max_configs).add("max_subsets", b.max_subsets);
}

// --- phi ---------------------------------------------------------------

Run cmd_phi(const RunConfig& c, std::ostream& err)
{
    Run run;
    echo_common(run, c);
    const Witness w = witness_of(c, 0);
    const std::vector<Rational> ps = p_values_of(c, "");
    const EnumerationBudget budget = budget_of(c);
    run.config.add("set", w.label).add("method", c.method);
    ValueList grid;
    for (const auto& p : ps) {
        grid.emplace_back(p);
    }
    run.config.add("p", grid);

    if (c.method == "exact") {
        echo_budget(run, budget);
        const RationalPolynomial phi = phi_exact(w.set, budget);
        run.records.push_back(Record("phi_polynomial").add("set", w.label).add("coeffs", coeff_list(phi)));
        for (const auto& p : ps) {
            const Rational value = phi(p);
            run.records.push_back(Record("phi")
                                      .add("method", "exact")
                                      .add("set", w.label)
                                      .add("p", p)
                                      .add("value", value)
                                      .add("value_float", value.get_d()));
        }
        return run;
    }
    if (c.method != "mc") {
        throw ConfigError("--method must be exact or mc");
    }
    const std::uint64_t trials = c.trials.value_or(100000);
    const std::uint64_t seed = seed_of(c, err);
    run.config.add("trials", trials).add("seed", seed);
    for (const auto& p : ps) {
        const SampleSpec spec{p.get_d(), trials, seed, workers_of(c)};
        const MeanEstimate e = estimate_phi(w.set, spec);
        run.records.push_back(Record("phi_estimate")
                                  .add("method", "mc")
                                  .add("set", w.label)
                                  .add("p", spec.p)
                                  .add("trials", e.trials)
                                  .add("mean", e.mean)
                                  .add("sd", e.sample_sd)
                                  .add("ci", ci_list(e.ci_low, e.ci_high))
                                  .add("std_error", e.std_error())
                                  .add("seed", seed));
    }
    return run;
}

// --- pc-bound ----------------------------------------------------------

Run cmd_pc_bound(const RunConfig& c, std::ostream&)
{
    Run run;
    echo_common(run, c);
    const EnumerationBudget budget = budget_of(c);
    const Rational tol = parse_rational(c.width_tol);
    if (c.k_max < 0) {
        throw ConfigError("--kmax must be non-negative");
    }
    std::vector<VertexSet> extra;
    std::string extra_label;
    if (!c.set_file.empty()) {
        Witness w = witness_of(c, 0);
        extra.push_back(w.set);
        extra_label = w.label;
    }
    run.config.add("kmax", c.k_max).add("width_tol", tol);
    if (!extra_label.empty()) {
        run.config.add("set", extra_label);
    }
    echo_budget(run, budget);

    const PcLadder ladder = pc_lower_bound(c.dim, c.k_max, budget, tol, extra);
    for (const auto& entry : ladder.entries) {
        Record r("ladder_entry");
        r.add("k", entry.k < 0 ? Value(nullptr) : Value(entry.k));
        r.add("witness", entry.k < 0 ? extra_label : "box:" + std::to_string(entry.k));
        if (entry.interval) {
            r.add("status", "ok")
                .add("lo", entry.interval->lo)
                .add("hi", entry.interval->hi)
                .add("exact_root", entry.interval->exact_root ? Value(*entry.interval->exact_root) : Value())
                .add("lo_float", entry.interval->lo.get_d());
        } else {
            r.add("status", "budget_exceeded").add("message", entry.error);
        }
        run.records.push_back(std::move(r));
    }
    const PcLowerBound& best = ladder.best;
    std::string witness_label = "box:" + std::to_string(best.witness.radius());
    if (!extra.empty() && best.witness == extra.front()) {
        witness_label = extra_label;
    }
    run.records.push_back(Record("pc_lower_bound")
                              .add("dim", c.dim)
                              .add("bound", best.bound)
                              .add("bound_float", best.bound.get_d())
                              .add("phi_at_bound", best.phi_at_bound)
                              .add("certified_below", best.certified_below)
                              .add("phi_at_certified", best.phi_at_certified)
                              .add("witness", witness_label)
                              .add("method", best.method));
    if (!c.certificate_out.empty()) {
        write_text_file(c.certificate_out, to_json(best));
    }
    return run;
}

// --- decay -------------------------------------------------------------

Run cmd_decay(const RunConfig& c, std::ostream& err)
{
    Run run;
    echo_common(run, c);
    if (c.p_values.size() != 1) {
        throw ConfigError("decay needs exactly one --p");
    }
    const Rational p = probability(c.p_values.front());
    const Witness w = witness_of(c, 0);
    const EnumerationBudget budget = budget_of(c);
    const std::uint64_t trials = c.trials.value_or(100000);
    const std::uint64_t seed = seed_of(c, err);
    const int L = static_cast<int>(w.set.radius()) + 1;

    std::vector<int> ns;
    if (!c.n_list.empty() && !c.k_list.empty()) {
        throw ConfigError("give either --n-list or --k-list, not both");
    }
    if (!c.n_list.empty()) {
        ns = int_list(c.n_list, "--n-list");
    } else {
        for (int k : int_list(c.k_list.empty() ? "1,2,3,4" : c.k_list, "--k-list")) {
            ns.push_back(k * L);
        }
    }
    ValueList n_values;
    for (int n : ns) {
        n_values.emplace_back(n);
    }
    run.config.add("p", p).add("set", w.label).add("n", n_values).add("trials", trials).add("seed", seed);
    echo_budget(run, budget);

    std::optional<DecayCertificate> cert;
    try {
        cert = decay_certificate(c.dim, p, w.set, budget);
        run.records.push_back(Record("decay_certificate")
                                  .add("status", "accepted")
                                  .add("set", w.label)
                                  .add("p", p)
                                  .add("phi", cert->phi)
                                  .add("phi_float", cert->phi.get_d())
                                  .add("L", L));
        if (!c.certificate_out.empty()) {
            write_text_file(c.certificate_out, to_json(*cert));
        }
    } catch (const CertificateRefused& refused) {
        run.records.push_back(Record("decay_certificate")
                                  .add("status", "refused")
                                  .add("set", w.label)
                                  .add("p", p)
                                  .add("phi", refused.phi())
                                  .add("phi_float", refused.phi().get_d())
                                  .add("L", L));
        err << "percolab: " << refused.what() << '\n';
    }

    std::vector<DecayPoint> points;
    const SampleSpec spec{p.get_d(), trials, seed, workers_of(c)};
    for (int n : ns) {
        const BernoulliEstimate e = estimate_reach(c.dim, n, spec);
        Record r("reach");
        r.add("p", spec.p).add("n", n);
        add_estimate(r, e, seed);
        // reach probabilities decrease in n, so box n inherits the bound of
        // the largest multiple of L below it
        const int k = n / L;
        if (cert && k >= 1) {
            const Rational bound = cert->bound(k);
            const bool ok = e.point <= bound.get_d() + kSigmaMargin * e.std_error();
            run.checks_passed = run.checks_passed && ok;
            r.add("k", k).add("bound", bound).add("bound_float", bound.get_d()).add("within_bound", ok);
        }
        run.records.push_back(std::move(r));
        points.push_back({n, e.point});
    }

    try {
        const DecayFit fit = fit_decay(points);
        ValueList used;
        ValueList dropped;
        for (int n : fit.used) {
            used.emplace_back(n);
        }
        for (int n : fit.dropped) {
            dropped.emplace_back(n);
        }
        if (!fit.dropped.empty()) {
            err << "percolab: dropped " << fit.dropped.size() << " zero-estimate point(s) from the decay fit\n";
        }
        run.records.push_back(Record("decay_fit")
                                  .add("status", "ok")
                                  .add("slope", fit.slope)
                                  .add("intercept", fit.intercept)
                                  .add("r_squared", fit.r_squared)
                                  .add("rate", -fit.slope)
                                  .add("used", used)
                                  .add("dropped", dropped));
    } catch (const ConfigError& e) {
        err << "percolab: " << e.what() << '\n';
        run.records.push_back(Record("decay_fit").add("status", "insufficient_points").add("message", e.what()));
    }
    return run;
}

// --- meanfield ---------------------------------------------------------

Run cmd_meanfield(const RunConfig& c, std::ostream& err)
{
    Run run;
    echo_common(run, c);
    if (c.p_values.size() != 1) {
        throw ConfigError("meanfield needs exactly one --p");
    }
    const Rational p = probability(c.p_values.front());
    const int n = c.n.value_or(32);
    const std::uint64_t trials = c.trials.value_or(50000);
    const EnumerationBudget budget = budget_of(c);

    Rational pc_ref;
    std::string source;
    if (!c.pc_ref.empty()) {
        pc_ref = probability(c.pc_ref);
        source = "user";
    } else if (c.dim == 2) {
        pc_ref = Rational(1, 2);
        source = "p_c(Z^2) = 1/2";
    } else {
        pc_ref = pc_lower_bound(c.dim, c.k_max_ref, budget).best.bound;
        source = "certified ladder lower bound on p_c; the floor decreases in pc_ref, so this overstates the true "
                 "floor and is meaningful only if p exceeds the true p_c";
    }
    const MeanFieldFloor floor = meanfield_floor(p, pc_ref);
    const std::uint64_t seed = seed_of(c, err);
    run.config.add("p", p).add("n", n).add("trials", trials).add("seed", seed).add("pc_ref", pc_ref);

    const BernoulliEstimate e = estimate_reach(c.dim, n, SampleSpec{p.get_d(), trials, seed, workers_of(c)});
    const bool pass = e.point >= floor.floor.get_d() - kSigmaMargin * e.std_error();
    run.checks_passed = pass;
    Record r("meanfield");
    r.add("dim", c.dim)
        .add("p", p)
        .add("pc_ref", pc_ref)
        .add("pc_ref_source", source)
        .add("floor", floor.floor)
        .add("floor_float", floor.floor.get_d())
        .add("n", n)
        .add("observable", kReachObservable);
    add_estimate(r, e, seed);
    r.add("margin_sigma", kSigmaMargin).add("pass", pass);
    run.records.push_back(std::move(r));
    return run;
}

// --- verify ------------------------------------------------------------

Run cmd_verify_certificate(const RunConfig& c)
{
    Run run;
    echo_common(run, c);
    const EnumerationBudget budget = budget_of(c);
    run.config.add("certificate", c.certificate);
    echo_budget(run, budget);
    std::ifstream in(c.certificate);
    if (!in) {
        throw ConfigError("cannot open certificate '" + c.certificate + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const CertificateCheck check = verify_certificate_json(buf.str(), budget);
    run.checks_passed = check.valid;
    run.records.push_back(Record("certificate_check")
                              .add("certificate_kind", check.kind)
                              .add("valid", check.valid)
                              .add("detail", check.detail));
    return run;
}

Run cmd_verify(const RunConfig& c, std::ostream&)
{
    if (!c.certificate.empty()) {
        return cmd_verify_certificate(c);
    }
    Run run;
    echo_common(run, c);
    const int n = c.n.value_or(1);
    if (n < 0) {
        throw ConfigError("--n must be non-negative");
    }
    const std::vector<Rational> ps = p_values_of(c, "1/10:9/10:9");
    const EnumerationBudget budget = budget_of(c);
    ValueList grid;
    for (const auto& p : ps) {
        grid.emplace_back(p);
    }
    run.config.add("n", n).add("p", grid);
    echo_budget(run, budget);

    const RationalPolynomial residual = russo_residual(c.dim, n, budget);
    run.checks_passed = residual.is_zero();
    run.records.push_back(Record("russo")
                              .add("dim", c.dim)
                              .add("n", n)
                              .add("residual", residual.is_zero() ? Value(Rational(0)) : Value(coeff_list(residual)))
                              .add("pass", residual.is_zero()));

    for (const auto& d : blocking_decomposition(c.dim, n, ps, budget)) {
        const bool pass = d.identity_holds() && d.factorization_holds();
        run.checks_passed = run.checks_passed && pass;
        run.records.push_back(Record("blocking")
                                  .add("dim", c.dim)
                                  .add("n", n)
                                  .add("p", d.p)
                                  .add("reassembled", d.reassembled)
                                  .add("expected", d.expected)
                                  .add("residual", Rational(d.reassembled - d.expected))
                                  .add("blocking_mass", d.blocking_mass)
                                  .add("non_reach", d.non_reach)
                                  .add("factorization", d.factorization_holds())
                                  .add("pass", pass));
    }

    if (n < 1) {
        run.records.push_back(Record("lemma")
                                  .add("dim", c.dim)
                                  .add("n", n)
                                  .add("status", "not_applicable")
                                  .add("message", "the differential inequality is stated for n >= 1"));
        return run;
    }
    std::vector<Rational> interior;
    for (const auto& p : ps) {
        if (p > 0 && p < 1) {
            interior.push_back(p);
        }
    }
    for (const auto& l : lemma_check(c.dim, n, interior, budget)) {
        run.checks_passed = run.checks_passed && l.holds();
        run.records.push_back(Record("lemma")
                                  .add("dim", c.dim)
                                  .add("n", n)
                                  .add("status", "ok")
                                  .add("p", l.p)
                                  .add("lhs", l.lhs)
                                  .add("rhs", l.rhs)
                                  .add("inf_phi", l.inf_phi)
                                  .add("margin", Rational(l.lhs - l.rhs))
                                  .add("pass", l.holds()));
    }
    return run;
}

void add_common_options(CLI::App* sub, RunConfig& c)
{
    sub->add_option("--dim", c.dim, "lattice dimension d")->capture_default_str();
    sub->add_option("--max-configs", c.max_configs, "exact enumeration budget (integer or 2^k)")
        ->capture_default_str();
    sub->add_option("--max-subsets", c.max_subsets, "subset enumeration budget (integer or 2^k)")
        ->capture_default_str();
    sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output", c.output, "write records to this file instead of stdout");
    sub->add_option("--workers", c.workers, "worker threads (default: $PERCOLAB_WORKERS or 1)");
    sub->add_flag("--test-mode", c.test_mode, "require an explicit --seed");
}

void add_sampling_options(CLI::App* sub, RunConfig& c)
{
    sub->add_option("--trials", c.trials, "Monte Carlo trials");
    sub->add_option("--seed", c.seed, "master seed");
}

void add_set_options(CLI::App* sub, RunConfig& c)
{
    sub->add_option("--box", c.box, "use the box of radius k as the set");
    sub->add_option("--set-file", c.set_file, "vertex set file (one vertex per line)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig c;
    CLI::App app{"percolab: exact and Monte Carlo checks of the phi_p(S) percolation criterion", "percolab"};
    app.require_subcommand(1);

    auto* phi = app.add_subcommand("phi", "phi_p(S) exactly or by Monte Carlo");
    add_common_options(phi, c);
    add_sampling_options(phi, c);
    add_set_options(phi, c);
    phi->add_option("--p", c.p_values, "p value(s): fractions or decimals");
    phi->add_option("--p-grid", c.p_grid, "start:stop:steps");
    phi->add_option("--method", c.method, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));

    auto* pc = app.add_subcommand("pc-bound", "certified lower bounds on p_c from boxes");
    add_common_options(pc, c);
    pc->add_option("--kmax", c.k_max, "largest box radius")->capture_default_str();
    pc->add_option("--set-file", c.set_file, "additional witness set");
    pc->add_option("--width-tol", c.width_tol, "bisection width")->capture_default_str();
    pc->add_option("--certificate-out", c.certificate_out, "write the best bound as a certificate");

    auto* decay = app.add_subcommand("decay", "subcritical decay of P[0<->boundary] against the certificate bound");
    add_common_options(decay, c);
    add_sampling_options(decay, c);
    add_set_options(decay, c);
    decay->add_option("--p", c.p_values, "p")->required();
    decay->add_option("--n-list", c.n_list, "comma separated box radii");
    decay->add_option("--k-list", c.k_list, "comma separated k; radii are k*L");
    decay->add_option("--certificate-out", c.certificate_out, "write the decay certificate");

    auto* mf = app.add_subcommand("meanfield", "supercritical reach probability against the mean-field floor");
    add_common_options(mf, c);
    add_sampling_options(mf, c);
    mf->add_option("--p", c.p_values, "p")->required();
    mf->add_option("--n", c.n, "box radius (default 32)");
    mf->add_option("--pc-ref", c.pc_ref, "reference critical point");
    mf->add_option("--kmax-ref", c.k_max_ref, "ladder depth for the reference when d != 2")->capture_default_str();

    auto* verify = app.add_subcommand("verify", "exact identities at small n, or re-check a certificate file");
    add_common_options(verify, c);
    verify->add_option("--n", c.n, "box radius (default 1)");
    verify->add_option("--p", c.p_values, "p value(s)");
    verify->add_option("--p-grid", c.p_grid, "start:stop:steps (default 1/10:9/10:9)");
    verify->add_option("--certificate", c.certificate, "certificate file to re-check");

    std::vector<const char*> argv{"percolab"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "percolab: " << e.what() << '\n';
        return kExitConfig;
    }
    c.subcommand = app.get_subcommands().front()->get_name();

    Run run;
    try {
        if (c.subcommand == "phi") {
            run = cmd_phi(c, err);
        } else if (c.subcommand == "pc-bound") {
            run = cmd_pc_bound(c, err);
        } else if (c.subcommand == "decay") {
            run = cmd_decay(c, err);
        } else if (c.subcommand == "meanfield") {
            run = cmd_meanfield(c, err);
        } else {
            run = cmd_verify(c, err);
        }
    } catch (const BudgetExceeded& e) {
        err << "percolab: budget exceeded: " << e.what() << '\n';
        return kExitBudget;
    } catch (const ConfigError& e) {
        err << "percolab: " << e.what() << '\n';
        return kExitConfig;
    }

    run.config.add("format", c.format);
    std::ofstream file;
    std::ostream* sink = &out;
    if (!c.output.empty()) {
        file.open(c.output);
        if (!file) {
            err << "percolab: cannot write '" << c.output << "'\n";
            return kExitConfig;
        }
        sink = &file;
    }
    if (c.format == "csv") {
        write_csv(*sink, run.config, run.records);
    } else {
        write_json_lines(*sink, run.config, run.records);
    }
    if (!run.checks_passed) {
        err << "percolab: one or more checks failed\n";
        return kExitCheckFailed;
    }
    return kExitOk;
}

}  // namespace percolab
