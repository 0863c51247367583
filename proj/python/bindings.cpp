#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "percolab/cli.hpp"
#include "percolab/criterion.hpp"
#include "percolab/errors.hpp"
#include "percolab/estimator.hpp"
#include "percolab/exact.hpp"
#include "percolab/lattice.hpp"

namespace py = pybind11;
using namespace percolab;

namespace {

using Coords = std::vector<Coord>;

VertexSet to_set(const std::vector<Coords>& vertices)
{
    if (vertices.empty()) {
        throw ConfigError("vertex set is empty");
    }
    std::vector<Vertex> vs;
    for (const auto& c : vertices) {
        vs.emplace_back(c);
    }
    return VertexSet(static_cast<int>(vertices.front().size()), std::move(vs));
}

std::vector<Coords> from_set(const VertexSet& s)
{
    std::vector<Coords> out;
    for (const auto& v : s.vertices()) {
        out.push_back(v.coords);
    }
    return out;
}

std::vector<std::string> coeffs(const RationalPolynomial& p)
{
    std::vector<std::string> out;
    for (const auto& c : p.coeffs()) {
        out.push_back(fraction_string(c));
    }
    return out;
}

EnumerationBudget budget(std::uint64_t max_configs, std::uint64_t max_subsets)
{
    return EnumerationBudget{max_configs, max_subsets};
}

py::dict bernoulli(const BernoulliEstimate& e)
{
    py::dict d;
    d["successes"] = e.successes;
    d["trials"] = e.trials;
    d["point"] = e.point;
    d["ci"] = py::make_tuple(e.ci_low, e.ci_high);
    d["std_error"] = e.std_error();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "percolab core: exact phi_p(S) polynomials, certified p_c bounds, Monte Carlo estimators";

    static py::exception<BudgetExceeded> budget_error(m, "BudgetExceeded", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr ptr) {
        try {
            if (ptr) {
                std::rethrow_exception(ptr);
            }
        } catch (const BudgetExceeded& e) {
            py::set_error(budget_error, e.what());
        } catch (const ConfigError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    const std::uint64_t default_configs = EnumerationBudget{}.max_configs;
    const std::uint64_t default_subsets = EnumerationBudget{}.max_subsets;

    m.def("make_box", [](int dim, int n) { return from_set(make_box(dim, n).set()); }, py::arg("dim"),
          py::arg("n"));

    m.def(
        "edge_boundary",
        [](const std::vector<Coords>& vertices) {
            const VertexSet s = to_set(vertices);
            std::vector<std::tuple<Coords, Coords, Coords>> out;
            for (const auto& be : s.boundary_edges()) {
                out.emplace_back(be.edge.lower().coords, be.edge.upper().coords, be.inner.coords);
            }
            return out;
        },
        py::arg("vertices"));

    m.def(
        "internal_edges",
        [](const std::vector<Coords>& vertices) {
            const VertexSet s = to_set(vertices);
            std::vector<std::pair<Coords, Coords>> out;
            for (const auto& e : s.internal_edges()) {
                out.emplace_back(e.lower().coords, e.upper().coords);
            }
            return out;
        },
        py::arg("vertices"));

    m.def(
        "connect_poly",
        [](const std::vector<Coords>& vertices, const Coords& x, std::uint64_t max_configs) {
            return coeffs(connect_poly(to_set(vertices), Vertex(x), budget(max_configs, default_subsets)));
        },
        py::arg("vertices"), py::arg("x"), py::arg("max_configs") = default_configs);

    m.def(
        "phi_exact",
        [](const std::vector<Coords>& vertices, std::uint64_t max_configs) {
            return coeffs(phi_exact(to_set(vertices), budget(max_configs, default_subsets)));
        },
        py::arg("vertices"), py::arg("max_configs") = default_configs);

    m.def(
        "reach_poly",
        [](int dim, int n, std::uint64_t max_configs) {
            return coeffs(reach_poly(dim, n, budget(max_configs, default_subsets)));
        },
        py::arg("dim"), py::arg("n"), py::arg("max_configs") = default_configs);

    m.def(
        "russo_residual",
        [](int dim, int n, std::uint64_t max_configs) {
            return coeffs(russo_residual(dim, n, budget(max_configs, default_subsets)));
        },
        py::arg("dim"), py::arg("n"), py::arg("max_configs") = default_configs);

    m.def(
        "blocking_decomposition",
        [](int dim, int n, const std::string& p, std::uint64_t max_configs, std::uint64_t max_subsets) {
            auto d = blocking_decomposition(dim, n, parse_rational(p), budget(max_configs, max_subsets));
            py::dict out;
            out["reassembled"] = fraction_string(d.reassembled);
            out["expected"] = fraction_string(d.expected);
            out["blocking_mass"] = fraction_string(d.blocking_mass);
            out["non_reach"] = fraction_string(d.non_reach);
            out["factorization_holds"] = d.factorization_holds();
            out["identity_holds"] = d.identity_holds();
            return out;
        },
        py::arg("dim"), py::arg("n"), py::arg("p"), py::arg("max_configs") = default_configs,
        py::arg("max_subsets") = default_subsets);

    m.def(
        "lemma_check",
        [](int dim, int n, const std::string& p, std::uint64_t max_configs, std::uint64_t max_subsets) {
            auto l = lemma_check(dim, n, parse_rational(p), budget(max_configs, max_subsets));
            py::dict out;
            out["lhs"] = fraction_string(l.lhs);
            out["rhs"] = fraction_string(l.rhs);
            out["inf_phi"] = fraction_string(l.inf_phi);
            out["minimizer"] = from_set(l.minimizer);
            out["holds"] = l.holds();
            return out;
        },
        py::arg("dim"), py::arg("n"), py::arg("p"), py::arg("max_configs") = default_configs,
        py::arg("max_subsets") = default_subsets);

    m.def(
        "pstar",
        [](const std::vector<Coords>& vertices, const std::string& width_tol, std::uint64_t max_configs) {
            auto iv = pstar(to_set(vertices), parse_rational(width_tol), budget(max_configs, default_subsets));
            py::object root = py::none();
            if (iv.exact_root) {
                root = py::str(fraction_string(*iv.exact_root));
            }
            return py::make_tuple(fraction_string(iv.lo), fraction_string(iv.hi), root);
        },
        py::arg("vertices"), py::arg("width_tol") = "2^-30", py::arg("max_configs") = default_configs);

    m.def(
        "pc_lower_bound",
        [](int dim, int k_max, std::uint64_t max_configs) {
            auto ladder = pc_lower_bound(dim, k_max, budget(max_configs, default_subsets));
            py::dict out;
            out["bound"] = fraction_string(ladder.best.bound);
            out["certified_below"] = fraction_string(ladder.best.certified_below);
            out["phi_at_bound"] = fraction_string(ladder.best.phi_at_bound);
            out["witness"] = from_set(ladder.best.witness);
            out["certificate"] = to_json(ladder.best);
            return out;
        },
        py::arg("dim"), py::arg("k_max"), py::arg("max_configs") = default_configs);

    m.def(
        "decay_certificate",
        [](const std::vector<Coords>& vertices, const std::string& p) {
            VertexSet s = to_set(vertices);
            auto c = decay_certificate(s.dim(), parse_rational(p), s);
            py::dict out;
            out["phi"] = fraction_string(c.phi);
            out["L"] = c.L;
            out["certificate"] = to_json(c);
            return out;
        },
        py::arg("vertices"), py::arg("p"));

    m.def(
        "verify_certificate",
        [](const std::string& text) { return verify_certificate_json(text).valid; }, py::arg("text"));

    m.def(
        "meanfield_floor",
        [](const std::string& p, const std::string& pc_ref) {
            return fraction_string(meanfield_floor(parse_rational(p), parse_rational(pc_ref)).floor);
        },
        py::arg("p"), py::arg("pc_ref"));

    m.def(
        "estimate_reach",
        [](int dim, int n, double p, std::uint64_t trials, std::uint64_t seed, unsigned workers) {
            py::gil_scoped_release release;
            auto e = estimate_reach(dim, n, SampleSpec{p, trials, seed, workers});
            py::gil_scoped_acquire acquire;
            return bernoulli(e);
        },
        py::arg("dim"), py::arg("n"), py::arg("p"), py::arg("trials"), py::arg("seed"), py::arg("workers") = 1);

    m.def(
        "estimate_connect",
        [](const std::vector<Coords>& vertices, const Coords& x, double p, std::uint64_t trials,
           std::uint64_t seed, unsigned workers) {
            return bernoulli(estimate_connect(to_set(vertices), Vertex(x), SampleSpec{p, trials, seed, workers}));
        },
        py::arg("vertices"), py::arg("x"), py::arg("p"), py::arg("trials"), py::arg("seed"),
        py::arg("workers") = 1);

    m.def(
        "estimate_phi",
        [](const std::vector<Coords>& vertices, double p, std::uint64_t trials, std::uint64_t seed,
           unsigned workers) {
            auto e = estimate_phi(to_set(vertices), SampleSpec{p, trials, seed, workers});
            py::dict out;
            out["mean"] = e.mean;
            out["sd"] = e.sample_sd;
            out["trials"] = e.trials;
            out["ci"] = py::make_tuple(e.ci_low, e.ci_high);
            out["std_error"] = e.std_error();
            return out;
        },
        py::arg("vertices"), py::arg("p"), py::arg("trials"), py::arg("seed"), py::arg("workers") = 1);

    m.def(
        "fit_decay",
        [](const std::vector<std::pair<int, double>>& points) {
            std::vector<DecayPoint> pts;
            for (auto [n, v] : points) {
                pts.push_back({n, v});
            }
            auto fit = fit_decay(pts);
            return py::make_tuple(fit.slope, fit.intercept, fit.r_squared);
        },
        py::arg("points"));

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out;
            std::ostringstream err;
            int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
