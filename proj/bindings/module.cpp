// Python bindings for the core operations: model construction and IO,
// spectral statistics, limit-process sampling, tangent machinery, sieves,
// zeta evaluation and the explicit-formula models.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "apstat/empirics.hpp"
#include "apstat/runner.hpp"
#include "apstat/tangent.hpp"
#include "apstat/zeta.hpp"

namespace py = pybind11;
using namespace apstat;

namespace {

spectra::FourierModel make_model(const std::vector<std::pair<double, cplx>>& terms,
                                 const std::string& label) {
    std::vector<spectra::Term> ts;
    ts.reserve(terms.size());
    for (const auto& [lam, c] : terms) ts.push_back({lam, c});
    return spectra::FourierModel(std::move(ts), label);
}

zeta::ExplicitKind kind_from_string(const std::string& kind) {
    if (kind == "psi") return zeta::ExplicitKind::psi;
    if (kind == "mertens") return zeta::ExplicitKind::mertens;
    if (kind == "liouville") return zeta::ExplicitKind::liouville;
    throw std::invalid_argument("kind must be psi|mertens|liouville");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "almost-periodic process toolkit: Fourier models, the stationary "
              "limit process, tangent analysis and explicit-formula models";

    py::class_<spectra::FourierModel>(m, "FourierModel")
        .def(py::init(&make_model), py::arg("terms"), py::arg("label") = "model")
        .def_property_readonly("label", &spectra::FourierModel::label)
        .def("__len__", &spectra::FourierModel::size)
        .def("terms",
             [](const spectra::FourierModel& self) {
                 std::vector<std::pair<double, cplx>> out;
                 for (const auto& t : self.terms()) out.emplace_back(t.lambda, t.coeff);
                 return out;
             })
        .def("__call__", [](const spectra::FourierModel& self, double t) { return self(t); })
        .def("to_text", &spectra::to_text);

    m.def("parseval_norm", &spectra::parseval_norm);
    m.def("marcinkiewicz_seminorm_numeric", &spectra::marcinkiewicz_seminorm_numeric,
          py::arg("model"), py::arg("L"), py::arg("step"));
    m.def("estimate_fourier_coefficient", &spectra::estimate_fourier_coefficient,
          py::arg("model"), py::arg("a"), py::arg("L"), py::arg("step"));
    m.def("inner_product", &spectra::inner_product);
    m.def("translate", &spectra::translate);
    m.def("default_quadrature_step", &spectra::default_quadrature_step);
    m.def("load_model", &spectra::load_text);
    m.def("save_model", &spectra::save_text);

    m.def("spectral_measure", [](const spectra::FourierModel& model) {
        std::vector<std::pair<double, double>> atoms;
        for (const auto& a : spectra::spectral_measure(model).atoms)
            atoms.emplace_back(a.lambda, a.mass);
        return atoms;
    });
    m.def("truncated_second_moment", [](const spectra::FourierModel& model, double x) {
        return spectra::truncated_second_moment(spectra::spectral_measure(model), x);
    });
    m.def("tail_mass", [](const spectra::FourierModel& model, double x) {
        return spectra::tail_mass(spectra::spectral_measure(model), x);
    });
    m.def("fit_scaling_exponents",
          [](const spectra::FourierModel& model, const std::vector<double>& grid) {
              const auto f = spectra::fit_scaling_exponents(spectra::spectral_measure(model), grid);
              return py::make_tuple(f.alpha_hat, f.beta_hat, f.theta_hat);
          });

    m.def("exact_covariance", &sampler::exact_covariance);
    m.def("exact_pseudocovariance", &sampler::exact_pseudocovariance);
    m.def("exact_increment_second_moment", &sampler::exact_increment_second_moment);
    m.def(
        "sample_path",
        [](const spectra::FourierModel& model, const std::vector<double>& grid,
           std::uint64_t seed, std::uint64_t replica) {
            const auto d = spectra::decompose(model);
            const auto p = sampler::sample_phases(d, seed, replica);
            return sampler::evaluate(model, p, grid).values;
        },
        py::arg("model"), py::arg("grid"), py::arg("seed") = 1, py::arg("replica") = 0,
        "one realization of the limit process M_f on the grid");
    m.def(
        "deterministic_path",
        [](const spectra::FourierModel& model, const std::vector<double>& grid) {
            const auto d = spectra::decompose(model);
            return sampler::evaluate(model, sampler::unit_phases(d), grid).values;
        },
        "the underlying polynomial itself (all phases equal to 1)");

    py::class_<tangent::ExampleSpectrumSpec>(m, "ExampleSpectrumSpec")
        .def(py::init([](double a, double b, double A, std::size_t n_terms, std::uint64_t seed) {
                 tangent::ExampleSpectrumSpec s;
                 s.a = a;
                 s.b = b;
                 s.A = A;
                 s.n_terms = n_terms;
                 s.seed = seed;
                 return s;
             }),
             py::arg("a") = 1.0, py::arg("b") = 1.0, py::arg("A") = 1.0,
             py::arg("n_terms") = 1000, py::arg("seed") = 1);
    m.def("generate_example_spectrum", &tangent::generate_example_spectrum);
    m.def("c_constant", &tangent::c_constant);
    m.def("fbm_covariance", &tangent::fbm_covariance, py::arg("theta"), py::arg("c"),
          py::arg("t"), py::arg("s"));
    m.def("nu_function", [](const spectra::FourierModel& model, double t) {
        return tangent::nu_function(spectra::spectral_measure(model), t);
    });

    m.def(
        "sieve_summatory",
        [](std::size_t N, const std::string& kind, const std::vector<double>& xs,
           const std::string& convention) {
            const auto tables = zeta::sieve(N);
            const auto k = kind_from_string(kind);
            const auto conv = convention == "midpoint" ? zeta::Convention::midpoint
                                                       : zeta::Convention::left;
            std::vector<double> out;
            out.reserve(xs.size());
            for (double x : xs) out.push_back(zeta::summatory(tables, k, x, conv));
            return out;
        },
        py::arg("N"), py::arg("kind"), py::arg("xs"), py::arg("convention") = "left",
        "summatory function of Lambda/mu/lambda; convention 'left' or 'midpoint' "
        "(half jump at integer x)");
    m.def("zeta_evaluate", &zeta::zeta_evaluate, py::arg("s_re"), py::arg("s_im"),
          py::arg("terms") = 64);
    m.def("zeta_prime_on_line", &zeta::zeta_prime_on_line, py::arg("gamma"), py::arg("h") = 1e-5,
          py::arg("terms") = 64);
    m.def(
        "build_explicit_model",
        [](const std::string& kind, const std::string& zeros_path,
           const std::string& zeta_prime_path, double T) {
            zeta::ZeroTable table = zeta::ingest_zeros(zeros_path);
            if (!zeta_prime_path.empty()) zeta::load_zeta_prime(table, zeta_prime_path);
            if (T <= 0.0)
                T = zeta::midpoint_truncation(
                    table, std::min<std::size_t>(100, table.gammas.size() - 1));
            return zeta::build_explicit_model(kind_from_string(kind), table, T).model;
        },
        py::arg("kind"), py::arg("zeros_path"), py::arg("zeta_prime_path") = "",
        py::arg("T") = -1.0);
    m.def("explicit_remainder", [](const std::string& kind, double t) {
        return zeta::explicit_remainder(kind_from_string(kind), t);
    });

    m.def(
        "run_suite",
        [](const std::string& name, const std::string& zeros_path,
           const std::string& zeta_prime_path, double scale, std::uint64_t seed) {
            suites::SuiteOptions opt;
            opt.zeros_path = zeros_path;
            opt.zeta_prime_path = zeta_prime_path;
            opt.scale = scale;
            opt.seed = seed;
            std::vector<py::dict> out;
            for (const auto& r : suites::run_suite(name, opt)) {
                py::dict d;
                d["test"] = r.test;
                d["statistic"] = r.statistic;
                d["threshold"] = r.threshold;
                d["n"] = r.n;
                d["verdict"] = r.verdict;
                out.push_back(std::move(d));
            }
            return out;
        },
        py::arg("name"), py::arg("zeros_path") = "", py::arg("zeta_prime_path") = "",
        py::arg("scale") = 1.0, py::arg("seed") = 20240901,
        "run a verification suite; returns one report dict per check");
}
