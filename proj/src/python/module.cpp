#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polydense/constructions.hpp"
#include "polydense/diagnostics.hpp"
#include "polydense/error.hpp"
#include "polydense/factor_set.hpp"
#include "polydense/json_format.hpp"
#include "polydense/polynomial.hpp"
#include "polydense/report.hpp"
#include "polydense/sequences.hpp"
#include "polydense/sieve.hpp"

namespace py = pybind11;
using namespace polydense;

namespace {

std::vector<std::pair<std::uint64_t, unsigned>> factor_pairs(const Factorization& f) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (const auto& pp : f.factors) out.emplace_back(pp.prime, pp.exponent);
  return out;
}

// Factor sets cross the boundary as JSON text; the Python side decodes it.
std::string factor_set_json(const std::string& seq, std::uint64_t prime_bound, std::uint64_t element_bound,
                            bool exact, unsigned workers) {
  const auto spec = parse_sequence(seq);
  const PrimeSieve sieve(SieveOptions{.limit = std::max<std::uint64_t>(prime_bound, 2), .workers = workers});
  const auto fs = exact ? factor_set_exact(sieve, spec, prime_bound, workers)
                        : factor_set_by_scan(sieve, spec, element_bound == 0 ? prime_bound : element_bound,
                                             prime_bound, workers);
  return dump_json(factor_set_to_json(fs));
}

py::dict density_check(const std::string& seq, double alpha, double K, std::uint64_t lo, std::uint64_t hi) {
  const auto check = check_polynomial_density(parse_sequence(seq), alpha, K, lo, hi);
  py::dict d;
  d["holds"] = check.holds;
  d["counterexample"] = check.counterexample ? py::cast(*check.counterexample) : py::none();
  d["count_at_counterexample"] = check.count_at_counterexample;
  d["required_at_counterexample"] = check.required_at_counterexample;
  return d;
}

py::dict stieltjes(const std::string& seq, double alpha, std::uint64_t N, double coefficient) {
  const PrimeSieve sieve(N);
  const auto spec = parse_sequence(seq);
  const auto fs = has_exact_method(spec) ? factor_set_exact(sieve, spec, N) : factor_set_by_scan(sieve, spec, N, N);
  const auto t = stieltjes_identity(PiSTable(fs), alpha, N, coefficient);
  py::dict d;
  d["lhs"] = t.lhs;
  d["boundary"] = t.boundary;
  d["integral"] = t.integral;
  d["coefficient"] = t.coefficient;
  d["rhs"] = t.rhs;
  d["residual"] = t.residual;
  return d;
}

py::tuple execute_command(const std::string& command, const py::dict& options) {
  RunConfig c;
  c.command = command;
  for (const auto& [key_obj, value] : options) {
    const auto key = py::cast<std::string>(key_obj);
    if (key == "seq") c.sequence = py::cast<std::string>(value);
    else if (key == "alpha") c.alpha = py::cast<double>(value);
    else if (key == "K") c.K = py::cast<double>(value);
    else if (key == "N") c.N = py::cast<std::uint64_t>(value);
    else if (key == "element_bound") c.element_bound = py::cast<std::uint64_t>(value);
    else if (key == "prime_bound") c.prime_bound = py::cast<std::uint64_t>(value);
    else if (key == "range") std::tie(c.range_lo, c.range_hi) = py::cast<std::pair<std::uint64_t, std::uint64_t>>(value);
    else if (key == "weights") c.weights = py::cast<std::string>(value);
    else if (key == "exact") c.exact = py::cast<bool>(value);
    else if (key == "n_max") c.n_max = py::cast<std::uint64_t>(value);
    else if (key == "format") c.format = parse_format(py::cast<std::string>(value));
    else if (key == "sieve_limit") c.sieve_limit = py::cast<std::uint64_t>(value);
    else if (key == "workers") c.workers = py::cast<unsigned>(value);
    else throw PreconditionError("unknown option '" + key + "'");
  }
  RunOutcome outcome;
  {
    py::gil_scoped_release release;
    outcome = execute(c);
  }
  return py::make_tuple(outcome.exit_code, outcome.report, outcome.diagnostic);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<PrimeSieve>(m, "PrimeSieve")
      .def(py::init([](std::uint64_t limit, bool smallest_factor_table, unsigned workers) {
             return PrimeSieve(SieveOptions{.limit = limit, .smallest_factor_table = smallest_factor_table,
                                            .workers = workers});
           }),
           py::arg("limit"), py::arg("smallest_factor_table") = false, py::arg("workers") = 1)
      .def_property_readonly("limit", &PrimeSieve::limit)
      .def("is_prime", &PrimeSieve::is_prime)
      .def("prime_count", &PrimeSieve::prime_count)
      .def("primes_up_to", &PrimeSieve::primes_up_to)
      .def("smallest_prime_factor", &PrimeSieve::smallest_prime_factor)
      .def("factorize", [](const PrimeSieve& s, std::uint64_t n) { return factor_pairs(s.factorize(n)); });

  m.def("miller_rabin", &miller_rabin);
  m.def("sequence_window",
        [](const std::string& seq, std::uint64_t bound) { return enumerate_window(parse_sequence(seq), bound).elements; });
  m.def("counting_function", [](const std::string& seq, std::uint64_t n) {
    return counting_function(parse_sequence(seq), n);
  });
  m.def("canonical_sequence", [](const std::string& seq) { return render_sequence(parse_sequence(seq)); });
  m.def("density_check", &density_check, py::arg("seq"), py::arg("alpha"), py::arg("K"), py::arg("lo"),
        py::arg("hi"));
  m.def("roots_mod_p", [](const std::vector<std::int64_t>& c, std::uint64_t p) { return roots_mod_p(c, p); });
  m.def("factor_set_json", &factor_set_json, py::arg("seq"), py::arg("prime_bound"), py::arg("element_bound") = 0,
        py::arg("exact") = false, py::arg("workers") = 1);
  m.def("stieltjes_identity", &stieltjes, py::arg("seq"), py::arg("alpha"), py::arg("N"),
        py::arg("coefficient") = 0.0);
  m.def("comparability_check", [](double alpha, const std::vector<std::uint64_t>& primes) {
    const auto r = comparability_check(alpha, primes);
    return py::dict(py::arg("pass") = r.pass, py::arg("checked") = r.checked, py::arg("right_prime") = r.right_prime,
                    py::arg("right_equalities") = r.right_equalities, py::arg("first_failure") = r.first_failure);
  });
  m.def("prime_in_interval", &prime_in_interval, py::arg("n"), py::arg("alpha"));
  m.def("execute", &execute_command, py::arg("command"), py::arg("options"));
}
