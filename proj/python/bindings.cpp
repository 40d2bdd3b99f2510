#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "icx/bootstrap.hpp"
#include "icx/distributions.hpp"
#include "icx/empirical.hpp"
#include "icx/harness.hpp"
#include "icx/statistics.hpp"

namespace py = pybind11;
using namespace icx;

namespace {

Sample to_sample(const std::vector<double>& v) { return make_sample(v); }

BootstrapConfig make_config(double alpha, std::size_t resamples, const std::string& scheme,
                            std::uint64_t seed, unsigned threads) {
  BootstrapConfig cfg;
  cfg.alpha = alpha;
  cfg.replicates = resamples;
  cfg.scheme = parse_scheme(scheme);
  cfg.seed = seed;
  cfg.threads = threads;
  cfg.validate();
  return cfg;
}

StatKind parse_kind(const std::string& s) {
  if (s == "ks") return StatKind::KS;
  if (s == "cvm") return StatKind::CvM;
  throw std::invalid_argument("unknown statistic '" + s + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bootstrap tests for the increasing convex order";
  m.attr("__version__") = kVersion;

  m.def("canonical_distribution",
        [](const std::string& text) { return parse_distribution(text).to_string(); },
        py::arg("text"));
  m.def("cdf", [](const std::string& d, double x) { return cdf(parse_distribution(d), x); },
        py::arg("dist"), py::arg("x"));
  m.def("mean", [](const std::string& d) { return mean(parse_distribution(d)); }, py::arg("dist"));
  m.def("stop_loss",
        [](const std::string& d, double t) { return sl_analytic(parse_distribution(d), t); },
        py::arg("dist"), py::arg("t"));
  m.def(
      "sample",
      [](const std::string& d, std::size_t n, std::uint64_t seed, std::uint64_t stream) {
        RandomStream rs(seed, stream);
        const auto s = sample_n(parse_distribution(d), n, rs);
        return std::vector<double>(s.values().begin(), s.values().end());
      },
      py::arg("dist"), py::arg("n"), py::arg("seed"), py::arg("stream") = 0);

  m.def("empirical_stop_loss",
        [](const std::vector<double>& x, double t) { return empirical_sl(to_sample(x), t); },
        py::arg("x"), py::arg("t"));
  m.def(
      "statistic",
      [](const std::vector<double>& x, const std::vector<double>& y, const std::string& kind) {
        return statistic(to_sample(x), to_sample(y), parse_kind(kind));
      },
      py::arg("x"), py::arg("y"), py::arg("kind") = "ks");

  m.def(
      "bootstrap_distribution",
      [](const std::vector<double>& x, const std::vector<double>& y, const std::string& kind,
         std::size_t resamples, const std::string& scheme, std::uint64_t seed, unsigned threads) {
        const auto cfg = make_config(0.05, resamples, scheme, seed, threads);
        py::gil_scoped_release release;
        return bootstrap_distribution(to_sample(x), to_sample(y), parse_kind(kind), cfg);
      },
      py::arg("x"), py::arg("y"), py::arg("kind") = "ks", py::arg("resamples") = 1000,
      py::arg("scheme") = "switched", py::arg("seed") = 0, py::arg("threads") = 0);

  m.def(
      "run_test_json",
      [](const std::vector<double>& x, const std::vector<double>& y, const std::string& stat,
         double alpha, std::size_t resamples, const std::string& scheme, std::uint64_t seed,
         unsigned threads) {
        const auto cfg = make_config(alpha, resamples, scheme, seed, threads);
        const auto which = parse_stat_selection(stat);
        std::vector<TestReport> reports;
        {
          py::gil_scoped_release release;
          reports = run_test(to_sample(x), to_sample(y), which, cfg);
        }
        nlohmann::json out = nlohmann::json::array();
        for (const auto& r : reports) out.push_back(to_json(r));
        return out.dump();
      },
      py::arg("x"), py::arg("y"), py::arg("stat") = "both", py::arg("alpha") = 0.05,
      py::arg("resamples") = 1000, py::arg("scheme") = "switched", py::arg("seed") = 0,
      py::arg("threads") = 0);

  m.def(
      "table1_json",
      [](double tau, const std::vector<double>& alphas) {
        const auto rows = table1(tau, alphas);
        return write_report(rows, ReportFormat::Json);
      },
      py::arg("tau") = 0.75, py::arg("alphas") = std::vector<double>{0.10, 0.05, 0.025});

  m.def(
      "classify_json",
      [](const std::string& f, const std::string& g, double tau) {
        const auto df = parse_distribution(f), dg = parse_distribution(g);
        return to_json(classify_pair(df, dg, tau), df, dg, tau).dump();
      },
      py::arg("f"), py::arg("g"), py::arg("tau") = 0.5);
}
