#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "motifclust/model.hpp"
#include "motifclust/motif_io.hpp"
#include "motifclust/prior_sim.hpp"
#include "motifclust/sampler.hpp"
#include "motifclust/summaries.hpp"

namespace py = pybind11;
using namespace motifclust;

namespace {

std::vector<std::vector<std::int64_t>> rows_of(const CountMatrix& m) {
  std::vector<std::vector<std::int64_t>> rows;
  for (int k = 0; k < 4; ++k) rows.push_back(m.row(static_cast<Base>(k)));
  return rows;
}

CountMatrix matrix_from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
  if (rows.size() != 4) throw std::invalid_argument("expected four rows in A, C, G, T order");
  return from_rows({rows[0], rows[1], rows[2], rows[3]});
}

py::dict record_to_dict(const MotifRecord& r) {
  py::dict d;
  d["id"] = r.id;
  d["name"] = r.name;
  d["family"] = r.family;
  d["species"] = r.species;
  d["counts"] = rows_of(r.matrix);
  return d;
}

Hyperparameters make_hyper(double alpha, double b, double lambda, int min_width,
                           std::array<double, 4> theta0, const std::string& prior) {
  Hyperparameters h;
  h.alpha = alpha;
  h.b = b;
  h.lambda = lambda;
  h.min_width = min_width;
  h.theta0 = theta0;
  h.prior = prior_kind_from_string(prior);
  h.validate();
  return h;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bayesian clustering of motif count matrices";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def("parse_motifs", [](const std::string& text, const std::string& format, bool strict) {
        ParseOptions options;
        options.strict_column_sums = strict;
        MotifFormat f = format == "auto"       ? detect_format(text)
                        : format == "transfac" ? MotifFormat::Transfac
                                               : MotifFormat::Jaspar;
        if (format != "auto" && format != "jaspar" && format != "transfac") {
          throw std::invalid_argument("format must be auto, jaspar or transfac");
        }
        py::list out;
        for (const auto& r : parse_motifs(text, f, options).records) out.append(record_to_dict(r));
        return out;
      },
      py::arg("text"), py::arg("format") = "auto", py::arg("strict_column_sums") = false);

  m.def("consensus", [](const std::vector<std::vector<std::int64_t>>& rows) {
        return consensus_string(matrix_from_rows(rows));
      },
      py::arg("counts"));

  m.def("log_dm_column", [](std::array<std::int64_t, 4> c, double alpha) { return log_dm_column(c, alpha); },
        py::arg("counts"), py::arg("alpha") = 1.0);

  m.def("log_partition_prior",
        [](const std::vector<int>& labels, double b, const std::string& prior) {
          Hyperparameters h;
          h.b = b;
          h.prior = prior_kind_from_string(prior);
          return log_partition_prior(labels, h);
        },
        py::arg("labels"), py::arg("b") = 1.0, py::arg("prior") = "dp");

  m.def("simulate_partitions",
        [](int n, double b, const std::string& prior, int replicates, std::uint64_t seed) {
          return simulate_partitions({n, b, prior_kind_from_string(prior), replicates, seed});
        },
        py::arg("n"), py::arg("b") = 1.0, py::arg("prior") = "dp", py::arg("replicates") = 1000,
        py::arg("seed") = 1);

  m.def("cluster",
        [](const std::vector<std::vector<std::vector<std::int64_t>>>& matrices, std::int64_t iterations,
           std::uint64_t seed, double alpha, double b, double lambda, int min_width,
           std::array<double, 4> theta0, const std::string& prior) {
          std::vector<CountMatrix> data;
          for (const auto& rows : matrices) data.push_back(matrix_from_rows(rows));
          RunTrace trace;
          {
            py::gil_scoped_release release;
            const ClusterModel model(std::move(data), make_hyper(alpha, b, lambda, min_width, theta0, prior));
            RunConfig config;
            config.iterations = iterations;
            config.seed = seed;
            trace = run(model, config);
          }
          const auto p = pairwise_probabilities(trace);
          std::vector<std::vector<double>> pairwise(p.size(), std::vector<double>(p.size()));
          for (std::size_t i = 0; i < p.size(); ++i) {
            for (std::size_t j = 0; j < p.size(); ++j) pairwise[i][j] = p.at(i, j);
          }
          py::dict out;
          out["assignment"] = trace.best.assignment;
          out["offset"] = trace.best.offset;
          out["width"] = trace.best.width;
          out["log_joint"] = trace.best.log_joint;
          out["pairwise"] = pairwise;
          return out;
        },
        py::arg("matrices"), py::arg("iterations") = 1000, py::arg("seed") = 1, py::arg("alpha") = 1.0,
        py::arg("b") = 1.0, py::arg("lambda_") = 8.0, py::arg("min_width") = 6,
        py::arg("theta0") = std::array<double, 4>{0.25, 0.25, 0.25, 0.25}, py::arg("prior") = "dp");
}
