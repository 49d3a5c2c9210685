#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "dinfra/error.hpp"
#include "dinfra/evaluation.hpp"
#include "dinfra/pipeline.hpp"
#include "dinfra/registry.hpp"
#include "dinfra/similarity.hpp"

namespace py = pybind11;
using namespace dinfra;

namespace {

// pybind11 holders cannot be pointers to const; models are never mutated.
using ModelPtr = std::shared_ptr<DsmModel>;

ModelPtr hold(std::shared_ptr<const DsmModel> p) { return std::const_pointer_cast<DsmModel>(std::move(p)); }

py::object to_python(const TermVector& v) {
  if (const auto* dense = std::get_if<DenseVector>(&v)) return py::cast(*dense);
  const auto& sparse = std::get<SparseVector>(v);
  py::dict d;
  for (std::size_t i = 0; i < sparse.indices.size(); ++i) d[py::int_(sparse.indices[i])] = sparse.values[i];
  return d;
}

ModelPtr train(const std::vector<std::string>& documents, const std::string& kind,
               const std::string& language, std::optional<std::uint32_t> dimension,
               std::uint64_t min_count, std::optional<int> window, std::optional<std::uint64_t> seed,
               std::optional<std::vector<std::string>> stopwords) {
  TrainOptions o;
  o.kind = parse_model_kind(kind);
  o.language = language;
  o.vocabulary.min_count = min_count;
  if (dimension) set_dimension(o, *dimension);
  if (window) o.ri.window_size = *window;
  if (seed) {
    o.ri.seed = *seed;
    o.lsa.svd_seed = *seed;
  }
  if (stopwords) {
    for (const auto& w : *stopwords)
      if (auto t = normalize_term(w, {language, false})) o.vocabulary.stopwords.insert(*t);
  } else if (auto path = default_stopwords_path(language)) {
    o.vocabulary.stopwords = load_stopwords(*path, {language, false});
  }
  validate(o);
  py::gil_scoped_release release;
  return train_model(CorpusSource::from_documents(documents, language), o);
}

py::dict evaluate_pairs(const ModelPtr& model,
                        const std::vector<std::tuple<std::string, std::string, double>>& pairs,
                        const std::string& measure, const std::string& oov_policy) {
  WordPairDataset ds{DatasetName::Custom, model->language(), {}};
  for (const auto& [a, b, s] : pairs) ds.pairs.push_back({a, b, s});
  const auto r = evaluate(*model, ds, parse_measure(measure), parse_oov_policy(oov_policy));
  py::dict out;
  out["rho"] = r.rho ? py::cast(*r.rho) : py::none();
  out["n_scored"] = r.n_scored;
  out["n_skipped"] = r.n_skipped;
  py::list scores;
  for (const auto& p : r.per_pair) scores.append(p.model_score ? py::cast(*p.model_score) : py::none());
  out["scores"] = scores;
  return out;
}

py::dict descriptor_dict(const ModelDescriptor& d) {
  py::dict out;
  out["language"] = d.language;
  out["kind"] = std::string(to_string(d.kind));
  out["config_fingerprint"] = d.config_fingerprint;
  out["corpus_id"] = d.corpus_id;
  out["created_at"] = d.created_at;
  out["file_path"] = d.file_path.string();
  return out;
}

}  // namespace

PYBIND11_MODULE(_dinfra, m) {
  m.doc() = "Distributional semantic models: training, relatedness and evaluation";

  static py::exception<Error> base(m, "DinfraError");
  static py::exception<TermNotFoundError> not_found(m, "TermNotFoundError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const TermNotFoundError& e) {
      PyErr_SetString(not_found.ptr(), e.what());
    } catch (const Error& e) {
      PyErr_SetString(base.ptr(), (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  m.def("supported_languages", [] {
    std::vector<std::string> out;
    for (auto code : supported_languages()) out.emplace_back(code);
    return out;
  });
  m.def("tokenize",
        [](const std::string& text, const std::string& language, bool stemming) {
          return tokenize(text, {language, stemming});
        },
        py::arg("text"), py::arg("language") = "en", py::arg("stemming") = false);
  m.def("spearman",
        [](const std::vector<double>& xs, const std::vector<double>& ys) {
          return spearman(std::span(xs), std::span(ys));
        },
        py::arg("xs"), py::arg("ys"));

  py::class_<DsmModel, ModelPtr>(m, "Model")
      .def_property_readonly("kind", [](const DsmModel& self) { return std::string(to_string(self.kind())); })
      .def_property_readonly("language", &DsmModel::language)
      .def_property_readonly("n_terms", [](const DsmModel& self) { return self.vocabulary().size(); })
      .def("terms",
           [](const DsmModel& self) {
             std::vector<std::string> out;
             for (const auto& e : self.vocabulary().entries()) out.push_back(e.term);
             return out;
           })
      .def("vector",
           [](const DsmModel& self, const std::string& term) -> py::object {
             const auto v = self.vector(std::string_view(term));
             return v ? to_python(*v) : py::none();
           },
           py::arg("term"), "L2-normalized vector (list, or {index: value} for ESA); None if unknown")
      .def("relatedness",
           [](const DsmModel& self, const std::string& a, const std::string& b, const std::string& measure) {
             const auto s = relatedness(self, a, b, parse_measure(measure));
             return py::make_tuple(s.normalized, s.raw);
           },
           py::arg("term1"), py::arg("term2"), py::arg("measure") = "cosine",
           "(normalized score in [0, 1], raw measure value)")
      .def("__repr__", [](const DsmModel& self) {
        return "<dinfra.Model " + std::string(to_string(self.kind())) + " " + self.language() + " " +
               std::to_string(self.vocabulary().size()) + " terms>";
      });

  m.def("train", &train, py::arg("documents"), py::arg("kind") = "esa", py::arg("language") = "en",
        py::arg("dimension") = py::none(), py::arg("min_count") = 1, py::arg("window") = py::none(),
        py::arg("seed") = py::none(), py::arg("stopwords") = py::none(),
        "Train a model on in-memory documents. stopwords=None uses the bundled list.");
  m.def("evaluate", &evaluate_pairs, py::arg("model"), py::arg("pairs"), py::arg("measure") = "cosine",
        py::arg("oov_policy") = "skip");
  m.def("load_dataset",
        [](const std::filesystem::path& path, const std::string& name, const std::string& language) {
          std::vector<std::tuple<std::string, std::string, double>> out;
          for (const auto& p : load_dataset(parse_dataset_name(name), language, path).pairs)
            out.emplace_back(p.word1, p.word2, p.human_score);
          return out;
        },
        py::arg("path"), py::arg("name") = "custom", py::arg("language") = "en");
  m.def("save",
        [](const ModelPtr& model, const std::filesystem::path& root, const std::string& corpus_id, bool overwrite) {
          return save_model(*model, describe(*model, corpus_id), root, {overwrite}).string();
        },
        py::arg("model"), py::arg("root"), py::arg("corpus_id") = "python", py::arg("overwrite") = false);
  m.def("load",
        [](const std::filesystem::path& root, const std::string& language, const std::string& kind) {
          return hold(ModelRegistry(root).get(language, parse_model_kind(kind)));
        },
        py::arg("root"), py::arg("language"), py::arg("kind"));
  m.def("load_file", [](const std::filesystem::path& file) { return hold(load_model_file(file)); }, py::arg("file"));
  m.def("list_models",
        [](const std::filesystem::path& root) {
          py::list out;
          for (const auto& d : list_models(root)) out.append(descriptor_dict(d));
          return out;
        },
        py::arg("root"));
}
