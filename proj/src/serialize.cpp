#include "ncfree/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ncfree/errors.hpp"

namespace ncfree::io {

namespace {

mpq_class rational_from(const Json& v, const std::string& where) {
  if (v.is_number_integer()) return mpq_class(v.get<long>());
  if (v.is_string()) {
    const Scalar s = Scalar::parse(v.get<std::string>());
    if (!s.is_real()) throw ParseError(where + ": expected a real rational, got " + v.get<std::string>());
    return s.re();
  }
  throw ParseError(where + ": expected a rational as a string or integer");
}

Scalar scalar_from(const Json& v, const std::string& where) {
  if (v.is_number_integer()) return Scalar(v.get<long>());
  if (v.is_string()) return Scalar::parse(v.get<std::string>());
  throw ParseError(where + ": expected a scalar as a string or integer");
}

std::string rational_str(const mpq_class& q) { return Scalar(q).str(); }

const Json& require(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  return doc.at(key);
}

Word word_from(const std::string& text, int n) {
  if (text == "1") return Word();
  const NcPoly p = NcPoly::parse(text, n);
  if (p.term_count() != 1 || !(p.terms().begin()->second == Scalar(1))) {
    throw ParseError("expected a single word, got \"" + text + "\"");
  }
  return p.terms().begin()->first;
}

double number_from(const Json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return rational_from(v, where).get_d();
  throw ParseError(where + ": expected a number");
}

}  // namespace

DistributionSpec spec_from_json(const Json& doc) {
  try {
    const std::string family = require(doc, "family").get<std::string>();
    const int n = require(doc, "n").get<int>();
    const int bound = doc.value("degree_bound", 12);
    if (family == "semicircular") {
      std::vector<mpq_class> variances;
      if (doc.contains("variances")) {
        for (const auto& v : doc.at("variances")) variances.push_back(rational_from(v, "variances"));
      } else {
        variances.assign(static_cast<std::size_t>(std::max(n, 0)), mpq_class(1));
      }
      if (static_cast<int>(variances.size()) != n) throw ParseError("variances must list one entry per generator");
      return DistributionSpec::semicircular(std::move(variances), bound);
    }
    if (family == "free") {
      std::vector<std::vector<mpq_class>> moments;
      for (const auto& seq : require(doc, "moments")) {
        auto& out = moments.emplace_back();
        for (const auto& v : seq) out.push_back(rational_from(v, "moments"));
      }
      if (static_cast<int>(moments.size()) != n) throw ParseError("moments must list one sequence per generator");
      return DistributionSpec::free_family(std::move(moments), bound);
    }
    if (family == "explicit") {
      std::map<Word, Scalar> table;
      for (const auto& entry : require(doc, "moments")) {
        table[word_from(require(entry, "word").get<std::string>(), n)] = scalar_from(require(entry, "value"), "value");
      }
      return DistributionSpec::explicit_moments(n, std::move(table), bound);
    }
    throw ParseError("unknown family \"" + family + "\" (expected semicircular, free or explicit)");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed spec document: ") + e.what());
  }
}

Json spec_to_json(const DistributionSpec& spec) {
  Json doc;
  std::visit(
      [&](const auto& fam) {
        using T = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<T, SemicircularFamily>) {
          doc["family"] = "semicircular";
          doc["n"] = spec.n;
          Json vs = Json::array();
          for (const auto& v : fam.variances) vs.push_back(rational_str(v));
          doc["variances"] = vs;
        } else if constexpr (std::is_same_v<T, FreeFamily>) {
          doc["family"] = "free";
          doc["n"] = spec.n;
          Json ms = Json::array();
          for (const auto& seq : fam.moments) {
            Json row = Json::array();
            for (const auto& v : seq) row.push_back(rational_str(v));
            ms.push_back(row);
          }
          doc["moments"] = ms;
        } else {
          doc["family"] = "explicit";
          doc["n"] = spec.n;
          Json ms = Json::array();
          for (const auto& [w, v] : fam.table) ms.push_back({{"word", w.str()}, {"value", v.str()}});
          doc["moments"] = ms;
        }
      },
      spec.family);
  doc["degree_bound"] = spec.degree_bound;
  return doc;
}

std::optional<randmat::EnsembleConfig> ensemble_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("ensemble")) return std::nullopt;
  try {
    const Json& e = doc.at("ensemble");
    randmat::EnsembleConfig config;
    config.dim = require(e, "dim").get<int>();
    config.samples = e.value("samples", 1);
    config.seed = e.value("seed", std::uint64_t{0});
    for (const auto& g : require(e, "generators")) {
      const std::string type = require(g, "type").get<std::string>();
      if (type == "gue") {
        config.generators.push_back(
            randmat::GeneratorEnsemble::gue(g.contains("variance") ? number_from(g.at("variance"), "variance") : 1.0));
      } else if (type == "rademacher") {
        config.generators.push_back(randmat::GeneratorEnsemble::rademacher());
      } else if (type == "moments") {
        std::vector<double> m;
        for (const auto& v : require(g, "moments")) m.push_back(number_from(v, "moments"));
        config.generators.push_back(randmat::GeneratorEnsemble::from_moments(std::move(m)));
      } else {
        throw ParseError("unknown generator type \"" + type + "\" (expected gue, rademacher or moments)");
      }
    }
    config.validate();
    return config;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed ensemble section: ") + e.what());
  }
}

Json ensemble_to_json(const randmat::EnsembleConfig& config) {
  Json gens = Json::array();
  for (const auto& g : config.generators) {
    switch (g.kind) {
      case randmat::EnsembleKind::GUE:
        gens.push_back({{"type", "gue"}, {"variance", g.variance}});
        break;
      case randmat::EnsembleKind::DiagonalRademacher:
        gens.push_back({{"type", "rademacher"}});
        break;
      case randmat::EnsembleKind::DiagonalFromMoments:
        gens.push_back({{"type", "moments"}, {"moments", g.moments}});
        break;
    }
  }
  return {{"dim", config.dim}, {"samples", config.samples}, {"seed", config.seed}, {"generators", gens}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json load_document(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Json report_to_json(const VerificationReport& report) {
  Json failures = Json::array();
  for (const auto& f : report.failures) {
    failures.push_back({{"j", f.j}, {"word", f.word.str()}, {"lhs", f.lhs.str()}, {"rhs", f.rhs.str()}});
  }
  Json doc;
  doc["degree"] = report.max_degree_checked;
  doc["words_checked"] = report.words_checked;
  doc["passed"] = report.passed();
  doc["failures"] = failures;
  doc["not_self_adjoint"] = report.not_self_adjoint;
  return doc;
}

Json kernel_to_json(const std::vector<NcPoly>& kernel) {
  Json out = Json::array();
  for (const auto& p : kernel) out.push_back(p.str());
  return out;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json spectral_to_json(const randmat::SpectralReport& report, bool with_eigenvalues) {
  Json atoms = Json::array();
  for (const auto& a : report.scan.atoms) atoms.push_back({{"location", a.location}, {"mass", a.mass}});
  Json bins = Json::array();
  const double w = report.hist.bin_width();
  for (std::size_t k = 0; k < report.hist.counts.size(); ++k) {
    bins.push_back({{"lo", report.hist.lo + w * static_cast<double>(k)},
                    {"hi", report.hist.lo + w * static_cast<double>(k + 1)},
                    {"count", report.hist.counts[k]}});
  }
  Json doc;
  doc["dim"] = report.dim;
  doc["samples"] = report.samples;
  doc["eigenvalue_count"] = report.eigenvalues.size();
  if (!report.eigenvalues.empty()) {
    doc["min"] = report.eigenvalues.front();
    doc["max"] = report.eigenvalues.back();
  }
  doc["max_hermitian_residual"] = report.max_imag_residual;
  doc["atom_scan"] = {{"window_width", report.scan.window_width},
                      {"floor", report.scan.floor},
                      {"max_mass", report.scan.max_mass},
                      {"max_raw_window_mass", report.scan.max_raw_window_mass},
                      {"atoms", atoms}};
  doc["histogram"] = bins;
  if (with_eigenvalues) doc["eigenvalues"] = report.eigenvalues;
  return doc;
}

std::string eigenvalues_csv(const randmat::SpectralReport& report) {
  std::string out = "eigenvalue\n";
  for (double e : report.eigenvalues) {
    out += format_double(e);
    out += '\n';
  }
  return out;
}

std::string histogram_csv(const randmat::Histogram& hist) {
  std::string out = "bin_lo,bin_hi,count\n";
  const double w = hist.bin_width();
  for (std::size_t k = 0; k < hist.counts.size(); ++k) {
    out += format_double(hist.lo + w * static_cast<double>(k)) + ',' +
           format_double(hist.lo + w * static_cast<double>(k + 1)) + ',' + std::to_string(hist.counts[k]) + '\n';
  }
  return out;
}

}  // namespace ncfree::io
