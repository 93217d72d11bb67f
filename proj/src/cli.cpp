#include "ncfree/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "ncfree/conjugate.hpp"
#include "ncfree/derivations.hpp"
#include "ncfree/errors.hpp"
#include "ncfree/randmat.hpp"
#include "ncfree/reduction.hpp"
#include "ncfree/serialize.hpp"
#include "ncfree/version.hpp"

namespace ncfree::cli {

using io::Json;

namespace {

const std::vector<std::pair<std::string, Command>> kCommands = {
    {"verify-conjugate", Command::VerifyConjugate}, {"duality", Command::Duality},
    {"reduce", Command::Reduce},                    {"relations", Command::Relations},
    {"spectrum", Command::Spectrum},                {"margins", Command::Margins},
    {"report", Command::Report}};

class UsageError : public Error {
 public:
  using Error::Error;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::vector<NcPoly> parse_list(const std::string& text, int n) {
  std::vector<NcPoly> out;
  for (const auto& part : split(text, ';')) out.push_back(NcPoly::parse(part, n));
  return out;
}

Word parse_word_flag(const std::string& text) {
  std::vector<Word::Letter> letters;
  for (const auto& part : split(text, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size() || v < 1) throw UsageError("--word expects i1,i2,... with 1-based indices");
    letters.push_back(v);
  }
  return Word(std::move(letters));
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// A table for CSV output: header plus rows, already formatted.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const {
    auto quote = [](const std::string& s) {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      return q + "\"";
    };
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t k = 0; k < cells.size(); ++k) out += (k ? "," : "") + quote(cells[k]);
      out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }
};

struct Outcome {
  int status = kExitOk;
  Json result;
  Table table;
  std::string summary;                                   // one line for the terminal
  std::vector<std::pair<std::string, std::string>> extra;  // CSV side files: suffix -> payload
  std::optional<std::uint64_t> seed;
};

struct Context {
  const RunConfig& config;
  Json doc;
  DistributionSpec spec;
  std::string digest;
};

int required_degree(const RunConfig& c) {
  if (!c.degree) throw UsageError(command_name(c.command) + " needs --degree");
  if (*c.degree < 0) throw UsageError("--degree must be non-negative");
  return *c.degree;
}

const std::string& required(const std::optional<std::string>& v, const char* flag, Command c) {
  if (!v) throw UsageError(command_name(c) + " needs " + flag);
  return *v;
}

ConjugateCandidate candidate_for(const Context& ctx) {
  if (ctx.config.xi) return ConjugateCandidate(parse_list(*ctx.config.xi, ctx.spec.n), TraceFunctional(ctx.spec));
  if (std::holds_alternative<SemicircularFamily>(ctx.spec.family)) return ConjugateCandidate::semicircular(ctx.spec);
  throw UsageError("--xi is required unless the spec is semicircular");
}

randmat::EnsembleConfig ensemble_for(const Context& ctx) {
  auto ens = io::ensemble_from_json(ctx.doc);
  if (!ens) throw UsageError(command_name(ctx.config.command) + " needs an \"ensemble\" section in the spec");
  if (ctx.config.seed) ens->seed = *ctx.config.seed;
  if (ens->num_generators() != ctx.spec.n) {
    throw UsageError("ensemble has " + std::to_string(ens->num_generators()) + " generators, spec has " +
                     std::to_string(ctx.spec.n));
  }
  return *ens;
}

Word::Letter index_for(const Context& ctx) {
  const int j = ctx.config.index;
  if (j < 1 || j > ctx.spec.n) throw UsageError("--index must lie in 1.." + std::to_string(ctx.spec.n));
  return j;
}

Outcome verify_conjugate(const Context& ctx) {
  const int D = required_degree(ctx.config);
  const ConjugateCandidate c = candidate_for(ctx);
  const VerificationReport report = check_conjugate(c, D);
  Outcome o;
  o.result = io::report_to_json(report);
  Json xi = Json::array();
  for (const auto& x : c.xi) xi.push_back(x.str());
  o.result["xi"] = xi;
  if (report.passed()) {
    const FisherInformation f = fisher(c, D);
    o.result["fisher_information"] = {{"exact", f.exact.str()}, {"value", f.value}};
  }
  o.table.header = {"j", "word", "lhs", "rhs"};
  for (const auto& f : report.failures) o.table.rows.push_back({std::to_string(f.j), f.word.str(), f.lhs.str(), f.rhs.str()});
  o.status = report.passed() ? kExitOk : kExitFailure;
  o.summary = report.passed() ? "conjugate relations hold for all " + std::to_string(report.words_checked) +
                                    " words up to degree " + std::to_string(D)
                              : std::to_string(report.failures.size()) + " conjugate relation failures, first at j=" +
                                    std::to_string(report.failures.front().j) + " word " +
                                    report.failures.front().word.str();
  return o;
}

Outcome duality(const Context& ctx) {
  const auto polys = parse_list(required(ctx.config.poly, "--poly \"P1;P2\"", ctx.config.command), ctx.spec.n);
  if (polys.size() != 2) throw UsageError("duality needs --poly \"P1;P2\"");
  const TraceFunctional t(ctx.spec);
  const auto sides = duality_sides(t, polys[0], polys[1], index_for(ctx));
  const bool equal = sides.lhs == sides.rhs;
  Outcome o;
  o.result = {{"index", ctx.config.index}, {"p1", polys[0].str()}, {"p2", polys[1].str()},
              {"lhs", sides.lhs.str()},     {"rhs", sides.rhs.str()},  {"equal", equal}};
  o.table.header = {"side", "polynomial"};
  o.table.rows = {{"lhs", sides.lhs.str()}, {"rhs", sides.rhs.str()}};
  o.status = equal ? kExitOk : kExitFailure;
  o.summary = equal ? "duality identity holds: " + sides.lhs.str() : "duality identity fails";
  return o;
}

Outcome reduce(const Context& ctx) {
  const NcPoly p = NcPoly::parse(required(ctx.config.poly, "--poly", ctx.config.command), ctx.spec.n);
  const Word w = parse_word_flag(required(ctx.config.word, "--word", ctx.config.command));
  if (w.max_letter() > ctx.spec.n) throw UsageError("--word uses a letter beyond n");
  const TraceFunctional t(ctx.spec);
  Outcome o;
  o.table.header = {"quantity", "value"};
  const Scalar expected = p.coeff(w);
  bool ok = true;
  if (ctx.config.projections) {
    std::vector<ProjectionSurrogate> projs;
    for (auto& q : parse_list(*ctx.config.projections, ctx.spec.n)) projs.push_back(make_projection(t, std::move(q)));
    if (projs.size() != w.size()) throw UsageError("--projections needs one polynomial per letter of --word");
    if (static_cast<int>(w.size()) != total_degree(p)) throw UsageError("--word length must equal the degree of P");
    const NcPoly value = iterated_delta_p(t, projs, w, p);
    Scalar weight = expected;
    for (const auto& pr : projs) weight *= pr.trace_weight;
    ok = value == NcPoly::constant(ctx.spec.n, weight);
    o.result = {{"poly", p.str()}, {"word", w.str()}, {"value", value.str()}, {"expected", weight.str()},
                {"match", ok}};
    o.table.rows = {{"value", value.str()}, {"expected", weight.str()}};
  } else {
    const Scalar a = extract_leading_coeff(t, p, w);
    ok = a == expected;
    o.result = {{"poly", p.str()}, {"word", w.str()}, {"coefficient", a.str()}, {"expected", expected.str()},
                {"match", ok}};
    o.table.rows = {{"coefficient", a.str()}, {"expected", expected.str()}};
  }
  o.status = ok ? kExitOk : kExitFailure;
  o.summary = ok ? "reduction recovers " + o.table.rows[0][1] : "reduction mismatch";
  return o;
}

Outcome relations(const Context& ctx) {
  const int D = required_degree(ctx.config);
  const auto kernel = relation_kernel(TraceFunctional(ctx.spec), D);
  Outcome o;
  o.result = {{"degree", D}, {"relations", io::kernel_to_json(kernel)}};
  o.table.header = {"relation"};
  for (const auto& p : kernel) o.table.rows.push_back({p.str()});
  o.status = kernel.empty() ? kExitOk : kExitFailure;
  o.summary = kernel.empty() ? "no algebraic relation up to degree " + std::to_string(D)
                             : std::to_string(kernel.size()) + " relation(s), first: " + kernel.front().str();
  return o;
}

Outcome spectrum_cmd(const Context& ctx) {
  const NcPoly p = NcPoly::parse(required(ctx.config.poly, "--poly", ctx.config.command), ctx.spec.n);
  const auto ens = ensemble_for(ctx);
  randmat::AtomWindowRule rule;
  rule.width_constant = ctx.config.window_constant;
  const auto report = randmat::spectrum(p, ens, ctx.config.bins, rule);
  Outcome o;
  o.seed = ens.seed;
  o.result = io::spectral_to_json(report, ctx.config.format == Format::Structured);
  o.result["poly"] = p.str();
  o.result["ensemble"] = io::ensemble_to_json(ens);
  o.table.header = {"eigenvalue"};
  for (double e : report.eigenvalues) o.table.rows.push_back({io::format_double(e)});
  o.extra.push_back({".hist.csv", io::histogram_csv(report.hist)});
  std::ostringstream s;
  s << report.eigenvalues.size() << " eigenvalues in [" << report.eigenvalues.front() << ", "
    << report.eigenvalues.back() << "], max atom mass " << report.scan.max_mass << ", " << report.scan.atoms.size()
    << " atom(s) above floor " << report.scan.floor;
  o.summary = s.str();
  return o;
}

Outcome margins_cmd(const Context& ctx) {
  const auto polys = parse_list(required(ctx.config.poly, "--poly", ctx.config.command), ctx.spec.n);
  if (polys.empty() || polys.size() > 2) throw UsageError("margins takes --poly \"Y1\" or \"Y1;Y2\"");
  const NcPoly& y1 = polys[0];
  const NcPoly y2 = polys.size() == 2 ? polys[1] : NcPoly::constant(ctx.spec.n, 1);
  const auto ens = ensemble_for(ctx);
  const ConjugateCandidate c = candidate_for(ctx);
  const auto m = randmat::empirical_margins(c, index_for(ctx), y1, y2, ens, ctx.config.lanczos_steps);
  const auto& cf = m.closed_forms;
  const std::vector<std::tuple<std::string, double, double>> rows = {
      {"xi_p", cf.lhs_right, cf.bound},
      {"p_xi", cf.lhs_left, cf.bound},
      {"right_partial_of_dP", cf.lhs_partial_right, 2 * cf.bound},
      {"left_partial_of_dP", cf.lhs_partial_left, 2 * cf.bound},
      {"dstar_product", m.dstar_product_lhs, m.dstar_product_bound},
      {"right_partial_product", m.right_partial_lhs, m.right_partial_bound},
      {"left_partial_product", m.left_partial_lhs, m.left_partial_bound},
      {"pairing", m.pairing_lhs, m.pairing_bound}};
  Outcome o;
  o.seed = ens.seed;
  Json entries = Json::array();
  o.table.header = {"quantity", "lhs", "bound", "margin"};
  for (const auto& [name, lhs, bound] : rows) {
    entries.push_back({{"quantity", name}, {"lhs", lhs}, {"bound", bound}, {"margin", bound - lhs}});
    o.table.rows.push_back({name, io::format_double(lhs), io::format_double(bound), io::format_double(bound - lhs)});
  }
  const double min_margin = m.min_margin();
  o.result = {{"index", ctx.config.index}, {"y1", y1.str()},          {"y2", y2.str()},
              {"norm_y1", m.norm_y1},      {"norm_y2", m.norm_y2},   {"xi_norm", m.xi_norm},
              {"margins", entries},        {"min_margin", min_margin}, {"slack", ctx.config.slack}};
  o.status = min_margin >= -ctx.config.slack ? kExitOk : kExitFailure;
  o.summary = "minimum margin " + io::format_double(min_margin);
  return o;
}

Outcome report_cmd(const Context& ctx) {
  const TraceFunctional t(ctx.spec);
  const int D = std::min(ctx.config.degree.value_or(4), t.degree_bound());
  Outcome o;
  Json moments = Json::array();
  o.table.header = {"word", "moment"};
  for (const auto& w : words_up_to(ctx.spec.n, static_cast<std::size_t>(std::max(D, 0)))) {
    Scalar m;
    try {
      m = t.moment(w);
    } catch (const DomainError&) {
      continue;  // explicit tables need not cover every word
    }
    moments.push_back({{"word", w.str()}, {"value", m.str()}});
    o.table.rows.push_back({w.str(), m.str()});
  }
  o.result = {{"spec", io::spec_to_json(ctx.spec)}, {"effective_degree_bound", t.degree_bound()},
              {"moments", moments}};
  if (const auto* fam = std::get_if<FreeFamily>(&ctx.spec.family)) {
    Json cum = Json::array();
    for (const auto& seq : fam->moments) {
      Json row = Json::array();
      for (const auto& k : free_cumulants(seq)) row.push_back(Scalar(k).str());
      cum.push_back(row);
    }
    o.result["free_cumulants"] = cum;
  }
  if (std::holds_alternative<SemicircularFamily>(ctx.spec.family)) {
    const auto c = ConjugateCandidate::semicircular(ctx.spec);
    o.result["fisher_information"] = fisher(c, std::min(D, t.degree_bound() - 1)).exact.str();
  }
  o.summary = std::to_string(moments.size()) + " moments up to length " + std::to_string(D);
  return o;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
  if (!f) throw UsageError("write failed for " + path);
}

std::string sibling(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix)).string();
}

}  // namespace

std::string command_name(Command c) {
  for (const auto& [name, cmd] : kCommands)
    if (cmd == c) return name;
  return "?";
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) throw Error("SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out += hex[md[k] >> 4];
    out += hex[md[k] & 15];
  }
  return out;
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                                    int& exit_code) {
  RunConfig cfg;
  CLI::App app{"ncfree: conjugate variables, relations and matrix-model spectra for non-commutative polynomials"};
  std::map<std::string, Command> commands(kCommands.begin(), kCommands.end());
  std::string format = "structured";
  int degree = -1;
  std::uint64_t seed = 0;

  app.add_option("command", cfg.command, "verify-conjugate | duality | reduce | relations | spectrum | margins | report")
      ->required()
      ->transform(CLI::CheckedTransformer(commands, CLI::ignore_case));
  app.add_option("--spec", cfg.spec_path, "distribution spec document (JSON)")->required();
  auto* deg = app.add_option("--degree", degree, "maximal word length D");
  auto* sd = app.add_option("--seed", seed, "root seed, overrides the ensemble section");
  app.add_option("--out", cfg.out_path, "output path (stdout if omitted)");
  app.add_option("--format", format, "structured | csv")->check(CLI::IsMember({"structured", "csv"}));
  app.add_option("--xi", cfg.xi, "conjugate candidates \"xi1;...;xin\"");
  app.add_option("--poly", cfg.poly, "polynomial(s) in ncpoly text form, ';'-separated where a pair is needed");
  app.add_option("--word", cfg.word, "letters i1,i2,... for reduce");
  app.add_option("--projections", cfg.projections, "reduce: projection surrogates \"p1;...;pd\"");
  app.add_option("--index", cfg.index, "generator index j (duality, margins)");
  app.add_option("--bins", cfg.bins, "histogram bins (spectrum)")->check(CLI::PositiveNumber);
  app.add_option("--window-constant", cfg.window_constant, "atom window h(N) = c / sqrt(N)")
      ->check(CLI::PositiveNumber);
  app.add_option("--lanczos-steps", cfg.lanczos_steps, "Lanczos steps for operator norms")->check(CLI::PositiveNumber);
  app.add_option("--slack", cfg.slack, "tolerated negative margin (margins)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    exit_code = kExitOk;
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    exit_code = kExitUsage;
    return std::nullopt;
  }
  if (deg->count()) cfg.degree = degree;
  if (sd->count()) cfg.seed = seed;
  cfg.format = format == "csv" ? Format::Csv : Format::Structured;
  exit_code = kExitOk;
  return cfg;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Outcome outcome;
  std::string digest;
  try {
    const std::string text = io::read_file(config.spec_path);
    digest = sha256_hex(text);
    Json doc;
    try {
      doc = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(config.spec_path + ": " + e.what());
    }
    Context ctx{config, doc, io::spec_from_json(doc), digest};
    switch (config.command) {
      case Command::VerifyConjugate: outcome = verify_conjugate(ctx); break;
      case Command::Duality: outcome = duality(ctx); break;
      case Command::Reduce: outcome = reduce(ctx); break;
      case Command::Relations: outcome = relations(ctx); break;
      case Command::Spectrum: outcome = spectrum_cmd(ctx); break;
      case Command::Margins: outcome = margins_cmd(ctx); break;
      case Command::Report: outcome = report_cmd(ctx); break;
    }
  } catch (const DegreeBoundExceeded& e) {
    err << "error: degree bound exceeded: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  Json meta = {{"version", kVersion},
               {"command", command_name(config.command)},
               {"seed", outcome.seed ? Json(*outcome.seed) : Json(nullptr)},
               {"spec_digest", "sha256:" + digest},
               {"generator", randmat::kGeneratorName},
               {"timestamp", utc_timestamp()}};

  try {
    if (config.format == Format::Structured) {
      Json doc = {{"metadata", meta}, {"status", outcome.status}, {"result", outcome.result}};
      const std::string text = doc.dump(2) + "\n";
      if (config.out_path.empty()) out << text;
      else write_text(config.out_path, text);
    } else if (config.out_path.empty()) {
      out << outcome.table.str();
      err << meta.dump() << "\n";
    } else {
      write_text(config.out_path, outcome.table.str());
      for (const auto& [suffix, payload] : outcome.extra) write_text(sibling(config.out_path, suffix), payload);
      Json meta_doc = {{"metadata", meta}, {"status", outcome.status}, {"result", outcome.result}};
      if (config.command == Command::Spectrum) meta_doc["result"].erase("eigenvalues");
      write_text(sibling(config.out_path, ".meta.json"), meta_doc.dump(2) + "\n");
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  err << outcome.summary << "\n";
  return outcome.status;
}

}  // namespace ncfree::cli
