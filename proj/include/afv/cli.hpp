#ifndef AFV_CLI_HPP
#define AFV_CLI_HPP

#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "afv/afop.hpp"
#include "afv/error.hpp"
#include "afv/io.hpp"
#include "afv/mixdisc.hpp"
#include "afv/mixvol.hpp"
#include "afv/selftest.hpp"
#include "afv/spectral.hpp"

namespace afv::cli {

using ojson = nlohmann::ordered_json;

enum ExitCode : int { ok = 0, failed = 1, bad_input = 2 };

struct Options {
  double tol = 1e-9;
  std::string format = "text";
  std::uint64_t seed = 0;
  std::size_t samples = 10000;
};

// ---------------------------------------------------------------------------
// JSON fragments

inline ojson number(double x) { return std::isfinite(x) ? ojson(x) : ojson(to_string(x)); }

inline ojson numbers(std::span<const double> v) {
  ojson a = ojson::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

inline ojson rationals(std::span<const Rational> v) {
  ojson a = ojson::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

inline ojson inertia_json(const Inertia& in) {
  return ojson::array({in.positive, in.zero, in.negative});
}

inline ojson inequality_json(const InequalityReport& r) {
  return {{"lhs", r.lhs.str()},         {"rhs", r.rhs.str()},           {"gap", r.gap.str()},
          {"exact", r.exact()},         {"tol", r.tol},                 {"equality", r.equality},
          {"verdict", r.holds ? "holds" : "violated"}};
}

inline ojson witness_json(const ReverseCsWitness& w) {
  return {{"x", numbers(w.x)}, {"y", numbers(w.y)}, {"residual", number(w.residual)},
          {"certified", w.certified}};
}

// ---------------------------------------------------------------------------
// Operators from input files

/// An operator plus what the input knows about it.
struct OperatorSource {
  std::string family;  // "polygon_fan", "box", "diagonal", "matrix"
  OperatorPair op;
  std::optional<WeightedOperator<Rational>> exact;
  std::optional<Vector<double>> reference;
  QuadOracle oracle;                   // x -> V(x, x, ...) by an independent route
  std::vector<Vector<double>> kernel;  // translation support vectors
};

inline OperatorSource operator_source(const io::InputDocument& doc) {
  const auto& first = doc.records.front();
  OperatorSource src;

  if (const auto* dr = std::get_if<io::DiagonalRecord>(&first.payload)) {
    if (doc.records.size() != 1)
      throw io::line_error(doc.source, doc.records[1].line, "diagonal_operator must be the only record");
    auto exact = diagonal_operator<Rational>(dr->n, dr->matrices);
    src.family = "diagonal";
    src.op = to_double(exact);
    src.exact = std::move(exact);
    src.reference = Vector<double>(dr->n, 1.0);
    std::vector<Matrix<double>> ms;
    for (const auto& m : dr->matrices) ms.push_back(to_double(m));
    src.oracle = [ms, n = dr->n](std::span<const double> x) {
      std::vector<Matrix<double>> args{Matrix<double>::diagonal(x), Matrix<double>::diagonal(x),
                                       Matrix<double>::identity(n)};
      args.insert(args.end(), ms.begin(), ms.end());
      return mixed_discriminant<double>(args);
    };
    return src;
  }

  if (const auto* mr = std::get_if<io::MatrixRecord>(&first.payload)) {
    if (doc.records.size() != 1)
      throw io::line_error(doc.source, doc.records[1].line, "an operator file holds one matrix record");
    const std::size_t n = mr->data.rows();
    if (!mr->data.square()) throw io::line_error(doc.source, first.line, "matrix must be square");
    WeightedOperator<Rational> exact{mr->data, mr->weights.value_or(Vector<Rational>(n, Rational(1)))};
    if (exact.weights.size() != n)
      throw io::line_error(doc.source, first.line, "weights length differs from matrix size");
    for (const auto& w : exact.weights)
      if (w <= 0) throw io::line_error(doc.source, first.line, "weights must be positive");
    if (!is_self_adjoint(exact))
      throw io::line_error(doc.source, first.line, "matrix is not self-adjoint for the given weights");
    if (mr->reference && mr->reference->size() != n)
      throw io::line_error(doc.source, first.line, "reference length differs from matrix size");
    src.family = "matrix";
    src.op = to_double(exact);
    src.exact = std::move(exact);
    src.reference = mr->reference;
    return src;
  }

  const auto bs = io::bodies(doc);
  if (const auto* fan = std::get_if<PolygonFan>(&bs.front())) {
    if (bs.size() != 1)
      throw io::line_error(doc.source, doc.records[1].line, "a polygon operator takes one reference fan");
    src.family = "polygon_fan";
    src.op = polygon_af_operator(*fan);
    src.reference = fan->support();
    src.oracle = [angles = fan->angles()](std::span<const double> x) { return mixed_area(x, x, angles); };
    src.kernel = polygon_translation_vectors(fan->angles());
    return src;
  }

  std::vector<Box> boxes;
  for (std::size_t i = 0; i < bs.size(); ++i) {
    const auto* b = std::get_if<Box>(&bs[i]);
    if (!b) throw io::line_error(doc.source, doc.records[i].line, "operator references must all be boxes");
    boxes.push_back(*b);
  }
  auto exact = box_af_operator(boxes);
  src.family = "box";
  src.op = to_double(exact);
  src.exact = std::move(exact);
  src.reference = to_double(box_support_vector(boxes.front()));
  // V(x, x, P_3, ..., P_n) straight from facet widths: the permanent with two
  // rows of widths of x and one row per reference box.
  src.oracle = [boxes](std::span<const double> x) {
    const std::size_t n = boxes.front().dim();
    Matrix<double> rows(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      rows(0, k) = rows(1, k) = x[2 * k] + x[2 * k + 1];
      for (std::size_t r = 2; r < n; ++r) rows(r, k) = to_double(boxes[r - 2].sides()[k]);
    }
    return detail::box_mixed_volume_from_sides(rows);
  };
  for (std::size_t j = 0; j < boxes.front().dim(); ++j) {
    std::vector<Rational> z(boxes.front().dim(), Rational(0));
    z[j] = 1;
    src.kernel.push_back(to_double(box_translation_vector(z)));
  }
  return src;
}

inline ojson spectrum_json(const SpectralReport& r) {
  ojson j{{"eigenvalues", numbers(r.eigenvalues)},
          {"inertia", inertia_json(r.inertia)},
          {"top_eigenvector", numbers(r.top_eigenvector)},
          {"simple_top", r.simple_top},
          {"bochner_residual_min", number(r.bochner_residual_min)},
          {"dichotomy", r.dichotomy}};
  if (r.reference_angle) {
    j["reference_angle"] = number(*r.reference_angle);
    j["top_aligned"] = r.top_aligned;
  }
  j["verdict"] = to_string(r.verdict);
  return j;
}

// ---------------------------------------------------------------------------
// Subcommands. Each returns an exit code and fills `report`.

inline int cmd_mixvol(const io::InputDocument& doc, const Options& opt, ojson& report) {
  const auto bs = io::bodies(doc);
  const MixedVolume mv = mixed_volume(bs);
  ojson kinds = ojson::array();
  for (const auto& b : bs) kinds.push_back(kind_name(b));
  report["bodies"] = kinds;
  report["engine"] = mv.engine;
  report["value"] = mv.value.str();
  report["exact"] = mv.value.exact();
  bool agree = true;
  if (bs.size() <= 20) {
    const Real oracle = mixed_volume_oracle(bs);
    if (mv.value.exact() && oracle.exact()) {
      agree = mv.value.rational() == oracle.rational();
    } else {
      const double a = mv.value.to_double(), b = oracle.to_double();
      agree = std::abs(a - b) <= opt.tol * std::max({std::abs(a), std::abs(b), 1.0});
    }
    report["oracle"] = oracle.str();
    report["oracle_exact"] = oracle.exact();
  } else {
    report["oracle"] = nullptr;
  }
  report["agree"] = agree;
  report["verdict"] = agree ? "ok" : "engine_mismatch";
  return agree ? ok : failed;
}

inline int cmd_mixdisc(const io::InputDocument& doc, const Options&, ojson& report) {
  const auto ms = io::matrices(doc);
  const Rational d = mixed_discriminant(ms);
  report["matrices"] = ms.size();
  report["value"] = to_string(d);
  report["exact"] = true;
  return ok;
}

inline int cmd_verify_af(const io::InputDocument& doc, const Options& opt, ojson& report) {
  const auto bs = io::bodies(doc);
  if (bs.size() < 2) throw InputError(doc.source + ": verify-af needs K, L and n-2 references");
  const std::vector<ConvexBody> refs(bs.begin() + 2, bs.end());
  const auto rep = verify_af(bs[0], bs[1], refs, opt.tol);
  report["dim"] = dim(bs[0]);
  report.update(inequality_json(rep));
  return rep.holds ? ok : failed;
}

inline int cmd_verify_alexandrov(const io::InputDocument& doc, const Options& opt, ojson& report) {
  const auto ms = io::matrices(doc);
  if (ms.size() < 2) throw InputError(doc.source + ": verify-alexandrov needs A, B and m-2 matrices");
  const std::vector<Matrix<Rational>> rest(ms.begin() + 2, ms.end());
  const auto rep = verify_alexandrov<Rational>(ms[0], ms[1], rest, opt.tol);
  report["dim"] = ms[0].rows();
  report.update(inequality_json(rep));
  return rep.holds ? ok : failed;
}

inline int cmd_af_operator(const io::InputDocument& doc, const Options& opt, ojson& report) {
  const OperatorSource src = operator_source(doc);
  const std::size_t n = src.op.size();
  report["family"] = src.family;
  report["size"] = n;
  report["exact"] = src.exact.has_value();
  ojson rows = ojson::array();
  for (std::size_t i = 0; i < n; ++i)
    rows.push_back(src.exact ? rationals(src.exact->matrix.row(i)) : numbers(src.op.matrix.row(i)));
  report["matrix"] = rows;
  report["weights"] = src.exact ? rationals(src.exact->weights) : numbers(src.op.weights);
  report["self_adjoint"] = src.exact ? is_self_adjoint(*src.exact) : is_self_adjoint(src.op);
  if (src.reference) {
    const auto ah = src.op.matrix * *src.reference;
    double r = 0;
    for (std::size_t i = 0; i < n; ++i) r = std::max(r, std::abs(ah[i] - (*src.reference)[i]));
    report["normalization_residual"] = number(r);
  }
  if (!src.kernel.empty()) {
    double r = 0;
    for (const auto& t : src.kernel)
      for (double x : src.op.matrix * t) r = std::max(r, std::abs(x));
    report["kernel_residual"] = number(r);
  }
  try {
    const auto pr = perron_check(src.op.matrix, src.op.weights);
    report["perron"] = {{"irreducible", pr.irreducible},
                        {"top_simple", pr.top_simple},
                        {"top_vector_positive", pr.top_vector_positive}};
  } catch (const PreconditionError& e) {
    report["perron"] = {{"skipped", e.what()}};
  }
  std::optional<std::span<const double>> ref;
  if (src.reference) ref = *src.reference;
  const auto sr = spectrum_report(src.op, ref, opt.samples, opt.seed, opt.tol);
  report["spectrum"] = spectrum_json(sr);
  const bool good = sr.verdict == SpectralVerdict::hyperbolic && sr.dichotomy && sr.simple_top &&
                    sr.top_aligned && sr.bochner_holds;
  report["verdict"] = good ? "ok" : "failed";
  return good ? ok : failed;
}

inline int cmd_bochner(const io::InputDocument& doc, const Options& opt, ojson& report) {
  const OperatorSource src = operator_source(doc);
  const auto rep = bochner_check(src.op, src.oracle, opt.samples, opt.seed, opt.tol);
  report["family"] = src.family;
  report["size"] = src.op.size();
  report["samples"] = rep.samples;
  report["seed"] = opt.seed;
  report["oracle"] = static_cast<bool>(src.oracle);
  report["min_residual"] = number(rep.min_residual);
  report["min_sampled"] = number(rep.min_sampled);
  report["min_eigenbasis"] = number(rep.min_eigenbasis);
  report["max_oracle_mismatch"] = number(rep.max_oracle_mismatch);
  report["max_expansion_mismatch"] = number(rep.max_expansion_mismatch);
  report["tol"] = rep.tol;
  report["verdict"] = rep.holds ? "holds" : "violated";
  return rep.holds ? ok : failed;
}

inline int cmd_spectrum(const io::InputDocument& doc, const Options& opt, ojson& report) {
  const OperatorSource src = operator_source(doc);
  std::optional<std::span<const double>> ref;
  if (src.reference) ref = *src.reference;
  const auto sr = spectrum_report(src.op, ref, opt.samples, opt.seed, opt.tol);
  const auto hc = hyperbolicity_check(src.op, opt.samples, opt.seed, opt.tol);
  report["family"] = src.family;
  report["size"] = src.op.size();
  report.update(spectrum_json(sr));
  ojson h{{"samples", hc.samples_drawn},
          {"accepted", hc.samples_accepted},
          {"min_residual", number(hc.min_residual)},
          {"sampled_violation", hc.sampled_violation},
          {"max_orthogonal_form", number(hc.max_orthogonal_form)}};
  if (hc.witness) h["witness"] = witness_json(*hc.witness);
  report["reverse_cs"] = h;
  return sr.verdict == SpectralVerdict::hyperbolic ? ok : failed;
}

inline int cmd_selftest(const Options& opt, ojson& report) {
  const auto results = selftest(opt.samples, opt.seed, opt.tol);
  ojson checks = ojson::array();
  bool all = true;
  for (const auto& r : results) {
    ojson c{{"name", r.name}, {"trials", r.trials}, {"passed", r.passed}};
    if (!r.passed) c["detail"] = r.detail;
    checks.push_back(c);
    all = all && r.passed;
  }
  report["checks"] = checks;
  report["verdict"] = all ? "ok" : "failed";
  return all ? ok : failed;
}

// ---------------------------------------------------------------------------
// Text rendering: "key: value" lines, nested objects indented.

inline std::string scalar_text(const ojson& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return to_string(v.get<double>());
  return v.dump();
}

inline void render_text(const ojson& obj, std::ostream& out, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (const auto& [key, v] : obj.items()) {
    if (v.is_object()) {
      out << pad << key << ":\n";
      render_text(v, out, indent + 2);
    } else if (v.is_array() && !v.empty() && v[0].is_object()) {
      out << pad << key << ":\n";
      for (const auto& e : v) {
        std::ostringstream item;
        render_text(e, item, indent + 4);
        std::string text = item.str();
        text.replace(0, pad.size() + 4, pad + "  - ");
        out << text;
      }
    } else if (v.is_array() && !v.empty() && v[0].is_array()) {
      out << pad << key << ":\n";
      for (const auto& row : v) {
        out << pad << "  ";
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << scalar_text(row[i]);
        out << "\n";
      }
    } else if (v.is_array()) {
      out << pad << key << ": [";
      for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << scalar_text(v[i]);
      out << "]\n";
    } else {
      out << pad << key << ": " << scalar_text(v) << "\n";
    }
  }
}

inline void emit(const ojson& report, const Options& opt, std::ostream& out) {
  if (opt.format == "json")
    out << report.dump() << "\n";
  else
    render_text(report, out);
}

// ---------------------------------------------------------------------------

/// Entry point: args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mixed volumes, mixed discriminants and Alexandrov-Fenchel operators", "afv"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--tol", opt.tol, "relative tolerance")->check(CLI::PositiveNumber);
  app.add_option("--format", opt.format, "output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", opt.seed, "sampling seed");
  app.add_option("--samples", opt.samples, "number of random samples");

  using Command = std::function<int(const io::InputDocument&, const Options&, ojson&)>;
  struct Entry {
    std::string name, help;
    Command fn;
  };
  const std::vector<Entry> commands{
      {"mixvol", "mixed volume of n bodies in R^n, cross-checked by polarization", cmd_mixvol},
      {"mixdisc", "mixed discriminant of m symmetric m x m matrices", cmd_mixdisc},
      {"verify-af", "Alexandrov-Fenchel inequality for K, L and n-2 reference bodies", cmd_verify_af},
      {"verify-alexandrov", "Alexandrov inequality for A, B and m-2 PSD matrices", cmd_verify_alexandrov},
      {"af-operator", "build the normalized operator of a reference body and report its spectrum",
       cmd_af_operator},
      {"bochner", "sample the Bochner inequality <Ax,Ax>_p >= <x,Ax>_p", cmd_bochner},
      {"spectrum", "spectrum, inertia and reverse Cauchy-Schwarz check of an operator", cmd_spectrum},
  };
  std::string file;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("file", file, "JSON-lines input")->required();
    sub->fallthrough();
  }
  app.add_subcommand("selftest", "run the built-in property suite")->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return bad_input;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  ojson report{{"command", name}};
  try {
    int code = ok;
    if (name == "selftest") {
      code = cmd_selftest(opt, report);
    } else {
      std::ifstream in(file);
      if (!in) throw InputError("cannot open '" + file + "'");
      const io::InputDocument doc = io::parse_document(in, file);
      for (const auto& c : commands)
        if (c.name == name) code = c.fn(doc, opt, report);
    }
    emit(report, opt, out);
    return code;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
  } catch (const PreconditionError& e) {
    err << "precondition error: " << e.what() << "\n";
  } catch (const nlohmann::json::exception& e) {
    err << "input error: " << e.what() << "\n";
  }
  return bad_input;
}

}  // namespace afv::cli

#endif  // AFV_CLI_HPP
