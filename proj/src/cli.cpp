#include "qset/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "qset/evaluator.hpp"
#include "qset/random.hpp"

namespace qset::cli {

namespace {

using nlohmann::ordered_json;
using lang::Session;
using lang::SourceError;
using lang::StatementResult;

struct Style {
  bool on;
  std::string green(const std::string& s) const { return on ? "\033[32m" + s + "\033[0m" : s; }
  std::string red(const std::string& s) const { return on ? "\033[31m" + s + "\033[0m" : s; }
  std::string bold(const std::string& s) const { return on ? "\033[1m" + s + "\033[0m" : s; }
};

std::size_t line_of(std::string_view source, std::size_t offset) {
  offset = std::min(offset, source.size());
  return 1 + static_cast<std::size_t>(std::count(source.begin(), source.begin() + offset, '\n'));
}

bool read_input(const RunConfig& config, std::istream& in, std::string& source, std::ostream& err) {
  if (config.input_path.empty()) {
    err << "qset: missing input file\n";
    return false;
  }
  if (config.input_path == "-") {
    std::ostringstream buf;
    buf << in.rdbuf();
    source = buf.str();
    return true;
  }
  std::ifstream file(config.input_path, std::ios::binary);
  if (!file) {
    err << config.input_path << ":1:1: error: cannot read file\n";
    return false;
  }
  std::ostringstream buf;
  buf << file.rdbuf();
  source = buf.str();
  return true;
}

lang::SessionOptions session_options(const RunConfig& config) {
  lang::SessionOptions options;
  options.limits.algebra = config.caps;
  options.audit.algebra = config.caps;
  options.default_depth = config.depth;
  return options;
}

ordered_json value_json(const Session& session, const lang::Value& value) {
  ordered_json j;
  j["type"] = std::string(lang::type_name(value));
  if (const auto* report = std::get_if<lang::Report>(&value)) {
    j["value"] = report->data;
  } else if (const auto* fragment = std::get_if<Fragment>(&value)) {
    j["value"] = to_json(*fragment, session.vocabulary());
  } else if (const auto* b = std::get_if<bool>(&value)) {
    j["value"] = *b;
  } else if (const auto* n = std::get_if<Count>(&value)) {
    j["value"] = *n;
  } else {
    j["value"] = session.render(value);
  }
  return j;
}

int report_error(const SourceError& e, std::string_view source, const RunConfig& config, std::ostream& err) {
  err << lang::format_diagnostic(e, source, config.input_path == "-" ? "<stdin>" : config.input_path);
  return kError;
}

int run_eval(const RunConfig& config, std::istream& in, std::ostream& out, std::ostream& err) {
  std::string source;
  if (!read_input(config, in, source, err)) return kError;
  Session session(session_options(config));
  Style style{config.color && config.format == Format::text};
  ordered_json results = ordered_json::array();
  std::ostringstream text;
  try {
    lang::Program program = lang::parse(source);
    for (const auto& stmt : program.statements) {
      StatementResult r = session.execute(stmt);
      std::size_t line = line_of(source, r.span.begin);
      if (r.kind == StatementResult::Kind::decl) continue;
      if (config.format == Format::json) {
        ordered_json j;
        j["line"] = line;
        j["kind"] = r.kind == StatementResult::Kind::check ? "check" : r.kind == StatementResult::Kind::let ? "let" : "value";
        if (r.kind == StatementResult::Kind::let) j["name"] = r.name;
        if (r.kind == StatementResult::Kind::check) {
          j["passed"] = r.passed;
        } else {
          ordered_json value = value_json(session, *r.value);
          for (auto& [k, v] : value.items()) j[k] = v;
        }
        results.push_back(std::move(j));
        continue;
      }
      switch (r.kind) {
        case StatementResult::Kind::check:
          text << (r.passed ? style.green("PASS") : style.red("FAIL")) << " check at line " << line << "\n";
          break;
        case StatementResult::Kind::let: text << r.name << " = " << session.render(*r.value) << "\n"; break;
        default: text << session.render(*r.value) << "\n"; break;
      }
    }
  } catch (const SourceError& e) {
    if (config.format == Format::text) out << text.str();
    return report_error(e, source, config, err);
  } catch (const Error& e) {
    if (config.format == Format::text) out << text.str();
    err << config.input_path << ": error: " << e.what() << "\n";
    return kError;
  }
  if (config.format == Format::json) {
    ordered_json doc;
    doc["schema"] = "qset/1";
    doc["mode"] = "eval";
    doc["results"] = std::move(results);
    doc["checks"] = {{"passed", session.checks_passed()}, {"failed", session.checks_failed()}};
    out << doc.dump(2) << "\n";
  } else {
    out << text.str();
    out << style.bold("checks: " + std::to_string(session.checks_passed()) + " passed, " +
                      std::to_string(session.checks_failed()) + " failed")
        << "\n";
  }
  return session.checks_failed() == 0 ? kOk : kChecksFailed;
}

std::string describe(const Defect& d, const Vocabulary& vocab) {
  std::string s = d.construct + "(";
  for (std::size_t i = 0; i < d.witnesses.size(); ++i) {
    if (i > 0) s += ", ";
    s += render(d.witnesses[i], vocab);
  }
  s += ")";
  if (d.missing) s += " -> " + render(*d.missing, vocab);
  if (!d.note.empty()) s += " [" + d.note + "]";
  return s;
}

void print_defects(std::ostream& out, const std::string& title, const std::vector<Defect>& defects, Count checked,
                   const Vocabulary& vocab) {
  constexpr std::size_t kShown = 8;
  out << "  " << title << ": " << defects.size() << " defects in " << checked << " checks\n";
  for (std::size_t i = 0; i < defects.size() && i < kShown; ++i) out << "    " << describe(defects[i], vocab) << "\n";
  if (defects.size() > kShown) out << "    ... " << defects.size() - kShown << " more\n";
}

int run_audit(const RunConfig& config, std::istream& in, std::ostream& out, std::ostream& err) {
  std::string source;
  if (!read_input(config, in, source, err)) return kError;
  Session session(session_options(config));
  Style style{config.color && config.format == Format::text};
  struct Audited {
    std::size_t line;
    std::string name;
    Fragment fragment;
    ClosureReport report;
  };
  std::vector<Audited> audited;
  try {
    lang::Program program = lang::parse(source);
    for (const auto& stmt : program.statements) {
      StatementResult r = session.execute(stmt);
      if (!r.value) continue;
      if (const auto* f = std::get_if<Fragment>(&*r.value)) {
        audited.push_back({line_of(source, r.span.begin), r.name, *f, check_qed(*f, session.options().audit)});
      }
    }
  } catch (const SourceError& e) {
    return report_error(e, source, config, err);
  } catch (const Error& e) {
    err << config.input_path << ": error: " << e.what() << "\n";
    return kError;
  }
  if (audited.empty()) {
    err << config.input_path << ":1:1: error: script builds no fragment (use build(...))\n";
    return kError;
  }

  std::size_t unexplained = 0;
  for (const auto& a : audited) unexplained += a.report.unexplained_theorem1();
  const Vocabulary& vocab = session.vocabulary();

  if (config.format == Format::json) {
    ordered_json doc;
    doc["schema"] = "qset/1";
    doc["mode"] = "audit";
    ordered_json fragments = ordered_json::array();
    for (const auto& a : audited) {
      ordered_json j;
      j["line"] = a.line;
      if (!a.name.empty()) j["name"] = a.name;
      ordered_json fragment_json = to_json(a.fragment, vocab);
      for (auto& [k, v] : fragment_json.items()) j[k] = v;
      ordered_json report_json = to_json(a.report, vocab);
      for (auto& [k, v] : report_json.items()) j[k] = v;
      fragments.push_back(std::move(j));
    }
    doc["fragments"] = std::move(fragments);
    doc["checks"] = {{"passed", session.checks_passed()}, {"failed", session.checks_failed()}};
    doc["unexplained_theorem1"] = unexplained;
    out << doc.dump(2) << "\n";
  } else {
    for (const auto& a : audited) {
      out << style.bold("fragment" + (a.name.empty() ? "" : " " + a.name) + " at line " + std::to_string(a.line)) << ": "
          << a.fragment.elements().distinct() << " element forms, qcard " << a.fragment.elements().qcard() << ", depth "
          << a.fragment.depth() << ", " << a.fragment.cutoffs() << " cutoffs\n";
      print_defects(out, "cond1 power", a.report.cond1, a.report.checked1, vocab);
      print_defects(out, "cond2 singleton", a.report.cond2, a.report.checked2, vocab);
      print_defects(out, "cond3 product", a.report.cond3, a.report.checked3, vocab);
      print_defects(out, "cond4 union", a.report.cond4, a.report.checked4, vocab);
      print_defects(out, "theorem1", a.report.theorem1, a.report.checked_theorem1, vocab);
      std::size_t u = a.report.unexplained_theorem1();
      out << "  theorem1 unexplained: " << (u == 0 ? style.green("0") : style.red(std::to_string(u))) << "\n";
    }
    out << "checks: " << session.checks_passed() << " passed, " << session.checks_failed() << " failed\n";
  }
  return session.checks_failed() == 0 && unexplained == 0 ? kOk : kChecksFailed;
}

/// Exhaustive quasi-functions between flat qsets of qcard <= 2 over two kinds,
/// then `samples` random composable chains f: A -> B, g: B -> C, h: C -> D at
/// qcard <= 5.
std::vector<QuasiFunction> law_sample(Count samples, std::uint64_t seed, std::size_t& exhaustive) {
  Vocabulary vocab;
  Alphabet flat{{vocab.declare_kind("K"), vocab.declare_kind("J")}, {}};
  std::vector<QSet> small = all_flat_qsets(flat, 2);
  std::vector<QuasiFunction> out;
  for (const auto& a : small) {
    for (const auto& b : small) {
      auto fs = all_qfuns(a, b);
      out.insert(out.end(), fs.begin(), fs.end());
    }
  }
  exhaustive = out.size();

  Alphabet rich{flat.kinds, {vocab.declare_catom("A")}};
  QSetShape shape{5, 1, 20, 0};
  Rng rng(seed);
  auto nonempty = [&] {
    QSet s;
    do s = random_qset(rng, rich, shape);
    while (s.empty());
    return s;
  };
  for (Count i = 0; i < samples; ++i) {
    QSet a = nonempty(), b = nonempty(), c = nonempty(), d = nonempty();
    out.push_back(random_qfun(rng, a, b));
    out.push_back(random_qfun(rng, b, c));
    out.push_back(random_qfun(rng, c, d));
  }
  return out;
}

int run_laws(const RunConfig& config, std::ostream& out) {
  std::size_t exhaustive = 0;
  std::vector<QuasiFunction> sample = law_sample(config.samples, config.seed, exhaustive);
  LawReport report = check_category_laws(std::span(sample).first(exhaustive), config.seed);
  for (std::size_t at = exhaustive; at + 3 <= sample.size(); at += 3) {
    LawReport chain = check_category_laws(std::span(sample).subspan(at, 3), config.seed);
    report.triples_checked += chain.triples_checked;
    report.identity_checks += chain.identity_checks;
    for (auto v : chain.violations) {
      for (auto& i : v.indices) i += at;
      report.violations.push_back(std::move(v));
    }
  }
  if (config.format == Format::json) {
    ordered_json doc;
    doc["schema"] = "qset/1";
    doc["mode"] = "laws";
    doc["seed"] = config.seed;
    doc["samples"] = config.samples;
    doc["functions"] = {{"exhaustive", exhaustive}, {"sampled", sample.size() - exhaustive}};
    ordered_json body = to_json(report);
    for (auto& [k, v] : body.items()) doc[k] = v;
    out << doc.dump(2) << "\n";
  } else {
    Style style{config.color};
    out << "functions: " << sample.size() << " (" << exhaustive << " exhaustive, " << sample.size() - exhaustive
        << " from " << config.samples << " random chains)\n";
    out << "triples checked: " << report.triples_checked << "\n";
    out << "identity checks: " << report.identity_checks << "\n";
    std::string v = "violations: " + std::to_string(report.violations.size());
    out << (report.violations.empty() ? style.green(v) : style.red(v)) << "\n";
    for (const auto& viol : report.violations) {
      out << "  " << viol.law << " at";
      for (auto i : viol.indices) out << " " << i;
      out << "\n";
    }
  }
  return report.violations.empty() ? kOk : kChecksFailed;
}

int run_repl(const RunConfig& config, std::istream& in, std::ostream& out, std::ostream& err, bool interactive) {
  Session session(session_options(config));
  std::string line;
  bool had_error = false;
  while (true) {
    if (interactive) out << "qset> " << std::flush;
    if (!std::getline(in, line)) break;
    try {
      for (const auto& r : session.run(line)) {
        if (r.kind == StatementResult::Kind::decl) continue;
        if (r.kind == StatementResult::Kind::check) {
          out << (r.passed ? "PASS" : "FAIL") << "\n";
        } else if (r.kind == StatementResult::Kind::let) {
          out << r.name << " = " << session.render(*r.value) << "\n";
        } else {
          out << session.render(*r.value) << "\n";
        }
      }
    } catch (const SourceError& e) {
      err << lang::format_diagnostic(e, line, "<repl>");
      had_error = true;
    } catch (const Error& e) {
      err << "<repl>: error: " << e.what() << "\n";
      had_error = true;
    }
  }
  if (interactive) out << "\n";
  if (had_error) return kError;
  return session.checks_failed() == 0 ? kOk : kChecksFailed;
}

}  // namespace

int run(const RunConfig& config, std::istream& in, std::ostream& out, std::ostream& err) {
  if (config.caps.power_operand > kMaxCapPower || config.caps.product_result > kMaxCapProduct) {
    err << "qset: caps exceed hard limits (power <= " << kMaxCapPower << ", product <= " << kMaxCapProduct << ")\n";
    return kError;
  }
  switch (config.mode) {
    case Mode::eval: return run_eval(config, in, out, err);
    case Mode::audit: return run_audit(config, in, out, err);
    case Mode::laws: return run_laws(config, out);
    case Mode::repl: return run_repl(config, in, out, err, config.interactive);
  }
  return kError;
}

}  // namespace qset::cli
