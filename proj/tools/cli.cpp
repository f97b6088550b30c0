#include "cli.hpp"

#include "wz/dsl.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <regex>
#include <sstream>

namespace wz::cli {

namespace {

using nlohmann::json;

struct InputError : Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot read file");
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Parsed parse_file(const std::string& path, bool q) {
  std::string text = read_file(path);
  try {
    return parse(text, ParseOptions{q});
  } catch (const ParseError& e) {
    throw InputError(path + ":" + e.what());
  }
}

Certificate read_certificate_file(const std::string& path) {
  std::string bytes = read_file(path);
  try {
    return read_certificate(bytes);
  } catch (const CertificateError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::size_t unknowns_cap(const CLI::Option* flag, std::size_t value) {
  if (flag->count() > 0) {
    if (value == 0) throw InputError("--max-unknowns must be positive");
    return value;
  }
  const char* env = std::getenv("TELESCOPE_MAX_UNKNOWNS");
  if (env == nullptr || *env == '\0') return TelescopeBudget{}.max_unknowns;
  std::string_view s(env);
  std::size_t cap = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), cap);
  if (ec != std::errc() || ptr != s.data() + s.size() || cap == 0) {
    throw InputError("TELESCOPE_MAX_UNKNOWNS must be a positive integer");
  }
  return cap;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path + ": cannot write file");
  out << bytes;
  if (!out) throw InputError(path + ": cannot write file");
}

struct ProveOptions {
  std::string file;
  bool q = false;
  std::size_t max_unknowns = 0;
  std::string out_path;
  std::string format = "text";
};

struct Outcome {
  ExitStatus status = ExitStatus::ok;
  std::string certificate;  // file contents, when one was found
  std::string text;
  json verdict;
};

template <class Cert>
Outcome proven(const Cert& c, const std::string& text) {
  Outcome o;
  o.certificate = write_certificate(c);
  o.text = text;
  o.verdict = json{{"status", "proven"}, {"text", text}};
  return o;
}

Outcome not_found(const NotFound& nf) {
  Outcome o;
  o.status = ExitStatus::not_found;
  o.text = "not found: " + nf.reason;
  o.verdict = json{{"status", "not_found"}, {"reason", nf.reason}, {"steps", nf.steps}};
  return o;
}

Outcome from_proof(const ProofResult& r) {
  if (const auto* nf = std::get_if<NotFound>(&r)) return not_found(*nf);
  if (const auto* ref = std::get_if<Refutation>(&r)) {
    Outcome o;
    o.status = ExitStatus::refuted;
    o.text = ref->text;
    o.verdict = json{{"status", "refuted"}, {"index", ref->index}, {"lhs", ref->lhs}, {"rhs", ref->rhs}, {"text", ref->text}};
    return o;
  }
  const Proof& p = std::get<Proof>(r);
  Outcome o = p.certificate ? proven(*p.certificate, p.text) : proven(*p.q_certificate, p.text);
  o.verdict["recurrence"] = p.recurrence.to_string();
  o.verdict["checked_upto"] = p.checked_upto;
  return o;
}

ExitStatus prove_command(const ProveOptions& opt, std::size_t cap, std::ostream& out) {
  TelescopeBudget budget;
  budget.max_unknowns = cap;
  Parsed parsed = parse_file(opt.file, opt.q);
  Outcome o;
  if (const auto* st = std::get_if<IdentityStatement>(&parsed)) {
    o = from_proof(prove_identity(*st, budget));
  } else if (const auto* st = std::get_if<QIdentityStatement>(&parsed)) {
    o = from_proof(prove_identity(*st, budget));
  } else if (const auto* f = std::get_if<HyperTerm>(&parsed)) {
    auto r = creative_telescope(*f, budget);
    if (const auto* nf = std::get_if<NotFound>(&r)) {
      o = not_found(*nf);
    } else {
      const auto& c = std::get<TelescopeCertificate>(r);
      o = proven(c, certificate_text(*f, c));
    }
  } else {
    const auto& qf = std::get<QHyperTerm>(parsed);
    auto r = q_creative_telescope(qf, budget);
    if (const auto* nf = std::get_if<NotFound>(&r)) {
      o = not_found(*nf);
    } else {
      const auto& c = std::get<QTelescopeCertificate>(r);
      o = proven(c, certificate_text(qf, c));
    }
  }
  if (!opt.out_path.empty() && !o.certificate.empty()) write_file(opt.out_path, o.certificate);
  if (opt.format == "json") {
    json doc = o.certificate.empty() ? json::object() : json::parse(o.certificate);
    doc["verdict"] = o.verdict;
    out << format_json(doc.dump());
  } else {
    out << o.text << "\n";
  }
  return o.status;
}

ExitStatus verify_command(const std::string& idfile, const std::string& certfile, std::ostream& out) {
  Certificate cert = read_certificate_file(certfile);
  bool q = std::holds_alternative<QTelescopeCertificate>(cert);
  Parsed parsed = parse_file(idfile, q);
  Verdict v;
  try {
    if (q) {
      const QHyperTerm* f = std::get_if<QHyperTerm>(&parsed);
      if (const auto* st = std::get_if<QIdentityStatement>(&parsed)) f = &st->lhs;
      if (f == nullptr) throw InputError(idfile + ": expected a q-summand for a q certificate");
      v = q_verify(*f, std::get<QTelescopeCertificate>(cert));
    } else {
      const HyperTerm* f = std::get_if<HyperTerm>(&parsed);
      if (const auto* st = std::get_if<IdentityStatement>(&parsed)) f = &st->lhs;
      if (f == nullptr) throw InputError(idfile + ": expected a classical summand for a classical certificate");
      v = verify(*f, std::get<TelescopeCertificate>(cert));
    }
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    out << "invalid: " << e.what() << "\n";
    return ExitStatus::refuted;
  }
  out << v.trace << "\n";
  return v.valid ? ExitStatus::ok : ExitStatus::refuted;
}

WZTuple tuple_of(const TelescopeCertificate& c) {
  bool cont = c.term.signature().outer_continuous;
  std::optional<BigRational> unit;
  if (c.p.size() == 2 && c.p[0].is_constant() && c.p[1].is_constant()) {
    BigRational a0 = c.p[0].constant_term(), a1 = c.p[1].constant_term();
    if (a1 != 0 && (cont ? a0 == 0 : a0 == -a1)) unit = a1;
  }
  if (!unit) {
    throw InputError(std::string("certificate operator is not a unit multiple of ") + (cont ? "D_x" : "N - 1"));
  }
  RatFun scale = RatFun::constant(c.term.ring(), 1 / *unit);
  WZTuple t{c.term, {}, {}};
  for (const auto& [k, r] : c.r) t.g.emplace(k, r * scale);
  for (const auto& [y, s] : c.s) t.h.emplace(y, s * scale);
  return t;
}

ExitStatus companion_command(const std::string& certfile, const std::string& keep, std::ostream& out) {
  Certificate cert = read_certificate_file(certfile);
  if (!std::holds_alternative<TelescopeCertificate>(cert)) {
    throw InputError(certfile + ": companion identities need a classical certificate");
  }
  WZTuple t = tuple_of(std::get<TelescopeCertificate>(cert));
  Verdict v = verify_wz_tuple(t);
  if (!v.valid) {
    out << v.trace << "\n";
    return ExitStatus::refuted;
  }
  Companion c;
  try {
    c = companion(t, keep);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  std::istringstream lines(c.text);
  for (std::string line; std::getline(lines, line);) out << "# " << line << "\n";
  if (!c.from_zero.empty()) out << "# " << c.from_zero << " runs from 0\n";
  out << render(c.statement);
  return ExitStatus::ok;
}

std::pair<long, long> parse_range(const std::string& text) {
  static const std::regex re(R"(^(-?[0-9]+)\.\.(-?[0-9]+)$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw InputError("--range expects a..b, got '" + text + "'");
  try {
    long lo = std::stol(m[1]), hi = std::stol(m[2]);
    if (lo > hi) throw InputError("--range is empty: " + text);
    return {lo, hi};
  } catch (const std::out_of_range&) {
    throw InputError("--range bounds out of range: " + text);
  }
}

Assignment parse_assignments(const std::vector<std::string>& items) {
  Assignment a;
  for (const auto& item : items) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw InputError("--assign expects sym=rational, got '" + item + "'");
    std::string value = item.substr(eq + 1);
    try {
      a[item.substr(0, eq)] = parse_rational(value);
    } catch (const std::exception&) {
      throw InputError("--assign: malformed rational '" + value + "'");
    }
  }
  return a;
}

ExitStatus check_command(const std::string& idfile, const std::string& range, const std::vector<std::string>& assigns,
                         std::ostream& out) {
  auto [lo, hi] = parse_range(range);
  Assignment params = parse_assignments(assigns);
  Parsed parsed = parse_file(idfile, false);
  NumericReport report;
  try {
    if (const auto* st = std::get_if<IdentityStatement>(&parsed)) {
      report = numeric_check(*st, lo, hi, params);
    } else if (const auto* st = std::get_if<QIdentityStatement>(&parsed)) {
      report = numeric_check(*st, lo, hi, params);
    } else {
      throw InputError(idfile + ": expected an identity (lhs = rhs)");
    }
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  out << report.to_string() << "\n";
  return report.all_equal() ? ExitStatus::ok : ExitStatus::refuted;
}

}  // namespace

ExitStatus run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact WZ certificates for hypergeometric sums and integrals", "wzcert"};
  app.require_subcommand(1);

  ProveOptions prove;
  auto* prove_cmd = app.add_subcommand("prove", "find a certificate; prove or refute an identity");
  prove_cmd->add_option("file", prove.file, "identity or summand file")->required();
  prove_cmd->add_flag("--q", prove.q, "read the file as a q-term");
  auto* cap_flag = prove_cmd->add_option("--max-unknowns", prove.max_unknowns, "ansatz size cap");
  prove_cmd->add_option("--out", prove.out_path, "write the certificate here");
  prove_cmd->add_option("--format", prove.format, "text or json")->check(CLI::IsMember({"text", "json"}));

  std::string idfile, certfile;
  auto* verify_cmd = app.add_subcommand("verify", "check a certificate against a summand");
  verify_cmd->add_option("idfile", idfile, "identity or summand file")->required();
  verify_cmd->add_option("certfile", certfile, "certificate file")->required();

  std::string keep;
  auto* companion_cmd = app.add_subcommand("companion", "companion identity of a WZ certificate");
  companion_cmd->add_option("certfile", certfile, "certificate file")->required();
  companion_cmd->add_option("--keep", keep, "variable left free")->required();

  std::string range;
  std::vector<std::string> assigns;
  auto* check_cmd = app.add_subcommand("check", "compare both sides exactly on a range");
  check_cmd->add_option("idfile", idfile, "identity file")->required();
  check_cmd->add_option("--range", range, "outer values a..b")->required();
  check_cmd->add_option("--assign", assigns, "parameter values sym=rational")->take_all();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? ExitStatus::ok : ExitStatus::input_error;
  }

  try {
    if (prove_cmd->parsed()) return prove_command(prove, unknowns_cap(cap_flag, prove.max_unknowns), out);
    if (verify_cmd->parsed()) return verify_command(idfile, certfile, out);
    if (companion_cmd->parsed()) return companion_command(certfile, keep, out);
    return check_command(idfile, range, assigns, out);
  } catch (const std::exception& e) {
    err << "wzcert: " << e.what() << "\n";
    return ExitStatus::input_error;
  }
}

}  // namespace wz::cli
