#pragma once

#include "wz/identity.hpp"

#include <string>
#include <string_view>
#include <variant>

namespace wz {

/// Byte range [begin, end) of the input; line and column (1-based) locate begin.
struct SourceSpan {
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Syntax or semantic error. what() is "line:column: message".
class ParseError : public Error {
 public:
  ParseError(const SourceSpan& span, const std::string& message);
  const SourceSpan& span() const { return span_; }
  const std::string& message() const { return message_; }

 private:
  SourceSpan span_;
  std::string message_;
};

struct ParseOptions {
  bool q = false;  // force a q-term; otherwise qpoch/qpow/qbin select it
};

using Parsed = std::variant<IdentityStatement, QIdentityStatement, HyperTerm, QHyperTerm>;

/// Grammar:
///
///   statement := decl* let* binders product ("=" rhs)? ";"?
///   decl      := "param" ids ";" | "cont" ids ";" | "outer" id ";"
///   let       := "let" id "=" product ";"
///   binders   := ("sum(" ids ")")? ("int(" ids ")")?
///   rhs       := ("+"|"-")? binders product (("+"|"-") binders product)*
///
/// Factors of a product: factorial(lin), gamma(lin), pochhammer(lin, lin),
/// binom(lin, lin), base^lin, exp(rat), qpoch(base*q^lin, lin),
/// qbin(lin, lin), qpow(quadratic) and rational expressions; gamma-like
/// factors take integer powers. "param none;" declares no parameters. The
/// outer variable is the first free symbol of the left side unless declared;
/// sum variables are discrete, int variables and cont symbols continuous.
/// Without "=" the result is the summand alone.
Parsed parse(std::string_view text, const ParseOptions& options = {});

/// Canonical text; parse(render(x)) == x for terms built by the parser.
std::string render(const HyperTerm& t);
std::string render(const QHyperTerm& t);
std::string render(const IdentityStatement& s);
std::string render(const QIdentityStatement& s);
/// The product of factors alone, as it appears after the binders.
std::string render_product(const HyperTerm& t);
std::string render_product(const QHyperTerm& t);

/// Malformed certificate file; path() is a JSON path such as
/// "$.operator[1].coeff[0].exponents".
class CertificateError : public Error {
 public:
  CertificateError(std::string path, const std::string& message);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

using Certificate = std::variant<TelescopeCertificate, QTelescopeCertificate>;

inline constexpr int certificate_format_version = 1;

std::string write_certificate(const TelescopeCertificate& c);
std::string write_certificate(const QTelescopeCertificate& c);
Certificate read_certificate(std::string_view bytes);
/// Re-lays out a JSON document as certificate files are written: containers
/// that fit in 100 columns stay on one line. Throws CertificateError on
/// malformed input.
std::string format_json(std::string_view text);

}  // namespace wz
