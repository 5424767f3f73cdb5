#include "stepstress/schemes.hpp"

#include <cctype>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace stepstress {

CensoringScheme::CensoringScheme(std::size_t n_, std::vector<int> removals_)
    : n(n_), removals(std::move(removals_)) {
  if (removals.empty() || removals.size() > n)
    throw std::invalid_argument("scheme: need 1 <= r <= n");
  long long total = 0;
  long long alive = static_cast<long long>(n);
  for (int rk : removals) {
    if (rk < 0) throw std::invalid_argument("scheme: removals must be nonnegative");
    total += rk;
    alive -= rk + 1;  // the failure itself plus R_k withdrawals
    if (alive < 0)
      throw std::invalid_argument("scheme: removals exceed surviving units");
  }
  if (static_cast<std::size_t>(total) != n - removals.size())
    throw std::invalid_argument(
        "scheme: removals must sum to n - r = " +
        std::to_string(n - removals.size()));
}

bool CensoringScheme::is_type2() const {
  for (std::size_t k = 0; k + 1 < removals.size(); ++k)
    if (removals[k] != 0) return false;
  return true;
}

bool CensoringScheme::is_complete() const {
  return r() == n;
}

namespace {

struct Parser {
  const std::string& text;
  std::size_t pos = 0;

  explicit Parser(const std::string& t) : text(t) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("scheme parse error at position " +
                                std::to_string(pos) + ": " + what);
  }

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  void skip_ws() {
    while (!done() && (peek() == ' ' || peek() == '\t')) ++pos;
  }

  long parse_int() {
    skip_ws();
    if (done() || !std::isdigit(static_cast<unsigned char>(peek())))
      fail("expected an integer");
    long v = 0;
    while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (peek() - '0');
      if (v > 1000000) fail("integer too large");
      ++pos;
    }
    return v;
  }

  bool accept(char c) {
    skip_ws();
    if (!done() && peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
};

}  // namespace

CensoringScheme parse_scheme(const std::string& text, std::size_t n) {
  Parser p(text);
  std::vector<int> removals;
  while (true) {
    const long first = p.parse_int();
    if (p.accept('*')) {
      if (p.accept('(')) {
        std::vector<int> tuple;
        tuple.push_back(static_cast<int>(p.parse_int()));
        while (p.accept(',')) tuple.push_back(static_cast<int>(p.parse_int()));
        p.expect(')');
        for (long c = 0; c < first; ++c)
          removals.insert(removals.end(), tuple.begin(), tuple.end());
      } else {
        const long v = p.parse_int();
        for (long c = 0; c < first; ++c) removals.push_back(static_cast<int>(v));
      }
    } else {
      removals.push_back(static_cast<int>(first));
    }
    p.skip_ws();
    if (p.done()) break;
    p.expect(',');
  }
  return CensoringScheme(n, std::move(removals));
}

std::string render_scheme(const CensoringScheme& scheme) {
  std::string out;
  std::size_t k = 0;
  const auto& rv = scheme.removals;
  while (k < rv.size()) {
    std::size_t run = 1;
    while (k + run < rv.size() && rv[k + run] == rv[k]) ++run;
    if (!out.empty()) out += ',';
    if (run >= 2)
      out += std::to_string(run) + "*" + std::to_string(rv[k]);
    else
      out += std::to_string(rv[k]);
    k += run;
  }
  return out;
}

double normalization_constant_log(const CensoringScheme& scheme) {
  const std::size_t r = scheme.r();
  double log_c = 0.0;
  long long tail = 0;  // sum_{k=j..r} (R_k + 1), built from the right
  std::vector<double> terms(r);
  for (std::size_t j = r; j-- > 0;) {
    tail += scheme.removals[j] + 1;
    terms[j] = std::log(static_cast<double>(tail));
  }
  for (double t : terms) log_c += t;
  return log_c;
}

}  // namespace stepstress
