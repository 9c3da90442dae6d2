#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lltorus {

enum class ErrorKind {
  Domain,         // argument outside the admissible set
  PoleProximity,  // evaluation inside the guard radius of a pole
  Range,          // root or parameter pushed out of its window
  Integration,    // ODE or quadrature failure
  Singular,       // near-singular linear algebra
  Consistency,    // an internal invariant failed
  SolitonPresent,
  Overflow,
  Config,
  Io
};

const char* to_string(ErrorKind k);

// Error carrying the module that raised it plus key/value context,
// so callers (and the CLI) can report lambda, x, t etc. verbatim.
class Error : public std::runtime_error {
public:
  using Context = std::vector<std::pair<std::string, std::string>>;

  Error(ErrorKind kind, std::string module, const std::string& what, Context ctx = {});

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }
  const Context& context() const noexcept { return ctx_; }

  Error& with(const std::string& key, double v);
  Error& with(const std::string& key, std::complex<double> v);
  Error& with(const std::string& key, const std::string& v);

private:
  ErrorKind kind_;
  std::string module_;
  Context ctx_;
};

}  // namespace lltorus
