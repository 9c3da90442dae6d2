#include "lltorus/errors.hpp"

#include <sstream>

namespace lltorus {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::PoleProximity: return "pole_proximity";
    case ErrorKind::Range: return "range";
    case ErrorKind::Integration: return "integration";
    case ErrorKind::Singular: return "singular";
    case ErrorKind::Consistency: return "consistency";
    case ErrorKind::SolitonPresent: return "soliton_present";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, std::string module, const std::string& what, Context ctx)
    : std::runtime_error(what), kind_(kind), module_(std::move(module)), ctx_(std::move(ctx)) {}

static std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

Error& Error::with(const std::string& key, double v) {
  ctx_.emplace_back(key, fmt(v));
  return *this;
}

Error& Error::with(const std::string& key, std::complex<double> v) {
  ctx_.emplace_back(key, fmt(v.real()) + (v.imag() < 0 ? "" : "+") + fmt(v.imag()) + "i");
  return *this;
}

Error& Error::with(const std::string& key, const std::string& v) {
  ctx_.emplace_back(key, v);
  return *this;
}

}  // namespace lltorus
