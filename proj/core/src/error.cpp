#include "switchexit/error.hpp"

#include <sstream>
#include <utility>

namespace switchexit {

ParseError::ParseError(std::size_t offset, const std::string& what)
    : Error("syntax error at offset " + std::to_string(offset) + ": " + what), offset_(offset) {}

namespace {

std::string domain_message(const std::string& node, double x) {
  std::ostringstream os;
  os.precision(17);
  os << "evaluation domain error in '" << node << "' at x = " << x;
  return os.str();
}

std::string assumption_message(const std::string& assumption, double witness,
                               const std::string& detail) {
  std::ostringstream os;
  os.precision(17);
  os << "model assumption '" << assumption << "' violated at x = " << witness;
  if (!detail.empty()) os << ": " << detail;
  return os.str();
}

}  // namespace

DomainError::DomainError(std::string node, double x)
    : Error(domain_message(node, x)), node_(std::move(node)), x_(x) {}

AssumptionError::AssumptionError(std::string assumption, double witness,
                                 const std::string& detail)
    : Error(assumption_message(assumption, witness, detail)),
      assumption_(std::move(assumption)),
      witness_(witness) {}

ConfigError::ConfigError(std::string field, const std::string& reason)
    : Error(field + ": " + reason), field_(std::move(field)) {}

}  // namespace switchexit
