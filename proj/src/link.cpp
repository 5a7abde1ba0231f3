#include "nbreg/link.hpp"

#include <cmath>

#include "nbreg/errors.hpp"

namespace nbreg {

LinkEval link_eval(Link link, double eta) {
  if (!std::isfinite(eta)) throw DomainError("linear predictor is not finite");
  switch (link) {
    case Link::Log: {
      double mu = std::exp(eta);
      if (!std::isfinite(mu)) throw DomainError("log link overflow: eta too large");
      return {mu, mu, mu};
    }
    case Link::Identity:
      if (eta <= 0.0) throw DomainError("identity link requires eta > 0");
      return {eta, 1.0, 0.0};
    case Link::Sqrt:
      if (eta <= 0.0) throw DomainError("sqrt link requires eta > 0");
      return {eta * eta, 2.0 * eta, 2.0};
  }
  throw DomainError("unknown link");
}

double link_apply(Link link, double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("link requires mu > 0");
  switch (link) {
    case Link::Log: return std::log(mu);
    case Link::Identity: return mu;
    case Link::Sqrt: return std::sqrt(mu);
  }
  throw DomainError("unknown link");
}

const char* to_string(Link link) {
  switch (link) {
    case Link::Log: return "log";
    case Link::Identity: return "identity";
    case Link::Sqrt: return "sqrt";
  }
  return "?";
}

Link link_from_string(const std::string& name) {
  if (name == "log") return Link::Log;
  if (name == "identity") return Link::Identity;
  if (name == "sqrt") return Link::Sqrt;
  throw InputError("unknown link '" + name + "' (expected log, identity or sqrt)");
}

}  // namespace nbreg
