#include "nbreg/dispersion.hpp"

#include <cmath>

#include "nbreg/errors.hpp"

namespace nbreg {

DispEval disp_eval(DispersionTransform t, double phi) {
  if (!std::isfinite(phi)) throw DomainError("dispersion parameter is not finite");
  switch (t) {
    case DispersionTransform::Identity:
      if (phi <= 0.0) throw DomainError("identity transform requires phi > 0");
      return {phi, 1.0, 0.0};
    case DispersionTransform::Log: {
      double k = std::exp(phi);
      if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("log transform under/overflow");
      return {k, k, k};
    }
    case DispersionTransform::Inverse:
      if (phi <= 0.0) throw DomainError("inverse transform requires phi > 0");
      return {1.0 / phi, -1.0 / (phi * phi), 2.0 / (phi * phi * phi)};
    case DispersionTransform::Sqrt:
      if (phi <= 0.0) throw DomainError("sqrt transform requires phi > 0");
      return {phi * phi, 2.0 * phi, 2.0};
  }
  throw DomainError("unknown dispersion transform");
}

double phi_from_kappa(DispersionTransform t, double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("kappa must be positive");
  switch (t) {
    case DispersionTransform::Identity: return kappa;
    case DispersionTransform::Log: return std::log(kappa);
    case DispersionTransform::Inverse: return 1.0 / kappa;
    case DispersionTransform::Sqrt: return std::sqrt(kappa);
  }
  throw DomainError("unknown dispersion transform");
}

const char* to_string(DispersionTransform t) {
  switch (t) {
    case DispersionTransform::Identity: return "identity";
    case DispersionTransform::Log: return "log";
    case DispersionTransform::Inverse: return "inverse";
    case DispersionTransform::Sqrt: return "sqrt";
  }
  return "?";
}

DispersionTransform transform_from_string(const std::string& name) {
  if (name == "identity") return DispersionTransform::Identity;
  if (name == "log") return DispersionTransform::Log;
  if (name == "inverse") return DispersionTransform::Inverse;
  if (name == "sqrt") return DispersionTransform::Sqrt;
  throw InputError("unknown dispersion transform '" + name +
                   "' (expected identity, log, inverse or sqrt)");
}

}  // namespace nbreg
