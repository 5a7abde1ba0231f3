#pragma once

#include <string>

namespace nbreg {

// Reparameterizations of the dispersion kappa. The fitted parameter is phi;
// kappa(phi) must stay positive with a monotone map on the admissible range.
enum class DispersionTransform { Identity, Log, Inverse, Sqrt };

struct DispEval {
  double kappa;         // kappa(phi) > 0
  double kprime;        // d kappa / d phi, constant sign
  double kdoubleprime;  // d2 kappa / d phi2
};

// Throws DomainError when kappa(phi) would be nonpositive or not finite.
DispEval disp_eval(DispersionTransform t, double phi);

// phi(kappa), the inverse map.
double phi_from_kappa(DispersionTransform t, double kappa);

const char* to_string(DispersionTransform t);
DispersionTransform transform_from_string(const std::string& name);

}  // namespace nbreg
