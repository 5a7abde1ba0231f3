#pragma once

#include <string>

namespace nbreg {

enum class Link { Log, Identity, Sqrt };

struct LinkEval {
  double mu;      // inverse link g^-1(eta)
  double d;       // dmu/deta
  double dprime;  // d2mu/deta2
};

// Evaluate the mean and its first two derivatives at a linear predictor
// value. Throws DomainError when eta is outside the admissible range
// (identity and sqrt require eta > 0) or mu is not finite.
LinkEval link_eval(Link link, double eta);

// g(mu); used for starting values.
double link_apply(Link link, double mu);

const char* to_string(Link link);
Link link_from_string(const std::string& name);

}  // namespace nbreg
