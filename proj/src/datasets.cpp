#include "nbreg/datasets.hpp"

#include <cmath>

namespace nbreg {

SalmonellaData salmonella_data() {
  SalmonellaData data;
  data.freq.resize(18);
  data.freq << 15, 16, 16, 27, 33, 20, 21, 18, 26, 41, 38, 27, 29, 21, 33, 60, 41, 42;
  data.dose.resize(18);
  data.dose << 0, 10, 33, 100, 333, 1000, 0, 10, 33, 100, 333, 1000, 0, 10, 33, 100, 333, 1000;
  return data;
}

ModelSpec salmonella_model() {
  const SalmonellaData data = salmonella_data();
  ModelSpec spec;
  spec.y = data.freq;
  spec.X.resize(18, 3);
  for (Eigen::Index i = 0; i < 18; ++i) {
    spec.X(i, 0) = 1.0;
    spec.X(i, 1) = data.dose[i];
    spec.X(i, 2) = std::log(data.dose[i] + 10.0);
  }
  spec.m = Eigen::VectorXd::Ones(18);
  spec.link = Link::Log;
  spec.transform = DispersionTransform::Identity;
  return spec;
}

}  // namespace nbreg
